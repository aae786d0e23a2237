//! JSON encoding of arbitrary-precision integers: a JSON number when the
//! value fits in `i64`, a decimal string otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserializer, Serializer};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SerInt(pub BigInt);

impl serde::Serialize for SerInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize(&self.0, s)
    }
}

impl<'de> serde::Deserialize<'de> for SerInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        deserialize(d).map(SerInt)
    }
}

pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    struct V;
    impl Visitor<'_> for V {
        type Value = BigInt;
        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("an integer or a decimal string")
        }
        fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
            Ok(v.into())
        }
        fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
            Ok(v.into())
        }
        fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
            v.parse().map_err(E::custom)
        }
    }
    d.deserialize_any(V)
}

pub mod vec {
    use super::SerInt;
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().cloned().map(SerInt).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Ok(Vec::<SerInt>::deserialize(d)?.into_iter().map(|x| x.0).collect())
    }
}

pub mod vecvec {
    use super::SerInt;
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        xs.iter()
            .map(|r| r.iter().cloned().map(SerInt).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Ok(Vec::<Vec<SerInt>>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.0).collect())
            .collect())
    }
}

/// Rationals: integers as in [`serialize`], proper fractions as `"p/q"`.
pub mod rational {
    use num_rational::BigRational;
    use serde::{Serialize, Serializer};

    pub fn to_json(x: &BigRational) -> serde_json::Value {
        if x.is_integer() {
            serde_json::to_value(super::SerInt(x.to_integer())).expect("integer serializes")
        } else {
            serde_json::Value::String(x.to_string())
        }
    }

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        to_json(x).serialize(s)
    }

    pub mod vec {
        use num_rational::BigRational;
        use serde::{Serialize, Serializer};

        pub fn serialize<S: Serializer>(xs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
            xs.iter().map(super::to_json).collect::<Vec<_>>().serialize(s)
        }
    }
}
