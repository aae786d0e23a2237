//! Reference data for the flagship 16-square surface and two small
//! surfaces, bundled at compile time.

use serde::Deserialize;

use crate::linalg::{IntMatrix, IntPolynomial};
use crate::origami::OrigamiInput;

pub const FLAGSHIP_JSON: &str = include_str!("../fixtures/flagship.json");
pub const TORUS_JSON: &str = include_str!("../fixtures/torus.json");
pub const L_SHAPE_JSON: &str = include_str!("../fixtures/l_shape.json");
const GENERATORS_JSON: &str = include_str!("../fixtures/generators.json");
const FORMS_JSON: &str = include_str!("../fixtures/forms.json");
const PINCHING_JSON: &str = include_str!("../fixtures/pinching.json");
const ARITHMETICITY_JSON: &str = include_str!("../fixtures/arithmeticity.json");
const LYAPUNOV_JSON: &str = include_str!("../fixtures/lyapunov.json");

#[derive(Clone, Debug, Deserialize)]
pub struct Generators {
    pub alpha_t: IntMatrix,
    pub alpha_s: IntMatrix,
    pub full_t: IntMatrix,
    pub full_s: IntMatrix,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Forms {
    /// Pairing on a basis of `H₁`.
    pub omega: IntMatrix,
    /// Zero-holonomy basis vectors in the coordinates of `omega`.
    pub epsilon: Vec<Vec<i64>>,
    pub holonomy: IntMatrix,
    /// Pairing restricted to the `epsilon` basis.
    pub omega0: IntMatrix,
    /// Change of basis bringing `omega0` to block form.
    pub theta: IntMatrix,
    pub theta_form: IntMatrix,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Pinching {
    pub word: String,
    pub charpoly: IntPolynomial,
    pub galois_order: u64,
    pub unipotent_word: String,
    pub unipotent_rank: usize,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Arithmeticity {
    pub w1: Vec<i64>,
    pub w2: Vec<i64>,
    pub w3: Vec<i64>,
    pub e_combination: Vec<i64>,
    pub transvections: Vec<IntMatrix>,
    pub word: String,
    pub witness: IntMatrix,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Lyapunov {
    pub exponents: Vec<f64>,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> T {
    serde_json::from_str(text).expect("bundled fixture parses")
}

pub fn flagship() -> OrigamiInput {
    parse(FLAGSHIP_JSON)
}

pub fn torus() -> OrigamiInput {
    parse(TORUS_JSON)
}

pub fn l_shape() -> OrigamiInput {
    parse(L_SHAPE_JSON)
}

pub fn generators() -> Generators {
    let raw: serde_json::Value = parse(GENERATORS_JSON);
    let m = |k: &str| serde_json::from_value(raw[k].clone()).expect("bundled fixture parses");
    Generators { alpha_t: m("alpha_T"), alpha_s: m("alpha_S"), full_t: m("full_T"), full_s: m("full_S") }
}

pub fn forms() -> Forms {
    parse(FORMS_JSON)
}

pub fn pinching() -> Pinching {
    parse(PINCHING_JSON)
}

pub fn arithmeticity() -> Arithmeticity {
    parse(ARITHMETICITY_JSON)
}

pub fn lyapunov() -> Lyapunov {
    parse(LYAPUNOV_JSON)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load() {
        assert_eq!(flagship().to_origami().unwrap().n(), 16);
        assert_eq!(torus().to_origami().unwrap().n(), 1);
        assert_eq!(generators().alpha_t.rows(), 6);
        assert_eq!(forms().omega.rows(), 8);
        assert_eq!(pinching().charpoly.degree(), Some(6));
        assert_eq!(arithmeticity().transvections.len(), 3);
        assert_eq!(lyapunov().exponents.len(), 3);
    }
}
