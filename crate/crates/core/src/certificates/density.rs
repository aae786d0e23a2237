//! Zariski density from a Galois-pinching element and a unipotent element
//! whose image is not Lagrangian.

use serde::Serialize;

use super::polynomial::{galois_pinching, GaloisPinchingReport};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, IntPolynomial};
use crate::monodromy::{evaluate_word, preserves_form, MonodromyPair};

#[derive(Clone, Debug, Serialize)]
pub struct DensityCertificate {
    pub pinching_word: String,
    pub pinching_report: GaloisPinchingReport,
    pub unipotent_word: String,
    pub unipotent_rank: usize,
    pub unipotent_nontrivial: bool,
    pub unipotent_nilpotent: bool,
    /// The form vanishes on the image of `B − I`.
    pub image_isotropic: bool,
    pub image_lagrangian: bool,
    pub verdict: bool,
}

pub fn density_certificate(
    generators: &[(char, IntMatrix)],
    form: &IntMatrix,
    pinching_word: &str,
    unipotent_word: &str,
    prime_budget: usize,
) -> Result<DensityCertificate> {
    for (c, g) in generators {
        if !g.is_square() || g.rows() != form.rows() {
            return Err(Error::ShapeMismatch(format!("generator {c} does not match the form")));
        }
        if !preserves_form(g, form) {
            return Err(Error::FormViolation(format!("generator {c}")));
        }
    }
    let a = evaluate_word(pinching_word, generators)?;
    let b = evaluate_word(unipotent_word, generators)?;
    let pinching_report = galois_pinching(&IntPolynomial::char_poly(&a)?, prime_budget)?;
    let n = b.rows();
    let d = &b - &IntMatrix::identity(n);
    let unipotent_rank = d.rank();
    let unipotent_nontrivial = !d.is_zero();
    let unipotent_nilpotent = d.pow(n as u64).is_zero();
    let image_isotropic = d.congruent(form).is_zero();
    let image_lagrangian = 2 * unipotent_rank == n && image_isotropic;
    let verdict = pinching_report.verdict && unipotent_nontrivial && unipotent_nilpotent && !image_lagrangian;
    Ok(DensityCertificate {
        pinching_word: pinching_word.to_string(),
        pinching_report,
        unipotent_word: unipotent_word.to_string(),
        unipotent_rank,
        unipotent_nontrivial,
        unipotent_nilpotent,
        image_isotropic,
        image_lagrangian,
        verdict,
    })
}

/// Density certificate for the zero-holonomy monodromy, letters `T`, `S`.
pub fn density_for_monodromy(
    mp: &MonodromyPair,
    pinching_word: &str,
    unipotent_word: &str,
    prime_budget: usize,
) -> Result<DensityCertificate> {
    let gens = [('T', mp.restricted_t.clone()), ('S', mp.restricted_s.clone())];
    density_certificate(&gens, &mp.split.restricted_gram, pinching_word, unipotent_word, prime_budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn fixture_gens() -> [(char, IntMatrix); 2] {
        let g = fixtures::generators();
        [('T', g.alpha_t), ('S', g.alpha_s)]
    }

    #[test]
    fn fixture_density() {
        let omega0 = fixtures::forms().omega0;
        let cert = density_certificate(&fixture_gens(), &omega0, "STST^20", "T^6", 100).unwrap();
        assert!(cert.verdict);
        assert_eq!(cert.unipotent_rank, 1);
        assert_eq!(cert.pinching_report.galois_order, Some(48));
    }

    #[test]
    fn trivial_words_fail() {
        let omega0 = fixtures::forms().omega0;
        let id = density_certificate(&fixture_gens(), &omega0, "Tt", "T^6", 100).unwrap();
        assert!(!id.verdict);
        assert!(!id.pinching_report.irreducible.irreducible);
        let triv = density_certificate(&fixture_gens(), &omega0, "STST^20", "Tt", 100).unwrap();
        assert!(!triv.unipotent_nontrivial);
        assert!(!triv.verdict);
    }

    #[test]
    fn form_violation() {
        let omega0 = fixtures::forms().omega0;
        let mut bad = fixture_gens();
        bad[0].1 = &bad[0].1 + &IntMatrix::identity(6);
        assert!(matches!(
            density_certificate(&bad, &omega0, "S", "T", 10),
            Err(Error::FormViolation(_))
        ));
    }
}
