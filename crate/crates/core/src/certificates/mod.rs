//! Exact certificates: irreducibility, real roots and Galois groups of
//! characteristic polynomials, Zariski density, arithmeticity witnesses and
//! congruence images.

pub mod congruence;
pub mod density;
pub mod modp;
pub mod polynomial;
pub mod transvection;

pub use congruence::{
    congruence_image_mod2, detect_finite_group, symplectic_group_order, unimodular_model, CongruenceImageReport,
    FiniteGroupResult,
};
pub use density::{density_certificate, density_for_monodromy, DensityCertificate};
pub use polynomial::{
    count_real_roots, galois_order_reciprocal_sextic, galois_pinching, is_irreducible_over_z, GaloisPinchingReport,
    GaloisReport, GaloisStatus, IrreducibilityReport, IrreducibilityWitness, SturmReport,
    DEFAULT_GALOIS_PRIMES, DEFAULT_IRREDUCIBILITY_PRIMES,
};
pub use transvection::{
    annihilator, arithmeticity_certificate, arithmeticity_for_origami, arithmeticity_from_matrices,
    direction_datum, is_witness, multitwist_operator, pairing, transvection_matrices, ArithmeticityCertificate,
    TransvectionDatum, WaistGroup,
};
