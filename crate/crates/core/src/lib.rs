//! Exact computations with connected graded Hopf algebras over `ℚ`.
//!
//! The crate builds the shuffle Hopf algebra `H(V)`, its sub-Hopf algebras
//! `H(V,J)` cut out by quadratic data, and the coordinate ring of the
//! Heisenberg group, all as weight-truncated structure-constant tables. On
//! top of these it computes conilpotency filtrations, cobar cohomology in
//! degrees 1 and 2, comodule cohomology, universal extensions and the
//! iterated universal extension tower `E_1 ← E_2 ← …`, from which the
//! product of the Hopf algebra is reconstructed.
//!
//! All arithmetic is exact (`BigRational`). Loops over independent cases run
//! on rayon when the `parallel` feature is enabled (the default); every
//! result is identical under [`Exec::Sequential`].

pub mod coalgebra;
pub mod comodule;
pub mod error;
pub mod exactlin;
pub mod hopfcore;
pub mod parallel;
pub mod quadpresent;
pub mod tensorspace;

pub use coalgebra::{
    cobar_cohomology, conil_filtration, conil_filtration_annihilator, conil_intersection_check,
    primitives, CohomologyReport, ConilFiltration,
};
pub use comodule::{
    check_comodule, cohomology_with_coefficients, depth, dual_comodule, hom_pointed, iterated_tower,
    tensor_comodule, tower_product, universal_extension, Comodule, PointedHom, PointedTower,
};
pub use error::{Error, Result};
pub use exactlin::{Matrix, Quotient, Rational, Subspace};
pub use hopfcore::{
    build_free_shuffle_hopf, build_heisenberg_hopf, check_hopf_axioms, GradedHopf, HopfReport,
};
pub use parallel::Exec;
pub use quadpresent::{
    build_quad_hopf, graded_dims, kernel_j, preset, tn_tower, validate_quadratic, QuadraticData,
    TnTower, XiTarget,
};
pub use tensorspace::{GradedVector, Word};
