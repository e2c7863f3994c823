//! orbitlab-core: exact structure theory and coadjoint orbit geometry for
//! classical real semisimple Lie algebras.
//!
//! The crate builds su(p,q), sp(2n,R), so*(2n) and so(p,q) from explicit
//! matrix realizations, converts them once into exact rational structure
//! constant tables, and from there computes Cartan decompositions, restricted
//! roots, the cascade of strongly orthogonal roots, roots of the
//! complexification with respect to a compact Cartan subalgebra, and the
//! coadjoint orbit machinery used to test holomorphicity of strongly elliptic
//! functionals against openness of their projected orbits.
//!
//! Arithmetic discipline: every verdict-carrying computation runs over exact
//! rationals (or Gaussian rationals). Floating point appears only in the
//! clearly separated exploratory sampling and Monte-Carlo paths and never
//! feeds an assertion.

pub mod cascade;
pub mod complex_roots;
pub mod context;
pub mod exact;
pub mod lie;
pub mod multiplicity;
pub mod orbit;
pub mod report;
pub mod realforms;

pub use exact::mat::{GMat, LinearSolver, Mat, QMat};
pub use exact::{Gaussian, Rational};
