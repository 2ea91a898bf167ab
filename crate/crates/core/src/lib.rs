//! Imprecision-corrected bounds for bipartite quantum steering inequalities.
//!
//! A steering inequality certifies steering through a violation of
//! `sum c_abxy p(a,b|x,y) <= beta0`, where the bound assumes the trusted
//! party measures exactly the intended rank-one projective targets. When the
//! lab measurements only reach fidelity `1 - eps_by` of each target operator,
//! a corrected bound is required; this crate computes it, together with the
//! exact idealized bound and matching lower bounds from explicit unsteerable
//! strategies:
//!
//! - [`scenario`]: steering functionals, target measurements, imprecision
//!   profiles, the exact idealized LHS bound `beta0` by enumeration, and
//!   evaluation of explicit quantum strategies;
//! - [`dominance`]: the operator dominance certificate
//!   `sigma <= (1+mu)|psi><psi| + z(eps, mu) I` for states `eps`-close in
//!   fidelity to a pure state, with its saturating witness;
//! - [`bounds`]: the corrected upper bound by one-dimensional minimization
//!   over `mu`, the equal-imprecision closed form, the first-order
//!   approximation, and the explicit MUB-pair model;
//! - [`seesaw`]: certified lower bounds from alternating maximization over
//!   Bob's state and fidelity-constrained measurement rays;
//! - [`targets`]: computational/Fourier/Weyl-Heisenberg MUB and Pauli basis
//!   constructions;
//! - [`linalg`]: the small dense complex-matrix kernel underneath.

pub mod bounds;
pub mod dominance;
pub mod error;
pub mod linalg;
pub mod scenario;
pub mod seesaw;
pub mod targets;
pub mod tol;

pub use bounds::{
    corrected_bound, corrected_bound_equal_eps, erased_share, first_order, mub_pair_model_strategy,
    mub_pair_model_value, MuObjective,
};
pub use dominance::{
    dominance_operator, sample_close_state, saturating_witness, z_coeff, DominanceCertificate,
};
pub use error::{Error, Result};
pub use linalg::{
    eig_hermitian, fidelity_pure, is_psd, kron, min_eig, ComplexMatrix, HermitianMatrix, Ket,
};
pub use scenario::{
    beta0_exact, chi, correlator_to_probability_form, diagonal_correlator_signs,
    elegant_bell_signs, evaluate, BackMap, BoundMethod, BoundResult, CoeffTerm,
    IdealLhsOptimum, ImprecisionProfile, SteeringFunctional, TargetMeasurements,
};
pub use seesaw::{
    constrained_ray_update, plateau_threshold, seesaw_lower_bound, LHSStrategy, SeesawOptions,
};
pub use targets::{check_mub, family_from_label, fourier_matrix, mub_pair, wh_mubs, BasisFamily};
