//! Central numerical tolerances.
//!
//! Every validation threshold in the crate is defined here so that the
//! tolerance story stays in one place.

/// Tolerance record used by all validating constructors and certificates.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Max entrywise |H - H^dag| accepted when constructing Hermitian matrices.
    pub hermiticity: f64,
    /// Max | ||v|| - 1 | accepted when constructing unit vectors.
    pub unit_norm: f64,
    /// Eigenvalue slack accepted by positive-semidefiniteness certificates.
    pub psd: f64,
    /// Accepted deviation when checking trace-one density operators.
    pub trace_one: f64,
    /// Orthonormality / unbiasedness slack for basis families.
    pub basis: f64,
}

impl Tolerances {
    pub const fn default_set() -> Self {
        Tolerances {
            hermiticity: 1e-12,
            unit_norm: 1e-12,
            psd: 1e-9,
            trace_one: 1e-9,
            basis: 1e-10,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::default_set()
    }
}

/// Crate-wide default tolerances.
pub const DEFAULT: Tolerances = Tolerances::default_set();
