//! Data model for steering inequalities: coefficient tensors, target
//! measurements, imprecision profiles, and the exact idealized LHS bound.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{
    dominant_eig_of_dyads, kron, min_eig, ComplexMatrix, HermitianMatrix, Ket,
};
use crate::targets::BasisFamily;
use crate::tol;

/// One sparse coefficient c_abxy of a steering functional.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoeffTerm {
    pub a: usize,
    pub b: usize,
    pub x: usize,
    pub y: usize,
    pub value: f64,
}

/// Affine map from the probability form back to a correlator form:
/// correlator value = scale * probability value + offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BackMap {
    pub scale: f64,
    pub offset: f64,
}

impl BackMap {
    pub fn apply(&self, probability_value: f64) -> f64 {
        self.scale * probability_value + self.offset
    }
}

/// Steering functional sum c_abxy p(a,b|x,y) with nonnegative coefficients.
///
/// Coefficients are stored sparsely; delta-structured functionals would waste
/// a dense tensor.
#[derive(Debug, Clone)]
pub struct SteeringFunctional {
    d: usize,
    n_x: usize,
    n_y: usize,
    terms: Vec<CoeffTerm>,
    back_map: Option<BackMap>,
}

impl SteeringFunctional {
    pub fn new(d: usize, n_x: usize, n_y: usize, terms: Vec<CoeffTerm>) -> Result<Self> {
        if d == 0 || n_x == 0 || n_y == 0 {
            return Err(Error::InvalidFunctional(
                "scenario dimensions must be positive".into(),
            ));
        }
        let mut any_nonzero = false;
        for t in &terms {
            if !t.value.is_finite() || t.value < 0.0 {
                return Err(Error::InvalidFunctional(format!(
                    "coefficients must be nonnegative and finite, got c({},{},{},{}) = {}",
                    t.a, t.b, t.x, t.y, t.value
                )));
            }
            if t.a >= d || t.b >= d || t.x >= n_x || t.y >= n_y {
                return Err(Error::InvalidFunctional(format!(
                    "coefficient index ({},{},{},{}) out of range for d={d}, n_x={n_x}, n_y={n_y}",
                    t.a, t.b, t.x, t.y
                )));
            }
            if t.value > 0.0 {
                any_nonzero = true;
            }
        }
        if !any_nonzero {
            return Err(Error::InvalidFunctional(
                "functional needs at least one nonzero coefficient".into(),
            ));
        }
        let terms = terms.into_iter().filter(|t| t.value > 0.0).collect();
        Ok(SteeringFunctional {
            d,
            n_x,
            n_y,
            terms,
            back_map: None,
        })
    }

    /// Correlation functional c_abxy = delta_ab delta_xy with n inputs per
    /// side; the standard MUB witness shape.
    pub fn mub_correlation(d: usize, n: usize) -> Self {
        let terms = (0..n)
            .flat_map(|x| {
                (0..d).map(move |a| CoeffTerm {
                    a,
                    b: a,
                    x,
                    y: x,
                    value: 1.0,
                })
            })
            .collect();
        Self::new(d, n, n, terms).expect("correlation functional is valid")
    }

    pub fn with_back_map(mut self, back_map: BackMap) -> Self {
        self.back_map = Some(back_map);
        self
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn terms(&self) -> &[CoeffTerm] {
        &self.terms
    }

    pub fn back_map(&self) -> Option<BackMap> {
        self.back_map
    }

    /// True when some coefficient touches measurement operator (b, y).
    pub fn carries(&self, b: usize, y: usize) -> bool {
        self.terms.iter().any(|t| t.b == b && t.y == y)
    }

    /// Per-assignment weights w_by = sum_x c_{a(x),b,x,y}, indexed [y][b].
    pub fn assignment_weights(&self, assignment: &[usize]) -> Vec<Vec<f64>> {
        let mut w = vec![vec![0.0; self.d]; self.n_y];
        for t in &self.terms {
            if assignment[t.x] == t.a {
                w[t.y][t.b] += t.value;
            }
        }
        w
    }

    /// Number of deterministic Alice responses, d^{n_x}, as a float to keep
    /// overflow handling simple.
    pub fn assignment_count(&self) -> f64 {
        (self.d as f64).powi(self.n_x as i32)
    }
}

/// Algebraic ceiling chi = sum_x max_a [ sum_{b,y} c_abxy ].
pub fn chi(f: &SteeringFunctional) -> f64 {
    let mut per_xa = vec![vec![0.0; f.d()]; f.n_x()];
    for t in f.terms() {
        per_xa[t.x][t.a] += t.value;
    }
    per_xa
        .iter()
        .map(|row| row.iter().copied().fold(0.0, f64::max))
        .sum()
}

/// The trusted party's intended rank-one projective measurements; basis `y`
/// may list fewer than `d` vectors (missing outcomes act as zero operators).
#[derive(Debug, Clone)]
pub struct TargetMeasurements {
    d: usize,
    bases: Vec<Vec<Ket>>,
}

impl TargetMeasurements {
    pub fn new(d: usize, bases: Vec<Vec<Ket>>) -> Result<Self> {
        for (y, basis) in bases.iter().enumerate() {
            if basis.len() > d {
                return Err(Error::DimensionMismatch(format!(
                    "basis {y} lists {} operators for d = {d}",
                    basis.len()
                )));
            }
            for (b, v) in basis.iter().enumerate() {
                if v.dim() != d {
                    return Err(Error::DimensionMismatch(format!(
                        "target vector (b={b}, y={y}) has dim {} instead of {d}",
                        v.dim()
                    )));
                }
            }
        }
        Ok(TargetMeasurements { d, bases })
    }

    pub fn from_family(fam: &BasisFamily) -> Self {
        TargetMeasurements {
            d: fam.d,
            bases: fam.bases.clone(),
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_y(&self) -> usize {
        self.bases.len()
    }

    pub fn vector(&self, b: usize, y: usize) -> Option<&Ket> {
        self.bases.get(y).and_then(|basis| basis.get(b))
    }

    pub fn basis(&self, y: usize) -> &[Ket] {
        &self.bases[y]
    }
}

/// Imprecision parameters eps_by in [0, 1], indexed [y][b].
#[derive(Debug, Clone)]
pub struct ImprecisionProfile {
    eps: Vec<Vec<f64>>,
}

impl ImprecisionProfile {
    pub fn new(eps: Vec<Vec<f64>>) -> Result<Self> {
        for row in &eps {
            for &e in row {
                if !(0.0..=1.0).contains(&e) {
                    return Err(Error::InvalidParameter(format!(
                        "imprecision parameter {e} outside [0, 1]"
                    )));
                }
            }
        }
        Ok(ImprecisionProfile { eps })
    }

    pub fn uniform(n_y: usize, d: usize, eps: f64) -> Result<Self> {
        Self::new(vec![vec![eps; d]; n_y])
    }

    /// One imprecision value per basis, shared by all outcomes.
    pub fn per_basis(values: &[f64], d: usize) -> Result<Self> {
        Self::new(values.iter().map(|&e| vec![e; d]).collect())
    }

    pub fn get(&self, b: usize, y: usize) -> f64 {
        self.eps[y][b]
    }

    pub fn n_y(&self) -> usize {
        self.eps.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.eps
    }

    /// The uniform value when every entry coincides.
    pub fn uniform_value(&self) -> Option<f64> {
        let first = *self.eps.first()?.first()?;
        let all_equal = self
            .eps
            .iter()
            .all(|row| row.iter().all(|&e| (e - first).abs() == 0.0));
        all_equal.then_some(first)
    }
}

/// How a bound value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundMethod {
    ExactEnumeration,
    Result1Minimized,
    ClosedFormEqualEps,
    FirstOrder,
    ExplicitModel,
}

impl BoundMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundMethod::ExactEnumeration => "exact-enumeration",
            BoundMethod::Result1Minimized => "result1-minimized",
            BoundMethod::ClosedFormEqualEps => "closed-form-equal-eps",
            BoundMethod::FirstOrder => "first-order",
            BoundMethod::ExplicitModel => "explicit-model",
        }
    }
}

/// A bound value with provenance.
#[derive(Debug, Clone)]
pub struct BoundResult {
    pub value: f64,
    pub method: BoundMethod,
    pub mu_star: Option<f64>,
    /// False when the value fell outside a method's guaranteed regime, e.g.
    /// the equal-imprecision closed form beyond eps <= 1 - beta0/chi.
    pub valid: bool,
}

/// Outcome of the exact idealized LHS enumeration: the bound plus the
/// deterministic response and Bob state that attain it.
#[derive(Debug, Clone)]
pub struct IdealLhsOptimum {
    pub result: BoundResult,
    pub assignment: Vec<usize>,
    pub state: Ket,
}

fn decode_assignment(mut index: u64, d: usize, n_x: usize) -> Vec<usize> {
    let mut a = vec![0usize; n_x];
    for slot in a.iter_mut() {
        *slot = (index % d as u64) as usize;
        index /= d as u64;
    }
    a
}

/// Exact idealized LHS bound
/// beta0 = max over deterministic a(.) of lambda_max( sum c_{a(x),b,x,y} B^targ_{b|y} ).
///
/// Deterministic Alice responses are exhaustive here: LHS values are convex
/// combinations of deterministic-response values, so the maximum is attained
/// at a deterministic response with a pure Bob state.
pub fn beta0_exact(
    f: &SteeringFunctional,
    targets: &TargetMeasurements,
    cap: u64,
) -> Result<IdealLhsOptimum> {
    check_compatibility(f, targets)?;
    let count = f.assignment_count();
    if count > cap as f64 {
        return Err(Error::EnumerationInfeasible {
            assignments: count,
            cap,
        });
    }
    let count = count as u64;
    let d = f.d();

    let best = (0..count)
        .into_par_iter()
        .map(|idx| {
            let assignment = decode_assignment(idx, d, f.n_x());
            let weights = f.assignment_weights(&assignment);
            let mut dyads: Vec<(f64, &Ket)> = Vec::new();
            for (y, row) in weights.iter().enumerate() {
                for (b, &w) in row.iter().enumerate() {
                    if w > 0.0 {
                        if let Some(v) = targets.vector(b, y) {
                            dyads.push((w, v));
                        }
                    }
                }
            }
            match dominant_eig_of_dyads(d, &dyads) {
                Some((value, state)) => (value, idx, state),
                None => (0.0, idx, Ket::basis_vector(d, 0)),
            }
        })
        .reduce(
            || (f64::NEG_INFINITY, u64::MAX, Ket::basis_vector(d, 0)),
            |a, b| {
                // Deterministic argmax: larger value wins, ties break to the
                // smaller assignment index.
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );

    let (value, idx, state) = best;
    Ok(IdealLhsOptimum {
        result: BoundResult {
            value,
            method: BoundMethod::ExactEnumeration,
            mu_star: None,
            valid: true,
        },
        assignment: decode_assignment(idx, d, f.n_x()),
        state,
    })
}

fn check_compatibility(f: &SteeringFunctional, targets: &TargetMeasurements) -> Result<()> {
    if targets.d() != f.d() {
        return Err(Error::DimensionMismatch(format!(
            "functional d = {} vs target d = {}",
            f.d(),
            targets.d()
        )));
    }
    if targets.n_y() != f.n_y() {
        return Err(Error::DimensionMismatch(format!(
            "functional n_y = {} vs {} target bases",
            f.n_y(),
            targets.n_y()
        )));
    }
    Ok(())
}

/// Evaluates sum c_abxy Tr( (A_{a|x} (x) B_{b|y}) rho ) for an explicit
/// quantum strategy. Alice's operators are untrusted and only checked
/// dimensionally; missing Bob operators act as zero.
pub fn evaluate(
    f: &SteeringFunctional,
    alice: &[Vec<ComplexMatrix>],
    bob: &[Vec<ComplexMatrix>],
    rho: &HermitianMatrix,
) -> Result<f64> {
    if alice.len() != f.n_x() {
        return Err(Error::DimensionMismatch(format!(
            "expected {} Alice inputs, got {}",
            f.n_x(),
            alice.len()
        )));
    }
    if bob.len() != f.n_y() {
        return Err(Error::DimensionMismatch(format!(
            "expected {} Bob inputs, got {}",
            f.n_y(),
            bob.len()
        )));
    }
    let d_a = alice
        .first()
        .and_then(|ops| ops.first())
        .map(|m| m.rows())
        .ok_or_else(|| Error::DimensionMismatch("Alice POVM list is empty".into()))?;
    for (x, ops) in alice.iter().enumerate() {
        for m in ops {
            if m.rows() != d_a || m.cols() != d_a {
                return Err(Error::DimensionMismatch(format!(
                    "Alice operator for input {x} is not {d_a}x{d_a}"
                )));
            }
        }
    }
    let d_b = f.d();
    for (y, ops) in bob.iter().enumerate() {
        if ops.len() > d_b {
            return Err(Error::DimensionMismatch(format!(
                "Bob input {y} lists {} operators for d = {d_b}",
                ops.len()
            )));
        }
        for m in ops {
            if m.rows() != d_b || m.cols() != d_b {
                return Err(Error::DimensionMismatch(format!(
                    "Bob operator for input {y} is not {d_b}x{d_b}"
                )));
            }
        }
    }
    if rho.dim() != d_a * d_b {
        return Err(Error::DimensionMismatch(format!(
            "rho dim {} does not match d_A * d_B = {}",
            rho.dim(),
            d_a * d_b
        )));
    }
    let rho_min = min_eig(rho);
    if rho_min < -tol::DEFAULT.psd {
        return Err(Error::NotPsd { min_eig: rho_min });
    }
    let tr = rho.as_matrix().trace();
    if (tr.re - 1.0).abs() > tol::DEFAULT.trace_one || tr.im.abs() > tol::DEFAULT.trace_one {
        return Err(Error::InvalidParameter(format!(
            "rho must have unit trace, got {tr}"
        )));
    }

    let mut total = 0.0;
    for t in f.terms() {
        let a_op = match alice[t.x].get(t.a) {
            Some(m) => m,
            None => continue,
        };
        let b_op = match bob[t.y].get(t.b) {
            Some(m) => m,
            None => continue,
        };
        let joint = kron(a_op, b_op);
        let val: Complex64 = joint.mul(rho.as_matrix()).trace();
        total += t.value * val.re;
    }
    Ok(total)
}

/// Converts a two-outcome correlator specification into the nonnegative
/// probability form required by the corrected-bound machinery.
///
/// Each listed pair (x, y) with sign s contributes c_abxy = 1 exactly when
/// (-1)^{a+b} = s. The attached back-map (scale 2, offset -#terms) recovers
/// the correlator value from the probability form, assuming complete
/// measurements on both sides.
pub fn correlator_to_probability_form(
    signs: &[(usize, usize, i8)],
    n_x: usize,
    n_y: usize,
) -> Result<SteeringFunctional> {
    if signs.is_empty() {
        return Err(Error::InvalidFunctional(
            "correlator specification lists no terms".into(),
        ));
    }
    let mut terms = Vec::with_capacity(signs.len() * 2);
    for &(x, y, s) in signs {
        if s != 1 && s != -1 {
            return Err(Error::InvalidFunctional(format!(
                "correlator sign for ({x},{y}) must be +1 or -1, got {s}"
            )));
        }
        for a in 0..2usize {
            for b in 0..2usize {
                let parity = if (a + b) % 2 == 0 { 1 } else { -1 };
                if parity == s as i32 {
                    terms.push(CoeffTerm {
                        a,
                        b,
                        x,
                        y,
                        value: 1.0,
                    });
                }
            }
        }
    }
    let f = SteeringFunctional::new(2, n_x, n_y, terms)?;
    Ok(f.with_back_map(BackMap {
        scale: 2.0,
        offset: -(signs.len() as f64),
    }))
}

/// Sign table for a sum of n aligned correlators <A_x (x) B_x>, the shape of
/// the three-term qubit steering witness.
pub fn diagonal_correlator_signs(n: usize) -> Vec<(usize, usize, i8)> {
    (0..n).map(|k| (k, k, 1)).collect()
}

/// Sign table (-1)^{T_xy} of the Elegant Bell inequality, with Alice's four
/// inputs forming a tetrahedron against Bob's three Pauli bases.
pub fn elegant_bell_signs() -> Vec<(usize, usize, i8)> {
    let t = [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 0]];
    let mut signs = Vec::new();
    for (x, row) in t.iter().enumerate() {
        for (y, &bit) in row.iter().enumerate() {
            signs.push((x, y, if bit == 0 { 1 } else { -1 }));
        }
    }
    signs
}
