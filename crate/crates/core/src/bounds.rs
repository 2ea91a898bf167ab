//! Imprecision-corrected upper bounds on steering functionals.
//!
//! The workhorse is the one-parameter family
//!
//!     g(mu) = (1 + mu) beta0 + (1/2) sum_x max_a [ sum_{b,y} c_abxy u_by(mu) ],
//!     u_by(mu) = sqrt(mu^2 + 4 eps_by (1 + mu)) - mu,
//!
//! every evaluation of which is independently a valid upper bound for
//! mu >= -1. The corrected bound is the minimum over mu; with equal
//! imprecision the minimum has a closed form.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::Ket;
use crate::scenario::{
    BoundMethod, BoundResult, ImprecisionProfile, SteeringFunctional,
};
use crate::seesaw::LHSStrategy;
use crate::targets::fourier_matrix;

/// Precomputed per-(x, a) tables of (imprecision, coefficient mass) pairs for
/// fast evaluation of g(mu).
#[derive(Debug, Clone)]
pub struct MuObjective {
    beta0: f64,
    /// per_x[x][a] lists aggregated (eps_by, sum of c_abxy) entries.
    per_x: Vec<Vec<Vec<(f64, f64)>>>,
}

impl MuObjective {
    pub fn new(
        f: &SteeringFunctional,
        beta0: f64,
        eps: &ImprecisionProfile,
    ) -> Result<Self> {
        if !(beta0 > 0.0) || !beta0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "beta0 must be positive and finite, got {beta0}"
            )));
        }
        let mut per_x = vec![vec![Vec::<(f64, f64)>::new(); f.d()]; f.n_x()];
        for t in f.terms() {
            if t.y >= eps.n_y() || t.b >= eps.rows()[t.y].len() {
                return Err(Error::DimensionMismatch(format!(
                    "imprecision profile lacks an entry for (b={}, y={})",
                    t.b, t.y
                )));
            }
            let e = eps.get(t.b, t.y);
            let bucket = &mut per_x[t.x][t.a];
            match bucket.iter_mut().find(|(eb, _)| *eb == e) {
                Some((_, c)) => *c += t.value,
                None => bucket.push((e, t.value)),
            }
        }
        Ok(MuObjective { beta0, per_x })
    }

    pub fn beta0(&self) -> f64 {
        self.beta0
    }

    /// g(mu); a theorem-backed upper bound for every mu >= -1.
    pub fn eval(&self, mu: f64) -> f64 {
        let mut correction = 0.0;
        for table in &self.per_x {
            let best = table
                .iter()
                .map(|bucket| {
                    bucket
                        .iter()
                        .map(|&(e, c)| c * u_term(e, mu))
                        .sum::<f64>()
                })
                .fold(0.0_f64, f64::max);
            correction += best;
        }
        (1.0 + mu) * self.beta0 + 0.5 * correction
    }
}

fn u_term(eps: f64, mu: f64) -> f64 {
    (mu * mu + 4.0 * eps * (1.0 + mu)).sqrt() - mu
}

/// Golden-section search for the minimum of `f` on `[a, b]`.
fn golden_section_minimize(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INV_PHI2: f64 = 0.381_966_011_250_105; // 2 - phi
    let mut x1 = a + INV_PHI2 * (b - a);
    let mut x2 = b - INV_PHI2 * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..240 {
        if (b - a).abs() <= 1e-13 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + INV_PHI2 * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - INV_PHI2 * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Grid for the mu search: -1 plus log-spaced offsets up to 1e6. Dense near
/// the boundary and near mu = 0, where the minimizers of well-behaved
/// functionals live; g grows linearly for large mu, so the far tail only
/// needs brackets. Hits mu = 0 exactly (kink point when some eps vanish).
fn mu_grid() -> Vec<f64> {
    let mut grid = vec![-1.0];
    let n = 160;
    let (lo, hi) = (-9.0_f64, 6.0_f64);
    for k in 0..=n {
        let s = lo + (hi - lo) * k as f64 / n as f64;
        grid.push(-1.0 + 10f64.powf(s));
    }
    grid
}

fn minimize_mu(g: &impl Fn(f64) -> f64) -> (f64, f64) {
    let grid = mu_grid();
    let values: Vec<f64> = grid.iter().map(|&m| g(m)).collect();

    let mut order: Vec<usize> = (0..grid.len()).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());

    // Multi-start refinement from the three best grid points.
    let mut best = (grid[order[0]], values[order[0]]);
    for &i in order.iter().take(3) {
        let lo = if i == 0 { grid[0] } else { grid[i - 1] };
        let hi = if i + 1 == grid.len() { grid[i] } else { grid[i + 1] };
        let (mu, val) = golden_section_minimize(g, lo, hi);
        if val < best.1 {
            best = (mu, val);
        }
    }
    best
}

/// Result-1 corrected bound: min over mu >= -1 of g(mu), located by a
/// bracketed scalar search on a log-spaced grid with golden-section
/// refinement. Works for any per-operator imprecision profile.
pub fn corrected_bound(
    f: &SteeringFunctional,
    beta0: f64,
    eps: &ImprecisionProfile,
) -> Result<BoundResult> {
    let objective = MuObjective::new(f, beta0, eps)?;
    let (mu_star, value) = minimize_mu(&|m| objective.eval(m));
    Ok(BoundResult {
        value,
        method: BoundMethod::Result1Minimized,
        mu_star: Some(mu_star),
        valid: true,
    })
}

/// Stationary points (mu_minus, mu_plus) of the equal-imprecision objective;
/// `None` when the quadratic degenerates (chi = beta0 or eps = 0).
pub fn equal_eps_stationary_points(
    beta0: f64,
    chi: f64,
    epsilon: f64,
) -> Option<(f64, f64)> {
    let gap = chi - beta0;
    if gap * beta0 <= 0.0 || epsilon == 0.0 {
        return None;
    }
    let root = (epsilon * (1.0 - epsilon) * beta0 * gap).sqrt();
    let spread = (chi - 2.0 * beta0).abs();
    let base = -2.0 * beta0 * epsilon * gap;
    Some((
        (base - spread * root) / (beta0 * gap),
        (base + spread * root) / (beta0 * gap),
    ))
}

/// Derivative of the equal-imprecision objective
/// (1 + mu) beta0 + (chi/2) u(eps, mu) with respect to mu.
pub fn equal_eps_derivative(beta0: f64, chi: f64, epsilon: f64, mu: f64) -> f64 {
    let root = (mu * mu + 4.0 * epsilon * (1.0 + mu)).sqrt();
    beta0 + 0.5 * chi * ((mu + 2.0 * epsilon) / root - 1.0)
}

/// Closed-form corrected bound for equal imprecision parameters:
///
///     beta0 - eps (2 beta0 - chi) + 2 sqrt(eps (1 - eps) beta0 (chi - beta0)),
///
/// valid when eps <= 1 - beta0/chi (at that edge it reaches chi, the
/// algebraic maximum). Outside the range the returned value is capped at chi
/// and flagged invalid rather than silently treated as tight.
pub fn corrected_bound_equal_eps(beta0: f64, chi: f64, epsilon: f64) -> Result<BoundResult> {
    if !(beta0 > 0.0) || !beta0.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "beta0 must be positive, got {beta0}"
        )));
    }
    if chi < beta0 {
        return Err(Error::InvalidParameter(format!(
            "chi = {chi} must be at least beta0 = {beta0}"
        )));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in [0, 1], got {epsilon}"
        )));
    }
    if epsilon == 0.0 {
        return Ok(BoundResult {
            value: beta0,
            method: BoundMethod::ClosedFormEqualEps,
            mu_star: Some(0.0),
            valid: true,
        });
    }
    let gap = chi - beta0;
    let formula =
        beta0 - epsilon * (2.0 * beta0 - chi) + 2.0 * (epsilon * (1.0 - epsilon) * beta0 * gap).sqrt();
    let in_range = epsilon <= 1.0 - beta0 / chi;
    if in_range {
        let mu_star = equal_eps_stationary_points(beta0, chi, epsilon).map(|(lo, hi)| {
            if 2.0 * beta0 >= chi {
                lo
            } else {
                hi
            }
        });
        Ok(BoundResult {
            value: formula,
            method: BoundMethod::ClosedFormEqualEps,
            mu_star,
            valid: true,
        })
    } else {
        Ok(BoundResult {
            value: formula.min(chi),
            method: BoundMethod::ClosedFormEqualEps,
            mu_star: None,
            valid: false,
        })
    }
}

/// First-order approximation beta0 + 2 sqrt(beta0 (chi - beta0)) sqrt(eps);
/// documented as an approximation only.
pub fn first_order(beta0: f64, chi: f64, epsilon: f64) -> f64 {
    assert!(beta0 > 0.0 && chi >= beta0 && epsilon >= 0.0);
    beta0 + 2.0 * (beta0 * (chi - beta0)).sqrt() * epsilon.sqrt()
}

fn mub_pair_check_range(d: usize, epsilon: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::UnsupportedDimension(format!(
            "the MUB-pair model needs d >= 2, got {d}"
        )));
    }
    let demarcation = 0.5 * (1.0 - 1.0 / (d as f64).sqrt());
    if !(0.0..=1.0).contains(&epsilon) || epsilon > demarcation + 1e-15 {
        return Err(Error::InvalidParameter(format!(
            "the explicit MUB-pair model is valid for eps <= (1 - 1/sqrt(d))/2 = \
             {demarcation}, got {epsilon}"
        )));
    }
    Ok(demarcation)
}

/// Value of the explicit imprecise-MUB product strategy,
/// (1 + 1/sqrt d) + (2/sqrt d)(sqrt(eps (1-eps)(d-1)) - eps),
/// valid for eps <= (1 - 1/sqrt d)/2. At the demarcation it reaches the
/// maximal quantum value 2.
pub fn mub_pair_model_value(d: usize, epsilon: f64) -> Result<f64> {
    mub_pair_check_range(d, epsilon)?;
    let sd = (d as f64).sqrt();
    Ok(1.0 + 1.0 / sd
        + (2.0 / sd) * ((epsilon * (1.0 - epsilon) * (d as f64 - 1.0)).sqrt() - epsilon))
}

/// The constructive strategy behind [`mub_pair_model_value`]: Bob holds
/// |psi_B> = nu |0> + sqrt((1 - nu^2)/(d-1)) (|1> + ... + |d-1>) with
/// nu = sqrt((1 + 1/sqrt d)/2), and his first-outcome lab rays are the
/// tilted ray |phi> = sqrt(1-eps)|0> + sqrt(eps/(d-1))(|1> + ...) and its
/// Fourier rotation.
pub fn mub_pair_model_strategy(d: usize, epsilon: f64) -> Result<LHSStrategy> {
    mub_pair_check_range(d, epsilon)?;
    let f = SteeringFunctional::mub_correlation(d, 2);
    let fam = crate::targets::mub_pair(d);
    let targets = crate::scenario::TargetMeasurements::from_family(&fam);
    let eps = ImprecisionProfile::uniform(2, d, epsilon)?;

    let nu = ((1.0 + 1.0 / (d as f64).sqrt()) / 2.0).sqrt();
    let rest = ((1.0 - nu * nu) / (d as f64 - 1.0)).sqrt();
    let mut state_amps = vec![Complex64::new(rest, 0.0); d];
    state_amps[0] = Complex64::new(nu, 0.0);
    let bob_state = Ket::normalized(state_amps)?;

    let mut phi_amps = vec![Complex64::new((epsilon / (d as f64 - 1.0)).sqrt(), 0.0); d];
    phi_amps[0] = Complex64::new((1.0 - epsilon).sqrt(), 0.0);
    let phi = Ket::normalized(phi_amps)?;
    let rotated = Ket::normalized(fourier_matrix(d).mul_vec(phi.amps()))?;

    let mut rays: Vec<Vec<Ket>> = (0..2).map(|y| targets.basis(y).to_vec()).collect();
    rays[0][0] = phi;
    rays[1][0] = rotated;

    LHSStrategy::new(
        &f,
        &targets,
        &eps,
        vec![0, 0],
        rays,
        bob_state,
        false,
    )
}

/// Share of the ideal quantum-violation gap erased by the imprecision,
/// Delta = (B_eps - beta0) / (2 - beta0), for the MUB-pair inequality whose
/// maximal quantum value is 2.
pub fn erased_share(d: usize, epsilon: f64) -> Result<f64> {
    let beta0 = 1.0 + 1.0 / (d as f64).sqrt();
    let value = mub_pair_model_value(d, epsilon)?;
    Ok((value - beta0) / (2.0 - beta0))
}
