//! Lower bounds on the imprecise-measurement LHS value from explicit
//! unsteerable strategies: enumeration over deterministic Alice responses
//! with alternating closed-form updates of Bob's state and his
//! fidelity-constrained measurement rays.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{dominant_eig_of_dyads, ComplexMatrix, HermitianMatrix, Ket};
use crate::scenario::{ImprecisionProfile, SteeringFunctional, TargetMeasurements};

/// Options for the seesaw search.
#[derive(Debug, Clone, Copy)]
pub struct SeesawOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
    /// Max number of deterministic Alice responses enumerated exhaustively.
    pub cap: u64,
    /// Allow the greedy assignment search when the cap is exceeded.
    pub heuristic: bool,
}

impl Default for SeesawOptions {
    fn default() -> Self {
        SeesawOptions {
            restarts: 20,
            max_iters: 500,
            tol: 1e-11,
            seed: 0,
            cap: 1_000_000,
            heuristic: false,
        }
    }
}

/// An explicit unsteerable strategy: deterministic Alice response, a local
/// state for Bob and rank-one lab measurement vectors honoring the fidelity
/// constraints. Its value is a certified lower bound on the imprecise LHS
/// maximum.
#[derive(Debug, Clone)]
pub struct LHSStrategy {
    pub assignment: Vec<usize>,
    /// Lab measurement vectors, shaped like the target list ([y][b]).
    pub bob_rays: Vec<Vec<Ket>>,
    pub bob_state: Ket,
    pub value: f64,
    /// True when the Alice response came from the greedy search rather than
    /// exhaustive enumeration.
    pub heuristic_assignment: bool,
}

impl LHSStrategy {
    /// Validates feasibility against the targets/imprecision profile and
    /// recomputes the value from scratch.
    pub fn new(
        f: &SteeringFunctional,
        targets: &TargetMeasurements,
        eps: &ImprecisionProfile,
        assignment: Vec<usize>,
        bob_rays: Vec<Vec<Ket>>,
        bob_state: Ket,
        heuristic_assignment: bool,
    ) -> Result<Self> {
        if assignment.len() != f.n_x() || assignment.iter().any(|&a| a >= f.d()) {
            return Err(Error::InvalidParameter(
                "assignment shape does not match the functional".into(),
            ));
        }
        for y in 0..f.n_y() {
            for b in 0..f.d() {
                if !f.carries(b, y) {
                    continue;
                }
                let target = match targets.vector(b, y) {
                    Some(t) => t,
                    None => continue,
                };
                let ray = bob_rays
                    .get(y)
                    .and_then(|row| row.get(b))
                    .ok_or_else(|| {
                        Error::DimensionMismatch(format!("missing lab ray for (b={b}, y={y})"))
                    })?;
                let fid = ray.overlap2(target);
                let allowed = eps.get(b, y);
                if fid < 1.0 - allowed - 1e-10 {
                    return Err(Error::InvalidParameter(format!(
                        "lab ray (b={b}, y={y}) violates its fidelity constraint: \
                         {fid} < 1 - {allowed}"
                    )));
                }
            }
        }
        let value = strategy_value(f, &assignment, &bob_rays, &bob_state);
        Ok(LHSStrategy {
            assignment,
            bob_rays,
            bob_state,
            value,
            heuristic_assignment,
        })
    }

    /// Expands the strategy into explicit operators for re-evaluation:
    /// 1-dimensional deterministic POVMs for Alice, rank-one projectors for
    /// Bob, and rho = [1] (x) |state><state|.
    pub fn to_operators(
        &self,
        f: &SteeringFunctional,
    ) -> (Vec<Vec<ComplexMatrix>>, Vec<Vec<ComplexMatrix>>, HermitianMatrix) {
        let alice = self
            .assignment
            .iter()
            .map(|&ax| {
                (0..f.d())
                    .map(|a| {
                        let v = if a == ax { 1.0 } else { 0.0 };
                        ComplexMatrix::new(1, 1, vec![Complex64::new(v, 0.0)]).unwrap()
                    })
                    .collect()
            })
            .collect();
        let bob = self
            .bob_rays
            .iter()
            .map(|row| row.iter().map(|ray| ray.outer()).collect())
            .collect();
        let rho = HermitianMatrix::new(self.bob_state.outer()).expect("projector is Hermitian");
        (alice, bob, rho)
    }
}

fn strategy_value(
    f: &SteeringFunctional,
    assignment: &[usize],
    rays: &[Vec<Ket>],
    state: &Ket,
) -> f64 {
    f.terms()
        .iter()
        .filter(|t| assignment[t.x] == t.a)
        .map(|t| match rays.get(t.y).and_then(|row| row.get(t.b)) {
            Some(ray) => t.value * ray.overlap2(state),
            None => 0.0,
        })
        .sum()
}

/// Maximizes |<v|objective>|^2 over unit v subject to |<v|target>|^2 >= 1 - eps.
///
/// If the unconstrained optimum v = objective is feasible it is returned
/// directly; otherwise the optimum sits on the constraint boundary inside
/// span{target, objective} (the objective matrix is rank one, so nothing
/// outside that plane can help):
/// v = sqrt(1-eps) e^{i theta} target + sqrt(eps) u, with u the normalized
/// component of the objective orthogonal to the target and theta aligning
/// the phases.
pub fn constrained_ray_update(target: &Ket, objective_ray: &Ket, epsilon: f64) -> Ket {
    assert!((0.0..=1.0).contains(&epsilon));
    let o = target.inner(objective_ray);
    if o.norm_sqr() >= 1.0 - epsilon {
        return objective_ray.clone();
    }
    let perp: Vec<Complex64> = objective_ray
        .amps()
        .iter()
        .zip(target.amps())
        .map(|(s, t)| s - o * t)
        .collect();
    let w = perp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if w < 1e-14 {
        // Objective parallel to the target with the constraint active.
        return target.clone();
    }
    let phase = if o.norm() > 1e-300 {
        o / o.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let ct = (1.0 - epsilon).sqrt();
    let cp = epsilon.sqrt() / w;
    Ket::normalized(
        target
            .amps()
            .iter()
            .zip(&perp)
            .map(|(t, p)| t * ct * phase + p * cp)
            .collect(),
    )
    .expect("boundary ray is unit norm")
}

/// Orthocomplement of a qubit ray.
fn qubit_orthocomplement(v: &Ket) -> Ket {
    debug_assert_eq!(v.dim(), 2);
    Ket::new(vec![-v.amps()[1].conj(), v.amps()[0].conj()]).expect("orthocomplement is unit norm")
}

struct Branch<'a> {
    f: &'a SteeringFunctional,
    targets: &'a TargetMeasurements,
    eps: &'a ImprecisionProfile,
    /// Per basis: whether the qubit completeness coupling applies (both
    /// outcomes tracked as an orthonormal pair).
    couple: Vec<bool>,
    /// Per basis: tightest imprecision over coefficient-carrying outcomes.
    eps_eff: Vec<f64>,
}

impl<'a> Branch<'a> {
    fn new(
        f: &'a SteeringFunctional,
        targets: &'a TargetMeasurements,
        eps: &'a ImprecisionProfile,
    ) -> Self {
        // A qubit basis listing two orthonormal targets is projectively
        // simulable only as {P, 1 - P}: its two lab vectors must stay an
        // orthonormal pair, which ties both fidelity constraints to the same
        // ray. Without that coupling the two rays could both drift toward
        // Bob's state, which no mixture of projective measurements realizes.
        let mut couple = vec![false; f.n_y()];
        let mut eps_eff = vec![1.0_f64; f.n_y()];
        for y in 0..f.n_y() {
            let carrying: Vec<usize> = (0..f.d()).filter(|&b| f.carries(b, y)).collect();
            let mut tight = 1.0_f64;
            for &b in &carrying {
                if targets.vector(b, y).is_some() {
                    tight = tight.min(eps.get(b, y));
                }
            }
            eps_eff[y] = tight;
            if f.d() == 2 && targets.basis(y).len() == 2 {
                let t0 = &targets.basis(y)[0];
                let t1 = &targets.basis(y)[1];
                couple[y] = t0.inner(t1).norm() < 1e-9;
            }
        }
        Branch {
            f,
            targets,
            eps,
            couple,
            eps_eff,
        }
    }

    fn initial_rays(&self) -> Vec<Vec<Ket>> {
        (0..self.f.n_y())
            .map(|y| self.targets.basis(y).to_vec())
            .collect()
    }

    fn randomize_rays(&self, rays: &mut [Vec<Ket>], rng: &mut ChaCha8Rng) {
        let d = self.f.d();
        for y in 0..self.f.n_y() {
            let random = random_unit(rng, d);
            if self.couple[y] {
                let tilt = rng.gen_range(0.0..=1.0) * self.eps_eff[y];
                let v = constrained_ray_update(&self.targets.basis(y)[0], &random, tilt);
                rays[y][1] = qubit_orthocomplement(&v);
                rays[y][0] = v;
            } else {
                for (b, ray) in rays[y].iter_mut().enumerate() {
                    if self.f.carries(b, y) {
                        let tilt = rng.gen_range(0.0..=1.0) * self.eps.get(b, y);
                        *ray = constrained_ray_update(&self.targets.basis(y)[b], &random, tilt);
                    }
                }
            }
        }
    }

    /// Exact maximization of the rays given Bob's state. Only rays with
    /// weight matter for the value; unweighted coefficient-carrying rays are
    /// left at their targets (trivially feasible), except in heuristic mode
    /// where the assignment may move onto them next round.
    fn update_rays(
        &self,
        rays: &mut [Vec<Ket>],
        state: &Ket,
        weights: &[Vec<f64>],
        tilt_all_carrying: bool,
    ) {
        for y in 0..self.f.n_y() {
            if self.couple[y] {
                let w0 = weights[y][0];
                let w1 = weights[y][1];
                if w0 == 0.0 && w1 == 0.0 && !tilt_all_carrying {
                    continue;
                }
                let leader = if w1 > w0 { 1 } else { 0 };
                let t = &self.targets.basis(y)[leader];
                let v = constrained_ray_update(t, state, self.eps_eff[y]);
                rays[y][1 - leader] = qubit_orthocomplement(&v);
                rays[y][leader] = v;
            } else {
                for b in 0..rays[y].len() {
                    let active = weights[y][b] > 0.0
                        || (tilt_all_carrying && self.f.carries(b, y));
                    if active {
                        rays[y][b] = constrained_ray_update(
                            &self.targets.basis(y)[b],
                            state,
                            self.eps.get(b, y),
                        );
                    }
                }
            }
        }
    }

    fn state_update(&self, rays: &[Vec<Ket>], weights: &[Vec<f64>], current: &Ket) -> Ket {
        let mut dyads: Vec<(f64, &Ket)> = Vec::new();
        for (y, row) in weights.iter().enumerate() {
            for (b, &w) in row.iter().enumerate() {
                if w > 0.0 {
                    if let Some(ray) = rays[y].get(b) {
                        dyads.push((w, ray));
                    }
                }
            }
        }
        match dominant_eig_of_dyads(self.f.d(), &dyads) {
            Some((_, state)) => state,
            None => current.clone(),
        }
    }

    /// Alternates exact block updates until the value improvement drops
    /// below tol. Returns (rays, state, value).
    fn run(
        &self,
        assignment: &[usize],
        restart: usize,
        opts: &SeesawOptions,
        rng: &mut ChaCha8Rng,
    ) -> (Vec<Vec<Ket>>, Ket, f64) {
        let weights = self.f.assignment_weights(assignment);
        let mut rays = self.initial_rays();
        if restart > 0 {
            self.randomize_rays(&mut rays, rng);
        }
        let mut state = Ket::basis_vector(self.f.d(), 0);
        let mut value = f64::NEG_INFINITY;
        for _ in 0..opts.max_iters {
            state = self.state_update(&rays, &weights, &state);
            self.update_rays(&mut rays, &state, &weights, false);
            let new_value = strategy_value(self.f, assignment, &rays, &state);
            assert!(
                new_value >= value - 1e-12,
                "seesaw ascent broke monotonicity: {new_value} < {value}"
            );
            if new_value - value < opts.tol {
                value = new_value;
                break;
            }
            value = new_value;
        }
        (rays, state, value)
    }

    /// Heuristic variant that also re-optimizes the Alice response each
    /// round; used above the enumeration cap.
    fn run_heuristic(
        &self,
        opts: &SeesawOptions,
        rng: &mut ChaCha8Rng,
    ) -> (Vec<usize>, Vec<Vec<Ket>>, Ket, f64) {
        let d = self.f.d();
        let mut assignment: Vec<usize> =
            (0..self.f.n_x()).map(|_| rng.gen_range(0..d)).collect();
        let mut rays = self.initial_rays();
        self.randomize_rays(&mut rays, rng);
        let mut state = Ket::basis_vector(d, 0);
        let mut value = f64::NEG_INFINITY;
        for _ in 0..opts.max_iters {
            let weights = self.f.assignment_weights(&assignment);
            state = self.state_update(&rays, &weights, &state);
            self.update_rays(&mut rays, &state, &weights, true);
            assignment = self.best_assignment(&rays, &state);
            let new_value = strategy_value(self.f, &assignment, &rays, &state);
            assert!(new_value >= value - 1e-12, "heuristic ascent regressed");
            if new_value - value < opts.tol {
                value = new_value;
                break;
            }
            value = new_value;
        }
        (assignment, rays, state, value)
    }

    /// Per-input argmax of the response given fixed rays and state; the
    /// objective separates over x.
    fn best_assignment(&self, rays: &[Vec<Ket>], state: &Ket) -> Vec<usize> {
        let mut gain = vec![vec![0.0; self.f.d()]; self.f.n_x()];
        for t in self.f.terms() {
            if let Some(ray) = rays.get(t.y).and_then(|row| row.get(t.b)) {
                gain[t.x][t.a] += t.value * ray.overlap2(state);
            }
        }
        gain.iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                    .map(|(a, _)| a)
                    .unwrap_or(0)
            })
            .collect()
    }
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Ket {
    loop {
        let amps: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if let Ok(k) = Ket::normalized(amps) {
            return k;
        }
    }
}

fn check_inputs(
    f: &SteeringFunctional,
    targets: &TargetMeasurements,
    eps: &ImprecisionProfile,
) -> Result<()> {
    if targets.d() != f.d() || targets.n_y() != f.n_y() {
        return Err(Error::DimensionMismatch(format!(
            "targets ({}, {} bases) do not match functional (d={}, n_y={})",
            targets.d(),
            targets.n_y(),
            f.d(),
            f.n_y()
        )));
    }
    for t in f.terms() {
        if targets.vector(t.b, t.y).is_none() {
            continue; // missing operator acts as zero
        }
        if t.y >= eps.n_y() || t.b >= eps.rows()[t.y].len() {
            return Err(Error::DimensionMismatch(format!(
                "imprecision profile lacks an entry for (b={}, y={})",
                t.b, t.y
            )));
        }
    }
    Ok(())
}

fn decode_assignment(mut index: u64, d: usize, n_x: usize) -> Vec<usize> {
    let mut a = vec![0usize; n_x];
    for slot in a.iter_mut() {
        *slot = (index % d as u64) as usize;
        index /= d as u64;
    }
    a
}

/// Best explicit unsteerable strategy found by alternating maximization,
/// taken over deterministic Alice responses and random restarts.
pub fn seesaw_lower_bound(
    f: &SteeringFunctional,
    targets: &TargetMeasurements,
    eps: &ImprecisionProfile,
    opts: &SeesawOptions,
) -> Result<LHSStrategy> {
    check_inputs(f, targets, eps)?;
    let branch = Branch::new(f, targets, eps);
    let restarts = opts.restarts.max(1);
    let count = f.assignment_count();

    if count > opts.cap as f64 {
        if !opts.heuristic {
            return Err(Error::EnumerationInfeasible {
                assignments: count,
                cap: opts.cap,
            });
        }
        let best = (0..restarts as u64)
            .into_par_iter()
            .map(|r| {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
                rng.set_stream(r + 1);
                let (assignment, rays, state, value) = branch.run_heuristic(opts, &mut rng);
                (value, r, assignment, rays, state)
            })
            .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
            .expect("at least one restart");
        let (_, _, assignment, rays, state) = best;
        return LHSStrategy::new(f, targets, eps, assignment, rays, state, true);
    }

    let count = count as u64;
    let best = (0..count * restarts as u64)
        .into_par_iter()
        .map(|branch_id| {
            let idx = branch_id / restarts as u64;
            let restart = (branch_id % restarts as u64) as usize;
            let assignment = decode_assignment(idx, f.d(), f.n_x());
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(branch_id + 1);
            let (rays, state, value) = branch.run(&assignment, restart, opts, &mut rng);
            (value, branch_id, assignment, rays, state)
        })
        .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
        .expect("at least one branch");
    let (_, _, assignment, rays, state) = best;
    LHSStrategy::new(f, targets, eps, assignment, rays, state, false)
}

/// Scans ascending uniform imprecision values and returns the first at which
/// the seesaw exceeds the ideal bound beta0 by more than `gap_tol`;
/// +infinity when the scan never leaves the plateau.
pub fn plateau_threshold(
    f: &SteeringFunctional,
    targets: &TargetMeasurements,
    eps_scan: &[f64],
    opts: &SeesawOptions,
    gap_tol: f64,
) -> Result<f64> {
    if eps_scan.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter(
            "epsilon scan must be ascending".into(),
        ));
    }
    let beta0 = crate::scenario::beta0_exact(f, targets, opts.cap)?
        .result
        .value;
    for &e in eps_scan {
        let profile = ImprecisionProfile::uniform(f.n_y(), f.d(), e)?;
        let strat = seesaw_lower_bound(f, targets, &profile, opts)?;
        if strat.value > beta0 + gap_tol {
            return Ok(e);
        }
    }
    Ok(f64::INFINITY)
}
