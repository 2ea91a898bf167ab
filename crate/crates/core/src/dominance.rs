//! Operator dominance certificate for states close in fidelity to a known
//! pure state, plus the saturating witness used by the tightness tests.
//!
//! For every state sigma with <psi|sigma|psi> >= 1 - eps and every mu >= -1,
//!
//!     sigma <= N = (1 + mu)|psi><psi| + z(eps, mu) * I,
//!     z(eps, mu) = ( sqrt(mu^2 + 4 eps (1 + mu)) - mu ) / 2.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix, Ket};

/// The certificate N = (1 + mu)|psi><psi| + z(eps, mu) I together with the
/// parameters it was built from.
#[derive(Debug, Clone)]
pub struct DominanceCertificate {
    pub psi: Ket,
    pub epsilon: f64,
    pub mu: f64,
    pub n: HermitianMatrix,
}

fn check_domain(epsilon: f64, mu: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in [0, 1], got {epsilon}"
        )));
    }
    if !(mu >= -1.0) {
        return Err(Error::InvalidParameter(format!(
            "mu must satisfy mu >= -1, got {mu}"
        )));
    }
    Ok(())
}

/// Identity coefficient z(eps, mu) = ( sqrt(mu^2 + 4 eps (1+mu)) - mu ) / 2.
///
/// Nonnegative and monotonically non-increasing in mu; tends to eps as
/// mu -> infinity.
pub fn z_coeff(epsilon: f64, mu: f64) -> Result<f64> {
    check_domain(epsilon, mu)?;
    Ok(0.5 * ((mu * mu + 4.0 * epsilon * (1.0 + mu)).sqrt() - mu))
}

/// Builds the dominance operator for the given reference state.
pub fn dominance_operator(psi: &Ket, epsilon: f64, mu: f64) -> Result<DominanceCertificate> {
    let z = z_coeff(epsilon, mu)?;
    let d = psi.dim();
    let n = psi
        .outer()
        .scale(Complex64::new(1.0 + mu, 0.0))
        .add(&ComplexMatrix::identity(d).scale(Complex64::new(z, 0.0)));
    Ok(DominanceCertificate {
        psi: psi.clone(),
        epsilon,
        mu,
        n: HermitianMatrix::new(n).expect("dominance operator is Hermitian by construction"),
    })
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

/// Random unit vector orthogonal to `psi`; requires dim >= 2.
fn random_orthogonal(rng: &mut ChaCha8Rng, psi: &Ket) -> Ket {
    loop {
        let raw = random_unit(rng, psi.dim());
        let overlap = psi.inner(&raw);
        let amps: Vec<Complex64> = raw
            .amps()
            .iter()
            .zip(psi.amps())
            .map(|(r, p)| r - overlap * p)
            .collect();
        if let Ok(k) = Ket::normalized(amps) {
            return k;
        }
    }
}

/// Samples a density matrix with <psi|sigma|psi> >= 1 - eps by mixing up to
/// eight randomly perturbed pure states. The perturbation strengths are
/// rescaled so the mean fidelity deficit hits eps exactly on half of the
/// draws and lands strictly inside the constraint on the other half; the
/// returned matrix is a deterministic function of the seed.
pub fn sample_close_state(psi: &Ket, epsilon: f64, seed: u64) -> HermitianMatrix {
    assert!((0.0..=1.0).contains(&epsilon), "epsilon out of range");
    let d = psi.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    if epsilon == 0.0 || d == 1 {
        return HermitianMatrix::new(psi.outer()).expect("projector is Hermitian");
    }

    let k = rng.gen_range(1..=8usize);
    let mut weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);

    // Raw deficits in [0, 1]; individual components may exceed eps as long
    // as the weighted mean stays within it.
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..1.0)).collect();
    let mean: f64 = weights.iter().zip(&raw).map(|(w, x)| w * x).sum();
    let target = if rng.gen_bool(0.5) {
        epsilon
    } else {
        epsilon * rng.gen_range(0.0..1.0)
    };
    let scale = if mean > 0.0 {
        (target / mean).min(1.0 / raw.iter().copied().fold(0.0, f64::max).max(1e-300))
    } else {
        0.0
    };
    let deficits: Vec<f64> = raw.iter().map(|x| (x * scale).min(1.0)).collect();

    let mut sigma = ComplexMatrix::zeros(d, d);
    for (w, xi) in weights.iter().zip(&deficits) {
        let perp = random_orthogonal(&mut rng, psi);
        // Random relative phase between the psi and perpendicular parts.
        let phase = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        let amps: Vec<Complex64> = psi
            .amps()
            .iter()
            .zip(perp.amps())
            .map(|(p, q)| p * (1.0 - xi).sqrt() + q * xi.sqrt() * phase)
            .collect();
        let component = Ket::normalized(amps).expect("perturbed state is unit norm");
        sigma = sigma.add(&component.outer().scale(Complex64::new(*w, 0.0)));
    }
    HermitianMatrix::new(sigma).expect("mixture of projectors is Hermitian")
}

/// Builds the boundary state sigma* = |phi_eps><phi_eps| and the probe
/// |phi*> = x_opt |psi> + sqrt(1 - x_opt^2) |psi_perp| that together satisfy
/// <phi*|(N - sigma*)|phi*> = 0 for N = dominance_operator(psi, eps, mu).
///
/// The probe direction uses
/// x_opt = (1/sqrt 2) sqrt(1 - (mu + 2 eps)/sqrt(mu^2 + 4 eps (1 + mu))),
/// with all coefficients real and nonnegative in the {psi, psi_perp} plane.
pub fn saturating_witness(
    psi: &Ket,
    epsilon: f64,
    mu: f64,
) -> Result<(HermitianMatrix, Ket)> {
    check_domain(epsilon, mu)?;
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "saturating witness needs epsilon strictly inside (0, 1), got {epsilon}"
        )));
    }
    let d = psi.dim();
    if d < 2 {
        return Err(Error::UnsupportedDimension(
            "no orthogonal direction exists in dimension 1".into(),
        ));
    }

    // Deterministic orthogonal direction: orthogonalize the basis vector
    // least aligned with psi.
    let least = (0..d)
        .min_by(|&i, &j| {
            psi.amps()[i]
                .norm()
                .partial_cmp(&psi.amps()[j].norm())
                .unwrap()
        })
        .unwrap();
    let e = Ket::basis_vector(d, least);
    let overlap = psi.inner(&e);
    let perp = Ket::normalized(
        e.amps()
            .iter()
            .zip(psi.amps())
            .map(|(ek, pk)| ek - overlap * pk)
            .collect(),
    )
    .expect("basis vector least aligned with psi has an orthogonal component");

    let boundary = Ket::normalized(
        psi.amps()
            .iter()
            .zip(perp.amps())
            .map(|(p, q)| p * (1.0 - epsilon).sqrt() + q * epsilon.sqrt())
            .collect(),
    )
    .expect("boundary state is unit norm");
    let sigma_star = HermitianMatrix::new(boundary.outer()).expect("projector is Hermitian");

    let root = (mu * mu + 4.0 * epsilon * (1.0 + mu)).sqrt();
    let x_opt = ((1.0 - (mu + 2.0 * epsilon) / root).max(0.0) / 2.0).sqrt();
    let probe = Ket::normalized(
        psi.amps()
            .iter()
            .zip(perp.amps())
            .map(|(p, q)| p * x_opt + q * (1.0 - x_opt * x_opt).max(0.0).sqrt())
            .collect(),
    )
    .expect("probe is unit norm");

    Ok((sigma_star, probe))
}
