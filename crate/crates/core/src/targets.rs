//! Constructors for the standard target measurement families: computational
//! basis, Fourier basis, Weyl-Heisenberg MUB families in prime dimension and
//! the qubit Pauli bases.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Ket};
use crate::tol;

/// A labelled list of orthonormal bases on one Hilbert space.
#[derive(Debug, Clone)]
pub struct BasisFamily {
    pub d: usize,
    pub bases: Vec<Vec<Ket>>,
    pub label: String,
}

impl BasisFamily {
    pub fn n_bases(&self) -> usize {
        self.bases.len()
    }
}

/// Discrete Fourier transform F = (1/sqrt d) sum_jk e^{2 pi i jk/d} |j><k|.
pub fn fourier_matrix(d: usize) -> ComplexMatrix {
    assert!(d >= 2);
    let norm = 1.0 / (d as f64).sqrt();
    ComplexMatrix::from_fn(d, d, |j, k| {
        let phase = 2.0 * PI * (j as f64) * (k as f64) / d as f64;
        Complex64::from_polar(norm, phase)
    })
}

fn computational_basis(d: usize) -> Vec<Ket> {
    (0..d).map(|k| Ket::basis_vector(d, k)).collect()
}

fn fourier_basis(d: usize) -> Vec<Ket> {
    let f = fourier_matrix(d);
    (0..d)
        .map(|j| {
            let amps = (0..d).map(|k| f[(k, j)]).collect();
            Ket::new(amps).expect("Fourier columns are unit vectors")
        })
        .collect()
}

/// Computational plus Fourier basis; mutually unbiased in every dimension.
pub fn mub_pair(d: usize) -> BasisFamily {
    assert!(d >= 2);
    BasisFamily {
        d,
        bases: vec![computational_basis(d), fourier_basis(d)],
        label: "mub-pair".into(),
    }
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Weyl-Heisenberg MUB family in prime dimension `d`: the computational basis
/// followed by `n - 1` Fourier-type bases with quadratic phases
/// e^{2 pi i (m k^2 + j k)/d}. The first two bases coincide with
/// [`mub_pair`]. For d = 2 the family is the Pauli Z, X, Y eigenbases.
pub fn wh_mubs(d: usize, n: usize) -> Result<BasisFamily> {
    if !is_prime(d) {
        return Err(Error::UnsupportedDimension(format!(
            "Weyl-Heisenberg MUB construction requires prime d, got {d}"
        )));
    }
    if n < 2 || n > d + 1 {
        return Err(Error::InvalidParameter(format!(
            "number of MUBs must satisfy 2 <= n <= d + 1 = {}, got {n}",
            d + 1
        )));
    }
    let label = format!("wh-mubs:{n}");
    if d == 2 {
        // The quadratic-phase construction needs odd d; the qubit complete
        // set is just the Pauli eigenbases.
        let bases: Vec<Vec<Ket>> = [PauliAxis::Z, PauliAxis::X, PauliAxis::Y]
            .iter()
            .take(n)
            .map(|ax| pauli_eigenbasis(*ax))
            .collect();
        return Ok(BasisFamily { d, bases, label });
    }

    let norm = 1.0 / (d as f64).sqrt();
    let mut bases = vec![computational_basis(d)];
    for m in 0..n - 1 {
        let basis = (0..d)
            .map(|j| {
                let amps = (0..d)
                    .map(|k| {
                        let quad = (m * k * k + j * k) % d;
                        Complex64::from_polar(norm, 2.0 * PI * quad as f64 / d as f64)
                    })
                    .collect();
                Ket::new(amps).expect("quadratic-phase vectors are unit vectors")
            })
            .collect();
        bases.push(basis);
    }
    Ok(BasisFamily { d, bases, label })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// Eigenbasis of a Pauli operator; index 0 is the +1 eigenvector.
pub fn pauli_eigenbasis(axis: PauliAxis) -> Vec<Ket> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let (plus, minus) = match axis {
        PauliAxis::Z => (vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]),
        PauliAxis::X => (vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]),
        PauliAxis::Y => (vec![c(s, 0.0), c(0.0, s)], vec![c(s, 0.0), c(0.0, -s)]),
    };
    vec![Ket::new(plus).unwrap(), Ket::new(minus).unwrap()]
}

/// Qubit bases in X, Y, Z order (as used by the tetrahedron Bell witness).
pub fn pauli_xyz() -> BasisFamily {
    BasisFamily {
        d: 2,
        bases: vec![
            pauli_eigenbasis(PauliAxis::X),
            pauli_eigenbasis(PauliAxis::Y),
            pauli_eigenbasis(PauliAxis::Z),
        ],
        label: "pauli-xyz".into(),
    }
}

/// Qubit bases in X, Z, Y order (as used by the three-term qubit steering
/// inequality).
pub fn pauli_xzy() -> BasisFamily {
    BasisFamily {
        d: 2,
        bases: vec![
            pauli_eigenbasis(PauliAxis::X),
            pauli_eigenbasis(PauliAxis::Z),
            pauli_eigenbasis(PauliAxis::Y),
        ],
        label: "pauli-xzy".into(),
    }
}

/// Checks orthonormality of every basis and pairwise unbiasedness
/// | |<e_b|f_b'>|^2 - 1/d | <= tol between distinct bases.
pub fn check_mub(fam: &BasisFamily, tolerance: f64) -> bool {
    let d = fam.d;
    let target = 1.0 / d as f64;
    for basis in &fam.bases {
        if basis.len() != d {
            return false;
        }
        for (i, u) in basis.iter().enumerate() {
            for (j, v) in basis.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                if (u.inner(v).norm() - expect).abs() > tolerance {
                    return false;
                }
            }
        }
    }
    for (a, basis_a) in fam.bases.iter().enumerate() {
        for basis_b in fam.bases.iter().skip(a + 1) {
            for u in basis_a {
                for v in basis_b {
                    if (u.overlap2(v) - target).abs() > tolerance {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Resolves the named target families accepted in inequality specification
/// files: "computational", "mub-pair", "wh-mubs:n", "pauli-xyz", "pauli-xzy".
pub fn family_from_label(label: &str, d: usize) -> Result<BasisFamily> {
    match label {
        "computational" => Ok(BasisFamily {
            d,
            bases: vec![computational_basis(d)],
            label: label.into(),
        }),
        "mub-pair" => Ok(mub_pair(d)),
        "pauli-xyz" => {
            require_qubit(label, d)?;
            Ok(pauli_xyz())
        }
        "pauli-xzy" => {
            require_qubit(label, d)?;
            Ok(pauli_xzy())
        }
        _ => {
            if let Some(n) = label.strip_prefix("wh-mubs:") {
                let n: usize = n.parse().map_err(|_| {
                    Error::InvalidParameter(format!("bad MUB count in target label '{label}'"))
                })?;
                wh_mubs(d, n)
            } else {
                Err(Error::InvalidParameter(format!(
                    "unknown target family '{label}'"
                )))
            }
        }
    }
}

fn require_qubit(label: &str, d: usize) -> Result<()> {
    if d != 2 {
        return Err(Error::UnsupportedDimension(format!(
            "target family '{label}' requires d = 2, got {d}"
        )));
    }
    Ok(())
}

/// Default MUB-check tolerance re-exported for callers.
pub fn default_basis_tolerance() -> f64 {
    tol::DEFAULT.basis
}
