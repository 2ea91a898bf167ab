//! Dense complex-matrix kernel for small dimensions (d <= ~64).
//!
//! Provides the handful of primitives the rest of the crate needs: Kronecker
//! products, Hermitian eigendecomposition (cyclic Jacobi with a phase-aligned
//! complex rotation), PSD certificates and pure-state fidelity. Everything is
//! a pure function on immutable values.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Validating constructor; entries must be finite and match the shape.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "expected {rows}x{cols} = {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// Largest entrywise |self - other|.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from the conjugate transpose.
    pub fn hermiticity_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Unit-norm complex vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amps: Vec<Complex64>,
}

impl Ket {
    /// Validating constructor: requires unit norm within the default tolerance.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::DimensionMismatch("empty ket".into()));
        }
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let dev = (norm - 1.0).abs();
        if dev > tol::DEFAULT.unit_norm {
            return Err(Error::NotNormalized {
                deviation: dev,
                tol: tol::DEFAULT.unit_norm,
            });
        }
        Ok(Ket { amps })
    }

    /// Normalizes the amplitudes; errors on the zero vector.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < 1e-14 {
            return Err(Error::InvalidParameter(
                "cannot normalize a (near-)zero vector".into(),
            ));
        }
        let inv = 1.0 / norm;
        Ket::new(amps.into_iter().map(|z| z * inv).collect())
    }

    /// Computational basis vector |k> in dimension `dim`.
    pub fn basis_vector(dim: usize, k: usize) -> Self {
        assert!(k < dim);
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[k] = Complex64::new(1.0, 0.0);
        Ket { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    /// Inner product <self|other>.
    pub fn inner(&self, other: &Ket) -> Complex64 {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Squared overlap |<self|other>|^2.
    pub fn overlap2(&self, other: &Ket) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Rank-one projector |self><self|.
    pub fn outer(&self) -> ComplexMatrix {
        let d = self.dim();
        ComplexMatrix::from_fn(d, d, |i, j| self.amps[i] * self.amps[j].conj())
    }
}

/// Square matrix certified Hermitian at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Validates squareness and Hermiticity within the default tolerance.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(m, tol::DEFAULT.hermiticity)
    }

    pub fn with_tolerance(m: ComplexMatrix, tolerance: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let dev = m.hermiticity_deviation();
        if dev > tolerance {
            return Err(Error::NotHermitian {
                deviation: dev,
                tol: tolerance,
            });
        }
        Ok(HermitianMatrix(m))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }
}

/// Kronecker product A (x) B.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca) = (a.rows(), a.cols());
    let (rb, cb) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(ra * rb, ca * cb, |i, j| {
        a[(i / rb, j / cb)] * b[(i % rb, j % cb)]
    })
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
///
/// Returns eigenvalues in ascending order with matching orthonormal
/// eigenvectors. Eigenvectors within a degenerate block are orthonormal but
/// carry no canonical ordering.
pub fn eig_hermitian(h: &HermitianMatrix) -> (Vec<f64>, Vec<Ket>) {
    let n = h.dim();
    let mut a = h.as_matrix().clone();
    let mut q = ComplexMatrix::identity(n);

    // Scale-aware stopping threshold on the off-diagonal Frobenius mass.
    let fro: f64 = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| a[(i, j)].norm_sqr())
        .sum::<f64>()
        .sqrt();
    let stop = (1e-15 * fro.max(1.0)).powi(2);

    for _sweep in 0..60 {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |r| (p, r)))
            .map(|(p, r)| a[(p, r)].norm_sqr())
            .sum();
        if off <= stop {
            break;
        }
        for p in 0..n {
            for r in p + 1..n {
                let apr = a[(p, r)];
                let m = apr.norm();
                if m <= 1e-300 {
                    continue;
                }
                let app = a[(p, p)].re;
                let arr = a[(r, r)].re;
                // Phase that makes the pivot real, then a real Jacobi rotation.
                let e = apr / m;
                let tau = (arr - app) / (2.0 * m);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let ec = e.conj();

                // Columns: A <- A V with V = [[c, s], [-s e*, c e*]] on (p, r).
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akr = a[(k, r)];
                    a[(k, p)] = akp * c - akr * s * ec;
                    a[(k, r)] = akp * s + akr * c * ec;
                }
                // Rows: A <- V^dag A.
                for k in 0..n {
                    let apk = a[(p, k)];
                    let ark = a[(r, k)];
                    a[(p, k)] = apk * c - ark * s * e;
                    a[(r, k)] = apk * s + ark * c * e;
                }
                // Accumulate eigenvectors: Q <- Q V.
                for k in 0..n {
                    let qkp = q[(k, p)];
                    let qkr = q[(k, r)];
                    q[(k, p)] = qkp * c - qkr * s * ec;
                    q[(k, r)] = qkp * s + qkr * c * ec;
                }
                // Clear rounding residue on the pivot pair.
                a[(p, r)] = Complex64::new(0.0, 0.0);
                a[(r, p)] = Complex64::new(0.0, 0.0);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());

    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors: Vec<Ket> = order
        .iter()
        .map(|&col| {
            let amps: Vec<Complex64> = (0..n).map(|row| q[(row, col)]).collect();
            // Jacobi keeps columns unit-norm to machine precision; renormalize
            // anyway so Ket's invariant cannot trip on accumulated rounding.
            Ket::normalized(amps).expect("Jacobi eigenvector must be nonzero")
        })
        .collect();
    (values, vectors)
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eig(h: &HermitianMatrix) -> f64 {
    eig_hermitian(h).0[0]
}

/// PSD certificate: true iff the smallest eigenvalue is >= -tolerance.
pub fn is_psd(h: &HermitianMatrix, tolerance: f64) -> bool {
    min_eig(h) >= -tolerance
}

/// Pure-state fidelity <psi| sigma |psi>.
pub fn fidelity_pure(sigma: &HermitianMatrix, psi: &Ket) -> Result<f64> {
    if sigma.dim() != psi.dim() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity_pure: operator dim {} vs state dim {}",
            sigma.dim(),
            psi.dim()
        )));
    }
    let sv = sigma.as_matrix().mul_vec(psi.amps());
    let f: Complex64 = psi
        .amps()
        .iter()
        .zip(&sv)
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(f.re)
}

/// Largest eigenpair of a nonnegative combination of rank-one dyads,
/// `W = sum_k w_k |v_k><v_k|` with `w_k >= 0`.
///
/// The dominant eigenvector lies in span{v_k}, so the problem is reduced to
/// that subspace when it is smaller than the ambient dimension. Returns
/// `None` when all weights vanish.
pub fn dominant_eig_of_dyads(dim: usize, dyads: &[(f64, &Ket)]) -> Option<(f64, Ket)> {
    let active: Vec<&(f64, &Ket)> = dyads.iter().filter(|(w, _)| *w > 0.0).collect();
    if active.is_empty() {
        return None;
    }

    // Orthonormal span basis via modified Gram-Schmidt.
    let mut span: Vec<Vec<Complex64>> = Vec::new();
    for (_, v) in &active {
        let mut u: Vec<Complex64> = v.amps().to_vec();
        for b in &span {
            let ip: Complex64 = b.iter().zip(&u).map(|(x, y)| x.conj() * y).sum();
            for (uk, bk) in u.iter_mut().zip(b) {
                *uk -= ip * bk;
            }
        }
        let norm = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-10 {
            let inv = 1.0 / norm;
            span.push(u.into_iter().map(|z| z * inv).collect());
        }
        if span.len() == dim {
            break;
        }
    }
    let m = span.len();

    // W in span coordinates: M[i][j] = sum_k w_k <b_i|v_k><v_k|b_j>.
    let mut proj = ComplexMatrix::zeros(m, m);
    for (w, v) in &active {
        let coords: Vec<Complex64> = span
            .iter()
            .map(|b| b.iter().zip(v.amps()).map(|(x, y)| x.conj() * y).sum())
            .collect();
        for i in 0..m {
            for j in 0..m {
                proj[(i, j)] += coords[i] * coords[j].conj() * *w;
            }
        }
    }
    let herm = HermitianMatrix::with_tolerance(proj, 1e-9)
        .expect("projected dyad sum must be Hermitian");
    let (vals, vecs) = eig_hermitian(&herm);
    let top_val = vals[m - 1];
    let top = &vecs[m - 1];

    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for (coef, b) in top.amps().iter().zip(&span) {
        for (a, bk) in amps.iter_mut().zip(b) {
            *a += coef * bk;
        }
    }
    Some((
        top_val,
        Ket::normalized(amps).expect("dominant eigenvector must be nonzero"),
    ))
}
