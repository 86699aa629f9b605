//! Dense complex linear algebra for the 2- and 4-dimensional operators used
//! throughout the crate.
//!
//! Matrices are stored row-major. The eigensolver is a cyclic complex Jacobi
//! method: each rotation first removes the phase of the pivot element and then
//! applies an ordinary real Jacobi rotation, so all arithmetic stays in
//! `Complex64` and the eigenvectors are accumulated as unitary columns.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance used when checking that an input to the eigensolver is Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Eigenvalues above `-PSD_CLIP` are treated as zero, below it as a violation.
pub const PSD_CLIP: f64 = 1e-9;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_OFF_DIAG_TOL: f64 = 1e-14;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Square complex matrix of arbitrary (small) dimension.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        CMatrix {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = re(1.0);
        }
        m
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let diag: Vec<C64> = diag.iter().map(|&d| re(d)).collect();
        Self::from_diag(&diag)
    }

    /// Builds a matrix from row-major entries. Panics if `entries.len()` is not
    /// a perfect square.
    pub fn from_row_major(entries: Vec<C64>) -> Self {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        assert_eq!(dim * dim, entries.len(), "entry count must be dim²");
        assert!(dim > 0);
        CMatrix { dim, data: entries }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "rows must form a square");
        Self::from_row_major(rows.iter().flatten().copied().collect())
    }

    /// Splits real and imaginary parts; both must be `dim × dim`.
    pub fn from_parts(re_part: &[Vec<f64>], im_part: &[Vec<f64>]) -> Result<Self> {
        let dim = re_part.len();
        if dim == 0
            || im_part.len() != dim
            || re_part.iter().chain(im_part).any(|r| r.len() != dim)
        {
            return Err(Error::InvalidState(
                "real and imaginary parts must be equal-sized square arrays".into(),
            ));
        }
        let data = re_part
            .iter()
            .zip(im_part)
            .flat_map(|(r, i)| r.iter().zip(i).map(|(&a, &b)| c(a, b)))
            .collect();
        Ok(CMatrix { dim, data })
    }

    /// `|ψ⟩⟨ψ|`
    pub fn outer(ket: &[C64]) -> Self {
        Self::outer_pair(ket, ket)
    }

    /// `|a⟩⟨b|`
    pub fn outer_pair(a: &[C64], b: &[C64]) -> Self {
        assert_eq!(a.len(), b.len());
        let dim = a.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = a[i] * b[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn real_part(&self) -> Vec<Vec<f64>> {
        self.rows().map(|r| r.iter().map(|z| z.re).collect()).collect()
    }

    pub fn imag_part(&self) -> Vec<Vec<f64>> {
        self.rows().map(|r| r.iter().map(|z| z.im).collect()).collect()
    }

    fn rows(&self) -> impl Iterator<Item = &[C64]> {
        self.data.chunks(self.dim)
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(re(s))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max-norm of the entrywise difference. Panics on dimension mismatch.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |A[i][j] − conj(A[j][i])|`
    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// True when Hermitian within `tol` and the smallest eigenvalue is `≥ −tol`.
    pub fn is_psd(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol.max(HERMITIAN_TOL)) {
            return false;
        }
        match hermitian_eig(self) {
            Ok(eig) => eig.eigenvalues[0] >= -tol,
            Err(_) => false,
        }
    }

    /// `⟨a|M|b⟩`
    pub fn sandwich(&self, a: &[C64], b: &[C64]) -> C64 {
        assert_eq!(a.len(), self.dim);
        assert_eq!(b.len(), self.dim);
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.dim {
            let mut row = C64::new(0.0, 0.0);
            for j in 0..self.dim {
                row += self[(i, j)] * b[j];
            }
            acc += a[i].conj() * row;
        }
        acc
    }

    /// Element-wise `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        out
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in product");
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in sum");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in difference");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{}) [", self.dim, self.dim)?;
        for row in self.rows() {
            write!(f, "  ")?;
            for z in row {
                write!(f, "{:>9.5}{:+.5}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[i]` is the unit vector for `eigenvalues[i]`.
    pub eigenvectors: Vec<Vec<C64>>,
}

impl HermitianEigen {
    /// `Σᵢ f(λᵢ) vᵢvᵢ†`
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let dim = self.eigenvalues.len();
        let mut out = CMatrix::zeros(dim);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let w = f(*lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..dim {
                for j in 0..dim {
                    out[(i, j)] += v[i] * v[j].conj() * w;
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_with(|l| l)
    }
}

fn off_diagonal_mass(a: &CMatrix) -> f64 {
    let mut s = 0.0;
    for i in 0..a.dim {
        for j in 0..a.dim {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// The input must be Hermitian within [`HERMITIAN_TOL`]; it is symmetrized
/// before iterating. Sweeps stop once the off-diagonal Frobenius mass falls
/// below `1e-14` relative to `max(1, ‖A‖_F)`.
pub fn hermitian_eig(a: &CMatrix) -> Result<HermitianEigen> {
    let deviation = a.hermitian_deviation();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let n = a.dim;
    let mut m = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    let threshold = JACOBI_OFF_DIAG_TOL * m.frobenius_norm().max(1.0);

    let mut converged = off_diagonal_mass(&m) < threshold;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_mass(&m) < threshold;
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps,
            residual: off_diagonal_mass(&m),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let eigenvectors = order
        .iter()
        .map(|&col| (0..n).map(|row| v[(row, col)]).collect())
        .collect();
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// One complex Jacobi rotation zeroing `m[p][q]`; accumulates into `v`.
fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let r = apq.norm();
    if r < f64::MIN_POSITIVE {
        return;
    }
    let phase = apq / r; // e^{iθ}
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let cs = 1.0 / (1.0 + t * t).sqrt();
    let sn = t * cs;

    // G = [[c, s], [-s e^{-iθ}, c e^{-iθ}]] acting on columns p, q.
    let g_pp = re(cs);
    let g_pq = re(sn);
    let g_qp = -phase.conj() * sn;
    let g_qq = phase.conj() * cs;

    let n = m.dim;
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * g_pp + mkq * g_qp;
        m[(k, q)] = mkp * g_pq + mkq * g_qq;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = g_pp.conj() * mpk + g_qp.conj() * mqk;
        m[(q, k)] = g_pq.conj() * mpk + g_qq.conj() * mqk;
    }
    m[(p, q)] = re(0.0);
    m[(q, p)] = re(0.0);
    m[(p, p)] = re(app - t * r);
    m[(q, q)] = re(aqq + t * r);
}

/// Principal square root of a Hermitian PSD matrix.
///
/// Eigenvalues in `[-1e-9, 0)` are clipped to zero; anything lower is an error.
pub fn matrix_sqrt(a: &CMatrix) -> Result<CMatrix> {
    let eig = hermitian_eig(a)?;
    let min_eigenvalue = eig.eigenvalues[0];
    if min_eigenvalue < -PSD_CLIP {
        return Err(Error::NotPsd { min_eigenvalue });
    }
    Ok(eig.reconstruct_with(|l| l.max(0.0).sqrt()))
}

/// Kronecker product with `a` as the left (most significant) factor.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (na, nb) = (a.dim, b.dim);
    let mut out = CMatrix::zeros(na * nb);
    for i in 0..na {
        for j in 0..na {
            let aij = a[(i, j)];
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k, j * nb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Tensor product of two state vectors, `a` as the left factor.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter()
        .flat_map(|&x| b.iter().map(move |&y| x * y))
        .collect()
}

/// Which qubit of a two-qubit operator survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Reduced 2×2 operator of a 4×4 two-qubit operator, keeping `keep`.
pub fn partial_trace(a: &CMatrix, keep: Subsystem) -> Result<CMatrix> {
    if a.dim != 4 {
        return Err(Error::UnsupportedDimension {
            dim: a.dim,
            expected: 4,
        });
    }
    let mut out = CMatrix::zeros(2);
    for i in 0..2 {
        for j in 0..2 {
            let mut s = re(0.0);
            for t in 0..2 {
                // index = 2·first + second
                s += match keep {
                    Subsystem::First => a[(2 * i + t, 2 * j + t)],
                    Subsystem::Second => a[(2 * t + i, 2 * t + j)],
                };
            }
            out[(i, j)] = s;
        }
    }
    Ok(out)
}
