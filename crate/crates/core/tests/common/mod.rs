#![allow(dead_code)]

use werner_metrology::linalg::{c, hermitian_eig, CMatrix};
use werner_metrology::states::DensityMatrix;

/// Hermitian matrix from `dim²` real numbers: the upper triangle (incl.
/// diagonal) takes real parts, the strict lower triangle imaginary parts.
pub fn hermitian_from(dim: usize, xs: &[f64]) -> CMatrix {
    assert!(xs.len() >= dim * dim);
    let mut m = CMatrix::zeros(dim);
    for i in 0..dim {
        m[(i, i)] = c(xs[i * dim + i], 0.0);
        for j in (i + 1)..dim {
            let z = c(xs[i * dim + j], xs[j * dim + i]);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// General complex matrix from `2·dim²` reals.
pub fn complex_from(dim: usize, xs: &[f64]) -> CMatrix {
    assert!(xs.len() >= 2 * dim * dim);
    CMatrix::from_row_major((0..dim * dim).map(|k| c(xs[2 * k], xs[2 * k + 1])).collect())
}

/// `B†B`
pub fn psd_from(dim: usize, xs: &[f64]) -> CMatrix {
    let b = complex_from(dim, xs);
    &b.adjoint() * &b
}

/// `B†B / Tr(B†B)`
pub fn density_from(dim: usize, xs: &[f64]) -> DensityMatrix {
    let m = psd_from(dim, xs);
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr).hermitian_part()).expect("valid by construction")
}

/// Random POVM `S^{-1/2} Aₖ S^{-1/2}` with `S = Σ Aₖ`, from `k·2·dim²` reals.
pub fn povm_elements(dim: usize, k: usize, xs: &[f64]) -> Vec<CMatrix> {
    let chunk = 2 * dim * dim;
    let parts: Vec<CMatrix> = (0..k).map(|i| psd_from(dim, &xs[i * chunk..(i + 1) * chunk])).collect();
    let sum = parts.iter().fold(CMatrix::zeros(dim), |acc, a| &acc + a);
    let inv_sqrt = hermitian_eig(&sum).unwrap().reconstruct_with(|l| 1.0 / l.sqrt());
    parts
        .iter()
        .map(|a| (&(&inv_sqrt * a) * &inv_sqrt).hermitian_part())
        .collect()
}
