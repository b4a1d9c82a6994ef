//! Small dense linear-algebra helpers shared by the verification routines.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Relative cut used for every numeric rank decision.
pub const RANK_CUT: f64 = 1e-9;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Largest singular value. Zero for an empty matrix.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    if m.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return 0.0;
    }
    if m.nrows() == 1 || m.ncols() == 1 {
        return m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    }
    m.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().cloned().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Numeric rank with singular values cut at `RANK_CUT` times the largest.
pub fn numeric_rank(m: &CMatrix) -> usize {
    let s = singular_values(m);
    match s.first() {
        None => 0,
        Some(&0.0) => 0,
        Some(&top) => s.iter().filter(|&&x| x >= RANK_CUT * top).count(),
    }
}

/// Orthonormal basis (as columns) of the null space of `m`.
pub fn null_space(m: &CMatrix) -> Vec<CVector> {
    let n = m.ncols();
    if m.nrows() < n {
        // pad to make the thin SVD carry a full right factor
        let mut padded = CMatrix::zeros(n, n);
        padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
        return null_space(&padded);
    }
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let top = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let mut out = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if top == 0.0 || s < RANK_CUT * top {
            out.push(v_t.row(i).adjoint());
        }
    }
    out
}

/// Distance from `target` to the column span of `spanning`, using the same rank cut.
pub fn span_residual(spanning: &CMatrix, target: &CVector) -> f64 {
    if spanning.ncols() == 0 {
        return target.norm();
    }
    let svd = spanning.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let top = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let mut projection = CVector::zeros(target.len());
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if top > 0.0 && s >= RANK_CUT * top {
            let col = u.column(i);
            let coeff = col.dotc(target);
            projection += col * coeff;
        }
    }
    (target - projection).norm()
}

/// Eigenvalues of a Hermitian matrix (only the Hermitian part is used).
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    nalgebra::SymmetricEigen::new(herm).eigenvalues.iter().cloned().collect()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn is_zero(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re == 0.0 && z.im == 0.0)
}

/// Kronecker product `a ⊗ b` with `a`'s index major.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rank_and_null_space_of_rank_one() {
        let m = CMatrix::from_row_slice(3, 2, &[c(1.0), c(2.0), c(2.0), c(4.0), c(0.0), c(0.0)]);
        assert_eq!(numeric_rank(&m), 1);
        let ns = null_space(&m);
        assert_eq!(ns.len(), 1);
        assert!((&m * &ns[0]).norm() < 1e-12);
    }

    #[test]
    fn wide_null_space() {
        let m = CMatrix::from_row_slice(1, 3, &[c(1.0), c(1.0), c(1.0)]);
        let ns = null_space(&m);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!((&m * &v).norm() < 1e-12);
        }
    }

    #[test]
    fn residual_detects_membership() {
        let m = CMatrix::from_row_slice(3, 1, &[c(1.0), c(1.0), c(0.0)]);
        let inside = CVector::from_vec(vec![c(2.0), c(2.0), c(0.0)]);
        let outside = CVector::from_vec(vec![c(0.0), c(0.0), c(1.0)]);
        assert!(span_residual(&m, &inside) < 1e-12);
        assert!((span_residual(&m, &outside) - 1.0).abs() < 1e-12);
    }
}
