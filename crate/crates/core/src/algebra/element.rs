use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::FdCStarAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

/// An element of a finite-dimensional C*-algebra, stored block by block.
///
/// The arithmetic operators panic when the operands live in different
/// algebras; the `try_*` methods report the mismatch as an error instead.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    algebra: FdCStarAlgebra,
    blocks: Vec<CMatrix>,
}

impl AlgebraElement {
    pub fn zero(algebra: &FdCStarAlgebra) -> Self {
        let blocks = algebra.block_dims().iter().map(|&n| CMatrix::zeros(n, n)).collect();
        Self { algebra: algebra.clone(), blocks }
    }

    pub fn identity(algebra: &FdCStarAlgebra) -> Self {
        let blocks = algebra.block_dims().iter().map(|&n| CMatrix::identity(n, n)).collect();
        Self { algebra: algebra.clone(), blocks }
    }

    pub fn scalar(algebra: &FdCStarAlgebra, z: Complex64) -> Self {
        Self::identity(algebra).scale(z)
    }

    pub fn from_blocks(algebra: &FdCStarAlgebra, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != algebra.num_blocks() {
            return Err(Error::InvalidMatrix(format!(
                "expected {} blocks, got {}",
                algebra.num_blocks(),
                blocks.len()
            )));
        }
        for (k, (b, &n)) in blocks.iter().zip(algebra.block_dims()).enumerate() {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::InvalidMatrix(format!(
                    "block {k} has shape {}x{}, expected {n}x{n}",
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        Ok(Self { algebra: algebra.clone(), blocks })
    }

    /// Coordinates in the canonical basis.
    pub fn from_coordinates(algebra: &FdCStarAlgebra, coords: &[Complex64]) -> Result<Self> {
        if coords.len() != algebra.dim() {
            return Err(Error::InvalidMatrix(format!(
                "coordinate vector of length {} for algebra of dimension {}",
                coords.len(),
                algebra.dim()
            )));
        }
        let blocks = algebra
            .block_dims()
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                let off = algebra.block_offset(k);
                CMatrix::from_row_slice(n, n, &coords[off..off + n * n])
            })
            .collect();
        Ok(Self { algebra: algebra.clone(), blocks })
    }

    pub(crate) fn from_vector(algebra: &FdCStarAlgebra, v: &CVector) -> Self {
        Self::from_coordinates(algebra, v.as_slice()).expect("vector length matches dimension")
    }

    pub fn coordinates(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.algebra.dim());
        for b in &self.blocks {
            for r in 0..b.nrows() {
                for c in 0..b.ncols() {
                    out.push(b[(r, c)]);
                }
            }
        }
        out
    }

    pub(crate) fn to_vector(&self) -> CVector {
        CVector::from_vec(self.coordinates())
    }

    pub fn algebra(&self) -> &FdCStarAlgebra {
        &self.algebra
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub(crate) fn blocks_mut(&mut self) -> &mut [CMatrix] {
        &mut self.blocks
    }

    pub fn block(&self, k: usize) -> &CMatrix {
        &self.blocks[k]
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.algebra.ensure_same(&other.algebra, "add")?;
        Ok(self.zip_blocks(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.algebra.ensure_same(&other.algebra, "subtract")?;
        Ok(self.zip_blocks(other, |a, b| a - b))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.algebra.ensure_same(&other.algebra, "multiply")?;
        Ok(self.zip_blocks(other, |a, b| {
            if linalg::is_zero(a) || linalg::is_zero(b) {
                CMatrix::zeros(a.nrows(), b.ncols())
            } else {
                a * b
            }
        }))
    }

    fn zip_blocks(&self, other: &Self, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Self {
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| f(a, b)).collect();
        Self { algebra: self.algebra.clone(), blocks }
    }

    pub fn scale(&self, z: Complex64) -> Self {
        let blocks = self.blocks.iter().map(|b| b * z).collect();
        Self { algebra: self.algebra.clone(), blocks }
    }

    /// Blockwise conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let blocks = self.blocks.iter().map(|b| b.adjoint()).collect();
        Self { algebra: self.algebra.clone(), blocks }
    }

    /// Blockwise entrywise complex conjugate. Depends on the matrix-unit basis.
    pub fn conjugate(&self) -> Self {
        let blocks = self.blocks.iter().map(|b| b.map(|z| z.conj())).collect();
        Self { algebra: self.algebra.clone(), blocks }
    }

    /// C*-norm: the largest singular value over all blocks.
    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(linalg::spectral_norm).fold(0.0, f64::max)
    }

    /// Largest absolute coordinate.
    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(linalg::max_abs).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(linalg::is_zero)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// `‖x − y‖`, panicking on mismatched algebras.
    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
}

impl<'a> Add<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_add(rhs).expect("operands in the same algebra")
    }
}

impl<'a> Sub<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_sub(rhs).expect("operands in the same algebra")
    }
}

impl<'a> Mul<&'a AlgebraElement> for &'a AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_mul(rhs).expect("operands in the same algebra")
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use rand::SeedableRng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn unit_law_and_involution() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let a = FdCStarAlgebra::new(&[2, 1]).unwrap();
        for _ in 0..20 {
            let x = random::element(&a, &mut rng);
            assert!((&a.identity() * &x).distance(&x) == 0.0);
            assert_eq!(x.adjoint().adjoint(), x);
        }
    }

    #[test]
    fn adjoint_reverses_products() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(2);
        let a = FdCStarAlgebra::new(&[3, 1, 2]).unwrap();
        for _ in 0..100 {
            let x = random::element(&a, &mut rng);
            let y = random::element(&a, &mut rng);
            let lhs = (&x * &y).adjoint();
            let rhs = &y.adjoint() * &x.adjoint();
            assert!(lhs.distance(&rhs) <= 1e-12);
        }
    }

    #[test]
    fn mismatched_algebras_are_rejected() {
        let a = FdCStarAlgebra::new(&[2]).unwrap();
        let b = FdCStarAlgebra::new(&[1, 1]).unwrap();
        let err = a.identity().try_mul(&b.identity()).unwrap_err();
        assert!(matches!(err, Error::IncompatibleAlgebra(_)));
        assert!(a.identity().try_add(&b.identity()).is_err());
    }

    #[test]
    fn operator_norms() {
        let m3 = FdCStarAlgebra::matrices(3).unwrap();
        assert!((m3.identity().norm() - 1.0).abs() < 1e-15);
        let c2 = FdCStarAlgebra::commutative(2).unwrap();
        let d = AlgebraElement::from_coordinates(&c2, &[c(3.0), c(-4.0)]).unwrap();
        assert!((d.norm() - 4.0).abs() < 1e-15);
        let m2 = FdCStarAlgebra::matrices(2).unwrap();
        assert!((m2.basis_element(1).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn coordinates_round_trip() {
        let a = FdCStarAlgebra::new(&[2, 1]).unwrap();
        let coords: Vec<Complex64> = (0..5).map(|i| Complex64::new(i as f64, -(i as f64))).collect();
        let x = AlgebraElement::from_coordinates(&a, &coords).unwrap();
        assert_eq!(x.coordinates(), coords);
        assert_eq!(x.block(0)[(1, 0)], coords[2]);
    }

    #[test]
    fn shape_checks() {
        let a = FdCStarAlgebra::new(&[2, 1]).unwrap();
        assert!(AlgebraElement::from_blocks(&a, vec![CMatrix::zeros(2, 2)]).is_err());
        assert!(AlgebraElement::from_blocks(&a, vec![CMatrix::zeros(2, 2), CMatrix::zeros(2, 2)]).is_err());
        assert!(AlgebraElement::from_coordinates(&a, &[c(0.0); 4]).is_err());
    }
}
