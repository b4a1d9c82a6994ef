use num_complex::Complex64;

use super::{AlgebraElement, FdCStarAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Smallest density eigenvalue accepted as faithful.
pub const FAITHFULNESS_FLOOR: f64 = 1e-12;
/// Tolerance for positivity, hermiticity and normalisation of states.
pub const STATE_TOL: f64 = 1e-9;

/// `ω(x) = Σ_k tr(ρ_k x_k)` for a density `ρ` in the same algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFunctional {
    density: AlgebraElement,
}

impl LinearFunctional {
    pub fn from_density(density: AlgebraElement) -> Self {
        Self { density }
    }

    /// Functional with prescribed values on the canonical basis.
    pub fn from_values(algebra: &FdCStarAlgebra, values: &[Complex64]) -> Result<Self> {
        if values.len() != algebra.dim() {
            return Err(Error::InvalidMatrix(format!(
                "{} values for algebra of dimension {}",
                values.len(),
                algebra.dim()
            )));
        }
        let mut density = AlgebraElement::zero(algebra);
        for (i, &v) in values.iter().enumerate() {
            let u = algebra.matrix_unit(i);
            // ω(E_rs) = ρ_sr
            density.blocks_mut()[u.block][(u.col, u.row)] = v;
        }
        Ok(Self { density })
    }

    /// Normalised trace: every block weighted by its size, `ω(I) = 1`.
    pub fn normalized_trace(algebra: &FdCStarAlgebra) -> Self {
        let total: usize = algebra.block_dims().iter().sum();
        Self::from_density(AlgebraElement::scalar(algebra, Complex64::new(1.0 / total as f64, 0.0)))
    }

    /// Uniform probability measure on `ℂⁿ`; on a general algebra this is the
    /// normalised trace.
    pub fn uniform(algebra: &FdCStarAlgebra) -> Self {
        Self::normalized_trace(algebra)
    }

    /// Evaluation of the 1×1 block `block`.
    pub fn point_evaluation(algebra: &FdCStarAlgebra, block: usize) -> Result<Self> {
        match algebra.block_dims().get(block) {
            Some(1) => {
                let idx = algebra.basis_index(super::MatrixUnit { block, row: 0, col: 0 });
                Ok(Self::from_density(algebra.basis_element(idx)))
            }
            Some(n) => Err(Error::InvalidCharacter(format!("block {block} has size {n}, not 1"))),
            None => Err(Error::InvalidCharacter(format!("no block {block}"))),
        }
    }

    pub fn algebra(&self) -> &FdCStarAlgebra {
        self.density.algebra()
    }

    pub fn density(&self) -> &AlgebraElement {
        &self.density
    }

    pub fn evaluate(&self, x: &AlgebraElement) -> Result<Complex64> {
        self.algebra().ensure_same(x.algebra(), "functional evaluation")?;
        Ok(self
            .density
            .blocks()
            .iter()
            .zip(x.blocks())
            .map(|(rho, xb)| (rho * xb).trace())
            .sum())
    }

    /// Values on the canonical basis.
    pub fn values(&self) -> Vec<Complex64> {
        let a = self.algebra();
        (0..a.dim())
            .map(|i| {
                let u = a.matrix_unit(i);
                self.density.block(u.block)[(u.col, u.row)]
            })
            .collect()
    }

    fn min_eigenvalue(&self) -> f64 {
        self.density
            .blocks()
            .iter()
            .flat_map(linalg::hermitian_eigenvalues)
            .fold(f64::INFINITY, f64::min)
    }

    fn hermiticity_defect(&self) -> f64 {
        self.density.blocks().iter().map(|b| linalg::max_abs(&(b - b.adjoint()))).fold(0.0, f64::max)
    }

    /// Positive and normalised.
    pub fn classify_state(&self) -> bool {
        let unit = self.evaluate(&self.algebra().identity()).expect("same algebra");
        self.hermiticity_defect() <= STATE_TOL
            && self.min_eigenvalue() >= -STATE_TOL
            && (unit - Complex64::new(1.0, 0.0)).norm() <= STATE_TOL
    }

    pub fn classify_faithful(&self) -> bool {
        self.hermiticity_defect() <= STATE_TOL && self.min_eigenvalue() >= FAITHFULNESS_FLOOR
    }

    /// Every density block is a nonnegative multiple of the identity.
    pub fn classify_trace(&self) -> bool {
        self.density.blocks().iter().all(|b| {
            let n = b.nrows();
            let c = b[(0, 0)];
            c.im.abs() <= STATE_TOL
                && c.re >= -STATE_TOL
                && linalg::max_abs(&(b - CMatrix::identity(n, n) * c)) <= STATE_TOL
        })
    }

    pub fn is_faithful_state(&self) -> bool {
        self.classify_state() && self.classify_faithful()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn values_round_trip() {
        let a = FdCStarAlgebra::new(&[2, 1]).unwrap();
        let vals: Vec<Complex64> = (0..5).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let w = LinearFunctional::from_values(&a, &vals).unwrap();
        assert_eq!(w.values(), vals);
        for i in 0..a.dim() {
            assert_eq!(w.evaluate(&a.basis_element(i)).unwrap(), vals[i]);
        }
    }

    #[test]
    fn classification() {
        let m2 = FdCStarAlgebra::matrices(2).unwrap();
        let tr = LinearFunctional::normalized_trace(&m2);
        assert!(tr.classify_state() && tr.classify_faithful() && tr.classify_trace());

        let rho = AlgebraElement::from_coordinates(&m2, &[c(1.0 / 3.0), c(0.0), c(0.0), c(2.0 / 3.0)]).unwrap();
        let w = LinearFunctional::from_density(rho);
        assert!(w.classify_state() && w.classify_faithful() && !w.classify_trace());

        let c2 = FdCStarAlgebra::commutative(2).unwrap();
        let pure = LinearFunctional::from_values(&c2, &[c(1.0), c(0.0)]).unwrap();
        assert!(pure.classify_state());
        assert!(!pure.classify_faithful());
        // on a commutative algebra every positive functional is a trace
        assert!(pure.classify_trace());

        let negative = LinearFunctional::from_values(&c2, &[c(1.5), c(-0.5)]).unwrap();
        assert!(!negative.classify_state());
        let unnormalised = LinearFunctional::from_values(&c2, &[c(1.0), c(1.0)]).unwrap();
        assert!(!unnormalised.classify_state());
    }

    #[test]
    fn point_evaluations() {
        let a = FdCStarAlgebra::new(&[1, 2]).unwrap();
        assert!(LinearFunctional::point_evaluation(&a, 0).is_ok());
        assert!(matches!(LinearFunctional::point_evaluation(&a, 1), Err(Error::InvalidCharacter(_))));
    }
}
