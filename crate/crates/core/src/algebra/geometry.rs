//! State-induced geometry: ω-orthonormal bases and the modular map.

use num_complex::Complex64;

use super::{AlgebraElement, FdCStarAlgebra, LinearFunctional, FAITHFULNESS_FLOOR};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};

/// Gram matrix `G_ij = ω(e_i* e_j)` of the canonical basis.
fn gram_matrix(algebra: &FdCStarAlgebra, omega: &LinearFunctional) -> CMatrix {
    let d = algebra.dim();
    let w = omega.values();
    let mut g = CMatrix::zeros(d, d);
    for i in 0..d {
        let i_star = algebra.basis_adjoint(i);
        for j in 0..d {
            if let Some(k) = algebra.basis_product(i_star, j) {
                g[(i, j)] = w[k];
            }
        }
    }
    g
}

fn check_faithful(algebra: &FdCStarAlgebra, omega: &LinearFunctional) -> Result<CMatrix> {
    algebra.ensure_same(omega.algebra(), "state")?;
    let g = gram_matrix(algebra, omega);
    let min = linalg::hermitian_eigenvalues(&g).into_iter().fold(f64::INFINITY, f64::min);
    if min < FAITHFULNESS_FLOOR || linalg::max_abs(&(&g - g.adjoint())) > 1e-9 {
        return Err(Error::DegenerateState(format!(
            "Gram matrix of the canonical basis has minimum eigenvalue {min:.3e} (floor {FAITHFULNESS_FLOOR:.0e})"
        )));
    }
    Ok(g)
}

/// Gram–Schmidt over the canonical basis, in canonical order, for the scalar
/// product `⟨x, y⟩ = ω(x* y)`.
pub fn orthonormal_basis(algebra: &FdCStarAlgebra, omega: &LinearFunctional) -> Result<Vec<AlgebraElement>> {
    let g = check_faithful(algebra, omega)?;
    let d = algebra.dim();
    let inner = |u: &CVector, v: &CVector| -> Complex64 { (u.adjoint() * &g * v)[(0, 0)] };
    let mut done: Vec<CVector> = Vec::with_capacity(d);
    for i in 0..d {
        let mut v = CVector::zeros(d);
        v[i] = Complex64::new(1.0, 0.0);
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for u in &done {
                let c = inner(u, &v);
                v -= u * c;
            }
        }
        let norm = inner(&v, &v).re.sqrt();
        if !(norm > FAITHFULNESS_FLOOR.sqrt()) {
            return Err(Error::DegenerateState(format!("basis vector {i} collapsed during orthonormalisation")));
        }
        v /= Complex64::new(norm, 0.0);
        done.push(v);
    }
    Ok(done.iter().map(|v| AlgebraElement::from_vector(algebra, v)).collect())
}

/// The invertible linear map `σ` with `ω(xy) = ω(y σ(x))`, as a matrix acting
/// on canonical coordinates. For a density `ρ` it is `x ↦ ρ x ρ⁻¹` blockwise.
#[derive(Clone, Debug)]
pub struct ModularMap {
    algebra: FdCStarAlgebra,
    matrix: CMatrix,
    inverse: CMatrix,
}

impl ModularMap {
    pub fn algebra(&self) -> &FdCStarAlgebra {
        &self.algebra
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &CMatrix {
        &self.inverse
    }

    pub fn apply(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.algebra.ensure_same(x.algebra(), "modular map argument")?;
        Ok(AlgebraElement::from_vector(&self.algebra, &(&self.matrix * x.to_vector())))
    }

    pub fn apply_inverse(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.algebra.ensure_same(x.algebra(), "modular map argument")?;
        Ok(AlgebraElement::from_vector(&self.algebra, &(&self.inverse * x.to_vector())))
    }

    /// Largest entry of `σ − id` in canonical coordinates.
    pub fn distance_from_identity(&self) -> f64 {
        let d = self.algebra.dim();
        linalg::max_abs(&(&self.matrix - CMatrix::identity(d, d)))
    }
}

/// Solves `ω(e_i σ(x)) = ω(x e_i)` for every canonical `e_i`.
pub fn sigma_map(algebra: &FdCStarAlgebra, omega: &LinearFunctional) -> Result<ModularMap> {
    check_faithful(algebra, omega)?;
    let d = algebra.dim();
    let w = omega.values();
    // K_ij = ω(e_i e_j)
    let mut k = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            if let Some(p) = algebra.basis_product(i, j) {
                k[(i, j)] = w[p];
            }
        }
    }
    let lu = k.clone().lu();
    let matrix = lu
        .solve(&k.transpose())
        .ok_or_else(|| Error::DegenerateState("modular system is singular".into()))?;
    let inverse = matrix
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::DegenerateState("modular map is not invertible".into()))?;
    Ok(ModularMap { algebra: algebra.clone(), matrix, inverse })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use rand::SeedableRng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn gram_defect(basis: &[AlgebraElement], omega: &LinearFunctional) -> f64 {
        let mut worst: f64 = 0.0;
        for (l, x) in basis.iter().enumerate() {
            for (t, y) in basis.iter().enumerate() {
                let v = omega.evaluate(&(&x.adjoint() * y)).unwrap();
                let target = if l == t { c(1.0) } else { c(0.0) };
                worst = worst.max((v - target).norm());
            }
        }
        worst
    }

    #[test]
    fn trace_on_two_points() {
        let a = FdCStarAlgebra::commutative(2).unwrap();
        let basis = orthonormal_basis(&a, &LinearFunctional::normalized_trace(&a)).unwrap();
        let s = 2f64.sqrt();
        assert!((basis[0].block(0)[(0, 0)] - c(s)).norm() < 1e-14);
        assert!((basis[1].block(1)[(0, 0)] - c(s)).norm() < 1e-14);
        assert!(basis[0].block(1)[(0, 0)].norm() < 1e-14);
    }

    #[test]
    fn trace_on_matrices_gives_scaled_units() {
        for n in 1..=3 {
            let a = FdCStarAlgebra::matrices(n).unwrap();
            let basis = orthonormal_basis(&a, &LinearFunctional::normalized_trace(&a)).unwrap();
            for (i, m) in basis.iter().enumerate() {
                let expected = a.basis_element(i).scale(c((n as f64).sqrt()));
                assert!(m.distance(&expected) < 1e-12);
            }
        }
    }

    #[test]
    fn non_faithful_is_degenerate() {
        let a = FdCStarAlgebra::commutative(2).unwrap();
        let w = LinearFunctional::from_values(&a, &[c(1.0), c(0.0)]).unwrap();
        assert!(matches!(orthonormal_basis(&a, &w), Err(Error::DegenerateState(_))));
        assert!(matches!(sigma_map(&a, &w), Err(Error::DegenerateState(_))));
    }

    #[test]
    fn random_faithful_states_give_orthonormal_bases() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for dims in [vec![2], vec![2, 1], vec![3, 1, 2]] {
            let a = FdCStarAlgebra::new(&dims).unwrap();
            let w = random::faithful_state(&a, &mut rng);
            let basis = orthonormal_basis(&a, &w).unwrap();
            assert_eq!(basis.len(), a.dim());
            assert!(gram_defect(&basis, &w) <= 1e-9);
        }
    }

    #[test]
    fn sigma_is_identity_for_traces() {
        let m2 = FdCStarAlgebra::matrices(2).unwrap();
        let s = sigma_map(&m2, &LinearFunctional::normalized_trace(&m2)).unwrap();
        assert!(s.distance_from_identity() <= 1e-12);
        let mut rng = rand::rngs::StdRng::seed_from_u64(12);
        let c3 = FdCStarAlgebra::commutative(3).unwrap();
        let s = sigma_map(&c3, &random::faithful_state(&c3, &mut rng)).unwrap();
        assert!(s.distance_from_identity() <= 1e-12);
    }

    #[test]
    fn sigma_for_diagonal_density_is_conjugation() {
        let m2 = FdCStarAlgebra::matrices(2).unwrap();
        let rho = AlgebraElement::from_coordinates(&m2, &[c(1.0 / 3.0), c(0.0), c(0.0), c(2.0 / 3.0)]).unwrap();
        let rho_inv = AlgebraElement::from_coordinates(&m2, &[c(3.0), c(0.0), c(0.0), c(1.5)]).unwrap();
        let w = LinearFunctional::from_density(rho.clone());
        let s = sigma_map(&m2, &w).unwrap();
        for x in m2.basis() {
            let expected = &(&rho * &x) * &rho_inv;
            assert!(s.apply(&x).unwrap().distance(&expected) <= 1e-12);
        }
    }

    #[test]
    fn sigma_defining_relation_and_inverse() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(13);
        let a = FdCStarAlgebra::new(&[2, 1, 3]).unwrap();
        let w = random::faithful_state(&a, &mut rng);
        let s = sigma_map(&a, &w).unwrap();
        let basis = a.basis();
        for x in &basis {
            let sx = s.apply(x).unwrap();
            for y in &basis {
                let lhs = w.evaluate(&(x * y)).unwrap();
                let rhs = w.evaluate(&(y * &sx)).unwrap();
                assert!((lhs - rhs).norm() <= 1e-9);
            }
            assert!(s.apply_inverse(&sx).unwrap().distance(x) <= 1e-9);
        }
    }
}
