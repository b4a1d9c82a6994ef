use num_complex::Complex64;

use super::{AlgebraElement, FdCStarAlgebra, LinearFunctional, MatrixUnit};
use crate::error::{Error, Result};
use crate::linalg::{self, CVector};

/// The product `left ⊗ right` together with the bijection between product
/// basis indices and pairs of factor basis indices.
///
/// Blocks are ordered left-factor-major: block `(k, l)` sits at position
/// `k * right.num_blocks() + l` and has size `n_k * m_l`, with matrix indices
/// following the Kronecker convention. Because of this convention
/// `(A ⊗ B) ⊗ C` and `A ⊗ (B ⊗ C)` are the same algebra with the same basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorLayout {
    left: FdCStarAlgebra,
    right: FdCStarAlgebra,
    product: FdCStarAlgebra,
    pair_to_product: Vec<usize>,
    product_to_pair: Vec<(usize, usize)>,
}

impl TensorLayout {
    pub fn new(left: &FdCStarAlgebra, right: &FdCStarAlgebra) -> Self {
        let dims: Vec<usize> = left
            .block_dims()
            .iter()
            .flat_map(|&n| right.block_dims().iter().map(move |&m| n * m))
            .collect();
        let product = FdCStarAlgebra::new(&dims).expect("factor blocks are positive");
        let (dl, dr) = (left.dim(), right.dim());
        let mut pair_to_product = vec![0; dl * dr];
        let mut product_to_pair = vec![(0, 0); product.dim()];
        for i in 0..dl {
            let a = left.matrix_unit(i);
            for j in 0..dr {
                let b = right.matrix_unit(j);
                let m = right.block_dims()[b.block];
                let unit = MatrixUnit {
                    block: a.block * right.num_blocks() + b.block,
                    row: a.row * m + b.row,
                    col: a.col * m + b.col,
                };
                let p = product.basis_index(unit);
                pair_to_product[i * dr + j] = p;
                product_to_pair[p] = (i, j);
            }
        }
        Self { left: left.clone(), right: right.clone(), product, pair_to_product, product_to_pair }
    }

    pub fn left(&self) -> &FdCStarAlgebra {
        &self.left
    }

    pub fn right(&self) -> &FdCStarAlgebra {
        &self.right
    }

    pub fn product(&self) -> &FdCStarAlgebra {
        &self.product
    }

    /// Product basis index of `e_i ⊗ f_j`.
    pub fn pair_index(&self, i: usize, j: usize) -> usize {
        self.pair_to_product[i * self.right.dim() + j]
    }

    pub fn split_index(&self, p: usize) -> (usize, usize) {
        self.product_to_pair[p]
    }

    /// `x ⊗ y` as an element of the product algebra.
    pub fn tensor(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.left.ensure_same(x.algebra(), "left tensor factor")?;
        self.right.ensure_same(y.algebra(), "right tensor factor")?;
        let mut blocks = Vec::with_capacity(self.product.num_blocks());
        for xb in x.blocks() {
            for yb in y.blocks() {
                blocks.push(linalg::kron(xb, yb));
            }
        }
        AlgebraElement::from_blocks(&self.product, blocks)
    }

    /// Coordinates of `x ⊗ y` assembled through the index map.
    pub(crate) fn tensor_coordinates(&self, x: &[Complex64], y: &[Complex64]) -> CVector {
        let mut v = CVector::zeros(self.product.dim());
        for (i, &a) in x.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                v[self.pair_index(i, j)] = a * b;
            }
        }
        v
    }

    /// `(ω ⊗ id)(z)`, an element of the right factor.
    pub fn slice_left(&self, omega: &LinearFunctional, z: &AlgebraElement) -> Result<AlgebraElement> {
        self.left.ensure_same(omega.algebra(), "left slice functional")?;
        self.product.ensure_same(z.algebra(), "sliced element")?;
        let w = omega.values();
        let coords = z.coordinates();
        let mut out = vec![Complex64::new(0.0, 0.0); self.right.dim()];
        for (p, &c) in coords.iter().enumerate() {
            if c != Complex64::new(0.0, 0.0) {
                let (i, j) = self.product_to_pair[p];
                out[j] += c * w[i];
            }
        }
        AlgebraElement::from_coordinates(&self.right, &out)
    }

    /// `(id ⊗ ω)(z)`, an element of the left factor.
    pub fn slice_right(&self, omega: &LinearFunctional, z: &AlgebraElement) -> Result<AlgebraElement> {
        self.right.ensure_same(omega.algebra(), "right slice functional")?;
        self.product.ensure_same(z.algebra(), "sliced element")?;
        let w = omega.values();
        let coords = z.coordinates();
        let mut out = vec![Complex64::new(0.0, 0.0); self.left.dim()];
        for (p, &c) in coords.iter().enumerate() {
            if c != Complex64::new(0.0, 0.0) {
                let (i, j) = self.product_to_pair[p];
                out[i] += c * w[j];
            }
        }
        AlgebraElement::from_coordinates(&self.left, &out)
    }

    /// `ω ⊗ η` on the product algebra.
    pub fn tensor_functionals(&self, omega: &LinearFunctional, eta: &LinearFunctional) -> Result<LinearFunctional> {
        if omega.algebra() != &self.left || eta.algebra() != &self.right {
            return Err(Error::IncompatibleAlgebra("functionals do not match the layout factors".into()));
        }
        let v = self.tensor_coordinates(&omega.values(), &eta.values());
        LinearFunctional::from_values(&self.product, v.as_slice())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use rand::SeedableRng;

    #[test]
    fn block_orderings() {
        let alg = |d: &[usize]| FdCStarAlgebra::new(d).unwrap();
        assert_eq!(TensorLayout::new(&alg(&[2]), &alg(&[3])).product().block_dims(), &[6]);
        assert_eq!(TensorLayout::new(&alg(&[1, 1]), &alg(&[1, 1])).product().block_dims(), &[1, 1, 1, 1]);
        assert_eq!(TensorLayout::new(&alg(&[2, 1]), &alg(&[1, 2])).product().block_dims(), &[2, 4, 1, 2]);
    }

    #[test]
    fn index_maps_are_inverse() {
        let l = TensorLayout::new(&FdCStarAlgebra::new(&[2, 1]).unwrap(), &FdCStarAlgebra::new(&[1, 2]).unwrap());
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(l.split_index(l.pair_index(i, j)), (i, j));
            }
        }
        for p in 0..l.product().dim() {
            let (i, j) = l.split_index(p);
            assert_eq!(l.pair_index(i, j), p);
        }
    }

    #[test]
    fn basis_tensors_match_index_map() {
        let a = FdCStarAlgebra::new(&[2, 1]).unwrap();
        let b = FdCStarAlgebra::new(&[1, 2]).unwrap();
        let l = TensorLayout::new(&a, &b);
        for i in 0..a.dim() {
            for j in 0..b.dim() {
                let t = l.tensor(&a.basis_element(i), &b.basis_element(j)).unwrap();
                assert_eq!(t, l.product().basis_element(l.pair_index(i, j)));
            }
        }
    }

    #[test]
    fn identities_and_norms() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let a = FdCStarAlgebra::new(&[2, 1]).unwrap();
        let b = FdCStarAlgebra::new(&[3]).unwrap();
        let l = TensorLayout::new(&a, &b);
        assert_eq!(l.tensor(&a.identity(), &b.identity()).unwrap(), l.product().identity());
        for _ in 0..100 {
            let x = random::element(&a, &mut rng);
            let y = random::element(&b, &mut rng);
            let t = l.tensor(&x, &y).unwrap();
            let expected = x.norm() * y.norm();
            assert!((t.norm() - expected).abs() <= 1e-9 * expected);
            let via_coords = AlgebraElement::from_vector(l.product(), &l.tensor_coordinates(&x.coordinates(), &y.coordinates()));
            assert!(via_coords.distance(&t) <= 1e-12);
        }
    }

    #[test]
    fn tensor_is_multiplicative_and_star_preserving() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(8);
        let a = FdCStarAlgebra::new(&[2, 1]).unwrap();
        let b = FdCStarAlgebra::new(&[1, 2]).unwrap();
        let l = TensorLayout::new(&a, &b);
        for _ in 0..20 {
            let (x1, x2) = (random::element(&a, &mut rng), random::element(&a, &mut rng));
            let (y1, y2) = (random::element(&b, &mut rng), random::element(&b, &mut rng));
            let lhs = &l.tensor(&x1, &y1).unwrap() * &l.tensor(&x2, &y2).unwrap();
            let rhs = l.tensor(&(&x1 * &x2), &(&y1 * &y2)).unwrap();
            assert!(lhs.distance(&rhs) <= 1e-10);
            let star = l.tensor(&x1.adjoint(), &y1.adjoint()).unwrap();
            assert!(star.distance(&l.tensor(&x1, &y1).unwrap().adjoint()) <= 1e-12);
        }
    }

    #[test]
    fn associativity_of_layouts_is_exact() {
        let a = FdCStarAlgebra::new(&[2, 1]).unwrap();
        let b = FdCStarAlgebra::new(&[1, 1]).unwrap();
        let c = FdCStarAlgebra::new(&[2]).unwrap();
        let ab = TensorLayout::new(&a, &b);
        let ab_c = TensorLayout::new(ab.product(), &c);
        let bc = TensorLayout::new(&b, &c);
        let a_bc = TensorLayout::new(&a, bc.product());
        assert_eq!(ab_c.product(), a_bc.product());
        for i in 0..a.dim() {
            for j in 0..b.dim() {
                for k in 0..c.dim() {
                    assert_eq!(ab_c.pair_index(ab.pair_index(i, j), k), a_bc.pair_index(i, bc.pair_index(j, k)));
                }
            }
        }
    }

    #[test]
    fn slices() {
        let a = FdCStarAlgebra::new(&[2]).unwrap();
        let b = FdCStarAlgebra::new(&[1, 1]).unwrap();
        let l = TensorLayout::new(&a, &b);
        let mut rng = rand::rngs::StdRng::seed_from_u64(9);
        let x = random::element(&a, &mut rng);
        let y = random::element(&b, &mut rng);
        let w = LinearFunctional::normalized_trace(&a);
        let eta = LinearFunctional::normalized_trace(&b);
        let t = l.tensor(&x, &y).unwrap();
        let left = l.slice_left(&w, &t).unwrap();
        assert!(left.distance(&y.scale(w.evaluate(&x).unwrap())) <= 1e-12);
        let right = l.slice_right(&eta, &t).unwrap();
        assert!(right.distance(&x.scale(eta.evaluate(&y).unwrap())) <= 1e-12);
        let prod = l.tensor_functionals(&w, &eta).unwrap();
        let expected = w.evaluate(&x).unwrap() * eta.evaluate(&y).unwrap();
        assert!((prod.evaluate(&t).unwrap() - expected).norm() <= 1e-12);
    }
}
