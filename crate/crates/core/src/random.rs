//! Seeded random generators for elements, states, unitaries and
//! *-homomorphisms. Used by the property suites and the example corpus.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::algebra::{AlgebraElement, FdCStarAlgebra, LinearFunctional};
use crate::linalg::CMatrix;
use crate::morphisms::{StarMorphism, DEFAULT_TOL};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Element with independent complex Gaussian entries.
pub fn element<R: Rng + ?Sized>(algebra: &FdCStarAlgebra, rng: &mut R) -> AlgebraElement {
    let blocks = algebra.block_dims().iter().map(|&n| matrix(n, n, rng)).collect();
    AlgebraElement::from_blocks(algebra, blocks).expect("shapes follow the block sizes")
}

/// Haar-distributed unitary via QR of a Ginibre matrix with phase correction.
pub fn unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let qr = matrix(n, n, rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Unitary element of `algebra`.
pub fn unitary_element<R: Rng + ?Sized>(algebra: &FdCStarAlgebra, rng: &mut R) -> AlgebraElement {
    let blocks = algebra.block_dims().iter().map(|&n| unitary(n, rng)).collect();
    AlgebraElement::from_blocks(algebra, blocks).expect("shapes follow the block sizes")
}

/// Faithful state with a generic (non-tracial) density.
pub fn faithful_state<R: Rng + ?Sized>(algebra: &FdCStarAlgebra, rng: &mut R) -> LinearFunctional {
    let mut blocks: Vec<CMatrix> = algebra
        .block_dims()
        .iter()
        .map(|&n| {
            let g = matrix(n, n, rng);
            &g * g.adjoint() + CMatrix::identity(n, n) * Complex64::new(0.1, 0.0)
        })
        .collect();
    let total: Complex64 = blocks.iter().map(|b| b.trace()).sum();
    for b in &mut blocks {
        *b /= total;
    }
    LinearFunctional::from_density(AlgebraElement::from_blocks(algebra, blocks).expect("shapes follow the block sizes"))
}

/// All multiplicity vectors `m` with `Σ m_j sizes_j = target`.
fn multiplicities(sizes: &[usize], target: usize) -> Vec<Vec<usize>> {
    fn go(sizes: &[usize], target: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == sizes.len() {
            if target == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let n = sizes[prefix.len()];
        for m in 0..=target / n {
            prefix.push(m);
            go(sizes, target - m * n, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(sizes, target, &mut Vec::new(), &mut out);
    out
}

/// A random unital *-homomorphism `domain → codomain`: each codomain block
/// receives a random admissible multiplicity pattern of domain blocks and is
/// then conjugated by a Haar unitary. `None` when no unital embedding exists.
pub fn unital_hom<R: Rng + ?Sized>(domain: &FdCStarAlgebra, codomain: &FdCStarAlgebra, rng: &mut R) -> Option<StarMorphism> {
    let sizes = domain.block_dims();
    let mut patterns = Vec::with_capacity(codomain.num_blocks());
    for &target in codomain.block_dims() {
        let options = multiplicities(sizes, target);
        if options.is_empty() {
            return None;
        }
        patterns.push(options[rng.gen_range(0..options.len())].clone());
    }
    let unitaries: Vec<CMatrix> = codomain.block_dims().iter().map(|&n| unitary(n, rng)).collect();
    let mut images = Vec::with_capacity(domain.dim());
    for i in 0..domain.dim() {
        let u = domain.matrix_unit(i);
        let mut blocks = Vec::with_capacity(codomain.num_blocks());
        for (k, &big) in codomain.block_dims().iter().enumerate() {
            let mut m = CMatrix::zeros(big, big);
            let mut offset = 0;
            for (j, &mult) in patterns[k].iter().enumerate() {
                for _ in 0..mult {
                    if j == u.block {
                        m[(offset + u.row, offset + u.col)] = Complex64::new(1.0, 0.0);
                    }
                    offset += sizes[j];
                }
            }
            blocks.push(&unitaries[k] * m * unitaries[k].adjoint());
        }
        images.push(AlgebraElement::from_blocks(codomain, blocks).expect("shapes follow the block sizes"));
    }
    Some(StarMorphism::from_images(domain, codomain, &images, DEFAULT_TOL).expect("images live in the codomain"))
}
