//! Finite-dimensional C*-algebras realised as direct sums of full matrix blocks.

mod element;
mod functional;
mod geometry;
mod tensor;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use element::AlgebraElement;
pub use functional::{LinearFunctional, FAITHFULNESS_FLOOR, STATE_TOL};
pub use geometry::{orthonormal_basis, sigma_map, ModularMap};
pub use tensor::TensorLayout;

/// Position of a canonical basis element `E^(block)_{row,col}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MatrixUnit {
    pub block: usize,
    pub row: usize,
    pub col: usize,
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct Layout {
    dims: Vec<usize>,
    offsets: Vec<usize>,
    dim: usize,
}

/// `M_{n_1} ⊕ … ⊕ M_{n_K}` with its canonical basis of matrix units ordered by
/// `(block, row, col)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FdCStarAlgebra {
    inner: Arc<Layout>,
}

impl FdCStarAlgebra {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDimension("block list is empty".into()));
        }
        if let Some(pos) = dims.iter().position(|&n| n == 0) {
            return Err(Error::InvalidDimension(format!("block {pos} has size 0")));
        }
        let mut offsets = Vec::with_capacity(dims.len());
        let mut dim = 0;
        for &n in dims {
            offsets.push(dim);
            dim += n * n;
        }
        Ok(Self { inner: Arc::new(Layout { dims: dims.to_vec(), offsets, dim }) })
    }

    /// `ℂⁿ`, the functions on an `n`-point space.
    pub fn commutative(n: usize) -> Result<Self> {
        Self::new(&vec![1; n])
    }

    /// The full matrix algebra `M_n`.
    pub fn matrices(n: usize) -> Result<Self> {
        Self::new(&[n])
    }

    pub fn scalars() -> Self {
        Self::new(&[1]).expect("one block of size one")
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.inner.dims
    }

    pub fn num_blocks(&self) -> usize {
        self.inner.dims.len()
    }

    /// Linear dimension `Σ n_k²`.
    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    pub fn block_offset(&self, block: usize) -> usize {
        self.inner.offsets[block]
    }

    pub fn is_commutative(&self) -> bool {
        self.inner.dims.iter().all(|&n| n == 1)
    }

    pub fn basis_index(&self, unit: MatrixUnit) -> usize {
        let n = self.inner.dims[unit.block];
        self.inner.offsets[unit.block] + unit.row * n + unit.col
    }

    pub fn matrix_unit(&self, index: usize) -> MatrixUnit {
        assert!(index < self.inner.dim, "basis index {index} out of range");
        let block = match self.inner.offsets.binary_search(&index) {
            Ok(b) => {
                // several blocks cannot share an offset since sizes are positive
                b
            }
            Err(b) => b - 1,
        };
        let n = self.inner.dims[block];
        let local = index - self.inner.offsets[block];
        MatrixUnit { block, row: local / n, col: local % n }
    }

    /// Canonical basis element with the given index.
    pub fn basis_element(&self, index: usize) -> AlgebraElement {
        let mut x = AlgebraElement::zero(self);
        let u = self.matrix_unit(index);
        x.blocks_mut()[u.block][(u.row, u.col)] = num_complex::Complex64::new(1.0, 0.0);
        x
    }

    pub fn basis(&self) -> Vec<AlgebraElement> {
        (0..self.dim()).map(|i| self.basis_element(i)).collect()
    }

    /// Index of `e_i e_j` in the canonical basis, `None` when the product vanishes.
    pub fn basis_product(&self, i: usize, j: usize) -> Option<usize> {
        let a = self.matrix_unit(i);
        let b = self.matrix_unit(j);
        (a.block == b.block && a.col == b.row)
            .then(|| self.basis_index(MatrixUnit { block: a.block, row: a.row, col: b.col }))
    }

    /// Index of `e_i*`.
    pub fn basis_adjoint(&self, i: usize) -> usize {
        let u = self.matrix_unit(i);
        self.basis_index(MatrixUnit { block: u.block, row: u.col, col: u.row })
    }

    pub fn identity(&self) -> AlgebraElement {
        AlgebraElement::identity(self)
    }

    pub(crate) fn ensure_same(&self, other: &Self, what: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::IncompatibleAlgebra(format!("{what}: {self:?} vs {other:?}")))
        }
    }
}

impl fmt::Debug for FdCStarAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alg{:?}", self.inner.dims)
    }
}

impl fmt::Display for FdCStarAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .inner
            .dims
            .iter()
            .map(|&n| if n == 1 { "C".to_string() } else { format!("M{n}") })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}
