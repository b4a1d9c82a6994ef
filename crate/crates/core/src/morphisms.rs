//! Linear maps between finite-dimensional C*-algebras, checked against the
//! *-homomorphism identities on canonical basis pairs.

use num_complex::Complex64;

use crate::algebra::{AlgebraElement, FdCStarAlgebra, LinearFunctional, TensorLayout};
use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Default tolerance for accepting a map as a *-homomorphism.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Largest `n` accepted by [`enumerate_set_maps`].
pub const SET_MAP_CAP: usize = 6;

/// Operator-norm defects of the three *-homomorphism identities.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DefectReport {
    /// `max ‖φ(e_i e_j) − φ(e_i) φ(e_j)‖` over canonical pairs.
    pub mult_defect: f64,
    /// `max ‖φ(e_i*) − φ(e_i)*‖`.
    pub star_defect: f64,
    /// `‖φ(I) − I‖`.
    pub unit_defect: f64,
}

impl DefectReport {
    pub fn max(&self) -> f64 {
        self.mult_defect.max(self.star_defect).max(self.unit_defect)
    }
}

/// A linear map stored as its matrix in canonical bases, shape
/// `dim(codomain) × dim(domain)`.
#[derive(Clone, Debug)]
pub struct StarMorphism {
    domain: FdCStarAlgebra,
    codomain: FdCStarAlgebra,
    matrix: CMatrix,
    defects: DefectReport,
    tol: f64,
}

impl StarMorphism {
    /// Builds the map and measures its defects; `is_star_hom` reports whether
    /// all three stay within `tol`.
    pub fn new(domain: &FdCStarAlgebra, codomain: &FdCStarAlgebra, matrix: CMatrix, tol: f64) -> Result<Self> {
        if matrix.nrows() != codomain.dim() || matrix.ncols() != domain.dim() {
            return Err(Error::InvalidMatrix(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                codomain.dim(),
                domain.dim()
            )));
        }
        let defects = measure_defects(domain, codomain, &matrix);
        Ok(Self { domain: domain.clone(), codomain: codomain.clone(), matrix, defects, tol })
    }

    /// The map sending the `i`-th canonical basis element to `images[i]`.
    pub fn from_images(domain: &FdCStarAlgebra, codomain: &FdCStarAlgebra, images: &[AlgebraElement], tol: f64) -> Result<Self> {
        if images.len() != domain.dim() {
            return Err(Error::InvalidMatrix(format!("{} images for a domain of dimension {}", images.len(), domain.dim())));
        }
        let mut matrix = CMatrix::zeros(codomain.dim(), domain.dim());
        for (j, img) in images.iter().enumerate() {
            codomain.ensure_same(img.algebra(), "image")?;
            matrix.set_column(j, &img.to_vector());
        }
        Self::new(domain, codomain, matrix, tol)
    }

    pub fn identity(algebra: &FdCStarAlgebra) -> Self {
        let d = algebra.dim();
        Self {
            domain: algebra.clone(),
            codomain: algebra.clone(),
            matrix: CMatrix::identity(d, d),
            defects: DefectReport::default(),
            tol: DEFAULT_TOL,
        }
    }

    /// Like [`StarMorphism::new`] but fails unless the map is a *-homomorphism.
    pub fn verified(domain: &FdCStarAlgebra, codomain: &FdCStarAlgebra, matrix: CMatrix, tol: f64) -> Result<Self> {
        let m = Self::new(domain, codomain, matrix, tol)?;
        m.require_hom()?;
        Ok(m)
    }

    pub fn require_hom(&self) -> Result<()> {
        if self.is_star_hom() {
            Ok(())
        } else {
            Err(Error::NotAHomomorphism(format!(
                "defects mult={:.3e} star={:.3e} unit={:.3e} exceed tol {:.1e}",
                self.defects.mult_defect, self.defects.star_defect, self.defects.unit_defect, self.tol
            )))
        }
    }

    pub fn domain(&self) -> &FdCStarAlgebra {
        &self.domain
    }

    pub fn codomain(&self) -> &FdCStarAlgebra {
        &self.codomain
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn defects(&self) -> DefectReport {
        self.defects
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn is_star_hom(&self) -> bool {
        self.defects.max() <= self.tol
    }

    pub fn apply(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.domain.ensure_same(x.algebra(), "morphism argument")?;
        Ok(AlgebraElement::from_vector(&self.codomain, &(&self.matrix * x.to_vector())))
    }

    /// Image of the `i`-th canonical basis element.
    pub fn image_of_basis(&self, i: usize) -> AlgebraElement {
        AlgebraElement::from_vector(&self.codomain, &self.matrix.column(i).into_owned())
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &StarMorphism) -> Result<StarMorphism> {
        inner.codomain.ensure_same(&self.domain, "composition")?;
        StarMorphism::new(&inner.domain, &self.codomain, &self.matrix * &inner.matrix, self.tol.max(inner.tol))
    }

    /// `φ ⊗ ψ` from `layout_in.product()` to `layout_out.product()`.
    pub fn tensor(phi: &StarMorphism, psi: &StarMorphism, layout_in: &TensorLayout, layout_out: &TensorLayout) -> Result<StarMorphism> {
        let matrix = tensor_matrix(phi, psi, layout_in, layout_out)?;
        StarMorphism::new(layout_in.product(), layout_out.product(), matrix, phi.tol.max(psi.tol))
    }

    /// The flip `x ⊗ y ↦ y ⊗ x` from `B ⊗ C` to `C ⊗ B`.
    pub fn flip(b: &FdCStarAlgebra, c: &FdCStarAlgebra) -> StarMorphism {
        let bc = TensorLayout::new(b, c);
        let cb = TensorLayout::new(c, b);
        let d = bc.product().dim();
        let mut matrix = CMatrix::zeros(d, d);
        for i in 0..b.dim() {
            for j in 0..c.dim() {
                matrix[(cb.pair_index(j, i), bc.pair_index(i, j))] = Complex64::new(1.0, 0.0);
            }
        }
        StarMorphism::new(bc.product(), cb.product(), matrix, DEFAULT_TOL).expect("flip matrix has the right shape")
    }

    /// Largest `‖self(e_i) − other(e_i)‖` over the canonical basis.
    pub fn distance(&self, other: &StarMorphism) -> Result<f64> {
        self.domain.ensure_same(&other.domain, "morphism distance (domain)")?;
        self.codomain.ensure_same(&other.codomain, "morphism distance (codomain)")?;
        Ok(max_column_distance(&self.codomain, &self.matrix, &other.matrix))
    }

    /// Largest `‖self(e_i)‖` over the canonical basis.
    pub fn basis_norm(&self) -> f64 {
        (0..self.domain.dim()).map(|i| self.image_of_basis(i).norm()).fold(0.0, f64::max)
    }
}

/// Largest operator-norm distance between corresponding columns.
pub(crate) fn max_column_distance(codomain: &FdCStarAlgebra, a: &CMatrix, b: &CMatrix) -> f64 {
    let diff = a - b;
    (0..diff.ncols())
        .map(|j| AlgebraElement::from_vector(codomain, &diff.column(j).into_owned()).norm())
        .fold(0.0, f64::max)
}

/// Matrix of `φ ⊗ ψ` through the two layouts' index maps.
pub(crate) fn tensor_matrix(phi: &StarMorphism, psi: &StarMorphism, layout_in: &TensorLayout, layout_out: &TensorLayout) -> Result<CMatrix> {
    if layout_in.left() != phi.domain() || layout_in.right() != psi.domain() {
        return Err(Error::IncompatibleAlgebra("input layout does not match the factor domains".into()));
    }
    if layout_out.left() != phi.codomain() || layout_out.right() != psi.codomain() {
        return Err(Error::IncompatibleAlgebra("output layout does not match the factor codomains".into()));
    }
    let mut m = CMatrix::zeros(layout_out.product().dim(), layout_in.product().dim());
    let zero = Complex64::new(0.0, 0.0);
    for i in 0..phi.domain().dim() {
        for j in 0..psi.domain().dim() {
            let col = layout_in.pair_index(i, j);
            for a in 0..phi.codomain().dim() {
                let x = phi.matrix()[(a, i)];
                if x == zero {
                    continue;
                }
                for b in 0..psi.codomain().dim() {
                    let y = psi.matrix()[(b, j)];
                    if y != zero {
                        m[(layout_out.pair_index(a, b), col)] = x * y;
                    }
                }
            }
        }
    }
    Ok(m)
}

fn measure_defects(domain: &FdCStarAlgebra, codomain: &FdCStarAlgebra, matrix: &CMatrix) -> DefectReport {
    let d = domain.dim();
    let images: Vec<AlgebraElement> =
        (0..d).map(|i| AlgebraElement::from_vector(codomain, &matrix.column(i).into_owned())).collect();
    let zero = AlgebraElement::zero(codomain);
    let mut report = DefectReport::default();
    for i in 0..d {
        for j in 0..d {
            let lhs = match domain.basis_product(i, j) {
                Some(k) => &images[k],
                None => &zero,
            };
            let rhs = &images[i] * &images[j];
            report.mult_defect = report.mult_defect.max(lhs.distance(&rhs));
        }
        let star = &images[domain.basis_adjoint(i)];
        report.star_defect = report.star_defect.max(star.distance(&images[i].adjoint()));
    }
    let unit = AlgebraElement::from_vector(codomain, &(matrix * domain.identity().to_vector()));
    report.unit_defect = unit.distance(&codomain.identity());
    report
}

/// A unital *-homomorphism into `ℂ`.
#[derive(Clone, Debug)]
pub struct Character {
    morphism: StarMorphism,
}

impl Character {
    pub fn from_morphism(morphism: StarMorphism) -> Result<Self> {
        if morphism.codomain().block_dims() != [1] {
            return Err(Error::InvalidCharacter(format!("codomain {:?} is not C", morphism.codomain())));
        }
        if !morphism.is_star_hom() {
            return Err(Error::InvalidCharacter(format!(
                "functional is not multiplicative (defect {:.3e})",
                morphism.defects().max()
            )));
        }
        Ok(Self { morphism })
    }

    pub fn from_functional(omega: &LinearFunctional, tol: f64) -> Result<Self> {
        let values = omega.values();
        let matrix = CMatrix::from_row_slice(1, values.len(), &values);
        Self::from_morphism(StarMorphism::new(omega.algebra(), &FdCStarAlgebra::scalars(), matrix, tol)?)
    }

    /// Evaluation of the 1×1 block `block`.
    pub fn point(algebra: &FdCStarAlgebra, block: usize) -> Result<Self> {
        Self::from_functional(&LinearFunctional::point_evaluation(algebra, block)?, DEFAULT_TOL)
    }

    pub fn algebra(&self) -> &FdCStarAlgebra {
        self.morphism.domain()
    }

    pub fn morphism(&self) -> &StarMorphism {
        &self.morphism
    }

    pub fn as_functional(&self) -> LinearFunctional {
        let values: Vec<Complex64> = self.morphism.matrix().row(0).iter().cloned().collect();
        LinearFunctional::from_values(self.algebra(), &values).expect("row length is the domain dimension")
    }

    pub fn evaluate(&self, x: &AlgebraElement) -> Result<Complex64> {
        Ok(self.morphism.apply(x)?.block(0)[(0, 0)])
    }
}

/// One character per 1×1 block, in block order.
pub fn characters_of(algebra: &FdCStarAlgebra) -> Vec<Character> {
    algebra
        .block_dims()
        .iter()
        .enumerate()
        .filter(|(_, &n)| n == 1)
        .map(|(k, _)| Character::point(algebra, k).expect("1x1 block evaluation is a character"))
        .collect()
}

/// All lookup tables `f: {0..n} → {0..n}`, lexicographic with `f(0)` most significant.
pub fn all_set_maps(n: usize) -> Vec<Vec<usize>> {
    let total = n.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut f = vec![0; n];
            for slot in f.iter_mut().rev() {
                *slot = code % n;
                code /= n;
            }
            f
        })
        .collect()
}

/// `φ_f(e_j) = Σ_{i: f(i) = j} e_i` on `ℂⁿ`, i.e. `x ↦ x ∘ f`.
pub fn set_map_morphism(table: &[usize]) -> Result<StarMorphism> {
    let n = table.len();
    let algebra = FdCStarAlgebra::commutative(n)?;
    if let Some(&bad) = table.iter().find(|&&v| v >= n) {
        return Err(Error::InvalidMatrix(format!("lookup value {bad} outside 0..{n}")));
    }
    let mut matrix = CMatrix::zeros(n, n);
    for (i, &j) in table.iter().enumerate() {
        matrix[(i, j)] = Complex64::new(1.0, 0.0);
    }
    StarMorphism::verified(&algebra, &algebra, matrix, DEFAULT_TOL)
}

/// Every unital *-endomorphism of `ℂⁿ`, in the order of [`all_set_maps`].
pub fn enumerate_set_maps(n: usize) -> Result<Vec<StarMorphism>> {
    if n == 0 {
        return Err(Error::InvalidDimension("n must be positive".into()));
    }
    if n > SET_MAP_CAP {
        return Err(Error::ResourceLimit(format!("n = {n} exceeds the enumeration cap {SET_MAP_CAP}")));
    }
    all_set_maps(n).iter().map(|f| set_map_morphism(f)).collect()
}
