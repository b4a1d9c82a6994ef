//! Matrices over an algebra: representations of quantum semigroups, action
//! matrices in an ω-orthonormal basis, magic unitaries and Wang families.

use num_complex::Complex64;

use crate::algebra::{sigma_map, AlgebraElement, FdCStarAlgebra, LinearFunctional, TensorLayout};
use crate::error::{Error, Result};
use crate::families::{expansion_coefficients, invariance_defects, QuantumFamily};
use crate::linalg::{self, CMatrix};
use crate::morphisms::{StarMorphism, DEFAULT_TOL};
use crate::semigroups::QuantumSemigroup;

/// An `n × n` matrix whose entries live in one algebra `B`, i.e. an element
/// of `M_n ⊗ B`.
#[derive(Clone, Debug, PartialEq)]
pub struct Representation {
    algebra: FdCStarAlgebra,
    entries: Vec<Vec<AlgebraElement>>,
}

impl Representation {
    pub fn new(entries: Vec<Vec<AlgebraElement>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!("row {i} has {} entries, expected {n}", row.len())));
            }
        }
        let algebra = entries[0][0].algebra().clone();
        for row in &entries {
            for x in row {
                algebra.ensure_same(x.algebra(), "matrix entries")?;
            }
        }
        Ok(Self { algebra, entries })
    }

    /// Scalar matrix `m ⊗ I`.
    pub fn from_scalars(m: &CMatrix, algebra: &FdCStarAlgebra) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::InvalidMatrix("scalar matrix is not square".into()));
        }
        let unit = algebra.identity();
        Self::new((0..m.nrows()).map(|i| (0..m.ncols()).map(|j| unit.scale(m[(i, j)])).collect()).collect())
    }

    pub fn identity(n: usize, algebra: &FdCStarAlgebra) -> Self {
        Self::from_scalars(&CMatrix::identity(n, n), algebra).expect("identity is square")
    }

    pub fn dimension(&self) -> usize {
        self.entries.len()
    }

    pub fn algebra(&self) -> &FdCStarAlgebra {
        &self.algebra
    }

    pub fn entries(&self) -> &[Vec<AlgebraElement>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &AlgebraElement {
        &self.entries[i][j]
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.algebra.ensure_same(&other.algebra, "matrix product")?;
        if self.dimension() != other.dimension() {
            return Err(Error::InvalidMatrix("matrix sizes differ".into()));
        }
        let n = self.dimension();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut acc = AlgebraElement::zero(&self.algebra);
                for k in 0..n {
                    acc = &acc + &(&self.entries[i][k] * &other.entries[k][j]);
                }
                row.push(acc);
            }
            out.push(row);
        }
        Ok(Self { algebra: self.algebra.clone(), entries: out })
    }

    /// Transpose with every entry replaced by its adjoint.
    pub fn adjoint(&self) -> Self {
        let n = self.dimension();
        let entries = (0..n).map(|i| (0..n).map(|j| self.entries[j][i].adjoint()).collect()).collect();
        Self { algebra: self.algebra.clone(), entries }
    }

    /// Entrywise adjoint without transposing: the matrix `(a_{k,l}*)`.
    pub fn entrywise_adjoint(&self) -> Self {
        let entries = self.entries.iter().map(|row| row.iter().map(|x| x.adjoint()).collect()).collect();
        Self { algebra: self.algebra.clone(), entries }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dimension();
        let entries = (0..n).map(|i| (0..n).map(|j| self.entries[j][i].clone()).collect()).collect();
        Self { algebra: self.algebra.clone(), entries }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.algebra.ensure_same(&other.algebra, "matrix difference")?;
        if self.dimension() != other.dimension() {
            return Err(Error::InvalidMatrix("matrix sizes differ".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
            .collect();
        Ok(Self { algebra: self.algebra.clone(), entries })
    }

    /// The matrix as an element of `M_n ⊗ B`.
    pub fn to_element(&self) -> AlgebraElement {
        let n = self.dimension();
        let layout = TensorLayout::new(&FdCStarAlgebra::matrices(n).expect("n > 0"), &self.algebra);
        let blocks = self
            .algebra
            .block_dims()
            .iter()
            .enumerate()
            .map(|(k, &m)| {
                let mut big = CMatrix::zeros(n * m, n * m);
                for i in 0..n {
                    for j in 0..n {
                        big.view_mut((i * m, j * m), (m, m)).copy_from(self.entries[i][j].block(k));
                    }
                }
                big
            })
            .collect();
        AlgebraElement::from_blocks(layout.product(), blocks).expect("block sizes follow the layout")
    }

    /// C*-norm in `M_n ⊗ B`.
    pub fn norm(&self) -> f64 {
        self.to_element().norm()
    }

    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.try_sub(other)?.norm())
    }

    /// `‖V*V − I‖`.
    pub fn isometry_defect(&self) -> f64 {
        let gram = self.adjoint().try_mul(self).expect("same algebra");
        gram.distance(&Self::identity(self.dimension(), &self.algebra)).expect("same shape")
    }

    /// `‖VV* − I‖`.
    pub fn coisometry_defect(&self) -> f64 {
        let gram = self.try_mul(&self.adjoint()).expect("same algebra");
        gram.distance(&Self::identity(self.dimension(), &self.algebra)).expect("same shape")
    }
}

/// `max_{k,l} ‖Δ(v_{k,l}) − Σ_r v_{k,r} ⊗ v_{r,l}‖`.
pub fn representation_defect(v: &Representation, s: &QuantumSemigroup) -> Result<f64> {
    v.algebra.ensure_same(s.algebra(), "representation entries vs semigroup")?;
    let n = v.dimension();
    let layout = s.layout();
    let mut worst: f64 = 0.0;
    for k in 0..n {
        for l in 0..n {
            let lhs = s.comultiplication().apply(&v.entries[k][l])?;
            let mut rhs = AlgebraElement::zero(layout.product());
            for r in 0..n {
                rhs = &rhs + &layout.tensor(&v.entries[k][r], &v.entries[r][l])?;
            }
            worst = worst.max(lhs.distance(&rhs));
        }
    }
    Ok(worst)
}

/// `V ⊤ W = V₁₃ W₂₃`: entry `((i,k),(j,l))` is `v_{i,j} w_{k,l}`.
pub fn tensor_representations(v: &Representation, w: &Representation) -> Result<Representation> {
    v.algebra.ensure_same(&w.algebra, "tensor product of representations")?;
    let (n, m) = (v.dimension(), w.dimension());
    let mut entries = vec![Vec::with_capacity(n * m); n * m];
    for i in 0..n {
        for k in 0..m {
            for j in 0..n {
                for l in 0..m {
                    entries[i * m + k].push(&v.entries[i][j] * &w.entries[k][l]);
                }
            }
        }
    }
    Representation::new(entries)
}

/// `v_{k,l} = δ_{k−l}` over `C(ℤ_n)`; a unitary representation of the group
/// comultiplication.
pub fn regular_representation(n: usize) -> Result<Representation> {
    let algebra = FdCStarAlgebra::commutative(n)?;
    Representation::new(
        (0..n).map(|k| (0..n).map(|l| algebra.basis_element((k + n - l) % n)).collect()).collect(),
    )
}

/// Coefficient matrix `ã` of an action in an ω-orthonormal basis.
#[derive(Clone, Debug)]
pub struct ActionMatrix {
    /// The ω-orthonormal basis `(m_l)` from Gram–Schmidt.
    pub basis: Vec<AlgebraElement>,
    /// `ã` with `Φ(m_l) = Σ_k m_k ⊗ a_{k,l}`.
    pub matrix: Representation,
    /// `‖ã*ã − I‖`.
    pub isometry_defect: f64,
    /// Present when a comultiplication was supplied.
    pub representation_defect: Option<f64>,
}

impl ActionMatrix {
    /// `ā = (a_{k,l}*)`, so that `ã^⊤ = ā*`.
    pub fn conjugate(&self) -> Representation {
        self.matrix.entrywise_adjoint()
    }
}

pub fn action_matrix(family: &QuantumFamily, omega: &LinearFunctional, semigroup: Option<&QuantumSemigroup>) -> Result<ActionMatrix> {
    if !family.is_self_map() {
        return Err(Error::IncompatibleAlgebra("action matrix needs a self-map family".into()));
    }
    if !omega.classify_faithful() {
        return Err(Error::DegenerateState("action matrix needs a faithful state".into()));
    }
    let basis = crate::algebra::orthonormal_basis(family.source(), omega)?;
    let matrix = Representation::new(expansion_coefficients(family, &basis)?)?;
    let isometry_defect = matrix.isometry_defect();
    let representation_defect = semigroup.map(|s| representation_defect(&matrix, s)).transpose()?;
    Ok(ActionMatrix { basis, matrix, isometry_defect, representation_defect })
}

/// `b̃ = (a_{k,l}*)`; only formed when ω is a trace.
pub fn tracial_conjugate(action: &ActionMatrix, omega: &LinearFunctional) -> Option<Representation> {
    omega.classify_trace().then(|| action.conjugate())
}

/// Defects of the four magic-unitary relations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MagicReport {
    /// `max ‖a² − a‖`
    pub idempotent: f64,
    /// `max ‖a* − a‖`
    pub self_adjoint: f64,
    /// `max_i ‖Σ_j a_{ij} − I‖`
    pub row_sums: f64,
    /// `max_j ‖Σ_i a_{ij} − I‖`
    pub column_sums: f64,
    /// `max ‖[a_{ij}, a_{kl}]‖` over all pairs of entries.
    pub max_commutator: f64,
    pub pass: bool,
}

impl MagicReport {
    pub fn max_defect(&self) -> f64 {
        self.idempotent.max(self.self_adjoint).max(self.row_sums).max(self.column_sums)
    }
}

pub fn magic_unitary_check(entries: &[Vec<AlgebraElement>], tol: f64) -> Result<MagicReport> {
    let m = Representation::new(entries.to_vec())?;
    let n = m.dimension();
    let unit = m.algebra.identity();
    let mut r = MagicReport { idempotent: 0.0, self_adjoint: 0.0, row_sums: 0.0, column_sums: 0.0, max_commutator: 0.0, pass: false };
    let flat: Vec<&AlgebraElement> = entries.iter().flatten().collect();
    for a in &flat {
        r.idempotent = r.idempotent.max((&(*a * *a) - *a).norm());
        r.self_adjoint = r.self_adjoint.max((&a.adjoint() - *a).norm());
    }
    for i in 0..n {
        let row = entries[i].iter().fold(AlgebraElement::zero(&m.algebra), |acc, x| &acc + x);
        r.row_sums = r.row_sums.max(row.distance(&unit));
        let col = (0..n).fold(AlgebraElement::zero(&m.algebra), |acc, k| &acc + &entries[k][i]);
        r.column_sums = r.column_sums.max(col.distance(&unit));
    }
    for (p, a) in flat.iter().enumerate() {
        for b in &flat[p + 1..] {
            r.max_commutator = r.max_commutator.max(a.commutator(b).norm());
        }
    }
    r.pass = r.max_defect() <= tol;
    Ok(r)
}

/// A square matrix of projections whose rows and columns sum to `I`.
#[derive(Clone, Debug)]
pub struct MagicUnitary {
    matrix: Representation,
    report: MagicReport,
}

impl MagicUnitary {
    pub fn new(entries: Vec<Vec<AlgebraElement>>, tol: f64) -> Result<Self> {
        let report = magic_unitary_check(&entries, tol)?;
        if !report.pass {
            return Err(Error::NotMagic(format!(
                "defects idempotent={:.3e} self-adjoint={:.3e} rows={:.3e} columns={:.3e} exceed tol {tol:.1e}",
                report.idempotent, report.self_adjoint, report.row_sums, report.column_sums
            )));
        }
        Ok(Self { matrix: Representation::new(entries)?, report })
    }

    /// Scalar 0/1 matrix with `a_{ij} = 1` iff `perm[i] = j`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let scalars = FdCStarAlgebra::scalars();
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::NotMagic(format!("{perm:?} is not a permutation")));
            }
        }
        let entries = (0..n)
            .map(|i| (0..n).map(|j| if perm[i] == j { scalars.identity() } else { AlgebraElement::zero(&scalars) }).collect())
            .collect();
        Self::new(entries, DEFAULT_TOL)
    }

    pub fn dimension(&self) -> usize {
        self.matrix.dimension()
    }

    pub fn algebra(&self) -> &FdCStarAlgebra {
        self.matrix.algebra()
    }

    pub fn matrix(&self) -> &Representation {
        &self.matrix
    }

    pub fn entries(&self) -> &[Vec<AlgebraElement>] {
        self.matrix.entries()
    }

    pub fn report(&self) -> MagicReport {
        self.report
    }
}

/// Warning attached to generated examples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorWarning {
    /// The angle makes all entries commute.
    CommutingEntries,
}

/// `[[p, I−p, 0, 0], [I−p, p, 0, 0], [0, 0, q, I−q], [0, 0, I−q, q]]` over `M₂`
/// with `p = diag(1, 0)` and `q` the projection onto `(cos θ, sin θ)`.
pub fn nonclassical_magic_4x4(theta: f64) -> (MagicUnitary, Option<GeneratorWarning>) {
    let m2 = FdCStarAlgebra::matrices(2).expect("positive size");
    let re = |x: f64| Complex64::new(x, 0.0);
    let (s, c) = theta.sin_cos();
    let p = AlgebraElement::from_coordinates(&m2, &[re(1.0), re(0.0), re(0.0), re(0.0)]).expect("four coordinates");
    let q = AlgebraElement::from_coordinates(&m2, &[re(c * c), re(c * s), re(c * s), re(s * s)]).expect("four coordinates");
    let unit = m2.identity();
    let zero = AlgebraElement::zero(&m2);
    let p_c = &unit - &p;
    let q_c = &unit - &q;
    let entries = vec![
        vec![p.clone(), p_c.clone(), zero.clone(), zero.clone()],
        vec![p_c, p, zero.clone(), zero.clone()],
        vec![zero.clone(), zero.clone(), q.clone(), q_c.clone()],
        vec![zero.clone(), zero, q_c, q],
    ];
    let unitary = MagicUnitary::new(entries, DEFAULT_TOL).expect("complementary projections form a magic unitary");
    let warning = ((s * c).abs() < 1e-12).then_some(GeneratorWarning::CommutingEntries);
    (unitary, warning)
}

/// `Ψ(e_j) = Σ_i e_i ⊗ a_{ij}` on `ℂⁿ`, labelled by the entries' algebra.
pub fn wang_family(u: &MagicUnitary) -> Result<QuantumFamily> {
    let n = u.dimension();
    let space = FdCStarAlgebra::commutative(n)?;
    let label = u.algebra().clone();
    let layout = TensorLayout::new(&space, &label);
    let mut images = Vec::with_capacity(n);
    for j in 0..n {
        let mut img = AlgebraElement::zero(layout.product());
        for i in 0..n {
            img = &img + &layout.tensor(&space.basis_element(i), u.matrix.entry(i, j))?;
        }
        images.push(img);
    }
    let morphism = StarMorphism::from_images(&space, layout.product(), &images, DEFAULT_TOL)?;
    QuantumFamily::new(&space, &space, &label, morphism)
}

/// `sum_defect = ‖Σ p_k − I‖`, `orthogonality_defect = max_{k≠l} ‖p_k p_l‖`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectionReport {
    pub sum_defect: f64,
    pub orthogonality_defect: f64,
}

pub fn projection_family_check(projections: &[AlgebraElement]) -> Result<ProjectionReport> {
    let first = projections.first().ok_or_else(|| Error::InvalidMatrix("empty projection family".into()))?;
    let algebra = first.algebra();
    let mut sum = AlgebraElement::zero(algebra);
    for p in projections {
        sum = sum.try_add(p)?;
    }
    let mut orth: f64 = 0.0;
    for (k, p) in projections.iter().enumerate() {
        for (l, q) in projections.iter().enumerate() {
            if k != l {
                orth = orth.max((p * q).norm());
            }
        }
    }
    Ok(ProjectionReport { sum_defect: sum.distance(&algebra.identity()), orthogonality_defect: orth })
}

/// Modular compatibility `S ⊗ I = ā*(S ⊗ I)ā` of an action with an invariant
/// faithful state.
#[derive(Clone, Debug)]
pub struct ModularReport {
    /// Matrix of σ in the ω-orthonormal basis: `σ(m_i) = Σ_p S_{i,p} m_p`.
    pub s_matrix: CMatrix,
    /// `‖S ⊗ I − ā*(S ⊗ I)ā‖`.
    pub defect: f64,
    /// `‖(S⁻¹ ⊗ I) ā*(S ⊗ I)ā − I‖`.
    pub left_inverse_defect: f64,
    /// `‖ā*ā − I‖`.
    pub conjugate_isometry_defect: f64,
}

pub fn modular_compatibility_defect(family: &QuantumFamily, omega: &LinearFunctional, tol: f64) -> Result<ModularReport> {
    if !omega.classify_state() || !omega.classify_faithful() {
        return Err(Error::Precondition("ω must be a faithful state".into()));
    }
    let invariance = invariance_defects(family, omega)?;
    if invariance.defect > tol {
        return Err(Error::Precondition(format!(
            "ω is not invariant for the family (invariance defect {:.3e} > {tol:.1e})",
            invariance.defect
        )));
    }
    let action = action_matrix(family, omega, None)?;
    let m = family.source();
    let sigma = sigma_map(m, omega)?;
    let n = action.basis.len();
    let mut s_matrix = CMatrix::zeros(n, n);
    for (i, m_i) in action.basis.iter().enumerate() {
        let image = sigma.apply(m_i)?;
        for (p, m_p) in action.basis.iter().enumerate() {
            s_matrix[(i, p)] = omega.evaluate(&(&m_p.adjoint() * &image))?;
        }
    }
    let s_inv = s_matrix.clone().try_inverse().ok_or_else(|| Error::DegenerateState("S is singular".into()))?;
    let b = family.label();
    let bar = action.conjugate();
    let s_i = Representation::from_scalars(&s_matrix, b)?;
    let twisted = bar.adjoint().try_mul(&s_i)?.try_mul(&bar)?;
    let defect = s_i.distance(&twisted)?;
    let left = Representation::from_scalars(&s_inv, b)?.try_mul(&twisted)?;
    let left_inverse_defect = left.distance(&Representation::identity(n, b))?;
    let conjugate_isometry_defect = bar.isometry_defect();
    Ok(ModularReport { s_matrix, defect, left_inverse_defect, conjugate_isometry_defect })
}

/// Rank of `span{Φ(e_i)(I ⊗ f_j)}` inside `M ⊗ B`.
pub fn podles_rank(family: &QuantumFamily) -> Result<crate::semigroups::RankReport> {
    let m = family.target();
    let b = family.label();
    let layout = family.layout();
    let total = layout.product().dim();
    let mut span = CMatrix::zeros(total, family.source().dim() * b.dim());
    for i in 0..family.source().dim() {
        let image = family.morphism().image_of_basis(i);
        for j in 0..b.dim() {
            let v = &image * &layout.tensor(&m.identity(), &b.basis_element(j))?;
            span.set_column(i * b.dim() + j, &v.to_vector());
        }
    }
    let rank = linalg::numeric_rank(&span);
    Ok(crate::semigroups::RankReport { rank, full: rank == total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::evaluate_at_character;
    use crate::morphisms::{characters_of, set_map_morphism};
    use crate::semigroups::{classical_semigroup_algebra, tables};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn sign_flip_family() -> QuantumFamily {
        let m2 = FdCStarAlgebra::matrices(2).unwrap();
        let u = AlgebraElement::from_coordinates(&m2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]).unwrap();
        QuantumFamily::conjugation(&m2, &[m2.identity(), u]).unwrap()
    }

    #[test]
    fn trivial_one_by_one_representation() {
        let s = classical_semigroup_algebra(&tables::cyclic_group(3)).unwrap();
        let v = Representation::identity(1, s.algebra());
        assert_eq!(representation_defect(&v, &s).unwrap(), 0.0);
    }

    #[test]
    fn regular_representation_of_z3() {
        let s = classical_semigroup_algebra(&tables::cyclic_group(3)).unwrap();
        let v = regular_representation(3).unwrap();
        assert!(representation_defect(&v, &s).unwrap() <= 1e-15);
        assert!(v.isometry_defect() <= 1e-15);
        let mut broken = v.entries().to_vec();
        broken[0][1] = s.algebra().identity();
        let broken = Representation::new(broken).unwrap();
        assert!(representation_defect(&broken, &s).unwrap() > 0.5);
    }

    #[test]
    fn tensor_products_of_representations() {
        let s = classical_semigroup_algebra(&tables::cyclic_group(3)).unwrap();
        let v = regular_representation(3).unwrap();
        let one = Representation::identity(1, s.algebra());
        assert_eq!(tensor_representations(&v, &one).unwrap(), v);
        let vv = tensor_representations(&v, &v).unwrap();
        assert_eq!(vv.dimension(), 9);
        assert!(vv.isometry_defect() <= 1e-9);
        assert!(representation_defect(&vv, &s).unwrap() <= 1e-9);
    }

    #[test]
    fn ragged_input_is_rejected() {
        let a = FdCStarAlgebra::scalars();
        let ragged = vec![vec![a.identity(), a.identity()], vec![a.identity()]];
        assert!(matches!(magic_unitary_check(&ragged, 1e-9), Err(Error::InvalidMatrix(_))));
    }

    #[test]
    fn permutation_magic_unitaries() {
        let u = MagicUnitary::permutation(&[1, 2, 0]).unwrap();
        assert!(u.report().pass);
        assert_eq!(u.report().max_commutator, 0.0);
        assert!(matches!(MagicUnitary::permutation(&[0, 0, 1]), Err(Error::NotMagic(_))));
    }

    #[test]
    fn nonclassical_example() {
        let (u, warn) = nonclassical_magic_4x4(std::f64::consts::FRAC_PI_4);
        assert!(warn.is_none());
        assert!((u.report().max_commutator - 0.5).abs() < 1e-12);
        assert!(u.report().row_sums <= 1e-15 && u.report().column_sums <= 1e-15);
        let (u, warn) = nonclassical_magic_4x4(0.7);
        assert!(u.report().pass && u.report().max_commutator > 0.1);
        assert!(warn.is_none());
        let (u, warn) = nonclassical_magic_4x4(0.0);
        assert_eq!(warn, Some(GeneratorWarning::CommutingEntries));
        assert!(u.report().max_commutator < 1e-12);
        let (u, _) = nonclassical_magic_4x4(1e-7);
        assert!(u.report().max_commutator < 1e-6);
    }

    #[test]
    fn column_fault_fails_wang4() {
        let m2 = FdCStarAlgebra::matrices(2).unwrap();
        let zero = AlgebraElement::zero(&m2);
        let p = AlgebraElement::from_coordinates(&m2, &[c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        let id = m2.identity();
        // column 0 sums to I + p = diag(2, 1); column 1 sums to I - p
        let entries = vec![vec![id.clone(), zero.clone()], vec![p.clone(), &id - &p]];
        let r = magic_unitary_check(&entries, 1e-9).unwrap();
        assert!(!r.pass);
        assert!(r.column_sums >= 1.0);
        assert!(matches!(MagicUnitary::new(entries, 1e-9), Err(Error::NotMagic(_))));
    }

    #[test]
    fn wang_families() {
        let id = wang_family(&MagicUnitary::permutation(&[0, 1, 2]).unwrap()).unwrap();
        assert_eq!(id.trivial_defect().unwrap(), 0.0);
        let shift = wang_family(&MagicUnitary::permutation(&[1, 2, 0]).unwrap()).unwrap();
        let chars = characters_of(shift.label());
        let m = evaluate_at_character(&shift, &chars[0]).unwrap();
        assert_eq!(m.matrix(), set_map_morphism(&[1, 2, 0]).unwrap().matrix());

        let (u, _) = nonclassical_magic_4x4(0.7);
        let f = wang_family(&u).unwrap();
        assert!(f.morphism().defects().max() <= 1e-12);
        let inv = invariance_defects(&f, &LinearFunctional::uniform(f.source())).unwrap();
        assert!(inv.defect <= 1e-12);
    }

    #[test]
    fn action_matrices() {
        let m2 = FdCStarAlgebra::matrices(2).unwrap();
        let t = QuantumFamily::trivial(&m2, &FdCStarAlgebra::commutative(2).unwrap());
        let a = action_matrix(&t, &LinearFunctional::normalized_trace(&m2), None).unwrap();
        assert!(a.matrix.distance(&Representation::identity(4, t.label())).unwrap() <= 1e-12);

        let (u, _) = nonclassical_magic_4x4(0.7);
        let f = wang_family(&u).unwrap();
        let a = action_matrix(&f, &LinearFunctional::uniform(f.source()), None).unwrap();
        assert!(a.isometry_defect <= 1e-9);
        assert!(a.matrix.distance(u.matrix()).unwrap() <= 1e-12);

        let conj = sign_flip_family();
        let z2 = classical_semigroup_algebra(&tables::cyclic_group(2)).unwrap();
        let a = action_matrix(&conj, &LinearFunctional::normalized_trace(&m2), Some(&z2)).unwrap();
        assert!(a.isometry_defect <= 1e-9);
        assert!(a.matrix.coisometry_defect() <= 1e-9);
        assert!(a.representation_defect.unwrap() <= 1e-9);

        let pure = LinearFunctional::from_values(&FdCStarAlgebra::commutative(4).unwrap(), &[c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        assert!(matches!(action_matrix(&f, &pure, None), Err(Error::DegenerateState(_))));
    }

    #[test]
    fn modular_identity() {
        let conj = sign_flip_family();
        let m2 = conj.source().clone();
        let rho = AlgebraElement::from_coordinates(&m2, &[c(1.0 / 3.0), c(0.0), c(0.0), c(2.0 / 3.0)]).unwrap();
        let w = LinearFunctional::from_density(rho);
        let r = modular_compatibility_defect(&conj, &w, 1e-9).unwrap();
        assert!(r.defect <= 1e-9);
        assert!(r.left_inverse_defect <= 1e-8);

        let tr = LinearFunctional::normalized_trace(&m2);
        let r = modular_compatibility_defect(&conj, &tr, 1e-9).unwrap();
        assert!((r.defect - r.conjugate_isometry_defect).abs() <= 1e-12);
        let action = action_matrix(&conj, &tr, None).unwrap();
        assert!(tracial_conjugate(&action, &tr).is_some());
        assert!(tracial_conjugate(&action, &w).is_none());
    }

    #[test]
    fn modular_preconditions() {
        let all = QuantumFamily::classical(2, &crate::morphisms::all_set_maps(2)).unwrap();
        let err = modular_compatibility_defect(&all, &LinearFunctional::uniform(all.source()), 1e-9).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref msg) if msg.contains("invariant")));
        let c2 = FdCStarAlgebra::commutative(2).unwrap();
        let pure = LinearFunctional::from_values(&c2, &[c(1.0), c(0.0)]).unwrap();
        let err = modular_compatibility_defect(&all, &pure, 1e-9).unwrap_err();
        assert!(matches!(err, Error::Precondition(ref msg) if msg.contains("faithful")));
    }

    #[test]
    fn podles_ranks() {
        let m = FdCStarAlgebra::new(&[2, 1]).unwrap();
        let t = QuantumFamily::trivial(&m, &FdCStarAlgebra::scalars());
        assert_eq!(podles_rank(&t).unwrap().rank, m.dim());
        assert!(podles_rank(&t).unwrap().full);
        let conj = sign_flip_family();
        let r = podles_rank(&conj).unwrap();
        assert_eq!(r.rank, 8);
        assert!(r.full);
        let (u, _) = nonclassical_magic_4x4(0.7);
        let r = podles_rank(&wang_family(&u).unwrap()).unwrap();
        assert_eq!(r.rank, 16);
        assert!(r.full);
    }

    #[test]
    fn projection_families() {
        let c5 = FdCStarAlgebra::commutative(5).unwrap();
        let r = projection_family_check(&c5.basis()).unwrap();
        assert_eq!(r, ProjectionReport { sum_defect: 0.0, orthogonality_defect: 0.0 });
        let m2 = FdCStarAlgebra::matrices(2).unwrap();
        let p = AlgebraElement::from_coordinates(&m2, &[c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        let r = projection_family_check(&[p.clone(), p]).unwrap();
        assert!(r.sum_defect > 0.5);
    }
}
