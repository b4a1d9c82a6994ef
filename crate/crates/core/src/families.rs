//! Quantum families of maps `Ψ: B → C ⊗ A`, read as an `A`-labelled family of
//! maps from the quantum space of `C` to that of `B`.

use num_complex::Complex64;

use crate::algebra::{orthonormal_basis, AlgebraElement, FdCStarAlgebra, LinearFunctional, TensorLayout};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::morphisms::{max_column_distance, tensor_matrix, Character, StarMorphism, DEFAULT_TOL};
use crate::semigroups::QuantumSemigroup;

#[derive(Clone, Debug)]
pub struct QuantumFamily {
    source: FdCStarAlgebra,
    target: FdCStarAlgebra,
    label: FdCStarAlgebra,
    layout: TensorLayout,
    morphism: StarMorphism,
}

impl QuantumFamily {
    /// Wraps a verified *-homomorphism `source → target ⊗ label`.
    pub fn new(source: &FdCStarAlgebra, target: &FdCStarAlgebra, label: &FdCStarAlgebra, morphism: StarMorphism) -> Result<Self> {
        let layout = TensorLayout::new(target, label);
        source.ensure_same(morphism.domain(), "family source")?;
        layout.product().ensure_same(morphism.codomain(), "family codomain (target ⊗ label)")?;
        morphism.require_hom()?;
        Ok(Self { source: source.clone(), target: target.clone(), label: label.clone(), layout, morphism })
    }

    /// `Ψ(b) = b ⊗ I`.
    pub fn trivial(algebra: &FdCStarAlgebra, label: &FdCStarAlgebra) -> Self {
        let layout = TensorLayout::new(algebra, label);
        let unit = label.identity().coordinates();
        let mut matrix = CMatrix::zeros(layout.product().dim(), algebra.dim());
        for i in 0..algebra.dim() {
            for (j, &u) in unit.iter().enumerate() {
                if u != Complex64::new(0.0, 0.0) {
                    matrix[(layout.pair_index(i, j), i)] = u;
                }
            }
        }
        let morphism = StarMorphism::new(algebra, layout.product(), matrix, DEFAULT_TOL).expect("shape fixed by the layout");
        Self::new(algebra, algebra, label, morphism).expect("b ↦ b ⊗ I is a unital *-homomorphism")
    }

    /// The diagonal classical family on `ℂⁿ` labelled by `ℂ^{#tables}`:
    /// `Ψ(e_j) = Σ_f Σ_{i: f(i) = j} e_i ⊗ δ_f`, lookup values 0-based.
    pub fn classical(n: usize, tables: &[Vec<usize>]) -> Result<Self> {
        if tables.is_empty() {
            return Err(Error::InvalidDimension("a classical family needs at least one map".into()));
        }
        let space = FdCStarAlgebra::commutative(n)?;
        let label = FdCStarAlgebra::commutative(tables.len())?;
        let layout = TensorLayout::new(&space, &label);
        let mut matrix = CMatrix::zeros(layout.product().dim(), n);
        for (f, table) in tables.iter().enumerate() {
            if table.len() != n {
                return Err(Error::InvalidMatrix(format!("lookup table {f} has length {}, expected {n}", table.len())));
            }
            for (i, &j) in table.iter().enumerate() {
                if j >= n {
                    return Err(Error::InvalidMatrix(format!("lookup table {f} maps {i} to {j}, outside 0..{n}")));
                }
                matrix[(layout.pair_index(i, f), j)] = Complex64::new(1.0, 0.0);
            }
        }
        let morphism = StarMorphism::new(&space, layout.product(), matrix, DEFAULT_TOL)?;
        Self::new(&space, &space, &label, morphism)
    }

    /// `Ψ(x) = Σ_g u_g x u_g* ⊗ δ_g`, labelled by `ℂ^{#unitaries}`.
    pub fn conjugation(algebra: &FdCStarAlgebra, unitaries: &[AlgebraElement]) -> Result<Self> {
        if unitaries.is_empty() {
            return Err(Error::InvalidDimension("a conjugation family needs at least one unitary".into()));
        }
        let label = FdCStarAlgebra::commutative(unitaries.len())?;
        let layout = TensorLayout::new(algebra, &label);
        let mut images = Vec::with_capacity(algebra.dim());
        for i in 0..algebra.dim() {
            let x = algebra.basis_element(i);
            let mut img = AlgebraElement::zero(layout.product());
            for (g, u) in unitaries.iter().enumerate() {
                algebra.ensure_same(u.algebra(), "conjugating unitary")?;
                let conj = &(u * &x) * &u.adjoint();
                img = &img + &layout.tensor(&conj, &label.basis_element(g))?;
            }
            images.push(img);
        }
        let morphism = StarMorphism::from_images(algebra, layout.product(), &images, DEFAULT_TOL)?;
        Self::new(algebra, algebra, &label, morphism)
    }

    pub fn source(&self) -> &FdCStarAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FdCStarAlgebra {
        &self.target
    }

    pub fn label(&self) -> &FdCStarAlgebra {
        &self.label
    }

    pub fn layout(&self) -> &TensorLayout {
        &self.layout
    }

    pub fn morphism(&self) -> &StarMorphism {
        &self.morphism
    }

    pub fn is_self_map(&self) -> bool {
        self.source == self.target
    }

    pub fn apply(&self, b: &AlgebraElement) -> Result<AlgebraElement> {
        self.morphism.apply(b)
    }

    fn require_self_map(&self, what: &str) -> Result<()> {
        if self.is_self_map() {
            Ok(())
        } else {
            Err(Error::IncompatibleAlgebra(format!(
                "{what} needs a self-map family, got {:?} -> {:?}",
                self.source, self.target
            )))
        }
    }

    /// Largest `‖Ψ(e_i)‖` over the canonical basis; 1 for a unital *-homomorphism.
    pub fn norm(&self) -> f64 {
        self.morphism.basis_norm()
    }

    /// Matrix of `m ↦ Ψ(m) − m ⊗ I`.
    fn defect_from_trivial_matrix(&self) -> CMatrix {
        let trivial = QuantumFamily::trivial(&self.source, &self.label);
        self.morphism.matrix() - trivial.morphism.matrix()
    }

    /// `max_i ‖Ψ(e_i) − e_i ⊗ I‖`.
    pub fn trivial_defect(&self) -> Result<f64> {
        self.require_self_map("triviality check")?;
        let diff = self.defect_from_trivial_matrix();
        Ok(max_column_distance(self.layout.product(), &diff, &CMatrix::zeros(diff.nrows(), diff.ncols())))
    }
}

/// `Ψ₁ △ Ψ₂ = (Ψ₁ ⊗ id) ∘ Ψ₂` for `Ψ₁: C → D ⊗ A₁` and `Ψ₂: B → C ⊗ A₂`,
/// labelled by `A₁ ⊗ A₂`.
pub fn compose_families(outer: &QuantumFamily, inner: &QuantumFamily) -> Result<QuantumFamily> {
    inner.target.ensure_same(&outer.source, "family composition (inner target vs outer source)")?;
    let id = StarMorphism::identity(&inner.label);
    let layout_out = TensorLayout::new(outer.layout.product(), &inner.label);
    let lifted = tensor_matrix(&outer.morphism, &id, &inner.layout, &layout_out)?;
    let label = TensorLayout::new(&outer.label, &inner.label);
    let result_layout = TensorLayout::new(&outer.target, label.product());
    debug_assert_eq!(result_layout.product(), layout_out.product());
    let tol = outer.morphism.tol().max(inner.morphism.tol());
    let morphism = StarMorphism::new(&inner.source, result_layout.product(), lifted * inner.morphism.matrix(), tol)?;
    QuantumFamily::new(&inner.source, &outer.target, label.product(), morphism)
}

/// Outcome of an invariance check.
#[derive(Clone, Debug)]
pub struct InvarianceReport {
    /// `max_m ‖(ω ⊗ id)Ψ(m) − ω(m) I‖` over the canonical basis.
    pub defect: f64,
    /// `X_l = Σ_k ω(m_k) a_{k,l} − ω(m_l) I` for the basis reported below.
    pub generators: Vec<AlgebraElement>,
    /// Whether the generators use the ω-orthonormal basis (otherwise canonical).
    pub orthonormal_basis: bool,
}

/// The basis used for generators and coefficient matrices: ω-orthonormal when
/// ω is a faithful state, canonical otherwise.
pub fn generator_basis(algebra: &FdCStarAlgebra, omega: &LinearFunctional) -> (Vec<AlgebraElement>, bool) {
    if omega.is_faithful_state() {
        if let Ok(basis) = orthonormal_basis(algebra, omega) {
            return (basis, true);
        }
    }
    (algebra.basis(), false)
}

/// Coefficients `a[k][l]` in the label with `Ψ(m_l) = Σ_k m_k ⊗ a[k][l]`.
pub fn expansion_coefficients(family: &QuantumFamily, basis: &[AlgebraElement]) -> Result<Vec<Vec<AlgebraElement>>> {
    let m = &family.target;
    let d = m.dim();
    if basis.len() != d {
        return Err(Error::InvalidMatrix(format!("basis of length {} for dimension {d}", basis.len())));
    }
    let mut change = CMatrix::zeros(d, d);
    for (k, b) in basis.iter().enumerate() {
        m.ensure_same(b.algebra(), "basis element")?;
        change.set_column(k, &b.to_vector());
    }
    let inverse = change.try_inverse().ok_or_else(|| Error::InvalidMatrix("basis is not linearly independent".into()))?;
    let da = family.label.dim();
    let mut out = vec![Vec::with_capacity(basis.len()); d];
    for m_l in basis {
        let image = family.apply(m_l)?.coordinates();
        let mut z = CMatrix::zeros(d, da);
        for (p, &c) in image.iter().enumerate() {
            let (i, j) = family.layout.split_index(p);
            z[(i, j)] = c;
        }
        let coeffs = &inverse * z;
        for (k, row) in out.iter_mut().enumerate() {
            let coords: Vec<Complex64> = coeffs.row(k).iter().cloned().collect();
            row.push(AlgebraElement::from_coordinates(&family.label, &coords)?);
        }
    }
    Ok(out)
}

/// Measures how far `Ψ` is from preserving `ω`.
pub fn invariance_defects(family: &QuantumFamily, omega: &LinearFunctional) -> Result<InvarianceReport> {
    family.require_self_map("invariance")?;
    let m = &family.source;
    m.ensure_same(omega.algebra(), "invariance functional")?;
    let unit = family.label.identity();
    let deviation = |x: &AlgebraElement| -> Result<AlgebraElement> {
        let sliced = family.layout.slice_left(omega, &family.apply(x)?)?;
        Ok(&sliced - &unit.scale(omega.evaluate(x)?))
    };
    let mut defect: f64 = 0.0;
    for x in m.basis() {
        defect = defect.max(deviation(&x)?.norm());
    }
    let (basis, orthonormal) = generator_basis(m, omega);
    let generators = basis.iter().map(deviation).collect::<Result<Vec<_>>>()?;
    Ok(InvarianceReport { defect, generators, orthonormal_basis: orthonormal })
}

/// Defect of `(id ⊗ σ_{B,C}) ∘ (Ψ_B △ Ψ_C) = Ψ_C △ Ψ_B`.
pub fn commutation_defect(psi_b: &QuantumFamily, psi_c: &QuantumFamily) -> Result<f64> {
    psi_b.require_self_map("commutation")?;
    psi_c.require_self_map("commutation")?;
    psi_b.source.ensure_same(&psi_c.source, "commutation (underlying algebra)")?;
    let m = &psi_b.source;
    let bc = compose_families(psi_b, psi_c)?;
    let cb = compose_families(psi_c, psi_b)?;
    let flip = StarMorphism::flip(&psi_b.label, &psi_c.label);
    let layout_in = TensorLayout::new(m, flip.domain());
    let layout_out = TensorLayout::new(m, flip.codomain());
    let lifted = tensor_matrix(&StarMorphism::identity(m), &flip, &layout_in, &layout_out)?;
    let lhs = lifted * bc.morphism.matrix();
    Ok(max_column_distance(cb.layout.product(), &lhs, cb.morphism.matrix()))
}

/// Null space of `m ↦ Ψ(m) − m ⊗ I`.
#[derive(Clone, Debug)]
pub struct FixedPoints {
    pub dimension: usize,
    pub basis: Vec<AlgebraElement>,
    pub ergodic: bool,
}

pub fn fixed_point_space(family: &QuantumFamily) -> Result<FixedPoints> {
    family.require_self_map("fixed points")?;
    let null = linalg::null_space(&family.defect_from_trivial_matrix());
    let basis: Vec<AlgebraElement> = null.iter().map(|v| AlgebraElement::from_vector(&family.source, v)).collect();
    Ok(FixedPoints { dimension: basis.len(), ergodic: basis.len() == 1, basis })
}

/// `(id ⊗ λ) ∘ Ψ`, the member of the family at the classical point `λ`.
pub fn evaluate_at_character(family: &QuantumFamily, lambda: &Character) -> Result<StarMorphism> {
    if lambda.algebra() != &family.label {
        return Err(Error::InvalidCharacter(format!(
            "character of {:?} cannot evaluate a family labelled by {:?}",
            lambda.algebra(),
            family.label
        )));
    }
    let layout_out = TensorLayout::new(&family.target, &FdCStarAlgebra::scalars());
    let lifted = tensor_matrix(&StarMorphism::identity(&family.target), lambda.morphism(), &family.layout, &layout_out)?;
    let tol = family.morphism.tol();
    StarMorphism::verified(&family.source, &family.target, lifted * family.morphism.matrix(), tol)
}

/// Same as [`evaluate_at_character`] for a functional that is checked to be
/// multiplicative first.
pub fn evaluate_at_functional(family: &QuantumFamily, lambda: &LinearFunctional) -> Result<StarMorphism> {
    if lambda.algebra() != &family.label {
        return Err(Error::InvalidCharacter("functional lives on a different algebra than the label".into()));
    }
    evaluate_at_character(family, &Character::from_functional(lambda, family.morphism.tol())?)
}

/// Defect of `(id ⊗ Λ) ∘ Φ = Ψ`.
pub fn factorization_defect(phi: &QuantumFamily, lambda: &StarMorphism, psi: &QuantumFamily) -> Result<f64> {
    phi.source.ensure_same(&psi.source, "factorization (sources)")?;
    phi.target.ensure_same(&psi.target, "factorization (targets)")?;
    phi.label.ensure_same(lambda.domain(), "factorization (Λ domain)")?;
    psi.label.ensure_same(lambda.codomain(), "factorization (Λ codomain)")?;
    let lifted = tensor_matrix(&StarMorphism::identity(&phi.target), lambda, &phi.layout, &psi.layout)?;
    let lhs = lifted * phi.morphism.matrix();
    Ok(max_column_distance(psi.layout.product(), &lhs, psi.morphism.matrix()))
}

/// Defect of `Δ(X_l) = Σ_p X_p ⊗ a_{p,l} + I ⊗ X_l` for the invariance
/// generators of `ω`, maximised over `l`.
pub fn coideal_identity_defect(family: &QuantumFamily, semigroup: &QuantumSemigroup, omega: &LinearFunctional) -> Result<f64> {
    family.label.ensure_same(semigroup.algebra(), "coideal identity (label vs semigroup)")?;
    let report = invariance_defects(family, omega)?;
    let (basis, _) = generator_basis(&family.source, omega);
    let coeffs = expansion_coefficients(family, &basis)?;
    let layout = semigroup.layout();
    let unit = family.label.identity();
    let mut worst: f64 = 0.0;
    for (l, x_l) in report.generators.iter().enumerate() {
        let lhs = semigroup.comultiplication().apply(x_l)?;
        let mut rhs = layout.tensor(&unit, x_l)?;
        for (p, x_p) in report.generators.iter().enumerate() {
            rhs = &rhs + &layout.tensor(x_p, &coeffs[p][l])?;
        }
        worst = worst.max(lhs.distance(&rhs));
    }
    Ok(worst)
}
