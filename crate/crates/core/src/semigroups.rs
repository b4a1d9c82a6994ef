//! Quantum semigroups `(A, Δ)` with optional counit, their actions and
//! morphisms, convolution of functionals, and cancellation ranks.

use num_complex::Complex64;

use crate::algebra::{AlgebraElement, FdCStarAlgebra, LinearFunctional, TensorLayout};
use crate::error::{Error, Result};
use crate::families::QuantumFamily;
use crate::linalg::{self, CMatrix};
use crate::morphisms::{max_column_distance, tensor_matrix, Character, StarMorphism, DEFAULT_TOL};

/// An algebra with a comultiplication `Δ: A → A ⊗ A` and an optional counit.
///
/// Construction only checks shapes; coassociativity and the counit laws are
/// reported by [`coassociativity_defect`] and [`counit_defect`].
#[derive(Clone, Debug)]
pub struct QuantumSemigroup {
    algebra: FdCStarAlgebra,
    layout: TensorLayout,
    comultiplication: StarMorphism,
    counit: Option<Character>,
}

impl QuantumSemigroup {
    pub fn new(algebra: &FdCStarAlgebra, comultiplication: StarMorphism, counit: Option<Character>) -> Result<Self> {
        let layout = TensorLayout::new(algebra, algebra);
        algebra.ensure_same(comultiplication.domain(), "comultiplication domain")?;
        layout.product().ensure_same(comultiplication.codomain(), "comultiplication codomain")?;
        if let Some(eps) = &counit {
            algebra.ensure_same(eps.algebra(), "counit")?;
        }
        Ok(Self { algebra: algebra.clone(), layout, comultiplication, counit })
    }

    pub fn algebra(&self) -> &FdCStarAlgebra {
        &self.algebra
    }

    pub fn layout(&self) -> &TensorLayout {
        &self.layout
    }

    pub fn comultiplication(&self) -> &StarMorphism {
        &self.comultiplication
    }

    pub fn counit(&self) -> Option<&Character> {
        self.counit.as_ref()
    }
}

/// Checks that `table` is an `n × n` associative table over `0..n`.
pub fn validate_table(table: &[Vec<usize>]) -> Result<()> {
    let n = table.len();
    if n == 0 {
        return Err(Error::InvalidSemigroup("empty multiplication table".into()));
    }
    for (r, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidSemigroup(format!("row {r} has length {}, expected {n}", row.len())));
        }
        if let Some(&v) = row.iter().find(|&&v| v >= n) {
            return Err(Error::InvalidSemigroup(format!("row {r} contains {v}, outside 0..{n}")));
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if table[table[x][y]][z] != table[x][table[y][z]] {
                    return Err(Error::InvalidSemigroup(format!("(xy)z != x(yz) for x={x}, y={y}, z={z}")));
                }
            }
        }
    }
    Ok(())
}

/// A two-sided identity of the table, if any.
pub fn table_identity(table: &[Vec<usize>]) -> Option<usize> {
    let n = table.len();
    (0..n).find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
}

/// `C(S) = ℂⁿ` with `Δ(δ_s) = Σ_{uv = s} δ_u ⊗ δ_v`, where `uv = table[u][v]`.
/// The counit is evaluation at a two-sided identity when one exists.
pub fn classical_semigroup_algebra(table: &[Vec<usize>]) -> Result<QuantumSemigroup> {
    validate_table(table)?;
    let n = table.len();
    let algebra = FdCStarAlgebra::commutative(n)?;
    let layout = TensorLayout::new(&algebra, &algebra);
    let mut matrix = CMatrix::zeros(layout.product().dim(), n);
    for u in 0..n {
        for v in 0..n {
            matrix[(layout.pair_index(u, v), table[u][v])] = Complex64::new(1.0, 0.0);
        }
    }
    let delta = StarMorphism::verified(&algebra, layout.product(), matrix, DEFAULT_TOL)?;
    let counit = table_identity(table).map(|e| Character::point(&algebra, e)).transpose()?;
    QuantumSemigroup::new(&algebra, delta, counit)
}

/// Defect of `(Δ ⊗ id) ∘ Δ = (id ⊗ Δ) ∘ Δ`.
pub fn coassociativity_defect(s: &QuantumSemigroup) -> Result<f64> {
    let a = &s.algebra;
    let id = StarMorphism::identity(a);
    let triple_left = TensorLayout::new(s.layout.product(), a);
    let triple_right = TensorLayout::new(a, s.layout.product());
    let left = tensor_matrix(&s.comultiplication, &id, &s.layout, &triple_left)? * s.comultiplication.matrix();
    let right = tensor_matrix(&id, &s.comultiplication, &s.layout, &triple_right)? * s.comultiplication.matrix();
    Ok(max_column_distance(triple_left.product(), &left, &right))
}

/// Largest defect of `(ε ⊗ id) ∘ Δ = id` and `(id ⊗ ε) ∘ Δ = id`.
pub fn counit_defect(s: &QuantumSemigroup) -> Result<f64> {
    let eps = s.counit.as_ref().ok_or_else(|| Error::MissingComponent("semigroup has no counit".into()))?;
    let a = &s.algebra;
    let id = StarMorphism::identity(a);
    let scalars = FdCStarAlgebra::scalars();
    let id_matrix = CMatrix::identity(a.dim(), a.dim());
    let left_out = TensorLayout::new(&scalars, a);
    let right_out = TensorLayout::new(a, &scalars);
    let left = tensor_matrix(eps.morphism(), &id, &s.layout, &left_out)? * s.comultiplication.matrix();
    let right = tensor_matrix(&id, eps.morphism(), &s.layout, &right_out)? * s.comultiplication.matrix();
    Ok(max_column_distance(a, &left, &id_matrix).max(max_column_distance(a, &right, &id_matrix)))
}

/// Defect of the action equation `(Ψ ⊗ id) ∘ Ψ = (id ⊗ Δ) ∘ Ψ`.
pub fn action_defect(family: &QuantumFamily, s: &QuantumSemigroup) -> Result<f64> {
    family.label().ensure_same(&s.algebra, "action (label vs semigroup)")?;
    family.source().ensure_same(family.target(), "action (self-map)")?;
    let m = family.source();
    let id_a = StarMorphism::identity(&s.algebra);
    let id_m = StarMorphism::identity(m);
    let outer = TensorLayout::new(family.layout().product(), &s.algebra);
    let lhs = tensor_matrix(family.morphism(), &id_a, family.layout(), &outer)? * family.morphism().matrix();
    let inner = TensorLayout::new(m, s.layout.product());
    let rhs = tensor_matrix(&id_m, &s.comultiplication, family.layout(), &inner)? * family.morphism().matrix();
    Ok(max_column_distance(outer.product(), &lhs, &rhs))
}

/// Defect of `(Λ ⊗ Λ) ∘ Δ_A = Δ_B ∘ Λ`.
pub fn qs_morphism_defect(lambda: &StarMorphism, from: &QuantumSemigroup, to: &QuantumSemigroup) -> Result<f64> {
    from.algebra.ensure_same(lambda.domain(), "semigroup morphism domain")?;
    to.algebra.ensure_same(lambda.codomain(), "semigroup morphism codomain")?;
    let lhs = tensor_matrix(lambda, lambda, &from.layout, &to.layout)? * from.comultiplication.matrix();
    let rhs = to.comultiplication.matrix() * lambda.matrix();
    Ok(max_column_distance(to.layout.product(), &lhs, &rhs))
}

/// `φ ∗ ψ = (φ ⊗ ψ) ∘ Δ`.
pub fn convolve(phi: &LinearFunctional, psi: &LinearFunctional, s: &QuantumSemigroup) -> Result<LinearFunctional> {
    s.algebra.ensure_same(phi.algebra(), "convolution (left functional)")?;
    s.algebra.ensure_same(psi.algebra(), "convolution (right functional)")?;
    let joint = s.layout.tensor_coordinates(&phi.values(), &psi.values());
    let values = s.comultiplication.matrix().transpose() * joint;
    LinearFunctional::from_values(&s.algebra, values.as_slice())
}

/// The counit as a morphism of quantum semigroups into the trivial semigroup `ℂ`.
pub fn trivial_semigroup() -> QuantumSemigroup {
    classical_semigroup_algebra(&[vec![0]]).expect("the one-element table is a monoid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// span of `(a ⊗ I) Δ(b)`
    Left,
    /// span of `Δ(a) (I ⊗ b)`
    Right,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub rank: usize,
    pub full: bool,
}

fn cancellation_span(s: &QuantumSemigroup, side: Side) -> Result<CMatrix> {
    let a = &s.algebra;
    let d = a.dim();
    let unit = a.identity();
    let deltas: Vec<AlgebraElement> = (0..d).map(|j| s.comultiplication.image_of_basis(j)).collect();
    let mut span = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        let e_i = a.basis_element(i);
        for j in 0..d {
            let v = match side {
                Side::Left => &s.layout.tensor(&e_i, &unit)? * &deltas[j],
                Side::Right => &deltas[i] * &s.layout.tensor(&unit, &a.basis_element(j))?,
            };
            span.set_column(i * d + j, &v.to_vector());
        }
    }
    Ok(span)
}

/// Rank of the cancellation span inside `A ⊗ A` over canonical basis pairs.
pub fn cancellation_rank(s: &QuantumSemigroup, side: Side) -> Result<RankReport> {
    let d = s.algebra.dim();
    let rank = linalg::numeric_rank(&cancellation_span(s, side)?);
    Ok(RankReport { rank, full: rank == d * d })
}

/// Distance from `target ∈ A ⊗ A` to the cancellation span.
pub fn cancellation_span_residual(s: &QuantumSemigroup, side: Side, target: &AlgebraElement) -> Result<f64> {
    s.layout.product().ensure_same(target.algebra(), "span membership target")?;
    Ok(linalg::span_residual(&cancellation_span(s, side)?, &target.to_vector()))
}

/// Multiplication tables used throughout the examples.
pub mod tables {
    use crate::morphisms::all_set_maps;

    /// `ℤ_n` under addition.
    pub fn cyclic_group(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
    }

    /// `uv = u`.
    pub fn left_zero(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| vec![a; n]).collect()
    }

    /// `uv = v`.
    pub fn right_zero(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|_| (0..n).collect()).collect()
    }

    /// All maps of an `n`-point set, indexed as in `all_set_maps`, with
    /// `u · v = v ∘ u` (apply `u` first). With this order the dual
    /// comultiplication makes the all-maps family an action.
    pub fn map_monoid(n: usize) -> Vec<Vec<usize>> {
        let maps = all_set_maps(n);
        let index = |f: &Vec<usize>| maps.iter().position(|g| g == f).expect("closed under composition");
        maps.iter()
            .map(|u| {
                maps.iter()
                    .map(|v| {
                        let composite: Vec<usize> = u.iter().map(|&x| v[x]).collect();
                        index(&composite)
                    })
                    .collect()
            })
            .collect()
    }

    /// Indices in `all_set_maps(n)` of the bijections.
    pub fn permutation_indices(n: usize) -> Vec<usize> {
        all_set_maps(n)
            .iter()
            .enumerate()
            .filter(|(_, f)| {
                let mut seen = vec![false; n];
                f.iter().for_each(|&v| seen[v] = true);
                seen.into_iter().all(|s| s)
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// `S_n` with the same composition order, indexed by `permutation_indices`.
    pub fn symmetric_group(n: usize) -> Vec<Vec<usize>> {
        let full = map_monoid(n);
        let perms = permutation_indices(n);
        let local = |g: usize| perms.iter().position(|&p| p == g).expect("permutations are closed");
        perms.iter().map(|&u| perms.iter().map(|&v| local(full[u][v])).collect()).collect()
    }

    pub fn is_left_cancellative(table: &[Vec<usize>]) -> bool {
        let n = table.len();
        (0..n).all(|a| {
            let mut seen = vec![false; n];
            (0..n).all(|x| !std::mem::replace(&mut seen[table[a][x]], true))
        })
    }

    pub fn is_right_cancellative(table: &[Vec<usize>]) -> bool {
        let n = table.len();
        (0..n).all(|b| {
            let mut seen = vec![false; n];
            (0..n).all(|x| !std::mem::replace(&mut seen[table[x][b]], true))
        })
    }

    /// Every associative table on `0..n` (labelled, not up to isomorphism).
    pub fn all_semigroups(n: usize) -> Vec<Vec<Vec<usize>>> {
        let cells = n * n;
        let total = n.pow(cells as u32);
        (0..total)
            .filter_map(|mut code| {
                let mut t = vec![vec![0; n]; n];
                for cell in 0..cells {
                    t[cell / n][cell % n] = code % n;
                    code /= n;
                }
                super::validate_table(&t).is_ok().then_some(t)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::tables::*;
    use super::*;
    use crate::families::evaluate_at_character;
    use crate::morphisms::{all_set_maps, characters_of};
    use crate::random;
    use rand::SeedableRng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn group_algebra_is_a_bialgebra() {
        let z2 = classical_semigroup_algebra(&cyclic_group(2)).unwrap();
        assert_eq!(coassociativity_defect(&z2).unwrap(), 0.0);
        assert_eq!(counit_defect(&z2).unwrap(), 0.0);
    }

    #[test]
    fn left_zero_semigroup() {
        let s = classical_semigroup_algebra(&left_zero(2)).unwrap();
        assert_eq!(coassociativity_defect(&s).unwrap(), 0.0);
        assert!(s.counit().is_none());
        assert!(matches!(counit_defect(&s), Err(Error::MissingComponent(_))));
        assert_eq!(cancellation_rank(&s, Side::Left).unwrap(), RankReport { rank: 2, full: false });
        assert_eq!(cancellation_rank(&s, Side::Right).unwrap(), RankReport { rank: 4, full: true });
    }

    #[test]
    fn perturbed_comultiplication_is_detected() {
        let s = classical_semigroup_algebra(&cyclic_group(2)).unwrap();
        let mut m = s.comultiplication().matrix().clone();
        m[(0, 0)] += c(0.1);
        let delta = StarMorphism::new(s.algebra(), s.layout().product(), m, DEFAULT_TOL).unwrap();
        let bad = QuantumSemigroup::new(s.algebra(), delta, None).unwrap();
        assert!(coassociativity_defect(&bad).unwrap() >= 0.05);
    }

    #[test]
    fn map_monoid_bialgebra() {
        let table = map_monoid(2);
        let s = classical_semigroup_algebra(&table).unwrap();
        assert!(coassociativity_defect(&s).unwrap() <= 1e-12);
        let eps = s.counit().expect("identity map is a unit");
        // identity map [0, 1] sits at index 1 in lexicographic order
        assert!((eps.evaluate(&s.algebra().basis_element(1)).unwrap() - c(1.0)).norm() < 1e-15);
        assert!(counit_defect(&s).unwrap() <= 1e-12);
        assert!(!cancellation_rank(&s, Side::Left).unwrap().full);
        assert!(!cancellation_rank(&s, Side::Right).unwrap().full);
    }

    #[test]
    fn wrong_counit_is_detected() {
        let s = classical_semigroup_algebra(&cyclic_group(3)).unwrap();
        let wrong = Character::point(s.algebra(), 1).unwrap();
        let bad = QuantumSemigroup::new(s.algebra(), s.comultiplication().clone(), Some(wrong)).unwrap();
        assert!(counit_defect(&bad).unwrap() >= 0.5);
    }

    #[test]
    fn non_associative_table() {
        // x*y = x - y mod 3 is not associative
        let t: Vec<Vec<usize>> = (0..3).map(|x| (0..3).map(|y| (x + 3 - y) % 3).collect()).collect();
        assert!(matches!(classical_semigroup_algebra(&t), Err(Error::InvalidSemigroup(_))));
        assert!(matches!(classical_semigroup_algebra(&[vec![0, 1]]), Err(Error::InvalidSemigroup(_))));
    }

    #[test]
    fn actions() {
        let m2 = FdCStarAlgebra::matrices(2).unwrap();
        let z2 = classical_semigroup_algebra(&cyclic_group(2)).unwrap();
        let t = QuantumFamily::trivial(&m2, z2.algebra());
        // trivial family is an action only when Δ(I) = I ⊗ I, which holds here
        assert_eq!(action_defect(&t, &z2).unwrap(), 0.0);

        let all = QuantumFamily::classical(2, &all_set_maps(2)).unwrap();
        let monoid = classical_semigroup_algebra(&map_monoid(2)).unwrap();
        assert!(action_defect(&all, &monoid).unwrap() <= 1e-12);

        let u = AlgebraElement::from_coordinates(&m2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]).unwrap();
        let conj = QuantumFamily::conjugation(&m2, &[m2.identity(), u]).unwrap();
        assert!(action_defect(&conj, &z2).unwrap() <= 1e-12);

        assert!(matches!(action_defect(&all, &z2), Err(Error::IncompatibleAlgebra(_))));
    }

    #[test]
    fn semigroup_morphisms() {
        let z3 = classical_semigroup_algebra(&cyclic_group(3)).unwrap();
        assert_eq!(qs_morphism_defect(&StarMorphism::identity(z3.algebra()), &z3, &z3).unwrap(), 0.0);

        // restriction C(Map₂) → C(S₂): δ_f ↦ δ_f if f is a permutation, else 0
        let monoid = classical_semigroup_algebra(&map_monoid(2)).unwrap();
        let s2 = classical_semigroup_algebra(&symmetric_group(2)).unwrap();
        let perms = permutation_indices(2);
        let mut m = CMatrix::zeros(perms.len(), 4);
        for (local, &global) in perms.iter().enumerate() {
            m[(local, global)] = c(1.0);
        }
        let restriction = StarMorphism::verified(monoid.algebra(), s2.algebra(), m, DEFAULT_TOL).unwrap();
        assert!(qs_morphism_defect(&restriction, &monoid, &s2).unwrap() <= 1e-12);

        let eps = monoid.counit().unwrap().morphism().clone();
        assert!(qs_morphism_defect(&eps, &monoid, &trivial_semigroup()).unwrap() <= 1e-12);
    }

    #[test]
    fn convolution_neutrality_and_associativity() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(21);
        let z3 = classical_semigroup_algebra(&cyclic_group(3)).unwrap();
        let eps = z3.counit().unwrap().as_functional();
        for _ in 0..20 {
            let phi = LinearFunctional::from_density(random::element(z3.algebra(), &mut rng));
            let left = convolve(&eps, &phi, &z3).unwrap();
            let right = convolve(&phi, &eps, &z3).unwrap();
            assert!(left.density().distance(phi.density()) <= 1e-12);
            assert!(right.density().distance(phi.density()) <= 1e-12);
        }
        let monoid = classical_semigroup_algebra(&map_monoid(2)).unwrap();
        for _ in 0..50 {
            let f: Vec<LinearFunctional> =
                (0..3).map(|_| LinearFunctional::from_density(random::element(monoid.algebra(), &mut rng))).collect();
            let lhs = convolve(&convolve(&f[0], &f[1], &monoid).unwrap(), &f[2], &monoid).unwrap();
            let rhs = convolve(&f[0], &convolve(&f[1], &f[2], &monoid).unwrap(), &monoid).unwrap();
            assert!(lhs.density().distance(rhs.density()) <= 1e-9);
        }
    }

    #[test]
    fn characters_convolve_like_the_group() {
        let table = cyclic_group(4);
        let s = classical_semigroup_algebra(&table).unwrap();
        let chars = characters_of(s.algebra());
        for g in 0..4 {
            for h in 0..4 {
                let prod = convolve(&chars[g].as_functional(), &chars[h].as_functional(), &s).unwrap();
                assert_eq!(prod.values(), chars[table[g][h]].as_functional().values());
            }
        }
    }

    #[test]
    fn cyclic_groups_cancel_on_both_sides() {
        for n in 1..=5 {
            let s = classical_semigroup_algebra(&cyclic_group(n)).unwrap();
            for side in [Side::Left, Side::Right] {
                assert_eq!(cancellation_rank(&s, side).unwrap(), RankReport { rank: n * n, full: true });
            }
        }
    }

    #[test]
    fn semigroup_counts() {
        assert_eq!(all_semigroups(1).len(), 1);
        assert_eq!(all_semigroups(2).len(), 8);
        assert_eq!(all_semigroups(3).len(), 113);
    }

    #[test]
    fn evaluation_turns_convolution_into_composition() {
        let all = QuantumFamily::classical(2, &all_set_maps(2)).unwrap();
        let monoid = classical_semigroup_algebra(&map_monoid(2)).unwrap();
        let chars = characters_of(monoid.algebra());
        for l in &chars {
            for m in &chars {
                let conv = convolve(&l.as_functional(), &m.as_functional(), &monoid).unwrap();
                let lhs = crate::families::evaluate_at_functional(&all, &conv).unwrap();
                let rhs = evaluate_at_character(&all, l).unwrap().compose(&evaluate_at_character(&all, m).unwrap()).unwrap();
                assert!(lhs.distance(&rhs).unwrap() <= 1e-9);
            }
        }
    }
}
