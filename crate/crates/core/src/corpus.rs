//! Named example objects: classical families and semigroups, group actions by
//! conjugation, Wang families, and seeded random generators for the property
//! suites.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{AlgebraElement, FdCStarAlgebra, LinearFunctional, TensorLayout};
use crate::error::Result;
use crate::families::QuantumFamily;
use crate::linalg::CMatrix;
use crate::morphisms::{all_set_maps, DEFAULT_TOL};
use crate::random;
use crate::representations::{nonclassical_magic_4x4, wang_family, MagicUnitary};
use crate::semigroups::{classical_semigroup_algebra, tables, QuantumSemigroup};

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// The family of all maps of an `n`-point space, labelled by `ℂ^{nⁿ}`.
pub fn all_maps_family(n: usize) -> Result<QuantumFamily> {
    QuantumFamily::classical(n, &all_set_maps(n))
}

/// The one-member family of a single map.
pub fn singleton_family(table: &[usize]) -> Result<QuantumFamily> {
    QuantumFamily::classical(table.len(), &[table.to_vec()])
}

/// `C(Map_n)` with the comultiplication dual to composition.
pub fn map_monoid_semigroup(n: usize) -> Result<QuantumSemigroup> {
    classical_semigroup_algebra(&tables::map_monoid(n))
}

/// `C(ℤ_n)` with the group comultiplication.
pub fn cyclic_group_semigroup(n: usize) -> Result<QuantumSemigroup> {
    classical_semigroup_algebra(&tables::cyclic_group(n))
}

/// `ℤ₂` acting on `M₂` by conjugation with `diag(1, −1)`, labelled by `C(ℤ₂)`.
pub fn sign_flip_family() -> QuantumFamily {
    let m2 = FdCStarAlgebra::matrices(2).expect("positive size");
    let u = AlgebraElement::from_coordinates(&m2, &[re(1.0), re(0.0), re(0.0), re(-1.0)]).expect("four coordinates");
    QuantumFamily::conjugation(&m2, &[m2.identity(), u]).expect("unitary conjugations")
}

/// `diag(1/3, 2/3)` on `M₂`.
pub fn modular_test_state() -> LinearFunctional {
    let m2 = FdCStarAlgebra::matrices(2).expect("positive size");
    LinearFunctional::from_density(
        AlgebraElement::from_coordinates(&m2, &[re(1.0 / 3.0), re(0.0), re(0.0), re(2.0 / 3.0)]).expect("four coordinates"),
    )
}

/// `ℤ_n` acting on `ℂⁿ` by cyclic shifts, labelled by `C(ℤ_n)`.
pub fn shift_action(n: usize) -> Result<QuantumFamily> {
    let shifts: Vec<Vec<usize>> = (0..n).map(|g| (0..n).map(|i| (i + g) % n).collect()).collect();
    QuantumFamily::classical(n, &shifts)
}

/// Column-violating fault: `[[e₁, e₂], [e₁, e₂]]` over `ℂ²`; the first column
/// sums to `diag(2, 0)`.
pub fn column_fault_entries() -> Vec<Vec<AlgebraElement>> {
    let c2 = FdCStarAlgebra::commutative(2).expect("positive size");
    let (e1, e2) = (c2.basis_element(0), c2.basis_element(1));
    vec![vec![e1.clone(), e2.clone()], vec![e1, e2]]
}

/// Every `n × n` permutation magic unitary, in the order of `all_set_maps`.
pub fn permutation_magic_unitaries(n: usize) -> Result<Vec<MagicUnitary>> {
    let maps = all_set_maps(n);
    tables::permutation_indices(n).into_iter().map(|i| MagicUnitary::permutation(&maps[i])).collect()
}

/// Conjugates every entry by the same unitary; the result is again magic.
pub fn conjugate_magic(u: &MagicUnitary, w: &AlgebraElement) -> Result<MagicUnitary> {
    let entries = u
        .entries()
        .iter()
        .map(|row| row.iter().map(|a| &(w * a) * &w.adjoint()).collect())
        .collect();
    MagicUnitary::new(entries, DEFAULT_TOL)
}

/// Random unital *-homomorphism `algebra → algebra ⊗ label` as a family.
pub fn random_self_family<R: Rng + ?Sized>(algebra: &FdCStarAlgebra, label: &FdCStarAlgebra, rng: &mut R) -> Option<QuantumFamily> {
    let layout = TensorLayout::new(algebra, label);
    let morphism = random::unital_hom(algebra, layout.product(), rng)?;
    QuantumFamily::new(algebra, algebra, label, morphism).ok()
}

/// Random family `source → target ⊗ label`, if a unital embedding exists.
pub fn random_family<R: Rng + ?Sized>(
    source: &FdCStarAlgebra,
    target: &FdCStarAlgebra,
    label: &FdCStarAlgebra,
    rng: &mut R,
) -> Option<QuantumFamily> {
    let layout = TensorLayout::new(target, label);
    let morphism = random::unital_hom(source, layout.product(), rng)?;
    QuantumFamily::new(source, target, label, morphism).ok()
}

/// Random algebra with at most `max_blocks` blocks of size at most `max_size`.
pub fn random_algebra<R: Rng + ?Sized>(max_blocks: usize, max_size: usize, rng: &mut R) -> FdCStarAlgebra {
    let k = rng.gen_range(1..=max_blocks);
    let dims: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=max_size)).collect();
    FdCStarAlgebra::new(&dims).expect("positive sizes")
}

/// Random label algebra of linear dimension at most 4.
pub fn random_label<R: Rng + ?Sized>(rng: &mut R) -> FdCStarAlgebra {
    const LABELS: [&[usize]; 6] = [&[1], &[1, 1], &[1, 1, 1], &[1, 1, 1, 1], &[2], &[1, 1]];
    FdCStarAlgebra::new(LABELS.choose(rng).expect("nonempty")).expect("positive sizes")
}

/// A random magic unitary over `M_d` with commuting entries: the standard
/// basis of `ℂ^d` is split into groups, each group follows a random
/// permutation, and the result is conjugated by a Haar unitary.
pub fn random_magic_unitary<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<MagicUnitary> {
    let algebra = FdCStarAlgebra::matrices(d)?;
    let w = random::unitary(d, rng);
    let mut entries = vec![vec![CMatrix::zeros(d, d); n]; n];
    for basis_vector in 0..d {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        for (i, &j) in perm.iter().enumerate() {
            entries[i][j][(basis_vector, basis_vector)] = re(1.0);
        }
    }
    let entries = entries
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|p| AlgebraElement::from_blocks(&algebra, vec![&w * p * w.adjoint()]))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    MagicUnitary::new(entries, DEFAULT_TOL)
}

/// Random rank-`r` projection in `M_d`.
fn random_projection<R: Rng + ?Sized>(d: usize, r: usize, rng: &mut R) -> CMatrix {
    let w = random::unitary(d, rng);
    let mut diag = CMatrix::zeros(d, d);
    for i in 0..r {
        diag[(i, i)] = re(1.0);
    }
    &w * diag * w.adjoint()
}

/// `[[p, I−p, 0, 0], [I−p, p, 0, 0], [0, 0, q, I−q], [0, 0, I−q, q]]` with random
/// projections `p, q` in `M_d`; generically non-commuting.
pub fn random_block_magic_4x4<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<MagicUnitary> {
    let algebra = FdCStarAlgebra::matrices(d)?;
    let rank_p = rng.gen_range(1..d.max(2));
    let rank_q = rng.gen_range(1..d.max(2));
    let p = AlgebraElement::from_blocks(&algebra, vec![random_projection(d, rank_p.min(d), rng)])?;
    let q = AlgebraElement::from_blocks(&algebra, vec![random_projection(d, rank_q.min(d), rng)])?;
    let unit = algebra.identity();
    let zero = AlgebraElement::zero(&algebra);
    let (pc, qc) = (&unit - &p, &unit - &q);
    MagicUnitary::new(
        vec![
            vec![p.clone(), pc.clone(), zero.clone(), zero.clone()],
            vec![pc, p, zero.clone(), zero.clone()],
            vec![zero.clone(), zero.clone(), q.clone(), qc.clone()],
            vec![zero.clone(), zero, qc, q],
        ],
        DEFAULT_TOL,
    )
}

/// `n` mutually orthogonal projections in `M_d` summing to `I`, obtained by
/// splitting a random orthonormal basis into consecutive groups.
pub fn random_projection_partition<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Vec<AlgebraElement>> {
    let algebra = FdCStarAlgebra::matrices(d)?;
    let w = random::unitary(d, rng);
    let owners: Vec<usize> = (0..d).map(|_| rng.gen_range(0..n)).collect();
    (0..n)
        .map(|k| {
            let mut diag = CMatrix::zeros(d, d);
            for (i, &o) in owners.iter().enumerate() {
                if o == k {
                    diag[(i, i)] = re(1.0);
                }
            }
            AlgebraElement::from_blocks(&algebra, vec![&w * diag * w.adjoint()])
        })
        .collect()
}

/// A faithful non-tracial state `ρ` on `algebra` and `k` unitaries commuting
/// with `ρ`, diagonal in a random basis per block. Conjugation by these
/// unitaries preserves `ρ`, and the unitaries commute with each other.
pub fn covariant_unitaries<R: Rng + ?Sized>(
    algebra: &FdCStarAlgebra,
    k: usize,
    rng: &mut R,
) -> (LinearFunctional, Vec<AlgebraElement>) {
    let bases: Vec<CMatrix> = algebra.block_dims().iter().map(|&n| random::unitary(n, rng)).collect();
    let mut weights: Vec<Vec<f64>> =
        algebra.block_dims().iter().map(|&n| (0..n).map(|_| rng.gen_range(0.2..1.0)).collect()).collect();
    let total: f64 = weights.iter().flatten().sum();
    weights.iter_mut().flatten().for_each(|w| *w /= total);
    let diag_in = |b: &CMatrix, vals: &[Complex64]| -> CMatrix {
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vals.to_vec()));
        b * d * b.adjoint()
    };
    let rho_blocks = bases
        .iter()
        .zip(&weights)
        .map(|(b, w)| diag_in(b, &w.iter().map(|&x| re(x)).collect::<Vec<_>>()))
        .collect();
    let rho = AlgebraElement::from_blocks(algebra, rho_blocks).expect("block shapes");
    let unitaries = (0..k)
        .map(|_| {
            let blocks = bases
                .iter()
                .map(|b| {
                    let phases: Vec<Complex64> =
                        (0..b.nrows()).map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))).collect();
                    diag_in(b, &phases)
                })
                .collect();
            AlgebraElement::from_blocks(algebra, blocks).expect("block shapes")
        })
        .collect();
    (LinearFunctional::from_density(rho), unitaries)
}

/// A conjugation family on `algebra` preserving a random non-tracial faithful state.
pub fn covariant_conjugation_family<R: Rng + ?Sized>(
    algebra: &FdCStarAlgebra,
    k: usize,
    rng: &mut R,
) -> (QuantumFamily, LinearFunctional) {
    let (omega, unitaries) = covariant_unitaries(algebra, k, rng);
    (QuantumFamily::conjugation(algebra, &unitaries).expect("unitary conjugations"), omega)
}

/// A family with a faithful invariant state, tagged by a name.
#[derive(Clone, Debug)]
pub struct InvariantExample {
    pub name: String,
    pub family: QuantumFamily,
    pub state: LinearFunctional,
}

/// Families with a faithful invariant state: trivial families, Wang families
/// with the uniform measure, conjugation families with traces and with
/// invariant non-tracial densities. Deterministic for a given seed.
pub fn invariant_corpus<R: Rng + ?Sized>(rng: &mut R) -> Result<Vec<InvariantExample>> {
    let mut out = Vec::new();
    let mut push = |name: String, family: QuantumFamily, state: LinearFunctional| {
        out.push(InvariantExample { name, family, state })
    };
    for dims in [vec![2], vec![2, 1]] {
        let m = FdCStarAlgebra::new(&dims)?;
        let t = QuantumFamily::trivial(&m, &FdCStarAlgebra::commutative(2)?);
        push(format!("trivial {m}"), t, random::faithful_state(&m, rng));
    }
    for perm in [vec![0, 1, 2], vec![1, 2, 0], vec![1, 0, 3, 2]] {
        let f = wang_family(&MagicUnitary::permutation(&perm)?)?;
        let psi = LinearFunctional::uniform(f.source());
        push(format!("wang permutation {perm:?}"), f, psi);
    }
    let (nc, _) = nonclassical_magic_4x4(0.7);
    let f = wang_family(&nc)?;
    push("wang nonclassical 0.7".into(), f.clone(), LinearFunctional::uniform(f.source()));
    for d in [2, 3] {
        let f = wang_family(&random_magic_unitary(3, d, rng)?)?;
        push(format!("wang random 3x3 over M{d}"), f.clone(), LinearFunctional::uniform(f.source()));
        let f = wang_family(&random_block_magic_4x4(d, rng)?)?;
        push(format!("wang random 4x4 over M{d}"), f.clone(), LinearFunctional::uniform(f.source()));
    }
    let flip = sign_flip_family();
    push("sign flip trace".into(), flip.clone(), LinearFunctional::normalized_trace(flip.source()));
    push("sign flip diag(1/3,2/3)".into(), flip, modular_test_state());
    for dims in [vec![2], vec![3], vec![2, 1]] {
        let m = FdCStarAlgebra::new(&dims)?;
        let (f, w) = covariant_conjugation_family(&m, 3, rng);
        push(format!("covariant conjugation {m}"), f, w);
    }
    Ok(out)
}

/// An action with a (generally non-invariant) state.
#[derive(Clone, Debug)]
pub struct ActionExample {
    pub name: String,
    pub family: QuantumFamily,
    pub semigroup: QuantumSemigroup,
    pub state: LinearFunctional,
}

/// Actions paired with states that are deformed away from invariance.
pub fn deformed_action_corpus<R: Rng + ?Sized>(rng: &mut R) -> Result<Vec<ActionExample>> {
    let mut out = Vec::new();
    for n in [2, 3] {
        let family = all_maps_family(n)?;
        let semigroup = map_monoid_semigroup(n)?;
        out.push(ActionExample {
            name: format!("all maps on {n} points, uniform"),
            state: LinearFunctional::uniform(family.source()),
            family: family.clone(),
            semigroup: semigroup.clone(),
        });
        out.push(ActionExample {
            name: format!("all maps on {n} points, random state"),
            state: random::faithful_state(family.source(), rng),
            family,
            semigroup,
        });
    }
    for n in [3, 4] {
        let family = shift_action(n)?;
        out.push(ActionExample {
            name: format!("Z{n} shifts, random state"),
            state: random::faithful_state(family.source(), rng),
            family,
            semigroup: cyclic_group_semigroup(n)?,
        });
    }
    let flip = sign_flip_family();
    out.push(ActionExample {
        name: "sign flip, random state".into(),
        state: random::faithful_state(flip.source(), rng),
        family: flip,
        semigroup: cyclic_group_semigroup(2)?,
    });
    Ok(out)
}
