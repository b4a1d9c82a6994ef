//! Named batches of checks over the built-in example corpus.
//!
//! Every check owns its RNG stream, derived from the seed and the check name,
//! so checks can run on separate threads and the report is identical from
//! run to run. The report is sorted by check name.

use qmaps_core::algebra::{orthonormal_basis, sigma_map};
use qmaps_core::corpus::{self, deformed_action_corpus, invariant_corpus};
use qmaps_core::families::{
    coideal_identity_defect, commutation_defect, compose_families, fixed_point_space, invariance_defects,
};
use qmaps_core::morphisms::enumerate_set_maps;
use qmaps_core::representations::{magic_unitary_check, modular_compatibility_defect, nonclassical_magic_4x4, podles_rank, wang_family};
use qmaps_core::semigroups::{
    action_defect, cancellation_rank, classical_semigroup_algebra, coassociativity_defect, counit_defect, tables, Side,
};
use qmaps_core::{random, FdCStarAlgebra, LinearFunctional, QuantumFamily, StarMorphism, TensorLayout};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::commands::CliError;
use crate::report::Check;

pub const DEFAULT_SUITE: &str = "acceptance";
pub const SUITES: [&str; 6] = ["acceptance", "algebra", "morphisms", "families", "semigroups", "representations"];

type CheckFn = fn(&mut ChaCha8Rng) -> qmaps_core::Result<Check>;

const CHECKS: &[(&str, CheckFn)] = &[
    ("algebra.orthonormal_basis", orthonormal_gram),
    ("algebra.sigma_of_trace", sigma_of_trace),
    ("algebra.tensor_norm", tensor_norm),
    ("families.all_maps_ergodic", all_maps_ergodic),
    ("families.associativity", associativity),
    ("families.invariant_corpus", invariant_examples),
    ("families.trivial_commutes", trivial_commutes),
    ("morphisms.flip_involution", flip_involution),
    ("morphisms.set_maps", set_maps),
    ("representations.column_fault", column_fault),
    ("representations.modular_identity", modular_identity),
    ("representations.nonclassical_commutator", nonclassical_commutator),
    ("representations.permutation_magic", permutation_magic),
    ("representations.podles_sign_flip", podles_sign_flip),
    ("representations.podles_wang", podles_wang),
    ("semigroups.coideal_identity", coideal_identity),
    ("semigroups.cyclic_cancellation", cyclic_cancellation),
    ("semigroups.left_zero_ranks", left_zero_ranks),
    ("semigroups.map2_bialgebra", map2_bialgebra),
];

pub fn check_names(suite: &str) -> Option<Vec<&'static str>> {
    if !SUITES.contains(&suite) {
        return None;
    }
    let prefix = format!("{suite}.");
    Some(CHECKS.iter().map(|(n, _)| *n).filter(|n| suite == DEFAULT_SUITE || n.starts_with(&prefix)).collect())
}

fn stream_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a over the name, mixed with the user seed.
    let h = name.bytes().fold(0xcbf2_9ce4_8422_2325_u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
    h ^ seed.wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

pub fn run(suite: &str, seed: u64) -> Result<Vec<Check>, CliError> {
    let names = check_names(suite)
        .ok_or_else(|| CliError::Usage(format!("unknown suite {suite:?}; available: {}", SUITES.join(", "))))?;
    let selected: Vec<(&str, CheckFn)> = CHECKS.iter().copied().filter(|(n, _)| names.contains(n)).collect();
    let mut checks: Vec<Check> = std::thread::scope(|scope| {
        let handles: Vec<_> = selected
            .iter()
            .map(|&(name, f)| {
                scope.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, name));
                    let mut check = match f(&mut rng) {
                        Ok(c) => c,
                        Err(e) => Check::hypothesis(name, e.to_string()),
                    };
                    check.name = name.to_string();
                    check
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite checks do not panic")).collect()
    });
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(checks)
}

fn tensor_norm(rng: &mut ChaCha8Rng) -> qmaps_core::Result<Check> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a = corpus::random_algebra(2, 3, rng);
        let b = corpus::random_algebra(2, 3, rng);
        let layout = TensorLayout::new(&a, &b);
        let (x, y) = (random::element(&a, rng), random::element(&b, rng));
        let expected = x.norm() * y.norm();
        worst = worst.max((layout.tensor(&x, &y)?.norm() - expected).abs() / expected);
    }
    Ok(Check::defect("", worst, 1e-9).from("random: 100 pairs").note("relative"))
}

fn orthonormal_gram(rng: &mut ChaCha8Rng) -> qmaps_core::Result<Check> {
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let a = corpus::random_algebra(3, 3, rng);
        let omega = random::faithful_state(&a, rng);
        let basis = orthonormal_basis(&a, &omega)?;
        for (i, x) in basis.iter().enumerate() {
            for (j, y) in basis.iter().enumerate() {
                let g = omega.evaluate(&(&x.adjoint() * y))?;
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g.re - target).abs().max(g.im.abs()));
            }
        }
    }
    Ok(Check::defect("", worst, 1e-9).from("random: 10 faithful states"))
}

fn sigma_of_trace(_: &mut ChaCha8Rng) -> qmaps_core::Result<Check> {
    let mut worst: f64 = 0.0;
    for dims in [&[2][..], &[2, 1], &[3, 2, 1], &[1, 1, 1]] {
        let a = FdCStarAlgebra::new(dims)?;
        worst = worst.max(sigma_map(&a, &LinearFunctional::normalized_trace(&a))?.distance_from_identity());
    }
    Ok(Check::defect("", worst, 1e-12).from("corpus: normalized traces"))
}

fn flip_involution(rng: &mut ChaCha8Rng) -> qmaps_core::Result<Check> {
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let b = corpus::random_algebra(2, 3, rng);
        let c = corpus::random_algebra(2, 3, rng);
        let round = StarMorphism::flip(&c, &b).compose(&StarMorphism::flip(&b, &c))?;
        worst = worst.max(round.distance(&StarMorphism::identity(TensorLayout::new(&b, &c).product()))?);
    }
    Ok(Check::defect("", worst, 1e-12).from("random: 10 pairs"))
}

fn set_maps(_: &mut ChaCha8Rng) -> qmaps_core::Result<Check> {
    let counts: Vec<usize> = (1..=4).map(|n| enumerate_set_maps(n).map(|m| m.len())).collect::<qmaps_core::Result<_>>()?;
    let worst = enumerate_set_maps(3)?.iter().map(|m| m.defects().max()).fold(0.0, f64::max);
    let mut check = Check::defect("", worst, 1e-12).observe(json!({ "counts": counts })).from("enumeration n = 1..4");
    check.pass &= counts == [1, 4, 27, 256];
    Ok(check)
}

fn associativity(rng: &mut ChaCha8Rng) -> qmaps_core::Result<Check> {
    let mut worst: f64 = 0.0;
    let mut trials = 0;
    while trials < 40 {
        let b = corpus::random_algebra(2, 3, rng);
        let c = corpus::random_algebra(2, 3, rng);
        let d = corpus::random_algebra(2, 3, rng);
        let e = corpus::random_algebra(2, 3, rng);
        let (l1, l2, l3) = (corpus::random_label(rng), corpus::random_label(rng), corpus::random_label(rng));
        let (Some(p1), Some(p2), Some(p3)) = (
            corpus::random_family(&d, &e, &l1, rng),
            corpus::random_family(&c, &d, &l2, rng),
            corpus::random_family(&b, &c, &l3, rng),
        ) else {
            continue;
        };
        trials += 1;
        let left = compose_families(&compose_families(&p1, &p2)?, &p3)?;
        let right = compose_families(&p1, &compose_families(&p2, &p3)?)?;
        let scale = p1.norm() * p2.norm() * p3.norm();
        worst = worst.max(left.morphism().distance(right.morphism())? / scale);
    }
    Ok(Check::defect("", worst, 1e-9).from("random: 40 triples").note("relative to the product of norms"))
}

fn all_maps_ergodic(_: &mut ChaCha8Rng) -> qmaps_core::Result<Check> {
    let all = fixed_point_space(&corpus::all_maps_family(3)?)?.dimension;
    let trivial = fixed_point_space(&QuantumFamily::trivial(&FdCStarAlgebra::matrices(2)?, &FdCStarAlgebra::commutative(2)?))?.dimension;
    Ok(Check::predicate("", all == 1 && trivial == 4, json!({ "all_maps_c3": all, "trivial_m2": trivial }))
        .from("corpus: all maps on 3 points, trivial family on M2"))
}

fn trivial_commutes(rng: &mut ChaCha8Rng) -> qmaps_core::Result<Check> {
    let mut worst: f64 = 0.0;
    let mut trials = 0;
    while trials < 10 {
        let a = corpus::random_algebra(2, 2, rng);
        let Some(f) = corpus::random_self_family(&a, &corpus::random_label(rng), rng) else { continue };
        trials += 1;
        let t = QuantumFamily::trivial(&a, &corpus::random_label(rng));
        worst = worst.max(commutation_defect(&t, &f)?);
    }
    Ok(Check::defect("", worst, 1e-12).from("random: 10 families"))
}

fn invariant_examples(rng: &mut ChaCha8Rng) -> qmaps_core::Result<Check> {
    let corpus = invariant_corpus(rng)?;
    let worst = corpus.iter().map(|ex| invariance_defects(&ex.family, &ex.state).map(|r| r.defect)).try_fold(0.0, |m, d| d.map(|d| f64::max(m, d)))?;
    Ok(Check::defect("", worst, 1e-9).from(format!("corpus: {} invariant examples", corpus.len())))
}

fn permutation_magic(_: &mut ChaCha8Rng) -> qmaps_core::Result<Check> {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in 1..=4 {
        for u in corpus::permutation_magic_unitaries(n)? {
            worst = worst.max(u.report().max_defect());
            count += 1;
        }
    }
    Ok(Check::defect("", worst, 1e-12).from(format!("corpus: {count} permutation matrices, n ≤ 4")))
}

fn nonclassical_commutator(_: &mut ChaCha8Rng) -> qmaps_core::Result<Check> {
    let (u, _) = nonclassical_magic_4x4(0.7);
    let r = u.report();
    Ok(Check::predicate("", r.pass && r.max_commutator >= 0.1, json!(r.max_commutator)).from("generator: theta = 0.7"))
}

fn column_fault(_: &mut ChaCha8Rng) -> qmaps_core::Result<Check> {
    let r = magic_unitary_check(&corpus::column_fault_entries(), 1e-9)?;
    Ok(Check::predicate("", !r.pass && r.column_sums >= 1.0, json!(r.column_sums))
        .from("corpus: rows sum to I, columns do not"))
}

fn modular_identity(_: &mut ChaCha8Rng) -> qmaps_core::Result<Check> {
    let r = modular_compatibility_defect(&corpus::sign_flip_family(), &corpus::modular_test_state(), 1e-9)?;
    Ok(Check::defect("", r.defect.max(r.left_inverse_defect), 1e-9).from("corpus: sign flip on M2, density diag(1/3, 2/3)"))
}

fn podles_sign_flip(_: &mut ChaCha8Rng) -> qmaps_core::Result<Check> {
    let r = podles_rank(&corpus::sign_flip_family())?;
    Ok(Check::predicate("", r.rank == 8, json!(r.rank)).from("corpus: sign flip on M2"))
}

fn podles_wang(_: &mut ChaCha8Rng) -> qmaps_core::Result<Check> {
    let (u, _) = nonclassical_magic_4x4(0.7);
    let r = podles_rank(&wang_family(&u)?)?;
    Ok(Check::predicate("", r.rank == 16 && r.full, json!(r.rank)).from("generator: theta = 0.7"))
}

fn map2_bialgebra(_: &mut ChaCha8Rng) -> qmaps_core::Result<Check> {
    let s = corpus::map_monoid_semigroup(2)?;
    let f = corpus::all_maps_family(2)?;
    let worst = coassociativity_defect(&s)?.max(counit_defect(&s)?).max(action_defect(&f, &s)?);
    Ok(Check::defect("", worst, 1e-12).from("corpus: C(Map2) acting on C^2").note("max of coassociativity, counit, action"))
}

fn cyclic_cancellation(_: &mut ChaCha8Rng) -> qmaps_core::Result<Check> {
    let mut ranks = Vec::new();
    let mut pass = true;
    for n in 1..=5 {
        let s = classical_semigroup_algebra(&tables::cyclic_group(n))?;
        let (l, r) = (cancellation_rank(&s, Side::Left)?, cancellation_rank(&s, Side::Right)?);
        pass &= l.full && r.full;
        ranks.push([l.rank, r.rank]);
    }
    Ok(Check::predicate("", pass, json!(ranks)).from("corpus: Z_n, n ≤ 5"))
}

fn left_zero_ranks(_: &mut ChaCha8Rng) -> qmaps_core::Result<Check> {
    let s = classical_semigroup_algebra(&tables::left_zero(2))?;
    let (l, r) = (cancellation_rank(&s, Side::Left)?.rank, cancellation_rank(&s, Side::Right)?.rank);
    Ok(Check::predicate("", l == 2 && r == 4, json!({ "left": l, "right": r })).from("corpus: left-zero semigroup of order 2"))
}

fn coideal_identity(rng: &mut ChaCha8Rng) -> qmaps_core::Result<Check> {
    let corpus = deformed_action_corpus(rng)?;
    let mut worst: f64 = 0.0;
    for ex in &corpus {
        worst = worst.max(coideal_identity_defect(&ex.family, &ex.semigroup, &ex.state)?);
    }
    Ok(Check::defect("", worst, 1e-9).from(format!("corpus: {} deformed actions", corpus.len())))
}
