use num_complex::Complex64;
use proptest::prelude::*;
use qmaps_core::corpus;
use qmaps_core::families::{compose_families, evaluate_at_character, invariance_defects};
use qmaps_core::morphisms::{all_set_maps, characters_of, set_map_morphism};
use qmaps_core::representations::{action_matrix, regular_representation, wang_family};
use qmaps_core::semigroups::{cancellation_span_residual, classical_semigroup_algebra, tables, Side};
use qmaps_core::{random, FdCStarAlgebra, LinearFunctional, MagicUnitary, StarMorphism, TensorLayout};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn dims() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1usize..=3, 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multiplication_is_associative_and_star_reverses(d in dims(), seed in any::<u64>()) {
        let a = FdCStarAlgebra::new(&d).unwrap();
        let mut r = rng(seed);
        let (x, y, z) = (random::element(&a, &mut r), random::element(&a, &mut r), random::element(&a, &mut r));
        let scale = x.norm() * y.norm() * z.norm();
        prop_assert!((&(&x * &y) * &z).distance(&(&x * &(&y * &z))) <= 1e-12 * scale);
        prop_assert!((&x * &y).adjoint().distance(&(&y.adjoint() * &x.adjoint())) <= 1e-12 * x.norm() * y.norm());
        // C*-identity ‖x*x‖ = ‖x‖².
        prop_assert!(((&x.adjoint() * &x).norm() - x.norm().powi(2)).abs() <= 1e-10 * x.norm().powi(2));
    }

    #[test]
    fn tensor_norm_is_multiplicative(d1 in dims(), d2 in dims(), seed in any::<u64>()) {
        let (a, b) = (FdCStarAlgebra::new(&d1).unwrap(), FdCStarAlgebra::new(&d2).unwrap());
        let layout = TensorLayout::new(&a, &b);
        let mut r = rng(seed);
        let (x, y) = (random::element(&a, &mut r), random::element(&b, &mut r));
        let (x2, y2) = (random::element(&a, &mut r), random::element(&b, &mut r));
        let t = layout.tensor(&x, &y).unwrap();
        prop_assert!((t.norm() - x.norm() * y.norm()).abs() <= 1e-9 * x.norm() * y.norm());
        // (x ⊗ y)(x' ⊗ y') = xx' ⊗ yy'
        let lhs = &t * &layout.tensor(&x2, &y2).unwrap();
        let rhs = layout.tensor(&(&x * &x2), &(&y * &y2)).unwrap();
        prop_assert!(lhs.distance(&rhs) <= 1e-10 * (1.0 + rhs.norm()));
        prop_assert_eq!(layout.tensor(&a.identity(), &b.identity()).unwrap(), layout.product().identity());
    }

    #[test]
    fn flip_is_an_involutive_homomorphism(d1 in dims(), d2 in dims(), seed in any::<u64>()) {
        let (b, c) = (FdCStarAlgebra::new(&d1).unwrap(), FdCStarAlgebra::new(&d2).unwrap());
        let f = StarMorphism::flip(&b, &c);
        prop_assert!(f.is_star_hom());
        let round = StarMorphism::flip(&c, &b).compose(&f).unwrap();
        prop_assert_eq!(round.distance(&StarMorphism::identity(TensorLayout::new(&b, &c).product())).unwrap(), 0.0);
        let mut r = rng(seed);
        let (x, y) = (random::element(&b, &mut r), random::element(&c, &mut r));
        let flipped = f.apply(&TensorLayout::new(&b, &c).tensor(&x, &y).unwrap()).unwrap();
        prop_assert!(flipped.distance(&TensorLayout::new(&c, &b).tensor(&y, &x).unwrap()) <= 1e-12 * (1.0 + x.norm() * y.norm()));
    }

    #[test]
    fn random_homs_compose_to_homs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = corpus::random_algebra(2, 2, &mut r);
        let b = corpus::random_algebra(2, 3, &mut r);
        let c = corpus::random_algebra(3, 3, &mut r);
        if let (Some(f), Some(g)) = (random::unital_hom(&a, &b, &mut r), random::unital_hom(&b, &c, &mut r)) {
            let h = g.compose(&f).unwrap();
            prop_assert!(h.defects().max() <= 1e-9, "{:?}", h.defects());
        }
    }

    #[test]
    fn families_with_a_common_invariant_state_compose_invariantly(seed in any::<u64>(), n in 2usize..=4) {
        let mut r = rng(seed);
        let d = 1 + (seed % 2) as usize;
        let a = wang_family(&corpus::random_magic_unitary(n, d, &mut r).unwrap()).unwrap();
        let b = corpus::shift_action(n).unwrap();
        let psi = LinearFunctional::uniform(a.source());
        let composed = compose_families(&a, &b).unwrap();
        prop_assert!(invariance_defects(&composed, &psi).unwrap().defect <= 1e-9);
    }
}

#[test]
fn set_map_composition_matches_lookup_tables() {
    for n in 2..=3 {
        let tables = all_set_maps(n);
        for f in &tables {
            for g in &tables {
                // φ_f ∘ φ_g = φ_{g∘f} since φ_f(x) = x ∘ f.
                let gf: Vec<usize> = (0..n).map(|i| g[f[i]]).collect();
                let lhs = set_map_morphism(f).unwrap().compose(&set_map_morphism(g).unwrap()).unwrap();
                assert_eq!(lhs.matrix(), set_map_morphism(&gf).unwrap().matrix(), "f={f:?} g={g:?}");
            }
        }
    }
}

#[test]
fn characters_agree_with_a_brute_force_scan() {
    for d in [vec![1], vec![2], vec![1, 2, 1], vec![3, 1], vec![1, 1, 1, 1], vec![2, 2]] {
        let a = FdCStarAlgebra::new(&d).unwrap();
        let basis = a.basis();
        let dim = a.dim();
        // Every functional with values in {0, 1} on the matrix units; keep the
        // nonzero multiplicative ones.
        let mut brute = Vec::new();
        for mask in 1u32..(1 << dim) {
            let values: Vec<Complex64> = (0..dim).map(|i| Complex64::new(((mask >> i) & 1) as f64, 0.0)).collect();
            let omega = LinearFunctional::from_values(&a, &values).unwrap();
            let multiplicative = basis.iter().all(|x| {
                basis.iter().all(|y| {
                    let lhs = omega.evaluate(&(x * y)).unwrap();
                    (lhs - omega.evaluate(x).unwrap() * omega.evaluate(y).unwrap()).norm() <= 1e-12
                })
            });
            if multiplicative {
                brute.push(values);
            }
        }
        let mut found: Vec<Vec<Complex64>> = characters_of(&a).iter().map(|ch| ch.as_functional().values()).collect();
        let key = |v: &Vec<Complex64>| v.iter().map(|z| z.re as u8).collect::<Vec<_>>();
        found.sort_by_key(key);
        brute.sort_by_key(key);
        assert_eq!(found, brute, "{d:?}");
        assert_eq!(found.len(), d.iter().filter(|&&n| n == 1).count());
    }
}

#[test]
fn cancellation_spans_contain_regular_coefficients() {
    let mut r = rng(17);
    for n in 1..=5 {
        let s = classical_semigroup_algebra(&tables::cyclic_group(n)).unwrap();
        let v = regular_representation(n).unwrap();
        let layout = TensorLayout::new(s.algebra(), s.algebra());
        for k in 0..n {
            for l in 0..n {
                let c = random::element(s.algebra(), &mut r);
                let target = layout.tensor(&c, v.entry(k, l)).unwrap();
                for side in [Side::Left, Side::Right] {
                    assert!(cancellation_span_residual(&s, side, &target).unwrap() <= 1e-9);
                }
            }
        }
    }
    // Left-zero semigroups miss elements on the left.
    let lz = classical_semigroup_algebra(&tables::left_zero(2)).unwrap();
    let a = lz.algebra();
    let layout = TensorLayout::new(a, a);
    let target = layout.tensor(&a.basis_element(0), &a.basis_element(1)).unwrap();
    assert!(cancellation_span_residual(&lz, Side::Left, &target).unwrap() > 0.1);
    assert!(cancellation_span_residual(&lz, Side::Right, &target).unwrap() <= 1e-9);
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    all_set_maps(n).into_iter().filter(|t| (0..n).all(|j| t.contains(&j))).collect()
}

#[test]
fn wang_family_evaluates_to_the_permutation() {
    for n in 1..=4 {
        for p in permutations(n) {
            let u = MagicUnitary::permutation(&p).unwrap();
            let family = wang_family(&u).unwrap();
            let chars = characters_of(family.label());
            assert_eq!(chars.len(), 1);
            let at_point = evaluate_at_character(&family, &chars[0]).unwrap();
            assert_eq!(at_point.matrix(), set_map_morphism(&p).unwrap().matrix(), "{p:?}");
        }
    }
}

#[test]
fn action_matrices_are_representations() {
    let mut cases = Vec::new();
    for n in 2..=4 {
        let f = corpus::shift_action(n).unwrap();
        let w = LinearFunctional::uniform(f.source());
        cases.push((f, corpus::cyclic_group_semigroup(n).unwrap(), w));
    }
    let flip = corpus::sign_flip_family();
    cases.push((flip, corpus::cyclic_group_semigroup(2).unwrap(), corpus::modular_test_state()));
    for (f, s, w) in &cases {
        assert!(invariance_defects(f, w).unwrap().defect <= 1e-12);
        let a = action_matrix(f, w, Some(s)).unwrap();
        assert!(a.isometry_defect <= 1e-9);
        let rep = a.representation_defect.expect("semigroup supplied");
        assert!(rep <= 1e-9, "{rep}");
    }
}
