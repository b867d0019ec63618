use mapls_core::construction::Constructor;
use mapls_core::local_search::{LocalSearch, VOptVariant};
use mapls_core::meta::perturb;
use mapls_core::{generate, solve_ap2, swap_vectors, Assignment, DimSet, Family, FamilySpec, Instance, SplitMix64, SquareMatrix};
use proptest::prelude::*;

fn assignment_from_seed(s: usize, n: usize, seed: u64) -> Assignment {
    let mut rng = SplitMix64::new(seed);
    let rest: Vec<Vec<usize>> = (1..s).map(|_| rng.permutation(n)).collect();
    Assignment::from_tail_perms(n, &rest).unwrap()
}

fn inverse(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

fn family_strategy() -> impl Strategy<Value = Family> {
    prop::sample::select(Family::GENERATED.to_vec())
}

fn brute_force_ap2(m: &SquareMatrix) -> f64 {
    fn rec(m: &SquareMatrix, row: usize, used: u32, acc: f64, best: &mut f64) {
        if row == m.n() {
            *best = best.min(acc);
            return;
        }
        for j in 0..m.n() {
            if used & (1 << j) == 0 {
                rec(m, row + 1, used | (1 << j), acc + m.get(row, j), best);
            }
        }
    }
    let mut best = f64::INFINITY;
    rec(m, 0, 0, 0.0, &mut best);
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complement_with_inverse_gives_same_assignment(s in 3usize..7, n in 1usize..9, seed: u64, bits: u32) {
        let a = assignment_from_seed(s, n, seed);
        let d = DimSet::from_bits(bits & DimSet::full(s).bits());
        let rho = SplitMix64::new(seed ^ 0xabc).permutation(n);
        let left = a.apply_dimension_permutation(d, &rho).unwrap();
        let right = a.apply_dimension_permutation(d.complement(s), &inverse(&rho)).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn dimension_permutation_is_a_set_of_swaps(s in 3usize..7, n in 1usize..9, seed: u64, bits: u32) {
        let a = assignment_from_seed(s, n, seed);
        let d = DimSet::from_bits(bits & DimSet::full(s).bits());
        let rho = SplitMix64::new(seed.rotate_left(7)).permutation(n);
        let b = a.apply_dimension_permutation(d, &rho).unwrap();
        b.validate().unwrap();
        let mut expected: Vec<Vec<usize>> = (0..n).map(|i| swap_vectors(a.vector(i), a.vector(rho[i]), d)).collect();
        let mut got: Vec<Vec<usize>> = b.vectors().map(<[usize]>::to_vec).collect();
        expected.sort();
        got.sort();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn relabelling_all_dimensions_keeps_weight(family in family_strategy(), s in 3usize..6, n in 1usize..8, seed: u64) {
        let inst = generate(&FamilySpec::new(family, s, n, 1)).unwrap();
        let a = assignment_from_seed(s, n, seed);
        let rho = SplitMix64::new(!seed).permutation(n);
        let b = a.apply_dimension_permutation(DimSet::full(s), &rho).unwrap();
        prop_assert_eq!(inst.assignment_weight(&a), inst.assignment_weight(&b));
    }

    #[test]
    fn ap2_beats_every_permutation(n in 1usize..8, seed: u64) {
        let mut rng = SplitMix64::new(seed);
        let entries = (0..n * n).map(|_| rng.range_inclusive(0, 50) as f64).collect();
        let m = SquareMatrix::new(n, entries).unwrap();
        let sol = solve_ap2(&m);
        prop_assert_eq!(sol.cost, brute_force_ap2(&m));
        prop_assert_eq!(sol.cost, m.cost_of(&sol.perm));
        prop_assert_eq!(solve_ap2(&m), sol);
    }

    #[test]
    fn ap2_row_shift_shifts_cost(n in 1usize..7, seed: u64, row in 0usize..7, shift in 0i64..40) {
        let row = row % n;
        let mut rng = SplitMix64::new(seed);
        let entries: Vec<f64> = (0..n * n).map(|_| rng.range_inclusive(0, 50) as f64).collect();
        let mut shifted = entries.clone();
        for j in 0..n {
            shifted[row * n + j] += shift as f64;
        }
        let base = solve_ap2(&SquareMatrix::new(n, entries).unwrap()).cost;
        let moved = solve_ap2(&SquareMatrix::new(n, shifted).unwrap()).cost;
        prop_assert_eq!(moved - base, shift as f64);
    }

    #[test]
    fn generated_weights_in_declared_range(s in 3usize..7, n in 1usize..10, index in 1u32..11, seed: u64) {
        let mut rng = SplitMix64::new(seed);
        let pairs = (s * (s - 1) / 2) as f64;
        for family in Family::GENERATED {
            let inst = generate(&FamilySpec::new(family, s, n, index)).unwrap();
            for _ in 0..50 {
                let e: Vec<usize> = (0..s).map(|_| rng.below(n)).collect();
                let w = inst.weight(&e).unwrap();
                prop_assert_eq!(w.fract(), 0.0);
                prop_assert!(w >= inst.weight_lower_bound());
                match family {
                    Family::Random | Family::Planted => prop_assert!((1.0..=100.0).contains(&w)),
                    Family::Clique => prop_assert!(w >= pairs && w <= 100.0 * pairs),
                    Family::Product => prop_assert!(w >= 1.0 && w <= 10f64.powi(s as i32)),
                    _ => prop_assert!(w >= 0.0),
                }
            }
        }
    }

    #[test]
    fn every_heuristic_keeps_feasibility_and_never_worsens(family in family_strategy(), s in 3usize..6, n in 3usize..9, index in 1u32..4) {
        let inst = generate(&FamilySpec::new(family, s, n, index)).unwrap();
        let searches = ["1dv", "2dv", "sdv", "2opt", "3opt", "vopt", "vopt-natural", "1dv+2opt", "2dv+3opt", "sdv+3opt", "sdv+vopt"];
        for c in Constructor::ALL {
            let a = c.build(&inst);
            a.validate().unwrap();
            for name in searches {
                let ls: LocalSearch = name.parse().unwrap();
                let r = ls.run(&inst, &a).unwrap();
                r.result.validate().unwrap();
                prop_assert!(r.final_weight <= r.initial_weight);
                prop_assert_eq!(r.final_weight, inst.assignment_weight(&r.result));
                prop_assert_eq!(r.initial_weight, inst.assignment_weight(&a));
            }
        }
    }

    #[test]
    fn perturbation_keeps_feasibility(s in 3usize..8, n in 1usize..60, seed: u64) {
        let a = assignment_from_seed(s, n, seed);
        let mut rng = SplitMix64::new(seed);
        let b = perturb(&a, &mut rng);
        b.validate().unwrap();
    }
}

#[test]
fn lazy_weights_are_reproducible() {
    let a = generate(&FamilySpec::new(Family::Random, 5, 40, 3)).unwrap();
    let b = generate(&FamilySpec::new(Family::Random, 5, 40, 3)).unwrap();
    let mut rng = SplitMix64::new(99);
    for _ in 0..1000 {
        let e: Vec<usize> = (0..5).map(|_| rng.below(40)).collect();
        assert_eq!(a.weight_of(&e), b.weight_of(&e));
    }
}

#[test]
fn planted_assignment_beats_sampled_assignments() {
    let inst = generate(&FamilySpec::new(Family::Planted, 4, 10, 1)).unwrap();
    let planted_weight = inst.assignment_weight(inst.planted().unwrap());
    assert_eq!(planted_weight, 10.0);
    for seed in 0..10_000 {
        let a = assignment_from_seed(4, 10, seed);
        assert!(inst.assignment_weight(&a) >= planted_weight);
    }
}

#[test]
fn explicit_tensor_needs_exact_length() {
    let model = mapls_core::WeightModel::ExplicitTensor { values: vec![1.0; 7] };
    assert!(Instance::new(3, 2, Family::Explicit, 0, model).is_err());
}

#[test]
fn vopt_variant_overrides_parse() {
    let ls: LocalSearch = "vopt".parse().unwrap();
    assert_eq!(ls.with_vopt_variant(VOptVariant::Natural).to_string(), "vopt-natural");
}
