mod common;

use common::brute_force_violation;
use proptest::prelude::*;

use rpdim::bounds::{
    carli_cycle_check, check_a2, check_a2_prime, concentration_bound, edge_probability_bound, DEFAULT_T_CAP,
};
use rpdim::dataset::{carli_index, shares_to_quantities};
use rpdim::graph::{check_garp, witness_is_valid, TOL_EDGE_FILE};
use rpdim::io::{read_dataset_csv, write_dataset_csv};
use rpdim::lp::{solve_afriat, AfriatSystem};
use rpdim::separability::{
    additive_full_lp, additive_separability_cuts, weak_separability_necessary, GroupExpenditures,
    PartitionSpec,
};
use rpdim::{expenditure_matrix, Dataset, PriceRatioTensor};

fn dataset(t: usize, k: usize) -> impl Strategy<Value = Dataset> {
    (
        prop::collection::vec(prop::collection::vec(0.05f64..20.0, k), t),
        prop::collection::vec(prop::collection::vec(0.01f64..1.0, k), t),
    )
        .prop_map(|(r, raw)| {
            let w: Vec<Vec<f64>> = raw
                .into_iter()
                .map(|row| {
                    let s: f64 = row.iter().sum();
                    row.into_iter().map(|v| v / s).collect()
                })
                .collect();
            Dataset::from_rows(&r, &w).unwrap()
        })
}

fn any_dataset(max_t: usize, max_k: usize) -> impl Strategy<Value = Dataset> {
    (2..=max_t, 2..=max_k).prop_flat_map(|(t, k)| dataset(t, k))
}

fn permute(ds: &Dataset, perm: &[usize]) -> Dataset {
    let r: Vec<Vec<f64>> = perm.iter().map(|&i| ds.prices(i).to_vec()).collect();
    let w: Vec<Vec<f64>> = perm.iter().map(|&i| ds.shares(i).to_vec()).collect();
    Dataset::from_rows(&r, &w).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn garp_matches_brute_force(ds in any_dataset(5, 4)) {
        let verdict = check_garp(&ds, TOL_EDGE_FILE);
        let e = expenditure_matrix(&ds);
        prop_assert_eq!(!verdict.satisfied, brute_force_violation(&e, TOL_EDGE_FILE));
        if let Some(cycle) = verdict.witness {
            prop_assert!(witness_is_valid(&e, &cycle, TOL_EDGE_FILE));
        }
    }

    #[test]
    fn garp_is_permutation_invariant(ds in any_dataset(6, 4), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..ds.t()).collect();
        let mut s = seed;
        for i in (1..perm.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(
            check_garp(&ds, TOL_EDGE_FILE).satisfied,
            check_garp(&permute(&ds, &perm), TOL_EDGE_FILE).satisfied
        );
    }

    #[test]
    fn afriat_agrees_with_garp(ds in any_dataset(5, 4)) {
        let sys = AfriatSystem::from_dataset(&ds);
        let w = solve_afriat(&sys).unwrap();
        prop_assert_eq!(w.feasible, check_garp(&ds, TOL_EDGE_FILE).satisfied);
        if w.feasible {
            let scale = w.u.iter().chain(&w.lambda).fold(1.0f64, |m, v| m.max(v.abs()));
            let e = sys.coefficients();
            let spread = (0..e.n()).flat_map(|i| (0..e.n()).map(move |j| (i, j))).fold(1.0f64, |m, (i, j)| m.max(e.get(i, j)));
            let tol = 1e-8 + 1e-10 * scale * spread;
            prop_assert!(sys.min_slack(&w.u, &w.lambda) >= -tol);
            let u2: Vec<f64> = w.u.iter().map(|v| 2.0 * v).collect();
            let l2: Vec<f64> = w.lambda.iter().map(|v| 2.0 * v).collect();
            prop_assert!(sys.min_slack(&u2, &l2) >= -2.0 * tol);
        }
    }

    #[test]
    fn ratios_are_reciprocal_and_telescope(
        prices in prop::collection::vec(prop::collection::vec(0.01f64..100.0, 3), 3..6)
    ) {
        let tensor = PriceRatioTensor::from_prices(&prices).unwrap();
        let t = prices.len();
        for i in 0..t {
            for j in 0..t {
                for (a, b) in tensor.edge(i, j).iter().zip(tensor.edge(j, i)) {
                    prop_assert!((a * b - 1.0).abs() <= 1e-12);
                }
                for l in 0..t {
                    for g in 0..3 {
                        let lhs = tensor.edge(i, j)[g] * tensor.edge(j, l)[g];
                        prop_assert!((lhs / tensor.edge(i, l)[g] - 1.0).abs() <= 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn carli_product_is_at_least_one(
        prices in (1usize..8, 2usize..6).prop_flat_map(|(k, l)| prop::collection::vec(prop::collection::vec(0.01f64..100.0, k), l))
    ) {
        let k = prices[0].len();
        let l = prices.len();
        let edges: Vec<Vec<f64>> = (0..l)
            .map(|s| (0..k).map(|g| prices[s][g] / prices[(s + 1) % l][g]).collect())
            .collect();
        let c = carli_cycle_check(&edges).unwrap();
        prop_assert!(c.product >= 1.0 - 1e-9);
        prop_assert!(c.max_mean >= 1.0 - 1e-12);
    }

    #[test]
    fn a2_prime_implies_a2(
        prices in (2usize..6, 1usize..6).prop_flat_map(|(t, k)| prop::collection::vec(prop::collection::vec(0.05f64..20.0, k), t))
    ) {
        let t = prices.len();
        let tensor = PriceRatioTensor::from_prices(&prices).unwrap();
        let eps = check_a2(&tensor, DEFAULT_T_CAP).unwrap().value;
        let eta = check_a2_prime(&tensor.carli_matrix(), DEFAULT_T_CAP).unwrap().value;
        prop_assert!(eps >= eta / t as f64 - 1e-12);
    }

    #[test]
    fn shares_and_quantities_round_trip(
        r in prop::collection::vec(0.01f64..50.0, 2..10),
        raw in prop::collection::vec(0.0f64..1.0, 10)
    ) {
        let k = r.len();
        let s: f64 = raw[..k].iter().sum::<f64>() + 1e-3;
        let w: Vec<f64> = raw[..k].iter().map(|v| (v + 1e-3 / k as f64) / s).collect();
        let x = shares_to_quantities(&w, &r).unwrap();
        for ((wk, xk), rk) in w.iter().zip(&x).zip(&r) {
            prop_assert!((rk * xk - wk).abs() <= 1e-12);
        }
        prop_assert!((x.iter().zip(&r).map(|(a, b)| a * b).sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn csv_round_trip(ds in any_dataset(4, 4)) {
        let mut buf = Vec::new();
        write_dataset_csv(&ds, &mut buf).unwrap();
        prop_assert_eq!(read_dataset_csv(buf.as_slice()).unwrap(), ds);
    }

    #[test]
    fn bounds_stay_in_unit_interval(
        carli in 1.0001f64..3.0, a in 0.01f64..0.99, width in 0.02f64..5.0, k in 1usize..5000, delta in 1e-4f64..2.0
    ) {
        let b = a + width;
        let e = edge_probability_bound(carli, a, b, k).unwrap();
        prop_assert!((0.0..=1.0).contains(&e.value));
        let c = concentration_bound(delta, a, b, k).unwrap();
        prop_assert!((0.0..=1.0).contains(&c.value));
    }

    #[test]
    fn carli_mean_is_arithmetic_mean(v in prop::collection::vec(0.01f64..10.0, 1..20)) {
        let m = carli_index(&v).unwrap();
        prop_assert!((m - v.iter().sum::<f64>() / v.len() as f64).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn additive_solvers_agree_and_nest(ds in any_dataset(6, 6), split in 1usize..5) {
        let k = ds.k();
        let cut = 1 + split % (k - 1);
        let partition = PartitionSpec::new(k, vec![(0..cut).collect(), (cut..k).collect()]).unwrap();
        let coeffs = GroupExpenditures::new(&ds, &partition).unwrap();
        let full = additive_full_lp(&coeffs, 1e-8).unwrap();
        let cuts = additive_separability_cuts(&coeffs, 1e-8).unwrap();
        prop_assert_eq!(full.feasible, cuts.feasible);
        if cuts.feasible {
            prop_assert!(cuts.min_slack(&coeffs) >= -1e-7);
        }
        let weak = weak_separability_necessary(&ds, &partition, TOL_EDGE_FILE).unwrap().satisfied;
        let garp = check_garp(&ds, TOL_EDGE_FILE).satisfied;
        prop_assert!(!full.feasible || weak);
        prop_assert!(!weak || garp);
    }

    #[test]
    fn single_group_additive_is_afriat(ds in any_dataset(5, 4)) {
        let coeffs = GroupExpenditures::new(&ds, &PartitionSpec::single(ds.k())).unwrap();
        prop_assert_eq!(
            additive_full_lp(&coeffs, 1e-8).unwrap().feasible,
            solve_afriat(&AfriatSystem::from_dataset(&ds)).unwrap().feasible
        );
    }
}
