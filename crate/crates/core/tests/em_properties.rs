//! EM invariants on random tables.

use lbann_core::data::ContingencyTable;
use lbann_core::lba::{fit_lba, EmState, FitConfig};
use ndarray::Array2;
use proptest::prelude::*;

fn table_strategy() -> impl Strategy<Value = (ContingencyTable, usize, u64)> {
    (1usize..=8, 1usize..=8, any::<u64>())
        .prop_flat_map(|(i, j, seed)| {
            (
                prop::collection::vec(0u64..40, i * j),
                Just((i, j)),
                1..=i.min(j),
                Just(seed),
            )
        })
        .prop_filter_map("rows need positive totals", |(cells, (i, j), k, seed)| {
            let counts = Array2::from_shape_vec((i, j), cells).ok()?;
            if counts.rows().into_iter().any(|r| r.sum() == 0) {
                return None;
            }
            let ct = ContingencyTable::new(
                counts,
                (0..i).map(|v| format!("r{v}")).collect(),
                (0..j).map(|v| format!("c{v}")).collect(),
            )
            .ok()?;
            Some((ct, k, seed))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn loglik_never_decreases_and_simplices_hold((ct, k, seed) in table_strategy()) {
        let mut rng = lbann_core::seeded_rng(seed);
        let mut em = EmState::<f64>::random(&ct, k, &mut rng).unwrap();
        let mut prev = em.loglik();
        for _ in 0..200 {
            let next = em.step();
            prop_assert!(next >= prev - 1e-10, "loglik fell {prev} -> {next}");
            prev = next;
            for row in em.a.rows() {
                prop_assert!((row.sum() - 1.0).abs() < 1e-8);
                prop_assert!(row.iter().all(|&v| v >= 0.0));
            }
            for col in em.b.columns() {
                prop_assert!((col.sum() - 1.0).abs() < 1e-8);
                prop_assert!(col.iter().all(|&v| v >= 0.0));
            }
        }
    }

    #[test]
    fn fitted_trace_is_monotone((ct, k, seed) in table_strategy()) {
        let cfg = FitConfig { restarts: 2, seed, max_iterations: 300, ..FitConfig::new(k) };
        let m = fit_lba::<f64>(&ct, &cfg).unwrap();
        for w in m.loglik_trace.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-10);
        }
    }

    #[test]
    fn budget_permutation_keeps_reconstruction((ct, k, seed) in table_strategy()) {
        let cfg = FitConfig { restarts: 1, seed, max_iterations: 50, ..FitConfig::new(k) };
        let m = fit_lba::<f64>(&ct, &cfg).unwrap();
        let perm: Vec<usize> = (0..k).rev().collect();
        let p = m.permute_budgets(&perm);
        let d = &lbann_core::lba::expected_budgets(&m).profiles - &lbann_core::lba::expected_budgets(&p).profiles;
        prop_assert!(d.iter().all(|v| v.abs() < 1e-12));
    }
}

#[test]
fn restarts_are_deterministic() {
    let ct = ContingencyTable::new(
        ndarray::array![[12u64, 3, 5], [1, 9, 2], [4, 4, 10], [7, 0, 1]],
        (0..4).map(|v| v.to_string()).collect(),
        (0..3).map(|v| v.to_string()).collect(),
    )
    .unwrap();
    let cfg = FitConfig { restarts: 6, seed: 11, ..FitConfig::new(2) };
    assert_eq!(fit_lba::<f64>(&ct, &cfg).unwrap(), fit_lba::<f64>(&ct, &cfg).unwrap());
}
