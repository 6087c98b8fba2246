//! Frozen exact values for the holdout average, computed independently in
//! rational arithmetic (every split enumerated, errors accumulated as
//! exact fractions). A third route, sharing no code with either the
//! recurrence or the enumeration oracle.

use ensemble_bounds::knn::{
    brute_force_average_holdout_error, gibbs_average_holdout_error, LabeledDataset,
};

fn dataset(positions: &[f64], labels: &str, n_holdout: usize) -> LabeledDataset {
    let points = positions
        .iter()
        .zip(labels.chars())
        .map(|(&x, label)| (vec![x], label.to_string()))
        .collect();
    LabeledDataset::new(points, n_holdout).unwrap()
}

struct Case {
    positions: &'static [f64],
    labels: &'static str,
    n_holdout: usize,
    k: usize,
    // numerator / denominator of the exact average.
    exact: (u32, u32),
}

const CASES: &[Case] = &[
    Case {
        positions: &[0.0, 1.0, 2.0],
        labels: "aba",
        n_holdout: 2,
        k: 1,
        exact: (2, 3),
    },
    Case {
        positions: &[0.0, 1.0, 2.0, 3.0, 4.0],
        labels: "aabaa",
        n_holdout: 2,
        k: 1,
        exact: (1, 2),
    },
    Case {
        positions: &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
        labels: "abbabab",
        n_holdout: 3,
        k: 3,
        exact: (71, 105),
    },
    Case {
        positions: &[0.0, 2.0, 3.0, 7.0, 8.0, 9.0, 10.0, 15.0],
        labels: "aabbabba",
        n_holdout: 4,
        k: 3,
        exact: (177, 280),
    },
    Case {
        positions: &[0.0, 1.0, 4.0, 5.0, 6.0, 9.0, 11.0, 12.0, 13.0],
        labels: "babababab",
        n_holdout: 4,
        k: 5,
        exact: (9, 14),
    },
];

#[test]
fn recurrence_matches_exact_rational_values() {
    for case in CASES {
        let data = dataset(case.positions, case.labels, case.n_holdout);
        let expected = case.exact.0 as f64 / case.exact.1 as f64;
        let dp = gibbs_average_holdout_error(&data, case.k).unwrap();
        assert!(
            (dp - expected).abs() <= 1e-12,
            "{} n={} k={}: dp={} expected {}/{}",
            case.labels,
            case.n_holdout,
            case.k,
            dp,
            case.exact.0,
            case.exact.1
        );
        let brute = brute_force_average_holdout_error(&data, case.k).unwrap();
        assert!((brute - expected).abs() <= 1e-12);
    }
}
