use genclu::stats::{cliffs_delta, expected_delta, iqr, median, scott_knott};
use proptest::prelude::*;

proptest! {
    #[test]
    fn delta_is_antisymmetric_and_bounded(a in prop::collection::vec(-10.0f64..10.0, 1..30),
                                          b in prop::collection::vec(-10.0f64..10.0, 1..30)) {
        let ab = cliffs_delta(&a, &b).unwrap();
        prop_assert!((-1.0..=1.0).contains(&ab));
        prop_assert_eq!(ab, -cliffs_delta(&b, &a).unwrap());
        prop_assert!(expected_delta(&a, &b).unwrap() >= 0.0);
    }

    #[test]
    fn ranks_are_dense_and_ordered(groups in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 1..15), 1..6)) {
        let named: Vec<(String, Vec<f64>)> = groups.into_iter().enumerate().map(|(i, v)| (format!("g{i}"), v)).collect();
        let r = scott_knott(&named, true).unwrap();
        prop_assert_eq!(r.groups.len(), named.len());
        prop_assert_eq!(r.groups[0].rank, 1);
        for w in r.groups.windows(2) {
            prop_assert!(w[1].rank == w[0].rank || w[1].rank == w[0].rank + 1);
            prop_assert!(w[1].median <= w[0].median);
        }
    }
}

#[test]
fn minimizing_reverses_the_order() {
    let g = |n: &str, v: &[f64]| (n.to_string(), v.to_vec());
    let groups = [
        g("fast", &[1.0, 1.1, 0.9, 1.0]),
        g("slow", &[9.0, 8.5, 9.5, 9.0]),
    ];
    assert_eq!(
        scott_knott(&groups, false).unwrap().rank_of("fast"),
        Some(1)
    );
    assert_eq!(scott_knott(&groups, true).unwrap().rank_of("slow"), Some(1));
}

#[test]
fn summary_statistics() {
    let xs = [0.5, 0.75, 1.0, 1.0, 0.25];
    assert_eq!(median(&xs).unwrap(), 0.75);
    assert_eq!(iqr(&xs).unwrap(), 0.5);
    assert!(median(&[]).is_err());
}
