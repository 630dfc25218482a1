mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use solvency_core::featsel::{
    discretize, greedy_search, greedy_stepwise, symmetric_uncertainty, CfsEvaluator,
};

fn column(r: &mut impl Rng, n: usize, levels: usize) -> Vec<usize> {
    (0..n).map(|_| r.gen_range(0..levels)).collect()
}

proptest! {
    #[test]
    fn su_symmetric_and_bounded(seed in any::<u64>(), n in 1usize..60) {
        let mut r = rng(seed);
        let x = column(&mut r, n, 5);
        let y = column(&mut r, n, 4);
        let a = symmetric_uncertainty(&x, &y);
        let b = symmetric_uncertainty(&y, &x);
        prop_assert!((a - b).abs() <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&a));
    }
}

#[test]
fn su_matches_contingency_table() {
    let mut r = rng(31);
    for _ in 0..500 {
        let n = r.gen_range(2..80);
        let x = column(&mut r, n, 6);
        let y = column(&mut r, n, 4);
        let got = symmetric_uncertainty(&x, &y);
        let want = su_oracle(&x, &y).clamp(0.0, 1.0);
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
    }
}

#[test]
fn greedy_merits_increase_and_never_beat_exhaustive() {
    let mut r = rng(41);
    for case in 0..150 {
        let k = r.gen_range(2..=4);
        let d = random_dataset(&mut r, 60, 5, k);
        let view = discretize(&d, 10).unwrap();
        let eval = CfsEvaluator::new(&view, d.labels());
        let sel = greedy_search(&eval);
        assert!(sel.merits.windows(2).all(|w| w[1] > w[0]), "case {case}");
        for (i, m) in sel.merits.iter().enumerate() {
            let want = merit_oracle(&sel.attributes[..=i], &view.bins, d.labels());
            assert!((m - want).abs() < 1e-9, "case {case}");
        }
        let best = exhaustive_best_merit(&view.bins, d.labels());
        assert!(
            sel.merit() <= best + 1e-9,
            "case {case}: {} > {best}",
            sel.merit()
        );
    }
}

/// Attribute 0 determines the class, attribute 1 is an exact copy of it and
/// attribute 2 is noise.
#[test]
fn redundant_copy_is_not_selected() {
    let mut r = rng(3);
    let n = 200;
    let labels: Vec<usize> = (0..n).map(|_| r.gen_range(0..3)).collect();
    let rows: Vec<Vec<f64>> = labels
        .iter()
        .map(|&l| {
            let v = l as f64 * 10.0 + r.gen::<f64>();
            vec![v, v, r.gen::<f64>()]
        })
        .collect();
    let d = generic_dataset(rows, labels, 3);
    let sel = greedy_stepwise(&d, 10).unwrap();
    assert_eq!(sel.attributes, vec![0]);
}

#[test]
fn single_determining_attribute_is_found() {
    let mut r = rng(8);
    let n = 150;
    let labels: Vec<usize> = (0..n).map(|_| r.gen_range(0..2)).collect();
    let rows: Vec<Vec<f64>> = labels
        .iter()
        .map(|&l| {
            vec![
                r.gen::<f64>(),
                r.gen::<f64>(),
                l as f64 + r.gen::<f64>() * 0.1,
                r.gen::<f64>(),
            ]
        })
        .collect();
    let d = generic_dataset(rows, labels, 2);
    let sel = greedy_stepwise(&d, 10).unwrap();
    assert_eq!(sel.attributes[0], 2);
    let view = discretize(&d, 10).unwrap();
    let eval = CfsEvaluator::new(&view, d.labels());
    assert!(eval.class_correlation(2) > 0.2);
    assert!((0..4)
        .filter(|&a| a != 2)
        .all(|a| eval.class_correlation(a) < eval.class_correlation(2)));
}

#[test]
fn constant_attributes_yield_empty_selection() {
    let d = generic_dataset(vec![vec![1.0, 2.0]; 6], vec![0, 1, 0, 1, 0, 1], 2);
    assert!(greedy_stepwise(&d, 10).unwrap().attributes.is_empty());
}
