//! Measures for single-label classification over an ordered scale.
//!
//! A ratio whose denominator is zero is taken to be 0, so every measure
//! is total. This matters for per-topic scoring, where a topic may lack
//! some gold class altogether.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::dataset::{build_confusion, ConfusionMatrix, LabeledItem};
use crate::error::{Error, Result};
use crate::label::{Label, Scale};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionRecall {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassScores {
    pub per_class: IndexMap<Label, PrecisionRecall>,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn harmonic(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

fn class_score(cm: &ConfusionMatrix, i: usize) -> PrecisionRecall {
    let hit = cm.at(i, i);
    let precision = ratio(hit, cm.row_sum(i));
    let recall = ratio(hit, cm.col_sum(i));
    PrecisionRecall {
        precision,
        recall,
        f1: harmonic(precision, recall),
    }
}

pub fn class_scores(cm: &ConfusionMatrix) -> ClassScores {
    let per_class = cm
        .scale()
        .classes()
        .iter()
        .enumerate()
        .map(|(i, &c)| (c, class_score(cm, i)))
        .collect();
    ClassScores { per_class }
}

fn polar_scale(cm: &ConfusionMatrix) -> Result<Scale> {
    match cm.scale() {
        Scale::Five => Err(Error::ScaleMismatch {
            expected: Scale::Three,
            found: Scale::Five,
        }),
        s => Ok(s),
    }
}

/// Mean of the positive-class and negative-class F1. Neutral, when
/// present, only enters through the precision and recall denominators.
pub fn f1_pn(cm: &ConfusionMatrix) -> Result<f64> {
    let scale = polar_scale(cm)?;
    let pos = scale.check(Label::POSITIVE)?;
    let neg = scale.check(Label::NEGATIVE)?;
    Ok((class_score(cm, pos).f1 + class_score(cm, neg).f1) / 2.0)
}

/// Recall averaged uniformly over every class of the scale: positive and
/// negative on the two-point scale, all three classes on the three-point
/// scale.
pub fn macro_recall_pn(cm: &ConfusionMatrix) -> Result<f64> {
    let scale = polar_scale(cm)?;
    let k = scale.points();
    let sum: f64 = (0..k).map(|i| ratio(cm.at(i, i), cm.col_sum(i))).sum();
    Ok(sum / k as f64)
}

pub fn accuracy(cm: &ConfusionMatrix) -> Result<f64> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::EmptyDataset);
    }
    Ok(cm.trace() as f64 / total as f64)
}

/// Sum of |predicted - gold| over the items whose gold class is `gold`.
fn class_distance(cm: &ConfusionMatrix, gold: usize) -> u64 {
    let classes = cm.scale().classes();
    classes
        .iter()
        .enumerate()
        .map(|(p, &pc)| cm.at(p, gold) * u64::from(pc.distance(classes[gold])))
        .sum()
}

/// Mean absolute error over all items, computed from a confusion matrix.
pub fn mae_micro_cm(cm: &ConfusionMatrix) -> Result<f64> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::EmptyDataset);
    }
    let dist: u64 = (0..cm.scale().points()).map(|g| class_distance(cm, g)).sum();
    Ok(dist as f64 / total as f64)
}

/// Per-class mean absolute error averaged over the gold classes that have
/// at least one item. Classes absent from the gold are skipped, so the
/// divisor is the number of populated classes.
pub fn mae_macro_cm(cm: &ConfusionMatrix) -> Result<f64> {
    let mut sum = 0.0;
    let mut populated = 0usize;
    for g in 0..cm.scale().points() {
        let n = cm.col_sum(g);
        if n > 0 {
            sum += class_distance(cm, g) as f64 / n as f64;
            populated += 1;
        }
    }
    if populated == 0 {
        return Err(Error::EmptyDataset);
    }
    Ok(sum / populated as f64)
}

pub fn mae_micro(gold: &[LabeledItem], pred: &[LabeledItem], scale: Scale) -> Result<f64> {
    mae_micro_cm(&build_confusion(gold, pred, scale)?)
}

pub fn mae_macro(gold: &[LabeledItem], pred: &[LabeledItem], scale: Scale) -> Result<f64> {
    mae_macro_cm(&build_confusion(gold, pred, scale)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const P: Label = Label::POSITIVE;
    const U: Label = Label::NEUTRAL;
    const N: Label = Label::NEGATIVE;

    fn items(labels: &[Label]) -> Vec<LabeledItem> {
        labels
            .iter()
            .enumerate()
            .map(|(i, &l)| LabeledItem::new(i.to_string(), l))
            .collect()
    }

    fn five(v: &[i8]) -> Vec<LabeledItem> {
        items(&v.iter().map(|&x| Label::new(x, Scale::Five).unwrap()).collect::<Vec<_>>())
    }

    fn cm3(pairs: &[(Label, Label)]) -> ConfusionMatrix {
        ConfusionMatrix::from_pairs(Scale::Three, pairs.iter().copied()).unwrap()
    }

    fn table4_all_positive() -> ConfusionMatrix {
        let mut cm = ConfusionMatrix::zeros(Scale::Three);
        cm.add(P, P, 7059).unwrap();
        cm.add(P, U, 10342).unwrap();
        cm.add(P, N, 3231).unwrap();
        cm
    }

    #[test]
    fn f1_pn_examples() {
        assert_abs_diff_eq!(f1_pn(&table4_all_positive()).unwrap(), 0.255, epsilon = 5e-4);

        let perfect = cm3(&[(P, P), (U, U), (N, N)]);
        assert_eq!(f1_pn(&perfect).unwrap(), 1.0);

        // gold P,P,P,U,U,N vs pred P,P,N,U,N,N
        let cm = cm3(&[(P, P), (P, P), (P, N), (U, U), (U, N), (N, N)]);
        let s = class_scores(&cm);
        assert_abs_diff_eq!(s.per_class[&P].f1, 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(s.per_class[&N].f1, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(f1_pn(&cm).unwrap(), 0.65, epsilon = 1e-12);
        assert_abs_diff_eq!(accuracy(&cm).unwrap(), 4.0 / 6.0, epsilon = 1e-12);
    }

    #[test]
    fn macro_recall_examples() {
        assert_abs_diff_eq!(macro_recall_pn(&table4_all_positive()).unwrap(), 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(accuracy(&table4_all_positive()).unwrap(), 0.342, epsilon = 5e-4);

        let mut two = ConfusionMatrix::zeros(Scale::Two);
        two.add(P, P, 13).unwrap();
        two.add(P, N, 4).unwrap();
        assert_eq!(macro_recall_pn(&two).unwrap(), 0.5);

        let perfect = ConfusionMatrix::from_pairs(Scale::Two, [(P, P), (N, N), (N, N)]).unwrap();
        assert_eq!(macro_recall_pn(&perfect).unwrap(), 1.0);

        let perverse = ConfusionMatrix::from_pairs(Scale::Two, [(P, N), (N, P), (N, P)]).unwrap();
        assert_eq!(macro_recall_pn(&perverse).unwrap(), 0.0);
    }

    #[test]
    fn five_point_matrix_rejected_by_polar_measures() {
        let cm = ConfusionMatrix::zeros(Scale::Five);
        assert!(matches!(f1_pn(&cm), Err(Error::ScaleMismatch { .. })));
        assert!(matches!(macro_recall_pn(&cm), Err(Error::ScaleMismatch { .. })));
        assert!(matches!(accuracy(&cm), Err(Error::EmptyDataset)));
    }

    #[test]
    fn mae_examples() {
        let gold = five(&[2, 2, 0, -2]);
        let pred = five(&[1, 2, -1, 2]);
        assert_abs_diff_eq!(mae_micro(&gold, &pred, Scale::Five).unwrap(), 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(mae_macro(&gold, &pred, Scale::Five).unwrap(), 11.0 / 6.0, epsilon = 1e-12);

        assert_eq!(mae_micro(&gold, &gold, Scale::Five).unwrap(), 0.0);
        assert_eq!(mae_macro(&gold, &gold, Scale::Five).unwrap(), 0.0);

        let gold = five(&[2, 2, 2]);
        let neutral = five(&[0, 0, 0]);
        assert_eq!(mae_micro(&gold, &neutral, Scale::Five).unwrap(), 2.0);
        assert_eq!(mae_macro(&gold, &neutral, Scale::Five).unwrap(), 2.0);
    }

    #[test]
    fn mae_propagates_coverage_errors() {
        let gold = five(&[2, 0]);
        assert!(matches!(
            mae_micro(&gold, &gold[..1], Scale::Five),
            Err(Error::MissingPrediction(_))
        ));
    }

    #[test]
    fn f1_pn_ignores_neutral_diagonal() {
        // Move mass between UU and the off-diagonal neutral cells while
        // keeping every P and N row/column sum fixed.
        let mut a = ConfusionMatrix::zeros(Scale::Three);
        a.add(P, P, 5).unwrap();
        a.add(P, N, 2).unwrap();
        a.add(N, P, 1).unwrap();
        a.add(N, N, 4).unwrap();
        a.add(P, U, 3).unwrap();
        a.add(U, P, 3).unwrap();
        a.add(U, U, 1).unwrap();
        let mut b = a.clone();
        b.add(U, U, 17).unwrap();
        assert_eq!(f1_pn(&a).unwrap(), f1_pn(&b).unwrap());
    }

    fn pairs(scale: Scale) -> impl Strategy<Value = Vec<(Label, Label)>> {
        let c = prop::sample::select(scale.classes().to_vec());
        prop::collection::vec((c.clone(), c), 1..80)
    }

    proptest! {
        #[test]
        fn classification_measures_in_unit_interval(p in pairs(Scale::Three)) {
            let cm = ConfusionMatrix::from_pairs(Scale::Three, p).unwrap();
            for v in [f1_pn(&cm).unwrap(), macro_recall_pn(&cm).unwrap(), accuracy(&cm).unwrap()] {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }

        #[test]
        fn mae_within_scale_width(p in pairs(Scale::Five)) {
            let cm = ConfusionMatrix::from_pairs(Scale::Five, p).unwrap();
            prop_assert!((0.0..=4.0).contains(&mae_micro_cm(&cm).unwrap()));
            prop_assert!((0.0..=4.0).contains(&mae_macro_cm(&cm).unwrap()));
        }

        #[test]
        fn macro_recall_symmetric_under_polarity_swap(p in pairs(Scale::Two)) {
            let cm = ConfusionMatrix::from_pairs(Scale::Two, p.iter().copied()).unwrap();
            let swapped = ConfusionMatrix::from_pairs(
                Scale::Two,
                p.iter().map(|&(g, h)| (g.negate(), h.negate())),
            ).unwrap();
            let a = macro_recall_pn(&cm).unwrap();
            let b = macro_recall_pn(&swapped).unwrap();
            prop_assert!((a - b).abs() <= 1e-12);
        }

        #[test]
        fn perverse_two_point_classifier_scores_zero(gold in prop::collection::vec(prop::sample::select(vec![P, N]), 1..50)) {
            let cm = ConfusionMatrix::from_pairs(Scale::Two, gold.iter().map(|&g| (g, g.negate()))).unwrap();
            prop_assert_eq!(macro_recall_pn(&cm).unwrap(), 0.0);
        }

        #[test]
        fn balanced_gold_makes_macro_equal_micro(
            per_class in 1usize..8,
            preds in prop::collection::vec(-2i8..=2, 40),
        ) {
            let mut cm = ConfusionMatrix::zeros(Scale::Five);
            let mut k = 0;
            for &g in Scale::Five.classes() {
                for _ in 0..per_class {
                    let h = Label::new(preds[k % preds.len()], Scale::Five).unwrap();
                    cm.add(h, g, 1).unwrap();
                    k += 1;
                }
            }
            let micro = mae_micro_cm(&cm).unwrap();
            let macro_ = mae_macro_cm(&cm).unwrap();
            prop_assert!((micro - macro_).abs() <= 1e-12);
        }
    }
}
