//! Reference systems that need no learning.

use crate::dataset::{Distribution, LabeledItem};
use crate::error::{Error, Result};
use crate::harness::{GoldData, Predictions, Subtask};
use crate::label::Label;

#[derive(Debug, Clone, PartialEq)]
pub enum Policy {
    /// Same label for every item (subtasks A-C).
    ConstantClass(Label),
    /// Training-set prevalences for every topic (subtasks D-E). The caller
    /// assembles the training distribution.
    TrainPrevalence(Distribution),
    /// All mass on one class for every topic (subtasks D-E).
    MajorityPrevalence(Label),
}

impl Policy {
    fn name(&self) -> &'static str {
        match self {
            Policy::ConstantClass(_) => "constant-class",
            Policy::TrainPrevalence(_) => "train-prevalence",
            Policy::MajorityPrevalence(_) => "majority-prevalence",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineSpec {
    subtask: Subtask,
    policy: Policy,
}

impl BaselineSpec {
    pub fn new(subtask: Subtask, policy: Policy) -> Result<Self> {
        let scale = subtask.scale();
        let fits = match &policy {
            Policy::ConstantClass(l) => !subtask.is_quantification() && scale.contains(*l),
            Policy::TrainPrevalence(d) => subtask.is_quantification() && d.scale() == scale,
            Policy::MajorityPrevalence(l) => subtask.is_quantification() && scale.contains(*l),
        };
        if !fits {
            return Err(Error::PolicySubtaskMismatch {
                policy: policy.name().to_string(),
                subtask: subtask.to_string(),
            });
        }
        Ok(BaselineSpec { subtask, policy })
    }

    pub fn subtask(&self) -> Subtask {
        self.subtask
    }

    pub fn policy(&self) -> &Policy {
        &self.policy
    }
}

/// Produces the baseline's predictions for the items (A-C) or topics
/// (D-E) of `gold`. Gold labels are never read.
pub fn run_baseline(spec: &BaselineSpec, gold: &GoldData) -> Result<Predictions> {
    let scale = spec.subtask.scale();
    match &spec.policy {
        Policy::ConstantClass(label) => Ok(Predictions::Labels(
            gold.items()
                .into_iter()
                .map(|g| LabeledItem {
                    item_id: g.item_id.clone(),
                    topic_id: g.topic_id.clone(),
                    label: *label,
                })
                .collect(),
        )),
        Policy::TrainPrevalence(d) => per_topic(spec.subtask, gold, || d.clone()),
        Policy::MajorityPrevalence(label) => {
            let d = Distribution::degenerate(scale, *label)?;
            per_topic(spec.subtask, gold, || d.clone())
        }
    }
}

fn per_topic(subtask: Subtask, gold: &GoldData, f: impl Fn() -> Distribution) -> Result<Predictions> {
    match gold {
        GoldData::Topics(topics) => Ok(Predictions::Distributions(
            topics.iter().map(|t| (t.topic_id().to_string(), f())).collect(),
        )),
        GoldData::Flat { .. } => Err(Error::SubtaskMismatch {
            subtask: subtask.to_string(),
            reason: "gold must be grouped by topic".into(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::TopicSet;
    use crate::harness::{score, Measure};
    use crate::label::Scale;
    use proptest::prelude::*;

    const P: Label = Label::POSITIVE;
    const N: Label = Label::NEGATIVE;

    fn topic(id: &str, scale: Scale, labels: &[Label]) -> TopicSet {
        let items = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| LabeledItem::with_topic(i.to_string(), id, l))
            .collect();
        TopicSet::new(id, scale, items).unwrap()
    }

    #[test]
    fn policy_subtask_consistency() {
        assert!(BaselineSpec::new(Subtask::A, Policy::ConstantClass(Label::NEUTRAL)).is_ok());
        assert!(BaselineSpec::new(Subtask::B, Policy::ConstantClass(Label::NEUTRAL)).is_err());
        assert!(BaselineSpec::new(Subtask::D, Policy::ConstantClass(P)).is_err());
        assert!(BaselineSpec::new(Subtask::C, Policy::MajorityPrevalence(P)).is_err());
        assert!(BaselineSpec::new(Subtask::E, Policy::TrainPrevalence(Distribution::uniform(Scale::Two))).is_err());
        assert!(BaselineSpec::new(Subtask::E, Policy::TrainPrevalence(Distribution::uniform(Scale::Five))).is_ok());
        assert!(matches!(
            BaselineSpec::new(Subtask::D, Policy::MajorityPrevalence(Label::HIGHLY_POSITIVE)),
            Err(Error::PolicySubtaskMismatch { .. })
        ));
    }

    #[test]
    fn neutral_baseline_on_all_neutral_gold() {
        let gold = GoldData::Topics(vec![topic("t", Scale::Five, &[Label::NEUTRAL; 4])]);
        let spec = BaselineSpec::new(Subtask::C, Policy::ConstantClass(Label::NEUTRAL)).unwrap();
        let r = score(Subtask::C, &gold, &run_baseline(&spec, &gold).unwrap()).unwrap();
        assert_eq!(r.official, 0.0);
    }

    #[test]
    fn majority_prevalence_on_balanced_topic() {
        let gold = GoldData::Topics(vec![topic("t", Scale::Two, &[P, N, P, N])]);
        let spec = BaselineSpec::new(Subtask::D, Policy::MajorityPrevalence(P)).unwrap();
        let r = score(Subtask::D, &gold, &run_baseline(&spec, &gold).unwrap()).unwrap();
        // eps = 1/8: smoothed truth (0.5, 0.5), smoothed estimate (0.1, 0.9)
        let expected = 0.5 * (0.5f64 / 0.1).ln() + 0.5 * (0.5f64 / 0.9).ln();
        assert!(r.official > 0.0);
        assert!((r.official - expected).abs() < 1e-12);
    }

    #[test]
    fn positive_baseline_on_single_class_topic() {
        // Only positive gold: rho_P = 1, rho_N = 0/0 = 0 by convention.
        let gold = GoldData::Topics(vec![topic("t", Scale::Two, &[P, P])]);
        let spec = BaselineSpec::new(Subtask::B, Policy::ConstantClass(P)).unwrap();
        let r = score(Subtask::B, &gold, &run_baseline(&spec, &gold).unwrap()).unwrap();
        assert_eq!(r.official, 0.5);
        // Only negative gold: both recalls are 0.
        let gold = GoldData::Topics(vec![topic("t", Scale::Two, &[N, N])]);
        let r = score(Subtask::B, &gold, &run_baseline(&spec, &gold).unwrap()).unwrap();
        assert_eq!(r.official, 0.0);
    }

    fn topic_counts() -> impl Strategy<Value = Vec<(usize, usize)>> {
        prop::collection::vec((1usize..30, 1usize..30), 1..8)
    }

    proptest! {
        #[test]
        fn constant_positive_scores_half_on_mixed_topics(counts in topic_counts()) {
            let topics = counts
                .iter()
                .enumerate()
                .map(|(i, &(p, n))| {
                    let mut labels = vec![P; p];
                    labels.extend(vec![N; n]);
                    topic(&format!("topic {i}"), Scale::Two, &labels)
                })
                .collect();
            let gold = GoldData::Topics(topics);
            let spec = BaselineSpec::new(Subtask::B, Policy::ConstantClass(P)).unwrap();
            let r = score(Subtask::B, &gold, &run_baseline(&spec, &gold).unwrap()).unwrap();
            prop_assert_eq!(r.official, 0.5);
            for v in r.per_topic.values() {
                prop_assert_eq!(v[&Measure::RhoPn], 0.5);
            }
        }

        #[test]
        fn neutral_is_best_constant_on_symmetric_gold(
            outer in 0usize..20, inner in 0usize..20, mid in 0usize..20,
        ) {
            prop_assume!(outer + inner + mid > 0);
            let mut labels = Vec::new();
            for (v, n) in [(-2, outer), (-1, inner), (0, mid), (1, inner), (2, outer)] {
                labels.extend(vec![Label::new(v, Scale::Five).unwrap(); n]);
            }
            let gold = GoldData::Topics(vec![topic("t", Scale::Five, &labels)]);
            let mae = |c: Label| {
                let spec = BaselineSpec::new(Subtask::C, Policy::ConstantClass(c)).unwrap();
                score(Subtask::C, &gold, &run_baseline(&spec, &gold).unwrap()).unwrap().official
            };
            let neutral = mae(Label::NEUTRAL);
            for &c in Scale::Five.classes() {
                prop_assert!(neutral <= mae(c) + 1e-12);
            }
        }
    }
}
