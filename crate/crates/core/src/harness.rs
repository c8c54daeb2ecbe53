//! Subtask registry, per-topic scoring with macroaveraging, and the
//! prevalence-drift topic generator.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{align, ConfusionMatrix, Distribution, LabeledItem, TopicSet};
use crate::error::{Error, Result};
use crate::label::{Label, Scale};
use crate::metrics;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Subtask {
    /// Three-point classification over a flat item set.
    A,
    /// Two-point classification per topic.
    B,
    /// Five-point ordinal classification per topic.
    C,
    /// Two-point quantification per topic.
    D,
    /// Five-point ordinal quantification per topic.
    E,
}

impl Subtask {
    pub const ALL: [Subtask; 5] = [Subtask::A, Subtask::B, Subtask::C, Subtask::D, Subtask::E];

    pub fn scale(self) -> Scale {
        match self {
            Subtask::A => Scale::Three,
            Subtask::B | Subtask::D => Scale::Two,
            Subtask::C | Subtask::E => Scale::Five,
        }
    }

    pub fn is_topical(self) -> bool {
        self != Subtask::A
    }

    pub fn is_quantification(self) -> bool {
        matches!(self, Subtask::D | Subtask::E)
    }

    pub fn official_measure(self) -> Measure {
        match self {
            Subtask::A => Measure::F1Pn,
            Subtask::B => Measure::RhoPn,
            Subtask::C => Measure::MaeMacro,
            Subtask::D => Measure::Kld,
            Subtask::E => Measure::Emd,
        }
    }

    /// Official measure first, then the secondary ones in report order.
    pub fn measures(self) -> &'static [Measure] {
        match self {
            Subtask::A => &[Measure::F1Pn, Measure::RhoPn, Measure::Accuracy],
            Subtask::B => &[Measure::RhoPn, Measure::F1Pn, Measure::Accuracy],
            Subtask::C => &[Measure::MaeMacro, Measure::MaeMicro],
            Subtask::D => &[Measure::Kld, Measure::Ae, Measure::Rae],
            Subtask::E => &[Measure::Emd],
        }
    }
}

impl fmt::Display for Subtask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Subtask::A => "A",
            Subtask::B => "B",
            Subtask::C => "C",
            Subtask::D => "D",
            Subtask::E => "E",
        };
        f.write_str(s)
    }
}

impl FromStr for Subtask {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(Subtask::A),
            "B" => Ok(Subtask::B),
            "C" => Ok(Subtask::C),
            "D" => Ok(Subtask::D),
            "E" => Ok(Subtask::E),
            _ => Err(format!("unknown subtask {s:?}, expected one of a-e")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Measure {
    #[serde(rename = "F1_PN")]
    F1Pn,
    #[serde(rename = "rho_PN")]
    RhoPn,
    #[serde(rename = "Acc")]
    Accuracy,
    #[serde(rename = "MAE_M")]
    MaeMacro,
    #[serde(rename = "MAE_mu")]
    MaeMicro,
    #[serde(rename = "KLD")]
    Kld,
    #[serde(rename = "AE")]
    Ae,
    #[serde(rename = "RAE")]
    Rae,
    #[serde(rename = "EMD")]
    Emd,
}

impl Measure {
    pub fn name(self) -> &'static str {
        match self {
            Measure::F1Pn => "F1_PN",
            Measure::RhoPn => "rho_PN",
            Measure::Accuracy => "Acc",
            Measure::MaeMacro => "MAE_M",
            Measure::MaeMicro => "MAE_mu",
            Measure::Kld => "KLD",
            Measure::Ae => "AE",
            Measure::Rae => "RAE",
            Measure::Emd => "EMD",
        }
    }

    pub fn from_name(name: &str) -> Option<Measure> {
        [
            Measure::F1Pn,
            Measure::RhoPn,
            Measure::Accuracy,
            Measure::MaeMacro,
            Measure::MaeMicro,
            Measure::Kld,
            Measure::Ae,
            Measure::Rae,
            Measure::Emd,
        ]
        .into_iter()
        .find(|m| m.name() == name)
    }

    pub fn higher_is_better(self) -> bool {
        matches!(self, Measure::F1Pn | Measure::RhoPn | Measure::Accuracy)
    }

    /// Value a perfect system obtains.
    pub fn ideal(self) -> f64 {
        if self.higher_is_better() {
            1.0
        } else {
            0.0
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Gold standard for one subtask.
#[derive(Debug, Clone, PartialEq)]
pub enum GoldData {
    /// Subtask A: items without topics.
    Flat { scale: Scale, items: Vec<LabeledItem> },
    /// Subtasks B-E.
    Topics(Vec<TopicSet>),
}

impl GoldData {
    pub fn n_items(&self) -> usize {
        match self {
            GoldData::Flat { items, .. } => items.len(),
            GoldData::Topics(t) => t.iter().map(TopicSet::len).sum(),
        }
    }

    /// Every gold item, topic by topic.
    pub fn items(&self) -> Vec<&LabeledItem> {
        match self {
            GoldData::Flat { items, .. } => items.iter().collect(),
            GoldData::Topics(t) => t.iter().flat_map(|t| t.items()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Predictions {
    /// Subtasks A-C: one label per item.
    Labels(Vec<LabeledItem>),
    /// Subtasks D-E: one distribution per topic.
    Distributions(BTreeMap<String, Distribution>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub subtask: Subtask,
    pub official_measure: Measure,
    pub official: f64,
    pub secondary: IndexMap<Measure, f64>,
    /// Empty for subtask A.
    pub per_topic: BTreeMap<String, IndexMap<Measure, f64>>,
    pub n_topics: usize,
    pub n_items: usize,
}

impl ScoreReport {
    pub fn get(&self, m: Measure) -> Option<f64> {
        if m == self.official_measure {
            Some(self.official)
        } else {
            self.secondary.get(&m).copied()
        }
    }

    /// Official measure followed by the secondary ones.
    pub fn measures(&self) -> impl Iterator<Item = (Measure, f64)> + '_ {
        std::iter::once((self.official_measure, self.official)).chain(self.secondary.iter().map(|(&m, &v)| (m, v)))
    }
}

fn shape_error(subtask: Subtask, reason: &str) -> Error {
    Error::SubtaskMismatch {
        subtask: subtask.to_string(),
        reason: reason.to_string(),
    }
}

fn check_scale(expected: Scale, found: Scale) -> Result<()> {
    if expected != found {
        return Err(Error::ScaleMismatch { expected, found });
    }
    Ok(())
}

fn classification_measures(subtask: Subtask, cm: &ConfusionMatrix) -> Result<IndexMap<Measure, f64>> {
    subtask
        .measures()
        .iter()
        .map(|&m| {
            let v = match m {
                Measure::F1Pn => metrics::f1_pn(cm)?,
                Measure::RhoPn => metrics::macro_recall_pn(cm)?,
                Measure::Accuracy => metrics::accuracy(cm)?,
                Measure::MaeMacro => metrics::mae_macro_cm(cm)?,
                Measure::MaeMicro => metrics::mae_micro_cm(cm)?,
                _ => unreachable!("{m} is not a classification measure"),
            };
            Ok((m, v))
        })
        .collect()
}

fn quantification_measures(
    subtask: Subtask,
    gold: &Distribution,
    pred: &Distribution,
    test_size: usize,
) -> Result<IndexMap<Measure, f64>> {
    subtask
        .measures()
        .iter()
        .map(|&m| {
            let v = match m {
                Measure::Kld => metrics::kld(gold, pred, test_size)?,
                Measure::Ae => metrics::ae(gold, pred)?,
                Measure::Rae => metrics::rae(gold, pred, test_size)?,
                Measure::Emd => metrics::emd(gold, pred)?,
                _ => unreachable!("{m} is not a quantification measure"),
            };
            Ok((m, v))
        })
        .collect()
}

fn index_topics(subtask: Subtask, topics: &[TopicSet]) -> Result<BTreeMap<&str, &TopicSet>> {
    if topics.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut by_id = BTreeMap::new();
    for t in topics {
        check_scale(subtask.scale(), t.scale())?;
        if by_id.insert(t.topic_id(), t).is_some() {
            return Err(Error::DuplicateTopic(t.topic_id().to_string()));
        }
    }
    Ok(by_id)
}

/// Averages per-topic measures over topics in ascending topic-id order.
fn macroaverage(
    subtask: Subtask,
    per_topic: BTreeMap<String, IndexMap<Measure, f64>>,
    n_items: usize,
) -> ScoreReport {
    let n = per_topic.len() as f64;
    let mut means: IndexMap<Measure, f64> = subtask.measures().iter().map(|&m| (m, 0.0)).collect();
    for values in per_topic.values() {
        for (m, acc) in means.iter_mut() {
            *acc += values[m];
        }
    }
    for v in means.values_mut() {
        *v /= n;
    }
    let official_measure = subtask.official_measure();
    let official = means.shift_remove(&official_measure).expect("official measure is listed");
    ScoreReport {
        subtask,
        official_measure,
        official,
        secondary: means,
        n_topics: per_topic.len(),
        per_topic,
        n_items,
    }
}

/// Scores `predictions` against `gold` with the subtask's official and
/// secondary measures. For subtasks B-E every measure is computed per
/// topic and the topic values are averaged with equal weight.
pub fn score(subtask: Subtask, gold: &GoldData, predictions: &Predictions) -> Result<ScoreReport> {
    let scale = subtask.scale();
    match (gold, predictions) {
        (GoldData::Flat { scale: s, items }, Predictions::Labels(pred)) if subtask == Subtask::A => {
            check_scale(scale, *s)?;
            let pairs = align(items, pred, scale)?;
            let cm = ConfusionMatrix::from_pairs(scale, pairs.into_iter().map(|(g, p)| (g.label, p)))?;
            let mut secondary = classification_measures(subtask, &cm)?;
            let official_measure = subtask.official_measure();
            let official = secondary.shift_remove(&official_measure).expect("listed");
            Ok(ScoreReport {
                subtask,
                official_measure,
                official,
                secondary,
                per_topic: BTreeMap::new(),
                n_topics: 0,
                n_items: items.len(),
            })
        }
        (GoldData::Topics(topics), Predictions::Labels(pred)) if matches!(subtask, Subtask::B | Subtask::C) => {
            let by_id = index_topics(subtask, topics)?;
            let flat: Vec<LabeledItem> = topics.iter().flat_map(|t| t.items().iter().cloned()).collect();
            let pairs = align(&flat, pred, scale)?;
            let mut matrices: BTreeMap<&str, ConfusionMatrix> =
                by_id.keys().map(|&t| (t, ConfusionMatrix::zeros(scale))).collect();
            for (g, p) in pairs {
                let topic = g.topic_id.as_deref().expect("topic items carry their topic");
                matrices.get_mut(topic).expect("indexed").add(p, g.label, 1)?;
            }
            let per_topic = matrices
                .into_iter()
                .map(|(t, cm)| Ok((t.to_string(), classification_measures(subtask, &cm)?)))
                .collect::<Result<_>>()?;
            Ok(macroaverage(subtask, per_topic, flat.len()))
        }
        (GoldData::Topics(topics), Predictions::Distributions(pred)) if subtask.is_quantification() => {
            let by_id = index_topics(subtask, topics)?;
            if let Some(t) = pred.keys().find(|t| !by_id.contains_key(t.as_str())) {
                return Err(Error::UnknownTopic(t.clone()));
            }
            let mut per_topic = BTreeMap::new();
            for (&t, topic) in &by_id {
                let estimate = pred.get(t).ok_or_else(|| Error::MissingTopic(t.to_string()))?;
                check_scale(scale, estimate.scale())?;
                let truth = topic.prevalence();
                per_topic.insert(
                    t.to_string(),
                    quantification_measures(subtask, &truth, estimate, topic.len())?,
                );
            }
            Ok(macroaverage(subtask, per_topic, gold.n_items()))
        }
        (GoldData::Flat { .. }, _) => Err(shape_error(subtask, "gold must be grouped by topic")),
        (GoldData::Topics(_), _) if subtask == Subtask::A => Err(shape_error(subtask, "gold must not have topics")),
        (_, Predictions::Labels(_)) => Err(shape_error(subtask, "expected one distribution per topic")),
        (_, Predictions::Distributions(_)) => Err(shape_error(subtask, "expected one label per item")),
    }
}

/// Predictions that reproduce the gold exactly: the gold labels for A-C,
/// the gold prevalences for D-E.
pub fn oracle_predictions(subtask: Subtask, gold: &GoldData) -> Predictions {
    match gold {
        GoldData::Topics(topics) if subtask.is_quantification() => Predictions::Distributions(
            topics
                .iter()
                .map(|t| (t.topic_id().to_string(), t.prevalence()))
                .collect(),
        ),
        _ => Predictions::Labels(gold.items().into_iter().cloned().collect()),
    }
}

/// Settings for synthesizing drifted copies of a topic.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftSpec {
    pub source: TopicSet,
    /// Fraction of each class's items to drop, in `[0, 1)`.
    pub removals: BTreeMap<Label, f64>,
    pub seed: u64,
    pub variants: usize,
}

/// Number of items of a class with `count` members that a removal
/// fraction drops; halves round away from zero.
pub fn removal_count(fraction: f64, count: usize) -> usize {
    (fraction * count as f64).round() as usize
}

/// Topic id given to the `index`-th (1-based) drifted copy of `source`.
pub fn variant_topic_id(source: &str, index: usize) -> String {
    format!("{source}#{index}")
}

/// Builds `variants` copies of the source topic, each with a seeded
/// random subset of every class removed. Retained items keep their source
/// order; each copy is renamed with [`variant_topic_id`].
///
/// All variants draw from one ChaCha8 stream seeded with `seed`, so the
/// output is a pure function of the spec.
pub fn generate_drift(spec: &DriftSpec) -> Result<Vec<TopicSet>> {
    let scale = spec.source.scale();
    if spec.variants == 0 {
        return Err(Error::InvalidDrift("variant count must be positive".into()));
    }
    for (&label, &frac) in &spec.removals {
        scale.check(label)?;
        if !(0.0..1.0).contains(&frac) {
            return Err(Error::InvalidDrift(format!(
                "removal fraction {frac} for class {} is outside [0, 1)",
                scale.label_name(label)
            )));
        }
    }

    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); scale.points()];
    for (i, item) in spec.source.items().iter().enumerate() {
        by_class[scale.check(item.label)?].push(i);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.variants);
    for v in 1..=spec.variants {
        let mut removed: HashSet<usize> = HashSet::new();
        for (class, members) in scale.classes().iter().zip(&by_class) {
            let frac = spec.removals.get(class).copied().unwrap_or(0.0);
            let k = removal_count(frac, members.len());
            if k > 0 {
                removed.extend(sample(&mut rng, members.len(), k).into_iter().map(|j| members[j]));
            }
        }
        let topic_id = variant_topic_id(spec.source.topic_id(), v);
        let items: Vec<LabeledItem> = spec
            .source
            .items()
            .iter()
            .enumerate()
            .filter(|(i, _)| !removed.contains(i))
            .map(|(_, item)| LabeledItem {
                topic_id: Some(topic_id.clone()),
                ..item.clone()
            })
            .collect();
        if items.is_empty() {
            return Err(Error::AllItemsRemoved(spec.source.topic_id().to_string()));
        }
        out.push(TopicSet::new(topic_id, scale, items)?);
    }
    Ok(out)
}

/// Prevalences a drift spec should produce, from class counts alone.
pub fn drift_target(spec: &DriftSpec) -> Result<Distribution> {
    let scale = spec.source.scale();
    let counts = crate::dataset::class_counts(spec.source.items(), scale)?;
    let kept: Vec<usize> = scale
        .classes()
        .iter()
        .zip(&counts)
        .map(|(c, &n)| n - removal_count(spec.removals.get(c).copied().unwrap_or(0.0), n))
        .collect();
    let total: usize = kept.iter().sum();
    if total == 0 {
        return Err(Error::AllItemsRemoved(spec.source.topic_id().to_string()));
    }
    Ok(Distribution::new_unchecked(
        scale,
        kept.iter().map(|&n| n as f64 / total as f64).collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const P: Label = Label::POSITIVE;
    const N: Label = Label::NEGATIVE;

    fn topic(id: &str, scale: Scale, labels: &[Label]) -> TopicSet {
        let items = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| LabeledItem::with_topic(format!("{id}-{i}"), id, l))
            .collect();
        TopicSet::new(id, scale, items).unwrap()
    }

    fn two(neg: f64, pos: f64) -> Distribution {
        Distribution::new(Scale::Two, vec![neg, pos]).unwrap()
    }

    #[test]
    fn quantification_macroaverages_topics() {
        let gold = GoldData::Topics(vec![
            topic("x", Scale::Two, &[P, P, P, N]),
            topic("y", Scale::Two, &[P, N]),
        ]);
        let pred = Predictions::Distributions(
            [("x".to_string(), two(0.5, 0.5)), ("y".to_string(), two(0.9, 0.1))].into(),
        );
        let r = score(Subtask::D, &gold, &pred).unwrap();
        let kx = metrics::kld(&two(0.25, 0.75), &two(0.5, 0.5), 4).unwrap();
        let ky = metrics::kld(&two(0.5, 0.5), &two(0.9, 0.1), 2).unwrap();
        assert_abs_diff_eq!(r.official, (kx + ky) / 2.0, epsilon = 1e-15);
        assert_eq!(r.per_topic["x"][&Measure::Kld], kx);
        assert_eq!(r.n_topics, 2);
        assert_eq!(r.n_items, 6);
        assert_eq!(r.secondary.keys().copied().collect::<Vec<_>>(), [Measure::Ae, Measure::Rae]);
    }

    #[test]
    fn oracle_predictions_reach_ideal_values() {
        let five = |v: &[i8]| v.iter().map(|&x| Label::new(x, Scale::Five).unwrap()).collect::<Vec<_>>();
        let gold_e = GoldData::Topics(vec![
            topic("a", Scale::Five, &five(&[2, 1, 0, 0, -2])),
            topic("b", Scale::Five, &five(&[-1, -1])),
        ]);
        let r = score(Subtask::E, &gold_e, &oracle_predictions(Subtask::E, &gold_e)).unwrap();
        assert_eq!(r.official, 0.0);
        let r = score(Subtask::C, &gold_e, &oracle_predictions(Subtask::C, &gold_e)).unwrap();
        assert_eq!(r.official, 0.0);
        assert_eq!(r.secondary[&Measure::MaeMicro], 0.0);
    }

    #[test]
    fn coverage_and_shape_errors() {
        let gold = GoldData::Topics(vec![topic("x", Scale::Two, &[P, N]), topic("y", Scale::Two, &[P])]);
        let missing = Predictions::Distributions([("x".to_string(), two(0.5, 0.5))].into());
        assert!(matches!(score(Subtask::D, &gold, &missing), Err(Error::MissingTopic(t)) if t == "y"));

        let unknown = Predictions::Distributions(
            [
                ("x".to_string(), two(0.5, 0.5)),
                ("y".to_string(), two(0.5, 0.5)),
                ("z".to_string(), two(0.5, 0.5)),
            ]
            .into(),
        );
        assert!(matches!(score(Subtask::D, &gold, &unknown), Err(Error::UnknownTopic(_))));

        let wrong_scale = Predictions::Distributions(
            [
                ("x".to_string(), Distribution::uniform(Scale::Five)),
                ("y".to_string(), two(0.5, 0.5)),
            ]
            .into(),
        );
        assert!(matches!(score(Subtask::D, &gold, &wrong_scale), Err(Error::ScaleMismatch { .. })));

        assert!(matches!(
            score(Subtask::B, &gold, &missing),
            Err(Error::SubtaskMismatch { .. })
        ));
        assert!(matches!(
            score(Subtask::C, &gold, &oracle_predictions(Subtask::C, &gold)),
            Err(Error::ScaleMismatch { .. })
        ));

        let dup = GoldData::Topics(vec![topic("x", Scale::Two, &[P]), topic("x", Scale::Two, &[N])]);
        assert!(matches!(
            score(Subtask::D, &dup, &oracle_predictions(Subtask::D, &dup)),
            Err(Error::DuplicateTopic(_))
        ));
    }

    fn ten_ten() -> TopicSet {
        let mut labels = vec![P; 10];
        labels.extend([N; 10]);
        topic("amy schumer", Scale::Two, &labels)
    }

    #[test]
    fn drift_halves_one_class() {
        let spec = DriftSpec {
            source: ten_ten(),
            removals: [(P, 0.5)].into(),
            seed: 7,
            variants: 3,
        };
        let out = generate_drift(&spec).unwrap();
        assert_eq!(out.len(), 3);
        for t in &out {
            assert_eq!(t.len(), 15);
            let d = t.prevalence();
            assert_eq!(d.get(P), Some(5.0 / 15.0));
            assert_eq!(d.get(N), Some(10.0 / 15.0));
        }
        assert_eq!(out[0].topic_id(), "amy schumer#1");
        assert_eq!(drift_target(&spec).unwrap().as_slice(), &[10.0 / 15.0, 5.0 / 15.0]);
        assert_eq!(generate_drift(&spec).unwrap(), out);
    }

    #[test]
    fn drift_without_removals_is_identity() {
        let spec = DriftSpec {
            source: ten_ten(),
            removals: BTreeMap::new(),
            seed: 1,
            variants: 1,
        };
        let out = generate_drift(&spec).unwrap();
        let ids: Vec<_> = out[0].items().iter().map(|i| (&i.item_id, i.label)).collect();
        let src: Vec<_> = spec.source.items().iter().map(|i| (&i.item_id, i.label)).collect();
        assert_eq!(ids, src);
    }

    #[test]
    fn drift_errors() {
        let mut spec = DriftSpec {
            source: topic("t", Scale::Two, &[P]),
            removals: [(P, 0.9)].into(),
            seed: 1,
            variants: 1,
        };
        assert!(matches!(generate_drift(&spec), Err(Error::AllItemsRemoved(_))));
        spec.removals = [(P, 1.0)].into();
        assert!(matches!(generate_drift(&spec), Err(Error::InvalidDrift(_))));
        spec.removals = [(Label::NEUTRAL, 0.5)].into();
        assert!(matches!(generate_drift(&spec), Err(Error::OffScaleLabel { .. })));
        spec.removals.clear();
        spec.variants = 0;
        assert!(matches!(generate_drift(&spec), Err(Error::InvalidDrift(_))));
    }

    #[test]
    fn removal_rounds_half_away_from_zero() {
        assert_eq!(removal_count(0.5, 5), 3);
        assert_eq!(removal_count(0.25, 10), 3);
        assert_eq!(removal_count(0.0, 10), 0);
    }
}
