//! Labeled items, topics, confusion matrices and prevalence vectors.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::{Label, Scale};

/// Tolerance on the sum of an ingested prevalence vector.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledItem {
    pub item_id: String,
    pub topic_id: Option<String>,
    pub label: Label,
}

impl LabeledItem {
    pub fn new(item_id: impl Into<String>, label: Label) -> Self {
        LabeledItem {
            item_id: item_id.into(),
            topic_id: None,
            label,
        }
    }

    pub fn with_topic(item_id: impl Into<String>, topic_id: impl Into<String>, label: Label) -> Self {
        LabeledItem {
            item_id: item_id.into(),
            topic_id: Some(topic_id.into()),
            label,
        }
    }

    /// Identity of the item: `(topic_id, item_id)`.
    pub fn key(&self) -> ItemKey<'_> {
        ItemKey {
            topic_id: self.topic_id.as_deref(),
            item_id: &self.item_id,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ItemKey<'a> {
    pub topic_id: Option<&'a str>,
    pub item_id: &'a str,
}

impl fmt::Display for ItemKey<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.topic_id {
            Some(t) => write!(f, "{:?} in topic {:?}", self.item_id, t),
            None => write!(f, "{:?}", self.item_id),
        }
    }
}

/// The gold (or predicted) items of one topic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicSet {
    topic_id: String,
    scale: Scale,
    items: Vec<LabeledItem>,
}

impl TopicSet {
    pub fn new(topic_id: impl Into<String>, scale: Scale, items: Vec<LabeledItem>) -> Result<Self> {
        let topic_id = topic_id.into();
        if items.is_empty() {
            return Err(Error::EmptyTopic(topic_id));
        }
        for item in &items {
            if item.topic_id.as_deref() != Some(topic_id.as_str()) {
                return Err(Error::UnknownItem(item.key().to_string()));
            }
            scale.check(item.label)?;
        }
        Ok(TopicSet {
            topic_id,
            scale,
            items,
        })
    }

    pub fn topic_id(&self) -> &str {
        &self.topic_id
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn items(&self) -> &[LabeledItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn prevalence(&self) -> Distribution {
        prevalence(&self.items, self.scale).expect("topic sets are nonempty and on scale")
    }
}

/// Pairs every gold item with its prediction, in gold order.
///
/// Items are matched on their `(topic_id, item_id)` key by exact string
/// comparison. Each gold key must be predicted exactly once, and every
/// prediction must refer to a gold key.
pub fn align<'a>(
    gold: &'a [LabeledItem],
    pred: &[LabeledItem],
    scale: Scale,
) -> Result<Vec<(&'a LabeledItem, Label)>> {
    if gold.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut gold_index: HashMap<ItemKey<'_>, usize> = HashMap::with_capacity(gold.len());
    for (i, item) in gold.iter().enumerate() {
        scale.check(item.label)?;
        match gold_index.entry(item.key()) {
            Entry::Occupied(_) => return Err(Error::DuplicateItem(item.key().to_string())),
            Entry::Vacant(v) => {
                v.insert(i);
            }
        }
    }

    let mut predicted: Vec<Option<Label>> = vec![None; gold.len()];
    for item in pred {
        scale.check(item.label)?;
        let Some(&i) = gold_index.get(&item.key()) else {
            return Err(Error::UnknownItem(item.key().to_string()));
        };
        if predicted[i].replace(item.label).is_some() {
            return Err(Error::DuplicateItem(item.key().to_string()));
        }
    }

    gold.iter()
        .zip(predicted)
        .map(|(g, p)| match p {
            Some(p) => Ok((g, p)),
            None => Err(Error::MissingPrediction(g.key().to_string())),
        })
        .collect()
}

/// Counts indexed by (predicted class, gold class).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    scale: Scale,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn zeros(scale: Scale) -> Self {
        let n = scale.points();
        ConfusionMatrix {
            scale,
            counts: vec![0; n * n],
        }
    }

    /// Builds a matrix from (gold, predicted) label pairs.
    pub fn from_pairs(scale: Scale, pairs: impl IntoIterator<Item = (Label, Label)>) -> Result<Self> {
        let mut cm = ConfusionMatrix::zeros(scale);
        for (gold, pred) in pairs {
            cm.add(pred, gold, 1)?;
        }
        Ok(cm)
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn add(&mut self, pred: Label, gold: Label, n: u64) -> Result<()> {
        let p = self.scale.check(pred)?;
        let g = self.scale.check(gold)?;
        let k = self.scale.points();
        self.counts[p * k + g] += n;
        Ok(())
    }

    pub fn get(&self, pred: Label, gold: Label) -> u64 {
        match (self.scale.index_of(pred), self.scale.index_of(gold)) {
            (Some(p), Some(g)) => self.at(p, g),
            _ => 0,
        }
    }

    /// Cell by class index.
    pub fn at(&self, pred: usize, gold: usize) -> u64 {
        self.counts[pred * self.scale.points() + gold]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Number of items predicted as the class at `pred`.
    pub fn row_sum(&self, pred: usize) -> u64 {
        let k = self.scale.points();
        self.counts[pred * k..(pred + 1) * k].iter().sum()
    }

    /// Number of items whose gold class is the class at `gold`.
    pub fn col_sum(&self, gold: usize) -> u64 {
        (0..self.scale.points()).map(|p| self.at(p, gold)).sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.scale.points()).map(|i| self.at(i, i)).sum()
    }
}

pub fn build_confusion(gold: &[LabeledItem], pred: &[LabeledItem], scale: Scale) -> Result<ConfusionMatrix> {
    let pairs = align(gold, pred, scale)?;
    ConfusionMatrix::from_pairs(scale, pairs.into_iter().map(|(g, p)| (g.label, p)))
}

/// Class prevalences over a scale, stored in ascending class order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    scale: Scale,
    prevalences: Vec<f64>,
}

impl Distribution {
    /// Validates and wraps a prevalence vector given in ascending class
    /// order. Entries must lie in `[0, 1]` and sum to 1 within
    /// [`DISTRIBUTION_TOLERANCE`]; nothing is renormalized.
    pub fn new(scale: Scale, prevalences: Vec<f64>) -> Result<Self> {
        if prevalences.len() != scale.points() {
            return Err(Error::InvalidDistribution(format!(
                "{} entries for a {scale} scale",
                prevalences.len()
            )));
        }
        if let Some(v) = prevalences.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidDistribution(format!("prevalence {v} outside [0, 1]")));
        }
        let sum: f64 = prevalences.iter().sum();
        if (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE {
            return Err(Error::InvalidDistribution(format!("prevalences sum to {sum}")));
        }
        Ok(Distribution { scale, prevalences })
    }

    pub(crate) fn new_unchecked(scale: Scale, prevalences: Vec<f64>) -> Self {
        debug_assert_eq!(prevalences.len(), scale.points());
        Distribution { scale, prevalences }
    }

    /// All mass on a single class.
    pub fn degenerate(scale: Scale, label: Label) -> Result<Self> {
        let i = scale.check(label)?;
        let mut v = vec![0.0; scale.points()];
        v[i] = 1.0;
        Ok(Distribution::new_unchecked(scale, v))
    }

    pub fn uniform(scale: Scale) -> Self {
        let n = scale.points();
        Distribution::new_unchecked(scale, vec![1.0 / n as f64; n])
    }

    pub fn scale(&self) -> Scale {
        self.scale
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.prevalences
    }

    pub fn get(&self, label: Label) -> Option<f64> {
        self.scale.index_of(label).map(|i| self.prevalences[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, f64)> + '_ {
        self.scale.classes().iter().copied().zip(self.prevalences.iter().copied())
    }

    pub(crate) fn same_scale(&self, other: &Distribution) -> Result<()> {
        if self.scale != other.scale {
            return Err(Error::ScaleMismatch {
                expected: self.scale,
                found: other.scale,
            });
        }
        Ok(())
    }
}

/// Relative frequency of each class among `items`.
pub fn prevalence(items: &[LabeledItem], scale: Scale) -> Result<Distribution> {
    if items.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let counts = class_counts(items, scale)?;
    let n = items.len() as f64;
    Ok(Distribution::new_unchecked(
        scale,
        counts.into_iter().map(|c| c as f64 / n).collect(),
    ))
}

pub fn class_counts(items: &[LabeledItem], scale: Scale) -> Result<Vec<usize>> {
    let mut counts = vec![0usize; scale.points()];
    for item in items {
        counts[scale.check(item.label)?] += 1;
    }
    Ok(counts)
}
