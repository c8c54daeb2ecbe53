//! Tab-separated gold, prediction and vote files.
//!
//! One record per line, fields separated by a single TAB, lines starting
//! with `#` ignored. Topic ids may contain spaces, so TAB is the only
//! separator and fields are never trimmed.
//!
//! | file                    | fields                                          |
//! |-------------------------|-------------------------------------------------|
//! | A gold / predictions    | `item_id  label` (positive, neutral, negative)  |
//! | B gold / predictions    | `item_id  topic_id  label` (positive, negative) |
//! | C, E gold; C predictions| `item_id  topic_id  label` (-2 .. 2)            |
//! | D gold                  | as C, collapsed to two points (neutral dropped) |
//! | D predictions           | `topic_id  p_positive  p_negative`              |
//! | E predictions           | `topic_id  p(-2)  p(-1)  p(0)  p(1)  p(2)`      |
//! | votes                   | `item_id  v1  v2  v3  v4  v5`                   |
//!
//! Parsing collects one diagnostic per malformed line instead of stopping
//! at the first.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use indexmap::IndexMap;

use crate::consolidation::{Consolidated, VoteSet};
use crate::dataset::{Distribution, LabeledItem, TopicSet, DISTRIBUTION_TOLERANCE};
use crate::error::{Error, ParseError, ParseErrorKind, ParseErrors, Result};
use crate::harness::{GoldData, Predictions, Subtask};
use crate::label::{collapse_scale, Label, Scale};

struct Collector {
    errors: Vec<ParseError>,
}

impl Collector {
    fn new() -> Self {
        Collector { errors: Vec::new() }
    }

    fn push(&mut self, line: usize, kind: ParseErrorKind) {
        self.errors.push(ParseError { line, kind });
    }

    fn finish<T>(self, value: T) -> Result<T> {
        if self.errors.is_empty() {
            Ok(value)
        } else {
            Err(Error::Parse(ParseErrors {
                source: None,
                errors: self.errors,
            }))
        }
    }
}

/// Data lines with their 1-based numbers. `str::lines` accepts a missing
/// trailing newline and strips a CR before the LF.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i + 1, l.split('\t').collect()))
}

/// Checks the field count and that the first `nonempty` fields have text.
fn check_fields(fields: &[&str], expected: usize, nonempty: usize) -> std::result::Result<(), ParseErrorKind> {
    if fields.len() != expected {
        return Err(ParseErrorKind::BadFieldCount {
            expected,
            found: fields.len(),
        });
    }
    if let Some(i) = fields[..nonempty].iter().position(|f| f.is_empty()) {
        return Err(ParseErrorKind::EmptyField { field: i + 1 });
    }
    Ok(())
}

fn parse_label(scale: Scale, s: &str) -> std::result::Result<Label, ParseErrorKind> {
    scale.parse_label(s).ok_or_else(|| ParseErrorKind::BadLabel(s.to_string()))
}

/// Label field of a two-point gold file for quantification: either a
/// two-point word or a five-point integer, the latter collapsed.
fn parse_collapsible(s: &str) -> std::result::Result<Option<Label>, ParseErrorKind> {
    if let Some(l) = Scale::Two.parse_label(s) {
        return Ok(Some(l));
    }
    let five = parse_label(Scale::Five, s)?;
    Ok(collapse_scale(five, Scale::Two).expect("label is on the five-point scale"))
}

/// Items keyed by `(topic_id, item_id)`, or by `item_id` when `topical`
/// is false.
fn parse_items(
    text: &str,
    topical: bool,
    label: impl Fn(&str) -> std::result::Result<Option<Label>, ParseErrorKind>,
) -> Result<Vec<LabeledItem>> {
    let mut diag = Collector::new();
    let mut seen: HashSet<(Option<String>, String)> = HashSet::new();
    let mut items = Vec::new();
    let n = if topical { 3 } else { 2 };
    for (line, f) in records(text) {
        let parsed = check_fields(&f, n, n - 1).and_then(|()| {
            let topic = topical.then(|| f[1].to_string());
            let label = label(f[n - 1])?;
            if !seen.insert((topic.clone(), f[0].to_string())) {
                let key = match &topic {
                    Some(t) => format!("{}\t{t}", f[0]),
                    None => f[0].to_string(),
                };
                return Err(ParseErrorKind::DuplicateKey(key));
            }
            Ok((topic, label))
        });
        match parsed {
            Ok((topic_id, Some(label))) => items.push(LabeledItem {
                item_id: f[0].to_string(),
                topic_id,
                label,
            }),
            Ok((_, None)) => {}
            Err(kind) => diag.push(line, kind),
        }
    }
    diag.finish(items)
}

fn group_topics(items: Vec<LabeledItem>, scale: Scale) -> Result<Vec<TopicSet>> {
    let mut grouped: IndexMap<String, Vec<LabeledItem>> = IndexMap::new();
    for item in items {
        let t = item.topic_id.clone().expect("topical items");
        grouped.entry(t).or_default().push(item);
    }
    grouped
        .into_iter()
        .map(|(t, items)| TopicSet::new(t, scale, items))
        .collect()
}

/// Parses a gold file for `subtask`.
///
/// For D the file uses the five-point layout; neutral items are dropped
/// and a topic left without items is an [`Error::EmptyTopic`]. Two-point
/// words are accepted as well, so a collapsed file also loads.
pub fn parse_gold_str(text: &str, subtask: Subtask) -> Result<GoldData> {
    let scale = subtask.scale();
    match subtask {
        Subtask::A => {
            let items = parse_items(text, false, |s| parse_label(scale, s).map(Some))?;
            if items.is_empty() {
                return Err(Error::EmptyDataset);
            }
            Ok(GoldData::Flat { scale, items })
        }
        Subtask::D => {
            // Remember every topic seen so that an all-neutral topic is
            // reported rather than silently vanishing.
            let mut topics: Vec<String> = Vec::new();
            let items = parse_items(text, true, |s| parse_collapsible(s))?;
            for (_, f) in records(text) {
                if f.len() == 3 && !topics.iter().any(|t| t == f[1]) {
                    topics.push(f[1].to_string());
                }
            }
            if let Some(t) = topics
                .iter()
                .find(|t| !items.iter().any(|i| i.topic_id.as_deref() == Some(t.as_str())))
            {
                return Err(Error::EmptyTopic(t.clone()));
            }
            finish_topics(items, scale)
        }
        Subtask::B | Subtask::C | Subtask::E => {
            let items = parse_items(text, true, |s| parse_label(scale, s).map(Some))?;
            finish_topics(items, scale)
        }
    }
}

fn finish_topics(items: Vec<LabeledItem>, scale: Scale) -> Result<GoldData> {
    if items.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(GoldData::Topics(group_topics(items, scale)?))
}

/// Probability columns in file order for a scale: D lists positive then
/// negative, E lists -2 up to +2.
fn column_classes(scale: Scale) -> Vec<Label> {
    match scale {
        Scale::Two => vec![Label::POSITIVE, Label::NEGATIVE],
        s => s.classes().to_vec(),
    }
}

fn parse_distribution_fields(scale: Scale, fields: &[&str]) -> std::result::Result<Distribution, ParseErrorKind> {
    let mut prevalences = vec![0.0; scale.points()];
    for (&class, s) in column_classes(scale).iter().zip(fields) {
        let v: f64 = s
            .parse()
            .map_err(|_| ParseErrorKind::BadProbability(format!("{s:?} is not a number")))?;
        if !(0.0..=1.0).contains(&v) {
            return Err(ParseErrorKind::BadProbability(format!("{s} is outside [0, 1]")));
        }
        prevalences[scale.index_of(class).expect("column classes are on scale")] = v;
    }
    let sum: f64 = prevalences.iter().sum();
    if (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return Err(ParseErrorKind::BadProbability(format!("row sums to {sum}")));
    }
    Distribution::new(scale, prevalences).map_err(|e| ParseErrorKind::BadProbability(e.to_string()))
}

fn parse_distributions(text: &str, scale: Scale) -> Result<BTreeMap<String, Distribution>> {
    let mut diag = Collector::new();
    let mut out = BTreeMap::new();
    let n = 1 + scale.points();
    for (line, f) in records(text) {
        let parsed = check_fields(&f, n, 1).and_then(|()| {
            let d = parse_distribution_fields(scale, &f[1..])?;
            if out.contains_key(f[0]) {
                return Err(ParseErrorKind::DuplicateKey(f[0].to_string()));
            }
            Ok(d)
        });
        match parsed {
            Ok(d) => {
                out.insert(f[0].to_string(), d);
            }
            Err(kind) => diag.push(line, kind),
        }
    }
    diag.finish(out)
}

pub fn parse_predictions_str(text: &str, subtask: Subtask) -> Result<Predictions> {
    let scale = subtask.scale();
    match subtask {
        Subtask::D | Subtask::E => Ok(Predictions::Distributions(parse_distributions(text, scale)?)),
        _ => Ok(Predictions::Labels(parse_items(text, subtask.is_topical(), |s| {
            parse_label(scale, s).map(Some)
        })?)),
    }
}

pub fn parse_votes_str(text: &str) -> Result<Vec<VoteSet>> {
    let mut diag = Collector::new();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (line, f) in records(text) {
        let parsed = check_fields(&f, 6, 1).and_then(|()| {
            let votes = f[1..]
                .iter()
                .map(|s| parse_label(Scale::Five, s).map(|l| l.value()))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            if !seen.insert(f[0]) {
                return Err(ParseErrorKind::DuplicateKey(f[0].to_string()));
            }
            Ok(VoteSet::new(f[0], &votes).expect("five on-scale votes"))
        });
        match parsed {
            Ok(v) => out.push(v),
            Err(kind) => diag.push(line, kind),
        }
    }
    diag.finish(out)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn with_source<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse(mut p) => {
            p.source = Some(path.to_path_buf());
            Error::Parse(p)
        }
        e => e,
    })
}

pub fn parse_gold(path: impl AsRef<Path>, subtask: Subtask) -> Result<GoldData> {
    let path = path.as_ref();
    with_source(path, parse_gold_str(&read(path)?, subtask))
}

pub fn parse_predictions(path: impl AsRef<Path>, subtask: Subtask) -> Result<Predictions> {
    let path = path.as_ref();
    with_source(path, parse_predictions_str(&read(path)?, subtask))
}

pub fn parse_votes(path: impl AsRef<Path>) -> Result<Vec<VoteSet>> {
    let path = path.as_ref();
    with_source(path, parse_votes_str(&read(path)?))
}

/// Writes items in the two-field (no topic) or three-field layout.
pub fn write_items(items: &[LabeledItem], scale: Scale) -> String {
    let mut out = String::new();
    for item in items {
        let label = scale.label_name(item.label);
        match &item.topic_id {
            Some(t) => writeln!(out, "{}\t{t}\t{label}", item.item_id),
            None => writeln!(out, "{}\t{label}", item.item_id),
        }
        .expect("writing to a String");
    }
    out
}

/// Writes one row per topic. Values use the shortest representation that
/// parses back to the same `f64`.
pub fn write_distributions<'a>(rows: impl IntoIterator<Item = (&'a str, &'a Distribution)>) -> String {
    let mut out = String::new();
    for (topic, d) in rows {
        out.push_str(topic);
        for class in column_classes(d.scale()) {
            write!(out, "\t{}", d.get(class).expect("on scale")).expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

pub fn write_predictions(predictions: &Predictions, subtask: Subtask) -> String {
    match predictions {
        Predictions::Labels(items) => write_items(items, subtask.scale()),
        Predictions::Distributions(d) => write_distributions(d.iter().map(|(t, d)| (t.as_str(), d))),
    }
}

pub fn write_votes(sets: &[VoteSet]) -> String {
    let mut out = String::new();
    for vs in sets {
        out.push_str(vs.item_id());
        for v in vs.votes() {
            write!(out, "\t{v}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

/// `item_id  label  case` for each consolidated item.
pub fn write_consolidated(results: &[Consolidated]) -> String {
    let mut out = String::new();
    for r in results {
        writeln!(out, "{}\t{}\t{}", r.item_id, r.label, r.case.as_str()).expect("writing to a String");
    }
    out
}
