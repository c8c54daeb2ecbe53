//! Ordinal label scales.
//!
//! Every label is stored as a small integer regardless of its scale:
//! the five-point scale uses `-2..=2`, the three-point scale uses
//! `-1..=1` and the two-point scale uses `{-1, 1}`. Distances between
//! labels are plain integer differences.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scale {
    Two,
    Three,
    Five,
}

const TWO: [Label; 2] = [Label::NEGATIVE, Label::POSITIVE];
const THREE: [Label; 3] = [Label::NEGATIVE, Label::NEUTRAL, Label::POSITIVE];
const FIVE: [Label; 5] = [
    Label::HIGHLY_NEGATIVE,
    Label::NEGATIVE,
    Label::NEUTRAL,
    Label::POSITIVE,
    Label::HIGHLY_POSITIVE,
];

impl Scale {
    pub fn from_points(points: usize) -> Option<Scale> {
        match points {
            2 => Some(Scale::Two),
            3 => Some(Scale::Three),
            5 => Some(Scale::Five),
            _ => None,
        }
    }

    pub fn points(self) -> usize {
        self.classes().len()
    }

    /// Classes in ascending order.
    pub fn classes(self) -> &'static [Label] {
        match self {
            Scale::Two => &TWO,
            Scale::Three => &THREE,
            Scale::Five => &FIVE,
        }
    }

    /// Position of `label` in [`Scale::classes`], if it belongs to this scale.
    pub fn index_of(self, label: Label) -> Option<usize> {
        let v = label.0;
        match self {
            Scale::Two => match v {
                -1 => Some(0),
                1 => Some(1),
                _ => None,
            },
            Scale::Three => (-1..=1).contains(&v).then(|| (v + 1) as usize),
            Scale::Five => (-2..=2).contains(&v).then(|| (v + 2) as usize),
        }
    }

    pub fn contains(self, label: Label) -> bool {
        self.index_of(label).is_some()
    }

    pub fn check(self, label: Label) -> Result<usize> {
        self.index_of(label).ok_or(Error::OffScaleLabel {
            label: label.0,
            scale: self,
        })
    }

    /// Parses the on-disk spelling of a label. Two- and three-point scales
    /// use case-insensitive words, the five-point scale uses integers.
    pub fn parse_label(self, s: &str) -> Option<Label> {
        let label = match self {
            Scale::Two | Scale::Three => match s.to_ascii_lowercase().as_str() {
                "positive" => Label::POSITIVE,
                "neutral" => Label::NEUTRAL,
                "negative" => Label::NEGATIVE,
                _ => return None,
            },
            Scale::Five => Label(s.parse::<i8>().ok()?),
        };
        self.contains(label).then_some(label)
    }

    /// Canonical on-disk spelling; the inverse of [`Scale::parse_label`].
    pub fn label_name(self, label: Label) -> String {
        match self {
            Scale::Two | Scale::Three => match label.0 {
                1 => "positive".to_string(),
                0 => "neutral".to_string(),
                -1 => "negative".to_string(),
                v => v.to_string(),
            },
            Scale::Five => label.0.to_string(),
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-point", self.points())
    }
}

impl FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        s.parse::<usize>()
            .ok()
            .and_then(Scale::from_points)
            .ok_or_else(|| format!("unknown scale {s:?}, expected 2, 3 or 5"))
    }
}

/// A sentiment value coded as an integer in `-2..=2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label(i8);

impl Label {
    pub const HIGHLY_NEGATIVE: Label = Label(-2);
    pub const NEGATIVE: Label = Label(-1);
    pub const NEUTRAL: Label = Label(0);
    pub const POSITIVE: Label = Label(1);
    pub const HIGHLY_POSITIVE: Label = Label(2);

    pub fn new(value: i8, scale: Scale) -> Result<Label> {
        let label = Label(value);
        scale.check(label)?;
        Ok(label)
    }

    pub fn value(self) -> i8 {
        self.0
    }

    pub fn distance(self, other: Label) -> u32 {
        (i32::from(self.0) - i32::from(other.0)).unsigned_abs()
    }

    pub fn negate(self) -> Label {
        Label(-self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Maps a five-point label onto a coarser scale.
///
/// Highly positive and positive merge into positive (and likewise for the
/// negative side). On the two-point scale neutral has no image and
/// `None` is returned, meaning the item is dropped.
pub fn collapse_scale(label: Label, target: Scale) -> Result<Option<Label>> {
    Scale::Five.check(label)?;
    let collapsed = match target {
        Scale::Five => Some(label),
        Scale::Three => Some(Label(label.0.signum())),
        Scale::Two => match label.0.signum() {
            0 => None,
            s => Some(Label(s)),
        },
    };
    Ok(collapsed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collapse_examples() {
        assert_eq!(
            collapse_scale(Label::HIGHLY_POSITIVE, Scale::Three).unwrap(),
            Some(Label::POSITIVE)
        );
        assert_eq!(collapse_scale(Label::NEUTRAL, Scale::Two).unwrap(), None);
        assert_eq!(
            collapse_scale(Label::NEGATIVE, Scale::Two).unwrap(),
            Some(Label::NEGATIVE)
        );
        assert_eq!(
            collapse_scale(Label::HIGHLY_NEGATIVE, Scale::Three).unwrap(),
            Some(Label::NEGATIVE)
        );
    }

    #[test]
    fn collapse_rejects_off_scale() {
        assert!(matches!(
            collapse_scale(Label(3), Scale::Three),
            Err(Error::OffScaleLabel { .. })
        ));
    }

    #[test]
    fn collapse_is_order_preserving() {
        for &a in Scale::Five.classes() {
            for &b in Scale::Five.classes() {
                if a <= b {
                    let ca = collapse_scale(a, Scale::Three).unwrap().unwrap();
                    let cb = collapse_scale(b, Scale::Three).unwrap().unwrap();
                    assert!(ca <= cb, "{a} <= {b} but {ca} > {cb}");
                }
            }
        }
    }

    #[test]
    fn label_spelling_round_trips() {
        for scale in [Scale::Two, Scale::Three, Scale::Five] {
            for &c in scale.classes() {
                let name = scale.label_name(c);
                assert_eq!(scale.parse_label(&name), Some(c));
            }
        }
        assert_eq!(Scale::Three.parse_label("POSITIVE"), Some(Label::POSITIVE));
        assert_eq!(Scale::Two.parse_label("neutral"), None);
        assert_eq!(Scale::Five.parse_label("3"), None);
        assert_eq!(Scale::Five.parse_label("positive"), None);
    }

    #[test]
    fn index_matches_class_order() {
        for scale in [Scale::Two, Scale::Three, Scale::Five] {
            for (i, &c) in scale.classes().iter().enumerate() {
                assert_eq!(scale.index_of(c), Some(i));
            }
            assert!(scale.classes().windows(2).all(|w| w[0] < w[1]));
        }
        assert_eq!(Scale::Two.index_of(Label::NEUTRAL), None);
    }
}
