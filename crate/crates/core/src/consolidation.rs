//! Fusing five crowd annotations on the five-point scale into one label.
//!
//! A label with at least three of the five votes wins outright. Otherwise
//! the votes are averaged and the mean is binned with cut points at ±0.4
//! and ±1.4 rather than the usual ±0.5 and ±1.5. A mean lying exactly on a
//! cut point goes to the outer bin.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::{Label, Scale};

pub const VOTES_PER_ITEM: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoteSet {
    item_id: String,
    votes: [Label; VOTES_PER_ITEM],
}

impl VoteSet {
    pub fn new(item_id: impl Into<String>, votes: &[i8]) -> Result<Self> {
        let item_id = item_id.into();
        let malformed = |reason: String| Error::MalformedVotes {
            item: item_id.clone(),
            reason,
        };
        if votes.len() != VOTES_PER_ITEM {
            return Err(malformed(format!("expected {VOTES_PER_ITEM} votes, got {}", votes.len())));
        }
        let mut out = [Label::NEUTRAL; VOTES_PER_ITEM];
        for (slot, &v) in out.iter_mut().zip(votes) {
            *slot = Label::new(v, Scale::Five).map_err(|_| malformed(format!("vote {v} is off the five-point scale")))?;
        }
        Ok(VoteSet { item_id, votes: out })
    }

    pub fn item_id(&self) -> &str {
        &self.item_id
    }

    pub fn votes(&self) -> &[Label; VOTES_PER_ITEM] {
        &self.votes
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseTag {
    /// All five votes agree.
    Unanimous,
    /// Three or four votes agree.
    Majority,
    /// No majority; the rounded mean was used.
    Averaged,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::Unanimous => "unanimous",
            CaseTag::Majority => "majority",
            CaseTag::Averaged => "averaged",
        }
    }
}

/// Bins the mean of five votes given as their integer sum. Working on the
/// sum keeps the cut points exact: |mean| >= 1.4 iff |sum| >= 7 and
/// |mean| >= 0.4 iff |sum| >= 2.
fn round_vote_sum(sum: i32) -> Label {
    let magnitude = match sum.abs() {
        s if s >= 7 => 2,
        s if s >= 2 => 1,
        _ => 0,
    };
    Label::new((sum.signum() * magnitude) as i8, Scale::Five).expect("binned mean is on scale")
}

fn consolidate_tagged(votes: &[Label; VOTES_PER_ITEM]) -> (Label, CaseTag) {
    let mut counts = [0usize; 5];
    for &v in votes {
        counts[Scale::Five.index_of(v).expect("votes are on scale")] += 1;
    }
    let (top, &n) = counts
        .iter()
        .enumerate()
        .max_by_key(|&(_, n)| *n)
        .expect("five classes");
    match n {
        5 => (Scale::Five.classes()[top], CaseTag::Unanimous),
        3 | 4 => (Scale::Five.classes()[top], CaseTag::Majority),
        _ => {
            let sum: i32 = votes.iter().map(|v| i32::from(v.value())).sum();
            (round_vote_sum(sum), CaseTag::Averaged)
        }
    }
}

pub fn consolidate(votes: &VoteSet) -> Label {
    consolidate_tagged(&votes.votes).0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Consolidated {
    pub item_id: String,
    pub label: Label,
    pub case: CaseTag,
}

/// Consolidates every vote set, preserving input order.
pub fn consolidate_batch(vote_sets: &[VoteSet]) -> Result<Vec<Consolidated>> {
    if vote_sets.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(vote_sets
        .iter()
        .map(|vs| {
            let (label, case) = consolidate_tagged(&vs.votes);
            Consolidated {
                item_id: vs.item_id.clone(),
                label,
                case,
            }
        })
        .collect())
}

/// Counts of items per [`CaseTag`], in `(unanimous, majority, averaged)` order.
pub fn case_counts(results: &[Consolidated]) -> (usize, usize, usize) {
    results.iter().fold((0, 0, 0), |(u, m, a), r| match r.case {
        CaseTag::Unanimous => (u + 1, m, a),
        CaseTag::Majority => (u, m + 1, a),
        CaseTag::Averaged => (u, m, a + 1),
    })
}
