//! Ranking several submissions to one subtask.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::thread;

use indexmap::IndexMap;
use serde::Serialize;

use crate::error::Error;
use crate::format::parse_predictions;
use crate::harness::{score, GoldData, Measure, ScoreReport, Subtask};
use crate::report::ReportFormat;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeaderboardRow {
    pub system_name: String,
    pub official: f64,
    pub secondary: IndexMap<Measure, f64>,
    pub rank: usize,
    pub rank_by_measure: IndexMap<Measure, usize>,
}

#[derive(Debug)]
pub struct Leaderboard {
    pub subtask: Subtask,
    pub rows: Vec<LeaderboardRow>,
    /// Submissions that could not be scored, in input order.
    pub failures: Vec<(String, Error)>,
}

/// Competition ranking: each value's rank is one plus the number of
/// strictly better values, so ties share a rank and the following rank is
/// skipped.
pub fn competition_ranks(values: &[f64], higher_is_better: bool) -> Vec<usize> {
    values
        .iter()
        .map(|&v| {
            1 + values
                .iter()
                .filter(|&&w| if higher_is_better { w > v } else { w < v })
                .count()
        })
        .collect()
}

/// Ranks scored systems, best first. Ties keep input order.
pub fn rank_reports(entries: Vec<(String, ScoreReport)>) -> Vec<LeaderboardRow> {
    let Some((_, first)) = entries.first() else {
        return Vec::new();
    };
    let measures: Vec<Measure> = first.measures().map(|(m, _)| m).collect();
    let official = first.official_measure;
    let ranks: IndexMap<Measure, Vec<usize>> = measures
        .iter()
        .map(|&m| {
            let values: Vec<f64> = entries.iter().map(|(_, r)| r.get(m).unwrap_or(f64::NAN)).collect();
            (m, competition_ranks(&values, m.higher_is_better()))
        })
        .collect();

    let mut rows: Vec<LeaderboardRow> = entries
        .into_iter()
        .enumerate()
        .map(|(i, (name, r))| LeaderboardRow {
            system_name: name,
            official: r.official,
            rank: ranks[&official][i],
            rank_by_measure: ranks.iter().map(|(&m, v)| (m, v[i])).collect(),
            secondary: r.secondary,
        })
        .collect();
    rows.sort_by_key(|r| r.rank);
    rows
}

/// Parses and scores every submission file against `gold`, in parallel.
/// A submission that fails to parse or score is listed in
/// [`Leaderboard::failures`] without affecting the others.
pub fn leaderboard(subtask: Subtask, gold: &GoldData, submissions: &[(String, PathBuf)]) -> Leaderboard {
    let results: Vec<Result<ScoreReport, Error>> = thread::scope(|s| {
        let handles: Vec<_> = submissions
            .iter()
            .map(|(_, path)| s.spawn(move || score(subtask, gold, &parse_predictions(path, subtask)?)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("scoring thread panicked"))
            .collect()
    });

    let mut scored = Vec::new();
    let mut failures = Vec::new();
    for ((name, _), r) in submissions.iter().zip(results) {
        match r {
            Ok(report) => scored.push((name.clone(), report)),
            Err(e) => failures.push((name.clone(), e)),
        }
    }
    Leaderboard {
        subtask,
        rows: rank_reports(scored),
        failures,
    }
}

pub fn emit_leaderboard(lb: &Leaderboard, format: ReportFormat) -> String {
    let measures: Vec<Measure> = lb.subtask.measures().to_vec();
    let mut out = String::new();
    match format {
        ReportFormat::Text | ReportFormat::Tsv => {
            let text = format == ReportFormat::Text;
            out.push_str(if text { "rank\tsystem" } else { "#rank\tsystem" });
            for m in &measures {
                write!(out, "\t{m}").unwrap();
            }
            out.push('\n');
            for row in &lb.rows {
                write!(out, "{}\t{}", row.rank, row.system_name).unwrap();
                for m in &measures {
                    let v = if *m == lb.subtask.official_measure() {
                        row.official
                    } else {
                        row.secondary[m]
                    };
                    if text {
                        write!(out, "\t{v:.3} ({})", row.rank_by_measure[m]).unwrap();
                    } else {
                        write!(out, "\t{v}").unwrap();
                    }
                }
                out.push('\n');
            }
        }
        ReportFormat::Json => {
            let failures: Vec<_> = lb
                .failures
                .iter()
                .map(|(n, e)| serde_json::json!({ "system_name": n, "error": e.to_string() }))
                .collect();
            let doc = serde_json::json!({
                "subtask": lb.subtask,
                "rows": lb.rows,
                "failures": failures,
            });
            out = serde_json::to_string_pretty(&doc).expect("leaderboard serializes");
            out.push('\n');
        }
    }
    out
}
