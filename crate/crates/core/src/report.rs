//! Rendering score reports.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::harness::ScoreReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    /// Measure per line, three decimals.
    #[default]
    Text,
    /// Full report, full precision.
    Json,
    /// One row per topic, full precision.
    Tsv,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(ReportFormat::Text),
            "json" => Ok(ReportFormat::Json),
            "tsv" => Ok(ReportFormat::Tsv),
            _ => Err(format!("unknown format {s:?}, expected text, json or tsv")),
        }
    }
}

/// Renders `report`. `per_topic` adds the topic breakdown to the text
/// format; JSON always carries it and TSV consists of nothing else.
pub fn emit_report(report: &ScoreReport, format: ReportFormat, per_topic: bool) -> String {
    match format {
        ReportFormat::Text => text(report, per_topic),
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
            s.push('\n');
            s
        }
        ReportFormat::Tsv => tsv(report),
    }
}

fn text(report: &ScoreReport, per_topic: bool) -> String {
    let mut out = String::new();
    for (m, v) in report.measures() {
        writeln!(out, "{m}\t{v:.3}").unwrap();
    }
    if per_topic && !report.per_topic.is_empty() {
        writeln!(out).unwrap();
        write!(out, "topic").unwrap();
        for (m, _) in report.measures() {
            write!(out, "\t{m}").unwrap();
        }
        writeln!(out).unwrap();
        for (topic, values) in &report.per_topic {
            write!(out, "{topic}").unwrap();
            for (m, _) in report.measures() {
                write!(out, "\t{:.3}", values[&m]).unwrap();
            }
            writeln!(out).unwrap();
        }
    }
    out
}

fn tsv(report: &ScoreReport) -> String {
    let mut out = String::from("#topic_id");
    for (m, _) in report.measures() {
        write!(out, "\t{m}").unwrap();
    }
    out.push('\n');
    for (topic, values) in &report.per_topic {
        out.push_str(topic);
        for (m, _) in report.measures() {
            write!(out, "\t{}", values[&m]).unwrap();
        }
        out.push('\n');
    }
    out
}
