//! Scoring toolkit for sentiment classification and quantification
//! shared tasks.
//!
//! Five subtask shapes are supported:
//!
//! | subtask | task                               | scale   | official measure |
//! |---------|------------------------------------|---------|------------------|
//! | A       | classification                     | 3-point | F1 over P and N  |
//! | B       | per-topic classification           | 2-point | macro recall     |
//! | C       | per-topic ordinal classification   | 5-point | macro MAE        |
//! | D       | per-topic quantification           | 2-point | smoothed KLD     |
//! | E       | per-topic ordinal quantification   | 5-point | EMD              |
//!
//! For B-E each measure is computed per topic and averaged over topics.
//!
//! ```
//! use sentiscore::{format, harness::{score, Subtask}};
//!
//! let gold = format::parse_gold_str("1\tpositive\n2\tnegative\n3\tneutral\n", Subtask::A)?;
//! let pred = format::parse_predictions_str("1\tpositive\n2\tpositive\n3\tneutral\n", Subtask::A)?;
//! let report = score(Subtask::A, &gold, &pred)?;
//! assert!((report.official - 1.0 / 3.0).abs() < 1e-12);
//! # Ok::<(), sentiscore::Error>(())
//! ```
//!
//! Besides scoring, the crate fuses five-way crowd annotations
//! ([`consolidation`]), runs trivial baselines ([`baselines`]) and
//! synthesizes prevalence-drifted copies of a topic
//! ([`harness::generate_drift`]).

pub mod baselines;
pub mod consolidation;
pub mod dataset;
pub mod error;
pub mod format;
pub mod harness;
pub mod label;
pub mod leaderboard;
pub mod metrics;
pub mod report;

pub use dataset::{build_confusion, prevalence, ConfusionMatrix, Distribution, LabeledItem, TopicSet};
pub use error::{Error, ParseError, ParseErrorKind, ParseErrors, Result};
pub use harness::{score, GoldData, Measure, Predictions, ScoreReport, Subtask};
pub use label::{collapse_scale, Label, Scale};
