use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sentiscore::baselines::{run_baseline, BaselineSpec, Policy};
use sentiscore::consolidation::{case_counts, consolidate_batch};
use sentiscore::format::{self, parse_gold, parse_predictions, parse_votes};
use sentiscore::harness::{generate_drift, DriftSpec};
use sentiscore::leaderboard::{emit_leaderboard, leaderboard};
use sentiscore::report::{emit_report, ReportFormat};
use sentiscore::{collapse_scale, prevalence, Error, GoldData, LabeledItem, Scale, Subtask};

#[derive(Parser)]
#[command(name = "sentiscore", version, about = "Score sentiment classification and quantification runs")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, default_value = "text")]
    format: ReportFormat,

    /// Include per-topic values in text reports.
    #[arg(long, global = true)]
    per_topic: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Three-point classification (F1 over positive and negative).
    ScoreA { gold: PathBuf, pred: PathBuf },
    /// Two-point per-topic classification (macroaveraged recall).
    ScoreB { gold: PathBuf, pred: PathBuf },
    /// Five-point per-topic ordinal classification (macroaveraged MAE).
    ScoreC { gold: PathBuf, pred: PathBuf },
    /// Two-point per-topic quantification (smoothed KLD).
    ScoreD { gold: PathBuf, pred: PathBuf },
    /// Five-point per-topic ordinal quantification (EMD).
    ScoreE { gold: PathBuf, pred: PathBuf },
    /// Fuse five crowd votes per item into one five-point label.
    Consolidate { votes: PathBuf },
    /// Score a trivial baseline against a gold file.
    ///
    /// POLICY is `constant=LABEL` (A-C), `majority=LABEL` (D-E) or `train`
    /// (D-E, prevalences of the --train files).
    Baseline {
        subtask: Subtask,
        policy: String,
        gold: PathBuf,
        /// Training gold files, in the subtask's gold format.
        #[arg(long)]
        train: Vec<PathBuf>,
        /// Also write the baseline's predictions here.
        #[arg(long)]
        emit_predictions: Option<PathBuf>,
    },
    /// Write drifted copies of every topic in a gold file.
    Drift {
        gold: PathBuf,
        /// `CLASS=FRACTION`, repeatable.
        #[arg(long = "remove", value_name = "CLASS=FRACTION")]
        removals: Vec<String>,
        #[arg(long, default_value_t = 1)]
        variants: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Subtask whose gold format the file uses.
        #[arg(long, default_value = "c")]
        subtask: Subtask,
    },
    /// Collapse a five-point gold file to three or two points.
    Collapse {
        gold: PathBuf,
        #[arg(long)]
        to: Scale,
    },
    /// Rank several prediction files.
    Leaderboard {
        subtask: Subtask,
        gold: PathBuf,
        /// `NAME=PATH`, one per system.
        #[arg(required = true)]
        submissions: Vec<String>,
    },
}

/// A failure to report and the exit code that goes with it.
struct Failure {
    message: String,
    code: u8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            message: e.to_string(),
            code: e.exit_code() as u8,
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        message: message.into(),
        code: 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("sentiscore: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::ScoreA { gold, pred } => score(Subtask::A, gold, pred, cli),
        Command::ScoreB { gold, pred } => score(Subtask::B, gold, pred, cli),
        Command::ScoreC { gold, pred } => score(Subtask::C, gold, pred, cli),
        Command::ScoreD { gold, pred } => score(Subtask::D, gold, pred, cli),
        Command::ScoreE { gold, pred } => score(Subtask::E, gold, pred, cli),
        Command::Consolidate { votes } => consolidate(votes),
        Command::Baseline {
            subtask,
            policy,
            gold,
            train,
            emit_predictions,
        } => baseline(*subtask, policy, gold, train, emit_predictions.as_ref(), cli),
        Command::Drift {
            gold,
            removals,
            variants,
            seed,
            subtask,
        } => drift(gold, removals, *variants, *seed, *subtask),
        Command::Collapse { gold, to } => collapse(gold, *to),
        Command::Leaderboard {
            subtask,
            gold,
            submissions,
        } => ranks(*subtask, gold, submissions, cli),
    }
}

fn score(subtask: Subtask, gold: &PathBuf, pred: &PathBuf, cli: &Cli) -> Result<String, Failure> {
    let gold = parse_gold(gold, subtask)?;
    let pred = parse_predictions(pred, subtask)?;
    let report = sentiscore::score(subtask, &gold, &pred)?;
    Ok(emit_report(&report, cli.format, cli.per_topic))
}

fn consolidate(votes: &PathBuf) -> Result<String, Failure> {
    let sets = parse_votes(votes)?;
    let results = consolidate_batch(&sets)?;
    let (u, m, a) = case_counts(&results);
    eprintln!("{} items: {u} unanimous, {m} majority, {a} averaged", results.len());
    Ok(format::write_consolidated(&results))
}

fn parse_policy(subtask: Subtask, policy: &str, train: &[PathBuf]) -> Result<Policy, Failure> {
    let scale = subtask.scale();
    let label = |s: &str| {
        scale
            .parse_label(s)
            .ok_or_else(|| usage(format!("{s:?} is not a {scale} label")))
    };
    match policy.split_once('=') {
        Some(("constant", l)) => Ok(Policy::ConstantClass(label(l)?)),
        Some(("majority", l)) => Ok(Policy::MajorityPrevalence(label(l)?)),
        None if policy == "train" => {
            if train.is_empty() {
                return Err(usage("policy `train` needs at least one --train file"));
            }
            let mut items: Vec<LabeledItem> = Vec::new();
            for path in train {
                items.extend(parse_gold(path, subtask)?.items().into_iter().cloned());
            }
            Ok(Policy::TrainPrevalence(prevalence(&items, scale)?))
        }
        _ => Err(usage(format!(
            "unknown policy {policy:?}, expected constant=LABEL, majority=LABEL or train"
        ))),
    }
}

fn baseline(
    subtask: Subtask,
    policy: &str,
    gold: &PathBuf,
    train: &[PathBuf],
    emit_predictions: Option<&PathBuf>,
    cli: &Cli,
) -> Result<String, Failure> {
    let policy = parse_policy(subtask, policy, train)?;
    let spec = BaselineSpec::new(subtask, policy)?;
    let gold = parse_gold(gold, subtask)?;
    let pred = run_baseline(&spec, &gold)?;
    if let Some(path) = emit_predictions {
        std::fs::write(path, format::write_predictions(&pred, subtask)).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
    }
    let report = sentiscore::score(subtask, &gold, &pred)?;
    Ok(emit_report(&report, cli.format, cli.per_topic))
}

fn drift(gold: &PathBuf, removals: &[String], variants: usize, seed: u64, subtask: Subtask) -> Result<String, Failure> {
    if subtask == Subtask::A {
        return Err(usage("drift needs a topic-grouped gold file (subtasks b-e)"));
    }
    let scale = subtask.scale();
    let mut fractions = BTreeMap::new();
    for r in removals {
        let (class, frac) = r
            .split_once('=')
            .ok_or_else(|| usage(format!("--remove expects CLASS=FRACTION, got {r:?}")))?;
        let label = scale
            .parse_label(class)
            .ok_or_else(|| usage(format!("{class:?} is not a {scale} label")))?;
        let frac: f64 = frac
            .parse()
            .map_err(|_| usage(format!("{frac:?} is not a fraction")))?;
        fractions.insert(label, frac);
    }
    let GoldData::Topics(topics) = parse_gold(gold, subtask)? else {
        unreachable!("topical subtasks parse into topics")
    };
    let mut out = String::new();
    for source in topics {
        let spec = DriftSpec {
            source,
            removals: fractions.clone(),
            seed,
            variants,
        };
        for t in generate_drift(&spec)? {
            out.push_str(&format::write_items(t.items(), scale));
        }
    }
    Ok(out)
}

fn collapse(gold: &PathBuf, to: Scale) -> Result<String, Failure> {
    if to == Scale::Five {
        return Err(usage("--to must be 3 or 2"));
    }
    let gold = parse_gold(gold, Subtask::C)?;
    let mut items = Vec::new();
    for item in gold.items() {
        if let Some(label) = collapse_scale(item.label, to)? {
            items.push(LabeledItem {
                label,
                ..item.clone()
            });
        }
    }
    Ok(format::write_items(&items, to))
}

fn ranks(subtask: Subtask, gold: &PathBuf, submissions: &[String], cli: &Cli) -> Result<String, Failure> {
    let mut entries = Vec::new();
    for s in submissions {
        let (name, path) = s
            .split_once('=')
            .ok_or_else(|| usage(format!("submission must be NAME=PATH, got {s:?}")))?;
        entries.push((name.to_string(), PathBuf::from(path)));
    }
    let gold = parse_gold(gold, subtask)?;
    let lb = leaderboard(subtask, &gold, &entries);
    for (name, e) in &lb.failures {
        eprintln!("sentiscore: {name}: {e}");
    }
    if lb.rows.is_empty() {
        let code = lb.failures.first().map_or(3, |(_, e)| e.exit_code() as u8);
        return Err(Failure {
            message: "no submission could be scored".into(),
            code,
        });
    }
    Ok(emit_leaderboard(&lb, cli.format))
}
