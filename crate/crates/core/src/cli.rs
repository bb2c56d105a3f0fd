//! Command-line front end. `run` does all the work and returns the exit
//! status, so it can be driven from tests without spawning a process.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::{classify, ClassificationReport};
use crate::error::Error;
use crate::muckenhoupt::{btilde, muckenhoupt_product};
use crate::operators::{
    apply_cesaro, apply_cesaro_adjoint, apply_h, read_vector_csv, write_vector_csv,
};
use crate::sequences::{parse_sequence, NodeWeightSequence};
use crate::spectral::{default_schedule, lower_bound_sigma, sandwich_report};
use crate::DEFAULT_SCAN;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID_CONFIG: i32 = 2;
pub const EXIT_UNKNOWN_VERDICT: i32 = 3;

const FAMILIES: [&str; 5] = [
    "standard",
    "power",
    "weighted-standard",
    "odd-linear",
    "squared-odd",
];

#[derive(Debug, Parser)]
#[command(
    name = "genhilbert",
    version,
    about = "Generalized Hilbert matrices d_i d_j / (x_i + x_j)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Well-defined / bounded / compact / injective / closed-range verdicts.
    Classify {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = DEFAULT_SCAN)]
        scan: usize,
        /// Exit with status 3 if any verdict is Unknown.
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Muckenhoupt products, B̃(k) and the log lower bound for k = 1..=K.
    Bounds {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 10)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_SCAN)]
        scan: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Singular-value sandwich and eigenvalue ladder for one k.
    Spectrum {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Comma-separated ascending truncation sizes.
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<usize>>,
        #[arg(long, default_value_t = DEFAULT_SCAN)]
        scan: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Applies an operator to a vector read from a CSV file.
    Apply {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_enum, default_value_t = OperatorKind::Hilbert)]
        operator: OperatorKind,
        /// Vector file, one value per line.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Lists the built-in families.
    Presets {
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct SourceArgs {
    #[arg(long, value_parser = FAMILIES)]
    pub family: Option<String>,
    /// `x d` lines or a JSON family selector.
    #[arg(long)]
    pub seq_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub shift: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    #[value(name = "h")]
    #[serde(rename = "h")]
    Hilbert,
    Cesaro,
    CesaroAdjoint,
}

/// Everything a run depends on, after defaults are filled in.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub sequence: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seq_file: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub strict: bool,
    pub format: Format,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    seq: Option<NodeWeightSequence>,
}

/// A failure together with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub status: i32,
    pub message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure {
            status: EXIT_INVALID_CONFIG,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidParameter(_)
            | Error::InvalidPair { .. }
            | Error::Parse { .. }
            | Error::DuplicateNode(_)
            | Error::PrefixTooShort { .. } => EXIT_INVALID_CONFIG,
            _ => EXIT_FAILURE,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

fn resolve_sequence(
    source: &SourceArgs,
    params: &ParamArgs,
) -> Result<NodeWeightSequence, Failure> {
    match (&source.family, &source.seq_file) {
        (Some(name), None) => Ok(NodeWeightSequence::from_name(
            name,
            params.alpha,
            params.shift,
        )?),
        (None, Some(path)) => {
            if params.alpha.is_some() || params.shift.is_some() {
                return Err(Failure::config(
                    "--alpha/--shift only apply to --family power",
                ));
            }
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
            Ok(parse_sequence(&text)?)
        }
        _ => Err(Failure::config(
            "exactly one of --family and --seq-file is required",
        )),
    }
}

impl RunConfig {
    fn base(command: &'static str, format: Format, out: Option<PathBuf>) -> Self {
        RunConfig {
            command,
            sequence: String::new(),
            seq_file: None,
            scan: None,
            k: None,
            schedule: None,
            operator: None,
            input: None,
            strict: false,
            format,
            out,
            seq: None,
        }
    }

    fn with_sequence(mut self, source: &SourceArgs, params: &ParamArgs) -> Result<Self, Failure> {
        let seq = resolve_sequence(source, params)?;
        self.sequence = seq.name();
        self.seq_file = source.seq_file.clone();
        self.seq = Some(seq);
        Ok(self)
    }

    /// Resolves defaults and checks the cross-flag constraints.
    pub fn from_cli(cli: &Cli) -> Result<Self, Failure> {
        let config = match &cli.command {
            Command::Classify {
                source,
                params,
                scan,
                strict,
                output,
            } => {
                let mut c = Self::base("classify", output.format, output.out.clone())
                    .with_sequence(source, params)?;
                c.scan = Some(*scan);
                c.strict = *strict;
                c
            }
            Command::Bounds {
                source,
                params,
                k,
                scan,
                output,
            } => {
                let mut c = Self::base("bounds", output.format, output.out.clone())
                    .with_sequence(source, params)?;
                c.k = Some(*k);
                c.scan = Some(*scan);
                c
            }
            Command::Spectrum {
                source,
                params,
                k,
                schedule,
                scan,
                output,
            } => {
                let mut c = Self::base("spectrum", output.format, output.out.clone())
                    .with_sequence(source, params)?;
                let seq = c.seq.as_ref().expect("resolved");
                c.schedule = Some(
                    schedule
                        .clone()
                        .unwrap_or_else(|| default_schedule(seq, *k)),
                );
                c.k = Some(*k);
                c.scan = Some(*scan);
                c
            }
            Command::Apply {
                source,
                params,
                operator,
                input,
                output,
            } => {
                let mut c = Self::base("apply", output.format, output.out.clone())
                    .with_sequence(source, params)?;
                c.operator = Some(*operator);
                c.input = Some(input.clone());
                c
            }
            Command::Presets { output } => {
                let mut c = Self::base("presets", output.format, output.out.clone());
                c.sequence = "all".into();
                c
            }
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), Failure> {
        if self.scan == Some(0) {
            return Err(Failure::config("--scan must be >= 1"));
        }
        if self.k == Some(0) {
            return Err(Failure::config("--k must be >= 1"));
        }
        if let Some(schedule) = &self.schedule {
            let k = self.k.unwrap_or(1);
            if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Failure::config(
                    "--schedule must be a strictly ascending list",
                ));
            }
            let max = *schedule.last().unwrap();
            if max < k {
                return Err(Failure::config(format!(
                    "--schedule maximum {max} is below --k {k}"
                )));
            }
            if let Some(scan) = self.scan {
                if scan < max {
                    return Err(Failure::config(format!(
                        "--scan {scan} is below the schedule maximum {max}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn sequence(&self) -> &NodeWeightSequence {
        self.seq.as_ref().expect("command has a sequence")
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    version: &'static str,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

fn envelope<T: Serialize>(config: &RunConfig, body: T) -> String {
    let value = Envelope {
        version: env!("CARGO_PKG_VERSION"),
        config,
        body,
    };
    let mut text = serde_json::to_string_pretty(&value).expect("report serializes");
    text.push('\n');
    text
}

fn csv_header(config: &RunConfig) -> String {
    format!(
        "# genhilbert {} {} sequence={}\n",
        env!("CARGO_PKG_VERSION"),
        config.command,
        config.sequence
    )
}

fn classify_output(config: &RunConfig) -> (String, ClassificationReport) {
    let report = classify(config.sequence(), config.scan.unwrap_or(DEFAULT_SCAN));
    let text = match config.format {
        Format::Json => envelope(
            config,
            json!({
                "report": &report,
                "ill_posedness": report.ill_posedness(),
            }),
        ),
        Format::Csv => {
            let mut out = csv_header(config);
            out.push_str("property,verdict,condition\n");
            for c in &report.certificates {
                out.push_str(&format!("{},{:?},{}\n", c.property, c.verdict, c.condition));
            }
            out
        }
    };
    (text, report)
}

fn tagged(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn bounds_output(config: &RunConfig) -> Result<String, Failure> {
    let seq = config.sequence();
    let (k_max, scan) = (config.k.unwrap_or(10), config.scan.unwrap_or(DEFAULT_SCAN));
    if let Some(n) = seq.len() {
        if k_max > n {
            return Err(Failure::config(format!(
                "--k {k_max} exceeds the sequence length {n}"
            )));
        }
    }
    let mut rows = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let product = muckenhoupt_product(seq, k, scan)?;
        let upper = btilde(seq, k, scan)?;
        let lower = lower_bound_sigma(seq, k)?;
        rows.push((k, product, upper, lower));
    }
    Ok(match config.format {
        Format::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|(k, p, b, l)| json!({ "k": k, "product": p, "btilde": b, "log_lower_sigma": tagged(*l) }))
                .collect();
            envelope(config, json!({ "rows": rows }))
        }
        Format::Csv => {
            let mut out = csv_header(config);
            out.push_str(
                "k,product_lower,product_upper,btilde_lower,btilde_upper,log_lower_sigma\n",
            );
            for (k, p, b, l) in rows {
                out.push_str(&format!(
                    "{k},{},{},{},{},{l}\n",
                    p.lower, p.upper, b.lower, b.upper
                ));
            }
            out
        }
    })
}

fn spectrum_output(config: &RunConfig) -> Result<String, Failure> {
    let report = sandwich_report(
        config.sequence(),
        config.k.unwrap_or(1),
        config.schedule.as_deref(),
        config.scan.unwrap_or(DEFAULT_SCAN),
    )?;
    Ok(match config.format {
        Format::Json => envelope(config, &report),
        Format::Csv => csv_header(config) + &report.ladder_csv(),
    })
}

fn apply_output(config: &RunConfig) -> Result<String, Failure> {
    let path = config.input.as_ref().expect("apply has an input");
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
    let f = read_vector_csv(&text)?;
    if f.is_empty() {
        return Err(Failure::config("input vector is empty"));
    }
    let seq = config.sequence();
    let values = match config.operator.unwrap_or(OperatorKind::Hilbert) {
        OperatorKind::Hilbert => apply_h(seq, &f)?,
        OperatorKind::Cesaro => apply_cesaro(seq, &f)?,
        OperatorKind::CesaroAdjoint => apply_cesaro_adjoint(seq, &f)?,
    };
    Ok(match config.format {
        Format::Json => envelope(config, json!({ "values": values })),
        Format::Csv => write_vector_csv(&values, &config.sequence),
    })
}

struct Preset {
    name: &'static str,
    nodes: &'static str,
    weights: &'static str,
    description: &'static str,
}

const PRESETS: [Preset; 6] = [
    Preset {
        name: "standard",
        nodes: "i - 1/2",
        weights: "1",
        description: "classical Hilbert matrix 1/(i+j-1); bounded, not compact, type-I ill-posed",
    },
    Preset {
        name: "power",
        nodes: "i^alpha - shift",
        weights: "1",
        description:
            "unbounded for alpha < 1, bounded non-compact at alpha = 1, compact for alpha > 1",
    },
    Preset {
        name: "weighted-standard",
        nodes: "i - 1/2",
        weights: "1/i",
        description: "compact, type-II ill-posed; products decay like k^-3",
    },
    Preset {
        name: "odd-linear",
        nodes: "2i - 1",
        weights: "1",
        description: "midpoint sampling of fractional diffusion; bounded, not compact, type-I",
    },
    Preset {
        name: "squared-odd",
        nodes: "(2i - 1)^2",
        weights: "1",
        description: "midpoint sampling of the heat equation; compact, type-II",
    },
    Preset {
        name: "custom",
        nodes: "from --seq-file",
        weights: "from --seq-file",
        description: "finite list of `x d` lines, or a JSON selector {\"family\", \"params\"}",
    },
];

fn presets_output(config: &RunConfig) -> String {
    match config.format {
        Format::Json => {
            let list: Vec<Value> = PRESETS
                .iter()
                .map(|p| json!({ "name": p.name, "nodes": p.nodes, "weights": p.weights, "description": p.description }))
                .collect();
            envelope(config, json!({ "presets": list }))
        }
        Format::Csv => {
            let mut out = csv_header(config);
            out.push_str("name,nodes,weights,description\n");
            for p in &PRESETS {
                out.push_str(&format!(
                    "{},{},{},\"{}\"\n",
                    p.name,
                    p.nodes,
                    p.weights,
                    p.description.replace('"', "\"\"")
                ));
            }
            out
        }
    }
}

fn emit(config: &RunConfig, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match &config.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure {
            status: EXIT_FAILURE,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|e| Failure {
            status: EXIT_FAILURE,
            message: e.to_string(),
        }),
    }
}

fn execute(config: &RunConfig, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let mut status = EXIT_OK;
    let text = match config.command {
        "classify" => {
            let (text, report) = classify_output(config);
            if config.strict && report.has_unknown() {
                status = EXIT_UNKNOWN_VERDICT;
            }
            text
        }
        "bounds" => bounds_output(config)?,
        "spectrum" => spectrum_output(config)?,
        "apply" => apply_output(config)?,
        _ => presets_output(config),
    };
    emit(config, &text, stdout)?;
    Ok(status)
}

/// Runs a parsed command line; diagnostics go to `stderr`.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let outcome = RunConfig::from_cli(cli).and_then(|config| execute(&config, stdout));
    match outcome {
        Ok(status) => status,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message);
            failure.status
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let cli =
            Cli::try_parse_from(std::iter::once("genhilbert").chain(args.iter().copied())).unwrap();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let status = run(&cli, &mut out, &mut err);
        (
            status,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn classify_standard() {
        let (status, out, _) = run_args(&["classify", "--family", "standard", "--scan", "1000"]);
        assert_eq!(status, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["report"]["bounded"], "Yes");
        assert_eq!(v["report"]["compact"], "No");
        assert_eq!(v["report"]["range_closed"], "No");
        assert_eq!(v["config"]["scan"], 1000);
        assert!(v["version"].is_string());
    }

    #[test]
    fn strict_mode_flags_unknown() {
        let (status, _, _) = run_args(&[
            "classify", "--family", "power", "--alpha", "0.5", "--strict", "--scan", "100",
        ]);
        assert_eq!(status, EXIT_UNKNOWN_VERDICT);
        let (status, _, _) = run_args(&[
            "classify", "--family", "standard", "--strict", "--scan", "100",
        ]);
        assert_eq!(status, 0);
    }

    #[test]
    fn invalid_configs_exit_two() {
        let (status, _, err) = run_args(&["classify", "--family", "power", "--alpha", "-1"]);
        assert_eq!(status, EXIT_INVALID_CONFIG);
        assert!(err.contains("alpha"));
        let (status, _, _) = run_args(&["classify", "--family", "standard", "--alpha", "2"]);
        assert_eq!(status, EXIT_INVALID_CONFIG);
        let (status, _, _) = run_args(&[
            "spectrum",
            "--family",
            "standard",
            "--k",
            "2",
            "--schedule",
            "4,2",
        ]);
        assert_eq!(status, EXIT_INVALID_CONFIG);
        let (status, _, _) = run_args(&[
            "spectrum",
            "--family",
            "standard",
            "--schedule",
            "4,8",
            "--scan",
            "5",
        ]);
        assert_eq!(status, EXIT_INVALID_CONFIG);
        let (status, _, err) = run_args(&["classify", "--seq-file", "/nonexistent/seq.txt"]);
        assert_eq!(status, EXIT_INVALID_CONFIG);
        assert!(err.contains("cannot read"));
    }

    #[test]
    fn parser_rejects_unknown_and_conflicting_flags() {
        assert!(
            Cli::try_parse_from(["genhilbert", "classify", "--family", "standard", "--bogus"])
                .is_err()
        );
        assert!(Cli::try_parse_from(["genhilbert", "classify"]).is_err());
        assert!(Cli::try_parse_from([
            "genhilbert",
            "classify",
            "--family",
            "standard",
            "--seq-file",
            "x"
        ])
        .is_err());
        assert!(Cli::try_parse_from(["genhilbert", "classify", "--family", "nope"]).is_err());
    }

    #[test]
    fn bounds_and_presets() {
        let (status, out, _) = run_args(&[
            "bounds",
            "--family",
            "weighted-standard",
            "--k",
            "3",
            "--scan",
            "500",
            "--format",
            "csv",
        ]);
        assert_eq!(status, 0);
        assert_eq!(out.lines().count(), 2 + 3);
        let (_, out, _) = run_args(&["presets"]);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["presets"].as_array().unwrap().len(), 6);
    }
}
