//! The `qcap` command line.
//!
//! Exit codes: 0 success, 1 a reference comparison out of tolerance, 2 the
//! command line or an input file could not be parsed, 3 input parsed but is
//! invalid, 4 a numerical procedure failed, 5 file I/O failed.

use std::ffi::OsString;
use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use crate::base::LogBase;
use crate::dmc::{capacity, Dmc, DmcFile, InputDistribution};
use crate::error::Error;
use crate::holevo::{holevo_chi, maximize_holevo, DEFAULT_TOLERANCE};
use crate::photon::{emit_curve, grid, CurveKind};
use crate::qstate::{density_from_ket, CMatrix, Complex, DensityMatrix, Ket, SignalEnsemble};
use crate::receivers::{
    helstrom_binary, measure_channel, pair_signals, polarization_filter, povm_binary_erasure,
    sample_outcomes, square_root_measurement, trine_povm_orthogonal, trine_povm_parallel,
    trine_states, Receiver, SignalSet, SAMPLER_RNG,
};
use crate::report::{format_value, reproduce, ResultEntry, RunReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;
pub const EXIT_IO: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "qcap", version, about = "Shannon and von Neumann capacities of quantum-state signaling schemes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recompute every reference scenario and compare with the expected values.
    Reproduce {
        /// Print the run report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Capacity of a discrete memoryless channel read from a JSON file.
    Dmc {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = LogBase::Bits)]
        base: LogBase,
        #[arg(long)]
        json: bool,
    },
    /// Holevo capacity of a signal ensemble (kets or density matrices) from a JSON file.
    Holevo {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = LogBase::Bits)]
        base: LogBase,
        #[arg(long)]
        json: bool,
    },
    /// Channel induced by one of the built-in receivers.
    Receiver {
        #[arg(value_enum)]
        kind: ReceiverKind,
        /// Polarization angle of the second signal in degrees (binary receivers).
        #[arg(long, default_value_t = 45.0)]
        angle: f64,
        /// Filter angle in degrees (filter receiver).
        #[arg(long, default_value_t = 0.0)]
        filter: f64,
        /// Monte Carlo draws per input symbol.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = LogBase::Bits)]
        base: LogBase,
        #[arg(long)]
        json: bool,
    },
    /// Tabulate a photon-efficiency curve as CSV.
    Curve {
        #[arg(value_enum)]
        kind: CurveKind,
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        /// Logarithmic spacing.
        #[arg(long)]
        log: bool,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReceiverKind {
    /// Projective polarization filter on signals at 0° and `--angle`.
    Filter,
    /// Minimum-error binary receiver.
    Helstrom,
    /// Unambiguous discrimination with an inconclusive outcome.
    Erasure,
    /// Trine signals, POVM along the signals.
    TrineParallel,
    /// Trine signals, POVM orthogonal to the signals.
    TrineOrthogonal,
    /// Two of the three trine signals with the minimum-error receiver.
    TrineBinary,
    /// Trine photon pairs with the square-root measurement.
    PairSrm,
}

/// Why a command stopped; maps onto the exit code.
#[derive(Debug)]
pub enum Failure {
    Parse(String),
    Invalid(Error),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Invalid(e) if e.is_numerical() => EXIT_NUMERICAL,
            Failure::Invalid(_) => EXIT_VALIDATION,
            Failure::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Parse(m) => write!(f, "parse error: {m}"),
            Failure::Invalid(e) if e.is_numerical() => write!(f, "numerical failure: {e}"),
            Failure::Invalid(e) => write!(f, "invalid input: {e}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e)
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_PARSE
                }
            };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "qcap: {f}");
            f.exit_code()
        }
    }
}

pub fn execute(cmd: Command, out: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Reproduce { json } => cmd_reproduce(json, out),
        Command::Dmc { file, base, json } => {
            let report = cmd_dmc(&file, base)?;
            emit(&report, json, out)
        }
        Command::Holevo { file, base, json } => {
            let report = cmd_holevo(&file, base)?;
            emit(&report, json, out)
        }
        Command::Receiver { kind, angle, filter, samples, seed, base, json } => {
            let (report, text) = cmd_receiver(kind, angle, filter, samples, seed, base)?;
            if json {
                emit(&report, true, out)
            } else {
                write_out(out, &text)?;
                Ok(EXIT_OK)
            }
        }
        Command::Curve { kind, from, to, points, log, out: path } => {
            let csv = cmd_curve(kind, from, to, points, log)?;
            match path {
                Some(p) => std::fs::write(&p, csv)
                    .map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?,
                None => write_out(out, &csv)?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn write_out(out: &mut dyn Write, s: &str) -> std::result::Result<(), Failure> {
    out.write_all(s.as_bytes())
        .map_err(|e| Failure::Io(format!("stdout: {e}")))
}

fn emit(report: &RunReport, json: bool, out: &mut dyn Write) -> CmdResult {
    if json {
        write_out(out, &report.to_json())?;
        write_out(out, "\n")?;
    } else {
        write_out(out, &report.to_table())?;
    }
    Ok(if report.all_pass() { EXIT_OK } else { EXIT_TOLERANCE })
}

pub fn cmd_reproduce(json: bool, out: &mut dyn Write) -> CmdResult {
    let report = reproduce()?;
    let code = emit(&report, json, out)?;
    if !json {
        let total = report.results.len();
        let failed: Vec<&str> = report.failures().map(|r| r.name.as_str()).collect();
        let mut summary = format!("{}/{total} scenarios within tolerance\n", total - failed.len());
        if !failed.is_empty() {
            summary.push_str(&format!("failed: {}\n", failed.join(", ")));
        }
        write_out(out, &summary)?;
    }
    Ok(code)
}

fn read_file(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, path: &Path) -> std::result::Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

pub fn cmd_dmc(path: &Path, base: LogBase) -> std::result::Result<RunReport, Failure> {
    let raw: DmcFile = parse_json(&read_file(path)?, path)?;
    let ch = Dmc::try_from(raw)?;
    let c = capacity(&ch, base)?;
    let mut r = RunReport::new("dmc", json!({"file": path.display().to_string(), "base": base}));
    r.push(ResultEntry::new("capacity", c.capacity, base.unit()));
    for (label, q) in ch.input_labels().iter().zip(c.optimal_input.probs()) {
        r.push(ResultEntry::new(format!("Q({label})"), *q, "prob"));
    }
    r.push(ResultEntry::new("certified_gap", c.gap, base.unit()));
    r.push(ResultEntry::new("iterations", c.iterations as f64, "count"));
    Ok(r)
}

/// Ensemble file: pure states as kets or general states as density matrices,
/// with optional priors and labels.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum EnsembleFile {
    Kets {
        #[serde(default)]
        labels: Option<Vec<String>>,
        #[serde(default)]
        priors: Option<Vec<f64>>,
        states: Vec<Vec<Complex>>,
    },
    Densities {
        #[serde(default)]
        labels: Option<Vec<String>>,
        #[serde(default)]
        priors: Option<Vec<f64>>,
        states: Vec<Vec<Vec<Complex>>>,
    },
}

pub fn cmd_holevo(path: &Path, base: LogBase) -> std::result::Result<RunReport, Failure> {
    let raw: EnsembleFile = parse_json(&read_file(path)?, path)?;
    let (labels, priors, states) = match raw {
        EnsembleFile::Kets { labels, priors, states } => {
            let kets = states.into_iter().map(Ket::new).collect::<crate::Result<Vec<_>>>()?;
            (labels, priors, kets.iter().map(density_from_ket).collect::<Vec<_>>())
        }
        EnsembleFile::Densities { labels, priors, states } => {
            let rho = states
                .into_iter()
                .map(|rows| CMatrix::from_rows(rows).and_then(DensityMatrix::new))
                .collect::<crate::Result<Vec<_>>>()?;
            (labels, priors, rho)
        }
    };
    let labels = labels.unwrap_or_else(|| (0..states.len()).map(|i| format!("s{i}")).collect());
    if labels.len() != states.len() {
        return Err(Error::DimensionMismatch { expected: states.len(), found: labels.len() }.into());
    }
    let mut r = RunReport::new(
        "holevo",
        json!({"file": path.display().to_string(), "base": base, "priors": priors}),
    );
    if let Some(p) = &priors {
        let e = SignalEnsemble::new(p.clone(), states.clone())?;
        r.push(ResultEntry::new("chi_at_given_priors", holevo_chi(&e, base), base.unit()));
    }
    let h = maximize_holevo(&states, base, DEFAULT_TOLERANCE)?;
    r.push(ResultEntry::new("capacity", h.capacity, base.unit()));
    r.push(ResultEntry::new("chi_at_uniform", h.chi_at_uniform, base.unit()));
    for (label, q) in labels.iter().zip(h.optimal_priors.probs()) {
        r.push(ResultEntry::new(format!("q({label})"), *q, "prob"));
    }
    r.push(ResultEntry::new("certified_gap", h.gap, base.unit()));
    Ok(r)
}

fn build_receiver(kind: ReceiverKind, angle_deg: f64, filter_deg: f64) -> crate::Result<(SignalSet, Receiver)> {
    if !angle_deg.is_finite() || !filter_deg.is_finite() {
        return Err(Error::Domain("angles must be finite".into()));
    }
    let rad = |d: f64| d * PI / 180.0;
    let binary = || SignalSet::from_angles(&[0.0, rad(angle_deg)]);
    let measured = |signals: SignalSet, povm| -> crate::Result<(SignalSet, Receiver)> {
        let channel = measure_channel(&signals, &povm)?;
        Ok((signals, Receiver { povm, channel }))
    };
    match kind {
        ReceiverKind::Filter => measured(binary()?, polarization_filter(rad(filter_deg))),
        ReceiverKind::Helstrom => {
            let s = binary()?;
            let r = helstrom_binary(&s.states()[0], &s.states()[1])?;
            Ok((s, r))
        }
        ReceiverKind::Erasure => {
            let s = binary()?;
            let r = povm_binary_erasure(&s.states()[0], &s.states()[1])?;
            Ok((s, r))
        }
        ReceiverKind::TrineParallel => measured(trine_states(), trine_povm_parallel()),
        ReceiverKind::TrineOrthogonal => measured(trine_states(), trine_povm_orthogonal()),
        ReceiverKind::TrineBinary => {
            let s = trine_states().subset(&[0, 1])?;
            let r = helstrom_binary(&s.states()[0], &s.states()[1])?;
            Ok((s, r))
        }
        ReceiverKind::PairSrm => {
            let s = pair_signals(&trine_states())?;
            let povm = square_root_measurement(&s, &InputDistribution::uniform(s.len()))?;
            measured(s, povm)
        }
    }
}

fn kind_name(kind: ReceiverKind) -> String {
    kind.to_possible_value().expect("no skipped variants").get_name().to_string()
}

pub fn cmd_receiver(
    kind: ReceiverKind,
    angle_deg: f64,
    filter_deg: f64,
    samples: Option<u64>,
    seed: u64,
    base: LogBase,
) -> std::result::Result<(RunReport, String), Failure> {
    let (signals, rx) = build_receiver(kind, angle_deg, filter_deg)?;
    let ch = &rx.channel;
    let c = capacity(ch, base)?;
    let rho: Vec<_> = signals.states().iter().map(density_from_ket).collect();
    let bound = maximize_holevo(&rho, base, DEFAULT_TOLERANCE)?;

    let name = kind_name(kind);
    let mut r = RunReport::new(
        format!("receiver:{name}"),
        json!({"kind": name, "angle_deg": angle_deg, "filter_deg": filter_deg, "samples": samples, "base": base}),
    );
    let mut text = format!("receiver: {name}\n");
    let width = ch.output_labels().iter().map(String::len).max().unwrap_or(1).max(6);
    let in_width = ch.input_labels().iter().map(String::len).max().unwrap_or(1);
    text.push_str(&format!("{:in_width$}", ""));
    for o in ch.output_labels() {
        text.push_str(&format!("  {o:>width$}"));
    }
    text.push('\n');
    for (k, label) in ch.input_labels().iter().enumerate() {
        text.push_str(&format!("{label:in_width$}"));
        for (j, o) in ch.output_labels().iter().enumerate() {
            let p = ch.get(k, j);
            text.push_str(&format!("  {:>width$.4}", p));
            r.push(ResultEntry::new(format!("P({o}|{label})"), p, "prob"));
        }
        text.push('\n');
    }
    let unit = base.unit();
    text.push_str(&format!("capacity: {} {unit}\n", format_value(c.capacity)));
    let q: Vec<String> = c.optimal_input.probs().iter().map(|p| format!("{p:.4}")).collect();
    text.push_str(&format!("optimal input: {}\n", q.join(" ")));
    text.push_str(&format!("holevo bound: {} {unit}\n", format_value(bound.capacity)));
    r.push(ResultEntry::new("capacity", c.capacity, unit));
    for (label, p) in ch.input_labels().iter().zip(c.optimal_input.probs()) {
        r.push(ResultEntry::new(format!("Q({label})"), *p, "prob"));
    }
    r.push(ResultEntry::new("holevo_bound", bound.capacity, unit));

    if let Some(n) = samples {
        r.seed = Some(seed);
        text.push_str(&format!("monte carlo: {n} draws per input, {SAMPLER_RNG} seed {seed}\n"));
        for k in 0..ch.num_inputs() {
            // one independent stream per input symbol
            let h = sample_outcomes(ch, k, n, seed.wrapping_add(k as u64))?;
            let label = &ch.input_labels()[k];
            text.push_str(&format!("{label:in_width$}"));
            for (j, f) in h.frequencies().iter().enumerate() {
                text.push_str(&format!("  {:>width$.4}", f));
                r.push(ResultEntry::new(format!("freq({}|{label})", ch.output_labels()[j]), *f, "prob"));
            }
            text.push('\n');
        }
    }
    Ok((r, text))
}

pub fn cmd_curve(kind: CurveKind, from: f64, to: f64, points: usize, log: bool) -> std::result::Result<String, Failure> {
    let g = grid(from, to, points, log)?;
    Ok(emit_curve(kind, &g)?.to_csv())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("qcap").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn temp_json(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn dmc_command() {
        let f = temp_json(r#"{"inputs":["0","1"],"outputs":["0","1"],"P":[[1,0],[0.5,0.5]]}"#);
        let (code, out, _) = run_args(&["dmc", f.path().to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(out.contains("capacity") && out.contains("0.3219 bit"), "{out}");
        assert!(out.contains("0.6000") && out.contains("0.4000"));
    }

    #[test]
    fn dmc_exit_codes() {
        let bad = temp_json(r#"{"inputs":["0","1"],"outputs":["0","1"],"P":[[1,0],[0.5,0.4]]}"#);
        let (code, _, err) = run_args(&["dmc", bad.path().to_str().unwrap()]);
        assert_eq!(code, EXIT_VALIDATION);
        assert!(err.contains("row 1"), "{err}");
        let garbage = temp_json("{not json");
        assert_eq!(run_args(&["dmc", garbage.path().to_str().unwrap()]).0, EXIT_PARSE);
        assert_eq!(run_args(&["dmc", "/nonexistent/qcap.json"]).0, EXIT_IO);
        assert_eq!(run_args(&["dmc"]).0, EXIT_PARSE);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_PARSE);
    }

    #[test]
    fn holevo_command() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let kets = format!(r#"{{"states":[[[1,0],[0,0]],[[{h},0],[{h},0]]]}}"#);
        let (code, out, _) = run_args(&["holevo", temp_json(&kets).path().to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(out.contains("capacity") && out.contains("0.6009"), "{out}");

        let rho = r#"{"priors":[0.5,0.5],"states":[[[[0.9,0],[0,0]],[[0,0],[0.1,0]]],[[[0.1,0],[0,0]],[[0,0],[0.9,0]]]]}"#;
        let (code, out, _) = run_args(&["holevo", temp_json(rho).path().to_str().unwrap(), "--json"]);
        assert_eq!(code, 0);
        let r = RunReport::from_json(&out).unwrap();
        assert!((r.get("capacity").unwrap().value - 0.531).abs() < 1e-3);
        assert!(r.get("chi_at_given_priors").is_some());

        let unnormalized = r#"{"states":[[[1,0],[1,0]],[[0,0],[1,0]]]}"#;
        assert_eq!(run_args(&["holevo", temp_json(unnormalized).path().to_str().unwrap()]).0, EXIT_VALIDATION);
        assert_eq!(run_args(&["holevo", temp_json(r#"{"states":3}"#).path().to_str().unwrap()]).0, EXIT_PARSE);
    }

    #[test]
    fn receiver_command() {
        let (code, out, _) = run_args(&["receiver", "trine-orthogonal"]);
        assert_eq!(code, 0);
        assert!(out.contains("capacity: 0.5850 bit"), "{out}");
        let (_, out, _) = run_args(&["receiver", "filter"]);
        assert!(out.contains("capacity: 0.3219 bit"), "{out}");
        let (_, out, _) = run_args(&["receiver", "helstrom", "--angle", "90"]);
        assert!(out.contains("capacity: 1.0000 bit"), "{out}");
        let (code, _, err) = run_args(&["receiver", "erasure", "--angle", "0"]);
        assert_eq!(code, EXIT_VALIDATION);
        assert!(err.contains("identical"));
    }

    #[test]
    fn receiver_sampling_is_deterministic() {
        let a = run_args(&["receiver", "helstrom", "--samples", "2000", "--seed", "9"]);
        let b = run_args(&["receiver", "helstrom", "--samples", "2000", "--seed", "9"]);
        assert_eq!(a, b);
        assert!(a.1.contains("ChaCha8Rng seed 9"));
        let (_, out, _) = run_args(&["receiver", "helstrom", "--samples", "100", "--seed", "9", "--json"]);
        assert_eq!(RunReport::from_json(&out).unwrap().seed, Some(9));
    }

    #[test]
    fn curve_command() {
        let (code, out, _) = run_args(&["curve", "fig8", "--from", "0.01", "--to", "5", "--points", "20"]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        assert_eq!(lines.next().unwrap(), "m,p,q,capacity_nats,nats_per_photon");
        let first: Vec<f64> = lines.next().unwrap().split(',').map(|s| s.parse().unwrap()).collect();
        assert!((first[4] - 1.0).abs() < 0.01);
        assert_eq!(out.lines().count(), 21);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fig7.csv");
        let (code, out, _) = run_args(&[
            "curve", "fig7", "--from", "1.5", "--to", "1e4", "--points", "30", "--log", "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        assert!(out.is_empty());
        let csv = std::fs::read_to_string(&path).unwrap();
        assert!(csv.starts_with("x,capacity_nats,q_on,cost_per_bit\n1.5,"));

        assert_eq!(run_args(&["curve", "fig7", "--from", "0.5", "--to", "2", "--points", "3"]).0, EXIT_VALIDATION);
        assert_eq!(run_args(&["curve", "fig9", "--from", "1", "--to", "2"]).0, EXIT_PARSE);
        let blocked = dir.path().join("missing").join("x.csv");
        let (code, _, _) = run_args(&[
            "curve", "fig8", "--from", "0.1", "--to", "1", "--out", blocked.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_IO);
    }

    #[test]
    fn reproduce_command() {
        let (code, out, _) = run_args(&["reproduce"]);
        assert_eq!(code, 0, "{out}");
        let first = out.lines().next().unwrap();
        assert!(first.starts_with("fig1_z_channel") && first.contains("computed     0.3219") && first.ends_with("pass"));
        assert!(out.contains("fig5_pair_CN_total") && out.trim_end().ends_with("scenarios within tolerance"));
        let (code, json, _) = run_args(&["reproduce", "--json"]);
        assert_eq!(code, 0);
        assert!(RunReport::from_json(&json).unwrap().all_pass());
    }

    #[test]
    fn help_and_version_exit_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        for sub in ["reproduce", "dmc", "holevo", "receiver", "curve"] {
            assert!(out.contains(sub));
        }
        assert_eq!(run_args(&["--version"]).0, 0);
    }

    #[test]
    fn numerical_failures_map_to_exit_four() {
        let f = Failure::Invalid(Error::IllConditioned(1e12));
        assert_eq!(f.exit_code(), EXIT_NUMERICAL);
        assert_eq!(Failure::Invalid(Error::IdenticalSignals).exit_code(), EXIT_VALIDATION);
    }
}
