//! Command-line surface: `design`, `verify`, `decode`, `table`, `sweep`.
//!
//! Exit codes: 0 success or verification pass, 1 internal error, 2 infeasible
//! design or failed verification, 3 input error, 4 decode failure.

pub mod file;
pub mod tables;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::circuit::CircuitParams;
use crate::classes::ApplicationMode;
use crate::designer::{design, DesignError, DesignRequest, DesignResult};
use crate::units::{parse_finite, parse_quantity, ExtReal, Unit};
use crate::verifier::{verify, DecodeError, Decoder, VerificationReport, VerifyError};

pub use file::{DesignFile, ParamSpec};
pub use tables::{Scenario, Series, SweepSpec, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_DECODE: i32 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: msg.into(),
        }
    }

    pub fn infeasible(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_INFEASIBLE,
            message: msg.into(),
        }
    }

    fn internal(msg: impl Into<String>) -> Self {
        Self {
            code: EXIT_INTERNAL,
            message: msg.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<DecodeError> for CliError {
    fn from(e: DecodeError) -> Self {
        match e {
            DecodeError::Verify(v) => v.into(),
            other => CliError {
                code: EXIT_DECODE,
                message: other.to_string(),
            },
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::input(format!("{}: {e}", path.display()))
}

#[derive(Debug, Parser)]
#[command(name = "shuntmux", version, about = "Shunt-resistance design for amplitude-multiplexed detector series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Design an optimal shunt set.
    Design(DesignArgs),
    /// Exhaustively check that a design file separates its classes.
    Verify(VerifyArgs),
    /// Decode a measured voltage into a class label.
    Decode(DecodeArgs),
    /// Regenerate a reference table (1: pixel array, 2: two-photon, 3: summary).
    Table(TableArgs),
    /// Shunt growth r_k against k as CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Pnr,
    Pixel,
    Coincidence,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Text,
    Csv,
    Json,
}

/// Circuit parameter flags shared by the subcommands.
#[derive(Debug, Clone, Default, Args)]
pub struct ParamArgs {
    /// Resistance resolution dR (Ω).
    #[arg(long = "delta-r", allow_hyphen_values = true)]
    pub delta_r: Option<String>,
    /// Voltage resolution dV (V); requires --ib.
    #[arg(long = "delta-v", allow_hyphen_values = true)]
    pub delta_v: Option<String>,
    /// Bias current (A).
    #[arg(long = "ib", allow_hyphen_values = true)]
    pub i_b: Option<String>,
    /// First output impedance (Ω), default 0.
    #[arg(long = "zo1", allow_hyphen_values = true)]
    pub z_o1: Option<String>,
    /// Second output impedance (Ω or inf), default inf.
    #[arg(long = "zo2", allow_hyphen_values = true)]
    pub z_o2: Option<String>,
    /// Effective bias/readout admittance Y (S).
    #[arg(long = "y", allow_hyphen_values = true)]
    pub y: Option<String>,
    /// Bias-source admittance (S); Y is derived with the output impedances.
    #[arg(long = "yb", allow_hyphen_values = true)]
    pub y_b: Option<String>,
}

fn finite_flag(v: &Option<String>, flag: &str, unit: Unit) -> Result<Option<f64>, CliError> {
    v.as_deref()
        .map(|s| parse_finite(s, unit).map_err(|e| CliError::input(format!("--{flag}: {e}"))))
        .transpose()
}

impl ParamArgs {
    pub fn spec(&self) -> Result<ParamSpec, CliError> {
        Ok(ParamSpec {
            delta_r_ohm: finite_flag(&self.delta_r, "delta-r", Unit::Ohm)?,
            delta_v_volt: finite_flag(&self.delta_v, "delta-v", Unit::Volt)?,
            i_b_ampere: finite_flag(&self.i_b, "ib", Unit::Ampere)?,
            z_o1_ohm: finite_flag(&self.z_o1, "zo1", Unit::Ohm)?,
            z_o2_ohm: self
                .z_o2
                .as_deref()
                .map(|s| parse_quantity(s, Unit::Ohm).map_err(|e| CliError::input(format!("--zo2: {e}"))))
                .transpose()?,
            y_siemens: finite_flag(&self.y, "y", Unit::Siemens)?,
            y_b_siemens: finite_flag(&self.y_b, "yb", Unit::Siemens)?,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct DesignArgs {
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    /// Number of detectors.
    #[arg(long)]
    pub n: usize,
    /// Coincidence budget n_c (coincidence mode only).
    #[arg(long)]
    pub nc: Option<u32>,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Normal resistance R_N (Ω or inf).
    #[arg(long, default_value = "inf")]
    pub rn: String,
    #[arg(long, value_enum, default_value = "text")]
    pub emit: Emit,
    /// Write the design file here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also verify the design exhaustively and fail unless it separates all classes.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Design file.
    pub file: PathBuf,
    /// Expected mode; must match the file.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Expected detector count; must match the file.
    #[arg(long)]
    pub n: Option<usize>,
    /// Expected coincidence budget; must match the file.
    #[arg(long)]
    pub nc: Option<u32>,
    /// Circuit parameters overriding those in the file.
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value = "text")]
    pub emit: Emit,
    /// List every class band.
    #[arg(long)]
    pub bands: bool,
}

#[derive(Debug, Clone, Args)]
pub struct DecodeArgs {
    /// Design file.
    pub file: PathBuf,
    /// Measured output voltage (V).
    #[arg(long = "v", allow_hyphen_values = true)]
    pub voltage: String,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value = "text")]
    pub emit: Emit,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    /// 1, 2 or 3.
    pub which: u8,
    /// Restrict to one scenario: A, B or C.
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    pub emit: Emit,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Comma-separated series: pixel, two-photon, coincidence, full.
    #[arg(long, default_value = "pixel,two-photon,full")]
    pub series: String,
    /// Budget used by the `coincidence` series.
    #[arg(long, default_value_t = 2)]
    pub nc: u32,
    #[arg(long = "k-min", default_value_t = 1)]
    pub k_min: usize,
    #[arg(long = "k-max", default_value_t = 24)]
    pub k_max: usize,
    /// Resolution dR (Ω).
    #[arg(long = "delta-r", default_value = "2")]
    pub delta_r: String,
    /// Loading of the non-ideal columns (S).
    #[arg(long, default_value = "0.02")]
    pub y: String,
    /// Normal resistance of the non-ideal columns (Ω or inf).
    #[arg(long, default_value = "1000")]
    pub rn: String,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (program name first) and runs the command, writing to the
/// given streams. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code
        }
    }
}

/// Runs a parsed command.
pub fn execute(cmd: &Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Design(a) => cmd_design(a, out, err),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Decode(a) => cmd_decode(a, out),
        Command::Table(a) => cmd_table(a, out),
        Command::Sweep(a) => cmd_sweep(a, out),
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::internal(format!("write failed: {e}")))
}

fn mode_of(mode: ModeArg, nc: Option<u32>) -> Result<ApplicationMode, CliError> {
    match (mode, nc) {
        (ModeArg::Coincidence, Some(k)) => Ok(ApplicationMode::Coincidence(k)),
        (ModeArg::Coincidence, None) => Err(CliError::input("coincidence mode needs --nc")),
        (_, Some(_)) => Err(CliError::input("--nc only applies to coincidence mode")),
        (ModeArg::Pnr, None) => Ok(ApplicationMode::Pnr),
        (ModeArg::Pixel, None) => Ok(ApplicationMode::PixelArray),
        (ModeArg::Full, None) => Ok(ApplicationMode::Full),
    }
}

fn describe_infeasible(e: &DesignError, req: &DesignRequest) -> String {
    let m_l = crate::designer::feasibility_limit(req.y, req.delta_r);
    format!(
        "{e} (n = {}, m_L = {}, R_N = {} Ohm, dR = {} Ohm, Y = {} S)",
        req.n, m_l, req.r_n, req.delta_r, req.y
    )
}

fn design_error(e: DesignError, req: &DesignRequest) -> CliError {
    match e {
        DesignError::Infeasible { .. } | DesignError::InfeasibleLevel { .. } => {
            CliError::infeasible(describe_infeasible(&e, req))
        }
        DesignError::NotSupported(_) | DesignError::InvalidRequest(_) => CliError::input(e.to_string()),
    }
}

fn design_text(d: &DesignResult, req: &DesignRequest) -> String {
    let mut s = format!(
        "# mode: {}  n: {}  dR: {} Ohm  Y: {} S  R_N: {} Ohm  m_L: {}\n",
        d.mode,
        d.n(),
        req.delta_r,
        req.y,
        req.r_n,
        d.feasible_limit
    );
    let t = Table {
        notes: vec![],
        columns: vec!["k".into(), "r_k(Ohm)".into(), "r_p,k(Ohm)".into()],
        rows: d
            .shunts
            .iter()
            .zip(&d.parallels)
            .enumerate()
            .map(|(i, (&r, &p))| ((i + 1).to_string(), vec![Some(r), Some(p)]))
            .collect(),
    };
    s.push_str(&t.to_text());
    s
}

fn design_csv(d: &DesignResult) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
    w.write_record(["k", "shunt_ohm", "parallel_ohm"]).expect("in-memory csv");
    for (i, (r, p)) in d.shunts.iter().zip(&d.parallels).enumerate() {
        w.write_record([(i + 1).to_string(), r.to_string(), p.to_string()])
            .expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv")
}

fn design_json(d: &DesignResult, req: &DesignRequest) -> String {
    let v = json!({
        "mode": d.mode.name(),
        "n_c": d.mode.coincidence_budget(),
        "n": d.n(),
        "delta_r_ohm": req.delta_r,
        "y_siemens": req.y,
        "r_n_ohm": req.r_n,
        "feasible_limit": d.feasible_limit,
        "shunts_ohm": d.shunts,
        "parallels_ohm": d.parallels,
        "levels_ohm": d.levels,
    });
    serde_json::to_string_pretty(&v).expect("json") + "\n"
}

const PNR_LOADED_NOTE: &str = "note: loaded photon-counting shunts only bring the top count onto its target level; \
lower counts sit above theirs and consecutive count gaps can fall below dV. \
Run `verify` on the design to see the actual margins.";

/// `design`: synthesizes a shunt set and prints it.
pub fn cmd_design(a: &DesignArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let mode = mode_of(a.mode, a.nc)?;
    let spec = a.params.spec()?;
    let params = spec.resolve()?;
    let r_n = parse_quantity(&a.rn, Unit::Ohm).map_err(|e| CliError::input(format!("--rn: {e}")))?;
    if a.strict && mode == ApplicationMode::Pnr {
        return Err(CliError::input(
            "--strict is not available for pnr: the photon-counting rule has no construction \
             that guarantees dV spacing under loading; design without --strict and run `verify`",
        ));
    }
    let req = DesignRequest::new(
        mode,
        a.n,
        params.resistance_resolution(),
        params.effective_admittance(),
        r_n,
    );
    let d = design(&req).map_err(|e| design_error(e, &req))?;

    if mode == ApplicationMode::Pnr && !req.is_ideal() {
        let _ = writeln!(err, "{PNR_LOADED_NOTE}");
    }
    let text = match a.emit {
        Emit::Text => design_text(&d, &req),
        Emit::Csv => design_csv(&d),
        Emit::Json => design_json(&d, &req),
    };
    write_out(out, &text)?;

    if let Some(path) = &a.out {
        let file = DesignFile::new(mode, &spec, r_n, d.shunts.clone());
        std::fs::write(path, file.render()).map_err(|e| io_err(path, e))?;
    }

    if a.strict {
        let array = crate::circuit::ArraySpec::from_shunts(&d.shunts, r_n)
            .map_err(|e| CliError::internal(e.to_string()))?;
        let report = verify(&array, &params, mode)?;
        if !report.pass {
            return Err(CliError::infeasible(format!(
                "strict: design does not separate all classes (min gap {:.6e} V = {:.4} dV between {} and {})",
                report.min_inter_class_gap,
                report.min_gap_ratio(),
                report.worst_pair.map(|p| p.0.to_string()).unwrap_or_default(),
                report.worst_pair.map(|p| p.1.to_string()).unwrap_or_default(),
            )));
        }
    }
    Ok(EXIT_OK)
}

fn load_design(path: &Path) -> Result<DesignFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    DesignFile::parse(&text)
}

fn file_context(file: &DesignFile, flags: &ParamArgs) -> Result<(ApplicationMode, crate::circuit::ArraySpec, CircuitParams), CliError> {
    let mode = file.mode()?;
    let array = file.array()?;
    let params = file.params().overlay(&flags.spec()?).resolve()?;
    Ok((mode, array, params))
}

fn report_text(r: &VerificationReport, bands: bool) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "mode: {}  n: {}  states: {}  classes: {}\n",
        r.mode,
        r.n,
        r.states_enumerated,
        r.bands.len()
    ));
    s.push_str(&format!("dV: {:.6e} V\n", r.delta_v));
    match r.worst_pair {
        Some((lo, hi)) => s.push_str(&format!(
            "min inter-class gap: {:.6} V ({:.6} dV) between {} and {}\n",
            r.min_inter_class_gap,
            r.min_gap_ratio(),
            lo,
            hi
        )),
        None => s.push_str("min inter-class gap: none (single class)\n"),
    }
    s.push_str(&format!("max intra-class spread: {:.6} V\n", r.max_intra_class_spread));
    if bands {
        s.push_str("bands:\n");
        for b in &r.bands {
            s.push_str(&format!("  {:<24} {:.9e} .. {:.9e} V ({} states)\n", b.label.to_string(), b.min, b.max, b.states));
        }
    }
    s.push_str(if r.pass { "result: PASS\n" } else { "result: FAIL\n" });
    s
}

fn report_json(r: &VerificationReport) -> String {
    let bands: Vec<_> = r
        .bands
        .iter()
        .map(|b| json!({"label": b.label.to_string(), "min_v": b.min, "max_v": b.max, "states": b.states}))
        .collect();
    let v = json!({
        "mode": r.mode.name(),
        "n_c": r.mode.coincidence_budget(),
        "n": r.n,
        "delta_v": r.delta_v,
        "states_enumerated": r.states_enumerated,
        "min_inter_class_gap": r.min_inter_class_gap,
        "min_gap_ratio": r.min_gap_ratio(),
        "worst_pair": r.worst_pair.map(|(a, b)| [a.to_string(), b.to_string()]),
        "max_intra_class_spread": r.max_intra_class_spread,
        "pass": r.pass,
        "bands": bands,
    });
    serde_json::to_string_pretty(&v).expect("json") + "\n"
}

/// `verify`: exhaustive class-separation check of a design file.
pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let file = load_design(&a.file)?;
    if let Some(n) = a.n {
        if n != file.n {
            return Err(CliError::input(format!("--n {n} does not match the design file's n = {}", file.n)));
        }
    }
    if let Some(m) = a.mode {
        let expected = mode_of(m, a.nc)?;
        if expected != file.mode()? {
            return Err(CliError::input(format!(
                "--mode {expected} does not match the design file's mode {}",
                file.mode()?
            )));
        }
    } else if a.nc.is_some() && a.nc != file.n_c {
        return Err(CliError::input("--nc does not match the design file"));
    }
    let (mode, array, params) = file_context(&file, &a.params)?;
    let report = verify(&array, &params, mode)?;
    let text = match a.emit {
        Emit::Json => report_json(&report),
        _ => report_text(&report, a.bands),
    };
    write_out(out, &text)?;
    Ok(if report.pass { EXIT_OK } else { EXIT_INFEASIBLE })
}

/// `decode`: nearest-class assignment of a measured voltage.
pub fn cmd_decode(a: &DecodeArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let file = load_design(&a.file)?;
    let (mode, array, params) = file_context(&file, &a.params)?;
    let v = parse_finite(&a.voltage, Unit::Volt).map_err(|e| CliError::input(format!("--v: {e}")))?;
    let decoder = Decoder::new(&array, &params, mode)?;
    let r = decoder.decode(v)?;
    let text = match a.emit {
        Emit::Json => {
            let detectors = r.label.detectors();
            serde_json::to_string_pretty(&json!({
                "label": r.label.to_string(),
                "detectors": detectors,
                "margin_v": r.margin,
            }))
            .expect("json")
                + "\n"
        }
        _ => format!("{}\nmargin: {:.6} V\n", r.label, r.margin),
    };
    write_out(out, &text)?;
    Ok(EXIT_OK)
}

/// `table`: regenerates a reference table.
pub fn cmd_table(a: &TableArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let scenarios: Vec<Scenario> = match &a.scenario {
        None => Scenario::ALL.to_vec(),
        Some(s) => vec![Scenario::parse(s).ok_or_else(|| CliError::input(format!("unknown scenario {s:?}; use A, B or C")))?],
    };
    let text = match a.which {
        1 | 2 => {
            let t = if a.which == 1 {
                tables::pixel_table(&scenarios)
            } else {
                tables::two_photon_table(&scenarios)
            };
            match a.emit {
                Emit::Text => t.to_text(),
                Emit::Csv => t.to_csv(),
                Emit::Json => serde_json::to_string_pretty(&t.to_json()).expect("json") + "\n",
            }
        }
        3 => {
            if a.scenario.is_some() {
                return Err(CliError::input("table 3 has no scenarios"));
            }
            match a.emit {
                Emit::Text => tables::summary_text(),
                Emit::Csv => tables::summary_csv(),
                Emit::Json => serde_json::to_string_pretty(&tables::summary_json()).expect("json") + "\n",
            }
        }
        other => return Err(CliError::input(format!("unknown table {other}; use 1, 2 or 3"))),
    };
    write_out(out, &text)?;
    Ok(EXIT_OK)
}

/// `sweep`: CSV of shunt growth for plotting.
pub fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let series = a
        .series
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| Series::parse(s, a.nc).ok_or_else(|| CliError::input(format!("unknown series {s:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if series.is_empty() {
        return Err(CliError::input("no series selected"));
    }
    if a.k_min == 0 || a.k_min > a.k_max {
        return Err(CliError::input(format!("invalid k range {}..={}", a.k_min, a.k_max)));
    }
    if a.nc == 0 {
        return Err(CliError::input("--nc must be at least 1"));
    }
    let spec = SweepSpec {
        series,
        k_min: a.k_min,
        k_max: a.k_max,
        delta_r: parse_finite(&a.delta_r, Unit::Ohm).map_err(|e| CliError::input(format!("--delta-r: {e}")))?,
        y: parse_finite(&a.y, Unit::Siemens).map_err(|e| CliError::input(format!("--y: {e}")))?,
        r_n: parse_quantity(&a.rn, Unit::Ohm).map_err(|e| CliError::input(format!("--rn: {e}")))?,
    };
    if !(spec.delta_r > 0.0) || spec.y < 0.0 {
        return Err(CliError::input("--delta-r must be positive and --y nonnegative"));
    }
    if let ExtReal::Finite(r) = spec.r_n {
        if !(r > 0.0) {
            return Err(CliError::input("--rn must be positive"));
        }
    }
    let csv = tables::sweep_csv(&spec);
    match &a.out {
        Some(path) => std::fs::write(path, csv).map_err(|e| io_err(path, e))?,
        None => write_out(out, &csv)?,
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["shuntmux"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn design_pixel_loaded() {
        let (code, out, _) = run_args(&["design", "--mode", "pixel", "--n", "6", "--delta-r", "2", "--y", "0.02", "--rn", "inf"]);
        assert_eq!(code, 0);
        for v in ["2.08", "4.35", "6.82", "9.52", "12.50", "15.79"] {
            assert!(out.contains(v), "{v} missing in\n{out}");
        }
    }

    #[test]
    fn design_pnr_prints_note() {
        let (code, out, err) = run_args(&["design", "--mode", "pnr", "--n", "24", "--delta-r", "2", "--y", "0.02", "--rn", "1600"]);
        assert_eq!(code, 0);
        assert!(out.contains("51.61"));
        assert!(err.contains("note:"));
    }

    #[test]
    fn design_full_ideal() {
        let (code, out, _) = run_args(&["design", "--mode", "full", "--n", "4", "--delta-r", "2", "--y", "0", "--emit", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out, "k,shunt_ohm,parallel_ohm\n1,2,2\n2,4,4\n3,8,8\n4,16,16\n");
    }

    #[test]
    fn design_errors_map_to_exit_codes() {
        let (code, _, err) = run_args(&["design", "--mode", "pixel", "--n", "24", "--delta-r", "2", "--y", "0.02", "--rn", "1k"]);
        assert_eq!(code, EXIT_INFEASIBLE);
        assert!(err.contains("R_N"), "{err}");
        assert!(err.contains("at most 23"), "{err}");
        let (code, _, _) = run_args(&["design", "--mode", "full", "--n", "3", "--delta-r", "2", "--y", "0.02"]);
        assert_eq!(code, EXIT_INPUT);
        let (code, _, _) = run_args(&["design", "--mode", "pixel", "--n", "3", "--y", "0"]);
        assert_eq!(code, EXIT_INPUT);
        let (code, _, _) = run_args(&["design", "--mode", "pixel", "--n", "3", "--delta-r", "2", "--delta-v", "1", "--ib", "1", "--y", "0"]);
        assert_eq!(code, EXIT_INPUT);
        let (code, _, _) = run_args(&["design", "--mode", "coincidence", "--n", "3", "--delta-r", "2", "--y", "0"]);
        assert_eq!(code, EXIT_INPUT);
        let (code, _, _) = run_args(&["design", "--mode", "pnr", "--n", "3", "--delta-r", "2", "--y", "0", "--strict"]);
        assert_eq!(code, EXIT_INPUT);
        let (code, _, _) = run_args(&["design", "--bogus"]);
        assert_eq!(code, EXIT_INPUT);
    }

    #[test]
    fn strict_design_passes_for_pixel() {
        let (code, _, err) = run_args(&["design", "--mode", "pixel", "--n", "10", "--delta-r", "2", "--y", "0.02", "--rn", "1000", "--strict"]);
        assert_eq!(code, 0, "{err}");
    }

    #[test]
    fn physical_params_design() {
        // dR = 20 µV / 10 µA = 2 Ω, Y = y_b = 0.02 S.
        let (code, out, err) = run_args(&[
            "design", "--mode", "pixel", "--n", "5", "--delta-v", "20uV", "--ib", "10uA", "--yb", "20mS",
        ]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("12.50"));
    }

    #[test]
    fn tables_and_sweep() {
        let (code, out, _) = run_args(&["table", "1", "--scenario", "C"]);
        assert_eq!(code, 0);
        assert!(out.contains("578.95"));
        let (code, _, _) = run_args(&["table", "4"]);
        assert_eq!(code, EXIT_INPUT);
        let (code, _, _) = run_args(&["table", "3", "--scenario", "A"]);
        assert_eq!(code, EXIT_INPUT);
        let (code, out, _) = run_args(&["sweep", "--series", "full", "--k-max", "4"]);
        assert_eq!(code, 0);
        assert_eq!(out, "k,full_ideal_ohm\n1,2\n2,4\n3,8\n4,16\n");
        let (code, _, _) = run_args(&["sweep", "--series", "bogus"]);
        assert_eq!(code, EXIT_INPUT);
    }
}
