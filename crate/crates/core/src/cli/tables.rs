//! Reference tables and growth sweeps generated from the designer.

use serde_json::{json, Value};

use crate::classes::ApplicationMode;
use crate::designer::{design_up_to, DesignRequest};
use crate::units::ExtReal;

/// Resolution used by the reference tables (Ω).
pub const TABLE_DELTA_R: f64 = 2.0;
/// Loading used by the non-ideal reference scenarios (S).
pub const TABLE_Y: f64 = 1.0 / 50.0;
/// Finite normal resistance of scenario C (Ω).
pub const TABLE_R_N: f64 = 1000.0;

/// Reference operating conditions, all at δR = 2 Ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// `Y = 0`, `R_N = ∞`.
    A,
    /// `Y = 1/50 S`, `R_N = ∞`.
    B,
    /// `Y = 1/50 S`, `R_N = 1 kΩ`.
    C,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::A, Scenario::B, Scenario::C];

    pub fn letter(self) -> char {
        match self {
            Scenario::A => 'A',
            Scenario::B => 'B',
            Scenario::C => 'C',
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "A" | "a" => Some(Scenario::A),
            "B" | "b" => Some(Scenario::B),
            "C" | "c" => Some(Scenario::C),
            _ => None,
        }
    }

    pub fn y(self) -> f64 {
        match self {
            Scenario::A => 0.0,
            _ => TABLE_Y,
        }
    }

    pub fn r_n(self) -> ExtReal {
        match self {
            Scenario::C => ExtReal::Finite(TABLE_R_N),
            _ => ExtReal::Infinite,
        }
    }

    pub fn request(self, mode: ApplicationMode, n: usize) -> DesignRequest {
        DesignRequest::new(mode, n, TABLE_DELTA_R, self.y(), self.r_n())
    }

    fn describe(self) -> String {
        let rn = match self.r_n() {
            ExtReal::Infinite => "inf".to_string(),
            ExtReal::Finite(r) => format!("{r} Ohm"),
        };
        format!("{}: Y = {} S, R_N = {}", self.letter(), self.y(), rn)
    }
}

/// A rendered numeric table; `None` cells are infeasible.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub notes: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<(String, Vec<Option<f64>>)>,
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.2}"))
}

impl Table {
    /// Fixed-width text with two decimals and `-` for infeasible cells.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for n in &self.notes {
            out.push_str("# ");
            out.push_str(n);
            out.push('\n');
        }
        let first = self
            .rows
            .iter()
            .map(|r| r.0.len())
            .chain([self.columns[0].len()])
            .max()
            .unwrap_or(1);
        let widths: Vec<usize> = (1..self.columns.len())
            .map(|c| {
                self.rows
                    .iter()
                    .map(|r| cell(r.1[c - 1]).len())
                    .chain([self.columns[c].chars().count()])
                    .max()
                    .unwrap_or(1)
            })
            .collect();
        out.push_str(&format!("{:<first$}", self.columns[0]));
        for (c, w) in self.columns[1..].iter().zip(&widths) {
            let pad = w.saturating_sub(c.chars().count());
            out.push_str(&format!("  {}{}", " ".repeat(pad), c));
        }
        out.push('\n');
        for (k, vals) in &self.rows {
            out.push_str(&format!("{k:<first$}"));
            for (v, w) in vals.iter().zip(&widths) {
                out.push_str(&format!("  {:>w$}", cell(*v)));
            }
            out.push('\n');
        }
        out
    }

    /// CSV with two decimals and `-` for infeasible cells.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
        w.write_record(&self.columns).expect("in-memory csv");
        for (k, vals) in &self.rows {
            let mut rec = vec![k.clone()];
            rec.extend(vals.iter().map(|v| cell(*v)));
            w.write_record(&rec).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv")
    }

    /// JSON with values rounded to two decimals and `null` for infeasible cells.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|(k, vals)| {
                let mut obj = serde_json::Map::new();
                obj.insert(self.columns[0].clone(), json!(k));
                for (c, v) in self.columns[1..].iter().zip(vals) {
                    let x = v.map(|x| (x * 100.0).round() / 100.0);
                    obj.insert(c.clone(), json!(x));
                }
                Value::Object(obj)
            })
            .collect();
        json!({ "notes": self.notes, "columns": self.columns, "rows": rows })
    }
}

fn design_column(mode: ApplicationMode, scenario: Scenario, n: usize) -> Vec<Option<f64>> {
    let (design, _) = design_up_to(&scenario.request(mode, n));
    let shunts = design.map(|d| d.shunts).unwrap_or_default();
    (0..n).map(|i| shunts.get(i).copied()).collect()
}

fn scenario_header(scenarios: &[Scenario]) -> Vec<String> {
    let mut cols = vec!["k".to_string()];
    cols.extend(scenarios.iter().map(|s| format!("r_k^{}(Ohm)", s.letter())));
    cols
}

/// Pixel-array shunts for `k = 0..=24`, row 0 being the empty level.
pub fn pixel_table(scenarios: &[Scenario]) -> Table {
    const K_MAX: usize = 24;
    let cols: Vec<Vec<Option<f64>>> = scenarios
        .iter()
        .map(|&s| design_column(ApplicationMode::PixelArray, s, K_MAX))
        .collect();
    let rows = (0..=K_MAX)
        .map(|k| {
            let vals = cols
                .iter()
                .map(|c| if k == 0 { Some(0.0) } else { c[k - 1] })
                .collect();
            (k.to_string(), vals)
        })
        .collect();
    let mut notes = vec![format!(
        "single-photon pixel array shunts, dR = {TABLE_DELTA_R} Ohm"
    )];
    notes.extend(scenarios.iter().map(|s| s.describe()));
    Table {
        notes,
        columns: scenario_header(scenarios),
        rows,
    }
}

/// Two-photon coincidence shunts, rows `k = 0..=10` listing detector `k + 1`.
pub fn two_photon_table(scenarios: &[Scenario]) -> Table {
    const ROWS: usize = 11;
    let cols: Vec<Vec<Option<f64>>> = scenarios
        .iter()
        .map(|&s| design_column(ApplicationMode::Coincidence(2), s, ROWS))
        .collect();
    let rows = (0..ROWS)
        .map(|k| (k.to_string(), cols.iter().map(|c| c[k]).collect()))
        .collect();
    let mut notes = vec![
        format!("two-photon coincidence shunts, dR = {TABLE_DELTA_R} Ohm"),
        "row k lists detector k+1".to_string(),
    ];
    notes.extend(scenarios.iter().map(|s| s.describe()));
    Table {
        notes,
        columns: scenario_header(scenarios),
        rows,
    }
}

/// Summary of the design rules per application, as text rows
/// `(application, ideal, non-ideal)`.
pub fn summary_rows() -> Vec<[&'static str; 3]> {
    vec![
        ["Application", "Ideal condition", "Non-ideal condition"],
        ["Photon Number Resolving", "r_k = dR", "r_k = dR/(1 - n/m_L - dR/R_N)"],
        ["Single Photon Detection", "r_k = k*dR", "r_k = k*dR/(1 - k/m_L - k*dR/R_N)"],
        [
            "Detection of more photons",
            "r_(k+1) = sum_(l<n_c) r_(k-l) + dR",
            "r_p,(k+1) = R + dR*(1+Y*R)^2/(1 - Y*dR - Y^2*dR*R), R = sum_(l<n_c) r_p,(k-l)",
        ],
        ["Full detection", "r_k = 2^(k-1)*dR", "-"],
    ]
}

pub fn summary_text() -> String {
    let rows = summary_rows();
    let w0 = rows.iter().map(|r| r[0].len()).max().unwrap_or(0);
    let w1 = rows.iter().map(|r| r[1].len()).max().unwrap_or(0);
    let mut out = String::from("# m_L = 1/(Y*dR); R_N is the common normal resistance\n");
    for r in rows {
        out.push_str(format!("{:<w0$}  {:<w1$}  {}", r[0], r[1], r[2]).trim_end());
        out.push('\n');
    }
    out
}

pub fn summary_csv() -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
    for r in summary_rows() {
        w.write_record(r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv")
}

pub fn summary_json() -> Value {
    let rows = summary_rows();
    let body: Vec<Value> = rows[1..]
        .iter()
        .map(|r| json!({"application": r[0], "ideal": r[1], "non_ideal": r[2]}))
        .collect();
    json!({ "rows": body })
}

/// A family of designs plotted against detector index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Series {
    Pixel,
    Coincidence(u32),
    Full,
}

impl Series {
    pub fn parse(s: &str, n_c: u32) -> Option<Self> {
        match s.trim() {
            "pixel" => Some(Series::Pixel),
            "two-photon" => Some(Series::Coincidence(2)),
            "coincidence" => Some(Series::Coincidence(n_c)),
            "full" => Some(Series::Full),
            _ => None,
        }
    }

    fn mode(self) -> ApplicationMode {
        match self {
            Series::Pixel => ApplicationMode::PixelArray,
            Series::Coincidence(n_c) => ApplicationMode::Coincidence(n_c),
            Series::Full => ApplicationMode::Full,
        }
    }

    fn name(self) -> String {
        match self {
            Series::Pixel => "pixel".into(),
            Series::Coincidence(n_c) => format!("coincidence{n_c}"),
            Series::Full => "full".into(),
        }
    }
}

/// Conditions of a growth sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub series: Vec<Series>,
    pub k_min: usize,
    pub k_max: usize,
    pub delta_r: f64,
    /// Loading of the non-ideal columns.
    pub y: f64,
    /// Normal resistance of the non-ideal columns.
    pub r_n: ExtReal,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            series: vec![Series::Pixel, Series::Coincidence(2), Series::Full],
            k_min: 1,
            k_max: 24,
            delta_r: TABLE_DELTA_R,
            y: TABLE_Y,
            r_n: ExtReal::Finite(TABLE_R_N),
        }
    }
}

/// Shunt growth `r_k` vs `k`, one ideal and one non-ideal column per series
/// (full detection has no non-ideal design). Returns the header and one row
/// per `k`, `None` where the design stops being feasible.
pub fn sweep(spec: &SweepSpec) -> (Vec<String>, Vec<(usize, Vec<Option<f64>>)>) {
    let n = spec.k_max;
    let mut header = vec!["k".to_string()];
    let mut columns: Vec<Vec<Option<f64>>> = Vec::new();
    for &s in &spec.series {
        // The coincidence budget cannot exceed the array size.
        let mode = match s.mode() {
            ApplicationMode::Coincidence(n_c) => ApplicationMode::Coincidence(n_c.min(n.max(1) as u32)),
            m => m,
        };
        let mut conditions = vec![("ideal", 0.0, ExtReal::Infinite)];
        if s != Series::Full {
            conditions.push(("nonideal", spec.y, spec.r_n));
        }
        for (tag, y, r_n) in conditions {
            header.push(format!("{}_{}_ohm", s.name(), tag));
            let (design, _) = design_up_to(&DesignRequest::new(mode, n, spec.delta_r, y, r_n));
            let shunts = design.map(|d| d.shunts).unwrap_or_default();
            columns.push((0..n).map(|i| shunts.get(i).copied()).collect());
        }
    }
    let rows = (spec.k_min.max(1)..=n)
        .map(|k| (k, columns.iter().map(|c| c[k - 1]).collect()))
        .collect();
    (header, rows)
}

/// [`sweep`] as CSV: full-precision values, empty cells where infeasible.
pub fn sweep_csv(spec: &SweepSpec) -> String {
    let (header, rows) = sweep(spec);
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(vec![]);
    w.write_record(&header).expect("in-memory csv");
    for (k, vals) in rows {
        let mut rec = vec![k.to_string()];
        rec.extend(vals.iter().map(|v| v.map_or_else(String::new, |x| x.to_string())));
        w.write_record(&rec).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv")
}
