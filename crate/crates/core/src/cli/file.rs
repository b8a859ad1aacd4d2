//! Design files and circuit-parameter resolution.
//!
//! A design file is a flat TOML document:
//!
//! ```toml
//! mode = "pixel"
//! n = 3
//! delta_r_ohm = 2.0
//! y_siemens = 0.02
//! r_n_ohm = "inf"
//! shunts_ohm = [2.0833333333333335, 4.3478260869565215, 6.818181818181818]
//! ```
//!
//! The resolution is given either directly (`delta_r_ohm`) or physically
//! (`delta_v_volt` with `i_b_ampere`), and the loading either directly
//! (`y_siemens`) or as a bias admittance `y_b_siemens`; `z_o1_ohm` and
//! `z_o2_ohm` describe the output divider and default to `0` and `"inf"`.

use serde::{Deserialize, Serialize};

use crate::circuit::{ArraySpec, CircuitParams, DetectorElement};
use crate::classes::ApplicationMode;
use crate::units::ExtReal;

use super::CliError;

/// How the bias and readout are described, before resolution into
/// [`CircuitParams`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ParamSpec {
    pub delta_r_ohm: Option<f64>,
    pub delta_v_volt: Option<f64>,
    pub i_b_ampere: Option<f64>,
    pub z_o1_ohm: Option<f64>,
    pub z_o2_ohm: Option<ExtReal>,
    pub y_siemens: Option<f64>,
    pub y_b_siemens: Option<f64>,
}

impl ParamSpec {
    fn has_resolution(&self) -> bool {
        self.delta_r_ohm.is_some() || self.delta_v_volt.is_some() || self.i_b_ampere.is_some()
    }

    fn has_admittance(&self) -> bool {
        self.y_siemens.is_some() || self.y_b_siemens.is_some()
    }

    /// Overlays `other` on `self`. Each group (resolution, admittance) is
    /// replaced wholesale when `other` names any of its members; divider
    /// impedances override one by one.
    pub fn overlay(&self, other: &ParamSpec) -> ParamSpec {
        let mut out = *self;
        if other.has_resolution() {
            out.delta_r_ohm = other.delta_r_ohm;
            out.delta_v_volt = other.delta_v_volt;
            out.i_b_ampere = other.i_b_ampere;
        }
        if other.has_admittance() {
            out.y_siemens = other.y_siemens;
            out.y_b_siemens = other.y_b_siemens;
        }
        if other.z_o1_ohm.is_some() {
            out.z_o1_ohm = other.z_o1_ohm;
        }
        if other.z_o2_ohm.is_some() {
            out.z_o2_ohm = other.z_o2_ohm;
        }
        out
    }

    /// Resolves the description into circuit parameters.
    ///
    /// A directly given δR is realised with a 1 A bias (when no bias current
    /// is given) and `δV = δR·I_b·z_o2/(z_o1 + z_o2)`; a directly given `Y`
    /// fixes `y_b = Y − 1/(z_o1 + z_o2)`.
    pub fn resolve(&self) -> Result<CircuitParams, CliError> {
        let z_o1 = self.z_o1_ohm.unwrap_or(0.0);
        let z_o2 = self.z_o2_ohm.unwrap_or(ExtReal::Infinite);
        let divider = match z_o2 {
            ExtReal::Infinite => 1.0,
            ExtReal::Finite(z2) => z2 / (z_o1 + z2),
        };
        let (i_b, delta_v) = match (self.delta_r_ohm, self.delta_v_volt, self.i_b_ampere) {
            (Some(_), Some(_), _) => {
                return Err(CliError::input(
                    "give the resolution either as delta-r or as delta-v with ib, not both",
                ))
            }
            (Some(dr), None, ib) => {
                let ib = ib.unwrap_or(1.0);
                (ib, dr * ib * divider)
            }
            (None, Some(dv), Some(ib)) => (ib, dv),
            (None, Some(_), None) => return Err(CliError::input("delta-v needs a bias current (ib)")),
            (None, None, _) => return Err(CliError::input("missing resolution: give delta-r or delta-v with ib")),
        };
        let y_b = match (self.y_siemens, self.y_b_siemens) {
            (Some(_), Some(_)) => return Err(CliError::input("give the loading either as y or as yb, not both")),
            (Some(y), None) => {
                let y_b = y - ExtReal::Finite(z_o1).add(z_o2).recip();
                if y_b < -1e-15 * y.abs().max(1.0) {
                    return Err(CliError::input(format!(
                        "y = {y} S is below the divider's own admittance; use yb instead"
                    )));
                }
                y_b.max(0.0)
            }
            (None, Some(yb)) => yb,
            (None, None) => return Err(CliError::input("missing loading: give y or yb")),
        };
        CircuitParams::new(i_b, y_b, z_o1, z_o2, delta_v).map_err(|e| CliError::input(e.to_string()))
    }
}

/// Serialized form of a designed array together with the conditions it was
/// designed for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignFile {
    pub mode: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_c: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_r_ohm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_v_volt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i_b_ampere: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_o1_ohm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_o2_ohm: Option<ExtReal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_siemens: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_b_siemens: Option<f64>,
    pub r_n_ohm: ExtReal,
    pub shunts_ohm: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inductance_henry: Option<Vec<f64>>,
}

impl DesignFile {
    pub fn new(mode: ApplicationMode, params: &ParamSpec, r_n: ExtReal, shunts: Vec<f64>) -> Self {
        let mut f = DesignFile {
            mode: mode.name().to_string(),
            n: shunts.len(),
            n_c: mode.coincidence_budget(),
            delta_r_ohm: None,
            delta_v_volt: None,
            i_b_ampere: None,
            z_o1_ohm: None,
            z_o2_ohm: None,
            y_siemens: None,
            y_b_siemens: None,
            r_n_ohm: r_n,
            shunts_ohm: shunts,
            inductance_henry: None,
        };
        f.set_params(params);
        f
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: DesignFile = toml::from_str(text).map_err(|e| CliError::input(format!("design file: {e}")))?;
        file.check()?;
        Ok(file)
    }

    pub fn params(&self) -> ParamSpec {
        ParamSpec {
            delta_r_ohm: self.delta_r_ohm,
            delta_v_volt: self.delta_v_volt,
            i_b_ampere: self.i_b_ampere,
            z_o1_ohm: self.z_o1_ohm,
            z_o2_ohm: self.z_o2_ohm,
            y_siemens: self.y_siemens,
            y_b_siemens: self.y_b_siemens,
        }
    }

    pub fn set_params(&mut self, p: &ParamSpec) {
        self.delta_r_ohm = p.delta_r_ohm;
        self.delta_v_volt = p.delta_v_volt;
        self.i_b_ampere = p.i_b_ampere;
        self.z_o1_ohm = p.z_o1_ohm;
        self.z_o2_ohm = p.z_o2_ohm;
        self.y_siemens = p.y_siemens;
        self.y_b_siemens = p.y_b_siemens;
    }

    pub fn render(&self) -> String {
        toml::to_string(self).expect("design files always serialize")
    }

    fn check(&self) -> Result<(), CliError> {
        self.mode()?;
        if self.shunts_ohm.len() != self.n {
            return Err(CliError::input(format!(
                "design file lists {} shunts but n = {}",
                self.shunts_ohm.len(),
                self.n
            )));
        }
        if let Some(l) = &self.inductance_henry {
            if l.len() != self.n {
                return Err(CliError::input(format!(
                    "design file lists {} inductances but n = {}",
                    l.len(),
                    self.n
                )));
            }
        }
        Ok(())
    }

    pub fn mode(&self) -> Result<ApplicationMode, CliError> {
        let mode = ApplicationMode::from_name(&self.mode, self.n_c).ok_or_else(|| {
            CliError::input(format!(
                "unknown mode {:?} (expected pnr, pixel, full, or coincidence with n_c)",
                self.mode
            ))
        })?;
        mode.validate(self.n).map_err(|e| CliError::input(e.to_string()))?;
        Ok(mode)
    }

    pub fn array(&self) -> Result<ArraySpec, CliError> {
        let elements = self
            .shunts_ohm
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let l = self.inductance_henry.as_ref().map_or(0.0, |l| l[i]);
                DetectorElement::new(r, self.r_n_ohm, l)
                    .map_err(|e| CliError::input(format!("detector {}: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        ArraySpec::new(elements).map_err(|e| CliError::input(e.to_string()))
    }
}
