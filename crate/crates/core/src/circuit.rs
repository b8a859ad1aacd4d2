//! Stationary lumped-element model of a current-biased series of switching
//! detectors read out through a loading network.
//!
//! Each detector is a switching nanowire (normal resistance `r_n`) in parallel
//! with a shunt `r`. A switched detector contributes `r ‖ r_n`, an idle one
//! contributes nothing. The bias source and readout load the series with an
//! effective admittance `Y`, compressing the voltage to `I_b·R/(1 + Y·R)`.

use std::fmt;

use thiserror::Error;

use crate::units::ExtReal;

/// Largest array a [`SwitchingState`] can describe.
pub const MAX_DETECTORS: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("invalid circuit parameter {name} = {value}: {reason}")]
    InvalidParam {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("invalid detector element {index}: {reason}")]
    InvalidElement { index: usize, reason: String },
    #[error("an array needs at least one detector")]
    EmptyArray,
    #[error("array of {n} detectors exceeds the supported maximum of {MAX_DETECTORS}")]
    TooManyDetectors { n: usize },
    #[error("switching state has {state} bits but the array has {array} detectors")]
    LengthMismatch { state: usize, array: usize },
}

fn check(name: &'static str, value: f64, ok: bool, reason: &'static str) -> Result<(), CircuitError> {
    if ok && !value.is_nan() {
        Ok(())
    } else {
        Err(CircuitError::InvalidParam { name, value, reason })
    }
}

/// Bias and readout parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircuitParams {
    i_b: f64,
    y_b: f64,
    z_o1: f64,
    z_o2: ExtReal,
    delta_v: f64,
}

impl CircuitParams {
    /// `i_b` bias current (A), `y_b` bias-source admittance (S), `z_o1`/`z_o2`
    /// output impedances (Ω) forming the readout divider, `delta_v` the
    /// smallest output voltage difference that can be told apart (V).
    pub fn new(i_b: f64, y_b: f64, z_o1: f64, z_o2: ExtReal, delta_v: f64) -> Result<Self, CircuitError> {
        check("i_b", i_b, i_b > 0.0 && i_b.is_finite(), "must be positive and finite")?;
        check("y_b", y_b, y_b >= 0.0 && y_b.is_finite(), "must be nonnegative and finite")?;
        check("z_o1", z_o1, z_o1 >= 0.0 && z_o1.is_finite(), "must be nonnegative and finite")?;
        if let ExtReal::Finite(z) = z_o2 {
            check("z_o2", z, z > 0.0 && z.is_finite(), "must be positive")?;
        }
        check(
            "delta_v",
            delta_v,
            delta_v > 0.0 && delta_v.is_finite(),
            "must be positive and finite",
        )?;
        let p = Self {
            i_b,
            y_b,
            z_o1,
            z_o2,
            delta_v,
        };
        let dr = p.resistance_resolution();
        check("delta_r", dr, dr > 0.0 && dr.is_finite(), "derived resolution must be positive and finite")?;
        Ok(p)
    }

    /// Perfect bias and readout: no loading, unity divider.
    pub fn ideal(i_b: f64, delta_v: f64) -> Result<Self, CircuitError> {
        Self::new(i_b, 0.0, 0.0, ExtReal::Infinite, delta_v)
    }

    /// Parameters equivalent to a design stated directly in terms of the
    /// resistance resolution `delta_r` and effective admittance `y`.
    ///
    /// Uses a 1 A bias, a unity divider and `δV = δR·1 A`, so that output
    /// voltages read numerically as the compressed resistance `R/(1 + Y·R)`.
    pub fn from_resolution(delta_r: f64, y: f64) -> Result<Self, CircuitError> {
        Self::new(1.0, y, 0.0, ExtReal::Infinite, delta_r)
    }

    pub fn i_b(&self) -> f64 {
        self.i_b
    }
    pub fn y_b(&self) -> f64 {
        self.y_b
    }
    pub fn z_o1(&self) -> f64 {
        self.z_o1
    }
    pub fn z_o2(&self) -> ExtReal {
        self.z_o2
    }
    pub fn delta_v(&self) -> f64 {
        self.delta_v
    }

    /// `Y = y_b + 1/(z_o1 + z_o2)`.
    pub fn effective_admittance(&self) -> f64 {
        self.y_b + ExtReal::Finite(self.z_o1).add(self.z_o2).recip()
    }

    /// Resolution referred to the series resistance:
    /// `δR = δV·(z_o1 + z_o2)/(I_b·z_o2)`.
    pub fn resistance_resolution(&self) -> f64 {
        self.delta_v / (self.i_b * self.divider_ratio())
    }

    /// `z_o2/(z_o1 + z_o2)`; one for an open-circuit second stage.
    pub fn divider_ratio(&self) -> f64 {
        match self.z_o2 {
            ExtReal::Infinite => 1.0,
            ExtReal::Finite(z2) => z2 / (self.z_o1 + z2),
        }
    }

    /// Voltage across the series for total resistance `r`: `I_b·R/(1 + Y·R)`.
    pub fn total_voltage(&self, r: f64) -> f64 {
        self.i_b * compressed(r, self.effective_admittance())
    }

    /// Voltage seen by the readout after the output divider.
    pub fn measured_output(&self, v: f64) -> f64 {
        match self.z_o2 {
            ExtReal::Infinite => v,
            ExtReal::Finite(z2) => v * z2 / (self.z_o1 + z2),
        }
    }
}

/// `R/(1 + Y·R)`, the loaded resistance that sets the voltage.
pub fn compressed(r: f64, y: f64) -> f64 {
    r / (1.0 + y * r)
}

/// Free-function form of [`CircuitParams::effective_admittance`].
pub fn effective_admittance(params: &CircuitParams) -> f64 {
    params.effective_admittance()
}

/// Free-function form of [`CircuitParams::resistance_resolution`].
pub fn resistance_resolution(params: &CircuitParams) -> f64 {
    params.resistance_resolution()
}

/// Free-function form of [`CircuitParams::total_voltage`].
pub fn total_voltage(params: &CircuitParams, r: f64) -> f64 {
    params.total_voltage(r)
}

/// Free-function form of [`CircuitParams::measured_output`].
pub fn measured_output(params: &CircuitParams, v: f64) -> f64 {
    params.measured_output(v)
}

/// Parallel combination `a·b/(a + b)`, with `a ‖ ∞ = a`.
pub fn parallel(r: f64, r_n: ExtReal) -> f64 {
    match r_n {
        ExtReal::Infinite => r,
        ExtReal::Finite(rn) => r * rn / (r + rn),
    }
}

/// Inverse of [`parallel`]: the shunt `r` with `r ‖ r_n = r_p`. Returns `None`
/// when `r_p ≥ r_n`, which no finite shunt can reach.
pub fn shunt_for_parallel(r_p: f64, r_n: ExtReal) -> Option<f64> {
    match r_n {
        ExtReal::Infinite => Some(r_p),
        ExtReal::Finite(rn) if r_p < rn => Some(r_p * rn / (rn - r_p)),
        ExtReal::Finite(_) => None,
    }
}

/// One shunted detector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorElement {
    r: f64,
    r_n: ExtReal,
    l: f64,
}

impl DetectorElement {
    /// `r` shunt (Ω), `r_n` normal resistance (Ω), `l` inductance (H).
    ///
    /// The inductance is carried for file round-trips only; no stationary
    /// quantity depends on it.
    pub fn new(r: f64, r_n: ExtReal, l: f64) -> Result<Self, CircuitError> {
        let bad = |reason: &str| CircuitError::InvalidElement {
            index: 0,
            reason: reason.to_string(),
        };
        if !(r > 0.0 && r.is_finite()) {
            return Err(bad(&format!("shunt {r} Ω must be positive and finite")));
        }
        if let ExtReal::Finite(rn) = r_n {
            if !(rn > 0.0 && rn.is_finite()) {
                return Err(bad(&format!("normal resistance {rn} Ω must be positive")));
            }
        }
        if !(l >= 0.0 && l.is_finite()) {
            return Err(bad(&format!("inductance {l} H must be nonnegative")));
        }
        Ok(Self { r, r_n, l })
    }

    pub fn shunt(&self) -> f64 {
        self.r
    }
    pub fn normal_resistance(&self) -> ExtReal {
        self.r_n
    }
    pub fn inductance(&self) -> f64 {
        self.l
    }

    /// Contribution to the series: zero when idle, `r ‖ r_n` when switched.
    pub fn resistance(&self, switched: bool) -> f64 {
        if switched {
            parallel(self.r, self.r_n)
        } else {
            0.0
        }
    }
}

/// Free-function form of [`DetectorElement::resistance`].
pub fn detector_resistance(elem: &DetectorElement, switched: bool) -> f64 {
    elem.resistance(switched)
}

/// An ordered series of detectors, `k = 1..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArraySpec {
    elements: Vec<DetectorElement>,
}

impl ArraySpec {
    pub fn new(elements: Vec<DetectorElement>) -> Result<Self, CircuitError> {
        if elements.is_empty() {
            return Err(CircuitError::EmptyArray);
        }
        Ok(Self { elements })
    }

    /// Builds an array from shunt values sharing one normal resistance and
    /// zero inductance.
    pub fn from_shunts(shunts: &[f64], r_n: ExtReal) -> Result<Self, CircuitError> {
        let elements = shunts
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                DetectorElement::new(r, r_n, 0.0).map_err(|e| match e {
                    CircuitError::InvalidElement { reason, .. } => CircuitError::InvalidElement { index: i + 1, reason },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(elements)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[DetectorElement] {
        &self.elements
    }

    /// Detector `k`, 1-based.
    pub fn detector(&self, k: usize) -> Option<&DetectorElement> {
        k.checked_sub(1).and_then(|i| self.elements.get(i))
    }

    pub fn shunts(&self) -> Vec<f64> {
        self.elements.iter().map(|e| e.r).collect()
    }

    /// Whether shunts are nondecreasing in `k`, as every designed array is.
    pub fn is_sorted(&self) -> bool {
        self.elements.windows(2).all(|w| w[0].r <= w[1].r)
    }

    /// Total series resistance for a switching state.
    pub fn series_resistance(&self, state: &SwitchingState) -> Result<f64, CircuitError> {
        if state.len() != self.len() {
            return Err(CircuitError::LengthMismatch {
                state: state.len(),
                array: self.len(),
            });
        }
        Ok(self
            .elements
            .iter()
            .enumerate()
            .map(|(i, e)| e.resistance(state.bits >> i & 1 == 1))
            .sum())
    }

    /// Output voltage seen by the readout for a state: the divider applied to
    /// the loaded series voltage.
    pub fn output_voltage(&self, params: &CircuitParams, state: &SwitchingState) -> Result<f64, CircuitError> {
        let r = self.series_resistance(state)?;
        Ok(params.measured_output(params.total_voltage(r)))
    }
}

/// Free-function form of [`ArraySpec::series_resistance`].
pub fn series_resistance(array: &ArraySpec, state: &SwitchingState) -> Result<f64, CircuitError> {
    array.series_resistance(state)
}

/// Switch flags of an `n`-detector array.
///
/// Detector `k` (1-based) is bit `k − 1` of [`SwitchingState::bits`], so the
/// case index is the integer whose binary digits are the flags. The textual
/// form is written most significant first: `"011"` has detectors 1 and 2
/// switched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SwitchingState {
    len: u8,
    bits: u64,
}

impl SwitchingState {
    pub fn new(len: usize, bits: u64) -> Result<Self, CircuitError> {
        if len == 0 {
            return Err(CircuitError::EmptyArray);
        }
        if len > MAX_DETECTORS {
            return Err(CircuitError::TooManyDetectors { n: len });
        }
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        if bits & !mask != 0 {
            return Err(CircuitError::LengthMismatch {
                state: 64 - bits.leading_zeros() as usize,
                array: len,
            });
        }
        Ok(Self { len: len as u8, bits })
    }

    pub fn idle(len: usize) -> Result<Self, CircuitError> {
        Self::new(len, 0)
    }

    /// State with the listed 1-based detectors switched.
    pub fn from_detectors(len: usize, detectors: &[usize]) -> Result<Self, CircuitError> {
        let mut bits = 0u64;
        for &k in detectors {
            if k == 0 || k > len {
                return Err(CircuitError::InvalidElement {
                    index: k,
                    reason: format!("detector index out of range 1..={len}"),
                });
            }
            bits |= 1 << (k - 1);
        }
        Self::new(len, bits)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Whether detector `k` (1-based) is switched.
    pub fn is_switched(&self, k: usize) -> bool {
        k >= 1 && k <= self.len() && self.bits >> (k - 1) & 1 == 1
    }

    pub fn count(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Switched detectors, ascending, 1-based.
    pub fn switched(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=self.len()).filter(move |&k| self.is_switched(k))
    }
}

impl fmt::Display for SwitchingState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in (1..=self.len()).rev() {
            f.write_str(if self.is_switched(k) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for SwitchingState {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || !s.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(CircuitError::InvalidElement {
                index: 0,
                reason: format!("{s:?} is not a binary switching state"),
            });
        }
        let bits = s
            .bytes()
            .rev()
            .enumerate()
            .fold(0u64, |acc, (i, b)| acc | (((b - b'0') as u64) << i.min(63)));
        Self::new(s.len(), bits)
    }
}
