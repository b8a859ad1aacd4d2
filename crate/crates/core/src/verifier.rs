//! Exhaustive discriminability check and voltage decoding.
//!
//! The verifier does not trust the designer: it enumerates every in-scope
//! switching state, computes the voltage the readout would see, groups the
//! voltages into per-class bands and measures the distance between bands.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::{ArraySpec, CircuitError, CircuitParams, SwitchingState};
use crate::classes::{classify, in_scope_states, ApplicationMode, ClassError, ClassLabel};

/// Relative slack on δV when deciding whether a gap counts as resolved.
pub const GAP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecodeError {
    #[error("design does not separate its classes by dV (min gap {min_gap:.6e} V < {delta_v:.6e} V)")]
    AmbiguousDesign { min_gap: f64, delta_v: f64 },
    #[error("voltage {v:.6e} V lies outside [{low:.6e}, {high:.6e}] V")]
    OutOfRange { v: f64, low: f64, high: f64 },
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

/// Output voltages spanned by one class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassBand {
    pub label: ClassLabel,
    pub min: f64,
    pub max: f64,
    pub states: u64,
}

impl ClassBand {
    pub fn spread(&self) -> f64 {
        self.max - self.min
    }

    /// Distance from `v` to the band, zero inside it.
    pub fn distance(&self, v: f64) -> f64 {
        if v < self.min {
            self.min - v
        } else if v > self.max {
            v - self.max
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub mode: ApplicationMode,
    pub n: usize,
    pub delta_v: f64,
    /// Class bands in ascending voltage order.
    pub bands: Vec<ClassBand>,
    /// Smallest distance between any two bands; negative when bands overlap.
    pub min_inter_class_gap: f64,
    /// The two classes realising [`Self::min_inter_class_gap`], lower band first.
    pub worst_pair: Option<(ClassLabel, ClassLabel)>,
    pub max_intra_class_spread: f64,
    pub pass: bool,
    pub states_enumerated: u64,
}

impl VerificationReport {
    /// Minimum gap in units of δV.
    pub fn min_gap_ratio(&self) -> f64 {
        self.min_inter_class_gap / self.delta_v
    }
}

/// Output voltage for one state: series resistance, loading, then divider.
pub fn output_voltage(array: &ArraySpec, params: &CircuitParams, state: &SwitchingState) -> Result<f64, CircuitError> {
    array.output_voltage(params, state)
}

/// Enumerates every in-scope state of `array` under `mode` and checks that all
/// class bands are at least δV apart.
pub fn verify(
    array: &ArraySpec,
    params: &CircuitParams,
    mode: ApplicationMode,
) -> Result<VerificationReport, VerifyError> {
    let n = array.len();
    let states = in_scope_states(mode, n)?;
    let mut index: HashMap<ClassLabel, usize> = HashMap::new();
    let mut bands: Vec<ClassBand> = Vec::new();
    let mut enumerated = 0u64;
    for state in states {
        let label = classify(mode, &state).expect("enumerated states are in scope");
        let v = array.output_voltage(params, &state)?;
        enumerated += 1;
        match index.get(&label) {
            Some(&i) => {
                let b = &mut bands[i];
                b.min = b.min.min(v);
                b.max = b.max.max(v);
                b.states += 1;
            }
            None => {
                index.insert(label, bands.len());
                bands.push(ClassBand {
                    label,
                    min: v,
                    max: v,
                    states: 1,
                });
            }
        }
    }
    bands.sort_by(|a, b| {
        a.min
            .total_cmp(&b.min)
            .then(a.max.total_cmp(&b.max))
            .then(a.label.cmp(&b.label))
    });

    let max_intra_class_spread = bands.iter().map(ClassBand::spread).fold(0.0, f64::max);
    // Sorted by lower edge, the closest pair of intervals is always some band
    // against the highest upper edge seen below it.
    let mut min_gap = f64::INFINITY;
    let mut worst_pair = None;
    let mut reach = 0usize;
    for i in 1..bands.len() {
        let gap = bands[i].min - bands[reach].max;
        if gap < min_gap {
            min_gap = gap;
            worst_pair = Some((bands[reach].label, bands[i].label));
        }
        if bands[i].max > bands[reach].max {
            reach = i;
        }
    }
    let delta_v = params.delta_v();
    let pass = min_gap >= delta_v * (1.0 - GAP_TOLERANCE);
    Ok(VerificationReport {
        mode,
        n,
        delta_v,
        bands,
        min_inter_class_gap: min_gap,
        worst_pair,
        max_intra_class_spread,
        pass,
        states_enumerated: enumerated,
    })
}

/// Class identified from a measured voltage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodeResult {
    pub label: ClassLabel,
    /// Distance from the measurement to the nearest band of another class.
    pub margin: f64,
}

/// Nearest-band decoder for a verified design.
#[derive(Debug, Clone)]
pub struct Decoder {
    report: VerificationReport,
}

impl Decoder {
    /// Verifies the design and keeps its bands. Designs that fail
    /// verification are refused.
    pub fn new(array: &ArraySpec, params: &CircuitParams, mode: ApplicationMode) -> Result<Self, DecodeError> {
        Self::from_report(verify(array, params, mode)?)
    }

    pub fn from_report(report: VerificationReport) -> Result<Self, DecodeError> {
        if !report.pass {
            return Err(DecodeError::AmbiguousDesign {
                min_gap: report.min_inter_class_gap,
                delta_v: report.delta_v,
            });
        }
        Ok(Self { report })
    }

    pub fn report(&self) -> &VerificationReport {
        &self.report
    }

    /// Assigns `v` to the nearest class band. Voltages more than δV beyond the
    /// outermost bands are rejected.
    pub fn decode(&self, v: f64) -> Result<DecodeResult, DecodeError> {
        let bands = &self.report.bands;
        let dv = self.report.delta_v;
        let low = bands[0].min - dv;
        let high = bands[bands.len() - 1].max + dv;
        if !(low..=high).contains(&v) {
            return Err(DecodeError::OutOfRange { v, low, high });
        }
        // Bands of a passing report are disjoint and sorted, so the nearest
        // band is next to the insertion point.
        let i = bands.partition_point(|b| b.max < v);
        let mut best = i.min(bands.len() - 1);
        if i > 0 && bands[i - 1].distance(v) <= bands[best].distance(v) {
            best = i - 1;
        }
        let margin = [best.checked_sub(1), Some(best + 1)]
            .into_iter()
            .flatten()
            .filter_map(|j| bands.get(j))
            .map(|b| b.distance(v))
            .fold(f64::INFINITY, f64::min);
        Ok(DecodeResult {
            label: bands[best].label,
            margin,
        })
    }
}

/// One-shot decode: verifies the design, then decodes `v_measured`.
pub fn decode(
    array: &ArraySpec,
    params: &CircuitParams,
    mode: ApplicationMode,
    v_measured: f64,
) -> Result<DecodeResult, DecodeError> {
    Decoder::new(array, params, mode)?.decode(v_measured)
}

/// Readout voltage for `state` plus an explicit perturbation.
pub fn simulate(
    array: &ArraySpec,
    params: &CircuitParams,
    state: &SwitchingState,
    perturbation: f64,
) -> Result<f64, CircuitError> {
    Ok(array.output_voltage(params, state)? + perturbation)
}

/// Like [`simulate`], with a perturbation drawn uniformly from
/// `[−amplitude, amplitude]` by a generator seeded with `seed`.
pub fn simulate_seeded(
    array: &ArraySpec,
    params: &CircuitParams,
    state: &SwitchingState,
    amplitude: f64,
    seed: u64,
) -> Result<f64, CircuitError> {
    let a = amplitude.abs();
    let eps = if a > 0.0 {
        ChaCha8Rng::seed_from_u64(seed).gen_range(-a..=a)
    } else {
        0.0
    };
    simulate(array, params, state, eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::ExtReal;

    fn ideal_array(shunts: &[f64]) -> ArraySpec {
        ArraySpec::from_shunts(shunts, ExtReal::Infinite).unwrap()
    }

    #[test]
    fn ideal_pixel_passes_with_unit_gap() {
        let a = ideal_array(&[2.0, 4.0, 6.0, 8.0, 10.0, 12.0]);
        let p = CircuitParams::ideal(1.0, 2.0).unwrap();
        let r = verify(&a, &p, ApplicationMode::PixelArray).unwrap();
        assert!(r.pass);
        assert_eq!(r.min_inter_class_gap, 2.0);
        assert_eq!(r.states_enumerated, 7);
        assert_eq!(r.bands.len(), 7);
        assert_eq!(r.max_intra_class_spread, 0.0);
    }

    #[test]
    fn two_photon_ladder_passes() {
        let a = ideal_array(&[1.0, 2.0, 4.0, 7.0, 12.0, 20.0]);
        let p = CircuitParams::ideal(1.0, 1.0).unwrap();
        let r = verify(&a, &p, ApplicationMode::Coincidence(2)).unwrap();
        assert!(r.pass);
        assert_eq!(r.bands.len(), 22);
        assert_eq!(r.min_inter_class_gap, 1.0);
    }

    #[test]
    fn loaded_pnr_fails_at_top_count() {
        let a = ideal_array(&[1.25, 1.25]);
        let p = CircuitParams::from_resolution(1.0, 0.1).unwrap();
        let r = verify(&a, &p, ApplicationMode::Pnr).unwrap();
        assert!(!r.pass);
        assert!((r.min_inter_class_gap - 0.8889).abs() < 1e-4);
        assert_eq!(r.worst_pair, Some((ClassLabel::Count(1), ClassLabel::Count(2))));
        assert_eq!(r.max_intra_class_spread, 0.0);
    }

    #[test]
    fn overlapping_bands_report_negative_gap() {
        // Unequal shunts under PNR: count 1 spans [1, 5], count 2 is {6}.
        let a = ideal_array(&[1.0, 5.0]);
        let p = CircuitParams::ideal(1.0, 1.0).unwrap();
        let r = verify(&a, &p, ApplicationMode::Pnr).unwrap();
        assert_eq!(r.min_inter_class_gap, 1.0);
        assert_eq!(r.max_intra_class_spread, 4.0);
        let a = ideal_array(&[1.0, 5.0, 0.5]);
        let r = verify(&a, &p, ApplicationMode::Pnr).unwrap();
        assert!(r.min_inter_class_gap < 0.0);
        assert!(!r.pass);
    }

    #[test]
    fn nested_band_gap_uses_reach() {
        // Wide band [0, 10] contains nothing but a later narrow band starts at 4.
        let a = ideal_array(&[10.0, 4.0]);
        let p = CircuitParams::ideal(1.0, 1.0).unwrap();
        let r = verify(&a, &p, ApplicationMode::Pnr).unwrap();
        // count0 = {0}, count1 = [4, 10], count2 = {14}
        assert_eq!(r.min_inter_class_gap, 4.0);
    }

    #[test]
    fn decode_examples() {
        let a = ideal_array(&[2.0, 4.0, 6.0]);
        let p = CircuitParams::ideal(1.0, 2.0).unwrap();
        let d = Decoder::new(&a, &p, ApplicationMode::PixelArray).unwrap();
        let r = d.decode(4.0).unwrap();
        assert_eq!(r.label, ClassLabel::Pixel(2));
        assert_eq!(r.margin, 2.0);
        let r = d.decode(4.9).unwrap();
        assert_eq!(r.label, ClassLabel::Pixel(2));
        assert!((r.margin - 1.1).abs() < 1e-12);
        assert_eq!(d.decode(6.0).unwrap().label, ClassLabel::Pixel(3));
        let r = d.decode(0.0).unwrap();
        assert_eq!(r.label, ClassLabel::Pixel(0));
        assert_eq!(r.margin, 2.0);
        assert!(matches!(d.decode(100.0), Err(DecodeError::OutOfRange { .. })));
        assert!(matches!(d.decode(-2.5), Err(DecodeError::OutOfRange { .. })));
        assert!(d.decode(7.9).is_ok());
    }

    #[test]
    fn decode_refuses_ambiguous_design() {
        let a = ideal_array(&[1.25, 1.25]);
        let p = CircuitParams::from_resolution(1.0, 0.1).unwrap();
        assert!(matches!(
            decode(&a, &p, ApplicationMode::Pnr, 1.0),
            Err(DecodeError::AmbiguousDesign { .. })
        ));
    }

    #[test]
    fn simulate_examples() {
        let a = ideal_array(&[2.0, 4.0, 8.0]);
        let p = CircuitParams::ideal(1.0, 1.0).unwrap();
        let s: SwitchingState = "011".parse().unwrap();
        assert_eq!(simulate(&a, &p, &s, 0.0).unwrap(), 6.0);
        assert_eq!(simulate(&a, &p, &SwitchingState::idle(3).unwrap(), 0.0).unwrap(), 0.0);
        let v1 = simulate_seeded(&a, &p, &s, 0.4, 7).unwrap();
        let v2 = simulate_seeded(&a, &p, &s, 0.4, 7).unwrap();
        assert_eq!(v1, v2);
        assert!((v1 - 6.0).abs() <= 0.4);
    }

    #[test]
    fn verify_rejects_oversized_enumeration() {
        let a = ideal_array(&[1.0; 31]);
        let p = CircuitParams::ideal(1.0, 1.0).unwrap();
        assert!(matches!(
            verify(&a, &p, ApplicationMode::Full),
            Err(VerifyError::Class(ClassError::EnumerationBound { .. }))
        ));
    }
}
