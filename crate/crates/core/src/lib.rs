//! Design and exhaustive verification of shunt resistances for
//! amplitude-multiplexed series arrays of switching single-photon detectors.
//!
//! A series of current-biased detectors is read through one voltage. Each
//! detector's shunt sets how much it adds to the series resistance when it
//! switches, so the choice of shunts decides which switching states can be
//! told apart from a single measurement. The crate is organised as:
//!
//! * [`circuit`]: stationary model of the biased, loaded series;
//! * [`classes`]: which states an application needs to distinguish;
//! * [`designer`]: minimal shunt sets per application, ideal and loaded;
//! * [`verifier`]: brute-force enumeration of every in-scope state, class
//!   band separation, and voltage decoding;
//! * [`cli`]: the `shuntmux` command line, design files, reference tables.
//!
//! ```
//! use shuntmux::{design, verify, ApplicationMode, ArraySpec, CircuitParams, DesignRequest, ExtReal};
//!
//! let req = DesignRequest::new(ApplicationMode::PixelArray, 6, 2.0, 0.02, ExtReal::Infinite);
//! let d = design(&req).unwrap();
//! assert!((d.shunts[4] - 12.5).abs() < 1e-9);
//!
//! let array = ArraySpec::from_shunts(&d.shunts, req.r_n).unwrap();
//! let params = CircuitParams::from_resolution(req.delta_r, req.y).unwrap();
//! assert!(verify(&array, &params, req.mode).unwrap().pass);
//! ```

pub mod circuit;
pub mod classes;
pub mod cli;
pub mod designer;
pub mod units;
pub mod verifier;

pub use circuit::{ArraySpec, CircuitError, CircuitParams, DetectorElement, SwitchingState};
pub use classes::{class_count, classify, in_scope_states, ApplicationMode, ClassError, ClassLabel};
pub use designer::{design, DesignError, DesignRequest, DesignResult, InfeasibleCause};
pub use units::ExtReal;
pub use verifier::{decode, simulate, verify, DecodeError, DecodeResult, Decoder, VerificationReport, VerifyError};
