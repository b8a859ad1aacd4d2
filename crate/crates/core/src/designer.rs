//! Synthesis of minimal shunt-resistance sets.
//!
//! Every design spaces the readout levels of the classes that must be told
//! apart by exactly one resistance resolution after voltage compression:
//! with `f(R) = R/(1 + Y·R)`, consecutive target levels satisfy
//! `f(R_next) − f(R_prev) = δR`. Starting from `R_0 = 0` this recurrence has
//! the closed form [`level_sequence`]. The individual modes differ only in
//! which total resistances play the role of consecutive levels:
//!
//! * photon counting: `R_β = β·r_p` with one common shunt,
//! * pixel arrays: `R_β = r_{p,β}`,
//! * coincidences up to `n_c`: each new detector must clear the sum of the
//!   `n_c` detectors below it, the worst state that precedes it,
//! * full detection: the binary ladder `r_k = δR·2^{k−1}`.
//!
//! A finite normal resistance turns each shunt `r` into `r_p = r‖R_N` when
//! switched; designs are solved for `r_p` and mapped back with
//! `r = r_p·R_N/(R_N − r_p)`.

use std::fmt;

use thiserror::Error;

use crate::circuit::shunt_for_parallel;
use crate::classes::ApplicationMode;
use crate::units::ExtReal;

/// Denominators at or below this value are treated as nonpositive.
const DENOM_EPS: f64 = 1e-12;

/// Which constraint stopped a design from growing further.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfeasibleCause {
    /// The class count reached the loading limit `m_L = 1/(Y·δR)`.
    FeasibilityLimit,
    /// The required switched resistance reached the normal resistance.
    NormalResistance,
    /// The coincidence recurrence denominator `1 − YδR − Y²δR·R` lost its sign.
    RecurrenceDenominator,
}

impl fmt::Display for InfeasibleCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InfeasibleCause::FeasibilityLimit => "class count reaches the loading limit m_L = 1/(Y*dR)",
            InfeasibleCause::NormalResistance => "required switched resistance reaches the normal resistance R_N",
            InfeasibleCause::RecurrenceDenominator => "recurrence denominator 1 - Y*dR - Y^2*dR*R is not positive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DesignError {
    #[error("infeasible: {cause}; at most {max_n} detector(s) can be supported")]
    Infeasible { max_n: usize, cause: InfeasibleCause },
    #[error("level {beta} is at or beyond the loading limit m_L = {limit}")]
    InfeasibleLevel { beta: u64, limit: f64 },
    #[error("not supported: {0}")]
    NotSupported(&'static str),
    #[error("invalid design request: {0}")]
    InvalidRequest(String),
}

/// Inputs to a design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignRequest {
    pub mode: ApplicationMode,
    /// Number of detectors.
    pub n: usize,
    /// Resistance resolution δR (Ω).
    pub delta_r: f64,
    /// Effective bias/readout admittance Y (S).
    pub y: f64,
    /// Normal resistance shared by all detectors (Ω).
    pub r_n: ExtReal,
}

impl DesignRequest {
    pub fn new(mode: ApplicationMode, n: usize, delta_r: f64, y: f64, r_n: ExtReal) -> Self {
        Self {
            mode,
            n,
            delta_r,
            y,
            r_n,
        }
    }

    /// Ideal bias and readout with negligible shunting of the normal state.
    pub fn ideal(mode: ApplicationMode, n: usize, delta_r: f64) -> Self {
        Self::new(mode, n, delta_r, 0.0, ExtReal::Infinite)
    }

    pub fn is_ideal(&self) -> bool {
        self.y == 0.0 && self.r_n.is_infinite()
    }

    fn validate(&self) -> Result<(), DesignError> {
        let bad = |m: String| Err(DesignError::InvalidRequest(m));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if !(self.delta_r > 0.0 && self.delta_r.is_finite()) {
            return bad(format!("delta_r = {} must be positive and finite", self.delta_r));
        }
        if !(self.y >= 0.0 && self.y.is_finite()) {
            return bad(format!("y = {} must be nonnegative and finite", self.y));
        }
        if let ExtReal::Finite(rn) = self.r_n {
            if !(rn > 0.0 && rn.is_finite()) {
                return bad(format!("r_n = {rn} must be positive"));
            }
        }
        self.mode
            .validate(self.n)
            .map_err(|e| DesignError::InvalidRequest(e.to_string()))
    }
}

/// A designed array.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignResult {
    pub mode: ApplicationMode,
    /// Shunts `r_k`, `k = 1..n`, nondecreasing.
    pub shunts: Vec<f64>,
    /// Switched resistances `r_{p,k} = r_k‖R_N`.
    pub parallels: Vec<f64>,
    /// Target total resistances of the construction.
    ///
    /// Photon counting and pixel arrays list the class levels `R_0..R_n`.
    /// Coincidence and full designs list, for each detector `k`, the total
    /// resistance of the worst preceding state that detector `k` alone must
    /// clear.
    pub levels: Vec<f64>,
    /// Loading limit `m_L` on the number of classes.
    pub feasible_limit: ExtReal,
}

impl DesignResult {
    pub fn n(&self) -> usize {
        self.shunts.len()
    }
}

/// `m_L = 1/(Y·δR)`; unbounded when `Y = 0`.
pub fn feasibility_limit(y: f64, delta_r: f64) -> ExtReal {
    if y == 0.0 {
        ExtReal::Infinite
    } else {
        ExtReal::Finite(1.0 / (y * delta_r))
    }
}

/// Target level `R_β = β·δR/(1 − β·Y·δR)`, the total resistance whose
/// compressed value `R/(1 + Y·R)` is exactly `β·δR`.
pub fn level_sequence(beta: u64, y: f64, delta_r: f64) -> Result<f64, DesignError> {
    let b = beta as f64;
    let den = 1.0 - b * y * delta_r;
    if den <= DENOM_EPS {
        return Err(DesignError::InfeasibleLevel {
            beta,
            limit: feasibility_limit(y, delta_r).to_f64(),
        });
    }
    Ok(b * delta_r / den)
}

/// Designs an array for the request's mode.
pub fn design(req: &DesignRequest) -> Result<DesignResult, DesignError> {
    match req.mode {
        ApplicationMode::Pnr => design_pnr(req),
        ApplicationMode::PixelArray => design_pixel(req),
        ApplicationMode::Coincidence(_) => design_coincidence(req),
        ApplicationMode::Full => design_full(req),
    }
}

/// Designs as many leading detectors as the constraints allow.
///
/// For modes whose `k`-th shunt does not depend on `n` (pixel, coincidence,
/// full) the result is the prefix of the full design; the infeasibility, if
/// any, is returned alongside. Photon counting is not prefix-stable and is
/// designed for `n` as requested.
pub fn design_up_to(req: &DesignRequest) -> (Option<DesignResult>, Option<DesignError>) {
    match design(req) {
        Ok(d) => (Some(d), None),
        Err(e @ DesignError::Infeasible { max_n, .. }) if req.mode != ApplicationMode::Pnr && max_n > 0 => {
            let mut shorter = *req;
            shorter.n = max_n;
            if let ApplicationMode::Coincidence(n_c) = req.mode {
                shorter.mode = ApplicationMode::Coincidence(n_c.min(max_n as u32));
            }
            (design(&shorter).ok(), Some(e))
        }
        Err(e) => (None, Some(e)),
    }
}

fn pnr_denominator(n: usize, req: &DesignRequest) -> f64 {
    1.0 - n as f64 * req.y * req.delta_r - req.delta_r * req.r_n.recip()
}

/// Photon counting: one common shunt `r = δR/(1 − n/m_L − δR/R_N)`.
///
/// The switched resistance is `r_p = δR/(1 − n/m_L)`, so the top count level
/// `n·r_p` equals the target level `R_n`. Lower counts sit above their
/// targets, which does not by itself guarantee δR spacing between
/// consecutive counts under loading; use the verifier to check.
pub fn design_pnr(req: &DesignRequest) -> Result<DesignResult, DesignError> {
    req.validate()?;
    let n = req.n;
    let den = pnr_denominator(n, req);
    if den <= DENOM_EPS {
        let load_den = 1.0 - n as f64 * req.y * req.delta_r;
        let cause = if load_den <= DENOM_EPS {
            InfeasibleCause::FeasibilityLimit
        } else {
            InfeasibleCause::NormalResistance
        };
        return Err(DesignError::Infeasible {
            max_n: pnr_max_n(req),
            cause,
        });
    }
    let r = req.delta_r / den;
    let r_p = req.delta_r / (1.0 - n as f64 * req.y * req.delta_r);
    Ok(DesignResult {
        mode: req.mode,
        shunts: vec![r; n],
        parallels: vec![r_p; n],
        levels: (0..=n).map(|b| b as f64 * r_p).collect(),
        feasible_limit: feasibility_limit(req.y, req.delta_r),
    })
}

fn pnr_max_n(req: &DesignRequest) -> usize {
    let head = 1.0 - req.delta_r * req.r_n.recip();
    if head <= DENOM_EPS {
        return 0;
    }
    if req.y == 0.0 {
        return usize::MAX;
    }
    let guess = (head / (req.y * req.delta_r)).floor().max(0.0) as usize;
    let mut n = guess.saturating_add(1);
    while n > 0 && pnr_denominator(n, req) <= DENOM_EPS {
        n -= 1;
    }
    n
}

/// Pixel array: `r_k = k·δR/(1 − k/m_L − k·δR/R_N)`, whose switched value
/// `r_{p,k}` is the target level `R_k`.
pub fn design_pixel(req: &DesignRequest) -> Result<DesignResult, DesignError> {
    req.validate()?;
    let mut shunts = Vec::with_capacity(req.n);
    let mut parallels = Vec::with_capacity(req.n);
    let mut levels = vec![0.0];
    for k in 1..=req.n {
        let kf = k as f64;
        let load_den = 1.0 - kf * req.y * req.delta_r;
        let den = load_den - kf * req.delta_r * req.r_n.recip();
        if den <= DENOM_EPS {
            let cause = if load_den <= DENOM_EPS {
                InfeasibleCause::FeasibilityLimit
            } else {
                InfeasibleCause::NormalResistance
            };
            return Err(DesignError::Infeasible { max_n: k - 1, cause });
        }
        shunts.push(kf * req.delta_r / den);
        let level = level_sequence(k as u64, req.y, req.delta_r)?;
        parallels.push(level);
        levels.push(level);
    }
    Ok(DesignResult {
        mode: req.mode,
        shunts,
        parallels,
        levels,
        feasible_limit: feasibility_limit(req.y, req.delta_r),
    })
}

/// Coincidences of up to `n_c` detectors.
///
/// With `R` the sum of the `n_c` switched resistances below detector `k+1`,
/// `r_{p,k+1} = R + δR·(1 + Y·R)²/(1 − Y·δR − Y²·δR·R)`, which is the exact
/// solution of `f(r_{p,k+1}) − f(R) = δR`. Missing predecessors count as
/// zero. In the ideal limit this is `r_{k+1} = Σ r_{k−l} + δR`.
pub fn design_coincidence(req: &DesignRequest) -> Result<DesignResult, DesignError> {
    req.validate()?;
    let n_c = match req.mode {
        ApplicationMode::Coincidence(n_c) => n_c as usize,
        other => {
            return Err(DesignError::InvalidRequest(format!(
                "coincidence design requested for mode {other}"
            )))
        }
    };
    let (y, dr) = (req.y, req.delta_r);
    let mut shunts = Vec::with_capacity(req.n);
    let mut parallels: Vec<f64> = Vec::with_capacity(req.n);
    let mut levels = Vec::with_capacity(req.n);
    for k in 0..req.n {
        let worst: f64 = parallels[k.saturating_sub(n_c)..].iter().sum();
        let den = 1.0 - y * dr - y * y * dr * worst;
        if den <= DENOM_EPS {
            let cause = if 1.0 - y * dr <= DENOM_EPS {
                InfeasibleCause::FeasibilityLimit
            } else {
                InfeasibleCause::RecurrenceDenominator
            };
            return Err(DesignError::Infeasible { max_n: k, cause });
        }
        let r_p = worst + dr * (1.0 + y * worst).powi(2) / den;
        let r = shunt_for_parallel(r_p, req.r_n).ok_or(DesignError::Infeasible {
            max_n: k,
            cause: InfeasibleCause::NormalResistance,
        })?;
        shunts.push(r);
        parallels.push(r_p);
        levels.push(worst);
    }
    Ok(DesignResult {
        mode: req.mode,
        shunts,
        parallels,
        levels,
        feasible_limit: feasibility_limit(y, dr),
    })
}

/// Full detection: the binary ladder `r_k = δR·2^{k−1}`, ideal conditions
/// only. Every state then reads as its own case index times δR.
pub fn design_full(req: &DesignRequest) -> Result<DesignResult, DesignError> {
    req.validate()?;
    if !req.is_ideal() {
        return Err(DesignError::NotSupported(
            "full detection is only designed for ideal bias (Y = 0) and infinite R_N",
        ));
    }
    if req.n > 1023 {
        return Err(DesignError::InvalidRequest(format!(
            "n = {} overflows the binary ladder",
            req.n
        )));
    }
    let shunts: Vec<f64> = (0..req.n).map(|i| req.delta_r * 2f64.powi(i as i32)).collect();
    let levels = (0..req.n).map(|i| req.delta_r * (2f64.powi(i as i32) - 1.0)).collect();
    Ok(DesignResult {
        mode: req.mode,
        parallels: shunts.clone(),
        shunts,
        levels,
        feasible_limit: ExtReal::Infinite,
    })
}

/// Largest index accepted by [`two_photon_units`].
pub const CLOSED_FORM_MAX_K: u32 = 80;

/// `(F_k, L_k)`, the Fibonacci and Lucas numbers, by fast doubling.
pub fn fibonacci_lucas(k: u32) -> (u128, u128) {
    // (F_m, F_{m+1}) doubling: F_2m = F_m(2F_{m+1} − F_m), F_2m+1 = F_m² + F_{m+1}².
    fn fib_pair(k: u32) -> (u128, u128) {
        if k == 0 {
            return (0, 1);
        }
        let (a, b) = fib_pair(k / 2);
        let c = a * (2 * b - a);
        let d = a * a + b * b;
        if k % 2 == 0 {
            (c, d)
        } else {
            (d, c + d)
        }
    }
    let (f, f_next) = fib_pair(k);
    // L_k = F_{k−1} + F_{k+1} = 2F_{k+1} − F_k.
    (f, 2 * f_next - f)
}

/// Two-photon shunt `r_k` in units of δR from the Fibonacci/Lucas closed
/// form `(3F_k + L_k)/2 − 1`, exact in integers.
pub fn two_photon_units(k: u32) -> Result<u128, DesignError> {
    if k == 0 || k > CLOSED_FORM_MAX_K {
        return Err(DesignError::InvalidRequest(format!(
            "closed form index k = {k} outside 1..={CLOSED_FORM_MAX_K}"
        )));
    }
    let (f, l) = fibonacci_lucas(k);
    let twice = 3 * f + l;
    debug_assert!(twice % 2 == 0);
    Ok(twice / 2 - 1)
}

/// [`two_photon_units`] scaled by `delta_r`.
pub fn two_photon_closed_form(k: u32, delta_r: f64) -> Result<f64, DesignError> {
    Ok(two_photon_units(k)? as f64 * delta_r)
}

/// Ideal coincidence ladder in integer units of δR:
/// `u_{k+1} = u_k + … + u_{k−n_c+1} + 1`, `u_j = 0` for `j ≤ 0`.
///
/// Returns `None` on `u128` overflow.
pub fn coincidence_units(n_c: usize, n: usize) -> Option<Vec<u128>> {
    let mut out: Vec<u128> = Vec::with_capacity(n);
    for k in 0..n {
        let mut s: u128 = 1;
        for &u in &out[k.saturating_sub(n_c)..] {
            s = s.checked_add(u)?;
        }
        out.push(s);
    }
    Some(out)
}
