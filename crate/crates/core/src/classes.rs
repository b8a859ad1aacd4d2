//! Equivalence classes of switching states for each detection task.
//!
//! An application only needs to tell apart states that carry different
//! information: a photon counter cares about how many detectors switched, a
//! pixel array about which single detector switched, and so on. This module
//! maps states to canonical class labels and enumerates the states that a
//! design must discriminate.

use std::fmt;

use thiserror::Error;

use crate::circuit::{CircuitError, SwitchingState, MAX_DETECTORS};

/// Most states [`in_scope_states`] will enumerate.
pub const ENUMERATION_BOUND: u64 = 1 << 30;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassError {
    #[error("state has {state} detectors but {expected} were expected")]
    LengthMismatch { state: usize, expected: usize },
    #[error("coincidence budget n_c = {n_c} must satisfy 1 <= n_c <= n = {n}")]
    InvalidBudget { n_c: u32, n: usize },
    #[error("array needs at least one detector")]
    NoDetectors,
    #[error("{count} in-scope states exceed the enumeration bound of {ENUMERATION_BOUND}")]
    EnumerationBound { count: u128 },
    #[error("class count for n = {n} overflows; full detection supports n <= 62")]
    Overflow { n: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Detection task served by an array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ApplicationMode {
    /// Photon-number resolution: count switched detectors.
    Pnr,
    /// Identify the single switched detector, if any.
    PixelArray,
    /// Identify every switched detector when at most `n_c` switch together.
    Coincidence(u32),
    /// Identify every one of the `2^n` states.
    Full,
}

impl ApplicationMode {
    /// Checks the mode against an array size.
    pub fn validate(self, n: usize) -> Result<(), ClassError> {
        if n == 0 {
            return Err(ClassError::NoDetectors);
        }
        if let ApplicationMode::Coincidence(n_c) = self {
            if n_c == 0 || n_c as usize > n {
                return Err(ClassError::InvalidBudget { n_c, n });
            }
        }
        Ok(())
    }

    /// Largest number of simultaneously switched detectors that still belongs
    /// to some class.
    pub fn budget(self, n: usize) -> usize {
        match self {
            ApplicationMode::Pnr | ApplicationMode::Full => n,
            ApplicationMode::PixelArray => 1,
            ApplicationMode::Coincidence(n_c) => (n_c as usize).min(n),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ApplicationMode::Pnr => "pnr",
            ApplicationMode::PixelArray => "pixel",
            ApplicationMode::Coincidence(_) => "coincidence",
            ApplicationMode::Full => "full",
        }
    }

    pub fn coincidence_budget(self) -> Option<u32> {
        match self {
            ApplicationMode::Coincidence(n_c) => Some(n_c),
            _ => None,
        }
    }

    /// Builds a mode from its name and an optional coincidence budget.
    pub fn from_name(name: &str, n_c: Option<u32>) -> Option<Self> {
        match (name, n_c) {
            ("pnr", None) => Some(ApplicationMode::Pnr),
            ("pixel", None) => Some(ApplicationMode::PixelArray),
            ("full", None) => Some(ApplicationMode::Full),
            ("coincidence", Some(k)) => Some(ApplicationMode::Coincidence(k)),
            _ => None,
        }
    }
}

impl fmt::Display for ApplicationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ApplicationMode::Coincidence(n_c) => write!(f, "coincidence(n_c={n_c})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Canonical identity of an equivalence class. Two states are equivalent for a
/// mode exactly when they receive equal labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassLabel {
    /// Number of switched detectors.
    Count(u32),
    /// Switched detector `1..=n`, or 0 for none.
    Pixel(u32),
    /// Set of switched detectors, as a bitmask (detector `k` is bit `k − 1`).
    Subset(u64),
    /// The full state.
    State(SwitchingState),
}

impl ClassLabel {
    /// Switched detectors named by the label, ascending and 1-based, for
    /// labels that identify them.
    pub fn detectors(&self) -> Option<Vec<usize>> {
        let from_mask = |m: u64| (0..64).filter(|i| m >> i & 1 == 1).map(|i| i + 1).collect();
        match *self {
            ClassLabel::Count(_) => None,
            ClassLabel::Pixel(0) => Some(vec![]),
            ClassLabel::Pixel(k) => Some(vec![k as usize]),
            ClassLabel::Subset(m) => Some(from_mask(m)),
            ClassLabel::State(s) => Some(from_mask(s.bits())),
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Count(c) => write!(f, "count {c}"),
            ClassLabel::Pixel(0) => f.write_str("no detection"),
            ClassLabel::Pixel(k) => write!(f, "detector {k}"),
            ClassLabel::Subset(_) => {
                let ds = self.detectors().unwrap_or_default();
                let parts: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
            ClassLabel::State(s) => write!(f, "state {s}"),
        }
    }
}

/// Class of `state` under `mode`, or `None` when the state lies outside what
/// the mode promises to discriminate (e.g. two detectors switched in a pixel
/// array). `None` is a regular outcome, not a failure.
pub fn classify(mode: ApplicationMode, state: &SwitchingState) -> Option<ClassLabel> {
    let count = state.count();
    match mode {
        ApplicationMode::Pnr => Some(ClassLabel::Count(count)),
        ApplicationMode::PixelArray => match count {
            0 => Some(ClassLabel::Pixel(0)),
            1 => Some(ClassLabel::Pixel(state.bits().trailing_zeros() + 1)),
            _ => None,
        },
        ApplicationMode::Coincidence(n_c) => (count <= n_c).then_some(ClassLabel::Subset(state.bits())),
        ApplicationMode::Full => Some(ClassLabel::State(*state)),
    }
}

/// [`classify`] with an explicit array size check.
pub fn classify_checked(
    mode: ApplicationMode,
    n: usize,
    state: &SwitchingState,
) -> Result<Option<ClassLabel>, ClassError> {
    if state.len() != n {
        return Err(ClassError::LengthMismatch {
            state: state.len(),
            expected: n,
        });
    }
    Ok(classify(mode, state))
}

fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of states with at most `budget` of `n` detectors switched.
pub fn in_scope_count(mode: ApplicationMode, n: usize) -> u128 {
    let budget = mode.budget(n) as u64;
    (0..=budget).map(|i| binomial(n as u64, i)).sum()
}

/// Number of equivalence classes `m` for an `n`-detector array.
pub fn class_count(mode: ApplicationMode, n: usize) -> Result<u64, ClassError> {
    mode.validate(n)?;
    match mode {
        ApplicationMode::Pnr | ApplicationMode::PixelArray => Ok(n as u64 + 1),
        ApplicationMode::Coincidence(_) => {
            u64::try_from(in_scope_count(mode, n)).map_err(|_| ClassError::Overflow { n })
        }
        ApplicationMode::Full if n > 62 => Err(ClassError::Overflow { n }),
        ApplicationMode::Full => Ok(1u64 << n),
    }
}

/// States belonging to some class, in ascending binary order.
///
/// Fails when the count exceeds [`ENUMERATION_BOUND`]; for full detection and
/// photon counting that means `n <= 30`.
pub fn in_scope_states(mode: ApplicationMode, n: usize) -> Result<InScopeStates, ClassError> {
    mode.validate(n)?;
    if n > MAX_DETECTORS {
        return Err(CircuitError::TooManyDetectors { n }.into());
    }
    let count = in_scope_count(mode, n);
    if count > ENUMERATION_BOUND as u128 {
        return Err(ClassError::EnumerationBound { count });
    }
    Ok(InScopeStates {
        n,
        budget: mode.budget(n) as u32,
        next: Some(0),
        remaining: count as u64,
    })
}

/// Iterator returned by [`in_scope_states`].
#[derive(Debug, Clone)]
pub struct InScopeStates {
    n: usize,
    budget: u32,
    next: Option<u64>,
    remaining: u64,
}

impl InScopeStates {
    fn successor(&self, x: u64) -> Option<u64> {
        // Smallest y > x with popcount(y) <= budget: step once, then carry
        // away the lowest set bit until the population fits.
        let mut y = x.checked_add(1)?;
        while y.count_ones() > self.budget {
            y = y.checked_add(y & y.wrapping_neg())?;
        }
        let in_range = self.n >= 64 || y >> self.n == 0;
        in_range.then_some(y)
    }
}

impl Iterator for InScopeStates {
    type Item = SwitchingState;

    fn next(&mut self) -> Option<SwitchingState> {
        let x = self.next?;
        self.next = self.successor(x);
        self.remaining = self.remaining.saturating_sub(1);
        SwitchingState::new(self.n, x).ok()
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

impl ExactSizeIterator for InScopeStates {}
