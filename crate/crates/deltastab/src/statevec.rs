//! Exact sparse state vectors over n qubits and expansions in the chord basis.
//!
//! Amplitudes are stored as complex doubles keyed by multi-index; chord states
//! are built with exact `±1` entries so integer-exact paths never round.
//! Normalization is never applied implicitly.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chordkit::{self, ChordError, MultiIndex, PairPartition};

/// Amplitudes with modulus below this are dropped after inexact arithmetic.
pub const DEFAULT_ZERO_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("multi-index length {got} does not match qubit count {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("states have different qubit counts {0} and {1}")]
    MixedQubitCounts(usize, usize),
    #[error("empty term list has no qubit count")]
    EmptyTerms,
    #[error("operation requires a nonzero state")]
    ZeroState,
    #[error("qubit count {0} is not supported (need 1..=64)")]
    BadQubitCount(usize),
    #[error("malformed state document: {0}")]
    Format(String),
    #[error("coefficient keyed by crossing partition {0}")]
    CrossingKey(PairPartition),
    #[error("partition has {got} pairs, map expects {expected}")]
    WrongPartitionSize { expected: usize, got: usize },
    #[error(transparent)]
    Chord(#[from] ChordError),
}

/// Sparse state vector: a map from length-n multi-indices to complex
/// amplitudes. Zero amplitudes are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: BTreeMap<MultiIndex, Complex64>,
}

impl StateVector {
    pub fn zero(n: usize) -> Result<Self, StateError> {
        if n == 0 || n > 64 {
            return Err(StateError::BadQubitCount(n));
        }
        Ok(Self { n, amplitudes: BTreeMap::new() })
    }

    /// The computational basis state `|ix⟩`.
    pub fn basis_state(ix: MultiIndex) -> Result<Self, StateError> {
        let mut s = Self::zero(ix.len())?;
        s.amplitudes.insert(ix, Complex64::new(1.0, 0.0));
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }

    /// Entries in ascending multi-index order.
    pub fn amplitudes(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.amplitudes.iter()
    }

    /// Smallest multi-index in the support with its amplitude.
    pub fn min_support(&self) -> Option<(MultiIndex, Complex64)> {
        self.amplitudes.iter().next().map(|(ix, a)| (*ix, *a))
    }

    /// Stored amplitude at `ix`, or exact zero.
    pub fn coefficient(&self, ix: MultiIndex) -> Result<Complex64, StateError> {
        if ix.len() != self.n {
            return Err(StateError::LengthMismatch { expected: self.n, got: ix.len() });
        }
        Ok(self.amplitudes.get(&ix).copied().unwrap_or(Complex64::ZERO))
    }

    pub fn norm_squared(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        if factor == Complex64::ZERO {
            out.amplitudes.clear();
            return out;
        }
        for a in out.amplitudes.values_mut() {
            *a *= factor;
        }
        out
    }

    pub fn normalized(&self) -> Result<Self, StateError> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(StateError::ZeroState);
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    /// Adds `amount` to the amplitude at `ix`, removing the entry when it
    /// cancels to exact zero.
    pub(crate) fn add_amplitude(&mut self, ix: MultiIndex, amount: Complex64) {
        debug_assert_eq!(ix.len(), self.n);
        if amount == Complex64::ZERO {
            return;
        }
        let entry = self.amplitudes.entry(ix).or_insert(Complex64::ZERO);
        *entry += amount;
        if *entry == Complex64::ZERO {
            self.amplitudes.remove(&ix);
        }
    }

    pub(crate) fn set_amplitude(&mut self, ix: MultiIndex, value: Complex64) {
        debug_assert_eq!(ix.len(), self.n);
        if value == Complex64::ZERO {
            self.amplitudes.remove(&ix);
        } else {
            self.amplitudes.insert(ix, value);
        }
    }

    /// Removes entries with modulus at most `tol`.
    pub fn pruned(&self, tol: f64) -> Self {
        let mut out = self.clone();
        out.amplitudes.retain(|_, a| a.norm() > tol);
        out
    }

    pub fn to_json(&self) -> String {
        let doc = StateDocument {
            n: self.n,
            amplitudes: self
                .amplitudes
                .iter()
                .map(|(ix, a)| (ix.to_string(), [a.re, a.im]))
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("state document serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, StateError> {
        let doc: StateDocument =
            serde_json::from_str(text).map_err(|e| StateError::Format(e.to_string()))?;
        let mut state = Self::zero(doc.n)?;
        for (key, [re, im]) in doc.amplitudes {
            if key.len() != doc.n {
                return Err(StateError::LengthMismatch { expected: doc.n, got: key.len() });
            }
            let ix = MultiIndex::parse(&key)
                .map_err(|_| StateError::Format(format!("bad bitstring key `{key}`")))?;
            let a = Complex64::new(re, im);
            if a != Complex64::ZERO {
                state.set_amplitude(ix, a);
            }
        }
        Ok(state)
    }
}

#[derive(Serialize, Deserialize)]
struct StateDocument {
    n: usize,
    amplitudes: BTreeMap<String, [f64; 2]>,
}

/// Unnormalized product over the pairs `{a, b}` of `p` (with `a < b`) of the
/// singlet `|0⟩_a|1⟩_b − |1⟩_a|0⟩_b`.
///
/// The expansion has exactly `2^m` terms, all `±1`: the sign of a term is
/// `(−1)^k` where `k` counts pairs whose smaller label carries bit 1. The
/// amplitude at the minimal index of `p` is `+1`.
pub fn singlet_product(p: &PairPartition) -> StateVector {
    let n = p.n();
    let m = p.m();
    let mut state = StateVector::zero(n).expect("2m labels always in 1..=64 under the caps");
    for selector in 0u64..(1u64 << m) {
        let mut ix = MultiIndex::zeros(n).expect("n <= 64");
        let mut sign = 1.0;
        for (j, &(a, b)) in p.pairs().iter().enumerate() {
            if (selector >> j) & 1 == 0 {
                ix = ix.with_bit(a, 0).with_bit(b, 1);
            } else {
                ix = ix.with_bit(a, 1).with_bit(b, 0);
                sign = -sign;
            }
        }
        state.set_amplitude(ix, Complex64::new(sign, 0.0));
    }
    state
}

/// Amplitude-wise sum of scaled states. Exact cancellations are removed;
/// entries left with modulus at most `DEFAULT_ZERO_TOLERANCE` are dropped.
pub fn linear_combination<'a>(
    terms: impl IntoIterator<Item = (Complex64, &'a StateVector)>,
) -> Result<StateVector, StateError> {
    linear_combination_with_tolerance(terms, DEFAULT_ZERO_TOLERANCE)
}

pub fn linear_combination_with_tolerance<'a>(
    terms: impl IntoIterator<Item = (Complex64, &'a StateVector)>,
    zero_tol: f64,
) -> Result<StateVector, StateError> {
    let mut terms = terms.into_iter();
    let Some((first_coeff, first_state)) = terms.next() else {
        return Err(StateError::EmptyTerms);
    };
    let mut out = first_state.scaled(first_coeff);
    for (coeff, state) in terms {
        if state.n() != out.n() {
            return Err(StateError::MixedQubitCounts(out.n(), state.n()));
        }
        for (ix, a) in state.amplitudes() {
            out.add_amplitude(*ix, coeff * a);
        }
    }
    Ok(out.pruned(zero_tol))
}

/// `⟨a|b⟩ = Σ conj(a_I) b_I` over the shared support.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Complex64, StateError> {
    if a.n() != b.n() {
        return Err(StateError::MixedQubitCounts(a.n(), b.n()));
    }
    let mut sum = Complex64::ZERO;
    for (ix, amp_a) in a.amplitudes() {
        if let Some(amp_b) = b.amplitudes.get(ix) {
            sum += amp_a.conj() * amp_b;
        }
    }
    Ok(sum)
}

/// True iff `|⟨a|b⟩| ≥ (1 − tol) · ‖a‖ · ‖b‖`; insensitive to global phase
/// and scale. Errors on zero input.
pub fn equal_up_to_phase(a: &StateVector, b: &StateVector, tol: f64) -> Result<bool, StateError> {
    if a.is_zero() || b.is_zero() {
        return Err(StateError::ZeroState);
    }
    let overlap = inner_product(a, b)?.norm();
    Ok(overlap >= (1.0 - tol) * a.norm() * b.norm())
}

/// The normalized 4-qubit state
/// `(1/√6) [ |0011⟩ + |1100⟩ + ω(|1010⟩ + |0101⟩) + ω²(|1001⟩ + |0110⟩) ]`
/// with `ω = exp(2πi/3)`; its stabilizer is exactly the diagonal subgroup.
pub fn m4_state() -> StateVector {
    let scale = 1.0 / 6.0_f64.sqrt();
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let omega_sq = Complex64::from_polar(1.0, 4.0 * std::f64::consts::PI / 3.0);
    let one = Complex64::new(1.0, 0.0);
    let mut state = StateVector::zero(4).unwrap();
    for (bits, phase) in [
        ("0011", one),
        ("1100", one),
        ("1010", omega),
        ("0101", omega),
        ("1001", omega_sq),
        ("0110", omega_sq),
    ] {
        state.set_amplitude(MultiIndex::parse(bits).unwrap(), phase * scale);
    }
    state
}

/// An expansion `Σ_P c_P |s_P⟩` over non-crossing pair partitions of
/// `{1, ..., 2m}`. Crossing keys are rejected at insertion.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMap {
    m: usize,
    entries: BTreeMap<PairPartition, Complex64>,
}

impl CoefficientMap {
    pub fn new(m: usize) -> Self {
        Self { m, entries: BTreeMap::new() }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        2 * self.m
    }

    pub fn insert(&mut self, p: PairPartition, coeff: Complex64) -> Result<(), StateError> {
        if p.m() != self.m {
            return Err(StateError::WrongPartitionSize { expected: self.m, got: p.m() });
        }
        if !chordkit::is_noncrossing(&p) {
            return Err(StateError::CrossingKey(p));
        }
        if coeff == Complex64::ZERO {
            self.entries.remove(&p);
        } else {
            self.entries.insert(p, coeff);
        }
        Ok(())
    }

    pub fn get(&self, p: &PairPartition) -> Complex64 {
        self.entries.get(p).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PairPartition, &Complex64)> {
        self.entries.iter()
    }

    /// Keys whose coefficient modulus exceeds `tol`.
    pub fn support(&self, tol: f64) -> Vec<PairPartition> {
        self.entries
            .iter()
            .filter(|(_, c)| c.norm() > tol)
            .map(|(p, _)| p.clone())
            .collect()
    }

    pub fn to_json(&self) -> String {
        let doc = CoefficientDocument {
            m: self.m,
            terms: self
                .entries
                .iter()
                .map(|(p, c)| CoefficientTerm { pairs: p.to_string(), coeff: [c.re, c.im] })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("coefficient document serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, StateError> {
        let doc: CoefficientDocument =
            serde_json::from_str(text).map_err(|e| StateError::Format(e.to_string()))?;
        let mut map = Self::new(doc.m);
        for term in doc.terms {
            let p = chordkit::parse_diagram(&term.pairs)?;
            map.insert(p, Complex64::new(term.coeff[0], term.coeff[1]))?;
        }
        Ok(map)
    }
}

#[derive(Serialize, Deserialize)]
struct CoefficientDocument {
    m: usize,
    terms: Vec<CoefficientTerm>,
}

#[derive(Serialize, Deserialize)]
struct CoefficientTerm {
    pairs: String,
    coeff: [f64; 2],
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (ix, a)) in self.amplitudes().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}|{}⟩", crate::format_complex(*a), ix)?;
        }
        Ok(())
    }
}
