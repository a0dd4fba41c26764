//! Finitely supported sequences in `ℓ_{p_n}(w)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::numerics::solve_monotone_decreasing;

/// Tolerance on `|ϱ(x/λ) - 1|` for sequence norms.
pub const SEQ_NORM_TOL: f64 = 1e-10;

/// Entries `x_k` with exponents `p_k ≥ 1` and weights `w_k > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSequence {
    entries: Vec<f64>,
    exponents: Vec<f64>,
    weights: Vec<f64>,
}

impl WeightedSequence {
    pub fn new(entries: Vec<f64>, exponents: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if entries.len() != exponents.len() || entries.len() != weights.len() {
            return Err(Error::MismatchedSequences);
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("sequence entries must be finite"));
        }
        if exponents.iter().any(|p| !(*p >= 1.0) || !p.is_finite()) {
            return Err(Error::InvalidParameter(
                "sequence exponents must lie in [1, inf)",
            ));
        }
        if weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter("sequence weights must be positive"));
        }
        Ok(Self {
            entries,
            exponents,
            weights,
        })
    }

    /// Constant exponent `p` and unit weights.
    pub fn uniform(entries: Vec<f64>, p: f64) -> Result<Self> {
        let n = entries.len();
        Self::new(entries, alloc::vec![p; n], alloc::vec![1.0; n])
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn p_plus(&self) -> f64 {
        self.exponents.iter().copied().fold(1.0, f64::max)
    }

    /// Whether two sequences live in the same `ℓ_{p_n}(w)`.
    pub fn same_space(&self, other: &WeightedSequence) -> bool {
        self.exponents == other.exponents && self.weights == other.weights
    }

    pub fn sub(&self, other: &WeightedSequence) -> Result<WeightedSequence> {
        if !self.same_space(other) {
            return Err(Error::MismatchedSequences);
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(WeightedSequence {
            entries,
            exponents: self.exponents.clone(),
            weights: self.weights.clone(),
        })
    }

    fn modular_from(&self, start: usize, lambda: f64) -> f64 {
        self.entries[start..]
            .iter()
            .zip(&self.exponents[start..])
            .zip(&self.weights[start..])
            .filter(|((x, _), _)| **x != 0.0)
            .map(|((x, p), w)| math::powf(math::abs(*x) / lambda, *p) * w)
            .sum()
    }
}

/// `∑_k (|x_k|/λ)^{p_k} w_k`.
pub fn seq_modular(s: &WeightedSequence, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter("modular scale must be positive"));
    }
    Ok(s.modular_from(0, lambda))
}

/// `inf{λ > 0 : ∑ (|x_k|/λ)^{p_k} w_k ≤ 1}`; 0 for the zero sequence.
pub fn seq_norm(s: &WeightedSequence) -> Result<f64> {
    let at_one = s.modular_from(0, 1.0);
    if at_one == 0.0 {
        return Ok(0.0);
    }
    let first = s.exponents.first().copied();
    if let Some(p) = first.filter(|p| s.exponents.iter().all(|q| q == p)) {
        return Ok(math::powf(at_one, 1.0 / p));
    }
    match solve_monotone_decreasing(|lam| Ok(s.modular_from(0, lam)), 1.0, SEQ_NORM_TOL) {
        Err(Error::NoBracket) if at_one < 1.0 => Ok(0.0),
        other => other,
    }
}

/// `∑_{k > K} |x_k|^{p_k} w_k` with 1-based indices.
pub fn seq_tail(s: &WeightedSequence, k: usize) -> Result<f64> {
    if k > s.len() {
        return Err(Error::InvalidParameter(
            "tail index exceeds the sequence length",
        ));
    }
    Ok(s.modular_from(k, 1.0))
}
