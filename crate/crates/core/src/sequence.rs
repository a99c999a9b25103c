//! LS-sequences of points in `[0, 1[`.
//!
//! An index `n` is admissible when its base-`(L+S)` expansion never places a
//! "short" digit (`≥ L`) directly below a nonzero digit. Admissible indices
//! are mapped to `[0, 1[` by the digit map
//!
//! ```text
//! φ(n) = Σ_k ã_k γ^(k+1),   ã = a            if a < L
//!                           ã = L + γ(a − L)  if a ≥ L
//! ```
//!
//! which is a radical inverse whose short digits carry the extra factor `γ`.
//! Index `0` (with `φ(0) = 0`) is included as the first element, so the first
//! `t_n` points are exactly the left endpoints of partition level `n`.

use crate::error::{Error, Result};
use crate::quadfield::{GammaPowers, LsParams, QuadNum};

/// Little-endian base-`(L+S)` digits of an index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitVector {
    params: LsParams,
    digits: Vec<u32>,
}

impl DigitVector {
    /// Expands `n`; `0` has no digits.
    pub fn from_index(params: LsParams, mut n: u64) -> Self {
        let base = params.base();
        let mut digits = Vec::new();
        while n > 0 {
            digits.push((n % base) as u32);
            n /= base;
        }
        Self { params, digits }
    }

    pub fn params(&self) -> LsParams {
        self.params
    }

    /// Digits `a_0, a_1, …`, least significant first.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn value(&self) -> u64 {
        let base = self.params.base();
        self.digits
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * base + u64::from(d))
    }

    pub fn is_admissible(&self) -> bool {
        self.highest_violation().is_none()
    }

    /// Largest `k` with `a_k ≥ L` and `a_{k+1} ≥ 1`.
    fn highest_violation(&self) -> Option<usize> {
        let l = self.params.long();
        (0..self.digits.len().saturating_sub(1))
            .rev()
            .find(|&k| self.digits[k] >= l && self.digits[k + 1] >= 1)
    }

    /// The vector with its leading digit removed.
    pub fn without_leading(&self) -> Self {
        let mut digits = self.digits.clone();
        digits.pop();
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Self {
            params: self.params,
            digits,
        }
    }
}

pub fn is_admissible(params: LsParams, n: u64) -> bool {
    DigitVector::from_index(params, n).is_admissible()
}

/// Smallest admissible index `≥ from`.
///
/// On a violation at digit `k` every index sharing the digits above `k` and
/// not below the current value is inadmissible too, so the scan jumps to the
/// next multiple of `base^(k+1)`.
pub fn next_admissible(params: LsParams, from: u64) -> u64 {
    let base = params.base();
    let mut m = from;
    loop {
        match DigitVector::from_index(params, m).highest_violation() {
            None => return m,
            Some(k) => {
                let block = base.pow(k as u32 + 1);
                m = (m / block + 1) * block;
            }
        }
    }
}

/// Admissible indices in increasing order, starting at `0`.
#[derive(Clone, Debug)]
pub struct AdmissibleIndices {
    params: LsParams,
    next: u64,
}

impl AdmissibleIndices {
    pub fn new(params: LsParams) -> Self {
        Self { params, next: 0 }
    }
}

impl Iterator for AdmissibleIndices {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let m = next_admissible(self.params, self.next);
        self.next = m + 1;
        Some(m)
    }
}

/// The first `count` elements of `{0} ∪ N_{L,S}`.
pub fn admissible_indices(params: LsParams, count: usize) -> Vec<u64> {
    AdmissibleIndices::new(params).take(count).collect()
}

/// Evaluates the digit map with a shared table of terms `ã·γ^(k+1)`.
#[derive(Clone, Debug)]
pub struct DigitMap {
    params: LsParams,
    digit_values: Vec<QuadNum>,
    powers: GammaPowers,
    /// terms[k][a] = ã(a)·γ^(k+1)
    terms: Vec<Vec<QuadNum>>,
}

impl DigitMap {
    pub fn new(params: LsParams) -> Self {
        let g = params.gamma();
        let l = params.long();
        let digit_values = (0..params.base() as u32)
            .map(|a| {
                if a < l {
                    QuadNum::from_integer(params, i64::from(a))
                } else {
                    let extra = QuadNum::from_integer(params, i64::from(a - l));
                    QuadNum::from_integer(params, i64::from(l)) + &g * &extra
                }
            })
            .collect();
        Self {
            params,
            digit_values,
            powers: GammaPowers::new(params),
            terms: Vec::new(),
        }
    }

    /// `φ(n)`; rejects inadmissible indices.
    pub fn phi(&mut self, n: u64) -> Result<QuadNum> {
        let digits = DigitVector::from_index(self.params, n);
        if !digits.is_admissible() {
            return Err(Error::Inadmissible(n, self.params));
        }
        Ok(self.phi_digits(&digits))
    }

    fn term(&mut self, k: usize, a: u32) -> &QuadNum {
        while self.terms.len() <= k {
            let level = self.terms.len() as u32 + 1;
            let power = self.powers.get(level).clone();
            let row = self.digit_values.iter().map(|v| v * &power).collect();
            self.terms.push(row);
        }
        &self.terms[k][a as usize]
    }

    fn phi_digits(&mut self, digits: &DigitVector) -> QuadNum {
        let mut acc = self.params.zero();
        for (k, &a) in digits.digits().iter().enumerate() {
            if a != 0 {
                acc = &acc + self.term(k, a);
            }
        }
        acc
    }
}

/// `φ(n)` for a single admissible index.
pub fn phi(params: LsParams, n: u64) -> Result<QuadNum> {
    DigitMap::new(params).phi(n)
}

/// Ordered exact points in `[0, 1[` with float shadows.
#[derive(Clone, Debug, PartialEq)]
pub struct PointList1D {
    params: LsParams,
    points: Vec<QuadNum>,
    shadow: Vec<f64>,
}

impl PointList1D {
    pub fn new(params: LsParams, points: Vec<QuadNum>) -> Self {
        let shadow = points.iter().map(QuadNum::to_f64).collect();
        Self {
            params,
            points,
            shadow,
        }
    }

    pub fn params(&self) -> LsParams {
        self.params
    }

    pub fn points(&self) -> &[QuadNum] {
        &self.points
    }

    /// Float projections, index-aligned with [`points`](Self::points).
    pub fn shadow(&self) -> &[f64] {
        &self.shadow
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn truncated(&self, n: usize) -> Self {
        let n = n.min(self.len());
        Self {
            params: self.params,
            points: self.points[..n].to_vec(),
            shadow: self.shadow[..n].to_vec(),
        }
    }

    pub fn into_points(self) -> Vec<QuadNum> {
        self.points
    }
}

/// `(ξ¹, …, ξᴺ)`: the digit map applied to the first `count` admissible indices.
pub fn sequence_prefix(params: LsParams, count: usize) -> PointList1D {
    let mut map = DigitMap::new(params);
    let points = AdmissibleIndices::new(params)
        .take(count)
        .map(|n| {
            let digits = DigitVector::from_index(params, n);
            map.phi_digits(&digits)
        })
        .collect();
    PointList1D::new(params, points)
}
