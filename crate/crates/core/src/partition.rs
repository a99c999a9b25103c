//! LS-sequences of partitions of `[0, 1[`.
//!
//! Level `n` is obtained from level `n − 1` by splitting every interval of
//! maximal length `γ^(n−1)` into `L` pieces of length `γ^n` followed by `S`
//! pieces of length `γ^(n+1)`; shorter intervals are carried over untouched.
//! Starting from the trivial partition `{[0, 1[}` this is Kakutani's splitting
//! procedure for the two-piece case.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::quadfield::{GammaPowers, LsParams, QuadNum};
use crate::sequence::PointList1D;

/// Default cap on the number of materialized intervals.
pub const DEFAULT_MAX_INTERVALS: usize = 1_000_000;

/// One interval `[left, left + γ^len_exp[`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub left: QuadNum,
    pub len_exp: u32,
}

impl Interval {
    pub fn length(&self) -> QuadNum {
        self.left.params().gamma().pow(self.len_exp)
    }

    pub fn right(&self) -> QuadNum {
        &self.left + &self.length()
    }
}

/// A level of the LS-sequence of partitions, intervals ordered left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LsPartition {
    params: LsParams,
    level: u32,
    intervals: Vec<Interval>,
}

impl LsPartition {
    /// The trivial partition `{[0, 1[}` (level 0).
    pub fn trivial(params: LsParams) -> Self {
        Self {
            params,
            level: 0,
            intervals: vec![Interval {
                left: params.zero(),
                len_exp: 0,
            }],
        }
    }

    pub fn params(&self) -> LsParams {
        self.params
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Whether `iv` has the maximal length `γ^level` at this level.
    pub fn is_long(&self, iv: &Interval) -> bool {
        iv.len_exp == self.level
    }

    /// Splits every maximal interval into `L` long and `S` short pieces.
    pub fn refine(&self) -> Self {
        let mut powers = GammaPowers::new(self.params);
        self.refine_with(&mut powers)
    }

    fn refine_with(&self, powers: &mut GammaPowers) -> Self {
        let n = self.level;
        let long_len = powers.get(n + 1).clone();
        let short_len = powers.get(n + 2).clone();
        let longs = self.intervals.iter().filter(|iv| iv.len_exp == n).count();
        let (l, s) = (self.params.long() as usize, self.params.short() as usize);
        let mut out = Vec::with_capacity(self.intervals.len() + longs * (l + s - 1));
        for iv in &self.intervals {
            if iv.len_exp != n {
                out.push(iv.clone());
                continue;
            }
            let mut left = iv.left.clone();
            for _ in 0..l {
                let next = &left + &long_len;
                out.push(Interval {
                    left,
                    len_exp: n + 1,
                });
                left = next;
            }
            for _ in 0..s {
                let next = &left + &short_len;
                out.push(Interval {
                    left,
                    len_exp: n + 2,
                });
                left = next;
            }
        }
        Self {
            params: self.params,
            level: n + 1,
            intervals: out,
        }
    }

    /// Left endpoints in left-to-right order.
    pub fn left_endpoints(&self) -> PointList1D {
        PointList1D::new(
            self.params,
            self.intervals.iter().map(|iv| iv.left.clone()).collect(),
        )
    }
}

/// `t_0 ..= t_n` for a pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountSequence {
    params: LsParams,
    values: Vec<BigUint>,
}

impl CountSequence {
    pub fn params(&self) -> LsParams {
        self.params
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn last(&self) -> &BigUint {
        self.values.last().expect("count sequence is never empty")
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        self.values.get(n)
    }
}

/// Interval counts `t_k = L·t_{k−1} + S·t_{k−2}`, `t_0 = 1`, `t_1 = L + S`.
pub fn counts(params: LsParams, n: u32) -> CountSequence {
    let mut values = Vec::with_capacity(n as usize + 1);
    values.push(BigUint::from(1u32));
    if n >= 1 {
        values.push(BigUint::from(params.base()));
    }
    for k in 2..=n as usize {
        let t = &values[k - 1] * params.long() + &values[k - 2] * params.short();
        values.push(t);
    }
    CountSequence { params, values }
}

/// Level `n` of the LS-sequence of partitions, with the default interval cap.
pub fn partition_at(params: LsParams, n: u32) -> Result<LsPartition> {
    partition_at_capped(params, n, DEFAULT_MAX_INTERVALS)
}

/// Level `n`, failing with [`Error::ResourceLimit`] if `t_n > max_intervals`.
pub fn partition_at_capped(params: LsParams, n: u32, max_intervals: usize) -> Result<LsPartition> {
    let t = counts(params, n);
    let needed = t.last();
    if needed.to_usize().is_none_or(|v| v > max_intervals) {
        return Err(Error::ResourceLimit {
            what: "partition intervals",
            needed: needed.to_string(),
            limit: max_intervals,
        });
    }
    let mut powers = GammaPowers::new(params);
    let mut part = LsPartition::trivial(params);
    for _ in 0..n {
        part = part.refine_with(&mut powers);
    }
    Ok(part)
}

/// Largest level whose interval count stays within `max_intervals`.
pub fn max_level_within(params: LsParams, max_intervals: usize) -> u32 {
    let cap = BigUint::from(max_intervals);
    let mut prev = BigUint::from(1u32);
    let mut cur = BigUint::from(params.base());
    if cur > cap {
        return 0;
    }
    let mut n = 1;
    loop {
        let next = &cur * params.long() + &prev * params.short();
        if next > cap {
            return n;
        }
        prev = std::mem::replace(&mut cur, next);
        n += 1;
    }
}
