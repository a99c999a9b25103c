//! Point sets in the unit square built from LS-sequences, and resonance
//! detection between two parameter pairs.
//!
//! * [`vdc_set`] pairs the regular grid `(n − 1)/N` with the first `N`
//!   LS-points (van der Corput style, a finite set for each `N`).
//! * [`halton_pair`] puts two LS-sequences on the two axes with a shared index
//!   (Halton style, an infinite sequence).
//!
//! Two pairs *resonate* when `γ₁^p = γ₂^q` exactly. For `(1,1)` and `(4,1)`,
//! `γ₁³ = √5 − 2 = γ₂`, so level `n` of the second partition has as many
//! intervals as level `3n` of the first and the Halton pair collapses onto a
//! lattice-like set instead of filling the square.

use num_bigint::BigUint;
use serde::Serialize;

use crate::discrepancy::{star_disc_1d, star_disc_2d, DiscrepancyReport};
use crate::error::Result;
use crate::partition::counts;
use crate::quadfield::{LsParams, QuadNum, SqrtNum};
use crate::sequence::{sequence_prefix, PointList1D};

/// Default search bound for [`detect_resonance`].
pub const DEFAULT_MAX_EXP: u32 = 12;
/// Range over which count relations are verified.
pub const COUNT_RELATION_LEVELS: u32 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    /// `((n − 1)/N, ξⁿ)` for `n = 1..=N`.
    VanDerCorput { params: LsParams },
    /// `(ξⁿ over x, ξⁿ over y)`.
    Halton { x: LsParams, y: LsParams },
}

/// Points in `[0, 1[²`, each axis exact in its own field.
#[derive(Clone, Debug, PartialEq)]
pub struct PointList2D {
    construction: Construction,
    xs: PointList1D,
    ys: PointList1D,
}

impl PointList2D {
    pub fn construction(&self) -> Construction {
        self.construction
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn x_marginal(&self) -> &PointList1D {
        &self.xs
    }

    pub fn y_marginal(&self) -> &PointList1D {
        &self.ys
    }

    pub fn exact_points(&self) -> impl Iterator<Item = (&QuadNum, &QuadNum)> {
        self.xs.points().iter().zip(self.ys.points())
    }

    /// Float projections of the points.
    pub fn shadow_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.shadow().iter().copied().zip(self.ys.shadow().iter().copied())
    }

    pub fn star_discrepancy(&self) -> Result<DiscrepancyReport> {
        star_disc_2d(self.xs.points(), self.ys.points())
    }
}

/// The first `n` points of the van der Corput style set of order `n`.
pub fn vdc_set(params: LsParams, n: usize) -> PointList2D {
    let denom = num_bigint::BigInt::from(n.max(1));
    let xs = (0..n)
        .map(|i| {
            QuadNum::from_rational(
                params,
                num_rational::BigRational::new(i.into(), denom.clone()),
            )
        })
        .collect();
    PointList2D {
        construction: Construction::VanDerCorput { params },
        xs: PointList1D::new(params, xs),
        ys: sequence_prefix(params, n),
    }
}

/// The first `n` points of the Halton style sequence over `x` and `y`.
pub fn halton_pair(x: LsParams, y: LsParams, n: usize) -> PointList2D {
    PointList2D {
        construction: Construction::Halton { x, y },
        xs: sequence_prefix(x, n),
        ys: sequence_prefix(y, n),
    }
}

/// Outcome of [`detect_resonance`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResonanceResult {
    pub related: bool,
    /// Smallest `(p, q)` with `γ₁^p = γ₂^q`.
    pub exponents: Option<(u32, u32)>,
    /// Both ratios live in the same quadratic field.
    pub field_match: bool,
    /// `k` such that the pair with exponent 1 has `t_n` equal to the other
    /// pair's `t_{k·n}` for every `n ≤ 30`; present only when verified.
    pub count_relation: Option<u32>,
}

impl ResonanceResult {
    pub fn p(&self) -> Option<u32> {
        self.exponents.map(|e| e.0)
    }

    pub fn q(&self) -> Option<u32> {
        self.exponents.map(|e| e.1)
    }
}

/// Searches `1 ≤ p, q ≤ max_exp` for an exact identity `γ₁^p = γ₂^q`.
pub fn detect_resonance(first: LsParams, second: LsParams, max_exp: u32) -> ResonanceResult {
    let field_match = first.field_radicand() == second.field_radicand();
    let mut exponents = None;
    if field_match {
        let g1 = first.gamma().to_sqrt_form();
        let g2 = second.gamma().to_sqrt_form();
        let pow2: Vec<SqrtNum> = (1..=max_exp).map(|q| g2.pow(q)).collect();
        'search: for p in 1..=max_exp {
            let lhs = g1.pow(p);
            for (q, rhs) in (1..=max_exp).zip(&pow2) {
                if &lhs == rhs {
                    exponents = Some((p, q));
                    break 'search;
                }
            }
        }
    }
    let count_relation = exponents.and_then(|(p, q)| match (p, q) {
        (k, 1) => counts_scale(second, first, k).then_some(k),
        (1, k) => counts_scale(first, second, k).then_some(k),
        _ => None,
    });
    ResonanceResult {
        related: exponents.is_some(),
        exponents,
        field_match,
        count_relation,
    }
}

/// Checks `t_n(coarse) = t_{k·n}(fine)` for all `n ≤ COUNT_RELATION_LEVELS`.
pub fn counts_scale(coarse: LsParams, fine: LsParams, k: u32) -> bool {
    let c = counts(coarse, COUNT_RELATION_LEVELS);
    let f = counts(fine, COUNT_RELATION_LEVELS * k);
    (0..=COUNT_RELATION_LEVELS as usize).all(|n| c.values()[n] == f.values()[n * k as usize])
}

/// `t_n` values of both pairs side by side, for reporting.
pub fn count_table(first: LsParams, second: LsParams, levels: u32) -> Vec<(BigUint, BigUint)> {
    let a = counts(first, levels);
    let b = counts(second, levels);
    a.values().iter().cloned().zip(b.values().iter().cloned()).collect()
}

/// Star discrepancy of the x-marginal of a van der Corput set.
pub fn grid_marginal_discrepancy(set: &PointList2D) -> Result<DiscrepancyReport> {
    star_disc_1d(set.x_marginal().points())
}
