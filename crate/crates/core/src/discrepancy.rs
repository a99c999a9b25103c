//! Exact discrepancy of finite point sets.
//!
//! Point order is always decided by exact comparison ([`Coordinate`] is `Ord`);
//! only lengths and areas are evaluated on the float shadows. Suprema over
//! half-open boxes are limits, so every critical coordinate is evaluated twice:
//! once with points on the boundary excluded ("open") and once included
//! ("closed", the limit from above).
//!
//! * [`star_disc_1d`] / [`extreme_disc_1d`]: closed forms over the sorted points.
//! * [`brute_force_1d`]: exhaustive enumeration of critical intervals, `O(N²)`.
//! * [`star_disc_2d`]: anchored boxes via a sweep over x with a histogram over
//!   y ranks, `O(N²)` and split across threads.
//! * [`brute_force_2d`]: direct counting on the full critical grid, `O(N³)`.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadfield::{QuadNum, SurdKey};

/// Point-count guard for [`brute_force_1d`].
pub const MAX_BRUTE_FORCE_1D: usize = 5000;
/// Point-count guard for [`star_disc_2d`].
pub const MAX_GRID_SCAN_2D: usize = 100_000;
/// Point-count guard for [`brute_force_2d`].
pub const MAX_BRUTE_FORCE_2D: usize = 500;

/// An exactly ordered coordinate with a float projection.
pub trait Coordinate: Ord {
    fn shadow(&self) -> f64;

    /// Integer sort key, ordered exactly like `self`.
    fn key(&self) -> SurdKey;
}

impl Coordinate for QuadNum {
    fn shadow(&self) -> f64 {
        self.to_f64()
    }

    fn key(&self) -> SurdKey {
        self.surd_key()
    }
}

impl Coordinate for BigRational {
    fn shadow(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn key(&self) -> SurdKey {
        SurdKey::rational(self)
    }
}

/// Indices of `values` in exact increasing order, plus the keys.
fn exact_order<T: Coordinate>(values: &[T]) -> (Vec<usize>, Vec<SurdKey>) {
    let keys: Vec<SurdKey> = values.iter().map(Coordinate::key).collect();
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| keys[i].cmp(&keys[j]));
    (order, keys)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Formula,
    GridScan,
    BruteForce,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode1d {
    Star,
    Extreme,
}

/// One end of a critical interval. `closed` means points equal to `at` are
/// counted on the inside (for an upper end: the limit from above).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bound {
    pub at: f64,
    pub closed: bool,
}

/// The interval or box attaining the reported value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `[lo, hi[` in one dimension; `lo.at = 0` for the star variant.
    Interval { lo: Bound, hi: Bound, count: usize },
    /// `[0, x[ × [0, y[`, both ends open or both closed.
    Box { x: f64, y: f64, closed: bool, count: usize },
}

impl Witness {
    /// `|count/N − volume|` for this witness.
    pub fn local_discrepancy(&self, n: usize) -> f64 {
        let (count, volume) = match *self {
            Witness::Interval { lo, hi, count } => (count, hi.at - lo.at),
            Witness::Box { x, y, count, .. } => (count, x * y),
        };
        (count as f64 / n as f64 - volume).abs()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscrepancyReport {
    pub n: usize,
    pub value: f64,
    pub witness: Witness,
    pub method: Method,
}

/// Sorted view of a point set: positions in exact order plus tie groups.
struct Sorted {
    shadow: Vec<f64>,
    /// For each sorted position, the first position of its tie group.
    group_start: Vec<usize>,
    /// For each sorted position, one past the last position of its tie group.
    group_end: Vec<usize>,
}

impl Sorted {
    fn new<T: Coordinate>(points: &[T]) -> Self {
        let (order, keys) = exact_order(points);
        let n = order.len();
        let mut group_start = vec![0; n];
        let mut group_end = vec![n; n];
        for k in 1..n {
            group_start[k] = if keys[order[k]] == keys[order[k - 1]] {
                group_start[k - 1]
            } else {
                k
            };
        }
        for k in (0..n.saturating_sub(1)).rev() {
            group_end[k] = if group_start[k + 1] == group_start[k] {
                group_end[k + 1]
            } else {
                k + 1
            };
        }
        let shadow = order.iter().map(|&i| points[i].shadow()).collect();
        Self {
            shadow,
            group_start,
            group_end,
        }
    }
}

fn non_empty(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyInput("discrepancy of an empty point set"));
    }
    Ok(())
}

/// Star discrepancy `sup_a |#{x < a}/N − a|` in one dimension.
pub fn star_disc_1d<T: Coordinate>(points: &[T]) -> Result<DiscrepancyReport> {
    non_empty(points.len())?;
    let n = points.len();
    let nf = n as f64;
    let s = Sorted::new(points);
    let mut best = f64::NEG_INFINITY;
    let mut witness = None;
    for (k, &x) in s.shadow.iter().enumerate() {
        let i = (k + 1) as f64;
        // Closed limit at x: all points ≤ x are counted.
        let over = i / nf - x;
        if over > best {
            best = over;
            witness = Some(Witness::Interval {
                lo: Bound { at: 0.0, closed: true },
                hi: Bound { at: x, closed: true },
                count: s.group_end[k],
            });
        }
        let under = x - (i - 1.0) / nf;
        if under > best {
            best = under;
            witness = Some(Witness::Interval {
                lo: Bound { at: 0.0, closed: true },
                hi: Bound { at: x, closed: false },
                count: s.group_start[k],
            });
        }
    }
    Ok(DiscrepancyReport {
        n,
        value: best,
        witness: witness.expect("non-empty input"),
        method: Method::Formula,
    })
}

/// Extreme discrepancy `sup_{a<b} |#{a ≤ x < b}/N − (b − a)|` in one dimension,
/// via `1/N + max(i/N − x_i) + max(x_i − i/N)`.
pub fn extreme_disc_1d<T: Coordinate>(points: &[T]) -> Result<DiscrepancyReport> {
    non_empty(points.len())?;
    let n = points.len();
    let nf = n as f64;
    let s = Sorted::new(points);
    let (mut hi_k, mut hi_v) = (0, f64::NEG_INFINITY);
    let (mut lo_k, mut lo_v) = (0, f64::NEG_INFINITY);
    for (k, &x) in s.shadow.iter().enumerate() {
        let i = (k + 1) as f64;
        // Later positions win ties for the upper end, earlier for the lower.
        if i / nf - x >= hi_v {
            hi_v = i / nf - x;
            hi_k = k;
        }
        if x - i / nf > lo_v {
            lo_v = x - i / nf;
            lo_k = k;
        }
    }
    let value = 1.0 / nf + hi_v + lo_v;
    let witness = if lo_k <= hi_k {
        // Surplus: [x_lo, x_hi] with both tie groups inside.
        let lo_first = s.group_start[lo_k];
        Witness::Interval {
            lo: Bound { at: s.shadow[lo_k], closed: true },
            hi: Bound { at: s.shadow[hi_k], closed: true },
            count: s.group_end[hi_k] - lo_first,
        }
    } else {
        // Deficit: ]x_hi, x_lo[ with both tie groups outside.
        Witness::Interval {
            lo: Bound { at: s.shadow[hi_k], closed: false },
            hi: Bound { at: s.shadow[lo_k], closed: false },
            count: s.group_start[lo_k] - s.group_end[hi_k],
        }
    };
    Ok(DiscrepancyReport {
        n,
        value,
        witness,
        method: Method::Formula,
    })
}

/// Exhaustive search over all critical intervals. Independent of the closed
/// forms above; used as their oracle.
pub fn brute_force_1d<T: Coordinate>(points: &[T], mode: Mode1d) -> Result<DiscrepancyReport> {
    non_empty(points.len())?;
    let n = points.len();
    if n > MAX_BRUTE_FORCE_1D {
        return Err(Error::ResourceLimit {
            what: "1D brute-force discrepancy points",
            needed: n.to_string(),
            limit: MAX_BRUTE_FORCE_1D,
        });
    }
    // Distinct values with multiplicities, ordered by `Ord` rather than keys.
    let mut all: Vec<&T> = points.iter().collect();
    all.sort();
    let mut distinct: Vec<&T> = Vec::new();
    let mut mult: Vec<usize> = Vec::new();
    for p in all {
        if distinct.last().is_some_and(|d| d.cmp(&p) == Ordering::Equal) {
            *mult.last_mut().unwrap() += 1;
        } else {
            distinct.push(p);
            mult.push(1);
        }
    }
    let shadows: Vec<f64> = distinct.iter().map(|d| d.shadow()).collect();
    let m = distinct.len();
    // below[r] = #{x < v_r}, upto[r] = #{x ≤ v_r}
    let upto: Vec<usize> = mult
        .iter()
        .scan(0, |acc, &k| {
            *acc += k;
            Some(*acc)
        })
        .collect();
    let below: Vec<usize> = upto.iter().zip(&mult).map(|(u, k)| u - k).collect();

    // Candidate ends: (rank or None for 0 / 1, closed flag).
    // Lower ends: 0, or each value open/closed. Upper ends: each value open/closed, or 1.
    let mut lows: Vec<(Option<usize>, bool)> = vec![(None, true)];
    if mode == Mode1d::Extreme {
        for r in 0..m {
            lows.push((Some(r), true));
            lows.push((Some(r), false));
        }
    }
    let mut highs: Vec<(Option<usize>, bool)> = Vec::with_capacity(2 * m + 1);
    for r in 0..m {
        highs.push((Some(r), false));
        highs.push((Some(r), true));
    }
    highs.push((None, false));

    let nf = n as f64;
    let mut best = f64::NEG_INFINITY;
    let mut witness = None;
    for &(lo, lo_closed) in &lows {
        // #{x inside from the lower end}
        let (lo_at, from) = match lo {
            None => (0.0, n),
            Some(r) => (shadows[r], if lo_closed { n - below[r] } else { n - upto[r] }),
        };
        for &(hi, hi_closed) in &highs {
            if let (Some(a), Some(b)) = (lo, hi) {
                if b < a {
                    continue;
                }
            }
            let (hi_at, beyond) = match hi {
                None => (1.0, 0),
                Some(r) => (shadows[r], if hi_closed { n - upto[r] } else { n - below[r] }),
            };
            if from < beyond {
                continue;
            }
            let count = from - beyond;
            let v = (count as f64 / nf - (hi_at - lo_at)).abs();
            if v > best {
                best = v;
                witness = Some(Witness::Interval {
                    lo: Bound { at: lo_at, closed: lo_closed },
                    hi: Bound { at: hi_at, closed: hi_closed },
                    count,
                });
            }
        }
    }
    Ok(DiscrepancyReport {
        n,
        value: best,
        witness: witness.expect("candidate set is never empty"),
        method: Method::BruteForce,
    })
}

/// Dense ranks (ties share a rank) and the float value of each rank.
fn dense_ranks<T: Coordinate>(values: &[T]) -> (Vec<usize>, Vec<f64>) {
    let (order, keys) = exact_order(values);
    let mut ranks = vec![0; values.len()];
    let mut reps = Vec::new();
    for (k, &i) in order.iter().enumerate() {
        if k == 0 || keys[i] != keys[order[k - 1]] {
            reps.push(values[i].shadow());
        }
        ranks[i] = reps.len() - 1;
    }
    (ranks, reps)
}

#[derive(Clone, Copy)]
struct Best {
    value: f64,
    witness: Witness,
}

impl Best {
    fn none() -> Self {
        Best {
            value: f64::NEG_INFINITY,
            witness: Witness::Box {
                x: 0.0,
                y: 0.0,
                closed: false,
                count: 0,
            },
        }
    }

    fn offer(&mut self, value: f64, witness: Witness) {
        if value > self.value {
            self.value = value;
            self.witness = witness;
        }
    }

    fn max(self, other: Best) -> Best {
        if other.value > self.value {
            other
        } else {
            self
        }
    }
}

fn check_2d(xs: usize, ys: usize, limit: usize, what: &'static str) -> Result<usize> {
    assert_eq!(xs, ys, "coordinate slices must have equal length");
    non_empty(xs)?;
    if xs > limit {
        return Err(Error::ResourceLimit {
            what,
            needed: xs.to_string(),
            limit,
        });
    }
    Ok(xs)
}

/// Star discrepancy over anchored boxes `[0, a[ × [0, b[`.
pub fn star_disc_2d<X: Coordinate, Y: Coordinate>(
    xs: &[X],
    ys: &[Y],
) -> Result<DiscrepancyReport> {
    let n = check_2d(xs.len(), ys.len(), MAX_GRID_SCAN_2D, "2D grid-scan points")?;
    let (rx, ax) = dense_ranks(xs);
    let (ry, by) = dense_ranks(ys);
    let (mx, my) = (ax.len(), by.len());
    // y ranks of the points in each x column
    let mut columns: Vec<Vec<usize>> = vec![Vec::new(); mx];
    for i in 0..n {
        columns[rx[i]].push(ry[i]);
    }
    let nf = n as f64;
    // Candidate a values: each distinct x, then 1 (index mx, empty column).
    let a_at = |r: usize| if r < mx { ax[r] } else { 1.0 };
    let b_at = |s: usize| if s < my { by[s] } else { 1.0 };

    let threads = rayon::current_num_threads().max(1);
    let chunk = (mx + 1).div_ceil(threads * 4).max(16);
    let starts: Vec<usize> = (0..=mx).step_by(chunk).collect();
    let best = starts
        .par_iter()
        .map(|&start| {
            let end = (start + chunk).min(mx + 1);
            let mut below = vec![0usize; my];
            for col in &columns[..start] {
                for &y in col {
                    below[y] += 1;
                }
            }
            let mut at = vec![0usize; my];
            let mut best = Best::none();
            for r in start..end {
                let a = a_at(r);
                if r < mx {
                    for &y in &columns[r] {
                        at[y] += 1;
                    }
                }
                let (mut open, mut closed) = (0usize, 0usize);
                for s in 0..=my {
                    let b = b_at(s);
                    if s < my {
                        closed += below[s] + at[s];
                    }
                    let area = a * b;
                    best.offer(
                        area - open as f64 / nf,
                        Witness::Box { x: a, y: b, closed: false, count: open },
                    );
                    best.offer(
                        closed as f64 / nf - area,
                        Witness::Box { x: a, y: b, closed: true, count: closed },
                    );
                    if s < my {
                        open += below[s];
                    }
                }
                if r < mx {
                    for &y in &columns[r] {
                        at[y] -= 1;
                        below[y] += 1;
                    }
                }
            }
            best
        })
        .reduce(Best::none, Best::max);
    Ok(DiscrepancyReport {
        n,
        value: best.value,
        witness: best.witness,
        method: Method::GridScan,
    })
}

/// Exhaustive anchored-box search: every critical `(a, b)` pair, counting
/// every point directly. Ranks are computed by pairwise comparison, not by
/// sorting.
pub fn brute_force_2d<X: Coordinate, Y: Coordinate>(xs: &[X], ys: &[Y]) -> Result<DiscrepancyReport> {
    let n = check_2d(xs.len(), ys.len(), MAX_BRUTE_FORCE_2D, "2D brute-force points")?;
    let rank = |i: usize, v: &dyn Fn(usize, usize) -> Ordering| -> usize {
        // number of distinct values strictly below point i
        let mut lower: Vec<usize> = (0..n).filter(|&j| v(j, i) == Ordering::Less).collect();
        lower.sort_by(|&p, &q| v(p, q));
        lower.dedup_by(|p, q| v(*p, *q) == Ordering::Equal);
        lower.len()
    };
    let cx = |i: usize, j: usize| xs[i].cmp(&xs[j]);
    let cy = |i: usize, j: usize| ys[i].cmp(&ys[j]);
    let rx: Vec<usize> = (0..n).map(|i| rank(i, &cx)).collect();
    let ry: Vec<usize> = (0..n).map(|i| rank(i, &cy)).collect();
    let mx = rx.iter().max().map_or(0, |m| m + 1);
    let my = ry.iter().max().map_or(0, |m| m + 1);
    let mut ax = vec![1.0; mx + 1];
    let mut by = vec![1.0; my + 1];
    for i in 0..n {
        ax[rx[i]] = xs[i].shadow();
        by[ry[i]] = ys[i].shadow();
    }
    let nf = n as f64;
    let mut best = Best::none();
    for r in 0..=mx {
        for s in 0..=my {
            let open = (0..n).filter(|&i| rx[i] < r && ry[i] < s).count();
            let closed = (0..n).filter(|&i| rx[i] <= r && ry[i] <= s).count();
            let area = ax[r] * by[s];
            best.offer(
                area - open as f64 / nf,
                Witness::Box { x: ax[r], y: by[s], closed: false, count: open },
            );
            best.offer(
                closed as f64 / nf - area,
                Witness::Box { x: ax[r], y: by[s], closed: true, count: closed },
            );
        }
    }
    Ok(DiscrepancyReport {
        n,
        value: best.value,
        witness: best.witness,
        method: Method::BruteForce,
    })
}
