//! Acceptance gate. Every criterion prints one `PASS`/`FAIL` line and then
//! asserts. The lines go straight to stdout so they show up even when the
//! test harness captures output.

use std::collections::HashSet;
use std::io::Write;
use std::time::Instant;

use lsqmc::discrepancy::{MAX_BRUTE_FORCE_1D, MAX_BRUTE_FORCE_2D};
use lsqmc::partition::max_level_within;
use lsqmc::{
    brute_force_1d, brute_force_2d, counts, detect_resonance, extreme_disc_1d, halton_pair, partition_at,
    partition_at_capped, phi, sequence_prefix, star_disc_1d, star_disc_2d, vdc_set, Error, LsParams, Mode1d,
    QuadNum, SqrtNum,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params(l: u32, s: u32) -> LsParams {
    LsParams::new(l, s).unwrap()
}

fn report(id: &str, ok: bool, detail: &str) {
    let line = format!("{} criterion {id}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
}

fn ratio(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::MIN, f64::max);
    let min = values.iter().copied().fold(f64::MAX, f64::min);
    max / min
}

/// Kendall's tau-b between `x` and `y`.
fn kendall_tau(x: &[f64], y: &[f64]) -> f64 {
    let (mut conc, mut disc, mut tx, mut ty) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let a = (x[i] - x[j]).signum() as i64 * i64::from(x[i] != x[j]);
            let b = (y[i] - y[j]).signum() as i64 * i64::from(y[i] != y[j]);
            match (a, b) {
                (0, 0) => {}
                (0, _) => tx += 1,
                (_, 0) => ty += 1,
                _ if a == b => conc += 1,
                _ => disc += 1,
            }
        }
    }
    let n0 = (conc + disc) as f64;
    (conc - disc) as f64 / ((n0 + tx as f64) * (n0 + ty as f64)).sqrt()
}

/// `t_n·D(ρⁿ)` for `1 ≤ n` with `t_n ≤ cap`, as `(n, t_n, D)`.
fn partition_series(ps: LsParams, cap: usize) -> Vec<(u32, usize, f64)> {
    (1..=max_level_within(ps, cap))
        .map(|n| {
            let ends = partition_at_capped(ps, n, cap).unwrap().left_endpoints();
            let d = extreme_disc_1d(ends.points()).unwrap().value;
            (n, ends.len(), d)
        })
        .collect()
}

#[test]
fn criterion_1_prefix_partition_duality() {
    let start = Instant::now();
    let pairs = [(1, 1), (2, 1), (3, 1), (4, 1), (5, 1), (1, 2), (1, 3), (2, 3)];
    let mut failures = vec![];
    let mut checked = 0;
    for (l, s) in pairs {
        let ps = params(l, s);
        let top = max_level_within(ps, 10_000);
        let t_max = counts(ps, top).last().to_usize().unwrap();
        let prefix = sequence_prefix(ps, t_max);
        for n in 0..=top {
            let part = partition_at(ps, n).unwrap();
            let ends: HashSet<&QuadNum> = part.intervals().iter().map(|iv| &iv.left).collect();
            let first: HashSet<&QuadNum> = prefix.points()[..part.len()].iter().collect();
            if ends.len() != part.len() || ends != first {
                failures.push(format!("{ps} level {n}"));
            }
            checked += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = failures.is_empty() && secs < 60.0;
    report(
        "1",
        ok,
        &format!("{checked} levels over 8 pairs, mismatches {failures:?}, {secs:.1}s"),
    );
    assert!(ok);
}

#[test]
fn criterion_2_count_relation() {
    let t = counts(params(1, 1), 90);
    let t4 = counts(params(4, 1), 30);
    let bad: Vec<usize> = (0..=30).filter(|&n| t4.values()[n] != t.values()[3 * n]).collect();
    let ok = bad.is_empty();
    report("2", ok, &format!("t'(n) = t(3n) for n <= 30, mismatches at {bad:?}"));
    assert!(ok);
}

#[test]
fn criterion_3_resonance_identity() {
    let lhs = params(1, 1).gamma().to_sqrt_form().pow(3);
    let rhs = params(4, 1).gamma().to_sqrt_form();
    let root5_minus_2 = SqrtNum::new(BigRational::from_integer((-2).into()), BigRational::from_integer(1.into()), 5);
    let ok = lhs == rhs && rhs == root5_minus_2;
    report("3", ok, &format!("gamma(1,1)^3 = {lhs}, gamma(4,1) = {rhs}"));
    assert!(ok);
}

#[test]
fn criterion_4_partition_regimes() {
    let start = Instant::now();
    let cap = 100_000;
    let mut ok = true;
    let mut lines = vec![];
    for (l, s) in [(1, 1), (2, 1), (3, 1)] {
        let ps = params(l, s);
        let series = partition_series(ps, cap);
        let ns: Vec<f64> = series.iter().map(|r| f64::from(r.0)).collect();
        let td: Vec<f64> = series.iter().map(|r| r.1 as f64 * r.2).collect();
        let (rt, tau) = (ratio(&td), kendall_tau(&ns, &td));
        let pass = rt <= 10.0 && tau < 0.5;
        ok &= pass;
        lines.push(format!(
            "(a) {ps}: t*D in [{:.4}, {:.4}] ratio {rt:.3}, Kendall tau {tau:.3} [{}]",
            td.iter().copied().fold(f64::MAX, f64::min),
            td.iter().copied().fold(f64::MIN, f64::max),
            if pass { "ok" } else { "violated" }
        ));
    }
    let ps = params(1, 2);
    let vals: Vec<f64> = partition_series(ps, cap)
        .iter()
        .map(|&(_, t, d)| t as f64 * d / (t as f64).ln())
        .collect();
    let rt = ratio(&vals);
    ok &= rt <= 10.0;
    lines.push(format!("(b) {ps}: t*D/log t ratio {rt:.3}"));
    let ps = params(1, 3);
    let e = ps.growth_exponent();
    let vals: Vec<f64> = partition_series(ps, cap)
        .iter()
        .map(|&(_, t, d)| t as f64 * d / (t as f64).powf(e))
        .collect();
    let rt = ratio(&vals);
    ok &= rt <= 10.0;
    lines.push(format!("(c) {ps}: t*D/t^{e:.4} ratio {rt:.3}"));
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 300.0;
    report("4", ok, &format!("{} ; {secs:.1}s", lines.join(" ; ")));
    assert!(ok, "{}", lines.join("\n"));
}

/// The values behind criterion 4 do not depend on the closed form: the
/// brute-force enumeration reproduces them wherever it is allowed to run.
#[test]
fn partition_series_matches_brute_force() {
    for (l, s) in [(1, 1), (2, 1), (3, 1), (1, 2), (1, 3)] {
        let ps = params(l, s);
        for (n, t, d) in partition_series(ps, MAX_BRUTE_FORCE_1D.min(2000)) {
            let ends = partition_at(ps, n).unwrap().left_endpoints();
            let b = brute_force_1d(ends.points(), Mode1d::Extreme).unwrap().value;
            assert!((b - d).abs() < 1e-12, "{ps} level {n} (t = {t}): {d} vs {b}");
        }
    }
}

#[test]
fn criterion_5_point_regimes() {
    let start = Instant::now();
    let sizes = [100usize, 1000, 10_000];
    let mut ok = true;
    let mut lines = vec![];
    for (l, s) in [(1, 1), (1, 2), (1, 3)] {
        let ps = params(l, s);
        let e = ps.growth_exponent();
        let normalize = |n: usize, d: f64| {
            let nf = n as f64;
            if s >= l + 2 {
                nf * d / nf.powf(e)
            } else {
                nf * d / nf.ln()
            }
        };
        let prefix = sequence_prefix(ps, 10_000);
        let one: Vec<f64> = sizes
            .iter()
            .map(|&n| normalize(n, star_disc_1d(&prefix.points()[..n]).unwrap().value))
            .collect();
        let two: Vec<f64> = sizes
            .iter()
            .map(|&n| normalize(n, vdc_set(ps, n).star_discrepancy().unwrap().value))
            .collect();
        let (r1, r2) = (ratio(&one), ratio(&two));
        ok &= r1 <= 10.0 && r2 <= 10.0;
        let label = if s >= l + 2 { format!("N*D/N^{e:.4}") } else { "N*D/log N".into() };
        lines.push(format!("{ps} {label}: 1D ratio {r1:.3}, 2D ratio {r2:.3}"));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 600.0;
    report("5", ok, &format!("{} ; {secs:.1}s", lines.join(" ; ")));
    assert!(ok);
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    // Small denominators make ties common.
    let den: i64 = if rng.gen_bool(0.3) { rng.gen_range(1..=16) } else { rng.gen_range(1..=1_000_000) };
    BigRational::new(rng.gen_range(0..den).into(), den.into())
}

#[test]
fn criterion_6_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut worst_1d: f64 = 0.0;
    let pairs = [(1, 1), (2, 1), (1, 2), (2, 3), (3, 1)];
    for i in 0..1000 {
        let n = rng.gen_range(1..=500);
        let diffs = if i % 2 == 0 {
            let pts: Vec<BigRational> = (0..n).map(|_| random_rational(&mut rng)).collect();
            [
                star_disc_1d(&pts).unwrap().value - brute_force_1d(&pts, Mode1d::Star).unwrap().value,
                extreme_disc_1d(&pts).unwrap().value - brute_force_1d(&pts, Mode1d::Extreme).unwrap().value,
            ]
        } else {
            // A random subset of LS-points, possibly repeated.
            let (l, s) = pairs[rng.gen_range(0..pairs.len())];
            let prefix = sequence_prefix(params(l, s), 600);
            let pts: Vec<QuadNum> = (0..n).map(|_| prefix.points()[rng.gen_range(0..600)].clone()).collect();
            [
                star_disc_1d(&pts).unwrap().value - brute_force_1d(&pts, Mode1d::Star).unwrap().value,
                extreme_disc_1d(&pts).unwrap().value - brute_force_1d(&pts, Mode1d::Extreme).unwrap().value,
            ]
        };
        worst_1d = diffs.iter().fold(worst_1d, |w, d| w.max(d.abs()));
    }

    let mut worst_2d: f64 = 0.0;
    let mut worst_sample_excess = f64::MIN;
    let boxes_per_instance = 2_000_000 / 50;
    for i in 0..50 {
        let n = rng.gen_range(1..=200usize.min(MAX_BRUTE_FORCE_2D));
        let (grid, brute, sampled) = if i % 2 == 0 {
            let xs: Vec<BigRational> = (0..n).map(|_| random_rational(&mut rng)).collect();
            let ys: Vec<BigRational> = (0..n).map(|_| random_rational(&mut rng)).collect();
            let sampled = sample_boxes(&mut rng, &shadows(&xs), &shadows(&ys), boxes_per_instance);
            (star_disc_2d(&xs, &ys).unwrap(), brute_force_2d(&xs, &ys).unwrap(), sampled)
        } else {
            let set = halton_pair(params(1, 1), params(2, 1), n);
            let (xs, ys) = (set.x_marginal(), set.y_marginal());
            let sampled = sample_boxes(&mut rng, xs.shadow(), ys.shadow(), boxes_per_instance);
            (set.star_discrepancy().unwrap(), brute_force_2d(xs.points(), ys.points()).unwrap(), sampled)
        };
        worst_2d = worst_2d.max((grid.value - brute.value).abs());
        worst_sample_excess = worst_sample_excess.max(sampled - grid.value);
    }
    let ok = worst_1d <= 1e-12 && worst_2d <= 1e-12 && worst_sample_excess <= 1e-12;
    report(
        "6",
        ok,
        &format!(
            "1D max |formula - brute| {worst_1d:.2e} over 1000 instances; 2D max |scan - brute| {worst_2d:.2e}, \
             max(sampled - scan) {worst_sample_excess:.2e} over 50 instances x {boxes_per_instance} boxes"
        ),
    );
    assert!(ok);
}

fn shadows(v: &[BigRational]) -> Vec<f64> {
    v.iter().map(|r| r.to_f64().unwrap()).collect()
}

/// Largest `|#{p ∈ [0,a[×[0,b[}/N − ab|` over random anchored boxes.
fn sample_boxes(rng: &mut ChaCha8Rng, xs: &[f64], ys: &[f64], boxes: usize) -> f64 {
    let n = xs.len() as f64;
    let mut best: f64 = 0.0;
    for _ in 0..boxes {
        let (a, b): (f64, f64) = (rng.gen(), rng.gen());
        let count = xs.iter().zip(ys).filter(|&(&x, &y)| x < a && y < b).count();
        best = best.max((count as f64 / n - a * b).abs());
    }
    best
}

#[test]
fn criterion_7_resonance_separation() {
    let d = |x: LsParams, n: usize| halton_pair(x, params(4, 1), n).star_discrepancy().unwrap().value;
    let (res_2k, res_8k) = (d(params(1, 1), 2000), d(params(1, 1), 8000));
    let (non_2k, non_8k) = (d(params(3, 1), 2000), d(params(3, 1), 8000));
    let factor = res_2k / non_2k;
    let res_drop = 1.0 - res_8k / res_2k;
    let non_drop = 1.0 - non_8k / non_2k;
    let ok = factor >= 3.0 && res_drop <= 0.30 && non_drop >= 0.40;
    report(
        "7",
        ok,
        &format!(
            "(1,1)x(4,1) D* {res_2k:.5} -> {res_8k:.5} (drop {:.1}%), (3,1)x(4,1) D* {non_2k:.5} -> {non_8k:.5} \
             (drop {:.1}%), separation x{factor:.2}",
            100.0 * res_drop,
            100.0 * non_drop
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_8_degenerate_cases() {
    let mut checks: Vec<(&str, bool)> = vec![];
    for (l, s) in [(1, 1), (2, 3), (1, 2)] {
        let ps = params(l, s);
        let zero = [ps.zero()];
        checks.push(("star of {0} is 1", star_disc_1d(&zero).unwrap().value == 1.0));
        checks.push(("extreme of {0} is 1", extreme_disc_1d(&zero).unwrap().value == 1.0));
        let g = [ps.gamma()];
        checks.push(("extreme of {gamma} is 1", extreme_disc_1d(&g).unwrap().value == 1.0));
        checks.push(("2D star of {(0,0)} is 1", star_disc_2d(&zero, &zero).unwrap().value == 1.0));
        let p0 = partition_at(ps, 0).unwrap();
        checks.push((
            "level 0 is [0,1[",
            p0.len() == 1 && p0.intervals()[0].left == ps.zero() && p0.intervals()[0].right() == ps.one(),
        ));
        checks.push(("phi(0) = 0", phi(ps, 0).unwrap().is_zero()));
    }
    let half = [BigRational::new(BigInt::from(1), BigInt::from(2))];
    checks.push(("extreme of {1/2} is 1", extreme_disc_1d(&half).unwrap().value == 1.0));
    let empty: [QuadNum; 0] = [];
    let is_empty_err = |r: lsqmc::Result<lsqmc::DiscrepancyReport>| matches!(r, Err(Error::EmptyInput(_)));
    checks.push(("empty star 1D", is_empty_err(star_disc_1d(&empty))));
    checks.push(("empty extreme 1D", is_empty_err(extreme_disc_1d(&empty))));
    checks.push(("empty brute 1D", is_empty_err(brute_force_1d(&empty, Mode1d::Star))));
    checks.push(("empty star 2D", is_empty_err(star_disc_2d(&empty, &empty))));
    checks.push(("empty brute 2D", is_empty_err(brute_force_2d(&empty, &empty))));
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    let ok = failed.is_empty();
    report("8", ok, &format!("{} checks, failed {failed:?}", checks.len()));
    assert!(ok);
}

#[test]
fn resonance_detector_agrees_with_criteria_2_and_3() {
    let r = detect_resonance(params(1, 1), params(4, 1), 12);
    assert_eq!(r.exponents, Some((3, 1)));
    assert_eq!(r.count_relation, Some(3));
}
