//! Discrepancy growth of 1D prefixes in the three regimes, with the closed
//! forms checked against the brute-force search on the small sizes.
//!
//! ```bash
//! cargo run --release --example discrepancy_scan
//! ```

use lsqmc::{brute_force_1d, extreme_disc_1d, sequence_prefix, star_disc_1d, LsParams, Mode1d};

fn main() -> lsqmc::Result<()> {
    let sizes = [100, 300, 1000, 3000, 10_000, 30_000];
    for (l, s) in [(1, 1), (1, 2), (1, 3)] {
        let ps = LsParams::new(l, s)?;
        // Only meaningful for S >= L + 2; elsewhere the last column is N*D*.
        let e = ps.growth_exponent().max(0.0);
        let pts = sequence_prefix(ps, *sizes.last().unwrap());
        println!("{ps} ({:?}, e = {e:.4})", ps.regime());
        println!("{:>7} {:>12} {:>12} {:>10} {:>10} {:>10}", "N", "D*", "D", "N*D*/logN", "N*D*/log2", "N*D*/N^e");
        for &n in &sizes {
            let p = &pts.points()[..n];
            let star = star_disc_1d(p)?;
            let ext = extreme_disc_1d(p)?;
            if n <= 1000 {
                assert!((star.value - brute_force_1d(p, Mode1d::Star)?.value).abs() < 1e-12);
                assert!((ext.value - brute_force_1d(p, Mode1d::Extreme)?.value).abs() < 1e-12);
            }
            let nf = n as f64;
            let nd = nf * star.value;
            println!(
                "{n:>7} {:>12.3e} {:>12.3e} {:>10.4} {:>10.4} {:>10.4}",
                star.value,
                ext.value,
                nd / nf.ln(),
                nd / nf.ln().powi(2),
                nd / nf.powf(e)
            );
        }
        println!();
    }
    Ok(())
}
