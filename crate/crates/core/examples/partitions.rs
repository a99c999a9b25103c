//! The first levels of an LS-sequence of partitions, the interval counts and
//! the discrepancy of the left endpoints.
//!
//! ```bash
//! cargo run --release --example partitions -- 2,1
//! ```

use lsqmc::partition::max_level_within;
use lsqmc::{counts, extreme_disc_1d, parse_params, partition_at, LsParams};

fn main() -> lsqmc::Result<()> {
    let ps = match std::env::args().nth(1) {
        Some(arg) => parse_params(&arg)?,
        None => LsParams::new(1, 1)?,
    };
    println!("LS-partitions for {ps}, gamma ~ {:.6}\n", ps.gamma_f64());
    for n in 0..=3 {
        let part = partition_at(ps, n)?;
        let cells: Vec<String> = part
            .intervals()
            .iter()
            .map(|iv| {
                format!(
                    "[{:.4},{:.4}[{}",
                    iv.left.to_f64(),
                    iv.right().to_f64(),
                    if part.is_long(iv) { "" } else { "s" }
                )
            })
            .collect();
        println!("level {n}: {}", cells.join(" "));
    }

    let top = max_level_within(ps, 200_000);
    let t = counts(ps, top);
    println!("\n{:>5} {:>8} {:>14} {:>10}", "n", "t_n", "D", "t_n*D");
    for n in 1..=top {
        let ends = partition_at(ps, n)?.left_endpoints();
        let d = extreme_disc_1d(ends.points())?.value;
        let tn = ends.len();
        assert_eq!(t.values()[n as usize], tn.into());
        println!("{n:>5} {tn:>8} {d:>14.8} {:>10.5}", tn as f64 * d);
    }
    Ok(())
}
