//! Admissible indices, the digit map and the prefix/partition duality.
//!
//! ```bash
//! cargo run --release --example ls_sequence -- 1,1 12
//! ```

use std::collections::HashSet;

use lsqmc::{admissible_indices, parse_params, partition_at, sequence_prefix, DigitVector, LsParams, QuadNum};

fn main() -> lsqmc::Result<()> {
    let mut args = std::env::args().skip(1);
    let ps = match args.next() {
        Some(arg) => parse_params(&arg)?,
        None => LsParams::new(1, 1)?,
    };
    let count: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(12);

    let idx = admissible_indices(ps, count);
    let pts = sequence_prefix(ps, count);
    println!("first {count} points of the LS-sequence {ps}:");
    for (i, (m, x)) in idx.iter().zip(pts.points()).enumerate() {
        let digits = DigitVector::from_index(ps, *m);
        println!("  xi^{:<3} index {m:>5} digits {:?}  ->  {:.10}  = {x}", i + 1, digits.digits(), x.to_f64());
    }

    // The first t_n points are a reordering of the left endpoints of level n.
    for n in 0..=6 {
        let part = partition_at(ps, n)?;
        let ends: HashSet<&QuadNum> = part.intervals().iter().map(|iv| &iv.left).collect();
        let prefix = sequence_prefix(ps, part.len());
        let first: HashSet<&QuadNum> = prefix.points().iter().collect();
        println!("level {n}: t_n = {:>5}, prefix equals endpoints: {}", part.len(), ends == first);
    }
    Ok(())
}
