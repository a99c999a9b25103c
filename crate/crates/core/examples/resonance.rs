//! Searches small parameter pairs for exact power relations between their
//! ratios, and shows the interval-count relation behind (1,1) and (4,1).
//!
//! ```bash
//! cargo run --release --example resonance
//! ```

use lsqmc::square::count_table;
use lsqmc::{detect_resonance, LsParams};

fn main() -> lsqmc::Result<()> {
    let mut all = Vec::new();
    for l in 1..=30 {
        for s in 1..=4 {
            all.push(LsParams::new(l, s)?);
        }
    }
    println!("related pairs (L,S <= 30x4, exponents <= 12):");
    for (i, &a) in all.iter().enumerate() {
        for &b in &all[i + 1..] {
            let r = detect_resonance(a, b, 12);
            if let Some((p, q)) = r.exponents {
                let counts = match r.count_relation {
                    Some(k) => format!("t_n vs t_{k}n: equal"),
                    None => "no count relation".into(),
                };
                println!("  {a} ~ {b}: gamma1^{p} = gamma2^{q}, {counts}");
            }
        }
    }

    let (g, f) = (LsParams::new(1, 1)?, LsParams::new(4, 1)?);
    println!("\n{:>3} {:>14} {:>14}", "n", "t_3n (1,1)", "t_n (4,1)");
    let fine = count_table(g, g, 36);
    let coarse = count_table(f, f, 12);
    for n in 0..=12 {
        println!("{n:>3} {:>14} {:>14}", fine[3 * n].0, coarse[n].0);
    }
    Ok(())
}
