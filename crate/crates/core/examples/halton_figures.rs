//! Scatter plots of four Halton style pairs, written as SVG, with their star
//! discrepancies at two sizes.
//!
//! ```bash
//! cargo run --release --example halton_figures -- out_dir 5000
//! ```

use std::path::PathBuf;

use lsqmc::cli::render_svg;
use lsqmc::{detect_resonance, halton_pair, LsParams};

fn main() -> lsqmc::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "figures".into()));
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(5000);
    std::fs::create_dir_all(&dir)?;
    let pairs = [((1, 1), (4, 1)), ((3, 1), (5, 1)), ((1, 1), (5, 1)), ((3, 1), (4, 1))];
    println!("{:<5} {:<12} {:>10} {:>10} {:>10}  resonance", "fig", "pair", "D*(N/4)", "D*(N)", "ratio");
    for (i, (a, b)) in pairs.into_iter().enumerate() {
        let (x, y) = (LsParams::new(a.0, a.1)?, LsParams::new(b.0, b.1)?);
        let set = halton_pair(x, y, n);
        let path = dir.join(format!("fig{}.svg", i + 1));
        std::fs::write(&path, render_svg(&set, false))?;
        let small = halton_pair(x, y, n / 4).star_discrepancy()?.value;
        let full = set.star_discrepancy()?.value;
        let r = detect_resonance(x, y, 12);
        let rel = match r.exponents {
            Some((p, q)) => format!("gamma1^{p} = gamma2^{q}"),
            None if r.field_match => "same field, no power relation".into(),
            None => "different fields".into(),
        };
        println!("{:<5} {:<12} {small:>10.5} {full:>10.5} {:>10.3}  {rel}", i + 1, format!("{x}x{y}"), full / small);
    }
    println!("SVG files in {}", dir.display());
    Ok(())
}
