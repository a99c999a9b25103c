//! LS-point sets à la van der Corput: `((n − 1)/N, ξⁿ)` for `n = 1..N`.
//!
//! ```bash
//! cargo run --release --example van_der_corput_square -- 2,1 vdc.svg
//! ```

use lsqmc::cli::render_svg;
use lsqmc::square::grid_marginal_discrepancy;
use lsqmc::{parse_params, vdc_set, LsParams};

fn main() -> lsqmc::Result<()> {
    let mut args = std::env::args().skip(1);
    let ps = match args.next() {
        Some(arg) => parse_params(&arg)?,
        None => LsParams::new(1, 1)?,
    };
    println!("{:>7} {:>12} {:>12} {:>10}", "N", "D*", "x-marg D*", "N*D*/logN");
    for n in [100, 300, 1000, 3000, 10_000] {
        let set = vdc_set(ps, n);
        let d = set.star_discrepancy()?;
        let grid = grid_marginal_discrepancy(&set)?;
        println!(
            "{n:>7} {:>12.4e} {:>12.4e} {:>10.4}",
            d.value,
            grid.value,
            n as f64 * d.value / (n as f64).ln()
        );
    }
    if let Some(path) = args.next() {
        std::fs::write(&path, render_svg(&vdc_set(ps, 2000), false))?;
        println!("wrote {path}");
    }
    Ok(())
}
