//! Exact arithmetic in Q(γ): the root equation, comparisons and the
//! `a + b√d` view of an element.
//!
//! ```bash
//! cargo run --release --example quadratic_field -- 2,3
//! ```

use lsqmc::{parse_params, LsParams, QuadNum};
use num_rational::BigRational;

fn main() -> lsqmc::Result<()> {
    let ps = match std::env::args().nth(1) {
        Some(arg) => parse_params(&arg)?,
        None => LsParams::new(1, 1)?,
    };
    let g = ps.gamma();
    let (k, d) = ps.sqrt_decomposition();
    println!("params {ps}: discriminant {} = {k}^2 * {d}", ps.discriminant());
    println!("gamma = {g} = {} ~ {:.15}", g.to_sqrt_form(), g.to_f64());
    println!("regime {:?}, growth exponent 1 - tau = {:.6}", ps.regime(), ps.growth_exponent());

    let l = BigRational::from_integer(ps.long().into());
    let s = BigRational::from_integer(ps.short().into());
    let check = g.scale(&l) + g.pow(2).scale(&s);
    println!("L*gamma + S*gamma^2 = {check}");

    println!("\npowers of gamma:");
    for n in 1..=6 {
        let p = g.pow(n);
        println!("  gamma^{n} = {p}   [{}]   ~ {:.12}", p.to_sqrt_form(), p.to_f64());
    }

    // Two nearby elements whose float shadows agree to many digits still
    // compare exactly.
    let a = g.pow(40);
    let b = &a + &QuadNum::from_rational(ps, BigRational::new(1.into(), num_bigint::BigInt::from(10).pow(30)));
    println!("\ngamma^40 < gamma^40 + 1e-30: {}", a < b);
    println!("float shadows: {:e} and {:e}", a.to_f64(), b.to_f64());
    Ok(())
}
