//! Block length and locality chosen by the planner as n grows.
//!
//! cargo run --release --example locality_sweep

use ldsc::lossless::plan_sweep;
use ldsc::stats::error_exponent;
use ldsc::SourceModel;

fn main() -> ldsc::Result<()> {
    let model: SourceModel = "11/100".parse()?;
    let e = error_exponent(0.6, &model);
    println!("E(0.6) = {e:.6}, 4/E = {:.1}", 4.0 / e);
    let ns: Vec<u64> = (10..=20).step_by(2).map(|k| 1u64 << k).collect();
    for p in plan_sweep(&ns, 0.6, 1e-3, &model)? {
        println!(
            "n=2^{:<2} start={:<5} b={:<5} k={:<5} error={:.3e} C={:.1}",
            p.n.ilog2(),
            p.start_block_len,
            p.block_len,
            p.code_bits,
            p.exact_error(),
            p.implied_c()
        );
    }
    Ok(())
}
