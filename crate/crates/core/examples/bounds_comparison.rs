//! Lossy block-code bound against the succinct-structure bound.
//!
//! cargo run --example bounds_comparison

use ldsc::stats::{compare_bounds, crossover, DistortionSchedule};
use ldsc::SourceModel;

fn main() -> ldsc::Result<()> {
    let model: SourceModel = "11/100".parse()?;
    let ns: Vec<u64> = (8..=24).map(|e| 1u64 << e).collect();
    for schedule in [DistortionSchedule::Fixed(0.05), DistortionSchedule::InverseLog] {
        println!("{schedule:?}");
        let rows = compare_bounds(&model, schedule, 1, &ns)?;
        for r in &rows {
            let winner = r.tighter.map_or("-".to_string(), |t| t.to_string());
            println!("  n=2^{:<2} d={:.4} ours={:.4} succinct={:.4} {winner}", r.n.ilog2(), r.distortion, r.our_bound, r.succinct_bound);
        }
        match crossover(&rows) {
            Some(n) => println!("  succinct bound wins from n=2^{}", n.ilog2()),
            None => println!("  no crossover in range"),
        }
    }
    Ok(())
}
