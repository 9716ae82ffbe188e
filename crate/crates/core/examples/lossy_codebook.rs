//! Covering codebooks and the lossy compressor.
//!
//! cargo run --release --example lossy_codebook

use ldsc::lossy::{self, build_codebook, CodebookMethod, LossyPlanner};
use ldsc::stats::rate_distortion;
use ldsc::{BitVector, QueryLedger, SourceModel};

fn main() -> ldsc::Result<()> {
    let fair: SourceModel = "1/2".parse()?;
    let cb = build_codebook(3, 1, &fair, CodebookMethod::Greedy)?;
    let words: Vec<String> = cb.codewords().iter().map(ToString::to_string).collect();
    println!("b=3, two words: {words:?}, distortion {}", cb.distortion());

    let model: SourceModel = "3/10".parse()?;
    let mut planner = LossyPlanner::new(model);
    println!("t   b  k  rate    distortion  R(d)");
    for t in [2, 4, 8, 12] {
        let plan = planner.plan(1 << 16, 0.1, t)?;
        println!(
            "{t:<3} {:<2} {:<2} {:.4}  {:.6}    {:.4}",
            plan.block_len(),
            plan.code_bits(),
            plan.rate(),
            plan.distortion(),
            rate_distortion(&model, plan.distortion())
        );
    }

    let plan = lossy::plan_lossy(12, 0.25, 1, &fair)?;
    let x: BitVector = "011100000111".parse()?;
    let c = lossy::compress_lossy(&x, &plan)?;
    let y = lossy::decompress_lossy(&c)?;
    println!("{x} -> {y}");
    let mut ledger = QueryLedger::new();
    let (bit, q) = lossy::decode_symbol_lossy(&c, 0, &mut ledger)?;
    println!("symbol 0 decodes to {} reading {q} bit", u8::from(bit));
    Ok(())
}
