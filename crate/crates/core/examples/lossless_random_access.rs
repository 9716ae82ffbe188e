//! Compress a Bernoulli(0.11) source at rate 0.6 and read single symbols back.
//!
//! cargo run --release --example lossless_random_access

use ldsc::lossless::{self, LosslessDecoder};
use ldsc::{BitVector, QueryLedger, SourceModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> ldsc::Result<()> {
    let model: SourceModel = "11/100".parse()?;
    let n = 1u64 << 16;
    let plan = lossless::plan(n, 0.6, 1e-3, &model)?;
    println!(
        "b={} k={} rate={:.4} exact_error={:.3e} implied_c={:.1}",
        plan.block_len,
        plan.code_bits,
        plan.rate(),
        plan.exact_error(),
        plan.implied_c()
    );

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let bits: Vec<bool> = (0..n).map(|_| rng.gen_bool(model.p())).collect();
    let x = BitVector::from_bools(&bits);
    let container = lossless::compress(&x, &plan)?;
    println!("payload {} bits for {n} symbols", container.payload_len());

    let dec = LosslessDecoder::new(&container)?;
    let mut ledger = QueryLedger::new();
    let mut wrong = 0;
    for _ in 0..1000 {
        let i = rng.gen_range(0..n);
        let (bit, _) = dec.decode_symbol(i, &mut ledger)?;
        wrong += usize::from(bit != x.get(i as usize));
    }
    println!("1000 random queries: max {} bits read, {wrong} wrong", ledger.max());
    Ok(())
}
