//! Ranking blocks in probability order.
//!
//! cargo run --example enumerative_ranking

use ldsc::{BitVector, SourceModel, TopSetCode};
use num_bigint::BigUint;

fn main() -> ldsc::Result<()> {
    let model: SourceModel = "1/10".parse()?;
    let code = TopSetCode::new(4, 3, model)?;
    println!("b=4 k=3 covers {:.5} of the mass", code.coverage_probability());
    for i in 0u32..8 {
        println!("{i} -> {}", code.unrank(&BigUint::from(i))?);
    }
    for s in ["1100", "1001", "0111"] {
        let x: BitVector = s.parse()?;
        match code.rank(&x)? {
            Some(r) => println!("{s} has rank {r}"),
            None => println!("{s} is not covered"),
        }
    }
    Ok(())
}
