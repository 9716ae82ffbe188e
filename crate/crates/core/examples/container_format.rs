//! Byte layout of a small lossless container.
//!
//! cargo run --example container_format

use ldsc::lossless;
use ldsc::{BitVector, CompressedContainer, SourceModel};

fn main() -> ldsc::Result<()> {
    let model: SourceModel = "11/100".parse()?;
    let plan = lossless::plan_fixed_bits(10, 4, 3, &model)?;
    let x: BitVector = "0100000011".parse()?;
    let c = lossless::compress(&x, &plan)?;
    let bytes = c.to_bytes();
    for (i, chunk) in bytes.chunks(8).enumerate() {
        let hex: Vec<String> = chunk.iter().map(|b| format!("{b:02x}")).collect();
        println!("{:04}  {}", i * 8, hex.join(" "));
    }
    let back = CompressedContainer::from_bytes(&bytes)?;
    assert_eq!(back, c);
    println!("decoded: {}", lossless::decompress(&back)?);
    Ok(())
}
