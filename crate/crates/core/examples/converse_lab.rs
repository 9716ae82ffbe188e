//! Exhaustive and randomized converse checks.
//!
//! cargo run --release --example converse_lab

use ldsc::converse::{self, CheckRecord};

fn main() -> ldsc::Result<()> {
    let mut records = converse::subspace_suite(4, &[0.1, 0.3, 0.5])?;
    records.extend(converse::two_local_suite(&[(2, 1), (3, 2)], &[0.3, 0.5])?);
    records.extend(converse::linear_encoder_suite(200, 10, 2, &[0.3, 0.5], 7)?);
    records.extend(converse::linear_decoder_suite(200, 12, &[0.3, 0.5], 7)?);
    println!("{}", CheckRecord::CSV_HEADER);
    for r in &records {
        println!("{r}");
    }
    Ok(())
}
