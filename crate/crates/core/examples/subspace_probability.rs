//! Mass of GF(2) subspaces under a product Bernoulli measure.
//!
//! cargo run --example subspace_probability

use ldsc::f2::{enumerate_all_subspaces, subspace_mass_bounds};
use ldsc::{BitMatrix, SubspaceBasis};

fn main() -> ldsc::Result<()> {
    let u = SubspaceBasis::new(3, vec!["100".parse()?])?;
    let (lo, hi) = subspace_mass_bounds(&u, 0.3)?;
    println!("span{{100}} at p=0.3: {:.4} in [{lo:.4}, {hi:.4}]", u.probability(0.3)?);

    // The left kernel of a 4x2 matrix is a 2-dimensional subspace of GF(2)^4.
    let g = BitMatrix::from_rows(vec!["10".parse()?, "01".parse()?, "11".parse()?, "10".parse()?])?;
    let ker = g.kernel_basis();
    println!("rank {} kernel dim {} mass {:.4}", g.rank(), ker.dimension(), ker.probability(0.3)?);

    for n in 1..=4 {
        let (mut tight_lo, mut tight_hi, mut count) = (0, 0, 0);
        for s in enumerate_all_subspaces(n)? {
            let m = s.probability(0.3)?;
            let (lo, hi) = subspace_mass_bounds(&s, 0.3)?;
            tight_lo += usize::from((m - lo).abs() < 1e-12);
            tight_hi += usize::from((hi - m).abs() < 1e-12);
            count += 1;
        }
        println!("n={n}: {count} subspaces, {tight_lo} meet the lower bound, {tight_hi} the upper");
    }
    Ok(())
}
