//! Byte-exact container fixtures. Regenerate with `LDSC_BLESS=1 cargo test --test golden`.

use std::path::PathBuf;
use std::sync::OnceLock;

use ldsc::lossless;
use ldsc::lossy;
use ldsc::{BitVector, CompressedContainer, SourceModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn random_bits(seed: u64, n: usize, p: f64) -> BitVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    BitVector::from_bools(&(0..n).map(|_| rng.gen_bool(p)).collect::<Vec<_>>())
}

fn fixtures() -> &'static [(&'static str, CompressedContainer)] {
    static CELL: OnceLock<Vec<(&'static str, CompressedContainer)>> = OnceLock::new();
    CELL.get_or_init(build)
}

fn build() -> Vec<(&'static str, CompressedContainer)> {
    let m11: SourceModel = "11/100".parse().unwrap();
    let half: SourceModel = "1/2".parse().unwrap();
    let m3: SourceModel = "3/10".parse().unwrap();
    let mut out = Vec::new();

    let plan = lossless::plan_fixed_bits(8, 4, 3, &m11).unwrap();
    out.push(("lossless_n8", lossless::compress(&"01000000".parse().unwrap(), &plan).unwrap()));

    let plan = lossless::plan_fixed_bits(10, 4, 3, &m11).unwrap();
    out.push(("lossless_tail", lossless::compress(&"0100000011".parse().unwrap(), &plan).unwrap()));

    let plan = lossless::plan(4096, 0.6, 1e-3, &m11).unwrap();
    out.push(("lossless_n4096", lossless::compress(&random_bits(1, 4096, 0.11), &plan).unwrap()));

    let plan = lossy::plan_lossy(7, 0.25, 1, &half).unwrap();
    out.push(("lossy_n7", lossy::compress_lossy(&"0111001".parse().unwrap(), &plan).unwrap()));

    let plan = lossy::plan_lossy(4096, 0.1, 8, &m3).unwrap();
    out.push(("lossy_n4096", lossy::compress_lossy(&random_bits(2, 4096, 0.3), &plan).unwrap()));
    out
}

#[test]
fn fixtures_match_files() {
    let bless = std::env::var_os("LDSC_BLESS").is_some();
    for (name, c) in fixtures() {
        let (name, c) = (*name, c);
        let path = dir().join(format!("{name}.ldsc"));
        let bytes = c.to_bytes();
        if bless {
            std::fs::create_dir_all(dir()).unwrap();
            std::fs::write(&path, &bytes).unwrap();
            continue;
        }
        let on_disk = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(bytes, on_disk, "{name} encodes differently from its fixture");
        let parsed = CompressedContainer::from_bytes(&on_disk).unwrap();
        assert_eq!(&parsed, c, "{name}");
        assert_eq!(parsed.to_bytes(), on_disk, "{name}");
    }
}

fn hex(s: &str) -> Vec<u8> {
    let s: String = s.split_whitespace().collect();
    (0..s.len()).step_by(2).map(|i| u8::from_str_radix(&s[i..i + 2], 16).unwrap()).collect()
}

#[test]
fn lossless_bytes_by_hand() {
    // Blocks 0100 and 0000 have ranks 2 and 0: payload 010 000, padded.
    let want = hex(
        "4c445343 01 00
         0000000000000008 00000004 00000003
         000000000000000b 0000000000000064 00000000
         40",
    );
    let c = &fixtures().iter().find(|(n, _)| *n == "lossless_n8").unwrap().1;
    assert_eq!(c.to_bytes(), want);
}

#[test]
fn lossy_bytes_by_hand() {
    // Codebook 000 111, distortion 1/4. Blocks 011 and 100 map to words 1 and 0; the tail bit 1 is raw.
    let want = hex(
        "4c445343 01 01
         0000000000000007 00000003 00000001
         0000000000000001 0000000000000002 00000001
         1c 0000000040000000
         a0",
    );
    let c = &fixtures().iter().find(|(n, _)| *n == "lossy_n7").unwrap().1;
    assert_eq!(c.to_bytes(), want);
}

#[test]
fn corrupted_fixtures_are_rejected() {
    let bytes = std::fs::read(dir().join("lossy_n7.ldsc")).unwrap();
    let mut bad = bytes.clone();
    bad[0] = b'X';
    assert!(CompressedContainer::from_bytes(&bad).is_err());
    let mut bad = bytes.clone();
    bad[4] = 2;
    assert!(CompressedContainer::from_bytes(&bad).is_err());
    let mut bad = bytes.clone();
    *bad.last_mut().unwrap() |= 0x01;
    assert!(CompressedContainer::from_bytes(&bad).is_err());
    let mut bad = bytes.clone();
    bad.push(0);
    assert!(CompressedContainer::from_bytes(&bad).is_err());
}
