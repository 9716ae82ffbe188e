use std::path::Path;

use ldsc::cli::run;
use ldsc::container::pack_msb_first;
use ldsc::BitVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn ldsc(args: &[&str]) -> Out {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("ldsc").chain(args.iter().copied()), &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.split_whitespace()
        .find_map(|w| w.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key}= in {text:?}"))
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn random_file(at: &Path, n: usize, p: f64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = BitVector::from_bools(&(0..n).map(|_| rng.gen_bool(p)).collect::<Vec<_>>());
    std::fs::write(at, pack_msb_first(&x)).unwrap();
}

/// Data rows of a CSV emitted with `#` comment lines, header dropped.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn zeros_round_trip() {
    let dir = TempDir::new().unwrap();
    let (raw, packed, back) = (path(&dir, "z.bin"), path(&dir, "z.ldsc"), path(&dir, "z.out"));
    std::fs::write(&raw, vec![0u8; 512]).unwrap();
    let o = ldsc(&["compress", "--input", &raw, "--output", &packed, "--p", "11/100", "--rate", "0.6", "--epsilon", "0.01"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let b: f64 = field(&o.stdout, "b").parse().unwrap();
    let k: f64 = field(&o.stdout, "k").parse().unwrap();
    assert_eq!(field(&o.stdout, "rate"), format!("{:.4}", k / b));
    let o = ldsc(&["decompress", "--input", &packed, "--output", &back]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(std::fs::read(&back).unwrap(), vec![0u8; 512]);
}

#[test]
fn planned_rate_has_tail_slack_only() {
    let dir = TempDir::new().unwrap();
    let (raw, packed) = (path(&dir, "r.bin"), path(&dir, "r.ldsc"));
    random_file(Path::new(&raw), 1 << 16, 0.11, 5);
    let o = ldsc(&["compress", "--input", &raw, "--output", &packed, "--mode", "lossless", "--p", "11/100", "--rate", "0.6", "--epsilon", "1e-3"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let b: f64 = field(&o.stdout, "b").parse().unwrap();
    let rate: f64 = field(&o.stdout, "payload_rate").parse().unwrap();
    assert!(rate <= 0.6 + b / 65536.0, "{rate}");

    let k = field(&o.stdout, "k").to_string();
    let q = ldsc(&["query", "--input", &packed, "--index", "0"]);
    assert_eq!(q.code, 0);
    assert_eq!(field(&q.stdout, "queries"), k);

    let strict = ldsc(&["query", "--input", &packed, "--index", "0", "--strict"]);
    let plain: usize = k.parse().unwrap();
    let charged: usize = field(&strict.stdout, "queries").parse().unwrap();
    assert_eq!(charged, plain + 42 * 8);

    let q = ldsc(&["query", "--input", &packed, "--index", "65536"]);
    assert_ne!(q.code, 0);
}

#[test]
fn query_all_reports_block_reads() {
    let dir = TempDir::new().unwrap();
    let (raw, packed, back) = (path(&dir, "a.bin"), path(&dir, "a.ldsc"), path(&dir, "a.out"));
    random_file(Path::new(&raw), 4096, 0.5, 9);
    let o = ldsc(&["compress", "--input", &raw, "--output", &packed, "--p", "1/2", "--rate", "0.9", "--block-len", "8"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let q = ldsc(&["query", "--input", &packed, "--all"]);
    assert_eq!(field(&q.stdout, "symbols"), "4096");
    assert_eq!(field(&q.stdout, "max_queries"), field(&o.stdout, "k"));
    assert_eq!(field(&q.stdout, "histogram"), format!("{}:4096", field(&o.stdout, "k")));
    assert_eq!(ldsc(&["decompress", "--input", &packed, "--output", &back]).code, 0);
}

#[test]
fn lossy_quarter_distortion_plan() {
    let dir = TempDir::new().unwrap();
    let (raw, packed, back) = (path(&dir, "l.bin"), path(&dir, "l.ldsc"), path(&dir, "l.out"));
    random_file(Path::new(&raw), 3000, 0.5, 1);
    let o = ldsc(&["compress", "--input", &raw, "--output", &packed, "--mode", "lossy", "--d", "0.25", "--p", "1/2", "--t", "1"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(field(&o.stdout, "b"), "3");
    assert_eq!(field(&o.stdout, "rate"), "0.3333");
    assert_eq!(field(&o.stdout, "exact_distortion"), "0.250000");
    let q = ldsc(&["query", "--input", &packed, "--index", "17"]);
    assert_eq!(field(&q.stdout, "queries"), "1");
    assert_eq!(ldsc(&["decompress", "--input", &packed, "--output", &back]).code, 0);
    assert_eq!(std::fs::read(&back).unwrap().len(), 375);
}

#[test]
fn lossless_sweep_error_falls() {
    let args = ["analyze", "--p", "11/100", "--rate", "0.6", "--epsilon", "1e-3", "--log-n-min", "10", "--log-n-max", "20", "--log-n-step", "2"];
    let o = ldsc(&args);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.starts_with("# ldsc analyze lossless v1\n# p=11/100 rate=0.6"));
    let errs: Vec<f64> = rows(&o.stdout).iter().map(|r| r[4].parse().unwrap()).collect();
    assert_eq!(errs.len(), 6);
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    assert_eq!(ldsc(&args).stdout, o.stdout);
}

#[test]
fn uncompressed_sweep_has_no_error() {
    let o = ldsc(&["analyze", "--p", "11/100", "--rate", "1"]);
    assert_eq!(o.code, 0);
    assert!(rows(&o.stdout).iter().all(|r| r[4] == "0"));
}

#[test]
fn lossy_sweep_rate_falls() {
    let o = ldsc(&["analyze", "--mode", "lossy", "--p", "1/2", "--d", "0.25", "--t-min", "4", "--t-max", "16"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let table = rows(&o.stdout);
    let rates: Vec<f64> = table.iter().map(|r| r[4].parse().unwrap()).collect();
    let shannon: Vec<f64> = table.iter().map(|r| r[7].parse().unwrap()).collect();
    assert!(rates.windows(2).all(|w| w[1] <= w[0]), "{rates:?}");
    assert!(rates.iter().zip(&shannon).all(|(r, s)| r + 1e-9 >= *s));
}

#[test]
fn bounds_row_and_crossover() {
    let o = ldsc(&["bounds", "--p", "11/100", "--d", "0.05", "--t", "1"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let r = &rows(&o.stdout)[0];
    assert_eq!(r[0], "65536");
    assert!((r[3].parse::<f64>().unwrap() - 0.4635).abs() < 5e-5);
    assert!((r[4].parse::<f64>().unwrap() - 0.6252).abs() < 5e-5);
    assert_eq!(r[5], "ours");

    let dir = TempDir::new().unwrap();
    let csv = path(&dir, "b.csv");
    let o = ldsc(&["bounds", "--p", "11/100", "--schedule", "inverse-log", "--log-n-min", "8", "--log-n-max", "24", "--csv", &csv]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.trim_end().ends_with("# crossover_n=1048576"), "{text}");
    let table = rows(&text);
    assert_eq!(table.first().unwrap()[5], "ours");
    assert_eq!(table.last().unwrap()[5], "theirs");
}

#[test]
fn verify_reports() {
    let o = ldsc(&["verify", "subspace-mass"]);
    assert_eq!(o.code, 0);
    assert!(o.stderr.contains("0 violations"));
    let o = ldsc(&["verify", "t2", "--case", "2:1", "--p", "1/2"]);
    assert_eq!(o.code, 0);
    assert!(o.stderr.contains("0.5 <= 0.75 PASS"), "{}", o.stderr);
    assert!(o.stdout.contains("claim,instance,bound,measured,pass\n"));
    let a = ldsc(&["verify", "linear-decoder", "--draws", "50", "--seed", "4"]);
    let b = ldsc(&["verify", "linear-decoder", "--draws", "50", "--seed", "4"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(ldsc(&[]).code, 1);
    assert_eq!(ldsc(&["compress", "--bogus"]).code, 1);
    assert_eq!(ldsc(&["analyze", "--p", "0.11", "--rate", "0.6"]).code, 1);
    assert_eq!(ldsc(&["analyze", "--p", "11/100", "--rate", "0.4"]).code, 2);
    let dir = TempDir::new().unwrap();
    let missing = path(&dir, "missing.ldsc");
    assert_eq!(ldsc(&["query", "--input", &missing, "--index", "0"]).code, 4);
    let junk = path(&dir, "junk.ldsc");
    std::fs::write(&junk, b"not a container").unwrap();
    assert_eq!(ldsc(&["decompress", "--input", &junk, "--output", &path(&dir, "o")]).code, 4);
    assert_eq!(ldsc(&["--help"]).code, 0);
}
