use ldsc::container::{Header, LossyParams};
use ldsc::f2::subspace_mass_bounds;
use ldsc::lossless::{self, LosslessDecoder};
use ldsc::lossy::{self, expected_distortion, LossyCodebook, LossyDecoder, LossyPlan};
use ldsc::stats::{binary_entropy, error_exponent, ldlsc_rate_bound};
use ldsc::{BitMatrix, BitVector, CompressedContainer, QueryLedger, SourceModel, SubspaceBasis, TopSetCode};
use num_bigint::BigUint;
use proptest::prelude::*;

fn model() -> impl Strategy<Value = SourceModel> {
    (1u64..100).prop_map(|num| SourceModel::from_ratio(num, 100).unwrap())
}

fn bits(len: usize) -> impl Strategy<Value = BitVector> {
    proptest::collection::vec(any::<bool>(), len).prop_map(|v| BitVector::from_bools(&v))
}

fn matrix() -> impl Strategy<Value = BitMatrix> {
    (1usize..8, 1usize..8).prop_flat_map(|(r, c)| {
        proptest::collection::vec(bits(c), r).prop_map(|rows| BitMatrix::from_rows(rows).unwrap())
    })
}

fn mass(v: &BitVector, p: f64) -> f64 {
    let w = v.weight() as i32;
    p.powi(w) * (1.0 - p).powi(v.len() as i32 - w)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rank_plus_nullity_is_rows(m in matrix()) {
        let ker = m.kernel_basis();
        prop_assert_eq!(m.rank() + ker.dimension(), m.nrows());
        for v in ker.elements().unwrap() {
            prop_assert!(m.mul_left(&v).is_zero());
        }
    }

    #[test]
    fn subspace_mass_matches_element_sum(m in matrix(), p in 0.01f64..0.99) {
        let u = m.kernel_basis();
        let direct: f64 = u.elements().unwrap().map(|v| mass(&v, p)).sum();
        let got = u.probability(p).unwrap();
        prop_assert!((got - direct).abs() < 1e-12, "{} vs {}", got, direct);
        let (lo, hi) = subspace_mass_bounds(&u, p).unwrap();
        prop_assert!(lo - 1e-12 <= got && got <= hi + 1e-12);
        let half = u.probability(0.5).unwrap();
        prop_assert_eq!(half, 2f64.powi(u.dimension() as i32 - u.ambient_dim() as i32));
    }

    #[test]
    fn span_contains_exactly_its_elements(vs in proptest::collection::vec(bits(5), 0..4)) {
        let u = SubspaceBasis::span_of(5, vs.clone());
        let elems: Vec<BitVector> = u.elements().unwrap().collect();
        prop_assert_eq!(elems.len(), 1 << u.dimension());
        for v in &vs {
            prop_assert!(u.contains(v));
        }
        for x in 0..32 {
            let v = BitVector::from_u64(x, 5);
            prop_assert_eq!(u.contains(&v), elems.contains(&v));
        }
    }

    #[test]
    fn unrank_then_rank_is_identity(b in 1usize..=12, kf in 0.0f64..=1.0, m in model()) {
        let k = ((b as f64 * kf).round() as usize).clamp(1, b);
        let code = TopSetCode::new(b, k, m).unwrap();
        let mut seen = std::collections::HashSet::new();
        for i in 0u64..1 << k {
            let x = code.unrank(&BigUint::from(i)).unwrap();
            prop_assert_eq!(code.rank(&x).unwrap(), Some(BigUint::from(i)));
            prop_assert!(seen.insert(x));
        }
        let mut covered = 0;
        for x in 0u64..1 << b {
            covered += usize::from(code.rank(&BitVector::from_u64(x, b)).unwrap().is_some());
        }
        prop_assert_eq!(covered, 1 << k);
    }

    #[test]
    fn coverage_grows_with_code_bits(b in 1usize..=40, m in model()) {
        let mut last = 0.0;
        for k in 1..=b {
            let c = TopSetCode::new(b, k, m).unwrap().coverage_probability();
            prop_assert!(c >= last - 1e-15 && c > 0.0 && c <= 1.0 + 1e-12);
            last = c;
        }
        prop_assert!((last - 1.0).abs() < 1e-12);
    }

    #[test]
    fn most_probable_block_is_rank_zero(b in 1usize..=64, m in model()) {
        let code = TopSetCode::new(b, 1, m).unwrap();
        let top = if m.ones_likely() { BitVector::ones(b) } else { BitVector::zeros(b) };
        prop_assert_eq!(code.rank(&top).unwrap(), Some(BigUint::from(0u8)));
    }

    #[test]
    fn container_bytes_round_trip(
        n in 1u64..200,
        b in 1u32..=16,
        kf in 0.0f64..=1.0,
        m in model(),
        seed in any::<u64>(),
    ) {
        let b = b.min(n as u32);
        let k = ((b as f64 * kf).round() as u32).clamp(1, b);
        let header = Header::lossless(n, b, k, m);
        let len = header.payload_bits() as usize;
        let payload = BitVector::from_bools(&(0..len).map(|i| (seed >> (i % 64)) & 1 == 1).collect::<Vec<_>>());
        let c = CompressedContainer::new(header, payload).unwrap();
        let bytes = c.to_bytes();
        let back = CompressedContainer::from_bytes(&bytes).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.to_bytes(), bytes);
    }

    #[test]
    fn lossy_container_bytes_round_trip(b in 1u32..=6, k in 0u32..=3, n in 1u64..60, d in 0.0f64..0.5, m in model()) {
        let k = k.min(b);
        let words: Vec<BitVector> = (0..1u64 << k).map(|w| BitVector::from_u64(w, b as usize)).collect();
        let b = b.min(n as u32);
        let words: Vec<BitVector> = words.iter().map(|w| w.slice(0, b as usize)).collect();
        let header = Header::lossy(n, b, k.min(b), m, LossyParams::new(words, d));
        let len = header.payload_bits() as usize;
        if let Ok(c) = CompressedContainer::new(header, BitVector::zeros(len)) {
            let back = CompressedContainer::from_bytes(&c.to_bytes()).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert!((back.header().lossy.as_ref().unwrap().distortion() - d).abs() < 1e-9);
        }
    }

    #[test]
    fn truncated_bytes_are_rejected(cut in 1usize..40) {
        let plan = lossless::plan_fixed_bits(20, 4, 3, &SourceModel::from_ratio(1, 10).unwrap()).unwrap();
        let c = lossless::compress(&BitVector::zeros(20), &plan).unwrap();
        let bytes = c.to_bytes();
        let cut = cut.min(bytes.len());
        prop_assert!(CompressedContainer::from_bytes(&bytes[..bytes.len() - cut]).is_err());
    }

    #[test]
    fn lossless_reads_exactly_the_block(
        n in 1u64..300,
        b in 1usize..=24,
        kf in 0.0f64..=1.0,
        m in model(),
        seed in any::<u64>(),
    ) {
        let b = b.min(n as usize);
        let k = ((b as f64 * kf).round() as usize).clamp(1, b);
        let plan = lossless::plan_fixed_bits(n, b, k, &m).unwrap();
        let x = BitVector::from_bools(&(0..n).map(|i| (seed.rotate_left(i as u32) & 3) == 0).collect::<Vec<_>>());
        let c = lossless::compress(&x, &plan).unwrap();
        let dec = LosslessDecoder::new(&c).unwrap();
        let full = plan.full_blocks() * b as u64;
        let mut ledger = QueryLedger::new();
        for i in 0..n {
            let (_, q) = dec.decode_symbol(i, &mut ledger).unwrap();
            prop_assert_eq!(q, if i < full { k } else { 1 });
            prop_assert!(q <= plan.locality().max(1));
        }
        prop_assert_eq!(ledger.calls(), n);
    }

    #[test]
    fn covered_sources_round_trip(
        blocks in proptest::collection::vec(any::<u64>(), 1..20),
        b in 1usize..=30,
        kf in 0.0f64..=1.0,
        tail in bits(5),
        m in model(),
    ) {
        let k = ((b as f64 * kf).round() as usize).clamp(1, b);
        let code = TopSetCode::new(b, k, m).unwrap();
        let mut x = BitVector::zeros(0);
        for r in &blocks {
            x.extend_from(&code.unrank(&BigUint::from(r % (1u64 << k))).unwrap());
        }
        let tail = tail.slice(0, tail.len().min(b - 1));
        x.extend_from(&tail);
        let plan = lossless::plan_fixed_bits(x.len() as u64, b, k, &m).unwrap();
        prop_assert_eq!(lossless::uncovered_blocks(&x, &plan).unwrap(), 0);
        let c = lossless::compress(&x, &plan).unwrap();
        prop_assert_eq!(lossless::decompress(&c).unwrap(), x);
    }

    #[test]
    fn union_bound_dominates_exact_error(n in 1u64..100_000, b in 1usize..=200, rf in 0.0f64..=1.0, m in model()) {
        let b = b.min(n as usize);
        let k = ((b as f64 * rf).ceil() as usize).clamp(1, b);
        let plan = lossless::plan_fixed_bits(n, b, k, &m).unwrap();
        let blocks = n.div_ceil(b as u64) as f64;
        prop_assert!(plan.exact_error() <= blocks * plan.block_error + 1e-12);
        prop_assert!(plan.exact_error() >= 0.0 && plan.exact_error() <= 1.0);
    }

    #[test]
    fn payload_rate_has_only_tail_slack(n in 1u64..1_000_000, b in 1usize..=300, r in 0.05f64..1.0, m in model()) {
        let b = b.min(n as usize);
        let plan = lossless::plan_fixed(n, b, r, &m).unwrap();
        let rate = plan.payload_bits() as f64 / n as f64;
        prop_assert!(rate <= plan.rate() + b as f64 / n as f64 + 1e-12);
        prop_assert!(plan.rate() <= r + 1.0 / b as f64 + 1e-12);
    }

    #[test]
    fn nearest_codeword_is_nearest(b in 1usize..=10, k in 0usize..=4, seed in any::<u64>(), m in model()) {
        let k = k.min(b);
        let mut words: Vec<u64> = Vec::new();
        let mut s = seed;
        while words.len() < 1 << k {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let w = (s >> 33) % (1 << b);
            if !words.contains(&w) {
                words.push(w);
            }
        }
        let cws: Vec<BitVector> = words.iter().map(|&w| BitVector::from_u64(w, b)).collect();
        let cb = LossyCodebook::from_codewords(m, &cws).unwrap();
        let mut total = 0.0;
        for x in 0..1u64 << b {
            let v = BitVector::from_u64(x, b);
            let dists: Vec<usize> = cws.iter().map(|c| c.hamming_distance(&v)).collect();
            let best = *dists.iter().min().unwrap();
            let first = dists.iter().position(|&d| d == best).unwrap();
            prop_assert_eq!(cb.nearest(&v), first);
            total += mass(&v, m.p()) * best as f64;
        }
        prop_assert!((expected_distortion(&cb) - total / b as f64).abs() < 1e-12);
    }

    #[test]
    fn lossy_decoding_reads_one_index(n in 1u64..200, b in 1usize..=6, k in 0usize..=3, m in model(), seed in any::<u64>()) {
        let b = b.min(n as usize);
        let k = k.min(b);
        let cb = lossy::build_codebook(b, k, &m, lossy::CodebookMethod::Greedy).unwrap();
        let plan = LossyPlan { n, distortion_target: 0.5, codebook: cb.clone() };
        let x = BitVector::from_bools(&(0..n).map(|i| (seed.rotate_left(i as u32) & 1) == 1).collect::<Vec<_>>());
        let c = lossy::compress_lossy(&x, &plan).unwrap();
        let dec = LossyDecoder::new(&c).unwrap();
        let y = dec.decompress_all().unwrap();
        let full = plan.full_blocks() * b as u64;
        let mut ledger = QueryLedger::new();
        for i in 0..n {
            let (bit, q) = dec.decode_symbol(i, &mut ledger).unwrap();
            prop_assert_eq!(bit, y.get(i as usize));
            prop_assert_eq!(q, if i < full { k } else { 1 });
        }
        for j in 0..plan.full_blocks() as usize {
            let block = x.slice(j * b, b);
            prop_assert_eq!(y.slice(j * b, b), cb.codeword(cb.nearest(&block)));
        }
        prop_assert_eq!(y.slice(full as usize, plan.partial_len()), x.slice(full as usize, plan.partial_len()));
    }

    #[test]
    fn exponent_vanishes_only_below_entropy(m in model(), r in 0.0f64..1.0) {
        let e = error_exponent(r, &m);
        let h = binary_entropy(m.p());
        if r <= h - 1e-9 {
            prop_assert_eq!(e, 0.0);
        } else if r > h + 1e-6 {
            prop_assert!(e > 0.0);
            prop_assert!(error_exponent((r + 1e-3).min(1.0), &m) >= e);
        }
    }

    #[test]
    fn rate_bound_falls_with_locality(m in model(), d in 0.001f64..0.2) {
        let mut last = f64::INFINITY;
        for t in 8..200 {
            let v = ldlsc_rate_bound(&m, d, t as f64);
            prop_assert!(v < last);
            prop_assert_eq!(v.to_bits(), ldlsc_rate_bound(&m, d, t as f64).to_bits());
            last = v;
        }
    }
}

/// Exact per-symbol distortion of an m-block message, by enumerating every message.
fn message_distortion(cb: &LossyCodebook, blocks: usize) -> f64 {
    let b = cb.block_len();
    let n = b * blocks;
    let p = cb.model().p();
    let mut total = 0.0;
    for x in 0..1u64 << n {
        let v = BitVector::from_u64(x, n);
        let mut dist = 0;
        for j in 0..blocks {
            let block = v.slice(j * b, b);
            dist += cb.codeword(cb.nearest(&block)).hamming_distance(&block);
        }
        total += mass(&v, p) * dist as f64;
    }
    total / n as f64
}

#[test]
fn message_distortion_equals_block_distortion() {
    for p in ["3/10", "1/2", "7/10"] {
        let m: SourceModel = p.parse().unwrap();
        for (b, k, blocks) in [(3, 1, 4), (4, 2, 3), (2, 1, 6), (5, 2, 2)] {
            let cb = lossy::build_codebook(b, k, &m, lossy::CodebookMethod::Greedy).unwrap();
            let whole = message_distortion(&cb, blocks);
            assert!((whole - cb.distortion()).abs() < 1e-12, "p={p} b={b}: {whole} vs {}", cb.distortion());
        }
    }
}

#[test]
fn compression_is_deterministic() {
    let m: SourceModel = "11/100".parse().unwrap();
    let x = BitVector::from_bools(&(0..5000).map(|i| i % 9 == 0).collect::<Vec<_>>());
    let plan = lossless::plan(5000, 0.6, 1e-2, &m).unwrap();
    let a = lossless::compress(&x, &plan).unwrap().to_bytes();
    let b = lossless::compress(&x, &plan).unwrap().to_bytes();
    assert_eq!(a, b);
    let lp = lossy::plan_lossy(5000, 0.1, 6, &m).unwrap();
    let a = lossy::compress_lossy(&x, &lp).unwrap().to_bytes();
    let b = lossy::compress_lossy(&x, &lp).unwrap().to_bytes();
    assert_eq!(a, b);
}
