use depthlab_core::compressors::{
    decode, encode, lz78_phrase_count, registry_decode, registry_encode, CodecSpec, RegistrySpec,
};
use depthlab_core::BitString;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn codecs() -> Vec<CodecSpec> {
    ["identity", "rle", "rle:3", "lz78"].iter().map(|s| s.parse().unwrap()).collect()
}

#[test]
fn seeded_random_round_trips() {
    let reg: RegistrySpec = "identity,lz78,rle".parse().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..2000 {
        let len = rng.gen_range(0..=4096);
        let bias = rng.gen_range(0.01..0.99);
        let x: BitString = (0..len).map(|_| rng.gen_bool(bias)).collect();
        for c in codecs() {
            assert_eq!(decode(&c, &encode(&c, &x)).unwrap(), x, "{c}");
        }
        for t in 1..=reg.len() {
            let w = registry_encode(&reg, &x, t).unwrap();
            assert_eq!(registry_decode(&reg, &w.bits, t).unwrap(), x);
        }
    }
}

#[test]
fn lz78_zeros_phrase_count_near_sqrt_two_n() {
    for n in [512usize, 1024, 2048] {
        let phrases = lz78_phrase_count(&BitString::zeros(n)) as f64;
        assert!((phrases - (2.0 * n as f64).sqrt()).abs() <= 2.0, "{n}: {phrases}");
    }
}

#[test]
fn registry_codewords_are_distinct_over_all_short_strings() {
    let reg: RegistrySpec = "identity,rle,lz78".parse().unwrap();
    for t in 1..=3 {
        let mut seen = std::collections::HashSet::new();
        for len in 0..=10u32 {
            for v in 0..1u64 << len {
                let mut x = BitString::new();
                x.push_uint(v, len);
                assert!(seen.insert(registry_encode(&reg, &x, t).unwrap().bits));
            }
        }
    }
}

proptest! {
    #[test]
    fn codecs_round_trip(bits in prop::collection::vec(any::<bool>(), 0..600)) {
        let x = BitString::from_bits(bits);
        for c in codecs() {
            prop_assert_eq!(decode(&c, &encode(&c, &x)).unwrap(), x.clone());
        }
    }

    #[test]
    fn decoders_never_panic(bits in prop::collection::vec(any::<bool>(), 0..64)) {
        let reg: RegistrySpec = "identity,rle,lz78".parse().unwrap();
        for t in 1..=3 {
            let _ = registry_decode(&reg, &bits, t);
        }
    }
}
