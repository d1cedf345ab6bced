use std::sync::OnceLock;

use proptest::prelude::*;
use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, StandardNormal};
use tccsk_core::channel::{apply_chain, apply_chain_raw, ChannelSpec, NoiseLevel, Stage};
use tccsk_core::codec::BitMessage;
use tccsk_core::exec::Execution;
use tccsk_core::modulation::{
    demod_correlations, keyed_pad_check, keyed_pad_embed, multikey_modulate, BpskCodebook,
    DemodPath, MultikeyCodebook, TcParams, TccskModem,
};
use tccsk_core::sphere::{dot, normalize, Carrier, CarrierLabel, SecretKey, UnitVector};

fn random_bits(rng: &mut impl Rng, n: usize) -> BitMessage {
    BitMessage::from_bits((0..n).map(|_| rng.random()).collect())
}

fn null_vector(rng: &mut SmallRng, dim: usize) -> UnitVector {
    let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
    normalize(&v).unwrap()
}

fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

fn modem_256_16() -> &'static TccskModem {
    static MODEM: OnceLock<TccskModem> = OnceLock::new();
    MODEM.get_or_init(|| {
        let m = TccskModem::new(SecretKey::from_seed(21), TcParams::new(256, 16).unwrap());
        m.warm(4).unwrap();
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn noiseless_roundtrip(seed in any::<u64>(), n in 1usize..=64) {
        let modem = modem_256_16();
        let bits = random_bits(&mut SmallRng::seed_from_u64(seed), n);
        let x = modem.modulate(&bits).unwrap();
        let d = modem.demodulate(&x, n).unwrap();
        prop_assert_eq!(d.bits, bits);
        prop_assert!(d.rho.log10() < -13.0, "log10 rho {}", d.rho.log10());
    }

    #[test]
    fn positive_gain_does_not_change_the_decode(seed in any::<u64>(), g in 0.01f64..100.0) {
        let modem = modem_256_16();
        let bits = random_bits(&mut SmallRng::seed_from_u64(seed), 40);
        let x = modem.modulate(&bits).unwrap();
        let noisy = ChannelSpec::new(vec![Stage::Awgn(NoiseLevel::SnrDb(-2.0))], seed).unwrap();
        let mut scaled = noisy.clone();
        scaled.stages.push(Stage::Gain(g));
        let a = modem.demodulate(&apply_chain(&x, &noisy).unwrap(), 40).unwrap();
        let b = modem.demodulate(&apply_chain(&x, &scaled).unwrap(), 40).unwrap();
        prop_assert_eq!(a.block_values, b.block_values);
    }

    #[test]
    fn fft_matches_naive_correlation(seed in any::<u64>(), l in 4u32..11, frac in 0.05f64..1.0) {
        let key = SecretKey::from_seed(seed);
        let carrier = Carrier::derive(&key, CarrierLabel::tccsk_block(seed % 7), l).unwrap();
        let dim = ((frac * (1u64 << l) as f64) as usize).max(2);
        let y = null_vector(&mut SmallRng::seed_from_u64(seed), dim);
        let naive = demod_correlations(&y, &carrier, DemodPath::Naive).unwrap();
        let fft = demod_correlations(&y, &carrier, DemodPath::Fft).unwrap();
        let worst = naive.iter().zip(&fft).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        prop_assert!(worst < 1e-12, "max difference {}", worst);
    }
}

#[test]
fn each_block_contributes_one_over_root_t() {
    let modem = modem_256_16();
    let key = SecretKey::from_seed(21);
    let mut rng = SmallRng::seed_from_u64(22);
    for _ in 0..20 {
        let bits = random_bits(&mut rng, 48);
        let x = modem.modulate(&bits).unwrap();
        for j in 0..3 {
            let shift = bits.read_be(16 * j, 16) as usize;
            let z = Carrier::derive(&key, CarrierLabel::tccsk_block(j as u64), 16).unwrap();
            let period = z.len();
            let v: Vec<f64> = (0..256).map(|i| z.as_slice()[(i + shift) % period]).collect();
            let c = dot(x.as_slice(), normalize(&v).unwrap().as_slice());
            let want = 1.0 / 3f64.sqrt();
            assert!((c - want).abs() < 4.0 / 16.0, "block {j}: cosine {c}");
        }
    }
}

#[test]
fn null_decodes_are_calibrated() {
    let mut rng = SmallRng::seed_from_u64(23);
    for (l, t) in [(8u32, 4usize), (10, 1), (12, 2)] {
        let modem = TccskModem::new(SecretKey::from_seed(24), TcParams::new(256, l).unwrap());
        let trials = 10_000;
        let rhos: Vec<f64> = (0..trials)
            .map(|_| {
                let y = null_vector(&mut rng, 256);
                modem.demodulate_blocks(&y, t, t * l as usize).unwrap().rho.p()
            })
            .collect();
        for alpha in [0.01, 0.05] {
            let frac = rhos.iter().filter(|&&r| r <= alpha).count() as f64 / trials as f64;
            assert!(frac <= 2.0 * alpha, "L={l} T={t}: P(rho <= {alpha}) = {frac}");
        }
    }
}

#[test]
fn bpsk_bit_errors_follow_gaussian_tail() {
    let (bits, dim) = (16usize, 256usize);
    let key = SecretKey::from_seed(25);
    let book = BpskCodebook::new(&key, bits, dim).unwrap();
    for i in 0..bits {
        for k in 0..bits {
            let d = dot(book.carrier(i), book.carrier(k));
            let want = if i == k { 1.0 } else { 0.0 };
            assert!((d - want).abs() < 1e-12);
        }
    }
    let sigma = 0.152;
    let gamma = 1.0 / (2.0 * bits as f64 * sigma * sigma);
    let expected = q_function((2.0 * gamma).sqrt());
    let mut rng = SmallRng::seed_from_u64(26);
    let vectors = 100_000 / bits;
    let mut errors = 0usize;
    for v in 0..vectors {
        let msg = random_bits(&mut rng, bits);
        let x = book.modulate(&msg).unwrap();
        let spec = ChannelSpec::new(vec![Stage::Awgn(NoiseLevel::Sigma(sigma))], v as u64).unwrap();
        let y = apply_chain_raw(x.as_slice(), &spec).unwrap();
        errors += book.demodulate(&y).unwrap().hamming(&msg);
    }
    let rate = errors as f64 / (vectors * bits) as f64;
    assert!((rate - expected).abs() < 0.2 * expected, "BER {rate} vs {expected}");
}

#[test]
fn multikey_null_is_calibrated() {
    let bits = 10;
    let key = SecretKey::from_seed(27);
    let book = MultikeyCodebook::new(&key, bits, 256, Execution::default()).unwrap();
    let x = multikey_modulate(&key, 613, bits, 256).unwrap();
    assert_eq!(book.decode(&x).unwrap().message, 613);
    let mut rng = SmallRng::seed_from_u64(28);
    let trials = 10_000;
    let hits = (0..trials)
        .filter(|_| book.decode(&null_vector(&mut rng, 256)).unwrap().log_rho1.p() <= 0.01)
        .count();
    assert!(hits as f64 / trials as f64 <= 0.02, "{hits} of {trials}");
}

#[test]
fn keyed_pad_rejects_wrong_keys() {
    let n = 16;
    let key = SecretKey::from_seed(29);
    let msg = random_bits(&mut SmallRng::seed_from_u64(30), n);
    let word = keyed_pad_embed(&msg, &key).unwrap();
    let own = keyed_pad_check(word, &key, n).unwrap();
    assert!(own.accepted);
    assert_eq!(own.message, msg);
    let accepted = (0..10_000u64)
        .filter(|&i| keyed_pad_check(word, &SecretKey::from_seed(1_000_000 + i), n).unwrap().accepted)
        .count();
    assert_eq!(accepted, 0);
}
