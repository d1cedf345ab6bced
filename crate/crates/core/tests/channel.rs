use rand::rngs::SmallRng;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use tccsk_core::channel::{
    apply_chain, apply_chain_raw, erase_coords, snr_db_to_sigma, ChannelSpec, NoiseLevel, Stage,
};
use tccsk_core::sphere::{cosine, normalize, UnitVector};
use tccsk_core::Error;

fn unit(seed: u64, dim: usize) -> UnitVector {
    let mut rng = SmallRng::seed_from_u64(seed);
    let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
    normalize(&v).unwrap()
}

fn spec(text: &str, seed: u64) -> ChannelSpec {
    text.parse::<ChannelSpec>().unwrap().with_seed(seed)
}

#[test]
fn same_seed_same_output() {
    let x = unit(1, 256);
    let s = spec("erase:frac=0.3|awgn:snr_db=-3|gain:g=0.5", 99);
    assert_eq!(apply_chain(&x, &s).unwrap(), apply_chain(&x, &s).unwrap());
    assert_ne!(apply_chain(&x, &s).unwrap(), apply_chain(&x, &s.clone().with_seed(100)).unwrap());
}

#[test]
fn awgn_energy_matches_sigma() {
    let dim = 256;
    let x = unit(2, dim);
    let sigma = 0.05;
    let s = ChannelSpec::new(vec![Stage::Awgn(NoiseLevel::Sigma(sigma))], 0).unwrap();
    let trials = 2000;
    let mean: f64 = (0..trials)
        .map(|t| {
            let y = apply_chain_raw(x.as_slice(), &s.clone().with_seed(t)).unwrap();
            y.iter().zip(x.as_slice()).map(|(a, b)| (a - b).powi(2)).sum::<f64>()
        })
        .sum::<f64>()
        / trials as f64;
    let want = dim as f64 * sigma * sigma;
    assert!((mean - want).abs() < 0.05 * want, "E|Y-X|^2 = {mean}, want {want}");
}

#[test]
fn snr_db_sets_total_noise_energy() {
    let dim = 1024;
    let sigma = snr_db_to_sigma(0.0, dim);
    assert!((dim as f64 * sigma * sigma - 1.0).abs() < 1e-12);
    let sigma = snr_db_to_sigma(-10.0, dim);
    assert!((dim as f64 * sigma * sigma - 10.0).abs() < 1e-9);
}

#[test]
fn erasure_cosine_tracks_kept_fraction() {
    let x = unit(3, 256);
    for f in [0.1, 0.4, 0.7] {
        let s = ChannelSpec::new(vec![Stage::Erase(f)], 5).unwrap();
        let mean = (0..200)
            .map(|t| cosine(&x, &apply_chain(&x, &s.clone().with_seed(t)).unwrap()).unwrap())
            .sum::<f64>()
            / 200.0;
        assert!((mean - (1.0 - f).sqrt()).abs() < 0.05, "frac {f}: mean cosine {mean}");
        let raw = erase_coords(x.as_slice(), f, 7).unwrap();
        assert_eq!(raw.iter().filter(|v| **v == 0.0).count(), (f * 256.0).floor() as usize);
    }
}

#[test]
fn gain_is_undone_by_renormalization() {
    let x = unit(4, 128);
    let y = apply_chain(&x, &spec("gain:g=2", 0)).unwrap();
    for (a, b) in x.as_slice().iter().zip(y.as_slice()) {
        assert!((a - b).abs() < 1e-15);
    }
    let raw = apply_chain_raw(x.as_slice(), &spec("gain:g=2", 0)).unwrap();
    assert!((raw.iter().map(|v| v * v).sum::<f64>() - 4.0).abs() < 1e-12);
}

#[test]
fn raw_output_must_stay_on_sphere() {
    let x = unit(5, 64);
    let mut s = spec("gain:g=2", 0);
    s.renormalize = false;
    assert!(matches!(apply_chain(&x, &s), Err(Error::InvalidParameter(_))));
    s.stages.clear();
    assert_eq!(apply_chain(&x, &s).unwrap(), x);
}

#[test]
fn empty_chain_is_identity() {
    let x = unit(6, 64);
    for text in ["", "none"] {
        let s = spec(text, 3);
        assert!(s.is_identity());
        assert_eq!(apply_chain(&x, &s).unwrap(), x);
    }
}

#[test]
fn stage_order_matters() {
    let x = unit(7, 256);
    let a = apply_chain_raw(x.as_slice(), &spec("erase:frac=0.5|awgn:sigma=0.1", 8)).unwrap();
    let b = apply_chain_raw(x.as_slice(), &spec("awgn:sigma=0.1|erase:frac=0.5", 8)).unwrap();
    assert_ne!(a, b);
    assert_eq!(a.iter().filter(|v| **v == 0.0).count(), 0);
    assert_eq!(b.iter().filter(|v| **v == 0.0).count(), 128);
}

#[test]
fn tiny_noise_is_nearly_transparent() {
    let x = unit(9, 256);
    let y = apply_chain(&x, &spec("awgn:sigma=1e-9", 1)).unwrap();
    assert!(cosine(&x, &y).unwrap() > 1.0 - 1e-12);
}

#[test]
fn grammar_roundtrips_and_rejects_bad_stages() {
    let s = spec("erase:frac=0.4|awgn:snr_db=0", 0);
    assert_eq!(s.to_string().parse::<ChannelSpec>().unwrap().stages, s.stages);
    for bad in ["awgn:sigma=-1", "erase:frac=1", "gain:g=0", "blur:r=2", "awgn"] {
        assert!(bad.parse::<ChannelSpec>().is_err(), "{bad}");
    }
}
