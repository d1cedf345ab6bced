use proptest::prelude::*;
use tccsk_core::codec::{
    ac_decode_with, ac_encode_with, decode_bytes, encode_bytes, ideal_code_length, AdaptiveModel,
    StaticModel, SymbolModel, Termination, BYTE_ALPHABET,
};
use tccsk_core::Error;

const SAMPLE: &str = "a photo of a small dog running on the beach near the water. \
    two people are sitting at a table in a restaurant. a red car parked on the side of \
    the street. a cat sleeping on top of a wooden chair. the man is holding an umbrella \
    in the rain. a bowl of fruit on a kitchen counter next to the window.";

/// Order-1 byte model trained with add-one smoothing on `text`.
fn bigram_model(text: &[u8]) -> StaticModel {
    let a = BYTE_ALPHABET;
    let mut counts = vec![1u32; StaticModel::context_count(1, a).unwrap() * a];
    for w in text.windows(2) {
        counts[usize::from(w[0]) * a + usize::from(w[1])] += 20;
    }
    StaticModel::from_counts(1, a, &counts).unwrap()
}

fn symbols(bytes: &[u8]) -> Vec<u32> {
    bytes.iter().map(|&b| u32::from(b)).collect()
}

fn check_near_optimal<M: SymbolModel + Clone>(bytes: &[u8], model: &M) -> Result<(), TestCaseError> {
    let bits = encode_bytes(bytes, &mut model.clone()).unwrap();
    let (data, eof) = ideal_code_length(&symbols(bytes), &mut model.clone());
    let gap = (bits.len() as f64 - data).abs();
    prop_assert!(gap <= 2.0 + eof, "{} bits, ideal {:.2} + eof {:.2}", bits.len(), data, eof);
    prop_assert_eq!(decode_bytes(&bits, &mut model.clone()).unwrap(), bytes.to_vec());
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn adaptive_roundtrip_is_near_optimal(
        bytes in prop::collection::vec(any::<u8>(), 0..512),
        order in 0usize..3,
    ) {
        check_near_optimal(&bytes, &AdaptiveModel::bytes(order).unwrap())?;
    }

    #[test]
    fn static_roundtrip_is_near_optimal(bytes in prop::collection::vec(any::<u8>(), 0..512)) {
        check_near_optimal(&bytes, &bigram_model(SAMPLE.as_bytes()))?;
    }

    #[test]
    fn self_delimiting_ignores_any_tail(
        bytes in prop::collection::vec(any::<u8>(), 0..128),
        tail in prop::collection::vec(any::<bool>(), 0..64),
        order in 0usize..3,
    ) {
        let term = Termination::SelfDelimiting;
        let bits = ac_encode_with(&symbols(&bytes), &mut AdaptiveModel::bytes(order).unwrap(), term).unwrap();
        let mut padded = bits.clone();
        for b in tail {
            padded.push(b);
        }
        let d = ac_decode_with(&padded, &mut AdaptiveModel::bytes(order).unwrap(), term).unwrap();
        prop_assert_eq!(d.symbols, symbols(&bytes));
        prop_assert_eq!(d.bits_used, bits.len());
    }

    #[test]
    fn dropped_last_byte_is_truncation(
        bytes in prop::collection::vec(any::<u8>(), 1..256),
        order in 0usize..3,
    ) {
        let bits = encode_bytes(&bytes, &mut AdaptiveModel::bytes(order).unwrap()).unwrap();
        prop_assume!(bits.len() > 8);
        let cut = bits.truncated(bits.len() - 8);
        match decode_bytes(&cut, &mut AdaptiveModel::bytes(order).unwrap()) {
            Err(Error::TruncatedPayload) => {}
            other => prop_assert!(false, "expected truncation, got {:?}", other),
        }
    }
}

#[test]
fn trained_model_compresses_captions() {
    let caption = b"a small dog sitting on a wooden chair near the window";
    let adaptive = encode_bytes(caption, &mut AdaptiveModel::bytes(2).unwrap()).unwrap();
    let trained = encode_bytes(caption, &mut bigram_model(SAMPLE.as_bytes())).unwrap();
    let raw = 8 * caption.len();
    println!(
        "caption {raw} bits: adaptive order-2 {} bits, trained order-1 {} bits",
        adaptive.len(),
        trained.len()
    );
    assert!(trained.len() < raw / 2);
}

#[test]
fn mismatched_static_model_does_not_reproduce_payload() {
    let caption = b"a cat sleeping on top of a wooden chair";
    let bits = encode_bytes(caption, &mut bigram_model(SAMPLE.as_bytes())).unwrap();
    let other = bigram_model(b"zzzz qqqq xxxx jjjj kkkk vvvv 0123456789");
    if let Ok(out) = decode_bytes(&bits, &mut other.clone()) {
        assert_ne!(out, caption.to_vec());
    }
}
