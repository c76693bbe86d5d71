use proptest::prelude::*;
use qmedshield::analysis::bit_change_fraction;
use qmedshield::cipher::{derive_context, keygen, parse_key, serialize_key};
use qmedshield::{decrypt, encrypt, GrayImage};

fn image_strategy(max: usize) -> impl Strategy<Value = GrayImage> {
    (1usize..max, 1usize..max).prop_flat_map(|(w, h)| {
        proptest::collection::vec(any::<u8>(), w * h).prop_map(move |px| GrayImage::new(w, h, px).unwrap())
    })
}

fn textured(w: usize, h: usize) -> GrayImage {
    GrayImage::from_fn(w, h, |x, y| ((x * 7 + y * 13) ^ (x * y)) as u8).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip(img in image_strategy(40), seed in any::<[u8; 32]>()) {
        let key = keygen(seed);
        let c = encrypt(&img, &key)?;
        prop_assert_eq!(c.dimensions(), img.dimensions());
        prop_assert_eq!(decrypt(&c, &key)?, img);
    }

    #[test]
    fn key_text_round_trip(seed in any::<[u8; 32]>()) {
        let key = keygen(seed);
        prop_assert_eq!(parse_key(&serialize_key(&key))?, key);
    }

    #[test]
    fn deterministic(img in image_strategy(16), seed in any::<[u8; 32]>()) {
        let key = keygen(seed);
        prop_assert_eq!(encrypt(&img, &key)?, encrypt(&img, &key)?);
    }

    // Pixels are processed independently, so a one-pixel plaintext change
    // shows up in exactly one ciphertext pixel.
    #[test]
    fn plaintext_change_is_local(
        img in image_strategy(24),
        seed in any::<[u8; 32]>(),
        pos in any::<prop::sample::Index>(),
        flip in 1u8..=255,
    ) {
        let key = keygen(seed);
        let ctx = derive_context(&key, img.width(), img.height())?;
        let i = pos.index(img.len());
        let mut other = img.clone();
        other.pixels_mut()[i] ^= flip;
        let (c1, c2) = (ctx.encrypt(&img)?, ctx.encrypt(&other)?);
        let diff: Vec<usize> = (0..img.len()).filter(|&j| c1.pixels()[j] != c2.pixels()[j]).collect();
        prop_assert_eq!(diff, vec![i]);
    }

    #[test]
    fn ciphertext_corruption_is_local(
        img in image_strategy(24),
        seed in any::<[u8; 32]>(),
        pos in any::<prop::sample::Index>(),
        flip in 1u8..=255,
    ) {
        let key = keygen(seed);
        let ctx = derive_context(&key, img.width(), img.height())?;
        let mut c = ctx.encrypt(&img)?;
        let i = pos.index(img.len());
        c.pixels_mut()[i] ^= flip;
        let back = ctx.decrypt(&c)?;
        let diff: Vec<usize> = (0..img.len()).filter(|&j| back.pixels()[j] != img.pixels()[j]).collect();
        prop_assert_eq!(diff, vec![i]);
    }
}

#[test]
fn distinct_keys_give_distinct_ciphertexts() {
    let img = textured(32, 32);
    let a = encrypt(&img, &keygen([1; 32])).unwrap();
    let b = encrypt(&img, &keygen([2; 32])).unwrap();
    assert_ne!(a, b);
}

#[test]
fn non_square_round_trip() {
    let img = textured(63, 65);
    let key = keygen([9; 32]);
    assert_eq!(decrypt(&encrypt(&img, &key).unwrap(), &key).unwrap(), img);
}

/// Flipping one plaintext bit should change about half of all ciphertext
/// bits. The pipeline has no chaining between pixels, so it cannot: this is
/// kept as a faithful statement of the property and ignored by default.
#[test]
#[ignore = "unattainable without inter-pixel chaining"]
fn avalanche_half_of_bits() {
    let img = textured(64, 64);
    let key = keygen([3; 32]);
    let mut other = img.clone();
    other.pixels_mut()[0] ^= 1;
    let f = bit_change_fraction(&encrypt(&img, &key).unwrap(), &encrypt(&other, &key).unwrap()).unwrap();
    assert!(f >= 0.49, "bit change fraction {f}");
}
