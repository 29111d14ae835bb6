use identkit_core::bounds::distance_guarantee_probability;
use identkit_core::experiments::{estimate_lambda2, TrialConfig};
use identkit_core::identify_code::CodeSpec;
use identkit_core::identify_prng::{lfsr_attack, Generator, LfsrSpec, PrngScheme, Seed};
use identkit_core::wire_net::{decode_word, send_bytes};
use identkit_core::{Field, Message, Scheme};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn scheme_strategy() -> impl Strategy<Value = Scheme> {
    let code = (
        1u8..=16,
        1usize..20,
        1u32..100_000,
        1usize..=3,
        any::<[u8; 8]>(),
    )
        .prop_map(|(m, k, n, ell, key)| Scheme::Code {
            spec: CodeSpec::new(Field::new(m).unwrap(), k, n, key.to_vec()).unwrap(),
            ell,
        });
    let nonlinear = (1u8..=16, 1usize..20, 1usize..=3, 1usize..10).prop_map(|(m, k, ell, mu)| {
        Scheme::Prng(
            PrngScheme::new(
                Field::new(m).unwrap(),
                k,
                ell,
                mu,
                Generator::NonlinearDefault,
            )
            .unwrap(),
        )
    });
    let lfsr = (
        1u8..=8,
        1usize..20,
        1usize..=3,
        prop::collection::vec(any::<u16>(), 1..8),
    )
        .prop_map(|(m, k, ell, taps)| {
            let f = Field::new(m).unwrap();
            let taps: Vec<u16> = taps.into_iter().map(|t| t % f.q() as u16).collect();
            let mu = taps.len();
            let spec = LfsrSpec::new(f, taps).unwrap();
            Scheme::Prng(PrngScheme::new(f, k, ell, mu, Generator::Lfsr(spec)).unwrap())
        });
    prop_oneof![code, nonlinear, lfsr]
}

fn lfsr_strategy() -> impl Strategy<Value = LfsrSpec> {
    (1u8..=4, prop::collection::vec(any::<u16>(), 1..7)).prop_map(|(m, taps)| {
        let f = Field::new(m).unwrap();
        LfsrSpec::new(f, taps.into_iter().map(|t| t % f.q() as u16).collect()).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sent_words_are_always_accepted(s in scheme_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = Message::random(s.field(), s.k(), &mut rng);
        let w = s.send(&u, &mut rng).unwrap();
        prop_assert!(s.verify(&u, &w).is_accept());
    }

    #[test]
    fn lfsr_windows_annihilate(spec in lfsr_strategy(), seed in any::<u64>(), extra in 1usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = spec.field();
        let sigma = Seed::new(f.random_vector(spec.mu(), &mut rng));
        let s = spec.sequence(&sigma, spec.mu() + extra).unwrap();
        let a = spec.annihilator();
        for window in s.as_slice().windows(a.len()) {
            prop_assert_eq!(f.dot_raw(&a, window), 0);
        }
    }

    #[test]
    fn lfsr_attack_pair_accepted_for_every_seed(
        spec in lfsr_strategy(),
        extra_k in 1usize..5,
        seed in any::<u64>(),
    ) {
        let f = spec.field();
        let k = spec.mu() + extra_k;
        let (sent, expected) = lfsr_attack(&spec, k).unwrap();
        prop_assert_ne!(&sent, &expected);
        let scheme = PrngScheme::new(f, k, 2, spec.mu(), Generator::Lfsr(spec)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let w = scheme.send(&sent, &mut rng).unwrap();
            prop_assert!(scheme.verify(&expected, &w).is_accept());
        }
    }

    #[test]
    fn guarantee_grows_with_n_and_eps(
        m in 1u32..12,
        n in 1u64..5000,
        dn in 1u64..5000,
        eps in 1e-4f64..0.5,
        de in 1e-4f64..0.5,
    ) {
        let q = 1u64 << m;
        let base = distance_guarantee_probability(q, n, eps).probability;
        prop_assert!(distance_guarantee_probability(q, n + dn, eps).probability >= base);
        prop_assert!(distance_guarantee_probability(q, n, eps + de).probability >= base);
    }

    #[test]
    fn declared_length_must_match(s in scheme_strategy(), seed in any::<u64>(), delta in 1u8..=255) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = Message::random(s.field(), s.k(), &mut rng);
        let mut bytes = send_bytes(&s, &u, &mut rng).unwrap();
        // ell sits at byte 9 for code words and byte 5 for PRNG words
        let at = if matches!(s, Scheme::Code { .. }) { 9 } else { 5 };
        let new_ell = bytes[at].wrapping_add(delta);
        prop_assume!(new_ell != 0);
        let old_bits = usize::from(bytes[at]);
        bytes[at] = new_ell;
        let m = usize::from(s.field().m());
        let per = if matches!(s, Scheme::Code { .. }) { 32 + m } else { m };
        let fixed = if let Scheme::Prng(p) = &s { p.mu() * m } else { 0 };
        let old_len = (fixed + old_bits * per).div_ceil(8);
        let new_len = (fixed + usize::from(new_ell) * per).div_ceil(8);
        let decoded = decode_word(&bytes);
        if old_len == new_len {
            // same byte count: the padding or tag count disagrees with the payload,
            // or the word decodes to a different ell than the scheme expects
            if let Ok(w) = decoded {
                prop_assert!(!identkit_core::wire_net::verify_wire(&s, &u, w).is_accept());
            }
        } else {
            prop_assert!(decoded.is_err());
        }
    }
}

#[test]
fn two_repetitions_square_the_single_rate() {
    let f = Field::new(2).unwrap();
    let rate = |ell| {
        let s = Scheme::Code {
            spec: CodeSpec::new(f, 6, 512, b"square".to_vec()).unwrap(),
            ell,
        };
        estimate_lambda2(&TrialConfig::random_pairs(s, 200_000, 77))
            .unwrap()
            .estimate
    };
    let (one, two) = (rate(1), rate(2));
    let p = one * one;
    let tol = 4.0 * (p * (1.0 - p) / 200_000.0).sqrt()
        + 2.0 * one * 4.0 * (one * (1.0 - one) / 200_000.0).sqrt();
    assert!(
        (two - p).abs() < tol,
        "ell=1 {one}, ell=2 {two}, squared {p}"
    );
}

#[test]
fn reference_covered_in_nine_of_ten_runs() {
    let f = Field::new(4).unwrap();
    let s = Scheme::Prng(PrngScheme::new(f, 6, 1, 3, Generator::NonlinearDefault).unwrap());
    let covered = |base: u64| {
        (0..10)
            .filter(|i| {
                let r = estimate_lambda2(&TrialConfig::random_pairs(s.clone(), 20_000, base + i))
                    .unwrap();
                r.covers_reference() == Some(true)
            })
            .count()
    };
    let first = covered(1000);
    assert!(
        first >= 9 || covered(2000) >= 9,
        "first batch covered {first}/10"
    );
}

#[test]
fn parallel_and_serial_reports_match() {
    let f = Field::new(8).unwrap();
    let s = Scheme::Code {
        spec: CodeSpec::new(f, 8, 1000, b"threads".to_vec()).unwrap(),
        ell: 1,
    };
    let cfg = TrialConfig::random_pairs(s, 30_000, 3);
    let parallel = estimate_lambda2(&cfg).unwrap();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let serial = pool.install(|| estimate_lambda2(&cfg).unwrap());
    assert_eq!(parallel, serial);
}
