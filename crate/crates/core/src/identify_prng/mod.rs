//! Identification with a seeded generator in place of a stored code.
//!
//! The sender draws a uniform seed `σ ∈ F_q^μ`, expands it into `ℓ·k`
//! symbols, arranges them as `ℓ` columns of length `k` (column 1 filled top
//! to bottom first) to form `G(σ)`, and sends `(σ, τ = u·G(σ))`. The receiver
//! expands the same `σ` and accepts iff its own `u'·G(σ)` equals `τ`.
//!
//! With an ideal generator a wrong message is accepted with probability
//! `q^-ℓ`. An LFSR is linear, so any register shorter than `k` admits a
//! message pair accepted under every seed (see [`lfsr_attack`]).

mod lfsr;

pub use lfsr::{lfsr_attack, LfsrSpec};

use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use crate::error::{invalid, Error, Result};
use crate::gf::{Field, FieldVector};
use crate::message::Message;
use crate::verdict::{malformed, Malformed, Rejection, Verdict};

const NONLINEAR_LABEL: &[u8] = b"identkit/prng-nonlinear/v1\0";

/// Generator identifiers as they appear on the wire.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum GeneratorKind {
    NonlinearDefault = 0x01,
    Lfsr = 0x02,
}

impl GeneratorKind {
    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Option<Self> {
        match id {
            0x01 => Some(GeneratorKind::NonlinearDefault),
            0x02 => Some(GeneratorKind::Lfsr),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::NonlinearDefault => "nonlinear-default",
            GeneratorKind::Lfsr => "lfsr",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonlinear-default" => Ok(GeneratorKind::NonlinearDefault),
            "lfsr" => Ok(GeneratorKind::Lfsr),
            other => Err(invalid(format!("unknown generator {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    /// ChaCha20 keyed by SHA-256 over a label and the packed seed.
    NonlinearDefault,
    Lfsr(LfsrSpec),
}

impl Generator {
    pub fn kind(&self) -> GeneratorKind {
        match self {
            Generator::NonlinearDefault => GeneratorKind::NonlinearDefault,
            Generator::Lfsr(_) => GeneratorKind::Lfsr,
        }
    }
}

/// Initial generator state σ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Seed(FieldVector);

impl Seed {
    pub fn new(sigma: FieldVector) -> Self {
        Seed(sigma)
    }

    pub fn symbols(&self) -> &FieldVector {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrngIdentWord {
    pub seed: Seed,
    pub tags: FieldVector,
}

/// `G(σ)` stored as its ℓ columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagMatrix {
    columns: Vec<FieldVector>,
}

impl TagMatrix {
    pub fn columns(&self) -> &[FieldVector] {
        &self.columns
    }

    /// Row vector times matrix: one tag per column.
    pub fn apply(&self, u: &Message) -> FieldVector {
        let f = u.field();
        let tags = self
            .columns
            .iter()
            .map(|c| f.dot_raw(u.symbols().as_slice(), c.as_slice()))
            .collect();
        f.vector_unchecked(tags)
    }
}

/// A (q, k, ℓ, μ) PRNG identification scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrngScheme {
    field: Field,
    k: usize,
    ell: usize,
    mu: usize,
    generator: Generator,
}

impl PrngScheme {
    pub fn new(
        field: Field,
        k: usize,
        ell: usize,
        mu: usize,
        generator: Generator,
    ) -> Result<Self> {
        if k == 0 || k > usize::from(u16::MAX) {
            return Err(invalid(format!("message length k = {k} outside 1..=65535")));
        }
        if ell == 0 || ell > usize::from(u8::MAX) {
            return Err(invalid(format!("tag count ell = {ell} outside 1..=255")));
        }
        if mu == 0 || mu > usize::from(u16::MAX) {
            return Err(invalid(format!("seed length mu = {mu} outside 1..=65535")));
        }
        if let Generator::Lfsr(spec) = &generator {
            if spec.field() != field {
                return Err(Error::FieldMismatch {
                    left: field.m(),
                    right: spec.field().m(),
                });
            }
            if spec.mu() != mu {
                return Err(Error::LengthMismatch {
                    expected: mu,
                    actual: spec.mu(),
                });
            }
            if mu < k {
                log::warn!(
                    "LFSR with mu = {mu} < k = {k}: a message pair exists that is \
                     falsely accepted under every seed"
                );
            }
        }
        Ok(PrngScheme {
            field,
            k,
            ell,
            mu,
            generator,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    fn check_seed(&self, seed: &Seed) -> Result<()> {
        self.field.check_vec(seed.symbols())?;
        if seed.len() != self.mu {
            return Err(Error::LengthMismatch {
                expected: self.mu,
                actual: seed.len(),
            });
        }
        Ok(())
    }

    /// The first `count` generator outputs for seed σ.
    pub fn expand(&self, seed: &Seed, count: usize) -> Result<FieldVector> {
        self.check_seed(seed)?;
        match &self.generator {
            Generator::NonlinearDefault => {
                let mut h = Sha256::new();
                h.update(NONLINEAR_LABEL);
                h.update([self.field.m()]);
                h.update((self.mu as u16).to_be_bytes());
                h.update(seed.symbols().pack());
                let key: [u8; 32] = h.finalize().into();
                let mut rng = ChaCha20Rng::from_seed(key);
                Ok(self.field.random_vector(count, &mut rng))
            }
            Generator::Lfsr(spec) => spec.sequence(seed, count),
        }
    }

    /// `G(σ)`: `ℓ·k` expanded symbols, column-major.
    pub fn build_tag_matrix(&self, seed: &Seed) -> Result<TagMatrix> {
        let s = self.expand(seed, self.ell * self.k)?.into_inner();
        let columns = s
            .chunks_exact(self.k)
            .map(|c| self.field.vector_unchecked(c.to_vec()))
            .collect();
        Ok(TagMatrix { columns })
    }

    pub fn random_seed<R: RngCore + ?Sized>(&self, rng: &mut R) -> Seed {
        Seed(self.field.random_vector(self.mu, rng))
    }

    /// Tags of `u` under a given seed.
    pub fn tags_for(&self, u: &Message, seed: &Seed) -> Result<FieldVector> {
        u.check(self.field, self.k)?;
        Ok(self.build_tag_matrix(seed)?.apply(u))
    }

    pub fn send<R: RngCore + ?Sized>(&self, u: &Message, rng: &mut R) -> Result<PrngIdentWord> {
        u.check(self.field, self.k)?;
        let seed = self.random_seed(rng);
        let tags = self.build_tag_matrix(&seed)?.apply(u);
        Ok(PrngIdentWord { seed, tags })
    }

    pub fn verify(&self, expected: &Message, w: &PrngIdentWord) -> Verdict {
        if let Some(m) = self.check_word(expected, w) {
            return malformed(m);
        }
        let g = self.build_tag_matrix(&w.seed).expect("seed checked");
        if g.apply(expected) == w.tags {
            Verdict::Accept
        } else {
            Verdict::Reject(Rejection::TagMismatch)
        }
    }

    fn check_word(&self, expected: &Message, w: &PrngIdentWord) -> Option<Malformed> {
        let m = self.field.m();
        for actual in [expected.m(), w.seed.symbols().m(), w.tags.m()] {
            if actual != m {
                return Some(Malformed::FieldMismatch {
                    expected: m,
                    actual,
                });
            }
        }
        let lengths = [
            ("expected message", self.k, expected.k()),
            ("seed", self.mu, w.seed.len()),
            ("tags", self.ell, w.tags.len()),
        ];
        lengths
            .into_iter()
            .find(|&(_, want, got)| want != got)
            .map(|(field, expected, actual)| Malformed::LengthMismatch {
                field,
                expected,
                actual,
            })
    }
}

/// `(log₂ k + log₂ log₂ q) / ((μ + ℓ)·log₂ q)`.
pub fn ident_rate_prng(field: Field, k: u64, ell: u64, mu: u64) -> Result<f64> {
    if k < 2 {
        return Err(invalid(format!(
            "identification rate needs k >= 2 (k = {k})"
        )));
    }
    if ell + mu == 0 {
        return Err(invalid("word must carry at least one symbol"));
    }
    let log_q = f64::from(field.m());
    Ok(((k as f64).log2() + log_q.log2()) / ((mu + ell) as f64 * log_q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identify_code::ident_rate_code;
    use rand_chacha::ChaCha8Rng;

    fn nonlinear(m: u8, k: usize, ell: usize, mu: usize) -> PrngScheme {
        PrngScheme::new(
            Field::new(m).unwrap(),
            k,
            ell,
            mu,
            Generator::NonlinearDefault,
        )
        .unwrap()
    }

    fn gf2_lfsr_scheme(k: usize, ell: usize) -> PrngScheme {
        let f = Field::new(1).unwrap();
        let spec = LfsrSpec::new(f, vec![1, 1]).unwrap();
        PrngScheme::new(f, k, ell, 2, Generator::Lfsr(spec)).unwrap()
    }

    #[test]
    fn parameters_validated() {
        let f = Field::new(4).unwrap();
        assert!(PrngScheme::new(f, 0, 1, 1, Generator::NonlinearDefault).is_err());
        assert!(PrngScheme::new(f, 1, 0, 1, Generator::NonlinearDefault).is_err());
        assert!(PrngScheme::new(f, 1, 1, 0, Generator::NonlinearDefault).is_err());
        assert!(PrngScheme::new(f, 1, 256, 1, Generator::NonlinearDefault).is_err());
        let spec = LfsrSpec::new(f, vec![1, 2, 3]).unwrap();
        assert!(PrngScheme::new(f, 4, 1, 2, Generator::Lfsr(spec.clone())).is_err());
        let other = Field::new(8).unwrap();
        assert!(PrngScheme::new(other, 4, 1, 3, Generator::Lfsr(spec)).is_err());
    }

    #[test]
    fn expansion_is_deterministic() {
        let s = nonlinear(8, 4, 2, 3);
        let seed = Seed::new(s.field().vector(vec![1, 2, 3]).unwrap());
        assert_eq!(s.expand(&seed, 64).unwrap(), s.expand(&seed, 64).unwrap());
        assert_eq!(
            s.build_tag_matrix(&seed).unwrap(),
            s.build_tag_matrix(&seed).unwrap()
        );
        let other = Seed::new(s.field().vector(vec![1, 2, 4]).unwrap());
        assert_ne!(s.expand(&seed, 64).unwrap(), s.expand(&other, 64).unwrap());
    }

    #[test]
    fn seed_length_is_part_of_expansion_key() {
        // m = 4: (0) and (0, 0) both pack to one zero byte.
        let f = Field::new(4).unwrap();
        let a = nonlinear(4, 2, 1, 1);
        let b = nonlinear(4, 2, 1, 2);
        let ea = a.expand(&Seed::new(f.zero_vector(1)), 16).unwrap();
        let eb = b.expand(&Seed::new(f.zero_vector(2)), 16).unwrap();
        assert_ne!(ea, eb);
    }

    #[test]
    fn nonlinear_symbols_look_uniform() {
        let s = nonlinear(4, 1, 1, 2);
        let seed = Seed::new(s.field().vector(vec![7, 9]).unwrap());
        let out = s.expand(&seed, 100_000).unwrap();
        let mut bins = [0f64; 16];
        for &v in out.as_slice() {
            bins[usize::from(v)] += 1.0;
        }
        let sigma = (100_000f64 / 16.0 * 15.0 / 16.0).sqrt();
        for c in bins {
            assert!((c - 6250.0).abs() <= 4.0 * sigma);
        }
    }

    #[test]
    fn lfsr_expansion_starts_with_seed() {
        let s = gf2_lfsr_scheme(4, 2);
        let f = s.field();
        let seed = Seed::new(f.vector(vec![1, 0]).unwrap());
        let out = s.expand(&seed, 8).unwrap();
        assert_eq!(out.as_slice(), &[1, 0, 1, 1, 0, 1, 1, 0]);
    }

    #[test]
    fn single_cell_matrix_is_first_symbol() {
        let s = nonlinear(8, 1, 1, 2);
        let seed = Seed::new(s.field().vector(vec![0xaa, 0x55]).unwrap());
        let g = s.build_tag_matrix(&seed).unwrap();
        assert_eq!(g.columns().len(), 1);
        assert_eq!(
            g.columns()[0].as_slice(),
            &s.expand(&seed, 1).unwrap().as_slice()[..1]
        );
    }

    #[test]
    fn lfsr_columns_are_consecutive_windows() {
        let f = Field::new(4).unwrap();
        let spec = LfsrSpec::new(f, vec![3, 1, 4]).unwrap();
        let s = PrngScheme::new(f, 5, 3, 3, Generator::Lfsr(spec.clone())).unwrap();
        let seed = Seed::new(f.vector(vec![2, 7, 1]).unwrap());
        let seq = spec.sequence(&seed, 15).unwrap();
        let g = s.build_tag_matrix(&seed).unwrap();
        for (j, col) in g.columns().iter().enumerate() {
            assert_eq!(col.as_slice(), &seq.as_slice()[j * 5..(j + 1) * 5]);
        }
    }

    #[test]
    fn zero_message_has_zero_tags() {
        let s = nonlinear(8, 6, 3, 4);
        let zero = Message::new(s.field().zero_vector(6)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            assert!(s.send(&zero, &mut rng).unwrap().tags.is_zero());
        }
    }

    #[test]
    fn send_reproducible_and_complete() {
        for s in [nonlinear(8, 6, 2, 3), gf2_lfsr_scheme(4, 3)] {
            let mut rng = ChaCha8Rng::seed_from_u64(8);
            let u = Message::random(s.field(), s.k(), &mut rng);
            let w1 = s.send(&u, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
            let w2 = s.send(&u, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
            assert_eq!(w1, w2);
            assert_eq!(w1.seed.len() + w1.tags.len(), s.mu() + s.ell());
            assert_eq!(s.verify(&u, &w1), Verdict::Accept);
        }
    }

    #[test]
    fn tags_match_schoolbook_product() {
        // q=2, k=2, ℓ=2: τ_j = Σ_i u_i G[i][j] with AND/XOR.
        let s = nonlinear(1, 2, 2, 5);
        let f = s.field();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let u = Message::random(f, 2, &mut rng);
            let w = s.send(&u, &mut rng).unwrap();
            let flat = s.expand(&w.seed, 4).unwrap();
            let g = flat.as_slice();
            let us = u.symbols().as_slice();
            let expect = [
                (us[0] & g[0]) ^ (us[1] & g[1]),
                (us[0] & g[2]) ^ (us[1] & g[3]),
            ];
            assert_eq!(w.tags.as_slice(), &expect);
        }
    }

    #[test]
    fn exhaustive_ideal_matrices_collide_half_the_time() {
        // q=2, k=2, ℓ=1: over all 3 nonzero v and all 4 columns g,
        // v·g = 0 in exactly half the cases.
        let f = Field::new(1).unwrap();
        let mut zero = 0;
        let mut total = 0;
        for v in 1..4u16 {
            for g in 0..4u16 {
                let vv = [v & 1, v >> 1];
                let gg = [g & 1, g >> 1];
                if f.dot_raw(&vv, &gg) == 0 {
                    zero += 1;
                }
                total += 1;
            }
        }
        assert_eq!(zero * 2, total);
    }

    #[test]
    fn malformed_words_rejected() {
        let s = nonlinear(4, 3, 2, 2);
        let f = s.field();
        let u = Message::from_values(f, vec![1, 2, 3]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let good = s.send(&u, &mut rng).unwrap();
        let short_seed = PrngIdentWord {
            seed: Seed::new(f.vector(vec![1]).unwrap()),
            tags: good.tags.clone(),
        };
        assert!(matches!(
            s.verify(&u, &short_seed),
            Verdict::Reject(Rejection::Malformed(Malformed::LengthMismatch {
                field: "seed",
                ..
            }))
        ));
        let long_tags = PrngIdentWord {
            seed: good.seed.clone(),
            tags: f.vector(vec![0, 0, 0]).unwrap(),
        };
        assert!(matches!(
            s.verify(&u, &long_tags),
            Verdict::Reject(Rejection::Malformed(Malformed::LengthMismatch {
                field: "tags",
                ..
            }))
        ));
        let wrong_field = PrngIdentWord {
            seed: Seed::new(Field::new(8).unwrap().vector(vec![1, 2]).unwrap()),
            tags: good.tags,
        };
        assert!(matches!(
            s.verify(&u, &wrong_field),
            Verdict::Reject(Rejection::Malformed(Malformed::FieldMismatch { .. }))
        ));
    }

    #[test]
    fn lfsr_attack_small_exhaustive() {
        let s = gf2_lfsr_scheme(4, 2);
        let spec = match s.generator() {
            Generator::Lfsr(spec) => spec.clone(),
            _ => unreachable!(),
        };
        let (u, v) = lfsr_attack(&spec, 4).unwrap();
        let f = s.field();
        for bits in 0..4u16 {
            let seed = Seed::new(f.vector(vec![bits & 1, bits >> 1]).unwrap());
            let g = s.build_tag_matrix(&seed).unwrap();
            assert!(g.apply(&v).is_zero());
            let w = PrngIdentWord {
                tags: s.tags_for(&u, &seed).unwrap(),
                seed,
            };
            assert!(s.verify(&v, &w).is_accept());
        }
    }

    #[test]
    fn rate_values() {
        let f = Field::new(10).unwrap();
        let r = ident_rate_prng(f, 340, 1, 2).unwrap();
        assert!((r - 0.391_043_967_700_835_5).abs() < 1e-12);
        assert!(ident_rate_prng(f, 340, 1, 4).unwrap() < r);
        // (μ+ℓ)·log q = log n + log q with n = q^2 gives the code-based rate.
        let code = ident_rate_code(f, 340, 1 << 20).unwrap();
        assert!((r - code).abs() < 1e-12);
        assert!(ident_rate_prng(f, 1, 1, 2).is_err());
    }

    #[test]
    fn generator_names_round_trip() {
        for kind in [GeneratorKind::NonlinearDefault, GeneratorKind::Lfsr] {
            assert_eq!(kind.name().parse::<GeneratorKind>().unwrap(), kind);
            assert_eq!(GeneratorKind::from_id(kind.id()), Some(kind));
        }
        assert_eq!(GeneratorKind::from_id(0), None);
        assert!("lcg".parse::<GeneratorKind>().is_err());
    }
}
