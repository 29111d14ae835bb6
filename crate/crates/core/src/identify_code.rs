//! Identification over a random linear code.
//!
//! The code is `C = { uG }` for a `k × n` generator matrix `G` whose entries
//! are independent uniform field symbols. `G` is never stored: column `i` is
//! re-derived from the shared key as ChaCha20 stream `i`, keyed by
//! SHA-256 of the key, one symbol per 32-bit output word.
//!
//! To identify `u`, the sender picks `ℓ` uniform column indices (with
//! replacement) and sends each index with the tag `(u, g^[i])`. The receiver
//! recomputes the tags for the message it expects and accepts only if all
//! `ℓ` agree.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use crate::error::{invalid, Error, Result};
use crate::gf::{Field, FieldElement, FieldVector};
use crate::message::Message;
use crate::verdict::{malformed, Malformed, Rejection, Verdict};

const COLUMN_LABEL: &[u8] = b"identkit/code-column/v1\0";

#[derive(Clone)]
pub struct CodeSpec {
    field: Field,
    k: usize,
    n: u32,
    key: Vec<u8>,
    column_seed: [u8; 32],
}

impl std::fmt::Debug for CodeSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CodeSpec")
            .field("field", &self.field)
            .field("k", &self.k)
            .field("n", &self.n)
            .finish_non_exhaustive()
    }
}

impl PartialEq for CodeSpec {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.k == other.k && self.n == other.n && self.key == other.key
    }
}

impl CodeSpec {
    pub fn new(field: Field, k: usize, n: u32, key: impl Into<Vec<u8>>) -> Result<Self> {
        if k == 0 || k > usize::from(u16::MAX) {
            return Err(invalid(format!("code dimension k = {k} outside 1..=65535")));
        }
        if n == 0 {
            return Err(invalid("code length n must be at least 1"));
        }
        let key = key.into();
        let mut h = Sha256::new();
        h.update(COLUMN_LABEL);
        h.update(&key);
        let column_seed: [u8; 32] = h.finalize().into();
        Ok(CodeSpec {
            field,
            k,
            n,
            key,
            column_seed,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn key(&self) -> &[u8] {
        &self.key
    }

    fn check_index(&self, i: u32) -> Result<()> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange {
                index: u64::from(i),
                n: u64::from(self.n),
            });
        }
        Ok(())
    }

    fn column_into(&self, i: u32, out: &mut Vec<u16>) {
        let mut rng = ChaCha20Rng::from_seed(self.column_seed);
        rng.set_stream(u64::from(i));
        out.clear();
        out.extend((0..self.k).map(|_| self.field.sample_raw(&mut rng)));
    }

    /// Column `g^[i]` of the generator matrix.
    pub fn derive_column(&self, i: u32) -> Result<FieldVector> {
        self.check_index(i)?;
        let mut col = Vec::with_capacity(self.k);
        self.column_into(i, &mut col);
        Ok(self.field.vector_unchecked(col))
    }

    /// All `n` columns. Only sensible for small codes.
    pub fn materialize(&self) -> Vec<FieldVector> {
        (0..self.n)
            .map(|i| self.derive_column(i).expect("index in range"))
            .collect()
    }

    /// The tag `c_i = (u, g^[i])`.
    pub fn compute_tag(&self, u: &Message, i: u32) -> Result<FieldElement> {
        u.check(self.field, self.k)?;
        self.check_index(i)?;
        let mut col = Vec::with_capacity(self.k);
        self.column_into(i, &mut col);
        Ok(self
            .field
            .elem(u32::from(self.field.dot_raw(u.symbols().as_slice(), &col)))
            .expect("dot product stays in field"))
    }

    pub fn send<R: RngCore + ?Sized>(
        &self,
        u: &Message,
        ell: usize,
        rng: &mut R,
    ) -> Result<CodeIdentWord> {
        if ell == 0 {
            return Err(invalid("repetition count must be at least 1"));
        }
        u.check(self.field, self.k)?;
        let indices: Vec<u32> = (0..ell).map(|_| uniform_index(rng, self.n)).collect();
        let mut col = Vec::with_capacity(self.k);
        let tags = indices
            .iter()
            .map(|&i| {
                self.column_into(i, &mut col);
                self.field.dot_raw(u.symbols().as_slice(), &col)
            })
            .collect();
        Ok(CodeIdentWord {
            indices,
            tags: self.field.vector_unchecked(tags),
        })
    }

    /// Accepts iff every tag in `w` equals the tag of `expected` at the same
    /// index.
    pub fn verify(&self, expected: &Message, w: &CodeIdentWord) -> Verdict {
        if let Some(m) = self.check_word(expected, w) {
            return malformed(m);
        }
        let mut col = Vec::with_capacity(self.k);
        for (&i, &tag) in w.indices.iter().zip(w.tags.as_slice()) {
            self.column_into(i, &mut col);
            if self.field.dot_raw(expected.symbols().as_slice(), &col) != tag {
                return Verdict::Reject(Rejection::TagMismatch);
            }
        }
        Verdict::Accept
    }

    fn check_word(&self, expected: &Message, w: &CodeIdentWord) -> Option<Malformed> {
        if expected.m() != self.field.m() {
            return Some(Malformed::FieldMismatch {
                expected: self.field.m(),
                actual: expected.m(),
            });
        }
        if expected.k() != self.k {
            return Some(Malformed::LengthMismatch {
                field: "expected message",
                expected: self.k,
                actual: expected.k(),
            });
        }
        if w.indices.is_empty() {
            return Some(Malformed::Empty);
        }
        if w.tags.m() != self.field.m() {
            return Some(Malformed::FieldMismatch {
                expected: self.field.m(),
                actual: w.tags.m(),
            });
        }
        if w.tags.len() != w.indices.len() {
            return Some(Malformed::LengthMismatch {
                field: "tags",
                expected: w.indices.len(),
                actual: w.tags.len(),
            });
        }
        w.indices
            .iter()
            .find(|&&i| i >= self.n)
            .map(|&index| Malformed::IndexOutOfRange { index, n: self.n })
    }
}

/// `ℓ` (index, tag) pairs. `ℓ = 1` is the basic word `(i, c_i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeIdentWord {
    pub indices: Vec<u32>,
    pub tags: FieldVector,
}

impl CodeIdentWord {
    pub fn ell(&self) -> usize {
        self.indices.len()
    }
}

/// Uniform draw from `[0, n)`: mask a 32-bit word to the next power of two
/// and reject values `>= n`.
pub(crate) fn uniform_index<R: RngCore + ?Sized>(rng: &mut R, n: u32) -> u32 {
    debug_assert!(n > 0);
    if n == 1 {
        return 0;
    }
    let mask = u32::MAX >> (n - 1).leading_zeros();
    loop {
        let x = rng.next_u32() & mask;
        if x < n {
            return x;
        }
    }
}

/// `(log₂ k + log₂ log₂ q) / (log₂ n + log₂ q)`.
pub fn ident_rate_code(field: Field, k: u64, n: u64) -> Result<f64> {
    ident_rate_code_q(u64::from(field.q()), k, n)
}

pub(crate) fn ident_rate_code_q(q: u64, k: u64, n: u64) -> Result<f64> {
    if k < 2 || n < 2 {
        return Err(invalid(format!(
            "identification rate needs k >= 2 and n >= 2 (k = {k}, n = {n})"
        )));
    }
    if q < 2 {
        return Err(invalid("field order must be at least 2"));
    }
    let log_q = (q as f64).log2();
    Ok(((k as f64).log2() + log_q.log2()) / ((n as f64).log2() + log_q))
}

/// Information content of one code word, `log₂ n + log₂ q` bits.
pub fn word_bits_code(field: Field, n: u64) -> f64 {
    (n as f64).log2() + f64::from(field.m())
}
