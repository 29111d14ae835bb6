//! Linear feedback shift register over GF(2^m), and the message pair that
//! defeats PRNG identification whenever the register is shorter than `k`.

use crate::error::{invalid, Error, Result};
use crate::gf::{Field, FieldVector};
use crate::message::Message;

use super::Seed;

/// Register of length μ with feedback polynomial
/// `a(x) = 1 + a_1 x + … + a_μ x^μ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LfsrSpec {
    field: Field,
    /// a_1..a_μ; a_0 = 1 is implicit.
    taps: Vec<u16>,
}

impl LfsrSpec {
    pub fn new(field: Field, taps: Vec<u16>) -> Result<Self> {
        if taps.is_empty() {
            return Err(invalid("LFSR needs at least one feedback coefficient"));
        }
        let taps = field.vector(taps)?.into_inner();
        Ok(LfsrSpec { field, taps })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn mu(&self) -> usize {
        self.taps.len()
    }

    /// Coefficients a_1..a_μ.
    pub fn taps(&self) -> &[u16] {
        &self.taps
    }

    /// `count` output symbols. The first μ are the seed itself; after that
    /// `s_t = -Σ_{j=1..μ} a_j s_{t-j}`.
    pub fn sequence(&self, seed: &Seed, count: usize) -> Result<FieldVector> {
        let sigma = seed.symbols();
        self.field.check_vec(sigma)?;
        if sigma.len() != self.mu() {
            return Err(Error::LengthMismatch {
                expected: self.mu(),
                actual: sigma.len(),
            });
        }
        let f = self.field;
        let mu = self.mu();
        let mut s: Vec<u16> = sigma.as_slice().iter().copied().take(count).collect();
        s.reserve(count.saturating_sub(mu));
        for t in mu..count {
            let feedback = self
                .taps
                .iter()
                .enumerate()
                .fold(0u16, |acc, (j, &a)| acc ^ f.mul_raw(a, s[t - 1 - j]));
            let next = f
                .neg(f.elem(u32::from(feedback)).expect("in field"))
                .expect("same field");
            s.push(next.value());
        }
        Ok(f.vector_unchecked(s))
    }

    /// `(a_μ, …, a_1, 1)`: dotted with any μ+1 consecutive outputs it gives 0.
    pub fn annihilator(&self) -> Vec<u16> {
        let mut v: Vec<u16> = self.taps.iter().rev().copied().collect();
        v.push(1);
        v
    }
}

/// Builds messages `u = 0` and `u' = (a_μ, …, a_1, 1, 0, …, 0)` of length `k`.
///
/// Every column of `G(σ)` is a length-k window of the register output, so
/// `(u' - u)·g = 0` for every column and every seed: `u` is accepted as
/// `u'` with probability 1. Requires `μ < k`.
pub fn lfsr_attack(spec: &LfsrSpec, k: usize) -> Result<(Message, Message)> {
    if spec.mu() >= k {
        return Err(Error::AttackNotApplicable { mu: spec.mu(), k });
    }
    let mut v = spec.annihilator();
    v.resize(k, 0);
    let u = Message::new(spec.field.zero_vector(k))?;
    let u_prime = Message::from_values(spec.field, v)?;
    Ok((u, u_prime))
}
