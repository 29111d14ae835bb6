//! One handle over both identification schemes, for callers that pick the
//! scheme at run time (the experiments harness, the network demo, the CLI).

use rand::RngCore;

use crate::error::Result;
use crate::gf::Field;
use crate::identify_code::{CodeIdentWord, CodeSpec};
use crate::identify_prng::{PrngIdentWord, PrngScheme};
use crate::message::Message;
use crate::verdict::{malformed, Malformed, Verdict};

#[derive(Debug, Clone, PartialEq)]
pub enum Scheme {
    Code { spec: CodeSpec, ell: usize },
    Prng(PrngScheme),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentWord {
    Code(CodeIdentWord),
    Prng(PrngIdentWord),
}

impl Scheme {
    pub fn field(&self) -> Field {
        match self {
            Scheme::Code { spec, .. } => spec.field(),
            Scheme::Prng(p) => p.field(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Scheme::Code { spec, .. } => spec.k(),
            Scheme::Prng(p) => p.k(),
        }
    }

    pub fn ell(&self) -> usize {
        match self {
            Scheme::Code { ell, .. } => *ell,
            Scheme::Prng(p) => p.ell(),
        }
    }

    /// Probability that a uniformly random wrong message is accepted when
    /// every tag is an independent uniform symbol: `q^-ℓ`.
    pub fn ideal_false_accept(&self) -> f64 {
        f64::from(self.field().q()).powi(-(self.ell() as i32))
    }

    pub fn send<R: RngCore + ?Sized>(&self, u: &Message, rng: &mut R) -> Result<IdentWord> {
        Ok(match self {
            Scheme::Code { spec, ell } => IdentWord::Code(spec.send(u, *ell, rng)?),
            Scheme::Prng(p) => IdentWord::Prng(p.send(u, rng)?),
        })
    }

    pub fn verify(&self, expected: &Message, w: &IdentWord) -> Verdict {
        match (self, w) {
            (Scheme::Code { spec, .. }, IdentWord::Code(w)) => spec.verify(expected, w),
            (Scheme::Prng(p), IdentWord::Prng(w)) => p.verify(expected, w),
            _ => malformed(Malformed::ParameterMismatch("scheme")),
        }
    }
}
