//! Byte-level framing of identification words and a small UDP
//! request/response demo built on it.

mod codec;
mod net;
mod registry;

pub use codec::{
    decode_word, encode_word, CodeHeader, PrngHeader, WireError, WireWord, SCHEME_CODE,
    SCHEME_PRNG, VERSION,
};
pub use net::{
    call, serve, CallOptions, CallOutcome, RejectReason, Responder, ServerHandle, REPLY_LEN,
};
pub use registry::Registry;

use crate::error::{invalid, Result};
use crate::scheme::{IdentWord, Scheme};
use crate::verdict::{malformed, Malformed, Verdict};
use crate::Message;

/// Header a word sent under `scheme` carries on the wire.
pub fn header_for(scheme: &Scheme) -> Result<WireHeader> {
    let m = scheme.field().m();
    let k = u16::try_from(scheme.k()).map_err(|_| invalid("k must fit in 16 bits"))?;
    let ell = u8::try_from(scheme.ell()).map_err(|_| invalid("ell must fit in 8 bits"))?;
    Ok(match scheme {
        Scheme::Code { spec, .. } => WireHeader::Code(CodeHeader {
            m,
            k,
            n: spec.n(),
            ell,
        }),
        Scheme::Prng(p) => WireHeader::Prng(PrngHeader {
            m,
            k,
            ell,
            mu: u16::try_from(p.mu()).map_err(|_| invalid("mu must fit in 16 bits"))?,
            generator: p.generator().kind(),
        }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WireHeader {
    Code(CodeHeader),
    Prng(PrngHeader),
}

impl WireWord {
    pub fn header(&self) -> WireHeader {
        match self {
            WireWord::Code { header, .. } => WireHeader::Code(*header),
            WireWord::Prng { header, .. } => WireHeader::Prng(*header),
        }
    }

    pub fn into_ident_word(self) -> IdentWord {
        match self {
            WireWord::Code { word, .. } => IdentWord::Code(word),
            WireWord::Prng { word, .. } => IdentWord::Prng(word),
        }
    }
}

/// Pairs a word with the header of the scheme that produced it.
pub fn wrap(scheme: &Scheme, word: IdentWord) -> Result<WireWord> {
    match (header_for(scheme)?, word) {
        (WireHeader::Code(header), IdentWord::Code(word)) => Ok(WireWord::Code { header, word }),
        (WireHeader::Prng(header), IdentWord::Prng(word)) => Ok(WireWord::Prng { header, word }),
        _ => Err(invalid("word does not belong to this scheme")),
    }
}

/// Sends `u` under `scheme` and encodes the result.
pub fn send_bytes<R: rand::RngCore + ?Sized>(
    scheme: &Scheme,
    u: &Message,
    rng: &mut R,
) -> Result<Vec<u8>> {
    let word = wrap(scheme, scheme.send(u, rng)?)?;
    Ok(encode_word(&word)?)
}

/// Checks a decoded word against `expected`. A header that disagrees with
/// the local scheme is rejected before any tag is looked at.
pub fn verify_wire(scheme: &Scheme, expected: &Message, word: WireWord) -> Verdict {
    match header_for(scheme) {
        Ok(h) if h == word.header() => scheme.verify(expected, &word.into_ident_word()),
        _ => malformed(Malformed::ParameterMismatch("header")),
    }
}
