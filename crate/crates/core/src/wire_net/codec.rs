//! Bit-exact encoding of identification words.
//!
//! ```text
//! byte 0      version (0x01)
//! byte 1      scheme  (0x01 code-based, 0x02 PRNG-based)
//! byte 2      field width m
//! code:  k u16 BE | n u32 BE | ell u8
//!        payload: ell × (index u32 | tag m bits)
//! prng:  k u16 BE | ell u8 | mu u16 BE | generator u8
//!        payload: mu seed symbols | ell tags, m bits each
//! ```
//!
//! The payload is one contiguous bit string, zero-padded at the end to a
//! byte boundary. A decoder requires exactly that many bytes.

use std::fmt;

use thiserror::Error;

use crate::bits::{BitReader, BitWriter};
use crate::gf::{Field, FieldVector};
use crate::identify_code::CodeIdentWord;
use crate::identify_prng::{GeneratorKind, PrngIdentWord, Seed};

pub const VERSION: u8 = 0x01;
pub const SCHEME_CODE: u8 = 0x01;
pub const SCHEME_PRNG: u8 = 0x02;

const CODE_HEADER_LEN: usize = 10;
const PRNG_HEADER_LEN: usize = 9;
const INDEX_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WireError {
    #[error("truncated: need {needed} bytes, have {available}")]
    Truncated { needed: usize, available: usize },
    #[error("unsupported version {0:#04x}")]
    BadVersion(u8),
    #[error("unknown scheme tag {0:#04x}")]
    UnknownScheme(u8),
    #[error("field width {0} outside 1..=16")]
    BadFieldWidth(u8),
    #[error("header parameter {0} must be nonzero")]
    ZeroParameter(&'static str),
    #[error("unknown generator id {0:#04x}")]
    UnknownGenerator(u8),
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: u32, n: u32 },
    #[error("nonzero padding bits")]
    NonzeroPadding,
    #[error("{0} unexpected trailing bytes")]
    TrailingBytes(usize),
    #[error("word does not match its header: {0}")]
    Inconsistent(&'static str),
}

impl WireError {
    /// Stable one-byte code carried in responder replies.
    pub fn reason_code(&self) -> u8 {
        match self {
            WireError::Truncated { .. } => 0x10,
            WireError::BadVersion(_) => 0x11,
            WireError::UnknownScheme(_) => 0x12,
            WireError::BadFieldWidth(_) => 0x13,
            WireError::ZeroParameter(_) => 0x14,
            WireError::UnknownGenerator(_) => 0x15,
            WireError::IndexOutOfRange { .. } => 0x16,
            WireError::NonzeroPadding => 0x17,
            WireError::TrailingBytes(_) => 0x18,
            WireError::Inconsistent(_) => 0x19,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeHeader {
    pub m: u8,
    pub k: u16,
    pub n: u32,
    pub ell: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrngHeader {
    pub m: u8,
    pub k: u16,
    pub ell: u8,
    pub mu: u16,
    pub generator: GeneratorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WireWord {
    Code {
        header: CodeHeader,
        word: CodeIdentWord,
    },
    Prng {
        header: PrngHeader,
        word: PrngIdentWord,
    },
}

impl WireWord {
    pub fn m(&self) -> u8 {
        match self {
            WireWord::Code { header, .. } => header.m,
            WireWord::Prng { header, .. } => header.m,
        }
    }

    /// Payload bits without header or padding.
    pub fn payload_bits(&self) -> usize {
        match self {
            WireWord::Code { header, .. } => {
                usize::from(header.ell) * (INDEX_BITS as usize + usize::from(header.m))
            }
            WireWord::Prng { header, .. } => {
                (usize::from(header.mu) + usize::from(header.ell)) * usize::from(header.m)
            }
        }
    }

    pub fn encoded_len(&self) -> usize {
        let header = match self {
            WireWord::Code { .. } => CODE_HEADER_LEN,
            WireWord::Prng { .. } => PRNG_HEADER_LEN,
        };
        header + self.payload_bits().div_ceil(8)
    }
}

impl fmt::Display for WireWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WireWord::Code { header, word } => write!(
                f,
                "code m={} k={} n={} ell={} indices={:?} tags={:?}",
                header.m,
                header.k,
                header.n,
                header.ell,
                word.indices,
                word.tags.as_slice()
            ),
            WireWord::Prng { header, word } => write!(
                f,
                "prng m={} k={} ell={} mu={} generator={} seed={:?} tags={:?}",
                header.m,
                header.k,
                header.ell,
                header.mu,
                header.generator,
                word.seed.symbols().as_slice(),
                word.tags.as_slice()
            ),
        }
    }
}

fn check_symbols(v: &FieldVector, m: u8, len: usize, what: &'static str) -> Result<(), WireError> {
    if v.m() != m || v.len() != len {
        return Err(WireError::Inconsistent(what));
    }
    Ok(())
}

pub fn encode_word(w: &WireWord) -> Result<Vec<u8>, WireError> {
    let m = w.m();
    if !(1..=16).contains(&m) {
        return Err(WireError::BadFieldWidth(m));
    }
    let mut out = Vec::with_capacity(w.encoded_len());
    out.push(VERSION);
    let mut bits = BitWriter::new();
    match w {
        WireWord::Code { header, word } => {
            if header.k == 0 {
                return Err(WireError::ZeroParameter("k"));
            }
            if header.n == 0 {
                return Err(WireError::ZeroParameter("n"));
            }
            if header.ell == 0 {
                return Err(WireError::ZeroParameter("ell"));
            }
            let ell = usize::from(header.ell);
            if word.indices.len() != ell {
                return Err(WireError::Inconsistent("index count"));
            }
            check_symbols(&word.tags, m, ell, "tags")?;
            out.push(SCHEME_CODE);
            out.push(m);
            out.extend_from_slice(&header.k.to_be_bytes());
            out.extend_from_slice(&header.n.to_be_bytes());
            out.push(header.ell);
            for (&index, &tag) in word.indices.iter().zip(word.tags.as_slice()) {
                if index >= header.n {
                    return Err(WireError::IndexOutOfRange { index, n: header.n });
                }
                bits.push(u64::from(index), INDEX_BITS);
                bits.push(u64::from(tag), u32::from(m));
            }
        }
        WireWord::Prng { header, word } => {
            if header.k == 0 {
                return Err(WireError::ZeroParameter("k"));
            }
            if header.ell == 0 {
                return Err(WireError::ZeroParameter("ell"));
            }
            if header.mu == 0 {
                return Err(WireError::ZeroParameter("mu"));
            }
            check_symbols(word.seed.symbols(), m, usize::from(header.mu), "seed")?;
            check_symbols(&word.tags, m, usize::from(header.ell), "tags")?;
            out.push(SCHEME_PRNG);
            out.push(m);
            out.extend_from_slice(&header.k.to_be_bytes());
            out.push(header.ell);
            out.extend_from_slice(&header.mu.to_be_bytes());
            out.push(header.generator.id());
            word.seed.symbols().write_bits(&mut bits);
            word.tags.write_bits(&mut bits);
        }
    }
    out.extend_from_slice(&bits.finish());
    Ok(out)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take<const N: usize>(&mut self, needed_total: usize) -> Result<[u8; N], WireError> {
        let end = self.pos + N;
        if end > self.bytes.len() {
            return Err(WireError::Truncated {
                needed: needed_total.max(end),
                available: self.bytes.len(),
            });
        }
        let mut buf = [0u8; N];
        buf.copy_from_slice(&self.bytes[self.pos..end]);
        self.pos = end;
        Ok(buf)
    }
}

fn read_payload<'a>(
    bytes: &'a [u8],
    header_len: usize,
    payload_bits: usize,
) -> Result<BitReader<'a>, WireError> {
    let needed = header_len + payload_bits.div_ceil(8);
    if bytes.len() < needed {
        return Err(WireError::Truncated {
            needed,
            available: bytes.len(),
        });
    }
    if bytes.len() > needed {
        return Err(WireError::TrailingBytes(bytes.len() - needed));
    }
    Ok(BitReader::new(&bytes[header_len..]))
}

fn finish_payload(r: &BitReader<'_>) -> Result<(), WireError> {
    if !r.padding_is_zero() {
        return Err(WireError::NonzeroPadding);
    }
    debug_assert_eq!(r.trailing_bytes(), 0);
    Ok(())
}

fn read_symbols(r: &mut BitReader<'_>, field: Field, len: usize) -> FieldVector {
    let values = (0..len)
        .map(|_| r.read(u32::from(field.m())).expect("length checked") as u16)
        .collect();
    field.vector(values).expect("m-bit values are in the field")
}

pub fn decode_word(bytes: &[u8]) -> Result<WireWord, WireError> {
    let mut c = Cursor { bytes, pos: 0 };
    let [version, scheme, m] = c.take::<3>(3)?;
    if version != VERSION {
        return Err(WireError::BadVersion(version));
    }
    let header_len = match scheme {
        SCHEME_CODE => CODE_HEADER_LEN,
        SCHEME_PRNG => PRNG_HEADER_LEN,
        other => return Err(WireError::UnknownScheme(other)),
    };
    let field = Field::new(m).map_err(|_| WireError::BadFieldWidth(m))?;
    match scheme {
        SCHEME_CODE => {
            let k = u16::from_be_bytes(c.take::<2>(header_len)?);
            let n = u32::from_be_bytes(c.take::<4>(header_len)?);
            let [ell] = c.take::<1>(header_len)?;
            if k == 0 {
                return Err(WireError::ZeroParameter("k"));
            }
            if n == 0 {
                return Err(WireError::ZeroParameter("n"));
            }
            if ell == 0 {
                return Err(WireError::ZeroParameter("ell"));
            }
            let header = CodeHeader { m, k, n, ell };
            let bits = usize::from(ell) * (INDEX_BITS as usize + usize::from(m));
            let mut r = read_payload(bytes, header_len, bits)?;
            let mut indices = Vec::with_capacity(usize::from(ell));
            let mut tags = Vec::with_capacity(usize::from(ell));
            for _ in 0..ell {
                let index = r.read(INDEX_BITS).expect("length checked") as u32;
                if index >= n {
                    return Err(WireError::IndexOutOfRange { index, n });
                }
                indices.push(index);
                tags.push(r.read(u32::from(m)).expect("length checked") as u16);
            }
            finish_payload(&r)?;
            let tags = field.vector(tags).expect("m-bit values are in the field");
            Ok(WireWord::Code {
                header,
                word: CodeIdentWord { indices, tags },
            })
        }
        _ => {
            let k = u16::from_be_bytes(c.take::<2>(header_len)?);
            let [ell] = c.take::<1>(header_len)?;
            let mu = u16::from_be_bytes(c.take::<2>(header_len)?);
            let [gen] = c.take::<1>(header_len)?;
            if k == 0 {
                return Err(WireError::ZeroParameter("k"));
            }
            if ell == 0 {
                return Err(WireError::ZeroParameter("ell"));
            }
            if mu == 0 {
                return Err(WireError::ZeroParameter("mu"));
            }
            let generator = GeneratorKind::from_id(gen).ok_or(WireError::UnknownGenerator(gen))?;
            let header = PrngHeader {
                m,
                k,
                ell,
                mu,
                generator,
            };
            let bits = (usize::from(mu) + usize::from(ell)) * usize::from(m);
            let mut r = read_payload(bytes, header_len, bits)?;
            let seed = Seed::new(read_symbols(&mut r, field, usize::from(mu)));
            let tags = read_symbols(&mut r, field, usize::from(ell));
            finish_payload(&r)?;
            Ok(WireWord::Prng {
                header,
                word: PrngIdentWord { seed, tags },
            })
        }
    }
}
