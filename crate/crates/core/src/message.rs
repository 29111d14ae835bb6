use std::fmt;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldVector};

/// An identifier `u` of `k` field symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Message(FieldVector);

impl Message {
    pub fn new(u: FieldVector) -> Result<Self> {
        if u.is_empty() {
            return Err(Error::InvalidParameter(
                "message must have k >= 1 symbols".into(),
            ));
        }
        Ok(Message(u))
    }

    pub fn from_values(field: Field, values: Vec<u16>) -> Result<Self> {
        Self::new(field.vector(values)?)
    }

    pub fn random<R: RngCore + ?Sized>(field: Field, k: usize, rng: &mut R) -> Self {
        debug_assert!(k >= 1);
        Message(field.random_vector(k, rng))
    }

    /// Parses the packed hex form used by registry files and the CLI.
    pub fn from_hex(field: Field, k: usize, hex_str: &str) -> Result<Self> {
        let bytes = hex::decode(hex_str.trim())
            .map_err(|e| Error::InvalidParameter(format!("bad hex message: {e}")))?;
        Self::new(FieldVector::unpack(field, &bytes, k)?)
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0.pack())
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn m(&self) -> u8 {
        self.0.m()
    }

    pub fn field(&self) -> Field {
        self.0.field()
    }

    pub fn symbols(&self) -> &FieldVector {
        &self.0
    }

    pub(crate) fn check(&self, field: Field, k: usize) -> Result<()> {
        field.check_vec(&self.0)?;
        if self.k() != k {
            return Err(Error::LengthMismatch {
                expected: k,
                actual: self.k(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}
