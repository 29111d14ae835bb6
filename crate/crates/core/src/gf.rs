//! Arithmetic in GF(2^m) for 1 ≤ m ≤ 16.
//!
//! Each width has one pinned reduction polynomial: the numerically smallest
//! irreducible polynomial of that degree with a nonzero constant term. Both
//! ends of a link must agree on it, since it fixes the bits of every tag.
//!
//! Multiplication goes through log/antilog tables built once per width on
//! first use and shared for the life of the process.

use std::fmt;
use std::sync::OnceLock;

use rand::RngCore;

use crate::bits::{BitReader, BitWriter};
use crate::error::{invalid, Error, Result};

pub const MIN_M: u8 = 1;
pub const MAX_M: u8 = 16;

/// Reduction polynomial for degree m at index m-1, as an (m+1)-bit mask.
pub const REDUCTION_POLYS: [u32; 16] = [
    0x3, 0x7, 0xb, 0x13, 0x25, 0x43, 0x83, 0x11b, 0x203, 0x409, 0x805, 0x1009, 0x201b, 0x4021,
    0x8003, 0x1002b,
];

struct Tables {
    m: u8,
    poly: u32,
    generator: u16,
    /// exp[i] = g^i, doubled so exp[log a + log b] never needs a modulo.
    exp: Vec<u16>,
    /// log[0] is unused.
    log: Vec<u16>,
}

static FIELDS: [OnceLock<Tables>; 16] = [const { OnceLock::new() }; 16];

/// Carry-less multiply reduced modulo `poly`. Only used to build the tables.
fn mul_reduce(a: u32, b: u32, poly: u32, m: u8) -> u32 {
    let mut acc = 0u32;
    let mut a = a;
    let mut b = b;
    let top = 1u32 << m;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= poly;
        }
    }
    acc
}

impl Tables {
    fn build(m: u8) -> Self {
        let poly = REDUCTION_POLYS[usize::from(m - 1)];
        let q = 1u32 << m;
        let order = q - 1;
        // The pinned polynomial need not be primitive (0x11b is not), so
        // search for the smallest element generating the multiplicative group.
        let generator = (1..q)
            .find(|&g| {
                let mut x = 1u32;
                for step in 1..=order {
                    x = mul_reduce(x, g, poly, m);
                    if x == 1 {
                        return step == order;
                    }
                }
                false
            })
            .expect("multiplicative group of a field is cyclic");

        let mut exp = vec![0u16; 2 * order as usize];
        let mut log = vec![0u16; q as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp[i as usize] = x as u16;
            exp[(i + order) as usize] = x as u16;
            log[x as usize] = i as u16;
            x = mul_reduce(x, generator, poly, m);
        }
        Tables {
            m,
            poly,
            generator: generator as u16,
            exp,
            log,
        }
    }
}

/// Handle to GF(2^m). Cheap to copy; all handles for one m share tables.
#[derive(Clone, Copy)]
pub struct Field {
    tables: &'static Tables,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.m() == other.m()
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{})", self.m())
    }
}

impl Field {
    pub fn new(m: u8) -> Result<Self> {
        if !(MIN_M..=MAX_M).contains(&m) {
            return Err(invalid(format!("field width m = {m} outside 1..=16")));
        }
        let tables = FIELDS[usize::from(m - 1)].get_or_init(|| Tables::build(m));
        Ok(Field { tables })
    }

    pub fn m(&self) -> u8 {
        self.tables.m
    }

    pub fn q(&self) -> u32 {
        1 << self.tables.m
    }

    pub fn reduction_poly(&self) -> u32 {
        self.tables.poly
    }

    /// The primitive element the log tables are built on.
    pub fn generator(&self) -> FieldElement {
        self.wrap(self.tables.generator)
    }

    pub fn elem(&self, value: u32) -> Result<FieldElement> {
        if value >= self.q() {
            return Err(Error::ElementOutOfRange { value, m: self.m() });
        }
        Ok(self.wrap(value as u16))
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(0)
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(1)
    }

    fn wrap(&self, value: u16) -> FieldElement {
        FieldElement { value, m: self.m() }
    }

    fn check(&self, a: FieldElement) -> Result<()> {
        if a.m != self.m() {
            return Err(Error::FieldMismatch {
                left: self.m(),
                right: a.m,
            });
        }
        Ok(())
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(a.value ^ b.value))
    }

    /// Additive inverse. The identity in characteristic 2.
    pub fn neg(&self, a: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        Ok(a)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.wrap(self.mul_raw(a.value, b.value)))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        self.check(a)?;
        if a.value == 0 {
            return Err(Error::ZeroInverse);
        }
        let order = self.q() as usize - 1;
        let log = self.tables.log[usize::from(a.value)] as usize;
        Ok(self.wrap(self.tables.exp[(order - log) % order]))
    }

    pub fn pow(&self, a: FieldElement, e: u64) -> Result<FieldElement> {
        self.check(a)?;
        Ok(self.wrap(self.pow_raw(a.value, e)))
    }

    /// Scalar product Σ a_j·b_j.
    pub fn dot(&self, a: &FieldVector, b: &FieldVector) -> Result<FieldElement> {
        self.check_vec(a)?;
        self.check_vec(b)?;
        if a.len() != b.len() {
            return Err(Error::LengthMismatch {
                expected: a.len(),
                actual: b.len(),
            });
        }
        Ok(self.wrap(self.dot_raw(&a.elems, &b.elems)))
    }

    pub(crate) fn check_vec(&self, v: &FieldVector) -> Result<()> {
        if v.m != self.m() {
            return Err(Error::FieldMismatch {
                left: self.m(),
                right: v.m,
            });
        }
        Ok(())
    }

    #[inline]
    pub fn mul_raw(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = self.tables;
        t.exp[usize::from(t.log[usize::from(a)]) + usize::from(t.log[usize::from(b)])]
    }

    pub fn pow_raw(&self, a: u16, e: u64) -> u16 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = u64::from(self.q() - 1);
        let log = u64::from(self.tables.log[usize::from(a)]);
        self.tables.exp[((log * (e % order)) % order) as usize]
    }

    /// Scalar product on raw values. Caller guarantees equal lengths.
    #[inline]
    pub fn dot_raw(&self, a: &[u16], b: &[u16]) -> u16 {
        debug_assert_eq!(a.len(), b.len());
        a.iter()
            .zip(b)
            .fold(0u16, |acc, (&x, &y)| acc ^ self.mul_raw(x, y))
    }

    /// Draws a uniform symbol: one 32-bit word per attempt, low m bits kept,
    /// values ≥ q rejected. For q = 2^m the rejection never fires, but the
    /// loop keeps the draw unbiased for any order.
    pub fn sample_raw<R: RngCore + ?Sized>(&self, rng: &mut R) -> u16 {
        let q = self.q();
        let mask = q.next_power_of_two() - 1;
        loop {
            let x = rng.next_u32() & mask;
            if x < q {
                return x as u16;
            }
        }
    }

    pub fn random_element<R: RngCore + ?Sized>(&self, rng: &mut R) -> FieldElement {
        self.wrap(self.sample_raw(rng))
    }

    pub fn vector(&self, elems: Vec<u16>) -> Result<FieldVector> {
        if let Some(&bad) = elems.iter().find(|&&v| u32::from(v) >= self.q()) {
            return Err(Error::ElementOutOfRange {
                value: u32::from(bad),
                m: self.m(),
            });
        }
        Ok(FieldVector { m: self.m(), elems })
    }

    pub fn zero_vector(&self, len: usize) -> FieldVector {
        FieldVector {
            m: self.m(),
            elems: vec![0; len],
        }
    }

    pub fn random_vector<R: RngCore + ?Sized>(&self, len: usize, rng: &mut R) -> FieldVector {
        FieldVector {
            m: self.m(),
            elems: (0..len).map(|_| self.sample_raw(rng)).collect(),
        }
    }

    pub(crate) fn vector_unchecked(&self, elems: Vec<u16>) -> FieldVector {
        debug_assert!(elems.iter().all(|&v| u32::from(v) < self.q()));
        FieldVector { m: self.m(), elems }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u16,
    m: u8,
}

impl FieldElement {
    pub fn value(&self) -> u16 {
        self.value
    }

    pub fn m(&self) -> u8 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.value)
    }
}

/// A vector over a single GF(2^m).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldVector {
    m: u8,
    elems: Vec<u16>,
}

impl FieldVector {
    pub fn field(&self) -> Field {
        Field::new(self.m).expect("vector built from a valid field")
    }

    pub fn m(&self) -> u8 {
        self.m
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.elems.iter().all(|&v| v == 0)
    }

    pub fn get(&self, i: usize) -> Option<FieldElement> {
        self.elems
            .get(i)
            .map(|&value| FieldElement { value, m: self.m })
    }

    pub fn as_slice(&self) -> &[u16] {
        &self.elems
    }

    pub fn iter(&self) -> impl Iterator<Item = FieldElement> + '_ {
        self.elems
            .iter()
            .map(|&value| FieldElement { value, m: self.m })
    }

    pub fn into_inner(self) -> Vec<u16> {
        self.elems
    }

    /// Coordinate-wise sum.
    pub fn add(&self, other: &FieldVector) -> Result<FieldVector> {
        if self.m != other.m {
            return Err(Error::FieldMismatch {
                left: self.m,
                right: other.m,
            });
        }
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(FieldVector {
            m: self.m,
            elems: self
                .elems
                .iter()
                .zip(&other.elems)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    /// Packs the symbols as contiguous m-bit big-endian strings, zero-padded
    /// to a byte boundary at the end only.
    pub fn pack(&self) -> Vec<u8> {
        let mut w = BitWriter::new();
        self.write_bits(&mut w);
        w.finish()
    }

    pub(crate) fn write_bits(&self, w: &mut BitWriter) {
        for &v in &self.elems {
            w.push(u64::from(v), u32::from(self.m));
        }
    }

    /// Inverse of [`FieldVector::pack`]. Requires exactly `ceil(len·m/8)`
    /// bytes with zero padding.
    pub fn unpack(field: Field, bytes: &[u8], len: usize) -> Result<FieldVector> {
        let bits = len * usize::from(field.m());
        let expected = bits.div_ceil(8);
        if bytes.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: bytes.len(),
            });
        }
        let mut r = BitReader::new(bytes);
        let elems = (0..len)
            .map(|_| r.read(u32::from(field.m())).expect("length checked") as u16)
            .collect();
        if !r.padding_is_zero() {
            return Err(invalid("nonzero padding bits after last symbol"));
        }
        Ok(field.vector_unchecked(elems))
    }
}
