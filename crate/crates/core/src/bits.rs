//! MSB-first bit packing used by the symbol and word encodings.

#[derive(Debug, Default, Clone)]
pub struct BitWriter {
    bytes: Vec<u8>,
    bit_len: usize,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push(&mut self, value: u64, width: u32) {
        debug_assert!(width <= 64);
        debug_assert!(width == 64 || value >> width == 0, "value wider than field");
        for shift in (0..width).rev() {
            let bit = ((value >> shift) & 1) as u8;
            let offset = self.bit_len % 8;
            if offset == 0 {
                self.bytes.push(0);
            }
            if bit == 1 {
                *self.bytes.last_mut().unwrap() |= 0x80 >> offset;
            }
            self.bit_len += 1;
        }
    }

    pub fn push_bytes(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.push(u64::from(b), 8);
        }
    }

    pub fn bit_len(&self) -> usize {
        self.bit_len
    }

    /// Returns the bytes; the final partial byte is zero-padded.
    pub fn finish(self) -> Vec<u8> {
        self.bytes
    }
}

#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> BitReader<'a> {
    pub fn new(bytes: &'a [u8]) -> Self {
        Self { bytes, pos: 0 }
    }

    pub fn remaining_bits(&self) -> usize {
        self.bytes.len() * 8 - self.pos
    }

    pub fn position(&self) -> usize {
        self.pos
    }

    /// Reads `width` bits, or `None` if fewer remain.
    pub fn read(&mut self, width: u32) -> Option<u64> {
        if (width as usize) > self.remaining_bits() {
            return None;
        }
        let mut value = 0u64;
        for _ in 0..width {
            let byte = self.bytes[self.pos / 8];
            let bit = (byte >> (7 - self.pos % 8)) & 1;
            value = (value << 1) | u64::from(bit);
            self.pos += 1;
        }
        Some(value)
    }

    /// True if every bit from the cursor to the end of the current byte is zero.
    pub fn padding_is_zero(&self) -> bool {
        let offset = self.pos % 8;
        if offset == 0 {
            return true;
        }
        let byte = self.bytes[self.pos / 8];
        byte & (0xFF >> offset) == 0
    }

    /// Number of whole bytes after the current (possibly partial) byte.
    pub fn trailing_bytes(&self) -> usize {
        self.bytes.len() - self.pos.div_ceil(8)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packs_msb_first_without_alignment() {
        let mut w = BitWriter::new();
        w.push(0b101, 3);
        w.push(0b11, 2);
        w.push(0b1111, 4);
        assert_eq!(w.bit_len(), 9);
        assert_eq!(w.finish(), vec![0b1011_1111, 0b1000_0000]);
    }

    #[test]
    fn reader_detects_padding_and_truncation() {
        let bytes = [0b1011_1111, 0b1000_0000];
        let mut r = BitReader::new(&bytes);
        assert_eq!(r.read(3), Some(0b101));
        assert_eq!(r.read(6), Some(0b11_1111));
        assert!(r.padding_is_zero());
        assert_eq!(r.trailing_bytes(), 0);
        assert_eq!(r.read(8), None);

        let dirty = [0b1011_1111, 0b1000_0001];
        let mut r = BitReader::new(&dirty);
        r.read(9).unwrap();
        assert!(!r.padding_is_zero());
    }
}
