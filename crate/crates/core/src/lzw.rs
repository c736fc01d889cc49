//! Deterministic LZW encoder used as the built-in compressor backend.
//!
//! Scheme parameters (normative for reproducibility):
//! - dictionary initialized with all 256 single-byte strings;
//! - codes emitted at the current width, starting at 9 bits;
//! - the width grows by one each time the dictionary size crosses a power
//!   of two (a code is emitted at the width in effect before the insertion
//!   that follows it);
//! - the dictionary is capped at 2^16 entries and frozen once full;
//! - codes are packed big-endian, most significant bit first, with the
//!   final partial byte zero-padded;
//! - encoded size = ceil(total emitted bits / 8).

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Starting code width in bits.
pub const INITIAL_CODE_WIDTH: u32 = 9;

/// Dictionary entry cap; insertion stops once reached.
pub const MAX_DICT_ENTRIES: usize = 1 << 16;

struct BitWriter {
    out: Vec<u8>,
    acc: u64,
    pending: u32,
}

impl BitWriter {
    fn new() -> Self {
        BitWriter {
            out: Vec::new(),
            acc: 0,
            pending: 0,
        }
    }

    fn write(&mut self, code: u32, width: u32) {
        debug_assert!(width <= 32 && u64::from(code) < (1u64 << width));
        self.acc = (self.acc << width) | u64::from(code);
        self.pending += width;
        while self.pending >= 8 {
            self.pending -= 8;
            self.out.push((self.acc >> self.pending) as u8);
        }
    }

    fn finish(mut self) -> Vec<u8> {
        if self.pending > 0 {
            self.out.push((self.acc << (8 - self.pending)) as u8);
        }
        self.out
    }
}

/// Encodes `data` and returns the packed code stream.
pub fn lzw_encode(data: &[u8]) -> Result<Vec<u8>> {
    if data.is_empty() {
        return Err(Error::InvalidArgument("cannot compress empty data".into()));
    }

    // Phrases are (previous code, extension byte) pairs; the 256 single
    // bytes are implicit codes 0..=255.
    let mut dict: HashMap<(u32, u8), u32> = HashMap::new();
    let mut next_code: u32 = 256;
    let mut width = INITIAL_CODE_WIDTH;
    let mut writer = BitWriter::new();

    let mut current = u32::from(data[0]);
    for &b in &data[1..] {
        match dict.get(&(current, b)) {
            Some(&code) => current = code,
            None => {
                writer.write(current, width);
                if (next_code as usize) < MAX_DICT_ENTRIES {
                    dict.insert((current, b), next_code);
                    next_code += 1;
                    while next_code as usize > (1usize << width) {
                        width += 1;
                    }
                }
                current = u32::from(b);
            }
        }
    }
    writer.write(current, width);
    Ok(writer.finish())
}

/// Encoded size in bytes: `ceil(total emitted bits / 8)`.
pub fn lzw_encode_size(data: &[u8]) -> Result<usize> {
    Ok(lzw_encode(data)?.len())
}
