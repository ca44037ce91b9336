//! Lazily indexed sets of M-bit strings.

use std::io::Write;

use crate::error::{Error, Result};
use crate::oracle::Distinguisher;

/// A deterministic, exactly counted sequence of `bits()`-bit strings.
pub trait HittingSet {
    /// String length M (at most 64).
    fn bits(&self) -> usize;
    fn count(&self) -> u64;
    /// Entry `idx`, for `idx < count()`.
    fn get(&self, idx: u64) -> u64;

    /// All entries, refusing if they would take more than `cap_bytes`.
    fn materialize(&self, cap_bytes: u64) -> Result<Vec<u64>> {
        let need = self.count().saturating_mul(8);
        if need > cap_bytes {
            return Err(Error::Resource(format!("hitting set needs {need} bytes, cap is {cap_bytes}")));
        }
        Ok((0..self.count()).map(|i| self.get(i)).collect())
    }

    /// Writes one hex string per line.
    fn write_hex(&self, out: &mut dyn Write) -> std::io::Result<()> {
        for i in 0..self.count() {
            writeln!(out, "{}", hex_string(self.get(i), self.bits()))?;
        }
        Ok(())
    }

    /// First index whose string `d` accepts.
    fn first_accepted(&self, d: &dyn Distinguisher) -> Option<u64> {
        (0..self.count()).find(|&i| d.accepts(self.get(i)))
    }
}

/// Hex rendering of an M-bit string, `ceil(M/4)` digits, most significant
/// digit first (the digit holding position 1 is last).
pub fn hex_string(w: u64, bits: usize) -> String {
    let width = bits.div_ceil(4).max(1);
    format!("{w:0width$x}")
}

pub fn parse_hex(s: &str) -> Result<u64> {
    u64::from_str_radix(s.trim(), 16).map_err(|_| Error::Parse(format!("bad hex string {s:?}")))
}

/// Concatenation of several hitting sets of the same length.
pub struct Union<'a> {
    parts: Vec<Box<dyn HittingSet + 'a>>,
    offsets: Vec<u64>,
    bits: usize,
}

impl<'a> Union<'a> {
    pub fn new(bits: usize, parts: Vec<Box<dyn HittingSet + 'a>>) -> Self {
        let mut offsets = Vec::with_capacity(parts.len() + 1);
        let mut acc = 0u64;
        offsets.push(0);
        for p in &parts {
            debug_assert_eq!(p.bits(), bits);
            acc += p.count();
            offsets.push(acc);
        }
        Union { parts, offsets, bits }
    }

    pub fn parts(&self) -> &[Box<dyn HittingSet + 'a>] {
        &self.parts
    }
}

impl HittingSet for Union<'_> {
    fn bits(&self) -> usize {
        self.bits
    }

    fn count(&self) -> u64 {
        *self.offsets.last().unwrap()
    }

    fn get(&self, idx: u64) -> u64 {
        let k = self.offsets.partition_point(|&o| o <= idx) - 1;
        self.parts[k].get(idx - self.offsets[k])
    }
}

/// An explicit list.
#[derive(Clone, Debug)]
pub struct Explicit {
    pub bits: usize,
    pub strings: Vec<u64>,
}

impl HittingSet for Explicit {
    fn bits(&self) -> usize {
        self.bits
    }

    fn count(&self) -> u64 {
        self.strings.len() as u64
    }

    fn get(&self, idx: u64) -> u64 {
        self.strings[idx as usize]
    }
}
