//! Suffix array over a group text, answering substring occurrence-count and
//! probability queries.
//!
//! The probability estimator is `(frequency - 1) / (L - |t| + 1)`: one is
//! subtracted from the raw occurrence count, so a substring seen only once
//! estimates to zero, and the denominator is the number of windows of the
//! pattern's length in the indexed text.

use std::cmp::Ordering;
use std::io::{Read, Write};

use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"SQIX";
const FORMAT_VERSION: u8 = 1;

/// An immutable suffix array bound to the text it indexes.
#[derive(Debug, Clone)]
pub struct SuffixIndex {
    text: Vec<u8>,
    sa: Vec<usize>,
}

/// Occurrence counts for successive prefixes of a query starting at one
/// position: `(m, f)` pairs where `f >= 2` is the count of the length-`m`
/// prefix, stopping before the first length whose count drops below 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchRun {
    pub start: usize,
    pub lengths_counts: Vec<(usize, usize)>,
}

impl SuffixIndex {
    /// Builds the index. Construction is deterministic (prefix-doubling,
    /// `O(L log^2 L)`).
    pub fn build(text: impl Into<Vec<u8>>) -> Result<Self> {
        let text = text.into();
        if text.is_empty() {
            return Err(Error::InvalidArgument(
                "cannot index an empty text".into(),
            ));
        }
        let sa = build_suffix_array(&text);
        Ok(SuffixIndex { text, sa })
    }

    pub fn text(&self) -> &[u8] {
        &self.text
    }

    /// Length of the indexed text.
    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty texts
    }

    pub fn suffix_array(&self) -> &[usize] {
        &self.sa
    }

    /// Exact number of (possibly overlapping) occurrences of `pattern`,
    /// via binary search for the pattern's suffix-array range.
    pub fn count_occurrences(&self, pattern: &[u8]) -> Result<usize> {
        if pattern.is_empty() {
            return Err(Error::InvalidArgument("empty pattern".into()));
        }
        let (lo, hi) = self.pattern_range(pattern);
        Ok(hi - lo)
    }

    fn pattern_range(&self, pattern: &[u8]) -> (usize, usize) {
        let n = self.text.len();
        let prefix_cmp = |s: usize| -> Ordering {
            let end = (s + pattern.len()).min(n);
            self.text[s..end].cmp(pattern)
        };
        let lo = self.sa.partition_point(|&s| prefix_cmp(s) == Ordering::Less);
        let hi = self.sa.partition_point(|&s| prefix_cmp(s) != Ordering::Greater);
        (lo, hi)
    }

    /// Estimated probability of `pattern`: `(count - 1) / (L - |t| + 1)`,
    /// or 0 when the pattern occurs at most once (including patterns longer
    /// than the text).
    pub fn substring_probability(&self, pattern: &[u8]) -> Result<f64> {
        let count = self.count_occurrences(pattern)?;
        Ok(self.probability_from_count(count, pattern.len()))
    }

    /// The estimator applied to an already-known count. Kept as the single
    /// source of the formula so every caller computes identical values.
    pub fn probability_from_count(&self, count: usize, pattern_len: usize) -> f64 {
        if count <= 1 {
            return 0.0;
        }
        debug_assert!(pattern_len <= self.text.len());
        let windows = self.text.len() - pattern_len + 1;
        (count - 1) as f64 / windows as f64
    }

    /// Counts successive prefixes of `query[start..]`, narrowing one
    /// suffix-array range per added character, and stops before the first
    /// prefix whose count drops below 2. Equivalent to repeated
    /// [`count_occurrences`](Self::count_occurrences) calls with that
    /// stopping rule.
    pub fn match_extend(&self, query: &[u8], start: usize) -> Result<MatchRun> {
        if start >= query.len() {
            return Err(Error::InvalidArgument(format!(
                "start {start} out of range for query of length {}",
                query.len()
            )));
        }
        let n = self.text.len();
        let mut lo = 0usize;
        let mut hi = n;
        let mut lengths_counts = Vec::new();
        for (depth, &c) in query[start..].iter().enumerate() {
            // Within [lo, hi) all suffixes share the first `depth` query
            // characters, so they are ordered by the character at offset
            // `depth`, with the (unique) suffix of exactly that length first.
            let seg = &self.sa[lo..hi];
            let new_lo = lo + seg.partition_point(|&s| s + depth >= n || self.text[s + depth] < c);
            let new_hi = lo + seg.partition_point(|&s| s + depth >= n || self.text[s + depth] <= c);
            if new_hi - new_lo < 2 {
                break;
            }
            lengths_counts.push((depth + 1, new_hi - new_lo));
            lo = new_lo;
            hi = new_hi;
        }
        Ok(MatchRun {
            start,
            lengths_counts,
        })
    }

    /// Writes the persisted form: magic `SQIX`, version byte, text length
    /// as 8-byte little-endian, text bytes, then each suffix-array entry as
    /// 8-byte little-endian.
    pub fn write_to(&self, w: &mut impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&[FORMAT_VERSION])?;
        w.write_all(&(self.text.len() as u64).to_le_bytes())?;
        w.write_all(&self.text)?;
        for &s in &self.sa {
            w.write_all(&(s as u64).to_le_bytes())?;
        }
        Ok(())
    }

    /// Reads the persisted form, validating the magic, version, and that
    /// the stored array is a permutation of `0..L`.
    pub fn read_from(r: &mut impl Read) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::CorruptIndex("bad magic".into()));
        }
        let mut version = [0u8; 1];
        r.read_exact(&mut version)?;
        if version[0] != FORMAT_VERSION {
            return Err(Error::CorruptIndex(format!(
                "unsupported version {}",
                version[0]
            )));
        }
        let mut len_bytes = [0u8; 8];
        r.read_exact(&mut len_bytes)?;
        let len = u64::from_le_bytes(len_bytes) as usize;
        if len == 0 {
            return Err(Error::CorruptIndex("zero-length text".into()));
        }
        let mut text = vec![0u8; len];
        r.read_exact(&mut text)?;
        let mut sa = Vec::with_capacity(len);
        let mut entry = [0u8; 8];
        for _ in 0..len {
            r.read_exact(&mut entry)?;
            let s = u64::from_le_bytes(entry) as usize;
            if s >= len {
                return Err(Error::CorruptIndex(format!(
                    "suffix position {s} out of range for length {len}"
                )));
            }
            sa.push(s);
        }
        let mut seen = vec![false; len];
        for &s in &sa {
            if seen[s] {
                return Err(Error::CorruptIndex(format!(
                    "suffix position {s} appears twice"
                )));
            }
            seen[s] = true;
        }
        Ok(SuffixIndex { text, sa })
    }
}

/// Prefix-doubling suffix array construction.
fn build_suffix_array(text: &[u8]) -> Vec<usize> {
    let n = text.len();
    let mut sa: Vec<usize> = (0..n).collect();
    let mut rank: Vec<i64> = text.iter().map(|&b| i64::from(b)).collect();
    let mut next_rank: Vec<i64> = vec![0; n];
    let mut k = 1usize;
    loop {
        let key = |i: usize| -> (i64, i64) {
            let second = if i + k < n { rank[i + k] } else { -1 };
            (rank[i], second)
        };
        sa.sort_unstable_by_key(|&i| key(i));
        next_rank[sa[0]] = 0;
        for w in 1..n {
            let bump = i64::from(key(sa[w - 1]) < key(sa[w]));
            next_rank[sa[w]] = next_rank[sa[w - 1]] + bump;
        }
        std::mem::swap(&mut rank, &mut next_rank);
        if rank[sa[n - 1]] == (n - 1) as i64 {
            break;
        }
        k <<= 1;
    }
    sa
}
