//! Information quantity of a query string against a group index.
//!
//! A string's information quantity is the minimum, over every way of
//! cutting it into consecutive pieces, of the summed self-information of
//! the pieces, with piece probabilities estimated from the group text.
//! There are `2^(N-1)` partitions of an `N`-character string; the minimum
//! is found by an `O(N^2)` dynamic program. Pieces seen at most once in the
//! group estimate to probability zero and cost infinite bits, so extending
//! a piece past its last repeated prefix is never useful — `match_extend`
//! gives the DP that early exit.

use crate::error::{Error, Result};
use crate::suffix::SuffixIndex;

/// Maximum query length accepted by [`brute_force_info`].
pub const BRUTE_FORCE_MAX_LEN: usize = 20;

/// A non-negative quantity of bits; `INFINITE` marks impossible events.
/// Addition saturates at infinity and `min(INFINITE, x) = x`, mirroring
/// IEEE arithmetic on the wrapped value.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Bits(f64);

impl Bits {
    pub const ZERO: Bits = Bits(0.0);
    pub const INFINITE: Bits = Bits(f64::INFINITY);

    fn new(value: f64) -> Bits {
        debug_assert!(value >= 0.0, "bits must be non-negative, got {value}");
        Bits(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl std::ops::Add for Bits {
    type Output = Bits;
    fn add(self, rhs: Bits) -> Bits {
        Bits(self.0 + rhs.0)
    }
}

impl std::ops::AddAssign for Bits {
    fn add_assign(&mut self, rhs: Bits) {
        self.0 += rhs.0;
    }
}

impl std::iter::Sum for Bits {
    fn sum<I: Iterator<Item = Bits>>(iter: I) -> Bits {
        iter.fold(Bits::ZERO, |acc, b| acc + b)
    }
}

impl std::fmt::Display for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Self-information of an event with probability `p`: `-log2(p)`, or
/// `INFINITE` for `p = 0`.
pub fn char_information(p: f64) -> Result<Bits> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "probability {p} outside [0, 1]"
        )));
    }
    if p == 0.0 {
        return Ok(Bits::INFINITE);
    }
    Ok(Bits::new(-p.log2()))
}

/// Character-sum information: each query character scored independently by
/// its single-character probability in the group text.
pub fn info_characters(query: &[u8], index: &SuffixIndex) -> Result<Bits> {
    if query.is_empty() {
        return Err(Error::InvalidArgument("empty query".into()));
    }
    let mut cache: [Option<Bits>; 256] = [None; 256];
    let mut total = Bits::ZERO;
    for &c in query {
        let bits = match cache[c as usize] {
            Some(b) => b,
            None => {
                let p = index.substring_probability(&[c])?;
                let b = char_information(p)?;
                cache[c as usize] = Some(b);
                b
            }
        };
        total += bits;
    }
    Ok(total)
}

/// The minimizing segmentation and its cost.
#[derive(Debug, Clone)]
pub struct InfoResult {
    /// Minimal information quantity over all partitions.
    pub total: Bits,
    /// One minimizing partition; pieces concatenate to the query.
    pub partition: Vec<String>,
    /// The same pieces with their individual costs.
    pub per_piece: Vec<(String, Bits)>,
}

impl InfoResult {
    /// Structured-text report: the total on the first line (6 decimal
    /// places), then one `<substring> <bits>` line per piece.
    pub fn render_report(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "{:.6}", self.total.value());
        for (piece, bits) in &self.per_piece {
            let _ = writeln!(out, "{piece} {:.6}", bits.value());
        }
        out
    }
}

/// Minimal-partition information quantity via dynamic programming.
///
/// `best[j]` is the cheapest cost of any partition of `query[..j]`,
/// relaxed forward from every start position using the countable prefixes
/// reported by `match_extend`. The single-character step is always taken
/// (at infinite cost when the character is unrepeated) so a partition trace
/// exists even for infinite totals. Ties prefer the longest trailing piece.
pub fn info_min_partition(query: &[u8], index: &SuffixIndex) -> Result<InfoResult> {
    if query.is_empty() {
        return Err(Error::InvalidArgument("empty query".into()));
    }
    let n = query.len();
    const UNSET: usize = usize::MAX;
    let mut best = vec![f64::INFINITY; n + 1];
    let mut pred = vec![UNSET; n + 1];
    best[0] = 0.0;

    for i in 0..n {
        let base = best[i];
        let run = index.match_extend(query, i)?;
        if run.lengths_counts.is_empty() {
            // The character at i occurs at most once in the group text.
            relax(&mut best, &mut pred, i + 1, f64::INFINITY, i);
        }
        for &(len, count) in &run.lengths_counts {
            let p = index.probability_from_count(count, len);
            relax(&mut best, &mut pred, i + len, base + -p.log2(), i);
        }
    }

    // Reconstruct one minimizing partition and re-score it piece by piece;
    // the left-to-right accumulation reproduces best[n] exactly.
    let mut cuts = Vec::new();
    let mut j = n;
    while j > 0 {
        let i = pred[j];
        debug_assert_ne!(i, UNSET);
        cuts.push((i, j));
        j = i;
    }
    cuts.reverse();

    let mut total = Bits::ZERO;
    let mut partition = Vec::with_capacity(cuts.len());
    let mut per_piece = Vec::with_capacity(cuts.len());
    for (i, j) in cuts {
        let piece = &query[i..j];
        let bits = char_information(index.substring_probability(piece)?)?;
        total += bits;
        let piece = String::from_utf8_lossy(piece).into_owned();
        partition.push(piece.clone());
        per_piece.push((piece, bits));
    }
    debug_assert!(
        (total.value() - best[n]).abs() <= 1e-9 * best[n].abs().max(1.0)
            || (total.is_infinite() && best[n].is_infinite())
    );

    Ok(InfoResult {
        total,
        partition,
        per_piece,
    })
}

fn relax(best: &mut [f64], pred: &mut [usize], j: usize, value: f64, from: usize) {
    // First touch always records a predecessor so a trace exists even when
    // every route is infinite; afterwards only strict improvements move it,
    // which keeps the earliest (longest-piece) start on ties.
    if pred[j] == usize::MAX || value < best[j] {
        best[j] = value.min(best[j]);
        pred[j] = from;
    }
}

/// Reference implementation of the minimal-partition definition: explicit
/// enumeration of all `2^(N-1)` partitions. Exponential; intended for
/// validating [`info_min_partition`] on short queries.
pub fn brute_force_info(query: &[u8], index: &SuffixIndex) -> Result<Bits> {
    if query.is_empty() {
        return Err(Error::InvalidArgument("empty query".into()));
    }
    let n = query.len();
    if n > BRUTE_FORCE_MAX_LEN {
        return Err(Error::InvalidArgument(format!(
            "brute force caps query length at {BRUTE_FORCE_MAX_LEN}, got {n}"
        )));
    }

    // Piece costs for every (i, j), so each mask is a table walk.
    let mut piece_cost = vec![vec![0.0f64; n + 1]; n];
    for i in 0..n {
        for j in i + 1..=n {
            let p = index.substring_probability(&query[i..j])?;
            piece_cost[i][j] = char_information(p)?.value();
        }
    }

    let mut min_total = f64::INFINITY;
    for mask in 0u64..(1u64 << (n - 1)) {
        let mut total = 0.0;
        let mut start = 0usize;
        for cut in 0..n - 1 {
            if mask & (1 << cut) != 0 {
                total += piece_cost[start][cut + 1];
                start = cut + 1;
            }
        }
        total += piece_cost[start][n];
        if total < min_total {
            min_total = total;
        }
    }
    Ok(if min_total.is_finite() {
        Bits::new(min_total)
    } else {
        Bits::INFINITE
    })
}
