//! Seeded synthetic corpora for evaluation and benchmarking.
//!
//! Each class is an order-2 Markov source over {'0','1'}: the next bit is
//! drawn with a probability that depends on the previous two bits. The
//! first five classes use fixed, well-separated transition tables; further
//! classes get seeded random tables. Everything is a pure function of the
//! seed, so runs are reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eval::LabeledScore;
use crate::score::EncodedString;

/// Shape of a generated corpus.
#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub classes: usize,
    pub scores_per_class: usize,
    pub score_len: usize,
    pub seed: u64,
}

/// P(next bit = 1) indexed by the previous two bits `(older << 1) | last`.
/// Each of the five fixed sources follows its own deterministic motif with
/// 6% noise: "01", "0011", "011", "001", and near-constant zeros. No
/// class's typical substrings nest inside another's, which keeps the
/// classes separable by their repeated patterns.
const BASE_TABLES: [[f64; 4]; 5] = [
    [0.94, 0.06, 0.94, 0.06],
    [0.94, 0.94, 0.06, 0.06],
    [0.94, 0.94, 0.94, 0.06],
    [0.94, 0.06, 0.06, 0.06],
    [0.04, 0.04, 0.04, 0.04],
];

fn transition_table(class_idx: usize, seed: u64) -> [f64; 4] {
    if class_idx < BASE_TABLES.len() {
        return BASE_TABLES[class_idx];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(
        seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(class_idx as u64),
    );
    std::array::from_fn(|_| rng.gen_range(0.05..0.95))
}

fn score_rng(seed: u64, class_idx: usize, score_idx: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(
        seed.wrapping_add((class_idx as u64 + 1) << 32)
            .wrapping_add(score_idx as u64 + 1),
    )
}

/// Samples one binary string from a class's Markov source.
fn markov_string(table: &[f64; 4], len: usize, rng: &mut ChaCha8Rng) -> EncodedString {
    let mut bits = Vec::with_capacity(len);
    for i in 0..len {
        let bit = if i < 2 {
            rng.gen_bool(0.5)
        } else {
            let ctx = (usize::from(bits[i - 2]) << 1) | usize::from(bits[i - 1]);
            rng.gen_bool(table[ctx])
        };
        bits.push(bit);
    }
    let s: String = bits.into_iter().map(|b| if b { '1' } else { '0' }).collect();
    EncodedString::new(s).expect("generator emits only '0'/'1'")
}

pub fn class_label(class_idx: usize) -> String {
    if class_idx < 26 {
        format!("synth{}", (b'A' + class_idx as u8) as char)
    } else {
        format!("synth{class_idx}")
    }
}

/// Generates `classes * scores_per_class` labeled scores.
pub fn generate_corpus(cfg: &SynthConfig) -> Vec<LabeledScore> {
    let mut corpus = Vec::with_capacity(cfg.classes * cfg.scores_per_class);
    for ci in 0..cfg.classes {
        let label = class_label(ci);
        let table = transition_table(ci, cfg.seed);
        for si in 0..cfg.scores_per_class {
            let mut rng = score_rng(cfg.seed, ci, si);
            corpus.push(LabeledScore {
                id: format!("{label}-{si:02}"),
                label: label.clone(),
                encoded: markov_string(&table, cfg.score_len, &mut rng),
            });
        }
    }
    corpus
}

/// Generates `count` additional query scores from the same sources, cycling
/// through the classes. Their streams never overlap the corpus scores'.
pub fn generate_queries(cfg: &SynthConfig, count: usize) -> Vec<LabeledScore> {
    let mut queries = Vec::with_capacity(count);
    for qi in 0..count {
        let ci = qi % cfg.classes;
        let label = class_label(ci);
        let table = transition_table(ci, cfg.seed);
        let mut rng = score_rng(cfg.seed, ci, cfg.scores_per_class + qi / cfg.classes);
        queries.push(LabeledScore {
            id: format!("query-{qi:02}"),
            label,
            encoded: markov_string(&table, cfg.score_len, &mut rng),
        });
    }
    queries
}
