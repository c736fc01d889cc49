//! Scaling benchmark: per-query cost of both classifiers as the group size
//! grows.
//!
//! The information-quantity method pays a one-time pre-processing cost per
//! group (building the index over the concatenated scores), after which a
//! query costs `O(c * l^2)` regardless of how many scores are in a group.
//! The CDM baseline compresses the query against every known score, so its
//! per-query cost is proportional to `g * c`.

use std::time::Instant;

use crate::cdm::CompressorBackend;
use crate::error::{Error, Result};
use crate::eval::{build_group, classify_cdm, classify_infoq, ComposerGroup, LabeledScore};
use crate::synth::{generate_corpus, generate_queries, SynthConfig};

/// One measurement point: corpus shape for a single benchmark row.
#[derive(Debug, Clone, Copy)]
pub struct BenchConfig {
    /// Average encoded-string length.
    pub avg_len: usize,
    /// Number of composers (classes).
    pub classes: usize,
    /// Scores per group.
    pub group_size: usize,
    /// Number of query scores.
    pub queries: usize,
}

/// Full benchmark request: one row per group size.
#[derive(Debug, Clone)]
pub struct BenchParams {
    pub avg_len: usize,
    pub classes: usize,
    pub group_sizes: Vec<usize>,
    pub queries: usize,
    pub seed: u64,
    pub knn_k: usize,
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub config: BenchConfig,
    /// Wall time to build all group indexes, once.
    pub prep_secs: f64,
    /// How many group indexes were built during this row (the
    /// instrumentation counter; exactly one per class regardless of the
    /// number of queries).
    pub index_builds: usize,
    pub infoq_per_query_secs: f64,
    pub cdm_per_query_secs: f64,
    /// FNV-1a hash of the generated corpus, for checking seeded
    /// reproducibility independently of timings.
    pub corpus_fingerprint: u64,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub seed: u64,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    /// Plain-text table, one row per group size.
    pub fn render(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "seed {}", self.seed);
        let _ = writeln!(
            out,
            "{:>6} {:>8} {:>8} {:>12} {:>16} {:>16} {:>18}",
            "g", "classes", "len", "prep_s", "infoq_query_s", "cdm_query_s", "corpus_fnv1a"
        );
        for row in &self.rows {
            let _ = writeln!(
                out,
                "{:>6} {:>8} {:>8} {:>12.4} {:>16.6} {:>16.6} {:>18x}",
                row.config.group_size,
                row.config.classes,
                row.config.avg_len,
                row.prep_secs,
                row.infoq_per_query_secs,
                row.cdm_per_query_secs,
                row.corpus_fingerprint,
            );
        }
        out
    }
}

fn fnv1a(corpus: &[LabeledScore]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            hash ^= u64::from(b);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    for score in corpus {
        eat(score.id.as_bytes());
        eat(score.encoded.as_bytes());
    }
    hash
}

/// Runs both classifiers over seeded synthetic corpora, one row per group
/// size, and reports mean per-query wall time.
pub fn bench_scaling(params: &BenchParams) -> Result<BenchReport> {
    if params.avg_len == 0
        || params.classes == 0
        || params.queries == 0
        || params.group_sizes.is_empty()
        || params.group_sizes.iter().any(|&g| g == 0)
    {
        return Err(Error::InvalidArgument(
            "benchmark parameters must all be positive".into(),
        ));
    }

    let backend = CompressorBackend::lzw();
    let mut rows = Vec::with_capacity(params.group_sizes.len());
    for &group_size in &params.group_sizes {
        let config = BenchConfig {
            avg_len: params.avg_len,
            classes: params.classes,
            group_size,
            queries: params.queries,
        };
        let synth = SynthConfig {
            classes: params.classes,
            scores_per_class: group_size,
            score_len: params.avg_len,
            seed: params.seed,
        };
        let corpus = generate_corpus(&synth);
        let queries = generate_queries(&synth, params.queries);
        let corpus_fingerprint = fnv1a(&corpus);

        // Pre-processing: exactly one index build per group.
        let mut index_builds = 0usize;
        let prep_start = Instant::now();
        let mut groups: Vec<ComposerGroup> = Vec::with_capacity(params.classes);
        let mut grouped: std::collections::BTreeMap<&str, Vec<(String, crate::score::EncodedString)>> =
            std::collections::BTreeMap::new();
        for score in &corpus {
            grouped
                .entry(score.label.as_str())
                .or_default()
                .push((score.id.clone(), score.encoded.clone()));
        }
        for (label, scores) in grouped {
            groups.push(build_group(label, scores)?);
            index_builds += 1;
        }
        let prep_secs = prep_start.elapsed().as_secs_f64();

        // Warm one query per method, then time the batch.
        classify_infoq("warmup", &queries[0].encoded, &groups)?;
        let start = Instant::now();
        for q in &queries {
            classify_infoq(&q.id, &q.encoded, &groups)?;
        }
        let infoq_per_query_secs = start.elapsed().as_secs_f64() / params.queries as f64;

        classify_cdm("warmup", &queries[0].encoded, &corpus, &backend, params.knn_k)?;
        let start = Instant::now();
        for q in &queries {
            classify_cdm(&q.id, &q.encoded, &corpus, &backend, params.knn_k)?;
        }
        let cdm_per_query_secs = start.elapsed().as_secs_f64() / params.queries as f64;

        rows.push(BenchRow {
            config,
            prep_secs,
            index_builds,
            infoq_per_query_secs,
            cdm_per_query_secs,
            corpus_fingerprint,
        });
    }
    Ok(BenchReport {
        seed: params.seed,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_parameters() {
        let base = BenchParams {
            avg_len: 100,
            classes: 2,
            group_sizes: vec![2],
            queries: 1,
            seed: 0,
            knn_k: 1,
        };
        assert!(bench_scaling(&BenchParams { queries: 0, ..base.clone() }).is_err());
        assert!(bench_scaling(&BenchParams { group_sizes: vec![], ..base.clone() }).is_err());
        assert!(bench_scaling(&BenchParams { group_sizes: vec![0], ..base.clone() }).is_err());
        assert!(bench_scaling(&BenchParams { avg_len: 0, ..base }).is_err());
    }

    #[test]
    fn builds_each_group_exactly_once_per_row() {
        let params = BenchParams {
            avg_len: 120,
            classes: 3,
            group_sizes: vec![2, 4],
            queries: 3,
            seed: 7,
            knn_k: 1,
        };
        let report = bench_scaling(&params).unwrap();
        assert_eq!(report.rows.len(), 2);
        for row in &report.rows {
            assert_eq!(row.index_builds, 3);
        }
    }

    #[test]
    fn fingerprint_tracks_the_seed() {
        let params = BenchParams {
            avg_len: 80,
            classes: 2,
            group_sizes: vec![2],
            queries: 1,
            seed: 1,
            knn_k: 1,
        };
        let a = bench_scaling(&params).unwrap();
        let b = bench_scaling(&params).unwrap();
        assert_eq!(a.rows[0].corpus_fingerprint, b.rows[0].corpus_fingerprint);
        let c = bench_scaling(&BenchParams { seed: 2, ..params }).unwrap();
        assert_ne!(a.rows[0].corpus_fingerprint, c.rows[0].corpus_fingerprint);
    }
}
