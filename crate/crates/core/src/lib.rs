//! Composer classification for symbolic musical scores.
//!
//! Scores are serialized into binary piano-roll strings; each composer's
//! scores concatenate into one suffix-array-indexed group text. A query
//! score is attributed to the composer whose group gives it the least
//! information quantity — the minimum over all segmentations of the summed
//! self-information of the segments, with segment probabilities estimated
//! from substring frequencies in the group. A compression-dissimilarity
//! (CDM) k-nearest-neighbor baseline, a leave-one-out evaluation harness,
//! McNemar significance testing, and a scaling benchmark round out the
//! toolkit.

pub mod bench;
pub mod cdm;
pub mod error;
pub mod eval;
pub mod infoq;
pub mod lzw;
pub mod manifest;
pub mod report;
pub mod score;
pub mod stats;
pub mod suffix;
pub mod synth;

pub use bench::{bench_scaling, BenchConfig, BenchParams, BenchReport};
pub use cdm::{cdm, BackendKind, CdmValue, CompressorBackend};
pub use error::{Error, Result};
pub use eval::{accuracy_table, build_group, classify_cdm, classify_infoq, leave_one_out};
pub use eval::{AccuracyTable, ClassificationOutcome, ComposerGroup, EvalMethod, LabeledScore, LooRecord};
pub use infoq::{brute_force_info, char_information, info_characters, info_min_partition};
pub use infoq::{Bits, InfoResult};
pub use manifest::{load_corpus, parse_manifest, ManifestEntry};
pub use report::{render_comparison, render_method_report, ReportOptions};
pub use score::{concat_group, encode_score, load_encoded, parse_score_file};
pub use score::{EncodedString, NoteEvent, Score};
pub use stats::{build_contingency, mcnemar, ContingencyTable, McNemarResult};
pub use suffix::{MatchRun, SuffixIndex};
pub use synth::{generate_corpus, generate_queries, SynthConfig};
