//! Grouping, classification, and the leave-one-out evaluation harness.
//!
//! Classification is by least information quantity against per-composer
//! group indexes, or by k-nearest neighbors over pairwise CDM as the
//! baseline. Evaluation holds each score out of the reference data before
//! classifying it: for the information-quantity method the held-out
//! score's own group is rebuilt without it, for CDM the score is simply
//! dropped from the known list.

use std::collections::BTreeMap;

use crate::cdm::{cdm, CompressorBackend};
use crate::error::{Error, Result};
use crate::infoq::info_min_partition;
use crate::score::{concat_group, EncodedString};
use crate::suffix::SuffixIndex;

/// One reference score with its class label.
#[derive(Debug, Clone)]
pub struct LabeledScore {
    pub id: String,
    pub label: String,
    pub encoded: EncodedString,
}

/// All of one composer's scores, concatenated (separator-joined) and
/// indexed for substring queries.
#[derive(Debug, Clone)]
pub struct ComposerGroup {
    pub label: String,
    pub scores: Vec<(String, EncodedString)>,
    pub index: SuffixIndex,
}

impl ComposerGroup {
    /// Length of the group text the index covers.
    pub fn text_len(&self) -> usize {
        self.index.len()
    }
}

/// Builds the group text and its suffix index for one composer.
pub fn build_group(
    label: impl Into<String>,
    scores: Vec<(String, EncodedString)>,
) -> Result<ComposerGroup> {
    if scores.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot build a group from zero scores".into(),
        ));
    }
    let strings: Vec<EncodedString> = scores.iter().map(|(_, e)| e.clone()).collect();
    let text = concat_group(&strings)?;
    let index = SuffixIndex::build(text.into_bytes())?;
    Ok(ComposerGroup {
        label: label.into(),
        scores,
        index,
    })
}

/// The per-class scores for one query and the decision taken.
/// Scores are information quantities in bits for the proposed method and
/// per-class minimum CDM values for the baseline; smaller is better for
/// both.
#[derive(Debug, Clone)]
pub struct ClassificationOutcome {
    pub query_id: String,
    pub per_class: Vec<(String, f64)>,
    pub predicted: String,
    pub tie: bool,
}

/// Argmin with the documented tie rule: if several classes attain the
/// minimum, the tie flag is set and the lexicographically least label wins.
pub fn argmin_label(per_class: &[(String, f64)]) -> Option<(String, bool)> {
    let min = per_class
        .iter()
        .map(|(_, v)| *v)
        .min_by(f64::total_cmp)?;
    let mut candidates: Vec<&str> = per_class
        .iter()
        .filter(|(_, v)| *v == min)
        .map(|(l, _)| l.as_str())
        .collect();
    candidates.sort_unstable();
    Some((candidates[0].to_string(), candidates.len() > 1))
}

/// Classifies by least information quantity across the group indexes.
pub fn classify_infoq(
    query_id: impl Into<String>,
    query: &EncodedString,
    groups: &[ComposerGroup],
) -> Result<ClassificationOutcome> {
    if groups.is_empty() {
        return Err(Error::InvalidArgument("no groups to classify against".into()));
    }
    if query.is_empty() {
        return Err(Error::InvalidArgument("empty query".into()));
    }
    let mut per_class = Vec::with_capacity(groups.len());
    for group in groups {
        let info = info_min_partition(query.as_bytes(), &group.index)?;
        per_class.push((group.label.clone(), info.total.value()));
    }
    let (predicted, tie) = argmin_label(&per_class).expect("at least one group");
    Ok(ClassificationOutcome {
        query_id: query_id.into(),
        per_class,
        predicted,
        tie,
    })
}

/// Classifies by k-nearest neighbors under CDM distances to every known
/// score.
///
/// With `k = 1` this is the argmin over per-score distances, with ties
/// across labels flagged and broken lexicographically. For `k > 1` the k
/// nearest (by distance, then label for determinism) vote by majority;
/// vote ties set the flag and are broken by smaller mean CDM within the
/// tied labels' neighbors, then lexicographically. `per_class` reports
/// each label's minimum distance.
pub fn classify_cdm(
    query_id: impl Into<String>,
    query: &EncodedString,
    known: &[LabeledScore],
    backend: &CompressorBackend,
    k: usize,
) -> Result<ClassificationOutcome> {
    if known.is_empty() {
        return Err(Error::InvalidArgument("no known scores".into()));
    }
    if k == 0 || k > known.len() {
        return Err(Error::InvalidArgument(format!(
            "k = {k} out of range 1..={}",
            known.len()
        )));
    }

    let mut distances = Vec::with_capacity(known.len());
    for score in known {
        let d = cdm(backend, query.as_bytes(), score.encoded.as_bytes())?.value();
        distances.push((score.label.as_str(), score.id.as_str(), d));
    }

    let mut per_class_min: BTreeMap<&str, f64> = BTreeMap::new();
    for &(label, _, d) in &distances {
        per_class_min
            .entry(label)
            .and_modify(|m| *m = m.min(d))
            .or_insert(d);
    }
    let per_class: Vec<(String, f64)> = per_class_min
        .iter()
        .map(|(l, v)| (l.to_string(), *v))
        .collect();

    let (predicted, tie) = if k == 1 {
        argmin_label(&per_class).expect("at least one class")
    } else {
        distances.sort_by(|a, b| a.2.total_cmp(&b.2).then(a.0.cmp(b.0)).then(a.1.cmp(b.1)));
        knn_vote(&distances[..k])
    };

    Ok(ClassificationOutcome {
        query_id: query_id.into(),
        per_class,
        predicted,
        tie,
    })
}

/// Majority vote over the k nearest; returns the winner and whether the
/// vote itself was tied.
fn knn_vote(nearest: &[(&str, &str, f64)]) -> (String, bool) {
    let mut votes: BTreeMap<&str, (usize, f64)> = BTreeMap::new();
    for &(label, _, d) in nearest {
        let entry = votes.entry(label).or_insert((0, 0.0));
        entry.0 += 1;
        entry.1 += d;
    }
    let top_votes = votes.values().map(|(n, _)| *n).max().expect("non-empty");
    let mut tied: Vec<(&str, f64)> = votes
        .iter()
        .filter(|(_, (n, _))| *n == top_votes)
        .map(|(l, (n, sum))| (*l, sum / *n as f64))
        .collect();
    let tie = tied.len() > 1;
    tied.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(b.0)));
    (tied[0].0.to_string(), tie)
}

/// The classifier a leave-one-out run evaluates.
#[derive(Debug, Clone)]
pub enum EvalMethod<'a> {
    InfoQuantity,
    Cdm {
        backend: &'a CompressorBackend,
        k: usize,
    },
}

impl EvalMethod<'_> {
    pub fn name(&self) -> &'static str {
        match self {
            EvalMethod::InfoQuantity => "infoq",
            EvalMethod::Cdm { .. } => "cdm",
        }
    }
}

/// One evaluated fold.
#[derive(Debug, Clone)]
pub struct LooRecord {
    pub query_id: String,
    pub true_label: String,
    pub outcome: ClassificationOutcome,
    pub correct: bool,
    /// For the information-quantity method, the length of the held-out
    /// score's group text after removing it (full length minus the score
    /// minus one separator).
    pub rebuilt_group_len: Option<usize>,
}

/// Evaluates every score with itself excluded from the reference data.
/// Records come back sorted by query id. Every class needs at least two
/// scores, otherwise holding one out would leave an empty group.
pub fn leave_one_out(corpus: &[LabeledScore], method: &EvalMethod) -> Result<Vec<LooRecord>> {
    let mut by_label: BTreeMap<&str, Vec<&LabeledScore>> = BTreeMap::new();
    for score in corpus {
        by_label.entry(score.label.as_str()).or_default().push(score);
    }
    if by_label.is_empty() {
        return Err(Error::InvalidArgument("empty corpus".into()));
    }
    for (label, scores) in &by_label {
        if scores.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "class '{label}' has {} score(s); leave-one-out needs at least 2",
                scores.len()
            )));
        }
    }

    let mut records = match method {
        EvalMethod::InfoQuantity => loo_infoq(corpus, &by_label)?,
        EvalMethod::Cdm { backend, k } => loo_cdm(corpus, backend, *k)?,
    };
    records.sort_by(|a, b| a.query_id.cmp(&b.query_id));
    Ok(records)
}

fn loo_infoq(
    corpus: &[LabeledScore],
    by_label: &BTreeMap<&str, Vec<&LabeledScore>>,
) -> Result<Vec<LooRecord>> {
    let full_groups: BTreeMap<&str, ComposerGroup> = by_label
        .iter()
        .map(|(label, scores)| {
            let pairs = scores
                .iter()
                .map(|s| (s.id.clone(), s.encoded.clone()))
                .collect();
            build_group(*label, pairs).map(|g| (*label, g))
        })
        .collect::<Result<_>>()?;

    let mut records = Vec::with_capacity(corpus.len());
    for held_out in corpus {
        let remaining: Vec<(String, EncodedString)> = by_label[held_out.label.as_str()]
            .iter()
            .filter(|s| s.id != held_out.id)
            .map(|s| (s.id.clone(), s.encoded.clone()))
            .collect();
        let rebuilt = build_group(held_out.label.clone(), remaining)?;
        let rebuilt_len = rebuilt.text_len();

        // The held-out score's group is swapped for the rebuilt one; the
        // other groups are reused as built.
        let groups: Vec<&ComposerGroup> = full_groups
            .values()
            .map(|g| if g.label == held_out.label { &rebuilt } else { g })
            .collect();

        let mut per_class = Vec::with_capacity(groups.len());
        for group in &groups {
            let info = info_min_partition(held_out.encoded.as_bytes(), &group.index)?;
            per_class.push((group.label.clone(), info.total.value()));
        }
        let (predicted, tie) = argmin_label(&per_class).expect("at least one group");
        let correct = predicted == held_out.label;
        records.push(LooRecord {
            query_id: held_out.id.clone(),
            true_label: held_out.label.clone(),
            outcome: ClassificationOutcome {
                query_id: held_out.id.clone(),
                per_class,
                predicted,
                tie,
            },
            correct,
            rebuilt_group_len: Some(rebuilt_len),
        });
    }
    Ok(records)
}

fn loo_cdm(corpus: &[LabeledScore], backend: &CompressorBackend, k: usize) -> Result<Vec<LooRecord>> {
    let mut records = Vec::with_capacity(corpus.len());
    for held_out in corpus {
        let known: Vec<LabeledScore> = corpus
            .iter()
            .filter(|s| s.id != held_out.id)
            .cloned()
            .collect();
        let outcome = classify_cdm(
            held_out.id.clone(),
            &held_out.encoded,
            &known,
            backend,
            k,
        )?;
        let correct = outcome.predicted == held_out.label;
        records.push(LooRecord {
            query_id: held_out.id.clone(),
            true_label: held_out.label.clone(),
            outcome,
            correct,
            rebuilt_group_len: None,
        });
    }
    Ok(records)
}

/// Correct counts per class plus the grand total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccuracyTable {
    /// (label, correct, evaluated) per class, label-sorted.
    pub per_class: Vec<(String, usize, usize)>,
    pub correct: usize,
    pub total: usize,
}

impl AccuracyTable {
    pub fn accuracy(&self) -> f64 {
        self.correct as f64 / self.total as f64
    }
}

/// Tallies correct flags by true label.
pub fn accuracy_table(records: &[LooRecord]) -> Result<AccuracyTable> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no records to tally".into()));
    }
    let mut per_class: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for rec in records {
        let entry = per_class.entry(rec.true_label.as_str()).or_insert((0, 0));
        entry.0 += usize::from(rec.correct);
        entry.1 += 1;
    }
    let per_class: Vec<(String, usize, usize)> = per_class
        .into_iter()
        .map(|(l, (c, n))| (l.to_string(), c, n))
        .collect();
    let correct = per_class.iter().map(|(_, c, _)| c).sum();
    Ok(AccuracyTable {
        per_class,
        correct,
        total: records.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn enc(s: &str) -> EncodedString {
        EncodedString::new(s).unwrap()
    }

    fn labeled(id: &str, label: &str, s: &str) -> LabeledScore {
        LabeledScore {
            id: id.into(),
            label: label.into(),
            encoded: enc(s),
        }
    }

    #[test]
    fn group_text_is_separator_joined() {
        let g = build_group("x", vec![("a".into(), enc("01"))]).unwrap();
        assert_eq!(g.index.text(), b"01");

        let g = build_group(
            "x",
            vec![("a".into(), enc("01")), ("b".into(), enc("10"))],
        )
        .unwrap();
        assert_eq!(g.index.text(), b"01#10");

        let scores: Vec<(String, EncodedString)> = (0..15)
            .map(|i| (format!("s{i}"), enc(&"0".repeat(88))))
            .collect();
        let g = build_group("x", scores).unwrap();
        assert_eq!(g.text_len(), 15 * 88 + 14);

        assert!(build_group("x", vec![]).is_err());
    }

    #[test]
    fn argmin_picks_least_and_flags_ties() {
        let rows = vec![
            ("Bach".to_string(), 2711.0),
            ("Chopin".to_string(), 3376.0),
            ("Debussy".to_string(), 3509.0),
            ("Mozart".to_string(), 2846.0),
            ("Satie".to_string(), 3464.0),
        ];
        assert_eq!(argmin_label(&rows).unwrap(), ("Bach".to_string(), false));

        let rows = vec![
            ("Bach".to_string(), 27451.0),
            ("Chopin".to_string(), 24371.0),
            ("Debussy".to_string(), 23512.0),
            ("Mozart".to_string(), 25252.0),
            ("Satie".to_string(), 23938.0),
        ];
        assert_eq!(argmin_label(&rows).unwrap(), ("Debussy".to_string(), false));

        let rows = vec![
            ("b".to_string(), 1.0),
            ("a".to_string(), 1.0),
            ("c".to_string(), 2.0),
        ];
        assert_eq!(argmin_label(&rows).unwrap(), ("a".to_string(), true));
    }

    #[test]
    fn argmin_handles_infinities() {
        let rows = vec![
            ("a".to_string(), f64::INFINITY),
            ("b".to_string(), f64::INFINITY),
        ];
        assert_eq!(argmin_label(&rows).unwrap(), ("a".to_string(), true));
        let rows = vec![
            ("a".to_string(), f64::INFINITY),
            ("b".to_string(), 7.0),
        ];
        assert_eq!(argmin_label(&rows).unwrap(), ("b".to_string(), false));
    }

    #[test]
    fn classify_infoq_single_group_is_trivially_predicted() {
        let groups = vec![build_group("only", vec![("a".into(), enc("0101"))]).unwrap()];
        let outcome = classify_infoq("q", &enc("01"), &groups).unwrap();
        assert_eq!(outcome.predicted, "only");
        assert!(!outcome.tie);
        assert_eq!(outcome.per_class.len(), 1);
    }

    #[test]
    fn classify_infoq_favors_matching_patterns() {
        let groups = vec![
            build_group(
                "alternating",
                vec![("a1".into(), enc(&"01".repeat(30))), ("a2".into(), enc(&"01".repeat(30)))],
            )
            .unwrap(),
            build_group(
                "blocky",
                vec![("b1".into(), enc(&"0011".repeat(15))), ("b2".into(), enc(&"0011".repeat(15)))],
            )
            .unwrap(),
        ];
        let outcome = classify_infoq("q", &enc(&"01".repeat(10)), &groups).unwrap();
        assert_eq!(outcome.predicted, "alternating");
    }

    #[test]
    fn knn_vote_prefers_majority_then_distance_then_label() {
        assert_eq!(
            knn_vote(&[("A", "1", 0.60), ("A", "2", 0.65), ("B", "3", 0.55)]),
            ("A".to_string(), false)
        );
        // vote tie, broken by smaller mean distance
        assert_eq!(
            knn_vote(&[("A", "1", 0.30), ("B", "2", 0.50), ("A", "3", 0.90), ("B", "4", 0.55)]),
            ("B".to_string(), true)
        );
        // full tie falls back to the lexicographically least label
        assert_eq!(
            knn_vote(&[("B", "1", 0.5), ("A", "2", 0.5)]),
            ("A".to_string(), true)
        );
    }

    #[test]
    fn classify_cdm_nearest_neighbor() {
        let backend = CompressorBackend::lzw();
        let known = vec![
            labeled("a1", "alternating", &"01".repeat(100)),
            labeled("b1", "blocky", &"0011".repeat(50)),
        ];
        let outcome =
            classify_cdm("q", &enc(&"01".repeat(100)), &known, &backend, 1).unwrap();
        assert_eq!(outcome.predicted, "alternating");
        assert!(!outcome.tie);
        // per-class scores are the per-label minima; the winner attains the overall min
        let min = outcome
            .per_class
            .iter()
            .map(|(_, v)| *v)
            .fold(f64::INFINITY, f64::min);
        let (winner_label, winner_score) = outcome
            .per_class
            .iter()
            .find(|(l, _)| *l == outcome.predicted)
            .unwrap();
        assert_eq!(winner_label, "alternating");
        assert_eq!(*winner_score, min);
    }

    #[test]
    fn classify_cdm_identity_backend_is_a_full_tie() {
        let backend = CompressorBackend::identity();
        let known = vec![
            labeled("a1", "x", "0101"),
            labeled("b1", "y", "0011"),
        ];
        let outcome = classify_cdm("q", &enc("0110"), &known, &backend, 1).unwrap();
        assert!(outcome.tie);
        assert_eq!(outcome.predicted, "x"); // lexicographically least
        assert!(outcome.per_class.iter().all(|(_, v)| *v == 1.0));
    }

    #[test]
    fn classify_cdm_validates_k() {
        let backend = CompressorBackend::identity();
        let known = vec![labeled("a1", "x", "0101")];
        assert!(classify_cdm("q", &enc("01"), &known, &backend, 0).is_err());
        assert!(classify_cdm("q", &enc("01"), &known, &backend, 2).is_err());
    }

    #[test]
    fn leave_one_out_with_per_class_twins_is_all_correct() {
        let corpus = vec![
            labeled("x1", "x", &"0101".repeat(10)),
            labeled("x2", "x", &"0101".repeat(10)),
            labeled("y1", "y", &"0011".repeat(10)),
            labeled("y2", "y", &"0011".repeat(10)),
        ];
        let records = leave_one_out(&corpus, &EvalMethod::InfoQuantity).unwrap();
        assert_eq!(records.len(), 4);
        assert!(records.iter().all(|r| r.correct), "{records:#?}");
        // each fold's rebuilt group holds exactly the twin
        for rec in &records {
            assert_eq!(rec.rebuilt_group_len, Some(40));
        }
        // pinned regression values: against the twin group the best split is
        // two length-20 halves, each with probability 10/21, giving
        // 2 * log2(21/10) bits; the foreign group scores far higher.
        let own = records[0].outcome.per_class[0].1;
        let other = records[0].outcome.per_class[1].1;
        assert!(own < other);
        assert!((own - 2.0 * (21.0f64 / 10.0).log2()).abs() < 1e-9, "got {own:.15}");
        assert!((other - 41.480_011_628_875_54).abs() < 1e-9, "got {other:.15}");
    }

    #[test]
    fn leave_one_out_rejects_singleton_class() {
        let corpus = vec![
            labeled("x1", "x", "0101"),
            labeled("x2", "x", "0110"),
            labeled("y1", "y", "0011"),
        ];
        assert!(leave_one_out(&corpus, &EvalMethod::InfoQuantity).is_err());
        let backend = CompressorBackend::lzw();
        assert!(leave_one_out(&corpus, &EvalMethod::Cdm { backend: &backend, k: 1 }).is_err());
    }

    #[test]
    fn leave_one_out_cdm_excludes_only_the_query() {
        let backend = CompressorBackend::lzw();
        let corpus = vec![
            labeled("x1", "x", &"01".repeat(40)),
            labeled("x2", "x", &"01".repeat(40)),
            labeled("y1", "y", &"0011".repeat(20)),
            labeled("y2", "y", &"0011".repeat(20)),
        ];
        let records =
            leave_one_out(&corpus, &EvalMethod::Cdm { backend: &backend, k: 1 }).unwrap();
        assert_eq!(records.len(), 4);
        assert!(records.iter().all(|r| r.correct), "{records:#?}");
        assert!(records.iter().all(|r| r.rebuilt_group_len.is_none()));
    }

    #[test]
    fn accuracy_table_counts_by_true_label() {
        let corpus = vec![
            labeled("x1", "x", &"0101".repeat(10)),
            labeled("x2", "x", &"0101".repeat(10)),
            labeled("y1", "y", &"0011".repeat(10)),
            labeled("y2", "y", &"0011".repeat(10)),
        ];
        let records = leave_one_out(&corpus, &EvalMethod::InfoQuantity).unwrap();
        let table = accuracy_table(&records).unwrap();
        assert_eq!(table.correct, 4);
        assert_eq!(table.total, 4);
        assert_eq!(
            table.per_class,
            vec![("x".to_string(), 2, 2), ("y".to_string(), 2, 2)]
        );
        assert!(accuracy_table(&[]).is_err());
    }

    proptest! {
        #[test]
        fn argmin_is_scale_invariant(
            values in proptest::collection::vec(0.01f64..1e6, 2..6),
            scale in 0.001f64..1000.0
        ) {
            let rows: Vec<(String, f64)> = values
                .iter()
                .enumerate()
                .map(|(i, v)| (format!("class{i}"), *v))
                .collect();
            let scaled: Vec<(String, f64)> = rows
                .iter()
                .map(|(l, v)| (l.clone(), v * scale))
                .collect();
            prop_assert_eq!(
                argmin_label(&rows).unwrap().0,
                argmin_label(&scaled).unwrap().0
            );
        }

        #[test]
        fn record_order_does_not_change_totals(shuffle_seed in 0u64..1000) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let corpus = vec![
                labeled("x1", "x", &"0101".repeat(6)),
                labeled("x2", "x", &"0101".repeat(6)),
                labeled("y1", "y", &"0011".repeat(6)),
                labeled("y2", "y", &"0011".repeat(6)),
            ];
            let mut records = leave_one_out(&corpus, &EvalMethod::InfoQuantity).unwrap();
            let baseline = accuracy_table(&records).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(shuffle_seed);
            records.shuffle(&mut rng);
            prop_assert_eq!(accuracy_table(&records).unwrap(), baseline);
        }
    }
}
