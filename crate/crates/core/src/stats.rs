//! Paired-correctness contingency tables and McNemar's test.

use std::collections::HashMap;

use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, DiscreteCDF};

use crate::error::{Error, Result};
use crate::eval::LooRecord;

/// 2x2 paired-correctness counts for two methods evaluated on the same
/// queries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContingencyTable {
    pub both_correct: usize,
    pub only_first_correct: usize,
    pub only_second_correct: usize,
    pub both_wrong: usize,
}

impl ContingencyTable {
    pub fn new(
        both_correct: usize,
        only_first_correct: usize,
        only_second_correct: usize,
        both_wrong: usize,
    ) -> Self {
        ContingencyTable {
            both_correct,
            only_first_correct,
            only_second_correct,
            both_wrong,
        }
    }

    /// Tallies paired (first correct, second correct) flags.
    pub fn from_correctness(pairs: impl IntoIterator<Item = (bool, bool)>) -> Self {
        let mut t = ContingencyTable::new(0, 0, 0, 0);
        for (a, b) in pairs {
            match (a, b) {
                (true, true) => t.both_correct += 1,
                (true, false) => t.only_first_correct += 1,
                (false, true) => t.only_second_correct += 1,
                (false, false) => t.both_wrong += 1,
            }
        }
        t
    }

    pub fn total(&self) -> usize {
        self.both_correct + self.only_first_correct + self.only_second_correct + self.both_wrong
    }
}

/// Pairs two methods' leave-one-out records by query id. Both runs must
/// cover exactly the same queries.
pub fn build_contingency(first: &[LooRecord], second: &[LooRecord]) -> Result<ContingencyTable> {
    if first.len() != second.len() {
        return Err(Error::InvalidArgument(format!(
            "record counts differ: {} vs {}",
            first.len(),
            second.len()
        )));
    }
    let second_by_id: HashMap<&str, bool> = second
        .iter()
        .map(|r| (r.query_id.as_str(), r.correct))
        .collect();
    if second_by_id.len() != second.len() {
        return Err(Error::InvalidArgument(
            "duplicate query ids in second record list".into(),
        ));
    }
    let pairs: Vec<(bool, bool)> = first
        .iter()
        .map(|r| {
            second_by_id
                .get(r.query_id.as_str())
                .map(|&b| (r.correct, b))
                .ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "query id '{}' missing from second record list",
                        r.query_id
                    ))
                })
        })
        .collect::<Result<_>>()?;
    Ok(ContingencyTable::from_correctness(pairs))
}

/// McNemar's test over the discordant cells, reported both ways: the
/// continuity-corrected chi-square form `(|b - c| - 1)^2 / (b + c)` with
/// its 1-degree-of-freedom p-value, and the exact two-sided binomial
/// p-value for `b` successes in `b + c` fair trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McNemarResult {
    pub statistic: f64,
    pub p_chi_square: f64,
    pub p_exact: f64,
}

pub fn mcnemar(table: &ContingencyTable) -> McNemarResult {
    let b = table.only_first_correct;
    let c = table.only_second_correct;
    let discordant = b + c;
    if discordant == 0 {
        // no disagreements: nothing to test
        return McNemarResult {
            statistic: 0.0,
            p_chi_square: 1.0,
            p_exact: 1.0,
        };
    }

    let diff = b.abs_diff(c) as f64;
    let statistic = (diff - 1.0).powi(2) / discordant as f64;
    let chi = ChiSquared::new(1.0).expect("1 dof is valid");
    let p_chi_square = 1.0 - chi.cdf(statistic);

    let binom = Binomial::new(0.5, discordant as u64).expect("p=1/2 is valid");
    let lower_tail = binom.cdf(b.min(c) as u64);
    let p_exact = (2.0 * lower_tail).min(1.0);

    McNemarResult {
        statistic,
        p_chi_square,
        p_exact,
    }
}
