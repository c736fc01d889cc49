//! Plain-text evaluation reports.
//!
//! Layout per method: a per-score block with one line per query,
//! `<id> <true> <predicted> <correct 0|1> <per-class values>` (classes in
//! label order), then the accuracy table. When two methods are compared, a
//! contingency block and the McNemar results follow.

use std::fmt::Write;

use crate::error::Result;
use crate::eval::{accuracy_table, LooRecord};
use crate::stats::{ContingencyTable, McNemarResult};

/// Report formatting knobs.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReportOptions {
    /// Print class scores truncated toward zero to integers instead of six
    /// decimal places.
    pub paper_style: bool,
}

pub fn format_value(value: f64, opts: &ReportOptions) -> String {
    if value.is_infinite() {
        "inf".to_string()
    } else if opts.paper_style {
        format!("{}", value.trunc() as i64)
    } else {
        format!("{value:.6}")
    }
}

/// Renders one method's records followed by its accuracy table.
pub fn render_method_report(
    method_name: &str,
    records: &[LooRecord],
    opts: &ReportOptions,
) -> Result<String> {
    let mut out = String::new();
    let labels: Vec<&str> = records
        .first()
        .map(|r| r.outcome.per_class.iter().map(|(l, _)| l.as_str()).collect())
        .unwrap_or_default();
    let _ = writeln!(out, "== results ({method_name}) ==");
    let _ = writeln!(out, "# id true predicted correct {}", labels.join(" "));
    for rec in records {
        let values: Vec<String> = rec
            .outcome
            .per_class
            .iter()
            .map(|(_, v)| format_value(*v, opts))
            .collect();
        let _ = writeln!(
            out,
            "{} {} {} {} {}",
            rec.query_id,
            rec.true_label,
            rec.outcome.predicted,
            u8::from(rec.correct),
            values.join(" ")
        );
    }

    let table = accuracy_table(records)?;
    let _ = writeln!(out, "== accuracy ({method_name}) ==");
    for (label, correct, total) in &table.per_class {
        let _ = writeln!(out, "{label} {correct}/{total}");
    }
    let _ = writeln!(out, "Total {}/{}", table.correct, table.total);
    Ok(out)
}

/// Renders the paired-comparison block.
pub fn render_comparison(
    first_name: &str,
    second_name: &str,
    table: &ContingencyTable,
    result: &McNemarResult,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "== contingency ({first_name} vs {second_name}) ==");
    let _ = writeln!(out, "both_correct {}", table.both_correct);
    let _ = writeln!(out, "{first_name}_only {}", table.only_first_correct);
    let _ = writeln!(out, "{second_name}_only {}", table.only_second_correct);
    let _ = writeln!(out, "both_wrong {}", table.both_wrong);
    let _ = writeln!(out, "total {}", table.total());
    let _ = writeln!(out, "== mcnemar ==");
    let _ = writeln!(out, "statistic {:.6}", result.statistic);
    let _ = writeln!(out, "p_chi_square {:.6}", result.p_chi_square);
    let _ = writeln!(out, "p_exact {:.6}", result.p_exact);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::ClassificationOutcome;
    use crate::stats::mcnemar;

    fn record(id: &str, truth: &str, predicted: &str, score: f64) -> LooRecord {
        LooRecord {
            query_id: id.into(),
            true_label: truth.into(),
            outcome: ClassificationOutcome {
                query_id: id.into(),
                per_class: vec![("x".into(), score), ("y".into(), score + 1.0)],
                predicted: predicted.into(),
                tie: false,
            },
            correct: truth == predicted,
            rebuilt_group_len: None,
        }
    }

    #[test]
    fn method_report_lists_rows_then_accuracy() {
        let records = vec![
            record("q1", "x", "x", 12.5),
            record("q2", "y", "x", 8.25),
        ];
        let report = render_method_report("infoq", &records, &ReportOptions::default()).unwrap();
        let lines: Vec<&str> = report.lines().collect();
        assert_eq!(lines[0], "== results (infoq) ==");
        assert_eq!(lines[1], "# id true predicted correct x y");
        assert_eq!(lines[2], "q1 x x 1 12.500000 13.500000");
        assert_eq!(lines[3], "q2 y x 0 8.250000 9.250000");
        assert_eq!(lines[4], "== accuracy (infoq) ==");
        assert_eq!(lines[5], "x 1/1");
        assert_eq!(lines[6], "y 0/1");
        assert_eq!(lines[7], "Total 1/2");
    }

    #[test]
    fn paper_style_truncates_toward_zero() {
        let opts = ReportOptions { paper_style: true };
        assert_eq!(format_value(2711.987, &opts), "2711");
        assert_eq!(format_value(f64::INFINITY, &opts), "inf");
        assert_eq!(format_value(3.0, &ReportOptions::default()), "3.000000");
    }

    #[test]
    fn comparison_block_shows_cells_and_both_p_values() {
        let table = ContingencyTable::new(38, 17, 3, 17);
        let result = mcnemar(&table);
        let block = render_comparison("infoq", "cdm", &table, &result);
        assert!(block.contains("both_correct 38"));
        assert!(block.contains("infoq_only 17"));
        assert!(block.contains("cdm_only 3"));
        assert!(block.contains("statistic 8.45"));
        assert!(block.contains("p_chi_square 0.00"));
    }
}
