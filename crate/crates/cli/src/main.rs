//! `partita` — composer classification for symbolic scores.
//!
//! Exit status: 0 on success, 2 on usage or input errors, 3 when an
//! external compressor backend fails.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use partita_core::bench::{bench_scaling, BenchParams};
use partita_core::cdm::{cdm, CompressorBackend};
use partita_core::error::Error;
use partita_core::eval::{
    build_group, classify_cdm, classify_infoq, leave_one_out, ComposerGroup, EvalMethod,
    LabeledScore, LooRecord,
};
use partita_core::infoq::info_min_partition;
use partita_core::manifest::{load_corpus, load_encoded_file};
use partita_core::report::{format_value, render_comparison, render_method_report, ReportOptions};
use partita_core::score::{concat_group, encode_score, parse_score_file, EncodedString};
use partita_core::stats::{build_contingency, mcnemar, ContingencyTable};
use partita_core::suffix::SuffixIndex;

/// Default seed for synthetic corpora, fixed for reproducible runs.
const DEFAULT_SEED: u64 = 42;

const EXIT_INPUT: u8 = 2;
const EXIT_BACKEND: u8 = 3;

#[derive(Parser)]
#[command(name = "partita", version, about = "Classify symbolic scores by composer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a score document into its '0'/'1' piano-roll string.
    Encode {
        /// Score file (structured text, or already-encoded pass-through).
        input: PathBuf,
        /// Output file; defaults to `<input>.01`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a persisted suffix index over one or more encoded scores.
    Index {
        /// Score files forming one group, joined with '#' separators.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Index output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Information quantity of a query against every group in a manifest.
    Infoq {
        query: PathBuf,
        manifest: PathBuf,
        /// Also print the winning group's minimizing partition.
        #[arg(long)]
        partition: bool,
        #[arg(long)]
        paper_style: bool,
    },
    /// CDM dissimilarity between two score files.
    Cdm {
        x: PathBuf,
        y: PathBuf,
        #[command(flatten)]
        backend: BackendArgs,
    },
    /// Classify one query score against a manifest corpus.
    Classify {
        query: PathBuf,
        manifest: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Infoq)]
        method: Method,
        #[command(flatten)]
        backend: BackendArgs,
        /// Neighbors for CDM k-NN.
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        paper_style: bool,
    },
    /// Leave-one-out evaluation over a manifest corpus.
    Evaluate {
        manifest: PathBuf,
        /// Method to evaluate; pass twice to compare two methods.
        #[arg(long, value_enum, required = true)]
        method: Vec<Method>,
        #[command(flatten)]
        backend: BackendArgs,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long)]
        paper_style: bool,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// McNemar's test from 2x2 contingency cell counts.
    Mcnemar {
        /// Both methods correct.
        both_correct: usize,
        /// Only the first method correct.
        first_only: usize,
        /// Only the second method correct.
        second_only: usize,
        /// Both methods wrong.
        both_wrong: usize,
    },
    /// Per-query timing of both classifiers on seeded synthetic corpora.
    Bench {
        /// Average encoded-string length.
        #[arg(long, default_value_t = 2000)]
        len: usize,
        /// Number of composers.
        #[arg(long, default_value_t = 5)]
        classes: usize,
        /// Comma-separated group sizes to sweep.
        #[arg(long, value_delimiter = ',', default_value = "5,10,20")]
        group_sizes: Vec<usize>,
        /// Number of query scores per row.
        #[arg(long, default_value_t = 8)]
        queries: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Method {
    Infoq,
    Cdm,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Infoq => "infoq",
            Method::Cdm => "cdm",
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum BackendChoice {
    Identity,
    Lzw,
    External,
}

#[derive(Args)]
struct BackendArgs {
    /// Compressor used for CDM.
    #[arg(long, value_enum, default_value_t = BackendChoice::Lzw)]
    backend: BackendChoice,
    /// External command template; `{in}` is replaced by the input path.
    #[arg(long)]
    external_cmd: Option<String>,
    /// Bytes subtracted from every measured size.
    #[arg(long, default_value_t = 0)]
    offset: usize,
}

impl BackendArgs {
    fn build(&self) -> Result<CompressorBackend, Error> {
        let backend = match self.backend {
            BackendChoice::Identity => CompressorBackend::identity(),
            BackendChoice::Lzw => CompressorBackend::lzw(),
            BackendChoice::External => {
                let cmd = self.external_cmd.as_ref().ok_or_else(|| {
                    Error::InvalidArgument(
                        "--backend external requires --external-cmd".into(),
                    )
                })?;
                CompressorBackend::external("external", cmd.clone())
            }
        };
        Ok(backend.with_offset(self.offset))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if err.is_backend_failure() {
                ExitCode::from(EXIT_BACKEND)
            } else {
                ExitCode::from(EXIT_INPUT)
            }
        }
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Encode { input, out } => cmd_encode(&input, out.as_deref()),
        Command::Index { inputs, out } => cmd_index(&inputs, &out),
        Command::Infoq {
            query,
            manifest,
            partition,
            paper_style,
        } => cmd_infoq(&query, &manifest, partition, paper_style),
        Command::Cdm { x, y, backend } => cmd_cdm(&x, &y, &backend),
        Command::Classify {
            query,
            manifest,
            method,
            backend,
            k,
            paper_style,
        } => cmd_classify(&query, &manifest, method, &backend, k, paper_style),
        Command::Evaluate {
            manifest,
            method,
            backend,
            k,
            paper_style,
            out,
        } => cmd_evaluate(&manifest, &method, &backend, k, paper_style, out.as_deref()),
        Command::Mcnemar {
            both_correct,
            first_only,
            second_only,
            both_wrong,
        } => cmd_mcnemar(both_correct, first_only, second_only, both_wrong),
        Command::Bench {
            len,
            classes,
            group_sizes,
            queries,
            seed,
            k,
        } => cmd_bench(len, classes, group_sizes, queries, seed, k),
    }
}

fn cmd_encode(input: &Path, out: Option<&Path>) -> Result<(), Error> {
    let content = fs::read_to_string(input)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", input.display())))?;
    let encoded = encode_score(&parse_score_file(&content)?)?;
    let out_path = match out {
        Some(p) => p.to_path_buf(),
        None => {
            let mut name = input.as_os_str().to_owned();
            name.push(".01");
            PathBuf::from(name)
        }
    };
    fs::write(&out_path, format!("{}\n", encoded.as_str()))?;
    println!("{} characters -> {}", encoded.len(), out_path.display());
    Ok(())
}

fn cmd_index(inputs: &[PathBuf], out: &Path) -> Result<(), Error> {
    let encoded: Vec<EncodedString> = inputs
        .iter()
        .map(|p| load_encoded_file(p))
        .collect::<Result<_, _>>()?;
    let text = concat_group(&encoded)?;
    let index = SuffixIndex::build(text.into_bytes())?;
    let mut file = fs::File::create(out)?;
    index.write_to(&mut file)?;
    file.flush()?;
    println!(
        "indexed {} scores, {} characters -> {}",
        inputs.len(),
        index.len(),
        out.display()
    );
    Ok(())
}

fn load_groups(manifest: &Path) -> Result<Vec<ComposerGroup>, Error> {
    let corpus = load_corpus(manifest)?;
    let mut by_label: std::collections::BTreeMap<String, Vec<(String, EncodedString)>> =
        std::collections::BTreeMap::new();
    for score in corpus {
        by_label
            .entry(score.label)
            .or_default()
            .push((score.id, score.encoded));
    }
    by_label
        .into_iter()
        .map(|(label, scores)| build_group(label, scores))
        .collect()
}

fn cmd_infoq(query: &Path, manifest: &Path, partition: bool, paper_style: bool) -> Result<(), Error> {
    let query_string = load_encoded_file(query)?;
    let groups = load_groups(manifest)?;
    let outcome = classify_infoq("query", &query_string, &groups)?;
    let opts = ReportOptions { paper_style };
    for (label, bits) in &outcome.per_class {
        println!("{label} {}", format_value(*bits, &opts));
    }
    println!("predicted {}", outcome.predicted);
    if outcome.tie {
        println!("tie 1");
    }
    if partition {
        let winner = groups
            .iter()
            .find(|g| g.label == outcome.predicted)
            .expect("predicted label comes from the group list");
        let info = info_min_partition(query_string.as_bytes(), &winner.index)?;
        print!("{}", info.render_report());
    }
    Ok(())
}

fn cmd_cdm(x: &Path, y: &Path, backend: &BackendArgs) -> Result<(), Error> {
    let backend = backend.build()?;
    let x = load_encoded_file(x)?;
    let y = load_encoded_file(y)?;
    let value = cdm(&backend, x.as_bytes(), y.as_bytes())?;
    println!("{:.6}", value.value());
    Ok(())
}

fn cmd_classify(
    query: &Path,
    manifest: &Path,
    method: Method,
    backend: &BackendArgs,
    k: usize,
    paper_style: bool,
) -> Result<(), Error> {
    let query_string = load_encoded_file(query)?;
    let outcome = match method {
        Method::Infoq => {
            let groups = load_groups(manifest)?;
            classify_infoq("query", &query_string, &groups)?
        }
        Method::Cdm => {
            let corpus = load_corpus(manifest)?;
            classify_cdm("query", &query_string, &corpus, &backend.build()?, k)?
        }
    };
    let opts = ReportOptions { paper_style };
    for (label, value) in &outcome.per_class {
        println!("{label} {}", format_value(*value, &opts));
    }
    println!("predicted {}", outcome.predicted);
    if outcome.tie {
        println!("tie 1");
    }
    Ok(())
}

fn run_method(
    corpus: &[LabeledScore],
    method: Method,
    backend: &CompressorBackend,
    k: usize,
) -> Result<Vec<LooRecord>, Error> {
    let eval_method = match method {
        Method::Infoq => EvalMethod::InfoQuantity,
        Method::Cdm => EvalMethod::Cdm { backend, k },
    };
    leave_one_out(corpus, &eval_method)
}

fn cmd_evaluate(
    manifest: &Path,
    methods: &[Method],
    backend: &BackendArgs,
    k: usize,
    paper_style: bool,
    out: Option<&Path>,
) -> Result<(), Error> {
    if methods.is_empty() || methods.len() > 2 {
        return Err(Error::InvalidArgument(
            "pass --method once, or twice to compare two methods".into(),
        ));
    }
    let corpus = load_corpus(manifest)?;
    let backend = backend.build()?;
    let opts = ReportOptions { paper_style };

    let mut report = String::new();
    let mut runs: Vec<(Method, Vec<LooRecord>)> = Vec::new();
    for &method in methods {
        let records = run_method(&corpus, method, &backend, k)?;
        report.push_str(&render_method_report(method.name(), &records, &opts)?);
        runs.push((method, records));
    }
    if let [(first, first_records), (second, second_records)] = &runs[..] {
        let table = build_contingency(first_records, second_records)?;
        let result = mcnemar(&table);
        report.push_str(&render_comparison(
            first.name(),
            second.name(),
            &table,
            &result,
        ));
    }

    match out {
        Some(path) => {
            fs::write(path, &report)?;
            println!("report -> {}", path.display());
        }
        None => print!("{report}"),
    }
    Ok(())
}

fn cmd_mcnemar(
    both_correct: usize,
    first_only: usize,
    second_only: usize,
    both_wrong: usize,
) -> Result<(), Error> {
    let table = ContingencyTable::new(both_correct, first_only, second_only, both_wrong);
    let result = mcnemar(&table);
    print!("{}", render_comparison("first", "second", &table, &result));
    Ok(())
}

fn cmd_bench(
    len: usize,
    classes: usize,
    group_sizes: Vec<usize>,
    queries: usize,
    seed: u64,
    k: usize,
) -> Result<(), Error> {
    let report = bench_scaling(&BenchParams {
        avg_len: len,
        classes,
        group_sizes,
        queries,
        seed,
        knn_k: k,
    })?;
    print!("{}", report.render());
    Ok(())
}
