//! `edclust` command line: edit distances, alignments, clustering, synthetic
//! dataset generation and batch experiments over the dataset CSV format.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use edclust::{
    backtrack, batch_experiment, distance_sym, dp_matrix, evaluate, AlignedSymbol, ClusterConfig,
    CostModel, Dataset, GenSpec, HistogramBins, Seq, TiePolicy,
};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;

#[derive(Parser)]
#[command(name = "edclust", version, about = "Edit-distance clustering toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the edit distance between two rows of a dataset
    Dist {
        file: PathBuf,
        id_a: String,
        id_b: String,
        /// Substitution-cost CSV; unit costs when omitted
        #[arg(long)]
        cost_matrix: Option<PathBuf>,
        /// Deletion cost
        #[arg(long, default_value_t = 1.0)]
        del_cost: f64,
    },
    /// Print an optimal two-row alignment (gaps shown as `-`)
    Align {
        file: PathBuf,
        id_a: String,
        id_b: String,
        #[arg(long)]
        cost_matrix: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        del_cost: f64,
    },
    /// Cluster a dataset and write the assignment and centroids
    Cluster {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = TieArg::Random)]
        tie_policy: TieArg,
        #[arg(long, default_value_t = 100)]
        max_iters: usize,
        #[arg(long, default_value_t = 5)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Assignment CSV path; centroids go to `<OUT>.centroids`.
        /// Both print to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cost_matrix: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        del_cost: f64,
    },
    /// Generate a labeled synthetic dataset from a TOML spec
    Gen {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score a predicted assignment against ground-truth labels
    Eval {
        /// Assignment CSV (`id,cluster`) as written by `cluster`
        #[arg(long)]
        pred: PathBuf,
        /// Dataset CSV whose `label` column holds the ground truth
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Run a batch experiment from a TOML spec
    Experiment {
        #[arg(long)]
        spec: PathBuf,
        /// Samples per spec; overrides the `samples` key of the spec file
        #[arg(long)]
        samples: Option<usize>,
        /// Histogram CSV path
        #[arg(long)]
        out: PathBuf,
        /// Optional per-sample detail CSV path
        #[arg(long)]
        detail_out: Option<PathBuf>,
        /// Histogram bin upper bounds, e.g. `0,5,20,100`
        #[arg(long, value_delimiter = ',')]
        bins: Option<Vec<usize>>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum TieArg {
    Random,
    First,
    Last,
    Empty,
}

impl From<TieArg> for TiePolicy {
    fn from(arg: TieArg) -> Self {
        match arg {
            TieArg::Random => TiePolicy::Random,
            TieArg::First => TiePolicy::NearestToFirst,
            TieArg::Last => TiePolicy::NearestToLast,
            TieArg::Empty => TiePolicy::PreferEmpty,
        }
    }
}

/// Cluster section of an experiment spec file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClusterSection {
    k: usize,
    #[serde(default = "default_tie")]
    tie_policy: String,
    #[serde(default = "default_max_iters")]
    max_iters: usize,
    #[serde(default = "default_restarts")]
    restarts: usize,
    #[serde(default)]
    seed: u64,
}

fn default_tie() -> String {
    "random".into()
}
fn default_max_iters() -> usize {
    100
}
fn default_restarts() -> usize {
    5
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExperimentFile {
    /// Default sample count; the `--samples` flag wins when both are given.
    #[serde(default)]
    samples: Option<usize>,
    cluster: ClusterSection,
    #[serde(rename = "spec")]
    specs: Vec<GenSpec>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if let Err(msg) = validate_flags(&cli.command) {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_USAGE);
    }
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_DATA)
        }
    }
}

// Flag-level checks are usage errors; anything involving file contents is a
// data error.
fn validate_flags(cmd: &Command) -> std::result::Result<(), String> {
    match cmd {
        Command::Dist { del_cost, .. } | Command::Align { del_cost, .. } => {
            if *del_cost < 0.0 || !del_cost.is_finite() {
                return Err(format!("--del-cost must be nonnegative, got {del_cost}"));
            }
        }
        Command::Cluster {
            k,
            max_iters,
            restarts,
            del_cost,
            ..
        } => {
            if *k == 0 {
                return Err("--k must be at least 1".into());
            }
            if *max_iters == 0 {
                return Err("--max-iters must be at least 1".into());
            }
            if *restarts == 0 {
                return Err("--restarts must be at least 1".into());
            }
            if *del_cost < 0.0 || !del_cost.is_finite() {
                return Err(format!("--del-cost must be nonnegative, got {del_cost}"));
            }
        }
        Command::Eval { k, .. } => {
            if *k == 0 {
                return Err("--k must be at least 1".into());
            }
        }
        Command::Experiment { samples, bins, .. } => {
            if *samples == Some(0) {
                return Err("--samples must be at least 1".into());
            }
            if let Some(b) = bins {
                if b.is_empty() || b.windows(2).any(|w| w[0] >= w[1]) {
                    return Err("--bins must be a strictly increasing list".into());
                }
            }
        }
        Command::Gen { .. } => {}
    }
    Ok(())
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Dist {
            file,
            id_a,
            id_b,
            cost_matrix,
            del_cost,
        } => {
            let dataset = Dataset::read(&file)?;
            let cost = build_cost(&dataset, cost_matrix.as_deref(), del_cost)?;
            let (a, b) = lookup_pair(&dataset, &id_a, &id_b)?;
            println!("{}", distance_sym(a, b, &cost));
            Ok(())
        }
        Command::Align {
            file,
            id_a,
            id_b,
            cost_matrix,
            del_cost,
        } => {
            let dataset = Dataset::read(&file)?;
            let cost = build_cost(&dataset, cost_matrix.as_deref(), del_cost)?;
            let (a, b) = lookup_pair(&dataset, &id_a, &id_b)?;
            let (source, target) = if a.len() >= b.len() { (a, b) } else { (b, a) };
            let w = dp_matrix(source, target, &cost)?;
            let es = backtrack(source, target, &w, &cost)?;
            let top: Vec<&str> = es
                .alpha()
                .iter()
                .map(|&s| dataset.alphabet.token(s))
                .collect();
            let bottom: Vec<&str> = es
                .beta()
                .iter()
                .map(|&b| match b {
                    AlignedSymbol::Sym(s) => dataset.alphabet.token(s),
                    AlignedSymbol::Gap => "-",
                })
                .collect();
            println!("{}", top.join(" "));
            println!("{}", bottom.join(" "));
            Ok(())
        }
        Command::Cluster {
            file,
            k,
            tie_policy,
            max_iters,
            restarts,
            seed,
            out,
            cost_matrix,
            del_cost,
        } => {
            let dataset = Dataset::read(&file)?;
            let cost = build_cost(&dataset, cost_matrix.as_deref(), del_cost)?;
            let config = ClusterConfig::new(k, cost)
                .with_tie_policy(tie_policy.into())
                .with_max_iters(max_iters)
                .with_restarts(restarts)
                .with_seed(seed);
            let clustering = edclust::run(&dataset.sequences, &config)?;

            let mut assignment = String::from("id,cluster\n");
            for (id, &c) in dataset.ids.iter().zip(&clustering.assignment) {
                assignment.push_str(&format!("{id},{c}\n"));
            }
            let mut centroids = String::new();
            for c in &clustering.centroids {
                centroids.push_str(&dataset.alphabet.render(c).join(";"));
                centroids.push('\n');
            }
            match out {
                Some(path) => {
                    write_text(&path, &assignment)?;
                    let centroid_path = append_extension(&path, "centroids");
                    write_text(&centroid_path, &centroids)?;
                    eprintln!(
                        "wrote {} assignments to {} (centroids: {}), iterations {}, converged {}, objective {}",
                        dataset.len(),
                        path.display(),
                        centroid_path.display(),
                        clustering.iterations,
                        clustering.converged,
                        clustering.objective
                    );
                }
                None => {
                    print!("{assignment}");
                    println!("# centroids");
                    print!("{centroids}");
                }
            }
            Ok(())
        }
        Command::Gen { spec, out } => {
            let gen_spec = read_gen_spec(&spec)?;
            let data = edclust::generate(&gen_spec)?;
            Dataset::from_generated(&data).write(&out)?;
            eprintln!(
                "wrote {} sequences in {} clusters to {}",
                data.sequences.len(),
                gen_spec.k_true,
                out.display()
            );
            Ok(())
        }
        Command::Eval { pred, truth, k } => {
            let truth_data = Dataset::read(&truth)?;
            let labels = truth_data.required_labels()?;
            let predicted = read_assignment(&pred, &truth_data)?;
            let report = evaluate(&predicted, &labels, k, &HistogramBins::default())?;
            println!("misclustered: {}", report.misclustered);
            println!("accuracy: {}", report.accuracy);
            let map: Vec<String> = report
                .best_label_map
                .iter()
                .enumerate()
                .map(|(pred_id, truth_id)| format!("{pred_id}->{truth_id}"))
                .collect();
            println!("label_map: {}", map.join(" "));
            Ok(())
        }
        Command::Experiment {
            spec,
            samples,
            out,
            detail_out,
            bins,
        } => {
            let text = std::fs::read_to_string(&spec)
                .with_context(|| format!("reading {}", spec.display()))?;
            let file: ExperimentFile = toml::from_str(&text)
                .with_context(|| format!("parsing {}", spec.display()))?;
            if file.specs.is_empty() {
                bail!("experiment spec declares no [[spec]] tables");
            }
            let samples = samples
                .or(file.samples)
                .ok_or_else(|| anyhow!("sample count missing: pass --samples or set `samples` in the spec file"))?;
            let max_alphabet = file
                .specs
                .iter()
                .map(|s| s.alphabet_size)
                .max()
                .expect("non-empty specs");
            let alphabet = edclust::Alphabet::numeric(max_alphabet)?;
            let tie = parse_tie_policy(&file.cluster.tie_policy)?;
            let config = ClusterConfig::new(file.cluster.k, CostModel::unit(&alphabet)?)
                .with_tie_policy(tie)
                .with_max_iters(file.cluster.max_iters)
                .with_restarts(file.cluster.restarts)
                .with_seed(file.cluster.seed);
            let bins = match bins {
                Some(uppers) => HistogramBins::new(uppers)?,
                None => HistogramBins::default(),
            };
            let table = batch_experiment(&file.specs, &config, samples, bins)?;

            let mut hist = BufWriter::new(File::create(&out)?);
            table.write_histogram_csv(&mut hist)?;
            hist.flush()?;
            if let Some(detail) = detail_out {
                let mut w = BufWriter::new(File::create(&detail)?);
                table.write_detail_csv(&mut w)?;
                w.flush()?;
            }
            eprintln!(
                "ran {} samples over {} specs, histogram at {}",
                samples,
                file.specs.len(),
                out.display()
            );
            Ok(())
        }
    }
}

fn build_cost(dataset: &Dataset, matrix: Option<&Path>, del_cost: f64) -> Result<CostModel> {
    let model = match matrix {
        Some(path) => {
            let m = edclust::read_cost_matrix(path, &dataset.alphabet)?;
            CostModel::with_matrix(&dataset.alphabet, m, del_cost)?
        }
        None => CostModel::unit(&dataset.alphabet)?.with_del_cost(del_cost)?,
    };
    Ok(model)
}

fn lookup_pair<'d>(dataset: &'d Dataset, id_a: &str, id_b: &str) -> Result<(&'d Seq, &'d Seq)> {
    let a = dataset
        .index_of(id_a)
        .ok_or_else(|| anyhow!("row id {id_a:?} not found"))?;
    let b = dataset
        .index_of(id_b)
        .ok_or_else(|| anyhow!("row id {id_b:?} not found"))?;
    Ok((&dataset.sequences[a], &dataset.sequences[b]))
}

fn read_gen_spec(path: &Path) -> Result<GenSpec> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(spec)
}

fn parse_tie_policy(name: &str) -> Result<TiePolicy> {
    match name {
        "random" => Ok(TiePolicy::Random),
        "first" => Ok(TiePolicy::NearestToFirst),
        "last" => Ok(TiePolicy::NearestToLast),
        "empty" => Ok(TiePolicy::PreferEmpty),
        other => bail!("unknown tie_policy {other:?} (expected random|first|last|empty)"),
    }
}

/// Assignment CSV (`id,cluster`) reordered to match the truth dataset rows.
fn read_assignment(path: &Path, truth: &Dataset) -> Result<Vec<usize>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim_end_matches('\r') == "id,cluster" => {}
        _ => bail!("{}: expected header `id,cluster`", path.display()),
    }
    let mut by_id: Vec<Option<usize>> = vec![None; truth.len()];
    for (i, raw) in lines.enumerate() {
        let line_no = i + 2;
        let row = raw.trim_end_matches('\r');
        if row.is_empty() {
            continue;
        }
        let (id, cluster) = row
            .split_once(',')
            .ok_or_else(|| anyhow!("{}:{line_no}: expected `id,cluster`", path.display()))?;
        let idx = truth.index_of(id).ok_or_else(|| {
            anyhow!("{}:{line_no}: id {id:?} not in truth dataset", path.display())
        })?;
        if by_id[idx].is_some() {
            bail!("{}:{line_no}: duplicate id {id:?}", path.display());
        }
        let c: usize = cluster
            .parse()
            .map_err(|_| anyhow!("{}:{line_no}: bad cluster {cluster:?}", path.display()))?;
        by_id[idx] = Some(c);
    }
    by_id
        .into_iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| anyhow!("no prediction for row id {:?}", truth.ids[i])))
        .collect()
}

fn append_extension(path: &Path, ext: &str) -> PathBuf {
    let mut s = path.as_os_str().to_os_string();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn write_text(path: &Path, text: &str) -> io::Result<()> {
    std::fs::write(path, text)
}
