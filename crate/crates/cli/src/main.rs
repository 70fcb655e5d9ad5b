mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use shapley_homology::families::{closed_form, make_family, verify_appendix_identities, FamilySpec};
use shapley_homology::grammar::{builtin_grammar, dfa_entropy, labeled_strings};
use shapley_homology::io::{parse_edge_list, parse_matrix, parse_strings, parse_vectors};
use shapley_homology::masking::{generate_er_dataset, run_masking_experiment, EnsembleConfig};
use shapley_homology::shapley::{complex_influence, radius_sweep, run_influence, ShapleyMethod, DEFAULT_EXACT_CAP};
use shapley_homology::{Error, LabeledPointSet, Metric};

use report::{Format, Payload, ReportEnvelope, RoleRow};

const EXIT_INPUT: u8 = 2;
const EXIT_SIZE_CAP: u8 = 3;
const EXIT_NUMERIC: u8 = 4;
const EXIT_IO: u8 = 1;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("writing output: {0}")]
    Write(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::SizeCap { .. }) => EXIT_SIZE_CAP,
            CliError::Core(Error::EigenNonConvergence(_) | Error::ZeroShapley) => EXIT_NUMERIC,
            CliError::Write(_) => EXIT_IO,
            _ => EXIT_INPUT,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "shapley-homology", version, about = "Per-sample influence on the connected components of a neighbor complex")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug, Serialize)]
struct OutputArgs {
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Show entropy in bits in table output.
    #[arg(long, global = true)]
    bits: bool,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "snake_case", tag = "command")]
enum Command {
    /// Influence profile of one dataset at one radius.
    Influence {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[command(flatten)]
        method: MethodArgs,
    },
    /// Influence profiles at several radii.
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        radii: Vec<f64>,
        #[command(flatten)]
        method: MethodArgs,
    },
    /// Closed-form and enumerated values for a graph family.
    Family {
        #[arg(long, value_enum)]
        kind: FamilyKind,
        #[arg(long)]
        n: usize,
        /// First side of a complete bipartite graph.
        #[arg(long)]
        m: Option<usize>,
        /// Edge probability for `er`.
        #[arg(long)]
        p: Option<f64>,
        #[command(flatten)]
        method: MethodArgs,
    },
    /// Check the combinatorial identities behind the closed forms.
    Identities {
        #[arg(long, default_value_t = 20)]
        n_max: usize,
        #[arg(long, default_value_t = 20)]
        m_max: usize,
    },
    /// Enumerate a built-in grammar, optionally with its influence profile.
    Grammar {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
        g: u8,
        /// String length.
        #[arg(long, conflicts_with = "range")]
        len: Option<usize>,
        /// Inclusive length range `A:B`.
        #[arg(long, value_parser = parse_range)]
        range: Option<(usize, usize)>,
        /// Include rejected strings.
        #[arg(long)]
        neg: bool,
        /// Also compute the influence profile of the accepted strings under
        /// the edit distance at this radius (single length only).
        #[arg(long, requires = "len")]
        radius: Option<f64>,
        #[command(flatten)]
        method: MethodArgs,
    },
    /// Masking experiment on a seeded random-graph ensemble.
    Mask {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        j: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        n_min: usize,
        #[arg(long, default_value_t = 14)]
        n_max: usize,
        #[arg(long, default_value_t = 0.02)]
        p_min: f64,
        #[arg(long, default_value_t = 0.21)]
        p_max: f64,
    },
}

#[derive(Args, Debug, Serialize)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "edit")]
    metric: MetricArg,
    /// Defaults to the natural kind for the metric.
    #[arg(long, value_enum)]
    input_kind: Option<InputKind>,
}

#[derive(Args, Debug, Serialize)]
struct MethodArgs {
    /// Enumerate all subsets (the default).
    #[arg(long, conflicts_with = "sample")]
    exact: bool,
    /// Estimate from this many sampled permutations.
    #[arg(long, value_name = "P")]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest n for exact enumeration.
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    cap: usize,
}

impl MethodArgs {
    fn method(&self) -> ShapleyMethod {
        match self.sample {
            Some(permutations) => ShapleyMethod::Sampled { permutations, seed: self.seed },
            None => ShapleyMethod::Exact { cap: self.cap },
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum MetricArg {
    Edit,
    Hamming,
    Euclidean,
    Precomputed,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Edit => Metric::Edit,
            MetricArg::Hamming => Metric::Hamming,
            MetricArg::Euclidean => Metric::Euclidean,
            MetricArg::Precomputed => Metric::Precomputed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum InputKind {
    Strings,
    Vectors,
    Matrix,
    Edges,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum FamilyKind {
    Complete,
    Cycle,
    Wheel,
    Star,
    Path,
    Bipartite,
    Er,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or("expected A:B")?;
    let a: usize = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: usize = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a > b {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok((a, b))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.to_owned(), source })
}

enum Loaded {
    Points(LabeledPointSet),
    Graph(shapley_homology::NeighborComplex),
}

fn load(input: &InputArgs) -> Result<Loaded, CliError> {
    let kind = input.input_kind.unwrap_or(match input.metric {
        MetricArg::Edit | MetricArg::Hamming => InputKind::Strings,
        MetricArg::Euclidean => InputKind::Vectors,
        MetricArg::Precomputed => InputKind::Matrix,
    });
    let text = read(&input.input)?;
    Ok(match kind {
        InputKind::Strings => Loaded::Points(parse_strings(&text)?),
        InputKind::Vectors => Loaded::Points(parse_vectors(&text)?),
        InputKind::Matrix => Loaded::Points(LabeledPointSet::precomputed(parse_matrix(&text)?)?),
        InputKind::Edges => Loaded::Graph(parse_edge_list(&text)?),
    })
}

fn warn_cap(method: &MethodArgs) {
    if method.sample.is_none() && method.cap > DEFAULT_EXACT_CAP {
        eprintln!(
            "warning: exact enumeration above n = {DEFAULT_EXACT_CAP} costs O(n^3 2^n) time and 2^n bytes; \
             --cap is clamped to 26"
        );
    }
}

fn family_spec(kind: FamilyKind, n: usize, m: Option<usize>, p: Option<f64>, seed: u64) -> Result<FamilySpec, CliError> {
    Ok(match kind {
        FamilyKind::Complete => FamilySpec::Complete { n },
        FamilyKind::Cycle => FamilySpec::Cycle { n },
        FamilyKind::Wheel => FamilySpec::Wheel { n },
        FamilyKind::Star => FamilySpec::Star { n },
        FamilyKind::Path => FamilySpec::Path { n },
        FamilyKind::Bipartite => {
            FamilySpec::CompleteBipartite { m: m.ok_or_else(|| CliError::Usage("--kind bipartite needs --m".into()))?, n }
        }
        FamilyKind::Er => {
            FamilySpec::ErdosRenyi { n, p: p.ok_or_else(|| CliError::Usage("--kind er needs --p".into()))?, seed }
        }
    })
}

fn payload(command: &Command) -> Result<Payload, CliError> {
    match command {
        Command::Influence { input, radius, method } => {
            warn_cap(method);
            let profile = match load(input)? {
                Loaded::Points(points) => run_influence(&points, input.metric.into(), *radius, &method.method())?,
                Loaded::Graph(graph) => complex_influence(&graph, &method.method())?,
            };
            Ok(Payload::Profile { profile })
        }
        Command::Sweep { input, radii, method } => {
            warn_cap(method);
            match load(input)? {
                Loaded::Points(points) => {
                    Ok(Payload::Sweep { profiles: radius_sweep(&points, input.metric.into(), radii, &method.method())? })
                }
                Loaded::Graph(_) => Err(CliError::Usage("sweep needs samples, not an edge list".into())),
            }
        }
        Command::Family { kind, n, m, p, method } => {
            warn_cap(method);
            let spec = family_spec(*kind, *n, *m, *p, method.seed)?;
            let graph = make_family(&spec)?;
            let closed = spec.is_analytic().then(|| closed_form(&spec)).transpose()?;
            // Enumerate whenever it is feasible so both sides can be compared.
            let profile = match method.method() {
                ShapleyMethod::Exact { cap } if graph.len() > cap.min(shapley_homology::shapley::HARD_EXACT_CAP) => {
                    if closed.is_none() {
                        return Err(Error::SizeCap { n: graph.len(), cap }.into());
                    }
                    None
                }
                m => Some(complex_influence(&graph, &m)?),
            };
            Ok(Payload::Family {
                family: spec.to_string(),
                closed_form_entropy: closed.as_ref().map(|c| c.entropy),
                closed_form: closed.as_ref().map(RoleRow::rows),
                profile,
            })
        }
        Command::Identities { n_max, m_max } => {
            Ok(Payload::Identities { report: verify_appendix_identities(*n_max, *m_max)? })
        }
        Command::Grammar { g, len, range, neg, radius, method } => {
            let dfa = builtin_grammar(*g)?;
            let (a, b) = match (len, range) {
                (Some(l), _) => (*l, *l),
                (None, Some(r)) => *r,
                (None, None) => return Err(CliError::Usage("grammar needs --len or --range".into())),
            };
            let strings = labeled_strings(&dfa, a..=b, *neg);
            let profile = radius.map(|r| dfa_entropy(&dfa, a, r, &method.method())).transpose()?;
            Ok(Payload::Grammar { grammar: *g, strings, profile })
        }
        Command::Mask { count, j, seed, n_min, n_max, p_min, p_max } => {
            let cfg = EnsembleConfig {
                count: *count,
                n_min: *n_min,
                n_max: *n_max,
                p_min: *p_min,
                p_max: *p_max,
                seed: *seed,
                ..Default::default()
            };
            let dataset = generate_er_dataset(&cfg)?;
            Ok(Payload::Masking { report: run_masking_experiment(&dataset, j, *seed, &ShapleyMethod::default())? })
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.output.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
    }
    let payload = payload(&cli.command)?;
    let envelope = ReportEnvelope::new(&cli.command, payload);
    let bytes = report::render(&envelope, cli.output.format, cli.output.bits).map_err(CliError::Write)?;
    match &cli.output.output {
        Some(path) => std::fs::write(path, bytes).map_err(|e| CliError::Write(format!("{}: {e}", path.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(&bytes).map_err(|e| CliError::Write(e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
