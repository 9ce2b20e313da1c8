mod error;
mod manifest;
mod settings;
mod svg;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rankeval::agreement::agreement_matrix;
use rankeval::formats::{matrix_csv, matrix_metadata, report_text, verdict_csv};
use rankeval::metrics::{catalog, Arity, ErrorScale};
use rankeval::oracle::{self, OracleSubject};
use rankeval::properties::{property_table, RoundingMode, SwapSampling};
use rankeval::{evaluate, evaluate_at_k, EvalConfig, MetricId, Permutation, RelevanceConfig};

use crate::error::{CliError, CliResult};
use crate::manifest::RunManifest;
use crate::settings::{parse_metrics, parse_properties, AgreementSettings, Env, PropertySettings};

/// Ranking evaluation metrics on the symmetric group.
#[derive(Debug, Parser)]
#[command(name = "rankeval", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the metric registry.
    List,
    /// Evaluate one metric on a pair of rankings.
    Eval(EvalArgs),
    /// Estimate pairwise agreement ratios and render the heatmap.
    Agreement(AgreementArgs),
    /// Check metrics against the formal properties.
    Properties(PropertyArgs),
    /// Run a brute-force oracle on a small symmetric group.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
struct EvalArgs {
    metric: MetricId,
    /// Reference ranking, inline ("2,1,3") or a file holding one line.
    /// Defaults to the identity.
    #[arg(long)]
    sigma: Option<String>,
    /// Compared ranking, inline or a file.
    #[arg(long)]
    tau: String,
    /// Evaluate on the top-k prefixes.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    relevant: Option<usize>,
    #[arg(long)]
    retrieved: Option<usize>,
    /// Divide MSE/MAE sums by n.
    #[arg(long)]
    mean_errors: bool,
    /// F-score weight.
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    /// Also write a run manifest to this path.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AgreementArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Number of sampled rankings.
    #[arg(long)]
    samples: Option<usize>,
    /// Number of sampled ranking pairs.
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    relevant: Option<usize>,
    #[arg(long)]
    retrieved: Option<usize>,
    /// Comma-separated names, "catalog" (default) or "all".
    #[arg(long)]
    metrics: Option<String>,
    #[arg(long)]
    mean_errors: bool,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value = "agreement.csv")]
    out_csv: PathBuf,
    #[arg(long, default_value = "agreement.svg")]
    out_svg: PathBuf,
    #[arg(long, default_value = "agreement.meta")]
    meta: PathBuf,
    #[arg(long, default_value = "agreement.manifest")]
    manifest: PathBuf,
    /// Worker threads; 0 uses every core. Never changes output bytes.
    #[arg(long)]
    workers: Option<usize>,
    /// `key = value` settings file or a previous run manifest.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PropertyArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Sampled ranking pairs for robustness-I, stability and agreement bounds.
    #[arg(long)]
    pairs: Option<usize>,
    /// Sampled triples for robustness-II.
    #[arg(long)]
    triples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated names or "all" (default).
    #[arg(long)]
    properties: Option<String>,
    /// Comma-separated names, "catalog" (default) or "all".
    #[arg(long)]
    metrics: Option<String>,
    /// Size for the ioi, symmetry, wsd and sensitivity searches.
    #[arg(long)]
    exhaustive_n: Option<usize>,
    #[arg(long)]
    exhaustive_ioi: Option<usize>,
    #[arg(long)]
    exhaustive_symmetry: Option<usize>,
    #[arg(long)]
    exhaustive_wsd: Option<usize>,
    #[arg(long)]
    exhaustive_sensitivity: Option<usize>,
    #[arg(long)]
    exhaustive_distance: Option<usize>,
    /// Swaps per pair for robustness-I, or "all".
    #[arg(long)]
    swap_samples: Option<SwapSampling>,
    /// "truncate" or "half".
    #[arg(long)]
    rounding: Option<RoundingMode>,
    #[arg(long)]
    relevant: Option<usize>,
    #[arg(long)]
    retrieved: Option<usize>,
    #[arg(long)]
    mean_errors: bool,
    #[arg(long)]
    beta: Option<f64>,
    /// Output directory for verdicts.csv, report.txt and manifest.txt.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    subject: OracleSubject,
    /// Group size; defaults to 7, 10, 4 and 8 for dcg-ioi, kendall-swap,
    /// distance-axioms and wsd.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    manifest: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("rankeval: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> CliResult<u8> {
    match command {
        Command::List => {
            print!("{}", list());
            Ok(0)
        }
        Command::Eval(args) => eval(args),
        Command::Agreement(args) => agreement(args),
        Command::Properties(args) => properties(args),
        Command::Oracle(args) => run_oracle(args),
    }
}

fn list() -> String {
    let mut out = format!("{:<18} {:<6} {:<6} {:<24} {}\n", "metric", "family", "arity", "orientation", "at_k");
    for d in catalog() {
        let arity = match d.arity {
            Arity::One => "1",
            Arity::Two => "2",
        };
        out.push_str(&format!(
            "{:<18} {:<6} {:<6} {:<24} {}\n",
            d.id.name(),
            d.family.code(),
            arity,
            d.orientation.label(),
            if d.supports_at_k { "yes" } else { "no" }
        ));
    }
    out
}

fn read_permutation(flag: &str, raw: &str) -> CliResult<Permutation> {
    let path = Path::new(raw);
    let text = if path.is_file() {
        fs::read_to_string(path).map_err(|e| CliError::io(path, e))?
    } else {
        raw.to_string()
    };
    text.trim()
        .parse()
        .map_err(|e| CliError::Usage(format!("--{flag} {raw:?}: {e}")))
}

fn eval(args: EvalArgs) -> CliResult<u8> {
    let tau = read_permutation("tau", &args.tau)?;
    let sigma = match &args.sigma {
        Some(s) => read_permutation("sigma", s)?,
        None => Permutation::identity(tau.len())?,
    };
    if sigma.len() != tau.len() {
        return Err(CliError::Usage(format!(
            "--sigma has length {} but --tau has length {}",
            sigma.len(),
            tau.len()
        )));
    }
    let default = RelevanceConfig::default_for(tau.len());
    let relevant = args.relevant.unwrap_or(default.relevant);
    let relevance = RelevanceConfig::new(relevant, args.retrieved.unwrap_or(relevant));
    relevance.validate(tau.len())?;
    let cfg = EvalConfig {
        relevance,
        error_scale: if args.mean_errors { ErrorScale::Mean } else { ErrorScale::Sum },
        f_beta: args.beta,
    };
    let value = match args.k {
        Some(k) => evaluate_at_k(args.metric, &sigma, &tau, k, &cfg)?,
        None => evaluate(args.metric, &sigma, &tau, &cfg)?,
    };
    println!("{value}");
    if let Some(path) = args.manifest {
        let mut config = vec![
            ("metric".to_string(), args.metric.to_string()),
            ("sigma".to_string(), sigma.to_string()),
            ("tau".to_string(), tau.to_string()),
            ("relevant".to_string(), relevance.relevant.to_string()),
            ("retrieved".to_string(), relevance.retrieved.to_string()),
            ("error_scale".to_string(), if args.mean_errors { "mean" } else { "sum" }.to_string()),
            ("f_beta".to_string(), args.beta.to_string()),
        ];
        if let Some(k) = args.k {
            config.push(("k".to_string(), k.to_string()));
        }
        config.push(("value".to_string(), value.to_string()));
        RunManifest::new("eval", config).save(&path)?;
    }
    Ok(0)
}

fn pool(workers: Option<usize>) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
}

fn agreement(args: AgreementArgs) -> CliResult<u8> {
    let mut s = AgreementSettings::builtin(Env::from_process()?);
    if let Some(path) = &args.config {
        s.load(path)?;
    }
    if let Some(v) = args.n {
        s.n = v;
    }
    if let Some(v) = args.samples {
        s.samples = v;
    }
    if let Some(v) = args.pairs {
        s.pairs = v;
    }
    if let Some(v) = args.seed {
        s.seed = v;
    }
    if let Some(v) = args.relevant {
        s.relevant = Some(v);
    }
    if let Some(v) = args.retrieved {
        s.retrieved = Some(v);
    }
    if let Some(v) = &args.metrics {
        s.metrics = parse_metrics(v)?;
    }
    if args.mean_errors {
        s.error_scale = ErrorScale::Mean;
    }
    if let Some(v) = args.beta {
        s.f_beta = v;
    }
    if let Some(v) = args.workers {
        s.workers = Some(v);
    }
    let cfg = s.to_config()?;
    let matrix = pool(s.workers)?.install(|| agreement_matrix(&s.metrics, &cfg))?;
    let mut manifest = RunManifest::new("agreement", s.canonical());
    manifest.write_output("csv", &args.out_csv, matrix_csv(&matrix).as_bytes())?;
    manifest.write_output("meta", &args.meta, matrix_metadata(&matrix, &cfg).as_bytes())?;
    manifest.write_output("svg", &args.out_svg, svg::heatmap(&matrix).as_bytes())?;
    manifest.save(&args.manifest)?;
    println!(
        "{} metrics, {} rankings, {} pairs: wrote {}, {}, {}, {}",
        matrix.len(),
        cfg.sample_rankings,
        cfg.sample_pairs,
        args.out_csv.display(),
        args.meta.display(),
        args.out_svg.display(),
        args.manifest.display()
    );
    Ok(0)
}

fn properties(args: PropertyArgs) -> CliResult<u8> {
    let mut s = PropertySettings::builtin(Env::from_process()?);
    if let Some(path) = &args.config {
        s.load(path)?;
    }
    let p = &mut s.protocol;
    if let Some(v) = args.n {
        p.n = v;
    }
    if let Some(v) = args.pairs {
        p.pair_count = v;
    }
    if let Some(v) = args.triples {
        p.triples = v;
    }
    if let Some(v) = args.seed {
        p.seed = v;
    }
    if let Some(v) = args.exhaustive_n {
        p.exhaustive.ioi = v;
        p.exhaustive.symmetry = v;
        p.exhaustive.wsd = v;
        p.exhaustive.sensitivity = v;
    }
    for (flag, slot) in [
        (args.exhaustive_ioi, &mut p.exhaustive.ioi),
        (args.exhaustive_symmetry, &mut p.exhaustive.symmetry),
        (args.exhaustive_wsd, &mut p.exhaustive.wsd),
        (args.exhaustive_sensitivity, &mut p.exhaustive.sensitivity),
        (args.exhaustive_distance, &mut p.exhaustive.distance),
    ] {
        if let Some(v) = flag {
            *slot = v;
        }
    }
    if let Some(v) = args.swap_samples {
        p.swap_samples = v;
    }
    if let Some(v) = args.rounding {
        p.rounding = v;
    }
    if args.relevant.is_some() || args.retrieved.is_some() {
        let relevant = args
            .relevant
            .or(p.relevance.map(|r| r.relevant))
            .or(args.retrieved)
            .unwrap_or(1);
        p.relevance = Some(RelevanceConfig::new(relevant, args.retrieved.unwrap_or(relevant)));
    }
    if args.mean_errors {
        p.error_scale = ErrorScale::Mean;
    }
    if let Some(v) = args.beta {
        p.f_beta = v;
    }
    if let Some(v) = &args.metrics {
        s.metrics = parse_metrics(v)?;
    }
    if let Some(v) = &args.properties {
        s.properties = parse_properties(v)?;
    }
    if let Some(v) = args.workers {
        s.workers = Some(v);
    }
    s.protocol.validate()?;
    let grid = pool(s.workers)?.install(|| property_table(&s.metrics, &s.properties, &s.protocol));
    fs::create_dir_all(&args.out).map_err(|e| CliError::io(&args.out, e))?;
    let verdicts = verdict_csv(&grid);
    let mut manifest = RunManifest::new("properties", s.canonical());
    manifest.write_output("verdicts", &args.out.join("verdicts.csv"), verdicts.as_bytes())?;
    manifest.write_output("report", &args.out.join("report.txt"), report_text(&grid).as_bytes())?;
    manifest.save(&args.out.join("manifest.txt"))?;
    print!("{verdicts}");
    Ok(0)
}

fn run_oracle(args: OracleArgs) -> CliResult<u8> {
    let n = args.n.unwrap_or(match args.subject {
        OracleSubject::DcgIoi => 7,
        OracleSubject::KendallSwap => 10,
        OracleSubject::DistanceAxioms => 4,
        OracleSubject::Wsd => 8,
    });
    let mut cfg = rankeval::ProtocolConfig::default();
    if let Some(seed) = Env::from_process()?.seed {
        cfg.seed = seed;
    }
    let report = oracle::run(args.subject, n, &cfg)?;
    print!("{report}");
    if let Some(path) = args.manifest {
        let config = vec![
            ("subject".to_string(), args.subject.to_string()),
            ("n".to_string(), n.to_string()),
            ("passed".to_string(), report.passed.to_string()),
        ];
        RunManifest::new("oracle", config).save(&path)?;
    }
    Ok(if report.passed { 0 } else { 1 })
}
