use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use ffcx_core::verify::{
    self, error_exit_code, exit_code, markdown_detail, markdown_table, run_campaign, Cache, Campaign, CampaignOptions,
    Expect, Params, Registry, Tier, Verifier, EXIT_INVALID,
};

#[derive(Parser)]
#[command(name = "verify", version, about = "Exact verification of rank and Betti number bounds for small free complexes")]
struct Cli {
    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Total homology of cone(λ_z) over k[t]/(t^a) against 2^r.
    Carlsson(RunArgs),
    /// Total rank of a minimal complex over a polynomial ring against 2^r.
    Rank(RunArgs),
    /// Rank of a free flag differential module against 2^r.
    DifferentialModule(RunArgs),
    /// Fiber rank of a semifree DG module against 2^d.
    Trc(RunArgs),
    /// Betti degree over a complete intersection against 2^(c-1).
    BettiDegree(RunArgs),
    /// Kernel and cokernel of λ_w on an exterior algebra against 2^d.
    Lefschetz(RunArgs),
    /// Growth of the central binomial totals against the base 2.
    Growth(RunArgs),
    /// Run every entry of a TOML or JSON campaign file.
    Campaign(CampaignArgs),
    /// List the registered verifiers.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Out {
    Json,
    Md,
}

#[derive(Clone, Copy, ValueEnum)]
enum TierArg {
    Fast,
    Slow,
}

impl From<TierArg> for Tier {
    fn from(t: TierArg) -> Self {
        match t {
            TierArg::Fast => Tier::Fast,
            TierArg::Slow => Tier::Slow,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpectArg {
    Counterexample,
    Bound,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "md")]
    out: Out,
    /// Directory for cached reports.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Leave wall-clock timings out of the report.
    #[arg(long)]
    no_timings: bool,
    #[arg(long, value_enum, default_value = "fast")]
    tier: TierArg,
}

#[derive(Args)]
struct RunArgs {
    /// Characteristic of the field (0 for the rationals).
    #[arg(long = "p", alias = "char", value_name = "P", conflicts_with = "char0")]
    p: Option<u64>,
    /// Work over the rationals.
    #[arg(long)]
    char0: bool,
    /// Number of variables or generators.
    #[arg(long = "r", visible_aliases = ["d", "e"], value_name = "R")]
    r: Option<usize>,
    /// Number of hyperbolic pairs (lefschetz) or largest n (growth).
    #[arg(long)]
    n: Option<usize>,
    /// One exponent for every variable, or a comma-separated list.
    #[arg(long, value_delimiter = ',')]
    exponents: Option<Vec<u32>>,
    /// Disjoint pairs of 0-based variable indices, e.g. `0:1,2:3`.
    #[arg(long, value_delimiter = ',', value_parser = parse_pair)]
    pairs: Option<Vec<(usize, usize)>>,
    /// Use the first M consecutive pairs.
    #[arg(long, value_name = "M")]
    pairing: Option<usize>,
    /// Resolution length.
    #[arg(long, value_name = "N")]
    truncate: Option<usize>,
    /// Internal-degree cutoff for graded homology.
    #[arg(long, value_name = "N", allow_hyphen_values = true)]
    cutoff: Option<i64>,
    /// Characteristic-2 survey size (0 for exhaustive).
    #[arg(long)]
    survey: Option<usize>,
    #[arg(long, value_enum)]
    expect: Option<ExpectArg>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CampaignArgs {
    config: PathBuf,
    /// Also write campaign.md and campaign.json here.
    #[arg(long)]
    report_dir: Option<PathBuf>,
    /// Run entries one after another.
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got {s:?}"))?;
    let a = a.trim().parse().map_err(|_| format!("bad index in {s:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad index in {s:?}"))?;
    Ok((a, b))
}

impl RunArgs {
    fn params(&self) -> Params {
        Params {
            p: if self.char0 { Some(0) } else { self.p },
            r: self.r,
            n: self.n,
            exponents: self.exponents.clone(),
            pairs: self.pairs.clone(),
            pairing: self.pairing,
            truncate: self.truncate,
            cutoff: self.cutoff,
            survey: self.survey,
            tier: self.output.tier.into(),
        }
    }

    fn expect(&self) -> Option<Expect> {
        self.expect.map(|e| match e {
            ExpectArg::Counterexample => Expect::Counterexample,
            ExpectArg::Bound => Expect::Bound,
        })
    }
}

fn open_cache(dir: &Option<PathBuf>) -> anyhow::Result<Option<Cache>> {
    dir.as_ref()
        .map(|d| Cache::open(d).with_context(|| format!("opening cache {}", d.display())))
        .transpose()
}

fn fail(e: &ffcx_core::Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(error_exit_code(e) as u8)
}

fn run_single(registry: &Registry, name: &str, args: &RunArgs) -> anyhow::Result<ExitCode> {
    let params = args.params();
    let v: &dyn Verifier = match registry.get(name) {
        Ok(v) => v,
        Err(e) => return Ok(fail(&e)),
    };
    let resolved = match verify::prepare(registry, name, &params) {
        Ok(r) => r,
        Err(e) => return Ok(fail(&e)),
    };
    if v.required_tier(&resolved) == Tier::Slow {
        eprintln!("slow-tier run, estimated {}", v.estimate(&resolved));
    }
    let cache = open_cache(&args.output.cache_dir)?;
    let report = match verify::run_one(registry, name, &params, cache.as_ref(), !args.output.no_timings) {
        Ok(r) => r,
        Err(e) => return Ok(fail(&e)),
    };
    match args.output.out {
        Out::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Out::Md => print!("{}", markdown_detail(&report)),
    }
    Ok(ExitCode::from(exit_code(report.verdict, args.expect()) as u8))
}

fn run_campaign_cmd(registry: &Registry, args: &CampaignArgs) -> anyhow::Result<ExitCode> {
    let campaign = match Campaign::load(&args.config) {
        Ok(c) => c,
        Err(e) => return Ok(fail(&e)),
    };
    let opts = CampaignOptions {
        tier: args.output.tier.into(),
        cache: open_cache(&args.output.cache_dir)?,
        timings: !args.output.no_timings,
        parallel: !args.sequential,
    };
    let report = run_campaign(registry, &campaign, &opts);
    let mut md = markdown_table(report.reports());
    for e in report.entries.iter().filter(|e| e.error.is_some()) {
        md.push_str(&format!("\n- {} failed: {}", e.name, e.error.as_deref().unwrap_or_default()));
    }
    for (e, code) in report.entries.iter().map(|e| (e, e.exit_code)).filter(|(e, c)| *c != 0 && e.report.is_some()) {
        md.push_str(&format!("\n- {} exited with {code}", e.name));
    }
    if !report.skipped.is_empty() {
        md.push_str(&format!("\n- skipped (slow tier): {}", report.skipped.join(", ")));
    }
    md.push('\n');
    let json = serde_json::to_string_pretty(&report)?;
    if let Some(dir) = &args.report_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("campaign.md"), &md)?;
        std::fs::write(dir.join("campaign.json"), &json)?;
    }
    match args.output.out {
        Out::Json => println!("{json}"),
        Out::Md => print!("{md}"),
    }
    Ok(ExitCode::from(report.exit_code as u8))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID as u8 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    env_logger::Builder::new()
        .filter_level(if cli.verbose { log::LevelFilter::Info } else { log::LevelFilter::Warn })
        .init();
    let registry = Registry::standard();
    let result = match &cli.command {
        Command::Carlsson(a) => run_single(&registry, "carlsson", a),
        Command::Rank(a) => run_single(&registry, "rank", a),
        Command::DifferentialModule(a) => run_single(&registry, "differential-module", a),
        Command::Trc(a) => run_single(&registry, "trc", a),
        Command::BettiDegree(a) => run_single(&registry, "betti-degree", a),
        Command::Lefschetz(a) => run_single(&registry, "lefschetz", a),
        Command::Growth(a) => run_single(&registry, "growth", a),
        Command::Campaign(a) => run_campaign_cmd(&registry, a),
        Command::List => {
            for name in registry.names() {
                println!("{name:22} {}", registry.get(name).map(|v| v.summary()).unwrap_or_default());
            }
            Ok(ExitCode::SUCCESS)
        }
    };
    match result {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
