//! Experiment CLI: probability sweeps for the plain and rainbow embedding
//! pipelines, target generation, and class-membership validation. Sweeps are
//! deterministic per (config, seed) and emit a fixed-schema CSV; the exit
//! code reflects whether the run completed, not how many trials succeeded.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spanembed::density::max_density;
use spanembed::girth::{girth, Girth};
use spanembed::graph::{load_edge_list, save_edge_list, write_edge_list};
use spanembed::partition::{partition_general, partition_girth7, validate_partition};
use spanembed::random::RandomSource;
use spanembed::sweep::{
    parse_eps, parse_p_grid, run_sweep, summarize, write_csv, ExperimentConfig, Mode, TargetSpec,
};
use spanembed::target::{generate_target, TargetFamily};

#[derive(Parser)]
#[command(
    name = "spanembed",
    version,
    about = "Seeded embedding experiments on random graphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the layered embedding pipeline over a probability grid
    EmbedSweep(SweepArgs),
    /// Sweep the rainbow (colored, two-host) pipeline over a probability grid
    RainbowSweep(SweepArgs),
    /// Generate one target graph and write its edge list
    GenTarget(GenArgs),
    /// Check a target against its class bounds and try to partition it
    Validate(ValidateArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// JSON config file; when given, the other flags are ignored (the file's
    /// mode must match the subcommand)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Target size (ignored for file targets)
    #[arg(long, default_value_t = 400)]
    n: usize,
    /// Maximum degree bound Δ of the target class
    #[arg(long, default_value_t = 4)]
    delta: usize,
    /// Density bound d of the target class
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Top-layer fraction, as a decimal or fraction (e.g. 0.1 or 1/10)
    #[arg(long, default_value = "0.1")]
    eps: String,
    /// Color surplus for rainbow mode: c = ⌈(1+alpha)·|E|⌉
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Probability grid a:b:step, inclusive
    #[arg(long, default_value = "0.1:0.9:0.1")]
    p_grid: String,
    /// Trials per grid point
    #[arg(long, default_value_t = 30)]
    trials: usize,
    /// Base seed; every trial stream is derived from it with stage labels
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Target family (spanning_tree | bounded_density | girth7_subdivided)
    /// or file:PATH with a fixed edge list
    #[arg(long, default_value = "spanning_tree")]
    target: String,
    /// CSV output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall times in the ms column (breaks byte-identical reruns)
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct GenArgs {
    /// Target family (spanning_tree | bounded_density | girth7_subdivided)
    #[arg(long)]
    family: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    delta: usize,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Edge-list output path; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// Target family or file:PATH
    #[arg(long)]
    target: String,
    /// Target size for family targets
    #[arg(long, default_value_t = 400)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    delta: usize,
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Top-layer fraction for the partition check
    #[arg(long, default_value = "0.1")]
    eps: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn build_config(args: &SweepArgs, mode: Mode) -> Result<ExperimentConfig, String> {
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let cfg: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        if cfg.mode != mode {
            return Err(format!(
                "config mode {:?} does not match the subcommand",
                cfg.mode
            ));
        }
        return Ok(cfg);
    }
    Ok(ExperimentConfig {
        mode,
        target: TargetSpec::parse(&args.target)?,
        n: args.n,
        delta: args.delta,
        d: args.d,
        eps: parse_eps(&args.eps)?,
        alpha: args.alpha,
        p_grid: parse_p_grid(&args.p_grid)?,
        trials: args.trials,
        seed: args.seed,
        timing: args.timing,
        out: args.out.as_ref().map(|p| p.display().to_string()),
    })
}

fn sweep_command(args: &SweepArgs, mode: Mode) -> Result<(), String> {
    let cfg = build_config(args, mode)?;
    let rows = run_sweep(&cfg)?;
    let csv = write_csv(&rows);
    let out = args
        .out
        .clone()
        .or_else(|| cfg.out.as_ref().map(PathBuf::from));
    let summary_lines: Vec<String> = summarize(&rows)
        .into_iter()
        .map(|(p, frac)| format!("p={p} success={frac:.3}"))
        .collect();
    match out {
        Some(path) => {
            fs::write(&path, csv).map_err(|e| format!("{}: {e}", path.display()))?;
            println!("wrote {} rows to {}", rows.len(), path.display());
            for line in summary_lines {
                println!("{line}");
            }
        }
        None => {
            print!("{csv}");
            for line in summary_lines {
                eprintln!("{line}");
            }
        }
    }
    Ok(())
}

fn gen_target_command(args: &GenArgs) -> Result<(), String> {
    let family = TargetFamily::parse(&args.family)
        .ok_or_else(|| format!("unknown family {:?}", args.family))?;
    let src = RandomSource::new(args.seed).derive("target");
    let g = generate_target(family, args.n, args.delta, args.d, &src).map_err(|e| e.to_string())?;
    eprintln!(
        "{}: n={} m={} max_degree={} density={}",
        family.name(),
        g.n(),
        g.edge_count(),
        g.max_degree(),
        max_density(&g)
    );
    match &args.out {
        Some(path) => save_edge_list(path, &g).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{}", write_edge_list(&g));
            Ok(())
        }
    }
}

fn validate_command(args: &ValidateArgs) -> Result<bool, String> {
    let spec = TargetSpec::parse(&args.target)?;
    let (g, family) = match &spec {
        TargetSpec::File(path) => (
            load_edge_list(path.as_ref()).map_err(|e| format!("{path}: {e}"))?,
            None,
        ),
        TargetSpec::Family(fam) => {
            let src = RandomSource::new(args.seed).derive("target");
            (
                generate_target(*fam, args.n, args.delta, args.d, &src)
                    .map_err(|e| e.to_string())?,
                Some(*fam),
            )
        }
    };
    let eps = parse_eps(&args.eps)?;
    let mut all_ok = true;
    let mut check = |name: &str, ok: bool, detail: String| {
        println!("{name}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
        all_ok &= ok;
    };

    let dmax = g.max_degree();
    check("max_degree", dmax <= args.delta, format!("{dmax} ≤ {}", args.delta));
    let density = max_density(&g);
    check(
        "density",
        density <= num_rational::Ratio::from_integer(args.d as i64),
        format!("{density} ≤ {}", args.d),
    );
    let girth7 = family == Some(TargetFamily::Girth7Subdivided);
    let gg = girth(&g);
    if girth7 {
        check("girth", gg >= Girth::Finite(7), format!("{gg:?} ≥ 7"));
    } else {
        println!("girth: {gg:?}");
    }
    let part = if girth7 {
        partition_girth7(&g, args.delta, args.d, eps)
    } else {
        partition_general(&g, args.delta, args.d, eps)
    };
    match part {
        Ok(part) => {
            let report = validate_partition(&g, &part);
            check(
                "partition",
                report.passes(),
                format!(
                    "depth t*={}, top layer {} vertices, {} defects",
                    part.effective_depth(),
                    part.wt().len(),
                    report.failures().len()
                ),
            );
        }
        Err(e) => check("partition", false, e.to_string()),
    }
    Ok(all_ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Command::EmbedSweep(args) => sweep_command(args, Mode::Embed).map(|()| true),
        Command::RainbowSweep(args) => sweep_command(args, Mode::Rainbow).map(|()| true),
        Command::GenTarget(args) => gen_target_command(args).map(|()| true),
        Command::Validate(args) => validate_command(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
