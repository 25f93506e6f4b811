use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use snc_core::absolute::{ProcessNoiseCov, Psd3, Representation};
use snc_core::harness::validate::ValidatedModel;
use snc_core::harness::{
    emit_results, run_validation, sweep_absolute_with, sweep_relative_with, AbsModel, PsdScenario, RelModel,
    ScenarioConfig, SweepResult, SweepTiming,
};
use snc_core::orbit::{equinoctial_to_cartesian, EquinoctialState, GravParam};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "snc", version, about = "Process noise covariance models for orbit estimation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one absolute model for one state and interval.
    ComputeQ(ComputeQ),
    /// Check every closed-form model against quadrature of its own integral.
    Validate {
        #[arg(long, default_value_t = 50)]
        cases: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tolerance: f64,
    },
    /// Absolute-state eccentricity sweep.
    SweepAbs(SweepArgs),
    /// Relative-state separation sweep.
    SweepRel(SweepArgs),
    /// Run both sweeps and write all CSV files plus the manifest.
    Emit(SweepArgs),
    /// Print the default scenario configuration as JSON.
    DefaultConfig,
}

#[derive(Clone, Copy, ValueEnum)]
enum Units {
    M,
    Km,
}

impl Units {
    fn length(self) -> f64 {
        match self {
            Units::M => 1.0,
            Units::Km => 1e3,
        }
    }
}

#[derive(Args)]
struct ComputeQ {
    /// kinematic, hcw, cartesian-sub<N>, small-dt, circular or equinoctial-sub<N>.
    #[arg(long)]
    model: AbsModel,
    /// Equinoctial elements a,f,g,h,k,lambda with a in --units and lambda in degrees.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    elements: Vec<f64>,
    /// Interval length, s.
    #[arg(long)]
    dt: f64,
    /// RTN power spectral density q_r,q_t,q_n in --units squared per s³.
    #[arg(long, value_delimiter = ',', required = true)]
    psd: Vec<f64>,
    #[arg(long, value_enum, default_value = "m")]
    units: Units,
    /// Gravitational parameter in m³/s².
    #[arg(long)]
    mu: Option<f64>,
    /// Also write the result as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Scenario configuration (JSON); defaults are used for missing fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Comma-separated model names overriding the configuration.
    #[arg(long, value_delimiter = ',')]
    models: Vec<String>,
    /// Replace the count of every subinterval model.
    #[arg(long)]
    subintervals: Option<usize>,
    /// Restrict the absolute sweep to one PSD scenario.
    #[arg(long)]
    psd_scenario: Option<PsdScenario>,
    /// Also write per-interval error curves.
    #[arg(long)]
    curves: bool,
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::ComputeQ(args) => compute_q(args),
        Command::Validate { cases, seed, tolerance } => validate(cases, seed, tolerance),
        Command::SweepAbs(args) => sweeps(&args, true, false),
        Command::SweepRel(args) => sweeps(&args, false, true),
        Command::Emit(args) => sweeps(&args, true, true),
        Command::DefaultConfig => {
            println!("{}", ScenarioConfig::default().to_json());
            Ok(())
        }
    }
}

/// Per-diagonal scale from SI to the requested units.
fn unit_scale(repr: Representation, units: Units) -> [f64; 6] {
    let l = units.length();
    match repr {
        Representation::Equinoctial => [l, 1.0, 1.0, 1.0, 1.0, 1.0],
        _ => [l; 6],
    }
}

fn compute_q(args: ComputeQ) -> Result<()> {
    let mu = GravParam::new(args.mu.unwrap_or(snc_core::orbit::MU_EARTH))?;
    if args.elements.len() != 6 || args.psd.len() != 3 {
        bail!("--elements takes 6 comma-separated values and --psd takes 3");
    }
    let l = args.units.length();
    let e = &args.elements;
    let eq = EquinoctialState::new(e[0] * l, e[1], e[2], e[3], e[4], e[5].to_radians(), 0.0)?;
    let psd = Psd3::new(args.psd[0] * l * l, args.psd[1] * l * l, args.psd[2] * l * l)?;
    let q = match args.model {
        AbsModel::Cartesian(m) => m.evaluate(&equinoctial_to_cartesian(&eq, mu)?, &psd, args.dt, mu)?,
        AbsModel::Equinoctial(m) => m.evaluate(&eq, &psd, args.dt, mu)?,
    };
    let scaled = scale(&q, args.units);
    println!("model: {}  representation: {:?}", args.model, q.representation);
    for i in 0..6 {
        let row: Vec<String> = (0..6).map(|j| format!("{:>14.6e}", scaled[(i, j)])).collect();
        println!("{}", row.join(" "));
    }
    if let Some(path) = args.out {
        let rows: Vec<Vec<f64>> = (0..6).map(|i| (0..6).map(|j| scaled[(i, j)]).collect()).collect();
        let json = serde_json::json!({
            "model": args.model.to_string(),
            "representation": q.representation,
            "units": match args.units { Units::M => "m", Units::Km => "km" },
            "dt_s": args.dt,
            "matrix": rows,
        });
        std::fs::write(&path, serde_json::to_string_pretty(&json)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn scale(q: &ProcessNoiseCov, units: Units) -> nalgebra::Matrix6<f64> {
    let s = unit_scale(q.representation, units);
    let mut m = q.matrix;
    for i in 0..6 {
        for j in 0..6 {
            m[(i, j)] /= s[i] * s[j];
        }
    }
    m
}

fn validate(cases: usize, seed: u64, tolerance: f64) -> Result<()> {
    let rep = run_validation(cases, seed)?;
    let mut ok = true;
    for m in ValidatedModel::ALL {
        let err = rep.max_error(m);
        let pass = err <= tolerance;
        ok &= pass;
        println!("{:<10} max rel. Frobenius error {err:.3e}  {}", m.name(), if pass { "ok" } else { "FAIL" });
    }
    if !ok {
        bail!("closed form and quadrature disagree beyond {tolerance:e}");
    }
    Ok(())
}

fn load_config(args: &SweepArgs) -> Result<ScenarioConfig> {
    let mut cfg = match &args.config {
        Some(p) => ScenarioConfig::load(p)?,
        None => ScenarioConfig::default(),
    };
    if let Some(s) = args.psd_scenario {
        cfg.absolute.scenarios = vec![s];
    }
    cfg.validate()?;
    Ok(cfg)
}

fn split_models(names: &[String]) -> Result<(Vec<AbsModel>, Vec<RelModel>)> {
    let (mut abs, mut rel) = (Vec::new(), Vec::new());
    for n in names {
        if let Ok(m) = n.parse::<RelModel>() {
            rel.push(m);
        } else {
            abs.push(n.parse::<AbsModel>()?);
        }
    }
    Ok((abs, rel))
}

fn sweeps(args: &SweepArgs, absolute: bool, relative: bool) -> Result<()> {
    let mut cfg = load_config(args)?;
    let (abs_sel, rel_sel) = split_models(&args.models)?;
    if !abs_sel.is_empty() {
        cfg.absolute.models = abs_sel;
    }
    if !rel_sel.is_empty() {
        cfg.relative.models = rel_sel;
    }
    if let Some(n) = args.subintervals {
        if n == 0 {
            bail!("--subintervals must be at least 1");
        }
        cfg.absolute.models = cfg.absolute.models.iter().map(|m| m.with_subintervals(n)).collect();
    }
    cfg.validate()?;

    let mut results: Vec<SweepResult> = Vec::new();
    let mut timing = Vec::new();
    if absolute {
        let t = Instant::now();
        results.push(sweep_absolute_with(&cfg, &cfg.absolute.models, &cfg.absolute.scenarios)?);
        timing.push(SweepTiming { sweep: results[0].kind, seconds: t.elapsed().as_secs_f64() });
    }
    if relative {
        let t = Instant::now();
        let res = sweep_relative_with(&cfg, &cfg.relative.models)?;
        timing.push(SweepTiming { sweep: res.kind, seconds: t.elapsed().as_secs_f64() });
        results.push(res);
    }
    let manifest = emit_results(&results, &cfg, &timing, &args.out, args.curves)?;
    summarize(&results);
    eprintln!("wrote {} to {} (config {})", manifest.files.join(", "), args.out.display(), &manifest.config_hash[..12]);
    Ok(())
}

fn summarize(results: &[SweepResult]) {
    for res in results {
        let mut seen: Vec<(&str, &str)> = Vec::new();
        for r in &res.records {
            if !seen.contains(&(r.scenario.as_str(), r.model.as_str())) {
                seen.push((r.scenario.as_str(), r.model.as_str()));
            }
        }
        for (scenario, model) in seen {
            let worst = res
                .records
                .iter()
                .filter(|r| r.scenario == scenario && r.model == model)
                .filter(|r| r.metric == snc_core::harness::MetricKind::DeltaMax)
                .filter_map(|r| r.value)
                .fold(0.0, f64::max);
            println!("{:<9} {:<11} {:<22} worst delta_max {worst:.4}", res.kind.name(), scenario, model);
        }
    }
}
