use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use lorgh::cauchy::{
    build_cauchy_time, chain_diamond_metric, default_connect_radius, intrinsify, level_set_family, noldus_metric,
    CauchySubset,
};
use lorgh::experiments::{precompactness_predicates, run_experiment, ExperimentSpec, PrecompactOptions, Tolerances};
use lorgh::gh::{ghdist_minus, ghdist_plus, AnnealParams, GhMode, DEFAULT_BUDGET};
use lorgh::io::{metric_rows, read_space_file, write_json, write_matrix_csv, SpaceFile};
use lorgh::mcs::{dm_dimension, reconstruct_pom, DmField, DmOptions, DEFAULT_NOISE_FLOOR};
use lorgh::models::{causal_cylinder, circle_net, lattice, lattice_nd, product, sprinkle_coords, minkowski_space, Region};
use lorgh::orderdim::{blumenthal_dim, dushnik_miller, horismoticity, min_catcher, Relations, Sign, DM_MAX_POINTS};
use lorgh::pom::{d_r, detect_matrix, Cones};
use lorgh::space::{derived_causal, validate_lorentz, FiniteLorentzSpace, FiniteMetricSpace};
use lorgh::DEFAULT_TOL;

/// Finite models of synthetic Lorentzian geometry.
///
/// Exit status is 0 when every declared tolerance or audit is met, 1 when
/// a check fails and 2 on errors.
#[derive(Parser)]
#[command(name = "lorgh", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a model space.
    Gen(GenArgs),
    /// Check the axioms of a space.
    Validate {
        space: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Lorentzian GH distance between two spaces.
    Ghdist(GhArgs),
    /// The D_r metric family.
    Drfamily {
        space: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-1,-0.5,0,0.5,1")]
        r: Vec<f64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Chronology detected from the measure, as a 0/1 CSV matrix.
    Detect {
        space: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Dimension estimators.
    ///
    /// The minimal dimension itself is a supremum over all open sets and
    /// embeddings and is not computed; only the listed estimators and
    /// witness checks are available.
    Dim(DimArgs),
    /// Rebuild sigma from an ordered measure space.
    Reconstruct {
        pom: PathBuf,
        /// Dimension used by the length estimate.
        #[arg(long, default_value_t = 2.0)]
        dm: f64,
        #[arg(long, default_value_t = DEFAULT_NOISE_FLOOR)]
        noise_floor: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Metrics and time functions on Cauchy subsets.
    Cauchy {
        #[command(subcommand)]
        cmd: CauchyCmd,
    },
    /// Run a named experiment from a JSON spec.
    RunExperiment {
        spec: PathBuf,
        /// Output directory; overrides the spec.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        tolerances: Option<PathBuf>,
    },
    /// Precompactness conditions on a family of spaces.
    Precompact {
        #[arg(required = true)]
        spaces: Vec<PathBuf>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        diam_bound: Option<f64>,
        #[arg(long)]
        n_bound: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Sprinkle,
    Lattice,
    Cylinder,
    Product,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegionName {
    Diamond,
    Slab,
    Box,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    model: Model,
    /// Spacetime dimension.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, value_enum, default_value = "diamond")]
    region: RegionName,
    /// Diamond height, slab half-height, or box half-extent.
    #[arg(long, default_value_t = 1.0)]
    size: f64,
    /// Spatial half-width of a slab.
    #[arg(long, default_value_t = 1.0)]
    half_width: f64,
    #[arg(long, default_value_t = 100.0)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Lattice resolution, or circle net size for cylinders and products.
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = 1.0)]
    s: f64,
    /// Cylinder times.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,0.5,1,1.5,2")]
    times: Vec<f64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GhSide {
    Minus,
    Plus,
}

#[derive(Clone, Copy, ValueEnum)]
enum GhMethod {
    Exact,
    Anneal,
}

#[derive(Args)]
struct GhArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long, value_enum, default_value = "minus")]
    mode: GhSide,
    #[arg(long, value_enum, default_value = "exact")]
    method: GhMethod,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: f64,
    #[arg(long, default_value_t = 100_000)]
    steps: u64,
    #[arg(long, default_value_t = 0.999)]
    cooling: f64,
    #[arg(long, default_value_t = 4)]
    chains: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DimMethod {
    Dm,
    Dushnik,
    Horismoticity,
    Catcher,
    Blumenthal,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Args)]
struct DimArgs {
    space: PathBuf,
    #[arg(long, value_enum, default_value = "dm")]
    method: DimMethod,
    #[arg(long, default_value_t = 0)]
    point: usize,
    #[arg(long, default_value_t = 5)]
    levels: usize,
    /// Largest witness set or realizer searched.
    #[arg(long, default_value_t = 4)]
    max: usize,
    /// Four points for the catcher method.
    #[arg(long, value_delimiter = ',')]
    quad: Vec<usize>,
    #[arg(long, value_enum, default_value = "plus")]
    sign: SignArg,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SurfaceArgs {
    space: PathBuf,
    /// JSON `{"points": [...]}` naming the Cauchy subset.
    #[arg(long)]
    surface: Option<PathBuf>,
    /// Build the subset from the level of the first label coordinate.
    #[arg(long, allow_hyphen_values = true)]
    at_time: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Subcommand)]
enum CauchyCmd {
    /// Noldus metric, optionally intrinsified.
    Noldus {
        space: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// Intrinsify with this connect radius (`auto` picks one).
        #[arg(long)]
        intrinsify: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Chain-of-diamonds metric on the subset.
    Ds {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long)]
        intrinsify: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Time function vanishing on the subset, with its audits.
    Timefn {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Level sets of a time function and their GH profile.
    Levels {
        space: PathBuf,
        /// JSON array of time values.
        #[arg(long)]
        time: PathBuf,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        levels: Vec<f64>,
        #[arg(long, default_value_t = 0.05)]
        band: f64,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn emit_json<T: Serialize>(output: Option<&Path>, value: &T) -> Result<()> {
    match output {
        Some(p) => write_json(p, value)?,
        None => writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(value)?)?,
    }
    Ok(())
}

fn emit_csv<T: std::fmt::Display>(output: Option<&Path>, rows: &[Vec<T>]) -> Result<()> {
    match output {
        Some(p) => {
            let mut f = fs::File::create(p).with_context(|| p.display().to_string())?;
            write_matrix_csv(&mut f, rows)?;
            f.flush()?;
        }
        None => {
            let mut buf = Vec::new();
            write_matrix_csv(&mut buf, rows)?;
            std::io::stdout().lock().write_all(&buf)?;
        }
    }
    Ok(())
}

fn metric_csv(m: &FiniteMetricSpace) -> Vec<Vec<f64>> {
    (0..m.len()).map(|i| m.d.row(i).to_vec()).collect()
}

fn load(path: &Path) -> Result<(FiniteLorentzSpace, Vec<f64>)> {
    let f = read_space_file(path)?;
    let x = f.to_space()?;
    let mu = f.mu.unwrap_or_else(|| vec![1.0; x.len()]);
    Ok((x, mu))
}

fn radius_of(arg: &str, m: &FiniteMetricSpace) -> Result<f64> {
    if arg == "auto" {
        Ok(default_connect_radius(m))
    } else {
        arg.parse().with_context(|| format!("connect radius {arg}"))
    }
}

fn surface(args: &SurfaceArgs, x: &FiniteLorentzSpace) -> Result<CauchySubset> {
    match (&args.surface, args.at_time) {
        (Some(p), None) => {
            let text = fs::read_to_string(p).with_context(|| p.display().to_string())?;
            let s: CauchySubset = serde_json::from_str(&text)?;
            if let Some(&bad) = s.points.iter().find(|&&i| i >= x.len()) {
                bail!("surface point {bad} out of range");
            }
            Ok(CauchySubset::new(s.points))
        }
        (None, Some(level)) => {
            let labels = x.labels.as_ref().context("--at-time needs coordinate labels")?;
            let t: Vec<f64> = labels.iter().map(|l| l.first().copied().unwrap_or(0.0)).collect();
            Ok(CauchySubset::from_level(&derived_causal(x, args.tol)?, &t, level)?)
        }
        _ => bail!("give exactly one of --surface and --at-time"),
    }
}

fn region(a: &GenArgs) -> Region {
    let spatial = a.dim.saturating_sub(1);
    match a.region {
        RegionName::Diamond => Region::diamond(a.size, spatial),
        RegionName::Slab => Region::slab(a.size, a.half_width, spatial),
        RegionName::Box => Region::boxed(vec![(-a.size, a.size); a.dim]),
    }
}

fn gen(a: &GenArgs) -> Result<SpaceFile> {
    let times = &a.times;
    Ok(match a.model {
        Model::Sprinkle => {
            let coords = sprinkle_coords(&region(a), a.density, a.seed)?;
            let x = minkowski_space(coords)?;
            let w = 1.0 / a.density;
            let n = x.len();
            SpaceFile::from_space(&x, Some(vec![w; n]))
        }
        Model::Lattice => {
            let x = if a.dim == 2 { lattice(a.n, a.r, a.s)? } else { lattice_nd(a.n, a.r, a.s, a.dim - 1)? };
            SpaceFile::from_space(&x, None)
        }
        Model::Cylinder => SpaceFile::from_space(&causal_cylinder(&circle_net(a.n), times)?, None),
        Model::Product => {
            let base = minkowski_space(sprinkle_coords(&region(a), a.density, a.seed)?)?;
            SpaceFile::from_space(&product(&base, &circle_net(a.n))?, None)
        }
    })
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Gen(a) => {
            let f = gen(&a)?;
            emit_json(a.output.as_deref(), &f)?;
            Ok(true)
        }
        Cmd::Validate { space, tol } => {
            let (x, _) = load(&space)?;
            let r = validate_lorentz(&x, tol)?;
            emit_json(None, &r)?;
            Ok(r.is_valid())
        }
        Cmd::Ghdist(a) => {
            let (x, _) = load(&a.a)?;
            let (y, _) = load(&a.b)?;
            let mode = match a.method {
                GhMethod::Exact => GhMode::Exact { budget: a.budget },
                GhMethod::Anneal => GhMode::Anneal {
                    params: AnnealParams { steps: a.steps, cooling: a.cooling, chains: a.chains, ..Default::default() },
                    seed: a.seed,
                },
            };
            let r = match a.mode {
                GhSide::Minus => ghdist_minus(&x, &y, &mode)?,
                GhSide::Plus => ghdist_plus(&x, &y, &mode)?,
            };
            emit_json(a.output.as_deref(), &serde_json::json!({
                "value": r.value,
                "witness_pairs": r.witness.pairs,
                "method": r.method,
                "budget": r.budget,
            }))?;
            Ok(true)
        }
        Cmd::Drfamily { space, r, output } => {
            let (x, mu) = load(&space)?;
            let cones = Cones::from_space(&x, mu, DEFAULT_TOL)?;
            let family = r
                .iter()
                .map(|&r| Ok(serde_json::json!({"r": r, "metric": metric_rows(&d_r(&cones, r)?)})))
                .collect::<Result<Vec<_>>>()?;
            emit_json(output.as_deref(), &family)?;
            Ok(true)
        }
        Cmd::Detect { space, tol, output } => {
            let (x, mu) = load(&space)?;
            let cones = Cones::from_space(&x, mu, tol)?;
            let m = detect_matrix(&cones, tol);
            let rows: Vec<Vec<u8>> = m.to_rows().into_iter().map(|r| r.into_iter().map(u8::from).collect()).collect();
            emit_csv(output.as_deref(), &rows)?;
            Ok(true)
        }
        Cmd::Dim(a) => dim(&a),
        Cmd::Reconstruct { pom, dm, noise_floor, output } => {
            let p = read_space_file(&pom)?.to_pom()?;
            let s = reconstruct_pom(&p, &DmField::Constant(dm), noise_floor)?;
            emit_json(output.as_deref(), &SpaceFile::from_space(&s, Some(p.mu.clone())))?;
            Ok(true)
        }
        Cmd::Cauchy { cmd } => cauchy(cmd),
        Cmd::RunExperiment { spec, output, tolerances } => {
            let text = fs::read_to_string(&spec).with_context(|| spec.display().to_string())?;
            let spec: ExperimentSpec = serde_json::from_str(&text).context("experiment spec")?;
            let tol = match tolerances {
                Some(p) => Tolerances::load(&p)?,
                None => Tolerances::builtin(),
            };
            let report = run_experiment(&spec, &tol)?;
            match output.or(spec.output.clone()) {
                Some(dir) => {
                    for p in report.write(&dir)? {
                        eprintln!("wrote {}", p.display());
                    }
                }
                None => emit_json(None, &report)?,
            }
            for c in &report.checks {
                eprintln!("{} {} {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value);
            }
            Ok(report.pass)
        }
        Cmd::Precompact { spaces, eps, diam_bound, n_bound, output } => {
            let family = spaces.iter().map(|p| load(p).map(|s| s.0)).collect::<Result<Vec<_>>>()?;
            let mut opts = PrecompactOptions { diam_bound, n_bound, ..Default::default() };
            if let Some(e) = eps {
                opts.eps = e;
            }
            let r = precompactness_predicates(&family, &opts);
            emit_json(output.as_deref(), &r)?;
            Ok(r.diameter_ok && r.cardinality_ok)
        }
    }
}

fn sign(s: SignArg) -> Sign {
    match s {
        SignArg::Plus => Sign::Plus,
        SignArg::Minus => Sign::Minus,
    }
}

fn dim(a: &DimArgs) -> Result<bool> {
    let f = read_space_file(&a.space)?;
    let x = f.to_space()?;
    if matches!(a.method, DimMethod::Dm | DimMethod::Horismoticity | DimMethod::Blumenthal) && a.point >= x.len() {
        bail!("point {} out of range", a.point);
    }
    let out = a.output.as_deref();
    match a.method {
        DimMethod::Dm => {
            let opts = DmOptions { levels: a.levels, ..Default::default() };
            emit_json(out, &dm_dimension(&f.to_pom()?, a.point, &opts)?)?;
        }
        DimMethod::Dushnik => emit_json(out, &dushnik_miller(&f.to_pom()?, a.max.max(DM_MAX_POINTS))?)?,
        DimMethod::Horismoticity => {
            let x = if x.causal.is_some() { x } else { x.clone().with_causal(derived_causal(&x, a.tol)?)? };
            emit_json(out, &horismoticity(&x, a.point, a.max, a.tol)?)?
        }
        DimMethod::Blumenthal => {
            let m = FiniteMetricSpace::from_matrix(x.sigma.clone());
            emit_json(out, &blumenthal_dim(&m, a.point, a.max, a.tol)?)?
        }
        DimMethod::Catcher => {
            let q: [usize; 4] = a.quad.clone().try_into().map_err(|_| anyhow::anyhow!("--quad needs four points"))?;
            let r = Relations::from_space(&x, a.tol)?;
            emit_json(out, &min_catcher(&r, q, sign(a.sign), a.max)?)?
        }
    }
    Ok(true)
}

fn cauchy(cmd: CauchyCmd) -> Result<bool> {
    match cmd {
        CauchyCmd::Noldus { space, p, intrinsify: radius, output } => {
            let (x, _) = load(&space)?;
            let mut d = noldus_metric(&x, p)?;
            if let Some(r) = radius {
                d = intrinsify(&d, radius_of(&r, &d)?)?;
            }
            emit_csv(output.as_deref(), &metric_csv(&d))?;
            Ok(true)
        }
        CauchyCmd::Ds { surface: sa, intrinsify: radius, output } => {
            let (x, _) = load(&sa.space)?;
            let s = surface(&sa, &x)?;
            let mut d = chain_diamond_metric(&x, &s, sa.tol)?;
            if let Some(r) = radius {
                d = intrinsify(&d, radius_of(&r, &d)?)?;
            }
            emit_csv(output.as_deref(), &metric_csv(&d))?;
            Ok(true)
        }
        CauchyCmd::Timefn { surface: sa, p, output } => {
            let (x, _) = load(&sa.space)?;
            let s = surface(&sa, &x)?;
            let d = noldus_metric(&x, p)?;
            let t = build_cauchy_time(&x, &s, &d, sa.tol)?;
            emit_json(output.as_deref(), &t)?;
            Ok(t.anti_lipschitz.ok && t.rushing.ok && t.cauchy.ok)
        }
        CauchyCmd::Levels { space, time, levels, band, p, radius, seed, output } => {
            let (x, _) = load(&space)?;
            let text = fs::read_to_string(&time).with_context(|| time.display().to_string())?;
            let t: Vec<f64> = serde_json::from_str(&text).context("time values")?;
            let d = noldus_metric(&x, p)?;
            let radius = radius.unwrap_or_else(|| default_connect_radius(&d));
            let mode = GhMode::Anneal { params: AnnealParams::default(), seed };
            let fam = level_set_family(&d, &t, &levels, band, radius, &mode)?;
            let sets: Vec<_> = fam
                .levels
                .iter()
                .map(|l| serde_json::json!({"level": l.level, "points": l.set.points, "intrinsic": metric_rows(&l.intrinsic)}))
                .collect();
            emit_json(output.as_deref(), &serde_json::json!({"levels": sets, "profile": fam.profile}))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("LORGH_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        // a closed pipe downstream (`| head`) is not an error
        Err(e) if e.chain().any(|c| c.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
