//! The `avi` command line.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::dataset::{generate_dataset, DatasetSpec};
use crate::analysis::epsilon::{
    default_grid, epsilon_search, log_grid, EpsilonSearch, EpsilonTarget,
};
use crate::analysis::features::feature_matrix;
use crate::analysis::invariance::invariance_report_with;
use crate::error::{AviError, Result};
use crate::io::{read_points_file, write_csv, write_points, ModelFile};
use crate::linalg::{Matrix, DEFAULT_RANK_TOL};
use crate::model::{BasisModel, PolyHandle, PolyKind};
use crate::points::PointSet;
use crate::reduction::{reduce_basis, DEFAULT_THRESHOLD};
use crate::sbc::{fit, FitConfig, NormalizationKind};

#[derive(Parser, Debug)]
#[command(name = "avi", version, about = "Vanishing ideal bases of point sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fit a basis to the points of a CSV file.
    Fit(FitArgs),
    /// Drop redundant vanishing polynomials and embed the report in the model.
    Reduce(ReduceArgs),
    /// Evaluate basis polynomials at points or on a 2-D grid.
    Eval(EvalArgs),
    /// Feature vectors |g(x)| over the vanishing polynomials of class models.
    Features(FeaturesArgs),
    /// Translation and scaling consistency report.
    Diagnose(DiagnoseArgs),
    /// Generate a synthetic dataset from a JSON spec.
    Generate(GenerateArgs),
    /// Scan epsilon for a basis of the expected shape.
    EpsilonSearch(EpsilonArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormArg {
    Grad,
    Vca,
    Coeff,
    Subgrad,
}

#[derive(Args, Debug, Clone)]
pub struct NormOpts {
    #[arg(long, value_enum, default_value = "grad")]
    pub normalization: NormArg,
    /// Variable indices (0-based, comma separated) for `subgrad`.
    #[arg(long, value_delimiter = ',')]
    pub subsample_vars: Vec<usize>,
    /// Point indices (0-based, comma separated) for `subgrad`.
    #[arg(long, value_delimiter = ',')]
    pub subsample_points: Vec<usize>,
    #[arg(long, env = "AVI_RANK_TOL", default_value_t = DEFAULT_RANK_TOL)]
    pub rank_tol: f64,
    /// Subtract the column means before fitting.
    #[arg(long)]
    pub center: bool,
    /// Rescale to unit mean point norm before fitting.
    #[arg(long)]
    pub unit_mean_norm: bool,
    /// Degree cap (default: number of points).
    #[arg(long)]
    pub max_degree: Option<usize>,
}

impl NormOpts {
    fn kind(&self) -> Result<NormalizationKind> {
        let subsampled = !self.subsample_vars.is_empty() || !self.subsample_points.is_empty();
        Ok(match self.normalization {
            NormArg::Subgrad => {
                if self.subsample_vars.is_empty() || self.subsample_points.is_empty() {
                    return Err(usage(
                        "subgrad needs --subsample-vars and --subsample-points",
                    ));
                }
                NormalizationKind::SubsampledGradient {
                    variables: self.subsample_vars.clone(),
                    points: self.subsample_points.clone(),
                }
            }
            _ if subsampled => {
                return Err(usage(
                    "subsample flags only apply to --normalization subgrad",
                ))
            }
            NormArg::Grad => NormalizationKind::Gradient,
            NormArg::Vca => NormalizationKind::Identity,
            NormArg::Coeff => NormalizationKind::Coefficient,
        })
    }

    fn config(&self, epsilon: f64) -> Result<FitConfig> {
        Ok(FitConfig {
            epsilon,
            normalization: self.kind()?,
            max_degree: self.max_degree,
            rank_tol: self.rank_tol,
            center: self.center,
            unit_mean_norm: self.unit_mean_norm,
            ..FitConfig::default()
        })
    }
}

#[derive(Args, Debug)]
pub struct FitArgs {
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    #[command(flatten)]
    pub norm: NormOpts,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    pub model: PathBuf,
    /// The raw points the model was fitted on.
    pub points: PathBuf,
    /// Residual threshold (default 1e-9); required when the model was fitted
    /// with ε > 0.
    #[arg(
        long,
        visible_alias = "reduction-threshold",
        allow_hyphen_values = true
    )]
    pub threshold: Option<f64>,
    /// Where to write the updated model (default: overwrite the input).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write the report on its own.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum HandleSet {
    /// Every vanishing polynomial of the fit.
    #[value(alias = "G")]
    G,
    /// Every nonvanishing polynomial, constant included.
    #[value(alias = "F")]
    F,
    /// Nonvanishing then vanishing.
    #[value(alias = "ALL")]
    All,
    /// Vanishing polynomials kept by the embedded reduction.
    Kept,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    pub model: PathBuf,
    /// Points to evaluate at (omit with --grid).
    pub points: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "g")]
    pub handles: HandleSet,
    /// `xmin,xmax,ymin,ymax,nx,ny`: evaluate on a regular grid (2 variables only).
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct FeaturesArgs {
    pub points: PathBuf,
    /// One model file per class, in class order.
    #[arg(long = "model", required = true)]
    pub models: Vec<PathBuf>,
    /// Use only the polynomials kept by each model's embedded reduction.
    #[arg(long)]
    pub reduced: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DiagnoseArgs {
    pub points: PathBuf,
    /// Translation vector `b`, comma separated (default: zero).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub translate: Vec<f64>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub scale: f64,
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    #[command(flatten)]
    pub norm: NormOpts,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    pub spec: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EpsilonArgs {
    pub points: PathBuf,
    #[arg(long)]
    pub num_linear: usize,
    #[arg(long)]
    pub d_min: usize,
    #[arg(long)]
    pub num_at_dmin: usize,
    /// Grid bounds and size; default 60 values over [1e-4, 1]·mean‖x‖.
    #[arg(long, requires = "grid_hi")]
    pub grid_lo: Option<f64>,
    #[arg(long, requires = "grid_lo")]
    pub grid_hi: Option<f64>,
    #[arg(long, default_value_t = 60)]
    pub grid_count: usize,
    #[command(flatten)]
    pub norm: NormOpts,
    /// Write the full scan as JSON.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Error for flag combinations clap cannot express.
fn usage(msg: &str) -> AviError {
    AviError::Usage(msg.to_string())
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(fs::File::create(p).map_err(AviError::file(p))?),
        None => Box::new(std::io::stdout()),
    })
}

fn write_json<T: serde::Serialize>(path: &Option<PathBuf>, value: &T) -> Result<()> {
    let mut w = sink(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    Ok(())
}

/// Per-degree table printed after a fit.
pub fn summary(model: &BasisModel) -> String {
    let mut s = String::from("degree  |G_t|  |F_t|  min sqrt(lambda)  max sqrt(lambda)\n");
    for r in &model.degrees {
        let e = r.extents();
        let lo = e.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = e.iter().copied().fold(0.0, f64::max);
        let (lo, hi) = if e.is_empty() {
            ("-".to_string(), "-".to_string())
        } else {
            (format!("{lo:.6e}"), format!("{hi:.6e}"))
        };
        s.push_str(&format!(
            "{:<7} {:<6} {:<6} {:<17} {}\n",
            r.degree,
            r.count(PolyKind::G),
            r.count(PolyKind::F),
            lo,
            hi
        ));
    }
    s.push_str(&format!(
        "total vanishing polynomials: {}\n",
        model.g_handles().len()
    ));
    if model.truncated {
        s.push_str("warning: stopped at the degree cap with nonvanishing polynomials left\n");
    }
    s
}

fn cmd_fit(a: &FitArgs) -> Result<()> {
    let x = read_points_file(&a.input)?;
    let model = fit(&x, &a.norm.config(a.epsilon)?)?;
    print!("{}", summary(&model));
    ModelFile::new(model).save(&a.output)
}

fn cmd_reduce(a: &ReduceArgs) -> Result<()> {
    let mut file = ModelFile::load(&a.model)?;
    let threshold = match a.threshold {
        Some(t) if !(t >= 0.0) => return Err(usage("--threshold must be non-negative")),
        Some(t) => t,
        None if file.model.epsilon > 0.0 => {
            return Err(usage(
                "--threshold is required for models fitted with epsilon > 0",
            ))
        }
        None => DEFAULT_THRESHOLD,
    };
    let x = read_points_file(&a.points)?;
    let report = reduce_basis(&file.model, &x, threshold)?;
    let deflated: usize = report.rank_deflated.iter().map(|d| d.removed.len()).sum();
    println!(
        "vanishing polynomials: {} -> kept {} (removed {}, rank-deflated {})",
        file.model.g_handles().len(),
        report.kept.len(),
        report.removed.len(),
        deflated
    );
    if let Some(p) = &a.report {
        write_json(&Some(p.clone()), &report)?;
    }
    file.reduction = Some(report);
    file.save(a.output.as_deref().unwrap_or(&a.model))
}

fn select_handles(file: &ModelFile, set: HandleSet) -> Result<Vec<PolyHandle>> {
    let m = &file.model;
    Ok(match set {
        HandleSet::G => m.g_handles(),
        HandleSet::F => m.f_handles(),
        HandleSet::All => m.all_handles(),
        HandleSet::Kept => file
            .reduction
            .as_ref()
            .ok_or_else(|| usage("--handles kept needs a model with an embedded reduction"))?
            .kept_handles(),
    })
}

fn parse_grid(spec: &str) -> Result<PointSet> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let bad = || usage("--grid expects xmin,xmax,ymin,ymax,nx,ny");
    if parts.len() != 6 {
        return Err(bad());
    }
    let f: Vec<f64> = parts[..4]
        .iter()
        .map(|s| s.parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let nx: usize = parts[4].parse().map_err(|_| bad())?;
    let ny: usize = parts[5].parse().map_err(|_| bad())?;
    if nx < 2 || ny < 2 {
        return Err(bad());
    }
    let mut rows = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            rows.push(vec![
                f[0] + (f[1] - f[0]) * i as f64 / (nx - 1) as f64,
                f[2] + (f[3] - f[2]) * j as f64 / (ny - 1) as f64,
            ]);
        }
    }
    PointSet::from_rows(&rows)
}

fn cmd_eval(a: &EvalArgs) -> Result<()> {
    let file = ModelFile::load(&a.model)?;
    let model = &file.model;
    let handles = select_handles(&file, a.handles)?;
    let (raw, with_coords) = match (&a.points, &a.grid) {
        (Some(p), None) => (read_points_file(p)?, false),
        (None, Some(g)) => {
            if model.num_vars != 2 {
                return Err(usage("--grid needs a model in 2 variables"));
            }
            (parse_grid(g)?, true)
        }
        _ => return Err(usage("give either a points file or --grid")),
    };
    let vals = model.evaluate(&handles, &model.prepare(&raw)?)?;
    let mut header: Vec<String> = Vec::new();
    let out = if with_coords {
        header.extend(["x1".to_string(), "x2".to_string()]);
        let mut m = Matrix::zeros(raw.len(), 2 + vals.ncols());
        m.columns_mut(0, 2).copy_from(raw.matrix());
        m.columns_mut(2, vals.ncols()).copy_from(&vals);
        m
    } else {
        vals
    };
    header.extend(handles.iter().map(|h| model.label(*h)));
    write_csv(sink(&a.output)?, &header, &out)
}

fn cmd_features(a: &FeaturesArgs) -> Result<()> {
    let files: Vec<ModelFile> = a
        .models
        .iter()
        .map(|p| ModelFile::load(p))
        .collect::<Result<_>>()?;
    let mut sets = Vec::with_capacity(files.len());
    let mut header = Vec::new();
    for (c, f) in files.iter().enumerate() {
        let handles = if a.reduced {
            select_handles(f, HandleSet::Kept)?
        } else {
            f.model.g_handles()
        };
        header.extend(
            handles
                .iter()
                .map(|h| format!("c{c}_{}", f.model.label(*h))),
        );
        sets.push((&f.model, handles));
    }
    let x = read_points_file(&a.points)?;
    let feats = feature_matrix(&sets, &x)?;
    write_csv(sink(&a.output)?, &header, &feats)
}

fn cmd_diagnose(a: &DiagnoseArgs) -> Result<()> {
    let x = read_points_file(&a.points)?;
    let b = if a.translate.is_empty() {
        vec![0.0; x.dim()]
    } else {
        a.translate.clone()
    };
    if a.norm.center || a.norm.unit_mean_norm {
        return Err(usage(
            "diagnose works on the points as given; drop --center/--unit-mean-norm",
        ));
    }
    let report = invariance_report_with(&x, &b, a.scale, &a.norm.config(a.epsilon)?)?;
    eprintln!(
        "counts match: {}, worst eigenvalue ratio error: {:.3e}, worst subspace gap: {:.3e}",
        report.counts_match(),
        report.max_ratio_error(),
        report.max_gap()
    );
    write_json(&a.output, &report)
}

fn cmd_generate(a: &GenerateArgs) -> Result<()> {
    let spec: DatasetSpec =
        serde_json::from_str(&fs::read_to_string(&a.spec).map_err(AviError::file(&a.spec))?)?;
    let x = generate_dataset(&spec)?;
    write_points(sink(&a.output)?, &x)
}

fn cmd_epsilon(a: &EpsilonArgs) -> Result<()> {
    let x = read_points_file(&a.points)?;
    let cfg = a.norm.config(0.0)?;
    let grid = match (a.grid_lo, a.grid_hi) {
        (Some(lo), Some(hi)) => log_grid(lo, hi, a.grid_count)?,
        _ => default_grid(&x, &cfg)?,
    };
    let target = EpsilonTarget {
        num_linear: a.num_linear,
        d_min: a.d_min,
        num_at_dmin: a.num_at_dmin,
    };
    let result = epsilon_search(&x, &target, &cfg, &grid)?;
    match &result {
        EpsilonSearch::Found { epsilon, range, .. } => {
            println!("epsilon {epsilon:e} (range {:e} .. {:e})", range.0, range.1)
        }
        EpsilonSearch::NotFound { .. } => println!("no epsilon in the grid meets the target"),
    }
    if a.output.is_some() {
        write_json(&a.output, &result)?;
    }
    if result.epsilon().is_none() {
        return Err(AviError::InvalidArgument(
            "epsilon search found no valid range".into(),
        ));
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Fit(a) => cmd_fit(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Eval(a) => cmd_eval(a),
        Command::Features(a) => cmd_features(a),
        Command::Diagnose(a) => cmd_diagnose(a),
        Command::Generate(a) => cmd_generate(a),
        Command::EpsilonSearch(a) => cmd_epsilon(a),
    }
}

/// Parse arguments, run, and map errors to exit codes: 2 for usage errors,
/// 1 for everything else.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, AviError::Usage(_)) {
                2
            } else {
                1
            }
        }
    }
}
