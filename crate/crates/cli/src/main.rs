mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use geocurve::curve::metric_g;
use geocurve::error::GeoError;
use geocurve::io::{
    read_ensemble, read_signal_csv, write_signal_csv, CurveJson, CurveSpec, PathJson, ProductJson, Real, SeriesJson,
    TangentJson,
};
use geocurve::radar::{coefficient_curve, generate_signal, product_mean, sliding_series, GeneratorConfig, ProductCurve};
use geocurve::shooting::{DEFAULT_MAX_ITER, DEFAULT_SHOOTING_STEPS, DEFAULT_TOL};
use geocurve::stats::{frechet_mean, CurveEnsemble, MeanOptions};
use geocurve::{curve_exp, shoot, CurveTangent, DiscreteCurve, ShootingOptions};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "geocurve", version, about = "Geodesics, distances and means of curves under the SRV metric")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Geodesic from a curve and an initial speed: {"curve": ..., "velocity": [[dx, dy], ...]}.
    Exp {
        #[command(flatten)]
        files: Files,
        #[arg(long, value_parser = positive_usize)]
        samples: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SHOOTING_STEPS, value_parser = positive_usize)]
        steps: usize,
    },
    /// Geodesic between two curves: {"source": ..., "target": ...}.
    Shoot {
        #[command(flatten)]
        files: Files,
        #[command(flatten)]
        num: Numerics,
    },
    /// Geodesic distance between two curves: {"source": ..., "target": ...}.
    Dist {
        #[command(flatten)]
        files: Files,
        #[command(flatten)]
        num: Numerics,
    },
    /// Fréchet mean of a JSON list of curves.
    Mean {
        #[command(flatten)]
        files: Files,
        #[command(flatten)]
        num: Numerics,
    },
    /// Reflection-coefficient curves of one or more `re,im` signal files, and
    /// their mean when several are given.
    Radar {
        #[command(flatten)]
        files: Files,
        #[command(flatten)]
        num: Numerics,
        #[arg(long, default_value_t = 32, value_parser = positive_usize)]
        window: usize,
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Reflection coefficient drawn in the SVG and reported as a curve.
        #[arg(long, default_value_t = 1, value_parser = positive_usize)]
        coef: usize,
    },
    /// Synthetic autoregressive signal as `re,im` CSV; `--in` takes a generator config.
    Gen {
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Number of generated samples.
        #[arg(long, value_parser = positive_usize)]
        samples: Option<usize>,
    },
}

#[derive(Debug, Args)]
struct Files {
    #[arg(long = "in")]
    input: Vec<PathBuf>,
    /// Result JSON; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Numerics {
    /// Resample input curves to this many nodes.
    #[arg(long, value_parser = positive_usize)]
    samples: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SHOOTING_STEPS, value_parser = positive_usize)]
    steps: usize,
    #[arg(long, default_value_t = DEFAULT_TOL, value_parser = positive_f64)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
}

impl Numerics {
    fn shooting(&self) -> ShootingOptions {
        ShootingOptions { steps: self.steps, tol: self.tol, max_iter: self.max_iter, freeze_jacobian: false }
    }

    fn mean(&self) -> MeanOptions {
        MeanOptions { tol: self.tol, max_iter: self.max_iter, steps: self.steps, shooting_max_iter: self.max_iter }
    }
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(v) => Err(format!("must be positive, got {v}")),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug)]
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, kind: "usage", message: message.into() }
    }
}

impl From<GeoError> for Failure {
    fn from(e: GeoError) -> Self {
        let (code, kind) = match e.root() {
            GeoError::Parse(_) => (3, "parse"),
            GeoError::Io(_) => (4, "io"),
            GeoError::Immersion { .. } => (5, "immersion"),
            GeoError::InvalidPoint { .. }
            | GeoError::Underflow { .. }
            | GeoError::BaseMismatch
            | GeoError::GeometryMismatch
            | GeoError::LengthMismatch { .. }
            | GeoError::Degenerate(_)
            | GeoError::Domain(_)
            | GeoError::Propagation { .. } => (5, "domain"),
            GeoError::NonConvergence { .. } => (6, "convergence"),
            GeoError::Member { .. } | GeoError::Component { .. } => (1, "internal"),
        };
        Failure { code, kind, message: e.to_string() }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure { code: 4, kind: "io", message: format!("{}: {e}", path.display()) })
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| Failure { code: 4, kind: "io", message: format!("{}: {e}", path.display()) })
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> CliResult<T> {
    serde_json::from_str(text)
        .map_err(|e| Failure { code: 3, kind: "parse", message: format!("{}: {e}", path.display()) })
}

fn single_input(files: &Files) -> CliResult<&Path> {
    match files.input.as_slice() {
        [one] => Ok(one),
        [] => Err(Failure::usage("--in is required")),
        _ => Err(Failure::usage("this command takes exactly one --in file")),
    }
}

fn emit<T: Serialize>(files_out: Option<&Path>, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string(value).map_err(|e| Failure { code: 1, kind: "internal", message: e.to_string() })?;
    text.push('\n');
    match files_out {
        Some(p) => write_text(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_svg(path: Option<&Path>, curves: &[DiscreteCurve], title: &str) -> CliResult<()> {
    match path {
        Some(p) => write_text(p, &svg::render(curves, title)),
        None => Ok(()),
    }
}

/// Piecewise-linear resampling in chart coordinates onto `n` uniform nodes.
fn resample_coords(points: &[[f64; 2]], n: usize) -> Vec<[f64; 2]> {
    if points.len() == n || points.len() < 2 {
        return points.to_vec();
    }
    let last = (points.len() - 1) as f64;
    (0..n)
        .map(|j| {
            let t = j as f64 / (n - 1).max(1) as f64 * last;
            let k = (t.floor() as usize).min(points.len() - 2);
            let f = t - k as f64;
            let [a, b] = [points[k], points[k + 1]];
            [a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1])]
        })
        .collect()
}

fn build_curve(spec: &CurveSpec, samples: Option<usize>) -> CliResult<DiscreteCurve> {
    let points = match samples {
        Some(n) => resample_coords(&spec.points, n),
        None => spec.points.clone(),
    };
    Ok(DiscreteCurve::from_coords(spec.manifold, &points)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpInput {
    curve: CurveSpec,
    velocity: Vec<[f64; 2]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairInput {
    source: CurveSpec,
    target: CurveSpec,
}

fn read_pair(files: &Files, samples: Option<usize>) -> CliResult<(DiscreteCurve, DiscreteCurve)> {
    let path = single_input(files)?;
    let pair: PairInput = parse_json(path, &read_text(path)?)?;
    Ok((build_curve(&pair.source, samples)?, build_curve(&pair.target, samples)?))
}

#[derive(Serialize)]
struct ExpOutput<'a> {
    energy_variation: Real,
    path: PathJson<'a>,
}

#[derive(Serialize)]
struct ShootOutput<'a> {
    converged: bool,
    iterations: usize,
    residual: Real,
    residuals: Vec<Real>,
    condition_numbers: Vec<Real>,
    damping: Vec<Real>,
    distance: Real,
    speed: TangentJson<'a>,
    path: PathJson<'a>,
}

#[derive(Serialize)]
struct DistOutput {
    distance: Real,
    iterations: usize,
    residual: Real,
}

#[derive(Serialize)]
struct MeanOutput<'a> {
    iterations: usize,
    gradient_norms: Vec<Real>,
    functional: Vec<Real>,
    mean: CurveJson<'a>,
}

#[derive(Serialize)]
struct RadarOutput<'a> {
    window: usize,
    order: usize,
    coefficient: usize,
    series: Vec<SeriesJson<'a>>,
    curves: Vec<CurveJson<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean: Option<ProductJson<'a>>,
}

fn reals(v: &[f64]) -> Vec<Real> {
    geocurve::io::reals(v)
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Exp { files, samples, steps } => {
            let path = single_input(&files)?;
            let input: ExpInput = parse_json(path, &read_text(path)?)?;
            let c0 = build_curve(&input.curve, samples)?;
            let velocity = match samples {
                Some(n) => resample_coords(&input.velocity, n),
                None => input.velocity,
            };
            let u = CurveTangent::from_components(&c0, &velocity)?;
            let p = curve_exp(&c0, &u, steps)?;
            emit_svg(files.svg.as_deref(), &p.curves, "geodesic path")?;
            emit(files.out.as_deref(), &ExpOutput { energy_variation: Real(p.energy_variation()), path: PathJson(&p) })
        }
        Command::Shoot { files, num } => {
            let (c0, c1) = read_pair(&files, num.samples)?;
            let r = shoot(&c0, &c1, &num.shooting())?;
            let distance = metric_g(&c0, &r.speed, &r.speed)?.max(0.0).sqrt();
            emit_svg(files.svg.as_deref(), &r.path.curves, "shooting geodesic")?;
            emit(
                files.out.as_deref(),
                &ShootOutput {
                    converged: true,
                    iterations: r.iterations,
                    residual: Real(r.residual()),
                    residuals: reals(&r.residuals),
                    condition_numbers: reals(&r.condition_numbers),
                    damping: reals(&r.damping),
                    distance: Real(distance),
                    speed: TangentJson(&r.speed),
                    path: PathJson(&r.path),
                },
            )
        }
        Command::Dist { files, num } => {
            let (c0, c1) = read_pair(&files, num.samples)?;
            let r = shoot(&c0, &c1, &num.shooting())?;
            let distance = metric_g(&c0, &r.speed, &r.speed)?.max(0.0).sqrt();
            emit_svg(files.svg.as_deref(), &r.path.curves, "shooting geodesic")?;
            emit(
                files.out.as_deref(),
                &DistOutput { distance: Real(distance), iterations: r.iterations, residual: Real(r.residual()) },
            )
        }
        Command::Mean { files, num } => {
            let path = single_input(&files)?;
            let text = read_text(path)?;
            let members = read_ensemble(&text).map_err(|e| match e {
                GeoError::Parse(m) => Failure { code: 3, kind: "parse", message: format!("{}: {m}", path.display()) },
                other => other.into(),
            })?;
            let members = match num.samples {
                Some(n) => members
                    .iter()
                    .map(|c| {
                        let coords: Vec<[f64; 2]> = c.coords();
                        Ok(DiscreteCurve::from_coords(c.geometry(), &resample_coords(&coords, n))?)
                    })
                    .collect::<CliResult<Vec<_>>>()?,
                None => members,
            };
            let ensemble = CurveEnsemble::new(members)?;
            let r = frechet_mean(&ensemble, &num.mean())?;
            let mut family = ensemble.members().to_vec();
            family.push(r.mean.clone());
            emit_svg(files.svg.as_deref(), &family, "ensemble and mean (last)")?;
            emit(
                files.out.as_deref(),
                &MeanOutput {
                    iterations: r.iterations,
                    gradient_norms: reals(&r.gradient_norms),
                    functional: reals(&r.functional),
                    mean: CurveJson(&r.mean),
                },
            )
        }
        Command::Radar { files, num, window, order, coef } => {
            if files.input.is_empty() {
                return Err(Failure::usage("--in is required"));
            }
            if coef > order {
                return Err(Failure::usage(format!("--coef {coef} exceeds --order {order}")));
            }
            let mut series = Vec::with_capacity(files.input.len());
            for path in &files.input {
                let signal = read_signal_csv(&read_text(path)?).map_err(|e| match e {
                    GeoError::Parse(m) => Failure { code: 3, kind: "parse", message: format!("{}: {m}", path.display()) },
                    other => other.into(),
                })?;
                series.push(sliding_series(&signal, window, order)?);
            }
            let curves = series.iter().map(|s| coefficient_curve(s, coef)).collect::<Result<Vec<_>, _>>()?;
            let mean = if series.len() > 1 {
                let products = series.iter().map(ProductCurve::from_series).collect::<Result<Vec<_>, _>>()?;
                Some(product_mean(&products, &num.mean())?)
            } else {
                None
            };
            let mut family = curves.clone();
            if let Some(m) = &mean {
                family.push(m.components[coef - 1].clone());
            }
            emit_svg(files.svg.as_deref(), &family, &format!("reflection coefficient {coef}"))?;
            emit(
                files.out.as_deref(),
                &RadarOutput {
                    window,
                    order,
                    coefficient: coef,
                    series: series.iter().map(SeriesJson).collect(),
                    curves: curves.iter().map(CurveJson).collect(),
                    mean: mean.as_ref().map(ProductJson),
                },
            )
        }
        Command::Gen { input, out, seed, samples } => {
            let mut cfg = match &input {
                Some(path) => parse_json::<GeneratorConfig>(path, &read_text(path)?)?,
                None => GeneratorConfig::default(),
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(n) = samples {
                cfg.samples = n;
            }
            let text = write_signal_csv(&generate_signal(&cfg)?);
            match out {
                Some(p) => write_text(&p, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            }
        }
    }
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("GEOCURVE_THREADS") else {
        return Ok(());
    };
    let threads = positive_usize(value.trim()).map_err(|e| Failure::usage(format!("GEOCURVE_THREADS: {e}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure { code: 1, kind: "internal", message: e.to_string() })
}

fn report(f: &Failure) -> ExitCode {
    let body = serde_json::json!({ "error": { "kind": f.kind, "code": f.code, "message": f.message } });
    eprintln!("{body}");
    ExitCode::from(f.code)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return report(&Failure::usage(e.to_string().trim_end())),
    };
    if let Err(f) = configure_threads() {
        return report(&f);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => report(&f),
    }
}
