use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use flatdef::cylinder::{decompose, DecompositionStatus};
use flatdef::deformation::{eta, CylinderForm, DeformationError};
use flatdef::delaunay::translation_equivalent;
use flatdef::geom::Vec2;
use flatdef::homology::HomologyFrame;
use flatdef::io::{surface_from_json, surface_to_json, IoError};
use flatdef::linalg::Complex;
use flatdef::orbit::{
    accumulate_tangent, complete_periodicity_scan, decompose_all, field_bound, parabolicity_of, rank_lower_bound,
};
use flatdef::render::render_svg;
use flatdef::report;
use flatdef::saddle::enumerate_directions;
use flatdef::scalar::Scalar;
use flatdef::surface::{l_shape, square_tiled, Permutation, SurfaceError, TranslationSurface};

#[derive(Parser)]
#[command(name = "flatdef", version, about = "Exact cylinder deformations of translation surfaces")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args, Clone)]
struct Bounds {
    /// Trace bound L (exact rational); defaults to a multiple of the longest edge.
    #[arg(long)]
    bound: Option<String>,
    /// Multiple of the longest edge used when --bound is absent.
    #[arg(long, default_value = "20")]
    bound_factor: String,
}

#[derive(clap::Args, Clone)]
struct Lengths {
    /// Saddle connection length bound R.
    #[arg(long, conflicts_with = "max_len_sq")]
    max_len: Option<String>,
    /// Squared length bound R², for bounds whose square root is irrational.
    #[arg(long)]
    max_len_sq: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Periodicity,
    Parabolicity,
    Field,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a surface file and print its stratum data.
    Validate { path: PathBuf },
    /// Cylinder decomposition in a direction, as JSON.
    Decompose {
        path: PathBuf,
        #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
        direction: String,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Shear the cylinders of a periodic direction by t.
    Shear {
        path: PathBuf,
        #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
        direction: String,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Comma-separated cylinder ids.
        #[arg(long)]
        subset: Option<String>,
        /// Required with --subset: a proper subset is not covered by the deformation theorem.
        #[arg(long)]
        uncertified: bool,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Stretch the cylinders of a periodic direction vertically by 1+s.
    Stretch {
        path: PathBuf,
        #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
        direction: String,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long)]
        subset: Option<String>,
        #[arg(long)]
        uncertified: bool,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Tangent-span certificate and cylinder rank lower bound.
    Rank {
        path: PathBuf,
        #[command(flatten)]
        lengths: Lengths,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Per-direction scan report.
    Scan {
        path: PathBuf,
        #[command(flatten)]
        lengths: Lengths,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long, value_enum, default_value = "periodicity")]
        mode: Mode,
    },
    /// SVG picture of a surface, optionally with a decomposition.
    Render {
        path: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        direction: Option<String>,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Square-tiled surface from two permutations in cycle notation.
    MakeOrigami {
        #[arg(long)]
        h: String,
        #[arg(long)]
        v: String,
        /// Number of squares; defaults to the largest label used.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        label: Option<String>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// L-shaped table: a w1 × h1 base with a w2 × h2 block on its left.
    MakeLshape {
        #[arg(allow_hyphen_values = true)]
        w1: String,
        #[arg(allow_hyphen_values = true)]
        h1: String,
        #[arg(allow_hyphen_values = true)]
        w2: String,
        #[arg(allow_hyphen_values = true)]
        h2: String,
        #[arg(long)]
        label: Option<String>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    File(#[from] IoError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Deformation(#[from] DeformationError),
    #[error("{1}")]
    Input(&'static str, String),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    fn name(&self) -> &'static str {
        match self {
            CliError::Io(_) => "IoError",
            CliError::File(e) => e.name(),
            CliError::Surface(e) => e.name(),
            CliError::Deformation(e) => e.name(),
            CliError::Input(n, _) => n,
            CliError::Invariant(_) => "InvariantViolation",
        }
    }

    fn code(&self) -> u8 {
        match self {
            CliError::Invariant(_) => 2,
            _ => 1,
        }
    }
}

fn scalar(flag: &str, text: &str) -> Result<Scalar, CliError> {
    text.parse().map_err(|_| CliError::Input("ScalarParseError", format!("--{flag}: cannot parse exact scalar {text:?}")))
}

fn direction(text: &str) -> Result<Vec2, CliError> {
    let (x, y) = text
        .split_once(',')
        .ok_or_else(|| CliError::Input("BadDirection", format!("direction must be dx,dy, got {text:?}")))?;
    let v = Vec2::new(scalar("direction", x)?, scalar("direction", y)?);
    if v.is_zero() {
        return Err(CliError::Input("BadDirection", "direction must be nonzero".into()));
    }
    Ok(v)
}

fn bound_sq(m: &TranslationSurface, b: &Bounds) -> Result<Scalar, CliError> {
    let sq = match &b.bound {
        Some(l) => scalar("bound", l)?.square(),
        None => &scalar("bound-factor", &b.bound_factor)?.square() * &m.longest_edge_sq(),
    };
    if !sq.is_positive() {
        return Err(CliError::Input("BadBound", "trace bound must be positive".into()));
    }
    Ok(sq)
}

fn max_len_sq(l: &Lengths) -> Result<Scalar, CliError> {
    let sq = match (&l.max_len, &l.max_len_sq) {
        (Some(r), _) => scalar("max-len", r)?.square(),
        (None, Some(r2)) => scalar("max-len-sq", r2)?,
        (None, None) => Scalar::from_int(10),
    };
    if !sq.is_positive() {
        return Err(CliError::Input("BadBound", "length bound must be positive".into()));
    }
    Ok(sq)
}

fn subset(text: &Option<String>, uncertified: bool) -> Result<Option<Vec<usize>>, CliError> {
    let Some(t) = text else { return Ok(None) };
    if !uncertified {
        return Err(CliError::Input(
            "UncertifiedSubset",
            "a cylinder subset is not certified to stay in the orbit closure; pass --uncertified to proceed".into(),
        ));
    }
    t.split(',')
        .map(|x| x.trim().parse().map_err(|_| CliError::Input("BadSubset", format!("bad cylinder id {x:?}"))))
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

fn load(path: &Path) -> Result<TranslationSurface, CliError> {
    Ok(surface_from_json(&std::fs::read_to_string(path)?)?)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

enum Kind {
    Shear,
    Stretch,
}

#[allow(clippy::too_many_arguments)]
fn deform(
    path: &Path,
    dir: &str,
    param: Scalar,
    sub: Option<Vec<usize>>,
    bounds: &Bounds,
    out: &Option<PathBuf>,
    kind: Kind,
) -> Result<(), CliError> {
    let m = load(path)?;
    let v = direction(dir)?;
    let frame = HomologyFrame::new(&m);
    let d = decompose(&m, &v, &bound_sq(&m, bounds)?);
    let form = CylinderForm::new(&frame, &d)?;
    let ids = sub.unwrap_or_else(|| (0..d.cylinders.len()).collect());
    let (result, factor) = match kind {
        Kind::Shear => (form.shear(&ids, &param)?, Complex::real(param.clone())),
        Kind::Stretch => (form.stretch(&ids, &param)?, Complex::new(Scalar::zero(), param.clone())),
    };
    let expected = frame.period_map(&m).add(&eta(&frame, &d, Some(&ids))?.scale(&factor));
    let linear = form.periods(&result) == expected;
    let equivalent = translation_equivalent(&m, &result);
    let text = surface_to_json(&result.with_label(m.label().map(str::to_string)));
    let summary = json!({ "linearity": linear, "equivalent_to_input": equivalent, "cylinders": ids });
    match out {
        Some(p) => {
            std::fs::write(p, text)?;
            print!("{}", report::to_text(&summary));
        }
        None => {
            print!("{text}");
            eprint!("{}", report::to_text(&summary));
        }
    }
    if !linear {
        return Err(CliError::Invariant("period change differs from t·η".into()));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Validate { path } => {
            let m = load(&path)?;
            let sd = m.singularities();
            let frame = HomologyFrame::new(&m);
            println!(
                "genus {}, signature {}, m={}, area {}",
                sd.genus,
                sd.signature_string(),
                frame.rank(),
                m.area()
            );
        }
        Cmd::Decompose { path, direction: dir, bounds, svg } => {
            let m = load(&path)?;
            let d = decompose(&m, &direction(&dir)?, &bound_sq(&m, &bounds)?);
            if d.status == DecompositionStatus::Periodic && d.cylinder_area() != d.normalized_area() {
                return Err(CliError::Invariant("periodic decomposition with wrong area".into()));
            }
            print!("{}", report::to_text(&report::decomposition_json(&d)));
            if let Some(p) = svg {
                std::fs::write(p, render_svg(&m, Some(&d)))?;
            }
        }
        Cmd::Shear { path, direction, t, subset: sub, uncertified, bounds, out } => {
            let sub = subset(&sub, uncertified)?;
            deform(&path, &direction, scalar("t", &t)?, sub, &bounds, &out, Kind::Shear)?;
        }
        Cmd::Stretch { path, direction, s, subset: sub, uncertified, bounds, out } => {
            let sub = subset(&sub, uncertified)?;
            deform(&path, &direction, scalar("s", &s)?, sub, &bounds, &out, Kind::Stretch)?;
        }
        Cmd::Rank { path, lengths, bounds } => {
            let m = load(&path)?;
            let (r2, b2) = (max_len_sq(&lengths)?, bound_sq(&m, &bounds)?);
            let frame = HomologyFrame::new(&m);
            let dirs = enumerate_directions(&m, &r2);
            let span = accumulate_tangent(&m, &frame, &dirs, &b2);
            if span.p_dim() > 2 * frame.genus() || rank_lower_bound(&span) > frame.genus() {
                return Err(CliError::Invariant("tangent span exceeds the genus bound".into()));
            }
            let scan = decompose_all(&m, &dirs, &b2);
            print!("{}", report::to_text(&report::certificate_json(&span, &r2, &b2, &scan)));
        }
        Cmd::Scan { path, lengths, bounds, mode } => {
            let m = load(&path)?;
            let (r2, b2) = (max_len_sq(&lengths)?, bound_sq(&m, &bounds)?);
            let scan = complete_periodicity_scan(&m, &r2, &b2);
            let v = match mode {
                Mode::Periodicity => report::periodicity_json(&scan, &r2, &b2),
                Mode::Parabolicity => report::parabolicity_json(&parabolicity_of(&scan), &r2, &b2),
                Mode::Field => {
                    let rows: Vec<_> =
                        scan.decompositions.iter().filter(|d| !d.cylinders.is_empty()).map(field_bound).collect();
                    report::field_json(&rows, &r2, &b2)
                }
            };
            print!("{}", report::to_text(&v));
        }
        Cmd::Render { path, direction: dir, bounds, out } => {
            let m = load(&path)?;
            let d = match dir {
                Some(t) => Some(decompose(&m, &direction(&t)?, &bound_sq(&m, &bounds)?)),
                None => None,
            };
            emit(&out, &render_svg(&m, d.as_ref()))?;
        }
        Cmd::MakeOrigami { h, v, n, label, out } => {
            let n = match n {
                Some(n) => n,
                None => largest_label(&h).max(largest_label(&v)).max(1),
            };
            let bad = |e: String| CliError::Input("BadPermutation", e);
            let ph = Permutation::from_cycles(n, &h).map_err(|e| bad(e.to_string()))?;
            let pv = Permutation::from_cycles(n, &v).map_err(|e| bad(e.to_string()))?;
            let m = square_tiled(&ph, &pv)?.with_label(label);
            emit(&out, &surface_to_json(&m))?;
        }
        Cmd::MakeLshape { w1, h1, w2, h2, label, out } => {
            let m = l_shape(&scalar("w1", &w1)?, &scalar("h1", &h1)?, &scalar("w2", &w2)?, &scalar("h2", &h2)?)?
                .with_label(label);
            emit(&out, &surface_to_json(&m))?;
        }
    }
    Ok(())
}

fn largest_label(cycles: &str) -> usize {
    cycles
        .split(|c: char| !c.is_ascii_digit())
        .filter_map(|t| t.parse().ok())
        .max()
        .unwrap_or(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let hook = std::panic::take_hook();
    std::panic::set_hook(Box::new(move |info| {
        eprintln!("internal invariant violation");
        hook(info);
    }));
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(e.code())
        }
        Err(_) => ExitCode::from(2),
    }
}
