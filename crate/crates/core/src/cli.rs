//! Command-line driver.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::arcs::{sweep_ifs, CurvatureSample, SweepOptions};
use crate::catalog::{self, CatalogEntry, Construction};
use crate::error::{exit, Error, Result};
use crate::exponents::{fit_average_exponent, fit_exponent_with_period, geometric_grid, ScalingSeries};
use crate::geom::{BBox, Point};
use crate::ifs::Ifs;
use crate::string::{string_from_ifs, FractalString, StringCurvatureRow};
use crate::structure::{bounded_complement_component, clusters, product_axis, tiling_compatible, tiling_generator, FeasibleOpenSet};

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  invalid command line
  3  I/O error
  4  parse error in an input file
  5  invalid input (bad map, IFS, argument, catalog name, empty window)
  6  resolution or memory limit (accuracy guard, sample budget, grid cap)
  7  numerical failure (degenerate arrangement, overlapping cylinders,
     insufficient scale range, negative curvature value)

Environment:
  FRACTAL_CURVATURE_THREADS  caps the number of sweep threads";

#[derive(Debug, Parser)]
#[command(name = "fractal-curvature", version, about = "Curvature measures and scaling exponents of fractal parallel sets", after_help = EXIT_CODES)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Similarity dimension of an IFS.
    Dim(SourceArgs),
    /// Curvature of parallel sets over a geometric eps grid.
    Sweep(SweepArgs),
    /// Scaling exponents from a curvature table.
    Exponents(ExponentArgs),
    /// Curvature of a compact subset of the line from its fractal string.
    String(StringArgs),
    /// Cylinder clusters and bounded complement components.
    Clusters(ClusterArgs),
    /// Local product (flatness) test in a window.
    Flatness(FlatnessArgs),
    /// Tiling generator and compatibility of a feasible open set.
    Tiling(TilingArgs),
    /// List catalog entries or show one.
    Catalog(CatalogArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Catalog entry, e.g. `cantor` or `example1:n=4,m=3`.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    pub catalog: Option<String>,
    /// IFS JSON file.
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// eps range as MIN:MAX.
    #[arg(long, value_name = "MIN:MAX", value_parser = parse_range)]
    pub eps: (f64, f64),
    /// Ratio of consecutive grid values, in (0, 1).
    #[arg(long, default_value_t = 0.9)]
    pub ratio: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Finest sampling resolution; at most eps_min / 10 (default eps_min / 10).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Sample every eps at `delta` instead of max(delta, eps / 10).
    #[arg(long)]
    pub no_adaptive: bool,
    /// Do not use a solid certificate for sets with interior.
    #[arg(long)]
    pub no_certificate: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write PREFIX_<column>.dat files and a gnuplot script PREFIX.gp.
    #[arg(long, value_name = "PREFIX")]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExponentArgs {
    /// Sweep CSV (eps,c0,c0var,c1,c2,components,holes) or two-column eps,value CSV.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// Curvature order 0, 1 or 2.
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    /// Log-period in ln eps used for the oscillation amplitude.
    #[arg(long)]
    pub period: Option<f64>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StringArgs {
    /// Catalog entry with a set on the line.
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    pub catalog: Option<String>,
    /// String text file (`hull H measure M` then gap lengths) or 1-D IFS JSON.
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Cylinder depth when the string comes from an IFS.
    #[arg(long, default_value_t = 12)]
    pub depth: usize,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Ambient dimension of the c_d bound column.
    #[arg(long, default_value_t = 2)]
    pub d: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write PREFIX_<column>.dat files and a gnuplot script PREFIX.gp.
    #[arg(long, value_name = "PREFIX")]
    pub plot: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Word length of the cylinders.
    #[arg(long)]
    pub level: usize,
    /// Contact tolerance (default 1e-3 times the hull diameter).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Also probe for a bounded complement component at this raster scale.
    #[arg(long)]
    pub probe: Option<f64>,
    /// Omit the word lists.
    #[arg(long)]
    pub counts_only: bool,
}

#[derive(Debug, Args)]
pub struct FlatnessArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Axis-aligned window as X0,Y0,X1,Y1.
    #[arg(long, value_parser = parse_window)]
    pub window: BBox,
    /// Tolerance for slices to agree and for gaps in the interval factor.
    #[arg(long)]
    pub axis_tol: f64,
    /// Sampling resolution (default axis_tol / 5).
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TilingArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Open set JSON, e.g. {"polygon": [[0,0],[1,0],[0.5,0.3]]} (default: the catalog's).
    #[arg(long, value_name = "FILE")]
    pub open_set: Option<PathBuf>,
    /// Compatibility tolerance (default 1e-2 times the hull diameter).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Also list the tiles of words up to this length.
    #[arg(long)]
    pub depth: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// Entry to show; all standard sets when absent.
    pub name: Option<String>,
    /// Print the entry as JSON.
    #[arg(long)]
    pub json: bool,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(':').ok_or("expected MIN:MAX")?;
    let a: f64 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if !(a > 0.0 && a < b && b.is_finite()) {
        return Err(format!("need 0 < MIN < MAX, got {a}:{b}"));
    }
    Ok((a, b))
}

fn parse_window(s: &str) -> std::result::Result<BBox, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    if v.len() != 4 || !(v[0] < v[2] && v[1] < v[3]) {
        return Err("expected X0,Y0,X1,Y1 with X0 < X1 and Y0 < Y1".into());
    }
    Ok(BBox::new(Point::new(v[0], v[1]), Point::new(v[2], v[3])))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", p.display())))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON value");
    s.push('\n');
    s
}

struct Loaded {
    ifs: Ifs,
    entry: Option<CatalogEntry>,
}

fn load(src: &SourceArgs) -> Result<Loaded> {
    match (&src.catalog, &src.input) {
        (Some(name), _) => {
            let entry = catalog::lookup(name)?;
            let ifs = entry
                .ifs
                .clone()
                .ok_or_else(|| Error::Catalog(format!("{} has no IFS", entry.name)))?;
            Ok(Loaded { ifs, entry: Some(entry) })
        }
        (None, Some(path)) => Ok(Loaded {
            ifs: Ifs::from_json(&read(path)?)?,
            entry: None,
        }),
        (None, None) => Err(Error::InvalidArgument("give --catalog NAME or --in FILE".into())),
    }
}

/// Writes `PREFIX_<name>.dat` per column and a gnuplot script `PREFIX.gp`.
fn write_plot(prefix: &Path, columns: &[(&str, Vec<(f64, f64)>)]) -> Result<()> {
    let stem = prefix
        .file_name()
        .and_then(|s| s.to_str())
        .ok_or_else(|| Error::InvalidArgument(format!("bad plot prefix {}", prefix.display())))?;
    let dir = prefix.parent().unwrap_or(Path::new(""));
    let mut script = String::from("set logscale xy\nset xlabel \"eps\"\nset key left bottom\nplot \\\n");
    for (i, (name, rows)) in columns.iter().enumerate() {
        let file = format!("{stem}_{name}.dat");
        let mut data = format!("# eps {name}\n");
        for (e, v) in rows.iter().filter(|r| r.1 > 0.0) {
            let _ = writeln!(data, "{e:e} {v:e}");
        }
        fs::write(dir.join(&file), data)?;
        let sep = if i + 1 < columns.len() { ", \\" } else { "" };
        let _ = writeln!(script, "  \"{file}\" using 1:2 with linespoints title \"{name}\"{sep}");
    }
    fs::write(dir.join(format!("{stem}.gp")), script)?;
    Ok(())
}

fn sweep(a: &SweepArgs) -> Result<()> {
    let loaded = load(&a.source)?;
    let (lo, hi) = a.grid.eps;
    let grid = geometric_grid(lo, hi, a.grid.ratio)?;
    let delta = a.delta.unwrap_or(lo / 10.0);
    let eps_min = *grid.last().expect("nonempty grid");
    if delta > eps_min / 10.0 * (1.0 + 1e-12) {
        return Err(Error::AccuracyGuard { eps: eps_min, resolution: delta });
    }
    let mut opts = SweepOptions::new(delta);
    opts.adaptive = !a.no_adaptive;
    opts.certificate = !a.no_certificate;
    let rows = sweep_ifs(&loaded.ifs, &grid, opts)?;
    let text = match a.format {
        Format::Csv => {
            let mut s = format!("{}\n", CurvatureSample::CSV_HEADER);
            for r in &rows {
                s.push_str(&r.csv());
                s.push('\n');
            }
            s
        }
        Format::Json => pretty(&serde_json::to_value(&rows)?),
    };
    emit(a.source.out.as_deref(), &text)?;
    if let Some(prefix) = &a.plot {
        let col = |f: fn(&CurvatureSample) -> f64| rows.iter().map(|r| (r.eps, f(r))).collect::<Vec<_>>();
        write_plot(prefix, &[("c0var", col(|r| r.c0var)), ("c1", col(|r| r.c1)), ("c2", col(|r| r.c2))])?;
    }
    Ok(())
}

/// Reads a sweep CSV or a two-column `eps,value` CSV.
pub fn read_series(text: &str, k: usize) -> Result<ScalingSeries> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty table".into()))?;
    let rows = if header == CurvatureSample::CSV_HEADER {
        let samples = lines.map(CurvatureSample::parse_csv).collect::<Result<Vec<_>>>()?;
        return ScalingSeries::from_samples(k, &samples);
    } else if header.split(',').count() == 2 && header.split(',').all(|f| f.trim().parse::<f64>().is_err()) {
        lines
            .map(|l| {
                let (e, v) = l.split_once(',').ok_or_else(|| Error::Parse(format!("expected eps,value: '{l}'")))?;
                let num = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("'{s}': {e}")));
                Ok((num(e)?, num(v)?))
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        return Err(Error::Parse(format!("unrecognised table header '{header}'")));
    };
    ScalingSeries::new(k, rows)
}

fn exponents(a: &ExponentArgs) -> Result<()> {
    let series = read_series(&read(&a.input)?, a.k)?;
    let d = fit_exponent_with_period(&series, a.period)?;
    let avg = fit_average_exponent(&series)?;
    let v = json!({
        "k": a.k,
        "s_hat": d.s_hat,
        "a_hat": avg.s_hat,
        "stderr": d.stderr,
        "oscillation": d.oscillation_amp,
        "rows_used": d.rows_used,
        "dropped": d.dropped,
        "residual_rms": d.residual_rms,
    });
    emit(a.out.as_deref(), &pretty(&v))
}

fn string_cmd(a: &StringArgs) -> Result<()> {
    let s: FractalString = match (&a.catalog, &a.input) {
        (Some(name), _) => catalog::lookup(name)?.fractal_string(a.depth)?,
        (None, Some(path)) => {
            let text = read(path)?;
            if path.extension().is_some_and(|e| e == "json") {
                string_from_ifs(&Ifs::from_json(&text)?, a.depth)?
            } else {
                FractalString::parse(&text)?
            }
        }
        (None, None) => return Err(Error::InvalidArgument("give --catalog NAME or --in FILE".into())),
    };
    let grid = geometric_grid(a.grid.eps.0, a.grid.eps.1, a.grid.ratio)?;
    let rows = grid.iter().map(|&e| s.row(e, a.d)).collect::<Result<Vec<StringCurvatureRow>>>()?;
    let text = match a.format {
        Format::Csv => {
            let mut t = format!("{}\n", StringCurvatureRow::CSV_HEADER);
            for r in &rows {
                t.push_str(&r.csv());
                t.push('\n');
            }
            t
        }
        Format::Json => pretty(&serde_json::to_value(&rows)?),
    };
    emit(a.out.as_deref(), &text)?;
    if let Some(prefix) = &a.plot {
        let col = |f: fn(&StringCurvatureRow) -> f64| rows.iter().map(|r| (r.eps, f(r))).collect::<Vec<_>>();
        write_plot(
            prefix,
            &[
                ("c0var_1d", col(|r| r.c0var_1d)),
                ("c0var_2d", col(|r| r.c0var_2d)),
                ("c0var_dd_bound", col(|r| r.c0var_dd_bound)),
            ],
        )?;
    }
    Ok(())
}

fn clusters_cmd(a: &ClusterArgs) -> Result<()> {
    let loaded = load(&a.source)?;
    let tol = a.tol.unwrap_or(crate::structure::DEFAULT_CONTACT_TOL * loaded.ifs.diam());
    let c = clusters(&loaded.ifs, a.level, tol)?;
    let mut v = json!({
        "level": c.level,
        "count": c.len(),
        "separation": c.separation,
        "contact_tol": c.contact_tol,
        "resolution": c.resolution,
    });
    if !a.counts_only {
        v["clusters"] = serde_json::to_value(&c.clusters)?;
    }
    if let Some(probe) = a.probe {
        let sample = loaded.ifs.sample(probe)?;
        v["bounded_complement"] = serde_json::to_value(bounded_complement_component(&sample, probe)?)?;
    }
    emit(a.source.out.as_deref(), &pretty(&v))
}

fn flatness_cmd(a: &FlatnessArgs) -> Result<()> {
    let loaded = load(&a.source)?;
    let delta = a.delta.unwrap_or(a.axis_tol / 5.0);
    let sample = loaded.ifs.sample(delta)?;
    let axis = product_axis(&sample, &a.window, a.axis_tol)?;
    let v = json!({
        "flat": axis.is_some(),
        "axis": axis,
        "window": a.window,
        "axis_tol": a.axis_tol,
        "resolution": delta,
    });
    emit(a.source.out.as_deref(), &pretty(&v))
}

fn tiling_cmd(a: &TilingArgs) -> Result<()> {
    let loaded = load(&a.source)?;
    let open: FeasibleOpenSet = match (&a.open_set, loaded.entry.as_ref().and_then(|e| e.open_set.clone())) {
        (Some(path), _) => serde_json::from_str(&read(path)?)?,
        (None, Some(o)) => o,
        (None, None) => return Err(Error::InvalidArgument("give --open-set FILE".into())),
    };
    let tol = a.tol.unwrap_or(1e-2 * loaded.ifs.diam());
    let report = tiling_compatible(&loaded.ifs, &open, tol)?;
    let mut v = serde_json::to_value(&report)?;
    if let Some(depth) = a.depth {
        v["tiles"] = serde_json::to_value(tiling_generator(&loaded.ifs, &open, depth)?.tiles)?;
    }
    emit(a.source.out.as_deref(), &pretty(&v))
}

fn dim_cmd(a: &SourceArgs) -> Result<()> {
    let loaded = load(a)?;
    let ifs = &loaded.ifs;
    let v = json!({
        "name": loaded.entry.as_ref().map(|e| e.name.clone()),
        "maps": ifs.len(),
        "ambient_dim": ifs.dim(),
        "ratios": ifs.ratios().collect::<Vec<_>>(),
        "moran_dimension": ifs.moran_dimension(),
        "hull": ifs.hull(),
    });
    emit(a.out.as_deref(), &pretty(&v))
}

fn entry_json(e: &CatalogEntry) -> Value {
    let kind = match &e.construction {
        Construction::SelfSimilar => "self-similar",
        Construction::Product(_) => "product",
        Construction::General(_) => "explicit",
        Construction::BoundaryDimension { .. } => "expected-only",
    };
    json!({
        "name": e.name,
        "kind": kind,
        "maps": e.ifs.as_ref().map(Ifs::len),
        "expected": e.expected,
        "open_set": e.open_set,
    })
}

fn catalog_cmd(a: &CatalogArgs) -> Result<()> {
    let entries = match &a.name {
        Some(n) => vec![catalog::lookup(n)?],
        None => catalog::standard_sets(),
    };
    let text = if a.json {
        pretty(&Value::Array(entries.iter().map(entry_json).collect()))
    } else {
        let mut s = String::new();
        for e in &entries {
            let _ = writeln!(s, "{e}");
        }
        if a.name.is_none() {
            s.push_str("parametrised: example1:n=N,m=M  example2:k=K,m=M  general:a=A,b=B\n");
        }
        s
    };
    emit(a.out.as_deref(), &text)
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Dim(a) => dim_cmd(a),
        Command::Sweep(a) => sweep(a),
        Command::Exponents(a) => exponents(a),
        Command::String(a) => string_cmd(a),
        Command::Clusters(a) => clusters_cmd(a),
        Command::Flatness(a) => flatness_cmd(a),
        Command::Tiling(a) => tiling_cmd(a),
        Command::Catalog(a) => catalog_cmd(a),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Errors go to stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::USAGE } else { exit::OK };
        }
    };
    match run(&cli) {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
