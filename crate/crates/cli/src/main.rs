use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use isolab::generators::{GeneratorConfig, LoadedSpace};
use isolab::harness::{
    emit_plot, emit_report, run_experiment, ExperimentBudget, ExperimentName, ExperimentSpec,
    PlotCurve, PlotOptions, ReportFormat,
};
use isolab::profiles::{
    compare, compare_equivalent, exact_profile, family_profile, Curve, FamilySpec, Grid, Mode,
    ProfileCurve, Relation,
};
use isolab::space::{ball, growth_curve, Budget, GrowthCurve, Length, VertexId};
use isolab::Error;
use serde_json::{Map, Value};

const EXIT_CLAIM_FAILED: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "isolab", version, about = "Isoperimetric profiles and counterexample spaces")]
struct Cli {
    /// JSON object supplying defaults for any flag; flags given on the
    /// command line win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Cap on vertices explored by a single search.
    #[arg(long, global = true)]
    max_vertices: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a generator and write its config with a description of its sets.
    Generate(GenerateArgs),
    /// Compute an exact or family profile.
    Profile(ProfileArgs),
    /// Ball volumes around a center.
    Growth(GrowthArgs),
    /// Run a named experiment and write its report.
    Verify(VerifyArgs),
    /// Compare two curves up to multiplicative constants.
    Compare(CompareArgs),
}

#[derive(Args, Debug)]
struct GenerateArgs {
    generator: Option<String>,
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    #[arg(long)]
    space: Option<PathBuf>,
    /// Boundary thickness in scaled units.
    #[arg(long)]
    h: Option<Length>,
    /// Enumerate all subsets (finite spaces up to 22 vertices).
    #[arg(long)]
    exact: bool,
    /// Restrict the exact profile to metrically connected subsets.
    #[arg(long)]
    connected: bool,
    #[arg(long)]
    gap: Option<Length>,
    /// `balls` or `named:<set>`; a trailing `*` matches a prefix.
    #[arg(long)]
    family: Option<String>,
    /// Ball centers separated by `;`, each like `0,0`.
    #[arg(long)]
    centers: Option<String>,
    /// Radii as `a..b`, `a..=b` or a comma list, in scaled units.
    #[arg(long)]
    radii: Option<String>,
    /// Use the upper family profile instead of the lower one.
    #[arg(long)]
    upper: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write `t,value` CSV instead of JSON.
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug)]
struct GrowthArgs {
    #[arg(long)]
    space: Option<PathBuf>,
    #[arg(long)]
    center: Option<String>,
    #[arg(long)]
    radii: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    experiment: Option<String>,
    #[arg(long)]
    params: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
    /// `json` or `csv`.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Linear axes in the plot.
    #[arg(long)]
    linear: bool,
    #[arg(long)]
    wall_clock_secs: Option<u64>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[arg(long)]
    f: Option<PathBuf>,
    #[arg(long)]
    g: Option<PathBuf>,
    /// Constant grid such as `2^0..2^10`.
    #[arg(long)]
    grid: Option<String>,
    /// Decide equivalence instead of domination.
    #[arg(long)]
    equivalent: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Flag values from the config file, looked up by long flag name with
/// dashes or underscores.
struct Config(Map<String, Value>);

impl Config {
    fn load(path: Option<&Path>) -> Result<Self, Error> {
        let Some(path) = path else {
            return Ok(Config(Map::new()));
        };
        match serde_json::from_str(&std::fs::read_to_string(path)?)? {
            Value::Object(m) => Ok(Config(m)),
            _ => Err(Error::invalid("the config file must hold a JSON object")),
        }
    }

    fn raw(&self, key: &str) -> Option<&Value> {
        self.0.get(key).or_else(|| self.0.get(&key.replace('-', "_")))
    }

    fn get<T: serde::de::DeserializeOwned>(&self, key: &str) -> Result<Option<T>, Error> {
        self.raw(key)
            .map(|v| {
                serde_json::from_value(v.clone())
                    .map_err(|e| Error::invalid(format!("config key {key}: {e}")))
            })
            .transpose()
    }

    fn flag(&self, key: &str, given: bool) -> Result<bool, Error> {
        Ok(given || self.get::<bool>(key)?.unwrap_or(false))
    }

    /// A params value: an inline object in the config or a path to a JSON file.
    fn params(&self, flag: Option<&PathBuf>) -> Result<Value, Error> {
        if let Some(p) = flag {
            return read_json(p);
        }
        match self.raw("params") {
            None => Ok(Value::Object(Map::new())),
            Some(Value::String(p)) => read_json(Path::new(p)),
            Some(v @ Value::Object(_)) => Ok(v.clone()),
            Some(_) => Err(Error::invalid("config params must be an object or a path")),
        }
    }
}

fn pick<T: serde::de::DeserializeOwned>(flag: Option<T>, cfg: &Config, key: &str) -> Result<Option<T>, Error> {
    match flag {
        Some(v) => Ok(Some(v)),
        None => cfg.get(key),
    }
}

fn require<T>(v: Option<T>, key: &str) -> Result<T, Error> {
    v.ok_or_else(|| Error::invalid(format!("missing {key}; pass it on the command line or in --config")))
}

fn read_json(path: &Path) -> Result<Value, Error> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> Result<String, Error> {
    let mut s = serde_json::to_string_pretty(&serde_json::to_value(v)?)?;
    s.push('\n');
    Ok(s)
}

fn parse_radii(spec: &str) -> Result<Vec<Length>, Error> {
    let bad = || Error::invalid(format!("cannot parse radii {spec:?}"));
    let num = |s: &str| s.trim().parse::<Length>().map_err(|_| bad());
    let mut out: Vec<Length> = if let Some((a, b)) = spec.split_once("..=") {
        (num(a)?..=num(b)?).collect()
    } else if let Some((a, b)) = spec.split_once("..") {
        (num(a)?..num(b)?).collect()
    } else {
        spec.split(',').map(num).collect::<Result<_, _>>()?
    };
    out.sort_unstable();
    out.dedup();
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

fn parse_grid(spec: &str) -> Result<Grid, Error> {
    let bad = || Error::invalid(format!("grid must look like 2^0..2^10, got {spec:?}"));
    let (lo, hi) = spec.split_once("..").ok_or_else(bad)?;
    let exp = |s: &str| s.trim().strip_prefix("2^").and_then(|e| e.parse::<u32>().ok()).ok_or_else(bad);
    if exp(lo)? != 0 {
        return Err(Error::invalid("the grid must start at 2^0"));
    }
    let max_exp = exp(hi)?;
    if max_exp > 30 {
        return Err(Error::invalid("grid exponents above 30 are not supported"));
    }
    Ok(Grid { max_exp })
}

fn parse_curve(value: Value) -> Result<Curve, Error> {
    if value.get("kind").is_some() {
        let p: ProfileCurve = serde_json::from_value(value)?;
        Ok(Curve::from_profile(&p))
    } else if value.get("center").is_some() {
        let g: GrowthCurve = serde_json::from_value(value)?;
        Ok(Curve::from_growth(&g))
    } else if value.get("shape").is_some() {
        Ok(serde_json::from_value(value)?)
    } else {
        Err(Error::invalid("expected a profile, growth curve or curve document"))
    }
}

fn budget(cli: &Cli, cfg: &Config) -> Result<Budget, Error> {
    let max = pick(cli.max_vertices, cfg, "max-vertices")?;
    Ok(max.map(Budget::new).unwrap_or_default())
}

fn generate(a: &GenerateArgs, cfg: &Config, budget: Budget) -> Result<u8, Error> {
    let name: String = require(pick(a.generator.clone(), cfg, "generator")?, "generator")?;
    let config = GeneratorConfig::from_params(&name, cfg.params(a.params.as_ref())?)?;
    let built = config.build(budget)?;
    let mut doc = config.to_json();
    doc["describe"] = built.describe()?;
    let out: Option<PathBuf> = pick(a.out.clone(), cfg, "out")?;
    write_out(out.as_deref(), &pretty(&doc)?)?;
    Ok(0)
}

fn profile(a: &ProfileArgs, cfg: &Config, budget: Budget) -> Result<u8, Error> {
    let path: PathBuf = require(pick(a.space.clone(), cfg, "space")?, "space")?;
    let loaded = LoadedSpace::load(&path, budget)?;
    let space = loaded.space();
    let h = pick(a.h, cfg, "h")?.unwrap_or(space.scale());
    let exact = cfg.flag("exact", a.exact)?;
    let family: Option<String> = pick(a.family.clone(), cfg, "family")?;
    let curve = match (exact, family) {
        (true, None) => {
            let connected = cfg.flag("connected", a.connected)?;
            let gap = pick(a.gap, cfg, "gap")?.unwrap_or(10 * space.scale());
            exact_profile(space, h, connected, gap)?
        }
        (false, Some(fam)) => {
            let spec = build_family(&loaded, &fam, a, cfg, budget)?;
            let mode = if cfg.flag("upper", a.upper)? { Mode::Upper } else { Mode::Lower };
            family_profile(space, &spec, h, mode, budget)?
        }
        _ => return Err(Error::invalid("give exactly one of --exact and --family")),
    };
    let out: Option<PathBuf> = pick(a.out.clone(), cfg, "out")?;
    let text = if cfg.flag("csv", a.csv)? { curve.to_csv_string()? } else { pretty(&curve)? };
    write_out(out.as_deref(), &text)?;
    Ok(0)
}

fn build_family(
    loaded: &LoadedSpace,
    fam: &str,
    a: &ProfileArgs,
    cfg: &Config,
    budget: Budget,
) -> Result<FamilySpec, Error> {
    let space = loaded.space();
    if fam == "balls" {
        let centers: Vec<VertexId> = match pick(a.centers.clone(), cfg, "centers")? {
            Some(list) => list
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.parse())
                .collect::<Result<_, _>>()?,
            None => space
                .finite_vertices()
                .ok_or_else(|| Error::invalid("--centers is required on infinite spaces"))?
                .to_vec(),
        };
        let radii = parse_radii(&require(pick(a.radii.clone(), cfg, "radii")?, "radii")?)?;
        let mut spec = FamilySpec::new("balls");
        for c in centers {
            if !space.contains(c) {
                return Err(Error::invalid(format!("{c} is not a vertex of the space")));
            }
            for &r in &radii {
                spec.push(format!("B({c},{r})"), ball(space, c, r, budget)?);
            }
        }
        return Ok(spec);
    }
    let pattern = fam
        .strip_prefix("named:")
        .ok_or_else(|| Error::invalid("--family must be `balls` or `named:<set>`"))?;
    let mut spec = FamilySpec::new(pattern);
    for (name, set) in loaded.named_sets()? {
        let hit = match pattern.strip_suffix('*') {
            Some(prefix) => name.starts_with(prefix),
            None => name == pattern,
        };
        if hit {
            spec.push(name, set);
        }
    }
    if spec.is_empty() {
        return Err(Error::invalid(format!("no named set matches {pattern}")));
    }
    Ok(spec)
}

fn growth(a: &GrowthArgs, cfg: &Config, budget: Budget) -> Result<u8, Error> {
    let path: PathBuf = require(pick(a.space.clone(), cfg, "space")?, "space")?;
    let loaded = LoadedSpace::load(&path, budget)?;
    let center: VertexId = require(pick(a.center.clone(), cfg, "center")?, "center")?.parse()?;
    if !loaded.space().contains(center) {
        return Err(Error::invalid(format!("{center} is not a vertex of the space")));
    }
    let radii = parse_radii(&require(pick(a.radii.clone(), cfg, "radii")?, "radii")?)?;
    let g = growth_curve(loaded.space(), center, &radii, budget)?;
    let out: Option<PathBuf> = pick(a.out.clone(), cfg, "out")?;
    write_out(out.as_deref(), &pretty(&g)?)?;
    if let Some(plot) = pick(a.plot.clone(), cfg, "plot")? {
        let svg = emit_plot(
            &[PlotCurve::from_growth(format!("V(r) at {center}"), &g)],
            &PlotOptions { title: "volume growth".into(), ..PlotOptions::default() },
        )?;
        std::fs::write::<PathBuf, _>(plot, svg)?;
    }
    Ok(0)
}

fn verify(a: &VerifyArgs, cfg: &Config, budget: Budget) -> Result<u8, Error> {
    let name: String = require(pick(a.experiment.clone(), cfg, "experiment")?, "experiment")?;
    let name: ExperimentName = name.parse()?;
    let spec = ExperimentSpec {
        name,
        params: cfg.params(a.params.as_ref())?,
        budget: ExperimentBudget {
            max_vertices: budget.max_vertices,
            wall_clock_secs: pick(a.wall_clock_secs, cfg, "wall-clock-secs")?,
        },
    };
    let report = run_experiment(&spec)?;
    let format = match pick(a.format.clone(), cfg, "format")?.as_deref() {
        None | Some("json") => ReportFormat::Json,
        Some("csv") => ReportFormat::Csv,
        Some(other) => return Err(Error::invalid(format!("unknown format {other}"))),
    };
    match pick(a.report.clone(), cfg, "report")? {
        Some(path) => {
            emit_report(&report, format, &path)?;
        }
        None => print!("{}", report.to_json_string()?),
    }
    if let Some(plot) = pick::<PathBuf>(a.plot.clone(), cfg, "plot")? {
        let options = PlotOptions {
            title: name.to_string(),
            log_log: !cfg.flag("linear", a.linear)?,
            ..PlotOptions::default()
        };
        std::fs::write(plot, emit_plot(&report.series, &options)?)?;
    }
    for x in &report.assertions {
        eprintln!("{} {}", if x.passed { "pass" } else { "FAIL" }, x.name);
    }
    if let Some(reason) = &report.failure {
        eprintln!("stopped: {reason}");
    }
    Ok(if report.budget_exceeded {
        EXIT_BUDGET
    } else if report.passed {
        0
    } else {
        EXIT_CLAIM_FAILED
    })
}

fn compare_cmd(a: &CompareArgs, cfg: &Config) -> Result<u8, Error> {
    let f = parse_curve(read_json(&require(pick(a.f.clone(), cfg, "f")?, "f")?)?)?;
    let g = parse_curve(read_json(&require(pick(a.g.clone(), cfg, "g")?, "g")?)?)?;
    let grid = match pick(a.grid.clone(), cfg, "grid")? {
        Some(s) => parse_grid(&s)?,
        None => Grid::default(),
    };
    let w = if cfg.flag("equivalent", a.equivalent)? {
        compare_equivalent(&f, &g, grid)?
    } else {
        compare(&f, &g, grid)?
    };
    let out: Option<PathBuf> = pick(a.out.clone(), cfg, "out")?;
    write_out(out.as_deref(), &pretty(&w)?)?;
    Ok(if w.relation == Relation::Refuted { EXIT_CLAIM_FAILED } else { 0 })
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let cfg = Config::load(cli.config.as_deref())?;
    let budget = budget(cli, &cfg)?;
    match &cli.command {
        Command::Generate(a) => generate(a, &cfg, budget),
        Command::Profile(a) => profile(a, &cfg, budget),
        Command::Growth(a) => growth(a, &cfg, budget),
        Command::Verify(a) => verify(a, &cfg, budget),
        Command::Compare(a) => compare_cmd(a, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INVALID } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Error::BudgetExceeded { limit }) => {
            eprintln!("error: budget exceeded: more than {limit} vertices explored");
            ExitCode::from(EXIT_BUDGET)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
