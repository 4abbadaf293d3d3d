//! Subcommands.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use polylat::constructs::{build_phi30, build_phi_chain, comb_decompose, comb_plus_map, straight_comb_witness};
use polylat::enumerate::{count_by_topology_with, summarize, Budget, EnumerationSummary, TopologyTable};
use polylat::statmech::{
    comb_surface_check, growth_lower_bound_madras, monotone_lower_bound, submultiplicative_upper_bound, thermo,
    BetaGrid,
};
use polylat::topology::knot_invariant;
use polylat::{Boundary, CombSignature, Convention, EnsembleSpec, Polymer, PolymerClass};
use serde_json::{json, Value};

use crate::cache::{write_atomic, Cache};
use crate::{json as j, repro, Failure, Outcome};

#[derive(Parser, Debug)]
#[command(name = "polylat", version, about = "Exact enumeration of lattice polymers at an adsorbing surface")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Count an ensemble and write its visit histogram.
    Enumerate(EnumArgs),
    /// Annealed and quenched free energies over a β grid.
    Thermo(ThermoArgs),
    /// As `thermo`, with the per-topology table included.
    Quenched(ThermoArgs),
    /// Growth-constant bounds from counts.
    Bounds(BoundsArgs),
    /// Build a polymer from a recipe.
    Construct(ConstructArgs),
    /// Knot invariant of a polygon file.
    Knot(KnotArgs),
    /// Split a comb into two combs and a walk.
    Decompose(DecomposeArgs),
    /// Run the acceptance table.
    Repro(ReproArgs),
}

#[derive(Args, Debug, Clone)]
struct SpecArgs {
    #[arg(long, value_parser = parse_class)]
    class: PolymerClass,
    #[arg(long)]
    dim: usize,
    /// Sites for animals and trees, edges otherwise.
    #[arg(long)]
    size: usize,
    #[arg(long, default_value = "penetrable", value_parser = parse_boundary)]
    boundary: Boundary,
    #[arg(long, default_value = "contains-origin", value_parser = parse_convention)]
    convention: Convention,
}

#[derive(Args, Debug, Clone)]
struct RunArgs {
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Cap on search-tree nodes.
    #[arg(long)]
    budget: Option<u64>,
    /// Overrides the per-class size limit.
    #[arg(long)]
    max_size: Option<usize>,
    /// Cache directory; `POLYLAT_CACHE` takes precedence.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    no_cache: bool,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct EnumArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Break the histogram down by topology.
    #[arg(long)]
    by_topology: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args, Debug)]
struct ThermoArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[command(flatten)]
    run: RunArgs,
    /// Explicit comma-separated β values; overrides the range flags.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    betas: Option<Vec<f64>>,
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    beta_min: f64,
    #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
    beta_max: f64,
    #[arg(long, default_value_t = 0.25)]
    beta_step: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// Tree lower bound from `t_N`.
    #[arg(long, group = "which")]
    madras: bool,
    /// `max_n a_n^{1/n}` for a supermultiplicative sequence.
    #[arg(long, group = "which")]
    monotone: bool,
    /// `min_n (g a_n)^{1/n}` for `a_{m+n} ≤ g a_m a_n`.
    #[arg(long, group = "which")]
    submultiplicative: bool,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long)]
    n: Option<usize>,
    /// `t_N`; enumerated when absent.
    #[arg(long)]
    count: Option<BigUint>,
    /// `a_1,a_2,…`
    #[arg(long, value_delimiter = ',')]
    counts: Option<Vec<BigUint>>,
    /// Constant `g` for the submultiplicative bound.
    #[arg(long, default_value_t = 1.0)]
    g: f64,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[command(subcommand)]
    recipe: Recipe,
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Recipe {
    /// The 30-edge trefoil polygon.
    #[command(name = "phi30")]
    Phi30,
    /// `t` trefoils joined into one comb-shaped polygon.
    #[command(name = "phi_chain")]
    PhiChain {
        #[arg(long)]
        t: usize,
    },
    /// Straight comb with a given signature, side chains into the bulk.
    #[command(name = "witness")]
    Witness {
        #[arg(long)]
        signature: String,
        #[arg(long, default_value_t = 3)]
        dim: usize,
    },
    /// Image of a comb under the plus-two map.
    #[command(name = "plus_map")]
    PlusMap {
        #[arg(default_value = "-")]
        input: PathBuf,
    },
}

#[derive(Args, Debug)]
struct KnotArgs {
    #[arg(default_value = "-")]
    input: PathBuf,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[arg(default_value = "-")]
    input: PathBuf,
    /// Edges in the first comb.
    #[arg(long)]
    split: usize,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReproArgs {
    /// Comma-separated criterion numbers; all when absent.
    #[arg(long, value_delimiter = ',')]
    only: Option<Vec<u8>>,
    /// Also run the multi-hour extended tree counts.
    #[arg(long)]
    extended: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn parse_class(s: &str) -> Result<PolymerClass, String> {
    s.parse().map_err(|e: polylat::Error| e.to_string())
}

fn parse_boundary(s: &str) -> Result<Boundary, String> {
    s.parse().map_err(|e: polylat::Error| e.to_string())
}

fn parse_convention(s: &str) -> Result<Convention, String> {
    s.parse().map_err(|e: polylat::Error| e.to_string())
}

/// What a command produced, plus the status line fields.
struct Done {
    body: String,
    output: Option<PathBuf>,
    cache_hit: Option<bool>,
    checks_pass: Option<bool>,
    exit: i32,
}

impl Done {
    fn new(body: String, output: Option<PathBuf>) -> Self {
        Done { body, output, cache_hit: None, checks_pass: None, exit: 0 }
    }
}

/// Parses `args` (including the program name), runs, and returns the exit
/// code. Errors go to standard error as one JSON object.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => return fail(&Failure::Validation(e.to_string().trim_end().to_string())),
    };
    let name = command_name(&cli.cmd);
    match dispatch(cli.cmd) {
        Ok(done) => match emit(&done) {
            Ok(()) => {
                let mut status = json!({ "status": "ok", "command": name });
                if let Some(h) = done.cache_hit {
                    status["cache_hit"] = h.into();
                }
                if let Some(c) = done.checks_pass {
                    status["checks_pass"] = c.into();
                }
                if let Some(p) = &done.output {
                    status["output"] = p.display().to_string().into();
                }
                eprintln!("{status}");
                done.exit
            }
            Err(e) => fail(&e),
        },
        Err(e) => fail(&e),
    }
}

fn fail(e: &Failure) -> i32 {
    eprintln!("{}", e.to_json());
    e.code()
}

fn emit(d: &Done) -> Outcome<()> {
    match &d.output {
        Some(p) => write_atomic(p, d.body.as_bytes())?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(d.body.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn command_name(c: &Cmd) -> &'static str {
    match c {
        Cmd::Enumerate(_) => "enumerate",
        Cmd::Thermo(_) => "thermo",
        Cmd::Quenched(_) => "quenched",
        Cmd::Bounds(_) => "bounds",
        Cmd::Construct(_) => "construct",
        Cmd::Knot(_) => "knot",
        Cmd::Decompose(_) => "decompose",
        Cmd::Repro(_) => "repro",
    }
}

fn dispatch(cmd: Cmd) -> Outcome<Done> {
    match cmd {
        Cmd::Enumerate(a) => cmd_enumerate(a),
        Cmd::Thermo(a) => cmd_thermo(a, false),
        Cmd::Quenched(a) => cmd_thermo(a, true),
        Cmd::Bounds(a) => cmd_bounds(a),
        Cmd::Construct(a) => cmd_construct(a),
        Cmd::Knot(a) => cmd_knot(a),
        Cmd::Decompose(a) => cmd_decompose(a),
        Cmd::Repro(a) => cmd_repro(a),
    }
}

impl SpecArgs {
    fn spec(&self) -> Outcome<EnsembleSpec> {
        Ok(EnsembleSpec::new(self.class, self.dim, self.size, self.boundary, self.convention)?)
    }
}

impl RunArgs {
    fn budget(&self) -> Outcome<Budget> {
        if self.threads == 0 {
            return Err(Failure::Validation("--threads must be positive".into()));
        }
        Ok(Budget { max_size: self.max_size, max_nodes: self.budget, threads: self.threads })
    }

    fn cache(&self) -> Cache {
        Cache::resolve(self.cache_dir.clone(), self.no_cache)
    }
}

/// Topology table through the cache.
fn cached_table(spec: &EnsembleSpec, run: &RunArgs) -> Outcome<(TopologyTable, bool)> {
    let cache = run.cache();
    if let Some(v) = cache.get("table", spec) {
        if let (Ok(s), Some(t)) = (j::spec_from(&v["spec"]), v.get("topologies")) {
            if &s == spec {
                return Ok((j::table_from(*spec, t)?, true));
            }
        }
    }
    let t = count_by_topology_with(spec, &run.budget()?)?;
    let s = EnumerationSummary { spec: *spec, total: t.total(), visit_histogram: t.marginal(), wall_time: 0.0 };
    cache.put("table", spec, &j::summary_doc(&s, Some(&t)))?;
    Ok((t, false))
}

fn cached_summary(spec: &EnsembleSpec, run: &RunArgs) -> Outcome<(EnumerationSummary, bool)> {
    let cache = run.cache();
    for what in ["summary", "table"] {
        if let Some(v) = cache.get(what, spec) {
            if let Ok(s) = j::summary_from(&v) {
                if &s.spec == spec {
                    return Ok((s, true));
                }
            }
        }
    }
    let s = summarize(spec, &run.budget()?)?;
    cache.put("summary", spec, &j::summary_doc(&s, None))?;
    Ok((s, false))
}

fn cmd_enumerate(a: EnumArgs) -> Outcome<Done> {
    let spec = a.spec.spec()?;
    let (summary, table, hit) = if a.by_topology {
        let (t, hit) = cached_table(&spec, &a.run)?;
        let s = EnumerationSummary { spec, total: t.total(), visit_histogram: t.marginal(), wall_time: 0.0 };
        (s, Some(t), hit)
    } else {
        let (s, hit) = cached_summary(&spec, &a.run)?;
        (s, None, hit)
    };
    let body = match a.format {
        Format::Json => j::render(&j::summary_doc(&summary, table.as_ref())),
        Format::Csv => enumerate_csv(&summary, table.as_ref()),
    };
    let mut d = Done::new(body, a.run.output.clone());
    d.cache_hit = Some(hit);
    Ok(d)
}

fn enumerate_csv(s: &EnumerationSummary, t: Option<&TopologyTable>) -> String {
    let sp = &s.spec;
    let lead = format!("{},{},{},{},{}", sp.class, sp.d, sp.size, sp.boundary, sp.convention);
    let mut out = String::from("class,d,N,boundary,convention,topology,k,count\n");
    for (k, c) in s.visit_histogram.iter() {
        out.push_str(&format!("{lead},all,{k},{c}\n"));
    }
    for (key, h) in t.iter().flat_map(|t| t.classes.iter()) {
        for (k, c) in h.iter() {
            out.push_str(&format!("{lead},{key},{k},{c}\n"));
        }
    }
    out
}

fn cmd_thermo(a: ThermoArgs, quenched: bool) -> Outcome<Done> {
    let spec = a.spec.spec()?;
    let grid = match &a.betas {
        Some(b) => BetaGrid::new(b.clone())?,
        None => BetaGrid::range(a.beta_min, a.beta_max, a.beta_step)?,
    };
    let (t, hit) = cached_table(&spec, &a.run)?;
    let r = thermo(&t, &grid)?;
    let comb = if spec.class == PolymerClass::Comb { Some(comb_surface_check(&t, grid.values())?) } else { None };
    let doc = j::thermo_doc(if quenched { "quenched" } else { "thermo" }, &r, &t, comb.as_ref(), quenched);
    let pass = doc["checks"]["all_pass"].as_bool().unwrap_or(false);
    let body = match a.format {
        Format::Json => j::render(&doc),
        Format::Csv => j::thermo_csv(&r),
    };
    let mut d = Done::new(body, a.run.output.clone());
    d.cache_hit = Some(hit);
    d.checks_pass = Some(pass);
    Ok(d)
}

fn cmd_bounds(a: BoundsArgs) -> Outcome<Done> {
    let mut m = j::header("bounds");
    let bound = if a.madras {
        let n = a.n.ok_or_else(|| Failure::Validation("--madras needs --n".into()))?;
        let count = match a.count.clone() {
            Some(c) => c,
            None => {
                let spec = EnsembleSpec::new(PolymerClass::Tree, a.dim, n, Boundary::Penetrable, Convention::TranslationClasses)?;
                cached_summary(&spec, &a.run)?.0.total
            }
        };
        m.insert("d".into(), a.dim.into());
        m.insert("counts".into(), json!([count.to_string()]));
        growth_lower_bound_madras(a.dim, n, &count)?
    } else {
        let c = a.counts.clone().ok_or_else(|| Failure::Validation("--monotone and --submultiplicative need --counts".into()))?;
        m.insert("counts".into(), c.iter().map(|x| Value::from(x.to_string())).collect());
        if a.monotone {
            monotone_lower_bound(&c)?
        } else if a.submultiplicative {
            let g = a.g;
            submultiplicative_upper_bound(&c, |_| g)?
        } else {
            return Err(Failure::Validation("pick one of --madras, --monotone, --submultiplicative".into()));
        }
    };
    let kind = serde_json::to_value(bound.kind).map_err(|e| Failure::Internal(e.to_string()))?;
    m.insert("kind".into(), kind);
    m.insert("value".into(), bound.value.into());
    m.insert("n".into(), bound.n.into());
    Ok(Done::new(j::render(&Value::Object(m)), a.run.output.clone()))
}

fn read_input(p: &Path) -> Outcome<String> {
    if p.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(p).map_err(|e| Failure::Validation(format!("{}: {e}", p.display())))
    }
}

/// First non-blank, non-comment line of a polymer file.
fn read_polymer(p: &Path) -> Outcome<Polymer> {
    let text = read_input(p)?;
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| Failure::Validation("no polymer in input".into()))?;
    let poly = Polymer::parse_line(line)?;
    poly.validate().map_err(|v| Failure::Validation(format!("invalid polymer: {v}")))?;
    Ok(poly)
}

fn line(p: &Polymer) -> String {
    format!("{}\n", p.to_line())
}

fn cmd_construct(a: ConstructArgs) -> Outcome<Done> {
    let p = match a.recipe {
        Recipe::Phi30 => build_phi30(),
        Recipe::PhiChain { t } => build_phi_chain(t)?,
        Recipe::Witness { signature, dim } => straight_comb_witness(&signature.parse::<CombSignature>()?, dim)?,
        Recipe::PlusMap { input } => comb_plus_map(&read_polymer(&input)?)?,
    };
    Ok(Done::new(line(&p), a.output))
}

fn cmd_knot(a: KnotArgs) -> Outcome<Done> {
    let p = read_polymer(&a.input)?;
    let inv = knot_invariant(&p)?;
    let mut m = j::header("knot");
    m.insert("key".into(), inv.key().to_string().into());
    m.insert("determinant".into(), inv.determinant.to_string().into());
    let alex = inv.alexander.as_ref().map_or(Value::Null, |v| v.iter().map(|c| Value::from(c.to_string())).collect());
    m.insert("alexander".into(), alex);
    Ok(Done::new(j::render(&Value::Object(m)), a.output))
}

fn cmd_decompose(a: DecomposeArgs) -> Outcome<Done> {
    let p = read_polymer(&a.input)?;
    let dcp = comb_decompose(&p, a.split)?;
    let mut pieces = Vec::new();
    for (name, piece) in [("kappa1", &dcp.kappa1), ("kappa2", &dcp.kappa2), ("theta", &dcp.theta)] {
        let file = a.out_dir.join(format!("{name}.txt"));
        write_atomic(&file, line(&piece.lex_normalize()).as_bytes())?;
        pieces.push(json!({
            "name": name,
            "file": file.display().to_string(),
            "edges": piece.edges().len(),
            "offset": piece.lex_min_site().to_string(),
        }));
    }
    let pt = |x: &Option<polylat::Point>| x.as_ref().map_or(Value::Null, |p| p.to_string().into());
    let mut m = j::header("decompose");
    m.insert("case".into(), dcp.case.to_string().into());
    m.insert("n".into(), a.split.into());
    m.insert("split".into(), dcp.split.to_string().into());
    m.insert("u".into(), pt(&dcp.u));
    m.insert("y".into(), pt(&dcp.y));
    m.insert("pieces".into(), pieces.into());
    Ok(Done::new(j::render(&Value::Object(m)), a.output))
}

fn cmd_repro(a: ReproArgs) -> Outcome<Done> {
    let ids: Vec<u8> = a.only.clone().unwrap_or_else(|| (1..=12).collect());
    if let Some(bad) = ids.iter().find(|&&i| !(1..=12).contains(&i)) {
        return Err(Failure::Validation(format!("no criterion {bad}")));
    }
    let opts = repro::Options { extended: a.extended };
    let mut results = Vec::new();
    for id in ids {
        let r = repro::run_criterion(id, &opts);
        if a.format.is_none() {
            println!("{}", r.line());
        }
        results.push(r);
    }
    let all = results.iter().all(|r| r.pass);
    let body = match a.format {
        Some(Format::Json) => {
            let mut m = j::header("repro");
            m.insert("criteria".into(), results.iter().map(repro::Report::to_json).collect());
            j::render(&Value::Object(m))
        }
        Some(Format::Csv) => {
            let mut s = String::from("id,pass,name\n");
            for r in &results {
                s.push_str(&format!("{},{},\"{}\"\n", r.id, r.pass, r.name));
            }
            s
        }
        None => String::new(),
    };
    let mut d = Done::new(body, a.output);
    d.checks_pass = Some(all);
    d.exit = if all { 0 } else { 1 };
    Ok(d)
}
