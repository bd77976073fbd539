mod expr;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use betadim::orbit::{prefix_count_table, DEFAULT_DEPTH_CAP, DEFAULT_STATE_CAP};
use betadim::spectral::{default_tol, log_base, DEFAULT_GAP_TOL};
use betadim::{
    check_condition1, compute_orbit, dimension, growth_band, perron_eigenvalue, separation_evidence, transition_matrix,
    Error, ExpansionParams, ExpansionRule, FieldElement, IntPolynomial, IntervalTable, NumberField, OrbitDocument,
    OrbitGraph, OrbitOutcome, PisotStatus, Rational, RulePiece, SpectralReport,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Value};

const EXIT_CODES: &str = "\
Exit codes:
  0   success (pisot: certified Pisot)
  2   pisot: certified not Pisot
  3   pisot: undecided within the refinement budget
  4   orbit did not close within the caps, or expansion not periodic
  5   condition 1 not established (the upper bound on the dimension is still printed)
  6   prefix counts disagree between methods
  64  invalid input
  65  point outside the interval [0, m/(b-1)]
  70  internal error
  74  output file could not be written";

#[derive(Parser)]
#[command(name = "betadim", version, about = "Exact orbits, spectra and dimensions for non-integer bases", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the base is a Pisot number.
    Pisot {
        #[command(flatten)]
        base: Base,
        #[command(flatten)]
        output: Output,
    },
    /// Compute the branching orbit of a point and its transition graph.
    Orbit {
        #[command(flatten)]
        base: Base,
        #[command(flatten)]
        point: Point,
        #[command(flatten)]
        caps: Caps,
        /// Also write the transition matrix (CSV if the name ends in .csv, JSON otherwise).
        #[arg(long)]
        matrix_out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Perron root, condition 1 and Hausdorff dimension of the expansion set.
    Dimension {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        caps: Caps,
        /// Width bound for the Perron root enclosure, e.g. 1e-12 or 1/1000.
        #[arg(long)]
        tol: Option<String>,
        /// Largest n used for the growth band of N_n / alpha^n.
        #[arg(long, default_value_t = 64)]
        band: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Generate an expansion by a digit rule and detect its period.
    Expand {
        #[command(flatten)]
        base: Base,
        #[command(flatten)]
        point: Point,
        /// greedy, lazy, alternating, or @FILE holding an interval table in JSON.
        #[arg(long, default_value = "greedy")]
        rule: String,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Count prefixes of length 0..=N of expansions of a point.
    Count {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        caps: Caps,
        #[arg(short = 'n', long = "n", default_value_t = 12)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[command(flatten)]
        output: Output,
    },
    /// Gap statistics of the finite levels of the spectrum sum e_i b^i.
    Spectrum {
        #[command(flatten)]
        base: Base,
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct Base {
    /// Monic minimal polynomial, constant term first: "c0,c1,...,1".
    #[arg(long, allow_hyphen_values = true)]
    minpoly: String,
    /// Which real root above 1 to use, counting down from the largest.
    #[arg(long, default_value_t = 0)]
    root_rank: usize,
    /// Largest digit.
    #[arg(short = 'm', long = "m", default_value_t = 1)]
    m: u32,
}

#[derive(Args)]
struct Point {
    /// Point in Q(b): an expression such as "1/(b^2-1)", element JSON, or @FILE.
    #[arg(short = 'x', long = "x", allow_hyphen_values = true)]
    x: String,
}

/// Either a base and point, or a saved orbit.
#[derive(Args)]
struct Source {
    #[arg(long, allow_hyphen_values = true, required_unless_present = "orbit")]
    minpoly: Option<String>,
    #[arg(long, default_value_t = 0)]
    root_rank: usize,
    #[arg(short = 'm', long = "m", default_value_t = 1)]
    m: u32,
    #[arg(
        short = 'x',
        long = "x",
        allow_hyphen_values = true,
        required_unless_present = "orbit"
    )]
    x: Option<String>,
    /// Orbit JSON written by `betadim orbit --out`.
    #[arg(long, conflicts_with_all = ["minpoly", "x"])]
    orbit: Option<PathBuf>,
}

#[derive(Args)]
struct Caps {
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    state_cap: usize,
    #[arg(long, default_value_t = DEFAULT_DEPTH_CAP)]
    depth_cap: usize,
}

#[derive(Args)]
struct Output {
    /// Defaults to json for pisot and table elsewhere.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the JSON result to this file (orbit also writes a .dot file beside it).
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
    Dot,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Matrix,
    Brute,
    Both,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    fn input(message: impl Into<String>) -> Self {
        Failure::new(64, message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OutsideInterval => 65,
            Error::Condition1NotEstablished(_) => 5,
            Error::RefinementCap(_) | Error::ZeroMatrix => 70,
            _ => 64,
        };
        Failure::new(code, e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

macro_rules! out {
    ($o:expr, $($t:tt)*) => {{
        let _ = write!($o, $($t)*);
    }};
}

macro_rules! outln {
    ($o:expr) => {{
        $o.push('\n');
    }};
    ($o:expr, $($t:tt)*) => {{
        let _ = writeln!($o, $($t)*);
    }};
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    let mut buffer = String::new();
    let result = run(&mut buffer, cli.command);
    // a closed pipe on stdout is not an error worth reporting
    let _ = std::io::stdout().write_all(buffer.as_bytes());
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(o: &mut String, cmd: Command) -> CmdResult {
    match cmd {
        Command::Pisot { base, output } => pisot(o, &base, &output),
        Command::Orbit {
            base,
            point,
            caps,
            matrix_out,
            output,
        } => orbit(o, &base, &point, &caps, matrix_out.as_deref(), &output),
        Command::Dimension {
            source,
            caps,
            tol,
            band,
            output,
        } => dimension_cmd(o, &source, &caps, tol.as_deref(), band, &output),
        Command::Expand {
            base,
            point,
            rule,
            steps,
            output,
        } => expand(o, &base, &point, &rule, steps, &output),
        Command::Count {
            source,
            caps,
            n,
            method,
            output,
        } => count(o, &source, &caps, n, method, &output),
        Command::Spectrum { base, n_max, output } => spectrum(o, &base, n_max, &output),
    }
}

fn build_field(minpoly: &str, root_rank: usize) -> Result<NumberField, Failure> {
    let coeffs = expr::parse_coeffs(minpoly).map_err(Failure::input)?;
    let poly = IntPolynomial::new(coeffs)?;
    Ok(NumberField::new(poly, root_rank)?)
}

fn build_params(minpoly: &str, root_rank: usize, m: u32) -> Result<ExpansionParams, Failure> {
    let field = build_field(minpoly, root_rank)?;
    Ok(ExpansionParams::new(Arc::new(field), m)?)
}

fn read_point(params: &ExpansionParams, x: &str) -> Result<FieldElement, Failure> {
    let x = expr::parse_point(params.field(), x).map_err(Failure::input)?;
    if !params.in_interval(&x) {
        return Err(Error::OutsideInterval.into());
    }
    Ok(x)
}

fn parse_tol(s: &str) -> Result<Rational, Failure> {
    let bad = || Failure::input(format!("bad tolerance {s:?}"));
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((a, b)) => (a, b.parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let mant = betadim::interval::parse_rational(mant).map_err(|_| bad())?;
    let ten = Rational::from_integer(BigInt::from(10));
    let scale = if exp >= 0 {
        num_traits::pow(ten, exp as usize)
    } else {
        num_traits::pow(ten, exp.unsigned_abs() as usize).recip()
    };
    let tol = mant * scale;
    if !tol.is_positive() {
        return Err(bad());
    }
    Ok(tol)
}

fn require_format(out: &Output, allowed: &[Format], cmd: &str) -> Result<Format, Failure> {
    let f = out.format_or(allowed[0]);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        let name = f
            .to_possible_value()
            .map(|v| v.get_name().to_string())
            .unwrap_or_default();
        Err(Failure::input(format!("{cmd} does not support --format {name}")))
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::new(74, format!("{}: {e}", path.display())))
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn save_json(out: &Output, v: &impl serde::Serialize) -> Result<(), Failure> {
    match &out.out {
        Some(p) => write_file(p, &pretty(v)),
        None => Ok(()),
    }
}

fn approx(field: &NumberField, x: &FieldElement) -> String {
    let eps = Rational::new(BigInt::from(1), BigInt::from(10u64.pow(14)));
    format!("{:.12}", field.approx(x, &eps).to_f64_mid())
}

fn pisot(o: &mut String, base: &Base, out: &Output) -> CmdResult {
    let format = require_format(out, &[Format::Json, Format::Table], "pisot")?;
    let field = build_field(&base.minpoly, base.root_rank)?;
    let cert = field.is_pisot();
    let code = match cert.status {
        PisotStatus::Pisot => 0,
        PisotStatus::NotPisot => 2,
        PisotStatus::Unknown => 3,
    };
    let doc = json!({
        "min_poly": field.min_poly(),
        "root_rank": field.root_rank(),
        "beta": field.beta_interval(),
        "certificate": cert,
    });
    save_json(out, &doc)?;
    if format == Format::Json {
        out!(o, "{}", pretty(&doc));
    } else {
        let status = match cert.status {
            PisotStatus::Pisot => "pisot",
            PisotStatus::NotPisot => "not pisot",
            PisotStatus::Unknown => "unknown",
        };
        outln!(o, "polynomial      {}", field.min_poly());
        outln!(o, "beta            {}", field.beta_interval());
        outln!(o, "status          {status}");
        outln!(
            o,
            "max |conjugate| <= {}",
            betadim::interval::decimal_ceil(&cert.max_conjugate_modulus_upper, 12)
        );
        if let Some(w) = cert.witness_conjugate {
            outln!(o, "witness         conjugate {w} has modulus >= 1");
        }
    }
    Ok(code)
}

fn orbit_or_divergence(params: &ExpansionParams, x: &FieldElement, caps: &Caps) -> Result<OrbitGraph, Failure> {
    match compute_orbit(params, x, caps.state_cap, caps.depth_cap)? {
        OrbitOutcome::Closed(g) => Ok(g),
        OrbitOutcome::Diverged(r) => {
            let cap = match r.cap_hit {
                betadim::Cap::States => "state",
                betadim::Cap::Depth => "depth",
            };
            Err(Failure::new(
                4,
                format!(
                    "orbit did not close: {} states found, {cap} cap hit at depth {}",
                    r.states_found, r.depth_reached
                ),
            ))
        }
    }
}

fn orbit(
    o: &mut String,
    base: &Base,
    point: &Point,
    caps: &Caps,
    matrix_out: Option<&Path>,
    out: &Output,
) -> CmdResult {
    let format = out.format_or(Format::Table);
    let params = build_params(&base.minpoly, base.root_rank, base.m)?;
    let x = read_point(&params, &point.x)?;
    let outcome = compute_orbit(&params, &x, caps.state_cap, caps.depth_cap)?;
    let g = match outcome {
        OrbitOutcome::Closed(g) => g,
        OrbitOutcome::Diverged(report) => {
            save_json(out, &report)?;
            if format == Format::Json {
                out!(o, "{}", pretty(&report));
            } else {
                outln!(o, "diverged");
                outln!(o, "states found  {}", report.states_found);
                outln!(
                    o,
                    "cap hit       {}",
                    if report.cap_hit == betadim::Cap::States {
                        "states"
                    } else {
                        "depth"
                    }
                );
                outln!(o, "depth reached {}", report.depth_reached);
                for s in &report.sample_new_states {
                    outln!(o, "new state     {}  ~ {}", s, approx(params.field(), s));
                }
            }
            return Ok(4);
        }
    };
    let a = transition_matrix(&g);
    let doc = g.to_document(&params);
    if let Some(p) = &out.out {
        write_file(p, &pretty(&doc))?;
        write_file(&p.with_extension("dot"), &g.to_dot(&params))?;
    }
    if let Some(p) = matrix_out {
        let text = if p.extension().is_some_and(|e| e == "csv") {
            a.to_csv()
        } else {
            pretty(&a)
        };
        write_file(p, &text)?;
    }
    match format {
        Format::Json => out!(o, "{}", pretty(&doc)),
        Format::Dot => out!(o, "{}", g.to_dot(&params)),
        Format::Csv => out!(o, "{}", a.to_csv()),
        Format::Table => {
            let field = params.field();
            outln!(o, "k = {}", g.len());
            outln!(o, "{:>6} {:>6} {:>16}  element", "state", "depth", "value");
            for (j, s) in g.states().iter().enumerate() {
                outln!(o, "{j:>6} {:>6} {:>16}  {s}", g.discovery_depth()[j], approx(field, s));
            }
            outln!(o, "edges");
            for e in g.edges() {
                outln!(o, "  {} --{}--> {}", e.from, e.digit, e.to);
            }
        }
    }
    Ok(0)
}

struct Loaded {
    params: ExpansionParams,
    graph: OrbitGraph,
}

fn load(source: &Source, caps: &Caps) -> Result<Loaded, Failure> {
    if let Some(path) = &source.orbit {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        let doc: OrbitDocument =
            serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        let params = doc.params()?;
        let graph = doc.into_graph(&params)?;
        return Ok(Loaded { params, graph });
    }
    let minpoly = source
        .minpoly
        .as_deref()
        .ok_or_else(|| Failure::input("--minpoly is required"))?;
    let x = source.x.as_deref().ok_or_else(|| Failure::input("-x is required"))?;
    let params = build_params(minpoly, source.root_rank, source.m)?;
    let x = read_point(&params, x)?;
    let graph = orbit_or_divergence(&params, &x, caps)?;
    Ok(Loaded { params, graph })
}

fn dimension_cmd(
    o: &mut String,
    source: &Source,
    caps: &Caps,
    tol: Option<&str>,
    band: usize,
    out: &Output,
) -> CmdResult {
    let format = require_format(out, &[Format::Table, Format::Json], "dimension")?;
    let tol = match tol {
        Some(t) => parse_tol(t)?,
        None => default_tol(),
    };
    let Loaded { params, graph } = load(source, caps)?;
    let m = params.m();
    let a = transition_matrix(&graph);
    let pr = perron_eigenvalue(&a, &tol)?;
    let c1 = check_condition1(&a, &pr, DEFAULT_GAP_TOL);
    let dim = dimension(m, &pr, &c1).ok();
    let upper = log_base(&pr.alpha, m);
    let growth = if c1.status.is_established() && band > 0 {
        Some(growth_band(&a, &pr, &c1, band)?)
    } else {
        None
    };
    let report = SpectralReport::new(&pr, &c1, dim.as_ref());
    let mut doc = serde_json::to_value(&report).expect("serializable");
    if let Value::Object(map) = &mut doc {
        map.insert("k".into(), json!(a.k()));
        map.insert("m".into(), json!(m));
        map.insert("dim_upper_bound".into(), json!(upper));
        map.insert("growth_band".into(), json!(growth));
    }
    save_json(out, &doc)?;
    if format == Format::Json {
        out!(o, "{}", pretty(&doc));
    } else {
        let status = serde_json::to_value(c1.status).expect("serializable");
        outln!(o, "k            {}", a.k());
        outln!(o, "char poly    {}", pr.char_poly);
        outln!(o, "alpha        {}  ~ {:.12}", pr.alpha, pr.alpha_f64());
        outln!(o, "condition 1  {}", status.as_str().unwrap_or_default());
        if let Some(e) = c1.primitivity_exponent {
            outln!(o, "primitive    A^{e} > 0");
        }
        if let Some(s) = c1.second_modulus {
            outln!(o, "2nd modulus  {s:.12}");
        }
        match &dim {
            Some(d) => outln!(o, "dimension    {}  ~ {:.12}", d.dim, d.dim.to_f64_mid()),
            None => outln!(o, "dimension    <= log_{}(alpha) in {}", m + 1, upper),
        }
        if let Some(b) = &growth {
            outln!(
                o,
                "growth band  N_n/alpha^n in [{:.6}, {:.6}] for n in {}..={}",
                b.min_ratio,
                b.max_ratio,
                b.n_lo,
                b.n_hi
            );
        }
        let v: Vec<String> = pr.unit_eigenvector_f64().iter().map(|c| format!("{c:.6}")).collect();
        outln!(o, "eigenvector  {}", v.join(" "));
    }
    if c1.status.is_established() {
        Ok(0)
    } else {
        eprintln!(
            "condition 1 not established; only dim_H <= log_{}(alpha) <= {} holds",
            m + 1,
            betadim::interval::decimal_ceil(&upper.hi, 12)
        );
        Ok(5)
    }
}

fn load_rule(params: &ExpansionParams, rule: &str) -> Result<ExpansionRule, Failure> {
    let Some(path) = rule.strip_prefix('@') else {
        return rule.parse::<ExpansionRule>().map_err(Failure::from);
    };
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{path}: {e}")))?;
    let pieces: Vec<RulePiece> = match serde_json::from_str::<Vec<RulePiece>>(&text) {
        Ok(p) => p,
        Err(_) => serde_json::from_str::<IntervalTable>(&text)
            .map_err(|e| Failure::input(format!("{path}: {e}")))?
            .pieces()
            .to_vec(),
    };
    Ok(ExpansionRule::IntervalTable(IntervalTable::new(params, pieces)?))
}

fn expand(o: &mut String, base: &Base, point: &Point, rule: &str, steps: usize, out: &Output) -> CmdResult {
    let format = require_format(out, &[Format::Table, Format::Json], "expand")?;
    let params = build_params(&base.minpoly, base.root_rank, base.m)?;
    let x = read_point(&params, &point.x)?;
    let rule = load_rule(&params, rule)?;
    let run = params.generate_expansion(&x, &rule, steps)?;
    let text = run.to_text(params.m());
    let exact = run.value(&params).map(|v| v == x);
    let mut doc = serde_json::to_value(&run).expect("serializable");
    if let Value::Object(map) = &mut doc {
        map.insert("text".into(), json!(text));
        map.insert("sums_to_point".into(), json!(exact));
    }
    save_json(out, &doc)?;
    if format == Format::Json {
        out!(o, "{}", pretty(&doc));
    } else {
        outln!(o, "expansion  {text}");
        outln!(o, "preperiod  {}", run.preperiod().len());
        match run.period() {
            Some(p) => outln!(o, "period     {}", p.len()),
            None => outln!(o, "period     no period within {steps} steps"),
        }
        if let Some(ok) = exact {
            outln!(
                o,
                "sum        {}",
                if ok { "equals x exactly" } else { "differs from x" }
            );
        }
    }
    Ok(if run.is_periodic() { 0 } else { 4 })
}

fn count(o: &mut String, source: &Source, caps: &Caps, n: usize, method: Method, out: &Output) -> CmdResult {
    let format = require_format(out, &[Format::Table, Format::Json, Format::Csv], "count")?;
    let Loaded { params, graph } = load(source, caps)?;
    let x = graph.states()[0].clone();
    let matrix: Option<Vec<String>> = (method != Method::Brute).then(|| {
        let a = transition_matrix(&graph);
        prefix_count_table(&a, n).iter().map(|row| row[0].to_string()).collect()
    });
    let brute: Option<Vec<String>> = match method {
        Method::Matrix => None,
        _ => Some(
            params
                .count_prefixes_bruteforce_upto(&x, n)?
                .iter()
                .map(ToString::to_string)
                .collect(),
        ),
    };
    let rows: Vec<Value> = (0..=n)
        .map(|i| {
            json!({
                "n": i,
                "matrix": matrix.as_ref().map(|v| &v[i]),
                "brute": brute.as_ref().map(|v| &v[i]),
            })
        })
        .collect();
    save_json(out, &rows)?;
    let cell = |v: &Option<Vec<String>>, i: usize| v.as_ref().map(|v| v[i].clone()).unwrap_or_default();
    match format {
        Format::Json => out!(o, "{}", pretty(&rows)),
        Format::Csv => {
            let mut s = String::from("n,matrix,brute\n");
            for i in 0..=n {
                let _ = writeln!(s, "{i},{},{}", cell(&matrix, i), cell(&brute, i));
            }
            out!(o, "{s}");
        }
        _ => {
            outln!(o, "{:>4} {:>24} {:>24}", "n", "matrix", "brute");
            for i in 0..=n {
                outln!(o, "{i:>4} {:>24} {:>24}", cell(&matrix, i), cell(&brute, i));
            }
        }
    }
    if let (Some(a), Some(b)) = (&matrix, &brute) {
        if let Some(i) = (0..=n).find(|&i| a[i] != b[i]) {
            eprintln!("counts disagree at n = {i}: matrix {} vs brute force {}", a[i], b[i]);
            return Ok(6);
        }
    }
    Ok(0)
}

fn spectrum(o: &mut String, base: &Base, n_max: usize, out: &Output) -> CmdResult {
    let format = require_format(out, &[Format::Table, Format::Json, Format::Csv], "spectrum")?;
    if base.m == 0 {
        return Err(Error::InvalidDigitBound.into());
    }
    let field = build_field(&base.minpoly, base.root_rank)?;
    let ev = separation_evidence(&field, base.m, n_max)?;
    save_json(out, &ev)?;
    match format {
        Format::Json => out!(o, "{}", pretty(&ev)),
        Format::Csv => out!(o, "{}", ev.to_csv()),
        _ => {
            outln!(o, "{:>5} {:>10} {:>16} {:>16}", "level", "points", "min gap", "max gap");
            for l in &ev.levels {
                outln!(
                    o,
                    "{:>5} {:>10} {:>16.12} {:>16.12}",
                    l.n,
                    l.count,
                    l.min_gap.to_f64_mid(),
                    l.max_gap.to_f64_mid()
                );
            }
            outln!(o, "stabilized   {}", if ev.stabilized { "yes" } else { "no" });
            outln!(o, "separation   <= {}", ev.separation_upper_bound);
        }
    }
    Ok(0)
}
