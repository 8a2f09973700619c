//! Command-line front end: argument parsing, verb dispatch and CSV/JSON
//! output. [`run`] is the whole program minus process exit, so tests can
//! drive it in-process.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use ulam_core::bounds::{
    bonferroni_bracket_of, chebyshev_a_bound, chebyshev_table, log_first_moment, ratio_table,
    stirling_log_first_moment,
};
use ulam_core::elliptic::{
    a1_closed, a2_moebius_quadrature, a2_pi_combination, a2_quadrature, legendre_reduce,
};
use ulam_core::exact::{a_array, binomial, MomentTriangle};
use ulam_core::fmt::{float17, rational};
use ulam_core::genfun::{alpha_contour, alpha_series, ContourSpec};
use ulam_core::perm::z_distribution;
use ulam_core::verify::{gate, run_suite, Suite, ALPHA_TABLE};
use ulam_core::walk::{a_monte_carlo, exact_walk_summary, polya_series, MAX_EXACT_N};
use ulam_core::{elliptic, Error, ExactRational};

/// Exit status on success (and for `--help` / `--version`).
pub const EXIT_OK: i32 = 0;
/// Exit status when a computation rejects its inputs.
pub const EXIT_DOMAIN: i32 = 1;
/// Exit status when a verification suite reports a failure.
pub const EXIT_VERIFY: i32 = 2;
/// Exit status for malformed flags (`EX_USAGE`).
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "ulam", version, about = "Second moments of increasing subsequence counts, exactly and numerically")]
pub struct Cli {
    /// Cap on worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Exact tables: the array A(N, j) or the distribution of Z_{n,k}.
    Table(TableArgs),
    /// Run invariant suites; exits 2 if any check fails.
    Verify {
        /// exact, perm, walk, genfun, elliptic, bounds or all
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
    },
    /// Monte Carlo estimate of A(N, j) from random walks.
    Mc(McArgs),
    /// α(w, x²) by truncated series, unit-circle contour and closed form.
    Genfun(GenfunArgs),
    /// α(w, x²) through the elliptic routes, or the Legendre reduction as JSON.
    Elliptic(EllipticArgs),
    /// Bonferroni brackets, Chebyshev bounds, ratio tables, Stirling form.
    Bounds {
        #[command(subcommand)]
        kind: BoundsKind,
    },
    /// Pólya return probabilities, or the series (2/π)K(z).
    Polya(PolyaArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("what").required(true).args(["a", "zdist"])))]
pub struct TableArgs {
    /// Emit A(N, j) for N ≤ nmax, j ≤ jmax.
    #[arg(long = "A")]
    pub a: bool,
    /// Emit the distribution of Z_{n,k} over S_n.
    #[arg(long)]
    pub zdist: bool,
    /// Largest N in the A table.
    #[arg(long, default_value_t = 30)]
    pub nmax: usize,
    /// Defaults to 2·nmax.
    #[arg(long)]
    pub jmax: Option<usize>,
    /// Permutation size for --zdist.
    #[arg(long, required_if_eq("zdist", "true"))]
    pub n: Option<usize>,
    /// Subsequence length for --zdist.
    #[arg(long, required_if_eq("zdist", "true"))]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct McArgs {
    /// Walk half-length N.
    #[arg(long = "N", visible_alias = "n")]
    pub big_n: usize,
    /// Binomial weight index j.
    #[arg(long)]
    pub j: usize,
    /// Number of walk samples.
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Stream seed; required so runs are reproducible.
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GenfunArgs {
    /// Point x, with 4x + w² < 1.
    #[arg(long)]
    pub x: f64,
    /// Weight w.
    #[arg(long, default_value_t = 0.0)]
    pub w: f64,
    /// Series table rows (default as in the verification suite).
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Series table columns (default as in the verification suite).
    #[arg(long)]
    pub jmax: Option<usize>,
    /// Initial contour node count (power of two ≥ 8); doubled to convergence.
    #[arg(long, default_value_t = 8)]
    pub nodes: usize,
}

#[derive(Debug, Args)]
pub struct EllipticArgs {
    /// Point x, with 4x + w² < 1.
    #[arg(long)]
    pub x: f64,
    /// Weight w.
    #[arg(long, default_value_t = 0.0)]
    pub w: f64,
    /// Dump the Möbius map, modulus, Ξ, pole terms and Π-combination as JSON.
    #[arg(long)]
    pub reduction: bool,
}

#[derive(Debug, Subcommand)]
pub enum BoundsKind {
    /// Truncated inclusion–exclusion brackets on P(Z_{n,k} ≥ r).
    Bonferroni {
        /// Permutation size.
        #[arg(long)]
        n: usize,
        /// Subsequence length.
        #[arg(long)]
        k: usize,
        /// Threshold r.
        #[arg(long, default_value_t = 1)]
        r: u64,
        /// Truncation points; R − r odd gives a lower bound, even an upper one.
        /// Defaults to r, r+1, r+2, r+3.
        #[arg(long = "R", value_delimiter = ',')]
        big_r: Vec<u64>,
    },
    /// min α(w, x²)/(wʲ x^{2N}) as an upper bound on A(N, j).
    Chebyshev {
        /// Single cell: N.
        #[arg(long = "N", conflicts_with = "nmax")]
        big_n: Option<usize>,
        /// Single cell: j.
        #[arg(long, conflicts_with = "jmax")]
        j: Option<usize>,
        /// Table mode: all 1 ≤ N ≤ nmax, 0 ≤ j ≤ jmax.
        #[arg(long, requires = "jmax")]
        nmax: Option<usize>,
        /// Largest j in table mode.
        #[arg(long)]
        jmax: Option<usize>,
    },
    /// E[Z²]/E[Z]² for every pair in n × k with k ≤ n.
    Ratio {
        /// Comma-separated permutation sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u64>,
        /// Comma-separated subsequence lengths.
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<u64>,
    },
    /// Stirling form of ln E[Z_{n,k}] against the exact value.
    Stirling {
        /// Permutation size.
        #[arg(long)]
        n: u64,
        /// Subsequence length, 2k ≤ n.
        #[arg(long)]
        k: u64,
    },
}

#[derive(Debug, Args)]
pub struct PolyaArgs {
    /// Emit P(return at 2N) for N ≤ nmax, with the walk enumeration for N ≤ 6.
    #[arg(long, default_value_t = 6)]
    pub nmax: usize,
    /// Instead, evaluate Σ 16^{−N} C(2N,N)² z^{2N} against (2/π)K(z).
    #[arg(long)]
    pub z: Option<f64>,
    /// Series terms for --z.
    #[arg(long, default_value_t = 2000)]
    pub terms: usize,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse::<Suite>().map_err(|e| e.to_string())
}

/// One output value.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Exact integer or rational, kept as text.
    Exact(String),
    Float(f64),
    Text(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Exact(s) | Cell::Text(s) => s.clone(),
            Cell::Float(v) => float17(*v),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> serde_json::Value {
        use serde_json::Value;
        match self {
            Cell::Exact(s) | Cell::Text(s) => Value::String(s.clone()),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or_else(|| Value::String(v.to_string()), Value::Number),
            Cell::Empty => Value::Null,
        }
    }
}

fn exact(v: impl ToString) -> Cell {
    Cell::Exact(v.to_string())
}

fn ratio_cell(q: &ExactRational) -> Cell {
    Cell::Exact(rational(q))
}

fn float(v: f64) -> Cell {
    Cell::Float(v)
}

fn text(v: impl Into<String>) -> Cell {
    Cell::Text(v.into())
}

/// Rows with a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::csv)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 output")
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let m: serde_json::Map<String, serde_json::Value> =
                    self.header.iter().zip(r).map(|(h, c)| (h.to_string(), c.json())).collect();
                serde_json::Value::Object(m)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&rows).expect("json values serialize");
        s.push('\n');
        s
    }
}

/// What a verb produced.
enum Output {
    Table(Table),
    /// Pre-rendered JSON document (the reduction dump).
    Json(String),
}

enum Failure {
    Domain(Error),
    Verify(Table),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

type VerbResult = Result<Output, Failure>;

/// Parses `args` (including the program name), runs the verb and writes the
/// result to `--out` or `stdout`. Diagnostics go to `stderr`. Returns the
/// process exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK { stdout.write_all(rendered.as_bytes()) } else { stderr.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let result = match cli.workers {
        Some(0) => {
            let _ = writeln!(stderr, "error: --workers must be at least 1");
            return EXIT_USAGE;
        }
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.verb)),
            Err(e) => {
                let _ = writeln!(stderr, "error: cannot start {n} workers: {e}");
                return EXIT_DOMAIN;
            }
        },
        None => dispatch(&cli.verb),
    };
    let (body, code) = match result {
        Ok(Output::Table(t)) => (render(&t, cli.format), EXIT_OK),
        Ok(Output::Json(s)) => (s, EXIT_OK),
        Err(Failure::Verify(t)) => (render(&t, cli.format), EXIT_VERIFY),
        Err(Failure::Domain(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_DOMAIN;
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, body.as_bytes()),
        None => stdout.write_all(body.as_bytes()).and_then(|_| stdout.flush()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_DOMAIN;
    }
    if code == EXIT_VERIFY {
        let _ = writeln!(stderr, "verification failed");
    }
    code
}

fn render(t: &Table, f: Format) -> String {
    match f {
        Format::Csv => t.to_csv(),
        Format::Json => t.to_json(),
    }
}

fn dispatch(verb: &Verb) -> VerbResult {
    match verb {
        Verb::Table(a) => table(a),
        Verb::Verify { suite } => verify(*suite),
        Verb::Mc(a) => mc(a),
        Verb::Genfun(a) => genfun(a),
        Verb::Elliptic(a) => elliptic_verb(a),
        Verb::Bounds { kind } => bounds(kind),
        Verb::Polya(a) => polya(a),
    }
}

fn table(a: &TableArgs) -> VerbResult {
    if a.zdist {
        let (n, k) = (a.n.unwrap_or(0), a.k.unwrap_or(0));
        if k == 0 || k > n {
            return Err(Error::Domain(format!("need 1 <= k <= n, got n={n} k={k}")).into());
        }
        let d = z_distribution(n, k)?;
        let mut t = Table::new(&["z", "count"]);
        for (z, c) in &d.counts {
            t.push(vec![exact(z), exact(c)]);
        }
        return Ok(Output::Table(t));
    }
    let jmax = a.jmax.unwrap_or(2 * a.nmax);
    let tri = MomentTriangle::build(a.nmax, jmax);
    let mut t = Table::new(&["N", "j", "A"]);
    for n in 0..=a.nmax {
        for j in 0..=jmax {
            t.push(vec![exact(n), exact(j), exact(tri.get(n, j))]);
        }
    }
    Ok(Output::Table(t))
}

fn verify(suite: Suite) -> VerbResult {
    let checks = run_suite(suite);
    let mut t = Table::new(&["suite", "check", "status", "detail"]);
    for c in &checks {
        t.push(vec![text(c.suite), text(c.name), text(c.status.to_string()), text(c.detail.clone())]);
    }
    if gate(&checks) {
        Ok(Output::Table(t))
    } else {
        Err(Failure::Verify(t))
    }
}

fn mc(a: &McArgs) -> VerbResult {
    let (mean, stderr) = a_monte_carlo(a.big_n, a.j, a.samples, a.seed)?;
    let mut t = Table::new(&["N", "j", "samples", "seed", "estimate", "stderr"]);
    t.push(vec![exact(a.big_n), exact(a.j), exact(a.samples), exact(a.seed), float(mean), float(stderr)]);
    Ok(Output::Table(t))
}

fn genfun(a: &GenfunArgs) -> VerbResult {
    let nmax = a.nmax.unwrap_or(ALPHA_TABLE.0);
    let jmax = a.jmax.unwrap_or(ALPHA_TABLE.1.max(3 * nmax));
    let tri = MomentTriangle::build(nmax, jmax);
    let (s, tr) = alpha_series(a.w, a.x, &tri)?;
    let spec = ContourSpec { nodes: a.nodes, ..ContourSpec::default() };
    let c = alpha_contour(a.w, a.x, &spec)?;
    let e = elliptic::alpha_closed(a.w, a.x)?;
    let mut t = Table::new(&["x", "w", "method", "alpha", "tail_bound"]);
    t.push(vec![float(a.x), float(a.w), text("series"), float(s), float(tr.tail_bound)]);
    t.push(vec![float(a.x), float(a.w), text("contour"), float(c), Cell::Empty]);
    t.push(vec![float(a.x), float(a.w), text("closed"), float(e), Cell::Empty]);
    Ok(Output::Table(t))
}

fn elliptic_verb(a: &EllipticArgs) -> VerbResult {
    let (x, w) = (a.x, a.w);
    if a.reduction {
        let red = legendre_reduce(x, w)?;
        let pi = a2_pi_combination(x, w)?;
        let doc = serde_json::json!({ "reduction": red, "pi_combination": pi });
        let mut s = serde_json::to_string_pretty(&doc).expect("reduction serializes");
        s.push('\n');
        return Ok(Output::Json(s));
    }
    let a1 = a1_closed(x, w)?;
    let reference = alpha_contour(w, x, &ContourSpec::default())?;
    let mut t = Table::new(&["x", "w", "a1", "a2", "alpha", "method", "residual"]);
    let routes = [
        ("quadrature", a2_quadrature(x, w)?),
        ("transformed_quadrature", a2_moebius_quadrature(x, w)?),
        ("pi_combination", a2_pi_combination(x, w)?.value),
    ];
    for (name, a2) in routes {
        let alpha = a1 + a2;
        t.push(vec![float(x), float(w), float(a1), float(a2), float(alpha), text(name), float((alpha - reference).abs())]);
    }
    Ok(Output::Table(t))
}

fn bounds(kind: &BoundsKind) -> VerbResult {
    match kind {
        BoundsKind::Bonferroni { n, k, r, big_r } => {
            if *k == 0 || k > n {
                return Err(Error::Domain(format!("need 1 <= k <= n, got n={n} k={k}")).into());
            }
            let dist = z_distribution(*n, *k)?;
            let rs: Vec<u64> = if big_r.is_empty() { (*r..*r + 4).collect() } else { big_r.clone() };
            let mut t = Table::new(&["n", "k", "r", "R", "lower", "upper", "exact"]);
            for &big in &rs {
                if big < *r {
                    return Err(Error::Domain(format!("truncation R={big} below r={r}")).into());
                }
                // Pair each truncation with a trivially valid partner of the
                // other parity; only the requested side is reported.
                let lower_side = (big - r) % 2 == 1;
                let b = if lower_side {
                    bonferroni_bracket_of(&dist, *r, big, *r)?
                } else {
                    bonferroni_bracket_of(&dist, *r, *r + 1, big)?
                };
                let (lo, hi) =
                    if lower_side { (ratio_cell(&b.lower), Cell::Empty) } else { (Cell::Empty, ratio_cell(&b.upper)) };
                let ex = b.exact.as_ref().map_or(Cell::Empty, ratio_cell);
                t.push(vec![exact(n), exact(k), exact(r), exact(big), lo, hi, ex]);
            }
            Ok(Output::Table(t))
        }
        BoundsKind::Chebyshev { big_n, j, nmax, jmax } => {
            let rows = match (nmax, jmax, big_n, j) {
                (Some(nm), Some(jm), _, _) => chebyshev_table(*nm, *jm)?,
                (None, None, Some(n), Some(j)) => vec![chebyshev_a_bound(*n, *j)?],
                _ => return Err(Error::Domain("give --N and --j, or --nmax and --jmax".into()).into()),
            };
            let mut t = Table::new(&["N", "j", "bound", "x_star", "w_star", "exact_A"]);
            for b in rows {
                t.push(vec![exact(b.n), exact(b.j), float(b.bound), float(b.x_star), float(b.w_star), exact(a_array(b.n, b.j))]);
            }
            Ok(Output::Table(t))
        }
        BoundsKind::Ratio { n, k } => {
            let pairs: Vec<(u64, u64)> =
                n.iter().flat_map(|&n| k.iter().filter(move |&&k| k <= n).map(move |&k| (n, k))).collect();
            let rows = ratio_table(&pairs)?;
            let mut t = Table::new(&["n", "k", "ratio", "exact"]);
            for r in rows {
                t.push(vec![exact(r.n), exact(r.k), float(r.ratio), ratio_cell(&r.exact)]);
            }
            Ok(Output::Table(t))
        }
        BoundsKind::Stirling { n, k } => {
            let (approx, delta) = stirling_log_first_moment(*n, *k)?;
            let ex = log_first_moment(*n, *k)?;
            let mut t = Table::new(&["n", "k", "approx_log", "delta", "exact_log", "relative_error"]);
            t.push(vec![exact(n), exact(k), float(approx), float(delta), float(ex), float(((approx - ex) / ex).abs())]);
            Ok(Output::Table(t))
        }
    }
}

fn polya(a: &PolyaArgs) -> VerbResult {
    if let Some(z) = a.z {
        let s = polya_series(z, a.terms)?;
        let k = 2.0 / std::f64::consts::PI * elliptic::elliptic_k(z)?;
        let mut t = Table::new(&["z", "terms", "series", "closed"]);
        t.push(vec![float(z), exact(a.terms), float(s), float(k)]);
        return Ok(Output::Table(t));
    }
    let mut t = Table::new(&["N", "return_probability", "walk_enumeration"]);
    for n in 0..=a.nmax {
        let c = binomial(2 * n as u64, n as i64);
        let p = ExactRational::new(&c * &c, ulam_core::ExactInt::from(16).pow(n as u32));
        let walk = if n <= MAX_EXACT_N { ratio_cell(&exact_walk_summary(n)?.return_probability()) } else { Cell::Empty };
        t.push(vec![exact(n), ratio_cell(&p), walk]);
    }
    Ok(Output::Table(t))
}

#[cfg(test)]
mod tests;
