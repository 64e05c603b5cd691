//! Command-line front end and the verification suites it runs.

use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::bounds::{self, BoundKind, BoundReport, IdentityResult, StructureReport};
use crate::decomp::Decomposer;
use crate::error::{HallError, Result};
use crate::families::{self, Family, FamilyInstance};
use crate::hall::{witt_dimension, HallSet};
use crate::oracle::{independence_rank, Evaluator, NCPoly};
use crate::order::{HallOrder, OrderSpec};

#[derive(Debug, Parser)]
#[command(name = "hallbasis", version, about = "Hall bases of free Lie algebras")]
pub struct Cli {
    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Report timings and decomposition statistics.
    #[arg(long, global = true)]
    pub stats: bool,
    /// Emit JSON instead of text or CSV.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct OrderArgs {
    /// length, lyndon, fibo, supergeom or sharp:<n>.
    #[arg(long)]
    pub order: String,
    /// Alphabet size (derived from the order when omitted).
    #[arg(long)]
    pub alphabet: Option<usize>,
}

impl OrderArgs {
    fn spec(&self) -> Result<OrderSpec> {
        OrderSpec::parse(&self.order, self.alphabet)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a Hall set.
    Gen {
        #[command(flatten)]
        order: OrderArgs,
        #[arg(long)]
        max_len: usize,
    },
    /// Decompose [a, b] on the basis.
    Decompose {
        #[command(flatten)]
        order: OrderArgs,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(short = 'a')]
        a: String,
        #[arg(short = 'b')]
        b: String,
    },
    /// Table of the largest norm per total length.
    Beta {
        #[command(flatten)]
        order: OrderArgs,
        #[arg(long)]
        max_n: usize,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Restrict to one order (default: the full configuration matrix).
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        alphabet: Option<usize>,
        /// Total length budget (default depends on the suite and alphabet).
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Instantiate a bracket family and check its norm.
    Family {
        /// x3, two-letter, theta-lower, length-sharp, lyndon-sharp, fibo-sature, supergeom, sharp-en1, alphabetic-factorial.
        name: String,
        /// Family parameters, e.g. `3 2` for fibo-sature p=3 m=2.
        params: Vec<usize>,
        /// Order for the families that accept several.
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        alphabet: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Oracle,
    Bounds,
    Structure,
    Identities,
    All,
}

/// Result of one oracle certification run on a single order.
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub order: String,
    pub alphabet: usize,
    pub budget: usize,
    #[serde(rename = "pairsChecked")]
    pub pairs_checked: usize,
    pub failures: Vec<String>,
    /// Per length: (n, rank, Witt dimension, generated count).
    pub ranks: Vec<(usize, usize, String, usize)>,
}

impl OracleReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
            && self
                .ranks
                .iter()
                .all(|(_, rank, witt, count)| rank == count && witt == &count.to_string())
    }
}

pub fn decomposer(spec: OrderSpec, max_len: usize) -> Result<Decomposer> {
    let o = HallOrder::standalone(spec)?;
    Ok(Decomposer::new(Arc::new(HallSet::generate(o, max_len)?)))
}

/// Decomposition of every pair up to `budget` checked in the free associative algebra,
/// and rank certification of every length up to `rank_len`.
pub fn oracle_suite(spec: OrderSpec, budget: usize, rank_len: usize) -> Result<OracleReport> {
    let dec = decomposer(spec, budget.max(rank_len))?;
    let m = dec.magma().clone();
    let ev = Evaluator::new(m.clone());
    let pairs = bounds::ordered_pairs(&dec, budget)?;
    let checks: Vec<Option<String>> = pairs
        .par_iter()
        .map(|&(a, b)| -> Result<Option<String>> {
            let s = dec.decompose(a, b)?;
            let ok = ev.check_series(a, b, &s) && ev.check_series(b, a, &s.negated());
            Ok((!ok).then(|| format!("[{}, {}]", m.format(a), m.format(b))))
        })
        .collect::<Result<_>>()?;
    let hs = dec.hall_set();
    let ranks = (1..=rank_len)
        .into_par_iter()
        .map(|n| -> Result<_> {
            let level = hs.elements_of_length(n)?;
            let polys: Vec<NCPoly> = level.iter().map(|&t| (*ev.eval_tree(t)).clone()).collect();
            let witt = witt_dimension(spec.alphabet_size() as u64, n as u64);
            Ok((n, independence_rank(&polys), witt.to_string(), level.len()))
        })
        .collect::<Result<_>>()?;
    Ok(OracleReport {
        order: spec.name(),
        alphabet: spec.alphabet_size(),
        budget,
        pairs_checked: pairs.len(),
        failures: checks.into_iter().flatten().collect(),
        ranks,
    })
}

pub fn bounds_suite(spec: OrderSpec, budget: usize) -> Result<Vec<BoundReport>> {
    let dec = decomposer(spec, budget)?;
    BoundKind::for_order(spec)
        .into_iter()
        .map(|kind| bounds::verify_sweep(&dec, budget, kind))
        .collect()
}

pub fn structure_suite(spec: OrderSpec, budget: usize) -> Result<StructureReport> {
    let dec = decomposer(spec, budget)?;
    bounds::verify_structure(&dec, budget)
}

/// The default configuration matrix: orders with their oracle, bound and structure budgets.
pub fn default_matrix() -> Vec<(OrderSpec, usize, usize, usize)> {
    vec![
        (OrderSpec::LengthLex { k: 2 }, 9, 9, 8),
        (OrderSpec::Lyndon { k: 2 }, 9, 9, 8),
        (OrderSpec::FiboMin, 9, 9, 8),
        (OrderSpec::SuperGeom, 9, 9, 8),
        (OrderSpec::LengthLex { k: 3 }, 7, 7, 7),
        (OrderSpec::Lyndon { k: 3 }, 7, 7, 7),
        (OrderSpec::SharpEn1 { n: 3 }, 7, 7, 7),
    ]
}

fn default_budgets(spec: OrderSpec) -> (usize, usize, usize) {
    default_matrix()
        .into_iter()
        .find(|(s, ..)| *s == spec)
        .map(|(_, o, b, s)| (o, b, s))
        .unwrap_or(match spec.alphabet_size() {
            2 => (9, 9, 8),
            3 => (7, 7, 7),
            _ => (6, 6, 6),
        })
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    json: bool,
    stats: bool,
}

impl Ctx<'_> {
    fn line(&mut self, s: impl AsRef<str>) -> Result<()> {
        writeln!(self.out, "{}", s.as_ref())
            .map_err(|e| HallError::Config(format!("write failed: {e}")))
    }

    fn json(&mut self, v: &impl Serialize) -> Result<()> {
        let s = serde_json::to_string_pretty(v)
            .map_err(|e| HallError::Config(format!("serialization failed: {e}")))?;
        self.line(s)
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> i32 {
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.max(1))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return 2;
        }
    };
    let start = Instant::now();
    let mut buf = Vec::new();
    let result = pool.install(|| {
        let mut ctx = Ctx {
            out: &mut buf,
            json: cli.json,
            stats: cli.stats,
        };
        dispatch(&cli.command, &mut ctx)
    });
    if let Err(e) = out.write_all(&buf) {
        eprintln!("error: write failed: {e}");
        return 2;
    }
    if cli.stats {
        eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    }
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// `Ok(false)` signals a verification failure.
fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Result<bool> {
    match cmd {
        Command::Gen { order, max_len } => cmd_gen(ctx, order.spec()?, *max_len),
        Command::Decompose {
            order,
            max_len,
            a,
            b,
        } => cmd_decompose(ctx, order.spec()?, *max_len, a, b),
        Command::Beta { order, max_n } => cmd_beta(ctx, order.spec()?, *max_n),
        Command::Verify {
            suite,
            order,
            alphabet,
            budget,
        } => {
            let specs = match order {
                Some(name) => vec![OrderSpec::parse(name, *alphabet)?],
                None => default_matrix().into_iter().map(|(s, ..)| s).collect(),
            };
            cmd_verify(ctx, *suite, &specs, *budget)
        }
        Command::Family {
            name,
            params,
            order,
            alphabet,
        } => {
            let family = Family::parse(name)?;
            let spec = order
                .as_deref()
                .map(|o| OrderSpec::parse(o, *alphabet))
                .transpose()?;
            cmd_family(ctx, &families::build(family, spec, params)?)
        }
    }
}

fn cmd_gen(ctx: &mut Ctx, spec: OrderSpec, max_len: usize) -> Result<bool> {
    let o = HallOrder::standalone(spec)?;
    let hs = HallSet::generate(o, max_len)?;
    let doc = hs.to_json();
    if ctx.json {
        ctx.json(&doc)?;
    } else {
        for (i, level) in doc.elements.iter().enumerate() {
            for e in level {
                ctx.line(format!("{}\t{e}", i + 1))?;
            }
        }
    }
    Ok(true)
}

fn cmd_decompose(ctx: &mut Ctx, spec: OrderSpec, max_len: usize, a: &str, b: &str) -> Result<bool> {
    let o = HallOrder::standalone(spec)?;
    let dec = Decomposer::new(Arc::new(HallSet::on_demand(o, max_len)?));
    let m = dec.magma().clone();
    let (ta, tb) = (m.parse(a)?, m.parse(b)?);
    let (series, stats) = dec.decompose_with_stats(ta, tb)?;
    let doc = dec.series_json(ta, tb, &series, ctx.stats.then_some(stats));
    if ctx.stats {
        eprintln!(
            "maxCallDepth={} cacheHits={} cacheMisses={}",
            stats.max_call_depth, stats.cache_hits, stats.cache_misses
        );
    }
    if ctx.json {
        ctx.json(&doc)?;
    } else {
        for t in &doc.terms {
            ctx.line(format!("{}\t{}", t.coeff, t.elem))?;
        }
        ctx.line(format!("norm\t{}", doc.norm))?;
    }
    Ok(true)
}

fn cmd_beta(ctx: &mut Ctx, spec: OrderSpec, max_n: usize) -> Result<bool> {
    let dec = decomposer(spec, max_n)?;
    let rows = bounds::beta_table(&dec, max_n)?;
    if ctx.json {
        let doc: Vec<_> = rows
            .iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "beta": r.beta.to_string(),
                    "closedForm": r.closed_form.as_ref().map(BigUint::to_string),
                    "match": r.matches(),
                })
            })
            .collect();
        ctx.json(&doc)?;
    } else {
        write!(ctx.out, "{}", bounds::beta_csv(&rows))
            .map_err(|e| HallError::Config(format!("write failed: {e}")))?;
    }
    Ok(rows.iter().all(|r| r.matches() != Some(false)))
}

fn cmd_verify(
    ctx: &mut Ctx,
    suite: Suite,
    specs: &[OrderSpec],
    budget: Option<usize>,
) -> Result<bool> {
    let mut ok = true;
    let mut docs = Vec::new();
    let run = |s: Suite| suite == s || suite == Suite::All;
    for &spec in specs {
        let (ob, bb, sb) = default_budgets(spec);
        if run(Suite::Oracle) {
            let b = budget.unwrap_or(ob);
            let r = oracle_suite(spec, b, b)?;
            ok &= r.holds();
            if !ctx.json {
                ctx.line(format!(
                    "{} oracle {} budget={} pairs={} failures={} ranks={}",
                    pass(r.holds()),
                    r.order,
                    r.budget,
                    r.pairs_checked,
                    r.failures.len(),
                    r.ranks
                        .iter()
                        .map(|x| x.1.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                ))?;
            }
            docs.push(json!({ "suite": "oracle", "report": r }));
        }
        if run(Suite::Bounds) {
            for r in bounds_suite(spec, budget.unwrap_or(bb))? {
                ok &= r.holds();
                if !ctx.json {
                    ctx.line(format!(
                        "{} bound {} {} budget={} pairs={} violations={} maxRatio={}/{} equalities={}",
                        pass(r.holds()),
                        r.bound,
                        r.order,
                        r.budget,
                        r.pairs_checked,
                        r.violations.len(),
                        r.max_ratio.0,
                        r.max_ratio.1,
                        r.equalities
                    ))?;
                }
                docs.push(json!({ "suite": "bounds", "report": r }));
            }
        }
        if run(Suite::Structure) {
            let r = structure_suite(spec, budget.unwrap_or(sb))?;
            ok &= r.holds();
            if !ctx.json {
                for (name, t) in &r.checks {
                    ctx.line(format!(
                        "{} structure {} {} budget={} checked={} failures={}",
                        pass(t.failures.is_empty()),
                        name,
                        r.order,
                        r.budget,
                        t.checked,
                        t.failures.len()
                    ))?;
                }
            }
            docs.push(json!({ "suite": "structure", "report": r }));
        }
    }
    if run(Suite::Identities) {
        let results: Vec<IdentityResult> = bounds::verify_identities();
        for r in &results {
            ok &= r.holds();
            if !ctx.json {
                ctx.line(format!(
                    "{} identity {} instances={}",
                    pass(r.holds()),
                    r.name,
                    r.instances
                ))?;
            }
        }
        docs.push(json!({ "suite": "identities", "report": results }));
    }
    if ctx.json {
        ctx.json(&docs)?;
    }
    Ok(ok)
}

fn cmd_family(ctx: &mut Ctx, inst: &FamilyInstance) -> Result<bool> {
    let out = inst.run()?;
    let ok = out.passed();
    if ctx.json {
        ctx.json(&json!({
            "family": inst.family.name(),
            "order": inst.order.name(),
            "params": inst.params.iter().map(|(k, v)| json!({"name": k, "value": v})).collect::<Vec<_>>(),
            "norm": out.norm.to_string(),
            "expected": inst.expected.to_string(),
            "theta": out.theta,
            "oracle": out.oracle_ok,
            "passed": ok,
            "notes": out.notes,
        }))?;
    } else {
        ctx.line(format!(
            "{} {} norm={} expected {} theta={} oracle={}",
            pass(ok),
            inst.describe(),
            out.norm,
            inst.expected,
            out.theta
                .map(|t| t.to_string())
                .unwrap_or_else(|| "-".into()),
            pass(out.oracle_ok)
        ))?;
        for n in &out.notes {
            ctx.line(format!("  {n}"))?;
        }
    }
    Ok(ok)
}

/// Parses `args` and runs the command, writing to `out`.
pub fn run_from<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli, out),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String) {
        let mut buf = Vec::new();
        let mut full = vec!["hallbasis"];
        full.extend_from_slice(args);
        let code = run_from(full, &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn gen_counts() {
        let (code, out) = run(&[
            "gen",
            "--order",
            "fibo",
            "--alphabet",
            "2",
            "--max-len",
            "6",
            "--json",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        let total: usize = v["elements"]
            .as_array()
            .unwrap()
            .iter()
            .map(|l| l.as_array().unwrap().len())
            .sum();
        assert_eq!(total, 23);
        assert_eq!(v["maxLen"], 6);
        assert_eq!(
            run(&[
                "gen",
                "--order",
                "supergeom",
                "--alphabet",
                "3",
                "--max-len",
                "4"
            ])
            .0,
            2
        );
        assert_eq!(run(&["gen", "--order", "sharp:3", "--max-len", "5"]).0, 0);
    }

    #[test]
    fn decompose_outputs() {
        let (code, out) = run(&[
            "decompose",
            "--order",
            "length",
            "--alphabet",
            "3",
            "-a",
            "X0",
            "-b",
            "[X1,[X1,X2]]",
            "--json",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["norm"], "4");
        assert!(v["maxDepth"].is_null());
        let (code, out) = run(&[
            "decompose",
            "--order",
            "length",
            "-a",
            "X0",
            "-b",
            "X0",
            "--json",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("\"norm\": \"0\""));
        let (code, _) = run(&[
            "decompose",
            "--order",
            "length",
            "--max-len",
            "4",
            "-a",
            "X0",
            "-b",
            "[X1,[X1,[X0,X1]]]",
        ]);
        assert_eq!(code, 3);
        let (code, out) = run(&[
            "decompose",
            "--order",
            "fibo",
            "-a",
            "X0",
            "-b",
            "[X0,X1]",
            "--stats",
            "--json",
        ]);
        assert_eq!(code, 0);
        assert!(out.contains("\"maxDepth\": 1"));
    }

    #[test]
    fn beta_csv_matches() {
        let (code, out) = run(&[
            "beta",
            "--order",
            "lyndon",
            "--alphabet",
            "2",
            "--max-n",
            "7",
        ]);
        assert_eq!(code, 0);
        assert!(out.starts_with("n,beta,closed_form,match\n2,1,1,true\n"));
        assert!(out.lines().skip(1).all(|l| l.ends_with(",true")));
    }

    #[test]
    fn family_and_errors() {
        let (code, out) = run(&["family", "fibo-sature", "3", "2"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.starts_with("PASS"));
        assert_eq!(run(&["family", "nope", "1"]).0, 2);
        assert_eq!(run(&["frobnicate"]).0, 2);
        assert_eq!(run(&["verify", "--suite", "identities"]).0, 0);
    }

    #[test]
    fn output_is_deterministic() {
        let args = ["gen", "--order", "lyndon", "--max-len", "6", "--json"];
        assert_eq!(run(&args), run(&args));
    }
}
