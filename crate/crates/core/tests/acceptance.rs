//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::Instant;

use hallbasis::bounds::{self, BoundKind};
use hallbasis::cli::{bounds_suite, decomposer, oracle_suite, structure_suite};
use hallbasis::families::{self, acceptance_grid};
use hallbasis::OrderSpec;
use num_bigint::BigUint;

const K2: [OrderSpec; 4] = [
    OrderSpec::LengthLex { k: 2 },
    OrderSpec::Lyndon { k: 2 },
    OrderSpec::FiboMin,
    OrderSpec::SuperGeom,
];

fn sweep_orders() -> Vec<(OrderSpec, usize)> {
    let mut v: Vec<_> = K2.iter().map(|&s| (s, 9)).collect();
    v.push((OrderSpec::LengthLex { k: 3 }, 7));
    v.push((OrderSpec::Lyndon { k: 3 }, 7));
    v.push((OrderSpec::SharpEn1 { n: 3 }, 7));
    v
}

struct Criterion {
    ok: bool,
    details: Vec<String>,
}

impl Criterion {
    fn new() -> Self {
        Criterion {
            ok: true,
            details: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, detail: String) {
        self.ok &= ok;
        if !ok {
            self.details.push(detail);
        }
    }
}

fn oracle_and_rank() -> (Criterion, Criterion, String) {
    let (mut c1, mut c2) = (Criterion::new(), Criterion::new());
    let mut pairs = 0;
    for (spec, budget) in sweep_orders() {
        let r = oracle_suite(spec, budget, budget).expect("oracle suite");
        pairs += r.pairs_checked;
        c1.record(
            r.failures.is_empty(),
            format!(
                "{} failures: {:?}",
                r.order,
                &r.failures[..r.failures.len().min(5)]
            ),
        );
        for (n, rank, witt, count) in &r.ranks {
            c2.record(
                rank == count && witt == &count.to_string(),
                format!("{} n={n}: rank={rank} witt={witt} count={count}", r.order),
            );
        }
    }
    (c1, c2, format!("pairs={pairs}"))
}

type BetaCase = (
    OrderSpec,
    std::ops::RangeInclusive<usize>,
    Box<dyn Fn(usize) -> BigUint>,
);

fn beta_tables() -> Criterion {
    let mut c = Criterion::new();
    let two = BigUint::from(2u32);
    let cases: Vec<BetaCase> = vec![
        (
            OrderSpec::LengthLex { k: 3 },
            2..=8,
            Box::new(move |n| two.pow(n as u32 - 2)),
        ),
        (
            OrderSpec::LengthLex { k: 2 },
            2..=10,
            Box::new(|n| BigUint::from(2u32).pow(n.saturating_sub(4) as u32)),
        ),
        (
            OrderSpec::Lyndon { k: 2 },
            2..=10,
            Box::new(|n| {
                let f = bounds::fib(n - 2).max(BigUint::from(1u32));
                f.max(BigUint::from(2u32).pow(n.saturating_sub(5) as u32))
            }),
        ),
        (OrderSpec::FiboMin, 3..=10, Box::new(|n| bounds::fib(n - 2))),
    ];
    for (spec, range, expected) in cases {
        let dec = decomposer(spec, *range.end()).expect("hall set");
        let rows = bounds::beta_table(&dec, *range.end()).expect("beta table");
        for n in range {
            let row = rows.iter().find(|r| r.n == n).expect("row present");
            let want = expected(n);
            c.record(
                row.beta == want,
                format!("{} n={n}: beta={} expected={want}", spec.name(), row.beta),
            );
        }
    }
    c
}

fn bound_sweeps() -> (Criterion, String) {
    let mut c = Criterion::new();
    let mut required = vec![];
    for spec in K2 {
        required.push((BoundKind::GeneralTheta, spec));
        required.push((BoundKind::Asym, spec));
    }
    for spec in [OrderSpec::LengthLex { k: 2 }, OrderSpec::Lyndon { k: 2 }] {
        required.push((BoundKind::Geom, spec));
    }
    for kind in [
        BoundKind::Fibo,
        BoundKind::FiboX0,
        BoundKind::ATheta,
        BoundKind::FiboLength,
    ] {
        required.push((kind, OrderSpec::FiboMin));
    }
    let mut sweeps = 0;
    let mut covered = vec![];
    for spec in K2 {
        for r in bounds_suite(spec, 9).expect("bound sweep") {
            sweeps += 1;
            covered.push((r.bound.clone(), r.order.clone()));
            c.record(
                r.holds(),
                format!(
                    "{} on {}: {} violations",
                    r.bound,
                    r.order,
                    r.violations.len()
                ),
            );
        }
    }
    for (kind, spec) in required {
        let key = (kind.name().to_string(), spec.name());
        c.record(
            covered.contains(&key),
            format!("missing sweep {} on {}", key.0, key.1),
        );
    }
    (c, format!("sweeps={sweeps}"))
}

fn family_grid() -> (Criterion, String) {
    let mut c = Criterion::new();
    let grid = acceptance_grid();
    for (family, spec, params) in &grid {
        let inst = families::build(*family, *spec, params).expect("family instance");
        match inst.run() {
            Ok(out) => c.record(
                out.passed(),
                format!(
                    "{}: norm={} expected {}",
                    inst.describe(),
                    out.norm,
                    inst.expected
                ),
            ),
            Err(e) => c.record(false, format!("{}: {e}", inst.describe())),
        }
    }
    (c, format!("instances={}", grid.len()))
}

fn structure() -> (Criterion, String) {
    let mut c = Criterion::new();
    let mut pairs = 0;
    let mut orders: Vec<OrderSpec> = K2.to_vec();
    orders.extend([
        OrderSpec::LengthLex { k: 3 },
        OrderSpec::Lyndon { k: 3 },
        OrderSpec::SharpEn1 { n: 3 },
    ]);
    for spec in orders {
        let r = structure_suite(spec, 8).expect("structure sweep");
        pairs += r.pairs;
        for (name, t) in &r.checks {
            c.record(
                t.failures.is_empty(),
                format!(
                    "{name} on {}: {:?}",
                    r.order,
                    &t.failures[..t.failures.len().min(3)]
                ),
            );
        }
    }
    (c, format!("pairs={pairs}"))
}

fn identities() -> (Criterion, String) {
    let mut c = Criterion::new();
    let results = bounds::verify_identities();
    let instances: usize = results.iter().map(|r| r.instances).sum();
    for r in &results {
        c.record(
            r.holds(),
            format!("{}: {:?}", r.name, &r.failures[..r.failures.len().min(3)]),
        );
    }
    (c, format!("instances={instances}"))
}

fn report(label: &str, c: &Criterion, info: &str, secs: f64) -> bool {
    println!(
        "{} {label} ({info}, {secs:.1}s)",
        if c.ok { "PASS" } else { "FAIL" }
    );
    for d in &c.details {
        println!("    {d}");
    }
    c.ok
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut all = true;

    let t = Instant::now();
    let (c1, c2, info) = oracle_and_rank();
    let secs = t.elapsed().as_secs_f64();
    all &= report("1 oracle soundness sweep", &c1, &info, secs);
    all &= report(
        "2 basis rank certification",
        &c2,
        "n<=9 k=2, n<=7 k>=3",
        secs,
    );

    let t = Instant::now();
    let c3 = beta_tables();
    all &= report(
        "3 beta closed forms",
        &c3,
        "4 tables",
        t.elapsed().as_secs_f64(),
    );

    let t = Instant::now();
    let (c4, info) = bound_sweeps();
    all &= report(
        "4 upper-bound sweeps at budget 9",
        &c4,
        &info,
        t.elapsed().as_secs_f64(),
    );

    let t = Instant::now();
    let (c5, info) = family_grid();
    all &= report("5 equality families", &c5, &info, t.elapsed().as_secs_f64());

    let t = Instant::now();
    let (c6, info) = structure();
    all &= report(
        "6 structural invariants at budget 8",
        &c6,
        &info,
        t.elapsed().as_secs_f64(),
    );

    let t = Instant::now();
    let (c7, info) = identities();
    all &= report("7 identity oracles", &c7, &info, t.elapsed().as_secs_f64());

    println!("total {:.1}s", start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
