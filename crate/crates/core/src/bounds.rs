//! Exact bound formulas, β tables and exhaustive sweeps over basis pairs.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::decomp::Decomposer;
use crate::error::{HallError, Result};
use crate::magma::TreeId;
use crate::order::OrderSpec;

/// Fibonacci numbers with `F_0 = 0`, `F_1 = F_2 = 1`.
pub fn fib(n: usize) -> BigUint {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..n {
        let c = &a + &b;
        a = std::mem::replace(&mut b, c);
    }
    a
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: i64, k: i64) -> BigUint {
    if k < 0 || n < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

/// `⌊e (θ-1)!⌋ = Σ_{p=0}^{θ-1} (θ-1)!/p!`.
pub fn bound_general_theta(theta: usize) -> BigUint {
    assert!(theta >= 1, "theta is at least 1");
    let m = theta - 1;
    // running value of m!/p! for p = m, m-1, ..., 0
    let mut term = BigUint::one();
    let mut sum = BigUint::one();
    for p in (1..=m).rev() {
        term *= p;
        sum += &term;
    }
    sum
}

/// `2^(θ-1)`.
pub fn bound_geom(theta: usize) -> BigUint {
    assert!(theta >= 1, "theta is at least 1");
    pow2(theta - 1)
}

/// `2^(⌊|b|/|a|⌋ - 1)`.
pub fn bound_length_ratio(len_a: usize, len_b: usize) -> BigUint {
    assert!(len_a >= 1 && len_b >= len_a, "requires 1 <= |a| <= |b|");
    pow2(len_b / len_a - 1)
}

/// `A(θ) = (θ-3) 2^(θ-2) + θ + 1`.
pub fn a_theta(theta: usize) -> BigUint {
    assert!(theta >= 1, "theta is at least 1");
    if theta == 1 {
        return BigUint::one();
    }
    let v: BigInt =
        (BigInt::from(theta) - 3) * BigInt::from(pow2(theta - 2)) + BigInt::from(theta + 1);
    v.to_biguint().expect("A(θ) is positive")
}

/// `C(1) = 1`, `C(n) = 2^(n(n-1)/2 + 1)` for `n >= 2`.
pub fn c_n(n: usize) -> BigUint {
    assert!(n >= 1, "C is defined for n >= 1");
    if n == 1 {
        BigUint::one()
    } else {
        pow2(n * (n - 1) / 2 + 1)
    }
}

/// `F_(2 n_a + ν_a)`.
pub fn bound_fibo(n_a: usize, nu_a: usize) -> BigUint {
    fib(2 * n_a + nu_a)
}

/// `C(n_a + 1)^ρ_a · n_a!`.
pub fn bound_asym(n_a: usize, rho_a: usize) -> BigUint {
    c_n(n_a + 1).pow(rho_a as u32) * factorial(n_a)
}

/// Base-2 logarithm of the rough bound `2^(k^(n(n+1)/2))`, i.e. `k^(n(n+1)/2)`.
pub fn rough_bound_log2(n: usize, k: usize) -> BigUint {
    BigUint::from(k).pow((n * (n + 1) / 2) as u32)
}

/// `A^r_s(n)` from the alternating binomial sum.
pub fn ars_def(r: usize, s: usize, n: usize) -> BigUint {
    let (s_, n_) = (s as i64, n as i64);
    let mut acc = BigInt::zero();
    for p in r as i64..=s_ {
        let inner = BigInt::from(binomial(n_ - 1 - 2 * p, s_ - p))
            - BigInt::from(binomial(n_ - 1 - 2 * p, s_ - p - 1));
        let term = BigInt::from(binomial(n_ - 1 - p, p)) * inner;
        if p % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.magnitude().clone()
}

/// `A^r_s(n) = (n-2s)/s · C(n-r, n-s) · C(n-s-1, r-1)` for `1 <= r <= s`, `n >= 2s+1`.
pub fn ars_closed(r: usize, s: usize, n: usize) -> BigUint {
    assert!(
        1 <= r && r <= s && n > 2 * s,
        "requires 1 <= r <= s and n >= 2s+1"
    );
    let (r, s, n) = (r as i64, s as i64, n as i64);
    let num =
        BigUint::from((n - 2 * s) as u64) * binomial(n - r, n - s) * binomial(n - s - 1, r - 1);
    let s = BigUint::from(s as u64);
    debug_assert!((&num % &s).is_zero());
    num / s
}

/// `1 + Σ_{s=1}^{⌊(n-1)/2⌋} A^1_s(n)`.
pub fn sum_a1(n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for s in 1..=(n - 1) / 2 {
        acc += ars_closed(1, s, n);
    }
    acc
}

/// Norm of `[X0, b_n]` in a two-letter set with `r(X0, X1) = r` finite and `n >= 2r+1`.
pub fn two_letter_norm_beyond(r: usize, n: usize) -> BigUint {
    assert!(r >= 1 && n > 2 * r, "requires n >= 2r+1");
    let mut acc = BigUint::zero();
    for p in 0..r {
        acc += binomial((n - 1 - p) as i64, p as i64);
    }
    for s in r..=(n - 1) / 2 {
        acc += ars_closed(r, s, n);
    }
    acc
}

/// An upper bound on `‖[a, b]‖` that can be swept over basis pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    /// `⌊e(θ-1)!⌋`, every order.
    GeneralTheta,
    /// `2^(θ-1)`, length-compatible and Lyndon orders.
    Geom,
    /// `2^(⌊|b|/|a|⌋-1)`, length-compatible orders.
    LengthRatio,
    /// `F_(2n_a+ν_a)`, Fibonacci-minimal order.
    Fibo,
    /// `F_(2n_a+ν_a-1)` for `a = X0`, `b` not a letter, `|b| = 2n_a+ν_a`; Fibonacci-minimal order.
    FiboX0,
    /// `A(θ)`, Fibonacci-minimal order.
    ATheta,
    /// `F_(|a|+|b|-2)` when `|a|+|b| >= 3`, Fibonacci-minimal order.
    FiboLength,
    /// `C(n_a+1)^ρ_a · n_a!` with distinguished letter `X0`, every order.
    Asym,
}

impl BoundKind {
    pub const ALL: [BoundKind; 8] = [
        BoundKind::GeneralTheta,
        BoundKind::Geom,
        BoundKind::LengthRatio,
        BoundKind::Fibo,
        BoundKind::FiboX0,
        BoundKind::ATheta,
        BoundKind::FiboLength,
        BoundKind::Asym,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::GeneralTheta => "e-factorial-theta",
            BoundKind::Geom => "geometric-theta",
            BoundKind::LengthRatio => "length-ratio",
            BoundKind::Fibo => "fibo-na-nu",
            BoundKind::FiboX0 => "fibo-x0",
            BoundKind::ATheta => "a-theta",
            BoundKind::FiboLength => "fibo-length",
            BoundKind::Asym => "asymmetric",
        }
    }

    pub fn parse(name: &str) -> Result<BoundKind> {
        BoundKind::ALL
            .into_iter()
            .find(|b| b.name() == name)
            .ok_or_else(|| HallError::Config(format!("unknown bound {name:?}")))
    }

    pub fn applies_to(self, spec: OrderSpec) -> bool {
        match self {
            BoundKind::GeneralTheta | BoundKind::Asym => true,
            BoundKind::Geom => {
                matches!(spec, OrderSpec::LengthLex { .. } | OrderSpec::Lyndon { .. })
            }
            BoundKind::LengthRatio => matches!(spec, OrderSpec::LengthLex { .. }),
            BoundKind::Fibo | BoundKind::FiboX0 | BoundKind::ATheta | BoundKind::FiboLength => {
                spec == OrderSpec::FiboMin
            }
        }
    }

    /// Bounds that apply to `spec`.
    pub fn for_order(spec: OrderSpec) -> Vec<BoundKind> {
        BoundKind::ALL
            .into_iter()
            .filter(|b| b.applies_to(spec))
            .collect()
    }

    /// The bound for the pair, or `None` when the pair is outside the statement's hypotheses.
    fn value(self, dec: &Decomposer, a: TreeId, b: TreeId) -> Result<Option<BigUint>> {
        let m = dec.magma();
        Ok(match self {
            BoundKind::GeneralTheta => Some(bound_general_theta(dec.theta(a, b)?)),
            BoundKind::Geom => Some(bound_geom(dec.theta(a, b)?)),
            BoundKind::LengthRatio => Some(bound_length_ratio(m.len(a), m.len(b))),
            BoundKind::Fibo => {
                let c = dec.folding_counts(a, b)?;
                Some(bound_fibo(c.non_x1(), c.nu))
            }
            BoundKind::FiboX0 => {
                let c = dec.folding_counts(a, b)?;
                let index = 2 * c.non_x1() + c.nu;
                (m.letter_of(a) == Some(0) && !m.is_letter(b) && m.len(b) == index && index >= 2)
                    .then(|| fib(index - 1))
            }
            BoundKind::ATheta => Some(a_theta(dec.theta(a, b)?)),
            BoundKind::FiboLength => {
                let n = m.len(a) + m.len(b);
                (n >= 3).then(|| fib(n - 2))
            }
            BoundKind::Asym => {
                let c = dec.folding_counts(a, b)?;
                Some(bound_asym(c.non_x0(), c.rho))
            }
        })
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub a: String,
    pub b: String,
    pub norm: String,
    pub bound: String,
}

/// Outcome of an exhaustive bound sweep.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub order: String,
    pub bound: String,
    pub budget: usize,
    #[serde(rename = "pairsChecked")]
    pub pairs_checked: usize,
    pub violations: Vec<Violation>,
    /// Largest `norm / bound`, as numerator and denominator.
    #[serde(rename = "maxRatio")]
    pub max_ratio: (String, String),
    /// Number of pairs where the bound is attained.
    pub equalities: usize,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// All member pairs `a < b` with `|a| + |b| <= budget`, in basis order of `b` then `a`.
pub fn ordered_pairs(dec: &Decomposer, budget: usize) -> Result<Vec<(TreeId, TreeId)>> {
    let hs = dec.hall_set();
    if budget > hs.max_len() {
        return Err(HallError::Capacity {
            length: budget,
            max_len: hs.max_len(),
        });
    }
    let o = dec.order();
    let mut out = Vec::new();
    for lb in 1..budget {
        for &b in hs.elements_of_length(lb)? {
            for la in 1..=budget - lb {
                for &a in hs.elements_of_length(la)? {
                    if o.cmp_in_domain(a, b) == Ordering::Less {
                        out.push((a, b));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Checks `kind` on every pair of [`ordered_pairs`].
pub fn verify_sweep(dec: &Decomposer, budget: usize, kind: BoundKind) -> Result<BoundReport> {
    let spec = dec
        .order()
        .spec()
        .ok_or_else(|| HallError::Config("bound sweeps need a named order".into()))?;
    if !kind.applies_to(spec) {
        return Err(HallError::Config(format!(
            "bound {kind} does not apply to the {spec} order"
        )));
    }
    let pairs = ordered_pairs(dec, budget)?;
    let rows: Vec<Option<(TreeId, TreeId, BigUint, BigUint)>> = pairs
        .par_iter()
        .map(|&(a, b)| -> Result<_> {
            Ok(match kind.value(dec, a, b)? {
                None => None,
                Some(bound) => Some((a, b, dec.decompose(a, b)?.norm(), bound)),
            })
        })
        .collect::<Result<_>>()?;

    let m = dec.magma();
    let mut report = BoundReport {
        order: spec.name(),
        bound: kind.name().into(),
        budget,
        pairs_checked: 0,
        violations: Vec::new(),
        max_ratio: ("0".into(), "1".into()),
        equalities: 0,
    };
    let (mut best_n, mut best_d) = (BigUint::zero(), BigUint::one());
    for (a, b, norm, bound) in rows.into_iter().flatten() {
        report.pairs_checked += 1;
        if norm > bound {
            report.violations.push(Violation {
                a: m.format(a),
                b: m.format(b),
                norm: norm.to_string(),
                bound: bound.to_string(),
            });
        }
        if norm == bound {
            report.equalities += 1;
        }
        if &norm * &best_d > &best_n * &bound {
            best_n = norm;
            best_d = bound;
        }
    }
    report.max_ratio = (best_n.to_string(), best_d.to_string());
    Ok(report)
}

/// `β_n`: the largest norm over pairs `a < b` with `|a| + |b| = n`.
pub fn beta(dec: &Decomposer, n: usize) -> Result<BigUint> {
    let hs = dec.hall_set();
    if n < 2 {
        return Err(HallError::Config(format!("β_n needs n >= 2, got {n}")));
    }
    if n > hs.max_len() {
        return Err(HallError::Capacity {
            length: n,
            max_len: hs.max_len(),
        });
    }
    let o = dec.order();
    let mut pairs = Vec::new();
    for la in 1..n {
        for &a in hs.elements_of_length(la)? {
            for &b in hs.elements_of_length(n - la)? {
                if o.cmp_in_domain(a, b) == Ordering::Less {
                    pairs.push((a, b));
                }
            }
        }
    }
    let norms: Vec<BigUint> = pairs
        .par_iter()
        .map(|&(a, b)| dec.decompose(a, b).map(|s| s.norm()))
        .collect::<Result<_>>()?;
    Ok(norms.into_iter().max().unwrap_or_default())
}

/// Known value of `β_n` for the shipped orders, when one is established.
pub fn beta_closed_form(spec: OrderSpec, n: usize) -> Option<BigUint> {
    if n < 2 {
        return None;
    }
    let one = BigUint::one();
    match spec {
        OrderSpec::LengthLex { k } | OrderSpec::Lyndon { k } if k >= 3 => Some(pow2(n - 2)),
        OrderSpec::LengthLex { .. } => Some(if n >= 4 { pow2(n - 4) } else { one }),
        OrderSpec::Lyndon { .. } => {
            let geom = if n >= 5 { pow2(n - 5) } else { one.clone() };
            Some(one.max(fib(n - 2)).max(geom))
        }
        // only the letter pair has length 2
        OrderSpec::FiboMin => Some(if n == 2 { one } else { fib(n - 2) }),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaRow {
    pub n: usize,
    pub beta: BigUint,
    pub closed_form: Option<BigUint>,
}

impl BetaRow {
    /// `None` when no closed form is known.
    pub fn matches(&self) -> Option<bool> {
        self.closed_form.as_ref().map(|c| *c == self.beta)
    }
}

pub fn beta_table(dec: &Decomposer, max_n: usize) -> Result<Vec<BetaRow>> {
    let spec = dec.order().spec();
    (2..=max_n)
        .map(|n| {
            Ok(BetaRow {
                n,
                beta: beta(dec, n)?,
                closed_form: spec.and_then(|s| beta_closed_form(s, n)),
            })
        })
        .collect()
}

/// CSV with header `n,beta,closed_form,match`.
pub fn beta_csv(rows: &[BetaRow]) -> String {
    let mut out = String::from("n,beta,closed_form,match\n");
    for r in rows {
        let cf = r
            .closed_form
            .as_ref()
            .map(|c| c.to_string())
            .unwrap_or_default();
        let mt = match r.matches() {
            Some(true) => "true",
            Some(false) => "false",
            None => "",
        };
        out.push_str(&format!("{},{},{},{}\n", r.n, r.beta, cf, mt));
    }
    out
}

/// Structural properties of decompositions and foldings checked by [`verify_structure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StructureCheck {
    /// `T_a(b)` reassembles to `b`, each leaf `c` has `(a, c)` in the set, and `{a} ∪ leaves` is alphabetic.
    Folding,
    /// `a < λ(c)` for every `c` in the support when `(a, b)` is not a member.
    LeftFactorAboveA,
    /// Every `c` in the support is assembled from the multiset `{a} + leaves(T_a(b))`.
    SupportShape,
    /// The recursion never has more than `θ_a(b)` active calls.
    CallDepth,
    /// `a <= ã < b` implies `θ_ã(b) <= θ_a(b)`.
    ThetaMonotone,
    /// `θ_a(b) <= |b|`, and `<= |b| - 1` for two letters and `|b| >= 2`.
    ThetaLength,
    /// Lyndon order: `a ∈ Λ(c)` and `c < b`.
    LyndonSupport,
    /// Fibonacci-minimal order: `a <= λ(c) < b`, equality iff `(a, b)` is a member, and `c <= λ(b)` or `θ_λ(b)(c) <= 2`.
    FiboSupport,
}

impl StructureCheck {
    pub fn name(self) -> &'static str {
        match self {
            StructureCheck::Folding => "folding",
            StructureCheck::LeftFactorAboveA => "left-factor-above-a",
            StructureCheck::SupportShape => "support-shape",
            StructureCheck::CallDepth => "call-depth",
            StructureCheck::ThetaMonotone => "theta-monotone",
            StructureCheck::ThetaLength => "theta-length",
            StructureCheck::LyndonSupport => "lyndon-support",
            StructureCheck::FiboSupport => "fibo-support",
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CheckTally {
    pub checked: usize,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    pub order: String,
    pub budget: usize,
    pub pairs: usize,
    pub checks: Vec<(String, CheckTally)>,
}

impl StructureReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|(_, t)| t.failures.is_empty())
    }
}

/// Whether `c` is a tree over exactly the multiset `items`.
fn assemblable(
    dec: &Decomposer,
    c: TreeId,
    items: &[TreeId],
    mask: u32,
    memo: &mut HashMap<(TreeId, u32), bool>,
) -> bool {
    if mask.count_ones() == 1 {
        return items[mask.trailing_zeros() as usize] == c;
    }
    if let Some(&v) = memo.get(&(c, mask)) {
        return v;
    }
    let m = dec.magma();
    let v = match m.children(c) {
        None => false,
        Some((l, r)) => {
            let target = m.len(l);
            let mut found = false;
            // enumerate non-empty proper submasks
            let mut sub = (mask - 1) & mask;
            while sub > 0 && !found {
                let len: usize = (0..items.len())
                    .filter(|i| sub & (1 << i) != 0)
                    .map(|i| m.len(items[i]))
                    .sum();
                if len == target
                    && assemblable(dec, l, items, sub, memo)
                    && assemblable(dec, r, items, mask & !sub, memo)
                {
                    found = true;
                }
                sub = (sub - 1) & mask;
            }
            found
        }
    };
    memo.insert((c, mask), v);
    v
}

fn check_pair(
    dec: &Decomposer,
    a: TreeId,
    b: TreeId,
    budget: usize,
) -> Result<Vec<(StructureCheck, Option<String>)>> {
    let m = dec.magma();
    let o = dec.order();
    let hs = dec.hall_set();
    let lt = |x: TreeId, y: TreeId| o.cmp_in_domain(x, y) == Ordering::Less;
    let tag = |what: &str| format!("a={} b={}: {what}", m.format(a), m.format(b));
    let mut out = Vec::new();
    let mut record = |check, ok: bool, what: &str| out.push((check, (!ok).then(|| tag(what))));

    let folding = dec.relative_folding(a, b)?;
    let theta = folding.theta();
    let (series, stats) = dec.decompose_with_stats(a, b)?;
    let is_member = hs.bracket_is_member(a, b);

    let reassembles = folding.shape.reassemble(m)? == b;
    let leaves_ok = folding.leaves.iter().all(|&c| hs.bracket_is_member(a, c));
    let mut set: Vec<TreeId> = folding.leaves.clone();
    set.push(a);
    set.sort_by(|&x, &y| o.cmp_in_domain(x, y));
    set.dedup();
    let alphabetic = set
        .iter()
        .enumerate()
        .all(|(i, &x)| set[i + 1..].iter().all(|&y| hs.bracket_is_member(x, y)));
    record(
        StructureCheck::Folding,
        reassembles && leaves_ok && alphabetic,
        "folding invariants",
    );

    if !is_member {
        let ok = series
            .terms()
            .iter()
            .all(|(c, _)| lt(a, m.lambda(*c).expect("brackets")));
        record(StructureCheck::LeftFactorAboveA, ok, "a < λ(c)");
    }

    let mut items = folding.leaves.clone();
    items.push(a);
    let full = (1u32 << items.len()) - 1;
    let mut memo = HashMap::new();
    let ok = series
        .terms()
        .iter()
        .all(|(c, _)| assemblable(dec, *c, &items, full, &mut memo));
    record(StructureCheck::SupportShape, ok, "support shape");

    record(
        StructureCheck::CallDepth,
        stats.max_call_depth <= theta,
        "call depth",
    );

    let len_b = m.len(b);
    let two_letters = m.alphabet_size() == 2;
    let ok = theta <= len_b && !(two_letters && len_b >= 2 && theta > len_b - 1);
    record(StructureCheck::ThetaLength, ok, "θ versus |b|");

    let mut mono = true;
    for la in 1..=budget - len_b {
        for &at in hs.elements_of_length(la)? {
            if lt(a, at) && lt(at, b) && dec.theta(at, b)? > theta {
                mono = false;
            }
        }
    }
    record(StructureCheck::ThetaMonotone, mono, "θ monotonicity");

    match o.spec() {
        Some(OrderSpec::Lyndon { .. }) => {
            let ok = series
                .terms()
                .iter()
                .all(|(c, _)| m.has_left_factor(*c, a) && lt(*c, b));
            record(StructureCheck::LyndonSupport, ok, "a ∈ Λ(c), c < b");
        }
        Some(OrderSpec::FiboMin) if m.letter_of(b) != Some(1) => {
            let lb = m.lambda(b)?;
            let mut ok = true;
            for (c, _) in series.terms() {
                let lc = m.lambda(*c)?;
                let bounds = !lt(lc, a) && lt(lc, b) && ((lc == a) == is_member);
                let near = !lt(lb, *c) || dec.theta(lb, *c)? <= 2;
                ok &= bounds && near;
            }
            record(StructureCheck::FiboSupport, ok, "fibo support structure");
        }
        _ => {}
    }
    Ok(out)
}

/// Runs every applicable [`StructureCheck`] over [`ordered_pairs`].
pub fn verify_structure(dec: &Decomposer, budget: usize) -> Result<StructureReport> {
    let pairs = ordered_pairs(dec, budget)?;
    let rows: Vec<Vec<(StructureCheck, Option<String>)>> = pairs
        .par_iter()
        .map(|&(a, b)| check_pair(dec, a, b, budget))
        .collect::<Result<_>>()?;
    let mut tallies: std::collections::BTreeMap<StructureCheck, CheckTally> = Default::default();
    for (check, failure) in rows.into_iter().flatten() {
        let t = tallies.entry(check).or_default();
        t.checked += 1;
        if let Some(f) = failure {
            t.failures.push(f);
        }
    }
    Ok(StructureReport {
        order: dec.order().name(),
        budget,
        pairs: pairs.len(),
        checks: tallies
            .into_iter()
            .map(|(c, t)| (c.name().to_string(), t))
            .collect(),
    })
}

/// Outcome of one identity family.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityResult {
    pub name: String,
    pub instances: usize,
    pub failures: Vec<String>,
}

impl IdentityResult {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

fn identity(name: &str, cases: impl Iterator<Item = (String, bool)>) -> IdentityResult {
    let mut r = IdentityResult {
        name: name.into(),
        instances: 0,
        failures: Vec::new(),
    };
    for (label, ok) in cases {
        r.instances += 1;
        if !ok {
            r.failures.push(label);
        }
    }
    r
}

/// The finite identity checks: binomial sums, Fibonacci inequalities and the Leibniz inversions.
pub fn verify_identities() -> Vec<IdentityResult> {
    let ars_range = || {
        (1..=8usize)
            .flat_map(|s| (1..=s).flat_map(move |r| (2 * s + 1..=25).map(move |n| (r, s, n))))
    };
    let fib_pairs = || (1..=30usize).flat_map(|p| (1..=30usize).map(move |q| (p, q)));
    vec![
        identity(
            "ars-closed-form",
            ars_range().map(|(r, s, n)| {
                (
                    format!("r={r} s={s} n={n}"),
                    ars_def(r, s, n) == ars_closed(r, s, n),
                )
            }),
        ),
        identity(
            "ars-binomial-lower-bound",
            ars_range().map(|(r, s, n)| {
                (
                    format!("r={r} s={s} n={n}"),
                    ars_closed(r, s, n) >= binomial((n - s - 1) as i64, s as i64),
                )
            }),
        ),
        identity(
            "a1-sum",
            (3..=24usize).map(|n| {
                let s = sum_a1(n);
                (
                    format!("n={n}"),
                    s == binomial(n as i64 - 1, ((n - 1) / 2) as i64) && s <= pow2(n - 2),
                )
            }),
        ),
        identity(
            "fibo-doubling",
            (1..=30usize).map(|p| (format!("p={p}"), fib(p) * 2u32 <= fib(p + 2))),
        ),
        identity(
            "fibo-cross",
            fib_pairs().map(|(p, q)| {
                (
                    format!("p={p} q={q}"),
                    fib(p) * fib(q - 1) + fib(p - 1) * fib(q) <= fib(p + q - 1),
                )
            }),
        ),
        identity(
            "e-factorial-recurrence",
            (2..=30usize).map(|t| {
                (
                    format!("theta={t}"),
                    bound_general_theta(t) == bound_general_theta(t - 1) * (t - 1) + 1u32,
                )
            }),
        ),
        identity(
            "leibniz-inversion",
            (0..=5usize)
                .flat_map(|nu| (2..=4usize).map(move |k| (nu, k)))
                .map(|(nu, k)| {
                    (
                        format!("nu={nu} k={k}"),
                        crate::oracle::leibniz_inversion_check(nu, k)
                            && crate::oracle::multinomial_sum_check(nu, k),
                    )
                }),
        ),
    ]
}

/// A ratio of decimal strings as `f64`, for display only.
pub fn ratio_f64(num: &str, den: &str) -> f64 {
    let n: BigUint = num.parse().unwrap_or_default();
    let d: BigUint = den.parse().unwrap_or_else(|_| BigUint::one());
    n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hall::HallSet;
    use crate::order::HallOrder;
    use std::sync::Arc;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn fibonacci() {
        assert_eq!(fib(0), big(0));
        assert_eq!(fib(1), big(1));
        assert_eq!(fib(2), big(1));
        assert_eq!(fib(10), big(55));
    }

    #[test]
    fn closed_forms() {
        let e: Vec<_> = (1..=5).map(bound_general_theta).collect();
        assert_eq!(e, [1u64, 2, 5, 16, 65].map(big));
        assert!(bound_general_theta(21).to_u64().is_some());
        assert!(bound_general_theta(22).to_u64().is_none());
        let a: Vec<_> = (1..=6).map(a_theta).collect();
        assert_eq!(a, [1u64, 2, 4, 9, 22, 55].map(big));
        assert_eq!([c_n(1), c_n(2), c_n(3)], [1u64, 4, 16].map(big));
        assert_eq!(bound_fibo(1, 1), big(2));
        assert_eq!(bound_geom(4), big(8));
        assert_eq!(bound_length_ratio(2, 7), big(4));
        assert_eq!(bound_asym(0, 1), big(1));
        assert_eq!(rough_bound_log2(2, 2), big(8));
    }

    #[test]
    fn a_theta_matches_binomial_sum() {
        for p in 1..=20usize {
            let mut s = BigUint::from(1 + p);
            for k in 2..=p {
                s += binomial(p as i64, k as i64) * (k - 1);
            }
            assert_eq!(a_theta(p + 1), s);
        }
    }

    #[test]
    fn identities_hold() {
        for r in verify_identities() {
            assert!(r.holds(), "{}: {:?}", r.name, r.failures);
        }
    }

    #[test]
    fn small_sweeps() {
        let o = HallOrder::standalone(OrderSpec::FiboMin).unwrap();
        let dec = Decomposer::new(Arc::new(HallSet::generate(o, 7).unwrap()));
        for kind in BoundKind::for_order(OrderSpec::FiboMin) {
            let r = verify_sweep(&dec, 7, kind).unwrap();
            assert!(r.holds(), "{kind}: {:?}", r.violations);
            assert!(r.pairs_checked > 0);
        }
        assert!(verify_sweep(&dec, 7, BoundKind::Geom).is_err());
        assert!(verify_structure(&dec, 6).unwrap().holds());
    }

    #[test]
    fn beta_rows() {
        let o = HallOrder::standalone(OrderSpec::LengthLex { k: 2 }).unwrap();
        let dec = Decomposer::new(Arc::new(HallSet::generate(o, 7).unwrap()));
        for row in beta_table(&dec, 7).unwrap() {
            assert_eq!(row.matches(), Some(true), "n = {}", row.n);
        }
        assert!(beta_csv(&beta_table(&dec, 3).unwrap())
            .starts_with("n,beta,closed_form,match\n2,1,1,true\n"));
    }
}
