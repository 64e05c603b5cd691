//! Bracket families with known norms: equality cases and lower-bound witnesses.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::bounds::{self, a_theta, bound_general_theta, factorial, fib};
use crate::decomp::Decomposer;
use crate::error::{HallError, Result};
use crate::hall::{HallSet, RValue};
use crate::magma::{Magma, Side, TreeId};
use crate::oracle::PairOracle;
use crate::order::{HallOrder, OrderSpec};

/// Exact polynomial checks up to this degree, random matrices above.
const EXACT_ORACLE_DEGREE: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    X3,
    TwoLetter,
    ThetaLower,
    LengthSharp,
    LyndonSharp,
    FiboSature,
    SuperGeom,
    SharpEn1,
    AlphabeticFactorial,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::X3,
        Family::TwoLetter,
        Family::ThetaLower,
        Family::LengthSharp,
        Family::LyndonSharp,
        Family::FiboSature,
        Family::SuperGeom,
        Family::SharpEn1,
        Family::AlphabeticFactorial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::X3 => "x3",
            Family::TwoLetter => "two-letter",
            Family::ThetaLower => "theta-lower",
            Family::LengthSharp => "length-sharp",
            Family::LyndonSharp => "lyndon-sharp",
            Family::FiboSature => "fibo-sature",
            Family::SuperGeom => "supergeom",
            Family::SharpEn1 => "sharp-en1",
            Family::AlphabeticFactorial => "alphabetic-factorial",
        }
    }

    pub fn parse(name: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| HallError::Config(format!("unknown family {name:?}")))
    }

    /// Parameter names, in the order the CLI accepts them.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            Family::X3 | Family::TwoLetter | Family::LengthSharp | Family::LyndonSharp => &["n"],
            Family::SharpEn1 | Family::AlphabeticFactorial => &["n"],
            Family::ThetaLower => &["theta"],
            Family::FiboSature => &["p", "m"],
            Family::SuperGeom => &["p", "nu"],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expected {
    Exact(BigUint),
    AtLeast(BigUint),
}

impl Expected {
    pub fn value(&self) -> &BigUint {
        match self {
            Expected::Exact(v) | Expected::AtLeast(v) => v,
        }
    }

    pub fn accepts(&self, norm: &BigUint) -> bool {
        match self {
            Expected::Exact(v) => norm == v,
            Expected::AtLeast(v) => norm >= v,
        }
    }
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Exact(v) => write!(f, "= {v}"),
            Expected::AtLeast(v) => write!(f, ">= {v}"),
        }
    }
}

/// What is decomposed: a basis pair, or an arbitrary tree expanded letter by letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Pair { a: TreeId, b: TreeId },
    Tree(TreeId),
}

#[derive(Debug, Clone)]
pub struct FamilyInstance {
    pub family: Family,
    pub params: Vec<(&'static str, usize)>,
    pub order: Arc<HallOrder>,
    pub target: Target,
    pub expected: Expected,
    pub expected_theta: Option<usize>,
    pub required_max_len: usize,
}

#[derive(Debug, Clone)]
pub struct FamilyOutcome {
    pub norm: BigUint,
    pub theta: Option<usize>,
    pub norm_ok: bool,
    pub theta_ok: bool,
    pub oracle_ok: bool,
    /// Family-specific side conditions (order axioms, membership chains, factorial bounds).
    pub extra_ok: bool,
    pub notes: Vec<String>,
}

impl FamilyOutcome {
    pub fn passed(&self) -> bool {
        self.norm_ok && self.theta_ok && self.oracle_ok && self.extra_ok
    }
}

fn param(params: &[usize], i: usize, family: Family) -> Result<usize> {
    params.get(i).copied().ok_or_else(|| {
        HallError::Config(format!(
            "family {family} expects parameters {:?}",
            family.parameters()
        ))
    })
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(HallError::Config(msg()))
    }
}

fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

/// Builds a family instance. `order` is required by the families that work in several orders.
pub fn build(family: Family, order: Option<OrderSpec>, params: &[usize]) -> Result<FamilyInstance> {
    let p0 = param(params, 0, family)?;
    match family {
        Family::X3 => fam_x3(order.unwrap_or(OrderSpec::LengthLex { k: 3 }), p0),
        Family::TwoLetter => fam_two_letter_bn(order.unwrap_or(OrderSpec::FiboMin), p0),
        Family::ThetaLower => fam_theta_lower(order.unwrap_or(OrderSpec::LengthLex { k: 2 }), p0),
        Family::LengthSharp => fam_length_sharp(p0),
        Family::LyndonSharp => fam_lyndon_sharp(p0),
        Family::FiboSature => fam_fibo_sature(p0, param(params, 1, family)?),
        Family::SuperGeom => fam_super_geom(p0, param(params, 1, family)?),
        Family::SharpEn1 => fam_sharp_en1(p0),
        Family::AlphabeticFactorial => fam_alphabetic_factorial(p0),
    }
}

fn pair_instance(
    family: Family,
    params: Vec<(&'static str, usize)>,
    order: Arc<HallOrder>,
    a: TreeId,
    b: TreeId,
    expected: Expected,
    expected_theta: Option<usize>,
) -> FamilyInstance {
    let m = order.magma();
    let required_max_len = m.len(a) + m.len(b);
    FamilyInstance {
        family,
        params,
        order,
        target: Target::Pair { a, b },
        expected,
        expected_theta,
        required_max_len,
    }
}

/// `a = X0`, `b = ad_{X1}^n(X2)`: norm `2^n` when `r(X0, X1)` is 1 or infinite.
pub fn fam_x3(spec: OrderSpec, n: usize) -> Result<FamilyInstance> {
    require(spec.alphabet_size() >= 3, || {
        format!(
            "x3 needs at least three letters, order {spec} has {}",
            spec.alphabet_size()
        )
    })?;
    let o = HallOrder::standalone(spec)?;
    let m = o.magma().clone();
    let (x0, x1, x2) = (m.letter(0)?, m.letter(1)?, m.letter(2)?);
    require(o.less(x0, x1)? && o.less(x1, x2)?, || {
        format!("x3 needs X0 < X1 < X2 in order {spec}")
    })?;
    let b = m.ad_power(x1, x2, n, Side::Left)?;
    let hs = HallSet::on_demand(o.clone(), n + 3)?;
    let exact = matches!(
        hs.r_factor(x0, x1, n + 1)?,
        RValue::Finite(1) | RValue::AtLeast(_)
    );
    let v = pow2(n);
    let expected = if exact {
        Expected::Exact(v)
    } else {
        Expected::AtLeast(v)
    };
    Ok(pair_instance(
        Family::X3,
        vec![("n", n)],
        o,
        x0,
        b,
        expected,
        Some(n + 1),
    ))
}

/// `a = X0`, `b = b_n` built from `r = r(X0, X1)`.
pub fn fam_two_letter_bn(spec: OrderSpec, n: usize) -> Result<FamilyInstance> {
    require(spec.alphabet_size() == 2, || {
        format!(
            "two-letter needs k = 2, order {spec} has {}",
            spec.alphabet_size()
        )
    })?;
    require(n >= 1, || "two-letter needs n >= 1".into())?;
    let o = HallOrder::standalone(spec)?;
    let m = o.magma().clone();
    let (x0, x1) = (m.letter(0)?, m.letter(1)?);
    let hs = HallSet::on_demand(o.clone(), n + 2)?;
    // r >= n already decides n < 2r + 1
    let r = match hs.r_factor(x0, x1, n)? {
        RValue::Finite(r) => Some(r),
        RValue::AtLeast(_) => None,
    };
    let b = match r {
        Some(r) if n > r => {
            m.ad_power(x1, m.ad_power(x1, x0, r, Side::Right)?, n - r, Side::Left)?
        }
        _ => m.ad_power(x1, x0, n, Side::Right)?,
    };
    let expected = match r {
        Some(r) if n > 2 * r => Expected::Exact(bounds::two_letter_norm_beyond(r, n)),
        _ => Expected::Exact(fib(n)),
    };
    Ok(pair_instance(
        Family::TwoLetter,
        vec![("n", n)],
        o,
        x0,
        b,
        expected,
        None,
    ))
}

/// `{(X0,X1), (X0,(X0,X1)), X1}` sorted as `x0 < x1 < x2`; `a = x0`, `b = ad_{x1}^{θ-1}(x2)`.
pub fn fam_theta_lower(spec: OrderSpec, theta: usize) -> Result<FamilyInstance> {
    require(spec.alphabet_size() == 2, || {
        format!(
            "theta-lower needs k = 2, order {spec} has {}",
            spec.alphabet_size()
        )
    })?;
    require(theta >= 1, || "theta-lower needs theta >= 1".into())?;
    let o = HallOrder::standalone(spec)?;
    let m = o.magma().clone();
    let mut xs = [m.parse("[X0,X1]")?, m.parse("[X0,[X0,X1]]")?, m.letter(1)?];
    let mut err = None;
    xs.sort_by(|&p, &q| {
        o.compare(p, q).unwrap_or_else(|e| {
            err.get_or_insert(e);
            Ordering::Equal
        })
    });
    if let Some(e) = err {
        return Err(e);
    }
    let b = m.ad_power(xs[1], xs[2], theta - 1, Side::Left)?;
    let v = pow2(theta - 1);
    let expected = match spec {
        OrderSpec::LengthLex { .. } | OrderSpec::Lyndon { .. } => Expected::Exact(v),
        _ => Expected::AtLeast(v),
    };
    Ok(pair_instance(
        Family::ThetaLower,
        vec![("theta", theta)],
        o,
        xs[0],
        b,
        expected,
        Some(theta),
    ))
}

/// `a = X0`, `b = ad_{X1}^n ad_{X0}^2(X1)` in the length-compatible order.
pub fn fam_length_sharp(n: usize) -> Result<FamilyInstance> {
    let o = HallOrder::standalone(OrderSpec::LengthLex { k: 2 })?;
    let m = o.magma().clone();
    let (x0, x1) = (m.letter(0)?, m.letter(1)?);
    let b = m.ad_power(x1, m.ad_power(x0, x1, 2, Side::Left)?, n, Side::Left)?;
    Ok(pair_instance(
        Family::LengthSharp,
        vec![("n", n)],
        o,
        x0,
        b,
        Expected::Exact(pow2(n)),
        None,
    ))
}

/// `a = ad_{X0}^2(X1)`, `b = underline-ad_{X1}^n(X0)` in the Lyndon order.
pub fn fam_lyndon_sharp(n: usize) -> Result<FamilyInstance> {
    require(n >= 1, || "lyndon-sharp needs n >= 1".into())?;
    let o = HallOrder::standalone(OrderSpec::Lyndon { k: 2 })?;
    let m = o.magma().clone();
    let (x0, x1) = (m.letter(0)?, m.letter(1)?);
    let a = m.ad_power(x0, x1, 2, Side::Left)?;
    let b = m.ad_power(x1, x0, n, Side::Right)?;
    Ok(pair_instance(
        Family::LyndonSharp,
        vec![("n", n)],
        o,
        a,
        b,
        Expected::Exact(pow2(n - 1)),
        None,
    ))
}

/// `a = (X0,X1)`, `h = ad_a^m(X1)`, `b = ad_h^p(X1)` in the Fibonacci-minimal order.
pub fn fam_fibo_sature(p: usize, m_: usize) -> Result<FamilyInstance> {
    require(p >= 1 && m_ >= 2, || {
        "fibo-sature needs p >= 1 and m >= 2".into()
    })?;
    let o = HallOrder::standalone(OrderSpec::FiboMin)?;
    let m = o.magma().clone();
    let x1 = m.letter(1)?;
    let a = m.parse("[X0,X1]")?;
    let h = m.ad_power(a, x1, m_, Side::Left)?;
    let b = m.ad_power(h, x1, p, Side::Left)?;
    Ok(pair_instance(
        Family::FiboSature,
        vec![("p", p), ("m", m_)],
        o,
        a,
        b,
        Expected::Exact(a_theta(p + 1)),
        Some(p + 1),
    ))
}

/// `A_i = ad_{X0}^i(X1)`.
fn block(m: &Magma, i: usize) -> Result<TreeId> {
    m.ad_power(m.letter(0)?, m.letter(1)?, i, Side::Left)
}

/// `B^ν_2 = underline-ad_{X1}^ν(A_2)`, `B^ν_{k+1} = (B^ν_k, A_{k+1})`; returns `B^ν_2 .. B^ν_p`.
fn super_geom_chain(m: &Magma, p: usize, nu: usize) -> Result<Vec<TreeId>> {
    let mut chain = vec![m.ad_power(m.letter(1)?, block(m, 2)?, nu, Side::Right)?];
    for k in 3..=p {
        let prev = *chain.last().expect("non-empty");
        chain.push(m.node(prev, block(m, k)?)?);
    }
    Ok(chain)
}

/// `a = A_1`, `b = B^ν_p` in the super-geometric order: norm `p^ν + p - 2`.
pub fn fam_super_geom(p: usize, nu: usize) -> Result<FamilyInstance> {
    require(p >= 2, || "supergeom needs p >= 2".into())?;
    let o = HallOrder::standalone(OrderSpec::SuperGeom)?;
    let m = o.magma().clone();
    let a = block(&m, 1)?;
    let b = *super_geom_chain(&m, p, nu)?.last().expect("non-empty");
    let v = BigUint::from(p).pow(nu as u32) + p - 2u32;
    Ok(pair_instance(
        Family::SuperGeom,
        vec![("p", p), ("nu", nu)],
        o,
        a,
        b,
        Expected::Exact(v),
        None,
    ))
}

/// `|B^ν_p|`.
pub fn super_geom_length(p: usize, nu: usize) -> usize {
    nu + (p + 1) * (p + 2) / 2 - 3
}

/// The super-geometric family at `|b| = n`, with `p = ⌊√(n / ln n)⌋`.
pub fn fam_super_geom_at_length(n: usize) -> Result<FamilyInstance> {
    require(n >= 3, || "supergeom at length needs n >= 3".into())?;
    let nf = n as f64;
    let p = (nf / nf.ln()).sqrt().floor() as usize;
    require(p >= 2 && super_geom_length(p, 0) <= n, || {
        format!("no super-geometric bracket of length {n}")
    })?;
    fam_super_geom(p, n - super_geom_length(p, 0))
}

/// `a = X0`, `b = (...((X1,Xn),X(n-1))...,X2)` in the sharp order: norm `⌊e(n-1)!⌋`.
pub fn fam_sharp_en1(n: usize) -> Result<FamilyInstance> {
    let o = HallOrder::standalone(OrderSpec::SharpEn1 { n })?;
    let m = o.magma().clone();
    let mut b = m.letter(1)?;
    for j in (2..=n).rev() {
        b = m.node(b, m.letter(j)?)?;
    }
    let x0 = m.letter(0)?;
    Ok(pair_instance(
        Family::SharpEn1,
        vec![("n", n)],
        o,
        x0,
        b,
        Expected::Exact(bound_general_theta(n)),
        Some(n),
    ))
}

/// `[...[Xn, X(n-1)], ..., X1]` in the max-leaf order over `X1 .. Xn`: norm `(n-1)!`.
pub fn fam_alphabetic_factorial(n: usize) -> Result<FamilyInstance> {
    require((2..=6).contains(&n), || {
        format!("alphabetic-factorial needs 2 <= n <= 6, got {n}")
    })?;
    let m = Arc::new(Magma::new(n + 1)?);
    let o = Arc::new(HallOrder::alphabetic_factorial(m.clone()));
    let letters: Vec<TreeId> = (1..=n).rev().map(|i| m.letter(i)).collect::<Result<_>>()?;
    let t = m.left_comb(&letters)?;
    Ok(FamilyInstance {
        family: Family::AlphabeticFactorial,
        params: vec![("n", n)],
        order: o,
        target: Target::Tree(t),
        expected: Expected::Exact(factorial(n - 1)),
        expected_theta: None,
        required_max_len: n,
    })
}

impl FamilyInstance {
    pub fn magma(&self) -> &Arc<Magma> {
        self.order.magma()
    }

    pub fn describe(&self) -> String {
        let m = self.magma();
        let params: Vec<String> = self
            .params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        let target = match self.target {
            Target::Pair { a, b } => format!("[{}, {}]", m.format(a), m.format(b)),
            Target::Tree(t) => m.format(t),
        };
        format!(
            "{} {} ({}) {}",
            self.family,
            params.join(" "),
            self.order.name(),
            target
        )
    }

    /// Decomposes the target, compares with the expected norm and certifies with the oracle.
    pub fn run(&self) -> Result<FamilyOutcome> {
        let hs = Arc::new(HallSet::on_demand(
            self.order.clone(),
            self.required_max_len,
        )?);
        let dec = Decomposer::new(hs);
        let oracle = PairOracle::new(self.magma().clone(), EXACT_ORACLE_DEGREE);
        let mut notes = Vec::new();
        let (norm, theta, oracle_ok) = match self.target {
            Target::Pair { a, b } => {
                if self.order.compare(a, b)? != Ordering::Less {
                    let m = self.magma();
                    return Err(HallError::NotOrdered {
                        left: m.format(a),
                        right: m.format(b),
                    });
                }
                let s = dec.decompose(a, b)?;
                let theta = dec.theta(a, b)?;
                (
                    s.norm(),
                    Some(theta),
                    oracle.check(a, b, &s, self.required_max_len),
                )
            }
            Target::Tree(t) => {
                let s = dec.expand_tree(t)?;
                (
                    s.norm(),
                    None,
                    oracle.check_tree(t, &s, self.required_max_len),
                )
            }
        };
        let norm_ok = self.expected.accepts(&norm);
        let theta_ok = match (self.expected_theta, theta) {
            (Some(e), Some(t)) => e == t,
            _ => true,
        };
        let extra_ok = match self.family {
            Family::SharpEn1 => self.check_sharp_axioms(&dec, &mut notes)?,
            Family::SuperGeom => self.check_super_geom_chain(&dec, &mut notes)?,
            Family::AlphabeticFactorial => self.check_factorial_bound(&dec, &mut notes)?,
            _ => true,
        };
        Ok(FamilyOutcome {
            norm,
            theta,
            norm_ok,
            theta_ok,
            oracle_ok,
            extra_ok,
            notes,
        })
    }

    fn param(&self, name: &str) -> usize {
        self.params
            .iter()
            .find(|(k, _)| *k == name)
            .map(|(_, v)| *v)
            .expect("known parameter")
    }

    /// The four conditions on the sharp order, on trees of bounded length, and membership of `b`.
    fn check_sharp_axioms(&self, dec: &Decomposer, notes: &mut Vec<String>) -> Result<bool> {
        let n = self.param("n");
        let o = &*self.order;
        let m = o.magma().clone();
        let lt = |x: TreeId, y: TreeId| o.cmp_in_domain(x, y) == Ordering::Less;
        let mut ok = true;
        let mut fail = |what: String| {
            notes.push(what);
            false
        };

        let letters = m.letters();
        if !letters.windows(2).all(|w| lt(w[0], w[1])) {
            ok &= fail("letters are not increasing".into());
        }
        let mut comb = m.letter(1)?;
        for j in (2..=n).rev() {
            // comb is (...(X1,Xn)...,X(j+1)) here
            if j < n && !lt(comb, m.letter(j)?) {
                ok &= fail(format!("{} is not below X{j}", m.format(comb)));
            }
            comb = m.node(comb, m.letter(j)?)?;
            if !dec.hall_set().contains(comb)? {
                ok &= fail(format!("{} is not a member", m.format(comb)));
            }
        }

        let a_pis = a_pi_trees(&m, n)?;
        let x1 = m.letter(1)?;
        for &t in &a_pis {
            if !lt(t, x1) {
                ok &= fail(format!("{} is not below X1", m.format(t)));
            }
        }

        let max_len = (n + 2).min(6);
        let bar: Vec<TreeId> = (2..=n).map(|i| m.letter(i)).collect::<Result<_>>()?;
        let bar_trees = trees_over(&m, &bar, &[], max_len)?;
        // OO3: the classes by largest leaf are consecutive intervals
        for top in 2..n {
            let lower = bar_trees.iter().filter(|&&t| m.max_leaf(t) == top);
            let upper: Vec<TreeId> = bar_trees
                .iter()
                .copied()
                .filter(|&t| m.max_leaf(t) == top + 1)
                .collect();
            let hi = lower.copied().reduce(|x, y| if lt(x, y) { y } else { x });
            let lo = upper
                .iter()
                .copied()
                .reduce(|x, y| if lt(x, y) { x } else { y });
            if let (Some(hi), Some(lo)) = (hi, lo) {
                if !lt(hi, lo) {
                    ok &= fail(format!("{} is not below {}", m.format(hi), m.format(lo)));
                }
            }
        }
        // OO4: all of Br(X̄) below all of Br_Π
        let ys: Vec<TreeId> = a_pis
            .iter()
            .map(|&t| m.node(t, x1))
            .collect::<Result<_>>()?;
        let pi_trees = trees_over(&m, &bar, &ys, max_len)?;
        let hi = bar_trees
            .iter()
            .copied()
            .reduce(|x, y| if lt(x, y) { y } else { x });
        let lo = pi_trees
            .iter()
            .copied()
            .reduce(|x, y| if lt(x, y) { x } else { y });
        if let (Some(hi), Some(lo)) = (hi, lo) {
            if !lt(hi, lo) {
                ok &= fail(format!("{} is not below {}", m.format(hi), m.format(lo)));
            }
        }
        Ok(ok)
    }

    /// Membership of every `B^ν_k` and `s(B^ν_k) = 3·2^(k-2) - 1`.
    fn check_super_geom_chain(&self, dec: &Decomposer, notes: &mut Vec<String>) -> Result<bool> {
        let (p, nu) = (self.param("p"), self.param("nu"));
        let m = self.magma();
        let mut ok = true;
        for (i, &t) in super_geom_chain(m, p, nu)?.iter().enumerate() {
            let k = i + 2;
            let member = dec.hall_set().contains(t)?;
            let score = self.order.score(t);
            let want = 3 * (1u64 << (k - 2)) - 1;
            if !member || score != Some(want) {
                notes.push(format!(
                    "B^{nu}_{k}: member={member} score={score:?}, expected {want}"
                ));
                ok = false;
            }
        }
        Ok(ok)
    }

    /// Every bracketing of every arrangement of the letters has norm at most `(n-1)!`.
    fn check_factorial_bound(&self, dec: &Decomposer, notes: &mut Vec<String>) -> Result<bool> {
        let n = self.param("n");
        if n > 4 {
            return Ok(true);
        }
        let m = self.magma();
        let bound = factorial(n - 1);
        let letters: Vec<TreeId> = (1..=n).map(|i| m.letter(i)).collect::<Result<_>>()?;
        let mut ok = true;
        for perm in permutations(&letters) {
            for t in bracketings(m, &perm)? {
                let norm = dec.expand_tree(t)?.norm();
                if norm > bound {
                    notes.push(format!("{} has norm {norm} > {bound}", m.format(t)));
                    ok = false;
                }
            }
        }
        Ok(ok)
    }
}

/// All `a_π = (...((X0, X_{π1}), X_{π2}) ..., X_{πp})` with `2 <= π1 < ... < πp <= n`.
fn a_pi_trees(m: &Magma, n: usize) -> Result<Vec<TreeId>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << (n - 1)) {
        let mut t = m.letter(0)?;
        for j in 2..=n {
            if mask & (1 << (j - 2)) != 0 {
                t = m.node(t, m.letter(j)?)?;
            }
        }
        out.push(t);
    }
    Ok(out)
}

/// Trees of length at most `max_len` over `plain`, or, when `special` is non-empty,
/// trees containing exactly one element of `special` and otherwise only `plain` atoms.
fn trees_over(
    m: &Magma,
    plain: &[TreeId],
    special: &[TreeId],
    max_len: usize,
) -> Result<Vec<TreeId>> {
    let mut free: Vec<Vec<TreeId>> = vec![Vec::new(); max_len + 1];
    for &x in plain {
        if m.len(x) <= max_len {
            free[m.len(x)].push(x);
        }
    }
    for len in 2..=max_len {
        for l in 1..len {
            let (lefts, rights) = (free[l].clone(), free[len - l].clone());
            for &x in &lefts {
                for &y in &rights {
                    free[len].push(m.node(x, y)?);
                }
            }
        }
    }
    if special.is_empty() {
        return Ok(free.into_iter().flatten().collect());
    }
    let mut one: Vec<Vec<TreeId>> = vec![Vec::new(); max_len + 1];
    for &s in special {
        if m.len(s) <= max_len {
            one[m.len(s)].push(s);
        }
    }
    for len in 2..=max_len {
        for l in 1..len {
            let mut fresh = Vec::new();
            for &x in &one[l] {
                for &y in &free[len - l] {
                    fresh.push(m.node(x, y)?);
                }
            }
            for &x in &free[l] {
                for &y in &one[len - l] {
                    fresh.push(m.node(x, y)?);
                }
            }
            one[len].extend(fresh);
        }
    }
    Ok(one.into_iter().flatten().collect())
}

fn permutations(items: &[TreeId]) -> Vec<Vec<TreeId>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head);
            out.push(p);
        }
    }
    out
}

/// Every binary bracketing of the sequence, keeping its left-to-right order.
fn bracketings(m: &Magma, items: &[TreeId]) -> Result<Vec<TreeId>> {
    if items.len() == 1 {
        return Ok(vec![items[0]]);
    }
    let mut out = Vec::new();
    for split in 1..items.len() {
        for l in bracketings(m, &items[..split])? {
            for r in bracketings(m, &items[split..])? {
                out.push(m.node(l, r)?);
            }
        }
    }
    Ok(out)
}

/// The parameter grid used by the acceptance criteria, as `(family, order, params)`.
pub fn acceptance_grid() -> Vec<(Family, Option<OrderSpec>, Vec<usize>)> {
    let mut grid = Vec::new();
    for n in 0..=6 {
        grid.push((Family::X3, Some(OrderSpec::LengthLex { k: 3 }), vec![n]));
    }
    for spec in [OrderSpec::FiboMin, OrderSpec::Lyndon { k: 2 }] {
        for n in 1..=10 {
            grid.push((Family::TwoLetter, Some(spec), vec![n]));
        }
    }
    for n in 0..=6 {
        grid.push((Family::LengthSharp, None, vec![n]));
    }
    for n in 1..=6 {
        grid.push((Family::LyndonSharp, None, vec![n]));
    }
    for p in 1..=5 {
        grid.push((Family::FiboSature, None, vec![p, 2]));
    }
    for p in 2..=4 {
        for nu in 0..=4 {
            grid.push((Family::SuperGeom, None, vec![p, nu]));
        }
    }
    for n in 2..=5 {
        grid.push((Family::SharpEn1, None, vec![n]));
    }
    for n in 2..=5 {
        grid.push((Family::AlphabeticFactorial, None, vec![n]));
    }
    for spec in [
        OrderSpec::LengthLex { k: 2 },
        OrderSpec::Lyndon { k: 2 },
        OrderSpec::FiboMin,
        OrderSpec::SuperGeom,
    ] {
        for theta in 1..=5 {
            grid.push((Family::ThetaLower, Some(spec), vec![theta]));
        }
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(inst: FamilyInstance) -> FamilyOutcome {
        let out = inst.run().unwrap();
        assert!(out.passed(), "{}: {:?}", inst.describe(), out);
        out
    }

    #[test]
    fn documented_values() {
        assert_eq!(
            run(fam_x3(OrderSpec::LengthLex { k: 3 }, 4).unwrap()).norm,
            BigUint::from(16u32)
        );
        assert_eq!(
            run(fam_x3(OrderSpec::Lyndon { k: 3 }, 3).unwrap()).norm,
            BigUint::from(8u32)
        );
        assert_eq!(
            run(fam_two_letter_bn(OrderSpec::FiboMin, 6).unwrap()).norm,
            BigUint::from(8u32)
        );
        assert_eq!(
            run(fam_two_letter_bn(OrderSpec::Lyndon { k: 2 }, 5).unwrap()).norm,
            BigUint::from(5u32)
        );
        assert_eq!(run(fam_length_sharp(3).unwrap()).norm, BigUint::from(8u32));
        assert_eq!(run(fam_lyndon_sharp(4).unwrap()).norm, BigUint::from(8u32));
        assert_eq!(
            run(fam_fibo_sature(2, 2).unwrap()).norm,
            BigUint::from(4u32)
        );
        assert_eq!(
            run(fam_super_geom(3, 2).unwrap()).norm,
            BigUint::from(10u32)
        );
        assert_eq!(run(fam_sharp_en1(3).unwrap()).norm, BigUint::from(5u32));
        assert_eq!(
            run(fam_alphabetic_factorial(3).unwrap()).norm,
            BigUint::from(2u32)
        );
    }

    #[test]
    fn length_lex_two_letter_stays_below_power_of_two() {
        for n in 2..=8 {
            let out = run(fam_two_letter_bn(OrderSpec::LengthLex { k: 2 }, n).unwrap());
            assert!(out.norm <= pow2(n - 2));
        }
    }

    #[test]
    fn theta_lower_is_tight_for_length_lex() {
        let out = run(fam_theta_lower(OrderSpec::LengthLex { k: 2 }, 4).unwrap());
        assert_eq!(out.norm, BigUint::from(8u32));
        assert_eq!(out.theta, Some(4));
    }

    #[test]
    fn super_geom_lengths() {
        assert_eq!(super_geom_length(2, 0), 3);
        assert_eq!(super_geom_length(4, 4), 16);
        let inst = fam_super_geom_at_length(12).unwrap();
        let Target::Pair { b, .. } = inst.target else {
            panic!()
        };
        assert_eq!(inst.magma().len(b), 12);
    }

    #[test]
    fn parameter_errors() {
        assert!(fam_x3(OrderSpec::LengthLex { k: 2 }, 2).is_err());
        assert!(fam_super_geom(1, 0).is_err());
        assert!(fam_alphabetic_factorial(7).is_err());
        assert!(build(Family::FiboSature, None, &[2]).is_err());
        assert_eq!(Family::parse("sharp-en1").unwrap(), Family::SharpEn1);
    }
}
