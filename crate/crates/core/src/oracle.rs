//! Ground truth in the free associative algebra.
//!
//! Trees evaluate to noncommutative polynomials through `[x, y] = xy - yx`.
//! Decompositions are checked coefficient by coefficient, and bases are
//! certified by exact rank computations. For degrees where the polynomial
//! expansion is too large, [`MatrixOracle`] evaluates on random matrices
//! modulo a prime instead.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::decomp::{Decomposer, LieSeries};
use crate::error::Result;
use crate::magma::{Magma, TreeId};

/// An element of the free associative algebra: word (letter indices) to integer coefficient.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NCPoly {
    terms: BTreeMap<Vec<u8>, BigInt>,
}

impl NCPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn letter(i: u8) -> Self {
        Self::word(vec![i])
    }

    pub fn word(w: Vec<u8>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, BigInt::one());
        NCPoly { terms }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u8>, BigInt> {
        &self.terms
    }

    pub fn coefficient(&self, w: &[u8]) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(n)` when every word has length `n`; `None` for mixed degrees or zero.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Vec::len);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// The component of degree `n`.
    pub fn component(&self, n: usize) -> NCPoly {
        NCPoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == n)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, other: &NCPoly, scale: &BigInt) {
        if scale.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            let e = self.terms.entry(w.clone()).or_default();
            *e += c * scale;
            if e.is_zero() {
                self.terms.remove(w);
            }
        }
    }

    pub fn scaled(&self, scale: &BigInt) -> NCPoly {
        let mut out = NCPoly::zero();
        out.add_scaled(self, scale);
        out
    }

    /// `xy - yx`.
    pub fn commutator(x: &NCPoly, y: &NCPoly) -> NCPoly {
        x * y - y * x
    }
}

impl Add for &NCPoly {
    type Output = NCPoly;
    fn add(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &BigInt::one());
        out
    }
}

impl Sub for &NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: &NCPoly) -> NCPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-BigInt::one());
        out
    }
}

impl Sub for NCPoly {
    type Output = NCPoly;
    fn sub(self, rhs: NCPoly) -> NCPoly {
        &self - &rhs
    }
}

impl Neg for &NCPoly {
    type Output = NCPoly;
    fn neg(self) -> NCPoly {
        self.scaled(&-BigInt::one())
    }
}

impl Mul for &NCPoly {
    type Output = NCPoly;
    fn mul(self, rhs: &NCPoly) -> NCPoly {
        let mut terms: BTreeMap<Vec<u8>, BigInt> = BTreeMap::new();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                let mut w = Vec::with_capacity(u.len() + v.len());
                w.extend_from_slice(u);
                w.extend_from_slice(v);
                *terms.entry(w).or_default() += a * b;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        NCPoly { terms }
    }
}

/// Memoized evaluation of trees into the free associative algebra.
#[derive(Debug)]
pub struct Evaluator {
    magma: Arc<Magma>,
    cache: DashMap<TreeId, Arc<NCPoly>>,
}

impl Evaluator {
    pub fn new(magma: Arc<Magma>) -> Self {
        Evaluator {
            magma,
            cache: DashMap::new(),
        }
    }

    pub fn eval_tree(&self, t: TreeId) -> Arc<NCPoly> {
        if let Some(p) = self.cache.get(&t).map(|p| p.clone()) {
            return p;
        }
        let p = match self.magma.children(t) {
            None => NCPoly::letter(self.magma.letter_of(t).expect("leaf") as u8),
            Some((l, r)) => NCPoly::commutator(&self.eval_tree(l), &self.eval_tree(r)),
        };
        let p = Arc::new(p);
        self.cache.insert(t, p.clone());
        p
    }

    pub fn eval_series(&self, s: &LieSeries) -> NCPoly {
        let mut out = NCPoly::zero();
        for (t, c) in s.terms() {
            out.add_scaled(&self.eval_tree(*t), c);
        }
        out
    }

    /// Whether `e((a, b))` equals the evaluation of `s`.
    pub fn check_series(&self, a: TreeId, b: TreeId, s: &LieSeries) -> bool {
        let lhs = NCPoly::commutator(&self.eval_tree(a), &self.eval_tree(b));
        lhs == self.eval_series(s)
    }
}

/// Decomposes `[a, b]` and compares both sides in the free associative algebra.
pub fn verify_decomposition(
    dec: &Decomposer,
    ev: &Evaluator,
    a: TreeId,
    b: TreeId,
) -> Result<bool> {
    let s = dec.decompose(a, b)?;
    Ok(ev.check_series(a, b, &s))
}

/// Rank over the rationals of the coefficient vectors of `polys`.
///
/// Sparse fraction-free elimination: each new row is reduced against the
/// pivots by integer cross-multiplication and divided by its content, so the
/// arithmetic stays in the integers.
pub fn independence_rank(polys: &[NCPoly]) -> usize {
    let mut pivots: BTreeMap<Vec<u8>, BTreeMap<Vec<u8>, BigInt>> = BTreeMap::new();
    for p in polys {
        let mut row = p.terms.clone();
        while let Some((lead, c)) = row.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
            match pivots.get(&lead) {
                None => {
                    normalize(&mut row);
                    pivots.insert(lead, row);
                    break;
                }
                Some(piv) => {
                    let pc = &piv[&lead];
                    let g = pc.gcd(&c);
                    let (fr, fp) = (pc / &g, &c / &g);
                    for v in row.values_mut() {
                        *v *= &fr;
                    }
                    for (w, v) in piv {
                        let e = row.entry(w.clone()).or_default();
                        *e -= v * &fp;
                    }
                    row.retain(|_, v| !v.is_zero());
                    normalize(&mut row);
                }
            }
        }
    }
    pivots.len()
}

fn normalize(row: &mut BTreeMap<Vec<u8>, BigInt>) {
    let g = row.values().fold(BigInt::zero(), |g, v| g.gcd(v));
    if g > BigInt::one() {
        for v in row.values_mut() {
            *v /= &g;
        }
    }
}

const MODULUS: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn to_residue(c: &BigInt) -> u64 {
    let r = c.mod_floor(&BigInt::from(MODULUS));
    u64::try_from(r).expect("reduced residue fits in u64")
}

/// Square matrix over `Z / (2^61 - 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    dim: usize,
    data: Vec<u64>,
}

impl ModMatrix {
    fn zero(dim: usize) -> Self {
        ModMatrix {
            dim,
            data: vec![0; dim * dim],
        }
    }

    fn mul(&self, rhs: &ModMatrix) -> ModMatrix {
        let n = self.dim;
        let mut out = ModMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = &mut out.data[i * n + j];
                    *v = (*v + mulmod(a, rhs.data[k * n + j])) % MODULUS;
                }
            }
        }
        out
    }

    fn commutator(x: &ModMatrix, y: &ModMatrix) -> ModMatrix {
        let xy = x.mul(y);
        let yx = y.mul(x);
        let data = xy
            .data
            .iter()
            .zip(&yx.data)
            .map(|(a, b)| (a + MODULUS - b) % MODULUS)
            .collect();
        ModMatrix { dim: x.dim, data }
    }

    fn add_scaled(&mut self, other: &ModMatrix, c: u64) {
        for (v, o) in self.data.iter_mut().zip(&other.data) {
            *v = (*v + mulmod(*o, c)) % MODULUS;
        }
    }
}

/// Evaluation of trees on seeded random matrices modulo `2^61 - 1`.
///
/// A Lie identity that fails in the free Lie algebra fails on random matrices
/// with overwhelming probability; agreement is a probabilistic certificate.
#[derive(Debug)]
pub struct MatrixOracle {
    magma: Arc<Magma>,
    letters: Vec<ModMatrix>,
    cache: DashMap<TreeId, Arc<ModMatrix>>,
}

impl MatrixOracle {
    pub fn new(magma: Arc<Magma>, dim: usize, seed: u64) -> Self {
        let mut rng = StdRng::seed_from_u64(seed);
        let letters = (0..magma.alphabet_size())
            .map(|_| ModMatrix {
                dim,
                data: (0..dim * dim).map(|_| rng.gen_range(0..MODULUS)).collect(),
            })
            .collect();
        MatrixOracle {
            magma,
            letters,
            cache: DashMap::new(),
        }
    }

    pub fn eval_tree(&self, t: TreeId) -> Arc<ModMatrix> {
        if let Some(p) = self.cache.get(&t).map(|p| p.clone()) {
            return p;
        }
        let p = match self.magma.children(t) {
            None => self.letters[self.magma.letter_of(t).expect("leaf")].clone(),
            Some((l, r)) => ModMatrix::commutator(&self.eval_tree(l), &self.eval_tree(r)),
        };
        let p = Arc::new(p);
        self.cache.insert(t, p.clone());
        p
    }

    pub fn eval_series(&self, s: &LieSeries) -> ModMatrix {
        let mut out = ModMatrix::zero(self.letters[0].dim);
        for (t, c) in s.terms() {
            out.add_scaled(&self.eval_tree(*t), to_residue(c));
        }
        out
    }

    pub fn check_series(&self, a: TreeId, b: TreeId, s: &LieSeries) -> bool {
        let lhs = ModMatrix::commutator(&self.eval_tree(a), &self.eval_tree(b));
        lhs == self.eval_series(s)
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Checks the inversion of the Leibniz rule for `D = [X0, .]` acting on `X1 .. Xk`,
/// with both the associative product and the commutator as the algebra product.
pub fn leibniz_inversion_check(nu: usize, k: usize) -> bool {
    assert!(k >= 2, "need at least two operands");
    let z = NCPoly::letter(0);
    let d_pow =
        |p: &NCPoly, j: usize| (0..j).fold(p.clone(), |acc, _| NCPoly::commutator(&z, &acc));
    let ops: Vec<NCPoly> = (1..=k as u8).map(NCPoly::letter).collect();

    let products: [fn(&NCPoly, &NCPoly) -> NCPoly; 2] = [|x, y| x * y, NCPoly::commutator];
    products.iter().all(|prod| {
        // right-nested product b1 (b2 (... (b_{k-1} last)))
        let nest =
            |items: &[NCPoly], last: NCPoly| items.iter().rev().fold(last, |acc, x| prod(x, &acc));
        let lhs = nest(&ops[..k - 1], d_pow(&ops[k - 1], nu));
        let mut rhs = NCPoly::zero();
        for js in compositions(nu, k) {
            let jk = js[k - 1];
            let inner: Vec<NCPoly> = ops[..k - 1]
                .iter()
                .zip(&js)
                .map(|(b, &j)| d_pow(b, j))
                .collect();
            let term = d_pow(&nest(&inner, ops[k - 1].clone()), jk);
            let multinomial = js.iter().fold(factorial(nu), |acc, &j| acc / factorial(j));
            let sign = if (nu - jk).is_multiple_of(2) { 1 } else { -1 };
            rhs.add_scaled(&term, &(multinomial * sign));
        }
        lhs == rhs
    })
}

/// `Σ multinomial(ν; j_1..j_k) = k^ν`, the count behind the k-ary inversion.
pub fn multinomial_sum_check(nu: usize, k: usize) -> bool {
    let total: BigInt = compositions(nu, k)
        .iter()
        .map(|js| js.iter().fold(factorial(nu), |acc, &j| acc / factorial(j)))
        .sum();
    total == BigInt::from(k).pow(nu as u32)
}

/// Oracle for many pairs at once: exact polynomials up to `exact_degree`, matrices above.
#[derive(Debug)]
pub struct PairOracle {
    exact: Evaluator,
    matrix: MatrixOracle,
    exact_degree: usize,
}

impl PairOracle {
    pub fn new(magma: Arc<Magma>, exact_degree: usize) -> Self {
        PairOracle {
            exact: Evaluator::new(magma.clone()),
            matrix: MatrixOracle::new(magma, 16, 0x5eed),
            exact_degree,
        }
    }

    pub fn check(&self, a: TreeId, b: TreeId, s: &LieSeries, degree: usize) -> bool {
        if degree <= self.exact_degree {
            self.exact.check_series(a, b, s)
        } else {
            self.matrix.check_series(a, b, s)
        }
    }

    /// Equality of a series with the evaluation of an arbitrary tree.
    pub fn check_tree(&self, t: TreeId, s: &LieSeries, degree: usize) -> bool {
        if degree <= self.exact_degree {
            *self.exact.eval_tree(t) == self.exact.eval_series(s)
        } else {
            *self.matrix.eval_tree(t) == self.matrix.eval_series(s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hall::HallSet;
    use crate::order::{HallOrder, OrderSpec};

    #[test]
    fn eval_examples() {
        let m = Arc::new(Magma::new(2).unwrap());
        let ev = Evaluator::new(m.clone());
        let p = ev.eval_tree(m.parse("[X0,X1]").unwrap());
        assert_eq!(p.coefficient(&[0, 1]), BigInt::one());
        assert_eq!(p.coefficient(&[1, 0]), -BigInt::one());
        assert_eq!(p.len(), 2);
        assert!(ev.eval_tree(m.parse("[X0,X0]").unwrap()).is_zero());
        let l = ev.eval_tree(m.parse("[X0,[X1,[X0,X1]]]").unwrap());
        let r = ev.eval_tree(m.parse("[X1,[X0,[X0,X1]]]").unwrap());
        assert_eq!(l, r);
        assert_eq!(l.homogeneous_degree(), Some(4));
    }

    #[test]
    fn rank_examples() {
        let m = Arc::new(Magma::new(2).unwrap());
        let ev = Evaluator::new(m.clone());
        let x = (*ev.eval_tree(m.parse("[X0,X1]").unwrap())).clone();
        assert_eq!(independence_rank(&[x.clone(), x.clone()]), 1);
        assert_eq!(
            independence_rank(&[(*ev.eval_tree(m.parse("[X0,X0]").unwrap())).clone()]),
            0
        );
        let y = (*ev.eval_tree(m.parse("[X1,X0]").unwrap())).clone();
        assert_eq!(independence_rank(&[x, y]), 1);
    }

    #[test]
    fn rank_of_basis_matches_witt() {
        let o = HallOrder::standalone(OrderSpec::LengthLex { k: 2 }).unwrap();
        let hs = HallSet::generate(o, 7).unwrap();
        let ev = Evaluator::new(hs.magma().clone());
        for n in 1..=7 {
            let polys: Vec<NCPoly> = hs
                .elements_of_length(n)
                .unwrap()
                .iter()
                .map(|&t| (*ev.eval_tree(t)).clone())
                .collect();
            assert_eq!(independence_rank(&polys), polys.len());
        }
    }

    #[test]
    fn corrupted_series_is_rejected() {
        let o = HallOrder::standalone(OrderSpec::FiboMin).unwrap();
        let dec = Decomposer::new(Arc::new(HallSet::on_demand(o, 8).unwrap()));
        let m = dec.magma().clone();
        let ev = Evaluator::new(m.clone());
        let mo = MatrixOracle::new(m.clone(), 8, 1);
        let a = m.letter(0).unwrap();
        let b = m.parse("[[[[X0,X1],X1],X1],X1]").unwrap();
        let s = dec.decompose(a, b).unwrap();
        assert!(ev.check_series(a, b, &s));
        assert!(mo.check_series(a, b, &s));
        let bad = s.perturbed(0, 1);
        assert!(!ev.check_series(a, b, &bad));
        assert!(!mo.check_series(a, b, &bad));
        assert!(verify_decomposition(&dec, &ev, a, a).unwrap());
    }

    #[test]
    fn leibniz_instances() {
        for nu in 0..=3 {
            for k in 2..=3 {
                assert!(leibniz_inversion_check(nu, k), "nu={nu} k={k}");
                assert!(multinomial_sum_check(nu, k));
            }
        }
    }
}
