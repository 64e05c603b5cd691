//! Relative foldings and the recursive decomposition of `[a, b]` on a Hall basis.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{HallError, Result};
use crate::hall::HallSet;
use crate::magma::{Magma, TreeId};
use crate::order::HallOrder;

/// A finite integer combination of Hall-set elements, kept in ascending basis order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LieSeries {
    terms: Vec<(TreeId, BigInt)>,
}

impl LieSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(t: TreeId) -> Self {
        LieSeries {
            terms: vec![(t, BigInt::one())],
        }
    }

    /// Builds a series from arbitrary coefficients, dropping zeros and sorting by `order`.
    pub fn from_map(map: HashMap<TreeId, BigInt>, order: &HallOrder) -> Self {
        let mut terms: Vec<(TreeId, BigInt)> =
            map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|x, y| order.cmp_in_domain(x.0, y.0));
        LieSeries { terms }
    }

    pub fn terms(&self) -> &[(TreeId, BigInt)] {
        &self.terms
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

    /// ℓ¹ norm: the sum of absolute values of the coefficients.
    pub fn norm(&self) -> BigUint {
        self.terms.iter().map(|(_, c)| c.magnitude().clone()).sum()
    }

    pub fn support(&self) -> Vec<TreeId> {
        self.terms.iter().map(|(t, _)| *t).collect()
    }

    pub fn coefficient(&self, t: TreeId) -> BigInt {
        self.terms
            .iter()
            .find(|(s, _)| *s == t)
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }

    pub fn negated(&self) -> Self {
        LieSeries {
            terms: self.terms.iter().map(|(t, c)| (*t, -c)).collect(),
        }
    }

    pub(crate) fn accumulate_into(&self, acc: &mut HashMap<TreeId, BigInt>, scale: &BigInt) {
        for (t, c) in &self.terms {
            *acc.entry(*t).or_default() += c * scale;
        }
    }

    /// Test helper: a copy with one coefficient shifted by `delta`.
    pub fn perturbed(&self, index: usize, delta: i64) -> Self {
        let mut out = self.clone();
        if let Some((_, c)) = out.terms.get_mut(index) {
            *c += delta;
        }
        out
    }
}

/// JSON form of a decomposition.
#[derive(Debug, Serialize)]
pub struct SeriesJson {
    pub a: String,
    pub b: String,
    pub order: String,
    pub theta: Option<usize>,
    pub terms: Vec<TermJson>,
    pub norm: String,
    #[serde(rename = "maxDepth")]
    pub max_depth: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct TermJson {
    pub elem: String,
    pub coeff: String,
}

/// Binary tree whose leaves are Hall-set elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FoldTree {
    Leaf(TreeId),
    Node(Box<FoldTree>, Box<FoldTree>),
}

impl FoldTree {
    fn collect_leaves(&self, out: &mut Vec<TreeId>) {
        match self {
            FoldTree::Leaf(t) => out.push(*t),
            FoldTree::Node(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    /// Collapses the shape with node construction.
    pub fn reassemble(&self, m: &Magma) -> Result<TreeId> {
        match self {
            FoldTree::Leaf(t) => Ok(*t),
            FoldTree::Node(l, r) => m.node(l.reassemble(m)?, r.reassemble(m)?),
        }
    }
}

/// The relative folding `T_a(b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Folding {
    pub shape: FoldTree,
    /// Leaves from left to right.
    pub leaves: Vec<TreeId>,
}

impl Folding {
    pub fn theta(&self) -> usize {
        self.leaves.len()
    }
}

/// Leaf statistics of a folding with respect to the two lowest letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FoldingCounts {
    pub theta: usize,
    /// Leaves equal to `X0`.
    pub rho: usize,
    /// Leaves equal to `X1`.
    pub nu: usize,
}

impl FoldingCounts {
    /// Leaves different from `X1`.
    pub fn non_x1(&self) -> usize {
        self.theta - self.nu
    }

    /// Leaves different from `X0`.
    pub fn non_x0(&self) -> usize {
        self.theta - self.rho
    }
}

/// Instrumentation of one top-level decomposition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecompStats {
    /// Largest number of simultaneously active calls of the recursive algorithm.
    pub max_call_depth: usize,
    pub cache_hits: u64,
    pub cache_misses: u64,
}

#[derive(Debug)]
struct Entry {
    series: Arc<LieSeries>,
    depth: usize,
}

/// Memoized decomposition engine attached to one Hall set.
///
/// The memo stores, with each series, the call depth the unmemoized recursion
/// would have reached, so depth statistics do not depend on cache state.
pub struct Decomposer {
    hs: Arc<HallSet>,
    memo: DashMap<(TreeId, TreeId), Arc<Entry>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl std::fmt::Debug for Decomposer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Decomposer")
            .field("hall_set", &self.hs)
            .field("cached", &self.memo.len())
            .finish()
    }
}

impl Decomposer {
    pub fn new(hs: Arc<HallSet>) -> Self {
        Decomposer {
            hs,
            memo: DashMap::new(),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        }
    }

    pub fn hall_set(&self) -> &Arc<HallSet> {
        &self.hs
    }

    pub fn order(&self) -> &Arc<HallOrder> {
        self.hs.order()
    }

    pub fn magma(&self) -> &Arc<Magma> {
        self.hs.magma()
    }

    fn require_member(&self, t: TreeId) -> Result<()> {
        if self.hs.contains(t)? {
            Ok(())
        } else {
            Err(HallError::NotMember(self.magma().format(t)))
        }
    }

    fn require_ordered(&self, a: TreeId, b: TreeId) -> Result<()> {
        if self.order().cmp_in_domain(a, b) == Ordering::Less {
            Ok(())
        } else {
            let m = self.magma();
            Err(HallError::NotOrdered {
                left: m.format(a),
                right: m.format(b),
            })
        }
    }

    /// `T_a(b)`: the leaf `b` when `(a, b)` is a member, otherwise `<T_a(λb), T_a(μb)>`.
    pub fn relative_folding(&self, a: TreeId, b: TreeId) -> Result<Folding> {
        self.require_member(a)?;
        self.require_member(b)?;
        self.require_ordered(a, b)?;
        let shape = self.fold(a, b);
        let mut leaves = Vec::new();
        shape.collect_leaves(&mut leaves);
        Ok(Folding { shape, leaves })
    }

    fn fold(&self, a: TreeId, b: TreeId) -> FoldTree {
        if self.hs.bracket_is_member(a, b) {
            return FoldTree::Leaf(b);
        }
        let (l, r) = self
            .magma()
            .children(b)
            .expect("(a, x) is a member for every letter x > a");
        FoldTree::Node(Box::new(self.fold(a, l)), Box::new(self.fold(a, r)))
    }

    pub fn theta(&self, a: TreeId, b: TreeId) -> Result<usize> {
        Ok(self.relative_folding(a, b)?.theta())
    }

    pub fn folding_counts(&self, a: TreeId, b: TreeId) -> Result<FoldingCounts> {
        let f = self.relative_folding(a, b)?;
        let m = self.magma();
        let count = |letter: usize| {
            f.leaves
                .iter()
                .filter(|&&t| m.letter_of(t) == Some(letter))
                .count()
        };
        Ok(FoldingCounts {
            theta: f.theta(),
            rho: count(0),
            nu: count(1),
        })
    }

    /// Decomposition of `[a, b]` for members `a`, `b` with `|a| + |b| <= max_len`.
    pub fn decompose(&self, a: TreeId, b: TreeId) -> Result<Arc<LieSeries>> {
        Ok(self.decompose_with_stats(a, b)?.0)
    }

    pub fn decompose_with_stats(
        &self,
        a: TreeId,
        b: TreeId,
    ) -> Result<(Arc<LieSeries>, DecompStats)> {
        let m = self.magma();
        m.validate(a)?;
        m.validate(b)?;
        let total = m.len(a) + m.len(b);
        if total > self.hs.max_len() {
            return Err(HallError::Capacity {
                length: total,
                max_len: self.hs.max_len(),
            });
        }
        self.require_member(a)?;
        self.require_member(b)?;
        let (h0, m0) = (
            self.hits.load(AtomicOrdering::Relaxed),
            self.misses.load(AtomicOrdering::Relaxed),
        );
        let (series, depth) = match self.order().cmp_in_domain(a, b) {
            Ordering::Equal => (Arc::new(LieSeries::zero()), 0),
            Ordering::Less => self.rec(a, b),
            Ordering::Greater => {
                let (s, d) = self.rec(b, a);
                (Arc::new(s.negated()), d)
            }
        };
        let stats = DecompStats {
            max_call_depth: depth,
            cache_hits: self.hits.load(AtomicOrdering::Relaxed) - h0,
            cache_misses: self.misses.load(AtomicOrdering::Relaxed) - m0,
        };
        Ok((series, stats))
    }

    /// The algorithm proper, for members `a < b`.
    fn rec(&self, a: TreeId, b: TreeId) -> (Arc<LieSeries>, usize) {
        if let Some(e) = self.memo.get(&(a, b)).map(|e| e.clone()) {
            self.hits.fetch_add(1, AtomicOrdering::Relaxed);
            return (e.series.clone(), e.depth);
        }
        self.misses.fetch_add(1, AtomicOrdering::Relaxed);
        let m = self.magma();
        let entry = if self.hs.bracket_is_member(a, b) {
            let t = m.node(a, b).expect("members are interned");
            Entry {
                series: Arc::new(LieSeries::single(t)),
                depth: 1,
            }
        } else {
            let (l, r) = m
                .children(b)
                .expect("(a, x) is a member for every letter x > a");
            let mut acc: HashMap<TreeId, BigInt> = HashMap::new();
            let mut child_depth = 0;

            let (s1, d1) = self.rec(a, l);
            child_depth = child_depth.max(d1);
            for (d, gamma) in s1.terms() {
                let (s, dd) = self.rec_signed(*d, r);
                child_depth = child_depth.max(dd);
                s.accumulate_into(&mut acc, gamma);
            }

            let (s2, d2) = self.rec(a, r);
            child_depth = child_depth.max(d2);
            for (d, gamma) in s2.terms() {
                let (s, dd) = self.rec_signed(l, *d);
                child_depth = child_depth.max(dd);
                s.accumulate_into(&mut acc, gamma);
            }
            Entry {
                series: Arc::new(LieSeries::from_map(acc, self.order())),
                depth: child_depth + 1,
            }
        };
        let entry = Arc::new(entry);
        self.memo.insert((a, b), entry.clone());
        (entry.series.clone(), entry.depth)
    }

    /// `[x, y]` for members, via antisymmetry when `y < x`.
    fn rec_signed(&self, x: TreeId, y: TreeId) -> (Arc<LieSeries>, usize) {
        match self.order().cmp_in_domain(x, y) {
            Ordering::Equal => (Arc::new(LieSeries::zero()), 0),
            Ordering::Less => self.rec(x, y),
            Ordering::Greater => {
                let (s, d) = self.rec(y, x);
                (Arc::new(s.negated()), d)
            }
        }
    }

    fn check_terms(&self, s: &LieSeries) -> Result<()> {
        for (t, _) in s.terms() {
            self.magma().validate(*t)?;
            if !self.hs.is_member(*t) {
                return Err(HallError::NotMember(self.magma().format(*t)));
            }
        }
        Ok(())
    }

    /// Bilinear extension of [`Decomposer::decompose`].
    pub fn bracket_series(&self, s1: &LieSeries, s2: &LieSeries) -> Result<LieSeries> {
        self.check_terms(s1)?;
        self.check_terms(s2)?;
        let mut acc: HashMap<TreeId, BigInt> = HashMap::new();
        for (x, alpha) in s1.terms() {
            for (y, beta) in s2.terms() {
                let s = self.decompose(*x, *y)?;
                s.accumulate_into(&mut acc, &(alpha * beta));
            }
        }
        Ok(LieSeries::from_map(acc, self.order()))
    }

    pub fn add_series(&self, s1: &LieSeries, s2: &LieSeries) -> Result<LieSeries> {
        self.check_terms(s1)?;
        self.check_terms(s2)?;
        let mut acc: HashMap<TreeId, BigInt> = HashMap::new();
        s1.accumulate_into(&mut acc, &BigInt::one());
        s2.accumulate_into(&mut acc, &BigInt::one());
        Ok(LieSeries::from_map(acc, self.order()))
    }

    pub fn scale_series(&self, s: &LieSeries, factor: &BigInt) -> Result<LieSeries> {
        self.check_terms(s)?;
        let mut acc: HashMap<TreeId, BigInt> = HashMap::new();
        s.accumulate_into(&mut acc, factor);
        Ok(LieSeries::from_map(acc, self.order()))
    }

    /// Expansion on the basis of an arbitrary tree, bracketing letter by letter.
    pub fn expand_tree(&self, t: TreeId) -> Result<LieSeries> {
        let m = self.magma();
        match m.children(t) {
            None => Ok(LieSeries::single(t)),
            Some((l, r)) => {
                let sl = self.expand_tree(l)?;
                let sr = self.expand_tree(r)?;
                self.bracket_series(&sl, &sr)
            }
        }
    }

    /// Expansion of a tree over Hall-set elements (`FoldTree` leaves).
    pub fn expand_fold_tree(&self, t: &FoldTree) -> Result<LieSeries> {
        match t {
            FoldTree::Leaf(x) => {
                self.require_member(*x)?;
                Ok(LieSeries::single(*x))
            }
            FoldTree::Node(l, r) => {
                let sl = self.expand_fold_tree(l)?;
                let sr = self.expand_fold_tree(r)?;
                self.bracket_series(&sl, &sr)
            }
        }
    }

    /// JSON rendering of the decomposition of `[a, b]`.
    pub fn series_json(
        &self,
        a: TreeId,
        b: TreeId,
        series: &LieSeries,
        stats: Option<DecompStats>,
    ) -> SeriesJson {
        let m = self.magma();
        let theta = match self.order().cmp_in_domain(a, b) {
            Ordering::Less => self.theta(a, b).ok(),
            Ordering::Greater => self.theta(b, a).ok(),
            Ordering::Equal => None,
        };
        SeriesJson {
            a: m.format(a),
            b: m.format(b),
            order: self.order().name(),
            theta,
            terms: series
                .terms()
                .iter()
                .map(|(t, c)| TermJson {
                    elem: m.format(*t),
                    coeff: c.to_string(),
                })
                .collect(),
            norm: series.norm().to_string(),
            max_depth: stats.map(|s| s.max_call_depth),
        }
    }
}
