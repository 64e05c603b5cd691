//! Hall orders: a uniform comparison interface over five concrete orders,
//! plus the private alphabetic-factorial order used by one family.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;

use crate::error::{HallError, Result};
use crate::magma::{Magma, Shape, TreeId};

/// Public description of a shipped order. The base letter order is always `X0 < X1 < ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderSpec {
    /// Lexicographic on `(|t|, λ(t), μ(t))`.
    LengthLex { k: usize },
    /// Lexicographic on the foliage word, a proper prefix being smaller; length-lex tie-break.
    Lyndon { k: usize },
    /// `X0 < Br(X)\X < X1`, then lexicographic on `(λ, μ)`. Two letters.
    FiboMin,
    /// Score-based order on `G = {X0, X1} ∪ G*`. Two letters.
    SuperGeom,
    /// The order saturating `⌊e(n-1)!⌋`, over `X0 .. Xn`.
    SharpEn1 { n: usize },
}

impl OrderSpec {
    pub fn alphabet_size(&self) -> usize {
        match *self {
            OrderSpec::LengthLex { k } | OrderSpec::Lyndon { k } => k,
            OrderSpec::FiboMin | OrderSpec::SuperGeom => 2,
            OrderSpec::SharpEn1 { n } => n + 1,
        }
    }

    /// CLI name: `length`, `lyndon`, `fibo`, `supergeom` or `sharp:<n>`.
    pub fn name(&self) -> String {
        match *self {
            OrderSpec::LengthLex { .. } => "length".into(),
            OrderSpec::Lyndon { .. } => "lyndon".into(),
            OrderSpec::FiboMin => "fibo".into(),
            OrderSpec::SuperGeom => "supergeom".into(),
            OrderSpec::SharpEn1 { n } => format!("sharp:{n}"),
        }
    }

    /// Parses a CLI order name. `alphabet` is the requested size, if any.
    pub fn parse(name: &str, alphabet: Option<usize>) -> Result<OrderSpec> {
        let spec = match name {
            "length" => OrderSpec::LengthLex {
                k: alphabet.unwrap_or(2),
            },
            "lyndon" => OrderSpec::Lyndon {
                k: alphabet.unwrap_or(2),
            },
            "fibo" => OrderSpec::FiboMin,
            "supergeom" => OrderSpec::SuperGeom,
            _ => match name.strip_prefix("sharp:") {
                Some(n) => {
                    let n: usize = n.parse().map_err(|_| {
                        HallError::Config(format!("bad order parameter in {name:?}"))
                    })?;
                    OrderSpec::SharpEn1 { n }
                }
                None => return Err(HallError::Config(format!("unknown order {name:?}"))),
            },
        };
        spec.validate()?;
        if let Some(k) = alphabet {
            if k != spec.alphabet_size() {
                return Err(HallError::Config(format!(
                    "order {} requires alphabet size {}, got {k}",
                    spec.name(),
                    spec.alphabet_size()
                )));
            }
        }
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            OrderSpec::LengthLex { k } | OrderSpec::Lyndon { k } if k < 2 => Err(
                HallError::Config(format!("alphabet size must be at least 2, got {k}")),
            ),
            OrderSpec::SharpEn1 { n } if n < 2 => Err(HallError::Config(format!(
                "sharp order needs n >= 2, got {n}"
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for OrderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Spec(OrderSpec),
    AlphabeticFactorial,
}

/// Score, germ and tail power of an element of `G*` under the super-geometric order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuperGeomKey {
    pub score: u64,
    pub germ: TreeId,
    pub tail_power: usize,
}

#[derive(Debug, Clone, Copy)]
struct SgInfo {
    /// `Some(i)` when the tree is `A_i = ad^i_{X0}(X1)`.
    block: Option<u32>,
    in_br_a: bool,
    score: u64,
}

/// A strict total order on trees (or on a declared domain), memoized by id pair.
pub struct HallOrder {
    kind: Kind,
    magma: Arc<Magma>,
    memo: DashMap<(TreeId, TreeId), bool>,
    sg: DashMap<TreeId, SgInfo>,
}

impl fmt::Debug for HallOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HallOrder")
            .field("name", &self.name())
            .finish()
    }
}

/// Score of `A_i`.
pub fn block_score(i: u32) -> u64 {
    match i {
        0..=2 => i as u64,
        _ => 3u64 << (i - 3),
    }
}

/// Lexicographic comparison on `(|t|, λ, μ)` with letters ordered by index.
pub fn length_lex_cmp(m: &Magma, t1: TreeId, t2: TreeId) -> Ordering {
    if t1 == t2 {
        return Ordering::Equal;
    }
    match m.len(t1).cmp(&m.len(t2)) {
        Ordering::Equal => {}
        o => return o,
    }
    match (m.shape(t1), m.shape(t2)) {
        (Shape::Leaf(i), Shape::Leaf(j)) => i.cmp(&j),
        (Shape::Node(l1, r1), Shape::Node(l2, r2)) => {
            length_lex_cmp(m, l1, l2).then_with(|| length_lex_cmp(m, r1, r2))
        }
        _ => unreachable!("equal lengths imply equal shapes at the root"),
    }
}

impl HallOrder {
    pub fn new(spec: OrderSpec, magma: Arc<Magma>) -> Result<Self> {
        spec.validate()?;
        if magma.alphabet_size() != spec.alphabet_size() {
            return Err(HallError::Config(format!(
                "order {} needs an alphabet of size {}, the magma has {}",
                spec.name(),
                spec.alphabet_size(),
                magma.alphabet_size()
            )));
        }
        Ok(Self::from_kind(Kind::Spec(spec), magma))
    }

    /// Creates a fresh magma of the right size together with the order.
    pub fn standalone(spec: OrderSpec) -> Result<Arc<Self>> {
        let magma = Arc::new(Magma::new(spec.alphabet_size())?);
        Ok(Arc::new(Self::new(spec, magma)?))
    }

    /// Letters by index; otherwise largest leaf index first, then length-lex.
    pub(crate) fn alphabetic_factorial(magma: Arc<Magma>) -> Self {
        Self::from_kind(Kind::AlphabeticFactorial, magma)
    }

    fn from_kind(kind: Kind, magma: Arc<Magma>) -> Self {
        HallOrder {
            kind,
            magma,
            memo: DashMap::new(),
            sg: DashMap::new(),
        }
    }

    pub fn magma(&self) -> &Arc<Magma> {
        &self.magma
    }

    /// The public spec, or `None` for the private alphabetic-factorial order.
    pub fn spec(&self) -> Option<OrderSpec> {
        match self.kind {
            Kind::Spec(s) => Some(s),
            Kind::AlphabeticFactorial => None,
        }
    }

    pub fn name(&self) -> String {
        match self.kind {
            Kind::Spec(s) => s.name(),
            Kind::AlphabeticFactorial => "alphabetic-factorial".into(),
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.magma.alphabet_size()
    }

    /// Whether [`HallOrder::compare`] is defined at `t`.
    pub fn in_domain(&self, t: TreeId) -> bool {
        match self.kind {
            Kind::Spec(OrderSpec::SuperGeom) => self.in_g(t),
            _ => true,
        }
    }

    fn domain_error(&self, t: TreeId) -> HallError {
        HallError::Domain {
            order: self.name(),
            tree: self.magma.format(t),
        }
    }

    pub fn compare(&self, t1: TreeId, t2: TreeId) -> Result<Ordering> {
        self.magma.validate(t1)?;
        self.magma.validate(t2)?;
        if t1 == t2 {
            return if self.in_domain(t1) {
                Ok(Ordering::Equal)
            } else {
                Err(self.domain_error(t1))
            };
        }
        for t in [t1, t2] {
            if !self.in_domain(t) {
                return Err(self.domain_error(t));
            }
        }
        Ok(self.cmp_in_domain(t1, t2))
    }

    pub fn less(&self, t1: TreeId, t2: TreeId) -> Result<bool> {
        Ok(self.compare(t1, t2)? == Ordering::Less)
    }

    /// Memoized comparison of two trees known to lie in the domain.
    pub(crate) fn cmp_in_domain(&self, t1: TreeId, t2: TreeId) -> Ordering {
        if t1 == t2 {
            return Ordering::Equal;
        }
        let (lo, hi, flipped) = if t1 < t2 {
            (t1, t2, false)
        } else {
            (t2, t1, true)
        };
        let lo_less = match self.memo.get(&(lo, hi)).map(|v| *v) {
            Some(v) => v,
            None => {
                let v = self.raw_cmp(lo, hi) == Ordering::Less;
                self.memo.insert((lo, hi), v);
                v
            }
        };
        match (lo_less, flipped) {
            (true, false) | (false, true) => Ordering::Less,
            _ => Ordering::Greater,
        }
    }

    /// Unmemoized comparison; recursive sub-comparisons go through the memo.
    fn raw_cmp(&self, t1: TreeId, t2: TreeId) -> Ordering {
        let m = &*self.magma;
        match self.kind {
            Kind::Spec(OrderSpec::LengthLex { .. }) => {
                match m.len(t1).cmp(&m.len(t2)) {
                    Ordering::Equal => {}
                    o => return o,
                }
                match (m.shape(t1), m.shape(t2)) {
                    (Shape::Leaf(i), Shape::Leaf(j)) => i.cmp(&j),
                    (Shape::Node(l1, r1), Shape::Node(l2, r2)) => self
                        .cmp_in_domain(l1, l2)
                        .then_with(|| self.cmp_in_domain(r1, r2)),
                    _ => unreachable!(),
                }
            }
            Kind::Spec(OrderSpec::Lyndon { .. }) => {
                let (f1, f2) = (m.foliage(t1), m.foliage(t2));
                f1.cmp(&f2).then_with(|| length_lex_cmp(m, t1, t2))
            }
            Kind::Spec(OrderSpec::FiboMin) => {
                let class = |t: TreeId| match m.shape(t) {
                    Shape::Leaf(0) => 0,
                    Shape::Leaf(_) => 2,
                    Shape::Node(..) => 1,
                };
                match class(t1).cmp(&class(t2)) {
                    Ordering::Equal => {}
                    o => return o,
                }
                let (Some((l1, r1)), Some((l2, r2))) = (m.children(t1), m.children(t2)) else {
                    unreachable!("distinct letters have distinct classes")
                };
                self.cmp_in_domain(l1, l2)
                    .then_with(|| self.cmp_in_domain(r1, r2))
            }
            Kind::Spec(OrderSpec::SuperGeom) => self.super_geom_cmp(t1, t2),
            Kind::Spec(OrderSpec::SharpEn1 { n }) => {
                let (c1, c2) = (self.sharp_class(t1, n), self.sharp_class(t2, n));
                match c1.cmp(&c2) {
                    Ordering::Equal if c1 == 3 => m
                        .max_leaf(t1)
                        .cmp(&m.max_leaf(t2))
                        .then_with(|| length_lex_cmp(m, t1, t2)),
                    Ordering::Equal => length_lex_cmp(m, t1, t2),
                    o => o,
                }
            }
            Kind::AlphabeticFactorial => m
                .max_leaf(t1)
                .cmp(&m.max_leaf(t2))
                .then_with(|| length_lex_cmp(m, t1, t2)),
        }
    }

    // ----- super-geometric order -----

    fn sg_info(&self, t: TreeId) -> SgInfo {
        if let Some(info) = self.sg.get(&t).map(|v| *v) {
            return info;
        }
        let m = &*self.magma;
        let info = match m.shape(t) {
            Shape::Leaf(1) => SgInfo {
                block: Some(0),
                in_br_a: true,
                score: 0,
            },
            Shape::Leaf(_) => SgInfo {
                block: None,
                in_br_a: false,
                score: 0,
            },
            Shape::Node(l, r) => {
                let ri = self.sg_info(r);
                if m.letter_of(l) == Some(0) {
                    match ri.block {
                        Some(i) => SgInfo {
                            block: Some(i + 1),
                            in_br_a: true,
                            score: block_score(i + 1),
                        },
                        None => SgInfo {
                            block: None,
                            in_br_a: false,
                            score: 0,
                        },
                    }
                } else {
                    let li = self.sg_info(l);
                    let in_br_a = li.in_br_a && ri.in_br_a;
                    SgInfo {
                        block: None,
                        in_br_a,
                        score: if in_br_a { li.score + ri.score } else { 0 },
                    }
                }
            }
        };
        self.sg.insert(t, info);
        info
    }

    /// `Some(i)` when `t = A_i = ad^i_{X0}(X1)`. Meaningful for two-letter magmas.
    pub fn block_index(&self, t: TreeId) -> Option<u32> {
        self.sg_info(t).block
    }

    /// Membership in the submagma generated by the blocks `A_i`.
    pub fn in_block_magma(&self, t: TreeId) -> bool {
        self.sg_info(t).in_br_a
    }

    fn in_g_star(&self, t: TreeId) -> bool {
        self.sg_info(t).in_br_a && self.magma.leftmost_letter(t) == 0
    }

    fn in_g(&self, t: TreeId) -> bool {
        self.magma.is_letter(t) || self.in_g_star(t)
    }

    /// Additive score `s`, defined on the block submagma.
    pub fn score(&self, t: TreeId) -> Option<u64> {
        let info = self.sg_info(t);
        info.in_br_a.then_some(info.score)
    }

    /// Decomposes `t ∈ G*` as `t = underline-ad^ν_{X1}(t*)`, stripping trailing `X1`
    /// while the left factor stays in `G*`.
    pub fn super_geom_key(&self, t: TreeId) -> Result<SuperGeomKey> {
        if !self.in_g_star(t) {
            return Err(self.domain_error(t));
        }
        let m = &*self.magma;
        let mut germ = t;
        let mut tail_power = 0;
        while let Some((l, r)) = m.children(germ) {
            if m.letter_of(r) == Some(1) && self.in_g_star(l) {
                germ = l;
                tail_power += 1;
            } else {
                break;
            }
        }
        Ok(SuperGeomKey {
            score: self.sg_info(t).score,
            germ,
            tail_power,
        })
    }

    fn super_geom_cmp(&self, t1: TreeId, t2: TreeId) -> Ordering {
        let m = &*self.magma;
        let class = |t: TreeId| match m.letter_of(t) {
            Some(0) => 0,
            Some(_) => 2,
            None => 1,
        };
        match class(t1).cmp(&class(t2)) {
            Ordering::Equal => {}
            o => return o,
        }
        let k1 = self.super_geom_key(t1).expect("domain checked");
        let k2 = self.super_geom_key(t2).expect("domain checked");
        let (l1, r1) = m.children(k1.germ).expect("germs are brackets");
        let (l2, r2) = m.children(k2.germ).expect("germs are brackets");
        k1.score
            .cmp(&k2.score)
            .then_with(|| self.cmp_in_domain(l1, l2))
            .then_with(|| self.super_geom_cmp_right(r1, r2))
            .then_with(|| k1.tail_power.cmp(&k2.tail_power))
    }

    /// Right factors of germs lie in the block submagma but not always in `G`;
    /// elements of `G` come first, the rest is ordered length-lexicographically.
    fn super_geom_cmp_right(&self, t1: TreeId, t2: TreeId) -> Ordering {
        match (self.in_g(t1), self.in_g(t2)) {
            (true, true) => self.cmp_in_domain(t1, t2),
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            (false, false) => length_lex_cmp(&self.magma, t1, t2),
        }
    }

    // ----- sharp order -----

    /// `Some(())` when `t = (...((X0, X_{π1}), X_{π2}) ..., X_{πp})` with `2 <= π1 < ... < πp <= n`.
    fn is_a_pi(&self, t: TreeId, n: usize) -> bool {
        let m = &*self.magma;
        let mut cur = t;
        let mut bound = n + 1;
        loop {
            match m.shape(cur) {
                Shape::Leaf(i) => return i == 0,
                Shape::Node(l, r) => match m.letter_of(r) {
                    Some(j) if (2..bound).contains(&j) => {
                        bound = j;
                        cur = l;
                    }
                    _ => return false,
                },
            }
        }
    }

    /// `X1` or `(...((X1, Xn), X(n-1)) ..., Xj)` with `j >= 2`.
    fn is_sharp_a2(&self, t: TreeId, n: usize) -> bool {
        let m = &*self.magma;
        let mut cur = t;
        let mut expected: Option<usize> = None;
        loop {
            match m.shape(cur) {
                Shape::Leaf(i) => return i == 1 && expected.is_none_or(|e| e == n + 1),
                Shape::Node(l, r) => match m.letter_of(r) {
                    Some(j) if (2..=n).contains(&j) && expected.is_none_or(|e| e == j) => {
                        expected = Some(j + 1);
                        cur = l;
                    }
                    _ => return false,
                },
            }
        }
    }

    /// Trees containing `X0` and `X1` once each, with `X1` the right sibling of some `a_π`.
    fn is_sharp_a4(&self, t: TreeId, n: usize) -> bool {
        let m = &*self.magma;
        if m.count_letter(t, 0) != 1 || m.count_letter(t, 1) != 1 {
            return false;
        }
        let mut cur = t;
        loop {
            let Some((l, r)) = m.children(cur) else {
                return false;
            };
            if m.letter_of(r) == Some(1) {
                return self.is_a_pi(l, n);
            }
            cur = if m.count_letter(l, 1) == 1 { l } else { r };
        }
    }

    fn sharp_class(&self, t: TreeId, n: usize) -> u8 {
        let m = &*self.magma;
        if self.is_a_pi(t, n) {
            1
        } else if self.is_sharp_a2(t, n) {
            2
        } else if m.count_letter(t, 0) == 0 && m.count_letter(t, 1) == 0 {
            3
        } else if self.is_sharp_a4(t, n) {
            4
        } else {
            5
        }
    }

    /// Block index (1 to 4) of `t` in the sharp order, or 5 outside the blocks.
    pub fn sharp_block(&self, t: TreeId) -> Option<u8> {
        match self.kind {
            Kind::Spec(OrderSpec::SharpEn1 { n }) => Some(self.sharp_class(t, n)),
            _ => None,
        }
    }
}

// ----- Lyndon words -----

/// A non-empty word strictly smaller than each of its proper rotations.
pub fn is_lyndon(word: &[u8]) -> bool {
    if word.is_empty() {
        return false;
    }
    (1..word.len()).all(|i| {
        let rotated = word[i..].iter().chain(word[..i].iter());
        word.iter().cmp(rotated) == Ordering::Less
    })
}

fn word_text(word: &[u8]) -> String {
    word.iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Splits a Lyndon word as `uv` with `u`, `v` Lyndon and `|u|` maximal.
pub fn lyndon_standard_factorization(word: &[u8]) -> Result<(Vec<u8>, Vec<u8>)> {
    if word.len() < 2 || !is_lyndon(word) {
        return Err(HallError::NotLyndon(word_text(word)));
    }
    (1..word.len())
        .rev()
        .find(|&i| is_lyndon(&word[..i]) && is_lyndon(&word[i..]))
        .map(|i| (word[..i].to_vec(), word[i..].to_vec()))
        .ok_or_else(|| HallError::NotLyndon(word_text(word)))
}

/// All Lyndon words of length at most `max_len` over `k` letters, by length then lexicographically.
pub fn lyndon_words(k: usize, max_len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if k == 0 || max_len == 0 {
        return out;
    }
    let top = (k - 1) as u8;
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(w.clone());
        let m = w.len();
        while w.len() < max_len {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&top) {
            w.pop();
        }
        match w.last_mut() {
            Some(c) => *c += 1,
            None => break,
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// Bracketing of a Lyndon word through recursive standard factorization.
pub fn lyndon_bracketing(magma: &Magma, word: &[u8]) -> Result<TreeId> {
    match word.len() {
        0 => Err(HallError::NotLyndon(String::new())),
        1 => magma.letter(word[0] as usize),
        _ => {
            let (u, v) = lyndon_standard_factorization(word)?;
            let l = lyndon_bracketing(magma, &u)?;
            let r = lyndon_bracketing(magma, &v)?;
            magma.node(l, r)
        }
    }
}
