//! Hall sets: generation by length, membership, `r(a, b)` and Witt dimensions.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{HallError, Result};
use crate::magma::{Magma, TreeId};
use crate::order::HallOrder;

/// Outcome of the cap-bounded search for `r(a, b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RValue {
    Finite(usize),
    /// Every iterate checked up to the cap was a member, so `r >= cap`.
    AtLeast(usize),
}

/// JSON export of a generated Hall set.
#[derive(Debug, Serialize)]
pub struct HallJson {
    pub order: String,
    pub alphabet: usize,
    #[serde(rename = "maxLen")]
    pub max_len: usize,
    pub elements: Vec<Vec<String>>,
}

/// A Hall set for a given order, with membership answered up to `max_len`.
///
/// Membership is decided from the defining axioms and memoized, so it is available
/// at every length up to `max_len`; the explicit sorted enumeration covers lengths
/// up to `enumerated_len()`.
pub struct HallSet {
    order: Arc<HallOrder>,
    max_len: usize,
    by_length: Vec<Vec<TreeId>>,
    rank: HashMap<TreeId, usize>,
    member: DashMap<TreeId, bool>,
}

impl std::fmt::Debug for HallSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HallSet")
            .field("order", &self.order.name())
            .field("max_len", &self.max_len)
            .field("enumerated_len", &self.enumerated_len())
            .finish()
    }
}

impl HallSet {
    /// Generates every element of length at most `max_len`, each length sorted by the order.
    pub fn generate(order: Arc<HallOrder>, max_len: usize) -> Result<Self> {
        let mut hs = Self::on_demand(order, max_len)?;
        for n in 2..=max_len {
            let level = hs.candidates(n)?;
            for (i, &t) in level.iter().enumerate() {
                hs.rank.insert(t, i);
                hs.member.insert(t, true);
            }
            hs.by_length.push(level);
        }
        Ok(hs)
    }

    /// A set that answers membership up to `max_len` without enumerating beyond the letters.
    pub fn on_demand(order: Arc<HallOrder>, max_len: usize) -> Result<Self> {
        if max_len == 0 {
            return Err(HallError::Config(
                "maximum length must be at least 1".into(),
            ));
        }
        let letters = order.magma().letters();
        let rank = letters.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let member = DashMap::new();
        for &t in &letters {
            member.insert(t, true);
        }
        Ok(HallSet {
            order,
            max_len,
            by_length: vec![letters],
            rank,
            member,
        })
    }

    /// Candidate brackets of length `n`, filtered and sorted.
    fn candidates(&self, n: usize) -> Result<Vec<TreeId>> {
        let m = self.magma();
        let o = &*self.order;
        let mut out = Vec::new();
        for &a in &self.by_length[n - 2] {
            for x in m.letters() {
                if o.compare(a, x)? == Ordering::Less {
                    out.push(m.node(a, x)?);
                }
            }
        }
        for len_b in 2..n {
            for &b in &self.by_length[len_b - 1] {
                let (b1, _) = m.children(b).expect("non-letter");
                for &a in &self.by_length[n - len_b - 1] {
                    if o.compare(b1, a)? != Ordering::Greater && o.compare(a, b)? == Ordering::Less
                    {
                        out.push(m.node(a, b)?);
                    }
                }
            }
        }
        let err = RefCell::new(None);
        out.sort_by(|&x, &y| {
            o.compare(x, y).unwrap_or_else(|e| {
                err.borrow_mut().get_or_insert(e);
                Ordering::Equal
            })
        });
        match err.into_inner() {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    pub fn order(&self) -> &Arc<HallOrder> {
        &self.order
    }

    pub fn magma(&self) -> &Arc<Magma> {
        self.order.magma()
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn enumerated_len(&self) -> usize {
        self.by_length.len()
    }

    /// Sorted elements of length `len`.
    pub fn elements_of_length(&self, len: usize) -> Result<&[TreeId]> {
        if len == 0 || len > self.enumerated_len() {
            return Err(HallError::Capacity {
                length: len,
                max_len: self.enumerated_len(),
            });
        }
        Ok(&self.by_length[len - 1])
    }

    /// All enumerated elements, by length then order.
    pub fn elements(&self) -> impl Iterator<Item = TreeId> + '_ {
        self.by_length.iter().flatten().copied()
    }

    /// Position of `t` within its length level, if enumerated.
    pub fn rank_in_length(&self, t: TreeId) -> Option<usize> {
        self.rank.get(&t).copied()
    }

    fn check_len(&self, length: usize) -> Result<()> {
        if length > self.max_len {
            Err(HallError::Capacity {
                length,
                max_len: self.max_len,
            })
        } else {
            Ok(())
        }
    }

    /// Membership of `t`; lengths above `max_len` are a capacity error.
    pub fn contains(&self, t: TreeId) -> Result<bool> {
        self.magma().validate(t)?;
        self.check_len(self.magma().len(t))?;
        Ok(self.is_member(t))
    }

    /// Whether `(b1, b2)` is a member.
    pub fn is_basis_bracket(&self, b1: TreeId, b2: TreeId) -> Result<bool> {
        let m = self.magma();
        m.validate(b1)?;
        m.validate(b2)?;
        self.check_len(m.len(b1) + m.len(b2))?;
        let t = m.node(b1, b2)?;
        Ok(self.is_member(t))
    }

    /// Structural membership test from the Hall axioms, without the length cap.
    pub(crate) fn is_member(&self, t: TreeId) -> bool {
        if let Some(v) = self.member.get(&t).map(|v| *v) {
            return v;
        }
        let m = self.magma();
        let v = match m.children(t) {
            None => true,
            Some((l, r)) => {
                self.is_member(l)
                    && self.is_member(r)
                    && self.order.cmp_in_domain(l, r) == Ordering::Less
                    && match m.children(r) {
                        None => true,
                        Some((rl, _)) => self.order.cmp_in_domain(rl, l) != Ordering::Greater,
                    }
            }
        };
        self.member.insert(t, v);
        v
    }

    /// Member test for a bracket `(a, b)` of members, interning it; no length cap.
    pub(crate) fn bracket_is_member(&self, a: TreeId, b: TreeId) -> bool {
        let m = self.magma();
        if self.order.cmp_in_domain(a, b) != Ordering::Less {
            return false;
        }
        match m.children(b) {
            Some((bl, _)) if self.order.cmp_in_domain(bl, a) == Ordering::Greater => false,
            _ => {
                if let Ok(t) = m.node(a, b) {
                    self.member.insert(t, true);
                }
                true
            }
        }
    }

    /// Smallest `r >= 1` with `underline-ad_b^{r+1}(a)` outside the set, searched below `cap`.
    pub fn r_factor(&self, a: TreeId, b: TreeId, cap: usize) -> Result<RValue> {
        if !self.is_basis_bracket(a, b)? {
            let m = self.magma();
            return Err(HallError::NotMember(format!(
                "[{},{}]",
                m.format(a),
                m.format(b)
            )));
        }
        let m = self.magma();
        let mut cur = m.node(a, b)?;
        for r in 1..cap {
            cur = m.node(cur, b)?;
            if !self.contains(cur)? {
                return Ok(RValue::Finite(r));
            }
        }
        Ok(RValue::AtLeast(cap))
    }

    pub fn to_json(&self) -> HallJson {
        let m = self.magma();
        HallJson {
            order: self.order.name(),
            alphabet: m.alphabet_size(),
            max_len: self.max_len,
            elements: self
                .by_length
                .iter()
                .map(|level| level.iter().map(|&t| m.format(t)).collect())
                .collect(),
        }
    }
}

fn mobius(mut n: u64) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Dimension of the degree-`n` component of the free Lie algebra on `k` generators.
pub fn witt_dimension(k: u64, n: u64) -> BigUint {
    assert!(n >= 1, "degree must be positive");
    let mut sum = BigInt::zero();
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        let term = BigInt::from(k).pow((n / d) as u32);
        match mobius(d) {
            1 => sum += term,
            -1 => sum -= term,
            _ => {}
        }
    }
    let q = sum / BigInt::from(n);
    debug_assert!(!q.is_negative());
    q.magnitude().clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::magma::Side;
    use crate::order::OrderSpec;

    fn set(spec: OrderSpec, max_len: usize) -> HallSet {
        HallSet::generate(HallOrder::standalone(spec).unwrap(), max_len).unwrap()
    }

    #[test]
    fn witt_values() {
        assert_eq!(witt_dimension(2, 1), BigUint::from(2u32));
        assert_eq!(witt_dimension(2, 6), BigUint::from(9u32));
        assert_eq!(witt_dimension(3, 3), BigUint::from(8u32));
        let counts: Vec<u32> = (1..=8)
            .map(|n| witt_dimension(2, n).try_into().unwrap())
            .collect();
        assert_eq!(counts, vec![2, 1, 2, 3, 6, 9, 18, 30]);
    }

    #[test]
    fn small_length_lex_set() {
        let hs = set(OrderSpec::LengthLex { k: 2 }, 4);
        let m = hs.magma();
        let mut got: Vec<String> = hs.elements().map(|t| m.format(t)).collect();
        got.sort();
        let mut want = vec![
            "X0",
            "X1",
            "[X0,X1]",
            "[X0,[X0,X1]]",
            "[X1,[X0,X1]]",
            "[X0,[X0,[X0,X1]]]",
            "[X1,[X0,[X0,X1]]]",
            "[X1,[X1,[X0,X1]]]",
        ];
        want.sort();
        assert_eq!(got, want);
        let bad = m.parse("[X0,[X1,[X0,X1]]]").unwrap();
        assert!(!hs.contains(bad).unwrap());
        let x1 = m.letter(1).unwrap();
        let a = m.parse("[X0,X1]").unwrap();
        assert!(hs.is_basis_bracket(x1, a).unwrap());
    }

    #[test]
    fn capacity_errors() {
        let hs = set(OrderSpec::FiboMin, 3);
        let m = hs.magma();
        assert!(hs.contains(m.parse("[X0,X1]").unwrap()).unwrap());
        let long = m.parse("[X0,[X0,[X0,X1]]]").unwrap();
        assert!(matches!(hs.contains(long), Err(HallError::Capacity { .. })));
        assert!(hs.elements_of_length(4).is_err());
    }

    #[test]
    fn counts_match_witt_for_each_order() {
        for spec in [
            OrderSpec::LengthLex { k: 2 },
            OrderSpec::Lyndon { k: 2 },
            OrderSpec::FiboMin,
            OrderSpec::SuperGeom,
        ] {
            let hs = set(spec, 8);
            for n in 1..=8 {
                assert_eq!(
                    BigUint::from(hs.elements_of_length(n).unwrap().len()),
                    witt_dimension(2, n as u64),
                    "{spec} n={n}"
                );
            }
        }
    }

    #[test]
    fn r_factor_examples() {
        let hs = set(OrderSpec::LengthLex { k: 2 }, 9);
        let m = hs.magma().clone();
        let (x0, x1) = (m.letter(0).unwrap(), m.letter(1).unwrap());
        assert_eq!(hs.r_factor(x0, x1, 8).unwrap(), RValue::Finite(1));
        let hs = set(OrderSpec::FiboMin, 9);
        let m = hs.magma().clone();
        let (x0, x1) = (m.letter(0).unwrap(), m.letter(1).unwrap());
        assert_eq!(hs.r_factor(x0, x1, 8).unwrap(), RValue::AtLeast(8));
        let hs = set(OrderSpec::Lyndon { k: 2 }, 9);
        let m = hs.magma().clone();
        let (x0, x1) = (m.letter(0).unwrap(), m.letter(1).unwrap());
        assert_eq!(hs.r_factor(x0, x1, 8).unwrap(), RValue::AtLeast(8));
        for n in 1..=8 {
            let b = m.ad_power(x1, x0, n, Side::Right).unwrap();
            assert!(hs.contains(b).unwrap());
        }
        assert!(matches!(
            hs.r_factor(x0, x1, 20),
            Err(HallError::Capacity { .. })
        ));
    }

    #[test]
    fn on_demand_membership_agrees_with_generation() {
        for spec in [
            OrderSpec::Lyndon { k: 3 },
            OrderSpec::SuperGeom,
            OrderSpec::SharpEn1 { n: 2 },
        ] {
            let gen = set(spec, 6);
            let lazy = HallSet::on_demand(gen.order().clone(), 6).unwrap();
            for t in gen.elements() {
                assert!(lazy.contains(t).unwrap());
            }
        }
    }

    #[test]
    fn regeneration_is_deterministic() {
        let a = set(OrderSpec::SuperGeom, 7).to_json();
        let b = set(OrderSpec::SuperGeom, 7).to_json();
        assert_eq!(a.elements, b.elements);
    }
}
