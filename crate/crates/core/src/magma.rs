//! Hash-consed binary trees over a finite ordered alphabet `X0 < X1 < ... < X(k-1)`.
//!
//! Every tree lives in a [`Magma`] and is referred to by a dense [`TreeId`].
//! Two trees are structurally equal exactly when their ids are equal.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::error::{HallError, Result};

/// Largest supported alphabet. Foliage words store letters as bytes.
pub const MAX_ALPHABET: usize = 256;

/// Canonical handle of an interned tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeId(pub(crate) u32);

impl TreeId {
    pub fn index(self) -> u32 {
        self.0
    }
}

/// Top-level structure of a tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    Leaf(usize),
    Node(TreeId, TreeId),
}

/// Direction of an iterated bracket built by [`Magma::ad_power`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `ad_base^n(arg) = (base, (base, ... (base, arg)))`
    Left,
    /// `underline-ad_base^n(arg) = (((arg, base), base), ... base)`
    Right,
}

struct NodeData {
    shape: Shape,
    len: u32,
    foliage: Arc<[u8]>,
    counts: Arc<[u32]>,
}

#[derive(Default)]
struct Store {
    nodes: Vec<NodeData>,
    index: HashMap<(TreeId, TreeId), TreeId>,
}

/// Append-only interner of trees over an alphabet of fixed size.
///
/// Reads take a shared lock; creating a new node takes the write lock briefly.
pub struct Magma {
    k: usize,
    store: RwLock<Store>,
}

impl fmt::Debug for Magma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Magma")
            .field("alphabet", &self.k)
            .field("nodes", &self.node_count())
            .finish()
    }
}

impl Magma {
    /// Creates an interner over `X0 .. X(k-1)`; letter `i` always has id `i`.
    pub fn new(k: usize) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&k) {
            return Err(HallError::Config(format!(
                "alphabet size must lie in 2..={MAX_ALPHABET}, got {k}"
            )));
        }
        let mut store = Store::default();
        for i in 0..k {
            let mut counts = vec![0u32; k];
            counts[i] = 1;
            store.nodes.push(NodeData {
                shape: Shape::Leaf(i),
                len: 1,
                foliage: Arc::from(vec![i as u8]),
                counts: Arc::from(counts),
            });
        }
        Ok(Magma {
            k,
            store: RwLock::new(store),
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.k
    }

    pub fn node_count(&self) -> usize {
        self.store.read().nodes.len()
    }

    /// Interns the letter `X<index>`.
    pub fn letter(&self, index: usize) -> Result<TreeId> {
        if index >= self.k {
            return Err(HallError::LetterOutOfRange {
                index,
                size: self.k,
            });
        }
        Ok(TreeId(index as u32))
    }

    /// All letters in increasing order.
    pub fn letters(&self) -> Vec<TreeId> {
        (0..self.k).map(|i| TreeId(i as u32)).collect()
    }

    pub fn validate(&self, t: TreeId) -> Result<()> {
        if (t.0 as usize) < self.node_count() {
            Ok(())
        } else {
            Err(HallError::InvalidTreeId(t.0))
        }
    }

    /// Interns the ordered pair `(left, right)`.
    pub fn node(&self, left: TreeId, right: TreeId) -> Result<TreeId> {
        if let Some(&id) = self.store.read().index.get(&(left, right)) {
            return Ok(id);
        }
        let mut store = self.store.write();
        if let Some(&id) = store.index.get(&(left, right)) {
            return Ok(id);
        }
        let n = store.nodes.len();
        for t in [left, right] {
            if t.0 as usize >= n {
                return Err(HallError::InvalidTreeId(t.0));
            }
        }
        let (l, r) = (
            &store.nodes[left.0 as usize],
            &store.nodes[right.0 as usize],
        );
        let mut foliage = Vec::with_capacity(l.foliage.len() + r.foliage.len());
        foliage.extend_from_slice(&l.foliage);
        foliage.extend_from_slice(&r.foliage);
        let counts: Vec<u32> = l
            .counts
            .iter()
            .zip(r.counts.iter())
            .map(|(a, b)| a + b)
            .collect();
        let data = NodeData {
            shape: Shape::Node(left, right),
            len: l.len + r.len,
            foliage: Arc::from(foliage),
            counts: Arc::from(counts),
        };
        let id = TreeId(n as u32);
        store.nodes.push(data);
        store.index.insert((left, right), id);
        Ok(id)
    }

    /// Looks up `(left, right)` without creating it.
    pub fn find_node(&self, left: TreeId, right: TreeId) -> Option<TreeId> {
        self.store.read().index.get(&(left, right)).copied()
    }

    /// Structure of `t`. Panics if `t` was not produced by this magma.
    pub fn shape(&self, t: TreeId) -> Shape {
        self.store.read().nodes[t.0 as usize].shape
    }

    pub fn children(&self, t: TreeId) -> Option<(TreeId, TreeId)> {
        match self.shape(t) {
            Shape::Node(l, r) => Some((l, r)),
            Shape::Leaf(_) => None,
        }
    }

    pub fn letter_of(&self, t: TreeId) -> Option<usize> {
        match self.shape(t) {
            Shape::Leaf(i) => Some(i),
            Shape::Node(..) => None,
        }
    }

    pub fn is_letter(&self, t: TreeId) -> bool {
        (t.0 as usize) < self.k
    }

    pub fn lambda(&self, t: TreeId) -> Result<TreeId> {
        self.validate(t)?;
        self.children(t)
            .map(|(l, _)| l)
            .ok_or_else(|| HallError::LeafHasNoFactors(self.format(t)))
    }

    pub fn mu(&self, t: TreeId) -> Result<TreeId> {
        self.validate(t)?;
        self.children(t)
            .map(|(_, r)| r)
            .ok_or_else(|| HallError::LeafHasNoFactors(self.format(t)))
    }

    /// Number of leaves `|t|`.
    pub fn len(&self, t: TreeId) -> usize {
        self.store.read().nodes[t.0 as usize].len as usize
    }

    /// Left-to-right sequence of leaf letter indices.
    pub fn foliage(&self, t: TreeId) -> Arc<[u8]> {
        self.store.read().nodes[t.0 as usize].foliage.clone()
    }

    /// Per-letter occurrence counts, indexed by letter.
    pub fn letter_counts(&self, t: TreeId) -> Arc<[u32]> {
        self.store.read().nodes[t.0 as usize].counts.clone()
    }

    pub fn count_letter(&self, t: TreeId, letter: usize) -> usize {
        let store = self.store.read();
        store.nodes[t.0 as usize]
            .counts
            .get(letter)
            .copied()
            .unwrap_or(0) as usize
    }

    /// Largest letter index occurring in `t`.
    pub fn max_leaf(&self, t: TreeId) -> usize {
        let store = self.store.read();
        let counts = &store.nodes[t.0 as usize].counts;
        (0..self.k).rev().find(|&i| counts[i] > 0).unwrap_or(0)
    }

    /// First letter of the foliage.
    pub fn leftmost_letter(&self, t: TreeId) -> usize {
        self.store.read().nodes[t.0 as usize].foliage[0] as usize
    }

    /// The chain `t, λ(t), λ²(t), ...` ending at a letter.
    pub fn left_factors(&self, t: TreeId) -> Vec<TreeId> {
        let mut out = vec![t];
        let mut cur = t;
        while let Some((l, _)) = self.children(cur) {
            out.push(l);
            cur = l;
        }
        out
    }

    /// `true` when `x` is one of the iterated left factors of `t`.
    pub fn has_left_factor(&self, t: TreeId, x: TreeId) -> bool {
        let mut cur = t;
        loop {
            if cur == x {
                return true;
            }
            match self.children(cur) {
                Some((l, _)) => cur = l,
                None => return false,
            }
        }
    }

    /// Iterated bracketing of `arg` by `base`, `n` times, on the given side.
    pub fn ad_power(&self, base: TreeId, arg: TreeId, n: usize, side: Side) -> Result<TreeId> {
        let mut cur = arg;
        for _ in 0..n {
            cur = match side {
                Side::Left => self.node(base, cur)?,
                Side::Right => self.node(cur, base)?,
            };
        }
        Ok(cur)
    }

    /// Brackets a non-empty slice left to right: `(((t0, t1), t2), ...)`.
    pub fn left_comb(&self, items: &[TreeId]) -> Result<TreeId> {
        let (&first, rest) = items
            .split_first()
            .ok_or_else(|| HallError::Config("empty bracket".into()))?;
        rest.iter().try_fold(first, |acc, &t| self.node(acc, t))
    }

    /// Canonical text form, e.g. `[X0,[X0,X1]]`.
    pub fn format(&self, t: TreeId) -> String {
        let mut out = String::new();
        self.write_tree(t, &mut out);
        out
    }

    fn write_tree(&self, t: TreeId, out: &mut String) {
        match self.shape(t) {
            Shape::Leaf(i) => {
                out.push('X');
                out.push_str(&i.to_string());
            }
            Shape::Node(l, r) => {
                out.push('[');
                self.write_tree(l, out);
                out.push(',');
                self.write_tree(r, out);
                out.push(']');
            }
        }
    }

    /// Parses the bracket grammar `expr := X<digits> | [expr,expr]`.
    /// Whitespace between tokens is ignored.
    pub fn parse(&self, text: &str) -> Result<TreeId> {
        let mut p = Parser {
            bytes: text.as_bytes(),
            pos: 0,
            magma: self,
        };
        let t = p.expr()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.error("trailing input"));
        }
        Ok(t)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    magma: &'a Magma,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> HallError {
        let message = if self.pos >= self.bytes.len() {
            format!("{what} at end of input")
        } else {
            what.to_string()
        };
        HallError::Parse {
            position: self.pos,
            message,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<TreeId> {
        self.skip_ws();
        match self.bytes.get(self.pos) {
            Some(b'X') => {
                self.pos += 1;
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.error("expected letter index after 'X'"));
                }
                let digits = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap_or("");
                let index: usize = digits.parse().map_err(|_| HallError::Parse {
                    position: start,
                    message: "letter index too large".into(),
                })?;
                self.magma.letter(index)
            }
            Some(b'[') => {
                self.pos += 1;
                let l = self.expr()?;
                self.expect(b',')?;
                let r = self.expr()?;
                self.expect(b']')?;
                self.magma.node(l, r)
            }
            _ => Err(self.error("expected 'X' or '['")),
        }
    }
}
