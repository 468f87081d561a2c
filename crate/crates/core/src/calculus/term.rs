//! Terms of the calculus in partition normal form.
//!
//! A term `f : N^k -> Bag[N^m]` built from projections, `All` and equality
//! guards is invariant under permutations of `N`, so `f(x)(y)` only depends
//! on the equality pattern of the joined tuple `x ++ y`. A pattern is stored
//! as a restricted growth string over the `k + m` positions. Each pattern
//! carries a multiplicity and the set of class sizes at which it belongs to
//! the term; sizes matter once compositions hide variables.

use std::collections::BTreeMap;
use std::fmt;

use crate::model::{ArcFunction, Elem, Guard};

use super::CalculusError;

/// Class sizes `1..=63` as bits `0..=62`; bit 63 stands for every size from 64 on.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SizeSet(u64);

impl SizeSet {
    pub const EMPTY: SizeSet = SizeSet(0);

    /// Every size `>= min`.
    pub fn from_min(min: usize) -> SizeSet {
        let min = min.max(1);
        if min > 64 {
            return SizeSet(1 << 63);
        }
        SizeSet(u64::MAX << (min - 1))
    }

    pub fn contains(self, n: u32) -> bool {
        n >= 1 && self.0 & (1 << (n.min(64) - 1)) != 0
    }

    /// Holds for all large sizes.
    pub fn in_limit(self) -> bool {
        self.0 & (1 << 63) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn least(self) -> Option<u32> {
        (self.0 != 0).then(|| self.0.trailing_zeros() + 1)
    }

    pub fn and(self, o: SizeSet) -> SizeSet {
        SizeSet(self.0 & o.0)
    }

    pub fn or(self, o: SizeSet) -> SizeSet {
        SizeSet(self.0 | o.0)
    }

    pub fn minus(self, o: SizeSet) -> SizeSet {
        SizeSet(self.0 & !o.0)
    }
}

impl fmt::Debug for SizeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let full = SizeSet::from_min(self.least().unwrap_or(1) as usize);
        match self.least() {
            None => write!(f, "{{}}"),
            Some(m) if *self == full => write!(f, "{{{}..}}", m),
            _ => write!(f, "{:#x}", self.0),
        }
    }
}

/// Restricted growth strings of length `len`.
pub fn patterns(len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(len: usize, cur: &mut Vec<u8>, max: u8, out: &mut Vec<Vec<u8>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let top = if cur.is_empty() { 0 } else { max + 1 };
        for b in 0..=top {
            cur.push(b);
            rec(len, cur, max.max(b), out);
            cur.pop();
        }
    }
    rec(len, &mut cur, 0, &mut out);
    out
}

/// Relabels blocks by first occurrence.
pub fn normalize(labels: impl IntoIterator<Item = u32>) -> Vec<u8> {
    let mut seen: Vec<u32> = Vec::new();
    labels
        .into_iter()
        .map(|l| match seen.iter().position(|s| *s == l) {
            Some(i) => i as u8,
            None => {
                seen.push(l);
                (seen.len() - 1) as u8
            }
        })
        .collect()
}

pub fn blocks(p: &[u8]) -> usize {
    p.iter().map(|b| *b as usize + 1).max().unwrap_or(0)
}

fn restrict(p: &[u8], range: std::ops::Range<usize>) -> Vec<u8> {
    normalize(p[range].iter().map(|b| *b as u32))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermKind {
    /// Values are multisets.
    Multiset,
    /// Values are sets (supports).
    Set,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub mult: u64,
    pub sizes: SizeSet,
}

/// `N^from -> Bag[N^to]`, tagged multiset- or set-valued.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    pub from: usize,
    pub to: usize,
    pub kind: TermKind,
    /// Patterns over `from + to` positions; absent patterns map to zero.
    pub cells: BTreeMap<Vec<u8>, Cell>,
}

impl Term {
    pub fn null(from: usize, to: usize, kind: TermKind) -> Term {
        Term { from, to, kind, cells: BTreeMap::new() }
    }

    /// `<n1,...,nk>` as a set term.
    pub fn identity(k: usize) -> Term {
        let mut t = Term::null(k, k, TermKind::Set);
        for p in patterns(k) {
            let b = blocks(&p);
            let mut q = p.clone();
            q.extend_from_slice(&p);
            t.cells.insert(q, Cell { mult: 1, sizes: SizeSet::from_min(b) });
        }
        t
    }

    /// Semantics of an arc function with `k` variables and a codomain of
    /// arity `m`, restricted to bindings satisfying `guard`.
    pub fn from_arc(f: &ArcFunction, k: usize, m: usize, guard: &Guard) -> Result<Term, CalculusError> {
        for (_, t) in &f.terms {
            if t.components.len() != m {
                return Err(CalculusError::Signature(format!("tuple of arity {} into arity {}", t.components.len(), m)));
            }
        }
        let unsupported = |what: &str| CalculusError::Unsupported(what.to_string());
        let mut out = Term::null(k, m, TermKind::Multiset);
        for p in patterns(k + m) {
            let (x, y) = p.split_at(k);
            if !guard.eval_pattern(x).ok_or_else(|| unsupported("subclass predicate in guard"))? {
                continue;
            }
            let mut total: u64 = 0;
            for (lambda, t) in &f.terms {
                if let Some(g) = &t.filter {
                    if !g.eval_pattern(x).ok_or_else(|| unsupported("subclass predicate in filter"))? {
                        continue;
                    }
                }
                if let Some(g) = &t.cofilter {
                    if !g.eval_pattern(y).ok_or_else(|| unsupported("subclass predicate in filter"))? {
                        continue;
                    }
                }
                let mut prod: u64 = 1;
                for (j, cf) in t.components.iter().enumerate() {
                    let mut v: i64 = 0;
                    for (alpha, e) in &cf.terms {
                        v += alpha
                            * match e {
                                Elem::Proj(i) if *i < k => i64::from(x[*i] == y[j]),
                                Elem::Proj(i) => return Err(CalculusError::Signature(format!("variable #{} of {}", i + 1, k))),
                                Elem::All => 1,
                                Elem::Succ(_) => return Err(unsupported("successor")),
                                Elem::Subclass(_) => return Err(unsupported("static subclass")),
                            };
                    }
                    if v < 0 {
                        return Err(CalculusError::NegativeCoefficient(format!("pattern {:?}", p)));
                    }
                    prod *= v as u64;
                }
                total += lambda * prod;
            }
            if total > 0 {
                out.cells.insert(p.clone(), Cell { mult: total, sizes: SizeSet::from_min(blocks(&p)) });
            }
        }
        Ok(out)
    }

    fn check(&self, other: &Term) -> Result<(), CalculusError> {
        if (self.from, self.to) != (other.from, other.to) {
            return Err(CalculusError::Signature(format!("{}->{} against {}->{}", self.from, self.to, other.from, other.to)));
        }
        if self.kind != other.kind {
            return Err(CalculusError::KindMismatch);
        }
        Ok(())
    }

    pub fn support(&self) -> Term {
        let cells = self.cells.iter().map(|(p, c)| (p.clone(), Cell { mult: 1, sizes: c.sizes })).collect();
        Term { from: self.from, to: self.to, kind: TermKind::Set, cells }
    }

    pub fn transpose(&self) -> Term {
        let cells = self
            .cells
            .iter()
            .map(|(p, c)| (normalize(p[self.from..].iter().chain(&p[..self.from]).map(|b| *b as u32)), *c))
            .collect();
        Term { from: self.to, to: self.from, kind: self.kind, cells }
    }

    /// Multiset sum, or union for set terms.
    pub fn sum(&self, other: &Term) -> Result<Term, CalculusError> {
        self.check(other)?;
        let mut out = self.clone();
        for (p, c) in &other.cells {
            let e = out.cells.entry(p.clone()).or_insert(Cell { mult: 0, sizes: SizeSet::EMPTY });
            match self.kind {
                TermKind::Multiset => {
                    e.mult += c.mult;
                    e.sizes = c.sizes;
                }
                TermKind::Set => {
                    e.mult = 1;
                    e.sizes = e.sizes.or(c.sizes);
                }
            }
        }
        Ok(out)
    }

    /// Truncated multiset difference, or set difference.
    pub fn difference(&self, other: &Term) -> Result<Term, CalculusError> {
        self.check(other)?;
        let mut out = Term::null(self.from, self.to, self.kind);
        for (p, c) in &self.cells {
            let next = match (other.cells.get(p), self.kind) {
                (None, _) => *c,
                (Some(d), TermKind::Multiset) => Cell { mult: c.mult.saturating_sub(d.mult), sizes: c.sizes },
                (Some(d), TermKind::Set) => Cell { mult: 1, sizes: c.sizes.minus(d.sizes) },
            };
            if next.mult > 0 && !next.sizes.is_empty() {
                out.cells.insert(p.clone(), next);
            }
        }
        Ok(out)
    }

    /// `self ∘ inner`, as a set term: `x ↦ ∪_{y ∈ inner(x)} self(y)`.
    pub fn compose(&self, inner: &Term) -> Result<Term, CalculusError> {
        if inner.to != self.from {
            return Err(CalculusError::Signature(format!("compose {}->{} after {}->{}", self.from, self.to, inner.from, inner.to)));
        }
        let (k, m, r) = (inner.from, inner.to, self.to);
        let mut out = Term::null(k, r, TermKind::Set);
        if self.cells.is_empty() || inner.cells.is_empty() {
            return Ok(out);
        }
        for p in patterns(k + m + r) {
            let Some(f) = inner.cells.get(&restrict(&p, 0..k + m)) else { continue };
            let Some(g) = self.cells.get(&restrict(&p, k..k + m + r)) else { continue };
            let sizes = f.sizes.and(g.sizes).and(SizeSet::from_min(blocks(&p)));
            if sizes.is_empty() {
                continue;
            }
            let q = normalize(p[..k].iter().chain(&p[k + m..]).map(|b| *b as u32));
            let e = out.cells.entry(q).or_insert(Cell { mult: 1, sizes: SizeSet::EMPTY });
            e.sizes = e.sizes.or(sizes);
        }
        Ok(out)
    }

    /// Pointwise Cartesian product `x ↦ self(x) × other(x)`.
    pub fn product(&self, other: &Term) -> Result<Term, CalculusError> {
        if self.from != other.from {
            return Err(CalculusError::Signature(format!("product of {}-ary and {}-ary domains", self.from, other.from)));
        }
        if self.kind != other.kind {
            return Err(CalculusError::KindMismatch);
        }
        let (k, a, b) = (self.from, self.to, other.to);
        let mut out = Term::null(k, a + b, self.kind);
        for p in patterns(k + a + b) {
            let Some(f) = self.cells.get(&restrict(&p, 0..k + a)) else { continue };
            let q: Vec<u32> = p[..k].iter().chain(&p[k + a..]).map(|x| *x as u32).collect();
            let Some(g) = other.cells.get(&normalize(q)) else { continue };
            let sizes = f.sizes.and(g.sizes).and(SizeSet::from_min(blocks(&p)));
            if !sizes.is_empty() {
                out.cells.insert(p, Cell { mult: f.mult * g.mult, sizes });
            }
        }
        Ok(out)
    }

    /// Keeps the inputs whose equality pattern satisfies `keep`.
    pub fn filter_inputs(&self, keep: impl Fn(&[u8]) -> bool) -> Term {
        let mut out = self.clone();
        out.cells.retain(|p, _| keep(&normalize(p[..self.from].iter().map(|b| *b as u32))));
        out
    }

    /// Empty for every large enough class (the parametric reading).
    pub fn is_empty(&self) -> bool {
        !self.cells.values().any(|c| c.sizes.in_limit())
    }

    pub fn is_empty_at(&self, n: u32) -> bool {
        !self.cells.values().any(|c| c.sizes.contains(n))
    }

    /// `self <= other` pointwise (multisets) or `self ⊆ other` (sets).
    pub fn is_included(&self, other: &Term) -> Result<bool, CalculusError> {
        Ok(self.difference(other)?.is_empty())
    }

    /// Semantic equality for large classes.
    pub fn equivalent(&self, other: &Term) -> Result<bool, CalculusError> {
        Ok(self.is_included(other)? && other.is_included(self)?)
    }

    pub fn max_multiplicity(&self) -> u64 {
        self.cells.values().map(|c| c.mult).max().unwrap_or(0)
    }

    /// `f(x)(y)` at class size `n`; colours are indices below `n`.
    pub fn eval(&self, x: &[u32], y: &[u32], n: u32) -> u64 {
        assert_eq!((x.len(), y.len()), (self.from, self.to), "arity");
        let p = normalize(x.iter().chain(y).copied());
        match self.cells.get(&p) {
            Some(c) if c.sizes.contains(n) => c.mult,
            _ => 0,
        }
    }

    /// Cells present for large classes, with their limit multiplicity.
    pub fn limit_cells(&self) -> impl Iterator<Item = (&Vec<u8>, u64)> + '_ {
        self.cells.iter().filter(|(_, c)| c.sizes.in_limit()).map(|(p, c)| (p, c.mult))
    }

    /// Some pattern in [`Term::limit_cells`] missing from `other`'s limit, if any.
    pub fn witness_against(&self, other: &Term) -> Option<Vec<u8>> {
        let d = self.difference(other).ok()?;
        let p = d.limit_cells().next().map(|(p, _)| p.clone());
        p
    }
}
