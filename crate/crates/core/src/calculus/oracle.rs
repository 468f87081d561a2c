//! Brute-force evaluation of calculus expressions on a concrete class size,
//! through the ordinary arc-function semantics and finite bag functions.

use std::collections::{BTreeMap, BTreeSet};

use crate::bag::{Bag, BagFn, ClassId, Colour, Domain};
use crate::model::{ArcFunction, ArcKind, ColourClass, Guard, Net, TransitionId};

use super::term::{Term, TermKind};
use super::{CalculusError, RelationKind};

/// Expression tree over calculus operators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermExpr {
    /// Arc function from `from` variables into tuples of arity `to`, domain
    /// restricted by `guard`.
    Arc { f: ArcFunction, from: usize, to: usize, guard: Guard },
    Identity(usize),
    Support(Box<TermExpr>),
    Transpose(Box<TermExpr>),
    Sum(Box<TermExpr>, Box<TermExpr>),
    Difference(Box<TermExpr>, Box<TermExpr>),
    /// `Compose(g, f)` is `g ∘ f`.
    Compose(Box<TermExpr>, Box<TermExpr>),
    Product(Box<TermExpr>, Box<TermExpr>),
}

/// Concrete value of an expression: a finite bag function, set-valued or not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub function: BagFn,
    pub kind: TermKind,
}

const N: ClassId = ClassId(0);

fn domain(k: usize) -> Domain {
    Domain(vec![N; k])
}

/// All tuples of length `k` over `0..n`.
pub fn tuples(k: usize, n: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |c| {
                    let mut t = t.clone();
                    t.push(c);
                    t
                })
            })
            .collect();
    }
    out
}

fn colours(t: &[u32]) -> Vec<Colour> {
    t.iter().map(|i| Colour::new(N, *i)).collect()
}

impl TermExpr {
    pub fn arc(f: ArcFunction, from: usize, to: usize) -> TermExpr {
        TermExpr::Arc { f, from, to, guard: Guard::True }
    }

    pub fn support(self) -> TermExpr {
        TermExpr::Support(Box::new(self))
    }

    pub fn transpose(self) -> TermExpr {
        TermExpr::Transpose(Box::new(self))
    }

    pub fn sum(self, o: TermExpr) -> TermExpr {
        TermExpr::Sum(Box::new(self), Box::new(o))
    }

    pub fn difference(self, o: TermExpr) -> TermExpr {
        TermExpr::Difference(Box::new(self), Box::new(o))
    }

    pub fn compose(self, inner: TermExpr) -> TermExpr {
        TermExpr::Compose(Box::new(self), Box::new(inner))
    }

    pub fn product(self, o: TermExpr) -> TermExpr {
        TermExpr::Product(Box::new(self), Box::new(o))
    }

    /// `(from, to)` arities.
    pub fn signature(&self) -> (usize, usize) {
        match self {
            TermExpr::Arc { from, to, .. } => (*from, *to),
            TermExpr::Identity(k) => (*k, *k),
            TermExpr::Support(e) => e.signature(),
            TermExpr::Transpose(e) => {
                let (a, b) = e.signature();
                (b, a)
            }
            TermExpr::Sum(a, _) | TermExpr::Difference(a, _) => a.signature(),
            TermExpr::Compose(g, f) => (f.signature().0, g.signature().1),
            TermExpr::Product(a, b) => (a.signature().0, a.signature().1 + b.signature().1),
        }
    }

    /// Largest number of colour positions any subterm relates at once.
    pub fn width(&self) -> usize {
        let (a, b) = self.signature();
        let own = match self {
            TermExpr::Compose(g, f) => f.signature().0 + f.signature().1 + g.signature().1,
            _ => a + b,
        };
        let sub = match self {
            TermExpr::Arc { .. } | TermExpr::Identity(_) => 0,
            TermExpr::Support(e) | TermExpr::Transpose(e) => e.width(),
            TermExpr::Sum(x, y) | TermExpr::Difference(x, y) | TermExpr::Compose(x, y) | TermExpr::Product(x, y) => {
                x.width().max(y.width())
            }
        };
        own.max(sub)
    }

    /// Class size at which emptiness and inclusion are decided by the oracle.
    pub fn size_rule(&self) -> u32 {
        self.width() as u32 + 2
    }

    /// Normal form through the symbolic operators.
    pub fn normalize(&self) -> Result<Term, CalculusError> {
        Ok(match self {
            TermExpr::Arc { f, from, to, guard } => Term::from_arc(f, *from, *to, guard)?,
            TermExpr::Identity(k) => Term::identity(*k),
            TermExpr::Support(e) => e.normalize()?.support(),
            TermExpr::Transpose(e) => e.normalize()?.transpose(),
            TermExpr::Sum(a, b) => a.normalize()?.sum(&b.normalize()?)?,
            TermExpr::Difference(a, b) => a.normalize()?.difference(&b.normalize()?)?,
            TermExpr::Compose(g, f) => g.normalize()?.compose(&f.normalize()?)?,
            TermExpr::Product(a, b) => a.normalize()?.product(&b.normalize()?)?,
        })
    }

    /// Exhaustive evaluation at class size `n`.
    pub fn oracle(&self, n: u32) -> Result<Table, CalculusError> {
        let bag = |e: crate::bag::BagError| CalculusError::Model(e.into());
        let (from, to) = self.signature();
        Ok(match self {
            TermExpr::Arc { f, guard, .. } => {
                let classes = vec![ColourClass::new("N", n)];
                let mut function = BagFn::null(domain(from), domain(to));
                for x in tuples(from, n) {
                    let b = colours(&x);
                    if !guard.eval(&b, &classes)? {
                        continue;
                    }
                    function.set(b.clone(), f.eval(&domain(to), &classes, &b)?).map_err(bag)?;
                }
                Table { function, kind: TermKind::Multiset }
            }
            TermExpr::Identity(k) => {
                let mut function = BagFn::null(domain(*k), domain(*k));
                for x in tuples(*k, n) {
                    let b = colours(&x);
                    function.set(b.clone(), Bag::from_entries(domain(*k), [(b, 1)]).map_err(bag)?).map_err(bag)?;
                }
                Table { function, kind: TermKind::Set }
            }
            TermExpr::Support(e) => Table { function: e.oracle(n)?.function.support(), kind: TermKind::Set },
            TermExpr::Transpose(e) => {
                let t = e.oracle(n)?;
                Table { function: t.function.transpose(), kind: t.kind }
            }
            TermExpr::Sum(a, b) | TermExpr::Difference(a, b) | TermExpr::Product(a, b) => {
                let (x, y) = (a.oracle(n)?, b.oracle(n)?);
                if x.kind != y.kind {
                    return Err(CalculusError::KindMismatch);
                }
                let function = match (self, x.kind) {
                    (TermExpr::Sum(..), TermKind::Multiset) => x.function.sum(&y.function),
                    (TermExpr::Sum(..), TermKind::Set) => x.function.union(&y.function),
                    (TermExpr::Difference(..), _) => x.function.difference(&y.function),
                    _ => x.function.product(&y.function),
                }
                .map_err(bag)?;
                Table { function, kind: x.kind }
            }
            TermExpr::Compose(g, f) => {
                let (g, f) = (g.oracle(n)?, f.oracle(n)?);
                let function = g.function.support().compose(&f.function.support()).map_err(bag)?.support();
                Table { function, kind: TermKind::Set }
            }
        })
    }
}

impl Table {
    pub fn get(&self, x: &[u32], y: &[u32]) -> u64 {
        self.function.apply(&colours(x)).get(&colours(y))
    }

    pub fn is_empty(&self) -> bool {
        self.function.is_null()
    }
}

/// First point where `term` and the oracle table disagree at size `n`, as
/// `(x, y, oracle, symbolic)`.
pub fn disagreement(term: &Term, table: &Table, n: u32) -> Option<(Vec<u32>, Vec<u32>, u64, u64)> {
    for x in tuples(term.from, n) {
        for y in tuples(term.to, n) {
            let (want, got) = (table.get(&x, &y), term.eval(&x, &y, n));
            if want != got {
                return Some((x, y, want, got));
            }
        }
    }
    None
}

/// Instances of `t2` to the instances of `t` they are related to, computed
/// from the concrete arc functions of `net`. Every valid instance of `t2`
/// appears as a key.
pub fn relation_oracle(
    net: &Net,
    kind: RelationKind,
    t: TransitionId,
    t2: TransitionId,
) -> Result<BTreeMap<Vec<Colour>, BTreeSet<Vec<Colour>>>, CalculusError> {
    let valid = |tr: TransitionId| -> Result<Vec<Vec<Colour>>, CalculusError> {
        let mut out = Vec::new();
        for b in net.bindings(tr) {
            if net.valid(tr, &b)? {
                out.push(b);
            }
        }
        Ok(out)
    };
    let bag = |e: crate::bag::BagError| CalculusError::Model(e.into());
    let arc = |k: ArcKind, p, tr, b: &[Colour]| net.eval_arc(k, p, tr, b);
    // (withdrawn, added, input, inhibitor) supports per place
    let sides = |tr: TransitionId, b: &[Colour]| -> Result<Vec<[Bag; 4]>, CalculusError> {
        let mut out = Vec::new();
        for p in net.place_ids() {
            let (i, o, h) = (arc(ArcKind::Input, p, tr, b)?, arc(ArcKind::Output, p, tr, b)?, arc(ArcKind::Inhibitor, p, tr, b)?);
            out.push([i.difference(&o).map_err(bag)?.support(), o.difference(&i).map_err(bag)?.support(), i.support(), h.support()]);
        }
        Ok(out)
    };
    let meets = |a: &Bag, b: &Bag| a.iter().any(|(x, _)| b.get(x) > 0);
    let xs: Vec<(Vec<Colour>, Vec<[Bag; 4]>)> =
        valid(t)?.into_iter().map(|x| sides(t, &x).map(|s| (x, s))).collect::<Result<_, _>>()?;
    let mut out = BTreeMap::new();
    for y in valid(t2)? {
        let sy = sides(t2, &y)?;
        let mut related = BTreeSet::new();
        for (x, sx) in &xs {
            if kind == RelationKind::Sc && t == t2 && *x == y {
                continue;
            }
            let hit = sx.iter().zip(&sy).any(|(a, b)| match kind {
                RelationKind::Sc => meets(&a[0], &b[2]) || meets(&a[1], &b[3]),
                RelationKind::Scc => meets(&a[1], &b[2]) || meets(&a[0], &b[3]),
                RelationKind::Sme => meets(&a[2], &b[3]) || meets(&a[3], &b[2]),
            });
            if hit {
                related.insert(x.clone());
            }
        }
        out.insert(y, related);
    }
    Ok(out)
}
