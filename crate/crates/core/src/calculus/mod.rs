//! Symbolic structural calculus on arc functions over one unordered,
//! unpartitioned class: transpose, support, sum, difference, composition,
//! structural relations and rule well-definedness.
//!
//! Terms are kept in [`Term`]'s partition normal form and printed back as
//! arc-function expressions with positional variables `n1, n2, ...`.

pub mod oracle;
mod print;
mod term;
mod wd;

pub use print::{to_arc, to_arc_within};
pub use term::{blocks, normalize, patterns, Cell, SizeSet, Term, TermKind};
pub use wd::{check_well_defined, ConditionResult, WellDefinedness};

use std::collections::BTreeSet;
use std::fmt;

use crate::bag::{ClassId, Domain};
use crate::frontend::{print_expr, Signature};
use crate::model::{ArcKind, ColourClass, ModelError, Net, PlaceId, TransitionId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CalculusError {
    #[error("outside the calculus fragment: {0}")]
    Unsupported(String),
    #[error("signature mismatch: {0}")]
    Signature(String),
    #[error("cannot mix multiset and set terms")]
    KindMismatch,
    #[error("negative multiplicity at {0}")]
    NegativeCoefficient(String),
    #[error("rule uses place {0}, outside Node and Edge")]
    ForeignPlace(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RelationKind {
    /// Structural conflict.
    Sc,
    /// Structural causal connection.
    Scc,
    /// Structural mutual exclusion.
    Sme,
}

impl RelationKind {
    pub fn name(self) -> &'static str {
        match self {
            RelationKind::Sc => "SC",
            RelationKind::Scc => "SCC",
            RelationKind::Sme => "SME",
        }
    }
}

impl std::str::FromStr for RelationKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "sc" => Ok(RelationKind::Sc),
            "scc" => Ok(RelationKind::Scc),
            "sme" => Ok(RelationKind::Sme),
            _ => Err(format!("unknown relation {}", s)),
        }
    }
}

/// `R(t, t2) : cd(t2) -> 2^cd(t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub kind: RelationKind,
    pub t: TransitionId,
    pub t2: TransitionId,
    pub term: Term,
}

/// Calculus over a net whose places and transitions all use one plain class.
#[derive(Debug, Clone, Copy)]
pub struct Calculus<'a> {
    net: &'a Net,
    class: ClassId,
}

impl<'a> Calculus<'a> {
    pub fn new(net: &'a Net) -> Result<Self, CalculusError> {
        let mut used: BTreeSet<ClassId> = BTreeSet::new();
        for p in net.places() {
            used.extend(p.domain.0.iter().copied());
        }
        for t in net.transitions() {
            used.extend(t.vars.iter().map(|v| v.class));
        }
        for c in &used {
            if !net.class(*c).is_plain() {
                return Err(CalculusError::Unsupported(format!("class {} is ordered or partitioned", net.class(*c).name)));
            }
        }
        if used.len() > 1 {
            return Err(CalculusError::Unsupported("more than one colour class".into()));
        }
        for t in net.transitions() {
            if !t.guard.is_equality_fragment() {
                return Err(CalculusError::Unsupported(format!("guard of {} uses subclass predicates", t.name)));
            }
        }
        Ok(Calculus { net, class: used.into_iter().next().unwrap_or(ClassId(0)) })
    }

    pub fn net(&self) -> &'a Net {
        self.net
    }

    pub fn class(&self) -> ClassId {
        self.class
    }

    fn arity(&self, t: TransitionId) -> usize {
        self.net.transition(t).vars.len()
    }

    /// The arc function of `t` on `p` as a multiset term on `cd(t)`,
    /// restricted to bindings satisfying the guard.
    pub fn arc_term(&self, kind: ArcKind, p: PlaceId, t: TransitionId) -> Result<Term, CalculusError> {
        let tr = self.net.transition(t);
        Term::from_arc(self.net.arc(kind, p, t), tr.vars.len(), self.net.place(p).domain.arity(), &tr.guard)
    }

    /// `Out - In`: tokens added to `p`.
    pub fn w_plus(&self, p: PlaceId, t: TransitionId) -> Result<Term, CalculusError> {
        self.arc_term(ArcKind::Output, p, t)?.difference(&self.arc_term(ArcKind::Input, p, t)?)
    }

    /// `In - Out`: tokens withdrawn from `p`.
    pub fn w_minus(&self, p: PlaceId, t: TransitionId) -> Result<Term, CalculusError> {
        self.arc_term(ArcKind::Input, p, t)?.difference(&self.arc_term(ArcKind::Output, p, t)?)
    }

    /// Colour of `p` to the instances of `t` withdrawing it.
    pub fn removed_by(&self, t: TransitionId, p: PlaceId) -> Result<Term, CalculusError> {
        Ok(self.w_minus(p, t)?.support().transpose())
    }

    /// Colour of `p` to the instances of `t` adding it.
    pub fn added_by(&self, t: TransitionId, p: PlaceId) -> Result<Term, CalculusError> {
        Ok(self.w_plus(p, t)?.support().transpose())
    }

    /// Input patterns of `t` under which some marking enables it: the guard
    /// holds and no inhibitor bound is reached by the input demand itself.
    pub fn viable_inputs(&self, t: TransitionId) -> Result<BTreeSet<Vec<u8>>, CalculusError> {
        let tr = self.net.transition(t);
        let k = tr.vars.len();
        let mut out: BTreeSet<Vec<u8>> =
            patterns(k).into_iter().filter(|x| tr.guard.eval_pattern(x).unwrap_or(false)).collect();
        for p in self.net.place_ids() {
            let h = self.arc_term(ArcKind::Inhibitor, p, t)?;
            let i = self.arc_term(ArcKind::Input, p, t)?;
            for (pat, c) in &h.cells {
                if i.cells.get(pat).map_or(0, |d| d.mult) >= c.mult {
                    out.remove(&normalize(pat[..k].iter().map(|b| *b as u32)));
                }
            }
        }
        Ok(out)
    }

    fn union(&self, acc: Option<Term>, t: Term) -> Result<Option<Term>, CalculusError> {
        Ok(Some(match acc {
            None => t,
            Some(a) => a.sum(&t)?,
        }))
    }

    pub fn relation(&self, kind: RelationKind, t: TransitionId, t2: TransitionId) -> Result<Relation, CalculusError> {
        let (k, k2) = (self.arity(t), self.arity(t2));
        if kind == RelationKind::Sme {
            for (tr, kinds) in [(t, [ArcKind::Input, ArcKind::Inhibitor]), (t2, [ArcKind::Input, ArcKind::Inhibitor])] {
                let viable = self.viable_inputs(tr)?;
                let k = self.arity(tr);
                for p in self.net.place_ids() {
                    for ak in kinds {
                        let m = self.arc_term(ak, p, tr)?.filter_inputs(|x| viable.contains(&x[..k])).max_multiplicity();
                        if m > 1 {
                            return Err(CalculusError::Unsupported(format!(
                                "mutual exclusion needs set-valued input and inhibitor functions; {} arc {} - {} reaches multiplicity {}",
                                crate::frontend::kind_keyword(ak),
                                self.net.place(p).name,
                                self.net.transition(tr).name,
                                m
                            )));
                        }
                    }
                }
            }
        }
        let mut acc: Option<Term> = None;
        for p in self.net.place_ids() {
            let parts = match kind {
                RelationKind::Sc => [
                    self.removed_by(t, p)?.compose(&self.arc_term(ArcKind::Input, p, t2)?.support())?,
                    self.added_by(t, p)?.compose(&self.arc_term(ArcKind::Inhibitor, p, t2)?.support())?,
                ],
                RelationKind::Scc => [
                    self.added_by(t, p)?.compose(&self.arc_term(ArcKind::Input, p, t2)?.support())?,
                    self.removed_by(t, p)?.compose(&self.arc_term(ArcKind::Inhibitor, p, t2)?.support())?,
                ],
                RelationKind::Sme => [
                    self.arc_term(ArcKind::Input, p, t)?
                        .support()
                        .transpose()
                        .compose(&self.arc_term(ArcKind::Inhibitor, p, t2)?.support())?,
                    self.arc_term(ArcKind::Inhibitor, p, t)?
                        .support()
                        .transpose()
                        .compose(&self.arc_term(ArcKind::Input, p, t2)?.support())?,
                ],
            };
            for part in parts {
                acc = self.union(acc, part)?;
            }
        }
        let mut term = acc.unwrap_or_else(|| Term::null(k2, k, TermKind::Set));
        if kind == RelationKind::Sc && t == t2 {
            term = term.difference(&Term::identity(k))?;
        }
        Ok(Relation { kind, t, t2, term })
    }

    pub fn sc(&self, t: TransitionId, t2: TransitionId) -> Result<Relation, CalculusError> {
        self.relation(RelationKind::Sc, t, t2)
    }

    pub fn scc(&self, t: TransitionId, t2: TransitionId) -> Result<Relation, CalculusError> {
        self.relation(RelationKind::Scc, t, t2)
    }

    pub fn sme(&self, t: TransitionId, t2: TransitionId) -> Result<Relation, CalculusError> {
        self.relation(RelationKind::Sme, t, t2)
    }

    /// `r ⊆ r2`, relating the same instances in both.
    pub fn subset(&self, r: &Relation, r2: &Relation) -> Result<bool, CalculusError> {
        r.term.is_included(&r2.term)
    }

    /// Variable names `n1..nk` after the class name.
    pub fn positional_names(&self, k: usize) -> Vec<(String, ClassId)> {
        let stem = self.net.class(self.class).name.to_lowercase();
        (1..=k).map(|i| (format!("{}{}", stem, i), self.class)).collect()
    }

    /// Arc-function syntax of `term`, with positional domain variables.
    pub fn print(&self, term: &Term) -> String {
        self.print_within(term, &crate::model::Guard::True)
    }

    /// As [`Calculus::print`], for a term only meaningful where `context`
    /// holds on its inputs.
    pub fn print_within(&self, term: &Term, context: &crate::model::Guard) -> String {
        let sig = Signature::new(
            self.net.classes(),
            self.positional_names(term.from),
            Domain(vec![self.class; term.to]),
        );
        print_expr(&to_arc_within(term, context), &sig)
    }

    /// One concrete instance of pattern `p` over `from + to` positions:
    /// blocks become the first colours of the class.
    pub fn instantiate(&self, term_from: usize, p: &[u8]) -> (String, String) {
        let cc: &ColourClass = self.net.class(self.class);
        let name = |b: &u8| format!("{}{}", cc.prefix, *b as u32 + 1);
        let x: Vec<String> = p[..term_from].iter().map(name).collect();
        let y: Vec<String> = p[term_from..].iter().map(name).collect();
        (x.join(","), format!("<{}>", y.join(",")))
    }
}

impl Relation {
    pub fn display<'a>(&'a self, calculus: &'a Calculus<'a>) -> RelationDisplay<'a> {
        RelationDisplay { relation: self, calculus }
    }
}

pub struct RelationDisplay<'a> {
    relation: &'a Relation,
    calculus: &'a Calculus<'a>,
}

impl fmt::Display for RelationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let net = self.calculus.net();
        write!(
            f,
            "{}({},{}) = {}",
            self.relation.kind.name(),
            net.transition(self.relation.t).name,
            net.transition(self.relation.t2).name,
            self.calculus.print_within(&self.relation.term, &net.transition(self.relation.t2).guard)
        )
    }
}

#[cfg(test)]
mod tests;
