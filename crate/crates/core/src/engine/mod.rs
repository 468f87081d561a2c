//! Enabling, firing and reachability-graph construction.

mod rg;

pub use rg::{build_rg, Invariant, ReachabilityGraph, RgEdge, RgOptions};

use crate::bag::{BagError, Colour, ColourNames};
use crate::model::{ArcKind, Elem, Marking, ModelError, Net, TransitionId};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Instance {
    pub transition: TransitionId,
    pub binding: Vec<Colour>,
}

impl Instance {
    pub fn new(transition: TransitionId, binding: Vec<Colour>) -> Self {
        Instance { transition, binding }
    }

    /// `R1(nd4,nd1,nd2)`
    pub fn label(&self, net: &Net) -> String {
        net.instance_label(self.transition, &self.binding)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("{0} is not enabled")]
    Disabled(String),
    #[error("{0} does not satisfy its guard")]
    InvalidBinding(String),
    #[error("invariant violated in state {state}: {message}")]
    Invariant { state: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Bag(#[from] BagError),
}

/// How candidate bindings are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Enumeration {
    /// Backtracking over colours found in the marking, pruned by input tuples
    /// made of plain projections.
    #[default]
    Matching,
    /// Every binding of the colour domain.
    Exhaustive,
}

/// Both enabling conditions: the input bags are covered and every colour the
/// inhibitor weighs is held with strictly smaller multiplicity. A guard
/// violation makes the instance disabled.
pub fn enabled(net: &Net, m: &Marking, i: &Instance) -> Result<bool, EngineError> {
    if !net.valid(i.transition, &i.binding)? {
        return Ok(false);
    }
    for p in net.place_ids() {
        let input = net.eval_arc(ArcKind::Input, p, i.transition, &i.binding)?;
        if !input.leq(m.get(p))? {
            return Ok(false);
        }
        let inh = net.eval_arc(ArcKind::Inhibitor, p, i.transition, &i.binding)?;
        if inh.iter().any(|(x, h)| h <= m.get(p).get(x)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `m - In(b) + Out(b)` for an enabled instance.
pub fn fire(net: &Net, m: &Marking, i: &Instance) -> Result<Marking, EngineError> {
    if !net.valid(i.transition, &i.binding)? {
        return Err(EngineError::InvalidBinding(i.label(net)));
    }
    if !enabled(net, m, i)? {
        return Err(EngineError::Disabled(i.label(net)));
    }
    fire_unchecked(net, m, i)
}

pub(crate) fn fire_unchecked(net: &Net, m: &Marking, i: &Instance) -> Result<Marking, EngineError> {
    let mut out = m.clone();
    for p in net.place_ids() {
        let input = net.eval_arc(ArcKind::Input, p, i.transition, &i.binding)?;
        let output = net.eval_arc(ArcKind::Output, p, i.transition, &i.binding)?;
        if input.is_empty() && output.is_empty() {
            continue;
        }
        out.set(p, m.get(p).difference(&input)?.sum(&output)?);
    }
    Ok(out)
}

/// Enabled instances in transition order, bindings in lexicographic order.
pub fn enabled_instances(net: &Net, m: &Marking, mode: Enumeration) -> Result<Vec<Instance>, EngineError> {
    let mut out = Vec::new();
    for t in net.transition_ids() {
        match mode {
            Enumeration::Exhaustive => {
                for b in net.bindings(t) {
                    let i = Instance::new(t, b);
                    if enabled(net, m, &i)? {
                        out.push(i);
                    }
                }
            }
            Enumeration::Matching => Matcher::new(net, m, t).run(&mut out)?,
        }
    }
    Ok(out)
}

/// A position constraint from an input tuple of plain projections: the
/// projected tuple must occur in `place`.
struct Pattern<'a> {
    vars: Vec<usize>,
    bag: &'a crate::bag::Bag,
    ready_at: usize,
}

struct Matcher<'a> {
    net: &'a Net,
    m: &'a Marking,
    t: TransitionId,
    candidates: Vec<Vec<Colour>>,
    patterns: Vec<Pattern<'a>>,
}

impl<'a> Matcher<'a> {
    fn new(net: &'a Net, m: &'a Marking, t: TransitionId) -> Self {
        let tr = net.transition(t);
        let mut candidates: Vec<Option<Vec<Colour>>> = vec![None; tr.vars.len()];
        let mut patterns = Vec::new();
        for (kind, p, f) in net.arcs_of(t) {
            if kind != ArcKind::Input {
                continue;
            }
            for (lambda, tuple) in &f.terms {
                if *lambda == 0 || tuple.filter.is_some() || tuple.cofilter.is_some() {
                    continue;
                }
                let vars: Option<Vec<usize>> = tuple
                    .components
                    .iter()
                    .map(|c| match c.terms.as_slice() {
                        [(1, Elem::Proj(v))] => Some(*v),
                        _ => None,
                    })
                    .collect();
                let Some(vars) = vars else { continue };
                let bag = m.get(p);
                for (pos, v) in vars.iter().enumerate() {
                    let mut seen: Vec<Colour> = bag.iter().map(|(x, _)| x[pos]).collect();
                    seen.sort();
                    seen.dedup();
                    let slot = &mut candidates[*v];
                    *slot = Some(match slot.take() {
                        None => seen,
                        Some(prev) => prev.into_iter().filter(|c| seen.binary_search(c).is_ok()).collect(),
                    });
                }
                let ready_at = *vars.iter().max().expect("non-empty domain");
                patterns.push(Pattern { vars, bag, ready_at });
            }
        }
        let candidates = candidates
            .into_iter()
            .zip(&tr.vars)
            .map(|(c, v)| {
                c.unwrap_or_else(|| (0..net.class(v.class).size).map(|i| Colour::new(v.class, i)).collect())
            })
            .collect();
        Matcher { net, m, t, candidates, patterns }
    }

    fn run(&self, out: &mut Vec<Instance>) -> Result<(), EngineError> {
        let mut binding = Vec::with_capacity(self.candidates.len());
        self.extend(&mut binding, out)
    }

    fn extend(&self, binding: &mut Vec<Colour>, out: &mut Vec<Instance>) -> Result<(), EngineError> {
        let j = binding.len();
        if j == self.candidates.len() {
            let i = Instance::new(self.t, binding.clone());
            if enabled(self.net, self.m, &i)? {
                out.push(i);
            }
            return Ok(());
        }
        for c in &self.candidates[j] {
            binding.push(*c);
            let ok = self.patterns.iter().filter(|p| p.ready_at == j).all(|p| {
                let x: Vec<Colour> = p.vars.iter().map(|v| binding[*v]).collect();
                p.bag.get(&x) > 0
            });
            if ok {
                self.extend(binding, out)?;
            }
            binding.pop();
        }
        Ok(())
    }
}

/// Human-readable colour list, e.g. `nd4,nd1,nd2`.
pub fn binding_text(net: &Net, binding: &[Colour]) -> String {
    binding.iter().map(|c| net.colour_name(*c)).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests;
