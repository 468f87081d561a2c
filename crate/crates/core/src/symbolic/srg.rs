use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::engine::{enabled_instances, fire, EngineError, Instance, RgOptions};
use crate::model::{Marking, Net, TransitionId};

use super::{canonicalize, canonicalize_with_binding, SymbolicError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SrgEdge {
    pub source: usize,
    /// Least ordinary instance of the folded group, in the source
    /// representative.
    pub instance: Instance,
    pub target: usize,
    /// Ordinary instances of the source representative folded into this edge.
    pub fold: usize,
}

/// Quotient of the reachability graph by colour permutations; states are
/// canonical representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicGraph {
    pub states: Vec<Marking>,
    pub edges: Vec<SrgEdge>,
    pub dead: Vec<bool>,
    pub truncated: bool,
}

impl SymbolicGraph {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn dead_states(&self) -> Vec<usize> {
        (0..self.states.len()).filter(|s| self.dead[*s]).collect()
    }

    pub fn index_of(&self, m: &Marking) -> Option<usize> {
        self.states.iter().position(|x| x == m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SrgError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

type Expansion = Result<Vec<(Instance, Marking, usize)>, SrgError>;

fn expand(net: &Net, m: &Marking, options: &RgOptions) -> Expansion {
    let mut groups: BTreeMap<(TransitionId, Marking, Vec<crate::bag::Colour>), (Instance, usize)> = BTreeMap::new();
    for i in enabled_instances(net, m, options.enumeration)? {
        let key = canonicalize_with_binding(net, m, &i.binding)?;
        groups.entry((i.transition, key.0, key.1)).and_modify(|g| g.1 += 1).or_insert((i, 1));
    }
    let mut out: Vec<(Instance, Marking, usize)> = Vec::with_capacity(groups.len());
    for (_, (i, fold)) in groups {
        let next = fire(net, m, &i)?;
        out.push((i, canonicalize(net, &next)?.marking, fold));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Breadth-first construction over canonical representatives, starting from
/// the representative of `m0`. Same determinism contract as
/// [`crate::engine::build_rg`].
pub fn build_srg(net: &Net, m0: &Marking, options: &RgOptions) -> Result<SymbolicGraph, SrgError> {
    let check = |m: &Marking| -> Result<(), SrgError> {
        match &options.invariant {
            Some(f) => f(net, m)
                .map_err(|message| SrgError::Engine(EngineError::Invariant { state: m.display(net), message })),
            None => Ok(()),
        }
    };
    let pool = match options.workers {
        0 | 1 => None,
        n => Some(rayon::ThreadPoolBuilder::new().num_threads(n).build().map_err(|e| {
            SrgError::Engine(EngineError::Invariant { state: String::new(), message: e.to_string() })
        })?),
    };
    let start = canonicalize(net, m0)?.marking;
    check(&start)?;
    let mut g = SymbolicGraph { states: vec![start.clone()], edges: Vec::new(), dead: vec![false], truncated: false };
    let mut index: HashMap<Marking, usize> = HashMap::from([(start, 0)]);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let states = &g.states;
        let par = || frontier.par_iter().map(|s| expand(net, &states[*s], options)).collect();
        let expansions: Vec<Expansion> = match &pool {
            _ if options.workers == 1 || frontier.len() == 1 => {
                frontier.iter().map(|s| expand(net, &states[*s], options)).collect()
            }
            Some(pool) => pool.install(par),
            None => par(),
        };
        let mut next = Vec::new();
        for (s, succ) in frontier.iter().zip(expansions) {
            let succ = succ?;
            g.dead[*s] = succ.is_empty();
            for (instance, m, fold) in succ {
                let target = match index.get(&m) {
                    Some(t) => *t,
                    None => {
                        if g.states.len() >= options.cap {
                            g.truncated = true;
                            continue;
                        }
                        check(&m)?;
                        let t = g.states.len();
                        index.insert(m.clone(), t);
                        g.states.push(m);
                        g.dead.push(false);
                        next.push(t);
                        t
                    }
                };
                g.edges.push(SrgEdge { source: *s, instance, target, fold });
            }
        }
        frontier = next;
    }
    Ok(g)
}
