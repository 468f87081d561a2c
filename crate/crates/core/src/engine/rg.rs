use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::model::{Marking, Net};

use super::{enabled_instances, fire_unchecked, EngineError, Enumeration, Instance};

/// Check run on every new state; an `Err` aborts construction.
pub type Invariant = Arc<dyn Fn(&Net, &Marking) -> Result<(), String> + Send + Sync>;

#[derive(Clone)]
pub struct RgOptions {
    /// Maximum number of states; further states are dropped and the result is
    /// flagged as truncated.
    pub cap: usize,
    /// Worker threads; 0 uses the rayon default, 1 runs sequentially.
    pub workers: usize,
    pub enumeration: Enumeration,
    pub invariant: Option<Invariant>,
}

impl Default for RgOptions {
    fn default() -> Self {
        RgOptions { cap: 1_000_000, workers: 0, enumeration: Enumeration::Matching, invariant: None }
    }
}

impl fmt::Debug for RgOptions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RgOptions")
            .field("cap", &self.cap)
            .field("workers", &self.workers)
            .field("enumeration", &self.enumeration)
            .field("invariant", &self.invariant.is_some())
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgEdge {
    pub source: usize,
    pub instance: Instance,
    pub target: usize,
}

/// States are numbered in BFS discovery order; state 0 is the initial one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachabilityGraph {
    pub states: Vec<Marking>,
    pub edges: Vec<RgEdge>,
    /// `dead[s]` is true when no instance is enabled in state `s`.
    pub dead: Vec<bool>,
    pub truncated: bool,
}

impl ReachabilityGraph {
    pub fn initial(&self) -> usize {
        0
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn dead_states(&self) -> Vec<usize> {
        (0..self.states.len()).filter(|s| self.dead[*s]).collect()
    }

    pub fn successors(&self, s: usize) -> impl Iterator<Item = &RgEdge> + '_ {
        self.edges.iter().filter(move |e| e.source == s)
    }

    pub fn index_of(&self, m: &Marking) -> Option<usize> {
        self.states.iter().position(|x| x == m)
    }
}

type Expansion = Result<Vec<(Instance, Marking)>, EngineError>;

fn expand(net: &Net, m: &Marking, mode: Enumeration) -> Expansion {
    enabled_instances(net, m, mode)?
        .into_iter()
        .map(|i| {
            let next = fire_unchecked(net, m, &i)?;
            Ok((i, next))
        })
        .collect()
}

/// Breadth-first construction. Each level is expanded in parallel and merged
/// in frontier order, so the numbering does not depend on `workers`.
pub fn build_rg(net: &Net, m0: &Marking, options: &RgOptions) -> Result<ReachabilityGraph, EngineError> {
    let pool = match options.workers {
        0 | 1 => None,
        n => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| EngineError::Invariant { state: String::new(), message: e.to_string() })?,
        ),
    };
    let check = |m: &Marking| -> Result<(), EngineError> {
        match &options.invariant {
            Some(f) => f(net, m).map_err(|message| EngineError::Invariant { state: m.display(net), message }),
            None => Ok(()),
        }
    };
    check(m0)?;
    let mut rg = ReachabilityGraph { states: vec![m0.clone()], edges: Vec::new(), dead: vec![false], truncated: false };
    let mut index: HashMap<Marking, usize> = HashMap::from([(m0.clone(), 0)]);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let states = &rg.states;
        let par = || frontier.par_iter().map(|s| expand(net, &states[*s], options.enumeration)).collect();
        let expansions: Vec<Expansion> = match &pool {
            _ if options.workers == 1 || frontier.len() == 1 => {
                frontier.iter().map(|s| expand(net, &states[*s], options.enumeration)).collect()
            }
            Some(pool) => pool.install(par),
            None => par(),
        };
        let mut next = Vec::new();
        for (s, succ) in frontier.iter().zip(expansions) {
            let succ = succ?;
            rg.dead[*s] = succ.is_empty();
            for (instance, m) in succ {
                let target = match index.get(&m) {
                    Some(t) => *t,
                    None => {
                        if rg.states.len() >= options.cap {
                            rg.truncated = true;
                            continue;
                        }
                        check(&m)?;
                        let t = rg.states.len();
                        index.insert(m.clone(), t);
                        rg.states.push(m);
                        rg.dead.push(false);
                        next.push(t);
                        t
                    }
                };
                rg.edges.push(RgEdge { source: *s, instance, target });
            }
        }
        frontier = next;
    }
    Ok(rg)
}
