use std::fmt;
use std::sync::Arc;

use crate::calculus::{check_well_defined, Calculus, CalculusError, WellDefinedness};
use crate::engine::{Invariant, RgOptions};
use crate::frontend::{parse_model, Model, ParseError};
use crate::model::{ArcKind, Marking, Net, TransitionId};

use super::{check_encoding, encode, rules, Graph, GraphError, GraphPlaces};

/// A rewriting rule as DSL text: one `trans` and its arcs on `Node`/`Edge`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub name: String,
    pub source: String,
}

impl Rule {
    pub fn custom(name: &str, source: &str) -> Rule {
        Rule { name: name.into(), source: source.into() }
    }
}

/// One of the bundled rules `R1`..`R6`.
pub fn builtin_rule(name: &str) -> Option<Rule> {
    rules::rule_source(name).map(|s| Rule::custom(name, s))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GtsModel {
    pub rules: Vec<Rule>,
    /// `|N|`.
    pub class_size: u32,
    pub initial: Graph,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assembled {
    pub model: Model,
    pub reports: Vec<WellDefinedness>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GtsError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error("rule {0} neither withdraws nor adds anything")]
    NullRule(String),
    #[error("ill-defined rules:\n{}", IllDefined(.0))]
    IllDefined(Vec<WellDefinedness>),
}

struct IllDefined<'a>(&'a [WellDefinedness]);

impl fmt::Display for IllDefined<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.0.iter().filter(|r| !r.passes()) {
            for c in r.conditions.iter().filter(|c| !c.holds) {
                writeln!(f, "  {} condition {}: {}", r.rule, c.number, c.witness.as_deref().unwrap_or("-"))?;
            }
        }
        Ok(())
    }
}

/// Shares `Node` and `Edge` among the rules and encodes the initial graph.
pub fn assemble(gts: &GtsModel) -> Result<Assembled, GtsError> {
    let mut text = format!("class N = {};\nplace Node : N;\nplace Edge : N*N;\n", gts.class_size);
    for r in &gts.rules {
        text.push_str(&r.source);
        text.push('\n');
    }
    let mut model = parse_model(&text)?;
    model.initial = encode(&model.net, &gts.initial)?;
    for t in model.net.transition_ids() {
        if is_null_rule(&model.net, t)? {
            return Err(GtsError::NullRule(model.net.transition(t).name.clone()));
        }
    }
    let reports = check_rules(&model.net)?;
    if reports.iter().any(|r| !r.passes()) {
        return Err(GtsError::IllDefined(reports));
    }
    let warnings = lint(&model.net, &model.initial)?;
    Ok(Assembled { model, reports, warnings })
}

/// Conditions 1-6 for every transition.
pub fn check_rules(net: &Net) -> Result<Vec<WellDefinedness>, CalculusError> {
    net.transition_ids().map(|t| check_well_defined(net, t)).collect()
}

fn is_null_rule(net: &Net, t: TransitionId) -> Result<bool, CalculusError> {
    let calc = Calculus::new(net)?;
    for p in net.place_ids() {
        if !calc.w_minus(p, t)?.is_empty() || !calc.w_plus(p, t)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Load-time warnings: too little room in `N` for node-creating rules, and
/// input arcs demanding a token twice, which no graph encoding can satisfy.
pub fn lint(net: &Net, initial: &Marking) -> Result<Vec<String>, CalculusError> {
    let calc = Calculus::new(net)?;
    let mut out = Vec::new();
    let gp = GraphPlaces::of(net).map_err(|_| CalculusError::Unsupported("net lacks places Node and Edge".into()))?;
    let mut growth = Vec::new();
    for t in net.transition_ids() {
        let name = &net.transition(t).name;
        if !calc.w_plus(gp.node, t)?.is_empty() {
            growth.push(name.clone());
        }
        let viable = calc.viable_inputs(t)?;
        let k = net.transition(t).vars.len();
        for p in [gp.node, gp.edge] {
            let m = calc.arc_term(ArcKind::Input, p, t)?.filter_inputs(|x| viable.contains(&x[..k])).max_multiplicity();
            if m > 1 {
                out.push(format!(
                    "{}: input from {} reaches multiplicity {}; such instances never fire on a graph",
                    name,
                    net.place(p).name,
                    m
                ));
            }
        }
    }
    let size = net.class(gp.class).size as usize;
    let nodes = initial.get(gp.node).support_len();
    if !growth.is_empty() && size < 2 * nodes.max(1) {
        out.push(format!(
            "class {} has {} colours for {} initial nodes; {} stop adding nodes once it is exhausted",
            net.class(gp.class).name,
            size,
            nodes,
            growth.join(", ")
        ));
    }
    Ok(out)
}

/// [`check_encoding`] as a reachability-graph invariant.
pub fn encoding_invariant() -> Invariant {
    Arc::new(|net: &Net, m: &Marking| check_encoding(net, m).map_err(|e| e.to_string()))
}

/// Default options; debug builds check every state is a graph encoding.
pub fn rg_options() -> RgOptions {
    RgOptions { invariant: cfg!(debug_assertions).then(encoding_invariant), ..RgOptions::default() }
}
