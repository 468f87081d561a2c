use crate::gts::GraphPlaces;
use crate::model::{ArcFunction, ArcKind, ClassFunction, FunctionTuple, Guard, Net, TransitionId};

use super::{Calculus, CalculusError, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionResult {
    /// 1 to 6.
    pub number: u8,
    pub holds: bool,
    /// A violating binding and token, e.g. `R1(nd1,nd2,nd1) <nd1,nd1>`.
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellDefinedness {
    pub rule: String,
    pub conditions: Vec<ConditionResult>,
    /// Nodes incident to new edges that do not exist yet.
    pub na: Term,
    pub na_text: String,
}

impl WellDefinedness {
    pub fn passes(&self) -> bool {
        self.conditions.iter().all(|c| c.holds)
    }

    pub fn failed(&self) -> Vec<u8> {
        self.conditions.iter().filter(|c| !c.holds).map(|c| c.number).collect()
    }
}

fn tuple(cs: Vec<ClassFunction>) -> ArcFunction {
    ArcFunction::tuple(FunctionTuple::new(cs))
}

/// Checks conditions 1-6 for a rule over places Node and Edge.
pub fn check_well_defined(net: &Net, t: TransitionId) -> Result<WellDefinedness, CalculusError> {
    let calc = Calculus::new(net)?;
    let gp = GraphPlaces::of(net).map_err(|_| CalculusError::Unsupported("net lacks places Node and Edge".into()))?;
    for (_, p, _) in net.arcs_of(t) {
        if p != gp.node && p != gp.edge {
            return Err(CalculusError::ForeignPlace(net.place(p).name.clone()));
        }
    }
    let k = net.transition(t).vars.len();
    let (node, edge) = (gp.node, gp.edge);
    let arc = |kind, p| calc.arc_term(kind, p, t);
    let constant = |f: ArcFunction, from: usize, to: usize| Term::from_arc(&f, from, to, &Guard::True);

    let all2 = constant(tuple(vec![ClassFunction::all(), ClassFunction::all()]), k, 2)?;
    let all1 = constant(tuple(vec![ClassFunction::all()]), k, 1)?;
    let ends = constant(
        tuple(vec![ClassFunction { terms: vec![(1, crate::model::Elem::Proj(0)), (1, crate::model::Elem::Proj(1))] }]),
        2,
        1,
    )?;
    let incident = constant(
        tuple(vec![ClassFunction::all_but(&[0]), ClassFunction::proj(0)])
            .plus(tuple(vec![ClassFunction::proj(0), ClassFunction::all()])),
        1,
        2,
    )?;

    // bindings some graph encoding can enable come first
    let viable = calc.viable_inputs(t)?;
    let inputs = [arc(ArcKind::Input, node)?, arc(ArcKind::Input, edge)?];
    let on_graphs = |x: &[u8]| {
        viable.contains(x) && inputs.iter().all(|i| i.cells.iter().all(|(q, c)| &q[..k] != x || c.mult <= 1))
    };
    let witness = |lhs: &Term, rhs: &Term| -> Result<Option<String>, CalculusError> {
        let d = lhs.difference(rhs)?;
        let p = d.limit_cells().map(|(p, _)| p).find(|p| on_graphs(&p[..k])).or(d.limit_cells().map(|(p, _)| p).next()).cloned();
        Ok(p.map(|p| {
            let (x, y) = calc.instantiate(lhs.from, &p);
            format!("{}({}) {}", net.transition(t).name, x, y)
        }))
    };
    let mut conditions = Vec::new();
    let mut record = |number: u8, w: Option<String>| {
        conditions.push(ConditionResult { number, holds: w.is_none(), witness: w });
    };

    let h_edge = arc(ArcKind::Inhibitor, edge)?;
    let h_node = arc(ArcKind::Inhibitor, node)?;
    let w1 = witness(&h_edge, &all2)?.or(witness(&h_node, &all1)?);
    record(1, w1);

    let wp_edge = calc.w_plus(edge, t)?;
    record(2, witness(&wp_edge, &all2)?);

    record(3, witness(&calc.w_plus(node, t)?, &h_node)?);

    let added = ends.compose(&arc(ArcKind::Output, edge)?)?;
    let kept = ends.compose(&arc(ArcKind::Input, edge)?)?;
    let na = added.difference(&kept)?.difference(&arc(ArcKind::Input, node)?.support())?;
    record(4, witness(&na, &arc(ArcKind::Output, node)?.support())?);

    let all1s = all1.support();
    let exempt = na.product(&all1s)?.sum(&all1s.product(&na)?)?;
    let new_edges = wp_edge.support().difference(&exempt)?;
    record(5, witness(&new_edges, &h_edge.support())?);

    let touching = incident.compose(&calc.w_minus(node, t)?)?;
    let orphaned = touching.difference(&calc.w_minus(edge, t)?.support())?;
    record(6, witness(&orphaned, &h_edge.support())?);

    Ok(WellDefinedness {
        rule: net.transition(t).name.clone(),
        conditions,
        na_text: calc.print_within(&na, &net.transition(t).guard),
        na,
    })
}
