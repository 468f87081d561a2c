//! Static structure of a Symmetric Net: colour classes, places, transitions,
//! guards and arc functions.

mod expr;
mod guard;

pub use expr::{ArcFunction, ClassFunction, Elem, FunctionTuple};
pub use guard::Guard;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::bag::{Bag, BagError, ClassId, Colour, ColourNames, Domain};

/// Above this many transition instances the negative-coefficient check falls
/// back to a syntactic rule instead of exhaustive evaluation.
pub const NEGATIVE_CHECK_BOUND: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unbound variable #{0}")]
    UnboundVariable(usize),
    #[error("arity mismatch: expected {expected} components, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("class mismatch: {0}")]
    ClassMismatch(String),
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("duplicate definition of `{0}`")]
    Duplicate(String),
    #[error("negative multiplicity: {0}")]
    NegativeMultiplicity(String),
    #[error("invalid colour class: {0}")]
    InvalidClass(String),
    #[error(transparent)]
    Bag(#[from] BagError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColourClass {
    pub name: String,
    pub size: u32,
    /// Static subclasses as `(name, size)`, in colour order. Empty when the
    /// class is not partitioned.
    pub subclasses: Vec<(String, u32)>,
    pub ordered: bool,
    /// Colour names are `prefix` followed by a 1-based index.
    pub prefix: String,
}

impl ColourClass {
    /// A plain class; colours of class `N` print as `nd1, nd2, ...`.
    pub fn new(name: &str, size: u32) -> Self {
        ColourClass {
            name: name.to_string(),
            size,
            subclasses: Vec::new(),
            ordered: false,
            prefix: format!("{}d", name.to_lowercase()),
        }
    }

    pub fn is_plain(&self) -> bool {
        self.subclasses.is_empty() && !self.ordered
    }

    pub fn subclass_range(&self, q: usize) -> Option<std::ops::Range<u32>> {
        let start: u32 = self.subclasses.iter().take(q).map(|(_, s)| *s).sum();
        self.subclasses.get(q).map(|(_, s)| start..start + s)
    }

    pub fn subclass_of(&self, index: u32) -> Option<usize> {
        let mut start = 0;
        for (q, (_, s)) in self.subclasses.iter().enumerate() {
            if index < start + s {
                return Some(q);
            }
            start += s;
        }
        None
    }

    pub fn subclass_index(&self, name: &str) -> Option<usize> {
        self.subclasses.iter().position(|(n, _)| n == name)
    }

    fn validate(&self) -> Result<(), ModelError> {
        if self.size == 0 {
            return Err(ModelError::InvalidClass(format!("class {} is empty", self.name)));
        }
        if !self.subclasses.is_empty() {
            if self.ordered {
                return Err(ModelError::InvalidClass(format!(
                    "class {} cannot be both ordered and partitioned",
                    self.name
                )));
            }
            let total: u32 = self.subclasses.iter().map(|(_, s)| *s).sum();
            if total != self.size {
                return Err(ModelError::InvalidClass(format!(
                    "subclasses of {} sum to {} instead of {}",
                    self.name, total, self.size
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlaceId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Place {
    pub name: String,
    pub domain: Domain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub class: ClassId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub name: String,
    /// Ordered parameters; they define the transition's colour domain.
    pub vars: Vec<Variable>,
    pub guard: Guard,
}

impl Transition {
    pub fn domain(&self) -> Domain {
        Domain(self.vars.iter().map(|v| v.class).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArcKind {
    Input,
    Output,
    Inhibitor,
}

impl fmt::Display for ArcKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArcKind::Input => "in",
            ArcKind::Output => "out",
            ArcKind::Inhibitor => "inh",
        })
    }
}

static NULL_FUNCTION: ArcFunction = ArcFunction { terms: Vec::new() };

/// A validated Symmetric Net. Missing arcs carry the null function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Net {
    classes: Vec<ColourClass>,
    places: Vec<Place>,
    transitions: Vec<Transition>,
    arcs: BTreeMap<(ArcKind, PlaceId, TransitionId), ArcFunction>,
}

impl Net {
    pub fn classes(&self) -> &[ColourClass] {
        &self.classes
    }

    pub fn class(&self, id: ClassId) -> &ColourClass {
        &self.classes[id.0]
    }

    pub fn class_id(&self, name: &str) -> Option<ClassId> {
        self.classes.iter().position(|c| c.name == name).map(ClassId)
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn place(&self, id: PlaceId) -> &Place {
        &self.places[id.0]
    }

    pub fn place_id(&self, name: &str) -> Option<PlaceId> {
        self.places.iter().position(|p| p.name == name).map(PlaceId)
    }

    pub fn place_ids(&self) -> impl Iterator<Item = PlaceId> {
        (0..self.places.len()).map(PlaceId)
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition(&self, id: TransitionId) -> &Transition {
        &self.transitions[id.0]
    }

    pub fn transition_id(&self, name: &str) -> Option<TransitionId> {
        self.transitions.iter().position(|t| t.name == name).map(TransitionId)
    }

    pub fn transition_ids(&self) -> impl Iterator<Item = TransitionId> {
        (0..self.transitions.len()).map(TransitionId)
    }

    pub fn arc(&self, kind: ArcKind, place: PlaceId, transition: TransitionId) -> &ArcFunction {
        self.arcs.get(&(kind, place, transition)).unwrap_or(&NULL_FUNCTION)
    }

    /// All non-null arcs, ordered by (kind, place, transition).
    pub fn arcs(&self) -> impl Iterator<Item = (ArcKind, PlaceId, TransitionId, &ArcFunction)> + '_ {
        self.arcs.iter().map(|((k, p, t), f)| (*k, *p, *t, f))
    }

    /// Non-null arcs incident to `t`.
    pub fn arcs_of(&self, t: TransitionId) -> impl Iterator<Item = (ArcKind, PlaceId, &ArcFunction)> + '_ {
        self.arcs().filter(move |(_, _, tt, _)| *tt == t).map(|(k, p, _, f)| (k, p, f))
    }

    /// Number of (not necessarily valid) instances of `t`.
    pub fn domain_size(&self, t: TransitionId) -> u128 {
        self.transition(t).vars.iter().map(|v| self.class(v.class).size as u128).product()
    }

    /// Whether the binding satisfies the transition guard.
    pub fn valid(&self, t: TransitionId, binding: &[Colour]) -> Result<bool, ModelError> {
        let tr = self.transition(t);
        if binding.len() != tr.vars.len() {
            return Err(ModelError::UnboundVariable(binding.len().min(tr.vars.len())));
        }
        tr.guard.eval(binding, &self.classes)
    }

    /// Every binding of `t` in lexicographic order of (variable, colour index),
    /// valid or not.
    pub fn bindings(&self, t: TransitionId) -> Bindings {
        let classes: Vec<(ClassId, u32)> =
            self.transition(t).vars.iter().map(|v| (v.class, self.class(v.class).size)).collect();
        Bindings::new(classes)
    }

    pub fn eval_arc(
        &self,
        kind: ArcKind,
        place: PlaceId,
        t: TransitionId,
        binding: &[Colour],
    ) -> Result<Bag, ModelError> {
        self.arc(kind, place, t).eval(&self.place(place).domain, &self.classes, binding)
    }

    pub fn empty_marking(&self) -> Marking {
        Marking { bags: self.places.iter().map(|p| Bag::empty(p.domain.clone())).collect() }
    }

    /// Classes that are ordered or partitioned, outside the symmetric fragment
    /// handled by canonicalization and the structural calculus.
    pub fn non_plain_classes(&self) -> Vec<&str> {
        self.classes.iter().filter(|c| !c.is_plain()).map(|c| c.name.as_str()).collect()
    }

    pub fn into_builder(self) -> NetBuilder {
        NetBuilder { net: self }
    }

    pub fn variable_name(&self, t: TransitionId, i: usize) -> &str {
        &self.transition(t).vars[i].name
    }

    /// `R1(nd4,nd1,nd2)`
    pub fn instance_label(&self, t: TransitionId, binding: &[Colour]) -> String {
        let args: Vec<String> = binding.iter().map(|c| self.colour_name(*c)).collect();
        format!("{}({})", self.transition(t).name, args.join(","))
    }
}

impl ColourNames for Net {
    fn colour_name(&self, colour: Colour) -> String {
        format!("{}{}", self.classes[colour.class.0].prefix, colour.index + 1)
    }
}

/// Odometer over the bindings of a transition; the last variable moves fastest.
pub struct Bindings {
    classes: Vec<(ClassId, u32)>,
    current: Option<Vec<u32>>,
}

impl Bindings {
    fn new(classes: Vec<(ClassId, u32)>) -> Self {
        let current = if classes.iter().any(|(_, s)| *s == 0) { None } else { Some(vec![0; classes.len()]) };
        Bindings { classes, current }
    }
}

impl Iterator for Bindings {
    type Item = Vec<Colour>;

    fn next(&mut self) -> Option<Vec<Colour>> {
        let cur = self.current.as_mut()?;
        let out = cur.iter().zip(&self.classes).map(|(i, (c, _))| Colour::new(*c, *i)).collect();
        let mut pos = cur.len();
        loop {
            if pos == 0 {
                self.current = None;
                break;
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] < self.classes[pos].1 {
                break;
            }
            cur[pos] = 0;
        }
        Some(out)
    }
}

/// Place-indexed bags.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Marking {
    bags: Vec<Bag>,
}

impl Marking {
    pub fn from_bags(net: &Net, bags: Vec<Bag>) -> Result<Self, ModelError> {
        if bags.len() != net.places.len() {
            return Err(ModelError::Arity { expected: net.places.len(), found: bags.len() });
        }
        for (b, p) in bags.iter().zip(&net.places) {
            if *b.domain() != p.domain {
                return Err(ModelError::ClassMismatch(format!("marking of {} has the wrong domain", p.name)));
            }
        }
        Ok(Marking { bags })
    }

    pub fn get(&self, p: PlaceId) -> &Bag {
        &self.bags[p.0]
    }

    pub fn set(&mut self, p: PlaceId, bag: Bag) {
        assert_eq!(bag.domain(), self.bags[p.0].domain(), "domain of place marking");
        self.bags[p.0] = bag;
    }

    pub fn bags(&self) -> &[Bag] {
        &self.bags
    }

    pub fn is_empty(&self) -> bool {
        self.bags.iter().all(Bag::is_empty)
    }

    /// Distinct colours occurring anywhere in the marking, sorted.
    pub fn used_colours(&self) -> Vec<Colour> {
        let mut v: Vec<Colour> =
            self.bags.iter().flat_map(|b| b.iter().flat_map(|(t, _)| t.iter().copied())).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn map_colours(&self, f: impl Fn(Colour) -> Colour) -> Result<Marking, BagError> {
        Ok(Marking { bags: self.bags.iter().map(|b| b.map_colours(&f)).collect::<Result<_, _>>()? })
    }

    /// Canonical text, e.g. `Node = <nd1> + <nd2>; Edge = <nd1,nd2>`.
    pub fn display(&self, net: &Net) -> String {
        net.places
            .iter()
            .zip(&self.bags)
            .map(|(p, b)| format!("{} = {}", p.name, b.display(net)))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// Incremental construction of a [`Net`]; `build` runs every static check.
#[derive(Debug, Clone, Default)]
pub struct NetBuilder {
    net: Net,
}

impl Default for Net {
    fn default() -> Self {
        Net { classes: Vec::new(), places: Vec::new(), transitions: Vec::new(), arcs: BTreeMap::new() }
    }
}

impl NetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_class(&mut self, class: ColourClass) -> Result<ClassId, ModelError> {
        if self.net.class_id(&class.name).is_some() {
            return Err(ModelError::Duplicate(class.name));
        }
        class.validate()?;
        self.net.classes.push(class);
        Ok(ClassId(self.net.classes.len() - 1))
    }

    pub fn class_mut(&mut self, id: ClassId) -> &mut ColourClass {
        &mut self.net.classes[id.0]
    }

    pub fn net(&self) -> &Net {
        &self.net
    }

    pub fn add_place(&mut self, name: &str, domain: Domain) -> Result<PlaceId, ModelError> {
        if self.net.place_id(name).is_some() {
            return Err(ModelError::Duplicate(name.to_string()));
        }
        if let Some(c) = domain.0.iter().find(|c| c.0 >= self.net.classes.len()) {
            return Err(ModelError::UnknownIdentifier(format!("class #{}", c.0)));
        }
        self.net.places.push(Place { name: name.to_string(), domain });
        Ok(PlaceId(self.net.places.len() - 1))
    }

    pub fn add_transition(&mut self, name: &str, vars: Vec<Variable>, guard: Guard) -> Result<TransitionId, ModelError> {
        if self.net.transition_id(name).is_some() {
            return Err(ModelError::Duplicate(name.to_string()));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].iter().any(|w| w.name == v.name) {
                return Err(ModelError::Duplicate(v.name.clone()));
            }
        }
        if let Some(c) = vars.iter().find(|v| v.class.0 >= self.net.classes.len()) {
            return Err(ModelError::UnknownIdentifier(format!("class #{}", c.class.0)));
        }
        let t = Transition { name: name.to_string(), vars, guard };
        check_guard(&self.net, &t, &t.guard)?;
        self.net.transitions.push(t);
        Ok(TransitionId(self.net.transitions.len() - 1))
    }

    pub fn add_arc(
        &mut self,
        kind: ArcKind,
        place: PlaceId,
        transition: TransitionId,
        function: ArcFunction,
    ) -> Result<(), ModelError> {
        let key = (kind, place, transition);
        if self.net.arcs.contains_key(&key) {
            return Err(ModelError::Duplicate(format!(
                "{} arc between {} and {}",
                kind,
                self.net.place(place).name,
                self.net.transition(transition).name
            )));
        }
        check_arc(&self.net, self.net.transition(transition), self.net.place(place), &function)?;
        if !function.is_null() {
            self.net.arcs.insert(key, function);
        }
        Ok(())
    }

    /// Replaces (or removes, for the null function) an existing arc.
    pub fn replace_arc(&mut self, kind: ArcKind, place: PlaceId, transition: TransitionId, function: ArcFunction) {
        self.net.arcs.remove(&(kind, place, transition));
        if !function.is_null() {
            self.net.arcs.insert((kind, place, transition), function);
        }
    }

    pub fn set_guard(&mut self, transition: TransitionId, guard: Guard) {
        self.net.transitions[transition.0].guard = guard;
    }

    pub fn build(self) -> Result<Net, ModelError> {
        let net = self.net;
        for c in &net.classes {
            c.validate()?;
        }
        for (ti, t) in net.transitions.iter().enumerate() {
            check_guard(&net, t, &t.guard)?;
            for (kind, p, f) in net.arcs_of(TransitionId(ti)) {
                check_arc(&net, t, net.place(p), f).map_err(|e| match e {
                    ModelError::Arity { expected, found } => ModelError::Arity { expected, found },
                    other => ModelError::ClassMismatch(format!(
                        "{} arc {} / {}: {}",
                        kind,
                        net.place(p).name,
                        t.name,
                        other
                    )),
                })?;
            }
        }
        check_negative_coefficients(&net)?;
        Ok(net)
    }
}

fn check_guard(net: &Net, t: &Transition, g: &Guard) -> Result<(), ModelError> {
    let mut vars = Vec::new();
    g.variables(&mut vars);
    if let Some(v) = vars.iter().find(|v| **v >= t.vars.len()) {
        return Err(ModelError::UnboundVariable(*v));
    }
    check_subclass_atoms(net, g, &|i| t.vars[i].class)
}

fn check_subclass_atoms(net: &Net, g: &Guard, class_of: &dyn Fn(usize) -> ClassId) -> Result<(), ModelError> {
    match g {
        Guard::In(v, q) => {
            let c = net.class(class_of(*v));
            if *q >= c.subclasses.len() {
                return Err(ModelError::UnknownIdentifier(format!("subclass #{} of {}", q, c.name)));
            }
            Ok(())
        }
        Guard::Not(a) => check_subclass_atoms(net, a, class_of),
        Guard::And(a, b) | Guard::Or(a, b) => {
            check_subclass_atoms(net, a, class_of)?;
            check_subclass_atoms(net, b, class_of)
        }
        _ => Ok(()),
    }
}

fn check_arc(net: &Net, t: &Transition, p: &Place, f: &ArcFunction) -> Result<(), ModelError> {
    for (_, tuple) in &f.terms {
        if tuple.components.len() != p.domain.arity() {
            return Err(ModelError::Arity { expected: p.domain.arity(), found: tuple.components.len() });
        }
        for (cf, class) in tuple.components.iter().zip(&p.domain.0) {
            let cc = net.class(*class);
            for (_, e) in &cf.terms {
                match e {
                    Elem::Proj(v) | Elem::Succ(v) => {
                        let var = t.vars.get(*v).ok_or(ModelError::UnboundVariable(*v))?;
                        if var.class != *class {
                            return Err(ModelError::ClassMismatch(format!(
                                "variable {} has class {}, component expects {}",
                                var.name,
                                net.class(var.class).name,
                                cc.name
                            )));
                        }
                        if matches!(e, Elem::Succ(_)) && !cc.ordered {
                            return Err(ModelError::ClassMismatch(format!(
                                "successor used on unordered class {}",
                                cc.name
                            )));
                        }
                    }
                    Elem::Subclass(q) => {
                        if *q >= cc.subclasses.len() {
                            return Err(ModelError::UnknownIdentifier(format!("subclass #{} of {}", q, cc.name)));
                        }
                    }
                    Elem::All => {}
                }
            }
        }
        if let Some(g) = &tuple.filter {
            check_guard(net, t, g)?;
        }
        if let Some(g) = &tuple.cofilter {
            if let Some(v) = g.max_variable().filter(|v| *v >= p.domain.arity()) {
                return Err(ModelError::UnboundVariable(v));
            }
            check_subclass_atoms(net, g, &|i| p.domain.0[i])?;
        }
    }
    Ok(())
}

/// Class-function coefficients must never produce negative multiplicities
/// for a valid binding. Small domains are checked exhaustively; large ones
/// must satisfy the sufficient rule "All carries at least as much positive
/// weight as all negative terms together".
fn check_negative_coefficients(net: &Net) -> Result<(), ModelError> {
    for t in net.transition_ids() {
        let arcs: Vec<_> = net.arcs_of(t).collect();
        if !arcs.iter().any(|(_, _, f)| f.class_functions().any(ClassFunction::has_negative)) {
            continue;
        }
        let name = &net.transition(t).name;
        if net.domain_size(t) <= NEGATIVE_CHECK_BOUND {
            for b in net.bindings(t) {
                if !net.valid(t, &b)? {
                    continue;
                }
                for (_, p, f) in &arcs {
                    f.eval(&net.place(*p).domain, &net.classes, &b).map_err(|e| match e {
                        ModelError::NegativeMultiplicity(m) => ModelError::NegativeMultiplicity(format!(
                            "{} on {}: {}",
                            net.instance_label(t, &b),
                            net.place(*p).name,
                            m
                        )),
                        other => other,
                    })?;
                }
            }
        } else {
            for (_, _, f) in &arcs {
                for cf in f.class_functions() {
                    let all: i64 = cf.terms.iter().filter(|(a, e)| *a > 0 && *e == Elem::All).map(|(a, _)| a).sum();
                    let neg: i64 = cf.terms.iter().filter(|(a, _)| *a < 0).map(|(a, _)| -a).sum();
                    if neg > all {
                        return Err(ModelError::NegativeMultiplicity(format!(
                            "{}: cannot prove non-negativity syntactically",
                            name
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}
