//! Arc-function syntax: linear combinations of guarded tuples of class
//! functions, and their evaluation under a binding.

use crate::bag::{Bag, ClassId, Colour, Domain};

use super::{ColourClass, Guard, ModelError};

/// Elementary class function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Elem {
    /// The colour bound to the variable at this index.
    Proj(usize),
    /// Successor (mod class size) of the variable's colour; ordered classes only.
    Succ(usize),
    /// Every colour of the given static subclass.
    Subclass(usize),
    /// Every colour of the class.
    All,
}

/// `sum_h alpha_h . e_h` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassFunction {
    pub terms: Vec<(i64, Elem)>,
}

impl ClassFunction {
    pub fn elem(e: Elem) -> Self {
        ClassFunction { terms: vec![(1, e)] }
    }

    pub fn proj(var: usize) -> Self {
        Self::elem(Elem::Proj(var))
    }

    pub fn all() -> Self {
        Self::elem(Elem::All)
    }

    /// `All - v1 - v2 - ...`
    pub fn all_but(vars: &[usize]) -> Self {
        let mut terms = vec![(1, Elem::All)];
        terms.extend(vars.iter().map(|v| (-1, Elem::Proj(*v))));
        ClassFunction { terms }
    }

    pub fn has_negative(&self) -> bool {
        self.terms.iter().any(|(a, _)| *a < 0)
    }

    pub fn variables(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.iter().filter_map(|(_, e)| match e {
            Elem::Proj(v) | Elem::Succ(v) => Some(*v),
            _ => None,
        })
    }

    /// Evaluates to a bag over `class`.
    pub fn eval(&self, class: ClassId, classes: &[ColourClass], binding: &[Colour]) -> Result<Bag, ModelError> {
        let cc = &classes[class.0];
        let mut acc = vec![0i64; cc.size as usize];
        for (alpha, e) in &self.terms {
            match e {
                Elem::Proj(v) | Elem::Succ(v) => {
                    let c = *binding.get(*v).ok_or(ModelError::UnboundVariable(*v))?;
                    if c.class != class {
                        return Err(ModelError::ClassMismatch(format!(
                            "variable #{} has class {} but is used where {} is expected",
                            v, classes[c.class.0].name, cc.name
                        )));
                    }
                    let idx = if matches!(e, Elem::Succ(_)) { (c.index + 1) % cc.size } else { c.index };
                    acc[idx as usize] += alpha;
                }
                Elem::Subclass(q) => {
                    let range = cc.subclass_range(*q).ok_or_else(|| {
                        ModelError::UnknownIdentifier(format!("subclass #{} of {}", q, cc.name))
                    })?;
                    for i in range {
                        acc[i as usize] += alpha;
                    }
                }
                Elem::All => acc.iter_mut().for_each(|m| *m += alpha),
            }
        }
        let mut bag = Bag::empty(Domain(vec![class]));
        for (i, m) in acc.into_iter().enumerate() {
            if m < 0 {
                return Err(ModelError::NegativeMultiplicity(format!(
                    "class function yields {} for {}{}",
                    m,
                    cc.prefix,
                    i + 1
                )));
            }
            bag.insert(vec![Colour::new(class, i as u32)], m as u64)?;
        }
        Ok(bag)
    }
}

/// `<f1,...,fk>` optionally filtered by a guard on the binding and by a
/// guard on the produced tuple's positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunctionTuple {
    pub components: Vec<ClassFunction>,
    pub filter: Option<Guard>,
    pub cofilter: Option<Guard>,
}

impl FunctionTuple {
    pub fn new(components: Vec<ClassFunction>) -> Self {
        FunctionTuple { components, filter: None, cofilter: None }
    }

    pub fn with_filter(mut self, g: Guard) -> Self {
        self.filter = Some(g);
        self
    }

    pub fn eval(&self, codomain: &Domain, classes: &[ColourClass], binding: &[Colour]) -> Result<Bag, ModelError> {
        if self.components.len() != codomain.arity() {
            return Err(ModelError::Arity { expected: codomain.arity(), found: self.components.len() });
        }
        if let Some(g) = &self.filter {
            if !g.eval(binding, classes)? {
                return Ok(Bag::empty(codomain.clone()));
            }
        }
        let mut acc = Bag::from_entries(Domain::neutral(), [(Vec::new(), 1)])?;
        for (f, class) in self.components.iter().zip(&codomain.0) {
            acc = acc.product(&f.eval(*class, classes, binding)?)?;
        }
        match &self.cofilter {
            None => Ok(acc),
            Some(g) => {
                let mut out = Bag::empty(codomain.clone());
                for (t, k) in acc.iter() {
                    if g.eval(t, classes)? {
                        out.insert(t.clone(), k)?;
                    }
                }
                Ok(out)
            }
        }
    }
}

/// `sum_i lambda_i . T_i`; the empty sum is the null function.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ArcFunction {
    pub terms: Vec<(u64, FunctionTuple)>,
}

impl ArcFunction {
    pub fn null() -> Self {
        ArcFunction { terms: Vec::new() }
    }

    pub fn tuple(t: FunctionTuple) -> Self {
        ArcFunction { terms: vec![(1, t)] }
    }

    pub fn is_null(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(mut self, other: ArcFunction) -> Self {
        self.terms.extend(other.terms);
        self
    }

    pub fn class_functions(&self) -> impl Iterator<Item = &ClassFunction> + '_ {
        self.terms.iter().flat_map(|(_, t)| t.components.iter())
    }

    pub fn guards(&self) -> impl Iterator<Item = &Guard> + '_ {
        self.terms.iter().flat_map(|(_, t)| t.filter.iter())
    }

    pub fn eval(&self, codomain: &Domain, classes: &[ColourClass], binding: &[Colour]) -> Result<Bag, ModelError> {
        let mut out = Bag::empty(codomain.clone());
        for (lambda, t) in &self.terms {
            out = out.sum(&t.eval(codomain, classes, binding)?.scalar(*lambda)?)?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: ClassId = ClassId(0);

    fn nd(i: u32) -> Colour {
        Colour::new(N, i)
    }

    fn classes(size: u32) -> Vec<ColourClass> {
        vec![ColourClass::new("N", size)]
    }

    fn set(pairs: &[&[u32]]) -> Vec<Vec<Colour>> {
        pairs.iter().map(|p| p.iter().map(|i| nd(*i)).collect()).collect()
    }

    #[test]
    fn diffusion_and_projection() {
        let cls = classes(3);
        let all = ClassFunction::all().eval(N, &cls, &[]).unwrap();
        assert_eq!(all.support_len(), 3);
        assert_eq!(all.cardinality(), 3);
        let p = ClassFunction::proj(0).eval(N, &cls, &[nd(1)]).unwrap();
        assert_eq!(p.iter().map(|(t, k)| (t.clone(), k)).collect::<Vec<_>>(), vec![(vec![nd(1)], 1)]);
        let rest = ClassFunction::all_but(&[0]).eval(N, &cls, &[nd(0)]).unwrap();
        assert_eq!(rest.iter().map(|(t, _)| t.clone()).collect::<Vec<_>>(), set(&[&[1], &[2]]));
    }

    #[test]
    fn negative_multiplicity_is_rejected() {
        let f = ClassFunction { terms: vec![(1, Elem::All), (-1, Elem::Proj(0)), (-1, Elem::Proj(1))] };
        let err = f.eval(N, &classes(3), &[nd(0), nd(0)]).unwrap_err();
        assert!(matches!(err, ModelError::NegativeMultiplicity(_)));
    }

    #[test]
    fn successor_wraps() {
        let mut cls = classes(3);
        cls[0].ordered = true;
        let b = ClassFunction::elem(Elem::Succ(0)).eval(N, &cls, &[nd(2)]).unwrap();
        assert_eq!(b.get(&[nd(0)]), 1);
    }

    #[test]
    fn r2_inhibitor_function() {
        // <n1,All> + <All-n1,n1> at n1 = nd1 over |N| = 3
        let f = ArcFunction::tuple(FunctionTuple::new(vec![ClassFunction::proj(0), ClassFunction::all()]))
            .plus(ArcFunction::tuple(FunctionTuple::new(vec![
                ClassFunction::all_but(&[0]),
                ClassFunction::proj(0),
            ])));
        let bag = f.eval(&Domain(vec![N, N]), &classes(3), &[nd(0)]).unwrap();
        let got: Vec<_> = bag.iter().map(|(t, _)| t.clone()).collect();
        assert_eq!(got, set(&[&[0, 0], &[0, 1], &[0, 2], &[1, 0], &[2, 0]]));
        assert_eq!(bag.max_multiplicity(), 1);
    }

    #[test]
    fn projections_pick_bound_colours() {
        let f = ArcFunction::tuple(FunctionTuple::new(vec![ClassFunction::proj(0), ClassFunction::proj(2)]));
        let bag = f.eval(&Domain(vec![N, N]), &classes(4), &[nd(3), nd(0), nd(1)]).unwrap();
        assert_eq!(bag.get(&[nd(3), nd(1)]), 1);
        assert_eq!(bag.cardinality(), 1);
    }

    #[test]
    fn filter_false_yields_null() {
        let f = ArcFunction::tuple(FunctionTuple::new(vec![ClassFunction::proj(0)]).with_filter(Guard::Eq(0, 1)));
        assert!(f.eval(&Domain(vec![N]), &classes(3), &[nd(0), nd(1)]).unwrap().is_empty());
    }

    #[test]
    fn arity_mismatch() {
        let f = ArcFunction::tuple(FunctionTuple::new(vec![ClassFunction::proj(0)]));
        assert!(matches!(
            f.eval(&Domain(vec![N, N]), &classes(3), &[nd(0)]),
            Err(ModelError::Arity { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn linear_in_terms() {
        // Exhaustive over |N| = 4: eval(sum) == sum(eval)
        let cls = classes(4);
        let d = Domain(vec![N, N]);
        let t1 = FunctionTuple::new(vec![ClassFunction::proj(0), ClassFunction::all_but(&[1])]);
        let t2 = FunctionTuple::new(vec![ClassFunction::all(), ClassFunction::proj(0)]).with_filter(Guard::Neq(0, 1));
        let f = ArcFunction { terms: vec![(2, t1.clone()), (1, t2.clone())] };
        for a in 0..4 {
            for b in 0..4 {
                let bind = [nd(a), nd(b)];
                let whole = f.eval(&d, &cls, &bind).unwrap();
                let parts = t1
                    .eval(&d, &cls, &bind)
                    .unwrap()
                    .scalar(2)
                    .unwrap()
                    .sum(&t2.eval(&d, &cls, &bind).unwrap())
                    .unwrap();
                assert_eq!(whole, parts);
            }
        }
    }
}
