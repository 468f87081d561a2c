use crate::bag::Colour;

use super::{ColourClass, ModelError};

/// Boolean predicate over positional variables.
///
/// Indices refer to the transition's variables when the guard is attached to
/// a transition or used as a tuple filter, and to positions of the produced
/// tuple when used as a codomain filter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Guard {
    True,
    False,
    Eq(usize, usize),
    Neq(usize, usize),
    /// Variable belongs to the given static subclass of its class.
    In(usize, usize),
    /// Both variables fall in the same static subclass.
    SameSubclass(usize, usize),
    Not(Box<Guard>),
    And(Box<Guard>, Box<Guard>),
    Or(Box<Guard>, Box<Guard>),
}

impl Guard {
    pub fn and(self, other: Guard) -> Guard {
        match (self, other) {
            (Guard::True, g) | (g, Guard::True) => g,
            (a, b) => Guard::And(Box::new(a), Box::new(b)),
        }
    }

    pub fn or(self, other: Guard) -> Guard {
        Guard::Or(Box::new(self), Box::new(other))
    }

    pub fn negate(self) -> Guard {
        Guard::Not(Box::new(self))
    }

    pub fn is_true(&self) -> bool {
        matches!(self, Guard::True)
    }

    /// Every index the guard mentions.
    pub fn variables(&self, out: &mut Vec<usize>) {
        match self {
            Guard::True | Guard::False => {}
            Guard::Eq(a, b) | Guard::Neq(a, b) | Guard::SameSubclass(a, b) => {
                out.push(*a);
                out.push(*b);
            }
            Guard::In(a, _) => out.push(*a),
            Guard::Not(g) => g.variables(out),
            Guard::And(a, b) | Guard::Or(a, b) => {
                a.variables(out);
                b.variables(out);
            }
        }
    }

    pub fn max_variable(&self) -> Option<usize> {
        let mut v = Vec::new();
        self.variables(&mut v);
        v.into_iter().max()
    }

    /// True when the guard only uses (in)equalities, the fragment the
    /// structural calculus handles.
    pub fn is_equality_fragment(&self) -> bool {
        match self {
            Guard::True | Guard::False | Guard::Eq(..) | Guard::Neq(..) => true,
            Guard::In(..) | Guard::SameSubclass(..) => false,
            Guard::Not(g) => g.is_equality_fragment(),
            Guard::And(a, b) | Guard::Or(a, b) => a.is_equality_fragment() && b.is_equality_fragment(),
        }
    }

    pub fn eval(&self, values: &[Colour], classes: &[ColourClass]) -> Result<bool, ModelError> {
        let get = |i: usize| values.get(i).copied().ok_or(ModelError::UnboundVariable(i));
        Ok(match self {
            Guard::True => true,
            Guard::False => false,
            Guard::Eq(a, b) => get(*a)? == get(*b)?,
            Guard::Neq(a, b) => get(*a)? != get(*b)?,
            Guard::In(a, q) => {
                let c = get(*a)?;
                classes[c.class.0].subclass_of(c.index) == Some(*q)
            }
            Guard::SameSubclass(a, b) => {
                let (x, y) = (get(*a)?, get(*b)?);
                x.class == y.class
                    && classes[x.class.0].subclass_of(x.index) == classes[y.class.0].subclass_of(y.index)
            }
            Guard::Not(g) => !g.eval(values, classes)?,
            Guard::And(a, b) => a.eval(values, classes)? && b.eval(values, classes)?,
            Guard::Or(a, b) => a.eval(values, classes)? || b.eval(values, classes)?,
        })
    }

    /// Evaluates an equality-fragment guard on an equality pattern, where
    /// `labels[i] == labels[j]` iff variables `i` and `j` carry the same colour.
    /// Returns `None` for subclass predicates.
    pub fn eval_pattern(&self, labels: &[u8]) -> Option<bool> {
        Some(match self {
            Guard::True => true,
            Guard::False => false,
            Guard::Eq(a, b) => labels[*a] == labels[*b],
            Guard::Neq(a, b) => labels[*a] != labels[*b],
            Guard::In(..) | Guard::SameSubclass(..) => return None,
            Guard::Not(g) => !g.eval_pattern(labels)?,
            Guard::And(a, b) => a.eval_pattern(labels)? && b.eval_pattern(labels)?,
            Guard::Or(a, b) => a.eval_pattern(labels)? || b.eval_pattern(labels)?,
        })
    }

    /// Rewrites every index through `f`.
    pub fn remap(&self, f: &impl Fn(usize) -> usize) -> Guard {
        match self {
            Guard::True => Guard::True,
            Guard::False => Guard::False,
            Guard::Eq(a, b) => Guard::Eq(f(*a), f(*b)),
            Guard::Neq(a, b) => Guard::Neq(f(*a), f(*b)),
            Guard::In(a, q) => Guard::In(f(*a), *q),
            Guard::SameSubclass(a, b) => Guard::SameSubclass(f(*a), f(*b)),
            Guard::Not(g) => Guard::Not(Box::new(g.remap(f))),
            Guard::And(a, b) => Guard::And(Box::new(a.remap(f)), Box::new(b.remap(f))),
            Guard::Or(a, b) => Guard::Or(Box::new(a.remap(f)), Box::new(b.remap(f))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bag::ClassId;

    fn n(i: u32) -> Colour {
        Colour::new(ClassId(0), i)
    }

    fn classes() -> Vec<ColourClass> {
        vec![ColourClass::new("N", 4)]
    }

    #[test]
    fn equality_atoms() {
        let b = [n(0), n(1)];
        assert!(Guard::Neq(0, 1).eval(&b, &classes()).unwrap());
        assert!(!Guard::Eq(0, 1).eval(&b, &classes()).unwrap());
        assert!(Guard::True.eval(&b, &classes()).unwrap());
    }

    #[test]
    fn unbound_variable_is_an_error() {
        assert_eq!(Guard::Eq(0, 3).eval(&[n(0)], &classes()), Err(ModelError::UnboundVariable(3)));
    }

    #[test]
    fn subclass_predicates() {
        let mut k = ColourClass::new("C", 4);
        k.subclasses = vec![("C1".into(), 1), ("C2".into(), 3)];
        let cls = vec![k];
        assert!(Guard::In(0, 0).eval(&[n(0)], &cls).unwrap());
        assert!(Guard::In(0, 1).eval(&[n(2)], &cls).unwrap());
        assert!(Guard::SameSubclass(0, 1).eval(&[n(1), n(3)], &cls).unwrap());
        assert!(!Guard::SameSubclass(0, 1).eval(&[n(0), n(3)], &cls).unwrap());
        assert_eq!(Guard::In(0, 0).eval_pattern(&[0]), None);
    }
}
