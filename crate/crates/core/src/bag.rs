//! Multisets over finite colour domains and bag-valued functions.
//!
//! A [`Bag`] maps colour tuples of a fixed [`Domain`] to strictly positive
//! multiplicities; absent tuples have multiplicity zero. Entries are kept in a
//! `BTreeMap`, so iteration, printing and hashing follow the lexicographic
//! order of colour indices.
//!
//! [`BagFn`] is a finite table `A -> Bag[B]` supporting the pointwise
//! operators, transposition, linear extension and composition.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Index of a basic colour class inside a net.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassId(pub usize);

/// One basic colour: the `index`-th element (0-based) of class `class`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Colour {
    pub class: ClassId,
    pub index: u32,
}

impl Colour {
    pub fn new(class: ClassId, index: u32) -> Self {
        Colour { class, index }
    }
}

pub type ColourTuple = Vec<Colour>;

/// Cartesian product of basic classes. The empty product is the neutral
/// domain, holding the single empty tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Domain(pub Vec<ClassId>);

impl Domain {
    pub fn neutral() -> Self {
        Domain(Vec::new())
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, tuple: &[Colour]) -> bool {
        tuple.len() == self.0.len() && tuple.iter().zip(&self.0).all(|(c, k)| c.class == *k)
    }

    pub fn concat(&self, other: &Domain) -> Domain {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Domain(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BagError {
    #[error("domain mismatch: {left:?} vs {right:?}")]
    DomainMismatch { left: Domain, right: Domain },
    #[error("tuple {tuple:?} does not belong to domain {domain:?}")]
    NotInDomain { tuple: ColourTuple, domain: Domain },
    #[error("multiplicity overflow")]
    Overflow,
}

/// Produces display names for colours, e.g. `nd3`.
pub trait ColourNames {
    fn colour_name(&self, colour: Colour) -> String;
}

/// Names colours as `prefix[class] + (index + 1)`.
#[derive(Debug, Clone)]
pub struct Prefixes(pub Vec<String>);

impl ColourNames for Prefixes {
    fn colour_name(&self, colour: Colour) -> String {
        let prefix = self.0.get(colour.class.0).map(String::as_str).unwrap_or("c");
        format!("{}{}", prefix, colour.index + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bag {
    domain: Domain,
    entries: BTreeMap<ColourTuple, u64>,
}

impl Bag {
    pub fn empty(domain: Domain) -> Self {
        Bag { domain, entries: BTreeMap::new() }
    }

    pub fn from_entries<I>(domain: Domain, entries: I) -> Result<Self, BagError>
    where
        I: IntoIterator<Item = (ColourTuple, u64)>,
    {
        let mut bag = Bag::empty(domain);
        for (tuple, k) in entries {
            bag.insert(tuple, k)?;
        }
        Ok(bag)
    }

    /// Adds `k` copies of `tuple`.
    pub fn insert(&mut self, tuple: ColourTuple, k: u64) -> Result<(), BagError> {
        if !self.domain.contains(&tuple) {
            return Err(BagError::NotInDomain { tuple, domain: self.domain.clone() });
        }
        if k == 0 {
            return Ok(());
        }
        let slot = self.entries.entry(tuple).or_insert(0);
        *slot = slot.checked_add(k).ok_or(BagError::Overflow)?;
        Ok(())
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn get(&self, tuple: &[Colour]) -> u64 {
        self.entries.get(tuple).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of distinct elements in the support.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// Total number of tokens, counted with multiplicity.
    pub fn cardinality(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ColourTuple, u64)> + '_ {
        self.entries.iter().map(|(t, k)| (t, *k))
    }

    /// Largest multiplicity, zero for the empty bag.
    pub fn max_multiplicity(&self) -> u64 {
        self.entries.values().copied().max().unwrap_or(0)
    }

    fn same_domain(&self, other: &Bag) -> Result<(), BagError> {
        if self.domain != other.domain {
            return Err(BagError::DomainMismatch {
                left: self.domain.clone(),
                right: other.domain.clone(),
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Bag) -> Result<Bag, BagError> {
        self.same_domain(other)?;
        let mut out = self.clone();
        for (t, k) in &other.entries {
            let slot = out.entries.entry(t.clone()).or_insert(0);
            *slot = slot.checked_add(*k).ok_or(BagError::Overflow)?;
        }
        Ok(out)
    }

    /// Truncated difference: `max(0, a(d) - b(d))`.
    pub fn difference(&self, other: &Bag) -> Result<Bag, BagError> {
        self.same_domain(other)?;
        let entries = self
            .entries
            .iter()
            .filter_map(|(t, k)| {
                let rest = k.saturating_sub(other.get(t));
                (rest > 0).then(|| (t.clone(), rest))
            })
            .collect();
        Ok(Bag { domain: self.domain.clone(), entries })
    }

    pub fn scalar(&self, k: u64) -> Result<Bag, BagError> {
        if k == 0 {
            return Ok(Bag::empty(self.domain.clone()));
        }
        let mut entries = BTreeMap::new();
        for (t, m) in &self.entries {
            entries.insert(t.clone(), m.checked_mul(k).ok_or(BagError::Overflow)?);
        }
        Ok(Bag { domain: self.domain.clone(), entries })
    }

    /// Cartesian product over the concatenated domain.
    pub fn product(&self, other: &Bag) -> Result<Bag, BagError> {
        let mut out = Bag::empty(self.domain.concat(&other.domain));
        for (a, ka) in &self.entries {
            for (b, kb) in &other.entries {
                let mut t = a.clone();
                t.extend_from_slice(b);
                out.entries.insert(t, ka.checked_mul(*kb).ok_or(BagError::Overflow)?);
            }
        }
        Ok(out)
    }

    /// Componentwise `<=`.
    pub fn leq(&self, other: &Bag) -> Result<bool, BagError> {
        self.same_domain(other)?;
        Ok(self.entries.iter().all(|(t, k)| *k <= other.get(t)))
    }

    /// Clamps every positive multiplicity to one.
    pub fn support(&self) -> Bag {
        Bag {
            domain: self.domain.clone(),
            entries: self.entries.keys().map(|t| (t.clone(), 1)).collect(),
        }
    }

    /// Applies a colour map to every tuple, summing collisions.
    pub fn map_colours(&self, f: impl Fn(Colour) -> Colour) -> Result<Bag, BagError> {
        let mut out = Bag::empty(self.domain.clone());
        for (t, k) in &self.entries {
            out.insert(t.iter().map(|c| f(*c)).collect(), *k)?;
        }
        Ok(out)
    }

    pub fn display<'a>(&'a self, names: &'a dyn ColourNames) -> BagDisplay<'a> {
        BagDisplay { bag: self, names }
    }
}

pub struct BagDisplay<'a> {
    bag: &'a Bag,
    names: &'a dyn ColourNames,
}

impl fmt::Display for BagDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bag.is_empty() {
            return f.write_str("0");
        }
        for (i, (tuple, k)) in self.bag.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if k != 1 {
                write!(f, "{}", k)?;
            }
            f.write_str("<")?;
            for (j, c) in tuple.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                f.write_str(&self.names.colour_name(*c))?;
            }
            f.write_str(">")?;
        }
        Ok(())
    }
}

/// A finite bag-valued function `from -> Bag[to]`. Inputs missing from the
/// table map to the empty bag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BagFn {
    from: Domain,
    to: Domain,
    table: BTreeMap<ColourTuple, Bag>,
}

impl BagFn {
    pub fn null(from: Domain, to: Domain) -> Self {
        BagFn { from, to, table: BTreeMap::new() }
    }

    pub fn from_domain(&self) -> &Domain {
        &self.from
    }

    pub fn to_domain(&self) -> &Domain {
        &self.to
    }

    pub fn set(&mut self, input: ColourTuple, value: Bag) -> Result<(), BagError> {
        if !self.from.contains(&input) {
            return Err(BagError::NotInDomain { tuple: input, domain: self.from.clone() });
        }
        if value.domain != self.to {
            return Err(BagError::DomainMismatch { left: self.to.clone(), right: value.domain });
        }
        if value.is_empty() {
            self.table.remove(&input);
        } else {
            self.table.insert(input, value);
        }
        Ok(())
    }

    pub fn apply(&self, input: &[Colour]) -> Bag {
        self.table.get(input).cloned().unwrap_or_else(|| Bag::empty(self.to.clone()))
    }

    pub fn is_null(&self) -> bool {
        self.table.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ColourTuple, &Bag)> + '_ {
        self.table.iter()
    }

    /// Linear extension `f*(b) = sum_x b(x) * f(x)`.
    pub fn extend(&self, bag: &Bag) -> Result<Bag, BagError> {
        if bag.domain != self.from {
            return Err(BagError::DomainMismatch { left: self.from.clone(), right: bag.domain.clone() });
        }
        let mut out = Bag::empty(self.to.clone());
        for (x, k) in bag.iter() {
            if let Some(fx) = self.table.get(x) {
                out = out.sum(&fx.scalar(k)?)?;
            }
        }
        Ok(out)
    }

    /// `self ∘ inner`, i.e. `a ↦ self*(inner(a))`.
    pub fn compose(&self, inner: &BagFn) -> Result<BagFn, BagError> {
        if inner.to != self.from {
            return Err(BagError::DomainMismatch { left: inner.to.clone(), right: self.from.clone() });
        }
        let mut out = BagFn::null(inner.from.clone(), self.to.clone());
        for (a, ha) in &inner.table {
            out.set(a.clone(), self.extend(ha)?)?;
        }
        Ok(out)
    }

    /// `f^t(x)(y) = f(y)(x)`.
    pub fn transpose(&self) -> BagFn {
        let mut out = BagFn::null(self.to.clone(), self.from.clone());
        for (y, fy) in &self.table {
            for (x, k) in fy.iter() {
                out.table
                    .entry(x.clone())
                    .or_insert_with(|| Bag::empty(self.from.clone()))
                    .entries
                    .insert(y.clone(), k);
            }
        }
        out
    }

    fn zip_with(
        &self,
        other: &BagFn,
        op: impl Fn(&Bag, &Bag) -> Result<Bag, BagError>,
    ) -> Result<BagFn, BagError> {
        if self.from != other.from || self.to != other.to {
            return Err(BagError::DomainMismatch { left: self.to.clone(), right: other.to.clone() });
        }
        let mut out = BagFn::null(self.from.clone(), self.to.clone());
        let keys: std::collections::BTreeSet<&ColourTuple> =
            self.table.keys().chain(other.table.keys()).collect();
        for k in keys {
            out.set(k.clone(), op(&self.apply(k), &other.apply(k))?)?;
        }
        Ok(out)
    }

    pub fn sum(&self, other: &BagFn) -> Result<BagFn, BagError> {
        self.zip_with(other, Bag::sum)
    }

    pub fn difference(&self, other: &BagFn) -> Result<BagFn, BagError> {
        self.zip_with(other, Bag::difference)
    }

    /// Pointwise set union of supports.
    pub fn union(&self, other: &BagFn) -> Result<BagFn, BagError> {
        self.zip_with(other, |a, b| Ok(a.sum(b)?.support()))
    }

    pub fn support(&self) -> BagFn {
        BagFn {
            from: self.from.clone(),
            to: self.to.clone(),
            table: self.table.iter().map(|(k, v)| (k.clone(), v.support())).collect(),
        }
    }

    /// Pointwise Cartesian product `(f × g)(a) = f(a) × g(a)`.
    pub fn product(&self, other: &BagFn) -> Result<BagFn, BagError> {
        if self.from != other.from {
            return Err(BagError::DomainMismatch { left: self.from.clone(), right: other.from.clone() });
        }
        let mut out = BagFn::null(self.from.clone(), self.to.concat(&other.to));
        for (a, fa) in &self.table {
            if let Some(ga) = other.table.get(a) {
                out.set(a.clone(), fa.product(ga)?)?;
            }
        }
        Ok(out)
    }

    /// Pointwise `<=`.
    pub fn leq(&self, other: &BagFn) -> Result<bool, BagError> {
        for (a, fa) in &self.table {
            if !fa.leq(&other.apply(a))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const K: ClassId = ClassId(0);

    fn c(i: u32) -> Colour {
        Colour::new(K, i)
    }

    fn d1() -> Domain {
        Domain(vec![K])
    }

    fn bag1(entries: &[(u32, u64)]) -> Bag {
        Bag::from_entries(d1(), entries.iter().map(|&(i, k)| (vec![c(i)], k))).unwrap()
    }

    #[test]
    fn sum_examples() {
        assert_eq!(bag1(&[(0, 1), (1, 2)]).sum(&bag1(&[(0, 1)])).unwrap(), bag1(&[(0, 2), (1, 2)]));
        assert_eq!(bag1(&[]).sum(&bag1(&[(0, 3)])).unwrap(), bag1(&[(0, 3)]));
        assert_eq!(bag1(&[(0, 1)]).sum(&bag1(&[(0, 1)])).unwrap(), bag1(&[(0, 2)]));
    }

    #[test]
    fn domain_mismatch_is_an_error() {
        let pair = Bag::empty(Domain(vec![K, K]));
        assert!(matches!(bag1(&[(0, 1)]).sum(&pair), Err(BagError::DomainMismatch { .. })));
        assert!(bag1(&[(0, 1)]).difference(&pair).is_err());
    }

    #[test]
    fn difference_truncates() {
        assert!(bag1(&[(0, 1)]).difference(&bag1(&[(0, 2)])).unwrap().is_empty());
        assert_eq!(bag1(&[(0, 2), (1, 1)]).difference(&bag1(&[(0, 1)])).unwrap(), bag1(&[(0, 1), (1, 1)]));
        let b = bag1(&[(0, 4), (2, 1)]);
        assert!(b.difference(&b).unwrap().is_empty());
    }

    #[test]
    fn scalar_examples() {
        assert_eq!(bag1(&[(0, 1), (1, 3)]).scalar(2).unwrap(), bag1(&[(0, 2), (1, 6)]));
        assert!(bag1(&[(0, 5)]).scalar(0).unwrap().is_empty());
        let b = bag1(&[(0, 5), (3, 1)]);
        assert_eq!(b.scalar(1).unwrap(), b);
    }

    #[test]
    fn overflow_is_detected() {
        let big = bag1(&[(0, u64::MAX)]);
        assert_eq!(big.sum(&bag1(&[(0, 1)])), Err(BagError::Overflow));
        assert_eq!(big.scalar(2), Err(BagError::Overflow));
    }

    #[test]
    fn product_examples() {
        let p = bag1(&[(0, 1)]).product(&bag1(&[(1, 1), (2, 1)])).unwrap();
        assert_eq!(p.get(&[c(0), c(1)]), 1);
        assert_eq!(p.get(&[c(0), c(2)]), 1);
        assert_eq!(p.support_len(), 2);
        assert!(bag1(&[(0, 1)]).product(&bag1(&[])).unwrap().is_empty());
        assert_eq!(bag1(&[(0, 2)]).product(&bag1(&[(1, 3)])).unwrap().get(&[c(0), c(1)]), 6);
    }

    #[test]
    fn leq_and_support() {
        assert!(bag1(&[(0, 1)]).leq(&bag1(&[(0, 2), (1, 1)])).unwrap());
        assert!(!bag1(&[(0, 1), (2, 1)]).leq(&bag1(&[(0, 2)])).unwrap());
        assert_eq!(bag1(&[(0, 3), (1, 1)]).support(), bag1(&[(0, 1), (1, 1)]));
    }

    #[test]
    fn printing() {
        let names = Prefixes(vec!["nd".into()]);
        let b = Bag::from_entries(
            Domain(vec![K, K]),
            [(vec![c(0), c(1)], 2), (vec![c(2), c(2)], 1)],
        )
        .unwrap();
        assert_eq!(b.display(&names).to_string(), "2<nd1,nd2> + <nd3,nd3>");
        assert_eq!(Bag::empty(d1()).display(&names).to_string(), "0");
    }

    fn fn1(rows: &[(u32, &[(u32, u64)])]) -> BagFn {
        let mut f = BagFn::null(d1(), d1());
        for (x, img) in rows {
            f.set(vec![c(*x)], bag1(img)).unwrap();
        }
        f
    }

    #[test]
    fn compose_examples() {
        // h(a) = 2x, g(x) = y
        let h = fn1(&[(0, &[(1, 2)])]);
        let g = fn1(&[(1, &[(2, 1)])]);
        assert_eq!(g.compose(&h).unwrap().apply(&[c(0)]), bag1(&[(2, 2)]));
        let null = BagFn::null(d1(), d1());
        assert!(g.compose(&null).unwrap().is_null());
        // h(a) = x + y, g(x) = g(y) = z: expanding g* gives 2z
        let h = fn1(&[(0, &[(1, 1), (2, 1)])]);
        let g = fn1(&[(1, &[(3, 1)]), (2, &[(3, 1)])]);
        assert_eq!(g.compose(&h).unwrap().apply(&[c(0)]), bag1(&[(3, 2)]));
    }

    #[test]
    fn transpose_swaps_arguments() {
        let f = fn1(&[(0, &[(1, 1), (2, 3)]), (1, &[(2, 1)])]);
        let t = f.transpose();
        assert_eq!(t.apply(&[c(2)]), bag1(&[(0, 3), (1, 1)]));
        assert_eq!(t.transpose(), f);
    }

    const SIZE: u32 = 5;

    fn arb_bag() -> impl Strategy<Value = Bag> {
        proptest::collection::vec((0..SIZE, 0u64..4), 0..6).prop_map(|v| {
            Bag::from_entries(d1(), v.into_iter().map(|(i, k)| (vec![c(i)], k))).unwrap()
        })
    }

    fn arb_fn() -> impl Strategy<Value = BagFn> {
        proptest::collection::vec(arb_bag(), SIZE as usize).prop_map(|rows| {
            let mut f = BagFn::null(d1(), d1());
            for (i, b) in rows.into_iter().enumerate() {
                f.set(vec![c(i as u32)], b).unwrap();
            }
            f
        })
    }

    proptest! {
        #[test]
        fn sum_laws(a in arb_bag(), b in arb_bag(), e in arb_bag()) {
            prop_assert_eq!(a.sum(&b).unwrap(), b.sum(&a).unwrap());
            prop_assert_eq!(a.sum(&b).unwrap().sum(&e).unwrap(), a.sum(&b.sum(&e).unwrap()).unwrap());
            prop_assert_eq!(a.sum(&Bag::empty(d1())).unwrap(), a.clone());
            prop_assert_eq!(a.difference(&Bag::empty(d1())).unwrap(), a.clone());
            prop_assert!(a.difference(&b).unwrap().leq(&a).unwrap());
        }

        #[test]
        fn support_laws(a in arb_bag(), b in arb_bag()) {
            prop_assert_eq!(a.support().support(), a.support());
            let union = a.sum(&b).unwrap().support();
            for i in 0..SIZE {
                let t = [c(i)];
                prop_assert_eq!(union.get(&t) == 1, a.get(&t) > 0 || b.get(&t) > 0);
            }
        }

        #[test]
        fn product_multiplicity_law(a in arb_bag(), b in arb_bag()) {
            let p = a.product(&b).unwrap();
            for x in 0..SIZE {
                for y in 0..SIZE {
                    prop_assert_eq!(p.get(&[c(x), c(y)]), a.get(&[c(x)]) * b.get(&[c(y)]));
                }
            }
        }

        #[test]
        fn compose_laws(f in arb_fn(), g in arb_fn(), h in arb_fn(), g2 in arb_fn()) {
            let left = f.compose(&g.compose(&h).unwrap()).unwrap();
            let right = f.compose(&g).unwrap().compose(&h).unwrap();
            prop_assert_eq!(left, right);
            let dist = g.sum(&g2).unwrap().compose(&h).unwrap();
            let split = g.compose(&h).unwrap().sum(&g2.compose(&h).unwrap()).unwrap();
            prop_assert_eq!(dist, split);
        }
    }
}
