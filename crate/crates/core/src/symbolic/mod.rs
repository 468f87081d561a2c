//! Colour symmetries: canonical representatives, symbolic markings with
//! dynamic subclasses, and the folded state space.

mod canon;
mod srg;

pub use canon::Permutation;
pub use srg::{build_srg, SrgEdge, SrgError, SymbolicGraph};

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::bag::{Bag, ClassId, Colour, Domain};
use crate::model::{Marking, Net};

use canon::Structure;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolicError {
    #[error("class {0} is ordered or partitioned; symmetry reduction needs plain classes")]
    Unsupported(String),
}

fn check_plain(net: &Net) -> Result<(), SymbolicError> {
    match net.non_plain_classes().first() {
        Some(c) => Err(SymbolicError::Unsupported(c.to_string())),
        None => Ok(()),
    }
}

fn sizes(net: &Net) -> Vec<u32> {
    net.classes().iter().map(|c| c.size).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canonical {
    /// Representative of the orbit; used colours of each class are relabelled
    /// onto its first indices.
    pub marking: Marking,
    /// Maps the input marking onto `marking`.
    pub witness: Permutation,
    /// Number of permutations of the used colours fixing the input.
    pub automorphisms: u128,
}

/// Canonical representative of `m` under permutations of every class.
/// Isomorphic markings, and only those, get equal representatives.
pub fn canonicalize(net: &Net, m: &Marking) -> Result<Canonical, SymbolicError> {
    check_plain(net)?;
    let r = Structure::new(m.bags()).canonicalize(&sizes(net));
    Ok(Canonical {
        marking: Marking::from_bags(net, r.bags).expect("same domains"),
        witness: r.witness,
        automorphisms: r.automorphisms,
    })
}

/// Joint representative of a marking and a binding: two instances of one
/// transition in `m` get the same key iff an automorphism of `m` maps one
/// binding to the other.
pub fn canonicalize_with_binding(
    net: &Net,
    m: &Marking,
    binding: &[Colour],
) -> Result<(Marking, Vec<Colour>), SymbolicError> {
    check_plain(net)?;
    let mut bags = m.bags().to_vec();
    let domain = Domain(binding.iter().map(|c| c.class).collect());
    bags.push(Bag::from_entries(domain, [(binding.to_vec(), 1)]).expect("binding tuple"));
    let mut r = Structure::new(&bags).canonicalize(&sizes(net));
    let b = r.bags.pop().expect("binding bag");
    let binding = b.iter().next().map(|(t, _)| t.clone()).unwrap_or_default();
    Ok((Marking::from_bags(net, r.bags).expect("same domains"), binding))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicSubclass {
    /// `z` + colour prefix + member indices, e.g. `znd23`.
    pub name: String,
    pub class: ClassId,
    /// The colours of the source marking this subclass stands for.
    pub members: Vec<Colour>,
}

impl DynamicSubclass {
    pub fn cardinality(&self) -> usize {
        self.members.len()
    }
}

/// A marking whose tuples range over dynamic subclasses; a symbolic tuple
/// stands for every ordinary tuple drawn from its subclasses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicMarking {
    pub subclasses: Vec<DynamicSubclass>,
    /// Per place: symbolic tuple (subclass indices) to multiplicity.
    pub bags: Vec<BTreeMap<Vec<usize>, u64>>,
    pub automorphisms: u128,
}

/// Groups interchangeable colours of `m` into dynamic subclasses. A group is
/// split into singletons when it meets itself inside a tuple.
pub fn to_symbolic(net: &Net, m: &Marking) -> Result<SymbolicMarking, SymbolicError> {
    check_plain(net)?;
    let r = Structure::new(m.bags()).canonicalize(&sizes(net));
    let mut groups = r.twins;
    loop {
        let of: BTreeMap<Colour, usize> =
            groups.iter().enumerate().flat_map(|(g, cs)| cs.iter().map(move |c| (*c, g))).collect();
        let mut repeated = vec![false; groups.len()];
        for bag in m.bags() {
            for (t, _) in bag.iter() {
                let mut gs: Vec<usize> = t.iter().map(|c| of[c]).collect();
                gs.sort();
                for w in gs.windows(2) {
                    if w[0] == w[1] && groups[w[0]].len() > 1 {
                        repeated[w[0]] = true;
                    }
                }
            }
        }
        if !repeated.contains(&true) {
            break;
        }
        groups = groups
            .into_iter()
            .zip(repeated)
            .flat_map(|(g, split)| if split { g.into_iter().map(|c| vec![c]).collect() } else { vec![g] })
            .collect();
    }
    groups.sort();
    let of: BTreeMap<Colour, usize> =
        groups.iter().enumerate().flat_map(|(g, cs)| cs.iter().map(move |c| (*c, g))).collect();
    let wide = groups.iter().flatten().any(|c| c.index >= 9);
    let subclasses = groups
        .iter()
        .map(|cs| {
            let idx: Vec<String> = cs.iter().map(|c| (c.index + 1).to_string()).collect();
            DynamicSubclass {
                name: format!("z{}{}", net.class(cs[0].class).prefix, idx.join(if wide { "_" } else { "" })),
                class: cs[0].class,
                members: cs.clone(),
            }
        })
        .collect();
    let bags = m
        .bags()
        .iter()
        .map(|bag| {
            let mut out = BTreeMap::new();
            for (t, k) in bag.iter() {
                out.insert(t.iter().map(|c| of[c]).collect::<Vec<_>>(), k);
            }
            out
        })
        .collect();
    Ok(SymbolicMarking { subclasses, bags, automorphisms: r.automorphisms })
}

impl SymbolicMarking {
    /// `Edge = <znd1,znd23> + <znd4,znd1>; |znd23|=2`, with cardinalities
    /// listed only when above one.
    pub fn display(&self, net: &Net) -> String {
        let mut s = String::new();
        for (p, bag) in net.places().iter().zip(&self.bags) {
            if !s.is_empty() {
                s.push_str("; ");
            }
            let _ = write!(s, "{} = ", p.name);
            if bag.is_empty() {
                s.push('0');
            }
            for (i, (t, k)) in bag.iter().enumerate() {
                if i > 0 {
                    s.push_str(" + ");
                }
                if *k != 1 {
                    let _ = write!(s, "{}", k);
                }
                let names: Vec<&str> = t.iter().map(|g| self.subclasses[*g].name.as_str()).collect();
                let _ = write!(s, "<{}>", names.join(","));
            }
        }
        for z in self.subclasses.iter().filter(|z| z.cardinality() > 1) {
            let _ = write!(s, "; |{}|={}", z.name, z.cardinality());
        }
        s
    }

    /// Number of ordinary markings represented when class `c` has
    /// `sizes[c]` colours.
    pub fn expand(&self, sizes: &[u32]) -> u128 {
        let mut used = vec![0u32; sizes.len()];
        for z in &self.subclasses {
            used[z.class.0] += z.cardinality() as u32;
        }
        let arrangements: u128 = sizes
            .iter()
            .zip(&used)
            .map(|(n, u)| (0..*u).map(|i| u128::from(n.saturating_sub(i))).product::<u128>())
            .product();
        arrangements / self.automorphisms
    }

    /// One ordinary marking in the class: every subclass mapped back to its
    /// source colours.
    pub fn representative(&self, net: &Net) -> Marking {
        let mut m = net.empty_marking();
        for (p, bag) in net.place_ids().zip(&self.bags) {
            let mut b = Bag::empty(net.place(p).domain.clone());
            for (t, k) in bag {
                let mut acc = vec![Vec::new()];
                for g in t {
                    acc = acc
                        .into_iter()
                        .flat_map(|pre| {
                            self.subclasses[*g].members.iter().map(move |c| {
                                let mut x: Vec<Colour> = pre.clone();
                                x.push(*c);
                                x
                            })
                        })
                        .collect();
                }
                for x in acc {
                    b.insert(x, *k).expect("domain");
                }
            }
            m.set(p, b);
        }
        m
    }
}
