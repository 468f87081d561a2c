//! Canonical labelling of bag tuples under colour permutations, by
//! individualization and refinement.

use std::collections::BTreeMap;

use crate::bag::{Bag, ClassId, Colour};

/// Per-class colour permutation: `maps[class][old] = new`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    pub maps: Vec<Vec<u32>>,
}

impl Permutation {
    pub fn identity(sizes: &[u32]) -> Self {
        Permutation { maps: sizes.iter().map(|s| (0..*s).collect()).collect() }
    }

    pub fn apply(&self, c: Colour) -> Colour {
        Colour::new(c.class, self.maps[c.class.0][c.index as usize])
    }

    pub fn inverse(&self) -> Permutation {
        let maps = self
            .maps
            .iter()
            .map(|m| {
                let mut inv = vec![0; m.len()];
                for (i, j) in m.iter().enumerate() {
                    inv[*j as usize] = i as u32;
                }
                inv
            })
            .collect();
        Permutation { maps }
    }
}

pub(crate) struct Structure<'a> {
    bags: &'a [Bag],
    /// Used colours, sorted.
    vertices: Vec<Colour>,
    /// (bag, multiplicity, vertex index per position)
    tokens: Vec<(usize, u64, Vec<usize>)>,
    /// Tokens incident to each vertex.
    incident: Vec<Vec<usize>>,
}

pub(crate) struct CanonResult {
    pub bags: Vec<Bag>,
    pub witness: Permutation,
    pub automorphisms: u128,
    /// Twin classes as sorted vertex lists, in colour order.
    pub twins: Vec<Vec<Colour>>,
}

impl<'a> Structure<'a> {
    pub fn new(bags: &'a [Bag]) -> Self {
        let mut vertices: Vec<Colour> = bags.iter().flat_map(|b| b.iter().flat_map(|(t, _)| t.iter().copied())).collect();
        vertices.sort();
        vertices.dedup();
        let index: BTreeMap<Colour, usize> = vertices.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut tokens = Vec::new();
        let mut incident = vec![Vec::new(); vertices.len()];
        for (b, bag) in bags.iter().enumerate() {
            for (t, k) in bag.iter() {
                let vs: Vec<usize> = t.iter().map(|c| index[c]).collect();
                for v in &vs {
                    if incident[*v].last() != Some(&tokens.len()) {
                        incident[*v].push(tokens.len());
                    }
                }
                tokens.push((b, k, vs));
            }
        }
        Structure { bags, vertices, tokens, incident }
    }

    fn relabel(&self, order: &[usize]) -> (Vec<Bag>, BTreeMap<Colour, Colour>) {
        // order[v] = rank of v; ranks are grouped by class in class order
        let mut per_class: BTreeMap<ClassId, Vec<(usize, usize)>> = BTreeMap::new();
        for (v, c) in self.vertices.iter().enumerate() {
            per_class.entry(c.class).or_default().push((order[v], v));
        }
        let mut map = BTreeMap::new();
        for (class, mut vs) in per_class {
            vs.sort();
            for (i, (_, v)) in vs.into_iter().enumerate() {
                map.insert(self.vertices[v], Colour::new(class, i as u32));
            }
        }
        let bags = self.bags.iter().map(|b| b.map_colours(|c| map[&c]).expect("bijection")).collect();
        (bags, map)
    }

    fn swap_is_automorphism(&self, u: usize, v: usize) -> bool {
        let (cu, cv) = (self.vertices[u], self.vertices[v]);
        let swap = |c: Colour| if c == cu { cv } else if c == cv { cu } else { c };
        self.incident[u].iter().chain(&self.incident[v]).all(|t| {
            let (b, k, _) = &self.tokens[*t];
            let bag = &self.bags[*b];
            let key: Vec<Colour> = self.tokens[*t].2.iter().map(|x| swap(self.vertices[*x])).collect();
            bag.get(&key) == *k
        })
    }

    /// Twin classes: colours whose transposition preserves every bag.
    fn twin_classes(&self) -> Vec<usize> {
        let n = self.vertices.len();
        let mut rep: Vec<usize> = (0..n).collect();
        for v in 0..n {
            for u in 0..v {
                if rep[u] == u && self.vertices[u].class == self.vertices[v].class && self.swap_is_automorphism(u, v) {
                    rep[v] = u;
                    break;
                }
            }
        }
        rep
    }

    /// Splits cells until stable. `cells[v]` is an ordered cell rank.
    fn refine(&self, cells: &mut Vec<usize>) {
        let n = cells.len();
        let mut count = distinct(cells);
        loop {
            let mut sigs: Vec<(usize, Vec<(usize, u64, Vec<usize>)>)> = Vec::with_capacity(n);
            for v in 0..n {
                let mut s: Vec<(usize, u64, Vec<usize>)> = self.incident[v]
                    .iter()
                    .map(|t| {
                        let (b, k, vs) = &self.tokens[*t];
                        (*b, *k, vs.iter().map(|x| if *x == v { usize::MAX } else { cells[*x] }).collect())
                    })
                    .collect();
                s.sort();
                sigs.push((cells[v], s));
            }
            let mut sorted: Vec<&(usize, Vec<(usize, u64, Vec<usize>)>)> = sigs.iter().collect();
            sorted.sort();
            sorted.dedup();
            let next: Vec<usize> = sigs.iter().map(|s| sorted.binary_search(&s).expect("present")).collect();
            let c = sorted.len();
            *cells = next;
            if c == count {
                break;
            }
            count = c;
        }
    }

    pub fn canonicalize(&self, sizes: &[u32]) -> CanonResult {
        let n = self.vertices.len();
        let twin_rep = self.twin_classes();
        let mut cells: Vec<usize> = self.vertices.iter().map(|c| c.class.0).collect();
        compact(&mut cells);
        self.refine(&mut cells);
        let mut best: Option<(Vec<Bag>, Vec<usize>)> = None;
        let mut count: u128 = 0;
        self.search(cells, &twin_rep, 1, &mut best, &mut count);
        let (bags, order) = best.unwrap_or_else(|| (self.bags.to_vec(), Vec::new()));
        let (_, map) = self.relabel(&order);
        let mut witness = Permutation::identity(sizes);
        for (class, m) in witness.maps.iter_mut().enumerate() {
            let used: Vec<(u32, u32)> = map
                .iter()
                .filter(|(c, _)| c.class.0 == class)
                .map(|(c, d)| (c.index, d.index))
                .collect();
            let targets: Vec<u32> = used.iter().map(|(_, d)| *d).collect();
            let mut free = (0..m.len() as u32).filter(|d| !targets.contains(d));
            for (i, slot) in m.iter_mut().enumerate() {
                *slot = match used.iter().find(|(c, _)| *c == i as u32) {
                    Some((_, d)) => *d,
                    None => free.next().expect("counts match"),
                };
            }
        }
        let mut groups: BTreeMap<usize, Vec<Colour>> = BTreeMap::new();
        for v in 0..n {
            groups.entry(twin_rep[v]).or_default().push(self.vertices[v]);
        }
        CanonResult { bags, witness, automorphisms: count.max(1), twins: groups.into_values().collect() }
    }

    fn search(
        &self,
        cells: Vec<usize>,
        twin_rep: &[usize],
        weight: u128,
        best: &mut Option<(Vec<Bag>, Vec<usize>)>,
        count: &mut u128,
    ) {
        let n = cells.len();
        let mut sizes = vec![0usize; n];
        for c in &cells {
            sizes[*c] += 1;
        }
        let Some(target) = (0..n).find(|c| sizes[*c] > 1) else {
            let (bags, _) = self.relabel(&cells);
            match best {
                Some((b, _)) if bags > *b => {}
                Some((b, _)) if bags == *b => *count += weight,
                _ => {
                    *best = Some((bags, cells));
                    *count = weight;
                }
            }
            return;
        };
        let members: Vec<usize> = (0..n).filter(|v| cells[*v] == target).collect();
        let mut reps: BTreeMap<usize, (usize, u128)> = BTreeMap::new();
        for v in &members {
            let e = reps.entry(twin_rep[*v]).or_insert((*v, 0));
            e.1 += 1;
        }
        for (_, (v, mult)) in reps {
            let mut next: Vec<usize> =
                cells.iter().enumerate().map(|(u, c)| 2 * c + usize::from(*c == target && u != v)).collect();
            compact(&mut next);
            self.refine(&mut next);
            self.search(next, twin_rep, weight * mult, best, count);
        }
    }
}

fn distinct(cells: &[usize]) -> usize {
    let mut v = cells.to_vec();
    v.sort();
    v.dedup();
    v.len()
}

fn compact(cells: &mut [usize]) {
    let mut v = cells.to_vec();
    v.sort();
    v.dedup();
    for c in cells.iter_mut() {
        *c = v.binary_search(c).expect("present");
    }
}
