//! Normal form back to arc-function syntax: a greedy cover of the term's
//! patterns by guarded tuples of projections, `All` and `All - ...`.

use std::collections::BTreeSet;

use crate::model::{ArcFunction, ClassFunction, FunctionTuple, Guard};

use super::term::{blocks, patterns, Term, TermKind};

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn or(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a | b).collect())
    }
    fn minus(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & !b).collect())
    }
    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }
}

#[derive(Clone)]
enum Comp {
    Proj(usize),
    All,
    AllBut(Vec<usize>),
}

impl Comp {
    fn value(&self, p: &[u8], k: usize, j: usize) -> i64 {
        let y = p[k + j];
        match self {
            Comp::Proj(i) => i64::from(p[*i] == y),
            Comp::All => 1,
            Comp::AllBut(s) => 1 - s.iter().filter(|i| p[**i] == y).count() as i64,
        }
    }

    fn cost(&self) -> usize {
        match self {
            Comp::Proj(_) | Comp::All => 0,
            Comp::AllBut(s) => s.len(),
        }
    }

    fn function(&self) -> ClassFunction {
        match self {
            Comp::Proj(i) => ClassFunction::proj(*i),
            Comp::All => ClassFunction::all(),
            Comp::AllBut(s) => ClassFunction::all_but(s),
        }
    }
}

fn conj(atoms: Vec<Guard>) -> Guard {
    atoms.into_iter().fold(Guard::True, Guard::and)
}

/// Guard pinning the exact equality pattern `x`.
fn pattern_guard(x: &[u8], offset: usize) -> Guard {
    let mut atoms = Vec::new();
    let reps: Vec<usize> = (0..blocks(x)).map(|b| x.iter().position(|v| *v as usize == b).unwrap()).collect();
    for (i, v) in x.iter().enumerate() {
        let r = reps[*v as usize];
        if r != i {
            atoms.push(Guard::Eq(offset + r, offset + i));
        }
    }
    for a in 0..reps.len() {
        for b in a + 1..reps.len() {
            atoms.push(Guard::Neq(offset + reps[a], offset + reps[b]));
        }
    }
    conj(atoms)
}

fn atom_count(g: &Guard) -> usize {
    match g {
        Guard::True | Guard::False => 0,
        Guard::And(a, b) | Guard::Or(a, b) => atom_count(a) + atom_count(b),
        Guard::Not(g) => atom_count(g),
        _ => 1,
    }
}

/// Guarded tuples whose union is exactly `universe` on the inputs satisfying
/// `context`; pairwise disjoint when `disjoint` is set.
fn cover_set(universe: &BTreeSet<Vec<u8>>, k: usize, m: usize, disjoint: bool, context: &Guard) -> Vec<FunctionTuple> {
    if universe.is_empty() {
        return Vec::new();
    }
    let pats = patterns(k + m);
    let n = pats.len();
    let mut uni = Bits::new(n);
    let mut free = Bits::new(n);
    for (i, p) in pats.iter().enumerate() {
        if universe.contains(p) {
            uni.set(i);
        } else if !context.eval_pattern(&p[..k]).unwrap_or(true) {
            free.set(i);
        }
    }
    let allowed = uni.or(&free);

    let mut comps = vec![Comp::All];
    comps.extend((0..k).map(Comp::Proj));
    for a in 0..k {
        comps.push(Comp::AllBut(vec![a]));
    }
    for a in 0..k {
        for b in a + 1..k {
            comps.push(Comp::AllBut(vec![a, b]));
        }
    }
    // one[j][c]: component c yields 1 at position j; bad[j][c]: yields neither 0 nor 1
    let mut one = vec![vec![Bits::new(n); comps.len()]; m];
    let mut bad = vec![vec![Bits::new(n); comps.len()]; m];
    for (i, p) in pats.iter().enumerate() {
        for j in 0..m {
            for (c, comp) in comps.iter().enumerate() {
                match comp.value(p, k, j) {
                    1 => one[j][c].set(i),
                    0 => {}
                    _ => bad[j][c].set(i),
                }
            }
        }
    }
    let mut guards = vec![Guard::True];
    for a in 0..k {
        for b in a + 1..k {
            guards.push(Guard::Eq(a, b));
            guards.push(Guard::Neq(a, b));
        }
    }
    if k > 1 {
        guards.extend(patterns(k).iter().map(|x| pattern_guard(x, 0)));
    }
    let guard_bits: Vec<Bits> = guards
        .iter()
        .map(|g| {
            let mut b = Bits::new(n);
            for (i, p) in pats.iter().enumerate() {
                if g.eval_pattern(&p[..k]).unwrap_or(false) {
                    b.set(i);
                }
            }
            b
        })
        .collect();

    // admissible candidates: (cost, bits, guard index, components)
    let mut cands: Vec<(usize, Bits, usize, Vec<usize>)> = Vec::new();
    let mut choice = vec![0usize; m];
    loop {
        for (gi, gb) in guard_bits.iter().enumerate() {
            let mut cov = gb.clone();
            let mut invalid = Bits::new(n);
            for (j, c) in choice.iter().enumerate() {
                cov = cov.and(&one[j][*c]);
                invalid = invalid.or(&bad[j][*c]);
            }
            if cov.and(&uni).is_empty() || !invalid.and(gb).minus(&free).is_empty() || !cov.minus(&allowed).is_empty() {
                continue;
            }
            let cost = atom_count(&guards[gi]) + choice.iter().map(|c| comps[*c].cost()).sum::<usize>();
            cands.push((cost, cov, gi, choice.clone()));
        }
        // next component combination
        let mut j = 0;
        while j < m {
            choice[j] += 1;
            if choice[j] < comps.len() {
                break;
            }
            choice[j] = 0;
            j += 1;
        }
        if j == m {
            break;
        }
    }

    let mut out = Vec::new();
    let mut left = uni.clone();
    loop {
        let best = cands
            .iter()
            .map(|(cost, bits, gi, ch)| (bits.and(&left).count(), *cost, gi, ch, bits))
            .filter(|c| c.0 > 0 && (!disjoint || c.4.and(&uni).minus(&left).is_empty()))
            .min_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let Some((_, _, gi, ch, bits)) = best else { break };
        let tuple = FunctionTuple::new(ch.iter().map(|c| comps[*c].function()).collect());
        out.push(if guards[*gi].is_true() { tuple } else { tuple.with_filter(guards[*gi].clone()) });
        left = left.minus(bits);
    }
    // patterns needing equalities among fresh outputs
    for (i, p) in pats.iter().enumerate() {
        if left.get(i) {
            out.push(exact_tuple(p, k));
        }
    }
    out
}

fn exact_tuple(p: &[u8], k: usize) -> FunctionTuple {
    let (x, y) = p.split_at(k);
    let reps: Vec<usize> = (0..blocks(x)).map(|b| x.iter().position(|v| *v as usize == b).unwrap()).collect();
    let components = y
        .iter()
        .map(|v| match x.iter().position(|u| u == v) {
            Some(i) => ClassFunction::proj(i),
            None => ClassFunction::all_but(&reps),
        })
        .collect();
    let mut t = FunctionTuple::new(components);
    let g = pattern_guard(x, 0);
    if !g.is_true() {
        t = t.with_filter(g);
    }
    let fresh: Vec<usize> = (0..y.len()).filter(|j| !x.contains(&y[*j])).collect();
    let mut atoms = Vec::new();
    for (a, ja) in fresh.iter().enumerate() {
        for jb in &fresh[a + 1..] {
            atoms.push(if y[*ja] == y[*jb] { Guard::Eq(*ja, *jb) } else { Guard::Neq(*ja, *jb) });
        }
    }
    if !atoms.is_empty() {
        t.cofilter = Some(conj(atoms));
    }
    t
}

/// Arc-function rendering of the large-class semantics of `t`. Set terms
/// print as unions; multiset terms as sums of their level sets.
pub fn to_arc(t: &Term) -> ArcFunction {
    to_arc_within(t, &Guard::True)
}

/// As [`to_arc`], leaving inputs that falsify `context` unconstrained.
pub fn to_arc_within(t: &Term, context: &Guard) -> ArcFunction {
    let limit: Vec<(&Vec<u8>, u64)> = t.limit_cells().collect();
    let mut f = ArcFunction::null();
    match t.kind {
        TermKind::Set => {
            let u: BTreeSet<Vec<u8>> = limit.iter().map(|(p, _)| (*p).clone()).collect();
            f.terms = cover_set(&u, t.from, t.to, false, context).into_iter().map(|x| (1, x)).collect();
        }
        TermKind::Multiset => {
            let top = limit.iter().map(|(_, m)| *m).max().unwrap_or(0);
            let mut level = 1;
            while level <= top {
                let u: BTreeSet<Vec<u8>> = limit.iter().filter(|(_, m)| *m >= level).map(|(p, _)| (*p).clone()).collect();
                let mut run = 1;
                while level + run <= top && limit.iter().filter(|(_, m)| *m >= level + run).count() == u.len() {
                    run += 1;
                }
                f.terms.extend(cover_set(&u, t.from, t.to, true, context).into_iter().map(|x| (run, x)));
                level += run;
            }
        }
    }
    f
}
