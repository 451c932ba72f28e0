//! Oracles used only by tests. None of them share code with the library's
//! own decomposition or search routines.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use buchi_core::gen::GenConfig;
use buchi_core::product::{pair_state, KripkeStructure, LabeledGba};
use buchi_core::{AcceptanceSet, ExplicitGba};

pub fn graph(n: usize, k: usize, edges: &[(usize, usize)], acc: &[(usize, usize)]) -> ExplicitGba {
    let mut g = ExplicitGba::new(n, k);
    for &(s, t) in edges {
        g.add_edge(s, t);
    }
    for &(s, j) in acc {
        g.set_accepting(s, j);
    }
    g
}

pub fn reachable_from_init(succ: &[Vec<usize>], init: usize) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([init]);
    let mut queue = VecDeque::from([init]);
    while let Some(s) = queue.pop_front() {
        for &t in &succ[s] {
            if seen.insert(t) {
                queue.push_back(t);
            }
        }
    }
    seen
}

/// Every simple cycle through reachable states, each listed once with its
/// smallest state first.
pub fn simple_cycles(g: &ExplicitGba) -> Vec<Vec<usize>> {
    let succ = g.successors();
    let live = reachable_from_init(succ, g.init());
    let mut out = Vec::new();
    for &start in &live {
        let mut path = vec![start];
        let mut on_path = vec![false; g.n()];
        on_path[start] = true;
        extend(succ, start, &mut path, &mut on_path, &mut out);
    }
    out
}

fn extend(
    succ: &[Vec<usize>],
    start: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let last = *path.last().unwrap();
    for &t in &succ[last] {
        if t == start {
            out.push(path.clone());
        } else if t > start && !on_path[t] {
            on_path[t] = true;
            path.push(t);
            extend(succ, start, path, on_path, out);
            path.pop();
            on_path[t] = false;
        }
    }
}

/// Non-empty iff the union of some family of pairwise-overlapping simple
/// cycles carries every condition. Overlapping cycles are merged with a
/// union-find over their states.
pub fn exhaustive_nonempty(g: &ExplicitGba) -> bool {
    let cycles = simple_cycles(g);
    let mut parent: Vec<usize> = (0..g.n()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    let mut on_cycle = vec![false; g.n()];
    for c in &cycles {
        for &s in c {
            on_cycle[s] = true;
            let (a, b) = (find(&mut parent, c[0]), find(&mut parent, s));
            parent[a] = b;
        }
    }
    let mut cover: BTreeMap<usize, AcceptanceSet> = BTreeMap::new();
    for s in (0..g.n()).filter(|&s| on_cycle[s]) {
        let r = find(&mut parent, s);
        let e = cover.entry(r).or_insert(AcceptanceSet::EMPTY);
        *e = e.union(g.acc(s));
    }
    let full = AcceptanceSet::full(g.k());
    cover.values().any(|&b| b == full)
}

/// Product states and transitions built by enumerating all pairs up front,
/// restricted to the part reachable from the initial pair.
pub fn eager_product(m: &KripkeStructure, a: &LabeledGba) -> BTreeSet<((usize, usize), (usize, usize))> {
    let na = a.n();
    let idx = |u: usize, q: usize| u * na + q;
    let mut succ = vec![Vec::new(); m.n() * na];
    for u in 0..m.n() {
        for q in 0..na {
            for &u2 in m.succ(u) {
                for (i, &q2) in a.succ(q).iter().enumerate() {
                    if a.guards(q)[i].eval(m.labels(u2)) {
                        succ[idx(u, q)].push(idx(u2, q2));
                    }
                }
            }
        }
    }
    let live = reachable_from_init(&succ, idx(m.init(), a.init()));
    let pair = |x: usize| (x / na, x % na);
    live.iter()
        .flat_map(|&x| succ[x].iter().map(move |&y| (pair(x), pair(y))))
        .collect()
}

/// Transitions of a materialized product, as pairs.
pub fn product_edges(g: &ExplicitGba, descriptors: &[buchi_core::StateDescriptor]) -> BTreeSet<((usize, usize), (usize, usize))> {
    let pair = |s: usize| pair_state(&descriptors[s]).unwrap();
    g.edges().map(|(s, t)| (pair(s), pair(t))).collect()
}

pub fn config(n: usize, deg: f64, k: usize, density: f64, seed: u64) -> GenConfig {
    GenConfig {
        n,
        avg_out_degree: deg,
        k,
        acc_density: density,
        seed,
    }
}

/// Smallest table exponent of at least 10 under which the states of `g`
/// hash to distinct slots with `seed`.
pub fn injective_bits(g: &ExplicitGba, seed: u64) -> u32 {
    use buchi_core::ndfs::bitstate::bitstate_slot;
    use buchi_core::provider::explicit_descriptor;
    (10..=30)
        .find(|&bits| {
            let slots: BTreeSet<u64> = (0..g.n()).map(|s| bitstate_slot(&explicit_descriptor(s), bits, seed)).collect();
            slots.len() == g.n()
        })
        .expect("an injective exponent")
}
