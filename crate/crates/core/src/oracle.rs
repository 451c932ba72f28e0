//! Ground truth: emptiness from the offline SCC decomposition, and lasso
//! validation against a provider.

use crate::automaton::{AcceptanceSet, ExplicitGba, StateDescriptor};
use crate::cycle::{bfs_path, covering_cycle};
use crate::provider::AutomatonProvider;
use crate::scc::scc_decompose;
use crate::verdict::{Lasso, Verdict};

/// Non-empty iff some reachable non-trivial SCC meets every `A_j`. The
/// witness loop lives inside that SCC and starts at its member closest to
/// the initial state.
pub fn oracle_emptiness(g: &ExplicitGba) -> Verdict<usize> {
    let full = AcceptanceSet::full(g.k());
    let Some(scc) = scc_decompose(g).into_iter().find(|c| {
        c.nontrivial
            && c.states
                .iter()
                .fold(AcceptanceSet::EMPTY, |b, &s| b.union(g.acc(s)))
                == full
    }) else {
        return Verdict::Empty;
    };

    let mut member = vec![false; g.n()];
    for &s in &scc.states {
        member[s] = true;
    }
    let succ = |s: usize| g.succ(s).to_vec();
    let (prefix, entry) = if member[g.init()] {
        (Vec::new(), g.init())
    } else {
        let path = bfs_path(g.init(), succ, |_| true, |s| member[s]).expect("SCC is reachable");
        let entry = *path.last().expect("non-empty path");
        let mut prefix = vec![g.init()];
        prefix.extend_from_slice(&path[..path.len() - 1]);
        (prefix, entry)
    };
    let cycle = covering_cycle(entry, g.k(), succ, |s| member[s], |s| g.acc(s))
        .expect("accepting SCC admits a covering cycle");
    Verdict::Counterexample(Lasso { prefix, cycle })
}

/// Checks a counterexample against the provider: it starts at the initial
/// state, every step is an edge, the cycle closes, and every condition
/// occurs on the cycle. `Empty` is never valid.
pub fn validate_lasso<P: AutomatonProvider + ?Sized>(p: &mut P, v: &Verdict<StateDescriptor>) -> bool {
    let Verdict::Counterexample(lasso) = v else {
        return false;
    };
    if lasso.cycle.is_empty() {
        return false;
    }
    let first = lasso.prefix.first().unwrap_or(&lasso.cycle[0]);
    if *first != p.initial() {
        return false;
    }
    let states: Vec<&StateDescriptor> = lasso.states().collect();
    for pair in states.windows(2) {
        if !p.post(pair[0]).contains(pair[1]) {
            return false;
        }
    }
    let last = lasso.cycle.last().expect("non-empty cycle");
    if !p.post(last).contains(&lasso.cycle[0]) {
        return false;
    }
    let covered = lasso
        .cycle
        .iter()
        .fold(AcceptanceSet::EMPTY, |b, s| b.union(p.acceptance(s)));
    AcceptanceSet::full(p.conditions()).is_subset(covered)
}
