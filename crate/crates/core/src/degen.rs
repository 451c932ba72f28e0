//! GBA to BA degeneralization by the counter construction.

use crate::automaton::{AcceptanceSet, ExplicitGba};

/// Index of copy `(s, i)` (1-based `i`) in the degeneralized automaton.
pub fn copy_index(s: usize, i: usize, k: usize) -> usize {
    s * k + (i - 1)
}

/// Produces a BA with `n·k` states `(s, i)` that is empty iff `g` is.
///
/// From copy `i`, an edge leaving a state in `A_i` advances the counter to
/// `i mod k + 1`; otherwise the counter stays. The accepting states are the
/// copies `(s, k)` with `s ∈ A_k`. For `k = 0` every state becomes accepting.
pub fn degeneralize(g: &ExplicitGba) -> ExplicitGba {
    let n = g.n();
    let k = g.k();
    if k == 0 {
        let mut out = ExplicitGba::new(n, 1);
        for s in 0..n {
            for &t in g.succ(s) {
                out.add_edge(s, t);
            }
            out.set_acceptance(s, AcceptanceSet::EMPTY.with(1));
        }
        out.set_init(g.init());
        return out;
    }

    let mut out = ExplicitGba::new(n * k, 1);
    for s in 0..n {
        for i in 1..=k {
            let j = if g.is_accepting(s, i) { i % k + 1 } else { i };
            let from = copy_index(s, i, k);
            for &t in g.succ(s) {
                out.add_edge(from, copy_index(t, j, k));
            }
        }
        if g.is_accepting(s, k) {
            out.set_accepting(copy_index(s, k, k), 1);
        }
    }
    out.set_init(copy_index(g.init(), 1, k));
    out
}
