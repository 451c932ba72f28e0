//! Offline SCC decomposition (iterative Tarjan) and the weakness check.

use crate::automaton::ExplicitGba;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scc {
    /// Members in the order Tarjan popped them.
    pub states: Vec<usize>,
    /// False iff the SCC is a single state without a self-loop.
    pub nontrivial: bool,
}

impl Scc {
    pub fn contains(&self, s: usize) -> bool {
        self.states.contains(&s)
    }
}

/// Maximal SCCs of the part of `succ` reachable from `roots`, in completion
/// order: when SCC `A` reaches a different SCC `B`, `B` comes first.
pub(crate) fn tarjan(succ: &[Vec<usize>], roots: impl IntoIterator<Item = usize>) -> Vec<Scc> {
    const UNSEEN: usize = usize::MAX;
    let n = succ.len();
    let mut num = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut frames: Vec<(usize, usize)> = Vec::new();
    let mut counter = 0;
    let mut out = Vec::new();

    for root in roots {
        if num[root] != UNSEEN {
            continue;
        }
        num[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, 0));

        while let Some(frame) = frames.last_mut() {
            let s = frame.0;
            if let Some(&t) = succ[s].get(frame.1) {
                frame.1 += 1;
                if num[t] == UNSEEN {
                    num[t] = counter;
                    low[t] = counter;
                    counter += 1;
                    stack.push(t);
                    on_stack[t] = true;
                    frames.push((t, 0));
                } else if on_stack[t] {
                    low[s] = low[s].min(num[t]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[s]);
            }
            if low[s] == num[s] {
                let mut states = Vec::new();
                loop {
                    let u = stack.pop().expect("tarjan stack underflow");
                    on_stack[u] = false;
                    states.push(u);
                    if u == s {
                        break;
                    }
                }
                let nontrivial = states.len() > 1 || succ[s].contains(&s);
                out.push(Scc { states, nontrivial });
            }
        }
    }
    out
}

/// Partition of the reachable states into maximal SCCs, sinks first.
pub fn scc_decompose(g: &ExplicitGba) -> Vec<Scc> {
    tarjan(g.successors(), [g.init()])
}

/// SCCs of every state, reachable or not.
pub fn scc_decompose_all(g: &ExplicitGba) -> Vec<Scc> {
    tarjan(g.successors(), 0..g.n())
}

/// A Büchi automaton is weak when each reachable SCC lies entirely inside
/// or entirely outside the accepting set.
pub fn is_weak(g: &ExplicitGba) -> Result<bool> {
    if g.k() != 1 {
        return Err(Error::Contract(format!(
            "weakness is defined for one acceptance condition, got k = {}",
            g.k()
        )));
    }
    Ok(scc_decompose(g).iter().all(|c| {
        let first = g.is_accepting(c.states[0], 1);
        c.states.iter().all(|&s| g.is_accepting(s, 1) == first)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> ExplicitGba {
        let mut g = ExplicitGba::new(n, 1);
        for &(s, t) in edges {
            g.add_edge(s, t);
        }
        g
    }

    #[test]
    fn single_state() {
        let sccs = scc_decompose(&graph(1, &[]));
        assert_eq!(sccs, vec![Scc { states: vec![0], nontrivial: false }]);
        let sccs = scc_decompose(&graph(1, &[(0, 0)]));
        assert_eq!(sccs, vec![Scc { states: vec![0], nontrivial: true }]);
    }

    #[test]
    fn two_triangles() {
        let g = graph(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]);
        let sccs = scc_decompose(&g);
        assert_eq!(sccs.len(), 2);
        assert!(sccs.iter().all(|c| c.nontrivial && c.states.len() == 3));
        // the downstream triangle completes first
        assert!(sccs[0].contains(3) && sccs[1].contains(0));
    }

    #[test]
    fn unreachable_ignored() {
        let g = graph(3, &[(1, 2), (2, 1)]);
        assert_eq!(scc_decompose(&g).len(), 1);
        assert_eq!(scc_decompose_all(&g).len(), 2);
    }

    #[test]
    fn weakness() {
        let mut g = graph(2, &[(0, 1), (1, 0)]);
        g.set_accepting(0, 1);
        g.set_accepting(1, 1);
        assert!(is_weak(&g).unwrap());

        let mut g = graph(2, &[(0, 1), (1, 0)]);
        g.set_accepting(0, 1);
        assert!(!is_weak(&g).unwrap());

        assert!(matches!(is_weak(&ExplicitGba::new(1, 2)), Err(Error::Contract(_))));
    }

    #[test]
    fn deep_chain_does_not_overflow() {
        let n = 200_000;
        let mut g = ExplicitGba::new(n, 1);
        for s in 0..n - 1 {
            g.add_edge(s, s + 1);
        }
        g.add_edge(n - 1, 0);
        let sccs = scc_decompose(&g);
        assert_eq!(sccs.len(), 1);
        assert_eq!(sccs[0].states.len(), n);
    }
}
