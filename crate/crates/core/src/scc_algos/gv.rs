use super::{grow, Frame};
use crate::automaton::{AcceptanceSet, StateRef};
use crate::cycle::{bfs_path, covering_cycle};
use crate::error::{Error, Result};
use crate::provider::AutomatonProvider;
use crate::search::{Explorer, SearchOutcome};
use crate::trace::{NoTrace, ReportKind, TraceEvent, Tracer};
use crate::verdict::{Lasso, Verdict};

/// Tarjan-based check that remembers the deepest accepting state on the
/// search path. A counterexample is reported when an edge reaches an active
/// state numbered no higher than that state, or when an accepting state
/// that is not an SCC root is backtracked.
pub fn gv_check<P: AutomatonProvider + ?Sized>(p: &mut P) -> Result<SearchOutcome> {
    gv_check_traced(p, &mut NoTrace)
}

pub fn gv_check_traced<P: AutomatonProvider + ?Sized>(
    p: &mut P,
    tracer: &mut dyn Tracer,
) -> Result<SearchOutcome> {
    if p.conditions() != 1 {
        return Err(Error::Contract(format!(
            "the lowlink check handles exactly one acceptance condition, got k = {}",
            p.conditions()
        )));
    }
    // dfsnum (32) + lowlink (32) + on-stack flag (1)
    let mut ex = Explorer::new(p, tracer, 65);
    let verdict = Gv::default().run(&mut ex)?;
    Ok(ex.finish(verdict))
}

#[derive(Clone, Copy, Default)]
struct GvNode {
    dfsnum: u32,
    lowlink: u32,
    current: bool,
}

#[derive(Default)]
struct Gv {
    nodes: Vec<GvNode>,
    active: Vec<StateRef>,
    /// dfsnums of the accepting states on the search path.
    accepting: Vec<u32>,
    frames: Vec<Frame>,
    count: u32,
}

impl Gv {
    fn node(&self, s: StateRef) -> GvNode {
        self.nodes.get(s.index()).copied().unwrap_or_default()
    }

    fn enter<P: AutomatonProvider + ?Sized>(&mut self, ex: &mut Explorer<'_, P>, s: StateRef) -> Result<()> {
        self.count += 1;
        grow(&mut self.nodes, s);
        self.nodes[s.index()] = GvNode {
            dfsnum: self.count,
            lowlink: self.count,
            current: true,
        };
        ex.trace(TraceEvent::Visit(s));
        self.active.push(s);
        if ex.accepting(s) {
            self.accepting.push(self.count);
        }
        let succ = ex.post(s)?;
        self.frames.push(Frame { state: s, succ, cursor: 0 });
        ex.depth(self.frames.len());
        Ok(())
    }

    fn run<P: AutomatonProvider + ?Sized>(&mut self, ex: &mut Explorer<'_, P>) -> Result<Verdict<StateRef>> {
        let init = ex.initial()?;
        self.enter(ex, init)?;

        while let Some(frame) = self.frames.last_mut() {
            let s = frame.state;
            if let Some(&t) = frame.succ.get(frame.cursor) {
                frame.cursor += 1;
                ex.edge(s, t);
                let nt = self.node(t);
                if nt.dfsnum == 0 {
                    self.enter(ex, t)?;
                } else if nt.current {
                    let ns = &mut self.nodes[s.index()];
                    ns.lowlink = ns.lowlink.min(nt.dfsnum);
                    if let Some(&deepest) = self.accepting.last() {
                        if nt.dfsnum <= deepest {
                            ex.trace(TraceEvent::Report(ReportKind::Lowlink));
                            return self.edge_counterexample(ex, deepest, t);
                        }
                    }
                }
                continue;
            }

            ex.trace(TraceEvent::Backtrack(s));
            let ns = self.node(s);
            if ex.accepting(s) {
                self.accepting.pop();
                if ns.lowlink < ns.dfsnum {
                    ex.trace(TraceEvent::Report(ReportKind::AcceptingBacktrack));
                    return self.backtrack_counterexample(ex, s);
                }
            }
            if ns.lowlink == ns.dfsnum {
                loop {
                    let u = self.active.pop().expect("active stack underflow");
                    self.nodes[u.index()].current = false;
                    ex.trace(TraceEvent::Inactive(u));
                    if u == s {
                        break;
                    }
                }
            }
            self.frames.pop();
            if let Some(parent) = self.frames.last() {
                let np = &mut self.nodes[parent.state.index()];
                np.lowlink = np.lowlink.min(ns.lowlink);
            }
        }
        Ok(Verdict::Empty)
    }

    /// Cycle: search path from the deepest accepting state down to the
    /// current state, the reported edge, then back through active states.
    fn edge_counterexample<P: AutomatonProvider + ?Sized>(
        &self,
        ex: &mut Explorer<'_, P>,
        deepest: u32,
        t: StateRef,
    ) -> Result<Verdict<StateRef>> {
        let pos = self
            .frames
            .iter()
            .position(|f| self.node(f.state).dfsnum == deepest)
            .ok_or_else(|| Error::Internal("deepest accepting state left the search path".into()))?;
        let anchor = self.frames[pos].state;
        let mut cycle: Vec<StateRef> = self.frames[pos..].iter().map(|f| f.state).collect();
        if t != anchor {
            let back = bfs_path(t, |x| ex.post_known(x), |x| self.node(x).current, |x| x == anchor)
                .ok_or_else(|| Error::Internal(format!("no path from {t} back to {anchor}")))?;
            cycle.push(t);
            cycle.extend_from_slice(&back[..back.len() - 1]);
        }
        Ok(Verdict::Counterexample(Lasso {
            prefix: self.frames[..pos].iter().map(|f| f.state).collect(),
            cycle,
        }))
    }

    fn backtrack_counterexample<P: AutomatonProvider + ?Sized>(
        &self,
        ex: &mut Explorer<'_, P>,
        s: StateRef,
    ) -> Result<Verdict<StateRef>> {
        let pos = self.frames.len() - 1;
        let only_s = |x: StateRef| if x == s { AcceptanceSet::full(1) } else { AcceptanceSet::EMPTY };
        let cycle = covering_cycle(s, 1, |x| ex.post_known(x), |x| self.node(x).current, only_s)
            .ok_or_else(|| Error::Internal(format!("no cycle through accepting state {s}")))?;
        Ok(Verdict::Counterexample(Lasso {
            prefix: self.frames[..pos].iter().map(|f| f.state).collect(),
            cycle,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::ExplicitGba;
    use crate::provider::explicit_provider;

    #[test]
    fn accepting_self_loop() {
        let mut g = ExplicitGba::new(1, 1);
        g.add_edge(0, 0);
        g.set_accepting(0, 1);
        let mut trace = Vec::new();
        let o = gv_check_traced(&mut explicit_provider(&g), &mut trace).unwrap();
        assert_eq!(o.verdict.lasso().unwrap().cycle.len(), 1);
        assert!(trace.contains(&TraceEvent::Report(ReportKind::Lowlink)));
        assert_eq!(o.metrics.transitions_explored, 1);
    }

    #[test]
    fn non_accepting_triangle() {
        let mut g = ExplicitGba::new(3, 1);
        g.add_edge(0, 1);
        g.add_edge(1, 2);
        g.add_edge(2, 0);
        let o = gv_check(&mut explicit_provider(&g)).unwrap();
        assert!(o.verdict.is_empty());
        assert_eq!(o.metrics.post_calls, 3);
    }

    #[test]
    fn rejects_generalized() {
        let g = ExplicitGba::new(1, 2);
        assert!(matches!(gv_check(&mut explicit_provider(&g)), Err(Error::Contract(_))));
        let g = ExplicitGba::new(1, 0);
        assert!(matches!(gv_check(&mut explicit_provider(&g)), Err(Error::Contract(_))));
    }
}
