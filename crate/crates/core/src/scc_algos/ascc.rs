use super::{extract_lasso, grow, Frame, NodeData, RootsEntry};
use crate::automaton::{AcceptanceSet, StateRef};
use crate::error::Result;
use crate::provider::AutomatonProvider;
use crate::search::{Explorer, SearchOutcome};
use crate::trace::{NoTrace, ReportKind, TraceEvent, Tracer};
use crate::verdict::Verdict;

/// Couvreur's algorithm amended with the Tarjan stack.
pub fn ascc_check<P: AutomatonProvider + ?Sized>(p: &mut P) -> Result<SearchOutcome> {
    ascc_check_traced(p, &mut NoTrace)
}

pub fn ascc_check_traced<P: AutomatonProvider + ?Sized>(
    p: &mut P,
    tracer: &mut dyn Tracer,
) -> Result<SearchOutcome> {
    // dfsnum (32) + current (1)
    let mut ex = Explorer::new(p, tracer, 33);
    let verdict = Ascc::default().run(&mut ex)?;
    Ok(ex.finish(verdict))
}

#[derive(Default)]
struct Ascc {
    nodes: Vec<NodeData>,
    roots: Vec<RootsEntry>,
    active: Vec<StateRef>,
    frames: Vec<Frame>,
    count: u32,
}

impl Ascc {
    fn node(&self, s: StateRef) -> NodeData {
        self.nodes.get(s.index()).copied().unwrap_or_default()
    }

    fn enter<P: AutomatonProvider + ?Sized>(&mut self, ex: &mut Explorer<'_, P>, s: StateRef) -> Result<()> {
        self.count += 1;
        grow(&mut self.nodes, s);
        self.nodes[s.index()] = NodeData {
            dfsnum: self.count,
            current: true,
        };
        let acc = ex.acc(s);
        ex.trace(TraceEvent::Visit(s));
        self.roots.push(RootsEntry { root: s, acc });
        ex.trace(TraceEvent::RootsPush(s, acc));
        self.active.push(s);
        let succ = ex.post(s)?;
        self.frames.push(Frame { state: s, succ, cursor: 0 });
        ex.depth(self.frames.len());
        Ok(())
    }

    fn run<P: AutomatonProvider + ?Sized>(&mut self, ex: &mut Explorer<'_, P>) -> Result<Verdict<StateRef>> {
        let full = AcceptanceSet::full(ex.conditions());
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
                    let mut merged = AcceptanceSet::EMPTY;
                    loop {
                        let RootsEntry { root: u, acc } = self.roots.pop().expect("roots stack underflow");
                        ex.trace(TraceEvent::RootsPop(u));
                        merged = merged.union(acc);
                        if merged == full {
                            ex.trace(TraceEvent::Report(ReportKind::Collapse));
                            return self.counterexample(ex, u, nt.dfsnum);
                        }
                        if self.node(u).dfsnum <= nt.dfsnum {
                            self.roots.push(RootsEntry { root: u, acc: merged });
                            ex.trace(TraceEvent::Collapse(merged));
                            break;
                        }
                    }
                }
                continue;
            }

            ex.trace(TraceEvent::Backtrack(s));
            if self.roots.last().map(|e| e.root) == Some(s) {
                self.roots.pop();
                ex.trace(TraceEvent::RootsPop(s));
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
        }
        Ok(Verdict::Empty)
    }

    /// `popped` is the last root taken off the stack when the merged set
    /// reached `K`; the merged SCC's root is the topmost root numbered at
    /// most `t_num`.
    fn counterexample<P: AutomatonProvider + ?Sized>(
        &self,
        ex: &mut Explorer<'_, P>,
        popped: StateRef,
        t_num: u32,
    ) -> Result<Verdict<StateRef>> {
        let root = if self.node(popped).dfsnum <= t_num {
            popped
        } else {
            self.roots
                .iter()
                .rev()
                .map(|e| e.root)
                .find(|&r| self.node(r).dfsnum <= t_num)
                .expect("a root below every active state")
        };
        let floor = self.node(root).dfsnum;
        let lasso = extract_lasso(ex, &self.frames, root, |x| {
            let n = self.node(x);
            n.current && n.dfsnum >= floor
        })?;
        Ok(Verdict::Counterexample(lasso))
    }
}
