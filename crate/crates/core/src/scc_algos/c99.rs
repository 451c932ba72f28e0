use super::{extract_lasso, grow, Frame, RootsEntry};
use crate::automaton::{AcceptanceSet, StateRef};
use crate::error::Result;
use crate::provider::AutomatonProvider;
use crate::search::{Explorer, SearchOutcome};
use crate::trace::{NoTrace, ReportKind, TraceEvent, Tracer};
use crate::verdict::Verdict;

/// Couvreur's original roots-stack algorithm. Without a Tarjan stack, a
/// finished SCC is marked removed by a second search from its root that
/// calls `post` again on every member; those calls are counted.
pub fn c99_check<P: AutomatonProvider + ?Sized>(p: &mut P) -> Result<SearchOutcome> {
    c99_check_traced(p, &mut NoTrace)
}

pub fn c99_check_traced<P: AutomatonProvider + ?Sized>(
    p: &mut P,
    tracer: &mut dyn Tracer,
) -> Result<SearchOutcome> {
    // dfsnum (32) + removed (1)
    let mut ex = Explorer::new(p, tracer, 33);
    let verdict = C99::default().run(&mut ex)?;
    Ok(ex.finish(verdict))
}

#[derive(Clone, Copy, Default)]
struct C99Node {
    dfsnum: u32,
    removed: bool,
}

#[derive(Default)]
struct C99 {
    nodes: Vec<C99Node>,
    roots: Vec<RootsEntry>,
    frames: Vec<Frame>,
    count: u32,
}

impl C99 {
    fn node(&self, s: StateRef) -> C99Node {
        self.nodes.get(s.index()).copied().unwrap_or_default()
    }

    fn enter<P: AutomatonProvider + ?Sized>(&mut self, ex: &mut Explorer<'_, P>, s: StateRef) -> Result<()> {
        self.count += 1;
        grow(&mut self.nodes, s);
        self.nodes[s.index()].dfsnum = self.count;
        let acc = ex.acc(s);
        ex.trace(TraceEvent::Visit(s));
        self.roots.push(RootsEntry { root: s, acc });
        ex.trace(TraceEvent::RootsPush(s, acc));
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
                } else if !nt.removed {
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
                self.remove(ex, s)?;
            }
            self.frames.pop();
        }
        Ok(Verdict::Empty)
    }

    /// Marks everything reachable from `root` that is not yet removed; at
    /// this point that is exactly `root`'s SCC.
    fn remove<P: AutomatonProvider + ?Sized>(&mut self, ex: &mut Explorer<'_, P>, root: StateRef) -> Result<()> {
        self.nodes[root.index()].removed = true;
        ex.trace(TraceEvent::Inactive(root));
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for y in ex.post(x)? {
                let ny = self.node(y);
                if !ny.removed {
                    debug_assert!(ny.dfsnum >= self.node(root).dfsnum, "removal search left the SCC");
                    self.nodes[y.index()].removed = true;
                    ex.trace(TraceEvent::Inactive(y));
                    stack.push(y);
                }
            }
            ex.depth(self.frames.len() + stack.len());
        }
        Ok(())
    }

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
                .expect("a root below every live state")
        };
        let floor = self.node(root).dfsnum;
        let lasso = extract_lasso(ex, &self.frames, root, |x| {
            let n = self.node(x);
            n.dfsnum >= floor && !n.removed
        })?;
        Ok(Verdict::Counterexample(lasso))
    }
}
