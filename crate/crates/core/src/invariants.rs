//! Debug mode: replays a search trace against shadow data recomputed from
//! the materialized automaton and reports the first step at which an
//! invariant fails.
//!
//! Trace states are interned indices; `ids[i]` maps index `i` to the state
//! of the explicit automaton `g`.

use std::collections::HashSet;

use thiserror::Error;

use crate::automaton::{AcceptanceSet, ExplicitGba, StateDescriptor, StateRef};
use crate::bench::{run_exact, Algorithm};
use crate::error::{Error as CrateError, Result};
use crate::ndfs::Color;
use crate::oracle::oracle_emptiness;
use crate::provider::{explicit_provider, explicit_state};
use crate::scc::{scc_decompose_all, tarjan};
use crate::search::SearchOutcome;
use crate::trace::TraceEvent;
use crate::verdict::Lasso;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("trace step {step}: {message}")]
pub struct Violation {
    /// Index of the offending event.
    pub step: usize,
    pub message: String,
}

fn fail<T>(step: usize, message: impl Into<String>) -> Result<T, Violation> {
    Err(Violation {
        step,
        message: message.into(),
    })
}

/// Maps interned descriptors of an explicit-provider search to state ids.
pub fn explicit_ids(states: &[StateDescriptor]) -> Vec<usize> {
    states
        .iter()
        .map(|d| explicit_state(d).expect("explicit descriptor"))
        .collect()
}

/// `reach[s][t]`: `t` reachable from `s` in zero or more steps.
fn closure(succ: &[Vec<usize>]) -> Vec<Vec<bool>> {
    let n = succ.len();
    let mut reach = vec![vec![false; n]; n];
    for (s, row) in reach.iter_mut().enumerate() {
        let mut stack = vec![s];
        row[s] = true;
        while let Some(x) = stack.pop() {
            for &y in &succ[x] {
                if !row[y] {
                    row[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    reach
}

/// States of `g` from which some accepting cycle (k = 1) is reachable.
fn on_some_counterexample(g: &ExplicitGba, reach: &[Vec<bool>]) -> Vec<bool> {
    let mut accepting_cycle = vec![false; g.n()];
    for scc in scc_decompose_all(g) {
        if scc.nontrivial && scc.states.iter().any(|&s| !g.acc(s).is_empty()) {
            for &s in &scc.states {
                accepting_cycle[s] = true;
            }
        }
    }
    (0..g.n())
        .map(|s| (0..g.n()).any(|t| accepting_cycle[t] && reach[s][t]))
        .collect()
}

/// Colour invariants of the nested searches:
///
/// * cyan exactly on the outer search path, and every cyan state reaches
///   the innermost active state;
/// * blue states are non-accepting and finished (nested mode only);
/// * after each outer backtrack, no red state lies on a counterexample;
/// * every change is legal and starts from the replayed colour.
///
/// `nested = false` replays simple DFS, where accepting states turn blue.
pub fn check_color_trace(
    g: &ExplicitGba,
    ids: &[usize],
    events: &[TraceEvent],
    nested: bool,
) -> Result<(), Violation> {
    let reach = closure(g.successors());
    let doomed = on_some_counterexample(g, &reach);
    let mut colors = vec![Color::White; ids.len()];
    let mut on_path = vec![false; ids.len()];
    let mut path: Vec<StateRef> = Vec::new();
    let id = |s: StateRef| ids[s.index()];

    let checkpoint = |step: usize, colors: &[Color], on_path: &[bool], path: &[StateRef]| {
        for (i, &c) in colors.iter().enumerate() {
            if (c == Color::Cyan) != on_path[i] {
                return fail(step, format!("state {i} is {c} but on_path = {}", on_path[i]));
            }
            if c == Color::Cyan {
                let top = *path.last().expect("cyan state implies a path");
                if !reach[ids[i]][id(top)] {
                    return fail(step, format!("cyan state {i} cannot reach active state {top}"));
                }
            }
            if nested && c == Color::Blue && !g.acc(ids[i]).is_empty() {
                return fail(step, format!("blue state {i} is accepting"));
            }
        }
        Ok(())
    };

    for (step, ev) in events.iter().enumerate() {
        match *ev {
            TraceEvent::Visit(s) => {
                if colors[s.index()] != Color::White {
                    return fail(step, format!("outer search entered non-white state {s}"));
                }
                on_path[s.index()] = true;
                path.push(s);
            }
            TraceEvent::Color(s, old, new) => {
                let cur = colors[s.index()];
                if cur != old {
                    return fail(step, format!("state {s} is {cur}, trace claims {old}"));
                }
                if !old.may_become(new) {
                    return fail(step, format!("illegal change {old} -> {new} on {s}"));
                }
                colors[s.index()] = new;
            }
            TraceEvent::Edge(..) => checkpoint(step, &colors, &on_path, &path)?,
            TraceEvent::Backtrack(s) => {
                if path.last() != Some(&s) {
                    return fail(step, format!("backtrack from {s}, which is not on top of the path"));
                }
                path.pop();
                on_path[s.index()] = false;
                checkpoint(step, &colors, &on_path, &path)?;
                for (i, &c) in colors.iter().enumerate() {
                    if c == Color::Red && doomed[ids[i]] {
                        return fail(step, format!("red state {i} lies on a counterexample"));
                    }
                }
            }
            TraceEvent::Report(_) => return Ok(()),
            other => return fail(step, format!("unexpected event `{other}` in a nested search")),
        }
    }
    checkpoint(events.len(), &colors, &on_path, &path)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SccFamily {
    Ascc,
    C99,
    Gv,
}

/// Replayed data structures of an SCC-based search.
struct SccReplay {
    dfsnum: Vec<u32>,
    count: u32,
    path: Vec<StateRef>,
    roots: Vec<(StateRef, AcceptanceSet)>,
    last_popped: Option<StateRef>,
    /// Active states in discovery order.
    active: Vec<StateRef>,
    explored: Vec<Vec<usize>>,
    /// States made inactive by the latest root backtrack.
    retired: Vec<StateRef>,
    retired_root: Option<StateRef>,
    last_backtrack: Option<StateRef>,
}

impl SccReplay {
    fn acc(g: &ExplicitGba, ids: &[usize], s: StateRef) -> AcceptanceSet {
        g.acc(ids[s.index()])
    }

    /// Path numbering, stack order, mutual reachability of active states,
    /// and the Roots/Active correspondence, against a shadow SCC
    /// decomposition of the explored graph.
    fn checkpoint(
        &self,
        step: usize,
        g: &ExplicitGba,
        ids: &[usize],
        family: SccFamily,
    ) -> Result<(), Violation> {
        for w in self.path.windows(2) {
            if self.dfsnum[w[0].index()] >= self.dfsnum[w[1].index()] {
                return fail(step, format!("search path numbers not increasing at {} -> {}", w[0], w[1]));
            }
        }

        let visited: Vec<usize> = (0..self.dfsnum.len()).filter(|&i| self.dfsnum[i] > 0).collect();
        let sccs = tarjan(&self.explored, visited.iter().copied());
        let on_path: HashSet<usize> = self.path.iter().map(|s| s.index()).collect();
        let mut expected_roots: Vec<(StateRef, AcceptanceSet)> = Vec::new();
        let mut shadow_active = HashSet::new();
        for scc in &sccs {
            if !scc.states.iter().any(|s| on_path.contains(s)) {
                continue;
            }
            shadow_active.extend(scc.states.iter().copied());
            let root = *scc
                .states
                .iter()
                .min_by_key(|&&s| self.dfsnum[s])
                .expect("non-empty SCC");
            let acc = scc.states.iter().fold(AcceptanceSet::EMPTY, |b, &s| {
                b.union(Self::acc(g, ids, StateRef(s as u32)))
            });
            expected_roots.push((StateRef(root as u32), acc));
        }
        expected_roots.sort_by_key(|(r, _)| self.dfsnum[r.index()]);

        let active: HashSet<usize> = self.active.iter().map(|s| s.index()).collect();
        if active != shadow_active {
            let mut extra: Vec<_> = active.difference(&shadow_active).collect();
            let mut missing: Vec<_> = shadow_active.difference(&active).collect();
            extra.sort();
            missing.sort();
            return fail(step, format!("active set off: extra {extra:?}, missing {missing:?}"));
        }
        if family != SccFamily::C99 {
            for w in self.active.windows(2) {
                if self.dfsnum[w[0].index()] >= self.dfsnum[w[1].index()] {
                    return fail(step, "Active stack is not in discovery order");
                }
            }
        }

        if family != SccFamily::Gv {
            if self.roots != expected_roots {
                return fail(
                    step,
                    format!("roots stack {:?} differs from shadow {:?}", self.roots, expected_roots),
                );
            }
            let mut cursor = self.path.iter();
            for (r, _) in &self.roots {
                if !cursor.any(|s| s == r) {
                    return fail(step, format!("root {r} breaks the search-path subsequence"));
                }
            }
        }

        let mut order: Vec<usize> = active.iter().copied().collect();
        order.sort_by_key(|&s| self.dfsnum[s]);
        for (i, &s) in order.iter().enumerate() {
            let mut seen = vec![false; self.explored.len()];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(x) = stack.pop() {
                for &y in &self.explored[x] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
            if let Some(&t) = order[i + 1..].iter().find(|&&t| !seen[t]) {
                return fail(step, format!("active {s} does not reach higher-numbered active {t}"));
            }
        }
        Ok(())
    }

    /// The states retired at a root backtrack form one maximal SCC of the
    /// whole automaton.
    fn check_retired(
        &mut self,
        step: usize,
        ids: &[usize],
        component: &[usize],
    ) -> Result<(), Violation> {
        let Some(root) = self.retired_root.take() else {
            return Ok(());
        };
        let got: HashSet<usize> = self.retired.drain(..).map(|s| ids[s.index()]).collect();
        let c = component[ids[root.index()]];
        let want: HashSet<usize> = (0..component.len()).filter(|&s| component[s] == c).collect();
        if got != want {
            return fail(step, format!("backtrack from root {root} retired {got:?}, SCC is {want:?}"));
        }
        Ok(())
    }
}

/// Replays an ASCC, C99, or GV trace. Checked before every transition and
/// backtrack: increasing numbers along the search path, the active set
/// against the explored graph's SCCs that meet the path, the Roots stack
/// (roots and acceptance unions) against that decomposition, roots as a
/// subsequence of the path, reachability between active states in number
/// order, and Active in discovery order. At every root backtrack the
/// retired states must form one SCC of `g`.
pub fn check_scc_trace(
    g: &ExplicitGba,
    ids: &[usize],
    events: &[TraceEvent],
    family: SccFamily,
) -> Result<(), Violation> {
    let mut component = vec![usize::MAX; g.n()];
    for (c, scc) in scc_decompose_all(g).iter().enumerate() {
        for &s in &scc.states {
            component[s] = c;
        }
    }
    let mut r = SccReplay {
        dfsnum: vec![0; ids.len()],
        count: 0,
        path: Vec::new(),
        roots: Vec::new(),
        last_popped: None,
        active: Vec::new(),
        explored: vec![Vec::new(); ids.len()],
        retired: Vec::new(),
        retired_root: None,
        last_backtrack: None,
    };

    for (step, ev) in events.iter().enumerate() {
        match *ev {
            TraceEvent::Visit(s) => {
                r.check_retired(step, ids, &component)?;
                if r.dfsnum[s.index()] != 0 {
                    return fail(step, format!("state {s} visited twice"));
                }
                r.count += 1;
                r.dfsnum[s.index()] = r.count;
                r.path.push(s);
                r.active.push(s);
            }
            TraceEvent::Edge(s, t) => {
                r.check_retired(step, ids, &component)?;
                r.checkpoint(step, g, ids, family)?;
                if r.path.last() != Some(&s) {
                    return fail(step, format!("edge from {s}, which is not on top of the path"));
                }
                if !r.explored[s.index()].contains(&t.index()) {
                    r.explored[s.index()].push(t.index());
                }
            }
            TraceEvent::Backtrack(s) => {
                r.check_retired(step, ids, &component)?;
                r.checkpoint(step, g, ids, family)?;
                if r.path.pop() != Some(s) {
                    return fail(step, format!("backtrack from {s}, which is not on top of the path"));
                }
                r.last_backtrack = Some(s);
            }
            TraceEvent::RootsPush(s, b) => {
                if b != SccReplay::acc(g, ids, s) {
                    return fail(step, format!("roots-push {s} with {b}, state carries {}", SccReplay::acc(g, ids, s)));
                }
                r.roots.push((s, b));
            }
            TraceEvent::RootsPop(s) => {
                match r.roots.pop() {
                    Some((top, _)) if top == s => {}
                    other => return fail(step, format!("roots-pop {s}, top is {other:?}")),
                }
                r.last_popped = Some(s);
                if r.dfsnum[s.index()] > 0 && !r.path.contains(&s) {
                    // popped right after backtracking from it
                    r.retired_root = Some(s);
                }
            }
            TraceEvent::Collapse(b) => {
                let u = r.last_popped.take().ok_or_else(|| Violation {
                    step,
                    message: "collapse without popped roots".into(),
                })?;
                r.roots.push((u, b));
            }
            TraceEvent::Inactive(u) => {
                let pos = match family {
                    SccFamily::C99 => r.active.iter().position(|&x| x == u),
                    _ => (r.active.last() == Some(&u)).then(|| r.active.len() - 1),
                };
                let Some(pos) = pos else {
                    return fail(step, format!("state {u} made inactive out of order"));
                };
                r.active.remove(pos);
                r.retired.push(u);
                if r.retired_root.is_none() {
                    r.retired_root = r.last_backtrack;
                }
            }
            TraceEvent::Report(_) => return Ok(()),
            TraceEvent::Color(..) => return fail(step, "colour event in an SCC-based search"),
        }
    }
    r.check_retired(events.len(), ids, &component)?;
    r.checkpoint(events.len(), g, ids, family)
}

/// The report comes with the first explored transition that completes a
/// counterexample: replaying the explored graph edge by edge, the oracle
/// finds none before the last transition and one after it, and every
/// state of `lasso` (in `g`'s ids) was visited before the report.
pub fn check_detection_minimality(
    g: &ExplicitGba,
    ids: &[usize],
    events: &[TraceEvent],
    lasso: &Lasso<usize>,
) -> Result<(), Violation> {
    let report = events
        .iter()
        .position(|e| matches!(e, TraceEvent::Report(_)))
        .ok_or_else(|| Violation {
            step: events.len(),
            message: "no report in the trace of a counterexample".into(),
        })?;
    let mut explored = ExplicitGba::new(g.n(), g.k());
    explored.set_init(g.init());
    for s in 0..g.n() {
        explored.set_acceptance(s, g.acc(s));
    }
    let mut last_edge = None;
    for (step, ev) in events[..report].iter().enumerate() {
        if let TraceEvent::Edge(s, t) = *ev {
            if let Some(prev) = last_edge {
                if !oracle_emptiness(&explored).is_empty() {
                    return fail(prev, "a counterexample was already explored before this transition");
                }
            }
            explored.add_edge(ids[s.index()], ids[t.index()]);
            last_edge = Some(step);
        }
    }
    if oracle_emptiness(&explored).is_empty() {
        return fail(report, "report without a counterexample in the explored graph");
    }
    let mut visited = vec![false; g.n()];
    for ev in &events[..report] {
        if let TraceEvent::Visit(s) = *ev {
            visited[ids[s.index()]] = true;
        }
    }
    if let Some(s) = lasso.states().find(|&&s| !visited[s]) {
        return fail(report, format!("lasso state {s} was never visited"));
    }
    Ok(())
}

/// Runs `algo` on `g` with tracing and replays the trace through the
/// matching checker; SCC-based counterexamples are also checked for
/// detection minimality. Intended for small automata.
pub fn debug_check(g: &ExplicitGba, algo: Algorithm) -> Result<SearchOutcome> {
    let mut events: Vec<TraceEvent> = Vec::new();
    let outcome = run_exact(&mut explicit_provider(g), algo, &mut events)?;
    let ids = explicit_ids(&outcome.states);
    let verdict = outcome.verdict.clone().map(|d| explicit_state(&d).expect("explicit descriptor"));
    let scc = |family: SccFamily| -> std::result::Result<(), Violation> {
        check_scc_trace(g, &ids, &events, family)?;
        if let Some(lasso) = verdict.lasso() {
            check_detection_minimality(g, &ids, &events, lasso)?;
        }
        Ok(())
    };
    let checked = match algo {
        Algorithm::And => check_color_trace(g, &ids, &events, true),
        Algorithm::Sd => check_color_trace(g, &ids, &events, false),
        Algorithm::Ascc => scc(SccFamily::Ascc),
        Algorithm::C99 => scc(SccFamily::C99),
        Algorithm::Gv => scc(SccFamily::Gv),
        Algorithm::Baseline | Algorithm::BitstateAnd | Algorithm::BitstateSd => {
            return Err(CrateError::Config(format!("{algo} has no debug-mode checker")))
        }
    };
    checked.map_err(|v| CrateError::Internal(format!("{algo}: {v}")))?;
    Ok(outcome)
}
