//! Nested depth-first search.
//!
//! Three exact variants share the colour vocabulary below:
//!
//! * [`ndfs_baseline`]: the classic two-search pattern. The outer search
//!   runs in post-order; backtracking from an accepting seed launches a
//!   nested search that reports only when it gets back to the seed.
//! * [`and_check`]: the improved nested DFS. The outer search reports as
//!   soon as an edge closes a cycle through an accepting state on the search
//!   path, states whose successors are all red turn red without a nested
//!   search, and nested searches report on reaching any state of the path.
//! * [`sd_check`]: the outer search alone, which is complete for weak
//!   automata.
//!
//! [`bitstate`] runs AND or SD with colours kept in a hashed bit table.
//!
//! All searches are iterative; a frame holds the state, its successor list
//! and a cursor into it.

pub mod bitstate;

use std::fmt;
use std::str::FromStr;

use crate::automaton::StateRef;
use crate::error::{Error, Result};
use crate::provider::AutomatonProvider;
use crate::search::{Caveat, Explorer, SearchOutcome};
use crate::trace::{NoTrace, ReportKind, TraceEvent, Tracer};
use crate::verdict::{Lasso, Verdict};

/// Two-bit state colour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
#[repr(u8)]
pub enum Color {
    #[default]
    White = 0,
    Cyan = 1,
    Blue = 2,
    Red = 3,
}

impl Color {
    pub(crate) fn from_bits(bits: u8) -> Color {
        match bits & 3 {
            0 => Color::White,
            1 => Color::Cyan,
            2 => Color::Blue,
            _ => Color::Red,
        }
    }

    /// Whether `self -> next` is one of the permitted colour changes.
    pub fn may_become(self, next: Color) -> bool {
        matches!(
            (self, next),
            (Color::White, Color::Cyan)
                | (Color::Cyan, Color::Blue)
                | (Color::Cyan, Color::Red)
                | (Color::Blue, Color::Red)
        )
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::White => "white",
            Color::Cyan => "cyan",
            Color::Blue => "blue",
            Color::Red => "red",
        })
    }
}

impl FromStr for Color {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "white" => Ok(Color::White),
            "cyan" => Ok(Color::Cyan),
            "blue" => Ok(Color::Blue),
            "red" => Ok(Color::Red),
            other => Err(format!("unknown colour `{other}`")),
        }
    }
}

/// Frame of the outer search.
#[derive(Debug)]
pub(crate) struct SearchFrame {
    pub(crate) state: StateRef,
    pub(crate) succ: Vec<StateRef>,
    pub(crate) cursor: usize,
    pub(crate) allred: bool,
    /// Set while the child at `succ[cursor]` is being searched.
    pub(crate) pending: bool,
}

impl SearchFrame {
    fn new(state: StateRef, succ: Vec<StateRef>) -> Self {
        SearchFrame {
            state,
            succ,
            cursor: 0,
            allred: true,
            pending: false,
        }
    }
}

struct RedFrame {
    state: StateRef,
    succ: Vec<StateRef>,
    cursor: usize,
}

#[derive(Default)]
struct Colors(Vec<Color>);

impl Colors {
    #[inline]
    fn get(&self, s: StateRef) -> Color {
        self.0.get(s.index()).copied().unwrap_or_default()
    }

    fn set<P: AutomatonProvider + ?Sized>(&mut self, ex: &mut Explorer<'_, P>, s: StateRef, c: Color) {
        let i = s.index();
        if i >= self.0.len() {
            self.0.resize(i + 1, Color::White);
        }
        let old = self.0[i];
        debug_assert!(old.may_become(c), "illegal colour change {old} -> {c}");
        self.0[i] = c;
        ex.trace(TraceEvent::Color(s, old, c));
    }
}

fn require_single_condition<P: AutomatonProvider + ?Sized>(p: &P, what: &str) -> Result<()> {
    match p.conditions() {
        1 => Ok(()),
        k => Err(Error::Contract(format!(
            "{what} needs exactly one acceptance condition, got k = {k}"
        ))),
    }
}

/// Lasso for an outer-search hit: edge `path.last() -> path[pos]`, followed
/// by the nested path after the seed (empty for outer hits).
fn path_lasso(path: &[StateRef], pos: usize, red_tail: &[StateRef]) -> Lasso<StateRef> {
    let mut cycle = path[pos..].to_vec();
    cycle.extend_from_slice(red_tail);
    Lasso {
        prefix: path[..pos].to_vec(),
        cycle,
    }
}

fn blue_path(blue: &[SearchFrame]) -> Vec<StateRef> {
    blue.iter().map(|f| f.state).collect()
}

/// Classic nested DFS with separate visited and nested-visited bits. The
/// nested search marks its seed, explores every unmarked state, and reports
/// only when an edge leads back to the seed.
pub fn ndfs_baseline<P: AutomatonProvider + ?Sized>(p: &mut P) -> Result<SearchOutcome> {
    ndfs_baseline_traced(p, &mut NoTrace)
}

pub fn ndfs_baseline_traced<P: AutomatonProvider + ?Sized>(
    p: &mut P,
    tracer: &mut dyn Tracer,
) -> Result<SearchOutcome> {
    require_single_condition(p, "nested DFS")?;
    let mut ex = Explorer::new(p, tracer, 2);
    let verdict = baseline_search(&mut ex)?;
    Ok(ex.finish(verdict))
}

fn baseline_search<P: AutomatonProvider + ?Sized>(ex: &mut Explorer<'_, P>) -> Result<Verdict<StateRef>> {
    let mut visited: Vec<bool> = Vec::new();
    let mut red: Vec<bool> = Vec::new();
    fn mark(bits: &mut Vec<bool>, s: StateRef) {
        if s.index() >= bits.len() {
            bits.resize(s.index() + 1, false);
        }
        bits[s.index()] = true;
    }
    let is = |bits: &Vec<bool>, s: StateRef| bits.get(s.index()).copied().unwrap_or(false);

    let init = ex.initial()?;
    mark(&mut visited, init);
    ex.trace(TraceEvent::Visit(init));
    let succ = ex.post(init)?;
    let mut blue = vec![SearchFrame::new(init, succ)];
    ex.depth(1);

    while let Some(frame) = blue.last_mut() {
        let s = frame.state;
        if let Some(&t) = frame.succ.get(frame.cursor) {
            frame.cursor += 1;
            ex.edge(s, t);
            if !is(&visited, t) {
                mark(&mut visited, t);
                ex.trace(TraceEvent::Visit(t));
                let succ = ex.post(t)?;
                blue.push(SearchFrame::new(t, succ));
                ex.depth(blue.len());
            }
            continue;
        }

        if ex.accepting(s) {
            mark(&mut red, s);
            let succ = ex.post(s)?;
            let mut nested = vec![RedFrame { state: s, succ, cursor: 0 }];
            while let Some(rf) = nested.last_mut() {
                let Some(&t) = rf.succ.get(rf.cursor) else {
                    nested.pop();
                    continue;
                };
                rf.cursor += 1;
                let from = rf.state;
                ex.edge(from, t);
                if t == s {
                    ex.trace(TraceEvent::Report(ReportKind::SeedCycle));
                    let path = blue_path(&blue);
                    let tail: Vec<StateRef> = nested[1..].iter().map(|f| f.state).collect();
                    return Ok(Verdict::Counterexample(path_lasso(&path, path.len() - 1, &tail)));
                }
                if !is(&red, t) {
                    mark(&mut red, t);
                    let succ = ex.post(t)?;
                    nested.push(RedFrame { state: t, succ, cursor: 0 });
                    ex.depth(blue.len() + nested.len());
                }
            }
        }
        ex.trace(TraceEvent::Backtrack(s));
        blue.pop();
    }
    Ok(Verdict::Empty)
}

/// The improved nested DFS (AND).
pub fn and_check<P: AutomatonProvider + ?Sized>(p: &mut P) -> Result<SearchOutcome> {
    and_check_traced(p, &mut NoTrace)
}

pub fn and_check_traced<P: AutomatonProvider + ?Sized>(
    p: &mut P,
    tracer: &mut dyn Tracer,
) -> Result<SearchOutcome> {
    require_single_condition(p, "nested DFS")?;
    let mut ex = Explorer::new(p, tracer, 2);
    let verdict = and_search(&mut ex, true, true)?;
    Ok(ex.finish(verdict))
}

/// AND with the `allred := false` update removed, so every state looks
/// all-red. Incorrect on purpose: exists for mutation tests of the
/// differential harness.
#[doc(hidden)]
pub fn and_check_without_allred_reset<P: AutomatonProvider + ?Sized>(
    p: &mut P,
) -> Result<SearchOutcome> {
    require_single_condition(p, "nested DFS")?;
    let mut tracer = NoTrace;
    let mut ex = Explorer::new(p, &mut tracer, 2);
    let verdict = and_search(&mut ex, false, true)?;
    Ok(ex.finish(verdict))
}

/// Simple DFS: the outer search of AND without nested searches. Complete
/// only for weak automata; `weak_asserted = false` attaches
/// [`Caveat::UnsoundIfNotWeak`] to the outcome.
pub fn sd_check<P: AutomatonProvider + ?Sized>(p: &mut P, weak_asserted: bool) -> Result<SearchOutcome> {
    sd_check_traced(p, weak_asserted, &mut NoTrace)
}

pub fn sd_check_traced<P: AutomatonProvider + ?Sized>(
    p: &mut P,
    weak_asserted: bool,
    tracer: &mut dyn Tracer,
) -> Result<SearchOutcome> {
    require_single_condition(p, "simple DFS")?;
    let mut ex = Explorer::new(p, tracer, 2);
    let verdict = and_search(&mut ex, true, false)?;
    let mut outcome = ex.finish(verdict);
    if !weak_asserted {
        outcome.caveat = Some(Caveat::UnsoundIfNotWeak);
    }
    Ok(outcome)
}

fn and_search<P: AutomatonProvider + ?Sized>(
    ex: &mut Explorer<'_, P>,
    allred_reset: bool,
    nested: bool,
) -> Result<Verdict<StateRef>> {
    let mut colors = Colors::default();
    let init = ex.initial()?;
    let mut blue: Vec<SearchFrame> = Vec::new();
    enter(ex, &mut colors, &mut blue, init)?;

    while let Some(frame) = blue.last_mut() {
        let s = frame.state;

        if frame.pending {
            let t = frame.succ[frame.cursor];
            frame.pending = false;
            frame.cursor += 1;
            if allred_reset && colors.get(t) != Color::Red {
                frame.allred = false;
            }
            continue;
        }

        if let Some(&t) = frame.succ.get(frame.cursor) {
            ex.edge(s, t);
            let ct = colors.get(t);
            if ct == Color::Cyan && (ex.accepting(s) || ex.accepting(t)) {
                ex.trace(TraceEvent::Report(ReportKind::BlueCycle));
                let path = blue_path(&blue);
                let pos = path.iter().rposition(|&x| x == t).expect("cyan state on path");
                return Ok(Verdict::Counterexample(path_lasso(&path, pos, &[])));
            }
            if ct == Color::White {
                frame.pending = true;
                enter(ex, &mut colors, &mut blue, t)?;
                continue;
            }
            frame.cursor += 1;
            if allred_reset && ct != Color::Red {
                frame.allred = false;
            }
            continue;
        }

        if !nested {
            colors.set(ex, s, Color::Blue);
        } else if frame.allred {
            colors.set(ex, s, Color::Red);
        } else if ex.accepting(s) {
            if let Some(lasso) = red_search(ex, &mut colors, &blue, s)? {
                return Ok(Verdict::Counterexample(lasso));
            }
            colors.set(ex, s, Color::Red);
        } else {
            colors.set(ex, s, Color::Blue);
        }
        ex.trace(TraceEvent::Backtrack(s));
        blue.pop();
    }
    Ok(Verdict::Empty)
}

fn enter<P: AutomatonProvider + ?Sized>(
    ex: &mut Explorer<'_, P>,
    colors: &mut Colors,
    blue: &mut Vec<SearchFrame>,
    s: StateRef,
) -> Result<()> {
    ex.trace(TraceEvent::Visit(s));
    colors.set(ex, s, Color::Cyan);
    let succ = ex.post(s)?;
    blue.push(SearchFrame::new(s, succ));
    ex.depth(blue.len());
    Ok(())
}

/// Nested search from `seed`; turns blue states red and stops at the first
/// cyan state.
fn red_search<P: AutomatonProvider + ?Sized>(
    ex: &mut Explorer<'_, P>,
    colors: &mut Colors,
    blue: &[SearchFrame],
    seed: StateRef,
) -> Result<Option<Lasso<StateRef>>> {
    let succ = ex.post(seed)?;
    let mut stack = vec![RedFrame {
        state: seed,
        succ,
        cursor: 0,
    }];
    while let Some(rf) = stack.last_mut() {
        let Some(&t) = rf.succ.get(rf.cursor) else {
            stack.pop();
            continue;
        };
        rf.cursor += 1;
        let s = rf.state;
        ex.edge(s, t);
        match colors.get(t) {
            Color::Cyan => {
                ex.trace(TraceEvent::Report(ReportKind::RedCycle));
                let path = blue_path(blue);
                let pos = path.iter().rposition(|&x| x == t).expect("cyan state on path");
                let tail: Vec<StateRef> = stack[1..].iter().map(|f| f.state).collect();
                return Ok(Some(path_lasso(&path, pos, &tail)));
            }
            Color::Blue => {
                colors.set(ex, t, Color::Red);
                let succ = ex.post(t)?;
                stack.push(RedFrame {
                    state: t,
                    succ,
                    cursor: 0,
                });
                ex.depth(blue.len() + stack.len());
            }
            _ => {}
        }
    }
    Ok(None)
}
