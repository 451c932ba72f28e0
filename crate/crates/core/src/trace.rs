//! Debug trace of a search, one event per line.
//!
//! ```text
//! visit <s>            edge <s> <t>          color <s> <old> <new>
//! backtrack <s>        report <kind>
//! roots-push <s> <B>   roots-pop <s>         collapse <B>     inactive <s>
//! ```
//!
//! States are interned indices. Acceptance sets print as `{1,2}`.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use crate::automaton::{AcceptanceSet, StateRef};
use crate::ndfs::Color;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportKind {
    /// Cyan successor found by the outer (blue) search.
    BlueCycle,
    /// Cyan state reached by the nested (red) search.
    RedCycle,
    /// Nested search returned to its seed.
    SeedCycle,
    /// Roots collapse produced a merged SCC carrying all conditions.
    Collapse,
    /// Edge to an active state numbered at most the deepest accepting one.
    Lowlink,
    /// Backtrack from an accepting state that is not its SCC root.
    AcceptingBacktrack,
}

impl ReportKind {
    fn as_str(self) -> &'static str {
        match self {
            ReportKind::BlueCycle => "blue-cycle",
            ReportKind::RedCycle => "red-cycle",
            ReportKind::SeedCycle => "seed-cycle",
            ReportKind::Collapse => "collapse",
            ReportKind::Lowlink => "lowlink",
            ReportKind::AcceptingBacktrack => "accepting-backtrack",
        }
    }
}

impl fmt::Display for ReportKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ReportKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        use ReportKind::*;
        [BlueCycle, RedCycle, SeedCycle, Collapse, Lowlink, AcceptingBacktrack]
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown report kind `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceEvent {
    Visit(StateRef),
    Edge(StateRef, StateRef),
    Color(StateRef, Color, Color),
    Backtrack(StateRef),
    Report(ReportKind),
    RootsPush(StateRef, AcceptanceSet),
    RootsPop(StateRef),
    Collapse(AcceptanceSet),
    Inactive(StateRef),
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Visit(s) => write!(f, "visit {s}"),
            TraceEvent::Edge(s, t) => write!(f, "edge {s} {t}"),
            TraceEvent::Color(s, old, new) => write!(f, "color {s} {old} {new}"),
            TraceEvent::Backtrack(s) => write!(f, "backtrack {s}"),
            TraceEvent::Report(kind) => write!(f, "report {kind}"),
            TraceEvent::RootsPush(s, b) => write!(f, "roots-push {s} {b}"),
            TraceEvent::RootsPop(s) => write!(f, "roots-pop {s}"),
            TraceEvent::Collapse(b) => write!(f, "collapse {b}"),
            TraceEvent::Inactive(s) => write!(f, "inactive {s}"),
        }
    }
}

fn parse_state(word: Option<&str>) -> Result<StateRef, String> {
    let word = word.ok_or("missing state")?;
    word.parse().map(StateRef).map_err(|_| format!("bad state `{word}`"))
}

fn parse_set(word: Option<&str>) -> Result<AcceptanceSet, String> {
    let word = word.ok_or("missing acceptance set")?;
    let inner = word
        .strip_prefix('{')
        .and_then(|w| w.strip_suffix('}'))
        .ok_or_else(|| format!("bad acceptance set `{word}`"))?;
    let mut set = AcceptanceSet::EMPTY;
    for part in inner.split(',').filter(|p| !p.is_empty()) {
        let j: usize = part.parse().map_err(|_| format!("bad condition `{part}`"))?;
        if !(1..=crate::automaton::MAX_CONDITIONS).contains(&j) {
            return Err(format!("condition {j} out of range"));
        }
        set.insert(j);
    }
    Ok(set)
}

impl FromStr for TraceEvent {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, String> {
        let mut words = line.split_whitespace();
        let keyword = words.next().ok_or("empty trace line")?;
        let event = match keyword {
            "visit" => TraceEvent::Visit(parse_state(words.next())?),
            "edge" => TraceEvent::Edge(parse_state(words.next())?, parse_state(words.next())?),
            "color" => {
                let s = parse_state(words.next())?;
                let old = words.next().ok_or("missing colour")?.parse()?;
                let new = words.next().ok_or("missing colour")?.parse()?;
                TraceEvent::Color(s, old, new)
            }
            "backtrack" => TraceEvent::Backtrack(parse_state(words.next())?),
            "report" => TraceEvent::Report(words.next().ok_or("missing report kind")?.parse()?),
            "roots-push" => TraceEvent::RootsPush(parse_state(words.next())?, parse_set(words.next())?),
            "roots-pop" => TraceEvent::RootsPop(parse_state(words.next())?),
            "collapse" => TraceEvent::Collapse(parse_set(words.next())?),
            "inactive" => TraceEvent::Inactive(parse_state(words.next())?),
            other => return Err(format!("unknown trace event `{other}`")),
        };
        match words.next() {
            None => Ok(event),
            Some(extra) => Err(format!("trailing `{extra}` in trace line")),
        }
    }
}

/// Parses a whole trace, skipping blank lines.
pub fn parse_trace(src: &str) -> Result<Vec<TraceEvent>, String> {
    src.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| l.parse().map_err(|e| format!("line {}: {e}", i + 1)))
        .collect()
}

pub trait Tracer {
    fn event(&mut self, event: TraceEvent);

    /// Lets searches skip building events nobody listens to.
    fn enabled(&self) -> bool {
        true
    }
}

/// Discards everything.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoTrace;

impl Tracer for NoTrace {
    fn event(&mut self, _: TraceEvent) {}

    fn enabled(&self) -> bool {
        false
    }
}

impl Tracer for Vec<TraceEvent> {
    fn event(&mut self, event: TraceEvent) {
        self.push(event);
    }
}

/// Streams events as text lines. The first I/O error is kept and further
/// output is dropped.
pub struct WriteTracer<W: Write> {
    out: W,
    error: Option<std::io::Error>,
}

impl<W: Write> WriteTracer<W> {
    pub fn new(out: W) -> Self {
        WriteTracer { out, error: None }
    }

    pub fn finish(mut self) -> std::io::Result<W> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<W: Write> Tracer for WriteTracer<W> {
    fn event(&mut self, event: TraceEvent) {
        if self.error.is_none() {
            if let Err(e) = writeln!(self.out, "{event}") {
                self.error = Some(e);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let events = vec![
            TraceEvent::Visit(StateRef(0)),
            TraceEvent::Edge(StateRef(0), StateRef(1)),
            TraceEvent::Color(StateRef(1), Color::Cyan, Color::Red),
            TraceEvent::Backtrack(StateRef(1)),
            TraceEvent::Report(ReportKind::AcceptingBacktrack),
            TraceEvent::RootsPush(StateRef(2), AcceptanceSet::EMPTY.with(1).with(2)),
            TraceEvent::RootsPop(StateRef(2)),
            TraceEvent::Collapse(AcceptanceSet::EMPTY),
            TraceEvent::Inactive(StateRef(7)),
        ];
        let mut w = WriteTracer::new(Vec::new());
        for e in &events {
            w.event(*e);
        }
        let text = String::from_utf8(w.finish().unwrap()).unwrap();
        assert!(text.contains("roots-push 2 {1,2}\n"));
        assert!(text.contains("color 1 cyan red\n"));
        assert_eq!(parse_trace(&text).unwrap(), events);
    }

    #[test]
    fn rejects_garbage() {
        assert!("visit".parse::<TraceEvent>().is_err());
        assert!("visit 1 2".parse::<TraceEvent>().is_err());
        assert!("color 1 cyan pink".parse::<TraceEvent>().is_err());
        assert!("collapse {0}".parse::<TraceEvent>().is_err());
        assert!("jump 1".parse::<TraceEvent>().is_err());
    }
}
