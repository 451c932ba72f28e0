use std::ops::Deref;

use crate::automaton::ExplicitGba;
use crate::error::{Error, Result};
use crate::product::guard::{parse_guard, GuardExpr};
use crate::text;

/// A generalized Büchi automaton with a guard on every edge. Acceptance stays
/// on states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGba {
    gba: ExplicitGba,
    /// Parallel to `gba.succ(s)`.
    guards: Vec<Vec<GuardExpr>>,
}

impl Deref for LabeledGba {
    type Target = ExplicitGba;

    fn deref(&self) -> &ExplicitGba {
        &self.gba
    }
}

impl LabeledGba {
    pub fn new(n: usize, k: usize) -> Self {
        LabeledGba {
            gba: ExplicitGba::new(n, k),
            guards: vec![Vec::new(); n],
        }
    }

    pub fn from_parts(gba: ExplicitGba, guards: Vec<Vec<GuardExpr>>) -> Result<Self> {
        gba.validate()?;
        if guards.len() != gba.n()
            || guards
                .iter()
                .enumerate()
                .any(|(s, g)| g.len() != gba.succ(s).len())
        {
            return Err(Error::Malformed("every edge needs exactly one guard".into()));
        }
        Ok(LabeledGba { gba, guards })
    }

    /// Every edge guarded by `true`.
    pub fn unguarded(gba: ExplicitGba) -> Self {
        let guards = gba
            .successors()
            .iter()
            .map(|succ| vec![GuardExpr::True; succ.len()])
            .collect();
        LabeledGba { gba, guards }
    }

    pub fn gba(&self) -> &ExplicitGba {
        &self.gba
    }

    pub fn guards(&self, s: usize) -> &[GuardExpr] {
        &self.guards[s]
    }

    /// `(target, guard)` pairs of `s` in edge order.
    pub fn guarded_succ(&self, s: usize) -> impl Iterator<Item = (usize, &GuardExpr)> {
        self.gba.succ(s).iter().copied().zip(&self.guards[s])
    }

    pub fn add_edge(&mut self, s: usize, t: usize, guard: GuardExpr) -> bool {
        if !self.gba.add_edge(s, t) {
            return false;
        }
        self.guards[s].push(guard);
        true
    }

    pub fn set_accepting(&mut self, s: usize, j: usize) {
        self.gba.set_accepting(s, j);
    }

    pub fn set_init(&mut self, s: usize) {
        self.gba.set_init(s);
    }

    /// Reads the automaton format with `edge <u> <v> [guard]` lines. A missing
    /// guard means `true`; guards containing spaces are written in double
    /// quotes.
    pub fn parse(src: &str) -> Result<Self> {
        let mut header = String::new();
        let mut edges = Vec::new();
        for (line, content) in text::lines(src) {
            let (keyword, rest) = split_word(content);
            if keyword != "edge" {
                header.push_str(&"\n".repeat(line - header.matches('\n').count() - 1));
                header.push_str(content);
                header.push('\n');
                continue;
            }
            let (u, rest) = split_word(rest);
            let (v, rest) = split_word(rest);
            if u.is_empty() || v.is_empty() {
                return Err(Error::parse(line, "expected `edge <u> <v> [guard]`"));
            }
            let u = text::number(line, u)?;
            let v = text::number(line, v)?;
            let guard_text = unquote(rest).ok_or_else(|| Error::parse(line, "unterminated quote"))?;
            let guard = if guard_text.trim().is_empty() {
                GuardExpr::True
            } else {
                parse_guard(guard_text).map_err(|e| {
                    Error::parse(line, format!("guard `{guard_text}`: {e}"))
                })?
            };
            edges.push((line, u, v, guard));
        }
        let gba = ExplicitGba::parse(&header)?;
        let n = gba.n();
        let mut a = LabeledGba {
            guards: vec![Vec::new(); n],
            gba,
        };
        for (line, u, v, guard) in edges {
            for s in [u, v] {
                if s >= n {
                    return Err(Error::parse(line, format!("state {s} outside 0..{n}")));
                }
            }
            if !a.add_edge(u, v, guard) {
                return Err(Error::parse(line, format!("duplicate edge {u} -> {v}")));
            }
        }
        Ok(a)
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "gba {} {}", self.n(), self.k());
        let _ = writeln!(out, "init {}", self.init());
        for s in 0..self.n() {
            for j in self.acc(s).iter() {
                let _ = writeln!(out, "acc {s} {j}");
            }
        }
        for s in 0..self.n() {
            for (t, g) in self.guarded_succ(s) {
                let g = g.to_string();
                if g.contains(' ') {
                    let _ = writeln!(out, "edge {s} {t} \"{g}\"");
                } else {
                    let _ = writeln!(out, "edge {s} {t} {g}");
                }
            }
        }
        out
    }
}

fn split_word(s: &str) -> (&str, &str) {
    let s = s.trim_start();
    match s.find(char::is_whitespace) {
        Some(i) => (&s[..i], s[i..].trim_start()),
        None => (s, ""),
    }
}

fn unquote(s: &str) -> Option<&str> {
    let s = s.trim();
    match s.strip_prefix('"') {
        Some(inner) => inner.strip_suffix('"'),
        None => Some(s),
    }
}
