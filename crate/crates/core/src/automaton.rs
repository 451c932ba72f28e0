//! Explicit (generalized) Büchi automata and the shared state vocabulary.
//!
//! Acceptance lives on states. A GBA with `k` conditions tags every state
//! with the subset of `{1..k}` it belongs to; `k = 1` is a plain Büchi
//! automaton and `k = 0` is legal (every reachable cycle is accepting).

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text;

/// Opaque state identity as produced by a provider.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StateDescriptor(Box<[u8]>);

impl StateDescriptor {
    pub fn new(bytes: impl Into<Box<[u8]>>) -> Self {
        StateDescriptor(bytes.into())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Debug for StateDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("0x")?;
        for b in self.0.iter() {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

/// Dense index handed out by an [`InternStore`](crate::intern::InternStore)
/// in discovery order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct StateRef(pub u32);

impl StateRef {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for StateRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Maximum number of acceptance conditions; one bit per condition.
pub const MAX_CONDITIONS: usize = 64;

/// Subset of `{1..k}` stored as a bit word (bit `j-1` for condition `j`).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AcceptanceSet(u64);

impl AcceptanceSet {
    pub const EMPTY: AcceptanceSet = AcceptanceSet(0);

    /// `K = {1..k}`.
    pub fn full(k: usize) -> Self {
        assert!(k <= MAX_CONDITIONS, "at most {MAX_CONDITIONS} acceptance conditions");
        if k == MAX_CONDITIONS {
            AcceptanceSet(u64::MAX)
        } else {
            AcceptanceSet((1u64 << k) - 1)
        }
    }

    pub fn from_bits(bits: u64) -> Self {
        AcceptanceSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// Condition `j` is 1-based.
    pub fn contains(self, j: usize) -> bool {
        (1..=MAX_CONDITIONS).contains(&j) && self.0 & (1u64 << (j - 1)) != 0
    }

    pub fn insert(&mut self, j: usize) {
        assert!((1..=MAX_CONDITIONS).contains(&j), "condition index {j} out of range");
        self.0 |= 1u64 << (j - 1);
    }

    pub fn with(mut self, j: usize) -> Self {
        self.insert(j);
        self
    }

    pub fn union(self, other: AcceptanceSet) -> Self {
        AcceptanceSet(self.0 | other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: AcceptanceSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (1..=MAX_CONDITIONS).filter(move |&j| self.contains(j))
    }
}

impl FromIterator<usize> for AcceptanceSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = AcceptanceSet::EMPTY;
        for j in iter {
            set.insert(j);
        }
        set
    }
}

impl fmt::Debug for AcceptanceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for AcceptanceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, j) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{j}")?;
        }
        f.write_str("}")
    }
}

/// A fully materialized GBA. States are `0..n`; successor lists keep
/// the order in which they were added, which is the exploration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitGba {
    init: usize,
    succ: Vec<Vec<usize>>,
    acc: Vec<AcceptanceSet>,
    k: usize,
}

impl ExplicitGba {
    /// An automaton with `n` states, no edges, and no accepting states.
    pub fn new(n: usize, k: usize) -> Self {
        assert!(n >= 1, "an automaton needs at least one state");
        assert!(k <= MAX_CONDITIONS, "at most {MAX_CONDITIONS} acceptance conditions");
        ExplicitGba {
            init: 0,
            succ: vec![Vec::new(); n],
            acc: vec![AcceptanceSet::EMPTY; n],
            k,
        }
    }

    /// Builds and validates an automaton from its parts.
    pub fn from_parts(
        init: usize,
        succ: Vec<Vec<usize>>,
        acc: Vec<AcceptanceSet>,
        k: usize,
    ) -> Result<Self> {
        let g = ExplicitGba { init, succ, acc, k };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.succ.len();
        if n == 0 {
            return Err(Error::Malformed("no states".into()));
        }
        if self.acc.len() != n {
            return Err(Error::Malformed(format!(
                "{} acceptance entries for {n} states",
                self.acc.len()
            )));
        }
        if self.k > MAX_CONDITIONS {
            return Err(Error::Malformed(format!(
                "{} acceptance conditions exceed the limit of {MAX_CONDITIONS}",
                self.k
            )));
        }
        if self.init >= n {
            return Err(Error::Malformed(format!("initial state {} >= {n}", self.init)));
        }
        let full = AcceptanceSet::full(self.k);
        for (s, list) in self.succ.iter().enumerate() {
            if !self.acc[s].is_subset(full) {
                return Err(Error::Malformed(format!(
                    "state {s} has acceptance {} outside 1..={}",
                    self.acc[s], self.k
                )));
            }
            let mut seen = HashSet::with_capacity(list.len());
            for &t in list {
                if t >= n {
                    return Err(Error::Malformed(format!("edge {s} -> {t} leaves 0..{n}")));
                }
                if !seen.insert(t) {
                    return Err(Error::Malformed(format!("duplicate edge {s} -> {t}")));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.succ.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn init(&self) -> usize {
        self.init
    }

    pub fn set_init(&mut self, s: usize) {
        assert!(s < self.n());
        self.init = s;
    }

    pub fn succ(&self, s: usize) -> &[usize] {
        &self.succ[s]
    }

    pub fn successors(&self) -> &[Vec<usize>] {
        &self.succ
    }

    pub fn acc(&self, s: usize) -> AcceptanceSet {
        self.acc[s]
    }

    pub fn acceptance(&self) -> &[AcceptanceSet] {
        &self.acc
    }

    pub fn is_accepting(&self, s: usize, j: usize) -> bool {
        self.acc[s].contains(j)
    }

    /// Appends `s -> t`; returns `false` if the edge already exists.
    pub fn add_edge(&mut self, s: usize, t: usize) -> bool {
        assert!(s < self.n() && t < self.n(), "edge {s} -> {t} out of range");
        if self.succ[s].contains(&t) {
            return false;
        }
        self.succ[s].push(t);
        true
    }

    pub fn set_accepting(&mut self, s: usize, j: usize) {
        assert!(j >= 1 && j <= self.k, "condition {j} outside 1..={}", self.k);
        self.acc[s].insert(j);
    }

    pub fn set_acceptance(&mut self, s: usize, set: AcceptanceSet) {
        assert!(set.is_subset(AcceptanceSet::full(self.k)));
        self.acc[s] = set;
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(s, list)| list.iter().map(move |&t| (s, t)))
    }

    /// States reachable from the initial state, in BFS order.
    pub fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n()];
        let mut order = vec![self.init];
        seen[self.init] = true;
        let mut head = 0;
        while head < order.len() {
            let s = order[head];
            head += 1;
            for &t in &self.succ[s] {
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
        }
        order
    }

    /// Parses the line-oriented automaton format:
    ///
    /// ```text
    /// gba <n> <k>
    /// init <s>
    /// acc <s> <j>
    /// edge <u> <v>
    /// ```
    pub fn parse(src: &str) -> Result<Self> {
        let mut g: Option<ExplicitGba> = None;
        let mut init_seen = false;
        for (line, content) in text::lines(src) {
            let mut words = content.split_whitespace();
            let keyword = words.next().unwrap_or_default();
            let args: Vec<&str> = words.collect();
            match keyword {
                "gba" => {
                    if g.is_some() {
                        return Err(Error::parse(line, "duplicate header"));
                    }
                    let [n, k] = text::numbers::<2>(line, &args)?;
                    if n == 0 {
                        return Err(Error::parse(line, "an automaton needs at least one state"));
                    }
                    if k > MAX_CONDITIONS {
                        return Err(Error::parse(
                            line,
                            format!("at most {MAX_CONDITIONS} acceptance conditions"),
                        ));
                    }
                    g = Some(ExplicitGba::new(n, k));
                }
                _ => {
                    let g = g
                        .as_mut()
                        .ok_or_else(|| Error::parse(line, "expected `gba <n> <k>` header first"))?;
                    g.apply_body_line(line, keyword, &args, &mut init_seen)?;
                }
            }
        }
        let g = g.ok_or_else(|| Error::parse(0, "missing `gba <n> <k>` header"))?;
        if !init_seen {
            return Err(Error::parse(0, "missing `init <s>` line"));
        }
        Ok(g)
    }

    pub(crate) fn apply_body_line(
        &mut self,
        line: usize,
        keyword: &str,
        args: &[&str],
        init_seen: &mut bool,
    ) -> Result<()> {
        let n = self.n();
        let state = |v: usize| {
            if v < n {
                Ok(v)
            } else {
                Err(Error::parse(line, format!("state {v} outside 0..{n}")))
            }
        };
        match keyword {
            "init" => {
                let [s] = text::numbers::<1>(line, args)?;
                if *init_seen {
                    return Err(Error::parse(line, "duplicate `init`"));
                }
                self.init = state(s)?;
                *init_seen = true;
            }
            "acc" => {
                let [s, j] = text::numbers::<2>(line, args)?;
                if j == 0 || j > self.k {
                    return Err(Error::parse(
                        line,
                        format!("condition {j} outside 1..={}", self.k),
                    ));
                }
                self.acc[state(s)?].insert(j);
            }
            "edge" => {
                let [u, v] = text::numbers::<2>(line, args)?;
                if !self.add_edge(state(u)?, state(v)?) {
                    return Err(Error::parse(line, format!("duplicate edge {u} -> {v}")));
                }
            }
            other => return Err(Error::parse(line, format!("unknown keyword `{other}`"))),
        }
        Ok(())
    }

    /// Serializes to the format read by [`ExplicitGba::parse`].
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "gba {} {}", self.n(), self.k);
        let _ = writeln!(out, "init {}", self.init);
        for (s, set) in self.acc.iter().enumerate() {
            for j in set.iter() {
                let _ = writeln!(out, "acc {s} {j}");
            }
        }
        for (s, t) in self.edges() {
            let _ = writeln!(out, "edge {s} {t}");
        }
        out
    }
}
