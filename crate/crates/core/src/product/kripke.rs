use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::product::guard::is_identifier;
use crate::text;

/// A finite transition system with proposition labels on states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeStructure {
    init: usize,
    succ: Vec<Vec<usize>>,
    labels: Vec<BTreeSet<String>>,
}

impl KripkeStructure {
    pub fn new(n: usize) -> Self {
        KripkeStructure {
            init: 0,
            succ: vec![Vec::new(); n],
            labels: vec![BTreeSet::new(); n],
        }
    }

    pub fn from_parts(
        init: usize,
        succ: Vec<Vec<usize>>,
        labels: Vec<BTreeSet<String>>,
    ) -> Result<Self> {
        let m = KripkeStructure { init, succ, labels };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n == 0 {
            return Err(Error::Malformed("Kripke structure has no states".into()));
        }
        if self.labels.len() != n {
            return Err(Error::Malformed(format!(
                "{} label sets for {n} states",
                self.labels.len()
            )));
        }
        if self.init >= n {
            return Err(Error::Malformed(format!("init {} outside 0..{n}", self.init)));
        }
        for (s, succ) in self.succ.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for &t in succ {
                if t >= n {
                    return Err(Error::Malformed(format!("edge {s} -> {t} leaves 0..{n}")));
                }
                if !seen.insert(t) {
                    return Err(Error::Malformed(format!("duplicate edge {s} -> {t}")));
                }
            }
        }
        for (s, labels) in self.labels.iter().enumerate() {
            if let Some(bad) = labels.iter().find(|p| !is_identifier(p)) {
                return Err(Error::Malformed(format!(
                    "state {s} has invalid proposition `{bad}`"
                )));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.succ.len()
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

    pub fn labels(&self, s: usize) -> &BTreeSet<String> {
        &self.labels[s]
    }

    pub fn add_edge(&mut self, s: usize, t: usize) -> bool {
        assert!(t < self.n());
        if self.succ[s].contains(&t) {
            return false;
        }
        self.succ[s].push(t);
        true
    }

    pub fn add_label(&mut self, s: usize, prop: &str) {
        assert!(is_identifier(prop), "invalid proposition `{prop}`");
        self.labels[s].insert(prop.to_string());
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// All propositions appearing on some state.
    pub fn propositions(&self) -> BTreeSet<&str> {
        self.labels.iter().flatten().map(String::as_str).collect()
    }

    /// Reads the text format:
    ///
    /// ```text
    /// kripke <n>
    /// init <s>
    /// label <s> <ident>...
    /// edge <u> <v>
    /// ```
    pub fn parse(src: &str) -> Result<Self> {
        let mut m: Option<KripkeStructure> = None;
        let mut init_seen = false;
        for (line, content) in text::lines(src) {
            let mut words = content.split_whitespace();
            let keyword = words.next().unwrap_or_default();
            let args: Vec<&str> = words.collect();
            if keyword == "kripke" {
                if m.is_some() {
                    return Err(Error::parse(line, "duplicate header"));
                }
                let [n] = text::numbers::<1>(line, &args)?;
                if n == 0 {
                    return Err(Error::parse(line, "a Kripke structure needs at least one state"));
                }
                m = Some(KripkeStructure::new(n));
                continue;
            }
            let m = m
                .as_mut()
                .ok_or_else(|| Error::parse(line, "expected `kripke <n>` header first"))?;
            let n = m.n();
            let state = |v: usize| {
                if v < n {
                    Ok(v)
                } else {
                    Err(Error::parse(line, format!("state {v} outside 0..{n}")))
                }
            };
            match keyword {
                "init" => {
                    let [s] = text::numbers::<1>(line, &args)?;
                    if init_seen {
                        return Err(Error::parse(line, "duplicate `init`"));
                    }
                    m.init = state(s)?;
                    init_seen = true;
                }
                "label" => {
                    let (first, props) = args
                        .split_first()
                        .ok_or_else(|| Error::parse(line, "expected `label <s> <ident>...`"))?;
                    let s = state(text::number(line, first)?)?;
                    for p in props {
                        if !is_identifier(p) {
                            return Err(Error::parse(line, format!("invalid proposition `{p}`")));
                        }
                        m.labels[s].insert(p.to_string());
                    }
                }
                "edge" => {
                    let [u, v] = text::numbers::<2>(line, &args)?;
                    if !m.add_edge(state(u)?, state(v)?) {
                        return Err(Error::parse(line, format!("duplicate edge {u} -> {v}")));
                    }
                }
                other => return Err(Error::parse(line, format!("unknown keyword `{other}`"))),
            }
        }
        let m = m.ok_or_else(|| Error::parse(0, "missing `kripke <n>` header"))?;
        if !init_seen {
            return Err(Error::parse(0, "missing `init <s>` line"));
        }
        Ok(m)
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "kripke {}", self.n());
        let _ = writeln!(out, "init {}", self.init);
        for (s, labels) in self.labels.iter().enumerate() {
            if !labels.is_empty() {
                let props: Vec<&str> = labels.iter().map(String::as_str).collect();
                let _ = writeln!(out, "label {s} {}", props.join(" "));
            }
        }
        for (s, succ) in self.succ.iter().enumerate() {
            for t in succ {
                let _ = writeln!(out, "edge {s} {t}");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let src = "kripke 3\ninit 1\nlabel 0 p q\nlabel 2 r\nedge 0 1\nedge 1 2\nedge 2 0\n";
        let m = KripkeStructure::parse(src).unwrap();
        assert_eq!(m.init(), 1);
        assert!(m.labels(0).contains("q"));
        assert_eq!(m.to_text(), src);
        assert_eq!(m.propositions().len(), 3);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(KripkeStructure::parse("init 0").is_err());
        assert!(KripkeStructure::parse("kripke 1").is_err());
        assert!(KripkeStructure::parse("kripke 1\ninit 0\nlabel 0 1p").is_err());
        assert!(KripkeStructure::parse("kripke 1\ninit 0\nlabel 0 true").is_err());
        assert!(KripkeStructure::parse("kripke 2\ninit 0\nedge 0 1\nedge 0 1").is_err());
        assert!(KripkeStructure::parse("kripke 2\ninit 2").is_err());
    }
}
