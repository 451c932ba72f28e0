//! Bitstate hashing: AND or SD with colours kept in a table of
//! `2^b` two-bit slots addressed by a seeded hash of the descriptor.
//!
//! Only the search path keeps real descriptors. A cyan slot is confirmed
//! against the path before a cycle is reported, so every counterexample is
//! genuine; hash collisions can only hide states, which makes an empty
//! verdict "probably empty". Repeating the search with independently
//! seeded hashes lowers that risk.

use std::collections::HashMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::Color;
use crate::automaton::StateDescriptor;
use crate::error::{Error, Result};
use crate::metrics::Metrics;
use crate::provider::AutomatonProvider;
use crate::verdict::Lasso;

pub const MIN_BITS: u32 = 10;
pub const MAX_BITS: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BitstateAlgo {
    And,
    Sd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ApproxVerdict {
    ProbablyEmpty,
    Counterexample(Lasso),
}

impl ApproxVerdict {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, ApproxVerdict::Counterexample(_))
    }
}

#[derive(Clone, Debug)]
pub struct BitstateOutcome {
    pub verdict: ApproxVerdict,
    /// Counters summed over all runs performed.
    pub metrics: Metrics,
    pub runs_performed: usize,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seeded 64-bit hash of a descriptor (FNV-1a over the bytes, then a
/// splitmix finalizer).
pub fn descriptor_hash(d: &StateDescriptor, seed: u64) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64 ^ splitmix64(seed);
    for &b in d.as_bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    splitmix64(h ^ (d.len() as u64))
}

/// Slot index of `d` in a table of `2^bits` slots.
pub fn bitstate_slot(d: &StateDescriptor, bits: u32, seed: u64) -> u64 {
    descriptor_hash(d, seed) & ((1u64 << bits) - 1)
}

/// Hash seed of run `run` derived from the user seed; run 0 uses the
/// user seed unchanged.
pub fn run_seed(seed: u64, run: usize) -> u64 {
    if run == 0 {
        seed
    } else {
        splitmix64(seed ^ (run as u64).wrapping_mul(0xd1b5_4a32_d192_ed03))
    }
}

/// `2^bits` two-bit colour slots, initially white.
pub struct BitstateTable {
    bits: u32,
    seed: u64,
    words: Vec<u64>,
}

impl BitstateTable {
    /// Any `1 <= bits <= 40` is accepted here; tiny tables are useful to
    /// provoke collisions. [`bitstate_check`] enforces the operational range.
    pub fn new(bits: u32, seed: u64) -> Result<Self> {
        if !(1..=MAX_BITS).contains(&bits) {
            return Err(Error::Config(format!("table exponent {bits} outside 1..={MAX_BITS}")));
        }
        let words = ((1u64 << bits) / 32).max(1) as usize;
        let mut v = Vec::new();
        v.try_reserve_exact(words).map_err(|_| Error::Resource {
            bytes: words as u64 * 8,
        })?;
        v.resize(words, 0u64);
        Ok(BitstateTable { bits, seed, words: v })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn slots(&self) -> u64 {
        1u64 << self.bits
    }

    fn locate(&self, d: &StateDescriptor) -> (usize, u32) {
        let slot = bitstate_slot(d, self.bits, self.seed);
        ((slot / 32) as usize, ((slot % 32) * 2) as u32)
    }

    pub fn get(&self, d: &StateDescriptor) -> Color {
        let (w, shift) = self.locate(d);
        Color::from_bits((self.words[w] >> shift) as u8)
    }

    pub fn set(&mut self, d: &StateDescriptor, c: Color) {
        let (w, shift) = self.locate(d);
        self.words[w] = (self.words[w] & !(3u64 << shift)) | ((c as u64) << shift);
    }
}

struct Frame {
    state: StateDescriptor,
    succ: Vec<StateDescriptor>,
    cursor: usize,
    allred: bool,
    pending: bool,
}

struct Search<'a, P: AutomatonProvider + ?Sized> {
    p: &'a mut P,
    table: &'a mut BitstateTable,
    metrics: Metrics,
    path: Vec<Frame>,
    on_path: HashMap<StateDescriptor, usize>,
}

impl<P: AutomatonProvider + ?Sized> Search<'_, P> {
    fn post(&mut self, d: &StateDescriptor) -> Vec<StateDescriptor> {
        let succ = self.p.post(d);
        self.metrics.post_calls += 1;
        self.metrics.successors_generated += succ.len() as u64;
        succ
    }

    fn accepting(&self, d: &StateDescriptor) -> bool {
        !self.p.acceptance(d).is_empty()
    }

    fn enter(&mut self, d: StateDescriptor) {
        self.table.set(&d, Color::Cyan);
        self.metrics.distinct_states += 1;
        let succ = self.post(&d);
        self.on_path.insert(d.clone(), self.path.len());
        self.path.push(Frame {
            state: d,
            succ,
            cursor: 0,
            allred: true,
            pending: false,
        });
        self.metrics.max_search_depth = self.metrics.max_search_depth.max(self.path.len() as u64);
    }

    fn lasso(&self, pos: usize, tail: Vec<StateDescriptor>) -> Lasso {
        let states: Vec<StateDescriptor> = self.path.iter().map(|f| f.state.clone()).collect();
        let mut cycle = states[pos..].to_vec();
        cycle.extend(tail);
        Lasso {
            prefix: states[..pos].to_vec(),
            cycle,
        }
    }

    fn run(&mut self, nested: bool) -> Option<Lasso> {
        let init = self.p.initial();
        self.enter(init);
        while let Some(frame) = self.path.last_mut() {
            if frame.pending {
                let t = &frame.succ[frame.cursor];
                if self.table.get(t) != Color::Red {
                    frame.allred = false;
                }
                frame.pending = false;
                frame.cursor += 1;
                continue;
            }
            if let Some(t) = frame.succ.get(frame.cursor).cloned() {
                let s = frame.state.clone();
                self.metrics.transitions_explored += 1;
                let ct = self.table.get(&t);
                if ct == Color::Cyan && (self.accepting(&s) || self.accepting(&t)) {
                    if let Some(&pos) = self.on_path.get(&t) {
                        return Some(self.lasso(pos, Vec::new()));
                    }
                }
                if ct == Color::White {
                    self.path.last_mut().expect("frame").pending = true;
                    self.enter(t);
                    continue;
                }
                let frame = self.path.last_mut().expect("frame");
                frame.cursor += 1;
                if ct != Color::Red {
                    frame.allred = false;
                }
                continue;
            }

            let s = frame.state.clone();
            let allred = frame.allred;
            if !nested {
                self.table.set(&s, Color::Blue);
            } else if allred {
                self.table.set(&s, Color::Red);
            } else if self.accepting(&s) {
                if let Some(lasso) = self.red(&s) {
                    return Some(lasso);
                }
                self.table.set(&s, Color::Red);
            } else {
                self.table.set(&s, Color::Blue);
            }
            self.on_path.remove(&s);
            self.path.pop();
        }
        None
    }

    fn red(&mut self, seed: &StateDescriptor) -> Option<Lasso> {
        let succ = self.post(seed);
        let mut stack: Vec<(StateDescriptor, Vec<StateDescriptor>, usize)> =
            vec![(seed.clone(), succ, 0)];
        while let Some((_, succ, cursor)) = stack.last_mut() {
            let Some(t) = succ.get(*cursor).cloned() else {
                stack.pop();
                continue;
            };
            *cursor += 1;
            self.metrics.transitions_explored += 1;
            match self.table.get(&t) {
                Color::Cyan => {
                    if let Some(&pos) = self.on_path.get(&t) {
                        let tail = stack[1..].iter().map(|(d, _, _)| d.clone()).collect();
                        return Some(self.lasso(pos, tail));
                    }
                }
                Color::Blue => {
                    self.table.set(&t, Color::Red);
                    let succ = self.post(&t);
                    stack.push((t, succ, 0));
                    let depth = (self.path.len() + stack.len()) as u64;
                    self.metrics.max_search_depth = self.metrics.max_search_depth.max(depth);
                }
                _ => {}
            }
        }
        None
    }
}

/// One search over a caller-supplied table.
pub fn bitstate_search<P: AutomatonProvider + ?Sized>(
    p: &mut P,
    algo: BitstateAlgo,
    table: &mut BitstateTable,
) -> Result<(ApproxVerdict, Metrics)> {
    if p.conditions() != 1 {
        return Err(Error::Contract(format!(
            "bitstate search needs exactly one acceptance condition, got k = {}",
            p.conditions()
        )));
    }
    let started = Instant::now();
    let mut search = Search {
        p,
        table,
        metrics: Metrics {
            aux_bits_per_state: 2,
            ..Metrics::default()
        },
        path: Vec::new(),
        on_path: HashMap::new(),
    };
    let found = search.run(algo == BitstateAlgo::And);
    let mut metrics = search.metrics;
    metrics.wall_time = started.elapsed();
    let verdict = match found {
        Some(lasso) => ApproxVerdict::Counterexample(lasso),
        None => ApproxVerdict::ProbablyEmpty,
    };
    Ok((verdict, metrics))
}

/// Runs up to `runs` searches with table exponent `bits` and hash seeds
/// derived from `seed`, stopping at the first counterexample.
pub fn bitstate_check<P: AutomatonProvider + ?Sized>(
    p: &mut P,
    algo: BitstateAlgo,
    bits: u32,
    runs: usize,
    seed: u64,
) -> Result<BitstateOutcome> {
    if !(MIN_BITS..=MAX_BITS).contains(&bits) {
        return Err(Error::Config(format!(
            "bitstate exponent {bits} outside {MIN_BITS}..={MAX_BITS}"
        )));
    }
    if runs == 0 {
        return Err(Error::Config("at least one bitstate run is required".into()));
    }
    let mut metrics = Metrics::default();
    for run in 0..runs {
        let mut table = BitstateTable::new(bits, run_seed(seed, run))?;
        let (verdict, m) = bitstate_search(p, algo, &mut table)?;
        metrics += m;
        if verdict.is_counterexample() {
            return Ok(BitstateOutcome {
                verdict,
                metrics,
                runs_performed: run + 1,
            });
        }
    }
    Ok(BitstateOutcome {
        verdict: ApproxVerdict::ProbablyEmpty,
        metrics,
        runs_performed: runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::ExplicitGba;
    use crate::provider::explicit_provider;

    #[test]
    fn config_range() {
        let g = ExplicitGba::new(1, 1);
        let p = &mut explicit_provider(&g);
        assert!(matches!(bitstate_check(p, BitstateAlgo::And, 9, 1, 0), Err(Error::Config(_))));
        assert!(matches!(bitstate_check(p, BitstateAlgo::And, 41, 1, 0), Err(Error::Config(_))));
        assert!(matches!(bitstate_check(p, BitstateAlgo::And, 12, 0, 0), Err(Error::Config(_))));
        assert!(bitstate_check(p, BitstateAlgo::Sd, 10, 1, 0).is_ok());
    }

    #[test]
    fn table_slots() {
        let mut t = BitstateTable::new(2, 7).unwrap();
        assert_eq!(t.slots(), 4);
        let d = StateDescriptor::new(vec![1, 2, 3]);
        assert_eq!(t.get(&d), Color::White);
        t.set(&d, Color::Blue);
        assert_eq!(t.get(&d), Color::Blue);
        t.set(&d, Color::Red);
        assert_eq!(t.get(&d), Color::Red);
    }

    #[test]
    fn run_zero_keeps_seed() {
        assert_eq!(run_seed(42, 0), 42);
        assert_ne!(run_seed(42, 1), run_seed(42, 2));
    }

    #[test]
    fn finds_self_loop() {
        let mut g = ExplicitGba::new(1, 1);
        g.add_edge(0, 0);
        g.set_accepting(0, 1);
        let o = bitstate_check(&mut explicit_provider(&g), BitstateAlgo::And, 16, 1, 3).unwrap();
        assert!(o.verdict.is_counterexample());
        assert_eq!(o.runs_performed, 1);
    }
}
