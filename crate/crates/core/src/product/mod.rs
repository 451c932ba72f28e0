//! Synchronous product of a Kripke structure with a guarded automaton,
//! computed on demand.
//!
//! A product step `(u, q) -> (u', q')` needs an edge `u -> u'` of the system
//! and an edge `q -> q'` of the automaton whose guard holds on the labels of
//! the target `u'`. Acceptance comes from the automaton component.

pub mod guard;
pub mod kripke;
pub mod labeled;

use std::collections::HashSet;

use crate::automaton::{AcceptanceSet, StateDescriptor};
use crate::provider::AutomatonProvider;

pub use guard::{eval_guard, parse_guard, GuardError, GuardExpr};
pub use kripke::KripkeStructure;
pub use labeled::LabeledGba;

pub fn pair_descriptor(u: usize, q: usize) -> StateDescriptor {
    let mut bytes = Vec::with_capacity(8);
    bytes.extend_from_slice(&(u as u32).to_be_bytes());
    bytes.extend_from_slice(&(q as u32).to_be_bytes());
    StateDescriptor::new(bytes)
}

pub fn pair_state(d: &StateDescriptor) -> Option<(usize, usize)> {
    let bytes: [u8; 8] = d.as_bytes().try_into().ok()?;
    let u = u32::from_be_bytes(bytes[..4].try_into().ok()?);
    let q = u32::from_be_bytes(bytes[4..].try_into().ok()?);
    Some((u as usize, q as usize))
}

pub struct ProductProvider<'a> {
    m: &'a KripkeStructure,
    a: &'a LabeledGba,
    labels_read: HashSet<usize>,
    pairs_examined: HashSet<(usize, usize)>,
}

pub fn product_provider<'a>(m: &'a KripkeStructure, a: &'a LabeledGba) -> ProductProvider<'a> {
    ProductProvider::new(m, a)
}

impl<'a> ProductProvider<'a> {
    pub fn new(m: &'a KripkeStructure, a: &'a LabeledGba) -> Self {
        ProductProvider {
            m,
            a,
            labels_read: HashSet::new(),
            pairs_examined: HashSet::new(),
        }
    }

    pub fn system(&self) -> &'a KripkeStructure {
        self.m
    }

    pub fn property(&self) -> &'a LabeledGba {
        self.a
    }

    /// Distinct system states whose labels have been inspected so far.
    pub fn labels_read(&self) -> usize {
        self.labels_read.len()
    }

    /// Distinct candidate pairs `(u', q')` whose guard has been evaluated.
    pub fn pairs_examined(&self) -> usize {
        self.pairs_examined.len()
    }

    /// Whether the labels of system state `u` have been inspected.
    pub fn has_read_labels(&self, u: usize) -> bool {
        self.labels_read.contains(&u)
    }

    fn split(&self, d: &StateDescriptor) -> (usize, usize) {
        match pair_state(d) {
            Some((u, q)) if u < self.m.n() && q < self.a.n() => (u, q),
            _ => panic!("descriptor {d:?} is not a product state"),
        }
    }
}

impl AutomatonProvider for ProductProvider<'_> {
    fn initial(&mut self) -> StateDescriptor {
        pair_descriptor(self.m.init(), self.a.init())
    }

    fn post(&mut self, state: &StateDescriptor) -> Vec<StateDescriptor> {
        let (u, q) = self.split(state);
        let mut out = Vec::new();
        for &u2 in self.m.succ(u) {
            let labels = self.m.labels(u2);
            for (q2, guard) in self.a.guarded_succ(q) {
                self.labels_read.insert(u2);
                self.pairs_examined.insert((u2, q2));
                if guard.eval(labels) {
                    out.push(pair_descriptor(u2, q2));
                }
            }
        }
        out
    }

    fn acceptance(&self, state: &StateDescriptor) -> AcceptanceSet {
        self.a.acc(self.split(state).1)
    }

    fn conditions(&self) -> usize {
        self.a.k()
    }

    fn display(&self, state: &StateDescriptor) -> String {
        let (u, q) = self.split(state);
        format!("({u},{q})")
    }
}
