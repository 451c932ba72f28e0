//! The on-the-fly automaton interface and its explicit adapter.

use std::collections::HashMap;

use crate::automaton::{AcceptanceSet, ExplicitGba, StateDescriptor};
use crate::error::{Error, Result};

/// Successor computation on demand. Every emptiness check in this crate
/// drives exploration exclusively through this trait.
///
/// `post` must be deterministic and return successors in the same order on
/// every call; `acceptance` must be pure.
pub trait AutomatonProvider {
    fn initial(&mut self) -> StateDescriptor;

    fn post(&mut self, state: &StateDescriptor) -> Vec<StateDescriptor>;

    fn acceptance(&self, state: &StateDescriptor) -> AcceptanceSet;

    /// Number of acceptance conditions `k`.
    fn conditions(&self) -> usize;

    /// Human-readable rendering used in reports and lassos.
    fn display(&self, state: &StateDescriptor) -> String {
        format!("{state:?}")
    }
}

impl<P: AutomatonProvider + ?Sized> AutomatonProvider for &mut P {
    fn initial(&mut self) -> StateDescriptor {
        (**self).initial()
    }

    fn post(&mut self, state: &StateDescriptor) -> Vec<StateDescriptor> {
        (**self).post(state)
    }

    fn acceptance(&self, state: &StateDescriptor) -> AcceptanceSet {
        (**self).acceptance(state)
    }

    fn conditions(&self) -> usize {
        (**self).conditions()
    }

    fn display(&self, state: &StateDescriptor) -> String {
        (**self).display(state)
    }
}

/// Encodes an explicit state id as a 4-byte big-endian descriptor.
pub fn explicit_descriptor(s: usize) -> StateDescriptor {
    StateDescriptor::new((s as u32).to_be_bytes().to_vec())
}

/// Inverse of [`explicit_descriptor`].
pub fn explicit_state(d: &StateDescriptor) -> Option<usize> {
    let bytes: [u8; 4] = d.as_bytes().try_into().ok()?;
    Some(u32::from_be_bytes(bytes) as usize)
}

/// Serves an [`ExplicitGba`] through the provider interface.
#[derive(Clone, Debug)]
pub struct ExplicitProvider<'g> {
    g: &'g ExplicitGba,
}

impl<'g> ExplicitProvider<'g> {
    pub fn new(g: &'g ExplicitGba) -> Self {
        ExplicitProvider { g }
    }

    pub fn automaton(&self) -> &'g ExplicitGba {
        self.g
    }

    fn state(&self, d: &StateDescriptor) -> usize {
        match explicit_state(d) {
            Some(s) if s < self.g.n() => s,
            _ => panic!("descriptor {d:?} does not name a state of this automaton"),
        }
    }
}

/// Adapter constructor matching the other operation names.
pub fn explicit_provider(g: &ExplicitGba) -> ExplicitProvider<'_> {
    ExplicitProvider::new(g)
}

impl AutomatonProvider for ExplicitProvider<'_> {
    fn initial(&mut self) -> StateDescriptor {
        explicit_descriptor(self.g.init())
    }

    fn post(&mut self, state: &StateDescriptor) -> Vec<StateDescriptor> {
        let s = self.state(state);
        self.g.succ(s).iter().map(|&t| explicit_descriptor(t)).collect()
    }

    fn acceptance(&self, state: &StateDescriptor) -> AcceptanceSet {
        self.g.acc(self.state(state))
    }

    fn conditions(&self) -> usize {
        self.g.k()
    }

    fn display(&self, state: &StateDescriptor) -> String {
        self.state(state).to_string()
    }
}

/// The reachable part of a provider, made explicit. State `i` of the
/// returned automaton is `descriptors[i]`; ids follow DFS discovery order
/// and successor lists keep the provider's order.
pub fn materialize<P: AutomatonProvider + ?Sized>(
    p: &mut P,
    limit: usize,
) -> Result<(ExplicitGba, Vec<StateDescriptor>)> {
    let mut ids: HashMap<StateDescriptor, usize> = HashMap::new();
    let mut descriptors = Vec::new();
    let mut succ: Vec<Vec<usize>> = Vec::new();
    let init = p.initial();
    ids.insert(init.clone(), 0);
    descriptors.push(init);
    succ.push(Vec::new());
    let mut stack = vec![0usize];
    while let Some(s) = stack.pop() {
        let post = p.post(&descriptors[s].clone());
        let mut list = Vec::with_capacity(post.len());
        for d in post {
            let t = match ids.get(&d) {
                Some(&t) => t,
                None => {
                    if descriptors.len() >= limit {
                        return Err(Error::CapacityExhausted(descriptors.len()));
                    }
                    let t = descriptors.len();
                    ids.insert(d.clone(), t);
                    descriptors.push(d);
                    succ.push(Vec::new());
                    stack.push(t);
                    t
                }
            };
            if !list.contains(&t) {
                list.push(t);
            }
        }
        succ[s] = list;
    }
    let acc = descriptors.iter().map(|d| p.acceptance(d)).collect();
    let g = ExplicitGba::from_parts(0, succ, acc, p.conditions())?;
    Ok((g, descriptors))
}
