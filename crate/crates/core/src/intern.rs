//! Descriptor interning: maps opaque descriptors onto dense [`StateRef`]s.

use std::collections::HashMap;

use crate::automaton::{StateDescriptor, StateRef};
use crate::error::{Error, Result};

#[derive(Debug)]
pub struct InternStore {
    index: HashMap<StateDescriptor, StateRef>,
    states: Vec<StateDescriptor>,
    capacity: usize,
    bytes: u64,
}

impl Default for InternStore {
    fn default() -> Self {
        Self::new()
    }
}

impl InternStore {
    pub fn new() -> Self {
        Self::with_limit(u32::MAX as usize)
    }

    /// A store that refuses to hold more than `capacity` states.
    pub fn with_limit(capacity: usize) -> Self {
        InternStore {
            index: HashMap::new(),
            states: Vec::new(),
            capacity: capacity.min(u32::MAX as usize),
            bytes: 0,
        }
    }

    /// Returns the state's index and whether this was its first sighting.
    pub fn intern(&mut self, descriptor: &StateDescriptor) -> Result<(StateRef, bool)> {
        if let Some(&r) = self.index.get(descriptor) {
            return Ok((r, false));
        }
        if self.states.len() >= self.capacity {
            return Err(Error::CapacityExhausted(self.states.len()));
        }
        let r = StateRef(self.states.len() as u32);
        self.index.insert(descriptor.clone(), r);
        self.bytes += descriptor.len() as u64;
        self.states.push(descriptor.clone());
        Ok((r, true))
    }

    pub fn get(&self, descriptor: &StateDescriptor) -> Option<StateRef> {
        self.index.get(descriptor).copied()
    }

    pub fn descriptor(&self, r: StateRef) -> &StateDescriptor {
        &self.states[r.index()]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Total bytes of all interned descriptors.
    pub fn descriptor_bytes(&self) -> u64 {
        self.bytes
    }

    pub fn into_states(self) -> Vec<StateDescriptor> {
        self.states
    }
}
