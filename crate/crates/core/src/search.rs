//! Shared exploration plumbing: interning, counters, and tracing around a
//! provider. Every `post` issued by a search goes through [`Explorer::post`]
//! so the counters stay honest.

use std::time::Instant;

use crate::automaton::{AcceptanceSet, StateDescriptor, StateRef};
use crate::error::Result;
use crate::intern::InternStore;
use crate::metrics::Metrics;
use crate::provider::AutomatonProvider;
use crate::trace::{TraceEvent, Tracer};
use crate::verdict::Verdict;

/// Qualifies a verdict whose soundness rests on an unchecked assumption.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Caveat {
    /// Simple DFS ran without the caller asserting weakness.
    UnsoundIfNotWeak,
}

/// Result of one emptiness check.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    pub metrics: Metrics,
    /// Interned descriptors; trace events refer to indices into this table.
    pub states: Vec<StateDescriptor>,
    pub caveat: Option<Caveat>,
}

pub(crate) struct Explorer<'a, P: AutomatonProvider + ?Sized> {
    provider: &'a mut P,
    store: InternStore,
    acc: Vec<AcceptanceSet>,
    pub(crate) metrics: Metrics,
    tracer: &'a mut dyn Tracer,
    tracing: bool,
    started: Instant,
}

impl<'a, P: AutomatonProvider + ?Sized> Explorer<'a, P> {
    pub(crate) fn new(provider: &'a mut P, tracer: &'a mut dyn Tracer, aux_bits: u32) -> Self {
        let tracing = tracer.enabled();
        Explorer {
            provider,
            store: InternStore::new(),
            acc: Vec::new(),
            metrics: Metrics {
                aux_bits_per_state: aux_bits,
                ..Metrics::default()
            },
            tracer,
            tracing,
            started: Instant::now(),
        }
    }

    pub(crate) fn conditions(&self) -> usize {
        self.provider.conditions()
    }

    pub(crate) fn initial(&mut self) -> Result<StateRef> {
        let d = self.provider.initial();
        Ok(self.intern(&d)?.0)
    }

    fn intern(&mut self, d: &StateDescriptor) -> Result<(StateRef, bool)> {
        let (r, fresh) = self.store.intern(d)?;
        if fresh {
            self.acc.push(self.provider.acceptance(d));
        }
        Ok((r, fresh))
    }

    /// Counted successor computation.
    pub(crate) fn post(&mut self, s: StateRef) -> Result<Vec<StateRef>> {
        let d = self.store.descriptor(s).clone();
        let succ = self.provider.post(&d);
        self.metrics.post_calls += 1;
        self.metrics.successors_generated += succ.len() as u64;
        succ.iter().map(|t| Ok(self.intern(t)?.0)).collect()
    }

    /// Successors already interned, without touching the counters. Only used
    /// to assemble a counterexample after the report point.
    pub(crate) fn post_known(&mut self, s: StateRef) -> Vec<StateRef> {
        let d = self.store.descriptor(s).clone();
        self.provider
            .post(&d)
            .iter()
            .filter_map(|t| self.store.get(t))
            .collect()
    }

    #[inline]
    pub(crate) fn acc(&self, s: StateRef) -> AcceptanceSet {
        self.acc[s.index()]
    }

    #[inline]
    pub(crate) fn accepting(&self, s: StateRef) -> bool {
        !self.acc[s.index()].is_empty()
    }

    pub(crate) fn state_count(&self) -> usize {
        self.store.len()
    }

    #[inline]
    pub(crate) fn edge(&mut self, s: StateRef, t: StateRef) {
        self.metrics.transitions_explored += 1;
        self.trace(TraceEvent::Edge(s, t));
    }

    #[inline]
    pub(crate) fn depth(&mut self, depth: usize) {
        self.metrics.max_search_depth = self.metrics.max_search_depth.max(depth as u64);
    }

    #[inline]
    pub(crate) fn trace(&mut self, event: TraceEvent) {
        if self.tracing {
            self.tracer.event(event);
        }
    }

    pub(crate) fn finish(mut self, verdict: Verdict<StateRef>) -> SearchOutcome {
        self.metrics.wall_time = self.started.elapsed();
        self.metrics.distinct_states = self.store.len() as u64;
        self.metrics.descriptor_bytes = self.store.descriptor_bytes();
        let states = self.store.into_states();
        let verdict = verdict.map(|r| states[r.index()].clone());
        SearchOutcome {
            verdict,
            metrics: self.metrics,
            states,
            caveat: None,
        }
    }
}
