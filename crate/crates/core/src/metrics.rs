//! Exploration counters. Successor generation dominates the running time
//! of on-the-fly checks, so these counters are the unit of comparison.

use std::ops::AddAssign;
use std::time::Duration;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    /// Invocations of the provider's successor function.
    pub post_calls: u64,
    /// Total successor states returned across all `post` calls.
    pub successors_generated: u64,
    /// States discovered (interned, or first-colored in bitstate mode).
    pub distinct_states: u64,
    /// Transitions examined by the search loops, including nested ones.
    pub transitions_explored: u64,
    /// Deepest combined stack of search frames.
    pub max_search_depth: u64,
    /// Auxiliary storage per state required by the algorithm.
    pub aux_bits_per_state: u32,
    /// Sum of the byte lengths of stored descriptors.
    pub descriptor_bytes: u64,
    #[serde(rename = "wall_time_us", with = "micros")]
    pub wall_time: Duration,
}

impl AddAssign for Metrics {
    fn add_assign(&mut self, rhs: Metrics) {
        self.post_calls += rhs.post_calls;
        self.successors_generated += rhs.successors_generated;
        self.distinct_states += rhs.distinct_states;
        self.transitions_explored += rhs.transitions_explored;
        self.max_search_depth = self.max_search_depth.max(rhs.max_search_depth);
        self.aux_bits_per_state = self.aux_bits_per_state.max(rhs.aux_bits_per_state);
        self.descriptor_bytes += rhs.descriptor_bytes;
        self.wall_time += rhs.wall_time;
    }
}

mod micros {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_micros() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        Ok(Duration::from_micros(u64::deserialize(d)?))
    }
}
