//! SCC-based emptiness checks.
//!
//! * [`ascc_check`]: Couvreur's roots stack plus an explicit Tarjan stack
//!   (`Active`) and a `current` bit. Handles any number of acceptance
//!   conditions.
//! * [`gv_check`]: Tarjan with lowlinks and a stack of the accepting states
//!   on the search path. One acceptance condition only.
//! * [`c99_check`]: the roots stack without `Active`; finished SCCs are
//!   marked removed by an extra search that recomputes successors.
//!
//! With a fixed successor order, ASCC and GV report after exploring exactly
//! the same transitions.

mod ascc;
mod c99;
mod gv;

pub use ascc::{ascc_check, ascc_check_traced};
pub use c99::{c99_check, c99_check_traced};
pub use gv::{gv_check, gv_check_traced};

use crate::automaton::{AcceptanceSet, StateRef};
use crate::cycle::covering_cycle;
use crate::error::{Error, Result};
use crate::provider::AutomatonProvider;
use crate::search::Explorer;
use crate::verdict::Lasso;

/// Per-state search data. `dfsnum == 0` means unvisited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NodeData {
    pub dfsnum: u32,
    pub current: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootsEntry {
    pub root: StateRef,
    pub acc: AcceptanceSet,
}

pub(crate) struct Frame {
    pub(crate) state: StateRef,
    pub(crate) succ: Vec<StateRef>,
    pub(crate) cursor: usize,
}

pub(crate) fn grow<T: Default + Clone>(v: &mut Vec<T>, s: StateRef) {
    if s.index() >= v.len() {
        v.resize(s.index() + 1, T::default());
    }
}

/// Builds the counterexample once a merged SCC rooted at `root` carries all
/// `k` conditions. `in_scc` must hold exactly for the merged SCC's states;
/// `root` must lie on the search path `frames`.
pub(crate) fn extract_lasso<P: AutomatonProvider + ?Sized>(
    ex: &mut Explorer<'_, P>,
    frames: &[Frame],
    root: StateRef,
    in_scc: impl Fn(StateRef) -> bool,
) -> Result<Lasso<StateRef>> {
    let pos = frames
        .iter()
        .position(|f| f.state == root)
        .ok_or_else(|| Error::Internal(format!("root {root} is not on the search path")))?;
    let prefix = frames[..pos].iter().map(|f| f.state).collect();
    let k = ex.conditions();
    let acc: Vec<AcceptanceSet> = (0..ex.state_count()).map(|i| ex.acc(StateRef(i as u32))).collect();
    let cycle = covering_cycle(root, k, |s| ex.post_known(s), in_scc, |s| acc[s.index()])
        .ok_or_else(|| Error::Internal(format!("no accepting cycle through root {root}")))?;
    Ok(Lasso { prefix, cycle })
}
