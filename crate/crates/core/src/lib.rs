//! Emptiness checking for Büchi and generalized Büchi automata explored on
//! the fly: nested depth-first search variants, SCC-based checks, a
//! bitstate mode, a lazy product with Kripke structures, and the oracles and
//! generators used to cross-check them.

pub mod automaton;
pub mod bench;
pub mod cycle;
pub mod degen;
pub mod error;
pub mod gen;
pub mod intern;
pub mod invariants;
pub mod metrics;
pub mod ndfs;
pub mod oracle;
pub mod product;
pub mod provider;
pub mod scc;
pub mod scc_algos;
pub mod search;
pub mod trace;
pub mod verdict;

mod text;

pub use bench::{run_bench, run_check, run_differential, Algorithm, CheckOptions, CheckReport};
pub use automaton::{AcceptanceSet, ExplicitGba, StateDescriptor, StateRef, MAX_CONDITIONS};
pub use degen::degeneralize;
pub use error::{Error, Result};
pub use metrics::Metrics;
pub use ndfs::bitstate::{bitstate_check, ApproxVerdict, BitstateAlgo, BitstateOutcome};
pub use ndfs::{and_check, ndfs_baseline, sd_check, Color};
pub use oracle::{oracle_emptiness, validate_lasso};
pub use product::{product_provider, GuardExpr, KripkeStructure, LabeledGba, ProductProvider};
pub use provider::{explicit_provider, materialize, AutomatonProvider, ExplicitProvider};
pub use scc::{is_weak, scc_decompose, Scc};
pub use scc_algos::{ascc_check, c99_check, gv_check};
pub use search::{Caveat, SearchOutcome};
pub use trace::{TraceEvent, Tracer};
pub use verdict::{Lasso, Verdict};
