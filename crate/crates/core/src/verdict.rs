//! The output contract shared by every emptiness check.

use serde::{Deserialize, Serialize};

use crate::automaton::StateDescriptor;

/// A finite representation of an accepting run: `prefix` leads from the
/// initial state to `cycle[0]`, and `cycle` closes back on itself.
///
/// An empty prefix means the cycle starts at the initial state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lasso<S = StateDescriptor> {
    pub prefix: Vec<S>,
    pub cycle: Vec<S>,
}

impl<S> Lasso<S> {
    pub fn map<T>(self, mut f: impl FnMut(S) -> T) -> Lasso<T> {
        Lasso {
            prefix: self.prefix.into_iter().map(&mut f).collect(),
            cycle: self.cycle.into_iter().map(&mut f).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All states, prefix first.
    pub fn states(&self) -> impl Iterator<Item = &S> {
        self.prefix.iter().chain(self.cycle.iter())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict<S = StateDescriptor> {
    Empty,
    Counterexample(Lasso<S>),
}

impl<S> Verdict<S> {
    pub fn is_empty(&self) -> bool {
        matches!(self, Verdict::Empty)
    }

    pub fn lasso(&self) -> Option<&Lasso<S>> {
        match self {
            Verdict::Empty => None,
            Verdict::Counterexample(l) => Some(l),
        }
    }

    pub fn map<T>(self, f: impl FnMut(S) -> T) -> Verdict<T> {
        match self {
            Verdict::Empty => Verdict::Empty,
            Verdict::Counterexample(l) => Verdict::Counterexample(l.map(f)),
        }
    }
}
