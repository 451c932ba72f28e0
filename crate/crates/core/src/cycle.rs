//! Witness-cycle construction inside a strongly connected scope.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use crate::automaton::AcceptanceSet;

/// Shortest path of at least one step from `from` to a state satisfying
/// `is_target`, staying inside `in_scope`. Returns the states after `from`,
/// ending with the target.
pub(crate) fn bfs_path<S, F, I, T>(from: S, mut succ: F, in_scope: I, is_target: T) -> Option<Vec<S>>
where
    S: Copy + Eq + Hash,
    F: FnMut(S) -> Vec<S>,
    I: Fn(S) -> bool,
    T: Fn(S) -> bool,
{
    let mut parent: HashMap<S, Option<S>> = HashMap::new();
    let mut queue = VecDeque::new();
    for t in succ(from) {
        if in_scope(t) && !parent.contains_key(&t) {
            parent.insert(t, None);
            queue.push_back(t);
        }
    }
    while let Some(x) = queue.pop_front() {
        if is_target(x) {
            let mut path = vec![x];
            let mut cur = x;
            while let Some(Some(p)) = parent.get(&cur) {
                path.push(*p);
                cur = *p;
            }
            path.reverse();
            return Some(path);
        }
        for t in succ(x) {
            if in_scope(t) && !parent.contains_key(&t) {
                parent.insert(t, Some(x));
                queue.push_back(t);
            }
        }
    }
    None
}

/// A cycle through `start` inside `in_scope` that visits every condition
/// in `1..=k`: cover the conditions one at a time with shortest paths, then
/// close back to `start`. The returned list begins with `start` and omits
/// the closing repetition.
pub(crate) fn covering_cycle<S, F, I, A>(
    start: S,
    k: usize,
    mut succ: F,
    in_scope: I,
    acc: A,
) -> Option<Vec<S>>
where
    S: Copy + Eq + Hash,
    F: FnMut(S) -> Vec<S>,
    I: Fn(S) -> bool,
    A: Fn(S) -> AcceptanceSet,
{
    let mut cycle = vec![start];
    let mut covered = acc(start);
    let mut cur = start;
    for j in 1..=k {
        if covered.contains(j) {
            continue;
        }
        let leg = bfs_path(cur, &mut succ, &in_scope, |x| acc(x).contains(j))?;
        for &x in &leg {
            covered = covered.union(acc(x));
        }
        cur = *leg.last().expect("non-empty leg");
        cycle.extend(leg);
    }
    let mut back = bfs_path(cur, &mut succ, &in_scope, |x| x == start)?;
    back.pop();
    cycle.extend(back);
    Some(cycle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_loop() {
        let succ = |s: usize| if s == 0 { vec![0] } else { vec![] };
        let c = covering_cycle(0, 1, succ, |_| true, |_| AcceptanceSet::EMPTY.with(1));
        assert_eq!(c, Some(vec![0]));
    }

    #[test]
    fn covers_two_conditions() {
        // 0 -> 1 -> 0 and 0 -> 2 -> 0; A_1 = {1}, A_2 = {2}
        let adj = [vec![1, 2], vec![0], vec![0]];
        let acc = |s: usize| match s {
            1 => AcceptanceSet::EMPTY.with(1),
            2 => AcceptanceSet::EMPTY.with(2),
            _ => AcceptanceSet::EMPTY,
        };
        let c = covering_cycle(0, 2, |s| adj[s].clone(), |_| true, acc).unwrap();
        assert_eq!(c, vec![0, 1, 0, 2]);
    }

    #[test]
    fn scope_is_respected() {
        let adj = [vec![1], vec![0]];
        assert_eq!(covering_cycle(0, 0, |s| adj[s].clone(), |s| s == 0, |_| AcceptanceSet::EMPTY), None);
    }
}
