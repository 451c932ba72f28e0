//! Seeded automaton generators: uniform random (generalized) automata and
//! families with specific structure that separate the algorithms' costs.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::automaton::{ExplicitGba, MAX_CONDITIONS};
use crate::error::{Error, Result};
use crate::scc::scc_decompose_all;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub n: usize,
    pub avg_out_degree: f64,
    pub k: usize,
    /// Probability that a state belongs to a given `A_j`.
    pub acc_density: f64,
    pub seed: u64,
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if !(self.avg_out_degree >= 0.0 && self.avg_out_degree.is_finite()) {
            return Err(Error::Config(format!("bad average out-degree {}", self.avg_out_degree)));
        }
        if !(0.0..=1.0).contains(&self.acc_density) {
            return Err(Error::Config(format!("acceptance density {} outside [0, 1]", self.acc_density)));
        }
        if self.k > MAX_CONDITIONS {
            return Err(Error::Config(format!("at most {MAX_CONDITIONS} acceptance conditions")));
        }
        Ok(())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Out-degrees are geometric with mean `avg_out_degree` (capped at `n`);
/// targets are distinct and uniform.
fn random_edges(g: &mut ExplicitGba, avg_out_degree: f64, rng: &mut ChaCha8Rng) {
    let n = g.n();
    let degree = Geometric::new(1.0 / (1.0 + avg_out_degree)).expect("valid probability");
    for s in 0..n {
        let d = (degree.sample(rng) as usize).min(n);
        for t in index::sample(rng, n, d) {
            g.add_edge(s, t);
        }
    }
}

/// Deterministic in the seed; state 0 is initial.
pub fn random_gba(c: &GenConfig) -> Result<ExplicitGba> {
    c.validate()?;
    let mut rng = rng(c.seed);
    let mut g = ExplicitGba::new(c.n, c.k);
    random_edges(&mut g, c.avg_out_degree, &mut rng);
    for s in 0..c.n {
        for j in 1..=c.k {
            if rng.random_bool(c.acc_density) {
                g.set_accepting(s, j);
            }
        }
    }
    Ok(g)
}

/// Random graph whose SCCs are accepting or rejecting as a whole; each SCC
/// is accepting with probability `acc_density`.
pub fn weak_random(c: &GenConfig) -> Result<ExplicitGba> {
    c.validate()?;
    if c.k != 1 {
        return Err(Error::Config(format!("weak automata have one acceptance condition, got k = {}", c.k)));
    }
    let mut rng = rng(c.seed);
    let mut g = ExplicitGba::new(c.n, 1);
    random_edges(&mut g, c.avg_out_degree, &mut rng);
    for scc in scc_decompose_all(&g) {
        if rng.random_bool(c.acc_density) {
            for &s in &scc.states {
                g.set_accepting(s, 1);
            }
        }
    }
    Ok(g)
}

/// Product-like automaton of an acyclic system with a "infinitely often p"
/// property: `n_sys` accepting states forming a DAG backbone (a chain plus
/// random forward edges), all draining into a self-looping sink. The sink is
/// accepting iff `nonempty`. Always weak.
pub fn gen_trivial_accepting(n_sys: usize, seed: u64, nonempty: bool) -> Result<ExplicitGba> {
    if n_sys < 2 {
        return Err(Error::Config("n_sys must be at least 2".into()));
    }
    let mut rng = rng(seed);
    let sink = n_sys;
    let mut g = ExplicitGba::new(n_sys + 1, 1);
    for s in 0..n_sys {
        g.add_edge(s, s + 1);
        for _ in 0..rng.random_range(0..=2) {
            let t = rng.random_range(s + 1..=sink);
            g.add_edge(s, t);
        }
        g.set_accepting(s, 1);
    }
    g.add_edge(sink, sink);
    if nonempty {
        g.set_accepting(sink, 1);
    }
    shuffle_successors(g, &mut rng)
}

/// A chain of `n_sccs` non-trivial, non-accepting SCCs of `scc_size` states
/// each (a ring plus random chords), linked by one edge between consecutive
/// SCCs. No state is accepting.
pub fn gen_nonacc_scc_chain(n_sccs: usize, scc_size: usize, seed: u64) -> Result<ExplicitGba> {
    if n_sccs == 0 || scc_size == 0 {
        return Err(Error::Config("SCC count and size must be at least 1".into()));
    }
    let mut rng = rng(seed);
    let mut g = ExplicitGba::new(n_sccs * scc_size, 1);
    for i in 0..n_sccs {
        let base = i * scc_size;
        for m in 0..scc_size {
            g.add_edge(base + m, base + (m + 1) % scc_size);
        }
        for _ in 0..scc_size / 2 {
            let s = base + rng.random_range(0..scc_size);
            let t = base + rng.random_range(0..scc_size);
            g.add_edge(s, t);
        }
        if i + 1 < n_sccs {
            let s = base + rng.random_range(0..scc_size);
            let t = base + scc_size + rng.random_range(0..scc_size);
            g.add_edge(s, t);
        }
    }
    shuffle_successors(g, &mut rng)
}

fn shuffle_successors(g: ExplicitGba, rng: &mut ChaCha8Rng) -> Result<ExplicitGba> {
    let mut succ = g.successors().to_vec();
    for list in &mut succ {
        list.shuffle(rng);
    }
    ExplicitGba::from_parts(g.init(), succ, g.acceptance().to_vec(), g.k())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::oracle_emptiness;
    use crate::scc::{is_weak, scc_decompose};

    fn config(seed: u64) -> GenConfig {
        GenConfig {
            n: 20,
            avg_out_degree: 2.0,
            k: 2,
            acc_density: 0.3,
            seed,
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(random_gba(&config(9)).unwrap(), random_gba(&config(9)).unwrap());
        assert_ne!(random_gba(&config(9)).unwrap(), random_gba(&config(10)).unwrap());
    }

    #[test]
    fn no_acceptance_means_empty() {
        for seed in 0..50 {
            let g = random_gba(&GenConfig { acc_density: 0.0, k: 1, ..config(seed) }).unwrap();
            assert!(oracle_emptiness(&g).is_empty());
        }
    }

    #[test]
    fn edge_count_tracks_degree() {
        let g = random_gba(&GenConfig { n: 2000, avg_out_degree: 3.0, ..config(1) }).unwrap();
        let avg = g.edge_count() as f64 / 2000.0;
        assert!((2.7..3.3).contains(&avg), "average degree {avg}");
    }

    #[test]
    fn config_validation() {
        assert!(random_gba(&GenConfig { n: 0, ..config(0) }).is_err());
        assert!(random_gba(&GenConfig { acc_density: 1.5, ..config(0) }).is_err());
        assert!(random_gba(&GenConfig { avg_out_degree: -1.0, ..config(0) }).is_err());
        assert!(weak_random(&config(0)).is_err());
    }

    #[test]
    fn trivial_accepting_shape() {
        for seed in 0..20 {
            let g = gen_trivial_accepting(30, seed, false).unwrap();
            assert!(is_weak(&g).unwrap());
            assert!(oracle_emptiness(&g).is_empty());
            let trivial_acc = scc_decompose(&g)
                .iter()
                .filter(|c| !c.nontrivial && g.is_accepting(c.states[0], 1))
                .count();
            assert!(trivial_acc >= 30);
            assert!(!oracle_emptiness(&gen_trivial_accepting(30, seed, true).unwrap()).is_empty());
        }
    }

    #[test]
    fn scc_chain_shape() {
        for seed in 0..20 {
            let g = gen_nonacc_scc_chain(4, 5, seed).unwrap();
            let sccs = scc_decompose(&g);
            assert_eq!(sccs.iter().filter(|c| c.nontrivial).count(), 4);
            assert_eq!(sccs.len(), 4);
            assert!(oracle_emptiness(&g).is_empty());
        }
        let g = gen_nonacc_scc_chain(3, 1, 0).unwrap();
        assert_eq!(scc_decompose(&g).iter().filter(|c| c.nontrivial).count(), 3);
    }
}
