//! Seeded generators for valid partial r-factorizations, used as extension
//! inputs in tests and experiments.

use std::collections::BTreeMap;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coloring::{HostKind, PartialFact};
use crate::edge::{Edge, VertexId};
use crate::error::{Error, Result};
use crate::params::Params;

/// A seed-randomized partial r-factorization of `K_m^h` inside ambient
/// parameters `(n, h, r)`: every edge of `K_m^h` is colored and every vertex
/// appears at most r times per class. Greedy over a shuffled edge order with
/// a uniformly random feasible color; fails only when a vertex can block
/// more classes than exist, which the ambient k rules out in practice.
pub fn random_partial(params: Params, m: u32, seed: u64) -> Result<PartialFact> {
    let (h, r) = (params.h, params.r);
    if m < h || m > params.n {
        return Err(Error::InvalidParameters(format!(
            "need h <= m <= n, got h={h}, m={m}, n={}",
            params.n
        )));
    }
    let k = params.k() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<Edge> = (1..=m)
        .combinations(h as usize)
        .map(|c| Edge::from_set(c.into_iter().map(VertexId)))
        .collect();
    edges.shuffle(&mut rng);

    let mut classes: Vec<BTreeMap<Edge, u64>> = vec![BTreeMap::new(); k];
    let mut deg = vec![vec![0u64; m as usize + 1]; k];
    for e in edges {
        let feasible: Vec<usize> = (0..k)
            .filter(|&i| e.vertices().all(|v| deg[i][v.0 as usize] < r))
            .collect();
        let &color = feasible.as_slice().choose(&mut rng).ok_or_else(|| {
            Error::Internal(format!("no feasible color for edge {e} with k={k}"))
        })?;
        for v in e.vertices() {
            deg[color][v.0 as usize] += 1;
        }
        *classes[color].entry(e).or_insert(0) += 1;
    }
    PartialFact::new(params, HostKind::Complete { m: Some(m) }, classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::check_partial;

    #[test]
    fn samples_are_valid_and_complete_on_the_sub_host() {
        let params = Params::new(28, 4, 3).unwrap();
        for seed in 0..5 {
            let pf = random_partial(params, 5, seed).unwrap();
            assert!(check_partial(&pf).ok());
            assert!(pf.coloring.uncolored().is_empty());
            assert_eq!(pf.coloring.total_colored(), 5); // binom(5,4)
        }
    }

    #[test]
    fn samples_vary_with_seed() {
        let params = Params::new(6, 3, 1).unwrap();
        let a = random_partial(params, 5, 1).unwrap();
        let b = random_partial(params, 5, 2).unwrap();
        assert_ne!(a.coloring, b.coloring);
    }
}
