//! Graph families with designated communities.
//!
//! Two-block constructions put the first block on vertices `0..m` (label 0)
//! and the second on `m..m+n` (label 1); `a_i = i` and `b_i = m + i`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{CommunityPartition, Edge, Graph};

/// SplitMix64 output function applied to `z`.
pub fn splitmix64(z: u64) -> u64 {
    let mut z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one Monte-Carlo trial: SplitMix64 folded over
/// `(master, m, n, k, trial)`, so every trial owns an independent stream.
pub fn derive_seed(master: u64, m: usize, n: usize, k: usize, trial: usize) -> u64 {
    [m, n, k, trial]
        .into_iter()
        .fold(splitmix64(master), |h, x| splitmix64(h ^ x as u64))
}

/// The generator behind every random construction.
pub fn trial_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Floyd's algorithm: `k` distinct values from `0..population`, sorted.
pub fn sample_without_replacement<R: Rng>(rng: &mut R, population: usize, k: usize) -> Vec<usize> {
    assert!(k <= population);
    let mut chosen = BTreeSet::new();
    for j in population - k..population {
        let t = rng.gen_range(0..=j);
        if !chosen.insert(t) {
            chosen.insert(j);
        }
    }
    chosen.into_iter().collect()
}

fn clique_edges(offset: usize, n: usize) -> impl Iterator<Item = Edge> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (offset + i, offset + j)))
}

fn two_blocks(
    m: usize,
    n: usize,
    cross: impl IntoIterator<Item = Edge>,
) -> (Graph, CommunityPartition) {
    let mut edges: Vec<Edge> = clique_edges(0, m)
        .chain(clique_edges(m, n))
        .chain(cross)
        .collect();
    edges.sort_unstable();
    let labels = (0..m + n).map(|v| usize::from(v >= m)).collect();
    let partition = CommunityPartition::new(labels).expect("both blocks are non-empty");
    (Graph::from_canonical(m + n, edges), partition)
}

/// `K_n`.
pub fn complete_community(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidSize("complete graph needs n >= 1".into()));
    }
    Ok(Graph::from_canonical(n, clique_edges(0, n).collect()))
}

/// `K_m` and `K_n` joined by the single bridge `a_0 b_0`.
pub fn dumbbell(m: usize, n: usize) -> Result<(Graph, CommunityPartition)> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidSize(
            "dumbbell blocks need at least one vertex".into(),
        ));
    }
    Ok(two_blocks(m, n, [(0, m)]))
}

/// Two copies of `K_n` with the matching edges `a_i b_i` for `i < n - 1`;
/// every intercommunity edge is flat.
pub fn zero_curvature_config(n: usize) -> Result<(Graph, CommunityPartition)> {
    if n < 3 {
        return Err(Error::InvalidSize(format!(
            "zero-curvature configuration needs n >= 3, got {n}"
        )));
    }
    Ok(two_blocks(n, n, (0..n - 1).map(|i| (i, n + i))))
}

/// `K_n x K_2`: two copies of `K_n` joined by a perfect matching.
pub fn prism(n: usize) -> Result<(Graph, CommunityPartition)> {
    if n < 2 {
        return Err(Error::InvalidSize(format!("prism needs n >= 2, got {n}")));
    }
    Ok(two_blocks(n, n, (0..n).map(|i| (i, n + i))))
}

/// Parameters of a random two-community graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoCommunitySpec {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub seed: u64,
}

/// `K_m` and `K_n` plus `k` intercommunity edges drawn uniformly without
/// replacement from the `m * n` candidate pairs.
pub fn random_two_community(spec: TwoCommunitySpec) -> Result<(Graph, CommunityPartition)> {
    let TwoCommunitySpec { m, n, k, seed } = spec;
    if m == 0 || n == 0 {
        return Err(Error::InvalidSize(
            "communities need at least one vertex".into(),
        ));
    }
    let pairs = m * n;
    if k > pairs {
        return Err(Error::InvalidK { k, max: pairs });
    }
    let mut rng = trial_rng(seed);
    let cross = sample_without_replacement(&mut rng, pairs, k)
        .into_iter()
        .map(|p| (p / n, m + p % n));
    Ok(two_blocks(m, n, cross))
}

/// Complete blocks of the given sizes plus `k` random edges between
/// distinct blocks. Used for multi-community property tests.
pub fn random_multi_community(
    sizes: &[usize],
    k: usize,
    seed: u64,
) -> Result<(Graph, CommunityPartition)> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::InvalidSize(
            "every community needs at least one vertex".into(),
        ));
    }
    let offsets: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, &s| {
            let start = *acc;
            *acc += s;
            Some(start)
        })
        .collect();
    let total: usize = sizes.iter().sum();
    let mut labels = vec![0; total];
    let mut edges: Vec<Edge> = Vec::new();
    for (c, (&start, &size)) in offsets.iter().zip(sizes).enumerate() {
        labels[start..start + size].iter_mut().for_each(|l| *l = c);
        edges.extend(clique_edges(start, size));
    }
    let candidates: Vec<Edge> = (0..total)
        .flat_map(|u| (u + 1..total).map(move |v| (u, v)))
        .filter(|&(u, v)| labels[u] != labels[v])
        .collect();
    if k > candidates.len() {
        return Err(Error::InvalidK {
            k,
            max: candidates.len(),
        });
    }
    let mut rng = trial_rng(seed);
    edges.extend(
        sample_without_replacement(&mut rng, candidates.len(), k)
            .into_iter()
            .map(|i| candidates[i]),
    );
    edges.sort_unstable();
    Ok((
        Graph::from_canonical(total, edges),
        CommunityPartition::new(labels)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bfs_distances, classify_edges};

    #[test]
    fn complete_graph_sizes() {
        assert_eq!(complete_community(1).unwrap().edge_count(), 0);
        assert_eq!(complete_community(3).unwrap().edge_count(), 3);
        assert_eq!(complete_community(5).unwrap().edge_count(), 10);
        assert!(complete_community(0).is_err());
    }

    #[test]
    fn dumbbell_has_one_bridge() {
        let (g, p) = dumbbell(3, 3).unwrap();
        assert_eq!(g.edge_count(), 7);
        assert_eq!(classify_edges(&g, &p).unwrap().inter, vec![(0, 3)]);
        let (g, _) = dumbbell(1, 1).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn zero_config_shape() {
        let (g, p) = zero_curvature_config(3).unwrap();
        assert_eq!(g.edge_count(), 8);
        let (g, p4) = zero_curvature_config(4).unwrap();
        assert_eq!(bfs_distances(&g, 3)[7], Some(3));
        assert_eq!(classify_edges(&g, &p4).unwrap().inter.len(), 3);
        assert_eq!(p.sizes(), vec![3, 3]);
        assert_eq!(zero_curvature_config(2).unwrap_err().code(), "INVALID_SIZE");
    }

    #[test]
    fn prism_is_zero_config_plus_one_edge() {
        for n in 3..8 {
            let (z, _) = zero_curvature_config(n).unwrap();
            let (p, _) = prism(n).unwrap();
            assert_eq!(p.edge_count(), n * (n - 1) + n);
            let extra: Vec<_> = p
                .edges()
                .iter()
                .filter(|e| !z.edges().contains(e))
                .collect();
            assert_eq!(extra, vec![&(n - 1, 2 * n - 1)]);
        }
        let (c4, _) = prism(2).unwrap();
        assert!((0..4).all(|v| c4.degree(v) == 2));
    }

    #[test]
    fn random_graph_is_reproducible() {
        let spec = TwoCommunitySpec {
            m: 6,
            n: 5,
            k: 9,
            seed: 42,
        };
        let (a, _) = random_two_community(spec).unwrap();
        let (b, _) = random_two_community(spec).unwrap();
        assert_eq!(a, b);
        let (c, _) = random_two_community(TwoCommunitySpec { seed: 43, ..spec }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn random_graph_extremes() {
        let (g, p) = random_two_community(TwoCommunitySpec {
            m: 3,
            n: 4,
            k: 12,
            seed: 1,
        })
        .unwrap();
        assert_eq!(classify_edges(&g, &p).unwrap().inter.len(), 12);
        let (g, _) = random_two_community(TwoCommunitySpec {
            m: 3,
            n: 4,
            k: 0,
            seed: 1,
        })
        .unwrap();
        assert_eq!(bfs_distances(&g, 0)[3], None);
        let err = random_two_community(TwoCommunitySpec {
            m: 3,
            n: 4,
            k: 13,
            seed: 1,
        })
        .unwrap_err();
        assert_eq!(err, Error::InvalidK { k: 13, max: 12 });
    }

    #[test]
    fn floyd_sample_is_distinct_and_in_range() {
        let mut rng = trial_rng(7);
        let s = sample_without_replacement(&mut rng, 50, 20);
        assert_eq!(s.len(), 20);
        assert!(s.windows(2).all(|w| w[0] < w[1]) && *s.last().unwrap() < 50);
    }

    #[test]
    fn seeds_differ_per_coordinate() {
        let base = derive_seed(7, 128, 128, 256, 0);
        assert_ne!(base, derive_seed(7, 128, 128, 256, 1));
        assert_ne!(base, derive_seed(8, 128, 128, 256, 0));
        assert_ne!(base, derive_seed(7, 128, 128, 384, 0));
        assert_eq!(base, derive_seed(7, 128, 128, 256, 0));
    }

    #[test]
    fn multi_community_blocks_are_complete() {
        let (g, p) = random_multi_community(&[3, 4, 2], 5, 9).unwrap();
        assert_eq!(p.sizes(), vec![3, 4, 2]);
        let class = classify_edges(&g, &p).unwrap();
        assert_eq!(class.inter.len(), 5);
        assert_eq!(class.intra.len(), 3 + 6 + 1);
    }
}
