//! Reference W1 solver used to cross-check the transportation simplex.
//!
//! Masses are scaled by the common denominator to integers and the problem is
//! solved as a min-cost flow with the primal-dual method: Bellman-Ford
//! distances from the source, then a maximum flow restricted to arcs that
//! are tight under those distances, repeated until all supply is routed.
//! Everything runs on `BigInt`, so the result is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::measure::DiscreteMeasure;
use crate::error::{Error, Result};
use crate::graph::{DistanceCache, Graph};
use crate::scalar::Scalar;

/// Largest support size (per side) the oracle accepts.
pub const ORACLE_MAX_ATOMS: usize = 12;

struct Arc {
    to: usize,
    cap: BigInt,
    cost: i64,
}

struct Network {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Network {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
        }
    }

    fn add(&mut self, from: usize, to: usize, cap: BigInt, cost: i64) {
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap, cost });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc {
            to: from,
            cap: BigInt::zero(),
            cost: -cost,
        });
    }

    fn bellman_ford(&self, source: usize) -> Vec<Option<i64>> {
        let n = self.out.len();
        let mut dist = vec![None; n];
        dist[source] = Some(0);
        for _ in 0..n {
            let mut changed = false;
            for u in 0..n {
                let Some(du) = dist[u] else { continue };
                for &a in &self.out[u] {
                    let arc = &self.arcs[a];
                    if arc.cap.is_positive() {
                        let cand = du + arc.cost;
                        if dist[arc.to].is_none_or(|d| cand < d) {
                            dist[arc.to] = Some(cand);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        dist
    }

    /// One augmenting path over tight arcs, found by BFS.
    fn tight_path(&self, s: usize, t: usize, dist: &[Option<i64>]) -> Option<Vec<usize>> {
        let mut via = vec![usize::MAX; self.out.len()];
        let mut seen = vec![false; self.out.len()];
        let mut queue = std::collections::VecDeque::from([s]);
        seen[s] = true;
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            let Some(du) = dist[u] else { continue };
            for &a in &self.out[u] {
                let arc = &self.arcs[a];
                if seen[arc.to] || !arc.cap.is_positive() {
                    continue;
                }
                if dist[arc.to] == Some(du + arc.cost) {
                    seen[arc.to] = true;
                    via[arc.to] = a;
                    queue.push_back(arc.to);
                }
            }
        }
        if !seen[t] {
            return None;
        }
        let mut path = Vec::new();
        let mut node = t;
        while node != s {
            let a = via[node];
            path.push(a);
            node = self.arcs[a ^ 1].to;
        }
        Some(path)
    }
}

fn exact_masses<S: Scalar>(m: &DiscreteMeasure<S>) -> Vec<BigRational> {
    m.masses()
        .iter()
        .map(|x| {
            x.to_rational()
                .unwrap_or_else(|| BigRational::from_float(x.to_f64()).unwrap_or_default())
        })
        .collect()
}

/// Exact W1 between `mu` and `nu` by primal-dual min-cost flow.
pub fn w1_oracle<S: Scalar>(
    g: &Graph,
    mu: &DiscreteMeasure<S>,
    nu: &DiscreteMeasure<S>,
) -> Result<S> {
    let largest = mu.len().max(nu.len());
    if largest > ORACLE_MAX_ATOMS {
        return Err(Error::OracleLimit(largest, ORACLE_MAX_ATOMS));
    }
    let a = exact_masses(mu);
    let b = exact_masses(nu);
    let scale = a
        .iter()
        .chain(&b)
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let to_int = |r: &BigRational| (r * BigRational::from_integer(scale.clone())).to_integer();
    let supply: Vec<BigInt> = a.iter().map(to_int).collect();
    let demand: Vec<BigInt> = b.iter().map(to_int).collect();
    let total: BigInt = supply.iter().sum();
    if total != demand.iter().sum::<BigInt>() {
        return Err(Error::InvalidMeasure(
            "measures have different total mass".into(),
        ));
    }

    let cache = DistanceCache::new(g);
    let (rows, cols) = (mu.len(), nu.len());
    let (s, t) = (0, rows + cols + 1);
    let mut net = Network::new(rows + cols + 2);
    for (i, &x) in mu.support().iter().enumerate() {
        net.add(s, 1 + i, supply[i].clone(), 0);
        for (j, &y) in nu.support().iter().enumerate() {
            let d = cache
                .distance(x, y)
                .ok_or(Error::InfiniteDistance { from: x, to: y })?;
            net.add(1 + i, 1 + rows + j, total.clone(), i64::from(d));
        }
    }
    for (j, d) in demand.iter().enumerate() {
        net.add(1 + rows + j, t, d.clone(), 0);
    }

    let mut routed = BigInt::zero();
    while routed < total {
        let dist = net.bellman_ford(s);
        if dist[t].is_none() {
            return Err(Error::InternalContradiction(
                "oracle could not route all supply".into(),
            ));
        }
        while let Some(path) = net.tight_path(s, t, &dist) {
            let push = path
                .iter()
                .map(|&a| net.arcs[a].cap.clone())
                .min()
                .expect("non-empty path");
            for &a in &path {
                net.arcs[a].cap -= &push;
                net.arcs[a ^ 1].cap += &push;
            }
            routed += push;
        }
    }

    // Flow on a middle arc equals the capacity accumulated on its reverse.
    let mut cost = BigInt::zero();
    for arc_pair in net.arcs.chunks(2) {
        let (fwd, rev) = (&arc_pair[0], &arc_pair[1]);
        if fwd.cost > 0 {
            cost += &rev.cap * BigInt::from(fwd.cost);
        }
    }
    Ok(S::from_rational(&BigRational::new(cost, scale)))
}
