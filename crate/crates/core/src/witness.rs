//! Certificates for curvature bounds that do not depend on the LP solver.
//!
//! For an intercommunity edge `xy` with `x` in `C1` and `y` in `C2`, the
//! vertices split into fifteen regions on which a fixed integer potential is
//! constant. Its dual value is a lower bound on `W(m_x, m_y)` and hence an
//! upper bound on `kappa(xy)`. In the other direction, explicit transference
//! plans for the zero-curvature configuration and the prism give lower bounds.
//!
//! Region definitions (`C3` is everything outside `C1` and `C2`):
//!
//! | region | members |
//! |---|---|
//! | B | `C1 - x` adjacent to `y` |
//! | D | `C2 - y` adjacent to `x` |
//! | C | rest of `C1 - x` with a neighbour in `C2` |
//! | E | rest of `C2 - y` with a neighbour in `C1` |
//! | J | rest of `C1` two steps from `C2` through a `C3` vertex |
//! | K | rest of `C2` two steps from `C1` through a `C3` vertex |
//! | A, F | whatever remains of `C1`, `C2` |
//! | G | `C3` adjacent to both `x` and `y` |
//! | H, I | rest of `C3` adjacent to `x`, resp. `y` |
//! | L | rest of `C3` adjacent to `J` |
//! | M | whatever remains of `C3` |

use std::fmt;

use crate::curvature::{edge_curvature_cached, lazy_measure, Alpha};
use crate::error::{Error, Result};
use crate::graph::{CommunityPartition, DistanceCache, Edge, Graph};
use crate::scalar::{Scalar, Tolerance};
use crate::transport::{
    dual_value, verify_lipschitz, verify_transport_certificate, LipschitzViolation, PlanEntry,
    Potential, TransferencePlan,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Region {
    X,
    Y,
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    I,
    J,
    K,
    L,
    M,
}

impl Region {
    /// Display order, grouped by community.
    pub const ALL: [Region; 15] = [
        Region::J,
        Region::A,
        Region::B,
        Region::C,
        Region::X,
        Region::Y,
        Region::D,
        Region::E,
        Region::F,
        Region::K,
        Region::G,
        Region::H,
        Region::M,
        Region::I,
        Region::L,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Region::X => "x",
            Region::Y => "y",
            Region::A => "A",
            Region::B => "B",
            Region::C => "C",
            Region::D => "D",
            Region::E => "E",
            Region::F => "F",
            Region::G => "G",
            Region::H => "H",
            Region::I => "I",
            Region::J => "J",
            Region::K => "K",
            Region::L => "L",
            Region::M => "M",
        }
    }

    /// Value of the witness potential on this region.
    pub fn potential(self) -> i64 {
        match self {
            Region::J | Region::A | Region::M => 0,
            Region::B | Region::C | Region::X | Region::G | Region::H | Region::I | Region::L => -1,
            Region::Y | Region::D | Region::E | Region::K => -2,
            Region::F => -3,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The region of every vertex for one oriented intercommunity edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofPartition {
    pub x: usize,
    pub y: usize,
    /// `|C1|`, the community of `x`.
    pub n: usize,
    /// `|C2|`, the community of `y`.
    pub m: usize,
    pub dx: usize,
    pub dy: usize,
    regions: Vec<Region>,
    /// `C3` vertices adjacent to `K`; the alternative description of `L`.
    pub l_via_k: Vec<usize>,
}

impl ProofPartition {
    pub fn region(&self, v: usize) -> Region {
        self.regions[v]
    }

    pub fn members(&self, r: Region) -> Vec<usize> {
        (0..self.regions.len())
            .filter(|&v| self.regions[v] == r)
            .collect()
    }

    pub fn count(&self, r: Region) -> usize {
        self.regions.iter().filter(|&&q| q == r).count()
    }

    /// Whether `L` coincides with the set of `C3` vertices adjacent to `K`.
    pub fn l_characterizations_agree(&self) -> bool {
        self.l_via_k == self.members(Region::L)
    }

    /// The witness potential as a vertex function.
    pub fn potential<S: Scalar>(&self) -> Potential<S> {
        self.regions
            .iter()
            .enumerate()
            .map(|(v, r)| (v, S::from_int(r.potential())))
            .collect()
    }

    fn check_constraints(&self, g: &Graph, p: &CommunityPartition) -> Result<()> {
        let c = |r| self.count(r);
        let checks = [
            (
                "A + B + C + J + 1 = n",
                c(Region::A) + c(Region::B) + c(Region::C) + c(Region::J) + 1,
                self.n,
            ),
            (
                "D + E + F + K + 1 = m",
                c(Region::D) + c(Region::E) + c(Region::F) + c(Region::K) + 1,
                self.m,
            ),
            (
                "n + D + G + H = d_x",
                self.n + c(Region::D) + c(Region::G) + c(Region::H),
                self.dx,
            ),
            (
                "m + B + G + I = d_y",
                self.m + c(Region::B) + c(Region::G) + c(Region::I),
                self.dy,
            ),
        ];
        for (equation, lhs, rhs) in checks {
            if lhs != rhs {
                return Err(Error::InternalContradiction(format!(
                    "{equation} fails for edge ({}, {}): {lhs} != {rhs}; communities must be complete",
                    self.x, self.y
                )));
            }
        }
        let (c1, c2) = (p.label(self.x), p.label(self.y));
        for v in 0..g.vertex_count() {
            let forbidden = match self.regions[v] {
                Region::A | Region::J => c2,
                Region::F | Region::K => c1,
                _ => continue,
            };
            if let Some(&w) = g.neighbors(v).iter().find(|&&w| p.label(w) == forbidden) {
                return Err(Error::InternalContradiction(format!(
                    "region {} vertex {v} is adjacent to {w} across communities",
                    self.regions[v]
                )));
            }
        }
        Ok(())
    }
}

/// Partitions the vertices for the oriented edge `(x, y)` and checks the
/// counting identities that the bound relies on.
pub fn build_partition(g: &Graph, p: &CommunityPartition, (x, y): Edge) -> Result<ProofPartition> {
    if p.len() != g.vertex_count() {
        return Err(Error::Dimension(format!(
            "{} labels for {} vertices",
            p.len(),
            g.vertex_count()
        )));
    }
    if !g.has_edge(x, y) {
        return Err(Error::NotAnEdge(x, y));
    }
    let (c1, c2) = (p.label(x), p.label(y));
    if c1 == c2 {
        return Err(Error::InvalidPartition(format!(
            "({x}, {y}) is not an intercommunity edge"
        )));
    }
    let side = |v: usize| match p.label(v) {
        l if l == c1 => 1,
        l if l == c2 => 2,
        _ => 3,
    };
    let touches = |v: usize, s: u8| g.neighbors(v).iter().any(|&w| side(w) == s);
    // Two steps to community `s` through a vertex of C3.
    let bridged = |v: usize, s: u8| {
        g.neighbors(v)
            .iter()
            .any(|&w| side(w) == 3 && touches(w, s))
    };

    let mut regions: Vec<Region> = (0..g.vertex_count())
        .map(|v| match side(v) {
            _ if v == x => Region::X,
            _ if v == y => Region::Y,
            1 if g.has_edge(v, y) => Region::B,
            1 if touches(v, 2) => Region::C,
            1 if bridged(v, 2) => Region::J,
            1 => Region::A,
            2 if g.has_edge(v, x) => Region::D,
            2 if touches(v, 1) => Region::E,
            2 if bridged(v, 1) => Region::K,
            2 => Region::F,
            _ => match (g.has_edge(v, x), g.has_edge(v, y)) {
                (true, true) => Region::G,
                (true, false) => Region::H,
                (false, true) => Region::I,
                (false, false) => Region::M,
            },
        })
        .collect();
    for v in 0..g.vertex_count() {
        if regions[v] == Region::M && g.neighbors(v).iter().any(|&w| regions[w] == Region::J) {
            regions[v] = Region::L;
        }
    }
    let l_via_k = (0..g.vertex_count())
        .filter(|&v| side(v) == 3 && g.neighbors(v).iter().any(|&w| regions[w] == Region::K))
        .collect();

    let partition = ProofPartition {
        x,
        y,
        n: (0..g.vertex_count()).filter(|&v| side(v) == 1).count(),
        m: (0..g.vertex_count()).filter(|&v| side(v) == 2).count(),
        dx: g.degree(x),
        dy: g.degree(y),
        regions,
        l_via_k,
    };
    partition.check_constraints(g, p)?;
    Ok(partition)
}

/// Solver-independent upper bound on the curvature of one edge.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessBound<S> {
    pub partition: ProofPartition,
    pub potential: Potential<S>,
    /// `alpha + beta [(n - 1 + A + J + G + H)/d_x + (m - 1 + F)/d_y - 1]`,
    /// a lower bound on `W(m_x, m_y)`.
    pub w_lower: S,
    pub kappa_upper: S,
    /// Edge-wise 1-Lipschitz check of the potential on the whole graph.
    /// Always passes with two communities; with more, `F`, `D`, `E` or `y`
    /// may border `M` or `I`, which does not affect the bound.
    pub lipschitz: Result<(), LipschitzViolation>,
}

/// Upper bound on `kappa(x, y)` from the region potential.
///
/// The closed form is cross-checked against the potential's dual value, and
/// the potential is verified to satisfy `f(s) - f(t) <= d(s, t)` on the
/// supports of `m_x` and `m_y`, which is all weak duality needs.
pub fn witness_upper_bound<S: Scalar>(
    g: &Graph,
    p: &CommunityPartition,
    edge: Edge,
    alpha: Alpha,
    tol: Tolerance,
) -> Result<WitnessBound<S>> {
    witness_upper_bound_cached(&DistanceCache::new(g), p, edge, alpha, tol)
}

pub fn witness_upper_bound_cached<S: Scalar>(
    cache: &DistanceCache<'_>,
    p: &CommunityPartition,
    edge: Edge,
    alpha: Alpha,
    tol: Tolerance,
) -> Result<WitnessBound<S>> {
    let g = cache.graph();
    let partition = build_partition(g, p, edge)?;
    let c = |r| S::from_int(partition.count(r) as i64);
    let int = |v: usize| S::from_int(v as i64);
    let x_part =
        (int(partition.n) - S::one() + c(Region::A) + c(Region::J) + c(Region::G) + c(Region::H))
            / int(partition.dx);
    let y_part = (int(partition.m) - S::one() + c(Region::F)) / int(partition.dy);
    let w_lower = alpha.value::<S>() + alpha.complement::<S>() * (x_part + y_part - S::one());

    let potential = partition.potential::<S>();
    let mx = lazy_measure::<S>(g, edge.0, alpha, tol)?;
    let my = lazy_measure::<S>(g, edge.1, alpha, tol)?;
    let dual = dual_value(&potential, &mx, &my)?;
    if !tol.eq(&dual, &w_lower) {
        return Err(Error::InternalContradiction(format!(
            "dual value {dual} of the region potential differs from the closed form {w_lower}"
        )));
    }
    verify_transport_certificate(cache, &potential, &mx, &my, tol).map_err(|v| {
        Error::InternalContradiction(format!("region potential is not a certificate at {v}"))
    })?;
    let lipschitz = verify_lipschitz(g, &potential, tol);
    Ok(WitnessBound {
        kappa_upper: S::one() - w_lower.clone(),
        w_lower,
        potential,
        partition,
        lipschitz,
    })
}

/// The smaller of the two upper bounds obtained from `(x, y)` and `(y, x)`.
pub fn best_witness_upper_bound<S: Scalar>(
    cache: &DistanceCache<'_>,
    p: &CommunityPartition,
    (x, y): Edge,
    alpha: Alpha,
    tol: Tolerance,
) -> Result<WitnessBound<S>> {
    let forward = witness_upper_bound_cached::<S>(cache, p, (x, y), alpha, tol)?;
    let backward = witness_upper_bound_cached::<S>(cache, p, (y, x), alpha, tol)?;
    Ok(if backward.kappa_upper < forward.kappa_upper {
        backward
    } else {
        forward
    })
}

/// Witness bound next to the solver's curvature for the same edge.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessComparison<S> {
    pub bound: WitnessBound<S>,
    pub kappa: S,
}

impl<S: Scalar> WitnessComparison<S> {
    pub fn sandwich_holds(&self, tol: Tolerance) -> bool {
        tol.le(&self.kappa, &self.bound.kappa_upper)
    }
}

pub fn compare_with_solver<S: Scalar>(
    g: &Graph,
    p: &CommunityPartition,
    edge: Edge,
    alpha: Alpha,
    tol: Tolerance,
) -> Result<WitnessComparison<S>> {
    let cache = DistanceCache::new(g);
    let bound = witness_upper_bound_cached::<S>(&cache, p, edge, alpha, tol)?;
    let kappa = edge_curvature_cached::<S>(&cache, edge, alpha, tol)?.kappa;
    Ok(WitnessComparison { bound, kappa })
}

/// Potential proving `W(m_{a_0}, m_{b_0}) >= 1` on the zero-curvature
/// configuration: `a_{n-1}` 0, other `a_i` -1, `b_0..b_{n-2}` -2, `b_{n-1}` -3.
pub fn zero_config_potential<S: Scalar>(n: usize) -> Result<Potential<S>> {
    if n < 3 {
        return Err(Error::InvalidSize(format!(
            "zero-curvature configuration needs n >= 3, got {n}"
        )));
    }
    let value = |v: usize| match v {
        v if v == n - 1 => 0,
        v if v < n => -1,
        v if v == 2 * n - 1 => -3,
        _ => -2,
    };
    Ok((0..2 * n).map(|v| (v, S::from_int(value(v)))).collect())
}

fn matching_plan<S: Scalar>(n: usize, alpha: Alpha) -> Result<TransferencePlan<S>> {
    let beta_n = alpha.complement::<S>() / S::from_int(n as i64);
    let head = alpha.value::<S>() - beta_n.clone();
    if head < S::zero() {
        return Err(Error::PlanInfeasible(format!(
            "alpha = {alpha} is below (1 - alpha)/n for n = {n}"
        )));
    }
    let mut entries = vec![
        PlanEntry {
            source: 0,
            target: 0,
            mass: beta_n.clone(),
        },
        PlanEntry {
            source: 0,
            target: n,
            mass: head,
        },
    ];
    entries.extend((1..n).map(|i| PlanEntry {
        source: i,
        target: n + i,
        mass: beta_n.clone(),
    }));
    entries.push(PlanEntry {
        source: n,
        target: n,
        mass: beta_n,
    });
    entries.retain(|e| e.mass != S::zero());
    entries.sort_by_key(|e| (e.source, e.target));
    Ok(TransferencePlan { entries })
}

/// Plan from `m_{a_0}` to `m_{b_0}` on the zero-curvature configuration:
/// `a_i -> b_i`, plus the mass at `a_0` and `b_0` that both measures share
/// left in place. Its cost is exactly 1.
pub fn explicit_plan_zero_config<S: Scalar>(n: usize, alpha: Alpha) -> Result<TransferencePlan<S>> {
    if n < 3 {
        return Err(Error::InvalidSize(format!(
            "zero-curvature configuration needs n >= 3, got {n}"
        )));
    }
    matching_plan(n, alpha)
}

/// The same matching plan on the prism, where `a_{n-1} b_{n-1}` is an edge;
/// its cost is `1 - 2(1 - alpha)/n`.
pub fn explicit_plan_prism<S: Scalar>(n: usize, alpha: Alpha) -> Result<TransferencePlan<S>> {
    if n < 2 {
        return Err(Error::InvalidSize(format!("prism needs n >= 2, got {n}")));
    }
    matching_plan(n, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{
        dumbbell, prism, random_multi_community, random_two_community, zero_curvature_config,
        TwoCommunitySpec,
    };
    use crate::curvature::edge_curvature;
    use crate::graph::classify_edges;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn dumbbell_partition_and_bound() {
        for (m, n) in [(3, 3), (3, 5), (6, 4)] {
            let (g, p) = dumbbell(m, n).unwrap();
            let part = build_partition(&g, &p, (0, m)).unwrap();
            for r in [
                Region::B,
                Region::C,
                Region::D,
                Region::E,
                Region::G,
                Region::H,
                Region::I,
                Region::J,
                Region::K,
                Region::L,
                Region::M,
            ] {
                assert_eq!(part.count(r), 0, "{r}");
            }
            assert_eq!(part.members(Region::A), (1..m).collect::<Vec<_>>());
            assert_eq!(part.members(Region::F), (m + 1..m + n).collect::<Vec<_>>());
            let w = witness_upper_bound::<Q>(&g, &p, (0, m), Alpha::HALF, tol()).unwrap();
            let closed = q(1, m as i64) + q(1, n as i64) - q(1, 1);
            assert_eq!(w.kappa_upper, closed);
            assert!(w.lipschitz.is_ok());
            let kappa = edge_curvature::<Q>(&g, (0, m), Alpha::HALF).unwrap().kappa;
            assert_eq!(kappa, w.kappa_upper);
        }
    }

    #[test]
    fn zero_config_partition() {
        let n = 5;
        let (g, p) = zero_curvature_config(n).unwrap();
        let part = build_partition(&g, &p, (0, n)).unwrap();
        assert_eq!(part.count(Region::B), 0);
        assert_eq!(part.count(Region::D), 0);
        assert_eq!(part.members(Region::C), vec![1, 2, 3]);
        assert_eq!(part.members(Region::E), vec![6, 7, 8]);
        assert_eq!(part.members(Region::A), vec![4]);
        assert_eq!(part.members(Region::F), vec![9]);
        let w = witness_upper_bound::<Q>(&g, &p, (0, n), Alpha::HALF, tol()).unwrap();
        assert_eq!(w.w_lower, q(1, 1));
        assert_eq!(w.kappa_upper, q(0, 1));
    }

    #[test]
    fn zero_config_potential_reaches_one() {
        for n in 3..9 {
            let (g, _) = zero_curvature_config(n).unwrap();
            let f = zero_config_potential::<Q>(n).unwrap();
            assert!(verify_lipschitz(&g, &f, tol()).is_ok());
            for alpha in [Alpha::HALF, Alpha::new(1, 3).unwrap(), Alpha::ZERO] {
                let mx = lazy_measure::<Q>(&g, 0, alpha, tol()).unwrap();
                let my = lazy_measure::<Q>(&g, n, alpha, tol()).unwrap();
                assert_eq!(dual_value(&f, &mx, &my).unwrap(), q(1, 1));
            }
        }
    }

    #[test]
    fn explicit_plans() {
        let plan = explicit_plan_zero_config::<Q>(4, Alpha::HALF).unwrap();
        let (g, _) = zero_curvature_config(4).unwrap();
        let cache = DistanceCache::new(&g);
        assert_eq!(
            plan.entries
                .iter()
                .find(|e| (e.source, e.target) == (0, 4))
                .unwrap()
                .mass,
            q(3, 8)
        );
        assert_eq!(
            plan.entries
                .iter()
                .find(|e| (e.source, e.target) == (4, 4))
                .unwrap()
                .mass,
            q(1, 8)
        );
        assert_eq!(plan.cost(&cache).unwrap(), q(1, 1));
        let mx = lazy_measure::<Q>(&g, 0, Alpha::HALF, tol()).unwrap();
        let my = lazy_measure::<Q>(&g, 4, Alpha::HALF, tol()).unwrap();
        plan.check_marginals(&mx, &my, tol()).unwrap();

        let (g, _) = prism(4).unwrap();
        let cache = DistanceCache::new(&g);
        let plan = explicit_plan_prism::<Q>(4, Alpha::HALF).unwrap();
        assert_eq!(plan.cost(&cache).unwrap(), q(3, 4));
        let mx = lazy_measure::<Q>(&g, 0, Alpha::HALF, tol()).unwrap();
        let my = lazy_measure::<Q>(&g, 4, Alpha::HALF, tol()).unwrap();
        plan.check_marginals(&mx, &my, tol()).unwrap();
        let solver = edge_curvature::<Q>(&g, (0, 4), Alpha::HALF)
            .unwrap()
            .solution
            .value;
        assert!(plan.cost(&cache).unwrap() >= solver);
    }

    #[test]
    fn plans_reject_small_alpha() {
        let err = explicit_plan_zero_config::<Q>(4, Alpha::new(1, 10).unwrap()).unwrap_err();
        assert_eq!(err.code(), "PLAN_INFEASIBLE");
        assert!(explicit_plan_prism::<Q>(4, Alpha::new(1, 5).unwrap()).is_ok());
        assert_eq!(
            explicit_plan_zero_config::<Q>(2, Alpha::HALF)
                .unwrap_err()
                .code(),
            "INVALID_SIZE"
        );
    }

    #[test]
    fn rejects_intra_edges_and_incomplete_blocks() {
        let (g, p) = dumbbell(3, 3).unwrap();
        assert_eq!(
            build_partition(&g, &p, (0, 1)).unwrap_err().code(),
            "INVALID_PARTITION"
        );
        let path = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let labels = CommunityPartition::new(vec![0, 0, 1, 1]).unwrap();
        assert!(build_partition(&path, &labels, (1, 2)).is_ok());
        let labels = CommunityPartition::new(vec![0, 0, 0, 1]).unwrap();
        assert_eq!(
            build_partition(&path, &labels, (2, 3)).unwrap_err().code(),
            "INTERNAL_CONTRADICTION"
        );
    }

    #[test]
    fn two_community_instances_are_sandwiched() {
        for seed in 0..40 {
            let spec = TwoCommunitySpec {
                m: 3 + seed as usize % 4,
                n: 4 + seed as usize % 3,
                k: 1 + seed as usize % 7,
                seed,
            };
            let (g, p) = random_two_community(spec).unwrap();
            for e in classify_edges(&g, &p).unwrap().inter {
                let cmp = compare_with_solver::<Q>(&g, &p, e, Alpha::HALF, tol()).unwrap();
                assert!(cmp.sandwich_holds(tol()));
                assert!(cmp.bound.lipschitz.is_ok());
                for r in [
                    Region::G,
                    Region::H,
                    Region::I,
                    Region::J,
                    Region::K,
                    Region::L,
                    Region::M,
                ] {
                    assert_eq!(cmp.bound.partition.count(r), 0);
                }
            }
        }
    }

    #[test]
    fn three_community_instances_are_sandwiched() {
        for seed in 0..30 {
            let (g, p) = random_multi_community(&[3, 4, 3], 6, seed).unwrap();
            for e in classify_edges(&g, &p).unwrap().inter {
                let cmp = compare_with_solver::<Q>(&g, &p, e, Alpha::HALF, tol()).unwrap();
                assert!(cmp.sandwich_holds(tol()), "seed {seed} edge {e:?}");
            }
        }
    }
}
