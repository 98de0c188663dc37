//! Exact 1-Wasserstein distance between discrete measures on a graph.
//!
//! [`w1`] solves the primal transportation problem with a transportation
//! simplex and turns the optimal simplex multipliers into a Kantorovich
//! potential, so every solution carries its own optimality certificate.

mod measure;
mod oracle;
mod simplex;

pub use measure::DiscreteMeasure;
pub use oracle::{w1_oracle, ORACLE_MAX_ATOMS};

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{DistanceCache, Graph};
use crate::scalar::{Scalar, Tolerance};

/// A real-valued function on a set of vertices.
pub type Potential<S> = BTreeMap<usize, S>;

#[derive(Debug, Clone, PartialEq)]
pub struct PlanEntry<S> {
    pub source: usize,
    pub target: usize,
    pub mass: S,
}

/// Coupling between two measures, listed by its non-zero entries.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TransferencePlan<S> {
    pub entries: Vec<PlanEntry<S>>,
}

impl<S: Scalar> TransferencePlan<S> {
    /// Total `mass * distance` over the plan's entries.
    pub fn cost(&self, cache: &DistanceCache<'_>) -> Result<S> {
        let mut total = S::zero();
        for e in &self.entries {
            let d = cache
                .distance(e.source, e.target)
                .ok_or(Error::InfiniteDistance {
                    from: e.source,
                    to: e.target,
                })?;
            total = total + e.mass.clone() * S::from_int(i64::from(d));
        }
        Ok(total)
    }

    /// Checks non-negativity and that the marginals are `mu` and `nu`.
    pub fn check_marginals(
        &self,
        mu: &DiscreteMeasure<S>,
        nu: &DiscreteMeasure<S>,
        tol: Tolerance,
    ) -> Result<()> {
        let mut rows: BTreeMap<usize, S> = BTreeMap::new();
        let mut cols: BTreeMap<usize, S> = BTreeMap::new();
        for e in &self.entries {
            if tol.sign(&e.mass) == std::cmp::Ordering::Less {
                return Err(Error::PlanInfeasible(format!(
                    "negative entry {} at ({}, {})",
                    e.mass, e.source, e.target
                )));
            }
            let r = rows.entry(e.source).or_insert_with(S::zero);
            *r = r.clone() + e.mass.clone();
            let c = cols.entry(e.target).or_insert_with(S::zero);
            *c = c.clone() + e.mass.clone();
        }
        let check = |side: &str, sums: &BTreeMap<usize, S>, m: &DiscreteMeasure<S>| -> Result<()> {
            let vertices: std::collections::BTreeSet<usize> = sums
                .keys()
                .copied()
                .chain(m.support().iter().copied())
                .collect();
            for v in vertices {
                let got = sums.get(&v).cloned().unwrap_or_else(S::zero);
                let want = m.mass_at(v);
                if !tol.eq(&got, &want) {
                    return Err(Error::PlanInfeasible(format!(
                        "{side} marginal at {v} is {got}, expected {want}"
                    )));
                }
            }
            Ok(())
        };
        check("row", &rows, mu)?;
        check("column", &cols, nu)
    }
}

/// Optimal transport between two measures, with its dual certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportSolution<S> {
    pub value: S,
    pub plan: TransferencePlan<S>,
    /// Kantorovich potential on the union of both supports, zero at the
    /// smallest vertex id of that union.
    pub potentials: Potential<S>,
    pub pivots: usize,
}

/// W1 between `mu` and `nu` on `g`, with default tolerance.
pub fn w1<S: Scalar>(
    g: &Graph,
    mu: &DiscreteMeasure<S>,
    nu: &DiscreteMeasure<S>,
) -> Result<TransportSolution<S>> {
    w1_cached(&DistanceCache::new(g), mu, nu, Tolerance::default())
}

/// W1 using memoized distance rows.
pub fn w1_cached<S: Scalar>(
    cache: &DistanceCache<'_>,
    mu: &DiscreteMeasure<S>,
    nu: &DiscreteMeasure<S>,
    tol: Tolerance,
) -> Result<TransportSolution<S>> {
    let n = cache.graph().vertex_count();
    if let Some(&v) = mu.support().iter().chain(nu.support()).find(|&&v| v >= n) {
        return Err(Error::InvalidMeasure(format!("vertex {v} out of range")));
    }
    if mu.is_empty() || nu.is_empty() || !tol.eq(&mu.total(), &nu.total()) {
        return Err(Error::InvalidMeasure(
            "measures have different total mass".into(),
        ));
    }

    let (rows, cols) = (mu.support(), nu.support());
    let from_rows = rows.len() <= cols.len();
    let mut cost = vec![0i64; rows.len() * cols.len()];
    if from_rows {
        for (i, &x) in rows.iter().enumerate() {
            let dist = cache.row(x);
            for (j, &y) in cols.iter().enumerate() {
                let d = dist[y].ok_or(Error::InfiniteDistance { from: x, to: y })?;
                cost[i * cols.len() + j] = i64::from(d);
            }
        }
    } else {
        for (j, &y) in cols.iter().enumerate() {
            let dist = cache.row(y);
            for (i, &x) in rows.iter().enumerate() {
                let d = dist[x].ok_or(Error::InfiniteDistance { from: x, to: y })?;
                cost[i * cols.len() + j] = i64::from(d);
            }
        }
    }

    // Atoms with identical cost profiles are interchangeable: solve on the
    // merged problem, then split each flow back across the members.
    let width = cols.len();
    let row_groups = Groups::new(rows.len(), |i| &cost[i * width..(i + 1) * width]);
    let col_costs: Vec<i64> = (0..width)
        .flat_map(|j| (0..rows.len()).map(move |i| (i, j)))
        .map(|(i, j)| cost[i * width + j])
        .collect();
    let col_groups = Groups::new(width, |j| &col_costs[j * rows.len()..(j + 1) * rows.len()]);
    let supply = row_groups.merge(mu.masses());
    let demand = col_groups.merge(nu.masses());
    let mut reduced = Vec::with_capacity(supply.len() * demand.len());
    for &i in &row_groups.reps {
        reduced.extend(col_groups.reps.iter().map(|&j| cost[i * width + j]));
    }
    let basis = simplex::solve(&supply, &demand, &reduced);

    let mut value = S::zero();
    let mut entries = Vec::new();
    for (gi, gj, flow) in basis.cells {
        if tol.sign(&flow) != std::cmp::Ordering::Greater {
            continue;
        }
        value = value + flow.clone() * S::from_int(reduced[gi * demand.len() + gj]);
        let sources = row_groups.shares(gi, &flow, mu.masses(), &supply[gi]);
        let targets = col_groups.shares(gj, &flow, nu.masses(), &demand[gj]);
        for (i, j, mass) in northwest_corner(sources, targets, tol) {
            entries.push(PlanEntry {
                source: rows[i],
                target: cols[j],
                mass,
            });
        }
    }
    entries.sort_by_key(|e| (e.source, e.target));

    let u: Vec<i64> = row_groups.group_of.iter().map(|&g| basis.u[g]).collect();
    let v: Vec<i64> = col_groups.group_of.iter().map(|&g| basis.v[g]).collect();
    let potentials = kantorovich_potential(cache, rows, cols, &u, &v, from_rows);
    Ok(TransportSolution {
        value,
        plan: TransferencePlan { entries },
        potentials,
        pivots: basis.pivots,
    })
}

/// Lines of a cost matrix grouped by identical content, in order of first
/// appearance.
struct Groups {
    reps: Vec<usize>,
    group_of: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl Groups {
    fn new<'a>(lines: usize, line: impl Fn(usize) -> &'a [i64]) -> Self {
        let mut index: HashMap<&[i64], usize> = HashMap::new();
        let mut groups = Groups {
            reps: Vec::new(),
            group_of: Vec::with_capacity(lines),
            members: Vec::new(),
        };
        for l in 0..lines {
            let next = groups.reps.len();
            let g = *index.entry(line(l)).or_insert(next);
            if g == next {
                groups.reps.push(l);
                groups.members.push(Vec::new());
            }
            groups.group_of.push(g);
            groups.members[g].push(l);
        }
        groups
    }

    fn merge<S: Scalar>(&self, masses: &[S]) -> Vec<S> {
        self.members
            .iter()
            .map(|m| m.iter().fold(S::zero(), |acc, &l| acc + masses[l].clone()))
            .collect()
    }

    /// Splits `flow` out of group `g` in proportion to its members' masses.
    fn shares<S: Scalar>(&self, g: usize, flow: &S, masses: &[S], total: &S) -> Vec<(usize, S)> {
        match self.members[g].as_slice() {
            [only] => vec![(*only, flow.clone())],
            members => members
                .iter()
                .map(|&l| (l, flow.clone() * masses[l].clone() / total.clone()))
                .collect(),
        }
    }
}

/// Sparse coupling of two equal-mass lists by the north-west corner rule.
fn northwest_corner<S: Scalar>(
    sources: Vec<(usize, S)>,
    targets: Vec<(usize, S)>,
    tol: Tolerance,
) -> Vec<(usize, usize, S)> {
    let mut out = Vec::new();
    let (mut a, mut b) = (sources.into_iter(), targets.into_iter());
    let (mut src, mut dst) = (a.next(), b.next());
    while let (Some((i, left)), Some((j, right))) = (src.as_mut(), dst.as_mut()) {
        let take = if *left <= *right {
            left.clone()
        } else {
            right.clone()
        };
        if tol.sign(&take) == std::cmp::Ordering::Greater {
            out.push((*i, *j, take.clone()));
        }
        *left = left.clone() - take.clone();
        *right = right.clone() - take;
        if tol.is_zero(left) {
            src = a.next();
        } else {
            dst = b.next();
        }
    }
    out
}

/// Turns simplex multipliers (`u_i + v_j <= d(x_i, y_j)`) into a 1-Lipschitz
/// potential on the union of supports by a c-transform.
///
/// With rows known: `f(z) = max_i (u_i - d(x_i, z))`; with columns known:
/// `f(z) = min_j (d(z, y_j) - v_j)`. Either satisfies `f(x_i) >= u_i` and
/// `-f(y_j) >= v_j`, so its dual value is at least the primal optimum.
fn kantorovich_potential<S: Scalar>(
    cache: &DistanceCache<'_>,
    rows: &[usize],
    cols: &[usize],
    u: &[i64],
    v: &[i64],
    from_rows: bool,
) -> Potential<S> {
    let mut union: Vec<usize> = rows.iter().chain(cols).copied().collect();
    union.sort_unstable();
    union.dedup();

    let mut values: Vec<i64> = Vec::with_capacity(union.len());
    if from_rows {
        let dists: Vec<_> = rows.iter().map(|&x| cache.row(x)).collect();
        for &z in &union {
            let best = dists
                .iter()
                .zip(u)
                .filter_map(|(d, &ui)| d[z].map(|dz| ui - i64::from(dz)))
                .max()
                .expect("support vertices are mutually reachable");
            values.push(best);
        }
    } else {
        let dists: Vec<_> = cols.iter().map(|&y| cache.row(y)).collect();
        for &z in &union {
            let best = dists
                .iter()
                .zip(v)
                .filter_map(|(d, &vj)| d[z].map(|dz| i64::from(dz) - vj))
                .min()
                .expect("support vertices are mutually reachable");
            values.push(best);
        }
    }
    let shift = values[0];
    union
        .into_iter()
        .zip(values)
        .map(|(z, f)| (z, S::from_int(f - shift)))
        .collect()
}

/// `sum_z f(z) (mu(z) - nu(z))`.
pub fn dual_value<S: Scalar>(
    f: &Potential<S>,
    mu: &DiscreteMeasure<S>,
    nu: &DiscreteMeasure<S>,
) -> Result<S> {
    let mut total = S::zero();
    for (z, m) in mu.iter() {
        total = total + f.get(&z).ok_or(Error::Domain(z))?.clone() * m.clone();
    }
    for (z, m) in nu.iter() {
        total = total - f.get(&z).ok_or(Error::Domain(z))?.clone() * m.clone();
    }
    Ok(total)
}

/// First pair on which a potential fails its Lipschitz condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LipschitzViolation {
    pub u: usize,
    pub v: usize,
    pub detail: String,
}

impl fmt::Display for LipschitzViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}): {}", self.u, self.v, self.detail)
    }
}

/// Checks `|f(u) - f(v)| <= 1` on every edge with both ends in `f`'s domain.
pub fn verify_lipschitz<S: Scalar>(
    g: &Graph,
    f: &Potential<S>,
    tol: Tolerance,
) -> Result<(), LipschitzViolation> {
    let one = S::one();
    for &(u, v) in g.edges() {
        let (Some(fu), Some(fv)) = (f.get(&u), f.get(&v)) else {
            continue;
        };
        let diff = fu.clone() - fv.clone();
        if !tol.le(&diff, &one) || !tol.le(&-diff.clone(), &one) {
            return Err(LipschitzViolation {
                u,
                v,
                detail: format!("f(u) - f(v) = {diff}"),
            });
        }
    }
    Ok(())
}

/// Checks `f(s) - f(t) <= d(s, t)` for every `s` in `supp(mu)` and `t` in
/// `supp(nu)`. This is exactly what weak duality needs for
/// `dual_value(f, mu, nu) <= W1(mu, nu)`.
pub fn verify_transport_certificate<S: Scalar>(
    cache: &DistanceCache<'_>,
    f: &Potential<S>,
    mu: &DiscreteMeasure<S>,
    nu: &DiscreteMeasure<S>,
    tol: Tolerance,
) -> Result<(), LipschitzViolation> {
    for &s in mu.support() {
        let dist = cache.row(s);
        let fs = f.get(&s).ok_or(LipschitzViolation {
            u: s,
            v: s,
            detail: "not in domain".into(),
        })?;
        for &t in nu.support() {
            let ft = f.get(&t).ok_or(LipschitzViolation {
                u: t,
                v: t,
                detail: "not in domain".into(),
            })?;
            let diff = fs.clone() - ft.clone();
            let ok = match dist[t] {
                Some(d) => tol.le(&diff, &S::from_int(i64::from(d))),
                None => true,
            };
            if !ok {
                return Err(LipschitzViolation {
                    u: s,
                    v: t,
                    detail: format!("f(s) - f(t) = {diff} exceeds d = {}", dist[t].unwrap_or(0)),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn measure(atoms: &[(usize, Q)]) -> DiscreteMeasure<Q> {
        DiscreteMeasure::new(atoms.iter().cloned(), Tolerance::default()).unwrap()
    }

    #[test]
    fn identical_measures_cost_nothing() {
        let g = path(4);
        let mu = measure(&[(0, q(1, 3)), (2, q(2, 3))]);
        let sol = w1(&g, &mu, &mu).unwrap();
        assert_eq!(sol.value, q(0, 1));
        assert_eq!(
            sol.plan.entries,
            vec![
                PlanEntry {
                    source: 0,
                    target: 0,
                    mass: q(1, 3)
                },
                PlanEntry {
                    source: 2,
                    target: 2,
                    mass: q(2, 3)
                }
            ]
        );
    }

    #[test]
    fn adjacent_diracs_are_one_apart() {
        let g = path(2);
        let sol = w1(
            &g,
            &DiscreteMeasure::<Q>::dirac(0),
            &DiscreteMeasure::dirac(1),
        )
        .unwrap();
        assert_eq!(sol.value, q(1, 1));
        assert_eq!(sol.potentials.get(&0), Some(&q(0, 1)));
        assert_eq!(sol.potentials.get(&1), Some(&q(-1, 1)));
    }

    #[test]
    fn potentials_close_the_duality_gap() {
        let g = path(5);
        let mu = measure(&[(0, q(1, 2)), (1, q(1, 4)), (4, q(1, 4))]);
        let nu = measure(&[(2, q(1, 3)), (3, q(2, 3))]);
        let sol = w1(&g, &mu, &nu).unwrap();
        assert_eq!(dual_value(&sol.potentials, &mu, &nu).unwrap(), sol.value);
        assert_eq!(sol.value, w1_oracle(&g, &mu, &nu).unwrap());
        assert!(verify_lipschitz(&g, &sol.potentials, Tolerance::default()).is_ok());
        sol.plan
            .check_marginals(&mu, &nu, Tolerance::default())
            .unwrap();
    }

    #[test]
    fn disconnected_supports_fail_loudly() {
        let g = Graph::new(3, [(0, 1)]).unwrap();
        let err = w1(
            &g,
            &DiscreteMeasure::<Q>::dirac(0),
            &DiscreteMeasure::dirac(2),
        )
        .unwrap_err();
        assert_eq!(err.code(), "INFINITE_DISTANCE");
    }

    #[test]
    fn dual_value_of_constant_is_zero() {
        let mu = measure(&[(0, q(1, 2)), (1, q(1, 2))]);
        let nu = measure(&[(2, q(1, 1))]);
        let f: Potential<Q> = [(0, q(5, 1)), (1, q(5, 1)), (2, q(5, 1))].into();
        assert_eq!(dual_value(&f, &mu, &nu).unwrap(), q(0, 1));
        let partial: Potential<Q> = [(0, q(0, 1))].into();
        assert_eq!(
            dual_value(&partial, &mu, &nu).unwrap_err(),
            Error::Domain(1)
        );
    }

    #[test]
    fn lipschitz_violation_names_the_edge() {
        let g = path(2);
        let zero: Potential<Q> = [(0, q(0, 1)), (1, q(0, 1))].into();
        assert!(verify_lipschitz(&g, &zero, Tolerance::default()).is_ok());
        let steep: Potential<Q> = [(0, q(0, 1)), (1, q(2, 1))].into();
        let v = verify_lipschitz(&g, &steep, Tolerance::default()).unwrap_err();
        assert_eq!((v.u, v.v), (0, 1));
    }

    #[test]
    fn oracle_limit() {
        let g = path(14);
        let atoms: Vec<(usize, Q)> = (0..13).map(|v| (v, q(1, 13))).collect();
        let mu = measure(&atoms);
        let err = w1_oracle(&g, &mu, &DiscreteMeasure::dirac(13)).unwrap_err();
        assert_eq!(err.code(), "ORACLE_LIMIT");
        assert_eq!(
            w1_oracle(
                &g,
                &DiscreteMeasure::<Q>::dirac(3),
                &DiscreteMeasure::dirac(3)
            )
            .unwrap(),
            q(0, 1)
        );
    }
}
