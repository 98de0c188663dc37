//! Fast exact checks of the closed-form curvature results.

use std::time::{Duration, Instant};

use num_rational::BigRational;

use crate::constructions::{complete_community, dumbbell, prism, zero_curvature_config};
use crate::curvature::{all_curvatures, edge_curvature, Alpha};
use crate::error::Result;
use crate::graph::{classify_edges, CommunityPartition, EdgeKind, Graph};
use crate::scalar::{Scalar, Tolerance};

type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::from_ratio(n, d)
}

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub id: u32,
    pub name: &'static str,
    /// `None` on success, otherwise the first failure.
    pub failure: Option<String>,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.elapsed <= self.budget
    }

    /// `PASS`/`FAIL` line used by the CLI and the acceptance suite.
    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut line = format!(
            "{status} [{}] {} ({:.3}s)",
            self.id,
            self.name,
            self.elapsed.as_secs_f64()
        );
        if let Some(f) = &self.failure {
            line.push_str(": ");
            line.push_str(f);
        } else if self.elapsed > self.budget {
            line.push_str(&format!(
                ": over budget of {:.0}s",
                self.budget.as_secs_f64()
            ));
        }
        line
    }
}

/// Runs `check`, timing it against `budget`.
pub fn run_check(
    id: u32,
    name: &'static str,
    budget: Duration,
    check: impl FnOnce() -> Result<Option<String>>,
) -> CheckOutcome {
    let start = Instant::now();
    let failure = match check() {
        Ok(f) => f,
        Err(e) => Some(format!("{} ({})", e, e.code())),
    };
    CheckOutcome {
        id,
        name,
        failure,
        elapsed: start.elapsed(),
        budget,
    }
}

/// `kappa = n (1 - alpha) / (n - 1)` on every edge of `K_n`, `n` in 3..=8.
pub fn complete_graphs() -> Result<Option<String>> {
    for alpha in [Alpha::HALF, Alpha::new(2, 3)?] {
        for n in 3..=8i64 {
            let g = complete_community(n as usize)?;
            let expected = q(n, n - 1) * alpha.complement::<Q>();
            let report = all_curvatures::<Q>(
                &g,
                &CommunityPartition::single(n as usize),
                alpha,
                Tolerance::default(),
            )?;
            for r in report.records {
                let kappa = r.outcome?.kappa;
                if kappa != expected {
                    return Ok(Some(format!(
                        "K_{n}, alpha {alpha}, edge {:?}: {kappa} != {expected}",
                        r.edge
                    )));
                }
            }
        }
    }
    Ok(None)
}

/// Bridge curvature `2 (1 - alpha)(1/m + 1/n - 1)` for `m, n` in 3..=8.
pub fn dumbbells() -> Result<Option<String>> {
    let alpha = Alpha::HALF;
    for m in 3..=8i64 {
        for n in 3..=8i64 {
            let (g, _) = dumbbell(m as usize, n as usize)?;
            let expected = q(2, 1) * alpha.complement::<Q>() * (q(1, m) + q(1, n) - q(1, 1));
            let kappa = edge_curvature::<Q>(&g, (0, m as usize), alpha)?.kappa;
            if kappa != expected {
                return Ok(Some(format!("dumbbell({m}, {n}): {kappa} != {expected}")));
            }
        }
    }
    Ok(None)
}

/// Every edge of `C_n`, `n` in 6..=10, is flat.
pub fn cycles() -> Result<Option<String>> {
    for n in 6..=10 {
        let g = Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))?;
        let report = all_curvatures::<Q>(
            &g,
            &CommunityPartition::single(n),
            Alpha::HALF,
            Tolerance::default(),
        )?;
        for r in report.records {
            let kappa = r.outcome?.kappa;
            if kappa != q(0, 1) {
                return Ok(Some(format!("C_{n}, edge {:?}: {kappa} != 0", r.edge)));
            }
        }
    }
    Ok(None)
}

/// All `n - 1` intercommunity edges of the zero-curvature configuration are
/// exactly flat, `n` in 3..=12.
pub fn zero_configurations() -> Result<Option<String>> {
    for n in 3..=12 {
        let (g, p) = zero_curvature_config(n)?;
        let inter = classify_edges(&g, &p)?.inter;
        if inter.len() != n - 1 {
            return Ok(Some(format!(
                "n = {n}: {} intercommunity edges",
                inter.len()
            )));
        }
        for e in inter {
            let kappa = edge_curvature::<Q>(&g, e, Alpha::HALF)?.kappa;
            if kappa != q(0, 1) {
                return Ok(Some(format!("n = {n}, edge {e:?}: {kappa} != 0")));
            }
        }
    }
    Ok(None)
}

/// Every matching edge of the prism has `kappa >= 2 (1 - alpha) / n > 0`,
/// `n` in 3..=12.
pub fn prisms() -> Result<Option<String>> {
    let alpha = Alpha::HALF;
    for n in 3..=12 {
        let (g, p) = prism(n)?;
        let floor = q(2, n as i64) * alpha.complement::<Q>();
        let report = all_curvatures::<Q>(&g, &p, alpha, Tolerance::default())?;
        for r in report
            .records
            .into_iter()
            .filter(|r| r.kind == EdgeKind::Inter)
        {
            let kappa = r.outcome?.kappa;
            if kappa < floor {
                return Ok(Some(format!(
                    "n = {n}, edge {:?}: {kappa} < {floor}",
                    r.edge
                )));
            }
        }
    }
    Ok(None)
}

/// The fast checks with their time budgets.
pub fn run_fast_checks() -> Vec<CheckOutcome> {
    let s = Duration::from_secs;
    vec![
        run_check(
            1,
            "complete graphs match n(1-alpha)/(n-1)",
            s(1),
            complete_graphs,
        ),
        run_check(
            2,
            "dumbbell bridges match 2(1-alpha)(1/m+1/n-1)",
            s(1),
            dumbbells,
        ),
        run_check(3, "cycles C6..C10 are flat", s(1), cycles),
        run_check(
            4,
            "zero-curvature configurations are exactly flat",
            s(5),
            zero_configurations,
        ),
        run_check(5, "prism edges have kappa >= 2(1-alpha)/n", s(5), prisms),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_checks_pass() {
        for outcome in run_fast_checks() {
            assert!(outcome.failure.is_none(), "{}", outcome.line());
        }
    }

    #[test]
    fn failure_line_format() {
        let o = run_check(9, "demo", Duration::from_secs(1), || {
            Ok(Some("boom".into()))
        });
        assert!(o.line().starts_with("FAIL [9] demo"));
        assert!(o.line().ends_with(": boom"));
    }
}
