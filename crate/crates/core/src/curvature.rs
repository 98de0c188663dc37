//! Lazy random walks and Ollivier-Ricci curvature of edges.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{classify_edges, CommunityPartition, DistanceCache, Edge, EdgeKind, Graph};
use crate::scalar::{parse_fraction, Scalar, Tolerance};
use crate::transport::{w1_cached, DiscreteMeasure, TransportSolution};

/// Laziness parameter, an exact fraction in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alpha {
    num: u64,
    den: u64,
}

impl Alpha {
    pub const HALF: Alpha = Alpha { num: 1, den: 2 };
    pub const ONE: Alpha = Alpha { num: 1, den: 1 };
    pub const ZERO: Alpha = Alpha { num: 0, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::InvalidAlpha(format!("{num}/{den} is not in [0, 1]")));
        }
        let g = num_integer::gcd(num, den);
        Ok(Alpha {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    pub fn value<S: Scalar>(&self) -> S {
        S::from_ratio(self.num as i64, self.den as i64)
    }

    /// `1 - alpha`.
    pub fn complement<S: Scalar>(&self) -> S {
        S::from_ratio((self.den - self.num) as i64, self.den as i64)
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }
}

impl Default for Alpha {
    fn default() -> Self {
        Alpha::HALF
    }
}

impl FromStr for Alpha {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let r =
            parse_fraction(s).ok_or_else(|| Error::InvalidAlpha(format!("cannot parse `{s}`")))?;
        if r.is_negative() || r > BigRational::one() {
            return Err(Error::InvalidAlpha(format!("{s} is not in [0, 1]")));
        }
        let num = r.numer().to_u64();
        let den = r.denom().to_u64();
        match (num, den) {
            (Some(n), Some(d)) if !r.denom().is_zero() && d <= i64::MAX as u64 => Alpha::new(n, d),
            _ => Err(Error::InvalidAlpha(format!("{s} has too many digits"))),
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// `m_x`: mass `alpha` at `x`, `(1 - alpha) / deg(x)` on each neighbour.
pub fn lazy_measure<S: Scalar>(
    g: &Graph,
    x: usize,
    alpha: Alpha,
    tol: Tolerance,
) -> Result<DiscreteMeasure<S>> {
    if x >= g.vertex_count() {
        return Err(Error::InvalidMeasure(format!("vertex {x} out of range")));
    }
    if alpha == Alpha::ONE {
        return Ok(DiscreteMeasure::dirac(x));
    }
    let degree = g.degree(x);
    if degree == 0 {
        return Err(Error::IsolatedVertex(x));
    }
    let spread = alpha.complement::<S>() / S::from_int(degree as i64);
    let atoms = std::iter::once((x, alpha.value::<S>()))
        .chain(g.neighbors(x).iter().map(|&z| (z, spread.clone())));
    DiscreteMeasure::new(atoms, tol)
}

/// Curvature of one edge together with the transport problem behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeCurvature<S> {
    pub kappa: S,
    pub solution: TransportSolution<S>,
}

/// `kappa(x, y) = 1 - W1(m_x, m_y)`.
pub fn edge_curvature<S: Scalar>(g: &Graph, edge: Edge, alpha: Alpha) -> Result<EdgeCurvature<S>> {
    edge_curvature_cached(&DistanceCache::new(g), edge, alpha, Tolerance::default())
}

pub fn edge_curvature_cached<S: Scalar>(
    cache: &DistanceCache<'_>,
    (x, y): Edge,
    alpha: Alpha,
    tol: Tolerance,
) -> Result<EdgeCurvature<S>> {
    let g = cache.graph();
    if !g.has_edge(x, y) {
        return Err(Error::NotAnEdge(x, y));
    }
    let mx = lazy_measure::<S>(g, x, alpha, tol)?;
    let my = lazy_measure::<S>(g, y, alpha, tol)?;
    let solution = w1_cached(cache, &mx, &my, tol)?;
    Ok(EdgeCurvature {
        kappa: S::one() - solution.value.clone(),
        solution,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureValue<S> {
    pub kappa: S,
    pub w: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureRecord<S> {
    pub edge: Edge,
    pub kind: EdgeKind,
    pub dx: usize,
    pub dy: usize,
    pub outcome: Result<CurvatureValue<S>>,
}

/// Per-edge curvatures in canonical edge order.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport<S> {
    pub records: Vec<CurvatureRecord<S>>,
}

pub const CURVATURE_CSV_HEADER: &str =
    "edge_u,edge_v,class,kappa_num,kappa_den,kappa_float,w_float,dx,dy";

impl<S: Scalar> CurvatureReport<S> {
    /// Exact scalars fill the numerator/denominator columns only; float
    /// scalars fill the float columns only. Failed edges leave all four empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(CURVATURE_CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            let (u, v) = r.edge;
            let values = match &r.outcome {
                Ok(val) => match val.kappa.to_rational() {
                    Some(k) => format!("{},{},,", k.numer(), k.denom()),
                    None => format!(",,{},{}", val.kappa.to_f64(), val.w.to_f64()),
                },
                Err(_) => ",,,".to_string(),
            };
            writeln!(
                out,
                "{u},{v},{},{values},{},{}",
                r.kind.as_str(),
                r.dx,
                r.dy
            )
            .unwrap();
        }
        out
    }

    pub fn errors(&self) -> impl Iterator<Item = (&Edge, &Error)> + '_ {
        self.records
            .iter()
            .filter_map(|r| r.outcome.as_ref().err().map(|e| (&r.edge, e)))
    }
}

/// Curvature of every edge. Edges are evaluated in parallel; per-edge
/// failures are recorded in the report rather than aborting the batch.
pub fn all_curvatures<S: Scalar>(
    g: &Graph,
    p: &CommunityPartition,
    alpha: Alpha,
    tol: Tolerance,
) -> Result<CurvatureReport<S>> {
    let class = classify_edges(g, p)?;
    let cache = DistanceCache::new(g);
    let records = g
        .edges()
        .par_iter()
        .map(|&(u, v)| {
            let kind = if class.inter.binary_search(&(u, v)).is_ok() {
                EdgeKind::Inter
            } else {
                EdgeKind::Intra
            };
            let outcome =
                edge_curvature_cached::<S>(&cache, (u, v), alpha, tol).map(|ec| CurvatureValue {
                    w: ec.solution.value,
                    kappa: ec.kappa,
                });
            CurvatureRecord {
                edge: (u, v),
                kind,
                dx: g.degree(u),
                dy: g.degree(v),
                outcome,
            }
        })
        .collect();
    Ok(CurvatureReport { records })
}
