use crate::error::{Error, Result};
use crate::scalar::{Scalar, Tolerance};
use std::cmp::Ordering;

/// A probability measure with finite support on graph vertices.
///
/// The support is sorted, atoms carry strictly positive mass, and the masses
/// sum to one (exactly for rational scalars, within the tolerance for floats).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure<S> {
    support: Vec<usize>,
    mass: Vec<S>,
}

impl<S: Scalar> DiscreteMeasure<S> {
    /// Repeated vertices are merged; zero-mass atoms are dropped.
    pub fn new(atoms: impl IntoIterator<Item = (usize, S)>, tol: Tolerance) -> Result<Self> {
        let mut atoms: Vec<(usize, S)> = atoms.into_iter().collect();
        atoms.sort_by_key(|(v, _)| *v);
        let mut support: Vec<usize> = Vec::with_capacity(atoms.len());
        let mut mass: Vec<S> = Vec::with_capacity(atoms.len());
        for (v, m) in atoms {
            if support.last() == Some(&v) {
                let last = mass.pop().expect("parallel vectors");
                mass.push(last + m);
            } else {
                support.push(v);
                mass.push(m);
            }
        }
        let mut total = S::zero();
        let (mut kept_support, mut kept_mass) = (Vec::new(), Vec::new());
        for (v, m) in support.into_iter().zip(mass) {
            match tol.sign(&m) {
                Ordering::Less => {
                    return Err(Error::InvalidMeasure(format!(
                        "negative mass {m} at vertex {v}"
                    )))
                }
                Ordering::Equal => {}
                Ordering::Greater => {
                    total = total + m.clone();
                    kept_support.push(v);
                    kept_mass.push(m);
                }
            }
        }
        if !tol.eq(&total, &S::one()) {
            return Err(Error::InvalidMeasure(format!(
                "total mass {total} is not 1"
            )));
        }
        Ok(DiscreteMeasure {
            support: kept_support,
            mass: kept_mass,
        })
    }

    pub fn dirac(v: usize) -> Self {
        DiscreteMeasure {
            support: vec![v],
            mass: vec![S::one()],
        }
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn masses(&self) -> &[S] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &S)> + '_ {
        self.support.iter().copied().zip(self.mass.iter())
    }

    /// Mass at `v`, zero off the support.
    pub fn mass_at(&self, v: usize) -> S {
        match self.support.binary_search(&v) {
            Ok(i) => self.mass[i].clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn total(&self) -> S {
        self.mass.iter().fold(S::zero(), |acc, m| acc + m.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    #[test]
    fn merges_and_drops_zero_atoms() {
        let m = DiscreteMeasure::new(
            [(3, q(1, 4)), (1, q(1, 2)), (3, q(1, 4)), (7, q(0, 1))],
            Tolerance::default(),
        )
        .unwrap();
        assert_eq!(m.support(), &[1, 3]);
        assert_eq!(m.masses(), &[q(1, 2), q(1, 2)]);
        assert_eq!(m.mass_at(7), q(0, 1));
    }

    #[test]
    fn rejects_bad_totals_and_negative_mass() {
        let tol = Tolerance::default();
        assert!(DiscreteMeasure::new([(0, q(1, 2))], tol).is_err());
        assert!(DiscreteMeasure::new([(0, q(3, 2)), (1, q(-1, 2))], tol).is_err());
        assert!(DiscreteMeasure::new([(0, 0.5f64), (1, 0.5 + 1e-12)], tol).is_ok());
    }
}
