//! Multivariate polynomials over a generic coefficient ring, keyed by
//! exponent vectors. Used both directly (Landau-Ginzburg coefficients in the
//! t_m variables) and as the coefficient ring of a power series (symbolic
//! identity checks with fresh indeterminates).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::Ring;

/// Exponent vectors are stored with trailing zeros trimmed, so the constant
/// monomial is the empty vector and equality is syntactic.
#[derive(Debug, Clone, PartialEq)]
pub struct MPoly<T> {
    terms: BTreeMap<Vec<u32>, T>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl<T: Ring> MPoly<T> {
    pub fn new() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: T) -> Self {
        let mut p = Self::new();
        if !c.is_zero() {
            p.terms.insert(Vec::new(), c);
        }
        p
    }

    /// The variable x_i.
    pub fn var(i: usize) -> Self {
        let mut e = vec![0u32; i + 1];
        e[i] = 1;
        let mut p = Self::new();
        p.terms.insert(e, T::one());
        p
    }

    pub fn add_term(&mut self, expt: Vec<u32>, c: T) {
        if c.is_zero() {
            return;
        }
        let expt = trim(expt);
        let entry = self.terms.entry(expt).or_insert_with(T::zero);
        *entry = entry.clone() + c;
        // drop cancellations eagerly so zero coefficients are never stored
        self.terms.retain(|_, v| !v.is_zero());
    }

    pub fn coeff(&self, expt: &[u32]) -> T {
        let e = trim(expt.to_vec());
        self.terms.get(&e).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &T)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, s: &T) -> Self {
        if s.is_zero() {
            return Self::new();
        }
        let mut out = Self::new();
        for (e, c) in &self.terms {
            let v = c.clone() * s.clone();
            if !v.is_zero() {
                out.terms.insert(e.clone(), v);
            }
        }
        out
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Drop monomials of total degree above `dmax`.
    pub fn truncate_degree(&self, dmax: u32) -> Self {
        let mut out = Self::new();
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() <= dmax {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    /// Product with truncation of total degree.
    pub fn mul_trunc(&self, other: &Self, dmax: u32) -> Self {
        let mut out = Self::new();
        for (ea, ca) in &self.terms {
            let da: u32 = ea.iter().sum();
            if da > dmax {
                continue;
            }
            for (eb, cb) in &other.terms {
                let db: u32 = eb.iter().sum();
                if da + db > dmax {
                    continue;
                }
                let mut e = vec![0u32; ea.len().max(eb.len())];
                for (i, v) in ea.iter().enumerate() {
                    e[i] += v;
                }
                for (i, v) in eb.iter().enumerate() {
                    e[i] += v;
                }
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Partial derivative with respect to x_i.
    pub fn partial(&self, i: usize) -> Self
    where
        T: crate::Field,
    {
        let mut out = Self::new();
        for (e, c) in &self.terms {
            let k = e.get(i).copied().unwrap_or(0);
            if k == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, c.clone() * T::from_i64(k as i64).unwrap());
        }
        out
    }

    /// Substitute numeric values for all variables.
    pub fn eval(&self, values: &[T]) -> T {
        let mut acc = T::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = term * values[i].clone();
                }
            }
            acc = acc + term;
        }
        acc
    }
}

impl<T: Ring> Default for MPoly<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Ring> Zero for MPoly<T> {
    fn zero() -> Self {
        Self::new()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<T: Ring> One for MPoly<T> {
    fn one() -> Self {
        Self::constant(T::one())
    }
}

impl<T: Ring> Add for MPoly<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for (e, c) in rhs.terms {
            out.add_term(e, c);
        }
        out
    }
}

impl<T: Ring> Sub for MPoly<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Ring> Neg for MPoly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        let mut out = Self::new();
        for (e, c) in self.terms {
            out.terms.insert(e, -c);
        }
        out
    }
}

impl<T: Ring> Mul for MPoly<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_trunc(&rhs, u32::MAX)
    }
}

impl<T: Ring + fmt::Display> fmt::Display for MPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &k) in e.iter().enumerate() {
                if k == 1 {
                    write!(f, "*x{i}")?;
                } else if k > 1 {
                    write!(f, "*x{i}^{k}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat_int;
    use crate::Rat;

    #[test]
    fn ring_ops() {
        let x = MPoly::<Rat>::var(0);
        let y = MPoly::<Rat>::var(1);
        let p = (x.clone() + y.clone()) * (x.clone() - y.clone());
        assert_eq!(p.coeff(&[2, 0]), rat_int(1));
        assert_eq!(p.coeff(&[0, 2]), rat_int(-1));
        assert_eq!(p.coeff(&[1, 1]), rat_int(0));
        assert_eq!(p.total_degree(), 2);
    }

    #[test]
    fn cancellation_is_not_stored() {
        let x = MPoly::<Rat>::var(0);
        let z = x.clone() - x.clone();
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
    }

    #[test]
    fn eval_matches_structure() {
        let x = MPoly::<Rat>::var(0);
        let y = MPoly::<Rat>::var(1);
        let p = x.clone() * x.clone() + y.scale(&rat_int(3));
        let v = p.eval(&[rat_int(2), rat_int(5)]);
        assert_eq!(v, rat_int(19));
    }

    #[test]
    fn works_inside_power_series() {
        use crate::series::PowerSeries;
        // (1 + a x)^2 = 1 + 2a x + a^2 x^2 with a an indeterminate
        let a = MPoly::<Rat>::var(0);
        let f =
            PowerSeries::from_coeffs(vec![MPoly::one(), a.clone(), MPoly::zero(), MPoly::zero()]);
        let sq = f.mul(&f);
        assert_eq!(sq.coeff(1), &a.scale(&rat_int(2)));
        assert_eq!(sq.coeff(2), &(a.clone() * a));
    }
}
