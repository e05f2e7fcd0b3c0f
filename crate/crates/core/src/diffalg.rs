//! Commutative differential-polynomial algebra over the rationals in an
//! indexed family of generators, with a formal derivation D, weight grading,
//! substitution, and coefficient extraction.
//!
//! Three generator families appear in the pipeline: W (the root coefficients
//! w_{-i}), G (the substituted residue variables), and Z (the output
//! variables z_m). All derivatives are counted in the operator D; the single
//! scalar conversion between D- and x-derivatives happens once, in `wrpoly`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::scalar::fmt_rat;
use crate::Rat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// w_{-i}, index i >= 1.
    W,
    /// The residue variable standing for Res(Q^{(m+1)/r}), index m in 0..r-1.
    G,
    /// Output variable z_m, index m in 0..r-1.
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub family: Family,
    pub index: u32,
    pub deriv_order: u32,
}

impl Generator {
    pub fn w(i: u32, deriv_order: u32) -> Self {
        assert!(i >= 1, "w index must be >= 1 (meaning w_{{-i}})");
        Generator {
            family: Family::W,
            index: i,
            deriv_order,
        }
    }

    pub fn g(m: u32, deriv_order: u32) -> Self {
        Generator {
            family: Family::G,
            index: m,
            deriv_order,
        }
    }

    pub fn z(m: u32, deriv_order: u32) -> Self {
        Generator {
            family: Family::Z,
            index: m,
            deriv_order,
        }
    }

    /// Grading that makes every step of the pipeline homogeneous:
    /// w_{-i}^{(j)} has weight i+j+1, G_m^{(j)} and z_m^{(j)} weight m+j+2.
    pub fn weight(&self) -> u64 {
        match self.family {
            Family::W => (self.index + self.deriv_order + 1) as u64,
            Family::G | Family::Z => (self.index + self.deriv_order + 2) as u64,
        }
    }

    fn derived(mut self) -> Self {
        self.deriv_order += 1;
        self
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::W => write!(f, "w[-{}]", self.index)?,
            Family::G => write!(f, "G[{}]", self.index)?,
            Family::Z => write!(f, "z[{}]", self.index)?,
        }
        if self.deriv_order > 0 {
            write!(f, "^({})", self.deriv_order)?;
        }
        Ok(())
    }
}

/// A multiset of generators, kept sorted so equality is syntactic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiffMonomial {
    factors: Vec<Generator>,
}

impl DiffMonomial {
    pub fn unit() -> Self {
        DiffMonomial {
            factors: Vec::new(),
        }
    }

    pub fn from_factors(mut factors: Vec<Generator>) -> Self {
        factors.sort();
        DiffMonomial { factors }
    }

    pub fn single(g: Generator) -> Self {
        DiffMonomial { factors: vec![g] }
    }

    pub fn factors(&self) -> &[Generator] {
        &self.factors
    }

    pub fn weight(&self) -> u64 {
        self.factors.iter().map(|g| g.weight()).sum()
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    pub fn total_deriv_order(&self) -> u64 {
        self.factors.iter().map(|g| g.deriv_order as u64).sum()
    }

    pub fn is_derivative_free(&self) -> bool {
        self.factors.iter().all(|g| g.deriv_order == 0)
    }

    fn mul(&self, other: &Self) -> Self {
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        factors.extend_from_slice(&self.factors);
        factors.extend_from_slice(&other.factors);
        factors.sort();
        DiffMonomial { factors }
    }
}

impl PartialOrd for DiffMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DiffMonomial {
    /// Weight first, then lexicographic on the sorted factors; this is the
    /// ordering used for deterministic rendering.
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl fmt::Display for DiffMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, g) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// Polynomial in the graded generators with rational coefficients. Zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiffPoly {
    terms: BTreeMap<DiffMonomial, Rat>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(DiffMonomial::unit(), c);
        p
    }

    pub fn generator(g: Generator) -> Self {
        let mut p = DiffPoly::zero();
        p.add_term(DiffMonomial::single(g), Rat::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DiffMonomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, m: DiffMonomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return DiffPoly::zero();
        }
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = DiffPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    /// The formal derivation D, extended by the Leibniz rule. The weight of
    /// every term rises by exactly one.
    pub fn derive(&self) -> Self {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for k in 0..m.factors.len() {
                let mut factors = m.factors.clone();
                factors[k] = factors[k].derived();
                out.add_term(DiffMonomial::from_factors(factors), c.clone());
            }
        }
        out
    }

    pub fn derive_n(&self, n: u32) -> Self {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.derive();
        }
        p
    }

    /// Replace every occurrence of the (deriv-order-0) generator at
    /// derivative order j by derive^j(replacement).
    pub fn substitute(&self, family: Family, index: u32, replacement: &Self) -> Self {
        let mut derived: Vec<DiffPoly> = vec![replacement.clone()];
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut rest = Vec::new();
            let mut matched: Vec<u32> = Vec::new();
            for g in &m.factors {
                if g.family == family && g.index == index {
                    matched.push(g.deriv_order);
                } else {
                    rest.push(*g);
                }
            }
            if matched.is_empty() {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            let mut acc = DiffPoly::constant(c.clone())
                .mul(&DiffPoly::from_monomial(DiffMonomial::from_factors(rest)));
            for j in matched {
                while derived.len() <= j as usize {
                    let next = derived.last().unwrap().derive();
                    derived.push(next);
                }
                acc = acc.mul(&derived[j as usize]);
            }
            out = out.add(&acc);
        }
        out
    }

    fn from_monomial(m: DiffMonomial) -> Self {
        let mut p = DiffPoly::zero();
        p.terms.insert(m, Rat::one());
        p
    }

    pub fn coefficient_of(&self, m: &DiffMonomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Sum of monomials all of whose generators have derivative order 0.
    pub fn derivative_free_part(&self) -> Self {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            if m.is_derivative_free() {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// The common weight of all monomials, or None if inhomogeneous
    /// (the zero polynomial reports Some(0)).
    pub fn homogeneous_weight(&self) -> Option<u64> {
        let mut it = self.terms.keys().map(|m| m.weight());
        let Some(first) = it.next() else {
            return Some(0);
        };
        it.all(|w| w == first).then_some(first)
    }

    /// True if some generator of the given family occurs.
    pub fn contains_family(&self, family: Family) -> bool {
        self.terms
            .keys()
            .any(|m| m.factors.iter().any(|g| g.family == family))
    }

    /// Largest W-index occurring (i.e. the deepest w_{-i}).
    pub fn max_w_index(&self) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.factors.iter())
            .filter(|g| g.family == Family::W)
            .map(|g| g.index)
            .max()
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m.factors().is_empty() {
                write!(f, "{}", fmt_rat(c))?;
            } else {
                write!(f, "{} * {}", fmt_rat(c), m)?;
            }
        }
        Ok(())
    }
}
