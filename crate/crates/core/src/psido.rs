//! Non-commutative calculus of formal pseudodifferential operators with
//! differential-polynomial coefficients: composition, truncation management,
//! the r-th root D + Σ w_{-i} D^{-i}, fractional powers, residues, and the
//! elimination machinery that turns the vanishing of the negative part of
//! the r-th power into substitution rules.
//!
//! Truncation floors are tracked per operator and propagated conservatively
//! through composition; reading a coefficient below the floor is a hard
//! error, never silently zero.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::diffalg::{DiffPoly, Family, Generator};
use crate::scalar::binomial;
use crate::{Error, Rat, Result};

/// Formal operator Σ coeff(n) · D^n. Orders above the top are zero; orders
/// below `floor` are unknown (truncated). `floor == None` means every order
/// is known exactly (all but finitely many are zero).
#[derive(Debug, Clone, PartialEq)]
pub struct PsiDO {
    coeffs: BTreeMap<i64, DiffPoly>,
    floor: Option<i64>,
}

impl PsiDO {
    pub fn zero() -> Self {
        PsiDO {
            coeffs: BTreeMap::new(),
            floor: None,
        }
    }

    /// The bare power D^k, known exactly.
    pub fn d_power(k: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(k, DiffPoly::constant(Rat::one()));
        PsiDO {
            coeffs,
            floor: None,
        }
    }

    /// Order-zero operator given by a coefficient polynomial.
    pub fn from_poly(p: DiffPoly) -> Self {
        let mut coeffs = BTreeMap::new();
        if !p.is_zero() {
            coeffs.insert(0, p);
        }
        PsiDO {
            coeffs,
            floor: None,
        }
    }

    pub fn from_coeffs(coeffs: BTreeMap<i64, DiffPoly>, floor: Option<i64>) -> Self {
        let mut op = PsiDO { coeffs, floor };
        op.normalize();
        op
    }

    fn normalize(&mut self) {
        self.coeffs.retain(|_, p| !p.is_zero());
        if let Some(f) = self.floor {
            let below: Vec<i64> = self.coeffs.range(..f).map(|(k, _)| *k).collect();
            for k in below {
                self.coeffs.remove(&k);
            }
        }
    }

    pub fn floor(&self) -> Option<i64> {
        self.floor
    }

    /// Highest order with a nonzero coefficient.
    pub fn top(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Coefficient of D^n; an error if n is below the truncation floor.
    pub fn coeff(&self, n: i64) -> Result<DiffPoly> {
        if let Some(f) = self.floor {
            if n < f {
                return Err(Error::FloorViolation {
                    requested: n,
                    floor: f,
                });
            }
        }
        Ok(self.coeffs.get(&n).cloned().unwrap_or_else(DiffPoly::zero))
    }

    pub fn orders(&self) -> impl Iterator<Item = (&i64, &DiffPoly)> {
        self.coeffs.iter()
    }

    pub fn set_floor(&mut self, floor: Option<i64>) {
        self.floor = floor;
        self.normalize();
    }

    pub fn add(&self, other: &Self) -> Self {
        let floor = match (self.floor, other.floor) {
            (None, f) | (f, None) => f,
            (Some(a), Some(b)) => Some(a.max(b)),
        };
        let mut coeffs = self.coeffs.clone();
        for (k, p) in &other.coeffs {
            let entry = coeffs.entry(*k).or_insert_with(DiffPoly::zero);
            *entry = entry.add(p);
        }
        PsiDO::from_coeffs(coeffs, floor)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let coeffs = self.coeffs.iter().map(|(k, p)| (*k, p.scale(s))).collect();
        PsiDO::from_coeffs(coeffs, self.floor)
    }

    /// Associative product using D^k · f = Σ_j binom(k, j) (D^j f) D^{k-j}.
    ///
    /// The result's floor is max(f1+t2, f2+t1): orders at or above it are
    /// unaffected by either operand's unknown tail.
    pub fn compose(&self, other: &Self) -> Self {
        let t1 = self.top().unwrap_or(0);
        let t2 = other.top().unwrap_or(0);
        let floor = match (self.floor, other.floor) {
            (None, None) => None,
            (Some(f1), None) => Some(f1 + t2),
            (None, Some(f2)) => Some(f2 + t1),
            (Some(f1), Some(f2)) => Some((f1 + t2).max(f2 + t1)),
        };

        let mut coeffs: BTreeMap<i64, DiffPoly> = BTreeMap::new();
        for (&k, ak) in &self.coeffs {
            for (&m, bm) in &other.coeffs {
                // contributions land at order n = k + m - j, j >= 0
                let jmax = match floor {
                    Some(f) => {
                        let span = k + m - f;
                        if span < 0 {
                            continue;
                        }
                        if k >= 0 {
                            span.min(k)
                        } else {
                            span
                        }
                    }
                    None => {
                        assert!(
                            k >= 0,
                            "composition of exact operators with an infinite negative tail; set a floor"
                        );
                        k
                    }
                };
                let mut dj = bm.clone();
                for j in 0..=jmax {
                    let b = binomial(k, j as u32);
                    if !b.is_zero() {
                        let contrib = ak.mul(&dj).scale(&b);
                        let entry = coeffs.entry(k + m - j).or_insert_with(DiffPoly::zero);
                        *entry = entry.add(&contrib);
                    }
                    if j < jmax {
                        dj = dj.derive();
                    }
                }
            }
        }
        PsiDO::from_coeffs(coeffs, floor)
    }

    /// Left-iterated power: self^e computed as self · (self^{e-1}).
    pub fn pow(&self, e: u32) -> Self {
        assert!(e >= 1);
        let mut acc = self.clone();
        for _ in 1..e {
            acc = self.compose(&acc);
        }
        acc
    }

    /// Split into (nonnegative-order part, negative-order part).
    pub fn parts(&self) -> (Self, Self) {
        if let Some(f) = self.floor {
            assert!(f <= 0, "parts: floor {f} above order 0");
        }
        let mut plus = BTreeMap::new();
        let mut minus = BTreeMap::new();
        for (&k, p) in &self.coeffs {
            if k >= 0 {
                plus.insert(k, p.clone());
            } else {
                minus.insert(k, p.clone());
            }
        }
        (
            PsiDO::from_coeffs(plus, None),
            PsiDO::from_coeffs(minus, self.floor),
        )
    }

    /// The residue: coefficient of D^{-1}.
    pub fn res(&self) -> Result<DiffPoly> {
        self.coeff(-1)
    }
}

/// The r-th root L = D + Σ_{i=1}^{depth} w_{-i} D^{-i} with abstract
/// generators w_{-i}.
pub fn rth_root(depth: u32) -> PsiDO {
    let mut coeffs = BTreeMap::new();
    coeffs.insert(1, DiffPoly::constant(Rat::one()));
    for i in 1..=depth {
        coeffs.insert(-(i as i64), DiffPoly::generator(Generator::w(i, 0)));
    }
    PsiDO::from_coeffs(coeffs, Some(-(depth as i64)))
}

/// Table of the powers L^k and their coefficients γ_ℓ^k (the coefficient of
/// D^ℓ in Q^{k/r}), as differential polynomials in the w_{-i}.
///
/// The polynomials themselves do not depend on r; r fixes which power is the
/// differential operator Q and how deep the table must go.
#[derive(Debug, Clone)]
pub struct GammaTable {
    r: u32,
    depth: u32,
    powers: Vec<PsiDO>,
}

impl GammaTable {
    /// Build L and its powers up to L^{r+1}, verifying on the way that each
    /// power has a vanishing subtop coefficient (w_0 = 0) and that every
    /// coefficient of L^k at order ℓ is weight-homogeneous of weight k-ℓ.
    pub fn build(r: u32, depth: u32) -> Result<Self> {
        if depth < r + 2 {
            return Err(Error::InsufficientDepth {
                needed: r + 2,
                have: depth,
            });
        }
        let root = rth_root(depth);
        let mut powers = vec![root.clone()];
        for k in 2..=(r + 1) {
            let next = root.compose(powers.last().unwrap());
            let subtop = next.coeff(k as i64 - 1)?;
            assert!(
                subtop.is_zero(),
                "L^{k} acquired a D^{} coefficient; the root has no order-0 term",
                k - 1
            );
            for (&ell, p) in next.orders() {
                let w = p.homogeneous_weight();
                assert_eq!(
                    w,
                    Some((k as i64 - ell) as u64),
                    "gamma_{ell}^{k} is not homogeneous of weight k-ℓ"
                );
            }
            powers.push(next);
        }
        Ok(GammaTable { r, depth, powers })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Q^{k/r} as an operator (k between 1 and r+1).
    pub fn power(&self, k: u32) -> &PsiDO {
        assert!(
            k >= 1 && k as usize <= self.powers.len(),
            "power {k} not built"
        );
        &self.powers[k as usize - 1]
    }

    /// γ_ℓ^k, the coefficient of D^ℓ in Q^{k/r}.
    pub fn gamma(&self, ell: i64, k: u32) -> Result<DiffPoly> {
        self.power(k).coeff(ell)
    }

    /// Substitution rules eliminating w_{-r}, w_{-r-1}, ..., obtained by
    /// setting the negative orders of L^r to zero (Q is a differential
    /// operator). Entry (i, p) means w_{-i} := p, with p fully reduced to
    /// the base variables w_{-1}..w_{-(r-1)}.
    pub fn negative_part_eliminations(&self, count: u32) -> Result<Vec<(u32, DiffPoly)>> {
        let r = self.r;
        let mut rules: Vec<(u32, DiffPoly)> = Vec::new();
        for ell in 1..=count {
            let target = r - 1 + ell; // index of the w being eliminated
            let mut expr = self.gamma(-(ell as i64), r)?;
            for (i, rep) in &rules {
                expr = expr.substitute(Family::W, *i, rep);
            }
            // expr = r w_{-target} + p(w_{-1}..w_{-(target-1)})
            let lead = expr.coefficient_of(&crate::diffalg::DiffMonomial::single(Generator::w(
                target, 0,
            )));
            assert_eq!(
                lead,
                crate::scalar::rat_int(r as i64),
                "leading coefficient of the elimination"
            );
            let mut rest = expr;
            rest.add_term(
                crate::diffalg::DiffMonomial::single(Generator::w(target, 0)),
                -lead,
            );
            let rep = rest.scale(&crate::scalar::rat(-1, r as i64));
            assert!(
                rep.max_w_index().map_or(true, |m| m < target),
                "elimination for w_{{-{target}}} still references itself or deeper variables"
            );
            rules.push((target, rep));
        }
        Ok(rules)
    }

    /// The root with w_{-r}..w_{-(r-1+count)} eliminated; its r-th power has
    /// identically vanishing negative orders on the reliable range.
    pub fn eliminated_root(&self, count: u32) -> Result<PsiDO> {
        let rules = self.negative_part_eliminations(count)?;
        let mut coeffs = BTreeMap::new();
        coeffs.insert(1, DiffPoly::constant(Rat::one()));
        for i in 1..=self.depth {
            let mut p = DiffPoly::generator(Generator::w(i, 0));
            for (j, rep) in &rules {
                p = p.substitute(Family::W, *j, rep);
            }
            coeffs.insert(-(i as i64), p);
        }
        Ok(PsiDO::from_coeffs(coeffs, Some(-(self.depth as i64))))
    }
}

/// Independent construction of the γ_ℓ^k by the residue-product recursion
/// γ_ℓ^{k+1} = w_{ℓ-k} + Dγ_ℓ^k + γ_{ℓ-1}^k
///           + Σ_{j=1}^{k-2-ℓ} w_{-j} Σ_{i=j+ℓ}^{k-2} binom(-j, i-j-ℓ) D^{i-j-ℓ} γ_i^k,
/// used as a cross-check oracle against the repeated-composition table.
///
/// Returns maps order -> γ_ℓ^k for k = 1..=kmax; entries are reliable for
/// ℓ >= k-1-depth.
pub fn gamma_by_recursion(depth: u32, kmax: u32) -> Vec<BTreeMap<i64, DiffPoly>> {
    let d = depth as i64;
    let mut levels: Vec<BTreeMap<i64, DiffPoly>> = Vec::new();
    let mut level1 = BTreeMap::new();
    level1.insert(1, DiffPoly::constant(Rat::one()));
    for i in 1..=depth {
        level1.insert(-(i as i64), DiffPoly::generator(Generator::w(i, 0)));
    }
    levels.push(level1);

    for k in 1..kmax {
        let k = k as i64;
        let prev = levels.last().unwrap();
        let gamma_prev =
            |ell: i64| -> DiffPoly { prev.get(&ell).cloned().unwrap_or_else(DiffPoly::zero) };
        let mut level: BTreeMap<i64, DiffPoly> = BTreeMap::new();
        level.insert(k + 1, DiffPoly::constant(Rat::one()));
        let lo = (k + 1) - 1 - d; // reliable floor of level k+1
        for ell in lo..=(k - 1) {
            let mut acc = DiffPoly::zero();
            if (1..=d).contains(&(k - ell)) {
                acc = acc.add(&DiffPoly::generator(Generator::w((k - ell) as u32, 0)));
            }
            acc = acc.add(&gamma_prev(ell).derive());
            acc = acc.add(&gamma_prev(ell - 1));
            for j in 1..=(k - 2 - ell).min(d) {
                let wj = DiffPoly::generator(Generator::w(j as u32, 0));
                let mut inner = DiffPoly::zero();
                for i in (j + ell)..=(k - 2) {
                    let b = binomial(-j, (i - j - ell) as u32);
                    if !b.is_zero() {
                        inner = inner.add(&gamma_prev(i).derive_n((i - j - ell) as u32).scale(&b));
                    }
                }
                acc = acc.add(&wj.mul(&inner));
            }
            if !acc.is_zero() {
                level.insert(ell, acc);
            }
        }
        levels.push(level);
    }
    levels
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffalg::DiffMonomial;
    use crate::scalar::{rat, rat_int};

    fn wp(i: u32, j: u32) -> DiffPoly {
        DiffPoly::generator(Generator::w(i, j))
    }

    fn mono(factors: &[(u32, u32)]) -> DiffMonomial {
        DiffMonomial::from_factors(factors.iter().map(|&(i, j)| Generator::w(i, j)).collect())
    }

    /// Res(Q^{1/4}) = w_{-1}; Res(Q^{2/4}) = 2w_{-2} + Dw_{-1};
    /// Res(Q^{3/4}) = 3w_{-3} + D^2 w_{-1} + 3Dw_{-2} + 3w_{-1}^2.
    #[test]
    fn low_residues_match_reference_forms() {
        let table = GammaTable::build(4, 6).unwrap();
        assert_eq!(table.power(1).res().unwrap(), wp(1, 0));
        let expect2 = wp(2, 0).scale(&rat_int(2)).add(&wp(1, 1));
        assert_eq!(table.power(2).res().unwrap(), expect2);
        let expect3 = wp(3, 0)
            .scale(&rat_int(3))
            .add(&wp(1, 2))
            .add(&wp(2, 1).scale(&rat_int(3)))
            .add(&wp(1, 0).mul(&wp(1, 0)).scale(&rat_int(3)));
        assert_eq!(table.power(3).res().unwrap(), expect3);
    }

    /// γ_{-1}^4 = 4w_{-4} + D^3w_{-1} + 4D^2w_{-2} + 6Dw_{-3}
    ///          + 6w_{-1}Dw_{-1} + 12w_{-1}w_{-2}.
    #[test]
    fn gamma_minus1_level4_matches() {
        let table = GammaTable::build(4, 6).unwrap();
        let g = table.gamma(-1, 4).unwrap();
        let mut expect = DiffPoly::zero();
        expect.add_term(mono(&[(4, 0)]), rat_int(4));
        expect.add_term(mono(&[(1, 3)]), rat_int(1));
        expect.add_term(mono(&[(2, 2)]), rat_int(4));
        expect.add_term(mono(&[(3, 1)]), rat_int(6));
        expect.add_term(mono(&[(1, 0), (1, 1)]), rat_int(6));
        expect.add_term(mono(&[(1, 0), (2, 0)]), rat_int(12));
        assert_eq!(g, expect);
    }

    /// γ_{-2}^4 = 4w_{-5} + 6Dw_{-4} + 4D^2w_{-3} + D^3w_{-2} + 6w_{-1}Dw_{-2}
    ///          - (Dw_{-1})^2 + 12w_{-1}w_{-3} + 6w_{-2}^2 + 4w_{-1}^3 + 2w_{-1}D^2w_{-1}.
    #[test]
    fn gamma_minus2_level4_matches() {
        let table = GammaTable::build(4, 6).unwrap();
        let g = table.gamma(-2, 4).unwrap();
        let mut expect = DiffPoly::zero();
        expect.add_term(mono(&[(5, 0)]), rat_int(4));
        expect.add_term(mono(&[(4, 1)]), rat_int(6));
        expect.add_term(mono(&[(3, 2)]), rat_int(4));
        expect.add_term(mono(&[(2, 3)]), rat_int(1));
        expect.add_term(mono(&[(1, 0), (2, 1)]), rat_int(6));
        expect.add_term(mono(&[(1, 1), (1, 1)]), rat_int(-1));
        expect.add_term(mono(&[(1, 0), (3, 0)]), rat_int(12));
        expect.add_term(mono(&[(2, 0), (2, 0)]), rat_int(6));
        expect.add_term(mono(&[(1, 0), (1, 0), (1, 0)]), rat_int(4));
        expect.add_term(mono(&[(1, 0), (1, 2)]), rat_int(2));
        assert_eq!(g, expect);
    }

    /// γ_{-1}^5 = 5w_{-5} + D^4w_{-1} + 5D^3w_{-2} + 10D^2w_{-3} + 10Dw_{-4}
    ///          + 5(Dw_{-1})^2 + 10w_{-1}D^2w_{-1} + 10w_{-2}^2 + 10w_{-1}^3
    ///          + 20w_{-1}Dw_{-2} + 10w_{-2}Dw_{-1} + 20w_{-1}w_{-3}.
    #[test]
    fn gamma_minus1_level5_matches() {
        let table = GammaTable::build(4, 6).unwrap();
        let g = table.gamma(-1, 5).unwrap();
        let mut expect = DiffPoly::zero();
        expect.add_term(mono(&[(5, 0)]), rat_int(5));
        expect.add_term(mono(&[(1, 4)]), rat_int(1));
        expect.add_term(mono(&[(2, 3)]), rat_int(5));
        expect.add_term(mono(&[(3, 2)]), rat_int(10));
        expect.add_term(mono(&[(4, 1)]), rat_int(10));
        expect.add_term(mono(&[(1, 1), (1, 1)]), rat_int(5));
        expect.add_term(mono(&[(1, 0), (1, 2)]), rat_int(10));
        expect.add_term(mono(&[(2, 0), (2, 0)]), rat_int(10));
        expect.add_term(mono(&[(1, 0), (1, 0), (1, 0)]), rat_int(10));
        expect.add_term(mono(&[(1, 0), (2, 1)]), rat_int(20));
        expect.add_term(mono(&[(1, 1), (2, 0)]), rat_int(10));
        expect.add_term(mono(&[(1, 0), (3, 0)]), rat_int(20));
        assert_eq!(g, expect);
    }

    #[test]
    fn compose_d_with_function() {
        // D · f = f' + f D
        let f = PsiDO::from_poly(wp(1, 0));
        let prod = PsiDO::d_power(1).compose(&f);
        assert_eq!(prod.coeff(0).unwrap(), wp(1, 1));
        assert_eq!(prod.coeff(1).unwrap(), wp(1, 0));
        assert_eq!(prod.top(), Some(1));
    }

    #[test]
    fn compose_is_associative() {
        let a = PsiDO::d_power(2)
            .add(&PsiDO::from_poly(wp(1, 0)))
            .add(&PsiDO::from_coeffs(
                [(-1i64, wp(2, 0))].into_iter().collect(),
                Some(-4),
            ));
        let b = PsiDO::d_power(1).add(&PsiDO::from_coeffs(
            [(-2i64, wp(1, 1)), (0i64, wp(3, 0))].into_iter().collect(),
            Some(-3),
        ));
        let c = PsiDO::from_coeffs(
            [(1i64, wp(1, 0)), (-1i64, wp(2, 1).scale(&rat(1, 2)))]
                .into_iter()
                .collect(),
            Some(-2),
        );
        let lhs = a.compose(&b).compose(&c);
        let rhs = a.compose(&b.compose(&c));
        // conservative floors may differ between associations; compare the
        // range both sides are reliable on
        let f = lhs.floor().unwrap().max(rhs.floor().unwrap());
        let t = lhs.top().unwrap_or(0).max(rhs.top().unwrap_or(0));
        for n in f..=t {
            assert_eq!(lhs.coeff(n).unwrap(), rhs.coeff(n).unwrap(), "order {n}");
        }
    }

    #[test]
    fn floor_reads_are_hard_errors() {
        let l = rth_root(3);
        assert!(l.coeff(-4).is_err());
        assert!(l.coeff(-3).is_ok());
        let sq = l.pow(2);
        assert_eq!(sq.floor(), Some(-2));
        assert!(sq.coeff(-3).is_err());
    }

    #[test]
    fn lemma_linear_coefficients() {
        // [D^{k-ℓ-i-1} w_{-i}] γ_ℓ^k = binom(k, k-ℓ-i) for 1 <= i <= k-ℓ-1
        let table = GammaTable::build(6, 9).unwrap();
        for k in 1..=7u32 {
            let p = table.power(k);
            let floor = p.floor().unwrap();
            for ell in floor.max(-(9 - k as i64))..=(k as i64 - 2) {
                let g = table.gamma(ell, k).unwrap();
                for i in 1..=((k as i64 - ell - 1).min(9)) {
                    let j = (k as i64 - ell - i - 1) as u32;
                    let got = g.coefficient_of(&mono(&[(i as u32, j)]));
                    assert_eq!(
                        got,
                        binomial(k as i64, (k as i64 - ell - i) as u32),
                        "k={k} ell={ell} i={i}"
                    );
                }
            }
        }
    }

    #[test]
    fn recursion_agrees_with_composition() {
        // Both routes to the gamma table agree on the reliable range.
        let depth = 9u32;
        let table = GammaTable::build(6, depth).unwrap();
        let rec = gamma_by_recursion(depth, 7);
        for k in 1..=7u32 {
            let p = table.power(k);
            let floor = p.floor().unwrap();
            for ell in floor..=(k as i64) {
                let a = table.gamma(ell, k).unwrap();
                let b = rec[k as usize - 1]
                    .get(&ell)
                    .cloned()
                    .unwrap_or_else(DiffPoly::zero);
                assert_eq!(a, b, "k={k} ell={ell}");
            }
        }
    }

    #[test]
    fn eliminated_root_power_has_no_negative_part() {
        for r in 2..=5u32 {
            let depth = r + 3;
            let table = GammaTable::build(r, depth).unwrap();
            let count = depth - r + 1;
            let lr = table.eliminated_root(count).unwrap().pow(r);
            let floor = lr.floor().unwrap();
            assert_eq!(floor, r as i64 - 1 - depth as i64);
            for ell in floor..0 {
                assert!(
                    lr.coeff(ell).unwrap().is_zero(),
                    "r={r}: eliminated L^r has residue at order {ell}: {}",
                    lr.coeff(ell).unwrap()
                );
            }
            // no D^{r-1} term either
            assert!(lr.coeff(r as i64 - 1).unwrap().is_zero());
        }
    }

    #[test]
    fn parts_splits_and_recomposes() {
        let l = rth_root(4);
        let sq = l.pow(2);
        let (plus, minus) = sq.parts();
        assert!(plus.orders().all(|(k, _)| *k >= 0));
        assert!(minus.orders().all(|(k, _)| *k < 0));
        let back = plus.add(&minus);
        for n in sq.floor().unwrap()..=sq.top().unwrap() {
            assert_eq!(back.coeff(n).unwrap(), sq.coeff(n).unwrap());
        }
        let (qp, qm) = PsiDO::d_power(3).parts();
        assert_eq!(qp, PsiDO::d_power(3));
        assert!(qm.orders().count() == 0);
    }

    #[test]
    fn res_of_differential_operator_is_zero() {
        assert!(PsiDO::d_power(5).res().unwrap().is_zero());
        assert!(rth_root(4).pow(2).res().is_ok());
        // floor above -1 makes the residue unreadable
        let mut op = PsiDO::d_power(1);
        op.set_floor(Some(0));
        assert!(op.res().is_err());
    }
}
