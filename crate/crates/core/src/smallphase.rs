//! Genus-zero small-phase-space computations with the Landau-Ginzburg
//! potential: the series expansion of W(p, t), the flat fields φ_m, residue
//! formulas for primary correlators, the closed four-point formulas, and the
//! integrality/vanishing/monotonicity scanner.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::correlators::Engine;
use crate::mpoly::MPoly;
use crate::scalar::{binomial_rat, factorial, rat, rat_int};
use crate::{Rat, Result};

/// Truncated polynomial in t_0..t_{r-2}.
pub type TPoly = MPoly<Rat>;

/// Laurent polynomial in p with TPoly coefficients, truncated in t-degree.
#[derive(Debug, Clone, PartialEq)]
pub struct PLaurent {
    terms: BTreeMap<i64, TPoly>,
    dmax: u32,
}

impl PLaurent {
    pub fn new(dmax: u32) -> Self {
        PLaurent {
            terms: BTreeMap::new(),
            dmax,
        }
    }

    pub fn dmax(&self) -> u32 {
        self.dmax
    }

    pub fn add_term(&mut self, power: i64, coeff: TPoly) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(power).or_insert_with(TPoly::zero);
        *entry = entry.clone() + coeff;
        if self.terms[&power].is_zero() {
            self.terms.remove(&power);
        }
    }

    pub fn coeff(&self, power: i64) -> TPoly {
        self.terms.get(&power).cloned().unwrap_or_else(TPoly::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &TPoly)> {
        self.terms.iter()
    }

    pub fn lowest_power(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut out = PLaurent::new(self.dmax);
        for (&k, c) in &self.terms {
            out.add_term(k, c.scale(s));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let dmax = self.dmax.min(other.dmax);
        let mut out = PLaurent::new(dmax);
        for (&ka, ca) in &self.terms {
            for (&kb, cb) in &other.terms {
                out.add_term(ka + kb, ca.mul_trunc(cb, dmax));
            }
        }
        out
    }

    /// ∂/∂p.
    pub fn partial_p(&self) -> Self {
        let mut out = PLaurent::new(self.dmax);
        for (&k, c) in &self.terms {
            if k != 0 {
                out.add_term(k - 1, c.scale(&rat_int(k)));
            }
        }
        out
    }

    /// ∂/∂t_i.
    pub fn partial_t(&self, i: usize) -> Self {
        let mut out = PLaurent::new(self.dmax);
        for (&k, c) in &self.terms {
            out.add_term(k, c.partial(i));
        }
        out
    }

    /// Keep only nonnegative powers of p.
    pub fn plus_part(&self) -> Self {
        let mut out = PLaurent::new(self.dmax);
        for (&k, c) in &self.terms {
            if k >= 0 {
                out.add_term(k, c.clone());
            }
        }
        out
    }
}

/// The genus-zero potential and its flat-field data for a fixed r.
pub struct SmallPhase {
    r: u32,
    dmax: u32,
    potential: PLaurent,
    phis: Vec<PLaurent>,
    dpw_inv: PLaurent,
}

/// Nondecreasing tuples of `n` spin values in [0, r-2] summing to `target`,
/// together with the multinomial weight n!/∏ mult! of each multiset.
fn spin_multisets(r: u32, n: u32, target: i64) -> Vec<(Vec<u32>, Rat)> {
    fn rec(
        r: u32,
        remaining: u32,
        target: i64,
        min: u32,
        acc: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if remaining == 0 {
            if target == 0 {
                out.push(acc.clone());
            }
            return;
        }
        for v in min..=(r - 2) {
            let rest = target - v as i64;
            if rest < 0 {
                break;
            }
            if rest > ((r - 2) * (remaining - 1)) as i64 {
                continue;
            }
            acc.push(v);
            rec(r, remaining - 1, rest, v, acc, out);
            acc.pop();
        }
    }
    let mut sets = Vec::new();
    if target >= 0 {
        rec(r, n, target, 0, &mut Vec::new(), &mut sets);
    }
    sets.into_iter()
        .map(|vs| {
            let mut weight = Rat::from_integer(factorial(n as u64));
            let mut run = 1u64;
            for i in 1..vs.len() {
                if vs[i] == vs[i - 1] {
                    run += 1;
                } else {
                    weight /= Rat::from_integer(factorial(run));
                    run = 1;
                }
            }
            weight /= Rat::from_integer(factorial(run));
            (vs, weight)
        })
        .collect()
}

fn monomial_of(vs: &[u32], r: u32) -> Vec<u32> {
    let mut e = vec![0u32; (r - 1) as usize];
    for &v in vs {
        e[v as usize] += 1;
    }
    e
}

/// W(p, t) = p^r + Σ_k p^k Σ_{n>=1} (-1)^n/(n! r^{n-1}) (k+n-1)!/k!
///           Σ_{v_1+...+v_n=(n-1)r+k} t_{v_1}...t_{v_n}, truncated at
/// t-degree dmax.
pub fn potential(r: u32, dmax: u32) -> PLaurent {
    assert!(r >= 2 && dmax >= 1);
    let mut w = PLaurent::new(dmax);
    w.add_term(r as i64, TPoly::one());
    for k in 0..=(r - 2) {
        for n in 1..=dmax {
            let target = (n as i64 - 1) * r as i64 + k as i64;
            let mut poly = TPoly::zero();
            for (vs, mult) in spin_multisets(r, n, target) {
                poly.add_term(monomial_of(&vs, r), mult);
            }
            if poly.is_zero() {
                continue;
            }
            // (-1)^n / (n! r^{n-1}) (k+n-1)!/k!
            let mut c = Rat::from_integer(factorial((k + n - 1) as u64))
                / Rat::from_integer(factorial(k as u64))
                / Rat::from_integer(factorial(n as u64));
            c /= crate::scalar::rat_pow(&rat_int(r as i64), n as i64 - 1);
            if n % 2 == 1 {
                c = -c;
            }
            w.add_term(k as i64, poly.scale(&c));
        }
    }
    w
}

/// φ_m by the direct series expansion:
/// p^m + Σ_{n>=1} (-1)^n/(n! r^n) Σ_{v_1+...+v_n >= nr-m} (q+n)!/q! ∏ t_{v_i} p^q,
/// q = m + Σv - nr >= 0.
fn phi_closed_form(r: u32, m: u32, dmax: u32) -> PLaurent {
    let mut phi = PLaurent::new(dmax);
    phi.add_term(m as i64, TPoly::one());
    for n in 1..=dmax {
        // q ranges over 0..= m + n(r-2) - nr = m - 2n; target Σv = q + nr - m
        let mut c_base = Rat::one()
            / (Rat::from_integer(factorial(n as u64))
                * crate::scalar::rat_pow(&rat_int(r as i64), n as i64));
        if n % 2 == 1 {
            c_base = -c_base;
        }
        let mut q = 0i64;
        loop {
            let target = q + (n * r) as i64 - m as i64;
            if target > ((r - 2) * n) as i64 {
                break;
            }
            let mut poly = TPoly::zero();
            for (vs, mult) in spin_multisets(r, n, target) {
                poly.add_term(monomial_of(&vs, r), mult);
            }
            if !poly.is_zero() {
                // (q+n)!/q!
                let mut c = c_base.clone();
                for t in (q + 1)..=(q + n as i64) {
                    c *= rat_int(t);
                }
                phi.add_term(q, poly.scale(&c));
            }
            q += 1;
        }
    }
    phi
}

impl SmallPhase {
    /// Build the potential, the fields φ_m (verified two ways), and the
    /// geometric inverse of ∂W/∂p.
    pub fn new(r: u32, dmax: u32) -> Self {
        let w = potential(r, dmax + 1);
        let mut phis = Vec::with_capacity((r - 1) as usize);
        for m in 0..=(r - 2) {
            let closed = phi_closed_form(r, m, dmax);
            let derived = w.partial_t(m as usize).scale(&-Rat::one());
            // compare at the common truncation
            let mut truncated = PLaurent::new(dmax);
            for (&k, c) in derived.terms() {
                truncated.add_term(k, c.truncate_degree(dmax));
            }
            assert_eq!(
                closed, truncated,
                "phi_{m} closed form disagrees with -∂W/∂t_{m} (r={r})"
            );
            phis.push(closed);
        }

        // 1/∂pW = (1/r) p^{-(r-1)} Σ_a (-N)^a with N = ∂pW/(r p^{r-1}) - 1;
        // every factor of N carries t-degree >= 1, so the sum stops at dmax.
        let w_trunc = {
            let mut t = PLaurent::new(dmax);
            for (&k, c) in w.terms() {
                t.add_term(k, c.truncate_degree(dmax));
            }
            t
        };
        let dpw = w_trunc.partial_p();
        let mut n_part = PLaurent::new(dmax);
        for (&k, c) in dpw.terms() {
            let shifted = k - (r as i64 - 1);
            let scaled = c.scale(&rat(1, r as i64));
            if shifted == 0 {
                let mut adj = scaled;
                adj = adj + TPoly::constant(-Rat::one());
                n_part.add_term(0, adj);
            } else {
                n_part.add_term(shifted, scaled);
            }
        }
        debug_assert!(n_part.terms().all(|(_, c)| c.coeff(&[]).is_zero()));
        let mut inv = PLaurent::new(dmax);
        inv.add_term(0, TPoly::one());
        let mut power = PLaurent::new(dmax);
        power.add_term(0, TPoly::one());
        for _ in 1..=dmax {
            power = power.mul(&n_part).scale(&-Rat::one());
            inv = inv.add(&power);
        }
        // fold in (1/r) p^{-(r-1)}
        let mut dpw_inv = PLaurent::new(dmax);
        for (&k, c) in inv.terms() {
            dpw_inv.add_term(k - (r as i64 - 1), c.scale(&rat(1, r as i64)));
        }

        SmallPhase {
            r,
            dmax,
            potential: w,
            phis,
            dpw_inv,
        }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn potential(&self) -> &PLaurent {
        &self.potential
    }

    pub fn phi(&self, m: u32) -> &PLaurent {
        &self.phis[m as usize]
    }

    /// ⟨τ_j τ_m τ_s ∏_extra τ_{m_i}⟩ = coefficient extraction from
    /// r Res{φ_j φ_m φ_s / ∂pW}.
    pub fn residue_correlator(&self, j: u32, m: u32, s: u32, extra: &[u32]) -> Result<Rat> {
        let r = self.r;
        let all_sum: i64 =
            j as i64 + m as i64 + s as i64 + extra.iter().map(|&x| x as i64).sum::<i64>();
        let s_count = 3 + extra.len() as i64;
        if [j, m, s].iter().chain(extra).any(|&x| x > r - 2) {
            return Ok(Rat::zero());
        }
        if all_sum != r as i64 * (s_count - 2) - 2 {
            return Ok(Rat::zero());
        }
        if extra.len() as u32 > self.dmax {
            return Err(crate::Error::Usage(format!(
                "truncation degree {} too small for {} extra insertions",
                self.dmax,
                extra.len()
            )));
        }
        let prod = self
            .phi(j)
            .mul(self.phi(m))
            .mul(self.phi(s))
            .mul(&self.dpw_inv);
        let res = prod.coeff(-1);
        let expt = monomial_of(extra, r);
        let mut v = res.coeff(&expt) * rat_int(r as i64);
        for &mult in &expt {
            v *= Rat::from_integer(factorial(mult as u64));
        }
        Ok(v)
    }
}

/// Heaviside θ with θ(0) = 1.
fn theta(x: i64) -> i64 {
    if x >= 0 {
        1
    } else {
        0
    }
}

/// The three equivalent closed forms of the genus-zero four-point number,
/// asserted equal: the residue-derived θ-formula, Witten's variant, and the
/// min formula. Out-of-range or off-dimension quadruples give zero.
pub fn fourpoint(r: u32, m: u32, u: u32, v: u32, w: u32) -> Rat {
    let ri = r as i64;
    let (m, u, v, w) = (m as i64, u as i64, v as i64, w as i64);
    if [m, u, v, w].iter().any(|&a| a > ri - 2) || m + u + v + w != 2 * ri - 2 {
        return Rat::zero();
    }
    let f_theta = rat(
        ri - m
            - 1
            - (u + v - ri + 1) * theta(u + v - ri)
            - (u + w - ri + 1) * theta(u + w - ri)
            - (v + w - ri + 1) * theta(v + w - ri),
        ri,
    );
    let f_witten = rat(
        m - (m + u - ri + 1) * theta(m + u - ri)
            - (m + v - ri + 1) * theta(m + v - ri)
            - (m + w - ri + 1) * theta(m + w - ri),
        ri,
    );
    let f_min = rat(
        [m, u, v, w]
            .iter()
            .map(|&a| a.min(ri - 1 - a))
            .min()
            .unwrap(),
        ri,
    );
    assert_eq!(
        f_theta, f_witten,
        "theta formula vs Witten's variant at r={r} ({m},{u},{v},{w})"
    );
    assert_eq!(
        f_theta, f_min,
        "theta formula vs min formula at r={r} ({m},{u},{v},{w})"
    );
    f_theta
}

/// Cross-check of the degree-3 fractional-power expansion: the four-point
/// numbers extracted from (r^2/((m+1)(r+m+1))) Res(W^{1+(m+1)/r}) must
/// reproduce `fourpoint` for every admissible (u, v, w).
pub fn fractional_power_fourpoint_check(r: u32, m: u32) -> Result<bool> {
    let dmax = 3;
    let w = potential(r, dmax);
    // V = (W - p^r) p^{-r}; W^{(r+m+1)/r} = p^{r+m+1} Σ_a binom(e, a) V^a
    let mut v = PLaurent::new(dmax);
    for (&k, c) in w.terms() {
        if k == r as i64 {
            let mut c2 = c.clone();
            c2 = c2 + TPoly::constant(-Rat::one());
            v.add_term(0, c2);
        } else {
            v.add_term(k - r as i64, c.clone());
        }
    }
    let e = rat((r + m + 1) as i64, r as i64);
    let mut acc = PLaurent::new(dmax);
    let mut vpow = PLaurent::new(dmax);
    vpow.add_term(0, TPoly::one());
    for a in 0..=dmax {
        acc = acc.add(&vpow.scale(&binomial_rat(&e, a)));
        if a < dmax {
            vpow = vpow.mul(&v);
        }
    }
    // Res picks p^{-1}, i.e. the p^{-(r+m+2)} slot of the binomial sum
    let res = acc.coeff(-(r as i64) - m as i64 - 2);
    let df_dtm = res.scale(&(rat((r * r) as i64, 1) / rat_int(((m + 1) * (r + m + 1)) as i64)));
    // compare every admissible degree-3 coefficient with the closed forms
    for u in 0..=(r - 2) {
        for vv in u..=(r - 2) {
            for ww in vv..=(r - 2) {
                if (m + u + vv + ww) as i64 != 2 * r as i64 - 2 {
                    continue;
                }
                let expt = monomial_of(&[u, vv, ww], r);
                let mut got = df_dtm.coeff(&expt);
                for &mult in &expt {
                    got *= Rat::from_integer(factorial(mult as u64));
                }
                if got != fourpoint(r, m, u, vv, ww) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// All primary index multisets (sorted) with s points for this r.
pub fn primary_multisets(r: u32, s: u32) -> Vec<Vec<u32>> {
    let target = r as i64 * (s as i64 - 2) - 2;
    spin_multisets(r, s, target)
        .into_iter()
        .map(|(vs, _)| vs)
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanViolation {
    pub indices: Vec<u32>,
    pub value: String,
    pub detail: String,
}

/// Report of the integrality / vanishing / monotonicity scan over all
/// primary correlators for a fixed r.
#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub r: u32,
    pub checked: usize,
    pub integrality_violations: Vec<ScanViolation>,
    pub vanishing_violations: Vec<ScanViolation>,
    pub monotonicity_violations: Vec<ScanViolation>,
}

impl ScanReport {
    pub fn clean(&self) -> bool {
        self.integrality_violations.is_empty()
            && self.vanishing_violations.is_empty()
            && self.monotonicity_violations.is_empty()
    }
}

/// Enumerate every nonzero-candidate primary correlator (3 <= s <= r+1),
/// compute it by the residue formula, cross-check against the WDVV engine,
/// and test the three conjectured properties.
pub fn conjecture_scan(engine: &mut Engine) -> Result<ScanReport> {
    let r = engine.r();
    let phase = SmallPhase::new(r, r.max(3) - 1);
    let mut values: BTreeMap<Vec<u32>, Rat> = BTreeMap::new();
    for s in 3..=(r + 1) {
        for ms in primary_multisets(r, s) {
            let via_residue = phase.residue_correlator(ms[0], ms[1], ms[2], &ms[3..])?;
            let via_engine = engine.genus0_primary(&ms);
            assert_eq!(
                via_residue, via_engine,
                "residue and WDVV paths disagree on {ms:?} (r={r})"
            );
            values.insert(ms, via_residue);
        }
    }

    let mut report = ScanReport {
        r,
        checked: values.len(),
        integrality_violations: Vec::new(),
        vanishing_violations: Vec::new(),
        monotonicity_violations: Vec::new(),
    };
    for (ms, val) in &values {
        let s = ms.len() as u32;
        // (i) r^{s-3}/(s-3)! ⟨...⟩ ∈ Z
        let scaled = val.clone() * crate::scalar::rat_pow(&rat_int(r as i64), s as i64 - 3)
            / Rat::from_integer(factorial((s - 3) as u64));
        if !crate::scalar::is_integer(&scaled) {
            report.integrality_violations.push(ScanViolation {
                indices: ms.clone(),
                value: crate::scalar::fmt_rat(val),
                detail: format!(
                    "r^{}/{}! x value = {}",
                    s - 3,
                    s - 3,
                    crate::scalar::fmt_rat(&scaled)
                ),
            });
        }
        // (ii) vanishing when some m_i < s-3
        if ms.iter().any(|&m| (m as i64) < s as i64 - 3) && !val.is_zero() {
            report.vanishing_violations.push(ScanViolation {
                indices: ms.clone(),
                value: crate::scalar::fmt_rat(val),
                detail: format!("min index {} < s-3 = {}", ms[0], s - 3),
            });
        }
        // (iii) moving a unit from a larger to a smaller index never
        // decreases the value
        for hi in 0..ms.len() {
            for lo in 0..ms.len() {
                if ms[hi] <= ms[lo] || (lo == hi) {
                    continue;
                }
                let mut moved = ms.clone();
                moved[hi] -= 1;
                moved[lo] += 1;
                moved.sort();
                let other = values
                    .get(&moved)
                    .expect("transformed multiset stays admissible");
                if other < val {
                    report.monotonicity_violations.push(ScanViolation {
                        indices: ms.clone(),
                        value: crate::scalar::fmt_rat(val),
                        detail: format!(
                            "moving 1 from {} to {} gives {:?} = {}",
                            ms[hi],
                            ms[lo],
                            moved,
                            crate::scalar::fmt_rat(other)
                        ),
                    });
                }
            }
        }
    }
    Ok(report)
}
