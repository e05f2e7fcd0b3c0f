//! Closed-form and series evaluations independent of the main engine:
//! one-point numbers via the conjugating K-operator, partition-sum forms,
//! the r=3 gamma formula, the Boussinesq sequence, the Euler characteristic
//! of the one-pointed moduli space, and the Bernoulli identities validating
//! the limit argument.

use num_traits::{One, Zero};

use crate::correlators::Engine;
use crate::scalar::{
    bernoulli, binomial, factorial, gamma_ratio, harmonic, is_integer, rat, rat_int, rat_pow,
    to_i64,
};
use crate::series::PowerSeries;
use crate::{Rat, Result};

/// Coefficients s_k of x/((1+x)^r - 1) = 1/(r + binom(r,2)x + binom(r,3)x^2 + ...),
/// for k = 0..=kmax.
pub fn s_coeffs(r: u32, kmax: u32) -> Vec<Rat> {
    let len = kmax as usize + 1;
    let mut den = vec![Rat::zero(); len];
    for k in 0..len {
        den[k] = binomial(r as i64, k as u32 + 1);
    }
    PowerSeries::from_coeffs(den).recip().coeffs().to_vec()
}

/// Table of e_{u,i} = i! a_{u,i}, the polynomial coefficients of the
/// conjugating operator K = 1 + Σ a_{u,i} x^i D^{-(u(r+1)-i)}.
#[derive(Debug, Clone)]
pub struct ETable {
    pub r: u32,
    /// entries[u][i] = e_{u,i}; row u has columns 0..=2u (column 0 unused
    /// except for the seed row e_{0,0} = 1).
    pub entries: Vec<Vec<Rat>>,
}

/// Fill the e-table up to u = umax by the recursion
/// e_{u,i} = Σ_j e_{u-1,j} ((j+1) s_{j+2-i} + (j-(u-1)(r+1)) s_{j+1-i}).
pub fn e_table(r: u32, umax: u32) -> ETable {
    let s = s_coeffs(r, 2 * umax + 1);
    let sget = |k: i64| -> Rat {
        if k < 0 {
            Rat::zero()
        } else {
            s[k as usize].clone()
        }
    };
    let mut entries: Vec<Vec<Rat>> = vec![vec![Rat::one()]];
    for u in 1..=umax {
        let prev = &entries[(u - 1) as usize];
        let mut row = vec![Rat::zero(); (2 * u + 1) as usize];
        for i in 1..=(2 * u) as i64 {
            let mut acc = Rat::zero();
            for (j, e_prev) in prev.iter().enumerate() {
                if e_prev.is_zero() {
                    continue;
                }
                let j = j as i64;
                let weight = rat_int(j + 1) * sget(j + 2 - i)
                    + (rat_int(j) - rat_int((u as i64 - 1) * (r as i64 + 1))) * sget(j + 1 - i);
                acc += e_prev * weight;
            }
            row[i as usize] = acc;
        }
        entries.push(row);
    }
    let table = ETable { r, entries };
    if umax >= 1 {
        // seed values against the reference K-expansion
        assert_eq!(table.e(1, 1), rat(1 - r as i64, 2 * r as i64));
        assert_eq!(table.e(1, 2), rat(1, r as i64));
    }
    table
}

impl ETable {
    pub fn e(&self, u: u32, i: u32) -> Rat {
        self.entries
            .get(u as usize)
            .and_then(|row| row.get(i as usize))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// E_u = Σ_{i=1}^{2u} binom(u(r+1)-1, i) e_{u,i}.
    pub fn capital_e(&self, u: u32) -> Rat {
        let mut acc = Rat::zero();
        for i in 1..=2 * u {
            acc += binomial((u * (self.r + 1) - 1) as i64, i) * self.e(u, i);
        }
        acc
    }

    /// The row identity 0 = Σ_{k=1}^{2u} binom(r, k) e_{u,k}, valid for u >= 1.
    pub fn row_identity_holds(&self, u: u32) -> bool {
        let mut acc = Rat::zero();
        for k in 1..=2 * u {
            acc += binomial(self.r as i64, k) * self.e(u, k);
        }
        acc.is_zero()
    }
}

fn onepoint_admissible(r: u32, n: u32, m: u32, g: u32) -> bool {
    m + 1 <= r - 1 && (n as i64 + 1) * r as i64 + m as i64 + 1 == 2 * g as i64 * (r as i64 + 1) - 1
}

/// One-point number ⟨τ_{n,m}⟩_g through the K-operator expansion:
/// (-1)^g Γ(-2g-(2g-1)/r) / (r^g Γ(1-(m+1)/r)) E_{2g}.
pub fn onepoint_k(r: u32, n: u32, m: u32, g: u32) -> Result<Rat> {
    if !onepoint_admissible(r, n, m, g) {
        return Ok(Rat::zero());
    }
    let table = e_table(r, 2 * g);
    let e2g = table.capital_e(2 * g);
    let base = Rat::one() - rat((m + 1) as i64, r as i64);
    // the numerator argument -2g-(2g-1)/r sits n+2 recurrence steps below
    let ratio = gamma_ratio(&base, -(n as i64 + 2))?;
    let sign = if g % 2 == 0 { Rat::one() } else { -Rat::one() };
    Ok(sign * ratio * e2g / rat_pow(&rat_int(r as i64), g as i64))
}

/// All multiplicity vectors d = (d_1, d_2, ...) with Σ i d_i = g.
pub fn partitions_of(g: u32) -> Vec<Vec<u32>> {
    fn rec(budget: u32, part: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if budget == 0 {
            let mut v = acc.clone();
            while v.last() == Some(&0) {
                v.pop();
            }
            out.push(v);
            return;
        }
        if part > budget {
            return;
        }
        for mult in 0..=(budget / part) {
            acc.push(mult);
            rec(budget - part * mult, part + 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if g == 0 {
        out.push(Vec::new());
    } else {
        rec(g, 1, &mut Vec::new(), &mut out);
    }
    out
}

/// The weights t_i = -binom(r, 2i)/((2i+1) 4^i) of the partition sums.
fn t_weight(r: u32, i: u32) -> Rat {
    -binomial(r as i64, 2 * i) / (rat_int(2 * i as i64 + 1) * rat_pow(&rat_int(4), i as i64))
}

/// Shared partition-sum evaluator:
/// (-1)^g / (r^g Γ(1-(1+m)/r)) Σ_{|d|=g} Γ(||d|| - shift/r) ∏ t_i^{d_i} / d!.
fn partition_sum(r: u32, m: u32, g: u32, shift: i64) -> Result<Rat> {
    let base = Rat::one() - rat((m + 1) as i64, r as i64);
    let mut acc = Rat::zero();
    for d in partitions_of(g) {
        let dsum: i64 = d.iter().map(|&x| x as i64).sum();
        let num_arg = rat_int(dsum) - rat(shift, r as i64);
        let offset = &num_arg - &base;
        assert!(
            is_integer(&offset),
            "partition-sum gamma arguments must differ by an integer"
        );
        let mut weight = gamma_ratio(&base, to_i64(&offset))?;
        for (idx, &mult) in d.iter().enumerate() {
            if mult == 0 {
                continue;
            }
            let i = idx as u32 + 1;
            weight *= rat_pow(&t_weight(r, i), mult as i64);
            weight /= Rat::from_integer(factorial(mult as u64));
        }
        acc += weight;
    }
    let sign = if g % 2 == 0 { Rat::one() } else { -Rat::one() };
    Ok(sign * acc / rat_pow(&rat_int(r as i64), g as i64))
}

/// One-point number ⟨τ_{n,m}⟩_g through the partition-sum closed form.
pub fn onepoint_partition(r: u32, n: u32, m: u32, g: u32) -> Result<Rat> {
    if !onepoint_admissible(r, n, m, g) {
        return Ok(Rat::zero());
    }
    partition_sum(r, m, g, 2 * g as i64 - 1)
}

/// ⟨τ_{0,1}^k τ_{n,m}⟩_g through the partition-sum closed form.
pub fn k_insertions(r: u32, k: u32, n: u32, m: u32, g: u32) -> Result<Rat> {
    // dimension constraint for the full insertion set, and the spin gates
    if m > r - 2 || (k > 0 && r < 3) {
        return Ok(Rat::zero());
    }
    let s = k as i64 + 1;
    let dim_lhs = (r as i64 + 1) * (2 * g as i64 - 2) + r as i64 * s;
    let dim_rhs = r as i64 * n as i64 + k as i64 + m as i64;
    if dim_lhs != dim_rhs {
        return Ok(Rat::zero());
    }
    partition_sum(r, m, g, 2 * g as i64 - k as i64 - 1)
}

/// The r=3 closed form ⟨τ_{0,1}^k τ_{(8g+2k-5-j)/3, j}⟩_g
/// = Γ((g+k+1)/3) / (12^g g! Γ((2-j)/3)); j = 2 produces an exact zero
/// through the denominator pole.
pub fn threespin_gamma(g: u32, k: u32, j: u32) -> Result<Rat> {
    assert!(j <= 2, "spin index j must be 0, 1, or 2 for r = 3");
    let num = 8 * g as i64 + 2 * k as i64 - 5 - j as i64;
    assert!(num % 3 == 0, "n = (8g+2k-5-j)/3 must be an integer");
    assert!(num >= 0, "descendent index must be nonnegative");
    let base = rat(2 - j as i64, 3);
    let offset = (g as i64 + k as i64 + j as i64 - 1) / 3;
    assert_eq!((g as i64 + k as i64 + j as i64 - 1) % 3, 0);
    let ratio = gamma_ratio(&base, offset)?;
    Ok(ratio / (rat_pow(&rat_int(12), g as i64) * Rat::from_integer(factorial(g as u64))))
}

/// Orbifold Euler characteristic of the genus-g one-pointed moduli space,
/// evaluated as the r -> -1 specialization of the partition sum:
/// Σ_{|d|=g} Γ(||d||+2g-1) (-1)^{||d||} / (d! ∏((2i+1)4^i)^{d_i}),
/// asserted equal to -B_{2g}/(2g).
pub fn euler_characteristic(g: u32) -> Rat {
    assert!(g >= 1);
    let mut acc = Rat::zero();
    for d in partitions_of(g) {
        let dsum: u64 = d.iter().map(|&x| x as u64).sum();
        let mut term = Rat::from_integer(factorial(dsum + 2 * g as u64 - 2));
        if dsum % 2 == 1 {
            term = -term;
        }
        for (idx, &mult) in d.iter().enumerate() {
            if mult == 0 {
                continue;
            }
            let i = idx as i64 + 1;
            term /= rat_pow(&rat_int((2 * i + 1) * 4i64.pow(i as u32)), mult as i64);
            term /= Rat::from_integer(factorial(mult as u64));
        }
        acc += term;
    }
    let expect = -bernoulli(2 * g) / rat_int(2 * g as i64);
    assert_eq!(
        acc, expect,
        "Euler characteristic partition sum fails at g={g}"
    );
    acc
}

/// f_n(0) by the window recursion
/// f_{j+1}(k) = -(k+1) f_j(k+2) + (2k+1) f_j(k+1) - k f_j(k),
/// f_1(k) = -1/((k+1)(k+2)); asserted equal to -B_n/n.
pub fn appendix_c_f(n: u32) -> Rat {
    assert!(n >= 2);
    let w = 2 * n as usize;
    let mut row: Vec<Rat> = (0..=w)
        .map(|k| rat(-1, (k as i64 + 1) * (k as i64 + 2)))
        .collect();
    for _ in 1..n {
        let mut next = vec![Rat::zero(); row.len().saturating_sub(2)];
        for (k, slot) in next.iter_mut().enumerate() {
            let k_i = k as i64;
            *slot = rat_int(-(k_i + 1)) * &row[k + 2] + rat_int(2 * k_i + 1) * &row[k + 1]
                - rat_int(k_i) * &row[k];
        }
        row = next;
    }
    let got = row[0].clone();
    let expect = -bernoulli(n) / rat_int(n as i64);
    assert_eq!(got, expect, "f_{n}(0) != -B_{n}/{n}");
    got
}

/// e_{u,i} at the specializationforced by s_0 = s_1 = -1, s_{k>1} = 0:
/// e_{u,i} = (1-i) e_{u-1,i-2} + (1-2i) e_{u-1,i-1} - i e_{u-1,i}.
fn e_at_minus_one(umax: u32) -> Vec<Vec<Rat>> {
    let mut rows: Vec<Vec<Rat>> = vec![vec![Rat::one()]];
    for u in 1..=umax {
        let prev = &rows[(u - 1) as usize];
        let get = |i: i64| -> Rat {
            if i < 0 || i as usize >= prev.len() {
                Rat::zero()
            } else {
                prev[i as usize].clone()
            }
        };
        let mut row = vec![Rat::zero(); (2 * u + 1) as usize];
        for i in 1..=(2 * u) as i64 {
            row[i as usize] =
                rat_int(1 - i) * get(i - 2) + rat_int(1 - 2 * i) * get(i - 1) - rat_int(i) * get(i);
        }
        rows.push(row);
    }
    rows
}

/// Verifies Σ_{k=1}^{2u} (-1)^{k+1} H_k e_{u,k}(-1) = B_u/u, the rational
/// identity that replaces the analytic r -> -1 limit.
pub fn eq11_check(u: u32) -> bool {
    assert!(u >= 2);
    let rows = e_at_minus_one(u);
    let mut acc = Rat::zero();
    for k in 1..=2 * u {
        let sign = if k % 2 == 1 { Rat::one() } else { -Rat::one() };
        acc += sign * harmonic(k) * &rows[u as usize][k as usize];
    }
    acc == bernoulli(u) / rat_int(u as i64)
}

/// The Boussinesq (r=3) sequences: a_m = ⟨τ_{0,1}^{3m+1} τ_{2,0}^{2m-2}⟩_0 by
/// the quadratic recursion, and b_m = (5m-3) a_m / ((3m+1)!(2m-2)!), verified
/// against the simplified recursion and against Lagrange inversion of the
/// exactly-integrated generating series.
pub fn boussinesq(mmax: u32) -> (Vec<Rat>, Vec<Rat>) {
    assert!(mmax >= 1);
    // (2m-2)(2m-1)(5m-3) a_m = Σ_{i=1}^{m-1} binom(3m+1, 3i+1) binom(2m-1, 2i)
    //   2i(2i-1)(5i-1)(5i-3)(2m-2i-1)(5m-5i-3) a_i a_{m-i}
    let mut a: Vec<Rat> = vec![rat(1, 3)];
    for m in 2..=mmax as i64 {
        let mut acc = Rat::zero();
        for i in 1..m {
            let factor = binomial(3 * m + 1, (3 * i + 1) as u32)
                * binomial(2 * m - 1, (2 * i) as u32)
                * rat_int(2 * i)
                * rat_int(2 * i - 1)
                * rat_int(5 * i - 1)
                * rat_int(5 * i - 3)
                * rat_int(2 * (m - i) - 1)
                * rat_int(5 * (m - i) - 3);
            acc += factor * &a[(i - 1) as usize] * &a[(m - i - 1) as usize];
        }
        a.push(acc / rat_int((2 * m - 2) * (2 * m - 1) * (5 * m - 3)));
    }

    let b: Vec<Rat> = (1..=mmax as i64)
        .map(|m| {
            rat_int(5 * m - 3) * &a[(m - 1) as usize]
                / Rat::from_integer(factorial((3 * m + 1) as u64) * factorial((2 * m - 2) as u64))
        })
        .collect();
    // simplified recursion (2m-2) b_m = Σ (5i-1)(3(m-i)+1) b_i b_{m-i}
    for m in 2..=mmax as i64 {
        let mut acc = Rat::zero();
        for i in 1..m {
            acc += rat_int(5 * i - 1)
                * rat_int(3 * (m - i) + 1)
                * &b[(i - 1) as usize]
                * &b[(m - i - 1) as usize];
        }
        assert_eq!(
            rat_int(2 * m - 2) * &b[(m - 1) as usize],
            acc,
            "b-recursion fails at m={m}"
        );
    }

    // Lagrange-inversion path: integrate dy-side of the first-order ODE
    // exactly as formal series and invert.
    let len = mmax as usize + 3;
    let mut radicand = PowerSeries::<Rat>::zero(len);
    radicand.set_coeff(0, Rat::one());
    radicand.set_coeff(1, rat_int(-32));
    radicand.set_coeff(2, rat_int(16));
    let root = radicand.sqrt();
    // 1 - y - sqrt(...) = 15y (1 + ...)
    let mut den = PowerSeries::<Rat>::zero(len);
    den.set_coeff(0, Rat::one());
    den.set_coeff(1, -Rat::one());
    let den = den.sub(&root);
    let unit = den.shift_down(1).scale(&rat(1, 15));
    // integrand 15/(1-y-sqrt) = 1/y + g(y); x = C y exp(∫ g); b_1 = 1/36 pins C = 36
    let g = unit.recip().sub(&PowerSeries::one(len - 1)).shift_down(1);
    let x_over_y = g.integrate().truncate(len - 1).exp().scale(&rat_int(36));
    // reference prefix of x(y): 36y - 288y^2 + 0y^3 - 5760y^4 - 92160y^5
    assert_eq!(x_over_y.coeff(0), &rat_int(36));
    assert_eq!(x_over_y.coeff(1), &rat_int(-288));
    assert_eq!(x_over_y.coeff(2), &Rat::zero());
    if mmax >= 4 {
        assert_eq!(x_over_y.coeff(3), &rat_int(-5760));
        assert_eq!(x_over_y.coeff(4), &rat_int(-92160));
    }
    // b_i = (1/i) Res_{y=0} x(y)^{-i} = (1/i) [y^{i-1}] (x/y)^{-i}
    for i in 1..=mmax {
        let inv = x_over_y.pow_i64(-(i as i64));
        let lag = inv.coeff(i as usize - 1) / rat_int(i as i64);
        assert_eq!(
            lag,
            b[i as usize - 1],
            "Lagrange inversion disagrees with the recursion at m={i}"
        );
    }

    (a, b)
}

/// The Lagrange inversion identity (1/n)[x^{n-k}](x/F)^n = (1/k)[x^n](F^{-1})^k
/// on a pseudo-random truncated series with invertible linear term.
pub fn lagrange_identity_check(nmax: u32, kmax: u32, seed: u64) -> bool {
    let len = nmax as usize + 2;
    let mut state = seed | 1;
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let num = ((state >> 33) % 19) as i64 - 9;
        let den = ((state >> 13) % 5) as i64 + 1;
        rat(num, den)
    };
    let mut coeffs = vec![Rat::zero(); len];
    coeffs[1] = rat(3, 2); // invertible linear coefficient
    for c in coeffs.iter_mut().skip(2) {
        *c = next();
    }
    let f = PowerSeries::from_coeffs(coeffs);
    let finv = f.reversion();
    let x_over_f = f.shift_down(1).recip(); // x/F as a power series
    for n in 1..=nmax {
        let xf_n = x_over_f.pow(n);
        for k in 1..=kmax.min(n) {
            let lhs = xf_n.coeff((n - k) as usize) / rat_int(n as i64);
            let rhs = finv.pow(k).coeff(n as usize) / rat_int(k as i64);
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Enumerate all (n, m, g) with g <= gmax that satisfy the one-point
/// dimension constraint for this r.
pub fn admissible_onepoints(r: u32, gmax: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for g in 1..=gmax {
        for m in 0..=(r - 2) {
            let num = 2 * g as i64 * (r as i64 + 1) - 1 - (m as i64 + 1);
            if num % r as i64 == 0 && num / r as i64 >= 1 {
                let n = (num / r as i64 - 1) as u32;
                out.push((n, m, g));
            }
        }
    }
    out
}

/// Three-path agreement: engine, K-operator, partition sum.
pub fn onepoint_three_path_agree(engine: &mut Engine, gmax: u32) -> Result<bool> {
    let r = engine.r();
    for (n, m, g) in admissible_onepoints(r, gmax) {
        let via_k = onepoint_k(r, n, m, g)?;
        let via_partition = onepoint_partition(r, n, m, g)?;
        if via_k != via_partition {
            return Ok(false);
        }
        let via_engine = engine.correlator(g, &[(n, m)]);
        if via_engine != via_k {
            return Ok(false);
        }
    }
    Ok(true)
}
