//! Truncated univariate formal power series over a generic coefficient ring.
//!
//! A series stores its first `len` coefficients exactly; binary operations
//! truncate to the shorter operand. Division-flavored operations (reciprocal,
//! square root, exp, reversion) require a [`Field`] coefficient.

use crate::{Field, Ring};

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> PowerSeries<T> {
    /// Series from explicit coefficients; `coeffs[i]` is the x^i coefficient.
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        PowerSeries { coeffs }
    }

    pub fn zero(len: usize) -> Self {
        PowerSeries {
            coeffs: vec![T::zero(); len],
        }
    }

    pub fn one(len: usize) -> Self {
        let mut s = Self::zero(len);
        if len > 0 {
            s.coeffs[0] = T::one();
        }
        s
    }

    /// The identity series x.
    pub fn x(len: usize) -> Self {
        let mut s = Self::zero(len);
        if len > 1 {
            s.coeffs[1] = T::one();
        }
        s
    }

    /// Number of known coefficients (truncation order).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of x^i; panics past the truncation order rather than
    /// silently returning zero.
    pub fn coeff(&self, i: usize) -> &T {
        assert!(
            i < self.coeffs.len(),
            "coefficient {i} beyond truncation {}",
            self.coeffs.len()
        );
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, i: usize, v: T) {
        assert!(i < self.coeffs.len());
        self.coeffs[i] = v;
    }

    pub fn truncate(&self, len: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.truncate(len);
        PowerSeries { coeffs: c }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        let coeffs = (0..n)
            .map(|i| self.coeffs[i].clone() + other.coeffs[i].clone())
            .collect();
        PowerSeries { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        let coeffs = (0..n)
            .map(|i| self.coeffs[i].clone() - other.coeffs[i].clone())
            .collect();
        PowerSeries { coeffs }
    }

    pub fn neg(&self) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        let mut coeffs = vec![T::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        PowerSeries { coeffs }
    }

    /// Multiply by x^k (shifting up; top coefficients fall off).
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.len();
        let mut coeffs = vec![T::zero(); n];
        for i in 0..n.saturating_sub(k) {
            coeffs[i + k] = self.coeffs[i].clone();
        }
        PowerSeries { coeffs }
    }

    /// Divide by x^k; the low coefficients must vanish.
    pub fn shift_down(&self, k: usize) -> Self {
        for i in 0..k.min(self.len()) {
            assert!(
                self.coeffs[i].is_zero(),
                "shift_down: nonzero coefficient below x^{k}"
            );
        }
        PowerSeries {
            coeffs: self.coeffs[k.min(self.len())..].to_vec(),
        }
    }

    /// Nonnegative integer power, truncated to this series' length.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.len());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

impl<T: Field> PowerSeries<T> {
    fn from_i64(v: i64) -> T {
        T::from_i64(v).expect("small integer must embed in the field")
    }

    /// Reciprocal; the constant term must be invertible (nonzero).
    pub fn recip(&self) -> Self {
        let n = self.len();
        assert!(
            n > 0 && !self.coeffs[0].is_zero(),
            "recip: zero constant term"
        );
        let c0inv = T::one() / self.coeffs[0].clone();
        let mut out = vec![T::zero(); n];
        out[0] = c0inv.clone();
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + self.coeffs[j].clone() * out[k - j].clone();
            }
            out[k] = -(c0inv.clone() * acc);
        }
        PowerSeries { coeffs: out }
    }

    /// Integer power; negative exponents go through [`Self::recip`].
    pub fn pow_i64(&self, e: i64) -> Self {
        if e >= 0 {
            self.pow(e as u32)
        } else {
            self.recip().pow((-e) as u32)
        }
    }

    /// Termwise derivative (length shrinks by one).
    pub fn derivative(&self) -> Self {
        let n = self.len().saturating_sub(1);
        let coeffs = (0..n)
            .map(|i| self.coeffs[i + 1].clone() * Self::from_i64(i as i64 + 1))
            .collect();
        PowerSeries { coeffs }
    }

    /// Antiderivative with zero constant term (length grows by one).
    pub fn integrate(&self) -> Self {
        let mut coeffs = vec![T::zero(); self.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i + 1] = c.clone() / Self::from_i64(i as i64 + 1);
        }
        PowerSeries { coeffs }
    }

    /// Square root of a series with constant term 1.
    pub fn sqrt(&self) -> Self {
        let n = self.len();
        assert!(
            n > 0 && self.coeffs[0].is_one(),
            "sqrt: constant term must be 1"
        );
        let mut out = vec![T::zero(); n];
        out[0] = T::one();
        let two = Self::from_i64(2);
        for k in 1..n {
            let mut acc = T::zero();
            for j in 1..k {
                acc = acc + out[j].clone() * out[k - j].clone();
            }
            out[k] = (self.coeffs[k].clone() - acc) / two.clone();
        }
        PowerSeries { coeffs: out }
    }

    /// Exponential of a series with zero constant term.
    pub fn exp(&self) -> Self {
        let n = self.len();
        assert!(
            n == 0 || self.coeffs[0].is_zero(),
            "exp: constant term must be 0"
        );
        let mut out = vec![T::zero(); n];
        if n > 0 {
            out[0] = T::one();
        }
        // e' = f' e  =>  n e_n = sum_{k=1..n} k f_k e_{n-k}
        for m in 1..n {
            let mut acc = T::zero();
            for k in 1..=m {
                acc = acc + self.coeffs[k].clone() * Self::from_i64(k as i64) * out[m - k].clone();
            }
            out[m] = acc / Self::from_i64(m as i64);
        }
        PowerSeries { coeffs: out }
    }

    /// Composition self(inner); `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Self {
        let n = self.len().min(inner.len());
        assert!(
            n == 0 || inner.coeffs[0].is_zero(),
            "compose: inner constant term must be 0"
        );
        let inner = inner.truncate(n);
        let mut acc = PowerSeries::zero(n);
        let mut pw = PowerSeries::one(n);
        for k in 0..n {
            acc = acc.add(&pw.scale(&self.coeffs[k]));
            pw = pw.mul(&inner);
        }
        acc
    }

    /// Compositional inverse g with self(g(x)) = x. Requires constant term 0
    /// and invertible linear coefficient.
    pub fn reversion(&self) -> Self {
        let n = self.len();
        assert!(n >= 2, "reversion: need at least the linear coefficient");
        assert!(
            self.coeffs[0].is_zero(),
            "reversion: constant term must be 0"
        );
        assert!(
            !self.coeffs[1].is_zero(),
            "reversion: linear coefficient must be invertible"
        );
        let c1inv = T::one() / self.coeffs[1].clone();
        let mut g = PowerSeries::zero(n);
        g.coeffs[1] = c1inv.clone();
        for m in 2..n {
            // [x^m] F(g) = 0; the only occurrence of g_m is F_1 * g_m.
            let fg = self.compose(&g.truncate(m).pad(n));
            g.coeffs[m] = -(c1inv.clone() * fg.coeffs[m].clone());
        }
        g
    }

    fn pad(&self, len: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(len, T::zero());
        PowerSeries { coeffs: c }
    }
}
