//! Exact arithmetic primitives: binomials with the negative-index convention,
//! Bernoulli and harmonic numbers, and gamma-function quotients at rational
//! arguments differing by integers.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::{Error, Int, Rat, Result};

/// Shorthand rational constructor.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// n! as a big integer.
pub fn factorial(n: u64) -> Int {
    let mut acc = Int::one();
    for k in 2..=n {
        acc *= Int::from(k);
    }
    acc
}

/// Binomial coefficient with arbitrary (possibly negative) integer top.
///
/// Computed as the degree-b polynomial a(a-1)...(a-b+1)/b!, which realizes
/// the convention binom(-a-1, b) = binom(a+b, b)(-1)^b.
pub fn binomial(a: i64, b: u32) -> Rat {
    binomial_rat(&rat_int(a), b)
}

/// Binomial coefficient with rational top argument: a(a-1)...(a-b+1)/b!.
pub fn binomial_rat(a: &Rat, b: u32) -> Rat {
    let mut num = Rat::one();
    for j in 0..b {
        num *= a - rat_int(j as i64);
    }
    num / Rat::from_integer(factorial(b as u64))
}

static BERNOULLI: Lazy<Mutex<Vec<Rat>>> = Lazy::new(|| Mutex::new(vec![Rat::one()]));

/// Bernoulli number B_n in the convention B_1 = -1/2 (generating function
/// t/(e^t - 1)). Memoized; the table only ever grows.
pub fn bernoulli(n: u32) -> Rat {
    let mut table = BERNOULLI.lock().unwrap();
    while table.len() <= n as usize {
        // sum_{j=0}^{n} binom(n+1, j) B_j = 0 for n >= 1
        let m = table.len() as i64; // computing B_m
        let mut acc = Rat::zero();
        for (j, bj) in table.iter().enumerate() {
            acc += binomial(m + 1, j as u32) * bj;
        }
        let bm = -acc / binomial(m + 1, m as u32);
        table.push(bm);
    }
    table[n as usize].clone()
}

/// Harmonic number H_n = sum_{k=1..n} 1/k, with H_0 = 0.
pub fn harmonic(n: u32) -> Rat {
    let mut acc = Rat::zero();
    for k in 1..=n as i64 {
        acc += rat(1, k);
    }
    acc
}

/// A quotient Γ(base + offset)/Γ(base), evaluated exactly through the
/// recurrence Γ(z+1) = zΓ(z). Poles are tracked, never approximated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaRatio {
    pub base: Rat,
    pub offset: i64,
}

impl GammaRatio {
    pub fn new(base: Rat, offset: i64) -> Self {
        GammaRatio { base, offset }
    }

    /// Exact value of Γ(base+offset)/Γ(base).
    ///
    /// For offset >= 0 this is the product ∏_{k=0}^{offset-1}(base+k); a zero
    /// factor means Γ(base) has a pole that Γ(base+offset) does not, so the
    /// quotient is exactly 0, and when both arguments are poles the product
    /// already equals the finite limit (-1)^{p-q} q!/p!. For offset < 0 the
    /// quotient is 1/∏_{k=1}^{|offset|}(base-k); a zero factor there is a
    /// numerator pole with no cancelling denominator pole, which is an error.
    pub fn eval(&self) -> Result<Rat> {
        if self.offset >= 0 {
            let mut acc = Rat::one();
            for k in 0..self.offset {
                acc *= &self.base + rat_int(k);
            }
            Ok(acc)
        } else {
            let mut acc = Rat::one();
            for k in 1..=(-self.offset) {
                let factor = &self.base - rat_int(k);
                if factor.is_zero() {
                    return Err(Error::GammaPole(&self.base + rat_int(self.offset)));
                }
                acc *= factor;
            }
            Ok(Rat::one() / acc)
        }
    }
}

/// Γ(base+offset)/Γ(base); see [`GammaRatio::eval`].
pub fn gamma_ratio(base: &Rat, offset: i64) -> Result<Rat> {
    GammaRatio::new(base.clone(), offset).eval()
}

/// Integer power of a rational; negative exponents invert (x must be nonzero).
pub fn rat_pow(x: &Rat, e: i64) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e.unsigned_abs() {
        acc *= x;
    }
    if e < 0 {
        assert!(!acc.is_zero(), "negative power of zero");
        Rat::one() / acc
    } else {
        acc
    }
}

/// True if the rational is an integer.
pub fn is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

/// Convert an integer-valued rational to i64, panicking otherwise.
pub fn to_i64(x: &Rat) -> i64 {
    assert!(is_integer(x), "expected integer, got {x}");
    let n: BigInt = x.to_integer();
    i64::try_from(&n).expect("integer out of i64 range")
}

/// Render a rational as `p/q`, or plain `p` when the denominator is 1.
pub fn fmt_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `p/q` or `p` into a rational.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let parse_int = |t: &str| -> Result<Int> {
        t.trim()
            .parse::<Int>()
            .map_err(|e| Error::Usage(format!("bad rational '{s}': {e}")))
    };
    match s.split_once('/') {
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(Error::Usage(format!(
                    "bad rational '{s}': zero denominator"
                )));
            }
            Ok(Rat::new(parse_int(p)?, den))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}
