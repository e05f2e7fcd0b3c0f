//! The r-spin intersection-number engine: genus-zero WDVV recursion,
//! genus-zero descendent elimination, and the all-genus puncture recursion
//! driven by the monomials of W_r(z); memoized.
//!
//! Recursion structure (all routes cached on canonical keys):
//!   - genus 0, all primary: 3-point delta, 4-point min formula, and for
//!     s >= 5 Witten's WDVV rearrangement, whose first term keeps s fixed
//!     but strictly increases Σ m_i^2 (bounded), while the quadratic terms
//!     have fewer points;
//!   - genus 0 with descendents: the topological recursion relation, which
//!     strictly decreases (points, Σ n_i) lexicographically;
//!   - g >= 1 with a puncture: the W_r recursion; quadratic terms either drop
//!     genus or drop the insertion count, Lower terms drop genus by half the
//!     derivative order of the W_r monomial;
//!   - g >= 1 without a puncture: the string equation run backwards, which
//!     strictly increases Σ n_i^2 at fixed (g, count, Σ n_i) until a puncture
//!     appears.

use std::collections::{HashMap, HashSet};

use num_traits::{One, Zero};

use crate::scalar::{rat, rat_int};
use crate::wrpoly::{build_wr, WrPolynomial};
use crate::{Error, Rat, Result};

/// One marked point: descendent index n, spin index m (0..r-1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Insertion {
    pub n: u32,
    pub m: u32,
}

impl Insertion {
    pub fn new(n: u32, m: u32) -> Self {
        Insertion { n, m }
    }

    fn is_puncture(&self) -> bool {
        self.n == 0 && self.m == 0
    }
}

/// Canonicalized correlator key: genus plus the sorted insertion multiset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CorrelatorKey {
    pub g: u32,
    pub ins: Vec<Insertion>,
}

impl CorrelatorKey {
    pub fn new(g: u32, mut ins: Vec<Insertion>) -> Self {
        ins.sort();
        CorrelatorKey { g, ins }
    }
}

#[derive(Debug, Default, Clone, Copy)]
pub struct Stats {
    pub hits: u64,
    pub misses: u64,
    /// Number of keys that actually went through a recursion expansion
    /// (dimension-violating and property-(i) zeros never count).
    pub expansions: u64,
}

/// Memoizing evaluator for a fixed r.
pub struct Engine {
    r: u32,
    wr: WrPolynomial,
    cache: HashMap<CorrelatorKey, Rat>,
    in_progress: HashSet<CorrelatorKey>,
    stats: Stats,
}

impl Engine {
    pub fn new(r: u32) -> Result<Self> {
        if r < 2 {
            return Err(Error::Usage(format!("r must be >= 2, got {r}")));
        }
        Ok(Self::with_wr(build_wr(r)?))
    }

    /// Build from a precomputed W_r (e.g. loaded from the disk cache).
    pub fn with_wr(wr: WrPolynomial) -> Self {
        Engine {
            r: wr.r(),
            wr,
            cache: HashMap::new(),
            in_progress: HashSet::new(),
            stats: Stats::default(),
        }
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn wr(&self) -> &WrPolynomial {
        &self.wr
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    pub fn cache_len(&self) -> usize {
        self.cache.len()
    }

    pub fn cache_iter(&self) -> impl Iterator<Item = (&CorrelatorKey, &Rat)> {
        self.cache.iter()
    }

    /// Seed the memo table (used when loading a persisted cache).
    pub fn cache_insert(&mut self, key: CorrelatorKey, val: Rat) {
        self.cache.insert(key, val);
    }

    /// The correlator ⟨τ_{n_1,m_1} ... τ_{n_s,m_s}⟩_g in the normalization
    /// that includes the 1/r^g prefactor.
    pub fn correlator(&mut self, g: u32, ins: &[(u32, u32)]) -> Rat {
        let ins: Vec<Insertion> = ins.iter().map(|&(n, m)| Insertion::new(n, m)).collect();
        self.eval(CorrelatorKey::new(g, ins))
    }

    /// Genus-zero primary correlator ⟨τ_{0,m_1} ... τ_{0,m_s}⟩_0.
    pub fn genus0_primary(&mut self, ms: &[u32]) -> Rat {
        let ins: Vec<Insertion> = ms.iter().map(|&m| Insertion::new(0, m)).collect();
        self.eval(CorrelatorKey::new(0, ins))
    }

    /// Dimension constraint: (r+1)(2g-2) + rs = r Σn + Σm.
    pub fn dimension_ok(&self, g: u32, ins: &[Insertion]) -> bool {
        let r = self.r as i64;
        let s = ins.len() as i64;
        let lhs = (r + 1) * (2 * g as i64 - 2) + r * s;
        let rhs: i64 = ins.iter().map(|t| r * t.n as i64 + t.m as i64).sum();
        lhs == rhs
    }

    fn eval(&mut self, key: CorrelatorKey) -> Rat {
        // zero gates, cheapest first; these never recurse
        if key.ins.iter().any(|t| t.m >= self.r - 1) {
            debug_assert!(
                key.ins.iter().all(|t| t.m <= self.r - 1),
                "spin index out of range"
            );
            return Rat::zero();
        }
        if key.ins.is_empty() || (key.g == 0 && key.ins.len() < 3) {
            return Rat::zero();
        }
        if !self.dimension_ok(key.g, &key.ins) {
            return Rat::zero();
        }
        if let Some(v) = self.cache.get(&key) {
            self.stats.hits += 1;
            return v.clone();
        }
        self.stats.misses += 1;
        assert!(
            self.in_progress.insert(key.clone()),
            "correlator recursion cycle at {key:?}"
        );
        self.stats.expansions += 1;
        let val = if key.g == 0 {
            if key.ins.iter().all(|t| t.n == 0) {
                self.genus0_witten(&key)
            } else {
                self.genus0_trr(&key)
            }
        } else if key.ins.iter().any(|t| t.is_puncture()) {
            self.puncture(&key)
        } else {
            self.string_lift(&key)
        };
        self.in_progress.remove(&key);
        self.cache.insert(key, val.clone());
        val
    }

    /// Evaluate a would-be genus-0 primary bracket whose indices may have
    /// fallen outside [0, r-2]; out-of-range indices mean the term is absent.
    fn bracket0(&mut self, ms: &[i64]) -> Rat {
        if ms.iter().any(|&m| m < 0 || m > (self.r - 2) as i64) {
            return Rat::zero();
        }
        let ins: Vec<Insertion> = ms.iter().map(|&m| Insertion::new(0, m as u32)).collect();
        self.eval(CorrelatorKey::new(0, ins))
    }

    /// Genus-zero primaries: delta for 3 points, the min formula for 4, and
    /// the WDVV rearrangement for s >= 5.
    fn genus0_witten(&mut self, key: &CorrelatorKey) -> Rat {
        let r = self.r as i64;
        let s = key.ins.len();
        if s == 3 {
            // the dimension gate already enforced m1+m2+m3 = r-2
            return Rat::one();
        }
        let ms: Vec<i64> = key.ins.iter().map(|t| t.m as i64).collect();
        if s == 4 {
            let mv = ms.iter().map(|&a| a.min(r - 1 - a)).min().unwrap();
            return rat(mv, r);
        }
        // sorted ascending; take the three largest
        let z = ms[s - 1];
        let y = ms[s - 2];
        let x = ms[s - 3];
        let rest = &ms[..s - 3];
        let m1 = x + z - (r - 1);
        let m2 = r - 1 - z;
        let m3 = y;
        let m4 = z;
        // admissibility makes the corner indices legal and m1 >= 1, which is
        // exactly what makes the head term strictly increase Σ m_i^2
        debug_assert!(
            m1 >= 1 && (0..=r - 2).contains(&m2),
            "corner indices out of range"
        );

        let mut head = vec![x + y + z - (r - 1), r - 1 - z, z];
        head.extend_from_slice(rest);
        let mut total = self.bracket0(&head);

        // ordered partitions of the remaining s-3 indices, both parts nonempty
        let n_rest = rest.len();
        for mask in 1..((1u64 << n_rest) - 1) {
            let mut i_part = Vec::new();
            let mut j_part = Vec::new();
            for (b, &a) in rest.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    i_part.push(a);
                } else {
                    j_part.push(a);
                }
            }
            // the dimension constraint pins j in each product
            let isum: i64 = i_part.iter().sum();
            let jsum: i64 = j_part.iter().sum();
            for (positive, b2, b3) in [(true, m3, m2), (false, m2, m3)] {
                let j = r * (i_part.len() as i64 + 1) - 2 - (m1 + b2 + isum);
                let jc = r * (j_part.len() as i64 + 1) - 2 - (b3 + m4 + jsum);
                if j < 0 || j > r - 2 {
                    continue;
                }
                debug_assert_eq!(j + jc, r - 2);
                let mut left = vec![j, m1, b2];
                left.extend_from_slice(&i_part);
                let lv = self.bracket0(&left);
                if lv.is_zero() {
                    continue;
                }
                let mut right = vec![jc, b3, m4];
                right.extend_from_slice(&j_part);
                let rv = self.bracket0(&right);
                let term = lv * rv;
                if positive {
                    total += term;
                } else {
                    total -= term;
                }
            }
        }
        total
    }

    /// Genus-zero topological recursion relation, eliminating the largest
    /// descendent against two anchor insertions.
    fn genus0_trr(&mut self, key: &CorrelatorKey) -> Rat {
        let r = self.r as i64;
        let s = key.ins.len();
        assert!(
            s >= 4,
            "descendent at s <= 3 should have failed the dimension gate"
        );
        // insertions are sorted, so the last one carries the maximal n
        let lead = key.ins[s - 1];
        debug_assert!(lead.n >= 1);
        let anchor1 = key.ins[0];
        let anchor2 = key.ins[1];
        let rest = &key.ins[2..s - 1];

        let code = |t: &Insertion| r * t.n as i64 + t.m as i64;
        let mut total = Rat::zero();
        let n_rest = rest.len();
        assert!(
            n_rest < 63,
            "insertion count too large for subset enumeration"
        );
        for mask in 0..(1u64 << n_rest) {
            let mut i_part: Vec<Insertion> = Vec::new();
            let mut j_part: Vec<Insertion> = Vec::new();
            for (b, t) in rest.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    i_part.push(*t);
                } else {
                    j_part.push(*t);
                }
            }
            // m' is pinned by the dimension of the left bracket
            let isum: i64 = i_part.iter().map(code).sum();
            let lead_code = code(&Insertion::new(lead.n - 1, lead.m));
            let mprime = r * (i_part.len() as i64 + 2) - 2 * (r + 1) - (lead_code + isum);
            if !(0..=r - 2).contains(&mprime) {
                continue;
            }
            let mut left = i_part.clone();
            left.push(Insertion::new(lead.n - 1, lead.m));
            left.push(Insertion::new(0, mprime as u32));
            let lv = self.eval(CorrelatorKey::new(0, left));
            if lv.is_zero() {
                continue;
            }
            let mut right = j_part.clone();
            right.push(Insertion::new(0, (r - 2 - mprime) as u32));
            right.push(anchor1);
            right.push(anchor2);
            let rv = self.eval(CorrelatorKey::new(0, right));
            total += lv * rv;
        }
        total
    }

    /// The all-genus recursion for a target containing a puncture:
    /// (2g-1+s-a) ⟨τ_{0,0} ∏ τ⟩_g = Quad + Lower.
    fn puncture(&mut self, key: &CorrelatorKey) -> Rat {
        let r = self.r as i64;
        let g = key.g;
        let punct = key
            .ins
            .iter()
            .position(|t| t.is_puncture())
            .expect("puncture route without puncture");
        let mut rest = key.ins.clone();
        rest.remove(punct);
        let s = rest.len();
        assert!(
            s >= 1,
            "bare puncture should have failed the dimension gate"
        );
        let a = rest.iter().filter(|t| t.n == 0).count() as i64;
        let denom = 2 * g as i64 - 1 + s as i64 - a;
        assert!(denom >= 1);

        let code = |t: &Insertion| r * t.n as i64 + t.m as i64;

        // Quad: (1/2) Σ_{I ⊔ J} Σ_{g'} ⟨τ00 τ0m' ∏_I⟩_{g'} ⟨τ0,r-2-m' τ00 ∏_J⟩_{g-g'},
        // omitting the two absorbed singleton shapes.
        assert!(s < 63, "insertion count too large for subset enumeration");
        let mut quad = Rat::zero();
        for mask in 0..(1u64 << s) {
            let mut i_part: Vec<Insertion> = Vec::new();
            let mut j_part: Vec<Insertion> = Vec::new();
            for (b, t) in rest.iter().enumerate() {
                if mask & (1 << b) != 0 {
                    i_part.push(*t);
                } else {
                    j_part.push(*t);
                }
            }
            let isum: i64 = i_part.iter().map(code).sum();
            for gp in 0..=g {
                if gp == 0 && i_part.len() == 1 && i_part[0].n == 0 {
                    continue; // absorbed into the left-hand side
                }
                if gp == g && j_part.len() == 1 && j_part[0].n == 0 {
                    continue;
                }
                // m' pinned by the dimension of the I-side factor
                let mprime = (r + 1) * (2 * gp as i64 - 2) + r * (i_part.len() as i64 + 2) - isum;
                if !(0..=r - 2).contains(&mprime) {
                    continue;
                }
                // evaluate the lower-genus side first; with the exclusions in
                // place a nonzero value forces the same-genus partner to have
                // strictly fewer insertions than the target
                let mut left = i_part.clone();
                left.push(Insertion::new(0, 0));
                left.push(Insertion::new(0, mprime as u32));
                let left_key = CorrelatorKey::new(gp, left);
                let mut right = j_part.clone();
                right.push(Insertion::new(0, 0));
                right.push(Insertion::new(0, (r - 2 - mprime) as u32));
                let right_key = CorrelatorKey::new(g - gp, right);
                let (first, second) = if gp <= g - gp {
                    (left_key, right_key)
                } else {
                    (right_key, left_key)
                };
                let fv = self.eval(first);
                if fv.is_zero() {
                    continue;
                }
                // a nonzero lower-genus side forces the partner to drop genus
                // or insertion count, which is the termination measure
                debug_assert!(
                    second.g < g || second.ins.len() < key.ins.len(),
                    "puncture quad factor fails the (genus, count) measure"
                );
                let sv = self.eval(second);
                quad += fv * sv;
            }
        }
        quad /= rat_int(2);

        // Lower: monomials of W_r distribute the insertions over their
        // factors and drop the genus by half the total derivative order.
        let wr_terms: Vec<(Rat, Vec<(u32, u32)>, u32)> = self
            .wr
            .terms()
            .map(|(m, c)| {
                let pairs = m.pairs().to_vec();
                let deficit = (m.total_deriv_order() / 2) as u32;
                (c.clone(), pairs, deficit)
            })
            .collect();
        let mut lower = Rat::zero();
        for (c, blocks, deficit) in wr_terms {
            if deficit > g {
                continue;
            }
            let glow = g - deficit;
            let kb = blocks.len();
            // ordered assignment of each insertion to one of the kb blocks
            let mut assigned: Vec<Vec<Insertion>> = vec![Vec::new(); kb];
            let sum = self.lower_assign(&rest, 0, &blocks, &mut assigned, glow);
            lower += c * sum;
        }

        (quad + lower) / rat_int(denom)
    }

    fn lower_assign(
        &mut self,
        rest: &[Insertion],
        pos: usize,
        blocks: &[(u32, u32)],
        assigned: &mut Vec<Vec<Insertion>>,
        glow: u32,
    ) -> Rat {
        if pos == rest.len() {
            return self.lower_genus_split(blocks, assigned, 0, glow);
        }
        let mut total = Rat::zero();
        for k in 0..blocks.len() {
            assigned[k].push(rest[pos]);
            total += self.lower_assign(rest, pos + 1, blocks, assigned, glow);
            assigned[k].pop();
        }
        total
    }

    fn lower_genus_split(
        &mut self,
        blocks: &[(u32, u32)],
        assigned: &Vec<Vec<Insertion>>,
        k: usize,
        remaining: u32,
    ) -> Rat {
        // distribute `remaining` genus over blocks k.. ; evaluate factor k
        // for each choice and recurse
        let (i_k, j_k) = blocks[k];
        let last = k + 1 == blocks.len();
        let mut total = Rat::zero();
        let choices = if last {
            remaining..=remaining
        } else {
            0..=remaining
        };
        for gk in choices {
            let mut ins: Vec<Insertion> = assigned[k].clone();
            for _ in 0..=j_k {
                ins.push(Insertion::new(0, 0));
            }
            ins.push(Insertion::new(0, i_k));
            let fv = self.eval(CorrelatorKey::new(gk, ins));
            if fv.is_zero() {
                continue;
            }
            if last {
                total += fv;
            } else {
                total += fv * self.lower_genus_split(blocks, assigned, k + 1, remaining - gk);
            }
        }
        total
    }

    /// No puncture present: lift the maximal descendent through the string
    /// equation, ⟨∏τ⟩_g = ⟨τ00 τ_{n1+1,m1} ∏'⟩_g - Σ_j ⟨τ_{n1+1,m1} τ_{nj-1,mj} ∏''⟩_g.
    fn string_lift(&mut self, key: &CorrelatorKey) -> Rat {
        let s = key.ins.len();
        let lead = key.ins[s - 1]; // maximal (n, m); n >= 1 by dimension
        assert!(
            lead.n >= 1,
            "all-primary positive-genus key should have failed the gate"
        );
        let rest = &key.ins[..s - 1];
        let lifted = Insertion::new(lead.n + 1, lead.m);

        let mut first = rest.to_vec();
        first.push(lifted);
        first.push(Insertion::new(0, 0));
        let mut total = self.eval(CorrelatorKey::new(key.g, first));

        for (j, t) in rest.iter().enumerate() {
            if t.n == 0 {
                continue;
            }
            let mut ins: Vec<Insertion> = rest
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != j)
                .map(|(_, u)| *u)
                .collect();
            ins.push(lifted);
            ins.push(Insertion::new(t.n - 1, t.m));
            // Σ n^2 strictly increases at fixed (g, count, Σn), bounding the
            // depth of this branch
            total -= self.eval(CorrelatorKey::new(key.g, ins));
        }
        total
    }
}
