//! The base curve: the projective line over a prime field F_q.
//!
//! Closed points are the point at infinity plus the monic irreducible
//! polynomials in the affine coordinate x = X/Y. A global section of O(d) is a
//! binary form Σ c_k X^k Y^{d−k}, stored by its coefficient vector; the point
//! at infinity is the zero locus of Y.

pub mod poly;

mod divisor;
mod kernel;
mod section;

pub use divisor::{divisor_gcd, effective_divisors, EffectiveDivisor};
pub use kernel::{kernel_count, rank_mod_p};
pub use section::{gcd_degree, section_of, vanishing_divisor, Section};

use crate::error::{Error, Result};
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CurveContext {
    pub q: u64,
}

impl CurveContext {
    pub fn new(q: u64) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::input("q", format!("{q} is not prime")));
        }
        if q > (1 << 31) {
            return Err(Error::input("q", "prime too large"));
        }
        Ok(CurveContext { q })
    }

    pub fn genus(&self) -> u32 {
        0
    }

    pub fn class_number(&self) -> u32 {
        1
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Dimension of the space of sections of O(d) on the projective line.
pub fn h0(d: i64) -> u64 {
    (d + 1).max(0) as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ClosedPoint {
    Infinity,
    /// Monic irreducible polynomial, coefficients low to high.
    Finite(Vec<u64>),
}

impl ClosedPoint {
    pub fn degree(&self) -> u32 {
        match self {
            ClosedPoint::Infinity => 1,
            ClosedPoint::Finite(f) => (f.len() - 1) as u32,
        }
    }

    /// The binary form cutting out this point.
    pub fn form(&self) -> Section {
        match self {
            ClosedPoint::Infinity => Section::from_coeffs(vec![1, 0]),
            ClosedPoint::Finite(f) => Section::from_coeffs(f.clone()),
        }
    }
}

impl Ord for ClosedPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        use ClosedPoint::*;
        match (self, other) {
            (Infinity, Infinity) => Ordering::Equal,
            (Infinity, _) => Ordering::Less,
            (_, Infinity) => Ordering::Greater,
            (Finite(a), Finite(b)) => {
                a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev()))
            }
        }
    }
}

impl PartialOrd for ClosedPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for ClosedPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClosedPoint::Infinity => write!(f, "inf"),
            ClosedPoint::Finite(c) => {
                let s: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "[{}]", s.join(" "))
            }
        }
    }
}

/// Monic irreducibles of exactly degree `n`, in increasing order.
pub fn irreducibles_of_degree(q: u64, n: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let total = q.pow(n as u32);
    for code in 0..total {
        let mut f = Vec::with_capacity(n + 1);
        let mut c = code;
        for _ in 0..n {
            f.push(c % q);
            c /= q;
        }
        f.push(1);
        if poly::is_irreducible(&f, q) {
            out.push(f);
        }
    }
    out
}

/// Infinity plus all monic irreducibles of degree ≤ `max_degree`, sorted.
pub fn closed_points(ctx: CurveContext, max_degree: u32) -> Vec<ClosedPoint> {
    let mut pts = vec![ClosedPoint::Infinity];
    for n in 1..=max_degree as usize {
        pts.extend(irreducibles_of_degree(ctx.q, n).into_iter().map(ClosedPoint::Finite));
    }
    pts
}

fn moebius_int(mut n: u64) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Number of closed points of degree `f` on the projective line over F_q,
/// from the necklace formula; no enumeration.
pub fn closed_point_count(q: u64, f: u32) -> u128 {
    let f64_ = f as u64;
    let mut s: i128 = 0;
    for e in 1..=f64_ {
        if f64_ % e == 0 {
            s += moebius_int(f64_ / e) as i128 * (q as i128).pow(e as u32);
        }
    }
    let n = (s / f as i128) as u128;
    if f == 1 { n + 1 } else { n }
}
