//! Exact multivariate polynomials over Z in the variables ρ, τ, t₁..tₙ, and the
//! univariate Laurent objects obtained by specializing t to powers of ρ.

use crate::linalg::Q;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

pub const RHO: usize = 0;
pub const TAU: usize = 1;

/// Exponent vectors are `[ρ, τ, t₁, …, tₙ]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    nt: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MultiPoly {
    pub fn zero(nt: usize) -> Self {
        MultiPoly { nt, terms: BTreeMap::new() }
    }

    pub fn one(nt: usize) -> Self {
        Self::monomial(nt, 1, 0, 0, &vec![0; nt])
    }

    pub fn monomial(nt: usize, coeff: impl Into<BigInt>, rho: u32, tau: u32, t: &[u32]) -> Self {
        let mut p = Self::zero(nt);
        let mut e = vec![rho, tau];
        e.extend_from_slice(t);
        e.resize(nt + 2, 0);
        p.add_term(e, coeff.into());
        p
    }

    /// t_i alone.
    pub fn t(nt: usize, i: usize) -> Self {
        let mut e = vec![0; nt];
        e[i] = 1;
        Self::monomial(nt, 1, 0, 0, &e)
    }

    pub fn rho(nt: usize) -> Self {
        Self::monomial(nt, 1, 1, 0, &[])
    }

    pub fn tau(nt: usize) -> Self {
        Self::monomial(nt, 1, 0, 1, &[])
    }

    pub fn n_t(&self) -> usize {
        self.nt
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        debug_assert_eq!(e.len(), self.nt + 2);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = Self::zero(self.nt);
        if k.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_capped(other, None)
    }

    /// Product dropping every monomial with some t-exponent above `cap`.
    pub fn mul_capped(&self, other: &Self, cap: Option<u32>) -> Self {
        let mut out = Self::zero(self.nt);
        for (e1, c1) in &self.terms {
            'inner: for (e2, c2) in &other.terms {
                let mut e = Vec::with_capacity(e1.len());
                for (k, (a, b)) in e1.iter().zip(e2).enumerate() {
                    let s = a + b;
                    if k >= 2 && cap.is_some_and(|n| s > n) {
                        continue 'inner;
                    }
                    e.push(s);
                }
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    /// Multiply by a monomial ρ^r τ^s t^d.
    pub fn shift(&self, rho: u32, tau: u32, t: &[u32]) -> Self {
        let mut out = Self::zero(self.nt);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[RHO] += rho;
            e2[TAU] += tau;
            for (k, d) in t.iter().enumerate() {
                e2[2 + k] += d;
            }
            out.terms.insert(e2, c.clone());
        }
        out
    }

    pub fn truncate(&self, cap: u32) -> Self {
        let mut out = Self::zero(self.nt);
        for (e, c) in &self.terms {
            if e[2..].iter().all(|&x| x <= cap) {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Substitute τ = 1.
    pub fn at_tau_one(&self) -> Self {
        let mut out = Self::zero(self.nt);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[TAU] = 0;
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Re-embed into `nt` t-variables, sending old t_k to new t_{map[k]}.
    pub fn remap_t(&self, nt: usize, map: &[usize]) -> Self {
        let mut out = Self::zero(nt);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; nt + 2];
            e2[RHO] = e[RHO];
            e2[TAU] = e[TAU];
            for (k, &m) in map.iter().enumerate() {
                e2[2 + m] += e[2 + k];
            }
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Swap the roles of ρ and τ.
    pub fn swap_rho_tau(&self) -> Self {
        let mut out = Self::zero(self.nt);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.swap(RHO, TAU);
            out.terms.insert(e2, c.clone());
        }
        out
    }

    /// Evaluate ρ and τ at rationals, leaving a polynomial in t only.
    pub fn eval_rho_tau(&self, rho: &Q, tau: &Q) -> BTreeMap<Vec<u32>, Q> {
        let mut out: BTreeMap<Vec<u32>, Q> = BTreeMap::new();
        for (e, c) in &self.terms {
            let v = BigRational::from_integer(c.clone()) * pow_q(rho, e[RHO]) * pow_q(tau, e[TAU]);
            let slot = out.entry(e[2..].to_vec()).or_insert_with(Q::zero);
            *slot += v;
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    /// Specialize ρ = Q, τ = Q^η (η integer here), t_i = Q^{−1}: a Laurent
    /// polynomial in Q.
    pub fn at_inverse_powers(&self, tau_weight: i64) -> Laurent {
        let mut out = Laurent::zero();
        for (e, c) in &self.terms {
            let k = e[RHO] as i64 + tau_weight * e[TAU] as i64 - e[2..].iter().map(|&x| x as i64).sum::<i64>();
            out.add_term(k, c.clone());
        }
        out
    }

    /// First monomial (in term order) where the two polynomials differ.
    pub fn first_difference(&self, other: &Self) -> Option<(Vec<u32>, BigInt, BigInt)> {
        let d = self.sub(other);
        d.terms.iter().next().map(|(e, _)| (e.clone(), self.coeff(e), other.coeff(e)))
    }

    pub fn format_monomial(e: &[u32]) -> String {
        let mut parts = Vec::new();
        for (k, &x) in e.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let name = match k {
                RHO => "rho".to_string(),
                TAU => "tau".to_string(),
                _ => format!("t{}", k - 1),
            };
            parts.push(if x == 1 { name } else { format!("{name}^{x}") });
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mono = Self::format_monomial(e);
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let body = if mono == "1" {
                mag.to_string()
            } else if mag.is_one() {
                mono
            } else {
                format!("{mag}*{mono}")
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, " {sign} {body}")?;
            }
            first = false;
        }
        Ok(())
    }
}

pub fn pow_q(x: &Q, e: u32) -> Q {
    num_traits::pow(x.clone(), e as usize)
}

/// Laurent polynomial in one variable Q with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Laurent {
    terms: BTreeMap<i64, BigInt>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { terms: BTreeMap::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, k: i64) -> Self {
        let mut l = Self::zero();
        l.add_term(k, c.into());
        l
    }

    pub fn add_term(&mut self, k: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.terms.iter()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &o.terms {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        let mut out = Self::zero();
        for (&k, c) in &self.terms {
            out.add_term(k, c * s);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (&a, c) in &self.terms {
            for (&b, d) in &o.terms {
                out.add_term(a + b, c * d);
            }
        }
        out
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut s = Q::zero();
        for (&k, c) in &self.terms {
            let p = if k >= 0 { pow_q(x, k as u32) } else { pow_q(&x.recip(), (-k) as u32) };
            s += BigRational::from_integer(c.clone()) * p;
        }
        s
    }
}

/// Quotient of two Laurent polynomials, compared by cross-multiplication.
#[derive(Debug, Clone)]
pub struct RatFn {
    pub num: Laurent,
    pub den: Laurent,
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn { num: Laurent::zero(), den: Laurent::constant(1) }
    }

    pub fn from_laurent(l: Laurent) -> Self {
        RatFn { num: l, den: Laurent::constant(1) }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFn { num: self.num.add(&o.num), den: self.den.clone() };
        }
        RatFn { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }
    }

    pub fn mul_laurent(&self, l: &Laurent) -> Self {
        RatFn { num: self.num.mul(l), den: self.den.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn equals(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.num.eval(x) / self.den.eval(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_and_truncation() {
        let one = MultiPoly::one(1);
        let t = MultiPoly::t(1, 0);
        let a = one.sub(&t);
        let b = one.add(&t);
        let p = a.mul(&b);
        assert_eq!(p, one.sub(&t.mul(&t)));
        assert_eq!(p.truncate(1), one);
        assert_eq!(a.mul_capped(&b, Some(1)), one);
        assert_eq!(format!("{}", a), "1 - t1");
    }

    #[test]
    fn inverse_specialization() {
        // ρ t₁ − 1 at ρ = Q, t = 1/Q is zero.
        let p = MultiPoly::monomial(1, 1, 1, 0, &[1]).sub(&MultiPoly::one(1));
        assert!(p.at_inverse_powers(0).is_zero());
    }

    #[test]
    fn ratfn_sum() {
        // 1/(1−Q) − 1/(1−Q) = 0 through different denominators.
        let d = Laurent::constant(1).sub(&Laurent::monomial(1, 1));
        let a = RatFn { num: Laurent::constant(1), den: d.clone() };
        let b = RatFn { num: Laurent::constant(-2), den: d.mul(&Laurent::constant(2)) };
        assert!(a.add(&b).is_zero());
    }
}
