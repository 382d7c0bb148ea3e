//! Points of the universal torsor over F_q, stratified by which coordinates
//! vanish, and the surface point counts they determine.

use super::{as_integer, big_pow, nonnegative, Budget};
use crate::error::{Error, Result};
use crate::genfun::Laurent;
use crate::linalg::Q;
use crate::moebius::Moebius;
use crate::surface::{AdmissibleChoice, CoxPresentation};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// #𝒯_{X,e}(F_q)/q^{dim 𝒯} as a Laurent polynomial in q, for e ⊆ generators
/// given as a mask:
/// q^{−|e|}[1 + (q−1)·Π_{j: g_j + Σ_{I_j} f_i = 0}(1 − (1−q^{−1})^{#I_j})].
pub fn torsor_laurent(choice: &AdmissibleChoice, e_mask: u32) -> Laurent {
    let one = Laurent::constant(1);
    let one_minus_x = one.sub(&Laurent::monomial(1, -1));
    let mut prod = one.clone();
    for (jp, &j) in choice.j.iter().enumerate() {
        let hit = e_mask >> j & 1 == 1 || e_mask & choice.block_mask(jp) != 0;
        if hit {
            continue;
        }
        let k = choice.blocks[jp].len();
        let power = (0..k).fold(one.clone(), |acc, _| acc.mul(&one_minus_x));
        prod = prod.mul(&one.sub(&power));
    }
    let q_minus_one = Laurent::monomial(1, 1).sub(&one);
    let bracket = one.add(&q_minus_one.mul(&prod));
    bracket.mul(&Laurent::monomial(1, -(e_mask.count_ones() as i64)))
}

pub fn torsor_count_closed(choice: &AdmissibleChoice, e_mask: u32, q: u64) -> Q {
    torsor_laurent(choice, e_mask).eval(&Q::from_integer(BigInt::from(q)))
}

fn relation_value(cox: &CoxPresentation, s: &[u64], q: u64) -> u64 {
    let mut total = 0u64;
    for m in &cox.relation {
        let mut v = s[m.linear];
        for &(i, b) in &m.factors {
            for _ in 0..b {
                v = v * s[i] % q;
            }
        }
        total = (total + v) % q;
    }
    total
}

/// Visit every s ∈ F_q^n with s_i = 0 on `zero_mask`.
fn for_each_point(n: usize, q: u64, zero_mask: u32, mut f: impl FnMut(&[u64])) {
    let free: Vec<usize> = (0..n).filter(|i| zero_mask >> i & 1 == 0).collect();
    let mut s = vec![0u64; n];
    loop {
        f(&s);
        let mut k = 0;
        loop {
            if k == free.len() {
                return;
            }
            let i = free[k];
            s[i] += 1;
            if s[i] < q {
                break;
            }
            s[i] = 0;
            k += 1;
        }
    }
}

fn check_enumerable(cox: &CoxPresentation, q: u64, free: u32, budget: Budget) -> Result<()> {
    if cox.relation.is_empty() {
        return Err(Error::input("relation", "relation has no monomials"));
    }
    if !crate::curve::is_prime(q) {
        return Err(Error::input("q", format!("{q} is not prime")));
    }
    budget.check("torsor enumeration", (q as u128).saturating_pow(free))
}

/// Exact number of s ∈ F_q^𝒥 with s_i = 0 for i ∈ e and F(s) = 0.
pub fn torsor_count_brute(cox: &CoxPresentation, e_mask: u32, q: u64, budget: Budget) -> Result<BigInt> {
    let n = cox.n_generators();
    check_enumerable(cox, q, n as u32 - (e_mask.count_ones()), budget)?;
    let mut count = 0u64;
    for_each_point(n, q, e_mask, |s| {
        if relation_value(cox, s, q) == 0 {
            count += 1;
        }
    });
    Ok(BigInt::from(count))
}

/// Σ_e μ°(e)·#𝒯_{X,e}/q^{dim 𝒯} as a Laurent polynomial in q. Evaluated at
/// q_v it is the local density (1−q_v^{−1})^ρ·#X(κ_v)/q_v^{dim X}.
pub fn euler_local_factor(cox: &CoxPresentation, choice: &AdmissibleChoice) -> Laurent {
    let mu = Moebius::new(cox);
    let mut total = Laurent::zero();
    for e in 0..1u32 << cox.n_generators() {
        let m = mu.mu_mask(e);
        if m != 0 {
            total = total.add(&torsor_laurent(choice, e).scale(&BigInt::from(m)));
        }
    }
    total
}

pub fn is_prime_power(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let p = (2..=n).find(|d| n % d == 0).unwrap();
    let mut m = n;
    while m % p == 0 {
        m /= p;
    }
    m == 1
}

/// #X(F_{q_v}) by inverting the torsor stratification; no enumeration.
pub fn surface_point_count(cox: &CoxPresentation, q_v: u64) -> Result<BigInt> {
    if !is_prime_power(q_v) {
        return Err(Error::input("q_v", format!("{q_v} is not a prime power")));
    }
    let choice = cox.default_choice()?;
    let qq = Q::from_integer(BigInt::from(q_v));
    let density = euler_local_factor(cox, &choice).eval(&qq);
    let rho = cox.picard_rank;
    let scale = num_traits::pow(qq.clone(), cox.dim()) / num_traits::pow(Q::one() - qq.recip(), rho);
    let x = as_integer(&(density * scale), "surface point count")?;
    nonnegative(x, "surface point count")
}

/// #X(F_q) as (torsor points whose vanishing set is a face)/(q−1)^ρ.
pub fn surface_count_enumerated(cox: &CoxPresentation, q: u64, budget: Budget) -> Result<BigInt> {
    let n = cox.n_generators();
    check_enumerable(cox, q, n as u32, budget)?;
    let mut count = 0u64;
    for_each_point(n, q, 0, |s| {
        let zeros = s.iter().enumerate().filter(|(_, &v)| v == 0).fold(0u32, |m, (i, _)| m | 1 << i);
        if cox.in_incidence(zeros) && relation_value(cox, s, q) == 0 {
            count += 1;
        }
    });
    let torus = big_pow(q - 1, cox.picard_rank as u32);
    let count = BigInt::from(count);
    if !(&count % &torus).is_zero() {
        return Err(Error::check(format!("{count} good torsor points not divisible by (q−1)^ρ = {torus}")));
    }
    Ok(count / torus)
}
