//! The leading constant γ(X) as a truncated Euler product with a tail bound,
//! the principal constants c_princ(G), and the local identity linking the
//! numerators H_g to the surface point counts.

use super::torsor::{euler_local_factor, surface_point_count};
use crate::curve::{closed_point_count, closed_points, CurveContext, EffectiveDivisor};
use crate::error::{Error, Result};
use crate::genfun::{Laurent, LocalSystem, RatFn};
use crate::linalg::Q;
use crate::surface::CoxPresentation;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq)]
pub struct GammaRow {
    pub b: u32,
    /// Partial product over closed points of degree ≤ b.
    pub value: f64,
    /// |log(value_b / value_{b−1})|; zero for b = 0.
    pub log_step: f64,
    /// Bound on |γ/value_b − 1| from the omitted factors.
    pub tail_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaReport {
    pub q: u64,
    pub prefactor: f64,
    /// Σ_{k≥2} |c_k| for the local density 1 + Σ c_k q_v^{−k}.
    pub a_prime: f64,
    pub rows: Vec<GammaRow>,
    /// q^{dim}·Σ_G c_princ(G) q^{−deg G}, truncated at the last b.
    pub c_princ_side: f64,
    pub relative_difference: f64,
}

impl GammaReport {
    pub fn gamma(&self) -> f64 {
        self.rows.last().map_or(self.prefactor, |r| r.value)
    }

    pub fn tail_bound(&self) -> f64 {
        self.rows.last().map_or(f64::INFINITY, |r| r.tail_bound)
    }

    /// The c_princ side agrees with γ within the reported tail bound.
    pub fn consistent(&self) -> bool {
        self.relative_difference <= self.tail_bound()
    }
}

/// The local density (1−q_v^{−1})^ρ·#X(κ_v)/q_v^{dim X} as a polynomial in
/// x = q_v^{−1}: coefficients c_0, c_1, … with c_0 = 1 and c_1 = 0 checked.
pub fn local_factor(cox: &CoxPresentation) -> Result<Vec<BigInt>> {
    let l = euler_local_factor(cox, &cox.default_choice()?);
    let mut coeffs: Vec<BigInt> = Vec::new();
    for (&k, c) in l.terms() {
        if k > 0 {
            return Err(Error::check(format!("local density has a positive power q^{k}")));
        }
        let idx = (-k) as usize;
        if coeffs.len() <= idx {
            coeffs.resize(idx + 1, BigInt::zero());
        }
        coeffs[idx] = c.clone();
    }
    if coeffs.first() != Some(&BigInt::one()) || coeffs.get(1).is_some_and(|c| !c.is_zero()) {
        return Err(Error::check(format!("local density is not 1 + O(q^-2): {coeffs:?}")));
    }
    Ok(coeffs)
}

fn q_of(x: u64) -> Q {
    Q::from_integer(BigInt::from(x))
}

fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Bound on the relative error from omitting all points of degree > b, when
/// each omitted factor is 1 + u with |u| ≤ A'·q_v^{−2}. Uses N_f ≤ q^f + 1 and
/// |log(1+u)| ≤ 2|u| for |u| ≤ 1/2.
fn tail_bound(q: u64, a_prime: f64, b: u32) -> f64 {
    let qf = q as f64;
    let worst = a_prime * qf.powi(-2 * (b as i32 + 1));
    if worst > 0.5 {
        return f64::INFINITY;
    }
    let r = qf.powi(-(b as i32 + 1));
    let sum = r / (1.0 - 1.0 / qf) + r * r / (1.0 - 1.0 / (qf * qf));
    (2.0 * a_prime * sum).exp_m1()
}

/// Σ_g H_g(Q, Q^{−1})·Q^{−|g|} as a rational function of Q, with
/// H_g = H_{1,g} + H_{2,g} from the closed forms.
pub fn h_sum(sys: &LocalSystem) -> Result<RatFn> {
    let mut total = RatFn::zero();
    for g in sys.all_g() {
        let size: u32 = g.iter().sum();
        let h = h_value(sys, &g)?;
        total = total.add(&h.mul_laurent(&Laurent::monomial(1, -(size as i64))));
    }
    Ok(total)
}

fn h_value(sys: &LocalSystem, g: &[u32]) -> Result<RatFn> {
    let h1 = RatFn::from_laurent(sys.h1_closed(g).at_inverse_powers(0));
    Ok(h1.add(&sys.h2_closed(g)?.at_inverse_powers()))
}

/// Both sides of the local identity at q_v, exactly:
/// (Σ_g H_g(q_v, q_v^{−1}) q_v^{−|g|}, (1−q_v^{−1})^ρ·#X(κ_v)/q_v^{dim X}).
pub fn euler_factor_identity(sys: &LocalSystem, q_v: u64) -> Result<(Q, Q)> {
    let qv = q_of(q_v);
    let lhs = h_sum(sys)?.eval(&qv);
    let count = Q::from_integer(surface_point_count(&sys.cox, q_v)?);
    let rhs = count * num_traits::pow(Q::one() - qv.recip(), sys.cox.picard_rank)
        / num_traits::pow(qv, sys.cox.dim());
    Ok((lhs, rhs))
}

fn prefactor(cox: &CoxPresentation, q: u64) -> f64 {
    let qf = q as f64;
    (qf / (qf - 1.0)).powi(cox.picard_rank as i32) * qf.powi(cox.dim() as i32)
}

/// γ(X) over F_q truncated at every degree ≤ b, and the comparison with the
/// c_princ side computed from the local numerators.
pub fn gamma(sys: &LocalSystem, q: u64, b: u32) -> Result<GammaReport> {
    CurveContext::new(q)?;
    let cox = &sys.cox;
    let coeffs = local_factor(cox)?;
    let a_prime: f64 = coeffs.iter().skip(2).map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).sum();
    let density = euler_local_factor(cox, &cox.default_choice()?);
    let hs = h_sum(sys)?;
    let pre = prefactor(cox, q);
    let mut log_gamma = pre.ln();
    let mut log_lhs = pre.ln();
    let mut rows = vec![GammaRow { b: 0, value: pre, log_step: 0.0, tail_bound: tail_bound(q, a_prime, 0) }];
    for f in 1..=b {
        let qv = Q::from_integer(num_traits::pow(BigInt::from(q), f as usize));
        let n_f = closed_point_count(q, f) as f64;
        let step = n_f * to_f64(&density.eval(&qv)).ln();
        log_gamma += step;
        log_lhs += n_f * to_f64(&hs.eval(&qv)).ln();
        rows.push(GammaRow { b: f, value: log_gamma.exp(), log_step: step.abs(), tail_bound: tail_bound(q, a_prime, f) });
    }
    let relative_difference = (log_lhs - log_gamma).exp_m1().abs();
    Ok(GammaReport { q, prefactor: pre, a_prime, rows, c_princ_side: log_lhs.exp(), relative_difference })
}

/// c_princ(G) = (q/(q−1))^ρ·Π_v H_{v(G)}(q_v, q_v^{−1}), truncated at closed
/// points of degree ≤ b. G is given per J-position and must be reduced.
pub fn c_princ(sys: &LocalSystem, q: u64, g: &[EffectiveDivisor], b: u32) -> Result<f64> {
    let ctx = CurveContext::new(q)?;
    if g.iter().any(|x| !x.is_reduced()) {
        return Ok(0.0);
    }
    let qf = q as f64;
    let mut log = (qf / (qf - 1.0)).ln() * sys.cox.picard_rank as f64;
    let zero = vec![0; sys.n_j()];
    let h0 = h_value(sys, &zero)?;
    let mut special = vec![0u128; b as usize + 1];
    let max_support = g.iter().flat_map(|x| x.support().map(|p| p.degree())).max().unwrap_or(0);
    for p in closed_points(ctx, max_support.max(1)) {
        let pattern: Vec<u32> = g.iter().map(|x| x.multiplicity(&p)).collect();
        if pattern.iter().all(|&m| m == 0) {
            continue;
        }
        let f = p.degree();
        if f > b {
            return Err(Error::input("G", format!("support point of degree {f} beyond truncation {b}")));
        }
        special[f as usize] += 1;
        let qv = Q::from_integer(num_traits::pow(BigInt::from(q), f as usize));
        let v = to_f64(&h_value(sys, &pattern)?.eval(&qv));
        if v <= 0.0 {
            return Ok(0.0);
        }
        log += v.ln();
    }
    for f in 1..=b {
        let qv = Q::from_integer(num_traits::pow(BigInt::from(q), f as usize));
        let copies = (closed_point_count(q, f) - special[f as usize]) as f64;
        log += copies * to_f64(&h0.eval(&qv)).ln();
    }
    Ok(log.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::builtin_sextic_a1;

    fn sextic_system() -> LocalSystem {
        let cox = builtin_sextic_a1();
        LocalSystem::new(&cox, &cox.default_choice().unwrap()).unwrap()
    }

    #[test]
    fn sextic_local_factor() {
        // (1−x)^4 (1 + 4x + x²) = 1 − 5x² + 4x³ + 5x⁴ − 4x⁵ − ... expanded exactly.
        let c = local_factor(&builtin_sextic_a1()).unwrap();
        assert_eq!(c[0], BigInt::one());
        assert!(c[1].is_zero());
        let x = Q::new(1.into(), 7.into());
        let direct = num_traits::pow(Q::one() - &x, 4) * (Q::one() + Q::from_integer(4.into()) * &x + &x * &x);
        let poly = c.iter().enumerate().fold(Q::zero(), |acc, (k, ck)| acc + Q::from_integer(ck.clone()) * num_traits::pow(x.clone(), k));
        assert_eq!(poly, direct);
    }

    #[test]
    fn prefactor_only() {
        let r = gamma(&sextic_system(), 2, 0).unwrap();
        assert!((r.gamma() - 64.0).abs() < 1e-12);
    }

    #[test]
    fn identity_small_q() {
        let sys = sextic_system();
        for qv in [2, 3, 4, 5, 8, 9] {
            let (l, r) = euler_factor_identity(&sys, qv).unwrap();
            assert_eq!(l, r, "q_v = {qv}");
        }
    }
}
