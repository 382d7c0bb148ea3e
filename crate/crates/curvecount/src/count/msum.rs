//! The sums ℳ(d, G) and ℳ_{j0,η}(d, G) over I-tuples of divisors, and the
//! coefficients of the Euler product of local series they must match.

use super::hom::Odometer;
use super::{big_pow, Budget, Counter};
use crate::curve::{closed_point_count, closed_points, divisor_gcd, effective_divisors, EffectiveDivisor};
use crate::error::Result;
use crate::genfun::LocalSystem;
use crate::linalg::Q;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use std::collections::BTreeMap;

impl Counter {
    fn d_tuples(&self, d: &[u32], budget: Budget) -> Result<Vec<Vec<EffectiveDivisor>>> {
        let needed: u128 = d.iter().map(|&x| super::hom::divisor_count(self.q(), x as i64)).product();
        budget.check("ℳ enumeration", needed)?;
        let options: Vec<Vec<EffectiveDivisor>> = d.iter().map(|&x| effective_divisors(self.ctx, x).collect()).collect();
        Ok(Odometer::new(options.iter().map(|o| o.len()).collect())
            .map(|t| t.iter().enumerate().map(|(k, &c)| options[k][c].clone()).collect())
            .collect())
    }

    /// ℳ(d, G) = Σ_{deg D = d} ν(G, D)·q^{deg gcd_j(G_j + Σ b_ij D_i)}.
    pub fn m_sum(&self, d: &[u32], g: &[EffectiveDivisor], budget: Budget) -> Result<BigInt> {
        if g.iter().any(|x| !x.is_reduced()) {
            return Ok(BigInt::zero());
        }
        let mut total = BigInt::zero();
        for dt in self.d_tuples(d, budget)? {
            let nu = self.nu.nu_divisor(g, &dt);
            if nu.is_zero() {
                continue;
            }
            let gcd = divisor_gcd(&self.block_divisors(g, &dt)).degree();
            total += nu * big_pow(self.q(), gcd as u32);
        }
        Ok(total)
    }

    /// ℳ_{j0,η}(d, G) = Σ |ν|·q^{deg gcd_J + η·deg gcd_{J∖j0}}.
    pub fn m_j0_eta(&self, d: &[u32], g: &[EffectiveDivisor], j0: usize, eta: f64, budget: Budget) -> Result<f64> {
        if g.iter().any(|x| !x.is_reduced()) {
            return Ok(0.0);
        }
        let q = self.q() as f64;
        let mut total = 0.0;
        for dt in self.d_tuples(d, budget)? {
            let nu = self.nu.nu_divisor(g, &dt);
            if nu.is_zero() {
                continue;
            }
            let blocks = self.block_divisors(g, &dt);
            let all = divisor_gcd(&blocks).degree() as f64;
            let rest: Vec<EffectiveDivisor> =
                blocks.iter().enumerate().filter(|(j, _)| *j != j0).map(|(_, b)| b.clone()).collect();
            let without = divisor_gcd(&rest).degree() as f64;
            total += nu.magnitude().to_f64().unwrap_or(f64::INFINITY) * q.powf(all + eta * without);
        }
        Ok(total)
    }
}

type Series = BTreeMap<Vec<u32>, Q>;

fn mul_total_capped(a: &Series, b: &Series, cap: u32) -> Series {
    let mut out = Series::new();
    for (ea, ca) in a {
        let da: u32 = ea.iter().sum();
        for (eb, cb) in b {
            if da + eb.iter().sum::<u32>() > cap {
                continue;
            }
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(Q::zero) += ca * cb;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Coefficients, up to total t-degree `cap`, of Π_v F_{v(G)}(q_v, τ_v, t^{f_v})
/// where τ_v = q_v^{η} (η = 0 gives the plain series). `j0` selects the
/// |ν|-weighted j₀-series instead of F. G is given per J-position.
pub fn euler_coefficients(
    sys: &LocalSystem,
    q: u64,
    g: &[EffectiveDivisor],
    j0: Option<(usize, u32)>,
    cap: u32,
) -> Result<BTreeMap<Vec<u32>, Q>> {
    let nt = sys.n_i();
    if g.iter().any(|x| !x.is_reduced()) {
        return Ok(BTreeMap::new());
    }
    let ctx = crate::curve::CurveContext::new(q)?;
    let pts = closed_points(ctx, cap.max(1));
    let local = |pattern: &[u32], f: u32| -> Result<Series> {
        let qv = Q::from_integer(big_pow(q, f));
        let (poly, tau) = match j0 {
            None => (sys.local_f_series(pattern, cap)?.f.poly, Q::from_integer(1.into())),
            Some((j, eta)) => (sys.j0_direct(pattern, j, cap).0.poly, num_traits::pow(qv.clone(), eta as usize)),
        };
        Ok(poly
            .eval_rho_tau(&qv, &tau)
            .into_iter()
            .map(|(e, c)| (e.iter().map(|x| x * f).collect::<Vec<u32>>(), c))
            .filter(|(e, _)| e.iter().sum::<u32>() <= cap)
            .collect())
    };
    let mut one = Series::new();
    one.insert(vec![0; nt], Q::from_integer(1.into()));
    let mut total = one.clone();
    let mut special_per_degree = vec![0u128; cap as usize + 1];
    for p in &pts {
        let pattern: Vec<u32> = g.iter().map(|x| x.multiplicity(p)).collect();
        if pattern.iter().all(|&m| m == 0) {
            continue;
        }
        let f = p.degree();
        if f > cap {
            continue;
        }
        special_per_degree[f as usize] += 1;
        total = mul_total_capped(&total, &local(&pattern, f)?, cap);
    }
    let zero_pattern = vec![0; g.len()];
    for f in 1..=cap {
        let factor = local(&zero_pattern, f)?;
        let copies = closed_point_count(q, f) - special_per_degree[f as usize];
        for _ in 0..copies {
            total = mul_total_capped(&total, &factor, cap);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{ClosedPoint, CurveContext};
    use crate::surface::builtin_sextic_a1;

    #[test]
    fn trivial_and_nonreduced() {
        let cox = builtin_sextic_a1();
        let c = Counter::with_default_choice(&cox, CurveContext::new(2).unwrap()).unwrap();
        let zero = vec![EffectiveDivisor::zero(); 3];
        assert_eq!(c.m_sum(&[0, 0, 0, 0], &zero, Budget::default()).unwrap(), BigInt::from(1));
        let mut g = zero.clone();
        g[0] = EffectiveDivisor::from_pairs([(ClosedPoint::Infinity, 2)]);
        assert_eq!(c.m_sum(&[1, 0, 0, 0], &g, Budget::default()).unwrap(), BigInt::zero());
    }

    #[test]
    fn one_unit_of_eta_degree() {
        let cox = builtin_sextic_a1();
        let choice = cox.default_choice().unwrap();
        let c = Counter::new(&cox, &choice, CurveContext::new(2).unwrap()).unwrap();
        let sys = LocalSystem::new(&cox, &choice).unwrap();
        let zero = vec![EffectiveDivisor::zero(); 3];
        let direct = c.m_sum(&[1, 0, 0, 0], &zero, Budget::default()).unwrap();
        let euler = euler_coefficients(&sys, 2, &zero, None, 1).unwrap();
        assert_eq!(euler.get(&vec![1, 0, 0, 0]).cloned().unwrap_or_default(), Q::from_integer(direct));
    }
}
