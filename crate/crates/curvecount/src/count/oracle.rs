//! Brute-force morphism count: tuples of binary forms on the universal torsor
//! satisfying the relation and the incidence condition at every point.

use super::hom::Odometer;
use super::{big_pow, Budget, DegreeVector};
use crate::curve::{gcd_degree, CurveContext, Section};
use crate::error::{Error, Result};
use crate::surface::CoxPresentation;
use num_bigint::BigInt;
use num_traits::Zero;

/// Minimal generator subsets outside the incidence complex.
pub fn minimal_non_faces(cox: &CoxPresentation) -> Vec<u32> {
    let n = cox.n_generators();
    (1..1u32 << n)
        .filter(|&m| !cox.in_incidence(m) && (0..n).all(|i| m >> i & 1 == 0 || cox.in_incidence(m & !(1 << i))))
        .collect()
}

fn nonzero_forms(q: u64, degree: usize) -> Vec<Section> {
    let total = q.pow(degree as u32 + 1);
    (1..total)
        .map(|mut code| {
            let mut c = Vec::with_capacity(degree + 1);
            for _ in 0..=degree {
                c.push(code % q);
                code /= q;
            }
            Section::from_coeffs(c)
        })
        .collect()
}

/// #Hom for degree y by enumerating every tuple of nonzero forms
/// deg s_i = ⟨y, [𝓔_i]⟩ with F(s) = 0 whose common zeros respect the
/// incidence complex, divided by the torus order (q−1)^ρ.
pub fn hom_count_oracle(cox: &CoxPresentation, y: &DegreeVector, ctx: CurveContext, budget: Budget) -> Result<BigInt> {
    let n = cox.n_generators();
    let degrees: Vec<i64> = (0..n).map(|i| y.pair(cox.class(i))).collect();
    if !y.in_dual_cone(cox) || degrees.iter().any(|&d| d < 0) {
        return Ok(BigInt::zero());
    }
    let q = ctx.q;
    let size: u32 = degrees.iter().map(|&d| d as u32 + 1).sum();
    budget.check("torsor form enumeration", (q as u128).saturating_pow(size))?;
    let options: Vec<Vec<Section>> = degrees.iter().map(|&d| nonzero_forms(q, d as usize)).collect();
    let forbidden = minimal_non_faces(cox);
    let mut count = 0u64;
    for t in Odometer::new(options.iter().map(|o| o.len()).collect()) {
        let s: Vec<&Section> = t.iter().enumerate().map(|(i, &k)| &options[i][k]).collect();
        if !relation_vanishes(cox, &s, ctx) {
            continue;
        }
        let ok = forbidden.iter().all(|&m| {
            let sub: Vec<&Section> = (0..n).filter(|i| m >> i & 1 == 1).map(|i| s[i]).collect();
            gcd_degree(ctx, &sub) == Some(0)
        });
        if ok {
            count += 1;
        }
    }
    let torus = big_pow(q - 1, cox.picard_rank as u32);
    let count = BigInt::from(count);
    if !(&count % &torus).is_zero() {
        return Err(Error::check(format!("torsor solution count {count} not divisible by (q−1)^ρ = {torus}")));
    }
    Ok(count / torus)
}

fn relation_vanishes(cox: &CoxPresentation, s: &[&Section], ctx: CurveContext) -> bool {
    let q = ctx.q;
    let mut total: Option<Vec<u64>> = None;
    for m in &cox.relation {
        let term = m.factors.iter().fold(s[m.linear].clone(), |acc, &(i, b)| acc.mul(&s[i].pow(b, ctx), ctx));
        match total.as_mut() {
            None => total = Some(term.coeffs().to_vec()),
            Some(acc) => {
                for (a, c) in acc.iter_mut().zip(term.coeffs()) {
                    *a = (*a + c) % q;
                }
            }
        }
    }
    total.map_or(true, |v| v.iter().all(|&c| c == 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::builtin_sextic_a1;

    #[test]
    fn sextic_non_faces() {
        let cox = builtin_sextic_a1();
        let labels: Vec<Vec<String>> = minimal_non_faces(&cox).into_iter().map(|m| cox.labels_of(m)).collect();
        assert!(labels.contains(&vec!["eta1".to_string(), "eta2".to_string()]));
        assert!(labels.contains(&vec!["lambda".to_string(), "m1".to_string()]));
        assert!(labels.iter().all(|l| l.len() == 2));
    }

    #[test]
    fn y_zero() {
        let cox = builtin_sextic_a1();
        let y = DegreeVector::zero(4);
        let b = Budget::default();
        assert_eq!(hom_count_oracle(&cox, &y, CurveContext::new(3).unwrap(), b).unwrap(), BigInt::from(2));
        assert_eq!(hom_count_oracle(&cox, &y, CurveContext::new(2).unwrap(), b).unwrap(), BigInt::zero());
    }
}
