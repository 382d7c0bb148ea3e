//! The morphism count #Hom = Σ^y ν·𝒩* and its split n₀ + n₁ + n₂, by one pass
//! over the (G, D) domain of a degree y.

use super::sections::counts_from_forms;
use super::{q_pow, Budget, Counter, DegreeVector};
use crate::curve::{closed_points, effective_divisors, section_of, ClosedPoint, EffectiveDivisor, Section};
use crate::error::{Error, Result};
use crate::linalg::Q;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NTerms {
    pub n0: Q,
    pub n1: Q,
    pub n2: Q,
}

impl NTerms {
    pub fn zero() -> Self {
        NTerms { n0: Q::zero(), n1: Q::zero(), n2: Q::zero() }
    }

    pub fn total(&self) -> Q {
        &self.n0 + &self.n1 + &self.n2
    }

    fn add(&mut self, o: &NTerms) {
        self.n0 += &o.n0;
        self.n1 += &o.n1;
        self.n2 += &o.n2;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomBreakdown {
    pub hom: BigInt,
    pub n: NTerms,
    /// (G, D) pairs with ν ≠ 0.
    pub live_terms: u64,
    /// All (G, D) pairs visited.
    pub visited: u64,
}

/// One row of a count table.
#[derive(Debug, Clone, PartialEq)]
pub struct CountRecord {
    pub y: DegreeVector,
    /// ⟨y, 𝓕_i⟩ for the choice used.
    pub y_choice: Vec<i64>,
    pub anticanonical_degree: i64,
    pub hom: BigInt,
    pub n: NTerms,
    /// γ(X)·q^{⟨y,−𝒦⟩}.
    pub predicted: f64,
    pub oracle: Option<BigInt>,
}

impl CountRecord {
    pub fn ratio(&self) -> f64 {
        to_f64(&self.hom) / self.predicted
    }
}

pub(crate) fn to_f64(x: &BigInt) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::INFINITY)
}

/// An option for one divisor slot: the divisor, its support as point
/// indices, and its canonical section raised to the block exponent.
struct Slot {
    degree: i64,
    support: Vec<u32>,
    form: Section,
}

struct Domain {
    d_slots: Vec<Vec<Slot>>,
    g_slots: Vec<Vec<Slot>>,
    d_bits: Vec<u32>,
    g_bits: Vec<u32>,
}

impl Counter {
    fn domain(&self, y: &DegreeVector, budget: Budget) -> Result<Option<Domain>> {
        if !y.in_dual_cone(&self.cox) {
            return Ok(None);
        }
        let y_i = y.on_choice(&self.cox, &self.choice);
        let y_j = self.y_on_j(y);
        let max_deg = y_i.iter().chain(&y_j).copied().max().unwrap_or(0).max(1) as u32;
        let index: HashMap<ClosedPoint, u32> =
            closed_points(self.ctx, max_deg).into_iter().enumerate().map(|(k, p)| (p, k as u32)).collect();
        let count_d: u128 = y_i.iter().map(|&d| divisor_count(self.q(), d)).product();
        let count_g: u128 = y_j.iter().map(|&d| (0..=d).map(|k| divisor_count(self.q(), k)).sum::<u128>()).product();
        budget.check("(G, D) domain", count_d.saturating_mul(count_g))?;
        let ctx = self.ctx;
        let slot = |div: EffectiveDivisor, power: u32| Slot {
            degree: div.degree() as i64,
            support: div.support().map(|p| index[p]).collect(),
            form: section_of(ctx, &div.scaled(power)),
        };
        let d_slots = y_i
            .iter()
            .enumerate()
            .map(|(ipos, &d)| {
                let power = self.block_of(ipos).map_or(1, |(_, e)| e);
                effective_divisors(ctx, d as u32).map(|div| slot(div, power)).collect()
            })
            .collect();
        let g_slots = y_j
            .iter()
            .map(|&d| {
                (0..=d as u32)
                    .flat_map(|k| effective_divisors(ctx, k))
                    .filter(|div| div.is_reduced())
                    .map(|div| slot(div, 1))
                    .collect()
            })
            .collect();
        Ok(Some(Domain {
            d_slots,
            g_slots,
            d_bits: self.choice.i.iter().map(|&i| 1u32 << i).collect(),
            g_bits: self.choice.j.iter().map(|&j| 1u32 << j).collect(),
        }))
    }

    /// ν_{X,J}(G, D) from the pointwise generator supports.
    fn nu_of(&self, supports: &mut Vec<(u32, u32)>) -> i64 {
        supports.sort_unstable();
        let mut nu = 1i64;
        let mut k = 0;
        while k < supports.len() {
            let pt = supports[k].0;
            let mut mask = 0;
            while k < supports.len() && supports[k].0 == pt {
                mask |= supports[k].1;
                k += 1;
            }
            nu *= self.nu.nu_mask(mask, 0);
            if nu == 0 {
                return 0;
            }
        }
        nu
    }

    /// #Hom and its decomposition in one pass. The identity
    /// n₀ + n₁ + n₂ = #Hom is checked before returning.
    pub fn hom_breakdown(&self, y: &DegreeVector, budget: Budget) -> Result<HomBreakdown> {
        let Some(dom) = self.domain(y, budget)? else {
            return Ok(HomBreakdown { hom: BigInt::zero(), n: NTerms::zero(), live_terms: 0, visited: 0 });
        };
        let l = self.y_on_d_tot(y);
        let y_j = self.y_on_j(y);
        let d_tuples = tuples(&dom.d_slots);
        let partials: Vec<Result<(BigInt, NTerms, u64, u64)>> = d_tuples
            .par_iter()
            .map(|dt| self.sum_over_g(&dom, dt, &y_j, l))
            .collect();
        let mut hom = BigInt::zero();
        let mut n = NTerms::zero();
        let (mut live, mut visited) = (0, 0);
        for p in partials {
            let (h, nt, lv, vs) = p?;
            hom += h;
            n.add(&nt);
            live += lv;
            visited += vs;
        }
        if hom.is_negative() {
            return Err(Error::check(format!("negative morphism count {hom}")));
        }
        if n.total() != Q::from_integer(hom.clone()) {
            return Err(Error::check(format!(
                "n0 + n1 + n2 = {} + {} + {} differs from #Hom = {hom}",
                n.n0, n.n1, n.n2
            )));
        }
        Ok(HomBreakdown { hom, n, live_terms: live, visited })
    }

    fn sum_over_g(&self, dom: &Domain, dt: &[usize], y_j: &[i64], l: i64) -> Result<(BigInt, NTerms, u64, u64)> {
        let q = self.q();
        let mut hom = BigInt::zero();
        let mut n = NTerms::zero();
        let (mut live, mut visited) = (0u64, 0u64);
        let mut base = Vec::new();
        for (k, &choice) in dt.iter().enumerate() {
            base.extend(dom.d_slots[k][choice].support.iter().map(|&p| (p, dom.d_bits[k])));
        }
        // Partial products Π_{i∈I_j} s_{D_i}^{b_ij} per block.
        let d_parts: Vec<Section> = self
            .blocks
            .iter()
            .map(|b| {
                b.iter().fold(Section::one(), |acc, &(i, _)| acc.mul(&dom.d_slots[i][dt[i]].form, self.ctx))
            })
            .collect();
        let mut supports = Vec::new();
        for gt in Odometer::new(dom.g_slots.iter().map(|o| o.len()).collect()) {
            visited += 1;
            supports.clear();
            supports.extend_from_slice(&base);
            for (k, &choice) in gt.iter().enumerate() {
                supports.extend(dom.g_slots[k][choice].support.iter().map(|&p| (p, dom.g_bits[k])));
            }
            let nu = self.nu_of(&mut supports);
            if nu == 0 {
                continue;
            }
            live += 1;
            let w: Vec<Section> =
                gt.iter().enumerate().map(|(k, &c)| dom.g_slots[k][c].form.mul(&d_parts[k], self.ctx)).collect();
            let e: Vec<i64> = gt.iter().enumerate().map(|(k, &c)| y_j[k] - dom.g_slots[k][c].degree).collect();
            let counts = counts_from_forms(self.ctx, &w, &e, l)?;
            let nu_b = BigInt::from(nu);
            hom += &nu_b * &counts.n_star;
            let main = q_pow(q, 2 + counts.shape.theta) * Q::from_integer(nu_b.clone());
            let gap = &main - Q::from_integer(&nu_b * &counts.n_star);
            n.n0 += &main;
            let sh = &counts.shape;
            if sh.psi.iter().any(|&p| p < 0) {
                n.n1 -= &main;
            } else if sh.phi.iter().any(|&f| f >= -1) {
                n.n1 -= &gap;
            } else {
                n.n2 -= &gap;
            }
        }
        Ok((hom, n, live, visited))
    }

    pub fn hom_count(&self, y: &DegreeVector, budget: Budget) -> Result<BigInt> {
        Ok(self.hom_breakdown(y, budget)?.hom)
    }

    pub fn n_terms(&self, y: &DegreeVector, budget: Budget) -> Result<NTerms> {
        Ok(self.hom_breakdown(y, budget)?.n)
    }

    /// n₀ summed the other way: q^{2+⟨y,−𝒦⟩} Σ_G q^{−Σ y_i − |deg G|} ℳ(y_I, G).
    pub fn n0_via_m_sums(&self, y: &DegreeVector, budget: Budget) -> Result<Q> {
        if !y.in_dual_cone(&self.cox) {
            return Ok(Q::zero());
        }
        let q = self.q();
        let y_i = y.on_choice(&self.cox, &self.choice);
        let d: Vec<u32> = y_i.iter().map(|&x| x as u32).collect();
        let mut total = Q::zero();
        for g in self.g_divisor_tuples(y) {
            let m = self.m_sum(&d, &g, budget)?;
            let deg_g: i64 = g.iter().map(|x| x.degree() as i64).sum();
            total += Q::from_integer(m) * q_pow(q, -deg_g);
        }
        let shift = 2 + y.anticanonical_degree(&self.cox) - y_i.iter().sum::<i64>();
        Ok(total * q_pow(q, shift))
    }

    /// Every J-tuple of reduced effective divisors with deg G_j ≤ ⟨y, 𝓖_j⟩.
    pub fn g_divisor_tuples(&self, y: &DegreeVector) -> Vec<Vec<EffectiveDivisor>> {
        let options: Vec<Vec<EffectiveDivisor>> = self
            .y_on_j(y)
            .iter()
            .map(|&d| {
                (0..=d.max(-1))
                    .flat_map(|k| effective_divisors(self.ctx, k as u32))
                    .filter(|x| x.is_reduced())
                    .collect()
            })
            .collect();
        tuples(&options).into_iter().map(|t| t.iter().enumerate().map(|(k, &c)| options[k][c].clone()).collect()).collect()
    }
}

/// Number of effective divisors of degree d on P¹ over F_q.
pub(crate) fn divisor_count(q: u64, d: i64) -> u128 {
    if d < 0 {
        return 0;
    }
    let q = q as u128;
    (q.pow(d as u32 + 1) - 1) / (q - 1)
}

/// Index tuples of a cartesian product, last slot fastest.
pub(crate) fn tuples<T>(options: &[Vec<T>]) -> Vec<Vec<usize>> {
    Odometer::new(options.iter().map(|o| o.len()).collect()).collect()
}

/// Lazy mixed-radix counter over index tuples, last slot fastest.
pub(crate) struct Odometer {
    radix: Vec<usize>,
    cur: Option<Vec<usize>>,
}

impl Odometer {
    pub(crate) fn new(radix: Vec<usize>) -> Self {
        let cur = (!radix.contains(&0)).then(|| vec![0; radix.len()]);
        Odometer { radix, cur }
    }
}

impl Iterator for Odometer {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let cur = self.cur.as_mut().unwrap();
        let mut k = cur.len();
        loop {
            if k == 0 {
                self.cur = None;
                break;
            }
            k -= 1;
            cur[k] += 1;
            if cur[k] < self.radix[k] {
                break;
            }
            cur[k] = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::CurveContext;
    use crate::surface::builtin_sextic_a1;

    #[test]
    fn y_zero() {
        let cox = builtin_sextic_a1();
        let y = DegreeVector::zero(4);
        let c3 = Counter::with_default_choice(&cox, CurveContext::new(3).unwrap()).unwrap();
        let b = c3.hom_breakdown(&y, Budget::default()).unwrap();
        assert_eq!(b.hom, BigInt::from(2));
        assert_eq!(b.n.n0, Q::from_integer(9.into()));
        assert_eq!(&b.n.n1 + &b.n.n2, Q::from_integer((-7).into()));
        let c2 = Counter::with_default_choice(&cox, CurveContext::new(2).unwrap()).unwrap();
        assert_eq!(c2.hom_count(&y, Budget::default()).unwrap(), BigInt::zero());
    }

    #[test]
    fn outside_dual_cone_is_zero() {
        let cox = builtin_sextic_a1();
        let c = Counter::with_default_choice(&cox, CurveContext::new(2).unwrap()).unwrap();
        let y = DegreeVector::from_choice(&cox, &c.choice, &[-1, 0, 0, 1]).unwrap();
        assert_eq!(c.hom_count(&y, Budget::default()).unwrap(), BigInt::zero());
    }

    #[test]
    fn tuple_order() {
        let t = tuples(&[vec![0, 1], vec![0, 1, 2]]);
        assert_eq!(t.len(), 6);
        assert_eq!(t[1], vec![0, 1]);
        assert!(tuples::<u8>(&[vec![], vec![1]]).is_empty());
    }
}
