//! The Möbius function μ° attached to the incidence complex, its partial sums
//! ν° over the I-coordinates, and their products over closed points.
//!
//! μ° is characterized by Σ_{e' ≤ e} μ°(e') = 1 when supp(e) is a face and 0
//! otherwise. It vanishes as soon as some coordinate is ≥ 2, so it is stored
//! as a table over subsets.

use crate::curve::{ClosedPoint, EffectiveDivisor};
use crate::surface::{AdmissibleChoice, CoxPresentation};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeSet;

/// Multiplicities indexed by generator (or by position within J or I).
pub type ExponentVector = Vec<u32>;

fn mask_of(e: &[u32], positions: impl Iterator<Item = usize>) -> Option<u32> {
    let mut m = 0u32;
    for (k, pos) in positions.enumerate() {
        match e.get(k).copied().unwrap_or(0) {
            0 => {}
            1 => m |= 1 << pos,
            _ => return None,
        }
    }
    Some(m)
}

#[derive(Debug, Clone)]
pub struct Moebius {
    n: usize,
    mu: Vec<i64>,
}

impl Moebius {
    pub fn new(cox: &CoxPresentation) -> Self {
        let n = cox.n_generators();
        let mut mu: Vec<i64> = (0..1u32 << n).map(|m| cox.in_incidence(m) as i64).collect();
        // Subset Möbius transform: μ(e) = Σ_{S ⊆ e} (−1)^{|e∖S|} 1_inc(S).
        for b in 0..n {
            for m in 0..1usize << n {
                if m >> b & 1 == 1 {
                    mu[m] -= mu[m ^ (1 << b)];
                }
            }
        }
        Moebius { n, mu }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mu_mask(&self, mask: u32) -> i64 {
        self.mu[mask as usize]
    }

    /// μ°(e) for e indexed by generator.
    pub fn mu_zero(&self, e: &[u32]) -> i64 {
        mask_of(e, 0..self.n).map_or(0, |m| self.mu_mask(m))
    }

    pub fn mu_divisor(&self, d: &[EffectiveDivisor]) -> BigInt {
        let mut pts: BTreeSet<&ClosedPoint> = BTreeSet::new();
        for div in d {
            pts.extend(div.support());
        }
        let mut out = BigInt::one();
        for p in pts {
            let e: Vec<u32> = d.iter().map(|div| div.multiplicity(p)).collect();
            let v = self.mu_zero(&e);
            if v == 0 {
                return BigInt::zero();
            }
            out *= v;
        }
        out
    }
}

/// ν°(g, f) = Σ_{f' ≤ f} μ°(g, f') for one admissible choice, tabulated over
/// subsets of generators: `nu[g ∪ K]` for g ⊆ J, K ⊆ I.
#[derive(Debug, Clone)]
pub struct NuTable {
    choice: AdmissibleChoice,
    nu: Vec<i64>,
}

impl NuTable {
    pub fn new(mu: &Moebius, choice: &AdmissibleChoice) -> Self {
        let n = mu.n;
        let mut nu = mu.mu.clone();
        for &i in &choice.i {
            for m in 0..1usize << n {
                if m >> i & 1 == 1 {
                    nu[m] += nu[m ^ (1 << i)];
                }
            }
        }
        NuTable { choice: choice.clone(), nu }
    }

    pub fn choice(&self) -> &AdmissibleChoice {
        &self.choice
    }

    /// ν° on a support pattern: `g_mask ⊆ J` with unit multiplicities and the
    /// support `k_mask ⊆ I` of f.
    pub fn nu_mask(&self, g_mask: u32, k_mask: u32) -> i64 {
        self.nu[(g_mask | k_mask) as usize]
    }

    /// ν°(g, f) with g indexed by J position and f by I position.
    pub fn nu_zero(&self, g: &[u32], f: &[u32]) -> i64 {
        let Some(gm) = mask_of(g, self.choice.j.iter().copied()) else { return 0 };
        let km = self
            .choice
            .i
            .iter()
            .enumerate()
            .filter(|(k, _)| f.get(*k).copied().unwrap_or(0) > 0)
            .fold(0u32, |m, (_, &i)| m | 1 << i);
        self.nu_mask(gm, km)
    }

    /// Π_v ν°(v(G), v(D)), with G over J positions and D over I positions.
    pub fn nu_divisor(&self, g: &[EffectiveDivisor], d: &[EffectiveDivisor]) -> BigInt {
        let mut pts: BTreeSet<&ClosedPoint> = BTreeSet::new();
        for div in g.iter().chain(d) {
            pts.extend(div.support());
        }
        let mut out = BigInt::one();
        for p in pts {
            let gv: Vec<u32> = g.iter().map(|x| x.multiplicity(p)).collect();
            let fv: Vec<u32> = d.iter().map(|x| x.multiplicity(p)).collect();
            let v = self.nu_zero(&gv, &fv);
            if v == 0 {
                return BigInt::zero();
            }
            out *= v;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::builtin_sextic_a1;

    #[test]
    fn sextic_values() {
        let s = builtin_sextic_a1();
        let mu = Moebius::new(&s);
        assert_eq!(mu.mu_zero(&[0; 7]), 1);
        for i in 0..7 {
            let mut e = vec![0; 7];
            e[i] = 1;
            assert_eq!(mu.mu_zero(&e), 0);
        }
        let mut e = vec![0; 7];
        e[s.index_of("m1").unwrap()] = 1;
        e[s.index_of("eta2").unwrap()] = 1;
        assert_eq!(mu.mu_zero(&e), -1);
        e[0] = 2;
        assert_eq!(mu.mu_zero(&e), 0);
    }

    #[test]
    fn nu_trivial_cases() {
        let s = builtin_sextic_a1();
        let c = s.default_choice().unwrap();
        let nu = NuTable::new(&Moebius::new(&s), &c);
        assert_eq!(nu.nu_zero(&[0, 0, 0], &[0, 0, 0, 0]), 1);
        // η1 and η2 never meet: the pure-I face is absent.
        let f = [1, 1, 0, 0];
        assert_eq!(nu.nu_zero(&[0, 0, 0], &f), 0);
        assert_eq!(nu.nu_zero(&[0, 0, 0], &[0, 2, 0, 3]), nu.nu_zero(&[0, 0, 0], &[0, 1, 0, 1]));
        assert_eq!(nu.nu_zero(&[2, 0, 0], &[0, 0, 0, 0]), 0);
    }
}
