//! Finite-field counting: torsor point counts, section counts, the sums ℳ,
//! the morphism count by partial Möbius inversion, its n₀ + n₁ + n₂
//! decomposition, the constant γ and the per-degree trend report.
//!
//! Restricted to surfaces (dim X = 2) with three linear variables.

mod gamma;
mod hom;
mod msum;
mod oracle;
mod report;
mod sections;
mod torsor;

pub use gamma::{c_princ, euler_factor_identity, gamma, h_sum, local_factor, GammaReport, GammaRow};
pub use hom::{CountRecord, HomBreakdown, NTerms};
pub use msum::euler_coefficients;
pub use oracle::{hom_count_oracle, minimal_non_faces};
pub use report::{manin_report, ManinReport, ManinRow};
pub use sections::{PhiPsi, SectionCounts};
pub use torsor::{
    euler_local_factor, is_prime_power, surface_count_enumerated, surface_point_count, torsor_count_brute,
    torsor_count_closed, torsor_laurent,
};

use crate::curve::CurveContext;
use crate::error::{Error, Result};
use crate::linalg::{q_int, solve_unique, Q};
use crate::moebius::{Moebius, NuTable};
use crate::surface::{AdmissibleChoice, CoxPresentation, PicClass};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

/// Upper bound on the number of terms an enumeration may visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub terms: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { terms: 50_000_000 }
    }
}

impl Budget {
    pub fn check(&self, what: &str, needed: u128) -> Result<()> {
        if needed > self.terms as u128 {
            return Err(Error::Budget(format!("{what} needs {needed} terms, budget is {}", self.terms)));
        }
        Ok(())
    }
}

/// A multidegree y ∈ Pic(X)^∨, stored in the dual of the presentation's fixed
/// Picard basis so that it does not depend on the admissible choice.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeVector {
    pub coords: Vec<i64>,
}

impl DegreeVector {
    pub fn zero(rank: usize) -> Self {
        DegreeVector { coords: vec![0; rank] }
    }

    pub fn pair(&self, c: &PicClass) -> i64 {
        c.pair(&self.coords)
    }

    /// The y with ⟨y, 𝓕_i⟩ = `y_i` for the basis {𝓕_i} of a choice.
    pub fn from_choice(cox: &CoxPresentation, choice: &AdmissibleChoice, y_i: &[i64]) -> Result<Self> {
        if y_i.len() != choice.i.len() {
            return Err(Error::input("y", format!("expected {} coordinates", choice.i.len())));
        }
        let rows: Vec<Vec<Q>> = choice.i.iter().map(|&i| cox.class(i).0.iter().map(|&x| q_int(x)).collect()).collect();
        let rhs: Vec<Q> = y_i.iter().map(|&x| q_int(x)).collect();
        let sol = solve_unique(&rows, &rhs).ok_or_else(|| Error::input("y", "basis of the choice is singular"))?;
        let coords = sol
            .iter()
            .map(|v| v.is_integer().then(|| v.to_integer().to_i64()).flatten())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::input("y", "not integral in the fixed basis"))?;
        Ok(DegreeVector { coords })
    }

    /// Coordinates ⟨y, 𝓕_i⟩ for a choice.
    pub fn on_choice(&self, cox: &CoxPresentation, choice: &AdmissibleChoice) -> Vec<i64> {
        choice.i.iter().map(|&i| self.pair(cox.class(i))).collect()
    }

    pub fn anticanonical_degree(&self, cox: &CoxPresentation) -> i64 {
        self.pair(&cox.anticanonical())
    }

    /// Membership in C_eff(X)^∨: nonnegative on the effective cone generators
    /// and on every generator class.
    pub fn in_dual_cone(&self, cox: &CoxPresentation) -> bool {
        cox.effective_cone.iter().all(|c| self.pair(c) >= 0)
            && (0..cox.n_generators()).all(|i| self.pair(cox.class(i)) >= 0)
    }
}

/// All y ∈ C_eff(X)^∨ with ⟨y, −𝒦⟩ ≤ bound, ordered by anticanonical degree
/// and then by the coordinates of `choice`.
pub fn degree_vectors(cox: &CoxPresentation, choice: &AdmissibleChoice, bound: i64) -> Result<Vec<DegreeVector>> {
    let basis: Vec<PicClass> = choice.i.iter().map(|&i| cox.class(i).clone()).collect();
    let k = cox
        .anticanonical()
        .in_basis(&basis)
        .ok_or_else(|| Error::input("anticanonical", "not integral in the basis of the choice"))?;
    if k.iter().any(|&c| c <= 0) {
        return Err(Error::input("anticanonical", "needs positive coordinates in the basis of the choice"));
    }
    let mut out = Vec::new();
    let mut cur = vec![0i64; k.len()];
    loop {
        let deg: i64 = cur.iter().zip(&k).map(|(a, b)| a * b).sum();
        if deg <= bound {
            let y = DegreeVector::from_choice(cox, choice, &cur)?;
            if y.in_dual_cone(cox) {
                out.push((deg, cur.clone(), y));
            }
        }
        let mut pos = 0;
        loop {
            if pos == cur.len() {
                out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
                return Ok(out.into_iter().map(|(_, _, y)| y).collect());
            }
            cur[pos] += 1;
            if cur[pos] * k[pos] <= bound {
                break;
            }
            cur[pos] = 0;
            pos += 1;
        }
    }
}

/// Everything needed to count for one admissible choice over one F_q.
#[derive(Debug, Clone)]
pub struct Counter {
    pub cox: CoxPresentation,
    pub choice: AdmissibleChoice,
    pub mu: Moebius,
    pub nu: NuTable,
    pub ctx: CurveContext,
    /// Per J-position, the block as (I-position, exponent).
    pub blocks: Vec<Vec<(usize, u32)>>,
}

impl Counter {
    pub fn new(cox: &CoxPresentation, choice: &AdmissibleChoice, ctx: CurveContext) -> Result<Self> {
        if cox.dim() != 2 || choice.j.len() != 3 {
            return Err(Error::input(
                "surface",
                format!("counting needs dim X = 2 and #J = 3, got dim {} and #J = {}", cox.dim(), choice.j.len()),
            ));
        }
        let mu = Moebius::new(cox);
        let nu = NuTable::new(&mu, choice);
        let blocks = choice
            .blocks
            .iter()
            .map(|b| b.iter().map(|&(i, e)| (choice.ipos(i).expect("block inside I"), e)).collect())
            .collect();
        Ok(Counter { cox: cox.clone(), choice: choice.clone(), mu, nu, ctx, blocks })
    }

    pub fn with_default_choice(cox: &CoxPresentation, ctx: CurveContext) -> Result<Self> {
        Self::new(cox, &cox.default_choice()?, ctx)
    }

    pub fn q(&self) -> u64 {
        self.ctx.q
    }

    /// ⟨y, 𝓖_j⟩ per J-position.
    pub fn y_on_j(&self, y: &DegreeVector) -> Vec<i64> {
        self.choice.j.iter().map(|&j| y.pair(self.cox.class(j))).collect()
    }

    /// ⟨y, 𝒟_tot⟩.
    pub fn y_on_d_tot(&self, y: &DegreeVector) -> i64 {
        y.pair(&self.cox.d_tot())
    }

    /// Block exponent of I-position `i` and its J-position, if any.
    pub fn block_of(&self, ipos: usize) -> Option<(usize, u32)> {
        self.blocks
            .iter()
            .enumerate()
            .find_map(|(jp, b)| b.iter().find(|&&(i, _)| i == ipos).map(|&(_, e)| (jp, e)))
    }
}

/// q^k as an exact rational, k of any sign.
pub fn q_pow(q: u64, k: i64) -> Q {
    let base = Q::from_integer(BigInt::from(q));
    if k >= 0 {
        num_traits::pow(base, k as usize)
    } else {
        num_traits::pow(base.recip(), (-k) as usize)
    }
}

pub(crate) fn big_pow(q: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(q), k as usize)
}

pub(crate) fn as_integer(x: &Q, what: &str) -> Result<BigInt> {
    if !x.is_integer() {
        return Err(Error::check(format!("{what} = {x} is not an integer")));
    }
    Ok(x.to_integer())
}

pub(crate) fn nonnegative(x: BigInt, what: &str) -> Result<BigInt> {
    if x.is_negative() {
        return Err(Error::check(format!("{what} = {x} is negative")));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::builtin_sextic_a1;

    #[test]
    fn sextic_degree_vectors() {
        let cox = builtin_sextic_a1();
        let choice = cox.default_choice().unwrap();
        let ys = degree_vectors(&cox, &choice, 3).unwrap();
        let on: Vec<Vec<i64>> = ys.iter().map(|y| y.on_choice(&cox, &choice)).collect();
        assert_eq!(on[0], vec![0, 0, 0, 0]);
        // 2(y1+y2+y3) + 3y4 ≤ 3.
        assert_eq!(ys.len(), 1 + 3 + 1);
        assert!(on.contains(&vec![0, 0, 0, 1]));
        for y in &ys {
            assert_eq!(DegreeVector::from_choice(&cox, &choice, &y.on_choice(&cox, &choice)).unwrap(), *y);
        }
    }

    #[test]
    fn counter_pairings() {
        let cox = builtin_sextic_a1();
        let c = Counter::with_default_choice(&cox, CurveContext::new(2).unwrap()).unwrap();
        let y = DegreeVector::from_choice(&cox, &c.choice, &[1, 0, 0, 1]).unwrap();
        // m1 = λ + η2 + η3, m2 = λ + η1 + η3, m3 = λ + η1 + η2.
        assert_eq!(c.y_on_j(&y), vec![1, 2, 2]);
        assert_eq!(c.y_on_d_tot(&y), 2);
        assert_eq!(y.anticanonical_degree(&cox), 5);
    }
}
