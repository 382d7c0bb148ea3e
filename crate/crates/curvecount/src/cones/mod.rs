//! Exact rational polyhedra in Pic(X)^∨: the anticanonical section of the
//! dual effective cone, its normalized volume α, the regions 𝒞_λ and the
//! coverage ratios of their unions.
//!
//! Coordinates are those dual to the presentation's fixed Picard basis. The
//! volume of a polytope P in the hyperplane ⟨•, ω⟩ = 1 is the quotient measure
//! of the lattice measure by dω; it equals ρ·vol(conv(0 ∪ P)).

mod volume;

pub use volume::{monte_carlo_volume, triangulate};

use crate::error::{Error, Result};
use crate::linalg::{dot, kernel, q_int, rank, solve_unique, Q};
use crate::surface::{AdmissibleChoice, CoxPresentation, PicClass};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

/// a·x ≥ b, or a·x = b among the equalities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub a: Vec<Q>,
    pub b: Q,
}

impl Constraint {
    pub fn homogeneous(a: Vec<Q>) -> Self {
        Constraint { a, b: Q::zero() }
    }

    pub fn value(&self, x: &[Q]) -> Q {
        dot(&self.a, x) - &self.b
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolytope {
    pub dim: usize,
    pub ineqs: Vec<Constraint>,
    pub eqs: Vec<Constraint>,
}

impl HPolytope {
    pub fn new(dim: usize) -> Self {
        HPolytope { dim, ineqs: Vec::new(), eqs: Vec::new() }
    }

    pub fn with_ineq(mut self, c: Constraint) -> Self {
        self.ineqs.push(c);
        self
    }

    pub fn with_eq(mut self, c: Constraint) -> Self {
        self.eqs.push(c);
        self
    }

    pub fn contains(&self, x: &[Q]) -> bool {
        self.ineqs.iter().all(|c| !c.value(x).is_negative()) && self.eqs.iter().all(|c| c.value(x).is_zero())
    }

    /// Every vertex, found by solving each maximal subsystem of constraints
    /// taken as equalities and keeping the feasible unique solutions.
    pub fn vertices(&self) -> Vec<Vec<Q>> {
        let n = self.dim;
        let eq_rank = rank(&self.eqs.iter().map(|c| c.a.clone()).collect::<Vec<_>>());
        if eq_rank > n {
            return Vec::new();
        }
        let k = n - eq_rank;
        let m = self.ineqs.len();
        let mut out: Vec<Vec<Q>> = Vec::new();
        if k > m {
            return out;
        }
        let mut pick: Vec<usize> = (0..k).collect();
        loop {
            let rows: Vec<&Constraint> = self.eqs.iter().chain(pick.iter().map(|&i| &self.ineqs[i])).collect();
            let a: Vec<Vec<Q>> = rows.iter().map(|c| c.a.clone()).collect();
            let b: Vec<Q> = rows.iter().map(|c| c.b.clone()).collect();
            if let Some(x) = solve_unique(&a, &b) {
                if self.contains(&x) {
                    out.push(x);
                }
            }
            // Next k-subset of 0..m in lexicographic order.
            let mut i = k;
            loop {
                if i == 0 {
                    out.sort();
                    out.dedup();
                    return out;
                }
                i -= 1;
                if pick[i] < m - k + i {
                    pick[i] += 1;
                    for t in i + 1..k {
                        pick[t] = pick[t - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// Whether the recession cone {d : a·d ≥ 0, e·d = 0} is zero.
    pub fn is_bounded(&self) -> bool {
        let n = self.dim;
        let all: Vec<Vec<Q>> = self.ineqs.iter().chain(&self.eqs).map(|c| c.a.clone()).collect();
        if !kernel(&all, n).is_empty() {
            return false;
        }
        // Pointed recession cone: it is nonzero iff it has an extreme ray,
        // cut out by n − 1 independent tight homogeneous constraints.
        let eq_rows: Vec<Vec<Q>> = self.eqs.iter().map(|c| c.a.clone()).collect();
        let m = self.ineqs.len();
        let need = (n - 1).saturating_sub(rank(&eq_rows));
        let mut found = false;
        for_each_subset(m, need, |pick| {
            let mut rows = eq_rows.clone();
            rows.extend(pick.iter().map(|&i| self.ineqs[i].a.clone()));
            let ker = kernel(&rows, n);
            if ker.len() != 1 {
                return;
            }
            for sign in [1, -1] {
                let d: Vec<Q> = ker[0].iter().map(|x| x * q_int(sign)).collect();
                if self.ineqs.iter().all(|c| !dot(&c.a, &d).is_negative()) {
                    found = true;
                }
            }
        });
        !found
    }

    /// Volume normalized by the single equality ⟨•, ω⟩ = 1.
    pub fn volume(&self) -> Result<Q> {
        if self.eqs.len() != 1 || self.eqs[0].b != q_int(1) {
            return Err(Error::input("polytope", "volume needs exactly one equality of the form ⟨x, ω⟩ = 1"));
        }
        if !self.is_bounded() {
            return Err(Error::input("polytope", "unbounded"));
        }
        volume::leray_volume(self)
    }

    pub fn intersect(&self, extra: &[Constraint]) -> HPolytope {
        let mut p = self.clone();
        p.ineqs.extend(extra.iter().cloned());
        p
    }
}

pub(crate) fn for_each_subset(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        f(&pick);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if pick[i] < m - k + i {
                pick[i] += 1;
                for t in i + 1..k {
                    pick[t] = pick[t - 1] + 1;
                }
                break;
            }
        }
    }
}

fn class_q(c: &PicClass) -> Vec<Q> {
    c.0.iter().map(|&x| q_int(x)).collect()
}

/// {y : ⟨y, g⟩ ≥ 0 for all effective generators g, ⟨y, −𝒦⟩ = 1}.
pub fn dual_cone_section(cox: &CoxPresentation) -> Result<HPolytope> {
    if cox.effective_cone.is_empty() {
        return Err(Error::input("effective_cone", "no generators"));
    }
    let mut p = HPolytope::new(cox.picard_rank)
        .with_eq(Constraint { a: class_q(&cox.anticanonical()), b: q_int(1) });
    for g in &cox.effective_cone {
        p = p.with_ineq(Constraint::homogeneous(class_q(g)));
    }
    if !p.is_bounded() {
        return Err(Error::input("effective_cone", "anticanonical section is unbounded: −K is not interior"));
    }
    Ok(p)
}

/// α = normalized volume of the anticanonical section.
pub fn alpha(cox: &CoxPresentation) -> Result<Q> {
    dual_cone_section(cox)?.volume()
}

/// The halfspace ⟨y, (1−λ)(𝓖_{j1} + 𝓖_{j2}) − 𝒟_tot⟩ ≥ 0 for {j1, j2} = J∖{j0}.
pub fn c_lambda_constraint(cox: &CoxPresentation, choice: &AdmissibleChoice, j0: usize, lambda: &Q) -> Constraint {
    let rho = cox.picard_rank;
    let one_minus = Q::from_integer(1.into()) - lambda;
    let mut a = vec![Q::zero(); rho];
    for (jp, &j) in choice.j.iter().enumerate() {
        if jp == j0 {
            continue;
        }
        for (k, &x) in cox.class(j).0.iter().enumerate() {
            a[k] += &one_minus * q_int(x);
        }
    }
    for (k, &x) in cox.d_tot().0.iter().enumerate() {
        a[k] -= q_int(x);
    }
    Constraint::homogeneous(a)
}

pub fn c_lambda(cox: &CoxPresentation, choice: &AdmissibleChoice, j0: usize, lambda: &Q) -> Result<HPolytope> {
    if choice.j.len() != 3 {
        return Err(Error::input("choice", "𝒞_λ needs #J = 3"));
    }
    Ok(dual_cone_section(cox)?.intersect(&[c_lambda_constraint(cox, choice, j0, lambda)]))
}

/// Which j₀ labelings enter the union 𝒫_λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Labeling {
    /// Every admissible J and every j₀ ∈ J.
    Union,
    /// Every admissible J with j₀ its J-position k.
    Fixed(usize),
}

/// A finite union of polytopes in a common hyperplane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    pub pieces: Vec<HPolytope>,
}

/// Halfspaces defining 𝒫_λ inside the section, deduplicated up to positive
/// scaling.
pub fn p_lambda_halfspaces(cox: &CoxPresentation, lambda: &Q, labeling: Labeling) -> Vec<Constraint> {
    let mut out: Vec<Constraint> = Vec::new();
    for choice in cox.admissible_choices() {
        if choice.j.len() != 3 {
            continue;
        }
        let j0s: Vec<usize> = match labeling {
            Labeling::Union => (0..3).collect(),
            Labeling::Fixed(k) => vec![k.min(2)],
        };
        for j0 in j0s {
            let c = normalize(c_lambda_constraint(cox, &choice, j0, lambda));
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out
}

fn normalize(c: Constraint) -> Constraint {
    let Some(scale) = c.a.iter().find(|x| !x.is_zero()).map(|x| x.abs()) else { return c };
    Constraint { a: c.a.iter().map(|x| x / &scale).collect(), b: &c.b / &scale }
}

pub fn p_lambda(cox: &CoxPresentation, lambda: &Q, labeling: Labeling) -> Result<Region> {
    let section = dual_cone_section(cox)?;
    Ok(Region {
        pieces: p_lambda_halfspaces(cox, lambda, labeling).into_iter().map(|h| section.intersect(&[h])).collect(),
    })
}

/// vol(S ∩ ⋃ H_k) by inclusion–exclusion over the halfspaces, pruning every
/// superset of an intersection with zero volume.
pub fn union_volume(section: &HPolytope, halfspaces: &[Constraint]) -> Result<Q> {
    fn walk(section: &HPolytope, hs: &[Constraint], start: usize, chosen: &mut Vec<Constraint>, acc: &mut Q) -> Result<()> {
        for k in start..hs.len() {
            chosen.push(hs[k].clone());
            let v = section.intersect(chosen).volume()?;
            if !v.is_zero() {
                if chosen.len() % 2 == 1 {
                    *acc += &v;
                } else {
                    *acc -= &v;
                }
                walk(section, hs, k + 1, chosen, acc)?;
            }
            chosen.pop();
        }
        Ok(())
    }
    let mut acc = Q::zero();
    walk(section, halfspaces, 0, &mut Vec::new(), &mut acc)?;
    Ok(acc)
}

/// vol(S) − vol(S ∩ ⋂ {⟨•, a_k⟩ ≤ b_k}): the union volume through its complement.
pub fn union_volume_by_complement(section: &HPolytope, halfspaces: &[Constraint]) -> Result<Q> {
    let flipped: Vec<Constraint> =
        halfspaces.iter().map(|c| Constraint { a: c.a.iter().map(|x| -x).collect(), b: -c.b.clone() }).collect();
    Ok(section.volume()? - section.intersect(&flipped).volume()?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageRow {
    pub surface: String,
    pub lambda: String,
    pub vol_full: String,
    pub vol_covered: String,
    pub ratio: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coverage {
    pub lambda: Q,
    pub vol_full: Q,
    pub vol_covered: Q,
}

impl Coverage {
    pub fn ratio(&self) -> Q {
        &self.vol_covered / &self.vol_full
    }

    pub fn row(&self, surface: &str) -> CoverageRow {
        CoverageRow {
            surface: surface.to_string(),
            lambda: self.lambda.to_string(),
            vol_full: self.vol_full.to_string(),
            vol_covered: self.vol_covered.to_string(),
            ratio: self.ratio().to_string(),
        }
    }
}

/// Distinct halfspaces beyond which inclusion–exclusion is replaced by the
/// complement formula alone.
const MAX_INCLUSION_EXCLUSION: usize = 14;

/// Vol(𝒫_λ ∩ section)/Vol(section). The union volume is computed by
/// inclusion–exclusion and checked against the complement formula.
pub fn coverage_ratio(cox: &CoxPresentation, lambda: &Q, labeling: Labeling) -> Result<Coverage> {
    let section = dual_cone_section(cox)?;
    let vol_full = section.volume()?;
    let hs = p_lambda_halfspaces(cox, lambda, labeling);
    let by_complement = union_volume_by_complement(&section, &hs)?;
    let vol_covered = if hs.len() <= MAX_INCLUSION_EXCLUSION {
        let ie = union_volume(&section, &hs)?;
        if ie != by_complement {
            return Err(Error::check(format!("union volume {ie} by inclusion–exclusion, {by_complement} by complement")));
        }
        ie
    } else {
        by_complement
    };
    Ok(Coverage { lambda: lambda.clone(), vol_full, vol_covered })
}

/// Coverage over a λ grid and the largest ratio among λ > 0, the surrogate for
/// the lim sup over admissible regions. The ratio must not increase with λ.
pub fn coverage_sup(cox: &CoxPresentation, grid: &[Q], labeling: Labeling) -> Result<(Vec<Coverage>, Q)> {
    let mut sorted = grid.to_vec();
    sorted.sort();
    sorted.dedup();
    let rows = sorted.iter().map(|l| coverage_ratio(cox, l, labeling)).collect::<Result<Vec<_>>>()?;
    for w in rows.windows(2) {
        if w[1].ratio() > w[0].ratio() {
            return Err(Error::check(format!("coverage increases between λ = {} and λ = {}", w[0].lambda, w[1].lambda)));
        }
    }
    let sup = rows
        .iter()
        .filter(|c| c.lambda.is_positive())
        .map(|c| c.ratio())
        .max()
        .or_else(|| rows.iter().map(|c| c.ratio()).max())
        .unwrap_or_else(Q::zero);
    Ok((rows, sup))
}

/// Euclidean distance from y to the boundary of a region, in coordinates
/// taken as orthonormal: zero outside every piece, otherwise the largest,
/// over pieces containing y, of the distance to that piece's facet
/// hyperplanes. Equalities are ignored.
pub fn boundary_distance(region: &Region, y: &[Q]) -> f64 {
    let mut best = 0.0f64;
    for p in &region.pieces {
        if !p.ineqs.iter().all(|c| !c.value(y).is_negative()) {
            continue;
        }
        let d = p
            .ineqs
            .iter()
            .map(|c| {
                let norm: f64 = c.a.iter().map(|x| x.to_f64().unwrap().powi(2)).sum::<f64>().sqrt();
                if norm == 0.0 {
                    f64::INFINITY
                } else {
                    c.value(y).to_f64().unwrap() / norm
                }
            })
            .fold(f64::INFINITY, f64::min);
        best = best.max(d);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q_frac;
    use crate::surface::builtin_sextic_a1;

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q_int(x)).collect()
    }

    fn simplex(c: &[i64]) -> HPolytope {
        let n = c.len();
        let mut p = HPolytope::new(n).with_eq(Constraint { a: qv(c), b: q_int(1) });
        for i in 0..n {
            let mut a = vec![0; n];
            a[i] = 1;
            p = p.with_ineq(Constraint::homogeneous(qv(&a)));
        }
        p
    }

    #[test]
    fn standard_simplices() {
        let mut fact = 1i64;
        for d in 2..=6 {
            let p = simplex(&vec![1; d]);
            assert_eq!(p.vertices().len(), d);
            assert_eq!(p.volume().unwrap(), q_frac(1, fact));
            fact *= d as i64;
        }
        assert_eq!(simplex(&[1, 2, 3]).volume().unwrap(), q_frac(1, 2 * 6));
    }

    #[test]
    fn sextic_section() {
        let cox = builtin_sextic_a1();
        let p = dual_cone_section(&cox).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(alpha(&cox).unwrap(), q_frac(1, 144));
    }

    #[test]
    fn inconsistent_is_empty() {
        let p = simplex(&[1, 1, 1]).with_ineq(Constraint { a: qv(&[-1, -1, -1]), b: q_int(0) });
        assert!(p.vertices().is_empty());
        assert_eq!(p.volume().unwrap(), Q::zero());
    }

    #[test]
    fn unbounded_section() {
        let p = HPolytope::new(2)
            .with_eq(Constraint { a: qv(&[1, 0]), b: q_int(1) })
            .with_ineq(Constraint::homogeneous(qv(&[1, 0])))
            .with_ineq(Constraint::homogeneous(qv(&[0, 1])));
        assert!(!p.is_bounded());
        assert!(p.volume().is_err());
    }

    #[test]
    fn sextic_coverage() {
        let cox = builtin_sextic_a1();
        let full = coverage_ratio(&cox, &Q::zero(), Labeling::Union).unwrap();
        assert_eq!(full.ratio(), q_int(1));
        let large = coverage_ratio(&cox, &q_int(1), Labeling::Union).unwrap();
        assert_eq!(large.ratio(), Q::zero());
        let ch = cox.default_choice().unwrap();
        let small = c_lambda(&cox, &ch, 0, &q_frac(1, 10)).unwrap().volume().unwrap();
        assert!(small < alpha(&cox).unwrap());
    }

    #[test]
    fn distances() {
        let orthant = Region {
            pieces: vec![HPolytope::new(2)
                .with_ineq(Constraint::homogeneous(qv(&[1, 0])))
                .with_ineq(Constraint::homogeneous(qv(&[0, 1])))],
        };
        assert_eq!(boundary_distance(&orthant, &qv(&[1, 1])), 1.0);
        assert_eq!(boundary_distance(&orthant, &qv(&[0, 5])), 0.0);
        assert_eq!(boundary_distance(&orthant, &qv(&[3, 4])), 3.0);
        assert_eq!(boundary_distance(&orthant, &qv(&[-1, 4])), 0.0);
    }
}
