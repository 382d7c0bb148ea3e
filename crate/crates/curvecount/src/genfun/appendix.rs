//! Splitting of the j₀-series F_{j0,2,g} into three parts by the value of the
//! full Min (0, 1, or ≥ 2), with a closed rational form for each part built
//! support pattern by support pattern.

use super::local::{binary_vectors, box_vectors, shifted_offsets, LocalSystem};
use super::numerators::{FInstance, GInstance};
use super::poly::MultiPoly;
use super::series::{certify_m_controlled, CertificationReport, ControlledForm, Denominator, TruncatedSeries};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use serde::Serialize;

/// Which part of the split a series belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Part {
    /// Block j₀ vanishes; the Min over the other blocks is ≥ 2.
    MinZero,
    /// Block j₀ equals one.
    MinOne,
    /// Every block is ≥ 2.
    MinAtLeastTwo,
}

impl Part {
    pub const ALL: [Part; 3] = [Part::MinZero, Part::MinOne, Part::MinAtLeastTwo];
}

/// Shape of the closed form used for one support pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Shape {
    /// One variable per block off j₀, plus optional free variables.
    MinTail,
    /// As above with one block carrying two variables.
    SplitBlock,
    /// One unit step in block j₀ in front of a tail over the others.
    UnitStep,
    /// One variable in every block, both minima tracked.
    TwoMin,
}

#[derive(Debug, Clone)]
pub struct Piece {
    pub part: Part,
    pub shape: Shape,
    /// Support pattern as a mask over I-positions.
    pub support: u32,
    pub weight: i64,
    /// Closed form without the |ν°| weight.
    pub form: ControlledForm,
}

#[derive(Debug, Clone)]
pub struct AppendixReport {
    pub g: Vec<u32>,
    pub j0: usize,
    pub cap: u32,
    pub direct: [TruncatedSeries; 3],
    pub pieces: Vec<Piece>,
    pub certificates: Vec<CertificationReport>,
}

impl AppendixReport {
    pub fn all_certified(&self) -> bool {
        self.certificates.iter().all(|c| c.holds)
    }

    /// The weighted closed form of one part.
    pub fn part_form(&self, part: Part) -> ControlledForm {
        let mut cf = ControlledForm::new();
        for p in self.pieces.iter().filter(|p| p.part == part) {
            for t in &p.form.terms {
                cf.push(t.numerator.scale(&BigInt::from(p.weight)), t.denominators.clone());
            }
        }
        cf
    }
}

/// Σ_{f>0 on the blocks, Min ≥ 2} (v^{Min} − v) t^f with v = τ, for blocks
/// given as I-position lists with exponents and offsets g_j.
fn min_tail(nt: usize, blocks: &[(Vec<(usize, u32)>, u32)]) -> Result<ControlledForm> {
    let mut vars = Vec::new();
    let mut a = Vec::new();
    let mut shift = Vec::new();
    let mut parts = Vec::new();
    let mut nu = Vec::new();
    for (b, g) in blocks {
        let mut part = Vec::new();
        let single_unit = b.len() == 1 && b[0].1 == 1;
        let mut offset = *g;
        for &(i, e) in b {
            let s = if single_unit { 2 - g } else { 1 };
            part.push(vars.len());
            vars.push(i);
            a.push(e);
            shift.push(s);
            offset += e * s;
        }
        parts.push(part);
        nu.push(offset - 2);
    }
    let inst = FInstance::new(a, nu, parts)?;
    let ft = inst.numerator_ftilde()?.swap_rho_tau().remap_t(nt, &vars);
    let mut dens: Vec<Denominator> = inst
        .denominators()
        .into_iter()
        .map(|d| {
            let mut e = vec![0; nt];
            for (k, &i) in vars.iter().enumerate() {
                e[i] = d.d[k];
            }
            Denominator::new(0, d.m, e)
        })
        .collect();
    let cleared = dens.iter().fold(MultiPoly::one(nt), |p, d| p.mul(&d.as_poly()));
    let mut mono = vec![0; nt];
    for (&i, &s) in vars.iter().zip(&shift) {
        mono[i] = s;
    }
    let tau = MultiPoly::tau(nt);
    let num = tau.mul(&MultiPoly::monomial(nt, 1, 0, 0, &mono)).mul(&tau.mul(&ft).sub(&cleared));
    dens.extend(vars.iter().map(|&i| Denominator::unit(nt, i)));
    let mut cf = ControlledForm::new();
    cf.push(num, dens);
    Ok(cf)
}

/// Σ_{f>0, every entry ≥ 2} (ρ^{Min} τ^{Min off j₀} − ρτ) t^f over a
/// transversal with one variable per block.
fn two_min(nt: usize, vars: &[usize], a: &[u32], g: &[u32], j0: usize) -> Result<ControlledForm> {
    let (shift, nu) = shifted_offsets(a, g);
    let inst = GInstance::new(j0, a.to_vec(), nu)?;
    let gt = inst.numerator_gtilde()?.remap_t(nt, vars);
    let mut dens: Vec<Denominator> = inst
        .denominators()
        .into_iter()
        .map(|d| {
            let mut e = vec![0; nt];
            for (k, &i) in vars.iter().enumerate() {
                e[i] = d.d[k];
            }
            Denominator::new(d.m, d.n, e)
        })
        .collect();
    let cleared = dens.iter().fold(MultiPoly::one(nt), |p, d| p.mul(&d.as_poly()));
    let mut mono = vec![0; nt];
    for (&i, &s) in vars.iter().zip(&shift) {
        mono[i] = s;
    }
    let rt = MultiPoly::monomial(nt, 1, 1, 1, &[]);
    let num = rt.mul(&MultiPoly::monomial(nt, 1, 0, 0, &mono)).mul(&rt.mul(&gt).sub(&cleared));
    dens.extend(vars.iter().map(|&i| Denominator::unit(nt, i)));
    let mut cf = ControlledForm::new();
    cf.push(num, dens);
    Ok(cf)
}

fn times_free(cf: ControlledForm, nt: usize, free: &[usize], prefactor: &MultiPoly) -> ControlledForm {
    let mut out = ControlledForm::new();
    for t in cf.terms {
        let mut num = t.numerator.mul(prefactor);
        let mut dens = t.denominators;
        for &i in free {
            num = num.mul(&MultiPoly::t(nt, i));
            dens.push(Denominator::unit(nt, i));
        }
        out.push(num, dens);
    }
    out
}

impl LocalSystem {
    fn part_of(&self, g: &[u32], f: &[u32], j0: usize) -> Option<Part> {
        let vals = self.block_values(g, f);
        let others = vals.iter().enumerate().filter(|&(j, _)| j != j0).map(|(_, &v)| v).min()?;
        if others < 2 {
            return None;
        }
        Some(match vals[j0] {
            0 => Part::MinZero,
            1 => Part::MinOne,
            _ => Part::MinAtLeastTwo,
        })
    }

    /// The three parts by direct summation over {0..cap}^I.
    pub fn appendix_direct(&self, g: &[u32], j0: usize, cap: u32) -> [TruncatedSeries; 3] {
        let nt = self.n_i();
        let mut out = [MultiPoly::zero(nt), MultiPoly::zero(nt), MultiPoly::zero(nt)];
        for f in box_vectors(nt, cap) {
            let Some(part) = self.part_of(g, &f, j0) else { continue };
            let nu = self.nu.nu_zero(g, &f).abs();
            if nu == 0 {
                continue;
            }
            let vals = self.block_values(g, &f);
            let a = *vals.iter().min().unwrap();
            let b = vals.iter().enumerate().filter(|&(j, _)| j != j0).map(|(_, &v)| v).min().unwrap();
            let (hi, lo) = match part {
                Part::MinZero => ((0, b), (0, 1)),
                Part::MinOne => ((1, b), (1, 1)),
                Part::MinAtLeastTwo => ((a, b), (1, 1)),
            };
            let idx = Part::ALL.iter().position(|&p| p == part).unwrap();
            let mut e = vec![hi.0, hi.1];
            e.extend(&f);
            out[idx].add_term(e.clone(), BigInt::from(nu));
            e[0] = lo.0;
            e[1] = lo.1;
            out[idx].add_term(e, BigInt::from(-nu));
        }
        out.map(|p| TruncatedSeries::new(p, cap))
    }

    /// Closed forms of the three parts, one piece per support pattern S ⊆ I
    /// with ν°(g, 1_S) ≠ 0.
    pub fn appendix_pieces(&self, g: &[u32], j0: usize) -> Result<Vec<Piece>> {
        let nt = self.n_i();
        let zero_g = vec![0; self.n_j()];
        let g_mask = self.mask(g, &vec![0; nt]);
        let mut pieces = Vec::new();
        for s in binary_vectors(nt) {
            let weight = self.nu.nu_mask(g_mask, self.mask(&zero_g, &s)).abs();
            if weight == 0 {
                continue;
            }
            let support: u32 = s.iter().enumerate().fold(0, |m, (k, &x)| m | x << k);
            let in_s = |i: usize| s[i] == 1;
            let hits: Vec<Vec<(usize, u32)>> =
                self.blocks.iter().map(|b| b.iter().copied().filter(|&(i, _)| in_s(i)).collect()).collect();
            let free: Vec<usize> = (0..nt).filter(|&i| in_s(i) && self.exponent_of(i).is_none()).collect();
            let others: Vec<usize> = (0..self.n_j()).filter(|&j| j != j0).collect();
            if others.iter().any(|&j| hits[j].is_empty()) {
                continue;
            }
            let tail_blocks: Vec<(Vec<(usize, u32)>, u32)> =
                others.iter().map(|&j| (hits[j].clone(), g[j])).collect();
            let tail_shape = if tail_blocks.iter().any(|(b, _)| b.len() > 1) { Shape::SplitBlock } else { Shape::MinTail };
            let one = MultiPoly::one(nt);
            let rho = MultiPoly::rho(nt);
            if hits[j0].is_empty() {
                let tail = min_tail(nt, &tail_blocks)?;
                let (part, pre) = if g[j0] == 0 { (Part::MinZero, &one) } else { (Part::MinOne, &rho) };
                pieces.push(Piece { part, shape: tail_shape, support, weight, form: times_free(tail, nt, &free, pre) });
                continue;
            }
            if g[j0] == 0 && hits[j0].len() == 1 && hits[j0][0].1 == 1 {
                // Block j₀ equals one exactly when its single variable is 1.
                let i0 = hits[j0][0].0;
                let tail = min_tail(nt, &tail_blocks)?;
                let pre = rho.mul(&MultiPoly::t(nt, i0));
                pieces.push(Piece {
                    part: Part::MinOne,
                    shape: Shape::UnitStep,
                    support,
                    weight,
                    form: times_free(tail, nt, &free, &pre),
                });
                // Larger values of that variable fall in the last part.
            }
            if !free.is_empty() || hits.iter().any(|h| h.len() != 1) {
                return Err(Error::check(format!(
                    "support pattern {:?} with nonzero weight has no closed form (incidence hypothesis violated?)",
                    self.cox.labels_of(self.mask(&zero_g, &s))
                )));
            }
            let vars: Vec<usize> = hits.iter().map(|h| h[0].0).collect();
            let a: Vec<u32> = hits.iter().map(|h| h[0].1).collect();
            // With g_{j0} = 0 and a unit exponent the shift already forces f ≥ 2.
            let form = two_min(nt, &vars, &a, g, j0)?;
            pieces.push(Piece { part: Part::MinAtLeastTwo, shape: Shape::TwoMin, support, weight, form });
        }
        Ok(pieces)
    }

    pub fn appendix_decomposition(&self, g: &[u32], j0: usize, cap: u32) -> Result<AppendixReport> {
        if self.n_j() != 3 {
            return Err(Error::input("surface", "the three-part split is implemented for surfaces (#J = 3)"));
        }
        let nt = self.n_i();
        let direct = self.appendix_direct(g, j0, cap);
        let (_, f1) = self.j0_direct(g, j0, cap);
        let (f, _) = self.j0_direct(g, j0, cap);
        let f2 = f.sub(&f1);
        let sum = direct[0].add(&direct[1]).add(&direct[2]);
        if let Some(d) = sum.first_difference(&f2) {
            return Err(Error::check(format!("three parts do not sum to F_(j0,2) for g={g:?}, j0={j0}: {d}")));
        }
        let pieces = self.appendix_pieces(g, j0)?;
        // Per support pattern: the direct part restricted to supp f = S.
        for p in &pieces {
            let idx = Part::ALL.iter().position(|&x| x == p.part).unwrap();
            let mut restricted = MultiPoly::zero(nt);
            for (e, c) in direct[idx].poly.terms() {
                let supp: u32 = e[2..].iter().enumerate().fold(0, |m, (k, &x)| m | ((x > 0) as u32) << k);
                if supp == p.support {
                    restricted.add_term(e.clone(), c.clone());
                }
            }
            let mut expanded = p.form.expand(nt, cap);
            expanded.poly = expanded.poly.scale(&BigInt::from(p.weight));
            // The unit-step and the ≥ 2 pieces share a support pattern but live
            // in different parts, so the comparison is per part.
            if let Some(d) = TruncatedSeries::new(restricted, cap).first_difference(&expanded) {
                return Err(Error::check(format!(
                    "closed form {:?} for support {:#b} differs for g={g:?}, j0={j0}: {d}",
                    p.shape, p.support
                )));
            }
        }
        let size: u32 = g.iter().sum();
        let certificates = pieces.iter().map(|p| certify_m_controlled(&p.form, size as i64)).collect();
        Ok(AppendixReport { g: g.to_vec(), j0, cap, direct, pieces, certificates })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::builtin_sextic_a1;

    #[test]
    fn tail_with_two_variable_block() {
        // Blocks {t0, t1} with weights (1, 2), offset 0, and {t2} with weight
        // 1, offset 1; free variable t3 is not involved.
        let blocks = vec![(vec![(0, 1), (1, 2)], 0), (vec![(2, 1)], 1)];
        let cap = 6;
        let mut direct = MultiPoly::zero(4);
        for f in box_vectors(4, cap) {
            if f[0] == 0 || f[1] == 0 || f[2] == 0 || f[3] != 0 {
                continue;
            }
            let min = (f[0] + 2 * f[1]).min(1 + f[2]);
            if min < 2 {
                continue;
            }
            direct = direct.add(&MultiPoly::monomial(4, 1, 0, min, &f)).sub(&MultiPoly::monomial(4, 1, 0, 1, &f));
        }
        let closed = min_tail(4, &blocks).unwrap().expand(4, cap);
        assert_eq!(TruncatedSeries::new(direct, cap).first_difference(&closed), None);
    }

    #[test]
    fn sextic_split_is_exact() {
        let s = builtin_sextic_a1();
        let sys = LocalSystem::new(&s, &s.default_choice().unwrap()).unwrap();
        for g in sys.all_g() {
            for j0 in 0..3 {
                let r = sys.appendix_decomposition(&g, j0, 4).unwrap();
                assert!(r.all_certified(), "{g:?} {j0}");
            }
        }
    }
}
