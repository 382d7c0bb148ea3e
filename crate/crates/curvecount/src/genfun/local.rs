//! Local series at one closed point: F_g and its clamped part F_{1,g}, the
//! j₀-variants weighted by |ν°|, their closed forms, and the majorant of the
//! clamped j₀-series.

use super::numerators::FInstance;
use super::poly::MultiPoly;
use super::series::{certify_m_controlled, CertificationReport, ControlledForm, Denominator, TruncatedSeries};
use crate::error::{Error, Result};
use crate::linalg::Q;
use crate::moebius::{Moebius, NuTable};
use crate::surface::{AdmissibleChoice, CoxPresentation};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// A surface with a fixed admissible choice, viewed through I-positions:
/// t-variable k of every series is the generator `choice.i[k]`.
#[derive(Debug, Clone)]
pub struct LocalSystem {
    pub cox: CoxPresentation,
    pub choice: AdmissibleChoice,
    pub mu: Moebius,
    pub nu: NuTable,
    /// Per J-position, the I-positions of the block with their exponents.
    pub blocks: Vec<Vec<(usize, u32)>>,
}

impl LocalSystem {
    pub fn new(cox: &CoxPresentation, choice: &AdmissibleChoice) -> Result<Self> {
        let report = cox.check_face_hypothesis(choice);
        if !report.holds {
            return Err(Error::check(format!(
                "incidence hypothesis fails: oversized {:?}, transversals without unit exponent {:?}",
                report.oversized, report.bad_transversals
            )));
        }
        let mu = Moebius::new(cox);
        let nu = NuTable::new(&mu, choice);
        let blocks = choice
            .blocks
            .iter()
            .map(|b| b.iter().map(|&(i, e)| (choice.ipos(i).expect("block inside I"), e)).collect())
            .collect();
        Ok(LocalSystem { cox: cox.clone(), choice: choice.clone(), mu, nu, blocks })
    }

    pub fn n_i(&self) -> usize {
        self.choice.i.len()
    }

    pub fn n_j(&self) -> usize {
        self.choice.j.len()
    }

    /// g_j + Σ_{i∈I_j} a_i f_i for each j.
    pub fn block_values(&self, g: &[u32], f: &[u32]) -> Vec<u32> {
        self.blocks
            .iter()
            .zip(g)
            .map(|(b, &gj)| gj + b.iter().map(|&(i, a)| a * f[i]).sum::<u32>())
            .collect()
    }

    /// Generator mask of (g, m) with unit entries.
    pub fn mask(&self, g: &[u32], m: &[u32]) -> u32 {
        let mut mask = 0;
        for (k, &j) in self.choice.j.iter().enumerate() {
            if g[k] > 0 {
                mask |= 1 << j;
            }
        }
        for (k, &i) in self.choice.i.iter().enumerate() {
            if m[k] > 0 {
                mask |= 1 << i;
            }
        }
        mask
    }

    pub fn all_g(&self) -> Vec<Vec<u32>> {
        binary_vectors(self.n_j())
    }

    /// Transversals of the blocks inside I, as I-position lists aligned with J.
    pub fn transversals(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for b in &self.blocks {
            let mut next = Vec::new();
            for prefix in &out {
                for &(i, _) in b {
                    let mut p: Vec<usize> = prefix.clone();
                    p.push(i);
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }

    pub fn exponent_of(&self, ipos: usize) -> Option<u32> {
        self.blocks.iter().flatten().find(|(i, _)| *i == ipos).map(|&(_, a)| a)
    }
}

pub fn binary_vectors(n: usize) -> Vec<Vec<u32>> {
    (0u32..1 << n).map(|m| (0..n).map(|k| m >> k & 1).collect()).collect()
}

/// All f ∈ {0..cap}^n.
pub fn box_vectors(n: usize, cap: u32) -> impl Iterator<Item = Vec<u32>> {
    let total = (cap as usize + 1).pow(n as u32);
    (0..total).map(move |mut c| {
        let mut f = vec![0; n];
        for x in f.iter_mut().rev() {
            *x = (c % (cap as usize + 1)) as u32;
            c /= cap as usize + 1;
        }
        f
    })
}

pub fn unit_product(nt: usize, vars: impl IntoIterator<Item = usize>) -> MultiPoly {
    vars.into_iter().fold(MultiPoly::one(nt), |p, i| p.mul(&MultiPoly::one(nt).sub(&MultiPoly::t(nt, i))))
}

/// 1 − Π_{i∈block}(1 − t_i).
fn block_hit(nt: usize, block: &[(usize, u32)]) -> MultiPoly {
    MultiPoly::one(nt).sub(&unit_product(nt, block.iter().map(|&(i, _)| i)))
}

fn t_power(nt: usize, f: &[u32]) -> MultiPoly {
    MultiPoly::monomial(nt, 1, 0, 0, f)
}

#[derive(Debug, Clone)]
pub struct LocalSeries {
    pub g: Vec<u32>,
    pub f: TruncatedSeries,
    pub f1: TruncatedSeries,
    pub f2: TruncatedSeries,
    pub h1: MultiPoly,
    pub h2: ControlledForm,
    pub h1_certificate: CertificationReport,
    pub h2_certificate: CertificationReport,
}

impl LocalSystem {
    /// Closed form of H_{1,g} = Π(1−t)·F_{1,g}.
    pub fn h1_closed(&self, g: &[u32]) -> MultiPoly {
        let nt = self.n_i();
        let one = MultiPoly::one(nt);
        let rho_minus_one = MultiPoly::rho(nt).sub(&one);
        let mut h = MultiPoly::zero(nt);
        for m in binary_vectors(nt) {
            let mu = self.mu.mu_mask(self.mask(g, &m));
            if mu == 0 {
                continue;
            }
            let vals = self.block_values(g, &m);
            let prod = self
                .blocks
                .iter()
                .zip(&vals)
                .filter(|(_, &v)| v == 0)
                .fold(one.clone(), |p, (b, _)| p.mul(&block_hit(nt, b)));
            let bracket = one.add(&rho_minus_one.mul(&prod));
            h = h.add(&t_power(nt, &m).mul(&bracket).scale(&BigInt::from(mu)));
        }
        h
    }

    /// Closed form of H_{2,g}: one rational term per transversal K in the
    /// incidence complex, built from the numerator F̃ of the Min-series on K.
    pub fn h2_closed(&self, g: &[u32]) -> Result<ControlledForm> {
        let nt = self.n_i();
        let mut out = ControlledForm::new();
        for k in self.transversals() {
            let mut fk = vec![0; nt];
            for &i in &k {
                fk[i] = 1;
            }
            let weight = self.nu.nu_mask(self.mask(g, &vec![0; nt]), self.mask(&vec![0; self.n_j()], &fk));
            if weight == 0 {
                continue;
            }
            let a: Vec<u32> = k.iter().map(|&i| self.exponent_of(i).unwrap()).collect();
            let (shift, nu_shifted) = shifted_offsets(&a, g);
            let inst = FInstance::singletons(a.clone(), nu_shifted);
            let ft = inst.numerator_ftilde()?.remap_t(nt, &k);
            let m = super::numerators::lcm_all(a.iter().copied());
            let mut e = vec![0; nt];
            for (&i, &ai) in k.iter().zip(&a) {
                e[i] = m / ai;
            }
            let den = Denominator::new(m, 0, e);
            let mut mono = vec![0; nt];
            for (&i, &s) in k.iter().zip(&shift) {
                mono[i] = s;
            }
            let rho = MultiPoly::rho(nt);
            let bracket = rho.mul(&ft).sub(&den.as_poly());
            let outside = unit_product(nt, (0..nt).filter(|i| !k.contains(i)));
            let num = rho.mul(&t_power(nt, &mono)).mul(&bracket).mul(&outside).scale(&BigInt::from(weight));
            out.push(num, vec![den]);
        }
        Ok(out)
    }

    pub fn local_f_series(&self, g: &[u32], cap: u32) -> Result<LocalSeries> {
        let nt = self.n_i();
        let mut f = MultiPoly::zero(nt);
        let mut f1 = MultiPoly::zero(nt);
        for fv in box_vectors(nt, cap) {
            let nu = self.nu.nu_zero(g, &fv);
            if nu == 0 {
                continue;
            }
            let a = *self.block_values(g, &fv).iter().min().unwrap();
            let mut e = vec![a, 0];
            e.extend(&fv);
            f.add_term(e.clone(), BigInt::from(nu));
            e[0] = a.min(1);
            f1.add_term(e, BigInt::from(nu));
        }
        let f = TruncatedSeries::new(f, cap);
        let f1 = TruncatedSeries::new(f1, cap);
        let f2 = f.sub(&f1);
        let clear = unit_product(nt, 0..nt);
        let h1_direct = f1.mul_poly(&clear);
        let h1 = self.h1_closed(g);
        if let Some(d) = h1_direct.first_difference(&TruncatedSeries::new(h1.clone(), cap)) {
            return Err(Error::check(format!("H1 closed form differs from truncation for g={g:?} at {d}")));
        }
        let h2 = self.h2_closed(g)?;
        let h2_direct = f2.mul_poly(&clear);
        if let Some(d) = h2_direct.first_difference(&h2.expand(nt, cap)) {
            return Err(Error::check(format!("H2 closed form differs from truncation for g={g:?} at {d}")));
        }
        let size: u32 = g.iter().sum();
        let h1_certificate = if size == 0 {
            certify_m_controlled(&ControlledForm::polynomial(h1.sub(&MultiPoly::one(nt))), 0)
        } else {
            certify_m_controlled(&ControlledForm::polynomial(h1.clone()), size as i64)
        };
        let h2_certificate = certify_m_controlled(&h2, size as i64);
        Ok(LocalSeries { g: g.to_vec(), f, f1, f2, h1, h2, h1_certificate, h2_certificate })
    }
}

/// Shift that makes every Min-entry ≥ 2 on a transversal, and the offsets
/// that remain after extracting ρ² (or τ²): unit-exponent entries start at
/// 2 − g_j with offset 0, the others at 1 with offset g_j + a_j − 2.
pub fn shifted_offsets(a: &[u32], g: &[u32]) -> (Vec<u32>, Vec<u32>) {
    a.iter()
        .zip(g)
        .map(|(&aj, &gj)| if aj == 1 { (2 - gj, 0) } else { (1, gj + aj - 2) })
        .unzip()
}

#[derive(Debug, Clone)]
pub struct LocalJ0Series {
    pub g: Vec<u32>,
    pub j0: usize,
    pub f: TruncatedSeries,
    pub f1: TruncatedSeries,
    pub f2: TruncatedSeries,
    /// The majorant numerator with nonnegative series H/Π(1 − t).
    pub h: MultiPoly,
    pub certificate: CertificationReport,
}

pub const SAMPLE_POINTS: [((i64, i64), (i64, i64)); 5] = [((1, 2), (1, 3)), ((1, 1), (1, 1)), ((2, 1), (5, 1)), ((7, 1), (3, 2)), ((3, 1), (1, 7))];

impl LocalSystem {
    /// Majorant numerator for the clamped j₀-series. `tau_coefficient` is the
    /// coefficient of the extra term used when block j₀ is empty: τ gives the
    /// majorant, τ − 1 gives the exact numerator of the upper bound series.
    fn majorant(&self, g: &[u32], j0: usize, exact: bool) -> MultiPoly {
        let nt = self.n_i();
        let one = MultiPoly::one(nt);
        let rho_tau_minus_one = MultiPoly::monomial(nt, 1, 1, 1, &[]).sub(&one);
        let extra_coeff = if exact { MultiPoly::tau(nt).sub(&one) } else { MultiPoly::tau(nt) };
        let mut h = MultiPoly::zero(nt);
        for m in binary_vectors(nt) {
            let mu = self.mu.mu_mask(self.mask(g, &m)).abs();
            if mu == 0 {
                continue;
            }
            let vals = self.block_values(g, &m);
            let hit = |skip: Option<usize>| {
                self.blocks
                    .iter()
                    .zip(&vals)
                    .enumerate()
                    .filter(|&(j, (_, &v))| v == 0 && Some(j) != skip)
                    .fold(one.clone(), |p, (_, (b, _))| p.mul(&block_hit(nt, b)))
            };
            let mut hm = one.add(&rho_tau_minus_one.mul(&hit(None)));
            if vals[j0] == 0 {
                let empty_j0 = unit_product(nt, self.blocks[j0].iter().map(|&(i, _)| i));
                hm = hm.add(&extra_coeff.mul(&empty_j0).mul(&hit(Some(j0))));
            }
            h = h.add(&t_power(nt, &m).mul(&hm).scale(&BigInt::from(mu)));
        }
        h
    }

    pub fn local_fj0_series(&self, g: &[u32], j0: usize, cap: u32) -> Result<LocalJ0Series> {
        let nt = self.n_i();
        let (f, f1) = self.j0_direct(g, j0, cap);
        let f2 = f.sub(&f1);
        let clear = |p: &MultiPoly| {
            (0..nt).fold(TruncatedSeries::new(p.clone(), cap), |s, i| s.div_binomial(&Denominator::unit(nt, i)))
        };
        let h = self.majorant(g, j0, false);
        let upper = clear(&h);
        if !upper.poly.has_nonnegative_coefficients() {
            return Err(Error::check(format!("majorant series has a negative coefficient for g={g:?}, j0={j0}")));
        }
        // The unclamped bound Σ_f Σ_{f'≤f} |μ°| ρ^{..} τ^{..} t^f, summed directly.
        let bound = self.j0_bound_direct(g, j0, cap);
        if let Some(d) = clear(&self.majorant(g, j0, true)).first_difference(&bound) {
            return Err(Error::check(format!("majorant bound series mismatch for g={g:?}, j0={j0} at {d}")));
        }
        let slack = upper.sub(&f1);
        if !slack.poly.has_nonnegative_coefficients() {
            return Err(Error::check(format!("majorant inequality fails for g={g:?}, j0={j0}")));
        }
        for ((rn, rd), (tn, td)) in SAMPLE_POINTS {
            let rho = Q::new(rn.into(), rd.into());
            let tau = Q::new(tn.into(), td.into());
            let lhs = f1.poly.eval_rho_tau(&rho, &tau);
            let rhs = upper.poly.eval_rho_tau(&rho, &tau);
            for (e, v) in &lhs {
                if rhs.get(e).cloned().unwrap_or_else(Q::zero) < *v {
                    return Err(Error::check(format!(
                        "majorant fails at rho={rho}, tau={tau}, t^{e:?} for g={g:?}, j0={j0}"
                    )));
                }
            }
        }
        let size: u32 = g.iter().sum();
        let certificate = if size == 0 {
            certify_m_controlled(&ControlledForm::polynomial(h.sub(&MultiPoly::one(nt))), 0)
        } else {
            certify_m_controlled(&ControlledForm::polynomial(h.clone()), size as i64)
        };
        Ok(LocalJ0Series { g: g.to_vec(), j0, f, f1, f2, h, certificate })
    }

    fn j0_exponents(&self, g: &[u32], f: &[u32], j0: usize) -> (u32, u32) {
        let vals = self.block_values(g, f);
        let a = *vals.iter().min().unwrap();
        let b = vals.iter().enumerate().filter(|&(j, _)| j != j0).map(|(_, &v)| v).min().unwrap_or(a);
        (a, b)
    }

    /// F_{j0,g} and F_{j0,1,g} by direct summation.
    pub fn j0_direct(&self, g: &[u32], j0: usize, cap: u32) -> (TruncatedSeries, TruncatedSeries) {
        let nt = self.n_i();
        let mut f = MultiPoly::zero(nt);
        let mut f1 = MultiPoly::zero(nt);
        for fv in box_vectors(nt, cap) {
            let nu = self.nu.nu_zero(g, &fv).abs();
            if nu == 0 {
                continue;
            }
            let (a, b) = self.j0_exponents(g, &fv, j0);
            let mut e = vec![a, b];
            e.extend(&fv);
            f.add_term(e.clone(), BigInt::from(nu));
            e[0] = a.min(1);
            e[1] = b.min(1);
            f1.add_term(e, BigInt::from(nu));
        }
        (TruncatedSeries::new(f, cap), TruncatedSeries::new(f1, cap))
    }

    fn j0_bound_direct(&self, g: &[u32], j0: usize, cap: u32) -> TruncatedSeries {
        let nt = self.n_i();
        let mut s = MultiPoly::zero(nt);
        let small: Vec<(Vec<u32>, i64)> = binary_vectors(nt)
            .into_iter()
            .map(|m| {
                let v = self.mu.mu_mask(self.mask(g, &m)).abs();
                (m, v)
            })
            .filter(|(_, v)| *v != 0)
            .collect();
        for fv in box_vectors(nt, cap) {
            let w: i64 = small.iter().filter(|(m, _)| m.iter().zip(&fv).all(|(a, b)| a <= b)).map(|(_, v)| v).sum();
            if w == 0 {
                continue;
            }
            let (a, b) = self.j0_exponents(g, &fv, j0);
            let mut e = vec![a.min(1), b.min(1)];
            e.extend(&fv);
            s.add_term(e, BigInt::from(w));
        }
        TruncatedSeries::new(s, cap)
    }
}

/// Whether the coefficient of every monomial is nonnegative after evaluation.
pub fn dominates(upper: &MultiPoly, lower: &MultiPoly) -> bool {
    upper.sub(lower).terms().all(|(_, c)| !c.is_negative())
}
