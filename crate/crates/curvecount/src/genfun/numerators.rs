//! The min-exponent series
//!
//!   F(ρ, a, ν, t) = Σ_d ρ^{Min_j(ν_j + Σ_{i∈I_j} a_i d_i)} t^d
//!
//! and its two-variable relative G (with τ tracking the Min over J∖{j₀}),
//! together with the polynomial numerators obtained by clearing the
//! denominators that make them rational.

use super::dense::{Cell, DenseBox};
use super::poly::MultiPoly;
use super::series::TruncatedSeries;
use crate::error::{Error, Result};
use crate::linalg::Q;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

pub fn lcm_all(xs: impl IntoIterator<Item = u32>) -> u32 {
    xs.into_iter().fold(1, |m, x| m.lcm(&x))
}

/// F-type instance: weights on I, offsets on J, and the partition of I into
/// blocks I_j (as positions 0..n).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FInstance {
    pub a: Vec<u32>,
    pub nu: Vec<u32>,
    pub blocks: Vec<Vec<usize>>,
}

/// One transversal K (one index per block) with m_K = lcm of its weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transversal {
    pub members: Vec<usize>,
    pub m: u32,
    /// m_K / a_i on K, zero elsewhere.
    pub exponent: Vec<u32>,
}

impl FInstance {
    pub fn new(a: Vec<u32>, nu: Vec<u32>, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n = a.len();
        let mut seen = vec![false; n];
        if blocks.len() != nu.len() || blocks.is_empty() {
            return Err(Error::input("blocks", "one offset per block, at least one block"));
        }
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::input("blocks", "empty block"));
            }
            for &i in b {
                if i >= n || seen[i] {
                    return Err(Error::input("blocks", "blocks must partition the variables"));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) || a.iter().any(|&x| x == 0) {
            return Err(Error::input("blocks", "blocks must cover every variable; weights positive"));
        }
        Ok(FInstance { a, nu, blocks })
    }

    /// Singleton blocks: the shape met in the local series.
    pub fn singletons(a: Vec<u32>, nu: Vec<u32>) -> Self {
        let blocks = (0..a.len()).map(|i| vec![i]).collect();
        FInstance { a, nu, blocks }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    fn block_of(&self, i: usize) -> usize {
        self.blocks.iter().position(|b| b.contains(&i)).expect("partition covers I")
    }

    pub fn min_exponent(&self, d: &[usize]) -> u32 {
        self.blocks
            .iter()
            .zip(&self.nu)
            .map(|(b, &v)| v + b.iter().map(|&i| self.a[i] * d[i] as u32).sum::<u32>())
            .min()
            .expect("nonempty")
    }

    pub fn transversals(&self) -> Vec<Transversal> {
        let mut out = Vec::new();
        let mut pick = vec![0usize; self.blocks.len()];
        loop {
            let members: Vec<usize> = pick.iter().zip(&self.blocks).map(|(&k, b)| b[k]).collect();
            let m = lcm_all(members.iter().map(|&i| self.a[i]));
            let mut exponent = vec![0; self.n()];
            for &i in &members {
                exponent[i] = m / self.a[i];
            }
            out.push(Transversal { members, m, exponent });
            let mut k = 0;
            loop {
                if k == pick.len() {
                    return out;
                }
                pick[k] += 1;
                if pick[k] < self.blocks[k].len() {
                    break;
                }
                pick[k] = 0;
                k += 1;
            }
        }
    }

    /// Coefficients at exponents d with d_i ≥ B_i vanish, where
    /// B_i = 1 + (Σ_K m_K + Max_j |ν_j − ν_{j(i)}|)/a_i.
    pub fn support_bound(&self) -> Vec<Q> {
        let sum_m: u32 = self.transversals().iter().map(|k| k.m).sum();
        (0..self.n())
            .map(|i| {
                let vi = self.nu[self.block_of(i)] as i64;
                let spread = self.nu.iter().map(|&v| (v as i64 - vi).abs()).max().unwrap_or(0);
                Q::from_integer(BigInt::from(1))
                    + Q::new(BigInt::from(sum_m as i64 + spread), BigInt::from(self.a[i]))
            })
            .collect()
    }

    /// Smallest integer exponent at which vanishing is guaranteed, per variable.
    pub fn support_box(&self) -> Vec<usize> {
        self.support_bound().iter().map(|b| b.ceil().to_integer().to_usize().unwrap()).collect()
    }

    pub fn series_f(&self, cap: u32) -> TruncatedSeries {
        let n = self.n();
        let dims = vec![cap as usize + 1; n];
        let b = DenseBox::fill(dims, |d| vec![((self.min_exponent(d), 0), 1)]);
        TruncatedSeries::new(b.to_poly(|_| true), cap)
    }

    /// Π_K(1 − ρ^{m_K} t^{e_K}) Π_i(1 − t_i) · F on the box `dims`.
    pub fn product_box(&self, dims: Vec<usize>) -> DenseBox {
        let mut b = DenseBox::fill(dims, |d| vec![((self.min_exponent(d), 0), 1)]);
        for i in 0..self.n() {
            let mut e = vec![0; self.n()];
            e[i] = 1;
            b.mul_binomial(0, 0, &e);
        }
        for k in self.transversals() {
            let e: Vec<usize> = k.exponent.iter().map(|&x| x as usize).collect();
            b.mul_binomial(k.m, 0, &e);
        }
        b
    }

    /// The numerator F̃ as an exact polynomial. The product is carried one
    /// layer past the support bound and that layer must vanish.
    pub fn numerator_ftilde(&self) -> Result<MultiPoly> {
        let bx = self.support_box();
        let dims: Vec<usize> = bx.iter().map(|&b| b + 1).collect();
        let b = self.product_box(dims);
        if let Some(d) = b.nonzero_where(|d| d.iter().zip(&bx).any(|(x, y)| x >= y)) {
            return Err(Error::check(format!("F~ coefficient beyond support bound at t^{d:?} for {self:?}")));
        }
        Ok(b.to_poly(|_| true))
    }

    pub fn coefficient_formula(&self) -> CoefficientFormula {
        CoefficientFormula::new(self)
    }
}

/// The closed expression for the coefficients of F̃:
///
///   α(d) = Σ_μ (−1)^{|μ|} W(d − μ) ρ^{Min_j(ν_j + Σ_{I_j} a_i(d_i − μ_i))}
///
/// where W(r) sums (−1)^{|γ|} over sets γ of transversals whose combined
/// exponent Σ_{K∈γ} e_K fits under r.
#[derive(Debug, Clone)]
pub struct CoefficientFormula {
    inst: FInstance,
    loads: Vec<(i64, Vec<usize>)>,
}

impl CoefficientFormula {
    pub fn new(inst: &FInstance) -> Self {
        let ks = inst.transversals();
        let mut loads = Vec::with_capacity(1 << ks.len());
        for mask in 0u32..1 << ks.len() {
            let mut load = vec![0usize; inst.n()];
            for (k, t) in ks.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    for (l, e) in load.iter_mut().zip(&t.exponent) {
                        *l += *e as usize;
                    }
                }
            }
            let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
            loads.push((sign, load));
        }
        CoefficientFormula { inst: inst.clone(), loads }
    }

    /// W on the whole box `dims`, by accumulating signs at loads and taking
    /// prefix sums along each axis.
    pub fn w_table(&self, dims: &[usize]) -> DenseBox {
        let mut table = vec![0i64; dims.iter().product()];
        let probe = DenseBox::new(dims.to_vec());
        for (s, load) in &self.loads {
            if load.iter().zip(dims).all(|(l, d)| l < d) {
                table[probe.index(load)] += s;
            }
        }
        let mut stride = 1;
        for k in (0..dims.len()).rev() {
            for idx in 0..table.len() {
                if (idx / stride) % dims[k] != 0 {
                    table[idx] += table[idx - stride];
                }
            }
            stride *= dims[k];
        }
        let mut out = DenseBox::new(dims.to_vec());
        for (idx, &w) in table.iter().enumerate() {
            if w != 0 {
                out.cells[idx] = vec![((0, 0), w)];
            }
        }
        out
    }

    fn w_direct(&self, r: &[i64]) -> i64 {
        if r.iter().any(|&x| x < 0) {
            return 0;
        }
        self.loads
            .iter()
            .filter(|(_, l)| l.iter().zip(r).all(|(&a, &b)| a as i64 <= b))
            .map(|(s, _)| s)
            .sum()
    }

    fn assemble(&self, d: &[usize], mut w: impl FnMut(&[i64]) -> i64) -> Cell {
        let n = self.inst.n();
        let mut cell: Cell = Vec::new();
        for mu in 0u32..1 << n {
            let r: Vec<i64> = (0..n).map(|i| d[i] as i64 - (mu >> i & 1) as i64).collect();
            if r.iter().any(|&x| x < 0) {
                continue;
            }
            let wv = w(&r);
            if wv == 0 {
                continue;
            }
            let ru: Vec<usize> = r.iter().map(|&x| x as usize).collect();
            let e = self.inst.min_exponent(&ru);
            let sign = if mu.count_ones() % 2 == 0 { 1 } else { -1 };
            match cell.iter_mut().find(|(k, _)| k.0 == e) {
                Some(slot) => slot.1 += sign * wv,
                None => cell.push(((e, 0), sign * wv)),
            }
        }
        super::dense::normalized(cell)
    }

    /// α(d) for one exponent, enumerating transversal subsets directly.
    pub fn coefficient(&self, d: &[usize]) -> Cell {
        self.assemble(d, |r| self.w_direct(r))
    }

    /// α on a whole box using a prefix-sum table for W.
    pub fn coefficients_on_box(&self, dims: &[usize]) -> DenseBox {
        let w = self.w_table(dims);
        let mut out = DenseBox::new(dims.to_vec());
        for idx in 0..out.cells.len() {
            let d = out.exponents(idx);
            out.cells[idx] = self.assemble(&d, |r| {
                let ru: Vec<usize> = r.iter().map(|&x| x as usize).collect();
                w.cells[w.index(&ru)].first().map_or(0, |c| c.1)
            });
        }
        out
    }
}

/// G-type instance over J with singleton blocks and a distinguished j₀.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GInstance {
    pub j0: usize,
    pub a: Vec<u32>,
    pub nu: Vec<u32>,
}

impl GInstance {
    pub fn new(j0: usize, a: Vec<u32>, nu: Vec<u32>) -> Result<Self> {
        if a.is_empty() || a.len() != nu.len() || j0 >= a.len() || a.iter().any(|&x| x == 0) {
            return Err(Error::input("j0", "J nonempty, j0 in J, weights positive"));
        }
        Ok(GInstance { j0, a, nu })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    fn others(&self) -> Vec<usize> {
        let o: Vec<usize> = (0..self.n()).filter(|&j| j != self.j0).collect();
        if o.is_empty() {
            // With J∖{j₀} empty the τ-exponent follows the full Min.
            vec![self.j0]
        } else {
            o
        }
    }

    pub fn exponents(&self, d: &[usize]) -> (u32, u32) {
        let v = |j: usize| self.nu[j] + self.a[j] * d[j] as u32;
        let r = (0..self.n()).map(v).min().unwrap();
        let t = self.others().into_iter().map(v).min().unwrap();
        (r, t)
    }

    /// (m, n): lcm of all weights and of the weights off j₀.
    pub fn lcms(&self) -> (u32, u32) {
        (lcm_all(self.a.iter().copied()), lcm_all(self.others().iter().map(|&j| self.a[j])))
    }

    fn has_second_factor(&self) -> bool {
        self.n() > 1
    }

    pub fn support_box(&self) -> Vec<usize> {
        let (m, n) = self.lcms();
        let spread = self.nu.iter().max().unwrap() - self.nu.iter().min().unwrap();
        (0..self.n()).map(|j| 1 + (m + n + spread).div_ceil(self.a[j]) as usize).collect()
    }

    pub fn series_g(&self, cap: u32) -> TruncatedSeries {
        let b = DenseBox::fill(vec![cap as usize + 1; self.n()], |d| vec![(self.exponents(d), 1)]);
        TruncatedSeries::new(b.to_poly(|_| true), cap)
    }

    pub fn product_box(&self, dims: Vec<usize>) -> DenseBox {
        let (m, n) = self.lcms();
        let mut b = DenseBox::fill(dims, |d| vec![(self.exponents(d), 1)]);
        for j in 0..self.n() {
            let mut e = vec![0; self.n()];
            e[j] = 1;
            b.mul_binomial(0, 0, &e);
        }
        let full: Vec<usize> = self.a.iter().map(|&x| (m / x) as usize).collect();
        b.mul_binomial(m, m, &full);
        if self.has_second_factor() {
            let mut part = vec![0; self.n()];
            for j in self.others() {
                part[j] = (n / self.a[j]) as usize;
            }
            b.mul_binomial(0, n, &part);
        }
        b
    }

    pub fn numerator_gtilde(&self) -> Result<MultiPoly> {
        let bx = self.support_box();
        let dims: Vec<usize> = bx.iter().map(|&b| b + 1).collect();
        let b = self.product_box(dims);
        if let Some(d) = b.nonzero_where(|d| d.iter().zip(&bx).any(|(x, y)| x >= y)) {
            return Err(Error::check(format!("G~ coefficient beyond support bound at t^{d:?} for {self:?}")));
        }
        Ok(b.to_poly(|_| true))
    }

    /// The denominator factors cleared to form G̃, as (m, n, d) triples.
    pub fn denominators(&self) -> Vec<super::series::Denominator> {
        let (m, n) = self.lcms();
        let mut out = vec![super::series::Denominator::new(m, m, self.a.iter().map(|&x| m / x).collect())];
        if self.has_second_factor() {
            let mut part = vec![0; self.n()];
            for j in self.others() {
                part[j] = n / self.a[j];
            }
            out.push(super::series::Denominator::new(0, n, part));
        }
        out
    }
}

impl FInstance {
    pub fn denominators(&self) -> Vec<super::series::Denominator> {
        self.transversals()
            .into_iter()
            .map(|k| super::series::Denominator::new(k.m, 0, k.exponent))
            .collect()
    }
}

/// Whether two box products agree cell by cell.
pub fn first_mismatch(a: &DenseBox, b: &DenseBox) -> Option<Vec<usize>> {
    (0..a.len()).find(|&idx| {
        super::dense::normalized(a.cells[idx].clone()) != super::dense::normalized(b.cells[idx].clone())
    })
    .map(|idx| a.exponents(idx))
}

pub fn is_zero_cell(c: &Cell) -> bool {
    c.iter().all(|x| x.1.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(s: &[(i64, u32, &[u32])], nt: usize) -> MultiPoly {
        s.iter().fold(MultiPoly::zero(nt), |p, (c, r, t)| p.add(&MultiPoly::monomial(nt, *c, *r, 0, t)))
    }

    #[test]
    fn series_examples() {
        let f = FInstance::singletons(vec![1], vec![0]).series_f(2);
        assert_eq!(f.poly, poly(&[(1, 0, &[0]), (1, 1, &[1]), (1, 2, &[2])], 1));
        let f = FInstance::singletons(vec![1, 1], vec![0, 0]).series_f(3);
        assert_eq!(f.poly.coeff(&[1, 0, 1, 2]), BigInt::from(1));
        let f = FInstance::singletons(vec![1], vec![5]).series_f(1);
        assert_eq!(f.poly.coeff(&[5, 0, 0]), BigInt::from(1));
    }

    #[test]
    fn numerator_closed_forms() {
        let one_minus_t = poly(&[(1, 0, &[0]), (-1, 0, &[1])], 1);
        assert_eq!(FInstance::singletons(vec![1], vec![0]).numerator_ftilde().unwrap(), one_minus_t);
        let f = FInstance::new(vec![1, 1], vec![0], vec![vec![0, 1]]).unwrap().numerator_ftilde().unwrap();
        assert_eq!(f, poly(&[(1, 0, &[0, 0]), (-1, 0, &[1, 0]), (-1, 0, &[0, 1]), (1, 0, &[1, 1])], 2));
        let f = FInstance::singletons(vec![1, 1], vec![0, 0]).numerator_ftilde().unwrap();
        assert_eq!(f, poly(&[(1, 0, &[0, 0]), (-1, 0, &[1, 1])], 2));
    }

    #[test]
    fn formula_matches_product() {
        let inst = FInstance::new(vec![2, 1, 3], vec![1, 0], vec![vec![0, 1], vec![2]]).unwrap();
        let dims: Vec<usize> = inst.support_box().iter().map(|b| b + 1).collect();
        let prod = inst.product_box(dims.clone());
        let formula = inst.coefficient_formula().coefficients_on_box(&dims);
        assert_eq!(first_mismatch(&prod, &formula), None);
        let d = vec![3, 1, 2];
        let direct = inst.coefficient_formula().coefficient(&d);
        assert_eq!(direct, super::super::dense::normalized(prod.cells[prod.index(&d)].clone()));
    }

    #[test]
    fn g_single_variable() {
        let g = GInstance::new(0, vec![1], vec![0]).unwrap().numerator_gtilde().unwrap();
        assert_eq!(g, poly(&[(1, 0, &[0]), (-1, 0, &[1])], 1));
    }
}
