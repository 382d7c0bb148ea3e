use super::poly::{self, mul_mod, add_mod};
use super::{irreducibles_of_degree, ClosedPoint, CurveContext, EffectiveDivisor};

/// Binary form Σ c_k X^k Y^{d−k}; `coeffs[k] = c_k`, so its length is d + 1.
/// The zero form of any degree is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Section {
    coeffs: Vec<u64>,
}

impl Section {
    pub fn from_coeffs(coeffs: Vec<u64>) -> Self {
        assert!(!coeffs.is_empty(), "a form has at least one coefficient");
        Section { coeffs }
    }

    pub fn one() -> Self {
        Section { coeffs: vec![1] }
    }

    pub fn zero(degree: usize) -> Self {
        Section { coeffs: vec![0; degree + 1] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn mul(&self, other: &Section, ctx: CurveContext) -> Section {
        let p = ctx.q;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(a, b, p), p);
            }
        }
        Section { coeffs: out }
    }

    pub fn pow(&self, e: u32, ctx: CurveContext) -> Section {
        (0..e).fold(Section::one(), |acc, _| acc.mul(self, ctx))
    }

    /// Order of vanishing at infinity; `None` for the zero form.
    pub fn infinity_order(&self) -> Option<usize> {
        poly::degree(&self.coeffs).map(|deg| self.degree() - deg)
    }

    /// The dehomogenized polynomial in x, trimmed.
    pub fn affine(&self) -> Vec<u64> {
        poly::trim(self.coeffs.clone())
    }
}

/// The canonical section of O(D): a form whose divisor of zeros is exactly D.
pub fn section_of(ctx: CurveContext, d: &EffectiveDivisor) -> Section {
    d.iter().fold(Section::one(), |acc, (pt, m)| acc.mul(&pt.form().pow(m, ctx), ctx))
}

/// Divisor of zeros of a nonzero form.
pub fn vanishing_divisor(ctx: CurveContext, s: &Section) -> Option<EffectiveDivisor> {
    let inf = s.infinity_order()?;
    let mut out = EffectiveDivisor::zero();
    out.add_point(ClosedPoint::Infinity, inf as u32);
    let mut f = poly::monic(&s.affine(), ctx.q);
    let mut n = 1;
    while poly::degree(&f).unwrap_or(0) >= n {
        for pi in irreducibles_of_degree(ctx.q, n) {
            loop {
                let (quo, r) = poly::divrem(&f, &pi, ctx.q);
                if !r.is_empty() {
                    break;
                }
                f = quo;
                out.add_point(ClosedPoint::Finite(pi.clone()), 1);
            }
        }
        n += 1;
    }
    Some(out)
}

/// Degree of the gcd divisor of a family of nonzero forms.
pub fn gcd_degree(ctx: CurveContext, forms: &[&Section]) -> Option<usize> {
    let mut inf = usize::MAX;
    let mut g: Vec<u64> = Vec::new();
    for s in forms {
        inf = inf.min(s.infinity_order()?);
        g = poly::gcd(&g, &s.affine(), ctx.q);
    }
    Some(inf + poly::degree(&g).unwrap_or(0))
}
