//! Power series truncated at a per-variable t-degree cap, rational forms
//! Σ P / Π(1 − ρ^m τ^n t^d), and the growth certificate on such forms.

use super::poly::{Laurent, MultiPoly, RatFn, RHO, TAU};
use crate::linalg::Q;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub poly: MultiPoly,
    pub cap: u32,
}

impl TruncatedSeries {
    pub fn new(poly: MultiPoly, cap: u32) -> Self {
        TruncatedSeries { poly: poly.truncate(cap), cap }
    }

    pub fn zero(nt: usize, cap: u32) -> Self {
        TruncatedSeries { poly: MultiPoly::zero(nt), cap }
    }

    pub fn n_t(&self) -> usize {
        self.poly.n_t()
    }

    pub fn add(&self, o: &Self) -> Self {
        TruncatedSeries { poly: self.poly.add(&o.poly), cap: self.cap.min(o.cap) }.retruncate()
    }

    pub fn sub(&self, o: &Self) -> Self {
        TruncatedSeries { poly: self.poly.sub(&o.poly), cap: self.cap.min(o.cap) }.retruncate()
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> Self {
        TruncatedSeries { poly: self.poly.mul_capped(p, Some(self.cap)), cap: self.cap }
    }

    /// Multiply by 1/(1 − ρ^m τ^n t^d); `d` must be nonzero.
    pub fn div_binomial(&self, den: &Denominator) -> Self {
        assert!(den.d.iter().any(|&x| x > 0), "geometric factor needs a t-exponent");
        let mut out = self.poly.clone();
        let mut power = self.poly.clone();
        loop {
            power = power.shift(den.m, den.n, &den.d).truncate(self.cap);
            if power.is_zero() {
                break;
            }
            out = out.add(&power);
        }
        TruncatedSeries { poly: out, cap: self.cap }
    }

    fn retruncate(self) -> Self {
        let cap = self.cap;
        TruncatedSeries { poly: self.poly.truncate(cap), cap }
    }

    pub fn first_difference(&self, o: &Self) -> Option<String> {
        let a = self.poly.truncate(self.cap.min(o.cap));
        let b = o.poly.truncate(self.cap.min(o.cap));
        a.first_difference(&b)
            .map(|(e, x, y)| format!("{}: {} vs {}", MultiPoly::format_monomial(&e), x, y))
    }
}

/// The factor 1 − ρ^m τ^n Π t_i^{d_i}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Denominator {
    pub m: u32,
    pub n: u32,
    pub d: Vec<u32>,
}

impl Denominator {
    pub fn new(m: u32, n: u32, d: Vec<u32>) -> Self {
        Denominator { m, n, d }
    }

    /// 1 − t_i.
    pub fn unit(nt: usize, i: usize) -> Self {
        let mut d = vec![0; nt];
        d[i] = 1;
        Denominator { m: 0, n: 0, d }
    }

    /// m − Σ d_i, the quantity that must be ≤ −1.
    pub fn slope(&self) -> i64 {
        self.m as i64 - self.d.iter().map(|&x| x as i64).sum::<i64>()
    }

    pub fn as_poly(&self) -> MultiPoly {
        let nt = self.d.len();
        MultiPoly::one(nt).sub(&MultiPoly::monomial(nt, 1, self.m, self.n, &self.d))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlledTerm {
    pub numerator: MultiPoly,
    pub denominators: Vec<Denominator>,
}

/// Σ P / Π(1 − ρ^m τ^n t^d).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ControlledForm {
    pub terms: Vec<ControlledTerm>,
}

impl ControlledForm {
    pub fn new() -> Self {
        ControlledForm { terms: Vec::new() }
    }

    pub fn polynomial(p: MultiPoly) -> Self {
        ControlledForm { terms: vec![ControlledTerm { numerator: p, denominators: Vec::new() }] }
    }

    pub fn push(&mut self, numerator: MultiPoly, denominators: Vec<Denominator>) {
        if !numerator.is_zero() {
            self.terms.push(ControlledTerm { numerator, denominators });
        }
    }

    pub fn extend(&mut self, other: ControlledForm) {
        self.terms.extend(other.terms);
    }

    pub fn expand(&self, nt: usize, cap: u32) -> TruncatedSeries {
        let mut total = TruncatedSeries::zero(nt, cap);
        for term in &self.terms {
            let mut s = TruncatedSeries::new(term.numerator.clone(), cap);
            for den in &term.denominators {
                s = s.div_binomial(den);
            }
            total = total.add(&s);
        }
        total
    }

    /// Specialization ρ = Q, τ = 1, t_i = 1/Q as a rational function of Q.
    pub fn at_inverse_powers(&self) -> RatFn {
        let mut out = RatFn::zero();
        for term in &self.terms {
            let num = term.numerator.at_inverse_powers(0);
            let mut den = Laurent::constant(1);
            for d in &term.denominators {
                den = den.mul(&Laurent::constant(1).sub(&Laurent::monomial(1, d.slope())));
            }
            out = out.add(&RatFn { num, den });
        }
        out
    }
}

/// max over monomials ρ^a τ^b t^c of a + η·b − Σ c: the degree of
/// P(ρ, ρ^η, t⁻¹) in ρ and t jointly, up to cancellation.
pub fn deg_inverse(p: &MultiPoly, eta: &Q) -> Option<Q> {
    p.terms()
        .map(|(e, _)| {
            let c: i64 = e[2..].iter().map(|&x| x as i64).sum();
            Q::from_integer(BigInt::from(e[RHO] as i64 - c)) + eta * Q::from_integer(BigInt::from(e[TAU]))
        })
        .max()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermCertificate {
    pub term: usize,
    pub holds: bool,
    /// "nonnegative" when the τ = 1 rule applied, otherwise "eta-search".
    pub rule: &'static str,
    pub degree_at_zero: Option<String>,
    /// (ε, witnessing η) pairs for the η-search.
    pub witnesses: Vec<(String, String)>,
    pub bad_denominators: Vec<Denominator>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationReport {
    pub m: i64,
    pub holds: bool,
    pub terms: Vec<TermCertificate>,
}

/// Largest η in {1, 1/2, …, 2^-ETA_STEPS} with deg_inverse(p, η) ≤ bound.
pub fn eta_witness(p: &MultiPoly, bound: &Q) -> Option<Q> {
    let mut eta = Q::one();
    for _ in 0..=ETA_STEPS {
        if deg_inverse(p, &eta).map_or(true, |d| &d <= bound) {
            return Some(eta);
        }
        eta /= Q::from_integer(BigInt::from(2));
    }
    None
}

pub const EPSILONS: [(i64, i64); 3] = [(1, 1), (1, 2), (1, 4)];
pub const ETA_STEPS: u32 = 24;

/// Checks that every term of `cf` has denominators with slope ≤ −1 and a
/// numerator of inverse degree ≤ M − 2 (+ε with a witnessed small η).
pub fn certify_m_controlled(cf: &ControlledForm, m: i64) -> CertificationReport {
    let bound = Q::from_integer(BigInt::from(m - 2));
    let mut terms = Vec::new();
    for (k, term) in cf.terms.iter().enumerate() {
        let bad: Vec<Denominator> = term.denominators.iter().filter(|d| d.slope() > -1).cloned().collect();
        let p = &term.numerator;
        let deg0 = deg_inverse(&p.at_tau_one(), &Q::zero());
        let (rule, num_ok, witnesses) = if p.has_nonnegative_coefficients() {
            ("nonnegative", deg0.as_ref().map_or(true, |d| *d <= bound), Vec::new())
        } else {
            let mut witnesses = Vec::new();
            let mut ok = true;
            for &(en, ed) in &EPSILONS {
                let eps = Q::new(BigInt::from(en), BigInt::from(ed));
                let found = eta_witness(p, &(&bound + &eps));
                match found {
                    Some(eta) => witnesses.push((eps.to_string(), eta.to_string())),
                    None => ok = false,
                }
            }
            ("eta-search", ok, witnesses)
        };
        terms.push(TermCertificate {
            term: k,
            holds: num_ok && bad.is_empty(),
            rule,
            degree_at_zero: deg0.map(|d| d.to_string()),
            witnesses,
            bad_denominators: bad,
        });
    }
    CertificationReport { m, holds: terms.iter().all(|t| t.holds), terms }
}
