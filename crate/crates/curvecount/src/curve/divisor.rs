use super::{closed_points, ClosedPoint, CurveContext};
use std::collections::BTreeMap;

/// Finite formal sum of closed points with positive multiplicities.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EffectiveDivisor {
    mult: BTreeMap<ClosedPoint, u32>,
}

impl EffectiveDivisor {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn point(p: ClosedPoint) -> Self {
        Self::from_pairs([(p, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (ClosedPoint, u32)>) -> Self {
        let mut d = Self::zero();
        for (p, m) in pairs {
            d.add_point(p, m);
        }
        d
    }

    pub fn add_point(&mut self, p: ClosedPoint, m: u32) {
        if m > 0 {
            *self.mult.entry(p).or_insert(0) += m;
        }
    }

    pub fn multiplicity(&self, p: &ClosedPoint) -> u32 {
        self.mult.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u64 {
        self.mult.iter().map(|(p, &m)| p.degree() as u64 * m as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.mult.is_empty()
    }

    /// All multiplicities at most one.
    pub fn is_reduced(&self) -> bool {
        self.mult.values().all(|&m| m <= 1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ClosedPoint, u32)> {
        self.mult.iter().map(|(p, &m)| (p, m))
    }

    pub fn support(&self) -> impl Iterator<Item = &ClosedPoint> {
        self.mult.keys()
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (p, m) in other.iter() {
            out.add_point(p.clone(), m);
        }
        out
    }

    pub fn scaled(&self, k: u32) -> Self {
        Self::from_pairs(self.iter().map(|(p, m)| (p.clone(), m * k)))
    }

    pub fn le(&self, other: &Self) -> bool {
        self.iter().all(|(p, m)| m <= other.multiplicity(p))
    }
}

impl std::fmt::Display for EffectiveDivisor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(p, m)| if m == 1 { p.to_string() } else { format!("{m}*{p}") })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Pointwise minimum of multiplicities.
pub fn divisor_gcd(divs: &[EffectiveDivisor]) -> EffectiveDivisor {
    let Some((first, rest)) = divs.split_first() else {
        return EffectiveDivisor::zero();
    };
    EffectiveDivisor::from_pairs(first.iter().filter_map(|(p, m)| {
        let m = rest.iter().fold(m, |acc, d| acc.min(d.multiplicity(p)));
        (m > 0).then(|| (p.clone(), m))
    }))
}

/// Every effective divisor of degree `d`, each exactly once, in a fixed order.
pub fn effective_divisors(ctx: CurveContext, d: u32) -> impl Iterator<Item = EffectiveDivisor> {
    let pts = if d == 0 { Vec::new() } else { closed_points(ctx, d) };
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fill(&pts, 0, d, &mut cur, &mut out);
    out.into_iter()
}

fn fill(
    pts: &[ClosedPoint],
    start: usize,
    remaining: u32,
    cur: &mut Vec<(ClosedPoint, u32)>,
    out: &mut Vec<EffectiveDivisor>,
) {
    if remaining == 0 {
        out.push(EffectiveDivisor::from_pairs(cur.iter().cloned()));
        return;
    }
    for i in start..pts.len() {
        let f = pts[i].degree();
        if f > remaining {
            continue;
        }
        for m in 1..=remaining / f {
            cur.push((pts[i].clone(), m));
            fill(pts, i + 1, remaining - m * f, cur, out);
            cur.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(q: u64) -> CurveContext {
        CurveContext::new(q).unwrap()
    }

    #[test]
    fn counts_match_projective_space_of_forms() {
        for q in [2u64, 3, 5] {
            for d in 0..=4u32 {
                let n = effective_divisors(c(q), d).count() as u64;
                assert_eq!(n, (q.pow(d + 1) - 1) / (q - 1), "q={q} d={d}");
            }
        }
        assert_eq!(effective_divisors(c(2), 0).collect::<Vec<_>>(), vec![EffectiveDivisor::zero()]);
    }

    #[test]
    fn gcd_is_pointwise_min() {
        let p = ClosedPoint::Finite(vec![0, 1]);
        let qq = ClosedPoint::Infinity;
        let two_p = EffectiveDivisor::from_pairs([(p.clone(), 2)]);
        let p_q = EffectiveDivisor::from_pairs([(p.clone(), 1), (qq, 1)]);
        assert_eq!(divisor_gcd(&[two_p.clone(), p_q]), EffectiveDivisor::point(p));
        assert_eq!(divisor_gcd(&[two_p.clone(), two_p.clone()]), two_p);
        assert!(divisor_gcd(&[two_p, EffectiveDivisor::zero()]).is_zero());
    }
}
