//! Dense univariate polynomials over a prime field, coefficients low to high.

pub type Coeffs = Vec<u64>;

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p { s - p } else { s }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b { a - b } else { a + p - b }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

pub fn trim(mut f: Coeffs) -> Coeffs {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

/// Degree of a trimmed polynomial; `None` for zero.
pub fn degree(f: &[u64]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub fn mul(f: &[u64], g: &[u64], p: u64) -> Coeffs {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(a, b, p), p);
        }
    }
    trim(out)
}

pub fn sub(f: &[u64], g: &[u64], p: u64) -> Coeffs {
    let n = f.len().max(g.len());
    let out = (0..n)
        .map(|i| sub_mod(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0), p))
        .collect();
    trim(out)
}

/// Quotient and remainder; `g` must be nonzero.
pub fn divrem(f: &[u64], g: &[u64], p: u64) -> (Coeffs, Coeffs) {
    let dg = degree(g).expect("division by zero polynomial");
    let mut r = trim(f.to_vec());
    let Some(df) = degree(&r) else { return (Vec::new(), Vec::new()) };
    if df < dg {
        return (Vec::new(), r);
    }
    let lead_inv = inv_mod(g[dg], p);
    let mut quo = vec![0u64; df - dg + 1];
    while let Some(dr) = degree(&r) {
        if dr < dg {
            break;
        }
        let c = mul_mod(r[dr], lead_inv, p);
        quo[dr - dg] = c;
        for (k, &gk) in g.iter().enumerate().take(dg + 1) {
            let idx = dr - dg + k;
            r[idx] = sub_mod(r[idx], mul_mod(c, gk, p), p);
        }
        r = trim(r);
    }
    (trim(quo), r)
}

pub fn rem(f: &[u64], g: &[u64], p: u64) -> Coeffs {
    divrem(f, g, p).1
}

pub fn monic(f: &[u64], p: u64) -> Coeffs {
    let f = trim(f.to_vec());
    match degree(&f) {
        None => f,
        Some(d) => {
            let inv = inv_mod(f[d], p);
            f.iter().map(|&c| mul_mod(c, inv, p)).collect()
        }
    }
}

/// Monic gcd (zero if both are zero).
pub fn gcd(f: &[u64], g: &[u64], p: u64) -> Coeffs {
    let mut a = trim(f.to_vec());
    let mut b = trim(g.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

/// `base^e mod m`.
pub fn powmod_poly(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Coeffs {
    let mut result = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            result = rem(&mul(&result, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    result
}

/// Irreducibility of a monic polynomial of degree ≥ 1 by the gcd test
/// against x^{p^i} − x for i ≤ deg/2.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let Some(n) = degree(f) else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let x = vec![0, 1];
    let mut xp = x.clone();
    for _ in 0..n / 2 {
        xp = powmod_poly(&xp, p, f, p);
        let h = sub(&xp, &x, p);
        if degree(&gcd(f, &h, p)).map_or(true, |d| d > 0) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibles_over_f2() {
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 0, 1], 2));
        assert!(!is_irreducible(&[0, 0, 1], 2));
    }

    #[test]
    fn division_round_trips() {
        let f = vec![3, 0, 2, 1];
        let g = vec![1, 4];
        let (qq, r) = divrem(&f, &g, 5);
        let back = trim(
            mul(&qq, &g, 5)
                .iter()
                .enumerate()
                .map(|(i, &c)| add_mod(c, *r.get(i).unwrap_or(&0), 5))
                .collect(),
        );
        assert_eq!(back, trim(f));
    }
}
