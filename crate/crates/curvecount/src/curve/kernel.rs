use super::poly::{inv_mod, mul_mod, sub_mod};
use super::{CurveContext, Section};
use crate::error::{Error, Result};

/// Rank of a dense matrix over F_p (rows consumed).
pub fn rank_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let inv = inv_mod(m[r][c], p);
        for x in m[r][c..].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in r + 1..rows {
            let f = m[i][c];
            if f == 0 {
                continue;
            }
            for k in c..cols {
                m[i][k] = sub_mod(m[i][k], mul_mod(f, m[r][k], p), p);
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Dimension κ of {(t_j) ∈ Π H⁰(O(d_j)) : Σ t_j w_j = 0}. Terms with d_j < 0
/// contribute the zero space. All products t_j w_j must share one degree.
pub fn kernel_count(ctx: CurveContext, forms: &[(Section, i64)]) -> Result<u32> {
    let mut total: Option<i64> = None;
    for (w, d) in forms {
        if *d < -1 {
            continue;
        }
        let deg = w.degree() as i64 + d;
        match total {
            None => total = Some(deg),
            Some(t) if t != deg => {
                return Err(Error::check(format!("degree mismatch in section equation: {t} vs {deg}")))
            }
            _ => {}
        }
    }
    let live: Vec<&(Section, i64)> = forms.iter().filter(|(_, d)| *d >= 0).collect();
    let Some(total) = total else { return Ok(0) };
    if live.is_empty() {
        return Ok(0);
    }
    let rows = (total + 1) as usize;
    let mut cols: Vec<Vec<u64>> = Vec::new();
    for (w, d) in live {
        for k in 0..=*d as usize {
            let mut col = vec![0u64; rows];
            for (i, &c) in w.coeffs().iter().enumerate() {
                col[i + k] = c;
            }
            cols.push(col);
        }
    }
    let n = cols.len();
    // Rank of the column set equals rank of its transpose; rows here are columns.
    Ok((n - rank_mod_p(cols, ctx.q)) as u32)
}
