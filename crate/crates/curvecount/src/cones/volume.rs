//! Exact volume by recursive facet decomposition, and a Monte-Carlo estimate
//! that shares none of that code path.

use super::HPolytope;
use crate::error::{Error, Result};
use crate::linalg::{det, factorial, rank, Q};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn affine_dim(points: &[&Vec<Q>]) -> usize {
    let Some((first, rest)) = points.split_first() else { return 0 };
    let diffs: Vec<Vec<Q>> = rest.iter().map(|p| p.iter().zip(first.iter()).map(|(a, b)| a - b).collect()).collect();
    rank(&diffs)
}

/// Simplices (as vertex index lists) triangulating the face spanned by
/// `face` of affine dimension `k`: cone from its smallest vertex over a
/// triangulation of each facet not containing it.
fn pull(p: &HPolytope, verts: &[Vec<Q>], face: &[usize], k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 0 {
        out.push(vec![face[0]]);
        return;
    }
    let apex = face[0];
    let mut facets: Vec<Vec<usize>> = Vec::new();
    for c in &p.ineqs {
        let tight: Vec<usize> = face.iter().copied().filter(|&v| c.value(&verts[v]).is_zero()).collect();
        if tight.contains(&apex) || tight.len() < k || facets.contains(&tight) {
            continue;
        }
        let pts: Vec<&Vec<Q>> = tight.iter().map(|&v| &verts[v]).collect();
        if affine_dim(&pts) == k - 1 {
            facets.push(tight);
        }
    }
    for f in facets {
        let mut sub = Vec::new();
        pull(p, verts, &f, k - 1, &mut sub);
        for mut s in sub {
            s.insert(0, apex);
            out.push(s);
        }
    }
}

/// A triangulation of a bounded polytope into simplices of its own dimension.
pub fn triangulate(p: &HPolytope) -> (Vec<Vec<Q>>, Vec<Vec<usize>>) {
    let verts = p.vertices();
    if verts.is_empty() {
        return (verts, Vec::new());
    }
    let all: Vec<&Vec<Q>> = verts.iter().collect();
    let k = affine_dim(&all);
    let face: Vec<usize> = (0..verts.len()).collect();
    let mut out = Vec::new();
    pull(p, &verts, &face, k, &mut out);
    (verts, out)
}

/// Σ over a triangulation of |det(v_1, …, v_ρ)|/(ρ−1)!: each simplex in the
/// hyperplane ⟨•, ω⟩ = 1 contributes ρ times the volume of its cone over 0.
pub(crate) fn leray_volume(p: &HPolytope) -> Result<Q> {
    let n = p.dim;
    let (verts, simplices) = triangulate(p);
    if verts.is_empty() {
        return Ok(Q::zero());
    }
    let all: Vec<&Vec<Q>> = verts.iter().collect();
    if affine_dim(&all) < n - 1 {
        return Ok(Q::zero());
    }
    let mut total = Q::zero();
    for s in &simplices {
        if s.len() != n {
            return Err(Error::check(format!("simplex with {} vertices in dimension {n}", s.len())));
        }
        let m: Vec<Vec<Q>> = s.iter().map(|&v| verts[v].clone()).collect();
        total += det(&m).abs();
    }
    Ok(total / Q::from_integer(factorial(n - 1)))
}

/// Rejection estimate of the normalized volume. P is projected along the
/// coordinate k where |ω_k| is largest, the bounding box of the projection is
/// sampled, and the accepted fraction times vol(box)/|ω_k| is returned.
pub fn monte_carlo_volume(p: &HPolytope, samples: u64, seed: u64) -> Result<f64> {
    if p.eqs.len() != 1 {
        return Err(Error::input("polytope", "needs one normalizing equality"));
    }
    let n = p.dim;
    let verts = p.vertices();
    if verts.is_empty() || n < 2 {
        return Ok(0.0);
    }
    let f = |x: &Q| x.to_f64().unwrap_or(f64::NAN);
    let omega: Vec<f64> = p.eqs[0].a.iter().map(f).collect();
    let b = f(&p.eqs[0].b);
    let k = (0..n).max_by(|&i, &j| omega[i].abs().total_cmp(&omega[j].abs())).unwrap_or(0);
    let free: Vec<usize> = (0..n).filter(|&i| i != k).collect();
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for v in &verts {
        for &i in &free {
            lo[i] = lo[i].min(f(&v[i]));
            hi[i] = hi[i].max(f(&v[i]));
        }
    }
    let ineqs: Vec<(Vec<f64>, f64)> = p.ineqs.iter().map(|c| (c.a.iter().map(f).collect(), f(&c.b))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut y = vec![0.0; n];
    let mut hits = 0u64;
    for _ in 0..samples {
        let mut rest = b;
        for &i in &free {
            y[i] = if hi[i] > lo[i] { rng.gen_range(lo[i]..hi[i]) } else { lo[i] };
            rest -= omega[i] * y[i];
        }
        y[k] = rest / omega[k];
        if ineqs.iter().all(|(a, c)| a.iter().zip(&y).map(|(x, z)| x * z).sum::<f64>() >= *c) {
            hits += 1;
        }
    }
    let box_vol: f64 = free.iter().map(|&i| hi[i] - lo[i]).product();
    Ok(box_vol / omega[k].abs() * hits as f64 / samples as f64)
}
