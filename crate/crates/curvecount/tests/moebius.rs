use curvecount::moebius::{Moebius, NuTable};
use curvecount::surface::{builtin_sextic_a1, load_surface_file, CoxPresentation};
use std::path::Path;

fn fixture(name: &str) -> CoxPresentation {
    load_surface_file(&Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)).unwrap()
}

fn surfaces() -> Vec<CoxPresentation> {
    vec![builtin_sextic_a1(), fixture("toy_square.toml"), fixture("toy_split.toml")]
}

/// All vectors in {0, …, top}^n.
fn boxes(n: usize, top: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (0..=top).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

fn below(e: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &x in e {
        out = out.into_iter().flat_map(|v| (0..=x).map(move |y| [v.clone(), vec![y]].concat())).collect();
    }
    out
}

fn support(e: &[u32]) -> u32 {
    e.iter().enumerate().filter(|(_, &x)| x > 0).fold(0, |m, (k, _)| m | 1 << k)
}

#[test]
fn partition_of_unity() {
    for cox in surfaces() {
        let mu = Moebius::new(&cox);
        for e in boxes(cox.n_generators(), 2) {
            let sum: i64 = below(&e).iter().map(|f| mu.mu_zero(f)).sum();
            assert_eq!(sum, cox.in_incidence(support(&e)) as i64, "{} e = {e:?}", cox.name);
        }
    }
}

/// ν°(g, f) from its definition as a partial sum of μ°.
fn nu_direct(mu: &Moebius, cox: &CoxPresentation, nu: &NuTable, g: &[u32], f: &[u32]) -> i64 {
    let ch = nu.choice();
    below(f)
        .iter()
        .map(|fp| {
            let mut e = vec![0u32; cox.n_generators()];
            for (k, &j) in ch.j.iter().enumerate() {
                e[j] = g[k];
            }
            for (k, &i) in ch.i.iter().enumerate() {
                e[i] = fp[k];
            }
            mu.mu_zero(&e)
        })
        .sum()
}

#[test]
fn nu_matches_definition_and_support_reduction() {
    for cox in surfaces() {
        let mu = Moebius::new(&cox);
        for ch in cox.admissible_choices() {
            let nu = NuTable::new(&mu, &ch);
            for g in boxes(ch.j.len(), 1) {
                for f in boxes(ch.i.len(), 3) {
                    let v = nu.nu_zero(&g, &f);
                    assert_eq!(v, nu_direct(&mu, &cox, &nu, &g, &f), "{} g = {g:?} f = {f:?}", cox.name);
                    let reduced: Vec<u32> = f.iter().map(|&x| x.min(1)).collect();
                    assert_eq!(v, nu_direct(&mu, &cox, &nu, &g, &reduced));
                }
            }
        }
    }
}

#[test]
fn cancellation_over_j() {
    for cox in surfaces() {
        let mu = Moebius::new(&cox);
        for ch in cox.admissible_choices() {
            let nu = NuTable::new(&mu, &ch);
            let nj = ch.j.len();
            for f in boxes(ch.i.len(), 1) {
                let k_mask = f.iter().zip(&ch.i).filter(|(&x, _)| x == 1).fold(0u32, |m, (_, &i)| m | 1 << i);
                if ch.j.iter().any(|&j| cox.in_incidence(k_mask | 1 << j)) {
                    continue;
                }
                for j1 in 1..1u32 << nj {
                    for g2 in 0..1u32 << nj {
                        if g2 & j1 != 0 {
                            continue;
                        }
                        let mut sum = 0;
                        let mut sub = j1;
                        loop {
                            let g: Vec<u32> = (0..nj).map(|k| ((sub | g2) >> k & 1) as u32).collect();
                            sum += nu.nu_zero(&g, &f);
                            if sub == 0 {
                                break;
                            }
                            sub = (sub - 1) & j1;
                        }
                        assert_eq!(sum, 0, "{} K = {f:?} J1 = {j1:b} g2 = {g2:b}", cox.name);
                    }
                }
            }
        }
    }
}
