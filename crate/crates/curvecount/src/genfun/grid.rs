//! Verification of the F̃ and G̃ numerators over the full small-parameter
//! grid: at most three blocks, blocks of one or two variables, weights ≤ 3,
//! offsets ≤ 2, each instance taken once up to relabelling.

use super::numerators::{first_mismatch, FInstance, GInstance};
use super::series::{deg_inverse, eta_witness, EPSILONS};
use crate::error::{Error, Result};
use crate::linalg::Q;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const MAX_BLOCKS: usize = 3;
pub const MAX_WEIGHT: u32 = 3;
pub const MAX_OFFSET: u32 = 2;

#[derive(Debug, Clone)]
pub struct GridConfig {
    /// Instances whose support box has at most this many cells are checked
    /// on the whole box.
    pub exhaustive_cells: usize,
    /// Cell budget for the window of larger instances.
    pub window_cells: usize,
    /// Points sampled just beyond the support bound of larger instances.
    pub slab_samples: usize,
    pub seed: u64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { exhaustive_cells: 20_000, window_cells: 4_096, slab_samples: 24, seed: 0x5eed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Windowed,
}

/// One structured result line: {instance, property, status, witness}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub instance: String,
    pub property: &'static str,
    pub status: bool,
    pub witness: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridReport {
    pub f_instances: usize,
    pub g_instances: usize,
    pub exhaustive: usize,
    pub windowed: usize,
    pub records: Vec<Record>,
}

impl GridReport {
    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.status)
    }

    pub fn all_pass(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn count(&self, property: &str) -> usize {
        self.records.iter().filter(|r| r.property == property).count()
    }
}

/// Sorted weight lists of one block.
fn block_types() -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = (1..=MAX_WEIGHT).map(|a| vec![a]).collect();
    for a in 1..=MAX_WEIGHT {
        for b in a..=MAX_WEIGHT {
            out.push(vec![a, b]);
        }
    }
    out
}

fn multisets<T: Clone>(items: &[T], k: usize, start: usize, prefix: &mut Vec<T>, out: &mut Vec<Vec<T>>) {
    if prefix.len() == k {
        out.push(prefix.clone());
        return;
    }
    for i in start..items.len() {
        prefix.push(items[i].clone());
        multisets(items, k, i, prefix, out);
        prefix.pop();
    }
}

/// Every F-instance of the grid up to permuting blocks and variables within
/// a block.
pub fn f_grid_instances() -> Vec<FInstance> {
    let typed: Vec<(Vec<u32>, u32)> =
        block_types().into_iter().flat_map(|t| (0..=MAX_OFFSET).map(move |v| (t.clone(), v))).collect();
    let mut out = Vec::new();
    for k in 1..=MAX_BLOCKS {
        let mut combos = Vec::new();
        multisets(&typed, k, 0, &mut Vec::new(), &mut combos);
        for combo in combos {
            let mut a = Vec::new();
            let mut blocks = Vec::new();
            let mut nu = Vec::new();
            for (weights, v) in combo {
                blocks.push((a.len()..a.len() + weights.len()).collect());
                a.extend(weights);
                nu.push(v);
            }
            out.push(FInstance::new(a, nu, blocks).expect("grid instances are well formed"));
        }
    }
    out
}

/// Every G-instance of the grid: singleton weights on J with a marked j₀.
pub fn g_grid_instances() -> Vec<GInstance> {
    let mut out = Vec::new();
    for n in 1..=MAX_BLOCKS {
        let total = ((MAX_WEIGHT * (MAX_OFFSET + 1)) as usize).pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let mut a = Vec::new();
            let mut nu = Vec::new();
            for _ in 0..n {
                let x = c % (MAX_WEIGHT * (MAX_OFFSET + 1)) as usize;
                c /= (MAX_WEIGHT * (MAX_OFFSET + 1)) as usize;
                a.push(1 + (x as u32) / (MAX_OFFSET + 1));
                nu.push(x as u32 % (MAX_OFFSET + 1));
            }
            // j₀ is distinguished; the others are unordered.
            for j0 in 0..n {
                let rest: Vec<(u32, u32)> = (0..n).filter(|&j| j != j0).map(|j| (a[j], nu[j])).collect();
                if rest.windows(2).all(|w| w[0] <= w[1]) {
                    out.push(GInstance::new(j0, a.clone(), nu.clone()).expect("grid instances are well formed"));
                }
            }
        }
    }
    out
}

pub fn f_key(inst: &FInstance) -> String {
    let blocks: Vec<String> = inst
        .blocks
        .iter()
        .zip(&inst.nu)
        .map(|(b, v)| {
            let w: Vec<String> = b.iter().map(|&i| inst.a[i].to_string()).collect();
            format!("[{}|{}]", w.join(","), v)
        })
        .collect();
    format!("F{}", blocks.join(""))
}

pub fn g_key(inst: &GInstance) -> String {
    format!("G(j0={}, a={:?}, nu={:?})", inst.j0, inst.a, inst.nu)
}

/// η-search records for every ε.
fn eta_records(key: &str, property: &'static str, p: &super::poly::MultiPoly, base: &Q, out: &mut Vec<Record>) {
    for &(en, ed) in &EPSILONS {
        let eps = Q::new(BigInt::from(en), BigInt::from(ed));
        let found = eta_witness(p, &(base + &eps));
        out.push(Record {
            instance: key.to_string(),
            property,
            status: found.is_some(),
            witness: match found {
                Some(eta) => format!("eps={} eta={}", eps, eta),
                None => format!("eps={} no eta on the dyadic grid", eps),
            },
        });
    }
}

fn box_cells(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Window dims: the support box clipped to a common side so that the cell
/// count stays within budget.
fn window(full: &[usize], budget: usize) -> Vec<usize> {
    let mut side = 1;
    while box_cells(&full.iter().map(|&b| b.min(side + 1)).collect::<Vec<_>>()) <= budget
        && full.iter().any(|&b| b > side)
    {
        side += 1;
    }
    full.iter().map(|&b| b.min(side)).collect()
}

/// The F̃ checks for one instance. Returns the records and the mode used.
pub fn check_f_instance(inst: &FInstance, cfg: &GridConfig) -> (Mode, Vec<Record>) {
    let key = f_key(inst);
    let mut out = Vec::new();
    let bx = inst.support_box();
    let full: Vec<usize> = bx.iter().map(|&b| b + 1).collect();
    let formula = inst.coefficient_formula();
    let mode = if box_cells(&full) <= cfg.exhaustive_cells { Mode::Exhaustive } else { Mode::Windowed };
    let dims = match mode {
        Mode::Exhaustive => full.clone(),
        Mode::Windowed => window(&full, cfg.window_cells),
    };
    // Multiplying by binomials only moves mass upward, so the product on any
    // lower box is exact there.
    let product = inst.product_box(dims.clone());
    let closed = formula.coefficients_on_box(&dims);
    let mismatch = first_mismatch(&product, &closed);
    out.push(Record {
        instance: key.clone(),
        property: "coefficient-formula",
        status: mismatch.is_none(),
        witness: match &mismatch {
            None => format!("{} cells", product.len()),
            Some(d) => format!("product and formula differ at t^{d:?}"),
        },
    });
    let beyond = |d: &[usize]| d.iter().zip(&bx).any(|(x, y)| x >= y);
    let stray = match mode {
        Mode::Exhaustive => product.nonzero_where(beyond),
        Mode::Windowed => slab_violation(inst, &bx, &formula, cfg),
    };
    out.push(Record {
        instance: key.clone(),
        property: "support-bound",
        status: stray.is_none(),
        witness: match (&stray, mode) {
            (None, Mode::Exhaustive) => format!("bound {bx:?}, layer beyond checked"),
            (None, Mode::Windowed) => format!("bound {bx:?}, {} slab samples", cfg.slab_samples),
            (Some(d), _) => format!("nonzero coefficient at t^{d:?}"),
        },
    });
    let ft = product.to_poly(|d| !beyond(d));
    // With ρ moved into the τ slot, η weighs the ρ-degree.
    let applies = inst
        .blocks
        .iter()
        .zip(&inst.nu)
        .any(|(b, &v)| v == 0 && b.iter().all(|&i| inst.a[i] == 1));
    if applies {
        let deg = deg_inverse(&ft, &Q::zero());
        let ok = deg.as_ref().map_or(true, |d| *d <= Q::zero());
        out.push(Record {
            instance: key.clone(),
            property: "degree-bound",
            status: ok,
            witness: format!("deg = {}", deg.map_or("-inf".into(), |d| d.to_string())),
        });
    }
    eta_records(&key, "eta-degree-F", &ft.swap_rho_tau(), &Q::zero(), &mut out);
    (mode, out)
}

fn slab_violation(inst: &FInstance, bx: &[usize], formula: &super::numerators::CoefficientFormula, cfg: &GridConfig) -> Option<Vec<usize>> {
    let seed = cfg.seed ^ (f_key(inst).bytes().fold(0u64, |h, b| h.wrapping_mul(31).wrapping_add(b as u64)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = inst.n();
    for s in 0..cfg.slab_samples {
        let i0 = s % n;
        let d: Vec<usize> = (0..n)
            .map(|i| if i == i0 { bx[i] + rng.gen_range(0..2) } else { rng.gen_range(0..=bx[i] + 1) })
            .collect();
        if !formula.coefficient(&d).is_empty() {
            return Some(d);
        }
    }
    None
}

/// The G̃ checks for one instance.
pub fn check_g_instance(inst: &GInstance) -> Vec<Record> {
    let key = g_key(inst);
    let mut out = Vec::new();
    let gt = match inst.numerator_gtilde() {
        Ok(p) => p,
        Err(e) => {
            out.push(Record { instance: key, property: "support-bound-G", status: false, witness: e.to_string() });
            return out;
        }
    };
    out.push(Record {
        instance: key.clone(),
        property: "support-bound-G",
        status: true,
        witness: format!("bound {:?}", inst.support_box()),
    });
    // τ = 1 collapses G to F with singleton blocks, up to the extra factor.
    let f = FInstance::singletons(inst.a.clone(), inst.nu.clone());
    let identity = f.numerator_ftilde().map(|ft| {
        let n = inst.n();
        let (_, m) = inst.lcms();
        let mut part = vec![0u32; n];
        for j in (0..n).filter(|&j| j != inst.j0) {
            part[j] = m / inst.a[j];
        }
        let factor = if n > 1 {
            super::poly::MultiPoly::one(n).sub(&super::poly::MultiPoly::monomial(n, 1, 0, 0, &part))
        } else {
            super::poly::MultiPoly::one(n)
        };
        factor.mul(&ft)
    });
    let (ok, witness) = match identity {
        Ok(expected) => match gt.at_tau_one().first_difference(&expected) {
            None => (true, String::from("exact")),
            Some((e, x, y)) => (false, format!("{}: {} vs {}", super::poly::MultiPoly::format_monomial(&e), x, y)),
        },
        Err(e) => (false, e.to_string()),
    };
    out.push(Record { instance: key.clone(), property: "tau-one-identity", status: ok, witness });
    if inst.a.iter().zip(&inst.nu).any(|(&a, &v)| a == 1 && v == 0) {
        eta_records(&key, "eta-degree-G", &gt, &Q::zero(), &mut out);
    }
    out
}

/// Runs the whole grid.
pub fn run_grid(cfg: &GridConfig) -> GridReport {
    let fs = f_grid_instances();
    let gs = g_grid_instances();
    let mut records = Vec::new();
    let (mut exhaustive, mut windowed) = (0, 0);
    for inst in &fs {
        let (mode, r) = check_f_instance(inst, cfg);
        match mode {
            Mode::Exhaustive => exhaustive += 1,
            Mode::Windowed => windowed += 1,
        }
        records.extend(r);
    }
    for inst in &gs {
        records.extend(check_g_instance(inst));
    }
    GridReport { f_instances: fs.len(), g_instances: gs.len(), exhaustive, windowed, records }
}

/// A single instance's F̃ with every check, for callers that want the
/// polynomial itself.
pub fn verified_ftilde(inst: &FInstance) -> Result<super::poly::MultiPoly> {
    let (_, records) = check_f_instance(inst, &GridConfig { exhaustive_cells: usize::MAX, ..GridConfig::default() });
    if let Some(r) = records.iter().find(|r| !r.status) {
        return Err(Error::check(format!("{} {}: {}", r.instance, r.property, r.witness)));
    }
    inst.numerator_ftilde()
}
