//! Per-degree totals of the morphism count against α·γ·d^{ρ−1}q^{δd}. At
//! desk scale the ratios only show a trend; the limit is not checked.

use super::hom::{to_f64, CountRecord};
use super::{degree_vectors, gamma, Budget, Counter};
use crate::error::{Error, Result};
use crate::genfun::LocalSystem;
use crate::linalg::Q;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Truncation degree for γ inside the report.
const GAMMA_TRUNCATION: u32 = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct ManinRow {
    pub d: i64,
    pub total: BigInt,
    pub predicted: f64,
    /// total / predicted; `None` at d = 0 where the prediction vanishes.
    pub ratio: Option<f64>,
    pub records: Vec<CountRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManinReport {
    pub q: u64,
    pub alpha: Q,
    pub gamma: f64,
    pub delta: i64,
    pub rho: usize,
    pub rows: Vec<ManinRow>,
    /// Set when the budget stopped the table early.
    pub truncated: Option<String>,
}

impl ManinReport {
    pub fn ratios_positive(&self) -> bool {
        self.rows.iter().filter(|r| r.d >= 1).all(|r| r.ratio.is_some_and(|x| x.is_finite() && x > 0.0))
    }
}

pub fn manin_report(counter: &Counter, d_max: i64, budget: Budget) -> Result<ManinReport> {
    let cox = &counter.cox;
    let q = counter.q();
    let alpha = crate::cones::alpha(cox)?;
    let sys = LocalSystem::new(cox, &counter.choice)?;
    let g = gamma(&sys, q, GAMMA_TRUNCATION)?.gamma();
    let delta = cox.kx_divisibility()?;
    let rho = cox.picard_rank;
    let ys = degree_vectors(cox, &counter.choice, delta * d_max)?;
    let mut rows = Vec::new();
    let mut truncated = None;
    'degrees: for d in 0..=d_max {
        let mut total = BigInt::zero();
        let mut records = Vec::new();
        for y in ys.iter().filter(|y| y.anticanonical_degree(cox) == delta * d) {
            let b = match counter.hom_breakdown(y, budget) {
                Ok(b) => b,
                Err(Error::Budget(msg)) => {
                    truncated = Some(format!("stopped at d = {d}: {msg}"));
                    break 'degrees;
                }
                Err(e) => return Err(e),
            };
            let h = y.anticanonical_degree(cox);
            total += &b.hom;
            records.push(CountRecord {
                y: y.clone(),
                y_choice: y.on_choice(cox, &counter.choice),
                anticanonical_degree: h,
                hom: b.hom,
                n: b.n,
                predicted: g * (q as f64).powi(h as i32),
                oracle: None,
            });
        }
        let predicted = alpha.to_f64().unwrap_or(f64::NAN) * g * (d as f64).powi(rho as i32 - 1)
            * (q as f64).powi((delta * d) as i32);
        let ratio = (d >= 1).then(|| to_f64(&total) / predicted);
        rows.push(ManinRow { d, total, predicted, ratio, records });
    }
    Ok(ManinReport { q, alpha, gamma: g, delta, rho, rows, truncated })
}
