//! One PASS/FAIL line per acceptance criterion. Run with `--nocapture` to see
//! the lines; the test fails if any binding criterion fails.

use curvecount::cones::{alpha, coverage_sup, dual_cone_section, monte_carlo_volume, Labeling};
use curvecount::count::{
    degree_vectors, euler_factor_identity, gamma, hom_count_oracle, manin_report, surface_count_enumerated,
    surface_point_count, torsor_count_brute, torsor_count_closed, Budget, Counter, DegreeVector,
};
use curvecount::curve::{effective_divisors, ClosedPoint, CurveContext, EffectiveDivisor};
use curvecount::genfun::grid::{run_grid, GridConfig};
use curvecount::genfun::local::unit_product;
use curvecount::genfun::numerators::FInstance;
use curvecount::genfun::{Laurent, LocalSystem, MultiPoly, RatFn, TruncatedSeries};
use curvecount::linalg::Q;
use curvecount::moebius::Moebius;
use curvecount::surface::{builtin_sextic_a1, CoxPresentation};
use curvecount::Result;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn q_pow(q: u64, k: i64) -> BigInt {
    num_traits::pow(BigInt::from(q), k as usize)
}

fn below(e: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &x in e {
        out = out.into_iter().flat_map(|v| (0..=x).map(move |y| [v.clone(), vec![y]].concat())).collect();
    }
    out
}

fn moebius_partition(cox: &CoxPresentation) -> Result<Outcome> {
    let mu = Moebius::new(cox);
    let n = cox.n_generators();
    let all = below(&vec![2; n]);
    let mut bad = Vec::new();
    for e in &all {
        let sum: i64 = below(e).iter().map(|f| mu.mu_zero(f)).sum();
        let support = e.iter().enumerate().filter(|(_, &x)| x > 0).fold(0u32, |m, (k, _)| m | 1 << k);
        if sum != cox.in_incidence(support) as i64 {
            bad.push(e.clone());
        }
    }
    outcome(bad.is_empty(), format!("{} vectors e ∈ {{0,1,2}}^{n}, {} mismatches", all.len(), bad.len()))
}

fn torsor_closed_form(cox: &CoxPresentation) -> Result<Outcome> {
    let ch = cox.default_choice()?;
    let n = cox.n_generators();
    // A single relation cuts the affine space down by one.
    let dim = n as i64 - 1;
    let mut mismatches = 0;
    for q in [2u64, 3, 5] {
        for mask in 0..1u32 << n {
            let brute = torsor_count_brute(cox, mask, q, Budget::default())?;
            let closed = torsor_count_closed(&ch, mask, q) * Q::from_integer(q_pow(q, dim));
            if closed != Q::from_integer(brute) {
                mismatches += 1;
            }
        }
    }
    let spot = torsor_count_brute(cox, 0, 2, Budget::default())?;
    outcome(
        mismatches == 0 && spot == BigInt::from(72),
        format!("{} (e, q) pairs, {mismatches} mismatches; torsor points over F_2 = {spot} (expected 72)", 3 << n),
    )
}

struct SectionTally {
    instances: usize,
    printed_violations: usize,
}

/// Random (y, G, D) with G_j reduced, checked against the kernel counts.
fn section_instances(q: u64, cases: usize, rng: &mut ChaCha8Rng, tally: &mut SectionTally) -> Result<Option<String>> {
    let cox = builtin_sextic_a1();
    let ctx = CurveContext::new(q)?;
    let c = Counter::with_default_choice(&cox, ctx)?;
    let ys = degree_vectors(&cox, &c.choice, 6)?;
    let divisors: Vec<Vec<EffectiveDivisor>> = (0..=6).map(|d| effective_divisors(ctx, d).collect()).collect();
    for _ in 0..cases {
        let y = &ys[rng.gen_range(0..ys.len())];
        let d: Vec<EffectiveDivisor> = y
            .on_choice(&cox, &c.choice)
            .iter()
            .map(|&yi| {
                let pool = &divisors[yi as usize];
                pool[rng.gen_range(0..pool.len())].clone()
            })
            .collect();
        let g: Vec<EffectiveDivisor> = c
            .y_on_j(y)
            .iter()
            .map(|&yj| {
                let pool: Vec<&EffectiveDivisor> =
                    divisors[..=yj.max(0) as usize].iter().flatten().filter(|x| x.is_reduced()).collect();
                pool[rng.gen_range(0..pool.len())].clone()
            })
            .collect();
        let counts = c.count_sections(y, &g, &d)?;
        if let Err(e) = counts.check_closed_forms(q) {
            return Ok(Some(format!("y = {:?}: {e}", y.coords)));
        }
        let (phi, psi) = (&counts.shape.phi, &counts.shape.psi);
        if (0..phi.len()).any(|j| phi[j] <= -2 && psi[j] >= 0 && counts.n_star > q_pow(q, psi[j])) {
            tally.printed_violations += 1;
        }
        tally.instances += 1;
    }
    Ok(None)
}

fn section_counts() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut tally = SectionTally { instances: 0, printed_violations: 0 };
    for q in [2u64, 3] {
        if let Some(msg) = section_instances(q, 300, &mut rng, &mut tally)? {
            return outcome(false, msg);
        }
    }
    // y_I = (0, 0, 2, 0) over F_3 with w = (x² − 1, x² + x − 1, x): the
    // solutions (a, −a, a) give 𝒩* = 2 > q^ψ = 1 with φ = −2, ψ = 0.
    let cox = builtin_sextic_a1();
    let c = Counter::with_default_choice(&cox, CurveContext::new(3)?)?;
    let y = DegreeVector::from_choice(&cox, &c.choice, &[0, 0, 2, 0])?;
    let pt = |coeffs: Vec<u64>| EffectiveDivisor::point(ClosedPoint::Finite(coeffs));
    let g = vec![pt(vec![1, 1]).plus(&pt(vec![2, 1])), pt(vec![2, 1, 1]), EffectiveDivisor::zero()];
    let mut d = vec![EffectiveDivisor::zero(); 4];
    d[2] = EffectiveDivisor::point(ClosedPoint::Infinity).plus(&pt(vec![0, 1]));
    let witness = c.count_sections(&y, &g, &d)?;
    let shape = c.phi_psi_theta(&y, &g, &d, 0)?;
    let refuted = shape.0 == -2 && shape.1 == 0 && witness.n_star == BigInt::from(2);
    outcome(
        witness.check_closed_forms(3).is_ok() && refuted,
        format!(
            "{} random instances (q = 2, 3; ⟨y,−K⟩ ≤ 6): 𝒩 = q^(2+Θ), 𝒩_j0 = q^(1+φ), 𝒩_j0 ≤ q^(2+φ), 𝒩* = 0 for ψ < 0, 𝒩* ≤ q^(2+Θ) all hold; \
             the bound 𝒩* ≤ q^ψ for φ ≤ −2 is false (violated by {} random instances and by an explicit F_3 witness with 𝒩* = 2, ψ = 0) \
             and holds as 𝒩* < q^(ψ+1)",
            tally.instances, tally.printed_violations
        ),
    )
}

fn decomposition() -> Result<Outcome> {
    let cox = builtin_sextic_a1();
    let mut checked = 0;
    for q in [2u64, 3] {
        let c = Counter::with_default_choice(&cox, CurveContext::new(q)?)?;
        for y in degree_vectors(&cox, &c.choice, 6)? {
            let b = c.hom_breakdown(&y, Budget::default())?;
            if b.n.total() != Q::from_integer(b.hom.clone()) {
                return outcome(false, format!("q = {q}, y = {:?}: hom {} vs n-sum {}", y.coords, b.hom, b.n.total()));
            }
            checked += 1;
        }
    }
    outcome(true, format!("hom = n0 + n1 + n2 on {checked} (q, y) pairs with ⟨y,−K⟩ ≤ 6"))
}

fn oracle_equivalence() -> Result<Outcome> {
    let cox = builtin_sextic_a1();
    let mut checked = 0;
    for (q, bound) in [(2u64, 3i64), (3, 2)] {
        let ctx = CurveContext::new(q)?;
        let c = Counter::with_default_choice(&cox, ctx)?;
        for y in degree_vectors(&cox, &c.choice, bound)? {
            let formula = c.hom_count(&y, Budget::default())?;
            let oracle = hom_count_oracle(&cox, &y, ctx, Budget::default())?;
            if formula != oracle {
                return outcome(false, format!("q = {q}, y = {:?}: formula {formula} vs oracle {oracle}", y.coords));
            }
            checked += 1;
        }
    }
    let ctx = CurveContext::new(3)?;
    let y0 = DegreeVector::zero(cox.picard_rank);
    let at_zero = hom_count_oracle(&cox, &y0, ctx, Budget::default())?;
    let formula_zero = Counter::with_default_choice(&cox, ctx)?.hom_count(&y0, Budget::default())?;
    outcome(
        at_zero == BigInt::from(2) && formula_zero == at_zero,
        format!("{checked} degree vectors agree; y = 0 at q = 3 gives {formula_zero} (expected 2)"),
    )
}

fn poly(nt: usize, terms: &[(i64, &[u32])]) -> MultiPoly {
    terms.iter().fold(MultiPoly::zero(nt), |p, (c, t)| p.add(&MultiPoly::monomial(nt, *c, 0, 0, t)))
}

fn generating_series() -> Result<Outcome> {
    let report = run_grid(&GridConfig::default());
    let closed = [
        (FInstance::singletons(vec![1], vec![0]), poly(1, &[(1, &[0]), (-1, &[1])])),
        (
            FInstance::new(vec![1, 1], vec![0], vec![vec![0, 1]])?,
            poly(2, &[(1, &[0, 0]), (-1, &[1, 0]), (-1, &[0, 1]), (1, &[1, 1])]),
        ),
        (FInstance::singletons(vec![1, 1], vec![0, 0]), poly(2, &[(1, &[0, 0]), (-1, &[1, 1])])),
    ];
    let closed_ok = closed.iter().all(|(inst, expect)| inst.numerator_ftilde().is_ok_and(|f| &f == expect));
    let first = report.failures().next().map(|r| format!("; first failure {} {}: {}", r.instance, r.property, r.witness));
    outcome(
        report.all_pass() && closed_ok,
        format!(
            "{} F and {} G instances, {} records{}; closed forms 1−t, (1−t₁)(1−t₂), 1−t₁t₂ {}",
            report.f_instances,
            report.g_instances,
            report.records.len(),
            first.unwrap_or_default(),
            if closed_ok { "reproduced" } else { "NOT reproduced" }
        ),
    )
}

fn local_series(cox: &CoxPresentation) -> Result<Outcome> {
    const CAP: u32 = 6;
    let sys = LocalSystem::new(cox, &cox.default_choice()?)?;
    let nt = sys.n_i();
    let clear = unit_product(nt, 0..nt);
    let gs = sys.all_g();
    for g in &gs {
        let ls = sys.local_f_series(g, CAP)?;
        let direct = ls.f1.mul_poly(&clear);
        if let Some(diff) = direct.first_difference(&TruncatedSeries::new(sys.h1_closed(g), CAP)) {
            return outcome(false, format!("H_1 closed form differs at g = {g:?}: {diff}"));
        }
    }
    let mut total = RatFn::zero();
    for g in &gs {
        let size: u32 = g.iter().sum();
        total = total.add(&sys.h2_closed(g)?.at_inverse_powers().mul_laurent(&Laurent::monomial(1, -(size as i64))));
    }
    if let Some(v) = (2..=12i64).find(|&v| !total.eval(&Q::from_integer(v.into())).is_zero()) {
        return outcome(false, format!("Σ_g H_2 nonzero at q_v = {v}"));
    }
    let mut pairs = 0;
    for g in &gs {
        for j0 in 0..sys.n_j() {
            if !sys.appendix_decomposition(g, j0, CAP)?.all_certified() {
                return outcome(false, format!("three-series split fails at g = {g:?}, j0 = {j0}"));
            }
            pairs += 1;
        }
    }
    outcome(
        true,
        format!("H_1 closed form = truncation (cap {CAP}) for all {} g; Σ_g H_2 = 0; split certified for {pairs} (g, j0)", gs.len()),
    )
}

fn euler_factor(cox: &CoxPresentation) -> Result<Outcome> {
    let sys = LocalSystem::new(cox, &cox.default_choice()?)?;
    let mut parts = Vec::new();
    let mut ok = true;
    for qv in [2u64, 3, 4, 5, 8, 9] {
        let (lhs, rhs) = euler_factor_identity(&sys, qv)?;
        ok &= lhs == rhs;
        parts.push(format!("{qv}:{}", surface_point_count(cox, qv)?));
    }
    for (q, n) in [(2u64, 13), (3, 22)] {
        let enumerated = surface_count_enumerated(cox, q, Budget::default())?;
        ok &= enumerated == BigInt::from(n) && surface_point_count(cox, q)? == enumerated;
    }
    outcome(ok, format!("identity exact at q_v ∈ {{2,3,4,5,8,9}}; #X = {}; #X(F_2), #X(F_3) enumerated as 13, 22", parts.join(" ")))
}

fn constant(cox: &CoxPresentation) -> Result<Outcome> {
    let sys = LocalSystem::new(cox, &cox.default_choice()?)?;
    let r = gamma(&sys, 5, 8)?;
    outcome(
        r.consistent() && r.tail_bound() <= 1e-4 && r.relative_difference <= r.tail_bound().max(1e-12),
        format!(
            "γ(q = 5, B = 8) = {:.9e}, tail bound {:.3e}, principal-side value {:.9e}, relative difference {:.3e}",
            r.gamma(),
            r.tail_bound(),
            r.c_princ_side,
            r.relative_difference
        ),
    )
}

fn cones(cox: &CoxPresentation) -> Result<Outcome> {
    let a = alpha(cox)?;
    let (rows, _) = coverage_sup(cox, &[Q::zero()], Labeling::Union)?;
    let ratio0 = rows[0].ratio();
    let mc = monte_carlo_volume(&dual_cone_section(cox)?, 2_000_000, 1)?;
    let rel = mc / a.to_f64().unwrap_or(f64::NAN) - 1.0;
    outcome(
        ratio0 == Q::one() && a == Q::new(1.into(), 144.into()) && rel.abs() < 0.01,
        format!(
            "coverage at λ = 0 is {ratio0}; α = {a}; Monte Carlo {mc:.6e} ({:+.3}%); rows needing external cone data not run (none supplied)",
            100.0 * rel
        ),
    )
}

fn trend(cox: &CoxPresentation) -> Result<Outcome> {
    let counter = Counter::with_default_choice(cox, CurveContext::new(2)?)?;
    let r = manin_report(&counter, 6, Budget::default())?;
    let table: Vec<String> = r
        .rows
        .iter()
        .filter(|row| row.d >= 1)
        .map(|row| format!("d={} {}/{:.3e}={:.3e}", row.d, row.total, row.predicted, row.ratio.unwrap_or(f64::NAN)))
        .collect();
    let empty: Vec<i64> = r.rows.iter().filter(|row| row.d >= 1 && row.records.is_empty()).map(|row| row.d).collect();
    let zero: Vec<i64> = r
        .rows
        .iter()
        .filter(|row| row.d >= 1 && !row.records.is_empty() && row.total.is_zero())
        .map(|row| row.d)
        .collect();
    let mut note = String::new();
    if !empty.is_empty() {
        note += &format!("; no degree vectors at d = {empty:?}");
    }
    if !zero.is_empty() {
        note += &format!("; the exact count over F_2 is 0 at d = {zero:?} (the oracle agrees)");
    }
    if !r.ratios_positive() {
        note += ", so the ratios are not all positive";
    }
    outcome(
        !r.rows.is_empty() && r.ratios_positive(),
        format!("{}{note}; the asymptotic limit is unverifiable at desk scale", table.join(", ")),
    )
}

#[test]
fn acceptance() {
    let cox = builtin_sextic_a1();
    type Check<'a> = (u32, &'a str, bool, Box<dyn Fn() -> Result<Outcome> + 'a>);
    let checks: Vec<Check> = vec![
        (1, "Möbius partition of unity", true, Box::new(|| moebius_partition(&cox))),
        (2, "torsor closed form", true, Box::new(|| torsor_closed_form(&cox))),
        (3, "section counts", true, Box::new(section_counts)),
        (4, "decomposition identity", true, Box::new(decomposition)),
        (5, "oracle equivalence", true, Box::new(oracle_equivalence)),
        (6, "generating-series numerators", true, Box::new(generating_series)),
        (7, "local series", true, Box::new(|| local_series(&cox))),
        (8, "Euler factor and point counts", true, Box::new(|| euler_factor(&cox))),
        (9, "leading constant", true, Box::new(|| constant(&cox))),
        (10, "cone volumes and coverage", true, Box::new(|| cones(&cox))),
        (11, "trend report (non-binding)", false, Box::new(|| trend(&cox))),
    ];
    let mut failed = Vec::new();
    for (id, name, binding, run) in &checks {
        let start = Instant::now();
        let o = run().unwrap_or_else(|e| Outcome { pass: false, detail: format!("error: {e}") });
        let secs = start.elapsed().as_secs_f64();
        println!("{} {id:>2} {name} [{secs:.1}s]: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass && *binding {
            failed.push(*id);
        }
    }
    assert!(failed.is_empty(), "binding criteria failed: {failed:?}");
}
