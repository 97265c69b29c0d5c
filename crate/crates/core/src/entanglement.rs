//! Entanglement entropies of the out/hor pair, checked against the
//! truncated Fock-space oracle, plus the boson/fermion crossover.
//!
//! Everything is keyed on `x = 4πmω`. With `q = e^{-2x}`:
//!
//! * boson: `S = cosh²r log₂ cosh²r − sinh²r log₂ sinh²r
//!          = −log₂(1 − q) − q/(1 − q) · log₂ q`
//! * fermion: `S = −2[cos²r̃ log₂ cos²r̃ + sin²r̃ log₂ sin²r̃] = 2 H₂(1/(1 + e^{2x}))`

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::{DensityOperator, Occupation, Sector, Subsystem};
use crate::geometry::{
    dimensionless_x, BlackHoleParams, ModeChannel, SqueezingParams, Statistics, DEFAULT_X_MIN,
};
use crate::states::{build_boson_state, build_fermion_state};

/// Probabilities below this are left out of the temperature fit.
pub const FIT_PROBABILITY_FLOOR: f64 = 1e-15;
pub const DEFAULT_CROSSOVER_TOL: f64 = 1e-8;
pub const DEFAULT_BRACKET: (f64, f64) = (0.1, 1.0);
/// Log grid used to confirm the crossover is the only sign change.
pub const UNIQUENESS_SCAN: (f64, f64, usize) = (1e-4, 1e2, 200);

/// Bosonic entropy of entanglement in bits, stable for all `x > 0`.
pub fn boson_entropy_x(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    // −ln(1 − q) + 2x · q/(1 − q), with 1 − q = −expm1(−2x), q/(1 − q) = 1/expm1(2x)
    let one_minus_q = -(-2.0 * x).exp_m1();
    let occupation = 1.0 / (2.0 * x).exp_m1();
    let s = (-one_minus_q.ln() + 2.0 * x * occupation) / LN_2;
    s.max(0.0)
}

/// Fermionic entropy of entanglement in bits, in `[0, 2]`.
pub fn fermion_entropy_x(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    // s² = 1/(1 + e^{2x}), c² = 1/(1 + e^{−2x})
    let e = (-2.0 * x).exp();
    let ln_c2 = -e.ln_1p();
    let ln_s2 = -2.0 * x + ln_c2;
    let c2 = 1.0 / (1.0 + e);
    let s2 = e / (1.0 + e);
    let h = -(c2 * ln_c2 + s2 * ln_s2) / LN_2;
    (2.0 * h).clamp(0.0, 2.0)
}

pub fn boson_entropy(s: &SqueezingParams) -> Result<f64> {
    s.statistics().expect(Statistics::Boson)?;
    Ok(boson_entropy_x(s.x()))
}

pub fn fermion_entropy(s: &SqueezingParams) -> Result<f64> {
    s.statistics().expect(Statistics::Fermion)?;
    Ok(fermion_entropy_x(s.x()))
}

/// Closed-form entropy for either statistics.
pub fn closed_form_entropy(statistics: Statistics, x: f64) -> f64 {
    match statistics {
        Statistics::Boson => boson_entropy_x(x),
        Statistics::Fermion => fermion_entropy_x(x),
    }
}

/// The cosh/sinh form evaluated literally. Loses precision as `r` grows;
/// only used as a cross-check for `x ≥ 0.05`.
pub fn boson_entropy_hyperbolic(r: f64) -> f64 {
    let c2 = r.cosh().powi(2);
    let s2 = r.sinh().powi(2);
    let tail = if s2 > 0.0 { s2 * s2.log2() } else { 0.0 };
    c2 * c2.log2() - tail
}

/// The cos/sin form evaluated literally.
pub fn fermion_entropy_trigonometric(r: f64) -> f64 {
    let (sin, cos) = r.sin_cos();
    let (s2, c2) = (sin * sin, cos * cos);
    let term = |p: f64| if p > 0.0 { p * p.log2() } else { 0.0 };
    -2.0 * (term(c2) + term(s2))
}

/// Per-mode entropy summary: closed form, oracle, occupation and fitted
/// temperature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub x: f64,
    pub omega: f64,
    pub mass: f64,
    pub statistics: Statistics,
    pub entropy_closed_form: f64,
    pub entropy_numerical: f64,
    pub abs_gap: f64,
    /// Particle-sector occupation of the reduced state.
    pub mean_occupation: f64,
    /// Fitted temperature over `1/(8πm)`. `None` when the reduced state is
    /// numerically the vacuum and no slope can be fitted.
    pub fitted_temperature_ratio: Option<f64>,
}

/// Numerical reduced state of the out/hor pair for one mode.
pub fn reduced_state(s: &SqueezingParams, eps_tail: f64, keep: Subsystem) -> Result<DensityOperator> {
    let state = match s.statistics() {
        Statistics::Boson => build_boson_state(s, eps_tail)?.into_state(),
        Statistics::Fermion => build_fermion_state(s)?.into_state(),
    };
    Ok(state.partial_trace(keep))
}

/// `T_fit / T_H` from a reduced state diagonal in the occupation basis.
///
/// Bosons: least-squares slope of `ln p(n)` against `n` over `p(n) > 1e-15`;
/// the slope is `−ω/T`. Fermions: `p(|10⟩) / p(|00⟩) = e^{−ω/T}`.
/// In both cases `ω/T_H = 2x`.
pub fn fitted_temperature_ratio(rho: &DensityOperator, x: f64) -> Result<Option<f64>> {
    let diag = rho.diagonal();
    match rho.statistics() {
        Statistics::Boson => {
            let points: Vec<(f64, f64)> = rho
                .basis()
                .iter()
                .zip(&diag)
                .filter(|(_, &p)| p > FIT_PROBABILITY_FLOOR)
                .map(|(label, p)| match label {
                    Occupation::Boson(n) => (*n as f64, p.ln()),
                    Occupation::Fermion { .. } => unreachable!("checked statistics"),
                })
                .collect();
            if points.len() < 2 {
                return Ok(None);
            }
            let k = points.len() as f64;
            let mean_n = points.iter().map(|p| p.0).sum::<f64>() / k;
            let mean_l = points.iter().map(|p| p.1).sum::<f64>() / k;
            let (mut sxy, mut sxx) = (0.0, 0.0);
            for (n, l) in &points {
                sxy += (n - mean_n) * (l - mean_l);
                sxx += (n - mean_n) * (n - mean_n);
            }
            let slope = sxy / sxx;
            Ok(Some(-2.0 * x / slope))
        }
        Statistics::Fermion => {
            let (vac, particle) = (diag[0], diag[2]);
            if !(particle > 0.0 && vac > 0.0) {
                return Ok(None);
            }
            Ok(Some(2.0 * x / -(particle / vac).ln()))
        }
    }
}

/// Closed form and oracle for one mode, tracing out the horizon side.
pub fn entropy_report(p: &BlackHoleParams, c: &ModeChannel, eps_tail: f64) -> Result<EntropyReport> {
    entropy_report_keeping(p, c, eps_tail, Subsystem::Out)
}

/// As [`entropy_report`] with an explicit kept subsystem.
pub fn entropy_report_keeping(
    p: &BlackHoleParams,
    c: &ModeChannel,
    eps_tail: f64,
    keep: Subsystem,
) -> Result<EntropyReport> {
    let x = dimensionless_x(p, c);
    report_for_x(p, c.omega(), SqueezingParams::with_floor(c.statistics(), x, DEFAULT_X_MIN)?, eps_tail, keep)
}

fn report_for_x(
    p: &BlackHoleParams,
    omega: f64,
    s: SqueezingParams,
    eps_tail: f64,
    keep: Subsystem,
) -> Result<EntropyReport> {
    let rho = reduced_state(&s, eps_tail, keep)?;
    let closed = closed_form_entropy(s.statistics(), s.x());
    let numerical = rho.von_neumann_entropy()?;
    Ok(EntropyReport {
        x: s.x(),
        omega,
        mass: p.mass(),
        statistics: s.statistics(),
        entropy_closed_form: closed,
        entropy_numerical: numerical,
        abs_gap: (closed - numerical).abs(),
        mean_occupation: rho.mean_occupation(Sector::Particle)?,
        fitted_temperature_ratio: fitted_temperature_ratio(&rho, s.x())?,
    })
}

/// Boson/fermion crossing point in `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossoverResult {
    pub x_star: f64,
    /// Final bracket, `lo < x_star < hi`.
    pub bracket: (f64, f64),
    /// `S_fermion(x_star) − S_boson(x_star)`.
    pub residual: f64,
    pub iterations: u32,
    /// Sign changes found on the uniqueness scan; 1 when the root is unique.
    pub sign_changes: usize,
}

/// `S_fermion(x) − S_boson(x)`: negative at small `x`, positive at large `x`.
pub fn entropy_difference(x: f64) -> f64 {
    fermion_entropy_x(x) - boson_entropy_x(x)
}

/// Log-spaced grid of `points` values from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..points)
                .map(|i| {
                    if i == 0 {
                        lo
                    } else if i == points - 1 {
                        hi
                    } else {
                        (a + (b - a) * i as f64 / (points - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// Adjacent grid pairs across which `S_fermion − S_boson` changes sign.
pub fn sign_change_brackets(grid: &[f64]) -> Vec<(f64, f64)> {
    let signs: Vec<(f64, f64)> = grid
        .iter()
        .map(|&x| (x, entropy_difference(x)))
        .filter(|(_, d)| *d != 0.0)
        .collect();
    signs
        .windows(2)
        .filter(|w| w[0].1.signum() != w[1].1.signum())
        .map(|w| (w[0].0, w[1].0))
        .collect()
}

/// Bisection for the boson/fermion crossover on `[lo, hi]`, until the
/// bracket is narrower than `tol` and `|residual| < tol`.
pub fn crossover(tol: f64, lo: f64, hi: f64) -> Result<CrossoverResult> {
    if !(tol > 0.0 && lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::invalid(format!(
            "crossover needs 0 < lo < hi and tol > 0, got lo={lo} hi={hi} tol={tol}"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (entropy_difference(a), entropy_difference(b));
    if fa.signum() == fb.signum() || fa == 0.0 || fb == 0.0 {
        if fa == 0.0 || fb == 0.0 {
            let x = if fa == 0.0 { a } else { b };
            return Ok(finish(x, (a, b), 0.0, 0));
        }
        return Err(Error::NoSignChange { lo, hi });
    }
    let mut iterations = 0;
    let (mut mid, mut fm);
    loop {
        mid = 0.5 * (a + b);
        fm = entropy_difference(mid);
        iterations += 1;
        if fm == 0.0 || (b - a < tol && fm.abs() < tol) || iterations >= 200 {
            break;
        }
        if fm.signum() == fa.signum() {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(finish(mid, (a, b), fm, iterations))
}

fn finish(x: f64, bracket: (f64, f64), residual: f64, iterations: u32) -> CrossoverResult {
    let (lo, hi, n) = UNIQUENESS_SCAN;
    CrossoverResult {
        x_star: x,
        bracket,
        residual,
        iterations,
        sign_changes: sign_change_brackets(&log_grid(lo, hi, n)).len(),
    }
}

pub fn default_crossover() -> Result<CrossoverResult> {
    crossover(DEFAULT_CROSSOVER_TOL, DEFAULT_BRACKET.0, DEFAULT_BRACKET.1)
}

/// One sweep point: the requested mode and either its report or the error.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub x: f64,
    pub omega: f64,
    pub statistics: Statistics,
    pub outcome: Result<EntropyReport>,
}

/// Reports for every `ω` in a strictly increasing grid. Points are evaluated
/// in parallel and returned in grid order; failures stay in their slot.
pub fn sweep(
    p: &BlackHoleParams,
    omegas: &[f64],
    statistics: Statistics,
    eps_tail: f64,
) -> Result<Vec<SweepPoint>> {
    check_grid(omegas)?;
    Ok(omegas
        .par_iter()
        .map(|&omega| sweep_point(p, omega, statistics, eps_tail))
        .collect())
}

pub(crate) fn check_grid(omegas: &[f64]) -> Result<()> {
    if omegas.is_empty() {
        return Err(Error::invalid("frequency grid is empty"));
    }
    if omegas.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::invalid("frequency grid must be strictly increasing"));
    }
    Ok(())
}

pub(crate) fn sweep_point(p: &BlackHoleParams, omega: f64, statistics: Statistics, eps_tail: f64) -> SweepPoint {
    let x = 4.0 * std::f64::consts::PI * p.mass() * omega;
    let outcome = ModeChannel::new(omega, statistics).and_then(|c| entropy_report(p, &c, eps_tail));
    SweepPoint {
        x,
        omega,
        statistics,
        outcome,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force `−Σ p log₂ p` over `(1 − q) qⁿ`.
    fn geometric_oracle(x: f64) -> f64 {
        let q = (-2.0 * x).exp();
        let mut s = 0.0;
        let mut p = 1.0 - q;
        while p > 1e-300 {
            let term = -p * p.log2();
            s += term;
            if term.abs() < 1e-18 && p < 1e-18 {
                break;
            }
            p *= q;
        }
        s
    }

    #[test]
    fn boson_limits_and_values() {
        assert_eq!(boson_entropy_x(f64::INFINITY), 0.0);
        assert!(boson_entropy_x(800.0) < 1e-300);
        assert!((boson_entropy_x(1.0) - 0.661_401_728_559_065).abs() < 1e-12);
        assert!((boson_entropy_x(1.0) - geometric_oracle(1.0)).abs() < 1e-13);
    }

    #[test]
    fn fermion_limits_and_values() {
        assert!(fermion_entropy_x(1e-12) > 2.0 - 1e-12);
        assert!(fermion_entropy_x(1e-12) <= 2.0);
        assert_eq!(fermion_entropy_x(f64::INFINITY), 0.0);
        // four-weight oracle
        let e2 = (2.0f64).exp();
        let s2 = 1.0 / (1.0 + e2);
        let c2 = 1.0 - s2;
        let weights = [c2 * c2, s2 * c2, s2 * c2, s2 * s2];
        let oracle: f64 = weights.iter().map(|p| -p * p.log2()).sum();
        assert!((fermion_entropy_x(1.0) - oracle).abs() < 1e-14);
        assert!((fermion_entropy_x(1.0) - 1.054_130_682_006_323).abs() < 1e-12);
    }

    #[test]
    fn stable_forms_match_printed_forms() {
        let mut x = 0.05;
        while x < 15.0 {
            let b = SqueezingParams::from_x(Statistics::Boson, x).unwrap();
            let f = SqueezingParams::from_x(Statistics::Fermion, x).unwrap();
            let hb = boson_entropy_hyperbolic(b.r());
            let tf = fermion_entropy_trigonometric(f.r());
            assert!((boson_entropy_x(x) - hb).abs() < 1e-12 * hb.max(1.0), "x={x}");
            assert!((fermion_entropy_x(x) - tf).abs() < 1e-12, "x={x}");
            x *= 1.21;
        }
    }

    #[test]
    fn statistics_guard() {
        let b = SqueezingParams::from_x(Statistics::Boson, 1.0).unwrap();
        assert!(fermion_entropy(&b).is_err());
        assert!(boson_entropy(&b).is_ok());
    }

    #[test]
    fn crossover_bracket_ends() {
        assert!(boson_entropy_x(0.3) > fermion_entropy_x(0.3));
        assert!(fermion_entropy_x(1.0) > boson_entropy_x(1.0));
    }

    #[test]
    fn crossover_default() {
        let c = default_crossover().unwrap();
        assert!(c.x_star > 0.3 && c.x_star < 0.5);
        assert!(c.residual.abs() < DEFAULT_CROSSOVER_TOL);
        assert!(c.bracket.1 - c.bracket.0 < DEFAULT_CROSSOVER_TOL);
        assert_eq!(c.sign_changes, 1);
        // independent brute-force scan
        let grid: Vec<f64> = (0..=100_000).map(|i| 0.3 + 0.2 * i as f64 / 100_000.0).collect();
        let hits = sign_change_brackets(&grid);
        assert_eq!(hits.len(), 1);
        assert!(c.x_star >= hits[0].0 - 1e-8 && c.x_star <= hits[0].1 + 1e-8);
        assert!((c.x_star - 0.406_713_613_022_443_85).abs() < 1e-8);
    }

    #[test]
    fn crossover_errors() {
        assert!(matches!(crossover(1e-8, 1.0, 2.0), Err(Error::NoSignChange { .. })));
        assert!(crossover(1e-8, 0.5, 0.1).is_err());
        assert!(crossover(0.0, 0.1, 1.0).is_err());
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(0.05, 5.0, 200);
        assert_eq!(g.len(), 200);
        assert_eq!(g[0], 0.05);
        assert_eq!(g[199], 5.0);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn report_fields_are_consistent() {
        let p = BlackHoleParams::with_mass(1.0).unwrap();
        let omega = 1.0 / (4.0 * std::f64::consts::PI);
        let c = ModeChannel::new(omega, Statistics::Boson).unwrap();
        let r = entropy_report(&p, &c, 1e-12).unwrap();
        assert_eq!(r.abs_gap, (r.entropy_closed_form - r.entropy_numerical).abs());
        assert!(r.abs_gap < 1e-9);
        let t = r.fitted_temperature_ratio.unwrap();
        assert!((t - 1.0).abs() < 1e-6);
    }

    #[test]
    fn boson_occupation_at_x5() {
        let p = BlackHoleParams::with_mass(1.0).unwrap();
        let c = ModeChannel::new(5.0 / (4.0 * std::f64::consts::PI), Statistics::Boson).unwrap();
        let r = entropy_report(&p, &c, 1e-14).unwrap();
        let be = 1.0 / (10.0f64).exp_m1();
        assert!((r.mean_occupation - be).abs() < 1e-9 * be);
        assert!((be - 4.54e-5).abs() < 1e-7);
    }

    #[test]
    fn report_rejects_below_floor() {
        let p = BlackHoleParams::with_mass(1.0).unwrap();
        let c = ModeChannel::new(1e-9, Statistics::Fermion).unwrap();
        assert!(matches!(entropy_report(&p, &c, 1e-12), Err(Error::SqueezingOverflow { .. })));
    }

    #[test]
    fn deep_vacuum_has_no_fit() {
        let p = BlackHoleParams::with_mass(1.0).unwrap();
        for stats in [Statistics::Boson, Statistics::Fermion] {
            let c = ModeChannel::new(1e9, stats).unwrap();
            let r = entropy_report(&p, &c, 1e-12).unwrap();
            assert!(r.entropy_numerical.abs() < 1e-12);
            assert!(r.entropy_closed_form.abs() < 1e-12);
            assert_eq!(r.fitted_temperature_ratio, None);
        }
    }

    #[test]
    fn sweep_keeps_order_and_errors() {
        let p = BlackHoleParams::with_mass(1.0).unwrap();
        let to_omega = |x: f64| p.omega_for_x(x);
        let omegas: Vec<f64> = [1e-8, 1e-3, 0.5, 2.0].iter().map(|&x| to_omega(x)).collect();
        let pts = sweep(&p, &omegas, Statistics::Boson, 1e-12).unwrap();
        assert_eq!(pts.len(), 4);
        assert!(pts[0].outcome.is_err());
        assert!(pts[1].outcome.is_err());
        assert!(pts[2].outcome.is_ok());
        assert!(pts[3].outcome.is_ok());
        for (pt, w) in pts.iter().zip(&omegas) {
            assert_eq!(pt.omega, *w);
        }
        assert!(sweep(&p, &[], Statistics::Boson, 1e-12).is_err());
        assert!(sweep(&p, &[1.0, 0.5], Statistics::Boson, 1e-12).is_err());
    }

    #[test]
    fn singleton_sweep_matches_report() {
        let p = BlackHoleParams::with_mass(0.8).unwrap();
        let pts = sweep(&p, &[0.1], Statistics::Fermion, 1e-12).unwrap();
        let c = ModeChannel::new(0.1, Statistics::Fermion).unwrap();
        assert_eq!(pts[0].outcome.as_ref().unwrap(), &entropy_report(&p, &c, 1e-12).unwrap());
    }
}
