//! The in-vacuum written in the out/hor basis, and its analytic reductions.
//!
//! Bosons: two-mode squeezed vacuum `Σ tanhⁿr / cosh r |n⟩_hor |n⟩_out`,
//! truncated at the smallest `n_max` with a geometric tail below `eps_tail`.
//! Fermions: the exact four-term state on the particle/antiparticle double
//! Fock basis.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{BasisLabel, DensityOperator, Occupation, PureBipartiteState};
use crate::geometry::{SqueezingParams, Statistics};

/// Largest single-subsystem dimension for a bosonic truncation.
pub const N_CAP: usize = 16384;
/// Default truncation tolerance on the discarded probability bound.
pub const DEFAULT_EPS_TAIL: f64 = 1e-12;
/// Loosest truncation tolerance accepted.
pub const MAX_EPS_TAIL: f64 = 1e-6;

/// `q = tanh²r = e^{-2x}` and `1 - q` without cancellation.
fn boson_q(s: &SqueezingParams) -> (f64, f64) {
    let w = s.boltzmann_weight();
    (w * w, -(-2.0 * s.x()).exp_m1())
}

/// `q^{n+1} / (1 - q)`.
fn geometric_tail(q: f64, one_minus_q: f64, n_max: u32) -> f64 {
    q.powi(n_max as i32 + 1) / one_minus_q
}

/// Smallest `n_max` whose geometric tail is below `eps_tail`.
pub fn required_n_max(s: &SqueezingParams, eps_tail: f64) -> Result<u32> {
    s.statistics().expect(Statistics::Boson)?;
    if !(eps_tail > 0.0 && eps_tail <= MAX_EPS_TAIL) {
        return Err(Error::invalid(format!(
            "eps_tail must lie in (0, {MAX_EPS_TAIL:e}], got {eps_tail}"
        )));
    }
    let (q, one_minus_q) = boson_q(s);
    if q == 0.0 {
        return Ok(0);
    }
    // q^{n+1} < eps (1 - q)  ⇔  n + 1 > ln(eps (1 - q)) / ln q
    let estimate = ((eps_tail * one_minus_q).ln() / q.ln()).ceil() - 1.0;
    let overflow = |required: f64| Error::SqueezingOverflow {
        x: s.x(),
        reason: format!(
            "truncation needs about {required:.0} levels, cap is {N_CAP}"
        ),
    };
    if !estimate.is_finite() || estimate + 1.0 > N_CAP as f64 + 2.0 {
        return Err(overflow(estimate + 1.0));
    }
    let mut n = estimate.max(0.0) as u32;
    while geometric_tail(q, one_minus_q, n) >= eps_tail {
        n += 1;
    }
    while n > 0 && geometric_tail(q, one_minus_q, n - 1) < eps_tail {
        n -= 1;
    }
    if n as usize + 1 > N_CAP {
        return Err(overflow(n as f64 + 1.0));
    }
    Ok(n)
}

/// Truncated bosonic two-mode squeezed vacuum.
#[derive(Debug, Clone, PartialEq)]
pub struct BosonSqueezedVacuum {
    state: PureBipartiteState,
    squeezing: SqueezingParams,
}

impl BosonSqueezedVacuum {
    pub fn state(&self) -> &PureBipartiteState {
        &self.state
    }

    pub fn squeezing(&self) -> &SqueezingParams {
        &self.squeezing
    }

    pub fn n_max(&self) -> u32 {
        self.state.n_max()
    }

    pub fn into_state(self) -> PureBipartiteState {
        self.state
    }
}

/// Exact fermionic out/hor state for one frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionOutHorState {
    state: PureBipartiteState,
    squeezing: SqueezingParams,
}

impl FermionOutHorState {
    pub fn state(&self) -> &PureBipartiteState {
        &self.state
    }

    pub fn squeezing(&self) -> &SqueezingParams {
        &self.squeezing
    }

    pub fn into_state(self) -> PureBipartiteState {
        self.state
    }
}

/// Builds `Σ_{n ≤ n_max} √(1 - q) wⁿ |n⟩|n⟩` with `w = tanh r`.
///
/// `1 / cosh r` is taken as `√(1 - tanh²r)` so large `r` never overflows.
pub fn build_boson_state(s: &SqueezingParams, eps_tail: f64) -> Result<BosonSqueezedVacuum> {
    let n_max = required_n_max(s, eps_tail)?;
    let (q, one_minus_q) = boson_q(s);
    let w = s.boltzmann_weight();
    let norm = one_minus_q.sqrt();
    let tail = if q == 0.0 { 0.0 } else { geometric_tail(q, one_minus_q, n_max) };
    let amplitudes = (0..=n_max).map(|n| {
        let label = BasisLabel::new(Occupation::Boson(n), Occupation::Boson(n));
        (label, Complex64::new(norm * w.powi(n as i32), 0.0))
    });
    let state = PureBipartiteState::new(Statistics::Boson, n_max, tail, amplitudes)?;
    Ok(BosonSqueezedVacuum {
        state,
        squeezing: *s,
    })
}

/// `cos²r̃ |00⟩|00⟩ − ½ sin 2r̃ (|01⟩|10⟩ − |10⟩|01⟩) − sin²r̃ |11⟩|11⟩`,
/// labels written `|particle antiparticle⟩_hor |particle antiparticle⟩_out`.
pub fn build_fermion_state(s: &SqueezingParams) -> Result<FermionOutHorState> {
    build_fermion_state_with_sign(s, 1.0)
}

/// As [`build_fermion_state`] with the relative sign between the two
/// single-excitation terms multiplied by `sign`.
pub fn build_fermion_state_with_sign(s: &SqueezingParams, sign: f64) -> Result<FermionOutHorState> {
    s.statistics().expect(Statistics::Fermion)?;
    let (sin, cos) = s.r().sin_cos();
    let half_sin2 = sin * cos;
    let f = Occupation::fermion;
    let terms = [
        (f(false, false), f(false, false), cos * cos),
        (f(false, true), f(true, false), -half_sin2),
        (f(true, false), f(false, true), sign * half_sin2),
        (f(true, true), f(true, true), -sin * sin),
    ];
    let state = PureBipartiteState::new(
        Statistics::Fermion,
        1,
        0.0,
        terms
            .iter()
            .map(|&(h, o, a)| (BasisLabel::new(h, o), Complex64::new(a, 0.0))),
    )?;
    Ok(FermionOutHorState {
        state,
        squeezing: *s,
    })
}

/// Thermal ladder `(1 - q) qⁿ`, `n ≤ n_max`.
///
/// `n_max` must keep the discarded mass `q^{n_max+1}` within
/// [`MAX_TRACE_DEFICIT`](crate::fock::MAX_TRACE_DEFICIT) and the dimension
/// within [`N_CAP`].
pub fn boson_reduced_analytic(s: &SqueezingParams, n_max: u32) -> Result<DensityOperator> {
    s.statistics().expect(Statistics::Boson)?;
    if n_max as usize + 1 > N_CAP {
        return Err(Error::SqueezingOverflow {
            x: s.x(),
            reason: format!("{} levels requested, cap is {N_CAP}", n_max as usize + 1),
        });
    }
    let (q, one_minus_q) = boson_q(s);
    let diag: Vec<f64> = (0..=n_max as i32).map(|n| one_minus_q * q.powi(n)).collect();
    DensityOperator::from_diagonal((0..=n_max).map(Occupation::Boson).collect(), diag)
}

/// `diag(c⁴, s²c², s²c², s⁴)` over `|00⟩, |01⟩, |10⟩, |11⟩`.
pub fn fermion_reduced_analytic(s: &SqueezingParams) -> Result<DensityOperator> {
    s.statistics().expect(Statistics::Fermion)?;
    let (sin, cos) = s.r().sin_cos();
    let (s2, c2) = (sin * sin, cos * cos);
    DensityOperator::from_diagonal(
        Occupation::FERMION_BASIS.to_vec(),
        vec![c2 * c2, s2 * c2, s2 * c2, s2 * s2],
    )
}
