//! Time-domain check of the perceptron gate: an adiabatic ramp of a
//! transverse drive on the target qubit.
//!
//! In the control sector `x` the target sees `H_x(t) = −Ω(t)·X + a_x·Z`,
//! with `a_x = Σ_k w_k x_k − b`. Controls enter through their occupation
//! numbers `x_k ∈ {0, 1}`. The ground state of `H_x` is
//! `√(1 − f(a_x/Ω))|0⟩ + √f(a_x/Ω)|1⟩`, so a slow ramp from large `Ω` down
//! to 1 starting in `|+⟩` ends in the state the perceptron gate prepares
//! from `|0⟩`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::networks::sqp::{sigmoid_pair, SqpEdgeParams};
use crate::qcore::state::StateVector;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RampShape {
    /// `Ω(t) = Ω₀ + (1 − Ω₀)·t/T`.
    Linear,
    /// `Ω(t) = 1 + (Ω₀ − 1)(1 − t/T)²`, which arrives at `Ω = 1` with zero
    /// slope.
    EaseOut,
    /// `Ω(t) = tan(φ₀ − (φ₀ − π/4)·t/T)` with `φ₀ = atan Ω₀`: uniform in the
    /// mixing angle of a unit activation.
    #[default]
    Tangent,
}

/// `Ω₀ = OMEGA_FACTOR · max(1, |b| + Σ|w|)`. The initial `|+⟩` overlaps
/// the excited branch by about `a/(2Ω₀)`, which bounds the attainable
/// accuracy independently of the ramp time.
pub const OMEGA_FACTOR: f64 = 1.0e5;

/// RK4 steps never exceed this fraction of the inverse local frequency.
pub const STEP_FRACTION: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RampSchedule {
    pub omega_initial: f64,
    pub total_time: f64,
    pub dt: f64,
    pub shape: RampShape,
}

impl RampSchedule {
    /// Default schedule: `Ω₀` from [`OMEGA_FACTOR`] and a maximal step of
    /// `T/1000`.
    pub fn for_params(params: &SqpEdgeParams<f64>, total_time: f64, shape: RampShape) -> Self {
        let scale = params.bias.abs() + params.weights.iter().map(|w| w.abs()).sum::<f64>();
        let omega_initial = OMEGA_FACTOR * scale.max(1.0);
        let dt = total_time / 1000.0;
        Self {
            omega_initial,
            total_time,
            dt,
            shape,
        }
    }

    pub fn omega(&self, t: f64) -> f64 {
        let s = (t / self.total_time).clamp(0.0, 1.0);
        match self.shape {
            RampShape::Linear => self.omega_initial + (1.0 - self.omega_initial) * s,
            RampShape::EaseOut => 1.0 + (self.omega_initial - 1.0) * (1.0 - s) * (1.0 - s),
            RampShape::Tangent => {
                let p0 = self.omega_initial.atan();
                (p0 - (p0 - std::f64::consts::FRAC_PI_4) * s).tan()
            }
        }
    }

    pub fn validate(&self, params: &SqpEdgeParams<f64>) -> Result<()> {
        let scale = params.bias.abs() + params.weights.iter().map(|w| w.abs()).sum::<f64>();
        if !(self.total_time > 0.0) {
            return Err(Error::config(".total_time", "must be positive"));
        }
        if !(self.dt > 0.0 && self.dt <= self.total_time / 1000.0) {
            return Err(Error::config(".dt", "must lie in (0, T/1000]"));
        }
        if !(self.omega_initial >= 10.0 * scale.max(1.0)) {
            return Err(Error::config(".omega_initial", "must dominate |b| + Σ|w|"));
        }
        Ok(())
    }
}

/// `[[a, −Ω], [−Ω, −a]]`, the target block in sector `x`.
pub fn target_block(a: f64, omega: f64) -> [[f64; 2]; 2] {
    [[a, -omega], [-omega, -a]]
}

/// `(φ⁺, φ⁻)` for control pattern `z` (first control most significant):
/// `|z⟩ ⊗ (√f(−a/Ω)|0⟩ ± √f(±a/Ω)|1⟩)`. `φ⁺` is the ground state.
pub fn instantaneous_eigenstates(params: &SqpEdgeParams<f64>, z: usize, omega: f64) -> (StateVector<f64>, StateVector<f64>) {
    let n_in = params.weights.len();
    let (f, g) = sigmoid_pair(params.activation(z) / omega);
    let (s, c) = (f.sqrt(), g.sqrt());
    let build = |a0: f64, a1: f64| {
        let mut amps = vec![Complex64::new(0.0, 0.0); 2 << n_in];
        amps[2 * z] = Complex64::new(a0, 0.0);
        amps[2 * z + 1] = Complex64::new(a1, 0.0);
        StateVector::from_raw(n_in + 1, amps)
    };
    (build(c, s), build(s, -c))
}

fn derivative(acts: &[f64], omega: f64, psi: &[Complex64], out: &mut [Complex64]) {
    let mi = Complex64::new(0.0, -1.0);
    for (p, &a) in acts.iter().enumerate() {
        let (x0, x1) = (psi[2 * p], psi[2 * p + 1]);
        out[2 * p] = mi * (x0 * a - x1 * omega);
        out[2 * p + 1] = mi * (-x0 * omega - x1 * a);
    }
}

/// Hadamard on the target (the last qubit), then RK4 through the ramp. The
/// step is the schedule's `dt`, shortened where the local frequency
/// `√(Ω² + max a²)` demands it; the step sequence depends only on the
/// schedule and the parameters.
pub fn adiabatic_ramp_evolve(
    params: &SqpEdgeParams<f64>,
    schedule: &RampSchedule,
    input: &StateVector<f64>,
) -> Result<StateVector<f64>> {
    let n_in = params.weights.len();
    if input.n_qubits() != n_in + 1 {
        return Err(Error::DimensionMismatch {
            expected: n_in + 1,
            actual: input.n_qubits(),
        });
    }
    schedule.validate(params)?;
    let acts: Vec<f64> = (0..1usize << n_in).map(|p| params.activation(p)).collect();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut psi: Vec<Complex64> = input.amplitudes().to_vec();
    for p in 0..acts.len() {
        let (a0, a1) = (psi[2 * p], psi[2 * p + 1]);
        psi[2 * p] = (a0 + a1) * h;
        psi[2 * p + 1] = (a0 - a1) * h;
    }
    let a_max = acts.iter().fold(0.0_f64, |m, a| m.max(a.abs()));
    let len = psi.len();
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![Complex64::default(); len], vec![Complex64::default(); len], vec![Complex64::default(); len], vec![Complex64::default(); len], vec![Complex64::default(); len]);
    let mut t = 0.0;
    while t < schedule.total_time {
        let freq = schedule.omega(t).hypot(a_max);
        let dt = schedule.dt.min(STEP_FRACTION / freq).min(schedule.total_time - t);
        let (o0, o1, o2) = (schedule.omega(t), schedule.omega(t + dt / 2.0), schedule.omega(t + dt));
        derivative(&acts, o0, &psi, &mut k1);
        for i in 0..len {
            tmp[i] = psi[i] + k1[i] * (dt / 2.0);
        }
        derivative(&acts, o1, &tmp, &mut k2);
        for i in 0..len {
            tmp[i] = psi[i] + k2[i] * (dt / 2.0);
        }
        derivative(&acts, o1, &tmp, &mut k3);
        for i in 0..len {
            tmp[i] = psi[i] + k3[i] * dt;
        }
        derivative(&acts, o2, &tmp, &mut k4);
        for i in 0..len {
            psi[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
        }
        t += dt;
    }
    let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
    let drift = (norm - input.norm_sqr()).abs();
    if drift > 1e-6 {
        return Err(Error::Integration { drift });
    }
    Ok(StateVector::from_raw(n_in + 1, psi))
}
