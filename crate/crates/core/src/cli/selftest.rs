//! Fast invariant checks run by `sqpnet selftest`.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;

use crate::error::Result;
use crate::experiments::adiabatic::{adiabatic_ramp_evolve, RampSchedule, RampShape};
use crate::experiments::targets::{gen_haar_unitary, gen_ising_unitary, IsingParams};
use crate::metrics::effdim::effective_dimension;
use crate::metrics::fisher::{fisher_ls, fisher_ml, FisherMatrix};
use crate::networks::{
    build_sqp_unitary, forward, forward_channel, sqp_activation, FeatureMap, NetworkInput, NetworkSpec, ParamVector,
    Readout, SignVariant, SqpEdgeParams,
};
use crate::qcore::StateVector;
use crate::rng;
use crate::training::{finite_diff_grad, parameter_shift_grad, ClassicalDataset, Evaluator, Task};
use crate::training::evaluator::Split;

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, r: Result<(bool, String)>) -> Check {
    match r {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn sqp_gate() -> Result<(bool, String)> {
    let mut r = rng::stream(0, &[0]);
    let (mut unit, mut exc) = (0.0f64, 0.0f64);
    for k in 0..50 {
        let n_in = 1 + k % 4;
        let sign = if k % 2 == 0 { SignVariant::Plus } else { SignVariant::Minus };
        let w: Vec<f64> = (0..n_in).map(|_| r.random_range(-4.0..4.0)).collect();
        let p = SqpEdgeParams::new(w, r.random_range(-4.0..4.0));
        let u = build_sqp_unitary(&p, n_in, sign)?;
        unit = unit.max(u.matrix().unitarity_defect());
        for x in 0..1usize << n_in {
            let out = StateVector::new(u.matrix().matvec(StateVector::basis(n_in + 1, 2 * x).amplitudes()))?;
            exc = exc.max((out.excitation(n_in) - sqp_activation(p.activation(x))).abs());
        }
    }
    Ok((unit < 1e-10 && exc < 1e-12, format!("unitarity {unit:.1e}, excitation {exc:.1e}")))
}

fn forward_routes() -> Result<(bool, String)> {
    let specs = [
        NetworkSpec::sqp(vec![2, 2, 1]),
        NetworkSpec::hannover(vec![2, 3, 1]),
        NetworkSpec::hea(3, 2),
    ];
    let mut worst = 0.0f64;
    for (i, spec) in specs.iter().enumerate() {
        let mut r = rng::stream(1, &[i as u64]);
        let theta = ParamVector::<f64>::random(spec, &mut r);
        let x: Vec<f64> = (0..spec.input_width()).map(|_| r.random_range(0.0..PI)).collect();
        let a = forward(spec, &theta, NetworkInput::Classical(&x))?;
        let b = forward_channel(spec, &theta, NetworkInput::Classical(&x))?;
        worst = worst.max(a.matrix().max_abs_diff(b.matrix()));
    }
    Ok((worst < 1e-10, format!("max |Δρ| {worst:.1e}")))
}

fn fisher_single_rotation() -> Result<(bool, String)> {
    let spec = NetworkSpec::hea(1, 1)
        .with_feature_map(FeatureMap::Easy)
        .with_readout(Readout::distribution_all());
    let xs = vec![vec![0.0]];
    let ml = fisher_ml(&spec, &[0.7], &xs)?.get(0, 0);
    let ls = fisher_ls(&spec, &[FRAC_PI_2], &xs)?.get(0, 0);
    Ok(((ml - 1.0).abs() < 1e-4 && (ls - 0.5).abs() < 1e-4, format!("F_ML {ml:.6}, F_LS {ls:.6}")))
}

fn effdim_identity() -> Result<(bool, String)> {
    let (n, d) = (1e4, 5usize);
    let kappa = n / (2.0 * PI);
    let got = effective_dimension(&[FisherMatrix::identity(d)], n)?;
    let want = d as f64 * kappa.ln_1p() / kappa.ln();
    let big = effective_dimension(&[FisherMatrix::identity(d)], 1e12)?;
    let ok = (got - want).abs() < 1e-6 && (big - d as f64).abs() < 1e-3 * d as f64;
    Ok((ok, format!("{got:.6} vs {want:.6}, n=1e12 gives {big:.4}")))
}

fn gradient_rules() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for k in 0..10u64 {
        let mut r = rng::stream(2, &[k]);
        let n = 2 + (k as usize % 3);
        let spec = NetworkSpec::hea(n, 2).with_readout(Readout::class_probe(vec![0]));
        let x: Vec<f64> = (0..n).map(|_| r.random_range(0.0..PI)).collect();
        let theta = ParamVector::<f64>::random(&spec, &mut r).into_values();
        let f = |t: &[f64]| -> Result<f64> {
            let p = ParamVector::new(&spec, t.to_vec())?;
            Ok(crate::networks::model_output(&spec, &p, NetworkInput::Classical(&x))?.probabilities[0])
        };
        let fd = finite_diff_grad(f, &theta, 1e-4)?;
        let ps = parameter_shift_grad(f, &theta)?;
        worst = fd.iter().zip(&ps).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
    }
    Ok((worst < 1e-4, format!("max |FD − shift| {worst:.1e}")))
}

fn cached_gradient() -> Result<(bool, String)> {
    let spec = NetworkSpec::sqp(vec![2, 2, 1]);
    let inputs = vec![vec![0.3, 1.2], vec![2.0, 0.1], vec![1.0, 1.0]];
    let labels = vec![vec![1.0], vec![0.0], vec![1.0]];
    let data = ClassicalDataset::train_only(inputs, labels)?;
    let ev = Evaluator::new(&spec, Task::Classify(&data))?;
    let theta = ParamVector::<f64>::random(&spec, &mut rng::stream(3, &[])).into_values();
    let fast = ev.gradient(&theta, 1e-3)?;
    let plain = finite_diff_grad(|t| ev.metric(t, Split::Train), &theta, 1e-3)?;
    Ok((fast == plain, format!("{} components", fast.len())))
}

fn target_unitaries() -> Result<(bool, String)> {
    let haar = gen_haar_unitary(2, 4).matrix().unitarity_defect();
    let ising = gen_ising_unitary(&IsingParams::random(2, 4)).matrix().unitarity_defect();
    Ok((haar < 1e-10 && ising < 1e-10, format!("Haar {haar:.1e}, Ising {ising:.1e}")))
}

fn adiabatic_ramp() -> Result<(bool, String)> {
    let p = SqpEdgeParams::new(vec![1.3], -0.4);
    let schedule = RampSchedule::for_params(&p, 30.0, RampShape::Tangent);
    let mut worst = 0.0f64;
    for x in 0..2 {
        let out = adiabatic_ramp_evolve(&p, &schedule, &StateVector::basis(2, 2 * x))?;
        worst = worst.max((out.excitation(1) - sqp_activation(p.activation(x))).abs());
    }
    Ok((worst < 1e-2, format!("max deviation {worst:.1e} at T = 30")))
}

/// Runs every check; never panics on a failing check.
pub fn run_selftest() -> Vec<Check> {
    vec![
        check("sqp_gate", sqp_gate()),
        check("forward_routes", forward_routes()),
        check("fisher_single_rotation", fisher_single_rotation()),
        check("effdim_identity", effdim_identity()),
        check("gradient_rules", gradient_rules()),
        check("cached_gradient", cached_gradient()),
        check("target_unitaries", target_unitaries()),
        check("adiabatic_ramp", adiabatic_ramp()),
    ]
}
