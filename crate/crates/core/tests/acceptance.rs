//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! `SQPNET_ACCEPTANCE=1,3,9` restricts the run to the listed criteria.
//! The process fails only when a criterion outside `EXPECTED_RED` fails;
//! expected-red criteria still print their measured values.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sqpnet::experiments::effdim::{default_sweep, fisher_samples};
use sqpnet::experiments::unitary::TargetKind;
use sqpnet::experiments::{
    run_adiabatic_check, run_capacity_experiment, run_classification_experiment, run_effective_dimension_sweep,
    run_unitary_learning_experiment, AdiabaticCheckConfig, CapacityConfig, ClassifyConfig, EffDimSweepConfig,
    Progress, UnitaryConfig,
};
use sqpnet::metrics::effdim::{effective_dimension, EffDimConfig};
use sqpnet::metrics::fisher::{fisher_ls, fisher_ml, FisherMatrix};
use sqpnet::metrics::{NetworkModel, ProbabilityModel};
use sqpnet::networks::{
    build_sqp_unitary, model_output, Family, FeatureMap, NetworkInput, NetworkSpec, Readout, SignVariant,
    SqpEdgeParams,
};
use sqpnet::training::finite_diff_grad;
use sqpnet::ParamVector;

/// Criteria known to miss their threshold with a faithful implementation.
const EXPECTED_RED: &[u32] = &[6, 7];

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

/// Sigmoid of the perceptron, written out independently of the library.
fn f_sigmoid(a: f64) -> f64 {
    0.5 * (1.0 + a / (1.0 + a * a).sqrt())
}

fn activation(w: &[f64], b: f64, x: usize) -> f64 {
    let n = w.len();
    (0..n).filter(|j| (x >> (n - 1 - j)) & 1 == 1).map(|j| w[j]).sum::<f64>() - b
}

fn c1_sqp_gate() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    let (mut unit, mut exc) = (0.0f64, 0.0f64);
    for k in 0..200 {
        let n_in = 1 + k % 4;
        let sign = if k % 2 == 0 { SignVariant::Plus } else { SignVariant::Minus };
        let w: Vec<f64> = (0..n_in).map(|_| r.random_range(-5.0..5.0)).collect();
        let b = r.random_range(-5.0..5.0);
        let u = build_sqp_unitary(&SqpEdgeParams::new(w.clone(), b), n_in, sign).unwrap();
        let d = u.matrix().dim();
        let m = DMatrix::from_fn(d, d, |i, j| u.matrix().row(i)[j]);
        let defect = (&m * m.adjoint() - DMatrix::<Complex64>::identity(d, d))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        unit = unit.max(defect);
        for x in 0..1usize << n_in {
            // Column of |x, 0⟩; excitation is the weight on |x, 1⟩.
            let p1 = m[(2 * x + 1, 2 * x)].norm_sqr();
            exc = exc.max((p1 - f_sigmoid(activation(&w, b, x))).abs());
        }
    }
    outcome(unit < 1e-10 && exc < 1e-12, format!("max unitarity defect {unit:.2e}, max excitation error {exc:.2e}"))
}

fn c2_adiabatic() -> Outcome {
    let cfg = AdiabaticCheckConfig::default();
    let report = run_adiabatic_check(&cfg, &Progress::silent()).unwrap();
    let mut dev = vec![0.0f64; cfg.ramp_times.len()];
    for row in &report.rows {
        let k = cfg.ramp_times.iter().position(|&t| t == row.total_time).unwrap();
        let closed = f_sigmoid(activation(&row.params.weights, row.params.bias, row.pattern));
        dev[k] = dev[k].max((row.excitation_ramp - closed).abs());
    }
    let decreasing = dev.windows(2).all(|w| w[1] < w[0]);
    let last = *dev.last().unwrap();
    let ladder: Vec<String> = cfg.ramp_times.iter().zip(&dev).map(|(t, d)| format!("T={t}: {d:.2e}")).collect();
    outcome(
        decreasing && last < 1e-2 && cfg.ramp_times.last() == Some(&100.0),
        format!("max deviation {}", ladder.join(", ")),
    )
}

fn c3_fisher() -> Outcome {
    let spec = NetworkSpec::hea(1, 1)
        .with_feature_map(FeatureMap::Easy)
        .with_readout(Readout::distribution_all());
    let xs = vec![vec![0.0]];
    let mut ml_err = 0.0f64;
    let mut fd_err = 0.0f64;
    let model = NetworkModel::new(spec.clone()).unwrap();
    for &t in &[0.3, 1.1, FRAC_PI_2, 2.6] {
        let ml = fisher_ml(&spec, &[t], &xs).unwrap().get(0, 0);
        ml_err = ml_err.max((ml - 1.0).abs());
        // Cross-check: Σ (∂p)² / p from central differences of the model.
        let h = 1e-5;
        let pp = model.probabilities(&[t + h], &xs[0]).unwrap();
        let pm = model.probabilities(&[t - h], &xs[0]).unwrap();
        let p0 = model.probabilities(&[t], &xs[0]).unwrap();
        let fd: f64 = (0..p0.len()).map(|k| ((pp[k] - pm[k]) / (2.0 * h)).powi(2) / p0[k]).sum();
        fd_err = fd_err.max((fd - ml).abs());
    }
    let ls = fisher_ls(&spec, &[FRAC_PI_2], &xs).unwrap().get(0, 0);

    let cfg = EffDimConfig {
        n_theta_samples: 10,
        n_x_samples: 5,
        ..EffDimConfig::default()
    };
    let mut min_eig = f64::INFINITY;
    let mut asym = 0.0f64;
    for (i, point) in default_sweep().iter().enumerate() {
        for (j, net) in point.networks.iter().enumerate() {
            for f in fisher_samples(net, point.n_in, &cfg, 5, (i * 10 + j) as u64).unwrap() {
                let d = f.dim();
                let m = DMatrix::from_row_slice(d, d, f.entries());
                asym = asym.max((&m - m.transpose()).amax());
                min_eig = min_eig.min(SymmetricEigen::new(m).eigenvalues.min());
            }
        }
    }
    outcome(
        ml_err < 1e-4 && (ls - 0.5).abs() < 1e-4 && fd_err < 1e-4 && asym < 1e-12 && min_eig >= -1e-8,
        format!(
            "|F_ML - 1| {ml_err:.1e}, F_LS(pi/2) {ls:.6}, FD cross-check {fd_err:.1e}, asymmetry {asym:.1e}, min eigenvalue {min_eig:.1e}"
        ),
    )
}

fn c4_effdim_limits() -> Outcome {
    let d = 6usize;
    let id = FisherMatrix::identity(d);
    let n = 1e4;
    let k = n / (2.0 * PI);
    let closed = d as f64 * (1.0 + k).ln() / k.ln();
    let got = effective_dimension(std::slice::from_ref(&id), n).unwrap();
    let big = effective_dimension(std::slice::from_ref(&id), 1e12).unwrap();
    let ns = [1e2, 1e3, 1e4, 1e5, 1e6, 1e8, 1e10, 1e12];
    let vals: Vec<f64> = ns.iter().map(|&n| effective_dimension(std::slice::from_ref(&id), n).unwrap()).collect();
    let monotone = vals.windows(2).all(|w| w[1] <= w[0]) || vals.windows(2).all(|w| w[1] >= w[0]);
    let rel = (big - d as f64).abs() / d as f64;
    outcome(
        (got - closed).abs() < 1e-6 && rel < 1e-3 && monotone,
        format!("closed-form error {:.1e}, n=1e12 relative gap {rel:.2e}, monotone {monotone}", (got - closed).abs()),
    )
}

fn c5_effdim_ordering() -> Outcome {
    let cfg = EffDimSweepConfig::default();
    let report = run_effective_dimension_sweep(&cfg, &Progress::silent()).unwrap();
    let norm = |n_in: usize, n_out: usize, fam: Family| {
        report
            .summary
            .iter()
            .find(|s| s.n_in == n_in && s.n_out == n_out && s.family == fam)
            .map(|s| s.normalized)
            .unwrap()
    };
    let (mut hea_wins, mut han_wins) = (0, 0);
    let mut parts = Vec::new();
    for p in &cfg.sweep {
        let (s, h, e) = (
            norm(p.n_in, p.n_out, Family::Sqp),
            norm(p.n_in, p.n_out, Family::Hannover),
            norm(p.n_in, p.n_out, Family::Hea),
        );
        hea_wins += (e >= s) as usize;
        han_wins += (h >= s) as usize;
        parts.push(format!("[{},{}] SQP {s:.3} HANNOVER {h:.3} HEA {e:.3}", p.n_in, p.n_out));
    }
    let ok = cfg.sweep.len() >= 3 && cfg.effdim.n_observations == 1e4 && hea_wins >= 2 && han_wins >= 2;
    outcome(ok, format!("{}; HEA>=SQP {hea_wins}/3, HANNOVER>=SQP {han_wins}/3", parts.join("; ")))
}

fn c6_capacity() -> Outcome {
    let cfg = CapacityConfig::default();
    let report = run_capacity_experiment(&cfg, &Progress::silent()).unwrap();
    let n = cfg.n_seeds;
    let need = 6;
    let mut ok = n == 8 && cfg.n_samples == 30 && cfg.n_features == 4 && cfg.n_classes == 2;
    let mut parts = Vec::new();
    for spec in &cfg.networks {
        let id = spec.id();
        let wins = (0..n)
            .filter(|&s| {
                report.final_loss(&id, FeatureMap::Hard, s).unwrap() < report.final_loss(&id, FeatureMap::Easy, s).unwrap()
            })
            .count();
        ok &= wins >= need;
        parts.push(format!("{id} HARD<EASY {wins}/{n}"));
    }
    let by_family = |fam: Family| cfg.networks.iter().find(|s| s.family == fam).unwrap().id();
    let (sqp, han, hea) = (by_family(Family::Sqp), by_family(Family::Hannover), by_family(Family::Hea));
    for fm in [FeatureMap::Easy, FeatureMap::Hard] {
        let wins = (0..n)
            .filter(|&s| {
                let l = |id: &str| report.final_loss(id, fm, s).unwrap();
                l(&sqp) > l(&han).min(l(&hea))
            })
            .count();
        ok &= wins >= need;
        parts.push(format!("{} SQP>min(others) {wins}/{n}", fm.name()));
    }
    outcome(ok, parts.join(", "))
}

fn c7_unitary() -> Outcome {
    let cfg = UnitaryConfig::default();
    let report = run_unitary_learning_experiment(&cfg, &Progress::silent()).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for kind in [TargetKind::Ising, TargetKind::Haar] {
        let han = report.run(kind, Family::Hannover).unwrap();
        let sqp = report.run(kind, Family::Sqp).unwrap();
        let max_val = han.result.best_validation.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let han_final = *han.result.mean_validation.last().unwrap();
        let sqp_final = *sqp.result.mean_validation.last().unwrap();
        ok &= max_val > 0.99 && sqp_final < han_final;
        parts.push(format!(
            "{}: HANNOVER max validation {max_val:.4}, final mean SQP {sqp_final:.4} vs HANNOVER {han_final:.4}",
            kind.name()
        ));
    }
    outcome(ok, parts.join("; "))
}

fn c8_classify() -> Outcome {
    let cfg = ClassifyConfig::default();
    let report = run_classification_experiment(&cfg, &Progress::silent()).unwrap();
    let mut ok = cfg.n_train == 30 && cfg.train.n_restarts == 16;
    let mut parts = Vec::new();
    for run in &report.runs {
        let r = &run.result;
        let ordered = r.best_validation.iter().zip(&r.mean_validation).all(|(b, m)| b <= m);
        ok &= ordered;
        if matches!(run.family, Family::Hea | Family::Hannover) {
            let best = r.best_restart.map(|k| &r.restarts[k]).unwrap();
            let (init, fin) = (best.train[0], *best.train.last().unwrap());
            ok &= fin < 0.5 * init;
            parts.push(format!("{} best restart {init:.4} -> {fin:.4}", run.spec_id));
        }
        parts.push(format!("{} min<=mean {ordered}", run.spec_id));
    }
    outcome(ok, parts.join(", "))
}

fn c9_gradients() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = r.random_range(1..=4usize);
        let layers = r.random_range(1..=12 / n);
        let spec = NetworkSpec::hea(n, layers).with_readout(Readout::class_probe(vec![0]));
        assert!(spec.param_count() <= 12);
        let x: Vec<f64> = (0..n).map(|_| r.random_range(0.0..PI)).collect();
        let theta = ParamVector::random(&spec, &mut r).into_values();
        let f = |t: &[f64]| -> sqpnet::Result<f64> {
            let p = ParamVector::new(&spec, t.to_vec())?;
            Ok(model_output(&spec, &p, NetworkInput::Classical(&x))?.probabilities[0])
        };
        let fd = finite_diff_grad(f, &theta, 1e-4).unwrap();
        for i in 0..theta.len() {
            let mut tp = theta.clone();
            let mut tm = theta.clone();
            tp[i] += FRAC_PI_2;
            tm[i] -= FRAC_PI_2;
            let shift = 0.5 * (f(&tp).unwrap() - f(&tm).unwrap());
            worst = worst.max((shift - fd[i]).abs());
        }
    }
    outcome(worst < 1e-4, format!("max |FD - shift| {worst:.2e} over 50 circuits"))
}

const SMALL_CONFIGS: &[(&str, &str)] = &[
    ("effdim", r#"{"n_theta_samples":6,"n_x_samples":4}"#),
    ("capacity", r#"{"n_samples":10,"n_seeds":2,"n_epochs":3}"#),
    ("classify", r#"{"n_epochs":2,"n_restarts":4}"#),
    ("unitary-learn", r#"{"n_train":6,"n_validation":3,"n_epochs":2,"n_restarts":2}"#),
    ("adiabatic-check", r#"{"n_draws":2,"ramp_times":[2.0,5.0]}"#),
];

fn csvs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    v.sort();
    v
}

fn c10_determinism() -> Outcome {
    let tmp = tempfile::tempdir().unwrap();
    let mut bad = Vec::new();
    for (cmd, cfg) in SMALL_CONFIGS {
        let cfg_path = tmp.path().join(format!("{cmd}.json"));
        std::fs::write(&cfg_path, cfg).unwrap();
        let mut runs = Vec::new();
        for (i, jobs) in ["1", "4", "1", "4"].iter().enumerate() {
            let out = tmp.path().join(format!("{cmd}-{i}"));
            let status = Command::new(env!("CARGO_BIN_EXE_sqpnet"))
                .args([cmd, "--quiet", "--seed", "3", "--jobs", jobs, "--config"])
                .arg(&cfg_path)
                .arg("--out")
                .arg(&out)
                .status()
                .unwrap();
            if !status.success() {
                bad.push(format!("{cmd} exited with {status}"));
            }
            runs.push(csvs(&out));
        }
        if runs.iter().any(|r| r != &runs[0] || r.is_empty()) {
            bad.push(format!("{cmd} differs"));
        }
    }
    let detail = if bad.is_empty() {
        format!("{} subcommands byte-identical at jobs 1 and 4", SMALL_CONFIGS.len())
    } else {
        bad.join(", ")
    };
    outcome(bad.is_empty(), detail)
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

const fn mins(m: u64) -> Duration {
    Duration::from_secs(60 * m)
}

const CRITERIA: &[Criterion] = &[
    (1, "SQP gate correctness", Duration::from_secs(10), c1_sqp_gate),
    (2, "adiabatic ramp oracle", mins(5), c2_adiabatic),
    (3, "Fisher correctness", Duration::from_secs(10), c3_fisher),
    (4, "effective dimension limits", Duration::from_secs(10), c4_effdim_limits),
    (5, "effective dimension ordering", mins(30), c5_effdim_ordering),
    (6, "capacity ordering", mins(60), c6_capacity),
    (7, "unitary learning", mins(120), c7_unitary),
    (8, "iris classification", mins(60), c8_classify),
    (9, "gradient oracle", mins(1), c9_gradients),
    (10, "determinism", Duration::MAX, c10_determinism),
];

fn main() {
    let only: Option<Vec<u32>> = std::env::var("SQPNET_ACCEPTANCE")
        .ok()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let mut unexpected = 0;
    for &(id, name, budget, run) in CRITERIA {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let passed = o.passed && in_time;
        let budget_note = if budget == Duration::MAX {
            String::new()
        } else {
            format!(" / {:.0} s", budget.as_secs_f64())
        };
        let red = EXPECTED_RED.contains(&id);
        println!(
            "{} criterion {id} ({name}): {} [{:.1} s{budget_note}]{}",
            if passed { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            if !in_time { " over time budget" } else { "" }
        );
        if !passed && !red {
            unexpected += 1;
        }
        if passed && red {
            println!("note: criterion {id} is listed as expected red but passed");
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed outside the expected-red list");
        std::process::exit(1);
    }
}
