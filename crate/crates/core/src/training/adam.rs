/// Moment estimates and step count of an Adam run.
#[derive(Clone, Debug, PartialEq)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
}

impl AdamState {
    pub fn new(n: usize) -> Self {
        Self {
            m: vec![0.0; n],
            v: vec![0.0; n],
            t: 0,
        }
    }
}

/// Bias-corrected Adam hyperparameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdamParams {
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamParams {
    fn default() -> Self {
        Self {
            alpha: 0.01,
            beta1: 0.9,
            beta2: 0.99,
            eps: 1e-8,
        }
    }
}

/// One descent step on `theta`. Pass the negated gradient to ascend.
pub fn adam_step(state: &mut AdamState, theta: &mut [f64], grad: &[f64], p: &AdamParams) {
    assert_eq!(theta.len(), grad.len(), "gradient length");
    assert_eq!(state.m.len(), grad.len(), "Adam state length");
    state.t += 1;
    let t = state.t as i32;
    let c1 = 1.0 - p.beta1.powi(t);
    let c2 = 1.0 - p.beta2.powi(t);
    for i in 0..theta.len() {
        let g = grad[i];
        state.m[i] = p.beta1 * state.m[i] + (1.0 - p.beta1) * g;
        state.v[i] = p.beta2 * state.v[i] + (1.0 - p.beta2) * g * g;
        let mh = state.m[i] / c1;
        let vh = state.v[i] / c2;
        theta[i] -= p.alpha * mh / (vh.sqrt() + p.eps);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_gradient_only_counts() {
        let mut s = AdamState::new(2);
        let mut th = [0.3, -0.2];
        adam_step(&mut s, &mut th, &[0.0, 0.0], &AdamParams::default());
        assert_eq!(th, [0.3, -0.2]);
        assert_eq!(s.t, 1);
    }

    #[test]
    fn first_step_moves_by_alpha() {
        let p = AdamParams::default();
        let mut s = AdamState::new(3);
        let mut th = [0.0; 3];
        adam_step(&mut s, &mut th, &[2.0, -0.5, 30.0], &p);
        assert!((th[0] + p.alpha).abs() < p.alpha * 1e-6);
        assert!((th[1] - p.alpha).abs() < p.alpha * 1e-6);
        assert!((th[2] + p.alpha).abs() < p.alpha * 1e-6);
    }

    #[test]
    fn toy_quadratic_converges() {
        let p = AdamParams::default();
        let mut s = AdamState::new(1);
        let mut th = [0.0];
        for _ in 0..2000 {
            let g = [2.0 * (th[0] - 2.0)];
            adam_step(&mut s, &mut th, &g, &p);
        }
        assert!((th[0] - 2.0).abs() < 0.05);
    }
}
