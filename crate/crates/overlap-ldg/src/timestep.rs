//! Explicit method-of-lines integration with third-order SSP Runge-Kutta.

use thiserror::Error;

/// Time-step rule; both variants set `dt = c * dx_min^2`, they only differ
/// in intent (`FixedFactor` is the accuracy setting used by convergence
/// studies, `Cfl` is the stability setting scanned by the CFL harness).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepRule {
    FixedFactor(f64),
    Cfl(f64),
}

impl StepRule {
    pub fn factor(&self) -> f64 {
        match *self {
            StepRule::FixedFactor(c) | StepRule::Cfl(c) => c,
        }
    }

    pub fn dt(&self, dx_min: f64) -> f64 {
        self.factor() * dx_min * dx_min
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimeConfig {
    pub t_final: f64,
    pub rule: StepRule,
    pub max_steps: usize,
    /// A run is flagged as blown up once any coefficient exceeds this
    /// magnitude or stops being finite.
    pub blowup_threshold: f64,
    /// Record the auxiliary-variable energy per step (one extra solve).
    pub record_aux_energy: bool,
}

impl TimeConfig {
    pub fn new(t_final: f64, rule: StepRule) -> Self {
        assert!(t_final > 0.0, "final time must be positive");
        assert!(rule.factor() > 0.0, "step factor must be positive");
        Self {
            t_final,
            rule,
            max_steps: 10_000_000,
            blowup_threshold: 1e10,
            record_aux_energy: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupInfo {
    /// First step after which the threshold was exceeded (1-based).
    pub step: usize,
    pub time: f64,
}

/// Per-step diagnostics of one integration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    /// Completed RK steps (including a final blown-up one, if any).
    pub steps: usize,
    /// Times of the recorded samples, `steps + 1` entries starting at 0.
    pub times: Vec<f64>,
    /// Discrete energy `||u_h||^2` at each sample.
    pub energy: Vec<f64>,
    /// `||p_h||^2` (plus `||q_h||^2` in 2D) at each sample, when recorded.
    pub aux_energy: Option<Vec<f64>>,
    pub blowup: Option<BlowupInfo>,
}

impl RunTrace {
    /// First sample index whose energy exceeds the initial energy, a
    /// certificate of time-integration instability for this dissipative
    /// scheme. The blow-up flag implies growth but not vice versa.
    pub fn first_energy_growth(&self) -> Option<usize> {
        let e0 = self.energy[0];
        self.energy
            .iter()
            .position(|&e| !(e <= e0 * (1.0 + 1e-12)))
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub coeffs: Vec<f64>,
    pub trace: RunTrace,
}

#[derive(Debug, Error)]
pub enum TimeError {
    #[error("maximum step count {max} reached at t = {t}")]
    MaxStepsExceeded {
        max: usize,
        t: f64,
        partial: Box<RunOutcome>,
    },
}

/// The semi-discrete operator `du/dt = L(u)` together with the discrete
/// norms used for monitoring.
pub trait SpatialOperator {
    fn n_dof(&self) -> usize;
    fn apply(&self, u: &[f64], dudt: &mut [f64]);
    /// Squared L2 norm of the primary variable.
    fn norm_sq(&self, u: &[f64]) -> f64;
    /// Squared L2 norm of the auxiliary variable(s) solved from `u`.
    fn aux_norm_sq(&self, u: &[f64]) -> f64;
    /// Smallest primitive cell extent (sets the time step).
    fn min_cell_len(&self) -> f64;
}

/// One step of the Shu-Osher three-stage SSP-RK3 scheme:
///
/// ```text
/// u1    = u + dt L(u)
/// u2    = 3/4 u + 1/4 (u1 + dt L(u1))
/// u_new = 1/3 u + 2/3 (u2 + dt L(u2))
/// ```
pub fn ssp_rk3_step(u: &mut [f64], dt: f64, mut rhs: impl FnMut(&[f64], &mut [f64])) {
    let n = u.len();
    let mut l = vec![0.0; n];
    let mut u1 = vec![0.0; n];

    rhs(u, &mut l);
    for i in 0..n {
        u1[i] = u[i] + dt * l[i];
    }

    rhs(&u1, &mut l);
    let mut u2 = vec![0.0; n];
    for i in 0..n {
        u2[i] = 0.75 * u[i] + 0.25 * (u1[i] + dt * l[i]);
    }

    rhs(&u2, &mut l);
    for i in 0..n {
        u[i] = u[i] / 3.0 + 2.0 / 3.0 * (u2[i] + dt * l[i]);
    }
}

/// Integrate `u0` to `t_final` with per-step energy and blow-up monitoring.
///
/// The final step is clipped to land exactly on `t_final`. Blow-up halts
/// the integration and is reported in the trace, not as an error; running
/// out of steps is an error carrying the partial outcome.
pub fn integrate<Op: SpatialOperator + ?Sized>(
    op: &Op,
    u0: &[f64],
    tc: &TimeConfig,
) -> Result<RunOutcome, TimeError> {
    assert_eq!(u0.len(), op.n_dof());
    let dt0 = tc.rule.dt(op.min_cell_len());
    let mut u = u0.to_vec();
    let mut t = 0.0;
    let mut times = vec![0.0];
    let mut energy = vec![op.norm_sq(&u)];
    let mut aux = tc.record_aux_energy.then(|| vec![op.aux_norm_sq(&u)]);
    let mut steps = 0;
    let mut blowup = None;

    while t < tc.t_final {
        if steps >= tc.max_steps {
            let trace = RunTrace {
                steps,
                times,
                energy,
                aux_energy: aux,
                blowup,
            };
            return Err(TimeError::MaxStepsExceeded {
                max: tc.max_steps,
                t,
                partial: Box::new(RunOutcome { coeffs: u, trace }),
            });
        }
        let remaining = tc.t_final - t;
        let (dt, last) = if remaining <= dt0 * (1.0 + 1e-12) {
            (remaining, true)
        } else {
            (dt0, false)
        };
        ssp_rk3_step(&mut u, dt, |v, out| op.apply(v, out));
        steps += 1;
        t = if last { tc.t_final } else { t + dt };
        times.push(t);
        energy.push(op.norm_sq(&u));
        if let Some(a) = aux.as_mut() {
            a.push(op.aux_norm_sq(&u));
        }
        let worst = u.iter().fold(0.0_f64, |acc, &c| acc.max(c.abs()));
        if !worst.is_finite() || worst > tc.blowup_threshold {
            blowup = Some(BlowupInfo { step: steps, time: t });
            break;
        }
    }

    let trace = RunTrace {
        steps,
        times,
        energy,
        aux_energy: aux,
        blowup,
    };
    Ok(RunOutcome { coeffs: u, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    struct ScalarDecay;

    impl SpatialOperator for ScalarDecay {
        fn n_dof(&self) -> usize {
            1
        }
        fn apply(&self, u: &[f64], dudt: &mut [f64]) {
            dudt[0] = -u[0];
        }
        fn norm_sq(&self, u: &[f64]) -> f64 {
            u[0] * u[0]
        }
        fn aux_norm_sq(&self, _u: &[f64]) -> f64 {
            0.0
        }
        fn min_cell_len(&self) -> f64 {
            1.0
        }
    }

    #[test]
    fn zero_rhs_is_identity() {
        let mut u = vec![1.0, -2.0, 0.5];
        ssp_rk3_step(&mut u, 0.37, |_, out| out.fill(0.0));
        assert_eq!(u, vec![1.0, -2.0, 0.5]);
    }

    #[test]
    fn scalar_step_matches_hand_expanded_polynomial() {
        // For u' = -u the three stages compose to
        // u (1 - dt + dt^2/2 - dt^3/6).
        for &dt in &[0.5, 0.1, 0.013] {
            let mut u = vec![1.7];
            ssp_rk3_step(&mut u, dt, |v, out| out[0] = -v[0]);
            let expected = 1.7 * (1.0 - dt + dt * dt / 2.0 - dt * dt * dt / 6.0);
            assert!((u[0] - expected).abs() < 1e-14, "dt={dt}: {}", u[0]);
        }
    }

    #[test]
    fn temporal_order_is_three() {
        // Richardson refinement on u' = -u over [0, 1].
        let exact = (-1.0_f64).exp();
        let mut errors = Vec::new();
        let steps_list = [20usize, 40, 80];
        for &steps in &steps_list {
            let dt = 1.0 / steps as f64;
            let mut u = vec![1.0];
            for _ in 0..steps {
                ssp_rk3_step(&mut u, dt, |v, out| out[0] = -v[0]);
            }
            errors.push((u[0] - exact).abs());
        }
        for w in errors.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!((order - 3.0).abs() < 0.05, "order {order}");
        }
    }

    #[test]
    fn integrate_clips_final_step() {
        let tc = TimeConfig::new(1.0, StepRule::FixedFactor(0.3));
        let out = integrate(&ScalarDecay, &[1.0], &tc).unwrap();
        assert_eq!(*out.trace.times.last().unwrap(), 1.0);
        assert_eq!(out.trace.energy.len(), out.trace.steps + 1);
        assert!((out.coeffs[0] - (-1.0_f64).exp()).abs() < 1e-4);
        assert!(out.trace.blowup.is_none());
        assert_eq!(out.trace.first_energy_growth(), None);
    }

    #[test]
    fn integrate_detects_blowup() {
        struct Growth;
        impl SpatialOperator for Growth {
            fn n_dof(&self) -> usize {
                1
            }
            fn apply(&self, u: &[f64], dudt: &mut [f64]) {
                dudt[0] = 40.0 * u[0];
            }
            fn norm_sq(&self, u: &[f64]) -> f64 {
                u[0] * u[0]
            }
            fn aux_norm_sq(&self, _: &[f64]) -> f64 {
                0.0
            }
            fn min_cell_len(&self) -> f64 {
                1.0
            }
        }
        let mut tc = TimeConfig::new(100.0, StepRule::FixedFactor(1.0));
        tc.blowup_threshold = 1e6;
        let out = integrate(&Growth, &[1.0], &tc).unwrap();
        let info = out.trace.blowup.expect("must flag blow-up");
        assert!(info.step > 0 && info.step == out.trace.steps);
        assert_eq!(out.trace.first_energy_growth(), Some(1));
    }

    #[test]
    fn integrate_reports_max_steps_with_partial_trace() {
        let mut tc = TimeConfig::new(1.0, StepRule::FixedFactor(1e-4));
        tc.max_steps = 10;
        match integrate(&ScalarDecay, &[1.0], &tc) {
            Err(TimeError::MaxStepsExceeded { max, partial, .. }) => {
                assert_eq!(max, 10);
                assert_eq!(partial.trace.steps, 10);
                assert_eq!(partial.trace.energy.len(), 11);
            }
            other => panic!("expected MaxStepsExceeded, got {other:?}"),
        }
    }
}
