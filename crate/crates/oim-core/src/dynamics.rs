//! Gradient-flow dynamics of the oscillator network.
//!
//! The phase vector evolves by
//!
//! ```text
//!   dtheta_i/dt = sum_j J_ij sin(theta_j - theta_i) - mu_i sin(2 theta_i)
//! ```
//!
//! which is the (negated) gradient of the energy landscape
//!
//! ```text
//!   E(theta; mu) = -(1/2) sum_ij J_ij cos(theta_i - theta_j)
//!                  + sum_i mu_i sin(theta_i)^2.
//! ```
//!
//! Every spin configuration corresponds to the equilibrium with
//! `theta_i = 0` for up spins and `theta_i = pi` for down spins, where the
//! landscape energy coincides with the Ising Hamiltonian. Trajectories are
//! integrated with fixed-step classical Runge-Kutta and endpoints are
//! classified as binary (near `{0, pi}` per phase) or non-binary.
//! Non-binary equilibria are only detected and counted, never analyzed.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rayon::prelude::*;

use crate::ising::{hamiltonian, CouplingMatrix, RegularizationVector, SpinConfiguration};
use crate::rng::stream_rng;
use crate::{Error, Result};

/// Default tolerance when rounding phases to spins.
pub const DEFAULT_ROUNDING_TOL: f64 = 0.1;

/// Oscillator phases, each kept in `[0, 2*pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseState {
    theta: Vec<f64>,
}

fn wrap_phase(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    // rem_euclid can return exactly TAU when t is a tiny negative number
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl PhaseState {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        for (i, &t) in theta.iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "phase {i} is not finite"
                )));
            }
        }
        Ok(Self {
            theta: theta.into_iter().map(wrap_phase).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }
}

/// Fixed-step integrator settings.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegrationConfig {
    pub step_size: f64,
    pub max_time: f64,
    pub convergence_tol: f64,
    pub record_energy: bool,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            step_size: 0.01,
            max_time: 500.0,
            convergence_tol: 1e-6,
            record_energy: false,
        }
    }
}

impl IntegrationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return Err(Error::InvalidArgument("step_size must be positive".into()));
        }
        if !(self.max_time >= self.step_size && self.max_time.is_finite()) {
            return Err(Error::InvalidArgument(
                "max_time must be at least one step".into(),
            ));
        }
        if !(self.convergence_tol > 0.0 && self.convergence_tol.is_finite()) {
            return Err(Error::InvalidArgument(
                "convergence_tol must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Endpoint of one integration.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryResult {
    pub final_state: PhaseState,
    pub converged: bool,
    /// Present only if converged and every phase rounds to `{0, pi}`.
    pub classified_spin: Option<SpinConfiguration>,
    /// max_i |dtheta_i/dt| at termination.
    pub residual: f64,
    pub energy_trace: Option<Vec<(f64, f64)>>,
    pub steps_taken: usize,
}

fn check_dims(j: &CouplingMatrix, mu: &RegularizationVector, theta: &PhaseState) -> Result<()> {
    if j.n() != mu.len() || j.n() != theta.len() {
        return Err(Error::DimensionMismatch(format!(
            "n = {}, |mu| = {}, |theta| = {}",
            j.n(),
            mu.len(),
            theta.len()
        )));
    }
    Ok(())
}

fn rhs_into(j: &CouplingMatrix, mu: &RegularizationVector, theta: &[f64], out: &mut [f64]) {
    let n = theta.len();
    for i in 0..n {
        let ti = theta[i];
        let row = j.weights().row(i);
        let mut acc = 0.0;
        for k in 0..n {
            let w = row[k];
            if w != 0.0 {
                acc += w * (theta[k] - ti).sin();
            }
        }
        out[i] = acc - mu.get(i) * (2.0 * ti).sin();
    }
}

/// Right-hand side of the oscillator dynamics at `theta`.
pub fn rhs(j: &CouplingMatrix, mu: &RegularizationVector, theta: &PhaseState) -> Result<Vec<f64>> {
    check_dims(j, mu, theta)?;
    let mut out = vec![0.0; theta.len()];
    rhs_into(j, mu, theta.theta(), &mut out);
    Ok(out)
}

/// Landscape energy `E(theta; mu)`.
pub fn energy(j: &CouplingMatrix, mu: &RegularizationVector, theta: &PhaseState) -> Result<f64> {
    check_dims(j, mu, theta)?;
    let n = theta.len();
    let t = theta.theta();
    let mut coupling = 0.0;
    for i in 0..n {
        let row = j.weights().row(i);
        for k in 0..n {
            let w = row[k];
            if w != 0.0 {
                coupling += w * (t[i] - t[k]).cos();
            }
        }
    }
    let mut injection = 0.0;
    for i in 0..n {
        let s = t[i].sin();
        injection += mu.get(i) * s * s;
    }
    Ok(-0.5 * coupling + injection)
}

/// Gradient of the energy; equals the negated [`rhs`].
pub fn grad_energy(
    j: &CouplingMatrix,
    mu: &RegularizationVector,
    theta: &PhaseState,
) -> Result<Vec<f64>> {
    let mut g = rhs(j, mu, theta)?;
    for v in &mut g {
        *v = -*v;
    }
    Ok(g)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |a, &x| a.max(x.abs()))
}

/// Integrate the gradient flow from `theta0` with classical fixed-step RK4.
///
/// Terminates as converged when `max_i |dtheta_i/dt|` falls below the
/// configured tolerance, or unconverged once `max_time` is reached.
pub fn integrate(
    j: &CouplingMatrix,
    mu: &RegularizationVector,
    theta0: &PhaseState,
    cfg: &IntegrationConfig,
) -> Result<TrajectoryResult> {
    check_dims(j, mu, theta0)?;
    cfg.validate()?;
    let n = theta0.len();
    let h = cfg.step_size;
    let max_steps = (cfg.max_time / h).floor() as usize;

    let mut state: Vec<f64> = theta0.theta().to_vec();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];

    let mut trace = if cfg.record_energy {
        let state_ps = PhaseState {
            theta: state.clone(),
        };
        Some(vec![(0.0, energy(j, mu, &state_ps)?)])
    } else {
        None
    };

    let mut steps = 0usize;
    let (converged, residual) = loop {
        rhs_into(j, mu, &state, &mut k1);
        let residual = max_abs(&k1);
        if residual < cfg.convergence_tol {
            break (true, residual);
        }
        if steps >= max_steps {
            break (false, residual);
        }

        for i in 0..n {
            tmp[i] = state[i] + 0.5 * h * k1[i];
        }
        rhs_into(j, mu, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = state[i] + 0.5 * h * k2[i];
        }
        rhs_into(j, mu, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = state[i] + h * k3[i];
        }
        rhs_into(j, mu, &tmp, &mut k4);
        for i in 0..n {
            state[i] = wrap_phase(
                state[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]),
            );
            if !state[i].is_finite() {
                return Err(Error::Numerical(format!(
                    "integration diverged at step {steps}"
                )));
            }
        }
        steps += 1;

        if let Some(tr) = trace.as_mut() {
            let state_ps = PhaseState {
                theta: state.clone(),
            };
            tr.push((steps as f64 * h, energy(j, mu, &state_ps)?));
        }
    };

    let final_state = PhaseState { theta: state };
    let classified_spin = if converged {
        classify_equilibrium(&final_state, DEFAULT_ROUNDING_TOL)
    } else {
        None
    };
    Ok(TrajectoryResult {
        final_state,
        converged,
        classified_spin,
        residual,
        energy_trace: trace,
        steps_taken: steps,
    })
}

/// Map phases to spins: within `rounding_tol` of 0 (mod 2*pi) reads +1,
/// within `rounding_tol` of pi reads -1. Returns `None` when any phase is
/// near neither, i.e. the state is a non-binary endpoint.
///
/// `rounding_tol` must lie in `(0, pi/4)` so the two targets never overlap.
pub fn classify_equilibrium(theta: &PhaseState, rounding_tol: f64) -> Option<SpinConfiguration> {
    assert!(
        rounding_tol > 0.0 && rounding_tol < PI / 4.0,
        "rounding tolerance must lie in (0, pi/4)"
    );
    let mut spins = Vec::with_capacity(theta.len());
    for &t in theta.theta() {
        let dist_zero = t.min(TAU - t);
        let dist_pi = (t - PI).abs();
        if dist_zero <= rounding_tol {
            spins.push(1);
        } else if dist_pi <= rounding_tol {
            spins.push(-1);
        } else {
            return None;
        }
    }
    Some(SpinConfiguration::new(spins).expect("spins are +-1 by construction"))
}

/// Equilibrium phases of a spin configuration: up maps to 0, down to pi.
pub fn spin_to_phase(sigma: &SpinConfiguration) -> PhaseState {
    PhaseState {
        theta: sigma
            .spins()
            .iter()
            .map(|&s| if s == 1 { 0.0 } else { PI })
            .collect(),
    }
}

/// How one multi-start trial ended.
#[derive(Debug, Clone, PartialEq)]
pub enum Endpoint {
    /// Converged to a binary equilibrium with the given Ising energy.
    Spin {
        sigma: SpinConfiguration,
        hamiltonian: f64,
    },
    /// Converged, but some phase is away from `{0, pi}`.
    NonBinary { landscape_energy: f64 },
    /// Hit `max_time` before the residual dropped below tolerance.
    NonConverged,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub endpoint: Endpoint,
    pub steps_taken: usize,
    pub residual: f64,
}

/// Outcome of a multi-start solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome {
    /// Converged binary endpoint with the lowest Hamiltonian, if any trial
    /// produced one.
    pub best: Option<(SpinConfiguration, f64)>,
    pub trials: Vec<TrialRecord>,
    pub non_binary: usize,
    pub non_converged: usize,
}

/// Multi-start heuristic: integrate from `trials` uniform-random initial
/// phase vectors and keep the best binary endpoint by Ising energy.
///
/// Trial `t` draws its initial state from the `(seed, t)` random stream,
/// so results are identical for any rayon worker count, and ties are
/// broken toward the lowest trial index.
pub fn solve(
    j: &CouplingMatrix,
    mu: &RegularizationVector,
    trials: usize,
    seed: u64,
    cfg: &IntegrationConfig,
) -> Result<SolveOutcome> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if j.n() != mu.len() {
        return Err(Error::DimensionMismatch(format!(
            "n = {}, |mu| = {}",
            j.n(),
            mu.len()
        )));
    }
    cfg.validate()?;
    let n = j.n();

    let records: Vec<Result<TrialRecord>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = stream_rng(seed, trial as u64);
            let theta0 = PhaseState {
                theta: (0..n).map(|_| rng.gen::<f64>() * TAU).collect(),
            };
            let result = integrate(j, mu, &theta0, cfg)?;
            let endpoint = if !result.converged {
                Endpoint::NonConverged
            } else if let Some(sigma) = result.classified_spin {
                let h = hamiltonian(j, &sigma)?;
                Endpoint::Spin {
                    sigma,
                    hamiltonian: h,
                }
            } else {
                Endpoint::NonBinary {
                    landscape_energy: energy(j, mu, &result.final_state)?,
                }
            };
            Ok(TrialRecord {
                trial,
                endpoint,
                steps_taken: result.steps_taken,
                residual: result.residual,
            })
        })
        .collect();

    let mut trials_out = Vec::with_capacity(trials);
    for r in records {
        trials_out.push(r?);
    }

    let mut best: Option<(SpinConfiguration, f64)> = None;
    let mut non_binary = 0;
    let mut non_converged = 0;
    for rec in &trials_out {
        match &rec.endpoint {
            Endpoint::Spin { sigma, hamiltonian } => {
                if best.as_ref().map_or(true, |(_, e)| hamiltonian < e) {
                    best = Some((sigma.clone(), *hamiltonian));
                }
            }
            Endpoint::NonBinary { .. } => non_binary += 1,
            Endpoint::NonConverged => non_converged += 1,
        }
    }
    Ok(SolveOutcome {
        best,
        trials: trials_out,
        non_binary,
        non_converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ising::{hessian, signed_adjacency, signed_laplacian};
    use crate::spectral::lambda_min;

    fn triangle() -> CouplingMatrix {
        CouplingMatrix::from_edges(3, &[(0, 1, -1.0), (0, 2, -1.0), (1, 2, -1.0)]).unwrap()
    }

    fn pair() -> CouplingMatrix {
        CouplingMatrix::from_edges(2, &[(0, 1, -1.0)]).unwrap()
    }

    fn random_instance(seed: u64, n: usize) -> (CouplingMatrix, RegularizationVector) {
        let mut rng = stream_rng(seed, 0);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen_bool(0.7) {
                    edges.push((i, j, rng.gen_range(-1.5..1.5)));
                }
            }
        }
        let j = CouplingMatrix::from_edges(n, &edges).unwrap();
        let mu =
            RegularizationVector::new((0..n).map(|_| rng.gen_range(0.0..2.0)).collect()).unwrap();
        (j, mu)
    }

    fn random_state(rng: &mut impl Rng, n: usize) -> PhaseState {
        PhaseState::new((0..n).map(|_| rng.gen::<f64>() * TAU).collect()).unwrap()
    }

    #[test]
    fn rhs_vanishes_at_spin_equilibria() {
        let (j, mu) = random_instance(3, 8);
        for mask in 0..256u32 {
            let sigma = SpinConfiguration::from_mask(8, mask);
            let f = rhs(&j, &mu, &spin_to_phase(&sigma)).unwrap();
            assert!(max_abs(&f) < 1e-12);
        }
    }

    #[test]
    fn rhs_two_node_fixture() {
        let j = pair();
        let mu = RegularizationVector::constant(2, 0.0).unwrap();
        let theta = PhaseState::new(vec![0.0, std::f64::consts::FRAC_PI_2]).unwrap();
        let f = rhs(&j, &mu, &theta).unwrap();
        assert!((f[0] - (-1.0)).abs() < 1e-15);
        assert!((f[1] - 1.0).abs() < 1e-15);
        let g = grad_energy(&j, &mu, &theta).unwrap();
        assert!((g[0] - 1.0).abs() < 1e-15);
        assert!((g[1] - (-1.0)).abs() < 1e-15);
    }

    #[test]
    fn energy_fixture_and_spin_value() {
        let j = triangle();
        let mu = RegularizationVector::constant(3, 1.0).unwrap();
        let theta =
            PhaseState::new(vec![PI / 2.0, PI / 2.0, PI / 2.0]).unwrap();
        assert!((energy(&j, &mu, &theta).unwrap() - 6.0).abs() < 1e-12);

        for mask in 0..8u32 {
            let sigma = SpinConfiguration::from_mask(3, mask);
            let e = energy(&j, &mu, &spin_to_phase(&sigma)).unwrap();
            let h = hamiltonian(&j, &sigma).unwrap();
            assert!((e - h).abs() < 1e-12);
        }

        let empty = CouplingMatrix::from_edges(4, &[]).unwrap();
        let zero_mu = RegularizationVector::constant(4, 0.0).unwrap();
        let mut rng = stream_rng(11, 0);
        let state = random_state(&mut rng, 4);
        assert_eq!(energy(&empty, &zero_mu, &state).unwrap(), 0.0);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let fd_step = 1e-5;
        let mut rng = stream_rng(17, 0);
        for seed in 0..5 {
            let (j, mu) = random_instance(100 + seed, 6);
            for _ in 0..20 {
                let theta = random_state(&mut rng, 6);
                let f = rhs(&j, &mu, &theta).unwrap();
                for i in 0..6 {
                    let mut plus = theta.theta().to_vec();
                    let mut minus = plus.clone();
                    plus[i] += fd_step;
                    minus[i] -= fd_step;
                    let ep = energy(&j, &mu, &PhaseState::new(plus).unwrap()).unwrap();
                    let em = energy(&j, &mu, &PhaseState::new(minus).unwrap()).unwrap();
                    let fd = (ep - em) / (2.0 * fd_step);
                    assert!(
                        (f[i] + fd).abs() < 1e-6,
                        "component {i}: rhs {} vs -fd {}",
                        f[i],
                        -fd
                    );
                }
            }
        }
    }

    #[test]
    fn integrate_from_equilibrium_returns_immediately() {
        let (j, mu) = random_instance(5, 6);
        let sigma = SpinConfiguration::from_mask(6, 0b101100);
        let r = integrate(&j, &mu, &spin_to_phase(&sigma), &IntegrationConfig::default()).unwrap();
        assert!(r.converged);
        assert_eq!(r.steps_taken, 0);
        assert_eq!(r.classified_spin.unwrap(), sigma);
    }

    #[test]
    fn integrate_two_node_pair_finds_ground_state() {
        let j = pair();
        let mu = RegularizationVector::constant(2, 1.0).unwrap();
        let theta0 = PhaseState::new(vec![0.3, 2.9]).unwrap();
        let r = integrate(&j, &mu, &theta0, &IntegrationConfig::default()).unwrap();
        assert!(r.converged);
        let sigma = r.classified_spin.unwrap();
        assert!(sigma.spins() == [1, -1] || sigma.spins() == [-1, 1]);
        assert_eq!(hamiltonian(&j, &sigma).unwrap(), -1.0);
        // the endpoint must be a stable equilibrium
        let l = signed_laplacian(&signed_adjacency(&j, &sigma).unwrap());
        let h = hessian(&l, &mu).unwrap();
        assert!(lambda_min(h.entries()).unwrap() > 0.0);
    }

    #[test]
    fn integrate_triangle_with_large_mu_stabilizes_suboptimal_state() {
        let j = triangle();
        let mu = RegularizationVector::constant(3, 10.0).unwrap();
        let theta0 = PhaseState::new(vec![0.05, -0.03, 0.08]).unwrap();
        let r = integrate(&j, &mu, &theta0, &IntegrationConfig::default()).unwrap();
        assert!(r.converged);
        let sigma = r.classified_spin.unwrap();
        assert_eq!(sigma.spins(), &[1, 1, 1]);
        assert_eq!(hamiltonian(&j, &sigma).unwrap(), 3.0);
    }

    #[test]
    fn recorded_energy_is_non_increasing() {
        let (j, mu) = random_instance(23, 8);
        let cfg = IntegrationConfig {
            record_energy: true,
            ..Default::default()
        };
        let mut rng = stream_rng(29, 0);
        for _ in 0..3 {
            let r = integrate(&j, &mu, &random_state(&mut rng, 8), &cfg).unwrap();
            let trace = r.energy_trace.unwrap();
            assert!(trace.len() > 1);
            for w in trace.windows(2) {
                assert!(w[1].1 <= w[0].1 + 1e-9, "{} -> {}", w[0].1, w[1].1);
            }
        }
    }

    #[test]
    fn classify_fixtures() {
        let s = classify_equilibrium(&PhaseState::new(vec![0.0, PI, 0.0]).unwrap(), 0.1).unwrap();
        assert_eq!(s.spins(), &[1, -1, 1]);
        let s =
            classify_equilibrium(&PhaseState::new(vec![0.05, PI - 0.05]).unwrap(), 0.1).unwrap();
        assert_eq!(s.spins(), &[1, -1]);
        assert!(classify_equilibrium(
            &PhaseState::new(vec![PI / 2.0, 0.0]).unwrap(),
            0.1
        )
        .is_none());
        // wrap-around side of zero
        let s = classify_equilibrium(&PhaseState::new(vec![TAU - 0.05]).unwrap(), 0.1).unwrap();
        assert_eq!(s.spins(), &[1]);
    }

    #[test]
    #[should_panic(expected = "rounding tolerance")]
    fn classify_rejects_out_of_range_tolerance() {
        classify_equilibrium(&PhaseState::new(vec![0.0]).unwrap(), 1.0);
    }

    #[test]
    fn spin_phase_round_trip_exhaustive() {
        for n in 1..=10usize {
            for mask in 0..(1u32 << n) {
                let sigma = SpinConfiguration::from_mask(n, mask);
                let round =
                    classify_equilibrium(&spin_to_phase(&sigma), DEFAULT_ROUNDING_TOL).unwrap();
                assert_eq!(round, sigma);
            }
        }
    }

    #[test]
    fn solve_two_node_pair() {
        let j = pair();
        let mu = RegularizationVector::constant(2, 1.0).unwrap();
        let out = solve(&j, &mu, 10, 99, &IntegrationConfig::default()).unwrap();
        let (_, e) = out.best.unwrap();
        assert_eq!(e, -1.0);
    }

    #[test]
    fn solve_is_deterministic() {
        let (j, mu) = random_instance(31, 6);
        let a = solve(&j, &mu, 4, 123, &IntegrationConfig::default()).unwrap();
        let b = solve(&j, &mu, 4, 123, &IntegrationConfig::default()).unwrap();
        assert_eq!(a, b);
        let c = solve(&j, &mu, 4, 124, &IntegrationConfig::default()).unwrap();
        assert_ne!(a.trials, c.trials);
    }

    #[test]
    fn stability_consistency_under_perturbation() {
        // stable case: two-node pair at mu = 1, ground state
        let j = pair();
        let mu = RegularizationVector::constant(2, 1.0).unwrap();
        let sigma = SpinConfiguration::new(vec![1, -1]).unwrap();
        let l = signed_laplacian(&signed_adjacency(&j, &sigma).unwrap());
        let h = hessian(&l, &mu).unwrap();
        assert!(lambda_min(h.entries()).unwrap() > 1e-6);
        let mut rng = stream_rng(41, 0);
        for _ in 0..5 {
            let mut theta = spin_to_phase(&sigma).theta().to_vec();
            for t in &mut theta {
                *t += rng.gen_range(-1e-3..1e-3);
            }
            let r = integrate(
                &j,
                &mu,
                &PhaseState::new(theta).unwrap(),
                &IntegrationConfig::default(),
            )
            .unwrap();
            assert_eq!(r.classified_spin.unwrap(), sigma);
        }

        // unstable case: triangle minimizer at small mu escapes for at
        // least one of 20 perturbations
        let j = triangle();
        let mu = RegularizationVector::constant(3, 0.1).unwrap();
        let sigma = SpinConfiguration::new(vec![1, 1, -1]).unwrap();
        let l = signed_laplacian(&signed_adjacency(&j, &sigma).unwrap());
        let h = hessian(&l, &mu).unwrap();
        assert!(lambda_min(h.entries()).unwrap() < -1e-6);
        let mut escaped = 0;
        for _ in 0..20 {
            let mut theta = spin_to_phase(&sigma).theta().to_vec();
            for t in &mut theta {
                *t += rng.gen_range(-1e-3..1e-3);
            }
            let r = integrate(
                &j,
                &mu,
                &PhaseState::new(theta).unwrap(),
                &IntegrationConfig::default(),
            )
            .unwrap();
            if r.classified_spin.as_ref() != Some(&sigma) {
                escaped += 1;
            }
        }
        assert!(escaped >= 1);
    }
}
