//! Exhaustive ground truth for small instances.
//!
//! Enumerates all `2^n` spin configurations (Gray-code order, so each step
//! flips one spin and the energy is updated incrementally), computes the
//! regularization threshold `mu*`, and verifies the frustration-free
//! stability guarantees against brute force.
//!
//! `mu*` is the exact homogeneous threshold at which suboptimal
//! equilibria stop being certifiably unstable: with `H = L + 2 diag(mu)`,
//! a suboptimal configuration keeps `lambda_min(H) < 0` exactly when every
//! `mu_i` stays below `-lambda_min(L)/2`, minimized over suboptimal
//! configurations.

use rand::Rng;

use crate::ising::{
    hamiltonian, hessian, is_frustration_free, signed_adjacency, signed_laplacian, CouplingMatrix,
    RegularizationVector, SpinConfiguration,
};
use crate::spectral::lambda_min;
use crate::{Error, Result};

/// Cap on exhaustive enumeration.
pub const ENUMERATION_CAP: usize = 24;

/// Relative tolerance used to separate global minimizers from suboptimal
/// configurations in the enumerated energy table.
const ENERGY_GROUP_TOL: f64 = 1e-9;

/// Exact energies of every spin configuration of a small instance.
#[derive(Debug, Clone)]
pub struct EnumerationReport {
    pub n: usize,
    /// Energy per configuration, indexed by bitmask (bit `i` set means
    /// spin `i` up); both sigma and -sigma are listed.
    pub energies: Vec<f64>,
    pub global_minimum: f64,
    pub minimizers: Vec<SpinConfiguration>,
}

impl EnumerationReport {
    pub fn is_minimizer(&self, sigma: &SpinConfiguration) -> bool {
        self.energies[sigma.mask() as usize] == self.global_minimum
    }
}

fn check_cap(n: usize) -> Result<()> {
    if n > ENUMERATION_CAP {
        return Err(Error::TooLarge {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    Ok(())
}

/// Exhaustively enumerate all `2^n` configurations.
///
/// Accumulated energies carry O(2^n * eps) float drift, so minimizer
/// identification re-evaluates candidate configurations directly.
pub fn enumerate(j: &CouplingMatrix) -> Result<EnumerationReport> {
    let n = j.n();
    check_cap(n)?;
    let total: usize = 1 << n;

    let mut energies = vec![0.0; total];
    // start at mask 0 = all spins down
    let mut sigma = vec![-1.0f64; n];
    // local fields f_i = sum_j J_ij sigma_j
    let mut field = vec![0.0f64; n];
    for i in 0..n {
        for k in 0..n {
            field[i] += j.get(i, k) * sigma[k];
        }
    }
    let mut energy = {
        let mut acc = 0.0;
        for i in 0..n {
            acc += sigma[i] * field[i];
        }
        -0.5 * acc
    };
    energies[0] = energy;

    let mut gray_prev = 0usize;
    for step in 1..total {
        let gray = step ^ (step >> 1);
        let flipped = (gray ^ gray_prev).trailing_zeros() as usize;
        gray_prev = gray;
        // flipping spin k changes the energy by 2 sigma_k f_k
        energy += 2.0 * sigma[flipped] * field[flipped];
        sigma[flipped] = -sigma[flipped];
        let delta = 2.0 * sigma[flipped];
        for i in 0..n {
            field[i] += delta * j.get(i, flipped);
        }
        // gray-code mask: bit i of `gray` tracks whether spin i is up
        energies[mask_of_walk(gray)] = energy;
    }

    let rough_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = ENERGY_GROUP_TOL * rough_min.abs().max(1.0);
    let candidates: Vec<usize> = (0..total)
        .filter(|&m| energies[m] <= rough_min + tol)
        .collect();
    let mut exact_min = f64::INFINITY;
    let mut exact: Vec<(usize, f64)> = Vec::with_capacity(candidates.len());
    for &m in &candidates {
        let s = SpinConfiguration::from_mask(n, m as u32);
        let e = hamiltonian(j, &s)?;
        exact_min = exact_min.min(e);
        exact.push((m, e));
    }
    let mut minimizers = Vec::new();
    for (m, e) in exact {
        if e == exact_min {
            energies[m] = e;
            minimizers.push(SpinConfiguration::from_mask(n, m as u32));
        }
    }

    Ok(EnumerationReport {
        n,
        energies,
        global_minimum: exact_min,
        minimizers,
    })
}

// With our walk the configuration after `step` flips is exactly the Gray
// code of `step` interpreted as an up-spin mask starting from all-down.
#[inline(always)]
fn mask_of_walk(gray: usize) -> usize {
    gray
}

/// Homogeneous regularization threshold
/// `mu* = min { -lambda_min(L(sigma)) / 2 : sigma suboptimal }`.
///
/// Below this value every suboptimal configuration of a frustration-free
/// network has an unstable equilibrium. The Laplacian is invariant under a
/// global spin flip, so only half the configurations are solved.
pub fn mu_star(j: &CouplingMatrix) -> Result<f64> {
    let report = enumerate(j)?;
    mu_star_with_report(j, &report)
}

/// [`mu_star`] reusing an existing enumeration of the same instance.
pub fn mu_star_with_report(j: &CouplingMatrix, report: &EnumerationReport) -> Result<f64> {
    let n = j.n();
    let tol = ENERGY_GROUP_TOL * report.global_minimum.abs().max(1.0);
    let mut worst = f64::INFINITY;
    let mut found_suboptimal = false;
    // bit n-1 fixed to 0: sigma and -sigma share a Laplacian
    let half: usize = 1 << (n - 1).min(63);
    for mask in 0..half.max(1) {
        if report.energies[mask] <= report.global_minimum + tol {
            continue;
        }
        found_suboptimal = true;
        let sigma = SpinConfiguration::from_mask(n, mask as u32);
        let l = signed_laplacian(&signed_adjacency(j, &sigma)?);
        worst = worst.min(-lambda_min(l.entries())?);
    }
    if !found_suboptimal {
        return Err(Error::NoSuboptimal);
    }
    Ok(worst / 2.0)
}

/// Outcome of the suboptimal-instability check.
#[derive(Debug, Clone, PartialEq)]
pub enum SuboptimalCheck {
    /// Probe satisfied `0 < mu_i < mu*`; lists violating configurations
    /// (expected empty).
    Checked { violations: Vec<SpinConfiguration> },
    /// Probe had some `mu_i >= mu*` (or zero), so the bound's premise does
    /// not hold and the check is skipped.
    NotApplicable,
}

/// Brute-force verification of the frustration-free stability guarantees.
#[derive(Debug, Clone)]
pub struct Theorem1Report {
    pub mu_star: f64,
    /// Minimizers that failed to be stable under the probe or one of the
    /// random positive regularization vectors (expected empty).
    pub minimizer_violations: Vec<SpinConfiguration>,
    pub suboptimal_check: SuboptimalCheck,
    pub pass: bool,
}

const THEOREM1_CAP: usize = 16;
const RANDOM_MU_PROBES: usize = 10;

/// Check, by exhaustive enumeration, that on a frustration-free instance
/// (a) every global minimizer is stable for the probe and for
/// [`RANDOM_MU_PROBES`] random positive regularization vectors, and
/// (b) when the probe satisfies `0 < mu_i < mu*` for all `i`, every
/// suboptimal configuration is unstable.
pub fn verify_theorem1(
    j: &CouplingMatrix,
    mu_probe: &RegularizationVector,
    seed: u64,
) -> Result<Theorem1Report> {
    if j.n() > THEOREM1_CAP {
        return Err(Error::TooLarge {
            n: j.n(),
            cap: THEOREM1_CAP,
        });
    }
    if is_frustration_free(j).is_none() {
        return Err(Error::Frustrated);
    }
    if mu_probe.len() != j.n() {
        return Err(Error::DimensionMismatch(format!(
            "n = {}, |mu| = {}",
            j.n(),
            mu_probe.len()
        )));
    }
    let n = j.n();
    let report = enumerate(j)?;
    let threshold = mu_star_with_report(j, &report)?;

    let mut probes = vec![mu_probe.clone()];
    let mut rng = crate::rng::stream_rng(seed, 0);
    for _ in 0..RANDOM_MU_PROBES {
        probes.push(
            RegularizationVector::new((0..n).map(|_| rng.gen_range(0.05..5.0)).collect())
                .expect("positive entries"),
        );
    }

    let mut minimizer_violations = Vec::new();
    for sigma in &report.minimizers {
        let l = signed_laplacian(&signed_adjacency(j, sigma)?);
        for mu in &probes {
            let h = hessian(&l, mu)?;
            if lambda_min(h.entries())? <= 0.0 {
                minimizer_violations.push(sigma.clone());
                break;
            }
        }
    }

    let probe_applicable = mu_probe
        .as_slice()
        .iter()
        .all(|&m| m > 0.0 && m < threshold);
    let suboptimal_check = if probe_applicable {
        let tol = ENERGY_GROUP_TOL * report.global_minimum.abs().max(1.0);
        let mut violations = Vec::new();
        for mask in 0..(1usize << n) {
            if report.energies[mask] <= report.global_minimum + tol {
                continue;
            }
            let sigma = SpinConfiguration::from_mask(n, mask as u32);
            let l = signed_laplacian(&signed_adjacency(j, &sigma)?);
            let h = hessian(&l, mu_probe)?;
            if lambda_min(h.entries())? >= 0.0 {
                violations.push(sigma);
            }
        }
        SuboptimalCheck::Checked { violations }
    } else {
        SuboptimalCheck::NotApplicable
    };

    let pass = minimizer_violations.is_empty()
        && match &suboptimal_check {
            SuboptimalCheck::Checked { violations } => violations.is_empty(),
            SuboptimalCheck::NotApplicable => true,
        };
    Ok(Theorem1Report {
        mu_star: threshold,
        minimizer_violations,
        suboptimal_check,
        pass,
    })
}
