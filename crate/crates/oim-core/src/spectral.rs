//! Eigenvalues of dense symmetric matrices and equilibrium stability
//! verdicts.
//!
//! Two independent solvers are provided:
//!
//! * cyclic Jacobi rotations with eigenvector accumulation — backs
//!   [`eigenvalues_symmetric`], which reports a verified residual bound;
//! * Householder tridiagonalization followed by implicit-shift QL —
//!   [`sym_eigenvalues`], a values-only path roughly 20x faster at N = 50,
//!   used by the ensemble statistics where ~10^5 spectra are needed.
//!
//! The two routes are required to agree to 1e-9; see the crate tests.

use serde::{Deserialize, Serialize};

use crate::ising::HessianMatrix;
use crate::matrix::Matrix;
use crate::{Error, Result};

/// Entrywise symmetry tolerance on solver inputs.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Half-width of the band around zero classified as marginal.
pub const STABILITY_TOL: f64 = 1e-9;

/// Residual bound a reported spectrum must satisfy.
pub const SPECTRUM_RESIDUAL_TOL: f64 = 1e-8;

/// Full spectrum of a symmetric matrix with a verified accuracy bound.
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    residual_bound: f64,
}

impl Spectrum {
    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn lambda_min(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// max over eigenpairs of |M v - lambda v|_inf / max(1, |lambda|).
    pub fn residual_bound(&self) -> f64 {
        self.residual_bound
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Unstable,
    Marginal,
}

/// Stability of the equilibrium associated with a spin configuration,
/// decided by the sign of the smallest Hessian eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityVerdict {
    pub stability: Stability,
    pub lambda_min: f64,
}

fn check_input(m: &Matrix) -> Result<()> {
    if m.n() == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    m.check_symmetric(SYMMETRY_TOL)
}

/// Eigenvalues and eigenvectors by cyclic Jacobi rotations.
///
/// Sweeps run until the off-diagonal Frobenius norm falls below
/// 1e-12 times the Frobenius norm of the matrix. Returns eigenvalues in
/// ascending order; column `k` of the returned matrix is the eigenvector
/// for eigenvalue `k`.
pub fn jacobi_eigen(m: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    check_input(m)?;
    let n = m.n();
    let mut a = m.clone();
    let mut v = Matrix::identity(n);
    let mut d: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    let frob: f64 = a.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = 1e-12 * frob;

    const MAX_SWEEPS: usize = 100;
    for sweep in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.get(p, q) * a.get(p, q);
            }
        }
        let off = (2.0 * off).sqrt();
        if off <= target || off == 0.0 {
            let mut pairs: Vec<(f64, usize)> =
                d.iter().copied().enumerate().map(|(i, x)| (x, i)).collect();
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            let values: Vec<f64> = pairs.iter().map(|&(x, _)| x).collect();
            let mut vectors = Matrix::zeros(n);
            for (col, &(_, src)) in pairs.iter().enumerate() {
                for row in 0..n {
                    vectors.set(row, col, v.get(row, src));
                }
            }
            return Ok((values, vectors));
        }

        // During the first sweeps, rotate only on entries above a
        // decreasing threshold (Numerical Recipes 11.1).
        let thresh = if sweep < 3 {
            0.2 * off * off / ((n * n) as f64)
        } else {
            0.0
        };

        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let g = 100.0 * apq.abs();
                // after a few sweeps, zero out entries that are negligible
                // relative to both diagonal neighbours
                if sweep > 3 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    a.set(p, q, 0.0);
                    continue;
                }
                if apq.abs() * apq.abs() <= thresh {
                    continue;
                }
                let h = d[q] - d[p];
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let mut t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        t = -t;
                    }
                    t
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;
                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                a.set(p, q, 0.0);
                for j in 0..p {
                    let g = a.get(j, p);
                    let h = a.get(j, q);
                    a.set(j, p, g - s * (h + g * tau));
                    a.set(j, q, h + s * (g - h * tau));
                }
                for j in (p + 1)..q {
                    let g = a.get(p, j);
                    let h = a.get(j, q);
                    a.set(p, j, g - s * (h + g * tau));
                    a.set(j, q, h + s * (g - h * tau));
                }
                for j in (q + 1)..n {
                    let g = a.get(p, j);
                    let h = a.get(q, j);
                    a.set(p, j, g - s * (h + g * tau));
                    a.set(q, j, h + s * (g - h * tau));
                }
                for j in 0..n {
                    let g = v.get(j, p);
                    let h = v.get(j, q);
                    v.set(j, p, g - s * (h + g * tau));
                    v.set(j, q, h + s * (g - h * tau));
                }
            }
        }
        for p in 0..n {
            b[p] += z[p];
            d[p] = b[p];
            z[p] = 0.0;
        }
    }
    Err(Error::Numerical(
        "Jacobi eigensolver failed to converge".into(),
    ))
}

/// Householder reduction of a symmetric matrix to tridiagonal form,
/// values-only variant. Returns (diagonal, subdiagonal) with the
/// subdiagonal in `e[1..n]`.
fn tridiagonalize(m: &Matrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.n();
    let mut a = m.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];

    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let mut scale = 0.0;
            for k in 0..=l {
                scale += a.get(i, k).abs();
            }
            if scale == 0.0 {
                e[i] = a.get(i, l);
            } else {
                for k in 0..=l {
                    let v = a.get(i, k) / scale;
                    a.set(i, k, v);
                    h += v * v;
                }
                let f = a.get(i, l);
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a.set(i, l, f - g);
                let mut f_acc = 0.0;
                for j in 0..=l {
                    let mut g_acc = 0.0;
                    for k in 0..=j {
                        g_acc += a.get(j, k) * a.get(i, k);
                    }
                    for k in (j + 1)..=l {
                        g_acc += a.get(k, j) * a.get(i, k);
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * a.get(i, j);
                }
                let hh = f_acc / (h + h);
                for j in 0..=l {
                    let f = a.get(i, j);
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        let v = a.get(j, k) - (f * e[k] + g * a.get(i, k));
                        a.set(j, k, v);
                    }
                }
            }
        } else {
            e[i] = a.get(i, l);
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = a.get(i, i);
    }
    e[0] = 0.0;
    (d, e)
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix.
/// `d` holds the diagonal, `e[1..n]` the subdiagonal; on success `d`
/// contains the (unsorted) eigenvalues.
fn ql_implicit(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    // shift subdiagonal down for convenient indexing
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() + dd == dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::Numerical(
                    "QL eigensolver failed to converge".into(),
                ));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            let mut underflow = false;
            while i > l {
                let idx = i - 1;
                let f = s * e[idx];
                let b = c * e[idx];
                r = f.hypot(g);
                e[i] = r;
                if r == 0.0 {
                    d[i] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i] - p;
                r = (d[idx] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i] = g + p;
                g = c * r - b;
                i -= 1;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Full real spectrum in ascending order via tridiagonalization plus
/// implicit QL. Values-only fast path; agrees with [`jacobi_eigen`] to
/// better than 1e-9.
pub fn sym_eigenvalues(m: &Matrix) -> Result<Vec<f64>> {
    check_input(m)?;
    let (mut d, mut e) = tridiagonalize(m);
    ql_implicit(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Full spectrum with eigenvector residual verification.
///
/// Accepts only spectra whose worst relative eigenpair residual is below
/// [`SPECTRUM_RESIDUAL_TOL`] and whose eigenvalue sum reproduces the trace.
pub fn eigenvalues_symmetric(m: &Matrix) -> Result<Spectrum> {
    let (values, vectors) = jacobi_eigen(m)?;
    let n = m.n();
    let mut residual_bound: f64 = 0.0;
    for (k, &lambda) in values.iter().enumerate() {
        let col: Vec<f64> = (0..n).map(|i| vectors.get(i, k)).collect();
        let mv = m.mul_vec(&col);
        let mut worst: f64 = 0.0;
        for i in 0..n {
            worst = worst.max((mv[i] - lambda * col[i]).abs());
        }
        residual_bound = residual_bound.max(worst / lambda.abs().max(1.0));
    }
    if residual_bound > SPECTRUM_RESIDUAL_TOL {
        return Err(Error::Numerical(format!(
            "eigenpair residual {residual_bound:e} exceeds {SPECTRUM_RESIDUAL_TOL:e}"
        )));
    }
    let trace = m.trace();
    let sum: f64 = values.iter().sum();
    if (sum - trace).abs() > 1e-8 * trace.abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "eigenvalue sum {sum} does not reproduce trace {trace}"
        )));
    }
    Ok(Spectrum {
        eigenvalues: values,
        residual_bound,
    })
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn lambda_min(m: &Matrix) -> Result<f64> {
    Ok(sym_eigenvalues(m)?[0])
}

/// Stability of the equilibrium whose Hessian is `h`.
pub fn classify_stability(h: &HessianMatrix) -> Result<StabilityVerdict> {
    let lam = lambda_min(h.entries())?;
    let stability = if lam > STABILITY_TOL {
        Stability::Stable
    } else if lam < -STABILITY_TOL {
        Stability::Unstable
    } else {
        Stability::Marginal
    };
    Ok(StabilityVerdict {
        stability,
        lambda_min: lam,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{x} vs {y} (tol {tol:e})");
        }
    }

    #[test]
    fn diagonal_matrix_spectrum() {
        let m = Matrix::from_rows(3, &[3.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0]).unwrap();
        let spec = eigenvalues_symmetric(&m).unwrap();
        assert_close(spec.eigenvalues(), &[1.0, 2.0, 3.0], 1e-12);
        assert_close(&sym_eigenvalues(&m).unwrap(), &[1.0, 2.0, 3.0], 1e-12);
    }

    #[test]
    fn triangle_laplacian_fixtures() {
        // L for the antiferromagnetic triangle at a mixed configuration
        let mixed =
            Matrix::from_rows(3, &[0.0, 1.0, -1.0, 1.0, 0.0, -1.0, -1.0, -1.0, 2.0]).unwrap();
        assert_close(&sym_eigenvalues(&mixed).unwrap(), &[-1.0, 0.0, 3.0], 1e-10);
        // and at the all-up configuration: ones(3) - 3I
        let all_up =
            Matrix::from_rows(3, &[-2.0, 1.0, 1.0, 1.0, -2.0, 1.0, 1.0, 1.0, -2.0]).unwrap();
        assert_close(&sym_eigenvalues(&all_up).unwrap(), &[-3.0, -3.0, 0.0], 1e-10);
    }

    #[test]
    fn lambda_min_of_identity() {
        assert_eq!(lambda_min(&Matrix::identity(4)).unwrap(), 1.0);
    }

    #[test]
    fn asymmetric_input_rejected() {
        let mut m = Matrix::zeros(2);
        m.set(0, 1, 1.0);
        assert!(sym_eigenvalues(&m).is_err());
        assert!(jacobi_eigen(&m).is_err());
    }

    #[test]
    fn ql_handles_one_by_one() {
        let m = Matrix::from_rows(1, &[5.0]).unwrap();
        assert_eq!(sym_eigenvalues(&m).unwrap(), vec![5.0]);
    }
}
