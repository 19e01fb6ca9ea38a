//! Ising model over weighted graphs and the signed-graph objects derived
//! from a spin configuration.
//!
//! A coupling matrix `J` and a spin configuration `sigma` induce the signed
//! adjacency matrix
//!
//! ```text
//!   A_ij = J_ij sigma_i sigma_j
//! ```
//!
//! whose positive edges mark satisfied interactions and negative edges mark
//! violated ones. The signed Laplacian `L = D - A` (with signed degrees
//! `d_i = sum_k A_ik` on the diagonal) carries both the energy, through
//! `H(sigma) = -tr(L)/2`, and the stability of the associated oscillator
//! equilibrium, through the Hessian `H = L + 2 diag(mu)`.

use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;
use crate::{Error, Result};

/// Couplings with magnitude below this are treated as "no edge" by the
/// frustration and balance analyses.
pub const EDGE_EPS: f64 = 1e-15;

/// Symmetric weighted adjacency matrix of the Ising network, zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    weights: Matrix,
}

impl CouplingMatrix {
    /// Validate and wrap a dense weight matrix.
    pub fn new(weights: Matrix) -> Result<Self> {
        let n = weights.n();
        for i in 0..n {
            for j in 0..n {
                let w = weights.get(i, j);
                if !w.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "coupling ({i},{j}) is not finite"
                    )));
                }
            }
            if weights.get(i, i) != 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "self-coupling at node {i} must be zero"
                )));
            }
        }
        let dev = weights.symmetry_deviation();
        if dev != 0.0 {
            return Err(Error::NotSymmetric {
                tol: 0.0,
                max_dev: dev,
            });
        }
        Ok(Self { weights })
    }

    /// Build from an undirected edge list; later duplicates are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut weights = Matrix::zeros(n);
        let mut seen = std::collections::HashSet::new();
        for &(i, j, w) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({i},{j}) out of range for n = {n}"
                )));
            }
            if i == j {
                return Err(Error::InvalidArgument(format!("self-loop at node {i}")));
            }
            let key = (i.min(j), i.max(j));
            if !seen.insert(key) {
                return Err(Error::InvalidArgument(format!(
                    "duplicate edge ({},{})",
                    key.0, key.1
                )));
            }
            if !w.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "edge ({i},{j}) has non-finite weight"
                )));
            }
            weights.set(i, j, w);
            weights.set(j, i, w);
        }
        Ok(Self { weights })
    }

    pub fn n(&self) -> usize {
        self.weights.n()
    }

    pub fn weights(&self) -> &Matrix {
        &self.weights
    }

    #[inline(always)]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.weights.get(i, j)
    }

    /// Undirected edges `(i, j, w)` with `i < j` and `|w| > EDGE_EPS`,
    /// in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let n = self.n();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let w = self.get(i, j);
                if w.abs() > EDGE_EPS {
                    edges.push((i, j, w));
                }
            }
        }
        edges
    }

    /// Scale every coupling by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let n = self.n();
        let mut weights = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                weights.set(i, j, c * self.get(i, j));
            }
        }
        Self { weights }
    }
}

/// Spin assignment, one of {-1, +1} per node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpinConfiguration {
    spins: Vec<i8>,
}

impl SpinConfiguration {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        for (i, &s) in spins.iter().enumerate() {
            if s != 1 && s != -1 {
                return Err(Error::InvalidArgument(format!(
                    "spin {i} is {s}, expected -1 or +1"
                )));
            }
        }
        Ok(Self { spins })
    }

    pub fn all_up(n: usize) -> Self {
        Self { spins: vec![1; n] }
    }

    /// Decode from a bitmask: bit `i` set means spin `i` is up.
    pub fn from_mask(n: usize, mask: u32) -> Self {
        let spins = (0..n)
            .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
            .collect();
        Self { spins }
    }

    /// Bitmask encoding, inverse of [`SpinConfiguration::from_mask`].
    pub fn mask(&self) -> u32 {
        self.spins
            .iter()
            .enumerate()
            .fold(0, |m, (i, &s)| if s == 1 { m | 1 << i } else { m })
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    #[inline(always)]
    pub fn spin(&self, i: usize) -> f64 {
        f64::from(self.spins[i])
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    /// Global spin flip, sigma -> -sigma.
    pub fn flipped(&self) -> Self {
        Self {
            spins: self.spins.iter().map(|s| -s).collect(),
        }
    }
}

/// Per-oscillator regularization parameters, all nonnegative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RegularizationVector {
    mu: Vec<f64>,
}

impl RegularizationVector {
    pub fn new(mu: Vec<f64>) -> Result<Self> {
        for (i, &m) in mu.iter().enumerate() {
            if !m.is_finite() || m < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "mu[{i}] = {m} must be finite and nonnegative"
                )));
            }
        }
        Ok(Self { mu })
    }

    pub fn constant(n: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.mu
    }

    #[inline(always)]
    pub fn get(&self, i: usize) -> f64 {
        self.mu[i]
    }

    pub fn sum(&self) -> f64 {
        self.mu.iter().sum()
    }
}

/// Signed adjacency matrix `A(sigma)` of the graph induced by a spin
/// configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedAdjacency {
    entries: Matrix,
}

impl SignedAdjacency {
    pub fn n(&self) -> usize {
        self.entries.n()
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    #[inline(always)]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries.get(i, j)
    }
}

/// Signed Laplacian `L(sigma) = D(sigma) - A(sigma)`. Row sums are zero;
/// unlike the unsigned case it need not be positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedLaplacian {
    entries: Matrix,
}

impl SignedLaplacian {
    pub fn n(&self) -> usize {
        self.entries.n()
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    #[inline(always)]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries.get(i, j)
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }
}

/// Hessian of the oscillator energy at the equilibrium of a spin
/// configuration: `H(sigma, mu) = L(sigma) + 2 diag(mu)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HessianMatrix {
    entries: Matrix,
}

impl HessianMatrix {
    pub fn n(&self) -> usize {
        self.entries.n()
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }
}

fn check_dims(n: usize, m: usize, what: &str) -> Result<()> {
    if n != m {
        return Err(Error::DimensionMismatch(format!(
            "{what}: expected length {n}, got {m}"
        )));
    }
    Ok(())
}

/// Ising Hamiltonian `H(sigma) = -(1/2) sum_ij J_ij sigma_i sigma_j`.
pub fn hamiltonian(j: &CouplingMatrix, sigma: &SpinConfiguration) -> Result<f64> {
    check_dims(j.n(), sigma.len(), "spin configuration")?;
    let n = j.n();
    let mut acc = 0.0;
    // double sum over ordered pairs, as written
    for a in 0..n {
        let sa = sigma.spin(a);
        let row = j.weights().row(a);
        let mut inner = 0.0;
        for b in 0..n {
            inner += row[b] * sigma.spin(b);
        }
        acc += sa * inner;
    }
    Ok(-0.5 * acc)
}

/// Signed adjacency `A_ij = J_ij sigma_i sigma_j`.
pub fn signed_adjacency(j: &CouplingMatrix, sigma: &SpinConfiguration) -> Result<SignedAdjacency> {
    check_dims(j.n(), sigma.len(), "spin configuration")?;
    let n = j.n();
    let mut entries = Matrix::zeros(n);
    for a in 0..n {
        for b in (a + 1)..n {
            let v = j.get(a, b) * sigma.spin(a) * sigma.spin(b);
            entries.set(a, b, v);
            entries.set(b, a, v);
        }
    }
    Ok(SignedAdjacency { entries })
}

/// Signed Laplacian `L = D - A` with signed degrees `d_i = sum_k A_ik`.
pub fn signed_laplacian(a: &SignedAdjacency) -> SignedLaplacian {
    let n = a.n();
    let mut entries = Matrix::zeros(n);
    for i in 0..n {
        let mut degree = 0.0;
        for k in 0..n {
            degree += a.get(i, k);
        }
        for j in 0..n {
            if i != j {
                entries.set(i, j, -a.get(i, j));
            }
        }
        entries.set(i, i, degree);
    }
    SignedLaplacian { entries }
}

/// Hamiltonian recovered from the Laplacian trace, `-(1/2) tr L`.
pub fn hamiltonian_from_trace(l: &SignedLaplacian) -> f64 {
    -0.5 * l.trace()
}

/// Hessian `H(sigma, mu) = L(sigma) + 2 diag(mu)`.
pub fn hessian(l: &SignedLaplacian, mu: &RegularizationVector) -> Result<HessianMatrix> {
    check_dims(l.n(), mu.len(), "regularization vector")?;
    let n = l.n();
    let mut entries = l.entries().clone();
    for i in 0..n {
        entries.add_to(i, i, 2.0 * mu.get(i));
    }
    Ok(HessianMatrix { entries })
}

/// Hessian assembled directly from the couplings:
/// `H_ii = sum_k J_ik sigma_i sigma_k + 2 mu_i`, `H_ij = -J_ij sigma_i sigma_j`.
///
/// Algebraically identical to [`hessian`] composed with the signed-graph
/// construction; kept as an independent route for cross-checking.
pub fn hessian_from_couplings(
    j: &CouplingMatrix,
    sigma: &SpinConfiguration,
    mu: &RegularizationVector,
) -> Result<HessianMatrix> {
    check_dims(j.n(), sigma.len(), "spin configuration")?;
    check_dims(j.n(), mu.len(), "regularization vector")?;
    let n = j.n();
    let mut entries = Matrix::zeros(n);
    for a in 0..n {
        let sa = sigma.spin(a);
        let mut diag = 0.0;
        for b in 0..n {
            let coupling = j.get(a, b) * sa * sigma.spin(b);
            diag += coupling;
            if a != b {
                entries.set(a, b, -coupling);
            }
        }
        entries.set(a, a, diag + 2.0 * mu.get(a));
    }
    Ok(HessianMatrix { entries })
}

/// Number of unordered pairs with a negative signed-adjacency entry.
pub fn negative_edge_count(a: &SignedAdjacency) -> usize {
    let n = a.n();
    let mut count = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let v = a.get(i, j);
            if v < 0.0 && v.abs() > EDGE_EPS {
                count += 1;
            }
        }
    }
    count
}

/// Two-coloring over the sign pattern of a symmetric matrix.
///
/// `same_label_on_positive = true` assigns equal labels across positive
/// entries and opposite labels across negative entries. Returns the label
/// vector (+1/-1 per node, +1 for the BFS root of each component), or
/// `None` if some edge is contradicted.
fn two_color(entries: &Matrix, same_label_on_positive: bool) -> Option<Vec<i8>> {
    let n = entries.n();
    let mut label = vec![0i8; n];
    let mut queue = std::collections::VecDeque::new();
    for root in 0..n {
        if label[root] != 0 {
            continue;
        }
        label[root] = 1;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                let w = entries.get(u, v);
                if v == u || w.abs() <= EDGE_EPS {
                    continue;
                }
                let same = (w > 0.0) == same_label_on_positive;
                let expected = if same { label[u] } else { -label[u] };
                if label[v] == 0 {
                    label[v] = expected;
                    queue.push_back(v);
                } else if label[v] != expected {
                    return None;
                }
            }
        }
    }
    Some(label)
}

/// Frustration test: is there a spin configuration satisfying every edge
/// (`J_ij sigma_i sigma_j > 0` whenever `J_ij != 0`)?
///
/// Two-coloring of the sign pattern of `J`: a ferromagnetic edge forces
/// equal spins, an antiferromagnetic edge opposite ones. Returns a witness
/// configuration when satisfiable.
pub fn is_frustration_free(j: &CouplingMatrix) -> Option<SpinConfiguration> {
    two_color(j.weights(), true).map(|label| SpinConfiguration { spins: label })
}

/// Structural-balance test for a signed graph: can the nodes be split into
/// two sets with positive edges inside and negative edges across?
///
/// Returns the partition `(V1, V2)` when balanced; an all-positive graph
/// yields an empty `V2`.
pub fn is_structurally_balanced(a: &SignedAdjacency) -> Option<(Vec<usize>, Vec<usize>)> {
    two_color(a.entries(), true).map(|label| {
        let v1 = (0..a.n()).filter(|&i| label[i] == 1).collect();
        let v2 = (0..a.n()).filter(|&i| label[i] == -1).collect();
        (v1, v2)
    })
}
