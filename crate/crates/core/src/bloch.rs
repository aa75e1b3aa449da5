//! Generalised Bloch decompositions.
//!
//! An [`OperatorBasis`] on a `d`-dimensional space is the identity followed by `d²−1`
//! traceless Hermitian operators normalised to `Tr(X_i X_j) = d δ_ij`. Every state expands as
//! `ρ = (I + Σ b_i X_i)/d` with `b_i = Tr(ρ X_i)`, so `Tr ρ² = (1 + |b|²)/d`.
//!
//! The adapted basis puts the traceless part of a given state on the first element, which
//! makes that state's Bloch vector a single component. Correlation tensors expand a
//! bipartite state in a product of two local bases.

use serde::Serialize;

use crate::density::DensityMatrix;
use crate::eigen::eig_hermitian;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ZERO};

/// Gram–Schmidt pivots below this (relative to `d`) mean the completion lost rank.
const PIVOT_TOL: f64 = 1e-12;
/// `‖ρ − I/d‖_F` below this is treated as the maximally mixed state.
const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorBasis {
    dim: usize,
    elements: Vec<ComplexMatrix>,
}

impl OperatorBasis {
    /// Wraps raw elements without checking orthogonality; `elements[0]` must be the identity.
    pub fn from_elements(dim: usize, elements: Vec<ComplexMatrix>) -> Result<Self> {
        if elements.len() != dim * dim {
            return Err(Error::structure(format!(
                "a basis on dimension {dim} has {} elements, got {}",
                dim * dim,
                elements.len()
            )));
        }
        if elements.iter().any(|e| e.rows() != dim || e.cols() != dim) {
            return Err(Error::structure(format!(
                "basis elements must be {dim}x{dim}"
            )));
        }
        Ok(Self { dim, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &ComplexMatrix {
        &self.elements[i]
    }

    /// Max-norm of `Tr(X_i X_j) − d δ_ij` over all pairs, identity included.
    pub fn gram_defect(&self) -> f64 {
        let d = self.dim as f64;
        let mut worst = 0.0_f64;
        for (i, a) in self.elements.iter().enumerate() {
            for (j, b) in self.elements.iter().enumerate().skip(i) {
                let target = if i == j { d } else { 0.0 };
                worst = worst.max((a.trace_product(b) - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Largest `|Tr X_i|` and hermiticity defect over the non-identity elements.
    pub fn traceless_hermitian_defect(&self) -> f64 {
        self.elements[1..]
            .iter()
            .map(|x| x.trace().norm().max(x.hermiticity_defect()))
            .fold(0.0, f64::max)
    }

    /// Real coefficients `Tr(A X_i)` for `i ≥ 1`.
    pub fn coefficients(&self, a: &ComplexMatrix) -> Vec<f64> {
        self.elements[1..]
            .iter()
            .map(|x| a.trace_product(x).re)
            .collect()
    }

    /// `(I + Σ b_i X_i)/d`.
    pub fn reconstruct(&self, components: &[f64]) -> ComplexMatrix {
        let d = self.dim;
        let mut m = ComplexMatrix::identity(d);
        for (b, x) in components.iter().zip(&self.elements[1..]) {
            m = &m + &x.scale(*b);
        }
        m.scale(1.0 / d as f64)
    }
}

/// Standard generalised Gell-Mann matrices scaled by `√(d/2)` so that `Tr X² = d`.
///
/// Ordering: identity, then the symmetric family `(j,k)` for `j < k`, the antisymmetric
/// family in the same order, then the diagonal family `l = 1..d−1`. For `d = 2` this is
/// `(I, σx, σy, σz)`.
pub fn gellmann_basis(d: usize) -> Result<OperatorBasis> {
    if d < 2 {
        return Err(Error::parameter(format!(
            "operator basis needs d >= 2, got {d}"
        )));
    }
    let scale = (d as f64 / 2.0).sqrt();
    let mut elements = vec![ComplexMatrix::identity(d)];
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = ComplexMatrix::zeros(d, d);
            m[(j, k)] = C64::new(scale, 0.0);
            m[(k, j)] = C64::new(scale, 0.0);
            elements.push(m);
        }
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = ComplexMatrix::zeros(d, d);
            m[(j, k)] = C64::new(0.0, -scale);
            m[(k, j)] = C64::new(0.0, scale);
            elements.push(m);
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt() * scale;
        let diag: Vec<f64> = (0..d)
            .map(|i| match i.cmp(&l) {
                std::cmp::Ordering::Less => norm,
                std::cmp::Ordering::Equal => -(l as f64) * norm,
                std::cmp::Ordering::Greater => 0.0,
            })
            .collect();
        elements.push(ComplexMatrix::from_diagonal(&diag));
    }
    OperatorBasis::from_elements(d, elements)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlochVector {
    pub dim: usize,
    pub components: Vec<f64>,
}

impl BlochVector {
    pub fn norm_squared(&self) -> f64 {
        self.components.iter().map(|b| b * b).sum()
    }
}

pub fn bloch_vector(rho: &DensityMatrix, basis: &OperatorBasis) -> Result<BlochVector> {
    if rho.dim() != basis.dim() {
        return Err(Error::structure(format!(
            "state of dimension {} against a basis of dimension {}",
            rho.dim(),
            basis.dim()
        )));
    }
    Ok(BlochVector {
        dim: basis.dim(),
        components: basis.coefficients(rho.matrix()),
    })
}

/// `Tr ρ² = (1 + |b|²)/d`.
pub fn purity_from_bloch(b: &BlochVector) -> f64 {
    (1.0 + b.norm_squared()) / b.dim as f64
}

/// Basis whose first traceless element is `(ρ − I/d)` scaled positively to `Tr X_1² = d`,
/// completed by Gram–Schmidt over the standard Gell-Mann elements with the one most
/// overlapping `X_1` dropped. A maximally mixed input returns the standard basis.
pub fn adapted_basis(rho: &DensityMatrix) -> Result<OperatorBasis> {
    let d = rho.dim();
    let standard = gellmann_basis(d)?;
    let traceless = rho.matrix() - &ComplexMatrix::identity(d).scale(1.0 / d as f64);
    let norm = traceless.frobenius_norm();
    if norm < DEGENERATE_TOL {
        return Ok(standard);
    }
    let first = traceless.hermitian_part().scale((d as f64).sqrt() / norm);

    let overlaps: Vec<f64> = standard.elements()[1..]
        .iter()
        .map(|g| g.trace_product(&first).re.abs())
        .collect();
    let drop = overlaps
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i + 1)
        .expect("d >= 2 has traceless elements");

    let mut elements = vec![ComplexMatrix::identity(d), first];
    for (i, g) in standard.elements().iter().enumerate().skip(1) {
        if i == drop {
            continue;
        }
        let mut v = g.clone();
        // two passes of modified Gram–Schmidt in the real inner product Tr(AB)
        for _ in 0..2 {
            for e in &elements[1..] {
                let c = e.trace_product(&v).re / d as f64;
                v = &v - &e.scale(c);
            }
        }
        let n2 = v.trace_product(&v).re;
        if n2 < PIVOT_TOL * d as f64 {
            return Err(Error::numerical(format!(
                "adapted basis completion lost rank at element {i}"
            )));
        }
        elements.push(v.hermitian_part().scale((d as f64 / n2).sqrt()));
    }
    OperatorBasis::from_elements(d, elements)
}

/// Expansion blocks of a bipartite state in the product basis `{X_i ⊗ Y_j}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationTensor {
    pub d_a: usize,
    pub d_b: usize,
    /// `⟨X_i ⊗ I⟩`, `i = 1..d_A²−1`.
    pub local_a: Vec<f64>,
    /// `⟨I ⊗ Y_j⟩`, `j = 1..d_B²−1`.
    pub local_b: Vec<f64>,
    /// `⟨X_i ⊗ Y_j⟩`, row-major over `(i, j)`.
    pub joint: Vec<f64>,
}

impl CorrelationTensor {
    pub fn joint_at(&self, i: usize, j: usize) -> f64 {
        self.joint[(i - 1) * (self.d_b * self.d_b - 1) + (j - 1)]
    }

    /// Entrywise q-norms `(‖C_A‖_q, ‖C_B‖_q, ‖C_AB‖_q)`.
    pub fn qnorms(&self, q: f64) -> Result<(f64, f64, f64)> {
        tensor_qnorms(self, q)
    }

    /// Rebuilds `ρ_AB = (I + Σ b_i0 X_i⊗I + Σ b_0j I⊗Y_j + Σ b_ij X_i⊗Y_j)/(d_A d_B)`.
    pub fn reconstruct(&self, basis_a: &OperatorBasis, basis_b: &OperatorBasis) -> ComplexMatrix {
        let (da, db) = (self.d_a, self.d_b);
        let ia = ComplexMatrix::identity(da);
        let ib = ComplexMatrix::identity(db);
        let mut m = ComplexMatrix::identity(da * db);
        for (i, x) in basis_a.elements()[1..].iter().enumerate() {
            m = &m + &x.kron(&ib).scale(self.local_a[i]);
        }
        for (j, y) in basis_b.elements()[1..].iter().enumerate() {
            m = &m + &ia.kron(y).scale(self.local_b[j]);
        }
        let nb = db * db - 1;
        for (i, x) in basis_a.elements()[1..].iter().enumerate() {
            for (j, y) in basis_b.elements()[1..].iter().enumerate() {
                m = &m + &x.kron(y).scale(self.joint[i * nb + j]);
            }
        }
        m.scale(1.0 / (da * db) as f64)
    }
}

pub fn correlation_tensor(
    rho_ab: &DensityMatrix,
    basis_a: &OperatorBasis,
    basis_b: &OperatorBasis,
) -> Result<CorrelationTensor> {
    let (da, db) = (basis_a.dim(), basis_b.dim());
    if rho_ab.dims() != [da, db] {
        return Err(Error::structure(format!(
            "state with dims {:?} against bases of dimension {da} and {db}",
            rho_ab.dims()
        )));
    }
    let rho = rho_ab.matrix();
    // M_j = Tr_B[ρ (I ⊗ Y_j)], then ⟨X_i ⊗ Y_j⟩ = Tr(M_j X_i)
    let reduced: Vec<ComplexMatrix> = basis_b
        .elements()
        .iter()
        .map(|y| {
            let mut m = ComplexMatrix::zeros(da, da);
            for a in 0..da {
                for a2 in 0..da {
                    let mut acc = ZERO;
                    for b in 0..db {
                        for b2 in 0..db {
                            let yv = y[(b2, b)];
                            if yv != ZERO {
                                acc += rho[(a * db + b, a2 * db + b2)] * yv;
                            }
                        }
                    }
                    m[(a, a2)] = acc;
                }
            }
            m
        })
        .collect();

    let local_a = basis_a.coefficients(&reduced[0]);
    let local_b = reduced[1..].iter().map(|m| m.trace().re).collect();
    let nb = db * db - 1;
    let mut joint = vec![0.0; (da * da - 1) * nb];
    for (j, m) in reduced[1..].iter().enumerate() {
        for (i, x) in basis_a.elements()[1..].iter().enumerate() {
            joint[i * nb + j] = m.trace_product(x).re;
        }
    }
    Ok(CorrelationTensor {
        d_a: da,
        d_b: db,
        local_a,
        local_b,
        joint,
    })
}

fn qnorm(v: &[f64], q: f64) -> f64 {
    v.iter().map(|x| x.abs().powf(q)).sum::<f64>().powf(1.0 / q)
}

pub fn tensor_qnorms(c: &CorrelationTensor, q: f64) -> Result<(f64, f64, f64)> {
    if !q.is_finite() || q < 1.0 {
        return Err(Error::parameter(format!(
            "tensor q-norm needs q >= 1, got {q}"
        )));
    }
    Ok((
        qnorm(&c.local_a, q),
        qnorm(&c.local_b, q),
        qnorm(&c.joint, q),
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum OperatorBoundVerdict {
    Pass,
    /// Element `index` has `√(d−1)·I ± X` with this most negative eigenvalue.
    Fail {
        index: usize,
        min_eigenvalue: f64,
    },
}

/// Checks `√(d−1)·I ± X_i ⪰ 0` (within `−1e−10`) for every traceless element.
pub fn check_operator_bound(basis: &OperatorBasis) -> Result<OperatorBoundVerdict> {
    let radius = ((basis.dim() - 1) as f64).sqrt();
    for (i, x) in basis.elements().iter().enumerate().skip(1) {
        let eigs = eig_hermitian(x)?.eigenvalues;
        let lo = eigs[0];
        let hi = eigs[eigs.len() - 1];
        let min_eigenvalue = (radius + lo).min(radius - hi);
        if min_eigenvalue < -1e-10 {
            return Ok(OperatorBoundVerdict::Fail {
                index: i,
                min_eigenvalue,
            });
        }
    }
    Ok(OperatorBoundVerdict::Pass)
}

/// `ρ ⊗ σ` expectation check: for products `⟨X_i⊗Y_j⟩ = ⟨X_i⟩⟨Y_j⟩`.
pub fn product_defect(c: &CorrelationTensor) -> f64 {
    let nb = c.d_b * c.d_b - 1;
    let mut worst = 0.0_f64;
    for (i, a) in c.local_a.iter().enumerate() {
        for (j, b) in c.local_b.iter().enumerate() {
            worst = worst.max((c.joint[i * nb + j] - a * b).abs());
        }
    }
    worst
}
