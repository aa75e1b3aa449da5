//! Density matrices on tensor-product spaces: validation, purities and entropies,
//! partial traces, tensor products and purification.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::eigen::{eig_hermitian, eig_hermitian_part};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, ZERO};

/// Acceptance thresholds for density-matrix validation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub herm: f64,
    pub trace: f64,
    pub psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-10,
            trace: 1e-10,
            psd: 1e-10,
        }
    }
}

/// Outcome of [`validate_density`]. A rejected report carries every defect, not just the first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub tolerances: Tolerances,
    pub accepted: bool,
}

impl ValidationReport {
    pub fn rejections(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.hermiticity_defect > self.tolerances.herm {
            out.push(format!("hermiticity defect {:e}", self.hermiticity_defect));
        }
        if self.trace_defect > self.tolerances.trace {
            out.push(format!("trace defect {:e}", self.trace_defect));
        }
        if self.min_eigenvalue < -self.tolerances.psd {
            out.push(format!("min eigenvalue {:e}", self.min_eigenvalue));
        }
        out
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.accepted {
            write!(f, "accepted")
        } else {
            write!(f, "rejected: {}", self.rejections().join(", "))
        }
    }
}

fn check_layout(rows: usize, cols: usize, dims: &[usize]) -> Result<usize> {
    if rows != cols {
        return Err(Error::structure(format!(
            "density matrix must be square, got {rows}x{cols}"
        )));
    }
    if dims.is_empty() {
        return Err(Error::structure("no subsystem dimensions given"));
    }
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::structure(format!(
            "subsystem dimension {d} is below 2"
        )));
    }
    let d: usize = dims.iter().product();
    if d != rows {
        return Err(Error::structure(format!(
            "dims {dims:?} multiply to {d}, matrix is {rows}x{rows}"
        )));
    }
    Ok(d)
}

/// Checks hermiticity, unit trace and positivity. Structural mismatches are errors; tolerance
/// violations produce a rejected report.
pub fn validate_density(
    m: &ComplexMatrix,
    dims: &[usize],
    tol: &Tolerances,
) -> Result<ValidationReport> {
    check_layout(m.rows(), m.cols(), dims)?;
    let hermiticity_defect = m.hermiticity_defect();
    let trace = m.trace();
    let trace_defect = (trace - C64::new(1.0, 0.0)).norm();
    let min_eigenvalue = eig_hermitian_part(m)?.eigenvalues[0];
    let accepted =
        hermiticity_defect <= tol.herm && trace_defect <= tol.trace && min_eigenvalue >= -tol.psd;
    Ok(ValidationReport {
        hermiticity_defect,
        trace_defect,
        min_eigenvalue,
        tolerances: *tol,
        accepted,
    })
}

/// A validated state on `dims[0] ⊗ dims[1] ⊗ ...`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, dims: &[usize]) -> Result<Self> {
        Self::with_tolerances(matrix, dims, &Tolerances::default())
    }

    pub fn with_tolerances(
        matrix: ComplexMatrix,
        dims: &[usize],
        tol: &Tolerances,
    ) -> Result<Self> {
        let report = validate_density(&matrix, dims, tol)?;
        if !report.accepted {
            return Err(Error::InvalidState(report));
        }
        Ok(Self {
            dims: dims.to_vec(),
            matrix,
        })
    }

    /// Skips the eigenvalue check for matrices that are valid by construction.
    pub(crate) fn from_parts_unchecked(matrix: ComplexMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(matrix.rows(), dims.iter().product::<usize>());
        Self { dims, matrix }
    }

    pub fn maximally_mixed(dims: &[usize]) -> Result<Self> {
        let d = check_layout(dims.iter().product(), dims.iter().product(), dims)?;
        Ok(Self::from_parts_unchecked(
            ComplexMatrix::identity(d).scale(1.0 / d as f64),
            dims.to_vec(),
        ))
    }

    /// `|ψ><ψ|` for a unit vector; the norm must be 1 within 1e-10.
    pub fn from_pure(psi: &[C64], dims: &[usize]) -> Result<Self> {
        check_layout(psi.len(), psi.len(), dims)?;
        let norm = crate::matrix::vector_norm(psi);
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::parameter(format!("state vector has norm {norm}")));
        }
        Ok(Self::from_parts_unchecked(
            ComplexMatrix::outer(psi),
            dims.to_vec(),
        ))
    }

    /// The computational basis projector `|k><k|`.
    pub fn basis_state(k: usize, dims: &[usize]) -> Result<Self> {
        let d: usize = dims.iter().product();
        if k >= d {
            return Err(Error::parameter(format!(
                "basis index {k} >= dimension {d}"
            )));
        }
        let mut psi = vec![ZERO; d];
        psi[k] = C64::new(1.0, 0.0);
        Self::from_pure(&psi, dims)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `Σ|ρ_ij|²`, which equals `Tr ρ²` for Hermitian `ρ`.
    pub fn purity(&self) -> f64 {
        self.matrix.data().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `S_L(ρ) = 1 − Tr ρ²`.
    pub fn linear_entropy(&self) -> f64 {
        1.0 - self.purity()
    }

    /// Rényi 2-entropy (collision entropy) in bits.
    pub fn renyi2_entropy(&self) -> f64 {
        -self.purity().log2()
    }

    /// Largest possible linear entropy, `1 − 1/d`.
    pub fn max_linear_entropy(&self) -> f64 {
        1.0 - 1.0 / self.dim() as f64
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eig_hermitian(&self.matrix)?.eigenvalues)
    }

    /// Schatten q-norm `(Σ λ_i^q)^{1/q}`. Eigenvalues in `[−psd_tol, 0)` are clamped to zero.
    pub fn schatten_norm(&self, q: f64) -> Result<f64> {
        self.schatten_norm_with(q, Tolerances::default().psd)
    }

    pub fn schatten_norm_with(&self, q: f64, psd_tol: f64) -> Result<f64> {
        if !q.is_finite() || q < 1.0 {
            return Err(Error::parameter(format!(
                "Schatten norm needs q >= 1, got {q}"
            )));
        }
        let eigs = self.eigenvalues()?;
        let mut sum = 0.0;
        for l in eigs {
            if l < -psd_tol {
                return Err(Error::numerical(format!(
                    "eigenvalue {l:e} below the positivity tolerance"
                )));
            }
            sum += l.max(0.0).powf(q);
        }
        Ok(sum.powf(1.0 / q))
    }

    /// Reduced state on the subsystems in `keep` (ordered as in the original layout).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::structure(
                "partial trace needs at least one kept subsystem",
            ));
        }
        let n = self.dims.len();
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if kept.len() != keep.len() {
            return Err(Error::structure(format!("repeated subsystem in {keep:?}")));
        }
        if let Some(&bad) = kept.iter().find(|&&k| k >= n) {
            return Err(Error::structure(format!(
                "subsystem {bad} does not exist ({n} subsystems)"
            )));
        }
        if kept.len() == n {
            return Ok(self.clone());
        }
        let traced: Vec<usize> = (0..n).filter(|i| !kept.contains(i)).collect();
        let d_keep: usize = kept.iter().map(|&i| self.dims[i]).product();
        let d_trace: usize = traced.iter().map(|&i| self.dims[i]).product();

        // strides of each subsystem in the full row index
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        let offset = |group: &[usize], mut idx: usize| -> usize {
            let mut full = 0;
            for &s in group.iter().rev() {
                full += (idx % self.dims[s]) * strides[s];
                idx /= self.dims[s];
            }
            full
        };
        let keep_off: Vec<usize> = (0..d_keep).map(|k| offset(&kept, k)).collect();
        let trace_off: Vec<usize> = (0..d_trace).map(|t| offset(&traced, t)).collect();

        let mut out = ComplexMatrix::zeros(d_keep, d_keep);
        for (k1, &r) in keep_off.iter().enumerate() {
            for (k2, &c) in keep_off.iter().enumerate() {
                out[(k1, k2)] = trace_off.iter().map(|&t| self.matrix[(r + t, c + t)]).sum();
            }
        }
        let dims = kept.iter().map(|&i| self.dims[i]).collect();
        Ok(Self::from_parts_unchecked(out, dims))
    }

    /// `ρ ⊗ σ`, with the subsystem lists concatenated.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::from_parts_unchecked(self.matrix.kron(&other.matrix), dims)
    }

    /// Convex combination `w·self + (1−w)·other`.
    pub fn mix(&self, other: &DensityMatrix, w: f64) -> Result<DensityMatrix> {
        if self.dims != other.dims {
            return Err(Error::structure(format!(
                "cannot mix states with dims {:?} and {:?}",
                self.dims, other.dims
            )));
        }
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::parameter(format!(
                "mixing weight {w} outside [0, 1]"
            )));
        }
        let m = &self.matrix.scale(w) + &other.matrix.scale(1.0 - w);
        Ok(Self::from_parts_unchecked(m, self.dims.clone()))
    }

    /// Reinterprets the same matrix with a different factorisation of its dimension.
    pub fn with_dims(&self, dims: &[usize]) -> Result<DensityMatrix> {
        check_layout(self.dim(), self.dim(), dims)?;
        Ok(Self::from_parts_unchecked(
            self.matrix.clone(),
            dims.to_vec(),
        ))
    }

    /// Purification `|φ> = Σ √λ_i |v_i>⊗|i>` on `d·d`, system first and ancilla second.
    pub fn purify(&self) -> Result<Vec<C64>> {
        let d = self.dim();
        let spec = eig_hermitian(&self.matrix)?;
        let mut phi = vec![ZERO; d * d];
        for (i, &lambda) in spec.eigenvalues.iter().enumerate() {
            let w = lambda.max(0.0).sqrt();
            if w == 0.0 {
                continue;
            }
            for a in 0..d {
                phi[a * d + i] = spec.eigenvectors[(a, i)] * w;
            }
        }
        Ok(phi)
    }
}
