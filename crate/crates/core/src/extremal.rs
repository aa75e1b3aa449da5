//! State families that attain the sharp bound.
//!
//! With `μ₁ = |0⟩⟨0| ⊗ I/d_B` and `μ₂ = I/d_A ⊗ |0⟩⟨0|`:
//!
//! * the ISA line `α μ₁ + (1−α) μ₂` traces the curve Γ on which ISA and DSSA touch;
//! * the DSSA simplex `α μ₁ + β μ₂ + (1−α−β)|00⟩⟨00|` fills the DSSA surface;
//! * mixing any state with `I/d` moves its entropy point along a straight line towards the
//!   corner `(D_A, D_B, D_AB)`, quadratically in the weight.
//!
//! Mixing Γ points towards the corner sweeps the ISA plane, so every point of the sharp
//! surface is attained. All family members are diagonal in the computational basis.

use serde::{Deserialize, Serialize};

use crate::bounds::{dssa_restriction_r, DimPair, DOMAIN_TOL};
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::report::EntropyPoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `α μ₁ + (1−α) μ₂`.
    Isa,
    /// `α μ₁ + β μ₂ + (1−α−β)|00⟩⟨00|`.
    Dssa,
    /// The ISA-line state at parameter `β`, mixed with `I/d` at weight `α`.
    Mix,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "isa" => Ok(Family::Isa),
            "dssa" => Ok(Family::Dssa),
            "mix" => Ok(Family::Mix),
            other => Err(Error::parameter(format!(
                "unknown family `{other}` (expected isa, dssa or mix)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalParams {
    pub family: Family,
    pub alpha: f64,
    pub beta: f64,
}

impl ExtremalParams {
    pub fn build(&self, dims: DimPair) -> Result<DensityMatrix> {
        match self.family {
            Family::Isa => isa_family(self.alpha, dims),
            Family::Dssa => dssa_family(self.alpha, self.beta, dims),
            Family::Mix => mix_with_maximally_mixed(&isa_family(self.beta, dims)?, self.alpha),
        }
    }

    /// The entropy point predicted by the family's closed forms.
    pub fn predicted_point(&self, dims: DimPair) -> Result<EntropyPoint> {
        match self.family {
            Family::Isa => isa_family_point(self.alpha, dims),
            Family::Dssa => dssa_family_point(self.alpha, self.beta, dims),
            Family::Mix => {
                check_unit(self.alpha, "alpha")?;
                let p = isa_family_point(self.beta, dims)?;
                Ok(mixed_point(p, self.alpha, dims))
            }
        }
    }
}

fn check_unit(v: f64, name: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::parameter(format!(
            "{name} = {v} lies outside [0, 1]"
        )));
    }
    Ok(())
}

/// Diagonal of `|0⟩⟨0| ⊗ I/d_B`.
fn mu1(dims: DimPair) -> Vec<f64> {
    let mut d = vec![0.0; dims.d_a * dims.d_b];
    d[..dims.d_b].fill(1.0 / dims.db());
    d
}

/// Diagonal of `I/d_A ⊗ |0⟩⟨0|`.
fn mu2(dims: DimPair) -> Vec<f64> {
    let mut d = vec![0.0; dims.d_a * dims.d_b];
    for a in 0..dims.d_a {
        d[a * dims.d_b] = 1.0 / dims.da();
    }
    d
}

fn diagonal_state(diag: Vec<f64>, dims: DimPair) -> Result<DensityMatrix> {
    DensityMatrix::new(ComplexMatrix::from_diagonal(&diag), &[dims.d_a, dims.d_b])
}

pub fn isa_family(alpha: f64, dims: DimPair) -> Result<DensityMatrix> {
    check_unit(alpha, "alpha")?;
    let diag = mu1(dims)
        .into_iter()
        .zip(mu2(dims))
        .map(|(p, q)| alpha * p + (1.0 - alpha) * q)
        .collect();
    diagonal_state(diag, dims)
}

/// `(D_A(1−α²), D_B(2α−α²), D_A + 2(d_B−1)α/(d_A d_B) − (d_A+d_B−2)α²/(d_A d_B))`.
pub fn isa_family_point(alpha: f64, dims: DimPair) -> Result<EntropyPoint> {
    check_unit(alpha, "alpha")?;
    let (da, db) = (dims.da(), dims.db());
    let d = da * db;
    Ok(EntropyPoint::new(
        dims.max_a() * (1.0 - alpha * alpha),
        dims.max_b() * (2.0 * alpha - alpha * alpha),
        dims.max_a() + 2.0 * (db - 1.0) / d * alpha - (da + db - 2.0) / d * alpha * alpha,
    ))
}

pub fn dssa_family(alpha: f64, beta: f64, dims: DimPair) -> Result<DensityMatrix> {
    check_simplex(alpha, beta)?;
    let mut diag: Vec<f64> = mu1(dims)
        .into_iter()
        .zip(mu2(dims))
        .map(|(p, q)| alpha * p + beta * q)
        .collect();
    diag[0] += (1.0 - alpha - beta).max(0.0);
    diagonal_state(diag, dims)
}

fn check_simplex(alpha: f64, beta: f64) -> Result<()> {
    check_unit(alpha, "alpha")?;
    check_unit(beta, "beta")?;
    if alpha + beta > 1.0 + DOMAIN_TOL {
        return Err(Error::parameter(format!(
            "alpha + beta = {} exceeds 1",
            alpha + beta
        )));
    }
    Ok(())
}

/// `(D_A(2β−β²), D_B(2α−α²), x + y − 2 D_A D_B αβ)`.
pub fn dssa_family_point(alpha: f64, beta: f64, dims: DimPair) -> Result<EntropyPoint> {
    check_simplex(alpha, beta)?;
    let x = dims.max_a() * (2.0 * beta - beta * beta);
    let y = dims.max_b() * (2.0 * alpha - alpha * alpha);
    Ok(EntropyPoint::new(
        x,
        y,
        x + y - 2.0 * dims.max_a() * dims.max_b() * alpha * beta,
    ))
}

/// `α μ + (1−α) I/d`.
pub fn mix_with_maximally_mixed(mu: &DensityMatrix, alpha: f64) -> Result<DensityMatrix> {
    check_unit(alpha, "alpha")?;
    mu.mix(&DensityMatrix::maximally_mixed(mu.dims())?, alpha)
}

/// `v_corner + α²(v_μ − v_corner)`.
pub fn mixed_point(p: EntropyPoint, alpha: f64, dims: DimPair) -> EntropyPoint {
    let a2 = alpha * alpha;
    let (ca, cb, cab) = (dims.max_a(), dims.max_b(), dims.max_ab());
    EntropyPoint::new(
        ca + a2 * (p.x - ca),
        cb + a2 * (p.y - cb),
        cab + a2 * (p.z - cab),
    )
}

/// How [`boundary_state_for`] realised a target.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum BoundaryConstruction {
    /// DSSA simplex at `(α, β)`.
    Dssa { alpha: f64, beta: f64 },
    /// ISA line at `α₀`, mixed with `I/d` at weight `mix`.
    IsaMix { alpha0: f64, mix: f64 },
}

impl BoundaryConstruction {
    pub fn build(&self, dims: DimPair) -> Result<DensityMatrix> {
        match *self {
            BoundaryConstruction::Dssa { alpha, beta } => dssa_family(alpha, beta, dims),
            BoundaryConstruction::IsaMix { alpha0, mix } => {
                mix_with_maximally_mixed(&isa_family(alpha0, dims)?, mix)
            }
        }
    }
}

/// Family parameters whose state has entropy point `(x, y, f(x, y))`.
///
/// Below the curve (`x ≤ r(y)`) the DSSA simplex is inverted directly. Beyond it the target
/// lies on the segment from the corner `(D_A, D_B)` to a Γ point. Writing
/// `u = 1 − x/D_A`, `v = 1 − y/D_B`, the Γ point of `α₀` is `(D_A(1−α₀²), D_B(1−(1−α₀)²))`
/// and the mixing weight `λ` scales its distance from the corner by `λ²`, so
/// `√u = λα₀`, `√v = λ(1−α₀)`: `λ = √u + √v` and `α₀ = √u/λ`.
pub fn boundary_parameters(x: f64, y: f64, dims: DimPair) -> Result<BoundaryConstruction> {
    let x = crate::bounds::clamp_domain(x, dims.max_a(), "x")?;
    let y = crate::bounds::clamp_domain(y, dims.max_b(), "y")?;
    let su = (1.0 - x / dims.max_a()).max(0.0).sqrt();
    let sv = (1.0 - y / dims.max_b()).max(0.0).sqrt();
    if x <= dssa_restriction_r(y, dims)? {
        let beta = 1.0 - su;
        let alpha = 1.0 - sv;
        // α + β = 2 − (√u + √v) ≤ 1 in this region, up to roundoff at the curve
        let excess = (alpha + beta - 1.0).max(0.0);
        return Ok(BoundaryConstruction::Dssa {
            alpha: alpha - excess / 2.0,
            beta: beta - excess / 2.0,
        });
    }
    let mix = (su + sv).min(1.0);
    let alpha0 = if mix > 0.0 { su / (su + sv) } else { 0.5 };
    Ok(BoundaryConstruction::IsaMix { alpha0, mix })
}

/// A state on the sharp boundary with marginal entropies `(x, y)`.
pub fn boundary_state_for(x: f64, y: f64, dims: DimPair) -> Result<DensityMatrix> {
    boundary_parameters(x, y, dims)?.build(dims)
}
