//! Linear-entropy inequalities as scalar maps of the marginal entropies.
//!
//! With `x = S_L(ρ_A)`, `y = S_L(ρ_B)` and `z = S_L(ρ_AB)` every upper bound here is a
//! function `z ≤ F(x, y)`. The sharp bound [`sharp_f`] glues the dimension-dependent DSSA
//! surface (valid while `x ≤ r(y)`) to the ISA plane; the two agree, together with their
//! gradients, along the curve `x = r(y)`.

mod forms;
mod inverted;

pub use forms::{
    purity_dssa_branch, purity_f, purity_isa_branch, renyi_f, renyi_g, renyi_h, renyi_r,
};
pub use inverted::{
    invert_upper, inverted_closed_form, inverted_lower_f, InvertedBound, InvertedMethod,
    BISECTION_MAX_ITER, BISECTION_TOL,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs may exceed their domain by this much before they are rejected; within it they are clamped.
pub const DOMAIN_TOL: f64 = 1e-12;
/// Points with `|x − r(y)|` below this are tagged [`Branch::Omega`].
pub const OMEGA_TOL: f64 = 1e-12;

/// Subsystem dimensions with the derived maximal entropies `D = 1 − 1/d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DimPair {
    pub d_a: usize,
    pub d_b: usize,
}

impl DimPair {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self> {
        if d_a < 2 || d_b < 2 {
            return Err(Error::parameter(format!(
                "subsystem dimensions must be >= 2, got {d_a}x{d_b}"
            )));
        }
        Ok(Self { d_a, d_b })
    }

    pub fn from_dims(dims: &[usize]) -> Result<Self> {
        match dims {
            [a, b] => Self::new(*a, *b),
            _ => Err(Error::structure(format!(
                "expected a bipartite dimension pair, got {dims:?}"
            ))),
        }
    }

    pub fn da(&self) -> f64 {
        self.d_a as f64
    }

    pub fn db(&self) -> f64 {
        self.d_b as f64
    }

    /// `D_A = 1 − 1/d_A`.
    pub fn max_a(&self) -> f64 {
        1.0 - 1.0 / self.da()
    }

    pub fn max_b(&self) -> f64 {
        1.0 - 1.0 / self.db()
    }

    pub fn max_ab(&self) -> f64 {
        1.0 - 1.0 / (self.da() * self.db())
    }

    pub fn swapped(&self) -> Self {
        Self {
            d_a: self.d_b,
            d_b: self.d_a,
        }
    }
}

impl std::fmt::Display for DimPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.d_a, self.d_b)
    }
}

/// Which surface a combined bound was evaluated on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Dssa,
    Isa,
    /// On the gluing curve, where both surfaces agree.
    Omega,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Dssa => "dssa",
            Branch::Isa => "isa",
            Branch::Omega => "omega",
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Checks `v ∈ [0, max]` up to [`DOMAIN_TOL`] and clamps into it.
pub(crate) fn clamp_domain(v: f64, max: f64, name: &str) -> Result<f64> {
    if !v.is_finite() || v < -DOMAIN_TOL || v > max + DOMAIN_TOL {
        return Err(Error::parameter(format!(
            "{name} = {v} lies outside [0, {max}]"
        )));
    }
    Ok(v.clamp(0.0, max))
}

/// Square root with radicands in `[−DOMAIN_TOL, 0)` treated as zero.
pub(crate) fn sqrt0(v: f64) -> f64 {
    v.max(0.0).sqrt()
}

fn check_xy(x: f64, y: f64, dims: DimPair) -> Result<(f64, f64)> {
    Ok((
        clamp_domain(x, dims.max_a(), "x")?,
        clamp_domain(y, dims.max_b(), "y")?,
    ))
}

/// Subadditivity `x + y` and the Araki–Lieb lower bound `|x − y|`.
pub fn classic_bounds(x: f64, y: f64) -> (f64, f64) {
    (x + y, (x - y).abs())
}

/// Dimension-free bound `x + y − 2(1−√(1−x))(1−√(1−y))`, defined only where
/// `√(1−x) + √(1−y) ≥ 1`.
pub fn audenaert_bound(x: f64, y: f64) -> Option<f64> {
    let (a, b) = (sqrt0(1.0 - x), sqrt0(1.0 - y));
    if a + b >= 1.0 {
        Some(x + y - 2.0 * (1.0 - a) * (1.0 - b))
    } else {
        None
    }
}

/// `1 + 1/(d_A d_B) − 2√((1−x)(1−y)/(d_A d_B))`.
pub fn appel_nonlinear_bound(x: f64, y: f64, dims: DimPair) -> Result<f64> {
    let (x, y) = check_xy(x, y, dims)?;
    let d = dims.da() * dims.db();
    Ok(1.0 + 1.0 / d - 2.0 * ((1.0 - x) * (1.0 - y) / d).sqrt())
}

/// Inhomogeneous subadditivity `x/d_B + y/d_A + D_A D_B`.
pub fn isa_h(x: f64, y: f64, dims: DimPair) -> Result<f64> {
    let (x, y) = check_xy(x, y, dims)?;
    Ok(isa_unchecked(x, y, dims))
}

fn isa_unchecked(x: f64, y: f64, dims: DimPair) -> f64 {
    x / dims.db() + y / dims.da() + dims.max_a() * dims.max_b()
}

/// Dimensionally sharp subadditivity `x + y − 2 D_A D_B (1−√(1−x/D_A))(1−√(1−y/D_B))`.
/// Only a bound where `x ≤ r(y)`; see [`sharp_f`].
pub fn dssa_g(x: f64, y: f64, dims: DimPair) -> Result<f64> {
    let (x, y) = check_xy(x, y, dims)?;
    Ok(dssa_unchecked(x, y, dims))
}

fn dssa_unchecked(x: f64, y: f64, dims: DimPair) -> f64 {
    let (da, db) = (dims.max_a(), dims.max_b());
    x + y - 2.0 * da * db * (1.0 - sqrt0(1.0 - x / da)) * (1.0 - sqrt0(1.0 - y / db))
}

/// `r(y) = D_A (y/D_B − 1 + 2√(1−y/D_B))`; DSSA holds for `x ≤ r(y)`.
pub fn dssa_restriction_r(y: f64, dims: DimPair) -> Result<f64> {
    let y = clamp_domain(y, dims.max_b(), "y")?;
    Ok(restriction_unchecked(y, dims))
}

fn restriction_unchecked(y: f64, dims: DimPair) -> f64 {
    let (da, db) = (dims.max_a(), dims.max_b());
    da * (y / db - 1.0 + 2.0 * sqrt0(1.0 - y / db))
}

/// The tight bound: DSSA while `x ≤ r(y)`, ISA beyond. Ties go to DSSA; points within
/// [`OMEGA_TOL`] of the curve report [`Branch::Omega`].
pub fn sharp_f(x: f64, y: f64, dims: DimPair) -> Result<(f64, Branch)> {
    let (x, y) = check_xy(x, y, dims)?;
    Ok(sharp_unchecked(x, y, dims))
}

pub(crate) fn sharp_unchecked(x: f64, y: f64, dims: DimPair) -> (f64, Branch) {
    let r = restriction_unchecked(y, dims);
    if (x - r).abs() <= OMEGA_TOL {
        (dssa_unchecked(x, y, dims), Branch::Omega)
    } else if x <= r {
        (dssa_unchecked(x, y, dims), Branch::Dssa)
    } else {
        (isa_unchecked(x, y, dims), Branch::Isa)
    }
}

/// The curve `Γ(t) = (t, γ₂(t), γ₃(t))` where the ISA plane touches the DSSA surface.
pub fn gamma_curve(t: f64, dims: DimPair) -> Result<(f64, f64, f64)> {
    let t = clamp_domain(t, dims.max_a(), "t")?;
    let (da, db) = (dims.da(), dims.db());
    let (big_a, big_b) = (dims.max_a(), dims.max_b());
    let s = sqrt0(1.0 - t / big_a);
    let g2 = big_b * (t / big_a - 1.0 + 2.0 * s);
    let g3 = (da + db - 2.0) / (db * (da - 1.0)) * t
        + 2.0 * (db - 1.0) / (db * da) * s
        + (da - 2.0) * (db - 1.0) / (da * db);
    Ok((t, g2, g3))
}

/// Right-hand side of `S_ABC + S_C/(d_A d_B) ≤ S_AC/d_B + S_BC/d_A + (d_A d_B + 1 − d_A − d_B)/(d_A d_B)`,
/// moved into the form `S_ABC ≤ bound`.
pub fn sisa_bound(s_ac: f64, s_bc: f64, s_c: f64, dims: DimPair) -> f64 {
    let (da, db) = (dims.da(), dims.db());
    let d = da * db;
    s_ac / db + s_bc / da + (d + 1.0 - da - db) / d - s_c / d
}
