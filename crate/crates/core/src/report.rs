//! Entropy points of bipartite states and per-state bound reports.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bounds::{
    appel_nonlinear_bound, audenaert_bound, classic_bounds, dssa_g, dssa_restriction_r,
    inverted_lower_f, isa_h, purity_f, renyi_f, sharp_f, DimPair,
};
use crate::density::DensityMatrix;
use crate::error::Result;

/// Slack below this counts as a violation.
pub const VIOLATION_TOL: f64 = 1e-9;

/// `(x, y, z) = (S_L(ρ_A), S_L(ρ_B), S_L(ρ_AB))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl EntropyPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Measures a bipartite state.
    pub fn of_state(rho: &DensityMatrix) -> Result<Self> {
        DimPair::from_dims(rho.dims())?;
        Ok(Self {
            x: rho.partial_trace(&[0])?.linear_entropy(),
            y: rho.partial_trace(&[1])?.linear_entropy(),
            z: rho.linear_entropy(),
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }

    /// Nonclassical correlations: a marginal more mixed than the whole.
    pub fn witness(&self) -> bool {
        self.x > self.z + WITNESS_MARGIN || self.y > self.z + WITNESS_MARGIN
    }
}

/// Margin applied to the witness comparison so roundoff on product states cannot trigger it.
pub const WITNESS_MARGIN: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    /// `z ≤ value`
    Upper,
    /// `z ≥ value`
    Lower,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub name: String,
    pub kind: BoundKind,
    /// `None` where the bound does not apply at this point.
    pub value: Option<f64>,
    pub branch: Option<String>,
    /// `value − z` for upper bounds, `z − value` for lower bounds.
    pub slack: Option<f64>,
    pub applicable: bool,
    pub satisfied: bool,
}

impl BoundRecord {
    fn new(
        name: &str,
        kind: BoundKind,
        value: Option<f64>,
        branch: Option<String>,
        z: f64,
    ) -> Self {
        let slack = value.map(|v| match kind {
            BoundKind::Upper => v - z,
            BoundKind::Lower => z - v,
        });
        Self {
            name: name.to_string(),
            kind,
            value,
            branch,
            slack,
            applicable: value.is_some(),
            satisfied: slack.is_none_or(|s| s >= -VIOLATION_TOL),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub dims: DimPair,
    pub point: EntropyPoint,
    pub bounds: Vec<BoundRecord>,
    pub witness: bool,
}

impl BoundReport {
    pub fn get(&self, name: &str) -> Option<&BoundRecord> {
        self.bounds.iter().find(|b| b.name == name)
    }

    pub fn all_satisfied(&self) -> bool {
        self.bounds.iter().all(|b| b.satisfied)
    }

    pub fn violations(&self) -> impl Iterator<Item = &BoundRecord> {
        self.bounds.iter().filter(|b| !b.satisfied)
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.point;
        writeln!(
            f,
            "dims {}  x = {:.12}  y = {:.12}  z = {:.12}",
            self.dims, p.x, p.y, p.z
        )?;
        for b in &self.bounds {
            let op = match b.kind {
                BoundKind::Upper => "<=",
                BoundKind::Lower => ">=",
            };
            match (b.value, b.slack) {
                (Some(v), Some(s)) => {
                    let verdict = if b.satisfied { "ok" } else { "VIOLATED" };
                    let branch = b
                        .branch
                        .as_deref()
                        .map(|s| format!(" [{s}]"))
                        .unwrap_or_default();
                    writeln!(
                        f,
                        "  {:<14} z {op} {v:.12}  slack {s:+.3e}  {verdict}{branch}",
                        b.name
                    )?;
                }
                _ => writeln!(f, "  {:<14} not applicable", b.name)?,
            }
        }
        write!(
            f,
            "  witness: {}",
            if self.witness {
                "nonclassical correlations"
            } else {
                "none"
            }
        )
    }
}

/// Names of the bounds reported by [`evaluate_point`], in report order.
pub const BOUND_NAMES: [&str; 10] = [
    "subadditivity",
    "araki_lieb",
    "audenaert",
    "appel",
    "isa",
    "dssa",
    "sharp",
    "renyi",
    "purity",
    "inverted",
];

/// Evaluates every bound at a measured point.
///
/// The Rényi and purity records compare `S²(ρ_AB)` and `γ(ρ_AB)` against their transformed
/// bounds; their slacks are in those units.
pub fn evaluate_point(point: EntropyPoint, dims: DimPair) -> Result<BoundReport> {
    let EntropyPoint { x, y, z } = point;
    let (sa, al) = classic_bounds(x, y);
    let dssa_applicable = x <= dssa_restriction_r(y, dims)?;
    let (sharp, branch) = sharp_f(x, y, dims)?;
    let renyi = |t: f64| -(1.0 - t).log2();
    let (fr, rbranch) = renyi_f(
        renyi(x).min(dims.da().log2()),
        renyi(y).min(dims.db().log2()),
        dims,
    )?;
    let (fp, pbranch) = purity_f(1.0 - x, 1.0 - y, dims)?;
    let inverted = inverted_lower_f(x, y, dims)?;

    let bounds = vec![
        BoundRecord::new("subadditivity", BoundKind::Upper, Some(sa), None, z),
        BoundRecord::new("araki_lieb", BoundKind::Lower, Some(al), None, z),
        BoundRecord::new(
            "audenaert",
            BoundKind::Upper,
            audenaert_bound(x, y),
            None,
            z,
        ),
        BoundRecord::new(
            "appel",
            BoundKind::Upper,
            Some(appel_nonlinear_bound(x, y, dims)?),
            None,
            z,
        ),
        BoundRecord::new("isa", BoundKind::Upper, Some(isa_h(x, y, dims)?), None, z),
        BoundRecord::new(
            "dssa",
            BoundKind::Upper,
            dssa_applicable.then(|| dssa_g(x, y, dims)).transpose()?,
            None,
            z,
        ),
        BoundRecord::new(
            "sharp",
            BoundKind::Upper,
            Some(sharp),
            Some(branch.to_string()),
            z,
        ),
        BoundRecord::new(
            "renyi",
            BoundKind::Upper,
            Some(fr),
            Some(rbranch.to_string()),
            renyi(z),
        ),
        BoundRecord::new(
            "purity",
            BoundKind::Lower,
            Some(fp),
            Some(pbranch.to_string()),
            1.0 - z,
        ),
        BoundRecord::new(
            "inverted",
            BoundKind::Lower,
            Some(inverted.value),
            Some(inverted.method.label()),
            z,
        ),
    ];
    Ok(BoundReport {
        dims,
        point,
        bounds,
        witness: point.witness(),
    })
}

/// Measures a bipartite state and evaluates every bound on it.
pub fn evaluate_all(rho: &DensityMatrix) -> Result<BoundReport> {
    let dims = DimPair::from_dims(rho.dims())?;
    evaluate_point(EntropyPoint::of_state(rho)?, dims)
}
