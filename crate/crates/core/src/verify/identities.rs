//! Deterministic checks of the algebraic identities and structural properties of the bounds.
//!
//! Every check reports its largest defect over a fixed grid or a seeded set of states, so a
//! failure names the property, the dimensions and how far off it was.

use serde::{Deserialize, Serialize};

use super::sampler::{sample_state, substream, Ensemble};
use super::structural::{isa_gap_defect, linear_entropy_decomposition_defect};
use crate::bloch::gellmann_basis;
use crate::bounds::{
    appel_nonlinear_bound, audenaert_bound, classic_bounds, dssa_g, dssa_restriction_r,
    gamma_curve, invert_upper, inverted_closed_form, inverted_lower_f, isa_h, purity_dssa_branch,
    purity_f, purity_isa_branch, renyi_f, renyi_g, renyi_h, sharp_f, Branch, DimPair,
};
use crate::error::Result;

/// Seed for the random states used by the identity checks.
const IDENTITY_SEED: u64 = 0x1d_e47;
const RANDOM_STATES: u64 = 50;
/// Step of the finite-difference gradient on the gluing curve.
const FD_STEP: f64 = 1e-7;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub dims: Option<DimPair>,
    pub points: usize,
    pub max_defect: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityCheck {
    fn new(
        name: &str,
        dims: Option<DimPair>,
        defects: impl IntoIterator<Item = f64>,
        tolerance: f64,
    ) -> Self {
        let mut points = 0;
        let mut max_defect = 0.0_f64;
        let mut finite = true;
        for d in defects {
            points += 1;
            finite &= d.is_finite();
            max_defect = max_defect.max(d);
        }
        Self {
            name: name.to_string(),
            dims,
            points,
            max_defect,
            tolerance,
            passed: finite && points > 0 && max_defect <= tolerance,
        }
    }
}

impl std::fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let dims = self
            .dims
            .map(|d| d.to_string())
            .unwrap_or_else(|| "-".into());
        write!(
            f,
            "{} {:<30} {:>9} {:>7} points  max defect {:.3e} (tol {:.0e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            dims,
            self.points,
            self.max_defect,
            self.tolerance
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, name: &str, dims: DimPair) -> Option<&IdentityCheck> {
        self.checks
            .iter()
            .find(|c| c.name == name && c.dims == Some(dims))
    }
}

/// Grid `{0, step, 2·step, …} ∩ [0, max]`, with `max` itself appended.
pub fn axis(max: f64, step: f64) -> Vec<f64> {
    let n = (max / step).floor() as usize;
    let mut v: Vec<f64> = (0..=n)
        .map(|k| k as f64 * step)
        .filter(|&t| t <= max)
        .collect();
    if v.last().is_none_or(|&t| max - t > 1e-12) {
        v.push(max);
    }
    v
}

fn grid(dims: DimPair, step: f64) -> Vec<(f64, f64)> {
    let ys = axis(dims.max_b(), step);
    axis(dims.max_a(), step)
        .into_iter()
        .flat_map(|x| ys.iter().map(move |&y| (x, y)))
        .collect()
}

/// `appel − isa = (√((1−x)/d_B) − √((1−y)/d_A))²`.
pub fn appel_gap_check(dims: DimPair, step: f64) -> Result<IdentityCheck> {
    let mut defects = Vec::new();
    for (x, y) in grid(dims, step) {
        let gap = appel_nonlinear_bound(x, y, dims)? - isa_h(x, y, dims)?;
        let square = (((1.0 - x) / dims.db()).sqrt() - ((1.0 - y) / dims.da()).sqrt()).powi(2);
        defects.push((gap - square).abs());
    }
    Ok(IdentityCheck::new(
        "isa_appel_gap",
        Some(dims),
        defects,
        1e-12,
    ))
}

/// `f ≤ appel`, `f ≤ x + y` and `isa ≤ appel`, as the largest excess.
pub fn dominance_check(dims: DimPair, step: f64) -> Result<IdentityCheck> {
    let mut defects = Vec::new();
    for (x, y) in grid(dims, step) {
        let f = sharp_f(x, y, dims)?.0;
        let appel = appel_nonlinear_bound(x, y, dims)?;
        let isa = isa_h(x, y, dims)?;
        let sa = classic_bounds(x, y).0;
        defects.push((f - appel).max(f - sa).max(isa - appel).max(0.0));
    }
    Ok(IdentityCheck::new(
        "dominance_chain",
        Some(dims),
        defects,
        1e-12,
    ))
}

fn omega_points(dims: DimPair, n: usize, lo: f64, hi: f64) -> Result<Vec<(f64, f64)>> {
    (0..n)
        .map(|k| {
            let t = dims.max_a() * (lo + (hi - lo) * k as f64 / (n - 1) as f64);
            let (x, y, _) = gamma_curve(t, dims)?;
            Ok((x, y))
        })
        .collect()
}

/// `|g − h|` on 100 points of the gluing curve.
pub fn omega_coincidence_check(dims: DimPair) -> Result<IdentityCheck> {
    let mut defects = Vec::new();
    for (x, y) in omega_points(dims, 100, 0.0, 1.0)? {
        defects.push((dssa_g(x, y, dims)? - isa_h(x, y, dims)?).abs());
    }
    Ok(IdentityCheck::new(
        "omega_coincidence",
        Some(dims),
        defects,
        1e-11,
    ))
}

/// Central-difference gradient of `g` on interior curve points against `(1/d_B, 1/d_A)`.
pub fn omega_gradient_check(dims: DimPair) -> Result<IdentityCheck> {
    let mut defects = Vec::new();
    for (x, y) in omega_points(dims, 100, 0.05, 0.95)? {
        let gx = (dssa_g(x + FD_STEP, y, dims)? - dssa_g(x - FD_STEP, y, dims)?) / (2.0 * FD_STEP);
        let gy = (dssa_g(x, y + FD_STEP, dims)? - dssa_g(x, y - FD_STEP, dims)?) / (2.0 * FD_STEP);
        defects.push(
            (gx - 1.0 / dims.db())
                .abs()
                .max((gy - 1.0 / dims.da()).abs()),
        );
    }
    Ok(IdentityCheck::new(
        "omega_gradient",
        Some(dims),
        defects,
        1e-6,
    ))
}

/// `γ₃(t) = h(γ₁(t), γ₂(t))` and `γ₁(t) = r(γ₂(t))`.
pub fn gamma_curve_check(dims: DimPair) -> Result<IdentityCheck> {
    let mut defects = Vec::new();
    for k in 0..=100 {
        let (g1, g2, g3) = gamma_curve(dims.max_a() * k as f64 / 100.0, dims)?;
        let on_isa = (g3 - isa_h(g1, g2, dims)?).abs();
        let on_curve = (g1 - dssa_restriction_r(g2, dims)?).abs();
        defects.push(on_isa.max(on_curve));
    }
    Ok(IdentityCheck::new(
        "gamma_on_isa",
        Some(dims),
        defects,
        1e-12,
    ))
}

/// Forward differences of `f` along both axes at interior grid points must be positive;
/// the defect is the number of failures.
pub fn monotonicity_check(dims: DimPair, step: f64) -> Result<IdentityCheck> {
    let xs = axis(dims.max_a(), step);
    let ys = axis(dims.max_b(), step);
    let mut defects = Vec::new();
    for i in 0..xs.len() - 1 {
        for j in 0..ys.len() - 1 {
            let f = sharp_f(xs[i], ys[j], dims)?.0;
            let fx = sharp_f(xs[i + 1], ys[j], dims)?.0;
            let fy = sharp_f(xs[i], ys[j + 1], dims)?.0;
            defects.push(if fx > f && fy > f { 0.0 } else { 1.0 });
        }
    }
    Ok(IdentityCheck::new("monotonicity", Some(dims), defects, 0.0))
}

/// Rényi form against substitution through `f` and against its explicit branch formulas.
pub fn renyi_consistency_check(dims: DimPair, step: f64) -> Result<IdentityCheck> {
    let mut defects = Vec::new();
    for x in axis(dims.da().log2(), step) {
        for y in axis(dims.db().log2(), step) {
            let (fr, branch) = renyi_f(x, y, dims)?;
            let f = sharp_f(1.0 - (-x).exp2(), 1.0 - (-y).exp2(), dims)?.0;
            let explicit = match branch {
                Branch::Isa => renyi_h(x, y, dims)?,
                _ => renyi_g(x, y, dims)?,
            };
            defects.push((fr + (1.0 - f).log2()).abs().max((fr - explicit).abs()));
        }
    }
    Ok(IdentityCheck::new(
        "renyi_consistency",
        Some(dims),
        defects,
        1e-10,
    ))
}

/// Purity form against substitution through `f` and against its explicit branch formulas.
pub fn purity_consistency_check(dims: DimPair, step: f64) -> Result<IdentityCheck> {
    let mut defects = Vec::new();
    for (x, y) in grid(dims, step) {
        let (ga, gb) = (1.0 - x, 1.0 - y);
        let (fp, branch) = purity_f(ga, gb, dims)?;
        let f = sharp_f(x, y, dims)?.0;
        let explicit = match branch {
            Branch::Isa => purity_isa_branch(ga, gb, dims)?,
            _ => purity_dssa_branch(ga, gb, dims)?,
        };
        defects.push((fp - (1.0 - f)).abs().max((fp - explicit).abs()));
    }
    Ok(IdentityCheck::new(
        "purity_consistency",
        Some(dims),
        defects,
        1e-12,
    ))
}

/// Bisection against the explicit inverted formulas.
pub fn inverted_closed_form_check(dims: DimPair, step: f64) -> Result<IdentityCheck> {
    let mut defects = Vec::new();
    for (x, y) in grid(dims, step) {
        let bisection = inverted_lower_f(x, y, dims)?.value;
        defects.push((bisection - inverted_closed_form(x, y, dims)?.0).abs());
    }
    Ok(IdentityCheck::new(
        "inverted_closed_form",
        Some(dims),
        defects,
        1e-8,
    ))
}

/// `f̃ ≥ |x − y|`, as the largest shortfall.
pub fn inverted_araki_lieb_check(dims: DimPair, step: f64) -> Result<IdentityCheck> {
    let mut defects = Vec::new();
    for (x, y) in grid(dims, step) {
        let al = classic_bounds(x, y).1;
        defects.push((al - inverted_lower_f(x, y, dims)?.value).max(0.0));
    }
    Ok(IdentityCheck::new(
        "inverted_above_araki_lieb",
        Some(dims),
        defects,
        1e-9,
    ))
}

/// For triples `(x, f_{A,R}(x, z), z)` the inversion recovers `z`.
pub fn inversion_soundness_check(dims: DimPair) -> Result<IdentityCheck> {
    let ar = DimPair::new(dims.d_a, dims.d_a * dims.d_b)?;
    let mut defects = Vec::new();
    for i in 0..=20 {
        for k in 0..=20 {
            let x = ar.max_a() * i as f64 / 20.0;
            let z = ar.max_b() * k as f64 / 20.0;
            let y = sharp_f(x, z, ar)?.0;
            // only triples that are realisable with y in range and a non-vacuous inversion
            if y > dims.max_b() || y <= x {
                continue;
            }
            defects.push((invert_upper(x, y, dims)?.0 - z).abs());
        }
    }
    Ok(IdentityCheck::new(
        "inversion_soundness",
        Some(dims),
        defects,
        1e-8,
    ))
}

/// Bloch-form identities on seeded random states: the linear-entropy decomposition and the
/// ISA gap as correlation weight.
pub fn bloch_identity_checks(dims: DimPair) -> Result<Vec<IdentityCheck>> {
    let ga = gellmann_basis(dims.d_a)?;
    let gb = gellmann_basis(dims.d_b)?;
    let mut decomposition = Vec::new();
    let mut gap = Vec::new();
    for k in 0..RANDOM_STATES {
        let mut rng = substream(
            IDENTITY_SEED ^ ((dims.d_a as u64) << 32 | dims.d_b as u64),
            k,
        );
        let rho = sample_state(Ensemble::HilbertSchmidt, &[dims.d_a, dims.d_b], &mut rng)?;
        decomposition.push(linear_entropy_decomposition_defect(&rho, &ga, &gb)?);
        gap.push(isa_gap_defect(&rho, &ga, &gb)?);
    }
    Ok(vec![
        IdentityCheck::new(
            "linear_entropy_decomposition",
            Some(dims),
            decomposition,
            1e-10,
        ),
        IdentityCheck::new("isa_gap_correlation_weight", Some(dims), gap, 1e-10),
    ])
}

/// `|g − audenaert|` at `d_A = d_B = d` on the grid where DSSA applies and the
/// dimension-free bound is defined.
pub fn large_dimension_check(d: usize, step: f64) -> Result<IdentityCheck> {
    let dims = DimPair::new(d, d)?;
    let mut defects = Vec::new();
    for (x, y) in grid(dims, step) {
        if x > dssa_restriction_r(y, dims)? {
            continue;
        }
        if let Some(a) = audenaert_bound(x, y) {
            defects.push((dssa_g(x, y, dims)? - a).abs());
        }
    }
    Ok(IdentityCheck::new(
        "large_dimension_limit",
        Some(dims),
        defects,
        1e-5,
    ))
}

/// Every check above for each dimension pair, plus the large-dimension limit at `d = 10⁶`.
pub fn identity_suite(dims: &[DimPair]) -> Result<IdentityReport> {
    const STEP: f64 = 0.01;
    let mut checks = Vec::new();
    for &d in dims {
        checks.push(appel_gap_check(d, STEP)?);
        checks.push(dominance_check(d, STEP)?);
        checks.push(omega_coincidence_check(d)?);
        checks.push(omega_gradient_check(d)?);
        checks.push(gamma_curve_check(d)?);
        checks.push(monotonicity_check(d, STEP)?);
        checks.push(renyi_consistency_check(d, STEP)?);
        checks.push(purity_consistency_check(d, STEP)?);
        checks.push(inverted_closed_form_check(d, STEP)?);
        checks.push(inverted_araki_lieb_check(d, STEP)?);
        checks.push(inversion_soundness_check(d)?);
        checks.extend(bloch_identity_checks(d)?);
    }
    checks.push(large_dimension_check(1_000_000, STEP)?);
    Ok(IdentityReport { checks })
}
