//! Lower bounds on `S_L(ρ_AB)` obtained by applying the sharp bound to a purification.
//!
//! Purifying `ρ_AB` on a copy `R` of `AB` (`d_R = d_A d_B`) gives `S_L(ρ_AR) = y`,
//! `S_L(ρ_R) = z`, so `y ≤ f_{A,R}(x, z)` and symmetrically `x ≤ f_{B,R}(y, z)`. The sharp
//! bound is strictly increasing in each argument, so each inequality inverts to a lower bound
//! on `z`; the larger of the two is reported.

use serde::{Deserialize, Serialize};

use super::{check_xy, sharp_unchecked, sqrt0, Branch, DimPair};
use crate::error::{Error, Result};

pub const BISECTION_TOL: f64 = 1e-12;
pub const BISECTION_MAX_ITER: usize = 200;

/// How the inverted bound was attained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvertedMethod {
    /// Both inversions are vacuous (`x = y`); the bound is 0.
    Trivial,
    /// From `y ≤ f_{A,R}(x, z)`, on the given branch of `f_{A,R}`.
    SystemA(Branch),
    /// From `x ≤ f_{B,R}(y, z)`.
    SystemB(Branch),
}

impl InvertedMethod {
    pub fn label(&self) -> String {
        match self {
            InvertedMethod::Trivial => "trivial".to_string(),
            InvertedMethod::SystemA(b) => format!("a:{b}"),
            InvertedMethod::SystemB(b) => format!("b:{b}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvertedBound {
    pub value: f64,
    pub method: InvertedMethod,
}

/// Smallest `z ∈ [0, D_AB]` with `f_{(d_A, d_A d_B)}(x, z) ≥ y`, by bisection. Returns the
/// branch of `f` at the solution, or `None` when `y ≤ x` makes the answer 0.
pub fn invert_upper(x: f64, y: f64, dims: DimPair) -> Result<(f64, Option<Branch>)> {
    let (x, y) = check_xy(x, y, dims)?;
    invert_side(x, y, dims.d_a, dims.d_a * dims.d_b)
}

fn invert_side(x: f64, y: f64, d_a: usize, d_r: usize) -> Result<(f64, Option<Branch>)> {
    // f(x, 0) = x, so nothing is learned once y ≤ x
    if y <= x {
        return Ok((0.0, None));
    }
    let pair = DimPair { d_a, d_b: d_r };
    let f = |z: f64| sharp_unchecked(x, z, pair).0;
    let (mut lo, mut hi) = (0.0, pair.max_b());
    if f(hi) < y {
        return Err(Error::numerical(format!(
            "inverted bound does not bracket: f({x}, {hi}) = {} < {y}",
            f(hi)
        )));
    }
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= BISECTION_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) >= y {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((hi, Some(sharp_unchecked(x, hi, pair).1)))
}

/// `f̃(x, y)`: the larger of the two purification inversions.
pub fn inverted_lower_f(x: f64, y: f64, dims: DimPair) -> Result<InvertedBound> {
    let (x, y) = check_xy(x, y, dims)?;
    let d_r = dims.d_a * dims.d_b;
    let (za, ba) = invert_side(x, y, dims.d_a, d_r)?;
    let (zb, bb) = invert_side(y, x, dims.d_b, d_r)?;
    Ok(match (ba, bb) {
        (Some(b), _) if za >= zb => InvertedBound {
            value: za,
            method: InvertedMethod::SystemA(b),
        },
        (_, Some(b)) => InvertedBound {
            value: zb,
            method: InvertedMethod::SystemB(b),
        },
        _ => InvertedBound {
            value: 0.0,
            method: InvertedMethod::Trivial,
        },
    })
}

/// Explicit inversion of one side: `x` is the entropy of the retained subsystem (dimension
/// `d_k`), `y` that of the other, `d_r = d_A d_B`. Returns the value and its branch.
fn closed_form_side(x: f64, y: f64, d_k: usize, d_r: usize) -> (f64, Option<Branch>) {
    if y <= x {
        return (0.0, None);
    }
    let (dk, dr) = (d_k as f64, d_r as f64);
    let big_k = 1.0 - 1.0 / dk;
    let big_r = 1.0 - 1.0 / dr;
    let a = sqrt0(1.0 - x / big_k);
    // z ≤ r̃(x) selects the DSSA branch of f_{K,R}(x, ·)
    let r_tilde = big_r * (x / big_k - 1.0 + 2.0 * a);
    let y_at_curve = sharp_unchecked(x, r_tilde, DimPair { d_a: d_k, d_b: d_r }).0;
    if y <= y_at_curve {
        let c = big_k * (1.0 - a);
        let w = c + sqrt0((x - y) / big_r + (1.0 - c).powi(2));
        ((big_r * (1.0 - w * w)).max(0.0), Some(Branch::Dssa))
    } else {
        // h̃ = d_k y − x/d_other − (d_A d_B − 1)(d_k − 1)/(d_A d_B)
        let d_other = dr / dk;
        let z = dk * y - x / d_other - (dr - 1.0) * (dk - 1.0) / dr;
        (z, Some(Branch::Isa))
    }
}

/// The inverted bound assembled from the explicit branch formulas `g̃₁, g̃₂, h̃₁, h̃₂`. Kept as
/// an independent cross-check of [`inverted_lower_f`].
pub fn inverted_closed_form(x: f64, y: f64, dims: DimPair) -> Result<(f64, Option<Branch>)> {
    let (x, y) = check_xy(x, y, dims)?;
    let d_r = dims.d_a * dims.d_b;
    let a = closed_form_side(x, y, dims.d_a, d_r);
    let b = closed_form_side(y, x, dims.d_b, d_r);
    Ok(if a.0 >= b.0 { a } else { b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::classic_bounds;

    fn d22() -> DimPair {
        DimPair::new(2, 2).unwrap()
    }

    #[test]
    fn examples() {
        let bell = inverted_lower_f(0.5, 0.5, d22()).unwrap();
        assert_eq!(bell.value, 0.0);
        assert_eq!(bell.method, InvertedMethod::Trivial);
        assert_eq!(inverted_lower_f(0.0, 0.0, d22()).unwrap().value, 0.0);
        let b = inverted_lower_f(0.5, 0.0, d22()).unwrap();
        assert!((b.value - 0.5).abs() < 1e-10);
        assert!(matches!(b.method, InvertedMethod::SystemB(_)));
    }

    #[test]
    fn matches_closed_forms_and_araki_lieb() {
        for dims in [
            d22(),
            DimPair::new(2, 3).unwrap(),
            DimPair::new(3, 3).unwrap(),
        ] {
            let n = 40;
            for i in 0..=n {
                for j in 0..=n {
                    let x = dims.max_a() * i as f64 / n as f64;
                    let y = dims.max_b() * j as f64 / n as f64;
                    let inv = inverted_lower_f(x, y, dims).unwrap();
                    let (cf, _) = inverted_closed_form(x, y, dims).unwrap();
                    assert!(
                        (inv.value - cf).abs() < 1e-8,
                        "{dims} ({x}, {y}): {} vs {cf}",
                        inv.value
                    );
                    assert!(inv.value >= classic_bounds(x, y).1 - 1e-9);
                }
            }
        }
    }

    #[test]
    fn recovers_boundary_triples() {
        let dims = DimPair::new(2, 3).unwrap();
        let ar = DimPair::new(2, 6).unwrap();
        for i in 0..=10 {
            for k in 1..=10 {
                let x = ar.max_a() * i as f64 / 10.0;
                let z = ar.max_b() * k as f64 / 10.0;
                let y = sharp_unchecked(x, z, ar).0;
                if y > dims.max_b() || y <= x + 1e-6 {
                    continue;
                }
                let (back, _) = invert_upper(x, y, dims).unwrap();
                assert!((back - z).abs() < 1e-8);
            }
        }
    }
}
