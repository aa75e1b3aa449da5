//! The sharp bound rewritten for Rényi-2 entropies and for purities.
//!
//! Both are exact reparametrisations of [`sharp_f`]: `S² = −log₂(1 − S_L)` and `γ = 1 − S_L`.
//! [`renyi_f`] and [`purity_f`] evaluate through that substitution; the explicit branch
//! formulas below are kept so the two routes can be compared.

use super::{clamp_domain, sharp_unchecked, sqrt0, Branch, DimPair};
use crate::error::Result;

/// `e(t) = 1 − 2^{−t}`, mapping a Rényi-2 entropy to the linear entropy.
fn to_linear(t: f64) -> f64 {
    1.0 - (-t).exp2()
}

fn from_linear(s: f64) -> f64 {
    -(1.0 - s).log2()
}

fn check_renyi(x: f64, y: f64, dims: DimPair) -> Result<(f64, f64)> {
    Ok((
        clamp_domain(x, dims.da().log2(), "x")?,
        clamp_domain(y, dims.db().log2(), "y")?,
    ))
}

/// Upper bound on `S²(ρ_AB)` from `S²(ρ_A) = x`, `S²(ρ_B) = y`.
pub fn renyi_f(x: f64, y: f64, dims: DimPair) -> Result<(f64, Branch)> {
    let (x, y) = check_renyi(x, y, dims)?;
    let (lx, ly) = (
        to_linear(x).clamp(0.0, dims.max_a()),
        to_linear(y).clamp(0.0, dims.max_b()),
    );
    let (f, branch) = sharp_unchecked(lx, ly, dims);
    Ok((from_linear(f), branch))
}

/// ISA branch in Rényi form: `−log₂(2^{−x}/d_B + 2^{−y}/d_A − 1/(d_A d_B))`.
pub fn renyi_h(x: f64, y: f64, dims: DimPair) -> Result<f64> {
    let (x, y) = check_renyi(x, y, dims)?;
    let (da, db) = (dims.da(), dims.db());
    Ok(-((-x).exp2() / db + (-y).exp2() / da - 1.0 / (da * db)).log2())
}

/// DSSA branch in Rényi form.
pub fn renyi_g(x: f64, y: f64, dims: DimPair) -> Result<f64> {
    let (x, y) = check_renyi(x, y, dims)?;
    let (da, db) = (dims.da(), dims.db());
    let (px, py) = ((-x).exp2(), (-y).exp2());
    let fa = 1.0 - sqrt0((da * px - 1.0) / (da - 1.0));
    let fb = 1.0 - sqrt0((db * py - 1.0) / (db - 1.0));
    Ok(-(px + py - 1.0 + 2.0 * dims.max_a() * dims.max_b() * fa * fb).log2())
}

/// Branch threshold in Rényi form, `−log₂(1 − r(1 − 2^{−y}))`: the DSSA branch applies while
/// `x ≤ renyi_r(y)`.
pub fn renyi_r(y: f64, dims: DimPair) -> Result<f64> {
    let y = clamp_domain(y, dims.db().log2(), "y")?;
    let (db, big_a) = (dims.db(), dims.max_a());
    let s = (db * (-y).exp2() - 1.0) / (db - 1.0);
    let r = big_a * (2.0 * sqrt0(s) - s);
    Ok(-(1.0 - r).log2())
}

fn check_purity(ga: f64, gb: f64, dims: DimPair) -> Result<(f64, f64)> {
    let (da, db) = (dims.da(), dims.db());
    let ga = 1.0 / da + clamp_domain(ga - 1.0 / da, dims.max_a(), "gamma_A - 1/d_A")?;
    let gb = 1.0 / db + clamp_domain(gb - 1.0 / db, dims.max_b(), "gamma_B - 1/d_B")?;
    Ok((ga, gb))
}

/// Lower bound on `γ(ρ_AB)` from the marginal purities.
pub fn purity_f(gamma_a: f64, gamma_b: f64, dims: DimPair) -> Result<(f64, Branch)> {
    let (ga, gb) = check_purity(gamma_a, gamma_b, dims)?;
    let (f, branch) = sharp_unchecked(
        (1.0 - ga).clamp(0.0, dims.max_a()),
        (1.0 - gb).clamp(0.0, dims.max_b()),
        dims,
    );
    Ok((1.0 - f, branch))
}

/// ISA branch in purity form: `γ_A/d_B + γ_B/d_A − 1/(d_A d_B)`.
pub fn purity_isa_branch(gamma_a: f64, gamma_b: f64, dims: DimPair) -> Result<f64> {
    let (ga, gb) = check_purity(gamma_a, gamma_b, dims)?;
    let (da, db) = (dims.da(), dims.db());
    Ok(ga / db + gb / da - 1.0 / (da * db))
}

/// DSSA branch in purity form,
/// `γ_A + γ_B − 1 + 2 D_A D_B (1 − √((d_A γ_A − 1)/(d_A − 1)))(1 − √((d_B γ_B − 1)/(d_B − 1)))`.
pub fn purity_dssa_branch(gamma_a: f64, gamma_b: f64, dims: DimPair) -> Result<f64> {
    let (ga, gb) = check_purity(gamma_a, gamma_b, dims)?;
    let (da, db) = (dims.da(), dims.db());
    let fa = 1.0 - sqrt0((da * ga - 1.0) / (da - 1.0));
    let fb = 1.0 - sqrt0((db * gb - 1.0) / (db - 1.0));
    Ok(ga + gb - 1.0 + 2.0 * dims.max_a() * dims.max_b() * fa * fb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{dssa_restriction_r, sharp_f};

    fn d22() -> DimPair {
        DimPair::new(2, 2).unwrap()
    }

    #[test]
    fn renyi_examples() {
        assert_eq!(renyi_f(0.0, 0.0, d22()).unwrap().0, 0.0);
        assert!((renyi_f(1.0, 1.0, d22()).unwrap().0 - 2.0).abs() < 1e-12);
        assert!((renyi_f(1.0, 0.0, d22()).unwrap().0 - 1.0).abs() < 1e-12);
        assert!(renyi_f(1.1, 0.0, d22()).is_err());
    }

    #[test]
    fn renyi_branch_formulas() {
        for dims in [
            d22(),
            DimPair::new(2, 3).unwrap(),
            DimPair::new(3, 4).unwrap(),
        ] {
            let n = 25;
            for i in 0..=n {
                for j in 0..=n {
                    let x = dims.da().log2() * i as f64 / n as f64;
                    let y = dims.db().log2() * j as f64 / n as f64;
                    let (f, branch) = renyi_f(x, y, dims).unwrap();
                    let explicit = match branch {
                        Branch::Isa => renyi_h(x, y, dims).unwrap(),
                        _ => renyi_g(x, y, dims).unwrap(),
                    };
                    assert!((f - explicit).abs() < 1e-10, "{dims} ({x}, {y})");
                    let threshold = renyi_r(y, dims).unwrap();
                    let linear_r = dssa_restriction_r(1.0 - (-y).exp2(), dims).unwrap();
                    // both routes take √ of a radicand that vanishes at y = log₂ d_B
                    assert!((threshold - from_linear(linear_r)).abs() < 1e-7);
                }
            }
        }
    }

    #[test]
    fn purity_examples() {
        assert!((purity_f(1.0, 1.0, d22()).unwrap().0 - 1.0).abs() < 1e-12);
        let (p, branch) = purity_f(0.5, 0.5, d22()).unwrap();
        assert!((p - 0.25).abs() < 1e-12);
        assert_eq!(branch, Branch::Isa);
        assert!((purity_f(0.68, 0.68, d22()).unwrap().0 - 0.44).abs() < 1e-12);
        assert!(purity_f(0.4, 1.0, d22()).is_err());
    }

    #[test]
    fn purity_branch_formulas() {
        let dims = DimPair::new(3, 2).unwrap();
        for i in 0..=20 {
            for j in 0..=20 {
                let ga = 1.0 / 3.0 + (2.0 / 3.0) * i as f64 / 20.0;
                let gb = 0.5 + 0.5 * j as f64 / 20.0;
                let (p, branch) = purity_f(ga, gb, dims).unwrap();
                let explicit = match branch {
                    Branch::Isa => purity_isa_branch(ga, gb, dims).unwrap(),
                    _ => purity_dssa_branch(ga, gb, dims).unwrap(),
                };
                assert!((p - explicit).abs() < 1e-12);
                let f = sharp_f(1.0 - ga, 1.0 - gb, dims).unwrap().0;
                assert!((p - (1.0 - f)).abs() < 1e-12);
            }
        }
    }
}
