//! Per-state checks of the auxiliary lemmas behind the bounds. Each function returns a slack
//! (non-negative when the inequality holds) or a defect (close to zero when an identity holds).

use crate::bloch::{adapted_basis, bloch_vector, correlation_tensor, OperatorBasis};
use crate::bounds::DimPair;
use crate::density::DensityMatrix;
use crate::error::Result;

fn marginals(rho: &DensityMatrix) -> Result<(DimPair, DensityMatrix, DensityMatrix)> {
    let dims = DimPair::from_dims(rho.dims())?;
    Ok((dims, rho.partial_trace(&[0])?, rho.partial_trace(&[1])?))
}

/// `1 + ‖ρ_AB‖_q − ‖ρ_A‖_q − ‖ρ_B‖_q`.
pub fn schatten_slack(rho: &DensityMatrix, q: f64) -> Result<f64> {
    let (_, a, b) = marginals(rho)?;
    Ok(1.0 + rho.schatten_norm(q)? - a.schatten_norm(q)? - b.schatten_norm(q)?)
}

/// Smallest slack over all pairs `i, j ≥ 1` of
/// `|⟨X_i⊗Y_j⟩| ≥ √(d_B−1)|⟨X_i⊗I⟩| + √(d_A−1)|⟨I⊗Y_j⟩| − √(d_A−1)√(d_B−1)`.
pub fn elementwise_correlation_slack(
    rho: &DensityMatrix,
    basis_a: &OperatorBasis,
    basis_b: &OperatorBasis,
) -> Result<f64> {
    let c = correlation_tensor(rho, basis_a, basis_b)?;
    let sa = ((c.d_a - 1) as f64).sqrt();
    let sb = ((c.d_b - 1) as f64).sqrt();
    let nb = c.local_b.len();
    let mut worst = f64::INFINITY;
    for (i, a) in c.local_a.iter().enumerate() {
        for (j, b) in c.local_b.iter().enumerate() {
            let slack = c.joint[i * nb + j].abs() - (sb * a.abs() + sa * b.abs() - sa * sb);
            worst = worst.min(slack);
        }
    }
    Ok(worst)
}

/// Slack of `‖C_AB‖_q ≥ √(d_B−1)‖C_A‖_q + √(d_A−1)‖C_B‖_q − √(d_A−1)√(d_B−1)` in the bases
/// adapted to the two marginals.
pub fn tensor_norm_slack(rho: &DensityMatrix, q: f64) -> Result<f64> {
    let (dims, a, b) = marginals(rho)?;
    let c = correlation_tensor(rho, &adapted_basis(&a)?, &adapted_basis(&b)?)?;
    let (na, nb, nab) = c.qnorms(q)?;
    let sa = (dims.da() - 1.0).sqrt();
    let sb = (dims.db() - 1.0).sqrt();
    Ok(nab - (sb * na + sa * nb - sa * sb))
}

/// `|S_L(ρ_AB) − (1 − (1 + ‖C_A‖₂² + ‖C_B‖₂² + ‖C_AB‖₂²)/(d_A d_B))|`.
pub fn linear_entropy_decomposition_defect(
    rho: &DensityMatrix,
    basis_a: &OperatorBasis,
    basis_b: &OperatorBasis,
) -> Result<f64> {
    let c = correlation_tensor(rho, basis_a, basis_b)?;
    let (na, nb, nab) = c.qnorms(2.0)?;
    let d = (c.d_a * c.d_b) as f64;
    Ok((rho.linear_entropy() - (1.0 - (1.0 + na * na + nb * nb + nab * nab) / d)).abs())
}

/// `|h(x, y) − z − ‖C_AB‖₂²/(d_A d_B)|`: the ISA gap is exactly the weight of the
/// correlation block.
pub fn isa_gap_defect(
    rho: &DensityMatrix,
    basis_a: &OperatorBasis,
    basis_b: &OperatorBasis,
) -> Result<f64> {
    let (dims, a, b) = marginals(rho)?;
    let c = correlation_tensor(rho, basis_a, basis_b)?;
    let (_, _, nab) = c.qnorms(2.0)?;
    let h = crate::bounds::isa_h(a.linear_entropy(), b.linear_entropy(), dims)?;
    Ok((h - rho.linear_entropy() - nab * nab / (dims.da() * dims.db())).abs())
}

/// Max-norm error of `(I + Σ b_i X_i)/d` against `ρ`.
pub fn bloch_round_trip_defect(rho: &DensityMatrix, basis: &OperatorBasis) -> Result<f64> {
    let b = bloch_vector(rho, basis)?;
    Ok(basis.reconstruct(&b.components).max_abs_diff(rho.matrix()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::gellmann_basis;
    use crate::density::tests::bell;
    use crate::verify::sampler::{sample_state, substream, Ensemble};

    #[test]
    fn bell_checks() {
        let rho = bell();
        let basis = gellmann_basis(2).unwrap();
        assert!(schatten_slack(&rho, 2.0).unwrap() >= -1e-12);
        assert!(elementwise_correlation_slack(&rho, &basis, &basis).unwrap() >= -1e-12);
        for q in [1.0, 2.0, 3.0] {
            assert!(tensor_norm_slack(&rho, q).unwrap() >= -1e-12);
        }
        assert!(linear_entropy_decomposition_defect(&rho, &basis, &basis).unwrap() < 1e-14);
        assert!(isa_gap_defect(&rho, &basis, &basis).unwrap() < 1e-14);
    }

    #[test]
    fn random_states() {
        for (i, dims) in [[2, 2], [2, 3], [3, 3]].iter().enumerate() {
            let ga = gellmann_basis(dims[0]).unwrap();
            let gb = gellmann_basis(dims[1]).unwrap();
            for k in 0..20 {
                let rho = sample_state(Ensemble::HilbertSchmidt, dims, &mut substream(i as u64, k))
                    .unwrap();
                for q in [1.5, 2.0, 3.0] {
                    assert!(schatten_slack(&rho, q).unwrap() >= -1e-10);
                }
                assert!(elementwise_correlation_slack(&rho, &ga, &gb).unwrap() >= -1e-9);
                for q in [1.0, 2.0, 3.0] {
                    assert!(tensor_norm_slack(&rho, q).unwrap() >= -1e-9);
                }
                assert!(linear_entropy_decomposition_defect(&rho, &ga, &gb).unwrap() < 1e-10);
                assert!(isa_gap_defect(&rho, &ga, &gb).unwrap() < 1e-10);
                assert!(
                    bloch_round_trip_defect(&rho, &gellmann_basis(rho.dim()).unwrap()).unwrap()
                        < 1e-10
                );
            }
        }
    }
}
