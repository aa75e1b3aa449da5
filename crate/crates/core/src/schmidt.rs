//! Schmidt decomposition of bipartite pure states.
//!
//! The coefficient matrix `M[a][b] = <a b|ψ>` is factorised with a one-sided (Hestenes)
//! Jacobi SVD, which keeps the singular vectors orthonormal to working precision even when
//! the Schmidt coefficients are tiny.

use crate::error::{Error, Result};
use crate::matrix::{inner, vector_norm, C64, ZERO};

const MAX_SWEEPS: usize = 100;
const ORTHOGONALITY_TOL: f64 = 1e-15;
/// Singular values at or below this are treated as zero and their left vectors completed.
const NULL_TOL: f64 = 1e-13;

/// `|ψ> = Σ c_i |X_i>⊗|Y_i>` with `c` sorted descending.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<Vec<C64>>,
    pub right_basis: Vec<Vec<C64>>,
}

impl SchmidtDecomposition {
    pub fn rank(&self, tol: f64) -> usize {
        self.coefficients.iter().filter(|&&c| c > tol).count()
    }

    pub fn reconstruct(&self) -> Vec<C64> {
        let da = self.left_basis.first().map_or(0, Vec::len);
        let db = self.right_basis.first().map_or(0, Vec::len);
        let mut v = vec![ZERO; da * db];
        for ((c, x), y) in self
            .coefficients
            .iter()
            .zip(&self.left_basis)
            .zip(&self.right_basis)
        {
            for a in 0..da {
                for b in 0..db {
                    v[a * db + b] += x[a] * y[b] * *c;
                }
            }
        }
        v
    }
}

pub fn schmidt_decompose(v: &[C64], d_a: usize, d_b: usize) -> Result<SchmidtDecomposition> {
    if v.len() != d_a * d_b {
        return Err(Error::structure(format!(
            "vector of length {} is not on a {d_a}x{d_b} space",
            v.len()
        )));
    }
    let norm = vector_norm(v);
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::parameter(format!("state vector has norm {norm}")));
    }

    // columns of the tall orientation: d_a >= d_b works on M, otherwise on Mᵀ
    let transposed = d_a < d_b;
    let (rows, cols) = if transposed { (d_b, d_a) } else { (d_a, d_b) };
    let mut w: Vec<Vec<C64>> = (0..cols)
        .map(|j| {
            (0..rows)
                .map(|i| {
                    if transposed {
                        v[j * d_b + i]
                    } else {
                        v[i * d_b + j]
                    }
                })
                .collect()
        })
        .collect();
    let mut vmat: Vec<Vec<C64>> = (0..cols)
        .map(|j| {
            let mut e = vec![ZERO; cols];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    one_sided_jacobi(&mut w, &mut vmat)?;

    let mut order: Vec<(usize, f64)> = w.iter().map(|col| vector_norm(col)).enumerate().collect();
    order.sort_by(|a, b| b.1.total_cmp(&a.1));

    let mut coefficients = Vec::with_capacity(cols);
    let mut tall = Vec::with_capacity(cols);
    let mut short = Vec::with_capacity(cols);
    for &(j, sigma) in &order {
        if sigma > NULL_TOL {
            tall.push(w[j].iter().map(|z| z / sigma).collect::<Vec<_>>());
            coefficients.push(sigma);
        } else {
            tall.push(complete_orthonormal(&tall, rows));
            coefficients.push(0.0);
        }
        // column j of V, conjugated
        short.push(vmat[j].iter().map(|z| z.conj()).collect::<Vec<_>>());
    }

    let (left_basis, right_basis) = if transposed {
        (short, tall)
    } else {
        (tall, short)
    };
    Ok(SchmidtDecomposition {
        coefficients,
        left_basis,
        right_basis,
    })
}

/// Orthogonalises the columns `w` in place, accumulating the rotations in `v`
/// (both stored column-major as `Vec` of columns).
fn one_sided_jacobi(w: &mut [Vec<C64>], v: &mut [Vec<C64>]) -> Result<()> {
    let n = w.len();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = w[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = inner(&w[p], &w[q]);
                let mag = gamma.norm();
                if mag <= ORTHOGONALITY_TOL * (alpha * beta).sqrt() || mag < f64::MIN_POSITIVE {
                    continue;
                }
                rotated = true;
                let phase = gamma / mag;
                let tau = (beta - alpha) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let u_pp = C64::new(c, 0.0);
                let u_pq = C64::new(s, 0.0);
                let u_qp = -phase.conj() * s;
                let u_qq = phase.conj() * c;
                for cols in [&mut *w, &mut *v] {
                    let (left, right) = cols.split_at_mut(q);
                    let (cp, cq) = (&mut left[p], &mut right[0]);
                    for (xp, xq) in cp.iter_mut().zip(cq.iter_mut()) {
                        let (a, b) = (*xp, *xq);
                        *xp = a * u_pp + b * u_qp;
                        *xq = a * u_pq + b * u_qq;
                    }
                }
            }
        }
        if !rotated {
            return Ok(());
        }
    }
    Err(Error::numerical(format!(
        "one-sided Jacobi SVD did not converge in {MAX_SWEEPS} sweeps"
    )))
}

/// A unit vector orthogonal to every vector in `basis`, taken from the computational basis.
fn complete_orthonormal(basis: &[Vec<C64>], len: usize) -> Vec<C64> {
    let mut best: Option<(f64, Vec<C64>)> = None;
    for k in 0..len {
        let mut e = vec![ZERO; len];
        e[k] = C64::new(1.0, 0.0);
        for _ in 0..2 {
            for b in basis {
                let proj = inner(b, &e);
                for (x, y) in e.iter_mut().zip(b) {
                    *x -= proj * y;
                }
            }
        }
        let n = vector_norm(&e);
        if best.as_ref().is_none_or(|(bn, _)| n > *bn) {
            best = Some((n, e));
        }
    }
    let (n, e) = best.expect("completion needs a non-empty space");
    e.into_iter().map(|z| z / n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::DensityMatrix;
    use crate::matrix::kron_vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_unit(len: usize, seed: u64) -> Vec<C64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<C64> = (0..len)
            .map(|_| {
                C64::new(
                    StandardNormal.sample(&mut rng),
                    StandardNormal.sample(&mut rng),
                )
            })
            .collect();
        let n = vector_norm(&v);
        v.into_iter().map(|z| z / n).collect()
    }

    fn max_diff(a: &[C64], b: &[C64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    fn orthonormality_defect(basis: &[Vec<C64>]) -> f64 {
        let mut worst = 0.0_f64;
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((inner(a, b) - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    #[test]
    fn bell_coefficients() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = [C64::new(s, 0.0), ZERO, ZERO, C64::new(s, 0.0)];
        let sd = schmidt_decompose(&bell, 2, 2).unwrap();
        for c in &sd.coefficients {
            assert!((c - s).abs() < 1e-14);
        }
        assert!(max_diff(&sd.reconstruct(), &bell) < 1e-14);
    }

    #[test]
    fn product_vector_has_rank_one() {
        let a = random_unit(3, 1);
        let b = random_unit(2, 2);
        let v = kron_vec(&a, &b);
        let sd = schmidt_decompose(&v, 3, 2).unwrap();
        assert!((sd.coefficients[0] - 1.0).abs() < 1e-12);
        assert!(sd.coefficients[1].abs() < 1e-12);
        assert_eq!(sd.rank(1e-10), 1);
        assert!(max_diff(&sd.reconstruct(), &v) < 1e-12);
        assert!(orthonormality_defect(&sd.left_basis) < 1e-10);
        assert!(orthonormality_defect(&sd.right_basis) < 1e-10);
    }

    #[test]
    fn random_3x4_round_trip() {
        for seed in 0..20 {
            let v = random_unit(12, seed);
            let sd = schmidt_decompose(&v, 3, 4).unwrap();
            assert_eq!(sd.coefficients.len(), 3);
            assert!(max_diff(&sd.reconstruct(), &v) <= 1e-10);
            let total: f64 = sd.coefficients.iter().map(|c| c * c).sum();
            assert!((total - 1.0).abs() < 1e-12);
            assert!(sd.coefficients.windows(2).all(|w| w[0] >= w[1]));
            assert!(orthonormality_defect(&sd.left_basis) < 1e-10);
            assert!(orthonormality_defect(&sd.right_basis) < 1e-10);
        }
    }

    #[test]
    fn wide_and_tall_orientations_agree() {
        let v = random_unit(12, 42);
        let tall = schmidt_decompose(&v, 4, 3).unwrap();
        let wide = schmidt_decompose(&v, 3, 4).unwrap();
        assert!(max_diff(&tall.reconstruct(), &v) <= 1e-10);
        assert!(max_diff(&wide.reconstruct(), &v) <= 1e-10);
    }

    #[test]
    fn marginal_entropies_match() {
        for seed in 0..10 {
            let v = random_unit(12, 100 + seed);
            let rho = DensityMatrix::from_pure(&v, &[3, 4]).unwrap();
            let sa = rho.partial_trace(&[0]).unwrap().linear_entropy();
            let sb = rho.partial_trace(&[1]).unwrap().linear_entropy();
            assert!((sa - sb).abs() <= 1e-10);
            let sd = schmidt_decompose(&v, 3, 4).unwrap();
            let from_coeffs = 1.0 - sd.coefficients.iter().map(|c| c.powi(4)).sum::<f64>();
            assert!((sa - from_coeffs).abs() <= 1e-10);
        }
    }

    #[test]
    fn rejects_unnormalised_and_misshaped() {
        let v = vec![C64::new(1.0, 0.0); 4];
        assert!(matches!(
            schmidt_decompose(&v, 2, 2),
            Err(Error::Parameter(_))
        ));
        assert!(matches!(
            schmidt_decompose(&v, 2, 3),
            Err(Error::Structure(_))
        ));
    }
}
