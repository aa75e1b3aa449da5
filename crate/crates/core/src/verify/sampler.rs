//! Random states for the verification campaigns.
//!
//! Each sample draws from its own ChaCha8 stream, keyed by the master seed and the sample
//! index, so a campaign's output does not depend on how samples are spread over workers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::matrix::{vector_norm, ComplexMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "rank")]
pub enum Ensemble {
    /// `G G†/Tr(G G†)` with `G` a square complex Ginibre matrix.
    HilbertSchmidt,
    /// Normalised complex Gaussian vectors.
    Pure,
    /// `G G†/Tr` with `G` of shape `d × k`.
    Rank(usize),
}

impl std::str::FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hs" | "hilbert-schmidt" => Ok(Ensemble::HilbertSchmidt),
            "pure" => Ok(Ensemble::Pure),
            other => match other.strip_prefix("rank") {
                Some(k) => k
                    .trim_start_matches(['-', ':'])
                    .parse()
                    .map(Ensemble::Rank)
                    .map_err(|_| Error::parameter(format!("bad rank in ensemble `{other}`"))),
                None => Err(Error::parameter(format!(
                    "unknown ensemble `{other}` (expected hs, pure or rank-K)"
                ))),
            },
        }
    }
}

impl std::fmt::Display for Ensemble {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ensemble::HilbertSchmidt => f.write_str("hs"),
            Ensemble::Pure => f.write_str("pure"),
            Ensemble::Rank(k) => write!(f, "rank-{k}"),
        }
    }
}

/// The generator for sample `index` of a campaign seeded with `seed`.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre_state(d: usize, k: usize, dims: &[usize], rng: &mut impl Rng) -> Result<DensityMatrix> {
    let g = ComplexMatrix::new(d, k, (0..d * k).map(|_| gaussian(rng)).collect())?;
    let w = g.matmul(&g.adjoint()).hermitian_part();
    let t = w.trace().re;
    DensityMatrix::new(w.scale(1.0 / t), dims)
}

/// Hilbert–Schmidt random state on a single `d`-dimensional system.
pub fn sample_hs_state(d: usize, rng: &mut impl Rng) -> Result<DensityMatrix> {
    check_dims(&[d])?;
    ginibre_state(d, d, &[d], rng)
}

/// Random pure state on `d_A × d_B`.
pub fn sample_pure_bipartite(d_a: usize, d_b: usize, rng: &mut impl Rng) -> Result<DensityMatrix> {
    sample_state(Ensemble::Pure, &[d_a, d_b], rng)
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(Error::parameter(format!(
            "sampling needs subsystem dimensions >= 2, got {dims:?}"
        )));
    }
    Ok(())
}

/// A random state from `ensemble` on the product space `dims`.
pub fn sample_state(
    ensemble: Ensemble,
    dims: &[usize],
    rng: &mut impl Rng,
) -> Result<DensityMatrix> {
    check_dims(dims)?;
    let d: usize = dims.iter().product();
    match ensemble {
        Ensemble::HilbertSchmidt => ginibre_state(d, d, dims, rng),
        Ensemble::Rank(k) => {
            if k == 0 || k > d {
                return Err(Error::parameter(format!("rank {k} outside 1..={d}")));
            }
            ginibre_state(d, k, dims, rng)
        }
        Ensemble::Pure => {
            let v: Vec<C64> = (0..d).map(|_| gaussian(rng)).collect();
            let n = vector_norm(&v);
            let v: Vec<C64> = v.into_iter().map(|z| z / n).collect();
            DensityMatrix::from_pure(&v, dims)
        }
    }
}
