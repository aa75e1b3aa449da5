//! JSON state files: `{"dims": [dA, dB, ...], "matrix": [[[re, im], ...], ...]}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::density::{DensityMatrix, Tolerances};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_matrix(m: &ComplexMatrix, dims: &[usize]) -> Self {
        let matrix = (0..m.rows())
            .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        Self {
            dims: dims.to_vec(),
            matrix,
        }
    }

    /// Checks the nested shape against `dims` before any numerical validation.
    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.dims.is_empty() {
            return Err(Error::structure("`dims` is empty"));
        }
        let d: usize = self.dims.iter().product();
        if self.matrix.len() != d {
            return Err(Error::structure(format!(
                "dims {:?} need {d} rows, file has {}",
                self.dims,
                self.matrix.len()
            )));
        }
        if let Some((i, row)) = self.matrix.iter().enumerate().find(|(_, r)| r.len() != d) {
            return Err(Error::structure(format!(
                "row {i} has {} entries, expected {d}",
                row.len()
            )));
        }
        let data = self
            .matrix
            .iter()
            .flat_map(|row| row.iter().map(|&[re, im]| C64::new(re, im)))
            .collect();
        ComplexMatrix::new(d, d, data)
    }

    pub fn to_state(&self, tol: &Tolerances) -> Result<DensityMatrix> {
        DensityMatrix::with_tolerances(self.to_matrix()?, &self.dims, tol)
    }
}

impl From<&DensityMatrix> for StateFile {
    fn from(rho: &DensityMatrix) -> Self {
        Self::from_matrix(rho.matrix(), rho.dims())
    }
}

pub fn parse_state(json: &str, tol: &Tolerances) -> Result<DensityMatrix> {
    let file: StateFile = serde_json::from_str(json)?;
    file.to_state(tol)
}

pub fn read_state(path: &Path, tol: &Tolerances) -> Result<DensityMatrix> {
    parse_state(&fs::read_to_string(path)?, tol)
}

pub fn state_to_json(rho: &DensityMatrix) -> Result<String> {
    Ok(serde_json::to_string_pretty(&StateFile::from(rho))?)
}

pub fn write_state(path: &Path, rho: &DensityMatrix) -> Result<()> {
    fs::write(path, state_to_json(rho)? + "\n")?;
    Ok(())
}
