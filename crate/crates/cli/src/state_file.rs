//! JSON density-matrix files: `{"dims": [4, N], "label": …, "re": [[…]], "im": [[…]]}`.

use std::fs;
use std::path::Path;

use eofbound::linalg::{ComplexMatrix, DensityMatrix, DIM_A};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Largest subsystem-B dimension accepted without `--allow-large`.
pub const DEFAULT_MAX_N: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix, label: Option<String>) -> Self {
        let m = rho.matrix();
        let part = |f: fn(&Complex64) -> f64| {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        Self {
            dims: [DIM_A, rho.dim_b()],
            label,
            re: part(|z| z.re),
            im: part(|z| z.im),
        }
    }

    /// Validates shape and the density-matrix invariants.
    pub fn to_density(&self, max_n: usize) -> CliResult<DensityMatrix> {
        let [da, n] = self.dims;
        if da != DIM_A || n == 0 {
            return Err(eofbound::Error::Shape(format!("dims must be [4, N] with N >= 1, got [{da}, {n}]")).into());
        }
        if n > max_n {
            return Err(CliError::Usage(format!(
                "N = {n} exceeds the cap of {max_n}; pass --allow-large to override"
            )));
        }
        let dim = DIM_A * n;
        let shape_ok = |rows: &Vec<Vec<f64>>| rows.len() == dim && rows.iter().all(|r| r.len() == dim);
        if !shape_ok(&self.re) || !shape_ok(&self.im) {
            return Err(eofbound::Error::Shape(format!("re and im must both be {dim}x{dim}")).into());
        }
        let data = self
            .re
            .iter()
            .zip(&self.im)
            .flat_map(|(r, i)| r.iter().zip(i).map(|(&a, &b)| Complex64::new(a, b)))
            .collect();
        let m = ComplexMatrix::from_row_major(dim, dim, data)?;
        Ok(DensityMatrix::new(m, n)?)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::parse(path, e.to_string()))
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self).expect("plain data serialises");
        fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
    }
}

/// Reads a state file and validates it. Above [`DEFAULT_MAX_N`] the state is
/// only accepted with `allow_large`, and then with a warning.
pub fn read_state(path: &Path, allow_large: bool) -> CliResult<(StateFile, DensityMatrix)> {
    let file = StateFile::load(path)?;
    let cap = if allow_large { usize::MAX } else { DEFAULT_MAX_N };
    if allow_large && file.dims[1] > DEFAULT_MAX_N {
        log::warn!(
            "N = {} is above {DEFAULT_MAX_N}; dense eigensolves of size {} will be slow",
            file.dims[1],
            DIM_A * file.dims[1]
        );
    }
    let rho = file.to_density(cap)?;
    Ok((file, rho))
}
