use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat};

/// An N x T matrix of node values over one period. Signal-domain data is
/// real; spectra are complex. Vectorization stacks columns: entry (n,t)
/// maps to index t*N + n.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalGraphSignal {
    values: CMat,
}

impl TemporalGraphSignal {
    pub fn new(values: CMat) -> Self {
        TemporalGraphSignal { values }
    }

    pub fn from_real(values: Array2<f64>) -> Self {
        TemporalGraphSignal {
            values: linalg::to_complex(&values.view()),
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.values.nrows()
    }

    pub fn period(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &CMat {
        &self.values
    }

    pub fn into_values(self) -> CMat {
        self.values
    }

    /// Real part, failing if any imaginary component exceeds `tol`.
    pub fn to_real(&self, tol: f64) -> Result<Array2<f64>> {
        let worst = linalg::max_imag(&self.values);
        if worst > tol {
            return Err(Error::InvalidArgument(format!(
                "signal is not real: max imaginary magnitude {worst:.3e}"
            )));
        }
        Ok(linalg::real_part(&self.values))
    }

    pub fn frobenius_norm(&self) -> f64 {
        linalg::frobenius(&self.values)
    }

    pub fn get(&self, node: usize, time: usize) -> Complex64 {
        self.values[[node, time]]
    }
}
