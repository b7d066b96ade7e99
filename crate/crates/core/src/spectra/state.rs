use nalgebra::DMatrix;
use num_complex::Complex;

use super::SchmidtSpectrum;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Pure state on an n×n system, stored as its row-major amplitude matrix
/// `ψ = Σ_{ij} M_ij |i⟩|j⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState<T> {
    dim: usize,
    amplitudes: Vec<Complex<T>>,
}

impl<T: Scalar> BipartiteState<T> {
    /// Accepts a square matrix whose Frobenius norm is within 1e-6 of one,
    /// rescaling away the residual drift.
    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Dimension("amplitude matrix is empty".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::Dimension(format!(
                "amplitude matrix is not square: {} rows, row of length {}",
                dim,
                bad.len()
            )));
        }
        let amplitudes: Vec<Complex<T>> = rows.into_iter().flatten().collect();
        Self::from_flat(dim, amplitudes)
    }

    fn from_flat(dim: usize, mut amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Validation("amplitudes must be finite".into()));
        }
        let norm_sq: T = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        let norm = norm_sq.sqrt();
        if (norm - T::one()).abs() > T::lit(1e-6) {
            return Err(Error::NotNormalized {
                sum: norm_sq.to_f64().unwrap_or(f64::NAN),
            });
        }
        for z in amplitudes.iter_mut() {
            *z = *z / norm;
        }
        Ok(Self { dim, amplitudes })
    }

    /// The Schmidt-diagonal state `Σ √p_i |i⟩|i⟩`.
    pub fn from_spectrum(s: &SchmidtSpectrum<T>) -> Self {
        let dim = s.len();
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for (i, p) in s.probs().iter().enumerate() {
            amplitudes[i * dim + i] = Complex::new(p.sqrt(), T::zero());
        }
        Self { dim, amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitude(&self, row: usize, col: usize) -> Complex<T> {
        self.amplitudes[row * self.dim + col]
    }

    pub fn rows(&self) -> Vec<Vec<Complex<T>>> {
        self.amplitudes.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    /// Amplitude matrix in double precision.
    pub fn to_matrix(&self) -> DMatrix<Complex<f64>> {
        DMatrix::from_row_iterator(
            self.dim,
            self.dim,
            self.amplitudes.iter().map(|z| {
                Complex::new(
                    z.re.to_f64().unwrap_or(f64::NAN),
                    z.im.to_f64().unwrap_or(f64::NAN),
                )
            }),
        )
    }

    pub fn from_matrix(m: &DMatrix<Complex<f64>>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension(format!(
                "amplitude matrix is {}x{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        let dim = m.nrows();
        let mut flat = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let z = m[(i, j)];
                flat.push(Complex::new(T::lit(z.re), T::lit(z.im)));
            }
        }
        Self::from_flat(dim, flat)
    }
}

/// Squared singular values of the amplitude matrix, sorted nonincreasing.
///
/// The decomposition always runs in `f64`; single-precision states are
/// widened first.
pub fn schmidt_spectrum<T: Scalar>(state: &BipartiteState<T>) -> Result<SchmidtSpectrum<T>> {
    let sv = state.to_matrix().singular_values();
    let weights = sv.iter().map(|s| T::lit(s * s)).collect();
    SchmidtSpectrum::new(weights)
}
