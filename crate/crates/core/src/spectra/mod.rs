//! Schmidt spectra and the pure-state formulas built on them.
//!
//! A [`SchmidtSpectrum`] is the sorted vector of squared Schmidt coefficients
//! of a bipartite pure state. Every quantity in this crate depends only on
//! the spectrum as a multiset, so the sort order among equal entries is
//! irrelevant. Spectra of different lengths are compared by padding the
//! shorter one with zeros.

mod state;

pub use state::{schmidt_spectrum, BipartiteState};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sorted (nonincreasing), nonnegative, normalized probability vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchmidtSpectrum<T> {
    probs: Vec<T>,
    #[serde(skip)]
    reordered: bool,
}

impl<T: Scalar> SchmidtSpectrum<T> {
    /// Validates and normalizes `probs`.
    ///
    /// Unsorted input is accepted and sorted; [`was_reordered`](Self::was_reordered)
    /// reports when that happened. A total that misses 1 by more than
    /// [`Scalar::normalization_slack`] is rejected, smaller drift is divided out.
    pub fn new(probs: Vec<T>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Dimension("spectrum must have at least one entry".into()));
        }
        let mut probs = probs;
        for p in probs.iter_mut() {
            if !p.is_finite() {
                return Err(Error::Validation("spectrum entries must be finite".into()));
            }
            if *p < T::zero() {
                if *p < -T::partial_sum_tol() {
                    return Err(Error::Validation(format!(
                        "negative Schmidt weight {}",
                        p.to_f64().unwrap_or(f64::NAN)
                    )));
                }
                *p = T::zero();
            }
        }
        let sum: T = probs.iter().copied().sum();
        if (sum - T::one()).abs() > T::normalization_slack() {
            return Err(Error::NotNormalized {
                sum: sum.to_f64().unwrap_or(f64::NAN),
            });
        }
        for p in probs.iter_mut() {
            *p = *p / sum;
        }
        let reordered = probs.windows(2).any(|w| w[0] < w[1]);
        if reordered {
            sort_desc(&mut probs);
        }
        Ok(Self { probs, reordered })
    }

    /// Builds a spectrum from weights that only need sorting and renormalizing.
    pub(crate) fn from_weights(mut probs: Vec<T>) -> Self {
        for p in probs.iter_mut() {
            if *p < T::zero() {
                *p = T::zero();
            }
        }
        let sum: T = probs.iter().copied().sum();
        if sum > T::zero() {
            for p in probs.iter_mut() {
                *p = *p / sum;
            }
        }
        sort_desc(&mut probs);
        Self {
            probs,
            reordered: false,
        }
    }

    /// The maximally entangled `n`-state spectrum (1/n, …, 1/n).
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("uniform spectrum needs n >= 1".into()));
        }
        let w = T::one() / T::lit(n as f64);
        Ok(Self {
            probs: vec![w; n],
            reordered: false,
        })
    }

    /// A product state padded to length `n`.
    pub fn product(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Dimension("product spectrum needs n >= 1".into()));
        }
        let mut probs = vec![T::zero(); n];
        probs[0] = T::one();
        Ok(Self {
            probs,
            reordered: false,
        })
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// True when the input given to [`new`](Self::new) was not already sorted.
    pub fn was_reordered(&self) -> bool {
        self.reordered
    }

    /// Number of strictly positive entries (the Schmidt rank).
    pub fn nonzero_count(&self) -> usize {
        self.probs.iter().take_while(|p| **p > T::zero()).count()
    }

    /// Copy zero-padded to length `n`; never truncates.
    pub fn padded(&self, n: usize) -> Self {
        let mut probs = self.probs.clone();
        if n > probs.len() {
            probs.resize(n, T::zero());
        }
        Self {
            probs,
            reordered: self.reordered,
        }
    }

    /// Copy with trailing zeros removed (at least one entry is kept).
    pub fn trimmed(&self) -> Self {
        let k = self.nonzero_count().max(1);
        Self {
            probs: self.probs[..k].to_vec(),
            reordered: self.reordered,
        }
    }

    pub fn monotones(&self) -> MonotoneProfile<T> {
        monotones(self)
    }

    /// Elementwise comparison after zero padding.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        let (a, b) = padded_pair(self, other);
        a.iter().zip(&b).all(|(x, y)| (*x - *y).abs() <= tol)
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.probs
            .iter()
            .map(|p| p.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

fn sort_desc<T: Scalar>(v: &mut [T]) {
    v.sort_by(|a, b| b.partial_cmp(a).expect("finite spectrum entries"));
}

/// Both spectra as raw vectors zero-padded to a common length.
pub fn padded_pair<T: Scalar>(a: &SchmidtSpectrum<T>, b: &SchmidtSpectrum<T>) -> (Vec<T>, Vec<T>) {
    let n = a.len().max(b.len());
    (a.padded(n).probs, b.padded(n).probs)
}

/// Tail sums `E_l = Σ_{i≥l} p_i` of a spectrum.
///
/// Indices are 1-based in [`at`](Self::at) to match the usual notation; the
/// backing slice is 0-based.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotoneProfile<T> {
    tails: Vec<T>,
}

impl<T: Scalar> MonotoneProfile<T> {
    pub fn tails(&self) -> &[T] {
        &self.tails
    }

    pub fn len(&self) -> usize {
        self.tails.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tails.is_empty()
    }

    /// `E_l` for `l` in `1..=n+1`; `E_{n+1}` and beyond are zero.
    pub fn at(&self, l: usize) -> T {
        assert!(l >= 1, "monotone index is 1-based");
        self.tails.get(l - 1).copied().unwrap_or_else(T::zero)
    }
}

/// Computes `E_l` for `l = 1..n`, summing from the small end.
pub fn monotones<T: Scalar>(s: &SchmidtSpectrum<T>) -> MonotoneProfile<T> {
    tail_sums(&s.probs)
}

pub(crate) fn tail_sums<T: Scalar>(probs: &[T]) -> MonotoneProfile<T> {
    let mut tails = vec![T::zero(); probs.len()];
    let mut acc = T::zero();
    for i in (0..probs.len()).rev() {
        acc = acc + probs[i];
        tails[i] = acc;
    }
    if let Some(first) = tails.first_mut() {
        // the full tail is the normalization, not an accumulated sum
        *first = T::one();
    }
    MonotoneProfile { tails }
}

/// Largest overlap `|⟨τ|(U⊗V)|ω⟩|²` over local unitaries: `(Σ √(τ_i ω_i))²`.
pub fn aligned_fidelity<T: Scalar>(tau: &SchmidtSpectrum<T>, omega: &SchmidtSpectrum<T>) -> T {
    let (a, b) = padded_pair(tau, omega);
    let s: T = a.iter().zip(&b).map(|(x, y)| (*x * *y).sqrt()).sum();
    (s * s).min(T::one())
}

/// Spectrum of the tensor product of two states.
pub fn tensor<T: Scalar>(a: &SchmidtSpectrum<T>, b: &SchmidtSpectrum<T>) -> SchmidtSpectrum<T> {
    let probs = a
        .probs
        .iter()
        .flat_map(|x| b.probs.iter().map(move |y| *x * *y))
        .collect();
    SchmidtSpectrum::from_weights(probs)
}

/// Pure-state trace distance `2√(1−F)`.
pub fn trace_distance_from_fidelity<T: Scalar>(f: T) -> Result<T> {
    if !f.is_finite() || f < -T::range_tol() || f > T::one() + T::range_tol() {
        return Err(Error::Range {
            what: "fidelity",
            value: f.to_f64().unwrap_or(f64::NAN),
        });
    }
    let f = f.max(T::zero()).min(T::one());
    Ok(T::lit(2.0) * (T::one() - f).sqrt())
}
