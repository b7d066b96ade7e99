//! Most faithful deterministic conversion ψ → ξ ≈ φ.
//!
//! The optimal final state is built from a *staircase*: the target spectrum
//! β is cut into contiguous blocks `[l_j, l_{j-1})`, and each block is
//! rescaled by the ratio `r_j` of the initial to target weight it carries.
//! Block boundaries come from repeatedly minimizing the ratio of tail sums
//! `(E_l(ψ) − E_{l_j}(ψ)) / (E_l(φ) − E_{l_j}(φ))`, starting from the full
//! tails and moving toward index 1. The resulting ξ is reachable from ψ with
//! certainty and its fidelity with φ is `(Σ_j √(A_j B_j))²`, where `A_j`, `B_j`
//! are the initial and target weights of block `j`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::majorization::{conclusive_probability, majorizes};
use crate::scalar::Scalar;
use crate::spectra::{padded_pair, trace_distance_from_fidelity, SchmidtSpectrum};

/// One block of the staircase. `l` is the 1-based first index of the block.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Segment<T> {
    pub l: usize,
    pub r: T,
    #[serde(rename = "A")]
    pub a: T,
    #[serde(rename = "B")]
    pub b: T,
}

/// Blocks ordered from the tail (`j = 1`, largest `l`) to the head (`l = 1`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Staircase<T> {
    segments: Vec<Segment<T>>,
    /// Working dimension: the larger Schmidt rank of the two states.
    dim: usize,
}

impl<T: Scalar> Staircase<T> {
    pub fn segments(&self) -> &[Segment<T>] {
        &self.segments
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(Σ_j √(A_j B_j))²`.
    pub fn fidelity(&self) -> T {
        let s: T = self.segments.iter().map(|g| (g.a * g.b).sqrt()).sum();
        (s * s).max(T::zero()).min(T::one())
    }

    /// 0-based half-open index range covered by each segment.
    fn ranges(&self) -> impl Iterator<Item = (usize, usize, &Segment<T>)> {
        let mut end = self.dim;
        self.segments.iter().map(move |seg| {
            let start = seg.l - 1;
            let out = (start, end, seg);
            end = start;
            out
        })
    }
}

/// Builds the staircase for ψ → φ.
///
/// Trailing indices where both spectra vanish are dropped first. Candidate
/// indices whose target block weight is zero are skipped, and among ratios
/// that tie within [`Scalar::ratio_tol`] the smallest index wins.
pub fn build_staircase<T: Scalar>(
    alpha: &SchmidtSpectrum<T>,
    beta: &SchmidtSpectrum<T>,
) -> Result<Staircase<T>> {
    let (a, b) = padded_pair(alpha, beta);
    if b.first().is_none_or(|x| *x <= T::zero()) {
        return Err(Error::Validation("target spectrum is identically zero".into()));
    }
    let dim = alpha.nonzero_count().max(beta.nonzero_count());
    let (a, b) = (&a[..dim], &b[..dim]);

    let mut segments = Vec::new();
    let mut end = dim;
    // E_end of both spectra
    let (mut tail_a, mut tail_b) = (T::zero(), T::zero());
    while end > 0 {
        // block weights Σ_{i=s}^{end-1}; the head block uses normalization
        // so that a single full block is exactly (1, 1)
        let mut blocks = Vec::with_capacity(end);
        let (mut num, mut den) = (T::zero(), T::zero());
        for s in (1..end).rev() {
            num = num + a[s];
            den = den + b[s];
            blocks.push((s, num, den));
        }
        blocks.push((0, T::one() - tail_a, T::one() - tail_b));
        blocks.reverse();
        let best = blocks
            .iter()
            .filter(|(_, _, d)| *d > T::zero())
            .map(|(_, n, d)| *n / *d)
            .fold(T::infinity(), T::min);
        if !best.is_finite() {
            return Err(Error::Validation(
                "no admissible staircase step: target weight vanishes on the remaining block".into(),
            ));
        }
        let cutoff = best + T::ratio_tol() * best.abs().max(T::one());
        let (start, num, den) = blocks
            .into_iter()
            .find(|(_, n, d)| *d > T::zero() && *n / *d <= cutoff)
            .expect("minimizer exists");
        segments.push(Segment {
            l: start + 1,
            r: num / den,
            a: num,
            b: den,
        });
        tail_a = tail_a + num;
        tail_b = tail_b + den;
        end = start;
    }
    Ok(Staircase { segments, dim })
}

/// The optimal target-approximating spectrum ξ: `γ_i = r_j β_i` on block `j`,
/// zero-padded back to the common input length.
pub fn optimal_state<T: Scalar>(
    alpha: &SchmidtSpectrum<T>,
    beta: &SchmidtSpectrum<T>,
) -> Result<SchmidtSpectrum<T>> {
    let stairs = build_staircase(alpha, beta)?;
    Ok(state_from_staircase(&stairs, beta, alpha.len().max(beta.len())))
}

fn state_from_staircase<T: Scalar>(
    stairs: &Staircase<T>,
    beta: &SchmidtSpectrum<T>,
    len: usize,
) -> SchmidtSpectrum<T> {
    let b = beta.padded(len);
    let mut gamma = vec![T::zero(); len];
    for (start, end, seg) in stairs.ranges() {
        for (g, &bi) in gamma[start..end].iter_mut().zip(&b.probs()[start..end]) {
            *g = seg.r * bi;
        }
    }
    SchmidtSpectrum::from_weights(gamma)
}

/// Everything known about the conversion ψ → φ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransformReport<T> {
    pub f_opt: T,
    pub xi: SchmidtSpectrum<T>,
    pub trace_distance: T,
    pub conclusive_p: T,
    pub deterministic: bool,
    pub staircase: Staircase<T>,
    /// Set when either input spectrum had to be sorted.
    pub input_reordered: bool,
}

/// Optimal fidelity of ψ → φ together with ξ, the staircase, the
/// conclusive probability and the trace distance `2√(1−F)`.
pub fn optimal_fidelity<T: Scalar>(
    alpha: &SchmidtSpectrum<T>,
    beta: &SchmidtSpectrum<T>,
) -> Result<TransformReport<T>> {
    let staircase = build_staircase(alpha, beta)?;
    let xi = state_from_staircase(&staircase, beta, alpha.len().max(beta.len()));
    let f_opt = staircase.fidelity();
    Ok(TransformReport {
        f_opt,
        trace_distance: trace_distance_from_fidelity(f_opt)?,
        conclusive_p: conclusive_probability(alpha, beta),
        deterministic: majorizes(alpha, beta).deterministic,
        xi,
        staircase,
        input_reordered: alpha.was_reordered() || beta.was_reordered(),
    })
}
