//! Majorization, deterministic convertibility and the optimal conclusive
//! conversion probability.

use serde::Serialize;

use crate::scalar::Scalar;
use crate::spectra::{padded_pair, tail_sums, SchmidtSpectrum};

/// Outcome of the partial-sum test `Σ_{i≤k} α_i ≤ Σ_{i≤k} β_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvertibilityVerdict<T> {
    pub deterministic: bool,
    /// First (1-based) `k` whose partial-sum condition fails.
    pub failing_index: Option<usize>,
    /// `min_k (Σ_{i≤k} β_i − Σ_{i≤k} α_i)`.
    pub margin: T,
}

/// Whether `alpha ≺ beta`, i.e. ψ → φ is possible with certainty.
pub fn majorizes<T: Scalar>(
    alpha: &SchmidtSpectrum<T>,
    beta: &SchmidtSpectrum<T>,
) -> ConvertibilityVerdict<T> {
    let (a, b) = padded_pair(alpha, beta);
    let tol = T::partial_sum_tol();
    let mut sa = T::zero();
    let mut sb = T::zero();
    let mut margin = T::infinity();
    let mut failing_index = None;
    for (k, (x, y)) in a.iter().zip(&b).enumerate() {
        sa = sa + *x;
        sb = sb + *y;
        let gap = sb - sa;
        margin = margin.min(gap);
        if failing_index.is_none() && gap < -tol {
            failing_index = Some(k + 1);
        }
    }
    ConvertibilityVerdict {
        deterministic: failing_index.is_none(),
        failing_index,
        margin,
    }
}

/// Whether `E_l(α) ≥ p·E_l(β)` for every `l` (slack relative to `E_l(β)`), the weak-majorization form
/// of "ψ reaches φ with probability at least `p`".
///
/// The feasible `p` form the interval `[0, conclusive_probability(α, β)]`.
pub fn weak_submajorizes<T: Scalar>(alpha: &SchmidtSpectrum<T>, beta: &SchmidtSpectrum<T>, p: T) -> bool {
    let (a, b) = padded_pair(alpha, beta);
    let ea = tail_sums(&a);
    let eb = tail_sums(&b);
    let tol = T::partial_sum_tol();
    ea.tails()
        .iter()
        .zip(eb.tails())
        .all(|(x, y)| *x + tol * *y >= p * *y)
}

/// Optimal success probability `min_l E_l(ψ)/E_l(φ)` of a conclusive
/// conversion, clamped to `[0, 1]`.
///
/// Indices with `E_l(φ) = 0` impose nothing; `E_l(φ) > 0` with `E_l(ψ) = 0`
/// means φ has larger Schmidt rank and the probability is zero.
pub fn conclusive_probability<T: Scalar>(alpha: &SchmidtSpectrum<T>, beta: &SchmidtSpectrum<T>) -> T {
    let (a, b) = padded_pair(alpha, beta);
    let ea = tail_sums(&a);
    let eb = tail_sums(&b);
    let mut p = T::one();
    for (x, y) in ea.tails().iter().zip(eb.tails()) {
        if *y <= T::zero() {
            continue;
        }
        if *x <= T::zero() {
            return T::zero();
        }
        p = p.min(*x / *y);
    }
    p.max(T::zero())
}
