//! Quantities derived from the optimal conversion: concentration and
//! teleportation fidelities, finite dilution, catalysis, noise robustness
//! and the non-local metric on Schmidt spectra.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::faithful::optimal_fidelity;
use crate::majorization::majorizes;
use crate::scalar::Scalar;
use crate::spectra::{tensor, trace_distance_from_fidelity, SchmidtSpectrum};

fn check_target_dim<T: Scalar>(alpha: &SchmidtSpectrum<T>, n: usize) -> Result<()> {
    if n == 0 || n < alpha.nonzero_count() {
        return Err(Error::Dimension(format!(
            "target n-state dimension {} is smaller than Schmidt rank {}",
            n,
            alpha.nonzero_count()
        )));
    }
    Ok(())
}

fn root_sum_sq<T: Scalar>(alpha: &SchmidtSpectrum<T>) -> T {
    let s: T = alpha.probs().iter().map(|p| p.sqrt()).sum();
    s * s
}

/// Best fidelity with the maximally entangled `n`-state, `(Σ √α_i)² / n`.
/// Reached by local unitaries alone.
pub fn concentration_fidelity<T: Scalar>(alpha: &SchmidtSpectrum<T>, n: usize) -> Result<T> {
    check_target_dim(alpha, n)?;
    Ok((root_sum_sq(alpha) / T::lit(n as f64)).min(T::one()))
}

/// Robustness of entanglement of a pure state, `n·F_max − 1`.
pub fn robustness_of_entanglement<T: Scalar>(alpha: &SchmidtSpectrum<T>, n: usize) -> Result<T> {
    let f = concentration_fidelity(alpha, n)?;
    Ok((T::lit(n as f64) * f - T::one()).max(T::zero()))
}

/// Optimal teleportation fidelity through the shared state,
/// `((Σ √α_i)² + 1) / (n + 1)`.
pub fn teleportation_fidelity<T: Scalar>(alpha: &SchmidtSpectrum<T>, n: usize) -> Result<T> {
    let f = concentration_fidelity(alpha, n)?;
    let n = T::lit(n as f64);
    Ok((f * n + T::one()) / (n + T::one()))
}

/// Fidelity and optimal output when diluting an `m`-state into φ: keep the
/// `m` largest target weights and renormalize.
pub fn dilution_fidelity<T: Scalar>(
    m: usize,
    beta: &SchmidtSpectrum<T>,
) -> Result<(T, SchmidtSpectrum<T>)> {
    if m == 0 {
        return Err(Error::Range {
            what: "m",
            value: 0.0,
        });
    }
    if m >= beta.nonzero_count() {
        return Ok((T::one(), beta.clone()));
    }
    let kept: T = beta.probs()[..m].iter().copied().sum();
    let mut xi = vec![T::zero(); beta.len()];
    for (dst, src) in xi.iter_mut().zip(&beta.probs()[..m]) {
        *dst = *src / kept;
    }
    Ok((kept, SchmidtSpectrum::from_weights(xi)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalysisReport<T> {
    pub convertible_bare: bool,
    pub convertible_with_catalyst: bool,
    /// `T(ψ→φ) − T(ψ⊗η → φ⊗η)`.
    pub delta_t: T,
    /// Largest input noise (trace distance to ψ⊗η) under which the catalyst
    /// still beats the bare conversion. Equal to `delta_t`.
    pub noise_threshold: T,
    pub trace_distance_bare: T,
    pub trace_distance_catalyzed: T,
}

impl<T: Scalar> CatalysisReport<T> {
    /// Whether input noise of size `epsilon` provably leaves an advantage.
    pub fn survives_noise(&self, epsilon: T) -> bool {
        epsilon < self.noise_threshold
    }
}

pub fn catalysis_check<T: Scalar>(
    alpha: &SchmidtSpectrum<T>,
    beta: &SchmidtSpectrum<T>,
    eta: &SchmidtSpectrum<T>,
) -> Result<CatalysisReport<T>> {
    let (ae, be) = (tensor(alpha, eta), tensor(beta, eta));
    let bare = optimal_fidelity(alpha, beta)?;
    let cat = optimal_fidelity(&ae, &be)?;
    let delta_t = bare.trace_distance - cat.trace_distance;
    Ok(CatalysisReport {
        convertible_bare: majorizes(alpha, beta).deterministic,
        convertible_with_catalyst: majorizes(&ae, &be).deterministic,
        delta_t,
        noise_threshold: delta_t,
        trace_distance_bare: bare.trace_distance,
        trace_distance_catalyzed: cat.trace_distance,
    })
}

/// Bounds on the best trace distance to φ reachable from a noisy ψ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RobustnessInterval<T> {
    pub lower: T,
    pub upper: T,
}

/// `[T_opt − ε, T_opt + ε] ∩ [0, 2]`, where `ε` is the trace distance of the
/// actual (possibly mixed) input from ψ.
pub fn robustness_interval<T: Scalar>(
    alpha: &SchmidtSpectrum<T>,
    beta: &SchmidtSpectrum<T>,
    epsilon: T,
) -> Result<RobustnessInterval<T>> {
    let two = T::lit(2.0);
    if !epsilon.is_finite() || epsilon < T::zero() || epsilon > two {
        return Err(Error::Range {
            what: "epsilon",
            value: epsilon.to_f64().unwrap_or(f64::NAN),
        });
    }
    let t_opt = optimal_fidelity(alpha, beta)?.trace_distance;
    Ok(RobustnessInterval {
        lower: (t_opt - epsilon).max(T::zero()),
        upper: (t_opt + epsilon).min(two),
    })
}

/// `min(F(a→b), F(b→a))`.
pub fn nonlocal_fidelity<T: Scalar>(a: &SchmidtSpectrum<T>, b: &SchmidtSpectrum<T>) -> Result<T> {
    let ab = optimal_fidelity(a, b)?.f_opt;
    let ba = optimal_fidelity(b, a)?.f_opt;
    Ok(ab.min(ba))
}

/// `2√(1 − F_nl)`, a metric on Schmidt spectra.
pub fn nonlocal_trace_distance<T: Scalar>(a: &SchmidtSpectrum<T>, b: &SchmidtSpectrum<T>) -> Result<T> {
    trace_distance_from_fidelity(nonlocal_fidelity(a, b)?)
}
