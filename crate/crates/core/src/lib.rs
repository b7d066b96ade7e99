//! Optimal approximate (faithful) LOCC conversion between bipartite pure
//! states.
//!
//! Given the Schmidt spectra of an initial state ψ and a target φ, the
//! [`faithful`] module builds the most faithful state ξ reachable from ψ with
//! certainty and the fidelity `|⟨ξ|φ⟩|²`. The spectrum algebra is generic over
//! [`Scalar`] (`f32`, `f64`); the aliases below fix the common `f64` case.
//!
//! ```
//! use loccxform::{optimal_fidelity, Spectrum};
//!
//! let psi = Spectrum::new(vec![0.8, 0.2]).unwrap();
//! let bell = Spectrum::uniform(2).unwrap();
//! let report = optimal_fidelity(&psi, &bell).unwrap();
//! assert!((report.f_opt - 0.9).abs() < 1e-12);
//! ```

pub mod applications;
pub mod error;
pub mod faithful;
pub mod io;
pub mod majorization;
pub mod oracle;
pub mod scalar;
pub mod spectra;

pub use applications::{
    catalysis_check, concentration_fidelity, dilution_fidelity, nonlocal_fidelity,
    nonlocal_trace_distance, robustness_interval, robustness_of_entanglement,
    teleportation_fidelity, CatalysisReport, RobustnessInterval,
};
pub use error::{Error, Result};
pub use faithful::{build_staircase, optimal_fidelity, optimal_state, Segment, Staircase, TransformReport};
pub use majorization::{conclusive_probability, majorizes, weak_submajorizes, ConvertibilityVerdict};
pub use scalar::Scalar;
pub use spectra::{
    aligned_fidelity, monotones, schmidt_spectrum, tensor, trace_distance_from_fidelity,
    BipartiteState, MonotoneProfile, SchmidtSpectrum,
};

pub type Spectrum = SchmidtSpectrum<f64>;
pub type Spectrum32 = SchmidtSpectrum<f32>;
pub type State = BipartiteState<f64>;
pub type Report = TransformReport<f64>;
pub type Report32 = TransformReport<f32>;
