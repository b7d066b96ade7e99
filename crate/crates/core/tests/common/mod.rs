#![allow(dead_code)]

use loccxform::{State, Spectrum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

/// Uniform point on the simplex, sorted.
pub fn random_spectrum<R: Rng>(rng: &mut R, n: usize) -> Spectrum {
    let w: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = w.iter().sum();
    Spectrum::new(w.into_iter().map(|x| x / s).collect()).unwrap()
}

/// Like [`random_spectrum`] but with a random Schmidt rank in `1..=n`,
/// zero-padded to length `n`.
pub fn random_spectrum_with_rank<R: Rng>(rng: &mut R, n: usize) -> Spectrum {
    let rank = rng.random_range(1..=n);
    random_spectrum(rng, rank).padded(n)
}

pub fn random_state<R: Rng>(rng: &mut R, n: usize) -> State {
    let m = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let norm = m.norm();
    State::from_matrix(&(m / Complex64::new(norm, 0.0))).unwrap()
}

/// Independent restatement of α ≺ β by explicit prefix sums.
pub fn first_violated_prefix(alpha: &[f64], beta: &[f64]) -> Option<usize> {
    let n = alpha.len().max(beta.len());
    let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    (1..=n).find(|&k| {
        let sa: f64 = (0..k).map(|i| get(alpha, i)).sum();
        let sb: f64 = (0..k).map(|i| get(beta, i)).sum();
        sa > sb + 1e-10
    })
}

pub fn verdict(id: &str, what: &str, ok: bool, detail: String) {
    println!("[{}] {id}: {what} ({detail})", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{id} failed: {what} ({detail})");
}
