//! Brute-force verifiers for the optimal-conversion results.
//!
//! None of these routines use the staircase construction. They search or
//! sample the feasible set directly and are used by the test suite and the
//! `verify` command to cross-check [`crate::faithful`].

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::faithful::optimal_fidelity;
use crate::spectra::{
    aligned_fidelity, padded_pair, schmidt_spectrum, tail_sums, BipartiteState, SchmidtSpectrum,
};

pub const DEFAULT_GRID_BUDGET: u128 = 10_000_000;

/// A uniform grid on the probability simplex with spacing `1/divisions`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    dimension: usize,
    divisions: u32,
    budget: u128,
}

impl GridSpec {
    /// `step` is rounded to the nearest `1/N`.
    pub fn new(dimension: usize, step: f64) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::Dimension("grid dimension must be >= 1".into()));
        }
        if !(step > 0.0 && step <= 1.0) {
            return Err(Error::Range {
                what: "grid step",
                value: step,
            });
        }
        let divisions = (1.0 / step).round().max(1.0);
        if divisions > u32::MAX as f64 {
            return Err(Error::Range {
                what: "grid step",
                value: step,
            });
        }
        Ok(Self {
            dimension,
            divisions: divisions as u32,
            budget: DEFAULT_GRID_BUDGET,
        })
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn step(&self) -> f64 {
        1.0 / self.divisions as f64
    }

    /// Number of sorted grid points, i.e. partitions of `N` into at most
    /// `dimension` parts.
    pub fn point_count(&self) -> u128 {
        partitions_at_most(self.divisions as usize, self.dimension)
    }
}

fn partitions_at_most(n: usize, parts: usize) -> u128 {
    // number of partitions of n into parts of size <= `parts` (conjugate)
    let mut ways = vec![0u128; n + 1];
    ways[0] = 1;
    for size in 1..=parts.min(n) {
        for m in size..=n {
            ways[m] = ways[m].saturating_add(ways[m - size]);
        }
    }
    ways[n]
}

/// Largest `(Σ √(γ'_i β_i))²` over sorted grid points γ' with `α ≺ γ'`.
///
/// Never exceeds the true optimum; the gap shrinks with the grid step.
pub fn grid_max_fidelity(
    alpha: &SchmidtSpectrum<f64>,
    beta: &SchmidtSpectrum<f64>,
    grid: &GridSpec,
) -> Result<f64> {
    let (a, b) = padded_pair(alpha, beta);
    let n = grid.dimension;
    if alpha.nonzero_count() > n || beta.nonzero_count() > n {
        return Err(Error::Dimension(format!(
            "grid dimension {} below Schmidt rank of the inputs",
            n
        )));
    }
    let points = grid.point_count();
    if points > grid.budget {
        return Err(Error::Budget {
            points,
            budget: grid.budget,
        });
    }
    let mut a = a;
    let mut b = b;
    a.resize(n.max(a.len()), 0.0);
    b.resize(n.max(b.len()), 0.0);

    let mut prefix_alpha = Vec::with_capacity(n);
    let mut acc = 0.0;
    for x in &a[..n] {
        acc += x;
        prefix_alpha.push(acc);
    }
    let sqrt_beta: Vec<f64> = b[..n].iter().map(|x| x.sqrt()).collect();

    let mut search = GridSearch {
        total: grid.divisions,
        inv: 1.0 / grid.divisions as f64,
        prefix_alpha,
        sqrt_beta,
        parts: vec![0; n],
        best: f64::NEG_INFINITY,
    };
    search.descend(0, grid.divisions, grid.divisions);
    if search.best.is_finite() {
        Ok(search.best)
    } else {
        Err(Error::Validation("no feasible grid point".into()))
    }
}

struct GridSearch {
    total: u32,
    inv: f64,
    prefix_alpha: Vec<f64>,
    sqrt_beta: Vec<f64>,
    parts: Vec<u32>,
    best: f64,
}

impl GridSearch {
    const SLACK: f64 = 1e-13;

    fn descend(&mut self, k: usize, remaining: u32, cap: u32) {
        let n = self.parts.len();
        if k == n - 1 {
            if remaining > cap {
                return;
            }
            self.parts[k] = remaining;
            self.score();
            return;
        }
        let slots = (n - k) as u32;
        // largest part first; each later part is at most the previous one
        let hi = remaining.min(cap);
        let lo = remaining.div_ceil(slots);
        for x in (lo..=hi).rev() {
            let used = self.total - remaining + x;
            if (used as f64) * self.inv + Self::SLACK < self.prefix_alpha[k] {
                // partial sums only shrink as x decreases
                break;
            }
            self.parts[k] = x;
            self.descend(k + 1, remaining - x, x);
        }
    }

    fn score(&mut self) {
        let s: f64 = self
            .parts
            .iter()
            .zip(&self.sqrt_beta)
            .map(|(c, sb)| (*c as f64 * self.inv).sqrt() * sb)
            .sum();
        self.best = self.best.max(s * s);
    }
}

/// A Haar-distributed `n×n` unitary (QR of a complex Gaussian matrix with the
/// phases of `R`'s diagonal removed).
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<Complex64> {
    let z = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re, im)
    });
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Local unitaries `U` on Alice's side and `V` on Bob's.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryPair {
    pub u: DMatrix<Complex64>,
    pub v: DMatrix<Complex64>,
}

fn is_unitary(m: &DMatrix<Complex64>, tol: f64) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    let id = DMatrix::<Complex64>::identity(m.nrows(), m.ncols());
    (m.adjoint() * m - id).iter().all(|z| z.norm() <= tol)
}

impl UnitaryPair {
    pub fn new(u: DMatrix<Complex64>, v: DMatrix<Complex64>) -> Result<Self> {
        if u.nrows() != v.nrows() {
            return Err(Error::Dimension("unitaries of different size".into()));
        }
        if !is_unitary(&u, 1e-10) || !is_unitary(&v, 1e-10) {
            return Err(Error::Validation("matrix is not unitary to 1e-10".into()));
        }
        Ok(Self { u, v })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            u: DMatrix::identity(n, n),
            v: DMatrix::identity(n, n),
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self {
            u: random_unitary(n, rng),
            v: random_unitary(n, rng),
        }
    }

    /// The pair rotating ω's Schmidt basis onto τ's with matching order.
    pub fn aligning(tau: &BipartiteState<f64>, omega: &BipartiteState<f64>) -> Result<Self> {
        if tau.dim() != omega.dim() {
            return Err(Error::Dimension("states of different dimension".into()));
        }
        let (u1, w1) = sorted_svd(tau.to_matrix());
        let (u2, w2) = sorted_svd(omega.to_matrix());
        let u = &u1 * u2.adjoint();
        let v = (w2.adjoint() * &w1).transpose();
        Ok(Self { u, v })
    }

    /// `|⟨τ|(U⊗V)|ω⟩|²`, computed as `|Tr(T† U Ω Vᵀ)|²` on amplitude matrices.
    pub fn overlap(&self, tau: &BipartiteState<f64>, omega: &BipartiteState<f64>) -> f64 {
        let t = tau.to_matrix();
        let rotated = &self.u * omega.to_matrix() * self.v.transpose();
        t.iter()
            .zip(rotated.iter())
            .map(|(x, y)| x.conj() * y)
            .sum::<Complex64>()
            .norm_sqr()
    }
}

/// `M = U diag(s) W` with `s` sorted nonincreasing; returns `(U, W)`.
fn sorted_svd(m: DMatrix<Complex64>) -> (DMatrix<Complex64>, DMatrix<Complex64>) {
    let n = m.nrows();
    let svd = m.svd(true, true);
    let u = svd.u.expect("u requested");
    let w = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let u_sorted = DMatrix::from_fn(n, n, |i, k| u[(i, order[k])]);
    let w_sorted = DMatrix::from_fn(n, n, |k, j| w[(order[k], j)]);
    (u_sorted, w_sorted)
}

/// Summary of a Monte Carlo sweep over local unitaries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlapStats {
    /// Best overlap among the random pairs only.
    pub max_random: f64,
    /// Overlap reached by the aligning pair.
    pub aligned: f64,
    /// `(Σ √(τ_i ω_i))²` from the two spectra.
    pub bound: f64,
}

impl OverlapStats {
    pub fn max(&self) -> f64 {
        self.max_random.max(self.aligned)
    }
}

const OVERLAP_CHUNK: usize = 1024;

/// Samples `trials` random local unitary pairs, plus the identity and the
/// aligning pair. Chunks draw from independent ChaCha streams of `seed`, so
/// results do not depend on thread count.
pub fn sample_unitary_overlaps(
    tau: &BipartiteState<f64>,
    omega: &BipartiteState<f64>,
    trials: usize,
    seed: u64,
) -> Result<OverlapStats> {
    if tau.dim() != omega.dim() {
        return Err(Error::Dimension("states of different dimension".into()));
    }
    if trials == 0 {
        return Err(Error::Range {
            what: "trials",
            value: 0.0,
        });
    }
    let n = tau.dim();
    let chunks = trials.div_ceil(OVERLAP_CHUNK);
    let workers = std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
        .min(chunks);
    let chunk_max = |c: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let len = OVERLAP_CHUNK.min(trials - c * OVERLAP_CHUNK);
        (0..len)
            .map(|_| UnitaryPair::random(n, &mut rng).overlap(tau, omega))
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let max_random = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let chunk_max = &chunk_max;
                scope.spawn(move || {
                    (w..chunks)
                        .step_by(workers)
                        .map(chunk_max)
                        .fold(f64::NEG_INFINITY, f64::max)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sampler thread panicked"))
            .fold(f64::NEG_INFINITY, f64::max)
    });
    let identity = UnitaryPair::identity(n).overlap(tau, omega);
    let aligned = UnitaryPair::aligning(tau, omega)?.overlap(tau, omega);
    let bound = aligned_fidelity(&schmidt_spectrum(tau)?, &schmidt_spectrum(omega)?);
    Ok(OverlapStats {
        max_random: max_random.max(identity),
        aligned,
        bound,
    })
}

/// Best sampled `|⟨τ|(U⊗V)|ω⟩|²`, aligning pair included.
pub fn sample_unitary_overlap(
    tau: &BipartiteState<f64>,
    omega: &BipartiteState<f64>,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    Ok(sample_unitary_overlaps(tau, omega, trials, seed)?.max())
}

/// Pure-state outcome ensemble `{p_k, γ^k}` of a local protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    pub weights: Vec<f64>,
    pub states: Vec<SchmidtSpectrum<f64>>,
}

impl Ensemble {
    /// Whether `Σ_k p_k E_l(γ^k) ≤ E_l(α)` for every `l`, with no slack.
    pub fn is_reachable_from(&self, alpha: &SchmidtSpectrum<f64>) -> bool {
        let n = self
            .states
            .iter()
            .map(|s| s.len())
            .chain([alpha.len()])
            .max()
            .unwrap_or(0);
        let ea = tail_sums(alpha.padded(n).probs());
        let mut avg = vec![0.0; n];
        for (p, s) in self.weights.iter().zip(&self.states) {
            for (acc, e) in avg.iter_mut().zip(tail_sums(s.padded(n).probs()).tails()) {
                *acc += p * e;
            }
        }
        avg.iter().zip(ea.tails()).skip(1).all(|(x, y)| x <= y)
    }

    /// `Σ_k p_k (Σ_i √(γ^k_i β_i))²`.
    pub fn average_fidelity(&self, beta: &SchmidtSpectrum<f64>) -> f64 {
        self.weights
            .iter()
            .zip(&self.states)
            .map(|(p, s)| p * aligned_fidelity(s, beta))
            .sum()
    }
}

const MAX_BRANCHES: usize = 4;
const MAX_ATTEMPTS: usize = 64;

fn random_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// A spectrum majorizing `alpha`: moves weight from later to earlier entries.
fn more_ordered<R: Rng + ?Sized>(alpha: &[f64], rng: &mut R) -> Vec<f64> {
    let mut v = alpha.to_vec();
    let n = v.len();
    if n < 2 {
        return v;
    }
    for _ in 0..rng.random_range(1..=3) {
        v.sort_by(|a, b| b.total_cmp(a));
        let i = rng.random_range(0..n - 1);
        let j = rng.random_range(i + 1..n);
        let moved = v[j] * rng.random::<f64>();
        v[j] -= moved;
        v[i] += moved;
    }
    v
}

fn random_branch<R: Rng + ?Sized>(alpha: &[f64], beta: &[f64], rng: &mut R) -> SchmidtSpectrum<f64> {
    let n = alpha.len();
    let t: f64 = rng.random();
    let v: Vec<f64> = match rng.random_range(0..4) {
        0 | 1 => more_ordered(alpha, rng),
        2 => {
            let w = random_simplex(n, rng);
            alpha.iter().zip(&w).map(|(a, w)| (1.0 - t) * a + t * w).collect()
        }
        _ => alpha.iter().zip(beta).map(|(a, b)| (1.0 - t) * a + t * b).collect(),
    };
    SchmidtSpectrum::from_weights(v)
}

/// Draws `count` ensembles reachable from α (at most four branches each) by
/// rejection sampling, falling back to the trivial ensemble `{1, α}` when
/// every attempt is rejected.
pub fn sample_ensembles(
    alpha: &SchmidtSpectrum<f64>,
    beta: &SchmidtSpectrum<f64>,
    count: usize,
    seed: u64,
) -> Vec<Ensemble> {
    let (a, b) = padded_pair(alpha, beta);
    let alpha_padded = alpha.padded(a.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            for _ in 0..MAX_ATTEMPTS {
                let k = rng.random_range(1..=MAX_BRANCHES);
                let ens = Ensemble {
                    weights: random_simplex(k, &mut rng),
                    states: (0..k).map(|_| random_branch(&a, &b, &mut rng)).collect(),
                };
                if ens.is_reachable_from(&alpha_padded) {
                    return ens;
                }
            }
            Ensemble {
                weights: vec![1.0],
                states: vec![alpha_padded.clone()],
            }
        })
        .collect()
}

/// Average fidelity with β of each sampled reachable ensemble.
pub fn sample_feasible_ensembles(
    alpha: &SchmidtSpectrum<f64>,
    beta: &SchmidtSpectrum<f64>,
    count: usize,
    seed: u64,
) -> Vec<f64> {
    sample_ensembles(alpha, beta, count, seed)
        .iter()
        .map(|e| e.average_fidelity(beta))
        .collect()
}

/// One line of a verification run.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct Claim {
    pub claim: String,
    pub theorem_value: f64,
    pub oracle_value: f64,
    pub gap: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub grid_step: f64,
    pub grid_budget: u128,
    pub trials: usize,
    pub ensembles: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            grid_step: 0.01,
            grid_budget: DEFAULT_GRID_BUDGET,
            trials: 10_000,
            ensembles: 1000,
            seed: 0,
        }
    }
}

/// Runs every oracle against the optimal conversion ψ → φ.
pub fn verify_pair(
    alpha: &SchmidtSpectrum<f64>,
    beta: &SchmidtSpectrum<f64>,
    opts: &VerifyOptions,
) -> Result<Vec<Claim>> {
    let report = optimal_fidelity(alpha, beta)?;
    let f_opt = report.f_opt;
    let n = alpha.len().max(beta.len());
    let mut claims = Vec::new();

    let grid = GridSpec::new(n, opts.grid_step)?.with_budget(opts.grid_budget);
    let g = grid_max_fidelity(alpha, beta, &grid)?;
    claims.push(Claim {
        claim: "grid optimum does not exceed f_opt".into(),
        theorem_value: f_opt,
        oracle_value: g,
        gap: f_opt - g,
        pass: g <= f_opt + 1e-12 && f_opt - g <= 2.0 * grid.step(),
    });

    let (a, b) = padded_pair(alpha, beta);
    let tau = BipartiteState::from_spectrum(&SchmidtSpectrum::new(a)?);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let scrambled = &UnitaryPair::random(n, &mut rng);
    let omega = BipartiteState::from_matrix(
        &(&scrambled.u
            * BipartiteState::from_spectrum(&SchmidtSpectrum::new(b)?).to_matrix()
            * scrambled.v.transpose()),
    )?;
    let stats = sample_unitary_overlaps(&tau, &omega, opts.trials, opts.seed)?;
    claims.push(Claim {
        claim: "local-unitary overlap bounded by aligned fidelity".into(),
        theorem_value: stats.bound,
        oracle_value: stats.max(),
        gap: stats.bound - stats.max(),
        pass: stats.max() <= stats.bound + 1e-9 && (stats.aligned - stats.bound).abs() <= 1e-10,
    });

    let samples = sample_feasible_ensembles(alpha, beta, opts.ensembles, opts.seed);
    let best = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    claims.push(Claim {
        claim: "reachable ensembles do not beat f_opt".into(),
        theorem_value: f_opt,
        oracle_value: best,
        gap: f_opt - best,
        pass: best <= f_opt + 1e-10,
    });

    Ok(claims)
}
