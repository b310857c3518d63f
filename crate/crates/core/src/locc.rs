//! Simulation of the local protocol that recovers the symplectic invariants
//! of a shared two-mode state.
//!
//! Bob measures the parity of his mode on every copy and announces the
//! outcome. Alice sorts her copies into an even and an odd group and
//! estimates the second moments of each group. Writing `w` for Bob's average
//! parity and `Γ` for the parity-conditioned block of Alice's mode, the
//! unnormalized group moments are
//!
//! ```text
//! Σ_e = (V₁ + wΓ)/2,   Σ_o = (V₁ − wΓ)/2,   p_e = (1 + w)/2,   p_o = (1 − w)/2,
//! ```
//!
//! so the normalized group matrices are `V₁e = Σ_e/p_e` and `V₁o = Σ_o/p_o`.
//! `Γ` follows from the weighted difference `(p_e V₁e − p_o V₁o)/(p_e − p_o)`.
//! The plain difference `V₁e − V₁o` is not `Γ`: it equals
//! `2w(Γ − V₁)/(1 − w²)`, which for every pure two-mode squeezed vacuum is
//! exactly `−I`. Both rules are available so the discrepancy can be shown.

use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::covmat::{Block, CovarianceMatrix};
use crate::entanglement::{
    eof_symmetric, invariants, simon_test, SeparabilityVerdict, SymplecticInvariants,
};
use crate::gaussian_ops::parity_reduce;
use crate::{Error, Result, C64};

/// Probabilities below this are treated as an impossible outcome.
const MIN_PROBABILITY: f64 = 1e-14;
const RESAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolTranscript {
    pub p_even: f64,
    pub p_odd: f64,
    /// Normalized second moments of the kept mode in the even group;
    /// `None` when the even outcome has zero probability.
    pub v1_even: Option<Block>,
    pub v1_odd: Option<Block>,
    /// Number of shared copies in finite-ensemble mode.
    pub n_copies: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EstimatorRule {
    /// `(p_e V₁e − p_o V₁o) / (p_e − p_o)`.
    #[default]
    Weighted,
    /// `V₁e − V₁o`.
    Plain,
}

impl FromStr for EstimatorRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weighted" => Ok(Self::Weighted),
            "plain" => Ok(Self::Plain),
            other => Err(Error::InvalidArgument(format!(
                "unknown estimator rule '{other}' (expected 'weighted' or 'plain')"
            ))),
        }
    }
}

impl std::fmt::Display for EstimatorRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Weighted => "weighted",
            Self::Plain => "plain",
        })
    }
}

/// Exact even/odd group statistics of the mode that is not `measured`.
pub fn conditional_moments(v: &CovarianceMatrix, measured: usize) -> Result<ProtocolTranscript> {
    if v.n_modes() != 2 {
        return Err(Error::Dimension(format!(
            "the protocol runs on two-mode states, got {} modes",
            v.n_modes()
        )));
    }
    let kept = 1 - measured.min(1);
    let reduction = parity_reduce(v, measured)?;
    let w = reduction.weight;
    let v1 = v.block(kept, kept);
    let wg = reduction.gamma.block(0, 0).scale(w);
    let p_even = 0.5 * (1.0 + w);
    let p_odd = 0.5 * (1.0 - w);
    let normalized = |sum: Block, p: f64| (p >= MIN_PROBABILITY).then(|| sum.unscale(2.0 * p));
    Ok(ProtocolTranscript {
        p_even,
        p_odd,
        v1_even: normalized(v1 + wg, p_even),
        v1_odd: normalized(v1 - wg, p_odd),
        n_copies: None,
    })
}

pub fn estimate_gamma(t: &ProtocolTranscript, rule: EstimatorRule) -> Result<Block> {
    let (even, odd) = match (t.v1_even, t.v1_odd) {
        (Some(e), Some(o)) => (e, o),
        _ => {
            return Err(Error::Degenerate(
                "one parity outcome never occurs, so only one group is available".into(),
            ))
        }
    };
    match rule {
        EstimatorRule::Plain => Ok(even - odd),
        EstimatorRule::Weighted => {
            let denom = t.p_even - t.p_odd;
            if denom.abs() < MIN_PROBABILITY {
                return Err(Error::Degenerate(
                    "p_even = p_odd (zero average parity)".into(),
                ));
            }
            Ok((even.scale(t.p_even) - odd.scale(t.p_odd)).unscale(denom))
        }
    }
}

/// Finite-ensemble settings for [`run_protocol`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ensemble {
    pub n_copies: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolOptions {
    pub measured: usize,
    pub rule: EstimatorRule,
    pub ensemble: Option<Ensemble>,
}

impl Default for ProtocolOptions {
    fn default() -> Self {
        Self {
            measured: 1,
            rule: EstimatorRule::Weighted,
            ensemble: None,
        }
    }
}

/// Standard deviations over the finite-ensemble resamples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleSpread {
    pub n_copies: u64,
    pub seed: u64,
    pub resamples: usize,
    pub i1: f64,
    pub i2: f64,
    pub abs_i3: f64,
    pub i4: f64,
    pub eof: Option<f64>,
    /// Fraction of resamples whose Simon verdict is "entangled".
    pub entangled_fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolReport {
    pub rule: EstimatorRule,
    pub transcript: ProtocolTranscript,
    pub gamma: Block,
    /// Reconstructed invariants; `i3` holds `|I₃|`. In finite-ensemble mode
    /// these are resample means.
    pub invariants: SymplecticInvariants,
    pub verdict: SeparabilityVerdict,
    /// Present for symmetric states only.
    pub eof: Option<f64>,
    pub spread: Option<EnsembleSpread>,
}

impl ProtocolReport {
    pub fn entangled(&self) -> bool {
        !self.verdict.separable
    }
}

/// Runs the protocol on a physical two-mode state.
pub fn run_protocol(v: &CovarianceMatrix, options: &ProtocolOptions) -> Result<ProtocolReport> {
    let exact = invariants(v)?;
    let symmetric = (exact.i1 - exact.i2).abs() <= 1e-9;
    let kept = 1 - options.measured.min(1);
    let transcript = conditional_moments(v, options.measured)?;
    let v_kept = v.block(kept, kept);
    let v_meas = v.block(options.measured, options.measured);

    match options.ensemble {
        None => {
            let gamma = estimate_gamma(&transcript, options.rule)?;
            let inv = local_invariants(&v_kept, &v_meas, &gamma)?;
            let eof = if symmetric {
                Some(eof_symmetric(&inv)?)
            } else {
                None
            };
            Ok(ProtocolReport {
                rule: options.rule,
                transcript,
                gamma,
                invariants: inv,
                verdict: simon_test(&inv),
                eof,
                spread: None,
            })
        }
        Some(ensemble) => run_finite(&transcript, &v_meas, symmetric, options.rule, ensemble),
    }
}

fn local_invariants(v1: &Block, v2: &Block, gamma: &Block) -> Result<SymplecticInvariants> {
    crate::entanglement::reconstruct_invariants(v1, v2, gamma)
}

fn run_finite(
    exact: &ProtocolTranscript,
    v_meas: &Block,
    symmetric: bool,
    rule: EstimatorRule,
    ensemble: Ensemble,
) -> Result<ProtocolReport> {
    if ensemble.n_copies == 0 {
        return Err(Error::InvalidArgument("n_copies must be positive".into()));
    }
    let (even, odd) = match (exact.v1_even, exact.v1_odd) {
        (Some(e), Some(o)) => (e, o),
        _ => {
            return Err(Error::Degenerate(
                "one parity outcome never occurs, so only one group is available".into(),
            ))
        }
    };
    let n = ensemble.n_copies as f64;

    let mut samples: Vec<(
        SymplecticInvariants,
        Option<f64>,
        bool,
        Block,
        ProtocolTranscript,
    )> = Vec::with_capacity(RESAMPLES);
    for k in 0..RESAMPLES {
        let mut rng = ChaCha8Rng::seed_from_u64(resample_seed(ensemble.seed, k as u64));
        let p_even = (exact.p_even + gaussian(&mut rng) * (exact.p_even * exact.p_odd / n).sqrt())
            .clamp(MIN_PROBABILITY, 1.0 - MIN_PROBABILITY);
        let p_odd = 1.0 - p_even;
        let v1_even = perturb(&even, p_even * n, &mut rng);
        let v1_odd = perturb(&odd, p_odd * n, &mut rng);
        let v2 = perturb(v_meas, n, &mut rng);
        let transcript = ProtocolTranscript {
            p_even,
            p_odd,
            v1_even: Some(v1_even),
            v1_odd: Some(v1_odd),
            n_copies: Some(ensemble.n_copies),
        };
        let gamma = estimate_gamma(&transcript, rule)?;
        let v1 = v1_even.scale(p_even) + v1_odd.scale(p_odd);
        let inv = lenient_invariants(&v1, &v2, &gamma);
        let eof = if symmetric {
            let mean = 0.5 * (inv.i1 + inv.i2);
            let sym = SymplecticInvariants {
                i1: mean,
                i2: mean,
                ..inv
            };
            eof_symmetric(&sym).ok()
        } else {
            None
        };
        let entangled = !simon_test(&inv).separable;
        samples.push((inv, eof, entangled, gamma, transcript));
    }

    let mean_std = |f: &dyn Fn(&SymplecticInvariants) -> f64| {
        let xs: Vec<f64> = samples.iter().map(|s| f(&s.0)).collect();
        mean_and_std(&xs)
    };
    let (i1, s1) = mean_std(&|x| x.i1);
    let (i2, s2) = mean_std(&|x| x.i2);
    let (i3, s3) = mean_std(&|x| x.i3);
    let (i4, s4) = mean_std(&|x| x.i4);
    let inv = SymplecticInvariants { i1, i2, i3, i4 };
    let eofs: Option<Vec<f64>> = samples.iter().map(|s| s.1).collect();
    let (eof, eof_std) = match eofs {
        Some(xs) if symmetric => {
            let (m, s) = mean_and_std(&xs);
            (Some(m), Some(s))
        }
        _ => (None, None),
    };
    let entangled_fraction = samples.iter().filter(|s| s.2).count() as f64 / samples.len() as f64;

    let gamma = samples
        .iter()
        .fold(Block::zeros(), |acc, s| acc + s.3)
        .unscale(samples.len() as f64);
    let mut transcript = samples[0].4.clone();
    transcript.p_even = mean_and_std(&samples.iter().map(|s| s.4.p_even).collect::<Vec<_>>()).0;
    transcript.p_odd = 1.0 - transcript.p_even;

    Ok(ProtocolReport {
        rule,
        transcript,
        gamma,
        invariants: inv,
        verdict: simon_test(&inv),
        eof,
        spread: Some(EnsembleSpread {
            n_copies: ensemble.n_copies,
            seed: ensemble.seed,
            resamples: samples.len(),
            i1: s1,
            i2: s2,
            abs_i3: s3,
            i4: s4,
            eof: eof_std,
            entangled_fraction,
        }),
    })
}

/// Reconstruction that clips a negative `det(V₁ − Γ)` from sampling noise
/// to zero instead of rejecting it.
fn lenient_invariants(v1: &Block, v2: &Block, gamma: &Block) -> SymplecticInvariants {
    let det2 = |b: &Block| (b[(0, 0)] * b[(1, 1)] - b[(0, 1)] * b[(1, 0)]).re;
    let i1 = det2(v1);
    let i2 = det2(v2);
    let i3_sq = i2 * det2(&(v1 - gamma)).max(0.0);
    SymplecticInvariants {
        i1,
        i2,
        i3: i3_sq.sqrt(),
        i4: i1 * i2 + i3_sq - i2 * det2(gamma),
    }
}

/// Adds estimation noise to a single-mode moment block measured on `count`
/// copies, keeping the block Hermitian and pair-symmetric. The variance
/// proxy of every entry is `(d² + |m|²) / count`.
fn perturb(b: &Block, count: f64, rng: &mut ChaCha8Rng) -> Block {
    let d = b[(0, 0)].re;
    let m = b[(0, 1)];
    let count = count.max(1.0);
    let sigma = ((d * d + m.norm_sqr()) / count).sqrt();
    let dd = gaussian(rng) * sigma;
    let dm = C64::new(gaussian(rng), gaussian(rng)) * (sigma / std::f64::consts::SQRT_2);
    let diag = C64::new(d + dd, 0.0);
    let off = m + dm;
    Block::new(diag, off, off.conj(), diag)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// SplitMix64 step, so every resample has its own reproducible stream.
fn resample_seed(seed: u64, k: u64) -> u64 {
    let mut z = seed.wrapping_add(k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn mean_and_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, var.sqrt())
}
