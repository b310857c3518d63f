use nalgebra::DVector;

use super::FockDensity;
use crate::covmat::{from_moment_matrix, hermitian_eigenvalues, CovarianceMatrix};
use crate::{CMat, Error, Result, C64};

const MIN_PROBABILITY: f64 = 1e-14;
const PURITY_TOL: f64 = 1e-8;

/// Result of a parity measurement on one mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityConditioned {
    /// `Σ_even ⟨n|ρ|n⟩ − Σ_odd ⟨n|ρ|n⟩` on the remaining modes, unnormalized.
    pub sigma: FockDensity,
    /// Normalized even-outcome state; `None` when `p_even < 1e-14`.
    pub rho_even: Option<FockDensity>,
    pub rho_odd: Option<FockDensity>,
    pub p_even: f64,
    pub p_odd: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VacuumConditioned {
    pub rho0: FockDensity,
    pub p0: f64,
}

/// Slices every term by the photon number of `mode`:
/// returns `(n, w, ⟨n|_mode ψ⟩)` for each term and each `n`.
fn split(rho: &FockDensity, mode: usize) -> Vec<(usize, f64, DVector<C64>)> {
    let b = rho.cutoff() + 1;
    let stride = rho.stride(mode);
    let rest_dim = rho.dim() / b;
    let mut out = Vec::with_capacity(rho.terms().len() * b);
    for (w, psi) in rho.terms() {
        let mut slices = vec![DVector::<C64>::zeros(rest_dim); b];
        for (idx, &amp) in psi.iter().enumerate() {
            let n = (idx / stride) % b;
            let rest = (idx / (stride * b)) * stride + idx % stride;
            slices[n][rest] = amp;
        }
        out.extend(slices.into_iter().enumerate().map(|(n, s)| (n, *w, s)));
    }
    out
}

fn require_remaining(rho: &FockDensity) -> Result<()> {
    if rho.n_modes() < 2 {
        return Err(Error::Dimension(
            "conditioning needs at least two modes".into(),
        ));
    }
    Ok(())
}

pub fn parity_condition_fock(rho: &FockDensity, mode: usize) -> Result<ParityConditioned> {
    rho.check_mode(mode)?;
    require_remaining(rho)?;
    let (n_modes, cutoff) = (rho.n_modes() - 1, rho.cutoff());
    let mut sigma = Vec::new();
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for (n, w, slice) in split(rho, mode) {
        if n % 2 == 0 {
            sigma.push((w, slice.clone()));
            even.push((w, slice));
        } else {
            sigma.push((-w, slice.clone()));
            odd.push((w, slice));
        }
    }
    let even = FockDensity::assemble(n_modes, cutoff, even);
    let odd = FockDensity::assemble(n_modes, cutoff, odd);
    let (p_even, p_odd) = (even.trace(), odd.trace());
    let normalized = |s: FockDensity, p: f64| (p >= MIN_PROBABILITY).then(|| s.scaled(1.0 / p));
    Ok(ParityConditioned {
        sigma: FockDensity::assemble(n_modes, cutoff, sigma),
        rho_even: normalized(even, p_even),
        rho_odd: normalized(odd, p_odd),
        p_even,
        p_odd,
    })
}

/// `⟨0|ρ|0⟩` on `mode`, normalized, with its probability.
pub fn vacuum_condition_fock(rho: &FockDensity, mode: usize) -> Result<VacuumConditioned> {
    rho.check_mode(mode)?;
    require_remaining(rho)?;
    let terms: Vec<_> = split(rho, mode)
        .into_iter()
        .filter(|(n, _, _)| *n == 0)
        .map(|(_, w, s)| (w, s))
        .collect();
    let projected = FockDensity::assemble(rho.n_modes() - 1, rho.cutoff(), terms);
    let p0 = projected.trace();
    if p0 < MIN_PROBABILITY {
        return Err(Error::Degenerate(format!(
            "vacuum outcome has probability {p0:.3e}"
        )));
    }
    Ok(VacuumConditioned {
        rho0: projected.scaled(1.0 / p0),
        p0,
    })
}

/// Reduced operator on the `keep` modes (sorted, distinct).
pub fn partial_trace_fock(rho: &FockDensity, keep: &[usize]) -> Result<FockDensity> {
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() {
        return Err(Error::InvalidArgument("keep at least one mode".into()));
    }
    for &k in &keep {
        rho.check_mode(k)?;
    }
    let mut current = rho.clone();
    for mode in (0..rho.n_modes()).rev() {
        if keep.contains(&mode) {
            continue;
        }
        let terms = split(&current, mode)
            .into_iter()
            .map(|(_, w, s)| (w, s))
            .collect();
        current = FockDensity::assemble(current.n_modes() - 1, current.cutoff(), terms);
    }
    Ok(current)
}

/// Covariance matrix of `ρ / Tr ρ` built from ladder-operator matrix
/// elements: `Ṽ[2p,2q] = ⟨a_q† a_p⟩ + δ/2`, `Ṽ[2p,2q+1] = ⟨a_p a_q⟩`, and the
/// conjugate partners, then the signs of the covariance convention.
/// Works for non-positive operators such as the parity difference `σ`.
pub fn moments_fock(rho: &FockDensity) -> Result<CovarianceMatrix> {
    let trace = rho.trace();
    if trace.abs() < MIN_PROBABILITY {
        return Err(Error::ZeroTrace);
    }
    let n = rho.n_modes();
    let b = rho.cutoff() + 1;
    // normal[p][q] = Tr(ρ a_p† a_q), anomalous[p][q] = Tr(ρ a_p a_q).
    let mut normal = vec![vec![C64::new(0.0, 0.0); n]; n];
    let mut anomalous = vec![vec![C64::new(0.0, 0.0); n]; n];
    for (w, psi) in rho.terms() {
        let lowered: Vec<DVector<C64>> = (0..n).map(|p| lower(psi, rho.stride(p), b)).collect();
        for p in 0..n {
            for q in 0..n {
                normal[p][q] += lowered[p].dotc(&lowered[q]) * *w;
                let twice = lower(&lowered[q], rho.stride(p), b);
                anomalous[p][q] += psi.dotc(&twice) * *w;
            }
        }
    }
    let mut m = CMat::zeros(2 * n, 2 * n);
    for p in 0..n {
        for q in 0..n {
            let delta = if p == q { 0.5 } else { 0.0 };
            let nqp = normal[q][p] / trace;
            let npq = normal[p][q] / trace;
            m[(2 * p, 2 * q)] = nqp + delta;
            m[(2 * p + 1, 2 * q + 1)] = npq + delta;
            m[(2 * p, 2 * q + 1)] = anomalous[p][q] / trace;
            m[(2 * p + 1, 2 * q)] = (anomalous[q][p] / trace).conj();
        }
    }
    let hermitian = (&m + m.adjoint()).scale(0.5);
    from_moment_matrix(&hermitian)
}

/// `a_p ψ` with `a|n⟩ = √n |n−1⟩`.
fn lower(psi: &DVector<C64>, stride: usize, b: usize) -> DVector<C64> {
    let mut out = DVector::zeros(psi.len());
    for (idx, &amp) in psi.iter().enumerate() {
        let n = (idx / stride) % b;
        if n > 0 {
            out[idx - stride] = amp * (n as f64).sqrt();
        }
    }
    out
}

/// Von Neumann entropy (bits) of mode 0 of a pure two-mode state.
pub fn entanglement_entropy_fock(rho: &FockDensity) -> Result<f64> {
    if rho.n_modes() != 2 {
        return Err(Error::Dimension(format!(
            "expected a two-mode state, got {} modes",
            rho.n_modes()
        )));
    }
    let trace = rho.trace();
    if trace.abs() < MIN_PROBABILITY {
        return Err(Error::ZeroTrace);
    }
    let purity = rho.purity() / (trace * trace);
    if purity < 1.0 - PURITY_TOL {
        return Err(Error::NotPure(purity));
    }
    let reduced = partial_trace_fock(rho, &[0])?.matrix()?.unscale(trace);
    let entropy = hermitian_eigenvalues(&reduced)?
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum();
    Ok(entropy)
}
