//! Truncated Fock-space oracle.
//!
//! Every covariance-level formula in this crate has a brute-force
//! counterpart here, computed from photon-number amplitudes without any
//! Gaussian algebra. Each mode is truncated at `cutoff` photons, so an
//! n-mode basis has `(cutoff + 1)ⁿ` states, indexed with mode 0 as the most
//! significant digit.
//!
//! An operator is stored as a real-weighted sum of rank-one terms,
//! `ρ = Σ_k w_k |ψ_k⟩⟨ψ_k|`. Pure states are a single term, thermal states
//! are their photon-number mixture, and the parity difference `σ` simply
//! carries negative weights. Every operation the oracle needs (beam
//! splitters, partial projections, partial traces, moments) acts term by
//! term, so three-mode states at cutoff 40 never materialize a
//! 68921 × 68921 matrix. [`FockDensity::matrix`] builds the dense matrix on
//! request for small dimensions.
//!
//! Phase conventions match [`crate::gaussian_ops`]: `tmsv_fock(r)` has
//! amplitudes `(−tanh r)ⁿ / cosh r` and `squeezed_vacuum_fock(r, φ)` has
//! `(e^{iφ} tanh r)ᵏ √((2k)!) / (2ᵏ k! √cosh r)` on `|2k⟩`.

mod beamsplitter;
mod measure;

use nalgebra::DVector;

use crate::{CMat, Error, Result, C64};

pub use beamsplitter::beamsplitter_fock;
pub use measure::{
    entanglement_entropy_fock, moments_fock, parity_condition_fock, partial_trace_fock,
    vacuum_condition_fock, ParityConditioned, VacuumConditioned,
};

/// Largest basis dimension [`FockDensity::matrix`] will materialize.
pub const MAX_DENSE_DIM: usize = 4096;

/// Terms whose trace contribution falls below this are dropped.
const NEGLIGIBLE: f64 = 1e-30;

#[derive(Debug, Clone, PartialEq)]
pub struct FockDensity {
    n_modes: usize,
    cutoff: usize,
    terms: Vec<(f64, DVector<C64>)>,
}

impl FockDensity {
    /// Pure state `|ψ⟩⟨ψ|` from an amplitude vector of length `(cutoff+1)ⁿ`.
    pub fn from_pure(n_modes: usize, cutoff: usize, amplitudes: DVector<C64>) -> Result<Self> {
        Self::from_terms(n_modes, cutoff, vec![(1.0, amplitudes)])
    }

    /// `Σ_k w_k |ψ_k⟩⟨ψ_k|`.
    pub fn from_terms(
        n_modes: usize,
        cutoff: usize,
        terms: Vec<(f64, DVector<C64>)>,
    ) -> Result<Self> {
        check_cutoff(cutoff)?;
        if n_modes == 0 {
            return Err(Error::InvalidArgument("need at least one mode".into()));
        }
        let dim = basis_dim(n_modes, cutoff)?;
        for (w, psi) in &terms {
            if psi.len() != dim {
                return Err(Error::Dimension(format!(
                    "amplitude vector has length {}, expected {dim}",
                    psi.len()
                )));
            }
            if !w.is_finite() || psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidArgument("non-finite Fock amplitude".into()));
            }
        }
        Ok(Self::assemble(n_modes, cutoff, terms))
    }

    pub(crate) fn assemble(n_modes: usize, cutoff: usize, terms: Vec<(f64, DVector<C64>)>) -> Self {
        let terms = terms
            .into_iter()
            .filter(|(w, psi)| (w * psi.norm_squared()).abs() > NEGLIGIBLE)
            .collect();
        Self {
            n_modes,
            cutoff,
            terms,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// `(cutoff + 1)ⁿ`.
    pub fn dim(&self) -> usize {
        (self.cutoff + 1).pow(self.n_modes as u32)
    }

    pub fn terms(&self) -> &[(f64, DVector<C64>)] {
        &self.terms
    }

    pub fn trace(&self) -> f64 {
        self.terms
            .iter()
            .map(|(w, psi)| w * psi.norm_squared())
            .sum()
    }

    /// `Tr ρ²`, unnormalized.
    pub fn purity(&self) -> f64 {
        let mut total = 0.0;
        for (wk, pk) in &self.terms {
            for (wl, pl) in &self.terms {
                total += wk * wl * pk.dotc(pl).norm_sqr();
            }
        }
        total
    }

    /// Diagonal `⟨n|ρ|n⟩` in the flattened basis.
    pub fn populations(&self) -> Vec<f64> {
        let mut pops = vec![0.0; self.dim()];
        for (w, psi) in &self.terms {
            for (p, z) in pops.iter_mut().zip(psi.iter()) {
                *p += w * z.norm_sqr();
            }
        }
        pops
    }

    /// Photon-number distribution of one mode.
    pub fn mode_distribution(&self, mode: usize) -> Result<Vec<f64>> {
        self.check_mode(mode)?;
        let stride = self.stride(mode);
        let b = self.cutoff + 1;
        let mut dist = vec![0.0; b];
        for (idx, p) in self.populations().into_iter().enumerate() {
            dist[(idx / stride) % b] += p;
        }
        Ok(dist)
    }

    /// Dense `(cutoff+1)ⁿ × (cutoff+1)ⁿ` matrix, refused above
    /// [`MAX_DENSE_DIM`].
    pub fn matrix(&self) -> Result<CMat> {
        let dim = self.dim();
        if dim > MAX_DENSE_DIM {
            return Err(Error::Dimension(format!(
                "dense Fock matrix of dimension {dim} exceeds the limit {MAX_DENSE_DIM}"
            )));
        }
        let mut m = CMat::zeros(dim, dim);
        for (w, psi) in &self.terms {
            m += (psi * psi.adjoint()).scale(*w);
        }
        Ok(m)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(w, p)| (w * factor, p.clone()))
            .collect();
        Self::assemble(self.n_modes, self.cutoff, terms)
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes {
            return Err(Error::ModeOutOfRange {
                index: mode,
                n_modes: self.n_modes,
            });
        }
        Ok(())
    }

    /// Index step of `mode` in the flattened basis.
    pub(crate) fn stride(&self, mode: usize) -> usize {
        (self.cutoff + 1).pow((self.n_modes - 1 - mode) as u32)
    }
}

/// Flattened index of a photon-number tuple.
pub fn basis_index(photons: &[usize], cutoff: usize) -> Result<usize> {
    photons.iter().try_fold(0usize, |acc, &n| {
        if n > cutoff {
            return Err(Error::InvalidArgument(format!(
                "photon number {n} exceeds cutoff {cutoff}"
            )));
        }
        Ok(acc * (cutoff + 1) + n)
    })
}

/// Number state `|n₁, n₂, …⟩`.
pub fn fock_state(photons: &[usize], cutoff: usize) -> Result<FockDensity> {
    check_cutoff(cutoff)?;
    let dim = basis_dim(photons.len(), cutoff)?;
    let mut psi = DVector::zeros(dim);
    psi[basis_index(photons, cutoff)?] = C64::new(1.0, 0.0);
    FockDensity::from_pure(photons.len(), cutoff, psi)
}

pub fn vacuum_fock(n_modes: usize, cutoff: usize) -> Result<FockDensity> {
    fock_state(&vec![0; n_modes], cutoff)
}

/// `Σ_n (−tanh r)ⁿ / cosh r |n, n⟩`, truncated and left unnormalized.
pub fn tmsv_fock(r: f64, cutoff: usize) -> Result<FockDensity> {
    check_cutoff(cutoff)?;
    if !r.is_finite() {
        return Err(Error::InvalidArgument("squeezing must be finite".into()));
    }
    let lambda = r.tanh();
    warn_tail(lambda * lambda, cutoff);
    let b = cutoff + 1;
    let mut psi = DVector::zeros(b * b);
    let mut amp = 1.0 / r.cosh();
    for n in 0..b {
        psi[n * b + n] = C64::new(amp, 0.0);
        amp *= -lambda;
    }
    FockDensity::from_pure(2, cutoff, psi)
}

/// Thermal state `p_n = n̄ⁿ / (n̄+1)ⁿ⁺¹`, truncated and left unnormalized.
pub fn thermal_fock(nbar: f64, cutoff: usize) -> Result<FockDensity> {
    check_cutoff(cutoff)?;
    if !(nbar >= 0.0 && nbar.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "thermal occupation must be finite and non-negative, got {nbar}"
        )));
    }
    let ratio = nbar / (nbar + 1.0);
    warn_tail(ratio, cutoff);
    let b = cutoff + 1;
    let mut p = 1.0 / (nbar + 1.0);
    let mut terms = Vec::with_capacity(b);
    for n in 0..b {
        let mut psi = DVector::zeros(b);
        psi[n] = C64::new(1.0, 0.0);
        terms.push((p, psi));
        p *= ratio;
    }
    FockDensity::from_terms(1, cutoff, terms)
}

/// Single-mode squeezed vacuum, even amplitudes
/// `c₂ₖ = (e^{iφ} tanh r)ᵏ √((2k)!) / (2ᵏ k! √cosh r)`.
pub fn squeezed_vacuum_fock(r: f64, phi: f64, cutoff: usize) -> Result<FockDensity> {
    check_cutoff(cutoff)?;
    if !(r.is_finite() && phi.is_finite()) {
        return Err(Error::InvalidArgument("squeezing must be finite".into()));
    }
    let t = r.tanh();
    warn_tail(t * t, cutoff);
    let mut psi = DVector::zeros(cutoff + 1);
    let step = C64::from_polar(t, phi);
    let mut c = C64::new(1.0 / r.cosh().sqrt(), 0.0);
    for k in 0..=cutoff / 2 {
        psi[2 * k] = c;
        // c₂ₖ₊₂ / c₂ₖ = e^{iφ} tanh r · √((2k+1)(2k+2)) / (2(k+1))
        let kk = k as f64;
        c *= step * (((2.0 * kk + 1.0) * (2.0 * kk + 2.0)).sqrt() / (2.0 * (kk + 1.0)));
    }
    FockDensity::from_pure(1, cutoff, psi)
}

/// `ρ_a ⊗ ρ_b` (modes of `a` first).
pub fn tensor_fock(a: &FockDensity, b: &FockDensity) -> Result<FockDensity> {
    if a.cutoff != b.cutoff {
        return Err(Error::InvalidArgument(format!(
            "cutoffs differ ({} vs {})",
            a.cutoff, b.cutoff
        )));
    }
    let n_modes = a.n_modes + b.n_modes;
    basis_dim(n_modes, a.cutoff)?;
    let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
    for (wa, pa) in &a.terms {
        for (wb, pb) in &b.terms {
            terms.push((wa * wb, pa.kronecker(pb)));
        }
    }
    Ok(FockDensity::assemble(n_modes, a.cutoff, terms))
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff < 1 {
        return Err(Error::InvalidArgument("cutoff must be at least 1".into()));
    }
    Ok(())
}

fn basis_dim(n_modes: usize, cutoff: usize) -> Result<usize> {
    (cutoff + 1)
        .checked_pow(n_modes as u32)
        .filter(|&d| d <= 1 << 26)
        .ok_or_else(|| {
            Error::Dimension(format!(
                "{n_modes} modes at cutoff {cutoff} exceed the supported basis size"
            ))
        })
}

/// Warns when the geometric tail `q^{cutoff+1}` is not negligible.
fn warn_tail(q: f64, cutoff: usize) {
    let tail = q.powi(cutoff as i32 + 1);
    if tail >= 1e-12 {
        log::warn!("truncation tail {tail:.3e} at cutoff {cutoff}; raise the cutoff");
    }
}
