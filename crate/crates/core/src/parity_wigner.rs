//! Parity and Wigner-at-origin statistics of Gaussian states.
//!
//! The Wigner function is normalized so that its value at the origin is
//! twice the average parity, `W(0) = 2 p̄`; the vacuum has `W(0) = 2`. This
//! differs from the `∫W = 1` convention by a factor `π` per mode.

use crate::covmat::{check_physicality, CovarianceMatrix};
use crate::{Error, Result};

/// Even/odd outcome statistics of a parity measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParityStatistics {
    pub p_bar: f64,
    pub p_even: f64,
    pub p_odd: f64,
}

/// `⟨(−1)^n⟩ = 1 / (2 √det V)` of a single-mode state.
pub fn average_parity(v: &CovarianceMatrix) -> Result<f64> {
    let det = single_mode_det(v)?;
    Ok(0.5 / det.sqrt())
}

pub fn parity_probabilities(v: &CovarianceMatrix) -> Result<ParityStatistics> {
    let p_bar = average_parity(v)?;
    let p_even = 0.5 * (1.0 + p_bar);
    Ok(ParityStatistics {
        p_bar,
        p_even,
        p_odd: 1.0 - p_even,
    })
}

/// Wigner function at the phase-space origin, `1 / √det V`.
pub fn wigner_origin(v: &CovarianceMatrix) -> Result<f64> {
    Ok(2.0 * average_parity(v)?)
}

/// Scalar Schur complement of the diagonal entry `n + 1/2` inside a
/// single-mode matrix: `n + 1/2 − |m|² / (n + 1/2)`.
///
/// `(n + 1/2) · scalar_schur(V) = det V`, so `W(0) = 1/√((n+½) · S)`.
pub fn scalar_schur(v: &CovarianceMatrix) -> Result<f64> {
    if v.n_modes() != 1 {
        return Err(Error::Dimension(format!(
            "expected a single-mode matrix, got {} modes",
            v.n_modes()
        )));
    }
    let d = v.get(0, 0).re;
    let m = v.get(0, 1);
    Ok(d - m.norm_sqr() / d)
}

/// `Tr ρ² = 1 / (2ⁿ √det V)`.
pub fn purity(v: &CovarianceMatrix) -> Result<f64> {
    require_physical(v)?;
    let det = v.det();
    Ok(1.0 / (2f64.powi(v.n_modes() as i32) * det.sqrt()))
}

fn single_mode_det(v: &CovarianceMatrix) -> Result<f64> {
    if v.n_modes() != 1 {
        return Err(Error::Dimension(format!(
            "expected a single-mode matrix, got {} modes",
            v.n_modes()
        )));
    }
    require_physical(v)?;
    let d = v.get(0, 0).re;
    Ok(d * d - v.get(0, 1).norm_sqr())
}

fn require_physical(v: &CovarianceMatrix) -> Result<()> {
    let report = check_physicality(v);
    if !report.is_physical() {
        return Err(Error::Unphysical {
            min_eig: report.min_eig_uncertainty,
        });
    }
    Ok(())
}
