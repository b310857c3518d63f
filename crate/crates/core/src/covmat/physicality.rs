//! Positivity and uncertainty-principle checks, direct and blockwise.

use crate::{CMat, Error, Result, C64};

use super::{
    e_matrix, hermitian_eigen, hermitian_eigenvalues, inverse_2x2, schur_complement, z_matrix,
    Block, CovarianceMatrix, PSD_TOL, SINGULAR_DET,
};

/// Outcome of a physicality check.
///
/// For the blockwise variant the minimum eigenvalues are the smallest
/// eigenvalue over the blocks and Schur complements examined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalityReport {
    /// `V ≥ 0`.
    pub psd_ok: bool,
    /// `V + E/2 ≥ 0`.
    pub uncertainty_ok: bool,
    pub min_eig_v: f64,
    pub min_eig_uncertainty: f64,
    pub tolerance: f64,
}

impl PhysicalityReport {
    pub fn is_physical(&self) -> bool {
        self.psd_ok && self.uncertainty_ok
    }
}

/// `(min eigenvalue ≥ −tol, min eigenvalue)`. Empty matrices are PSD with
/// minimum `+∞`.
pub fn is_psd(m: &CMat, tol: f64) -> Result<(bool, f64)> {
    let ev = hermitian_eigenvalues(m)?;
    let min = ev.first().copied().unwrap_or(f64::INFINITY);
    Ok((min >= -tol, min))
}

pub fn check_physicality(v: &CovarianceMatrix) -> PhysicalityReport {
    // A CovarianceMatrix is Hermitian by construction, so the solver accepts it.
    let (psd_ok, min_eig_v) = is_psd(v.matrix(), PSD_TOL).expect("Hermitian by invariant");
    let shifted = v.matrix() + e_matrix(v.n_modes()).scale(0.5);
    let (uncertainty_ok, min_eig_uncertainty) =
        is_psd(&shifted, PSD_TOL).expect("Hermitian by invariant");
    PhysicalityReport {
        psd_ok,
        uncertainty_ok,
        min_eig_v,
        min_eig_uncertainty,
        tolerance: PSD_TOL,
    }
}

/// Two-mode physicality from the blocks alone: `V ≥ 0` via `V₂ ≥ 0` and
/// `V₁ − C V₂⁻¹ C† ≥ 0`, and `V + E/2 ≥ 0` via `P = V₂ + Z/2 ≥ 0` and
/// `(V₁ + Z/2) − C P⁻¹ C† ≥ 0`.
///
/// `P` is singular for every state whose second mode is pure. In that case
/// the generalized Schur complement with the pseudo-inverse `P⁺` is used,
/// together with the range condition `C (I − P P⁺) = 0`.
pub fn check_physicality_blockwise(v: &CovarianceMatrix) -> Result<PhysicalityReport> {
    if v.n_modes() != 2 {
        return Err(Error::Dimension(format!(
            "blockwise check expects a two-mode matrix, got {} modes",
            v.n_modes()
        )));
    }
    let v1 = v.block(0, 0);
    let v2 = v.block(1, 1);
    let c = v.block(0, 1);
    let half_z = z_matrix().scale(0.5);

    let (psd_ok, min_eig_v) = block_psd(&v1, &v2, &c)?;
    let (uncertainty_ok, min_eig_uncertainty) = block_psd(&(v1 + half_z), &(v2 + half_z), &c)?;

    Ok(PhysicalityReport {
        psd_ok,
        uncertainty_ok,
        min_eig_v,
        min_eig_uncertainty,
        tolerance: PSD_TOL,
    })
}

/// PSD test of `[[a, c], [c†, d]]` via the (generalized) Schur complement of
/// `d`.
fn block_psd(a: &Block, d: &Block, c: &Block) -> Result<(bool, f64)> {
    let d_dyn = to_dyn(d);
    let eig = hermitian_eigen(&d_dyn)?;
    let d_min = eig.values[0];
    let d_max = eig.values[1].abs().max(1.0);
    if d_min < -PSD_TOL {
        return Ok((false, d_min));
    }

    let cutoff = PSD_TOL * d_max;
    let (pinv, range_ok) = if d_min > cutoff {
        (inverse_2x2(d, 1)?, true)
    } else {
        let mut pinv = Block::zeros();
        for (k, &lambda) in eig.values.iter().enumerate() {
            if lambda > cutoff {
                let u = eig.vectors.column(k);
                for i in 0..2 {
                    for j in 0..2 {
                        pinv[(i, j)] += u[i] * u[j].conj() / lambda;
                    }
                }
            }
        }
        let projector_complement = Block::identity() - d * pinv;
        let leak = (c * projector_complement).norm();
        (pinv, leak <= PSD_TOL * c.norm().max(1.0))
    };

    let schur = a - c * pinv * c.adjoint();
    let schur_min = hermitian_eigenvalues(&to_dyn(&schur))?[0];
    let min = d_min.min(schur_min);
    Ok((range_ok && schur_min >= -PSD_TOL, min))
}

/// `|det V − det V₁ det(V₂ − C†V₁⁻¹C)| + |det V − det V₂ det(V₁ − C V₂⁻¹ C†)|`.
pub fn det_decomposition_residual(v: &CovarianceMatrix) -> Result<f64> {
    if v.n_modes() != 2 {
        return Err(Error::Dimension(format!(
            "determinant decomposition expects a two-mode matrix, got {} modes",
            v.n_modes()
        )));
    }
    let det_v: C64 = v.matrix().determinant();
    let mut residual = 0.0;
    for kept in 0..2 {
        let eliminated = 1 - kept;
        let local = v.block(eliminated, eliminated);
        let det_local = det2(&local);
        if det_local.norm() <= SINGULAR_DET {
            return Err(Error::SingularBlock {
                mode: eliminated,
                det: det_local.norm(),
            });
        }
        let s = schur_complement(v, eliminated)?;
        let det_s = det2(&s.block(0, 0));
        residual += (det_v - det_local * det_s).norm();
    }
    Ok(residual)
}

fn det2(b: &Block) -> C64 {
    b[(0, 0)] * b[(1, 1)] - b[(0, 1)] * b[(1, 0)]
}

fn to_dyn(b: &Block) -> CMat {
    CMat::from_fn(2, 2, |i, j| b[(i, j)])
}
