//! Gaussian operations as maps on covariance matrices.
//!
//! Every reduction here is a Schur complement of a 2×2 diagonal block:
//!
//! | operation on the measured mode | matrix whose block is eliminated |
//! |--------------------------------|----------------------------------|
//! | projection onto vacuum         | `V` with `V_m + I/2` in place of `V_m` |
//! | partial trace                  | `V` with the correlations of mode m zeroed |
//! | parity projection              | `V` itself                        |
//!
//! The parity projection is the only one that yields the exact Schur
//! complement of the input covariance matrix. Its output describes the
//! Gaussian *operator* `σ = Tr_m{(−1)^{n_m} ρ}`, which is in general not a
//! state: its covariance matrix may violate the uncertainty relation.

mod states;
mod transforms;

use crate::covmat::{eliminate_mode, CovarianceMatrix};
use crate::{CMat, Error, Result, C64};

pub use states::{
    random_physical_state, squeezed_vacuum, tensor, thermal, thermal_modes, tmsv, vacuum,
};
pub use transforms::{apply_beamsplitter, apply_phase_shift, apply_squeezer};

/// Covariance matrix and weight of the operator left on the unmeasured
/// modes after a parity projection.
#[derive(Debug, Clone, PartialEq)]
pub struct ParityReduction {
    pub gamma: CovarianceMatrix,
    /// Trace of the conditioned operator, i.e. the expected parity of the
    /// measured mode, `1 / (2 √det V_m)`.
    pub weight: f64,
}

/// Result of projecting the measured mode onto the vacuum.
#[derive(Debug, Clone, PartialEq)]
pub struct VacuumProjection {
    /// Covariance matrix of the normalized conditioned state.
    pub gamma0: CovarianceMatrix,
    /// Probability of finding the measured mode in vacuum,
    /// `1 / √det(V_m + I/2)`.
    pub probability: f64,
}

/// Conditions the remaining modes on the vacuum outcome of `measured`.
pub fn vacuum_project(v: &CovarianceMatrix, measured: usize) -> Result<VacuumProjection> {
    v.check_mode(measured)?;
    if v.n_modes() < 2 {
        return Err(Error::Dimension(
            "vacuum projection needs at least two modes".into(),
        ));
    }
    let mut augmented = v.matrix().clone();
    for k in 0..2 {
        let idx = 2 * measured + k;
        augmented[(idx, idx)] += C64::new(0.5, 0.0);
    }
    let augmented = CovarianceMatrix::from_trusted(augmented);
    let block = augmented.block(measured, measured);
    let det = det_real(&block);
    if det <= 0.0 {
        return Err(Error::SingularBlock {
            mode: measured,
            det: det.abs(),
        });
    }
    let gamma0 = eliminate_mode(&augmented, measured)?;
    Ok(VacuumProjection {
        gamma0,
        probability: 1.0 / det.sqrt(),
    })
}

/// Reduced covariance matrix of the modes in `keep` (in ascending order;
/// duplicates ignored).
pub fn partial_trace(v: &CovarianceMatrix, keep: &[usize]) -> Result<CovarianceMatrix> {
    if keep.is_empty() {
        return Err(Error::InvalidArgument(
            "partial trace needs at least one mode to keep".into(),
        ));
    }
    let mut modes = keep.to_vec();
    modes.sort_unstable();
    modes.dedup();
    for &m in &modes {
        v.check_mode(m)?;
    }
    let idx: Vec<usize> = modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
    let full = v.matrix();
    let reduced = CMat::from_fn(idx.len(), idx.len(), |i, j| full[(idx[i], idx[j])]);
    Ok(CovarianceMatrix::from_trusted(reduced))
}

/// Parity projection on one mode of a two-mode matrix: `Γ = V₁ − C V₂⁻¹ C†`
/// (for `measured = 1`) with weight `1 / (2 √det V₂)`.
///
/// Physicality of the input is not required; the output is not checked for
/// it either.
pub fn parity_reduce(v: &CovarianceMatrix, measured: usize) -> Result<ParityReduction> {
    if v.n_modes() != 2 {
        return Err(Error::Dimension(format!(
            "parity_reduce expects a two-mode matrix, got {} modes; use parity_reduce_nmode",
            v.n_modes()
        )));
    }
    parity_reduce_nmode(v, measured)
}

/// Parity projection on mode `measured` of an n-mode matrix.
///
/// The output has blocks `Γ_ij = M_ij − M_im M_mm⁻¹ M_jm†` over the remaining
/// modes. Note the index `j` in the last factor: the compact form
/// `M_im M_mm⁻¹ M_im†` that is sometimes quoted for this result only holds on
/// the diagonal blocks; the explicit three- and four-mode matrices, and the
/// Fock-space oracle, require `M_jm†`.
pub fn parity_reduce_nmode(v: &CovarianceMatrix, measured: usize) -> Result<ParityReduction> {
    v.check_mode(measured)?;
    if v.n_modes() < 2 {
        return Err(Error::Dimension(
            "parity reduction needs at least two modes".into(),
        ));
    }
    let block = v.block(measured, measured);
    let det = det_real(&block);
    let gamma = eliminate_mode(v, measured)?;
    if det <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "measured block has non-positive determinant {det:e}"
        )));
    }
    Ok(ParityReduction {
        gamma,
        weight: 0.5 / det.sqrt(),
    })
}

fn det_real(b: &crate::covmat::Block) -> f64 {
    (b[(0, 0)] * b[(1, 1)] - b[(0, 1)] * b[(1, 0)]).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covmat::MaxAbs;
    use crate::covmat::{block_decompose, check_physicality, schur_complement};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assert_scaled_identity(v: &CovarianceMatrix, x: f64, eps: f64) {
        let id = CMat::identity(v.dim(), v.dim()).scale(x);
        let diff = (v.matrix() - id).max_abs();
        assert!(diff <= eps, "max deviation {diff:e} from {x}·I");
    }

    #[test]
    fn vacuum_projection_examples() {
        // Uncorrelated: thermal mode 2 is found in vacuum with 1/(n̄+1).
        let v = tensor(&thermal(0.7).unwrap(), &thermal(1.5).unwrap());
        let p = vacuum_project(&v, 1).unwrap();
        assert_eq!(p.gamma0.block(0, 0), v.block(0, 0));
        assert_abs_diff_eq!(p.probability, 1.0 / 2.5, epsilon = 1e-15);

        let p = vacuum_project(&tmsv(0.5), 1).unwrap();
        assert_scaled_identity(&p.gamma0, 0.5, 1e-14);
        assert_abs_diff_eq!(p.probability, 1.0 / 1.271540317, epsilon = 1e-9);
        assert_abs_diff_eq!(p.probability, 0.786447, epsilon = 1e-6);

        let p = vacuum_project(&vacuum(2), 1).unwrap();
        assert_scaled_identity(&p.gamma0, 0.5, 0.0);
        assert_eq!(p.probability, 1.0);
    }

    #[test]
    fn vacuum_projection_of_mode_one() {
        let v = tensor(&thermal(0.3).unwrap(), &squeezed_vacuum(0.4, 0.2));
        let p = vacuum_project(&v, 0).unwrap();
        assert_eq!(p.gamma0.block(0, 0), v.block(1, 1));
        assert_abs_diff_eq!(p.probability, 1.0 / 1.3, epsilon = 1e-15);
    }

    #[test]
    fn partial_trace_examples() {
        let t = partial_trace(&tmsv(0.5), &[0]).unwrap();
        assert_scaled_identity(&t, 0.5f64.sinh().powi(2) + 0.5, 1e-15);

        let a = thermal(0.3).unwrap();
        let b = squeezed_vacuum(0.6, 1.0);
        let prod = tensor(&a, &b);
        assert_eq!(partial_trace(&prod, &[1]).unwrap(), b);
        assert_eq!(partial_trace(&prod, &[0, 1]).unwrap(), prod);
        assert_eq!(partial_trace(&prod, &[1, 0, 1]).unwrap(), prod);
        assert!(partial_trace(&prod, &[]).is_err());
        assert!(partial_trace(&prod, &[2]).is_err());
    }

    #[test]
    fn parity_reduce_examples() {
        let nbar = 0.5f64.sinh().powi(2);
        let v = tensor(&thermal(2.0).unwrap(), &thermal(nbar).unwrap());
        let p = parity_reduce(&v, 1).unwrap();
        assert_eq!(p.gamma.block(0, 0), v.block(0, 0));
        assert_abs_diff_eq!(p.weight, 1.0 / (2.0 * nbar + 1.0), epsilon = 1e-15);
        assert_abs_diff_eq!(p.weight, 0.648054, epsilon = 1e-6);

        let p = parity_reduce(&tmsv(0.5), 1).unwrap();
        assert_scaled_identity(&p.gamma, 0.25 / (nbar + 0.5), 1e-14);
        assert_abs_diff_eq!(p.weight, 0.648054, epsilon = 1e-6);

        let p = parity_reduce(&vacuum(2), 1).unwrap();
        assert_scaled_identity(&p.gamma, 0.5, 0.0);
        assert_eq!(p.weight, 1.0);
    }

    #[test]
    fn parity_gamma_may_be_unphysical() {
        let p = parity_reduce(&tmsv(0.5), 1).unwrap();
        assert!(!check_physicality(&p.gamma).uncertainty_ok);
    }

    #[test]
    fn parity_reduce_rejects_bad_input() {
        assert!(parity_reduce(&vacuum(3), 1).is_err());
        assert!(parity_reduce(&vacuum(2), 2).is_err());
        assert!(parity_reduce_nmode(&vacuum(1), 0).is_err());
    }

    #[test]
    fn nmode_base_case_is_bit_identical() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let v = random_physical_state(2, &mut rng);
            for m in 0..2 {
                let a = parity_reduce(&v, m).unwrap();
                let b = parity_reduce_nmode(&v, m).unwrap();
                assert_eq!(a, b);
                assert_eq!(a.gamma, schur_complement(&v, m).unwrap());
            }
        }
    }

    #[test]
    fn nmode_with_uncorrelated_measured_mode() {
        let v = tensor(&tmsv(0.5), &thermal(1.0).unwrap());
        let p = parity_reduce_nmode(&v, 2).unwrap();
        assert_eq!(p.gamma, tmsv(0.5));
        assert_abs_diff_eq!(p.weight, 1.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn nmode_diagonal_blocks_match_marginal_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let v = random_physical_state(3, &mut rng);
            for m in 0..3 {
                let full = parity_reduce_nmode(&v, m).unwrap();
                let kept: Vec<usize> = (0..3).filter(|&k| k != m).collect();
                for (slot, &i) in kept.iter().enumerate() {
                    let pair = partial_trace(&v, &[i, m]).unwrap();
                    let measured_slot = if i < m { 1 } else { 0 };
                    let two = parity_reduce(&pair, measured_slot).unwrap();
                    let diff = (full.gamma.block(slot, slot) - two.gamma.block(0, 0)).max_abs();
                    assert!(diff <= 1e-12, "block {i} after measuring {m}: {diff:e}");
                    assert_eq!(full.weight, two.weight);
                }
            }
        }
    }

    #[test]
    fn nmode_off_diagonal_uses_jm_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = random_physical_state(4, &mut rng);
        let b = block_decompose(&v);
        let p = parity_reduce_nmode(&v, 3).unwrap();
        let inv = crate::covmat::inverse_2x2(&b.locals[3], 3).unwrap();
        let c = |i: usize, j: usize| b.correlations[&(i, j)];
        // Γ_12 = C_12 − C_14 V_4⁻¹ C_24†, Γ_23 = C_23 − C_24 V_4⁻¹ C_34†.
        let g12 = c(0, 1) - c(0, 3) * inv * c(1, 3).adjoint();
        let g23 = c(1, 2) - c(1, 3) * inv * c(2, 3).adjoint();
        assert!((p.gamma.block(0, 1) - g12).max_abs() <= 1e-13);
        assert!((p.gamma.block(1, 2) - g23).max_abs() <= 1e-13);
        // Γ_21 = C_12† − C_24 V_4⁻¹ C_14†.
        let g21 = c(0, 1).adjoint() - c(1, 3) * inv * c(0, 3).adjoint();
        assert!((p.gamma.block(1, 0) - g21).max_abs() <= 1e-13);
    }

    #[test]
    fn vacuum_projection_output_is_physical() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let v = random_physical_state(2, &mut rng);
            for m in 0..2 {
                let p = vacuum_project(&v, m).unwrap();
                assert!(check_physicality(&p.gamma0).uncertainty_ok);
                assert!(p.probability > 0.0 && p.probability <= 1.0 + 1e-15);
            }
        }
    }
}
