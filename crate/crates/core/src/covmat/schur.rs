use crate::{CMat, Error, Result, C64};

use super::{Block, CovarianceMatrix, SINGULAR_DET};

/// Closed-form inverse of a 2×2 block. `mode` only labels the error.
pub fn inverse_2x2(b: &Block, mode: usize) -> Result<Block> {
    let det = b[(0, 0)] * b[(1, 1)] - b[(0, 1)] * b[(1, 0)];
    if det.norm() <= SINGULAR_DET {
        return Err(Error::SingularBlock {
            mode,
            det: det.norm(),
        });
    }
    let inv = det.inv();
    Ok(Block::new(
        b[(1, 1)] * inv,
        -b[(0, 1)] * inv,
        -b[(1, 0)] * inv,
        b[(0, 0)] * inv,
    ))
}

/// Schur complement of the block of mode `eliminate` in a two-mode matrix:
/// `V₁ − C V₂⁻¹ C†` for `eliminate = 1`, `V₂ − C† V₁⁻¹ C` for `eliminate = 0`.
pub fn schur_complement(v: &CovarianceMatrix, eliminate: usize) -> Result<CovarianceMatrix> {
    if v.n_modes() != 2 {
        return Err(Error::Dimension(format!(
            "schur_complement expects a two-mode matrix, got {} modes",
            v.n_modes()
        )));
    }
    eliminate_mode(v, eliminate)
}

/// Schur complement of the 2×2 diagonal block of mode `m` inside an n-mode
/// matrix: the `2(n−1)`-dimensional matrix with blocks
/// `M_ij − M_im M_mm⁻¹ M_mj` over the remaining modes, kept in their
/// original order.
pub fn eliminate_mode(v: &CovarianceMatrix, m: usize) -> Result<CovarianceMatrix> {
    v.check_mode(m)?;
    let n = v.n_modes();
    if n < 2 {
        return Err(Error::Dimension(
            "cannot eliminate the only mode of a one-mode matrix".into(),
        ));
    }
    let inv = inverse_2x2(&v.block(m, m), m)?;

    let rest: Vec<usize> = (0..v.dim()).filter(|&i| i / 2 != m).collect();
    let k = rest.len();
    let full = v.matrix();
    let coupling = CMat::from_fn(k, 2, |r, c| full[(rest[r], 2 * m + c)]);

    // W = B · M_mm⁻¹, then Γ = V_rest − W · B†, summed in a fixed order.
    let w = CMat::from_fn(k, 2, |r, c| {
        coupling[(r, 0)] * inv[(0, c)] + coupling[(r, 1)] * inv[(1, c)]
    });
    let gamma = CMat::from_fn(k, k, |r, c| {
        let update: C64 = w[(r, 0)] * coupling[(c, 0)].conj() + w[(r, 1)] * coupling[(c, 1)].conj();
        full[(rest[r], rest[c])] - update
    });
    CovarianceMatrix::symmetrized(gamma)
}
