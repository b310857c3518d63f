//! Local symplectic invariants of two-mode states and the entanglement
//! quantities built from them.
//!
//! `I₁ = det V₁`, `I₂ = det V₂`, `I₃ = det C` and
//! `I₄ = Tr[V₁ Z C Z V₂ Z C† Z]` are unchanged by local Gaussian unitaries.
//! They can be recovered from local data alone: `V₁`, `V₂` and the
//! parity-conditioned block `Γ₁ = V₁ − C V₂⁻¹ C†` give
//!
//! ```text
//! |I₃| = √(I₂ det(V₁ − Γ₁)),      I₄ = I₁ I₂ + I₃² − I₂ det Γ₁.
//! ```
//!
//! Only `|I₃|` is recoverable this way. Both the Simon test and the
//! entanglement of formation depend on `I₃` only through `|I₃|`.

use crate::covmat::{check_physicality, z_matrix, Block, CovarianceMatrix};
use crate::{Error, Result};

const SEPARABILITY_TOL: f64 = 1e-12;
const SYMMETRY_TOL: f64 = 1e-9;
const RADICAND_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticInvariants {
    pub i1: f64,
    pub i2: f64,
    /// Signed `det C`; reconstructed invariants carry `|I₃|` here.
    pub i3: f64,
    pub i4: f64,
}

impl SymplecticInvariants {
    pub fn abs_i3(&self) -> f64 {
        self.i3.abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparabilityVerdict {
    pub lhs: f64,
    pub rhs: f64,
    pub separable: bool,
}

pub fn invariants(v: &CovarianceMatrix) -> Result<SymplecticInvariants> {
    if v.n_modes() != 2 {
        return Err(Error::Dimension(format!(
            "invariants are defined for two-mode states, got {} modes",
            v.n_modes()
        )));
    }
    let report = check_physicality(v);
    if !report.is_physical() {
        return Err(Error::Unphysical {
            min_eig: report.min_eig_uncertainty,
        });
    }
    Ok(invariants_unchecked(
        &v.block(0, 0),
        &v.block(1, 1),
        &v.block(0, 1),
    ))
}

fn invariants_unchecked(v1: &Block, v2: &Block, c: &Block) -> SymplecticInvariants {
    let z = z_matrix();
    let product = v1 * z * c * z * v2 * z * c.adjoint() * z;
    SymplecticInvariants {
        i1: det2(v1),
        i2: det2(v2),
        i3: det2(c),
        i4: product.trace().re,
    }
}

/// `(|I₃|, I₄)` from `V₁`, `V₂` and the parity-conditioned block `Γ₁`.
pub fn reconstruct_i3_i4(v1: &Block, v2: &Block, gamma: &Block) -> Result<(f64, f64)> {
    let i1 = det2(v1);
    let i2 = det2(v2);
    let mut d = det2(&(v1 - gamma));
    if d < -RADICAND_TOL {
        return Err(Error::Inconsistent(d));
    }
    d = d.max(0.0);
    let i3_sq = i2 * d;
    let i4 = i1 * i2 + i3_sq - i2 * det2(gamma);
    Ok((i3_sq.sqrt(), i4))
}

/// Full invariant set from local data, with `i3 = |I₃|`.
pub fn reconstruct_invariants(
    v1: &Block,
    v2: &Block,
    gamma: &Block,
) -> Result<SymplecticInvariants> {
    let (abs_i3, i4) = reconstruct_i3_i4(v1, v2, gamma)?;
    Ok(SymplecticInvariants {
        i1: det2(v1),
        i2: det2(v2),
        i3: abs_i3,
        i4,
    })
}

/// Simon's necessary and sufficient separability condition
/// `I₁I₂ + (1/4 − |I₃|)² − I₄ ≥ (I₁ + I₂)/4`.
pub fn simon_test(inv: &SymplecticInvariants) -> SeparabilityVerdict {
    let lhs = inv.i1 * inv.i2 + (0.25 - inv.abs_i3()).powi(2) - inv.i4;
    let rhs = (inv.i1 + inv.i2) / 4.0;
    SeparabilityVerdict {
        lhs,
        rhs,
        separable: lhs - rhs >= -SEPARABILITY_TOL,
    }
}

/// Symmetric-state parameter `x = 2 √(I₁ + |I₃| − √(I₄ + 2 I₁ |I₃|))`,
/// the smallest symplectic eigenvalue of the partial transpose in units
/// where the vacuum has `x = 1`.
pub fn eof_parameter(inv: &SymplecticInvariants) -> Result<f64> {
    if (inv.i1 - inv.i2).abs() > SYMMETRY_TOL {
        return Err(Error::Asymmetric((inv.i1 - inv.i2).abs()));
    }
    let abs_i3 = inv.abs_i3();
    let inner = clip(inv.i4 + 2.0 * inv.i1 * abs_i3)?;
    let outer = clip(inv.i1 + abs_i3 - inner.sqrt())?;
    Ok(2.0 * outer.sqrt())
}

/// Entanglement of formation (bits) of a symmetric two-mode state:
/// `E_f = c₊ log₂ c₊ − c₋ log₂ c₋` with `c± = (x^{−1/2} ± x^{1/2})² / 4`,
/// zero for `x ≥ 1`.
pub fn eof_symmetric(inv: &SymplecticInvariants) -> Result<f64> {
    let x = eof_parameter(inv)?;
    if x >= 1.0 {
        return Ok(0.0);
    }
    if x <= 0.0 {
        return Err(Error::InvalidArgument(
            "entanglement of formation diverges (x = 0)".into(),
        ));
    }
    let (lo, hi) = (x.sqrt(), x.sqrt().recip());
    let c_plus = (hi + lo).powi(2) / 4.0;
    let c_minus = (hi - lo).powi(2) / 4.0;
    let minus_term = if c_minus > 0.0 {
        c_minus * c_minus.log2()
    } else {
        0.0
    };
    Ok(c_plus * c_plus.log2() - minus_term)
}

fn clip(x: f64) -> Result<f64> {
    if x < -RADICAND_TOL {
        return Err(Error::Inconsistent(x));
    }
    Ok(x.max(0.0))
}

fn det2(b: &Block) -> f64 {
    (b[(0, 0)] * b[(1, 1)] - b[(0, 1)] * b[(1, 0)]).re
}
