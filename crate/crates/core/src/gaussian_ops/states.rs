//! Factory for the test states used across the crate.
//!
//! Phase convention: [`squeezed_vacuum`]`(r, φ)` has `m = −e^{iφ} cosh r sinh r`
//! and [`tmsv`]`(r)` has `m_c = cosh r sinh r`. In Fock space these are
//! `Σ_k (e^{iφ} tanh r)^k √((2k)!)/(2^k k!) |2k⟩ / √cosh r` and
//! `Σ_n (−tanh r)^n |n, n⟩ / cosh r`; the oracle in [`crate::fock`] uses
//! exactly these expansions.

use std::f64::consts::PI;

use rand::{Rng, RngExt};

use crate::covmat::{build_two_mode, CovarianceMatrix};
use crate::{CMat, Error, Result, C64};

use super::transforms::{apply_beamsplitter, apply_phase_shift, apply_squeezer};

/// `(1/2) I` on `n_modes` modes.
pub fn vacuum(n_modes: usize) -> CovarianceMatrix {
    CovarianceMatrix::from_trusted(CMat::identity(2 * n_modes, 2 * n_modes).scale(0.5))
}

/// Single-mode thermal state, `(n̄ + 1/2) I`.
pub fn thermal(nbar: f64) -> Result<CovarianceMatrix> {
    if !(nbar >= 0.0 && nbar.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "thermal occupation must be finite and non-negative, got {nbar}"
        )));
    }
    Ok(CovarianceMatrix::from_trusted(
        CMat::identity(2, 2).scale(nbar + 0.5),
    ))
}

/// Product of thermal states with the given occupations.
pub fn thermal_modes(nbars: &[f64]) -> Result<CovarianceMatrix> {
    let mut modes = nbars.iter().map(|&n| thermal(n));
    let first = modes
        .next()
        .ok_or_else(|| Error::InvalidArgument("need at least one mode".into()))??;
    modes.try_fold(first, |acc, m| Ok(tensor(&acc, &m?)))
}

/// Single-mode squeezed vacuum.
pub fn squeezed_vacuum(r: f64, phi: f64) -> CovarianceMatrix {
    let d = C64::new(r.sinh().powi(2) + 0.5, 0.0);
    let m = -C64::from_polar(r.cosh() * r.sinh(), phi);
    CovarianceMatrix::from_trusted(CMat::from_row_slice(2, 2, &[d, m, m.conj(), d]))
}

/// Two-mode squeezed vacuum.
pub fn tmsv(r: f64) -> CovarianceMatrix {
    let s = r.sinh().powi(2);
    let zero = C64::new(0.0, 0.0);
    build_two_mode(s, zero, s, zero, zero, C64::new(r.cosh() * r.sinh(), 0.0))
        .expect("finite by construction")
}

/// Block-diagonal concatenation `V_a ⊕ V_b` (modes of `a` first).
pub fn tensor(a: &CovarianceMatrix, b: &CovarianceMatrix) -> CovarianceMatrix {
    let (da, db) = (a.dim(), b.dim());
    let mut m = CMat::zeros(da + db, da + db);
    m.view_mut((0, 0), (da, da)).copy_from(a.matrix());
    m.view_mut((da, da), (db, db)).copy_from(b.matrix());
    CovarianceMatrix::from_trusted(m)
}

/// Random physical state: thermal modes (a quarter of them exactly pure),
/// local squeezing, a beam splitter on every pair, then local squeezing and
/// phase rotations again.
pub fn random_physical_state<R: Rng + ?Sized>(n_modes: usize, rng: &mut R) -> CovarianceMatrix {
    let nbars: Vec<f64> = (0..n_modes)
        .map(|_| {
            if rng.random_bool(0.25) {
                0.0
            } else {
                rng.random_range(0.05..1.5)
            }
        })
        .collect();
    let mut v = thermal_modes(&nbars).expect("non-negative occupations");
    let step = |v: CovarianceMatrix, r: Result<CovarianceMatrix>| r.unwrap_or(v);
    for k in 0..n_modes {
        let r = rng.random_range(0.0..0.8);
        let phi = rng.random_range(0.0..2.0 * PI);
        v = step(v.clone(), apply_squeezer(&v, k, r, phi));
    }
    for i in 0..n_modes {
        for j in i + 1..n_modes {
            let theta = rng.random_range(0.0..PI / 2.0);
            let phi = rng.random_range(0.0..2.0 * PI);
            v = step(v.clone(), apply_beamsplitter(&v, i, j, theta, phi));
        }
    }
    for k in 0..n_modes {
        let r = rng.random_range(0.0..0.4);
        let phi = rng.random_range(0.0..2.0 * PI);
        v = step(v.clone(), apply_squeezer(&v, k, r, phi));
        let rot = rng.random_range(0.0..2.0 * PI);
        v = step(v.clone(), apply_phase_shift(&v, k, rot));
    }
    v
}
