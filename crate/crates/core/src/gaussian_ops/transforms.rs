//! Gaussian unitaries acting through the sign-free moment matrix.
//!
//! A Heisenberg-picture map `a ↦ A a + B a†` on a subset of modes acts on the
//! vector `v = (a₁, a₁†, …)` as a matrix `T`, and on the moment matrix as
//! `Ṽ ↦ T Ṽ T†`. The signed covariance matrix `V = D Ṽ D` does not transform
//! this way, so every map converts to `Ṽ` and back.

use crate::covmat::{from_moment_matrix, to_moment_matrix, CovarianceMatrix};
use crate::{CMat, Error, Result, C64};

/// Beam splitter between modes `i` and `j`:
/// `aᵢ ↦ cos θ aᵢ + e^{iφ} sin θ aⱼ`, `aⱼ ↦ −e^{−iφ} sin θ aᵢ + cos θ aⱼ`.
pub fn apply_beamsplitter(
    v: &CovarianceMatrix,
    i: usize,
    j: usize,
    theta: f64,
    phi: f64,
) -> Result<CovarianceMatrix> {
    v.check_mode(i)?;
    v.check_mode(j)?;
    if i == j {
        return Err(Error::InvalidArgument(
            "beam splitter needs two distinct modes".into(),
        ));
    }
    let (s, c) = theta.sin_cos();
    let e = C64::from_polar(1.0, phi);
    let a = [[C64::new(c, 0.0), e * s], [-e.conj() * s, C64::new(c, 0.0)]];
    let zero = [[C64::new(0.0, 0.0); 2]; 2];
    bogoliubov(v, &[i, j], &a, &zero)
}

/// Phase rotation `a ↦ e^{iφ} a` of one mode.
pub fn apply_phase_shift(v: &CovarianceMatrix, mode: usize, phi: f64) -> Result<CovarianceMatrix> {
    v.check_mode(mode)?;
    let a = [[C64::from_polar(1.0, phi)]];
    let b = [[C64::new(0.0, 0.0)]];
    bogoliubov(v, &[mode], &a, &b)
}

/// Single-mode squeezer `a ↦ cosh r · a + e^{iφ} sinh r · a†`.
///
/// Acting on vacuum this gives [`super::squeezed_vacuum`]`(r, φ)`.
pub fn apply_squeezer(
    v: &CovarianceMatrix,
    mode: usize,
    r: f64,
    phi: f64,
) -> Result<CovarianceMatrix> {
    v.check_mode(mode)?;
    let a = [[C64::new(r.cosh(), 0.0)]];
    let b = [[C64::from_polar(r.sinh(), phi)]];
    bogoliubov(v, &[mode], &a, &b)
}

fn bogoliubov<const K: usize>(
    v: &CovarianceMatrix,
    modes: &[usize; K],
    a: &[[C64; K]; K],
    b: &[[C64; K]; K],
) -> Result<CovarianceMatrix> {
    let dim = v.dim();
    let mut t = CMat::identity(dim, dim);
    for (p, &mp) in modes.iter().enumerate() {
        for idx in [2 * mp, 2 * mp + 1] {
            for col in 0..dim {
                t[(idx, col)] = C64::new(0.0, 0.0);
            }
        }
        for (q, &mq) in modes.iter().enumerate() {
            t[(2 * mp, 2 * mq)] = a[p][q];
            t[(2 * mp, 2 * mq + 1)] = b[p][q];
            t[(2 * mp + 1, 2 * mq)] = b[p][q].conj();
            t[(2 * mp + 1, 2 * mq + 1)] = a[p][q].conj();
        }
    }
    let moments = to_moment_matrix(v);
    let transformed = &t * moments * t.adjoint();
    let signed = CovarianceMatrix::symmetrized(transformed)?;
    // Sign flips are exact, so this round trip only re-validates.
    from_moment_matrix(signed.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covmat::MaxAbs;
    use crate::covmat::{check_physicality, hermitian_eigenvalues};
    use crate::gaussian_ops::{
        random_physical_state, squeezed_vacuum, tensor, thermal, tmsv, vacuum,
    };
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn max_diff(a: &CovarianceMatrix, b: &CovarianceMatrix) -> f64 {
        (a.matrix() - b.matrix()).max_abs()
    }

    #[test]
    fn zero_angle_is_identity() {
        let v = tensor(&tmsv(0.5), &thermal(0.4).unwrap());
        let w = apply_beamsplitter(&v, 1, 2, 0.0, 0.3).unwrap();
        assert!(max_diff(&v, &w) <= 1e-15);
    }

    #[test]
    fn quarter_turn_swaps_local_blocks() {
        let v = tensor(&thermal(0.4).unwrap(), &squeezed_vacuum(0.7, 0.0));
        let w = apply_beamsplitter(&v, 0, 1, std::f64::consts::FRAC_PI_2, 0.0).unwrap();
        assert!((w.block(0, 0) - v.block(1, 1)).max_abs() <= 1e-15);
        assert!((w.block(1, 1) - v.block(0, 0)).max_abs() <= 1e-15);
        assert!((w.det() - v.det()).abs() <= 1e-14);
        let ev_v = hermitian_eigenvalues(v.matrix()).unwrap();
        let ev_w = hermitian_eigenvalues(w.matrix()).unwrap();
        for (x, y) in ev_v.iter().zip(&ev_w) {
            assert!((x - y).abs() <= 1e-13);
        }
    }

    #[test]
    fn squeezer_on_vacuum_matches_factory() {
        let w = apply_squeezer(&vacuum(1), 0, 0.8, 1.1).unwrap();
        assert!(max_diff(&w, &squeezed_vacuum(0.8, 1.1)) <= 1e-14);
    }

    #[test]
    fn beamsplitter_round_trip_and_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let v = random_physical_state(3, &mut rng);
            let w = apply_beamsplitter(&v, 0, 2, 0.37, -0.9).unwrap();
            assert!(check_physicality(&w).is_physical());
            assert!((w.det() - v.det()).abs() <= 1e-12 * v.det().abs().max(1.0));
            let ev_v = hermitian_eigenvalues(&to_moment_matrix(&v)).unwrap();
            let ev_w = hermitian_eigenvalues(&to_moment_matrix(&w)).unwrap();
            for (x, y) in ev_v.iter().zip(&ev_w) {
                assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
            }
            let back = apply_beamsplitter(&w, 0, 2, -0.37, -0.9).unwrap();
            assert!(max_diff(&back, &v) <= 1e-12);
        }
    }

    #[test]
    fn same_mode_rejected() {
        assert!(apply_beamsplitter(&vacuum(2), 1, 1, 0.1, 0.0).is_err());
        assert!(apply_beamsplitter(&vacuum(2), 0, 2, 0.1, 0.0).is_err());
    }
}
