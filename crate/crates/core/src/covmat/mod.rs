//! Covariance matrices of zero-mean Gaussian states in the complex
//! `(a, a†)`-per-mode convention.
//!
//! A two-mode matrix has the layout
//!
//! ```text
//!        ⎛ n₁+½   m₁    m_s   m_c  ⎞
//!   V =  ⎜ m₁*   n₁+½   m_c*  m_s* ⎟  =  ⎛ V₁  C  ⎞
//!        ⎜ m_s*  m_c    n₂+½  m₂   ⎟     ⎝ C†  V₂ ⎠
//!        ⎝ m_c*  m_s    m₂*   n₂+½ ⎠
//! ```
//!
//! and in general `V_ij = (−1)^{i+j} ⟨{v_i, v_j†}⟩ / 2` for
//! `v = (a₁, a₁†, …, aₙ, aₙ†)`. Two structural invariants are enforced on
//! every [`CovarianceMatrix`]: Hermiticity and pair-conjugation symmetry
//! `V = K·conj(V)·K`, with `K` swapping the two rows/columns of every mode.

mod eigen;
mod physicality;
mod schur;

use std::collections::BTreeMap;

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::{CMat, Error, Result, C64};

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen};
pub use physicality::{
    check_physicality, check_physicality_blockwise, det_decomposition_residual, is_psd,
    PhysicalityReport,
};
pub use schur::{eliminate_mode, inverse_2x2, schur_complement};

/// 2×2 complex block (a local matrix `Vᵢ` or a correlation `C_ij`).
pub type Block = Matrix2<C64>;

/// Tolerance on Hermiticity and pair-conjugation symmetry, relative to
/// `max(1, max |V_ij|)`.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Default tolerance on the minimum eigenvalue of positivity checks.
pub const PSD_TOL: f64 = 1e-10;

/// Blocks with `|det| <= SINGULAR_DET` are not inverted.
pub const SINGULAR_DET: f64 = 1e-14;

/// Covariance matrix of an n-mode zero-mean Gaussian state or operator.
///
/// The type only guarantees the structural invariants (finite, Hermitian,
/// pair-conjugation symmetric). Physicality is a separate question answered
/// by [`check_physicality`]; parity-conditioned operators are legitimately
/// unphysical.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n_modes: usize,
    entries: CMat,
}

impl CovarianceMatrix {
    /// Validates `entries` and wraps it.
    pub fn new(entries: CMat) -> Result<Self> {
        let n_modes = modes_of(&entries)?;
        check_finite(&entries)?;
        let scale = scale_of(&entries);
        let herm = hermitian_deviation(&entries);
        if herm > SYMMETRY_TOL * scale {
            return Err(Error::NotHermitian { deviation: herm });
        }
        let pair = pair_deviation(&entries);
        if pair > SYMMETRY_TOL * scale {
            return Err(Error::PairSymmetry { deviation: pair });
        }
        Ok(Self { n_modes, entries })
    }

    /// Projects `entries` onto the Hermitian, pair-symmetric subspace and
    /// wraps the result. Used for outputs of arithmetic that preserves the
    /// invariants only up to roundoff.
    pub(crate) fn symmetrized(entries: CMat) -> Result<Self> {
        let n_modes = modes_of(&entries)?;
        check_finite(&entries)?;
        let herm = (&entries + entries.adjoint()).scale(0.5);
        let dim = herm.nrows();
        let sym = CMat::from_fn(dim, dim, |i, j| {
            0.5 * (herm[(i, j)] + herm[(partner(i), partner(j))].conj())
        });
        Ok(Self {
            n_modes,
            entries: sym,
        })
    }

    /// Wraps a matrix already known to satisfy the invariants exactly.
    pub(crate) fn from_trusted(entries: CMat) -> Self {
        let n_modes = entries.nrows() / 2;
        Self { n_modes, entries }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Matrix dimension, `2 * n_modes`.
    pub fn dim(&self) -> usize {
        2 * self.n_modes
    }

    pub fn matrix(&self) -> &CMat {
        &self.entries
    }

    pub fn into_matrix(self) -> CMat {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    /// Local block `Vᵢ` of mode `i` (0-based).
    pub fn local_block(&self, mode: usize) -> Result<Block> {
        self.check_mode(mode)?;
        Ok(self.block(mode, mode))
    }

    /// Block in row-mode `i` and column-mode `j`; equals `C_ij` for `i < j`
    /// and `C_ji†` for `i > j`.
    pub fn block(&self, i: usize, j: usize) -> Block {
        self.entries.fixed_view::<2, 2>(2 * i, 2 * j).into_owned()
    }

    /// Mean photon number of mode `i`: `V_{2i,2i} − ½`.
    pub fn mean_photon_number(&self, mode: usize) -> Result<f64> {
        self.check_mode(mode)?;
        Ok(self.entries[(2 * mode, 2 * mode)].re - 0.5)
    }

    /// Determinant; real for Hermitian matrices.
    pub fn det(&self) -> f64 {
        self.entries.determinant().re
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
}

/// Two-mode matrix with the moment layout shown in the module docs.
pub fn build_two_mode(
    n1: f64,
    m1: C64,
    n2: f64,
    m2: C64,
    ms: C64,
    mc: C64,
) -> Result<CovarianceMatrix> {
    for (k, x) in [
        n1, m1.re, m1.im, n2, m2.re, m2.im, ms.re, ms.im, mc.re, mc.im,
    ]
    .into_iter()
    .enumerate()
    {
        if !x.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "non-finite two-mode moment (argument component {k})"
            )));
        }
    }
    let d1 = C64::new(n1 + 0.5, 0.0);
    let d2 = C64::new(n2 + 0.5, 0.0);
    #[rustfmt::skip]
    let entries = CMat::from_row_slice(4, 4, &[
        d1,          m1,         ms,          mc,
        m1.conj(),   d1,         mc.conj(),   ms.conj(),
        ms.conj(),   mc,         d2,          m2,
        mc.conj(),   ms,         m2.conj(),   d2,
    ]);
    Ok(CovarianceMatrix::from_trusted(entries))
}

/// Local blocks and correlation blocks of an n-mode covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition {
    pub locals: Vec<Block>,
    /// `C_ij` for every `i < j`.
    pub correlations: BTreeMap<(usize, usize), Block>,
}

impl BlockDecomposition {
    pub fn n_modes(&self) -> usize {
        self.locals.len()
    }

    /// Rebuilds the full matrix from its blocks.
    pub fn reassemble(&self) -> Result<CovarianceMatrix> {
        let n = self.locals.len();
        let mut m = CMat::zeros(2 * n, 2 * n);
        for (i, local) in self.locals.iter().enumerate() {
            m.fixed_view_mut::<2, 2>(2 * i, 2 * i).copy_from(local);
        }
        for (&(i, j), c) in &self.correlations {
            if i >= j || j >= n {
                return Err(Error::Dimension(format!(
                    "invalid correlation key ({i}, {j})"
                )));
            }
            m.fixed_view_mut::<2, 2>(2 * i, 2 * j).copy_from(c);
            m.fixed_view_mut::<2, 2>(2 * j, 2 * i)
                .copy_from(&c.adjoint());
        }
        CovarianceMatrix::new(m)
    }
}

pub fn block_decompose(v: &CovarianceMatrix) -> BlockDecomposition {
    let n = v.n_modes();
    let locals = (0..n).map(|i| v.block(i, i)).collect();
    let mut correlations = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            correlations.insert((i, j), v.block(i, j));
        }
    }
    BlockDecomposition {
        locals,
        correlations,
    }
}

/// `Z = diag(1, −1)`.
pub fn z_matrix() -> Block {
    Block::new(
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(-1.0, 0.0),
    )
}

/// `E_n = diag(Z, …, Z)`.
pub fn e_matrix(n_modes: usize) -> CMat {
    CMat::from_fn(2 * n_modes, 2 * n_modes, |i, j| {
        if i != j {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(sign(i), 0.0)
        }
    })
}

/// Permutation swapping rows/columns `2k ↔ 2k+1` within each mode.
pub fn k_matrix(n_modes: usize) -> CMat {
    CMat::from_fn(2 * n_modes, 2 * n_modes, |i, j| {
        if partner(i) == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Sign-free moment matrix `Ṽ = D V D`, `D = diag(+1, −1, +1, −1, …)`,
/// whose entries are the plain symmetrized moments `⟨{v_i, v_j†}⟩ / 2`.
pub fn to_moment_matrix(v: &CovarianceMatrix) -> CMat {
    flip_signs(v.matrix())
}

/// Inverse of [`to_moment_matrix`].
pub fn from_moment_matrix(m: &CMat) -> Result<CovarianceMatrix> {
    CovarianceMatrix::new(flip_signs(m))
}

fn flip_signs(m: &CMat) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| {
        if (i + j) % 2 == 1 {
            -m[(i, j)]
        } else {
            m[(i, j)]
        }
    })
}

/// Index of the other member of `i`'s mode pair.
pub(crate) fn partner(i: usize) -> usize {
    i ^ 1
}

fn sign(i: usize) -> f64 {
    if i.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn modes_of(m: &CMat) -> Result<usize> {
    let (r, c) = m.shape();
    if r != c || r == 0 || r % 2 != 0 {
        return Err(Error::Dimension(format!(
            "covariance matrix must be 2n×2n with n ≥ 1, got {r}×{c}"
        )));
    }
    Ok(r / 2)
}

fn check_finite(m: &CMat) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Largest entry modulus of a complex matrix or vector.
pub trait MaxAbs {
    fn max_abs(&self) -> f64;
}

impl<R: nalgebra::Dim, C: nalgebra::Dim, S: nalgebra::RawStorage<C64, R, C>> MaxAbs
    for nalgebra::Matrix<C64, R, C, S>
{
    fn max_abs(&self) -> f64 {
        self.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub(crate) fn scale_of(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(1.0, f64::max)
}

pub(crate) fn hermitian_deviation(m: &CMat) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn pair_deviation(m: &CMat) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(partner(i), partner(j))].conj()).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn tmsv_half() -> CovarianceMatrix {
        let r: f64 = 0.5;
        let s = r.sinh().powi(2);
        build_two_mode(s, c(0.0), s, c(0.0), c(0.0), c(r.cosh() * r.sinh())).unwrap()
    }

    #[test]
    fn zero_moments_give_vacuum() {
        let v = build_two_mode(0.0, c(0.0), 0.0, c(0.0), c(0.0), c(0.0)).unwrap();
        assert_eq!(v.matrix(), &CMat::identity(4, 4).scale(0.5));
    }

    #[test]
    fn tmsv_layout() {
        let v = tmsv_half();
        assert_abs_diff_eq!(v.get(0, 0).re, 0.771540317, epsilon = 1e-9);
        assert_abs_diff_eq!(v.get(0, 3).re, 0.587600596, epsilon = 1e-9);
        assert_abs_diff_eq!(v.get(3, 0).re, 0.587600596, epsilon = 1e-9);
        assert_abs_diff_eq!(v.get(1, 2).re, 0.587600596, epsilon = 1e-9);
        assert_eq!(v.get(0, 1), c(0.0));
        CovarianceMatrix::new(v.matrix().clone()).unwrap();
    }

    #[test]
    fn uncorrelated_thermals_are_block_diagonal() {
        let v = build_two_mode(1.0, c(0.0), 2.0, c(0.0), c(0.0), c(0.0)).unwrap();
        let expected = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
            c(1.5),
            c(1.5),
            c(2.5),
            c(2.5),
        ]));
        assert_eq!(v.matrix(), &expected);
    }

    #[test]
    fn non_finite_moment_rejected() {
        assert!(build_two_mode(f64::NAN, c(0.0), 0.0, c(0.0), c(0.0), c(0.0)).is_err());
        assert!(build_two_mode(
            0.0,
            C64::new(0.0, f64::INFINITY),
            0.0,
            c(0.0),
            c(0.0),
            c(0.0)
        )
        .is_err());
    }

    #[test]
    fn validation_rejects_broken_structure() {
        let mut m = tmsv_half().into_matrix();
        m[(0, 3)] = c(0.6);
        assert!(matches!(
            CovarianceMatrix::new(m.clone()),
            Err(Error::NotHermitian { .. })
        ));
        // Hermitian but the two diagonal entries of mode 1 differ.
        m = tmsv_half().into_matrix();
        m[(0, 0)] = c(1.0);
        assert!(matches!(
            CovarianceMatrix::new(m),
            Err(Error::PairSymmetry { .. })
        ));
        assert!(matches!(
            CovarianceMatrix::new(CMat::zeros(3, 3)),
            Err(Error::Dimension(_))
        ));
        let mut nan = CMat::identity(2, 2);
        nan[(1, 0)] = C64::new(f64::NAN, 0.0);
        assert!(matches!(
            CovarianceMatrix::new(nan),
            Err(Error::NonFinite { row: 1, col: 0 })
        ));
    }

    #[test]
    fn blocks_of_vacuum_and_tmsv() {
        let vac = build_two_mode(0.0, c(0.0), 0.0, c(0.0), c(0.0), c(0.0)).unwrap();
        let b = block_decompose(&vac);
        assert_eq!(b.locals[0], Block::identity().scale(0.5));
        assert_eq!(b.locals[1], Block::identity().scale(0.5));
        assert_eq!(b.correlations[&(0, 1)], Block::zeros());

        let v = tmsv_half();
        let b = block_decompose(&v);
        assert_abs_diff_eq!(b.locals[0][(0, 0)].re, 0.771540317, epsilon = 1e-9);
        assert_eq!(b.locals[0][(0, 1)], c(0.0));
        let corr = b.correlations[&(0, 1)];
        assert_eq!(corr[(0, 0)], c(0.0));
        assert_abs_diff_eq!(corr[(0, 1)].re, 0.587600596, epsilon = 1e-9);
        assert_abs_diff_eq!(corr[(1, 0)].re, 0.587600596, epsilon = 1e-9);
        assert_eq!(b.reassemble().unwrap(), v);
    }

    #[test]
    fn constant_matrices_square_to_identity() {
        let z = z_matrix();
        assert_eq!(z * z, Block::identity());
        for n in 1..4 {
            let e = e_matrix(n);
            let k = k_matrix(n);
            assert_eq!(&e * &e, CMat::identity(2 * n, 2 * n));
            assert_eq!(&k * &k, CMat::identity(2 * n, 2 * n));
        }
    }

    #[test]
    fn moment_matrix_flips_off_parity_entries() {
        let v = tmsv_half();
        let m = to_moment_matrix(&v);
        assert_abs_diff_eq!(m[(0, 3)].re, -0.587600596, epsilon = 1e-9);
        assert_eq!(m[(0, 0)], v.get(0, 0));
        assert_eq!(from_moment_matrix(&m).unwrap(), v);

        let diag = build_two_mode(1.0, c(0.0), 2.0, c(0.0), c(0.0), c(0.0)).unwrap();
        assert_eq!(&to_moment_matrix(&diag), diag.matrix());
    }

    #[test]
    fn symmetrized_repairs_roundoff() {
        let mut m = tmsv_half().into_matrix();
        m[(0, 3)] += C64::new(1e-15, 1e-15);
        let v = CovarianceMatrix::symmetrized(m).unwrap();
        assert!(hermitian_deviation(v.matrix()) == 0.0);
        assert!(pair_deviation(v.matrix()) == 0.0);
    }
}
