use nalgebra::DVector;

use super::FockDensity;
use crate::{Error, Result, C64};

const LOSS_WARN: f64 = 1e-8;
const LOSS_REJECT: f64 = 1e-4;

/// Beam splitter between modes `i` and `j` with the same convention as
/// [`crate::gaussian_ops::apply_beamsplitter`]. In the Schrödinger picture
///
/// ```text
/// U |n, m⟩ = (c aᵢ† − e^{−iφ} s aⱼ†)ⁿ (e^{iφ} s aᵢ† + c aⱼ†)ᵐ |0, 0⟩ / √(n! m!)
/// ```
///
/// with `c = cos θ`, `s = sin θ`, expanded binomially with log-factorials.
/// Output population beyond the cutoff is dropped; a relative loss above
/// `1e-8` is logged and above `1e-4` rejected.
pub fn beamsplitter_fock(
    rho: &FockDensity,
    i: usize,
    j: usize,
    theta: f64,
    phi: f64,
) -> Result<FockDensity> {
    rho.check_mode(i)?;
    rho.check_mode(j)?;
    if i == j {
        return Err(Error::InvalidArgument(
            "beam splitter needs two distinct modes".into(),
        ));
    }
    if !(theta.is_finite() && phi.is_finite()) {
        return Err(Error::InvalidArgument("angles must be finite".into()));
    }
    let cutoff = rho.cutoff();
    let table = Table::new(cutoff, theta, phi);
    let b = cutoff + 1;
    let (si, sj) = (rho.stride(i), rho.stride(j));

    let mut lost = 0.0;
    let mut total = 0.0;
    let mut terms = Vec::with_capacity(rho.terms().len());
    for (w, psi) in rho.terms() {
        let mut out = DVector::<C64>::zeros(psi.len());
        for (idx, &amp) in psi.iter().enumerate() {
            if amp.re == 0.0 && amp.im == 0.0 {
                continue;
            }
            let n = (idx / si) % b;
            let m = (idx / sj) % b;
            let base = idx - n * si - m * sj;
            let total_photons = n + m;
            for (k, coeff) in table.outputs(n, m) {
                let l = total_photons - k;
                out[base + k * si + l * sj] += amp * coeff;
            }
        }
        let before = psi.norm_squared();
        lost += w.abs() * (before - out.norm_squared()).max(0.0);
        total += w.abs() * before;
        terms.push((*w, out));
    }
    let relative = if total > 0.0 { lost / total } else { 0.0 };
    if relative > LOSS_REJECT {
        return Err(Error::Truncation(relative));
    }
    if relative > LOSS_WARN {
        log::warn!("beam splitter pushed {relative:.3e} of the population past the cutoff");
    }
    Ok(FockDensity::assemble(rho.n_modes(), cutoff, terms))
}

/// In-cutoff output amplitudes `⟨k, n+m−k| U |n, m⟩` for all `n, m ≤ cutoff`.
struct Table {
    b: usize,
    entries: Vec<Vec<(usize, C64)>>,
}

impl Table {
    fn new(cutoff: usize, theta: f64, phi: f64) -> Self {
        let b = cutoff + 1;
        let mut log_fact = vec![0.0f64; 2 * b + 1];
        for k in 1..log_fact.len() {
            log_fact[k] = log_fact[k - 1] + (k as f64).ln();
        }
        let (s, c) = theta.sin_cos();
        let (lc, ls) = (c.abs().ln(), s.abs().ln());
        let (sgn_c, sgn_s) = (c.signum(), s.signum());
        // x^k in log space with 0⁰ = 1.
        let log_pow = |lx: f64, k: usize| if k == 0 { 0.0 } else { k as f64 * lx };
        let sign_pow = |sg: f64, k: usize| if k.is_multiple_of(2) { 1.0 } else { sg };

        let mut entries = Vec::with_capacity(b * b);
        for n in 0..b {
            for m in 0..b {
                let mut acc = vec![C64::new(0.0, 0.0); n + m + 1];
                for p in 0..=n {
                    for q in 0..=m {
                        let k = p + q;
                        let l = n + m - k;
                        let log_mag = log_fact[n] - log_fact[p] - log_fact[n - p] + log_fact[m]
                            - log_fact[q]
                            - log_fact[m - q]
                            + log_pow(lc, p + m - q)
                            + log_pow(ls, n - p + q)
                            + 0.5 * (log_fact[k] + log_fact[l] - log_fact[n] - log_fact[m]);
                        let mag = log_mag.exp();
                        if mag == 0.0 {
                            continue;
                        }
                        let sign = sign_pow(sgn_c, p + m - q)
                            * sign_pow(sgn_s, n - p + q)
                            * if (n - p) % 2 == 0 { 1.0 } else { -1.0 };
                        let phase = phi * (q as f64 - (n - p) as f64);
                        acc[k] += C64::from_polar(sign * mag, phase);
                    }
                }
                entries.push(
                    acc.into_iter()
                        .enumerate()
                        .filter(|&(k, z)| k < b && n + m - k < b && z.norm_sqr() > 0.0)
                        .collect(),
                );
            }
        }
        Self { b, entries }
    }

    fn outputs(&self, n: usize, m: usize) -> impl Iterator<Item = (usize, C64)> + '_ {
        self.entries[n * self.b + m].iter().copied()
    }
}
