//! Oracle verification suites.
//!
//! Each suite compares covariance-level results with the truncated
//! Fock-space oracle and returns one [`Check`] per comparison.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::str::FromStr;

use crate::covmat::MaxAbs;
use crate::entanglement::{eof_symmetric, invariants};
use crate::fock::{
    beamsplitter_fock, entanglement_entropy_fock, moments_fock, parity_condition_fock, tensor_fock,
    thermal_fock, tmsv_fock, vacuum_condition_fock, vacuum_fock, FockDensity,
};
use crate::gaussian_ops::{
    apply_beamsplitter, parity_reduce, parity_reduce_nmode, partial_trace, tensor, thermal, tmsv,
    vacuum, vacuum_project,
};
use crate::locc::{conditional_moments, estimate_gamma, EstimatorRule};
use crate::parity_wigner::average_parity;
use crate::{CovarianceMatrix, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Prop1,
    Prop2,
    Vacuum,
    Eof,
    Weights,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Prop1,
        Suite::Prop2,
        Suite::Vacuum,
        Suite::Eof,
        Suite::Weights,
    ];

    pub fn default_cutoff(self) -> usize {
        match self {
            Suite::Prop2 => 40,
            _ => 60,
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "prop1" => Suite::Prop1,
            "prop2" => Suite::Prop2,
            "vacuum" => Suite::Vacuum,
            "eof" => Suite::Eof,
            "weights" => Suite::Weights,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown suite '{other}' (expected prop1, prop2, vacuum, eof or weights)"
                )))
            }
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Prop1 => "prop1",
            Suite::Prop2 => "prop2",
            Suite::Vacuum => "vacuum",
            Suite::Eof => "eof",
            Suite::Weights => "weights",
        })
    }
}

/// One comparison: `error = |value − expected|` (entrywise maximum for
/// matrices, in which case `value` and `expected` are the largest entries).
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn scalar(name: impl Into<String>, value: f64, expected: f64, tolerance: f64) -> Self {
        let error = (value - expected).abs();
        Self {
            name: name.into(),
            value,
            expected,
            error,
            tolerance,
            pass: error <= tolerance,
        }
    }

    pub fn matrices(
        name: impl Into<String>,
        value: &CovarianceMatrix,
        expected: &CovarianceMatrix,
        tolerance: f64,
    ) -> Self {
        let error = if value.dim() == expected.dim() {
            (value.matrix() - expected.matrix()).max_abs()
        } else {
            f64::INFINITY
        };
        Self {
            name: name.into(),
            value: value.matrix().max_abs(),
            expected: expected.matrix().max_abs(),
            error,
            tolerance,
            pass: error <= tolerance,
        }
    }
}

pub fn run_suite(suite: Suite, cutoff: Option<usize>) -> Result<Vec<Check>> {
    let cutoff = cutoff.unwrap_or(suite.default_cutoff());
    if cutoff < 1 {
        return Err(Error::InvalidArgument("cutoff must be at least 1".into()));
    }
    match suite {
        Suite::Prop1 => prop1(cutoff),
        Suite::Prop2 => prop2(cutoff),
        Suite::Vacuum => vacuum_suite(cutoff),
        Suite::Eof => eof(cutoff),
        Suite::Weights => weights(cutoff),
    }
}

/// Squeezing values and matrix tolerances of the two-mode suites.
const TMSV_CASES: [(f64, f64); 3] = [(0.3, 1e-6), (0.6, 1e-6), (1.0, 1e-4)];

/// Correlated mixed state: thermal ⊗ thermal through a beam splitter.
fn mixed_pair(cutoff: usize) -> Result<(CovarianceMatrix, FockDensity)> {
    let (n1, n2, theta, phi) = (0.3, 0.1, 0.5, 0.2);
    let v = apply_beamsplitter(&tensor(&thermal(n1)?, &thermal(n2)?), 0, 1, theta, phi)?;
    let rho = beamsplitter_fock(
        &tensor_fock(&thermal_fock(n1, cutoff)?, &thermal_fock(n2, cutoff)?)?,
        0,
        1,
        theta,
        phi,
    )?;
    Ok((v, rho))
}

fn prop1(cutoff: usize) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (r, tol) in TMSV_CASES {
        let reduction = parity_reduce(&tmsv(r), 1)?;
        let fock = parity_condition_fock(&tmsv_fock(r, cutoff)?, 1)?;
        checks.push(Check::matrices(
            format!("tmsv r={r} gamma"),
            &reduction.gamma,
            &moments_fock(&fock.sigma)?,
            tol,
        ));
        checks.push(Check::scalar(
            format!("tmsv r={r} weight"),
            reduction.weight,
            fock.sigma.trace(),
            1e-6,
        ));
    }
    let (v, rho) = mixed_pair(cutoff.min(30))?;
    let reduction = parity_reduce(&v, 1)?;
    let fock = parity_condition_fock(&rho, 1)?;
    checks.push(Check::matrices(
        "mixed pair gamma",
        &reduction.gamma,
        &moments_fock(&fock.sigma)?,
        1e-6,
    ));
    checks.push(Check::scalar(
        "mixed pair weight",
        reduction.weight,
        fock.sigma.trace(),
        1e-6,
    ));
    Ok(checks)
}

/// Three-mode state `BS₂₃(π/4) (TMSV(0.5) ⊗ vacuum)`, parity on mode 3.
fn prop2(cutoff: usize) -> Result<Vec<Check>> {
    let r = 0.5;
    let v = apply_beamsplitter(&tensor(&tmsv(r), &vacuum(1)), 1, 2, FRAC_PI_4, 0.0)?;
    let rho = beamsplitter_fock(
        &tensor_fock(&tmsv_fock(r, cutoff)?, &vacuum_fock(1, cutoff)?)?,
        1,
        2,
        FRAC_PI_4,
        0.0,
    )?;
    let reduction = parity_reduce_nmode(&v, 2)?;
    let fock = parity_condition_fock(&rho, 2)?;
    let fock_gamma = moments_fock(&fock.sigma)?;

    let mut checks = Vec::new();
    for (i, j) in [(0, 0), (0, 1), (1, 1)] {
        let block = |g: &CovarianceMatrix| {
            CovarianceMatrix::new(crate::CMat::from_fn(2, 2, |a, b| {
                g.get(2 * i + a, 2 * j + b)
            }))
        };
        // Off-diagonal blocks are not covariance matrices on their own, so
        // compare entrywise directly.
        let err = (reduction.gamma.block(i, j) - fock_gamma.block(i, j)).max_abs();
        let name = format!("gamma block ({},{})", i + 1, j + 1);
        checks.push(Check {
            name,
            value: reduction.gamma.block(i, j).max_abs(),
            expected: fock_gamma.block(i, j).max_abs(),
            error: err,
            tolerance: 1e-5,
            pass: err <= 1e-5,
        });
        if i == j {
            // Trace out the other kept mode, then apply the two-mode rule.
            let marginal = partial_trace(&v, &[i, 2])?;
            let two_mode = parity_reduce(&marginal, 1)?;
            checks.push(Check::matrices(
                format!("block ({},{}) via marginal", i + 1, i + 1),
                &block(&reduction.gamma)?,
                &two_mode.gamma,
                1e-12,
            ));
        }
    }
    checks.push(Check::scalar(
        "weight",
        reduction.weight,
        fock.sigma.trace(),
        1e-5,
    ));
    Ok(checks)
}

fn vacuum_suite(cutoff: usize) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (r, tol) in TMSV_CASES {
        let projection = vacuum_project(&tmsv(r), 1)?;
        let fock = vacuum_condition_fock(&tmsv_fock(r, cutoff)?, 1)?;
        checks.push(Check::matrices(
            format!("tmsv r={r} conditioned state"),
            &projection.gamma0,
            &moments_fock(&fock.rho0)?,
            tol,
        ));
        checks.push(Check::scalar(
            format!("tmsv r={r} probability"),
            projection.probability,
            fock.p0,
            1e-6,
        ));
    }
    let projection = vacuum_project(&tmsv(0.5), 1)?;
    checks.push(Check::matrices(
        "tmsv r=0.5 conditioned state is vacuum",
        &projection.gamma0,
        &vacuum(1),
        1e-12,
    ));
    checks.push(Check::scalar(
        "tmsv r=0.5 probability",
        projection.probability,
        0.78645,
        1e-5,
    ));
    let (v, rho) = mixed_pair(cutoff.min(30))?;
    let projection = vacuum_project(&v, 1)?;
    let fock = vacuum_condition_fock(&rho, 1)?;
    checks.push(Check::matrices(
        "mixed pair conditioned state",
        &projection.gamma0,
        &moments_fock(&fock.rho0)?,
        1e-6,
    ));
    checks.push(Check::scalar(
        "mixed pair probability",
        projection.probability,
        fock.p0,
        1e-6,
    ));
    Ok(checks)
}

fn eof(cutoff: usize) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for r in [0.3, 0.5, 1.0] {
        let closed = eof_symmetric(&invariants(&tmsv(r))?)?;
        let entropy = entanglement_entropy_fock(&tmsv_fock(r, cutoff)?)?;
        checks.push(Check::scalar(format!("tmsv r={r}"), closed, entropy, 1e-4));
    }
    let closed = eof_symmetric(&invariants(&tmsv(0.5))?)?;
    checks.push(Check::scalar("tmsv r=0.5 value", closed, 0.95137, 1e-4));
    Ok(checks)
}

fn weights(cutoff: usize) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let nbar = 0.27154;
    let alternating: f64 = thermal_fock(nbar, cutoff)?
        .mode_distribution(0)?
        .iter()
        .enumerate()
        .map(|(n, p)| if n % 2 == 0 { *p } else { -p })
        .sum();
    checks.push(Check::scalar(
        format!("thermal nbar={nbar} average parity"),
        average_parity(&thermal(nbar)?)?,
        alternating,
        1e-10,
    ));

    let r = 0.5;
    let v = tmsv(r);
    let fock = parity_condition_fock(&tmsv_fock(r, cutoff)?, 1)?;
    let t = conditional_moments(&v, 1)?;
    checks.push(Check::scalar("tmsv p_even", t.p_even, fock.p_even, 1e-10));
    checks.push(Check::scalar("tmsv p_odd", t.p_odd, fock.p_odd, 1e-10));
    let missing = || Error::Degenerate("empty parity group".into());
    let as_cov = |b: crate::covmat::Block| {
        CovarianceMatrix::new(crate::CMat::from_fn(2, 2, |i, j| b[(i, j)]))
    };
    let even = as_cov(t.v1_even.ok_or_else(missing)?)?;
    let odd = as_cov(t.v1_odd.ok_or_else(missing)?)?;
    checks.push(Check::matrices(
        "tmsv even group moments",
        &even,
        &moments_fock(&fock.rho_even.ok_or_else(missing)?)?,
        1e-6,
    ));
    checks.push(Check::matrices(
        "tmsv odd group moments",
        &odd,
        &moments_fock(&fock.rho_odd.ok_or_else(missing)?)?,
        1e-6,
    ));
    let plain = as_cov(estimate_gamma(&t, EstimatorRule::Plain)?);
    let minus_identity = CovarianceMatrix::new(crate::CMat::identity(2, 2).scale(-1.0))?;
    checks.push(Check::matrices(
        "tmsv plain rule is -I",
        &plain?,
        &minus_identity,
        1e-9,
    ));
    let weighted = as_cov(estimate_gamma(&t, EstimatorRule::Weighted)?)?;
    checks.push(Check::matrices(
        "tmsv weighted rule is gamma",
        &weighted,
        &moments_fock(&fock.sigma)?,
        1e-6,
    ));
    Ok(checks)
}
