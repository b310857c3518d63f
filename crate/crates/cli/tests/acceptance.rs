//! Acceptance run: one PASS/FAIL line per criterion, tolerances pinned
//! below. Exits non-zero if any criterion fails.

use std::f64::consts::FRAC_PI_4;
use std::process::Command;
use std::time::{Duration, Instant};

use cvschur::covmat::{det_decomposition_residual, Block, MaxAbs};
use cvschur::entanglement::{eof_symmetric, invariants, reconstruct_i3_i4, simon_test};
use cvschur::fock::{
    beamsplitter_fock, entanglement_entropy_fock, moments_fock, parity_condition_fock, tensor_fock,
    thermal_fock, tmsv_fock, vacuum_condition_fock, vacuum_fock,
};
use cvschur::gaussian_ops::{
    apply_beamsplitter, parity_reduce, parity_reduce_nmode, partial_trace, random_physical_state,
    tensor, thermal, tmsv, vacuum, vacuum_project,
};
use cvschur::locc::{conditional_moments, estimate_gamma, EstimatorRule};
use cvschur::parity_wigner::{average_parity, wigner_origin};
use cvschur::CovarianceMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240611;
const N_RANDOM: usize = 100;

/// Half a unit in the last digit of a five-significant-figure literal.
const LITERAL_TOL: f64 = 5e-6;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn diff(a: &CovarianceMatrix, b: &CovarianceMatrix) -> f64 {
    (a.matrix() - b.matrix()).max_abs()
}

fn random_states(n_modes: usize, salt: u64) -> Vec<CovarianceMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ salt);
    (0..N_RANDOM)
        .map(|_| random_physical_state(n_modes, &mut rng))
        .collect()
}

const TMSV_CASES: [(f64, f64); 3] = [(0.3, 1e-6), (0.6, 1e-6), (1.0, 1e-4)];
const CUTOFF: usize = 60;

fn parity_reduction_vs_oracle() -> Outcome {
    const WEIGHT_TOL: f64 = 1e-6;
    const RUNTIME: Duration = Duration::from_secs(10);
    let start = Instant::now();
    let mut pass = true;
    let mut parts = Vec::new();
    for (r, tol) in TMSV_CASES {
        let reduction = parity_reduce(&tmsv(r), 1).unwrap();
        let fock = parity_condition_fock(&tmsv_fock(r, CUTOFF).unwrap(), 1).unwrap();
        let g_err = diff(&reduction.gamma, &moments_fock(&fock.sigma).unwrap());
        let w_err = (reduction.weight - fock.sigma.trace()).abs();
        pass &= g_err <= tol && w_err <= WEIGHT_TOL;
        parts.push(format!(
            "r={r}: gamma {g_err:.1e}<={tol:.0e} weight {w_err:.1e}<={WEIGHT_TOL:.0e}"
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < RUNTIME;
    parts.push(format!(
        "runtime {:.2}s<{}s",
        elapsed.as_secs_f64(),
        RUNTIME.as_secs()
    ));
    outcome(pass, parts.join("; "))
}

fn vacuum_projection_vs_oracle() -> Outcome {
    const PROB_TOL: f64 = 1e-6;
    let mut pass = true;
    let mut parts = Vec::new();
    for (r, tol) in TMSV_CASES {
        let p = vacuum_project(&tmsv(r), 1).unwrap();
        let fock = vacuum_condition_fock(&tmsv_fock(r, CUTOFF).unwrap(), 1).unwrap();
        let g_err = diff(&p.gamma0, &moments_fock(&fock.rho0).unwrap());
        let p_err = (p.probability - fock.p0).abs();
        pass &= g_err <= tol && p_err <= PROB_TOL;
        parts.push(format!(
            "r={r}: state {g_err:.1e}<={tol:.0e} prob {p_err:.1e}<={PROB_TOL:.0e}"
        ));
    }
    let p = vacuum_project(&tmsv(0.5), 1).unwrap();
    let vac_err = diff(&p.gamma0, &vacuum(1));
    let closed = 1.0 / 0.5f64.cosh().powi(2);
    let closed_err = (p.probability - closed).abs();
    let literal_err = (p.probability - 0.78645).abs();
    pass &= vac_err <= 1e-12 && closed_err <= PROB_TOL && literal_err <= LITERAL_TOL;
    parts.push(format!(
        "r=0.5: vacuum {vac_err:.1e}<=1e-12 p0={:.9} vs 1/cosh^2 {closed_err:.1e}<={PROB_TOL:.0e} vs 0.78645 {literal_err:.1e}<={LITERAL_TOL:.0e}",
        p.probability
    ));
    outcome(pass, parts.join("; "))
}

fn nmode_parity_vs_oracle() -> Outcome {
    const ORACLE_TOL: f64 = 1e-5;
    const ROUTE_TOL: f64 = 1e-12;
    const CUTOFF3: usize = 40;
    let v = apply_beamsplitter(&tensor(&tmsv(0.5), &vacuum(1)), 1, 2, FRAC_PI_4, 0.0).unwrap();
    let rho = beamsplitter_fock(
        &tensor_fock(
            &tmsv_fock(0.5, CUTOFF3).unwrap(),
            &vacuum_fock(1, CUTOFF3).unwrap(),
        )
        .unwrap(),
        1,
        2,
        FRAC_PI_4,
        0.0,
    )
    .unwrap();
    let reduction = parity_reduce_nmode(&v, 2).unwrap();
    let fock = parity_condition_fock(&rho, 2).unwrap();
    let oracle_err = diff(&reduction.gamma, &moments_fock(&fock.sigma).unwrap());
    let mut route_err = 0.0f64;
    for kept in 0..2 {
        let marginal = partial_trace(&v, &[kept, 2]).unwrap();
        let two = parity_reduce(&marginal, 1).unwrap();
        route_err =
            route_err.max((reduction.gamma.block(kept, kept) - two.gamma.block(0, 0)).max_abs());
    }
    outcome(
        oracle_err <= ORACLE_TOL && route_err <= ROUTE_TOL,
        format!(
            "all blocks vs oracle (pure path, cutoff {CUTOFF3}) {oracle_err:.1e}<={ORACLE_TOL:.0e}; diagonal blocks vs marginal route {route_err:.1e}<={ROUTE_TOL:.0e}"
        ),
    )
}

fn determinant_decomposition() -> Outcome {
    const TOL: f64 = 1e-10;
    let worst = random_states(2, 4)
        .iter()
        .map(|v| det_decomposition_residual(v).unwrap() / v.det().abs())
        .fold(0.0, f64::max);
    outcome(
        worst <= TOL,
        format!("{N_RANDOM} states, max relative residual {worst:.1e}<={TOL:.0e}"),
    )
}

fn parity_identities() -> Outcome {
    const WEIGHT_TOL: f64 = 1e-12;
    const ORACLE_TOL: f64 = 1e-10;
    let states = random_states(2, 5);
    let mut exact = true;
    let mut weight_err = 0.0f64;
    for v in &states {
        for m in 0..2 {
            let marginal = partial_trace(v, &[m]).unwrap();
            let p = average_parity(&marginal).unwrap();
            exact &= wigner_origin(&marginal).unwrap() == 2.0 * p;
            let w = parity_reduce(v, m).unwrap().weight;
            weight_err = weight_err.max((w - p).abs());
        }
    }
    let nbar = 0.27154;
    let alternating: f64 = thermal_fock(nbar, CUTOFF)
        .unwrap()
        .mode_distribution(0)
        .unwrap()
        .iter()
        .enumerate()
        .map(|(n, p)| if n % 2 == 0 { *p } else { -p })
        .sum();
    let p_bar = average_parity(&thermal(nbar).unwrap()).unwrap();
    let oracle_err = (p_bar - alternating).abs();
    let literal_err = (p_bar - 0.64805).abs();
    outcome(
        exact && weight_err <= WEIGHT_TOL && oracle_err <= ORACLE_TOL && literal_err <= LITERAL_TOL,
        format!(
            "wigner0 == 2*parity bitwise: {exact}; weight vs marginal parity {weight_err:.1e}<={WEIGHT_TOL:.0e}; thermal pbar={p_bar:.9} vs Fock sum {oracle_err:.1e}<={ORACLE_TOL:.0e} vs 0.64805 {literal_err:.1e}<={LITERAL_TOL:.0e}"
        ),
    )
}

fn invariant_reconstruction() -> Outcome {
    const TOL: f64 = 1e-10;
    let mut worst = 0.0f64;
    for v in random_states(2, 6) {
        let direct = invariants(&v).unwrap();
        let gamma = parity_reduce(&v, 1).unwrap().gamma.block(0, 0);
        let (abs_i3, i4) = reconstruct_i3_i4(&v.block(0, 0), &v.block(1, 1), &gamma).unwrap();
        worst = worst
            .max((abs_i3 - direct.abs_i3()).abs())
            .max((i4 - direct.i4).abs());
    }
    let v = tmsv(0.5);
    let gamma = parity_reduce(&v, 1).unwrap().gamma.block(0, 0);
    let (abs_i3, i4) = reconstruct_i3_i4(&v.block(0, 0), &v.block(1, 1), &gamma).unwrap();
    let lit = (abs_i3 - 0.34527).abs().max((i4 - 0.41107).abs());
    outcome(
        worst <= TOL && lit <= LITERAL_TOL,
        format!(
            "{N_RANDOM} states, max error {worst:.1e}<={TOL:.0e}; TMSV r=0.5 (|I3|, I4)=({abs_i3:.6}, {i4:.6}) vs (0.34527, 0.41107) {lit:.1e}<={LITERAL_TOL:.0e}"
        ),
    )
}

fn simon_verdicts() -> Outcome {
    const BOUNDARY_TOL: f64 = 1e-12;
    let all_entangled = (1..=20).all(|k| {
        let r = 0.1 * k as f64;
        !simon_test(&invariants(&tmsv(r)).unwrap()).separable
    });
    let vac = simon_test(&invariants(&vacuum(2)).unwrap());
    let boundary = (vac.lhs - vac.rhs).abs();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let products_separable = (0..N_RANDOM).all(|_| {
        let a = random_physical_state(1, &mut rng);
        let b = random_physical_state(1, &mut rng);
        simon_test(&invariants(&tensor(&a, &b)).unwrap()).separable
    });
    outcome(
        all_entangled && boundary <= BOUNDARY_TOL && products_separable,
        format!(
            "tmsv r=0.1..2.0 entangled: {all_entangled}; vacuum |lhs-rhs| {boundary:.1e}<={BOUNDARY_TOL:.0e}; {N_RANDOM} products separable: {products_separable}"
        ),
    )
}

fn eof_vs_entropy() -> Outcome {
    const TOL: f64 = 1e-4;
    let mut pass = true;
    let mut parts = Vec::new();
    for r in [0.3, 0.5, 1.0] {
        let closed = eof_symmetric(&invariants(&tmsv(r)).unwrap()).unwrap();
        let entropy = entanglement_entropy_fock(&tmsv_fock(r, CUTOFF).unwrap()).unwrap();
        let err = (closed - entropy).abs();
        pass &= err <= TOL;
        parts.push(format!(
            "r={r}: {closed:.6} vs {entropy:.6} {err:.1e}<={TOL:.0e}"
        ));
    }
    let value = eof_symmetric(&invariants(&tmsv(0.5)).unwrap()).unwrap();
    let lit = (value - 0.95137).abs();
    pass &= lit <= TOL;
    parts.push(format!("r=0.5 vs 0.95137 {lit:.1e}<={TOL:.0e}"));
    outcome(pass, parts.join("; "))
}

fn estimator_discrimination() -> Outcome {
    const WEIGHTED_TOL: f64 = 1e-10;
    const PLAIN_TOL: f64 = 1e-9;
    let mut weighted_err = 0.0f64;
    let mut plain_err = 0.0f64;
    for v in random_states(2, 9) {
        let reduction = parity_reduce(&v, 1).unwrap();
        let gamma = reduction.gamma.block(0, 0);
        let w = reduction.weight;
        let t = conditional_moments(&v, 1).unwrap();
        let weighted = estimate_gamma(&t, EstimatorRule::Weighted).unwrap();
        let plain = estimate_gamma(&t, EstimatorRule::Plain).unwrap();
        let predicted = (gamma - v.block(0, 0)).scale(2.0 * w / (1.0 - w * w));
        weighted_err = weighted_err.max((weighted - gamma).max_abs());
        plain_err = plain_err.max((plain - predicted).max_abs());
    }
    let t = conditional_moments(&tmsv(0.5), 1).unwrap();
    let plain = estimate_gamma(&t, EstimatorRule::Plain).unwrap();
    let minus_i = (plain + Block::identity()).max_abs();
    outcome(
        weighted_err <= WEIGHTED_TOL && plain_err <= PLAIN_TOL && minus_i <= PLAIN_TOL,
        format!(
            "{N_RANDOM} states: weighted vs gamma {weighted_err:.1e}<={WEIGHTED_TOL:.0e}, plain vs 2w(gamma-V1)/(1-w^2) {plain_err:.1e}<={PLAIN_TOL:.0e}; TMSV r=0.5 plain + I {minus_i:.1e}<={PLAIN_TOL:.0e}"
        ),
    )
}

fn main() {
    const BUDGET: Duration = Duration::from_secs(120);
    let start = Instant::now();
    let criteria: [Criterion; 9] = [
        (
            "parity reduction matches Fock oracle",
            parity_reduction_vs_oracle,
        ),
        (
            "vacuum projection matches Fock oracle",
            vacuum_projection_vs_oracle,
        ),
        (
            "n-mode parity reduction matches Fock oracle",
            nmode_parity_vs_oracle,
        ),
        ("determinant decomposition", determinant_decomposition),
        ("parity and Wigner identities", parity_identities),
        (
            "invariant reconstruction from local data",
            invariant_reconstruction,
        ),
        ("Simon verdicts", simon_verdicts),
        ("entanglement of formation vs Fock entropy", eof_vs_entropy),
        (
            "protocol estimator discrimination",
            estimator_discrimination,
        ),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failures += usize::from(!o.pass);
        println!(
            "{} [{}] {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            o.detail
        );
    }

    let status = Command::new(env!("CARGO_BIN_EXE_cvschur"))
        .args(["oracle", "verify", "--suite", "all"])
        .output()
        .expect("run cvschur");
    let elapsed = start.elapsed();
    let pass = status.status.success() && elapsed < BUDGET;
    failures += usize::from(!pass);
    println!(
        "{} [10] runtime and oracle verify: acceptance wall-clock {:.2}s<{}s; `cvschur oracle verify` exit code {}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        BUDGET.as_secs(),
        status.status.code().map_or("none".into(), |c| c.to_string()),
    );

    if failures > 0 {
        println!("{failures} criterion/criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
