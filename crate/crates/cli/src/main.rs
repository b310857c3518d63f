//! `cvschur` command-line front end.
//!
//! Files use the JSON covariance format of [`cvschur::format`]. A missing
//! FILE (or `-`) reads standard input, so commands pipe:
//!
//! ```text
//! cvschur make tmsv --r 0.5 | cvschur parity-reduce --mode 2 | cvschur check
//! ```
//!
//! Modes are numbered from 1. Commands that produce a file write it to
//! `--out` (report on stdout) or to stdout (report on stderr).
//!
//! Exit codes: 0 success, 1 usage or input error, 2 unphysical input,
//! 3 failed oracle verification.

mod report;

use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cvschur::covmat::{check_physicality, check_physicality_blockwise, schur_complement};
use cvschur::entanglement::{eof_parameter, eof_symmetric, invariants, simon_test};
use cvschur::format::{parse_covariance_file, parse_mode_list, CovarianceFile};
use cvschur::gaussian_ops::{
    apply_beamsplitter, parity_reduce_nmode, partial_trace, squeezed_vacuum, tensor, thermal, tmsv,
    vacuum, vacuum_project,
};
use cvschur::locc::{run_protocol, Ensemble, EstimatorRule, ProtocolOptions};
use cvschur::parity_wigner::{average_parity, purity, wigner_origin};
use cvschur::verify::{run_suite, Suite};
use cvschur::{CovarianceMatrix, Error};

use report::Report;

#[derive(Parser)]
#[command(
    name = "cvschur",
    version,
    about = "Covariance-matrix toolkit for Gaussian states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a reference state
    Make {
        #[command(subcommand)]
        state: MakeState,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Physicality report (direct and, for two modes, blockwise)
    Check(Input),
    /// Schur complement of a two-mode matrix
    Schur {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        eliminate: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Condition on the vacuum outcome of one mode
    VacuumProject {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        mode: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Keep a subset of modes, e.g. --keep 1,3
    Trace {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        keep: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parity-conditioned reduction of one mode
    ParityReduce {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        mode: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Local symplectic invariants of a two-mode state
    Invariants(Input),
    /// Simon separability test
    Simon(Input),
    /// Entanglement of formation of a symmetric two-mode state
    Eof(Input),
    /// Wigner function at the origin of a single-mode state
    Wigner0(Input),
    /// Purity Tr ρ²
    Purity(Input),
    /// Simulate the parity-grouping protocol
    Protocol {
        #[command(flatten)]
        input: Input,
        /// Finite number of shared copies (exact moments when omitted)
        #[arg(long)]
        copies: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "weighted")]
        rule: String,
        /// Mode whose parity is measured
        #[arg(long, default_value_t = 2)]
        measure: usize,
    },
    /// Beam splitter on two modes
    Bs {
        #[command(flatten)]
        input: Input,
        /// Two modes, e.g. 1,2
        #[arg(long)]
        modes: String,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fock-space oracle checks
    Oracle {
        #[command(subcommand)]
        action: OracleAction,
    },
}

#[derive(Args)]
struct Input {
    /// Covariance file; standard input when omitted or `-`
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum MakeState {
    /// Two-mode squeezed vacuum
    Tmsv {
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
    },
    /// Single-mode thermal state
    Thermal {
        #[arg(long)]
        nbar: f64,
    },
    /// Single-mode squeezed vacuum
    Sqvac {
        #[arg(long, allow_negative_numbers = true)]
        r: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi: f64,
    },
    /// Multi-mode vacuum
    Vacuum {
        #[arg(long)]
        modes: usize,
    },
    /// Tensor product of two files
    Tensor { a: PathBuf, b: PathBuf },
}

#[derive(Subcommand)]
enum OracleAction {
    /// Run a verification suite (or all of them)
    Verify {
        /// prop1, prop2, vacuum, eof, weights or all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Photon-number cutoff per mode (suite default when omitted)
        #[arg(long)]
        cutoff: Option<usize>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Unphysical { .. }) {
            2
        } else {
            1
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::new()
        .filter_level(log::LevelFilter::Warn)
        .format_target(false)
        .parse_default_env()
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Make { state, out } => {
            let (v, label) = match state {
                MakeState::Tmsv { r } => (tmsv(finite("r", r)?), format!("tmsv r={r}")),
                MakeState::Thermal { nbar } => (thermal(nbar)?, format!("thermal nbar={nbar}")),
                MakeState::Sqvac { r, phi } => (
                    squeezed_vacuum(finite("r", r)?, finite("phi", phi)?),
                    format!("sqvac r={r} phi={phi}"),
                ),
                MakeState::Vacuum { modes } => {
                    if modes == 0 {
                        return Err(usage("--modes must be at least 1"));
                    }
                    (vacuum(modes), format!("vacuum modes={modes}"))
                }
                MakeState::Tensor { a, b } => {
                    let va = read_file(Some(&a))?;
                    let vb = read_file(Some(&b))?;
                    (tensor(&va, &vb), "tensor".to_owned())
                }
            };
            let file = CovarianceFile::new(v).with_metadata("source", label);
            emit(&file, &Report::new(), out.as_deref())
        }
        Command::Check(input) => {
            let v = read_input(&input)?;
            let direct = check_physicality(&v);
            let mut r = Report::new();
            r.flag("physical", direct.is_physical())
                .flag("psd", direct.psd_ok)
                .flag("uncertainty", direct.uncertainty_ok)
                .num("min_eig_v", direct.min_eig_v)
                .num("min_eig_uncertainty", direct.min_eig_uncertainty)
                .num("tolerance", direct.tolerance);
            if v.n_modes() == 2 {
                let block = check_physicality_blockwise(&v)?;
                r.flag("blockwise_psd", block.psd_ok)
                    .flag("blockwise_uncertainty", block.uncertainty_ok)
                    .num("blockwise_min_eig_v", block.min_eig_v)
                    .num("blockwise_min_eig_uncertainty", block.min_eig_uncertainty);
            }
            print!("{}", r.render());
            Ok(if direct.is_physical() { 0 } else { 2 })
        }
        Command::Schur {
            input,
            eliminate,
            out,
        } => {
            let v = read_input(&input)?;
            let m = mode_index(&v, eliminate, "--eliminate")?;
            let s = schur_complement(&v, m)?;
            let mut r = Report::new();
            r.text("eliminated", eliminate.to_string());
            emit(&CovarianceFile::new(s), &r, out.as_deref())
        }
        Command::VacuumProject { input, mode, out } => {
            let v = read_input(&input)?;
            let m = mode_index(&v, mode, "--mode")?;
            require_physical(&v)?;
            let p = vacuum_project(&v, m)?;
            let mut r = Report::new();
            r.num("probability", p.probability);
            emit(&CovarianceFile::new(p.gamma0), &r, out.as_deref())
        }
        Command::Trace { input, keep, out } => {
            let v = read_input(&input)?;
            let modes = parse_mode_list(&keep).map_err(|e| usage(format!("--keep {e}")))?;
            for &k in &modes {
                mode_index(&v, k + 1, "--keep")?;
            }
            let t = partial_trace(&v, &modes)?;
            let mut r = Report::new();
            r.text("kept", keep.clone());
            emit(&CovarianceFile::new(t), &r, out.as_deref())
        }
        Command::ParityReduce { input, mode, out } => {
            let v = read_input(&input)?;
            let m = mode_index(&v, mode, "--mode")?;
            require_physical(&v)?;
            let p = parity_reduce_nmode(&v, m)?;
            let mut r = Report::new();
            r.num("weight", p.weight);
            emit(&CovarianceFile::new(p.gamma), &r, out.as_deref())
        }
        Command::Invariants(input) => {
            let inv = invariants(&read_input(&input)?)?;
            let mut r = Report::new();
            r.num("i1", inv.i1)
                .num("i2", inv.i2)
                .num("i3", inv.i3)
                .num("i4", inv.i4);
            print!("{}", r.render());
            Ok(0)
        }
        Command::Simon(input) => {
            let verdict = simon_test(&invariants(&read_input(&input)?)?);
            let mut r = Report::new();
            r.text(
                "verdict",
                if verdict.separable {
                    "separable"
                } else {
                    "entangled"
                },
            )
            .num("lhs", verdict.lhs)
            .num("rhs", verdict.rhs);
            print!("{}", r.render());
            Ok(0)
        }
        Command::Eof(input) => {
            let inv = invariants(&read_input(&input)?)?;
            let mut r = Report::new();
            r.num("x", eof_parameter(&inv)?)
                .num("eof_bits", eof_symmetric(&inv)?);
            print!("{}", r.render());
            Ok(0)
        }
        Command::Wigner0(input) => {
            let v = read_input(&input)?;
            let mut r = Report::new();
            r.num("wigner0", wigner_origin(&v)?)
                .num("average_parity", average_parity(&v)?);
            print!("{}", r.render());
            Ok(0)
        }
        Command::Purity(input) => {
            let mut r = Report::new();
            r.num("purity", purity(&read_input(&input)?)?);
            print!("{}", r.render());
            Ok(0)
        }
        Command::Protocol {
            input,
            copies,
            seed,
            rule,
            measure,
        } => {
            let v = read_input(&input)?;
            let measured = mode_index(&v, measure, "--measure")?;
            let rule: EstimatorRule = rule.parse().map_err(|e: Error| usage(e.to_string()))?;
            let options = ProtocolOptions {
                measured,
                rule,
                ensemble: copies.map(|n_copies| Ensemble { n_copies, seed }),
            };
            let rep = run_protocol(&v, &options)?;
            let mut r = Report::new();
            r.text("rule", rule.to_string())
                .text("measured_mode", measure.to_string())
                .num("p_even", rep.transcript.p_even)
                .num("p_odd", rep.transcript.p_odd);
            if let Some(b) = &rep.transcript.v1_even {
                r.block("v1_even", b);
            }
            if let Some(b) = &rep.transcript.v1_odd {
                r.block("v1_odd", b);
            }
            r.block("gamma", &rep.gamma)
                .num("i1", rep.invariants.i1)
                .num("i2", rep.invariants.i2)
                .num("abs_i3", rep.invariants.i3)
                .num("i4", rep.invariants.i4)
                .text(
                    "verdict",
                    if rep.entangled() {
                        "entangled"
                    } else {
                        "separable"
                    },
                )
                .num("simon_lhs", rep.verdict.lhs)
                .num("simon_rhs", rep.verdict.rhs);
            if let Some(e) = rep.eof {
                r.num("eof_bits", e);
            }
            if let Some(s) = &rep.spread {
                r.text("copies", s.n_copies.to_string())
                    .text("seed", s.seed.to_string())
                    .text("resamples", s.resamples.to_string())
                    .num("std_i1", s.i1)
                    .num("std_i2", s.i2)
                    .num("std_abs_i3", s.abs_i3)
                    .num("std_i4", s.i4);
                if let Some(e) = s.eof {
                    r.num("std_eof_bits", e);
                }
                r.num("entangled_fraction", s.entangled_fraction);
            }
            print!("{}", r.render());
            Ok(0)
        }
        Command::Bs {
            input,
            modes,
            theta,
            phi,
            out,
        } => {
            let v = read_input(&input)?;
            let pair = parse_mode_list(&modes).map_err(|e| usage(format!("--modes {e}")))?;
            if pair.len() != 2 {
                return Err(usage("--modes takes exactly two modes, e.g. 1,2"));
            }
            for &k in &pair {
                mode_index(&v, k + 1, "--modes")?;
            }
            let w = apply_beamsplitter(
                &v,
                pair[0],
                pair[1],
                finite("theta", theta)?,
                finite("phi", phi)?,
            )?;
            emit(&CovarianceFile::new(w), &Report::new(), out.as_deref())
        }
        Command::Oracle {
            action: OracleAction::Verify { suite, cutoff },
        } => {
            let suites: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse().map_err(|e: Error| usage(e.to_string()))?]
            };
            let mut all_pass = true;
            let mut stdout = io::stdout().lock();
            for s in suites {
                for c in run_suite(s, cutoff)? {
                    all_pass &= c.pass;
                    writeln!(
                        stdout,
                        "{} {s}: {}  value {}  expected {}  error {}  tol {}",
                        if c.pass { "PASS" } else { "FAIL" },
                        c.name,
                        report::num(c.value),
                        report::num(c.expected),
                        report::num(c.error),
                        report::num(c.tolerance),
                    )
                    .map_err(|e| usage(e.to_string()))?;
                }
            }
            writeln!(stdout, "all_pass: {all_pass}").map_err(|e| usage(e.to_string()))?;
            Ok(if all_pass { 0 } else { 3 })
        }
    }
}

fn finite(name: &str, x: f64) -> Result<f64, Failure> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(usage(format!("--{name} must be finite")))
    }
}

/// Converts a 1-based mode number to an index, checking the range.
fn mode_index(v: &CovarianceMatrix, mode: usize, flag: &str) -> Result<usize, Failure> {
    if mode == 0 || mode > v.n_modes() {
        return Err(usage(format!(
            "{flag} {mode} is out of range: modes are numbered 1..={}",
            v.n_modes()
        )));
    }
    Ok(mode - 1)
}

fn require_physical(v: &CovarianceMatrix) -> Result<(), Failure> {
    let report = check_physicality(v);
    if !report.is_physical() {
        return Err(Error::Unphysical {
            min_eig: report.min_eig_uncertainty,
        }
        .into());
    }
    Ok(())
}

fn read_input(input: &Input) -> Result<CovarianceMatrix, Failure> {
    read_file(input.file.as_deref())
}

fn read_file(path: Option<&Path>) -> Result<CovarianceMatrix, Failure> {
    let (text, name) = match path {
        Some(p) if p != Path::new("-") => (
            std::fs::read_to_string(p)
                .map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?,
            p.display().to_string(),
        ),
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| usage(format!("cannot read standard input: {e}")))?;
            (s, "<stdin>".to_owned())
        }
    };
    parse_covariance_file(&text)
        .map(|f| f.matrix)
        .map_err(|e| usage(format!("{name}: {e}")))
}

/// Writes the result file to `out` (report to stdout) or to stdout (report
/// to stderr).
fn emit(file: &CovarianceFile, report: &Report, out: Option<&Path>) -> Result<u8, Failure> {
    let json = file.to_json();
    match out {
        Some(path) => {
            std::fs::write(path, json)
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            print!("{}", report.render());
        }
        None => {
            print!("{json}");
            eprint!("{}", report.render());
        }
    }
    Ok(0)
}
