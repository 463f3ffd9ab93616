//! Scenario execution: build the model, propagate, emit files, and (with
//! `--check`) turn invariant violations into a nonzero exit.

use std::path::PathBuf;

use ndarray::{arr1, Array2};
use serde_json::{json, Value};
use vibron::gksl::LindbladModel;
use vibron::nonhermitian::EffectiveHamiltonian;
use vibron::pseudomode::{LorentzianTerm, PseudomodeParams};
use vibron::scenarios::{
    finite_temp_markov_rho, fmo_derive, markov_limit_rho, resonance_rho_s, van_hove_rescale,
    FiniteTempParams, FmoParams, TwoLevelInit,
};
use vibron::states::{
    normalization_reconstruction, partial_trace_over_indices, DensityMatrix, IndexSet,
    NonNormalizedDensityMatrix,
};
use vibron::{linalg, uniform_grid, CMatrix, Tolerances, C64};

use crate::config::{self, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{
    config_hash, output_paths, write_summary, AmplitudeTrajectory, MatrixTrajectory, OutputPaths,
    RunMetadata,
};

pub struct RunOptions {
    pub out_dir: PathBuf,
    pub check: bool,
    pub tolerances: Tolerances,
}

pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    /// Invariant violations; non-empty plus `--check` means exit code 3.
    pub failures: Vec<String>,
}

/// Equivalence threshold between a closed form and its propagate-and-trace
/// counterpart, used by the `--check` paths that have an exact oracle.
const EXACT_CHECK_TOL: f64 = 1e-9;

pub fn run(config: &RunConfig, raw_text: &str, opts: &RunOptions) -> CliResult<RunOutcome> {
    let hash = config_hash(raw_text);

    // Parameter sweeps expand into one run per value, each with its own
    // output files.
    if let Some(expanded) = expand_sweep(config)? {
        let mut files = Vec::new();
        let mut failures = Vec::new();
        for (suffix, sub) in expanded {
            let mut outcome = run_single(&sub, &hash, Some(&suffix), opts)?;
            files.append(&mut outcome.files);
            for f in outcome.failures {
                failures.push(format!("[{suffix}] {f}"));
            }
        }
        return Ok(RunOutcome { files, failures });
    }

    run_single(config, &hash, None, opts)
}

fn expand_sweep(config: &RunConfig) -> CliResult<Option<Vec<(String, RunConfig)>>> {
    let (sweep, base): (&Option<config::SweepSpec>, &RunConfig) = match config {
        RunConfig::Resonance(c) => (&c.sweep, config),
        RunConfig::Pseudomode(c) => (&c.sweep, config),
        _ => return Ok(None),
    };
    let Some(spec) = sweep else { return Ok(None) };
    let mut out = Vec::new();
    for (idx, &value) in spec.values.iter().enumerate() {
        let sub = match base {
            RunConfig::Resonance(c) => {
                let mut c = c.clone();
                c.sweep = None;
                match spec.parameter.as_str() {
                    "g" => c.g = value,
                    "gamma0" => c.gamma0 = value,
                    other => {
                        return Err(CliError::Config(format!("bad sweep parameter {other}")))
                    }
                }
                RunConfig::Resonance(c)
            }
            RunConfig::Pseudomode(c) => {
                let mut c = c.clone();
                c.sweep = None;
                match spec.parameter.as_str() {
                    "omega1" => c.omega1 = value,
                    other => {
                        return Err(CliError::Config(format!("bad sweep parameter {other}")))
                    }
                }
                RunConfig::Pseudomode(c)
            }
            _ => unreachable!(),
        };
        out.push((format!("{}_{}", spec.parameter, idx), sub));
    }
    Ok(Some(out))
}

fn run_single(
    config: &RunConfig,
    hash: &str,
    suffix: Option<&str>,
    opts: &RunOptions,
) -> CliResult<RunOutcome> {
    let tol = config.tolerances(opts.tolerances);
    let paths = output_paths(&opts.out_dir, config.scenario_name(), suffix);
    match config {
        RunConfig::Resonance(c) => run_resonance(c, hash, &paths, &tol, opts),
        RunConfig::NonHermitian(c) => run_nonhermitian(c, hash, &paths, &tol, opts),
        RunConfig::GkslEquivalence(c) => run_gksl_equivalence(c, hash, &paths, &tol, opts),
        RunConfig::Pseudomode(c) => run_pseudomode(c, hash, &paths, &tol, opts),
        RunConfig::FriedrichsConvergence(c) => run_friedrichs(c, hash, &paths, &tol, opts),
        RunConfig::VanHoveSweep(c) => run_van_hove(c, hash, &paths, &tol, opts),
        RunConfig::FiniteTemp(c) => run_finite_temp(c, hash, &paths, &tol, opts),
        RunConfig::Fmo(c) => run_fmo(c, hash, &paths),
    }
}

fn metadata(scenario: &str, solver: &str, tol: &Tolerances, hash: &str) -> RunMetadata {
    RunMetadata {
        scenario: scenario.to_string(),
        solver: solver.to_string(),
        tolerances: *tol,
        config_hash: hash.to_string(),
    }
}

fn parse_elements(spec: &Option<Vec<String>>, dim: usize) -> CliResult<Option<Vec<(usize, usize)>>> {
    let Some(list) = spec else { return Ok(None) };
    let mut out = Vec::with_capacity(list.len());
    for s in list {
        let digits: Vec<u32> = s.chars().filter_map(|c| c.to_digit(10)).collect();
        if digits.len() != 2 || s.chars().count() != 2 {
            return Err(CliError::Config(format!(
                "element \"{s}\" must be two digits like \"11\""
            )));
        }
        let (i, j) = (digits[0] as usize, digits[1] as usize);
        if i >= dim || j >= dim {
            return Err(CliError::Config(format!(
                "element \"{s}\" out of range for dimension {dim}"
            )));
        }
        out.push((i, j));
    }
    Ok(Some(out))
}

fn two_level_init(
    rho11: Option<f64>,
    rho10_re: Option<f64>,
    rho10_im: Option<f64>,
) -> CliResult<TwoLevelInit> {
    TwoLevelInit::new(
        rho11.unwrap_or(1.0),
        C64::new(rho10_re.unwrap_or(0.0), rho10_im.unwrap_or(0.0)),
    )
    .map_err(|e| CliError::Config(e.to_string()))
}

/// Initial three-level state for the pseudomode-resolved propagations: the
/// two-level data on {|0⟩, |1⟩} with the pseudomode |1̃⟩ (index 2) empty.
fn three_level_init(init: &TwoLevelInit, tol: &Tolerances) -> CliResult<DensityMatrix> {
    let mut rho: CMatrix = Array2::zeros((3, 3));
    rho[[1, 1]] = C64::new(init.excited, 0.0);
    rho[[0, 0]] = C64::new(1.0 - init.excited, 0.0);
    rho[[1, 0]] = init.coherence;
    rho[[0, 1]] = init.coherence.conj();
    DensityMatrix::new(rho, tol).map_err(|e| CliError::Config(e.to_string()))
}

fn run_resonance(
    c: &config::ResonanceConfig,
    hash: &str,
    paths: &OutputPaths,
    tol: &Tolerances,
    opts: &RunOptions,
) -> CliResult<RunOutcome> {
    let init = two_level_init(c.rho11, c.rho10_re, c.rho10_im)?;
    let times = uniform_grid(c.t_max, c.points)?;
    let states: Vec<CMatrix> = times
        .iter()
        .map(|&t| Ok(resonance_rho_s(c.g, c.gamma0, &init, t, tol)?.into_inner()))
        .collect::<CliResult<_>>()?;
    let traj = MatrixTrajectory::new(
        times.clone(),
        states,
        parse_elements(&c.elements, 2)?,
        "closed-form",
    )?;
    traj.write_csv(&paths.csv, tol)?;

    let width = 4.0 * c.g * c.g / c.gamma0;
    let oscillatory = width * width < 16.0 * c.g * c.g;
    let mut failures = Vec::new();
    let mut body = json!({
        "g": c.g,
        "gamma0": c.gamma0,
        "pseudomode_width": width,
        "regime": if oscillatory { "oscillatory" } else { "overdamped" },
    });

    if opts.check {
        failures.extend(traj.check_states(tol)?);
        // Oracle: propagate the three-level resonant generator and trace out
        // the pseudomode.
        let params = FiniteTempParams::new(c.g, c.gamma0, 0.0)?;
        let model = params.generator(tol)?;
        let rho0 = three_level_init(&init, tol)?;
        let propagated = model.propagate(&rho0, &times, tol)?;
        let set = IndexSet::new([2usize])?;
        let mut sup = 0.0f64;
        for (k, rho) in propagated.iter().enumerate() {
            let reduced = partial_trace_over_indices(rho, &set, tol)?;
            sup = sup.max(linalg::max_abs_diff(reduced.rho.mat(), &traj.states[k]));
        }
        if sup > EXACT_CHECK_TOL {
            failures.push(format!(
                "closed form deviates from propagated reference by {sup:.3e}"
            ));
        }
        body["checks"] = json!({ "sup_vs_propagated": sup, "tolerance": EXACT_CHECK_TOL });
    }

    write_summary(
        &paths.summary,
        &metadata("resonance", traj.solver, tol, hash),
        body,
    )?;
    Ok(RunOutcome { files: vec![paths.csv.clone(), paths.summary.clone()], failures })
}

fn load_heff(m: &config::MatrixConfig, tol: &Tolerances) -> CliResult<EffectiveHamiltonian> {
    EffectiveHamiltonian::new(m.to_matrix()?, tol).map_err(|e| CliError::Config(e.to_string()))
}

fn run_nonhermitian(
    c: &config::NonHermitianConfig,
    hash: &str,
    paths: &OutputPaths,
    tol: &Tolerances,
    opts: &RunOptions,
) -> CliResult<RunOutcome> {
    let heff = load_heff(&c.h_eff, tol)?;
    let r0 = NonNormalizedDensityMatrix::new(c.r0.to_matrix()?, tol)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let times = uniform_grid(c.t_max, c.points)?;
    let traj_states = heff.evolve_density(&r0, &times, tol)?;
    let states: Vec<CMatrix> = traj_states.iter().map(|r| r.mat().clone()).collect();

    let mut failures = Vec::new();
    if opts.check {
        // Trace must be non-increasing along the trajectory.
        let mut prev = f64::INFINITY;
        for (k, state) in states.iter().enumerate() {
            let tr = linalg::trace(state).re;
            if tr > prev + tol.tr {
                failures.push(format!(
                    "trace grew from {prev:.12} to {tr:.12} at index {k}"
                ));
            }
            prev = tr;
        }
    }

    let traj = MatrixTrajectory::new(
        times,
        states,
        parse_elements(&c.elements, heff.dim())?,
        "matrix-exponential",
    )?;
    traj.write_csv(&paths.csv, tol)?;
    let dec = heff.decompose(tol)?;
    write_summary(
        &paths.summary,
        &metadata("nonhermitian", traj.solver, tol, hash),
        json!({
            "dim": heff.dim(),
            "decay_rates": dec.gammas,
            "final_trace": linalg::trace(traj.states.last().unwrap()).re,
        }),
    )?;
    Ok(RunOutcome { files: vec![paths.csv.clone(), paths.summary.clone()], failures })
}

fn run_gksl_equivalence(
    c: &config::GkslEquivalenceConfig,
    hash: &str,
    paths: &OutputPaths,
    tol: &Tolerances,
    opts: &RunOptions,
) -> CliResult<RunOutcome> {
    let heff = load_heff(&c.h_eff, tol)?;
    let r0 = NonNormalizedDensityMatrix::new(c.r0.to_matrix()?, tol)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let times = uniform_grid(c.t_max, c.points)?;

    let model = LindbladModel::from_effective_hamiltonian(&heff, tol)?;
    let rho0 = normalization_reconstruction(&r0);
    let gksl_traj = model.propagate(&rho0, &times, tol)?;
    let nh_traj = heff.evolve_density(&r0, &times, tol)?;

    let mut sup = 0.0f64;
    for (gksl, nh) in gksl_traj.iter().zip(nh_traj.iter()) {
        let rec = normalization_reconstruction(nh);
        sup = sup.max(linalg::max_abs_diff(gksl.mat(), rec.mat()));
    }

    let states: Vec<CMatrix> = gksl_traj.iter().map(|r| r.mat().clone()).collect();
    let traj = MatrixTrajectory::new(
        times,
        states,
        parse_elements(&c.elements, model.dim())?,
        "liouvillian-exponential",
    )?;
    traj.write_csv(&paths.csv, tol)?;

    let mut failures = Vec::new();
    if opts.check {
        failures.extend(traj.check_states(tol)?);
        if sup > EXACT_CHECK_TOL {
            failures.push(format!(
                "GKSL and non-Hermitian routes disagree by {sup:.3e}"
            ));
        }
    }
    write_summary(
        &paths.summary,
        &metadata("gksl-equivalence", traj.solver, tol, hash),
        json!({
            "dim": model.dim(),
            "jumps": model.jumps().len(),
            "sup_difference": sup,
            "tolerance": EXACT_CHECK_TOL,
        }),
    )?;
    Ok(RunOutcome { files: vec![paths.csv.clone(), paths.summary.clone()], failures })
}

fn pseudomode_params(
    omega1: f64,
    terms: &[config::LorentzianTermConfig],
) -> CliResult<PseudomodeParams> {
    PseudomodeParams::new(
        omega1,
        terms
            .iter()
            .map(|t| LorentzianTerm {
                coupling: C64::new(t.g, 0.0),
                width: t.gamma,
                center: t.omega,
            })
            .collect(),
    )
    .map_err(|e| CliError::Config(e.to_string()))
}

fn run_pseudomode(
    c: &config::PseudomodeConfig,
    hash: &str,
    paths: &OutputPaths,
    tol: &Tolerances,
    opts: &RunOptions,
) -> CliResult<RunOutcome> {
    let params = pseudomode_params(c.omega1, &c.terms)?;
    let psi1_0 = C64::new(c.psi1_re.unwrap_or(1.0), c.psi1_im.unwrap_or(0.0));
    if psi1_0.norm() > 1.0 + 1e-12 {
        return Err(CliError::Config("initial amplitude exceeds 1".into()));
    }
    let times = uniform_grid(c.t_max, c.points)?;
    let heff = params.effective_hamiltonian(tol)?;
    let mut psi0 = arr1(&vec![C64::new(0.0, 0.0); heff.dim()]);
    psi0[0] = psi1_0;
    let psis = heff.evolve_vector(&psi0, &times)?;
    let amplitudes: Vec<C64> = psis.iter().map(|p| p[0]).collect();

    let traj = AmplitudeTrajectory {
        times: times.clone(),
        amplitudes,
        solver: "matrix-exponential",
    };
    traj.write_csv(&paths.csv)?;

    let mut failures = Vec::new();
    let mut checks = Value::Null;
    if opts.check {
        // Excitation cannot grow.
        let mut prev = f64::INFINITY;
        for (k, psi) in traj.amplitudes.iter().enumerate() {
            if psi.norm() > prev + 1e-10 {
                failures.push(format!("amplitude grew at index {k}"));
            }
            prev = psi.norm();
        }
        // Cross-check against direct integration of the memory-kernel
        // equation on a refined grid.
        let refine = (8000 / (c.points - 1)).max(1);
        let fine = uniform_grid(c.t_max, (c.points - 1) * refine + 1)?;
        let volterra = params.solve_volterra(&fine, psi1_0)?;
        let mut sup = 0.0f64;
        for (k, psi) in traj.amplitudes.iter().enumerate() {
            sup = sup.max((psi - volterra[k * refine]).norm());
        }
        if sup > 1e-5 {
            failures.push(format!(
                "pseudomode route deviates from direct integration by {sup:.3e}"
            ));
        }
        checks = json!({ "sup_vs_volterra": sup, "tolerance": 1e-5 });
    }

    write_summary(
        &paths.summary,
        &metadata("pseudomode", traj.solver, tol, hash),
        json!({
            "omega1": c.omega1,
            "n_terms": params.n_terms(),
            "final_abs2": traj.amplitudes.last().unwrap().norm_sqr(),
            "checks": checks,
        }),
    )?;
    Ok(RunOutcome { files: vec![paths.csv.clone(), paths.summary.clone()], failures })
}

fn run_friedrichs(
    c: &config::FriedrichsConvergenceConfig,
    hash: &str,
    paths: &OutputPaths,
    tol: &Tolerances,
    opts: &RunOptions,
) -> CliResult<RunOutcome> {
    let params = pseudomode_params(c.omega1, &c.terms)?;
    let times = uniform_grid(c.t_max, c.points)?;
    let heff = params.effective_hamiltonian(tol)?;
    let mut psi0 = arr1(&vec![C64::new(0.0, 0.0); heff.dim()]);
    psi0[0] = C64::new(1.0, 0.0);
    let reference = heff.evolve_vector(&psi0, &times)?;

    let mut errors = Vec::new();
    let mut coverages = Vec::new();
    let mut finest: Option<(usize, Vec<C64>)> = None;
    for &n in &c.mode_counts {
        let bath = params.discretize_bath(n, c.window)?;
        let friedrichs = bath.evolve_friedrichs(c.omega1, C64::new(1.0, 0.0), &times)?;
        let mut sup = 0.0f64;
        for (pm, fr) in reference.iter().zip(friedrichs.iter()) {
            sup = sup.max((pm[0].norm_sqr() - fr[0].norm_sqr()).abs());
        }
        errors.push(sup);
        coverages.push(bath.coverage);
        if finest.as_ref().map(|(m, _)| n > *m).unwrap_or(true) {
            finest = Some((n, friedrichs.iter().map(|f| f[0]).collect()));
        }
    }
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);

    // The per-N error table is the plot interface for this scenario.
    let mut csv = String::from("n_modes,coverage,sup_error\n");
    for ((n, cov), err) in c.mode_counts.iter().zip(&coverages).zip(&errors) {
        csv.push_str(&format!("{n},{cov:.16e},{err:.16e}\n"));
    }
    crate::output::write_file(&paths.csv, csv.as_bytes())?;

    // The finest discretization also goes out as an amplitude trajectory so
    // it can be compared against a pseudomode run on the same grid.
    let (finest_n, amplitudes) = finest.expect("mode_counts is non-empty");
    let amp_path = paths
        .csv
        .with_file_name(match paths.csv.file_stem().and_then(|s| s.to_str()) {
            Some(stem) => format!("{stem}_amplitudes.csv"),
            None => "friedrichs_amplitudes.csv".to_string(),
        });
    AmplitudeTrajectory {
        times: times.clone(),
        amplitudes,
        solver: "hermitian-eigendecomposition",
    }
    .write_csv(&amp_path)?;

    let mut failures = Vec::new();
    if opts.check && c.mode_counts.len() > 1 && !monotone {
        failures.push(format!("errors not strictly decreasing: {errors:?}"));
    }
    write_summary(
        &paths.summary,
        &metadata("friedrichs-convergence", "hermitian-eigendecomposition", tol, hash),
        json!({
            "mode_counts": c.mode_counts,
            "window": c.window,
            "errors": errors,
            "coverages": coverages,
            "monotone_decreasing": monotone,
            "amplitude_trajectory": amp_path.display().to_string(),
            "amplitude_n_modes": finest_n,
        }),
    )?;
    Ok(RunOutcome {
        files: vec![paths.csv.clone(), amp_path, paths.summary.clone()],
        failures,
    })
}

fn run_van_hove(
    c: &config::VanHoveSweepConfig,
    hash: &str,
    paths: &OutputPaths,
    tol: &Tolerances,
    opts: &RunOptions,
) -> CliResult<RunOutcome> {
    let init = two_level_init(c.rho11, c.rho10_re, c.rho10_im)?;
    let times = uniform_grid(c.t_max, c.points)?;
    let mut errors = Vec::new();
    for &lambda in &c.lambdas {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(CliError::Config(format!("λ must be positive, got {lambda}")));
        }
        let mut sup = 0.0f64;
        for &t in &times {
            let (gs, rs, ts) = van_hove_rescale(lambda, c.g, c.gamma0, t)?;
            let scaled = resonance_rho_s(gs, rs, &init, ts, tol)?;
            let markov = markov_limit_rho(c.gamma0, &init, t, tol)?;
            sup = sup.max(linalg::max_abs_diff(scaled.mat(), markov.mat()));
        }
        errors.push(sup);
    }
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);

    let mut csv = String::from("lambda,sup_error\n");
    for (l, e) in c.lambdas.iter().zip(&errors) {
        csv.push_str(&format!("{l:.16e},{e:.16e}\n"));
    }
    crate::output::write_file(&paths.csv, csv.as_bytes())?;

    let mut failures = Vec::new();
    if opts.check && c.lambdas.len() > 1 && !monotone {
        failures.push(format!("scaling errors not monotone: {errors:?}"));
    }
    write_summary(
        &paths.summary,
        &metadata("van-hove-sweep", "closed-form", tol, hash),
        json!({
            "g": c.g,
            "gamma0": c.gamma0,
            "lambdas": c.lambdas,
            "errors": errors,
            "monotone_decreasing": monotone,
        }),
    )?;
    Ok(RunOutcome { files: vec![paths.csv.clone(), paths.summary.clone()], failures })
}

fn run_finite_temp(
    c: &config::FiniteTempConfig,
    hash: &str,
    paths: &OutputPaths,
    tol: &Tolerances,
    opts: &RunOptions,
) -> CliResult<RunOutcome> {
    let init = two_level_init(c.rho11, c.rho10_re, c.rho10_im)?;
    let times = uniform_grid(c.t_max, c.points)?;
    let lambdas = c.lambdas.clone().unwrap_or_else(|| vec![1.0]);
    let set = IndexSet::new([2usize]).map_err(|e| CliError::Config(e.to_string()))?;

    let mut errors = Vec::new();
    let mut reduced_lambda1: Option<Vec<CMatrix>> = None;
    for &lambda in &lambdas {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(CliError::Config(format!("λ must be positive, got {lambda}")));
        }
        let params =
            FiniteTempParams::new(lambda * c.g, lambda * lambda * c.gamma0, c.n_mean)
                .map_err(|e| CliError::Config(e.to_string()))?;
        let model = params.generator(tol)?;
        let rho0 = three_level_init(&init, tol)?;
        let scaled_times: Vec<f64> = times.iter().map(|t| t / (lambda * lambda)).collect();
        let traj = model.propagate(&rho0, &scaled_times, tol)?;
        let mut sup = 0.0f64;
        let mut reduced_states = Vec::with_capacity(traj.len());
        for (k, rho) in traj.iter().enumerate() {
            let reduced = partial_trace_over_indices(rho, &set, tol)?;
            let markov = finite_temp_markov_rho(c.gamma0, c.n_mean, &init, times[k], tol)?;
            sup = sup.max(linalg::max_abs_diff(reduced.rho.mat(), markov.mat()));
            reduced_states.push(reduced.rho.into_inner());
        }
        errors.push(sup);
        if lambda == 1.0 {
            reduced_lambda1 = Some(reduced_states);
        }
    }
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);

    // Trajectory output: the reduced two-level dynamics at λ = 1 (or the
    // first ladder entry when 1 is absent).
    let states = match reduced_lambda1 {
        Some(s) => s,
        None => {
            let params = FiniteTempParams::new(
                lambdas[0] * c.g,
                lambdas[0] * lambdas[0] * c.gamma0,
                c.n_mean,
            )
            .map_err(|e| CliError::Config(e.to_string()))?;
            let model = params.generator(tol)?;
            let rho0 = three_level_init(&init, tol)?;
            let scaled: Vec<f64> = times.iter().map(|t| t / (lambdas[0] * lambdas[0])).collect();
            model
                .propagate(&rho0, &scaled, tol)?
                .iter()
                .map(|r| {
                    Ok(partial_trace_over_indices(r, &set, tol)?.rho.into_inner())
                })
                .collect::<CliResult<Vec<_>>>()?
        }
    };
    let traj = MatrixTrajectory::new(times, states, None, "liouvillian-exponential")?;
    traj.write_csv(&paths.csv, tol)?;

    let stationary = c.n_mean / (1.0 + 2.0 * c.n_mean);
    let mut failures = Vec::new();
    if opts.check {
        failures.extend(traj.check_states(tol)?);
        if lambdas.len() > 1 && !monotone {
            failures.push(format!("scaling errors not monotone: {errors:?}"));
        }
    }
    write_summary(
        &paths.summary,
        &metadata("finite-temp", traj.solver, tol, hash),
        json!({
            "g": c.g,
            "gamma0": c.gamma0,
            "n_mean": c.n_mean,
            "lambdas": lambdas,
            "errors_vs_markov_form": errors,
            "monotone_decreasing": monotone,
            "stationary_excited_population": stationary,
        }),
    )?;
    Ok(RunOutcome { files: vec![paths.csv.clone(), paths.summary.clone()], failures })
}

fn run_fmo(c: &config::FmoConfig, hash: &str, paths: &OutputPaths) -> CliResult<RunOutcome> {
    let params = FmoParams::new(c.omega0_cm, c.beta_inv_cm, c.huang_rhys, c.gamma0_half_cm)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let report = fmo_derive(&params).map_err(|e| CliError::Config(e.to_string()))?;
    let regime = if report.oscillatory { "oscillatory" } else { "overdamped" };
    write_summary(
        &paths.summary,
        &metadata("fmo", "closed-form", &Tolerances::default(), hash),
        json!({
            "inputs": params,
            "report": report,
            "regime": regime,
        }),
    )?;
    Ok(RunOutcome { files: vec![paths.summary.clone()], failures: Vec::new() })
}
