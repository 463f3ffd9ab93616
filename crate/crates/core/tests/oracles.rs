//! Cross-route oracle checks: every nontrivial result is recomputed along
//! an independent path and the two are compared at tight tolerances.

use ndarray::{arr1, Array2};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vibron::gksl::LindbladModel;
use vibron::linalg::max_abs_diff;
use vibron::pseudomode::{reduced_density_matrix, LorentzianTerm, PseudomodeParams};
use vibron::scenarios::{resonance_rho_s, strong_coupling_limit_rho, ResonanceParams, TwoLevelInit};
use vibron::states::{partial_trace_over_indices, DensityMatrix, IndexSet, NonNormalizedDensityMatrix};
use vibron::{uniform_grid, CMatrix, Tolerances, C64};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Direct Volterra integration of the lab-frame memory-kernel equation for
/// a single resonant peak, rotated into the interaction frame, must land on
/// the damped-oscillation closed form. The rotation is applied to the
/// numerical solution, never to the closed form.
#[test]
fn volterra_reproduces_resonance_closed_form() {
    let g = 0.35;
    let gamma = 1.0;
    let omega = 0.8;
    let params = PseudomodeParams::new(
        omega,
        vec![LorentzianTerm { coupling: c(g, 0.0), width: gamma, center: omega }],
    )
    .unwrap();
    // h = 1e-3/γ over eight lifetimes.
    let times = uniform_grid(8.0 / gamma, 8001).unwrap();
    let numeric = params.solve_volterra(&times, c(1.0, 0.0)).unwrap();
    let reference = ResonanceParams::new(g, gamma).unwrap();
    let mut sup = 0.0f64;
    for (k, &t) in times.iter().enumerate() {
        let rotated = C64::new(0.0, omega * t).exp() * numeric[k];
        let (psi1, _) = reference.amplitudes(t).unwrap();
        sup = sup.max((rotated - psi1).norm());
    }
    assert!(sup <= 1e-6, "sup discrepancy {sup:.3e}");
}

/// The excited-state population of the non-Hermitian density propagation
/// equals the squared closed-form amplitude.
#[test]
fn density_propagation_population_matches_amplitude_square() {
    let p = ResonanceParams::new(0.4, 1.3).unwrap();
    let heff = p.interaction_hamiltonian(&tol()).unwrap();
    let mut excited: CMatrix = Array2::zeros((2, 2));
    excited[[0, 0]] = c(1.0, 0.0);
    let r0 = NonNormalizedDensityMatrix::new(excited, &tol()).unwrap();
    let times = uniform_grid(9.0, 180).unwrap();
    let traj = heff.evolve_density(&r0, &times, &tol()).unwrap();
    for (k, &t) in times.iter().enumerate() {
        let (psi1, _) = p.amplitudes(t).unwrap();
        let diff = (traj[k].mat()[[0, 0]].re - psi1.norm_sqr()).abs();
        assert!(diff <= 1e-10, "t = {t}: {diff:.3e}");
    }
}

/// Reduced two-level state: the amplitude route (solve the small
/// non-Hermitian system, assemble the reduced state from ψ₁ and the
/// spectator vacuum amplitude) must agree with the full GKSL pipeline
/// (lift, propagate with the absorbing vacuum, trace out the pseudomodes).
#[test]
fn reduced_state_equals_traced_gksl_trajectory() {
    let params = PseudomodeParams::new(
        0.3,
        vec![
            LorentzianTerm { coupling: c(0.45, 0.0), width: 1.2, center: 0.5 },
            LorentzianTerm { coupling: c(0.3, 0.0), width: 0.9, center: 0.1 },
        ],
    )
    .unwrap();
    let psi_vac = c(0.6, 0.0);
    let psi1_0 = c(0.8, 0.0);

    // Amplitude route.
    let heff = params.effective_hamiltonian(&tol()).unwrap();
    let times = uniform_grid(6.0, 151).unwrap();
    let mut psi0 = arr1(&vec![c(0.0, 0.0); heff.dim()]);
    psi0[0] = psi1_0;
    let amps = heff.evolve_vector(&psi0, &times).unwrap();

    // GKSL route: the pure initial state carries the vacuum amplitude, so
    // the vacuum coherences evolve alongside the populations.
    let model = LindbladModel::from_effective_hamiltonian(&heff, &tol()).unwrap();
    let full0 = arr1(&[psi_vac, psi1_0, c(0.0, 0.0), c(0.0, 0.0)]);
    let rho0 = DensityMatrix::from_pure(&full0, &tol()).unwrap();
    let traj = model.propagate(&rho0, &times, &tol()).unwrap();
    let pseudomode_indices = IndexSet::new([2usize, 3]).unwrap();

    let mut sup = 0.0f64;
    for (k, state) in traj.iter().enumerate() {
        let traced = partial_trace_over_indices(state, &pseudomode_indices, &tol()).unwrap();
        let direct = reduced_density_matrix((psi_vac, psi1_0), amps[k][0], &tol()).unwrap();
        sup = sup.max(max_abs_diff(traced.rho.mat(), direct.mat()));
    }
    assert!(sup <= 1e-9, "sup discrepancy {sup:.3e}");
}

/// The pseudomode components of the propagated state vector equal the
/// explicit convolution of ψ₁ against each peak's complex exponential.
#[test]
fn pseudomode_amplitudes_match_convolution_integrals() {
    let params = PseudomodeParams::new(
        0.2,
        vec![
            LorentzianTerm { coupling: c(0.45, 0.0), width: 1.1, center: 0.6 },
            LorentzianTerm { coupling: c(0.25, 0.0), width: 0.7, center: -0.3 },
        ],
    )
    .unwrap();
    let heff = params.effective_hamiltonian(&tol()).unwrap();
    let times = uniform_grid(6.0, 12001).unwrap();
    let mut psi0 = arr1(&vec![c(0.0, 0.0); heff.dim()]);
    psi0[0] = c(1.0, 0.0);
    let psis = heff.evolve_vector(&psi0, &times).unwrap();
    let psi1_series: Vec<C64> = psis.iter().map(|p| p[0]).collect();

    let convolved = params.convolution_amplitudes(&times, &psi1_series).unwrap();
    let mut sup = 0.0f64;
    for (l, series) in convolved.iter().enumerate() {
        for (k, phi) in series.iter().enumerate() {
            sup = sup.max((phi - psis[k][l + 1]).norm());
        }
    }
    assert!(sup <= 1e-6, "sup discrepancy {sup:.3e}");
}

/// The closed-form kernel and the Fourier transform of the spectral density
/// agree for random multi-peak parameter sets.
#[test]
fn kernel_density_fourier_pair_on_random_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf0c4);
    let mut worst = 0.0f64;
    for case in 0..20 {
        let n_terms = 1 + case % 3;
        let terms: Vec<LorentzianTerm> = (0..n_terms)
            .map(|_| LorentzianTerm {
                coupling: c(rng.random_range(0.2..1.0), 0.0),
                width: rng.random_range(0.5..2.0),
                center: rng.random_range(-2.0..2.0),
            })
            .collect();
        let params = PseudomodeParams::new(0.0, terms).unwrap();
        let scale: f64 = params.terms.iter().map(|t| t.coupling.norm_sqr()).sum();
        let min_width = params
            .terms
            .iter()
            .map(|t| t.width)
            .fold(f64::INFINITY, f64::min);
        for factor in [0.0, 0.3, 1.0, 3.0] {
            let t = factor / min_width;
            let direct = params.memory_kernel(t).unwrap();
            let quad = params.kernel_from_spectral_density(t, 1e-5).unwrap();
            worst = worst.max((direct - quad).norm() / scale);
        }
    }
    assert!(worst <= 1e-4, "worst relative discrepancy {worst:.3e}");
}

/// Rescaling (t, g) → (t/λ, λg) at fixed pseudomode width drives the
/// reduced dynamics to the undamped population oscillation.
#[test]
fn strong_coupling_ladder_approaches_oscillation() {
    let g = 0.6;
    let gamma = 1.0;
    let gamma0 = 4.0 * g * g / gamma;
    let init = TwoLevelInit::excited_only();
    let times = uniform_grid(6.0, 241).unwrap();
    let mut errors = Vec::new();
    for lambda in [1.0, 4.0, 16.0] {
        // g → λg at fixed γ means γ₀ → λ²γ₀.
        let g_s = lambda * g;
        let rate_s = lambda * lambda * gamma0;
        let mut sup = 0.0f64;
        for &t in &times {
            let scaled = resonance_rho_s(g_s, rate_s, &init, t / lambda, &tol()).unwrap();
            let limit = strong_coupling_limit_rho(g, t, &tol()).unwrap();
            sup = sup.max(max_abs_diff(scaled.mat(), limit.mat()));
        }
        errors.push(sup);
    }
    assert!(
        errors[1] < errors[0] && errors[2] < errors[1],
        "errors not decreasing along the ladder: {errors:?}"
    );
    // Convergence is O(1/λ): the damping envelope e^{−γt/(2λ)} dominates.
    assert!(
        errors[2] < 0.3 * errors[0],
        "λ = 16 error {:.3e} not well below λ = 1 error {:.3e}",
        errors[2],
        errors[0]
    );
}
