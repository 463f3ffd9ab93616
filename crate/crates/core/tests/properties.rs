//! Property-based invariants on random states, generators, and parameters.

use ndarray::{arr1, Array2};
use proptest::prelude::*;
use vibron::linalg::{adjoint, hermiticity_defect, max_abs_diff, trace};
use vibron::nonhermitian::EffectiveHamiltonian;
use vibron::pseudomode::{LorentzianTerm, PseudomodeParams};
use vibron::scenarios::{resonance_rho_s, van_hove_rescale, TwoLevelInit};
use vibron::secondquant::{embed_one_particle, partial_trace_tensor, TensorState};
use vibron::states::{
    normalization_reconstruction, partial_trace_over_indices, DensityMatrix, IndexSet,
    NonNormalizedDensityMatrix,
};
use vibron::superop::{CoherentCoupling, Dissipator};
use vibron::{eigh, CMatrix, Tolerances, C64};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense complex matrix with entries in the unit box.
fn complex_matrix(n: usize) -> impl Strategy<Value = CMatrix> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |vals| {
        Array2::from_shape_vec((n, n), vals.into_iter().map(|(re, im)| c(re, im)).collect())
            .unwrap()
    })
}

/// Random PSD matrix with trace scaled to `target` ∈ (0, 1].
fn psd_with_trace(n: usize, target: f64) -> impl Strategy<Value = CMatrix> {
    complex_matrix(n).prop_map(move |m| {
        let psd = m.dot(&adjoint(&m));
        let tr = trace(&psd).re.max(1e-12);
        psd.mapv(|z| z * (target / tr))
    })
}

/// Random density matrix.
fn density(n: usize) -> impl Strategy<Value = DensityMatrix> {
    psd_with_trace(n, 1.0).prop_map(|m| DensityMatrix::new(m, &tol()).expect("valid state"))
}

/// Random dissipative effective Hamiltonian H − (i/2)B with B PSD.
fn admissible_heff(n: usize) -> impl Strategy<Value = EffectiveHamiltonian> {
    (complex_matrix(n), psd_with_trace(n, 1.5)).prop_map(|(m, b)| {
        let h = (&m + &adjoint(&m)).mapv(|z| z * 0.5);
        let heff = &h + &b.mapv(|z| z * c(0.0, -0.5));
        EffectiveHamiltonian::new(heff, &tol()).expect("admissible by construction")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reconstruction_has_unit_trace_and_bounded_spectrum(
        n in 2usize..6,
        target in 0.05f64..1.0,
        seed in any::<u64>(),
    ) {
        let m = psd_with_trace_value(n, target, seed);
        let r = NonNormalizedDensityMatrix::new(m, &tol()).unwrap();
        let rho = normalization_reconstruction(&r);
        prop_assert_eq!(rho.dim(), n + 1);
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-13);
        let min_eig = vibron::eigh::min_eigenvalue(rho.mat()).unwrap();
        prop_assert!(min_eig >= -1e-12);
    }

    #[test]
    fn partial_trace_preserves_trace_and_positivity(
        rho in density(5),
        mask in 1usize..15,
    ) {
        let set = IndexSet::new((1..5).filter(|i| mask >> (i - 1) & 1 == 1)).unwrap();
        let reduced = partial_trace_over_indices(&rho, &set, &tol()).unwrap();
        prop_assert!((reduced.rho.trace().re - 1.0).abs() < 1e-12);
        let min_eig = vibron::eigh::min_eigenvalue(reduced.rho.mat()).unwrap();
        prop_assert!(min_eig >= -1e-10);
        prop_assert_eq!(reduced.rho.dim(), 5 - set.len());
    }

    #[test]
    fn partial_trace_composes(
        rho in density(6),
        mask1 in 1usize..31,
        mask2 in 1usize..31,
    ) {
        let set1: Vec<usize> = (1..6).filter(|i| mask1 >> (i - 1) & 1 == 1).collect();
        let residual: Vec<usize> = (1..6).filter(|i| !set1.contains(i)).collect();
        let set2: Vec<usize> = residual
            .iter()
            .enumerate()
            .filter(|(k, _)| mask2 >> k & 1 == 1)
            .map(|(_, &i)| i)
            .collect();

        // One shot over the union.
        let union = IndexSet::new(set1.iter().chain(set2.iter()).copied()).unwrap();
        let direct = partial_trace_over_indices(&rho, &union, &tol()).unwrap();

        // Two stages, re-indexing the second set through the first trace.
        let first = partial_trace_over_indices(
            &rho,
            &IndexSet::new(set1.iter().copied()).unwrap(),
            &tol(),
        )
        .unwrap();
        let remapped: Vec<usize> = set2
            .iter()
            .map(|&old| first.kept.iter().position(|&k| k == old).unwrap())
            .collect();
        let staged = partial_trace_over_indices(
            &first.rho,
            &IndexSet::new(remapped).unwrap(),
            &tol(),
        )
        .unwrap();
        prop_assert!(max_abs_diff(direct.rho.mat(), staged.rho.mat()) < 1e-12);
    }

    #[test]
    fn superoperators_annihilate_trace_and_preserve_hermiticity(
        m in complex_matrix(4),
        from in 0usize..4,
        to in 0usize..4,
    ) {
        prop_assume!(from != to);
        let herm = (&m + &adjoint(&m)).mapv(|z| z * 0.5);
        let d = Dissipator::new(from, to, 4).unwrap();
        let h = CoherentCoupling::new(from, to, 4).unwrap();
        let dm = d.apply(&m).unwrap();
        prop_assert!(trace(&dm).norm() < 1e-12);
        let dh = d.apply(&herm).unwrap();
        prop_assert!(hermiticity_defect(&dh) < 1e-12);
        let hm = h.apply(&herm).unwrap();
        prop_assert!(trace(&hm).norm() < 1e-12);
        prop_assert!(hermiticity_defect(&hm) < 1e-12);
    }

    #[test]
    fn decompose_then_reconstruct_is_identity(heff in admissible_heff(5)) {
        let dec = heff.decompose(&tol()).unwrap();
        let rebuilt = dec.reconstruct();
        let scale = vibron::linalg::max_abs(heff.mat()).max(1e-6);
        prop_assert!(max_abs_diff(&rebuilt, heff.mat()) < 1e-12 * scale.max(1.0) * 10.0);
        for &g in &dec.gammas {
            prop_assert!(g >= 0.0);
        }
        // Orthonormal decay basis.
        let vt = adjoint(&dec.basis);
        let prod = vt.dot(&dec.basis);
        prop_assert!(max_abs_diff(&prod, &vibron::linalg::identity(5)) < 1e-12);
    }

    #[test]
    fn nonhermitian_evolution_contracts_trace_and_stays_positive(
        heff in admissible_heff(4),
        r0 in psd_with_trace(4, 0.9).prop_map(|m| NonNormalizedDensityMatrix::new(m, &tol()).unwrap()),
    ) {
        let times: Vec<f64> = (0..12).map(|k| k as f64 * 0.35).collect();
        let traj = heff.evolve_density(&r0, &times, &tol()).unwrap();
        let mut prev = f64::INFINITY;
        for r in &traj {
            let tr = r.trace().re;
            prop_assert!(tr <= prev + 1e-10);
            prop_assert!(vibron::eigh::min_eigenvalue(r.mat()).unwrap() >= -1e-10);
            prev = tr;
        }
    }

    #[test]
    fn vector_and_density_evolution_agree(heff in admissible_heff(3)) {
        let psi0 = arr1(&[c(0.5, 0.1), c(-0.3, 0.4), c(0.2, -0.2)]);
        let norm: f64 = psi0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let psi0 = psi0.mapv(|z| z / norm);
        let r0 = NonNormalizedDensityMatrix::from_pure(&psi0, &tol()).unwrap();
        let times: Vec<f64> = (0..8).map(|k| k as f64 * 0.4).collect();
        let psis = heff.evolve_vector(&psi0, &times).unwrap();
        let rs = heff.evolve_density(&r0, &times, &tol()).unwrap();
        for (psi, r) in psis.iter().zip(rs.iter()) {
            let proj = vibron::linalg::outer(psi, psi);
            prop_assert!(max_abs_diff(&proj, r.mat()) < 1e-12);
        }
    }

    #[test]
    fn lifted_model_preserves_trace(
        heff in admissible_heff(3),
        r0 in psd_with_trace(3, 0.8).prop_map(|m| NonNormalizedDensityMatrix::new(m, &tol()).unwrap()),
    ) {
        let model = vibron::gksl::LindbladModel::from_effective_hamiltonian(&heff, &tol()).unwrap();
        let rho0 = normalization_reconstruction(&r0);
        let times: Vec<f64> = (0..10).map(|k| k as f64 * 0.3).collect();
        let traj = model.propagate(&rho0, &times, &tol()).unwrap();
        for rho in &traj {
            prop_assert!((rho.trace().re - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn kernel_envelope_and_density_positivity(
        g1 in 0.05f64..1.0,
        g2 in 0.05f64..1.0,
        w1 in 0.2f64..3.0,
        w2 in 0.2f64..3.0,
        c1 in -2.0f64..2.0,
        c2 in -2.0f64..2.0,
        t in 0.0f64..10.0,
        omega in -5.0f64..5.0,
    ) {
        let p = PseudomodeParams::new(
            0.0,
            vec![
                LorentzianTerm { coupling: c(g1, 0.0), width: w1, center: c1 },
                LorentzianTerm { coupling: c(g2, 0.0), width: w2, center: c2 },
            ],
        )
        .unwrap();
        let kernel = p.memory_kernel(t).unwrap();
        let bound = (g1 * g1 + g2 * g2) * (-0.5 * w1.min(w2) * t).exp();
        prop_assert!(kernel.norm() <= bound + 1e-12);
        prop_assert!(p.spectral_density(omega).unwrap() >= 0.0);
    }

    #[test]
    fn excitation_never_grows(
        g in 0.05f64..0.8,
        width in 0.3f64..2.0,
        center in -1.0f64..1.0,
        omega1 in -1.0f64..1.0,
    ) {
        let p = PseudomodeParams::new(
            omega1,
            vec![LorentzianTerm { coupling: c(g, 0.0), width, center }],
        )
        .unwrap();
        let heff = p.effective_hamiltonian(&tol()).unwrap();
        let psi0 = arr1(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let times: Vec<f64> = (0..30).map(|k| k as f64 * 0.25).collect();
        let psis = heff.evolve_vector(&psi0, &times).unwrap();
        for psi in &psis {
            prop_assert!(psi[0].norm() <= 1.0 + 1e-12);
            let total: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
            prop_assert!(total <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn van_hove_composition_law(
        l1 in 0.1f64..3.0,
        l2 in 0.1f64..3.0,
        g in 0.1f64..2.0,
        rate in 0.1f64..2.0,
        t in 0.0f64..10.0,
    ) {
        let (ga, ra, ta) = van_hove_rescale(l1, g, rate, t).unwrap();
        let (gb, rb, tb) = van_hove_rescale(l2, ga, ra, ta).unwrap();
        let (gc, rc, tc) = van_hove_rescale(l1 * l2, g, rate, t).unwrap();
        prop_assert!((gb - gc).abs() < 1e-12 * gc.abs().max(1.0));
        prop_assert!((rb - rc).abs() < 1e-12 * rc.abs().max(1.0));
        prop_assert!((tb - tc).abs() < 1e-9 * tc.abs().max(1.0));
        // The pseudomode width 4g²/γ₀ is invariant.
        prop_assert!((4.0 * gb * gb / rb - 4.0 * g * g / rate).abs() < 1e-9 * (4.0 * g * g / rate));
    }

    #[test]
    fn resonance_reduced_state_is_physical(
        g in 0.05f64..2.0,
        rate in 0.05f64..2.0,
        excited in 0.0f64..1.0,
        coh_frac in 0.0f64..1.0,
        phase in 0.0f64..std::f64::consts::TAU,
        t in 0.0f64..12.0,
    ) {
        let coh_mag = coh_frac * (excited * (1.0 - excited)).sqrt();
        let init = TwoLevelInit::new(excited, C64::from_polar(coh_mag, phase)).unwrap();
        let rho = resonance_rho_s(g, rate, &init, t, &tol()).unwrap();
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
        let min_eig = vibron::eigh::min_eigenvalue(rho.mat()).unwrap();
        prop_assert!(min_eig >= -1e-12);
    }

    #[test]
    fn embedding_preserves_trace_and_rank(rho in density(4)) {
        let ts = embed_one_particle(&rho, &tol()).unwrap();
        prop_assert!((trace(ts.mat()) - c(1.0, 0.0)).norm() < 1e-13);
        let rank_in = eigh::eigvalsh(rho.mat())
            .unwrap()
            .iter()
            .filter(|&&v| v > 1e-10)
            .count();
        let rank_out = eigh::eigvalsh(ts.mat())
            .unwrap()
            .iter()
            .filter(|&&v| v > 1e-10)
            .count();
        prop_assert_eq!(rank_in, rank_out);
    }

    #[test]
    fn tensor_partial_trace_preserves_trace_and_positivity(
        raw in psd_with_trace(8, 1.0),
        mask in 1usize..7,
    ) {
        let ts = TensorState::new(vec![1, 2, 3], raw, &tol()).unwrap();
        let set = IndexSet::new((1..=3).filter(|i| mask >> (i - 1) & 1 == 1)).unwrap();
        let reduced = partial_trace_tensor(&ts, &set, &tol()).unwrap();
        prop_assert!((trace(reduced.mat()) - c(1.0, 0.0)).norm() < 1e-12);
        let min_eig = vibron::eigh::min_eigenvalue(reduced.mat()).unwrap();
        prop_assert!(min_eig >= -1e-10);
    }
}

/// Deterministic PSD matrix used where the strategy composition would
/// otherwise get unwieldy.
fn psd_with_trace_value(n: usize, target: f64, seed: u64) -> CMatrix {
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
    };
    let mut m: CMatrix = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            m[[i, j]] = c(next(), next());
        }
    }
    let psd = m.dot(&adjoint(&m));
    let tr = trace(&psd).re.max(1e-12);
    psd.mapv(|z| z * (target / tr))
}
