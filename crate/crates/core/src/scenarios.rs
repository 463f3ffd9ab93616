//! Closed-form reference solutions and limit analyses for the resonant
//! two-level system coupled to a single Lorentzian peak, the Van
//! Hove–Bogolyubov scaling limits, a finite-temperature deformation
//! generator, and parameter estimates for the FMO dimer.
//!
//! Conventions: γ is the pseudomode width, γ₀ = 4g²/γ the decay rate that
//! survives the weak-coupling scaling limit, and Δ = ¼√(γ² − 16g²) the
//! damped-oscillation exponent (imaginary in the oscillatory regime
//! γ² < 16g²). Closed forms live in the interaction picture.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gksl::LindbladModel;
use crate::states::DensityMatrix;
use crate::superop::{CoherentCoupling, Dissipator};
use crate::tolerances::Tolerances;
use crate::{C64, CMatrix};

/// Speed of light in cm/ps; converts wavenumbers to rates without a 2π
/// (rate convention, fixed by the published 133 cm⁻¹ ↔ 250 fs pair).
pub const SPEED_OF_LIGHT_CM_PER_PS: f64 = 0.0299792458;

/// cm⁻¹ → rate in ps⁻¹.
pub fn wavenumber_to_rate(value_cm: f64) -> Result<f64> {
    if !(value_cm.is_finite() && value_cm >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "wavenumber must be ≥ 0, got {value_cm}"
        )));
    }
    Ok(SPEED_OF_LIGHT_CM_PER_PS * value_cm)
}

/// rate in ps⁻¹ → cm⁻¹.
pub fn rate_to_wavenumber(rate_ps: f64) -> Result<f64> {
    if !(rate_ps.is_finite() && rate_ps >= 0.0) {
        return Err(Error::InvalidParameter(format!("rate must be ≥ 0, got {rate_ps}")));
    }
    Ok(rate_ps / SPEED_OF_LIGHT_CM_PER_PS)
}

/// cosh(Δt) and sinh(Δt)/Δ as functions of Δ², which keeps both regimes
/// (real and imaginary Δ) and the Δ → 0 crossover in real arithmetic.
///
/// `scale` sets the crossover window: |Δ²| < 1e−12·scale switches to the
/// series of the removable singularity.
fn damped_envelope(delta_sq: f64, t: f64, scale: f64) -> (f64, f64) {
    if delta_sq.abs() < 1e-12 * scale.max(f64::MIN_POSITIVE) {
        let x = delta_sq * t * t;
        let cosh_like = 1.0 + x / 2.0 + x * x / 24.0;
        let sinc_like = t * (1.0 + x / 6.0 + x * x / 120.0);
        (cosh_like, sinc_like)
    } else if delta_sq > 0.0 {
        let d = delta_sq.sqrt();
        ((d * t).cosh(), (d * t).sinh() / d)
    } else {
        let mu = (-delta_sq).sqrt();
        ((mu * t).cos(), (mu * t).sin() / mu)
    }
}

/// Resonant single-peak parameters: coupling g and pseudomode width γ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceParams {
    pub coupling: f64,
    pub width: f64,
}

impl ResonanceParams {
    pub fn new(coupling: f64, width: f64) -> Result<Self> {
        if !(coupling.is_finite() && coupling >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "coupling must be ≥ 0, got {coupling}"
            )));
        }
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidParameter(format!("width must be > 0, got {width}")));
        }
        Ok(Self { coupling, width })
    }

    /// γ₀ = 4g²/γ, the decay rate of the weak-coupling limit.
    pub fn markov_rate(&self) -> f64 {
        4.0 * self.coupling * self.coupling / self.width
    }

    /// Δ² = (γ² − 16g²)/16.
    pub fn delta_sq(&self) -> f64 {
        (self.width * self.width - 16.0 * self.coupling * self.coupling) / 16.0
    }

    /// Oscillatory regime ⇔ γ² < 16g².
    pub fn oscillatory(&self) -> bool {
        self.delta_sq() < 0.0
    }

    fn delta_scale(&self) -> f64 {
        (self.width * self.width).max(16.0 * self.coupling * self.coupling) / 16.0
    }

    /// Interaction-picture amplitudes from ψ₁(0) = 1, ψ̃₁(0) = 0:
    ///
    /// ψ₁(t) = e^{−γt/4}(cosh Δt + (γ/4Δ) sinh Δt),
    /// ψ̃₁(t) = −(i g/Δ) e^{−γt/4} sinh Δt.
    pub fn amplitudes(&self, t: f64) -> Result<(C64, C64)> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter(format!("time must be ≥ 0, got {t}")));
        }
        let envelope = (-0.25 * self.width * t).exp();
        let (cosh_like, sinc_like) = damped_envelope(self.delta_sq(), t, self.delta_scale());
        let psi1 = envelope * (cosh_like + 0.25 * self.width * sinc_like);
        let psi_pm = -self.coupling * envelope * sinc_like;
        Ok((C64::new(psi1, 0.0), C64::new(0.0, psi_pm)))
    }

    /// The interaction-picture effective Hamiltonian
    /// −i(γ/2)|1̃⟩⟨1̃| + g(|1̃⟩⟨1| + |1⟩⟨1̃|) on the basis {|1⟩, |1̃⟩}.
    pub fn interaction_hamiltonian(&self, tol: &Tolerances) -> Result<crate::nonhermitian::EffectiveHamiltonian> {
        let mut m: CMatrix = Array2::zeros((2, 2));
        m[[1, 1]] = C64::new(0.0, -0.5 * self.width);
        m[[0, 1]] = C64::new(self.coupling, 0.0);
        m[[1, 0]] = C64::new(self.coupling, 0.0);
        crate::nonhermitian::EffectiveHamiltonian::new(m, tol)
    }
}

/// Initial two-level state data: excited population ρ₁₁ and coherence ρ₁₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelInit {
    pub excited: f64,
    pub coherence: C64,
}

impl TwoLevelInit {
    pub fn new(excited: f64, coherence: C64) -> Result<Self> {
        if !(0.0..=1.0).contains(&excited) {
            return Err(Error::InvalidParameter(format!(
                "excited population must lie in [0, 1], got {excited}"
            )));
        }
        if coherence.norm_sqr() > excited * (1.0 - excited) + 1e-12 {
            return Err(Error::InvalidParameter(
                "coherence too large for a positive state".into(),
            ));
        }
        Ok(Self { excited, coherence })
    }

    pub fn excited_only() -> Self {
        Self { excited: 1.0, coherence: C64::new(0.0, 0.0) }
    }
}

fn two_level_state(excited: f64, coherence: C64, tol: &Tolerances) -> Result<DensityMatrix> {
    let mut rho: CMatrix = Array2::zeros((2, 2));
    rho[[1, 1]] = C64::new(excited, 0.0);
    rho[[0, 0]] = C64::new(1.0 - excited, 0.0);
    rho[[1, 0]] = coherence;
    rho[[0, 1]] = coherence.conj();
    DensityMatrix::new(rho, tol)
}

/// Reduced two-level state of the resonant model after tracing out the
/// pseudomode, as a closed form in (g, γ₀):
///
/// with a = g²/γ₀ and Δ = g√((g/γ₀)² − 1), the amplitude envelope is
/// E(t) = e^{−at}(cosh Δt + (a/Δ) sinh Δt), and
///
/// ρ₁₁(t) = ρ₁₁ E², ρ₁₀(t) = ρ₁₀ E, ρ₀₀(t) = 1 − ρ₁₁ E².
pub fn resonance_rho_s(
    coupling: f64,
    markov_rate: f64,
    init: &TwoLevelInit,
    t: f64,
    tol: &Tolerances,
) -> Result<DensityMatrix> {
    if !(coupling.is_finite() && coupling >= 0.0) || !(markov_rate.is_finite() && markov_rate > 0.0)
    {
        return Err(Error::InvalidParameter(
            "resonance closed form needs g ≥ 0 and γ₀ > 0".into(),
        ));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter(format!("time must be ≥ 0, got {t}")));
    }
    let a = coupling * coupling / markov_rate;
    let delta_sq = a * a - coupling * coupling;
    let scale = (a * a).max(coupling * coupling);
    let (cosh_like, sinc_like) = damped_envelope(delta_sq, t, scale);
    let envelope = (-a * t).exp() * (cosh_like + a * sinc_like);
    two_level_state(
        init.excited * envelope * envelope,
        init.coherence * envelope,
        tol,
    )
}

/// The weak-coupling (Van Hove–Bogolyubov) limit of the reduced dynamics:
/// exponential relaxation at rate γ₀ with coherences decaying at γ₀/2.
pub fn markov_limit_rho(
    markov_rate: f64,
    init: &TwoLevelInit,
    t: f64,
    tol: &Tolerances,
) -> Result<DensityMatrix> {
    if !(markov_rate.is_finite() && markov_rate > 0.0) || !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter("needs γ₀ > 0 and t ≥ 0".into()));
    }
    two_level_state(
        init.excited * (-markov_rate * t).exp(),
        init.coherence * (-0.5 * markov_rate * t).exp(),
        tol,
    )
}

/// The strong-coupling limit: undamped population oscillation
/// cos²(gt)|1⟩⟨1| + sin²(gt)|0⟩⟨0|.
pub fn strong_coupling_limit_rho(coupling: f64, t: f64, tol: &Tolerances) -> Result<DensityMatrix> {
    if !(coupling.is_finite() && coupling >= 0.0) || !(t.is_finite() && t >= 0.0) {
        return Err(Error::InvalidParameter("needs g ≥ 0 and t ≥ 0".into()));
    }
    let c2 = (coupling * t).cos().powi(2);
    two_level_state(c2, C64::new(0.0, 0.0), tol)
}

/// The scaling map (t, g, γ₀) → (t/λ², λg, λ²γ₀) behind the weak-coupling
/// limit. Composes multiplicatively: applying λ₁ then λ₂ equals λ₁λ₂, and γ
/// = 4g²/γ₀ is invariant.
pub fn van_hove_rescale(
    lambda: f64,
    coupling: f64,
    markov_rate: f64,
    t: f64,
) -> Result<(f64, f64, f64)> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidParameter(format!("λ must be > 0, got {lambda}")));
    }
    Ok((lambda * coupling, lambda * lambda * markov_rate, t / (lambda * lambda)))
}

/// Finite-temperature deformation parameters: coupling g, Markovian rate
/// γ₀, and mean thermal occupation n of the peak.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiniteTempParams {
    pub coupling: f64,
    pub markov_rate: f64,
    pub occupancy: f64,
}

impl FiniteTempParams {
    pub fn new(coupling: f64, markov_rate: f64, occupancy: f64) -> Result<Self> {
        if !(coupling.is_finite() && coupling >= 0.0)
            || !(markov_rate.is_finite() && markov_rate > 0.0)
            || !(occupancy.is_finite() && occupancy >= 0.0)
        {
            return Err(Error::InvalidParameter(
                "finite-temperature parameters need g ≥ 0, γ₀ > 0, n ≥ 0".into(),
            ));
        }
        Ok(Self { coupling, markov_rate, occupancy })
    }

    /// The deformation generator on the basis {|0⟩, |1⟩, |1̃⟩}:
    ///
    /// γ₀ n D₀₁ + (4g²/(γ₀(n+1))) D_{1̃0} + g h_{11̃}
    ///
    /// At n = 0 the pump channel vanishes and the generator is exactly the
    /// zero-temperature resonant one.
    pub fn generator(&self, tol: &Tolerances) -> Result<LindbladModel> {
        let g = self.coupling;
        let n = self.occupancy;
        let pump = self.markov_rate * n;
        let drain = 4.0 * g * g / (self.markov_rate * (n + 1.0));

        let mut h: CMatrix = Array2::zeros((3, 3));
        h[[1, 2]] = C64::new(g, 0.0);
        h[[2, 1]] = C64::new(g, 0.0);

        let mut jumps = Vec::new();
        if pump >= crate::gksl::RATE_FLOOR {
            let mut j: CMatrix = Array2::zeros((3, 3));
            j[[1, 0]] = C64::new(pump.sqrt(), 0.0);
            jumps.push(j);
        }
        if drain >= crate::gksl::RATE_FLOOR {
            let mut j: CMatrix = Array2::zeros((3, 3));
            j[[0, 2]] = C64::new(drain.sqrt(), 0.0);
            jumps.push(j);
        }
        LindbladModel::new(h, jumps, tol)
    }

    /// The same generator assembled from the elementary superoperators,
    /// used as a structural cross-check of [`Self::generator`].
    pub fn apply_generator_direct(&self, rho: &CMatrix) -> Result<CMatrix> {
        let pump = Dissipator::new(0, 1, 3)?;
        let drain = Dissipator::new(2, 0, 3)?;
        let coupling = CoherentCoupling::new(1, 2, 3)?;
        let g = self.coupling;
        let n = self.occupancy;
        let out = pump.apply(rho)?.mapv(|z| z * (self.markov_rate * n))
            + drain
                .apply(rho)?
                .mapv(|z| z * (4.0 * g * g / (self.markov_rate * (n + 1.0))))
            + coupling.apply(rho)?.mapv(|z| z * g);
        Ok(out)
    }
}

/// Closed-form Markovian limit at finite temperature: relaxation to the
/// Gibbs-like state diag((1+n)/(1+2n), n/(1+2n)) at rate γ₀(2n+1), with
/// coherences decaying at half that rate.
pub fn finite_temp_markov_rho(
    markov_rate: f64,
    occupancy: f64,
    init: &TwoLevelInit,
    t: f64,
    tol: &Tolerances,
) -> Result<DensityMatrix> {
    if !(markov_rate.is_finite() && markov_rate > 0.0)
        || !(occupancy.is_finite() && occupancy >= 0.0)
        || !(t.is_finite() && t >= 0.0)
    {
        return Err(Error::InvalidParameter("needs γ₀ > 0, n ≥ 0, t ≥ 0".into()));
    }
    let stationary = occupancy / (1.0 + 2.0 * occupancy);
    let rate = markov_rate * (2.0 * occupancy + 1.0);
    let excited = stationary + (init.excited - stationary) * (-rate * t).exp();
    let coherence = init.coherence * (-0.5 * rate * t).exp();
    two_level_state(excited, coherence, tol)
}

/// FMO-dimer inputs, all in wavenumbers: vibrational peak frequency ω₀,
/// thermal energy β⁻¹, dimensionless Huang–Rhys factor S, and the Markovian
/// coherence decay rate γ₀/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FmoParams {
    pub peak_frequency_cm: f64,
    pub thermal_energy_cm: f64,
    pub huang_rhys: f64,
    pub coherence_decay_cm: f64,
}

impl FmoParams {
    pub fn new(
        peak_frequency_cm: f64,
        thermal_energy_cm: f64,
        huang_rhys: f64,
        coherence_decay_cm: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("peak frequency", peak_frequency_cm),
            ("thermal energy", thermal_energy_cm),
            ("Huang-Rhys factor", huang_rhys),
            ("coherence decay rate", coherence_decay_cm),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")));
            }
        }
        Ok(Self { peak_frequency_cm, thermal_energy_cm, huang_rhys, coherence_decay_cm })
    }
}

/// Derived FMO-dimer quantities, in both wavenumber and time units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FmoReport {
    /// Mean thermal occupation n = 1/(e^{ω₀β} − 1).
    pub occupancy: f64,
    /// Exciton–vibration coupling g = √S ω₀ (cm⁻¹).
    pub coupling_cm: f64,
    /// Markovian decay rate γ₀ = 2·(γ₀/2) (cm⁻¹).
    pub markov_rate_cm: f64,
    /// Pseudomode width γ = 4g²/γ₀ (cm⁻¹).
    pub pseudomode_width_cm: f64,
    /// γ/4 (cm⁻¹), the coherence decay rate of the resonant model.
    pub quarter_width_cm: f64,
    /// Coherence lifetime 4/γ (ps).
    pub coherence_lifetime_ps: f64,
    /// |Δ| = ¼√|γ² − 16g²| (cm⁻¹), the population oscillation frequency.
    pub oscillation_freq_cm: f64,
    /// Oscillation period 2π/|Δ| (ps); meaningful in the oscillatory regime.
    pub oscillation_period_ps: f64,
    /// Regime flag: oscillatory ⇔ γ² − 16g² < 0.
    pub oscillatory: bool,
    /// Markovian transition time 1/(γ₀/2) (fs), the scale the long-lived
    /// coherences are compared against.
    pub markov_coherence_time_fs: f64,
}

/// Derive the resonant-model parameters for the FMO dimer.
pub fn fmo_derive(params: &FmoParams) -> Result<FmoReport> {
    let omega0 = params.peak_frequency_cm;
    let occupancy = 1.0 / ((omega0 / params.thermal_energy_cm).exp() - 1.0);
    let coupling = params.huang_rhys.sqrt() * omega0;
    let markov_rate = 2.0 * params.coherence_decay_cm;
    let width = 4.0 * coupling * coupling / markov_rate;
    let disc = width * width - 16.0 * coupling * coupling;
    let delta_abs = 0.25 * disc.abs().sqrt();

    let quarter_rate_ps = wavenumber_to_rate(0.25 * width)?;
    let delta_rate_ps = wavenumber_to_rate(delta_abs)?;
    let markov_coh_rate_ps = wavenumber_to_rate(params.coherence_decay_cm)?;

    Ok(FmoReport {
        occupancy,
        coupling_cm: coupling,
        markov_rate_cm: markov_rate,
        pseudomode_width_cm: width,
        quarter_width_cm: 0.25 * width,
        coherence_lifetime_ps: 1.0 / quarter_rate_ps,
        oscillation_freq_cm: delta_abs,
        oscillation_period_ps: if delta_rate_ps > 0.0 {
            2.0 * std::f64::consts::PI / delta_rate_ps
        } else {
            f64::INFINITY
        },
        oscillatory: disc < 0.0,
        markov_coherence_time_fs: 1000.0 / markov_coh_rate_ps,
    })
}
