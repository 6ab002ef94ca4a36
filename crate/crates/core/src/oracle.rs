//! Brute-force reference computations: probabilities straight from the
//! evolved compound state, seeded random states, and Bloch-sphere search.
//!
//! Random draws use PCG-XSL-RR 128/64 (`Pcg64`) with state = seed and
//! stream = sample index, so sample `i` is reproducible on its own and
//! batches can be evaluated in any order. Uniforms take the top 53 bits of
//! each output (`(x >> 11) * 2^-53`); Gaussians use Box–Muller on two
//! consecutive uniforms `u1, u2` as `√(−2 ln(1 − u1)) · cos(2π u2)`.

use std::f64::consts::{PI, TAU};

use rand_core::Rng;
use rand_pcg::Pcg64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extraction::{extract_povm, scheme_for, MeasurementScheme};
use crate::interferometer::MzConfig;
use crate::povm::DiscretePovm;
use crate::qubit::{c, tol, BlochVector, DensityOperator, Operator4, StateVector2, StateVector4};

const REFINEMENT_HALVINGS: usize = 20;
const MAX_MOVES_PER_STEP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub seed: u64,
    pub samples: usize,
    pub grid_resolution: f64,
    pub tolerance: f64,
}

impl OracleConfig {
    pub fn new(seed: u64, samples: usize, grid_resolution: f64, tolerance: f64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::InvalidOracleConfig("samples must be at least 1".into()));
        }
        if !(grid_resolution > 0.0 && grid_resolution <= PI / 8.0) {
            return Err(Error::InvalidOracleConfig(format!(
                "grid resolution {grid_resolution} outside (0, π/8]"
            )));
        }
        if !tolerance.is_finite() || tolerance <= 0.0 {
            return Err(Error::InvalidOracleConfig(format!("tolerance {tolerance} must be positive")));
        }
        Ok(Self {
            seed,
            samples,
            grid_resolution,
            tolerance,
        })
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            samples: 100,
            grid_resolution: PI / 16.0,
            tolerance: 1e-10,
        }
    }
}

/// Generator for one sample index.
pub struct SampleRng(Pcg64);

impl SampleRng {
    pub fn new(seed: u64, index: u64) -> Self {
        Self(Pcg64::new(seed as u128, index as u128))
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn gaussian(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (TAU * u2).cos()
    }
}

/// Haar-random pure state: two complex Gaussians, normalized.
pub fn random_pure_state(seed: u64, index: u64) -> StateVector2 {
    let mut rng = SampleRng::new(seed, index);
    loop {
        let v = [
            c(rng.gaussian(), rng.gaussian()),
            c(rng.gaussian(), rng.gaussian()),
        ];
        if let Ok(s) = StateVector2::normalize(v) {
            return s;
        }
    }
}

/// Random photon ⊗ probe state (four complex Gaussians, normalized).
pub fn random_state4(seed: u64, index: u64) -> StateVector4 {
    let mut rng = SampleRng::new(seed, index);
    loop {
        let v = [(); 4].map(|_| c(rng.gaussian(), rng.gaussian()));
        if let Ok(s) = StateVector4::normalize(v) {
            return s;
        }
    }
}

/// Random Hermitian 4×4 matrix with Gaussian entries.
pub fn random_hermitian4(seed: u64, index: u64) -> Operator4 {
    let mut rng = SampleRng::new(seed, index);
    let mut m = Operator4::zero();
    for i in 0..4 {
        m[(i, i)] = c(rng.gaussian(), 0.0);
        for j in (i + 1)..4 {
            let z = c(rng.gaussian(), rng.gaussian());
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Even indices give pure states; odd indices give states uniform in the
/// Bloch ball (isotropic direction, radius ∛u).
pub fn random_density(seed: u64, index: u64) -> DensityOperator {
    let pure = random_pure_state(seed, index);
    if index.is_multiple_of(2) {
        return pure.density();
    }
    let mut rng = SampleRng::new(seed ^ 0x9e37_79b9_7f4a_7c15, index);
    let radius = rng.uniform().cbrt();
    let r = pure.bloch().components().map(|x| x * radius);
    crate::qubit::density_from_bloch(&BlochVector::from_array_unchecked(r))
}

/// ⟨Ψ_f|M|Ψ_f⟩ per output with Ψ_f = U(ψ ⊗ p₀).
pub fn direct_probabilities(scheme: &MeasurementScheme, psi: &StateVector2) -> Result<Vec<(String, f64)>> {
    let out = psi.tensor(scheme.probe_init()).evolve(scheme.unitary())?;
    let probs: Vec<(String, f64)> = scheme
        .outputs()
        .iter()
        .map(|(label, m)| (label.clone(), out.expectation(m).re))
        .collect();
    let total: f64 = probs.iter().map(|(_, p)| p).sum();
    let in_range = probs
        .iter()
        .all(|(_, p)| (-tol::IDENTITY..=1.0 + tol::IDENTITY).contains(p));
    if !in_range || (total - 1.0).abs() > tol::IDENTITY {
        return Err(Error::InvalidScheme(format!(
            "output probabilities do not form a distribution (sum {total})"
        )));
    }
    Ok(probs)
}

/// Max deviation between direct probabilities and ⟨ψ|E|ψ⟩ from `povm`, over
/// `oracle.samples` random pure inputs. Effects are matched by label.
pub fn cross_check_povm(scheme: &MeasurementScheme, povm: &DiscretePovm, oracle: &OracleConfig) -> Result<f64> {
    let devs = (0..oracle.samples as u64)
        .into_par_iter()
        .map(|i| {
            let psi = random_pure_state(oracle.seed, i);
            let mut worst: f64 = 0.0;
            for (label, p) in direct_probabilities(scheme, &psi)? {
                let e = povm
                    .effect(&label)
                    .ok_or_else(|| Error::UnknownLabel(label.clone()))?;
                worst = worst.max((p - psi.expectation(e).re).abs());
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(devs.into_iter().fold(0.0, f64::max))
}

/// Extract the POVM of `config`'s standard scheme and cross-check it.
pub fn cross_check(config: &MzConfig, oracle: &OracleConfig) -> Result<f64> {
    let scheme = scheme_for(config);
    let povm = extract_povm(&scheme)?;
    cross_check_povm(&scheme, &povm, oracle)
}

fn refine<F: Fn(f64, f64) -> f64>(f: F, start: (f64, f64, f64), step: f64, equatorial: bool) -> (f64, f64, f64) {
    let (mut best, mut theta, mut phi) = start;
    let mut h = step;
    for _ in 0..REFINEMENT_HALVINGS {
        for _ in 0..MAX_MOVES_PER_STEP {
            let mut moved = false;
            let candidates: &[(f64, f64)] = if equatorial {
                &[(0.0, 1.0), (0.0, -1.0)]
            } else {
                &[(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)]
            };
            for &(dt, dp) in candidates {
                let (t, p) = (theta + dt * h, phi + dp * h);
                let v = f(t, p);
                if v > best {
                    (best, theta, phi) = (v, t, p);
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
        h *= 0.5;
    }
    (best, theta, phi)
}

fn argmax_grid(values: impl Iterator<Item = (f64, f64, f64)>) -> (f64, f64, f64) {
    values.fold((f64::NEG_INFINITY, 0.0, 0.0), |acc, v| if v.0 > acc.0 { v } else { acc })
}

/// Maximize `objective` over unit Bloch vectors: latitude/longitude sweep at
/// `grid_resolution`, then pattern-search refinement halving the step 20 times.
pub fn grid_maximize<F>(objective: F, oracle: &OracleConfig) -> (f64, BlochVector)
where
    F: Fn(&BlochVector) -> f64,
{
    let f = |t: f64, p: f64| objective(&BlochVector::from_angles(t, p));
    let h = oracle.grid_resolution;
    let n_theta = (PI / h).ceil() as usize;
    let n_phi = (TAU / h).ceil() as usize;
    let start = argmax_grid((0..=n_theta).flat_map(|i| {
        let t = (i as f64 * h).min(PI);
        let f = &f;
        (0..n_phi).map(move |j| {
            let p = j as f64 * h;
            (f(t, p), t, p)
        })
    }));
    let (best, t, p) = refine(f, start, h, false);
    (best, BlochVector::from_angles(t, p))
}

/// As [`grid_maximize`] restricted to the equator n = (cos φ, sin φ, 0).
pub fn grid_maximize_equator<F>(objective: F, oracle: &OracleConfig) -> (f64, BlochVector)
where
    F: Fn(&BlochVector) -> f64,
{
    let f = |_: f64, p: f64| objective(&BlochVector::from_angles(PI / 2.0, p));
    let h = oracle.grid_resolution;
    let n_phi = (TAU / h).ceil() as usize;
    let start = argmax_grid((0..n_phi).map(|j| {
        let p = j as f64 * h;
        (f(PI / 2.0, p), PI / 2.0, p)
    }));
    let (best, _, p) = refine(f, start, h, true);
    (best, BlochVector::from_angles(PI / 2.0, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extraction::closed_form;
    use crate::interferometer::Experiment;
    use crate::povm::{unbiased_pair, Effect};
    use crate::qubit::{density_from_bloch, Operator2};
    use std::f64::consts::FRAC_PI_2;

    fn cfg(e: Experiment, d: f64) -> MzConfig {
        MzConfig::new(e, d, 0.0, 0.0).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(OracleConfig::new(1, 0, 0.1, 1e-9).is_err());
        assert!(OracleConfig::new(1, 1, 0.5, 1e-9).is_err());
        assert!(OracleConfig::new(1, 1, 0.1, 0.0).is_err());
        assert!(OracleConfig::new(1, 1, PI / 8.0, 1e-9).is_ok());
    }

    #[test]
    fn sampler_is_deterministic_and_split_by_index() {
        let a = random_pure_state(7, 3);
        assert_eq!(a, random_pure_state(7, 3));
        assert_ne!(a, random_pure_state(7, 4));
        assert_ne!(a, random_pure_state(8, 3));
        let mut rng = SampleRng::new(1, 0);
        for _ in 0..1000 {
            let u = rng.uniform();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn random_densities_are_valid() {
        for i in 0..200 {
            let rho = random_density(5, i);
            assert!(DensityOperator::new(*rho.matrix()).is_ok());
            if i % 2 == 0 {
                assert!((rho.purity() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn direct_probability_examples() {
        let path = scheme_for(&cfg(Experiment::Path, 0.0));
        let p = direct_probabilities(&path, &StateVector2::basis(0)).unwrap();
        assert!((p[0].1 - 1.0).abs() < 1e-15 && p[1].1.abs() < 1e-15);
        let inter = scheme_for(&cfg(Experiment::Interference, -FRAC_PI_2));
        let even = StateVector2::normalize([c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!((direct_probabilities(&inter, &even).unwrap()[0].1 - 1.0).abs() < 1e-15);
        let marking = scheme_for(&cfg(Experiment::Marking, 0.0));
        let p = direct_probabilities(&marking, &StateVector2::basis(0)).unwrap();
        assert_eq!(p[0].0, "11");
        assert!((p[0].1 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cross_check_detects_corruption() {
        let oracle = OracleConfig::default();
        let config = MzConfig::new(Experiment::Quantitative, 0.3, 0.0, 1.1).unwrap();
        assert!(cross_check(&config, &oracle).unwrap() <= 1e-12);
        let scheme = scheme_for(&config);
        let good = closed_form(&config).unwrap().joint;
        assert!(cross_check_povm(&scheme, &good, &oracle).unwrap() <= 1e-12);
        let mut effects = good.effects().to_vec();
        effects[0] = Effect::new("11", effects[0].operator + Operator2::identity().scale(0.01));
        let bad = DiscretePovm::new(effects);
        assert!(cross_check_povm(&scheme, &bad, &oracle).unwrap() >= 0.004);
    }

    #[test]
    fn cross_check_is_reproducible() {
        let oracle = OracleConfig::new(9, 37, 0.1, 1e-10).unwrap();
        let config = MzConfig::new(Experiment::Erasure, 0.4, 1.0, 0.0).unwrap();
        let a = cross_check(&config, &oracle).unwrap();
        let b = cross_check(&config, &oracle).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn maximize_contrast_objective() {
        let p = unbiased_pair([0.6, 0.0, 0.0]);
        let objective = |n: &BlochVector| {
            let probs = p.probabilities(&density_from_bloch(n));
            probs[0] - probs[1]
        };
        let (v, arg) = grid_maximize(objective, &OracleConfig::default());
        assert!((v - 0.6).abs() < 1e-6);
        assert!((arg.components()[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn maximize_equatorial_visibility() {
        let phi = 0.9;
        let off = c(0.3, 0.0) * crate::qubit::C64::from_polar(1.0, phi);
        let m = Operator2::from_rows([[c(0.5, 0.0), off], [off.conj(), c(0.5, 0.0)]]).unwrap();
        let rho = DensityOperator::new(m).unwrap();
        let objective = |n: &BlochVector| rho.expectation_complex(&n.sigma()).re.abs();
        let (v, arg) = grid_maximize_equator(objective, &OracleConfig::default());
        assert!((v - 0.6).abs() < 1e-6);
        assert!(arg.components()[2].abs() < 1e-12);
    }

    #[test]
    fn maximize_constant() {
        let (v, arg) = grid_maximize(|_| 0.25, &OracleConfig::default());
        assert_eq!(v, 0.25);
        assert!((arg.length() - 1.0).abs() < 1e-12);
    }
}
