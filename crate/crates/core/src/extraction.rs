//! From a probe-coupled measurement scheme to the POVM it realizes on the
//! photon, plus analytic effects for the three marking experiments.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interferometer::{
    detector_projection, final_state, interferometer_unitary, marking_unitary, output_projection,
    Experiment, MzConfig,
};
use crate::povm::{
    marginal, DiscretePovm, Effect, BY_COINCIDENCE, BY_FIRST_INDEX, BY_SECOND_INDEX, JOINT_LABELS,
};
use crate::qubit::{tol, Operator2, Operator4, StateVector2};

/// Angles of the audit grid: 0, ±π/6, ±π/4, ±π/2, π.
pub const GRID_ANGLES: [f64; 8] = [
    0.0,
    std::f64::consts::FRAC_PI_6,
    -std::f64::consts::FRAC_PI_6,
    std::f64::consts::FRAC_PI_4,
    -std::f64::consts::FRAC_PI_4,
    std::f64::consts::FRAC_PI_2,
    -std::f64::consts::FRAC_PI_2,
    std::f64::consts::PI,
];

/// Every (δ, γ, θ) ∈ GRID_ANGLES³ for each listed experiment.
pub fn standard_grid(experiments: &[Experiment]) -> Vec<MzConfig> {
    let mut out = Vec::with_capacity(experiments.len() * 512);
    for &e in experiments {
        for &d in &GRID_ANGLES {
            for &g in &GRID_ANGLES {
                for &t in &GRID_ANGLES {
                    out.push(MzConfig { experiment: e, delta: d, gamma: g, theta: t });
                }
            }
        }
    }
    out
}

/// Unitary coupling, initial probe state and a projective readout of the
/// compound system.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementScheme {
    unitary: Operator4,
    probe_init: StateVector2,
    outputs: Vec<(String, Operator4)>,
}

impl MeasurementScheme {
    pub fn new(
        unitary: Operator4,
        probe_init: StateVector2,
        outputs: Vec<(String, Operator4)>,
    ) -> Result<Self> {
        let defect = unitary.unitarity_defect();
        if defect > tol::IDENTITY {
            return Err(Error::InvalidScheme(format!("coupling unitarity defect {defect:.3e}")));
        }
        if outputs.is_empty() {
            return Err(Error::InvalidScheme("no output projections".into()));
        }
        for (label, m) in &outputs {
            if !m.is_projection(tol::STRUCTURAL) {
                return Err(Error::InvalidScheme(format!("output {label} is not a projection")));
            }
        }
        let total: Operator4 = outputs.iter().map(|(_, m)| *m).sum();
        let gap = total.max_abs_diff(&Operator4::identity());
        if gap > tol::STRUCTURAL {
            return Err(Error::InvalidScheme(format!("outputs sum to I off by {gap:.3e}")));
        }
        Ok(Self {
            unitary,
            probe_init,
            outputs,
        })
    }

    pub fn unitary(&self) -> &Operator4 {
        &self.unitary
    }

    pub fn probe_init(&self) -> &StateVector2 {
        &self.probe_init
    }

    pub fn outputs(&self) -> &[(String, Operator4)] {
        &self.outputs
    }

    /// ⟨Ψ_f|M|Ψ_f⟩ per output for input ψ, computed on the compound system.
    pub fn output_probabilities(&self, psi: &StateVector2) -> Result<Vec<f64>> {
        let out = psi.tensor(&self.probe_init).evolve(&self.unitary)?;
        Ok(self
            .outputs
            .iter()
            .map(|(_, m)| out.expectation(m).re)
            .collect())
    }
}

/// Standard scheme of an experiment: marking coupling then the
/// interferometer, read out by detector and (when marked) probe pointer.
pub fn scheme_for(config: &MzConfig) -> MeasurementScheme {
    match config.pointers() {
        Some(pointers) => scheme_with_pointers(config, pointers)
            .expect("standard pointers are orthonormal"),
        None => {
            let probes = config.probes();
            let u = interferometer_unitary(config.delta) * marking_unitary(&probes);
            let outputs = (1..=2)
                .map(|k| (k.to_string(), detector_projection(k).expect("k in 1..=2")))
                .collect();
            MeasurementScheme::new(u, probes.p0, outputs).expect("standard scheme is valid")
        }
    }
}

/// The experiment's coupling read out in an arbitrary orthonormal probe basis.
/// Outputs are labeled `kℓ` for detector k and pointer ℓ.
pub fn scheme_with_pointers(
    config: &MzConfig,
    pointers: [StateVector2; 2],
) -> Result<MeasurementScheme> {
    let probes = config.probes();
    let u = interferometer_unitary(config.delta) * marking_unitary(&probes);
    let mut outputs = Vec::with_capacity(4);
    for label in JOINT_LABELS {
        let k = (label.as_bytes()[0] - b'0') as usize;
        let l = (label.as_bytes()[1] - b'0') as usize;
        outputs.push((label.to_string(), output_projection(k, *pointers[l - 1].components())?));
    }
    MeasurementScheme::new(u, probes.p0, outputs)
}

/// E^{ij} = ⟨i, p₀| U† M U |j, p₀⟩ for each output M.
pub fn extract_povm(scheme: &MeasurementScheme) -> Result<DiscretePovm> {
    let images: Vec<_> = (0..2)
        .map(|j| {
            StateVector2::basis(j)
                .tensor(&scheme.probe_init)
                .evolve(&scheme.unitary)
        })
        .collect::<Result<_>>()?;
    let effects = scheme
        .outputs
        .iter()
        .map(|(label, m)| {
            let mut e = Operator2::zero();
            for i in 0..2 {
                for j in 0..2 {
                    e[(i, j)] = m.sandwich(images[i].components(), images[j].components());
                }
            }
            Effect::new(label.clone(), e)
        })
        .collect::<Vec<_>>();
    let povm = DiscretePovm::new(effects);
    povm.validate()
        .map_err(|v| Error::InvalidScheme(format!("extracted effects are not a POVM: {v}")))?;
    Ok(povm)
}

/// Analytic joint POVM with its detector (F), probe (G) and coincidence (H)
/// marginals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClosedForm {
    pub joint: DiscretePovm,
    pub detector: DiscretePovm,
    pub probe: DiscretePovm,
    pub coincidence: DiscretePovm,
}

impl ClosedForm {
    /// Largest deviation between the stated marginals and those obtained by
    /// summing the joint effects.
    pub fn marginal_consistency(&self) -> Result<f64> {
        let f = marginal(&self.joint, BY_FIRST_INDEX)?;
        let g = marginal(&self.joint, BY_SECOND_INDEX)?;
        let h = marginal(&self.joint, BY_COINCIDENCE)?;
        Ok(f.max_abs_diff(&self.detector)
            .max(g.max_abs_diff(&self.probe))
            .max(h.max_abs_diff(&self.coincidence)))
    }
}

fn pair(a1: f64, u1: [f64; 3], a2: f64, u2: [f64; 3]) -> DiscretePovm {
    DiscretePovm::from_operators([
        ("1", Operator2::from_bloch_form(a1, u1)),
        ("2", Operator2::from_bloch_form(a2, u2)),
    ])
}

fn joint(ops: [Operator2; 4]) -> DiscretePovm {
    DiscretePovm::from_operators(JOINT_LABELS.into_iter().zip(ops))
}

/// ¼(aI + u·σ)
fn quarter(a: f64, u: [f64; 3]) -> Operator2 {
    Operator2::from_bloch_form(0.5 * a, u.map(|x| 0.5 * x))
}

pub fn closed_form(config: &MzConfig) -> Result<ClosedForm> {
    let (sd, cd) = config.delta.sin_cos();
    match config.experiment {
        Experiment::Path | Experiment::Interference => Err(Error::UnsupportedExperiment(format!(
            "{} has no probe readout",
            config.experiment
        ))),
        Experiment::Marking => {
            let (p, m) = (1.0 + cd, 1.0 - cd);
            Ok(ClosedForm {
                joint: joint([
                    quarter(p, [0.0, 0.0, p]),
                    quarter(m, [0.0, 0.0, m]),
                    quarter(m, [0.0, 0.0, -m]),
                    quarter(p, [0.0, 0.0, -p]),
                ]),
                detector: pair(1.0, [0.0, 0.0, cd], 1.0, [0.0, 0.0, -cd]),
                probe: pair(1.0, [0.0, 0.0, 1.0], 1.0, [0.0, 0.0, -1.0]),
                coincidence: pair(p, [0.0; 3], m, [0.0; 3]),
            })
        }
        Experiment::Erasure => {
            let (sg, cg) = config.gamma.sin_cos();
            let n = [sd * cg, sd * sg, -cd];
            let m = [sd * cg, sd * sg, cd];
            let neg = |v: [f64; 3]| v.map(|x| -x);
            let transverse = [sd * cg, sd * sg, 0.0];
            Ok(ClosedForm {
                joint: joint([
                    quarter(1.0, neg(n)),
                    quarter(1.0, n),
                    quarter(1.0, m),
                    quarter(1.0, neg(m)),
                ]),
                detector: pair(1.0, [0.0, 0.0, cd], 1.0, [0.0, 0.0, -cd]),
                probe: pair(1.0, [0.0; 3], 1.0, [0.0; 3]),
                coincidence: pair(1.0, neg(transverse), 1.0, transverse),
            })
        }
        Experiment::Quantitative => {
            let (st, ct) = config.theta.sin_cos();
            let x = sd * st;
            Ok(ClosedForm {
                joint: joint([
                    quarter(1.0 + ct * cd, [-x, 0.0, cd + ct]),
                    quarter(1.0 - ct * cd, [x, 0.0, -(cd - ct)]),
                    quarter(1.0 - ct * cd, [-x, 0.0, cd - ct]),
                    quarter(1.0 + ct * cd, [x, 0.0, -(cd + ct)]),
                ]),
                detector: pair(1.0, [-x, 0.0, cd], 1.0, [x, 0.0, -cd]),
                probe: pair(1.0, [0.0, 0.0, ct], 1.0, [0.0, 0.0, -ct]),
                coincidence: pair(1.0 + ct * cd, [0.0; 3], 1.0 - ct * cd, [0.0; 3]),
            })
        }
    }
}

/// prob(D_k | ℓ) = ⟨ψ|E_{kℓ}|ψ⟩ / ⟨ψ|G_ℓ|ψ⟩ for k = 1, 2, where G_ℓ = E_{1ℓ} + E_{2ℓ}.
pub fn conditional_probabilities(
    joint: &DiscretePovm,
    probe_outcome: &str,
    psi: &StateVector2,
) -> Result<[f64; 2]> {
    let lookup = |k: &str| {
        let label = format!("{k}{probe_outcome}");
        joint
            .effect(&label)
            .copied()
            .ok_or(Error::UnknownLabel(label))
    };
    let e1 = lookup("1")?;
    let e2 = lookup("2")?;
    let p1 = psi.expectation(&e1).re;
    let p2 = psi.expectation(&e2).re;
    let denom = p1 + p2;
    if denom <= tol::ZERO_NORM {
        return Err(Error::ZeroProbabilityCondition {
            probability: denom,
        });
    }
    Ok([p1 / denom, p2 / denom])
}

/// ⟨Ψ_f|M|Ψ_f⟩ for the standard scheme, listed with the output labels.
pub fn detection_probabilities(config: &MzConfig, psi: &StateVector2) -> Result<Vec<(String, f64)>> {
    let scheme = scheme_for(config);
    let out = final_state(psi, &config.probes(), config)?;
    Ok(scheme
        .outputs()
        .iter()
        .map(|(label, m)| (label.clone(), out.expectation(m).re))
        .collect())
}
