//! Mach-Zehnder optics, the path-marking coupling, and the evolved
//! photon ⊗ probe states of the five experiments.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubit::{c, tensor, tol, Operator2, Operator4, StateVector2, StateVector4, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    /// No marking; δ = 0 measures the path observable.
    Path,
    /// No marking; δ = −π/2 measures σx.
    Interference,
    /// Orthogonal markers read out in the marker basis.
    Marking,
    /// Orthogonal markers read out in the (p₁ ± e^{iγ}p₂)/√2 basis.
    Erasure,
    /// Markers tilted by θ, read out in the σz basis of the probe.
    Quantitative,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::Path,
        Experiment::Interference,
        Experiment::Marking,
        Experiment::Erasure,
        Experiment::Quantitative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Path => "path",
            Experiment::Interference => "interference",
            Experiment::Marking => "marking",
            Experiment::Erasure => "erasure",
            Experiment::Quantitative => "quantitative",
        }
    }

    /// Phase setting used when none is given.
    pub fn default_delta(self) -> f64 {
        match self {
            Experiment::Path | Experiment::Marking => 0.0,
            Experiment::Interference | Experiment::Erasure | Experiment::Quantitative => -FRAC_PI_2,
        }
    }

    /// Whether the probe carries path information (four-outcome readout).
    pub fn has_marking(self) -> bool {
        !matches!(self, Experiment::Path | Experiment::Interference)
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown experiment `{s}`"))
    }
}

/// Experiment kind plus its angles (radians). Angles irrelevant to the
/// experiment are stored but ignored.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MzConfig {
    pub experiment: Experiment,
    pub delta: f64,
    pub gamma: f64,
    pub theta: f64,
}

impl MzConfig {
    pub fn new(experiment: Experiment, delta: f64, gamma: f64, theta: f64) -> Result<Self> {
        if ![delta, gamma, theta].iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("interferometer angles"));
        }
        Ok(Self {
            experiment,
            delta,
            gamma,
            theta,
        })
    }

    /// Neutral state and markers used by this experiment.
    pub fn probes(&self) -> ProbeTriple {
        let q1 = StateVector2::basis(0);
        let q2 = StateVector2::basis(1);
        match self.experiment {
            Experiment::Path | Experiment::Interference => ProbeTriple::new(q1, q1, q1),
            Experiment::Marking | Experiment::Erasure => ProbeTriple::new(q1, q1, q2),
            Experiment::Quantitative => {
                let (p1, p2) = marker_states(self.theta);
                ProbeTriple::new(q1, p1, p2)
            }
        }
    }

    /// Probe readout basis, or `None` when the probe is not read out.
    pub fn pointers(&self) -> Option<[StateVector2; 2]> {
        let probes = self.probes();
        match self.experiment {
            Experiment::Path | Experiment::Interference => None,
            Experiment::Marking => Some([probes.p1, probes.p2]),
            Experiment::Erasure => Some(erasure_pointers(&probes.p1, &probes.p2, self.gamma)),
            Experiment::Quantitative => Some([StateVector2::basis(0), StateVector2::basis(1)]),
        }
    }
}

/// Neutral probe state p₀ and the markers p₁, p₂ it is mapped to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeTriple {
    pub p0: StateVector2,
    pub p1: StateVector2,
    pub p2: StateVector2,
}

impl ProbeTriple {
    pub fn new(p0: StateVector2, p1: StateVector2, p2: StateVector2) -> Self {
        Self { p0, p1, p2 }
    }
}

/// Composite beam splitter / phase shifter / beam splitter evolution.
/// Columns are the images of |1⟩ and |2⟩:
/// |1⟩ → ½[(−e^{iδ}−1)|1⟩ + i(e^{iδ}−1)|2⟩],
/// |2⟩ → ½[i(−e^{iδ}+1)|1⟩ − (1+e^{iδ})|2⟩].
pub fn mz_evolution(delta: f64) -> Operator2 {
    let e = C64::from_polar(1.0, delta);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    Operator2::from_rows_unchecked([
        [(-e - one) * 0.5, i * (one - e) * 0.5],
        [i * (e - one) * 0.5, -(one + e) * 0.5],
    ])
}

/// p₁ = cos(θ/2)|q₁⟩ + sin(θ/2)|q₂⟩, p₂ = sin(θ/2)|q₁⟩ + cos(θ/2)|q₂⟩.
pub fn marker_states(theta: f64) -> (StateVector2, StateVector2) {
    let (ch, sh) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    (
        StateVector2::from_unit_unchecked([c(ch, 0.0), c(sh, 0.0)]),
        StateVector2::from_unit_unchecked([c(sh, 0.0), c(ch, 0.0)]),
    )
}

/// q₁,₂ = (p₁ ± e^{iγ}p₂)/√2
pub fn erasure_pointers(p1: &StateVector2, p2: &StateVector2, gamma: f64) -> [StateVector2; 2] {
    let e = C64::from_polar(1.0, gamma);
    let combine = |sign: f64| {
        let a = p1.components();
        let b = p2.components();
        StateVector2::normalize([
            (a[0] + e * b[0] * sign) * FRAC_1_SQRT_2,
            (a[1] + e * b[1] * sign) * FRAC_1_SQRT_2,
        ])
    };
    match (combine(1.0), combine(-1.0)) {
        (Ok(q1), Ok(q2)) => [q1, q2],
        // p₁ ∥ p₂: the pair degenerates; fall back to p₁ and its complement.
        _ => [*p1, p1.perp()],
    }
}

/// How the marking coupling is extended off the subspace spanned by |k⟩⊗|p₀⟩.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Completion {
    /// V_k = |p_k⟩⟨p₀| + |p_k^⊥⟩⟨p₀^⊥|
    Standard,
    /// As `Standard` with the complement branch multiplied by e^{iφ}.
    Phased(f64),
}

/// |1⟩⟨1| ⊗ V₁ + |2⟩⟨2| ⊗ V₂ with V_k|p₀⟩ = |p_k⟩.
pub fn marking_unitary(probes: &ProbeTriple) -> Operator4 {
    marking_unitary_with(probes, Completion::Standard)
}

pub fn marking_unitary_with(probes: &ProbeTriple, completion: Completion) -> Operator4 {
    let phase = match completion {
        Completion::Standard => c(1.0, 0.0),
        Completion::Phased(phi) => C64::from_polar(1.0, phi),
    };
    let p0 = probes.p0;
    let branch = |pk: &StateVector2| {
        Operator2::outer(pk.components(), p0.components())
            + Operator2::outer(pk.perp().components(), p0.perp().components()).scale_complex(phase)
    };
    let path1 = Operator2::diagonal([1.0, 0.0]);
    let path2 = Operator2::diagonal([0.0, 1.0]);
    tensor(&path1, &branch(&probes.p1)) + tensor(&path2, &branch(&probes.p2))
}

/// U_MZ(δ) ⊗ I
pub fn interferometer_unitary(delta: f64) -> Operator4 {
    tensor(&mz_evolution(delta), &Operator2::identity())
}

/// (U_MZ(δ) ⊗ I) · U_mark · (ψ ⊗ p₀)
pub fn final_state(psi: &StateVector2, probes: &ProbeTriple, config: &MzConfig) -> Result<StateVector4> {
    let u = interferometer_unitary(config.delta) * marking_unitary(probes);
    psi.tensor(&probes.p0).evolve(&u)
}

/// |k⟩⟨k| ⊗ |r⟩⟨r| for detector k ∈ {1, 2}.
pub fn output_projection(k: usize, pointer: [C64; 2]) -> Result<Operator4> {
    if !(1..=2).contains(&k) {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: k,
        });
    }
    let n2: f64 = pointer.iter().map(|z| z.norm_sqr()).sum();
    if (n2 - 1.0).abs() > tol::STRUCTURAL {
        return Err(Error::NotNormalized { norm_sq: n2 });
    }
    let path = StateVector2::basis(k - 1).projector();
    Ok(tensor(&path, &Operator2::outer(&pointer, &pointer)))
}

/// |k⟩⟨k| ⊗ I
pub fn detector_projection(k: usize) -> Result<Operator4> {
    if !(1..=2).contains(&k) {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: k,
        });
    }
    Ok(tensor(
        &StateVector2::basis(k - 1).projector(),
        &Operator2::identity(),
    ))
}
