//! Uncertainty, duality and erasure relations on qubit states.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::povm::{pauli_pvm, DiscretePovm};
use crate::qubit::{
    pauli, partial_trace_probe, tol, BlochVector, DensityOperator, Operator2, Pauli,
    StateVector2, StateVector4, C64,
};

/// Slack allowed when auditing a relation.
pub const RELATION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    Geq,
    Leq,
    Eq,
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationKind::Geq => ">=",
            RelationKind::Leq => "<=",
            RelationKind::Eq => "==",
        })
    }
}

/// One audited relation. For inequalities `slack` is the signed margin
/// (negative means violated); for equalities it is |lhs − rhs|.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub kind: RelationKind,
    pub satisfied: bool,
    pub slack: f64,
}

impl RelationReport {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64, kind: RelationKind) -> Self {
        let (slack, satisfied) = match kind {
            RelationKind::Geq => (lhs - rhs, lhs - rhs >= -RELATION_TOL),
            RelationKind::Leq => (rhs - lhs, rhs - lhs >= -RELATION_TOL),
            RelationKind::Eq => ((lhs - rhs).abs(), (lhs - rhs).abs() <= RELATION_TOL),
        };
        Self {
            name: name.into(),
            lhs,
            rhs,
            kind,
            satisfied,
            slack,
        }
    }
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {:.12} {} {:.12} ({})",
            self.name,
            self.lhs,
            self.kind,
            self.rhs,
            if self.satisfied { "ok" } else { "VIOLATED" }
        )
    }
}

/// Robertson–Schrödinger relation for σx, σz with its two equivalent forms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VarianceUncertainty {
    /// Var(σx)Var(σz) ≥ ¼|⟨[σx,σz]⟩|² + ¼(⟨{σx,σz}⟩ − 2⟨σx⟩⟨σz⟩)²
    pub relation: RelationReport,
    /// ⟨σy⟩² + ⟨σx⟩²⟨σz⟩², equal to `relation.rhs`.
    pub identity_rhs: f64,
    /// r₁² + r₂² + r₃² ≤ 1
    pub positivity: RelationReport,
}

fn mean(rho: &DensityOperator, a: &Operator2) -> f64 {
    rho.expectation_complex(a).re
}

fn pauli_variance(rho: &DensityOperator, axis: Pauli) -> f64 {
    let m = axis.expectation(rho);
    1.0 - m * m
}

pub fn variance_ur(rho: &DensityOperator) -> VarianceUncertainty {
    let (x, z) = (pauli(Pauli::X), pauli(Pauli::Z));
    let lhs = pauli_variance(rho, Pauli::X) * pauli_variance(rho, Pauli::Z);
    let comm = rho.expectation_complex(&x.commutator(&z));
    let anti = mean(rho, &(x * z + z * x));
    let (mx, my, mz) = (mean(rho, &x), mean(rho, &pauli(Pauli::Y)), mean(rho, &z));
    let rhs = 0.25 * comm.norm_sqr() + 0.25 * (anti - 2.0 * mx * mz).powi(2);
    let r2 = rho.bloch().length().powi(2);
    VarianceUncertainty {
        relation: RelationReport::new("Var(sx)Var(sz) >= covariance bound", lhs, rhs, RelationKind::Geq),
        identity_rhs: my * my + mx * mx * mz * mz,
        positivity: RelationReport::new("|r|^2 <= 1", r2, 1.0, RelationKind::Leq),
    }
}

/// Shannon entropy in bits of the outcome distribution, 0·log 0 = 0.
pub fn shannon_entropy(p: &DiscretePovm, rho: &DensityOperator) -> f64 {
    entropy_bits(&p.probabilities(rho))
}

pub fn entropy_bits(probs: &[f64]) -> f64 {
    probs
        .iter()
        .map(|&q| q.clamp(0.0, 1.0))
        .filter(|&q| q > 0.0)
        .map(|q| -q * q.log2())
        .sum()
}

/// H(A,ψ) + H(B,ψ) ≥ −2 log₂ max |⟨ψ|P_iQ_k|ψ⟩| / (‖P_iψ‖‖Q_kψ‖).
pub fn entropic_bound(a: &DiscretePovm, b: &DiscretePovm, psi: &StateVector2) -> Result<RelationReport> {
    for p in [a, b] {
        if !p.validate()?.sharp {
            return Err(Error::NotSharp);
        }
    }
    let v = psi.components();
    let norm = |e: &Operator2| {
        let w = e.apply(v);
        (w[0].norm_sqr() + w[1].norm_sqr()).sqrt()
    };
    let mut best: f64 = 0.0;
    for pe in a.effects() {
        let np = norm(&pe.operator);
        if np < tol::ZERO_NORM {
            continue;
        }
        for qe in b.effects() {
            let nq = norm(&qe.operator);
            if nq < tol::ZERO_NORM {
                continue;
            }
            let overlap = psi.expectation(&(pe.operator * qe.operator)).norm();
            best = best.max(overlap / (np * nq));
        }
    }
    // Adding 0.0 turns the −0.0 of log₂ 1 into +0.0.
    let rhs = -2.0 * best.min(1.0).log2() + 0.0;
    let rho = psi.density();
    let lhs = shannon_entropy(a, &rho) + shannon_entropy(b, &rho);
    Ok(RelationReport::new("H(A)+H(B) >= entropic bound", lhs, rhs, RelationKind::Geq))
}

/// Entropic, variance and contrast forms of the three-observable relation.
pub fn triple_relations(rho: &DensityOperator) -> Vec<RelationReport> {
    let h: f64 = Pauli::ALL.iter().map(|&a| shannon_entropy(&pauli_pvm(a), rho)).sum();
    let var: f64 = Pauli::ALL.iter().map(|&a| pauli_variance(rho, a)).sum();
    let c2: f64 = Pauli::ALL.iter().map(|&a| a.expectation(rho).powi(2)).sum();
    vec![
        RelationReport::new("H(sx)+H(sy)+H(sz) >= 2", h, 2.0, RelationKind::Geq),
        RelationReport::new("Var(sx)+Var(sy)+Var(sz) >= 2", var, 2.0, RelationKind::Geq),
        RelationReport::new("C_P^2+C_Ix^2+C_Iy^2 <= 1", c2, 1.0, RelationKind::Leq),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Contrasts {
    /// |⟨σz⟩|
    pub path: f64,
    /// |⟨σx⟩|
    pub interference_x: f64,
    /// |⟨σy⟩|
    pub interference_y: f64,
    /// √(⟨σx⟩² + ⟨σy⟩²), twice the off-diagonal modulus.
    pub visibility: f64,
}

pub fn contrasts(rho: &DensityOperator) -> Contrasts {
    let [x, y, z] = rho.bloch().components();
    Contrasts {
        path: z.abs(),
        interference_x: x.abs(),
        interference_y: y.abs(),
        visibility: x.hypot(y),
    }
}

/// Optimal path inference from the probe.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Distinguishability {
    /// Pointer direction attaining `l`; `None` when |α|²p₁ − |β|²p₂ vanishes.
    pub r0: Option<BlochVector>,
    /// Maximal probability of a correct path inference.
    pub l: f64,
    pub d: f64,
}

fn weighted_difference(psi: &StateVector2, p1: &[f64; 3], p2: &[f64; 3]) -> [f64; 3] {
    let (a2, b2) = (psi.alpha().norm_sqr(), psi.beta().norm_sqr());
    [0, 1, 2].map(|i| a2 * p1[i] - b2 * p2[i])
}

fn from_difference(v: [f64; 3]) -> Distinguishability {
    let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let r0 = (len >= tol::ZERO_NORM).then(|| BlochVector::from_array_unchecked(v.map(|x| x / len)));
    let d = if r0.is_some() { len.min(1.0) } else { 0.0 };
    Distinguishability {
        r0,
        l: 0.5 * (1.0 + d),
        d,
    }
}

/// L = ½(1 + ||α|²p₁ − |β|²p₂|) with p₁, p₂ the markers' Bloch vectors; D = 2L − 1.
pub fn distinguishability(psi: &StateVector2, p1: &StateVector2, p2: &StateVector2) -> Distinguishability {
    from_difference(weighted_difference(
        psi,
        &p1.bloch().components(),
        &p2.bloch().components(),
    ))
}

/// √(1 − 4|α|²|β|²|⟨p₁|p₂⟩|²)
pub fn distinguishability_closed_form(psi: &StateVector2, p1: &StateVector2, p2: &StateVector2) -> f64 {
    let (a2, b2) = (psi.alpha().norm_sqr(), psi.beta().norm_sqr());
    (1.0 - 4.0 * a2 * b2 * p1.inner(p2).norm_sqr()).max(0.0).sqrt()
}

/// H⁰₁ = ½[(1 + ½r·(p₁−p₂))I + ½r·(p₁+p₂)σz], H⁰₂ = I − H⁰₁.
pub fn coincidence_povm(p1: &StateVector2, p2: &StateVector2, r: &BlochVector) -> Result<DiscretePovm> {
    let len = r.length();
    if (len - 1.0).abs() > tol::STRUCTURAL {
        return Err(Error::NotNormalized { norm_sq: len * len });
    }
    let (b1, b2) = (p1.bloch(), p2.bloch());
    let diff = r.dot(&b1.components()) - r.dot(&b2.components());
    let sum = r.dot(&b1.components()) + r.dot(&b2.components());
    let h1 = Operator2::from_bloch_form(1.0 + 0.5 * diff, [0.0, 0.0, 0.5 * sum]);
    Ok(DiscretePovm::from_operators([
        ("1", h1),
        ("2", Operator2::identity() - h1),
    ]))
}

/// Variance of the ±1-valued outcome of a two-outcome POVM: 1 − (p₁ − p₂)².
pub fn two_outcome_variance(p: &DiscretePovm, rho: &DensityOperator) -> Result<f64> {
    if p.len() != 2 {
        return Err(Error::NotTwoOutcome { outcomes: p.len() });
    }
    let probs = p.probabilities(rho);
    Ok(1.0 - (probs[0] - probs[1]).powi(2))
}

/// Photon state after marking: tr_probe of α|1⟩p₁ + β|2⟩p₂.
pub fn reduced_marked_state(psi: &StateVector2, p1: &StateVector2, p2: &StateVector2) -> DensityOperator {
    let (a, b) = (psi.alpha(), psi.beta());
    let (u, v) = (p1.components(), p2.components());
    let marked = StateVector4::normalize([a * u[0], a * u[1], b * v[0], b * v[1]])
        .expect("norm is |α|² + |β|² = 1");
    partial_trace_probe(&marked)
}

/// max over equatorial n of |tr(ρσ_n)| = 2|ρ₁₂|, with the maximizing n.
pub fn visibility_reduced(rho: &DensityOperator) -> (f64, BlochVector) {
    let off = rho.matrix()[(0, 1)];
    let v = 2.0 * off.norm();
    // tr(ρσ_n) = 2 Re(ρ₁₂ e^{iφ}) for n = (cos φ, sin φ, 0).
    let phi = if off.norm() > 0.0 { -off.arg() } else { 0.0 };
    (v.min(1.0), BlochVector::from_array_unchecked([phi.cos(), phi.sin(), 0.0]))
}

/// max over the whole sphere of |tr(ρ n·σ)| = |r|, with the maximizing n.
pub fn visibility_full(rho: &DensityOperator) -> (f64, BlochVector) {
    let r = rho.bloch();
    let len = r.length();
    let n = if len > 0.0 {
        r.components().map(|x| x / len)
    } else {
        [0.0, 0.0, 1.0]
    };
    (len.min(1.0), BlochVector::from_array_unchecked(n))
}

fn sigma_variance(rho: &DensityOperator, n: &BlochVector) -> f64 {
    let m = mean(rho, &n.sigma());
    1.0 - m * m
}

/// D² + V_e² = 1 and Var(H⁰,ψ)|_{r⁰} + Var(σ_n,ρ_e)|_opt = 1.
pub fn erasure_duality(psi: &StateVector2, p1: &StateVector2, p2: &StateVector2) -> Result<[RelationReport; 2]> {
    let dist = distinguishability(psi, p1, p2);
    let rho_e = reduced_marked_state(psi, p1, p2);
    let (ve, n) = visibility_reduced(&rho_e);
    let first = RelationReport::new("D^2+V_e^2 = 1", dist.d.powi(2) + ve.powi(2), 1.0, RelationKind::Eq);
    // With r⁰ undefined every pointer direction gives Var(H⁰) = 1.
    let var_h = match dist.r0 {
        Some(r0) => two_outcome_variance(&coincidence_povm(p1, p2, &r0)?, &psi.density())?,
        None => 1.0,
    };
    let second = RelationReport::new(
        "Var(H0)+Var(s_n) = 1",
        var_h + sigma_variance(&rho_e, &n),
        1.0,
        RelationKind::Eq,
    );
    Ok([first, second])
}

/// Var(H⁰(r), ψ) + Var(σ_n, ρ_e) for arbitrary pointer direction r and
/// interference direction n. Equals 1 at the optima; elsewhere it is only reported.
pub fn disturbance_sum(
    psi: &StateVector2,
    p1: &StateVector2,
    p2: &StateVector2,
    r: &BlochVector,
    n: &BlochVector,
) -> Result<f64> {
    let h = coincidence_povm(p1, p2, r)?;
    let rho_e = reduced_marked_state(psi, p1, p2);
    Ok(two_outcome_variance(&h, &psi.density())? + sigma_variance(&rho_e, n))
}

/// One component of a classical mixture of marker pairs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MarkerMixture {
    pub weight: f64,
    pub p1: StateVector2,
    pub p2: StateVector2,
}

/// D² + V_e² ≤ 1 when the markers are drawn from a classical mixture.
/// D uses the mixture-averaged marker Bloch vectors; V_e the averaged ρ_e.
pub fn mixed_duality(psi: &StateVector2, mixture: &[MarkerMixture]) -> Result<RelationReport> {
    let total: f64 = mixture.iter().map(|m| m.weight).sum();
    if mixture.is_empty() || mixture.iter().any(|m| m.weight < 0.0) || (total - 1.0).abs() > tol::STRUCTURAL {
        return Err(Error::InvalidState(format!(
            "mixture weights must be non-negative and sum to 1 (sum {total})"
        )));
    }
    let mut diff = [0.0; 3];
    let mut off = C64::new(0.0, 0.0);
    for m in mixture {
        let v = weighted_difference(psi, &m.p1.bloch().components(), &m.p2.bloch().components());
        for (acc, x) in diff.iter_mut().zip(v) {
            *acc += m.weight * x;
        }
        off += reduced_marked_state(psi, &m.p1, &m.p2).matrix()[(0, 1)] * m.weight;
    }
    let d = from_difference(diff).d;
    let ve = 2.0 * off.norm();
    Ok(RelationReport::new("D^2+V_e^2 <= 1", d * d + ve * ve, 1.0, RelationKind::Leq))
}
