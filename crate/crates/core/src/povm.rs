//! Discrete POVMs on the photon qubit.
//!
//! Four-outcome joint observables carry two-character labels `kℓ` where `k`
//! is the detector (or first) index and `ℓ` the probe (or second) index.
//! Effects are stored in the display order 11, 21, 12, 22, so grouping by the
//! first index yields the detector marginal F and grouping by the second
//! yields the probe marginal G.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::qubit::{eig_hermitian, pauli, tol, DensityOperator, Operator2, Pauli, StateVector2};

/// Labeled positive operator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Effect {
    pub label: String,
    pub operator: Operator2,
}

impl Effect {
    pub fn new(label: impl Into<String>, operator: Operator2) -> Self {
        Self {
            label: label.into(),
            operator,
        }
    }
}

/// Ordered family of effects. Construction does not validate; see [`DiscretePovm::validate`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DiscretePovm {
    effects: Vec<Effect>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PovmKind {
    Sharp,
    Unsharp,
    Trivial,
}

impl fmt::Display for PovmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PovmKind::Sharp => "sharp",
            PovmKind::Unsharp => "unsharp",
            PovmKind::Trivial => "trivial",
        })
    }
}

/// Outcome of a successful validation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    /// Every effect is a projection.
    pub sharp: bool,
    /// Every effect is a multiple of the identity.
    pub trivial: bool,
}

impl Classification {
    /// Triviality wins over sharpness: {I, O} reports as trivial.
    pub fn kind(&self) -> PovmKind {
        if self.trivial {
            PovmKind::Trivial
        } else if self.sharp {
            PovmKind::Sharp
        } else {
            PovmKind::Unsharp
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Empty,
    NotHermitian { label: String, defect: f64 },
    NegativeEigenvalue { label: String, eigenvalue: f64 },
    ExceedsIdentity { label: String, eigenvalue: f64 },
    SumNotIdentity { defect: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "no effects"),
            Violation::NotHermitian { label, defect } => {
                write!(f, "effect {label} not Hermitian (defect {defect:e})")
            }
            Violation::NegativeEigenvalue { label, eigenvalue } => {
                write!(f, "effect {label} has eigenvalue {eigenvalue} < 0")
            }
            Violation::ExceedsIdentity { label, eigenvalue } => {
                write!(f, "effect {label} has eigenvalue {eigenvalue} > 1")
            }
            Violation::SumNotIdentity { defect } => {
                write!(f, "effects sum to identity only within {defect:e}")
            }
        }
    }
}

/// Every invariant a candidate POVM broke, with magnitudes.
#[derive(Clone, Debug, PartialEq, Error)]
#[error("invalid POVM: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct ValidationFailure {
    pub violations: Vec<Violation>,
}

impl DiscretePovm {
    pub fn new(effects: Vec<Effect>) -> Self {
        Self { effects }
    }

    pub fn from_operators<S: Into<String>>(items: impl IntoIterator<Item = (S, Operator2)>) -> Self {
        Self::new(items.into_iter().map(|(l, o)| Effect::new(l, o)).collect())
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.effects.iter().map(|e| e.label.as_str())
    }

    pub fn effect(&self, label: &str) -> Option<&Operator2> {
        self.effects
            .iter()
            .find(|e| e.label == label)
            .map(|e| &e.operator)
    }

    pub fn sum(&self) -> Operator2 {
        self.effects.iter().map(|e| e.operator).sum()
    }

    /// tr(ρE) per effect, in order.
    pub fn probabilities(&self, rho: &DensityOperator) -> Vec<f64> {
        self.effects.iter().map(|e| rho.probability(&e.operator)).collect()
    }

    /// ⟨ψ|E|ψ⟩ per effect, in order.
    pub fn probabilities_pure(&self, psi: &StateVector2) -> Vec<f64> {
        self.effects
            .iter()
            .map(|e| psi.expectation(&e.operator).re)
            .collect()
    }

    pub fn validate(&self) -> std::result::Result<Classification, ValidationFailure> {
        let mut violations = Vec::new();
        if self.effects.is_empty() {
            violations.push(Violation::Empty);
        }
        let mut sharp = true;
        let mut trivial = true;
        for e in &self.effects {
            let defect = e.operator.hermitian_defect();
            if defect > tol::STRUCTURAL {
                violations.push(Violation::NotHermitian {
                    label: e.label.clone(),
                    defect,
                });
                continue;
            }
            let pairs = eig_hermitian(&e.operator).expect("checked Hermitian");
            let (hi, lo) = (pairs[0].value, pairs[1].value);
            if lo < -tol::STRUCTURAL {
                violations.push(Violation::NegativeEigenvalue {
                    label: e.label.clone(),
                    eigenvalue: lo,
                });
            }
            if hi > 1.0 + tol::STRUCTURAL {
                violations.push(Violation::ExceedsIdentity {
                    label: e.label.clone(),
                    eigenvalue: hi,
                });
            }
            sharp &= e.operator.projection_defect() <= tol::STRUCTURAL;
            trivial &= e.operator.identity_multiple_defect() <= tol::STRUCTURAL;
        }
        let defect = self.sum().max_abs_diff(&Operator2::identity());
        if defect > tol::STRUCTURAL {
            violations.push(Violation::SumNotIdentity { defect });
        }
        if violations.is_empty() {
            Ok(Classification { sharp, trivial })
        } else {
            Err(ValidationFailure { violations })
        }
    }

    /// Largest commutator norm over all effect pairs.
    pub fn max_commutator(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.effects.iter().enumerate() {
            for b in &self.effects[i + 1..] {
                worst = worst.max(a.operator.commutator(&b.operator).max_abs());
            }
        }
        worst
    }

    /// Same effects with a new set of labels.
    pub fn relabel<S: Into<String>>(&self, labels: impl IntoIterator<Item = S>) -> Self {
        Self::new(
            self.effects
                .iter()
                .zip(labels)
                .map(|(e, l)| Effect::new(l, e.operator))
                .collect(),
        )
    }

    /// Entrywise distance between corresponding effects (by position).
    pub fn max_abs_diff(&self, other: &DiscretePovm) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        self.effects
            .iter()
            .zip(other.effects.iter())
            .map(|(a, b)| a.operator.max_abs_diff(&b.operator))
            .fold(0.0, f64::max)
    }
}

/// {½(I + σ), ½(I − σ)} with labels "1", "2".
pub fn pauli_pvm(axis: Pauli) -> DiscretePovm {
    let s = pauli(axis);
    DiscretePovm::from_operators([
        ("1", (Operator2::identity() + s).scale(0.5)),
        ("2", (Operator2::identity() - s).scale(0.5)),
    ])
}

/// Two-outcome POVM {½(I ± u·σ)} for a real vector u with |u| ≤ 1.
pub fn unbiased_pair(u: [f64; 3]) -> DiscretePovm {
    DiscretePovm::from_operators([
        ("1", Operator2::from_bloch_form(1.0, u)),
        ("2", Operator2::from_bloch_form(1.0, u.map(|x| -x))),
    ])
}

/// Column-stochastic matrix w[ℓ][k]: entries ≥ 0, each column sums to one.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMatrix {
    rows: Vec<Vec<f64>>,
}

impl StochasticMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let cols = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || cols == 0 || rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidStochasticMatrix("ragged or empty".into()));
        }
        if let Some(x) = rows.iter().flatten().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidStochasticMatrix(format!("entry {x}")));
        }
        for k in 0..cols {
            let s: f64 = rows.iter().map(|r| r[k]).sum();
            if (s - 1.0).abs() > tol::IDENTITY {
                return Err(Error::InvalidStochasticMatrix(format!(
                    "column {k} sums to {s}"
                )));
            }
        }
        Ok(Self { rows })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self { rows }
    }

    /// ½[[1+f, 1−f], [1−f, 1+f]]
    pub fn symmetric_binary(f: f64) -> Result<Self> {
        Self::new(vec![
            vec![0.5 * (1.0 + f), 0.5 * (1.0 - f)],
            vec![0.5 * (1.0 - f), 0.5 * (1.0 + f)],
        ])
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn outcomes(&self) -> usize {
        self.rows.len()
    }

    pub fn inputs(&self) -> usize {
        self.rows[0].len()
    }
}

/// E_ℓ = Σ_k w_{ℓk} P_k, labeled "1".."m".
pub fn smear(sharp: &DiscretePovm, w: &StochasticMatrix) -> Result<DiscretePovm> {
    let class = sharp.validate()?;
    if !class.sharp {
        return Err(Error::NotSharp);
    }
    if w.inputs() != sharp.len() {
        return Err(Error::DimensionMismatch {
            expected: sharp.len(),
            found: w.inputs(),
        });
    }
    Ok(DiscretePovm::new(
        w.rows()
            .iter()
            .enumerate()
            .map(|(l, row)| {
                let op = row
                    .iter()
                    .zip(sharp.effects())
                    .map(|(wk, e)| e.operator.scale(*wk))
                    .sum();
                Effect::new((l + 1).to_string(), op)
            })
            .collect(),
    ))
}

/// Coarse-grains `p`; each group `(label, members)` becomes one effect.
pub fn marginal(p: &DiscretePovm, grouping: &[(&str, &[&str])]) -> Result<DiscretePovm> {
    let all: BTreeSet<&str> = p.labels().collect();
    if all.len() != p.len() {
        return Err(Error::NotAPartition("duplicate labels in POVM".into()));
    }
    let mut seen = BTreeSet::new();
    let mut effects = Vec::with_capacity(grouping.len());
    for (label, members) in grouping {
        if members.is_empty() {
            return Err(Error::NotAPartition(format!("group {label} is empty")));
        }
        let mut op = Operator2::zero();
        for m in members.iter() {
            if !all.contains(m) {
                return Err(Error::NotAPartition(format!("unknown label {m}")));
            }
            if !seen.insert(*m) {
                return Err(Error::NotAPartition(format!("label {m} appears twice")));
            }
            op += *p.effect(m).expect("label present");
        }
        effects.push(Effect::new(*label, op));
    }
    if seen.len() != all.len() {
        let missing: Vec<_> = all.difference(&seen).collect();
        return Err(Error::NotAPartition(format!("labels not covered: {missing:?}")));
    }
    Ok(DiscretePovm::new(effects))
}

/// Sum over the second index: {11+12, 21+22}.
pub const BY_FIRST_INDEX: &[(&str, &[&str])] = &[("1", &["11", "12"]), ("2", &["21", "22"])];
/// Sum over the first index: {11+21, 12+22}.
pub const BY_SECOND_INDEX: &[(&str, &[&str])] = &[("1", &["11", "21"]), ("2", &["12", "22"])];
/// Coincidences {11+22, 12+21}.
pub const BY_COINCIDENCE: &[(&str, &[&str])] = &[("1", &["11", "22"]), ("2", &["12", "21"])];

/// Display order of four-outcome joint labels.
pub const JOINT_LABELS: [&str; 4] = ["11", "21", "12", "22"];

/// Smearing parameters of the unsharp σx (f) and σz (g) observables.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UnsharpPair {
    f: f64,
    g: f64,
}

impl UnsharpPair {
    pub fn new(f: f64, g: f64) -> Result<Self> {
        if !f.is_finite() || !g.is_finite() {
            return Err(Error::NonFinite("unsharp pair"));
        }
        if f.abs() > 1.0 || g.abs() > 1.0 {
            return Err(Error::InvalidStochasticMatrix(format!(
                "smearing parameters ({f}, {g}) outside [-1, 1]"
            )));
        }
        Ok(Self { f, g })
    }

    pub fn f(&self) -> f64 {
        self.f
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// F = {½(I ± fσx)}
    pub fn x_observable(&self) -> DiscretePovm {
        unbiased_pair([self.f, 0.0, 0.0])
    }

    /// G = {½(I ± gσz)}
    pub fn z_observable(&self) -> DiscretePovm {
        unbiased_pair([0.0, 0.0, self.g])
    }
}

/// Tolerance on f² + g² ≤ 1.
pub const JOINT_BOUNDARY_TOL: f64 = 1e-10;

pub fn jointly_measurable(pair: &UnsharpPair) -> bool {
    pair.f * pair.f + pair.g * pair.g <= 1.0 + JOINT_BOUNDARY_TOL
}

/// E₁₁ = ¼(I + fσx + gσz), E₂₁ = ¼(I − fσx + gσz),
/// E₁₂ = ¼(I + fσx − gσz), E₂₂ = ¼(I − fσx − gσz).
pub fn joint_xz(pair: &UnsharpPair) -> Result<DiscretePovm> {
    let (f, g) = (pair.f, pair.g);
    let norm_sq = f * f + g * g;
    if !jointly_measurable(pair) {
        return Err(Error::NotJointlyMeasurable {
            norm_sq,
            min_eigenvalue: 0.25 * (1.0 - norm_sq.sqrt()),
        });
    }
    let e = |sx: f64, sz: f64| Operator2::from_bloch_form(0.5, [0.5 * sx * f, 0.0, 0.5 * sz * g]);
    Ok(DiscretePovm::from_operators([
        ("11", e(1.0, 1.0)),
        ("21", e(-1.0, 1.0)),
        ("12", e(1.0, -1.0)),
        ("22", e(-1.0, -1.0)),
    ]))
}

fn ensure_two_outcome(p: &DiscretePovm) -> Result<()> {
    if p.len() != 2 {
        return Err(Error::NotTwoOutcome { outcomes: p.len() });
    }
    Ok(())
}

/// Writes the first effect as ½((1+b)I + u·σ) and returns (b, u).
pub fn bias_and_direction(p: &DiscretePovm) -> Result<(f64, [f64; 3])> {
    ensure_two_outcome(p)?;
    let (a, u) = p.effects()[0].operator.bloch_form();
    Ok((a - 1.0, u))
}

/// max_ρ |tr ρE₁ − tr ρE₂| = |b| + |u|, clamped to [0, 1].
pub fn contrast(p: &DiscretePovm) -> Result<f64> {
    let (b, u) = bias_and_direction(p)?;
    let len = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok((b.abs() + len).clamp(0.0, 1.0))
}

/// 1 − C²; also the minimum over states of the ±1-valued outcome variance.
pub fn unsharpness(p: &DiscretePovm) -> Result<f64> {
    let c = contrast(p)?;
    Ok(1.0 - c * c)
}

impl From<Vec<Effect>> for DiscretePovm {
    fn from(effects: Vec<Effect>) -> Self {
        Self::new(effects)
    }
}
