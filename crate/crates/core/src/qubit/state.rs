use serde::{Deserialize, Serialize};

use super::{c, eig_hermitian, pauli, tol, Operator, Operator2, Pauli, C64};
use crate::error::{Error, Result};

/// Unit-norm complex vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateVector<const N: usize> {
    components: [C64; N],
}

/// Photon state α|1⟩ + β|2⟩.
pub type StateVector2 = StateVector<2>;
/// Photon ⊗ probe state, photon index slow.
pub type StateVector4 = StateVector<4>;

fn norm_sq<const N: usize>(v: &[C64; N]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

impl<const N: usize> StateVector<N> {
    /// Accepts `components` only if already normalized within 1e-10.
    pub fn new(components: [C64; N]) -> Result<Self> {
        if components.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("state components"));
        }
        let n2 = norm_sq(&components);
        if n2.sqrt() < tol::ZERO_NORM {
            return Err(Error::ZeroNorm { norm: n2.sqrt() });
        }
        if (n2 - 1.0).abs() > tol::STRUCTURAL {
            return Err(Error::NotNormalized { norm_sq: n2 });
        }
        Ok(Self { components })
    }

    /// Explicitly rescales `components` to unit norm. Rejects (near-)zero vectors.
    pub fn normalize(components: [C64; N]) -> Result<Self> {
        if components.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("state components"));
        }
        let n = norm_sq(&components).sqrt();
        if n < tol::ZERO_NORM {
            return Err(Error::ZeroNorm { norm: n });
        }
        Ok(Self {
            components: components.map(|z| z / n),
        })
    }

    pub(crate) fn from_unit_unchecked(components: [C64; N]) -> Self {
        Self { components }
    }

    pub fn basis(k: usize) -> Self {
        let mut components = [c(0.0, 0.0); N];
        components[k] = c(1.0, 0.0);
        Self { components }
    }

    pub fn components(&self) -> &[C64; N] {
        &self.components
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &Self) -> C64 {
        self.components
            .iter()
            .zip(other.components.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn projector(&self) -> Operator<N> {
        Operator::outer(&self.components, &self.components)
    }

    pub fn expectation(&self, op: &Operator<N>) -> C64 {
        op.sandwich(&self.components, &self.components)
    }

    pub fn phase(&self, phase: C64) -> Self {
        Self {
            components: self.components.map(|z| z * phase),
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.components
            .iter()
            .zip(other.components.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Applies a unitary; the result is re-checked for unit norm.
    pub fn evolve(&self, u: &Operator<N>) -> Result<Self> {
        Self::new(u.apply(&self.components))
    }
}

impl StateVector2 {
    pub fn from_amplitudes(alpha: C64, beta: C64) -> Result<Self> {
        Self::new([alpha, beta])
    }

    pub fn alpha(&self) -> C64 {
        self.components[0]
    }

    pub fn beta(&self) -> C64 {
        self.components[1]
    }

    /// The orthogonal partner (a, b) ↦ (−b̄, ā).
    pub fn perp(&self) -> Self {
        let [a, b] = self.components;
        Self {
            components: [-b.conj(), a.conj()],
        }
    }

    pub fn tensor(&self, probe: &StateVector2) -> StateVector4 {
        let [a, b] = self.components;
        let [p, q] = probe.components;
        StateVector4::from_unit_unchecked([a * p, a * q, b * p, b * q])
    }

    pub fn bloch(&self) -> BlochVector {
        let rho = self.projector();
        BlochVector::from_array_unchecked(rho.bloch_form().1)
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator {
            matrix: self.projector(),
        }
    }
}

impl Serialize for StateVector2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [
            [self.components[0].re, self.components[0].im],
            [self.components[1].re, self.components[1].im],
        ]
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StateVector2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw: [[f64; 2]; 2] = Deserialize::deserialize(d)?;
        StateVector2::new([c(raw[0][0], raw[0][1]), c(raw[1][0], raw[1][1])])
            .map_err(D::Error::custom)
    }
}

/// Real 3-vector r of a qubit state ½(I + r·σ), |r| ≤ 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct BlochVector {
    r: [f64; 3],
}

impl BlochVector {
    pub fn new(r1: f64, r2: f64, r3: f64) -> Result<Self> {
        Self::from_array([r1, r2, r3])
    }

    pub fn from_array(r: [f64; 3]) -> Result<Self> {
        if r.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("Bloch vector"));
        }
        let length = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if length > 1.0 + tol::STRUCTURAL {
            return Err(Error::BlochOutOfBall { length });
        }
        Ok(Self { r })
    }

    pub(crate) fn from_array_unchecked(r: [f64; 3]) -> Self {
        Self { r }
    }

    /// Unit vector along (sinθ cosφ, sinθ sinφ, cosθ).
    pub fn from_angles(polar: f64, azimuth: f64) -> Self {
        Self {
            r: [
                polar.sin() * azimuth.cos(),
                polar.sin() * azimuth.sin(),
                polar.cos(),
            ],
        }
    }

    pub fn components(&self) -> [f64; 3] {
        self.r
    }

    pub fn length(&self) -> f64 {
        self.r.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &[f64; 3]) -> f64 {
        self.r.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    pub fn sigma(&self) -> Operator2 {
        Operator2::from_bloch_form(0.0, self.r).scale(2.0)
    }
}

/// Hermitian, PSD, trace-one 2×2 operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: Operator2,
}

impl DensityOperator {
    pub fn new(matrix: Operator2) -> Result<Self> {
        matrix.ensure_hermitian()?;
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol::STRUCTURAL || tr.im.abs() > tol::STRUCTURAL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let min = eig_hermitian(&matrix)?
            .last()
            .map(|p| p.value)
            .unwrap_or(0.0);
        if min < -tol::STRUCTURAL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: Operator2) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed() -> Self {
        Self {
            matrix: Operator2::identity().scale(0.5),
        }
    }

    pub fn matrix(&self) -> &Operator2 {
        &self.matrix
    }

    pub fn bloch(&self) -> BlochVector {
        bloch_from_density(self)
    }

    /// tr ρ²
    pub fn purity(&self) -> f64 {
        (self.matrix * self.matrix).trace().re
    }

    /// tr(Aρ) as a complex number; no Hermiticity requirement on A.
    pub fn expectation_complex(&self, a: &Operator2) -> C64 {
        (*a * self.matrix).trace()
    }

    /// Probability tr(ρE).
    pub fn probability(&self, effect: &Operator2) -> f64 {
        self.expectation_complex(effect).re
    }
}

/// ½(I + r₁σx + r₂σy + r₃σz)
pub fn density_from_bloch(r: &BlochVector) -> DensityOperator {
    DensityOperator {
        matrix: Operator2::from_bloch_form(1.0, r.r),
    }
}

pub fn bloch_from_density(rho: &DensityOperator) -> BlochVector {
    BlochVector::from_array_unchecked(rho.matrix.bloch_form().1)
}

/// tr[Aρ] for Hermitian A.
pub fn expectation(a: &Operator2, rho: &DensityOperator) -> Result<f64> {
    a.ensure_hermitian()?;
    let z = rho.expectation_complex(a);
    debug_assert!(z.im.abs() < tol::STRUCTURAL, "imaginary expectation {z}");
    Ok(z.re)
}

/// ⟨A²⟩ − ⟨A⟩²
pub fn variance(a: &Operator2, rho: &DensityOperator) -> Result<f64> {
    let mean = expectation(a, rho)?;
    let sq = expectation(&(*a * *a), rho)?;
    Ok(sq - mean * mean)
}

/// Reduced photon state tr_probe |Ψ⟩⟨Ψ|.
pub fn partial_trace_probe(psi: &StateVector4) -> DensityOperator {
    let v = psi.components();
    let mut m = Operator2::zero();
    for i in 0..2 {
        for j in 0..2 {
            m[(i, j)] = (0..2).map(|k| v[2 * i + k] * v[2 * j + k].conj()).sum();
        }
    }
    DensityOperator::from_matrix_unchecked(m)
}

impl Pauli {
    pub fn expectation(self, rho: &DensityOperator) -> f64 {
        rho.expectation_complex(&pauli(self)).re
    }
}
