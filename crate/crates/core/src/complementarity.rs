//! Value and probabilistic complementarity: mutually unbiased bases, the
//! Fourier partner of a basis, and projection meets.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::qubit::{c, eig_hermitian, tol, Operator, C64};

pub const MAX_DIMENSION: usize = 16;

/// Orthonormal basis of ℂⁿ, n ≤ 16.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthonormalBasis {
    vectors: Vec<Vec<C64>>,
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

impl OrthonormalBasis {
    pub fn new(vectors: Vec<Vec<C64>>) -> Result<Self> {
        let n = vectors.len();
        if n == 0 || n > MAX_DIMENSION {
            return Err(Error::InvalidBasis(format!("dimension {n} outside 1..=16")));
        }
        if vectors.iter().any(|v| v.len() != n) {
            return Err(Error::InvalidBasis("vector length differs from count".into()));
        }
        for (i, a) in vectors.iter().enumerate() {
            for (j, b) in vectors.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                let got = inner(a, b);
                if (got - c(want, 0.0)).norm() > tol::STRUCTURAL {
                    return Err(Error::InvalidBasis(format!(
                        "Gram entry ({i},{j}) = {got}"
                    )));
                }
            }
        }
        Ok(Self { vectors })
    }

    pub fn standard(n: usize) -> Result<Self> {
        Self::new(
            (0..n)
                .map(|i| (0..n).map(|j| c(if i == j { 1.0 } else { 0.0 }, 0.0)).collect())
                .collect(),
        )
    }

    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<C64>] {
        &self.vectors
    }

    /// |⟨a_k|b_ℓ⟩| for all k, ℓ.
    pub fn overlaps(&self, other: &Self) -> Result<Vec<Vec<f64>>> {
        if self.dimension() != other.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: other.dimension(),
            });
        }
        Ok(self
            .vectors
            .iter()
            .map(|a| other.vectors.iter().map(|b| inner(a, b).norm()).collect())
            .collect())
    }
}

/// φ_ℓ = n^{-1/2} Σ_k e^{2πikℓ/n} ψ_k with k, ℓ = 0…n−1.
pub fn fourier_partner(basis: &OrthonormalBasis) -> Result<OrthonormalBasis> {
    let n = basis.dimension();
    let scale = 1.0 / (n as f64).sqrt();
    let vectors = (0..n)
        .map(|l| {
            let mut phi = vec![c(0.0, 0.0); n];
            for (k, psi) in basis.vectors().iter().enumerate() {
                let w = C64::from_polar(scale, 2.0 * PI * (k * l) as f64 / n as f64);
                for (dst, src) in phi.iter_mut().zip(psi) {
                    *dst += w * src;
                }
            }
            phi
        })
        .collect();
    OrthonormalBasis::new(vectors)
}

/// True iff every |⟨a_k|b_ℓ⟩| lies within `tol` of n^{-1/2}.
pub fn is_mutually_unbiased(a: &OrthonormalBasis, b: &OrthonormalBasis, tol: f64) -> Result<bool> {
    let target = 1.0 / (a.dimension() as f64).sqrt();
    Ok(a.overlaps(b)?
        .iter()
        .flatten()
        .all(|o| (o - target).abs() <= tol))
}

/// Projection onto ran P ∩ ran Q, from the eigenvalue-2 eigenspace of P + Q.
pub fn meet<const N: usize>(p: &Operator<N>, q: &Operator<N>) -> Result<Operator<N>> {
    for x in [p, q] {
        if !x.is_projection(tol::STRUCTURAL) {
            return Err(Error::NotAProjection {
                defect: x.projection_defect().max(x.hermitian_defect()),
            });
        }
    }
    let pairs = eig_hermitian(&(*p + *q))?;
    Ok(pairs
        .iter()
        .filter(|e| e.value >= 2.0 - tol::STRUCTURAL)
        .map(|e| e.vector.projector())
        .sum())
}

/// P∧Q, P∧(I−Q) and (I−P)∧Q all vanish.
pub fn probabilistically_complementary<const N: usize>(
    p: &Operator<N>,
    q: &Operator<N>,
) -> Result<bool> {
    let id = Operator::<N>::identity();
    let meets = [
        meet(p, q)?,
        meet(p, &(id - *q))?,
        meet(&(id - *p), q)?,
    ];
    Ok(meets.iter().all(|m| m.max_abs() <= tol::STRUCTURAL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::{pauli, Operator2, Pauli};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn half(a: Pauli, sign: f64) -> Operator2 {
        (Operator2::identity() + pauli(a).scale(sign)).scale(0.5)
    }

    #[test]
    fn fourier_partner_qubit() {
        let b = fourier_partner(&OrthonormalBasis::standard(2).unwrap()).unwrap();
        let s = FRAC_1_SQRT_2;
        let plus = [c(s, 0.0), c(s, 0.0)];
        let minus = [c(s, 0.0), c(-s, 0.0)];
        for (got, want) in b.vectors().iter().zip([plus, minus]) {
            for (x, y) in got.iter().zip(want.iter()) {
                assert!((x - y).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn fourier_partner_qutrit() {
        let std3 = OrthonormalBasis::standard(3).unwrap();
        let f = fourier_partner(&std3).unwrap();
        for row in std3.overlaps(&f).unwrap() {
            for o in row {
                assert!((o - 1.0 / 3f64.sqrt()).abs() < 1e-15);
            }
        }
        let ff = fourier_partner(&f).unwrap();
        assert!(is_mutually_unbiased(&f, &ff, 1e-10).unwrap());
    }

    #[test]
    fn unbiasedness_examples() {
        let z = OrthonormalBasis::standard(2).unwrap();
        let s = FRAC_1_SQRT_2;
        let x = OrthonormalBasis::new(vec![
            vec![c(s, 0.0), c(s, 0.0)],
            vec![c(s, 0.0), c(-s, 0.0)],
        ])
        .unwrap();
        assert!(is_mutually_unbiased(&z, &x, 1e-10).unwrap());
        assert!(!is_mutually_unbiased(&z, &z, 1e-10).unwrap());

        // z basis rotated about y by π/4: overlaps cos(π/8), sin(π/8).
        let (ch, sh) = ((PI / 8.0).cos(), (PI / 8.0).sin());
        let rot = OrthonormalBasis::new(vec![
            vec![c(ch, 0.0), c(sh, 0.0)],
            vec![c(-sh, 0.0), c(ch, 0.0)],
        ])
        .unwrap();
        let ov = z.overlaps(&rot).unwrap();
        assert!((ov[0][0] - ch).abs() < 1e-15 && (ov[0][1] - sh).abs() < 1e-15);
        assert!(!is_mutually_unbiased(&z, &rot, 1e-10).unwrap());

        assert!(matches!(
            is_mutually_unbiased(&z, &OrthonormalBasis::standard(3).unwrap(), 1e-10),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn invalid_basis_rejected() {
        assert!(OrthonormalBasis::new(vec![vec![c(1.0, 0.0), c(0.0, 0.0)]; 2]).is_err());
        assert!(OrthonormalBasis::standard(17).is_err());
    }

    #[test]
    fn complementarity_examples() {
        let pz = half(Pauli::Z, 1.0);
        let px = half(Pauli::X, 1.0);
        assert!(probabilistically_complementary(&pz, &px).unwrap());
        assert!(!probabilistically_complementary(&pz, &pz).unwrap());
        let comp = Operator2::identity() - pz;
        assert!(!probabilistically_complementary(&pz, &comp).unwrap());
        assert!(meet(&pz, &pz).unwrap().max_abs_diff(&pz) < 1e-12);
        assert!(matches!(
            probabilistically_complementary(&pz, &pauli(Pauli::X)),
            Err(Error::NotAProjection { .. })
        ));
    }
}
