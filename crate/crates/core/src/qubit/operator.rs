use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::{c, tol, C64};
use crate::error::{Error, Result};

/// Dense N×N complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Operator<const N: usize> {
    entries: [[C64; N]; N],
}

pub type Operator2 = Operator<2>;
pub type Operator4 = Operator<4>;

impl<const N: usize> Operator<N> {
    pub fn from_rows(entries: [[C64; N]; N]) -> Result<Self> {
        if entries
            .iter()
            .flatten()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite("operator entries"));
        }
        Ok(Self { entries })
    }

    pub(crate) fn from_rows_unchecked(entries: [[C64; N]; N]) -> Self {
        Self { entries }
    }

    pub fn zero() -> Self {
        Self {
            entries: [[C64::new(0.0, 0.0); N]; N],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            m.entries[i][i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn diagonal(d: [f64; N]) -> Self {
        let mut m = Self::zero();
        for (i, v) in d.into_iter().enumerate() {
            m.entries[i][i] = C64::new(v, 0.0);
        }
        m
    }

    /// |u⟩⟨v|
    pub fn outer(u: &[C64; N], v: &[C64; N]) -> Self {
        let mut m = Self::zero();
        for (row, ui) in m.entries.iter_mut().zip(u) {
            for (x, vj) in row.iter_mut().zip(v) {
                *x = ui * vj.conj();
            }
        }
        m
    }

    pub fn entries(&self) -> &[[C64; N]; N] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for j in 0..N {
                m.entries[i][j] = self.entries[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..N).map(|i| self.entries[i][i]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut m = *self;
        m.entries.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        let mut m = *self;
        m.entries.iter_mut().flatten().for_each(|z| *z *= s);
        m
    }

    pub fn apply(&self, v: &[C64; N]) -> [C64; N] {
        let mut out = [C64::new(0.0, 0.0); N];
        for (i, row) in self.entries.iter().enumerate() {
            out[i] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }

    /// ⟨u|A|v⟩
    pub fn sandwich(&self, u: &[C64; N], v: &[C64; N]) -> C64 {
        let av = self.apply(v);
        u.iter().zip(av.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .zip(other.entries.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn hermitian_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    pub fn ensure_hermitian(&self) -> Result<()> {
        let defect = self.hermitian_defect();
        if defect > tol::STRUCTURAL {
            return Err(Error::NotHermitian { defect });
        }
        Ok(())
    }

    pub fn unitarity_defect(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Self::identity())
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    pub fn projection_defect(&self) -> f64 {
        (*self * *self).max_abs_diff(self)
    }

    /// Hermitian and idempotent within `tol`.
    pub fn is_projection(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol && self.projection_defect() <= tol
    }

    /// AB − BA
    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// Distance from the closest multiple of the identity, entrywise.
    pub fn identity_multiple_defect(&self) -> f64 {
        let mean = self.trace() / N as f64;
        self.max_abs_diff(&Self::identity().scale_complex(mean))
    }
}

impl<const N: usize> Default for Operator<N> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<const N: usize> Index<(usize, usize)> for Operator<N> {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for Operator<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i][j]
    }
}

impl<const N: usize> Add for Operator<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl<const N: usize> AddAssign for Operator<N> {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.entries.iter_mut().flatten().zip(rhs.entries.iter().flatten()) {
            *a += b;
        }
    }
}

impl<const N: usize> Sub for Operator<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.entries.iter_mut().flatten().zip(rhs.entries.iter().flatten()) {
            *a -= b;
        }
        self
    }
}

impl<const N: usize> Neg for Operator<N> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl<const N: usize> Mul for Operator<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            for j in 0..N {
                m.entries[i][j] = (0..N).map(|k| self.entries[i][k] * rhs.entries[k][j]).sum();
            }
        }
        m
    }
}

impl<const N: usize> Mul<Operator<N>> for f64 {
    type Output = Operator<N>;
    fn mul(self, rhs: Operator<N>) -> Operator<N> {
        rhs.scale(self)
    }
}

impl<const N: usize> std::iter::Sum for Operator<N> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl<const N: usize> Serialize for Operator<N> {
    /// Row-major nested arrays of `[re, im]` pairs.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de, const N: usize> Deserialize<'de> for Operator<N> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        if rows.len() != N || rows.iter().any(|r| r.len() != N) {
            return Err(D::Error::custom(format!("expected a {N}x{N} matrix")));
        }
        let mut m = Self::zero();
        for (i, row) in rows.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                m.entries[i][j] = C64::new(z[0], z[1]);
            }
        }
        Operator::from_rows(m.entries).map_err(D::Error::custom)
    }
}

impl Operator2 {
    /// ½(a·I + u·σ) built from a scalar and a real 3-vector.
    pub fn from_bloch_form(a: f64, u: [f64; 3]) -> Self {
        let [x, y, z] = u;
        Self::from_rows_unchecked([
            [c(0.5 * (a + z), 0.0), c(0.5 * x, -0.5 * y)],
            [c(0.5 * x, 0.5 * y), c(0.5 * (a - z), 0.0)],
        ])
    }

    /// Inverse of [`Operator2::from_bloch_form`] for Hermitian input:
    /// returns `(a, u)` with A = ½(a·I + u·σ).
    pub fn bloch_form(&self) -> (f64, [f64; 3]) {
        let e = &self.entries;
        let a = (e[0][0] + e[1][1]).re;
        let z = (e[0][0] - e[1][1]).re;
        let x = (e[0][1] + e[1][0]).re;
        let y = (e[1][0] - e[0][1]).im;
        (a, [x, y, z])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];
}

/// Pauli matrix in the |1⟩,|2⟩ basis; |1⟩ is the +1 eigenvector of σz.
pub fn pauli(axis: Pauli) -> Operator2 {
    let o = c(0.0, 0.0);
    let rows = match axis {
        Pauli::X => [[o, c(1.0, 0.0)], [c(1.0, 0.0), o]],
        Pauli::Y => [[o, c(0.0, -1.0)], [c(0.0, 1.0), o]],
        Pauli::Z => [[c(1.0, 0.0), o], [o, c(-1.0, 0.0)]],
    };
    Operator2::from_rows_unchecked(rows)
}

/// Kronecker product a ⊗ b with a acting on the photon (slow index).
pub fn tensor(a: &Operator2, b: &Operator2) -> Operator4 {
    let mut m = Operator4::zero();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    m[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_z_is_diagonal() {
        assert_eq!(pauli(Pauli::Z), Operator2::diagonal([1.0, -1.0]));
        let v = pauli(Pauli::Z).apply(&[c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(v, [c(1.0, 0.0), c(0.0, 0.0)]);
        let x = pauli(Pauli::X);
        assert_eq!(x[(0, 1)], c(1.0, 0.0));
        assert_eq!(x[(1, 0)], c(1.0, 0.0));
        assert_eq!(x[(0, 0)], c(0.0, 0.0));
    }

    #[test]
    fn pauli_commutator_xy() {
        let lhs = pauli(Pauli::X).commutator(&pauli(Pauli::Y));
        let rhs = pauli(Pauli::Z).scale_complex(c(0.0, 2.0));
        assert!(lhs.max_abs_diff(&rhs) < 1e-15);
    }

    #[test]
    fn pauli_anticommutation() {
        for (i, a) in Pauli::ALL.iter().enumerate() {
            for (j, b) in Pauli::ALL.iter().enumerate() {
                let (pa, pb) = (pauli(*a), pauli(*b));
                let anti = pa * pb + pb * pa;
                let expected = if i == j {
                    Operator2::identity().scale(2.0)
                } else {
                    Operator2::zero()
                };
                assert!(anti.max_abs_diff(&expected) <= 1e-14);
            }
        }
    }

    #[test]
    fn tensor_basis_order() {
        assert_eq!(
            tensor(&Operator2::identity(), &Operator2::identity()),
            Operator4::identity()
        );
        let p1 = Operator2::diagonal([1.0, 0.0]);
        assert_eq!(tensor(&p1, &p1), Operator4::diagonal([1.0, 0.0, 0.0, 0.0]));
        // |2><2| ⊗ |q1><q1| picks the third basis vector.
        let p2 = Operator2::diagonal([0.0, 1.0]);
        assert_eq!(tensor(&p2, &p1), Operator4::diagonal([0.0, 0.0, 1.0, 0.0]));
    }

    #[test]
    fn bloch_form_roundtrip() {
        let a = Operator2::from_bloch_form(0.7, [0.1, -0.2, 0.3]);
        let (s, u) = a.bloch_form();
        assert!((s - 0.7).abs() < 1e-15);
        assert!((u[0] - 0.1).abs() < 1e-15 && (u[1] + 0.2).abs() < 1e-15 && (u[2] - 0.3).abs() < 1e-15);
        let direct = (Operator2::identity().scale(0.7)
            + pauli(Pauli::X).scale(0.1)
            + pauli(Pauli::Y).scale(-0.2)
            + pauli(Pauli::Z).scale(0.3))
        .scale(0.5);
        assert!(a.max_abs_diff(&direct) < 1e-15);
    }

    #[test]
    fn rejects_nan() {
        let mut rows = Operator2::identity().entries;
        rows[0][1] = c(f64::NAN, 0.0);
        assert!(matches!(Operator2::from_rows(rows), Err(Error::NonFinite(_))));
    }
}
