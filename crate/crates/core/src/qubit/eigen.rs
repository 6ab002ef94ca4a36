use super::{c, tol, Operator, StateVector, C64};
use crate::error::Result;

const MAX_SWEEPS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigenpair<const N: usize> {
    pub value: f64,
    pub vector: StateVector<N>,
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues in descending order.
///
/// 2×2 input is solved in closed form; larger sizes use cyclic complex Jacobi
/// rotations until the off-diagonal Frobenius norm drops to 1e-13 (scaled by
/// the matrix norm when that exceeds one).
pub fn eig_hermitian<const N: usize>(a: &Operator<N>) -> Result<Vec<Eigenpair<N>>> {
    a.ensure_hermitian()?;
    let mut pairs = if N == 2 {
        closed_form_2x2(a)
    } else {
        jacobi(a)
    };
    pairs.sort_by(|x, y| y.value.total_cmp(&x.value));
    Ok(pairs)
}

fn closed_form_2x2<const N: usize>(m: &Operator<N>) -> Vec<Eigenpair<N>> {
    debug_assert_eq!(N, 2);
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    // Average the two off-diagonal entries so tiny anti-Hermitian noise cancels.
    let b = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let rad = half.hypot(b.norm());
    let (hi, lo) = (mean + rad, mean - rad);

    let upper: [C64; 2] = if b.norm() == 0.0 {
        if a >= d {
            [c(1.0, 0.0), c(0.0, 0.0)]
        } else {
            [c(0.0, 0.0), c(1.0, 0.0)]
        }
    } else if half >= 0.0 {
        [c(hi - d, 0.0), b.conj()]
    } else {
        [b, c(hi - a, 0.0)]
    };
    let n = upper.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let v = [upper[0] / n, upper[1] / n];
    let w = [-v[1].conj(), v[0].conj()];

    let mut out = Vec::with_capacity(2);
    for (value, vec2) in [(hi, v), (lo, w)] {
        let mut comps = [c(0.0, 0.0); N];
        comps[0] = vec2[0];
        comps[1] = vec2[1];
        out.push(Eigenpair {
            value,
            vector: StateVector::from_unit_unchecked(comps),
        });
    }
    out
}

fn off_diagonal_norm<const N: usize>(a: &[[C64; N]; N]) -> f64 {
    let mut s = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            if i != j {
                s += z.norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi<const N: usize>(m: &Operator<N>) -> Vec<Eigenpair<N>> {
    let mut a = *m.entries();
    let mut v = *Operator::<N>::identity().entries();
    let target = tol::JACOBI * m.frobenius_norm().max(1.0);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let apq = a[p][q];
                let r = apq.norm();
                if r < f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / r;
                let tau = (a[q][q].re - a[p][p].re) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                let ph_conj = phase.conj();

                for row in a.iter_mut().chain(v.iter_mut()) {
                    let (kp, kq) = (row[p], row[q]);
                    row[p] = kp * cs - kq * ph_conj * sn;
                    row[q] = kp * sn + kq * ph_conj * cs;
                }
                let (row_p, row_q) = (a[p], a[q]);
                for (k, (pk, qk)) in row_p.into_iter().zip(row_q).enumerate() {
                    a[p][k] = pk * cs - qk * phase * sn;
                    a[q][k] = pk * sn + qk * phase * cs;
                }
                a[p][q] = c(0.0, 0.0);
                a[q][p] = c(0.0, 0.0);
                a[p][p].im = 0.0;
                a[q][q].im = 0.0;
            }
        }
    }

    (0..N)
        .map(|j| {
            let mut comps = [c(0.0, 0.0); N];
            for (i, z) in comps.iter_mut().enumerate() {
                *z = v[i][j];
            }
            Eigenpair {
                value: a[j][j].re,
                vector: StateVector::from_unit_unchecked(comps),
            }
        })
        .collect()
}

/// Σ λ v v†
pub fn reconstruct<const N: usize>(pairs: &[Eigenpair<N>]) -> Operator<N> {
    pairs
        .iter()
        .map(|p| p.vector.projector().scale(p.value))
        .sum()
}
