//! Reference computations built directly from matrices, independent of the
//! library's own formulas.
#![allow(dead_code)]

use mzpovm::qubit::C64;

pub type M2 = [[C64; 2]; 2];

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn mul(a: &M2, b: &M2) -> M2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// a I + x σx + y σy + z σz, entry by entry.
pub fn pauli_combo(a: f64, x: f64, y: f64, z: f64) -> M2 {
    [[c(a + z, 0.0), c(x, -y)], [c(x, y), c(a - z, 0.0)]]
}

pub fn max_diff(a: &M2, b: &M2) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

pub fn entries(op: &mzpovm::qubit::Operator2) -> M2 {
    *op.entries()
}

/// Interferometer as a product of optical elements: 50:50 splitter
/// (transmission 1, reflection i), mirrors (i on both arms), phase δ on
/// arm 1, splitter, then the detector labels (D₁ receives port 2).
pub fn interferometer(delta: f64) -> M2 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let bs = [[c(s, 0.0), c(0.0, s)], [c(0.0, s), c(s, 0.0)]];
    let arms = [[c(0.0, 1.0) * C64::from_polar(1.0, delta), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]];
    let relabel = [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
    mul(&relabel, &mul(&bs, &mul(&arms, &bs)))
}

/// Ψ_f = Σᵢ ψᵢ U|i⟩ ⊗ |pᵢ⟩, indexed [2·path + probe].
pub fn final_state(psi: [C64; 2], delta: f64, p1: [C64; 2], p2: [C64; 2]) -> [C64; 4] {
    let u = interferometer(delta);
    let markers = [p1, p2];
    let mut out = [c(0.0, 0.0); 4];
    for k in 0..2 {
        for j in 0..2 {
            out[2 * k + j] = (0..2).map(|i| psi[i] * u[k][i] * markers[i][j]).sum();
        }
    }
    out
}

/// |⟨k, q|Ψ⟩|² with k = 0, 1 for D₁, D₂.
pub fn born(state: &[C64; 4], k: usize, q: [C64; 2]) -> f64 {
    (q[0].conj() * state[2 * k] + q[1].conj() * state[2 * k + 1]).norm_sqr()
}

/// Probability of detector k irrespective of the probe.
pub fn detector_probability(state: &[C64; 4], k: usize) -> f64 {
    state[2 * k].norm_sqr() + state[2 * k + 1].norm_sqr()
}

pub fn ket(a: f64, b: f64) -> [C64; 2] {
    [c(a, 0.0), c(b, 0.0)]
}

/// Tilted markers cos(θ/2)|1⟩ + sin(θ/2)|2⟩ and sin(θ/2)|1⟩ + cos(θ/2)|2⟩.
pub fn markers(theta: f64) -> ([C64; 2], [C64; 2]) {
    let (s, co) = (theta / 2.0).sin_cos();
    (ket(co, s), ket(s, co))
}

/// (|1⟩ ± e^{iγ}|2⟩)/√2
pub fn erasure_pointer(gamma: f64, sign: f64) -> [C64; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [c(s, 0.0), C64::from_polar(sign * s, gamma)]
}

pub fn expectation(m: &M2, psi: [C64; 2]) -> f64 {
    let mut acc = c(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            acc += psi[i].conj() * m[i][j] * psi[j];
        }
    }
    acc.re
}

/// Bloch vector read off the density matrix entries.
pub fn bloch_of(rho: &M2) -> [f64; 3] {
    [2.0 * rho[0][1].re, -2.0 * rho[0][1].im, (rho[0][0] - rho[1][1]).re]
}

pub fn entropy_bits(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}
