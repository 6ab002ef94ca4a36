use super::{c, eig_hermitian, partial_trace_probe, tol, Operator4, StateVector2, StateVector4, C64};

/// Biorthogonal decomposition Ψ = √w ψ₁⊗φ₁ + √(1−w) ψ₂⊗φ₂ with w ≥ ½.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Schmidt {
    pub weight: f64,
    pub photon: [StateVector2; 2],
    pub probe: [StateVector2; 2],
}

impl Schmidt {
    pub fn coefficients(&self) -> [f64; 2] {
        [self.weight.sqrt(), (1.0 - self.weight).max(0.0).sqrt()]
    }

    pub fn reconstruct(&self) -> [C64; 4] {
        let [a, b] = self.coefficients();
        let t1 = self.photon[0].tensor(&self.probe[0]);
        let t2 = self.photon[1].tensor(&self.probe[1]);
        let mut out = [c(0.0, 0.0); 4];
        for (k, z) in out.iter_mut().enumerate() {
            *z = t1.components()[k] * a + t2.components()[k] * b;
        }
        out
    }

    /// The leading product term ψ₁⊗φ₁.
    pub fn leading_product(&self) -> StateVector4 {
        self.photon[0].tensor(&self.probe[0])
    }
}

fn fix_phase(v: StateVector2) -> StateVector2 {
    let comps = v.components();
    let pivot = if comps[0].norm() > 0.0 { comps[0] } else { comps[1] };
    v.phase(pivot.conj() / pivot.norm())
}

/// (⟨ψ|⊗I)Ψ as an unnormalized probe vector.
fn contract_photon(psi: &StateVector4, photon: &StateVector2) -> [C64; 2] {
    let v = psi.components();
    let p = photon.components();
    [
        p[0].conj() * v[0] + p[1].conj() * v[2],
        p[0].conj() * v[1] + p[1].conj() * v[3],
    ]
}

pub fn schmidt(psi: &StateVector4) -> Schmidt {
    let rho = partial_trace_probe(psi);
    let pairs = eig_hermitian(rho.matrix()).expect("reduced state is Hermitian");
    let top = pairs[0].value;

    // Degenerate spectrum: any photon basis diagonalizes ρ; pick |1⟩,|2⟩.
    let psi1 = if (top - 0.5).abs() < tol::IDENTITY {
        StateVector2::basis(0)
    } else {
        fix_phase(pairs[0].vector)
    };
    let psi2 = psi1.perp();

    let u1 = contract_photon(psi, &psi1);
    let c1 = (u1[0].norm_sqr() + u1[1].norm_sqr()).sqrt();
    let phi1 = StateVector2::from_unit_unchecked([u1[0] / c1, u1[1] / c1]);

    let u2 = contract_photon(psi, &psi2);
    let mut phi2 = phi1.perp();
    let c2 = phi2.components()[0].conj() * u2[0] + phi2.components()[1].conj() * u2[1];
    if c2.norm() > 0.0 {
        phi2 = phi2.phase(c2 / c2.norm());
    }
    // Ratio rather than c1² so a product state lands on exactly 1.
    let weight = c1 * c1 / (c1 * c1 + c2.norm_sqr());

    Schmidt {
        weight: weight.clamp(0.5, 1.0),
        photon: [psi1, psi2],
        probe: [phi1, phi2],
    }
}

/// S = |ψ₁φ₁⟩⟨ψ₁φ₁| − |ψ₂φ₂⟩⟨ψ₂φ₂|
pub fn adapted_observable(s: &Schmidt) -> Operator4 {
    let p1 = s.photon[0].tensor(&s.probe[0]).projector();
    let p2 = s.photon[1].tensor(&s.probe[1]).projector();
    p1 - p2
}

/// Var(S, Ψ) for the observable adapted to Ψ's own Schmidt basis; 4w(1−w).
pub fn adapted_observable_variance(psi: &StateVector4) -> f64 {
    let s = adapted_observable(&schmidt(psi));
    let mean = psi.expectation(&s).re;
    let sq = psi.expectation(&(s * s)).re;
    (sq - mean * mean).max(0.0)
}
