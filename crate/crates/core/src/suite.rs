//! The invariant suite behind `mzpovm verify`.
//!
//! Every check is deterministic for a given seed; output carries no timings.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::complementarity::{fourier_partner, is_mutually_unbiased, probabilistically_complementary, OrthonormalBasis};
use crate::error::Result;
use crate::extraction::{closed_form, extract_povm, scheme_for, scheme_with_pointers, standard_grid};
use crate::interferometer::{marking_unitary, marking_unitary_with, mz_evolution, Completion, Experiment, MzConfig, ProbeTriple};
use crate::oracle::{
    cross_check_povm, grid_maximize, grid_maximize_equator, random_density, random_hermitian4,
    random_pure_state, random_state4, OracleConfig, SampleRng,
};
use crate::povm::{
    contrast, joint_xz, jointly_measurable, marginal, pauli_pvm, smear, unbiased_pair,
    unsharpness, DiscretePovm, Effect, PovmKind, StochasticMatrix, UnsharpPair, BY_FIRST_INDEX,
    BY_SECOND_INDEX,
};
use crate::qubit::{
    adapted_observable_variance, bloch_from_density, density_from_bloch, eig_hermitian, pauli,
    partial_trace_probe, reconstruct, schmidt, variance, BlochVector, Operator2, Pauli, StateVector2, C64,
};
use crate::relations::{
    coincidence_povm, contrasts, distinguishability, distinguishability_closed_form,
    entropic_bound, erasure_duality, mixed_duality, reduced_marked_state, shannon_entropy,
    triple_relations, two_outcome_variance, variance_ur, visibility_reduced, MarkerMixture,
};

/// Size of the random-state samples used by the relation checks.
pub const RELATION_SAMPLES: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    /// Random inputs per configuration in the oracle cross-check.
    pub samples: usize,
    /// Bound on the oracle cross-check deviation.
    pub tol: f64,
    /// If set, add this multiple of I to one extracted effect before cross-checking.
    pub perturb: Option<f64>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            samples: 100,
            tol: 1e-10,
            perturb: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self { name, passed, detail }
    }

    /// Passes iff `worst ≤ bound`.
    fn bounded(name: &'static str, worst: f64, bound: f64) -> Self {
        Self::new(name, worst <= bound, format!("max deviation {worst:.3e} (bound {bound:.0e})"))
    }
}

fn failed(name: &'static str, err: crate::Error) -> CheckResult {
    CheckResult::new(name, false, format!("error: {err}"))
}

fn guard(name: &'static str, f: impl FnOnce() -> Result<CheckResult>) -> CheckResult {
    f().unwrap_or_else(|e| failed(name, e))
}

/// Maximum that propagates NaN, so a NaN deviation fails its bound.
fn max_of(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, |a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) })
}

pub fn run_suite(opts: &SuiteOptions) -> Vec<CheckResult> {
    let seed = opts.seed;
    vec![
        pauli_algebra(),
        guard("qubit.bloch_roundtrip", || bloch_roundtrip(seed)),
        guard("qubit.pauli_variance", || pauli_variances(seed)),
        guard("qubit.eigen_reconstruction", || eigen_reconstruction(seed)),
        schmidt_check(seed),
        guard("povm.pauli_pvms", pauli_pvms),
        guard("povm.smearing", smearing),
        guard("povm.joint_measurability", joint_measurability),
        guard("complementarity.fourier_mub", fourier_mub),
        guard("complementarity.projection_meets", projection_meets),
        interferometer_unitaries(seed),
        guard("extraction.closed_form_grid", closed_form_grid),
        guard("extraction.normalization", extraction_normalization),
        guard("extraction.pointer_freedom", || pointer_freedom(seed)),
        guard("extraction.erasure_fringes", erasure_fringes),
        guard("oracle.cross_check", || cross_check_grid(opts)),
        guard("oracle.grid_maximize", || maximizer_agreement(seed)),
        variance_relation(seed),
        duality_relations(seed),
        guard("relations.entropic", || entropic_relations(seed)),
        guard("relations.erasure_duality", || erasure_dualities(seed)),
        guard("relations.mixed_markers", || mixed_markers(seed)),
        guard("relations.limit_complementarity", limit_complementarity),
    ]
}

/// Fixed-width pass/fail table followed by a summary line.
pub fn format_table(results: &[CheckResult]) -> String {
    let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for r in results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{status}  {:<width$}  {}", r.name, r.detail);
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let _ = writeln!(out, "{passed}/{} checks passed", results.len());
    out
}

fn pauli_algebra() -> CheckResult {
    let (x, y, z) = (pauli(Pauli::X), pauli(Pauli::Y), pauli(Pauli::Z));
    let i2 = C64::new(0.0, 2.0);
    let worst = [
        x.commutator(&y).max_abs_diff(&z.scale_complex(i2)),
        y.commutator(&z).max_abs_diff(&x.scale_complex(i2)),
        z.commutator(&x).max_abs_diff(&y.scale_complex(i2)),
        (x * x).max_abs_diff(&Operator2::identity()),
    ];
    CheckResult::bounded("qubit.pauli_algebra", max_of(worst.into_iter()), 1e-15)
}

fn bloch_roundtrip(seed: u64) -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    for i in 0..RELATION_SAMPLES {
        let rho = random_density(seed, i);
        let back = density_from_bloch(&BlochVector::from_array(bloch_from_density(&rho).components())?);
        worst = worst.max(back.matrix().max_abs_diff(rho.matrix()));
    }
    Ok(CheckResult::bounded("qubit.bloch_roundtrip", worst, 1e-12))
}

fn pauli_variances(seed: u64) -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    for i in 0..RELATION_SAMPLES {
        let rho = random_density(seed, i);
        let r = rho.bloch().components();
        for (k, axis) in Pauli::ALL.into_iter().enumerate() {
            worst = worst.max((variance(&pauli(axis), &rho)? - (1.0 - r[k] * r[k])).abs());
        }
    }
    Ok(CheckResult::bounded("qubit.pauli_variance", worst, 1e-12))
}

fn eigen_reconstruction(seed: u64) -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    let mut sorted = true;
    for i in 0..1000 {
        let m = random_hermitian4(seed, i);
        let pairs = eig_hermitian(&m)?;
        sorted &= pairs.windows(2).all(|w| w[0].value >= w[1].value);
        worst = worst.max(reconstruct(&pairs).max_abs_diff(&m));
    }
    let mut r = CheckResult::bounded("qubit.eigen_reconstruction", worst, 1e-10);
    if !sorted {
        r.passed = false;
        r.detail.push_str("; eigenvalues not sorted");
    }
    Ok(r)
}

fn schmidt_check(seed: u64) -> CheckResult {
    let worst = max_of((0..1000).map(|i| {
        let psi = random_state4(seed, i);
        let s = schmidt(&psi);
        let rebuilt = s.reconstruct();
        let recon = max_of(
            psi.components()
                .iter()
                .zip(rebuilt.iter())
                .map(|(a, b)| (a - b).norm()),
        );
        let top = eig_hermitian(partial_trace_probe(&psi).matrix())
            .map(|p| p[0].value)
            .unwrap_or(f64::NAN);
        let var = adapted_observable_variance(&psi) - 4.0 * s.weight * (1.0 - s.weight);
        max_of([recon, (s.weight - top).abs(), var.abs()].into_iter())
    }));
    CheckResult::bounded("qubit.schmidt", worst, 1e-10)
}

fn pauli_pvms() -> Result<CheckResult> {
    let mut ok = true;
    for axis in Pauli::ALL {
        let c = pauli_pvm(axis).validate()?;
        ok &= c.kind() == PovmKind::Sharp;
    }
    ok &= unbiased_pair([0.0; 3]).validate()?.kind() == PovmKind::Trivial;
    ok &= unbiased_pair([0.0, 0.0, 0.5]).validate()?.kind() == PovmKind::Unsharp;
    Ok(CheckResult::new("povm.pauli_pvms", ok, "sharp / trivial / unsharp classification".into()))
}

fn smearing() -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    for step in 0..=20 {
        let f = -1.0 + 0.1 * step as f64;
        for axis in Pauli::ALL {
            let s = smear(&pauli_pvm(axis), &StochasticMatrix::symmetric_binary(f)?)?;
            s.validate()?;
            let mut u = [0.0; 3];
            u[axis as usize] = f;
            worst = worst.max(s.max_abs_diff(&unbiased_pair(u)));
        }
    }
    Ok(CheckResult::bounded("povm.smearing", worst, 1e-12))
}

fn joint_measurability() -> Result<CheckResult> {
    let mut mismatches = 0;
    let mut worst_marginal: f64 = 0.0;
    let mut worst_unsharp: f64 = f64::INFINITY;
    for i in 0..=100 {
        for j in 0..=100 {
            let (f, g) = (i as f64 / 100.0, j as f64 / 100.0);
            let pair = UnsharpPair::new(f, g)?;
            let admissible = f * f + g * g <= 1.0 + 1e-10;
            let joint = joint_xz(&pair);
            let valid = joint.as_ref().map(|p| p.validate().is_ok()).unwrap_or(false);
            if valid != admissible || jointly_measurable(&pair) != admissible {
                mismatches += 1;
            }
            if let Ok(p) = joint {
                worst_marginal = worst_marginal
                    .max(marginal(&p, BY_FIRST_INDEX)?.max_abs_diff(&pair.x_observable()))
                    .max(marginal(&p, BY_SECOND_INDEX)?.max_abs_diff(&pair.z_observable()));
                let u = unsharpness(&pair.x_observable())? + unsharpness(&pair.z_observable())?;
                worst_unsharp = worst_unsharp.min(u);
            }
        }
    }
    let passed = mismatches == 0 && worst_marginal <= 1e-12 && worst_unsharp >= 1.0 - 1e-12;
    Ok(CheckResult::new(
        "povm.joint_measurability",
        passed,
        format!(
            "101x101 grid: {mismatches} mismatches, marginal dev {worst_marginal:.3e}, min U_F+U_G {worst_unsharp:.12}"
        ),
    ))
}

fn fourier_mub() -> Result<CheckResult> {
    let mut ok = true;
    for n in 2..=crate::complementarity::MAX_DIMENSION {
        let std = OrthonormalBasis::standard(n)?;
        let f = fourier_partner(&std)?;
        ok &= is_mutually_unbiased(&std, &f, 1e-10)?;
        ok &= !is_mutually_unbiased(&std, &std, 1e-10)?;
    }
    Ok(CheckResult::new("complementarity.fourier_mub", ok, "dimensions 2..=16".into()))
}

fn projection_meets() -> Result<CheckResult> {
    let half = |a: Pauli, s: f64| (Operator2::identity() + pauli(a).scale(s)).scale(0.5);
    let mut ok = probabilistically_complementary(&half(Pauli::Z, 1.0), &half(Pauli::X, 1.0))?;
    ok &= probabilistically_complementary(&half(Pauli::Y, -1.0), &half(Pauli::X, 1.0))?;
    ok &= !probabilistically_complementary(&half(Pauli::Z, 1.0), &half(Pauli::Z, 1.0))?;
    ok &= !probabilistically_complementary(&half(Pauli::Z, 1.0), &half(Pauli::Z, -1.0))?;
    Ok(CheckResult::new("complementarity.projection_meets", ok, "sz/sx, sy/sx, sz/sz, sz/(I-sz)".into()))
}

fn interferometer_unitaries(seed: u64) -> CheckResult {
    let mut worst = max_of(crate::extraction::GRID_ANGLES.iter().map(|&d| mz_evolution(d).unitarity_defect()));
    for i in 0..200 {
        let probes = ProbeTriple::new(
            random_pure_state(seed, 3 * i),
            random_pure_state(seed, 3 * i + 1),
            random_pure_state(seed, 3 * i + 2),
        );
        let std = marking_unitary(&probes);
        let phased = marking_unitary_with(&probes, Completion::Phased(0.1 * i as f64));
        worst = worst.max(std.unitarity_defect()).max(phased.unitarity_defect());
        for k in 0..2 {
            let input = StateVector2::basis(k).tensor(&probes.p0);
            let d = match (input.evolve(&std), input.evolve(&phased)) {
                (Ok(a), Ok(b)) => a.distance(&b),
                _ => f64::INFINITY,
            };
            worst = worst.max(d);
        }
    }
    CheckResult::bounded("interferometer.unitarity", worst, 1e-12)
}

const MARKED: [Experiment; 3] = [Experiment::Marking, Experiment::Erasure, Experiment::Quantitative];

fn closed_form_grid() -> Result<CheckResult> {
    let grid = standard_grid(&MARKED);
    let devs = grid
        .par_iter()
        .map(|config| {
            let cf = closed_form(config)?;
            let ex = extract_povm(&scheme_for(config))?;
            Ok(ex.max_abs_diff(&cf.joint).max(cf.marginal_consistency()?))
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut r = CheckResult::bounded("extraction.closed_form_grid", max_of(devs.into_iter()), 1e-10);
    r.detail = format!("{} configs, {}", grid.len(), r.detail);
    Ok(r)
}

fn extraction_normalization() -> Result<CheckResult> {
    let grid = standard_grid(&Experiment::ALL);
    let devs = grid
        .par_iter()
        .map(|config| {
            let p = extract_povm(&scheme_for(config))?;
            p.validate()?;
            Ok(p.sum().max_abs_diff(&Operator2::identity()))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(CheckResult::bounded("extraction.normalization", max_of(devs.into_iter()), 1e-12))
}

fn pointer_freedom(seed: u64) -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let mut rng = SampleRng::new(seed.wrapping_add(1), i);
        let config = MzConfig::new(
            Experiment::Quantitative,
            PI * (2.0 * rng.uniform() - 1.0),
            0.0,
            PI * rng.uniform(),
        )?;
        let r1 = random_pure_state(seed.wrapping_add(2), i);
        let p = extract_povm(&scheme_with_pointers(&config, [r1, r1.perp()])?)?;
        let g = marginal(&p, BY_SECOND_INDEX)?;
        let (a1, u1) = g.effects()[0].operator.bloch_form();
        let (a2, u2) = g.effects()[1].operator.bloch_form();
        // Same direction with opposite sign, bias opposite, and that direction is the path axis.
        worst = worst
            .max((a1 + a2 - 2.0).abs())
            .max(max_of((0..3).map(|k| (u1[k] + u2[k]).abs())))
            .max(u1[0].abs())
            .max(u1[1].abs());
    }
    Ok(CheckResult::bounded("extraction.pointer_freedom", worst, 1e-12))
}

fn erasure_fringes() -> Result<CheckResult> {
    let config = MzConfig::new(Experiment::Erasure, -FRAC_PI_2, 0.0, 0.0)?;
    let p = extract_povm(&scheme_for(&config))?;
    let psi = StateVector2::normalize([C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)])?;
    let q1 = crate::extraction::conditional_probabilities(&p, "1", &psi)?;
    let q2 = crate::extraction::conditional_probabilities(&p, "2", &psi)?;
    let out = crate::interferometer::final_state(&psi, &config.probes(), &config)?;
    let w = schmidt(&out).weight;
    let worst = max_of(
        [(q1[0] - 1.0).abs(), q1[1].abs(), q2[0].abs(), (q2[1] - 1.0).abs(), (w - 0.5).abs()].into_iter(),
    );
    Ok(CheckResult::bounded("extraction.erasure_fringes", worst, 1e-12))
}

fn cross_check_grid(opts: &SuiteOptions) -> Result<CheckResult> {
    let oracle = OracleConfig::new(opts.seed, opts.samples.max(1), PI / 16.0, opts.tol.max(f64::MIN_POSITIVE))?;
    let grid = standard_grid(&Experiment::ALL);
    let devs = grid
        .par_iter()
        .enumerate()
        .map(|(i, config)| {
            let scheme = scheme_for(config);
            let mut povm = extract_povm(&scheme)?;
            if let (0, Some(eps)) = (i, opts.perturb) {
                let mut effects = povm.effects().to_vec();
                let first = &effects[0];
                effects[0] = Effect::new(first.label.clone(), first.operator + Operator2::identity().scale(eps));
                povm = DiscretePovm::new(effects);
            }
            cross_check_povm(&scheme, &povm, &oracle)
        })
        .collect::<Result<Vec<f64>>>()?;
    let mut r = CheckResult::bounded("oracle.cross_check", max_of(devs.into_iter()), opts.tol);
    r.detail = format!("{} configs x {} inputs, {}", grid.len(), oracle.samples, r.detail);
    Ok(r)
}

fn maximizer_agreement(seed: u64) -> Result<CheckResult> {
    let oracle = OracleConfig { seed, ..OracleConfig::default() };
    let devs = (0..50u64)
        .into_par_iter()
        .map(|i| {
            // Contrast of a random two-outcome POVM ½((1+b)I + u·σ), scaled to stay valid.
            let mut rng = SampleRng::new(seed.wrapping_add(3), i);
            let dir = random_pure_state(seed.wrapping_add(4), i).bloch().components();
            let len = 0.9 * rng.uniform();
            let b = (1.0 - len) * (2.0 * rng.uniform() - 1.0);
            let e1 = Operator2::from_bloch_form(1.0 + b, dir.map(|x| x * len));
            let p = DiscretePovm::from_operators([("1", e1), ("2", Operator2::identity() - e1)]);
            let (c_grid, _) = grid_maximize(
                |n| {
                    let pr = p.probabilities(&density_from_bloch(n));
                    (pr[0] - pr[1]).abs()
                },
                &oracle,
            );
            let dc = (c_grid - contrast(&p)?).abs();

            // Correct-inference probability over pointer directions.
            let psi = random_pure_state(seed.wrapping_add(5), i);
            let (p1, p2) = crate::interferometer::marker_states(PI * rng.uniform());
            let dist = distinguishability(&psi, &p1, &p2);
            let (a2, b2) = (psi.alpha().norm_sqr(), psi.beta().norm_sqr());
            let (v1, v2) = (p1.bloch(), p2.bloch());
            let (l_grid, _) = grid_maximize(
                |r| 0.5 * (1.0 + a2 * r.dot(&v1.components()) - b2 * r.dot(&v2.components())),
                &oracle,
            );
            let dl = (l_grid - dist.l).abs();

            // Visibility of the reduced state over equatorial directions.
            let rho_e = reduced_marked_state(&psi, &p1, &p2);
            let (v_grid, _) = grid_maximize_equator(
                |n| rho_e.expectation_complex(&n.sigma()).re.abs(),
                &oracle,
            );
            let dv = (v_grid - visibility_reduced(&rho_e).0).abs();
            Ok(dc.max(dl).max(dv))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(CheckResult::bounded("oracle.grid_maximize", max_of(devs.into_iter()), 1e-6))
}

fn variance_relation(seed: u64) -> CheckResult {
    let mut min_slack = f64::INFINITY;
    let mut identity_dev: f64 = 0.0;
    let mut pure_slack: f64 = 0.0;
    for i in 0..RELATION_SAMPLES {
        let rho = random_density(seed, i);
        let v = variance_ur(&rho);
        min_slack = min_slack.min(v.relation.slack);
        let r2 = rho.bloch().length().powi(2);
        identity_dev = identity_dev
            .max((v.identity_rhs - v.relation.rhs).abs())
            .max((v.relation.slack - (1.0 - r2)).abs());
        if i % 2 == 0 {
            pure_slack = pure_slack.max(v.relation.slack.abs());
        }
    }
    let passed = min_slack >= -1e-12 && identity_dev <= 1e-12 && pure_slack < 1e-10;
    CheckResult::new(
        "relations.variance_ur",
        passed,
        format!("min slack {min_slack:.3e}, identity dev {identity_dev:.3e}, pure-state slack {pure_slack:.3e}"),
    )
}

fn duality_relations(seed: u64) -> CheckResult {
    let mut over: f64 = f64::NEG_INFINITY;
    let mut var_dev: f64 = 0.0;
    let mut iff_failures = 0;
    for i in 0..RELATION_SAMPLES {
        let rho = random_density(seed, i);
        let c = contrasts(&rho);
        let c2 = c.path.powi(2) + c.interference_x.powi(2) + c.interference_y.powi(2);
        over = over.max(c2 - 1.0);
        let rel = triple_relations(&rho);
        let r2 = rho.bloch().length().powi(2);
        var_dev = var_dev.max((rel[1].lhs - (3.0 - r2)).abs());
        let equality = (1.0 - c2).abs() < 1e-10;
        let pure = (rho.purity() - 1.0).abs() < 1e-10;
        if equality != pure {
            iff_failures += 1;
        }
    }
    let passed = over <= 1e-12 && var_dev <= 1e-12 && iff_failures == 0;
    CheckResult::new(
        "relations.duality",
        passed,
        format!("max excess {over:.3e}, variance-sum dev {var_dev:.3e}, equality/purity mismatches {iff_failures}"),
    )
}

fn entropic_relations(seed: u64) -> Result<CheckResult> {
    let (x, y, z) = (pauli_pvm(Pauli::X), pauli_pvm(Pauli::Y), pauli_pvm(Pauli::Z));
    let mut pair_min = f64::INFINITY;
    let mut triple_min = f64::INFINITY;
    let mut bound_dev: f64 = 0.0;
    for i in 0..RELATION_SAMPLES {
        let rho = random_density(seed, i);
        pair_min = pair_min.min(shannon_entropy(&z, &rho) + shannon_entropy(&x, &rho));
        triple_min = triple_min.min(shannon_entropy(&x, &rho) + shannon_entropy(&y, &rho) + shannon_entropy(&z, &rho));
        if i % 2 == 0 {
            let psi = random_pure_state(seed, i);
            bound_dev = bound_dev.max((entropic_bound(&z, &x, &psi)?.rhs - 1.0).abs());
        }
    }
    // Attainment at the six Pauli eigenstates.
    let mut attain: f64 = 0.0;
    for axis in Pauli::ALL {
        for s in [1.0, -1.0] {
            let mut r = [0.0; 3];
            r[axis as usize] = s;
            let rho = density_from_bloch(&BlochVector::from_array(r)?);
            let h3 = shannon_entropy(&x, &rho) + shannon_entropy(&y, &rho) + shannon_entropy(&z, &rho);
            attain = attain.max((h3 - 2.0).abs());
            if axis != Pauli::Y {
                let h2 = shannon_entropy(&z, &rho) + shannon_entropy(&x, &rho);
                attain = attain.max((h2 - 1.0).abs());
            }
        }
    }
    let passed = pair_min >= 1.0 - 1e-9 && triple_min >= 2.0 - 1e-9 && attain <= 1e-9 && bound_dev <= 1e-12;
    Ok(CheckResult::new(
        "relations.entropic",
        passed,
        format!(
            "min H(sz)+H(sx) {pair_min:.12}, min triple {triple_min:.12}, attainment dev {attain:.3e}, MUB bound dev {bound_dev:.3e}"
        ),
    ))
}

fn erasure_dualities(seed: u64) -> Result<CheckResult> {
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let psi = random_pure_state(seed.wrapping_add(6), i);
        let theta = PI * SampleRng::new(seed.wrapping_add(7), i).uniform();
        let (p1, p2) = crate::interferometer::marker_states(theta);
        for r in erasure_duality(&psi, &p1, &p2)? {
            worst = worst.max(r.slack);
        }
        let d = distinguishability(&psi, &p1, &p2);
        worst = worst.max((d.d - distinguishability_closed_form(&psi, &p1, &p2)).abs());
        if let Some(r0) = d.r0 {
            let var = two_outcome_variance(&coincidence_povm(&p1, &p2, &r0)?, &psi.density())?;
            worst = worst.max((var - (1.0 - d.d * d.d)).abs());
        }
    }
    // Worked point: α = β = 1/√2, θ = π/3.
    let even = StateVector2::normalize([C64::new(1.0, 0.0), C64::new(1.0, 0.0)])?;
    let (p1, p2) = crate::interferometer::marker_states(PI / 3.0);
    let d = distinguishability(&even, &p1, &p2).d;
    let ve = visibility_reduced(&reduced_marked_state(&even, &p1, &p2)).0;
    let point = (d - 0.5).abs().max((ve - 3f64.sqrt() / 2.0).abs());
    let passed = worst <= 1e-9 && point <= 1e-12;
    Ok(CheckResult::new(
        "relations.erasure_duality",
        passed,
        format!("1000 samples: max dev {worst:.3e}; worked point dev {point:.3e}"),
    ))
}

fn mixed_markers(seed: u64) -> Result<CheckResult> {
    let mut max_lhs = f64::NEG_INFINITY;
    for i in 0..100 {
        let psi = random_pure_state(seed.wrapping_add(8), i);
        let mut rng = SampleRng::new(seed.wrapping_add(9), i);
        let (a1, a2) = crate::interferometer::marker_states(0.1 + 1.2 * rng.uniform());
        let b1 = random_pure_state(seed.wrapping_add(10), i);
        let w = 0.2 + 0.6 * rng.uniform();
        let mix = [
            MarkerMixture { weight: w, p1: a1, p2: a2 },
            MarkerMixture { weight: 1.0 - w, p1: b1, p2: b1.perp() },
        ];
        max_lhs = max_lhs.max(mixed_duality(&psi, &mix)?.lhs);
    }
    Ok(CheckResult::new(
        "relations.mixed_markers",
        max_lhs < 1.0,
        format!("max D^2+V_e^2 over mixtures {max_lhs:.12}"),
    ))
}

fn limit_complementarity() -> Result<CheckResult> {
    let kinds = |theta: f64| -> Result<(PovmKind, PovmKind)> {
        let config = MzConfig::new(Experiment::Quantitative, -FRAC_PI_2, 0.0, theta)?;
        let p = extract_povm(&scheme_for(&config))?;
        let f = marginal(&p, BY_FIRST_INDEX)?.validate()?.kind();
        let g = marginal(&p, BY_SECOND_INDEX)?.validate()?.kind();
        Ok((f, g))
    };
    let zero = kinds(0.0)?;
    let right = kinds(FRAC_PI_2)?;
    let passed = zero == (PovmKind::Trivial, PovmKind::Sharp) && right == (PovmKind::Sharp, PovmKind::Trivial);
    Ok(CheckResult::new(
        "relations.limit_complementarity",
        passed,
        format!("theta=0: F {}, G {}; theta=pi/2: F {}, G {}", zero.0, zero.1, right.0, right.1),
    ))
}
