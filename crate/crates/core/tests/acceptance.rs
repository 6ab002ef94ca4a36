//! Acceptance criteria. Each prints one PASS/FAIL line; the test fails if any
//! criterion fails.

mod common;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, PI};
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use mzpovm::extraction::{closed_form, conditional_probabilities, extract_povm, scheme_for, standard_grid};
use mzpovm::interferometer::{final_state as lib_final_state, Experiment, MzConfig};
use mzpovm::oracle::{cross_check, direct_probabilities, grid_maximize_equator, random_density, random_pure_state, OracleConfig, SampleRng};
use mzpovm::povm::{
    joint_xz, marginal, pauli_pvm, unsharpness, DiscretePovm, PovmKind, UnsharpPair, BY_COINCIDENCE, BY_FIRST_INDEX,
    BY_SECOND_INDEX,
};
use mzpovm::qubit::{pauli, schmidt, variance, BlochVector, DensityOperator, Pauli, StateVector2, C64};
use mzpovm::relations::{
    coincidence_povm, contrasts, two_outcome_variance, distinguishability, erasure_duality, reduced_marked_state, shannon_entropy, visibility_reduced,
};

const SEED: u64 = 42;

const TOL_SHARP_EXTRACTION: f64 = 1e-12;
const TOL_CLOSED_FORM: f64 = 1e-10;
const CLOSED_FORM_BUDGET: Duration = Duration::from_secs(10);
const TOL_ORACLE: f64 = 1e-12;
const ORACLE_INPUTS: u64 = 100;
const TOL_ERASURE: f64 = 1e-12;
const JOINT_GRID: usize = 101;
const TOL_JOINT_BOUNDARY: f64 = 1e-10;
const TOL_UNSHARPNESS_SUM: f64 = 1e-12;
const RELATION_SAMPLES: u64 = 10_000;
const TOL_DUALITY_BOUND: f64 = 1e-12;
const TOL_DUALITY_EQUALITY: f64 = 1e-10;
const TOL_PURITY: f64 = 1e-10;
const TOL_VARIANCE_SUM: f64 = 1e-12;
const TOL_ENTROPY: f64 = 1e-9;
const ERASURE_SAMPLES: u64 = 1000;
const TOL_ERASURE_DUALITY: f64 = 1e-9;
const TOL_WORKED_POINT: f64 = 1e-12;
const TOL_DISTURBANCE: f64 = 1e-9;
const VERIFY_BUDGET: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn config(experiment: Experiment, delta: f64, gamma: f64, theta: f64) -> MzConfig {
    MzConfig::new(experiment, delta, gamma, theta).expect("finite angles")
}

fn povm_of(cfg: &MzConfig) -> DiscretePovm {
    extract_povm(&scheme_for(cfg)).expect("standard scheme extracts")
}

fn effect(p: &DiscretePovm, label: &str) -> M2 {
    entries(p.effect(label).unwrap_or_else(|| panic!("missing effect {label}")))
}

/// Largest entrywise deviation from the expected effects, matched by label.
fn deviation(p: &DiscretePovm, expected: &[(&str, M2)]) -> f64 {
    assert_eq!(p.len(), expected.len());
    expected
        .iter()
        .map(|(l, m)| max_diff(&effect(p, l), m))
        .fold(0.0, f64::max)
}

fn c1() -> StateVector2 {
    StateVector2::basis(0)
}

fn plus() -> StateVector2 {
    StateVector2::from_amplitudes(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)).unwrap()
}

fn probability_of(probs: &[(String, f64)], label: &str) -> f64 {
    probs.iter().find(|(l, _)| l == label).map(|(_, p)| *p).expect("label present")
}

fn path_detection() -> Outcome {
    let cfg = config(Experiment::Path, 0.0, 0.0, 0.0);
    let p = povm_of(&cfg);
    let dev = deviation(&p, &[("1", pauli_combo(0.5, 0.0, 0.0, 0.5)), ("2", pauli_combo(0.5, 0.0, 0.0, -0.5))]);
    ensure(dev <= TOL_SHARP_EXTRACTION, || format!("POVM deviates from path PVM by {dev:e}"))?;
    let d1 = probability_of(&direct_probabilities(&scheme_for(&cfg), &c1()).unwrap(), "1");
    let d1_oracle = detector_probability(&final_state(*c1().components(), 0.0, ket(1.0, 0.0), ket(1.0, 0.0)), 0);
    ensure((d1 - 1.0).abs() <= TOL_SHARP_EXTRACTION && (d1_oracle - 1.0).abs() <= TOL_SHARP_EXTRACTION, || {
        format!("p(D1 | |1>) = {d1}, reference {d1_oracle}")
    })?;
    Ok(format!("max deviation {dev:.1e}, p(D1)={d1}"))
}

fn interference_detection() -> Outcome {
    let cfg = config(Experiment::Interference, -FRAC_PI_2, 0.0, 0.0);
    let p = povm_of(&cfg);
    let dev = deviation(&p, &[("1", pauli_combo(0.5, 0.5, 0.0, 0.0)), ("2", pauli_combo(0.5, -0.5, 0.0, 0.0))]);
    ensure(dev <= TOL_SHARP_EXTRACTION, || format!("POVM deviates from sigma_x PVM by {dev:e}"))?;
    let d1 = probability_of(&direct_probabilities(&scheme_for(&cfg), &plus()).unwrap(), "1");
    let d1_oracle =
        detector_probability(&final_state(*plus().components(), -FRAC_PI_2, ket(1.0, 0.0), ket(1.0, 0.0)), 0);
    ensure((d1 - 1.0).abs() <= TOL_SHARP_EXTRACTION && (d1_oracle - 1.0).abs() <= TOL_SHARP_EXTRACTION, || {
        format!("p(D1 | (|1>+|2>)/sqrt2) = {d1}, reference {d1_oracle}")
    })?;
    Ok(format!("max deviation {dev:.1e}, p(D1)={d1}"))
}

struct Expected {
    joint: [(&'static str, M2); 4],
    detector: [(&'static str, M2); 2],
    probe: [(&'static str, M2); 2],
    coincidence: [(&'static str, M2); 2],
}

fn expected_forms(cfg: &MzConfig) -> Expected {
    let (sd, cd) = cfg.delta.sin_cos();
    let half = |x: f64, y: f64, z: f64| [("1", pauli_combo(0.5, x, y, z)), ("2", pauli_combo(0.5, -x, -y, -z))];
    match cfg.experiment {
        Experiment::Marking => {
            let (c2, s2) = ((cfg.delta / 2.0).cos().powi(2), (cfg.delta / 2.0).sin().powi(2));
            Expected {
                joint: [
                    ("11", pauli_combo(0.5 * c2, 0.0, 0.0, 0.5 * c2)),
                    ("21", pauli_combo(0.5 * s2, 0.0, 0.0, 0.5 * s2)),
                    ("12", pauli_combo(0.5 * s2, 0.0, 0.0, -0.5 * s2)),
                    ("22", pauli_combo(0.5 * c2, 0.0, 0.0, -0.5 * c2)),
                ],
                detector: half(0.0, 0.0, 0.5 * cd),
                probe: half(0.0, 0.0, 0.5),
                coincidence: [("1", pauli_combo(c2, 0.0, 0.0, 0.0)), ("2", pauli_combo(s2, 0.0, 0.0, 0.0))],
            }
        }
        Experiment::Erasure => {
            let (sg, cg) = cfg.gamma.sin_cos();
            let (x, y) = (sd * cg, sd * sg);
            Expected {
                joint: [
                    ("11", pauli_combo(0.25, -0.25 * x, -0.25 * y, 0.25 * cd)),
                    ("21", pauli_combo(0.25, 0.25 * x, 0.25 * y, -0.25 * cd)),
                    ("12", pauli_combo(0.25, 0.25 * x, 0.25 * y, 0.25 * cd)),
                    ("22", pauli_combo(0.25, -0.25 * x, -0.25 * y, -0.25 * cd)),
                ],
                detector: half(0.0, 0.0, 0.5 * cd),
                probe: half(0.0, 0.0, 0.0),
                coincidence: half(-0.5 * x, -0.5 * y, 0.0),
            }
        }
        Experiment::Quantitative => {
            let (st, ct) = cfg.theta.sin_cos();
            let x = sd * st;
            Expected {
                joint: [
                    ("11", pauli_combo(0.25 * (1.0 + ct * cd), -0.25 * x, 0.0, 0.25 * (cd + ct))),
                    ("21", pauli_combo(0.25 * (1.0 - ct * cd), 0.25 * x, 0.0, -0.25 * (cd - ct))),
                    ("12", pauli_combo(0.25 * (1.0 - ct * cd), -0.25 * x, 0.0, 0.25 * (cd - ct))),
                    ("22", pauli_combo(0.25 * (1.0 + ct * cd), 0.25 * x, 0.0, -0.25 * (cd + ct))),
                ],
                detector: half(-0.5 * x, 0.0, 0.5 * cd),
                probe: half(0.0, 0.0, 0.5 * ct),
                coincidence: [
                    ("1", pauli_combo(0.5 * (1.0 + ct * cd), 0.0, 0.0, 0.0)),
                    ("2", pauli_combo(0.5 * (1.0 - ct * cd), 0.0, 0.0, 0.0)),
                ],
            }
        }
        Experiment::Path | Experiment::Interference => unreachable!("no probe readout"),
    }
}

fn closed_form_audit() -> Outcome {
    let start = Instant::now();
    let grid = standard_grid(&[Experiment::Marking, Experiment::Erasure, Experiment::Quantitative]);
    let mut worst: f64 = 0.0;
    for cfg in &grid {
        let p = povm_of(cfg);
        let exp = expected_forms(cfg);
        let lib = closed_form(cfg).map_err(|e| e.to_string())?;
        let devs = [
            deviation(&p, &exp.joint),
            deviation(&marginal(&p, BY_FIRST_INDEX).unwrap(), &exp.detector),
            deviation(&marginal(&p, BY_SECOND_INDEX).unwrap(), &exp.probe),
            deviation(&marginal(&p, BY_COINCIDENCE).unwrap(), &exp.coincidence),
            deviation(&lib.joint, &exp.joint),
            deviation(&lib.detector, &exp.detector),
            deviation(&lib.probe, &exp.probe),
            deviation(&lib.coincidence, &exp.coincidence),
        ];
        let dev = devs.into_iter().fold(0.0, f64::max);
        ensure(dev <= TOL_CLOSED_FORM, || format!("{cfg:?}: deviation {dev:e}"))?;
        worst = worst.max(dev);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < CLOSED_FORM_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{} configs, joint + 9 marginals, max deviation {worst:.1e}, {elapsed:.2?}", grid.len()))
}

/// Readout pointers of the reference model, or `None` for detector-only readout.
fn reference_pointers(cfg: &MzConfig) -> ([C64; 2], [C64; 2], Option<[[C64; 2]; 2]>) {
    let (e1, e2) = (ket(1.0, 0.0), ket(0.0, 1.0));
    match cfg.experiment {
        Experiment::Path | Experiment::Interference => (e1, e1, None),
        Experiment::Marking => (e1, e2, Some([e1, e2])),
        Experiment::Erasure => (e1, e2, Some([erasure_pointer(cfg.gamma, 1.0), erasure_pointer(cfg.gamma, -1.0)])),
        Experiment::Quantitative => {
            let (p1, p2) = markers(cfg.theta);
            (p1, p2, Some([e1, e2]))
        }
    }
}

fn oracle_reproduction() -> Outcome {
    let grid = standard_grid(&Experiment::ALL);
    let inputs: Vec<StateVector2> = (0..ORACLE_INPUTS).map(|i| random_pure_state(SEED, i)).collect();
    let mut worst: f64 = 0.0;
    for cfg in &grid {
        let p = povm_of(cfg);
        let (p1, p2, pointers) = reference_pointers(cfg);
        for psi in &inputs {
            let state = final_state(*psi.components(), cfg.delta, p1, p2);
            for e in p.effects() {
                let b = e.label.as_bytes();
                let k = (b[0] - b'1') as usize;
                let direct = match pointers {
                    Some(q) => born(&state, k, q[(b[1] - b'1') as usize]),
                    None => detector_probability(&state, k),
                };
                let dev = (direct - expectation(&entries(&e.operator), *psi.components())).abs();
                worst = worst.max(dev);
            }
        }
    }
    ensure(worst <= TOL_ORACLE, || format!("max |<M> - <E>| = {worst:e}"))?;
    let oracle = OracleConfig::new(SEED, ORACLE_INPUTS as usize, PI / 16.0, TOL_ORACLE).unwrap();
    let mut internal: f64 = 0.0;
    for cfg in &grid {
        internal = internal.max(cross_check(cfg, &oracle).map_err(|e| e.to_string())?);
    }
    ensure(internal <= TOL_ORACLE, || format!("library cross-check deviation {internal:e}"))?;
    Ok(format!(
        "{} configs x {ORACLE_INPUTS} inputs, max deviation {worst:.1e} (library cross-check {internal:.1e})",
        grid.len()
    ))
}

fn erasure_fringes() -> Outcome {
    let cfg = config(Experiment::Erasure, -FRAC_PI_2, 0.0, 0.0);
    let p = povm_of(&cfg);
    let psi = plus();
    let q1 = conditional_probabilities(&p, "1", &psi).map_err(|e| e.to_string())?;
    let q2 = conditional_probabilities(&p, "2", &psi).map_err(|e| e.to_string())?;
    let got = [q1[0], q1[1], q2[0], q2[1]];
    let want = [1.0, 0.0, 0.0, 1.0];

    let state = final_state(*psi.components(), cfg.delta, ket(1.0, 0.0), ket(0.0, 1.0));
    let (r1, r2) = (erasure_pointer(0.0, 1.0), erasure_pointer(0.0, -1.0));
    let cond = |k: usize, q| born(&state, k, q) / (born(&state, 0, q) + born(&state, 1, q));
    let reference = [cond(0, r1), cond(1, r1), cond(0, r2), cond(1, r2)];
    for i in 0..4 {
        ensure((got[i] - want[i]).abs() <= TOL_ERASURE && (reference[i] - want[i]).abs() <= TOL_ERASURE, || {
            format!("conditionals {got:?}, reference {reference:?}")
        })?;
    }
    let out = lib_final_state(&psi, &cfg.probes(), &cfg).map_err(|e| e.to_string())?;
    let w = schmidt(&out).weight;
    ensure((w - 0.5).abs() <= TOL_ERASURE, || format!("Schmidt weight {w}"))?;
    Ok(format!("prob(D|q) = {got:?}, Schmidt weight {w}"))
}

fn joint_measurability() -> Outcome {
    let mut admissible = 0;
    let mut min_sum = f64::INFINITY;
    for i in 0..JOINT_GRID {
        for j in 0..JOINT_GRID {
            let (f, g) = (i as f64 / (JOINT_GRID - 1) as f64, j as f64 / (JOINT_GRID - 1) as f64);
            let pair = UnsharpPair::new(f, g).unwrap();
            let validates = joint_xz(&pair).is_ok_and(|p| p.validate().is_ok());
            let inside = f * f + g * g <= 1.0 + TOL_JOINT_BOUNDARY;
            // smallest eigenvalue of ¼(I ± fσx ± gσz)
            let reference = 0.25 * (1.0 - (f * f + g * g).sqrt()) >= -0.25 * TOL_JOINT_BOUNDARY;
            ensure(validates == inside && inside == reference, || {
                format!("(f, g) = ({f}, {g}): validates {validates}, inside {inside}")
            })?;
            if inside {
                admissible += 1;
                let s = unsharpness(&pair.x_observable()).unwrap() + unsharpness(&pair.z_observable()).unwrap();
                let reference = (1.0 - f * f) + (1.0 - g * g);
                ensure(s >= 1.0 - TOL_UNSHARPNESS_SUM && (s - reference).abs() <= 1e-12, || {
                    format!("(f, g) = ({f}, {g}): U_F + U_G = {s}")
                })?;
                min_sum = min_sum.min(s);
            }
        }
    }
    Ok(format!("{admissible}/{} admissible pairs, min U_F+U_G {min_sum}", JOINT_GRID * JOINT_GRID))
}

fn duality_relations() -> Outcome {
    let (mut pure, mut worst_bound, mut worst_var): (usize, f64, f64) = (0, f64::NEG_INFINITY, 0.0);
    for i in 0..RELATION_SAMPLES {
        let rho = random_density(SEED, i);
        let m = entries(rho.matrix());
        let r = bloch_of(&m);
        let r2: f64 = r.iter().map(|x| x * x).sum();
        let purity = (m[0][0] * m[0][0] + 2.0 * m[0][1].norm_sqr() + m[1][1] * m[1][1]).re;
        let cs = contrasts(&rho);
        let reference = [(m[0][0] - m[1][1]).re.abs(), 2.0 * m[0][1].re.abs(), 2.0 * m[0][1].im.abs()];
        let got = [cs.path, cs.interference_x, cs.interference_y];
        for k in 0..3 {
            ensure((got[k] - reference[k]).abs() <= 1e-12, || format!("sample {i}: contrasts {got:?} vs {reference:?}"))?;
        }
        let sum: f64 = got.iter().map(|x| x * x).sum();
        ensure(sum <= 1.0 + TOL_DUALITY_BOUND, || format!("sample {i}: C^2 sum {sum}"))?;
        let is_pure = (purity - 1.0).abs() <= TOL_PURITY;
        let saturated = 1.0 - sum < TOL_DUALITY_EQUALITY;
        ensure(is_pure == saturated, || format!("sample {i}: purity {purity}, slack {}", 1.0 - sum))?;
        pure += usize::from(is_pure);
        worst_bound = worst_bound.max(sum - 1.0);
        let var_sum: f64 = Pauli::ALL.iter().map(|&a| variance(&pauli(a), &rho).unwrap()).sum();
        let dev = (var_sum - (3.0 - r2)).abs();
        ensure(dev <= TOL_VARIANCE_SUM, || format!("sample {i}: variance sum {var_sum} vs {}", 3.0 - r2))?;
        worst_var = worst_var.max(dev);
    }
    ensure(pure > 0 && pure < RELATION_SAMPLES as usize, || format!("sample has {pure} pure states"))?;
    Ok(format!(
        "{RELATION_SAMPLES} states ({pure} pure), max C^2-1 {worst_bound:.1e}, variance identity dev {worst_var:.1e}"
    ))
}

fn entropic_relations() -> Outcome {
    let (x, y, z) = (pauli_pvm(Pauli::X), pauli_pvm(Pauli::Y), pauli_pvm(Pauli::Z));
    let entropies = |rho: &DensityOperator| {
        let r = bloch_of(&entries(rho.matrix()));
        let reference = r.map(|rk| entropy_bits(&[(1.0 + rk) / 2.0, (1.0 - rk) / 2.0]));
        let got = [shannon_entropy(&x, rho), shannon_entropy(&y, rho), shannon_entropy(&z, rho)];
        (got, reference)
    };
    let (mut min_pair, mut min_triple) = (f64::INFINITY, f64::INFINITY);
    for i in 0..RELATION_SAMPLES {
        let rho = random_density(SEED, i);
        let (h, reference) = entropies(&rho);
        for k in 0..3 {
            ensure((h[k] - reference[k]).abs() <= 1e-12, || format!("sample {i}: entropies {h:?} vs {reference:?}"))?;
        }
        let (pair, triple) = (h[2] + h[0], h.iter().sum::<f64>());
        ensure(pair >= 1.0 - TOL_ENTROPY && triple >= 2.0 - TOL_ENTROPY, || {
            format!("sample {i}: H(z)+H(x) = {pair}, triple {triple}")
        })?;
        min_pair = min_pair.min(pair);
        min_triple = min_triple.min(triple);
    }
    let s = FRAC_1_SQRT_2;
    let eigenstates = [
        (c(1.0, 0.0), c(0.0, 0.0)),
        (c(0.0, 0.0), c(1.0, 0.0)),
        (c(s, 0.0), c(s, 0.0)),
        (c(s, 0.0), c(-s, 0.0)),
        (c(s, 0.0), c(0.0, s)),
        (c(s, 0.0), c(0.0, -s)),
    ];
    for (k, (a, b)) in eigenstates.into_iter().enumerate() {
        let rho = StateVector2::from_amplitudes(a, b).unwrap().density();
        let (h, _) = entropies(&rho);
        let triple = h.iter().sum::<f64>();
        ensure((triple - 2.0).abs() <= TOL_ENTROPY, || format!("eigenstate {k}: triple {triple}"))?;
        // σz and σx eigenstates attain the pair bound
        if k < 4 {
            let pair = h[2] + h[0];
            ensure((pair - 1.0).abs() <= TOL_ENTROPY, || format!("eigenstate {k}: H(z)+H(x) = {pair}"))?;
        }
    }
    Ok(format!("{RELATION_SAMPLES} states, min H(z)+H(x) {min_pair:.6}, min triple {min_triple:.6}; attained at eigenstates"))
}

fn quantitative_erasure() -> Outcome {
    let oracle = OracleConfig::default();
    let (mut worst, mut worst_dist) = (0.0_f64, 0.0_f64);
    for i in 0..ERASURE_SAMPLES {
        let psi = random_pure_state(SEED, i);
        let theta = PI * SampleRng::new(SEED ^ 0x51, i).uniform();
        let cfg = config(Experiment::Quantitative, -FRAC_PI_2, 0.0, theta);
        let probes = cfg.probes();
        let d = distinguishability(&psi, &probes.p1, &probes.p2).d;
        let rho_e = reduced_marked_state(&psi, &probes.p1, &probes.p2);
        let (ve, _) = visibility_reduced(&rho_e);
        let (a2, b2) = (psi.alpha().norm_sqr(), psi.beta().norm_sqr());
        let (st, ct) = theta.sin_cos();
        let d_ref = (((a2 - b2) * st).powi(2) + ct * ct).sqrt();
        let ve_ref = 2.0 * (a2 * b2).sqrt() * st;
        ensure((d - d_ref).abs() <= 1e-12 && (ve - ve_ref).abs() <= 1e-12, || {
            format!("sample {i}: D {d} vs {d_ref}, V_e {ve} vs {ve_ref}")
        })?;
        let dev = (d * d + ve * ve - 1.0).abs();
        ensure(dev <= TOL_ERASURE_DUALITY, || format!("sample {i}: D^2+V_e^2-1 = {dev:e}"))?;
        worst = worst.max(dev);

        let [_, disturbance] = erasure_duality(&psi, &probes.p1, &probes.p2).map_err(|e| e.to_string())?;
        let mut dev = (disturbance.lhs - 1.0).abs();
        if i % 10 == 0 {
            // optimal interference direction found by search instead of the analytic phase
            let r = bloch_of(&entries(rho_e.matrix()));
            let (best, _) = grid_maximize_equator(|n: &BlochVector| n.dot(&r).abs(), &oracle);
            let var_n = 1.0 - best * best;
            let dir = distinguishability(&psi, &probes.p1, &probes.p2);
            let var_h = match dir.r0 {
                Some(r0) => {
                    let h = coincidence_povm(&probes.p1, &probes.p2, &r0).unwrap();
                    two_outcome_variance(&h, &psi.density()).unwrap()
                }
                None => 1.0,
            };
            dev = dev.max((var_h + var_n - 1.0).abs());
        }
        ensure(dev <= TOL_DISTURBANCE, || format!("sample {i}: disturbance sum off by {dev:e}"))?;
        worst_dist = worst_dist.max(dev);
    }
    let cfg = config(Experiment::Quantitative, -FRAC_PI_2, 0.0, FRAC_PI_3);
    let probes = cfg.probes();
    let psi = plus();
    let d = distinguishability(&psi, &probes.p1, &probes.p2).d;
    let (ve, _) = visibility_reduced(&reduced_marked_state(&psi, &probes.p1, &probes.p2));
    ensure((d - 0.5).abs() <= TOL_WORKED_POINT && (ve - 3f64.sqrt() / 2.0).abs() <= TOL_WORKED_POINT, || {
        format!("theta=pi/3: D {d}, V_e {ve}")
    })?;
    Ok(format!(
        "{ERASURE_SAMPLES} samples, max |D^2+V_e^2-1| {worst:.1e}, max disturbance dev {worst_dist:.1e}; theta=pi/3: D={d:.12}, V_e={ve:.12}"
    ))
}

fn kind(p: &DiscretePovm) -> PovmKind {
    p.validate().expect("valid POVM").kind()
}

fn limit_complementarity() -> Outcome {
    let at = |theta: f64| {
        let p = povm_of(&config(Experiment::Quantitative, -FRAC_PI_2, 0.0, theta));
        (kind(&marginal(&p, BY_FIRST_INDEX).unwrap()), kind(&marginal(&p, BY_SECOND_INDEX).unwrap()))
    };
    let (f0, g0) = at(0.0);
    let (f1, g1) = at(FRAC_PI_2);
    ensure(f0 == PovmKind::Trivial && g0 == PovmKind::Sharp, || format!("theta=0: F {f0:?}, G {g0:?}"))?;
    ensure(f1 == PovmKind::Sharp && g1 == PovmKind::Trivial, || format!("theta=pi/2: F {f1:?}, G {g1:?}"))?;
    Ok(format!("theta=0: F {f0:?}, G {g0:?}; theta=pi/2: F {f1:?}, G {g1:?}"))
}

fn determinism() -> Outcome {
    let run = || {
        let start = Instant::now();
        let out = Command::new(env!("CARGO_BIN_EXE_mzpovm"))
            .args(["verify", "--seed", "42"])
            .output()
            .expect("binary runs");
        (out, start.elapsed())
    };
    let (a, ta) = run();
    let (b, tb) = run();
    ensure(a.status.success() && b.status.success(), || {
        format!("verify exited {:?}/{:?}:\n{}", a.status.code(), b.status.code(), String::from_utf8_lossy(&a.stdout))
    })?;
    ensure(a.stdout == b.stdout, || "reports differ between runs".into())?;
    ensure(ta < VERIFY_BUDGET && tb < VERIFY_BUDGET, || format!("runs took {ta:?} and {tb:?}"))?;
    let summary = String::from_utf8_lossy(&a.stdout).lines().last().unwrap_or_default().to_string();
    Ok(format!("identical {} byte reports ({summary}), {ta:.2?} / {tb:.2?}", a.stdout.len()))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 11] = [
        ("path detection", path_detection),
        ("interference detection", interference_detection),
        ("closed-form audit", closed_form_audit),
        ("oracle probability reproduction", oracle_reproduction),
        ("erasure fringes", erasure_fringes),
        ("joint measurability", joint_measurability),
        ("duality relations", duality_relations),
        ("entropic relations", entropic_relations),
        ("quantitative erasure", quantitative_erasure),
        ("limit-case complementarity", limit_complementarity),
        ("determinism", determinism),
    ];
    let mut failures = Vec::new();
    let mut err = std::io::stderr();
    for (name, check) in criteria {
        let line = match check() {
            Ok(detail) => format!("PASS  {name:<32}  {detail}"),
            Err(why) => {
                failures.push(name);
                format!("FAIL  {name:<32}  {why}")
            }
        };
        // written past the test harness capture so every line is always shown
        let _ = writeln!(err, "{line}");
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
