//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::process::Command;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use qgrav::causal::{
    causal_game_classical_max, causal_game_simulate, metric_factor, quantum_switch, signal_order,
    switch_map, temporal_bell_protocol, time_deficit, CausalGameStrategy, GravitationalScenario,
    SignalOrder, SwitchSpec, CAUSAL_BOUND,
};
use qgrav::constants::Constants;
use qgrav::gates::Circuit;
use qgrav::gie::{gie_phase, gie_phase_sweep, GieParams, GieVariant};
use qgrav::interferometry::{mz_sweep, stern_gerlach_chain, Axis, Shots, SternGerlachChain};
use qgrav::nonlocality::{
    bell_state, chsh_value, classical_chsh_max, lhv_correlators, quantum_chsh, BellKind,
    ChshQuantumStrategy, LhvModel, CLASSICAL_BOUND,
};
use qgrav::quantum::{Operator, StateVector, Tensor};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exact analytic agreement.
const TOL_ANALYTIC: f64 = 1e-12;
/// Structural invariants and headline values.
const TOL_VALUE: f64 = 1e-9;
/// Monte Carlo acceptance band in standard deviations.
const SIGMAS: f64 = 4.0;
/// Shots or rounds for every Monte Carlo check.
const SHOTS: u64 = 100_000;
/// Relative agreement with the scalar redshift oracle.
const TOL_REDSHIFT: f64 = 0.01;
/// Wall-clock budget for the alphabet-4 exhaustive search.
const GAME_BUDGET: Duration = Duration::from_secs(60);

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, what: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn binomial_ok(count: u64, n: u64, p: f64) -> bool {
    let sigma = (n as f64 * p * (1.0 - p)).sqrt();
    (count as f64 - n as f64 * p).abs() <= SIGMAS * sigma
}

fn mach_zehnder() -> Outcome {
    let grid: Vec<f64> = (0..256).map(|k| 2.0 * PI * k as f64 / 256.0).collect();
    for r in mz_sweep(&grid, Shots::Analytic, 0).map_err(|e| e.to_string())? {
        let expected = (1.0 + r.phi.cos()) / 2.0;
        check((r.p_d1 - expected).abs() < TOL_ANALYTIC, || {
            format!("P_D1({}) = {}", r.phi, r.p_d1)
        })?;
    }
    for r in mz_sweep(&grid, Shots::MonteCarlo(SHOTS), 1).map_err(|e| e.to_string())? {
        let (d1, _) = r.counts.expect("shots requested");
        check(binomial_ok(d1, SHOTS, r.p_d1), || {
            format!("n_D1 = {d1} at φ = {}", r.phi)
        })?;
    }
    let zero = mz_sweep(&[0.0], Shots::Analytic, 0).map_err(|e| e.to_string())?;
    check(zero[0].p_d1 == 1.0, || {
        format!("P_D1(0) = {}", zero[0].p_d1)
    })
}

fn stern_gerlach() -> Outcome {
    let zz = stern_gerlach_chain(&SternGerlachChain::new(vec![Axis::Z, Axis::Z], SHOTS, 2))
        .map_err(|e| e.to_string())?;
    for first in [false, true] {
        if let Some((f, _)) = zz.conditional_up(1, &[first]) {
            let repeat = if first { 1.0 - f } else { f };
            check(repeat == 1.0, || format!("(z,z) repeat frequency {repeat}"))?;
        }
    }
    let zxz = stern_gerlach_chain(&SternGerlachChain::new(
        vec![Axis::Z, Axis::X, Axis::Z],
        SHOTS,
        3,
    ))
    .map_err(|e| e.to_string())?;
    let (up, _) = zxz.stage_counts(2);
    check(binomial_ok(up, SHOTS, 0.5), || {
        format!("(z,x,z) final up count {up}")
    })
}

fn chsh_classical() -> Outcome {
    let max = classical_chsh_max();
    check(max.value == 2.0 && max.enumerated == 16, || {
        format!("max {} over {}", max.value, max.enumerated)
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..10_000 {
        let n = rng.random_range(1..=16);
        let m = LhvModel::random(&mut rng, n);
        let v = chsh_value(&lhv_correlators(&m).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        check(v <= CLASSICAL_BOUND + TOL_VALUE, || {
            format!("model {i} reaches {v}")
        })?;
    }
    Ok(())
}

fn chsh_quantum() -> Outcome {
    let s =
        ChshQuantumStrategy::standard(bell_state(BellKind::PhiPlus)).map_err(|e| e.to_string())?;
    let v = quantum_chsh(&s).map_err(|e| e.to_string())?.value;
    check((v - 2.0 * SQRT_2).abs() < TOL_VALUE, || {
        format!("CHSH = {v}")
    })
}

fn gate_identities() -> Outcome {
    let r = |rows: &[&[f64]]| Operator::from_real_rows(rows).unwrap();
    let swapped = Circuit::parse("H 0\nH 1\nCNOT 0,1\nH 0\nH 1\n")
        .and_then(|c| c.compose())
        .map_err(|e| e.to_string())?;
    let expected = r(&[
        &[1., 0., 0., 0.],
        &[0., 0., 0., 1.],
        &[0., 0., 1., 0.],
        &[0., 1., 0., 0.],
    ]);
    check(swapped.max_abs_diff(&expected) < TOL_ANALYTIC, || {
        format!("(H⊗H)CNot(H⊗H) off by {}", swapped.max_abs_diff(&expected))
    })?;
    let (a, b, c, d) = (0.2, -1.3, 0.7, 2.1);
    let mut circuit = Circuit::new(2).map_err(|e| e.to_string())?;
    let z = qgrav::gates::SingleQubit::Custom(r(&[&[a, b], &[c, d]]));
    circuit
        .push(qgrav::gates::Gate::X, &[0])
        .map_err(|e| e.to_string())?;
    circuit
        .push(qgrav::gates::Gate::CZ(z), &[0, 1])
        .map_err(|e| e.to_string())?;
    circuit
        .push(qgrav::gates::Gate::X, &[0])
        .map_err(|e| e.to_string())?;
    let got = circuit.compose().map_err(|e| e.to_string())?;
    let expected = r(&[
        &[a, b, 0., 0.],
        &[c, d, 0., 0.],
        &[0., 0., 1., 0.],
        &[0., 0., 0., 1.],
    ]);
    check(got.max_abs_diff(&expected) < TOL_ANALYTIC, || {
        format!("(X⊗𝟙)CZ(X⊗𝟙) off by {}", got.max_abs_diff(&expected))
    })
}

fn gie() -> Outcome {
    let ends = gie_phase_sweep(&[0.0, PI], GieVariant::Path).map_err(|e| e.to_string())?;
    check(ends[0].entropy.abs() < TOL_VALUE, || {
        format!("S(0) = {}", ends[0].entropy)
    })?;
    check((ends[1].entropy - 1.0).abs() < TOL_VALUE, || {
        format!("S(π) = {}", ends[1].entropy)
    })?;
    let ks: Vec<i32> = (-512..512).collect();
    let phis: Vec<f64> = ks.iter().map(|&k| 2.0 * PI * k as f64 / 256.0).collect();
    let path = gie_phase_sweep(&phis, GieVariant::Path).map_err(|e| e.to_string())?;
    let spin = gie_phase_sweep(&phis, GieVariant::Spin).map_err(|e| e.to_string())?;
    for ((k, p), s) in ks.iter().zip(&path).zip(&spin) {
        check(p.separable == (k % 256 == 0), || {
            format!("separable = {} at k = {k}", p.separable)
        })?;
        check((p.entropy - s.entropy).abs() < TOL_VALUE, || {
            format!("variants differ at k = {k}")
        })?;
    }
    let phase = gie_phase(&GieParams::natural_units())
        .map_err(|e| e.to_string())?
        .raw;
    check(phase == -1.0, || format!("natural-units phase {phase}"))
}

fn causal_game() -> Outcome {
    for k in 1..=4 {
        let start = Instant::now();
        let max = causal_game_classical_max(k).map_err(|e| e.to_string())?;
        let elapsed = start.elapsed();
        let expected = if k == 1 { 0.5 } else { CAUSAL_BOUND };
        check(max.p_suc == expected, || {
            format!("alphabet {k}: {}", max.p_suc)
        })?;
        check(elapsed < GAME_BUDGET, || {
            format!("alphabet {k} took {elapsed:?}")
        })?;
    }
    let est = causal_game_simulate(&CausalGameStrategy::optimal(), SHOTS, 7)
        .map_err(|e| e.to_string())?;
    check(binomial_ok(est.successes, SHOTS, CAUSAL_BOUND), || {
        format!("simulated p_suc {}", est.p_suc)
    })
}

fn switch_ops() -> (Operator, Operator) {
    let h = Operator::from_real_rows(&[
        &[FRAC_1_SQRT_2, FRAC_1_SQRT_2],
        &[FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
    ])
    .unwrap()
    .certify_unitary()
    .unwrap();
    (h, Operator::pauli_z())
}

fn quantum_switch_check() -> Outcome {
    let (a, b) = switch_ops();
    let psi = StateVector::zero();
    let out = quantum_switch(&SwitchSpec::new(a.clone(), b.clone(), psi.clone()))
        .map_err(|e| e.to_string())?;
    for br in &out.branches {
        check((br.probability - 0.5).abs() < TOL_VALUE, || {
            format!("{} branch p = {}", br.label, br.probability)
        })?;
    }
    let plus_target = Operator::pauli_z().apply(&psi).map_err(|e| e.to_string())?;
    let minus_target = Operator::pauli_y().apply(&psi).map_err(|e| e.to_string())?;
    let plus = out.branch("+").map_err(|e| e.to_string())?;
    let minus = out.branch("-").map_err(|e| e.to_string())?;
    check(plus.approx_eq_up_to_phase(&plus_target, TOL_VALUE), || {
        "+ branch is not σ_z|ψ⟩".into()
    })?;
    check(
        minus.approx_eq_up_to_phase(&minus_target, TOL_VALUE),
        || "- branch is not σ_y|ψ⟩".into(),
    )?;

    let commuting = quantum_switch(&SwitchSpec::new(
        Operator::pauli_z(),
        Operator::pauli_z(),
        StateVector::plus(),
    ))
    .map_err(|e| e.to_string())?;
    let p = commuting.branches[1].probability;
    check(p < 1e-12, || format!("commuting - branch p = {p}"))?;

    let joint = switch_map(&a, &b)
        .and_then(|s| s.apply(&StateVector::zero().tensor(&psi)?))
        .map_err(|e| e.to_string())?;
    let direct = b
        .matmul(&a)
        .and_then(|ba| ba.apply(&psi))
        .map_err(|e| e.to_string())?;
    let direct = StateVector::zero()
        .tensor(&direct)
        .map_err(|e| e.to_string())?;
    check(joint.approx_eq(&direct, TOL_ANALYTIC), || {
        "classical control differs from composition".into()
    })
}

fn temporal_bell() -> Outcome {
    let (a, b) = switch_ops();
    let init = StateVector::qubits(&[0, 0]).map_err(|e| e.to_string())?;
    let out = temporal_bell_protocol(&a, &b, &init).map_err(|e| e.to_string())?;
    let pp = StateVector::plus()
        .tensor(&StateVector::plus())
        .map_err(|e| e.to_string())?;
    let mm = StateVector::minus()
        .tensor(&StateVector::minus())
        .map_err(|e| e.to_string())?;
    for (br, sign) in out.branches.iter().zip([1.0, -1.0]) {
        let amps: Vec<C64> = pp
            .amplitudes()
            .iter()
            .zip(mm.amplitudes())
            .map(|(x, y)| (x + y * sign) * FRAC_1_SQRT_2)
            .collect();
        let target = StateVector::new(amps, vec![2, 2]).map_err(|e| e.to_string())?;
        let state = br.state.as_ref().ok_or("empty branch")?;
        let f = state.fidelity(&target).map_err(|e| e.to_string())?;
        check(f > 1.0 - 1e-12, || {
            format!("{} branch fidelity {f}", br.label)
        })?;
        let v = br.chsh.as_ref().ok_or("no CHSH score")?.value;
        check((v - 2.0 * SQRT_2).abs() < TOL_VALUE, || {
            format!("{} branch CHSH {v}", br.label)
        })?;
    }
    Ok(())
}

fn gravitational_ordering() -> Outcome {
    let k = Constants::SI;
    let f = metric_factor(0.0, 6.371e6, &k).map_err(|e| e.to_string())?;
    check(f == 1.0, || format!("flat metric factor {f}"))?;
    let (m, r) = (5.972e24, 6.371e6);
    let x = 2.0 * k.g * m / (k.c * k.c * r);
    let oracle = x / 2.0 + x * x / 8.0;
    let deficit = time_deficit(m, r, 1.0, &k).map_err(|e| e.to_string())?;
    check(((deficit - oracle) / oracle).abs() < TOL_REDSHIFT, || {
        format!("deficit {deficit} vs {oracle}")
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for i in 0..1000 {
        let mass: f64 = rng.random_range(1e20..1e30);
        let rs = 2.0 * k.g * mass / (k.c * k.c);
        let r_a: f64 = rs * rng.random_range(1.5..1e3);
        let r_b: f64 = rs * rng.random_range(1.5..1e3);
        let mut s = GravitationalScenario {
            mass,
            r_a,
            r_b,
            t_c: (r_a - r_b).abs() / k.c,
            tau_star: 0.0,
            constants: k,
        };
        s.tau_star = 2.0 * signal_order(&s).map_err(|e| e.to_string())?.threshold;
        let v = signal_order(&s).map_err(|e| e.to_string())?.order;
        let w = signal_order(&s.mirrored())
            .map_err(|e| e.to_string())?
            .order;
        let swapped = matches!(
            (v, w),
            (SignalOrder::AliceFirst, SignalOrder::BobFirst)
                | (SignalOrder::BobFirst, SignalOrder::AliceFirst)
        );
        check(swapped, || format!("scenario {i}: {v:?} then {w:?}"))?;
    }
    Ok(())
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_qgrav"))
        .args(args)
        .env_remove("QGRAV_OUTPUT_DIR")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "{args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn reproducibility() -> Outcome {
    let runs: &[&[&str]] = &[
        &[
            "mz",
            "--phi-grid",
            "0:2pi:64",
            "--shots",
            "5000",
            "--seed",
            "11",
        ],
        &[
            "sg", "--axes", "z,x,z,x", "--shots", "20000", "--seed", "12",
        ],
        &[
            "causal-game",
            "simulate",
            "--strategy",
            "random",
            "--rounds",
            "100000",
            "--seed",
            "7",
        ],
        &[
            "gie",
            "--phi-grid",
            "-pi:pi:33",
            "--variant",
            "spin",
            "--format",
            "json",
        ],
        &[
            "chsh",
            "quantum",
            "--state",
            "psi-",
            "--settings",
            "optimal",
        ],
        &["temporal-bell", "--format", "json"],
        &["grav-switch"],
    ];
    for args in runs {
        let first = run_cli(args)?;
        let second = run_cli(args)?;
        check(first == second, || format!("{args:?} differs between runs"))?;
    }
    let rows = run_cli(runs[0])?;
    let data_lines = String::from_utf8_lossy(&rows)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .count();
    check(data_lines == 65, || {
        format!("mz grid produced {data_lines} lines")
    })
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        ("Mach-Zehnder detection probabilities", mach_zehnder),
        ("Stern-Gerlach sequential statistics", stern_gerlach),
        ("CHSH classical bound", chsh_classical),
        ("CHSH quantum value", chsh_quantum),
        ("gate identities", gate_identities),
        ("gravitationally induced entanglement", gie),
        ("causal game bound", causal_game),
        ("quantum switch", quantum_switch_check),
        ("temporal Bell protocol", temporal_bell),
        ("gravitational ordering", gravitational_ordering),
        ("CLI reproducibility", reproducibility),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        match f() {
            Ok(()) => println!(
                "criterion {:>2} PASS  {name} ({:.2?})",
                i + 1,
                start.elapsed()
            ),
            Err(why) => {
                failures += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
