//! One function per subcommand, each turning parsed flags into a [`Report`].

use std::path::Path;

use num_complex::Complex64;
use qgrav::causal::{
    causal_game_classical_max, causal_game_simulate, gravitational_switch, quantum_switch,
    quantum_switch_clock_broken, signal_order, temporal_bell_protocol, CausalGameStrategy,
    ClockBroken, GravitationalScenario, SwitchOutcome, SwitchSpec,
};
use qgrav::constants::Constants;
use qgrav::gates::{Circuit, SingleQubit};
use qgrav::gie::{gie_entanglement_sweep, gie_phase_sweep, GieParams, GieRow, GieVariant};
use qgrav::interferometry::{
    mz_final_state, mz_sweep, stern_gerlach_chain, Axis, Shots, SternGerlachChain,
};
use qgrav::nonlocality::{
    bell_state, chsh_value, classical_chsh_max, lhv_correlators, optimal_strategy, quantum_chsh,
    BellKind, ChshQuantumStrategy, Correlators, LhvModel, CLASSICAL_BOUND, TSIRELSON_BOUND,
};
use qgrav::quantum::{Operator, StateVector};
use qgrav::rng;
use rand::SeedableRng;
use serde_json::{json, Value};

use crate::cli::*;
use crate::grid::parse_grid;
use crate::report::{amplitudes_json, Cell, Report};
use crate::CliError;

/// Settings shared by every subcommand.
pub struct Context {
    pub seed: u64,
    pub constants: Constants,
}

impl Context {
    fn report(&self, command: &str, columns: &[&'static str]) -> Report {
        Report::new(command, self.seed, columns)
    }

    fn record_constants(&self, r: &mut Report, keys: &[&str]) {
        for &k in keys {
            match k {
                "G" => r.param("G", num(self.constants.g)),
                "hbar" => r.param("hbar", num(self.constants.hbar)),
                _ => r.param("c", num(self.constants.c)),
            };
        }
    }
}

pub fn run(command: &Command, ctx: &Context) -> Result<Report, CliError> {
    match command {
        Command::Mz(a) => mz(a, ctx),
        Command::Sg(a) => sg(a, ctx),
        Command::Chsh(a) => chsh(a, ctx),
        Command::Circuit(a) => circuit(a, ctx),
        Command::Gie(a) => gie(a, ctx),
        Command::CausalGame(a) => causal_game(a, ctx),
        Command::Qswitch(a) => qswitch(a, ctx),
        Command::GravSwitch(a) => grav_switch(a, ctx),
        Command::TemporalBell(a) => temporal_bell(a, ctx),
    }
}

/// Shortest round-trip form, switching to exponent notation for extreme magnitudes.
fn num(x: f64) -> String {
    format!("{x:?}")
}

fn grid(spec: &str, flag: &str) -> Result<Vec<f64>, CliError> {
    parse_grid(spec).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn mz(a: &MzArgs, ctx: &Context) -> Result<Report, CliError> {
    let phis = grid(&a.phi_grid, "phi-grid")?;
    let shots = match a.shots {
        Some(n) => Shots::MonteCarlo(n),
        None => Shots::Analytic,
    };
    let columns: &[&str] = if a.shots.is_some() {
        &["phi", "p_d1", "p_d2", "n_d1", "n_d2"]
    } else {
        &["phi", "p_d1", "p_d2"]
    };
    let mut r = ctx.report("mz", columns);
    r.param("phi-grid", &a.phi_grid);
    if let Some(n) = a.shots {
        r.param("shots", n);
    }
    let rows = mz_sweep(&phis, shots, ctx.seed)?;
    let mut states = Vec::with_capacity(rows.len());
    for row in rows {
        let mut cells = vec![row.phi.into(), row.p_d1.into(), row.p_d2.into()];
        if let Some((d1, d2)) = row.counts {
            cells.extend([d1.into(), d2.into()]);
        }
        r.push(cells);
        states.push(amplitudes_json(mz_final_state(row.phi)?.amplitudes()));
    }
    r.extra.insert("final_states".into(), Value::Array(states));
    Ok(r)
}

fn sg(a: &SgArgs, ctx: &Context) -> Result<Report, CliError> {
    let axes = a
        .axes
        .split(',')
        .map(|s| s.parse::<Axis>())
        .collect::<Result<Vec<_>, _>>()?;
    let stats = stern_gerlach_chain(&SternGerlachChain::new(axes.clone(), a.shots, ctx.seed))?;
    let mut r = ctx.report("sg", &["stage", "axis", "outcome", "count"]);
    r.param("axes", &a.axes).param("shots", a.shots);
    for (stage, axis) in axes.iter().enumerate() {
        let (up, down) = stats.stage_counts(stage);
        r.push(vec![
            stage.into(),
            axis.label().into(),
            "up".into(),
            up.into(),
        ]);
        r.push(vec![
            stage.into(),
            axis.label().into(),
            "down".into(),
            down.into(),
        ]);
    }
    let paths: Vec<Value> = (0..1usize << axes.len())
        .filter_map(|index| {
            let path: Vec<bool> = (0..axes.len()).rev().map(|k| index >> k & 1 == 1).collect();
            let count = stats.path_count(&path);
            let labels: Vec<&str> = path
                .iter()
                .map(|&d| if d { "down" } else { "up" })
                .collect();
            (count > 0).then(|| json!({ "outcomes": labels, "count": count }))
        })
        .collect();
    r.extra.insert("paths".into(), Value::Array(paths));
    Ok(r)
}

fn correlator_cells(c: &Correlators) -> Vec<Cell> {
    vec![
        c[0][0].into(),
        c[0][1].into(),
        c[1][0].into(),
        c[1][1].into(),
    ]
}

fn chsh(a: &ChshArgs, ctx: &Context) -> Result<Report, CliError> {
    let columns = [
        "mode",
        "value",
        "classical_bound",
        "tsirelson_bound",
        "e00",
        "e01",
        "e10",
        "e11",
    ];
    let mut r = ctx.report("chsh", &columns);
    let head = |mode: &str, value: f64| -> Vec<Cell> {
        vec![
            mode.into(),
            value.into(),
            CLASSICAL_BOUND.into(),
            TSIRELSON_BOUND.into(),
        ]
    };
    match a.mode {
        ChshMode::ClassicalMax => {
            r.param("mode", "classical-max");
            let max = classical_chsh_max();
            r.note("enumerated", max.enumerated)
                .note("maximizers", max.argmax.len());
            let mut cells = head("classical-max", max.value);
            cells.extend(correlator_cells(&max.argmax[0].correlators()));
            r.push(cells);
        }
        ChshMode::Quantum => {
            let (name, state) = match a.state {
                SharedState::PhiPlus => ("phi+", bell_state(BellKind::PhiPlus)),
                SharedState::PhiMinus => ("phi-", bell_state(BellKind::PhiMinus)),
                SharedState::PsiPlus => ("psi+", bell_state(BellKind::PsiPlus)),
                SharedState::PsiMinus => ("psi-", bell_state(BellKind::PsiMinus)),
                SharedState::Product => ("product", StateVector::qubits(&[0, 0])?),
            };
            let settings = match a.settings {
                Settings::Standard => "standard",
                Settings::Optimal => "optimal",
            };
            r.param("mode", "quantum")
                .param("state", name)
                .param("settings", settings);
            let strategy = match a.settings {
                Settings::Standard => ChshQuantumStrategy::standard(state.clone())?,
                Settings::Optimal => optimal_strategy(&state)?,
            };
            let result = quantum_chsh(&strategy)?;
            let mut cells = head("quantum", result.value);
            cells.extend(correlator_cells(&result.correlators));
            r.push(cells);
            r.extra
                .insert("shared_state".into(), amplitudes_json(state.amplitudes()));
        }
        ChshMode::Lhv => {
            let path = a
                .file
                .as_ref()
                .ok_or_else(|| CliError::Usage("chsh lhv needs --file".into()))?;
            r.param("mode", "lhv").param("file", path.display());
            let model = read_lhv(path)?;
            let corr = lhv_correlators(&model)?;
            let mut cells = head("lhv", chsh_value(&corr)?);
            cells.extend(correlator_cells(&corr));
            r.push(cells);
        }
    }
    Ok(r)
}

fn read_lhv(path: &Path) -> Result<LhvModel, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let model: LhvModel = serde_json::from_str(&text).map_err(|e| qgrav::Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    model.validate()?;
    Ok(model)
}

fn basis_label(index: usize, n: usize) -> String {
    (0..n)
        .rev()
        .map(|k| if index >> k & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn bits(text: &str, flag: &str) -> Result<Vec<u8>, CliError> {
    text.chars()
        .map(|ch| match ch {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(CliError::Usage(format!(
                "--{flag}: '{text}' is not a bit string"
            ))),
        })
        .collect()
}

fn circuit(a: &CircuitArgs, ctx: &Context) -> Result<Report, CliError> {
    let (source, text) = match (&a.file, &a.text) {
        (Some(path), None) => (
            path.display().to_string(),
            std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        ),
        (None, Some(t)) => (t.clone(), t.replace(';', "\n")),
        _ => {
            return Err(CliError::Usage(
                "circuit needs exactly one of --file or --text".into(),
            ))
        }
    };
    let c = Circuit::parse(&text)?;
    let n = c.n_qubits();
    let u = c.compose()?;
    let columns: &[&str] = if a.matrix {
        &["row", "col", "re", "im"]
    } else {
        &["index", "basis", "re", "im", "probability"]
    };
    let mut r = ctx.report("circuit", columns);
    r.param(if a.file.is_some() { "file" } else { "text" }, source);
    r.param("qubits", n);
    if a.matrix {
        r.param("matrix", true);
        let m = u.entries();
        let mut rows = Vec::new();
        for i in 0..m.nrows() {
            let row: Vec<Complex64> = (0..m.ncols()).map(|j| m[(i, j)]).collect();
            for (j, z) in row.iter().enumerate() {
                r.push(vec![i.into(), j.into(), z.re.into(), z.im.into()]);
            }
            rows.push(amplitudes_json(&row));
        }
        r.extra.insert("matrix".into(), Value::Array(rows));
        return Ok(r);
    }
    let input = match &a.input {
        Some(s) => bits(s, "input")?,
        None => vec![0; n],
    };
    if input.len() != n {
        return Err(CliError::Usage(format!(
            "--input has {} bits for a {n}-qubit circuit",
            input.len()
        )));
    }
    r.param(
        "input",
        basis_label(input.iter().fold(0, |acc, &b| acc << 1 | b as usize), n),
    );
    let out = u.apply(&StateVector::qubits(&input)?)?;
    for (i, z) in out.amplitudes().iter().enumerate() {
        r.push(vec![
            i.into(),
            basis_label(i, n).into(),
            z.re.into(),
            z.im.into(),
            z.norm_sqr().into(),
        ]);
    }
    r.extra
        .insert("state".into(), amplitudes_json(out.amplitudes()));
    Ok(r)
}

fn gie(a: &GieArgs, ctx: &Context) -> Result<Report, CliError> {
    let variant = match a.variant {
        Variant::Path => GieVariant::Path,
        Variant::Spin => GieVariant::Spin,
    };
    let mut r = ctx.report(
        "gie",
        &["m", "d2", "t", "phi", "entropy", "negativity", "separable"],
    );
    r.param(
        "variant",
        if variant == GieVariant::Path {
            "path"
        } else {
            "spin"
        },
    );
    let rows: Vec<GieRow> = match (&a.phi_grid, &a.t_grid) {
        (Some(spec), None) => {
            r.param("phi-grid", spec);
            gie_phase_sweep(&grid(spec, "phi-grid")?, variant)?
        }
        (None, Some(spec)) => {
            r.param("t-grid", spec)
                .param("m", num(a.m))
                .param("d2", num(a.d2));
            ctx.record_constants(&mut r, &["G", "hbar"]);
            let params: Vec<GieParams> = grid(spec, "t-grid")?
                .into_iter()
                .map(|t| GieParams::with_constants(a.m, a.d2, t, ctx.constants))
                .collect();
            gie_entanglement_sweep(&params, variant)?
        }
        _ => {
            return Err(CliError::Usage(
                "gie needs one of --phi-grid or --t-grid".into(),
            ))
        }
    };
    let mut states = Vec::with_capacity(rows.len());
    for row in rows {
        let p = row.params;
        r.push(vec![
            p.map(|p| p.m).into(),
            p.map(|p| p.d2).into(),
            p.map(|p| p.t).into(),
            row.phi.into(),
            row.entropy.into(),
            row.negativity.into(),
            row.separable.into(),
        ]);
        states.push(amplitudes_json(
            qgrav::gie::gie_state(row.phi, variant)?.amplitudes(),
        ));
    }
    r.extra.insert("states".into(), Value::Array(states));
    Ok(r)
}

fn causal_game(a: &CausalGameArgs, ctx: &Context) -> Result<Report, CliError> {
    match a.mode {
        GameMode::Max => {
            let mut r = ctx.report(
                "causal-game",
                &["alphabet", "p_suc", "enumerated", "p_alice_first"],
            );
            r.param("mode", "max").param("alphabet", a.alphabet);
            let max = causal_game_classical_max(a.alphabet)?;
            r.push(vec![
                a.alphabet.into(),
                max.p_suc.into(),
                max.enumerated.into(),
                max.argmax.p_alice_first.into(),
            ]);
            r.extra.insert(
                "argmax".into(),
                serde_json::to_value(&max.argmax).expect("strategy serializes"),
            );
            Ok(r)
        }
        GameMode::Simulate => {
            let mut r = ctx.report(
                "causal-game",
                &[
                    "strategy",
                    "rounds",
                    "successes",
                    "p_suc",
                    "std_err",
                    "exact",
                ],
            );
            let (name, strategy) = match a.strategy {
                GameStrategy::Optimal => ("optimal", CausalGameStrategy::optimal()),
                GameStrategy::OptimalBobFirst => {
                    ("optimal-bob-first", CausalGameStrategy::optimal_bob_first())
                }
                GameStrategy::RandomGuess => ("random-guess", CausalGameStrategy::random_guess()),
                GameStrategy::Random => {
                    let mut g =
                        rand_chacha::ChaCha8Rng::seed_from_u64(rng::derive(ctx.seed, u64::MAX));
                    ("random", CausalGameStrategy::random(&mut g, a.alphabet))
                }
            };
            r.param("mode", "simulate")
                .param("strategy", name)
                .param("rounds", a.rounds);
            if a.strategy == GameStrategy::Random {
                r.param("alphabet", a.alphabet);
            }
            let est = causal_game_simulate(&strategy, a.rounds, ctx.seed)?;
            r.push(vec![
                name.into(),
                est.rounds.into(),
                est.successes.into(),
                est.p_suc.into(),
                est.std_err.into(),
                strategy.success_probability()?.into(),
            ]);
            Ok(r)
        }
    }
}

fn operation(name: &str, flag: &str) -> Result<Operator, CliError> {
    let gate: SingleQubit = name
        .parse()
        .map_err(|e: String| CliError::Usage(format!("--{flag}: {e}")))?;
    Ok(gate.matrix()?)
}

fn qubit_state(name: &str, flag: &str) -> Result<StateVector, CliError> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Ok(match name {
        "0" => StateVector::zero(),
        "1" => StateVector::one(),
        "+" => StateVector::plus(),
        "-" => StateVector::minus(),
        "+i" => StateVector::qubit(Complex64::new(h, 0.0), Complex64::new(0.0, h))?,
        "-i" => StateVector::qubit(Complex64::new(h, 0.0), Complex64::new(0.0, -h))?,
        other => {
            return Err(CliError::Usage(format!(
                "--{flag}: unknown state '{other}'; use 0, 1, +, -, +i or -i"
            )))
        }
    })
}

const STATE_COLUMNS: [&str; 5] = ["branch", "probability", "index", "re", "im"];

fn push_state(r: &mut Report, label: &str, probability: f64, state: Option<&StateVector>) {
    match state {
        Some(s) => {
            for (i, z) in s.amplitudes().iter().enumerate() {
                r.push(vec![
                    label.into(),
                    probability.into(),
                    i.into(),
                    z.re.into(),
                    z.im.into(),
                ]);
            }
        }
        None => r.push(vec![
            label.into(),
            probability.into(),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ]),
    }
}

fn switch_rows(r: &mut Report, out: &SwitchOutcome) {
    push_state(r, "joint", 1.0, Some(&out.joint));
    let mut branches = Vec::new();
    for b in &out.branches {
        push_state(r, b.label, b.probability, b.state.as_ref());
        branches.push(json!({
            "label": b.label,
            "probability": b.probability,
            "state": b.state.as_ref().map(|s| amplitudes_json(s.amplitudes())),
        }));
    }
    r.extra
        .insert("joint".into(), amplitudes_json(out.joint.amplitudes()));
    r.extra.insert("branches".into(), Value::Array(branches));
}

fn qswitch(a: &QswitchArgs, ctx: &Context) -> Result<Report, CliError> {
    let mut r = ctx.report("qswitch", &STATE_COLUMNS);
    r.param("op-a", &a.ops.op_a)
        .param("op-b", &a.ops.op_b)
        .param("target", &a.ops.target)
        .param("control", &a.control);
    let op_a = operation(&a.ops.op_a, "op-a")?;
    let op_b = operation(&a.ops.op_b, "op-b")?;
    let mut spec = SwitchSpec::new(
        op_a.clone(),
        op_b.clone(),
        qubit_state(&a.ops.target, "target")?,
    );
    spec.control_init = qubit_state(&a.control, "control")?;
    let out = if a.a_late.is_some() || a.b_late.is_some() {
        let a_late = a.a_late.as_deref().unwrap_or(&a.ops.op_a);
        let b_late = a.b_late.as_deref().unwrap_or(&a.ops.op_b);
        r.param("a-late", a_late)
            .param("b-late", b_late)
            .param("t-star", num(a.t_star));
        spec.clock_broken = Some(ClockBroken {
            a_early: op_a,
            a_late: operation(a_late, "a-late")?,
            b_early: op_b,
            b_late: operation(b_late, "b-late")?,
            t_star: a.t_star,
        });
        quantum_switch_clock_broken(&spec)?
    } else {
        quantum_switch(&spec)?
    };
    switch_rows(&mut r, &out);
    Ok(r)
}

fn order_label(o: qgrav::causal::SignalOrder) -> &'static str {
    match o {
        qgrav::causal::SignalOrder::AliceFirst => "A<B",
        qgrav::causal::SignalOrder::BobFirst => "B<A",
        qgrav::causal::SignalOrder::Indeterminate => "indeterminate",
    }
}

fn grav_switch(a: &GravSwitchArgs, ctx: &Context) -> Result<Report, CliError> {
    let mut r = ctx.report("grav-switch", &STATE_COLUMNS);
    let k = ctx.constants;
    let t_c = a.t_c.unwrap_or((a.r_a - a.r_b).abs() / k.c);
    let mut scenario = GravitationalScenario {
        mass: a.mass,
        r_a: a.r_a,
        r_b: a.r_b,
        t_c,
        tau_star: 0.0,
        constants: k,
    };
    scenario.tau_star = match a.tau_star {
        Some(t) => t,
        None => 2.0 * signal_order(&scenario)?.threshold,
    };
    r.param("op-a", &a.ops.op_a)
        .param("op-b", &a.ops.op_b)
        .param("target", &a.ops.target);
    r.param("mass", num(a.mass))
        .param("r-a", num(a.r_a))
        .param("r-b", num(a.r_b))
        .param("t-c", num(t_c));
    r.param("tau-star", num(scenario.tau_star));
    ctx.record_constants(&mut r, &["G", "c"]);
    let out = gravitational_switch(
        &scenario,
        &operation(&a.ops.op_a, "op-a")?,
        &operation(&a.ops.op_b, "op-b")?,
        &qubit_state(&a.ops.target, "target")?,
    )?;
    for (name, v) in ["given", "mirrored"].iter().zip(&out.verdicts) {
        r.note(&format!("{name}.order"), order_label(v.order));
        r.note(&format!("{name}.threshold"), num(v.threshold));
    }
    let pm = out.pm_branches()?;
    switch_rows(&mut r, &pm);
    let mut configs = Vec::new();
    for (label, (p, s)) in ["K_AB", "K_BA"]
        .into_iter()
        .zip(out.configuration_branches()?)
    {
        push_state(&mut r, label, p, s.as_ref());
        configs.push(json!({
            "label": label,
            "probability": p,
            "state": s.as_ref().map(|s| amplitudes_json(s.amplitudes())),
        }));
    }
    r.extra
        .insert("configuration_branches".into(), Value::Array(configs));
    Ok(r)
}

fn temporal_bell(a: &TemporalBellArgs, ctx: &Context) -> Result<Report, CliError> {
    let columns = [
        "branch",
        "probability",
        "entropy",
        "chsh",
        "e00",
        "e01",
        "e10",
        "e11",
    ];
    let mut r = ctx.report("temporal-bell", &columns);
    r.param("op-a", &a.op_a)
        .param("op-b", &a.op_b)
        .param("init", &a.init);
    let init = bits(&a.init, "init")?;
    if init.len() != 2 {
        return Err(CliError::Usage("--init must be two bits".into()));
    }
    let out = temporal_bell_protocol(
        &operation(&a.op_a, "op-a")?,
        &operation(&a.op_b, "op-b")?,
        &StateVector::qubits(&init)?,
    )?;
    let mut states = Vec::new();
    for b in &out.branches {
        let mut cells: Vec<Cell> = vec![
            b.label.into(),
            b.probability.into(),
            b.entropy.into(),
            b.chsh.as_ref().map(|c| c.value).into(),
        ];
        match &b.chsh {
            Some(c) => cells.extend(correlator_cells(&c.correlators)),
            None => cells.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty]),
        }
        r.push(cells);
        states.push(json!({
            "label": b.label,
            "probability": b.probability,
            "state": b.state.as_ref().map(|s| amplitudes_json(s.amplitudes())),
        }));
    }
    r.extra
        .insert("joint".into(), amplitudes_json(out.joint.amplitudes()));
    r.extra.insert("branches".into(), Value::Array(states));
    Ok(r)
}
