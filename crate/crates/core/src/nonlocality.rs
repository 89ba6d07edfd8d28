//! Local hidden-variable models, the CHSH expression and its classical and
//! quantum values.
//!
//! Measurement outcomes are ±1. Correlators are indexed `[i][j]` for
//! Alice's setting `i` and Bob's setting `j`, and the CHSH value is
//! `|⟨A₀B₀⟩ + ⟨A₀B₁⟩ + ⟨A₁B₀⟩ − ⟨A₁B₁⟩|`.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix3, Vector3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::quantum::{c, Operator, StateVector, Tensor, TOL};
use crate::{Error, Result};

/// Largest value attainable by any local hidden-variable model.
pub const CLASSICAL_BOUND: f64 = 2.0;

/// Tsirelson's bound, `2√2`.
pub const TSIRELSON_BOUND: f64 = 2.0 * std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn value(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }

    fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }
}

/// `⟨A_i B_j⟩` indexed `[i][j]`.
pub type Correlators = [[f64; 2]; 2];

/// Response of one party: `table[setting][outcome]` is `p(outcome | setting, λ)`
/// with outcome index 0 for +1 and 1 for −1.
pub type ResponseTable = [[f64; 2]; 2];

/// Finite-support hidden-variable model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LhvModel {
    pub weights: Vec<f64>,
    pub response_a: Vec<ResponseTable>,
    pub response_b: Vec<ResponseTable>,
}

impl LhvModel {
    pub fn new(
        weights: Vec<f64>,
        response_a: Vec<ResponseTable>,
        response_b: Vec<ResponseTable>,
    ) -> Result<Self> {
        let model = Self {
            weights,
            response_a,
            response_b,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.weights.len();
        if n == 0 || self.response_a.len() != n || self.response_b.len() != n {
            return Err(Error::Contract(format!(
                "{} weights for {} and {} response tables",
                n,
                self.response_a.len(),
                self.response_b.len()
            )));
        }
        if self.weights.iter().any(|&w| !(0.0..=1.0).contains(&w)) {
            return Err(Error::Contract("weights must lie in [0, 1]".into()));
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Contract(format!("weights sum to {total}")));
        }
        for table in self.response_a.iter().chain(&self.response_b) {
            for dist in table {
                if dist.iter().any(|&p| !(0.0..=1.0).contains(&p))
                    || (dist[0] + dist[1] - 1.0).abs() > 1e-12
                {
                    return Err(Error::Contract(format!(
                        "response distribution {dist:?} is not a probability"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Deterministic responses `a(i)`, `b(j)` for a single hidden variable.
    pub fn deterministic(alice: [Outcome; 2], bob: [Outcome; 2]) -> Self {
        let table = |o: [Outcome; 2]| {
            o.map(|x| {
                if x == Outcome::Plus {
                    [1.0, 0.0]
                } else {
                    [0.0, 1.0]
                }
            })
        };
        Self {
            weights: vec![1.0],
            response_a: vec![table(alice)],
            response_b: vec![table(bob)],
        }
    }

    /// Random model with `n_lambdas` hidden values, random weights and
    /// random (generally non-deterministic) responses.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n_lambdas: usize) -> Self {
        let n = n_lambdas.max(1);
        let raw: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 1e-3).collect();
        let total: f64 = raw.iter().sum();
        let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let drift: f64 = 1.0 - weights.iter().sum::<f64>();
        weights[0] += drift;
        let mut table = || -> ResponseTable {
            [0, 1].map(|_| {
                let p: f64 = rng.random();
                [p, 1.0 - p]
            })
        };
        let response_a = (0..n).map(|_| table()).collect();
        let response_b = (0..n).map(|_| table()).collect();
        Self {
            weights,
            response_a,
            response_b,
        }
    }
}

fn check_setting(s: usize) -> Result<()> {
    if s > 1 {
        return Err(Error::Contract(format!("setting {s} is not 0 or 1")));
    }
    Ok(())
}

/// `Σ_λ q(λ) p(a|A_i,λ) p(b|B_j,λ)`.
pub fn lhv_joint_probability(
    m: &LhvModel,
    a: Outcome,
    b: Outcome,
    i: usize,
    j: usize,
) -> Result<f64> {
    check_setting(i)?;
    check_setting(j)?;
    Ok(m.weights
        .iter()
        .zip(m.response_a.iter().zip(&m.response_b))
        .map(|(q, (ra, rb))| q * ra[i][a.index()] * rb[j][b.index()])
        .sum())
}

/// `⟨A_iB_j⟩ = Σ_{a,b} ab P(a,b|i,j)` for every setting pair.
pub fn lhv_correlators(m: &LhvModel) -> Result<Correlators> {
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for a in Outcome::BOTH {
                for b in Outcome::BOTH {
                    out[i][j] += a.value() * b.value() * lhv_joint_probability(m, a, b, i, j)?;
                }
            }
        }
    }
    Ok(out)
}

/// `|⟨A₀B₀⟩ + ⟨A₀B₁⟩ + ⟨A₁B₀⟩ − ⟨A₁B₁⟩|`.
pub fn chsh_value(corr: &Correlators) -> Result<f64> {
    if let Some(bad) = corr
        .iter()
        .flatten()
        .find(|x| x.is_nan() || x.abs() > 1.0 + TOL)
    {
        return Err(Error::Contract(format!("correlator {bad} outside [-1, 1]")));
    }
    Ok((corr[0][0] + corr[0][1] + corr[1][0] - corr[1][1]).abs())
}

/// Local deterministic strategy: each party's outcome as a function of its setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeterministicStrategy {
    pub alice: [Outcome; 2],
    pub bob: [Outcome; 2],
}

impl DeterministicStrategy {
    pub fn correlators(&self) -> Correlators {
        let mut out = [[0.0; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.alice[i].value() * self.bob[j].value();
            }
        }
        out
    }

    /// All 16 response pairs.
    pub fn all() -> Vec<Self> {
        let singles: Vec<[Outcome; 2]> = Outcome::BOTH
            .iter()
            .flat_map(|&x| Outcome::BOTH.iter().map(move |&y| [x, y]))
            .collect();
        singles
            .iter()
            .flat_map(|&alice| {
                singles
                    .iter()
                    .map(move |&bob| DeterministicStrategy { alice, bob })
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalMax {
    pub value: f64,
    pub argmax: Vec<DeterministicStrategy>,
    pub enumerated: usize,
}

/// Exhaustive search over the 16 deterministic strategies. Every LHV model
/// is a convex mixture of these, so the maximum bounds all of them.
pub fn classical_chsh_max() -> ClassicalMax {
    let strategies = DeterministicStrategy::all();
    let scored: Vec<(DeterministicStrategy, f64)> = strategies
        .iter()
        .map(|s| {
            (
                *s,
                chsh_value(&s.correlators()).expect("deterministic correlators are ±1"),
            )
        })
        .collect();
    let value = scored
        .iter()
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    let argmax = scored
        .iter()
        .filter(|(_, v)| *v == value)
        .map(|(s, _)| *s)
        .collect();
    ClassicalMax {
        value,
        argmax,
        enumerated: strategies.len(),
    }
}

/// Shared two-qubit state plus two ±1-valued observables per party.
#[derive(Debug, Clone)]
pub struct ChshQuantumStrategy {
    pub shared_state: StateVector,
    pub settings_a: [Operator; 2],
    pub settings_b: [Operator; 2],
}

impl ChshQuantumStrategy {
    pub fn new(
        shared_state: StateVector,
        settings_a: [Operator; 2],
        settings_b: [Operator; 2],
    ) -> Result<Self> {
        let s = Self {
            shared_state,
            settings_a,
            settings_b,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.shared_state.subsystem_dims() != [2, 2] {
            return Err(Error::Shape(format!(
                "CHSH needs a two-qubit state, got dims {:?}",
                self.shared_state.subsystem_dims()
            )));
        }
        for op in self.settings_a.iter().chain(&self.settings_b) {
            check_pm1_observable(op)?;
        }
        Ok(())
    }

    /// Standard settings on `|Φ+⟩`: `A₀=σ_z`, `A₁=σ_x`, `B₀,B₁ = (σ_z ± σ_x)/√2`.
    pub fn standard(shared_state: StateVector) -> Result<Self> {
        let (a, b) = standard_settings();
        Self::new(shared_state, a, b)
    }
}

/// `A₀=σ_z`, `A₁=σ_x`, `B₀=(σ_z+σ_x)/√2`, `B₁=(σ_z−σ_x)/√2`.
pub fn standard_settings() -> ([Operator; 2], [Operator; 2]) {
    let a = [
        spin_observable([0.0, 0.0, 1.0]),
        spin_observable([1.0, 0.0, 0.0]),
    ];
    let b = [
        spin_observable([FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2]),
        spin_observable([-FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2]),
    ];
    (a, b)
}

/// `n·σ` for a unit vector `n = (n_x, n_y, n_z)`.
pub fn spin_observable(n: [f64; 3]) -> Operator {
    let [x, y, z] = n;
    let op = Operator::from_rows(&[vec![c(z, 0.0), c(x, -y)], vec![c(x, y), c(-z, 0.0)]])
        .expect("2×2 rows");
    op.clone().certify_hermitian().unwrap_or(op)
}

fn check_pm1_observable(op: &Operator) -> Result<()> {
    if op.dim() != 2 || !op.is_hermitian() {
        return Err(Error::Contract(
            "CHSH observables must be Hermitian 2×2 matrices".into(),
        ));
    }
    let sq = op.matmul(op)?;
    if sq.max_abs_diff(&Operator::identity(2)) > TOL {
        return Err(Error::Contract(
            "CHSH observable spectrum is not within {+1, -1}".into(),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantumChsh {
    pub correlators: Correlators,
    pub value: f64,
}

/// Correlators `⟨ψ|A_i⊗B_j|ψ⟩` and the resulting CHSH value.
pub fn quantum_chsh(strategy: &ChshQuantumStrategy) -> Result<QuantumChsh> {
    strategy.validate()?;
    let mut correlators = [[0.0; 2]; 2];
    for (i, a) in strategy.settings_a.iter().enumerate() {
        for (j, b) in strategy.settings_b.iter().enumerate() {
            let ab = a.tensor(b)?.certify_hermitian()?;
            correlators[i][j] = ab.expectation(&strategy.shared_state)?;
        }
    }
    let value = chsh_value(&correlators)?;
    Ok(QuantumChsh { correlators, value })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];
}

/// `(|00⟩±|11⟩)/√2` and `(|01⟩±|10⟩)/√2`.
pub fn bell_state(kind: BellKind) -> StateVector {
    let h = FRAC_1_SQRT_2;
    let amps = match kind {
        BellKind::PhiPlus => [h, 0.0, 0.0, h],
        BellKind::PhiMinus => [h, 0.0, 0.0, -h],
        BellKind::PsiPlus => [0.0, h, h, 0.0],
        BellKind::PsiMinus => [0.0, h, -h, 0.0],
    };
    StateVector::new(amps.iter().map(|&x| c(x, 0.0)).collect(), vec![2, 2])
        .expect("Bell states are normalized")
}

/// `T_kl = ⟨ψ|σ_k⊗σ_l|ψ⟩` for `k, l ∈ {x, y, z}`.
pub fn correlation_matrix(state: &StateVector) -> Result<Matrix3<f64>> {
    if state.subsystem_dims() != [2, 2] {
        return Err(Error::Shape(
            "correlation matrix needs a two-qubit state".into(),
        ));
    }
    let paulis = [
        Operator::pauli_x(),
        Operator::pauli_y(),
        Operator::pauli_z(),
    ];
    let mut t = Matrix3::zeros();
    for k in 0..3 {
        for l in 0..3 {
            let op = paulis[k].tensor(&paulis[l])?.certify_hermitian()?;
            t[(k, l)] = op.expectation(state)?;
        }
    }
    Ok(t)
}

/// Settings reaching the largest CHSH value attainable on `state`,
/// `2√(s₁² + s₂²)` for the two largest singular values of the correlation
/// matrix.
pub fn optimal_strategy(state: &StateVector) -> Result<ChshQuantumStrategy> {
    let t = correlation_matrix(state)?;
    let svd = t.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested Vᵀ");
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let (s1, s2) = (svd.singular_values[order[0]], svd.singular_values[order[1]]);
    let u1: Vector3<f64> = u.column(order[0]).into();
    let u2: Vector3<f64> = u.column(order[1]).into();
    let v1: Vector3<f64> = v_t.row(order[0]).transpose();
    let v2: Vector3<f64> = v_t.row(order[1]).transpose();
    let theta = s2.atan2(s1);
    let b0 = v1 * theta.cos() + v2 * theta.sin();
    let b1 = v1 * theta.cos() - v2 * theta.sin();
    let obs = |n: Vector3<f64>| {
        let n = n.normalize();
        spin_observable([n.x, n.y, n.z])
    };
    ChshQuantumStrategy::new(state.clone(), [obs(u1), obs(u2)], [obs(b0), obs(b1)])
}
