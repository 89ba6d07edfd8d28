//! Named gates and a strictly sequential circuit composer.
//!
//! Circuits read left to right: the first step acts first, so the composed
//! matrix is `U_last ⋯ U_first`. Controlled gates take wires in
//! `(control, target)` order.
//!
//! The text form has one step per line, `GATE wire[,wire]`, with an optional
//! leading `QUBITS n` line and `#` comments:
//!
//! ```text
//! QUBITS 2
//! H 0
//! H 1
//! CNOT 0,1
//! CZ:X 1,0
//! ```

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::quantum::{Operator, C64};
use crate::{Error, Result};

/// Largest register [`Circuit::compose`] will build a dense matrix for.
pub const MAX_CIRCUIT_QUBITS: usize = 12;

/// A single-qubit operation usable on its own or as the `Z` of a controlled gate.
#[derive(Debug, Clone, PartialEq)]
pub enum SingleQubit {
    I,
    X,
    Y,
    Z,
    H,
    /// Arbitrary 2×2 matrix; unitarity is not required.
    Custom(Operator),
}

impl SingleQubit {
    pub fn matrix(&self) -> Result<Operator> {
        Ok(match self {
            SingleQubit::I => Operator::identity(2),
            SingleQubit::X => Operator::pauli_x(),
            SingleQubit::Y => Operator::pauli_y(),
            SingleQubit::Z => Operator::pauli_z(),
            SingleQubit::H => Operator::hadamard(),
            SingleQubit::Custom(op) => {
                if op.dim() != 2 {
                    return Err(Error::Shape(format!(
                        "expected a 2×2 operator, got {0}×{0}",
                        op.dim()
                    )));
                }
                op.clone()
            }
        })
    }

    fn name(&self) -> Option<&'static str> {
        match self {
            SingleQubit::I => Some("I"),
            SingleQubit::X => Some("X"),
            SingleQubit::Y => Some("Y"),
            SingleQubit::Z => Some("Z"),
            SingleQubit::H => Some("H"),
            SingleQubit::Custom(_) => None,
        }
    }

    fn adjoint(&self) -> Self {
        match self {
            SingleQubit::Custom(op) => SingleQubit::Custom(op.adjoint()),
            named => named.clone(),
        }
    }
}

impl FromStr for SingleQubit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "I" => Ok(SingleQubit::I),
            "X" => Ok(SingleQubit::X),
            "Y" => Ok(SingleQubit::Y),
            "Z" => Ok(SingleQubit::Z),
            "H" => Ok(SingleQubit::H),
            other => Err(format!("unknown single-qubit gate '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    /// Not gate.
    X,
    /// Hadamard.
    H,
    /// Generic single-qubit operation.
    Single(SingleQubit),
    /// Controlled Not, control on the first wire.
    CNot,
    /// Controlled `Z` for an arbitrary 2×2 `Z`, embedded in the lower-right block.
    CZ(SingleQubit),
    /// Identity on `d` levels (`d` = 2 or 4).
    Identity(usize),
}

impl Gate {
    pub fn arity(&self) -> usize {
        match self {
            Gate::X | Gate::H | Gate::Single(_) => 1,
            Gate::CNot | Gate::CZ(_) => 2,
            Gate::Identity(d) => {
                if *d == 4 {
                    2
                } else {
                    1
                }
            }
        }
    }

    /// Step-reversal partner: the gate whose matrix is this one's adjoint.
    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::Single(s) => Gate::Single(s.adjoint()),
            Gate::CZ(s) => Gate::CZ(s.adjoint()),
            g => g.clone(),
        }
    }

    fn token(&self) -> Result<String> {
        let named = |s: &SingleQubit| {
            s.name()
                .ok_or_else(|| Error::Contract("custom matrices have no text form".into()))
        };
        Ok(match self {
            Gate::X => "X".into(),
            Gate::H => "H".into(),
            Gate::Single(s) => named(s)?.into(),
            Gate::CNot => "CNOT".into(),
            Gate::CZ(SingleQubit::Z) => "CZ".into(),
            Gate::CZ(s) => format!("CZ:{}", named(s)?),
            Gate::Identity(4) => "I2".into(),
            Gate::Identity(_) => "I".into(),
        })
    }
}

/// Matrix of a gate. CZ is certified unitary only when its `Z` is.
pub fn gate_matrix(gate: &Gate) -> Result<Operator> {
    match gate {
        Gate::X => Ok(Operator::pauli_x()),
        Gate::H => Ok(Operator::hadamard()),
        Gate::Single(s) => {
            let m = s.matrix()?;
            Ok(m.clone().certify_unitary().unwrap_or(m))
        }
        Gate::CNot => controlled(&Operator::pauli_x()),
        Gate::CZ(z) => controlled(&z.matrix()?),
        Gate::Identity(d) if *d == 2 || *d == 4 => Ok(Operator::identity(*d)),
        Gate::Identity(d) => Err(Error::Shape(format!("identity gate on {d} levels"))),
    }
}

fn controlled(z: &Operator) -> Result<Operator> {
    if z.dim() != 2 {
        return Err(Error::Shape(format!(
            "controlled gate needs a 2×2 Z, got {0}×{0}",
            z.dim()
        )));
    }
    let mut m = DMatrix::<C64>::identity(4, 4);
    m.view_mut((2, 2), (2, 2)).copy_from(z.entries());
    let op = Operator::from_matrix(m)?;
    Ok(op.clone().certify_unitary().unwrap_or(op))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub gate: Gate,
    pub wires: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    steps: Vec<Step>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Contract("a circuit needs at least one wire".into()));
        }
        Ok(Self {
            n_qubits,
            steps: Vec::new(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Appends a step after validating its wires.
    pub fn push(&mut self, gate: Gate, wires: &[usize]) -> Result<&mut Self> {
        if wires.len() != gate.arity() {
            return Err(Error::Contract(format!(
                "{gate:?} acts on {} wire(s), got {wires:?}",
                gate.arity()
            )));
        }
        if let Some(&w) = wires.iter().find(|&&w| w >= self.n_qubits) {
            return Err(Error::Contract(format!(
                "wire {w} outside a {}-wire circuit",
                self.n_qubits
            )));
        }
        if wires.len() == 2 && wires[0] == wires[1] {
            return Err(Error::Contract(format!(
                "two-qubit gate on repeated wire {}",
                wires[0]
            )));
        }
        self.steps.push(Step {
            gate,
            wires: wires.to_vec(),
        });
        Ok(self)
    }

    /// Builder form of [`Circuit::push`].
    pub fn with(mut self, gate: Gate, wires: &[usize]) -> Result<Self> {
        self.push(gate, wires)?;
        Ok(self)
    }

    /// Steps reversed with each gate replaced by its adjoint.
    pub fn adjoint(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            steps: self
                .steps
                .iter()
                .rev()
                .map(|s| Step {
                    gate: s.gate.adjoint(),
                    wires: s.wires.clone(),
                })
                .collect(),
        }
    }

    /// Full-register matrix; the empty circuit gives the identity.
    pub fn compose(&self) -> Result<Operator> {
        if self.n_qubits > MAX_CIRCUIT_QUBITS {
            return Err(Error::Capacity {
                requested: 1 << self.n_qubits,
                max: 1 << MAX_CIRCUIT_QUBITS,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut total = Operator::identity(dim);
        for step in &self.steps {
            let embedded = embed(&gate_matrix(&step.gate)?, &step.wires, self.n_qubits)?;
            total = embedded.matmul(&total)?;
        }
        Ok(total)
    }

    /// Text form, one step per line.
    pub fn to_text(&self) -> Result<String> {
        let mut out = format!("QUBITS {}\n", self.n_qubits);
        for step in &self.steps {
            let wires: Vec<String> = step.wires.iter().map(|w| w.to_string()).collect();
            out.push_str(&format!("{} {}\n", step.gate.token()?, wires.join(",")));
        }
        Ok(out)
    }

    /// Parses the text form. Without a `QUBITS` line the register is sized
    /// to the largest wire index used.
    pub fn parse(text: &str) -> Result<Self> {
        let mut declared: Option<usize> = None;
        let mut steps: Vec<(usize, Gate, Vec<usize>)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let head = parts.next().unwrap_or_default();
            let arg = parts
                .next()
                .ok_or_else(|| err(format!("missing wires after '{head}'")))?;
            if parts.next().is_some() {
                return Err(err("trailing tokens".into()));
            }
            if head.eq_ignore_ascii_case("QUBITS") {
                if declared.is_some() || !steps.is_empty() {
                    return Err(err("QUBITS must appear once, before any gate".into()));
                }
                declared = Some(
                    arg.parse()
                        .map_err(|_| err(format!("bad qubit count '{arg}'")))?,
                );
                continue;
            }
            let gate = parse_gate(head).map_err(err)?;
            let wires = arg
                .split(',')
                .map(|w| {
                    w.trim()
                        .parse::<usize>()
                        .map_err(|_| err(format!("bad wire '{w}'")))
                })
                .collect::<Result<Vec<_>>>()?;
            steps.push((line_no, gate, wires));
        }
        let n = declared.unwrap_or_else(|| {
            steps
                .iter()
                .flat_map(|(_, _, w)| w.iter().copied())
                .max()
                .map_or(1, |m| m + 1)
        });
        let mut circuit = Circuit::new(n).map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?;
        for (line, gate, wires) in steps {
            circuit.push(gate, &wires).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
        }
        Ok(circuit)
    }
}

fn parse_gate(token: &str) -> std::result::Result<Gate, String> {
    let upper = token.to_ascii_uppercase();
    match upper.as_str() {
        "X" => Ok(Gate::X),
        "H" => Ok(Gate::H),
        "I" => Ok(Gate::Identity(2)),
        "I2" => Ok(Gate::Identity(4)),
        "CNOT" => Ok(Gate::CNot),
        "CZ" => Ok(Gate::CZ(SingleQubit::Z)),
        _ => {
            if let Some(inner) = upper.strip_prefix("CZ:") {
                return inner.parse().map(Gate::CZ);
            }
            upper.parse().map(Gate::Single)
        }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_text() {
            Ok(t) => f.write_str(&t),
            Err(_) => write!(
                f,
                "<circuit with custom matrices, {} steps>",
                self.steps.len()
            ),
        }
    }
}

/// Places a 1- or 2-qubit operator on `wires` of an `n`-qubit register.
fn embed(op: &Operator, wires: &[usize], n: usize) -> Result<Operator> {
    let k = wires.len();
    if op.dim() != 1 << k {
        return Err(Error::Shape(format!(
            "{}-level operator on {k} wire(s)",
            op.dim()
        )));
    }
    let dim = 1usize << n;
    // Bit of wire w in a basis index: leftmost wire is the most significant.
    let bit = |index: usize, w: usize| (index >> (n - 1 - w)) & 1;
    let local = |index: usize| {
        wires
            .iter()
            .fold(0usize, |acc, &w| (acc << 1) | bit(index, w))
    };
    let mask: usize = wires.iter().map(|&w| 1usize << (n - 1 - w)).sum();
    let m = DMatrix::from_fn(dim, dim, |r, c| {
        if r & !mask == c & !mask {
            op.entry(local(r), local(c))
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let embedded = Operator::from_matrix(m)?;
    Ok(
        if op.certification() == crate::quantum::Certification::Unitary {
            embedded.certify_unitary()?
        } else {
            embedded
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{StateVector, Tensor};

    fn real(rows: &[&[f64]]) -> Operator {
        Operator::from_real_rows(rows).unwrap()
    }

    #[test]
    fn hadamard_matrix() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(
            gate_matrix(&Gate::H)
                .unwrap()
                .max_abs_diff(&real(&[&[h, h], &[h, -h]]))
                < 1e-15
        );
    }

    #[test]
    fn cz_of_x_is_cnot() {
        let cnot = gate_matrix(&Gate::CNot).unwrap();
        let cz_x = gate_matrix(&Gate::CZ(SingleQubit::X)).unwrap();
        assert_eq!(cnot, cz_x);
        let expected = real(&[
            &[1., 0., 0., 0.],
            &[0., 1., 0., 0.],
            &[0., 0., 0., 1.],
            &[0., 0., 1., 0.],
        ]);
        assert!(cnot.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn cz_of_identity() {
        let m = gate_matrix(&Gate::CZ(SingleQubit::I)).unwrap();
        assert!(m.max_abs_diff(&Operator::identity(4)) < 1e-15);
    }

    #[test]
    fn cz_rejects_wrong_shape() {
        let err = gate_matrix(&Gate::CZ(SingleQubit::Custom(Operator::identity(4)))).unwrap_err();
        assert_eq!(err.name(), "ShapeError");
    }

    #[test]
    fn non_unitary_z_stays_uncertified() {
        let z = real(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let m = gate_matrix(&Gate::CZ(SingleQubit::Custom(z))).unwrap();
        assert_eq!(m.certification(), crate::quantum::Certification::None);
    }

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(3).unwrap();
        assert_eq!(c.compose().unwrap(), Operator::identity(8));
    }

    #[test]
    fn wire_validation() {
        let mut c = Circuit::new(2).unwrap();
        assert_eq!(c.push(Gate::X, &[2]).unwrap_err().name(), "ContractError");
        assert_eq!(
            c.push(Gate::CNot, &[1, 1]).unwrap_err().name(),
            "ContractError"
        );
        assert_eq!(
            c.push(Gate::CNot, &[0]).unwrap_err().name(),
            "ContractError"
        );
    }

    #[test]
    fn reversed_cnot_wires() {
        // CNot with control on wire 1 equals the H-conjugated CNot.
        let flipped = Circuit::new(2)
            .unwrap()
            .with(Gate::CNot, &[1, 0])
            .unwrap()
            .compose()
            .unwrap();
        let expected = real(&[
            &[1., 0., 0., 0.],
            &[0., 0., 0., 1.],
            &[0., 0., 1., 0.],
            &[0., 1., 0., 0.],
        ]);
        assert!(flipped.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn single_qubit_on_second_wire() {
        let c = Circuit::new(2).unwrap().with(Gate::X, &[1]).unwrap();
        let expected = Operator::identity(2).tensor(&Operator::pauli_x()).unwrap();
        assert!(c.compose().unwrap().max_abs_diff(&expected) < 1e-15);
        let out = c
            .compose()
            .unwrap()
            .apply(&StateVector::qubits(&[0, 0]).unwrap())
            .unwrap();
        assert_eq!(out, StateVector::qubits(&[0, 1]).unwrap());
    }

    #[test]
    fn text_round_trip() {
        let text = "# demo\nQUBITS 3\nH 0\nCNOT 0,2\nCZ:H 2,1\nCZ 1,0\nY 1\nI2 0,1\n";
        let c = Circuit::parse(text).unwrap();
        assert_eq!(c.n_qubits(), 3);
        assert_eq!(c.steps().len(), 6);
        assert_eq!(Circuit::parse(&c.to_text().unwrap()).unwrap(), c);
    }

    #[test]
    fn parse_infers_width_and_reports_lines() {
        let c = Circuit::parse("h 0\ncnot 0,3\n").unwrap();
        assert_eq!(c.n_qubits(), 4);
        let err = Circuit::parse("H 0\nFOO 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = Circuit::parse("QUBITS 1\nCNOT 0,1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
