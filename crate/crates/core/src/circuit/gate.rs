use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Which basis state of a control qubit enables the gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarity {
    /// Fires when the control is `|0>` (open circle).
    Zero,
    /// Fires when the control is `|1>` (filled circle).
    One,
}

impl Polarity {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Polarity::One
        } else {
            Polarity::Zero
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Polarity::Zero => 0,
            Polarity::One => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Self { qubit, polarity: Polarity::One }
    }

    pub fn off(qubit: usize) -> Self {
        Self { qubit, polarity: Polarity::Zero }
    }
}

/// Single-qubit operations. Rotations follow the usual conventions:
/// `Ry(t) = exp(-i t Y / 2)`, `Phase(t) = diag(1, e^{i t})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OneQubit {
    H,
    X,
    Rx(f64),
    Ry(f64),
    Rz(f64),
    Phase(f64),
}

impl OneQubit {
    pub fn name(&self) -> &'static str {
        match self {
            OneQubit::H => "h",
            OneQubit::X => "x",
            OneQubit::Rx(_) => "rx",
            OneQubit::Ry(_) => "ry",
            OneQubit::Rz(_) => "rz",
            OneQubit::Phase(_) => "phase",
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            OneQubit::Rx(t) | OneQubit::Ry(t) | OneQubit::Rz(t) | OneQubit::Phase(t) => Some(t),
            OneQubit::H | OneQubit::X => None,
        }
    }

    pub fn from_name(name: &str, angle: Option<f64>) -> Option<Self> {
        Some(match (name, angle) {
            ("h", None) => OneQubit::H,
            ("x", None) => OneQubit::X,
            ("rx", Some(t)) => OneQubit::Rx(t),
            ("ry", Some(t)) => OneQubit::Ry(t),
            ("rz", Some(t)) => OneQubit::Rz(t),
            ("phase", Some(t)) => OneQubit::Phase(t),
            _ => return None,
        })
    }

    pub fn inverse(&self) -> Self {
        match *self {
            OneQubit::H => OneQubit::H,
            OneQubit::X => OneQubit::X,
            OneQubit::Rx(t) => OneQubit::Rx(-t),
            OneQubit::Ry(t) => OneQubit::Ry(-t),
            OneQubit::Rz(t) => OneQubit::Rz(-t),
            OneQubit::Phase(t) => OneQubit::Phase(-t),
        }
    }

    /// Row-major 2x2 matrix `[[m00, m01], [m10, m11]]`.
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let r = |x: f64| Complex64::new(x, 0.0);
        match *self {
            OneQubit::H => [[r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2)], [r(FRAC_1_SQRT_2), r(-FRAC_1_SQRT_2)]],
            OneQubit::X => [[r(0.0), r(1.0)], [r(1.0), r(0.0)]],
            OneQubit::Rx(t) => {
                let (s, c) = (t / 2.0).sin_cos();
                [[r(c), Complex64::new(0.0, -s)], [Complex64::new(0.0, -s), r(c)]]
            }
            OneQubit::Ry(t) => {
                let (s, c) = (t / 2.0).sin_cos();
                [[r(c), r(-s)], [r(s), r(c)]]
            }
            OneQubit::Rz(t) => [
                [Complex64::from_polar(1.0, -t / 2.0), r(0.0)],
                [r(0.0), Complex64::from_polar(1.0, t / 2.0)],
            ],
            OneQubit::Phase(t) => [[r(1.0), r(0.0)], [r(0.0), Complex64::from_polar(1.0, t)]],
        }
    }
}

/// One instruction of the gate-level IR.
///
/// Mixed-polarity multi-controlled gates are native here; they are only
/// lowered to X-conjugated positive controls by the basis decomposition.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Single { op: OneQubit, target: usize },
    Cx { control: usize, target: usize },
    Swap { a: usize, b: usize },
    MultiControlled { op: OneQubit, controls: Vec<Control>, target: usize },
}

impl Gate {
    pub fn single(op: OneQubit, target: usize) -> Self {
        Gate::Single { op, target }
    }

    pub fn h(q: usize) -> Self {
        Gate::single(OneQubit::H, q)
    }

    pub fn x(q: usize) -> Self {
        Gate::single(OneQubit::X, q)
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Gate::Cx { control, target }
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Gate::Swap { a, b }
    }

    /// A controlled gate; collapses to the plain form when there are no controls.
    pub fn controlled(op: OneQubit, controls: Vec<Control>, target: usize) -> Self {
        if controls.is_empty() {
            Gate::Single { op, target }
        } else {
            Gate::MultiControlled { op, controls, target }
        }
    }

    /// Short kind label used in reports and JSON (`mcry`, `cx`, ...).
    pub fn kind(&self) -> String {
        match self {
            Gate::Single { op, .. } => op.name().to_string(),
            Gate::Cx { .. } => "cx".to_string(),
            Gate::Swap { .. } => "swap".to_string(),
            Gate::MultiControlled { op, .. } => format!("mc{}", op.name()),
        }
    }

    /// Every qubit the gate touches, controls included.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Single { target, .. } => vec![*target],
            Gate::Cx { control, target } => vec![*control, *target],
            Gate::Swap { a, b } => vec![*a, *b],
            Gate::MultiControlled { controls, target, .. } => {
                let mut qs: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
                qs.push(*target);
                qs
            }
        }
    }

    /// Calls `f` on every qubit the gate touches without allocating.
    pub fn for_each_qubit(&self, mut f: impl FnMut(usize)) {
        match self {
            Gate::Single { target, .. } => f(*target),
            Gate::Cx { control, target } => {
                f(*control);
                f(*target)
            }
            Gate::Swap { a, b } => {
                f(*a);
                f(*b)
            }
            Gate::MultiControlled { controls, target, .. } => {
                controls.iter().for_each(|c| f(c.qubit));
                f(*target)
            }
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Gate::Single { op, target } => Gate::Single { op: op.inverse(), target: *target },
            Gate::MultiControlled { op, controls, target } => Gate::MultiControlled {
                op: op.inverse(),
                controls: controls.clone(),
                target: *target,
            },
            other => other.clone(),
        }
    }

    /// Structural checks: distinct qubits, all below `n_qubits`, finite angles.
    pub fn validate(&self, n_qubits: usize) -> Result<(), String> {
        let qs = self.qubits();
        if let Some(q) = qs.iter().find(|&&q| q >= n_qubits) {
            return Err(format!("{} acts on qubit {q} of a {n_qubits}-qubit circuit", self.kind()));
        }
        let mut sorted = qs.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != qs.len() {
            return Err(format!("{} repeats a qubit: {qs:?}", self.kind()));
        }
        let angle = match self {
            Gate::Single { op, .. } | Gate::MultiControlled { op, .. } => op.angle(),
            _ => None,
        };
        if angle.is_some_and(|t| !t.is_finite()) {
            return Err(format!("{} has a non-finite angle", self.kind()));
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Single { op, target } => match op.angle() {
                Some(t) => write!(f, "{}({t}) q{target}", op.name()),
                None => write!(f, "{} q{target}", op.name()),
            },
            Gate::Cx { control, target } => write!(f, "cx q{control}, q{target}"),
            Gate::Swap { a, b } => write!(f, "swap q{a}, q{b}"),
            Gate::MultiControlled { op, controls, target } => {
                write!(f, "mc{}", op.name())?;
                if let Some(t) = op.angle() {
                    write!(f, "({t})")?;
                }
                write!(f, " [")?;
                for (k, c) in controls.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "q{}={}", c.qubit, c.polarity.as_u8())?;
                }
                write!(f, "] q{target}")
            }
        }
    }
}
