// SPDX-License-Identifier: Apache-2.0

//! Compares measured output polarizations with an expected boolean function.

use std::fmt;
use std::str::FromStr;

use crate::engine::{InputVector, Measurement};
use crate::model::Polarity;

/// |steady| below this is treated as undecided.
pub const DECISION_MARGIN: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogicFunction {
    Identity,
    Not,
    Majority,
}

impl LogicFunction {
    pub fn arity(self) -> usize {
        match self {
            LogicFunction::Identity | LogicFunction::Not => 1,
            LogicFunction::Majority => 3,
        }
    }

    /// Evaluates over inputs in label-sorted order.
    pub fn eval(self, inputs: &[bool]) -> bool {
        match self {
            LogicFunction::Identity => inputs[0],
            LogicFunction::Not => !inputs[0],
            LogicFunction::Majority => {
                let (a, b, c) = (inputs[0], inputs[1], inputs[2]);
                (a && b) || (b && c) || (c && a)
            }
        }
    }

    pub fn eval_vector(self, vector: &InputVector) -> bool {
        let bits: Vec<bool> = vector.values().map(|p| p.as_bool()).collect();
        self.eval(&bits)
    }
}

impl FromStr for LogicFunction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "id" => Ok(LogicFunction::Identity),
            "not" => Ok(LogicFunction::Not),
            "maj" => Ok(LogicFunction::Majority),
            other => Err(format!("unknown function `{other}` (expected not, maj or id)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub vector: usize,
    pub output: String,
    pub expected: bool,
    pub steady: f64,
    pub pass: bool,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "vector {} output {}: expected {} steady {:+.6} {}",
            self.vector,
            self.output,
            Polarity::from_bool(self.expected),
            self.steady,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TruthReport {
    pub verdicts: Vec<Verdict>,
}

impl TruthReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }
}

/// Checks every output on every vector against `expected`.
///
/// A vector passes when the sign of the steady polarization matches and its
/// magnitude reaches [`DECISION_MARGIN`].
pub fn truth_check(measurement: &Measurement, expected: impl Fn(&InputVector) -> bool) -> TruthReport {
    let mut verdicts = Vec::new();
    for (v, vector) in measurement.vectors.iter().enumerate() {
        let want = expected(vector);
        for out in &measurement.outputs {
            let steady = out.per_vector[v].steady;
            let pass = Polarity::of(steady) == Some(Polarity::from_bool(want)) && steady.abs() >= DECISION_MARGIN;
            verdicts.push(Verdict {
                vector: v,
                output: out.label.clone(),
                expected: want,
                steady,
                pass,
            });
        }
    }
    TruthReport { verdicts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{OutputMeasurement, OutputSample};

    fn measurement(values: &[(Polarity, f64)]) -> Measurement {
        Measurement {
            vectors: values.iter().map(|(p, _)| [("a".to_string(), *p)].into_iter().collect()).collect(),
            outputs: vec![OutputMeasurement {
                label: "b".into(),
                cell_id: "b".into(),
                per_vector: values
                    .iter()
                    .map(|&(_, s)| OutputSample {
                        steady: s,
                        max_abs: s.abs(),
                    })
                    .collect(),
            }],
        }
    }

    #[test]
    fn majority_table() {
        let f = LogicFunction::Majority;
        let ones = (0..8)
            .filter(|i| f.eval(&[i & 4 != 0, i & 2 != 0, i & 1 != 0]))
            .collect::<Vec<_>>();
        assert_eq!(ones, vec![3, 5, 6, 7]);
    }

    #[test]
    fn margin_and_sign() {
        let m = measurement(&[(Polarity::Minus, 0.9), (Polarity::Plus, -0.4)]);
        let r = truth_check(&m, |v| LogicFunction::Not.eval_vector(v));
        assert!(r.verdicts[0].pass);
        assert!(!r.verdicts[1].pass);
        assert!(!r.passed());
        let copy = measurement(&[(Polarity::Minus, -0.9), (Polarity::Plus, 0.9)]);
        assert!(!truth_check(&copy, |v| LogicFunction::Not.eval_vector(v)).verdicts.iter().any(|v| v.pass));
        assert!(truth_check(&copy, |v| LogicFunction::Identity.eval_vector(v)).passed());
    }

    #[test]
    fn parse_names() {
        assert_eq!("maj".parse(), Ok(LogicFunction::Majority));
        assert!("xor".parse::<LogicFunction>().is_err());
    }
}
