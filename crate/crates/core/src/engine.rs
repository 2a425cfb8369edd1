// SPDX-License-Identifier: Apache-2.0

//! Clocked bistable relaxation.
//!
//! Each free cell settles to `P = x / sqrt(1 + x^2)` with
//! `x = sum_j Ek(i, j) * P_j / (2 * gamma)`, where `Ek` is the pair kink energy
//! and `gamma` the tunneling energy of the cell's clock zone. Sweeps are
//! Gauss-Seidel in layout order, so results depend on cell order and nothing else.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::clock::ClockConfig;
use crate::electrostatics::{kink_energy, ElectrostaticsError};
use crate::model::{Layout, Polarity, Role};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("relaxation did not converge after {sweeps} sweeps (residual {residual:e}){}", at_suffix(*.vector, *.sample))]
    ConvergenceFailure {
        residual: f64,
        sweeps: usize,
        vector: Option<usize>,
        sample: Option<usize>,
    },
    #[error("layout has no output cells")]
    NoOutput,
    #[error("input vector {vector} does not assign input {label}")]
    MissingInput { vector: usize, label: String },
    #[error("input vector {vector} assigns unknown input {label}")]
    UnknownInput { vector: usize, label: String },
    #[error("input cell {0} is not pinned")]
    Unpinned(String),
    #[error("exhaustive schedule over {0} inputs is too large")]
    TooManyInputs(usize),
    #[error("invalid clock: {0}")]
    InvalidClock(String),
    #[error("invalid relaxation options: {0}")]
    InvalidOptions(String),
    #[error(transparent)]
    Electrostatics(#[from] ElectrostaticsError),
}

fn at_suffix(vector: Option<usize>, sample: Option<usize>) -> String {
    match (vector, sample) {
        (Some(v), Some(s)) => format!(" at vector {v}, sample {s}"),
        _ => String::new(),
    }
}

/// Bistable cell response; odd, strictly increasing and bounded by +-1.
pub fn cell_response(x: f64) -> f64 {
    x / (1.0 + x * x).sqrt()
}

/// Kink energies between every cell pair within the radius of effect.
#[derive(Clone, Debug, PartialEq)]
pub struct Couplings {
    neighbors: Vec<Vec<(usize, f64)>>,
}

impl Couplings {
    pub fn new(layout: &Layout) -> Result<Self, ElectrostaticsError> {
        let g = &layout.geometry;
        let n = layout.cells.len();
        let mut neighbors = vec![Vec::new(); n];
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (&layout.cells[i], &layout.cells[j]);
                if a.center.distance(b.center) > g.radius_of_effect {
                    continue;
                }
                let ek = kink_energy(a, b, g)?;
                neighbors[i].push((j, ek));
                neighbors[j].push((i, ek));
            }
        }
        for list in &mut neighbors {
            list.sort_by_key(|&(j, _)| j);
        }
        Ok(Self { neighbors })
    }

    /// Neighbours of cell `i` as `(index, kink energy)`, in layout order.
    pub fn of(&self, i: usize) -> &[(usize, f64)] {
        &self.neighbors[i]
    }

    pub fn len(&self) -> usize {
        self.neighbors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbors.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelaxOptions {
    pub tolerance: f64,
    pub max_iters: usize,
}

impl Default for RelaxOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-7,
            max_iters: 1000,
        }
    }
}

impl RelaxOptions {
    fn check(&self) -> Result<(), EngineError> {
        if !(self.tolerance > 0.0) || self.max_iters == 0 {
            return Err(EngineError::InvalidOptions(format!(
                "tolerance must be > 0 and max_iters >= 1 (got {}, {})",
                self.tolerance, self.max_iters
            )));
        }
        Ok(())
    }
}

/// Pins for every Fixed cell, all other cells free.
pub fn fixed_pins(layout: &Layout) -> Vec<Option<Polarity>> {
    layout
        .cells
        .iter()
        .map(|c| match c.role {
            Role::Fixed(p) => Some(p),
            _ => None,
        })
        .collect()
}

/// Pins for Fixed cells plus every Input cell from `vector`.
pub fn pins_for(layout: &Layout, vector: &InputVector, index: usize) -> Result<Vec<Option<Polarity>>, EngineError> {
    let mut pins = fixed_pins(layout);
    for (pin, cell) in pins.iter_mut().zip(&layout.cells) {
        if let Role::Input(label) = &cell.role {
            let p = vector.get(label).ok_or_else(|| EngineError::MissingInput {
                vector: index,
                label: label.clone(),
            })?;
            *pin = Some(*p);
        }
    }
    Ok(pins)
}

/// Relaxes `state` in place and returns the number of sweeps used.
///
/// Pinned cells are set to exactly +-1; every Input cell must be pinned.
pub fn relax_in_place(
    layout: &Layout,
    couplings: &Couplings,
    pins: &[Option<Polarity>],
    gamma_per_zone: [f64; 4],
    state: &mut [f64],
    opts: RelaxOptions,
) -> Result<usize, EngineError> {
    opts.check()?;
    for (i, cell) in layout.cells.iter().enumerate() {
        match pins[i] {
            Some(p) => state[i] = p.value(),
            None if cell.role.is_input() => return Err(EngineError::Unpinned(cell.id.clone())),
            None => {}
        }
    }
    let free: Vec<usize> = (0..layout.cells.len()).filter(|&i| pins[i].is_none()).collect();
    let two_gamma: Vec<f64> = layout
        .cells
        .iter()
        .map(|c| 2.0 * gamma_per_zone[c.clock_zone as usize % 4])
        .collect();

    let mut residual = 0.0;
    for sweep in 1..=opts.max_iters {
        residual = 0.0f64;
        for &i in &free {
            let field: f64 = couplings.of(i).iter().map(|&(j, ek)| ek * state[j]).sum();
            let next = cell_response(field / two_gamma[i]);
            residual = residual.max((next - state[i]).abs());
            state[i] = next;
        }
        if residual < opts.tolerance {
            return Ok(sweep);
        }
    }
    Err(EngineError::ConvergenceFailure {
        residual,
        sweeps: opts.max_iters,
        vector: None,
        sample: None,
    })
}

/// Relaxes from `initial` and returns the settled polarizations and sweep count.
pub fn relax(
    layout: &Layout,
    pins: &[Option<Polarity>],
    gamma_per_zone: [f64; 4],
    initial: &[f64],
    opts: RelaxOptions,
) -> Result<(Vec<f64>, usize), EngineError> {
    let couplings = Couplings::new(layout)?;
    let mut state = initial.to_vec();
    let sweeps = relax_in_place(layout, &couplings, pins, gamma_per_zone, &mut state, opts)?;
    Ok((state, sweeps))
}

/// Input label to polarity.
pub type InputVector = BTreeMap<String, Polarity>;

#[derive(Clone, Debug, PartialEq)]
pub enum InputSchedule {
    /// All `2^n` vectors; labels sorted, first label most significant, -1 as bit 0.
    Exhaustive,
    Explicit(Vec<InputVector>),
}

const MAX_EXHAUSTIVE_INPUTS: usize = 16;

impl InputSchedule {
    pub fn vectors(&self, labels: &[String]) -> Result<Vec<InputVector>, EngineError> {
        match self {
            InputSchedule::Exhaustive => {
                let n = labels.len();
                if n > MAX_EXHAUSTIVE_INPUTS {
                    return Err(EngineError::TooManyInputs(n));
                }
                Ok((0..1usize << n)
                    .map(|bits| {
                        labels
                            .iter()
                            .enumerate()
                            .map(|(k, l)| (l.clone(), Polarity::from_bool(bits >> (n - 1 - k) & 1 == 1)))
                            .collect()
                    })
                    .collect())
            }
            InputSchedule::Explicit(vectors) => {
                for (v, vector) in vectors.iter().enumerate() {
                    if let Some(label) = labels.iter().find(|l| !vector.contains_key(*l)) {
                        return Err(EngineError::MissingInput {
                            vector: v,
                            label: label.clone(),
                        });
                    }
                    if let Some(label) = vector.keys().find(|k| !labels.contains(k)) {
                        return Err(EngineError::UnknownInput {
                            vector: v,
                            label: label.clone(),
                        });
                    }
                }
                Ok(vectors.clone())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub vector: usize,
    /// Sample index within the vector's clock cycle.
    pub sample: usize,
    pub gamma: [f64; 4],
    pub polarization: Vec<f64>,
    pub sweeps: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub cell_ids: Vec<String>,
    pub vectors: Vec<InputVector>,
    pub clock: ClockConfig,
    pub rows: Vec<TraceRow>,
}

impl Trace {
    pub fn vector_rows(&self, vector: usize) -> &[TraceRow] {
        let n = self.clock.samples_per_cycle;
        &self.rows[vector * n..(vector + 1) * n]
    }

    pub fn max_sweeps(&self) -> usize {
        self.rows.iter().map(|r| r.sweeps).max().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimOptions {
    pub relax: RelaxOptions,
    /// Carry polarizations across vectors. When false every vector starts from
    /// P = 0, which makes vectors independent of each other.
    pub warm_start: bool,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            relax: RelaxOptions::default(),
            warm_start: true,
        }
    }
}

/// Runs one clock cycle per input vector and records every sample.
pub fn simulate(
    layout: &Layout,
    clock: &ClockConfig,
    schedule: &InputSchedule,
    opts: SimOptions,
) -> Result<Trace, EngineError> {
    clock.validate()?;
    opts.relax.check()?;
    let vectors = schedule.vectors(&layout.input_labels())?;
    let couplings = Couplings::new(layout)?;
    let n = clock.samples_per_cycle;
    let mut state = vec![0.0; layout.cells.len()];
    let mut rows = Vec::with_capacity(vectors.len() * n);

    for (v, vector) in vectors.iter().enumerate() {
        if !opts.warm_start {
            state.iter_mut().for_each(|p| *p = 0.0);
        }
        let pins = pins_for(layout, vector, v)?;
        for sample in 0..n {
            let gamma = clock.gamma_per_zone(sample);
            let sweeps = relax_in_place(layout, &couplings, &pins, gamma, &mut state, opts.relax).map_err(|e| match e {
                EngineError::ConvergenceFailure { residual, sweeps, .. } => EngineError::ConvergenceFailure {
                    residual,
                    sweeps,
                    vector: Some(v),
                    sample: Some(sample),
                },
                other => other,
            })?;
            rows.push(TraceRow {
                vector: v,
                sample,
                gamma,
                polarization: state.clone(),
                sweeps,
            });
        }
    }

    Ok(Trace {
        cell_ids: layout.cells.iter().map(|c| c.id.clone()).collect(),
        vectors,
        clock: *clock,
        rows,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OutputSample {
    /// Polarization at the last hold sample of the output's zone.
    pub steady: f64,
    pub max_abs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OutputMeasurement {
    pub label: String,
    pub cell_id: String,
    /// One entry per input vector.
    pub per_vector: Vec<OutputSample>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    pub vectors: Vec<InputVector>,
    pub outputs: Vec<OutputMeasurement>,
}

impl Measurement {
    pub fn output(&self, label: &str) -> Option<&OutputMeasurement> {
        self.outputs.iter().find(|o| o.label == label)
    }
}

pub fn measure(trace: &Trace, layout: &Layout) -> Result<Measurement, EngineError> {
    let outputs: Vec<OutputMeasurement> = layout
        .cells
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match &c.role {
            Role::Output(label) => Some((i, c, label)),
            _ => None,
        })
        .map(|(i, cell, label)| {
            let hold_end = trace.clock.hold_end(cell.clock_zone);
            let per_vector = (0..trace.vectors.len())
                .map(|v| {
                    let rows = trace.vector_rows(v);
                    OutputSample {
                        steady: rows[hold_end].polarization[i],
                        max_abs: rows.iter().map(|r| r.polarization[i].abs()).fold(0.0, f64::max),
                    }
                })
                .collect();
            OutputMeasurement {
                label: label.clone(),
                cell_id: cell.id.clone(),
                per_vector,
            }
        })
        .collect();
    if outputs.is_empty() {
        return Err(EngineError::NoOutput);
    }
    Ok(Measurement {
        vectors: trace.vectors.clone(),
        outputs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Cell, GeometryParams, Point};

    fn wire2() -> Layout {
        Layout::new(
            GeometryParams::default(),
            vec![
                Cell::new("in", Point::new(0.0, 0.0), Role::Input("a".into())),
                Cell::new("out", Point::new(20.0, 0.0), Role::Output("b".into())),
            ],
        )
    }

    fn one_vector(label: &str, p: Polarity) -> InputVector {
        [(label.to_string(), p)].into_iter().collect()
    }

    #[test]
    fn response_is_odd_monotone_bounded() {
        let xs = [-1e6, -10.0, -1.0, -0.1, 0.0, 0.1, 1.0, 10.0, 1e6];
        for w in xs.windows(2) {
            assert!(cell_response(w[0]) < cell_response(w[1]));
        }
        for x in xs {
            assert_eq!(cell_response(-x), -cell_response(x));
            assert!(cell_response(x).abs() < 1.0);
        }
    }

    #[test]
    fn follower_saturates_at_low_gamma() {
        let layout = wire2();
        let g = ClockConfig::default().gamma_low;
        let pins = vec![Some(Polarity::Plus), None];
        let (p, _) = relax(&layout, &pins, [g; 4], &[0.0, 0.0], RelaxOptions::default()).unwrap();
        // closed-form fixed point for a single follower
        let x = 1.408885558268613e-20 / (2.0 * g);
        let expected = x / (1.0 + x * x).sqrt();
        assert!((p[1] - expected).abs() < 1e-9);
        assert!((p[1] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn all_fixed_takes_one_sweep() {
        let layout = Layout::new(
            GeometryParams::default(),
            vec![
                Cell::new("f0", Point::new(0.0, 0.0), Role::Fixed(Polarity::Plus)),
                Cell::new("f1", Point::new(20.0, 0.0), Role::Fixed(Polarity::Minus)),
            ],
        );
        let pins = fixed_pins(&layout);
        let (p, sweeps) = relax(&layout, &pins, [1e-22; 4], &[0.3, 0.3], RelaxOptions::default()).unwrap();
        assert_eq!(p, vec![1.0, -1.0]);
        assert_eq!(sweeps, 1);
    }

    #[test]
    fn diagonal_follower_inverts() {
        let layout = Layout::new(
            GeometryParams::default(),
            vec![
                Cell::new("in", Point::new(0.0, 0.0), Role::Input("a".into())),
                Cell::new("d", Point::new(20.0, 20.0), Role::Normal),
            ],
        );
        let pins = vec![Some(Polarity::Plus), None];
        let (p, _) = relax(&layout, &pins, [3.8e-23; 4], &[0.0, 0.0], RelaxOptions::default()).unwrap();
        assert!(p[1] < 0.0);
    }

    #[test]
    fn unpinned_input_and_bad_options() {
        let layout = wire2();
        let r = relax(&layout, &[None, None], [1e-22; 4], &[0.0; 2], RelaxOptions::default());
        assert_eq!(r, Err(EngineError::Unpinned("in".into())));
        let bad = RelaxOptions {
            tolerance: 0.0,
            max_iters: 10,
        };
        assert!(matches!(
            relax(&layout, &[Some(Polarity::Plus), None], [1e-22; 4], &[0.0; 2], bad),
            Err(EngineError::InvalidOptions(_))
        ));
    }

    #[test]
    fn convergence_failure_carries_residual() {
        let layout = wire2();
        let opts = RelaxOptions {
            tolerance: 1e-7,
            max_iters: 1,
        };
        // a single sweep from 0 moves the follower by ~1
        match relax(&layout, &[Some(Polarity::Plus), None], [1e-22; 4], &[0.0; 2], opts) {
            Err(EngineError::ConvergenceFailure { residual, sweeps, .. }) => {
                assert!(residual > 0.5);
                assert_eq!(sweeps, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn exhaustive_order_is_binary_counting() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let v = InputSchedule::Exhaustive.vectors(&labels).unwrap();
        let bits: Vec<(bool, bool)> = v.iter().map(|m| (m["a"].as_bool(), m["b"].as_bool())).collect();
        assert_eq!(bits, vec![(false, false), (false, true), (true, false), (true, true)]);
        assert_eq!(InputSchedule::Exhaustive.vectors(&[]).unwrap().len(), 1);
    }

    #[test]
    fn explicit_schedule_checks_labels() {
        let labels = vec!["a".to_string()];
        let missing = InputSchedule::Explicit(vec![InputVector::new()]);
        assert_eq!(
            missing.vectors(&labels),
            Err(EngineError::MissingInput {
                vector: 0,
                label: "a".into()
            })
        );
        let mut extra = one_vector("a", Polarity::Plus);
        extra.insert("z".into(), Polarity::Minus);
        assert!(matches!(
            InputSchedule::Explicit(vec![extra]).vectors(&labels),
            Err(EngineError::UnknownInput { .. })
        ));
    }

    #[test]
    fn trace_shape_and_measure() {
        let layout = wire2();
        let clock = ClockConfig::default();
        let trace = simulate(&layout, &clock, &InputSchedule::Exhaustive, SimOptions::default()).unwrap();
        assert_eq!(trace.rows.len(), 2 * clock.samples_per_cycle);
        let m = measure(&trace, &layout).unwrap();
        let out = m.output("b").unwrap();
        assert!(out.per_vector[0].steady < -0.99);
        assert!(out.per_vector[1].steady > 0.99);
        for s in &out.per_vector {
            assert!(s.steady.abs() <= s.max_abs && s.max_abs <= 1.0);
        }
    }

    #[test]
    fn constant_trace_measures_constant() {
        let layout = Layout::new(
            GeometryParams::default(),
            vec![Cell::new("o", Point::new(0.0, 0.0), Role::Output("o".into()))],
        );
        let clock = ClockConfig::default();
        let rows = (0..clock.samples_per_cycle)
            .map(|s| TraceRow {
                vector: 0,
                sample: s,
                gamma: clock.gamma_per_zone(s),
                polarization: vec![0.25],
                sweeps: 1,
            })
            .collect();
        let trace = Trace {
            cell_ids: vec!["o".into()],
            vectors: vec![InputVector::new()],
            clock,
            rows,
        };
        let m = measure(&trace, &layout).unwrap();
        assert_eq!(
            m.outputs[0].per_vector,
            vec![OutputSample {
                steady: 0.25,
                max_abs: 0.25
            }]
        );
    }

    #[test]
    fn measure_without_outputs() {
        let layout = Layout::new(
            GeometryParams::default(),
            vec![Cell::new("in", Point::new(0.0, 0.0), Role::Input("a".into()))],
        );
        let trace = simulate(&layout, &ClockConfig::default(), &InputSchedule::Exhaustive, SimOptions::default()).unwrap();
        assert_eq!(measure(&trace, &layout), Err(EngineError::NoOutput));
    }

    #[test]
    fn simulate_reports_failing_sample() {
        let opts = SimOptions {
            relax: RelaxOptions {
                tolerance: 1e-7,
                max_iters: 1,
            },
            warm_start: true,
        };
        let r = simulate(&wire2(), &ClockConfig::default(), &InputSchedule::Exhaustive, opts);
        assert!(matches!(
            r,
            Err(EngineError::ConvergenceFailure {
                vector: Some(0),
                sample: Some(0),
                ..
            })
        ));
    }
}
