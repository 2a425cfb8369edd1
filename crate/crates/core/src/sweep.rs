// SPDX-License-Identifier: Apache-2.0

//! Minimal-inverter sweep: kink energy and output polarization versus the
//! number of extra output cells.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use crate::clock::ClockConfig;
use crate::electrostatics::circuit_kink_energy;
use crate::engine::{measure, simulate, EngineError, InputSchedule, SimOptions};
use crate::model::GeometryParams;
use crate::stdcells::gen_minimal_inverter;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub total_cells: usize,
    pub kink_bare: f64,
    pub kink_neutralized: f64,
    /// Largest |P| of the output over all vectors and samples.
    pub max_abs_output_polarization: f64,
    /// Steady output polarization per input vector (a = -1, then a = +1).
    pub steady_output_polarization: Vec<f64>,
}

/// Published kink energy (J) and output |P| for the 3- to 6-cell inverters.
pub const REFERENCE_ROWS: [(usize, f64, f64); 4] = [
    (3, 6.838e-20, 0.950),
    (4, 10.862e-20, 0.986),
    (5, 14.986e-20, 0.994),
    (6, 17.328e-20, 0.994),
];

pub fn run_sweep(
    extra: RangeInclusive<i32>,
    geometry: GeometryParams,
    clock: &ClockConfig,
    opts: SimOptions,
) -> Result<Vec<SweepRow>, EngineError> {
    extra
        .map(|k| {
            let layout = gen_minimal_inverter(k, geometry).map_err(|e| EngineError::InvalidOptions(e.to_string()))?;
            let kinks = circuit_kink_energy(&layout)?;
            let trace = simulate(&layout, clock, &InputSchedule::Exhaustive, opts)?;
            let m = measure(&trace, &layout)?;
            let out = m.output("b").ok_or(EngineError::NoOutput)?;
            Ok(SweepRow {
                total_cells: layout.cells.len(),
                kink_bare: kinks.total_bare,
                kink_neutralized: kinks.total_neutralized,
                max_abs_output_polarization: out.per_vector.iter().map(|s| s.max_abs).fold(0.0, f64::max),
                steady_output_polarization: out.per_vector.iter().map(|s| s.steady).collect(),
            })
        })
        .collect()
}

/// Markdown table putting computed rows next to the published reference values.
pub fn comparison_table(rows: &[SweepRow]) -> String {
    let mut out = String::from(
        "| cells | kink neutralized (J) | kink bare (J) | reference kink (J) | max abs P | reference abs P |\n\
         |---|---|---|---|---|---|\n",
    );
    for r in rows {
        let reference = REFERENCE_ROWS.iter().find(|(n, _, _)| *n == r.total_cells);
        let (rk, rp) = match reference {
            Some((_, k, p)) => (format!("{k:.5e}"), format!("{p:.3}")),
            None => ("-".into(), "-".into()),
        };
        let _ = writeln!(
            out,
            "| {} | {:.5e} | {:.5e} | {} | {:.9} | {} |",
            r.total_cells, r.kink_neutralized, r.kink_bare, rk, r.max_abs_output_polarization, rp
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_follow_cell_count() {
        let rows = run_sweep(0..=3, GeometryParams::default(), &ClockConfig::default(), SimOptions::default()).unwrap();
        let cells: Vec<usize> = rows.iter().map(|r| r.total_cells).collect();
        assert_eq!(cells, vec![3, 4, 5, 6]);
        for r in &rows {
            assert_eq!(r.steady_output_polarization.len(), 2);
            assert!(r.max_abs_output_polarization <= 1.0);
        }
        let table = comparison_table(&rows);
        assert_eq!(table.lines().count(), 6);
        assert!(table.contains("| 3 |"));
    }
}
