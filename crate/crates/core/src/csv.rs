// SPDX-License-Identifier: Apache-2.0

//! CSV exporters for kink reports, traces, measurements and sweeps.
//!
//! Energies are written with six significant digits in scientific notation,
//! polarizations fixed-point with nine decimals. Lines end in `\n`.

use std::fmt::Write as _;

use crate::electrostatics::KinkReport;
use crate::engine::{Measurement, Trace};
use crate::qcl::energy;
use crate::sweep::SweepRow;

fn polarization(v: f64) -> String {
    format!("{v:.9}")
}

pub fn kink_report_csv(report: &KinkReport) -> String {
    let mut out = String::from("id_a,id_b,distance_nm,ekink_bare_J,ekink_neut_J\n");
    for p in &report.pairs {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            p.id_a,
            p.id_b,
            p.distance,
            energy(p.bare),
            energy(p.neutralized)
        );
    }
    let _ = writeln!(
        out,
        "TOTAL,,,{},{}",
        energy(report.total_bare),
        energy(report.total_neutralized)
    );
    out
}

pub fn trace_csv(trace: &Trace) -> String {
    let mut out = String::from("vector,sample,gamma_z0,gamma_z1,gamma_z2,gamma_z3");
    for id in &trace.cell_ids {
        out.push(',');
        out.push_str(id);
    }
    out.push('\n');
    for row in &trace.rows {
        let _ = write!(out, "{},{}", row.vector, row.sample);
        for g in row.gamma {
            let _ = write!(out, ",{}", energy(g));
        }
        for &p in &row.polarization {
            let _ = write!(out, ",{}", polarization(p));
        }
        out.push('\n');
    }
    out
}

/// One row per (vector, output): `vector,inputs,output,steady_P,max_abs_P`.
///
/// `inputs` lists the vector as `label=+1` pairs separated by spaces.
pub fn measurement_csv(m: &Measurement) -> String {
    let mut out = String::from("vector,inputs,output,steady_P,max_abs_P\n");
    for (v, vector) in m.vectors.iter().enumerate() {
        let inputs: Vec<String> = vector.iter().map(|(l, p)| format!("{l}={p}")).collect();
        for o in &m.outputs {
            let s = o.per_vector[v];
            let _ = writeln!(
                out,
                "{v},{},{},{},{}",
                inputs.join(" "),
                o.label,
                polarization(s.steady),
                polarization(s.max_abs)
            );
        }
    }
    out
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("total_cells,kink_bare_J,kink_neut_J,max_abs_P,steady_P_v0,steady_P_v1\n");
    for r in rows {
        let _ = write!(
            out,
            "{},{},{},{}",
            r.total_cells,
            energy(r.kink_bare),
            energy(r.kink_neutralized),
            polarization(r.max_abs_output_polarization)
        );
        for &s in &r.steady_output_polarization {
            let _ = write!(out, ",{}", polarization(s));
        }
        out.push('\n');
    }
    out
}
