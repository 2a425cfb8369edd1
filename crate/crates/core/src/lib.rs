// SPDX-License-Identifier: Apache-2.0

//! Quantum-dot cellular automata layout simulator.
//!
//! * [`model`]: cells, layouts, geometry.
//! * [`electrostatics`]: Coulomb energies and kink energies.
//! * [`clock`] and [`engine`]: four-phase clocking and bistable relaxation.
//! * [`stdcells`]: wire, majority gate and inverter generators.
//! * [`qcl`] and [`csv`]: the layout file format and CSV exports.
//! * [`truth`] and [`sweep`]: logic verification and the inverter sweep.

pub mod clock;
pub mod csv;
pub mod electrostatics;
pub mod engine;
pub mod model;
pub mod qcl;
pub mod stdcells;
pub mod sweep;
pub mod truth;

pub use clock::{gamma_at, ClockConfig};
pub use electrostatics::{
    cell_charges, circuit_kink_energy, coulomb_energy, kink_energy, pair_energy, ElectrostaticsError, KinkReport,
    PointCharge,
};
pub use engine::{
    measure, relax, simulate, EngineError, InputSchedule, InputVector, Measurement, RelaxOptions, SimOptions, Trace,
};
pub use model::{electron_positions, Cell, ChargeModel, GeometryParams, Layout, Point, Polarity, Role, Violation};
pub use qcl::{parse_qcl, serialize_qcl, ParseError};
pub use stdcells::{
    gen_conventional_inverter, gen_majority, gen_minimal_inverter, gen_wire, generate, StdCellKind,
};
pub use truth::{truth_check, LogicFunction, TruthReport};
