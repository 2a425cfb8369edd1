// SPDX-License-Identifier: Apache-2.0

//! Geometric and logical data model of a QCA layout.
//!
//! Lengths are in nanometres, the y-axis points up. A cell is a square of
//! four dots; its two electrons sit on one diagonal, which encodes the bit.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A point in the layout plane (nm).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn offset(self, dx: f64, dy: f64) -> Point {
        Point::new(self.x + dx, self.y + dy)
    }

    pub fn scaled(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

/// One of the two saturated cell states.
///
/// `Plus` is logic 1 and puts the electrons on the main diagonal
/// (top-right, bottom-left); `Minus` is logic 0 on the anti-diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Minus,
    Plus,
}

impl Polarity {
    pub fn value(self) -> f64 {
        match self {
            Polarity::Plus => 1.0,
            Polarity::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Polarity {
        match self {
            Polarity::Plus => Polarity::Minus,
            Polarity::Minus => Polarity::Plus,
        }
    }

    pub fn from_bool(bit: bool) -> Polarity {
        if bit {
            Polarity::Plus
        } else {
            Polarity::Minus
        }
    }

    pub fn as_bool(self) -> bool {
        self == Polarity::Plus
    }

    /// Sign of a continuous polarization; zero maps to `None`.
    pub fn of(p: f64) -> Option<Polarity> {
        if p > 0.0 {
            Some(Polarity::Plus)
        } else if p < 0.0 {
            Some(Polarity::Minus)
        } else {
            None
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Plus => "+1",
            Polarity::Minus => "-1",
        })
    }
}

/// How a cell's charge is represented as point charges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ChargeModel {
    /// Two charges of -e on the occupied dots.
    Bare,
    /// -e/2 on each occupied dot and +e/2 on each empty dot, so the cell is neutral.
    Neutralized,
}

impl ChargeModel {
    pub fn as_str(self) -> &'static str {
        match self {
            ChargeModel::Bare => "bare",
            ChargeModel::Neutralized => "neutralized",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometryParams {
    pub cell_size: f64,
    pub dot_diameter: f64,
    pub pitch: f64,
    pub relative_permittivity: f64,
    pub charge_model: ChargeModel,
    pub radius_of_effect: f64,
}

impl Default for GeometryParams {
    fn default() -> Self {
        Self {
            cell_size: 18.0,
            dot_diameter: 5.0,
            pitch: 20.0,
            relative_permittivity: 1.0,
            charge_model: ChargeModel::Neutralized,
            radius_of_effect: 65.0,
        }
    }
}

impl GeometryParams {
    /// Distance from the cell centre to each dot centre along x and y.
    pub fn dot_offset(&self) -> f64 {
        (self.cell_size - self.dot_diameter) / 2.0
    }

    pub fn with_charge_model(mut self, model: ChargeModel) -> Self {
        self.charge_model = model;
        self
    }

    /// Every length multiplied by `s`.
    pub fn scaled(mut self, s: f64) -> Self {
        self.cell_size *= s;
        self.dot_diameter *= s;
        self.pitch *= s;
        self.radius_of_effect *= s;
        self
    }

    /// Human-readable descriptions of every broken geometry invariant.
    pub fn problems(&self) -> Vec<String> {
        let mut out = Vec::new();
        let all_finite = [
            self.cell_size,
            self.dot_diameter,
            self.pitch,
            self.relative_permittivity,
            self.radius_of_effect,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !all_finite {
            out.push("geometry values must be finite".to_string());
            return out;
        }
        if self.dot_diameter <= 0.0 {
            out.push(format!("dot_diameter {} must be > 0", self.dot_diameter));
        }
        if self.cell_size <= self.dot_diameter {
            out.push(format!(
                "cell_size {} must exceed dot_diameter {}",
                self.cell_size, self.dot_diameter
            ));
        }
        if self.pitch < self.cell_size {
            out.push(format!("pitch {} must be >= cell_size {}", self.pitch, self.cell_size));
        }
        if self.relative_permittivity <= 0.0 {
            out.push(format!(
                "relative permittivity {} must be > 0",
                self.relative_permittivity
            ));
        }
        if self.radius_of_effect < self.pitch {
            out.push(format!(
                "radius of effect {} must be >= pitch {}",
                self.radius_of_effect, self.pitch
            ));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Role {
    Input(String),
    Output(String),
    Fixed(Polarity),
    Normal,
}

impl Role {
    pub fn label(&self) -> Option<&str> {
        match self {
            Role::Input(l) | Role::Output(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_input(&self) -> bool {
        matches!(self, Role::Input(_))
    }

    pub fn is_output(&self) -> bool {
        matches!(self, Role::Output(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub id: String,
    pub center: Point,
    pub role: Role,
    pub clock_zone: u8,
}

impl Cell {
    pub fn new(id: impl Into<String>, center: Point, role: Role) -> Self {
        Self {
            id: id.into(),
            center,
            role,
            clock_zone: 0,
        }
    }

    pub fn in_zone(mut self, zone: u8) -> Self {
        self.clock_zone = zone;
        self
    }

    /// The four dot centres, in the order top-right, bottom-left, top-left, bottom-right.
    pub fn dots(&self, geometry: &GeometryParams) -> [Point; 4] {
        let h = geometry.dot_offset();
        let c = self.center;
        [c.offset(h, h), c.offset(-h, -h), c.offset(-h, h), c.offset(h, -h)]
    }
}

/// The two occupied dot centres of `cell` in state `p`.
pub fn electron_positions(cell: &Cell, p: Polarity, geometry: &GeometryParams) -> [Point; 2] {
    let [tr, bl, tl, br] = cell.dots(geometry);
    match p {
        Polarity::Plus => [tr, bl],
        Polarity::Minus => [tl, br],
    }
}

/// The two empty dot centres of `cell` in state `p`.
pub fn hole_positions(cell: &Cell, p: Polarity, geometry: &GeometryParams) -> [Point; 2] {
    electron_positions(cell, p.flipped(), geometry)
}

/// A cell layout. Cell order is significant: it fixes the relaxation order.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Layout {
    pub geometry: GeometryParams,
    pub cells: Vec<Cell>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Geometry(String),
    Overlap { a: String, b: String, distance: f64 },
    DuplicateId(String),
    DuplicateLabel { label: String, ids: Vec<String> },
    BadZone { id: String, zone: u8 },
    NonFinitePosition(String),
    Undriven,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Geometry(msg) => write!(f, "geometry: {msg}"),
            Violation::Overlap { a, b, distance } => {
                write!(f, "overlap: cells {a} and {b} are {distance} nm apart")
            }
            Violation::DuplicateId(id) => write!(f, "duplicate cell id {id}"),
            Violation::DuplicateLabel { label, ids } => {
                write!(f, "label {label} used by cells {}", ids.join(", "))
            }
            Violation::BadZone { id, zone } => write!(f, "cell {id}: clock zone {zone} not in 0..=3"),
            Violation::NonFinitePosition(id) => write!(f, "cell {id}: position not finite"),
            Violation::Undriven => write!(f, "layout has no input or fixed cell to drive it"),
        }
    }
}

impl Layout {
    pub fn new(geometry: GeometryParams, cells: Vec<Cell>) -> Self {
        Self { geometry, cells }
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.cells.iter().position(|c| c.id == id)
    }

    /// Sorted, deduplicated input labels.
    pub fn input_labels(&self) -> Vec<String> {
        self.labels(Role::is_input)
    }

    pub fn output_labels(&self) -> Vec<String> {
        self.labels(Role::is_output)
    }

    fn labels(&self, pick: fn(&Role) -> bool) -> Vec<String> {
        let set: BTreeSet<&str> = self
            .cells
            .iter()
            .filter(|c| pick(&c.role))
            .filter_map(|c| c.role.label())
            .collect();
        set.into_iter().map(str::to_string).collect()
    }

    /// Same layout with all coordinates and lengths multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Layout {
        Layout {
            geometry: self.geometry.scaled(s),
            cells: self
                .cells
                .iter()
                .map(|c| Cell {
                    center: c.center.scaled(s),
                    ..c.clone()
                })
                .collect(),
        }
    }

    /// Checks every layout invariant. An empty result means the layout is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out: Vec<Violation> = self
            .geometry
            .problems()
            .into_iter()
            .map(Violation::Geometry)
            .collect();

        let mut seen = BTreeSet::new();
        for cell in &self.cells {
            if !seen.insert(cell.id.as_str()) {
                out.push(Violation::DuplicateId(cell.id.clone()));
            }
            if cell.clock_zone > 3 {
                out.push(Violation::BadZone {
                    id: cell.id.clone(),
                    zone: cell.clock_zone,
                });
            }
            if !(cell.center.x.is_finite() && cell.center.y.is_finite()) {
                out.push(Violation::NonFinitePosition(cell.id.clone()));
            }
        }

        for (i, a) in self.cells.iter().enumerate() {
            for b in &self.cells[i + 1..] {
                let d = a.center.distance(b.center);
                if d < self.geometry.cell_size {
                    out.push(Violation::Overlap {
                        a: a.id.clone(),
                        b: b.id.clone(),
                        distance: d,
                    });
                }
            }
        }

        // labels are unique per role kind
        for pick in [Role::is_input as fn(&Role) -> bool, Role::is_output] {
            let mut by_label: BTreeMap<&str, Vec<String>> = BTreeMap::new();
            for cell in self.cells.iter().filter(|c| pick(&c.role)) {
                if let Some(label) = cell.role.label() {
                    by_label.entry(label).or_default().push(cell.id.clone());
                }
            }
            for (label, ids) in by_label {
                if ids.len() > 1 {
                    out.push(Violation::DuplicateLabel {
                        label: label.to_string(),
                        ids,
                    });
                }
            }
        }

        let driven = self
            .cells
            .iter()
            .any(|c| matches!(c.role, Role::Input(_) | Role::Fixed(_)));
        let needs_driver = self
            .cells
            .iter()
            .any(|c| matches!(c.role, Role::Normal | Role::Output(_)));
        if needs_driver && !driven {
            out.push(Violation::Undriven);
        }
        out
    }
}
