// SPDX-License-Identifier: Apache-2.0

//! Generators for the standard circuits: wire, majority gate, the eleven-cell
//! inverter and the minimal inverter family.
//!
//! All cells sit on the pitch grid in clock zone 0. With pitch `p`:
//!
//! * `wire(n)`: cells at `(i*p, 0)`; input `a` first, output `b` last.
//! * majority: inputs `A (-p,0)`, `B (0,p)`, `C (0,-p)`, device `(0,0)`, output `M (p,0)`.
//! * conventional inverter: input `a (0,0)`, `(p,0)`, branches `(p..3p, +-p)`,
//!   convergence `(4p,0)` reached diagonally from both branch ends, `(5p,0)`,
//!   output `b (6p,0)`.
//! * minimal inverter `k`: input `a (0,0)`, coupler `(p,0)`, inverting cell
//!   `(2p,p)` diagonal to the coupler, then `k` cells continuing along `y = p`.
//!   `k = -1` is the two-cell inverter with the output at `(p,p)`.

use std::fmt;

use thiserror::Error;

use crate::model::{Cell, GeometryParams, Layout, Point, Role};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StdCellError {
    #[error("a wire needs at least 2 cells, got {0}")]
    WireTooShort(usize),
    #[error("minimal inverter needs k >= -1 extra cells, got {0}")]
    BadExtraCells(i32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StdCellKind {
    Wire(usize),
    Majority,
    ConventionalInverter,
    /// Three-cell inverter plus `k` output cells.
    MinimalInverter(i32),
}

impl fmt::Display for StdCellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StdCellKind::Wire(n) => write!(f, "wire:{n}"),
            StdCellKind::Majority => f.write_str("majority"),
            StdCellKind::ConventionalInverter => f.write_str("inverter:conventional"),
            StdCellKind::MinimalInverter(k) => write!(f, "inverter:{}", k + 3),
        }
    }
}

pub fn generate(kind: StdCellKind, geometry: GeometryParams) -> Result<Layout, StdCellError> {
    match kind {
        StdCellKind::Wire(n) => gen_wire(n, geometry),
        StdCellKind::Majority => Ok(gen_majority(geometry)),
        StdCellKind::ConventionalInverter => Ok(gen_conventional_inverter(geometry)),
        StdCellKind::MinimalInverter(k) => gen_minimal_inverter(k, geometry),
    }
}

fn grid(geometry: &GeometryParams, i: i32, j: i32) -> Point {
    Point::new(i as f64 * geometry.pitch, j as f64 * geometry.pitch)
}

fn input(label: &str) -> Role {
    Role::Input(label.to_string())
}

fn output(label: &str) -> Role {
    Role::Output(label.to_string())
}

pub fn gen_wire(n: usize, geometry: GeometryParams) -> Result<Layout, StdCellError> {
    if n < 2 {
        return Err(StdCellError::WireTooShort(n));
    }
    let cells = (0..n)
        .map(|i| {
            let role = match i {
                0 => input("a"),
                _ if i == n - 1 => output("b"),
                _ => Role::Normal,
            };
            Cell::new(format!("w{i}"), grid(&geometry, i as i32, 0), role)
        })
        .collect();
    Ok(Layout::new(geometry, cells))
}

pub fn gen_majority(geometry: GeometryParams) -> Layout {
    let g = &geometry;
    let cells = vec![
        Cell::new("A", grid(g, -1, 0), input("A")),
        Cell::new("B", grid(g, 0, 1), input("B")),
        Cell::new("C", grid(g, 0, -1), input("C")),
        Cell::new("dev", grid(g, 0, 0), Role::Normal),
        Cell::new("M", grid(g, 1, 0), output("M")),
    ];
    Layout::new(geometry, cells)
}

pub fn gen_conventional_inverter(geometry: GeometryParams) -> Layout {
    let g = &geometry;
    let n = |id: &str, i, j| Cell::new(id, grid(g, i, j), Role::Normal);
    let cells = vec![
        Cell::new("a", grid(g, 0, 0), input("a")),
        n("w1", 1, 0),
        n("u1", 1, 1),
        n("u2", 2, 1),
        n("u3", 3, 1),
        n("d1", 1, -1),
        n("d2", 2, -1),
        n("d3", 3, -1),
        n("conv", 4, 0),
        n("o1", 5, 0),
        Cell::new("b", grid(g, 6, 0), output("b")),
    ];
    Layout::new(geometry, cells)
}

pub fn gen_minimal_inverter(k: i32, geometry: GeometryParams) -> Result<Layout, StdCellError> {
    if k < -1 {
        return Err(StdCellError::BadExtraCells(k));
    }
    let g = &geometry;
    let mut cells = vec![Cell::new("a", grid(g, 0, 0), input("a"))];
    if k == -1 {
        cells.push(Cell::new("b", grid(g, 1, 1), output("b")));
        return Ok(Layout::new(geometry, cells));
    }
    cells.push(Cell::new("cpl", grid(g, 1, 0), Role::Normal));
    cells.push(Cell::new("inv", grid(g, 2, 1), Role::Normal));
    for e in 1..=k {
        cells.push(Cell::new(format!("x{e}"), grid(g, 2 + e, 1), Role::Normal));
    }
    if let Some(last) = cells.last_mut() {
        last.role = output("b");
    }
    Ok(Layout::new(geometry, cells))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> GeometryParams {
        GeometryParams::default()
    }

    #[test]
    fn wire_positions_and_roles() {
        let w = gen_wire(2, g()).unwrap();
        let xs: Vec<f64> = w.cells.iter().map(|c| c.center.x).collect();
        assert_eq!(xs, vec![0.0, 20.0]);
        let w5 = gen_wire(5, g()).unwrap();
        assert_eq!(w5.cells.len(), 5);
        assert!(w5.cells.windows(2).all(|p| p[0].center.x < p[1].center.x));
        assert_eq!(w5.cells[0].role, Role::Input("a".into()));
        assert_eq!(w5.cells[4].role, Role::Output("b".into()));
        assert_eq!(gen_wire(1, g()), Err(StdCellError::WireTooShort(1)));
    }

    #[test]
    fn majority_neighbourhood() {
        let m = gen_majority(g());
        assert_eq!(m.cells.len(), 5);
        let r = g().radius_of_effect;
        let count = |i: usize| {
            m.cells
                .iter()
                .enumerate()
                .filter(|&(j, c)| j != i && c.center.distance(m.cells[i].center) <= r)
                .count()
        };
        // at the default 65 nm radius every cell reaches every other; the
        // nearest-neighbour counts are what distinguish the device cell
        let nearest = |i: usize| {
            m.cells
                .iter()
                .enumerate()
                .filter(|&(j, c)| j != i && c.center.distance(m.cells[i].center) <= g().pitch + 1e-9)
                .count()
        };
        assert_eq!(count(3), 4);
        assert_eq!(nearest(3), 4);
        for i in [0, 1, 2] {
            assert!(nearest(i) <= 2);
        }
    }

    #[test]
    fn conventional_has_eleven_cells() {
        let c = gen_conventional_inverter(g());
        assert_eq!(c.cells.len(), 11);
        assert!(c.validate().is_empty());
    }

    #[test]
    fn minimal_family_sizes() {
        for (k, n) in [(-1, 2), (0, 3), (1, 4), (2, 5), (3, 6)] {
            let l = gen_minimal_inverter(k, g()).unwrap();
            assert_eq!(l.cells.len(), n);
            assert_eq!(l.cells.last().unwrap().role, Role::Output("b".into()));
            assert!(l.validate().is_empty());
        }
        assert_eq!(gen_minimal_inverter(-2, g()), Err(StdCellError::BadExtraCells(-2)));
    }

    #[test]
    fn minimal_family_grows_by_one_cell() {
        for k in 0..5 {
            let a = gen_minimal_inverter(k, g()).unwrap();
            let b = gen_minimal_inverter(k + 1, g()).unwrap();
            assert_eq!(b.cells.len(), a.cells.len() + 1);
            for (x, y) in a.cells.iter().zip(&b.cells) {
                assert_eq!(x.center, y.center);
                assert_eq!(x.id, y.id);
            }
            let n = a.cells.len();
            assert_eq!(a.cells[..n - 1], b.cells[..n - 1]);
            assert_eq!(b.cells[n - 1].role, Role::Normal);
        }
    }

    #[test]
    fn display_round_trips_cli_names() {
        assert_eq!(StdCellKind::MinimalInverter(0).to_string(), "inverter:3");
        assert_eq!(StdCellKind::Wire(5).to_string(), "wire:5");
    }
}
