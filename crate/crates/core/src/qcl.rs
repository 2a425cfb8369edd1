// SPDX-License-Identifier: Apache-2.0

//! The `.qcl` layout text format.
//!
//! ```text
//! qcl 1
//! geometry cell_size=18 dot_diameter=5 pitch=20 epsilon_r=1 charge_model=neutralized radius=65
//! clock high=9.80000e-20 low=3.80000e-23 samples=128
//! cell id=a x=0 y=0 role=input label=a zone=0
//! cell id=f x=20 y=0 role=fixed p=+1 zone=0
//! ```
//!
//! Line based, `#` starts a comment, blank lines are ignored. Lengths are nm,
//! energies J. The `geometry` and `clock` lines are optional and may appear at
//! most once; omitted geometry keys take their defaults. Cell order is kept.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::clock::ClockConfig;
use crate::model::{Cell, ChargeModel, GeometryParams, Layout, Point, Polarity, Role};

pub const VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {reason}")]
pub struct ParseError {
    /// 1-based line number.
    pub line: usize,
    pub reason: String,
}

impl ParseError {
    fn new(line: usize, reason: impl Into<String>) -> Self {
        Self {
            line,
            reason: reason.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QclDocument {
    pub layout: Layout,
    pub clock: Option<ClockConfig>,
}

struct Fields<'a> {
    line: usize,
    map: BTreeMap<&'a str, &'a str>,
}

impl<'a> Fields<'a> {
    fn parse(line: usize, tokens: &[&'a str], allowed: &[&str]) -> Result<Self, ParseError> {
        let mut map = BTreeMap::new();
        for tok in tokens {
            let (key, value) = tok
                .split_once('=')
                .ok_or_else(|| ParseError::new(line, format!("expected key=value, got `{tok}`")))?;
            if !allowed.contains(&key) {
                return Err(ParseError::new(line, format!("unknown key `{key}`")));
            }
            if value.is_empty() {
                return Err(ParseError::new(line, format!("empty value for `{key}`")));
            }
            if map.insert(key, value).is_some() {
                return Err(ParseError::new(line, format!("duplicate key `{key}`")));
            }
        }
        Ok(Self { line, map })
    }

    fn take(&mut self, key: &str) -> Option<&'a str> {
        self.map.remove(key)
    }

    fn require(&mut self, key: &str) -> Result<&'a str, ParseError> {
        self.take(key)
            .ok_or_else(|| ParseError::new(self.line, format!("missing required key `{key}`")))
    }

    fn number(&self, key: &str, raw: &str) -> Result<f64, ParseError> {
        parse_number(raw).ok_or_else(|| ParseError::new(self.line, format!("bad number for `{key}`: `{raw}`")))
    }

    fn opt_number(&mut self, key: &str, default: f64) -> Result<f64, ParseError> {
        match self.take(key) {
            Some(raw) => self.number(key, raw),
            None => Ok(default),
        }
    }

    fn req_number(&mut self, key: &str) -> Result<f64, ParseError> {
        let raw = self.require(key)?;
        self.number(key, raw)
    }
}

/// Decimal or scientific notation; no `inf`/`nan` spellings.
fn parse_number(raw: &str) -> Option<f64> {
    let ok_chars = raw
        .bytes()
        .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'+' | b'-'));
    if !ok_chars || !raw.bytes().any(|b| b.is_ascii_digit()) {
        return None;
    }
    raw.parse::<f64>().ok().filter(|v| v.is_finite())
}

fn parse_geometry(line: usize, tokens: &[&str]) -> Result<GeometryParams, ParseError> {
    let mut f = Fields::parse(
        line,
        tokens,
        &["cell_size", "dot_diameter", "pitch", "epsilon_r", "charge_model", "radius"],
    )?;
    let d = GeometryParams::default();
    let charge_model = match f.take("charge_model") {
        None => d.charge_model,
        Some("bare") => ChargeModel::Bare,
        Some("neutralized") => ChargeModel::Neutralized,
        Some(other) => return Err(ParseError::new(line, format!("unknown charge_model `{other}`"))),
    };
    Ok(GeometryParams {
        cell_size: f.opt_number("cell_size", d.cell_size)?,
        dot_diameter: f.opt_number("dot_diameter", d.dot_diameter)?,
        pitch: f.opt_number("pitch", d.pitch)?,
        relative_permittivity: f.opt_number("epsilon_r", d.relative_permittivity)?,
        charge_model,
        radius_of_effect: f.opt_number("radius", d.radius_of_effect)?,
    })
}

fn parse_clock(line: usize, tokens: &[&str]) -> Result<ClockConfig, ParseError> {
    let mut f = Fields::parse(line, tokens, &["high", "low", "samples"])?;
    let gamma_high = f.req_number("high")?;
    let gamma_low = f.req_number("low")?;
    let raw = f.require("samples")?;
    let samples_per_cycle = raw
        .parse::<usize>()
        .map_err(|_| ParseError::new(line, format!("bad integer for `samples`: `{raw}`")))?;
    let clock = ClockConfig {
        gamma_high,
        gamma_low,
        samples_per_cycle,
    };
    clock.validate().map_err(|e| ParseError::new(line, e.to_string()))?;
    Ok(clock)
}

fn parse_cell(line: usize, tokens: &[&str]) -> Result<Cell, ParseError> {
    let mut f = Fields::parse(line, tokens, &["id", "x", "y", "role", "label", "p", "zone"])?;
    let id = f.require("id")?.to_string();
    let x = f.req_number("x")?;
    let y = f.req_number("y")?;
    let role_name = f.require("role")?;
    let label = f.take("label");
    let p = f.take("p");
    let role = match role_name {
        "input" | "output" => {
            let label = label
                .ok_or_else(|| ParseError::new(line, format!("role={role_name} requires `label`")))?
                .to_string();
            if role_name == "input" {
                Role::Input(label)
            } else {
                Role::Output(label)
            }
        }
        "fixed" => {
            let p = match p.ok_or_else(|| ParseError::new(line, "role=fixed requires `p`"))? {
                "+1" | "1" => Polarity::Plus,
                "-1" => Polarity::Minus,
                other => return Err(ParseError::new(line, format!("p must be +1 or -1, got `{other}`"))),
            };
            Role::Fixed(p)
        }
        "normal" => Role::Normal,
        other => return Err(ParseError::new(line, format!("unknown role `{other}`"))),
    };
    if label.is_some() && !matches!(role, Role::Input(_) | Role::Output(_)) {
        return Err(ParseError::new(line, format!("`label` not allowed for role={role_name}")));
    }
    if p.is_some() && !matches!(role, Role::Fixed(_)) {
        return Err(ParseError::new(line, format!("`p` not allowed for role={role_name}")));
    }
    let clock_zone = match f.take("zone") {
        None => 0,
        Some(raw) => match raw.parse::<u8>() {
            Ok(z) if z <= 3 => z,
            _ => return Err(ParseError::new(line, format!("zone must be 0..3, got `{raw}`"))),
        },
    };
    Ok(Cell {
        id,
        center: Point::new(x, y),
        role,
        clock_zone,
    })
}

pub fn parse_document(text: &str) -> Result<QclDocument, ParseError> {
    let mut version_seen = false;
    let mut geometry: Option<GeometryParams> = None;
    let mut clock: Option<ClockConfig> = None;
    let mut cells = Vec::new();
    let mut ids = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&head, rest)) = tokens.split_first() else {
            continue;
        };
        if !version_seen {
            match (head, rest) {
                ("qcl", [v]) if v.parse::<u32>() == Ok(VERSION) => {
                    version_seen = true;
                    continue;
                }
                ("qcl", [v]) => return Err(ParseError::new(line, format!("unsupported version `{v}`"))),
                _ => return Err(ParseError::new(line, "expected header `qcl 1`")),
            }
        }
        match head {
            "geometry" => {
                if geometry.is_some() {
                    return Err(ParseError::new(line, "duplicate geometry line"));
                }
                geometry = Some(parse_geometry(line, rest)?);
            }
            "clock" => {
                if clock.is_some() {
                    return Err(ParseError::new(line, "duplicate clock line"));
                }
                clock = Some(parse_clock(line, rest)?);
            }
            "cell" => {
                let cell = parse_cell(line, rest)?;
                if !ids.insert(cell.id.clone()) {
                    return Err(ParseError::new(line, format!("duplicate cell id `{}`", cell.id)));
                }
                cells.push(cell);
            }
            "qcl" => return Err(ParseError::new(line, "duplicate header")),
            other => return Err(ParseError::new(line, format!("unknown directive `{other}`"))),
        }
    }
    if !version_seen {
        let last = text.lines().count().max(1);
        return Err(ParseError::new(last, "missing header `qcl 1`"));
    }
    Ok(QclDocument {
        layout: Layout::new(geometry.unwrap_or_default(), cells),
        clock,
    })
}

pub fn parse_qcl(text: &str) -> Result<(Layout, Option<ClockConfig>), ParseError> {
    parse_document(text).map(|d| (d.layout, d.clock))
}

/// Shortest decimal that reads back to the same value.
fn length(v: f64) -> String {
    format!("{v}")
}

/// Six significant digits, scientific.
pub fn energy(v: f64) -> String {
    format!("{v:.5e}")
}

pub fn serialize_qcl(layout: &Layout, clock: Option<&ClockConfig>) -> String {
    let g = &layout.geometry;
    let mut out = format!("qcl {VERSION}\n");
    let _ = writeln!(
        out,
        "geometry cell_size={} dot_diameter={} pitch={} epsilon_r={} charge_model={} radius={}",
        length(g.cell_size),
        length(g.dot_diameter),
        length(g.pitch),
        length(g.relative_permittivity),
        g.charge_model.as_str(),
        length(g.radius_of_effect)
    );
    if let Some(c) = clock {
        let _ = writeln!(
            out,
            "clock high={} low={} samples={}",
            energy(c.gamma_high),
            energy(c.gamma_low),
            c.samples_per_cycle
        );
    }
    for cell in &layout.cells {
        let _ = write!(
            out,
            "cell id={} x={} y={}",
            cell.id,
            length(cell.center.x),
            length(cell.center.y)
        );
        let _ = match &cell.role {
            Role::Input(l) => write!(out, " role=input label={l}"),
            Role::Output(l) => write!(out, " role=output label={l}"),
            Role::Fixed(p) => write!(out, " role=fixed p={p}"),
            Role::Normal => write!(out, " role=normal"),
        };
        let _ = writeln!(out, " zone={}", cell.clock_zone);
    }
    out
}
