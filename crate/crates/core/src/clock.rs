// SPDX-License-Identifier: Apache-2.0

//! Four-phase adiabatic clock expressed as a per-zone tunneling energy.
//!
//! A high inter-dot barrier corresponds to a small tunneling energy (cells
//! latched), a low barrier to a large one (cells unpolarized). Each zone runs
//! the same trapezoid (switch, hold, release, relax), delayed by a quarter
//! cycle per zone.

use crate::engine::EngineError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClockConfig {
    /// Tunneling energy with barriers low (J).
    pub gamma_high: f64,
    /// Tunneling energy with barriers raised (J).
    pub gamma_low: f64,
    pub samples_per_cycle: usize,
}

impl Default for ClockConfig {
    fn default() -> Self {
        Self {
            gamma_high: 9.8e-20,
            gamma_low: 3.8e-23,
            samples_per_cycle: 128,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Phase {
    Switch,
    Hold,
    Release,
    Relax,
}

impl ClockConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        let ok_gamma = self.gamma_low.is_finite()
            && self.gamma_high.is_finite()
            && self.gamma_low > 0.0
            && self.gamma_high > self.gamma_low;
        if !ok_gamma {
            return Err(EngineError::InvalidClock(format!(
                "need gamma_high > gamma_low > 0, got high={} low={}",
                self.gamma_high, self.gamma_low
            )));
        }
        if self.samples_per_cycle < 8 || self.samples_per_cycle % 4 != 0 {
            return Err(EngineError::InvalidClock(format!(
                "samples per cycle must be a multiple of 4 and >= 8, got {}",
                self.samples_per_cycle
            )));
        }
        Ok(())
    }

    pub fn quarter(&self) -> usize {
        self.samples_per_cycle / 4
    }

    /// Sample index within the zone's own cycle, after removing the zone delay.
    fn local(&self, zone: u8, sample: usize) -> usize {
        let n = self.samples_per_cycle;
        let shift = (zone as usize % 4) * self.quarter();
        (sample % n + n - shift) % n
    }

    pub fn phase_at(&self, zone: u8, sample: usize) -> Phase {
        match self.local(zone, sample) / self.quarter() {
            0 => Phase::Switch,
            1 => Phase::Hold,
            2 => Phase::Release,
            _ => Phase::Relax,
        }
    }

    /// Last sample (within a cycle) of the zone's hold quarter.
    pub fn hold_end(&self, zone: u8) -> usize {
        let q = self.quarter();
        (2 * q - 1 + (zone as usize % 4) * q) % self.samples_per_cycle
    }

    pub fn gamma_per_zone(&self, sample: usize) -> [f64; 4] {
        [0u8, 1, 2, 3].map(|z| gamma_at(self, z, sample))
    }
}

/// Tunneling energy of `zone` at `sample` (wrapped modulo the cycle).
pub fn gamma_at(clock: &ClockConfig, zone: u8, sample: usize) -> f64 {
    let q = clock.quarter();
    let local = clock.local(zone, sample);
    let frac = (local % q) as f64 / q as f64;
    let (hi, lo) = (clock.gamma_high, clock.gamma_low);
    match local / q {
        0 => hi + (lo - hi) * frac,
        1 => lo,
        2 => lo + (hi - lo) * frac,
        _ => hi,
    }
}
