use rayon::prelude::*;
use serde::Serialize;

use super::thermal::{occupation, ThermalParams};
use crate::error::{Error, Result};
use crate::landau::{level_energy, valley_spectrum, LandauLevel, DEGENERACY_PER_AREA};
use crate::lattice::Valley;

/// Levels of both valleys, sorted by energy, covering `|E| < covered`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumTable {
    pub levels: Vec<LandauLevel>,
    pub spin_factor: u32,
    /// Per `l_B²`.
    pub degeneracy_per_area: f64,
    pub n_max: usize,
    /// Every level with `|E| < covered` is in the table.
    pub covered: f64,
    pub z: f64,
}

/// Smallest `|E|` among the levels `n > n_max` of either valley, provided
/// both branches are already increasing in `|E|` beyond `n_max`.
fn coverage(n_max: usize, z: f64) -> Result<Option<f64>> {
    let next = n_max + 1;
    let mut cover = f64::INFINITY;
    for s in [1i8, -1] {
        let a = level_energy(next, s, z)?;
        let b = level_energy(next + 1, s, z)?;
        // the branch keeps its sign and grows in magnitude from here on
        if a.signum() != b.signum() || b.abs() <= a.abs() || a == 0.0 {
            return Ok(None);
        }
        cover = cover.min(a.abs());
    }
    Ok(Some(cover))
}

/// Largest level index a table may hold.
pub const MAX_LEVEL_INDEX: usize = 10_000_000;

/// Smallest `n` with `sqrt(2(n+1)) > mu_max + 2`, then extended until every
/// level with `|E| < mu_max + 2` is included.
pub fn auto_n_max(mu_max: f64, z: f64) -> Result<usize> {
    if !mu_max.is_finite() {
        return Err(Error::invalid("scan range must be finite"));
    }
    let target = mu_max.abs() + 2.0;
    if target * target / 2.0 > MAX_LEVEL_INDEX as f64 {
        return Err(Error::domain(format!("scan range |mu| = {mu_max} needs more than {MAX_LEVEL_INDEX} levels")));
    }
    let mut n = ((target * target / 2.0 - 1.0).max(0.0)).floor() as usize;
    while (2.0 * (n as f64 + 1.0)).sqrt() <= target {
        n += 1;
    }
    while n <= MAX_LEVEL_INDEX {
        if let Some(cover) = coverage(n, z)? {
            if cover >= target {
                return Ok(n);
            }
        }
        n = (n + 1).max(n + n / 8);
    }
    Err(Error::numerical("could not size the level table"))
}

pub fn build_spectrum_table(z: f64, n_max: usize) -> Result<SpectrumTable> {
    let mut levels = valley_spectrum(Valley::K, n_max, z)?;
    levels.extend(valley_spectrum(Valley::KPrime, n_max, z)?);
    levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    let covered = coverage(n_max, z)?.unwrap_or(0.0);
    Ok(SpectrumTable {
        levels,
        spin_factor: 2,
        degeneracy_per_area: DEGENERACY_PER_AREA,
        n_max,
        covered,
        z,
    })
}

impl SpectrumTable {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    fn check_mu(&self, mu: f64) -> Result<()> {
        if !mu.is_finite() || mu.abs() >= self.covered {
            return Err(Error::domain(format!(
                "mu = {mu} lies outside the covered spectrum |E| < {}",
                self.covered
            )));
        }
        Ok(())
    }

    /// `#{0 < E < μ}` for `μ > 0`, `−#{μ < E < 0}` for `μ < 0`.
    pub fn signed_count(&self, mu: f64) -> Result<i64> {
        self.check_mu(mu)?;
        let e = &self.levels;
        let count = if mu > 0.0 {
            let lo = e.partition_point(|l| l.energy <= 0.0);
            let hi = e.partition_point(|l| l.energy < mu);
            hi.saturating_sub(lo) as i64
        } else if mu < 0.0 {
            let lo = e.partition_point(|l| l.energy <= mu);
            let hi = e.partition_point(|l| l.energy < 0.0);
            -(hi.saturating_sub(lo) as i64)
        } else {
            0
        };
        Ok(count)
    }

    /// Carrier density relative to the neutral sheet, per `l_B²`.
    pub fn carrier_density(&self, mu: f64) -> Result<f64> {
        self.check_mu(mu)?;
        Ok(self
            .levels
            .iter()
            .map(|l| {
                let inside = if mu > 0.0 {
                    l.energy > 0.0 && l.energy < mu
                } else {
                    l.energy < 0.0 && l.energy > mu
                };
                if inside {
                    mu.signum() * self.spin_factor as f64 * l.degeneracy_per_area
                } else {
                    0.0
                }
            })
            .sum())
    }
}

/// `σ_xy` in units of `e²/h` at zero temperature. A level exactly at `μ`
/// does not count.
pub fn hall_conductivity(table: &SpectrumTable, mu: f64) -> Result<f64> {
    Ok(table.spin_factor as f64 * table.signed_count(mu)? as f64)
}

/// `h σ_xy / 4e²`.
pub fn reduced(sigma: f64) -> f64 {
    sigma / 4.0
}

/// Finite temperature: `spin Σ_levels [n_F(E; μ) − n_F(E; 0)]`.
pub fn hall_conductivity_thermal(table: &SpectrumTable, mu: f64, beta: f64) -> Result<f64> {
    table.check_mu(mu)?;
    let at_mu = ThermalParams::new(beta, mu, 1.0)?;
    let neutral = at_mu.with_mu(0.0);
    let sum: f64 = table
        .levels
        .iter()
        .map(|l| occupation(l.energy, &at_mu) - occupation(l.energy, &neutral))
        .sum();
    Ok(table.spin_factor as f64 * sum)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConductivityCurve {
    pub mu_grid: Vec<f64>,
    pub sigma_xy: Vec<f64>,
    pub reduced: Vec<f64>,
}

pub fn hall_curve(table: &SpectrumTable, mu_grid: &[f64]) -> Result<ConductivityCurve> {
    let sigma_xy = mu_grid
        .par_iter()
        .map(|&mu| hall_conductivity(table, mu))
        .collect::<Result<Vec<f64>>>()?;
    let reduced = sigma_xy.iter().map(|&s| reduced(s)).collect();
    Ok(ConductivityCurve { mu_grid: mu_grid.to_vec(), sigma_xy, reduced })
}

/// A level crossed inside `(lo, hi)`, with the reduced conductivity on
/// either side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlateauEdge {
    pub energy: f64,
    pub level: LandauLevel,
    pub reduced_below: f64,
    pub reduced_above: f64,
}

pub fn plateau_edges(table: &SpectrumTable, lo: f64, hi: f64) -> Result<Vec<PlateauEdge>> {
    table.check_mu(lo)?;
    table.check_mu(hi)?;
    let mut out = Vec::new();
    for l in table.levels.iter().filter(|l| l.energy > lo && l.energy < hi) {
        // the staircase is constant strictly between neighboring levels
        let below = table
            .levels
            .iter()
            .map(|m| m.energy)
            .filter(|&e| e < l.energy)
            .fold(lo, f64::max);
        let above = table
            .levels
            .iter()
            .map(|m| m.energy)
            .filter(|&e| e > l.energy)
            .fold(hi, f64::min);
        let mid = |a: f64, b: f64| 0.5 * (a + b);
        out.push(PlateauEdge {
            energy: l.energy,
            level: *l,
            reduced_below: reduced(hall_conductivity(table, mid(below, l.energy))?),
            reduced_above: reduced(hall_conductivity(table, mid(l.energy, above))?),
        });
    }
    Ok(out)
}
