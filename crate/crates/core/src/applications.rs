//! Pionic atoms and the parameter sweeps behind the figures.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{eval_potential, PotentialParams, UnitSystem};
use crate::spectrum::{bound_state_conditions, energy_candidates, woods_saxon_spectrum, EnergyLevel, Root};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PionSystem {
    pub z: u32,
    /// Nucleon number; 2.5 Z unless set.
    pub a: f64,
    /// fm
    pub r0: f64,
}

impl PionSystem {
    pub fn new(z: u32) -> Result<Self> {
        if z == 0 {
            return Err(Error::domain("nuclear charge Z must be at least 1"));
        }
        Ok(PionSystem { z, a: 2.5 * z as f64, r0: 1.2 })
    }

    pub fn with_nucleons(mut self, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::domain("nucleon number must be positive"));
        }
        self.a = a;
        Ok(self)
    }

    pub fn with_r0(mut self, r0: f64) -> Result<Self> {
        if !(r0 > 0.0) {
            return Err(Error::domain("r0 must be positive"));
        }
        self.r0 = r0;
        Ok(self)
    }

    /// R = r0 A^{1/3}, fm
    pub fn radius(&self) -> f64 {
        self.r0 * self.a.cbrt()
    }

    pub fn params(&self, q: f64, units: &UnitSystem) -> Result<PotentialParams> {
        PotentialParams::new(
            pion_potential_depth(self, units),
            q,
            units.pion_wavenumber(),
            units.pion_mass_energy,
            *units,
        )
    }
}

/// V0 = Z e^2 / R in MeV.
pub fn pion_potential_depth(system: &PionSystem, units: &UnitSystem) -> f64 {
    system.z as f64 * units.e_squared / system.radius()
}

fn pion_bound(system: &PionSystem, q: f64, n: u32, units: &UnitSystem) -> Result<bool> {
    let c = bound_state_conditions(&system.params(q, units)?, n)?;
    Ok(c.cond_ii && c.cond_iii)
}

/// Largest Z for which the bound-state conditions hold at level n.
pub fn critical_z(q: f64, n: u32, units: &UnitSystem) -> Result<u32> {
    if !(q > 0.0) {
        return Err(Error::domain("critical charge search needs q > 0"));
    }
    let mut z = 1;
    if !pion_bound(&PionSystem::new(1)?, q, n, units)? {
        return Err(Error::NoBoundState {
            condition: format!("bound-state conditions already fail at Z = 1 for q = {q}"),
        });
    }
    while z < 100_000 {
        if !pion_bound(&PionSystem::new(z + 1)?, q, n, units)? {
            return Ok(z);
        }
        z += 1;
    }
    Err(Error::Internal("critical charge search did not terminate".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PionGroundState {
    pub z: u32,
    pub q: f64,
    pub v0: f64,
    /// MeV
    pub e0: f64,
    /// E0 - m c^2, MeV
    pub binding: f64,
    pub in_units_of_mass: f64,
}

pub fn pion_ground_state(system: &PionSystem, q: f64, units: &UnitSystem) -> Result<PionGroundState> {
    let params = system.params(q, units)?;
    let c = bound_state_conditions(&params, 0)?;
    if !c.cond_ii {
        return Err(Error::NoBoundState {
            condition: format!("4 gamma^2 <= q^2 violated at Z = {}", system.z),
        });
    }
    if !c.cond_iii {
        return Err(Error::NoBoundState {
            condition: format!("critical-coupling inequality violated at Z = {}", system.z),
        });
    }
    let level = energy_candidates(0, &params)?;
    if !level.valid_plus {
        return Err(Error::NoBoundState {
            condition: format!(
                "the + root E = {} fails the quantization identity at Z = {}",
                level.e_plus, system.z
            ),
        });
    }
    let m = units.pion_mass_energy;
    let e0 = level.e_plus.re;
    Ok(PionGroundState {
        z: system.z,
        q,
        v0: params.v0.re,
        e0,
        binding: e0 - m,
        in_units_of_mass: e0 / m,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
pub enum FigureId {
    F1a,
    F1b,
    F2a,
    F2b,
    F3a,
    F3b,
    F4,
    F5a,
    F5b,
    F6,
}

impl FigureId {
    pub const ALL: [FigureId; 10] = [
        FigureId::F1a,
        FigureId::F1b,
        FigureId::F2a,
        FigureId::F2b,
        FigureId::F3a,
        FigureId::F3b,
        FigureId::F4,
        FigureId::F5a,
        FigureId::F5b,
        FigureId::F6,
    ];

    pub fn file_stem(&self) -> String {
        format!("fig{}", &self.to_string()[1..])
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for FigureId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let t = t.strip_prefix("fig").or_else(|| t.strip_prefix('f')).unwrap_or(&t);
        FigureId::ALL
            .into_iter()
            .find(|id| id.to_string()[1..].eq_ignore_ascii_case(t))
            .ok_or_else(|| Error::domain(format!("unknown figure id '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchChoice {
    Plus,
    Minus,
    Both,
}

impl BranchChoice {
    fn roots(self) -> Vec<Root> {
        match self {
            BranchChoice::Plus => vec![Root::Plus],
            BranchChoice::Minus => vec![Root::Minus],
            BranchChoice::Both => vec![Root::Plus, Root::Minus],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ScanOverrides {
    pub points: Option<usize>,
    pub range: Option<(f64, f64)>,
    pub series: Option<Vec<f64>>,
    pub levels: Option<u32>,
    pub branch: Option<BranchChoice>,
    /// The parameter held fixed by the figure (alpha for figs 2-3, V0 for 4-5, V0 for fig 1).
    pub fixed: Option<f64>,
    pub units: Option<UnitSystem>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub sweep: f64,
    pub series: String,
    pub n: u32,
    pub branch: String,
    pub value: f64,
    pub imag: f64,
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanTable {
    pub figure: FigureId,
    pub sweep_label: String,
    pub sweep_unit: String,
    pub value_label: String,
    pub value_unit: String,
    pub rows: Vec<ScanRow>,
}

struct Layout {
    sweep_label: &'static str,
    sweep_unit: &'static str,
    value_label: &'static str,
    value_unit: &'static str,
    range: (f64, f64),
    series: Vec<f64>,
    series_name: &'static str,
    levels: u32,
    branch: BranchChoice,
    fixed: f64,
}

fn layout(id: FigureId) -> Layout {
    let energy = |sweep_label, sweep_unit, range, series, series_name, levels, branch, fixed| Layout {
        sweep_label,
        sweep_unit,
        value_label: "E",
        value_unit: "mc^2",
        range,
        series,
        series_name,
        levels,
        branch,
        fixed,
    };
    match id {
        FigureId::F1a | FigureId::F1b => Layout {
            sweep_label: "x",
            sweep_unit: "1/|alpha|",
            value_label: "V",
            value_unit: "V0",
            range: (-5.0, 5.0),
            series: vec![-1.0, 0.0, 1.0],
            series_name: "q",
            levels: 1,
            branch: BranchChoice::Plus,
            fixed: 1.0,
        },
        FigureId::F2a => energy("V0", "mc^2", (0.0, 1.0), vec![0.25, 0.5, 1.0], "q", 1, BranchChoice::Plus, 1.0),
        FigureId::F2b => energy("V0", "mc^2", (0.0, 1.0), vec![-0.25, -0.5, -1.0], "q", 1, BranchChoice::Plus, 1.0),
        FigureId::F3a => energy("V0", "mc^2", (-1.0, 1.0), vec![1.0], "q", 4, BranchChoice::Both, 1.0),
        FigureId::F3b => energy("V0", "mc^2", (-0.5, 0.5), vec![-1.0], "q", 2, BranchChoice::Both, 1.0),
        FigureId::F4 => energy("q", "1", (-2.0, 2.0), vec![0.5, 1.0, 2.0], "alpha", 1, BranchChoice::Plus, 0.5),
        FigureId::F5a => energy("alpha", "mc/hbar", (0.005, 2.0), vec![1.0], "q", 4, BranchChoice::Both, 0.1),
        FigureId::F5b => energy("alpha", "mc/hbar", (0.005, 2.0), vec![-1.0], "q", 4, BranchChoice::Both, 0.1),
        FigureId::F6 => Layout {
            sweep_label: "Z",
            sweep_unit: "e",
            value_label: "E0",
            value_unit: "m_pi c^2",
            range: (1.0, 260.0),
            series: vec![0.10, 0.25, 0.50],
            series_name: "q",
            levels: 1,
            branch: BranchChoice::Plus,
            fixed: 0.0,
        },
    }
}

fn fmt_series(name: &str, v: f64) -> String {
    format!("{name}={v}")
}

fn branch_name(root: Root) -> &'static str {
    match root {
        Root::Plus => "plus",
        Root::Minus => "minus",
    }
}

fn level_rows(sweep: f64, series: &str, level: Result<EnergyLevel>, n: u32, roots: &[Root]) -> Vec<ScanRow> {
    roots
        .iter()
        .map(|&root| {
            let (value, imag, valid) = match &level {
                Ok(l) => {
                    let e = l.root(root);
                    (e.re, e.im, l.is_valid(root))
                }
                Err(_) => (f64::NAN, f64::NAN, false),
            };
            finite_row(sweep, series, n, branch_name(root), value, imag, valid)
        })
        .collect()
}

fn finite_row(sweep: f64, series: &str, n: u32, branch: &str, value: f64, imag: f64, valid: bool) -> ScanRow {
    let ok = value.is_finite() && imag.is_finite();
    ScanRow {
        sweep,
        series: series.to_string(),
        n,
        branch: branch.to_string(),
        value: if ok { value } else { 0.0 },
        imag: if ok { imag } else { 0.0 },
        valid: valid && ok,
    }
}

pub fn figure_scan(id: FigureId, overrides: &ScanOverrides) -> Result<ScanTable> {
    let mut lay = layout(id);
    if let Some(r) = overrides.range {
        if !(r.0 < r.1) || !r.0.is_finite() || !r.1.is_finite() {
            return Err(Error::domain("scan range must be increasing and finite"));
        }
        lay.range = r;
    }
    if let Some(s) = &overrides.series {
        if s.is_empty() {
            return Err(Error::domain("scan series must not be empty"));
        }
        lay.series = s.clone();
    }
    if let Some(l) = overrides.levels {
        lay.levels = l.max(1);
    }
    if let Some(b) = overrides.branch {
        lay.branch = b;
    }
    if let Some(f) = overrides.fixed {
        lay.fixed = f;
    }
    let points = overrides.points.unwrap_or(400).max(2);
    let roots = lay.branch.roots();

    let sweeps: Vec<f64> = if id == FigureId::F6 {
        let (lo, hi) = (lay.range.0.max(1.0).round() as u32, lay.range.1.round() as u32);
        (lo..=hi.max(lo)).map(f64::from).collect()
    } else {
        (0..points)
            .map(|i| lay.range.0 + (lay.range.1 - lay.range.0) * i as f64 / (points - 1) as f64)
            .collect()
    };
    let units = overrides.units.unwrap_or_else(UnitSystem::pion);

    let rows: Vec<Vec<ScanRow>> = sweeps
        .par_iter()
        .map(|&s| {
            let mut out = Vec::new();
            for &c in &lay.series {
                let name = fmt_series(lay.series_name, c);
                match id {
                    FigureId::F1a | FigureId::F1b => {
                        let alpha = if id == FigureId::F1a { 1.0 } else { -1.0 };
                        let p = PotentialParams::natural(lay.fixed, c, alpha);
                        let (v, ok) = match eval_potential(&p, s) {
                            Ok(v) => (v, true),
                            Err(_) => (Complex64::new(f64::NAN, f64::NAN), false),
                        };
                        out.push(finite_row(s, &name, 0, "-", v.re, v.im, ok));
                    }
                    FigureId::F6 => {
                        let sys = PionSystem::new(s as u32).expect("Z >= 1");
                        let row = match pion_ground_state(&sys, c, &units) {
                            Ok(g) => finite_row(s, &name, 0, "plus", g.in_units_of_mass, 0.0, true),
                            Err(_) => {
                                let e = sys
                                    .params(c, &units)
                                    .and_then(|p| energy_candidates(0, &p))
                                    .map(|l| l.e_plus / units.pion_mass_energy);
                                match e {
                                    Ok(e) => finite_row(s, &name, 0, "plus", e.re, e.im, false),
                                    Err(_) => finite_row(s, &name, 0, "plus", f64::NAN, f64::NAN, false),
                                }
                            }
                        };
                        out.push(row);
                    }
                    _ => {
                        let (v0, q, alpha) = match id {
                            FigureId::F2a | FigureId::F2b | FigureId::F3a | FigureId::F3b => (s, c, lay.fixed),
                            FigureId::F4 => (lay.fixed, s, c),
                            _ => (lay.fixed, c, s),
                        };
                        let p = PotentialParams::natural(v0, q, alpha);
                        for n in 0..lay.levels {
                            let level = if id == FigureId::F5b && q == -1.0 {
                                woods_saxon_spectrum(&p, n)
                            } else {
                                energy_candidates(n, &p)
                            };
                            out.extend(level_rows(s, &name, level, n, &roots));
                        }
                    }
                }
            }
            out
        })
        .collect();

    Ok(ScanTable {
        figure: id,
        sweep_label: lay.sweep_label.into(),
        sweep_unit: lay.sweep_unit.into(),
        value_label: lay.value_label.into(),
        value_unit: lay.value_unit.into(),
        rows: rows.into_iter().flatten().collect(),
    })
}
