//! Command-line front end.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::applications::{
    critical_z, figure_scan, pion_ground_state, pion_potential_depth, BranchChoice, FigureId, PionSystem,
    ScanOverrides,
};
use crate::error::{Error, Result};
use crate::model::{
    classify_special_case, closed_form_complex, eval_potential, near_origin_expansion, pt_symmetry_test,
    reduce_dimensionless, symmetric_grid, ComplexRegime, PotentialParams, SpecialCase, UnitSystem,
};
use crate::nu::{self, BranchPolicy, NuProblem, NuSolution, PiCandidate, ProductForm};
use crate::oracle::{identity_roots, ode_residual, shooting_eigenvalue, ShootingConfig, ShootingDomain};
use crate::output::{levels_table, scan_payload, serialize, write_atomic, Cell, Format, Payload, Table};
use crate::quadrature::QuadratureConfig;
use crate::spectrum::{
    bound_state_conditions, energy_candidates, nu_applicability_diagnostic, reality_predicate, spectrum,
    validate_level, woods_saxon_spectrum, EnergyLevel, Mode, Root,
};
use crate::wavefunction::{build_eigenfunction, jacobi_form, normalize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

/// Library operations reached by each subcommand.
pub struct Route {
    pub subcommand: &'static str,
    pub operations: &'static [&'static str],
}

pub const DISPATCH: &[Route] = &[
    Route {
        subcommand: "potential",
        operations: &["eval_potential", "near_origin_expansion", "closed_form_complex"],
    },
    Route {
        subcommand: "spectrum",
        operations: &["spectrum", "energy_candidates", "validate_level", "woods_saxon_spectrum"],
    },
    Route {
        subcommand: "wavefunction",
        operations: &[
            "build_eigenfunction",
            "normalize",
            "jacobi_form",
            "solve_k_candidates",
            "build_pi_candidates",
            "select_branch",
            "lambda_n",
            "weight_function",
            "rodrigues_polynomial",
        ],
    },
    Route {
        subcommand: "conditions",
        operations: &["bound_state_conditions", "reduce_dimensionless", "reality_predicate"],
    },
    Route {
        subcommand: "verify",
        operations: &["ode_residual", "shooting_eigenvalue", "identity_roots"],
    },
    Route {
        subcommand: "pion",
        operations: &["pion_potential_depth", "critical_z", "pion_ground_state"],
    },
    Route {
        subcommand: "scan",
        operations: &["figure_scan"],
    },
    Route {
        subcommand: "classify",
        operations: &["classify_special_case", "pt_symmetry_test"],
    },
    Route {
        subcommand: "diagnose-q0",
        operations: &["nu_applicability_diagnostic"],
    },
];

/// "a", "a+bi" or "a-bi", no spaces.
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let bad = || format!("malformed complex literal '{s}' (expected a, a+bi or a-bi)");
    if s.is_empty() || s.contains(char::is_whitespace) {
        return Err(bad());
    }
    let real = |t: &str| -> std::result::Result<f64, String> {
        let v: f64 = t.parse().map_err(|_| bad())?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(real(s)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(bad)?;
    let (re, im) = body.split_at(split);
    if im.len() < 2 {
        return Err(bad());
    }
    Ok(Complex64::new(real(re)?, real(im)?))
}

fn parse_range(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("range '{s}' must be lo,hi"))?;
    let a: f64 = a.parse().map_err(|_| format!("bad range start '{a}'"))?;
    let b: f64 = b.parse().map_err(|_| format!("bad range end '{b}'"))?;
    Ok((a, b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UnitsArg {
    Natural,
    Pion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Paper,
    Validated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RootArg {
    Plus,
    Minus,
}

impl From<RootArg> for Root {
    fn from(r: RootArg) -> Root {
        match r {
            RootArg::Plus => Root::Plus,
            RootArg::Minus => Root::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    ImagV0q,
    ImagAlpha,
    AllImag,
}

impl From<RegimeArg> for ComplexRegime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::ImagV0q => ComplexRegime::ImagV0Q,
            RegimeArg::ImagAlpha => ComplexRegime::ImagAlpha,
            RegimeArg::AllImag => ComplexRegime::AllImag,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Shooting,
    Identity,
    Residual,
}

#[derive(Debug, Parser)]
#[command(name = "hulthen-kg", version, about = "Klein-Gordon bound states of the generalized Hulthen potential")]
struct Cli {
    /// Output format; tables default to csv, records to json.
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ConstantArgs {
    /// hbar c in MeV fm.
    #[arg(long = "hbar-c")]
    hbar_c: Option<f64>,
    /// Pion rest energy in MeV.
    #[arg(long = "pion-mass")]
    pion_mass: Option<f64>,
    /// e^2 in MeV fm (pion units) or the fine-structure constant (natural units).
    #[arg(long)]
    e2: Option<f64>,
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long = "V0", value_parser = parse_complex, allow_hyphen_values = true)]
    v0: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    q: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1")]
    alpha: Complex64,
    #[arg(long, value_enum, default_value = "natural")]
    units: UnitsArg,
    #[command(flatten)]
    constants: ConstantArgs,
    /// Particle rest energy in MeV (pion units only; defaults to the pion mass).
    #[arg(long)]
    mass: Option<f64>,
}

impl ConstantArgs {
    fn resolve(&self, units: UnitsArg) -> Result<UnitSystem> {
        match units {
            UnitsArg::Natural => {
                if self.hbar_c.is_some() || self.pion_mass.is_some() {
                    return Err(Error::domain("--hbar-c and --pion-mass need --units pion"));
                }
                let u = UnitSystem::natural();
                u.with_constants(u.hbar_c, u.pion_mass_energy, self.e2.unwrap_or(u.e_squared))
            }
            UnitsArg::Pion => {
                let u = UnitSystem::pion();
                u.with_constants(
                    self.hbar_c.unwrap_or(u.hbar_c),
                    self.pion_mass.unwrap_or(u.pion_mass_energy),
                    self.e2.unwrap_or(u.e_squared),
                )
            }
        }
    }
}

impl ParamArgs {
    fn resolve(&self) -> Result<PotentialParams> {
        let units = self.constants.resolve(self.units)?;
        let mass = match (self.units, self.mass) {
            (UnitsArg::Natural, Some(m)) if m != 1.0 => {
                return Err(Error::domain("--mass needs --units pion (natural units fix m c^2 = 1)"))
            }
            (_, Some(m)) => m,
            (UnitsArg::Natural, None) => 1.0,
            (UnitsArg::Pion, None) => units.pion_mass_energy,
        };
        PotentialParams::new(self.v0, self.q, self.alpha, mass, units)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Potential V(x) on a grid, its near-origin expansion, or a complex-regime closed form.
    Potential {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "x-min", default_value_t = -5.0, allow_hyphen_values = true)]
        x_min: f64,
        #[arg(long = "x-max", default_value_t = 5.0, allow_hyphen_values = true)]
        x_max: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
        /// Evaluate the closed form of a complex-parameter regime instead.
        #[arg(long, value_enum, conflicts_with = "expansion")]
        regime: Option<RegimeArg>,
        /// Report V(x) ~ shift + slope x near the origin.
        #[arg(long)]
        expansion: bool,
    },
    /// Energy levels from the closed-form quantization.
    Spectrum {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "n-limit", default_value_t = 10)]
        n_limit: u32,
        #[arg(long, value_enum, default_value = "paper")]
        mode: ModeArg,
        /// Only this level, without the bound-state cap.
        #[arg(long, conflicts_with = "n_limit")]
        level: Option<u32>,
        /// Use the q = -1 closed form.
        #[arg(long = "woods-saxon")]
        woods_saxon: bool,
        /// Check a trial energy against the quantization identity at --level.
        #[arg(long = "validate-energy", requires = "level", allow_hyphen_values = true, conflicts_with = "woods_saxon")]
        validate_energy: Option<f64>,
    },
    /// Eigenfunction samples, or the underlying polynomial data.
    Wavefunction {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, value_enum, default_value = "plus")]
        root: RootArg,
        /// Build even when the root fails validation.
        #[arg(long)]
        force: bool,
        #[arg(long, default_value_t = 201)]
        points: usize,
        /// Scale to unit norm instead of unit peak.
        #[arg(long)]
        normalize: bool,
        /// Report the Jacobi-polynomial indices (q = 1).
        #[arg(long, conflicts_with_all = ["nu", "normalize"])]
        jacobi: bool,
        /// Report the k roots, pi candidates, branch choice and Rodrigues polynomial.
        #[arg(long, conflicts_with = "normalize")]
        nu: bool,
    },
    /// Bound-state conditions, reduced parameters at an energy, or a reality predicate.
    Conditions {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0)]
        n: u32,
        /// Reduced parameters at this energy.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "reality")]
        energy: Option<f64>,
        /// Reality predicate of a complex-parameter regime.
        #[arg(long, value_enum)]
        reality: Option<RegimeArg>,
    },
    /// Cross-check a closed-form level against an independent method.
    Verify {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, value_enum, default_value = "plus")]
        root: RootArg,
        #[arg(long, value_enum, default_value = "shooting")]
        method: MethodArg,
        /// Agreement threshold; defaults to 1e-5 (shooting), 1e-9 (identity), 1e-8 (residual).
        #[arg(long)]
        tol: Option<f64>,
        /// Shooting box length.
        #[arg(long)]
        length: Option<f64>,
        /// Shooting step.
        #[arg(long)]
        step: Option<f64>,
    },
    /// Pionic-atom ground state, or the critical charge when --Z is absent.
    Pion {
        #[arg(long = "Z")]
        z: Option<u32>,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 0)]
        n: u32,
        /// Nucleon number (default 2.5 Z).
        #[arg(long = "A", requires = "z")]
        a: Option<f64>,
        #[arg(long, default_value_t = 1.2, requires = "z")]
        r0: f64,
        #[command(flatten)]
        constants: ConstantArgs,
    },
    /// Parameter sweep behind a figure.
    Scan {
        /// F1a, F1b, F2a, F2b, F3a, F3b, F4, F5a, F5b or F6.
        #[arg(long, required_unless_present = "all")]
        figure: Option<String>,
        /// Write every figure as fig<id>.csv (or .json) into this directory.
        #[arg(long = "all", value_name = "DIR", conflicts_with_all = ["figure", "output"])]
        all: Option<PathBuf>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
        range: Option<(f64, f64)>,
        /// Comma-separated series values.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        series: Option<Vec<f64>>,
        #[arg(long)]
        levels: Option<u32>,
        #[arg(long, value_enum)]
        branch: Option<BranchArg>,
        /// Value of the parameter the figure holds fixed.
        #[arg(long, allow_hyphen_values = true)]
        fixed: Option<f64>,
        #[command(flatten)]
        constants: ConstantArgs,
    },
    /// Special case and PT/Hermiticity classification.
    Classify {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 10.0)]
        extent: f64,
        #[arg(long, default_value_t = 0.01)]
        step: f64,
    },
    /// Applicability of the polynomial reduction to the pure exponential (q = 0).
    #[command(name = "diagnose-q0")]
    DiagnoseQ0 {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        energy: f64,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub status: i32,
    pub stdout: Vec<u8>,
    pub stderr: String,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Internal(_) | Error::Output { .. } => EXIT_FAILURE,
        _ => EXIT_DOMAIN,
    }
}

struct Rendered {
    payload: Payload,
    default_format: Format,
    status: i32,
    note: Option<String>,
}

fn record<T: Serialize>(v: &T) -> Result<Rendered> {
    Ok(Rendered {
        payload: Payload::record(v)?,
        default_format: Format::Json,
        status: EXIT_OK,
        note: None,
    })
}

fn table(t: Table) -> Rendered {
    Rendered {
        payload: Payload::table(t),
        default_format: Format::Csv,
        status: EXIT_OK,
        note: None,
    }
}

pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => RunOutput {
                    status: EXIT_OK,
                    stdout: text.into_bytes(),
                    stderr: String::new(),
                },
                _ => RunOutput {
                    status: EXIT_DOMAIN,
                    stdout: Vec::new(),
                    stderr: text,
                },
            };
        }
    };
    let format = cli.format.map(|f| match f {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    });

    if let Command::Scan { all: Some(dir), .. } = &cli.command {
        return match scan_all(&cli.command, dir, format.unwrap_or(Format::Csv)) {
            Ok(msg) => RunOutput { status: EXIT_OK, stdout: Vec::new(), stderr: msg },
            Err(e) => RunOutput { status: exit_code(&e), stdout: Vec::new(), stderr: format!("error: {e}\n") },
        };
    }

    let rendered = match dispatch(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            return RunOutput {
                status: exit_code(&e),
                stdout: Vec::new(),
                stderr: format!("error: {e}\n"),
            }
        }
    };
    let bytes = serialize(&rendered.payload, format.unwrap_or(rendered.default_format));
    let mut stderr = rendered.note.unwrap_or_default();
    let stdout = match &cli.output {
        Some(path) => match write_atomic(path, &bytes) {
            Ok(()) => Vec::new(),
            Err(e) => {
                stderr.push_str(&format!("error: {e}\n"));
                return RunOutput { status: EXIT_FAILURE, stdout: Vec::new(), stderr };
            }
        },
        None => bytes,
    };
    RunOutput {
        status: rendered.status,
        stdout,
        stderr,
    }
}

fn dispatch(cmd: &Command) -> Result<Rendered> {
    match cmd {
        Command::Potential { params, x_min, x_max, points, regime, expansion } => {
            let p = params.resolve()?;
            if *expansion {
                return record(&near_origin_expansion(&p)?);
            }
            if !(x_min < x_max) || *points < 2 {
                return Err(Error::domain("need x-min < x-max and at least two points"));
            }
            let mut t = Table::new(["x", "V_re", "V_im", "valid"]);
            for i in 0..*points {
                let x = x_min + (x_max - x_min) * i as f64 / (*points - 1) as f64;
                let v = match regime {
                    Some(r) => closed_form_complex((*r).into(), &p, x),
                    None => eval_potential(&p, x),
                };
                let row = match v {
                    Ok(v) if v.re.is_finite() && v.im.is_finite() => {
                        vec![Cell::Float(x), Cell::Float(v.re), Cell::Float(v.im), Cell::Bool(true)]
                    }
                    Ok(_) | Err(Error::Pole { .. }) => {
                        vec![Cell::Float(x), Cell::Float(0.0), Cell::Float(0.0), Cell::Bool(false)]
                    }
                    Err(e) => return Err(e),
                };
                t.push(row);
            }
            Ok(table(t))
        }
        Command::Spectrum { params, n_limit, mode, level, woods_saxon, validate_energy } => {
            let p = params.resolve()?;
            if classify_special_case(p.q) == SpecialCase::Exponential {
                return Err(Error::domain(format!(
                    "q = 0 has no closed-form spectrum; run `hulthen-kg diagnose-q0 --V0 {} --q 0 --alpha {} --energy <E>` instead",
                    fmt_complex(p.v0),
                    fmt_complex(p.alpha)
                )));
            }
            let mode = match mode {
                ModeArg::Paper => Mode::PaperFidelity,
                ModeArg::Validated => Mode::Validated,
            };
            if let (Some(e), Some(n)) = (validate_energy, level) {
                let v = validate_level(*e, *n, &p);
                return record(&v);
            }
            let levels: Vec<EnergyLevel> = match (level, woods_saxon) {
                (Some(n), true) => vec![woods_saxon_spectrum(&p, *n)?],
                (Some(n), false) => vec![energy_candidates(*n, &p)?],
                (None, true) => {
                    let cap = spectrum(&p, *n_limit, Mode::PaperFidelity)?.len() as u32;
                    (0..cap).map(|n| woods_saxon_spectrum(&p, n)).collect::<Result<_>>()?
                }
                (None, false) => spectrum(&p, *n_limit, mode)?,
            };
            let levels: Vec<EnergyLevel> = levels
                .into_iter()
                .map(|mut l| {
                    l.mode = mode;
                    l
                })
                .filter(|l| mode == Mode::PaperFidelity || l.valid_plus || l.valid_minus)
                .collect();
            Ok(table(levels_table(&levels)))
        }
        Command::Wavefunction { params, n, root, force, points, normalize: norm, jacobi, nu } => {
            let p = params.resolve()?;
            let level = energy_candidates(*n, &p)?;
            let root: Root = (*root).into();
            if *jacobi {
                return record(&jacobi_form(&level, root, &p)?);
            }
            if *nu {
                return record(&nu_report(&level, root, &p)?);
            }
            let spec = build_eigenfunction(&level, root, &p, *force)?;
            let (samples, scale) = if *norm {
                let c = normalize(&spec, &QuadratureConfig::default())?;
                (spec.sample_x(*points, false), c)
            } else {
                (spec.sample_x(*points, true), 1.0)
            };
            let mut t = Table::new(["x", "psi_re", "psi_im"]);
            for (x, v) in samples {
                t.push(vec![Cell::Float(x), Cell::Float(v.re * scale), Cell::Float(v.im * scale)]);
            }
            let mut r = table(t);
            if spec.forced {
                r.note = Some(format!("warning: root {root:?} of level {n} fails validation; built because --force\n"));
            }
            Ok(r)
        }
        Command::Conditions { params, n, energy, reality } => {
            let p = params.resolve()?;
            if let Some(e) = energy {
                return record(&reduce_dimensionless(&p, *e)?);
            }
            if let Some(r) = reality {
                return record(&reality_predicate((*r).into(), &p, *n)?);
            }
            record(&bound_state_conditions(&p, *n)?)
        }
        Command::Verify { params, n, root, method, tol, length, step } => {
            verify(&params.resolve()?, *n, (*root).into(), *method, *tol, *length, *step)
        }
        Command::Pion { z, q, n, a, r0, constants } => {
            let units = constants.resolve(UnitsArg::Pion)?;
            match z {
                None => {
                    #[derive(Serialize)]
                    struct Critical {
                        q: f64,
                        n: u32,
                        critical_z: u32,
                    }
                    record(&Critical { q: *q, n: *n, critical_z: critical_z(*q, *n, &units)? })
                }
                Some(z) => {
                    let mut sys = PionSystem::new(*z)?.with_r0(*r0)?;
                    if let Some(a) = a {
                        sys = sys.with_nucleons(*a)?;
                    }
                    if *n != 0 {
                        return Err(Error::domain("the pion ground state is n = 0"));
                    }
                    #[derive(Serialize)]
                    struct Pion {
                        system: PionSystem,
                        radius: f64,
                        v0: f64,
                        e0: f64,
                        binding: f64,
                        in_units_of_mass: f64,
                    }
                    let g = pion_ground_state(&sys, *q, &units)?;
                    record(&Pion {
                        system: sys,
                        radius: sys.radius(),
                        v0: pion_potential_depth(&sys, &units),
                        e0: g.e0,
                        binding: g.binding,
                        in_units_of_mass: g.in_units_of_mass,
                    })
                }
            }
        }
        Command::Scan { figure, .. } => {
            let id: FigureId = figure.as_deref().unwrap_or_default().parse()?;
            let t = figure_scan(id, &scan_overrides(cmd)?)?;
            Ok(Rendered {
                payload: scan_payload(&t)?,
                default_format: Format::Csv,
                status: EXIT_OK,
                note: None,
            })
        }
        Command::Classify { params, extent, step } => {
            let p = params.resolve()?;
            if !(*step > 0.0 && *extent > 0.0) {
                return Err(Error::domain("extent and step must be positive"));
            }
            let grid = symmetric_grid(*step, *extent);
            let s = pt_symmetry_test(&p, &grid)?;
            #[derive(Serialize)]
            struct Classification {
                special_case: SpecialCase,
                pt_symmetric: bool,
                hermitian: bool,
                max_violation: f64,
                max_imaginary: f64,
            }
            record(&Classification {
                special_case: classify_special_case(p.q),
                pt_symmetric: s.is_pt_symmetric,
                hermitian: s.is_hermitian,
                max_violation: s.max_violation,
                max_imaginary: s.max_imaginary,
            })
        }
        Command::DiagnoseQ0 { params, energy } => {
            let p = params.resolve()?;
            record(&nu_applicability_diagnostic(&p, *energy)?)
        }
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn scan_overrides(cmd: &Command) -> Result<ScanOverrides> {
    let Command::Scan { points, range, series, levels, branch, fixed, constants, .. } = cmd else {
        return Err(Error::Internal("not a scan".into()));
    };
    Ok(ScanOverrides {
        points: *points,
        range: *range,
        series: series.clone(),
        levels: *levels,
        branch: branch.map(|b| match b {
            BranchArg::Plus => BranchChoice::Plus,
            BranchArg::Minus => BranchChoice::Minus,
            BranchArg::Both => BranchChoice::Both,
        }),
        fixed: *fixed,
        units: Some(constants.resolve(UnitsArg::Pion)?),
    })
}

fn scan_all(cmd: &Command, dir: &std::path::Path, format: Format) -> Result<String> {
    let overrides = scan_overrides(cmd)?;
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    std::fs::create_dir_all(dir).map_err(|e| Error::Output {
        path: dir.display().to_string(),
        reason: e.to_string(),
    })?;
    let mut msg = String::new();
    for id in FigureId::ALL {
        let t = figure_scan(id, &overrides)?;
        let path = dir.join(format!("{}.{ext}", id.file_stem()));
        write_atomic(&path, &serialize(&scan_payload(&t)?, format))?;
        msg.push_str(&format!("wrote {}\n", path.display()));
    }
    Ok(msg)
}

#[derive(Serialize)]
struct Verdict {
    method: &'static str,
    #[serde(rename = "E_analytic")]
    e_analytic: f64,
    #[serde(rename = "E_numeric")]
    e_numeric: Option<f64>,
    delta: Option<f64>,
    residual: f64,
    passed: bool,
    tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    domain: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

fn verify(
    p: &PotentialParams,
    n: u32,
    root: Root,
    method: MethodArg,
    tol: Option<f64>,
    length: Option<f64>,
    step: Option<f64>,
) -> Result<Rendered> {
    let level = energy_candidates(n, p)?;
    let e = level.root(root);
    if e.im.abs() > 1e-12 * p.mass_energy {
        return Err(Error::domain(format!("root {root:?} of level {n} is complex ({e})")));
    }
    let e = e.re;
    let check = validate_level(e, n, p);
    let mut v = Verdict {
        method: "",
        e_analytic: e,
        e_numeric: None,
        delta: None,
        residual: check.residual,
        passed: false,
        tolerance: 0.0,
        domain: None,
        detail: None,
    };
    match method {
        MethodArg::Shooting => {
            v.method = "shooting";
            v.tolerance = tol.unwrap_or(1e-5);
            let mut cfg = ShootingConfig::for_params(p);
            if let Some(l) = length {
                cfg = cfg.with_length(l);
            }
            if let Some(s) = step {
                cfg = cfg.with_step(s);
            }
            v.domain = Some(match cfg.domain {
                ShootingDomain::HalfLine => format!(
                    "half line from x = {} over length {}",
                    p.pole_location().re,
                    cfg.length
                ),
                ShootingDomain::FullLine => format!("full line [-{0}, {0}]", cfg.length),
            });
            match shooting_eigenvalue(p, n, &cfg) {
                Ok(en) => {
                    v.e_numeric = Some(en);
                    let d = (en - e).abs() / p.mass_energy;
                    v.delta = Some(d);
                    v.passed = d <= v.tolerance && check.valid;
                }
                Err(err @ Error::NoEigenvalueInBracket { .. }) => v.detail = Some(err.to_string()),
                Err(err) => return Err(err),
            }
            if !check.valid {
                v.detail.get_or_insert_with(|| "the analytic root fails the quantization identity".into());
            }
        }
        MethodArg::Identity => {
            v.method = "identity";
            v.tolerance = tol.unwrap_or(1e-9);
            let roots = identity_roots(p, n)?;
            let nearest = roots.iter().copied().min_by(|a, b| (a - e).abs().total_cmp(&(b - e).abs()));
            if let Some(en) = nearest {
                let d = (en - e).abs() / p.mass_energy;
                v.e_numeric = Some(en);
                v.delta = Some(d);
                v.passed = d <= v.tolerance;
            } else {
                v.detail = Some("the identity has no real root in [-mc^2, mc^2]".into());
            }
        }
        MethodArg::Residual => {
            v.method = "residual";
            v.tolerance = tol.unwrap_or(1e-8);
            let spec = build_eigenfunction(&level, root, p, true)?;
            let r = ode_residual(&spec, e, p, 50)?;
            v.e_numeric = Some(e);
            v.delta = Some(0.0);
            v.residual = r.max_residual;
            v.passed = r.max_residual <= v.tolerance && check.valid;
            if !check.valid {
                v.detail = Some("the analytic root fails the quantization identity".into());
            }
        }
    }
    let mut r = record(&v)?;
    if !v.passed {
        r.status = EXIT_VERIFY;
    }
    Ok(r)
}

#[derive(Serialize)]
struct NuReport {
    n: u32,
    energy: f64,
    problem: NuProblem,
    k: Vec<Complex64>,
    candidates: Vec<PiCandidate>,
    negative_tau_choice: Option<NuSolution>,
    negative_tau_error: Option<String>,
    bound_exponent_choice: NuSolution,
    lambda_n: Complex64,
    weight: Option<ProductForm>,
    rodrigues: Vec<Complex64>,
}

fn nu_report(level: &EnergyLevel, root: Root, p: &PotentialParams) -> Result<NuReport> {
    let e = level.root(root);
    if e.im.abs() > 1e-12 * p.mass_energy {
        return Err(Error::domain(format!("root {root:?} of level {} is complex ({e})", level.n)));
    }
    let d = reduce_dimensionless(p, e.re)?;
    let problem = NuProblem::generalized_hulthen(&d);
    let k = nu::solve_k_candidates(&problem)?;
    let mut candidates = Vec::new();
    for kk in &k {
        candidates.extend(nu::build_pi_candidates(&problem, *kk)?);
    }
    let (negative_tau_choice, negative_tau_error) = match nu::select_branch(&problem, &candidates) {
        Ok(s) => (Some(s), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let bound = nu::select_branch_with(&problem, &candidates, BranchPolicy::BoundExponent)?;
    let poly = nu::rodrigues_polynomial(level.n, &bound, &problem)?;
    Ok(NuReport {
        n: level.n,
        energy: e.re,
        problem,
        k,
        lambda_n: nu::lambda_n(level.n, &bound, &problem),
        weight: nu::weight_function(&bound, &problem).ok(),
        candidates,
        negative_tau_choice,
        negative_tau_error,
        bound_exponent_choice: bound,
        rodrigues: poly.coeffs,
    })
}

/// Subcommand names as registered with the argument parser.
pub fn subcommand_names() -> Vec<String> {
    Cli::command().get_subcommands().map(|c| c.get_name().to_string()).collect()
}
