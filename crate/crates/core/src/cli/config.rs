//! Run configuration: a flat `key = value` TOML file overridden by flags.
//!
//! Every key below is also a long flag with `_` replaced by `-`
//! (`delta_hz` is `--delta-hz`). Frequencies are in Hz here and converted to
//! rad/s when the configuration is resolved.
//!
//! | key | unit | meaning |
//! |---|---|---|
//! | `atom` | | catalog name, e.g. `Cs` |
//! | `line` | | `D1` or `D2` |
//! | `qp`, `qs` | | pump / Stokes polarization, `-1`, `0` or `1` |
//! | `pump_field`, `stokes_field` | V/m | field amplitude |
//! | `pump_phase`, `stokes_phase` | rad | phase of the amplitude |
//! | `pump_intensity`, `stokes_intensity` | W/m^2 | alternative to the amplitude |
//! | `delta_hz` | Hz | single-photon detuning |
//! | `two_photon_hz` | Hz | two-photon detuning |
//! | `scan_from_hz`, `scan_to_hz`, `scan_points` | Hz | two-photon detuning scan |
//! | `mf` | | lower-state projection selecting one pair |
//! | `t_span` | s | evolution time |
//! | `samples` | | rows in a time series |
//! | `levels` | | matrix dimension of a random `eigs` case |
//! | `coupling_ratio` | | `norm(Omega)/abs(Delta)` of a random `eigs` case |
//! | `format` | | `csv` or `json` |
//! | `seed` | | RNG seed |
//! | `exact`, `oracle`, `strict`, `profiles` | | switches |

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;

use crate::atoms::{builtin_atoms, find_atom, AtomSpec, FieldSpec, LineLabel};
use crate::constants::{EPSILON_0, SPEED_OF_LIGHT};
use crate::error::{invalid, Error, Result};
use crate::geometry::Polarization;
use crate::{HalfInt, C64};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Options shared by every subcommand.
#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Read defaults from a `key = value` file.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub atom: Option<String>,
    #[arg(long, global = true)]
    pub line: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub qp: Option<i32>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub qs: Option<i32>,
    /// V/m
    #[arg(long, global = true)]
    pub pump_field: Option<f64>,
    /// V/m
    #[arg(long, global = true)]
    pub stokes_field: Option<f64>,
    /// rad
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub pump_phase: Option<f64>,
    /// rad
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub stokes_phase: Option<f64>,
    /// W/m^2
    #[arg(long, global = true)]
    pub pump_intensity: Option<f64>,
    /// W/m^2
    #[arg(long, global = true)]
    pub stokes_intensity: Option<f64>,
    /// Single-photon detuning in Hz.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub delta_hz: Option<f64>,
    /// Two-photon detuning in Hz.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub two_photon_hz: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub scan_from_hz: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub scan_to_hz: Option<f64>,
    #[arg(long, global = true)]
    pub scan_points: Option<usize>,
    /// Lower-state projection, e.g. `0`, `-3` or `-1/2`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mf: Option<String>,
    /// s
    #[arg(long, global = true)]
    pub t_span: Option<f64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub levels: Option<usize>,
    #[arg(long, global = true)]
    pub coupling_ratio: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Exact rational output for `table`.
    #[arg(long, global = true)]
    #[serde(default)]
    pub exact: bool,
    /// Add integrator columns to `evolve`.
    #[arg(long, global = true)]
    #[serde(default)]
    pub oracle: bool,
    /// Exit with status 3 when a regime criterion fails.
    #[arg(long, global = true)]
    #[serde(default)]
    pub strict: bool,
    /// Emit coupling strength against mF for several nuclear spins.
    #[arg(long, global = true)]
    #[serde(default)]
    pub profiles: bool,
}

impl Options {
    /// Fill unset flags from `file`.
    pub fn merged_over(self, file: Options) -> Options {
        Options {
            config: self.config,
            atom: self.atom.or(file.atom),
            line: self.line.or(file.line),
            qp: self.qp.or(file.qp),
            qs: self.qs.or(file.qs),
            pump_field: self.pump_field.or(file.pump_field),
            stokes_field: self.stokes_field.or(file.stokes_field),
            pump_phase: self.pump_phase.or(file.pump_phase),
            stokes_phase: self.stokes_phase.or(file.stokes_phase),
            pump_intensity: self.pump_intensity.or(file.pump_intensity),
            stokes_intensity: self.stokes_intensity.or(file.stokes_intensity),
            delta_hz: self.delta_hz.or(file.delta_hz),
            two_photon_hz: self.two_photon_hz.or(file.two_photon_hz),
            scan_from_hz: self.scan_from_hz.or(file.scan_from_hz),
            scan_to_hz: self.scan_to_hz.or(file.scan_to_hz),
            scan_points: self.scan_points.or(file.scan_points),
            mf: self.mf.or(file.mf),
            t_span: self.t_span.or(file.t_span),
            samples: self.samples.or(file.samples),
            levels: self.levels.or(file.levels),
            coupling_ratio: self.coupling_ratio.or(file.coupling_ratio),
            format: self.format.or(file.format),
            seed: self.seed.or(file.seed),
            exact: self.exact || file.exact,
            oracle: self.oracle || file.oracle,
            strict: self.strict || file.strict,
            profiles: self.profiles || file.profiles,
        }
    }
}

pub fn read_config_file(path: &Path) -> Result<Options> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

pub fn parse_config(text: &str) -> Result<Options> {
    toml::from_str(text).map_err(|e| invalid(e.to_string()))
}

/// Two-photon detuning scan in rad/s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scan {
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl Scan {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.from];
        }
        let step = (self.to - self.from) / (self.points - 1) as f64;
        (0..self.points).map(|k| self.from + step * k as f64).collect()
    }
}

pub const DEFAULT_SAMPLES: usize = 201;
pub const DEFAULT_COUPLING_RATIO: f64 = 0.01;

/// Validated configuration in SI units with angular frequencies.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub atom: AtomSpec,
    pub line: LineLabel,
    pub q_pump: Polarization,
    pub q_stokes: Polarization,
    pub pump: Option<FieldSpec>,
    pub stokes: Option<FieldSpec>,
    /// rad/s
    pub single_photon: Option<f64>,
    /// rad/s
    pub two_photon: f64,
    pub scan: Option<Scan>,
    pub mf: Option<HalfInt>,
    /// s
    pub t_span: Option<f64>,
    pub samples: usize,
    pub levels: Option<usize>,
    pub coupling_ratio: f64,
    pub format: Format,
    pub seed: u64,
    pub exact: bool,
    pub oracle: bool,
    pub strict: bool,
    pub profiles: bool,
}

/// `|E| = sqrt(2 I / (epsilon_0 c))`
pub fn field_from_intensity(intensity: f64) -> f64 {
    (2.0 * intensity / (EPSILON_0 * SPEED_OF_LIGHT)).sqrt()
}

fn finite(name: &str, x: Option<f64>) -> Result<Option<f64>> {
    match x {
        Some(v) if !v.is_finite() => Err(invalid(format!("{name} must be finite"))),
        other => Ok(other),
    }
}

fn field(
    name: &str,
    amplitude: Option<f64>,
    intensity: Option<f64>,
    phase: Option<f64>,
    q: Polarization,
) -> Result<Option<FieldSpec>> {
    let phase = finite(&format!("{name}_phase"), phase)?.unwrap_or(0.0);
    let magnitude = match (finite(name, amplitude)?, finite(name, intensity)?) {
        (Some(_), Some(_)) => {
            return Err(invalid(format!(
                "give either {name}_field or {name}_intensity, not both"
            )))
        }
        (Some(e), None) if e >= 0.0 => e,
        (None, Some(i)) if i >= 0.0 => field_from_intensity(i),
        (None, None) => return Ok(None),
        _ => return Err(invalid(format!("{name} field strength must be non-negative"))),
    };
    FieldSpec::new(C64::from_polar(magnitude, phase), q).map(Some)
}

fn polarization(name: &str, q: Option<i32>) -> Result<Polarization> {
    Polarization::new(q.unwrap_or(1)).map_err(|_| invalid(format!("{name} must be -1, 0 or 1")))
}

impl RunConfig {
    pub fn resolve(opts: Options) -> Result<RunConfig> {
        let atoms = builtin_atoms();
        let atom = find_atom(&atoms, opts.atom.as_deref().unwrap_or("Cs"))?.clone();
        let line: LineLabel = opts.line.as_deref().unwrap_or("D2").parse()?;
        atom.line(line)?;
        let q_pump = polarization("qp", opts.qp)?;
        let q_stokes = polarization("qs", opts.qs)?;
        let pump = field("pump", opts.pump_field, opts.pump_intensity, opts.pump_phase, q_pump)?;
        let stokes = field(
            "stokes",
            opts.stokes_field,
            opts.stokes_intensity,
            opts.stokes_phase,
            q_stokes,
        )?;
        let single_photon = finite("delta_hz", opts.delta_hz)?.map(|f| TAU * f);
        if single_photon == Some(0.0) {
            return Err(invalid("delta_hz must be non-zero"));
        }
        let two_photon = TAU * finite("two_photon_hz", opts.two_photon_hz)?.unwrap_or(0.0);
        let scan = match (
            finite("scan_from_hz", opts.scan_from_hz)?,
            finite("scan_to_hz", opts.scan_to_hz)?,
            opts.scan_points,
        ) {
            (None, None, None) => None,
            (Some(a), Some(b), Some(n)) => {
                if n == 0 || b < a || (n == 1 && a != b) {
                    return Err(invalid(
                        "scan needs scan_points >= 1 and scan_from_hz <= scan_to_hz",
                    ));
                }
                Some(Scan {
                    from: TAU * a,
                    to: TAU * b,
                    points: n,
                })
            }
            _ => {
                return Err(invalid(
                    "a scan needs all of scan_from_hz, scan_to_hz and scan_points",
                ))
            }
        };
        let mf = opts.mf.as_deref().map(str::parse::<HalfInt>).transpose()?;
        let t_span = finite("t_span", opts.t_span)?;
        if t_span.is_some_and(|t| t <= 0.0) {
            return Err(invalid("t_span must be positive"));
        }
        let samples = opts.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples < 2 {
            return Err(invalid("samples must be at least 2"));
        }
        if opts.levels.is_some_and(|n| n < 3) {
            return Err(invalid("levels must be at least 3"));
        }
        let coupling_ratio = finite("coupling_ratio", opts.coupling_ratio)?.unwrap_or(DEFAULT_COUPLING_RATIO);
        if coupling_ratio <= 0.0 {
            return Err(invalid("coupling_ratio must be positive"));
        }
        Ok(RunConfig {
            atom,
            line,
            q_pump,
            q_stokes,
            pump,
            stokes,
            single_photon,
            two_photon,
            scan,
            mf,
            t_span,
            samples,
            levels: opts.levels,
            coupling_ratio,
            format: opts.format.unwrap_or_default(),
            seed: opts.seed.unwrap_or(0),
            exact: opts.exact,
            oracle: opts.oracle,
            strict: opts.strict,
            profiles: opts.profiles,
        })
    }

    pub fn fields(&self) -> Result<(FieldSpec, FieldSpec)> {
        match (self.pump, self.stokes) {
            (Some(p), Some(s)) => Ok((p, s)),
            _ => Err(invalid(
                "both fields are required: give pump_field or pump_intensity and stokes_field or stokes_intensity",
            )),
        }
    }

    pub fn require_single_photon(&self) -> Result<f64> {
        self.single_photon
            .ok_or_else(|| invalid("the single-photon detuning delta_hz is required"))
    }

    pub fn require_mf(&self) -> Result<HalfInt> {
        self.mf.ok_or_else(|| invalid("select a pair with mf"))
    }

    /// Two-photon detunings to evaluate: the scan, or the single configured value.
    pub fn two_photon_values(&self) -> Vec<f64> {
        self.scan.map_or_else(|| vec![self.two_photon], |s| s.values())
    }
}

/// `true` for errors from a numerical routine rather than from the input.
pub fn is_numerical(e: &Error) -> bool {
    matches!(
        e,
        Error::NormDrift { .. }
            | Error::StepTooLarge { .. }
            | Error::NoConvergence { .. }
            | Error::NotHermitian { .. }
    )
}
