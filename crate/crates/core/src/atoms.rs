//! Alkali-atom data and Raman pairs between the two hyperfine ground levels.
//!
//! Atoms are loaded from a TOML catalog (see `data/atoms.toml`). A Raman pair
//! links `|F = I - 1/2, mF>` (pump leg, polarization `qP`) with
//! `|F = I + 1/2, mF + qP - qS>` (Stokes leg, polarization `qS`) through the
//! excited hyperfine manifold `F'` of one D line. Pairs are labelled by the
//! lower-level projection `mF`.

use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use crate::constants::HBAR;
use crate::effective::{envelope, mixing_angles, CouplingVectors, DetuningSet};
use crate::error::{invalid, Error, Result};
use crate::geometry::{
    coupling_vector, g_dot_closed, g_dot_exact, g_norm_sq_exact, reduced_dipole_from_linewidth,
    AngularMomentumState, Branch, Fraction, Polarization, ReducedDipole, SqrtFraction,
};
use crate::parallel::{try_map, Execution};
use crate::{HalfInt, C64};

const BUILTIN: &str = include_str!("../data/atoms.toml");
const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LineLabel {
    D1,
    D2,
}

impl LineLabel {
    /// `J'` of the excited state.
    pub fn jprime(self) -> HalfInt {
        match self {
            LineLabel::D1 => HalfInt::from_twice(1),
            LineLabel::D2 => HalfInt::from_twice(3),
        }
    }
}

impl fmt::Display for LineLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LineLabel::D1 => "D1",
            LineLabel::D2 => "D2",
        })
    }
}

impl FromStr for LineLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "D1" => Ok(LineLabel::D1),
            "D2" => Ok(LineLabel::D2),
            _ => Err(invalid(format!("unknown line `{s}`, expected D1 or D2"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Line {
    pub label: LineLabel,
    pub jprime: HalfInt,
    /// m
    pub wavelength: f64,
    /// rad/s
    pub linewidth: f64,
}

impl Line {
    pub fn reduced_dipole(&self) -> Result<ReducedDipole> {
        reduced_dipole_from_linewidth(self.linewidth, self.wavelength, HalfInt::HALF, self.jprime)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtomSpec {
    pub name: String,
    pub nuclear_spin: HalfInt,
    pub lines: Vec<Line>,
    /// rad/s
    pub ground_splitting: f64,
}

impl AtomSpec {
    pub fn line(&self, label: LineLabel) -> Result<&Line> {
        self.lines
            .iter()
            .find(|l| l.label == label)
            .ok_or_else(|| invalid(format!("{} has no {label} line", self.name)))
    }

    /// `F = I - 1/2`
    pub fn lower_f(&self) -> HalfInt {
        Branch::Pump.ground_f(self.nuclear_spin)
    }

    /// `F = I + 1/2`
    pub fn upper_f(&self) -> HalfInt {
        Branch::Stokes.ground_f(self.nuclear_spin)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    format_version: u32,
    #[serde(default)]
    atom: Vec<RawAtom>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAtom {
    name: String,
    nuclear_spin_x2: i32,
    ground_splitting_rad_s: f64,
    #[serde(default)]
    line: Vec<RawLine>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLine {
    label: String,
    jprime_x2: i32,
    wavelength_m: f64,
    linewidth_rad_s: f64,
}

fn positive(what: &str, atom: &str, x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(Error::AtomData(format!("{atom}: {what} must be positive, got {x}")))
    }
}

fn convert(raw: RawAtom) -> Result<AtomSpec> {
    let name = raw.name.trim().to_string();
    if name.is_empty() {
        return Err(Error::AtomData("atom with empty name".into()));
    }
    if raw.nuclear_spin_x2 < 1 {
        return Err(Error::AtomData(format!(
            "{name}: nuclear spin must be at least 1/2 for two ground hyperfine levels"
        )));
    }
    let mut lines: Vec<Line> = Vec::new();
    for l in raw.line {
        let label: LineLabel = l
            .label
            .parse()
            .map_err(|_| Error::AtomData(format!("{name}: unknown line label `{}`", l.label)))?;
        if l.jprime_x2 != label.jprime().twice() {
            return Err(Error::AtomData(format!(
                "{name}: {label} needs jprime_x2 = {}, got {}",
                label.jprime().twice(),
                l.jprime_x2
            )));
        }
        if lines.iter().any(|x| x.label == label) {
            return Err(Error::AtomData(format!("{name}: duplicate {label} line")));
        }
        lines.push(Line {
            label,
            jprime: label.jprime(),
            wavelength: positive("wavelength", &name, l.wavelength_m)?,
            linewidth: positive("linewidth", &name, l.linewidth_rad_s)?,
        });
    }
    Ok(AtomSpec {
        ground_splitting: positive("ground splitting", &name, raw.ground_splitting_rad_s)?,
        nuclear_spin: HalfInt::from_twice(raw.nuclear_spin_x2),
        name,
        lines,
    })
}

/// Parse a catalog in the `atoms.toml` format.
pub fn parse_catalog(text: &str) -> Result<Vec<AtomSpec>> {
    let raw: RawCatalog = toml::from_str(text).map_err(|e| Error::AtomData(e.to_string()))?;
    if raw.format_version != FORMAT_VERSION {
        return Err(Error::AtomData(format!(
            "unsupported format_version {}, expected {FORMAT_VERSION}",
            raw.format_version
        )));
    }
    let atoms = raw.atom.into_iter().map(convert).collect::<Result<Vec<_>>>()?;
    for (i, a) in atoms.iter().enumerate() {
        if atoms[..i].iter().any(|b| b.name.eq_ignore_ascii_case(&a.name)) {
            return Err(Error::AtomData(format!("duplicate atom `{}`", a.name)));
        }
    }
    Ok(atoms)
}

/// Atoms shipped with the crate.
pub fn builtin_atoms() -> Vec<AtomSpec> {
    parse_catalog(BUILTIN).expect("bundled atom catalog is valid")
}

/// Case-insensitive lookup.
pub fn find_atom<'a>(atoms: &'a [AtomSpec], name: &str) -> Result<&'a AtomSpec> {
    atoms
        .iter()
        .find(|a| a.name.eq_ignore_ascii_case(name.trim()))
        .ok_or_else(|| Error::UnknownAtom(name.to_string()))
}

/// A driving field: complex amplitude in V/m and spherical polarization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldSpec {
    pub amplitude: C64,
    pub polarization: Polarization,
}

impl FieldSpec {
    /// A zero amplitude is accepted so the undriven limit can be expressed.
    pub fn new(amplitude: C64, polarization: Polarization) -> Result<Self> {
        if !(amplitude.re.is_finite() && amplitude.im.is_finite()) {
            return Err(invalid("field amplitude must be finite"));
        }
        Ok(FieldSpec {
            amplitude,
            polarization,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RamanPair {
    pub lower: AngularMomentumState,
    pub upper: AngularMomentumState,
    pub q_pump: Polarization,
    pub q_stokes: Polarization,
}

/// All pairs for the polarization choice, ascending in lower `mF`.
pub fn enumerate_pairs(atom: &AtomSpec, q_pump: Polarization, q_stokes: Polarization) -> Vec<RamanPair> {
    let (i, j) = (atom.nuclear_spin, HalfInt::HALF);
    let (fl, fu) = (atom.lower_f(), atom.upper_f());
    let shift = HalfInt::integer(q_pump.q() - q_stokes.q());
    fl.projections()
        .filter_map(|m| {
            let mu = m + shift;
            if mu.abs() > fu {
                return None;
            }
            Some(RamanPair {
                lower: AngularMomentumState::new(i, j, fl, m).ok()?,
                upper: AngularMomentumState::new(i, j, fu, mu).ok()?,
                q_pump,
                q_stokes,
            })
        })
        .collect()
}

/// Coupling vectors `Omega = E <J||mu||J'> G / hbar` over the excited `F'` manifold.
pub fn physical_couplings(
    atom: &AtomSpec,
    line: LineLabel,
    pair: &RamanPair,
    pump: &FieldSpec,
    stokes: &FieldSpec,
) -> Result<CouplingVectors> {
    if pump.polarization != pair.q_pump || stokes.polarization != pair.q_stokes {
        return Err(invalid(format!(
            "field polarizations ({},{}) do not match the pair ({},{})",
            pump.polarization, stokes.polarization, pair.q_pump, pair.q_stokes
        )));
    }
    let l = atom.line(line)?;
    let d = l.reduced_dipole()?.value();
    let gp = coupling_vector(&pair.lower, pair.q_pump, l.jprime)?;
    let gs = coupling_vector(&pair.upper, pair.q_stokes, l.jprime)?;
    let scale = |e: C64| e * (d / HBAR);
    CouplingVectors::new(
        gp.values().map(|g| scale(pump.amplitude) * g).collect(),
        gs.values().map(|g| scale(stokes.amplitude) * g).collect(),
    )
}

/// Effective parameters of one pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumRow {
    pub mf: HalfInt,
    pub mf_upper: HalfInt,
    pub omega_b: f64,
    pub delta_b: f64,
    /// Transfer envelope `m` at the configured two-photon detuning.
    pub envelope: f64,
}

/// Effective coupling and lightshift for every pair.
pub fn spectrum(
    atom: &AtomSpec,
    line: LineLabel,
    pump: &FieldSpec,
    stokes: &FieldSpec,
    detuning: &DetuningSet,
    exec: Execution,
) -> Result<Vec<SpectrumRow>> {
    let pairs = enumerate_pairs(atom, pump.polarization, stokes.polarization);
    try_map(exec, &pairs, |pair| {
        let c = physical_couplings(atom, line, pair, pump, stokes)?;
        let eff = mixing_angles(&c, detuning)?;
        Ok(SpectrumRow {
            mf: pair.lower.mf,
            mf_upper: pair.upper.mf,
            omega_b: eff.omega_b,
            delta_b: eff.delta_b,
            envelope: envelope(&eff),
        })
    })
}

/// `Omega_B` from the closed-form geometry:
/// `<J||mu||J'>^2 |E_P E_S*| |G_P.G_S| / (2 |Delta| hbar^2)`.
pub fn closed_form_rabi(
    atom: &AtomSpec,
    line: LineLabel,
    mf: HalfInt,
    pump: &FieldSpec,
    stokes: &FieldSpec,
    single_photon: f64,
) -> Result<f64> {
    let l = atom.line(line)?;
    let d = l.reduced_dipole()?.value();
    let g = g_dot_closed(atom.nuclear_spin, mf, pump.polarization, stokes.polarization, l.jprime)?;
    Ok(d * d * (pump.amplitude * stokes.amplitude.conj()).norm() * g
        / (2.0 * single_photon.abs() * HBAR * HBAR))
}

/// One row of the geometric table: `|G_P.G_S|`, `||G_S||^2`, `||G_P||^2` for lower `mF`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TableRow {
    pub mf: HalfInt,
    pub gdot: SqrtFraction,
    pub gs_norm_sq: Fraction,
    pub gp_norm_sq: Fraction,
}

/// Exact closed-form table for the supported polarization pairs.
pub fn closed_form_table(
    atom: &AtomSpec,
    line: LineLabel,
    q_pump: Polarization,
    q_stokes: Polarization,
) -> Result<Vec<TableRow>> {
    let jp = atom.line(line)?.jprime;
    let i = atom.nuclear_spin;
    enumerate_pairs(atom, q_pump, q_stokes)
        .iter()
        .map(|p| {
            Ok(TableRow {
                mf: p.lower.mf,
                gdot: g_dot_exact(i, p.lower.mf, q_pump, q_stokes, jp)?,
                gs_norm_sq: g_norm_sq_exact(i, Branch::Stokes, p.upper.mf, q_stokes, jp)?,
                gp_norm_sq: g_norm_sq_exact(i, Branch::Pump, p.lower.mf, q_pump, jp)?,
            })
        })
        .collect()
}

/// The same quantities evaluated directly from Wigner symbols.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericRow {
    pub mf: HalfInt,
    pub gdot: f64,
    pub gs_norm_sq: f64,
    pub gp_norm_sq: f64,
}

pub fn numeric_table(
    atom: &AtomSpec,
    line: LineLabel,
    q_pump: Polarization,
    q_stokes: Polarization,
) -> Result<Vec<NumericRow>> {
    let jp = atom.line(line)?.jprime;
    enumerate_pairs(atom, q_pump, q_stokes)
        .iter()
        .map(|p| {
            let gp = coupling_vector(&p.lower, q_pump, jp)?;
            let gs = coupling_vector(&p.upper, q_stokes, jp)?;
            Ok(NumericRow {
                mf: p.lower.mf,
                gdot: gp.dot(&gs)?.abs(),
                gs_norm_sq: gs.norm_sq(),
                gp_norm_sq: gp.norm_sq(),
            })
        })
        .collect()
}

/// The D2, `(qP, qS) = (+1, +1)` table.
pub fn table_one(atom: &AtomSpec) -> Result<Vec<TableRow>> {
    closed_form_table(atom, LineLabel::D2, Polarization::SIGMA_PLUS, Polarization::SIGMA_PLUS)
}

/// Coupling strength `|G_P.G_S|` against `mF` for one nuclear spin and polarization pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CouplingProfilePoint {
    pub nuclear_spin: HalfInt,
    pub q_pump: Polarization,
    pub q_stokes: Polarization,
    pub mf: HalfInt,
    pub gdot: f64,
}

/// `|G_P.G_S|(mF)` for `(1,1)` and `(0,1)` across the given nuclear spins.
pub fn coupling_profiles(spins: &[HalfInt], line: LineLabel) -> Result<Vec<CouplingProfilePoint>> {
    let pairs = [
        (Polarization::SIGMA_PLUS, Polarization::SIGMA_PLUS),
        (Polarization::PI, Polarization::SIGMA_PLUS),
    ];
    let mut out = Vec::new();
    for &i in spins {
        if i.twice() < 1 {
            return Err(invalid(format!("nuclear spin {i} must be at least 1/2")));
        }
        for (qp, qs) in pairs {
            for m in Branch::Pump.ground_f(i).projections() {
                out.push(CouplingProfilePoint {
                    nuclear_spin: i,
                    q_pump: qp,
                    q_stokes: qs,
                    mf: m,
                    gdot: g_dot_closed(i, m, qp, qs, line.jprime())?,
                });
            }
        }
    }
    Ok(out)
}
