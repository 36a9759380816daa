//! Geometric dipole factors for `J = 1/2 -> J'` hyperfine transitions.
//!
//! A dipole matrix element between hyperfine Zeeman sublevels splits into a
//! reduced element `<J||mu||J'>` and a purely geometric factor
//!
//! ```text
//! G = (-1)^(2F'+J+I+mF) sqrt((2F'+1)(2F+1)(2J+1))
//!     * (F' 1 F; mF' -q -mF) * {J J' 1; F' F I}
//! ```
//!
//! for absorption of polarization `q` from `|F mF>` to `|F' mF'=mF+q>`. The
//! `-q` in the 3-j symbol is what makes the projection sum vanish for that
//! pairing. Only `|G_P . G_S|` and `||G||^2` enter observables, so the overall
//! phase convention is internal.
//!
//! Closed forms for the summed quantities over the excited manifold are
//! provided both as `f64` and as exact integer fractions.

use std::fmt;

use crate::constants::{EPSILON_0, PLANCK};
use crate::error::{invalid, Error, Result};
use crate::wigner::{triangle_ok, wigner_3j, wigner_6j, SixJArgs, ThreeJArgs};
use crate::HalfInt;

/// Hyperfine Zeeman sublevel `|I, J, F, mF>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AngularMomentumState {
    pub nuclear_spin: HalfInt,
    pub j: HalfInt,
    pub f: HalfInt,
    pub mf: HalfInt,
}

impl AngularMomentumState {
    pub fn new(nuclear_spin: HalfInt, j: HalfInt, f: HalfInt, mf: HalfInt) -> Result<Self> {
        if !triangle_ok(nuclear_spin, j, f) {
            return Err(invalid(format!(
                "F = {f} cannot couple I = {nuclear_spin} and J = {j}"
            )));
        }
        if mf.abs() > f || !mf.same_parity(f) {
            return Err(invalid(format!("mF = {mf} is not a projection of F = {f}")));
        }
        Ok(AngularMomentumState {
            nuclear_spin,
            j,
            f,
            mf,
        })
    }
}

/// Spherical polarization component `q` of the driving field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polarization(i8);

impl Polarization {
    pub const SIGMA_MINUS: Polarization = Polarization(-1);
    pub const PI: Polarization = Polarization(0);
    pub const SIGMA_PLUS: Polarization = Polarization(1);

    pub fn new(q: i32) -> Result<Self> {
        match q {
            -1..=1 => Ok(Polarization(q as i8)),
            _ => Err(invalid(format!("polarization q = {q} is not in {{-1, 0, +1}}"))),
        }
    }

    pub fn q(self) -> i32 {
        i32::from(self.0)
    }

    pub fn as_halfint(self) -> HalfInt {
        HalfInt::integer(self.q())
    }

    pub fn all() -> [Polarization; 3] {
        [Self::SIGMA_MINUS, Self::PI, Self::SIGMA_PLUS]
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Which ground hyperfine level a vector couples from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `F = I - 1/2`
    Pump,
    /// `F = I + 1/2`
    Stokes,
}

impl Branch {
    pub fn ground_f(self, nuclear_spin: HalfInt) -> HalfInt {
        match self {
            Branch::Pump => nuclear_spin - HalfInt::HALF,
            Branch::Stokes => nuclear_spin + HalfInt::HALF,
        }
    }

    fn of(state: &AngularMomentumState) -> Result<Branch> {
        if state.f == Branch::Pump.ground_f(state.nuclear_spin) {
            Ok(Branch::Pump)
        } else if state.f == Branch::Stokes.ground_f(state.nuclear_spin) {
            Ok(Branch::Stokes)
        } else {
            Err(invalid(format!("F = {} is not I +/- 1/2", state.f)))
        }
    }
}

/// Geometric factors over the excited hyperfine manifold, ascending in `F'`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeometricVector {
    pub branch: Branch,
    pub components: Vec<(HalfInt, f64)>,
}

impl GeometricVector {
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.components.iter().map(|&(_, g)| g)
    }

    pub fn norm_sq(&self) -> f64 {
        self.values().map(|g| g * g).sum()
    }

    /// `sum_F' G_a(F') G_b(F')`; both vectors must span the same manifold.
    pub fn dot(&self, other: &GeometricVector) -> Result<f64> {
        if self.components.len() != other.components.len()
            || self
                .components
                .iter()
                .zip(&other.components)
                .any(|(a, b)| a.0 != b.0)
        {
            return Err(invalid("geometric vectors span different F' manifolds"));
        }
        Ok(self.values().zip(other.values()).map(|(a, b)| a * b).sum())
    }
}

/// Reduced dipole matrix element `<J||mu||J'>` in C m.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct ReducedDipole(f64);

impl ReducedDipole {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(ReducedDipole(value))
        } else {
            Err(invalid(format!("reduced dipole {value} must be positive")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

fn minus_one_pow(twice_exponent: i32) -> Result<f64> {
    if twice_exponent % 2 != 0 {
        return Err(invalid("phase exponent is not an integer"));
    }
    Ok(if (twice_exponent / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 })
}

/// Geometric factor for absorbing polarization `q` on `ground -> excited`.
///
/// `excited` may carry `|mF'| > F'`; such components vanish. Its fields are
/// public so out-of-range projections can be expressed directly.
pub fn geometric_factor(
    ground: &AngularMomentumState,
    excited: &AngularMomentumState,
    q: Polarization,
) -> Result<f64> {
    if ground.j != HalfInt::HALF {
        return Err(invalid(format!("ground J = {} must be 1/2", ground.j)));
    }
    if excited.nuclear_spin != ground.nuclear_spin {
        return Err(invalid("ground and excited states have different nuclear spin"));
    }
    if excited.mf != ground.mf + q.as_halfint() {
        return Err(Error::Selection(format!(
            "excited mF' = {} but ground mF + q = {}",
            excited.mf,
            ground.mf + q.as_halfint()
        )));
    }
    let (i, j, f, mf) = (ground.nuclear_spin, ground.j, ground.f, ground.mf);
    let (jp, fp, mfp) = (excited.j, excited.f, excited.mf);

    let three_j = wigner_3j(ThreeJArgs::new(
        [fp, HalfInt::ONE, f],
        [mfp, -q.as_halfint(), -mf],
    ))?;
    if three_j == 0.0 {
        return Ok(0.0);
    }
    let six_j = wigner_6j(SixJArgs::new([j, jp, HalfInt::ONE, fp, f, i]))?;
    let phase = minus_one_pow(2 * fp.twice() + j.twice() + i.twice() + mf.twice())?;
    let degeneracy =
        f64::from(fp.multiplicity()) * f64::from(f.multiplicity()) * f64::from(j.multiplicity());
    Ok(phase * degeneracy.sqrt() * three_j * six_j)
}

/// Geometric factors from `ground` into every `F'` of the `J'` manifold.
pub fn coupling_vector(
    ground: &AngularMomentumState,
    q: Polarization,
    jprime: HalfInt,
) -> Result<GeometricVector> {
    let branch = Branch::of(ground)?;
    let i = ground.nuclear_spin;
    let mfp = ground.mf + q.as_halfint();
    let components = HalfInt::range_inclusive((jprime - i).abs(), jprime + i)
        .map(|fp| {
            let excited = AngularMomentumState {
                nuclear_spin: i,
                j: jprime,
                f: fp,
                mf: mfp,
            };
            geometric_factor(ground, &excited, q).map(|g| (fp, g))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GeometricVector { branch, components })
}

/// Line-strength asymmetry factor: `-2` for `J' = 1/2` (D1), `1` for `J' = 3/2` (D2).
pub fn line_factor(jprime: HalfInt) -> Result<i64> {
    match jprime.twice() {
        1 => Ok(-2),
        3 => Ok(1),
        _ => Err(invalid(format!("J' = {jprime} is neither 1/2 nor 3/2"))),
    }
}

/// Exact `num/den`, kept unreduced over the natural denominator `3(2I+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fraction {
    pub num: i64,
    pub den: i64,
}

impl Fraction {
    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Exact `sqrt(radicand)/den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SqrtFraction {
    pub radicand: i64,
    pub den: i64,
}

impl SqrtFraction {
    pub fn to_f64(self) -> f64 {
        (self.radicand as f64).sqrt() / self.den as f64
    }
}

impl fmt::Display for SqrtFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sqrt({})/{}", self.radicand, self.den)
    }
}

fn check_projection(i: HalfInt, branch: Branch, mf: HalfInt) -> Result<()> {
    let f = branch.ground_f(i);
    if f.twice() < 0 || mf.abs() > f || !mf.same_parity(f) {
        return Err(invalid(format!("mF = {mf} is not a projection of F = {f}")));
    }
    Ok(())
}

/// `||G||^2 = (1/3)(1 +/- A(J') q mF / (2I+1))`, `+` for the Stokes branch.
pub fn g_norm_sq_exact(
    nuclear_spin: HalfInt,
    branch: Branch,
    mf: HalfInt,
    q: Polarization,
    jprime: HalfInt,
) -> Result<Fraction> {
    let a = line_factor(jprime)?;
    check_projection(nuclear_spin, branch, mf)?;
    let dim = i64::from(nuclear_spin.multiplicity());
    let sign = match branch {
        Branch::Stokes => 1,
        Branch::Pump => -1,
    };
    // doubled numerator and denominator keep half-integer mF exact
    let num2 = 2 * dim + sign * a * i64::from(q.q()) * i64::from(mf.twice());
    let den2 = 6 * dim;
    Ok(if num2 % 2 == 0 {
        Fraction {
            num: num2 / 2,
            den: den2 / 2,
        }
    } else {
        Fraction { num: num2, den: den2 }
    })
}

pub fn g_norm_sq_closed(
    nuclear_spin: HalfInt,
    branch: Branch,
    mf: HalfInt,
    q: Polarization,
    jprime: HalfInt,
) -> Result<f64> {
    g_norm_sq_exact(nuclear_spin, branch, mf, q, jprime).map(Fraction::to_f64)
}

/// `n(n+1)/2`
pub fn triangular(n: u64) -> u64 {
    n * (n + 1) / 2
}

const SUPPORTED_PAIRS: &str = "(qP,qS) in {(1,1), (-1,-1), (0,1), (0,-1)}";

/// `|G_P . G_S|` for the pump-branch sublevel `mF` as an exact square root.
///
/// `(1,1)`: `|A|/(3(2I+1)) sqrt((I+1/2)^2 - mF^2)`;
/// `(0,1)`: `|A|/(3(2I+1)) sqrt(T(I+1/2-mF))`. The `(-1,-1)` and `(0,-1)`
/// cases follow by `mF -> -mF`.
pub fn g_dot_exact(
    nuclear_spin: HalfInt,
    mf: HalfInt,
    q_pump: Polarization,
    q_stokes: Polarization,
    jprime: HalfInt,
) -> Result<SqrtFraction> {
    let a = line_factor(jprime)?;
    check_projection(nuclear_spin, Branch::Pump, mf)?;
    let dim = i64::from(nuclear_spin.multiplicity());
    let a_sq = a * a;
    let den = 3 * dim;
    match (q_pump.q(), q_stokes.q()) {
        (1, 1) | (-1, -1) => {
            // (I+1/2)^2 - mF^2 = ((2I+1)^2 - (2mF)^2) / 4
            let r4 = a_sq * (dim * dim - i64::from(mf.twice()).pow(2));
            Ok(if r4 % 4 == 0 {
                SqrtFraction { radicand: r4 / 4, den }
            } else {
                SqrtFraction {
                    radicand: r4,
                    den: 2 * den,
                }
            })
        }
        (0, 1) | (0, -1) => {
            let m = if q_stokes.q() == 1 { mf } else { -mf };
            let n2 = dim - i64::from(m.twice()); // 2(I + 1/2 - mF)
            if n2 % 2 != 0 {
                return Err(invalid(format!(
                    "closed form for (0,{}) needs integer I + 1/2 - mF",
                    q_stokes
                )));
            }
            Ok(SqrtFraction {
                radicand: a_sq * triangular((n2 / 2) as u64) as i64,
                den,
            })
        }
        (qp, qs) => Err(invalid(format!(
            "no closed form for (qP,qS) = ({qp},{qs}); supported: {SUPPORTED_PAIRS}"
        ))),
    }
}

pub fn g_dot_closed(
    nuclear_spin: HalfInt,
    mf: HalfInt,
    q_pump: Polarization,
    q_stokes: Polarization,
    jprime: HalfInt,
) -> Result<f64> {
    g_dot_exact(nuclear_spin, mf, q_pump, q_stokes, jprime).map(SqrtFraction::to_f64)
}

/// Invert `Gamma = 16 pi^3 / (3 eps0 h lambda^3) (2J+1)/(2J'+1) |<J||mu||J'>|^2`.
pub fn reduced_dipole_from_linewidth(
    gamma: f64,
    wavelength: f64,
    j: HalfInt,
    jprime: HalfInt,
) -> Result<ReducedDipole> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(invalid(format!("linewidth {gamma} must be positive")));
    }
    if !(wavelength > 0.0 && wavelength.is_finite()) {
        return Err(invalid(format!("wavelength {wavelength} must be positive")));
    }
    if j.twice() < 0 || jprime.twice() < 0 {
        return Err(invalid("negative angular momentum"));
    }
    let pi3 = std::f64::consts::PI.powi(3);
    let value = (3.0 * EPSILON_0 * PLANCK * wavelength.powi(3) * gamma
        * f64::from(jprime.multiplicity())
        / (16.0 * pi3 * f64::from(j.multiplicity())))
    .sqrt();
    ReducedDipole::new(value)
}
