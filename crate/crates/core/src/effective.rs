//! Effective two-level description of a far-detuned multilevel Raman system.
//!
//! Pump couplings `Omega_P;i` link `|0>` to intermediate level `i`, Stokes
//! couplings `Omega_S;i` link `|1>` to the same level. For a large common
//! single-photon detuning the intermediate levels can be eliminated, leaving
//!
//! ```text
//! Omega_B = |P . S*| / (2|Delta|)
//! Delta_B = (||S||^2 - ||P||^2) / (4 Delta)
//! ```
//!
//! with `P . S* = sum_i P_i conj(S_i)`. The ground states then oscillate like a
//! two-level atom with coupling `Omega_B` and detuning `Delta_D = Delta_B - delta`.
//!
//! All frequencies are angular (rad/s).

use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::C64;

/// Pump and Stokes couplings to each intermediate level.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingVectors {
    pump: Vec<C64>,
    stokes: Vec<C64>,
}

impl CouplingVectors {
    pub fn new(pump: Vec<C64>, stokes: Vec<C64>) -> Result<Self> {
        if pump.is_empty() || pump.len() != stokes.len() {
            return Err(invalid(format!(
                "coupling vectors need equal non-zero lengths, got {} and {}",
                pump.len(),
                stokes.len()
            )));
        }
        if pump.iter().chain(&stokes).any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(invalid("coupling vectors must be finite"));
        }
        Ok(CouplingVectors { pump, stokes })
    }

    /// Real-valued couplings.
    pub fn from_real(pump: &[f64], stokes: &[f64]) -> Result<Self> {
        Self::new(
            pump.iter().map(|&x| C64::new(x, 0.0)).collect(),
            stokes.iter().map(|&x| C64::new(x, 0.0)).collect(),
        )
    }

    pub fn pump(&self) -> &[C64] {
        &self.pump
    }

    pub fn stokes(&self) -> &[C64] {
        &self.stokes
    }

    /// Number of intermediate levels.
    pub fn len(&self) -> usize {
        self.pump.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `P . S* = sum_i P_i conj(S_i)`
    pub fn dot(&self) -> C64 {
        self.pump
            .iter()
            .zip(&self.stokes)
            .map(|(p, s)| p * s.conj())
            .sum()
    }

    pub fn pump_norm_sq(&self) -> f64 {
        self.pump.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn stokes_norm_sq(&self) -> f64 {
        self.stokes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `max(||P||, ||S||)`
    pub fn max_norm(&self) -> f64 {
        self.pump_norm_sq().max(self.stokes_norm_sq()).sqrt()
    }

    /// `sqrt(||P||^2 + ||S||^2)`
    pub fn combined_norm(&self) -> f64 {
        (self.pump_norm_sq() + self.stokes_norm_sq()).sqrt()
    }

    /// Multiply every coupling by `factor`.
    pub fn scaled(&self, factor: C64) -> Self {
        CouplingVectors {
            pump: self.pump.iter().map(|z| z * factor).collect(),
            stokes: self.stokes.iter().map(|z| z * factor).collect(),
        }
    }
}

/// Single-photon detuning `Delta`, two-photon detuning `delta`, and optional
/// per-level detunings `Delta_2 .. Delta_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct DetuningSet {
    single_photon: f64,
    two_photon: f64,
    per_level: Option<Vec<f64>>,
}

impl DetuningSet {
    pub fn new(single_photon: f64, two_photon: f64) -> Result<Self> {
        if single_photon == 0.0 || !single_photon.is_finite() {
            return Err(invalid(format!(
                "single-photon detuning must be finite and non-zero, got {single_photon}"
            )));
        }
        if !two_photon.is_finite() {
            return Err(invalid("two-photon detuning must be finite"));
        }
        Ok(DetuningSet {
            single_photon,
            two_photon,
            per_level: None,
        })
    }

    /// Attach per-level detunings; each must share the sign of `Delta`.
    pub fn with_per_level(mut self, per_level: Vec<f64>) -> Result<Self> {
        if per_level
            .iter()
            .any(|&d| !d.is_finite() || d == 0.0 || d.signum() != self.single_photon.signum())
        {
            return Err(invalid(
                "per-level detunings must be finite and share the sign of the common detuning",
            ));
        }
        self.per_level = Some(per_level);
        Ok(self)
    }

    pub fn single_photon(&self) -> f64 {
        self.single_photon
    }

    pub fn two_photon(&self) -> f64 {
        self.two_photon
    }

    pub fn per_level(&self) -> Option<&[f64]> {
        self.per_level.as_deref()
    }

    /// Detuning of intermediate level `i`, falling back to the common value.
    pub fn level(&self, i: usize) -> f64 {
        self.per_level
            .as_ref()
            .and_then(|v| v.get(i).copied())
            .unwrap_or(self.single_photon)
    }

    pub fn with_two_photon(&self, two_photon: f64) -> Self {
        DetuningSet {
            two_photon,
            ..self.clone()
        }
    }
}

/// Effective two-level parameters and the dressing angles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveTwoLevel {
    pub omega_b: f64,
    pub delta_b: f64,
    pub omega_tilde_b: f64,
    pub theta: f64,
    pub theta2: f64,
    pub delta_d: f64,
    pub omega_tilde_d: f64,
    /// Phase of the effective coupling, `-arg(P . S* sign(Delta))`.
    pub phi: f64,
}

impl EffectiveTwoLevel {
    /// Build from the coupling, lightshift, two-photon detuning and coupling phase.
    pub fn from_parts(omega_b: f64, delta_b: f64, delta: f64, phi: f64) -> Result<Self> {
        if !(omega_b >= 0.0 && omega_b.is_finite()) {
            return Err(invalid(format!("Omega_B = {omega_b} must be finite and non-negative")));
        }
        if !delta_b.is_finite() || !delta.is_finite() || !phi.is_finite() {
            return Err(invalid("effective parameters must be finite"));
        }
        let omega_tilde_b = omega_b.hypot(delta_b);
        let theta = (delta_b - omega_tilde_b).atan2(omega_b);
        let (s2, c2) = (2.0 * theta).sin_cos();
        let theta2 = 0.5 * (delta * s2).atan2(omega_tilde_b - delta * c2);
        let delta_d = delta_b - delta;
        Ok(EffectiveTwoLevel {
            omega_b,
            delta_b,
            omega_tilde_b,
            theta,
            theta2,
            delta_d,
            omega_tilde_d: omega_b.hypot(delta_d),
            phi,
        })
    }

    /// Two-photon detuning these parameters were built for.
    pub fn two_photon(&self) -> f64 {
        self.delta_b - self.delta_d
    }
}

/// Ground-state amplitudes `(A0, A1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmplitudePair {
    pub a0: C64,
    pub a1: C64,
}

impl AmplitudePair {
    pub fn new(a0: C64, a1: C64) -> Self {
        AmplitudePair { a0, a1 }
    }

    /// Normalized pair; rejects the zero vector.
    pub fn normalized(a0: C64, a1: C64) -> Result<Self> {
        let n = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(invalid("cannot normalize a zero amplitude pair"));
        }
        Ok(AmplitudePair::new(a0 / n, a1 / n))
    }

    pub fn ground() -> Self {
        AmplitudePair::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    pub fn upper() -> Self {
        AmplitudePair::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0))
    }

    pub fn populations(&self) -> (f64, f64) {
        (self.a0.norm_sqr(), self.a1.norm_sqr())
    }

    pub fn norm_sq(&self) -> f64 {
        self.a0.norm_sqr() + self.a1.norm_sqr()
    }
}

fn check_detuning(d: &DetuningSet) -> Result<f64> {
    let delta = d.single_photon();
    if delta == 0.0 {
        return Err(invalid("single-photon detuning must be non-zero"));
    }
    Ok(delta)
}

/// `Omega_B = |P . S*| / (2|Delta|)`
pub fn effective_rabi(c: &CouplingVectors, d: &DetuningSet) -> Result<f64> {
    let delta = check_detuning(d)?;
    Ok(c.dot().norm() / (2.0 * delta.abs()))
}

/// `Delta_B = (||S||^2 - ||P||^2) / (4 Delta)`
pub fn lightshift(c: &CouplingVectors, d: &DetuningSet) -> Result<f64> {
    let delta = check_detuning(d)?;
    Ok((c.stokes_norm_sq() - c.pump_norm_sq()) / (4.0 * delta))
}

/// Phase of the effective ground-state coupling.
///
/// Zero when `P . S*` vanishes. A negative `Delta` flips the sign of the
/// eliminated coupling, which is absorbed here as a shift by `pi`.
pub fn coupling_phase(c: &CouplingVectors, d: &DetuningSet) -> Result<f64> {
    let delta = check_detuning(d)?;
    let z = c.dot() * delta.signum();
    Ok(if z.norm() == 0.0 { 0.0 } else { -z.arg() })
}

/// All effective two-level quantities at the two-photon detuning in `d`.
pub fn mixing_angles(c: &CouplingVectors, d: &DetuningSet) -> Result<EffectiveTwoLevel> {
    EffectiveTwoLevel::from_parts(
        effective_rabi(c, d)?,
        lightshift(c, d)?,
        d.two_photon(),
        coupling_phase(c, d)?,
    )
}

/// Peak-to-peak transfer amplitude `m = Omega_B / sqrt(Omega_B^2 + Delta_D^2)`.
pub fn envelope(eff: &EffectiveTwoLevel) -> f64 {
    if eff.omega_tilde_d == 0.0 {
        0.0
    } else {
        eff.omega_b / eff.omega_tilde_d
    }
}

/// Bare-state amplitudes at time `t` from their values at `t = 0`.
///
/// The cross terms carry `exp(+-i phi)`; for `phi = 0` this is the familiar
/// detuned Rabi solution with `A1` multiplied by `exp(-i delta t)`.
pub fn evolve_amplitudes(
    initial: AmplitudePair,
    eff: &EffectiveTwoLevel,
    delta: f64,
    t: f64,
) -> AmplitudePair {
    let half = 0.5 * eff.omega_tilde_d * t;
    let (s, c) = half.sin_cos();
    // sin(x)/Omega~ stays finite as Omega~ -> 0
    let s_over = if eff.omega_tilde_d == 0.0 {
        0.5 * t
    } else {
        s / eff.omega_tilde_d
    };
    let detuned = eff.delta_d * s_over;
    let coupled = eff.omega_b * s_over;
    let i = C64::i();
    let phase = C64::from_polar(1.0, eff.phi);
    let a0 = initial.a0 * (c - i * detuned) + initial.a1 * i * coupled * phase;
    let a1 = (initial.a1 * (c + i * detuned) + initial.a0 * i * coupled * phase.conj())
        * C64::from_polar(1.0, -delta * t);
    AmplitudePair::new(a0, a1)
}

/// Doubly dressed transform at time `t`: `(D0, D1) = M(t) (A0, A1)`.
fn dressed_transform(alpha: f64, delta: f64, t: f64, v: [C64; 2]) -> [C64; 2] {
    let (s, c) = alpha.sin_cos();
    let e = C64::from_polar(1.0, delta * t);
    [c * v[0] + e * s * v[1], -s * v[0] + e * c * v[1]]
}

fn dressed_inverse(alpha: f64, delta: f64, t: f64, v: [C64; 2]) -> [C64; 2] {
    let (s, c) = alpha.sin_cos();
    let e = C64::from_polar(1.0, -delta * t);
    [c * v[0] - s * v[1], e * (s * v[0] + c * v[1])]
}

/// Evolution by transforming to the doubly dressed basis, applying the pure
/// phase `exp(i Omega~_D t)` to `D1`, and transforming back.
///
/// Agrees with [`evolve_amplitudes`] up to the global phase `exp(i Omega~_D t / 2)`.
pub fn evolve_via_dressed_chain(
    initial: AmplitudePair,
    eff: &EffectiveTwoLevel,
    delta: f64,
    t: f64,
) -> AmplitudePair {
    let alpha = eff.theta + eff.theta2;
    // gauge the coupling phase onto A1 so the real-coupling chain applies
    let gauge = C64::from_polar(1.0, eff.phi);
    let d = dressed_transform(alpha, delta, 0.0, [initial.a0, initial.a1 * gauge]);
    let d = [d[0], d[1] * C64::from_polar(1.0, eff.omega_tilde_d * t)];
    let a = dressed_inverse(alpha, delta, t, d);
    AmplitudePair::new(a[0], a[1] * gauge.conj())
}

/// One regime criterion: `margin = scale / ||Omega||_max`, passing above the threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Criterion {
    pub margin: f64,
    pub passed: bool,
}

/// Validity thresholds for the far-detuned Raman description.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegimeThresholds {
    /// Minimum ratio for every "much greater than" comparison.
    pub ratio: f64,
    /// Maximum allowed `(max - min)` of the per-level detunings relative to `|Delta|`.
    pub spread: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        RegimeThresholds {
            ratio: 10.0,
            spread: 0.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegimeReport {
    /// `|Delta| >> ||Omega||`
    pub detuning: Criterion,
    /// `|Delta +- omega10| >> ||Omega||`: no field near the other single-photon resonance.
    pub single_photon: Criterion,
    /// `omega10 >> ||Omega||`: the two ground states are resolved.
    pub resolution: Criterion,
    /// Spread of per-level detunings relative to `|Delta|`, when given.
    pub level_spread: Option<Criterion>,
}

impl RegimeReport {
    pub fn all_passed(&self) -> bool {
        self.detuning.passed
            && self.single_photon.passed
            && self.resolution.passed
            && self.level_spread.is_none_or(|c| c.passed)
    }

    /// Human-readable descriptions of the failing criteria.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.detuning.passed {
            out.push(format!(
                "single-photon detuning is only {:.3} times the coupling",
                self.detuning.margin
            ));
        }
        if !self.single_photon.passed {
            out.push(format!(
                "a field is within {:.3} couplings of a single-photon resonance from the other ground state",
                self.single_photon.margin
            ));
        }
        if !self.resolution.passed {
            out.push(format!(
                "ground splitting is only {:.3} times the coupling",
                self.resolution.margin
            ));
        }
        if let Some(c) = self.level_spread.filter(|c| !c.passed) {
            out.push(format!(
                "intermediate detunings spread by {:.3} of the common detuning",
                c.margin
            ));
        }
        out
    }
}

/// Check the separations that justify eliminating the intermediate levels.
pub fn regime_check(
    c: &CouplingVectors,
    d: &DetuningSet,
    omega10: f64,
    thresholds: &RegimeThresholds,
) -> RegimeReport {
    let scale = c.max_norm();
    let ratio = |x: f64| if scale == 0.0 { f64::INFINITY } else { x / scale };
    let judge = |margin: f64| Criterion {
        margin,
        passed: margin >= thresholds.ratio,
    };
    let big = d.single_photon();
    let level_spread = d.per_level().filter(|v| !v.is_empty()).map(|v| {
        let (lo, hi) = v
            .iter()
            .fold((big, big), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        let margin = (hi - lo) / big.abs();
        Criterion {
            margin,
            passed: margin <= thresholds.spread,
        }
    });
    RegimeReport {
        detuning: judge(ratio(big.abs())),
        single_photon: judge(ratio((big - omega10).abs().min((big + omega10).abs()))),
        resolution: judge(ratio(omega10.max(0.0))),
        level_spread,
    }
}

/// Time for half an effective Rabi cycle at the current detuning.
pub fn pi_pulse_time(eff: &EffectiveTwoLevel) -> Option<f64> {
    (eff.omega_tilde_d > 0.0).then(|| PI / eff.omega_tilde_d)
}
