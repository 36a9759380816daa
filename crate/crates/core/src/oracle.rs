//! Brute-force integration of the Schrodinger equation `i dpsi/dt = H(t) psi`.
//!
//! A fixed-step fourth-order Runge-Kutta integrator drives any [`Hamiltonian`].
//! Two structured Hamiltonians are provided with sparse products: the
//! multilevel interaction-picture [`RamanHamiltonian`] and the three-level
//! lab-frame [`LabFrameSpec`]. Dense time-dependent matrices work through
//! [`TimeDependent`].
//!
//! Results are compared against the effective two-level solution with
//! [`compare_with_analytic`].

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use rustfft::FftPlanner;

use crate::effective::{
    envelope, evolve_amplitudes, mixing_angles, AmplitudePair, CouplingVectors, DetuningSet,
    EffectiveTwoLevel,
};
use crate::eigen::HamiltonianMatrix;
use crate::error::{invalid, Error, Result};
use crate::parallel::{try_map, Execution};
use crate::C64;

/// Largest tolerated `| ||psi|| - 1 |` before integration aborts.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;

/// Steps per period of the fastest frequency required by [`integrate`].
pub const MIN_STEPS_PER_PERIOD: f64 = 20.0;

/// A Hamiltonian evaluated at a fixed time.
pub trait FrozenHamiltonian {
    /// `out = H psi`
    fn apply(&self, psi: &[C64], out: &mut [C64]);
}

/// A possibly time-dependent Hamiltonian.
pub trait Hamiltonian: Sync {
    type Frozen<'a>: FrozenHamiltonian
    where
        Self: 'a;

    fn dim(&self) -> usize;

    fn freeze(&self, t: f64) -> Self::Frozen<'_>;

    /// Upper bound in rad/s on the fastest phase rotation over `[t0, t1]`:
    /// spectral radius plus the fastest explicit drive frequency.
    fn frequency_bound(&self, t0: f64, t1: f64) -> f64;
}

fn gershgorin(h: &HamiltonianMatrix) -> f64 {
    let n = h.dim();
    (0..n)
        .map(|i| (0..n).map(|j| h.get(i, j).norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

impl FrozenHamiltonian for HamiltonianMatrix {
    #[inline]
    fn apply(&self, psi: &[C64], out: &mut [C64]) {
        let n = self.dim();
        let e = self.entries();
        for (i, o) in out.iter_mut().enumerate() {
            *o = e[i * n..(i + 1) * n].iter().zip(psi).map(|(a, b)| a * b).sum();
        }
    }
}

impl FrozenHamiltonian for &HamiltonianMatrix {
    #[inline]
    fn apply(&self, psi: &[C64], out: &mut [C64]) {
        FrozenHamiltonian::apply(*self, psi, out)
    }
}

/// A constant Hamiltonian.
impl Hamiltonian for HamiltonianMatrix {
    type Frozen<'a> = &'a HamiltonianMatrix;

    fn dim(&self) -> usize {
        HamiltonianMatrix::dim(self)
    }

    #[inline]
    fn freeze(&self, _t: f64) -> &HamiltonianMatrix {
        self
    }

    fn frequency_bound(&self, _t0: f64, _t1: f64) -> f64 {
        gershgorin(self)
    }
}

/// Dense Hamiltonian built by a closure at every stage time.
///
/// The frequency bound samples the closure; `drive` adds any explicit
/// oscillation frequency the samples cannot reveal.
pub struct TimeDependent<F> {
    dim: usize,
    f: F,
    drive: f64,
}

impl<F: Fn(f64) -> HamiltonianMatrix + Sync> TimeDependent<F> {
    pub fn new(dim: usize, drive: f64, f: F) -> Self {
        TimeDependent { dim, f, drive }
    }
}

const BOUND_SAMPLES: usize = 64;

impl<F: Fn(f64) -> HamiltonianMatrix + Sync> Hamiltonian for TimeDependent<F> {
    type Frozen<'a>
        = HamiltonianMatrix
    where
        F: 'a;

    fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn freeze(&self, t: f64) -> HamiltonianMatrix {
        (self.f)(t)
    }

    fn frequency_bound(&self, t0: f64, t1: f64) -> f64 {
        let radius = (0..=BOUND_SAMPLES)
            .map(|k| t0 + (t1 - t0) * k as f64 / BOUND_SAMPLES as f64)
            .map(|t| gershgorin(&(self.f)(t)))
            .fold(0.0, f64::max);
        radius + self.drive.abs()
    }
}

/// Interaction-picture Hamiltonian of `|0>`, `|1>` coupled through `N`
/// intermediate levels, with `S_i/2 exp(-i delta t)` in the Stokes row.
#[derive(Clone, Debug, PartialEq)]
pub struct RamanHamiltonian {
    pump_half: Vec<C64>,
    stokes_half: Vec<C64>,
    detunings: Vec<f64>,
    delta: f64,
}

impl RamanHamiltonian {
    pub fn new(c: &CouplingVectors, d: &DetuningSet) -> Self {
        RamanHamiltonian {
            pump_half: c.pump().iter().map(|p| 0.5 * p).collect(),
            stokes_half: c.stokes().iter().map(|s| 0.5 * s).collect(),
            detunings: (0..c.len()).map(|i| d.level(i)).collect(),
            delta: d.two_photon(),
        }
    }

    pub fn levels(&self) -> usize {
        self.pump_half.len()
    }

    /// Dense matrix at time `t`.
    pub fn matrix(&self, t: f64) -> HamiltonianMatrix {
        let mut h = HamiltonianMatrix::zeros(self.dim());
        let beat = C64::from_polar(1.0, -self.delta * t);
        for i in 0..self.levels() {
            h.set_hermitian(0, i + 2, self.pump_half[i]);
            h.set_hermitian(1, i + 2, self.stokes_half[i] * beat);
            h.set_hermitian(i + 2, i + 2, C64::new(-self.detunings[i], 0.0));
        }
        h
    }
}

pub struct FrozenRaman<'a> {
    h: &'a RamanHamiltonian,
    beat: C64,
}

impl FrozenHamiltonian for FrozenRaman<'_> {
    #[inline]
    fn apply(&self, psi: &[C64], out: &mut [C64]) {
        let h = self.h;
        let (ground, upper) = psi.split_at(2);
        let (g0, g1) = (ground[0], ground[1] * self.beat.conj());
        let (out_ground, out_upper) = out.split_at_mut(2);
        let mut o0 = C64::new(0.0, 0.0);
        let mut o1 = C64::new(0.0, 0.0);
        for ((((o, a), p), s), d) in out_upper
            .iter_mut()
            .zip(upper)
            .zip(&h.pump_half)
            .zip(&h.stokes_half)
            .zip(&h.detunings)
        {
            o0 += p * a;
            o1 += s * a;
            *o = p.conj() * g0 + s.conj() * g1 - d * a;
        }
        out_ground[0] = o0;
        out_ground[1] = o1 * self.beat;
    }
}

impl Hamiltonian for RamanHamiltonian {
    type Frozen<'a> = FrozenRaman<'a>;

    fn dim(&self) -> usize {
        self.pump_half.len() + 2
    }

    #[inline]
    fn freeze(&self, t: f64) -> FrozenRaman<'_> {
        FrozenRaman {
            h: self,
            beat: C64::from_polar(1.0, -self.delta * t),
        }
    }

    fn frequency_bound(&self, _t0: f64, _t1: f64) -> f64 {
        let row0: f64 = self.pump_half.iter().map(|z| z.norm()).sum();
        let row1: f64 = self.stokes_half.iter().map(|z| z.norm()).sum();
        let rows = (0..self.levels())
            .map(|i| self.detunings[i].abs() + self.pump_half[i].norm() + self.stokes_half[i].norm())
            .fold(row0.max(row1), f64::max);
        rows + self.delta.abs()
    }
}

/// Three-level lab-frame system with real cosine drives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LabFrameSpec {
    /// Bohr frequencies of `|0>`, `|1>`, `|2>`.
    pub omega: [f64; 3],
    pub pump_frequency: f64,
    pub stokes_frequency: f64,
    pub pump_coupling: f64,
    pub stokes_coupling: f64,
}

impl LabFrameSpec {
    /// Field frequencies from the detunings:
    /// `omega_P = omega_2 - omega_0 + Delta`, `omega_S = omega_2 - omega_1 + Delta - delta`.
    pub fn from_detunings(
        omega: [f64; 3],
        single_photon: f64,
        two_photon: f64,
        pump_coupling: f64,
        stokes_coupling: f64,
    ) -> Self {
        LabFrameSpec {
            omega,
            pump_frequency: omega[2] - omega[0] + single_photon,
            stokes_frequency: omega[2] - omega[1] + single_photon - two_photon,
            pump_coupling,
            stokes_coupling,
        }
    }

    /// Interaction-picture parameters `(couplings, detunings)` after the rotating-wave approximation.
    pub fn rotating_frame(&self) -> Result<(CouplingVectors, DetuningSet)> {
        let c = CouplingVectors::from_real(&[self.pump_coupling], &[self.stokes_coupling])?;
        let single = self.pump_frequency - (self.omega[2] - self.omega[0]);
        let two = self.pump_frequency - self.stokes_frequency - (self.omega[1] - self.omega[0]);
        Ok((c, DetuningSet::new(single, two)?))
    }
}

/// Dense lab-frame matrix at time `t`.
pub fn build_lab_hamiltonian(spec: &LabFrameSpec, t: f64) -> HamiltonianMatrix {
    let mut h = HamiltonianMatrix::zeros(3);
    for (i, w) in spec.omega.iter().enumerate() {
        h.set_hermitian(i, i, C64::new(*w, 0.0));
    }
    h.set_hermitian(0, 2, C64::new(spec.pump_coupling * (spec.pump_frequency * t).cos(), 0.0));
    h.set_hermitian(1, 2, C64::new(spec.stokes_coupling * (spec.stokes_frequency * t).cos(), 0.0));
    h
}

pub struct FrozenLab<'a> {
    spec: &'a LabFrameSpec,
    pump: f64,
    stokes: f64,
}

impl FrozenHamiltonian for FrozenLab<'_> {
    #[inline]
    fn apply(&self, psi: &[C64], out: &mut [C64]) {
        let w = &self.spec.omega;
        out[0] = w[0] * psi[0] + self.pump * psi[2];
        out[1] = w[1] * psi[1] + self.stokes * psi[2];
        out[2] = self.pump * psi[0] + self.stokes * psi[1] + w[2] * psi[2];
    }
}

impl Hamiltonian for LabFrameSpec {
    type Frozen<'a> = FrozenLab<'a>;

    fn dim(&self) -> usize {
        3
    }

    #[inline]
    fn freeze(&self, t: f64) -> FrozenLab<'_> {
        FrozenLab {
            spec: self,
            pump: self.pump_coupling * (self.pump_frequency * t).cos(),
            stokes: self.stokes_coupling * (self.stokes_frequency * t).cos(),
        }
    }

    fn frequency_bound(&self, _t0: f64, _t1: f64) -> f64 {
        let radius = self.omega.iter().fold(0.0f64, |m, w| m.max(w.abs()))
            + self.pump_coupling.abs()
            + self.stokes_coupling.abs();
        radius + self.pump_frequency.abs().max(self.stokes_frequency.abs())
    }
}

/// Largest step accepted by [`integrate`]: `1/(20 f_max)` with `f_max` in Hz.
pub fn max_step<H: Hamiltonian + ?Sized>(h: &H, t_final: f64) -> f64 {
    let w = h.frequency_bound(0.0, t_final);
    if w > 0.0 {
        TAU / (MIN_STEPS_PER_PERIOD * w)
    } else {
        f64::INFINITY
    }
}

/// Step giving a phase advance of `phase` radians at the fastest frequency,
/// capped by [`max_step`] and by `t_final`.
pub fn suggest_dt<H: Hamiltonian + ?Sized>(h: &H, t_final: f64, phase: f64) -> f64 {
    let w = h.frequency_bound(0.0, t_final);
    let dt = if w > 0.0 { phase / w } else { f64::INFINITY };
    dt.min(max_step(h, t_final)).min(t_final.max(f64::MIN_POSITIVE))
}

/// Sampled solution of the Schrodinger equation.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<C64>>,
    /// Integration step actually used.
    pub dt: f64,
    /// Largest `| ||psi|| - 1 |` seen at any sample.
    pub max_norm_drift: f64,
}

impl Trajectory {
    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, Vec::len)
    }

    /// `populations()[k][i] = |psi_i(t_k)|^2`
    pub fn populations(&self) -> Vec<Vec<f64>> {
        self.states
            .iter()
            .map(|s| s.iter().map(|z| z.norm_sqr()).collect())
            .collect()
    }

    pub fn population_series(&self, level: usize) -> Vec<f64> {
        self.states.iter().map(|s| s[level].norm_sqr()).collect()
    }

    pub fn final_state(&self) -> &[C64] {
        self.states.last().map_or(&[], Vec::as_slice)
    }

    /// CSV with a header row: `t_s`, `p<i>` per level, then `re<i>,im<i>` when requested.
    pub fn to_csv(&self, amplitudes: bool) -> String {
        let n = self.dim();
        let mut out = String::from("t_s");
        for i in 0..n {
            let _ = write!(out, ",p{i}");
        }
        if amplitudes {
            for i in 0..n {
                let _ = write!(out, ",re{i},im{i}");
            }
        }
        out.push('\n');
        for (t, s) in self.times.iter().zip(&self.states) {
            let _ = write!(out, "{t}");
            for z in s {
                let _ = write!(out, ",{}", z.norm_sqr());
            }
            if amplitudes {
                for z in s {
                    let _ = write!(out, ",{},{}", z.re, z.im);
                }
            }
            out.push('\n');
        }
        out
    }
}

#[inline(always)]
fn times_minus_i(z: C64) -> C64 {
    C64::new(z.im, -z.re)
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Fixed-step RK4 from `psi0` at `t = 0` to `t_final`, storing every
/// `sample_every`-th step plus the endpoints.
///
/// `dt` is shrunk so a whole number of steps lands on `t_final`. Steps larger
/// than [`max_step`] are rejected, and integration aborts once the norm drifts
/// by more than [`NORM_DRIFT_LIMIT`].
pub fn integrate<H: Hamiltonian + ?Sized>(
    h: &H,
    psi0: &[C64],
    t_final: f64,
    dt: f64,
    sample_every: usize,
) -> Result<Trajectory> {
    let n = h.dim();
    if psi0.len() != n {
        return Err(invalid(format!(
            "initial state has {} components, Hamiltonian has {n}",
            psi0.len()
        )));
    }
    if (norm(psi0) - 1.0).abs() > 1e-9 {
        return Err(invalid(format!("initial state has norm {}", norm(psi0))));
    }
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(invalid(format!("final time {t_final} must be finite and non-negative")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid(format!("step {dt} must be positive")));
    }
    let sample_every = sample_every.max(1);
    let steps = (t_final / dt).ceil() as usize;
    let dt = if steps == 0 { dt } else { t_final / steps as f64 };
    let limit = max_step(h, t_final);
    if dt > limit * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge {
            dt,
            rate: h.frequency_bound(0.0, t_final),
            max_dt: limit,
        });
    }

    let mut psi = psi0.to_vec();
    let mut times = vec![0.0];
    let mut states = vec![psi.clone()];
    let mut max_norm_drift = (norm(&psi) - 1.0).abs();
    let zero = C64::new(0.0, 0.0);
    let (mut k, mut acc, mut tmp) = (vec![zero; n], vec![zero; n], vec![zero; n]);
    let half = 0.5 * dt;
    let sixth = dt / 6.0;

    let mut h_start = h.freeze(0.0);
    for step in 0..steps {
        let t = step as f64 * dt;
        let h_mid = h.freeze(t + half);
        let h_end = h.freeze(t + dt);

        h_start.apply(&psi, &mut k);
        for (((a, x), p), k) in acc.iter_mut().zip(tmp.iter_mut()).zip(&psi).zip(&k) {
            let k = times_minus_i(*k);
            *a = k;
            *x = p + half * k;
        }
        h_mid.apply(&tmp, &mut k);
        for (((a, x), p), k) in acc.iter_mut().zip(tmp.iter_mut()).zip(&psi).zip(&k) {
            let k = times_minus_i(*k);
            *a += 2.0 * k;
            *x = p + half * k;
        }
        h_mid.apply(&tmp, &mut k);
        for (((a, x), p), k) in acc.iter_mut().zip(tmp.iter_mut()).zip(&psi).zip(&k) {
            let k = times_minus_i(*k);
            *a += 2.0 * k;
            *x = p + dt * k;
        }
        h_end.apply(&tmp, &mut k);
        for ((p, a), k) in psi.iter_mut().zip(&acc).zip(&k) {
            *p += sixth * (a + times_minus_i(*k));
        }
        h_start = h_end;

        let done = step + 1;
        if done % sample_every == 0 || done == steps {
            let drift = (norm(&psi) - 1.0).abs();
            max_norm_drift = max_norm_drift.max(drift);
            let time = done as f64 * dt;
            if !(drift <= NORM_DRIFT_LIMIT) {
                return Err(Error::NormDrift {
                    drift,
                    time,
                    dt,
                    limit: NORM_DRIFT_LIMIT,
                });
            }
            times.push(time);
            states.push(psi.clone());
        }
    }
    Ok(Trajectory {
        times,
        states,
        dt,
        max_norm_drift,
    })
}

/// Agreement between a Raman trajectory and the effective two-level solution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticComparison {
    /// `max_t max(|p0 - p0_eff|, |p1 - p1_eff|)`
    pub max_ground_deviation: f64,
    /// `max_t sum_{i>=2} |psi_i|^2`
    pub max_intermediate_population: f64,
    /// Peak-to-peak swing of `|psi_1|^2`.
    pub contrast: f64,
    /// Oscillation frequency of `|psi_1|^2`, when resolvable.
    pub observed_frequency: Option<f64>,
    /// Lightshift implied by the observed frequency.
    pub extracted_lightshift: Option<f64>,
}

pub fn compare_with_analytic(
    traj: &Trajectory,
    eff: &EffectiveTwoLevel,
    initial: AmplitudePair,
    delta: f64,
) -> AnalyticComparison {
    let mut dev = 0.0f64;
    let mut upper = 0.0f64;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let (q0, q1) = evolve_amplitudes(initial, eff, delta, *t).populations();
        let (p0, p1) = (s[0].norm_sqr(), s[1].norm_sqr());
        dev = dev.max((p0 - q0).abs()).max((p1 - q1).abs());
        upper = upper.max(s[2..].iter().map(|z| z.norm_sqr()).sum());
        lo = lo.min(p1);
        hi = hi.max(p1);
    }
    let contrast = if traj.times.is_empty() { 0.0 } else { hi - lo };
    let observed_frequency = if contrast > 1e-6 {
        dominant_frequency(&traj.times, &traj.population_series(1))
    } else {
        None
    };
    let extracted_lightshift = observed_frequency.map(|w| {
        let detuning = (w * w - eff.omega_b * eff.omega_b).max(0.0).sqrt();
        let sign = if eff.delta_d < 0.0 { -1.0 } else { 1.0 };
        delta + sign * detuning
    });
    AnalyticComparison {
        max_ground_deviation: dev,
        max_intermediate_population: upper,
        contrast,
        observed_frequency,
        extracted_lightshift,
    }
}

/// Hann-windowed Fourier magnitude of `values` at angular frequency `w`.
fn windowed_amplitude(times: &[f64], values: &[f64], mean: f64, w: f64) -> f64 {
    let (t0, t1) = (times[0], times[times.len() - 1]);
    let span = t1 - t0;
    let mut acc = C64::new(0.0, 0.0);
    for (t, v) in times.iter().zip(values) {
        let window = 0.5 - 0.5 * (TAU * (t - t0) / span).cos();
        acc += C64::from_polar(window * (v - mean), -w * t);
    }
    acc.norm()
}

/// Angular frequency of the strongest oscillation in a uniformly sampled series.
///
/// The FFT peak of the zero-padded series is refined by golden-section search on
/// the windowed transform. Needs about three periods in the record; shorter
/// records let the window's mirror image pull the peak.
pub fn dominant_frequency(times: &[f64], values: &[f64]) -> Option<f64> {
    let n = times.len();
    if n < 8 || values.len() != n {
        return None;
    }
    let span = times[n - 1] - times[0];
    if !(span > 0.0) {
        return None;
    }
    let dt = span / (n - 1) as f64;
    let mean = values.iter().sum::<f64>() / n as f64;
    let padded = (4 * n).next_power_of_two();
    let mut buf: Vec<C64> = values
        .iter()
        .map(|v| C64::new(v - mean, 0.0))
        .chain(std::iter::repeat(C64::new(0.0, 0.0)))
        .take(padded)
        .collect();
    FftPlanner::new().plan_fft_forward(padded).process(&mut buf);
    let peak = (1..padded / 2).max_by(|&a, &b| buf[a].norm().total_cmp(&buf[b].norm()))?;
    let bin = TAU / (padded as f64 * dt);
    let w_peak = peak as f64 * bin;
    if w_peak < TAU / span {
        return None;
    }

    let (mut a, mut b) = ((w_peak - 2.0 * bin).max(0.0), w_peak + 2.0 * bin);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let f = |w: f64| -windowed_amplitude(times, values, mean, w);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    Some(0.5 * (a + b))
}

/// One point of a two-photon detuning scan started in `|0>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanPoint {
    pub delta: f64,
    /// Observed `max p1 - min p1`.
    pub peak_to_peak: f64,
    /// Predicted envelope `m^2`.
    pub predicted: f64,
    pub max_intermediate_population: f64,
}

/// Integration settings shared by scan points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanSettings {
    pub t_final: f64,
    /// Phase advance per step at the fastest frequency.
    pub phase_per_step: f64,
    /// Target number of stored samples.
    pub samples: usize,
}

/// Integrate the Raman Hamiltonian at every two-photon detuning in `deltas`.
pub fn transfer_scan(
    c: &CouplingVectors,
    d: &DetuningSet,
    deltas: &[f64],
    settings: ScanSettings,
    exec: Execution,
) -> Result<Vec<ScanPoint>> {
    try_map(exec, deltas, |&delta| {
        let det = d.with_two_photon(delta);
        let h = RamanHamiltonian::new(c, &det);
        let eff = mixing_angles(c, &det)?;
        let dt = suggest_dt(&h, settings.t_final, settings.phase_per_step);
        let steps = (settings.t_final / dt).ceil() as usize;
        let every = (steps / settings.samples.max(1)).max(1);
        let traj = integrate(&h, &ground_state(h.dim()), settings.t_final, dt, every)?;
        let p1 = traj.population_series(1);
        let (lo, hi) = p1
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, u), &p| (l.min(p), u.max(p)));
        let m = envelope(&eff);
        let upper = traj
            .states
            .iter()
            .map(|s| s[2..].iter().map(|z| z.norm_sqr()).sum::<f64>())
            .fold(0.0, f64::max);
        Ok(ScanPoint {
            delta,
            peak_to_peak: hi - lo,
            predicted: m * m,
            max_intermediate_population: upper,
        })
    })
}

/// `|0>` in an `n`-level space.
pub fn ground_state(n: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); n];
    v[0] = C64::new(1.0, 0.0);
    v
}

/// Time for `periods` effective Rabi cycles, `2 pi periods / Omega~_D`.
pub fn rabi_periods(eff: &EffectiveTwoLevel, periods: f64) -> Option<f64> {
    (eff.omega_tilde_d > 0.0).then(|| periods * 2.0 * PI / eff.omega_tilde_d)
}
