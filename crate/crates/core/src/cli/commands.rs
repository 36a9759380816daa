use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::RunConfig;
use super::output::{Cell, Table};
use crate::atoms::{
    closed_form_table, coupling_profiles, enumerate_pairs, numeric_table, physical_couplings, spectrum,
    RamanPair,
};
use crate::effective::{
    evolve_amplitudes, mixing_angles, regime_check, AmplitudePair, CouplingVectors, DetuningSet,
    RegimeReport, RegimeThresholds,
};
use crate::eigen::{build_interaction_hamiltonian, finite_eigenvalues, numeric_eigensystem, ScaledSystem};
use crate::error::{invalid, Result};
use crate::oracle::{ground_state, integrate, rabi_periods, suggest_dt, Hamiltonian, RamanHamiltonian};
use crate::parallel::Execution;
use crate::{HalfInt, C64};

/// Phase advance per RK4 step at the fastest frequency for `evolve --oracle`.
const ORACLE_PHASE_PER_STEP: f64 = 0.08;

pub struct Report {
    pub table: Table,
    pub warnings: Vec<String>,
    pub regime_failed: bool,
}

impl Report {
    fn data(table: Table) -> Self {
        Report {
            table,
            warnings: Vec::new(),
            regime_failed: false,
        }
    }

    fn regime(&mut self, label: &str, report: &RegimeReport) {
        for f in report.failures() {
            let msg = format!("{label}: {f}");
            if !self.warnings.contains(&msg) {
                self.warnings.push(msg);
            }
        }
        self.regime_failed |= !report.all_passed();
    }
}

fn mf_cell(m: HalfInt) -> Cell {
    Cell::Text(m.to_string())
}

fn select_pair(cfg: &RunConfig) -> Result<RamanPair> {
    let mf = cfg.require_mf()?;
    enumerate_pairs(&cfg.atom, cfg.q_pump, cfg.q_stokes)
        .into_iter()
        .find(|p| p.lower.mf == mf)
        .ok_or_else(|| {
            invalid(format!(
                "no ({},{}) pair starts from mF = {mf} in F = {}",
                cfg.q_pump,
                cfg.q_stokes,
                cfg.atom.lower_f()
            ))
        })
}

fn pair_couplings(cfg: &RunConfig, pair: &RamanPair) -> Result<CouplingVectors> {
    let (pump, stokes) = cfg.fields()?;
    physical_couplings(&cfg.atom, cfg.line, pair, &pump, &stokes)
}

fn check(cfg: &RunConfig, c: &CouplingVectors, d: &DetuningSet) -> RegimeReport {
    regime_check(c, d, cfg.atom.ground_splitting, &RegimeThresholds::default())
}

/// Columns: `mF, gdot, gs_norm_sq, gp_norm_sq`.
pub fn table(cfg: &RunConfig) -> Result<Report> {
    let mut t = Table::new(&["mF", "gdot", "gs_norm_sq", "gp_norm_sq"]);
    let exact = closed_form_table(&cfg.atom, cfg.line, cfg.q_pump, cfg.q_stokes)?;
    if cfg.exact {
        for r in exact {
            t.push(vec![
                mf_cell(r.mf),
                r.gdot.to_string().into(),
                r.gs_norm_sq.to_string().into(),
                r.gp_norm_sq.to_string().into(),
            ]);
        }
    } else {
        for r in numeric_table(&cfg.atom, cfg.line, cfg.q_pump, cfg.q_stokes)? {
            t.push(vec![mf_cell(r.mf), r.gdot.into(), r.gs_norm_sq.into(), r.gp_norm_sq.into()]);
        }
    }
    Ok(Report::data(t))
}

/// Columns: `I, qP, qS, mF, gdot` for `I = 1/2 .. 9/2`.
fn coupling_profile_table(cfg: &RunConfig) -> Result<Report> {
    let spins: Vec<HalfInt> = [1, 3, 5, 7, 9].map(HalfInt::from_twice).to_vec();
    let mut t = Table::new(&["I", "qP", "qS", "mF", "gdot"]);
    for p in coupling_profiles(&spins, cfg.line)? {
        t.push(vec![
            mf_cell(p.nuclear_spin),
            Cell::Int(p.q_pump.q().into()),
            Cell::Int(p.q_stokes.q().into()),
            mf_cell(p.mf),
            p.gdot.into(),
        ]);
    }
    Ok(Report::data(t))
}

/// Columns: `mF, mF_upper, two_photon_rad_s, OmegaB_rad_s, DeltaB_rad_s, envelope`.
pub fn spectrum_cmd(cfg: &RunConfig) -> Result<Report> {
    if cfg.profiles {
        return coupling_profile_table(cfg);
    }
    let (pump, stokes) = cfg.fields()?;
    let base = DetuningSet::new(cfg.require_single_photon()?, cfg.two_photon)?;
    let mut report = Report::data(Table::new(&[
        "mF",
        "mF_upper",
        "two_photon_rad_s",
        "OmegaB_rad_s",
        "DeltaB_rad_s",
        "envelope",
    ]));
    for pair in enumerate_pairs(&cfg.atom, cfg.q_pump, cfg.q_stokes) {
        let c = pair_couplings(cfg, &pair)?;
        report.regime(&format!("mF = {}", pair.lower.mf), &check(cfg, &c, &base));
    }
    for delta in cfg.two_photon_values() {
        let d = base.with_two_photon(delta);
        for r in spectrum(&cfg.atom, cfg.line, &pump, &stokes, &d, Execution::default())? {
            report.table.push(vec![
                mf_cell(r.mf),
                mf_cell(r.mf_upper),
                delta.into(),
                r.omega_b.into(),
                r.delta_b.into(),
                r.envelope.into(),
            ]);
        }
    }
    Ok(report)
}

/// Columns: `t_s, p0, p1`, plus `p0_oracle, p1_oracle, p_intermediate_oracle,
/// deviation` with the oracle. With the oracle the rows are the integrator's
/// sample times.
pub fn evolve(cfg: &RunConfig) -> Result<Report> {
    let pair = select_pair(cfg)?;
    let c = pair_couplings(cfg, &pair)?;
    let d = DetuningSet::new(cfg.require_single_photon()?, cfg.two_photon)?;
    let eff = mixing_angles(&c, &d)?;
    let t_span = match cfg.t_span {
        Some(t) => t,
        None => rabi_periods(&eff, 2.0)
            .ok_or_else(|| invalid("no Rabi oscillation at this setting; give t_span"))?,
    };
    let initial = AmplitudePair::ground();
    let mut report = if cfg.oracle {
        Report::data(Table::new(&[
            "t_s",
            "p0",
            "p1",
            "p0_oracle",
            "p1_oracle",
            "p_intermediate_oracle",
            "deviation",
        ]))
    } else {
        Report::data(Table::new(&["t_s", "p0", "p1"]))
    };
    report.regime(&format!("mF = {}", pair.lower.mf), &check(cfg, &c, &d));
    let analytic = |t: f64| evolve_amplitudes(initial, &eff, d.two_photon(), t).populations();

    if !cfg.oracle {
        let step = t_span / (cfg.samples - 1) as f64;
        for k in 0..cfg.samples {
            let t = step * k as f64;
            let (p0, p1) = analytic(t);
            report.table.push(vec![t.into(), p0.into(), p1.into()]);
        }
        return Ok(report);
    }

    let h = RamanHamiltonian::new(&c, &d);
    let interval = t_span / (cfg.samples - 1) as f64;
    let per_sample = (interval / suggest_dt(&h, t_span, ORACLE_PHASE_PER_STEP)).ceil().max(1.0);
    // a hair above the exact quotient so rounding cannot add a step
    let dt = interval / per_sample * (1.0 + 1e-12);
    let traj = integrate(&h, &ground_state(h.dim()), t_span, dt, per_sample as usize)?;
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let (p0, p1) = analytic(*t);
        let (q0, q1) = (s[0].norm_sqr(), s[1].norm_sqr());
        let rest: f64 = s[2..].iter().map(|z| z.norm_sqr()).sum();
        let dev = (p0 - q0).abs().max((p1 - q1).abs());
        report.table.push(vec![
            (*t).into(),
            p0.into(),
            p1.into(),
            q0.into(),
            q1.into(),
            rest.into(),
            dev.into(),
        ]);
    }
    Ok(report)
}

/// Columns: `criterion, margin, threshold, passed`, for the most strongly
/// driven pair (or the selected one).
pub fn validate(cfg: &RunConfig) -> Result<Report> {
    let d = DetuningSet::new(cfg.require_single_photon()?, cfg.two_photon)?;
    let pairs = match cfg.mf {
        Some(_) => vec![select_pair(cfg)?],
        None => enumerate_pairs(&cfg.atom, cfg.q_pump, cfg.q_stokes),
    };
    let mut worst: Option<(RamanPair, CouplingVectors)> = None;
    for p in pairs {
        let c = pair_couplings(cfg, &p)?;
        if worst.as_ref().is_none_or(|(_, w)| c.max_norm() > w.max_norm()) {
            worst = Some((p, c));
        }
    }
    let (pair, c) = worst.ok_or_else(|| invalid("no Raman pairs for this polarization choice"))?;
    let thresholds = RegimeThresholds::default();
    let r = regime_check(&c, &d, cfg.atom.ground_splitting, &thresholds);
    let mut report = Report::data(Table::new(&["criterion", "mF", "margin", "threshold", "passed"]));
    for (name, crit) in [
        ("detuning", r.detuning),
        ("single_photon", r.single_photon),
        ("resolution", r.resolution),
    ] {
        report.table.push(vec![
            name.into(),
            mf_cell(pair.lower.mf),
            crit.margin.into(),
            thresholds.ratio.into(),
            crit.passed.into(),
        ]);
    }
    report.regime(&format!("mF = {}", pair.lower.mf), &r);
    Ok(report)
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..n)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Seeded couplings for an `n`-dimensional matrix with `norm(P, S) = ratio |Delta|`.
pub fn random_system(n: usize, ratio: f64, single_photon: f64, seed: u64) -> Result<(CouplingVectors, DetuningSet)> {
    if n < 3 {
        return Err(invalid("a random system needs at least 3 levels"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_unit(&mut rng, n - 2);
    let s = random_unit(&mut rng, n - 2);
    let share: f64 = rng.random_range(0.25..0.75);
    let total = ratio * single_photon.abs();
    let (np, ns) = (total * share.sqrt(), total * (1.0 - share).sqrt());
    let c = CouplingVectors::new(
        p.into_iter().map(|z| z * np).collect(),
        s.into_iter().map(|z| z * ns).collect(),
    )?;
    Ok((c, DetuningSet::new(single_photon, 0.0)?))
}

/// Columns: `index, kind, analytic_rad_s, numeric_rad_s, deviation_rad_s, bound_rad_s`.
///
/// The two finite eigenvalues are compared with the quadratic-equation roots;
/// the rest with `-Delta`, bounded by `(|P|^2 + |S|^2)/(2|Delta|)`. Without
/// `levels` the system is the selected atomic pair at `t = 0`; with it, a
/// seeded random system with `Delta` from `delta_hz` (default 1 rad/s).
pub fn eigs(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::data(Table::new(&[
        "index",
        "kind",
        "analytic_rad_s",
        "numeric_rad_s",
        "deviation_rad_s",
        "bound_rad_s",
    ]));
    let (c, d) = match cfg.levels {
        Some(n) => random_system(n, cfg.coupling_ratio, cfg.single_photon.unwrap_or(1.0), cfg.seed)?,
        None => {
            let pair = select_pair(cfg)?;
            let c = pair_couplings(cfg, &pair)?;
            let d = DetuningSet::new(cfg.require_single_photon()?, 0.0)?;
            report.regime(&format!("mF = {}", pair.lower.mf), &check(cfg, &c, &d));
            (c, d)
        }
    };
    let s = ScaledSystem::from_physical(&c, &d, 0.0, None)?;
    let (lp, lm) = finite_eigenvalues(&s)?;
    let w0 = s.omega0;
    let finite_bound = w0 * 5.0 * (s.x_norm_sq() + s.y_norm_sq()).powi(2) / s.delta_scaled.abs().powi(3);
    let big = d.single_photon();
    let level_bound = (c.pump_norm_sq() + c.stokes_norm_sq()) / (2.0 * big.abs());

    let mut numeric = numeric_eigensystem(&build_interaction_hamiltonian(&c, &d, 0.0))?.values;
    let mut take_nearest = |target: f64| {
        let k = (0..numeric.len())
            .min_by(|&a, &b| (numeric[a] - target).abs().total_cmp(&(numeric[b] - target).abs()))
            .expect("at least three eigenvalues");
        numeric.remove(k)
    };
    let mut index = 0i64;
    for (kind, lambda) in [("finite_plus", lp), ("finite_minus", lm)] {
        let analytic = -w0 * lambda;
        let value = take_nearest(analytic);
        report.table.push(vec![
            Cell::Int(index),
            kind.into(),
            analytic.into(),
            value.into(),
            (value - analytic).abs().into(),
            finite_bound.into(),
        ]);
        index += 1;
    }
    for value in numeric {
        report.table.push(vec![
            Cell::Int(index),
            "intermediate".into(),
            (-big).into(),
            value.into(),
            (value + big).abs().into(),
            level_bound.into(),
        ]);
        index += 1;
    }
    Ok(report)
}
