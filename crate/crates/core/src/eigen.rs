//! Eigenstructure of the multilevel Raman Hamiltonian.
//!
//! The interaction-picture Hamiltonian has a zero 2x2 ground block, pump
//! couplings `P_i/2` in row 0, Stokes couplings `S_i/2 exp(-i delta t)` in
//! row 1 and `-Delta_i` on the intermediate diagonal.
//!
//! The scaled form divides by a frequency `Omega_0` and flips the sign of
//! the intermediate states and of the whole matrix:
//!
//! ```text
//!        ( 0    0    x_2  ..  x_N )
//!        ( 0    0    y_2  ..  y_N )
//! H_s =  ( x_2* y_2* d_s          )      x = P/(2 Omega_0), y = S exp(-i delta t)/(2 Omega_0)
//!        ( ..   ..        ..      )      d_s = Delta/Omega_0
//!        ( x_N* y_N*          d_s )
//! ```
//!
//! so `eig(H) = -Omega_0 eig(H_s)`. Two eigenvalues of `H_s` stay small,
//!
//! ```text
//! lambda_+- = [-(|x|^2 + |y|^2) +- sqrt((|x|^2 - |y|^2)^2 + 4|x.y*|^2)] / (2 d_s)
//! ```
//!
//! and the remaining `N - 2` sit near `d_s`.

use crate::effective::{CouplingVectors, DetuningSet};
use crate::error::{invalid, Error, Result};
use crate::C64;

/// Dense square complex matrix, Hermitian by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianMatrix {
    n: usize,
    entries: Vec<C64>,
}

const HERMITIAN_TOL: f64 = 1e-12;

impl HamiltonianMatrix {
    pub fn zeros(n: usize) -> Self {
        HamiltonianMatrix {
            n,
            entries: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    /// Row-major entries; rejects matrices that are not Hermitian to `1e-12`
    /// relative to the largest entry.
    pub fn new(n: usize, entries: Vec<C64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(invalid(format!(
                "{} entries do not form a {n}x{n} matrix",
                entries.len()
            )));
        }
        let m = HamiltonianMatrix { n, entries };
        let asymmetry = m.max_asymmetry();
        if !(asymmetry <= HERMITIAN_TOL * m.scale().max(1.0)) {
            return Err(Error::NotHermitian { asymmetry });
        }
        Ok(m)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self::new(n, entries)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    /// Set `(i, j)` and its mirror `(j, i)` to keep the matrix Hermitian.
    pub fn set_hermitian(&mut self, i: usize, j: usize, value: C64) {
        if i == j {
            self.entries[i * self.n + i] = C64::new(value.re, 0.0);
        } else {
            self.entries[i * self.n + j] = value;
            self.entries[j * self.n + i] = value.conj();
        }
    }

    /// `max |H_ij - conj(H_ji)|`
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Largest entry magnitude.
    pub fn scale(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `H v`
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        (0..self.n)
            .map(|i| {
                self.entries[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }
}

/// Interaction-picture Hamiltonian at time `t`, ordered `|0>, |1>, |2>, ..`.
pub fn build_interaction_hamiltonian(c: &CouplingVectors, d: &DetuningSet, t: f64) -> HamiltonianMatrix {
    let n = c.len() + 2;
    let mut h = HamiltonianMatrix::zeros(n);
    let beat = C64::from_polar(1.0, -d.two_photon() * t);
    for (i, (p, s)) in c.pump().iter().zip(c.stokes()).enumerate() {
        h.set_hermitian(0, i + 2, 0.5 * p);
        h.set_hermitian(1, i + 2, 0.5 * s * beat);
        h.set_hermitian(i + 2, i + 2, C64::new(-d.level(i), 0.0));
    }
    h
}

/// Dimensionless couplings and detuning of the scaled problem.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaledSystem {
    pub x: Vec<C64>,
    pub y: Vec<C64>,
    pub delta_scaled: f64,
    pub omega0: f64,
}

impl ScaledSystem {
    pub fn new(x: Vec<C64>, y: Vec<C64>, delta_scaled: f64, omega0: f64) -> Result<Self> {
        if x.is_empty() || x.len() != y.len() {
            return Err(invalid("scaled couplings need equal non-zero lengths"));
        }
        if !(omega0 > 0.0 && omega0.is_finite()) {
            return Err(invalid(format!("Omega_0 = {omega0} must be positive")));
        }
        if !delta_scaled.is_finite() {
            return Err(invalid("scaled detuning must be finite"));
        }
        Ok(ScaledSystem {
            x,
            y,
            delta_scaled,
            omega0,
        })
    }

    /// Scale physical couplings at time `t`. `omega0` defaults to the largest
    /// half-coupling, falling back to `|Delta|` when all couplings vanish.
    pub fn from_physical(
        c: &CouplingVectors,
        d: &DetuningSet,
        t: f64,
        omega0: Option<f64>,
    ) -> Result<Self> {
        let omega0 = match omega0 {
            Some(w) => w,
            None => {
                let m = c
                    .pump()
                    .iter()
                    .chain(c.stokes())
                    .fold(0.0f64, |m, z| m.max(0.5 * z.norm()));
                if m > 0.0 {
                    m
                } else {
                    d.single_photon().abs()
                }
            }
        };
        let beat = C64::from_polar(1.0, -d.two_photon() * t);
        let x = c.pump().iter().map(|p| 0.5 * p / omega0).collect();
        let y = c.stokes().iter().map(|s| 0.5 * s * beat / omega0).collect();
        Self::new(x, y, d.single_photon() / omega0, omega0)
    }

    pub fn levels(&self) -> usize {
        self.x.len()
    }

    pub fn x_norm_sq(&self) -> f64 {
        self.x.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn y_norm_sq(&self) -> f64 {
        self.y.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `x . y* = sum_i x_i conj(y_i)`
    pub fn dot(&self) -> C64 {
        self.x.iter().zip(&self.y).map(|(a, b)| a * b.conj()).sum()
    }

    /// `|x|^2 |y|^2 - |x.y*|^2`, evaluated as `1/2 sum_ij |x_i y_j - x_j y_i|^2`.
    pub fn gram_determinant(&self) -> f64 {
        let n = self.levels();
        let mut acc = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                acc += (self.x[i] * self.y[j] - self.x[j] * self.y[i]).norm_sqr();
            }
        }
        acc
    }

    /// `sqrt((|y|^2 - |x|^2)^2 + 4|x.y*|^2)`
    pub fn chi(&self) -> f64 {
        (self.y_norm_sq() - self.x_norm_sq()).hypot(2.0 * self.dot().norm())
    }

    pub fn matrix(&self) -> HamiltonianMatrix {
        let n = self.levels() + 2;
        let mut h = HamiltonianMatrix::zeros(n);
        for i in 0..self.levels() {
            h.set_hermitian(0, i + 2, self.x[i]);
            h.set_hermitian(1, i + 2, self.y[i]);
            h.set_hermitian(i + 2, i + 2, C64::new(self.delta_scaled, 0.0));
        }
        h
    }

    /// `det(H_s - lambda)` by the block expansion
    /// `lambda^2 (d-lambda)^M + lambda s (d-lambda)^(M-1) + g (d-lambda)^(M-2)`
    /// with `s = |x|^2 + |y|^2` and `g` the Gram determinant.
    pub fn characteristic_determinant(&self, lambda: f64) -> f64 {
        let m = self.levels() as i32;
        let u = self.delta_scaled - lambda;
        let s = self.x_norm_sq() + self.y_norm_sq();
        let mut det = lambda * lambda * u.powi(m) + lambda * s * u.powi(m - 1);
        if m >= 2 {
            det += self.gram_determinant() * u.powi(m - 2);
        }
        det
    }

    fn require_detuning(&self) -> Result<f64> {
        if self.delta_scaled == 0.0 {
            Err(invalid("scaled detuning must be non-zero"))
        } else {
            Ok(self.delta_scaled)
        }
    }
}

/// The two small eigenvalues `(lambda_+, lambda_-)` of the scaled matrix.
pub fn finite_eigenvalues(s: &ScaledSystem) -> Result<(f64, f64)> {
    let d = s.require_detuning()?;
    let sum = s.x_norm_sq() + s.y_norm_sq();
    let chi = s.chi();
    Ok(((-sum + chi) / (2.0 * d), (-sum - chi) / (2.0 * d)))
}

/// Effective coupling, lightshift and their quadrature sum in rad/s.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenRates {
    pub omega_b: f64,
    pub delta_b: f64,
    pub omega_tilde_b: f64,
}

/// Unscale the finite pair: `Omega_B = (Omega_0^2/|Delta|) 2|x.y*|`,
/// `Delta_B = (Omega_0^2/Delta)(|y|^2 - |x|^2)`, `Omega~_B = Omega_0 |lambda_+ - lambda_-|`.
pub fn rabi_and_shift_from_eigenvalues(s: &ScaledSystem) -> Result<EigenRates> {
    let (lp, lm) = finite_eigenvalues(s)?;
    let big = s.delta_scaled * s.omega0;
    let k = s.omega0 * s.omega0 / big;
    Ok(EigenRates {
        omega_b: k.abs() * 2.0 * s.dot().norm(),
        delta_b: k * (s.y_norm_sq() - s.x_norm_sq()),
        omega_tilde_b: s.omega0 * (lp - lm).abs(),
    })
}

/// Ground-state eigenvector `(cos theta, exp(i phi) sin theta)` of the
/// eliminated 2x2 problem, taking the root with `|tan theta| <= 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DressedRotation {
    pub theta: f64,
    pub phi: f64,
    /// Set when `x.y* = 0` and `|x| = |y|`: any ground-state basis is an eigenbasis.
    pub degenerate: bool,
}

pub fn dressed_rotation(s: &ScaledSystem) -> DressedRotation {
    let dot = s.dot();
    let g = dot.norm();
    let d = s.y_norm_sq() - s.x_norm_sq();
    if g == 0.0 {
        return DressedRotation {
            theta: 0.0,
            phi: 0.0,
            degenerate: d == 0.0,
        };
    }
    let chi = d.hypot(2.0 * g);
    // both forms avoid cancellation
    let tan = if d >= 0.0 {
        -2.0 * g / (d + chi)
    } else {
        2.0 * g / (chi - d)
    };
    DressedRotation {
        theta: tan.atan(),
        phi: -dot.arg(),
        degenerate: false,
    }
}

/// Eigenvalues in ascending order with unit eigenvectors as columns.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    /// `vectors[k]` belongs to `values[k]`.
    pub vectors: Vec<Vec<C64>>,
}

pub const MAX_JACOBI_DIM: usize = 64;
const MAX_SWEEPS: usize = 64;

/// Full spectrum of a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn numeric_eigensystem(h: &HamiltonianMatrix) -> Result<Eigensystem> {
    let n = h.dim();
    if n > MAX_JACOBI_DIM {
        return Err(invalid(format!(
            "dimension {n} exceeds the supported {MAX_JACOBI_DIM}"
        )));
    }
    let asymmetry = h.max_asymmetry();
    if !(asymmetry <= HERMITIAN_TOL * h.scale().max(1.0)) {
        return Err(Error::NotHermitian { asymmetry });
    }
    let mut a = h.entries().to_vec();
    let mut v = vec![C64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = C64::new(1.0, 0.0);
        a[i * n + i].im = 0.0;
    }
    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    let target = (f64::EPSILON * f64::EPSILON) * total;

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].norm_sqr())
            .sum();
        if off <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let values = order.iter().map(|&k| a[k * n + k].re).collect();
    let vectors = order
        .iter()
        .map(|&k| {
            let col: Vec<C64> = (0..n).map(|i| v[i * n + k]).collect();
            let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            col.into_iter().map(|z| z / norm).collect()
        })
        .collect();
    Ok(Eigensystem { values, vectors })
}

/// Zero `a[p][q]` with the unitary `J = diag(1, e^{-i alpha}) R(theta)` on the `(p, q)` plane.
fn rotate(a: &mut [C64], v: &mut [C64], n: usize, p: usize, q: usize) {
    let b = a[p * n + q];
    let mag = b.norm();
    if mag == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let phase = b / mag;
    let zeta = (aqq - app) / (2.0 * mag);
    let t = if zeta == 0.0 {
        1.0
    } else {
        zeta.signum() / (zeta.abs() + zeta.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;
    // J = [[c, s], [-s e^{-i alpha}, c e^{-i alpha}]] in the (p, q) block
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -s * phase.conj();
    let jqq = c * phase.conj();

    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * jpp + akq * jqp;
        a[k * n + q] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = jpp.conj() * apk + jqp.conj() * aqk;
        a[q * n + k] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[p * n + q] = C64::new(0.0, 0.0);
    a[q * n + p] = C64::new(0.0, 0.0);
    a[p * n + p].im = 0.0;
    a[q * n + q].im = 0.0;

    for k in 0..n {
        let vkp = v[k * n + p];
        let vkq = v[k * n + q];
        v[k * n + p] = vkp * jpp + vkq * jqp;
        v[k * n + q] = vkp * jpq + vkq * jqq;
    }
}

/// Intermediate components `a_i = (x_i* a0 + y_i* a1) / (lambda - d_s)` of a
/// scaled eigenvector with ground components `(a0, a1)`.
pub fn intermediate_amplitudes(s: &ScaledSystem, a0: C64, a1: C64, lambda: f64) -> Vec<C64> {
    let denom = lambda - s.delta_scaled;
    s.x.iter()
        .zip(&s.y)
        .map(|(x, y)| (x.conj() * a0 + y.conj() * a1) / denom)
        .collect()
}

/// Ground-state weight `|a0|^2 + |a1|^2 = (d_s - lambda)/(d_s - 2 lambda)`
/// of a normalized eigenvector with small eigenvalue `lambda`.
pub fn eigenvector_weight(lambda: f64, delta_scaled: f64) -> f64 {
    (delta_scaled - lambda) / (delta_scaled - 2.0 * lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_vec(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<C64> {
        (0..n)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale)
            .collect()
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> HamiltonianMatrix {
        let raw = random_vec(rng, n * n, 1.0);
        HamiltonianMatrix::from_fn(n, |i, j| {
            if i == j {
                c(raw[i * n + i].re, 0.0)
            } else if i < j {
                raw[i * n + j]
            } else {
                raw[j * n + i].conj()
            }
        })
        .unwrap()
    }

    fn nalgebra_eigenvalues(h: &HamiltonianMatrix) -> Vec<f64> {
        let n = h.dim();
        let m = DMatrix::from_fn(n, n, |i, j| h.get(i, j));
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    #[test]
    fn three_level_reduction() {
        let cv = CouplingVectors::from_real(&[2.0], &[3.0]).unwrap();
        let d = DetuningSet::new(40.0, 0.0).unwrap();
        let h = build_interaction_hamiltonian(&cv, &d, 1.7);
        let expected = [
            [0.0, 0.0, 1.0],
            [0.0, 0.0, 1.5],
            [1.0, 1.5, -40.0],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(h.get(i, j), c(expected[i][j], 0.0));
            }
        }
    }

    #[test]
    fn interaction_hamiltonian_entries() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_vec(&mut rng, 4, 1.0);
        let s = random_vec(&mut rng, 4, 1.0);
        let cv = CouplingVectors::new(p.clone(), s.clone()).unwrap();
        let d = DetuningSet::new(25.0, 0.3)
            .unwrap()
            .with_per_level(vec![24.0, 25.0, 26.0, 27.0])
            .unwrap();
        let t = 2.5;
        let h = build_interaction_hamiltonian(&cv, &d, t);
        assert_eq!(h.dim(), 6);
        assert_eq!(h.max_asymmetry(), 0.0);
        let beat = c((0.3 * t).cos(), -(0.3 * t).sin());
        for i in 0..4 {
            assert_eq!(h.get(0, i + 2), p[i] * 0.5);
            assert!((h.get(1, i + 2) - s[i] * 0.5 * beat).norm() < 1e-15);
            assert_eq!(h.get(i + 2, 0), (p[i] * 0.5).conj());
            assert_eq!(h.get(i + 2, i + 2), c(-(24.0 + i as f64), 0.0));
        }
        assert_eq!(h.get(0, 1), c(0.0, 0.0));
        assert_eq!(h.get(2, 3), c(0.0, 0.0));
    }

    #[test]
    fn non_hermitian_rejected() {
        let e = vec![c(0.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)];
        assert!(matches!(HamiltonianMatrix::new(2, e), Err(Error::NotHermitian { .. })));
        assert!(HamiltonianMatrix::new(3, vec![]).is_err());
    }

    #[test]
    fn scaled_matrix_maps_to_physical_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cv = CouplingVectors::new(random_vec(&mut rng, 3, 1.0), random_vec(&mut rng, 3, 1.0)).unwrap();
        let d = DetuningSet::new(-30.0, 0.2).unwrap();
        let t = 0.9;
        let s = ScaledSystem::from_physical(&cv, &d, t, None).unwrap();
        let phys = numeric_eigensystem(&build_interaction_hamiltonian(&cv, &d, t)).unwrap();
        let scaled = numeric_eigensystem(&s.matrix()).unwrap();
        let mut mapped: Vec<f64> = scaled.values.iter().map(|l| -s.omega0 * l).collect();
        mapped.sort_by(f64::total_cmp);
        for (a, b) in mapped.iter().zip(&phys.values) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn finite_eigenvalue_examples() {
        let a = 0.3;
        let s = ScaledSystem::new(vec![c(a, 0.0)], vec![c(a, 0.0)], 50.0, 1.0).unwrap();
        let (lp, lm) = finite_eigenvalues(&s).unwrap();
        assert!(lp.abs() < 1e-18);
        assert!((lm + 2.0 * a * a / 50.0).abs() < 1e-16);

        let s = ScaledSystem::new(vec![c(0.4, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.4)], 20.0, 1.0).unwrap();
        let (lp, lm) = finite_eigenvalues(&s).unwrap();
        assert_eq!(lp, lm);
        assert!((lp + 0.16 / 20.0).abs() < 1e-16);

        let zero = ScaledSystem::new(vec![c(1.0, 0.0)], vec![c(1.0, 0.0)], 0.0, 1.0).unwrap();
        assert!(finite_eigenvalues(&zero).is_err());
    }

    #[test]
    fn finite_eigenvalues_solve_the_quadratic() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let s = ScaledSystem::new(
                random_vec(&mut rng, 4, 1.0),
                random_vec(&mut rng, 4, 1.0),
                rng.random_range(-200.0..200.0),
                1.0,
            )
            .unwrap();
            let (xx, yy, g) = (s.x_norm_sq(), s.y_norm_sq(), s.dot().norm_sqr());
            let d = s.delta_scaled;
            for l in <[f64; 2]>::from(finite_eigenvalues(&s).unwrap()) {
                let r = l * l * d * d + l * (xx + yy) * d + xx * yy - g;
                assert!(r.abs() < 1e-12 * (1.0 + xx * yy), "{r}");
            }
        }
    }

    #[test]
    fn rates_agree_with_effective_formulas() {
        use crate::effective::{effective_rabi, lightshift};
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for big in [-80.0, 35.0] {
            let cv = CouplingVectors::new(random_vec(&mut rng, 4, 2.0), random_vec(&mut rng, 4, 2.0)).unwrap();
            let d = DetuningSet::new(big, 0.0).unwrap();
            let s = ScaledSystem::from_physical(&cv, &d, 0.0, None).unwrap();
            let r = rabi_and_shift_from_eigenvalues(&s).unwrap();
            let ob = effective_rabi(&cv, &d).unwrap();
            let db = lightshift(&cv, &d).unwrap();
            assert!((r.omega_b - ob).abs() < 1e-12 * ob.max(1.0));
            assert!((r.delta_b - db).abs() < 1e-12 * db.abs().max(1.0));
            assert!((r.omega_tilde_b - ob.hypot(db)).abs() < 1e-12);
        }
    }

    #[test]
    fn rate_limits() {
        let s = ScaledSystem::new(vec![c(0.3, 0.0), c(0.0, 0.4)], vec![c(0.0, 0.4), c(0.3, 0.0)], 40.0, 2.0).unwrap();
        assert_eq!(rabi_and_shift_from_eigenvalues(&s).unwrap().delta_b, 0.0);
        let s = ScaledSystem::new(vec![c(0.3, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.5, 0.1)], 40.0, 2.0).unwrap();
        assert_eq!(rabi_and_shift_from_eigenvalues(&s).unwrap().omega_b, 0.0);
    }

    #[test]
    fn dressed_rotation_examples() {
        let s = ScaledSystem::new(vec![c(0.5, 0.0)], vec![c(0.5, 0.0)], 30.0, 1.0).unwrap();
        let r = dressed_rotation(&s);
        assert!((r.theta.tan().abs() - 1.0).abs() < 1e-15);
        assert_eq!(r.phi, 0.0);
        assert!(!r.degenerate);

        let s = ScaledSystem::new(vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)], 30.0, 1.0).unwrap();
        let r = dressed_rotation(&s);
        assert!(r.degenerate && r.theta == 0.0);

        let s = ScaledSystem::new(vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(2.0, 0.0)], 30.0, 1.0).unwrap();
        let r = dressed_rotation(&s);
        assert!(!r.degenerate && r.theta == 0.0);
    }

    #[test]
    fn dressed_rotation_diagonalizes_ground_block() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let s = ScaledSystem::new(
                random_vec(&mut rng, 3, 1.0),
                random_vec(&mut rng, 3, 1.0),
                100.0,
                1.0,
            )
            .unwrap();
            let r = dressed_rotation(&s);
            assert!(r.theta.abs() <= std::f64::consts::FRAC_PI_4 + 1e-15);
            let g = HamiltonianMatrix::from_fn(2, |i, j| match (i, j) {
                (0, 0) => c(s.x_norm_sq(), 0.0),
                (1, 1) => c(s.y_norm_sq(), 0.0),
                (0, 1) => s.dot(),
                _ => s.dot().conj(),
            })
            .unwrap();
            let e = C64::from_polar(1.0, r.phi);
            let v = [c(r.theta.cos(), 0.0), e * r.theta.sin()];
            let w = [-e.conj() * r.theta.sin(), c(r.theta.cos(), 0.0)];
            let gv = g.apply(&v);
            let off: C64 = w.iter().zip(&gv).map(|(a, b)| a.conj() * b).sum();
            assert!(off.norm() < 1e-13, "{off}");
            let oracle = numeric_eigensystem(&g).unwrap();
            let mu: f64 = v.iter().zip(&gv).map(|(a, b)| (a.conj() * b).re).sum();
            assert!(oracle.values.iter().any(|l| (l - mu).abs() < 1e-12));
        }
    }

    #[test]
    fn jacobi_diagonal_input() {
        let h = HamiltonianMatrix::from_fn(4, |i, j| if i == j { c([3.0, -1.0, 2.0, 0.5][i], 0.0) } else { c(0.0, 0.0) }).unwrap();
        let e = numeric_eigensystem(&h).unwrap();
        assert_eq!(e.values, vec![-1.0, 0.5, 2.0, 3.0]);
    }

    #[test]
    fn jacobi_matches_nalgebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [1, 2, 3, 5, 8, 13, 20] {
            let h = random_hermitian(&mut rng, n);
            let e = numeric_eigensystem(&h).unwrap();
            let oracle = nalgebra_eigenvalues(&h);
            for (a, b) in e.values.iter().zip(&oracle) {
                assert!((a - b).abs() < 1e-12, "n={n}: {a} vs {b}");
            }
            for (l, v) in e.values.iter().zip(&e.vectors) {
                let hv = h.apply(v);
                let resid = hv.iter().zip(v).map(|(a, b)| (a - b * l).norm_sqr()).sum::<f64>().sqrt();
                assert!(resid < 1e-12, "n={n}: residual {resid}");
            }
            for i in 0..n {
                for j in 0..n {
                    let ip: C64 = e.vectors[i].iter().zip(&e.vectors[j]).map(|(a, b)| a.conj() * b).sum();
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - expected).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn jacobi_rejects_oversized_input() {
        assert!(numeric_eigensystem(&HamiltonianMatrix::zeros(MAX_JACOBI_DIM + 1)).is_err());
    }

    #[test]
    fn three_level_resonant_spectrum() {
        let cv = CouplingVectors::from_real(&[1.0], &[1.0]).unwrap();
        let d = DetuningSet::new(100.0, 0.0).unwrap();
        let h = build_interaction_hamiltonian(&cv, &d, 0.0);
        let e = numeric_eigensystem(&h).unwrap();
        let s = ScaledSystem::from_physical(&cv, &d, 0.0, None).unwrap();
        let (lp, lm) = finite_eigenvalues(&s).unwrap();
        let predicted = [-s.omega0 * lp, -s.omega0 * lm];
        // physical energies: 0 (dark) and ~ 0.5/100 (bright, pushed up)
        let bound = 1.0f64.powi(3) / 100.0f64.powi(2);
        for p in predicted {
            assert!(e.values.iter().any(|v| (v - p).abs() < bound), "{p} not in {:?}", e.values);
        }
    }

    #[test]
    fn upper_manifold_stays_near_detuning() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let big = 60.0;
        let cv = CouplingVectors::new(random_vec(&mut rng, 6, 1.0), random_vec(&mut rng, 6, 1.0)).unwrap();
        let d = DetuningSet::new(big, 0.0).unwrap();
        let e = numeric_eigensystem(&build_interaction_hamiltonian(&cv, &d, 0.0)).unwrap();
        let bound = (cv.pump_norm_sq() + cv.stokes_norm_sq()) / big;
        let near = e.values.iter().filter(|v| (*v + big).abs() <= bound).count();
        assert_eq!(near, 6);
    }

    #[test]
    fn intermediate_components_follow_from_ground_components() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let s = ScaledSystem::new(random_vec(&mut rng, 5, 1.0), random_vec(&mut rng, 5, 1.0), 200.0, 1.0).unwrap();
        let e = numeric_eigensystem(&s.matrix()).unwrap();
        let (lp, lm) = finite_eigenvalues(&s).unwrap();
        for (l, v) in e.values.iter().zip(&e.vectors) {
            if l.abs() > 1.0 {
                continue;
            }
            assert!((l - lp).abs().min((l - lm).abs()) < 1e-4);
            let a = intermediate_amplitudes(&s, v[0], v[1], *l);
            for (k, ai) in a.iter().enumerate() {
                assert!((ai - v[k + 2]).norm() < 1e-12);
            }
            let w = v[0].norm_sqr() + v[1].norm_sqr();
            assert!((w - eigenvector_weight(*l, s.delta_scaled)).abs() < 1e-12);
        }
    }

    #[test]
    fn determinant_vanishes_on_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for m in 1..=6 {
            let s = ScaledSystem::new(random_vec(&mut rng, m, 1.0), random_vec(&mut rng, m, 1.0), 7.0, 1.0).unwrap();
            let e = numeric_eigensystem(&s.matrix()).unwrap();
            let scale = s.matrix().scale();
            for l in &e.values {
                let r = s.characteristic_determinant(*l);
                assert!(r.abs() <= 1e-9 * scale.powi(m as i32 + 2), "m={m} lambda={l} det={r}");
            }
            // and it is a monic-up-to-sign polynomial: check against nalgebra at a generic point
            let lam = 0.37;
            let n = m + 2;
            let a = DMatrix::from_fn(n, n, |i, j| s.matrix().get(i, j) - if i == j { c(lam, 0.0) } else { c(0.0, 0.0) });
            let det = a.determinant();
            assert!((det.re - s.characteristic_determinant(lam)).abs() < 1e-9 * det.norm().max(1.0));
        }
    }

    proptest! {
        #[test]
        fn gram_identity(seed in 0u64..10_000, n in 1usize..8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = ScaledSystem::new(random_vec(&mut rng, n, 1.0), random_vec(&mut rng, n, 1.0), 1.0, 1.0).unwrap();
            let direct = s.x_norm_sq() * s.y_norm_sq() - s.dot().norm_sqr();
            prop_assert!((direct - s.gram_determinant()).abs() < 1e-12);
        }

        #[test]
        fn interaction_hamiltonian_is_hermitian(seed in 0u64..10_000, n in 1usize..8, t in -10.0..10.0f64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cv = CouplingVectors::new(random_vec(&mut rng, n, 3.0), random_vec(&mut rng, n, 3.0)).unwrap();
            let d = DetuningSet::new(50.0, 1.3).unwrap();
            let h = build_interaction_hamiltonian(&cv, &d, t);
            prop_assert_eq!(h.max_asymmetry(), 0.0);
        }

        #[test]
        fn small_eigenvalues_match_perturbative_pair(seed in 0u64..10_000, n in 1usize..7) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = 500.0;
            let s = ScaledSystem::new(random_vec(&mut rng, n, 1.0), random_vec(&mut rng, n, 1.0), d, 1.0).unwrap();
            let e = numeric_eigensystem(&s.matrix()).unwrap();
            let (lp, lm) = finite_eigenvalues(&s).unwrap();
            let sum = s.x_norm_sq() + s.y_norm_sq();
            let tol = 5.0 * sum * sum / d.powi(3);
            prop_assert!(e.values.iter().any(|v| (v - lp).abs() <= tol));
            prop_assert!(e.values.iter().any(|v| (v - lm).abs() <= tol));
        }
    }
}
