use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::heat::heat_apply;
use super::smoothing::log_space;
use crate::besov::{BlockNorms, Exponent, LpEvaluator};
use crate::error::{Error, Result};
use crate::flags::{Flags, Ratio};
use crate::hermite::{HermiteBasis, SpectralCoefficients};
use crate::spectral::DyadicPartition;

/// Cell weights `(e^{-x}, phi1, psi)` for `x = lambda dt`, with
/// `phi1 = (1 - e^{-x}) / lambda` and `psi = int_0^dt e^{-lambda (dt - r)} r dr`.
fn cell_weights(lambda: f64, dt: f64) -> (f64, f64, f64) {
    let x = lambda * dt;
    let decay = (-x).exp();
    let phi1 = -(-x).exp_m1() / lambda;
    let psi = if x < 1e-2 {
        dt * dt * (0.5 - x / 6.0 + x * x / 24.0 - x * x * x / 120.0 + x.powi(4) / 720.0)
    } else {
        (x + (-x).exp_m1()) / (lambda * lambda)
    };
    (decay, phi1, psi)
}

/// Solution of `u' + H u = f`, `u(t_0) = u0`, sampled on a time grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<SpectralCoefficients>,
    forcing: Option<Vec<SpectralCoefficients>>,
}

/// Exact variation of constants per mode with the forcing linear in each cell.
///
/// `forcing`, when given, holds one sample per time in `times`.
pub fn duhamel_solve(
    u0: &SpectralCoefficients,
    forcing: Option<&[SpectralCoefficients]>,
    times: &[f64],
) -> Result<Trajectory> {
    if times.is_empty() {
        return Err(Error::invalid("empty time grid"));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) || !times[0].is_finite() {
        return Err(Error::invalid("time grid must be strictly increasing"));
    }
    let basis = u0.basis();
    if let Some(f) = forcing {
        if f.len() != times.len() {
            return Err(Error::invalid(format!(
                "{} forcing samples for {} times",
                f.len(),
                times.len()
            )));
        }
        if f.iter().any(|c| c.basis() != basis) {
            return Err(Error::BasisMismatch("forcing and initial data differ".into()));
        }
    }
    let lambdas: Vec<f64> = (0..basis.len()).map(|k| basis.eigenvalue(k)).collect();
    let mut states = Vec::with_capacity(times.len());
    states.push(u0.clone());
    for i in 1..times.len() {
        let dt = times[i] - times[i - 1];
        let prev = &states[i - 1];
        let mut next = prev.clone();
        for (k, out) in next.coeffs_mut().iter_mut().enumerate() {
            let (decay, phi1, psi) = cell_weights(lambdas[k], dt);
            let mut v = prev.coeffs()[k] * decay;
            if let Some(f) = forcing {
                let f0 = f[i - 1].coeffs()[k];
                let slope = (f[i].coeffs()[k] - f0) / dt;
                v += f0 * phi1 + slope * psi;
            }
            *out = v;
        }
        states.push(next);
    }
    Ok(Trajectory {
        times: times.to_vec(),
        states,
        forcing: forcing.map(|f| f.to_vec()),
    })
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[SpectralCoefficients] {
        &self.states
    }

    pub fn basis(&self) -> HermiteBasis {
        self.states[0].basis()
    }

    pub fn forcing_at(&self, i: usize) -> SpectralCoefficients {
        match &self.forcing {
            Some(f) => f[i].clone(),
            None => SpectralCoefficients::zeros(self.basis()),
        }
    }

    /// `H u(t_i)`.
    pub fn h_apply(&self, i: usize) -> SpectralCoefficients {
        let b = self.basis();
        self.states[i].map_diagonal(|k| b.eigenvalue(k))
    }

    /// `d/dt u(t_i) = f(t_i) - H u(t_i)`.
    pub fn time_derivative(&self, i: usize) -> SpectralCoefficients {
        &self.forcing_at(i) - &self.h_apply(i)
    }

    /// Largest per-mode `|u' + lambda u - f|` at the right end of each cell,
    /// with `u'` from the derivative of the cell solution, relative to the data scale.
    pub fn mode_residual(&self) -> f64 {
        let basis = self.basis();
        let mut worst = 0.0f64;
        for i in 1..self.times.len() {
            let dt = self.times[i] - self.times[i - 1];
            for k in 0..basis.len() {
                let lambda = basis.eigenvalue(k);
                let (decay, phi1, _) = cell_weights(lambda, dt);
                let u0 = self.states[i - 1].coeffs()[k];
                let (f0, f1) = match &self.forcing {
                    Some(f) => (f[i - 1].coeffs()[k], f[i].coeffs()[k]),
                    None => (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
                };
                let slope = (f1 - f0) / dt;
                let du = -lambda * decay * u0 + f0 * decay + slope * phi1;
                let u = self.states[i].coeffs()[k];
                let scale = 1.0 + (lambda * u0).norm() + f0.norm() + f1.norm();
                worst = worst.max((du + lambda * u - f1).norm() / scale);
            }
        }
        worst
    }

    /// Re-solves with every cell halved (forcing interpolated linearly) and
    /// returns the largest relative difference at the original times.
    pub fn refinement_audit(&self) -> Result<f64> {
        let n = self.times.len();
        let mut times = Vec::with_capacity(2 * n - 1);
        let mut forcing = self.forcing.as_ref().map(|_| Vec::with_capacity(2 * n - 1));
        for i in 0..n {
            if i > 0 {
                times.push(0.5 * (self.times[i - 1] + self.times[i]));
                if let Some(f) = forcing.as_mut() {
                    let mid = (&self.forcing_at(i - 1) + &self.forcing_at(i)).scale(0.5.into());
                    f.push(mid);
                }
            }
            times.push(self.times[i]);
            if let Some(f) = forcing.as_mut() {
                f.push(self.forcing_at(i));
            }
        }
        let fine = duhamel_solve(&self.states[0], forcing.as_deref(), &times)?;
        let mut worst = 0.0f64;
        for (i, s) in self.states.iter().enumerate() {
            let scale = s.norm().max(self.states[0].norm()).max(f64::MIN_POSITIVE);
            worst = worst.max(s.max_abs_diff(&fine.states[2 * i]) / scale);
        }
        Ok(worst)
    }
}

/// Time grid for maximal-regularity integrals: `0` followed by log-spaced nodes up to `t_max`.
pub fn graded_grid(t_first: f64, t_max: f64, nodes: usize) -> Vec<f64> {
    let mut g = vec![0.0];
    g.extend(log_space(t_first, t_max, nodes));
    g
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxRegParams {
    pub s: f64,
    pub p: Exponent,
    pub q: Exponent,
    /// Truncation time of the `L^q(0, inf)` integrals.
    pub t_max: f64,
    pub t_first: f64,
    pub nodes: usize,
}

impl MaxRegParams {
    pub fn new(s: f64, p: Exponent, q: Exponent) -> Self {
        Self {
            s,
            p,
            q,
            t_max: 10.0,
            t_first: 1e-6,
            nodes: 400,
        }
    }
}

/// The maximal-regularity ratio with its truncation diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaxReg {
    pub ratio: Ratio,
    pub derivative: f64,
    pub h_term: f64,
    pub initial: f64,
    pub forcing: f64,
    /// `e^{-d T}`: relative size of the omitted `(T, inf)` part of each integral.
    pub tail_bound: f64,
}

fn time_norm(times: &[f64], values: &[f64], q: Exponent) -> f64 {
    match q {
        Exponent::Infinity => values.iter().cloned().fold(0.0, f64::max),
        Exponent::Finite(q) => {
            let s: f64 = times
                .windows(2)
                .zip(values.windows(2))
                .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0].powf(q) + v[1].powf(q)))
                .sum();
            s.powf(1.0 / q)
        }
    }
}

/// `(||u'||_{L^q B^s_{p,q}} + ||H u||_{L^q B^s_{p,q}}) / (||u0||_{B^{s+2-2/q}_{p,q}} + ||f||_{L^q B^s_{p,q}})`
/// for the solution of `u' + H u = f`, `u(0) = u0`, on `[0, T]`.
pub fn max_reg_ratio(
    u0: &SpectralCoefficients,
    forcing: Option<&dyn Fn(f64) -> SpectralCoefficients>,
    partition: &DyadicPartition,
    params: &MaxRegParams,
    eval: &LpEvaluator,
) -> Result<MaxReg> {
    if !(params.t_max > params.t_first) || !(params.t_first > 0.0) || params.nodes < 4 {
        return Err(Error::invalid("max-reg grid needs 0 < t_first < t_max and >= 4 nodes"));
    }
    partition.check_basis(&u0.basis())?;
    let times = graded_grid(params.t_first, params.t_max, params.nodes);
    let samples: Option<Vec<SpectralCoefficients>> =
        forcing.map(|f| times.iter().map(|&t| f(t)).collect());
    let traj = duhamel_solve(u0, samples.as_deref(), &times)?;
    let (s, p, q) = (params.s, params.p, params.q);
    let mut flags = Flags::NONE;
    let mut besov = |c: &SpectralCoefficients, s: f64| -> Result<f64> {
        let b = BlockNorms::compute(c, partition, p, eval)?;
        flags |= b.flags();
        Ok(b.besov(s, q))
    };
    let mut du = Vec::with_capacity(times.len());
    let mut hu = Vec::with_capacity(times.len());
    let mut ff = Vec::with_capacity(times.len());
    for i in 0..times.len() {
        du.push(besov(&traj.time_derivative(i), s)?);
        hu.push(besov(&traj.h_apply(i), s)?);
        ff.push(match &samples {
            Some(f) => besov(&f[i], s)?,
            None => 0.0,
        });
    }
    let initial = besov(u0, s + 2.0 - 2.0 * q.recip())?;
    let derivative = time_norm(&times, &du, q);
    let h_term = time_norm(&times, &hu, q);
    let forcing_norm = time_norm(&times, &ff, q);
    let d = u0.basis().dim() as f64;
    Ok(MaxReg {
        ratio: Ratio::of(derivative + h_term, initial + forcing_norm).with(flags),
        derivative,
        h_term,
        initial,
        forcing: forcing_norm,
        tail_bound: (-d * params.t_max).exp(),
    })
}

/// Sanity helper: `e^{-tH} u0` sampled on `times`.
pub fn free_trajectory(u0: &SpectralCoefficients, times: &[f64]) -> Result<Vec<SpectralCoefficients>> {
    times.iter().map(|&t| heat_apply(t, u0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn uniform(t_end: f64, steps: usize) -> Vec<f64> {
        (0..=steps).map(|i| t_end * i as f64 / steps as f64).collect()
    }

    #[test]
    fn unforced_is_heat_flow() {
        let b = HermiteBasis::new(1, 32).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u0 = SpectralCoefficients::random(b, 32, &mut rng);
        let times = graded_grid(1e-4, 2.0, 50);
        let traj = duhamel_solve(&u0, None, &times).unwrap();
        let exact = free_trajectory(&u0, &times).unwrap();
        for (a, e) in traj.states().iter().zip(&exact) {
            assert!(a.max_abs_diff(e) < 1e-12);
        }
        assert!(traj.mode_residual() < 1e-12);
    }

    #[test]
    fn constant_forcing_on_ground_state() {
        let b = HermiteBasis::new(1, 4).unwrap();
        let h0 = SpectralCoefficients::unit(b, &[0]).unwrap();
        let times = uniform(3.0, 30);
        let f = vec![h0.clone(); times.len()];
        let traj = duhamel_solve(&SpectralCoefficients::zeros(b), Some(&f), &times).unwrap();
        for (t, u) in times.iter().zip(traj.states()) {
            assert!((u.coeffs()[0].re + (-t).exp_m1()).abs() < 1e-14);
        }
    }

    #[test]
    fn manufactured_solution() {
        let b = HermiteBasis::new(1, 8).unwrap();
        let h3 = SpectralCoefficients::unit(b, &[3]).unwrap();
        let times = uniform(2.0, 10_000);
        let f: Vec<_> = times.iter().map(|t| h3.scale((6.0 * (-t).exp()).into())).collect();
        let traj = duhamel_solve(&h3, Some(&f), &times).unwrap();
        let err = times
            .iter()
            .zip(traj.states())
            .map(|(t, u)| u.max_abs_diff(&h3.scale((-t).exp().into())))
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "{err}");
        assert!(traj.mode_residual() < 1e-12);
    }

    #[test]
    fn audit_and_rejections() {
        let b = HermiteBasis::new(2, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u0 = SpectralCoefficients::random(b, 12, &mut rng);
        let g = SpectralCoefficients::random(b, 12, &mut rng);
        let times = graded_grid(1e-3, 1.0, 40);
        let f: Vec<_> = times.iter().map(|t| g.scale((1.0 + t).into())).collect();
        let traj = duhamel_solve(&u0, Some(&f), &times).unwrap();
        assert!(traj.refinement_audit().unwrap() < 1e-12);
        assert!(traj.mode_residual() < 1e-12);
        assert!(duhamel_solve(&u0, None, &[0.0, 1.0, 0.5]).is_err());
        assert!(duhamel_solve(&u0, Some(&f[1..]), &times).is_err());
    }

    #[test]
    fn single_mode_max_reg() {
        let b = HermiteBasis::new(1, 16).unwrap();
        let p = DyadicPartition::for_basis(&b);
        let ev = LpEvaluator::default();
        let h0 = SpectralCoefficients::unit(b, &[0]).unwrap();
        let params = MaxRegParams::new(0.0, Exponent::TWO, Exponent::TWO);
        let m = max_reg_ratio(&h0, None, &p, &params, &ev).unwrap();
        // ||u'||_{L^2} = ||Hu||_{L^2} = w (int_0^T e^{-2t})^{1/2}, ||u0||_{B^1} = w
        let want = 2.0 * (0.5 * (1.0 - (-20.0f64).exp())).sqrt();
        assert!((m.ratio.value - want).abs() < 1e-3, "{}", m.ratio.value);
        assert!(m.tail_bound < 1e-4);
        let zero = max_reg_ratio(&SpectralCoefficients::zeros(b), None, &p, &params, &ev).unwrap();
        assert!(zero.ratio.value == 0.0 && zero.ratio.flags.contains(Flags::ZERO_DENOMINATOR));
    }
}
