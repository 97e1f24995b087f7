//! Path-integral Monte Carlo quantum annealing on the Suzuki-Trotter lattice.
//!
//! The M-th Trotter approximation maps the transverse-field Ising model at
//! temperature T onto M coupled classical replicas with dimensionless action
//!
//!   E_eff = - sum_k sum_{i>j} K_ij S_ik S_jk - K sum_i sum_k S_ik S_i,k+1,
//!
//!   K_ij = J_ij / (M T),   K = (1/2) ln coth(Gamma / (M T)),
//!
//! periodic in k (slice M+1 = slice 1, every (i,k) link counted once, so an
//! M=2 system carries two inter-slice links per site). Metropolis runs at
//! unit effective temperature since the couplings already absorb T.

use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng;

use crate::anneal::metropolis_accept;
use crate::rng::{rng_from_seed, RunRng};
use crate::schedule::{artanh, Schedule};
use crate::spin::{IsingProblem, SpinConfig};
use crate::CoreError;

/// (K_ij, K) for one bond: K_ij = J_ij/(MT), K = (1/2) ln coth(Gamma/(MT)).
/// K diverges as Gamma -> 0+, so Gamma = 0 is rejected; callers clamp to a
/// floor instead.
pub fn trotter_couplings(j_ij: f64, gamma: f64, temp: f64, m: usize) -> Result<(f64, f64), CoreError> {
    assert!(temp > 0.0 && m >= 2);
    if gamma <= 0.0 {
        return Err(CoreError::GammaZero);
    }
    let k_ij = j_ij / (m as f64 * temp);
    Ok((k_ij, inter_slice_coupling(gamma, temp, m)))
}

/// K(Gamma) alone; requires Gamma > 0.
pub fn inter_slice_coupling(gamma: f64, temp: f64, m: usize) -> f64 {
    let x = gamma / (m as f64 * temp);
    // ln coth x = -ln tanh x, stable for both tails
    -0.5 * x.tanh().ln()
}

/// Morita-Nishimori transverse-field schedule
/// Gamma(t) = M T artanh((t+2)^(-2/(R L))); satisfies the strong-ergodicity
/// bound with equality by construction.
pub fn mn_schedule(t: f64, m: usize, temp: f64, r: f64, l: f64) -> f64 {
    assert!(r * l > 0.0);
    m as f64 * temp * artanh((t + 2.0).powf(-2.0 / (r * l)))
}

/// The (d+1)-dimensional replica system for one annealing run.
#[derive(Debug, Clone)]
pub struct TrotterLattice {
    problem: Arc<IsingProblem>,
    m: usize,
    temp: f64,
    gamma: f64,
    k_inter: f64,
    /// slice-major spins: index k*n + i
    spins: Vec<i8>,
    /// classical energy of each slice, kept incrementally
    slice_energy: Vec<f64>,
}

impl TrotterLattice {
    pub fn new(problem: Arc<IsingProblem>, m: usize, temp: f64, gamma: f64, rng: &mut RunRng) -> Self {
        assert!(m >= 2, "need at least two Trotter slices");
        let n = problem.n();
        let spins: Vec<i8> = (0..m * n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
        let slice_energy = (0..m)
            .map(|k| problem.energy_unchecked(&spins[k * n..(k + 1) * n]))
            .collect();
        let k_inter = inter_slice_coupling(gamma, temp, m);
        Self { problem, m, temp, gamma, k_inter, spins, slice_energy }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn k_inter(&self) -> f64 {
        self.k_inter
    }

    pub fn slice(&self, k: usize) -> &[i8] {
        let n = self.problem.n();
        &self.spins[k * n..(k + 1) * n]
    }

    pub fn slice_config(&self, k: usize) -> SpinConfig {
        SpinConfig::new(self.slice(k).to_vec())
    }

    pub fn slice_energies(&self) -> &[f64] {
        &self.slice_energy
    }

    /// Refresh the inter-slice coupling after a schedule step.
    pub fn set_gamma(&mut self, gamma: f64) {
        assert!(gamma > 0.0, "clamp the schedule to a positive floor");
        self.gamma = gamma;
        self.k_inter = inter_slice_coupling(gamma, self.temp, self.m);
    }

    /// Dimensionless effective energy of the full replica system.
    pub fn effective_energy(&self) -> f64 {
        let n = self.problem.n();
        let mt = self.m as f64 * self.temp;
        let mut intra = 0.0;
        for k in 0..self.m {
            intra += self.slice_energy[k];
        }
        let mut inter = 0.0;
        for i in 0..n {
            for k in 0..self.m {
                let kp = (k + 1) % self.m;
                inter += (self.spins[k * n + i] * self.spins[kp * n + i]) as f64;
            }
        }
        intra / mt - self.k_inter * inter
    }

    /// Effective-energy change for flipping (site, slice).
    #[inline]
    fn flip_delta_eff(&self, site: usize, k: usize) -> (f64, f64) {
        let n = self.problem.n();
        let s = self.slice(k);
        let delta_cl = self.problem.flip_delta(s, site);
        let km = (k + self.m - 1) % self.m;
        let kp = (k + 1) % self.m;
        let trotter_neighbors =
            (self.spins[km * n + site] + self.spins[kp * n + site]) as f64;
        let delta_inter =
            2.0 * self.k_inter * self.spins[k * n + site] as f64 * trotter_neighbors;
        (delta_cl, delta_cl / (self.m as f64 * self.temp) + delta_inter)
    }

    /// One Metropolis pass over every (site, slice) pair, sequential order.
    /// Returns the number of accepted flips.
    pub fn sweep(&mut self, rng: &mut RunRng) -> usize {
        let n = self.problem.n();
        let mut accepted = 0;
        for k in 0..self.m {
            for site in 0..n {
                let (delta_cl, delta_eff) = self.flip_delta_eff(site, k);
                if metropolis_accept(delta_eff, 1.0, rng.gen::<f64>()) {
                    self.spins[k * n + site] = -self.spins[k * n + site];
                    self.slice_energy[k] += delta_cl;
                    accepted += 1;
                }
            }
        }
        accepted
    }

    /// Metropolis pass visiting the (site, slice) pairs in a freshly
    /// shuffled order. Sequential order is fine for disordered problems, but
    /// in the free-spin limit (all intra-slice deltas exactly zero) it rides
    /// a deterministic flip wave along the Trotter ring that conserves the
    /// link pattern instead of relaxing it; equilibrium validation uses this
    /// shuffled variant.
    pub fn sweep_random_order(&mut self, order: &mut Vec<usize>, rng: &mut RunRng) -> usize {
        let n = self.problem.n();
        let total = n * self.m;
        if order.len() != total {
            order.clear();
            order.extend(0..total);
        }
        for i in (1..total).rev() {
            let j = rng.gen_range(0..=i);
            order.swap(i, j);
        }
        let mut accepted = 0;
        for idx in 0..total {
            let (k, site) = (order[idx] / n, order[idx] % n);
            let (delta_cl, delta_eff) = self.flip_delta_eff(site, k);
            if metropolis_accept(delta_eff, 1.0, rng.gen::<f64>()) {
                self.spins[k * n + site] = -self.spins[k * n + site];
                self.slice_energy[k] += delta_cl;
                accepted += 1;
            }
        }
        accepted
    }

    /// Greedy thermal-only polish: one T=0 descent pass per slice on the
    /// classical energy, ignoring the kinetic coupling.
    pub fn polish_sweep(&mut self) {
        let n = self.problem.n();
        for k in 0..self.m {
            for site in 0..n {
                let delta_cl = self.problem.flip_delta(self.slice(k), site);
                if delta_cl <= 0.0 {
                    self.spins[k * n + site] = -self.spins[k * n + site];
                    self.slice_energy[k] += delta_cl;
                }
            }
        }
    }

    /// Index and classical energy of the lowest slice.
    pub fn best_slice(&self) -> (usize, f64) {
        let mut arg = 0;
        let mut best = self.slice_energy[0];
        for (k, &e) in self.slice_energy.iter().enumerate().skip(1) {
            if e < best {
                best = e;
                arg = k;
            }
        }
        (arg, best)
    }

    /// Mean inter-slice alignment (1/NM) sum S_ik S_i,k+1.
    pub fn inter_slice_alignment(&self) -> f64 {
        let n = self.problem.n();
        let mut acc = 0i64;
        for i in 0..n {
            for k in 0..self.m {
                let kp = (k + 1) % self.m;
                acc += (self.spins[k * n + i] * self.spins[kp * n + i]) as i64;
            }
        }
        acc as f64 / (n * self.m) as f64
    }
}

/// Parameters for one PIMC-QA run.
#[derive(Debug, Clone)]
pub struct QaParams {
    pub m: usize,
    /// Simulation temperature; M*T should sit near 1 (hbar = k_B = 1).
    pub temp: f64,
    /// Transverse-field schedule, clamped below at `gamma_floor`.
    pub schedule: Schedule,
    pub sweeps: u64,
    pub gamma_floor: f64,
    pub trace_stride: u64,
}

impl QaParams {
    pub fn new(m: usize, temp: f64, schedule: Schedule, sweeps: u64) -> Self {
        Self { m, temp, schedule, sweeps, gamma_floor: 1e-8, trace_stride: 100 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PimcTraceRow {
    pub t: f64,
    pub gamma: f64,
    pub k_inter: f64,
    pub energy: f64,
    pub magnetization: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PimcRunRecord {
    pub seed: u64,
    pub schedule: String,
    pub m: usize,
    pub temp: f64,
    pub trace: Vec<PimcTraceRow>,
    /// Classical energy of the best slice after the final polish.
    pub best_slice_energy: f64,
    /// The best slice, replicated as the run's final configuration.
    pub final_config: SpinConfig,
    pub sweeps: u64,
}

impl PimcRunRecord {
    /// Columnar text dump: `t gamma k energy magnetization`.
    pub fn trace_text(&self) -> String {
        let mut out = String::from("# t gamma k energy magnetization\n");
        for r in &self.trace {
            writeln!(out, "{} {} {} {} {}", r.t, r.gamma, r.k_inter, r.energy, r.magnetization)
                .unwrap();
        }
        out
    }
}

/// PIMC quantum anneal: Metropolis over all (site, slice) pairs while the
/// transverse field follows the schedule down to the floor, then a greedy
/// thermal polish; reports the best slice.
pub fn pimc_anneal(problem: &Arc<IsingProblem>, params: &QaParams, seed: u64) -> PimcRunRecord {
    let mut rng = rng_from_seed(seed);
    let gamma0 = params.schedule.value(0.0).max(params.gamma_floor);
    let mut lattice = TrotterLattice::new(problem.clone(), params.m, params.temp, gamma0, &mut rng);
    let mut trace = Vec::new();
    for sweep in 0..params.sweeps {
        let gamma = params.schedule.value(sweep as f64).max(params.gamma_floor);
        lattice.set_gamma(gamma);
        lattice.sweep(&mut rng);
        if sweep % params.trace_stride == 0 || sweep + 1 == params.sweeps {
            let (arg, best) = lattice.best_slice();
            trace.push(PimcTraceRow {
                t: sweep as f64,
                gamma,
                k_inter: lattice.k_inter(),
                energy: best,
                magnetization: lattice.slice_config(arg).magnetization(),
            });
        }
    }
    lattice.polish_sweep();
    let (arg, best) = lattice.best_slice();
    let final_config = lattice.slice_config(arg);
    debug_assert_eq!(problem.energy(&final_config).unwrap(), best);
    PimcRunRecord {
        seed,
        schedule: params.schedule.descriptor(),
        m: params.m,
        temp: params.temp,
        trace,
        best_slice_energy: best,
        final_config,
        sweeps: params.sweeps,
    }
}

/// Monte Carlo mean with a binned standard error (32 bins), which absorbs
/// autocorrelation along the chain.
fn binned_stats(samples: &[f64]) -> (f64, f64) {
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let nbins = 32.min(samples.len());
    let per = samples.len() / nbins;
    let bins: Vec<f64> = (0..nbins)
        .map(|b| samples[b * per..(b + 1) * per].iter().sum::<f64>() / per as f64)
        .collect();
    let bm = bins.iter().sum::<f64>() / nbins as f64;
    let var = bins.iter().map(|x| (x - bm) * (x - bm)).sum::<f64>() / (nbins as f64 - 1.0);
    (mean, (var / nbins as f64).sqrt())
}

/// Fixed-parameter equilibrium estimates from the Trotter lattice.
#[derive(Debug, Clone)]
pub struct EquilibriumEstimate {
    /// <H_C>: per-slice classical energy averaged over slices and sweeps.
    pub energy: (f64, f64),
    /// <sum_i S_i^x> from the link estimator.
    pub transverse_magnetization: (f64, f64),
    /// <S_ik S_ik+1> mean inter-slice alignment.
    pub inter_slice_correlation: (f64, f64),
    /// Per-slice mean classical energies (slice-symmetry diagnostics).
    pub per_slice_energy: Vec<(f64, f64)>,
    pub measured_sweeps: u64,
}

/// Sample the Suzuki-Trotter equilibrium at fixed (Gamma, T, M). The first
/// fifth of the sweeps is discarded as burn-in.
///
/// The transverse term uses the standard link estimator: a satisfied link
/// contributes tanh(Gamma/MT), a broken one coth(Gamma/MT).
pub fn pimc_equilibrium_estimate(
    problem: &Arc<IsingProblem>,
    gamma: f64,
    temp: f64,
    m: usize,
    sweeps: u64,
    seed: u64,
) -> Result<EquilibriumEstimate, CoreError> {
    if gamma <= 0.0 {
        return Err(CoreError::GammaZero);
    }
    let n = problem.n();
    let mut rng = rng_from_seed(seed);
    let mut lattice = TrotterLattice::new(problem.clone(), m, temp, gamma, &mut rng);
    let burn = sweeps / 5;
    let x = gamma / (m as f64 * temp);
    let (th, cth) = (x.tanh(), 1.0 / x.tanh());
    let mut e_samples = Vec::new();
    let mut x_samples = Vec::new();
    let mut corr_samples = Vec::new();
    let mut slice_samples: Vec<Vec<f64>> = vec![Vec::new(); m];
    let mut order = Vec::new();
    for sweep in 0..sweeps {
        lattice.sweep_random_order(&mut order, &mut rng);
        if sweep < burn {
            continue;
        }
        let es = lattice.slice_energies();
        e_samples.push(es.iter().sum::<f64>() / m as f64);
        for (k, &e) in es.iter().enumerate() {
            slice_samples[k].push(e);
        }
        let mut xacc = 0.0;
        let mut cacc = 0i64;
        for i in 0..n {
            for k in 0..m {
                let kp = (k + 1) % m;
                let aligned = lattice.spins[k * n + i] == lattice.spins[kp * n + i];
                xacc += if aligned { th } else { cth };
                cacc += if aligned { 1 } else { -1 };
            }
        }
        x_samples.push(xacc / m as f64);
        corr_samples.push(cacc as f64 / (n * m) as f64);
    }
    Ok(EquilibriumEstimate {
        energy: binned_stats(&e_samples),
        transverse_magnetization: binned_stats(&x_samples),
        inter_slice_correlation: binned_stats(&corr_samples),
        per_slice_energy: slice_samples.iter().map(|s| binned_stats(s)).collect(),
        measured_sweeps: sweeps - burn,
    })
}
