//! Ising problems: topologies, quenched disorder, energies, order parameters,
//! overlap statistics, and the exhaustive ground-state oracle.

use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::rng::rng_from_seed;
use crate::CoreError;

/// A classical spin configuration, entries in {-1, +1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinConfig {
    spins: Vec<i8>,
}

impl SpinConfig {
    pub fn new(spins: Vec<i8>) -> Self {
        assert!(
            spins.iter().all(|&s| s == 1 || s == -1),
            "spins must be exactly +1 or -1"
        );
        Self { spins }
    }

    pub fn all_up(n: usize) -> Self {
        Self { spins: vec![1; n] }
    }

    /// Configuration from the low `n` bits of `mask` (bit set -> +1).
    pub fn from_bits(mask: u64, n: usize) -> Self {
        Self {
            spins: (0..n).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect(),
        }
    }

    /// Uniformly random configuration.
    pub fn random(n: usize, rng: &mut impl Rng) -> Self {
        Self {
            spins: (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    #[inline]
    pub fn get(&self, i: usize) -> i8 {
        self.spins[i]
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.spins[i] = -self.spins[i];
    }

    pub fn flipped_all(&self) -> Self {
        Self {
            spins: self.spins.iter().map(|&s| -s).collect(),
        }
    }

    pub fn magnetization(&self) -> f64 {
        self.spins.iter().map(|&s| s as f64).sum::<f64>() / self.spins.len() as f64
    }
}

/// Interaction topology. Square lattices are periodic; every lattice edge is
/// listed exactly once, so an L=2 ring direction contributes two bonds per
/// site pair (the standard periodic convention, 2L^2 bonds in total).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    CompleteGraph { n: usize },
    SquareLatticePeriodic { l: usize },
}

impl Topology {
    pub fn square_from_sites(n: usize) -> Result<Self, CoreError> {
        let l = (n as f64).sqrt().round() as usize;
        if l * l != n {
            return Err(CoreError::NotPerfectSquare(n));
        }
        Ok(Topology::SquareLatticePeriodic { l })
    }

    pub fn sites(&self) -> usize {
        match *self {
            Topology::CompleteGraph { n } => n,
            Topology::SquareLatticePeriodic { l } => l * l,
        }
    }

    /// Enumerate edges in a fixed canonical order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        match *self {
            Topology::CompleteGraph { n } => {
                let mut e = Vec::with_capacity(n * (n - 1) / 2);
                for i in 0..n {
                    for j in (i + 1)..n {
                        e.push((i, j));
                    }
                }
                e
            }
            Topology::SquareLatticePeriodic { l } => {
                let mut e = Vec::with_capacity(2 * l * l);
                let site = |x: usize, y: usize| (y % l) * l + (x % l);
                for y in 0..l {
                    for x in 0..l {
                        e.push((site(x, y), site(x + 1, y)));
                        e.push((site(x, y), site(x, y + 1)));
                    }
                }
                e
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Topology::CompleteGraph { .. } => "complete",
            Topology::SquareLatticePeriodic { .. } => "square-periodic",
        }
    }
}

/// Whether couplings were drawn with the SK extensivity scaling J/sqrt(N).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScaleConvention {
    Unscaled,
    SkNormalized,
}

/// Quenched disorder distribution for the couplings.
#[derive(Debug, Clone, Copy)]
pub enum DisorderKind {
    /// Zero-mean Gaussian with std J (EA) or J/sqrt(N) on the complete graph (SK).
    Gaussian { j: f64 },
    /// +J with probability p, -J otherwise.
    Binary { j: f64, p: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct DisorderModel {
    pub kind: DisorderKind,
    pub seed: u64,
}

/// An Ising cost function H = -sum_{i>j} J_ij S_i S_j - sum_i h_i S_i.
///
/// Bonds are stored once each in canonical topology order; `neighbors` is the
/// adjacency view used by the O(degree) local-field updates.
#[derive(Debug, Clone)]
pub struct IsingProblem {
    topology: Topology,
    bonds: Vec<(usize, usize, f64)>,
    fields: Vec<f64>,
    convention: ScaleConvention,
    neighbors: Vec<Vec<(usize, f64)>>,
}

impl IsingProblem {
    pub fn new(
        topology: Topology,
        couplings: Vec<f64>,
        fields: Vec<f64>,
        convention: ScaleConvention,
    ) -> Self {
        let edges = topology.edges();
        assert_eq!(couplings.len(), edges.len(), "one coupling per topology edge");
        assert_eq!(fields.len(), topology.sites(), "one field per site");
        let bonds: Vec<(usize, usize, f64)> = edges
            .into_iter()
            .zip(couplings)
            .map(|((i, j), v)| (i, j, v))
            .collect();
        let mut neighbors = vec![Vec::new(); topology.sites()];
        for &(i, j, v) in &bonds {
            neighbors[i].push((j, v));
            neighbors[j].push((i, v));
        }
        Self { topology, bonds, fields, convention, neighbors }
    }

    /// Single ferromagnetic or custom-coupling pair, mostly for tests.
    pub fn two_spin(j: f64) -> Self {
        Self::new(
            Topology::CompleteGraph { n: 2 },
            vec![j],
            vec![0.0, 0.0],
            ScaleConvention::Unscaled,
        )
    }

    pub fn uniform_complete(n: usize, j: f64) -> Self {
        let m = n * (n - 1) / 2;
        Self::new(
            Topology::CompleteGraph { n },
            vec![j; m],
            vec![0.0; n],
            ScaleConvention::Unscaled,
        )
    }

    pub fn n(&self) -> usize {
        self.topology.sites()
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn bonds(&self) -> &[(usize, usize, f64)] {
        &self.bonds
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn convention(&self) -> ScaleConvention {
        self.convention
    }

    pub fn has_fields(&self) -> bool {
        self.fields.iter().any(|&h| h != 0.0)
    }

    fn check_len(&self, config: &SpinConfig) -> Result<(), CoreError> {
        if config.len() != self.n() {
            return Err(CoreError::LengthMismatch { got: config.len(), want: self.n() });
        }
        Ok(())
    }

    /// H(config) = -sum_bonds J_ij S_i S_j - sum_i h_i S_i.
    pub fn energy(&self, config: &SpinConfig) -> Result<f64, CoreError> {
        self.check_len(config)?;
        Ok(self.energy_unchecked(config.spins()))
    }

    pub(crate) fn energy_unchecked(&self, s: &[i8]) -> f64 {
        let mut e = 0.0;
        for &(i, j, v) in &self.bonds {
            e -= v * (s[i] as f64) * (s[j] as f64);
        }
        for (i, &h) in self.fields.iter().enumerate() {
            e -= h * s[i] as f64;
        }
        e
    }

    /// Local field L_i = sum_j J_ij S_j + h_i.
    #[inline]
    pub fn local_field(&self, s: &[i8], i: usize) -> f64 {
        let mut l = self.fields[i];
        for &(j, v) in &self.neighbors[i] {
            l += v * s[j] as f64;
        }
        l
    }

    /// Energy change for flipping spin i: 2 S_i (sum_j J_ij S_j + h_i).
    #[inline]
    pub fn flip_delta(&self, s: &[i8], i: usize) -> f64 {
        2.0 * s[i] as f64 * self.local_field(s, i)
    }

    /// Plain-text serialization, exact-decimal round trip.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let (name, param) = match self.topology {
            Topology::CompleteGraph { n } => ("complete", n),
            Topology::SquareLatticePeriodic { l } => ("square-periodic", l),
        };
        writeln!(out, "topology {name} {param}").unwrap();
        let conv = match self.convention {
            ScaleConvention::Unscaled => "unscaled",
            ScaleConvention::SkNormalized => "sk-normalized",
        };
        writeln!(out, "convention {conv}").unwrap();
        writeln!(out, "bonds {}", self.bonds.len()).unwrap();
        for &(i, j, v) in &self.bonds {
            writeln!(out, "{i} {j} {v}").unwrap();
        }
        writeln!(out, "fields {}", self.fields.len()).unwrap();
        for (i, &h) in self.fields.iter().enumerate() {
            writeln!(out, "{i} {h}").unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, CoreError> {
        let bad = |m: &str| CoreError::Parse(m.to_string());
        let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
        let topo_line = lines.next().ok_or_else(|| bad("missing topology line"))?;
        let mut it = topo_line.split_whitespace();
        if it.next() != Some("topology") {
            return Err(bad("expected `topology`"));
        }
        let kind = it.next().ok_or_else(|| bad("missing topology kind"))?;
        let param: usize = it
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad("bad topology parameter"))?;
        let topology = match kind {
            "complete" => Topology::CompleteGraph { n: param },
            "square-periodic" => Topology::SquareLatticePeriodic { l: param },
            other => return Err(bad(&format!("unknown topology `{other}`"))),
        };
        let conv_line = lines.next().ok_or_else(|| bad("missing convention line"))?;
        let convention = match conv_line.split_whitespace().nth(1) {
            Some("unscaled") => ScaleConvention::Unscaled,
            Some("sk-normalized") => ScaleConvention::SkNormalized,
            _ => return Err(bad("bad convention line")),
        };
        let nb: usize = lines
            .next()
            .and_then(|l| l.split_whitespace().nth(1))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad("bad bonds header"))?;
        let edges = topology.edges();
        if nb != edges.len() {
            return Err(bad(&format!("expected {} bonds, header says {nb}", edges.len())));
        }
        let mut couplings = Vec::with_capacity(nb);
        for (k, (ei, ej)) in edges.iter().enumerate() {
            let line = lines.next().ok_or_else(|| bad("truncated bond list"))?;
            let mut f = line.split_whitespace();
            let i: usize = f.next().and_then(|v| v.parse().ok()).ok_or_else(|| bad("bad bond"))?;
            let j: usize = f.next().and_then(|v| v.parse().ok()).ok_or_else(|| bad("bad bond"))?;
            let v: f64 = f.next().and_then(|v| v.parse().ok()).ok_or_else(|| bad("bad bond"))?;
            if (i, j) != (*ei, *ej) {
                return Err(bad(&format!("bond {k} out of canonical order")));
            }
            couplings.push(v);
        }
        let nf: usize = lines
            .next()
            .and_then(|l| l.split_whitespace().nth(1))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad("bad fields header"))?;
        if nf != topology.sites() {
            return Err(bad("field count does not match topology"));
        }
        let mut fields = Vec::with_capacity(nf);
        for _ in 0..nf {
            let line = lines.next().ok_or_else(|| bad("truncated field list"))?;
            let h: f64 = line
                .split_whitespace()
                .nth(1)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| bad("bad field"))?;
            fields.push(h);
        }
        Ok(Self::new(topology, couplings, fields, convention))
    }
}

/// Draw a disordered instance. Deterministic for a fixed model seed: bonds are
/// filled in canonical edge order, then fields are left at zero (use
/// [`sample_disorder_with_fields`] for RFIM-style problems).
///
/// Gaussian couplings on the complete graph get the SK scaling J/sqrt(N);
/// binary couplings are plain +-J on every topology (the p=1 complete-graph
/// case must give literal +J bonds).
pub fn sample_disorder(model: DisorderModel, topology: Topology) -> Result<Arc<IsingProblem>, CoreError> {
    sample_disorder_with_fields(model, topology, None)
}

/// Same as [`sample_disorder`], optionally adding on-site random fields +-h
/// with equal probability (the random-field Ising model of the lattice case).
pub fn sample_disorder_with_fields(
    model: DisorderModel,
    topology: Topology,
    field_magnitude: Option<f64>,
) -> Result<Arc<IsingProblem>, CoreError> {
    let n = topology.sites();
    assert!(n >= 2, "need at least two sites");
    let mut rng = rng_from_seed(model.seed);
    let edges = topology.edges();
    let (couplings, convention) = match model.kind {
        DisorderKind::Gaussian { j } => {
            let sigma = match topology {
                Topology::CompleteGraph { n } => j / (n as f64).sqrt(),
                Topology::SquareLatticePeriodic { .. } => j,
            };
            let c = edges
                .iter()
                .map(|_| sigma * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let conv = match topology {
                Topology::CompleteGraph { .. } => ScaleConvention::SkNormalized,
                _ => ScaleConvention::Unscaled,
            };
            (c, conv)
        }
        DisorderKind::Binary { j, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(CoreError::InvalidProbability(p));
            }
            let c = edges
                .iter()
                .map(|_| if rng.gen::<f64>() < p { j } else { -j })
                .collect();
            (c, ScaleConvention::Unscaled)
        }
    };
    let fields = match field_magnitude {
        None => vec![0.0; n],
        Some(h) => (0..n).map(|_| if rng.gen::<bool>() { h } else { -h }).collect(),
    };
    Ok(Arc::new(IsingProblem::new(topology, couplings, fields, convention)))
}

/// Site-wise replica overlap q = (1/N) sum_i a_i b_i.
pub fn overlap(a: &SpinConfig, b: &SpinConfig) -> Result<f64, CoreError> {
    if a.len() != b.len() {
        return Err(CoreError::LengthMismatch { got: b.len(), want: a.len() });
    }
    let s: i64 = a
        .spins()
        .iter()
        .zip(b.spins())
        .map(|(&x, &y)| (x as i64) * (y as i64))
        .sum();
    Ok(s as f64 / a.len() as f64)
}

/// Edwards-Anderson order parameter q = (1/N) sum_i <S_i>^2.
pub fn ea_order_parameter(site_magnetizations: &[f64]) -> Result<f64, CoreError> {
    if site_magnetizations.is_empty() {
        return Err(CoreError::TooFew { got: 0, want: 1 });
    }
    debug_assert!(site_magnetizations.iter().all(|m| m.abs() <= 1.0 + 1e-12));
    let n = site_magnetizations.len() as f64;
    Ok(site_magnetizations.iter().map(|m| m * m).sum::<f64>() / n)
}

/// Histogram of pairwise replica overlaps over q in [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapHistogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub pairs: u64,
}

impl OverlapHistogram {
    /// Probability density estimate P(q) per bin.
    pub fn density(&self) -> Vec<f64> {
        let w: Vec<f64> = self.edges.windows(2).map(|e| e[1] - e[0]).collect();
        self.counts
            .iter()
            .zip(w)
            .map(|(&c, w)| c as f64 / (self.pairs as f64 * w))
            .collect()
    }
}

/// Uniform-weight histogram over all unordered replica pairs.
///
/// Pairs are weighted equally rather than by e^{-(F_mu+F_nu)/T}; replicas
/// produced by independent equal-protocol runs already carry their thermal
/// weights through the sampling itself.
pub fn overlap_histogram(replicas: &[SpinConfig], bins: usize) -> Result<OverlapHistogram, CoreError> {
    if replicas.len() < 2 {
        return Err(CoreError::TooFew { got: replicas.len(), want: 2 });
    }
    assert!(bins >= 1);
    let edges: Vec<f64> = (0..=bins).map(|k| -1.0 + 2.0 * k as f64 / bins as f64).collect();
    let mut counts = vec![0u64; bins];
    let mut pairs = 0u64;
    for (a_idx, a) in replicas.iter().enumerate() {
        for b in &replicas[a_idx + 1..] {
            let q = overlap(a, b)?;
            // q = 1 goes in the last bin; all other upper edges are exclusive
            let mut bin = ((q + 1.0) / 2.0 * bins as f64).floor() as usize;
            if bin >= bins {
                bin = bins - 1;
            }
            counts[bin] += 1;
            pairs += 1;
        }
    }
    Ok(OverlapHistogram { edges, counts, pairs })
}

const BRUTE_FORCE_LIMIT: usize = 24;

/// Exhaustive ground-state oracle: exact minimum energy and every attaining
/// configuration. For h=0 problems the result comes in global-flip pairs.
///
/// Gray-code enumeration with incremental updates, then candidates within a
/// rounding band are re-summed exactly so ties are decided on full-precision
/// energies.
pub fn brute_force_ground_state(
    problem: &IsingProblem,
) -> Result<(f64, Vec<SpinConfig>), CoreError> {
    let n = problem.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(CoreError::TooLarge { n, limit: BRUTE_FORCE_LIMIT });
    }
    let mut spins = vec![-1i8; n]; // Gray code starts at mask 0
    let mut e = problem.energy_unchecked(&spins);
    let mut best = e;
    let mut candidates: Vec<u64> = vec![0];
    let band = 1e-9 * (1.0 + best.abs());
    for mask in 1u64..(1u64 << n) {
        let bit = mask.trailing_zeros() as usize;
        e += problem.flip_delta(&spins, bit);
        spins[bit] = -spins[bit];
        let gray = mask ^ (mask >> 1);
        if e < best - band {
            best = e;
            candidates.clear();
            candidates.push(gray);
        } else if e <= best + band {
            candidates.push(gray);
        }
    }
    // exact re-evaluation of the shortlisted configs
    let mut e0 = f64::INFINITY;
    let mut exact: Vec<(f64, u64)> = Vec::with_capacity(candidates.len());
    for &gray in &candidates {
        let cfg = SpinConfig::from_bits(gray, n);
        let ee = problem.energy_unchecked(cfg.spins());
        exact.push((ee, gray));
        if ee < e0 {
            e0 = ee;
        }
    }
    let mut optima: Vec<SpinConfig> = exact
        .into_iter()
        .filter(|&(ee, _)| ee == e0)
        .map(|(_, gray)| SpinConfig::from_bits(gray, n))
        .collect();
    optima.sort_by_key(|c| c.spins().iter().rev().fold(0u64, |m, &s| m << 1 | (s == 1) as u64));
    optima.dedup();
    Ok((e0, optima))
}
