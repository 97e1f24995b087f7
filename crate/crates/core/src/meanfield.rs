//! Mean-field self-consistency for the transverse-field SK model.
//!
//! The order parameter solves
//!   q = Int Dr  [hz^2 / (hz^2 + G^2)] tanh^2( sqrt(hz^2 + G^2) / T ),
//! with hz = J sqrt(q) r and Dr the unit Gaussian measure. At G = 0 the
//! bracket is 1 and the classical SK equation is recovered. Setting q -> 0
//! gives the phase boundary G/J = tanh(G/T).

use crate::CoreError;

/// Gauss-Hermite nodes and weights for Int_-inf^inf e^{-x^2} f(x) dx.
///
/// Roots of the orthonormal Hermite polynomial by safeguarded Newton,
/// marching inward from the outermost root with the semiclassical spacing
/// pi / sqrt(2n+1 - z^2) as the next guess. Machine precision up to the few
/// hundred nodes used here.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let nf = n as f64;
    let sqrt_pi_inv4 = std::f64::consts::PI.powf(-0.25);
    // orthonormal Hermite at degree n and its derivative sqrt(2n) h_{n-1}
    let eval = |z: f64| -> (f64, f64) {
        let mut p1 = sqrt_pi_inv4;
        let mut p2 = 0.0;
        for j in 0..n {
            let p3 = p2;
            p2 = p1;
            p1 = z * (2.0 / (j as f64 + 1.0)).sqrt() * p2
                - (j as f64 / (j as f64 + 1.0)).sqrt() * p3;
        }
        (p1, (2.0 * nf).sqrt() * p2)
    };
    let spacing = |z: f64| std::f64::consts::PI / (2.0 * nf + 1.0 - z * z).max(1.0).sqrt();
    let m = n.div_ceil(2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..m {
        let mut z;
        if n % 2 == 1 && i == m - 1 {
            z = 0.0; // odd n has an exact center root
        } else {
            // bracket the root: consecutive roots of h_n alternate sign, so
            // march down from the previous root (or from above the largest)
            // until the sign flips, clamping at zero
            let mut hi = if i == 0 {
                (2.0 * nf + 1.0).sqrt()
            } else {
                nodes[i - 1] - 1e-3 * spacing(nodes[i - 1])
            };
            let shi = eval(hi).0.signum();
            // march down in fractional-spacing steps until the sign flips;
            // the flip brackets exactly one root
            let mut lo = (hi - 0.2 * spacing(hi).min(8.0)).max(0.0);
            while eval(lo).0.signum() == shi {
                assert!(lo > 0.0, "sign change must occur in (0, previous root)");
                hi = lo;
                lo = (lo - 0.2 * spacing(lo).min(8.0)).max(0.0);
            }
            let (mut lo, mut hi) = (lo, hi);
            for _ in 0..90 {
                let mid = 0.5 * (lo + hi);
                if eval(mid).0.signum() == shi {
                    hi = mid;
                } else {
                    lo = mid;
                }
                if hi - lo < 1e-16 * (1.0 + hi) {
                    break;
                }
            }
            z = 0.5 * (lo + hi);
            // two Newton polish steps for the last bits
            for _ in 0..2 {
                let (p, dp) = eval(z);
                z -= p / dp;
            }
        }
        let (_, dp) = eval(z);
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (dp * dp);
        weights[n - 1 - i] = weights[i];
    }
    // ascending order
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

const GH_NODES: usize = 200;
const DAMPING: f64 = 0.5;
const MAX_ITER: usize = 100_000;
const FP_TOL: f64 = 1e-10;

fn ordering_term(hz: f64, gamma: f64, t: f64) -> f64 {
    if gamma == 0.0 {
        let th = (hz.abs() / t).tanh();
        return th * th;
    }
    let h2 = hz * hz + gamma * gamma;
    let h = h2.sqrt();
    let th = (h / t).tanh();
    (hz * hz / h2) * th * th
}

fn gaussian_average_q(q: f64, t: f64, gamma: f64, j: f64, nodes: &[f64], weights: &[f64]) -> f64 {
    // Int dr e^{-r^2/2}/sqrt(2 pi) g(J sqrt(q) r): substitute r = sqrt(2) x
    let sq = q.max(0.0).sqrt();
    let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();
    let mut acc = 0.0;
    for (&x, &w) in nodes.iter().zip(weights) {
        let hz = j * sq * std::f64::consts::SQRT_2 * x;
        acc += w * ordering_term(hz, gamma, t);
    }
    acc * inv_sqrt_pi
}

/// Self-consistent spin-glass order parameter q(T, Gamma) by damped fixed
/// point, absolute tolerance 1e-10. Outside the phase boundary the iteration
/// decays to q = 0.
pub fn mf_order_parameter(t: f64, gamma: f64, j: f64) -> Result<f64, CoreError> {
    assert!(t > 0.0 && gamma >= 0.0 && j > 0.0);
    let (nodes, weights) = gauss_hermite(GH_NODES);
    let mut q = 1.0;
    for _ in 0..MAX_ITER {
        let f = gaussian_average_q(q, t, gamma, j, &nodes, &weights);
        let next = (1.0 - DAMPING) * q + DAMPING * f;
        let diff = (next - q).abs();
        q = next;
        if diff < FP_TOL {
            // kill the slow tail of a decay toward the trivial fixed point
            return Ok(if q < 1e-7 { 0.0 } else { q });
        }
    }
    Err(CoreError::NonConvergence(MAX_ITER))
}

// contract is 1e-9; run tighter so the ill-conditioned inverse near the
// saturated low-T corner of the boundary stays invertible
const BISECT_TOL: f64 = 1e-13;

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64, tol: f64) -> f64 {
    let flo = f(lo);
    debug_assert!(flo * f(hi) <= 0.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) * flo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Critical transverse field at temperature T: the nontrivial root of
/// Gamma/J = tanh(Gamma/T). Returns None for T >= J (para phase everywhere,
/// only the degenerate root Gamma = 0 exists).
pub fn phase_boundary(t: f64, j: f64) -> Option<f64> {
    assert!(t > 0.0 && j > 0.0);
    if t >= j {
        return None;
    }
    // g(G) = G/J - tanh(G/T): negative just above 0, positive at G = J
    let g = |x: f64| x / j - (x / t).tanh();
    Some(bisect(1e-14, j, g, BISECT_TOL))
}

/// Critical temperature at transverse field Gamma, same equation solved for T.
/// None for Gamma >= J.
pub fn phase_boundary_inverse(gamma: f64, j: f64) -> Option<f64> {
    assert!(gamma > 0.0 && j > 0.0);
    if gamma >= j {
        return None;
    }
    // g(T) = Gamma/J - tanh(Gamma/T) is increasing in T: < 0 at T->0, -> Gamma/J > 0
    let g = |t: f64| gamma / j - (gamma / t).tanh();
    Some(bisect(1e-14, j, g, BISECT_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_hermite_moments() {
        for n in [20, 64, 200] {
            let (x, w) = gauss_hermite(n);
            let sqrt_pi = std::f64::consts::PI.sqrt();
            let m0: f64 = w.iter().sum();
            let m2: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
            assert!((m0 - sqrt_pi).abs() < 1e-12, "n={n}: m0={m0}");
            assert!((m2 - sqrt_pi / 2.0).abs() < 1e-12, "n={n}: m2={m2}");
        }
    }

    #[test]
    fn gauss_hermite_small_known_nodes() {
        // n=2: nodes +-1/sqrt(2), weights sqrt(pi)/2
        let (x, w) = gauss_hermite(2);
        assert!((x[0] + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        assert!((x[1] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
        assert!((w[0] - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn q_approaches_one_at_low_t_zero_gamma() {
        let q = mf_order_parameter(1e-3, 0.0, 1.0).unwrap();
        assert!(q > 0.995, "q={q}");
    }

    #[test]
    fn q_zero_outside_boundary() {
        // boundary at T=0.5: Gc = solve; just outside -> q = 0
        let gc = phase_boundary(0.5, 1.0).unwrap();
        assert_eq!(mf_order_parameter(0.5, gc * 1.05, 1.0).unwrap(), 0.0);
        // also purely thermal: T > Tc = J
        assert_eq!(mf_order_parameter(1.1, 0.0, 1.0).unwrap(), 0.0);
    }

    /// Independent oracle for the classical SK value: adaptive Simpson for the
    /// Gaussian average plus bisection on q - F(q), no Gauss-Hermite, no fixed
    /// point.
    fn classical_q_oracle(t: f64, j: f64) -> f64 {
        fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
            let h = (b - a) / n as f64;
            let mut s = f(a) + f(b);
            for k in 1..n {
                let x = a + k as f64 * h;
                s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(x);
            }
            s * h / 3.0
        }
        let avg = |q: f64| {
            let g = |r: f64| {
                let th = ((j * q.sqrt() * r).abs() / t).tanh();
                (-0.5 * r * r).exp() * th * th
            };
            simpson(&g, -12.0, 12.0, 20_000) / (2.0 * std::f64::consts::PI).sqrt()
        };
        let f = |q: f64| q - avg(q);
        // nontrivial root sits in (tiny, 1]
        let (mut lo, mut hi) = (1e-6, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn classical_sk_value_matches_independent_fixed_point() {
        let t = 0.5;
        let q = mf_order_parameter(t, 0.0, 1.0).unwrap();
        let q_ref = classical_q_oracle(t, 1.0);
        assert!((q - q_ref).abs() < 1e-6, "q={q} oracle={q_ref}");
    }

    #[test]
    fn boundary_limits_match_paper() {
        // Gc(T->0) = J and Tc(G->0) = J
        assert!((phase_boundary(1e-9, 1.0).unwrap() - 1.0).abs() < 1e-6);
        assert!((phase_boundary_inverse(1e-9, 1.0).unwrap() - 1.0).abs() < 1e-6);
        assert!(phase_boundary(1.0, 1.0).is_none());
        assert!(phase_boundary_inverse(1.0, 1.0).is_none());
    }

    #[test]
    fn boundary_at_half_j_matches_tight_bisection_oracle() {
        let j = 1.0;
        let gc = phase_boundary(0.5, j).unwrap();
        // independent bracket at 1e-12
        let g = |x: f64| x / j - (x / 0.5).tanh();
        let (mut lo, mut hi) = (1e-14, 1.0);
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((gc - 0.5 * (lo + hi)).abs() < 2e-9);
    }

    #[test]
    fn boundary_and_inverse_are_mutual_inverses() {
        // 100-point grid on T in [0.15, 0.99]J. Below ~0.1J the boundary
        // saturates at Gamma_c = J(1 - O(e^{-2J/T})), closer to J than f64
        // can resolve, so no finite-precision root finder inverts it there.
        for k in 0..100 {
            let t = 0.15 + 0.84 * k as f64 / 99.0;
            let gc = phase_boundary(t, 1.0).unwrap();
            let t_back = phase_boundary_inverse(gc, 1.0).unwrap();
            assert!((t_back - t).abs() < 1e-6, "T={t}: back={t_back}");
        }
    }

    #[test]
    fn q_monotone_in_t_and_gamma() {
        // non-increasing along both axes on a 0.01J grid patch
        let j = 1.0;
        let mut prev_row: Option<Vec<f64>> = None;
        for it in 0..30 {
            let t = 0.30 + 0.01 * it as f64;
            let mut row = Vec::new();
            let mut prev = f64::INFINITY;
            for ig in 0..30 {
                let gamma = 0.30 + 0.01 * ig as f64;
                let q = mf_order_parameter(t, gamma, j).unwrap();
                assert!(q <= prev + 1e-8, "q not monotone in Gamma at T={t}");
                prev = q;
                row.push(q);
            }
            if let Some(pr) = &prev_row {
                for (a, b) in pr.iter().zip(&row) {
                    assert!(*b <= *a + 1e-8, "q not monotone in T");
                }
            }
            prev_row = Some(row);
        }
    }
}
