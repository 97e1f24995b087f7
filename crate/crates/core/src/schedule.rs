//! Annealing schedules: named maps from sweep index to control value
//! (temperature or transverse field).

/// A named, parameterized control schedule. All kinds are monotone
/// non-increasing in t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule {
    /// N / ln(t + 2). The +2 offset keeps t = 0 finite; with the schedule time
    /// read as t' = t + 2 this is exactly the slowest provably convergent
    /// cooling law T(t') = N / ln t'.
    Logarithmic { n: f64 },
    /// X0 exp(-t / tau).
    Exponential { x0: f64, tau: f64 },
    /// X0 max(0, 1 - t / tau).
    Linear { x0: f64, tau: f64 },
    /// M T artanh((t+2)^(-2/(R L))): the power-law transverse-field decay that
    /// keeps path-integral annealing strongly ergodic.
    PowerLawMn { m: usize, temp: f64, r: f64, l: f64 },
    Constant { x: f64 },
}

pub fn artanh(x: f64) -> f64 {
    0.5 * ((1.0 + x) / (1.0 - x)).ln()
}

impl Schedule {
    pub fn value(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0);
        match *self {
            Schedule::Logarithmic { n } => n / (t + 2.0).ln(),
            Schedule::Exponential { x0, tau } => x0 * (-t / tau).exp(),
            Schedule::Linear { x0, tau } => x0 * (1.0 - t / tau).max(0.0),
            Schedule::PowerLawMn { m, temp, r, l } => {
                mn_bound_value(t, m, temp, r * l)
            }
            Schedule::Constant { x } => x,
        }
    }

    /// All kinds here decrease (constant counts as non-increasing).
    pub fn is_non_increasing(&self) -> bool {
        true
    }

    pub fn descriptor(&self) -> String {
        match *self {
            Schedule::Logarithmic { n } => format!("log(n={n})"),
            Schedule::Exponential { x0, tau } => format!("exp(x0={x0},tau={tau})"),
            Schedule::Linear { x0, tau } => format!("linear(x0={x0},tau={tau})"),
            Schedule::PowerLawMn { m, temp, r, l } => {
                format!("power-law-mn(m={m},t={temp},r={r},l={l})")
            }
            Schedule::Constant { x } => format!("constant(x={x})"),
        }
    }
}

/// The strong-ergodicity lower bound Gamma(t) >= M T artanh((t+2)^(-2/(RL))).
pub fn mn_bound_value(t: f64, m: usize, temp: f64, rl: f64) -> f64 {
    debug_assert!(rl > 0.0);
    m as f64 * temp * artanh((t + 2.0).powf(-2.0 / rl))
}

/// Check a user schedule against the bound on a grid; returns the first
/// violating t if any.
pub fn first_mn_violation(
    schedule: &Schedule,
    m: usize,
    temp: f64,
    rl: f64,
    t_max: f64,
    grid: usize,
) -> Option<f64> {
    (0..=grid)
        .map(|k| t_max * k as f64 / grid as f64)
        .find(|&t| schedule.value(t) < mn_bound_value(t, m, temp, rl))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logarithmic_value() {
        // N=10 at t = e^2 - 2: 10 / ln(e^2) = 5
        let s = Schedule::Logarithmic { n: 10.0 };
        let t = std::f64::consts::E.powi(2) - 2.0;
        assert!((s.value(t) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_and_linear_endpoints() {
        assert_eq!(Schedule::Exponential { x0: 100.0, tau: 10.0 }.value(0.0), 100.0);
        assert_eq!(Schedule::Linear { x0: 1.0, tau: 50.0 }.value(50.0), 0.0);
        assert_eq!(Schedule::Linear { x0: 1.0, tau: 50.0 }.value(80.0), 0.0);
    }

    #[test]
    fn mn_closed_form_at_zero() {
        // t=0, RL=2, MT=1: artanh(2^-1) = ln(3)/2
        let s = Schedule::PowerLawMn { m: 1, temp: 1.0, r: 1.0, l: 2.0 };
        assert!((s.value(0.0) - 0.5 * 3.0f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn mn_asymptotic_power_law() {
        // artanh(x) -> x: ratio to MT (t+2)^(-2/RL) tends to 1 from above
        let (m, temp, rl) = (8usize, 0.125, 4.0);
        let s = Schedule::PowerLawMn { m, temp, r: 2.0, l: 2.0 };
        let mut prev = f64::INFINITY;
        for &t in &[1e2, 1e4, 1e6, 1e8] {
            let asym = m as f64 * temp * (t + 2.0f64).powf(-2.0 / rl);
            let ratio = s.value(t) / asym;
            assert!(ratio >= 1.0 && ratio < prev);
            prev = ratio;
        }
        assert!((prev - 1.0).abs() < 1e-4);
    }

    #[test]
    fn schedules_are_monotone() {
        let cases = [
            Schedule::Logarithmic { n: 4.0 },
            Schedule::Exponential { x0: 3.0, tau: 17.0 },
            Schedule::Linear { x0: 2.0, tau: 31.0 },
            Schedule::PowerLawMn { m: 4, temp: 0.25, r: 2.0, l: 8.0 },
            Schedule::Constant { x: 1.0 },
        ];
        for s in cases {
            let mut prev = f64::INFINITY;
            for k in 0..200 {
                let v = s.value(k as f64);
                assert!(v >= 0.0 && v <= prev + 1e-15, "{s:?} at t={k}");
                prev = v;
            }
        }
    }

    #[test]
    fn mn_schedule_meets_its_own_bound() {
        let s = Schedule::PowerLawMn { m: 16, temp: 0.0625, r: 4.0, l: 4.0 };
        assert_eq!(first_mn_violation(&s, 16, 0.0625, 16.0, 1e5, 10_000), None);
        // an exponential decay eventually dips below the power-law bound
        let fast = Schedule::Exponential { x0: 10.0, tau: 50.0 };
        assert!(first_mn_violation(&fast, 16, 0.0625, 16.0, 1e4, 10_000).is_some());
    }
}
