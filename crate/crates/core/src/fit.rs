//! Relaxation-exponent fit: eps_res ~ a (log tau)^(-zeta).

use crate::CoreError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub exponent: f64,
    pub amplitude: f64,
    /// RMS residual of the straight-line fit in (log log tau, log eps) space.
    pub residual: f64,
    /// (tau_min, tau_max) actually used.
    pub window: (f64, f64),
}

/// Least squares of log eps = log a - zeta * log log tau over points with
/// eps > 0 and tau >= 2. Needs at least 4 usable points.
pub fn fit_log_power(points: &[(f64, f64)]) -> Result<FitResult, CoreError> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(tau, eps)| tau >= 2.0 && eps > 0.0)
        .map(|&(tau, eps)| (tau.ln().ln(), eps.ln()))
        .collect();
    if usable.len() < 4 {
        return Err(CoreError::TooFew { got: usable.len(), want: 4 });
    }
    let n = usable.len() as f64;
    let sx: f64 = usable.iter().map(|p| p.0).sum();
    let sy: f64 = usable.iter().map(|p| p.1).sum();
    let sxx: f64 = usable.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = usable.iter().map(|p| p.0 * p.1).sum();
    let det = n * sxx - sx * sx;
    if det.abs() < 1e-12 * n * sxx.max(1.0) {
        return Err(CoreError::DegenerateFit);
    }
    let slope = (n * sxy - sx * sy) / det;
    let intercept = (sy - slope * sx) / n;
    let ss: f64 = usable
        .iter()
        .map(|&(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let taus: Vec<f64> = points
        .iter()
        .filter(|&&(tau, eps)| tau >= 2.0 && eps > 0.0)
        .map(|p| p.0)
        .collect();
    let window = (
        taus.iter().cloned().fold(f64::INFINITY, f64::min),
        taus.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    Ok(FitResult {
        exponent: -slope,
        amplitude: intercept.exp(),
        residual: (ss / n).sqrt(),
        window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(zeta: f64) -> Vec<(f64, f64)> {
        [1e2, 1e3, 1e4, 1e5, 1e6]
            .iter()
            .map(|&tau: &f64| (tau, tau.ln().powf(-zeta)))
            .collect()
    }

    #[test]
    fn recovers_zeta_two() {
        let fit = fit_log_power(&synthetic(2.0)).unwrap();
        assert!((fit.exponent - 2.0).abs() < 0.01, "zeta={}", fit.exponent);
        assert!(fit.residual < 1e-10);
        assert_eq!(fit.window, (1e2, 1e6));
    }

    #[test]
    fn recovers_zeta_six() {
        let fit = fit_log_power(&synthetic(6.0)).unwrap();
        assert!((fit.exponent - 6.0).abs() < 0.05, "zeta={}", fit.exponent);
    }

    #[test]
    fn constant_residual_gives_zero_exponent() {
        let pts: Vec<(f64, f64)> = [1e2, 1e3, 1e4, 1e5].iter().map(|&t| (t, 0.37)).collect();
        let fit = fit_log_power(&pts).unwrap();
        assert!(fit.exponent.abs() < 0.01);
        assert!((fit.amplitude - 0.37).abs() < 1e-9);
    }

    #[test]
    fn rejects_too_few_and_degenerate() {
        assert!(fit_log_power(&[(100.0, 0.1), (1000.0, 0.01)]).is_err());
        // four points but all at the same tau
        let same = vec![(100.0, 0.1), (100.0, 0.2), (100.0, 0.3), (100.0, 0.4)];
        assert!(matches!(fit_log_power(&same), Err(CoreError::DegenerateFit)));
        // eps <= 0 and tau < 2 are dropped before counting
        let thin = vec![(100.0, 0.1), (1000.0, 0.0), (1.5, 0.2), (1e4, 0.05), (1e5, 0.02)];
        assert!(matches!(fit_log_power(&thin), Err(CoreError::TooFew { got: 3, want: 4 })));
    }
}
