use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::dist2;
use crate::problem::SpectralData;

/// Primal step `alpha`, dual step `beta` and the parameter `gamma` that
/// generated them: `alpha = 1/(λmax + γ)`, `beta = γ/σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepSizes {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl StepSizes {
    /// `alpha · (λmax + σ·beta)`; convergence needs this to be at most one.
    pub fn contract_value(&self, s: &SpectralData) -> f64 {
        self.alpha * (s.lambda_max + s.sigma * self.beta)
    }
}

pub fn steps_from_gamma(gamma: f64, s: &SpectralData) -> Result<StepSizes> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "gamma must be positive and finite, got {gamma}"
        )));
    }
    Ok(StepSizes {
        alpha: 1.0 / (s.lambda_max + gamma),
        beta: gamma / s.sigma,
        gamma,
    })
}

/// Which ratio the adaptive rule uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepRule {
    /// `γ = √σ ‖v¹ − wᵏ‖ / ‖z¹ − zᵏ‖`, the minimizer of the gap surrogate.
    #[default]
    Minimizer,
    /// The reciprocal ratio `√σ ‖z¹ − zᵏ‖ / ‖v¹ − wᵏ‖`, kept for comparison.
    InvertedRatio,
}

/// Norms below this are treated as zero by [`step_selection`].
pub const DEGENERATE_NORM: f64 = 1e-12;

/// Outcome of one adaptive step-size update.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepSelection {
    pub steps: StepSizes,
    /// `false` when a degenerate norm kept the previous steps.
    pub applied: bool,
    /// `‖z¹ − zᵏ‖`
    pub primal_shift: f64,
    /// `‖v¹ − wᵏ‖`
    pub dual_shift: f64,
}

/// Primal-dual gap surrogate with `(z⋆, w⋆)` replaced by the current iterates:
/// `(λmax + γ)/2 · ‖z¹ − zᵏ‖² + σ/(2γ) · ‖v¹ − wᵏ‖²`.
pub fn gap_surrogate(
    gamma: f64,
    lambda_max: f64,
    sigma: f64,
    primal_shift: f64,
    dual_shift: f64,
) -> f64 {
    0.5 * (lambda_max + gamma) * primal_shift * primal_shift
        + sigma / (2.0 * gamma) * dual_shift * dual_shift
}

pub fn step_selection(
    z1: &[f64],
    v1: &[f64],
    zk: &[f64],
    wk: &[f64],
    s: &SpectralData,
    previous: StepSizes,
    rule: StepRule,
) -> StepSelection {
    let primal_shift = dist2(z1, zk);
    let dual_shift = dist2(v1, wk);
    let keep = StepSelection {
        steps: previous,
        applied: false,
        primal_shift,
        dual_shift,
    };
    if primal_shift <= DEGENERATE_NORM || dual_shift <= DEGENERATE_NORM {
        return keep;
    }
    let ratio = match rule {
        StepRule::Minimizer => dual_shift / primal_shift,
        StepRule::InvertedRatio => primal_shift / dual_shift,
    };
    match steps_from_gamma(s.sigma.sqrt() * ratio, s) {
        Ok(steps) => StepSelection {
            steps,
            applied: true,
            primal_shift,
            dual_shift,
        },
        Err(_) => keep,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spectral(lambda_max: f64, sigma: f64) -> SpectralData {
        SpectralData {
            lambda_max,
            lambda_min: 1.0,
            sigma,
            sigma_min: None,
            converged: true,
        }
    }

    #[test]
    fn from_gamma_examples() {
        let s = spectral(1.0, 1.0);
        let st = steps_from_gamma(1.0, &s).unwrap();
        assert_eq!((st.alpha, st.beta), (0.5, 1.0));

        let s = spectral(3.0, 7.5);
        assert_eq!(steps_from_gamma(7.5, &s).unwrap().beta, 1.0);

        let s = spectral(1.0, 4.0);
        let st = steps_from_gamma(1.0, &s).unwrap();
        assert_eq!((st.alpha, st.beta), (0.5, 0.25));
        assert_eq!(st.contract_value(&s), 1.0);

        assert!(steps_from_gamma(0.0, &s).is_err());
        assert!(steps_from_gamma(-1.0, &s).is_err());
    }

    #[test]
    fn selection_minimizes_surrogate() {
        let s = spectral(2.0, 4.0);
        let prev = steps_from_gamma(4.0, &s).unwrap();
        // ‖v¹ − wᵏ‖ = 1, ‖z¹ − zᵏ‖ = 2 → γ = 2 · 1/2 = 1
        let sel = step_selection(
            &[0.0, 0.0],
            &[0.0],
            &[2.0, 0.0],
            &[1.0],
            &s,
            prev,
            StepRule::Minimizer,
        );
        assert!(sel.applied);
        assert!((sel.steps.gamma - 1.0).abs() < 1e-15);
        assert!((sel.steps.alpha - 1.0 / 3.0).abs() < 1e-15);
        assert!((sel.steps.beta - 0.25).abs() < 1e-15);
        // f̂'(γ) = dz²/2 − σ dv²/(2γ²) vanishes at γ = 1
        let d = 0.5 * 4.0 - 4.0 * 1.0 / 2.0;
        assert_eq!(d, 0.0);
        let f = |g| gap_surrogate(g, 2.0, 4.0, 2.0, 1.0);
        assert!(f(1.0) <= f(0.99) && f(1.0) <= f(1.01));
    }

    #[test]
    fn equal_shifts_give_sqrt_sigma() {
        let s = spectral(1.0, 9.0);
        let prev = steps_from_gamma(9.0, &s).unwrap();
        let sel = step_selection(
            &[0.0],
            &[0.0],
            &[1.5],
            &[1.5],
            &s,
            prev,
            StepRule::Minimizer,
        );
        assert!((sel.steps.gamma - 3.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_guard_keeps_previous() {
        let s = spectral(1.0, 9.0);
        let prev = steps_from_gamma(9.0, &s).unwrap();
        let sel = step_selection(
            &[1.0],
            &[0.0],
            &[1.0],
            &[3.0],
            &s,
            prev,
            StepRule::Minimizer,
        );
        assert!(!sel.applied);
        assert_eq!(sel.steps, prev);
    }

    #[test]
    fn inverted_ratio_rule() {
        let s = spectral(2.0, 4.0);
        let prev = steps_from_gamma(4.0, &s).unwrap();
        let sel = step_selection(
            &[0.0, 0.0],
            &[0.0],
            &[2.0, 0.0],
            &[1.0],
            &s,
            prev,
            StepRule::InvertedRatio,
        );
        assert!((sel.steps.gamma - 4.0).abs() < 1e-15);
    }
}
