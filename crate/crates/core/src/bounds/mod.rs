//! Lower and upper bounds on gonality: treewidth on one side, the
//! independence number on the other.

mod independent;
mod treewidth;

pub use independent::{
    greedy_maximal_independent_set, maximum_independent_set, IndependentSet, MisResult, MisStatus,
};
pub use treewidth::{
    treewidth_exact, treewidth_lower_bound, TreeDecomposition, TreewidthError, Violation,
    DEFAULT_TREEWIDTH_LIMIT,
};

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("the independence estimate needs c > e, got c = {0}")]
pub struct FriezeDomainError(pub f64);

/// Predicted independence number of G(n, c/n):
/// `(2/p)·(ln c - ln ln c - ln 2 + 1)` with `p = c/n`.
pub fn frieze_alpha_estimate(n: usize, c: f64) -> Result<f64, FriezeDomainError> {
    if !(c > std::f64::consts::E) || !c.is_finite() {
        return Err(FriezeDomainError(c));
    }
    let p = c / n as f64;
    Ok(2.0 / p * (c.ln() - c.ln().ln() - 2f64.ln() + 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frieze_hand_value() {
        // 20 * (ln 10 - ln ln 10 - ln 2 + 1)
        let expected = 20.0 * (2.302585093 - 0.834032445 - 0.693147181 + 1.0);
        let got = frieze_alpha_estimate(100, 10.0).unwrap();
        assert!((got - expected).abs() < 1e-6);
        assert!((got - 35.508).abs() < 1e-3);
    }

    #[test]
    fn frieze_is_linear_in_n() {
        let a = frieze_alpha_estimate(100, 7.5).unwrap();
        let b = frieze_alpha_estimate(200, 7.5).unwrap();
        assert!((b - 2.0 * a).abs() < 1e-9);
    }

    #[test]
    fn frieze_domain() {
        assert_eq!(frieze_alpha_estimate(100, 2.0), Err(FriezeDomainError(2.0)));
        assert!(frieze_alpha_estimate(100, std::f64::consts::E).is_err());
        assert!(frieze_alpha_estimate(100, f64::NAN).is_err());
    }
}
