use graph_core::Graph;
use num_rational::Rational64;
use pattern_tools::{is_strictly_one_balanced, max_one_density, Density};

use crate::BoundsError;

/// Target structure of a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundFamily {
    /// `K_r`-factor, `r >= 2`.
    CliqueFactor(usize),
    /// `F`-factor described by `d*(F)`, `v(F)` and strict 1-balancedness.
    FFactor { d_star: Density, vertices: usize, strictly_balanced: bool },
    /// `k`-th power of a Hamilton cycle, `k >= 2`.
    HamPower(usize),
}

impl BoundFamily {
    pub fn f_factor(pattern: &Graph) -> Result<Self, BoundsError> {
        let err = |e: pattern_tools::PatternError| BoundsError::Parameter(e.to_string());
        Ok(BoundFamily::FFactor {
            d_star: max_one_density(pattern).map_err(err)?,
            vertices: pattern.n(),
            strictly_balanced: is_strictly_one_balanced(pattern).map_err(err)?,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            BoundFamily::CliqueFactor(_) => "clique_factor",
            BoundFamily::FFactor { .. } => "f_factor",
            BoundFamily::HamPower(_) => "ham_power",
        }
    }

    /// `r`, `d*` or `k`, as text.
    pub fn param(&self) -> String {
        match self {
            BoundFamily::CliqueFactor(r) => r.to_string(),
            BoundFamily::FFactor { d_star, .. } => pattern_tools::density_to_string(*d_star),
            BoundFamily::HamPower(k) => k.to_string(),
        }
    }

    /// Slope parameter `d` with exponent `(2d - 1) - (d - 1) x`.
    fn density(&self) -> Density {
        match *self {
            BoundFamily::CliqueFactor(r) => Rational64::new(r as i64, 2),
            BoundFamily::FFactor { d_star, .. } => d_star,
            BoundFamily::HamPower(k) => Rational64::from_integer(k as i64),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    LowerBound,
    StrategyBudgetFull,
    StrategyBudgetPartial,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::LowerBound => "lower_bound",
            BoundKind::StrategyBudgetFull => "strategy_budget_full",
            BoundKind::StrategyBudgetPartial => "strategy_budget_partial",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundSpec {
    pub family: BoundFamily,
    pub kind: BoundKind,
}

impl BoundSpec {
    pub fn new(family: BoundFamily, kind: BoundKind) -> Result<Self, BoundsError> {
        match family {
            BoundFamily::CliqueFactor(r) if r < 2 => {
                return Err(BoundsError::Parameter(format!("clique factors need r >= 2, got {r}")))
            }
            BoundFamily::HamPower(k) if k < 2 => {
                return Err(BoundsError::Parameter(format!("cycle powers need k >= 2, got {k}")))
            }
            BoundFamily::FFactor { d_star, .. } if d_star < Rational64::from_integer(1) => {
                return Err(BoundsError::Parameter(format!("d* = {d_star} is below 1")))
            }
            _ => {}
        }
        Ok(BoundSpec { family, kind })
    }

    /// `[x_0, 2]` with `x_0 = 2 - 1/d` the hitting-time exponent.
    pub fn valid_range(&self) -> (Rational64, Rational64) {
        let two = Rational64::from_integer(2);
        (two - self.family.density().recip(), two)
    }

    /// Exponent of the `log n` factor in the strategy budget, when the
    /// upper bound carries an explicit one. `None` marks an unquantified
    /// `n^{o(1)}` factor.
    pub fn polylog_exponent(&self) -> Option<Rational64> {
        let zero = Rational64::from_integer(0);
        match (self.kind, self.family) {
            (BoundKind::LowerBound | BoundKind::StrategyBudgetPartial, BoundFamily::HamPower(_)) => None,
            (BoundKind::LowerBound | BoundKind::StrategyBudgetPartial, _) => Some(zero),
            (BoundKind::StrategyBudgetFull, BoundFamily::CliqueFactor(r)) => Some(Rational64::new(1, r as i64 - 1)),
            (BoundKind::StrategyBudgetFull, BoundFamily::FFactor { vertices, strictly_balanced: true, .. }) => {
                Some(Rational64::new(1, vertices as i64 - 1))
            }
            (BoundKind::StrategyBudgetFull, BoundFamily::FFactor { .. }) => Some(zero),
            (BoundKind::StrategyBudgetFull, BoundFamily::HamPower(_)) => None,
        }
    }
}

fn exponent_at(spec: &BoundSpec, x: Rational64) -> Rational64 {
    let one = Rational64::from_integer(1);
    match spec.family {
        BoundFamily::CliqueFactor(r) => {
            let r = r as i64;
            Rational64::from_integer(r - 1) - (Rational64::new(r, 2) - one) * x
        }
        BoundFamily::FFactor { d_star, .. } => (d_star * 2 - one) - (d_star - one) * x,
        BoundFamily::HamPower(k) => {
            let k = k as i64;
            Rational64::from_integer(2 * k - 1) - Rational64::from_integer(k - 1) * x
        }
    }
}

/// `log_n b` at `x = log_n t`, exactly.
pub fn budget_exponent_exact(spec: &BoundSpec, x: Rational64) -> Result<Rational64, BoundsError> {
    let (lo, hi) = spec.valid_range();
    if x < lo || x > hi {
        return Err(BoundsError::Parameter(format!("x = {x} is outside [{lo}, {hi}]")));
    }
    Ok(exponent_at(spec, x))
}

/// `log_n b` at `x = log_n t`.
pub fn budget_exponent(spec: &BoundSpec, x: f64) -> Result<f64, BoundsError> {
    let (lo, hi) = spec.valid_range();
    let to_f64 = |q: Rational64| *q.numer() as f64 / *q.denom() as f64;
    let tolerance = 1e-12;
    if !x.is_finite() || x < to_f64(lo) - tolerance || x > to_f64(hi) + tolerance {
        return Err(BoundsError::Parameter(format!("x = {x} is outside [{lo}, {hi}]")));
    }
    let d = to_f64(spec.family.density());
    Ok((2.0 * d - 1.0) - (d - 1.0) * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    #[test]
    fn triangle_line_endpoints() {
        let spec = BoundSpec::new(BoundFamily::CliqueFactor(3), BoundKind::LowerBound).unwrap();
        assert_eq!(spec.valid_range(), (q(4, 3), q(2, 1)));
        assert_eq!(budget_exponent_exact(&spec, q(4, 3)).unwrap(), q(4, 3));
        assert_eq!(budget_exponent_exact(&spec, q(2, 1)).unwrap(), q(1, 1));
        assert!(budget_exponent_exact(&spec, q(5, 4)).is_err());
    }

    #[test]
    fn square_line_endpoints() {
        let spec = BoundSpec::new(BoundFamily::HamPower(2), BoundKind::LowerBound).unwrap();
        assert_eq!(budget_exponent_exact(&spec, q(3, 2)).unwrap(), q(3, 2));
        assert_eq!(budget_exponent(&spec, 2.0).unwrap(), 1.0);
        assert!(budget_exponent(&spec, 2.1).is_err());
    }

    #[test]
    fn polylog_factors() {
        let full = BoundSpec::new(BoundFamily::CliqueFactor(3), BoundKind::StrategyBudgetFull).unwrap();
        assert_eq!(full.polylog_exponent(), Some(q(1, 2)));
        let ham = BoundSpec::new(BoundFamily::HamPower(3), BoundKind::StrategyBudgetFull).unwrap();
        assert_eq!(ham.polylog_exponent(), None);
        let triangle = BoundFamily::f_factor(&pattern_tools::complete_pattern(3)).unwrap();
        let spec = BoundSpec::new(triangle, BoundKind::StrategyBudgetFull).unwrap();
        assert_eq!(spec.polylog_exponent(), Some(q(1, 2)));
    }

    #[test]
    fn invalid_families_are_rejected() {
        assert!(BoundSpec::new(BoundFamily::CliqueFactor(1), BoundKind::LowerBound).is_err());
        assert!(BoundSpec::new(BoundFamily::HamPower(1), BoundKind::LowerBound).is_err());
    }
}
