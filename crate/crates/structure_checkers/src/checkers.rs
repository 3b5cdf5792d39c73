use graph_core::Graph;
use process_engine::{PropertyChecker, StrategyReport, Witness};

use crate::components::{is_connected, min_degree};
use crate::factor::{has_f_factor_with, max_disjoint_copies_with, FactorWitness, SearchLimits};
use crate::ham::verify_ham_power;

fn reported_copies(report: &StrategyReport) -> Option<FactorWitness> {
    match &report.witness {
        Some(Witness::Copies(copies)) => Some(FactorWitness { copies: copies.clone() }),
        _ => None,
    }
}

/// Spanning `F`-factor. A valid spanning witness supplied by the strategy is
/// accepted directly; otherwise the exact search decides.
pub struct FactorChecker {
    pub pattern: Graph,
    pub limits: SearchLimits,
}

impl FactorChecker {
    pub fn new(pattern: Graph) -> Self {
        FactorChecker { pattern, limits: SearchLimits::default() }
    }
}

impl PropertyChecker for FactorChecker {
    fn name(&self) -> String {
        format!("factor of a {}-vertex pattern", self.pattern.n())
    }

    fn check(&self, bought: &Graph, report: &StrategyReport) -> Result<bool, String> {
        if let Some(w) = reported_copies(report) {
            if w.validate(bought, &self.pattern).is_ok() && w.is_spanning(bought.n()) {
                return Ok(true);
            }
        }
        has_f_factor_with(bought, &self.pattern, &self.limits).map(|w| w.is_some()).map_err(|e| e.to_string())
    }
}

/// At least `target` vertex-disjoint copies of `F`.
pub struct PartialFactorChecker {
    pub pattern: Graph,
    pub target: usize,
    pub limits: SearchLimits,
}

impl PartialFactorChecker {
    pub fn new(pattern: Graph, target: usize) -> Self {
        PartialFactorChecker { pattern, target, limits: SearchLimits::default() }
    }
}

impl PropertyChecker for PartialFactorChecker {
    fn name(&self) -> String {
        format!("{} disjoint copies of a {}-vertex pattern", self.target, self.pattern.n())
    }

    fn check(&self, bought: &Graph, report: &StrategyReport) -> Result<bool, String> {
        if let Some(w) = reported_copies(report) {
            if w.validate(bought, &self.pattern).is_ok() && w.len() >= self.target {
                return Ok(true);
            }
        }
        max_disjoint_copies_with(bought, &self.pattern, self.target, &self.limits)
            .map(|(count, _)| count >= self.target)
            .map_err(|e| e.to_string())
    }
}

pub struct MinDegreeChecker {
    pub k: usize,
}

impl PropertyChecker for MinDegreeChecker {
    fn name(&self) -> String {
        format!("minimum degree {}", self.k)
    }

    fn check(&self, bought: &Graph, _report: &StrategyReport) -> Result<bool, String> {
        Ok(min_degree(bought) >= self.k)
    }
}

pub struct ConnectivityChecker;

impl PropertyChecker for ConnectivityChecker {
    fn name(&self) -> String {
        "connected".into()
    }

    fn check(&self, bought: &Graph, _report: &StrategyReport) -> Result<bool, String> {
        Ok(is_connected(bought))
    }
}

/// `k`-th power of a Hamilton cycle, verified against the cyclic order the
/// strategy reports. Without a reported order the trial is a failure.
pub struct HamPowerChecker {
    pub k: usize,
}

impl PropertyChecker for HamPowerChecker {
    fn name(&self) -> String {
        format!("power {} of a Hamilton cycle", self.k)
    }

    fn check(&self, bought: &Graph, report: &StrategyReport) -> Result<bool, String> {
        match &report.witness {
            Some(Witness::CyclicOrder(order)) => verify_ham_power(bought, order, self.k).map_err(|e| e.to_string()),
            _ => Ok(false),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_checker_uses_or_ignores_witness() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let checker = FactorChecker::new(Graph::complete(2));
        let good = StrategyReport { witness: Some(Witness::Copies(vec![vec![0, 1], vec![2, 3]])), ..Default::default() };
        let bogus = StrategyReport { witness: Some(Witness::Copies(vec![vec![0, 2], vec![1, 3]])), ..Default::default() };
        assert_eq!(checker.check(&g, &good), Ok(true));
        assert_eq!(checker.check(&g, &bogus), Ok(true));
        assert_eq!(checker.check(&Graph::from_edges(4, [(0, 1)]).unwrap(), &bogus), Ok(false));
        assert!(checker.check(&Graph::empty(5), &StrategyReport::default()).is_err());
    }

    #[test]
    fn ham_power_checker_needs_an_order() {
        let checker = HamPowerChecker { k: 1 };
        let cycle = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        let ordered = StrategyReport { witness: Some(Witness::CyclicOrder((0..5).collect())), ..Default::default() };
        assert_eq!(checker.check(&cycle, &ordered), Ok(true));
        assert_eq!(checker.check(&cycle, &StrategyReport::default()), Ok(false));
    }

    #[test]
    fn partial_factor_counts_copies() {
        let checker = PartialFactorChecker::new(Graph::complete(3), 2);
        assert_eq!(checker.check(&Graph::complete(6), &StrategyReport::default()), Ok(true));
        assert_eq!(checker.check(&Graph::complete(5), &StrategyReport::default()), Ok(false));
    }
}
