use std::collections::HashMap;

use couplings::is_increasing;
use graph_core::{complete_edge_count, edge_from_index, Graph};
use num_rational::Rational64;
use serde::Serialize;

use crate::OracleError;

pub const MAX_ORACLE_VERTICES: usize = 4;

/// Optimal values of every reachable state of one instance.
#[derive(Clone, Debug)]
pub struct OracleTable {
    pub n: usize,
    pub t: usize,
    pub b: usize,
    /// Checker value for every edge mask.
    pub success: Vec<bool>,
    values: HashMap<(u32, u32), Rational64>,
}

/// Serialisable snapshot of an [`OracleTable`]; values are `"num/den"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleDump {
    pub n: usize,
    pub t: usize,
    pub b: usize,
    pub value: String,
    pub states: Vec<(u32, u32, String)>,
}

pub(crate) fn graph_of(n: usize, mask: u32) -> Graph {
    let edges = (0..complete_edge_count(n)).filter(|i| mask >> i & 1 == 1).map(edge_from_index);
    Graph::from_edges(n, edges).expect("edge indices below M are valid")
}

/// Validates the instance and tabulates the checker on all edge masks.
pub(crate) fn prepare(
    n: usize,
    t: usize,
    b: usize,
    checker: &dyn Fn(&Graph) -> bool,
) -> Result<Vec<bool>, OracleError> {
    if n > MAX_ORACLE_VERTICES {
        return Err(OracleError::Capacity(format!("oracle instances need n <= {MAX_ORACLE_VERTICES}, got {n}")));
    }
    let m = complete_edge_count(n);
    if t > m {
        return Err(OracleError::Parameter(format!("t = {t} exceeds M = {m}")));
    }
    let _ = b;
    if !is_increasing(n, checker).map_err(|e| OracleError::Parameter(e.to_string()))? {
        return Err(OracleError::Parameter("the checker is not monotone increasing".into()));
    }
    Ok((0..1u32 << m).map(|mask| checker(&graph_of(n, mask))).collect())
}

impl OracleTable {
    fn value_of(&mut self, presented: u32, bought: u32) -> Rational64 {
        if let Some(&v) = self.values.get(&(presented, bought)) {
            return v;
        }
        let m = complete_edge_count(self.n);
        let value = if presented.count_ones() as usize == self.t {
            Rational64::from_integer(i64::from(self.success[bought as usize]))
        } else {
            let fresh: Vec<u32> = (0..m as u32).filter(|e| presented >> e & 1 == 0).collect();
            let can_buy = (bought.count_ones() as usize) < self.b;
            let mut total = Rational64::from_integer(0);
            for &e in &fresh {
                let skip = self.value_of(presented | 1 << e, bought);
                let buy = if can_buy { self.value_of(presented | 1 << e, bought | 1 << e) } else { skip };
                total += skip.max(buy);
            }
            total / Rational64::from_integer(fresh.len() as i64)
        };
        self.values.insert((presented, bought), value);
        value
    }

    /// Optimal success probability from the empty state.
    pub fn value(&self) -> Rational64 {
        self.values[&(0, 0)]
    }

    /// Value of a reachable state.
    pub fn state_value(&self, presented: u32, bought: u32) -> Option<Rational64> {
        self.values.get(&(presented, bought)).copied()
    }

    /// Optimal decision for edge index `e` offered in state
    /// `(presented, bought)`; ties are resolved by not buying.
    pub fn buys(&self, presented: u32, bought: u32, e: u32) -> bool {
        if bought.count_ones() as usize >= self.b {
            return false;
        }
        let next = presented | 1 << e;
        let skip = self.values.get(&(next, bought));
        let buy = self.values.get(&(next, bought | 1 << e));
        matches!((skip, buy), (Some(s), Some(b)) if b > s)
    }

    pub fn dump(&self) -> OracleDump {
        let render = |v: Rational64| format!("{}/{}", v.numer(), v.denom());
        let mut states: Vec<(u32, u32, String)> = self.values.iter().map(|(&(p, b), &v)| (p, b, render(v))).collect();
        states.sort_unstable();
        OracleDump { n: self.n, t: self.t, b: self.b, value: render(self.value()), states }
    }
}

/// Backward induction over all reachable states.
pub fn solve(n: usize, t: usize, b: usize, checker: &dyn Fn(&Graph) -> bool) -> Result<OracleTable, OracleError> {
    let success = prepare(n, t, b, checker)?;
    let mut table = OracleTable { n, t, b, success, values: HashMap::new() };
    table.value_of(0, 0);
    Ok(table)
}

/// Exact optimal success probability of a `(t, b)`-strategy.
pub fn optimal_success(
    n: usize,
    t: usize,
    b: usize,
    checker: &dyn Fn(&Graph) -> bool,
) -> Result<Rational64, OracleError> {
    Ok(solve(n, t, b, checker)?.value())
}

/// Probability that `t` uniformly random distinct edges satisfy the
/// checker, by enumeration of `t`-subsets.
pub fn buy_all_value(n: usize, t: usize, checker: &dyn Fn(&Graph) -> bool) -> Result<Rational64, OracleError> {
    let success = prepare(n, t, t, checker)?;
    let masks = || (0..success.len() as u32).filter(|m| m.count_ones() as usize == t);
    let good = masks().filter(|&m| success[m as usize]).count();
    Ok(Rational64::new(good as i64, masks().count() as i64))
}
