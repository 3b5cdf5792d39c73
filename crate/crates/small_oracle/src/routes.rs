use std::collections::HashMap;

use graph_core::{complete_edge_count, Graph};
use num_rational::Rational64;

use crate::induction::prepare;
use crate::OracleError;

/// Largest number of decision points for which strategies are enumerated.
pub const BRUTE_FORCE_POINT_CAP: usize = 20;

/// Optimal value by expectimax over full ordered histories, with no state
/// merging.
pub fn decision_tree_value(
    n: usize,
    t: usize,
    b: usize,
    checker: &dyn Fn(&Graph) -> bool,
) -> Result<Rational64, OracleError> {
    let success = prepare(n, t, b, checker)?;
    let m = complete_edge_count(n);
    let mut history = Vec::with_capacity(t);
    Ok(expectimax(&success, m, t, b, &mut history, 0))
}

/// `history` holds `(edge, bought)` pairs in presentation order.
fn expectimax(success: &[bool], m: usize, t: usize, b: usize, history: &mut Vec<(u32, bool)>, bought: u32) -> Rational64 {
    if history.len() == t {
        return Rational64::from_integer(i64::from(success[bought as usize]));
    }
    let fresh: Vec<u32> = (0..m as u32).filter(|e| history.iter().all(|&(h, _)| h != *e)).collect();
    let can_buy = (bought.count_ones() as usize) < b;
    let mut total = Rational64::from_integer(0);
    for &e in &fresh {
        history.push((e, false));
        let skip = expectimax(success, m, t, b, history, bought);
        history.pop();
        let best = if can_buy {
            history.push((e, true));
            let buy = expectimax(success, m, t, b, history, bought | 1 << e);
            history.pop();
            skip.max(buy)
        } else {
            skip
        };
        total += best;
    }
    total / Rational64::from_integer(fresh.len() as i64)
}

/// A decision point: the history before the offer plus the offered edge.
type Point = (Vec<(u32, bool)>, u32);

fn collect_points(m: usize, t: usize, b: usize, history: &mut Vec<(u32, bool)>, bought: usize, out: &mut Vec<Point>) {
    if history.len() == t {
        return;
    }
    let fresh: Vec<u32> = (0..m as u32).filter(|e| history.iter().all(|&(h, _)| h != *e)).collect();
    for e in fresh {
        if bought < b {
            out.push((history.clone(), e));
        }
        for buy in [false, true] {
            if buy && bought >= b {
                continue;
            }
            history.push((e, buy));
            collect_points(m, t, b, history, bought + usize::from(buy), out);
            history.pop();
        }
    }
}

fn all_sequences(m: usize, t: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if prefix.len() == t {
        out.push(prefix.clone());
        return;
    }
    for e in 0..m as u32 {
        if !prefix.contains(&e) {
            prefix.push(e);
            all_sequences(m, t, prefix, out);
            prefix.pop();
        }
    }
}

/// Optimal value as the maximum, over every deterministic strategy given
/// as a bit per decision point, of its exact success probability.
pub fn brute_force_value(
    n: usize,
    t: usize,
    b: usize,
    checker: &dyn Fn(&Graph) -> bool,
) -> Result<Rational64, OracleError> {
    let success = prepare(n, t, b, checker)?;
    let m = complete_edge_count(n);
    let mut points = Vec::new();
    collect_points(m, t, b, &mut Vec::new(), 0, &mut points);
    if points.len() > BRUTE_FORCE_POINT_CAP {
        return Err(OracleError::Capacity(format!(
            "{} decision points exceed the cap of {BRUTE_FORCE_POINT_CAP}",
            points.len()
        )));
    }
    let index: HashMap<Point, usize> = points.into_iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut sequences = Vec::new();
    all_sequences(m, t, &mut Vec::new(), &mut sequences);
    let mut best = 0usize;
    for strategy in 0u64..1 << index.len() {
        let wins = sequences
            .iter()
            .filter(|seq| {
                let mut history = Vec::with_capacity(t);
                let (mut bought, mut count) = (0u32, 0usize);
                for &e in seq.iter() {
                    let buy = count < b && strategy >> index[&(history.clone(), e)] & 1 == 1;
                    if buy {
                        bought |= 1 << e;
                        count += 1;
                    }
                    history.push((e, buy));
                }
                success[bought as usize]
            })
            .count();
        best = best.max(wins);
    }
    Ok(Rational64::new(best as i64, sequences.len().max(1) as i64))
}
