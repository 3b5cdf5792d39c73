//! Purchase strategies for spanning structures: the trivial buy-all and
//! fixed-subgraph strategies, greedy minimum degree, spanning forests, and
//! the partition strategies for `F`-factors.

mod partition;
mod simple;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("parameter error: {0}")]
    Parameter(String),
}

pub use partition::{
    make_partition_factor, partition_checker, partition_formulas, PartitionFactor, PartitionMode,
    PartitionStrategyParams,
};
pub use simple::{BuyAll, BuyNothing, FixedSubgraph, Forest, MinDegreeGreedy};
