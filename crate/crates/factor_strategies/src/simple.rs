use std::sync::Arc;

use graph_core::Graph;
use process_engine::{StepView, Strategy};

/// Buys every presented edge until the budget runs out.
#[derive(Clone, Debug)]
pub struct BuyAll {
    budget: usize,
}

impl BuyAll {
    pub fn new(budget: usize) -> Self {
        BuyAll { budget }
    }
}

impl Strategy for BuyAll {
    fn name(&self) -> &str {
        "buy_all"
    }
    fn budget(&self) -> usize {
        self.budget
    }
    fn decide(&mut self, _view: &StepView<'_>) -> f64 {
        1.0
    }
}

/// Never buys.
#[derive(Clone, Debug)]
pub struct BuyNothing {
    budget: usize,
}

impl BuyNothing {
    pub fn new(budget: usize) -> Self {
        BuyNothing { budget }
    }
}

impl Strategy for BuyNothing {
    fn name(&self) -> &str {
        "buy_nothing"
    }
    fn budget(&self) -> usize {
        self.budget
    }
    fn decide(&mut self, _view: &StepView<'_>) -> f64 {
        0.0
    }
}

/// Buys exactly the presented edges of a fixed target graph on `[n]`.
#[derive(Clone, Debug)]
pub struct FixedSubgraph {
    target: Arc<Graph>,
    budget: usize,
}

impl FixedSubgraph {
    pub fn new(target: Arc<Graph>, budget: usize) -> Self {
        FixedSubgraph { target, budget }
    }
}

impl Strategy for FixedSubgraph {
    fn name(&self) -> &str {
        "fixed_subgraph"
    }
    fn budget(&self) -> usize {
        self.budget
    }
    fn decide(&mut self, view: &StepView<'_>) -> f64 {
        let (u, v) = view.edge;
        if u < self.target.n() && v < self.target.n() && self.target.has_edge(u, v) {
            1.0
        } else {
            0.0
        }
    }
}

/// Buys an edge iff one of its endpoints has bought degree below `kdeg`.
#[derive(Clone, Debug)]
pub struct MinDegreeGreedy {
    kdeg: usize,
    budget: usize,
}

impl MinDegreeGreedy {
    pub fn new(kdeg: usize, budget: usize) -> Self {
        assert!(kdeg >= 1, "degree target must be positive");
        MinDegreeGreedy { kdeg, budget }
    }
}

impl Strategy for MinDegreeGreedy {
    fn name(&self) -> &str {
        "min_degree_greedy"
    }
    fn budget(&self) -> usize {
        self.budget
    }
    fn decide(&mut self, view: &StepView<'_>) -> f64 {
        let (u, v) = view.edge;
        if view.bought.degree(u) < self.kdeg || view.bought.degree(v) < self.kdeg {
            1.0
        } else {
            0.0
        }
    }
}

/// Buys an edge iff it joins two components of the bought graph, so the
/// bought graph is always a forest.
#[derive(Clone, Debug)]
pub struct Forest {
    parent: Vec<usize>,
    rank: Vec<u8>,
    budget: usize,
}

impl Forest {
    pub fn new(n: usize, budget: usize) -> Self {
        Forest { parent: (0..n).collect(), rank: vec![0; n], budget }
    }

    fn root(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }
}

impl Strategy for Forest {
    fn name(&self) -> &str {
        "forest"
    }
    fn budget(&self) -> usize {
        self.budget
    }
    fn decide(&mut self, view: &StepView<'_>) -> f64 {
        let (a, b) = (self.root(view.edge.0), self.root(view.edge.1));
        if a == b {
            return 0.0;
        }
        // A 1.0 answer with budget remaining is always a purchase.
        match self.rank[a].cmp(&self.rank[b]) {
            std::cmp::Ordering::Less => self.parent[a] = b,
            std::cmp::Ordering::Greater => self.parent[b] = a,
            std::cmp::Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
            }
        }
        1.0
    }
}
