use graph_core::{Graph, VertexSet};

/// Connected components of `G[region]`.
pub fn components_within(host: &Graph, region: &VertexSet) -> Vec<VertexSet> {
    let mut remaining = region.clone();
    let mut parts = Vec::new();
    let mut stack = Vec::new();
    while let Some(start) = remaining.first() {
        remaining.remove(start);
        let mut part = VertexSet::new(host.n());
        part.insert(start);
        stack.push(start);
        while let Some(u) = stack.pop() {
            let mut fresh = remaining.clone();
            fresh.intersect_words(host.row(u));
            for w in fresh.iter() {
                remaining.remove(w);
                part.insert(w);
                stack.push(w);
            }
        }
        parts.push(part);
    }
    parts
}

/// Vertex lists of the connected components, ordered by smallest vertex.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    components_within(g, &VertexSet::full(g.n())).iter().map(VertexSet::to_vec).collect()
}

/// Graphs on at most one vertex count as connected.
pub fn is_connected(g: &Graph) -> bool {
    g.n() <= 1 || components_within(g, &VertexSet::full(g.n())).len() == 1
}

/// `0` for the graph with no vertices.
pub fn min_degree(g: &Graph) -> usize {
    (0..g.n()).map(|u| g.degree(u)).min().unwrap_or(0)
}
