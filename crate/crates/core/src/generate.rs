//! Small graph generators for the equivalence experiments: disjoint cycle
//! unions and their complements, and seeded random regular graphs.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Edge, Graph, GraphError, VertexId};

/// Partitions of `n` into parts `>= 3`, each in non-increasing order.
pub fn cycle_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (3..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Disjoint union of cycles with the given lengths on `0..sum`.
pub fn cycle_union(lengths: &[usize]) -> Result<Graph, GraphError> {
    let mut pairs = Vec::new();
    let mut base = 0;
    for &len in lengths {
        pairs.extend((0..len).map(|i| (base + i, base + (i + 1) % len)));
        base += len;
    }
    Graph::from_pairs(base, &pairs)
}

/// Simple complement on the same vertex set.
pub fn complement(graph: &Graph) -> Result<Graph, GraphError> {
    let present: BTreeSet<(VertexId, VertexId)> = graph.edges().iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
    let vs = graph.vertices();
    let mut pairs = Vec::new();
    for (i, &u) in vs.iter().enumerate() {
        for &v in &vs[i + 1..] {
            if !present.contains(&(u, v)) {
                pairs.push((u, v));
            }
        }
    }
    let edges = pairs.iter().enumerate().map(|(id, &(u, v))| Edge { id, u, v, label: String::new(), dart: None }).collect();
    Graph::new(vs.to_vec(), edges)
}

/// Every `(n-3)`-regular simple graph on `n` vertices, one per isomorphism
/// class: the complements of the 2-regular graphs.
pub fn co_two_regular(n: usize) -> Result<Vec<Graph>, GraphError> {
    cycle_partitions(n).iter().map(|parts| complement(&cycle_union(parts)?)).collect()
}

/// Uniform simple `d`-regular graph on `n` vertices from the pairing model,
/// retrying until the pairing has no loops or repeated pairs.
pub fn random_regular<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Graph, GraphError> {
    if (n * d) % 2 == 1 || d >= n {
        return Err(GraphError::Parameter(format!("no simple {d}-regular graph on {n} vertices")));
    }
    let mut points: Vec<VertexId> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    loop {
        points.shuffle(rng);
        let mut seen = BTreeSet::new();
        let ok = points.chunks(2).all(|c| c[0] != c[1] && seen.insert((c[0].min(c[1]), c[0].max(c[1]))));
        if ok {
            let pairs: Vec<(VertexId, VertexId)> = seen.into_iter().collect();
            return Graph::from_pairs(n, &pairs);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn partitions_of_eight() {
        assert_eq!(cycle_partitions(8), vec![vec![8], vec![5, 3], vec![4, 4]]);
        assert_eq!(cycle_partitions(6), vec![vec![6], vec![3, 3]]);
        assert!(cycle_partitions(2).is_empty());
    }

    #[test]
    fn quintic_on_eight() {
        let gs = co_two_regular(8).unwrap();
        assert_eq!(gs.len(), 3);
        for g in &gs {
            assert_eq!(g.regular_degree(), Some(5));
            assert_eq!(g.edge_count(), 20);
        }
    }

    #[test]
    fn random_is_simple_and_regular() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for n in [10, 12] {
            let g = random_regular(n, 5, &mut rng).unwrap();
            assert_eq!(g.regular_degree(), Some(5));
            let pairs: BTreeSet<_> = g.edges().iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
            assert_eq!(pairs.len(), g.edge_count());
        }
        assert!(random_regular(11, 5, &mut rng).is_err());
    }
}
