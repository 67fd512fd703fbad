//! Bipartite matching by augmenting paths.

use std::collections::BTreeSet;

use crate::graph::{Graph, VertexId};

/// Maximum matching of a bipartite graph given as adjacency lists from the
/// left side (`0..adj.len()`) into `0..right`. Neighbours are tried in list
/// order, so the result is deterministic.
pub fn maximum_matching(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    let mut match_left = vec![None; adj.len()];
    let mut match_right: Vec<Option<usize>> = vec![None; right];
    for start in 0..adj.len() {
        let mut visited = vec![false; right];
        augment(adj, start, &mut visited, &mut match_left, &mut match_right);
    }
    match_left
}

fn augment(
    adj: &[Vec<usize>],
    start: usize,
    visited: &mut [bool],
    match_left: &mut [Option<usize>],
    match_right: &mut [Option<usize>],
) -> bool {
    // Iterative DFS over alternating paths; `stack` holds (left vertex, next
    // neighbour index).
    let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
    let mut via: Vec<usize> = Vec::new();
    while let Some(&mut (l, ref mut next)) = stack.last_mut() {
        if *next >= adj[l].len() {
            stack.pop();
            via.pop();
            continue;
        }
        let r = adj[l][*next];
        *next += 1;
        if visited[r] {
            continue;
        }
        visited[r] = true;
        via.push(r);
        match match_right[r] {
            None => {
                // Flip the path: stack[i].0 takes via[i].
                for (i, &(l, _)) in stack.iter().enumerate() {
                    let r = via[i];
                    match_left[l] = Some(r);
                    match_right[r] = Some(l);
                }
                return true;
            }
            Some(l2) => stack.push((l2, 0)),
        }
    }
    false
}

/// A perfect matching of `adj` (left `i` ↦ right), if one exists.
pub fn perfect_matching(adj: &[Vec<usize>], right: usize) -> Option<Vec<usize>> {
    if adj.len() != right {
        return None;
    }
    maximum_matching(adj, right).into_iter().collect()
}

/// A perfect matching of `Γ[A, B]` as sorted `(a, b)` pairs.
pub fn bipartite_matching(graph: &Graph, left: &BTreeSet<VertexId>, right: &BTreeSet<VertexId>) -> Option<Vec<(VertexId, VertexId)>> {
    let lv: Vec<VertexId> = left.iter().copied().collect();
    let rv: Vec<VertexId> = right.iter().copied().collect();
    let adj: Vec<Vec<usize>> = lv
        .iter()
        .map(|&a| {
            let mut ns: Vec<usize> = graph
                .neighbors(a)
                .filter_map(|b| rv.binary_search(&b).ok())
                .collect();
            ns.sort_unstable();
            ns.dedup();
            ns
        })
        .collect();
    let m = perfect_matching(&adj, rv.len())?;
    Some(lv.iter().zip(m).map(|(&a, r)| (a, rv[r])).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_bipartite() {
        let adj = vec![vec![0, 1, 2]; 3];
        let m = perfect_matching(&adj, 3).unwrap();
        let distinct: BTreeSet<_> = m.iter().collect();
        assert_eq!(distinct.len(), 3);
    }

    #[test]
    fn star_has_no_perfect_matching() {
        assert!(perfect_matching(&[vec![0, 1, 2]], 3).is_none());
        let g = Graph::from_pairs(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(bipartite_matching(&g, &BTreeSet::from([0]), &BTreeSet::from([1, 2, 3])).is_none());
    }

    #[test]
    fn needs_augmentation() {
        // Greedy would match 0-0 and leave 1 stranded.
        let adj = vec![vec![0, 1], vec![0]];
        assert_eq!(perfect_matching(&adj, 2), Some(vec![1, 0]));
        let adj = vec![vec![0, 1, 2], vec![0], vec![0, 1]];
        assert_eq!(perfect_matching(&adj, 3), Some(vec![2, 0, 1]));
    }

    #[test]
    fn hall_violation() {
        let adj = vec![vec![0], vec![0], vec![1, 2]];
        assert!(perfect_matching(&adj, 3).is_none());
        assert_eq!(maximum_matching(&adj, 3).iter().flatten().count(), 2);
    }
}
