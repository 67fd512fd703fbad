//! Random instances shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use std::collections::BTreeSet;

use cayley_nzflow::flow::{oracle_nz3, Z3Flow};
use cayley_nzflow::graph::{CayleyMultigraph, ConnectionMultiset, EdgeId, Graph, VertexId};
use cayley_nzflow::group::FiniteGroup;
use cayley_nzflow::pseudoforest::{classify, ComponentKind};
use rand::seq::SliceRandom;
use rand::Rng;

/// A pseudoforest made of random trees and unicyclic graphs on disjoint
/// vertex ranges, with its vertices shuffled.
pub fn random_pseudoforest<R: Rng>(rng: &mut R) -> Graph {
    let parts = rng.gen_range(1..=5);
    let mut pairs = Vec::new();
    let mut base = 0;
    for _ in 0..parts {
        let size = rng.gen_range(1..=7);
        for v in 1..size {
            pairs.push((base + rng.gen_range(0..v), base + v));
        }
        if size >= 2 && rng.gen_bool(0.5) {
            let a = rng.gen_range(0..size);
            let mut b = rng.gen_range(0..size);
            while b == a {
                b = rng.gen_range(0..size);
            }
            pairs.push((base + a, base + b));
        }
        base += size;
    }
    let mut perm: Vec<VertexId> = (0..base).collect();
    perm.shuffle(rng);
    let pairs: Vec<_> = pairs.into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
    Graph::from_pairs(base, &pairs).expect("loopless")
}

/// One random vertex per tree component.
pub fn random_roots<R: Rng>(graph: &Graph, rng: &mut R) -> BTreeSet<VertexId> {
    classify(graph).trees().map(|c| *c.vertices.choose(rng).expect("non-empty")).collect()
}

/// Breaks a valid root set in one of three ways. `None` when the chosen way
/// does not apply to this graph.
pub fn corrupt_roots<R: Rng>(graph: &Graph, roots: &BTreeSet<VertexId>, rng: &mut R) -> Option<BTreeSet<VertexId>> {
    let classes = classify(graph);
    let mut out = roots.clone();
    match rng.gen_range(0..3) {
        0 => {
            let r = *roots.iter().collect::<Vec<_>>().choose(rng)?;
            out.remove(r);
        }
        1 => {
            let tree = classes.trees().filter(|c| c.vertices.len() > 1).collect::<Vec<_>>();
            let c = tree.choose(rng)?;
            let extra = c.vertices.iter().find(|v| !roots.contains(v))?;
            out.insert(*extra);
        }
        _ => {
            let cyc: Vec<_> = classes.components.iter().filter(|c| c.kind == ComponentKind::Unicyclic).collect();
            out.insert(*cyc.choose(rng)?.vertices.choose(rng)?);
        }
    }
    Some(out)
}

/// A graph with a parity subgraph that carries a nowhere-zero flow: an
/// even-rung circular ladder plus random cycles through its vertices.
pub fn random_parity_instance<R: Rng>(rng: &mut R) -> (Graph, Graph, Z3Flow) {
    let t = 2 * rng.gen_range(2..=4);
    let n = 2 * t;
    let mut pairs = Vec::new();
    for i in 0..t {
        pairs.push((i, (i + 1) % t));
        pairs.push((t + i, t + (i + 1) % t));
        pairs.push((i, t + i));
    }
    let base_edges = pairs.len();
    for _ in 0..rng.gen_range(0..=3) {
        let len = rng.gen_range(3..=n.min(7));
        let mut vs: Vec<VertexId> = (0..n).collect();
        vs.shuffle(rng);
        vs.truncate(len);
        pairs.extend((0..len).map(|i| (vs[i], vs[(i + 1) % len])));
    }
    let mut perm: Vec<VertexId> = (0..n).collect();
    perm.shuffle(rng);
    let pairs: Vec<_> = pairs.into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
    let graph = Graph::from_pairs(n, &pairs).expect("loopless");
    let ids: Vec<EdgeId> = (0..base_edges).collect();
    let sub = graph.spanning_subgraph(&ids).expect("sub");
    let flow = oracle_nz3(&sub).expect("small").expect("even ladders carry flows");
    (graph, sub, flow)
}

/// A Cayley graph, a normal subgroup avoiding its connection, and a
/// nowhere-zero flow on the quotient. Retries until the quotient has one.
pub fn random_quotient_instance<R: Rng>(rng: &mut R) -> (CayleyMultigraph, BTreeSet<usize>, Z3Flow) {
    loop {
        let group = match rng.gen_range(0..3) {
            0 => FiniteGroup::cyclic(rng.gen_range(6..=18)).unwrap(),
            1 => FiniteGroup::cyclic_product(rng.gen_range(3..=6), 2).unwrap(),
            _ => FiniteGroup::dihedral(rng.gen_range(3..=7)).unwrap(),
        };
        let order = group.order();
        let centre: Vec<usize> = (1..order).filter(|&g| (0..order).all(|h| group.mul_idx(g, h) == group.mul_idx(h, g))).collect();
        let mut candidates: Vec<BTreeSet<usize>> = centre.iter().map(|&g| group.subgroup(&[g]).unwrap()).collect();
        if let GroupShape::Dihedral(n) = shape(&group) {
            candidates.push(group.subgroup(&[rotation(&group, n)]).unwrap());
        }
        let Some(normal) = candidates.into_iter().filter(|n| group.is_normal(n) && n.len() < order).collect::<Vec<_>>().choose(rng).cloned() else {
            continue;
        };
        let outside: Vec<usize> = (0..order).filter(|g| !normal.contains(g)).collect();
        let mut elements = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let g = *outside.choose(rng).unwrap();
            elements.push(g);
            if group.inv_idx(g) != g {
                elements.push(group.inv_idx(g));
            }
        }
        let Ok(conn) = ConnectionMultiset::new(&group, &elements) else { continue };
        let Ok(gamma) = CayleyMultigraph::new(group.clone(), conn) else { continue };
        let Ok(q) = gamma.quotient(&normal) else { continue };
        if let Ok(Some(flow)) = oracle_nz3(q.graph.graph()) {
            return (gamma, normal, flow);
        }
    }
}

enum GroupShape {
    Dihedral(usize),
    Other,
}

fn shape(group: &FiniteGroup) -> GroupShape {
    let order = group.order();
    let abelian = (0..order).all(|g| (0..order).all(|h| group.mul_idx(g, h) == group.mul_idx(h, g)));
    if abelian {
        GroupShape::Other
    } else {
        GroupShape::Dihedral(order / 2)
    }
}

/// An element of order `n` in a dihedral group of order `2n`.
fn rotation(group: &FiniteGroup, n: usize) -> usize {
    (0..group.order()).find(|&g| group.order_idx(g) == n).expect("rotation")
}

/// `(y, involutions)` for a group: the first element of order above 2 and
/// every involution.
pub fn multiset_inputs(group: &FiniteGroup) -> Option<(usize, Vec<usize>)> {
    let y = (0..group.order()).find(|&g| group.order_idx(g) > 2)?;
    let inv: Vec<usize> = (0..group.order()).filter(|&g| group.order_idx(g) == 2).collect();
    Some((y, inv))
}
