//! `Cay(G, {x, ay, (ay)^-1, y, y^-1})` over `A4 x Zp` when `y^3 = a^-1`.
//! Here `ay = y^-2`, so everything lives on the cosets `S y^i` of the Klein
//! subgroup `S`. The split `U` is periodic in `i` with period 4 except for a
//! tail block `V2`; the bulk is handled two levels at a time.

use std::collections::BTreeSet;

use crate::graph::VertexId;
use crate::matching::bipartite_matching;
use crate::pseudoforest::{classify, ComponentKind, PartitionCertificate};

use super::{build_gamma, condition, from_certificate, Construction, ConstructionError, GammaSpec, Report, Words};

type Set = BTreeSet<VertexId>;

/// `U = V1 ∪ V2` with the level slabs `S y^{2i} ∪ S y^{2i+1}` covering `V1`.
#[derive(Debug, Clone)]
pub struct DirectPartition {
    pub v1: Set,
    pub v2: Set,
    pub slabs: Vec<Set>,
    /// Transversal pieces of the tail block on the `U` and `W` sides.
    pub tail_u: Set,
    pub tail_w: Set,
}

fn direct_partition(w: &Words, p: u32) -> DirectPartition {
    let n = 3 * p as i64;
    let el = |alpha: usize, i: i64| w.mul(w.x(alpha), w.y(i));
    let levels = |alphas: &[usize], exps: &[i64]| -> Set { alphas.iter().flat_map(|&a| exps.iter().map(move |&i| el(a, i))).collect() };
    let last = if p % 4 == 1 { n - 6 } else { n - 16 };
    let mut v1 = Set::new();
    for i in 0..=last {
        let alphas: &[usize] = if matches!(i % 4, 0 | 1) { &[0, 2] } else { &[1, 3] };
        v1.extend(levels(alphas, &[i]));
    }
    let (v2, tail_u, tail_w) = if p % 4 == 1 {
        let v2: Set = levels(&[0, 2], &[n - 3]).into_iter().chain(levels(&[1, 3], &[n - 5, n - 4, n - 2, n - 1])).collect();
        (v2, levels(&[0, 2], &[n - 3]), levels(&[1, 3], &[n - 3]))
    } else {
        let v2: Set = levels(&[0, 2], &[n - 13, n - 10, n - 9, n - 7, n - 6, n - 3])
            .into_iter()
            .chain(levels(&[1, 3], &[n - 15, n - 14, n - 12, n - 11, n - 8, n - 5, n - 4, n - 2, n - 1]))
            .collect();
        let tail_u = [el(3, n - 15), el(1, n - 14), el(0, n - 13), el(1, n - 8), el(3, n - 8), el(0, n - 3), el(2, n - 3)].into();
        let tail_w = [el(2, n - 15), el(0, n - 14), el(1, n - 13), el(0, n - 8), el(2, n - 8), el(1, n - 3), el(3, n - 3)].into();
        (v2, tail_u, tail_w)
    };
    let slabs = (0..=(last - 1) / 2).map(|i| levels(&[0, 1, 2, 3], &[2 * i, 2 * i + 1])).collect();
    DirectPartition { v1, v2, slabs, tail_u, tail_w }
}

pub fn gamma4_direct(p: u32) -> Result<Construction, ConstructionError> {
    const STAGE: &str = "direct partition";
    let cayley = build_gamma(&GammaSpec::Gamma4 { p, s: p.saturating_sub(1) })?;
    let group = cayley.group().clone();
    let graph = cayley.graph().clone();
    let w = Words::new(&group)?;
    let mut report = Report::new("gamma4", &[("p", p), ("s", p.saturating_sub(1))]);
    let part = direct_partition(&w, p);
    if let Some(v) = part.v1.intersection(&part.v2).next() {
        return Err(condition(STAGE, "V1 ∩ V2 = ∅", group.label(*v).to_string()));
    }
    let u: Set = part.v1.union(&part.v2).copied().collect();
    let all: Set = graph.vertices().iter().copied().collect();
    let wset: Set = all.difference(&u).copied().collect();
    let x1 = w.x(1);
    report.check("W = x1·U", w.left(x1, &u) == wset);

    let sub_u = graph.induced(&u)?;
    let classes = classify(&sub_u);
    report.check("Γ[U] is a pseudoforest", classes.is_pseudoforest());
    let mut u_prime = Set::new();
    let mut w_prime = Set::new();
    let mut matching = Vec::new();
    let slab_of = |v: VertexId| part.slabs.iter().position(|s| s.contains(&v));
    for comp in &classes.components {
        let Some(i) = slab_of(comp.vertices[0]) else { continue };
        if let Some(v) = comp.vertices.iter().find(|&&v| slab_of(v) != Some(i)) {
            return Err(condition(STAGE, format!("slab {i}"), format!("the component of {} leaves the slab at {}", group.label(comp.vertices[0]), group.label(*v))));
        }
        if comp.kind != ComponentKind::Tree {
            return Err(condition(STAGE, format!("slab {i}"), format!("the component of {} is not a tree", group.label(comp.vertices[0]))));
        }
        let members: Set = comp.vertices.iter().copied().collect();
        let pair = comp.vertices.iter().find_map(|&a| {
            graph.neighbors(a).find(|&b| members.contains(&w.mul(x1, b))).map(|b| (a, b))
        });
        let Some((a, b)) = pair else {
            return Err(condition(STAGE, format!("slab {i}"), format!("no edge from the component of {} to its x1-translate", group.label(comp.vertices[0]))));
        };
        u_prime.insert(a);
        w_prime.insert(b);
        matching.push((a, b));
    }

    let tail = graph.induced(&part.v2)?;
    let tail_classes = classify(&tail);
    let sizes = |kind: ComponentKind| {
        let mut v: Vec<usize> = tail_classes.components.iter().filter(|c| c.kind == kind).map(|c| c.vertices.len()).collect();
        v.sort_unstable();
        v
    };
    let tail_shape_ok = if p % 4 == 1 {
        sizes(ComponentKind::Unicyclic) == vec![8] && sizes(ComponentKind::Tree) == vec![1, 1]
    } else {
        sizes(ComponentKind::Unicyclic) == vec![8, 8] && sizes(ComponentKind::Tree) == vec![1, 1, 1, 1, 2, 4, 4]
    };
    report.check("tail block has the expected components", tail_shape_ok);
    let tail_closed = tail.edge_count() == graph.edges().iter().filter(|e| part.v2.contains(&e.u) && part.v2.contains(&e.v)).count()
        && sub_u.edges().iter().all(|e| part.v2.contains(&e.u) == part.v2.contains(&e.v));
    report.check("no edge of Γ[U] joins the tail block to the slabs", tail_closed);
    let tail_match = bipartite_matching(&graph, &part.tail_u, &part.tail_w)
        .ok_or_else(|| condition(STAGE, "tail", "the tail transversals have no perfect matching"))?;
    u_prime.extend(part.tail_u.iter().copied());
    w_prime.extend(part.tail_w.iter().copied());
    matching.extend(tail_match);
    matching.sort_unstable();
    let certificate = PartitionCertificate { u, w: wset, u_prime, w_prime, matching };
    from_certificate(cayley, certificate, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::verify;

    #[test]
    fn small_primes() {
        for p in [5, 7, 11, 13] {
            let c = gamma4_direct(p).unwrap_or_else(|e| panic!("p = {p}: {e}"));
            assert!(verify(c.graph(), &c.flow).unwrap().ok());
            assert!(c.report.all_pass(), "p = {p}: {:?}", c.report.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn tail_shapes() {
        let cay = build_gamma(&GammaSpec::Gamma4 { p: 5, s: 4 }).unwrap();
        let w = Words::new(cay.group()).unwrap();
        let part = direct_partition(&w, 5);
        let classes = classify(&cay.graph().induced(&part.v2).unwrap());
        assert_eq!(classes.count(ComponentKind::Unicyclic), 1);
        assert_eq!(classes.count(ComponentKind::Tree), 2);
        let cay = build_gamma(&GammaSpec::Gamma4 { p: 7, s: 6 }).unwrap();
        let w = Words::new(cay.group()).unwrap();
        let part = direct_partition(&w, 7);
        let classes = classify(&cay.graph().induced(&part.v2).unwrap());
        assert_eq!(classes.count(ComponentKind::Unicyclic), 2);
        let trees: Vec<usize> = classes.trees().map(|c| c.edges.len()).collect();
        assert_eq!(trees.iter().filter(|&&e| e == 3).count(), 2);
        assert_eq!(trees.iter().filter(|&&e| e == 1).count(), 1);
        assert_eq!(trees.iter().filter(|&&e| e == 0).count(), 4);
    }
}
