//! `Cay(G, {x, ay, (ay)^-1, y, y^-1})` over `(Z2^2 x Zp) ⋊ Z3k`: an explicit
//! partition certificate built from the blocks `ℋ_ε = {a^i y^{3j} : j ≡ ε}`.

use std::collections::BTreeSet;

use crate::graph::{CayleyMultigraph, VertexId};
use crate::pseudoforest::{certificate_for_partition, classify, ComponentKind, PartitionCertificate};

use super::{
    build_gamma, condition, from_certificate, searched_certificate, Construction, ConstructionError, GammaSpec, Report, Words,
};

type Set = BTreeSet<VertexId>;


fn union<'a>(sets: impl IntoIterator<Item = &'a Set>) -> Set {
    sets.into_iter().flat_map(|s| s.iter().copied()).collect()
}

fn minus(a: &Set, b: &Set) -> Set {
    a.difference(b).copied().collect()
}

// Membership table: `x_α y^l ℋ_ε ⊆ U` for these (α, l, ε).
const U_BLOCKS: [(usize, i64, usize); 12] = [
    (0, 0, 0), (1, 0, 1), (2, 0, 1), (3, 0, 0),
    (0, 1, 1), (1, 1, 0), (2, 1, 0), (3, 1, 1),
    (0, 2, 0), (1, 2, 1), (2, 2, 1), (3, 2, 0),
];

fn blocks(w: &Words, p: u32, k: u32) -> [Set; 2] {
    let (pi, ki) = (p as i64, k as i64);
    let block = |eps: i64| -> Set {
        (0..ki)
            .filter(|j| j % 2 == eps)
            .flat_map(|j| (0..pi).map(move |i| (i, j)))
            .map(|(i, j)| w.mul(w.a(i), w.y(3 * j)))
            .collect()
    };
    [block(0), block(1)]
}

/// The block split `U = X0·ℋ0 ∪ X1·ℋ1` on its own, before any transversal
/// is chosen.
pub fn gamma2_split(p: u32, k: u32, r: u32) -> Result<(CayleyMultigraph, BTreeSet<VertexId>), ConstructionError> {
    let cayley = build_gamma(&GammaSpec::Gamma2 { p, k, r })?;
    let w = Words::new(cayley.group())?;
    let h = blocks(&w, p, k);
    let u = U_BLOCKS
        .iter()
        .flat_map(|&(a, l, e)| w.left(w.mul(w.x(a), w.y(l)), &h[e]))
        .collect();
    Ok((cayley, u))
}

pub fn gamma2_certificate(p: u32, k: u32, r: u32) -> Result<Construction, ConstructionError> {
    const STAGE: &str = "gamma2 certificate";
    let cayley = build_gamma(&GammaSpec::Gamma2 { p, k, r })?;
    let group = cayley.group().clone();
    let graph = cayley.graph().clone();
    let w = Words::new(&group)?;
    let mut report = Report::new("gamma2", &[("p", p), ("k", k), ("r", r)]);
    let pi = p as i64;

    // P = <a> and the right translate S·g.
    let h = blocks(&w, p, k);
    let pset = w.a_set(0..pi);
    let right = |set: &Set, g: usize| group.right_translate(set, g);
    let xy = |alpha: usize, l: i64| w.mul(w.x(alpha), w.y(l));
    let piece = |alpha: usize, l: i64, eps: usize| w.left(xy(alpha, l), &h[eps]);

    let u: Set = U_BLOCKS.iter().flat_map(|&(a, l, e)| piece(a, l, e)).collect();
    let wset: Set = minus(&graph.vertices().iter().copied().collect(), &u);
    let x1 = w.x(1);
    report.check("W = x1·U", w.left(x1, &u) == wset);
    report.check("left translation by x1 maps Γ[U] onto Γ[W]", cayley.translation_isomorphic(&u, x1)?);

    let sub_u = graph.induced(&u)?;
    let classes = classify(&sub_u);
    let two_p_cycles = classes
        .components
        .iter()
        .filter(|c| c.kind == ComponentKind::Unicyclic && c.vertices.len() == 2 * p as usize && c.cycle.len() == 2 * p as usize)
        .count();
    report.check("Γ[U] is a pseudoforest", classes.is_pseudoforest());
    report.check(format!("Γ[U] has exactly two {}-cycles", 2 * p), two_p_cycles == 2 && classes.count(ComponentKind::Unicyclic) == 2);
    let y_edges: BTreeSet<(VertexId, VertexId)> =
        sub_u.edges().iter().filter(|e| e.label == "y").map(|e| (e.u.min(e.v), e.u.max(e.v))).collect();
    let expected_y: BTreeSet<(VertexId, VertexId)> = (0..pi)
        .flat_map(|i| {
            [0usize, 3].map(|alpha| {
                let lo = w.prod(&[w.x(alpha), w.a(i), w.y(-1)]);
                let hi = w.prod(&[w.x(alpha), w.a(i)]);
                (lo.min(hi), lo.max(hi))
            })
        })
        .collect();
    report.check("y-edges of Γ[U] are {x_α a^i y^-1, x_α a^i} for α ∈ {0, 3}", y_edges == expected_y);

    if k == 1 {
        // y^3 = 1 folds x1·P·y^-3 back onto the cycle x1·P, and every edge
        // component of Γ[U] then only sees cycles of Γ[W]: this split has no
        // transversal matching. Take the certificate from a searched flow.
        report.check("k = 1: the block split admits no transversal matching", certificate_for_partition(&graph, &u, &wset)?.is_none());
        return searched_certificate(cayley, report);
    }

    // The transversal U′ and its three-way split by the edge used to leave U.
    let removed = union([&pset, &w.left(w.x(3), &pset), &right(&pset, w.y(-1)), &w.left(w.x(3), &right(&pset, w.y(-1)))]);
    let listed = union(&[
        piece(0, 0, 0), piece(1, 0, 1), piece(2, 0, 1), piece(3, 0, 0), piece(0, 1, 1), piece(1, 1, 0),
        piece(0, 2, 0), piece(1, 2, 1), piece(2, 2, 1), piece(3, 2, 0),
    ]);
    let u_prime = minus(&listed, &removed);
    let p_y3 = right(&pset, w.y(-3));
    let x1_p_y2 = w.left(x1, &right(&pset, w.y(-2)));
    let x3_p_y1 = w.left(w.x(3), &right(&pset, w.y(-1)));
    let part_x = minus(&union(&[piece(0, 0, 0), piece(1, 0, 1)]), &union([&pset, &p_y3]));
    let part_y = minus(
        &union(&[p_y3.clone(), piece(0, 1, 1), piece(1, 1, 0), piece(2, 2, 1), piece(3, 2, 0)]),
        &union([&x1_p_y2, &x3_p_y1]),
    );
    let part_y_inv = minus(
        &union(&[x1_p_y2.clone(), piece(0, 2, 0), piece(1, 2, 1), piece(2, 0, 1), piece(3, 0, 0)]),
        &union([&w.left(w.x(3), &pset), &right(&pset, w.y(-1))]),
    );
    let parts: [(&str, usize, Set); 3] = [
        ("U'_x", w.x(1), part_x.intersection(&u_prime).copied().collect()),
        ("U'_y", w.y(1), part_y.intersection(&u_prime).copied().collect()),
        ("U'_y^-1", w.y(-1), part_y_inv.intersection(&u_prime).copied().collect()),
    ];
    let mut covered = Set::new();
    for (name, _, set) in &parts {
        if let Some(v) = set.iter().find(|v| covered.contains(v)) {
            return Err(condition(STAGE, "split", format!("{} lies in {name} and an earlier part", group.label(*v))));
        }
        covered.extend(set.iter().copied());
    }
    if let Some(v) = u_prime.difference(&covered).next() {
        return Err(condition(STAGE, "split", format!("{} is in U' but in no part", group.label(*v))));
    }
    let mut matching = Vec::new();
    for (name, z, set) in &parts {
        for &v in set {
            let image = w.mul(v, *z);
            if !wset.contains(&image) {
                return Err(condition(STAGE, *name, format!("ν({}) = {} is not in W", group.label(v), group.label(image))));
            }
            matching.push((v, image));
        }
    }
    matching.sort_unstable();
    let w_prime: Set = matching.iter().map(|&(_, b)| b).collect();
    report.check("ν(U') = x1·U'", w_prime == w.left(x1, &u_prime));
    let certificate = PartitionCertificate { u, w: wset, u_prime, w_prime, matching };
    from_certificate(cayley, certificate, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::verify;

    #[test]
    fn grid_corner_cases() {
        for (p, k, r) in [(5, 1, 1), (7, 1, 2), (5, 3, 1), (7, 3, 4), (7, 5, 1)] {
            let c = gamma2_certificate(p, k, r).unwrap_or_else(|e| panic!("({p},{k},{r}): {e}"));
            assert!(verify(c.graph(), &c.flow).unwrap().ok());
            assert!(c.report.all_pass(), "({p},{k},{r}): {:?}", c.report.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn two_cycles_of_length_2p() {
        let (cay, u) = gamma2_split(5, 1, 1).unwrap();
        let classes = classify(&cay.graph().induced(&u).unwrap());
        let cycles: Vec<usize> = classes
            .components
            .iter()
            .filter(|c| c.kind == ComponentKind::Unicyclic)
            .map(|c| c.cycle.len())
            .collect();
        assert_eq!(cycles, vec![10, 10]);
    }
}
