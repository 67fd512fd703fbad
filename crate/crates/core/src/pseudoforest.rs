//! Pseudoforests, their (0,1)-orientations, and partition certificates for
//! nowhere-zero Z3-flows on 5-valent graphs.
//!
//! A certificate splits the vertices into `U` and `W` such that both induced
//! subgraphs are pseudoforests, picks a transversal of the tree components on
//! each side and perfectly matches the two transversals along edges of the
//! graph. Such a certificate exists exactly when the graph has a nowhere-zero
//! Z3-flow.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flow::{verify, FlowError, Orientation, Z3Flow};
use crate::graph::{EdgeId, Graph, GraphError, VertexId};
use crate::matching::perfect_matching;

/// Largest vertex count accepted by [`search_certificate`].
pub const SEARCH_MAX_VERTICES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PseudoforestError {
    #[error("not a pseudoforest: component containing {0} has more than one cycle")]
    NotPseudoforest(VertexId),
    #[error("invalid transversal: {0}")]
    Transversal(String),
    #[error("invalid certificate: {0}")]
    Certificate(String),
    #[error("{0}")]
    Domain(String),
    #[error("certificate search capacity exceeded: {vertices} vertices, limit {limit}")]
    Capacity { vertices: usize, limit: usize },
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Tree,
    Unicyclic,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub kind: ComponentKind,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    /// For unicyclic components: the cycle's vertices in cyclic order.
    pub cycle: Vec<VertexId>,
}

impl Component {
    pub fn is_tree(&self) -> bool {
        self.kind == ComponentKind::Tree
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentClassification {
    pub components: Vec<Component>,
}

impl ComponentClassification {
    pub fn is_pseudoforest(&self) -> bool {
        self.components.iter().all(|c| c.kind != ComponentKind::Other)
    }

    pub fn trees(&self) -> impl Iterator<Item = &Component> + '_ {
        self.components.iter().filter(|c| c.is_tree())
    }

    pub fn count(&self, kind: ComponentKind) -> usize {
        self.components.iter().filter(|c| c.kind == kind).count()
    }
}

/// Splits `graph` into components and classifies each one.
pub fn classify(graph: &Graph) -> ComponentClassification {
    let components = graph
        .components()
        .into_iter()
        .map(|vertices| {
            let set: BTreeSet<VertexId> = vertices.iter().copied().collect();
            let edges: Vec<EdgeId> = graph
                .edges()
                .iter()
                .filter(|e| set.contains(&e.u))
                .map(|e| e.id)
                .collect();
            let kind = match edges.len().cmp(&vertices.len()) {
                std::cmp::Ordering::Less => ComponentKind::Tree,
                std::cmp::Ordering::Equal => ComponentKind::Unicyclic,
                std::cmp::Ordering::Greater => ComponentKind::Other,
            };
            let cycle = if kind == ComponentKind::Unicyclic { cycle_of(graph, &set) } else { Vec::new() };
            Component { kind, vertices, edges, cycle }
        })
        .collect();
    ComponentClassification { components }
}

/// Peels leaves of a unicyclic component; returns the cycle in cyclic order.
fn cycle_of(graph: &Graph, set: &BTreeSet<VertexId>) -> Vec<VertexId> {
    let (_, core) = peel(graph, set);
    let start = match core.iter().next() {
        Some(&v) => v,
        None => return Vec::new(),
    };
    let mut cycle = vec![start];
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    let mut v = start;
    loop {
        let next = graph
            .incident(v)
            .find(|e| core.contains(&e.other(v)) && !used.contains(&e.id))
            .expect("cycle continues");
        used.insert(next.id);
        v = next.other(v);
        if v == start {
            break;
        }
        cycle.push(v);
    }
    cycle
}

/// Repeatedly removes degree-1 vertices. Returns the removal order as
/// `(leaf, edge to its remaining neighbour)` and the surviving core.
fn peel(graph: &Graph, set: &BTreeSet<VertexId>) -> (Vec<(VertexId, EdgeId, VertexId)>, BTreeSet<VertexId>) {
    let mut alive: BTreeSet<VertexId> = set.clone();
    let mut degree: BTreeMap<VertexId, usize> =
        set.iter().map(|&v| (v, graph.neighbors(v).filter(|w| set.contains(w)).count())).collect();
    let mut queue: VecDeque<VertexId> = set.iter().copied().filter(|v| degree[v] == 1).collect();
    let mut removed = Vec::new();
    while let Some(v) = queue.pop_front() {
        if !alive.contains(&v) || degree[&v] != 1 {
            continue;
        }
        let e = graph
            .incident(v)
            .find(|e| alive.contains(&e.other(v)))
            .expect("leaf has a neighbour");
        let w = e.other(v);
        alive.remove(&v);
        removed.push((v, e.id, w));
        let d = degree.get_mut(&w).expect("neighbour degree");
        *d -= 1;
        if *d == 1 {
            queue.push_back(w);
        }
    }
    (removed, alive)
}

/// Orientation of a pseudoforest with out-degree 0 exactly on `roots` and 1
/// elsewhere: each tree points at its root, each unicyclic component has its
/// cycle directed around and the remaining edges pointing at the cycle.
pub fn zero_one_orientation(graph: &Graph, roots: &BTreeSet<VertexId>) -> Result<Orientation, PseudoforestError> {
    if let Some(&v) = roots.iter().find(|&&v| !graph.contains_vertex(v)) {
        return Err(PseudoforestError::Transversal(format!("{v} is not a vertex of the pseudoforest")));
    }
    let classes = classify(graph);
    let mut orientation = Orientation::new();
    for comp in &classes.components {
        let in_roots: Vec<VertexId> = comp.vertices.iter().copied().filter(|v| roots.contains(v)).collect();
        match comp.kind {
            ComponentKind::Other => return Err(PseudoforestError::NotPseudoforest(comp.vertices[0])),
            ComponentKind::Tree => {
                let root = match in_roots.as_slice() {
                    [r] => *r,
                    [] => {
                        return Err(PseudoforestError::Transversal(format!(
                            "tree component containing {} has no chosen vertex",
                            comp.vertices[0]
                        )))
                    }
                    _ => {
                        return Err(PseudoforestError::Transversal(format!(
                            "tree component containing {} has {} chosen vertices",
                            comp.vertices[0],
                            in_roots.len()
                        )))
                    }
                };
                let mut seen = BTreeSet::from([root]);
                let mut queue = VecDeque::from([root]);
                while let Some(v) = queue.pop_front() {
                    for e in graph.incident(v) {
                        let w = e.other(v);
                        if seen.insert(w) {
                            orientation.set(e.id, w, v);
                            queue.push_back(w);
                        }
                    }
                }
            }
            ComponentKind::Unicyclic => {
                if let Some(r) = in_roots.first() {
                    return Err(PseudoforestError::Transversal(format!(
                        "{r} lies in a unicyclic component"
                    )));
                }
                let set: BTreeSet<VertexId> = comp.vertices.iter().copied().collect();
                let (removed, core) = peel(graph, &set);
                for (leaf, e, w) in removed {
                    orientation.set(e, leaf, w);
                }
                let mut used = BTreeSet::new();
                let start = comp.cycle[0];
                let mut v = start;
                loop {
                    let e = graph
                        .incident(v)
                        .find(|e| core.contains(&e.other(v)) && !used.contains(&e.id))
                        .expect("cycle continues");
                    used.insert(e.id);
                    let w = e.other(v);
                    orientation.set(e.id, v, w);
                    v = w;
                    if v == start {
                        break;
                    }
                }
            }
        }
    }
    Ok(orientation)
}

/// A partition certificate: `(U, W, U′, W′, M)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionCertificate {
    #[serde(rename = "U")]
    pub u: BTreeSet<VertexId>,
    #[serde(rename = "W")]
    pub w: BTreeSet<VertexId>,
    #[serde(rename = "U_prime")]
    pub u_prime: BTreeSet<VertexId>,
    #[serde(rename = "W_prime")]
    pub w_prime: BTreeSet<VertexId>,
    pub matching: Vec<(VertexId, VertexId)>,
}

fn side_name(left: bool) -> &'static str {
    if left {
        "U"
    } else {
        "W"
    }
}

/// Checks that `chosen` is a transversal of the tree components of `sub`.
fn check_transversal(sub: &Graph, chosen: &BTreeSet<VertexId>, side: &str) -> Result<(), PseudoforestError> {
    let classes = classify(sub);
    for comp in &classes.components {
        if comp.kind == ComponentKind::Other {
            return Err(PseudoforestError::Certificate(format!(
                "Γ[{side}] is not a pseudoforest: component containing {} has {} vertices and {} edges",
                comp.vertices[0],
                comp.vertices.len(),
                comp.edges.len()
            )));
        }
        let hits = comp.vertices.iter().filter(|v| chosen.contains(v)).count();
        let expected = usize::from(comp.is_tree());
        if hits != expected {
            return Err(PseudoforestError::Certificate(format!(
                "{side}' meets the {} component containing {} in {hits} vertices",
                if comp.is_tree() { "tree" } else { "unicyclic" },
                comp.vertices[0]
            )));
        }
    }
    Ok(())
}

impl PartitionCertificate {
    /// Checks every certificate condition, naming the first one that fails.
    pub fn validate(&self, graph: &Graph) -> Result<(), PseudoforestError> {
        let bad = |m: String| Err(PseudoforestError::Certificate(m));
        if self.u.is_empty() || self.w.is_empty() {
            return bad("U and W must be non-empty".into());
        }
        if let Some(v) = self.u.intersection(&self.w).next() {
            return bad(format!("U and W share vertex {v}"));
        }
        if self.u.len() + self.w.len() != graph.vertex_count() || !graph.vertices().iter().all(|v| self.u.contains(v) || self.w.contains(v)) {
            return bad("U and W do not partition the vertex set".into());
        }
        for (left, part, chosen) in [(true, &self.u, &self.u_prime), (false, &self.w, &self.w_prime)] {
            if let Some(v) = chosen.iter().find(|v| !part.contains(v)) {
                return bad(format!("{}' contains {v}, which is outside {}", side_name(left), side_name(left)));
            }
            check_transversal(&graph.induced(part)?, chosen, side_name(left))?;
        }
        if self.matching.len() != self.u_prime.len() || self.u_prime.len() != self.w_prime.len() {
            return bad(format!(
                "matching has {} pairs for |U'| = {} and |W'| = {}",
                self.matching.len(),
                self.u_prime.len(),
                self.w_prime.len()
            ));
        }
        let mut seen_u = BTreeSet::new();
        let mut seen_w = BTreeSet::new();
        for &(a, b) in &self.matching {
            if !self.u_prime.contains(&a) || !self.w_prime.contains(&b) {
                return bad(format!("matching pair ({a}, {b}) is not in U' x W'"));
            }
            if !seen_u.insert(a) || !seen_w.insert(b) {
                return bad(format!("matching pair ({a}, {b}) reuses a vertex"));
            }
            if !graph.neighbors(a).any(|x| x == b) {
                return bad(format!("matching pair ({a}, {b}) is not an edge"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("certificate serializes")
    }
}

fn require_five_valent(graph: &Graph) -> Result<(), PseudoforestError> {
    match graph.regular_degree() {
        Some(5) => Ok(()),
        _ => Err(PseudoforestError::Domain("the graph must be 5-valent".into())),
    }
}

/// All-ones flow with out-degree 1 on `U` and 4 on `W`.
pub fn flow_from_certificate(graph: &Graph, cert: &PartitionCertificate) -> Result<Z3Flow, PseudoforestError> {
    require_five_valent(graph)?;
    cert.validate(graph)?;
    let inside_u = zero_one_orientation(&graph.induced(&cert.u)?, &cert.u_prime)?;
    let inside_w = zero_one_orientation(&graph.induced(&cert.w)?, &cert.w_prime)?.reversed();
    let mut orientation = Orientation::new();
    for (e, a) in inside_u.arcs().chain(inside_w.arcs()) {
        orientation.set(e, a.tail, a.head);
    }
    let matched: BTreeMap<VertexId, VertexId> = cert.matching.iter().copied().collect();
    let mut used_match = BTreeSet::new();
    for e in graph.edges() {
        let (a, b) = if cert.u.contains(&e.u) { (e.u, e.v) } else { (e.v, e.u) };
        if !cert.u.contains(&a) || cert.u.contains(&b) {
            continue;
        }
        // `a ∈ U`, `b ∈ W`; the first edge realising a matched pair goes U → W.
        if matched.get(&a) == Some(&b) && used_match.insert(a) {
            orientation.set(e.id, a, b);
        } else {
            orientation.set(e.id, b, a);
        }
    }
    let flow = Z3Flow::uniform(orientation, 1);
    let check = verify(graph, &flow)?;
    if !check.ok() {
        return Err(PseudoforestError::Certificate(format!(
            "constructed orientation violates conservation at {:?}",
            check.violations
        )));
    }
    Ok(flow)
}

/// Reads a certificate off a nowhere-zero flow on a 5-valent graph.
pub fn certificate_from_flow(graph: &Graph, flow: &Z3Flow) -> Result<PartitionCertificate, PseudoforestError> {
    require_five_valent(graph)?;
    let check = verify(graph, flow)?;
    if !check.ok() {
        return Err(PseudoforestError::Domain("the flow must be a valid nowhere-zero Z3-flow".into()));
    }
    let unit = flow.normalize_to_unit()?;
    let out = unit.orientation().out_degrees(graph.capacity());
    let u: BTreeSet<VertexId> = graph.vertices().iter().copied().filter(|&v| out[v] == 1).collect();
    let w: BTreeSet<VertexId> = graph.vertices().iter().copied().filter(|&v| out[v] == 4).collect();
    let mut out_inside_u: BTreeMap<VertexId, usize> = u.iter().map(|&v| (v, 0)).collect();
    let mut in_inside_w: BTreeMap<VertexId, usize> = w.iter().map(|&v| (v, 0)).collect();
    let mut exit: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for (_, arc, _) in unit.entries() {
        match (u.contains(&arc.tail), u.contains(&arc.head)) {
            (true, true) => *out_inside_u.get_mut(&arc.tail).expect("in U") += 1,
            (false, false) => *in_inside_w.get_mut(&arc.head).expect("in W") += 1,
            (true, false) => {
                exit.insert(arc.tail, arc.head);
            }
            (false, true) => {}
        }
    }
    let u_prime: BTreeSet<VertexId> = out_inside_u.iter().filter(|(_, &d)| d == 0).map(|(&v, _)| v).collect();
    let w_prime: BTreeSet<VertexId> = in_inside_w.iter().filter(|(_, &d)| d == 0).map(|(&v, _)| v).collect();
    let matching = u_prime.iter().map(|&a| (a, exit[&a])).collect();
    let cert = PartitionCertificate { u, w, u_prime, w_prime, matching };
    cert.validate(graph)?;
    Ok(cert)
}

/// A certificate with the given `U`/`W` split, if one exists. The choice of
/// transversals reduces to a perfect matching between the tree components of
/// the two sides.
pub fn certificate_for_partition(
    graph: &Graph,
    u: &BTreeSet<VertexId>,
    w: &BTreeSet<VertexId>,
) -> Result<Option<PartitionCertificate>, PseudoforestError> {
    if u.is_empty() || w.is_empty() {
        return Ok(None);
    }
    let cu = classify(&graph.induced(u)?);
    let cw = classify(&graph.induced(w)?);
    if !cu.is_pseudoforest() || !cw.is_pseudoforest() {
        return Ok(None);
    }
    let tu: Vec<&Component> = cu.trees().collect();
    let tw: Vec<&Component> = cw.trees().collect();
    if tu.len() != tw.len() {
        return Ok(None);
    }
    let mut comp_of_w = vec![usize::MAX; graph.capacity()];
    for (i, c) in tw.iter().enumerate() {
        for &v in &c.vertices {
            comp_of_w[v] = i;
        }
    }
    // For each (U-tree, W-tree) pair, the smallest joining edge realises it.
    let mut witness: BTreeMap<(usize, usize), (EdgeId, VertexId, VertexId)> = BTreeMap::new();
    for (i, c) in tu.iter().enumerate() {
        for &a in &c.vertices {
            for e in graph.incident(a) {
                let b = e.other(a);
                let j = comp_of_w[b];
                if j != usize::MAX {
                    let entry = witness.entry((i, j)).or_insert((e.id, a, b));
                    if e.id < entry.0 {
                        *entry = (e.id, a, b);
                    }
                }
            }
        }
    }
    let mut adj = vec![Vec::new(); tu.len()];
    for &(i, j) in witness.keys() {
        adj[i].push(j);
    }
    let Some(m) = perfect_matching(&adj, tw.len()) else {
        return Ok(None);
    };
    let mut cert = PartitionCertificate {
        u: u.clone(),
        w: w.clone(),
        u_prime: BTreeSet::new(),
        w_prime: BTreeSet::new(),
        matching: Vec::new(),
    };
    for (i, j) in m.into_iter().enumerate() {
        let (_, a, b) = witness[&(i, j)];
        cert.u_prime.insert(a);
        cert.w_prime.insert(b);
        cert.matching.push((a, b));
    }
    cert.matching.sort_unstable();
    cert.validate(graph)?;
    Ok(Some(cert))
}

/// Exhaustive search over all splits `(U, W)` with the first vertex in `U`.
/// Returns the first certificate in mask order.
pub fn search_certificate(graph: &Graph) -> Result<Option<PartitionCertificate>, PseudoforestError> {
    let n = graph.vertex_count();
    if n > SEARCH_MAX_VERTICES {
        return Err(PseudoforestError::Capacity { vertices: n, limit: SEARCH_MAX_VERTICES });
    }
    if n < 2 {
        return Ok(None);
    }
    require_five_valent(graph)?;
    let vs = graph.vertices();
    // The conditions are symmetric in U and W, so vertex vs[0] may stay in U.
    for mask in 0u64..(1u64 << (n - 1)) {
        let mut u = BTreeSet::from([vs[0]]);
        let mut w = BTreeSet::new();
        for (bit, &v) in vs[1..].iter().enumerate() {
            if mask >> bit & 1 == 1 {
                w.insert(v);
            } else {
                u.insert(v);
            }
        }
        if !quick_pseudoforest(graph, &u) || !quick_pseudoforest(graph, &w) {
            continue;
        }
        if let Some(cert) = certificate_for_partition(graph, &u, &w)? {
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// Cheap necessary condition: an induced pseudoforest has at most `|S|` edges.
fn quick_pseudoforest(graph: &Graph, set: &BTreeSet<VertexId>) -> bool {
    let inside: usize = set.iter().map(|&v| graph.neighbors(v).filter(|w| set.contains(w)).count()).sum();
    inside / 2 <= set.len()
}
