//! Circular and Möbius ladders, their flows, and gluing null-rung ladder
//! flows onto a flow of a second subgraph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::flow::{verify, FlowError, Z3Flow};
use crate::graph::{CayleyMultigraph, ConnectionMultiset, EdgeId, Graph, GraphError, VertexId};
use crate::group::{FiniteGroup, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LadderError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("not a ladder: {0}")]
    Shape(String),
    #[error("plan condition {condition} fails: {detail}")]
    Plan { condition: &'static str, detail: String },
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LadderKind {
    Circular,
    Mobius,
}

impl fmt::Display for LadderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LadderKind::Circular => "circular",
            LadderKind::Mobius => "mobius",
        })
    }
}

/// A ladder built as a Cayley graph, with its rungs identified.
#[derive(Debug, Clone)]
pub struct Ladder {
    pub kind: LadderKind,
    pub t: usize,
    pub cayley: CayleyMultigraph,
    pub rungs: BTreeSet<EdgeId>,
    pub rails: BTreeSet<EdgeId>,
}

/// `CL_t = Cay(Z_t × Z_2, {(1,0), (t−1,0), (0,1)})` or
/// `M_t = Cay(Z_2t, {1, 2t−1, t})`.
pub fn make_ladder(kind: LadderKind, t: usize) -> Result<Ladder, LadderError> {
    if t < 2 {
        return Err(LadderError::Parameter(format!("a ladder needs at least 2 rungs, got {t}")));
    }
    let (group, entries) = match kind {
        LadderKind::Circular => {
            let g = FiniteGroup::cyclic_product(t, 2)?;
            // (i, j) is stored at 2i + j.
            (g, vec![("rail", 2), ("rail^-1", 2 * (t - 1)), ("rung", 1)])
        }
        LadderKind::Mobius => {
            let g = FiniteGroup::cyclic(2 * t)?;
            (g, vec![("rail", 1), ("rail^-1", 2 * t - 1), ("rung", t)])
        }
    };
    let entries = entries.into_iter().map(|(n, g)| (n.to_string(), g)).collect();
    let cayley = CayleyMultigraph::new(group.clone(), ConnectionMultiset::named(&group, entries)?)?;
    let rungs = cayley.edges_labelled("rung").map(|e| e.id).collect();
    let rails = cayley.edges_labelled("rail").map(|e| e.id).collect();
    Ok(Ladder { kind, t, cayley, rungs, rails })
}

impl Ladder {
    pub fn graph(&self) -> &Graph {
        self.cayley.graph()
    }

    /// Rungs in the order they are met along the rails, starting at `start`.
    pub fn layout(&self, start: EdgeId) -> Result<LadderLayout, LadderError> {
        LadderLayout::identify(self.graph(), &self.rungs, start)
    }
}

/// A cubic graph seen as a ladder: rung `j` joins `P_j` and `Q_j`, and the
/// rails are directed cycles listed as `(vertex, outgoing rail edge)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderLayout {
    pub kind: LadderKind,
    pub rungs: Vec<(VertexId, VertexId, EdgeId)>,
    pub rail_cycles: Vec<Vec<(VertexId, EdgeId)>>,
}

impl LadderLayout {
    pub fn t(&self) -> usize {
        self.rungs.len()
    }

    /// Recovers the ladder structure of `graph` given its rung set.
    pub fn identify(graph: &Graph, rungs: &BTreeSet<EdgeId>, start: EdgeId) -> Result<Self, LadderError> {
        let shape = |m: String| LadderError::Shape(m);
        if !rungs.contains(&start) {
            return Err(shape(format!("edge {start} is not a rung")));
        }
        if graph.regular_degree() != Some(3) {
            return Err(shape("the graph is not cubic".into()));
        }
        let mut partner: BTreeMap<VertexId, (VertexId, EdgeId)> = BTreeMap::new();
        for &r in rungs {
            let e = graph.edge(r)?;
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                if partner.insert(a, (b, r)).is_some() {
                    return Err(shape(format!("two rungs meet at vertex {a}")));
                }
            }
        }
        if partner.len() != graph.vertex_count() {
            return Err(shape("the rungs do not form a perfect matching".into()));
        }
        let rail_edges: BTreeSet<EdgeId> = graph.edge_ids().filter(|e| !rungs.contains(e)).collect();
        let walk = |from: VertexId| -> Vec<(VertexId, EdgeId)> {
            let mut used = BTreeSet::new();
            let mut out = Vec::new();
            let mut v = from;
            loop {
                let Some(e) = graph.incident(v).find(|e| rail_edges.contains(&e.id) && !used.contains(&e.id)) else {
                    break;
                };
                used.insert(e.id);
                out.push((v, e.id));
                v = e.other(v);
                if v == from {
                    break;
                }
            }
            out
        };
        let first = graph.edge(start)?;
        let p0 = first.u;
        let outer = walk(p0);
        let n = graph.vertex_count();
        let t = n / 2;
        if outer.len() == t && 2 * t == n {
            let inner_start = partner[&p0].0;
            let inner_full = walk(inner_start);
            // Walk the inner rail in the direction matching the outer one.
            let mut inner = Vec::with_capacity(t);
            for j in 0..t {
                let pj = outer[j].0;
                let qj = partner[&pj].0;
                let qn = partner[&outer[(j + 1) % t].0].0;
                let e = graph
                    .incident(qj)
                    .filter(|e| rail_edges.contains(&e.id) && e.other(qj) == qn)
                    .find(|e| !inner.iter().any(|&(_, id)| id == e.id))
                    .ok_or_else(|| shape(format!("no rail between {qj} and {qn}")))?;
                inner.push((qj, e.id));
            }
            if inner_full.len() != t {
                return Err(shape("rails have different lengths".into()));
            }
            let rungs = outer.iter().map(|&(p, _)| (p, partner[&p].0, partner[&p].1)).collect();
            Ok(Self { kind: LadderKind::Circular, rungs, rail_cycles: vec![outer, inner] })
        } else if outer.len() == n && n % 2 == 0 {
            let rungs: Vec<_> = outer[..t].iter().map(|&(p, _)| (p, partner[&p].0, partner[&p].1)).collect();
            for (j, &(_, q, _)) in rungs.iter().enumerate() {
                if outer[t + j].0 != q {
                    return Err(shape("rung partners are not opposite on the rail cycle".into()));
                }
            }
            Ok(Self { kind: LadderKind::Mobius, rungs, rail_cycles: vec![outer] })
        } else {
            Err(shape(format!("rail cycle through {p0} has length {}", outer.len())))
        }
    }
}

/// A nowhere-zero flow on a ladder, if one exists: the ladder must be
/// bipartite, and then all arcs point from one colour class to the other.
pub fn ladder_flow(ladder: &Ladder) -> Option<Z3Flow> {
    let graph = ladder.graph();
    let colour = graph.two_colouring()?;
    let mut flow = Z3Flow::empty();
    for e in graph.edges() {
        let (tail, head) = if colour[e.u] == Some(false) { (e.u, e.v) } else { (e.v, e.u) };
        flow.set(e.id, tail, head, 1);
    }
    Some(flow)
}

/// A flow on a non-bipartite ladder whose only zero is `rung`.
pub fn ladder_flow_null_rung(ladder: &Ladder, rung: EdgeId) -> Result<Z3Flow, LadderError> {
    if ladder.graph().is_bipartite() {
        return Err(LadderError::Parameter(format!(
            "the {} ladder with {} rungs is bipartite and has a nowhere-zero flow",
            ladder.kind, ladder.t
        )));
    }
    null_rung_flow(ladder.graph(), &ladder.layout(rung)?)
}

/// Rung `0` of the layout gets value 0, the others alternate; rails are
/// directed around their cycles and valued to restore conservation.
pub fn null_rung_flow(graph: &Graph, layout: &LadderLayout) -> Result<Z3Flow, LadderError> {
    let t = layout.t();
    for first in [1u8, 2] {
        let mut flow = Z3Flow::empty();
        let mut net_in: BTreeMap<VertexId, u8> = BTreeMap::new();
        for (j, &(p, q, e)) in layout.rungs.iter().enumerate() {
            let x = if j == 0 { 0 } else if j % 2 == 1 { first } else { 3 - first };
            flow.set(e, p, q, x);
            net_in.insert(p, (3 - x) % 3);
            net_in.insert(q, x);
        }
        let mut ok = true;
        for cycle in &layout.rail_cycles {
            let closes = cycle.iter().map(|(v, _)| net_in[v] as u32).sum::<u32>() % 3 == 0;
            let Some(values) = closes.then(|| rail_values(cycle, &net_in)).flatten() else {
                ok = false;
                break;
            };
            for (i, &(v, e)) in cycle.iter().enumerate() {
                let w = cycle[(i + 1) % cycle.len()].0;
                flow.set(e, v, w, values[i]);
            }
        }
        if !ok {
            continue;
        }
        let check = verify(graph, &flow)?;
        if check.valid && flow.null_set() == BTreeSet::from([layout.rungs[0].2]) {
            return Ok(flow);
        }
    }
    Err(LadderError::Shape(format!("no null-rung flow found on the {} ladder with {t} rungs", layout.kind)))
}

/// Values of the rail arcs `v_i → v_{i+1}` given the net inflow from the
/// rungs, with the first arc's value chosen so that none is zero.
fn rail_values(cycle: &[(VertexId, EdgeId)], net_in: &BTreeMap<VertexId, u8>) -> Option<Vec<u8>> {
    [1u8, 2].into_iter().find_map(|a| {
        let mut values = Vec::with_capacity(cycle.len());
        let mut f = a;
        values.push(f);
        for &(v, _) in &cycle[1..] {
            f = (f + net_in[&v]) % 3;
            values.push(f);
        }
        values.iter().all(|&x| x != 0).then_some(values)
    })
}

/// The data needed to glue null-rung ladder flows onto a flow on `Λ`.
#[derive(Debug, Clone)]
pub struct LadderPlan {
    /// The ambient graph.
    pub ambient: Graph,
    /// Spanning subgraph whose components are circular ladders.
    pub sigma: Graph,
    pub rungs: BTreeSet<EdgeId>,
    pub lambda: Graph,
    pub lambda_flow: Z3Flow,
}

/// One ladder component of `Σ` and the edges it shares with `Λ`.
#[derive(Debug, Clone)]
pub struct PlanComponent {
    pub vertices: Vec<VertexId>,
    pub graph: Graph,
    pub rungs: BTreeSet<EdgeId>,
    pub shared: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanCheck {
    pub condition: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn plan_error(condition: &'static str, detail: impl Into<String>) -> LadderError {
    LadderError::Plan { condition, detail: detail.into() }
}

impl LadderPlan {
    /// Splits `Σ` into components and checks all four gluing conditions.
    pub fn validate(&self) -> Result<Vec<PlanComponent>, LadderError> {
        // (i) spanning, each component a circular ladder with an odd number of rungs
        if self.sigma.vertices() != self.ambient.vertices() {
            return Err(plan_error("(i)", "Σ is not spanning"));
        }
        for e in self.sigma.edges().iter().chain(self.lambda.edges()) {
            if !self.ambient.edge(e.id).is_ok_and(|a| a.joins(e.u, e.v)) {
                return Err(plan_error("(i)", format!("edge {} is not an edge of the ambient graph", e.id)));
            }
        }
        let mut components = Vec::new();
        let mut t_common = None;
        for vertices in self.sigma.components() {
            let graph = self.sigma.induced(&vertices)?;
            let rungs: BTreeSet<EdgeId> = graph.edge_ids().filter(|e| self.rungs.contains(e)).collect();
            let start = *rungs
                .iter()
                .next()
                .ok_or_else(|| plan_error("(i)", format!("component containing {} has no rungs", vertices[0])))?;
            let layout = LadderLayout::identify(&graph, &rungs, start)
                .map_err(|e| plan_error("(i)", format!("component containing {}: {e}", vertices[0])))?;
            if layout.kind != LadderKind::Circular || layout.t() % 2 == 0 || layout.t() < 3 {
                return Err(plan_error(
                    "(i)",
                    format!("component containing {} is a {} ladder with {} rungs; need a circular ladder with an odd number of rungs", vertices[0], layout.kind, layout.t()),
                ));
            }
            if *t_common.get_or_insert(layout.t()) != layout.t() {
                return Err(plan_error("(i)", "components have different numbers of rungs"));
            }
            let shared = graph.edge_ids().filter(|e| self.lambda.contains_edge(*e)).collect();
            components.push(PlanComponent { vertices, graph, rungs, shared });
        }
        // (ii)
        let union = self.sigma.union(&self.lambda)?;
        if !self.ambient.is_parity_subgraph(&union) {
            return Err(plan_error("(ii)", "Σ ∪ Λ is not a parity subgraph"));
        }
        // (iii)
        for c in &components {
            if c.shared.is_empty() || c.shared.len() > 2 {
                return Err(plan_error(
                    "(iii)",
                    format!("component containing {} shares {} edges with Λ", c.vertices[0], c.shared.len()),
                ));
            }
            if let Some(e) = c.shared.iter().find(|e| !c.rungs.contains(e)) {
                return Err(plan_error("(iii)", format!("shared edge {e} is not a rung")));
            }
        }
        // (iv)
        let check = verify(&self.lambda, &self.lambda_flow).map_err(|e| plan_error("(iv)", format!("flow on Λ: {e}")))?;
        if !check.valid {
            return Err(plan_error("(iv)", format!("flow on Λ violates conservation at {:?}", check.violations)));
        }
        let shared_all: BTreeSet<EdgeId> = components.iter().flat_map(|c| c.shared.iter().copied()).collect();
        if let Some(e) = self.lambda_flow.null_set().iter().find(|e| !shared_all.contains(e)) {
            return Err(plan_error("(iv)(a)", format!("edge {e} carries 0 but is not shared with Σ")));
        }
        for c in &components {
            if c.shared.iter().all(|e| self.lambda_flow.value(*e) == Some(0)) {
                return Err(plan_error(
                    "(iv)(b)",
                    format!("every shared edge of the component containing {} carries 0", c.vertices[0]),
                ));
            }
        }
        Ok(components)
    }

    /// Pass/fail per condition, for reports.
    pub fn checks(&self) -> Vec<PlanCheck> {
        let names = ["(i)", "(ii)", "(iii)", "(iv)(a)", "(iv)(b)"];
        match self.validate() {
            Ok(_) => names.iter().map(|&c| PlanCheck { condition: c, pass: true, detail: String::new() }).collect(),
            Err(LadderError::Plan { condition, detail }) => {
                let failed_at = names.iter().position(|&c| c == condition || (condition == "(iv)" && c == "(iv)(a)")).unwrap_or(0);
                names
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| PlanCheck {
                        condition: c,
                        pass: i < failed_at,
                        detail: if i == failed_at { detail.clone() } else { String::new() },
                    })
                    .collect()
            }
            Err(other) => vec![PlanCheck { condition: "(i)", pass: false, detail: other.to_string() }],
        }
    }
}

/// Glues the plan into a nowhere-zero flow on `Σ ∪ Λ`.
pub fn compose(plan: &LadderPlan) -> Result<(Graph, Z3Flow), LadderError> {
    let components = plan.validate()?;
    let phi = &plan.lambda_flow;
    let mut result = phi.clone();
    for c in &components {
        let e = *c
            .shared
            .iter()
            .find(|e| phi.value(**e) != Some(0))
            .expect("validated (iv)(b)");
        let e_other = c.shared.iter().copied().find(|&x| x != e);
        let layout = LadderLayout::identify(&c.graph, &c.rungs, e)?;
        let mut phi_i = null_rung_flow(&c.graph, &layout)?;
        if let Some(f) = e_other {
            if phi_i.arc(f) != phi.arc(f) {
                phi_i = phi_i.reverse();
            }
        }
        let d = phi.arc(e).expect("shared edge is in Λ");
        phi_i.set(e, d.tail, d.head, 0);
        if let Some(f) = e_other {
            let sum = (phi.value(f).expect("in Λ") + phi_i.value(f).expect("in Σ")) % 3;
            if sum == 0 {
                phi_i = phi_i.negate();
            }
        }
        result = result.add(&phi_i);
    }
    let union = plan.sigma.union(&plan.lambda)?;
    let check = verify(&union, &result)?;
    if !check.ok() {
        return Err(LadderError::Plan {
            condition: "result",
            detail: format!("composed flow fails verification at {:?}", check.violations),
        });
    }
    Ok((union, result))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{is_nowhere_zero_flow, oracle_nz3};

    #[test]
    fn ladder_shapes() {
        let cl3 = make_ladder(LadderKind::Circular, 3).unwrap();
        assert_eq!(cl3.graph().vertex_count(), 6);
        assert_eq!(cl3.graph().edge_count(), 9);
        assert_eq!(cl3.rungs.len(), 3);
        let m3 = make_ladder(LadderKind::Mobius, 3).unwrap();
        assert_eq!((m3.graph().vertex_count(), m3.graph().edge_count()), (6, 9));
        assert!(!make_ladder(LadderKind::Circular, 5).unwrap().graph().is_bipartite());
        assert!(make_ladder(LadderKind::Mobius, 5).unwrap().graph().is_bipartite());
        let cl2 = make_ladder(LadderKind::Circular, 2).unwrap();
        assert_eq!((cl2.graph().vertex_count(), cl2.graph().edge_count()), (4, 6));
        assert!(make_ladder(LadderKind::Circular, 1).is_err());
    }

    #[test]
    fn layouts() {
        for t in 2..=7 {
            for kind in [LadderKind::Circular, LadderKind::Mobius] {
                let l = make_ladder(kind, t).unwrap();
                let start = *l.rungs.iter().next().unwrap();
                let layout = l.layout(start).unwrap();
                assert_eq!(layout.kind, kind, "{kind} {t}");
                assert_eq!(layout.t(), t);
                assert_eq!(layout.rungs[0].2, start);
            }
        }
    }

    #[test]
    fn flows_match_parity() {
        for t in 2..=8 {
            let l = make_ladder(LadderKind::Circular, t).unwrap();
            let f = ladder_flow(&l);
            assert_eq!(f.is_some(), t % 2 == 0, "CL_{t}");
            if let Some(f) = f {
                assert!(is_nowhere_zero_flow(l.graph(), &f));
            }
            assert_eq!(oracle_nz3(l.graph()).unwrap().is_some(), t % 2 == 0);
        }
    }

    #[test]
    fn null_rung_on_every_rung() {
        for (kind, t) in [(LadderKind::Circular, 3), (LadderKind::Circular, 5), (LadderKind::Circular, 7), (LadderKind::Mobius, 2), (LadderKind::Mobius, 4), (LadderKind::Mobius, 6)] {
            let l = make_ladder(kind, t).unwrap();
            for &r in &l.rungs {
                let f = ladder_flow_null_rung(&l, r).unwrap();
                assert!(verify(l.graph(), &f).unwrap().valid);
                assert_eq!(f.null_set(), BTreeSet::from([r]), "{kind} {t}");
            }
        }
        let cl4 = make_ladder(LadderKind::Circular, 4).unwrap();
        let r = *cl4.rungs.iter().next().unwrap();
        assert!(matches!(ladder_flow_null_rung(&cl4, r), Err(LadderError::Parameter(_))));
    }

    /// Two disjoint prisms plus `links` extra edges; returns the ambient
    /// graph, the rung set and one rung of the first prism per requested index.
    fn two_prisms(links: &[(usize, usize)]) -> (Graph, BTreeSet<EdgeId>) {
        let l = make_ladder(LadderKind::Circular, 3).unwrap();
        let mut edges = Vec::new();
        for copy in 0..2 {
            for e in l.graph().edges() {
                edges.push(crate::graph::Edge { id: edges.len(), u: e.u + 6 * copy, v: e.v + 6 * copy, label: e.label.clone(), dart: None });
            }
        }
        for &(u, v) in links {
            edges.push(crate::graph::Edge { id: edges.len(), u, v, label: "link".into(), dart: None });
        }
        let g = Graph::new((0..12).collect(), edges).unwrap();
        let rungs = g.edges().iter().filter(|e| e.label == "rung").map(|e| e.id).collect();
        (g, rungs)
    }

    fn rung_ids(g: &Graph) -> Vec<EdgeId> {
        g.edges().iter().filter(|e| e.label == "rung" && e.u < 6).map(|e| e.id).collect()
    }

    fn plan_for(g: &Graph, rungs: &BTreeSet<EdgeId>, flow: Z3Flow) -> LadderPlan {
        let sigma_ids: Vec<EdgeId> = g.edges().iter().filter(|e| e.label != "link").map(|e| e.id).collect();
        let lambda_ids: Vec<EdgeId> = flow.entries().map(|(e, _, _)| e).collect();
        LadderPlan {
            ambient: g.clone(),
            sigma: g.spanning_subgraph(&sigma_ids).unwrap(),
            rungs: rungs.clone(),
            lambda: g.edge_subgraph(&lambda_ids).unwrap(),
            lambda_flow: flow,
        }
    }

    /// A directed cycle `a → b → b+6 → a+6 → a` through rung `{a, b}` of each prism.
    fn cycle_through(g: &Graph, flow: &mut Z3Flow, rung: EdgeId, value: u8) {
        let r = g.edge(rung).unwrap().clone();
        let (a, b) = (r.u, r.v);
        flow.set(rung, a, b, value);
        flow.set(rung + 9, b + 6, a + 6, value);
        for e in g.edges().iter().filter(|e| e.label == "link") {
            if e.joins(b, b + 6) {
                flow.set(e.id, b, b + 6, value);
            }
            if e.joins(a + 6, a) {
                flow.set(e.id, a + 6, a, value);
            }
        }
    }

    #[test]
    fn compose_with_one_shared_rung() {
        let (g0, _) = two_prisms(&[]);
        let r = g0.edge(rung_ids(&g0)[0]).unwrap().clone();
        let (g, rungs) = two_prisms(&[(r.v, r.v + 6), (r.u + 6, r.u)]);
        let mut flow = Z3Flow::empty();
        cycle_through(&g, &mut flow, r.id, 1);
        let plan = plan_for(&g, &rungs, flow);
        let (union, f) = compose(&plan).unwrap();
        assert!(is_nowhere_zero_flow(&union, &f));
        assert!(plan.checks().iter().all(|c| c.pass));
    }

    #[test]
    fn compose_with_two_shared_rungs() {
        let (g0, _) = two_prisms(&[]);
        let ids = rung_ids(&g0);
        let r = g0.edge(ids[0]).unwrap().clone();
        let s = g0.edge(ids[1]).unwrap().clone();
        let links = [(r.v, r.v + 6), (r.u + 6, r.u), (s.v, s.v + 6), (s.u + 6, s.u)];
        let (g, rungs) = two_prisms(&links);
        for (vr, vs) in [(1, 1), (1, 2), (2, 1)] {
            let mut flow = Z3Flow::empty();
            cycle_through(&g, &mut flow, r.id, vr);
            cycle_through(&g, &mut flow, s.id, vs);
            let plan = plan_for(&g, &rungs, flow.clone());
            let (union, f) = compose(&plan).unwrap();
            assert!(is_nowhere_zero_flow(&union, &f));
            // Off Σ the composed flow is the flow on Λ.
            for e in g.edges().iter().filter(|e| e.label == "link") {
                assert_eq!(f.value_along(e.id, flow.arc(e.id).unwrap().tail), flow.value(e.id));
            }
        }
    }

    #[test]
    fn plan_rejects_all_zero_shared_edges() {
        let (g, rungs) = two_prisms(&[]);
        let mut flow = Z3Flow::empty();
        for id in rung_ids(&g).into_iter().take(2) {
            for id in [id, id + 9] {
                let e = g.edge(id).unwrap();
                flow.set(id, e.u, e.v, 0);
            }
        }
        let err = plan_for(&g, &rungs, flow).validate().unwrap_err();
        assert!(matches!(err, LadderError::Plan { condition: "(iv)(b)", .. }), "{err}");
    }

    #[test]
    fn plan_rejects_zero_outside_sigma() {
        let (g0, _) = two_prisms(&[]);
        let r = g0.edge(rung_ids(&g0)[0]).unwrap().clone();
        let (g, rungs) = two_prisms(&[(r.v, r.v + 6), (r.u + 6, r.u)]);
        let mut flow = Z3Flow::empty();
        cycle_through(&g, &mut flow, r.id, 0);
        let err = plan_for(&g, &rungs, flow).validate().unwrap_err();
        assert!(matches!(err, LadderError::Plan { condition: "(iv)(a)", .. }), "{err}");
    }

    #[test]
    fn plan_rejects_even_ladders() {
        let l = make_ladder(LadderKind::Circular, 4).unwrap();
        let g = l.graph().clone();
        let plan = LadderPlan {
            ambient: g.clone(),
            sigma: g.clone(),
            rungs: l.rungs.clone(),
            lambda: g.spanning_subgraph(&[]).unwrap(),
            lambda_flow: Z3Flow::empty(),
        };
        assert!(matches!(plan.validate(), Err(LadderError::Plan { condition: "(i)", .. })));
    }
}
