//! `Cay(G, {x, a, a^-1, y, y^-1})` over `(Z2^2 x Zp) ⋊ Z3k`: glue null-rung
//! ladder flows onto a flow of the `{x, y}`-subgraph on `L ∪ aL`, where
//! `L = {x_α y^i}`, then lift to the whole graph.

use std::collections::BTreeSet;

use crate::flow::{parity_lift, Z3Flow};
use crate::graph::{CayleyMultigraph, Edge, EdgeId, Graph, GraphError, VertexId};
use crate::group::{FamilyIParams, GroupFamily};
use crate::ladder::{compose, LadderPlan};

use super::{build_gamma, condition, finish_flow, Construction, ConstructionError, GammaSpec, Report};

/// A flow whose null set is a prescribed set of edges, obtained by deleting
/// those edges, suppressing the degree-2 vertices and orienting the reduced
/// bipartite graph from one colour class to the other.
#[derive(Debug, Clone)]
pub struct SmoothedFlow {
    pub flow: Z3Flow,
    /// The reduced graph on the branch vertices; edge `i` is the `i`-th path.
    pub reduced: Graph,
    /// The colour class of the reduced graph whose paths point outwards.
    pub sources: BTreeSet<VertexId>,
    pub sinks: BTreeSet<VertexId>,
}

pub fn smoothed_flow(graph: &Graph, null: &BTreeSet<EdgeId>) -> Result<SmoothedFlow, ConstructionError> {
    const STAGE: &str = "reduced graph";
    let rest = graph.delete_edges(null)?;
    let branch: Vec<VertexId> = rest.vertices().iter().copied().filter(|&v| rest.degree(v) != 2).collect();
    if let Some(&v) = branch.iter().find(|&&v| rest.degree(v) % 3 != 0) {
        return Err(condition(STAGE, "valency", format!("vertex {v} has degree {} after deleting the null edges", rest.degree(v))));
    }
    let is_branch = {
        let mut m = vec![false; graph.capacity()];
        for &v in &branch {
            m[v] = true;
        }
        m
    };
    let mut used = vec![false; graph.edges().iter().map(|e| e.id + 1).max().unwrap_or(0)];
    // Each path: its two ends and the steps (edge, from, to) in walking order.
    let mut paths: Vec<(VertexId, VertexId, Vec<(EdgeId, VertexId, VertexId)>)> = Vec::new();
    let mut cycles: Vec<Vec<(EdgeId, VertexId, VertexId)>> = Vec::new();
    let walk = |start: VertexId, first: &Edge, used: &mut Vec<bool>| {
        let mut steps = Vec::new();
        let (mut from, mut edge) = (start, first.clone());
        loop {
            used[edge.id] = true;
            let to = edge.other(from);
            steps.push((edge.id, from, to));
            if is_branch[to] || to == start {
                return (to, steps);
            }
            match rest.incident(to).find(|e| !used[e.id]) {
                Some(next) => {
                    from = to;
                    edge = next.clone();
                }
                None => return (to, steps),
            }
        }
    };
    for &b in &branch {
        let incident: Vec<Edge> = rest.incident(b).cloned().collect();
        for e in incident {
            if !used[e.id] {
                let (end, steps) = walk(b, &e, &mut used);
                paths.push((b, end, steps));
            }
        }
    }
    for e in rest.edges() {
        if !used[e.id] {
            let (_, steps) = walk(e.u, e, &mut used);
            cycles.push(steps);
        }
    }
    let reduced_edges = paths
        .iter()
        .enumerate()
        .map(|(id, (s, t, _))| Edge { id, u: *s, v: *t, label: "path".into(), dart: None })
        .collect();
    let reduced = Graph::new(branch.clone(), reduced_edges).map_err(|e| match e {
        GraphError::Loop(v) => condition(STAGE, "bipartite", format!("a smoothed path closes up at {v}")),
        other => other.into(),
    })?;
    let colour = reduced
        .two_colouring()
        .ok_or_else(|| condition(STAGE, "bipartite", "the reduced graph has an odd cycle"))?;
    let sources: BTreeSet<VertexId> = branch.iter().copied().filter(|&v| colour[v] == Some(false)).collect();
    let sinks: BTreeSet<VertexId> = branch.iter().copied().filter(|&v| colour[v] == Some(true)).collect();
    let mut flow = Z3Flow::empty();
    for (s, _, steps) in &paths {
        let forward = sources.contains(s);
        for &(e, from, to) in steps {
            if forward {
                flow.set(e, from, to, 1);
            } else {
                flow.set(e, to, from, 1);
            }
        }
    }
    for steps in &cycles {
        for &(e, from, to) in steps {
            flow.set(e, from, to, 1);
        }
    }
    for &e in null {
        let edge = graph.edge(e)?;
        flow.set(e, edge.u, edge.v, 0);
    }
    Ok(SmoothedFlow { flow, reduced, sources, sinks })
}

/// The pieces of the construction before composing.
#[derive(Debug, Clone)]
pub struct Gamma1Plan {
    pub cayley: CayleyMultigraph,
    pub plan: LadderPlan,
    /// `L` and `aL`.
    pub lower: BTreeSet<VertexId>,
    pub upper: BTreeSet<VertexId>,
    pub smoothed: SmoothedFlow,
}

fn family_params(cay: &CayleyMultigraph) -> FamilyIParams {
    match cay.group().family() {
        GroupFamily::FamilyI(p) => *p,
        _ => unreachable!("built over family I"),
    }
}

pub fn gamma1_plan(p: u32, k: u32, r: u32) -> Result<Gamma1Plan, ConstructionError> {
    let cayley = build_gamma(&GammaSpec::Gamma1 { p, k, r })?;
    let params = family_params(&cayley);
    let graph = cayley.graph();
    let coords = |v: VertexId| params.element(v);
    let lower: BTreeSet<VertexId> = graph.vertices().iter().copied().filter(|&v| coords(v).j == 0).collect();
    let upper: BTreeSet<VertexId> = graph.vertices().iter().copied().filter(|&v| coords(v).j == 1).collect();

    let x_edges: BTreeSet<EdgeId> = cayley.edges_labelled("x").map(|e| e.id).collect();
    let sigma_edges: Vec<EdgeId> = graph.edges().iter().filter(|e| e.label == "x" || e.label == "a").map(|e| e.id).collect();
    let sigma = graph.spanning_subgraph(&sigma_edges)?;

    let inside = |v: VertexId| coords(v).j <= 1;
    let lambda_edges: Vec<EdgeId> = graph
        .edges()
        .iter()
        .filter(|e| (e.label == "x" || e.label == "y") && inside(e.u) && inside(e.v))
        .map(|e| e.id)
        .collect();
    let lambda = graph.edge_subgraph(&lambda_edges)?;

    // Null x-edges: y-exponent ≡ 0 (mod 3) on L and ≡ 2 (mod 3) on aL.
    let null: BTreeSet<EdgeId> = lambda
        .edges()
        .iter()
        .filter(|e| e.label == "x")
        .filter(|e| {
            let c = coords(e.u);
            (c.j == 0 && c.i % 3 == 0) || (c.j == 1 && c.i % 3 == 2)
        })
        .map(|e| e.id)
        .collect();
    let smoothed = smoothed_flow(&lambda, &null)?;
    let plan = LadderPlan { ambient: graph.clone(), sigma, rungs: x_edges, lambda, lambda_flow: smoothed.flow.clone() };
    Ok(Gamma1Plan { cayley, plan, lower, upper, smoothed })
}

/// The bipartition of the reduced graph on `L` the smoothing should produce:
/// `{y^{3i+1}, x1 y^{3i+1}, x2 y^{3i+2}, x3 y^{3i+2}}` against the rest.
fn expected_lower_sides(params: &FamilyIParams, lower: &BTreeSet<VertexId>) -> (BTreeSet<VertexId>, BTreeSet<VertexId>) {
    let mut side_u = BTreeSet::new();
    let mut side_w = BTreeSet::new();
    for &v in lower {
        let c = params.element(v);
        let low_pair = matches!(c.alpha, 0 | 1);
        match (c.i % 3, low_pair) {
            (1, true) | (2, false) => {
                side_u.insert(v);
            }
            (2, true) | (1, false) => {
                side_w.insert(v);
            }
            _ => {}
        }
    }
    (side_u, side_w)
}

pub fn gamma1_flow(p: u32, k: u32, r: u32) -> Result<Construction, ConstructionError> {
    let parts = gamma1_plan(p, k, r)?;
    let params = family_params(&parts.cayley);
    let mut report = Report::new("gamma1", &[("p", p), ("k", k), ("r", r)]);
    let plan = &parts.plan;

    let components = plan.validate();
    for c in plan.checks() {
        report.check(format!("ladder plan {}", c.condition), c.pass);
    }
    let components = components?;
    let count_ok = components.len() == 6 * k as usize;
    report.check(format!("sigma has {} components", 6 * k), count_ok);
    if !count_ok {
        return Err(condition("ladder plan", "(i)", format!("Σ has {} components, expected {}", components.len(), 6 * k)));
    }
    let all_cl_p = components.iter().all(|c| c.rungs.len() == p as usize && c.graph.edge_count() == 3 * p as usize);
    report.check(format!("every sigma component is a circular ladder with {p} rungs"), all_cl_p);
    let two_shared = components.iter().all(|c| c.shared.len() == 2);
    report.check("every sigma component shares exactly 2 rungs with lambda", two_shared);

    let reduced_cubic = parts.smoothed.reduced.regular_degree() == Some(3);
    report.check("reduced graph is cubic and bipartite", reduced_cubic);
    let (want_u, want_w) = expected_lower_sides(&params, &parts.lower);
    let got: [BTreeSet<VertexId>; 2] = [
        parts.smoothed.sources.intersection(&parts.lower).copied().collect(),
        parts.smoothed.sinks.intersection(&parts.lower).copied().collect(),
    ];
    let sides_match = (got[0] == want_u && got[1] == want_w) || (got[0] == want_w && got[1] == want_u);
    report.check("reduced graph on L has the expected bipartition", sides_match);
    let null_lower = plan.lambda_flow.null_set().iter().filter(|e| parts.lower.contains(&plan.ambient.edge(**e).map(|e| e.u).unwrap_or(usize::MAX))).count();
    report.check(format!("lambda flow vanishes on {} x-edges of L", 2 * k), null_lower == 2 * k as usize);
    let null_upper = plan.lambda_flow.null_set().len() - null_lower;
    report.check(format!("lambda flow vanishes on {} x-edges of aL", 2 * k), null_upper == 2 * k as usize);

    let (union, composed) = compose(plan)?;
    report.check("composed flow on sigma ∪ lambda verifies", true);
    let flow = parity_lift(parts.cayley.graph(), &union, &composed)?;
    finish_flow(parts.cayley.graph(), &flow)?;
    report.check("flow verifies nowhere-zero", true);
    Ok(Construction { cayley: parts.cayley, flow, certificate: None, report })
}
