//! Nowhere-zero Z3-flows on the four 5-valent Cayley graph families, plus the
//! `A4` multigraph that has none.
//!
//! Every construction re-verifies its output and records the intermediate
//! checks in a [`Report`].

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flow::{even_graph_flow, search_nz3, verify, FlowError, Z3Flow};
use crate::graph::{CayleyMultigraph, Graph, GraphError, VertexId};
use crate::group::{is_prime, FamilyIParams, FiniteGroup, GroupError};
use crate::ladder::LadderError;
use crate::pseudoforest::{certificate_from_flow, flow_from_certificate, PartitionCertificate, PseudoforestError};

mod a4;
mod direct;
mod gamma1;
mod gamma2;
mod sigma;

pub use a4::{a4_counterexample, a4_simple_subgraph, verify_counterexample};
pub use direct::{gamma4_direct, DirectPartition};
pub use gamma1::{gamma1_flow, gamma1_plan, smoothed_flow, SmoothedFlow};
pub use gamma2::{gamma2_certificate, gamma2_split};
pub use sigma::{
    gamma3_certificate, gamma3_sigma, gamma4_certificate, gamma4_sigma, lift_sigma_certificate, table_edges, SigmaPair,
    SigmaSplit,
};

#[derive(Debug, Error)]
pub enum ConstructionError {
    /// A hypothesis of the construction failed; `stage` names the step and
    /// `condition` the violated requirement.
    #[error("{stage}: condition {condition} fails: {detail}")]
    Condition { stage: &'static str, condition: String, detail: String },
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Ladder(#[from] LadderError),
    #[error(transparent)]
    Pseudoforest(#[from] PseudoforestError),
}

pub(crate) fn condition(stage: &'static str, condition: impl Into<String>, detail: impl Into<String>) -> ConstructionError {
    ConstructionError::Condition { stage, condition: condition.into(), detail: detail.into() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

/// Verification report: `{construction, params, checks: [{name, pass}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub construction: String,
    pub params: BTreeMap<String, u32>,
    pub checks: Vec<Check>,
    /// Which route produced the certificate when there is a choice.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(construction: &str, params: &[(&str, u32)]) -> Self {
        Self {
            construction: construction.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            checks: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool) {
        self.checks.push(Check { name: name.into(), pass });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &str> + '_ {
        self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str())
    }
}

/// A graph with a verified nowhere-zero flow, the certificate it came from
/// (if any) and the report.
#[derive(Debug, Clone)]
pub struct Construction {
    pub cayley: CayleyMultigraph,
    pub flow: Z3Flow,
    pub certificate: Option<PartitionCertificate>,
    pub report: Report,
}

impl Construction {
    pub fn graph(&self) -> &Graph {
        self.cayley.graph()
    }
}

/// Which graph to build, with its group parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "which", rename_all = "lowercase")]
pub enum GammaSpec {
    /// `Cay(G, {x, a, a^-1, y, y^-1})` over `(Z2^2 x Zp) ⋊ Z3k`.
    Gamma1 { p: u32, k: u32, r: u32 },
    /// `Cay(G, {x, ay, (ay)^-1, y, y^-1})` over `(Z2^2 x Zp) ⋊ Z3k`.
    Gamma2 { p: u32, k: u32, r: u32 },
    /// `Cay(G, {x, a, a^-1, y, y^-1})` over `A4 x Zp` with `y^3 = a^s`.
    Gamma3 { p: u32, s: u32 },
    /// `Cay(G, {x, ay, (ay)^-1, y, y^-1})` over `A4 x Zp` with `y^3 = a^s`.
    Gamma4 { p: u32, s: u32 },
}

pub const CONNECTION_A: &str = "x,a,a^-1,y,y^-1";
pub const CONNECTION_AY: &str = "x,ay,ay^-1,y,y^-1";

impl GammaSpec {
    pub fn name(&self) -> &'static str {
        match self {
            GammaSpec::Gamma1 { .. } => "gamma1",
            GammaSpec::Gamma2 { .. } => "gamma2",
            GammaSpec::Gamma3 { .. } => "gamma3",
            GammaSpec::Gamma4 { .. } => "gamma4",
        }
    }

    pub fn params(&self) -> Vec<(&'static str, u32)> {
        match *self {
            GammaSpec::Gamma1 { p, k, r } | GammaSpec::Gamma2 { p, k, r } => vec![("p", p), ("k", k), ("r", r)],
            GammaSpec::Gamma3 { p, s } | GammaSpec::Gamma4 { p, s } => vec![("p", p), ("s", s)],
        }
    }

    pub fn group(&self) -> Result<FiniteGroup, GroupError> {
        match *self {
            GammaSpec::Gamma1 { p, k, r } | GammaSpec::Gamma2 { p, k, r } => FiniteGroup::family_i(p, k, r),
            GammaSpec::Gamma3 { p, s } | GammaSpec::Gamma4 { p, s } => FiniteGroup::family_ii(p, s),
        }
    }

    pub fn connection(&self) -> &'static str {
        match self {
            GammaSpec::Gamma1 { .. } | GammaSpec::Gamma3 { .. } => CONNECTION_A,
            GammaSpec::Gamma2 { .. } | GammaSpec::Gamma4 { .. } => CONNECTION_AY,
        }
    }
}

pub fn build_gamma(spec: &GammaSpec) -> Result<CayleyMultigraph, ConstructionError> {
    let group = spec.group()?;
    Ok(CayleyMultigraph::parse(&group, spec.connection())?)
}

/// Named elements of the two families: `x_α`, `a^j`, `y^i` and products.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Words<'a> {
    pub group: &'a FiniteGroup,
    pub xs: [usize; 4],
    pub a: usize,
    pub y: usize,
    pub ay: usize,
}

impl<'a> Words<'a> {
    pub fn new(group: &'a FiniteGroup) -> Result<Self, GroupError> {
        Ok(Self {
            group,
            xs: [group.identity(), group.generator("x1")?, group.generator("x2")?, group.generator("x3")?],
            a: group.generator("a")?,
            y: group.generator("y")?,
            ay: group.generator("ay")?,
        })
    }

    pub fn x(&self, alpha: usize) -> usize {
        self.xs[alpha]
    }

    pub fn a(&self, j: i64) -> usize {
        self.group.power_idx(self.a, j)
    }

    pub fn y(&self, i: i64) -> usize {
        self.group.power_idx(self.y, i)
    }

    pub fn ay(&self, i: i64) -> usize {
        self.group.power_idx(self.ay, i)
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.group.mul_idx(g, h)
    }

    pub fn prod(&self, factors: &[usize]) -> usize {
        factors.iter().fold(self.group.identity(), |acc, &f| self.group.mul_idx(acc, f))
    }

    /// `t·set`.
    pub fn left(&self, t: usize, set: &BTreeSet<VertexId>) -> BTreeSet<VertexId> {
        self.group.left_translate(t, set)
    }

    /// `{a^j : j ∈ exps}` with exponents taken mod `|a|`.
    pub fn a_set(&self, exps: impl IntoIterator<Item = i64>) -> BTreeSet<VertexId> {
        exps.into_iter().map(|j| self.a(j)).collect()
    }
}

/// Builds the graph for `spec` and a verified nowhere-zero flow on it.
pub fn construct(spec: &GammaSpec) -> Result<Construction, ConstructionError> {
    match *spec {
        GammaSpec::Gamma1 { p, k, r } => gamma1_flow(p, k, r),
        GammaSpec::Gamma2 { p, k, r } => gamma2_certificate(p, k, r),
        GammaSpec::Gamma3 { p, s } => gamma3_certificate(p, s),
        GammaSpec::Gamma4 { p, s } => gamma4_certificate(p, s),
    }
}

/// Every valid `r` for the semidirect family with primes `p` and odd `k`.
pub fn family_i_rs(p: u32, k: u32) -> Vec<u32> {
    (1..p).filter(|&r| FamilyIParams { p, k, r }.validate().is_ok()).collect()
}

/// The cases of a campaign, in sorted order. Primes run over `5..=p_max`;
/// `k` values that violate the family's hypotheses at a prime are skipped.
pub fn campaign_specs(families: &[&str], p_max: u32, k_set: &[u32]) -> Result<Vec<GammaSpec>, ConstructionError> {
    let primes: Vec<u32> = (5..=p_max).filter(|&p| is_prime(p)).collect();
    let mut specs = Vec::new();
    for &family in families {
        for &p in &primes {
            match family {
                "gamma1" | "gamma2" => {
                    for &k in k_set {
                        for r in family_i_rs(p, k) {
                            specs.push(if family == "gamma1" { GammaSpec::Gamma1 { p, k, r } } else { GammaSpec::Gamma2 { p, k, r } });
                        }
                    }
                }
                "gamma3" => specs.extend((1..p).map(|s| GammaSpec::Gamma3 { p, s })),
                "gamma4" => specs.extend((1..p).map(|s| GammaSpec::Gamma4 { p, s })),
                other => return Err(ConstructionError::Unsupported(format!("unknown family {other:?}"))),
            }
        }
    }
    specs.sort();
    specs.dedup();
    Ok(specs)
}

/// Input to [`cayley_flow`].
#[derive(Debug, Clone)]
pub enum FlowInput {
    Gamma(GammaSpec),
    /// Any Cayley graph; only even-valent ones are handled.
    Cayley(CayleyMultigraph),
}

/// A verified nowhere-zero flow for the supported graphs: one of the four
/// 5-valent families, or any connected Cayley graph of even valency.
pub fn cayley_flow(input: &FlowInput) -> Result<Z3Flow, ConstructionError> {
    match input {
        FlowInput::Gamma(spec) => Ok(construct(spec)?.flow),
        FlowInput::Cayley(cay) => {
            let graph = cay.graph();
            if !graph.is_connected() {
                return Err(ConstructionError::Unsupported("the graph is disconnected".into()));
            }
            match graph.regular_degree() {
                Some(d) if d >= 4 && d % 2 == 0 => {
                    let flow = even_graph_flow(graph)?;
                    finish_flow(graph, &flow)?;
                    Ok(flow)
                }
                Some(d) => Err(ConstructionError::Unsupported(format!(
                    "valency {d} outside the implemented families; use a family spec for 5-valent graphs"
                ))),
                None => Err(ConstructionError::Unsupported("the graph is not regular".into())),
            }
        }
    }
}

/// Re-verifies a finished flow.
pub(crate) fn finish_flow(graph: &Graph, flow: &Z3Flow) -> Result<(), ConstructionError> {
    let check = verify(graph, flow)?;
    if !check.ok() {
        return Err(condition(
            "result",
            "nowhere-zero",
            format!("valid = {}, nowhere_zero = {}, violations at {:?}", check.valid, check.nowhere_zero, check.violations),
        ));
    }
    Ok(())
}

/// Turns a validated certificate into a construction with a verified flow.
pub(crate) fn from_certificate(
    cayley: CayleyMultigraph,
    certificate: PartitionCertificate,
    mut report: Report,
) -> Result<Construction, ConstructionError> {
    let graph = cayley.graph();
    let valid = certificate.validate(graph);
    report.check("certificate validates", valid.is_ok());
    valid?;
    let flow = flow_from_certificate(graph, &certificate)?;
    finish_flow(graph, &flow)?;
    report.check("flow verifies nowhere-zero", true);
    Ok(Construction { cayley, flow, certificate: Some(certificate), report })
}

/// Seed and round budget for [`searched_certificate`].
pub const SEARCH_SEED: u64 = 0x5eed;
pub const SEARCH_ROUNDS: usize = 100_000;

/// Fallback for parameters the explicit splits do not cover: a seeded
/// orientation search, with the certificate read off the resulting flow.
pub(crate) fn searched_certificate(cayley: CayleyMultigraph, mut report: Report) -> Result<Construction, ConstructionError> {
    let flow = search_nz3(cayley.graph(), SEARCH_SEED, SEARCH_ROUNDS)?
        .ok_or_else(|| condition("orientation search", "budget", format!("no orientation within {SEARCH_ROUNDS} rounds")))?;
    let certificate = certificate_from_flow(cayley.graph(), &flow)?;
    report.note(format!("certificate read off a searched orientation (seed {SEARCH_SEED:#x})"));
    from_certificate(cayley, certificate, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ConnectionMultiset;

    #[test]
    fn valid_rs() {
        assert_eq!(family_i_rs(7, 1), vec![1, 2, 4]);
        assert_eq!(family_i_rs(5, 1), vec![1]);
        assert!(family_i_rs(5, 5).is_empty());
    }

    #[test]
    fn campaign_grid_is_sorted() {
        let specs = campaign_specs(&["gamma4", "gamma1"], 7, &[1]).unwrap();
        assert!(specs.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(specs.iter().filter(|s| s.name() == "gamma4").count(), 4 + 6);
        assert!(campaign_specs(&["gamma9"], 7, &[1]).is_err());
    }

    #[test]
    fn gamma_shapes() {
        let g1 = build_gamma(&GammaSpec::Gamma1 { p: 5, k: 1, r: 1 }).unwrap();
        assert_eq!((g1.graph().vertex_count(), g1.graph().edge_count()), (60, 150));
        assert_eq!(g1.graph().regular_degree(), Some(5));
        assert!(g1.graph().is_connected());
        let labels: BTreeSet<&str> = g1.graph().edges().iter().map(|e| e.label.as_str()).collect();
        assert_eq!(labels, BTreeSet::from(["a", "x", "y"]));
        let g4 = build_gamma(&GammaSpec::Gamma4 { p: 7, s: 2 }).unwrap();
        let labels: BTreeSet<&str> = g4.graph().edges().iter().map(|e| e.label.as_str()).collect();
        assert_eq!(labels, BTreeSet::from(["ay", "x", "y"]));
        assert!(g4.graph().is_connected());
        assert!(build_gamma(&GammaSpec::Gamma2 { p: 3, k: 1, r: 1 }).is_err());
    }

    #[test]
    fn family_two_edges_follow_the_normal_form() {
        for (p, s) in [(5, 1), (7, 3), (11, 10)] {
            for spec in [GammaSpec::Gamma3 { p, s }, GammaSpec::Gamma4 { p, s }] {
                let cay = build_gamma(&spec).unwrap();
                let w = Words::new(cay.group()).unwrap();
                let pi = p as i64;
                let si = s as i64;
                let mut expected: BTreeSet<(usize, usize, &str)> = BTreeSet::new();
                let mut add = |u: usize, v: usize, l: &'static str| {
                    expected.insert((u.min(v), u.max(v), l));
                };
                let with_ay = matches!(spec, GammaSpec::Gamma4 { .. });
                for alpha in 0..4 {
                    let xa = w.x(alpha);
                    for j in 0..pi {
                        let el = |i: i64, jj: i64| w.prod(&[xa, w.y(i), w.a(jj)]);
                        let xl = |beta: usize, i: i64| w.prod(&[w.x(beta), xa, w.y(i), w.a(j)]);
                        add(el(0, j), xl(1, 0), "x");
                        add(el(1, j), xl(3, 1), "x");
                        add(el(2, j), xl(2, 2), "x");
                        add(el(0, j), el(1, j), "y");
                        add(el(1, j), el(2, j), "y");
                        add(el(2, j), el(0, j + si), "y");
                        if with_ay {
                            add(el(0, j), el(1, j + 1), "ay");
                            add(el(1, j), el(2, j + 1), "ay");
                            add(el(2, j), el(0, j + si + 1), "ay");
                        } else {
                            for i in 0..3 {
                                add(el(i, j), el(i, j + 1), "a");
                            }
                        }
                    }
                }
                let actual: BTreeSet<(usize, usize, &str)> =
                    cay.graph().edges().iter().map(|e| (e.u.min(e.v), e.u.max(e.v), e.label.as_str())).collect();
                assert_eq!(actual, expected, "{spec:?}");
            }
        }
    }

    #[test]
    fn x_edge_at_y_squared_level() {
        let cay = build_gamma(&GammaSpec::Gamma3 { p: 5, s: 1 }).unwrap();
        let w = Words::new(cay.group()).unwrap();
        let v = w.prod(&[w.y(2), w.a(2)]);
        let e = cay.graph().edge(cay.edge_by_name(v, "x").unwrap()).unwrap();
        assert_eq!(e.other(v), w.prod(&[w.x(2), w.y(2), w.a(2)]));
    }

    #[test]
    fn even_valency_dispatch() {
        let z10 = FiniteGroup::cyclic(10).unwrap();
        let conn = ConnectionMultiset::new(&z10, &[1, 9, 2, 8]).unwrap();
        let cay = CayleyMultigraph::new(z10, conn).unwrap();
        let flow = cayley_flow(&FlowInput::Cayley(cay.clone())).unwrap();
        assert!(verify(cay.graph(), &flow).unwrap().ok());
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let conn = ConnectionMultiset::new(&z6, &[1, 5, 3]).unwrap();
        let cubic = CayleyMultigraph::new(z6, conn).unwrap();
        assert!(matches!(
            cayley_flow(&FlowInput::Cayley(cubic)),
            Err(ConstructionError::Unsupported(_))
        ));
    }

    #[test]
    fn report_json_shape() {
        let mut r = Report::new("gamma1", &[("p", 5), ("k", 1)]);
        r.check("a", true);
        r.check("b", false);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["construction"], "gamma1");
        assert_eq!(v["params"]["p"], 5);
        assert_eq!(v["checks"][1]["pass"], false);
        assert!(!r.all_pass());
        assert_eq!(r.failures().collect::<Vec<_>>(), vec!["b"]);
    }
}
