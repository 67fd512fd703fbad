//! Multigraphs with stable edge ids, Cayley multigraphs and their quotients.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::{FiniteGroup, GroupError};

pub type VertexId = usize;
pub type EdgeId = usize;

const ABSENT: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("edge {0} is a loop")]
    Loop(EdgeId),
    #[error("vertex sets overlap at {0}")]
    Overlap(VertexId),
    #[error("invalid connection multiset: {0}")]
    Connection(String),
    #[error("invalid quotient: {0}")]
    Quotient(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("malformed graph description: {0}")]
    Format(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
}

/// A Cayley edge `{g, g·X[position]}` seen from its base vertex `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub base: VertexId,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub label: String,
    pub dart: Option<Dart>,
}

impl Edge {
    pub fn other(&self, w: VertexId) -> VertexId {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn joins(&self, a: VertexId, b: VertexId) -> bool {
        (self.u == a && self.v == b) || (self.u == b && self.v == a)
    }
}

/// An undirected loopless multigraph.
///
/// Vertex ids live in `0..capacity`; only the listed vertices are present, so
/// subgraphs keep the ids of the graph they were cut from. Edge ids are
/// preserved in the same way.
#[derive(Debug, Clone)]
pub struct Graph {
    capacity: usize,
    present: Vec<bool>,
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    slot: Vec<u32>,
    adjacency: Vec<Vec<u32>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Graph {
    /// A graph on `0..n` with edges numbered in input order.
    pub fn from_pairs(n: usize, pairs: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let edges = pairs
            .iter()
            .enumerate()
            .map(|(id, &(u, v))| Edge { id, u, v, label: String::new(), dart: None })
            .collect();
        Self::new((0..n).collect(), edges)
    }

    pub fn new(mut vertices: Vec<VertexId>, mut edges: Vec<Edge>) -> Result<Self, GraphError> {
        vertices.sort_unstable();
        vertices.dedup();
        edges.sort_by_key(|e| e.id);
        let capacity = vertices.last().map_or(0, |&v| v + 1);
        let mut present = vec![false; capacity];
        for &v in &vertices {
            present[v] = true;
        }
        let max_id = edges.last().map_or(0, |e| e.id + 1);
        let mut slot = vec![ABSENT; max_id];
        let mut adjacency = vec![Vec::new(); capacity];
        for (i, e) in edges.iter().enumerate() {
            if slot[e.id] != ABSENT {
                return Err(GraphError::DuplicateEdge(e.id));
            }
            for w in [e.u, e.v] {
                if w >= capacity || !present[w] {
                    return Err(GraphError::UnknownVertex(w));
                }
            }
            if e.u == e.v {
                return Err(GraphError::Loop(e.id));
            }
            slot[e.id] = i as u32;
            adjacency[e.u].push(i as u32);
            adjacency[e.v].push(i as u32);
        }
        Ok(Self { capacity, present, vertices, edges, slot, adjacency })
    }

    pub fn empty() -> Self {
        Self::new(Vec::new(), Vec::new()).expect("empty graph")
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// One more than the largest vertex id; size for per-vertex arrays.
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().map(|e| e.id)
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v < self.capacity && self.present[v]
    }

    pub fn contains_edge(&self, id: EdgeId) -> bool {
        id < self.slot.len() && self.slot[id] != ABSENT
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge, GraphError> {
        if self.contains_edge(id) {
            Ok(&self.edges[self.slot[id] as usize])
        } else {
            Err(GraphError::UnknownEdge(id))
        }
    }

    /// Edges incident to `v`, in id order.
    pub fn incident(&self, v: VertexId) -> impl Iterator<Item = &Edge> + '_ {
        let list: &[u32] = if v < self.capacity { &self.adjacency[v] } else { &[] };
        list.iter().map(move |&i| &self.edges[i as usize])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        if v < self.capacity {
            self.adjacency[v].len()
        } else {
            0
        }
    }

    /// Returns the common degree if every vertex has it.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(*self.vertices.first()?);
        self.vertices.iter().all(|&v| self.degree(v) == d).then_some(d)
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.incident(v).map(move |e| e.other(v))
    }

    fn check_vertices<'a>(&self, set: impl IntoIterator<Item = &'a VertexId>) -> Result<Vec<bool>, GraphError> {
        let mut mask = vec![false; self.capacity];
        for &v in set {
            if !self.contains_vertex(v) {
                return Err(GraphError::UnknownVertex(v));
            }
            mask[v] = true;
        }
        Ok(mask)
    }

    /// The subgraph induced on `set`.
    pub fn induced<'a>(&self, set: impl IntoIterator<Item = &'a VertexId>) -> Result<Graph, GraphError> {
        let mask = self.check_vertices(set)?;
        let vertices = self.vertices.iter().copied().filter(|&v| mask[v]).collect();
        let edges = self.edges.iter().filter(|e| mask[e.u] && mask[e.v]).cloned().collect();
        Graph::new(vertices, edges)
    }

    /// The bipartite graph `Γ[U, W]`: vertices `U ∪ W` and the edges joining them.
    pub fn bipartite_between(&self, left: &BTreeSet<VertexId>, right: &BTreeSet<VertexId>) -> Result<Graph, GraphError> {
        let lm = self.check_vertices(left)?;
        let rm = self.check_vertices(right)?;
        if let Some(&v) = left.iter().find(|&&v| rm[v]) {
            return Err(GraphError::Overlap(v));
        }
        let vertices = left.iter().chain(right).copied().collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| (lm[e.u] && rm[e.v]) || (rm[e.u] && lm[e.v]))
            .cloned()
            .collect();
        Graph::new(vertices, edges)
    }

    pub fn delete_edges<'a>(&self, ids: impl IntoIterator<Item = &'a EdgeId>) -> Result<Graph, GraphError> {
        let drop = self.edge_mask(ids)?;
        let edges = self.edges.iter().filter(|e| !drop[e.id]).cloned().collect();
        Graph::new(self.vertices.clone(), edges)
    }

    /// Spanning subgraph with only the given edges.
    pub fn spanning_subgraph<'a>(&self, ids: impl IntoIterator<Item = &'a EdgeId>) -> Result<Graph, GraphError> {
        let keep = self.edge_mask(ids)?;
        let edges = self.edges.iter().filter(|e| keep[e.id]).cloned().collect();
        Graph::new(self.vertices.clone(), edges)
    }

    /// Subgraph formed by the given edges and their endpoints.
    pub fn edge_subgraph<'a>(&self, ids: impl IntoIterator<Item = &'a EdgeId>) -> Result<Graph, GraphError> {
        let keep = self.edge_mask(ids)?;
        let edges: Vec<Edge> = self.edges.iter().filter(|e| keep[e.id]).cloned().collect();
        let vertices = edges.iter().flat_map(|e| [e.u, e.v]).collect();
        Graph::new(vertices, edges)
    }

    fn edge_mask<'a>(&self, ids: impl IntoIterator<Item = &'a EdgeId>) -> Result<Vec<bool>, GraphError> {
        let mut mask = vec![false; self.slot.len()];
        for &id in ids {
            if !self.contains_edge(id) {
                return Err(GraphError::UnknownEdge(id));
            }
            mask[id] = true;
        }
        Ok(mask)
    }

    /// Union of two subgraphs of a common graph (edges matched by id).
    pub fn union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices);
        let mut edges = self.edges.clone();
        for e in &other.edges {
            match self.edge(e.id) {
                Ok(mine) if mine == e => {}
                Ok(_) => return Err(GraphError::DuplicateEdge(e.id)),
                Err(_) => edges.push(e.clone()),
            }
        }
        Graph::new(vertices, edges)
    }

    /// Renames vertices by `perm` (indexed by old id), keeping edge ids.
    pub fn relabel(&self, perm: &[VertexId]) -> Result<Graph, GraphError> {
        let map = |v: VertexId| perm.get(v).copied().ok_or(GraphError::UnknownVertex(v));
        let vertices = self.vertices.iter().map(|&v| map(v)).collect::<Result<_, _>>()?;
        let edges = self
            .edges
            .iter()
            .map(|e| Ok(Edge { u: map(e.u)?, v: map(e.v)?, dart: None, ..e.clone() }))
            .collect::<Result<_, GraphError>>()?;
        Graph::new(vertices, edges)
    }

    pub fn is_even(&self) -> bool {
        self.vertices.iter().all(|&v| self.degree(v) % 2 == 0)
    }

    /// `sub` is a subgraph of `self` and removing its edges leaves every degree even.
    pub fn is_parity_subgraph(&self, sub: &Graph) -> bool {
        if !sub.edges.iter().all(|e| self.edge(e.id).is_ok_and(|mine| mine.joins(e.u, e.v))) {
            return false;
        }
        self.vertices.iter().all(|&v| (self.degree(v) - sub.degree(v)) % 2 == 0)
    }

    /// A proper 2-colouring (indexed by vertex id), if one exists.
    pub fn two_colouring(&self) -> Option<Vec<Option<bool>>> {
        let mut colour = vec![None; self.capacity];
        for &s in &self.vertices {
            if colour[s].is_some() {
                continue;
            }
            colour[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                let c = colour[v].expect("coloured");
                for w in self.neighbors(v) {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(d) if d == c => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(colour)
    }

    pub fn is_bipartite(&self) -> bool {
        self.two_colouring().is_some()
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.capacity];
        let mut out = Vec::new();
        for &s in &self.vertices {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson { id: e.id, u: e.u, v: e.v, label: e.label.clone() })
                .collect(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Graph, GraphError> {
        let edges = json
            .edges
            .iter()
            .map(|e| Edge { id: e.id, u: e.u, v: e.v, label: e.label.clone(), dart: None })
            .collect();
        Graph::new(json.vertices.clone(), edges)
    }

    /// Graphviz rendering, vertices and edges sorted by id.
    pub fn to_dot(&self, names: Option<&[String]>) -> String {
        let mut out = String::from("graph G {\n");
        for &v in &self.vertices {
            match names.and_then(|n| n.get(v)) {
                Some(name) => writeln!(out, "  {v} [label=\"{}\"];", name.replace('"', "\\\"")),
                None => writeln!(out, "  {v};"),
            }
            .expect("write to string");
        }
        for e in &self.edges {
            writeln!(out, "  {} -- {} [id={}, label=\"{}\"];", e.u, e.v, e.id, e.label.replace('"', "\\\""))
                .expect("write to string");
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeJson>,
}

/// An inverse-closed multiset of non-identity elements, stored as a list of
/// positions. `partner[i]` is the position holding the inverse of position
/// `i`; involutions are their own partners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionMultiset {
    elements: Vec<usize>,
    names: Vec<String>,
    partner: Vec<usize>,
}

impl ConnectionMultiset {
    pub fn new(group: &FiniteGroup, elements: &[usize]) -> Result<Self, GraphError> {
        let named = elements.iter().map(|&g| (group.label(g.min(group.order() - 1)).to_string(), g)).collect::<Vec<_>>();
        Self::named(group, named)
    }

    pub fn named(group: &FiniteGroup, entries: Vec<(String, usize)>) -> Result<Self, GraphError> {
        let mut elements = Vec::with_capacity(entries.len());
        let mut names = Vec::with_capacity(entries.len());
        for (name, g) in entries {
            if g >= group.order() {
                return Err(GraphError::Group(GroupError::NotInGroup(g)));
            }
            if g == group.identity() {
                return Err(GraphError::Connection("the identity may not be a connection element".into()));
            }
            elements.push(g);
            names.push(name);
        }
        let mut partner = vec![usize::MAX; elements.len()];
        for i in 0..elements.len() {
            if partner[i] != usize::MAX {
                continue;
            }
            let inv = group.inv_idx(elements[i]);
            if inv == elements[i] {
                partner[i] = i;
                continue;
            }
            let j = (i + 1..elements.len())
                .find(|&j| partner[j] == usize::MAX && elements[j] == inv)
                .ok_or_else(|| {
                    GraphError::Connection(format!(
                        "`{}` occurs more often than its inverse",
                        names[i]
                    ))
                })?;
            partner[i] = j;
            partner[j] = i;
        }
        Ok(Self { elements, names, partner })
    }

    /// Parses a comma-separated list of words, e.g. `x,a,a^-1,y,y^-1`.
    pub fn parse(group: &FiniteGroup, text: &str) -> Result<Self, GraphError> {
        let entries = text
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| Ok((t.to_string(), group.parse_word(t)?)))
            .collect::<Result<Vec<_>, GraphError>>()?;
        if entries.is_empty() {
            return Err(GraphError::Connection("empty connection multiset".into()));
        }
        Self::named(group, entries)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn element(&self, position: usize) -> usize {
        self.elements[position]
    }

    pub fn name(&self, position: usize) -> &str {
        &self.names[position]
    }

    pub fn partner(&self, position: usize) -> usize {
        self.partner[position]
    }

    /// Label shared by a position and its inverse partner.
    pub fn class_label(&self, position: usize) -> String {
        let (a, b) = (position.min(self.partner[position]), position.max(self.partner[position]));
        if self.names[a].ends_with("^-1") && !self.names[b].ends_with("^-1") {
            self.names[b].clone()
        } else {
            self.names[a].clone()
        }
    }

    /// First position carrying `name` or whose class label is `name`.
    pub fn position(&self, name: &str) -> Option<usize> {
        (0..self.len())
            .find(|&i| self.names[i] == name)
            .or_else(|| (0..self.len()).find(|&i| self.class_label(i) == name))
    }

    /// Number of positions holding `g`.
    pub fn multiplicity(&self, g: usize) -> usize {
        self.elements.iter().filter(|&&h| h == g).count()
    }
}

/// `Cay(G, X)`: vertex `g` for each element, and for every `g` and every
/// position of `X` the edge `{g, g·X[pos]}` (each edge is generated once, from
/// the position of the inverse pair with the smaller index).
#[derive(Debug, Clone)]
pub struct CayleyMultigraph {
    group: FiniteGroup,
    connection: ConnectionMultiset,
    graph: Graph,
    dart_edge: HashMap<Dart, EdgeId>,
}

pub fn cayley(group: &FiniteGroup, connection: &ConnectionMultiset) -> Result<CayleyMultigraph, GraphError> {
    CayleyMultigraph::new(group.clone(), connection.clone())
}

impl CayleyMultigraph {
    pub fn new(group: FiniteGroup, connection: ConnectionMultiset) -> Result<Self, GraphError> {
        let n = group.order();
        let mut edges = Vec::with_capacity(n * connection.len() / 2);
        let mut dart_edge = HashMap::new();
        let labels: Vec<String> = (0..connection.len()).map(|i| connection.class_label(i)).collect();
        for g in 0..n {
            for pos in 0..connection.len() {
                let partner = connection.partner(pos);
                let h = group.mul_idx(g, connection.element(pos));
                if h == g {
                    return Err(GraphError::Connection("loop in Cayley graph".into()));
                }
                let generate = if partner == pos { g < h } else { pos < partner };
                if generate {
                    let id = edges.len();
                    let dart = Dart { base: g, position: pos };
                    edges.push(Edge { id, u: g, v: h, label: labels[pos].clone(), dart: Some(dart) });
                    dart_edge.insert(dart, id);
                }
            }
        }
        let graph = Graph::new((0..n).collect(), edges)?;
        Ok(Self { group, connection, graph, dart_edge })
    }

    /// Builds `Cay(G, X)` from a comma-separated word list.
    pub fn parse(group: &FiniteGroup, connection: &str) -> Result<Self, GraphError> {
        Self::new(group.clone(), ConnectionMultiset::parse(group, connection)?)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn connection(&self) -> &ConnectionMultiset {
        &self.connection
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// The edge `{g, g·X[pos]}` traversed from `g`.
    pub fn edge_at(&self, g: VertexId, position: usize) -> EdgeId {
        let partner = self.connection.partner(position);
        let h = self.group.mul_idx(g, self.connection.element(position));
        let dart = if partner == position {
            Dart { base: g.min(h), position }
        } else if position < partner {
            Dart { base: g, position }
        } else {
            Dart { base: h, position: partner }
        };
        self.dart_edge[&dart]
    }

    /// The edge `{g, g·x}` for the named connection element `x`.
    pub fn edge_by_name(&self, g: VertexId, name: &str) -> Result<EdgeId, GraphError> {
        let pos = self
            .connection
            .position(name)
            .ok_or_else(|| GraphError::Connection(format!("no connection element `{name}`")))?;
        Ok(self.edge_at(g, pos))
    }

    /// Edges whose class label is `label`, in id order.
    pub fn edges_labelled<'a>(&'a self, label: &'a str) -> impl Iterator<Item = &'a Edge> + 'a {
        self.graph.edges().iter().filter(move |e| e.label == label)
    }

    /// Left multiplication by `g` maps `Γ[set]` edge-exactly onto `Γ[g·set]`.
    pub fn translation_isomorphic(&self, set: &BTreeSet<VertexId>, g: VertexId) -> Result<bool, GraphError> {
        let image = self.group.left_translate(g, set);
        let source = self.graph.induced(set)?;
        let target = self.graph.induced(&image)?;
        let key = |u: usize, v: usize, label: &str| (u.min(v), u.max(v), label.to_string());
        let mut counts: BTreeMap<(usize, usize, String), i64> = BTreeMap::new();
        for e in source.edges() {
            let (u, v) = (self.group.mul_idx(g, e.u), self.group.mul_idx(g, e.v));
            *counts.entry(key(u, v, &e.label)).or_default() += 1;
        }
        for e in target.edges() {
            *counts.entry(key(e.u, e.v, &e.label)).or_default() -= 1;
        }
        Ok(counts.values().all(|&c| c == 0))
    }

    /// `Cay(G/N, X/N)` plus the coset index of each element of `G`.
    pub fn quotient(&self, normal: &BTreeSet<usize>) -> Result<Quotient, GraphError> {
        if let Some(&x) = self.connection.elements().iter().find(|x| normal.contains(x)) {
            return Err(GraphError::Quotient(format!(
                "N meets the connection multiset at `{}`",
                self.group.label(x)
            )));
        }
        let (qgroup, coset_of) = self.group.quotient(normal).map_err(|e| match e {
            GroupError::NotNormal => GraphError::Quotient("N is not normal".into()),
            other => GraphError::Group(other),
        })?;
        let entries = (0..self.connection.len())
            .map(|i| (self.connection.name(i).to_string(), coset_of[self.connection.element(i)]))
            .collect::<Vec<_>>();
        let mut connection = ConnectionMultiset::named(&qgroup, entries)?;
        // Keep the pairing of G so every Γ edge has a well-defined image.
        connection.partner = self.connection.partner.clone();
        let graph = CayleyMultigraph::new(qgroup, connection)?;
        Ok(Quotient { graph, coset_of })
    }
}

/// A quotient graph together with the projection `G → G/N`.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub graph: CayleyMultigraph,
    pub coset_of: Vec<usize>,
}

impl Quotient {
    /// Image of the Γ edge with the given dart: the quotient edge and whether
    /// the dart's base maps to that edge's `u` endpoint.
    pub fn image(&self, dart: Dart) -> (EdgeId, bool) {
        let base = self.coset_of[dart.base];
        let id = self.graph.edge_at(base, dart.position);
        let e = self.graph.graph().edge(id).expect("edge of quotient");
        (id, e.u == base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
        Graph::from_pairs(n, &pairs).unwrap()
    }

    #[test]
    fn cycle_from_cyclic_group() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let c6 = CayleyMultigraph::new(z6.clone(), ConnectionMultiset::new(&z6, &[1, 5]).unwrap()).unwrap();
        assert_eq!(c6.graph().edge_count(), 6);
        assert_eq!(c6.graph().regular_degree(), Some(2));
        assert!(c6.graph().is_connected());
    }

    #[test]
    fn a4_multigraph_shape() {
        let a4 = FiniteGroup::alternating4().unwrap();
        let g = CayleyMultigraph::parse(&a4, "a,b,b,b^-1,b^-1").unwrap();
        assert_eq!(g.graph().vertex_count(), 12);
        assert_eq!(g.graph().edge_count(), 30);
        assert_eq!(g.edges_labelled("a").count(), 6);
        assert_eq!(g.edges_labelled("b").count(), 24);
        assert_eq!(g.graph().regular_degree(), Some(5));
    }

    #[test]
    fn connection_errors() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        assert!(matches!(ConnectionMultiset::new(&z6, &[0, 1, 5]), Err(GraphError::Connection(_))));
        assert!(matches!(ConnectionMultiset::new(&z6, &[1, 1, 5]), Err(GraphError::Connection(_))));
        assert!(ConnectionMultiset::new(&z6, &[1, 1, 5, 5, 3]).is_ok());
    }

    #[test]
    fn subgraph_operations() {
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let c6 = CayleyMultigraph::new(z6.clone(), ConnectionMultiset::new(&z6, &[1, 5]).unwrap()).unwrap();
        let path = c6.graph().induced(&[0, 1, 2]).unwrap();
        assert_eq!(path.vertex_count(), 3);
        assert_eq!(path.edge_count(), 2);
        assert!(path.is_connected());
        assert!(c6.graph().induced(&[9]).is_err());

        let k4 = k(4);
        let b = k4.bipartite_between(&BTreeSet::from([0, 1]), &BTreeSet::from([2, 3])).unwrap();
        assert_eq!(b.edge_count(), 4);
        assert!(k4.bipartite_between(&BTreeSet::from([0, 1]), &BTreeSet::from([1, 3])).is_err());
        let d = k4.delete_edges(&[0, 5]).unwrap();
        assert_eq!(d.edge_count(), 4);
        assert!(!d.contains_edge(0));
        assert!(k4.delete_edges(&[17]).is_err());
    }

    #[test]
    fn predicates() {
        let c5 = Graph::from_pairs(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert!(c5.is_even());
        assert!(!c5.is_bipartite());
        let k4 = k(4);
        assert!(!k4.is_even());
        let matching = k4.spanning_subgraph(&[0, 5]).unwrap();
        assert!(k4.is_parity_subgraph(&matching));
        assert!(!k4.is_parity_subgraph(&k4.spanning_subgraph(&[0]).unwrap()));
        assert_eq!(Graph::from_pairs(4, &[(0, 1), (2, 3)]).unwrap().components(), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn quotient_of_cycle() {
        let z12 = FiniteGroup::cyclic(12).unwrap();
        let c12 = CayleyMultigraph::new(z12.clone(), ConnectionMultiset::new(&z12, &[1, 11]).unwrap()).unwrap();
        let n = z12.subgroup(&[4]).unwrap();
        let q = c12.quotient(&n).unwrap();
        assert_eq!(q.graph.graph().vertex_count(), 4);
        assert_eq!(q.graph.graph().edge_count(), 4);
        assert_eq!(q.graph.graph().regular_degree(), Some(2));
        let all: BTreeSet<usize> = (0..12).collect();
        assert!(matches!(c12.quotient(&all), Err(GraphError::Quotient(_))));
    }

    #[test]
    fn quotient_accumulates_multiplicity() {
        // In Z12 with N = <6>, the elements 3 and 9 = 3^{-1} both map to the
        // involution 3 of Z6, so the quotient doubles those edges.
        let z12 = FiniteGroup::cyclic(12).unwrap();
        let g = CayleyMultigraph::new(z12.clone(), ConnectionMultiset::new(&z12, &[3, 9]).unwrap()).unwrap();
        let q = g.quotient(&z12.subgroup(&[6]).unwrap()).unwrap();
        assert_eq!(q.graph.connection().multiplicity(q.coset_of[3]), 2);
        assert_eq!(q.graph.graph().edge_count(), 6);
    }

    #[test]
    fn json_and_dot_round_trip() {
        let a4 = FiniteGroup::alternating4().unwrap();
        let g = CayleyMultigraph::parse(&a4, "a,b,b^-1").unwrap();
        let json = g.graph().to_json();
        let text = serde_json::to_string(&json).unwrap();
        let back = Graph::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back.to_json(), json);
        let dot = g.graph().to_dot(Some(a4.labels()));
        assert!(dot.starts_with("graph G {"));
        assert_eq!(dot.matches("--").count(), 18);
    }

    #[test]
    fn left_translation_is_an_automorphism() {
        let g = FiniteGroup::family_i(5, 1, 1).unwrap();
        let gamma = CayleyMultigraph::parse(&g, "x,a,a^-1,y,y^-1").unwrap();
        let all: BTreeSet<usize> = (0..g.order()).collect();
        for t in [1, 7, 33, 59] {
            assert!(gamma.translation_isomorphic(&all, t).unwrap());
        }
    }
}
