//! Orientations and Z3-flows: verification, transforms, the exhaustive
//! oracle, and flows built from even graphs, parity subgraphs and quotients.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{CayleyMultigraph, ConnectionMultiset, EdgeId, Graph, GraphError, VertexId};
use crate::group::FiniteGroup;

/// Default edge limit for [`oracle_nz3`].
pub const DEFAULT_ORACLE_MAX_EDGES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FlowError {
    #[error("flow does not match the graph: {0}")]
    EdgeMismatch(String),
    #[error("oracle capacity exceeded: {edges} edges in a component, limit {limit}")]
    Capacity { edges: usize, limit: usize },
    #[error("vertex {0} has odd degree")]
    Parity(VertexId),
    #[error("cannot normalize: edge {0} carries 0")]
    Normalization(EdgeId),
    #[error("lift failed: {0}")]
    Lift(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub tail: VertexId,
    pub head: VertexId,
}

impl Arc {
    pub fn reversed(self) -> Arc {
        Arc { tail: self.head, head: self.tail }
    }
}

/// A direction for every edge of a graph, keyed by edge id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Orientation {
    arcs: BTreeMap<EdgeId, Arc>,
}

impl Orientation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every edge directed from `u` to `v`.
    pub fn natural(graph: &Graph) -> Self {
        Self { arcs: graph.edges().iter().map(|e| (e.id, Arc { tail: e.u, head: e.v })).collect() }
    }

    pub fn set(&mut self, edge: EdgeId, tail: VertexId, head: VertexId) {
        self.arcs.insert(edge, Arc { tail, head });
    }

    pub fn arc(&self, edge: EdgeId) -> Option<Arc> {
        self.arcs.get(&edge).copied()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (EdgeId, Arc)> + '_ {
        self.arcs.iter().map(|(&e, &a)| (e, a))
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Self { arcs: self.arcs.iter().map(|(&e, &a)| (e, a.reversed())).collect() }
    }

    /// Checks that the orientation covers exactly the edges of `graph` with
    /// matching endpoints.
    pub fn check(&self, graph: &Graph) -> Result<(), FlowError> {
        if self.arcs.len() != graph.edge_count() {
            return Err(FlowError::EdgeMismatch(format!(
                "{} arcs for {} edges",
                self.arcs.len(),
                graph.edge_count()
            )));
        }
        for e in graph.edges() {
            match self.arcs.get(&e.id) {
                Some(a) if e.joins(a.tail, a.head) => {}
                Some(_) => return Err(FlowError::EdgeMismatch(format!("edge {} has wrong endpoints", e.id))),
                None => return Err(FlowError::EdgeMismatch(format!("edge {} is not oriented", e.id))),
            }
        }
        Ok(())
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.arcs.values().filter(|a| a.tail == v).count()
    }

    /// Out-degrees indexed by vertex id.
    pub fn out_degrees(&self, capacity: usize) -> Vec<usize> {
        let mut d = vec![0; capacity];
        for a in self.arcs.values() {
            d[a.tail] += 1;
        }
        d
    }
}

/// An orientation with a value in `{0, 1, 2}` on every edge.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Z3Flow {
    orientation: Orientation,
    values: BTreeMap<EdgeId, u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub valid: bool,
    pub nowhere_zero: bool,
    pub violations: Vec<VertexId>,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.valid && self.nowhere_zero
    }
}

impl Z3Flow {
    pub fn new(orientation: Orientation, values: BTreeMap<EdgeId, u8>) -> Result<Self, FlowError> {
        if values.len() != orientation.len() || !values.keys().all(|e| orientation.arcs.contains_key(e)) {
            return Err(FlowError::EdgeMismatch("values and orientation cover different edges".into()));
        }
        if let Some((e, v)) = values.iter().find(|(_, &v)| v > 2) {
            return Err(FlowError::EdgeMismatch(format!("edge {e} has value {v} outside Z3")));
        }
        Ok(Self { orientation, values })
    }

    /// The same value on every oriented edge.
    pub fn uniform(orientation: Orientation, value: u8) -> Self {
        let values = orientation.arcs.keys().map(|&e| (e, value % 3)).collect();
        Self { orientation, values }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn orientation(&self) -> &Orientation {
        &self.orientation
    }

    pub fn value(&self, edge: EdgeId) -> Option<u8> {
        self.values.get(&edge).copied()
    }

    pub fn arc(&self, edge: EdgeId) -> Option<Arc> {
        self.orientation.arc(edge)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `(edge, arc, value)` in edge-id order.
    pub fn entries(&self) -> impl Iterator<Item = (EdgeId, Arc, u8)> + '_ {
        self.values.iter().map(|(&e, &v)| (e, self.orientation.arcs[&e], v))
    }

    pub fn set(&mut self, edge: EdgeId, tail: VertexId, head: VertexId, value: u8) {
        self.orientation.set(edge, tail, head);
        self.values.insert(edge, value % 3);
    }

    /// Value of `edge` measured in the direction `tail → head`.
    pub fn value_along(&self, edge: EdgeId, tail: VertexId) -> Option<u8> {
        let arc = self.arc(edge)?;
        let v = self.value(edge)?;
        Some(if arc.tail == tail { v } else { (3 - v) % 3 })
    }

    pub fn null_set(&self) -> BTreeSet<EdgeId> {
        self.values.iter().filter(|(_, &v)| v == 0).map(|(&e, _)| e).collect()
    }

    pub fn is_nowhere_zero(&self) -> bool {
        self.values.values().all(|&v| v != 0)
    }

    /// Same values on the reversed orientation.
    pub fn reverse(&self) -> Self {
        Self { orientation: self.orientation.reversed(), values: self.values.clone() }
    }

    pub fn negate(&self) -> Self {
        Self {
            orientation: self.orientation.clone(),
            values: self.values.iter().map(|(&e, &v)| (e, (3 - v) % 3)).collect(),
        }
    }

    /// Flips every value-2 edge so that all values become 1.
    pub fn normalize_to_unit(&self) -> Result<Self, FlowError> {
        let mut out = Self::default();
        for (e, arc, v) in self.entries() {
            match v {
                0 => return Err(FlowError::Normalization(e)),
                1 => out.set(e, arc.tail, arc.head, 1),
                _ => out.set(e, arc.head, arc.tail, 1),
            }
        }
        Ok(out)
    }

    /// Restriction to the given edges.
    pub fn restrict(&self, edges: &BTreeSet<EdgeId>) -> Self {
        let mut out = Self::default();
        for (e, arc, v) in self.entries().filter(|(e, _, _)| edges.contains(e)) {
            out.set(e, arc.tail, arc.head, v);
        }
        out
    }

    /// Pointwise sum; on shared edges `other` is re-expressed in this flow's
    /// direction before adding.
    pub fn add(&self, other: &Z3Flow) -> Self {
        let mut out = self.clone();
        for (e, arc, v) in other.entries() {
            match self.arc(e) {
                Some(mine) => {
                    let along = other.value_along(e, mine.tail).expect("shared edge");
                    let sum = (self.values[&e] + along) % 3;
                    out.values.insert(e, sum);
                }
                None => out.set(e, arc.tail, arc.head, v),
            }
        }
        out
    }

    /// Net flow into each vertex minus out of it, modulo 3.
    pub fn excess(&self, capacity: usize) -> Vec<u8> {
        let mut ex = vec![0u8; capacity];
        for (_, arc, v) in self.entries() {
            ex[arc.head] = (ex[arc.head] + v) % 3;
            ex[arc.tail] = (ex[arc.tail] + 3 - v) % 3;
        }
        ex
    }

    pub fn to_json(&self) -> FlowJson {
        FlowJson {
            orientation: self
                .orientation
                .arcs()
                .map(|(edge, a)| ArcJson { edge, tail: a.tail, head: a.head })
                .collect(),
            values: self.values.iter().map(|(&edge, &value)| ValueJson { edge, value }).collect(),
        }
    }

    pub fn from_json(json: &FlowJson) -> Result<Self, FlowError> {
        let mut orientation = Orientation::new();
        for a in &json.orientation {
            if orientation.arc(a.edge).is_some() {
                return Err(FlowError::EdgeMismatch(format!("edge {} oriented twice", a.edge)));
            }
            orientation.set(a.edge, a.tail, a.head);
        }
        let mut values = BTreeMap::new();
        for v in &json.values {
            if values.insert(v.edge, v.value).is_some() {
                return Err(FlowError::EdgeMismatch(format!("edge {} valued twice", v.edge)));
            }
        }
        Self::new(orientation, values)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcJson {
    pub edge: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueJson {
    pub edge: EdgeId,
    pub value: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowJson {
    pub orientation: Vec<ArcJson>,
    pub values: Vec<ValueJson>,
}

/// Checks conservation modulo 3 at every vertex.
pub fn verify(graph: &Graph, flow: &Z3Flow) -> Result<Verification, FlowError> {
    flow.orientation.check(graph)?;
    let excess = flow.excess(graph.capacity());
    let violations: Vec<VertexId> = graph.vertices().iter().copied().filter(|&v| excess[v] != 0).collect();
    Ok(Verification { valid: violations.is_empty(), nowhere_zero: flow.is_nowhere_zero(), violations })
}

/// Convenience: `verify` succeeded, conservation holds and no value is 0.
pub fn is_nowhere_zero_flow(graph: &Graph, flow: &Z3Flow) -> bool {
    verify(graph, flow).is_ok_and(|v| v.ok())
}

/// Search settings for [`oracle_nz3_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_edges: usize,
    /// `1` runs a single deterministic search.
    pub workers: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { max_edges: DEFAULT_ORACLE_MAX_EDGES, workers: 1 }
    }
}

/// Decides whether `graph` has a nowhere-zero Z3-flow by searching for an
/// orientation with `d⁺(v) ≡ d⁻(v) (mod 3)` everywhere.
pub fn oracle_nz3(graph: &Graph) -> Result<Option<Z3Flow>, FlowError> {
    oracle_nz3_with(graph, OracleConfig::default())
}

pub fn oracle_nz3_with(graph: &Graph, config: OracleConfig) -> Result<Option<Z3Flow>, FlowError> {
    let mut flow = Z3Flow::empty();
    for comp in graph.components() {
        let sub = graph.induced(&comp)?;
        if sub.edge_count() > config.max_edges {
            return Err(FlowError::Capacity { edges: sub.edge_count(), limit: config.max_edges });
        }
        match ComponentSearch::new(&sub).run(config.workers.max(1)) {
            Some(orientation) => flow = flow.add(&Z3Flow::uniform(orientation, 1)),
            None => return Ok(None),
        }
    }
    debug_assert!(is_nowhere_zero_flow(graph, &flow));
    Ok(Some(flow))
}

/// Backtracking over edge directions for one connected component.
struct ComponentSearch {
    ends: Vec<(usize, usize)>,
    ids: Vec<EdgeId>,
    local_of: Vec<VertexId>,
    target: Vec<u8>,
    degree: Vec<usize>,
}

struct SearchState {
    out: Vec<usize>,
    remaining: Vec<usize>,
    forward: Vec<bool>,
}

impl ComponentSearch {
    fn new(graph: &Graph) -> Self {
        // BFS vertex order; each vertex contributes its not-yet-listed edges.
        let mut local = vec![usize::MAX; graph.capacity()];
        let mut local_of = Vec::new();
        let mut order = Vec::new();
        let mut listed = BTreeSet::new();
        if let Some(&start) = graph.vertices().first() {
            let mut queue = VecDeque::from([start]);
            local[start] = 0;
            local_of.push(start);
            while let Some(v) = queue.pop_front() {
                for e in graph.incident(v) {
                    let w = e.other(v);
                    if local[w] == usize::MAX {
                        local[w] = local_of.len();
                        local_of.push(w);
                        queue.push_back(w);
                    }
                    if listed.insert(e.id) {
                        order.push(e.clone());
                    }
                }
            }
        }
        let ends = order.iter().map(|e| (local[e.u], local[e.v])).collect();
        let ids = order.iter().map(|e| e.id).collect();
        let degree: Vec<usize> = local_of.iter().map(|&v| graph.degree(v)).collect();
        let target = degree.iter().map(|&d| ((2 * d) % 3) as u8).collect();
        Self { ends, ids, local_of, target, degree }
    }

    fn feasible(&self, state: &SearchState, v: usize) -> bool {
        let rem = state.remaining[v];
        if rem >= 2 {
            return true;
        }
        let out = state.out[v];
        (out..=out + rem).any(|t| t % 3 == self.target[v] as usize)
    }

    fn assign(&self, state: &mut SearchState, i: usize, forward: bool) -> bool {
        let (u, v) = self.ends[i];
        state.forward[i] = forward;
        state.remaining[u] -= 1;
        state.remaining[v] -= 1;
        state.out[if forward { u } else { v }] += 1;
        self.feasible(state, u) && self.feasible(state, v)
    }

    fn unassign(&self, state: &mut SearchState, i: usize) {
        let (u, v) = self.ends[i];
        state.remaining[u] += 1;
        state.remaining[v] += 1;
        state.out[if state.forward[i] { u } else { v }] -= 1;
    }

    fn descend(&self, state: &mut SearchState, i: usize, stop: &AtomicBool) -> bool {
        if i == self.ends.len() {
            return true;
        }
        if i % 16 == 0 && stop.load(Ordering::Relaxed) {
            return false;
        }
        for forward in [true, false] {
            let ok = self.assign(state, i, forward);
            if ok && self.descend(state, i + 1, stop) {
                return true;
            }
            self.unassign(state, i);
        }
        false
    }

    fn fresh_state(&self) -> SearchState {
        SearchState {
            out: vec![0; self.degree.len()],
            remaining: self.degree.clone(),
            forward: vec![true; self.ends.len()],
        }
    }

    /// Applies a fixed prefix of directions; `false` if pruned.
    fn apply_prefix(&self, state: &mut SearchState, prefix: &[bool]) -> bool {
        prefix.iter().enumerate().all(|(i, &f)| self.assign(state, i, f))
    }

    fn orientation(&self, state: &SearchState) -> Orientation {
        let mut o = Orientation::new();
        for (i, &(u, v)) in self.ends.iter().enumerate() {
            let (t, h) = if state.forward[i] { (u, v) } else { (v, u) };
            o.set(self.ids[i], self.local_of[t], self.local_of[h]);
        }
        o
    }

    fn run(&self, workers: usize) -> Option<Orientation> {
        if self.ends.is_empty() {
            return self.target.iter().all(|&t| t == 0).then(Orientation::new);
        }
        // Reversing every arc maps solutions to solutions, so the first edge
        // may be fixed.
        let free = self.ends.len() - 1;
        let split = if workers > 1 { free.min(workers.next_power_of_two().trailing_zeros() as usize + 2) } else { 0 };
        let prefixes: Vec<Vec<bool>> = (0..1usize << split)
            .map(|mask| std::iter::once(true).chain((0..split).map(|b| mask >> (split - 1 - b) & 1 == 0)).collect())
            .collect();
        let stop = AtomicBool::new(false);
        if workers <= 1 {
            let mut state = self.fresh_state();
            let ok = self.apply_prefix(&mut state, &prefixes[0]) && self.descend(&mut state, 1, &stop);
            return ok.then(|| self.orientation(&state));
        }
        let next = Mutex::new(0usize);
        let found: Mutex<Option<(usize, Orientation)>> = Mutex::new(None);
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let idx = {
                        let mut n = next.lock().expect("prefix counter");
                        let idx = *n;
                        *n += 1;
                        idx
                    };
                    if idx >= prefixes.len() || stop.load(Ordering::Relaxed) {
                        break;
                    }
                    let mut state = self.fresh_state();
                    let prefix = &prefixes[idx];
                    if self.apply_prefix(&mut state, prefix) && self.descend(&mut state, prefix.len(), &stop) {
                        stop.store(true, Ordering::Relaxed);
                        let mut slot = found.lock().expect("result slot");
                        if slot.as_ref().is_none_or(|(j, _)| idx < *j) {
                            *slot = Some((idx, self.orientation(&state)));
                        }
                        break;
                    }
                });
            }
        });
        found.into_inner().expect("result slot").map(|(_, o)| o)
    }
}

/// Seeded local search for an orientation with `d⁺(v) ≡ d⁻(v) (mod 3)`.
///
/// Each vertex gets a target out-degree; surplus is pushed to deficit along
/// directed paths, and when no such path exists the targets of the stuck set
/// are raised against targets outside it. `None` means the search gave up,
/// not that no flow exists.
pub fn search_nz3(graph: &Graph, seed: u64, max_rounds: usize) -> Result<Option<Z3Flow>, FlowError> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut flow = Z3Flow::empty();
    for comp in graph.components() {
        let sub = graph.induced(&comp)?;
        match OrientationSearch::new(&sub).run(&mut rng, max_rounds) {
            Some(orientation) => flow = flow.add(&Z3Flow::uniform(orientation, 1)),
            None => return Ok(None),
        }
    }
    Ok(is_nowhere_zero_flow(graph, &flow).then_some(flow))
}

#[derive(Clone)]
struct State {
    forward: Vec<bool>,
    out: Vec<usize>,
    target: Vec<usize>,
}

struct OrientationSearch {
    ids: Vec<EdgeId>,
    ends: Vec<(usize, usize)>,
    local_of: Vec<VertexId>,
    incident: Vec<Vec<usize>>,
    degree: Vec<usize>,
}

impl OrientationSearch {
    fn new(graph: &Graph) -> Self {
        let local_of: Vec<VertexId> = graph.vertices().to_vec();
        let mut local = vec![usize::MAX; graph.capacity()];
        for (i, &v) in local_of.iter().enumerate() {
            local[v] = i;
        }
        let n = local_of.len();
        let mut incident = vec![Vec::new(); n];
        let mut degree = vec![0; n];
        let mut ids = Vec::new();
        let mut ends = Vec::new();
        for e in graph.edges() {
            let (a, b) = (local[e.u], local[e.v]);
            degree[a] += 1;
            degree[b] += 1;
            if a != b {
                incident[a].push(ends.len());
                incident[b].push(ends.len());
            }
            ids.push(e.id);
            ends.push((a, b));
        }
        Self { ids, ends, local_of, incident, degree }
    }

    /// Reverses directed surplus-to-deficit paths until none is left.
    /// Returns the remaining surplus and the set reachable from it.
    fn settle(&self, state: &mut State) -> (usize, Vec<bool>) {
        let n = self.local_of.len();
        let tail = |forward: &[bool], e: usize| if forward[e] { self.ends[e].0 } else { self.ends[e].1 };
        loop {
            let surplus: Vec<usize> = (0..n).filter(|&v| state.out[v] > state.target[v]).collect();
            let mut via = vec![usize::MAX; n];
            let mut seen = vec![false; n];
            let mut queue: VecDeque<usize> = surplus.iter().copied().collect();
            for &s in &surplus {
                seen[s] = true;
            }
            let mut hit = None;
            while let Some(v) = queue.pop_front() {
                if state.out[v] < state.target[v] {
                    hit = Some(v);
                    break;
                }
                for &e in &self.incident[v] {
                    if tail(&state.forward, e) != v {
                        continue;
                    }
                    let (a, b) = self.ends[e];
                    let w = if a == v { b } else { a };
                    if !seen[w] {
                        seen[w] = true;
                        via[w] = e;
                        queue.push_back(w);
                    }
                }
            }
            let Some(mut v) = hit else {
                let left = surplus.iter().map(|&v| state.out[v] - state.target[v]).sum();
                return (left, seen);
            };
            state.out[v] += 1;
            while via[v] != usize::MAX {
                let e = via[v];
                let prev = tail(&state.forward, e);
                state.forward[e] = !state.forward[e];
                v = prev;
            }
            state.out[v] -= 1;
        }
    }

    fn allowed(&self, v: usize, t: usize) -> bool {
        // 2t - d ≡ 0 (mod 3)
        t <= self.degree[v] && (t + self.degree[v]) % 3 == 0
    }

    fn run(&self, rng: &mut StdRng, max_rounds: usize) -> Option<Orientation> {
        let n = self.local_of.len();
        let m = self.ends.len();
        // Out-degree targets: start at the allowed value nearest d/2.
        let mut target = vec![0usize; n];
        for v in 0..n {
            let d = self.degree[v];
            target[v] = (0..=d).filter(|&t| self.allowed(v, t)).min_by_key(|t| t.abs_diff(d / 2))?;
        }
        let mut total: usize = target.iter().sum();
        while total != m {
            let up = total < m;
            let movable: Vec<usize> = (0..n)
                .filter(|&v| if up { self.allowed(v, target[v] + 3) } else { target[v] >= 3 })
                .collect();
            let &v = movable.choose(rng)?;
            if up {
                target[v] += 3;
                total += 3;
            } else {
                target[v] -= 3;
                total -= 3;
            }
        }
        let mut state = State { forward: vec![true; m], out: vec![0; n], target };
        for &(a, _) in &self.ends {
            state.out[a] += 1;
        }
        let (mut score, mut seen) = self.settle(&mut state);
        for _ in 0..max_rounds {
            if score == 0 {
                break;
            }
            // Move three units of target into the closed set around the
            // surplus, preferring surplus vertices inside and deficits outside.
            let guided = rng.gen_bool(0.8);
            let pick = |rng: &mut StdRng, ok: &dyn Fn(usize) -> bool, tight: &dyn Fn(usize) -> bool| {
                let best: Vec<usize> = (0..n).filter(|&v| ok(v) && tight(v)).collect();
                match best.choose(rng) {
                    Some(&v) => Some(v),
                    None => (0..n).filter(|&v| ok(v)).collect::<Vec<_>>().choose(rng).copied(),
                }
            };
            let t = &state.target;
            let (a, b) = if guided {
                (
                    pick(rng, &|v| seen[v] && self.allowed(v, t[v] + 3), &|v| state.out[v] > t[v]),
                    pick(rng, &|v| !seen[v] && t[v] >= 3, &|v| state.out[v] < t[v]),
                )
            } else {
                (pick(rng, &|v| self.allowed(v, t[v] + 3), &|_| true), pick(rng, &|v| t[v] >= 3, &|_| true))
            };
            let (Some(a), Some(b)) = (a, b) else { continue };
            if a == b {
                continue;
            }
            let saved = state.clone();
            state.target[a] += 3;
            state.target[b] -= 3;
            let (next, next_seen) = self.settle(&mut state);
            if next <= score || rng.gen_bool(0.1) {
                score = next;
                seen = next_seen;
            } else {
                state = saved;
            }
        }
        if score != 0 {
            return None;
        }
        let forward = state.forward;
        let mut orientation = Orientation::new();
        for (e, &(a, b)) in self.ends.iter().enumerate() {
            let (t, h) = if forward[e] { (a, b) } else { (b, a) };
            orientation.set(self.ids[e], self.local_of[t], self.local_of[h]);
        }
        Some(orientation)
    }
}

/// All-ones flow on an even graph from a decomposition into closed trails.
pub fn even_graph_flow(graph: &Graph) -> Result<Z3Flow, FlowError> {
    if let Some(&v) = graph.vertices().iter().find(|&&v| graph.degree(v) % 2 == 1) {
        return Err(FlowError::Parity(v));
    }
    let mut used = BTreeSet::new();
    let mut cursor = vec![0usize; graph.capacity()];
    let incident: Vec<Vec<(EdgeId, VertexId)>> = (0..graph.capacity())
        .map(|v| graph.incident(v).map(|e| (e.id, e.other(v))).collect())
        .collect();
    let mut flow = Z3Flow::empty();
    for &start in graph.vertices() {
        loop {
            // Walk an unused trail from `start`; in an even graph it can only
            // get stuck back at `start`.
            let mut v = start;
            let mut moved = false;
            loop {
                let list = &incident[v];
                while cursor[v] < list.len() && used.contains(&list[cursor[v]].0) {
                    cursor[v] += 1;
                }
                if cursor[v] == list.len() {
                    break;
                }
                let (e, w) = list[cursor[v]];
                used.insert(e);
                flow.set(e, v, w, 1);
                v = w;
                moved = true;
            }
            debug_assert_eq!(v, start);
            if !moved {
                break;
            }
        }
    }
    Ok(flow)
}

/// Extends a nowhere-zero flow on a parity subgraph to the whole graph.
pub fn parity_lift(graph: &Graph, sub: &Graph, flow: &Z3Flow) -> Result<Z3Flow, FlowError> {
    if !graph.is_parity_subgraph(sub) {
        return Err(FlowError::Lift("not a parity subgraph".into()));
    }
    let check = verify(sub, flow).map_err(|e| FlowError::Lift(format!("flow on the subgraph: {e}")))?;
    if !check.ok() {
        return Err(FlowError::Lift(format!(
            "flow on the subgraph is not a nowhere-zero flow (violations at {:?})",
            check.violations
        )));
    }
    let rest = graph.delete_edges(&sub.edge_ids().collect::<Vec<_>>())?;
    Ok(flow.add(&even_graph_flow(&rest)?))
}

/// Pulls a flow on `Cay(G/N, X/N)` back to `Cay(G, X)`.
pub fn quotient_lift(
    gamma: &CayleyMultigraph,
    normal: &BTreeSet<usize>,
    flow: &Z3Flow,
) -> Result<Z3Flow, FlowError> {
    let quotient = gamma.quotient(normal).map_err(|e| FlowError::Lift(e.to_string()))?;
    let qgraph = quotient.graph.graph();
    let check = verify(qgraph, flow).map_err(|e| FlowError::Lift(format!("flow on the quotient: {e}")))?;
    if !check.ok() {
        return Err(FlowError::Lift("flow on the quotient is not a nowhere-zero flow".into()));
    }
    let mut out = Z3Flow::empty();
    for e in gamma.graph().edges() {
        let dart = e.dart.ok_or_else(|| FlowError::Lift(format!("edge {} has no Cayley dart", e.id)))?;
        let (qid, base_is_u) = quotient.image(dart);
        let qe = qgraph.edge(qid)?;
        let arc = flow.arc(qid).expect("verified");
        let forward = (arc.tail == qe.u) == base_is_u;
        let (tail, head) = if forward { (e.u, e.v) } else { (e.v, e.u) };
        out.set(e.id, tail, head, flow.value(qid).expect("verified"));
    }
    Ok(out)
}

/// `Cay(A, {y, y⁻¹, z, z, z′})` and a nowhere-zero flow on it, for `|y| > 2`
/// and involutions `z`, `z′` (possibly equal).
pub fn multiset_flow(group: &FiniteGroup, y: usize, z: usize, z_prime: usize) -> Result<(CayleyMultigraph, Z3Flow), FlowError> {
    for &g in &[y, z, z_prime] {
        if g >= group.order() {
            return Err(FlowError::Parameter(format!("element {g} is outside the group")));
        }
    }
    if group.order_idx(y) <= 2 {
        return Err(FlowError::Parameter("y must have order larger than 2".into()));
    }
    if group.order_idx(z) != 2 || group.order_idx(z_prime) != 2 {
        return Err(FlowError::Parameter("z and z' must be involutions".into()));
    }
    let named = |name: &str, g: usize| (name.to_string(), g);
    let entries = vec![
        named("y", y),
        named("y^-1", group.inv_idx(y)),
        named("z", z),
        named("z", z),
        named(if z == z_prime { "z" } else { "z'" }, z_prime),
    ];
    let gamma = CayleyMultigraph::new(group.clone(), ConnectionMultiset::named(group, entries)?)?;
    let graph = gamma.graph();
    let second_z: BTreeSet<EdgeId> = graph
        .edges()
        .iter()
        .filter(|e| e.dart.is_some_and(|d| d.position == 3))
        .map(|e| e.id)
        .collect();
    let flow = if z == z_prime {
        // Every y-edge along its y-cycle, every z-edge from u to v: the three
        // parallel z-edges contribute 3 ≡ 0 at both ends.
        Z3Flow::uniform(Orientation::natural(graph), 1)
    } else {
        let base = graph.delete_edges(&second_z)?;
        let mut flow = even_graph_flow(&base)?;
        for &id in &second_z {
            let e = graph.edge(id)?;
            let twin = gamma.edge_at(e.dart.expect("cayley edge").base, 2);
            let arc = flow.arc(twin).expect("z-edge in the even subgraph");
            let negated = (3 - flow.value(twin).expect("valued")) % 3;
            flow.set(twin, arc.tail, arc.head, negated);
            flow.set(id, arc.tail, arc.head, negated);
        }
        flow
    };
    Ok((gamma, flow))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cycle(n: usize) -> Graph {
        Graph::from_pairs(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>()).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                pairs.push((i, j));
            }
        }
        Graph::from_pairs(n, &pairs).unwrap()
    }

    #[test]
    fn cyclic_triangle() {
        let c3 = cycle(3);
        let f = Z3Flow::uniform(Orientation::natural(&c3), 1);
        let v = verify(&c3, &f).unwrap();
        assert!(v.valid && v.nowhere_zero);
        let mut g = f.clone();
        g.set(0, 0, 1, 0);
        let v = verify(&c3, &g).unwrap();
        assert!(!v.nowhere_zero);
        assert!(!v.valid);
        assert_eq!(v.violations, vec![0, 1]);
    }

    #[test]
    fn verify_rejects_foreign_edges() {
        let c3 = cycle(3);
        let mut f = Z3Flow::uniform(Orientation::natural(&c3), 1);
        f.set(7, 0, 1, 1);
        assert!(matches!(verify(&c3, &f), Err(FlowError::EdgeMismatch(_))));
        let mut f = Z3Flow::uniform(Orientation::natural(&c3), 1);
        f.set(0, 0, 2, 1);
        assert!(matches!(verify(&c3, &f), Err(FlowError::EdgeMismatch(_))));
    }

    #[test]
    fn transforms() {
        let k5 = complete(5);
        let f = even_graph_flow(&k5).unwrap().negate();
        assert_eq!(f.negate().negate(), f);
        assert!(is_nowhere_zero_flow(&k5, &f.reverse()));
        let unit = f.normalize_to_unit().unwrap();
        assert!(unit.entries().all(|(_, _, v)| v == 1));
        assert!(is_nowhere_zero_flow(&k5, &unit));
        let mut z = f.clone();
        z.set(0, 0, 1, 0);
        assert_eq!(z.normalize_to_unit(), Err(FlowError::Normalization(0)));
        assert_eq!(z.null_set(), BTreeSet::from([0]));
    }

    #[test]
    fn oracle_on_k6_normalizes() {
        let k6 = complete(6);
        let f = oracle_nz3(&k6).unwrap().expect("K6 has a flow");
        assert!(is_nowhere_zero_flow(&k6, &f));
        assert!(is_nowhere_zero_flow(&k6, &f.normalize_to_unit().unwrap()));
    }

    #[test]
    fn oracle_small_cases() {
        assert!(oracle_nz3(&complete(4)).unwrap().is_none());
        assert!(oracle_nz3(&cycle(5)).unwrap().is_some());
        assert!(oracle_nz3(&Graph::from_pairs(2, &[(0, 1)]).unwrap()).unwrap().is_none());
        assert!(oracle_nz3(&Graph::empty()).unwrap().is_some());
        // K_{3,3} is cubic and bipartite.
        let k33 = Graph::from_pairs(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]).unwrap();
        assert!(oracle_nz3(&k33).unwrap().is_some());
    }

    #[test]
    fn oracle_capacity_error() {
        let k12 = complete(12);
        let cfg = OracleConfig { max_edges: 20, workers: 1 };
        assert_eq!(oracle_nz3_with(&k12, cfg), Err(FlowError::Capacity { edges: 66, limit: 20 }));
    }

    #[test]
    fn parallel_oracle_agrees() {
        for n in 4..=8 {
            let k = complete(n);
            let seq = oracle_nz3(&k).unwrap().is_some();
            let par = oracle_nz3_with(&k, OracleConfig { workers: 4, ..OracleConfig::default() }).unwrap();
            assert_eq!(seq, par.is_some(), "K{n}");
            if let Some(f) = par {
                assert!(is_nowhere_zero_flow(&k, &f));
            }
        }
    }

    #[test]
    fn even_graph_flows() {
        assert!(is_nowhere_zero_flow(&cycle(5), &even_graph_flow(&cycle(5)).unwrap()));
        assert!(is_nowhere_zero_flow(&complete(5), &even_graph_flow(&complete(5)).unwrap()));
        assert!(even_graph_flow(&Graph::empty()).unwrap().is_empty());
        assert_eq!(even_graph_flow(&complete(4)), Err(FlowError::Parity(0)));
    }

    #[test]
    fn parity_lift_cases() {
        let c5 = cycle(5);
        let empty = c5.spanning_subgraph(&[]).unwrap();
        let f = parity_lift(&c5, &empty, &Z3Flow::empty()).unwrap();
        assert!(is_nowhere_zero_flow(&c5, &f));

        let k6 = complete(6);
        // {01, 23, 45} is a perfect matching: a parity subgraph with no flow.
        let ids: Vec<EdgeId> = k6.edges().iter().filter(|e| matches!((e.u, e.v), (0, 1) | (2, 3) | (4, 5))).map(|e| e.id).collect();
        let matching = k6.spanning_subgraph(&ids).unwrap();
        assert!(k6.is_parity_subgraph(&matching));
        let bogus = Z3Flow::uniform(Orientation::natural(&matching), 1);
        assert!(matches!(parity_lift(&k6, &matching, &bogus), Err(FlowError::Lift(_))));
    }

    #[test]
    fn quotient_lift_cycle() {
        let z12 = FiniteGroup::cyclic(12).unwrap();
        let c12 = CayleyMultigraph::new(z12.clone(), ConnectionMultiset::new(&z12, &[1, 11]).unwrap()).unwrap();
        let n = z12.subgroup(&[4]).unwrap();
        let q = c12.quotient(&n).unwrap();
        let f = Z3Flow::uniform(Orientation::natural(q.graph.graph()), 1);
        let lifted = quotient_lift(&c12, &n, &f).unwrap();
        assert!(is_nowhere_zero_flow(c12.graph(), &lifted));
        assert!(lifted.entries().all(|(_, _, v)| v == 1));
        let all: BTreeSet<usize> = (0..12).collect();
        assert!(matches!(quotient_lift(&c12, &all, &f), Err(FlowError::Lift(_))));
    }

    #[test]
    fn multiset_flow_on_s3() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let find = |w: &str| s3.labels().iter().position(|l| l == w).unwrap();
        let (y, z, z2) = (find("120"), find("102"), find("210"));
        let (g, f) = multiset_flow(&s3, y, z, z2).unwrap();
        assert_eq!(g.graph().regular_degree(), Some(5));
        assert!(is_nowhere_zero_flow(g.graph(), &f));
        let (g, f) = multiset_flow(&s3, y, z, z).unwrap();
        assert!(is_nowhere_zero_flow(g.graph(), &f));
        assert!(matches!(multiset_flow(&s3, z, z, z2), Err(FlowError::Parameter(_))));
    }

    #[test]
    fn json_round_trip() {
        let f = even_graph_flow(&complete(5)).unwrap();
        let text = serde_json::to_string(&f.to_json()).unwrap();
        let back = Z3Flow::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, f);
    }

    fn random_graph() -> impl Strategy<Value = Graph> {
        (3usize..8).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..14).prop_map(move |pairs| {
                let pairs: Vec<_> = pairs.into_iter().filter(|(u, v)| u != v).collect();
                Graph::from_pairs(n, &pairs).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn reverse_and_negate_preserve_validity(g in random_graph()) {
            if let Some(f) = oracle_nz3(&g).unwrap() {
                for h in [f.reverse(), f.negate(), f.negate().reverse()] {
                    prop_assert!(is_nowhere_zero_flow(&g, &h));
                    prop_assert_eq!(h.null_set(), f.null_set());
                }
            }
        }

        #[test]
        fn oracle_is_label_invariant(g in random_graph(), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut perm: Vec<usize> = (0..g.capacity()).collect();
            perm.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
            let h = g.relabel(&perm).unwrap();
            prop_assert_eq!(oracle_nz3(&g).unwrap().is_some(), oracle_nz3(&h).unwrap().is_some());
        }
    }
}
