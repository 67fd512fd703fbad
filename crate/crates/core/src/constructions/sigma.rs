//! Certificates for the `A4 x Zp` graphs built from a subset `ℋ ⊂ H = <a>`.
//!
//! With `Y = <y>` and `Σ` the subgraph induced on `Y`, put
//! `𝒴 = ℋ ∪ y(H∖ℋ) ∪ y²ℋ`, `Σ0 = Σ[𝒴]` and `Σ1 = Σ[Y∖𝒴]`. When both are
//! pseudoforests whose components through `yH` are small trees, the split
//! `U = X0ℋ ∪ X1(H∖ℋ)` of the whole group has pseudoforest sides, and reduced
//! transversals of `Σ0`, `Σ1` that cover each other's `yH` vertices give a
//! full partition certificate.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{CayleyMultigraph, Graph, VertexId};
use crate::matching::maximum_matching;
use crate::pseudoforest::{classify, ComponentKind, PartitionCertificate};

use super::{
    build_gamma, condition, from_certificate, searched_certificate, Construction, ConstructionError, GammaSpec, Report, Words,
};

type Set = BTreeSet<VertexId>;

/// Which `yH` vertices of the other side a reduced transversal covers, and
/// through which connection element: `T_y`, `T_ay ⊆ T ∩ H` and
/// `T_{y^-1}`, `T_{(ay)^-1} ⊆ T ∩ y²H`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SigmaSplit {
    pub y: Set,
    pub ay: Set,
    pub y_inv: Set,
    pub ay_inv: Set,
}

#[derive(Debug, Clone)]
pub struct SigmaPair {
    pub spec: GammaSpec,
    pub cayley: CayleyMultigraph,
    /// The name of the rule that chose `ℋ`.
    pub rule: &'static str,
    pub h_set: Set,
    pub y_set: Set,
    /// `Σ0`, `Σ1`.
    pub sigma: [Graph; 2],
    /// Reduced transversals `T0`, `T1`.
    pub transversals: [Set; 2],
    pub splits: [SigmaSplit; 2],
}

/// The cosets `H`, `yH`, `y²H` of `Y`.
struct Levels {
    h: Set,
    yh: Set,
    y2h: Set,
}

impl Levels {
    fn new(w: &Words, p: u32) -> Self {
        let h = w.a_set(0..p as i64);
        Self { yh: w.left(w.y(1), &h), y2h: w.left(w.y(2), &h), h }
    }

    fn all(&self) -> Set {
        self.h.iter().chain(&self.yh).chain(&self.y2h).copied().collect()
    }
}

const STAGE_PSEUDO: &str = "sigma pseudoforest";
const STAGE_SPLIT: &str = "sigma transversal";

fn sigma_pair(spec: GammaSpec, rule: &'static str, exps: BTreeSet<i64>) -> Result<SigmaPair, ConstructionError> {
    let cayley = build_gamma(&spec)?;
    let group = cayley.group().clone();
    let w = Words::new(&group)?;
    let p = match spec {
        GammaSpec::Gamma3 { p, .. } | GammaSpec::Gamma4 { p, .. } => p,
        _ => return Err(ConstructionError::Unsupported("Σ construction needs an A4 x Zp graph".into())),
    };
    let lv = Levels::new(&w, p);
    let h_set = w.a_set(exps);
    let rest: Set = lv.h.difference(&h_set).copied().collect();
    let y_set: Set = h_set.iter().copied().chain(w.left(w.y(1), &rest)).chain(w.left(w.y(2), &h_set)).collect();
    let other: Set = lv.all().difference(&y_set).copied().collect();
    let graph = cayley.graph();
    let sigma = [graph.induced(&y_set)?, graph.induced(&other)?];

    // Components that need a transversal vertex: trees with at most one
    // vertex in yH.
    let mut eligible: [Vec<Vec<VertexId>>; 2] = [Vec::new(), Vec::new()];
    for (eps, sub) in sigma.iter().enumerate() {
        let classes = classify(sub);
        let cond = if eps == 0 { "(ii)" } else { "(iii)" };
        for comp in &classes.components {
            let witness = group.label(comp.vertices[0]);
            if comp.kind == ComponentKind::Other {
                return Err(condition(STAGE_PSEUDO, "(i)", format!("Σ{eps} component of {witness} has more than one cycle")));
            }
            let on_yh = comp.vertices.iter().filter(|v| lv.yh.contains(v)).count();
            if on_yh > 0 && (!comp.is_tree() || on_yh > 2) {
                return Err(condition(
                    STAGE_PSEUDO,
                    cond,
                    format!("Σ{eps} component of {witness} is {} with {on_yh} vertices in yH", if comp.is_tree() { "a tree" } else { "unicyclic" }),
                ));
            }
            if comp.is_tree() && on_yh <= 1 {
                eligible[eps].push(comp.vertices.clone());
            }
        }
    }
    // A component may use an H vertex, or a y²H vertex when it avoids yH.
    let can_pick = |comp: &[VertexId], v: VertexId| {
        lv.h.contains(&v) || (lv.y2h.contains(&v) && !comp.iter().any(|u| lv.yh.contains(u)))
    };
    // Components with a yH vertex and nothing usable must take the yH vertex.
    let forced = |comp: &[VertexId]| comp.iter().find(|v| lv.yh.contains(v)).copied().filter(|_| !comp.iter().any(|&v| can_pick(comp, v)));

    let with_ay = matches!(spec, GammaSpec::Gamma4 { .. });
    let mut chosen: [BTreeMap<usize, VertexId>; 2] = [BTreeMap::new(), BTreeMap::new()];
    let mut splits = [SigmaSplit::default(), SigmaSplit::default()];
    for eps in 0..2 {
        let comp_of: BTreeMap<VertexId, usize> =
            eligible[eps].iter().enumerate().flat_map(|(i, c)| c.iter().map(move |&v| (v, i))).collect();
        let targets: Vec<VertexId> = eligible[1 - eps].iter().filter_map(|c| forced(c)).collect();
        // Candidates per target: (component, source vertex, slot).
        let mut options: Vec<Vec<(usize, VertexId, u8)>> = Vec::with_capacity(targets.len());
        for &v in &targets {
            let mut opts = Vec::new();
            let mut slots = vec![(w.mul(w.y(-1), v), 0u8), (w.mul(w.y(1), v), 2)];
            if with_ay {
                slots.extend([(w.mul(w.ay(-1), v), 1), (w.mul(w.ay(1), v), 3)]);
            }
            for (src, slot) in slots {
                if let Some(&ci) = comp_of.get(&src) {
                    if can_pick(&eligible[eps][ci], src) && !opts.iter().any(|&(c, _, _)| c == ci) {
                        opts.push((ci, src, slot));
                    }
                }
            }
            options.push(opts);
        }
        let adj: Vec<Vec<usize>> = options.iter().map(|o| o.iter().map(|&(c, _, _)| c).collect()).collect();
        let m = maximum_matching(&adj, eligible[eps].len());
        for (ti, matched) in m.iter().enumerate() {
            let Some(ci) = *matched else {
                return Err(condition(
                    STAGE_SPLIT,
                    "(ii)",
                    format!("T{} ∩ yH vertex {} is not covered from T{eps}", 1 - eps, group.label(targets[ti])),
                ));
            };
            let &(_, src, slot) = options[ti].iter().find(|&&(c, _, _)| c == ci).expect("matched option");
            chosen[eps].insert(ci, src);
            let split = &mut splits[eps];
            match slot {
                0 => split.y.insert(src),
                1 => split.ay.insert(src),
                2 => split.y_inv.insert(src),
                _ => split.ay_inv.insert(src),
            };
        }
    }
    let transversals = [0, 1].map(|eps| {
        eligible[eps]
            .iter()
            .enumerate()
            .map(|(ci, comp)| match chosen[eps].get(&ci) {
                Some(&v) => v,
                None => forced(comp)
                    .or_else(|| comp.iter().copied().find(|v| lv.h.contains(v)))
                    .or_else(|| comp.iter().copied().find(|&v| can_pick(comp, v)))
                    .expect("an eligible component has a usable vertex"),
            })
            .collect::<Set>()
    });
    Ok(SigmaPair { spec, cayley, rule, h_set, y_set, sigma, transversals, splits })
}

/// `ℋ = {a^i : i even}`.
pub fn gamma3_sigma(p: u32, s: u32) -> Result<SigmaPair, ConstructionError> {
    let spec = GammaSpec::Gamma3 { p, s };
    spec.group()?;
    sigma_pair(spec, "even exponents", (0..p as i64).filter(|i| i % 2 == 0).collect())
}

/// The `ℋ` rule for `y^3 = a^{±b}` with `2 ≤ b ≤ (p-1)/2`: whole runs of `b`
/// consecutive exponents, alternating in and out, with the last in-run moved
/// up by one when the number `r` of full runs is odd.
fn block_exponents(p: i64, b: i64) -> BTreeSet<i64> {
    let r = p / b;
    let starts: Vec<i64> = if r % 2 == 0 {
        (0..=(r - 2) / 2).map(|i| 2 * i * b).collect()
    } else {
        (0..=(r - 3) / 2).map(|i| 2 * i * b).chain([(r - 2) * b]).collect()
    };
    starts.into_iter().flat_map(|st| st..st + b).collect()
}

/// Dispatches on `s` for `y^3 = a^s`; `s = p - 1` is handled by
/// [`super::gamma4_direct`] instead.
pub fn gamma4_sigma(p: u32, s: u32) -> Result<SigmaPair, ConstructionError> {
    let spec = GammaSpec::Gamma4 { p, s };
    spec.group()?;
    let (pi, si) = (p as i64, s as i64);
    if si == pi - 1 {
        return Err(ConstructionError::Unsupported("y^3 = a^-1 uses the direct partition, not the Σ construction".into()));
    }
    if si == 1 {
        let exps: BTreeSet<i64> = if p % 4 == 1 {
            (0..pi).filter(|i| matches!(i % 4, 0 | 1)).collect()
        } else {
            (0..=pi - 3).filter(|i| matches!(i % 4, 0 | 1)).chain([pi - 1]).collect()
        };
        return sigma_pair(spec, if p % 4 == 1 { "s = 1, p ≡ 1 (mod 4)" } else { "s = 1, p ≡ 3 (mod 4)" }, exps);
    }
    if 2 * si <= pi - 1 {
        sigma_pair(spec, "runs, y^3 = a^b", block_exponents(pi, si))
    } else {
        sigma_pair(spec, "runs, y^3 = a^-b", block_exponents(pi, pi - si))
    }
}

/// Runs as in the printed rule, with the last in-run replaced by
/// `len` exponents starting at `start`.
fn shifted_runs(p: i64, b: i64, start: i64, len: i64) -> BTreeSet<i64> {
    let r = p / b;
    (0..=(r - 3) / 2).flat_map(|i| 2 * i * b..2 * i * b + b).chain((start..start + len).map(|i| i % p)).collect()
}

fn lifted(pair: Result<SigmaPair, ConstructionError>) -> Option<Construction> {
    pair.and_then(|pair| lift_sigma_certificate(&pair)).ok().filter(|c| c.report.all_pass())
}

/// `Γ3` via the even-exponent rule, falling back to a searched orientation.
pub fn gamma3_certificate(p: u32, s: u32) -> Result<Construction, ConstructionError> {
    let spec = GammaSpec::Gamma3 { p, s };
    spec.group()?;
    if let Some(c) = lifted(gamma3_sigma(p, s)) {
        return Ok(c);
    }
    let mut report = Report::new("gamma3", &spec.params());
    report.note("the even-exponent split has no valid transversals");
    searched_certificate(build_gamma(&spec)?, report)
}

/// `Γ4` for every `s`: the direct partition for `s = p - 1`, else the `ℋ`
/// rule for `s`. When `y^3 = a^-b` with an odd number of runs the printed
/// rule can fail; the last run is then moved and resized, and if no such
/// variant works the certificate comes from a searched orientation.
pub fn gamma4_certificate(p: u32, s: u32) -> Result<Construction, ConstructionError> {
    let spec = GammaSpec::Gamma4 { p, s };
    spec.group()?;
    if s + 1 == p {
        return super::gamma4_direct(p);
    }
    if let Some(c) = lifted(gamma4_sigma(p, s)) {
        return Ok(c);
    }
    let (pi, si) = (p as i64, s as i64);
    let b = pi - si;
    let mut report = Report::new("gamma4", &spec.params());
    if 2 * si > pi - 1 && b >= 2 && (pi / b) % 2 == 1 {
        let r = pi / b;
        for start in (r - 2) * b..pi {
            for len in 1..=b + 1 {
                let exps = shifted_runs(pi, b, start, len);
                if let Some(mut c) = lifted(sigma_pair(spec, "runs, y^3 = a^-b, last run moved", exps)) {
                    c.report.note(format!("last run of ℋ: {len} exponents from {start}"));
                    return Ok(c);
                }
            }
        }
        report.note("no run layout gives valid transversals");
    } else {
        report.note("the ℋ rule has no valid transversals");
    }
    searched_certificate(build_gamma(&spec)?, report)
}

fn pairs_of(graph: &Graph) -> BTreeSet<(VertexId, VertexId)> {
    graph.edges().iter().map(|e| (e.u.min(e.v), e.u.max(e.v))).collect()
}

impl SigmaPair {
    /// Edges of `Σ_ε` as sorted vertex pairs.
    pub fn edge_set(&self, eps: usize) -> BTreeSet<(VertexId, VertexId)> {
        pairs_of(&self.sigma[eps])
    }
}

/// The closed-form edge list of `Σ_ε` for `y^3 = a^s`, `2 ≤ s ≤ (p-1)/2`,
/// with `p = rs + t`, `0 ≤ t < s`.
pub fn table_edges(pair: &SigmaPair, eps: usize) -> Result<BTreeSet<(VertexId, VertexId)>, ConstructionError> {
    let GammaSpec::Gamma4 { p, s } = pair.spec else {
        return Err(ConstructionError::Unsupported("the closed form covers the ay-graph only".into()));
    };
    let (p, s) = (p as i64, s as i64);
    if s < 2 || 2 * s > p - 1 {
        return Err(ConstructionError::Unsupported(format!("the closed form needs 2 ≤ s ≤ (p-1)/2, got s = {s}")));
    }
    let w = Words::new(pair.cayley.group())?;
    let (r, t) = (p / s, p % s);
    let v = |level: i64, m: i64| w.mul(w.y(level), w.a(m));
    let range = |lo: i64, hi: i64| lo..=hi;
    let mut out = BTreeSet::new();
    let mut add = |a: VertexId, b: VertexId| {
        out.insert((a.min(b), a.max(b)));
    };
    match (r % 2 == 0, eps) {
        (true, 0) => {
            for i in range(0, (r - 2) / 2) {
                add(v(0, (2 * i + 1) * s - 1), v(1, (2 * i + 1) * s));
                add(v(1, 2 * i * s - 1), v(2, 2 * i * s));
            }
            for i in range(0, (r - 4).div_euclid(2)) {
                add(v(2, (2 * i + 1) * s - 1), v(0, (2 * i + 2) * s));
            }
        }
        (true, _) => {
            for i in range(0, (r - 2) / 2) {
                add(v(0, 2 * i * s - 1), v(1, 2 * i * s));
                add(v(1, (2 * i + 1) * s - 1), v(2, (2 * i + 1) * s));
                add(v(2, 2 * i * s - 1), v(0, (2 * i + 1) * s));
            }
            for i in range(0, t - 2) {
                add(v(2, (r - 1) * s + i), v(0, r * s + i + 1));
            }
            for i in range(0, t - 1) {
                add(v(2, (r - 1) * s + i), v(0, r * s + i));
            }
        }
        (false, 0) => {
            for i in range(0, (r - 5).div_euclid(2)) {
                add(v(0, (2 * i + 1) * s - 1), v(1, (2 * i + 1) * s));
                add(v(2, (2 * i + 1) * s - 1), v(0, (2 * i + 2) * s));
            }
            add(v(0, (r - 1) * s - 1), v(1, (r - 1) * s));
            for i in range(0, (r - 3) / 2) {
                add(v(1, 2 * i * s - 1), v(2, 2 * i * s));
            }
            for i in range(0, s - 1) {
                add(v(2, (r - 3) * s + i), v(0, (r - 2) * s + i));
            }
            for i in range(0, s - 2) {
                add(v(2, (r - 3) * s + i), v(0, (r - 2) * s + i + 1));
            }
        }
        (false, _) => {
            for i in range(0, (r - 3) / 2) {
                add(v(0, 2 * i * s - 1), v(1, 2 * i * s));
            }
            for i in range(0, (r - 5).div_euclid(2)) {
                add(v(1, (2 * i + 1) * s - 1), v(2, (2 * i + 1) * s));
                add(v(2, 2 * i * s - 1), v(0, (2 * i + 1) * s));
            }
            add(v(1, (r - 1) * s - 1), v(2, (r - 1) * s));
            for i in range(0, t - 1) {
                add(v(2, (r - 1) * s + i), v(0, r * s + i));
            }
            for i in range(0, t - 2) {
                add(v(2, (r - 1) * s + i), v(0, r * s + i + 1));
            }
        }
    }
    Ok(out)
}

/// Lifts the pair to a certificate on the whole graph and turns it into a
/// verified flow. `U′` is assembled piece by piece; each piece leaves `U`
/// along a fixed connection element.
pub fn lift_sigma_certificate(pair: &SigmaPair) -> Result<Construction, ConstructionError> {
    const STAGE: &str = "lifted certificate";
    let cayley = pair.cayley.clone();
    let group = cayley.group().clone();
    let graph = cayley.graph().clone();
    let w = Words::new(&group)?;
    let p = match pair.spec {
        GammaSpec::Gamma3 { p, .. } | GammaSpec::Gamma4 { p, .. } => p,
        _ => unreachable!("Σ pairs live on A4 x Zp"),
    };
    let lv = Levels::new(&w, p);
    let mut report = Report::new(pair.spec.name(), &pair.spec.params());
    report.check(format!("H rule: {}", pair.rule), true);

    let h0 = &pair.h_set;
    let h1: Set = lv.h.difference(h0).copied().collect();
    let xy = |alpha: usize, l: i64| w.mul(w.x(alpha), w.y(l));
    let x0s = [xy(0, 0), xy(3, 0), xy(1, 1), xy(2, 1), xy(0, 2), xy(3, 2)];
    let x1s = [xy(1, 0), xy(2, 0), xy(0, 1), xy(3, 1), xy(1, 2), xy(2, 2)];
    let u: Set = x0s.iter().flat_map(|&g| w.left(g, h0)).chain(x1s.iter().flat_map(|&g| w.left(g, &h1))).collect();
    let wset: Set = graph.vertices().iter().copied().filter(|v| !u.contains(v)).collect();
    let x1 = w.x(1);
    report.check("W = x1·U", w.left(x1, &u) == wset);
    report.check("left translation by x1 maps Γ[U] onto Γ[W]", cayley.translation_isomorphic(&u, x1)?);
    report.check("Γ[U] is a pseudoforest", classify(&graph.induced(&u)?).is_pseudoforest());

    let [t0, t1] = &pair.transversals;
    let [sa, sb] = &pair.splits;
    let meet = |a: &Set, b: &Set| -> Set { a.intersection(b).copied().collect() };
    let minus = |a: &Set, b: &[&Set]| -> Set { a.iter().copied().filter(|v| !b.iter().any(|s| s.contains(v))).collect() };
    let no_yh = |eps: usize, set: &Set| -> Set {
        let classes = classify(&pair.sigma[eps]);
        let mut comp_of = BTreeMap::new();
        for (i, c) in classes.components.iter().enumerate() {
            for &v in &c.vertices {
                comp_of.insert(v, i);
            }
        }
        set.iter()
            .copied()
            .filter(|v| classes.components[comp_of[v]].vertices.iter().all(|x| !lv.yh.contains(x)))
            .collect()
    };
    let (a0, a0p, a2, a2p) = (&sa.y, &sa.ay, &sa.y_inv, &sa.ay_inv);
    let (b0, b0p, b2, b2p) = (&sb.y, &sb.ay, &sb.y_inv, &sb.ay_inv);
    let t0h = meet(t0, &lv.h);
    let t1h = meet(t1, &lv.h);
    let t0y2 = meet(t0, &lv.y2h);
    let t1y2 = meet(t1, &lv.y2h);
    let a0pp = minus(&t0h, &[a0, a0p]);
    let a2pp = minus(&t0y2, &[a2, a2p]);
    let a0ppp = no_yh(0, &t0h);
    let b0pp = minus(&t1h, &[b0, b0p]);
    let b2pp = minus(&t1y2, &[b2, b2p]);
    let b0ppp = no_yh(1, &t1h);

    let left = |g: usize, set: &Set| w.left(g, set);
    let (y, yi, ay, ayi) = (w.y(1), w.y(-1), w.ay(1), w.ay(-1));
    let (x2, x3) = (w.x(2), w.x(3));
    let xg = w.x(1);
    // (piece name, elements, right multiplier).
    let pieces: Vec<(&str, Set, usize)> = vec![
        ("A0''", a0pp.clone(), xg),
        ("A2''", a2pp.clone(), xg),
        ("x1 B0''", left(x1, &b0pp), xg),
        ("x1 (T1 ∩ y²H)", left(x1, &t1y2), xg),
        ("x2 B0'''", left(x2, &b0ppp), xg),
        ("x2 B2''", left(x2, &b2pp), xg),
        ("x3 A0'''", left(x3, &a0ppp), xg),
        ("x3 (T0 ∩ y²H)", left(x3, &t0y2), xg),
        ("A0", a0.clone(), y),
        ("y^-1 B2", left(yi, b2), y),
        ("x1 B0", left(x1, b0), y),
        ("x2 y^-1 A2", left(x2, &left(yi, a2)), y),
        ("A0'", a0p.clone(), ay),
        ("(ay)^-1 B2'", left(ayi, b2p), ay),
        ("x1 B0'", left(x1, b0p), ay),
        ("x2 (ay)^-1 A2'", left(x2, &left(ayi, a2p)), ay),
        ("y B0", left(y, b0), yi),
        ("A2", a2.clone(), yi),
        ("x1 y A0", left(x1, &left(y, a0)), yi),
        ("x2 B2", left(x2, b2), yi),
        ("ay B0'", left(ay, b0p), ayi),
        ("A2'", a2p.clone(), ayi),
        ("x1 ay A0'", left(x1, &left(ay, a0p)), ayi),
        ("x2 B2'", left(x2, b2p), ayi),
    ];
    let mut owner: BTreeMap<VertexId, &str> = BTreeMap::new();
    let mut matching = Vec::new();
    for (name, set, z) in &pieces {
        for &v in set {
            if let Some(prev) = owner.insert(v, name) {
                return Err(condition(STAGE, *name, format!("{} also lies in {prev}", group.label(v))));
            }
            if !u.contains(&v) {
                return Err(condition(STAGE, *name, format!("{} is not in U", group.label(v))));
            }
            let image = w.mul(v, *z);
            if !wset.contains(&image) || !graph.neighbors(v).any(|b| b == image) {
                return Err(condition(STAGE, *name, format!("ν({}) = {} is not a W-neighbour", group.label(v), group.label(image))));
            }
            matching.push((v, image));
        }
    }
    let u_prime: Set = owner.keys().copied().collect();
    let w_prime: Set = matching.iter().map(|&(_, b)| b).collect();
    if w_prime.len() != u_prime.len() {
        return Err(condition(STAGE, "ν injective", "two elements of U' share an image"));
    }

    // U′ as a single formula, and ν(U′) = x1((U′ ∖ C) ∪ C′).
    let t1_off_yh = minus(t1, &[&lv.yh]);
    let formula: Set = t0
        .iter()
        .copied()
        .chain(left(x1, &t1_off_yh.iter().copied().chain(left(y, a0)).chain(left(ay, a0p)).collect()))
        .chain(left(x2, &b0ppp.iter().copied().chain(left(yi, a2)).chain(left(ayi, a2p)).chain(t1y2.iter().copied()).collect()))
        .chain(left(x3, &a0ppp.iter().copied().chain(t0y2.iter().copied()).collect()))
        .collect();
    report.check("U' matches its closed formula", formula == u_prime);
    let c: Set = left(x2, &left(yi, a2))
        .into_iter()
        .chain(left(x2, &left(ayi, a2p)))
        .chain(left(yi, b2))
        .chain(left(ayi, b2p))
        .collect();
    let c_prime: Set = left(x1, &left(yi, a2))
        .into_iter()
        .chain(left(x1, &left(ayi, a2p)))
        .chain(left(x3, &left(yi, b2)))
        .chain(left(x3, &left(ayi, b2p)))
        .collect();
    // C ⊆ U′ covers the same components of Γ[U] as C′.
    let adjusted: Set = u_prime.difference(&c).copied().chain(c_prime.iter().copied()).collect();
    report.check("ν(U') = x1((U' ∖ C) ∪ C')", w_prime == left(x1, &adjusted));
    matching.sort_unstable();
    let certificate = PartitionCertificate { u, w: wset, u_prime, w_prime, matching };
    from_certificate(cayley, certificate, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::verify;
    use crate::pseudoforest::certificate_for_partition;

    #[test]
    fn gamma3_small() {
        let pair = gamma3_sigma(5, 1).unwrap();
        let w = Words::new(pair.cayley.group()).unwrap();
        let a_edges: BTreeSet<(usize, usize)> = pair.sigma[0]
            .edges()
            .iter()
            .filter(|e| e.label == "a")
            .map(|e| (e.u.min(e.v), e.u.max(e.v)))
            .collect();
        let expect: BTreeSet<(usize, usize)> = [(w.a(0), w.a(4)), (w.y(2), w.mul(w.y(2), w.a(4)))]
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        assert_eq!(a_edges, expect);
        let c = lift_sigma_certificate(&pair).unwrap();
        assert!(verify(c.graph(), &c.flow).unwrap().ok());
        assert!(c.report.all_pass(), "{:?}", c.report.failures().collect::<Vec<_>>());
    }

    #[test]
    fn every_s_for_small_primes() {
        for p in [5u32, 7] {
            for s in 1..p {
                let c = gamma3_certificate(p, s).unwrap_or_else(|e| panic!("Γ3 ({p},{s}): {e}"));
                assert!(c.report.all_pass(), "Γ3 ({p},{s}): {:?}", c.report.failures().collect::<Vec<_>>());
                let c = gamma4_certificate(p, s).unwrap_or_else(|e| panic!("Γ4 ({p},{s}): {e}"));
                assert!(c.report.all_pass(), "Γ4 ({p},{s}): {:?}", c.report.failures().collect::<Vec<_>>());
                assert!(verify(c.graph(), &c.flow).unwrap().ok());
            }
        }
    }

    #[test]
    fn moved_last_run() {
        // y^3 = a^-3 at p = 11: three runs, the printed layout fails.
        assert!(lifted(gamma4_sigma(11, 8)).is_none());
        let c = gamma4_certificate(11, 8).unwrap();
        assert!(c.report.notes.iter().any(|n| n.starts_with("last run")));
        // y^3 = a^-2 at p = 7 has no working ℋ at all.
        let c = gamma4_certificate(7, 5).unwrap();
        assert!(c.report.notes.iter().any(|n| n.contains("searched orientation")));
        assert!(c.report.all_pass());
    }

    #[test]
    fn s_one_paths() {
        // p ≡ 1 (mod 4): the Σ1 components through yH are 4-vertex paths.
        let pair = gamma4_sigma(5, 1).unwrap();
        let w = Words::new(pair.cayley.group()).unwrap();
        let path = [w.mul(w.y(1), w.a(1)), w.mul(w.y(2), w.a(2)), w.a(3), w.mul(w.y(1), w.a(4))];
        let comps = classify(&pair.sigma[1]);
        let c = comps.components.iter().find(|c| c.vertices.contains(&path[0])).unwrap();
        let mut want = path.to_vec();
        want.sort_unstable();
        assert_eq!(c.vertices, want);
        assert_eq!(c.edges.len(), 3);
    }

    #[test]
    fn direct_case_is_rejected() {
        assert!(matches!(gamma4_sigma(7, 6), Err(ConstructionError::Unsupported(_))));
    }

    #[test]
    fn closed_form_edges() {
        for (p, s) in [(11, 3), (13, 3), (13, 4), (17, 5), (17, 4), (13, 2), (11, 2)] {
            let pair = gamma4_sigma(p, s).unwrap();
            for eps in 0..2 {
                assert_eq!(pair.edge_set(eps), table_edges(&pair, eps).unwrap(), "({p},{s}) ε = {eps}");
            }
        }
    }

    #[test]
    fn generic_partition_agrees_at_p5() {
        let pair = gamma4_sigma(5, 2).unwrap();
        let c = lift_sigma_certificate(&pair).unwrap();
        let cert = c.certificate.unwrap();
        assert!(certificate_for_partition(c.cayley.graph(), &cert.u, &cert.w).unwrap().is_some());
    }
}
