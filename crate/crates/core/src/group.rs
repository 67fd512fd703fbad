//! Finite groups given by multiplication tables, plus the two structured
//! families `(Z2^2 x Zp) ⋊ Z3k` and `A4 x Zp` with their designated
//! generators `x`, `a` and `y`.
//!
//! Every group is materialised as a [`TableGroup`]; the families add a
//! canonical element form and named generators on top of it.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest order for which associativity is checked exhaustively.
pub const ASSOCIATIVITY_CHECK_LIMIT: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("invalid multiplication table: {0}")]
    Table(String),
    #[error("operands belong to different groups")]
    MixedGroups,
    #[error("element index {0} is outside the group")]
    NotInGroup(usize),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("malformed group description: {0}")]
    Format(String),
}

/// A group of order `n` on the element indices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableGroup {
    order: usize,
    mul: Vec<u32>,
    identity: usize,
    inv: Vec<u32>,
}

impl TableGroup {
    /// Builds a group from a row-major table, checking the group axioms.
    pub fn new(order: usize, mul: Vec<u32>) -> Result<Self, GroupError> {
        Self::build(order, mul, order <= ASSOCIATIVITY_CHECK_LIMIT)
    }

    /// Same as [`TableGroup::new`] but skips the cubic associativity scan.
    /// Used for tables produced from a known group law.
    pub(crate) fn new_trusted(order: usize, mul: Vec<u32>) -> Result<Self, GroupError> {
        Self::build(order, mul, false)
    }

    pub fn from_fn(order: usize, f: impl Fn(usize, usize) -> usize) -> Result<Self, GroupError> {
        let mut mul = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                mul.push(f(a, b) as u32);
            }
        }
        Self::new(order, mul)
    }

    fn build(order: usize, mul: Vec<u32>, check_assoc: bool) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::Table("order must be positive".into()));
        }
        if mul.len() != order * order {
            return Err(GroupError::Table(format!(
                "expected {} entries, found {}",
                order * order,
                mul.len()
            )));
        }
        if let Some(bad) = mul.iter().find(|&&v| v as usize >= order) {
            return Err(GroupError::Table(format!("entry {bad} out of range")));
        }
        let at = |a: usize, b: usize| mul[a * order + b] as usize;
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| at(e, g) == g && at(g, e) == g))
            .ok_or_else(|| GroupError::Table("no identity element".into()))?;
        let mut inv = vec![0u32; order];
        for g in 0..order {
            let h = (0..order)
                .find(|&h| at(g, h) == identity)
                .ok_or_else(|| GroupError::Table(format!("element {g} has no right inverse")))?;
            if at(h, g) != identity {
                return Err(GroupError::Table(format!("element {g} has no two-sided inverse")));
            }
            inv[g] = h as u32;
        }
        if check_assoc {
            for a in 0..order {
                for b in 0..order {
                    let ab = at(a, b);
                    for c in 0..order {
                        if at(ab, c) != at(a, at(b, c)) {
                            return Err(GroupError::Table(format!(
                                "associativity fails at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(Self { order, mul, identity, inv })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn table(&self) -> &[u32] {
        &self.mul
    }
}

/// Parameters of the group `(Z2^2 x Zp) ⋊ Z3k` in which `y` cycles the three
/// involutions of the Klein subgroup and acts on `<a>` by `a ↦ a^r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyIParams {
    pub p: u32,
    pub k: u32,
    pub r: u32,
}

/// Canonical form `x_alpha a^j y^i` of an element of a family I group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyIElement {
    pub alpha: u8,
    pub j: u32,
    pub i: u32,
}

/// Parameters of `A4 x Zp` with `y^3 = a^s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyIIParams {
    pub p: u32,
    pub s: u32,
}

/// An element `(q, c)` of `A4 x Zp`; `q` is an even permutation of `0..4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyIIElement {
    pub q: [u8; 4],
    pub c: u32,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut result = 1 % m;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    result
}

/// Inverse modulo a prime.
fn inv_mod_prime(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Cycles the index of a Klein involution: `1 → 2 → 3 → 1`, fixing `0`.
fn rotate_klein(alpha: u8, shift: i64) -> u8 {
    if alpha == 0 {
        0
    } else {
        ((alpha as i64 - 1 + shift).rem_euclid(3) + 1) as u8
    }
}

impl FamilyIParams {
    pub fn validate(&self) -> Result<(), GroupError> {
        let FamilyIParams { p, k, r } = *self;
        if !is_prime(p) || p <= 3 {
            return Err(GroupError::Parameter(format!("p = {p} must be a prime greater than 3")));
        }
        if k == 0 || k % 2 == 0 {
            return Err(GroupError::Parameter(format!("k = {k} must be an odd positive integer")));
        }
        if gcd(k as u64, p as u64) != 1 {
            return Err(GroupError::Parameter(format!("k = {k} must be coprime to p = {p}")));
        }
        if r == 0 || r >= p {
            return Err(GroupError::Parameter(format!("r = {r} must lie in [1, p-1]")));
        }
        if pow_mod(r as u64, 3 * k as u64, p as u64) != 1 {
            return Err(GroupError::Parameter(format!(
                "r^(3k) = {r}^{} must be 1 modulo p = {p}",
                3 * k
            )));
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        12 * self.p as usize * self.k as usize
    }

    fn y_order(&self) -> u32 {
        3 * self.k
    }

    pub fn index(&self, e: FamilyIElement) -> usize {
        let (p, n) = (self.p as usize, self.y_order() as usize);
        (e.alpha as usize * p + e.j as usize) * n + e.i as usize
    }

    pub fn element(&self, index: usize) -> FamilyIElement {
        let (p, n) = (self.p as usize, self.y_order() as usize);
        FamilyIElement {
            alpha: (index / (p * n)) as u8,
            j: ((index / n) % p) as u32,
            i: (index % n) as u32,
        }
    }

    /// `(x_α a^j y^i)(x_β a^l y^m) = x_{α ⊕ β'} a^{j + l r^{-i}} y^{i+m}` where
    /// `β'` is `β` cycled backwards `i` times.
    pub fn mul(&self, g: FamilyIElement, h: FamilyIElement) -> FamilyIElement {
        let p = self.p as u64;
        let rinv = inv_mod_prime(self.r as u64, p);
        let twisted_beta = rotate_klein(h.alpha, -(g.i as i64));
        let twisted_l = h.j as u64 * pow_mod(rinv, g.i as u64, p) % p;
        FamilyIElement {
            alpha: g.alpha ^ twisted_beta,
            j: ((g.j as u64 + twisted_l) % p) as u32,
            i: (g.i + h.i) % self.y_order(),
        }
    }
}

/// Even permutations of `0..4` in lexicographic order; the identity is first.
pub fn a4_elements() -> Vec<[u8; 4]> {
    let mut out = Vec::with_capacity(12);
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                for d in 0..4u8 {
                    let q = [a, b, c, d];
                    let distinct = (0..4).all(|i| (0..4).all(|j| i == j || q[i] != q[j]));
                    if distinct && permutation_is_even(&q) {
                        out.push(q);
                    }
                }
            }
        }
    }
    out
}

fn permutation_is_even(q: &[u8]) -> bool {
    let mut inversions = 0;
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            if q[i] > q[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

/// `(g h)(i) = g(h(i))`.
fn compose<const N: usize>(g: &[u8; N], h: &[u8; N]) -> [u8; N] {
    let mut out = [0u8; N];
    for i in 0..N {
        out[i] = g[h[i] as usize];
    }
    out
}

impl FamilyIIParams {
    pub fn validate(&self) -> Result<(), GroupError> {
        let FamilyIIParams { p, s } = *self;
        if !is_prime(p) || p <= 3 {
            return Err(GroupError::Parameter(format!("p = {p} must be a prime greater than 3")));
        }
        if s == 0 || s >= p {
            return Err(GroupError::Parameter(format!(
                "s = {s} must lie in [1, p-1] (s ≡ 0 mod p is not allowed)"
            )));
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        12 * self.p as usize
    }

    /// The `Zp` component of `y`: `3 c1 ≡ s (mod p)`.
    pub fn y_shift(&self) -> u32 {
        let p = self.p as u64;
        (self.s as u64 * inv_mod_prime(3, p) % p) as u32
    }

    pub fn mul(&self, g: FamilyIIElement, h: FamilyIIElement) -> FamilyIIElement {
        FamilyIIElement { q: compose(&g.q, &h.q), c: (g.c + h.c) % self.p }
    }
}

/// Which construction produced a [`FiniteGroup`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupFamily {
    Table,
    FamilyI(FamilyIParams),
    FamilyII(FamilyIIParams),
}

/// A finite group with element labels and named generators.
///
/// Cloning is cheap; the table is shared.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    id: u64,
    table: Arc<TableGroup>,
    family: GroupFamily,
    labels: Arc<Vec<String>>,
    generators: BTreeMap<String, usize>,
}

/// An element tagged with the group it came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    group: u64,
    index: usize,
}

impl GroupElement {
    pub fn index(&self) -> usize {
        self.index
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table && self.family == other.family
    }
}

impl FiniteGroup {
    fn assemble(
        table: TableGroup,
        family: GroupFamily,
        labels: Vec<String>,
        generators: BTreeMap<String, usize>,
    ) -> Self {
        let mut hasher = DefaultHasher::new();
        table.order.hash(&mut hasher);
        table.mul.hash(&mut hasher);
        format!("{family:?}").hash(&mut hasher);
        Self {
            id: hasher.finish(),
            table: Arc::new(table),
            family,
            labels: Arc::new(labels),
            generators,
        }
    }

    pub fn from_table(table: TableGroup) -> Self {
        let labels = (0..table.order()).map(|g| format!("g{g}")).collect();
        Self::assemble(table, GroupFamily::Table, labels, BTreeMap::new())
    }

    /// Attaches generator names (and optionally labels) to a table group.
    pub fn with_generators(mut self, names: &[(&str, usize)]) -> Self {
        for (name, g) in names {
            self.generators.insert((*name).to_string(), *g);
        }
        self
    }

    /// `(Z2^2 x Zp) ⋊ Z3k` with `y^{-1} x_i y = x_{i+1}` and `y^{-1} a y = a^r`.
    pub fn family_i(p: u32, k: u32, r: u32) -> Result<Self, GroupError> {
        let params = FamilyIParams { p, k, r };
        params.validate()?;
        let n = params.order();
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            let ga = params.element(a);
            for b in 0..n {
                mul.push(params.index(params.mul(ga, params.element(b))) as u32);
            }
        }
        let table = TableGroup::new_trusted(n, mul)?;
        let labels = (0..n)
            .map(|g| {
                let e = params.element(g);
                word_label(&[("x", e.alpha as u32, 4, true), ("a", e.j, p, false), ("y", e.i, 3 * k, false)])
            })
            .collect();
        let idx = |alpha: u8, j: u32, i: u32| params.index(FamilyIElement { alpha, j, i });
        let mut generators = BTreeMap::new();
        generators.insert("x".into(), idx(1, 0, 0));
        generators.insert("x1".into(), idx(1, 0, 0));
        generators.insert("x2".into(), idx(2, 0, 0));
        generators.insert("x3".into(), idx(3, 0, 0));
        generators.insert("a".into(), idx(0, 1, 0));
        generators.insert("y".into(), idx(0, 0, 1));
        let group = Self::assemble(table, GroupFamily::FamilyI(params), labels, generators);
        let ay = group.mul_idx(group.generator("a")?, group.generator("y")?);
        Ok(group.with_generators(&[("ay", ay)]))
    }

    /// `A4 x Zp` with `a = (1, 1)`, `x = x1 = ((0 1)(2 3), 0)` and
    /// `y = (b, c1)` where `b` is a 3-cycle and `3 c1 ≡ s (mod p)`.
    pub fn family_ii(p: u32, s: u32) -> Result<Self, GroupError> {
        let params = FamilyIIParams { p, s };
        params.validate()?;
        let a4 = a4_elements();
        let q_index = |q: &[u8; 4]| a4.iter().position(|e| e == q).expect("even permutation");
        let pu = p as usize;
        let n = params.order();
        let index = |e: &FamilyIIElement| q_index(&e.q) * pu + e.c as usize;
        let element = |g: usize| FamilyIIElement { q: a4[g / pu], c: (g % pu) as u32 };
        let mut mul = Vec::with_capacity(n * n);
        for g in 0..n {
            let eg = element(g);
            for h in 0..n {
                mul.push(index(&params.mul(eg, element(h))) as u32);
            }
        }
        let table = TableGroup::new_trusted(n, mul)?;
        let a = index(&FamilyIIElement { q: [0, 1, 2, 3], c: 1 });
        let x1 = index(&FamilyIIElement { q: [1, 0, 3, 2], c: 0 });
        let y = index(&FamilyIIElement { q: [0, 2, 3, 1], c: params.y_shift() });
        let mut group = Self::assemble(
            table,
            GroupFamily::FamilyII(params),
            (0..n).map(|g| format!("g{g}")).collect(),
            BTreeMap::new(),
        );
        let x2 = group.conjugate_idx(x1, y);
        let x3 = group.conjugate_idx(x2, y);
        let ay = group.mul_idx(a, y);
        group = group.with_generators(&[
            ("x", x1),
            ("x1", x1),
            ("x2", x2),
            ("x3", x3),
            ("a", a),
            ("y", y),
            ("ay", ay),
        ]);
        // Labels in the normal form x_α y^i a^j with i in [0, 2].
        let xs = [group.identity(), x1, x2, x3];
        let mut labels = vec![String::new(); n];
        for (alpha, &xa) in xs.iter().enumerate() {
            for i in 0..3u32 {
                for j in 0..p {
                    let g = group.mul_idx(group.mul_idx(xa, group.power_idx(y, i as i64)), group.power_idx(a, j as i64));
                    labels[g] = word_label(&[("x", alpha as u32, 4, true), ("y", i, 3, false), ("a", j, p, false)]);
                }
            }
        }
        if labels.iter().any(String::is_empty) {
            return Err(GroupError::Table("normal form x_α y^i a^j is not a bijection".into()));
        }
        group.labels = Arc::new(labels);
        Ok(group)
    }

    /// The cyclic group `Z_n` written additively on `0..n`.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::Parameter("cyclic group order must be positive".into()));
        }
        let table = TableGroup::new_trusted(n, (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect())?;
        let labels = (0..n).map(|g| g.to_string()).collect();
        Ok(Self::assemble(table, GroupFamily::Table, labels, BTreeMap::new()))
    }

    /// `Z_m x Z_n`, element `(i, j)` stored at `i * n + j`.
    pub fn cyclic_product(m: usize, n: usize) -> Result<Self, GroupError> {
        if m == 0 || n == 0 {
            return Err(GroupError::Parameter("factor orders must be positive".into()));
        }
        let order = m * n;
        let table = TableGroup::new_trusted(
            order,
            (0..order * order)
                .map(|idx| {
                    let (g, h) = (idx / order, idx % order);
                    (((g / n + h / n) % m) * n + (g % n + h % n) % n) as u32
                })
                .collect(),
        )?;
        let labels = (0..order).map(|g| format!("({},{})", g / n, g % n)).collect();
        Ok(Self::assemble(table, GroupFamily::Table, labels, BTreeMap::new()))
    }

    /// The symmetric group on `n ≤ 5` points, permutations in lexicographic
    /// order (identity first), labelled in one-line notation.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n == 0 || n > 5 {
            return Err(GroupError::Parameter("symmetric groups are supported for 1 ≤ n ≤ 5".into()));
        }
        Self::permutation_group(permutations(n))
    }

    /// The alternating group `A4` with generators `a = (0 1)(2 3)` and
    /// `b = (1 2 3)`.
    pub fn alternating4() -> Result<Self, GroupError> {
        let perms: Vec<Vec<u8>> = a4_elements().iter().map(|q| q.to_vec()).collect();
        let group = Self::permutation_group(perms.clone())?;
        let find = |q: [u8; 4]| perms.iter().position(|e| e[..] == q[..]).expect("element of A4");
        Ok(group.with_generators(&[("a", find([1, 0, 3, 2])), ("b", find([0, 2, 3, 1]))]))
    }

    /// The dihedral group of order `2n` with rotation `r` and reflection `s`;
    /// `r^i s^j` is stored at `2 i + j`.
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        if n < 2 {
            return Err(GroupError::Parameter("dihedral groups need n ≥ 2".into()));
        }
        let order = 2 * n;
        let f = |g: usize, h: usize| {
            let (i, j) = (g / 2, g % 2);
            let (k, l) = (h / 2, h % 2);
            // r^i s^j r^k s^l = r^{i ± k} s^{j + l}
            let rot = if j == 0 { (i + k) % n } else { (i + n - k % n) % n };
            2 * rot + (j + l) % 2
        };
        let table = TableGroup::new_trusted(
            order,
            (0..order * order).map(|idx| f(idx / order, idx % order) as u32).collect(),
        )?;
        let labels = (0..order)
            .map(|g| word_label(&[("r", (g / 2) as u32, n as u32, false), ("s", (g % 2) as u32, 2, false)]))
            .collect();
        let group = Self::assemble(table, GroupFamily::Table, labels, BTreeMap::new());
        Ok(group.with_generators(&[("r", 2), ("s", 1)]))
    }

    fn permutation_group(perms: Vec<Vec<u8>>) -> Result<Self, GroupError> {
        let n = perms.len();
        let position = |q: &[u8]| perms.iter().position(|e| e[..] == q[..]);
        let mut mul = Vec::with_capacity(n * n);
        for g in &perms {
            for h in &perms {
                let prod: Vec<u8> = h.iter().map(|&i| g[i as usize]).collect();
                let idx = position(&prod)
                    .ok_or_else(|| GroupError::Table("permutation set is not closed".into()))?;
                mul.push(idx as u32);
            }
        }
        let table = TableGroup::new(n, mul)?;
        let labels = perms
            .iter()
            .map(|q| q.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(""))
            .collect();
        Ok(Self::assemble(table, GroupFamily::Table, labels, BTreeMap::new()))
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    pub fn family(&self) -> &GroupFamily {
        &self.family
    }

    pub fn table(&self) -> &TableGroup {
        &self.table
    }

    pub fn identity(&self) -> usize {
        self.table.identity()
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generators(&self) -> &BTreeMap<String, usize> {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Result<usize, GroupError> {
        self.generators
            .get(name)
            .copied()
            .ok_or_else(|| GroupError::UnknownGenerator(name.to_string()))
    }

    pub fn element(&self, index: usize) -> Result<GroupElement, GroupError> {
        if index < self.order() {
            Ok(GroupElement { group: self.id, index })
        } else {
            Err(GroupError::NotInGroup(index))
        }
    }

    fn check(&self, g: GroupElement) -> Result<usize, GroupError> {
        if g.group != self.id {
            return Err(GroupError::MixedGroups);
        }
        Ok(g.index)
    }

    fn wrap(&self, index: usize) -> GroupElement {
        GroupElement { group: self.id, index }
    }

    pub fn mul(&self, g: GroupElement, h: GroupElement) -> Result<GroupElement, GroupError> {
        Ok(self.wrap(self.mul_idx(self.check(g)?, self.check(h)?)))
    }

    pub fn inv(&self, g: GroupElement) -> Result<GroupElement, GroupError> {
        Ok(self.wrap(self.inv_idx(self.check(g)?)))
    }

    pub fn order_of(&self, g: GroupElement) -> Result<usize, GroupError> {
        Ok(self.order_idx(self.check(g)?))
    }

    /// `h^{-1} g h`.
    pub fn conjugate(&self, g: GroupElement, h: GroupElement) -> Result<GroupElement, GroupError> {
        Ok(self.wrap(self.conjugate_idx(self.check(g)?, self.check(h)?)))
    }

    pub fn power(&self, g: GroupElement, n: i64) -> Result<GroupElement, GroupError> {
        Ok(self.wrap(self.power_idx(self.check(g)?, n)))
    }

    #[inline]
    pub fn mul_idx(&self, g: usize, h: usize) -> usize {
        self.table.mul(g, h)
    }

    #[inline]
    pub fn inv_idx(&self, g: usize) -> usize {
        self.table.inv(g)
    }

    pub fn conjugate_idx(&self, g: usize, h: usize) -> usize {
        self.mul_idx(self.mul_idx(self.inv_idx(h), g), h)
    }

    pub fn power_idx(&self, g: usize, n: i64) -> usize {
        let base = if n < 0 { self.inv_idx(g) } else { g };
        let mut result = self.identity();
        let mut sq = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_idx(result, sq);
            }
            sq = self.mul_idx(sq, sq);
            e >>= 1;
        }
        result
    }

    pub fn order_idx(&self, g: usize) -> usize {
        let mut n = 1;
        let mut cur = g;
        while cur != self.identity() {
            cur = self.mul_idx(cur, g);
            n += 1;
        }
        n
    }

    /// Closure of `generators` under multiplication; always contains the identity.
    pub fn subgroup(&self, generators: &[usize]) -> Result<BTreeSet<usize>, GroupError> {
        for &g in generators {
            if g >= self.order() {
                return Err(GroupError::NotInGroup(g));
            }
        }
        let mut seen = BTreeSet::from([self.identity()]);
        let mut queue = VecDeque::from([self.identity()]);
        while let Some(h) = queue.pop_front() {
            for &g in generators {
                let next = self.mul_idx(h, g);
                if seen.insert(next) {
                    queue.push_back(next);
                }
            }
        }
        Ok(seen)
    }

    /// Left cosets `gH`, each sorted, ordered by their smallest element.
    pub fn left_cosets(&self, subgroup: &BTreeSet<usize>) -> Vec<Vec<usize>> {
        let mut assigned = vec![false; self.order()];
        let mut cosets = Vec::new();
        for g in 0..self.order() {
            if assigned[g] {
                continue;
            }
            let mut coset: Vec<usize> = subgroup.iter().map(|&h| self.mul_idx(g, h)).collect();
            coset.sort_unstable();
            for &c in &coset {
                assigned[c] = true;
            }
            cosets.push(coset);
        }
        cosets
    }

    pub fn is_normal(&self, subgroup: &BTreeSet<usize>) -> bool {
        (0..self.order()).all(|g| subgroup.iter().all(|&n| subgroup.contains(&self.conjugate_idx(n, g))))
    }

    /// The quotient `G/N` together with the map sending each element to its coset.
    pub fn quotient(&self, normal: &BTreeSet<usize>) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
        if !normal.contains(&self.identity()) || !normal.iter().all(|&a| normal.iter().all(|&b| normal.contains(&self.mul_idx(a, b)))) {
            return Err(GroupError::Parameter("N is not a subgroup".into()));
        }
        if !self.is_normal(normal) {
            return Err(GroupError::NotNormal);
        }
        let cosets = self.left_cosets(normal);
        let mut coset_of = vec![0usize; self.order()];
        for (ci, coset) in cosets.iter().enumerate() {
            for &g in coset {
                coset_of[g] = ci;
            }
        }
        let m = cosets.len();
        let mut mul = Vec::with_capacity(m * m);
        for a in &cosets {
            for b in &cosets {
                mul.push(coset_of[self.mul_idx(a[0], b[0])] as u32);
            }
        }
        let table = TableGroup::new_trusted(m, mul)?;
        let labels = cosets.iter().map(|c| format!("N{}", self.label(c[0]))).collect();
        let generators = self
            .generators
            .iter()
            .map(|(name, &g)| (name.clone(), coset_of[g]))
            .collect();
        Ok((Self::assemble(table, GroupFamily::Table, labels, generators), coset_of))
    }

    /// Applies `g ↦ g·t` to every element of a set.
    pub fn right_translate(&self, set: &BTreeSet<usize>, t: usize) -> BTreeSet<usize> {
        set.iter().map(|&g| self.mul_idx(g, t)).collect()
    }

    /// Applies `g ↦ t·g` to every element of a set.
    pub fn left_translate(&self, t: usize, set: &BTreeSet<usize>) -> BTreeSet<usize> {
        set.iter().map(|&g| self.mul_idx(t, g)).collect()
    }

    pub fn to_json(&self) -> GroupJson {
        match &self.family {
            GroupFamily::FamilyI(p) => GroupJson {
                family: "family_i".into(),
                params: BTreeMap::from([("p".into(), p.p as u64), ("k".into(), p.k as u64), ("r".into(), p.r as u64)]),
                order: self.order(),
                table: None,
                generators: None,
            },
            GroupFamily::FamilyII(p) => GroupJson {
                family: "family_ii".into(),
                params: BTreeMap::from([("p".into(), p.p as u64), ("s".into(), p.s as u64)]),
                order: self.order(),
                table: None,
                generators: None,
            },
            GroupFamily::Table => GroupJson {
                family: "table".into(),
                params: BTreeMap::new(),
                order: self.order(),
                table: Some(self.table.table().to_vec()),
                generators: if self.generators.is_empty() { None } else { Some(self.generators.clone()) },
            },
        }
    }

    pub fn from_json(json: &GroupJson) -> Result<Self, GroupError> {
        let param = |name: &str| {
            json.params
                .get(name)
                .map(|&v| v as u32)
                .ok_or_else(|| GroupError::Format(format!("missing parameter `{name}`")))
        };
        let group = match json.family.as_str() {
            "family_i" => Self::family_i(param("p")?, param("k")?, param("r")?)?,
            "family_ii" => Self::family_ii(param("p")?, param("s")?)?,
            "table" => {
                let table = json
                    .table
                    .clone()
                    .ok_or_else(|| GroupError::Format("table group without `table`".into()))?;
                let mut g = Self::from_table(TableGroup::new(json.order, table)?);
                if let Some(gens) = &json.generators {
                    for (name, &idx) in gens {
                        if idx >= g.order() {
                            return Err(GroupError::NotInGroup(idx));
                        }
                        g.generators.insert(name.clone(), idx);
                    }
                }
                g
            }
            other => return Err(GroupError::Format(format!("unknown family `{other}`"))),
        };
        if group.order() != json.order {
            return Err(GroupError::Format(format!(
                "declared order {} does not match constructed order {}",
                json.order,
                group.order()
            )));
        }
        Ok(group)
    }
}

impl FiniteGroup {
    /// Evaluates a word such as `x a^-1`, `ay^-1` or `(x y)^2`.
    ///
    /// Tokens are the designated generator names (longest match first, so
    /// `ay` is a single token), `g<index>` for a raw element and `1` for the
    /// identity. Whitespace separates tokens, so `a y` is `a·y`.
    pub fn parse_word(&self, word: &str) -> Result<usize, GroupError> {
        let chars: Vec<char> = word.trim().chars().collect();
        if chars.is_empty() {
            return Err(GroupError::Format("empty word".into()));
        }
        let mut parser = WordParser { group: self, chars: &chars, pos: 0 };
        let value = parser.word()?;
        if parser.pos != chars.len() {
            return Err(GroupError::Format(format!(
                "unexpected `{}` at offset {} in `{word}`",
                chars[parser.pos], parser.pos
            )));
        }
        Ok(value)
    }
}

struct WordParser<'a> {
    group: &'a FiniteGroup,
    chars: &'a [char],
    pos: usize,
}

impl WordParser<'_> {
    fn word(&mut self) -> Result<usize, GroupError> {
        let mut acc = self.group.identity();
        loop {
            while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
                self.pos += 1;
            }
            if self.pos >= self.chars.len() || self.chars[self.pos] == ')' {
                break;
            }
            let f = self.factor()?;
            acc = self.group.mul_idx(acc, f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<usize, GroupError> {
        let base = self.atom()?;
        if self.chars.get(self.pos) == Some(&'^') {
            self.pos += 1;
            let start = self.pos;
            if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
                self.pos += 1;
            }
            while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            let text: String = self.chars[start..self.pos].iter().collect();
            let exp: i64 = text
                .parse()
                .map_err(|_| GroupError::Format(format!("bad exponent `{text}`")))?;
            return Ok(self.group.power_idx(base, exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<usize, GroupError> {
        match self.chars.get(self.pos) {
            Some('(') => {
                self.pos += 1;
                let inner = self.word()?;
                if self.chars.get(self.pos) != Some(&')') {
                    return Err(GroupError::Format("unbalanced parenthesis".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('1') => {
                self.pos += 1;
                Ok(self.group.identity())
            }
            Some('g') if self.chars.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit()) => {
                self.pos += 1;
                let start = self.pos;
                while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                let text: String = self.chars[start..self.pos].iter().collect();
                let idx: usize = text.parse().map_err(|_| GroupError::Format(format!("bad index `{text}`")))?;
                if idx >= self.group.order() {
                    return Err(GroupError::NotInGroup(idx));
                }
                Ok(idx)
            }
            Some(_) => {
                let rest: String = self.chars[self.pos..].iter().collect();
                let best = self
                    .group
                    .generators()
                    .iter()
                    .filter(|(name, _)| rest.starts_with(name.as_str()))
                    .max_by_key(|(name, _)| name.len());
                match best {
                    Some((name, &g)) => {
                        self.pos += name.chars().count();
                        Ok(g)
                    }
                    None => Err(GroupError::UnknownGenerator(rest.chars().take(8).collect())),
                }
            }
            None => Err(GroupError::Format("word ended unexpectedly".into())),
        }
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            GroupFamily::FamilyI(p) => write!(f, "(Z2^2 x Z{}) x| Z{} [r={}]", p.p, 3 * p.k, p.r),
            GroupFamily::FamilyII(p) => write!(f, "A4 x Z{} [s={}]", p.p, p.s),
            GroupFamily::Table => write!(f, "table group of order {}", self.order()),
        }
    }
}

/// Serialized group: `{family, params, order}` plus the row-major table for
/// table groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub family: String,
    pub params: BTreeMap<String, u64>,
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<BTreeMap<String, usize>>,
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    fn rec(prefix: &mut Vec<u8>, used: &mut Vec<bool>, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v as u8);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Renders `x_α a^j y^i`-style words; `indexed` symbols print as `x1`, `x2`.
fn word_label(parts: &[(&str, u32, u32, bool)]) -> String {
    let mut out = Vec::new();
    for &(sym, exp, modulus, indexed) in parts {
        let exp = exp % modulus.max(1);
        if exp == 0 {
            continue;
        }
        if indexed {
            out.push(format!("{sym}{exp}"));
        } else if exp == 1 {
            out.push(sym.to_string());
        } else {
            out.push(format!("{sym}^{exp}"));
        }
    }
    if out.is_empty() {
        "1".into()
    } else {
        out.join("")
    }
}
