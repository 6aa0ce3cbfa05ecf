//! Coxeter matrices and systems, spherical subsets and the generator
//! projections `g_VT`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CoxeterError, Result};
use crate::words::GroupElement;

/// Maximum number of generators; subsets are stored as 64-bit masks.
pub const MAX_GENERATORS: usize = 64;

/// Default cap on the number of spherical subsets.
pub const DEFAULT_SPHERICAL_CAP: usize = 1 << 20;

/// Default cap on the size of a braid class during normal-form computation.
pub const DEFAULT_CLASS_CAP: usize = 1_000_000;

/// A set of generator indices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GenSet(pub u64);

impl GenSet {
    pub const EMPTY: GenSet = GenSet(0);

    pub fn singleton(g: usize) -> Self {
        GenSet(1 << g)
    }

    /// All generators `0..n`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            GenSet(u64::MAX)
        } else {
            GenSet((1u64 << n) - 1)
        }
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut s = GenSet::EMPTY;
        for g in it {
            s.insert(g);
        }
        s
    }

    pub fn contains(self, g: usize) -> bool {
        g < 64 && self.0 & (1 << g) != 0
    }

    pub fn insert(&mut self, g: usize) {
        self.0 |= 1 << g;
    }

    pub fn with(self, g: usize) -> Self {
        GenSet(self.0 | (1 << g))
    }

    pub fn without(self, g: usize) -> Self {
        GenSet(self.0 & !(1 << g))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: GenSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: GenSet) -> Self {
        GenSet(self.0 | other.0)
    }

    pub fn intersection(self, other: GenSet) -> Self {
        GenSet(self.0 & other.0)
    }

    pub fn minus(self, other: GenSet) -> Self {
        GenSet(self.0 & !other.0)
    }

    pub fn max(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(63 - self.0.leading_zeros() as usize)
        }
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let g = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(g)
            }
        })
    }

    /// Every subset of `self`, including `∅` and `self`.
    pub fn subsets(self) -> impl Iterator<Item = GenSet> {
        // standard submask walk, emitted in increasing numeric order
        let full = self.0;
        let mut sub: Option<u64> = Some(0);
        std::iter::from_fn(move || {
            let cur = sub?;
            sub = if cur == full {
                None
            } else {
                Some(((cur | !full).wrapping_add(1)) & full)
            };
            Some(GenSet(cur))
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, g) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "}}")
    }
}

/// An entry `m_st` of a Coxeter matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Finite(u32),
    Infinite,
}

impl Label {
    pub fn finite(self) -> Option<u32> {
        match self {
            Label::Finite(m) => Some(m),
            Label::Infinite => None,
        }
    }

    /// File encoding: `0` stands for `∞`.
    pub fn encode(self) -> u64 {
        match self {
            Label::Finite(m) => m as u64,
            Label::Infinite => 0,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Finite(m) => write!(f, "{m}"),
            Label::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixFile {
    generators: Vec<String>,
    matrix: Vec<Vec<i64>>,
}

/// A validated Coxeter matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterMatrix {
    names: Vec<String>,
    labels: Vec<Label>,
}

impl CoxeterMatrix {
    /// Builds a matrix from rows in the file encoding (`0` for `∞`).
    pub fn from_rows(names: Vec<String>, rows: &[Vec<i64>]) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(CoxeterError::Parse("no generators".into()));
        }
        if n > MAX_GENERATORS {
            return Err(CoxeterError::Parse(format!(
                "{n} generators, at most {MAX_GENERATORS} supported"
            )));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(CoxeterError::Parse(format!("duplicate generator name {name:?}")));
            }
        }
        if rows.len() != n {
            return Err(CoxeterError::Parse(format!(
                "expected {n} matrix rows, found {}",
                rows.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(CoxeterError::Parse(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
        }
        let invalid = |row, col, reason: &str| CoxeterError::InvalidMatrix {
            row,
            col,
            reason: reason.to_string(),
        };
        let mut labels = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let v = rows[i][j];
                if v != rows[j][i] {
                    return Err(invalid(i, j, "matrix is not symmetric"));
                }
                let label = if i == j {
                    if v != 1 {
                        return Err(invalid(i, j, "diagonal entry must be 1"));
                    }
                    Label::Finite(1)
                } else {
                    match v {
                        0 => Label::Infinite,
                        v if v >= 2 && v <= u32::MAX as i64 => Label::Finite(v as u32),
                        _ => {
                            return Err(invalid(
                                i,
                                j,
                                "off-diagonal entry must be 0 (infinity) or at least 2",
                            ))
                        }
                    }
                };
                labels.push(label);
            }
        }
        Ok(CoxeterMatrix { names, labels })
    }

    /// Parses the JSON input format `{"generators": [...], "matrix": [[...]]}`.
    pub fn parse(text: &str) -> Result<Self> {
        let file: MatrixFile =
            serde_json::from_str(text).map_err(|e| CoxeterError::Parse(e.to_string()))?;
        Self::from_rows(file.generators, &file.matrix)
    }

    /// Convenience constructor with generated names `s0, s1, ...`.
    pub fn from_labels(rows: &[Vec<i64>]) -> Result<Self> {
        let names = (0..rows.len()).map(|i| format!("s{i}")).collect();
        Self::from_rows(names, rows)
    }

    pub fn to_json(&self) -> String {
        let n = self.rank();
        let file = MatrixFile {
            generators: self.names.clone(),
            matrix: (0..n)
                .map(|i| (0..n).map(|j| self.label(i, j).encode() as i64).collect())
                .collect(),
        };
        serde_json::to_string(&file).expect("matrix serializes")
    }

    /// Hex SHA-256 of the canonical JSON encoding.
    pub fn digest(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.to_json().as_bytes());
        hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn generator(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| CoxeterError::UnknownGenerator(name.to_string()))
    }

    pub fn all(&self) -> GenSet {
        GenSet::full(self.rank())
    }

    pub fn label(&self, i: usize, j: usize) -> Label {
        self.labels[i * self.rank() + j]
    }

    pub fn commute(&self, i: usize, j: usize) -> bool {
        i != j && self.label(i, j) == Label::Finite(2)
    }

    /// Every finite off-diagonal entry is even.
    pub fn is_even(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| {
            (i + 1..n).all(|j| match self.label(i, j) {
                Label::Finite(m) => m % 2 == 0,
                Label::Infinite => true,
            })
        })
    }

    /// Every off-diagonal entry is 2 or ∞.
    pub fn is_right_angled(&self) -> bool {
        let n = self.rank();
        (0..n).all(|i| {
            (i + 1..n).all(|j| matches!(self.label(i, j), Label::Finite(2) | Label::Infinite))
        })
    }

    /// The submatrix on `subset`, together with the index map new → old.
    pub fn restrict(&self, subset: GenSet) -> (CoxeterMatrix, Vec<usize>) {
        let map: Vec<usize> = subset.iter().collect();
        let names = map.iter().map(|&g| self.names[g].clone()).collect();
        let mut labels = Vec::with_capacity(map.len() * map.len());
        for &i in &map {
            for &j in &map {
                labels.push(self.label(i, j));
            }
        }
        (CoxeterMatrix { names, labels }, map)
    }

    /// Formats a subset with generator names.
    pub fn format_set(&self, set: GenSet) -> String {
        let names: Vec<&str> = set.iter().map(|g| self.name(g)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Finite-type classification of the diagram restricted to `subset`;
    /// `None` when `W_subset` is infinite.
    pub fn classify(&self, subset: GenSet) -> Option<Vec<FiniteType>> {
        diagram_components(self, subset)
            .into_iter()
            .map(|comp| classify_component(self, &comp))
            .collect()
    }

    /// Whether `W_subset` is finite.
    pub fn is_spherical(&self, subset: GenSet) -> bool {
        self.classify(subset).is_some()
    }

    /// The order of `W_subset` when finite.
    pub fn spherical_order(&self, subset: GenSet) -> Option<BigUint> {
        let types = self.classify(subset)?;
        Some(
            types
                .iter()
                .map(FiniteType::order)
                .fold(BigUint::one(), |acc, o| acc * o),
        )
    }

    /// Recognition valid for even matrices only: `subset` is spherical iff
    /// its non-commuting diagram is a disjoint union of isolated vertices
    /// and single finite edges.
    pub fn is_spherical_even_shortcut(&self, subset: GenSet) -> bool {
        let gens = subset.to_vec();
        for &a in &gens {
            let mut partners = 0;
            for &b in &gens {
                if a == b {
                    continue;
                }
                match self.label(a, b) {
                    Label::Infinite => return false,
                    Label::Finite(2) => {}
                    Label::Finite(_) => partners += 1,
                }
            }
            if partners > 1 {
                return false;
            }
        }
        true
    }

    /// All spherical subsets, ordered by size and then by mask.
    pub fn spherical_poset(&self) -> Result<SphericalPoset> {
        self.spherical_poset_capped(DEFAULT_SPHERICAL_CAP)
    }

    pub fn spherical_poset_capped(&self, cap: usize) -> Result<SphericalPoset> {
        let n = self.rank();
        let mut subsets = vec![SphericalSubset {
            members: GenSet::EMPTY,
            group_order: BigUint::one(),
        }];
        let mut frontier = vec![GenSet::EMPTY];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for t in frontier {
                let start = t.max().map_or(0, |m| m + 1);
                for g in start..n {
                    let cand = t.with(g);
                    if let Some(order) = self.spherical_order(cand) {
                        subsets.push(SphericalSubset {
                            members: cand,
                            group_order: order,
                        });
                        if subsets.len() > cap {
                            return Err(CoxeterError::ExplosionGuard {
                                what: "spherical subsets".into(),
                                cap,
                            });
                        }
                        next.push(cand);
                    }
                }
            }
            frontier = next;
        }
        subsets.sort_by_key(|s| (s.members.len(), s.members));
        let index = subsets
            .iter()
            .enumerate()
            .map(|(i, s)| (s.members, i))
            .collect();
        Ok(SphericalPoset { subsets, index })
    }
}

/// A finite irreducible Coxeter type.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiniteType {
    A(usize),
    B(usize),
    D(usize),
    E6,
    E7,
    E8,
    F4,
    H3,
    H4,
    I2(u32),
}

impl FiniteType {
    pub fn order(&self) -> BigUint {
        fn factorial(n: usize) -> BigUint {
            (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
        }
        match *self {
            FiniteType::A(n) => factorial(n + 1),
            FiniteType::B(n) => (BigUint::one() << n) * factorial(n),
            FiniteType::D(n) => (BigUint::one() << (n - 1)) * factorial(n),
            FiniteType::E6 => BigUint::from(51_840u64),
            FiniteType::E7 => BigUint::from(2_903_040u64),
            FiniteType::E8 => BigUint::from(696_729_600u64),
            FiniteType::F4 => BigUint::from(1_152u64),
            FiniteType::H3 => BigUint::from(120u64),
            FiniteType::H4 => BigUint::from(14_400u64),
            FiniteType::I2(m) => BigUint::from(2 * m as u64),
        }
    }
}

/// Connected components of the Coxeter diagram (edges where `m ≠ 2`) on `subset`.
fn diagram_components(m: &CoxeterMatrix, subset: GenSet) -> Vec<Vec<usize>> {
    let mut remaining = subset;
    let mut comps = Vec::new();
    while let Some(start) = remaining.iter().next() {
        let mut comp = vec![start];
        remaining = remaining.without(start);
        let mut i = 0;
        while i < comp.len() {
            let a = comp[i];
            for b in remaining.iter() {
                if !m.commute(a, b) {
                    comp.push(b);
                    remaining = remaining.without(b);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

fn classify_component(m: &CoxeterMatrix, comp: &[usize]) -> Option<FiniteType> {
    let n = comp.len();
    if n == 1 {
        return Some(FiniteType::A(1));
    }
    let mut edges = Vec::new();
    for (i, &a) in comp.iter().enumerate() {
        for &b in &comp[i + 1..] {
            match m.label(a, b) {
                Label::Infinite => return None,
                Label::Finite(2) => {}
                Label::Finite(k) => edges.push((a, b, k)),
            }
        }
    }
    if n == 2 {
        return Some(FiniteType::I2(edges[0].2));
    }
    if edges.len() != n - 1 {
        return None;
    }
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(a, b, _) in &edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    let degree = |v: usize| adj.get(&v).map_or(0, Vec::len);
    if comp.iter().any(|&v| degree(v) > 3) {
        return None;
    }
    let branch: Vec<usize> = comp.iter().copied().filter(|&v| degree(v) == 3).collect();
    let heavy: Vec<&(usize, usize, u32)> = edges.iter().filter(|e| e.2 > 3).collect();

    if branch.is_empty() {
        // a path; order its vertices
        let end = *comp.iter().find(|&&v| degree(v) == 1)?;
        let mut path = vec![end];
        let mut prev = usize::MAX;
        let mut cur = end;
        while let Some(&next) = adj[&cur].iter().find(|&&x| x != prev) {
            path.push(next);
            prev = cur;
            cur = next;
        }
        match heavy.as_slice() {
            [] => Some(FiniteType::A(n)),
            [&(a, b, k)] => {
                let pa = path.iter().position(|&v| v == a)?;
                let pb = path.iter().position(|&v| v == b)?;
                let pos = pa.min(pb);
                let at_end = pos == 0 || pos == n - 2;
                match k {
                    4 if at_end => Some(FiniteType::B(n)),
                    4 if n == 4 && pos == 1 => Some(FiniteType::F4),
                    5 if at_end && n == 3 => Some(FiniteType::H3),
                    5 if at_end && n == 4 => Some(FiniteType::H4),
                    _ => None,
                }
            }
            _ => None,
        }
    } else if branch.len() == 1 && heavy.is_empty() {
        let centre = branch[0];
        let mut arms: Vec<usize> = adj[&centre]
            .iter()
            .map(|&first| {
                let mut len = 1;
                let mut prev = centre;
                let mut cur = first;
                while let Some(&next) = adj[&cur].iter().find(|&&x| x != prev) {
                    len += 1;
                    prev = cur;
                    cur = next;
                }
                len
            })
            .collect();
        arms.sort_unstable();
        match arms.as_slice() {
            [1, 1, _] => Some(FiniteType::D(n)),
            [1, 2, 2] => Some(FiniteType::E6),
            [1, 2, 3] => Some(FiniteType::E7),
            [1, 2, 4] => Some(FiniteType::E8),
            _ => None,
        }
    } else {
        None
    }
}

/// A spherical subset together with the exact order of its parabolic subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SphericalSubset {
    pub members: GenSet,
    pub group_order: BigUint,
}

/// The poset of spherical subsets under inclusion.
#[derive(Clone, Debug)]
pub struct SphericalPoset {
    subsets: Vec<SphericalSubset>,
    index: HashMap<GenSet, usize>,
}

impl SphericalPoset {
    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &SphericalSubset> {
        self.subsets.iter()
    }

    pub fn contains(&self, t: GenSet) -> bool {
        self.index.contains_key(&t)
    }

    pub fn get(&self, t: GenSet) -> Option<&SphericalSubset> {
        self.index.get(&t).map(|&i| &self.subsets[i])
    }

    /// Counts by cardinality, index `k` holding the number of `k`-element sets.
    pub fn rank_counts(&self) -> Vec<usize> {
        let top = self.subsets.iter().map(|s| s.members.len()).max().unwrap_or(0);
        let mut counts = vec![0; top + 1];
        for s in &self.subsets {
            counts[s.members.len()] += 1;
        }
        counts
    }

    /// `S^(k)`.
    pub fn of_size(&self, k: usize) -> Vec<GenSet> {
        self.members_where(|t| t.len() == k)
    }

    /// `S_{≥T}`.
    pub fn at_least(&self, t: GenSet) -> Vec<GenSet> {
        self.members_where(|v| t.is_subset(v))
    }

    /// `S_{<V}`.
    pub fn strictly_below(&self, v: GenSet) -> Vec<GenSet> {
        self.members_where(|t| t.is_subset(v) && t != v)
    }

    /// `S(U)`: spherical subsets contained in `u`.
    pub fn within(&self, u: GenSet) -> Vec<GenSet> {
        self.members_where(|t| t.is_subset(u))
    }

    pub fn members_where(&self, pred: impl Fn(GenSet) -> bool) -> Vec<GenSet> {
        self.subsets
            .iter()
            .map(|s| s.members)
            .filter(|&t| pred(t))
            .collect()
    }
}

/// A Coxeter matrix with the shared normal-form cache.
///
/// The cache is the only interior mutability; readers take a shared lock.
#[derive(Debug)]
pub struct CoxeterSystem {
    matrix: CoxeterMatrix,
    pub(crate) class_cap: usize,
    pub(crate) cache: RwLock<HashMap<Vec<usize>, GroupElement>>,
}

impl CoxeterSystem {
    pub fn new(matrix: CoxeterMatrix) -> Self {
        CoxeterSystem {
            matrix,
            class_cap: DEFAULT_CLASS_CAP,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn with_class_cap(mut self, cap: usize) -> Self {
        self.class_cap = cap;
        self
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// The standard parabolic subsystem on `subset`, with the index map new → old.
    pub fn subsystem(&self, subset: GenSet) -> (CoxeterSystem, Vec<usize>) {
        let (m, map) = self.matrix.restrict(subset);
        (CoxeterSystem::new(m).with_class_cap(self.class_cap), map)
    }
}

impl Clone for CoxeterSystem {
    fn clone(&self) -> Self {
        CoxeterSystem::new(self.matrix.clone()).with_class_cap(self.class_cap)
    }
}

/// The map `g_VT : W_V → W_T` sending `s ∈ V∩T` to `s` and `s ∈ V−T` to `e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneratorProjection {
    pub source: GenSet,
    pub target: GenSet,
}

impl GeneratorProjection {
    pub fn new(source: GenSet, target: GenSet) -> Self {
        GeneratorProjection { source, target }
    }

    /// Applies the projection. Refuses non-even systems, where the rule is
    /// not known to define a homomorphism.
    pub fn project(&self, sys: &CoxeterSystem, w: &GroupElement) -> Result<GroupElement> {
        if !sys.matrix().is_even() {
            return Err(CoxeterError::NotEven);
        }
        if !w.support().is_subset(self.source) {
            return Err(CoxeterError::NotInSubgroup {
                element: w.to_string(),
                subset: self.source.to_string(),
            });
        }
        let kept: Vec<usize> = w
            .word()
            .iter()
            .copied()
            .filter(|&g| self.target.contains(g))
            .collect();
        sys.normal_form(&kept)
    }
}
