//! Truncated Davis complexes in the Coxeter cellulation, ruins, boundary
//! components and boundary collars.
//!
//! A cell `wW_T` is present in the truncation at radius `R` iff every
//! element of the coset has length at most `R`, i.e. iff
//! `ℓ(w) + ℓ(w_T) ≤ R` for the reduced representative `w` and the longest
//! element `w_T` of `W_T`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::{CoxeterError, Result};
use crate::homology::Poset;
use crate::system::{CoxeterMatrix, CoxeterSystem, GenSet};
use crate::words::{Ball, GroupElement, DEFAULT_BALL_CAP};

/// Cap on the number of cells in one truncation.
pub const DEFAULT_CELL_CAP: usize = 5_000_000;

/// A cell `wW_T`: `rep` is the ball id of the `(∅,T)`-reduced element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cell {
    pub rep: usize,
    pub ty: GenSet,
}

/// The cells `wW_T`, `w ∈ W_gens`, `T` in a downward closed family of
/// spherical subsets of `gens`, that fit inside the ball of radius `R`.
#[derive(Clone, Debug)]
pub struct CellPoset {
    matrix: CoxeterMatrix,
    ball: Ball,
    radius: usize,
    types: Vec<GenSet>,
    w0: HashMap<GenSet, usize>,
    cells: Vec<Cell>,
    faces: Vec<Vec<usize>>,
    cofaces: Vec<Vec<usize>>,
    index: HashMap<Cell, usize>,
}

impl CellPoset {
    /// `Σ(U)` truncated at `radius`: all spherical types inside `gens`.
    pub fn build(sys: &CoxeterSystem, gens: GenSet, radius: usize) -> Result<Self> {
        let types = sys.matrix().spherical_poset()?.within(gens);
        Self::build_with_types(sys, gens, &types, radius, DEFAULT_CELL_CAP)
    }

    /// Cells over `W_gens` whose types are drawn from `types`.
    pub fn build_with_types(
        sys: &CoxeterSystem,
        gens: GenSet,
        types: &[GenSet],
        radius: usize,
        cap: usize,
    ) -> Result<Self> {
        let m = sys.matrix();
        let mut types: Vec<GenSet> = types.to_vec();
        types.sort_by_key(|t| (t.len(), t.0));
        types.dedup();
        for &t in &types {
            if !t.is_subset(gens) {
                return Err(CoxeterError::TypeMismatch {
                    inner: m.format_set(t),
                    outer: m.format_set(gens),
                });
            }
            if !m.is_spherical(t) {
                return Err(CoxeterError::TruncationUnsafe(format!(
                    "type {} is not spherical",
                    m.format_set(t)
                )));
            }
        }
        for &t in &types {
            for sub in t.subsets() {
                if !types.contains(&sub) {
                    return Err(CoxeterError::NotClosed(format!(
                        "type family contains {} but not {}",
                        m.format_set(t),
                        m.format_set(sub)
                    )));
                }
            }
        }
        let ball = Ball::build(sys, gens, radius, DEFAULT_BALL_CAP)?;
        let mut w0 = HashMap::new();
        for &t in &types {
            let fin = Ball::build(sys, t, usize::MAX, DEFAULT_BALL_CAP)?;
            w0.insert(t, fin.max_length());
        }
        let mut cells: Vec<Cell> = Vec::new();
        let mut index: HashMap<Cell, usize> = HashMap::new();
        for &t in &types {
            let top = w0[&t];
            if top > radius {
                continue;
            }
            for k in 0..=(radius - top).min(ball.max_length()) {
                for id in ball.level(k) {
                    if !ball.has_right_descent_in(id, t) {
                        let c = Cell { rep: id, ty: t };
                        index.insert(c, cells.len());
                        cells.push(c);
                        if cells.len() > cap {
                            return Err(CoxeterError::ExplosionGuard {
                                what: "cells in truncation".into(),
                                cap,
                            });
                        }
                    }
                }
            }
        }
        let mut faces: Vec<Vec<usize>> = vec![Vec::new(); cells.len()];
        let mut cofaces: Vec<Vec<usize>> = vec![Vec::new(); cells.len()];
        for (i, c) in cells.iter().enumerate() {
            if c.ty.is_empty() {
                continue;
            }
            let members = ball.coset_members(c.rep, c.ty);
            let mut fs: Vec<usize> = Vec::new();
            for s in c.ty.iter() {
                let sub = c.ty.without(s);
                let mut reps: Vec<usize> = members.iter().map(|&v| ball.coset_min(v, sub)).collect();
                reps.sort_unstable();
                reps.dedup();
                for r in reps {
                    fs.push(index[&Cell { rep: r, ty: sub }]);
                }
            }
            fs.sort_unstable();
            for &f in &fs {
                cofaces[f].push(i);
            }
            faces[i] = fs;
        }
        Ok(CellPoset {
            matrix: m.clone(),
            ball,
            radius,
            types,
            w0,
            cells,
            faces,
            cofaces,
            index,
        })
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    pub fn gens(&self) -> GenSet {
        self.ball.gens()
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn types(&self) -> &[GenSet] {
        &self.types
    }

    /// `ℓ(w_T)` for an admitted type.
    pub fn w0_length(&self, t: GenSet) -> Option<usize> {
        self.w0.get(&t).copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cell(&self, i: usize) -> Cell {
        self.cells[i]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn ty(&self, i: usize) -> GenSet {
        self.cells[i].ty
    }

    pub fn rep(&self, i: usize) -> &GroupElement {
        self.ball.element(self.cells[i].rep)
    }

    pub fn dim(&self, i: usize) -> usize {
        self.cells[i].ty.len()
    }

    /// Codimension-one faces.
    pub fn faces(&self, i: usize) -> &[usize] {
        &self.faces[i]
    }

    pub fn cofaces(&self, i: usize) -> &[usize] {
        &self.cofaces[i]
    }

    /// Vertices (ball ids) of a cell.
    pub fn vertices(&self, i: usize) -> Vec<usize> {
        let c = self.cells[i];
        self.ball.coset_members(c.rep, c.ty)
    }

    pub fn find(&self, rep: usize, ty: GenSet) -> Option<usize> {
        self.index.get(&Cell { rep, ty }).copied()
    }

    /// The cell `wW_T` for any ball element `w` of the coset.
    pub fn cell_of(&self, w: usize, ty: GenSet) -> Option<usize> {
        if !self.w0.contains_key(&ty) {
            return None;
        }
        self.find(self.ball.coset_min(w, ty), ty)
    }

    pub fn vertex_cell(&self, w: usize) -> Option<usize> {
        self.find(w, GenSet::EMPTY)
    }

    /// The face order as a poset for homology.
    pub fn poset(&self) -> Poset {
        Poset::from_covers(&self.faces)
    }

    pub fn counts_by_type(&self, mask: Option<&[bool]>) -> BTreeMap<GenSet, usize> {
        let mut out = BTreeMap::new();
        for (i, c) in self.cells.iter().enumerate() {
            if mask.is_none_or(|m| m[i]) {
                *out.entry(c.ty).or_insert(0) += 1;
            }
        }
        out
    }

    /// Cells counted by dimension.
    pub fn f_vector(&self, mask: Option<&[bool]>) -> Vec<usize> {
        let mut f = Vec::new();
        for (i, c) in self.cells.iter().enumerate() {
            if mask.is_none_or(|m| m[i]) {
                let d = c.ty.len();
                if f.len() <= d {
                    f.resize(d + 1, 0);
                }
                f[d] += 1;
            }
        }
        f
    }

    pub fn mask_where(&self, pred: impl Fn(Cell) -> bool) -> Vec<bool> {
        self.cells.iter().map(|&c| pred(c)).collect()
    }

    /// Closes a cell set under taking faces.
    pub fn closure(&self, seeds: &[bool]) -> Vec<bool> {
        let mut out = seeds.to_vec();
        // faces have smaller type, and cells are sorted by type size
        for i in (0..self.cells.len()).rev() {
            if out[i] {
                for &f in &self.faces[i] {
                    out[f] = true;
                }
            }
        }
        out
    }

    pub fn is_closed(&self, mask: &[bool]) -> bool {
        (0..self.cells.len()).all(|i| !mask[i] || self.faces[i].iter().all(|&f| mask[f]))
    }

    /// `Σ(U)`: the cells of type contained in `u`.
    pub fn sigma_mask(&self, u: GenSet) -> Vec<bool> {
        self.mask_where(|c| c.ty.is_subset(u))
    }
}

/// The subcomplexes `Ω(U,T)`, `∂Ω(U,T)` and `Ω̂(U,T)` of a truncated `Σ(U)`.
#[derive(Clone, Debug)]
pub struct Ruin {
    pub u: GenSet,
    pub t: GenSet,
    pub omega: Vec<bool>,
    pub boundary: Vec<bool>,
    pub hat: Vec<bool>,
}

/// Builds the `(U,T)`-ruin inside `sigma`.
///
/// The ruin is the infinite ruin restricted to the present cells: a cell of
/// type `V ⊆ U` lies in `Ω(U,T)` iff `V ∪ T` is spherical, since it is then a
/// face of its `(V ∪ T)`-coset. For a full finite complex this is the closure
/// of the cells of type `≥ T`.
pub fn build_ruin(sigma: &CellPoset, u: GenSet, t: GenSet) -> Result<Ruin> {
    if !t.is_subset(u) {
        return Err(CoxeterError::TypeMismatch {
            inner: sigma.matrix().format_set(t),
            outer: sigma.matrix().format_set(u),
        });
    }
    let m = sigma.matrix();
    let above = |c: Cell| c.ty.is_subset(u) && t.is_subset(c.ty);
    let omega = sigma.mask_where(|c| c.ty.is_subset(u) && m.is_spherical(c.ty.union(t)));
    let boundary: Vec<bool> = (0..sigma.len())
        .map(|i| omega[i] && !above(sigma.cell(i)))
        .collect();
    let hat = sigma.mask_where(|c| c.ty.is_subset(u) && !t.is_subset(c.ty));
    Ok(Ruin {
        u,
        t,
        omega,
        boundary,
        hat,
    })
}

impl Ruin {
    pub fn omega_count(&self) -> usize {
        self.omega.iter().filter(|&&b| b).count()
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary.iter().filter(|&&b| b).count()
    }

    pub fn hat_count(&self) -> usize {
        self.hat.iter().filter(|&&b| b).count()
    }
}

/// Connected components of the 1-skeleton of `mask`, using only edges
/// whose type lies in `edge_types`; each component is a sorted list of ball
/// ids, and components are ordered by least member.
pub fn components(sigma: &CellPoset, mask: &[bool], edge_types: GenSet) -> Vec<Vec<usize>> {
    let n = sigma.ball().len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut present = vec![false; n];
    for i in 0..sigma.len() {
        if !mask[i] {
            continue;
        }
        let c = sigma.cell(i);
        if c.ty.is_empty() {
            present[c.rep] = true;
        } else if c.ty.len() == 1 && c.ty.is_subset(edge_types) {
            let s = c.ty.max().expect("edge type");
            let other = sigma.ball().right(c.rep, s).expect("edge inside ball");
            let (a, b) = (find(&mut parent, c.rep), find(&mut parent, other));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        if present[v] {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort_by_key(|c| c[0]);
    out
}

/// A component of `∂Ω`: the vertices of one coset `xW_{U−t}` in the ball.
#[derive(Clone, Debug, Serialize)]
pub struct BoundaryComponent {
    /// Ball id of the reduced representative `x`.
    pub rep: usize,
    pub vertices: Vec<usize>,
}

/// The union of the translates `wK(U)` over the vertices `w` of one
/// boundary component, as a set of cells; `inner` are the carrier cells
/// whose type contains `t`.
#[derive(Clone, Debug, Serialize)]
pub struct BoundaryCollar {
    pub component: usize,
    pub carrier: Vec<usize>,
    pub inner: Vec<usize>,
    /// Whether the representative's whole translate `xK(U)` is present.
    pub safe: bool,
}

/// The component `Ω` of the one-letter ruin `Ω(S,t)` with vertex set `W_U`,
/// where `U` is the star of `t`, together with its boundary components.
#[derive(Clone, Debug)]
pub struct OneLetterRuin {
    pub t: usize,
    pub u: GenSet,
    pub sigma: CellPoset,
    pub ruin: Ruin,
    pub components: Vec<BoundaryComponent>,
    component_of: HashMap<usize, usize>,
    /// `max ℓ(w_V)` over the types `V` of `K(U)`.
    pub chamber_depth: usize,
}

impl OneLetterRuin {
    pub fn build(sys: &CoxeterSystem, t: usize, radius: usize) -> Result<Self> {
        let m = sys.matrix();
        if t >= m.rank() {
            return Err(CoxeterError::UnknownGenerator(t.to_string()));
        }
        let u = GenSet::from_iter((0..m.rank()).filter(|&s| m.label(s, t).finite().is_some()));
        let sigma = CellPoset::build(sys, u, radius)?;
        let ruin = build_ruin(&sigma, u, GenSet::singleton(t))?;
        let inner = u.without(t);
        let mut by_rep: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..sigma.len() {
            let c = sigma.cell(i);
            if ruin.boundary[i] && c.ty.is_empty() {
                by_rep.entry(sigma.ball().coset_min(c.rep, inner)).or_default().push(c.rep);
            }
        }
        let mut components = Vec::new();
        let mut component_of = HashMap::new();
        for (rep, mut vertices) in by_rep {
            vertices.sort_unstable();
            for &v in &vertices {
                component_of.insert(v, components.len());
            }
            components.push(BoundaryComponent { rep, vertices });
        }
        let chamber_depth = sigma
            .types()
            .iter()
            .filter(|v| m.is_spherical(v.with(t)))
            .map(|&v| sigma.w0_length(v).unwrap_or(0))
            .max()
            .unwrap_or(0);
        Ok(OneLetterRuin {
            t,
            u,
            sigma,
            ruin,
            components,
            component_of,
            chamber_depth,
        })
    }

    pub fn t_set(&self) -> GenSet {
        GenSet::singleton(self.t)
    }

    pub fn component_of(&self, vertex: usize) -> Option<usize> {
        self.component_of.get(&vertex).copied()
    }

    /// Whether every cell of `wK(U)` fits inside the ball.
    pub fn is_safe(&self, vertex: usize) -> bool {
        self.sigma.ball().length(vertex) + self.chamber_depth <= self.sigma.radius()
    }

    /// All collars at once, in component order.
    pub fn collars(&self) -> Vec<BoundaryCollar> {
        let mut carriers: Vec<Vec<usize>> = vec![Vec::new(); self.components.len()];
        for i in 0..self.sigma.len() {
            if !self.ruin.omega[i] {
                continue;
            }
            let mut comps: Vec<usize> = self
                .sigma
                .vertices(i)
                .into_iter()
                .filter_map(|v| self.component_of(v))
                .collect();
            comps.sort_unstable();
            comps.dedup();
            for c in comps {
                carriers[c].push(i);
            }
        }
        carriers
            .into_iter()
            .enumerate()
            .map(|(k, carrier)| self.collar_from_carrier(k, carrier))
            .collect()
    }

    fn collar_from_carrier(&self, component: usize, carrier: Vec<usize>) -> BoundaryCollar {
        let inner = carrier
            .iter()
            .copied()
            .filter(|&i| self.sigma.ty(i).contains(self.t))
            .collect();
        BoundaryCollar {
            component,
            carrier,
            inner,
            safe: self.is_safe(self.components[component].rep),
        }
    }

    /// The collar of one component; refuses components whose representative
    /// translate leaves the ball.
    pub fn boundary_collar(&self, component: usize) -> Result<BoundaryCollar> {
        let comp = &self.components[component];
        if !self.is_safe(comp.rep) {
            return Err(CoxeterError::TruncationUnsafe(format!(
                "translate of K(U) at a vertex of length {} needs radius {}",
                self.sigma.ball().length(comp.rep),
                self.sigma.ball().length(comp.rep) + self.chamber_depth
            )));
        }
        let mut carrier: Vec<usize> = Vec::new();
        for i in 0..self.sigma.len() {
            if self.ruin.omega[i]
                && self
                    .sigma
                    .vertices(i)
                    .iter()
                    .any(|&v| self.component_of(v) == Some(component))
            {
                carrier.push(i);
            }
        }
        Ok(self.collar_from_carrier(component, carrier))
    }

    /// Cells of `wK(U)` that are present: `wW_V` with `V ∪ {t}` spherical.
    pub fn translate_cells(&self, w: usize) -> Vec<usize> {
        let m_types: Vec<GenSet> = self
            .sigma
            .types()
            .iter()
            .copied()
            .filter(|v| self.sigma.types().contains(&v.with(self.t)))
            .collect();
        let mut out: Vec<usize> = m_types
            .into_iter()
            .filter_map(|v| self.sigma.cell_of(w, v))
            .collect();
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::homology::order_homology;

    fn sys(m: crate::CoxeterMatrix) -> CoxeterSystem {
        CoxeterSystem::new(m)
    }

    #[test]
    fn octagon() {
        let s = sys(fixtures::dihedral(4));
        let sigma = CellPoset::build(&s, GenSet::full(2), 8).unwrap();
        assert_eq!(sigma.f_vector(None), vec![8, 8, 1]);
        let by = sigma.counts_by_type(None);
        assert_eq!(by[&GenSet::singleton(0)], 4);
        assert_eq!(by[&GenSet::singleton(1)], 4);
        let poset = sigma.poset();
        let all = vec![true; sigma.len()];
        let h = order_homology(&poset, &all, &vec![false; sigma.len()]).unwrap();
        assert_eq!(h.trimmed(), vec![1]);
        let top = sigma.find(0, GenSet::full(2)).unwrap();
        assert_eq!(sigma.faces(top).len(), 8);
        assert_eq!(sigma.vertices(top).len(), 8);
    }

    #[test]
    fn radius_zero_and_empty_type_set() {
        let s = sys(fixtures::square_right_angled());
        let sigma = CellPoset::build(&s, s.matrix().all(), 0).unwrap();
        assert_eq!(sigma.f_vector(None), vec![1]);
        let bare = CellPoset::build(&s, GenSet::EMPTY, 5).unwrap();
        assert_eq!(bare.len(), 1);
        let verts = CellPoset::build_with_types(&s, s.matrix().all(), &[GenSet::EMPTY], 2, 100).unwrap();
        // four commuting pairs among the twelve ordered pairs: 1 + 4 + 8
        assert_eq!(verts.len(), 13);
    }

    #[test]
    fn ruins_with_empty_and_maximal_types() {
        let s = sys(fixtures::dihedral(4));
        let all = GenSet::full(2);
        let sigma = CellPoset::build(&s, all, 8).unwrap();
        let r0 = build_ruin(&sigma, all, GenSet::EMPTY).unwrap();
        assert!(r0.omega.iter().all(|&b| b));
        assert_eq!(r0.boundary_count(), 0);
        let top = build_ruin(&sigma, all, all).unwrap();
        assert_eq!(top.omega_count(), sigma.len());
        assert_eq!(top.boundary_count(), sigma.len() - 1);
        assert!(build_ruin(&sigma, GenSet::singleton(0), all).is_err());
    }

    #[test]
    fn one_skeleton_is_the_cayley_ball() {
        let s = sys(fixtures::example_tr_s());
        let sigma = CellPoset::build(&s, s.matrix().all(), 6).unwrap();
        let ball = sigma.ball();
        for i in 0..sigma.len() {
            let c = sigma.cell(i);
            if c.ty.len() == 1 {
                let g = c.ty.max().unwrap();
                assert!(ball.right(c.rep, g).is_some());
            }
        }
        let edges = sigma.f_vector(None)[1];
        let mut expected = 0;
        for id in 0..ball.len() {
            for g in 0..3 {
                if ball.right(id, g).is_some_and(|j| j > id) {
                    expected += 1;
                }
            }
        }
        assert_eq!(edges, expected);
    }

    #[test]
    fn one_letter_ruin_of_the_example() {
        let s = sys(fixtures::example_tr_s());
        let one = OneLetterRuin::build(&s, 0, 10).unwrap();
        assert_eq!(one.u, GenSet::full(3));
        assert!(one.sigma.is_closed(&one.ruin.omega));
        // components of the boundary are the W_{U-t} cosets
        let mut uf = components(&one.sigma, &one.ruin.boundary, one.u.without(0));
        let mut by_coset: Vec<Vec<usize>> = one.components.iter().map(|c| c.vertices.clone()).collect();
        uf.sort();
        by_coset.sort();
        assert_eq!(uf, by_coset);
        // the collar carrier is the union of the translates wK(U)
        let collars = one.collars();
        for col in collars.iter().take(20) {
            let mut union: Vec<usize> = one.components[col.component]
                .vertices
                .iter()
                .flat_map(|&w| one.translate_cells(w))
                .collect();
            union.sort_unstable();
            union.dedup();
            assert_eq!(union, col.carrier);
            assert!(col.inner.iter().all(|&i| one.sigma.ty(i).contains(0)));
        }
        let e = one.component_of(0).unwrap();
        assert!(one.boundary_collar(e).is_ok());
        let far = one
            .components
            .iter()
            .position(|c| !one.is_safe(c.rep))
            .unwrap();
        assert!(matches!(
            one.boundary_collar(far),
            Err(CoxeterError::TruncationUnsafe(_))
        ));
    }

    #[test]
    fn edge_types_empty_gives_singletons() {
        let s = sys(fixtures::square_right_angled());
        let sigma = CellPoset::build(&s, s.matrix().all(), 2).unwrap();
        let all = vec![true; sigma.len()];
        let comps = components(&sigma, &all, GenSet::EMPTY);
        assert_eq!(comps.len(), sigma.ball().len());
        assert_eq!(components(&sigma, &all, s.matrix().all()).len(), 1);
    }
}
