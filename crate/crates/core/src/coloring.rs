//! Painting of one-letter ruins by the color set
//! `A = ∏_{T ∈ S_{≥t}} W_T / W_{T−t}`, even and odd collars, and the
//! structural checks on how collars meet.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use crate::complex::{BoundaryCollar, CellPoset, OneLetterRuin};
use crate::error::{CoxeterError, Result};
use crate::harness::{Counterexample, Finding};
use crate::nerve::build_nerve;
use crate::system::{CoxeterSystem, GenSet};
use crate::words::{Ball, GroupElement, DEFAULT_BALL_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

/// An element of `A`, stored by its nontrivial coordinates; each one is
/// the `(∅,T−t)`-reduced representative of its coset.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Color {
    coords: BTreeMap<GenSet, GroupElement>,
}

impl Color {
    /// `ē`, the trivial coset in every coordinate.
    pub fn trivial() -> Self {
        Color::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coord(&self, t: GenSet) -> GroupElement {
        self.coords.get(&t).cloned().unwrap_or_default()
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = (GenSet, &GroupElement)> {
        self.coords.iter().map(|(&t, w)| (t, w))
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.coords.is_empty() {
            return "ē".into();
        }
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|(t, w)| {
                let ts: Vec<&str> = t.iter().map(|g| names[g].as_str()).collect();
                format!("{{{}}}:{}", ts.join(","), w.display_with(names))
            })
            .collect();
        parts.join(" ")
    }
}

/// The factors of `A` with a finite multiplication table for each `W_T`.
#[derive(Clone, Debug)]
pub struct ColorSpace {
    t: usize,
    u: GenSet,
    factors: Vec<GenSet>,
    tables: Vec<Ball>,
}

impl ColorSpace {
    pub fn new(sys: &CoxeterSystem, u: GenSet, t: usize) -> Result<Self> {
        let m = sys.matrix();
        if !m.is_even() {
            return Err(CoxeterError::NotEven);
        }
        let factors: Vec<GenSet> = m
            .spherical_poset()?
            .within(u)
            .into_iter()
            .filter(|f| f.contains(t))
            .collect();
        let tables = factors
            .iter()
            .map(|&f| Ball::build(sys, f, usize::MAX, DEFAULT_BALL_CAP))
            .collect::<Result<Vec<_>>>()?;
        Ok(ColorSpace {
            t,
            u,
            factors,
            tables,
        })
    }

    /// `S_{≥t}` within `U`.
    pub fn factors(&self) -> &[GenSet] {
        &self.factors
    }

    /// `|A| = ∏ [W_T : W_{T−t}]`.
    pub fn size(&self) -> num_bigint::BigUint {
        let mut n = num_bigint::BigUint::from(1u32);
        for (k, &f) in self.factors.iter().enumerate() {
            let whole = self.tables[k].len();
            let sub = (0..whole)
                .filter(|&id| self.tables[k].element(id).count(self.t) == 0)
                .count();
            n *= whole / sub;
            let _ = f;
        }
        n
    }

    fn coordinate(&self, k: usize, g: usize, v: &GroupElement) -> usize {
        let table = &self.tables[k];
        let moved = table.walk(g, v.word()).expect("finite table");
        table.coset_min(moved, self.factors[k].without(self.t))
    }

    fn color_from_ids(&self, ids: &[usize]) -> Color {
        let mut coords = BTreeMap::new();
        for (k, &id) in ids.iter().enumerate() {
            if id != 0 {
                coords.insert(self.factors[k], self.tables[k].element(id).clone());
            }
        }
        Color { coords }
    }

    /// `w·a`: coordinatewise `g_{UT}(w)·v W_{T−t}`.
    pub fn act(&self, w: &GroupElement, a: &Color) -> Result<Color> {
        if !w.support().is_subset(self.u) {
            return Err(CoxeterError::NotInSubgroup {
                element: w.to_string(),
                subset: self.u.to_string(),
            });
        }
        let ids: Vec<usize> = self
            .factors
            .iter()
            .enumerate()
            .map(|(k, &f)| {
                let kept: Vec<usize> = w.word().iter().copied().filter(|&g| f.contains(g)).collect();
                let g = self.tables[k].walk(0, &kept).expect("finite table");
                self.coordinate(k, g, &a.coord(f))
            })
            .collect();
        Ok(self.color_from_ids(&ids))
    }
}

/// A one-letter ruin with its vertices and collars painted.
#[derive(Clone, Debug)]
pub struct PaintedRuin {
    pub one: OneLetterRuin,
    pub space: ColorSpace,
    vertex_color: Vec<usize>,
    vertex_parity: Vec<Parity>,
    palette: Vec<Color>,
    pub collars: Vec<BoundaryCollar>,
    cell_collars: Vec<Vec<usize>>,
    s_prime: Vec<usize>,
}

/// Paints `Ω` for the letter `t` at the given radius.
pub fn paint(sys: &CoxeterSystem, t: usize, radius: usize) -> Result<PaintedRuin> {
    let m = sys.matrix();
    if !m.is_even() {
        return Err(CoxeterError::NotEven);
    }
    if let Some(clique) = build_nerve(m)?.flag_violation() {
        return Err(CoxeterError::NotFlag { clique });
    }
    let one = OneLetterRuin::build(sys, t, radius)?;
    let space = ColorSpace::new(sys, one.u, t)?;
    let ball = one.sigma.ball();
    let n = ball.len();
    let kf = space.factors.len();
    // g_{UT}(w) for every vertex, built along a descent path
    let mut proj: Vec<usize> = vec![0; n * kf];
    for id in 1..n {
        let (r, p) = one
            .u
            .iter()
            .find_map(|r| {
                ball.right(id, r)
                    .filter(|&p| ball.length(p) < ball.length(id))
                    .map(|p| (r, p))
            })
            .expect("descent");
        for k in 0..kf {
            let g = proj[p * kf + k];
            proj[id * kf + k] = if space.factors[k].contains(r) {
                space.tables[k].right(g, r).expect("finite table")
            } else {
                g
            };
        }
    }
    let mut palette_index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut palette: Vec<Color> = Vec::new();
    let mut vertex_color = vec![0usize; n];
    let mut vertex_parity = vec![Parity::Even; n];
    for id in 0..n {
        let key: Vec<usize> = (0..kf)
            .map(|k| space.tables[k].coset_min(proj[id * kf + k], space.factors[k].without(t)))
            .collect();
        let next = palette.len();
        let c = *palette_index.entry(key.clone()).or_insert(next);
        if c == next {
            palette.push(space.color_from_ids(&key));
        }
        vertex_color[id] = c;
        vertex_parity[id] = if ball.element(id).count(t) % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        };
    }
    let mut cell_collars: Vec<Vec<usize>> = vec![Vec::new(); one.sigma.len()];
    let mut carriers: Vec<Vec<usize>> = vec![Vec::new(); one.components.len()];
    for i in 0..one.sigma.len() {
        if !one.ruin.omega[i] {
            continue;
        }
        let mut comps: Vec<usize> = one
            .sigma
            .vertices(i)
            .into_iter()
            .filter_map(|v| one.component_of(v))
            .collect();
        comps.sort_unstable();
        comps.dedup();
        for &c in &comps {
            carriers[c].push(i);
        }
        cell_collars[i] = comps;
    }
    let collars = carriers
        .into_iter()
        .enumerate()
        .map(|(k, carrier)| {
            let inner = carrier
                .iter()
                .copied()
                .filter(|&i| one.sigma.ty(i).contains(t))
                .collect();
            BoundaryCollar {
                component: k,
                carrier,
                inner,
                safe: one.is_safe(one.components[k].rep),
            }
        })
        .collect();
    let s_prime = one
        .u
        .iter()
        .filter(|&s| s != t && m.label(s, t).finite().is_some_and(|l| l > 2))
        .collect();
    Ok(PaintedRuin {
        one,
        space,
        vertex_color,
        vertex_parity,
        palette,
        collars,
        cell_collars,
        s_prime,
    })
}

/// An isomorphism between a set of cells and a truncated Davis complex.
#[derive(Clone, Debug, Serialize)]
pub struct IsoCertificate {
    pub cells: usize,
    pub covers: usize,
    pub target_radius: isize,
}

/// `D_0 ∩ D_u` together with its isomorphism onto `Σ(W′,U_st)`.
#[derive(Clone, Debug, Serialize)]
pub struct PieceCertificate {
    pub s: usize,
    pub u: usize,
    pub piece: Vec<usize>,
    pub iso: IsoCertificate,
}

impl PaintedRuin {
    pub fn t(&self) -> usize {
        self.one.t
    }

    fn sigma(&self) -> &CellPoset {
        &self.one.sigma
    }

    pub fn color_count(&self) -> usize {
        self.palette.len()
    }

    pub fn color(&self, id: usize) -> &Color {
        &self.palette[id]
    }

    pub fn color_id(&self, vertex: usize) -> usize {
        self.vertex_color[vertex]
    }

    pub fn color_of(&self, vertex: usize) -> &Color {
        &self.palette[self.vertex_color[vertex]]
    }

    pub fn parity(&self, vertex: usize) -> Parity {
        self.vertex_parity[vertex]
    }

    pub fn collar_color(&self, collar: usize) -> usize {
        self.vertex_color[self.one.components[collar].rep]
    }

    pub fn collar_parity(&self, collar: usize) -> Parity {
        self.vertex_parity[self.one.components[collar].rep]
    }

    /// The components making up the `c`-collar `F_c`.
    pub fn c_collar(&self, color: usize) -> Vec<usize> {
        (0..self.collars.len())
            .filter(|&k| self.collar_color(k) == color)
            .collect()
    }

    /// Colors present on boundary components, grouped into `F_c`.
    pub fn c_collars(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for k in 0..self.collars.len() {
            out.entry(self.collar_color(k)).or_default().push(k);
        }
        out
    }

    /// Collars whose carrier contains the cell.
    pub fn cell_collars(&self, cell: usize) -> &[usize] {
        &self.cell_collars[cell]
    }

    pub fn s_prime(&self) -> &[usize] {
        &self.s_prime
    }

    /// `U_st = {r : m_rt = m_rs = 2}`.
    pub fn u_st(&self, s: usize) -> GenSet {
        let m = self.sigma().matrix();
        let t = self.one.t;
        GenSet::from_iter(
            (0..m.rank()).filter(|&r| r != s && r != t && m.commute(r, t) && m.commute(r, s)),
        )
    }

    /// Cells lying in some collar of `a` and some collar of `b`.
    pub fn intersection(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        let a: BTreeSet<usize> = a.iter().copied().collect();
        let b: BTreeSet<usize> = b.iter().copied().collect();
        (0..self.sigma().len())
            .filter(|&i| {
                let cs = &self.cell_collars[i];
                cs.iter().any(|c| a.contains(c)) && cs.iter().any(|c| b.contains(c))
            })
            .collect()
    }

    fn names(&self) -> &[String] {
        self.sigma().matrix().names()
    }

    fn word(&self, vertex: usize) -> String {
        self.sigma().ball().element(vertex).display_with(self.names())
    }

    fn cell_json(&self, i: usize) -> serde_json::Value {
        let c = self.sigma().cell(i);
        json!({
            "rep": self.word(c.rep),
            "type": self.sigma().matrix().format_set(c.ty),
        })
    }

    /// Every boundary component carries a single color.
    pub fn check_monochromatic(&self) -> Finding {
        for comp in &self.one.components {
            let c0 = self.vertex_color[comp.rep];
            if let Some(&v) = comp.vertices.iter().find(|&&v| self.vertex_color[v] != c0) {
                return Err(Counterexample::new(
                    "boundary component with two colors",
                    json!({"rep": self.word(comp.rep), "vertex": self.word(v)}),
                ));
            }
        }
        Ok(format!(
            "{} components, {} colors",
            self.one.components.len(),
            self.palette.len()
        ))
    }

    /// Equal colors have equal parity.
    pub fn check_parity(&self) -> Finding {
        let mut seen: HashMap<usize, (Parity, usize)> = HashMap::new();
        for v in 0..self.vertex_color.len() {
            let c = self.vertex_color[v];
            let p = self.vertex_parity[v];
            if let Some(&(q, w)) = seen.get(&c) {
                if q != p {
                    return Err(Counterexample::new(
                        "one color on an even and an odd vertex",
                        json!({"even": self.word(if p == Parity::Even { v } else { w }),
                               "odd": self.word(if p == Parity::Even { w } else { v })}),
                    ));
                }
            } else {
                seen.insert(c, (p, v));
            }
        }
        Ok(format!("{} colors over {} vertices", seen.len(), self.vertex_color.len()))
    }

    /// Distinct collars of equal color are disjoint.
    pub fn check_same_color_disjoint(&self) -> Finding {
        let mut pairs = 0usize;
        for i in 0..self.sigma().len() {
            let cs = &self.cell_collars[i];
            pairs += cs.len().saturating_sub(1);
            for (a, &x) in cs.iter().enumerate() {
                for &y in &cs[a + 1..] {
                    if self.collar_color(x) == self.collar_color(y) {
                        return Err(Counterexample::new(
                            "collars of one color share a cell",
                            json!({"cell": self.cell_json(i),
                                   "collars": [self.word(self.one.components[x].rep),
                                               self.word(self.one.components[y].rep)]}),
                        ));
                    }
                }
            }
        }
        Ok(format!("{} collars, {pairs} incidences between distinct collars", self.collars.len()))
    }

    /// A cell carrying two differently colored even vertices has type
    /// containing `{s,t}` for exactly one `s ∈ S′`, and the transition
    /// between the two vertices is `t`-even.
    pub fn check_even_pairs(&self, sys: &CoxeterSystem) -> Result<Finding> {
        let t = self.one.t;
        let sigma = self.sigma();
        let mut tables: HashMap<GenSet, (Ball, Vec<usize>)> = HashMap::new();
        let mut checked = 0usize;
        for i in 0..sigma.len() {
            if !self.one.ruin.omega[i] || !sigma.ty(i).contains(t) {
                continue;
            }
            let ty = sigma.ty(i);
            // vertices of the cell as rep·a, a ∈ W_V
            let rep = sigma.cell(i).rep;
            let entry = match tables.entry(ty) {
                std::collections::hash_map::Entry::Occupied(e) => e.into_mut(),
                std::collections::hash_map::Entry::Vacant(e) => {
                    let table = Ball::build(sys, ty, usize::MAX, DEFAULT_BALL_CAP)?;
                    let inv = (0..table.len())
                        .map(|id| {
                            let rev: Vec<usize> = table.element(id).word().iter().rev().copied().collect();
                            table.walk(0, &rev).expect("finite table")
                        })
                        .collect();
                    e.insert((table, inv))
                }
            };
            let (table, inv) = (&entry.0, &entry.1);
            let evens: Vec<(usize, usize)> = (0..table.len())
                .filter_map(|a| {
                    let v = sigma.ball().walk(rep, table.element(a).word())?;
                    (self.vertex_parity[v] == Parity::Even).then_some((a, v))
                })
                .collect();
            let colors: BTreeSet<usize> = evens.iter().map(|&(_, v)| self.vertex_color[v]).collect();
            if colors.len() < 2 {
                continue;
            }
            let hits: Vec<usize> = self.s_prime.iter().copied().filter(|&s| ty.contains(s)).collect();
            if hits.len() != 1 {
                return Ok(Err(Counterexample::new(
                    "cell with two even colors and no unique s in S'",
                    json!({"cell": self.cell_json(i), "s_candidates": hits.len()}),
                )));
            }
            let s = hits[0];
            for (x, &(a, va)) in evens.iter().enumerate() {
                for &(b, vb) in &evens[x + 1..] {
                    if self.vertex_color[va] == self.vertex_color[vb] {
                        continue;
                    }
                    let w = table.element(table.walk(inv[a], table.element(b).word()).expect("finite"));
                    checked += 1;
                    let t_even = w.support().contains(s) && w.count(t) >= 2 && w.count(t) % 2 == 0;
                    if !t_even {
                        return Ok(Err(Counterexample::new(
                            "transition between differently colored even vertices is not t-even",
                            json!({"cell": self.cell_json(i), "from": self.word(va), "to": self.word(vb),
                                   "transition": w.display_with(self.names())}),
                        )));
                    }
                }
            }
        }
        Ok(Ok(format!("{checked} even transitions checked")))
    }

    /// The `t`-even elements of `W_{s,t}` with a reduced expression ending
    /// in `t`, as ball ids.
    pub fn t_even_letters(&self, s: usize) -> Vec<usize> {
        let t = self.one.t;
        let ball = self.sigma().ball();
        let st = GenSet::from_iter([s, t]);
        (0..ball.len())
            .filter(|&id| {
                let w = ball.element(id);
                w.support() == st
                    && w.count(t) % 2 == 0
                    && ball.right(id, t).is_some_and(|p| ball.length(p) < ball.length(id))
            })
            .collect()
    }

    /// `D_0 ∩ D_u = W′K′` for every `s ∈ S′` and every admissible `u`.
    pub fn check_w_prime_orbit(&self) -> Finding {
        let t = self.one.t;
        let sigma = self.sigma();
        let d0 = self.one.component_of(0).expect("identity is a boundary vertex");
        let mut cases = 0usize;
        for &s in &self.s_prime {
            let ust = self.u_st(s);
            let allowed = ust.with(s).with(t);
            let st = GenSet::from_iter([s, t]);
            let expected: Vec<usize> = (0..sigma.len())
                .filter(|&i| {
                    self.one.ruin.omega[i]
                        && st.is_subset(sigma.ty(i))
                        && sigma.rep(i).support().is_subset(allowed)
                })
                .collect();
            for u in self.t_even_letters(s) {
                let du = self.one.component_of(u).expect("boundary vertex");
                let got = self.intersection(&[d0], &[du]);
                cases += 1;
                if got != expected {
                    let extra = got.iter().find(|i| !expected.contains(i));
                    let missing = expected.iter().find(|i| !got.contains(i));
                    return Err(Counterexample::new(
                        "collar intersection differs from the W'-orbit of K'",
                        json!({"s": self.names()[s], "u": self.word(u),
                               "extra": extra.map(|&i| self.cell_json(i)),
                               "missing": missing.map(|&i| self.cell_json(i))}),
                    ));
                }
            }
        }
        if cases == 0 {
            return Ok("vacuous: no t-even u in the ball".into());
        }
        Ok(format!("{cases} intersections D0∩Du match W'K'"))
    }

    /// Verifies that `piece` is the image of the cells of `target` with
    /// `ℓ(rep) + ℓ(w_V) ≤ budget` under `qW_V ↦ base·q W_{V ∪ shift}`,
    /// and that the map is bijective and preserves types and covers.
    fn certify_translate(
        &self,
        base: usize,
        shift: GenSet,
        piece: &[usize],
        target: &CellPoset,
        budget: isize,
    ) -> std::result::Result<IsoCertificate, Counterexample> {
        let sigma = self.sigma();
        let piece_set: BTreeSet<usize> = piece.iter().copied().collect();
        let mut image: HashMap<usize, usize> = HashMap::new();
        for j in 0..target.len() {
            let c = target.cell(j);
            let need = target.ball().length(c.rep) + target.w0_length(c.ty).unwrap_or(0);
            if need as isize > budget {
                continue;
            }
            let q = target.ball().element(c.rep);
            let z = sigma.ball().walk(base, q.word());
            let cell = z.and_then(|z| sigma.find(z, c.ty.union(shift)));
            match cell {
                Some(i) if piece_set.contains(&i) => {
                    image.insert(j, i);
                }
                _ => {
                    return Err(Counterexample::new(
                        "target cell has no image in the piece",
                        json!({"base": self.word(base),
                               "target_rep": q.display_with(self.names()),
                               "target_type": sigma.matrix().format_set(c.ty)}),
                    ))
                }
            }
        }
        let hit: BTreeSet<usize> = image.values().copied().collect();
        if hit.len() != image.len() || hit != piece_set {
            let missing = piece_set.difference(&hit).next().copied();
            return Err(Counterexample::new(
                "map onto the piece is not a bijection",
                json!({"base": self.word(base), "piece": piece.len(), "image": hit.len(),
                       "missing": missing.map(|i| self.cell_json(i))}),
            ));
        }
        let mut covers = 0usize;
        for (&j, &i) in &image {
            let want: BTreeSet<usize> = target.faces(j).iter().map(|f| image[f]).collect();
            let have: BTreeSet<usize> = sigma
                .faces(i)
                .iter()
                .copied()
                .filter(|f| piece_set.contains(f))
                .collect();
            if want != have {
                return Err(Counterexample::new(
                    "map does not preserve covers",
                    json!({"cell": self.cell_json(i)}),
                ));
            }
            covers += want.len();
        }
        Ok(IsoCertificate {
            cells: image.len(),
            covers,
            target_radius: budget,
        })
    }

    /// `Σ(W′,U_st)` at the radius needed to compare with pieces.
    fn w_prime_complex(&self, sys: &CoxeterSystem, s: usize, radius: usize) -> Result<CellPoset> {
        CellPoset::build(sys, self.u_st(s), radius)
    }

    fn m_st(&self, s: usize) -> usize {
        self.sigma()
            .matrix()
            .label(s, self.one.t)
            .finite()
            .expect("s in S'") as usize
    }

    /// The cell-poset isomorphism `D_0 ∩ D_u ≅ Σ(W′,U_st)` truncated at
    /// `R − m_st`.
    pub fn certify_w_prime_complex(&self, sys: &CoxeterSystem) -> Result<Finding> {
        let certs = match self.w_prime_certificates(sys)? {
            Ok(c) => c,
            Err(ce) => return Ok(Err(ce)),
        };
        if certs.is_empty() {
            return Ok(Ok("vacuous: no t-even u in the ball".into()));
        }
        let notes: Vec<String> = certs
            .iter()
            .map(|c| format!("s={} u={}: {} cells, {} covers", self.names()[c.s], self.word(c.u), c.iso.cells, c.iso.covers))
            .collect();
        Ok(Ok(notes.join("; ")))
    }

    /// One certificate per `s ∈ S′` and admissible `u` in the ball.
    pub fn w_prime_certificates(
        &self,
        sys: &CoxeterSystem,
    ) -> Result<std::result::Result<Vec<PieceCertificate>, Counterexample>> {
        let d0 = self.one.component_of(0).expect("identity");
        let radius = self.sigma().radius();
        let mut out = Vec::new();
        for &s in &self.s_prime {
            let m_st = self.m_st(s);
            if m_st > radius {
                continue;
            }
            let target = self.w_prime_complex(sys, s, radius - m_st)?;
            for u in self.t_even_letters(s) {
                let du = self.one.component_of(u).expect("boundary vertex");
                let piece = self.intersection(&[d0], &[du]);
                let st = GenSet::from_iter([s, self.one.t]);
                match self.certify_translate(0, st, &piece, &target, (radius - m_st) as isize) {
                    Ok(iso) => out.push(PieceCertificate { s, u, piece, iso }),
                    Err(ce) => return Ok(Err(ce)),
                }
            }
        }
        Ok(Ok(out))
    }

    /// Pieces `D ∩ D′` for pairs of collars of distinct even colors.
    pub fn even_pieces(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut pieces: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for i in 0..self.sigma().len() {
            let evens: Vec<usize> = self.cell_collars[i]
                .iter()
                .copied()
                .filter(|&c| self.collar_parity(c) == Parity::Even)
                .collect();
            for (a, &x) in evens.iter().enumerate() {
                for &y in &evens[a + 1..] {
                    if self.collar_color(x) != self.collar_color(y) {
                        pieces.entry((x, y)).or_default().push(i);
                    }
                }
            }
        }
        pieces
    }

    /// Each piece of `F_c ∩ F_{c′}` for even `c ≠ c′` is a translate of
    /// `W′K′` isomorphic to a truncation of `Σ(W′,U_st)`, and pieces are
    /// pairwise disjoint and share no faces.
    pub fn check_even_intersections(&self, sys: &CoxeterSystem) -> Result<Finding> {
        let t = self.one.t;
        let sigma = self.sigma();
        let radius = sigma.radius();
        let pieces = self.even_pieces();
        let mut targets: HashMap<usize, CellPoset> = HashMap::new();
        let mut piece_of: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        for (&(x, y), cells) in &pieces {
            let ty = sigma.ty(cells[0]);
            let hits: Vec<usize> = self.s_prime.iter().copied().filter(|&s| ty.contains(s)).collect();
            if hits.len() != 1 || !ty.contains(t) {
                return Ok(Err(Counterexample::new(
                    "piece cell without a unique s in S'",
                    json!({"cell": self.cell_json(cells[0])}),
                )));
            }
            let s = hits[0];
            if let Some(&bad) = cells
                .iter()
                .find(|&&i| !sigma.ty(i).contains(s) || !sigma.ty(i).contains(t))
            {
                return Ok(Err(Counterexample::new(
                    "piece mixes cells of different s",
                    json!({"cell": self.cell_json(bad)}),
                )));
            }
            let allowed = self.u_st(s).with(s).with(t);
            let v = sigma
                .vertices(cells[0])
                .into_iter()
                .find(|&v| self.one.component_of(v) == Some(x))
                .expect("cell meets its collar");
            let base = sigma.ball().coset_min(v, allowed);
            let m_st = self.m_st(s);
            let budget = radius as isize - m_st as isize - sigma.ball().length(base) as isize;
            if !targets.contains_key(&s) {
                let r = radius.saturating_sub(m_st);
                targets.insert(s, self.w_prime_complex(sys, s, r)?);
            }
            if let Err(ce) = self.certify_translate(base, GenSet::from_iter([s, t]), cells, &targets[&s], budget) {
                return Ok(Err(ce));
            }
            for &i in cells {
                piece_of.entry(i).or_default().push((x, y));
            }
        }
        // distinct pieces of one color pair neither share cells nor touch
        let color_pair = |(x, y): (usize, usize)| {
            let (a, b) = (self.collar_color(x), self.collar_color(y));
            (a.min(b), a.max(b))
        };
        for (&i, owners) in &piece_of {
            for (a, &p) in owners.iter().enumerate() {
                for &q in &owners[a + 1..] {
                    if color_pair(p) == color_pair(q) {
                        return Ok(Err(Counterexample::new(
                            "two pieces of one color pair share a cell",
                            json!({"cell": self.cell_json(i)}),
                        )));
                    }
                }
            }
            for &f in sigma.faces(i) {
                if let Some(fo) = piece_of.get(&f) {
                    for &p in owners {
                        if fo.iter().any(|&q| q != p && color_pair(q) == color_pair(p)) {
                            return Ok(Err(Counterexample::new(
                                "two pieces of one color pair touch",
                                json!({"cell": self.cell_json(i), "face": self.cell_json(f)}),
                            )));
                        }
                    }
                }
            }
        }
        Ok(Ok(format!("{} pieces certified", pieces.len())))
    }

    /// If `D_e ∩ D_i` and `D_e ∩ D_k` share a cell they coincide.
    pub fn check_multi_even(&self) -> Finding {
        let pieces = self.even_pieces();
        let mut by_collar: HashMap<usize, Vec<(usize, &Vec<usize>)>> = HashMap::new();
        for ((x, y), cells) in &pieces {
            by_collar.entry(*x).or_default().push((*y, cells));
            by_collar.entry(*y).or_default().push((*x, cells));
        }
        let mut overlaps = 0usize;
        let mut keys: Vec<&usize> = by_collar.keys().collect();
        keys.sort();
        for e in keys {
            let list = &by_collar[e];
            for (a, (i, pi)) in list.iter().enumerate() {
                for (k, pk) in &list[a + 1..] {
                    let share = pi.iter().any(|c| pk.binary_search(c).is_ok());
                    if share {
                        overlaps += 1;
                        if pi != pk {
                            return Err(Counterexample::new(
                                "overlapping intersections with a common even collar differ",
                                json!({"e": self.word(self.one.components[*e].rep),
                                       "i": self.word(self.one.components[*i].rep),
                                       "k": self.word(self.one.components[*k].rep)}),
                            ));
                        }
                    }
                }
            }
        }
        Ok(format!("{} pieces, {overlaps} overlapping pairs, all equal", pieces.len()))
    }

    /// For each odd collar `D`, `D ∩ F_E = ∂_in(D)`; with `others` also
    /// counting all collars of other colors.
    pub fn check_odd_inner(&self, others: bool) -> Finding {
        let t = self.one.t;
        let sigma = self.sigma();
        let mut odd_cells = 0usize;
        for i in 0..sigma.len() {
            let cs = &self.cell_collars[i];
            for &d in cs {
                if self.collar_parity(d) != Parity::Odd {
                    continue;
                }
                odd_cells += 1;
                let met = cs.iter().any(|&c| {
                    c != d
                        && if others {
                            self.collar_color(c) != self.collar_color(d)
                        } else {
                            self.collar_parity(c) == Parity::Even
                        }
                });
                if met != sigma.ty(i).contains(t) {
                    return Err(Counterexample::new(
                        if met {
                            "odd collar meets other collars outside its inner boundary"
                        } else {
                            "inner boundary cell of an odd collar lies in no other collar"
                        },
                        json!({"cell": self.cell_json(i), "collar": self.word(self.one.components[d].rep)}),
                    ));
                }
            }
        }
        Ok(format!("{odd_cells} odd collar cells checked"))
    }

    /// Each component of `∂Ω` matches the cells of `Σ(W_{U−t},U−t)` via
    /// `qW_V ↦ xqW_V` for the component's reduced representative `x`.
    pub fn check_odd_components(&self, sys: &CoxeterSystem) -> Result<Finding> {
        let t = self.one.t;
        let sigma = self.sigma();
        let radius = sigma.radius();
        let inner = self.one.u.without(t);
        let target = CellPoset::build(sys, inner, radius)?;
        let mut by_comp: Vec<Vec<usize>> = vec![Vec::new(); self.one.components.len()];
        for i in 0..sigma.len() {
            if self.one.ruin.boundary[i] {
                let v = sigma.cell(i).rep;
                if let Some(c) = self.one.component_of(v) {
                    by_comp[c].push(i);
                }
            }
        }
        let mut cells = 0usize;
        for (k, comp) in self.one.components.iter().enumerate() {
            let budget = radius as isize - sigma.ball().length(comp.rep) as isize;
            match self.certify_translate(comp.rep, GenSet::EMPTY, &by_comp[k], &target, budget) {
                Ok(cert) => cells += cert.cells,
                Err(ce) => return Ok(Err(ce)),
            }
        }
        Ok(Ok(format!(
            "{} components, {cells} boundary cells matched",
            self.one.components.len()
        )))
    }

    /// Chambers of `Ω` as a graph: vertices labelled by color and parity,
    /// edges the 1-cells.
    pub fn to_dot(&self) -> String {
        let sigma = self.sigma();
        let mut out = String::from("graph ruin {\n");
        for i in 0..sigma.len() {
            if !self.one.ruin.omega[i] {
                continue;
            }
            let c = sigma.cell(i);
            if c.ty.is_empty() {
                let v = c.rep;
                let shade = if self.vertex_parity[v] == Parity::Even { "gray" } else { "white" };
                let _ = writeln!(
                    out,
                    "  v{v} [label=\"{}\", color_id={}, style=filled, fillcolor={shade}];",
                    self.word(v),
                    self.vertex_color[v]
                );
            } else if c.ty.len() == 1 {
                let s = c.ty.max().expect("edge");
                let w = sigma.ball().right(c.rep, s).expect("edge present");
                let _ = writeln!(out, "  v{} -- v{w} [label=\"{}\"];", c.rep, self.names()[s]);
            }
        }
        out.push_str("}\n");
        out
    }
}
