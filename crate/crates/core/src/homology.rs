//! Exact rational homology of simplicial complexes and order complexes of
//! finite posets, relative to a subcomplex; Euler characteristics and the
//! orbihedral Euler characteristic of a Coxeter system.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{CheckedMul, CheckedSub, One, Signed, Zero};
use serde::Serialize;

use crate::complex::{build_ruin, CellPoset};
use crate::error::{CoxeterError, Result};
use crate::nerve::SimplicialComplex;
use crate::system::{CoxeterMatrix, GenSet};

/// Default cap on the number of chains materialized for one complex.
pub const DEFAULT_CHAIN_CAP: usize = 4_000_000;

type SparseRow = Vec<(usize, i64)>;

/// A finite poset given by its strict down-sets.
#[derive(Clone, Debug, Default)]
pub struct Poset {
    below: Vec<Vec<usize>>,
}

impl Poset {
    /// Builds the order from lower covers (or any generating relation).
    pub fn from_covers(covers: &[Vec<usize>]) -> Self {
        let n = covers.len();
        let mut below: Vec<Option<Vec<usize>>> = vec![None; n];
        fn close(i: usize, covers: &[Vec<usize>], below: &mut Vec<Option<Vec<usize>>>) {
            if below[i].is_some() {
                return;
            }
            let mut acc: Vec<usize> = Vec::new();
            for &c in &covers[i] {
                close(c, covers, below);
                acc.push(c);
                acc.extend(below[c].as_ref().expect("closed").iter().copied());
            }
            acc.sort_unstable();
            acc.dedup();
            below[i] = Some(acc);
        }
        for i in 0..n {
            close(i, covers, &mut below);
        }
        Poset {
            below: below.into_iter().map(|b| b.expect("closed")).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.below.len()
    }

    pub fn is_empty(&self) -> bool {
        self.below.is_empty()
    }

    /// Elements strictly below `i`, sorted.
    pub fn below(&self, i: usize) -> &[usize] {
        &self.below[i]
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.below[b].binary_search(&a).is_ok()
    }

    /// Whether `subset` is closed under going down.
    pub fn is_down_closed(&self, subset: &[bool]) -> bool {
        (0..self.len())
            .filter(|&i| subset[i])
            .all(|i| self.below[i].iter().all(|&j| subset[j]))
    }
}

/// A finite chain complex over `Q` with an explicit basis in every degree.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    bases: Vec<Vec<Vec<usize>>>,
    boundaries: Vec<Vec<SparseRow>>,
}

impl ChainComplex {
    fn from_bases(bases: Vec<Vec<Vec<usize>>>, keep_face: impl Fn(&[usize]) -> bool) -> Self {
        let index: Vec<HashMap<&[usize], usize>> = bases
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect())
            .collect();
        let mut boundaries = Vec::with_capacity(bases.len());
        for (k, basis) in bases.iter().enumerate() {
            let rows = basis
                .iter()
                .map(|simplex| {
                    if k == 0 {
                        return Vec::new();
                    }
                    let mut row: SparseRow = Vec::with_capacity(simplex.len());
                    for i in 0..simplex.len() {
                        let mut face = simplex.clone();
                        face.remove(i);
                        if !keep_face(&face) {
                            continue;
                        }
                        let col = index[k - 1][face.as_slice()];
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        row.push((col, sign));
                    }
                    row.sort_unstable();
                    row
                })
                .collect();
            boundaries.push(rows);
        }
        drop(index);
        ChainComplex { bases, boundaries }
    }

    /// Simplicial chains of `x` relative to `a`.
    pub fn simplicial(x: &SimplicialComplex, a: Option<&SimplicialComplex>) -> Result<Self> {
        if let Some(a) = a {
            if let Some(bad) = a.simplices().find(|s| !x.contains(s)) {
                return Err(CoxeterError::NotClosed(format!(
                    "{bad:?} lies in the subcomplex but not in the complex"
                )));
            }
        }
        let in_a = |s: &[usize]| a.is_some_and(|a| a.contains(s));
        let top = x.dimension();
        let mut bases: Vec<Vec<Vec<usize>>> = Vec::new();
        if top >= 0 {
            bases = vec![Vec::new(); top as usize + 1];
            for s in x.simplices() {
                if !in_a(s) {
                    bases[s.len() - 1].push(s.to_vec());
                }
            }
            for b in &mut bases {
                b.sort();
            }
        }
        Ok(Self::from_bases(bases, |f| !f.is_empty() && !in_a(f)))
    }

    /// Chains of the order complex of `x ⊆ poset` relative to `a ⊆ x`.
    ///
    /// A chain is stored bottom-to-top; it lies in `a`'s order complex iff
    /// its top does.
    pub fn order_complex(poset: &Poset, x: &[bool], a: &[bool], cap: usize) -> Result<Self> {
        let n = poset.len();
        if x.len() != n || a.len() != n {
            return Err(CoxeterError::NotClosed("subset masks have the wrong length".into()));
        }
        if let Some(i) = (0..n).find(|&i| a[i] && !x[i]) {
            return Err(CoxeterError::NotClosed(format!("element {i} of the subcomplex is outside the complex")));
        }
        if !poset.is_down_closed(x) {
            return Err(CoxeterError::NotClosed("complex is not closed under faces".into()));
        }
        if !poset.is_down_closed(a) {
            return Err(CoxeterError::NotClosed("subcomplex is not closed under faces".into()));
        }
        let mut bases: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut total = 0usize;
        let mut stack: Vec<usize> = Vec::new();
        fn extend(
            poset: &Poset,
            x: &[bool],
            stack: &mut Vec<usize>,
            bases: &mut Vec<Vec<Vec<usize>>>,
            total: &mut usize,
            cap: usize,
        ) -> Result<()> {
            let k = stack.len() - 1;
            if bases.len() <= k {
                bases.resize(k + 1, Vec::new());
            }
            bases[k].push(stack.iter().rev().copied().collect());
            *total += 1;
            if *total > cap {
                return Err(CoxeterError::ExplosionGuard {
                    what: "order complex chains".into(),
                    cap,
                });
            }
            let last = *stack.last().expect("nonempty");
            for &d in poset.below(last) {
                if x[d] {
                    stack.push(d);
                    extend(poset, x, stack, bases, total, cap)?;
                    stack.pop();
                }
            }
            Ok(())
        }
        for top in 0..n {
            if x[top] && !a[top] {
                stack.push(top);
                extend(poset, x, &mut stack, &mut bases, &mut total, cap)?;
                stack.pop();
            }
        }
        for b in &mut bases {
            b.sort();
        }
        Ok(Self::from_bases(bases, |f| {
            !f.is_empty() && !a[*f.last().expect("nonempty")]
        }))
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.bases.len().checked_sub(1)
    }

    pub fn basis(&self, k: usize) -> &[Vec<usize>] {
        self.bases.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn chain_counts(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// Checks `∂∘∂ = 0` in every degree.
    pub fn boundary_squared_vanishes(&self) -> bool {
        for k in 2..self.boundaries.len() {
            for row in &self.boundaries[k] {
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for &(face, c) in row {
                    for &(ff, d) in &self.boundaries[k - 1][face] {
                        *acc.entry(ff).or_default() += c * d;
                    }
                }
                if acc.values().any(|&v| v != 0) {
                    return false;
                }
            }
        }
        true
    }

    /// Rank of `∂_k : C_k → C_{k-1}`.
    pub fn boundary_rank(&self, k: usize) -> usize {
        match self.boundaries.get(k) {
            Some(rows) if k > 0 => sparse_rank(rows),
            _ => 0,
        }
    }

    /// Betti numbers over `Q`.
    pub fn betti(&self) -> BettiTable {
        let top = self.bases.len();
        let ranks: Vec<usize> = (0..=top).map(|k| self.boundary_rank(k)).collect();
        let betti: Vec<usize> = (0..top)
            .map(|k| self.bases[k].len() - ranks[k] - ranks[k + 1])
            .collect();
        let euler = betti
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        BettiTable {
            betti,
            euler,
            chain_counts: self.chain_counts(),
        }
    }
}

/// Rational Betti numbers of a complex or pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub betti: Vec<usize>,
    pub euler: i64,
    pub chain_counts: Vec<usize>,
}

impl BettiTable {
    pub fn get(&self, k: usize) -> usize {
        self.betti.get(k).copied().unwrap_or(0)
    }

    /// `Σ (−1)^i · #chains_i`, which must equal `euler`.
    pub fn chain_euler(&self) -> i64 {
        self.chain_counts
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Betti numbers with trailing zeros removed.
    pub fn trimmed(&self) -> Vec<usize> {
        let mut b = self.betti.clone();
        while b.last() == Some(&0) {
            b.pop();
        }
        b
    }
}

/// Homology of a simplicial complex, absolute or relative.
pub fn simplicial_homology(
    x: &SimplicialComplex,
    a: Option<&SimplicialComplex>,
) -> Result<BettiTable> {
    let cc = ChainComplex::simplicial(x, a)?;
    Ok(cc.betti())
}

/// Reduced Betti numbers of a simplicial complex, indexed from degree 0.
/// The empty complex has reduced homology `Q` in degree −1, reported as
/// `None`.
pub fn reduced_betti(x: &SimplicialComplex) -> Option<Vec<usize>> {
    if x.is_empty() {
        return None;
    }
    let mut b = simplicial_homology(x, None).expect("absolute homology").betti;
    b[0] -= 1;
    Some(b)
}

/// Homology of the order complex of `x` relative to `a`.
pub fn order_homology(poset: &Poset, x: &[bool], a: &[bool]) -> Result<BettiTable> {
    Ok(ChainComplex::order_complex(poset, x, a, DEFAULT_CHAIN_CAP)?.betti())
}

/// `χ^orb = Σ_{T spherical} (−1)^{|T|} / |W_T|`.
pub fn chi_orb(m: &CoxeterMatrix) -> Result<BigRational> {
    chi_orb_over(m, m.all())
}

/// The same sum restricted to spherical subsets of `u`.
pub fn chi_orb_over(m: &CoxeterMatrix, u: GenSet) -> Result<BigRational> {
    let poset = m.spherical_poset()?;
    let mut sum = BigRational::zero();
    for s in poset.iter().filter(|s| s.members.is_subset(u)) {
        let term = BigRational::new(BigInt::one(), BigInt::from(s.group_order.clone()));
        if s.members.len() % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(sum)
}

/// Order of a finite group as a rational, for reports.
pub fn order_as_rational(order: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(order.clone()))
}

fn sparse_rank(rows: &[SparseRow]) -> usize {
    let small: Vec<Vec<(usize, i64)>> = rows.to_vec();
    if let Some(r) = rank_generic::<i64>(small) {
        return r;
    }
    let big: Vec<Vec<(usize, BigInt)>> = rows
        .iter()
        .map(|r| r.iter().map(|&(c, v)| (c, BigInt::from(v))).collect())
        .collect();
    rank_generic::<BigInt>(big).expect("arbitrary precision never overflows")
}

/// Fraction-free sparse row reduction; `None` on coefficient overflow.
fn rank_generic<T>(rows: Vec<Vec<(usize, T)>>) -> Option<usize>
where
    T: Clone + Integer + Signed + CheckedMul + CheckedSub,
{
    let mut pivots: HashMap<usize, Vec<(usize, T)>> = HashMap::new();
    let mut order: Vec<Vec<(usize, T)>> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    // short rows first keeps fill-in down
    order.sort_by_key(|r| r.len());
    for mut row in order {
        loop {
            let Some((lead, a)) = row.first().cloned() else {
                break;
            };
            match pivots.get(&lead) {
                None => {
                    normalize(&mut row);
                    pivots.insert(lead, row);
                    break;
                }
                Some(p) => {
                    let b = p[0].1.clone();
                    let g = a.gcd(&b);
                    let (fa, fb) = (a / g.clone(), b / g);
                    row = combine(&row, &fb, p, &fa)?;
                    normalize(&mut row);
                }
            }
        }
    }
    Some(pivots.len())
}

/// `fr·row − fp·pivot`, dropping zeros.
fn combine<T>(row: &[(usize, T)], fr: &T, pivot: &[(usize, T)], fp: &T) -> Option<Vec<(usize, T)>>
where
    T: Clone + Integer + Signed + CheckedMul + CheckedSub,
{
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        let (col, val) = if ci < cj {
            i += 1;
            (ci, fr.checked_mul(&row[i - 1].1)?)
        } else if cj < ci {
            j += 1;
            (cj, T::zero().checked_sub(&fp.checked_mul(&pivot[j - 1].1)?)?)
        } else {
            i += 1;
            j += 1;
            let x = fr.checked_mul(&row[i - 1].1)?;
            let y = fp.checked_mul(&pivot[j - 1].1)?;
            (ci, x.checked_sub(&y)?)
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    Some(out)
}

fn normalize<T>(row: &mut [(usize, T)])
where
    T: Clone + Integer + Signed,
{
    let Some(first) = row.first() else {
        return;
    };
    let mut g = first.1.abs();
    for (_, v) in row.iter().skip(1) {
        if g.is_one() {
            break;
        }
        g = g.gcd(v);
    }
    let flip = row[0].1.is_negative();
    if g.is_one() && !flip {
        return;
    }
    for (_, v) in row.iter_mut() {
        let mut q = v.clone() / g.clone();
        if flip {
            q = -q;
        }
        *v = q;
    }
}

/// One excision identity: two pairs whose relative chain complexes should
/// coincide under the identity on cells.
#[derive(Clone, Debug, Serialize)]
pub struct ExcisionPair {
    pub left: String,
    pub right: String,
    /// Relative chain counts per degree, equal on both sides when it holds.
    pub chains: Vec<usize>,
    pub bases_equal: bool,
    pub betti: BettiTable,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExcisionReport {
    pub first: ExcisionPair,
    pub second: Option<ExcisionPair>,
    /// Betti tables of `(Σ(V),Ω̂′)`, `(Σ(V),Ω̂)` and `(Ω̂,Ω̂′)` for the triple.
    pub triple: Option<[BettiTable; 3]>,
    /// `χ(X,B) = χ(X,A) + χ(A,B)` and each term of the long exact
    /// sequence is bounded by its two neighbours.
    pub sequence_consistent: bool,
    /// The ruin pairs the triple terms excise to have the same Betti numbers.
    pub ruins_match: bool,
    /// Whether `sigma` is the whole finite complex.
    pub complete: bool,
}

impl ExcisionReport {
    pub fn holds(&self) -> bool {
        self.first.bases_equal
            && self.second.as_ref().is_none_or(|p| p.bases_equal)
            && self.sequence_consistent
            && self.ruins_match
    }
}

fn compare_pairs(
    poset: &Poset,
    left: (&[bool], &[bool]),
    right: (&[bool], &[bool]),
    names: (String, String),
) -> Result<ExcisionPair> {
    let a = ChainComplex::order_complex(poset, left.0, left.1, DEFAULT_CHAIN_CAP)?;
    let b = ChainComplex::order_complex(poset, right.0, right.1, DEFAULT_CHAIN_CAP)?;
    let top = a.bases.len().max(b.bases.len());
    let bases_equal = (0..top).all(|k| a.basis(k) == b.basis(k));
    let betti = a.betti();
    Ok(ExcisionPair {
        left: names.0,
        right: names.1,
        chains: a.chain_counts(),
        bases_equal: bases_equal && betti == b.betti(),
        betti,
    })
}

/// Checks the excisions `C(Ω(V,T),∂Ω) ≅ C(Σ(V),Ω̂(V,T))` and, for `s ∈ T`,
/// `C(Σ(V−s),Ω̂(V−s,T−s)) ≅ C(Ω̂(V,T),Ω̂(V,T−s))`, then the long exact
/// sequence of the triple `(Σ(V),Ω̂(V,T),Ω̂(V,T−s))` by ranks.
pub fn excision_check(
    sigma: &CellPoset,
    v: GenSet,
    t: GenSet,
    s: Option<usize>,
) -> Result<ExcisionReport> {
    let m = sigma.matrix();
    if !v.is_subset(sigma.gens()) || !t.is_subset(v) {
        return Err(CoxeterError::TypeMismatch {
            inner: m.format_set(t),
            outer: m.format_set(v),
        });
    }
    if !m.is_spherical(t) {
        return Err(CoxeterError::TruncationUnsafe(format!(
            "{} is not spherical",
            m.format_set(t)
        )));
    }
    let poset = sigma.poset();
    let fmt = |x: GenSet| m.format_set(x);
    let full = sigma.sigma_mask(v);
    let ruin = build_ruin(sigma, v, t)?;
    let first = compare_pairs(
        &poset,
        (&ruin.omega, &ruin.boundary),
        (&full, &ruin.hat),
        (
            format!("(Ω({},{}),∂Ω)", fmt(v), fmt(t)),
            format!("(Σ({}),Ω̂({},{}))", fmt(v), fmt(v), fmt(t)),
        ),
    )?;
    let complete = ball_is_group(sigma);
    let mut report = ExcisionReport {
        first,
        second: None,
        triple: None,
        sequence_consistent: true,
        ruins_match: true,
        complete,
    };
    let Some(s) = s else { return Ok(report) };
    if !t.contains(s) {
        return Err(CoxeterError::TypeMismatch {
            inner: m.name(s).to_string(),
            outer: m.format_set(t),
        });
    }
    let t1 = t.without(s);
    let v1 = v.without(s);
    let hat1 = build_ruin(sigma, v, t1)?.hat;
    let small = build_ruin(sigma, v1, t1)?;
    report.second = Some(compare_pairs(
        &poset,
        (&sigma.sigma_mask(v1), &small.hat),
        (&ruin.hat, &hat1),
        (
            format!("(Σ({}),Ω̂({},{}))", fmt(v1), fmt(v1), fmt(t1)),
            format!("(Ω̂({},{}),Ω̂({},{}))", fmt(v), fmt(t), fmt(v), fmt(t1)),
        ),
    )?);
    let xb = order_homology(&poset, &full, &hat1)?;
    let xa = order_homology(&poset, &full, &ruin.hat)?;
    let ab = order_homology(&poset, &ruin.hat, &hat1)?;
    report.sequence_consistent = exact_by_ranks(&ab, &xb, &xa);
    let mid = build_ruin(sigma, v, t1)?;
    let r_small = order_homology(&poset, &small.omega, &small.boundary)?;
    let r_mid = order_homology(&poset, &mid.omega, &mid.boundary)?;
    let r_top = order_homology(&poset, &ruin.omega, &ruin.boundary)?;
    report.ruins_match =
        r_small.trimmed() == ab.trimmed() && r_mid.trimmed() == xb.trimmed() && r_top.trimmed() == xa.trimmed();
    report.triple = Some([xb, xa, ab]);
    Ok(report)
}

/// The ball is closed under right multiplication, so it is the whole group
/// and every cell of `Σ` is present.
fn ball_is_group(sigma: &CellPoset) -> bool {
    let ball = sigma.ball();
    (0..ball.len()).all(|id| sigma.gens().iter().all(|g| ball.right(id, g).is_some()))
}

/// For `… → H_i(A,B) → H_i(X,B) → H_i(X,A) → H_{i−1}(A,B) → …`: the Euler
/// characteristics add, and every term is at most the sum of its
/// neighbours.
pub fn exact_by_ranks(ab: &BettiTable, xb: &BettiTable, xa: &BettiTable) -> bool {
    if xb.euler != xa.euler + ab.euler {
        return false;
    }
    let top = ab.betti.len().max(xb.betti.len()).max(xa.betti.len()) + 1;
    (0..top).all(|i| {
        xb.get(i) <= ab.get(i) + xa.get(i)
            && xa.get(i) <= xb.get(i) + if i > 0 { ab.get(i - 1) } else { 0 }
            && ab.get(i) <= xa.get(i + 1) + xb.get(i)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn cycle4() -> SimplicialComplex {
        SimplicialComplex::from_facets([vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]])
    }

    fn octahedron() -> SimplicialComplex {
        let mut facets = Vec::new();
        for a in [0, 1] {
            for b in [2, 3] {
                for c in [4, 5] {
                    facets.push(vec![a, b, c]);
                }
            }
        }
        SimplicialComplex::from_facets(facets)
    }

    #[test]
    fn circle_and_sphere() {
        let c = simplicial_homology(&cycle4(), None).unwrap();
        assert_eq!(c.trimmed(), vec![1, 1]);
        assert_eq!(c.euler, 0);
        let o = simplicial_homology(&octahedron(), None).unwrap();
        assert_eq!(o.trimmed(), vec![1, 0, 1]);
        assert_eq!(o.euler, o.chain_euler());
        assert!(ChainComplex::simplicial(&octahedron(), None)
            .unwrap()
            .boundary_squared_vanishes());
    }

    #[test]
    fn disk_relative_to_boundary() {
        let disk = SimplicialComplex::from_facets([vec![0, 1, 2]]);
        let circle = SimplicialComplex::from_facets([vec![0, 1], vec![1, 2], vec![0, 2]]);
        let rel = simplicial_homology(&disk, Some(&circle)).unwrap();
        assert_eq!(rel.betti, vec![0, 0, 1]);
    }

    #[test]
    fn order_complex_of_face_poset_of_triangle() {
        // faces of a 2-simplex: 0,1,2 vertices; 3=01, 4=12, 5=02; 6=012
        let covers = vec![
            vec![],
            vec![],
            vec![],
            vec![0, 1],
            vec![1, 2],
            vec![0, 2],
            vec![3, 4, 5],
        ];
        let poset = Poset::from_covers(&covers);
        assert!(poset.less(0, 6));
        let all = vec![true; 7];
        let none = vec![false; 7];
        let mut bdry = vec![true; 7];
        bdry[6] = false;
        assert_eq!(order_homology(&poset, &all, &none).unwrap().trimmed(), vec![1]);
        assert_eq!(order_homology(&poset, &bdry, &none).unwrap().trimmed(), vec![1, 1]);
        let rel = order_homology(&poset, &all, &bdry).unwrap();
        assert_eq!(rel.betti, vec![0, 0, 1]);
        // barycentric subdivision of the triangle: 7 + 12 + 6 chains
        let cc = ChainComplex::order_complex(&poset, &all, &none, 100).unwrap();
        assert_eq!(cc.chain_counts(), vec![7, 12, 6]);
        assert!(cc.boundary_squared_vanishes());
    }

    #[test]
    fn order_complex_rejects_unclosed_subsets() {
        let poset = Poset::from_covers(&[vec![], vec![0]]);
        let x = vec![false, true];
        let err = ChainComplex::order_complex(&poset, &x, &[false, false], 10).unwrap_err();
        assert!(matches!(err, CoxeterError::NotClosed(_)));
        let a = vec![false, true];
        let err = ChainComplex::order_complex(&poset, &[true, true], &a, 10).unwrap_err();
        assert!(matches!(err, CoxeterError::NotClosed(_)));
    }

    #[test]
    fn chain_cap_trips() {
        let poset = Poset::from_covers(&[vec![], vec![0], vec![1]]);
        let err = ChainComplex::order_complex(&poset, &[true; 3], &[false; 3], 3).unwrap_err();
        assert!(matches!(err, CoxeterError::ExplosionGuard { .. }));
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn orbihedral_euler_characteristics() {
        assert_eq!(chi_orb(&fixtures::square_right_angled()).unwrap(), q(0, 1));
        assert_eq!(chi_orb(&fixtures::square_labels4()).unwrap(), q(-1, 2));
        let single = CoxeterMatrix::from_labels(&[vec![1]]).unwrap();
        assert_eq!(chi_orb(&single).unwrap(), q(1, 2));
        // finite groups: 1/|W| times the Euler characteristic of a point
        assert_eq!(chi_orb(&fixtures::dihedral(4)).unwrap(), q(1, 8));
    }

    #[test]
    fn orbihedral_euler_is_multiplicative_over_commuting_joins() {
        let m1 = fixtures::dihedral(4);
        let m2 = fixtures::dihedral(3);
        // join with all cross labels 2
        let mut rows = vec![vec![2i64; 4]; 4];
        for i in 0..4 {
            rows[i][i] = 1;
        }
        rows[0][1] = 4;
        rows[1][0] = 4;
        rows[2][3] = 3;
        rows[3][2] = 3;
        let joined = CoxeterMatrix::from_labels(&rows).unwrap();
        assert_eq!(
            chi_orb(&joined).unwrap(),
            chi_orb(&m1).unwrap() * chi_orb(&m2).unwrap()
        );
    }

    #[test]
    fn rank_survives_large_coefficients() {
        // rows whose elimination multiplies coefficients past i64
        let big = 3_000_000_000i64;
        let rows = vec![vec![(0, big), (1, 1)], vec![(0, big - 1), (1, 1)], vec![(0, 1), (2, big)]];
        assert_eq!(sparse_rank(&rows), 3);
        let dependent = vec![vec![(0, 2), (1, 4)], vec![(0, 3), (1, 6)]];
        assert_eq!(sparse_rank(&dependent), 1);
    }

    #[test]
    fn excision_on_dihedral_product() {
        let m = crate::fixtures::dihedral_product();
        let sys = crate::CoxeterSystem::new(m.clone());
        let sigma = CellPoset::build(&sys, m.all(), 8).unwrap();
        assert_eq!(sigma.ball().len(), 64);
        let t = GenSet::from_iter([0, 2]);
        let rep = excision_check(&sigma, m.all(), t, Some(0)).unwrap();
        assert!(rep.complete);
        assert!(rep.holds(), "{rep:?}");
        assert!(rep.first.chains.iter().sum::<usize>() > 0);
        // all of Σ is a cone on the identity vertex; so is the whole ruin
        let whole = order_homology(&sigma.poset(), &sigma.sigma_mask(m.all()), &vec![false; sigma.len()]).unwrap();
        assert_eq!(whole.trimmed(), vec![1]);
        // with T empty there is nothing to excise
        let empty = excision_check(&sigma, m.all(), GenSet::EMPTY, None).unwrap();
        assert!(empty.first.bases_equal);
        assert_eq!(empty.first.chains, ChainComplex::order_complex(&sigma.poset(), &sigma.sigma_mask(m.all()), &vec![false; sigma.len()], DEFAULT_CHAIN_CAP).unwrap().chain_counts());
    }

    #[test]
    fn exact_by_ranks_rejects_a_broken_sequence() {
        let b = |v: Vec<usize>| {
            let euler = v.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
            BettiTable { betti: v, euler, chain_counts: vec![] }
        };
        assert!(exact_by_ranks(&b(vec![0, 1]), &b(vec![0, 1]), &b(vec![0, 0])));
        assert!(!exact_by_ranks(&b(vec![0, 0]), &b(vec![0, 1]), &b(vec![0, 0])));
        assert!(!exact_by_ranks(&b(vec![0, 0]), &b(vec![0, 2, 1]), &b(vec![0, 1, 1])));
    }
}
