//! Finite simplicial complexes and the nerve of a Coxeter system.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{CoxeterError, Result};
use crate::homology::reduced_betti;
use crate::system::{CoxeterMatrix, GenSet};

/// Largest complex the sphere recognizer will look at.
pub const SPHERE_CHECK_CAP: usize = 200_000;

/// An abstract simplicial complex; simplices are sorted, nonempty vertex lists.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SimplicialComplex {
    simplices: BTreeSet<Vec<usize>>,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.facets()).finish()
    }
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Downward closure of the given faces.
    pub fn from_facets<I, F>(facets: I) -> Self
    where
        I: IntoIterator<Item = F>,
        F: Into<Vec<usize>>,
    {
        let mut simplices = BTreeSet::new();
        for f in facets {
            let mut f: Vec<usize> = f.into();
            f.sort_unstable();
            f.dedup();
            if f.is_empty() || simplices.contains(&f) {
                continue;
            }
            let n = f.len();
            for mask in 1u64..(1u64 << n) {
                let face: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                simplices.insert(face);
            }
        }
        SimplicialComplex { simplices }
    }

    /// Takes an explicit list of simplices, which must already be closed.
    pub fn from_simplices<I>(simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let mut set = BTreeSet::new();
        for mut s in simplices {
            s.sort_unstable();
            s.dedup();
            if !s.is_empty() {
                set.insert(s);
            }
        }
        for s in &set {
            if s.len() > 1 {
                for i in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(i);
                    if !set.contains(&face) {
                        return Err(CoxeterError::NotClosed(format!(
                            "{s:?} is present but its face {face:?} is not"
                        )));
                    }
                }
            }
        }
        Ok(SimplicialComplex { simplices: set })
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.simplices.contains(s)
    }

    pub fn simplices(&self) -> impl Iterator<Item = &[usize]> {
        self.simplices.iter().map(Vec::as_slice)
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.simplices
            .iter()
            .filter(|s| s.len() == 1)
            .map(|s| s[0])
            .collect()
    }

    /// Largest simplex dimension; −1 for the empty complex.
    pub fn dimension(&self) -> isize {
        self.simplices.iter().map(|s| s.len() as isize - 1).max().unwrap_or(-1)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; (self.dimension() + 1).max(0) as usize];
        for s in &self.simplices {
            f[s.len() - 1] += 1;
        }
        f
    }

    pub fn of_dimension(&self, k: usize) -> Vec<&[usize]> {
        self.simplices
            .iter()
            .filter(|s| s.len() == k + 1)
            .map(Vec::as_slice)
            .collect()
    }

    /// Maximal simplices.
    pub fn facets(&self) -> Vec<&[usize]> {
        let mut covered: BTreeSet<Vec<usize>> = BTreeSet::new();
        for s in self.simplices.iter().filter(|s| s.len() > 1) {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                covered.insert(face);
            }
        }
        self.simplices
            .iter()
            .filter(|s| !covered.contains(*s))
            .map(Vec::as_slice)
            .collect()
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dimension();
        self.facets().iter().all(|f| f.len() as isize - 1 == d)
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        let e = if u < v { [u, v] } else { [v, u] };
        self.simplices.contains(e.as_slice())
    }

    /// `Lk(σ) = { τ : τ ∩ σ = ∅, τ ∪ σ ∈ L }`.
    pub fn link(&self, face: &[usize]) -> Result<SimplicialComplex> {
        let mut sigma = face.to_vec();
        sigma.sort_unstable();
        sigma.dedup();
        if !sigma.is_empty() && !self.contains(&sigma) {
            return Err(CoxeterError::FaceAbsent(sigma));
        }
        let mut simplices = BTreeSet::new();
        for s in &self.simplices {
            if sigma.iter().all(|v| s.binary_search(v).is_ok()) && s.len() > sigma.len() {
                let tau: Vec<usize> = s.iter().copied().filter(|v| sigma.binary_search(v).is_err()).collect();
                simplices.insert(tau);
            }
        }
        Ok(SimplicialComplex { simplices })
    }

    /// Full subcomplex on a vertex set.
    pub fn induced(&self, vertices: &[usize]) -> SimplicialComplex {
        let simplices = self
            .simplices
            .iter()
            .filter(|s| s.iter().all(|v| vertices.contains(v)))
            .cloned()
            .collect();
        SimplicialComplex { simplices }
    }

    /// A smallest clique of the 1-skeleton that is not a simplex, if any.
    pub fn flag_violation(&self) -> Option<Vec<usize>> {
        let vertices = self.vertices();
        let top = self.dimension().max(0) as usize;
        for k in 1..=top + 1 {
            for s in self.of_dimension(k - 1) {
                let last = *s.last().expect("nonempty");
                for &v in vertices.iter().filter(|&&v| v > last) {
                    if !s.iter().all(|&u| self.adjacent(u, v)) {
                        continue;
                    }
                    let mut clique = s.to_vec();
                    clique.push(v);
                    if self.contains(&clique) {
                        continue;
                    }
                    // every facet of the clique being present makes it minimal
                    let minimal = (0..clique.len()).all(|i| {
                        let mut f = clique.clone();
                        f.remove(i);
                        self.contains(&f)
                    });
                    if minimal {
                        return Some(clique);
                    }
                }
            }
        }
        None
    }

    pub fn is_flag(&self) -> bool {
        self.flag_violation().is_none()
    }

    /// Recognizes combinatorial spheres up to homology; see [`SphereVerdict`].
    pub fn sphere_check(&self) -> SphereVerdict {
        if self.len() > SPHERE_CHECK_CAP {
            return SphereVerdict::Inconclusive(format!(
                "{} simplices exceeds the cap of {SPHERE_CHECK_CAP}",
                self.len()
            ));
        }
        self.sphere_check_inner(&[])
    }

    fn sphere_check_inner(&self, at: &[usize]) -> SphereVerdict {
        let fail = |reason: String| SphereVerdict::NotSphere {
            reason,
            witness: at.to_vec(),
        };
        let d = self.dimension();
        if d < 0 {
            return fail("empty complex".into());
        }
        if d == 0 {
            return if self.len() == 2 {
                SphereVerdict::Sphere
            } else {
                fail(format!("0-dimensional with {} points", self.len()))
            };
        }
        if !self.is_pure() {
            return fail("not pure".into());
        }
        let mut ridge_count: HashMap<Vec<usize>, usize> = HashMap::new();
        for f in self.of_dimension(d as usize) {
            for i in 0..f.len() {
                let mut r = f.to_vec();
                r.remove(i);
                *ridge_count.entry(r).or_default() += 1;
            }
        }
        if let Some((r, c)) = ridge_count.iter().find(|(_, &c)| c != 2) {
            let mut w = at.to_vec();
            w.extend(r);
            w.sort_unstable();
            return SphereVerdict::NotSphere {
                reason: format!("ridge in {c} facets"),
                witness: w,
            };
        }
        let betti = reduced_betti(self).expect("nonempty");
        let expected: Vec<usize> = (0..=d as usize).map(|k| usize::from(k == d as usize)).collect();
        if betti != expected {
            return fail(format!("reduced Betti numbers {betti:?}"));
        }
        for v in self.vertices() {
            let lk = self.link(&[v]).expect("vertex present");
            if lk.dimension() != d - 1 {
                return fail(format!("link of {v} has dimension {}", lk.dimension()));
            }
            let mut next = at.to_vec();
            next.push(v);
            next.sort_unstable();
            match lk.sphere_check_inner(&next) {
                SphereVerdict::Sphere => {}
                other => return other,
            }
        }
        SphereVerdict::Sphere
    }
}

/// Outcome of the sphere recognizer.
///
/// `Sphere` means: pure, every ridge in exactly two facets, reduced rational
/// homology of `S^d`, and every vertex link recursively passes. For `d ≤ 2`
/// this pins down the PL sphere; above that it certifies a rational
/// homology manifold that is a homology sphere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SphereVerdict {
    Sphere,
    NotSphere { reason: String, witness: Vec<usize> },
    Inconclusive(String),
}

impl SphereVerdict {
    pub fn is_sphere(&self) -> bool {
        matches!(self, SphereVerdict::Sphere)
    }
}

/// The nerve: one simplex per nonempty spherical subset.
pub fn build_nerve(m: &CoxeterMatrix) -> Result<SimplicialComplex> {
    let poset = m.spherical_poset()?;
    Ok(SimplicialComplex {
        simplices: poset
            .iter()
            .filter(|s| !s.members.is_empty())
            .map(|s| s.members.to_vec())
            .collect(),
    })
}

/// Flag test for a nerve; the witness is a non-spherical clique.
pub fn nerve_flag_witness(m: &CoxeterMatrix) -> Result<Option<GenSet>> {
    Ok(build_nerve(m)?.flag_violation().map(GenSet::from_iter))
}
