use std::collections::{BTreeSet, HashSet, VecDeque};

use coxeter::coloring::{paint, ColorSpace};
use coxeter::homology::{chi_orb, ChainComplex};
use coxeter::nerve::{build_nerve, SimplicialComplex};
use coxeter::system::GeneratorProjection;
use coxeter::{fixtures, CoxeterMatrix, CoxeterSystem, GenSet, GroupElement};
use proptest::prelude::*;

fn word(rank: usize, max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..rank, 0..=max)
}

/// Symmetric matrix from upper-triangle labels drawn from `choices`.
fn matrix(rank: usize, choices: &'static [i64]) -> impl Strategy<Value = CoxeterMatrix> {
    prop::collection::vec(prop::sample::select(choices), rank * (rank - 1) / 2).prop_map(move |labels| {
        let mut rows = vec![vec![1i64; rank]; rank];
        let mut k = 0;
        for i in 0..rank {
            for j in i + 1..rank {
                rows[i][j] = labels[k];
                rows[j][i] = labels[k];
                k += 1;
            }
        }
        CoxeterMatrix::from_labels(&rows).unwrap()
    })
}

/// Braid and cancellation closure of a word, written without the engine.
fn naive_class(m: &CoxeterMatrix, w: &[usize]) -> HashSet<Vec<usize>> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue = VecDeque::from([w.to_vec()]);
    seen.insert(w.to_vec());
    while let Some(u) = queue.pop_front() {
        for i in 0..u.len() {
            for j in 0..m.rank() {
                let Some(k) = m.label(u[i], j).finite() else { continue };
                let k = k as usize;
                if u[i] == j || i + k > u.len() {
                    continue;
                }
                let alt: Vec<usize> = (0..k).map(|p| if p % 2 == 0 { u[i] } else { j }).collect();
                if u[i..i + k] == alt[..] {
                    let mut v = u.clone();
                    for p in 0..k {
                        v[i + p] = if p % 2 == 0 { j } else { u[i] };
                    }
                    if seen.insert(v.clone()) {
                        queue.push_back(v);
                    }
                }
            }
        }
    }
    seen
}

fn parity(w: &[usize], rank: usize) -> Vec<bool> {
    (0..rank).map(|g| w.iter().filter(|&&x| x == g).count() % 2 == 1).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn even_shortcut_agrees_with_classification(m in matrix(5, &[2, 4, 6, 8, 0])) {
        for sub in m.all().subsets() {
            prop_assert_eq!(m.is_spherical_even_shortcut(sub), m.is_spherical(sub), "{}", m.format_set(sub));
        }
    }

    #[test]
    fn letter_parity_is_an_invariant(w in word(3, 14)) {
        let m = fixtures::example_tr_s();
        let sys = CoxeterSystem::new(m.clone());
        let nf = sys.normal_form(&w).unwrap();
        prop_assert_eq!(parity(nf.word(), 3), parity(&w, 3));
        for u in naive_class(&m, nf.word()) {
            prop_assert_eq!(parity(&u, 3), parity(nf.word(), 3));
        }
    }

    #[test]
    fn deletion_condition(w in word(4, 12), s in 0usize..4) {
        let m = fixtures::square_labels4();
        let sys = CoxeterSystem::new(m);
        let x = sys.normal_form(&w).unwrap();
        let xs = sys.multiply(&x, s).unwrap();
        prop_assert!(xs.length() + 1 == x.length() || xs.length() == x.length() + 1);
        let sx = sys.left_multiply(s, &x).unwrap();
        if sx.length() < x.length() {
            // a reduced word of x loses one letter s
            let found = sys.reduced_words(&x).unwrap().iter().any(|u| {
                (0..u.len()).filter(|&i| u[i] == s).any(|i| {
                    let mut v = u.clone();
                    v.remove(i);
                    sys.normal_form(&v).unwrap() == sx
                })
            });
            prop_assert!(found);
        }
    }

    #[test]
    fn normal_forms_are_canonical(x in word(4, 8), y in word(4, 8)) {
        let sys = CoxeterSystem::new(fixtures::square_with_example());
        let nx = sys.normal_form(&x).unwrap();
        let ny = sys.normal_form(&y).unwrap();
        let joined: Vec<usize> = nx.word().iter().chain(ny.word()).copied().collect();
        let direct: Vec<usize> = x.iter().chain(&y).copied().collect();
        prop_assert_eq!(sys.normal_form(&joined).unwrap(), sys.normal_form(&direct).unwrap());
        // the normal form is the least of its reduced words
        let rw = sys.reduced_words(&nx).unwrap();
        prop_assert_eq!(rw.iter().min().unwrap().as_slice(), nx.word());
    }

    #[test]
    fn projection_is_a_homomorphism(u in word(8, 8), v in word(8, 8), mask in 1u64..255) {
        let m = fixtures::sixteen_cell();
        let sys = CoxeterSystem::new(m.clone());
        let g = GeneratorProjection::new(m.all(), GenSet(mask));
        let nu = sys.normal_form(&u).unwrap();
        let nv = sys.normal_form(&v).unwrap();
        let uv = sys.product(&nu, &nv).unwrap();
        let lhs = g.project(&sys, &uv).unwrap();
        let rhs = sys.product(&g.project(&sys, &nu).unwrap(), &g.project(&sys, &nv).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn action_law(u in word(3, 8), v in word(3, 8), c in 0usize..4) {
        let m = fixtures::example_tr_s();
        let sys = CoxeterSystem::new(m.clone());
        let space = ColorSpace::new(&sys, m.all(), 0).unwrap();
        let p = paint(&sys, 0, 6).unwrap();
        let a = p.color(c % p.color_count()).clone();
        let nu = sys.normal_form(&u).unwrap();
        let nv = sys.normal_form(&v).unwrap();
        let uv = sys.product(&nu, &nv).unwrap();
        prop_assert_eq!(space.act(&uv, &a).unwrap(), space.act(&nu, &space.act(&nv, &a).unwrap()).unwrap());
        prop_assert_eq!(space.act(&GroupElement::identity(), &a).unwrap(), a);
    }

    #[test]
    fn flag_iff_cliques_are_spherical(m in matrix(6, &[2, 4, 0, 0])) {
        let finite = |x: usize, y: usize| m.label(x, y).finite().is_some();
        let all_cliques_spherical = m.all().subsets().all(|sub| {
            let g = sub.to_vec();
            let clique = g.iter().all(|&x| g.iter().all(|&y| x == y || finite(x, y)));
            !clique || m.is_spherical(sub)
        });
        prop_assert_eq!(build_nerve(&m).unwrap().is_flag(), all_cliques_spherical);
    }

    #[test]
    fn edge_links_are_nerves_of_u_st(m in matrix(6, &[2, 2, 4, 0])) {
        let nerve = build_nerve(&m).unwrap();
        prop_assume!(nerve.is_flag() && m.is_even());
        for s in 0..6 {
            for t in s + 1..6 {
                if m.label(s, t).finite().is_none_or(|l| l <= 2) {
                    continue;
                }
                let ust = GenSet::from_iter((0..6).filter(|&r| r != s && r != t && m.commute(r, s) && m.commute(r, t)));
                let link: BTreeSet<Vec<usize>> = nerve.link(&[s, t]).unwrap().simplices().map(|x| x.to_vec()).collect();
                let sub: BTreeSet<Vec<usize>> = ust
                    .subsets()
                    .filter(|x| !x.is_empty() && m.is_spherical(*x))
                    .map(|x| x.to_vec())
                    .collect();
                prop_assert_eq!(link, sub);
            }
        }
    }

    #[test]
    fn boundary_squared_and_euler(facets in prop::collection::vec(prop::collection::btree_set(0usize..7, 1..=4), 1..8), keep in 0usize..8) {
        let facets: Vec<Vec<usize>> = facets.into_iter().map(|f| f.into_iter().collect()).collect();
        let x = SimplicialComplex::from_facets(facets.clone());
        let a = SimplicialComplex::from_facets(facets[..keep.min(facets.len())].to_vec());
        for pair in [None, Some(&a)] {
            let cc = ChainComplex::simplicial(&x, pair).unwrap();
            prop_assert!(cc.boundary_squared_vanishes());
            let b = cc.betti();
            prop_assert_eq!(b.euler, b.chain_euler());
        }
    }

    #[test]
    fn orbihedral_euler_multiplies(a in matrix(3, &[2, 4, 6, 0]), b in matrix(2, &[2, 4, 8, 0])) {
        let n = 5;
        let mut rows = vec![vec![2i64; n]; n];
        for i in 0..n {
            rows[i][i] = 1;
        }
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    rows[i][j] = a.label(i, j).encode() as i64;
                }
            }
        }
        rows[3][4] = b.label(0, 1).encode() as i64;
        rows[4][3] = rows[3][4];
        let joined = CoxeterMatrix::from_labels(&rows).unwrap();
        prop_assert_eq!(chi_orb(&joined).unwrap(), chi_orb(&a).unwrap() * chi_orb(&b).unwrap());
    }
}
