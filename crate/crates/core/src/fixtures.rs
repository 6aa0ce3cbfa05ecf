//! Named Coxeter systems used by the tests, the acceptance suite and the CLI.

use crate::system::CoxeterMatrix;

fn build(names: &[&str], rows: Vec<Vec<i64>>) -> CoxeterMatrix {
    CoxeterMatrix::from_rows(names.iter().map(|s| s.to_string()).collect(), &rows)
        .expect("fixture matrices are valid")
}

/// `I_2(m)` on generators `s, t`; `m = 0` gives the infinite dihedral group.
pub fn dihedral(m: i64) -> CoxeterMatrix {
    build(&["s", "t"], vec![vec![1, m], vec![m, 1]])
}

/// The three-generator system `{t, r, s}` with `m_rt = 2`, `m_st = 4`, `m_rs = ∞`.
pub fn example_tr_s() -> CoxeterMatrix {
    build(
        &["t", "r", "s"],
        vec![vec![1, 2, 4], vec![2, 1, 0], vec![4, 0, 1]],
    )
}

/// A cycle of length `n` with edge labels `labels[i]` between vertex `i`
/// and `i+1 mod n`; non-adjacent pairs get `∞`.
pub fn cycle(names: &[&str], labels: &[i64]) -> CoxeterMatrix {
    let n = names.len();
    assert_eq!(labels.len(), n);
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..n {
        rows[i][i] = 1;
        let j = (i + 1) % n;
        rows[i][j] = labels[i];
        rows[j][i] = labels[i];
    }
    build(names, rows)
}

/// Right-angled square: nerve is a 4-cycle.
pub fn square_right_angled() -> CoxeterMatrix {
    cycle(&["a", "b", "c", "d"], &[2, 2, 2, 2])
}

/// Square nerve with every edge labelled 4.
pub fn square_labels4() -> CoxeterMatrix {
    cycle(&["a", "b", "c", "d"], &[4, 4, 4, 4])
}

/// Square nerve `t-s-a-r-t` with `m_st = 4` and the other edges 2;
/// the star of `t` is the system of [`example_tr_s`].
pub fn square_with_example() -> CoxeterMatrix {
    cycle(&["t", "s", "a", "r"], &[4, 2, 2, 2])
}

/// Pentagon nerve `t-s-a-b-r-t` with `m_st = 4`, other edges 2.
pub fn pentagon_with_example() -> CoxeterMatrix {
    cycle(&["t", "s", "a", "b", "r"], &[4, 2, 2, 2, 2])
}

/// Cross-polytope boundary on antipodal pairs `x{i}+`, `x{i}-`, `i < pairs`:
/// antipodes get `∞`, every other pair is adjacent with label
/// `heavy` when the two vertices lie in paired classes `(0,1)`, `(2,3)`, ...
/// and 2 otherwise. For `pairs = 4` the nerve is the boundary of the 16-cell.
pub fn cross_polytope(pairs: usize, heavy: i64) -> CoxeterMatrix {
    let n = 2 * pairs;
    let names: Vec<String> = (0..pairs)
        .flat_map(|i| [format!("x{i}+"), format!("x{i}-")])
        .collect();
    let mut rows = vec![vec![2i64; n]; n];
    for a in 0..n {
        for b in 0..n {
            let (pa, pb) = (a / 2, b / 2);
            rows[a][b] = if a == b {
                1
            } else if pa == pb {
                0
            } else if pa / 2 == pb / 2 && pa / 2 * 2 + 1 < pairs {
                heavy
            } else {
                2
            };
        }
    }
    CoxeterMatrix::from_rows(names, &rows).expect("fixture matrices are valid")
}

/// Even flag triangulation of `S^3`: the 16-cell boundary with label 4 on
/// edges between classes 0–1 and 2–3, label 2 elsewhere.
pub fn sixteen_cell() -> CoxeterMatrix {
    cross_polytope(4, 4)
}

/// Right-angled octahedron boundary, an even flag triangulation of `S^2`.
pub fn octahedron_right_angled() -> CoxeterMatrix {
    cross_polytope(3, 2)
}

/// Octahedron nerve with label 4 between classes 0 and 1.
pub fn octahedron_even() -> CoxeterMatrix {
    cross_polytope(3, 4)
}

/// `I_2(4) × I_2(4)` on `a, b, c, d`: a finite even system.
pub fn dihedral_product() -> CoxeterMatrix {
    build(
        &["a", "b", "c", "d"],
        vec![
            vec![1, 4, 2, 2],
            vec![4, 1, 2, 2],
            vec![2, 2, 1, 4],
            vec![2, 2, 4, 1],
        ],
    )
}

/// `I_2(4) × A_1` on `s, t, u`.
pub fn dihedral_times_a1() -> CoxeterMatrix {
    build(
        &["s", "t", "u"],
        vec![vec![1, 4, 2], vec![4, 1, 2], vec![2, 2, 1]],
    )
}

/// Three generators with pairwise label 4: an even system whose nerve is
/// the boundary of a triangle, hence not flag.
pub fn triangle_labels4() -> CoxeterMatrix {
    build(
        &["a", "b", "c"],
        vec![vec![1, 4, 4], vec![4, 1, 4], vec![4, 4, 1]],
    )
}

/// Looks a fixture up by name.
pub fn by_name(name: &str) -> Option<CoxeterMatrix> {
    Some(match name {
        "example" => example_tr_s(),
        "square" => square_right_angled(),
        "square4" => square_labels4(),
        "square-example" => square_with_example(),
        "pentagon-example" => pentagon_with_example(),
        "sixteen-cell" => sixteen_cell(),
        "octahedron" => octahedron_right_angled(),
        "octahedron4" => octahedron_even(),
        "dihedral-product" => dihedral_product(),
        "dihedral-a1" => dihedral_times_a1(),
        "triangle4" => triangle_labels4(),
        _ => return None,
    })
}

pub const NAMES: &[&str] = &[
    "example",
    "square",
    "square4",
    "square-example",
    "pentagon-example",
    "sixteen-cell",
    "octahedron",
    "octahedron4",
    "dihedral-product",
    "dihedral-a1",
    "triangle4",
];
