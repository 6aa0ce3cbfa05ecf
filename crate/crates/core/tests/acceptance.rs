//! Acceptance criteria, one line each. Limits are wall-clock seconds.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use coxeter::coloring::paint;
use coxeter::complex::{build_ruin, CellPoset};
use coxeter::harness::{verify_suite, Options, Verdict, CHECK_IDS};
use coxeter::homology::{chi_orb, excision_check, simplicial_homology, ChainComplex, Poset, DEFAULT_CHAIN_CAP};
use coxeter::nerve::{build_nerve, SimplicialComplex};
use coxeter::{fixtures, CoxeterMatrix, CoxeterSystem, GenSet};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Closure of the permutations `i ↦ −i` and `i ↦ 2−i` of `Z/2m`.
fn dihedral_oracle(m: usize) -> usize {
    let n = 2 * m;
    let s: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    let t: Vec<usize> = (0..n).map(|i| (n + 2 - i) % n).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut queue = VecDeque::from([(0..n).collect::<Vec<_>>()]);
    seen.insert((0..n).collect());
    while let Some(p) = queue.pop_front() {
        for g in [&s, &t] {
            let q: Vec<usize> = p.iter().map(|&i| g[i]).collect();
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen.len()
}

/// Ball counts of the right-angled square `a-b-c-d`, computed in the
/// faithful representation as two commuting infinite dihedral groups of
/// affine maps `x ↦ εx + k` of `Z`.
fn square_oracle(radius: usize) -> Vec<usize> {
    type Aff = (i64, i64);
    fn then(f: Aff, g: Aff) -> Aff {
        (f.0 * g.0, g.0 * f.1 + g.1)
    }
    let refl: [Aff; 2] = [(-1, 0), (-1, 2)];
    let id: (Aff, Aff) = ((1, 0), (1, 0));
    let mut seen: HashSet<(Aff, Aff)> = HashSet::from([id]);
    let mut level = vec![id];
    let mut counts = vec![1];
    for _ in 0..radius {
        let mut next = Vec::new();
        for &(x, y) in &level {
            // a, c act on the first factor; b, d on the second
            for g in 0..4 {
                let e = if g % 2 == 0 { (then(x, refl[g / 2]), y) } else { (x, then(y, refl[g / 2])) };
                if seen.insert(e) {
                    next.push(e);
                }
            }
        }
        counts.push(next.len());
        level = next;
    }
    counts
}

fn criterion_1() -> Outcome {
    for m in [2usize, 4, 6, 8] {
        let sys = CoxeterSystem::new(fixtures::dihedral(m as i64));
        let n = sys.enumerate_ball(GenSet::full(2), 2 * m).unwrap().len();
        let oracle = dihedral_oracle(m);
        ensure(n == oracle && n == 2 * m, || format!("I2({m}): {n} vs {oracle}"))?;
    }
    let sys = CoxeterSystem::new(fixtures::square_right_angled());
    let got = sys.enumerate_ball(GenSet::full(4), 6).unwrap().level_counts();
    let want = square_oracle(6);
    ensure(got == want, || format!("square balls {got:?} vs oracle {want:?}"))?;
    Ok(format!("orders 4,8,12,16; square levels {got:?}"))
}

/// Braid class by direct rewriting.
fn braid_class(m: &CoxeterMatrix, w: &[usize]) -> HashSet<Vec<usize>> {
    let mut seen: HashSet<Vec<usize>> = HashSet::from([w.to_vec()]);
    let mut queue = VecDeque::from([w.to_vec()]);
    while let Some(u) = queue.pop_front() {
        for i in 0..u.len() {
            for j in 0..m.rank() {
                let Some(k) = m.label(u[i], j).finite().map(|k| k as usize) else { continue };
                if j == u[i] || i + k > u.len() {
                    continue;
                }
                if (0..k).all(|p| u[i + p] == if p % 2 == 0 { u[i] } else { j }) {
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

fn criterion_2() -> Outcome {
    let m = fixtures::example_tr_s();
    let sys = CoxeterSystem::new(m.clone());
    let ball = sys.enumerate_ball(m.all(), 8).unwrap();
    let par = |w: &[usize]| -> [usize; 3] { [0, 1, 2].map(|g| w.iter().filter(|&&x| x == g).count() % 2) };
    let mut words = 0usize;
    for w in ball.elements() {
        let p = par(w.word());
        for u in braid_class(&m, w.word()) {
            words += 1;
            ensure(par(&u) == p, || format!("{} vs {:?}", w.display_with(m.names()), u))?;
        }
    }
    // every raw word of length ≤ 8 has the parity of its normal form
    let mut stack: Vec<Vec<usize>> = vec![vec![]];
    let mut raw = 0usize;
    while let Some(w) = stack.pop() {
        raw += 1;
        let nf = sys.normal_form(&w).unwrap();
        ensure(par(nf.word()) == par(&w), || format!("raw word {w:?}"))?;
        if w.len() < 8 {
            for g in 0..3 {
                let mut v = w.clone();
                v.push(g);
                stack.push(v);
            }
        }
    }
    Ok(format!("{} elements, {words} reduced words, {raw} raw words", ball.len()))
}

fn criterion_3() -> Outcome {
    let m = fixtures::example_tr_s();
    let sys = CoxeterSystem::new(m.clone());
    let p = paint(&sys, 0, 10).map_err(|e| e.to_string())?;
    p.check_monochromatic().map_err(|c| c.message)?;
    let pieces = p.even_pieces();
    ensure(!pieces.is_empty(), || "no even collar pairs meet".into())?;
    let st = GenSet::from_iter([0, 2]);
    for cells in pieces.values() {
        ensure(cells.len() == 1 && p.one.sigma.ty(cells[0]) == st, || {
            format!("piece of {} cells, first of type {}", cells.len(), m.format_set(p.one.sigma.ty(cells[0])))
        })?;
    }
    p.check_odd_inner(false).map_err(|c| c.message)?;
    let odd = (0..p.collars.len()).filter(|&k| p.collar_parity(k) == coxeter::coloring::Parity::Odd).count();
    Ok(format!(
        "{} components, {} colors, {} even pairs meeting in one {{t,s}} cell, {odd} odd collars",
        p.collars.len(),
        p.color_count(),
        pieces.len()
    ))
}

fn criterion_4() -> Outcome {
    let runs = [("example", 10), ("square", 8), ("square4", 8), ("sixteen-cell", 8)];
    let mut summary = Vec::new();
    for (name, r) in runs {
        let sys = CoxeterSystem::new(fixtures::by_name(name).unwrap());
        let reports = verify_suite(&sys, r, None, Options::default()).map_err(|e| e.to_string())?;
        ensure(reports.len() == CHECK_IDS.len(), || format!("{name}: {} reports", reports.len()))?;
        let mut tally: BTreeMap<&str, usize> = BTreeMap::new();
        for rep in &reports {
            ensure(rep.verdict != Verdict::Fail, || format!("{name} {}: {}", rep.check_id, rep.detail))?;
            ensure(rep.radius == r, || "radius not recorded".into())?;
            *tally.entry(if rep.verdict == Verdict::Pass { "pass" } else { "skip" }).or_default() += 1;
        }
        // only the top-homology check may be skipped, and only for want of
        // a sphere of dimension ≥ 2
        for rep in reports.iter().filter(|r| r.verdict == Verdict::Skipped) {
            ensure(rep.check_id == "P-2ruintop", || format!("{name} {} skipped: {}", rep.check_id, rep.detail))?;
        }
        summary.push(format!("{name}@{r} {}p/{}s", tally.get("pass").unwrap_or(&0), tally.get("skip").unwrap_or(&0)));
    }
    Ok(summary.join(", "))
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn criterion_5() -> Outcome {
    let sq = chi_orb(&fixtures::square_right_angled()).unwrap();
    let sq4 = chi_orb(&fixtures::square_labels4()).unwrap();
    // by hand: 1 − 4/2 + 4/4 and 1 − 4/2 + 4/8
    ensure(sq == q(1, 1) - q(4, 2) + q(4, 4) && sq.is_zero(), || format!("square {sq}"))?;
    ensure(sq4 == q(1, 1) - q(4, 2) + q(4, 8) && sq4 == q(-1, 2), || format!("square4 {sq4}"))?;
    // the 16-cell: two blocks of two antipodal classes; within a block a
    // choice of at most one letter per class, with an I2(4) when both
    // classes are used; blocks commute
    let block = q(1, 1) - q(2, 2) - q(2, 2) + q(4, 8);
    let oracle = &block * &block;
    let m = fixtures::sixteen_cell();
    let chi = chi_orb(&m).unwrap();
    ensure(chi == oracle, || format!("16-cell {chi} vs {oracle}"))?;
    let nerve = build_nerve(&m).unwrap();
    ensure(nerve.dimension() == 3 && nerve.sphere_check().is_sphere(), || "nerve is not S^3".into())?;
    ensure(!chi.is_negative(), || format!("(−1)^2 χ = {chi} < 0"))?;
    Ok(format!("square 0, square4 -1/2, 16-cell {chi} with (−1)^2 χ ≥ 0"))
}

fn criterion_6() -> Outcome {
    let cycle = SimplicialComplex::from_facets([vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]]);
    let b = simplicial_homology(&cycle, None).unwrap().trimmed();
    ensure(b == vec![1, 1], || format!("4-cycle {b:?}"))?;
    let mut facets = Vec::new();
    for x in [0, 1] {
        for y in [2, 3] {
            for z in [4, 5] {
                facets.push(vec![x, y, z]);
            }
        }
    }
    let oct = SimplicialComplex::from_facets(facets);
    let b = simplicial_homology(&oct, None).unwrap().trimmed();
    ensure(b == vec![1, 0, 1], || format!("octahedron {b:?}"))?;
    // face poset of a triangle: vertices 0..3, edges 3..6, the 2-cell 6
    let covers = vec![vec![], vec![], vec![], vec![0, 1], vec![1, 2], vec![0, 2], vec![3, 4, 5]];
    let poset = Poset::from_covers(&covers);
    let disk = vec![true; 7];
    let circle: Vec<bool> = (0..7).map(|i| i < 6).collect();
    let rel = ChainComplex::order_complex(&poset, &disk, &circle, DEFAULT_CHAIN_CAP).unwrap().betti();
    ensure(rel.betti == vec![0, 0, 1], || format!("disk rel circle {:?}", rel.betti))?;
    // ∂² = 0 on the corpus
    let mut complexes = 0usize;
    for name in fixtures::NAMES {
        let m = fixtures::by_name(name).unwrap();
        let sys = CoxeterSystem::new(m.clone());
        let nerve = build_nerve(&m).unwrap();
        let cc = ChainComplex::simplicial(&nerve, None).unwrap();
        ensure(cc.boundary_squared_vanishes(), || format!("{name} nerve"))?;
        complexes += 1;
        let sigma = CellPoset::build(&sys, m.all(), 4).unwrap();
        let poset = sigma.poset();
        let none = vec![false; sigma.len()];
        let all = sigma.sigma_mask(m.all());
        let cc = ChainComplex::order_complex(&poset, &all, &none, DEFAULT_CHAIN_CAP).unwrap();
        ensure(cc.boundary_squared_vanishes(), || format!("{name} Σ"))?;
        let b = cc.betti();
        ensure(b.euler == b.chain_euler(), || format!("{name} Euler"))?;
        complexes += 1;
        for t in 0..m.rank() {
            let r = build_ruin(&sigma, m.all(), GenSet::singleton(t)).unwrap();
            let cc = ChainComplex::order_complex(&poset, &r.omega, &r.boundary, DEFAULT_CHAIN_CAP).unwrap();
            ensure(cc.boundary_squared_vanishes(), || format!("{name} ruin {t}"))?;
            complexes += 1;
        }
    }
    Ok(format!("(1,1), (1,0,1), relative (0,0,1); ∂²=0 on {complexes} complexes"))
}

fn criterion_7() -> Outcome {
    let m = fixtures::dihedral_product();
    let sys = CoxeterSystem::new(m.clone());
    let sigma = CellPoset::build(&sys, m.all(), 8).unwrap();
    let mut checked = 0usize;
    let mut degrees = 0usize;
    for v in m.all().subsets().filter(|v| !v.is_empty()) {
        for t in v.subsets() {
            let letters: Vec<Option<usize>> = if t.is_empty() { vec![None] } else { t.iter().map(Some).collect() };
            for s in letters {
                let rep = excision_check(&sigma, v, t, s).map_err(|e| e.to_string())?;
                ensure(rep.complete, || "truncation is not the whole complex".into())?;
                ensure(rep.holds(), || format!("V={} T={} s={s:?}: {rep:?}", m.format_set(v), m.format_set(t)))?;
                degrees += rep.first.chains.len();
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} instances (V,T,s), {degrees} degrees with equal bases, sequence ranks consistent"))
}

fn criterion_8() -> Outcome {
    let mut out = Vec::new();
    for (name, r) in [("square-example", 10), ("pentagon-example", 10), ("octahedron4", 8)] {
        let m = fixtures::by_name(name).unwrap();
        let sys = CoxeterSystem::new(m.clone());
        let t = m.generator(if name == "octahedron4" { "x0+" } else { "t" }).unwrap();
        let p = paint(&sys, t, r).map_err(|e| e.to_string())?;
        let certs = p.w_prime_certificates(&sys).map_err(|e| e.to_string())?.map_err(|c| c.message)?;
        ensure(!certs.is_empty(), || format!("{name}: no certificate"))?;
        let mut sizes: HashMap<usize, usize> = HashMap::new();
        for c in &certs {
            ensure(c.iso.cells == c.piece.len() && c.iso.cells > 0, || format!("{name}: empty piece"))?;
            let st = GenSet::from_iter([c.s, t]);
            ensure(c.piece.iter().all(|&i| st.is_subset(p.one.sigma.ty(i))), || format!("{name}: type not above {{s,t}}"))?;
            sizes.insert(c.s, c.iso.cells);
        }
        if m.rank() <= 5 {
            // U_st is empty on a cycle of length ≥ 4, so the piece is one cell
            ensure(certs.iter().all(|c| c.iso.cells == 1), || format!("{name}: pieces {sizes:?}"))?;
        }
        out.push(format!("{name}@{r}: {} certificates, cells {:?}", certs.len(), certs.iter().map(|c| c.iso.cells).collect::<Vec<_>>()));
    }
    Ok(out.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 8] = [
        ("word engine vs oracle", criterion_1, 10),
        ("letter parity", criterion_2, 30),
        ("three-letter example at radius 10", criterion_3, 60),
        ("lemma suite", criterion_4, 120),
        ("orbihedral Euler characteristic", criterion_5, 10),
        ("homology engine", criterion_6, 10),
        ("excision", criterion_7, 30),
        ("W'-piece isomorphism", criterion_8, 60),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, f, limit)) in criteria.iter().enumerate() {
        let label = format!("criterion {}", k + 1);
        if !filter.is_empty() && !filter.iter().any(|x| label.contains(x.as_str()) || name.contains(x.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = f();
        let took = start.elapsed();
        let result = match result {
            Ok(d) if took > Duration::from_secs(*limit) => Err(format!("{d} (over time)")),
            r => r,
        };
        match result {
            Ok(d) => println!("{label} PASS [{name}] {:.2}s/{limit}s: {d}", took.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("{label} FAIL [{name}] {:.2}s/{limit}s: {e}", took.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
