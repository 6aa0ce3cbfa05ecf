//! Registered finite checks and their reports.
//!
//! Every check quantifies over an enumerated ball and states the bound it
//! used in its `detail`. A check whose hypotheses fail is skipped, as is one
//! that trips a size guard.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::rc::Rc;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coloring::{paint, ColorSpace, PaintedRuin};
use crate::error::{CoxeterError, Result};
use crate::nerve::{build_nerve, SimplicialComplex, SphereVerdict};
use crate::system::{CoxeterMatrix, CoxeterSystem, GenSet};
use crate::words::{Ball, DEFAULT_BALL_CAP};

/// A concrete failure of a finite check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub message: String,
    pub data: Value,
}

impl Counterexample {
    pub fn new(message: impl Into<String>, data: Value) -> Self {
        Counterexample {
            message: message.into(),
            data,
        }
    }
}

/// `Ok(detail)` on success.
pub type Finding = std::result::Result<String, Counterexample>;

/// Registered checks in suite order.
pub const CHECK_IDS: &[&str] = &[
    "L4.1",
    "L4.2",
    "L5.1",
    "C5.2",
    "L5.3",
    "L5.4",
    "R5.6",
    "PAINT",
    "EVENS",
    "L5.7",
    "L5.8",
    "P5.9",
    "C5.10",
    "C5.11",
    "L-odd",
    "C-odd",
    "P-2ruintop",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check_id: String,
    pub system: String,
    pub radius: usize,
    pub letters: Vec<String>,
    pub verdict: Verdict,
    pub witness: Option<Counterexample>,
    pub detail: String,
    pub gated: bool,
    pub elapsed_ms: u64,
}

/// Bounds for the exhaustive loops.
#[derive(Clone, Copy, Debug)]
pub struct Options {
    /// Skip checks whose hypotheses fail.
    pub gate: bool,
    /// Most elements whose braid classes are expanded.
    pub word_elements: usize,
    /// Budget of (pair × target) evaluations for product checks.
    pub pair_budget: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            gate: true,
            word_elements: 20_000,
            pair_budget: 20_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Hypothesis {
    Even,
    Flag,
    /// Flag nerve certified as a sphere of dimension at least 2.
    Sphere,
}

fn hypotheses(id: &str) -> &'static [Hypothesis] {
    use Hypothesis::*;
    match id {
        "L4.1" => &[],
        "L4.2" | "L5.4" => &[Even],
        "P-2ruintop" => &[Flag, Sphere],
        _ => &[Even, Flag],
    }
}

enum Outcome {
    Done(Finding),
    Skip(String),
}

impl From<Result<Finding>> for Outcome {
    fn from(r: Result<Finding>) -> Self {
        match r {
            Ok(f) => Outcome::Done(f),
            Err(e) => Outcome::Skip(e.to_string()),
        }
    }
}

/// Shared state for one system and radius; painted ruins are cached.
pub struct Session<'a> {
    sys: &'a CoxeterSystem,
    radius: usize,
    opts: Options,
    painted: HashMap<usize, std::result::Result<Rc<PaintedRuin>, String>>,
    nerve: Option<SimplicialComplex>,
    sphere: Option<SphereVerdict>,
}

impl<'a> Session<'a> {
    pub fn new(sys: &'a CoxeterSystem, radius: usize, opts: Options) -> Self {
        Session {
            sys,
            radius,
            opts,
            painted: HashMap::new(),
            nerve: None,
            sphere: None,
        }
    }

    fn m(&self) -> &CoxeterMatrix {
        self.sys.matrix()
    }

    fn names(&self) -> &[String] {
        self.sys.matrix().names()
    }

    fn nerve(&mut self) -> Result<&SimplicialComplex> {
        if self.nerve.is_none() {
            self.nerve = Some(build_nerve(self.sys.matrix())?);
        }
        Ok(self.nerve.as_ref().expect("set"))
    }

    fn sphere(&mut self) -> Result<SphereVerdict> {
        if self.sphere.is_none() {
            let v = self.nerve()?.sphere_check();
            self.sphere = Some(v);
        }
        Ok(self.sphere.clone().expect("set"))
    }

    fn painted(&mut self, t: usize) -> std::result::Result<Rc<PaintedRuin>, String> {
        let (sys, radius) = (self.sys, self.radius);
        self.painted
            .entry(t)
            .or_insert_with(|| paint(sys, t, radius).map(Rc::new).map_err(|e| e.to_string()))
            .clone()
    }

    fn gate(&mut self, id: &str) -> Result<Option<String>> {
        for h in hypotheses(id) {
            match h {
                Hypothesis::Even if !self.m().is_even() => return Ok(Some("system is not even".into())),
                Hypothesis::Flag => {
                    if let Some(c) = self.nerve()?.flag_violation() {
                        let names: Vec<&str> = c.iter().map(|&g| self.names()[g].as_str()).collect();
                        return Ok(Some(format!("nerve is not flag: {{{}}} is a non-simplex clique", names.join(","))));
                    }
                }
                Hypothesis::Sphere => {
                    let dim = self.nerve()?.dimension();
                    match self.sphere()? {
                        SphereVerdict::Sphere if dim >= 2 => {}
                        SphereVerdict::Sphere => {
                            return Ok(Some(format!("nerve is a sphere of dimension {dim} < 2")))
                        }
                        SphereVerdict::NotSphere { reason, .. } => {
                            return Ok(Some(format!("nerve is not a sphere: {reason}")))
                        }
                        SphereVerdict::Inconclusive(r) => return Ok(Some(format!("sphere check inconclusive: {r}"))),
                    }
                }
                _ => {}
            }
        }
        Ok(None)
    }

    /// Runs one registered check.
    pub fn verify(&mut self, id: &str) -> Result<VerificationReport> {
        if !CHECK_IDS.contains(&id) {
            return Err(CoxeterError::Parse(format!("unknown check id {id}")));
        }
        let start = Instant::now();
        let skip_reason = if self.opts.gate { self.gate(id)? } else { None };
        let (outcome, letters) = match skip_reason {
            Some(r) => (Outcome::Skip(r), Vec::new()),
            None => self.run(id),
        };
        let (verdict, witness, detail) = match outcome {
            Outcome::Done(Ok(d)) => (Verdict::Pass, None, d),
            Outcome::Done(Err(ce)) => (Verdict::Fail, Some(ce.clone()), ce.message),
            Outcome::Skip(r) => (Verdict::Skipped, None, r),
        };
        Ok(VerificationReport {
            check_id: id.to_string(),
            system: self.m().digest(),
            radius: self.radius,
            letters: letters.iter().map(|&g| self.names()[g].clone()).collect(),
            verdict,
            witness,
            detail,
            gated: self.opts.gate,
            elapsed_ms: start.elapsed().as_millis() as u64,
        })
    }

    fn run(&mut self, id: &str) -> (Outcome, Vec<usize>) {
        let all: Vec<usize> = (0..self.m().rank()).collect();
        let out = match id {
            "L4.1" => self.check_l41().into(),
            "L4.2" => self.check_l42().into(),
            "L5.1" => Outcome::Done(self.check_l51()),
            "C5.2" => self.check_c52().into(),
            "L5.3" => self.check_l53().into(),
            "L5.4" => self.check_l54().into(),
            "P-2ruintop" => self.check_two_letter_top().into(),
            _ => return self.per_letter(id),
        };
        (out, all)
    }

    /// Runs a coloring check for every letter `t`, stopping at the first
    /// failure.
    fn per_letter(&mut self, id: &str) -> (Outcome, Vec<usize>) {
        let mut details = Vec::new();
        let mut letters = Vec::new();
        let sphere = match self.sphere() {
            Ok(v) => v.is_sphere(),
            Err(e) => return (Outcome::Skip(e.to_string()), letters),
        };
        for t in 0..self.m().rank() {
            let p = match self.painted(t) {
                Ok(p) => p,
                Err(e) => return (Outcome::Skip(format!("t={}: {e}", self.names()[t])), letters),
            };
            letters.push(t);
            let sys = self.sys;
            let r: Result<Finding> = match id {
                "R5.6" => check_trivial_action(sys, &p, self.opts),
                "PAINT" => Ok(p.check_monochromatic().and_then(|a| p.check_parity().map(|b| format!("{a}; {b}")))),
                "EVENS" => p.check_even_pairs(sys),
                "L5.7" => Ok(p.check_same_color_disjoint()),
                "L5.8" => Ok(p.check_w_prime_orbit()),
                "P5.9" => self.check_p59(&p, sphere),
                "C5.10" => p.check_even_intersections(sys),
                "C5.11" => Ok(p.check_multi_even()),
                "L-odd" => Ok(p.check_odd_inner(false)),
                "C-odd" => p.check_odd_components(sys).map(|f| {
                    f.and_then(|a| p.check_odd_inner(true).map(|b| format!("{a}; {b}")))
                }),
                _ => unreachable!("registered id"),
            };
            match r {
                Ok(Ok(d)) => details.push(format!("t={}: {d}", self.names()[t])),
                Ok(Err(mut ce)) => {
                    if let Value::Object(map) = &mut ce.data {
                        map.insert("t".into(), json!(self.names()[t]));
                    }
                    return (Outcome::Done(Err(ce)), letters);
                }
                Err(e) => return (Outcome::Skip(format!("t={}: {e}", self.names()[t])), letters),
            }
        }
        let head = format!("radius {} over W_U for each t", self.radius);
        (Outcome::Done(Ok(format!("{head}; {}", details.join("; ")))), letters)
    }

    fn word_ball(&self, gens: GenSet) -> Result<(Ball, usize)> {
        let ball = Ball::build(self.sys, gens, self.radius, DEFAULT_BALL_CAP)?;
        let mut r = 0;
        let mut total = 0;
        for (k, &c) in ball.level_counts().iter().enumerate() {
            total += c;
            if total > self.opts.word_elements {
                break;
            }
            r = k;
        }
        Ok((ball, r))
    }

    fn word(&self, w: &[usize]) -> String {
        w.iter().map(|&g| self.names()[g].as_str()).collect::<Vec<_>>().join("")
    }

    /// Every factorization `x = w·t·v` with `w ∈ W_{S−t}` is read off a
    /// reduced word of `x` at its first `t`.
    fn check_l41(&self) -> Result<Finding> {
        let m = self.m();
        let (ball, r) = self.word_ball(m.all())?;
        let mut cases = 0usize;
        for id in 0..ball.level(r).end {
            let words = self.sys.reduced_words(ball.element(id))?;
            for t in 0..m.rank() {
                let mut seen: HashSet<(GenSet, GenSet)> = HashSet::new();
                for word in &words {
                    let Some(k) = word.iter().position(|&g| g == t) else { continue };
                    let sw = GenSet::from_iter(word[..k].iter().copied());
                    let sv = GenSet::from_iter(word[k + 1..].iter().copied());
                    if !seen.insert((sw, sv)) {
                        continue;
                    }
                    for rr in sw.minus(sv).iter().filter(|&rr| !m.commute(rr, t)) {
                        cases += 1;
                        let bad = words.iter().find(|u| {
                            let last_r = u.iter().rposition(|&g| g == rr);
                            let first_t = u.iter().position(|&g| g == t);
                            matches!((last_r, first_t), (Some(a), Some(b)) if a > b)
                        });
                        if let Some(u) = bad {
                            return Ok(Err(Counterexample::new(
                                "an r appears right of a t",
                                json!({"element": self.word(word), "t": self.names()[t],
                                       "r": self.names()[rr], "expression": self.word(u)}),
                            )));
                        }
                    }
                }
            }
        }
        Ok(Ok(format!(
            "all elements of length ≤ {r} ({} elements), {cases} factorizations with r ∈ S(w)−S(v)",
            ball.level(r).end
        )))
    }

    fn check_l42(&self) -> Result<Finding> {
        let m = self.m();
        let (ball, r) = self.word_ball(m.all())?;
        let pairs: Vec<(usize, usize)> = (0..m.rank())
            .flat_map(|s| (0..m.rank()).map(move |t| (s, t)))
            .filter(|&(s, t)| s != t && m.label(s, t).finite().is_some_and(|l| l > 2))
            .collect();
        let mut cases = 0usize;
        for id in 0..ball.level(r).end {
            let words = self.sys.reduced_words(ball.element(id))?;
            for &(s, t) in &pairs {
                if !words.iter().any(|u| u.starts_with(&[t, s, t])) {
                    continue;
                }
                let ust = u_st(m, s, t);
                for word in &words {
                    let Some(k) = word.iter().position(|&g| g == t) else { continue };
                    let sv = GenSet::from_iter(word[k + 1..].iter().copied());
                    if !sv.is_subset(ust.with(s).with(t)) {
                        continue;
                    }
                    cases += 1;
                    let sw = GenSet::from_iter(word[..k].iter().copied());
                    if !sw.is_subset(ust.with(s)) {
                        return Ok(Err(Counterexample::new(
                            "S(w) not inside U_st ∪ {s}",
                            json!({"element": self.word(word), "s": self.names()[s], "t": self.names()[t],
                                   "w": self.word(&word[..k])}),
                        )));
                    }
                }
            }
        }
        Ok(Ok(format!(
            "all elements of length ≤ {r}, {} pairs (s,t), {cases} factorizations",
            pairs.len()
        )))
    }

    fn check_l51(&self) -> Finding {
        let m = self.m();
        let mut pairs = 0usize;
        for t in 0..m.rank() {
            let sp = s_prime(m, t);
            for (i, &a) in sp.iter().enumerate() {
                for &b in &sp[i + 1..] {
                    pairs += 1;
                    if m.label(a, b).finite().is_some() {
                        return Err(Counterexample::new(
                            "two letters of S' with a finite label",
                            json!({"t": self.names()[t], "s": self.names()[a], "s'": self.names()[b]}),
                        ));
                    }
                }
            }
        }
        Ok(format!("{pairs} pairs in S' over all t"))
    }

    fn check_c52(&mut self) -> Result<Finding> {
        let m = self.m().clone();
        let poset = m.spherical_poset()?;
        let nerve = self.nerve()?.clone();
        let mut edges = 0usize;
        for t in 0..m.rank() {
            for s in s_prime(&m, t) {
                edges += 1;
                let ust = u_st(&m, s, t);
                let link = nerve.link(&{
                    let mut e = vec![s, t];
                    e.sort_unstable();
                    e
                })?;
                let verts = GenSet::from_iter(link.vertices());
                if verts != ust {
                    return Ok(Err(Counterexample::new(
                        "link of the edge differs from U_st",
                        json!({"s": m.name(s), "t": m.name(t), "link": m.format_set(verts), "U_st": m.format_set(ust)}),
                    )));
                }
                for ty in poset.at_least(GenSet::from_iter([s, t])) {
                    if let Some(u) = ty.without(s).without(t).iter().find(|&u| !m.commute(u, s) || !m.commute(u, t)) {
                        return Ok(Err(Counterexample::new(
                            "generator of a spherical type above {s,t} fails to commute",
                            json!({"s": m.name(s), "t": m.name(t), "type": m.format_set(ty), "u": m.name(u)}),
                        )));
                    }
                }
            }
        }
        Ok(Ok(format!("{edges} ordered edges with label above 2")))
    }

    fn check_l53(&self) -> Result<Finding> {
        let m = self.m();
        let mut count = 0usize;
        for t in 0..m.rank() {
            let u = star(m, t);
            for s in s_prime(m, t) {
                let mst = m.label(s, t).finite().expect("finite") as usize;
                let mut word = vec![t];
                while word.len() < mst {
                    let w = self.sys.normal_form(&word)?;
                    count += 1;
                    if w.length() != word.len() || !self.sys.is_reduced_pair(&w, u.without(t), u.without(t))? {
                        return Ok(Err(Counterexample::new(
                            "alternating word is not (U−t,U−t)-reduced",
                            json!({"t": m.name(t), "s": m.name(s), "u": self.word(&word)}),
                        )));
                    }
                    word.extend([s, t]);
                }
            }
        }
        Ok(Ok(format!("{count} alternating elements tst…t")))
    }

    /// `g_{ST}(uv) = g_{ST}(u)·g_{ST}(v)` for every proper nonempty `T` and
    /// every pair with `ℓ(u)+ℓ(v)` within the bound.
    fn check_l54(&self) -> Result<Finding> {
        let m = self.m();
        let all = m.all();
        let ball = Ball::build(self.sys, all, self.radius, DEFAULT_BALL_CAP)?;
        let targets: Vec<GenSet> = all.subsets().filter(|t| !t.is_empty() && *t != all).collect();
        let counts = ball.level_counts();
        let pair_count = |r: usize| -> usize {
            (0..=r)
                .map(|i| counts.get(i).copied().unwrap_or(0) * (0..=r - i).map(|j| counts.get(j).copied().unwrap_or(0)).sum::<usize>())
                .sum()
        };
        let mut r = 0;
        while r < self.radius && pair_count(r + 1) * targets.len().max(1) <= self.opts.pair_budget {
            r += 1;
        }
        let mut checked = 0usize;
        for &t in &targets {
            let tb = Ball::build(self.sys, t, r, DEFAULT_BALL_CAP)?;
            let proj: Vec<usize> = (0..ball.level(r).end)
                .map(|id| {
                    let kept: Vec<usize> = ball.element(id).word().iter().copied().filter(|&g| t.contains(g)).collect();
                    tb.walk(0, &kept).expect("projection is no longer")
                })
                .collect();
            for u in 0..ball.level(r).end {
                for v in 0..ball.level(r - ball.length(u)).end {
                    let uv = ball.walk(u, ball.element(v).word()).expect("inside the ball");
                    let rhs = tb.walk(proj[u], tb.element(proj[v]).word());
                    checked += 1;
                    if rhs != Some(proj[uv]) {
                        return Ok(Err(Counterexample::new(
                            "projection is not multiplicative",
                            json!({"T": m.format_set(t), "u": self.word(ball.element(u).word()),
                                   "v": self.word(ball.element(v).word())}),
                        )));
                    }
                }
            }
        }
        Ok(Ok(format!(
            "{} targets T, all pairs with ℓ(u)+ℓ(v) ≤ {r}, {checked} products",
            targets.len()
        )))
    }

    fn check_p59(&self, p: &PaintedRuin, sphere: bool) -> Result<Finding> {
        let m = self.m();
        let iso = match p.certify_w_prime_complex(self.sys)? {
            Ok(d) => d,
            Err(ce) => return Ok(Err(ce)),
        };
        let mut notes = vec![iso];
        for &s in p.s_prime() {
            let ust = p.u_st(s);
            let mut note = format!("s={}: ", m.name(s));
            if ust.is_empty() {
                note.push_str("U_st empty, W' trivial, infinite and manifold clauses n/a");
            } else {
                match (0..m.rank()).flat_map(|a| (0..m.rank()).map(move |b| (a, b))).find(|&(a, b)| {
                    ust.contains(a) && ust.contains(b) && a < b && m.label(a, b).finite().is_none()
                }) {
                    Some((a, b)) => note.push_str(&format!("W' infinite via m({},{})=∞", m.name(a), m.name(b))),
                    None if !m.is_spherical(ust) => note.push_str("W' infinite: U_st not spherical"),
                    None => note.push_str("W' finite"),
                }
                if sphere {
                    let mut e = vec![s, p.t()];
                    e.sort_unstable();
                    let nerve = build_nerve(m)?;
                    let link = nerve.link(&e)?;
                    note.push_str(&format!("; link of {{s,t}} sphere check: {:?}", link.sphere_check().is_sphere()));
                }
            }
            notes.push(note);
        }
        Ok(Ok(notes.join("; ")))
    }

    /// Top relative cycles of `Ω(V,T)`, `|T| = 2`, vanish: every class of
    /// top cells joined through shared relative ridges contains a ridge
    /// with a single top coface. Also checks that two top types sharing a
    /// relative ridge type differ in letters with an infinite label.
    fn check_two_letter_top(&mut self) -> Result<Finding> {
        let m = self.m().clone();
        let n = (self.nerve()?.dimension() + 1) as usize;
        let poset = m.spherical_poset()?;
        let all = m.all();
        let ball = Ball::build(self.sys, all, self.radius, DEFAULT_BALL_CAP)?;
        let mut w0: HashMap<GenSet, usize> = HashMap::new();
        for t in poset.of_size(n).into_iter().chain(poset.of_size(n - 1)) {
            w0.insert(t, Ball::build(self.sys, t, usize::MAX, DEFAULT_BALL_CAP)?.max_length());
        }
        let tops = poset.of_size(n);
        let mut instances = 0usize;
        let mut top_cells = 0usize;
        for t in poset.of_size(2) {
            for v in all.minus(t).subsets().map(|x| x.union(t)) {
                let types: Vec<GenSet> = tops.iter().copied().filter(|x| t.is_subset(*x) && x.is_subset(v)).collect();
                // nerve sub-check
                for (i, &a) in types.iter().enumerate() {
                    for &b in &types[i + 1..] {
                        let common = a.intersection(b);
                        if common.len() == n - 1 {
                            let r = a.minus(common).max().expect("one letter");
                            let s = b.minus(common).max().expect("one letter");
                            if m.label(r, s).finite().is_some() {
                                return Ok(Err(Counterexample::new(
                                    "adjacent top types with a finite label between the extra letters",
                                    json!({"V": m.format_set(v), "T": m.format_set(t),
                                           "types": [m.format_set(a), m.format_set(b)]}),
                                )));
                            }
                        }
                    }
                }
                if types.is_empty() {
                    continue;
                }
                instances += 1;
                let mut cells: Vec<(usize, GenSet)> = Vec::new();
                let mut index: HashMap<(usize, GenSet), usize> = HashMap::new();
                for &ty in &types {
                    if w0[&ty] > self.radius {
                        continue;
                    }
                    for id in 0..ball.level(self.radius - w0[&ty]).end {
                        if !ball.has_right_descent_in(id, ty) {
                            index.insert((id, ty), cells.len());
                            cells.push((id, ty));
                        }
                    }
                }
                top_cells += cells.len();
                let mut uf = UnionFind::new(cells.len());
                let mut free = vec![false; cells.len()];
                let mut seen: HashSet<(usize, GenSet)> = HashSet::new();
                for &(rep, ty) in &cells {
                    let members = ball.coset_members(rep, ty);
                    for x in ty.minus(t).iter() {
                        let ridge = ty.without(x);
                        let mut reps: Vec<usize> = members.iter().map(|&z| ball.coset_min(z, ridge)).collect();
                        reps.sort_unstable();
                        reps.dedup();
                        for rr in reps {
                            if !seen.insert((rr, ridge)) {
                                continue;
                            }
                            let cof: Vec<usize> = v
                                .minus(ridge)
                                .iter()
                                .map(|y| ridge.with(y))
                                .filter(|c| w0.contains_key(c) && c.len() == n)
                                .filter_map(|c| index.get(&(ball.coset_min(rr, c), c)).copied())
                                .collect();
                            match cof.len() {
                                1 => free[cof[0]] = true,
                                2 => uf.union(cof[0], cof[1]),
                                k if k > 2 => {
                                    return Ok(Err(Counterexample::new(
                                        "relative ridge with more than two top cofaces",
                                        json!({"V": m.format_set(v), "T": m.format_set(t),
                                               "ridge_rep": self.word(ball.element(rr).word()),
                                               "ridge_type": m.format_set(ridge), "cofaces": k}),
                                    )))
                                }
                                _ => {}
                            }
                        }
                    }
                }
                let mut has_free: HashMap<usize, bool> = HashMap::new();
                for i in 0..cells.len() {
                    *has_free.entry(uf.find(i)).or_default() |= free[i];
                }
                if let Some((&root, _)) = has_free.iter().filter(|(_, &f)| !f).min_by_key(|(&r, _)| r) {
                    let (rep, ty) = cells[root];
                    return Ok(Err(Counterexample::new(
                        "class of adjacent top cells with no free relative ridge",
                        json!({"V": m.format_set(v), "T": m.format_set(t),
                               "cell_rep": self.word(ball.element(rep).word()), "cell_type": m.format_set(ty)}),
                    )));
                }
            }
        }
        Ok(Ok(format!(
            "n={n}, radius {}: {instances} pairs (V,T) with top cells, {top_cells} top cells, every class has a free ridge",
            self.radius
        )))
    }
}

/// `act(h, ē) = ē` for `h ∈ W_{U−t}` in the ball, and the action law on
/// every color of the palette for pairs within the bound.
fn check_trivial_action(sys: &CoxeterSystem, p: &PaintedRuin, opts: Options) -> Result<Finding> {
    let t = p.t();
    let ball = p.one.sigma.ball();
    let space: &ColorSpace = &p.space;
    let e = crate::coloring::Color::trivial();
    let mut trivial = 0usize;
    for id in 0..ball.len() {
        let w = ball.element(id);
        if w.count(t) == 0 {
            trivial += 1;
            if !space.act(w, &e)?.is_trivial() {
                return Ok(Err(Counterexample::new(
                    "element avoiding t moves ē",
                    json!({"h": w.display_with(sys.matrix().names())}),
                )));
            }
        }
    }
    let counts = ball.level_counts();
    let palette = p.color_count();
    let mut r = 0;
    loop {
        let next = r + 1;
        if next > ball.max_length() {
            break;
        }
        let pairs: usize = (0..=next)
            .map(|i| counts.get(i).copied().unwrap_or(0) * (0..=next - i).map(|j| counts.get(j).copied().unwrap_or(0)).sum::<usize>())
            .sum();
        if pairs * palette * space.factors().len().max(1) > opts.pair_budget / 20 {
            break;
        }
        r = next;
    }
    let mut laws = 0usize;
    for u in 0..ball.level(r).end {
        for v in 0..ball.level(r - ball.length(u)).end {
            let uv = ball.walk(u, ball.element(v).word()).expect("inside the ball");
            for c in 0..palette {
                let a = p.color(c);
                let lhs = space.act(ball.element(uv), a)?;
                let rhs = space.act(ball.element(u), &space.act(ball.element(v), a)?)?;
                laws += 1;
                if lhs != rhs {
                    let names = sys.matrix().names();
                    return Ok(Err(Counterexample::new(
                        "action law fails",
                        json!({"u": ball.element(u).display_with(names), "v": ball.element(v).display_with(names),
                               "color": a.display_with(names)}),
                    )));
                }
            }
        }
    }
    Ok(Ok(format!(
        "{trivial} elements avoiding t fix ē; action law on {laws} (u,v,color) with ℓ(u)+ℓ(v) ≤ {r}"
    )))
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// `S′ = {s : 2 < m_st < ∞}`.
pub fn s_prime(m: &CoxeterMatrix, t: usize) -> Vec<usize> {
    (0..m.rank())
        .filter(|&s| s != t && m.label(s, t).finite().is_some_and(|l| l > 2))
        .collect()
}

/// `U_st = {r : m_rt = m_rs = 2}`.
pub fn u_st(m: &CoxeterMatrix, s: usize, t: usize) -> GenSet {
    GenSet::from_iter((0..m.rank()).filter(|&r| r != s && r != t && m.commute(r, s) && m.commute(r, t)))
}

/// The star of `t`: `t` and the letters with a finite label to it.
pub fn star(m: &CoxeterMatrix, t: usize) -> GenSet {
    GenSet::from_iter((0..m.rank()).filter(|&r| r == t || m.label(r, t).finite().is_some()))
}

/// One check on `sys` at `radius`.
pub fn verify_lemma(sys: &CoxeterSystem, check_id: &str, radius: usize) -> Result<VerificationReport> {
    Session::new(sys, radius, Options::default()).verify(check_id)
}

/// Every registered check, or those in `only`, in registry order.
pub fn verify_suite(
    sys: &CoxeterSystem,
    radius: usize,
    only: Option<&[String]>,
    opts: Options,
) -> Result<Vec<VerificationReport>> {
    if let Some(ids) = only {
        if let Some(bad) = ids.iter().find(|id| !CHECK_IDS.contains(&id.as_str())) {
            return Err(CoxeterError::Parse(format!("unknown check id {bad}")));
        }
    }
    let mut session = Session::new(sys, radius, opts);
    let mut out = Vec::new();
    for id in CHECK_IDS {
        if only.is_some_and(|ids| !ids.iter().any(|x| x == id)) {
            continue;
        }
        out.push(session.verify(id)?);
    }
    Ok(out)
}

/// Re-runs a failed report and tells whether the failure reproduces with
/// an identical witness.
pub fn replay(sys: &CoxeterSystem, report: &VerificationReport) -> Result<bool> {
    if sys.matrix().digest() != report.system {
        return Err(CoxeterError::Parse("report was produced for a different system".into()));
    }
    let opts = Options {
        gate: report.gated,
        ..Options::default()
    };
    let again = Session::new(sys, report.radius, opts).verify(&report.check_id)?;
    Ok(again.verdict == report.verdict && again.witness == report.witness)
}

/// Counts of pass, fail and skipped.
pub fn tally(reports: &[VerificationReport]) -> BTreeMap<&'static str, usize> {
    let mut out = BTreeMap::new();
    for r in reports {
        let k = match r.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
        };
        *out.entry(k).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn suite(name: &str, r: usize) -> Vec<VerificationReport> {
        let sys = CoxeterSystem::new(fixtures::by_name(name).unwrap());
        verify_suite(&sys, r, None, Options::default()).unwrap()
    }

    #[test]
    fn example_suite_passes() {
        let reports = suite("example", 8);
        for r in &reports {
            let expected = if r.check_id == "P-2ruintop" { Verdict::Skipped } else { Verdict::Pass };
            assert_eq!(r.verdict, expected, "{r:?}");
        }
    }

    #[test]
    fn non_flag_triangle_is_gated() {
        let reports = suite("triangle4", 5);
        for r in &reports {
            match r.check_id.as_str() {
                "L4.1" | "L4.2" | "L5.4" => assert_eq!(r.verdict, Verdict::Pass, "{r:?}"),
                _ => assert_eq!(r.verdict, Verdict::Skipped, "{r:?}"),
            }
        }
    }

    #[test]
    fn ungated_failure_replays() {
        let sys = CoxeterSystem::new(fixtures::triangle_labels4());
        let opts = Options { gate: false, ..Options::default() };
        let r = Session::new(&sys, 4, opts).verify("L5.1").unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.witness.is_some());
        assert!(replay(&sys, &r).unwrap());
        let mut tampered = r.clone();
        tampered.witness.as_mut().unwrap().data = json!({});
        assert!(!replay(&sys, &tampered).unwrap());
    }

    #[test]
    fn unknown_ids_are_rejected() {
        let sys = CoxeterSystem::new(fixtures::dihedral(4));
        assert!(verify_lemma(&sys, "L9.9", 3).is_err());
    }

    #[test]
    fn octahedron_top_cells() {
        let sys = CoxeterSystem::new(fixtures::octahedron_even());
        let r = verify_lemma(&sys, "P-2ruintop", 7).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
    }
}
