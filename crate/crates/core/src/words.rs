//! Word arithmetic in Coxeter groups.
//!
//! Elements are stored as their shortlex-least reduced word (length first,
//! then lexicographic in generator input order). Normal forms come from
//! saturating the braid class of a word: by Tits' solution of the word
//! problem a word is reduced iff no sequence of braid moves produces two
//! equal adjacent letters, and the reduced words of an element form a
//! single braid class.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::{BuildHasherDefault, Hasher};

use crate::error::{CoxeterError, Result};
use crate::system::{CoxeterSystem, GenSet, Label};

/// Default cap on ball sizes.
pub const DEFAULT_BALL_CAP: usize = 2_000_000;

/// A group element in shortlex normal form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupElement {
    word: Vec<usize>,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement { word: Vec::new() }
    }

    pub(crate) fn from_normal_word(word: Vec<usize>) -> Self {
        GroupElement { word }
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// `S(w)`: the letters of any reduced expression.
    pub fn support(&self) -> GenSet {
        GenSet::from_iter(self.word.iter().copied())
    }

    pub fn count(&self, g: usize) -> usize {
        self.word.iter().filter(|&&x| x == g).count()
    }

    /// Renders the word with generator names, `e` for the identity.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.word.is_empty() {
            "e".into()
        } else {
            self.word.iter().map(|&g| names[g].as_str()).collect::<Vec<_>>().join("")
        }
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement({self})")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.word.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", parts.join("."))
    }
}

enum Saturation {
    Least(Vec<usize>),
    Repeat(Vec<usize>),
}

/// Multiply-xorshift hasher for packed words.
#[derive(Default)]
struct PackedHasher(u64);

impl Hasher for PackedHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ b as u64).wrapping_mul(0x100_0000_01b3);
        }
    }

    fn write_u128(&mut self, x: u128) {
        let mixed = (x as u64) ^ ((x >> 64) as u64).rotate_left(29);
        let h = mixed.wrapping_mul(0x9e37_79b9_7f4a_7c15);
        self.0 = h ^ (h >> 31);
    }
}

fn has_adjacent_repeat(word: &[usize]) -> Option<usize> {
    word.windows(2).position(|p| p[0] == p[1])
}

impl CoxeterSystem {
    /// All words reachable from `word` by braid moves.
    pub fn braid_class(&self, word: &[usize]) -> Result<HashSet<Vec<usize>>> {
        self.saturate(word, false).map(|(class, _)| class)
    }

    /// Breadth-first braid saturation. With `stop_on_repeat`, returns as soon
    /// as a word with two equal adjacent letters appears.
    fn saturate(
        &self,
        word: &[usize],
        stop_on_repeat: bool,
    ) -> Result<(HashSet<Vec<usize>>, Option<Vec<usize>>)> {
        let m = self.matrix();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(word.to_vec());
        queue.push_back(word.to_vec());
        if stop_on_repeat && has_adjacent_repeat(word).is_some() {
            return Ok((seen, Some(word.to_vec())));
        }
        while let Some(x) = queue.pop_front() {
            let k = x.len();
            for i in 0..k.saturating_sub(1) {
                let (a, b) = (x[i], x[i + 1]);
                if a == b {
                    continue;
                }
                let Label::Finite(mab) = m.label(a, b) else {
                    continue;
                };
                let mab = mab as usize;
                if i + mab > k {
                    continue;
                }
                let alternates = (0..mab).all(|j| x[i + j] == if j % 2 == 0 { a } else { b });
                if !alternates {
                    continue;
                }
                let mut y = x.clone();
                for j in 0..mab {
                    y[i + j] = if j % 2 == 0 { b } else { a };
                }
                if seen.contains(&y) {
                    continue;
                }
                if stop_on_repeat && has_adjacent_repeat(&y).is_some() {
                    seen.insert(y.clone());
                    return Ok((seen, Some(y)));
                }
                seen.insert(y.clone());
                if seen.len() > self.class_cap {
                    return Err(CoxeterError::WordTooLong { cap: self.class_cap });
                }
                queue.push_back(y);
            }
        }
        Ok((seen, None))
    }

    /// Braid saturation that tracks only the shortlex-least member, or stops
    /// at the first word with a repeated adjacent letter.
    fn saturate_least(&self, word: &[usize]) -> Result<Saturation> {
        if self.rank() <= 16 && word.len() <= 32 {
            return self.saturate_packed(word);
        }
        let (class, repeat) = self.saturate(word, true)?;
        Ok(match repeat {
            Some(w) => Saturation::Repeat(w),
            None => Saturation::Least(class.into_iter().min().expect("nonempty")),
        })
    }

    fn saturate_packed(&self, word: &[usize]) -> Result<Saturation> {
        let k = word.len();
        let m = self.matrix();
        // letter i sits in the nibble at 4*(31-i), so numeric order is lexicographic
        let shift = |i: usize| 4 * (31 - i) as u32;
        let get = |x: u128, i: usize| ((x >> shift(i)) & 0xf) as usize;
        let pack = |w: &[usize]| {
            w.iter()
                .enumerate()
                .fold(0u128, |acc, (i, &g)| acc | ((g as u128) << shift(i)))
        };
        let unpack = |x: u128| (0..k).map(|i| get(x, i)).collect::<Vec<usize>>();
        let repeats = |x: u128| (0..k.saturating_sub(1)).any(|i| get(x, i) == get(x, i + 1));
        let start = pack(word);
        if repeats(start) {
            return Ok(Saturation::Repeat(word.to_vec()));
        }
        let mut seen: HashSet<u128, BuildHasherDefault<PackedHasher>> = HashSet::default();
        seen.insert(start);
        let mut queue = vec![start];
        let mut least = start;
        while let Some(x) = queue.pop() {
            for i in 0..k.saturating_sub(1) {
                let (a, b) = (get(x, i), get(x, i + 1));
                if a == b {
                    continue;
                }
                let Label::Finite(mab) = m.label(a, b) else {
                    continue;
                };
                let mab = mab as usize;
                if i + mab > k {
                    continue;
                }
                if !(2..mab).all(|j| get(x, i + j) == if j % 2 == 0 { a } else { b }) {
                    continue;
                }
                let mut y = x;
                for j in 0..mab {
                    let g = if j % 2 == 0 { b } else { a };
                    y = (y & !(0xfu128 << shift(i + j))) | ((g as u128) << shift(i + j));
                }
                if !seen.insert(y) {
                    continue;
                }
                if repeats(y) {
                    return Ok(Saturation::Repeat(unpack(y)));
                }
                if seen.len() > self.class_cap {
                    return Err(CoxeterError::WordTooLong { cap: self.class_cap });
                }
                least = least.min(y);
                queue.push(y);
            }
        }
        Ok(Saturation::Least(unpack(least)))
    }

    fn cached(&self, key: &[usize]) -> Option<GroupElement> {
        self.cache.read().expect("cache lock").get(key).cloned()
    }

    fn remember(&self, key: Vec<usize>, value: &GroupElement) {
        self.cache.write().expect("cache lock").insert(key, value.clone());
    }

    /// Shortlex-least word of a reduced word's element.
    fn least_of_reduced(&self, reduced: &[usize]) -> Result<GroupElement> {
        match self.saturate_least(reduced)? {
            Saturation::Least(w) => Ok(GroupElement::from_normal_word(w)),
            Saturation::Repeat(_) => unreachable!("input word is reduced"),
        }
    }

    /// Canonical form of `w·s`.
    pub fn multiply(&self, w: &GroupElement, s: usize) -> Result<GroupElement> {
        let mut key = Vec::with_capacity(w.length() + 1);
        key.extend_from_slice(w.word());
        key.push(s);
        if let Some(hit) = self.cached(&key) {
            return Ok(hit);
        }
        let result = match self.saturate_least(&key)? {
            Saturation::Repeat(word) => {
                let i = has_adjacent_repeat(&word).expect("repeat present");
                let mut shorter = word;
                shorter.drain(i..i + 2);
                self.least_of_reduced(&shorter)?
            }
            Saturation::Least(word) => GroupElement::from_normal_word(word),
        };
        self.remember(key, &result);
        Ok(result)
    }

    /// Canonical form of `s·w`.
    pub fn left_multiply(&self, s: usize, w: &GroupElement) -> Result<GroupElement> {
        let inv = self.inverse(w)?;
        let prod = self.multiply(&inv, s)?;
        self.inverse(&prod)
    }

    pub fn inverse(&self, w: &GroupElement) -> Result<GroupElement> {
        let rev: Vec<usize> = w.word().iter().rev().copied().collect();
        self.least_of_reduced(&rev)
    }

    /// Shortlex normal form of an arbitrary word.
    pub fn normal_form(&self, letters: &[usize]) -> Result<GroupElement> {
        if let Some(&bad) = letters.iter().find(|&&g| g >= self.rank()) {
            return Err(CoxeterError::UnknownGenerator(bad.to_string()));
        }
        if let Some(hit) = self.cached(letters) {
            return Ok(hit);
        }
        let mut w = GroupElement::identity();
        for &s in letters {
            w = self.multiply(&w, s)?;
        }
        self.remember(letters.to_vec(), &w);
        Ok(w)
    }

    pub fn product(&self, u: &GroupElement, v: &GroupElement) -> Result<GroupElement> {
        let mut w = u.clone();
        for &s in v.word() {
            w = self.multiply(&w, s)?;
        }
        Ok(w)
    }

    /// Every reduced expression of `w`, sorted.
    pub fn reduced_words(&self, w: &GroupElement) -> Result<Vec<Vec<usize>>> {
        let mut words: Vec<Vec<usize>> = self.braid_class(w.word())?.into_iter().collect();
        words.sort();
        Ok(words)
    }

    /// `ℓ(ws) < ℓ(w)`.
    pub fn is_right_descent(&self, w: &GroupElement, s: usize) -> Result<bool> {
        Ok(self.multiply(w, s)?.length() < w.length())
    }

    /// `ℓ(sw) < ℓ(w)`.
    pub fn is_left_descent(&self, s: usize, w: &GroupElement) -> Result<bool> {
        Ok(self.left_multiply(s, w)?.length() < w.length())
    }

    /// `w` is `(X,Y)`-reduced: `ℓ(xw) > ℓ(w)` for `x ∈ X` and `ℓ(wy) > ℓ(w)` for `y ∈ Y`.
    pub fn is_reduced_pair(&self, w: &GroupElement, x: GenSet, y: GenSet) -> Result<bool> {
        for g in x.iter() {
            if self.is_left_descent(g, w)? {
                return Ok(false);
            }
        }
        for g in y.iter() {
            if self.is_right_descent(w, g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The unique minimal-length element of `wW_T`.
    pub fn coset_min_rep(&self, w: &GroupElement, t: GenSet) -> Result<GroupElement> {
        let mut cur = w.clone();
        'descend: loop {
            for g in t.iter() {
                let next = self.multiply(&cur, g)?;
                if next.length() < cur.length() {
                    cur = next;
                    continue 'descend;
                }
            }
            return Ok(cur);
        }
    }

    /// `{s,t} ⊆ S(w)` and `w` has an even number, at least two, of `t`s.
    pub fn is_t_even(&self, w: &GroupElement, s: usize, t: usize) -> Result<bool> {
        if !self.matrix().is_even() {
            return Err(CoxeterError::NotEven);
        }
        let support = w.support();
        let count = w.count(t);
        Ok(support.contains(s) && support.contains(t) && count >= 2 && count % 2 == 0)
    }

    /// Elements of `W_gens` of length at most `radius`.
    pub fn enumerate_ball(&self, gens: GenSet, radius: usize) -> Result<Ball> {
        Ball::build(self, gens, radius, DEFAULT_BALL_CAP)
    }

    /// The finite parabolic subgroup `W_T`, enumerated completely.
    pub fn finite_parabolic(&self, t: GenSet, cap: usize) -> Result<Ball> {
        Ball::build(self, t, usize::MAX, cap)
    }
}

/// The ball of radius `r` in the Cayley graph of `(W_gens, gens)`, with
/// the right-multiplication table restricted to the ball.
#[derive(Clone, Debug)]
pub struct Ball {
    gens: GenSet,
    radius: usize,
    rank: usize,
    elements: Vec<GroupElement>,
    index: HashMap<GroupElement, usize>,
    level_start: Vec<usize>,
    right: Vec<Option<usize>>,
}

impl Ball {
    pub fn build(sys: &CoxeterSystem, gens: GenSet, radius: usize, cap: usize) -> Result<Ball> {
        let m = sys.matrix();
        let rank = sys.rank();
        let gen_list: Vec<usize> = gens.iter().collect();
        let mut len: Vec<usize> = vec![0];
        let mut right: Vec<Option<usize>> = vec![None; rank];
        let mut level_start = vec![0usize, 1];
        let mut level = 0usize;
        // right-descent walks need the ids one level down; they are all in the table
        let down = |right: &[Option<usize>], len: &[usize], id: usize, s: usize| -> Option<usize> {
            right[id * rank + s].filter(|&n| len[n] + 1 == len[id])
        };
        while level < radius {
            let (lo, hi) = (level_start[level], level_start[level + 1]);
            let mut fresh: HashMap<(usize, usize), usize> = HashMap::new();
            for x in lo..hi {
                for &s in &gen_list {
                    if right[x * rank + s].is_some() {
                        continue;
                    }
                    // y = xs has length level+1; find its other right descents
                    let mut lower: Vec<(usize, usize)> = vec![(s, x)];
                    for &r in &gen_list {
                        if r == s {
                            continue;
                        }
                        let Some(mr) = m.label(s, r).finite() else {
                            continue;
                        };
                        let mr = mr as usize;
                        if mr > level + 1 {
                            continue;
                        }
                        // y·(s r s …) of length m must descend all the way
                        let mut cur = x;
                        let mut ok = true;
                        for i in 1..mr {
                            let l = if i % 2 == 1 { r } else { s };
                            match down(&right, &len, cur, l) {
                                Some(n) => cur = n,
                                None => {
                                    ok = false;
                                    break;
                                }
                            }
                        }
                        if !ok {
                            continue;
                        }
                        // y·r = z·(alternating word of length m−1 ending in s)
                        let mut up = cur;
                        for i in 0..mr - 1 {
                            let l = if (mr - 2 - i) % 2 == 0 { s } else { r };
                            up = right[up * rank + l].expect("lower levels are complete");
                        }
                        lower.push((r, up));
                    }
                    lower.sort_unstable();
                    let key = lower[0];
                    let y = match fresh.get(&key) {
                        Some(&y) => y,
                        None => {
                            let y = len.len();
                            if y + 1 > cap {
                                return Err(CoxeterError::ExplosionGuard {
                                    what: "ball enumeration".into(),
                                    cap,
                                });
                            }
                            len.push(level + 1);
                            right.extend(std::iter::repeat(None).take(rank));
                            for &(r, w) in &lower {
                                right[y * rank + r] = Some(w);
                                right[w * rank + r] = Some(y);
                            }
                            fresh.insert(key, y);
                            y
                        }
                    };
                    debug_assert_eq!(right[x * rank + s], Some(y));
                }
            }
            if fresh.is_empty() {
                break;
            }
            level += 1;
            level_start.push(len.len());
        }
        let n = len.len();
        // left table by s·(p·r) = (s·p)·r, then shortlex words by least left descent
        let mut left: Vec<Option<usize>> = vec![None; n * rank];
        let mut words: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &s in &gen_list {
            left[s] = right[s];
        }
        for x in 1..n {
            let (r, p) = gen_list
                .iter()
                .find_map(|&r| down(&right, &len, x, r).map(|p| (r, p)))
                .expect("nonidentity has a descent");
            for &s in &gen_list {
                left[x * rank + s] = left[p * rank + s].and_then(|y| right[y * rank + r]);
            }
            let a = gen_list
                .iter()
                .copied()
                .find(|&a| left[x * rank + a].is_some_and(|q| len[q] + 1 == len[x]))
                .expect("nonidentity has a left descent");
            let q = left[x * rank + a].expect("descent");
            let mut w = Vec::with_capacity(len[x]);
            w.push(a);
            w.extend_from_slice(&words[q]);
            words[x] = w;
        }
        // renumber so each level is in lexicographic order
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| len[a].cmp(&len[b]).then_with(|| words[a].cmp(&words[b])));
        let mut new_id = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            new_id[old] = new;
        }
        let mut table = vec![None; n * rank];
        let mut elements = Vec::with_capacity(n);
        let mut index = HashMap::with_capacity(n);
        for (new, &old) in order.iter().enumerate() {
            for s in 0..rank {
                table[new * rank + s] = right[old * rank + s].map(|o| new_id[o]);
            }
            let g = GroupElement::from_normal_word(std::mem::take(&mut words[old]));
            index.insert(g.clone(), new);
            elements.push(g);
        }
        Ok(Ball {
            gens,
            radius,
            rank,
            elements,
            index,
            level_start,
            right: table,
        })
    }

    pub fn gens(&self) -> GenSet {
        self.gens
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, id: usize) -> &GroupElement {
        &self.elements[id]
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn id_of(&self, w: &GroupElement) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn length(&self, id: usize) -> usize {
        self.elements[id].length()
    }

    /// Largest length present.
    pub fn max_length(&self) -> usize {
        self.level_start.len() - 2
    }

    /// Element ids of length exactly `k`.
    pub fn level(&self, k: usize) -> std::ops::Range<usize> {
        if k + 1 >= self.level_start.len() {
            return 0..0;
        }
        self.level_start[k]..self.level_start[k + 1]
    }

    /// Counts of elements by length.
    pub fn level_counts(&self) -> Vec<usize> {
        self.level_start.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// `w·s` when it lies in the ball.
    pub fn right(&self, id: usize, s: usize) -> Option<usize> {
        self.right[id * self.rank + s]
    }

    /// Follows `letters` by right multiplication from `id`.
    pub fn walk(&self, id: usize, letters: &[usize]) -> Option<usize> {
        letters.iter().try_fold(id, |cur, &s| self.right(cur, s))
    }

    /// The `(∅,T)`-reduced representative of `wW_T`.
    pub fn coset_min(&self, id: usize, t: GenSet) -> usize {
        let mut cur = id;
        'descend: loop {
            for g in t.iter() {
                if let Some(next) = self.right(cur, g) {
                    if self.length(next) < self.length(cur) {
                        cur = next;
                        continue 'descend;
                    }
                }
            }
            return cur;
        }
    }

    /// Whether `ℓ(ws) < ℓ(w)` for some `s ∈ t`.
    pub fn has_right_descent_in(&self, id: usize, t: GenSet) -> bool {
        t.iter().any(|g| {
            self.right(id, g)
                .is_some_and(|next| self.length(next) < self.length(id))
        })
    }

    /// Elements of `wW_T` reachable inside the ball from `id`.
    pub fn coset_members(&self, id: usize, t: GenSet) -> Vec<usize> {
        let mut seen: HashSet<usize> = HashSet::from([id]);
        let mut queue = vec![id];
        while let Some(cur) = queue.pop() {
            for g in t.iter() {
                if let Some(next) = self.right(cur, g) {
                    if seen.insert(next) {
                        queue.push(next);
                    }
                }
            }
        }
        let mut out: Vec<usize> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }
}
