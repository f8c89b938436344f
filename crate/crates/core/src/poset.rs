//! Finite posets given by an explicit relation matrix.
//!
//! Every face poset in this crate is materialized as a [`FinitePoset`]: an
//! ordered list of human-readable element keys together with a reflexive,
//! antisymmetric and transitive `<=` relation. The relation is validated when
//! the poset is built, so every other service here may assume a genuine
//! partial order.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major bitset relation. `row(i)` holds every `j` with `i <= j`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct BitMatrix {
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix {
            words,
            bits: vec![0; n * words],
        }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    fn row_count(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// A finite partially ordered set with string keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    keys: Vec<String>,
    leq: BitMatrix,
    geq: BitMatrix,
}

/// Rank function and face counts of a poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grading {
    /// Length of the longest chain from a minimal element, per element.
    pub ranks: Vec<usize>,
    /// Number of elements of each rank.
    pub fvector: Vec<usize>,
    /// False when some cover relation skips a rank.
    pub graded: bool,
}

/// JSON export of a poset: element keys and its Hasse diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<[usize; 2]>,
}

impl FinitePoset {
    /// Builds a poset from an explicit relation, validating the partial order axioms.
    pub fn new(keys: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = keys.len();
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidPoset(format!(
                "relation matrix is not {n}x{n}"
            )));
        }
        let mut m = BitMatrix::new(n);
        for (i, row) in leq.iter().enumerate() {
            for (j, &b) in row.iter().enumerate() {
                if b {
                    m.set(i, j);
                }
            }
        }
        Self::from_matrix(keys, m)
    }

    /// Builds a poset by evaluating `leq(i, j)` for every ordered pair, in parallel.
    pub fn from_fn<F>(keys: Vec<String>, leq: F) -> Result<Self>
    where
        F: Fn(usize, usize) -> bool + Sync,
    {
        let n = keys.len();
        let rows: Vec<Vec<usize>> = (0..n)
            .into_par_iter()
            .map(|i| (0..n).filter(|&j| i == j || leq(i, j)).collect())
            .collect();
        let mut m = BitMatrix::new(n);
        for (i, row) in rows.into_iter().enumerate() {
            for j in row {
                m.set(i, j);
            }
        }
        Self::from_matrix(keys, m)
    }

    fn from_matrix(keys: Vec<String>, m: BitMatrix) -> Result<Self> {
        let n = keys.len();
        for (i, key) in keys.iter().enumerate() {
            if !m.get(i, i) {
                return Err(Error::InvalidPoset(format!("not reflexive at {key}")));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if m.get(i, j) && m.get(j, i) {
                    return Err(Error::InvalidPoset(format!(
                        "not antisymmetric: {} and {}",
                        keys[i], keys[j]
                    )));
                }
            }
        }
        // i <= j implies up(j) is contained in up(i).
        for i in 0..n {
            for j in 0..n {
                if i != j && m.get(i, j) {
                    let (ri, rj) = (m.row(i), m.row(j));
                    if rj.iter().zip(ri).any(|(a, b)| a & !b != 0) {
                        return Err(Error::InvalidPoset(format!(
                            "not transitive through {} <= {}",
                            keys[i], keys[j]
                        )));
                    }
                }
            }
        }
        let mut t = BitMatrix::new(n);
        for i in 0..n {
            for j in 0..n {
                if m.get(i, j) {
                    t.set(j, i);
                }
            }
        }
        Ok(FinitePoset {
            keys,
            leq: m,
            geq: t,
        })
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    pub fn key(&self, i: usize) -> &str {
        &self.keys[i]
    }

    pub fn index_of(&self, key: &str) -> Option<usize> {
        self.keys.iter().position(|k| k == key)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq.get(i, j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq.get(i, j)
    }

    /// Number of elements `>= i` (including `i`).
    pub fn up_size(&self, i: usize) -> usize {
        self.leq.row_count(i)
    }

    /// Number of elements `<= i` (including `i`).
    pub fn down_size(&self, i: usize) -> usize {
        self.geq.row_count(i)
    }

    /// Cover relations `x ⋖ y`, sorted.
    pub fn hasse(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut covers = Vec::new();
        for x in 0..n {
            let above = self.leq.row(x);
            for y in 0..n {
                if !self.lt(x, y) {
                    continue;
                }
                // any z with x < z < y?
                let below = self.geq.row(y);
                let between = above.iter().zip(below).enumerate().any(|(w, (a, b))| {
                    let mut bits = a & b;
                    if w == x / 64 {
                        bits &= !(1u64 << (x % 64));
                    }
                    if w == y / 64 {
                        bits &= !(1u64 << (y % 64));
                    }
                    bits != 0
                });
                if !between {
                    covers.push((x, y));
                }
            }
        }
        covers
    }

    /// Ranks by longest chain from a minimal element, with the f-vector.
    pub fn grading(&self) -> Grading {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        let down: Vec<usize> = (0..n).map(|i| self.down_size(i)).collect();
        order.sort_by_key(|&i| down[i]);
        let mut ranks = vec![0usize; n];
        for (pos, &y) in order.iter().enumerate() {
            ranks[y] = order[..pos]
                .iter()
                .filter(|&&x| self.lt(x, y))
                .map(|&x| ranks[x] + 1)
                .max()
                .unwrap_or(0);
        }
        let top = ranks.iter().copied().max().map_or(0, |r| r + 1);
        let mut fvector = vec![0usize; top];
        for &r in &ranks {
            fvector[r] += 1;
        }
        let graded = self.hasse().iter().all(|&(x, y)| ranks[y] == ranks[x] + 1);
        Grading {
            ranks,
            fvector,
            graded,
        }
    }

    pub fn fvector(&self) -> Vec<usize> {
        self.grading().fvector
    }

    /// Alternating sum of the f-vector. Fails on non-graded posets.
    pub fn euler(&self) -> Result<i64> {
        let g = self.grading();
        if !g.graded {
            return Err(Error::NotGraded);
        }
        Ok(g.fvector
            .iter()
            .enumerate()
            .map(|(r, &f)| if r % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum())
    }

    /// True iff `map` is a bijection onto `other` preserving `<=` in both directions.
    pub fn is_isomorphism(&self, other: &FinitePoset, map: &[usize]) -> bool {
        let n = self.len();
        if other.len() != n || map.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &t in map {
            if t >= n || seen[t] {
                return false;
            }
            seen[t] = true;
        }
        (0..n).all(|i| (0..n).all(|j| self.leq(i, j) == other.leq(map[i], map[j])))
    }

    /// Searches for an order isomorphism `self -> other`.
    ///
    /// Elements are first split into classes by iterated refinement of
    /// (rank, cover degrees, up/down set sizes); the backtracking search only
    /// pairs elements of the same class and visits elements in breadth-first
    /// order over the Hasse diagram so that each step is constrained by
    /// already-placed neighbours. The returned witness is verified.
    pub fn isomorphism(&self, other: &FinitePoset) -> Option<Vec<usize>> {
        let n = self.len();
        if other.len() != n {
            return None;
        }
        if n == 0 {
            return Some(Vec::new());
        }
        let (ca, cb) = refine_colors(self, other);
        let mut hist_a = BTreeMap::new();
        let mut hist_b = BTreeMap::new();
        for &c in &ca {
            *hist_a.entry(c).or_insert(0usize) += 1;
        }
        for &c in &cb {
            *hist_b.entry(c).or_insert(0usize) += 1;
        }
        if hist_a != hist_b {
            return None;
        }

        let order = search_order(self, &ca);
        let mut by_color: HashMap<usize, Vec<usize>> = HashMap::new();
        for (j, &c) in cb.iter().enumerate() {
            by_color.entry(c).or_default().push(j);
        }
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        if backtrack(self, other, &order, 0, &ca, &by_color, &mut map, &mut used) {
            debug_assert!(self.is_isomorphism(other, &map));
            if self.is_isomorphism(other, &map) {
                return Some(map);
            }
        }
        None
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.keys.clone(),
            covers: self.hasse().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }

    /// Graphviz export of the Hasse diagram with one rank per row.
    pub fn to_dot(&self, name: &str) -> String {
        let g = self.grading();
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", escape(name));
        let _ = writeln!(out, "  rankdir=BT;");
        let _ = writeln!(out, "  node [shape=box, fontname=\"monospace\"];");
        for (i, k) in self.keys.iter().enumerate() {
            let _ = writeln!(out, "  n{i} [label=\"{}\"];", escape(k));
        }
        for (r, _) in g.fvector.iter().enumerate() {
            let members: Vec<String> = (0..self.len())
                .filter(|&i| g.ranks[i] == r)
                .map(|i| format!("n{i}"))
                .collect();
            let _ = writeln!(out, "  {{ rank=same; {} }}", members.join("; "));
        }
        for (a, b) in self.hasse() {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Joint color refinement over the disjoint union of two posets.
fn refine_colors(a: &FinitePoset, b: &FinitePoset) -> (Vec<usize>, Vec<usize>) {
    type Adjacency = Vec<Vec<usize>>;
    fn initial(p: &FinitePoset) -> (Adjacency, Adjacency, Adjacency) {
        let n = p.len();
        let g = p.grading();
        let mut up = vec![Vec::new(); n];
        let mut down = vec![Vec::new(); n];
        for (x, y) in p.hasse() {
            up[x].push(y);
            down[y].push(x);
        }
        let sig = (0..n)
            .map(|i| {
                vec![
                    g.ranks[i],
                    up[i].len(),
                    down[i].len(),
                    p.up_size(i),
                    p.down_size(i),
                ]
            })
            .collect();
        (sig, up, down)
    }
    let (sa, upa, downa) = initial(a);
    let (sb, upb, downb) = initial(b);
    let mut ca = compress(&sa, &sb);
    let mut cb = ca.split_off(a.len());
    loop {
        let step = |c: &[usize], up: &[Vec<usize>], down: &[Vec<usize>]| -> Vec<Vec<usize>> {
            (0..c.len())
                .map(|i| {
                    let mut u: Vec<usize> = up[i].iter().map(|&j| c[j]).collect();
                    let mut d: Vec<usize> = down[i].iter().map(|&j| c[j]).collect();
                    u.sort_unstable();
                    d.sort_unstable();
                    let mut s = vec![c[i], usize::MAX];
                    s.extend(u);
                    s.push(usize::MAX);
                    s.extend(d);
                    s
                })
                .collect()
        };
        let na = step(&ca, &upa, &downa);
        let nb = step(&cb, &upb, &downb);
        let mut next_a = compress(&na, &nb);
        let next_b = next_a.split_off(a.len());
        let classes = |c: &[usize], d: &[usize]| {
            let mut v: Vec<usize> = c.iter().chain(d).copied().collect();
            v.sort_unstable();
            v.dedup();
            v.len()
        };
        let stable = classes(&next_a, &next_b) == classes(&ca, &cb);
        ca = next_a;
        cb = next_b;
        if stable {
            return (ca, cb);
        }
    }
}

fn compress(a: &[Vec<usize>], b: &[Vec<usize>]) -> Vec<usize> {
    let mut all: Vec<&Vec<usize>> = a.iter().chain(b).collect();
    all.sort();
    all.dedup();
    let index: HashMap<&Vec<usize>, usize> = all.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    a.iter().chain(b).map(|v| index[v]).collect()
}

/// Breadth-first order over the undirected Hasse diagram, rarest color first.
fn search_order(p: &FinitePoset, colors: &[usize]) -> Vec<usize> {
    let n = p.len();
    let mut adj = vec![Vec::new(); n];
    for (x, y) in p.hasse() {
        adj[x].push(y);
        adj[y].push(x);
    }
    let mut freq: HashMap<usize, usize> = HashMap::new();
    for &c in colors {
        *freq.entry(c).or_insert(0) += 1;
    }
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&i| (freq[&colors[i]], i));
    for s in starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            let mut next: Vec<usize> = adj[x].iter().copied().filter(|&y| !seen[y]).collect();
            next.sort_by_key(|&y| (freq[&colors[y]], y));
            for y in next {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    order
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    a: &FinitePoset,
    b: &FinitePoset,
    order: &[usize],
    depth: usize,
    colors: &[usize],
    by_color: &HashMap<usize, Vec<usize>>,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let x = order[depth];
    let Some(candidates) = by_color.get(&colors[x]) else {
        return false;
    };
    for &y in candidates {
        if used[y] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&w| {
            let v = map[w];
            a.leq(x, w) == b.leq(y, v) && a.leq(w, x) == b.leq(v, y)
        });
        if !consistent {
            continue;
        }
        map[x] = y;
        used[y] = true;
        if backtrack(a, b, order, depth + 1, colors, by_color, map, used) {
            return true;
        }
        used[y] = false;
        map[x] = usize::MAX;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> FinitePoset {
        let keys = (0..n).map(|i| i.to_string()).collect();
        FinitePoset::from_fn(keys, |i, j| i <= j).unwrap()
    }

    fn antichain(n: usize) -> FinitePoset {
        let keys = (0..n).map(|i| i.to_string()).collect();
        FinitePoset::from_fn(keys, |i, j| i == j).unwrap()
    }

    /// Face poset of a polygon with `k` sides: vertices, edges, one cell.
    fn polygon(k: usize) -> FinitePoset {
        let mut keys: Vec<String> = (0..k).map(|i| format!("v{i}")).collect();
        keys.extend((0..k).map(|i| format!("e{i}")));
        keys.push("cell".into());
        FinitePoset::from_fn(keys, |i, j| {
            if i == j || j == 2 * k {
                return true;
            }
            i < k && j >= k && j < 2 * k && {
                let e = j - k;
                i == e || i == (e + 1) % k
            }
        })
        .unwrap()
    }

    #[test]
    fn rejects_non_orders() {
        let keys = vec!["a".to_string(), "b".to_string()];
        let cyc = vec![vec![true, true], vec![true, true]];
        assert!(FinitePoset::new(keys.clone(), cyc).is_err());
        let irreflexive = vec![vec![false, false], vec![false, true]];
        assert!(FinitePoset::new(keys, irreflexive).is_err());
        let keys3: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let intrans = vec![
            vec![true, true, false],
            vec![false, true, true],
            vec![false, false, true],
        ];
        assert!(matches!(
            FinitePoset::new(keys3, intrans),
            Err(Error::InvalidPoset(_))
        ));
    }

    #[test]
    fn hasse_counts() {
        assert_eq!(chain(3).hasse().len(), 2);
        assert_eq!(antichain(4).hasse().len(), 0);
        // hexagon: 12 vertex-edge covers and 6 edge-cell covers
        assert_eq!(polygon(6).hasse().len(), 18);
    }

    #[test]
    fn fvectors_and_euler() {
        assert_eq!(polygon(6).fvector(), vec![6, 6, 1]);
        assert_eq!(polygon(5).fvector(), vec![5, 5, 1]);
        assert_eq!(polygon(6).euler().unwrap(), 1);
        assert_eq!(polygon(5).euler().unwrap(), 1);
        assert_eq!(chain(1).fvector(), vec![1]);
        assert_eq!(chain(1).euler().unwrap(), 1);
        let g = polygon(6).grading();
        assert_eq!(g.fvector.iter().sum::<usize>(), 13);
    }

    #[test]
    fn non_graded_is_flagged() {
        // a < b < c and a < c' directly with c' maximal next to c: "a<d" cover skips no rank,
        // but x < z with x minimal and z of rank 2 via another chain does.
        let keys: Vec<String> = ["x", "y", "z", "w"].iter().map(|s| s.to_string()).collect();
        // x<y<z, w<z : w has rank 0, cover w⋖z jumps from 0 to 2
        let p = FinitePoset::from_fn(keys, |i, j| {
            i == j || matches!((i, j), (0, 1) | (1, 2) | (0, 2) | (3, 2))
        })
        .unwrap();
        assert!(!p.grading().graded);
        assert_eq!(p.euler(), Err(Error::NotGraded));
    }

    #[test]
    fn isomorphism_search() {
        let p = polygon(6);
        let w = p.isomorphism(&p).unwrap();
        assert!(p.is_isomorphism(&p, &w));
        assert!(chain(3).isomorphism(&antichain(3)).is_none());
        assert!(polygon(5).isomorphism(&polygon(6)).is_none());

        // relabelled copy
        let q = polygon(6);
        let perm: Vec<usize> = (0..q.len()).rev().collect();
        let keys = perm.iter().map(|&i| q.key(i).to_string()).collect();
        let r = FinitePoset::from_fn(keys, |i, j| q.leq(perm[i], perm[j])).unwrap();
        let w = q.isomorphism(&r).unwrap();
        assert!(q.is_isomorphism(&r, &w));
        assert!(r.isomorphism(&q).is_some());
    }

    #[test]
    fn exports() {
        let p = chain(2);
        let j = p.to_json();
        assert_eq!(j.covers, vec![[0, 1]]);
        let dot = p.to_dot("c2");
        assert!(dot.contains("n0 -> n1"));
        assert!(dot.starts_with("digraph"));
    }
}
