//! Complementary pairs of trees with levels, the bipermutahedron face poset,
//! the leaf-transfer isomorphism between pair families of the same total size,
//! and the ordered bipartition codec.
//!
//! Levels are numbered from the top down. The up tree has its root on top and
//! the down tree has its root at the bottom, so on every edge the endpoint
//! drawn higher carries the strictly smaller level.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poset::FinitePoset;
use crate::tree::{
    enumerate_trees, parse_annotated, Annotated, Child, Node, Orientation, PlanarTree,
};

/// Which tree of a pair a vertex belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Up,
    Down,
}

/// A vertex of either tree of a pair, by index into that tree's vertex table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexRef {
    pub side: Side,
    pub index: usize,
}

impl VertexRef {
    pub fn up(index: usize) -> Self {
        VertexRef {
            side: Side::Up,
            index,
        }
    }

    pub fn down(index: usize) -> Self {
        VertexRef {
            side: Side::Down,
            index,
        }
    }
}

/// Tree whose vertices carry an integer label (a level or a zone).
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum LNode {
    Leaf,
    Vertex(usize, Vec<LNode>),
}

impl LNode {
    pub(crate) fn build(tree: &PlanarTree, labels: &[usize]) -> LNode {
        fn go(t: &PlanarTree, labels: &[usize], i: usize) -> LNode {
            LNode::Vertex(
                labels[i],
                t.vertex(i)
                    .children
                    .iter()
                    .map(|c| match *c {
                        Child::Leaf(_) => LNode::Leaf,
                        Child::Vertex(j) => go(t, labels, j),
                    })
                    .collect(),
            )
        }
        if tree.is_exceptional() {
            LNode::Leaf
        } else {
            go(tree, labels, 0)
        }
    }

    /// Shape plus labels in preorder (the vertex-table order).
    pub(crate) fn split(&self) -> (Node, Vec<usize>) {
        fn go(n: &LNode, out: &mut Vec<usize>) -> Node {
            match n {
                LNode::Leaf => Node::Leaf,
                LNode::Vertex(l, ch) => {
                    out.push(*l);
                    Node::Vertex(ch.iter().map(|c| go(c, out)).collect())
                }
            }
        }
        let mut labels = Vec::new();
        let node = go(self, &mut labels);
        (node, labels)
    }

    pub(crate) fn from_annotated(a: Annotated) -> Result<LNode> {
        match a {
            Annotated::Leaf => Ok(LNode::Leaf),
            Annotated::Vertex {
                children,
                label: Some(l),
                marked: false,
            } => Ok(LNode::Vertex(
                l,
                children
                    .into_iter()
                    .map(LNode::from_annotated)
                    .collect::<Result<_>>()?,
            )),
            Annotated::Vertex { marked: true, .. } => {
                Err(Error::parse(0, "'!' marks are not allowed here"))
            }
            Annotated::Vertex { label: None, .. } => {
                Err(Error::parse(0, "every vertex needs a level number"))
            }
        }
    }
}

/// Writes a tree with its vertex labels after each closing parenthesis.
pub(crate) fn write_labeled(tree: &PlanarTree, labels: &[usize]) -> String {
    fn go(t: &PlanarTree, labels: &[usize], i: usize, out: &mut String) {
        out.push('(');
        for (k, c) in t.vertex(i).children.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            match *c {
                Child::Leaf(_) => out.push('*'),
                Child::Vertex(j) => go(t, labels, j, out),
            }
        }
        out.push(')');
        out.push_str(&labels[i].to_string());
    }
    let mut s = String::new();
    if tree.is_exceptional() {
        s.push('*');
    } else {
        go(tree, labels, 0, &mut s);
    }
    s
}

/// Parses `U ~ D` where each side is labeled tree text.
pub(crate) fn parse_labeled_pair(
    text: &str,
) -> Result<(PlanarTree, Vec<usize>, PlanarTree, Vec<usize>)> {
    let Some((left, right)) = text.split_once('~') else {
        return Err(Error::parse(0, "expected `UP ~ DOWN`"));
    };
    let side = |s: &str, o: Orientation, offset: usize| -> Result<(PlanarTree, Vec<usize>)> {
        let a = parse_annotated(s).map_err(|e| match e {
            Error::Parse {
                offset: o2,
                message,
            } => Error::parse(offset + o2, message),
            other => other,
        })?;
        let (node, labels) = LNode::from_annotated(a)?.split();
        Ok((PlanarTree::new(o, node)?, labels))
    };
    let (u, ul) = side(left, Orientation::Up, 0)?;
    let (d, dl) = side(right, Orientation::Down, left.len() + 1)?;
    Ok((u, ul, d, dl))
}

/// Pair `(U, D, level)` with a strictly monotone, surjective level function.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComplementaryPair {
    up: PlanarTree,
    down: PlanarTree,
    up_levels: Vec<usize>,
    down_levels: Vec<usize>,
    height: usize,
}

impl fmt::Display for ComplementaryPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ~ {}",
            write_labeled(&self.up, &self.up_levels),
            write_labeled(&self.down, &self.down_levels)
        )
    }
}

impl ComplementaryPair {
    /// Levels are listed per tree in vertex-table order and are 1-based.
    pub fn new(
        up: PlanarTree,
        down: PlanarTree,
        up_levels: Vec<usize>,
        down_levels: Vec<usize>,
    ) -> Result<Self> {
        if up.orientation() != Orientation::Up || down.orientation() != Orientation::Down {
            return Err(Error::InvalidLevels(
                "first tree must be up-rooted and second down-rooted".into(),
            ));
        }
        if up_levels.len() != up.vertex_count() || down_levels.len() != down.vertex_count() {
            return Err(Error::InvalidLevels(format!(
                "expected {} + {} levels, got {} + {}",
                up.vertex_count(),
                down.vertex_count(),
                up_levels.len(),
                down_levels.len()
            )));
        }
        let height = up_levels
            .iter()
            .chain(&down_levels)
            .copied()
            .max()
            .unwrap_or(0);
        let used: BTreeSet<usize> = up_levels.iter().chain(&down_levels).copied().collect();
        if used.contains(&0) || used.len() != height {
            return Err(Error::InvalidLevels(format!(
                "levels {used:?} are not exactly 1..={height}"
            )));
        }
        for (i, v) in up.vertices().iter().enumerate() {
            if let Some(p) = v.parent {
                if up_levels[p] >= up_levels[i] {
                    return Err(Error::InvalidLevels(format!(
                        "up vertex {} is not strictly below its parent",
                        v.id
                    )));
                }
            }
        }
        for (i, v) in down.vertices().iter().enumerate() {
            if let Some(p) = v.parent {
                if down_levels[p] <= down_levels[i] {
                    return Err(Error::InvalidLevels(format!(
                        "down vertex {} is not strictly above its parent",
                        v.id
                    )));
                }
            }
        }
        Ok(ComplementaryPair {
            up,
            down,
            up_levels,
            down_levels,
            height,
        })
    }

    /// The single element of the (1, 1) family.
    pub fn trivial() -> Self {
        ComplementaryPair {
            up: PlanarTree::exceptional(Orientation::Up),
            down: PlanarTree::exceptional(Orientation::Down),
            up_levels: Vec::new(),
            down_levels: Vec::new(),
            height: 0,
        }
    }

    /// Parses text like `((* *)3 *)1 ~ (* *)2`.
    pub fn parse(text: &str) -> Result<Self> {
        let (u, ul, d, dl) = parse_labeled_pair(text)?;
        ComplementaryPair::new(u, d, ul, dl)
    }

    pub fn up(&self) -> &PlanarTree {
        &self.up
    }

    pub fn down(&self) -> &PlanarTree {
        &self.down
    }

    pub fn up_levels(&self) -> &[usize] {
        &self.up_levels
    }

    pub fn down_levels(&self) -> &[usize] {
        &self.down_levels
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// `(m, n)`: leaves of the up tree and of the down tree.
    pub fn arity(&self) -> (usize, usize) {
        (self.up.leaf_count(), self.down.leaf_count())
    }

    pub fn level(&self, v: VertexRef) -> usize {
        match v.side {
            Side::Up => self.up_levels[v.index],
            Side::Down => self.down_levels[v.index],
        }
    }

    pub fn vertex_refs(&self) -> Vec<VertexRef> {
        (0..self.up.vertex_count())
            .map(VertexRef::up)
            .chain((0..self.down.vertex_count()).map(VertexRef::down))
            .collect()
    }

    /// Vertices at each level, top level first.
    pub fn level_sets(&self) -> Vec<Vec<VertexRef>> {
        let mut out = vec![Vec::new(); self.height];
        for v in self.vertex_refs() {
            out[self.level(v) - 1].push(v);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let ids: Vec<Vec<String>> = self
            .level_sets()
            .iter()
            .map(|vs| {
                vs.iter()
                    .map(|&v| vertex_label(&self.up, &self.down, v))
                    .collect()
            })
            .collect();
        json!({
            "up": self.up.to_json(),
            "down": self.down.to_json(),
            "levels": ids,
            "text": self.to_string(),
        })
    }
}

/// `u:0.1` / `d:0` style identifier used in JSON exports.
pub(crate) fn vertex_label(up: &PlanarTree, down: &PlanarTree, v: VertexRef) -> String {
    match v.side {
        Side::Up => format!("u:{}", up.vertex(v.index).id),
        Side::Down => format!("d:{}", down.vertex(v.index).id),
    }
}

/// Enumerates all level functions on a pair of trees, top level first.
pub(crate) fn level_functions(up: &PlanarTree, down: &PlanarTree) -> Vec<(Vec<usize>, Vec<usize>)> {
    let pu = up.vertex_count();
    let total = pu + down.vertex_count();
    assert!(total < 32, "too many vertices to enumerate levels");
    // vertices that must sit strictly higher before a vertex can be placed
    let mut prereq = vec![0u32; total];
    for (i, v) in up.vertices().iter().enumerate() {
        if let Some(p) = v.parent {
            prereq[i] |= 1 << p;
        }
    }
    for (i, v) in down.vertices().iter().enumerate() {
        for c in &v.children {
            if let Child::Vertex(j) = *c {
                prereq[pu + i] |= 1 << (pu + j);
            }
        }
    }
    let full = if total == 0 { 0 } else { (1u32 << total) - 1 };
    let mut out = Vec::new();
    let mut levels = vec![0usize; total];
    fn rec(
        placed: u32,
        depth: usize,
        full: u32,
        prereq: &[u32],
        levels: &mut Vec<usize>,
        pu: usize,
        out: &mut Vec<(Vec<usize>, Vec<usize>)>,
    ) {
        if placed == full {
            out.push((levels[..pu].to_vec(), levels[pu..].to_vec()));
            return;
        }
        let avail: u32 = (0..prereq.len())
            .filter(|&i| placed >> i & 1 == 0 && prereq[i] & !placed == 0)
            .fold(0, |acc, i| acc | 1 << i);
        let mut sub = avail;
        while sub != 0 {
            for (i, l) in levels.iter_mut().enumerate() {
                if sub >> i & 1 == 1 {
                    *l = depth;
                }
            }
            rec(placed | sub, depth + 1, full, prereq, levels, pu, out);
            sub = (sub - 1) & avail;
        }
    }
    rec(0, 1, full, &prereq, &mut levels, pu, &mut out);
    out
}

/// All complementary pairs with `m` up-leaves and `n` down-leaves, sorted.
pub fn enumerate_leveled_pairs(m: usize, n: usize) -> Result<Vec<ComplementaryPair>> {
    let ups = enumerate_trees(m, Orientation::Up)?;
    let downs = enumerate_trees(n, Orientation::Down)?;
    let mut out: Vec<ComplementaryPair> = ups
        .par_iter()
        .flat_map_iter(|u| {
            downs.iter().flat_map(move |d| {
                level_functions(u, d)
                    .into_iter()
                    .map(move |(ul, dl)| ComplementaryPair {
                        height: ul.iter().chain(&dl).copied().max().unwrap_or(0),
                        up: u.clone(),
                        down: d.clone(),
                        up_levels: ul,
                        down_levels: dl,
                    })
            })
        })
        .collect();
    out.sort();
    Ok(out)
}

fn check_same_arity(a: (usize, usize), b: (usize, usize)) -> Result<()> {
    if a != b {
        return Err(Error::Domain(format!(
            "cannot compare pairs of arity {a:?} and {b:?}"
        )));
    }
    Ok(())
}

/// `X1 <= X2` iff tree contractions and a monotone level map make the square commute.
pub fn pair_leq(x1: &ComplementaryPair, x2: &ComplementaryPair) -> Result<bool> {
    check_same_arity(x1.arity(), x2.arity())?;
    let (Some(fu), Some(fd)) = (x1.up.morphism_to(&x2.up), x1.down.morphism_to(&x2.down)) else {
        return Ok(false);
    };
    // the level map is forced by the vertices sitting on each level
    let mut hat = vec![0usize; x1.height + 1];
    let pairs = x1
        .up_levels
        .iter()
        .zip(&fu)
        .map(|(&l, &j)| (l, x2.up_levels[j]))
        .chain(
            x1.down_levels
                .iter()
                .zip(&fd)
                .map(|(&l, &j)| (l, x2.down_levels[j])),
        );
    for (l1, l2) in pairs {
        if hat[l1] != 0 && hat[l1] != l2 {
            return Ok(false);
        }
        hat[l1] = l2;
    }
    Ok(hat[1..].windows(2).all(|w| w[0] <= w[1]))
}

/// The bipermutahedron face poset on pairs of arity `(m, n)`.
pub fn bipermutahedron_poset(m: usize, n: usize) -> Result<FinitePoset> {
    if m + n < 2 {
        return Err(Error::Domain("need m + n >= 2".into()));
    }
    let pairs = enumerate_leveled_pairs(m, n)?;
    let keys = pairs.iter().map(|p| p.to_string()).collect();
    FinitePoset::from_fn(keys, |i, j| pair_leq(&pairs[i], &pairs[j]).unwrap_or(false))
}

/// Face dimension of a pair in its bipermutahedron.
pub fn pair_dim(x: &ComplementaryPair) -> usize {
    let (m, n) = x.arity();
    m + n - 2 - x.height
}

/// Moves the leftmost down-leaf across to become the rightmost up-leaf.
pub fn opet_step(x: &ComplementaryPair) -> Result<ComplementaryPair> {
    let (_, n) = x.arity();
    if n < 2 {
        return Err(Error::Domain(format!(
            "the down tree needs at least 2 leaves, has {n}"
        )));
    }
    let mut down = LNode::build(&x.down, &x.down_levels);
    let level = amputate_leftmost(&mut down);
    let mut up = LNode::build(&x.up, &x.up_levels);
    graft_rightmost(&mut up, level);
    let (un, ul) = up.split();
    let (dn, dl) = down.split();
    ComplementaryPair::new(
        PlanarTree::new(Orientation::Up, un)?,
        PlanarTree::new(Orientation::Down, dn)?,
        ul,
        dl,
    )
}

/// Removes the leftmost leaf; returns the level of the vertex it hung from.
fn amputate_leftmost(node: &mut LNode) -> usize {
    let LNode::Vertex(level, children) = node else {
        unreachable!("down tree has at least two leaves")
    };
    let level = *level;
    if matches!(children[0], LNode::Leaf) {
        children.remove(0);
        if children.len() == 1 {
            *node = children.pop().expect("one child left");
        }
        level
    } else {
        amputate_leftmost(&mut children[0])
    }
}

fn graft_rightmost(node: &mut LNode, level: usize) {
    match node {
        LNode::Vertex(l, children) if *l < level => {
            graft_rightmost(children.last_mut().expect("vertex has children"), level)
        }
        LNode::Vertex(l, children) if *l == level => children.push(LNode::Leaf),
        _ => {
            let below = std::mem::replace(node, LNode::Leaf);
            *node = LNode::Vertex(level, vec![below, LNode::Leaf]);
        }
    }
}

/// Applies [`opet_step`] until the down tree is exceptional.
pub fn opet_to_single(x: &ComplementaryPair) -> Result<ComplementaryPair> {
    let mut cur = x.clone();
    while cur.down.leaf_count() > 1 {
        cur = opet_step(&cur)?;
    }
    Ok(cur)
}

/// Checks that repeated leaf transfer is an order isomorphism onto the `(m+n-1, 1)` family.
pub fn opet_iso_check(m: usize, n: usize) -> Result<bool> {
    let source = enumerate_leveled_pairs(m, n)?;
    let target = enumerate_leveled_pairs(m + n - 1, 1)?;
    if source.len() != target.len() {
        return Ok(false);
    }
    let images: Vec<ComplementaryPair> = source
        .par_iter()
        .map(opet_to_single)
        .collect::<Result<_>>()?;
    let index: Vec<Option<usize>> = images
        .iter()
        .map(|y| target.binary_search(y).ok())
        .collect();
    if index.iter().any(Option::is_none) {
        return Ok(false);
    }
    let index: Vec<usize> = index.into_iter().map(Option::unwrap).collect();
    if index.iter().collect::<BTreeSet<_>>().len() != index.len() {
        return Ok(false);
    }
    let ok = (0..source.len()).into_par_iter().all(|i| {
        (0..source.len()).all(|j| {
            pair_leq(&source[i], &source[j]).unwrap_or(false)
                == pair_leq(&target[index[i]], &target[index[j]]).unwrap_or(false)
        })
    });
    Ok(ok)
}

/// Restricts a pair to connected vertex sets of its trees, renumbering levels densely.
///
/// An empty set stands for the exceptional tree. The leaves of each restricted
/// tree are the edges leaving the chosen vertex set, in planar order.
pub fn restrict(
    x: &ComplementaryPair,
    up_vertices: &BTreeSet<usize>,
    down_vertices: &BTreeSet<usize>,
) -> Result<ComplementaryPair> {
    let side = |t: &PlanarTree,
                sel: &BTreeSet<usize>,
                levels: &[usize]|
     -> Result<(PlanarTree, Vec<usize>)> {
        if sel.is_empty() {
            return Ok((PlanarTree::exceptional(t.orientation()), Vec::new()));
        }
        let (sub, map) = t.induced_subtree(sel)?;
        let mut l = vec![0; sub.vertex_count()];
        for (old, new) in map {
            l[new] = levels[old];
        }
        Ok((sub, l))
    };
    let (u, ul) = side(&x.up, up_vertices, &x.up_levels)?;
    let (d, dl) = side(&x.down, down_vertices, &x.down_levels)?;
    let used: Vec<usize> = ul
        .iter()
        .chain(&dl)
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let renumber = |l: usize| used.binary_search(&l).expect("level in use") + 1;
    ComplementaryPair::new(
        u,
        d,
        ul.into_iter().map(renumber).collect(),
        dl.into_iter().map(renumber).collect(),
    )
}

/// Ordered sequence of blocks `(U_j, D_j)`; `U_j` holds up-gap labels
/// `1..m-1` and `D_j` holds down-gap labels `m..m+n-2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedBipartition {
    m: usize,
    n: usize,
    blocks: Vec<(BTreeSet<usize>, BTreeSet<usize>)>,
}

impl OrderedBipartition {
    pub fn new(
        m: usize,
        n: usize,
        blocks: Vec<(BTreeSet<usize>, BTreeSet<usize>)>,
    ) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidBipartition("m and n must be positive".into()));
        }
        let mut seen_u = BTreeSet::new();
        let mut seen_d = BTreeSet::new();
        for (j, (u, d)) in blocks.iter().enumerate() {
            if u.is_empty() && d.is_empty() {
                return Err(Error::InvalidBipartition(format!(
                    "block {} is empty",
                    j + 1
                )));
            }
            for &x in u {
                if !(1..m).contains(&x) || !seen_u.insert(x) {
                    return Err(Error::InvalidBipartition(format!(
                        "up label {x} is repeated or outside 1..{}",
                        m - 1
                    )));
                }
            }
            for &x in d {
                if !(m..m + n - 1).contains(&x) || !seen_d.insert(x) {
                    return Err(Error::InvalidBipartition(format!(
                        "down label {x} is repeated or outside {m}..{}",
                        m + n - 2
                    )));
                }
            }
        }
        if seen_u.len() != m - 1 || seen_d.len() != n - 1 {
            return Err(Error::InvalidBipartition("some labels are missing".into()));
        }
        Ok(OrderedBipartition { m, n, blocks })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[(BTreeSet<usize>, BTreeSet<usize>)] {
        &self.blocks
    }

    /// Union of each block, forgetting which tree a label came from.
    pub fn merged(&self) -> Vec<BTreeSet<usize>> {
        self.blocks
            .iter()
            .map(|(u, d)| u.union(d).copied().collect())
            .collect()
    }

    fn comma_mode(&self) -> bool {
        self.m + self.n >= 12
    }

    /// Parses `(4|57|12|36)` (when `n == 1`) or `(2/|/3|1/)`.
    ///
    /// Labels are single digits unless `m + n - 2 >= 10`, in which case they are
    /// separated by commas.
    pub fn parse(text: &str, m: usize, n: usize) -> Result<Self> {
        let t = text.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::parse(0, "bipartition must be wrapped in parentheses"))?;
        let comma = m + n >= 12;
        let labels = |s: &str| -> Result<BTreeSet<usize>> {
            let s = s.trim();
            if s.is_empty() {
                return Ok(BTreeSet::new());
            }
            let parts: Vec<String> = if comma {
                s.split(',').map(|p| p.trim().to_string()).collect()
            } else {
                s.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(String::from)
                    .collect()
            };
            parts
                .iter()
                .map(|p| {
                    p.parse::<usize>()
                        .map_err(|_| Error::parse(0, format!("bad label {p:?}")))
                })
                .collect()
        };
        let mut blocks = Vec::new();
        if !inner.trim().is_empty() {
            for part in inner.split('|') {
                let (u, d) = match part.split_once('/') {
                    Some((u, d)) => (labels(u)?, labels(d)?),
                    None if n == 1 => (labels(part)?, BTreeSet::new()),
                    None => return Err(Error::parse(0, format!("block {part:?} needs a '/'"))),
                };
                blocks.push((u, d));
            }
        }
        OrderedBipartition::new(m, n, blocks)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m,
            "n": self.n,
            "blocks": self.blocks.iter().map(|(u, d)| json!({"up": u, "down": d})).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for OrderedBipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.comma_mode() { "," } else { "" };
        let join = |s: &BTreeSet<usize>| {
            s.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(sep)
        };
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|(u, d)| {
                if self.n == 1 {
                    join(u)
                } else {
                    format!("{}/{}", join(u), join(d))
                }
            })
            .collect();
        write!(f, "({})", parts.join("|"))
    }
}

/// Records, level by level, which gaps between adjacent leaves are closed off by a vertex there.
pub fn gamma_encode(x: &ComplementaryPair) -> OrderedBipartition {
    let (m, n) = x.arity();
    let mut blocks = vec![(BTreeSet::new(), BTreeSet::new()); x.height];
    for g in 0..m.saturating_sub(1) {
        let l = x.up_levels[x.up.gap_vertex(g)];
        blocks[l - 1].0.insert(g + 1);
    }
    for g in 0..n.saturating_sub(1) {
        let l = x.down_levels[x.down.gap_vertex(g)];
        blocks[l - 1].1.insert(m + g);
    }
    OrderedBipartition { m, n, blocks }
}

/// Inverse of [`gamma_encode`].
pub fn gamma_decode(b: &OrderedBipartition) -> Result<ComplementaryPair> {
    let (m, n) = (b.m, b.n);
    let mut gap_level = vec![0usize; m + n];
    for (j, (u, d)) in b.blocks.iter().enumerate() {
        for &x in u.iter().chain(d) {
            gap_level[x] = j + 1;
        }
    }
    let up_gaps = &gap_level[1..m];
    let down_gaps = &gap_level[m..m + n - 1];
    // up vertices split at the highest remaining level, down ones at the lowest
    fn build(gaps: &[usize], leaves: std::ops::Range<usize>, up: bool) -> LNode {
        if leaves.len() == 1 {
            return LNode::Leaf;
        }
        let inner = &gaps[leaves.start..leaves.end - 1];
        let pick = if up {
            *inner.iter().min().expect("nonempty")
        } else {
            *inner.iter().max().expect("nonempty")
        };
        let mut children = Vec::new();
        let mut start = leaves.start;
        for g in leaves.start..leaves.end - 1 {
            if gaps[g] == pick {
                children.push(build(gaps, start..g + 1, up));
                start = g + 1;
            }
        }
        children.push(build(gaps, start..leaves.end, up));
        LNode::Vertex(pick, children)
    }
    let (un, ul) = build(up_gaps, 0..m, true).split();
    let (dn, dl) = build(down_gaps, 0..n, false).split();
    let x = ComplementaryPair::new(
        PlanarTree::new(Orientation::Up, un)?,
        PlanarTree::new(Orientation::Down, dn)?,
        ul,
        dl,
    )
    .map_err(|e| Error::InvalidBipartition(e.to_string()))?;
    if gamma_encode(&x) != *b {
        return Err(Error::InvalidBipartition(format!("{b} does not decode")));
    }
    Ok(x)
}

/// Reverses the order of the blocks.
pub fn tau(b: &OrderedBipartition) -> OrderedBipartition {
    let mut blocks = b.blocks.clone();
    blocks.reverse();
    OrderedBipartition {
        m: b.m,
        n: b.n,
        blocks,
    }
}
