//! Up-rooted trees cut by a diaphragm, painted trees, and the multiplihedron.
//!
//! Heights are geometric: the root sits on top, so vertices above the
//! diaphragm are the ones nearer the root. Painting everything above the
//! diaphragm black turns a diaphragm tree into a painted tree.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::leveled::write_labeled;
use crate::poset::FinitePoset;
use crate::tree::{
    enumerate_trees, parse_annotated, Annotated, Child, Node, Orientation, PlanarTree,
};
use crate::zone::{biassociahedron_poset, enumerate_zone_pairs, ZonePair};

/// Position of a vertex relative to the diaphragm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Height {
    Above,
    On,
    Below,
}

impl Height {
    /// Row number in the text format: 1 above, 2 on, 3 below.
    pub fn row(self) -> usize {
        match self {
            Height::Above => 1,
            Height::On => 2,
            Height::Below => 3,
        }
    }

    pub fn from_row(r: usize) -> Result<Self> {
        match r {
            1 => Ok(Height::Above),
            2 => Ok(Height::On),
            3 => Ok(Height::Below),
            _ => Err(Error::InvalidDiaphragm(format!("row {r} is not 1, 2 or 3"))),
        }
    }
}

/// An up-rooted tree with a height per vertex, monotone toward the root and
/// strict on the diaphragm.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiaphragmTree {
    tree: PlanarTree,
    heights: Vec<Height>,
}

impl DiaphragmTree {
    pub fn new(tree: PlanarTree, heights: Vec<Height>) -> Result<Self> {
        if tree.orientation() != Orientation::Up {
            return Err(Error::InvalidDiaphragm("the tree must be up-rooted".into()));
        }
        if heights.len() != tree.vertex_count() {
            return Err(Error::InvalidDiaphragm(
                "one height per vertex required".into(),
            ));
        }
        for (i, v) in tree.vertices().iter().enumerate() {
            if let Some(p) = v.parent {
                // rows grow downward, so a child never sits higher than its parent
                if heights[i].row() < heights[p].row() {
                    return Err(Error::InvalidDiaphragm(format!(
                        "{} is above its parent",
                        v.id
                    )));
                }
                if heights[i] == Height::On && heights[p] == Height::On {
                    return Err(Error::InvalidDiaphragm(format!(
                        "{} and its parent both lie on the diaphragm",
                        v.id
                    )));
                }
            }
        }
        Ok(DiaphragmTree { tree, heights })
    }

    /// Text like `((* *)3 *)2`: rows 1 above, 2 on, 3 below the diaphragm.
    pub fn parse(text: &str) -> Result<Self> {
        let (node, rows) = crate::leveled::LNode::from_annotated(parse_annotated(text)?)?.split();
        let heights = rows
            .into_iter()
            .map(Height::from_row)
            .collect::<Result<_>>()?;
        DiaphragmTree::new(PlanarTree::new(Orientation::Up, node)?, heights)
    }

    pub fn tree(&self) -> &PlanarTree {
        &self.tree
    }

    pub fn heights(&self) -> &[Height] {
        &self.heights
    }

    pub fn arity(&self) -> usize {
        self.tree.leaf_count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "tree": self.tree.to_json(),
            "heights": self.heights,
            "text": self.to_string(),
        })
    }
}

impl fmt::Display for DiaphragmTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<usize> = self.heights.iter().map(|h| h.row()).collect();
        f.write_str(&write_labeled(&self.tree, &rows))
    }
}

/// Reads a zone pair with a two-leaf down tree as a diaphragm on its up tree.
pub fn zone_to_diaphragm(z: &ZonePair) -> Result<DiaphragmTree> {
    if z.arity().1 != 2 {
        return Err(Error::Domain(format!(
            "diaphragms need two outputs, got {}",
            z.arity().1
        )));
    }
    let cut = z.down_zones()[0];
    let heights = z
        .up_zones()
        .iter()
        .map(|&u| match u.cmp(&cut) {
            std::cmp::Ordering::Less => Height::Above,
            std::cmp::Ordering::Equal => Height::On,
            std::cmp::Ordering::Greater => Height::Below,
        })
        .collect();
    DiaphragmTree::new(z.up().clone(), heights)
}

/// Inverse of [`zone_to_diaphragm`].
pub fn diaphragm_to_zone(d: &DiaphragmTree) -> ZonePair {
    let has_above = d.heights.contains(&Height::Above);
    let cut = 1 + has_above as usize;
    let up_zones = d
        .heights
        .iter()
        .map(|h| match h {
            Height::Above => 1,
            Height::On => cut,
            Height::Below => cut + 1,
        })
        .collect();
    let down = PlanarTree::corolla(Orientation::Down, 2).expect("two-leaf corolla");
    ZonePair::new(d.tree.clone(), down, up_zones, vec![cut])
        .expect("diaphragms give valid zone pairs")
}

/// `d1 <= d2` iff the tree morphism keeps the diaphragm and respects its closed sides.
pub fn diaphragm_leq(d1: &DiaphragmTree, d2: &DiaphragmTree) -> Result<bool> {
    if d1.arity() != d2.arity() {
        return Err(Error::Domain(format!(
            "cannot compare diaphragm trees with {} and {} leaves",
            d1.arity(),
            d2.arity()
        )));
    }
    let Some(phi) = d1.tree.morphism_to(&d2.tree) else {
        return Ok(false);
    };
    Ok(phi.iter().enumerate().all(|(v, &w)| {
        let (h1, h2) = (d1.heights[v], d2.heights[w]);
        h2 == h1 || h2 == Height::On
    }))
}

/// All diaphragm trees with `m` leaves, by brute force over heights, sorted.
pub fn enumerate_diaphragms(m: usize) -> Result<Vec<DiaphragmTree>> {
    let trees = enumerate_trees(m, Orientation::Up)?;
    let mut out: Vec<DiaphragmTree> = trees
        .par_iter()
        .flat_map_iter(|t| {
            let k = t.vertex_count();
            (0..3usize.pow(k as u32)).filter_map(move |mut code| {
                let hs = (0..k)
                    .map(|_| {
                        let h = [Height::Above, Height::On, Height::Below][code % 3];
                        code /= 3;
                        h
                    })
                    .collect();
                DiaphragmTree::new(t.clone(), hs).ok()
            })
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Painted tree vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PaintedNode {
    /// White input leg.
    Leaf,
    /// Monochrome white vertex, at least two inputs.
    White(Vec<PaintedNode>),
    /// Monochrome black vertex, at least two inputs.
    Black(Vec<PaintedNode>),
    /// White inputs, black output, at least one input.
    Apply(Vec<PaintedNode>),
}

impl PaintedNode {
    fn is_white_edge(&self) -> bool {
        matches!(self, PaintedNode::Leaf | PaintedNode::White(_))
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            PaintedNode::Leaf => 1,
            PaintedNode::White(c) | PaintedNode::Black(c) | PaintedNode::Apply(c) => {
                c.iter().map(PaintedNode::leaf_count).sum()
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidPainted(msg.into()));
        match self {
            PaintedNode::Leaf => Ok(()),
            PaintedNode::White(c) => {
                if c.len() < 2 {
                    return bad("white vertices need at least two inputs");
                }
                if !c.iter().all(PaintedNode::is_white_edge) {
                    return bad("a white vertex has a black input");
                }
                c.iter().try_for_each(PaintedNode::validate)
            }
            PaintedNode::Black(c) => {
                if c.len() < 2 {
                    return bad("black vertices need at least two inputs");
                }
                if c.iter().any(PaintedNode::is_white_edge) {
                    return bad("a black vertex has a white input");
                }
                c.iter().try_for_each(PaintedNode::validate)
            }
            PaintedNode::Apply(c) => {
                if c.is_empty() {
                    return bad("painting vertices need an input");
                }
                if !c.iter().all(PaintedNode::is_white_edge) {
                    return bad("a painting vertex has a black input");
                }
                c.iter().try_for_each(PaintedNode::validate)
            }
        }
    }

    /// Dimension of the face: type (i) vertices add `arity - 2`, painting vertices `arity - 1`.
    pub fn dim(&self) -> usize {
        match self {
            PaintedNode::Leaf => 0,
            PaintedNode::White(c) | PaintedNode::Black(c) => {
                c.len() - 2 + c.iter().map(PaintedNode::dim).sum::<usize>()
            }
            PaintedNode::Apply(c) => c.len() - 1 + c.iter().map(PaintedNode::dim).sum::<usize>(),
        }
    }
}

impl fmt::Display for PaintedNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, c: &[PaintedNode]| -> fmt::Result {
            f.write_str("(")?;
            for (i, x) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")
        };
        match self {
            PaintedNode::Leaf => f.write_str("*"),
            PaintedNode::White(c) | PaintedNode::Black(c) => list(f, c),
            PaintedNode::Apply(c) => {
                f.write_str("!")?;
                list(f, c)
            }
        }
    }
}

/// A painted tree: white leaves, black root leg.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PaintedTree {
    root: PaintedNode,
}

impl PaintedTree {
    pub fn new(root: PaintedNode) -> Result<Self> {
        if root.is_white_edge() {
            return Err(Error::InvalidPainted("the root leg must be black".into()));
        }
        root.validate()?;
        Ok(PaintedTree { root })
    }

    /// Text with `!` before painting vertices, e.g. `(!(* *) !(*))`.
    pub fn parse(text: &str) -> Result<Self> {
        fn go(a: Annotated, white: bool) -> Result<PaintedNode> {
            match a {
                Annotated::Leaf => Ok(PaintedNode::Leaf),
                Annotated::Vertex { label: Some(_), .. } => {
                    Err(Error::parse(0, "painted trees carry no numbers"))
                }
                Annotated::Vertex {
                    children, marked, ..
                } => {
                    let below = white || marked;
                    let kids = children
                        .into_iter()
                        .map(|c| go(c, below))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(if marked {
                        PaintedNode::Apply(kids)
                    } else if white {
                        PaintedNode::White(kids)
                    } else {
                        PaintedNode::Black(kids)
                    })
                }
            }
        }
        PaintedTree::new(go(parse_annotated(text)?, false)?)
    }

    pub fn root(&self) -> &PaintedNode {
        &self.root
    }

    pub fn arity(&self) -> usize {
        self.root.leaf_count()
    }

    pub fn dim(&self) -> usize {
        self.root.dim()
    }

    /// Vertices in preorder with `id`, `kind` and `arity`, and every edge with its color.
    pub fn to_json(&self) -> Value {
        fn go(
            n: &PaintedNode,
            id: String,
            parent: String,
            leaf: &mut usize,
            vs: &mut Vec<Value>,
            es: &mut Vec<Value>,
        ) {
            let color = if n.is_white_edge() { "white" } else { "black" };
            let (kind, kids) = match n {
                PaintedNode::Leaf => {
                    es.push(json!({"from": format!("leaf:{leaf}"), "to": parent, "color": color}));
                    *leaf += 1;
                    return;
                }
                PaintedNode::White(c) => ("white", c),
                PaintedNode::Black(c) => ("black", c),
                PaintedNode::Apply(c) => ("apply", c),
            };
            es.push(json!({"from": id, "to": parent, "color": color}));
            vs.push(json!({"id": id, "kind": kind, "arity": kids.len()}));
            for (i, c) in kids.iter().enumerate() {
                let cid = if id.is_empty() {
                    i.to_string()
                } else {
                    format!("{id}.{i}")
                };
                go(c, cid, id.clone(), leaf, vs, es);
            }
        }
        let (mut vs, mut es, mut leaf) = (Vec::new(), Vec::new(), 0);
        go(
            &self.root,
            String::new(),
            "root".into(),
            &mut leaf,
            &mut vs,
            &mut es,
        );
        json!({"text": self.to_string(), "vertices": vs, "edges": es})
    }
}

impl fmt::Display for PaintedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)
    }
}

/// Paints everything above the diaphragm black, adding a one-input painting
/// vertex wherever the diaphragm cuts an edge.
pub fn diaphragm_to_painted(d: &DiaphragmTree) -> PaintedTree {
    fn white(t: &PlanarTree, c: Child) -> PaintedNode {
        match c {
            Child::Leaf(_) => PaintedNode::Leaf,
            Child::Vertex(v) => {
                PaintedNode::White(t.vertex(v).children.iter().map(|&c| white(t, c)).collect())
            }
        }
    }
    fn black(d: &DiaphragmTree, c: Child) -> PaintedNode {
        let t = &d.tree;
        match c {
            Child::Leaf(_) => PaintedNode::Apply(vec![PaintedNode::Leaf]),
            Child::Vertex(v) => {
                let kids = &t.vertex(v).children;
                match d.heights[v] {
                    Height::Above => {
                        PaintedNode::Black(kids.iter().map(|&c| black(d, c)).collect())
                    }
                    Height::On => PaintedNode::Apply(kids.iter().map(|&c| white(t, c)).collect()),
                    Height::Below => PaintedNode::Apply(vec![white(t, c)]),
                }
            }
        }
    }
    let root = if d.tree.is_exceptional() {
        Child::Leaf(0)
    } else {
        Child::Vertex(0)
    };
    PaintedTree::new(black(d, root)).expect("painting a diaphragm tree is valid")
}

/// Inverse of [`diaphragm_to_painted`].
pub fn painted_to_diaphragm(p: &PaintedTree) -> DiaphragmTree {
    // preorder heights, matching the vertex table of the rebuilt tree
    fn white(n: &PaintedNode, hs: &mut Vec<Height>) -> Node {
        match n {
            PaintedNode::White(c) => {
                hs.push(Height::Below);
                Node::Vertex(c.iter().map(|x| white(x, hs)).collect())
            }
            _ => Node::Leaf,
        }
    }
    fn black(n: &PaintedNode, hs: &mut Vec<Height>) -> Node {
        match n {
            PaintedNode::Black(c) => {
                hs.push(Height::Above);
                Node::Vertex(c.iter().map(|x| black(x, hs)).collect())
            }
            PaintedNode::Apply(c) if c.len() == 1 => white(&c[0], hs),
            PaintedNode::Apply(c) => {
                hs.push(Height::On);
                Node::Vertex(c.iter().map(|x| white(x, hs)).collect())
            }
            _ => unreachable!("black edges end in black or painting vertices"),
        }
    }
    let mut hs = Vec::new();
    let node = black(&p.root, &mut hs);
    let tree = PlanarTree::new(Orientation::Up, node).expect("painted trees have valid shapes");
    DiaphragmTree::new(tree, hs).expect("painted trees give valid diaphragms")
}

fn compositions(total: usize, min_parts: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, cur: &mut Vec<usize>, min_parts: usize, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            if cur.len() >= min_parts {
                out.push(cur.clone());
            }
            return;
        }
        for first in 1..=rest {
            cur.push(first);
            go(rest - first, cur, min_parts, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, &mut Vec::new(), min_parts, &mut out);
    out
}

fn products(choices: &[&Vec<PaintedNode>]) -> Vec<Vec<PaintedNode>> {
    let mut acc: Vec<Vec<PaintedNode>> = vec![Vec::new()];
    for opts in choices {
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                opts.iter().map(move |o| {
                    let mut v = prefix.clone();
                    v.push(o.clone());
                    v
                })
            })
            .collect();
    }
    acc
}

/// All painted trees with `m` leaves, built directly from the vertex rules, sorted.
pub fn enumerate_painted(m: usize) -> Result<Vec<PaintedTree>> {
    if m == 0 {
        return Err(Error::Domain("painted trees need at least one leaf".into()));
    }
    // white[k]: trees on a white edge; black[k]: trees on a black edge
    let mut white: Vec<Vec<PaintedNode>> = vec![Vec::new(); m + 1];
    let mut black: Vec<Vec<PaintedNode>> = vec![Vec::new(); m + 1];
    for k in 1..=m {
        if k == 1 {
            white[1].push(PaintedNode::Leaf);
        }
        for parts in compositions(k, 2) {
            let opts: Vec<&Vec<PaintedNode>> = parts.iter().map(|&p| &white[p]).collect();
            let made: Vec<PaintedNode> = products(&opts)
                .into_iter()
                .map(PaintedNode::White)
                .collect();
            white[k].extend(made);
        }
        for parts in compositions(k, 1) {
            let opts: Vec<&Vec<PaintedNode>> = parts.iter().map(|&p| &white[p]).collect();
            let made: Vec<PaintedNode> = products(&opts)
                .into_iter()
                .map(PaintedNode::Apply)
                .collect();
            black[k].extend(made);
        }
        for parts in compositions(k, 2) {
            let opts: Vec<&Vec<PaintedNode>> = parts.iter().map(|&p| &black[p]).collect();
            let made: Vec<PaintedNode> = products(&opts)
                .into_iter()
                .map(PaintedNode::Black)
                .collect();
            black[k].extend(made);
        }
    }
    let mut out: Vec<PaintedTree> = black[m]
        .iter()
        .map(|n| PaintedTree::new(n.clone()).expect("generated trees are valid"))
        .collect();
    out.sort();
    Ok(out)
}

/// The multiplihedron face poset on painted trees, with the order read off
/// the corresponding diaphragm trees.
pub fn multiplihedron_poset(m: usize) -> Result<FinitePoset> {
    let ps = enumerate_painted(m)?;
    let ds: Vec<DiaphragmTree> = ps.iter().map(painted_to_diaphragm).collect();
    let keys = ps.iter().map(|p| p.to_string()).collect();
    FinitePoset::from_fn(keys, |i, j| diaphragm_leq(&ds[i], &ds[j]).unwrap_or(false))
}

/// Painted trees reached by one elementary move: contract an edge between two
/// vertices of one color, merge a white vertex into the painting vertex it
/// feeds, or merge a black vertex with the painting vertices feeding all of its inputs.
pub fn cover_moves(p: &PaintedTree) -> Vec<PaintedTree> {
    fn splice(kids: &[PaintedNode], i: usize, inner: &[PaintedNode]) -> Vec<PaintedNode> {
        let mut v = kids[..i].to_vec();
        v.extend(inner.iter().cloned());
        v.extend(kids[i + 1..].iter().cloned());
        v
    }
    fn rebuild(n: &PaintedNode, kids: Vec<PaintedNode>) -> PaintedNode {
        match n {
            PaintedNode::White(_) => PaintedNode::White(kids),
            PaintedNode::Black(_) => PaintedNode::Black(kids),
            PaintedNode::Apply(_) => PaintedNode::Apply(kids),
            PaintedNode::Leaf => PaintedNode::Leaf,
        }
    }
    fn moves(n: &PaintedNode) -> Vec<PaintedNode> {
        let kids = match n {
            PaintedNode::Leaf => return Vec::new(),
            PaintedNode::White(c) | PaintedNode::Black(c) | PaintedNode::Apply(c) => c,
        };
        let mut out = Vec::new();
        for (i, c) in kids.iter().enumerate() {
            let merged = match (n, c) {
                (PaintedNode::White(_), PaintedNode::White(g))
                | (PaintedNode::Black(_), PaintedNode::Black(g))
                | (PaintedNode::Apply(_), PaintedNode::White(g)) => Some(g),
                _ => None,
            };
            if let Some(g) = merged {
                out.push(rebuild(n, splice(kids, i, g)));
            }
            for sub in moves(c) {
                let mut v = kids.clone();
                v[i] = sub;
                out.push(rebuild(n, v));
            }
        }
        if let PaintedNode::Black(_) = n {
            if kids.iter().all(|c| matches!(c, PaintedNode::Apply(_))) {
                let all = kids
                    .iter()
                    .flat_map(|c| match c {
                        PaintedNode::Apply(g) => g.clone(),
                        _ => unreachable!(),
                    })
                    .collect();
                out.push(PaintedNode::Apply(all));
            }
        }
        out
    }
    let set: BTreeSet<PaintedTree> = moves(&p.root)
        .into_iter()
        .map(|n| PaintedTree::new(n).expect("moves keep trees valid"))
        .collect();
    set.into_iter().collect()
}

/// The covers of the multiplihedron order are exactly the elementary moves.
pub fn cover_moves_check(m: usize) -> Result<bool> {
    let ps = enumerate_painted(m)?;
    let poset = multiplihedron_poset(m)?;
    let covers: BTreeSet<(usize, usize)> = poset.hasse().into_iter().collect();
    let mut moves = BTreeSet::new();
    for (i, p) in ps.iter().enumerate() {
        for q in cover_moves(p) {
            let j = ps
                .binary_search(&q)
                .map_err(|_| Error::InvalidPainted(format!("{q} not enumerated")))?;
            moves.insert((i, j));
        }
    }
    Ok(covers == moves)
}

/// Outcome of comparing the biassociahedron with two outputs to the multiplihedron.
#[derive(Clone, Debug)]
pub struct MultiplihedronReport {
    pub faces: usize,
    /// `(zone pair, painted tree)` for each face, via diaphragms.
    pub witness: Option<Vec<(String, String)>>,
    /// Whether the diaphragm correspondence itself preserves the order.
    pub natural: bool,
}

impl MultiplihedronReport {
    pub fn isomorphic(&self) -> bool {
        self.witness.is_some()
    }
}

pub fn prop_d_report(m: usize) -> Result<MultiplihedronReport> {
    if m < 2 {
        return Err(Error::Domain("the comparison needs m >= 2".into()));
    }
    let zp = biassociahedron_poset(m, 2)?;
    let mp = multiplihedron_poset(m)?;
    let zs = enumerate_zone_pairs(m, 2)?;
    let mut natural_map = Vec::with_capacity(zs.len());
    for z in &zs {
        let key = diaphragm_to_painted(&zone_to_diaphragm(z)?).to_string();
        match mp.index_of(&key) {
            Some(j) => natural_map.push(j),
            None => break,
        }
    }
    let natural = zs.len() == mp.len()
        && natural_map.len() == zs.len()
        && zp.is_isomorphism(&mp, &natural_map);
    let map = if natural {
        Some(natural_map)
    } else {
        zp.isomorphism(&mp)
    };
    Ok(MultiplihedronReport {
        faces: zp.len(),
        witness: map.map(|f| {
            f.iter()
                .enumerate()
                .map(|(i, &j)| (zp.key(i).to_string(), mp.key(j).to_string()))
                .collect()
        }),
        natural,
    })
}

/// The biassociahedron with two outputs is isomorphic to the multiplihedron.
pub fn prop_d_check(m: usize) -> Result<bool> {
    Ok(prop_d_report(m)?.isomorphic())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zone::zone_leq;

    fn d(s: &str) -> DiaphragmTree {
        DiaphragmTree::parse(s).unwrap()
    }

    fn p(s: &str) -> PaintedTree {
        PaintedTree::parse(s).unwrap()
    }

    #[test]
    fn diaphragm_validation() {
        assert!(DiaphragmTree::parse("((* *)2 *)2").is_err());
        assert!(DiaphragmTree::parse("((* *)1 *)3").is_err());
        assert!(DiaphragmTree::parse("((* *)3 *)2").is_ok());
        assert!(DiaphragmTree::parse("((* *)4 *)1").is_err());
        assert_eq!(d("((* *)3 *)1").to_string(), "((* *)3 *)1");
    }

    #[test]
    fn zone_examples() {
        let z = ZonePair::parse("(* *)1 ~ (* *)1").unwrap();
        assert_eq!(zone_to_diaphragm(&z).unwrap().heights(), &[Height::On]);
        let z = ZonePair::parse("((* *)2 *)2 ~ (* *)1").unwrap();
        assert_eq!(
            zone_to_diaphragm(&z).unwrap().heights(),
            &[Height::Below, Height::Below]
        );
        let z = ZonePair::parse("((* *)1 *)1 ~ (* *)2").unwrap();
        assert_eq!(
            zone_to_diaphragm(&z).unwrap().heights(),
            &[Height::Above, Height::Above]
        );
        let z = ZonePair::parse("(* *)2 ~ (* (* *)1)3").unwrap();
        assert!(zone_to_diaphragm(&z).is_err());
    }

    #[test]
    fn zones_and_diaphragms_agree() {
        for m in 1..=4 {
            let zs = enumerate_zone_pairs(m, 2).unwrap();
            let ds: Vec<DiaphragmTree> = zs.iter().map(|z| zone_to_diaphragm(z).unwrap()).collect();
            let mut sorted = ds.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted, enumerate_diaphragms(m).unwrap(), "m={m}");
            for (z, dd) in zs.iter().zip(&ds) {
                assert_eq!(&diaphragm_to_zone(dd), z);
            }
            for i in 0..zs.len() {
                for j in 0..zs.len() {
                    assert_eq!(
                        zone_leq(&zs[i], &zs[j]).unwrap(),
                        diaphragm_leq(&ds[i], &ds[j]).unwrap(),
                        "{} vs {}",
                        zs[i],
                        zs[j]
                    );
                }
            }
        }
        assert_eq!(enumerate_diaphragms(3).unwrap().len(), 13);
    }

    #[test]
    fn painted_text() {
        let t = p("(!(* *) !(*))");
        assert_eq!(
            t.root(),
            &PaintedNode::Black(vec![
                PaintedNode::Apply(vec![PaintedNode::Leaf, PaintedNode::Leaf]),
                PaintedNode::Apply(vec![PaintedNode::Leaf])
            ])
        );
        assert_eq!(t.to_string(), "(!(* *) !(*))");
        assert_eq!(t.arity(), 3);
        assert!(PaintedTree::parse("(* *)").is_err());
        assert!(PaintedTree::parse("!(!(*))").is_err());
        assert!(PaintedTree::parse("!(* (* *))").is_ok());
        assert!(PaintedTree::parse("(!(*))").is_err());
        let j = p("!((* *) *)").to_json();
        assert_eq!(j["vertices"].as_array().unwrap().len(), 2);
        assert_eq!(j["edges"][0]["color"], "black");
        assert_eq!(j["edges"][1]["color"], "white");
    }

    #[test]
    fn painting_examples() {
        assert_eq!(diaphragm_to_painted(&d("(* *)2")).to_string(), "!(* *)");
        assert_eq!(
            diaphragm_to_painted(&d("(* * *)3")).to_string(),
            "!((* * *))"
        );
        assert_eq!(
            diaphragm_to_painted(&d("((* *)1 *)1")).to_string(),
            "((!(*) !(*)) !(*))"
        );
        assert_eq!(
            diaphragm_to_painted(&d("((* *)3 *)2")).to_string(),
            "!((* *) *)"
        );
        let one = DiaphragmTree::new(PlanarTree::exceptional(Orientation::Up), vec![]).unwrap();
        assert_eq!(diaphragm_to_painted(&one).to_string(), "!(*)");
    }

    #[test]
    fn painted_counts_and_bijection() {
        let counts: Vec<usize> = (1..=5)
            .map(|m| enumerate_painted(m).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 3, 13, 67, 381]);
        // vertices of the multiplihedra
        let vertices: Vec<usize> = (1..=5)
            .map(|m| {
                enumerate_painted(m)
                    .unwrap()
                    .iter()
                    .filter(|p| p.dim() == 0)
                    .count()
            })
            .collect();
        assert_eq!(vertices, vec![1, 2, 6, 21, 80]);
        for m in 1..=4 {
            let ds = enumerate_diaphragms(m).unwrap();
            let mut ps: Vec<PaintedTree> = ds.iter().map(diaphragm_to_painted).collect();
            for (dd, pp) in ds.iter().zip(&ps) {
                assert_eq!(&painted_to_diaphragm(pp), dd);
            }
            ps.sort();
            assert_eq!(ps, enumerate_painted(m).unwrap());
        }
    }

    #[test]
    fn multiplihedron_shapes() {
        let j2 = multiplihedron_poset(2).unwrap();
        assert_eq!(j2.fvector(), vec![2, 1]);
        let j3 = multiplihedron_poset(3).unwrap();
        assert_eq!(j3.fvector(), vec![6, 6, 1]);
        let top = j3.index_of("!(* * *)").unwrap();
        assert!((0..j3.len()).all(|i| j3.leq(i, top)));
        let v = j3.index_of("!(((* *) *))").unwrap();
        let e1 = j3.index_of("!((* *) *)").unwrap();
        let e2 = j3.index_of("!(* (* *))").unwrap();
        assert!(j3.leq(v, e1) && !j3.leq(v, e2));
        for m in 1..=5 {
            let poset = multiplihedron_poset(m).unwrap();
            assert_eq!(poset.euler().unwrap(), 1, "m={m}");
            let ps = enumerate_painted(m).unwrap();
            let ranks = poset.grading().ranks;
            for (i, pp) in ps.iter().enumerate() {
                assert_eq!(ranks[i], pp.dim(), "{pp}");
            }
        }
    }

    #[test]
    fn covers_are_moves() {
        for m in 1..=4 {
            assert!(cover_moves_check(m).unwrap(), "m={m}");
        }
    }

    #[test]
    fn comparison() {
        for m in 2..=4 {
            let r = prop_d_report(m).unwrap();
            assert!(r.natural && r.isomorphic(), "m={m}");
        }
        assert_eq!(prop_d_report(3).unwrap().faces, 13);
        assert!(prop_d_check(1).is_err());
    }
}
