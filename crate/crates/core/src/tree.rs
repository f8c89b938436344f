//! Planar rooted trees, their contractions, and the associahedron face poset.
//!
//! Trees are stored as a recursive [`Node`] together with a flattened,
//! lexicographically ordered vertex table. Vertices are addressed by
//! [`VertexId`], the path of child indices from the root vertex.
//!
//! Text form: leaves are `*`, a vertex is its parenthesized list of children,
//! e.g. the 3-corolla is `(* * *)`. The exceptional tree (one edge, no
//! vertices) is written `*`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poset::FinitePoset;

/// Which way the root leg points in pictures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Root on top, edges oriented towards the root.
    Up,
    /// Root at the bottom, edges oriented away from the root.
    Down,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Up => Orientation::Down,
            Orientation::Down => Orientation::Up,
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::Up => "up",
            Orientation::Down => "down",
        })
    }
}

/// Recursive shape of a planar tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Leaf,
    Vertex(Vec<Node>),
}

impl Node {
    pub fn corolla(k: usize) -> Node {
        Node::Vertex(vec![Node::Leaf; k])
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Node::Leaf => 1,
            Node::Vertex(ch) => ch.iter().map(Node::leaf_count).sum(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Node::Leaf => 0,
            Node::Vertex(ch) => 1 + ch.iter().map(Node::vertex_count).sum::<usize>(),
        }
    }

    fn write(&self, out: &mut String) {
        match self {
            Node::Leaf => out.push('*'),
            Node::Vertex(ch) => {
                out.push('(');
                for (i, c) in ch.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    c.write(out);
                }
                out.push(')');
            }
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Node::Leaf => json!("*"),
            Node::Vertex(ch) => Value::Array(ch.iter().map(Node::to_json).collect()),
        }
    }

    fn from_json(v: &Value) -> Result<Node> {
        match v {
            Value::String(s) if s == "*" => Ok(Node::Leaf),
            Value::Array(items) => Ok(Node::Vertex(
                items.iter().map(Node::from_json).collect::<Result<_>>()?,
            )),
            other => Err(Error::InvalidTree(format!("unexpected JSON node {other}"))),
        }
    }

    fn check_arity(&self) -> Result<()> {
        match self {
            Node::Leaf => Ok(()),
            Node::Vertex(ch) if ch.len() < 2 => Err(Error::InvalidTree(format!(
                "vertex with {} input(s); at least 2 required",
                ch.len()
            ))),
            Node::Vertex(ch) => ch.iter().try_for_each(Node::check_arity),
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write(&mut s);
        f.write_str(&s)
    }
}

/// Path of child indices from the root vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub Vec<usize>);

impl VertexId {
    pub fn root() -> Self {
        VertexId(Vec::new())
    }

    pub fn child(&self, i: usize) -> Self {
        let mut p = self.0.clone();
        p.push(i);
        VertexId(p)
    }

    pub fn parent(&self) -> Option<Self> {
        let mut p = self.0.clone();
        p.pop().map(|_| VertexId(p))
    }

    pub fn is_prefix_of(&self, other: &VertexId) -> bool {
        other.0.starts_with(&self.0)
    }
}

/// Dotted form with a leading `0` for the root: `0`, `0.1`, `0.1.0`, ...
impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("0")?;
        for i in &self.0 {
            write!(f, ".{i}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for VertexId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split('.');
        if parts.next() != Some("0") {
            return Err(Error::parse(
                0,
                format!("vertex id {s:?} must start with 0"),
            ));
        }
        parts
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|_| Error::parse(0, format!("bad vertex id component {p:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(VertexId)
    }
}

/// A child slot of a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Child {
    /// Leaf with its 0-based position among all leaves.
    Leaf(usize),
    /// Index into the vertex table.
    Vertex(usize),
}

/// Flattened per-vertex data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexInfo {
    pub id: VertexId,
    pub parent: Option<usize>,
    pub children: Vec<Child>,
    /// 0-based leaves above (for up trees: below) this vertex.
    pub leaves: Range<usize>,
}

impl VertexInfo {
    pub fn arity(&self) -> usize {
        self.children.len()
    }
}

/// A planar rooted tree whose vertices all have at least two inputs.
#[derive(Clone, Debug)]
pub struct PlanarTree {
    orientation: Orientation,
    root: Node,
    vertices: Vec<VertexInfo>,
}

impl PartialEq for PlanarTree {
    fn eq(&self, other: &Self) -> bool {
        self.orientation == other.orientation && self.root == other.root
    }
}

impl Eq for PlanarTree {}

impl std::hash::Hash for PlanarTree {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.orientation.hash(state);
        self.root.hash(state);
    }
}

impl PartialOrd for PlanarTree {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PlanarTree {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.orientation, &self.root).cmp(&(other.orientation, &other.root))
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

impl PlanarTree {
    pub fn new(orientation: Orientation, root: Node) -> Result<Self> {
        root.check_arity()?;
        let mut vertices = Vec::new();
        let mut next_leaf = 0;
        flatten(&root, VertexId::root(), None, &mut next_leaf, &mut vertices);
        Ok(PlanarTree {
            orientation,
            root,
            vertices,
        })
    }

    pub fn exceptional(orientation: Orientation) -> Self {
        PlanarTree::new(orientation, Node::Leaf).expect("leaf is a valid tree")
    }

    /// The tree with one vertex and `k` leaves; `k == 1` gives the exceptional tree.
    pub fn corolla(orientation: Orientation, k: usize) -> Result<Self> {
        match k {
            0 => Err(Error::Domain("a corolla needs at least one leaf".into())),
            1 => Ok(Self::exceptional(orientation)),
            _ => PlanarTree::new(orientation, Node::corolla(k)),
        }
    }

    pub fn parse(text: &str, orientation: Orientation) -> Result<Self> {
        let raw = parse_annotated(text)?;
        PlanarTree::new(orientation, raw.into_plain()?)
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn is_exceptional(&self) -> bool {
        self.root == Node::Leaf
    }

    pub fn leaf_count(&self) -> usize {
        self.root.leaf_count()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Vertex table in lexicographic [`VertexId`] order (preorder).
    pub fn vertices(&self) -> &[VertexInfo] {
        &self.vertices
    }

    pub fn vertex(&self, idx: usize) -> &VertexInfo {
        &self.vertices[idx]
    }

    pub fn vertex_ids(&self) -> Vec<VertexId> {
        self.vertices.iter().map(|v| v.id.clone()).collect()
    }

    pub fn index_of(&self, id: &VertexId) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.id.cmp(id)).ok()
    }

    /// The same shape drawn the other way up.
    pub fn flipped(&self) -> Self {
        PlanarTree {
            orientation: self.orientation.flip(),
            root: self.root.clone(),
            vertices: self.vertices.clone(),
        }
    }

    /// True iff `a` lies on the path from `d` to the root, `a != d`.
    pub fn is_proper_ancestor(&self, a: usize, d: usize) -> bool {
        let mut cur = self.vertices[d].parent;
        while let Some(p) = cur {
            if p == a {
                return true;
            }
            cur = self.vertices[p].parent;
        }
        false
    }

    /// The vertex order `u < v` iff an oriented edge path runs from `u` to `v`.
    ///
    /// Up-rooted trees orient edges towards the root, so descendants are
    /// smaller; down-rooted trees orient them away from it.
    pub fn vertex_lt(&self, u: usize, v: usize) -> bool {
        match self.orientation {
            Orientation::Up => self.is_proper_ancestor(v, u),
            Orientation::Down => self.is_proper_ancestor(u, v),
        }
    }

    pub fn comparable(&self, u: usize, v: usize) -> bool {
        self.is_proper_ancestor(u, v) || self.is_proper_ancestor(v, u)
    }

    /// Vertex owning gap `g` (between leaves `g` and `g + 1`, 0-based).
    pub fn gap_vertex(&self, g: usize) -> usize {
        assert!(g + 1 < self.leaf_count(), "gap {g} out of range");
        // deepest vertex whose leaf range covers both leaves
        let mut best = 0;
        for (i, v) in self.vertices.iter().enumerate() {
            if v.leaves.start <= g && g + 1 < v.leaves.end {
                best = i;
            }
        }
        best
    }

    /// Gaps owned by each vertex.
    pub fn gaps_by_vertex(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertex_count()];
        for g in 0..self.leaf_count().saturating_sub(1) {
            out[self.gap_vertex(g)].push(g);
        }
        out
    }

    /// Leaf intervals of all vertices.
    pub fn clades(&self) -> BTreeSet<(usize, usize)> {
        self.vertices
            .iter()
            .map(|v| (v.leaves.start, v.leaves.end))
            .collect()
    }

    /// The unique vertex map of a contraction `self -> target`, if one exists.
    pub fn morphism_to(&self, target: &PlanarTree) -> Option<Vec<usize>> {
        if self.orientation != target.orientation || self.leaf_count() != target.leaf_count() {
            return None;
        }
        let mine = self.clades();
        if !target.clades().is_subset(&mine) {
            return None;
        }
        let by_clade: HashMap<(usize, usize), usize> = target
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| ((v.leaves.start, v.leaves.end), i))
            .collect();
        let map = self
            .vertices
            .iter()
            .map(|v| {
                // smallest target clade containing this vertex's clade
                let mut info = v;
                loop {
                    if let Some(&t) = by_clade.get(&(info.leaves.start, info.leaves.end)) {
                        return t;
                    }
                    info = &self.vertices[info.parent.expect("root clade is in every target")];
                }
            })
            .collect();
        Some(map)
    }

    /// The subtree spanned by a connected set of vertices, with the induced
    /// leg order. Returns the subtree and, for each chosen vertex in
    /// lexicographic order, its index in the new tree.
    pub fn induced_subtree(
        &self,
        selected: &BTreeSet<usize>,
    ) -> Result<(PlanarTree, Vec<(usize, usize)>)> {
        if selected.is_empty() {
            return Err(Error::NotSubtree(
                "empty vertex set; use the exceptional tree".into(),
            ));
        }
        if let Some(&bad) = selected.iter().find(|&&i| i >= self.vertex_count()) {
            return Err(Error::NotSubtree(format!(
                "vertex index {bad} out of range"
            )));
        }
        let tops: Vec<usize> = selected
            .iter()
            .copied()
            .filter(|&i| {
                self.vertices[i]
                    .parent
                    .is_none_or(|p| !selected.contains(&p))
            })
            .collect();
        if tops.len() != 1 {
            return Err(Error::NotSubtree(format!(
                "vertex set is not connected ({} components)",
                tops.len()
            )));
        }
        fn build(t: &PlanarTree, i: usize, sel: &BTreeSet<usize>) -> Node {
            Node::Vertex(
                t.vertices[i]
                    .children
                    .iter()
                    .map(|c| match *c {
                        Child::Vertex(j) if sel.contains(&j) => build(t, j, sel),
                        _ => Node::Leaf,
                    })
                    .collect(),
            )
        }
        let node = build(self, tops[0], selected);
        let sub = PlanarTree::new(self.orientation, node)?;
        // preorder of the selection matches preorder of the subtree
        let mapping = selected
            .iter()
            .copied()
            .zip(0..sub.vertex_count())
            .collect();
        Ok((sub, mapping))
    }

    /// Contracts the internal edge whose endpoint farther from the root is `child`.
    pub fn contract_edge(&self, child: &VertexId) -> Result<PlanarTree> {
        let Some(last) = child.0.last().copied() else {
            return Err(Error::NotInternalEdge(format!(
                "{child} is the root vertex; its edge is the root leg"
            )));
        };
        if self.index_of(child).is_none() {
            return Err(Error::NotInternalEdge(format!(
                "{child} does not name a vertex (leg or absent)"
            )));
        }
        let parent_path = &child.0[..child.0.len() - 1];
        let mut root = self.root.clone();
        let mut cur = &mut root;
        for &i in parent_path {
            match cur {
                Node::Vertex(ch) => cur = &mut ch[i],
                Node::Leaf => unreachable!("path validated"),
            }
        }
        if let Node::Vertex(ch) = cur {
            let Node::Vertex(grand) = ch[last].clone() else {
                unreachable!("path validated")
            };
            ch.splice(last..=last, grand);
        }
        PlanarTree::new(self.orientation, root)
    }

    pub fn to_json(&self) -> Value {
        json!({"orientation": self.orientation, "tree": self.root.to_json()})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let orientation: Orientation = serde_json::from_value(v["orientation"].clone())
            .map_err(|e| Error::InvalidTree(format!("orientation: {e}")))?;
        PlanarTree::new(orientation, Node::from_json(&v["tree"])?)
    }
}

fn flatten(
    node: &Node,
    id: VertexId,
    parent: Option<usize>,
    next_leaf: &mut usize,
    out: &mut Vec<VertexInfo>,
) -> Child {
    match node {
        Node::Leaf => {
            *next_leaf += 1;
            Child::Leaf(*next_leaf - 1)
        }
        Node::Vertex(ch) => {
            let idx = out.len();
            let start = *next_leaf;
            out.push(VertexInfo {
                id: id.clone(),
                parent,
                children: Vec::new(),
                leaves: start..start,
            });
            let children = ch
                .iter()
                .enumerate()
                .map(|(i, c)| flatten(c, id.child(i), Some(idx), next_leaf, out))
                .collect();
            out[idx].children = children;
            out[idx].leaves = start..*next_leaf;
            Child::Vertex(idx)
        }
    }
}

/// Parsed tree text with optional vertex decorations.
///
/// Shared by the plain, leveled (`(* *)3`) and painted (`!(* *)`) formats.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Annotated {
    Leaf,
    Vertex {
        children: Vec<Annotated>,
        label: Option<usize>,
        marked: bool,
    },
}

impl Annotated {
    pub(crate) fn into_plain(self) -> Result<Node> {
        match self {
            Annotated::Leaf => Ok(Node::Leaf),
            Annotated::Vertex {
                children,
                label: None,
                marked: false,
            } => Ok(Node::Vertex(
                children
                    .into_iter()
                    .map(Annotated::into_plain)
                    .collect::<Result<_>>()?,
            )),
            Annotated::Vertex { .. } => Err(Error::parse(
                0,
                "plain tree text must not carry levels or marks",
            )),
        }
    }
}

pub(crate) fn parse_annotated(text: &str) -> Result<Annotated> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let node = parse_node(bytes, &mut pos)?;
    skip_ws(bytes, &mut pos);
    if pos != bytes.len() {
        return Err(Error::parse(pos, "trailing input"));
    }
    Ok(node)
}

fn skip_ws(b: &[u8], pos: &mut usize) {
    while *pos < b.len() && b[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_node(b: &[u8], pos: &mut usize) -> Result<Annotated> {
    skip_ws(b, pos);
    let marked = if b.get(*pos) == Some(&b'!') {
        *pos += 1;
        skip_ws(b, pos);
        true
    } else {
        false
    };
    match b.get(*pos) {
        Some(b'*') if !marked => {
            *pos += 1;
            Ok(Annotated::Leaf)
        }
        Some(b'(') => {
            *pos += 1;
            let mut children = Vec::new();
            loop {
                skip_ws(b, pos);
                match b.get(*pos) {
                    Some(b')') => {
                        *pos += 1;
                        break;
                    }
                    Some(_) => children.push(parse_node(b, pos)?),
                    None => return Err(Error::parse(*pos, "unclosed '('")),
                }
            }
            let start = *pos;
            while *pos < b.len() && b[*pos].is_ascii_digit() {
                *pos += 1;
            }
            let label = if *pos > start {
                Some(
                    std::str::from_utf8(&b[start..*pos])
                        .expect("ascii digits")
                        .parse()
                        .map_err(|_| Error::parse(start, "level out of range"))?,
                )
            } else {
                None
            };
            Ok(Annotated::Vertex {
                children,
                label,
                marked,
            })
        }
        Some(c) => Err(Error::parse(*pos, format!("unexpected {:?}", *c as char))),
        None => Err(Error::parse(*pos, "unexpected end of input")),
    }
}

/// All planar trees with `m` leaves whose vertices have at least two inputs, sorted.
pub fn enumerate_trees(m: usize, orientation: Orientation) -> Result<Vec<PlanarTree>> {
    if m == 0 {
        return Err(Error::Domain("trees need at least one leaf".into()));
    }
    let mut memo: Vec<Vec<Node>> = vec![Vec::new(), vec![Node::Leaf]];
    for k in 2..=m {
        let mut shapes = Vec::new();
        for parts in compositions(k) {
            if parts.len() < 2 {
                continue;
            }
            let mut partial: Vec<Vec<Node>> = vec![Vec::new()];
            for &p in &parts {
                partial = partial
                    .into_iter()
                    .flat_map(|prefix| {
                        memo[p].iter().map(move |sub| {
                            let mut v = prefix.clone();
                            v.push(sub.clone());
                            v
                        })
                    })
                    .collect();
            }
            shapes.extend(partial.into_iter().map(Node::Vertex));
        }
        memo.push(shapes);
    }
    let mut trees: Vec<PlanarTree> = memo[m]
        .iter()
        .map(|n| PlanarTree::new(orientation, n.clone()))
        .collect::<Result<_>>()?;
    trees.sort();
    Ok(trees)
}

/// Ordered compositions of `k` into positive parts.
fn compositions(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    (1..=k)
        .flat_map(|first| {
            compositions(k - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Strict relations `u < v` of the vertex order, sorted.
pub fn vertex_order(t: &PlanarTree) -> Vec<(VertexId, VertexId)> {
    let n = t.vertex_count();
    let mut out = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if t.vertex_lt(u, v) {
                out.push((t.vertex(u).id.clone(), t.vertex(v).id.clone()));
            }
        }
    }
    out.sort();
    out
}

pub fn contract_edge(t: &PlanarTree, child: &VertexId) -> Result<PlanarTree> {
    t.contract_edge(child)
}

/// True iff `t2` is obtained from `t1` by contracting internal edges.
pub fn tree_leq(t1: &PlanarTree, t2: &PlanarTree) -> Result<bool> {
    if t1.leaf_count() != t2.leaf_count() || t1.orientation() != t2.orientation() {
        return Err(Error::Domain(format!(
            "cannot compare a {}-leaf {} tree with a {}-leaf {} tree",
            t1.leaf_count(),
            t1.orientation(),
            t2.leaf_count(),
            t2.orientation()
        )));
    }
    Ok(t1.morphism_to(t2).is_some())
}

/// Face poset of the associahedron: up-rooted trees with `m` leaves under contraction.
pub fn face_poset_associahedron(m: usize) -> Result<FinitePoset> {
    let trees = enumerate_trees(m, Orientation::Up)?;
    let keys = trees.iter().map(|t| t.to_string()).collect();
    FinitePoset::from_fn(keys, |i, j| trees[i].morphism_to(&trees[j]).is_some())
}

/// Dimension of the associahedron face indexed by `t`.
pub fn associahedron_dim(t: &PlanarTree) -> usize {
    t.leaf_count() - 1 - t.vertex_count()
}
