//! Terms of the free PROP on generators `x[b,a]` (`a` inputs, `b` outputs,
//! `(a, b) != (1, 1)`), represented as port graphs with ordered legs.
//!
//! Permutations never appear as vertices: they are absorbed into the wiring.
//! Equality of terms is port-graph isomorphism fixing the legs, decided by
//! comparing canonical forms.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::leveled::{enumerate_leveled_pairs, restrict, ComplementaryPair};
use crate::tree::{Child, Node, PlanarTree};
use crate::zone::{project, ZonePair};

/// A generator with `outputs` outputs and `inputs` inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub outputs: usize,
    pub inputs: usize,
}

impl Generator {
    pub fn new(outputs: usize, inputs: usize) -> Result<Self> {
        if outputs == 0 || inputs == 0 || (outputs, inputs) == (1, 1) {
            return Err(Error::InvalidTerm(format!(
                "no generator of biarity ({outputs},{inputs})"
            )));
        }
        Ok(Generator { outputs, inputs })
    }
}

/// Where a wire starts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    /// Global input leg (0-based).
    Input(usize),
    /// Output port `.1` of vertex `.0`.
    Out(usize, usize),
}

/// Where a wire ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    /// Global output leg (0-based).
    Output(usize),
    /// Input port `.1` of vertex `.0`.
    In(usize, usize),
}

/// A port graph of biarity `(outputs.len(), inputs)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PropTerm {
    inputs: usize,
    vertices: Vec<Generator>,
    /// Source feeding each input port of each vertex.
    feeds: Vec<Vec<Source>>,
    /// Source feeding each global output leg.
    outputs: Vec<Source>,
}

impl PropTerm {
    /// Builds and validates a term from explicit per-port sources.
    pub fn from_parts(
        inputs: usize,
        vertices: Vec<Generator>,
        feeds: Vec<Vec<Source>>,
        outputs: Vec<Source>,
    ) -> Result<Self> {
        let t = PropTerm {
            inputs,
            vertices,
            feeds,
            outputs,
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        if self.inputs == 0 || self.outputs.is_empty() {
            return Err(Error::InvalidTerm(
                "terms need at least one input and one output".into(),
            ));
        }
        if self.feeds.len() != self.vertices.len() {
            return Err(Error::InvalidTerm(
                "one feed list per vertex required".into(),
            ));
        }
        let mut used = BTreeSet::new();
        for (v, g) in self.vertices.iter().enumerate() {
            Generator::new(g.outputs, g.inputs)?;
            if self.feeds[v].len() != g.inputs {
                return Err(Error::InvalidTerm(format!(
                    "vertex {v} has the wrong number of inputs wired"
                )));
            }
        }
        for s in self.feeds.iter().flatten().chain(&self.outputs) {
            let ok = match *s {
                Source::Input(i) => i < self.inputs,
                Source::Out(v, j) => v < self.vertices.len() && j < self.vertices[v].outputs,
            };
            if !ok || !used.insert(*s) {
                return Err(Error::InvalidTerm(format!(
                    "source {s:?} is out of range or used twice"
                )));
            }
        }
        let total = self.inputs + self.vertices.iter().map(|g| g.outputs).sum::<usize>();
        if used.len() != total {
            return Err(Error::InvalidTerm(
                "some output port is left unconnected".into(),
            ));
        }
        if self.topological_order().is_none() {
            return Err(Error::InvalidTerm("the wiring has a directed cycle".into()));
        }
        Ok(())
    }

    fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        let mut succ = vec![Vec::new(); n];
        for (v, f) in self.feeds.iter().enumerate() {
            for s in f {
                if let Source::Out(u, _) = *s {
                    indeg[v] += 1;
                    succ[u].push(v);
                }
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// The unit `e`.
    pub fn unit() -> Self {
        Self::identity(1)
    }

    /// `k` parallel strands.
    pub fn identity(k: usize) -> Self {
        PropTerm {
            inputs: k,
            vertices: Vec::new(),
            feeds: Vec::new(),
            outputs: (0..k).map(Source::Input).collect(),
        }
    }

    pub fn generator(outputs: usize, inputs: usize) -> Result<Self> {
        let g = Generator::new(outputs, inputs)?;
        Ok(PropTerm {
            inputs,
            vertices: vec![g],
            feeds: vec![(0..inputs).map(Source::Input).collect()],
            outputs: (0..outputs).map(|j| Source::Out(0, j)).collect(),
        })
    }

    /// Pure rewiring sending strand `i` to position `perm[i]` (both 0-based).
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let mut outputs = vec![None; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            if p >= perm.len() || outputs[p].is_some() {
                return Err(Error::Domain(format!("{perm:?} is not a permutation")));
            }
            outputs[p] = Some(Source::Input(i));
        }
        Ok(PropTerm {
            inputs: perm.len(),
            vertices: Vec::new(),
            feeds: Vec::new(),
            outputs: outputs.into_iter().map(Option::unwrap).collect(),
        })
    }

    /// `(outputs, inputs)`.
    pub fn biarity(&self) -> (usize, usize) {
        (self.outputs.len(), self.inputs)
    }

    pub fn vertices(&self) -> &[Generator] {
        &self.vertices
    }

    pub fn feeds(&self) -> &[Vec<Source>] {
        &self.feeds
    }

    pub fn output_sources(&self) -> &[Source] {
        &self.outputs
    }

    /// Every wire as `(source, target)`, grouped by target.
    pub fn wires(&self) -> Vec<(Source, Target)> {
        let mut out = Vec::new();
        for (v, f) in self.feeds.iter().enumerate() {
            for (k, s) in f.iter().enumerate() {
                out.push((*s, Target::In(v, k)));
            }
        }
        for (i, s) in self.outputs.iter().enumerate() {
            out.push((*s, Target::Output(i)));
        }
        out
    }

    /// Wires joining two vertices.
    pub fn internal_wires(&self) -> Vec<((usize, usize), (usize, usize))> {
        self.wires()
            .into_iter()
            .filter_map(|w| match w {
                (Source::Out(u, j), Target::In(v, k)) => Some(((u, j), (v, k))),
                _ => None,
            })
            .collect()
    }

    /// Target fed by each source port.
    fn consumers(&self) -> (Vec<Target>, Vec<Vec<Target>>) {
        let mut of_input = vec![Target::Output(0); self.inputs];
        let mut of_vertex: Vec<Vec<Target>> = self
            .vertices
            .iter()
            .map(|g| vec![Target::Output(0); g.outputs])
            .collect();
        for (s, t) in self.wires() {
            match s {
                Source::Input(i) => of_input[i] = t,
                Source::Out(v, j) => of_vertex[v][j] = t,
            }
        }
        (of_input, of_vertex)
    }

    /// Vertical composite `self ∘ below`: `below` feeds `self`.
    pub fn vcompose(&self, below: &PropTerm) -> Result<PropTerm> {
        if below.outputs.len() != self.inputs {
            return Err(Error::ArityMismatch(format!(
                "cannot feed {} outputs into {} inputs",
                below.outputs.len(),
                self.inputs
            )));
        }
        let off = below.vertices.len();
        let shift = |s: Source| match s {
            Source::Input(i) => below.outputs[i],
            Source::Out(v, j) => Source::Out(v + off, j),
        };
        let mut vertices = below.vertices.clone();
        vertices.extend(self.vertices.iter().copied());
        let mut feeds = below.feeds.clone();
        feeds.extend(
            self.feeds
                .iter()
                .map(|f| f.iter().map(|&s| shift(s)).collect()),
        );
        Ok(PropTerm {
            inputs: below.inputs,
            vertices,
            feeds,
            outputs: self.outputs.iter().map(|&s| shift(s)).collect(),
        })
    }

    /// Horizontal juxtaposition, `self` on the left.
    pub fn hcompose(&self, right: &PropTerm) -> PropTerm {
        let off = self.vertices.len();
        let shift = |s: Source| match s {
            Source::Input(i) => Source::Input(i + self.inputs),
            Source::Out(v, j) => Source::Out(v + off, j),
        };
        let mut vertices = self.vertices.clone();
        vertices.extend(right.vertices.iter().copied());
        let mut feeds = self.feeds.clone();
        feeds.extend(
            right
                .feeds
                .iter()
                .map(|f| f.iter().map(|&s| shift(s)).collect()),
        );
        let mut outputs = self.outputs.clone();
        outputs.extend(right.outputs.iter().map(|&s| shift(s)));
        PropTerm {
            inputs: self.inputs + right.inputs,
            vertices,
            feeds,
            outputs,
        }
    }

    /// The same graph read upside down: inputs and outputs swap roles.
    pub fn op(&self) -> PropTerm {
        let (of_input, of_vertex) = self.consumers();
        let flip = |t: Target| match t {
            Target::Output(i) => Source::Input(i),
            Target::In(v, k) => Source::Out(v, k),
        };
        PropTerm {
            inputs: self.outputs.len(),
            vertices: self
                .vertices
                .iter()
                .map(|g| Generator {
                    outputs: g.inputs,
                    inputs: g.outputs,
                })
                .collect(),
            feeds: of_vertex
                .iter()
                .map(|ts| ts.iter().map(|&t| flip(t)).collect())
                .collect(),
            outputs: of_input.iter().map(|&t| flip(t)).collect(),
        }
    }

    /// Relabels vertices in breadth-first order from the ordered legs.
    ///
    /// Every vertex has an output, so following outputs reaches a global
    /// output; hence the search from the legs reaches every vertex, and the
    /// resulting order depends only on the isomorphism class.
    pub fn canonical(&self) -> PropTerm {
        let n = self.vertices.len();
        let (of_input, of_vertex) = self.consumers();
        let mut rank = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::new();
        let visit =
            |v: usize, rank: &mut Vec<usize>, order: &mut Vec<usize>, q: &mut VecDeque<usize>| {
                if rank[v] == usize::MAX {
                    rank[v] = order.len();
                    order.push(v);
                    q.push_back(v);
                }
            };
        for s in &self.outputs {
            if let Source::Out(v, _) = *s {
                visit(v, &mut rank, &mut order, &mut queue);
            }
        }
        for t in &of_input {
            if let Target::In(v, _) = *t {
                visit(v, &mut rank, &mut order, &mut queue);
            }
        }
        while let Some(v) = queue.pop_front() {
            for s in &self.feeds[v] {
                if let Source::Out(u, _) = *s {
                    visit(u, &mut rank, &mut order, &mut queue);
                }
            }
            for t in &of_vertex[v] {
                if let Target::In(w, _) = *t {
                    visit(w, &mut rank, &mut order, &mut queue);
                }
            }
        }
        debug_assert_eq!(order.len(), n);
        let relabel = |s: Source| match s {
            Source::Input(i) => Source::Input(i),
            Source::Out(v, j) => Source::Out(rank[v], j),
        };
        PropTerm {
            inputs: self.inputs,
            vertices: order.iter().map(|&v| self.vertices[v]).collect(),
            feeds: order
                .iter()
                .map(|&v| self.feeds[v].iter().map(|&s| relabel(s)).collect())
                .collect(),
            outputs: self.outputs.iter().map(|&s| relabel(s)).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let src = |s: &Source| match *s {
            Source::Input(i) => json!({"input": i}),
            Source::Out(v, j) => json!({"vertex": v, "port": j}),
        };
        let tgt = |t: &Target| match *t {
            Target::Output(i) => json!({"output": i}),
            Target::In(v, k) => json!({"vertex": v, "port": k}),
        };
        json!({
            "inputs": self.inputs,
            "outputs": self.outputs.len(),
            "vertices": self.vertices.iter().map(|g| json!({"outputs": g.outputs, "inputs": g.inputs})).collect::<Vec<_>>(),
            "wires": self.wires().iter().map(|(s, t)| json!({"from": src(s), "to": tgt(t)})).collect::<Vec<_>>(),
        })
    }
}

/// Flat listing: `in=M v0:x[b,a]<-(...) ... out<-(...)`.
impl fmt::Display for PropTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let src = |s: &Source| match *s {
            Source::Input(i) => format!("i{i}"),
            Source::Out(v, j) => format!("v{v}.{j}"),
        };
        write!(f, "in={}", self.inputs)?;
        for (v, g) in self.vertices.iter().enumerate() {
            let fs: Vec<String> = self.feeds[v].iter().map(src).collect();
            write!(f, " v{v}:x[{},{}]<-({})", g.outputs, g.inputs, fs.join(","))?;
        }
        let os: Vec<String> = self.outputs.iter().map(src).collect();
        write!(f, " out<-({})", os.join(","))
    }
}

/// Equality in the free PROP.
pub fn term_eq(a: &PropTerm, b: &PropTerm) -> bool {
    a.biarity() == b.biarity() && a.canonical() == b.canonical()
}

pub fn vcompose(f: &PropTerm, g: &PropTerm) -> Result<PropTerm> {
    f.vcompose(g)
}

pub fn hcompose(f: &PropTerm, g: &PropTerm) -> PropTerm {
    f.hcompose(g)
}

/// Every internal wire leaves a single-output vertex or enters a single-input vertex.
pub fn is_special(t: &PropTerm) -> bool {
    t.internal_wires()
        .iter()
        .all(|&((u, _), (v, _))| t.vertices[u].outputs == 1 || t.vertices[v].inputs == 1)
}

/// Interleaving permutation of `1..=k*l` used by fractions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPermutation {
    pub l: usize,
    pub k: usize,
    /// 1-based images of `1..=k*l`.
    pub map: Vec<usize>,
}

impl fmt::Display for BlockPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.map.iter().map(|x| x.to_string()).collect();
        f.write_str(&s.join(" "))
    }
}

pub fn sigma(l: usize, k: usize) -> Result<BlockPermutation> {
    if k == 0 || l == 0 {
        return Err(Error::Domain("block sizes must be positive".into()));
    }
    let map = (1..=k * l)
        .map(|i| {
            let s = (i - 1) / k + 1;
            l * (i - 1 - (s - 1) * k) + s
        })
        .collect();
    Ok(BlockPermutation { l, k, map })
}

fn hfold(terms: &[PropTerm]) -> PropTerm {
    let mut it = terms.iter();
    let first = it.next().expect("at least one term").clone();
    it.fold(first, |acc, t| acc.hcompose(t))
}

/// `(B_1 ⊠ … ⊠ B_k) ∘ σ(l,k) ∘ (A_1 ⊠ … ⊠ A_l)`: output `r` of `A_s` feeds input `s` of `B_r`.
pub fn fraction(numerators: &[PropTerm], denominators: &[PropTerm]) -> Result<PropTerm> {
    let k = numerators.len();
    let l = denominators.len();
    if k == 0 || l == 0 {
        return Err(Error::Domain(
            "fractions need at least one term on each side".into(),
        ));
    }
    for (i, b) in numerators.iter().enumerate() {
        if b.inputs != l {
            return Err(Error::Shape {
                side: "numerator",
                index: i + 1,
                message: format!("has {} inputs, expected {l}", b.inputs),
            });
        }
    }
    for (j, a) in denominators.iter().enumerate() {
        if a.outputs.len() != k {
            return Err(Error::Shape {
                side: "denominator",
                index: j + 1,
                message: format!("has {} outputs, expected {k}", a.outputs.len()),
            });
        }
    }
    let perm: Vec<usize> = sigma(l, k)?.map.iter().map(|x| x - 1).collect();
    let wiring = PropTerm::permutation(&perm)?;
    hfold(numerators).vcompose(&wiring.vcompose(&hfold(denominators))?)
}

/// Syntax of terms: `e`, `x[b,a]`, `V(f,g)` for `f ∘ g`, `H(f,g)` for `f ⊠ g`,
/// and `F{ B1 B2 / A1 A2 }` for a fraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermExpr {
    Unit,
    Gen(usize, usize),
    V(Box<TermExpr>, Box<TermExpr>),
    H(Box<TermExpr>, Box<TermExpr>),
    F(Vec<TermExpr>, Vec<TermExpr>),
}

impl TermExpr {
    pub fn eval(&self) -> Result<PropTerm> {
        match self {
            TermExpr::Unit => Ok(PropTerm::unit()),
            TermExpr::Gen(b, a) => PropTerm::generator(*b, *a),
            TermExpr::V(f, g) => f.eval()?.vcompose(&g.eval()?),
            TermExpr::H(f, g) => Ok(f.eval()?.hcompose(&g.eval()?)),
            TermExpr::F(num, den) => fraction(
                &num.iter().map(TermExpr::eval).collect::<Result<Vec<_>>>()?,
                &den.iter().map(TermExpr::eval).collect::<Result<Vec<_>>>()?,
            ),
        }
    }

    fn hfold(items: Vec<TermExpr>) -> TermExpr {
        let mut it = items.into_iter();
        let first = it.next().expect("at least one term");
        it.fold(first, |acc, t| TermExpr::H(Box::new(acc), Box::new(t)))
    }

    pub fn parse(text: &str) -> Result<TermExpr> {
        let b = text.as_bytes();
        let mut pos = 0;
        let e = parse_expr(b, &mut pos)?;
        skip_ws(b, &mut pos);
        if pos != b.len() {
            return Err(Error::parse(pos, "trailing input"));
        }
        Ok(e)
    }
}

impl fmt::Display for TermExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermExpr::Unit => f.write_str("e"),
            TermExpr::Gen(b, a) => write!(f, "x[{b},{a}]"),
            TermExpr::V(x, y) => write!(f, "V({x},{y})"),
            TermExpr::H(x, y) => write!(f, "H({x},{y})"),
            TermExpr::F(num, den) => {
                f.write_str("F{")?;
                for t in num {
                    write!(f, " {t}")?;
                }
                f.write_str(" /")?;
                for t in den {
                    write!(f, " {t}")?;
                }
                f.write_str(" }")
            }
        }
    }
}

fn skip_ws(b: &[u8], pos: &mut usize) {
    while *pos < b.len() && b[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn expect(b: &[u8], pos: &mut usize, c: u8) -> Result<()> {
    skip_ws(b, pos);
    if b.get(*pos) == Some(&c) {
        *pos += 1;
        Ok(())
    } else {
        Err(Error::parse(*pos, format!("expected '{}'", c as char)))
    }
}

fn parse_number(b: &[u8], pos: &mut usize) -> Result<usize> {
    skip_ws(b, pos);
    let start = *pos;
    while *pos < b.len() && b[*pos].is_ascii_digit() {
        *pos += 1;
    }
    std::str::from_utf8(&b[start..*pos])
        .expect("ascii")
        .parse()
        .map_err(|_| Error::parse(start, "expected a number"))
}

fn parse_expr(b: &[u8], pos: &mut usize) -> Result<TermExpr> {
    skip_ws(b, pos);
    match b.get(*pos) {
        Some(b'e') => {
            *pos += 1;
            Ok(TermExpr::Unit)
        }
        Some(b'x') => {
            *pos += 1;
            expect(b, pos, b'[')?;
            let outs = parse_number(b, pos)?;
            expect(b, pos, b',')?;
            let ins = parse_number(b, pos)?;
            expect(b, pos, b']')?;
            Ok(TermExpr::Gen(outs, ins))
        }
        Some(&c @ (b'V' | b'H')) => {
            *pos += 1;
            expect(b, pos, b'(')?;
            let x = parse_expr(b, pos)?;
            expect(b, pos, b',')?;
            let y = parse_expr(b, pos)?;
            expect(b, pos, b')')?;
            Ok(if c == b'V' {
                TermExpr::V(Box::new(x), Box::new(y))
            } else {
                TermExpr::H(Box::new(x), Box::new(y))
            })
        }
        Some(b'F') => {
            *pos += 1;
            expect(b, pos, b'{')?;
            let mut num = Vec::new();
            loop {
                skip_ws(b, pos);
                if b.get(*pos) == Some(&b'/') {
                    *pos += 1;
                    break;
                }
                num.push(parse_expr(b, pos)?);
            }
            let mut den = Vec::new();
            loop {
                skip_ws(b, pos);
                if b.get(*pos) == Some(&b'}') {
                    *pos += 1;
                    break;
                }
                den.push(parse_expr(b, pos)?);
            }
            Ok(TermExpr::F(num, den))
        }
        Some(&c) => Err(Error::parse(*pos, format!("unexpected {:?}", c as char))),
        None => Err(Error::parse(*pos, "unexpected end of input")),
    }
}

/// Which way a tree is embedded into the PROP.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbedSide {
    /// Vertices become single-output generators.
    Up,
    /// Vertices become single-input generators.
    Down,
}

fn embed_node(node: &Node, side: EmbedSide) -> TermExpr {
    match node {
        Node::Leaf => TermExpr::Unit,
        Node::Vertex(ch) => {
            let kids = TermExpr::hfold(ch.iter().map(|c| embed_node(c, side)).collect());
            match side {
                EmbedSide::Up => TermExpr::V(Box::new(TermExpr::Gen(1, ch.len())), Box::new(kids)),
                EmbedSide::Down => {
                    TermExpr::V(Box::new(kids), Box::new(TermExpr::Gen(ch.len(), 1)))
                }
            }
        }
    }
}

/// The tree as a composite of generators; the exceptional tree gives `e`.
pub fn iota_embed_expr(t: &PlanarTree, side: EmbedSide) -> TermExpr {
    embed_node(t.root(), side)
}

pub fn iota_embed(t: &PlanarTree, side: EmbedSide) -> PropTerm {
    iota_embed_expr(t, side)
        .eval()
        .expect("embedded trees are well formed")
}

fn subtree_vertices(t: &PlanarTree, root: usize) -> BTreeSet<usize> {
    let id = &t.vertex(root).id;
    (root..t.vertex_count())
        .take_while(|&i| id.is_prefix_of(&t.vertex(i).id))
        .collect()
}

/// Vertex sets of the subtrees hanging from `root`'s children (empty for a leaf).
fn child_subtrees(t: &PlanarTree, root: usize) -> Vec<BTreeSet<usize>> {
    t.vertex(root)
        .children
        .iter()
        .map(|c| match *c {
            Child::Leaf(_) => BTreeSet::new(),
            Child::Vertex(j) => subtree_vertices(t, j),
        })
        .collect()
}

fn node_of(t: &PlanarTree, vs: &BTreeSet<usize>) -> Node {
    if vs.is_empty() {
        Node::Leaf
    } else {
        t.induced_subtree(vs).expect("subtree").0.root().clone()
    }
}

/// The term assigned to a pair with levels, as an expression.
pub fn varpi_expr(x: &ComplementaryPair) -> TermExpr {
    let (up, down) = (x.up(), x.down());
    if down.is_exceptional() {
        return iota_embed_expr(up, EmbedSide::Up);
    }
    if up.is_exceptional() {
        return iota_embed_expr(down, EmbedSide::Down);
    }
    let (lu, ld) = (x.up_levels()[0], x.down_levels()[0]);
    if ld < lu {
        return TermExpr::V(
            Box::new(iota_embed_expr(down, EmbedSide::Down)),
            Box::new(iota_embed_expr(up, EmbedSide::Up)),
        );
    }
    if ld == lu {
        let us: Vec<TermExpr> = child_subtrees(up, 0)
            .iter()
            .map(|s| embed_node(&node_of(up, s), EmbedSide::Up))
            .collect();
        let ds: Vec<TermExpr> = child_subtrees(down, 0)
            .iter()
            .map(|s| embed_node(&node_of(down, s), EmbedSide::Down))
            .collect();
        let gen = TermExpr::Gen(ds.len(), us.len());
        return TermExpr::V(
            Box::new(TermExpr::V(Box::new(TermExpr::hfold(ds)), Box::new(gen))),
            Box::new(TermExpr::hfold(us)),
        );
    }
    let (num, den) = case3_parts(x).expect("down root below up root");
    TermExpr::F(
        num.iter().map(varpi_expr).collect(),
        den.iter().map(varpi_expr).collect(),
    )
}

/// Restrictions used when the down root lies strictly below the up root:
/// the upper part of `U` against each subtree on the down root's inputs
/// (numerators), and each piece of `U` hanging below that upper part against
/// the down root alone (denominators). `None` in the other cases.
pub fn case3_parts(
    x: &ComplementaryPair,
) -> Option<(Vec<ComplementaryPair>, Vec<ComplementaryPair>)> {
    let (up, down) = (x.up(), x.down());
    if up.is_exceptional() || down.is_exceptional() {
        return None;
    }
    let ld = x.down_levels()[0];
    if ld <= x.up_levels()[0] {
        return None;
    }
    // the up vertices strictly above the down root, and what hangs below them
    let top: BTreeSet<usize> = (0..up.vertex_count())
        .filter(|&i| x.up_levels()[i] < ld)
        .collect();
    fn hang(up: &PlanarTree, top: &BTreeSet<usize>, v: usize, out: &mut Vec<BTreeSet<usize>>) {
        for c in &up.vertex(v).children {
            match *c {
                Child::Leaf(_) => out.push(BTreeSet::new()),
                Child::Vertex(j) if top.contains(&j) => hang(up, top, j, out),
                Child::Vertex(j) => out.push(subtree_vertices(up, j)),
            }
        }
    }
    let mut hanging = Vec::new();
    hang(up, &top, 0, &mut hanging);
    let root_only: BTreeSet<usize> = [0].into();
    let den = hanging
        .iter()
        .map(|u| restrict(x, u, &root_only).expect("hanging subtree"))
        .collect();
    let num = child_subtrees(down, 0)
        .iter()
        .map(|d| restrict(x, &top, d).expect("top subtree"))
        .collect();
    Some((num, den))
}

pub fn varpi(x: &ComplementaryPair) -> PropTerm {
    varpi_expr(x)
        .eval()
        .expect("varpi builds well-shaped terms")
}

/// Outcome of comparing the kernels of the term map and of the projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelReport {
    pub pairs: usize,
    pub term_classes: usize,
    pub zone_classes: usize,
    pub joint_classes: usize,
}

impl KernelReport {
    pub fn agree(&self) -> bool {
        self.term_classes == self.joint_classes && self.zone_classes == self.joint_classes
    }
}

/// Compares the partitions of the `(m, n)` pairs induced by `varpi` and by `project`.
pub fn theorem_c_report(m: usize, n: usize) -> Result<KernelReport> {
    let xs = enumerate_leveled_pairs(m, n)?;
    let keyed: Vec<(PropTerm, ZonePair)> = xs
        .par_iter()
        .map(|x| (varpi(x).canonical(), project(x)))
        .collect();
    let mut terms = HashMap::new();
    let mut zones = HashMap::new();
    let mut joint = HashMap::new();
    for (t, z) in &keyed {
        terms.entry(t).or_insert(());
        zones.entry(z).or_insert(());
        joint.entry((t, z)).or_insert(());
    }
    Ok(KernelReport {
        pairs: xs.len(),
        term_classes: terms.len(),
        zone_classes: zones.len(),
        joint_classes: joint.len(),
    })
}

/// Two pairs get equal terms exactly when they project to the same zone pair.
pub fn theorem_c_check(m: usize, n: usize) -> Result<bool> {
    Ok(theorem_c_report(m, n)?.agree())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::Orientation;

    fn gen(b: usize, a: usize) -> PropTerm {
        PropTerm::generator(b, a).unwrap()
    }

    fn expr(s: &str) -> PropTerm {
        TermExpr::parse(s).unwrap().eval().unwrap()
    }

    #[test]
    fn generators() {
        assert!(Generator::new(1, 1).is_err());
        assert!(Generator::new(0, 2).is_err());
        assert_eq!(gen(2, 1).biarity(), (2, 1));
        assert!(!term_eq(&gen(1, 2), &gen(2, 1)));
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(2, 2).unwrap().map, vec![1, 3, 2, 4]);
        assert_eq!(sigma(3, 2).unwrap().map, vec![1, 4, 2, 5, 3, 6]);
        for k in 1..=6 {
            assert_eq!(sigma(1, k).unwrap().map, (1..=k).collect::<Vec<_>>());
        }
        assert_eq!(sigma(2, 2).unwrap().to_string(), "1 3 2 4");
    }

    #[test]
    fn unit_laws_and_composition() {
        let e = PropTerm::unit();
        let m = gen(1, 2);
        assert!(term_eq(&e.vcompose(&m).unwrap(), &m));
        assert!(term_eq(&m.vcompose(&e.hcompose(&e)).unwrap(), &m));
        assert_eq!(e.hcompose(&e), PropTerm::identity(2));
        assert_eq!(m.hcompose(&m).biarity(), (2, 4));
        let left = m.vcompose(&m.hcompose(&e)).unwrap();
        let right = m.vcompose(&e.hcompose(&m)).unwrap();
        assert!(!term_eq(&left, &right));
        assert!(matches!(m.vcompose(&m), Err(Error::ArityMismatch(_))));
        // vertex listing order does not matter
        let a = expr("V(x[2,1],x[1,2])");
        let b = gen(2, 1).vcompose(&gen(1, 2)).unwrap();
        assert!(term_eq(&a, &b));
    }

    #[test]
    fn from_parts_validation() {
        let g = Generator::new(1, 2).unwrap();
        let cyc = PropTerm::from_parts(
            1,
            vec![g, g],
            vec![
                vec![Source::Input(0), Source::Out(1, 0)],
                vec![Source::Out(0, 0), Source::Input(0)],
            ],
            vec![],
        );
        assert!(cyc.is_err());
        let twice = PropTerm::from_parts(
            2,
            vec![g],
            vec![vec![Source::Input(0), Source::Input(0)]],
            vec![Source::Out(0, 0)],
        );
        assert!(twice.is_err());
        let ok = PropTerm::from_parts(
            2,
            vec![g],
            vec![vec![Source::Input(1), Source::Input(0)]],
            vec![Source::Out(0, 0)],
        )
        .unwrap();
        assert!(!term_eq(&ok, &gen(1, 2)));
    }

    #[test]
    fn fraction_shapes() {
        let b = gen(1, 2);
        let a = gen(2, 1);
        // k = 1: operadic composition
        let f = fraction(std::slice::from_ref(&b), &[gen(1, 2), gen(1, 3)]).unwrap();
        let g = b.vcompose(&gen(1, 2).hcompose(&gen(1, 3))).unwrap();
        assert!(term_eq(&f, &g));
        // l = 1: cooperadic composition
        let f = fraction(&[gen(2, 1), gen(3, 1)], std::slice::from_ref(&a)).unwrap();
        let g = gen(2, 1).hcompose(&gen(3, 1)).vcompose(&a).unwrap();
        assert!(term_eq(&f, &g));
        let err = fraction(&[b.clone(), gen(1, 3)], &[a.clone(), a.clone()]).unwrap_err();
        assert_eq!(
            err,
            Error::Shape {
                side: "numerator",
                index: 2,
                message: "has 3 inputs, expected 2".into()
            }
        );
        assert!(matches!(
            fraction(&[b.clone(), b.clone()], &[a.clone(), gen(3, 1)]),
            Err(Error::Shape {
                side: "denominator",
                index: 2,
                ..
            })
        ));
    }

    #[test]
    fn crossed_fraction_wiring() {
        // outputs of the two lower terms cross into the two upper ones
        let a = gen(1, 2);
        let c = gen(2, 1);
        let f = fraction(&[a.clone(), a.clone()], &[c.clone(), c.clone()])
            .unwrap()
            .canonical();
        let wires = f.internal_wires();
        assert_eq!(wires.len(), 4);
        let upper: BTreeSet<usize> = wires.iter().map(|w| w.1 .0).collect();
        let lower: BTreeSet<usize> = wires.iter().map(|w| w.0 .0).collect();
        assert_eq!(upper.len(), 2);
        assert_eq!(lower.len(), 2);
        for &lo in &lower {
            let targets: BTreeSet<usize> = wires
                .iter()
                .filter(|w| w.0 .0 == lo)
                .map(|w| w.1 .0)
                .collect();
            assert_eq!(targets, upper);
        }
        // output r of lower s reaches input s of upper r
        let raw = fraction(&[a.clone(), a.clone()], &[c.clone(), c]).unwrap();
        let mut got: Vec<((usize, usize), (usize, usize))> = raw.internal_wires();
        got.sort();
        assert_eq!(
            got,
            vec![
                ((0, 0), (2, 0)),
                ((0, 1), (3, 0)),
                ((1, 0), (2, 1)),
                ((1, 1), (3, 1))
            ]
        );
    }

    #[test]
    fn expression_round_trip() {
        for s in [
            "e",
            "x[2,1]",
            "V(x[1,2],H(e,x[1,2]))",
            "F{ x[1,2] x[1,2] / V(x[2,1],x[1,2]) x[2,1] }",
        ] {
            let e = TermExpr::parse(s).unwrap();
            assert_eq!(e.to_string(), s);
        }
        assert!(TermExpr::parse("V(e,").is_err());
        assert!(TermExpr::parse("x[1,1]").unwrap().eval().is_err());
    }

    #[test]
    fn embeddings() {
        let up = |s: &str| PlanarTree::parse(s, Orientation::Up).unwrap();
        assert!(term_eq(
            &iota_embed(&up("(* *)"), EmbedSide::Up),
            &gen(1, 2)
        ));
        assert!(term_eq(
            &iota_embed(&up("*"), EmbedSide::Up),
            &PropTerm::unit()
        ));
        assert!(term_eq(
            &iota_embed(&up("((* *) *)"), EmbedSide::Up),
            &expr("V(x[1,2],H(x[1,2],e))")
        ));
        let d = PlanarTree::parse("(* (* *))", Orientation::Down).unwrap();
        assert!(term_eq(
            &iota_embed(&d, EmbedSide::Down),
            &expr("V(H(e,x[2,1]),x[2,1])")
        ));
    }

    #[test]
    fn varpi_small_cases() {
        let p = |s: &str| ComplementaryPair::parse(s).unwrap();
        assert!(term_eq(
            &varpi(&p("(* *)2 ~ (* *)1")),
            &expr("V(x[2,1],x[1,2])")
        ));
        assert!(term_eq(&varpi(&p("(* *)1 ~ (* *)1")), &gen(2, 2)));
        assert!(term_eq(&varpi(&p("* ~ *")), &PropTerm::unit()));
        let worked = varpi(&p("((* *)3 *)1 ~ (* *)2"));
        let by_hand = fraction(
            &[gen(1, 2), gen(1, 2)],
            &[gen(2, 1).vcompose(&gen(1, 2)).unwrap(), gen(2, 1)],
        )
        .unwrap();
        assert!(term_eq(&worked, &by_hand));
        assert_eq!(
            varpi_expr(&p("((* *)3 *)1 ~ (* *)2")).to_string(),
            "F{ V(x[1,2],H(e,e)) V(x[1,2],H(e,e)) / V(V(H(e,e),x[2,1]),V(x[1,2],H(e,e))) V(H(e,e),x[2,1]) }"
        );
        assert!(!is_special(&worked));
        assert!(is_special(&gen(2, 1).vcompose(&gen(1, 2)).unwrap()));
        assert!(is_special(&gen(3, 3)));
    }

    #[test]
    fn theorem_c_small() {
        for total in 2..=5 {
            for m in 1..total {
                let r = theorem_c_report(m, total - m).unwrap();
                assert!(r.agree(), "{m},{} {r:?}", total - m);
            }
        }
        let r = theorem_c_report(3, 2).unwrap();
        assert_eq!((r.pairs, r.joint_classes), (13, 13));
        let r = theorem_c_report(4, 1).unwrap();
        assert_eq!((r.pairs, r.joint_classes), (13, 11));
    }

    /// The pair drawn upside down: trees swap roles, levels reverse.
    fn upside_down(x: &ComplementaryPair) -> ComplementaryPair {
        let h = x.height();
        ComplementaryPair::new(
            x.down().flipped(),
            x.up().flipped(),
            x.down_levels().iter().map(|l| h + 1 - l).collect(),
            x.up_levels().iter().map(|l| h + 1 - l).collect(),
        )
        .unwrap()
    }

    #[test]
    fn dual_recursion_agrees() {
        for total in 2..=6 {
            for m in 1..total {
                for x in enumerate_leveled_pairs(m, total - m).unwrap() {
                    let dual = varpi(&upside_down(&x)).op();
                    assert!(term_eq(&varpi(&x), &dual), "{x}");
                }
            }
        }
    }

    #[test]
    fn special_terms_are_exactly_the_first_two_cases() {
        for total in 2..=6 {
            for m in 1..total {
                for x in enumerate_leveled_pairs(m, total - m).unwrap() {
                    if x.up().is_exceptional() || x.down().is_exceptional() {
                        continue;
                    }
                    let case3 = x.down_levels()[0] > x.up_levels()[0];
                    let t = varpi(&x);
                    assert_eq!(is_special(&t), !case3, "{x}");
                    let big = t
                        .vertices()
                        .iter()
                        .filter(|g| g.inputs >= 2 && g.outputs >= 2)
                        .count();
                    if !case3 {
                        assert_eq!(big == 1, x.down_levels()[0] == x.up_levels()[0]);
                    }
                }
            }
        }
    }

    #[test]
    fn json_export() {
        let j = gen(2, 1).vcompose(&gen(1, 2)).unwrap().to_json();
        assert_eq!(j["inputs"], 2);
        assert_eq!(j["outputs"], 2);
        assert_eq!(j["wires"].as_array().unwrap().len(), 5);
    }
}
