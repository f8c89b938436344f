//! Random generators shared by the integration tests.
#![allow(dead_code)]

use biassoc::prop::{fraction, iota_embed, EmbedSide, PropTerm};
use biassoc::tree::{enumerate_trees, Orientation};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn gen(b: usize, a: usize) -> PropTerm {
    PropTerm::generator(b, a).unwrap()
}

fn biarity_pick(rng: &mut StdRng, inputs: usize) -> usize {
    if inputs == 1 {
        rng.gen_range(2..=3)
    } else {
        rng.gen_range(1..=3)
    }
}

/// A random term with exactly `inputs` inputs.
pub fn term_with_inputs(rng: &mut StdRng, inputs: usize, depth: usize) -> PropTerm {
    let mut pieces = Vec::new();
    let mut left = inputs;
    while left > 0 {
        let take = rng.gen_range(1..=left.min(3));
        left -= take;
        let piece = if take == 1 && rng.gen_bool(0.4) {
            PropTerm::unit()
        } else {
            gen(biarity_pick(rng, take), take)
        };
        pieces.push(piece);
    }
    let mut it = pieces.into_iter();
    let first = it.next().unwrap();
    let layer = it.fold(first, |acc, p| acc.hcompose(&p));
    if depth == 0 || rng.gen_bool(0.3) {
        return layer;
    }
    let (outs, _) = layer.biarity();
    term_with_inputs(rng, outs, depth - 1)
        .vcompose(&layer)
        .unwrap()
}

pub fn random_term(rng: &mut StdRng) -> PropTerm {
    let inputs = rng.gen_range(1..=4);
    term_with_inputs(rng, inputs, 3)
}

/// The same graph with its vertices listed in a shuffled order.
pub fn shuffled(t: &PropTerm, rng: &mut StdRng) -> PropTerm {
    use biassoc::prop::Source;
    let n = t.vertices().len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    // vertex v moves to slot perm[v]
    let mut vertices = t.vertices().to_vec();
    let mut feeds = vec![Vec::new(); n];
    let map = |s: Source| match s {
        Source::Input(i) => Source::Input(i),
        Source::Out(v, j) => Source::Out(perm[v], j),
    };
    for v in 0..n {
        vertices[perm[v]] = t.vertices()[v];
        feeds[perm[v]] = t.feeds()[v].iter().map(|&s| map(s)).collect();
    }
    let outputs = t.output_sources().iter().map(|&s| map(s)).collect();
    PropTerm::from_parts(t.biarity().1, vertices, feeds, outputs).unwrap()
}

/// A single-output term that is not special.
fn knot() -> PropTerm {
    gen(1, 2)
        .vcompose(&gen(2, 2).vcompose(&gen(2, 2)).unwrap())
        .unwrap()
}

fn graft(rng: &mut StdRng) -> PropTerm {
    if rng.gen_bool(0.08) {
        knot()
    } else {
        up_tree(rng)
    }
}

fn up_tree(rng: &mut StdRng) -> PropTerm {
    let leaves = rng.gen_range(1..=3);
    let trees = enumerate_trees(leaves, Orientation::Up).unwrap();
    iota_embed(trees.choose(rng).unwrap(), EmbedSide::Up)
}

/// One fraction instance: denominators are a generator with `k` outputs over
/// embedded up trees, numerators are embedded down trees over a generator
/// with `l` inputs. Occasionally a non-special piece is grafted in.
pub struct FractionCase {
    pub numerators: Vec<PropTerm>,
    pub denominators: Vec<PropTerm>,
    pub term: PropTerm,
}

pub fn fraction_case(rng: &mut StdRng) -> FractionCase {
    let k = rng.gen_range(1..=3);
    let l = rng.gen_range(1..=3);
    let mut denominators = Vec::new();
    for _ in 0..l {
        let r = if k == 1 {
            rng.gen_range(2..=3)
        } else {
            rng.gen_range(1..=3)
        };
        let mut below = graft(rng);
        for _ in 1..r {
            below = below.hcompose(&graft(rng));
        }
        denominators.push(gen(k, r).vcompose(&below).unwrap());
    }
    let mut numerators = Vec::new();
    for _ in 0..k {
        let q = if l == 1 {
            rng.gen_range(2..=3)
        } else {
            rng.gen_range(1..=3)
        };
        let mut above = graft(rng).op();
        for _ in 1..q {
            above = above.hcompose(&graft(rng).op());
        }
        numerators.push(above.vcompose(&gen(q, l)).unwrap());
    }
    let term = fraction(&numerators, &denominators).unwrap();
    FractionCase {
        numerators,
        denominators,
        term,
    }
}
