//! Complementary pairs with zones and the step-one biassociahedron face poset.
//!
//! A zone function is a weakly monotone surjection onto `1..=l` (same
//! top-down convention as levels). A value hit by both trees is a barrier,
//! the other values are up-zones or down-zones. Barriers are strict on each
//! tree and no two adjacent values may be zones of the same kind.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::leveled::{
    enumerate_leveled_pairs, level_functions, parse_labeled_pair, vertex_label, write_labeled,
    ComplementaryPair, Side, VertexRef,
};
use crate::poset::FinitePoset;
use crate::tree::{Orientation, PlanarTree, VertexId};

/// Classification of a zone value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ZoneKind {
    Up,
    Down,
    Barrier,
}

impl ZoneKind {
    pub fn letter(self) -> char {
        match self {
            ZoneKind::Up => 'U',
            ZoneKind::Down => 'D',
            ZoneKind::Barrier => 'B',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZonePair {
    up: PlanarTree,
    down: PlanarTree,
    up_zones: Vec<usize>,
    down_zones: Vec<usize>,
    count: usize,
}

impl fmt::Display for ZonePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ~ {}",
            write_labeled(&self.up, &self.up_zones),
            write_labeled(&self.down, &self.down_zones)
        )
    }
}

impl ZonePair {
    pub fn new(
        up: PlanarTree,
        down: PlanarTree,
        up_zones: Vec<usize>,
        down_zones: Vec<usize>,
    ) -> Result<Self> {
        if up.orientation() != Orientation::Up || down.orientation() != Orientation::Down {
            return Err(Error::InvalidZones(
                "first tree must be up-rooted and second down-rooted".into(),
            ));
        }
        if up_zones.len() != up.vertex_count() || down_zones.len() != down.vertex_count() {
            return Err(Error::InvalidZones("one zone per vertex required".into()));
        }
        let count = up_zones
            .iter()
            .chain(&down_zones)
            .copied()
            .max()
            .unwrap_or(0);
        let used: BTreeSet<usize> = up_zones.iter().chain(&down_zones).copied().collect();
        if used.contains(&0) || used.len() != count {
            return Err(Error::InvalidZones(format!(
                "zones {used:?} are not exactly 1..={count}"
            )));
        }
        let z = ZonePair {
            up,
            down,
            up_zones,
            down_zones,
            count,
        };
        let kinds = z.kinds();
        let check_tree = |t: &PlanarTree, zones: &[usize], upper_is_parent: bool| -> Result<()> {
            for (i, v) in t.vertices().iter().enumerate() {
                if let Some(p) = v.parent {
                    let (hi, lo) = if upper_is_parent { (p, i) } else { (i, p) };
                    if zones[hi] > zones[lo] {
                        return Err(Error::InvalidZones(format!(
                            "zone function is not monotone at {}",
                            v.id
                        )));
                    }
                    if zones[hi] == zones[lo] && kinds[zones[hi] - 1] == ZoneKind::Barrier {
                        return Err(Error::InvalidZones(format!(
                            "barrier {} holds the comparable vertices {} and {}",
                            zones[hi],
                            t.vertex(p).id,
                            v.id
                        )));
                    }
                }
            }
            Ok(())
        };
        check_tree(&z.up, &z.up_zones, true)?;
        check_tree(&z.down, &z.down_zones, false)?;
        // ancestor/descendant pairs in one barrier are caught by the edge check, since
        // monotonicity forces every vertex between them into the same barrier
        for w in kinds.windows(2) {
            if w[0] == w[1] && w[0] != ZoneKind::Barrier {
                return Err(Error::InvalidZones(format!(
                    "adjacent zones of type {}",
                    w[0].letter()
                )));
            }
        }
        Ok(z)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (u, ul, d, dl) = parse_labeled_pair(text)?;
        ZonePair::new(u, d, ul, dl)
    }

    pub fn up(&self) -> &PlanarTree {
        &self.up
    }

    pub fn down(&self) -> &PlanarTree {
        &self.down
    }

    pub fn up_zones(&self) -> &[usize] {
        &self.up_zones
    }

    pub fn down_zones(&self) -> &[usize] {
        &self.down_zones
    }

    pub fn zone_count(&self) -> usize {
        self.count
    }

    pub fn arity(&self) -> (usize, usize) {
        (self.up.leaf_count(), self.down.leaf_count())
    }

    pub fn zone(&self, v: VertexRef) -> usize {
        match v.side {
            Side::Up => self.up_zones[v.index],
            Side::Down => self.down_zones[v.index],
        }
    }

    pub fn kinds(&self) -> Vec<ZoneKind> {
        let mut has_up = vec![false; self.count];
        let mut has_down = vec![false; self.count];
        for &z in &self.up_zones {
            has_up[z - 1] = true;
        }
        for &z in &self.down_zones {
            has_down[z - 1] = true;
        }
        has_up
            .iter()
            .zip(&has_down)
            .map(|(&u, &d)| match (u, d) {
                (true, true) => ZoneKind::Barrier,
                (true, false) => ZoneKind::Up,
                _ => ZoneKind::Down,
            })
            .collect()
    }

    /// Vertex refs in each zone, first zone first.
    pub fn zone_sets(&self) -> Vec<Vec<VertexRef>> {
        let mut out = vec![Vec::new(); self.count];
        for i in 0..self.up.vertex_count() {
            out[self.up_zones[i] - 1].push(VertexRef::up(i));
        }
        for i in 0..self.down.vertex_count() {
            out[self.down_zones[i] - 1].push(VertexRef::down(i));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let zones: Vec<Vec<String>> = self
            .zone_sets()
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
            "zones": zones,
            "type": zone_type(self),
            "text": self.to_string(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let up = PlanarTree::from_json(&v["up"])?;
        let down = PlanarTree::from_json(&v["down"])?;
        let mut uz = vec![0; up.vertex_count()];
        let mut dz = vec![0; down.vertex_count()];
        let zones = v["zones"]
            .as_array()
            .ok_or_else(|| Error::InvalidZones("missing \"zones\" array".into()))?;
        for (i, ids) in zones.iter().enumerate() {
            for id in ids.as_array().into_iter().flatten() {
                let s = id.as_str().unwrap_or_default();
                let (tree, slot, path) = match s.split_once(':') {
                    Some(("u", p)) => (&up, &mut uz, p),
                    Some(("d", p)) => (&down, &mut dz, p),
                    _ => return Err(Error::InvalidZones(format!("bad vertex id {s:?}"))),
                };
                let idx = tree
                    .index_of(&path.parse::<VertexId>()?)
                    .ok_or_else(|| Error::InvalidZones(format!("no vertex {s:?}")))?;
                slot[idx] = i + 1;
            }
        }
        ZonePair::new(up, down, uz, dz)
    }
}

/// The word of zone kinds, e.g. `DBDUBBUB`.
pub fn zone_type(z: &ZonePair) -> String {
    z.kinds().into_iter().map(ZoneKind::letter).collect()
}

fn closure_of(kinds: &[ZoneKind], i: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::from([i]);
    if kinds[i - 1] != ZoneKind::Barrier {
        if i > 1 && kinds[i - 2] == ZoneKind::Barrier {
            out.insert(i - 1);
        }
        if i < kinds.len() && kinds[i] == ZoneKind::Barrier {
            out.insert(i + 1);
        }
    }
    out
}

/// `{i}` for a barrier, otherwise `i` with its neighbouring barriers.
pub fn closure(z: &ZonePair, i: usize) -> Result<BTreeSet<usize>> {
    if i == 0 || i > z.count {
        return Err(Error::Domain(format!("zone {i} outside 1..={}", z.count)));
    }
    Ok(closure_of(&z.kinds(), i))
}

/// Merges runs of adjacent up-only levels and of adjacent down-only levels.
pub fn project(x: &ComplementaryPair) -> ZonePair {
    let mut kind = vec![(false, false); x.height()];
    for &l in x.up_levels() {
        kind[l - 1].0 = true;
    }
    for &l in x.down_levels() {
        kind[l - 1].1 = true;
    }
    let mut map = vec![0usize; x.height() + 1];
    let mut zone = 0;
    for i in 0..x.height() {
        let merges = i > 0 && kind[i] == kind[i - 1] && kind[i] != (true, true);
        if !merges {
            zone += 1;
        }
        map[i + 1] = zone;
    }
    ZonePair {
        up: x.up().clone(),
        down: x.down().clone(),
        up_zones: x.up_levels().iter().map(|&l| map[l]).collect(),
        down_zones: x.down_levels().iter().map(|&l| map[l]).collect(),
        count: zone,
    }
}

/// A pair with levels projecting onto `z`: barriers stay single levels and
/// each zone is spread out along its least linear extension.
pub fn pi_section(z: &ZonePair) -> ComplementaryPair {
    let mut up_levels = vec![0usize; z.up.vertex_count()];
    let mut down_levels = vec![0usize; z.down.vertex_count()];
    let mut next = 1;
    for (i, members) in z.zone_sets().into_iter().enumerate() {
        let zone = i + 1;
        if members.iter().any(|v| v.side == Side::Up)
            && members.iter().any(|v| v.side == Side::Down)
        {
            for v in members {
                match v.side {
                    Side::Up => up_levels[v.index] = next,
                    Side::Down => down_levels[v.index] = next,
                }
            }
            next += 1;
            continue;
        }
        let side = members[0].side;
        let (tree, zones, levels) = match side {
            Side::Up => (&z.up, &z.up_zones, &mut up_levels),
            Side::Down => (&z.down, &z.down_zones, &mut down_levels),
        };
        let mut pending: BTreeSet<usize> = members.iter().map(|v| v.index).collect();
        while let Some(&v) = pending.iter().find(|&&v| {
            // every same-zone vertex drawn above v must already be placed
            let above: Vec<usize> = match side {
                Side::Up => tree.vertex(v).parent.into_iter().collect(),
                Side::Down => tree
                    .vertex(v)
                    .children
                    .iter()
                    .filter_map(|c| match *c {
                        crate::tree::Child::Vertex(j) => Some(j),
                        crate::tree::Child::Leaf(_) => None,
                    })
                    .collect(),
            };
            above
                .iter()
                .all(|&a| zones[a] != zone || !pending.contains(&a))
        }) {
            pending.remove(&v);
            levels[v] = next;
            next += 1;
        }
    }
    ComplementaryPair::new(z.up.clone(), z.down.clone(), up_levels, down_levels)
        .expect("section of a valid zone pair is a valid level function")
}

/// `Z1 <= Z2` iff some level function lifting `Z1` lies below one lifting `Z2`.
///
/// With `t(x)` the zone of the image of `x`, this holds iff the trees
/// contract, `z1(x) < z1(y)` forces `t(x) <= t(y)`, every barrier of `Z1`
/// lands inside one barrier of `Z2`, and inside each non-barrier zone of `Z2`
/// the forced weak orderings and the tree order admit a common layering.
pub fn zone_leq(z1: &ZonePair, z2: &ZonePair) -> Result<bool> {
    if z1.arity() != z2.arity() {
        return Err(Error::Domain(format!(
            "cannot compare zone pairs of arity {:?} and {:?}",
            z1.arity(),
            z2.arity()
        )));
    }
    let (Some(fu), Some(fd)) = (z1.up.morphism_to(&z2.up), z1.down.morphism_to(&z2.down)) else {
        return Ok(false);
    };
    let nu = z2.up.vertex_count();
    let nodes = nu + z2.down.vertex_count();
    // (source zone, image node, image zone); down nodes are offset by `nu`
    let mut xs: Vec<(usize, usize, usize)> = Vec::new();
    for (i, &j) in fu.iter().enumerate() {
        xs.push((z1.up_zones[i], j, z2.up_zones[j]));
    }
    for (i, &j) in fd.iter().enumerate() {
        xs.push((z1.down_zones[i], nu + j, z2.down_zones[j]));
    }
    let kinds1 = z1.kinds();
    let kinds2 = z2.kinds();
    let barrier2 = |j: usize| kinds2[j - 1] == ZoneKind::Barrier;
    for (b, _) in kinds1
        .iter()
        .enumerate()
        .filter(|(_, k)| **k == ZoneKind::Barrier)
    {
        let images: BTreeSet<usize> = xs.iter().filter(|x| x.0 == b + 1).map(|x| x.2).collect();
        if images.len() != 1 || !barrier2(*images.first().expect("barriers are nonempty")) {
            return Ok(false);
        }
    }
    // reach[a][b]: node a must sit weakly above node b (smaller or equal level)
    let mut reach = vec![vec![false; nodes]; nodes];
    for a in &xs {
        for b in &xs {
            if a.0 < b.0 {
                if a.2 > b.2 {
                    return Ok(false);
                }
                if a.2 == b.2 && !barrier2(a.2) {
                    reach[a.1][b.1] = true;
                }
            }
        }
    }
    let mut strict = Vec::new();
    for (i, v) in z2.up.vertices().iter().enumerate() {
        if let Some(p) = v.parent.filter(|&p| z2.up_zones[p] == z2.up_zones[i]) {
            strict.push((p, i));
        }
    }
    for (i, v) in z2.down.vertices().iter().enumerate() {
        if let Some(p) = v.parent.filter(|&p| z2.down_zones[p] == z2.down_zones[i]) {
            strict.push((nu + i, nu + p));
        }
    }
    for &(a, b) in &strict {
        reach[a][b] = true;
    }
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for c in 0..nodes {
        let via = reach[c].clone();
        for row in reach.iter_mut() {
            if row[c] {
                for (b, &hop) in via.iter().enumerate() {
                    row[b] |= hop;
                }
            }
        }
    }
    Ok(strict.iter().all(|&(a, b)| !reach[b][a]))
}

/// All zone pairs of arity `(m, n)`, as the image of [`project`], sorted.
pub fn enumerate_zone_pairs(m: usize, n: usize) -> Result<Vec<ZonePair>> {
    let set: BTreeSet<ZonePair> = enumerate_leveled_pairs(m, n)?
        .par_iter()
        .map(project)
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(set.into_iter().collect())
}

/// The step-one biassociahedron face poset.
pub fn biassociahedron_poset(m: usize, n: usize) -> Result<FinitePoset> {
    if m + n < 2 {
        return Err(Error::Domain("need m + n >= 2".into()));
    }
    let zs = enumerate_zone_pairs(m, n)?;
    let keys = zs.iter().map(|z| z.to_string()).collect();
    FinitePoset::from_fn(keys, |i, j| zone_leq(&zs[i], &zs[j]).unwrap_or(false))
}

/// Zone functions on a fixed pair of trees, as the image of all level functions.
pub fn zone_functions(up: &PlanarTree, down: &PlanarTree) -> Vec<ZonePair> {
    let set: BTreeSet<ZonePair> = level_functions(up, down)
        .into_iter()
        .map(|(ul, dl)| {
            project(
                &ComplementaryPair::new(up.clone(), down.clone(), ul, dl).expect("valid levels"),
            )
        })
        .collect();
    set.into_iter().collect()
}

fn cross_signature<F: Fn(VertexRef) -> usize>(
    up: &PlanarTree,
    down: &PlanarTree,
    value: F,
) -> Vec<std::cmp::Ordering> {
    let mut out = Vec::new();
    for u in 0..up.vertex_count() {
        for d in 0..down.vertex_count() {
            out.push(value(VertexRef::up(u)).cmp(&value(VertexRef::down(d))));
        }
    }
    out
}

/// The projected zones keep exactly the up/down relative heights of `x`,
/// and zone functions on `x`'s trees are determined by those relative heights.
pub fn relative_heights_check(x: &ComplementaryPair) -> bool {
    let z = project(x);
    let from_levels = cross_signature(x.up(), x.down(), |v| x.level(v));
    if from_levels != cross_signature(x.up(), x.down(), |v| z.zone(v)) {
        return false;
    }
    let mut seen: BTreeMap<Vec<std::cmp::Ordering>, ZonePair> = BTreeMap::new();
    for zf in zone_functions(x.up(), x.down()) {
        let sig = cross_signature(x.up(), x.down(), |v| zf.zone(v));
        if let Some(other) = seen.insert(sig, zf.clone()) {
            if other != zf {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leveled::pair_leq;
    use crate::tree::{enumerate_trees, face_poset_associahedron};

    fn zp(s: &str) -> ZonePair {
        ZonePair::parse(s).unwrap()
    }

    fn eight_zone_example() -> ZonePair {
        zp("((((((* *)8 *)7 *)6 *)5 *)4 *)2 ~ ((((((* *)1 *)2 *)3 *)5 *)6 *)8")
    }

    /// Every map onto `1..=l` satisfying the zone axioms, by brute force.
    fn brute_zone_functions(up: &PlanarTree, down: &PlanarTree) -> BTreeSet<ZonePair> {
        let pu = up.vertex_count();
        let total = pu + down.vertex_count();
        let mut out = BTreeSet::new();
        if total == 0 {
            out.insert(ZonePair::new(up.clone(), down.clone(), vec![], vec![]).unwrap());
            return out;
        }
        for l in 1..=total {
            let mut assign = vec![1usize; total];
            loop {
                if let Ok(z) = ZonePair::new(
                    up.clone(),
                    down.clone(),
                    assign[..pu].to_vec(),
                    assign[pu..].to_vec(),
                ) {
                    out.insert(z);
                }
                let mut k = 0;
                while k < total && assign[k] == l {
                    assign[k] = 1;
                    k += 1;
                }
                if k == total {
                    break;
                }
                assign[k] += 1;
            }
        }
        out
    }

    #[test]
    fn eight_zone_example_type_and_closures() {
        let z = eight_zone_example();
        assert_eq!(zone_type(&z), "DBDUBBUB");
        let expect: [&[usize]; 8] = [
            &[1, 2],
            &[2],
            &[2, 3],
            &[4, 5],
            &[5],
            &[6],
            &[6, 7, 8],
            &[8],
        ];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(closure(&z, i + 1).unwrap(), e.iter().copied().collect());
        }
        assert!(closure(&z, 9).is_err());
        assert!(relative_heights_check(&pi_section(&z)));
        assert_eq!(project(&pi_section(&z)), z);
        assert_eq!(ZonePair::from_json(&z.to_json()).unwrap(), z);
    }

    #[test]
    fn small_types() {
        assert_eq!(zone_type(&zp("(* *)1 ~ (* *)1")), "B");
        assert_eq!(zone_type(&zp("((* *)1 *)1 ~ *")), "U");
        assert!(matches!(
            ZonePair::parse("((* *)1 *)1 ~ (* *)1"),
            Err(Error::InvalidZones(_))
        ));
        assert!(matches!(
            ZonePair::parse("((* *)2 *)1 ~ *"),
            Err(Error::InvalidZones(_))
        ));
        assert!(ZonePair::parse("((* *)1 *)2 ~ *").is_err());
        let j = zp("((* *)2 *)1 ~ (* *)2").to_json();
        assert_eq!(j["zones"], json!([["u:0"], ["u:0.0", "d:0"]]));
        assert_eq!(j["type"], "UB");
    }

    #[test]
    fn projection_matches_brute_force_zone_functions() {
        for total in 2..=6 {
            for m in 1..total {
                let n = total - m;
                for u in enumerate_trees(m, Orientation::Up).unwrap() {
                    for d in enumerate_trees(n, Orientation::Down).unwrap() {
                        let image: BTreeSet<ZonePair> =
                            zone_functions(&u, &d).into_iter().collect();
                        assert_eq!(image, brute_zone_functions(&u, &d), "{u} ~ {d}");
                    }
                }
            }
        }
    }

    #[test]
    fn single_output_collapses_levels() {
        let zs = enumerate_zone_pairs(4, 1).unwrap();
        assert_eq!(zs.len(), 11);
        assert!(zs.iter().all(|z| z.zone_count() == 1));
        assert_eq!(enumerate_zone_pairs(3, 2).unwrap().len(), 13);
        assert_eq!(project(&ComplementaryPair::trivial()).zone_count(), 0);
    }

    #[test]
    fn section_round_trip() {
        for total in 2..=6 {
            for m in 1..total {
                for z in enumerate_zone_pairs(m, total - m).unwrap() {
                    let x = pi_section(&z);
                    assert_eq!(project(&x), z);
                    assert_eq!(zone_type(&project(&x)), zone_type(&z));
                }
            }
        }
        let b = zp("(* *)1 ~ (* *)1");
        assert_eq!(pi_section(&b).height(), 1);
    }

    #[test]
    fn order_properties() {
        for total in 2..=5 {
            for m in 1..total {
                let n = total - m;
                let xs = enumerate_leveled_pairs(m, n).unwrap();
                let zs: Vec<ZonePair> = xs.iter().map(project).collect();
                for i in 0..xs.len() {
                    for j in 0..xs.len() {
                        if pair_leq(&xs[i], &xs[j]).unwrap() {
                            assert!(zone_leq(&zs[i], &zs[j]).unwrap());
                        }
                    }
                }
                // constructing the poset validates antisymmetry and transitivity
                let p = biassociahedron_poset(m, n).unwrap();
                assert_eq!(p.euler().unwrap(), 1);
            }
        }
    }

    #[test]
    fn order_is_generated_by_projection() {
        // the order is the transitive closure of the projected level order
        for total in 2..=6 {
            for m in 1..total {
                let n = total - m;
                let xs = enumerate_leveled_pairs(m, n).unwrap();
                let zs = enumerate_zone_pairs(m, n).unwrap();
                let idx: Vec<usize> = xs
                    .iter()
                    .map(|x| zs.binary_search(&project(x)).unwrap())
                    .collect();
                let k = zs.len();
                let mut rel = vec![vec![false; k]; k];
                for i in 0..xs.len() {
                    for j in 0..xs.len() {
                        if pair_leq(&xs[i], &xs[j]).unwrap() {
                            rel[idx[i]][idx[j]] = true;
                        }
                    }
                }
                for c in 0..k {
                    for a in 0..k {
                        for b in 0..k {
                            if rel[a][c] && rel[c][b] {
                                rel[a][b] = true;
                            }
                        }
                    }
                }
                for a in 0..k {
                    for b in 0..k {
                        assert_eq!(
                            rel[a][b],
                            zone_leq(&zs[a], &zs[b]).unwrap(),
                            "{} {}",
                            zs[a],
                            zs[b]
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn hexagon_and_boundary_families() {
        let p = biassociahedron_poset(3, 2).unwrap();
        assert_eq!(p.fvector(), vec![6, 6, 1]);
        let top = p.index_of("(* * *)1 ~ (* *)1").unwrap();
        assert!((0..p.len()).all(|i| p.leq(i, top)));
        assert_eq!(biassociahedron_poset(1, 1).unwrap().len(), 1);
        for k in 2..=5 {
            let a = face_poset_associahedron(k).unwrap();
            assert!(biassociahedron_poset(k, 1)
                .unwrap()
                .isomorphism(&a)
                .is_some());
            assert!(biassociahedron_poset(1, k)
                .unwrap()
                .isomorphism(&a)
                .is_some());
        }
    }

    #[test]
    fn relative_heights() {
        for x in enumerate_leveled_pairs(3, 2).unwrap() {
            assert!(relative_heights_check(&x));
        }
        for x in enumerate_leveled_pairs(3, 3).unwrap() {
            assert!(relative_heights_check(&x));
        }
        for x in enumerate_leveled_pairs(4, 1).unwrap() {
            assert!(relative_heights_check(&x));
        }
    }
}
