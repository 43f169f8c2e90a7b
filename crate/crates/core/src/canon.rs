//! Canonical labeling and automorphism groups of leveled diagrams.
//!
//! The engine works on any "leveled" digraph: vertices grouped into levels
//! listed top first, each vertex carrying a bit set of its covers in the
//! previous level. Lattices are fed to it top first; the generator also
//! feeds it partially built diagrams.
//!
//! The search is the usual individualize-and-refine scheme. The initial
//! partition is the levels, refinement counts neighbours in adjacent cells,
//! and leaves are compared by their refinement trace and then by their
//! relabeled cover rows. Automorphisms found on the way prune the tree.

use std::cmp::Ordering;
use std::collections::VecDeque;

use num_bigint::BigUint;
use num_traits::One;

use crate::bits::ones;
use crate::lattice::LeveledLattice;

/// Bytes identifying the isomorphism class of a lattice: the bottom-first
/// level sizes followed by the canonically relabeled upward cover rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }
}

/// Generators of the automorphism group, as permutations of the elements
/// (`perm[e]` is the image of `e`), together with the group order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutGenerators {
    n: usize,
    perms: Vec<Vec<usize>>,
    order: BigUint,
}

impl AutGenerators {
    pub fn len(&self) -> usize {
        self.perms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perms.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vec<usize>> {
        self.perms.iter()
    }

    pub fn as_slice(&self) -> &[Vec<usize>] {
        &self.perms
    }

    /// Order of the generated group.
    pub fn group_order(&self) -> &BigUint {
        &self.order
    }

    /// Orbit representative (smallest element) of every element.
    pub fn orbits(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.n);
        for p in &self.perms {
            for (v, &w) in p.iter().enumerate() {
                uf.union(v, w);
            }
        }
        let mut rep = vec![usize::MAX; self.n];
        let mut out = vec![0; self.n];
        for v in 0..self.n {
            let r = uf.find(v);
            if rep[r] == usize::MAX {
                rep[r] = v;
            }
            out[v] = rep[r];
        }
        out
    }
}

impl<'a> IntoIterator for &'a AutGenerators {
    type Item = &'a Vec<usize>;
    type IntoIter = std::slice::Iter<'a, Vec<usize>>;

    fn into_iter(self) -> Self::IntoIter {
        self.perms.iter()
    }
}

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root so representatives are stable
            if ra < rb {
                self.parent[rb] = ra;
            } else {
                self.parent[ra] = rb;
            }
        }
    }

    pub(crate) fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

/// Result of a canonical labeling search on a top-first leveled diagram.
#[derive(Debug, Clone)]
pub(crate) struct Labeling {
    /// Vertex -> canonical position.
    pub(crate) inv: Vec<usize>,
    pub(crate) generators: Vec<Vec<usize>>,
    pub(crate) order: BigUint,
}

struct Graph {
    n: usize,
    level_of: Vec<usize>,
    lstart: Vec<usize>,
    up: Vec<u64>,
    down: Vec<u64>,
}

#[derive(Clone)]
struct Part {
    lab: Vec<usize>,
    inv: Vec<usize>,
    start: Vec<usize>,
    end: Vec<usize>,
    cells: usize,
}

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    let mut z = h ^ x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Graph {
    fn new(sizes: &[usize], up: &[u64]) -> Graph {
        let n: usize = sizes.iter().sum();
        assert_eq!(up.len(), n);
        let mut lstart = vec![0];
        let mut level_of = Vec::with_capacity(n);
        for (t, &w) in sizes.iter().enumerate() {
            lstart.push(lstart[t] + w);
            level_of.extend(std::iter::repeat_n(t, w));
        }
        let mut down = vec![0u64; n];
        for v in 0..n {
            let t = level_of[v];
            if t == 0 {
                continue;
            }
            let rel = v - lstart[t];
            for b in ones(up[v]) {
                down[lstart[t - 1] + b] |= 1 << rel;
            }
        }
        Graph {
            n,
            level_of,
            lstart,
            up: up.to_vec(),
            down,
        }
    }

    fn levels(&self) -> usize {
        self.lstart.len() - 1
    }

    fn unit_partition(&self) -> Part {
        let n = self.n;
        let mut start = vec![0; n];
        let mut end = vec![0; n];
        for t in 0..self.levels() {
            let (s, e) = (self.lstart[t], self.lstart[t + 1]);
            for p in s..e {
                start[p] = s;
            }
            if s < e {
                end[s] = e;
            }
        }
        Part {
            lab: (0..n).collect(),
            inv: (0..n).collect(),
            start,
            end,
            cells: (0..self.levels())
                .filter(|&t| self.lstart[t] < self.lstart[t + 1])
                .count(),
        }
    }

    /// Refines `part` to an equitable partition, starting from the given
    /// splitter cells. Returns a hash of the refinement trace.
    fn refine(&self, part: &mut Part, splitters: &[usize]) -> u64 {
        let mut queued = vec![false; self.n];
        let mut queue = VecDeque::new();
        for &s in splitters {
            if !queued[s] {
                queued[s] = true;
                queue.push_back(s);
            }
        }
        let mut trace = 0u64;
        let mut scratch: Vec<(u32, usize)> = Vec::new();
        while let Some(s) = queue.pop_front() {
            queued[s] = false;
            let e = part.end[s];
            let t = self.level_of[part.lab[s]];
            let base = self.lstart[t];
            let mut w = 0u64;
            for p in s..e {
                w |= 1 << (part.lab[p] - base);
            }
            trace = mix(trace, s as u64);
            for (tn, toward_up) in [(t.wrapping_sub(1), false), (t + 1, true)] {
                if tn >= self.levels() {
                    continue;
                }
                let mut p = self.lstart[tn];
                let stop = self.lstart[tn + 1];
                while p < stop {
                    let q = part.end[p];
                    scratch.clear();
                    for &v in &part.lab[p..q] {
                        let m = if toward_up { self.up[v] } else { self.down[v] };
                        scratch.push(((m & w).count_ones(), v));
                    }
                    let c0 = scratch[0].0;
                    if scratch.iter().all(|x| x.0 == c0) {
                        trace = mix(trace, (p as u64) << 8 | c0 as u64);
                        p = q;
                        continue;
                    }
                    scratch.sort_by_key(|x| x.0);
                    let mut f = p;
                    for (i, &(c, v)) in scratch.iter().enumerate() {
                        let pos = p + i;
                        part.lab[pos] = v;
                        part.inv[v] = pos;
                        if i > 0 && c != scratch[i - 1].0 {
                            part.end[f] = pos;
                            trace = mix(
                                trace,
                                (f as u64) << 16
                                    | ((pos - f) as u64) << 8
                                    | scratch[i - 1].0 as u64,
                            );
                            f = pos;
                            part.cells += 1;
                            if !queued[f] {
                                queued[f] = true;
                                queue.push_back(f);
                            }
                        }
                        part.start[pos] = f;
                    }
                    part.end[f] = q;
                    trace = mix(
                        trace,
                        (f as u64) << 16 | ((q - f) as u64) << 8 | scratch.last().unwrap().0 as u64,
                    );
                    if !queued[p] {
                        queued[p] = true;
                        queue.push_back(p);
                    }
                    p = q;
                }
            }
        }
        mix(trace, part.cells as u64)
    }

    fn individualize(&self, part: &mut Part, v: usize) -> u64 {
        let pv = part.inv[v];
        let s = part.start[pv];
        let e = part.end[s];
        let u = part.lab[s];
        part.lab.swap(s, pv);
        part.inv[v] = s;
        part.inv[u] = pv;
        part.end[s] = s + 1;
        for p in s + 1..e {
            part.start[p] = s + 1;
        }
        part.end[s + 1] = e;
        part.cells += 1;
        self.refine(part, &[s])
    }

    fn target_cell(&self, part: &Part) -> (usize, usize) {
        let mut best = (0, usize::MAX);
        let mut p = 0;
        while p < self.n {
            let e = part.end[p];
            let size = e - p;
            if size > 1 && size < best.1 {
                best = (p, size);
            }
            p = e;
        }
        (best.0, best.0 + best.1)
    }

    fn certificate(&self, part: &Part) -> Vec<u64> {
        let mut rows = Vec::with_capacity(self.n);
        for &v in &part.lab {
            let t = self.level_of[v];
            if t == 0 {
                rows.push(0);
                continue;
            }
            let b = self.lstart[t - 1];
            let mut row = 0u64;
            for i in ones(self.up[v]) {
                row |= 1 << (part.inv[b + i] - b);
            }
            rows.push(row);
        }
        rows
    }
}

struct Leaf {
    invs: Vec<u64>,
    cert: Vec<u64>,
    lab: Vec<usize>,
    seq: Vec<usize>,
}

struct Search<'g> {
    g: &'g Graph,
    first: Option<Leaf>,
    best: Option<Leaf>,
    gens: Vec<Vec<usize>>,
    uf: UnionFind,
    order: BigUint,
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

impl Search<'_> {
    fn record_automorphism(&mut self, from: &[usize], to: &[usize]) {
        let mut perm = vec![0; self.g.n];
        for (&a, &b) in from.iter().zip(to) {
            perm[a] = b;
        }
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            return;
        }
        for (v, &w) in perm.iter().enumerate() {
            self.uf.union(v, w);
        }
        self.gens.push(perm);
    }

    fn leaf(&mut self, part: &Part, invs: &[u64], seq: &[usize]) -> Option<usize> {
        let cert = self.g.certificate(part);
        let Some(first) = &self.first else {
            let leaf = Leaf {
                invs: invs.to_vec(),
                cert,
                lab: part.lab.clone(),
                seq: seq.to_vec(),
            };
            self.best = Some(Leaf {
                invs: leaf.invs.clone(),
                cert: leaf.cert.clone(),
                lab: leaf.lab.clone(),
                seq: leaf.seq.clone(),
            });
            self.first = Some(leaf);
            return None;
        };
        if first.invs == invs && first.cert == cert {
            let from = first.lab.clone();
            let c = common_prefix(seq, &first.seq);
            self.record_automorphism(&from, &part.lab);
            return Some(c);
        }
        let best = self.best.as_ref().unwrap();
        match (invs, &cert[..]).cmp(&(&best.invs[..], &best.cert[..])) {
            Ordering::Equal => {
                let from = best.lab.clone();
                let c = common_prefix(seq, &best.seq);
                self.record_automorphism(&from, &part.lab);
                Some(c)
            }
            Ordering::Greater => {
                self.best = Some(Leaf {
                    invs: invs.to_vec(),
                    cert,
                    lab: part.lab.clone(),
                    seq: seq.to_vec(),
                });
                None
            }
            Ordering::Less => None,
        }
    }

    fn node(
        &mut self,
        part: Part,
        invs: &mut Vec<u64>,
        seq: &mut Vec<usize>,
        on_first: bool,
    ) -> Option<usize> {
        let d = seq.len();
        if let (Some(first), Some(best)) = (&self.first, &self.best) {
            let k = (d + 1).min(first.invs.len());
            let kb = (d + 1).min(best.invs.len());
            if invs[..k] != first.invs[..k] && invs[..kb] < best.invs[..kb] {
                return None;
            }
        }
        if part.cells == self.g.n {
            return self.leaf(&part, invs, seq);
        }
        let (s, e) = self.g.target_cell(&part);
        let mut cands = part.lab[s..e].to_vec();
        cands.sort_unstable();
        let mut explored: Vec<usize> = Vec::new();
        for (i, &w) in cands.iter().enumerate() {
            if on_first && explored.iter().any(|&x| self.uf.same(x, w)) {
                continue;
            }
            let mut child = part.clone();
            let tr = self.g.individualize(&mut child, w);
            invs.push(tr);
            seq.push(w);
            let r = self.node(child, invs, seq, on_first && i == 0);
            invs.pop();
            seq.pop();
            explored.push(w);
            if let Some(c) = r {
                if c < d {
                    return Some(c);
                }
            }
        }
        if on_first {
            let v = cands[0];
            let size = (0..self.g.n).filter(|&u| self.uf.same(u, v)).count();
            self.order *= BigUint::from(size);
        }
        None
    }
}

/// Canonically labels a top-first leveled diagram given by its level sizes
/// and, per vertex, the bit set of covers in the previous level.
pub(crate) fn label(sizes: &[usize], up: &[u64]) -> Labeling {
    let g = Graph::new(sizes, up);
    let mut part = g.unit_partition();
    let splitters: Vec<usize> = (0..g.levels())
        .filter(|&t| g.lstart[t] < g.lstart[t + 1])
        .map(|t| g.lstart[t])
        .collect();
    let root = g.refine(&mut part, &splitters);
    let mut search = Search {
        g: &g,
        first: None,
        best: None,
        gens: Vec::new(),
        uf: UnionFind::new(g.n),
        order: BigUint::one(),
    };
    let mut invs = vec![root];
    let mut seq = Vec::new();
    search.node(part, &mut invs, &mut seq, true);
    let best = search
        .best
        .take()
        .expect("search reaches at least one leaf");
    let mut inv = vec![0; g.n];
    for (p, &v) in best.lab.iter().enumerate() {
        inv[v] = p;
    }
    Labeling {
        inv,
        generators: search.gens,
        order: search.order,
    }
}

/// Top-first view of a lattice: sizes, cover rows, and the map from
/// top-first vertex to lattice element.
fn top_first(l: &LeveledLattice) -> (Vec<usize>, Vec<u64>, Vec<usize>) {
    let r = l.rank();
    let mut sizes = Vec::with_capacity(r + 1);
    let mut up = Vec::with_capacity(l.n());
    let mut elem = Vec::with_capacity(l.n());
    for t in (0..=r).rev() {
        sizes.push(l.level_sizes()[t]);
        for e in l.level(t) {
            up.push(l.up_mask(e));
            elem.push(e);
        }
    }
    (sizes, up, elem)
}

struct LatticeLabel {
    /// Lattice element -> canonical element number.
    perm: Vec<usize>,
    gens: Vec<Vec<usize>>,
    order: BigUint,
}

fn lattice_label(l: &LeveledLattice) -> LatticeLabel {
    let (sizes, up, elem) = top_first(l);
    let res = label(&sizes, &up);
    let mut perm = vec![0; l.n()];
    for (v, &e) in elem.iter().enumerate() {
        let t = l.level_of(e);
        let tf_start = l.n() - l.level_start(t + 1);
        perm[e] = l.level_start(t) + (res.inv[v] - tf_start);
    }
    let gens = res
        .generators
        .iter()
        .map(|g| {
            let mut p = vec![0; l.n()];
            for (v, &w) in g.iter().enumerate() {
                p[elem[v]] = elem[w];
            }
            p
        })
        .collect();
    LatticeLabel {
        perm,
        gens,
        order: res.order,
    }
}

/// Canonical relabeling of `l`: `perm[e]` is the canonical number of `e`.
pub fn canonical_labeling(l: &LeveledLattice) -> Vec<usize> {
    lattice_label(l).perm
}

/// The canonical representative of the isomorphism class of `l`.
pub fn canonical_lattice(l: &LeveledLattice) -> LeveledLattice {
    l.permute_within_levels(&canonical_labeling(l))
}

fn form_of(c: &LeveledLattice) -> CanonicalForm {
    let sizes = c.level_sizes();
    let mut bytes = Vec::with_capacity(1 + sizes.len() + c.n() * 2);
    bytes.push(sizes.len() as u8);
    bytes.extend(sizes.iter().map(|&s| s as u8));
    for t in 0..c.rank() {
        let w = sizes[t + 1].div_ceil(8);
        for e in c.level(t) {
            bytes.extend_from_slice(&c.up_mask(e).to_le_bytes()[..w]);
        }
    }
    CanonicalForm(bytes)
}

pub fn canonical_form(l: &LeveledLattice) -> CanonicalForm {
    form_of(&canonical_lattice(l))
}

pub fn automorphism_generators(l: &LeveledLattice) -> AutGenerators {
    let res = lattice_label(l);
    AutGenerators {
        n: l.n(),
        perms: res.gens,
        order: res.order,
    }
}

/// Canonical form and automorphism generators from a single search.
pub fn canonical_form_and_automorphisms(l: &LeveledLattice) -> (CanonicalForm, AutGenerators) {
    let res = lattice_label(l);
    let form = form_of(&l.permute_within_levels(&res.perm));
    (
        form,
        AutGenerators {
            n: l.n(),
            perms: res.gens,
            order: res.order,
        },
    )
}

pub fn are_isomorphic(a: &LeveledLattice, b: &LeveledLattice) -> bool {
    a.level_sizes() == b.level_sizes() && canonical_form(a) == canonical_form(b)
}

/// Whether `perm` maps the cover relation of `l` onto itself.
pub fn is_automorphism(l: &LeveledLattice, perm: &[usize]) -> bool {
    if perm.len() != l.n() {
        return false;
    }
    let mut seen = vec![false; l.n()];
    for (e, &p) in perm.iter().enumerate() {
        if p >= l.n() || seen[p] || l.level_of(p) != l.level_of(e) {
            return false;
        }
        seen[p] = true;
    }
    l.edges().iter().all(|&(a, b)| l.covers(perm[a], perm[b]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::MatchOrder;

    fn relabel_rev(l: &LeveledLattice) -> LeveledLattice {
        let mut perm = vec![0; l.n()];
        for t in 0..=l.rank() {
            let r = l.level(t);
            for e in r.clone() {
                perm[e] = r.start + r.end - 1 - e;
            }
        }
        l.permute_within_levels(&perm)
    }

    #[test]
    fn chain_is_rigid() {
        let g = automorphism_generators(&LeveledLattice::chain(6));
        assert!(g.is_empty());
        assert_eq!(*g.group_order(), BigUint::one());
    }

    #[test]
    fn m3_group_order_six() {
        let l = LeveledLattice::height_two(3);
        let g = automorphism_generators(&l);
        assert_eq!(*g.group_order(), BigUint::from(6u32));
        for p in &g {
            assert!(is_automorphism(&l, p));
        }
    }

    #[test]
    fn boolean_three_group_order_six() {
        let l = LeveledLattice::boolean(3);
        let g = automorphism_generators(&l);
        assert_eq!(*g.group_order(), BigUint::from(6u32));
    }

    #[test]
    fn wide_diamond_order() {
        let l = LeveledLattice::height_two(12);
        let g = automorphism_generators(&l);
        assert_eq!(*g.group_order(), BigUint::from(479_001_600u64));
    }

    #[test]
    fn relabeling_invariance() {
        let b = LeveledLattice::boolean(4);
        assert_eq!(canonical_form(&b), canonical_form(&relabel_rev(&b)));
        assert_eq!(
            *automorphism_generators(&b).group_order(),
            BigUint::from(24u32)
        );
    }

    #[test]
    fn two_sums_of_fixed_pieces_differ() {
        // bottom piece (1,3,2,1) with fixed coatoms and a middle piece with
        // fixed atoms
        let l = LeveledLattice::from_edges(
            vec![1, 3, 2, 1],
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 4),
                (2, 4),
                (3, 4),
                (3, 5),
                (4, 6),
                (5, 6),
            ],
        )
        .unwrap();
        let u = LeveledLattice::new(vec![1, 2, 2, 1], vec![0b11, 0b01, 0b11, 1, 1, 0]).unwrap();
        let s = l.vertical_2sum(&u, MatchOrder::Straight).unwrap();
        let c = l.vertical_2sum(&u, MatchOrder::Crossed).unwrap();
        assert_eq!(s.n(), 9);
        assert!(!are_isomorphic(&s, &c));
        assert!(are_isomorphic(&s, &s.dual().dual()));
    }
}
