//! Isomorph-free generation of graded vi-lattices in a family.
//!
//! Lattices are built from the top down. A search node holds a stack of
//! complete levels plus a level under construction, and grows by adding one
//! element to that level at a time, in non-increasing order of the number of
//! upper covers. Finishing a level starts the next one; a single element
//! below the whole last level closes the lattice with its bottom.
//!
//! Duplicates are rejected by canonical augmentation: a child is kept only if
//! the new element is equivalent to the canonically chosen last element of
//! the child (the element with fewest upper covers and smallest canonical
//! position), and sibling augmentations are taken one per orbit of the
//! parent's automorphism group.
//!
//! Element ids inside the search run top first, so the top is `0` and every
//! element has a larger id than anything above it. Up-sets are kept as `u64`
//! masks over these ids, which caps the size at 64 elements.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use thiserror::Error;

use crate::bits::{low_mask, ones};
use crate::canon::{self, canonical_form, CanonicalForm, UnionFind};
use crate::family::Family;
use crate::lattice::LeveledLattice;

/// Largest lattice size the search supports.
pub const MAX_GENERATED_N: usize = 64;

const STATE_TAG: &str = "latcount-state v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Lattices without a neck.
    PiecesAndSpecials,
    /// Every graded vi-lattice, compositions included.
    AllViLattices,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::PiecesAndSpecials => "pieces",
            Mode::AllViLattices => "all",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "pieces" | "pieces-and-specials" | "piecesandspecials" => Ok(Mode::PiecesAndSpecials),
            "all" | "all-vi" | "allvilattices" => Ok(Mode::AllViLattices),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub family: Family,
    pub max_n: usize,
    pub mode: Mode,
    /// Meet-irreducible length bound; only valid for distributive lattices.
    pub length_bound_pruning: bool,
    /// Elements added below the top before the search is cut into states.
    pub checkpoint_depth: usize,
    /// Keep a set of canonical forms of emitted lattices and drop repeats.
    pub dedup_guard: bool,
}

impl GenConfig {
    /// Default configuration: length bound on for distributive lattices,
    /// no checkpoints, guard set on.
    pub fn new(family: Family, max_n: usize, mode: Mode) -> Self {
        GenConfig {
            family,
            max_n,
            mode,
            length_bound_pruning: family == Family::Distributive,
            checkpoint_depth: 0,
            dedup_guard: true,
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.max_n == 0 {
            return Err(GenError::InvalidConfig("max_n must be positive".into()));
        }
        if self.length_bound_pruning && self.family != Family::Distributive {
            return Err(GenError::InvalidConfig(
                "the length bound only applies to distributive lattices".into(),
            ));
        }
        if self.max_n > MAX_GENERATED_N {
            return Err(GenError::BudgetExceeded(format!(
                "max_n = {} exceeds the supported {MAX_GENERATED_N}",
                self.max_n
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed search state: {0}")]
    MalformedState(String),
    #[error("search state was saved for a different configuration: {0}")]
    StateMismatch(String),
    #[error("worker outputs overlap: {0}")]
    DuplicateAcrossWorkers(String),
}

/// Counts reported by a generation run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GenSummary {
    /// Emitted lattices by size; index 0 is unused.
    pub per_n: Vec<u64>,
    /// Search nodes visited.
    pub nodes: u64,
    /// Lattices dropped by the guard set. Nonzero means the augmentation
    /// test let a duplicate through.
    pub duplicates_suppressed: u64,
}

impl GenSummary {
    fn with_len(max_n: usize) -> Self {
        GenSummary {
            per_n: vec![0; max_n + 1],
            ..Default::default()
        }
    }

    pub fn total(&self) -> u64 {
        self.per_n.iter().sum()
    }

    pub fn merge(&mut self, other: &GenSummary) {
        if self.per_n.len() < other.per_n.len() {
            self.per_n.resize(other.per_n.len(), 0);
        }
        for (a, b) in self.per_n.iter_mut().zip(&other.per_n) {
            *a += b;
        }
        self.nodes += other.nodes;
        self.duplicates_suppressed += other.duplicates_suppressed;
    }
}

/// Upper bound on the final length of a lattice whose lowest level so far
/// sits at depth `current_length` below the top, with `elements_used` of the
/// `max_n` elements placed. Every level strictly between that level and the
/// bottom needs at least two elements.
pub fn length_bound(current_length: usize, elements_used: usize, max_n: usize) -> usize {
    let rem = max_n.saturating_sub(elements_used);
    if rem == 0 {
        current_length
    } else {
        current_length + 1 + (rem - 1) / 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    /// Complete levels, top first.
    sizes: Vec<usize>,
    /// Elements in complete levels.
    done: usize,
    /// Covers of each element in the level above, relative to that level.
    up: Vec<u64>,
    /// Up-set of each element (itself included) over global ids.
    upset: Vec<u64>,
    meet_irr: usize,
    bottom_only: bool,
}

impl Node {
    fn root() -> Node {
        Node {
            sizes: vec![1],
            done: 1,
            up: vec![0],
            upset: vec![1],
            meet_irr: 0,
            bottom_only: false,
        }
    }

    fn used(&self) -> usize {
        self.up.len()
    }

    fn c_len(&self) -> usize {
        self.used() - self.done
    }

    fn b_start(&self) -> usize {
        self.done - self.sizes.last().unwrap()
    }

    fn b_width(&self) -> usize {
        *self.sizes.last().unwrap()
    }

    fn structure_sizes(&self) -> Vec<usize> {
        let mut s = self.sizes.clone();
        if self.c_len() > 0 {
            s.push(self.c_len());
        }
        s
    }

    fn is_root(&self) -> bool {
        self.used() == 1
    }

    fn with_element(&self, s: u64) -> Node {
        let mut child = self.clone();
        let id = self.used();
        let bs = self.b_start();
        let mut upset = 1u64 << id;
        for i in ones(s) {
            upset |= self.upset[bs + i];
        }
        child.up.push(s);
        child.upset.push(upset);
        if s.count_ones() == 1 {
            child.meet_irr += 1;
        }
        child
    }

    fn closed(&self, mode: Mode) -> Node {
        let mut z = self.clone();
        let c = self.c_len();
        z.sizes.push(c);
        z.done = self.used();
        z.bottom_only = mode == Mode::PiecesAndSpecials && c == 2 && z.sizes.len() > 2;
        z
    }

    /// The lattice whose bottom is the single element of the current level.
    fn lattice(&self) -> LeveledLattice {
        let mut sizes = vec![1];
        sizes.extend(self.sizes.iter().rev());
        let mut up = vec![self.up[self.done]];
        let mut end = self.done;
        for &w in self.sizes.iter().rev() {
            up.extend_from_slice(&self.up[end - w..end]);
            end -= w;
        }
        LeveledLattice::new(sizes, up).expect("search nodes are well formed")
    }

    fn emits(&self) -> bool {
        self.c_len() == 1 && self.up[self.done] == low_mask(self.b_width())
    }
}

/// Per-node data about the last complete level `B`.
struct Frame {
    bw: usize,
    full: u64,
    /// Elements of `B` sharing an upper cover, per element of `B`.
    adj: Vec<u64>,
    /// For each element of the level above `B`, the elements of `B` under it.
    lowers: Vec<u64>,
}

impl Frame {
    fn new(node: &Node) -> Frame {
        let bw = node.b_width();
        let bs = node.b_start();
        let mut adj = vec![0u64; bw];
        for i in 0..bw {
            for j in 0..bw {
                if i != j && node.up[bs + i] & node.up[bs + j] != 0 {
                    adj[i] |= 1 << j;
                }
            }
        }
        let mut lowers = Vec::new();
        if node.sizes.len() >= 2 {
            lowers = vec![0u64; node.sizes[node.sizes.len() - 2]];
            for i in 0..bw {
                for a in ones(node.up[bs + i]) {
                    lowers[a] |= 1 << i;
                }
            }
        }
        Frame {
            bw,
            full: low_mask(bw),
            adj,
            lowers,
        }
    }

    fn covered(&self, node: &Node) -> u64 {
        node.up[node.done..].iter().fold(0, |a, &s| a | s)
    }

    /// Adjacent pairs of `B` with no common lower cover yet, per element.
    fn open_pairs(&self, node: &Node) -> Vec<u64> {
        let mut cov = vec![0u64; self.bw];
        for &s in &node.up[node.done..] {
            for b in ones(s) {
                cov[b] |= s;
            }
        }
        (0..self.bw).map(|b| self.adj[b] & !cov[b]).collect()
    }
}

fn cliques(adj: &[u64], cand: u64, cur: u64, depth: usize, dmax: usize, out: &mut Vec<u64>) {
    for b in ones(cand) {
        let next = cur | 1 << b;
        out.push(next);
        if depth + 1 < dmax {
            let higher = !low_mask(b + 1);
            cliques(adj, cand & adj[b] & higher, next, depth + 1, dmax, out);
        }
    }
}

/// A saved subtree of the search (or one lattice found before the cut).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchState {
    family: Family,
    mode: Mode,
    max_n: usize,
    length_bound_pruning: bool,
    kind: StateKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum StateKind {
    Node(Node),
    Complete(LeveledLattice),
}

impl SearchState {
    pub fn is_complete(&self) -> bool {
        matches!(self.kind, StateKind::Complete(_))
    }

    /// Elements placed in this state.
    pub fn elements_used(&self) -> usize {
        match &self.kind {
            StateKind::Node(n) => n.used(),
            StateKind::Complete(l) => l.n(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(STATE_TAG);
        s.push('\n');
        s.push_str(&format!("family {}\n", self.family));
        s.push_str(&format!("mode {}\n", self.mode));
        s.push_str(&format!("max_n {}\n", self.max_n));
        s.push_str(&format!(
            "length_bound {}\n",
            u8::from(self.length_bound_pruning)
        ));
        let join = |v: &[usize]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let hexes = |v: &[u64]| {
            v.iter()
                .map(|x| format!("{x:x}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        match &self.kind {
            StateKind::Node(n) => {
                s.push_str("kind node\n");
                s.push_str(&format!("levels {}\n", join(&n.sizes)));
                s.push_str(&format!("covers {}\n", hexes(&n.up)));
                s.push_str(&format!("meet_irreducible {}\n", n.meet_irr));
                s.push_str(&format!("bottom_only {}\n", u8::from(n.bottom_only)));
            }
            StateKind::Complete(l) => {
                s.push_str("kind complete\n");
                s.push_str(&format!("levels {}\n", join(l.level_sizes())));
                s.push_str(&format!("covers {}\n", hexes(l.up_masks())));
            }
        }
        s.push_str("end\n");
        s
    }

    pub fn parse(text: &str) -> Result<SearchState, GenError> {
        let bad = |m: &str| GenError::MalformedState(m.to_string());
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        if lines.next() != Some(STATE_TAG) {
            return Err(bad("missing or unknown format tag"));
        }
        let mut fields: HashMap<&str, &str> = HashMap::new();
        let mut ended = false;
        for line in lines {
            if line == "end" {
                ended = true;
                break;
            }
            let (k, v) = line.split_once(' ').unwrap_or((line, ""));
            if fields.insert(k, v).is_some() {
                return Err(bad(&format!("repeated field `{k}`")));
            }
        }
        if !ended {
            return Err(bad("truncated state"));
        }
        let get = |k: &str| {
            fields
                .get(k)
                .copied()
                .ok_or_else(|| bad(&format!("missing `{k}`")))
        };
        let num = |k: &str| -> Result<usize, GenError> {
            get(k)?
                .parse()
                .map_err(|_| bad(&format!("bad number in `{k}`")))
        };
        let flag = |k: &str| -> Result<bool, GenError> {
            match get(k)? {
                "0" => Ok(false),
                "1" => Ok(true),
                _ => Err(bad(&format!("bad flag in `{k}`"))),
            }
        };
        let family: Family = get("family")?.parse().map_err(|e: String| bad(&e))?;
        let mode: Mode = get("mode")?.parse().map_err(|e: String| bad(&e))?;
        let max_n = num("max_n")?;
        let length_bound_pruning = flag("length_bound")?;
        let sizes: Vec<usize> = get("levels")?
            .split_whitespace()
            .map(|x| x.parse().map_err(|_| bad("bad level size")))
            .collect::<Result<_, _>>()?;
        let up: Vec<u64> = get("covers")?
            .split_whitespace()
            .map(|x| u64::from_str_radix(x, 16).map_err(|_| bad("bad cover row")))
            .collect::<Result<_, _>>()?;
        let kind = match get("kind")? {
            "complete" => StateKind::Complete(
                LeveledLattice::new(sizes, up).map_err(|e| bad(&e.to_string()))?,
            ),
            "node" => StateKind::Node(rebuild_node(
                sizes,
                up,
                num("meet_irreducible")?,
                flag("bottom_only")?,
            )?),
            other => return Err(bad(&format!("unknown kind `{other}`"))),
        };
        Ok(SearchState {
            family,
            mode,
            max_n,
            length_bound_pruning,
            kind,
        })
    }
}

fn rebuild_node(
    sizes: Vec<usize>,
    up: Vec<u64>,
    meet_irr: usize,
    bottom_only: bool,
) -> Result<Node, GenError> {
    let bad = |m: &str| GenError::MalformedState(m.to_string());
    if sizes.first() != Some(&1) || sizes.contains(&0) {
        return Err(bad("level sizes must start with the top"));
    }
    let done: usize = sizes.iter().sum();
    if up.len() < done || up.len() > MAX_GENERATED_N {
        return Err(bad("cover rows do not match the level sizes"));
    }
    let mut node = Node {
        sizes: vec![1],
        done: 1,
        up: vec![0],
        upset: vec![1],
        meet_irr: 0,
        bottom_only: false,
    };
    if up[0] != 0 {
        return Err(bad("the top has no upper covers"));
    }
    let mut level = 1;
    for &s in &up[1..] {
        if level < sizes.len() && node.c_len() == sizes[level] {
            node = node.closed(Mode::AllViLattices);
            level += 1;
        }
        if s == 0 || s & !low_mask(node.b_width()) != 0 {
            return Err(bad("cover row outside the level above"));
        }
        node = node.with_element(s);
    }
    if level < sizes.len() && node.c_len() == sizes[level] {
        node = node.closed(Mode::AllViLattices);
        level += 1;
    }
    if level != sizes.len() {
        return Err(bad("cover rows do not match the level sizes"));
    }
    if node.meet_irr != meet_irr {
        return Err(bad("meet-irreducible count does not match the covers"));
    }
    node.bottom_only = bottom_only;
    Ok(node)
}

struct Cut {
    depth: usize,
    states: Vec<SearchState>,
}

struct Search<'a> {
    cfg: &'a GenConfig,
    sink: &'a mut dyn FnMut(&LeveledLattice),
    summary: GenSummary,
    guard: HashSet<CanonicalForm>,
    cut: Option<Cut>,
}

impl Search<'_> {
    fn emit(&mut self, l: LeveledLattice) {
        if let Some(cut) = &mut self.cut {
            cut.states.push(SearchState {
                family: self.cfg.family,
                mode: self.cfg.mode,
                max_n: self.cfg.max_n,
                length_bound_pruning: self.cfg.length_bound_pruning,
                kind: StateKind::Complete(l),
            });
            return;
        }
        if self.cfg.dedup_guard && !self.guard.insert(canonical_form(&l)) {
            self.summary.duplicates_suppressed += 1;
            return;
        }
        self.summary.per_n[l.n()] += 1;
        (self.sink)(&l);
    }

    fn visit(&mut self, node: Node, gens: Option<Vec<Vec<usize>>>) {
        if let Some(cut) = &mut self.cut {
            if node.used() > cut.depth {
                cut.states.push(SearchState {
                    family: self.cfg.family,
                    mode: self.cfg.mode,
                    max_n: self.cfg.max_n,
                    length_bound_pruning: self.cfg.length_bound_pruning,
                    kind: StateKind::Node(node),
                });
                return;
            }
        }
        self.summary.nodes += 1;
        if node.is_root() && node.c_len() == 0 {
            self.emit(LeveledLattice::chain(1));
        }
        if node.emits() {
            self.emit(node.lattice());
        }
        self.expand(node, gens);
    }

    fn expand(&mut self, node: Node, gens: Option<Vec<Vec<usize>>>) {
        let max_n = self.cfg.max_n;
        let used = node.used();
        if used >= max_n {
            return;
        }
        let modular = self.cfg.family != Family::Semimodular;
        let frame = Frame::new(&node);
        let c_len = node.c_len();
        let gens =
            gens.unwrap_or_else(|| canon::label(&node.structure_sizes(), &node.up).generators);

        if c_len >= 2 && !node.bottom_only {
            let closable = frame.covered(&node) == frame.full
                && (!modular || frame.open_pairs(&node).iter().all(|&m| m == 0));
            if closable {
                self.visit(node.closed(self.cfg.mode), Some(gens.clone()));
            }
        }

        let dmax = if c_len == 0 {
            frame.bw
        } else {
            node.up[used - 1].count_ones() as usize
        };
        let mut cands = Vec::new();
        if node.bottom_only {
            if c_len == 0 {
                cands.push(frame.full);
            }
        } else {
            cliques(&frame.adj, frame.full, 0, 0, dmax, &mut cands);
        }
        let bs = node.b_start();
        let last = used + 1 == max_n;
        cands.retain(|&s| {
            if last && !(c_len == 0 && s == frame.full) {
                return false;
            }
            if node.bottom_only && !is_clique(&frame.adj, s) {
                return false;
            }
            if self.cfg.family == Family::Distributive
                && frame.lowers.iter().any(|&l| (l & s).count_ones() >= 3)
            {
                return false;
            }
            joins_ok(&node, s)
        });
        if cands.is_empty() {
            return;
        }

        // one candidate per orbit of Aut(node) acting on B
        let index: HashMap<u64, usize> = cands.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut uf = UnionFind::new(cands.len());
        for g in &gens {
            let moves_b = (0..frame.bw).any(|i| g[bs + i] != bs + i);
            if !moves_b {
                continue;
            }
            for (i, &s) in cands.iter().enumerate() {
                let mut img = 0u64;
                for b in ones(s) {
                    img |= 1 << (g[bs + b] - bs);
                }
                if let Some(&j) = index.get(&img) {
                    uf.union(i, j);
                }
            }
        }

        for (i, &s) in cands.iter().enumerate() {
            if uf.find(i) != i {
                continue;
            }
            let child = node.with_element(s);
            let Some(child_gens) = self.accept(&child) else {
                continue;
            };
            if self.prune(&child, &frame) {
                if child.emits() {
                    self.summary.nodes += 1;
                    self.emit(child.lattice());
                }
                continue;
            }
            self.visit(child, child_gens);
        }
    }

    /// Canonical augmentation test. Returns the child's automorphism
    /// generators when they were computed along the way.
    fn accept(&self, child: &Node) -> Option<Option<Vec<Vec<usize>>>> {
        let x = child.used() - 1;
        let d = child.up[x].count_ones();
        let ties = child.up[child.done..]
            .iter()
            .filter(|s| s.count_ones() == d)
            .count();
        if ties == 1 {
            return Some(None);
        }
        let lab = canon::label(&child.structure_sizes(), &child.up);
        let m = (child.done..child.used())
            .filter(|&v| child.up[v].count_ones() == d)
            .min_by_key(|&v| lab.inv[v])
            .unwrap();
        if m != x {
            let mut uf = UnionFind::new(child.used());
            for g in &lab.generators {
                for (v, &w) in g.iter().enumerate() {
                    uf.union(v, w);
                }
            }
            if !uf.same(m, x) {
                return None;
            }
        }
        Some(Some(lab.generators))
    }

    /// Whether the current level of `child` cannot be completed. A child
    /// that already is a lattice is still emitted by the caller.
    fn prune(&self, child: &Node, frame: &Frame) -> bool {
        let x = child.used() - 1;
        let d = child.up[x].count_ones() as usize;
        let avail = self.cfg.max_n.saturating_sub(child.used() + 1);
        let uncovered = frame.bw - frame.covered(child).count_ones() as usize;
        if uncovered > avail * d {
            return true;
        }
        if self.cfg.family != Family::Semimodular {
            let open: usize = frame
                .open_pairs(child)
                .iter()
                .map(|m| m.count_ones() as usize)
                .sum::<usize>()
                / 2;
            if open > avail * (d * (d - 1) / 2) {
                return true;
            }
        }
        if self.cfg.length_bound_pruning {
            let t = child.sizes.len();
            let r = length_bound(t, child.used(), self.cfg.max_n);
            if child.meet_irr > r || (d == 1 && child.meet_irr + uncovered > r) {
                return true;
            }
        }
        false
    }
}

fn is_clique(adj: &[u64], s: u64) -> bool {
    ones(s).all(|b| s & !(1 << b) & !adj[b] == 0)
}

/// Every existing element keeps a least common upper bound with the new
/// element whose covers are `s`.
fn joins_ok(node: &Node, s: u64) -> bool {
    let bs = node.b_start();
    let id = node.used();
    let mut upx = 1u64 << id;
    for i in ones(s) {
        upx |= node.upset[bs + i];
    }
    for z in 0..id {
        if upx >> z & 1 == 1 {
            continue;
        }
        let u = upx & node.upset[z];
        let e = 63 - u.leading_zeros() as usize;
        if node.upset[e] != u {
            return false;
        }
    }
    true
}

/// Runs the full search, calling `sink` once per isomorphism class.
pub fn generate<F: FnMut(&LeveledLattice)>(
    config: &GenConfig,
    mut sink: F,
) -> Result<GenSummary, GenError> {
    config.validate()?;
    let mut search = Search {
        cfg: config,
        sink: &mut sink,
        summary: GenSummary::with_len(config.max_n),
        guard: HashSet::new(),
        cut: None,
    };
    search.visit(Node::root(), None);
    Ok(search.summary)
}

/// Cuts the search after `config.checkpoint_depth` elements have been added
/// below the top. Lattices completed before the cut come back as complete
/// states.
pub fn split_checkpoints(config: &GenConfig) -> Result<Vec<SearchState>, GenError> {
    config.validate()?;
    let mut sink = |_: &LeveledLattice| {};
    let mut search = Search {
        cfg: config,
        sink: &mut sink,
        summary: GenSummary::with_len(config.max_n),
        guard: HashSet::new(),
        cut: Some(Cut {
            depth: config.checkpoint_depth,
            states: Vec::new(),
        }),
    };
    search.visit(Node::root(), None);
    Ok(search.cut.take().unwrap().states)
}

/// Exhausts one saved state. The guard set is local to the call.
pub fn resume<F: FnMut(&LeveledLattice)>(
    config: &GenConfig,
    state: &SearchState,
    mut sink: F,
) -> Result<GenSummary, GenError> {
    config.validate()?;
    if state.family != config.family
        || state.mode != config.mode
        || state.max_n != config.max_n
        || state.length_bound_pruning != config.length_bound_pruning
    {
        return Err(GenError::StateMismatch(format!(
            "state is {} {} max_n={} length_bound={}",
            state.family,
            state.mode,
            state.max_n,
            u8::from(state.length_bound_pruning)
        )));
    }
    let mut search = Search {
        cfg: config,
        sink: &mut sink,
        summary: GenSummary::with_len(config.max_n),
        guard: HashSet::new(),
        cut: None,
    };
    match &state.kind {
        StateKind::Complete(l) => search.emit(l.clone()),
        StateKind::Node(n) => search.visit(n.clone(), None),
    }
    Ok(search.summary)
}

/// Splits the search at `config.checkpoint_depth` and exhausts the states on
/// `workers` threads. Each worker maps its lattices through `f`; the results
/// come back grouped by state, in state order.
pub fn generate_parallel<T, F>(
    config: &GenConfig,
    workers: usize,
    f: F,
) -> Result<(Vec<T>, GenSummary), GenError>
where
    T: Send,
    F: Fn(&LeveledLattice) -> T + Sync,
{
    let states = split_checkpoints(config)?;
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<(Vec<T>, GenSummary)>>> =
        states.iter().map(|_| Mutex::new(None)).collect();
    let failure: Mutex<Option<GenError>> = Mutex::new(None);
    std::thread::scope(|scope| {
        for _ in 0..workers.max(1) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= states.len() {
                    break;
                }
                let mut out = Vec::new();
                match resume(config, &states[i], |l| out.push(f(l))) {
                    Ok(summary) => *slots[i].lock().unwrap() = Some((out, summary)),
                    Err(e) => {
                        failure.lock().unwrap().get_or_insert(e);
                        break;
                    }
                }
            });
        }
    });
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    let mut all = Vec::new();
    let mut summary = GenSummary::with_len(config.max_n);
    for slot in slots {
        let (out, s) = slot.into_inner().unwrap().expect("every state was run");
        all.extend(out);
        summary.merge(&s);
    }
    Ok((all, summary))
}
