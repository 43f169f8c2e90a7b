//! Graded bounded lattices stored level by level.
//!
//! Elements are numbered bottom-up, contiguously within a level, so the
//! bottom is element `0` and the top is element `n - 1`. Each non-top element
//! carries its upper covers as a bit set over the elements of the next level.

use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::bits::{self, ones, BitRows};

/// Widest level the representation supports; one machine word per cover set.
pub const MAX_LEVEL_WIDTH: usize = 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("invalid leveled structure: {0}")]
    InvalidStructure(String),
    #[error("level {level} has {width} elements, more than the supported {max}", max = MAX_LEVEL_WIDTH)]
    LevelTooWide { level: usize, width: usize },
    #[error("elements {0} and {1} have no unique {2}")]
    NotALattice(usize, usize, &'static str),
    #[error("vertical 2-sum precondition failed: {0}")]
    PreconditionViolation(String),
}

/// Which identification of the lower coatoms with the upper atoms a vertical
/// 2-sum uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatchOrder {
    /// First coatom to first atom, second to second.
    Straight,
    /// First coatom to second atom and vice versa.
    Crossed,
}

impl MatchOrder {
    pub const BOTH: [MatchOrder; 2] = [MatchOrder::Straight, MatchOrder::Crossed];
}

/// Level sizes, bottom level first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankSequence(pub Vec<usize>);

impl RankSequence {
    pub fn reversed(&self) -> RankSequence {
        RankSequence(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for RankSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// A graded bounded poset given by its levels and upward cover relation.
///
/// Construction checks the structural invariants (bounded, graded, every
/// element reachable from both ends through covers). The lattice property
/// itself is checked by [`LeveledLattice::meet_join_tables`]; everything the
/// generator emits satisfies it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LeveledLattice {
    sizes: Vec<usize>,
    starts: Vec<usize>,
    up: Vec<u64>,
}

impl fmt::Debug for LeveledLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LeveledLattice{} [", RankSequence(self.sizes.clone()))?;
        for e in 0..self.n() {
            if e > 0 {
                write!(f, " ")?;
            }
            write!(f, "{:x}", self.up[e])?;
        }
        write!(f, "]")
    }
}

/// Full meet and join tables of a lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeTables {
    n: usize,
    meet: Vec<usize>,
    join: Vec<usize>,
}

impl LatticeTables {
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.n + b]
    }
}

impl LeveledLattice {
    /// Builds a lattice from bottom-first level sizes and, for every element in
    /// element order, its upper covers as a bit set over the next level.
    pub fn new(level_sizes: Vec<usize>, up_covers: Vec<u64>) -> Result<Self, LatticeError> {
        if level_sizes.is_empty() {
            return Err(LatticeError::InvalidStructure("no levels".into()));
        }
        if level_sizes[0] != 1 || *level_sizes.last().unwrap() != 1 {
            return Err(LatticeError::InvalidStructure(
                "bottom and top levels must be singletons".into(),
            ));
        }
        for (t, &w) in level_sizes.iter().enumerate() {
            if w == 0 {
                return Err(LatticeError::InvalidStructure(format!(
                    "level {t} is empty"
                )));
            }
            if w > MAX_LEVEL_WIDTH {
                return Err(LatticeError::LevelTooWide { level: t, width: w });
            }
        }
        let mut starts = Vec::with_capacity(level_sizes.len() + 1);
        let mut acc = 0;
        for &w in &level_sizes {
            starts.push(acc);
            acc += w;
        }
        starts.push(acc);
        if up_covers.len() != acc {
            return Err(LatticeError::InvalidStructure(format!(
                "{} cover rows for {} elements",
                up_covers.len(),
                acc
            )));
        }
        let top_level = level_sizes.len() - 1;
        for t in 0..=top_level {
            let mut covered_from_below = 0u64;
            for e in starts[t]..starts[t + 1] {
                let m = up_covers[e];
                if t == top_level {
                    if m != 0 {
                        return Err(LatticeError::InvalidStructure(
                            "top has upper covers".into(),
                        ));
                    }
                    continue;
                }
                if m == 0 {
                    return Err(LatticeError::InvalidStructure(format!(
                        "element {e} has no upper cover"
                    )));
                }
                if m & !bits::low_mask(level_sizes[t + 1]) != 0 {
                    return Err(LatticeError::InvalidStructure(format!(
                        "element {e} covers outside the next level"
                    )));
                }
                covered_from_below |= m;
            }
            if t < top_level && covered_from_below != bits::low_mask(level_sizes[t + 1]) {
                return Err(LatticeError::InvalidStructure(format!(
                    "some element of level {} has no lower cover",
                    t + 1
                )));
            }
        }
        Ok(LeveledLattice {
            sizes: level_sizes,
            starts,
            up: up_covers,
        })
    }

    /// Builds a lattice from level sizes and a list of cover edges
    /// `(lower, upper)` in global element numbering.
    pub fn from_edges(
        level_sizes: Vec<usize>,
        edges: &[(usize, usize)],
    ) -> Result<Self, LatticeError> {
        let n: usize = level_sizes.iter().sum();
        let mut starts = vec![0];
        for &w in &level_sizes {
            starts.push(starts.last().unwrap() + w);
        }
        let level_of = |e: usize| starts.iter().rposition(|&s| s <= e).unwrap();
        let mut up = vec![0u64; n];
        for &(lo, hi) in edges {
            if lo >= n || hi >= n {
                return Err(LatticeError::InvalidStructure(format!(
                    "edge ({lo},{hi}) out of range"
                )));
            }
            let (tl, th) = (level_of(lo), level_of(hi));
            if th != tl + 1 {
                return Err(LatticeError::InvalidStructure(format!(
                    "edge ({lo},{hi}) does not join adjacent levels"
                )));
            }
            let rel = hi - starts[th];
            if rel >= 64 {
                return Err(LatticeError::LevelTooWide {
                    level: th,
                    width: level_sizes[th],
                });
            }
            up[lo] |= 1 << rel;
        }
        LeveledLattice::new(level_sizes, up)
    }

    /// The `n`-element chain.
    pub fn chain(n: usize) -> Self {
        assert!(n >= 1);
        let mut up = vec![1u64; n];
        up[n - 1] = 0;
        LeveledLattice::new(vec![1; n], up).expect("chains are valid")
    }

    /// The lattice of height two with `k` atoms (`M_k`).
    pub fn height_two(k: usize) -> Self {
        let mut up = vec![bits::low_mask(k)];
        up.extend(std::iter::repeat_n(1, k));
        up.push(0);
        LeveledLattice::new(vec![1, k, 1], up).expect("M_k is valid")
    }

    /// The Boolean lattice of subsets of a `k`-set.
    pub fn boolean(k: usize) -> Self {
        let mut sizes = Vec::new();
        let mut by_level: Vec<Vec<u32>> = Vec::new();
        for r in 0..=k {
            let mut lvl: Vec<u32> = (0u32..(1 << k))
                .filter(|s| s.count_ones() as usize == r)
                .collect();
            lvl.sort_unstable();
            sizes.push(lvl.len());
            by_level.push(lvl);
        }
        let mut up = Vec::new();
        for r in 0..=k {
            for &s in &by_level[r] {
                let mut m = 0u64;
                if r < k {
                    for (j, &t) in by_level[r + 1].iter().enumerate() {
                        if t & s == s {
                            m |= 1 << j;
                        }
                    }
                }
                up.push(m);
            }
        }
        LeveledLattice::new(sizes, up).expect("Boolean lattices are valid")
    }

    pub fn n(&self) -> usize {
        *self.starts.last().unwrap()
    }

    /// Number of levels minus one.
    pub fn rank(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn level_sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn rank_sequence(&self) -> RankSequence {
        RankSequence(self.sizes.clone())
    }

    pub fn level(&self, t: usize) -> Range<usize> {
        self.starts[t]..self.starts[t + 1]
    }

    pub fn level_start(&self, t: usize) -> usize {
        self.starts[t]
    }

    pub fn level_of(&self, e: usize) -> usize {
        self.starts.partition_point(|&s| s <= e) - 1
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.n() - 1
    }

    /// Upper covers of `e` as a bit set over the next level.
    pub fn up_mask(&self, e: usize) -> u64 {
        self.up[e]
    }

    /// All rows of [`up_mask`](Self::up_mask), in element order.
    pub fn up_masks(&self) -> &[u64] {
        &self.up
    }

    /// Lower covers of `e` as a bit set over the previous level.
    pub fn down_mask(&self, e: usize) -> u64 {
        let t = self.level_of(e);
        if t == 0 {
            return 0;
        }
        let rel = e - self.starts[t];
        let mut m = 0u64;
        for (i, lo) in self.level(t - 1).enumerate() {
            if self.up[lo] >> rel & 1 == 1 {
                m |= 1 << i;
            }
        }
        m
    }

    /// Upper covers of `e` as global element numbers.
    pub fn up_covers(&self, e: usize) -> impl Iterator<Item = usize> + '_ {
        let t = self.level_of(e);
        let base = if t + 1 < self.starts.len() {
            self.starts[t + 1]
        } else {
            0
        };
        ones(self.up[e]).map(move |i| base + i)
    }

    pub fn down_covers(&self, e: usize) -> impl Iterator<Item = usize> + '_ {
        let t = self.level_of(e);
        let base = if t > 0 { self.starts[t - 1] } else { 0 };
        ones(self.down_mask(e)).map(move |i| base + i)
    }

    /// Whether `hi` covers `lo`.
    pub fn covers(&self, lo: usize, hi: usize) -> bool {
        let (tl, th) = (self.level_of(lo), self.level_of(hi));
        th == tl + 1 && self.up[lo] >> (hi - self.starts[th]) & 1 == 1
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .flat_map(|e| self.up_covers(e).map(move |u| (e, u)))
            .collect()
    }

    /// Number of atoms `a(L)`.
    pub fn atom_count(&self) -> usize {
        if self.rank() == 0 {
            0
        } else {
            self.sizes[1]
        }
    }

    /// Number of coatoms `c(L)`.
    pub fn coatom_count(&self) -> usize {
        if self.rank() == 0 {
            0
        } else {
            self.sizes[self.rank() - 1]
        }
    }

    pub fn atoms(&self) -> Range<usize> {
        if self.rank() == 0 {
            0..0
        } else {
            self.level(1)
        }
    }

    pub fn coatoms(&self) -> Range<usize> {
        if self.rank() == 0 {
            0..0
        } else {
            self.level(self.rank() - 1)
        }
    }

    /// Indices of two-element levels other than the atoms and the coatoms.
    pub fn necks(&self) -> Vec<usize> {
        let r = self.rank();
        (2..r.saturating_sub(1))
            .filter(|&t| self.sizes[t] == 2)
            .collect()
    }

    /// Whether some interior level is a singleton.
    pub fn is_vertically_decomposable(&self) -> bool {
        let r = self.rank();
        (1..r).any(|t| self.sizes[t] == 1)
    }

    /// Up-sets (including the element itself) as rows of a bit matrix.
    pub(crate) fn up_sets(&self) -> BitRows {
        let n = self.n();
        let mut rows = BitRows::new(n, n);
        for e in (0..n).rev() {
            rows.set(e, e);
            let covers: Vec<usize> = self.up_covers(e).collect();
            for c in covers {
                rows.or_into(e, c);
            }
        }
        rows
    }

    /// Down-sets (including the element itself).
    pub(crate) fn down_sets(&self) -> BitRows {
        let n = self.n();
        let mut rows = BitRows::new(n, n);
        for e in 0..n {
            rows.set(e, e);
            let covers: Vec<usize> = self.down_covers(e).collect();
            for c in covers {
                rows.or_into(e, c);
            }
        }
        rows
    }

    /// Whether `a <= b`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        bits::contains(self.up_sets().row(a), b)
    }

    /// Computes the meet and join tables, failing on the first pair (in
    /// element order) that lacks a unique join or meet.
    pub fn meet_join_tables(&self) -> Result<LatticeTables, LatticeError> {
        let n = self.n();
        let ups = self.up_sets();
        let downs = self.down_sets();
        let words = n.div_ceil(64).max(1);
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        let mut scratch = vec![0u64; words];
        for a in 0..n {
            for b in a..n {
                for (k, s) in scratch.iter_mut().enumerate() {
                    *s = ups.row(a)[k] & ups.row(b)[k];
                }
                let j = bits::first_one(&scratch)
                    .filter(|&j| ups.row(j) == scratch.as_slice())
                    .ok_or(LatticeError::NotALattice(a, b, "join"))?;
                for (k, s) in scratch.iter_mut().enumerate() {
                    *s = downs.row(a)[k] & downs.row(b)[k];
                }
                let m = bits::last_one(&scratch)
                    .filter(|&m| downs.row(m) == scratch.as_slice())
                    .ok_or(LatticeError::NotALattice(a, b, "meet"))?;
                join[a * n + b] = j;
                join[b * n + a] = j;
                meet[a * n + b] = m;
                meet[b * n + a] = m;
            }
        }
        Ok(LatticeTables { n, meet, join })
    }

    pub fn is_lattice(&self) -> bool {
        self.meet_join_tables().is_ok()
    }

    /// The order dual.
    pub fn dual(&self) -> LeveledLattice {
        let r = self.rank();
        let sizes: Vec<usize> = self.sizes.iter().rev().copied().collect();
        let mut up = Vec::with_capacity(self.n());
        for t in (0..=r).rev() {
            for e in self.level(t) {
                up.push(self.down_mask(e));
            }
        }
        LeveledLattice::new(sizes, up).expect("dual of a valid structure is valid")
    }

    /// Relabels elements by `perm` (old element -> new element), which must
    /// map every level onto itself.
    pub fn permute_within_levels(&self, perm: &[usize]) -> LeveledLattice {
        assert_eq!(perm.len(), self.n());
        let mut up = vec![0u64; self.n()];
        for e in 0..self.n() {
            let t = self.level_of(e);
            assert_eq!(
                self.level_of(perm[e]),
                t,
                "permutation must preserve levels"
            );
            let mut m = 0u64;
            for c in self.up_covers(e) {
                m |= 1 << (perm[c] - self.starts[t + 1]);
            }
            up[perm[e]] = m;
        }
        LeveledLattice::new(self.sizes.clone(), up).expect("relabeling preserves validity")
    }

    /// Identifies the top of `self` with the bottom of `upper`.
    pub fn vertical_sum(&self, upper: &LeveledLattice) -> LeveledLattice {
        let r = self.rank();
        let mut sizes: Vec<usize> = self.sizes[..r].to_vec();
        sizes.extend_from_slice(&upper.sizes);
        let mut up: Vec<u64> = self.up[..self.n() - 1].to_vec();
        up.extend_from_slice(&upper.up);
        LeveledLattice::new(sizes, up).expect("vertical sum of valid structures is valid")
    }

    /// Removes the top of `self` and the bottom of `upper` and identifies the
    /// two coatoms of `self` with the two atoms of `upper`.
    pub fn vertical_2sum(
        &self,
        upper: &LeveledLattice,
        order: MatchOrder,
    ) -> Result<LeveledLattice, LatticeError> {
        if self.rank() < 3 {
            return Err(LatticeError::PreconditionViolation(format!(
                "lower summand has rank {} < 3",
                self.rank()
            )));
        }
        if upper.rank() < 3 {
            return Err(LatticeError::PreconditionViolation(format!(
                "upper summand has rank {} < 3",
                upper.rank()
            )));
        }
        if self.coatom_count() != 2 {
            return Err(LatticeError::PreconditionViolation(format!(
                "lower summand has {} coatoms",
                self.coatom_count()
            )));
        }
        if upper.atom_count() != 2 {
            return Err(LatticeError::PreconditionViolation(format!(
                "upper summand has {} atoms",
                upper.atom_count()
            )));
        }
        let rl = self.rank();
        let mut sizes: Vec<usize> = self.sizes[..rl].to_vec();
        sizes.extend_from_slice(&upper.sizes[2..]);
        let junction = self.starts[rl - 1];
        let mut up: Vec<u64> = self.up[..junction].to_vec();
        let (a1, a2) = (upper.up[1], upper.up[2]);
        match order {
            MatchOrder::Straight => up.extend([a1, a2]),
            MatchOrder::Crossed => up.extend([a2, a1]),
        }
        up.extend_from_slice(&upper.up[3..]);
        LeveledLattice::new(sizes, up)
    }

    /// Splits a lattice with a neck at its highest neck into a lower part
    /// (everything up to the neck plus a new top) and an upper part (the
    /// neck and everything above plus a new bottom).
    pub(crate) fn split_at_level(&self, t: usize) -> (LeveledLattice, LeveledLattice) {
        debug_assert_eq!(self.sizes[t], 2);
        let mut lo_sizes = self.sizes[..=t].to_vec();
        lo_sizes.push(1);
        let mut lo_up = self.up[..self.starts[t]].to_vec();
        lo_up.extend([1, 1, 0]);
        let mut hi_sizes = vec![1];
        hi_sizes.extend_from_slice(&self.sizes[t..]);
        let mut hi_up = vec![0b11];
        hi_up.extend_from_slice(&self.up[self.starts[t]..]);
        (
            LeveledLattice::new(lo_sizes, lo_up).expect("lower part is valid"),
            LeveledLattice::new(hi_sizes, hi_up).expect("upper part is valid"),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bowtie() -> LeveledLattice {
        LeveledLattice::new(vec![1, 2, 2, 1], vec![0b11, 0b11, 0b11, 1, 1, 0]).unwrap()
    }

    // Levels 1,2,2,1; the first atom lies under both level-2 elements.
    fn grid_2x3() -> LeveledLattice {
        LeveledLattice::new(vec![1, 2, 2, 1], vec![0b11, 0b11, 0b01, 1, 1, 0]).unwrap()
    }

    #[test]
    fn chain_tables() {
        let c = LeveledLattice::chain(2);
        let t = c.meet_join_tables().unwrap();
        assert_eq!(t.join(0, 1), 1);
        assert_eq!(t.meet(0, 1), 0);
        let c5 = LeveledLattice::chain(5);
        let t = c5.meet_join_tables().unwrap();
        assert_eq!(t.join(1, 3), 3);
        assert_eq!(t.meet(4, 2), 2);
    }

    #[test]
    fn diamond_meets_are_bottom() {
        let m3 = LeveledLattice::height_two(3);
        let t = m3.meet_join_tables().unwrap();
        for a in 1..4 {
            for b in 1..4 {
                if a != b {
                    assert_eq!(t.meet(a, b), 0);
                    assert_eq!(t.join(a, b), 4);
                }
            }
        }
    }

    #[test]
    fn bowtie_is_not_a_lattice() {
        let err = bowtie().meet_join_tables().unwrap_err();
        assert_eq!(err, LatticeError::NotALattice(1, 2, "join"));
    }

    #[test]
    fn grid_is_a_lattice() {
        assert!(grid_2x3().is_lattice());
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            LeveledLattice::new(vec![1, 2, 1], vec![0b11, 1, 0, 0]),
            Err(LatticeError::InvalidStructure(_))
        ));
        assert!(matches!(
            LeveledLattice::new(vec![1, 2, 1], vec![0b01, 1, 1, 0]),
            Err(LatticeError::InvalidStructure(_))
        ));
        assert!(matches!(
            LeveledLattice::new(vec![2, 1], vec![1, 1, 0]),
            Err(LatticeError::InvalidStructure(_))
        ));
        let wide = vec![1, 64, 1];
        let mut up = vec![u64::MAX];
        up.extend(std::iter::repeat(1).take(64));
        up.push(0);
        assert_eq!(
            LeveledLattice::new(wide, up),
            Err(LatticeError::LevelTooWide {
                level: 1,
                width: 64
            })
        );
    }

    #[test]
    fn atoms_coatoms_necks() {
        let m3 = LeveledLattice::height_two(3);
        assert_eq!(m3.atom_count(), 3);
        assert_eq!(m3.coatom_count(), 3);
        assert!(m3.necks().is_empty());
        let b3 = LeveledLattice::boolean(3);
        assert_eq!(b3.level_sizes(), &[1, 3, 3, 1]);
        assert!(b3.necks().is_empty());
        assert!(!b3.is_vertically_decomposable());
    }

    #[test]
    fn decomposability() {
        assert!(LeveledLattice::chain(3).is_vertically_decomposable());
        assert!(!LeveledLattice::chain(2).is_vertically_decomposable());
        assert!(!LeveledLattice::height_two(3).is_vertically_decomposable());
    }

    #[test]
    fn dual_reverses_rank_sequence() {
        let l = grid_2x3();
        let d = l.dual();
        assert_eq!(d.rank_sequence(), l.rank_sequence().reversed());
        assert!(d.is_lattice());
        let c = LeveledLattice::chain(4);
        assert_eq!(c.dual(), c);
        assert_eq!(
            LeveledLattice::height_two(3).dual(),
            LeveledLattice::height_two(3)
        );
    }

    #[test]
    fn vertical_sum_sizes() {
        let c2 = LeveledLattice::chain(2);
        assert_eq!(c2.vertical_sum(&c2), LeveledLattice::chain(3));
        let s = LeveledLattice::height_two(3).vertical_sum(&c2);
        assert_eq!(s.n(), 6);
        assert_eq!(s.rank(), 3);
        assert!(s.is_lattice());
        let one = LeveledLattice::chain(1);
        assert_eq!(one.vertical_sum(&s), s);
        assert_eq!(s.vertical_sum(&one), s);
    }

    #[test]
    fn two_sum_preconditions() {
        let b3 = LeveledLattice::boolean(3);
        let m3 = LeveledLattice::height_two(3);
        assert!(matches!(
            b3.vertical_2sum(&b3, MatchOrder::Straight),
            Err(LatticeError::PreconditionViolation(_))
        ));
        assert!(matches!(
            m3.vertical_2sum(&m3, MatchOrder::Straight),
            Err(LatticeError::PreconditionViolation(_))
        ));
    }

    #[test]
    fn two_sum_of_two_six_element_pieces() {
        // 1,2,2,1 "square with a handle": the unique 6-element modular piece.
        let p = LeveledLattice::new(vec![1, 2, 2, 1], vec![0b11, 0b01, 0b11, 1, 1, 0]).unwrap();
        let q = LeveledLattice::new(vec![1, 2, 2, 1], vec![0b11, 0b11, 0b10, 1, 1, 0]).unwrap();
        for order in MatchOrder::BOTH {
            let s = p.vertical_2sum(&q, order).unwrap();
            assert_eq!(s.n(), p.n() + q.n() - 4);
            assert_eq!(s.necks(), vec![2]);
            assert!(s.is_lattice());
            assert!(!s.is_vertically_decomposable());
        }
    }

    #[test]
    fn split_recovers_summands() {
        let p = LeveledLattice::new(vec![1, 2, 2, 1], vec![0b11, 0b01, 0b11, 1, 1, 0]).unwrap();
        let s = p.vertical_2sum(&p, MatchOrder::Straight).unwrap();
        let (lo, hi) = s.split_at_level(2);
        assert_eq!(lo, p);
        assert_eq!(hi, p);
    }
}
