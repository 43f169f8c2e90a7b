//! Membership tests for semimodular, modular and distributive lattices.

use std::fmt;
use std::str::FromStr;

use crate::bits::ones;
use crate::canon::UnionFind;
use crate::lattice::LeveledLattice;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Semimodular,
    Modular,
    Distributive,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Semimodular, Family::Modular, Family::Distributive];

    pub fn contains(self, l: &LeveledLattice) -> bool {
        match self {
            Family::Semimodular => is_semimodular(l),
            Family::Modular => is_modular(l),
            Family::Distributive => is_distributive(l),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Semimodular => "semimodular",
            Family::Modular => "modular",
            Family::Distributive => "distributive",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "semimodular" => Ok(Family::Semimodular),
            "modular" => Ok(Family::Modular),
            "distributive" => Ok(Family::Distributive),
            other => Err(format!("unknown family `{other}`")),
        }
    }
}

/// Upper semimodularity: whenever `a` and `b` cover `a ∧ b`, the join
/// `a ∨ b` covers both. Returns false for non-lattices.
pub fn is_semimodular(l: &LeveledLattice) -> bool {
    let Ok(tables) = l.meet_join_tables() else {
        return false;
    };
    // two distinct upper covers of m always meet in m, so it is enough to
    // look at pairs of upper covers of each element
    for m in 0..l.n() {
        let ups: Vec<usize> = l.up_covers(m).collect();
        for (i, &a) in ups.iter().enumerate() {
            for &b in &ups[i + 1..] {
                let j = tables.join(a, b);
                if !l.covers(a, j) || !l.covers(b, j) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_modular(l: &LeveledLattice) -> bool {
    is_semimodular(l) && is_semimodular(&l.dual())
}

/// Whether some `o ≺ a, b, c ≺ i` exists.
pub fn has_cover_preserving_diamond(l: &LeveledLattice) -> bool {
    let mut count = vec![0u8; l.n()];
    for o in 0..l.n() {
        let ups: Vec<usize> = l.up_covers(o).collect();
        let mut touched = Vec::new();
        for &a in &ups {
            for i in l.up_covers(a) {
                if count[i] == 0 {
                    touched.push(i);
                }
                count[i] += 1;
            }
        }
        let found = touched.iter().any(|&i| count[i] >= 3);
        for i in touched {
            count[i] = 0;
        }
        if found {
            return true;
        }
    }
    false
}

pub fn is_distributive(l: &LeveledLattice) -> bool {
    is_modular(l) && !has_cover_preserving_diamond(l)
}

/// Elements other than the top with exactly one upper cover.
pub fn meet_irreducible_count(l: &LeveledLattice) -> usize {
    (0..l.n())
        .filter(|&e| l.up_mask(e).count_ones() == 1)
        .count()
}

/// Whether the cover graph between levels `k` and `k + 1` is connected.
pub fn consecutive_levels_connected(l: &LeveledLattice, k: usize) -> bool {
    assert!(k < l.rank(), "level {k} has no level above it");
    let lo = l.level(k);
    let hi = l.level(k + 1);
    let width = lo.len() + hi.len();
    let mut uf = UnionFind::new(width);
    for (i, e) in lo.clone().enumerate() {
        for j in ones(l.up_mask(e)) {
            uf.union(i, lo.len() + j);
        }
    }
    (1..width).all(|v| uf.same(0, v))
}
