//! Slow reference implementations for testing: exhaustive enumeration of
//! graded lattices, lattice and family checks from the definitions, and
//! canonical forms by trying every level-preserving permutation.
//!
//! Nothing here shares code with the generator or the canonical labeling
//! search. Only meant for lattices of about ten elements.

use std::collections::BTreeSet;

use crate::family::Family;
use crate::lattice::LeveledLattice;

/// Order relation and operation tables computed from scratch.
pub struct BruteLattice {
    pub n: usize,
    pub rank: Vec<usize>,
    pub leq: Vec<Vec<bool>>,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
}

fn order_matrix(l: &LeveledLattice) -> Vec<Vec<bool>> {
    let n = l.n();
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    for (a, b) in l.edges() {
        leq[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if leq[i][k] {
                for j in 0..n {
                    if leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
    }
    leq
}

/// `None` if some pair lacks a meet or a join.
pub fn brute_lattice(l: &LeveledLattice) -> Option<BruteLattice> {
    let n = l.n();
    let leq = order_matrix(l);
    let mut meet = vec![vec![0; n]; n];
    let mut join = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            let ub: Vec<usize> = (0..n).filter(|&x| leq[a][x] && leq[b][x]).collect();
            let least = ub
                .iter()
                .copied()
                .find(|&x| ub.iter().all(|&y| leq[x][y]))?;
            let lb: Vec<usize> = (0..n).filter(|&x| leq[x][a] && leq[x][b]).collect();
            let greatest = lb
                .iter()
                .copied()
                .find(|&x| lb.iter().all(|&y| leq[y][x]))?;
            join[a][b] = least;
            meet[a][b] = greatest;
        }
    }
    let rank = (0..n).map(|e| l.level_of(e)).collect();
    Some(BruteLattice {
        n,
        rank,
        leq,
        meet,
        join,
    })
}

/// Family membership from the textbook identities. Semimodularity of a
/// graded lattice is the rank inequality `r(a) + r(b) >= r(a^b) + r(avb)`.
pub fn brute_in_family(b: &BruteLattice, family: Family) -> bool {
    let n = b.n;
    let r = &b.rank;
    match family {
        Family::Semimodular => {
            (0..n).all(|x| (0..n).all(|y| r[x] + r[y] >= r[b.meet[x][y]] + r[b.join[x][y]]))
        }
        Family::Modular => {
            (0..n).all(|x| (0..n).all(|y| r[x] + r[y] == r[b.meet[x][y]] + r[b.join[x][y]]))
        }
        Family::Distributive => (0..n).all(|x| {
            (0..n).all(|y| {
                (0..n).all(|z| b.meet[x][b.join[y][z]] == b.join[b.meet[x][y]][b.meet[x][z]])
            })
        }),
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Calls `f` with every permutation (old -> new) that keeps each level in
/// place.
fn for_each_level_perm(l: &LeveledLattice, mut f: impl FnMut(&[usize])) {
    let sizes = l.level_sizes();
    let mut local: Vec<Vec<usize>> = sizes.iter().map(|&s| (0..s).collect()).collect();
    let mut perm = vec![0; l.n()];
    loop {
        for (t, p) in local.iter().enumerate() {
            let s = l.level_start(t);
            for (i, &x) in p.iter().enumerate() {
                perm[s + i] = s + x;
            }
        }
        f(&perm);
        // odometer over the levels
        let mut t = 0;
        loop {
            if t == local.len() {
                return;
            }
            if next_permutation(&mut local[t]) {
                break;
            }
            local[t].sort_unstable();
            t += 1;
        }
    }
}

fn relabeled_edges(edges: &[(usize, usize)], perm: &[usize]) -> Vec<(usize, usize)> {
    let mut e: Vec<_> = edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
    e.sort_unstable();
    e
}

/// Level sizes with the lexicographically least relabeled edge list.
pub fn brute_canonical(l: &LeveledLattice) -> (Vec<usize>, Vec<(usize, usize)>) {
    let edges = l.edges();
    let mut best: Option<Vec<(usize, usize)>> = None;
    for_each_level_perm(l, |p| {
        let e = relabeled_edges(&edges, p);
        if best.as_ref().is_none_or(|b| e < *b) {
            best = Some(e);
        }
    });
    (l.level_sizes().to_vec(), best.unwrap())
}

pub fn brute_automorphism_count(l: &LeveledLattice) -> u64 {
    let mut edges = l.edges();
    edges.sort_unstable();
    let mut count = 0;
    for_each_level_perm(l, |p| {
        if relabeled_edges(&edges, p) == edges {
            count += 1;
        }
    });
    count
}

fn rank_sequences(n: usize, vi_only: bool) -> Vec<Vec<usize>> {
    fn rec(left: usize, vi_only: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 1 {
            cur.push(1);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        let min = if vi_only { 2 } else { 1 };
        for w in min..left {
            if w > 63 {
                break;
            }
            cur.push(w);
            rec(left - w, vi_only, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    match n {
        0 => {}
        1 => out.push(vec![1]),
        _ => rec(n - 1, vi_only, &mut vec![1], &mut out),
    }
    out
}

/// Every graded lattice on exactly `n` elements with a fixed element
/// numbering, isomorphic copies included. With `vi_only`, interior levels
/// have at least two elements.
pub fn for_each_labeled_lattice(n: usize, vi_only: bool, mut f: impl FnMut(&LeveledLattice)) {
    for sizes in rank_sequences(n, vi_only) {
        let mut up: Vec<u64> = Vec::with_capacity(n);
        levels(&sizes, 0, &mut up, &mut f);
    }
}

fn levels(sizes: &[usize], t: usize, up: &mut Vec<u64>, f: &mut impl FnMut(&LeveledLattice)) {
    if t + 1 == sizes.len() {
        up.push(0);
        let l = LeveledLattice::new(sizes.to_vec(), up.clone()).expect("valid diagram");
        if brute_lattice(&l).is_some() {
            f(&l);
        }
        up.pop();
        return;
    }
    let (a, b) = (sizes[t], sizes[t + 1]);
    let full = (1u64 << b) - 1;
    let mut masks = vec![1u64; a];
    loop {
        if masks.iter().fold(0, |acc, m| acc | m) == full {
            up.extend_from_slice(&masks);
            levels(sizes, t + 1, up, f);
            up.truncate(up.len() - a);
        }
        // next tuple of nonzero masks
        let mut i = 0;
        loop {
            if i == a {
                return;
            }
            if masks[i] < full {
                masks[i] += 1;
                break;
            }
            masks[i] = 1;
            i += 1;
        }
    }
}

pub type BruteForm = (Vec<usize>, Vec<(usize, usize)>);

/// Isomorphism classes of graded vi-lattices of size `n` in `family`.
pub fn vi_lattice_classes(family: Family, n: usize) -> BTreeSet<BruteForm> {
    let mut seen = BTreeSet::new();
    for_each_labeled_lattice(n, true, |l| {
        let b = brute_lattice(l).unwrap();
        if brute_in_family(&b, family) {
            seen.insert(brute_canonical(l));
        }
    });
    seen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        // 1, 2 and the height-two lattices M_k
        assert_eq!(vi_lattice_classes(Family::Modular, 5).len(), 1);
        assert_eq!(vi_lattice_classes(Family::Distributive, 4).len(), 1);
        assert_eq!(vi_lattice_classes(Family::Distributive, 5).len(), 0);
        assert_eq!(brute_automorphism_count(&LeveledLattice::boolean(3)), 6);
    }
}
