//! Consistency checks on generated data: dual-pair parity of listings, the
//! direct-versus-recurrence cross-check, and table comparison.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use crate::bounds::Verdict;
use crate::canon::{are_isomorphic, automorphism_generators};
use crate::classify::{classify, two_sum_outcomes, ClassifyError, CompType, SymmetryClass};
use crate::count::{compose_counts, Column, CountError, CountTable};
use crate::family::Family;
use crate::generate::{generate, GenConfig, GenError, Mode};
use crate::lattice::{LeveledLattice, MatchOrder, RankSequence};

/// Count of lattices per (class, rank sequence). Compositions are not
/// tracked since the dual of a composition need not have a composition
/// class of the same name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DualityLedger {
    counts: BTreeMap<(SymmetryClass, RankSequence), u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityMismatch {
    pub class: SymmetryClass,
    pub ranks: RankSequence,
    pub count: u64,
    pub dual_count: u64,
}

impl std::fmt::Display for DualityMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} {}: {} lattices, but {} {}: {}",
            self.class,
            self.ranks,
            self.count,
            self.class.dual(),
            self.ranks.reversed(),
            self.dual_count
        )
    }
}

impl DualityLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, class: SymmetryClass, ranks: RankSequence) {
        if !matches!(class, SymmetryClass::Composition(_)) {
            *self.counts.entry((class, ranks)).or_default() += 1;
        }
    }

    pub fn add_lattice(&mut self, l: &LeveledLattice) -> Result<(), ClassifyError> {
        self.add(classify(l)?, l.rank_sequence());
        Ok(())
    }

    pub fn from_lattices<'a>(
        ls: impl IntoIterator<Item = &'a LeveledLattice>,
    ) -> Result<Self, ClassifyError> {
        let mut d = Self::new();
        for l in ls {
            d.add_lattice(l)?;
        }
        Ok(d)
    }

    pub fn get(&self, class: SymmetryClass, ranks: &RankSequence) -> u64 {
        self.counts
            .get(&(class, ranks.clone()))
            .copied()
            .unwrap_or(0)
    }

    pub fn class_total(&self, class: SymmetryClass) -> u64 {
        self.counts
            .iter()
            .filter(|((c, _), _)| *c == class)
            .map(|(_, v)| v)
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(SymmetryClass, RankSequence), &u64)> {
        self.counts.iter()
    }

    /// First entry, in (class, rank sequence) order, whose dual entry has a
    /// different count.
    pub fn first_mismatch(&self) -> Option<DualityMismatch> {
        self.counts.iter().find_map(|((c, s), &v)| {
            let d = self.get(c.dual(), &s.reversed());
            (d != v).then(|| DualityMismatch {
                class: *c,
                ranks: s.clone(),
                count: v,
                dual_count: d,
            })
        })
    }
}

pub fn verify_duality(ledger: &DualityLedger) -> Verdict {
    match ledger.first_mismatch() {
        None => Verdict::Pass,
        Some(m) => Verdict::Fail(m.to_string()),
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
}

/// Per-class counts of all vi-lattices of `family` up to `max_n`, found by
/// direct generation.
pub fn direct_counts(family: Family, max_n: usize) -> Result<CountTable, VerifyError> {
    let cfg = GenConfig::new(family, max_n, Mode::AllViLattices);
    let mut t = CountTable::new(max_n);
    let mut err = None;
    generate(&cfg, |l| match classify(l) {
        Ok(c) => t.add_class(l.n(), c),
        Err(e) => {
            err.get_or_insert(e);
        }
    })?;
    if let Some(e) = err {
        return Err(e.into());
    }
    t.fill_classes(max_n, true);
    Ok(t)
}

/// Compares the composition counts of a direct table with those the
/// recurrence derives from its piece counts.
pub fn cross_check_tables(direct: &CountTable, pieces: &CountTable) -> Result<Verdict, CountError> {
    let derived = compose_counts(&pieces.project(&Column::PIECES))?;
    for n in 1..=direct.max_n() {
        for c in CompType::ALL {
            let col = Column::of_class(SymmetryClass::Composition(c));
            let (a, b): (BigUint, BigUint) = (direct.value(n, col), derived.value(n, col));
            if a != b {
                return Ok(Verdict::Fail(format!(
                    "n={n} {}: generated {a}, recurrence gives {b}",
                    c.name()
                )));
            }
        }
    }
    Ok(Verdict::Pass)
}

/// Generates every vi-lattice up to `max_n` and checks that the counted
/// compositions agree with the recurrence applied to the counted pieces.
pub fn cross_check(family: Family, max_n: usize) -> Result<Verdict, VerifyError> {
    let direct = direct_counts(family, max_n)?;
    Ok(cross_check_tables(&direct, &direct)?)
}

/// Pass iff every cell known in `expected` has the same value in `actual`.
pub fn compare_tables(actual: &CountTable, expected: &CountTable) -> Verdict {
    match actual.first_mismatch(expected) {
        None => Verdict::Pass,
        Some((n, c, e, got)) => Verdict::Fail(match got {
            Some(g) => format!("n={n} {}: expected {e}, found {g}", c.name()),
            None => format!("n={n} {}: expected {e}, found nothing", c.name()),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSumReport {
    pub pairs: usize,
    pub verdict: Verdict,
}

fn moves_any(l: &LeveledLattice, range: std::ops::Range<usize>) -> bool {
    automorphism_generators(l)
        .iter()
        .any(|g| range.clone().any(|e| g[e] != e))
}

/// Forms both 2-sums of every generated lower summand (two coatoms) with
/// every generated piece with two atoms, up to `max_size` elements in the
/// sum. Checks that the sums stay in the family, that they are
/// nonisomorphic exactly when the lower coatoms and upper atoms are both
/// fixed, and that their classes are the ones `two_sum_outcomes` predicts.
pub fn two_sum_property(family: Family, max_size: usize) -> Result<TwoSumReport, VerifyError> {
    let cfg = GenConfig::new(
        family,
        max_size.saturating_sub(2).max(1),
        Mode::AllViLattices,
    );
    let mut lowers = Vec::new();
    let mut uppers = Vec::new();
    generate(&cfg, |l| {
        if l.rank() < 3 {
            return;
        }
        if l.coatom_count() == 2 {
            lowers.push(l.clone());
        }
        if l.atom_count() == 2 && l.necks().is_empty() {
            uppers.push(l.clone());
        }
    })?;
    let lowers: Vec<_> = lowers
        .into_iter()
        .map(|l| {
            let c = classify(&l)?;
            let fixed = !moves_any(&l, l.coatoms());
            Ok((l, c, fixed))
        })
        .collect::<Result<_, ClassifyError>>()?;
    let uppers: Vec<_> = uppers
        .into_iter()
        .map(|u| {
            let c = classify(&u)?;
            let fixed = !moves_any(&u, u.atoms());
            Ok((u, c, fixed))
        })
        .collect::<Result<_, ClassifyError>>()?;

    let mut pairs = 0;
    for (l, lc, lfix) in &lowers {
        for (u, uc, ufix) in &uppers {
            if l.n() + u.n() - 4 > max_size {
                continue;
            }
            pairs += 1;
            let fail = |why: String| {
                Ok(TwoSumReport {
                    pairs,
                    verdict: Verdict::Fail(format!(
                        "{lc} {} with {uc} {}: {why}",
                        l.rank_sequence(),
                        u.rank_sequence()
                    )),
                })
            };
            let s1 = l
                .vertical_2sum(u, MatchOrder::Straight)
                .expect("summands fit");
            let s2 = l
                .vertical_2sum(u, MatchOrder::Crossed)
                .expect("summands fit");
            if !family.contains(&s1) || !family.contains(&s2) {
                return fail(format!("a 2-sum is not {family}"));
            }
            let distinct = !are_isomorphic(&s1, &s2);
            if distinct != (*lfix && *ufix) {
                return fail(format!("2-sums distinct = {distinct}"));
            }
            let mut got = vec![classify(&s1)?];
            if distinct {
                got.push(classify(&s2)?);
            }
            let mut want: Vec<SymmetryClass> = two_sum_outcomes(*lc, *uc)
                .into_iter()
                .map(SymmetryClass::Composition)
                .collect();
            got.sort();
            want.sort();
            if got != want {
                return fail(format!("classes {got:?}, expected {want:?}"));
            }
        }
    }
    Ok(TwoSumReport {
        pairs,
        verdict: Verdict::Pass,
    })
}
