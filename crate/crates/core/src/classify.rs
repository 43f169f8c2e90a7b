//! Symmetry classes of graded vi-lattices: specials, pieces and
//! compositions, and how pieces combine under vertical 2-sums.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::canon::automorphism_generators;
use crate::lattice::LeveledLattice;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PieceType {
    MF,
    MA,
    MC,
    MX,
    MH,
    BF,
    BS,
    TF,
    TS,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompType {
    CF,
    CS,
    CN,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymmetryClass {
    Special,
    Piece(PieceType),
    Composition(CompType),
}

/// How one automorphism acts on the two atoms and the two coatoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenKind {
    /// Swaps the atoms, fixes the coatoms.
    A,
    /// Swaps both.
    B,
    /// Swaps the coatoms, fixes the atoms.
    C,
    Ignored,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("not vertically indecomposable: level {0} is a singleton")]
    NotViLattice(usize),
    #[error("lattice has no neck")]
    NoNeck,
}

impl PieceType {
    pub const ALL: [PieceType; 9] = [
        PieceType::MF,
        PieceType::MA,
        PieceType::MC,
        PieceType::MX,
        PieceType::MH,
        PieceType::BF,
        PieceType::BS,
        PieceType::TF,
        PieceType::TS,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PieceType::MF => "MF",
            PieceType::MA => "MA",
            PieceType::MC => "MC",
            PieceType::MX => "MX",
            PieceType::MH => "MH",
            PieceType::BF => "BF",
            PieceType::BS => "BS",
            PieceType::TF => "TF",
            PieceType::TS => "TS",
        }
    }

    pub fn dual(self) -> PieceType {
        match self {
            PieceType::MA => PieceType::MC,
            PieceType::MC => PieceType::MA,
            PieceType::BF => PieceType::TF,
            PieceType::TF => PieceType::BF,
            PieceType::BS => PieceType::TS,
            PieceType::TS => PieceType::BS,
            other => other,
        }
    }
}

impl CompType {
    pub const ALL: [CompType; 3] = [CompType::CF, CompType::CS, CompType::CN];

    pub fn name(self) -> &'static str {
        match self {
            CompType::CF => "CF",
            CompType::CS => "CS",
            CompType::CN => "CN",
        }
    }
}

impl SymmetryClass {
    /// Column name used in count tables.
    pub fn name(self) -> &'static str {
        match self {
            SymmetryClass::Special => "special",
            SymmetryClass::Piece(p) => p.name(),
            SymmetryClass::Composition(c) => c.name(),
        }
    }

    /// Class of the dual lattice. Only meaningful for pieces and specials.
    pub fn dual(self) -> SymmetryClass {
        match self {
            SymmetryClass::Piece(p) => SymmetryClass::Piece(p.dual()),
            other => other,
        }
    }
}

impl fmt::Display for SymmetryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SymmetryClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "special" {
            return Ok(SymmetryClass::Special);
        }
        if let Some(p) = PieceType::ALL.iter().find(|p| p.name() == s) {
            return Ok(SymmetryClass::Piece(*p));
        }
        if let Some(c) = CompType::ALL.iter().find(|c| c.name() == s) {
            return Ok(SymmetryClass::Composition(*c));
        }
        Err(format!("unknown symmetry class `{s}`"))
    }
}

/// Kind of `perm` on a lattice with exactly two atoms and two coatoms.
pub fn gen_kind(l: &LeveledLattice, perm: &[usize]) -> GenKind {
    let a = l.atoms().start;
    let c = l.coatoms().start;
    match (perm[a] != a, perm[c] != c) {
        (true, false) => GenKind::A,
        (true, true) => GenKind::B,
        (false, true) => GenKind::C,
        (false, false) => GenKind::Ignored,
    }
}

fn some_generator_moves(gens: &[Vec<usize>], e: usize) -> bool {
    gens.iter().any(|g| g[e] != e)
}

pub fn classify(l: &LeveledLattice) -> Result<SymmetryClass, ClassifyError> {
    let r = l.rank();
    if let Some(t) = (1..r).find(|&t| l.level_sizes()[t] == 1) {
        return Err(ClassifyError::NotViLattice(t));
    }
    if r < 3 {
        return Ok(SymmetryClass::Special);
    }
    let (a, c) = (l.atom_count(), l.coatom_count());
    let has_neck = !l.necks().is_empty();
    if !has_neck && a != 2 && c != 2 {
        return Ok(SymmetryClass::Special);
    }
    if has_neck && c != 2 {
        return Ok(SymmetryClass::Composition(CompType::CN));
    }
    let gens = automorphism_generators(l);
    let gens = gens.as_slice();
    if has_neck {
        let sym = some_generator_moves(gens, l.coatoms().start);
        return Ok(SymmetryClass::Composition(if sym {
            CompType::CS
        } else {
            CompType::CF
        }));
    }
    let p = if a == 2 && c == 2 {
        let mut seen = [false; 3];
        for g in gens {
            match gen_kind(l, g) {
                GenKind::A => seen[0] = true,
                GenKind::B => seen[1] = true,
                GenKind::C => seen[2] = true,
                GenKind::Ignored => {}
            }
        }
        match seen.iter().filter(|&&s| s).count() {
            0 => PieceType::MF,
            1 if seen[0] => PieceType::MA,
            1 if seen[1] => PieceType::MH,
            1 => PieceType::MC,
            // any two kinds compose to the third
            _ => PieceType::MX,
        }
    } else if c == 2 {
        if some_generator_moves(gens, l.coatoms().start) {
            PieceType::BS
        } else {
            PieceType::BF
        }
    } else if some_generator_moves(gens, l.atoms().start) {
        PieceType::TS
    } else {
        PieceType::TF
    };
    Ok(SymmetryClass::Piece(p))
}

/// Coatom behaviour of a lower summand, or `None` if it cannot be one.
fn lower_coatoms_fixed(c: SymmetryClass) -> Option<bool> {
    use PieceType::*;
    match c {
        SymmetryClass::Composition(CompType::CF) | SymmetryClass::Piece(BF | MF | MA) => Some(true),
        SymmetryClass::Composition(CompType::CS) | SymmetryClass::Piece(BS | MC | MX | MH) => {
            Some(false)
        }
        _ => None,
    }
}

/// Types (with multiplicity) of the nonisomorphic vertical 2-sums of a lower
/// summand of class `lower` with an upper summand of class `upper`. Pairs
/// that cannot be 2-summed give an empty list.
pub fn two_sum_outcomes(lower: SymmetryClass, upper: SymmetryClass) -> Vec<CompType> {
    use PieceType::*;
    let Some(fixed) = lower_coatoms_fixed(lower) else {
        return Vec::new();
    };
    let SymmetryClass::Piece(u) = upper else {
        return Vec::new();
    };
    let (kind, upper_atoms_fixed) = match u {
        MF => (CompType::CF, true),
        MA => (CompType::CF, false),
        MC => (CompType::CS, true),
        MX => (CompType::CS, false),
        // the upper coatoms can only swap together with the junction
        MH => (if fixed { CompType::CF } else { CompType::CS }, false),
        TF => (CompType::CN, true),
        TS => (CompType::CN, false),
        BF | BS => return Vec::new(),
    };
    let count = if fixed && upper_atoms_fixed { 2 } else { 1 };
    vec![kind; count]
}

/// Splits a composition at its highest neck into a lower part and an upper
/// piece, with `lower.vertical_2sum(&upper, MatchOrder::Straight)` equal to
/// the input.
pub fn decompose_at_highest_neck(
    s: &LeveledLattice,
) -> Result<(LeveledLattice, LeveledLattice), ClassifyError> {
    let t = *s.necks().last().ok_or(ClassifyError::NoNeck)?;
    Ok(s.split_at_level(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::MatchOrder;

    fn grid() -> LeveledLattice {
        LeveledLattice::new(vec![1, 2, 2, 1], vec![0b11, 0b01, 0b11, 1, 1, 0]).unwrap()
    }

    #[test]
    fn small_lattices_are_special() {
        assert_eq!(
            classify(&LeveledLattice::chain(1)),
            Ok(SymmetryClass::Special)
        );
        assert_eq!(
            classify(&LeveledLattice::chain(2)),
            Ok(SymmetryClass::Special)
        );
        assert_eq!(
            classify(&LeveledLattice::height_two(2)),
            Ok(SymmetryClass::Special)
        );
        assert_eq!(
            classify(&LeveledLattice::boolean(3)),
            Ok(SymmetryClass::Special)
        );
        assert_eq!(
            classify(&LeveledLattice::chain(3)),
            Err(ClassifyError::NotViLattice(1))
        );
    }

    #[test]
    fn grid_is_fixed_middle_piece() {
        assert_eq!(classify(&grid()), Ok(SymmetryClass::Piece(PieceType::MF)));
    }

    #[test]
    fn table_cells() {
        use PieceType::*;
        let p = SymmetryClass::Piece;
        assert_eq!(
            two_sum_outcomes(p(BF), p(MC)),
            vec![CompType::CS, CompType::CS]
        );
        assert_eq!(
            two_sum_outcomes(SymmetryClass::Composition(CompType::CS), p(MH)),
            vec![CompType::CS]
        );
        assert!(two_sum_outcomes(SymmetryClass::Composition(CompType::CN), p(MF)).is_empty());
        assert_eq!(two_sum_outcomes(p(MA), p(MH)), vec![CompType::CF]);
        assert_eq!(
            two_sum_outcomes(p(MF), p(TF)),
            vec![CompType::CN, CompType::CN]
        );
        assert!(two_sum_outcomes(SymmetryClass::Special, p(MF)).is_empty());
    }

    #[test]
    fn two_sum_of_grids() {
        let g = grid();
        let s = g.vertical_2sum(&g, MatchOrder::Straight).unwrap();
        assert_eq!(classify(&s), Ok(SymmetryClass::Composition(CompType::CF)));
        let (lo, hi) = decompose_at_highest_neck(&s).unwrap();
        assert_eq!(lo.vertical_2sum(&hi, MatchOrder::Straight).unwrap(), s);
        assert_eq!(decompose_at_highest_neck(&g), Err(ClassifyError::NoNeck));
    }
}
