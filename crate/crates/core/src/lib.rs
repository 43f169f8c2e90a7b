//! Generation, symmetry classification and counting of graded vertically
//! indecomposable lattices.

mod bits;
pub mod bounds;
pub mod canon;
pub mod classify;
pub mod count;
pub mod data;
pub mod digraph6;
pub mod family;
pub mod generate;
pub mod lattice;
pub mod oracle;
pub mod verify;

pub use bounds::{
    parse_rational, steiner_admissible, steiner_bound, steiner_threshold, verify_lower_bound,
    verify_total_bound, BoundCert, BoundError, BoundReport, Certificate, InductionTerm,
    SteinerBound, TotalBoundCert, Verdict,
};
pub use canon::{
    are_isomorphic, automorphism_generators, canonical_form, canonical_form_and_automorphisms,
    canonical_labeling, canonical_lattice, is_automorphism, AutGenerators, CanonicalForm,
};
pub use classify::{
    classify, decompose_at_highest_neck, gen_kind, two_sum_outcomes, ClassifyError, CompType,
    GenKind, PieceType, SymmetryClass,
};
pub use count::{
    aggregate, complete_table, compose_counts, decimal, growth_ratios, vertical_sum_totals,
    write_ratios_csv, Column, CountError, CountTable, RatioRow,
};
pub use digraph6::{
    decode_digraph6, decode_lattice, encode_digraph, encode_digraph6, read_listing, sort_records,
    write_listing, Digraph, Digraph6Error, Digraph6Record, Manifest,
};
pub use family::{
    consecutive_levels_connected, has_cover_preserving_diamond, is_distributive, is_modular,
    is_semimodular, meet_irreducible_count, Family,
};
pub use generate::{
    generate, generate_parallel, length_bound, resume, split_checkpoints, GenConfig, GenError,
    GenSummary, Mode, SearchState,
};
pub use lattice::{LatticeError, LatticeTables, LeveledLattice, MatchOrder, RankSequence};
pub use verify::{
    compare_tables, cross_check, cross_check_tables, direct_counts, two_sum_property,
    verify_duality, DualityLedger, DualityMismatch, TwoSumReport, VerifyError,
};
