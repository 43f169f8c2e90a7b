use std::collections::BTreeSet;

use latcount_core::*;

fn forms(cfg: &GenConfig) -> (Vec<CanonicalForm>, GenSummary) {
    let mut v = Vec::new();
    let s = generate(cfg, |l| v.push(canonical_form(l))).unwrap();
    (v, s)
}

#[test]
fn length_bound_keeps_every_lattice() {
    for mode in [Mode::PiecesAndSpecials, Mode::AllViLattices] {
        let mut cfg = GenConfig::new(Family::Distributive, 20, mode);
        cfg.length_bound_pruning = true;
        let (pruned, a) = forms(&cfg);
        cfg.length_bound_pruning = false;
        let (full, b) = forms(&cfg);
        let ps: BTreeSet<_> = pruned.iter().cloned().collect();
        let fs: BTreeSet<_> = full.iter().cloned().collect();
        assert_eq!(ps.len(), pruned.len());
        assert_eq!(ps, fs, "{mode}");
        assert_eq!(a.per_n, b.per_n);
        assert!(
            a.nodes < b.nodes,
            "pruning should cut nodes: {} vs {}",
            a.nodes,
            b.nodes
        );
    }
}

#[test]
fn no_duplicates_without_the_guard() {
    for family in Family::ALL {
        let mut cfg = GenConfig::new(family, 13, Mode::AllViLattices);
        cfg.dedup_guard = false;
        let (v, s) = forms(&cfg);
        let set: BTreeSet<_> = v.iter().cloned().collect();
        assert_eq!(set.len(), v.len(), "{family}");
        assert_eq!(s.duplicates_suppressed, 0);
        cfg.dedup_guard = true;
        assert_eq!(forms(&cfg).1.per_n, s.per_n);
    }
}

#[test]
fn output_is_deterministic() {
    let cfg = GenConfig::new(Family::Modular, 14, Mode::PiecesAndSpecials);
    assert_eq!(forms(&cfg).0, forms(&cfg).0);
}

#[test]
fn checkpoints_partition_the_search() {
    for depth in [0, 1, 3, 6, 9] {
        let mut cfg = GenConfig::new(Family::Modular, 14, Mode::AllViLattices);
        let (whole, total) = forms(&cfg);
        cfg.checkpoint_depth = depth;
        let states = split_checkpoints(&cfg).unwrap();
        if depth == 0 {
            assert_eq!(states.len(), 1);
        }
        let mut seen = BTreeSet::new();
        let mut merged = GenSummary::default();
        for st in &states {
            let text = st.to_text();
            let st = SearchState::parse(&text).unwrap();
            let mut part = Vec::new();
            let s = resume(&cfg, &st, |l| part.push(canonical_form(l))).unwrap();
            merged.merge(&s);
            for f in part {
                assert!(
                    seen.insert(f),
                    "depth {depth}: two states emit the same lattice"
                );
            }
        }
        let whole: BTreeSet<_> = whole.into_iter().collect();
        assert_eq!(seen, whole, "depth {depth}");
        assert_eq!(merged.per_n, total.per_n);
    }
}

#[test]
fn parallel_run_matches_serial() {
    let mut cfg = GenConfig::new(Family::Distributive, 22, Mode::PiecesAndSpecials);
    let (serial, s) = forms(&cfg);
    cfg.checkpoint_depth = 5;
    let (par, p) = generate_parallel(&cfg, 4, canonical_form).unwrap();
    let a: BTreeSet<_> = serial.into_iter().collect();
    let b: BTreeSet<_> = par.into_iter().collect();
    assert_eq!(a, b);
    assert_eq!(s.per_n, p.per_n);
}

#[test]
fn resume_rejects_other_configs() {
    let mut cfg = GenConfig::new(Family::Modular, 10, Mode::AllViLattices);
    cfg.checkpoint_depth = 2;
    let st = &split_checkpoints(&cfg).unwrap()[0];
    let other = GenConfig::new(Family::Modular, 11, Mode::AllViLattices);
    assert!(matches!(
        resume(&other, st, |_| {}),
        Err(GenError::StateMismatch(_))
    ));
    assert!(matches!(
        SearchState::parse("nonsense"),
        Err(GenError::MalformedState(_))
    ));
}

#[test]
fn pieces_mode_emits_pieces_and_specials() {
    for family in [Family::Modular, Family::Distributive] {
        let cfg = GenConfig::new(family, 16, Mode::PiecesAndSpecials);
        let mut all = GenConfig::new(family, 16, Mode::AllViLattices);
        all.length_bound_pruning = cfg.length_bound_pruning;
        let mut want = BTreeSet::new();
        generate(&all, |l| {
            if l.necks().is_empty() {
                want.insert(canonical_form(l));
            }
        })
        .unwrap();
        let mut got = BTreeSet::new();
        generate(&cfg, |l| {
            assert!(l.necks().is_empty());
            assert!(family.contains(l));
            assert!(!matches!(
                classify(l).unwrap(),
                SymmetryClass::Composition(_)
            ));
            got.insert(canonical_form(l));
        })
        .unwrap();
        assert_eq!(got, want, "{family}");
    }
}

#[test]
fn semimodular_levels_are_connected() {
    let cfg = GenConfig::new(Family::Semimodular, 10, Mode::AllViLattices);
    let mut n = 0;
    generate(&cfg, |l| {
        assert!(is_semimodular(l));
        for k in 0..l.rank() {
            assert!(
                consecutive_levels_connected(l, k),
                "levels {k}, {} of {:?}",
                k + 1,
                l.edges()
            );
        }
        // vertical sums keep the property
        let s = l.vertical_sum(&LeveledLattice::boolean(2));
        for k in 0..s.rank() {
            assert!(consecutive_levels_connected(&s, k));
        }
        n += 1;
    })
    .unwrap();
    assert!(n > 40);
}

#[test]
fn oversized_budget_is_refused() {
    let cfg = GenConfig::new(Family::Modular, 65, Mode::PiecesAndSpecials);
    assert!(matches!(
        generate(&cfg, |_| {}),
        Err(GenError::BudgetExceeded(_))
    ));
}
