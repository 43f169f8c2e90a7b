use latcount_core::data::reference_table;
use latcount_core::*;
use num_bigint::BigUint;

fn direct_pieces(family: Family, max_n: usize) -> CountTable {
    let cfg = GenConfig::new(family, max_n, Mode::PiecesAndSpecials);
    let mut t = CountTable::new(max_n);
    generate(&cfg, |l| t.add_class(l.n(), classify(l).unwrap())).unwrap();
    t.fill_classes(max_n, false);
    let mut cols = Column::PIECES.to_vec();
    cols.push(Column::Special);
    t.project(&cols)
}

#[test]
fn reference_tables_are_self_consistent() {
    for family in [Family::Modular, Family::Distributive] {
        let golden = reference_table(family).unwrap();
        let mut cols = Column::PIECES.to_vec();
        cols.push(Column::Special);
        let rebuilt = complete_table(&golden.project(&cols)).unwrap();
        assert_eq!(compare_tables(&rebuilt, &golden), Verdict::Pass, "{family}");
        assert_eq!(rebuilt, golden);
    }
}

#[test]
fn spot_values() {
    let m = reference_table(Family::Modular).unwrap();
    assert_eq!(m.value(20, Column::Vi), BigUint::from(88622u32));
    assert_eq!(m.value(20, Column::All), BigUint::from(601991u32));
    let d = reference_table(Family::Distributive).unwrap();
    assert_eq!(d.value(30, Column::Vi), BigUint::from(172104u32));
    assert_eq!(d.value(30, Column::All), BigUint::from(8186962u32));
}

#[test]
fn modular_generation_reproduces_reference() {
    let t = complete_table(&direct_pieces(Family::Modular, 16)).unwrap();
    let golden = reference_table(Family::Modular).unwrap().resized(16);
    assert_eq!(compare_tables(&t, &golden), Verdict::Pass);
}

#[test]
fn distributive_generation_reproduces_reference() {
    let t = complete_table(&direct_pieces(Family::Distributive, 24)).unwrap();
    let golden = reference_table(Family::Distributive).unwrap().resized(24);
    assert_eq!(compare_tables(&t, &golden), Verdict::Pass);
}

#[test]
fn mismatch_is_reported() {
    let golden = reference_table(Family::Modular).unwrap();
    let mut bad = golden.clone();
    bad.set(12, Column::MX, bad.value(12, Column::MX) + 1u32);
    match compare_tables(&bad, &golden) {
        Verdict::Fail(msg) => assert!(msg.contains("n=12 MX"), "{msg}"),
        Verdict::Pass => panic!("corruption not detected"),
    }
}

#[test]
fn csv_round_trip() {
    let golden = reference_table(Family::Distributive).unwrap();
    let text = golden.to_csv_string();
    assert_eq!(CountTable::read_csv(text.as_bytes()).unwrap(), golden);
    let mut partial = golden.project(&Column::PIECES);
    partial.clear(7, Column::MF);
    let text = partial.to_csv_string();
    assert_eq!(CountTable::read_csv(text.as_bytes()).unwrap(), partial);
}

#[test]
fn ratios_of_reference() {
    let rows = growth_ratios(&reference_table(Family::Modular).unwrap());
    let r16 = rows.iter().find(|r| r.n == 16).unwrap();
    assert_eq!(decimal(r16.vi.as_ref().unwrap(), 6), "2.311209");
    let mut out = Vec::new();
    write_ratios_csv(&rows, &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert!(text.starts_with("n,ratio_vi,ratio_vi_excl_compositions\n"));
    assert!(text.contains("\n16,2.311209,"));
}

#[test]
fn cross_check_catches_corruption() {
    let direct = direct_counts(Family::Distributive, 18).unwrap();
    assert_eq!(cross_check_tables(&direct, &direct).unwrap(), Verdict::Pass);
    let mut bad = direct.clone();
    bad.set(
        10,
        Column::MF,
        bad.value(10, Column::MF) ^ BigUint::from(1u32),
    );
    assert!(!cross_check_tables(&direct, &bad).unwrap().passed());
}

#[test]
fn modular_cross_check() {
    assert_eq!(cross_check(Family::Modular, 14).unwrap(), Verdict::Pass);
}
