use latcount_core::*;

#[test]
fn modular_two_sums() {
    let r = two_sum_property(Family::Modular, 13).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.pairs > 100, "{}", r.pairs);
}

#[test]
fn distributive_two_sums() {
    let r = two_sum_property(Family::Distributive, 20).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.pairs > 100, "{}", r.pairs);
}

#[test]
fn semimodular_two_sums() {
    let r = two_sum_property(Family::Semimodular, 11).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
}
