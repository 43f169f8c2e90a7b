use latcount_core::bounds::approx;
use latcount_core::data::{reference_certificates, reference_table};
use latcount_core::*;
use num_rational::BigRational;

fn class_cert(family: Family) -> BoundCert {
    match reference_certificates(family).remove(0) {
        Certificate::Classes(c) => c,
        Certificate::Total(_) => unreachable!(),
    }
}

#[test]
fn reference_certificates_pass() {
    for family in [Family::Modular, Family::Distributive] {
        let table = reference_table(family).unwrap();
        for cert in reference_certificates(family) {
            let r = match &cert {
                Certificate::Classes(c) => verify_lower_bound(c, &table),
                Certificate::Total(c) => verify_total_bound(c, &table),
            }
            .unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{family} {cert:?}");
            for t in &r.induction {
                assert!(
                    t.holds(),
                    "{} {} < {}",
                    t.label,
                    approx(&t.lhs),
                    approx(&t.rhs)
                );
            }
        }
    }
}

#[test]
fn larger_constants_fail() {
    let table = reference_table(Family::Modular).unwrap();
    let mut c = class_cert(Family::Modular);
    c.c_cf = parse_rational("0.0032").unwrap();
    let r = verify_lower_bound(&c, &table).unwrap();
    assert!(!r.verdict.passed());

    let mut c = class_cert(Family::Distributive);
    c.base = parse_rational("1.80").unwrap();
    let r = verify_lower_bound(&c, &reference_table(Family::Distributive).unwrap()).unwrap();
    assert!(!r.verdict.passed());
}

#[test]
fn base_window_failure_is_reported() {
    let table = reference_table(Family::Modular).unwrap();
    let mut c = class_cert(Family::Modular);
    c.c_cn = parse_rational("1").unwrap();
    let r = verify_lower_bound(&c, &table).unwrap();
    let Verdict::Fail(msg) = r.verdict else {
        panic!()
    };
    assert!(msg.contains("CN_50"), "{msg}");
}

#[test]
fn short_windows_are_rejected() {
    let table = reference_table(Family::Modular).unwrap();
    let mut c = class_cert(Family::Modular);
    c.window = 30;
    assert!(matches!(
        verify_lower_bound(&c, &table),
        Err(BoundError::WindowTooShort(_))
    ));
    let mut c = class_cert(Family::Modular);
    c.n1 = 60;
    assert!(matches!(
        verify_lower_bound(&c, &table),
        Err(BoundError::WindowTooShort(_))
    ));
    // fewer data rows shorten the needed window
    let mut c = class_cert(Family::Modular);
    c.window = 26;
    c.n1 = c.n0 + 25;
    c.c_cf = BigRational::from_integer(0.into());
    c.c_cs = BigRational::from_integer(0.into());
    c.c_cn = BigRational::from_integer(0.into());
    assert!(verify_lower_bound(&c, &table.resized(30)).is_ok());
}

#[test]
fn steiner_values() {
    assert_eq!(steiner_bound(100).unwrap().k, 21);
    assert_eq!(steiner_bound(109).unwrap().k, 21);
    assert_eq!(steiner_bound(36).unwrap_err(), BoundError::DomainError(36));
    let t = steiner_threshold();
    assert!(steiner_bound(t).unwrap().log_bound > 0.0);
    assert!(steiner_bound(t - 1).unwrap().log_bound <= 0.0);
}
