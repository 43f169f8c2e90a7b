//! Exponential lower bounds certified with exact rational arithmetic, and
//! the closed-form Steiner bound for semimodular lattices.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::CompType;
use crate::count::{compose_counts, vertical_sum_totals, Column, CountError, CountTable};
use crate::family::Family;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("window too short: {0}")]
    WindowTooShort(String),
    #[error("bad certificate: {0}")]
    BadCertificate(String),
    #[error("steiner bound needs n >= 100, got {0}")]
    DomainError(usize),
    #[error(transparent)]
    Count(#[from] CountError),
}

/// Parses `"0.002910"`, `"-3"`, `"23122/10000"` and similar strings.
pub fn parse_rational(s: &str) -> Result<BigRational, BoundError> {
    let bad = || BoundError::BadCertificate(format!("`{s}` is not a rational number"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{int}{frac}").parse().map_err(|_| bad())?;
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    let r = BigRational::new(digits, den);
    Ok(if neg { -r } else { r })
}

/// Per-class exponential lower bounds `XX_n >= c_XX * base^n` for
/// `n >= n0`, with the recurrence checked directly on `[n0, n1]` and the
/// induction step relying on the previous `window` values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCert {
    pub family: Family,
    pub c_cf: BigRational,
    pub c_cs: BigRational,
    pub c_cn: BigRational,
    pub base: BigRational,
    pub n0: usize,
    pub n1: usize,
    pub window: usize,
}

/// Bound `f(n) >= c_all * base^n` on all lattices, derived through the
/// vertical-sum recurrence from the per-class counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TotalBoundCert {
    pub family: Family,
    pub c_all: BigRational,
    pub base: BigRational,
    pub n0: usize,
    pub n1: usize,
    pub window: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertFile {
    family: String,
    #[serde(default)]
    c_cf: Option<String>,
    #[serde(default)]
    c_cs: Option<String>,
    #[serde(default)]
    c_cn: Option<String>,
    #[serde(default)]
    c_all: Option<String>,
    base: String,
    n0: usize,
    n1: usize,
    window: usize,
}

/// A parsed certificate file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Classes(BoundCert),
    Total(TotalBoundCert),
}

impl FromStr for Certificate {
    type Err = BoundError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let f: CertFile =
            toml::from_str(s).map_err(|e| BoundError::BadCertificate(e.to_string()))?;
        let family: Family = f.family.parse().map_err(BoundError::BadCertificate)?;
        let base = parse_rational(&f.base)?;
        if base <= BigRational::zero() {
            return Err(BoundError::BadCertificate("base must be positive".into()));
        }
        if f.n1 < f.n0 {
            return Err(BoundError::BadCertificate("n1 < n0".into()));
        }
        match (f.c_cf, f.c_cs, f.c_cn, f.c_all) {
            (Some(a), Some(b), Some(c), None) => Ok(Certificate::Classes(BoundCert {
                family,
                c_cf: parse_rational(&a)?,
                c_cs: parse_rational(&b)?,
                c_cn: parse_rational(&c)?,
                base,
                n0: f.n0,
                n1: f.n1,
                window: f.window,
            })),
            (None, None, None, Some(a)) => Ok(Certificate::Total(TotalBoundCert {
                family,
                c_all: parse_rational(&a)?,
                base,
                n0: f.n0,
                n1: f.n1,
                window: f.window,
            })),
            _ => Err(BoundError::BadCertificate(
                "give either c_cf, c_cs and c_cn, or c_all alone".into(),
            )),
        }
    }
}

fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl BoundCert {
    pub fn to_toml(&self) -> String {
        format!(
            "family = \"{}\"\nc_cf = \"{}\"\nc_cs = \"{}\"\nc_cn = \"{}\"\nbase = \"{}\"\nn0 = {}\nn1 = {}\nwindow = {}\n",
            self.family,
            rational_string(&self.c_cf),
            rational_string(&self.c_cs),
            rational_string(&self.c_cn),
            rational_string(&self.base),
            self.n0,
            self.n1,
            self.window
        )
    }

    fn coefficient(&self, c: CompType) -> &BigRational {
        match c {
            CompType::CF => &self.c_cf,
            CompType::CS => &self.c_cs,
            CompType::CN => &self.c_cn,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(String),
}

impl Verdict {
    pub fn passed(&self) -> bool {
        *self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("PASS"),
            Verdict::Fail(why) => write!(f, "FAIL: {why}"),
        }
    }
}

/// One inequality of the induction step: `lhs >= rhs` is required.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InductionTerm {
    pub label: String,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl InductionTerm {
    pub fn holds(&self) -> bool {
        self.lhs >= self.rhs
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub verdict: Verdict,
    pub induction: Vec<InductionTerm>,
    /// Sizes checked directly.
    pub base_window: (usize, usize),
}

/// Largest size with a nonzero piece count, or 5 if there is none.
fn last_piece_size(t: &CountTable) -> usize {
    (6..=t.max_n())
        .rev()
        .find(|&n| Column::PIECES.iter().any(|&c| !t.value(n, c).is_zero()))
        .unwrap_or(5)
}

fn big(x: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn check_window(n0: usize, n1: usize, window: usize, need: usize) -> Result<(), BoundError> {
    if window < need {
        return Err(BoundError::WindowTooShort(format!(
            "the recurrence reaches back {need} sizes but the window is {window}"
        )));
    }
    if n1 + 1 - n0 < window {
        return Err(BoundError::WindowTooShort(format!(
            "base window [{n0}, {n1}] is shorter than the induction window {window}"
        )));
    }
    Ok(())
}

/// Checks a per-class certificate against piece counts. Piece counts not in
/// the table count as zero.
pub fn verify_lower_bound(
    cert: &BoundCert,
    pieces: &CountTable,
) -> Result<BoundReport, BoundError> {
    let big_n = last_piece_size(pieces);
    // CF_n uses CF_j for j = n - k + 4 with 6 <= k <= N
    check_window(cert.n0, cert.n1, cert.window, big_n.saturating_sub(4))?;
    let table = compose_counts(
        &pieces
            .project(&Column::PIECES)
            .resized(cert.n1.max(pieces.max_n())),
    )?;

    let b = &cert.base;
    let mut verdict = Verdict::Pass;
    let mut power = num_traits::pow(b.clone(), cert.n0);
    'base: for n in cert.n0..=cert.n1 {
        for (class, col) in [
            (CompType::CF, Column::CF),
            (CompType::CS, Column::CS),
            (CompType::CN, Column::CN),
        ] {
            let need = cert.coefficient(class) * &power;
            let have = big(table.value(n, col));
            if have < need {
                verdict = Verdict::Fail(format!(
                    "{}_{n} = {} is below the claimed bound",
                    class.name(),
                    table.value(n, col)
                ));
                break 'base;
            }
        }
        power *= b;
    }

    let v = |k: usize, c: Column| big(pieces.value(k, c));
    let two = BigRational::from_integer(2.into());
    let inv_b = b.recip();
    let (mut s_cf, mut s_cs, mut s_cn) = (
        BigRational::zero(),
        BigRational::zero(),
        BigRational::zero(),
    );
    // weight b^(4-k), starting from k = 6
    let mut w = inv_b.clone() * &inv_b;
    for k in 6..=big_n {
        let (mf, ma, mc, mx, mh) = (
            v(k, Column::MF),
            v(k, Column::MA),
            v(k, Column::MC),
            v(k, Column::MX),
            v(k, Column::MH),
        );
        let (tf, ts) = (v(k, Column::TF), v(k, Column::TS));
        s_cf += &w * (&cert.c_cf * (&two * &mf + &ma + &mh) + &cert.c_cs * (&mf + &ma));
        s_cs += &w * (&cert.c_cf * (&two * &mc + &mx) + &cert.c_cs * (&mc + &mx + &mh));
        s_cn += &w * (&cert.c_cf * (&two * &tf + &ts) + &cert.c_cs * (&tf + &ts));
        w *= &inv_b;
    }
    let induction = vec![
        InductionTerm {
            label: "CF".into(),
            lhs: s_cf,
            rhs: cert.c_cf.clone(),
        },
        InductionTerm {
            label: "CS".into(),
            lhs: s_cs,
            rhs: cert.c_cs.clone(),
        },
        InductionTerm {
            label: "CN".into(),
            lhs: s_cn,
            rhs: cert.c_cn.clone(),
        },
    ];
    if verdict.passed() {
        if let Some(t) = induction.iter().find(|t| !t.holds()) {
            verdict = Verdict::Fail(format!("induction step for {} does not close", t.label));
        }
    }
    Ok(BoundReport {
        verdict,
        induction,
        base_window: (cert.n0, cert.n1),
    })
}

/// Checks an all-lattice certificate. The vi counts used are specials and
/// pieces from the table plus compositions from the recurrence, all zero
/// beyond the table, so they are lower bounds.
pub fn verify_total_bound(
    cert: &TotalBoundCert,
    table: &CountTable,
) -> Result<BoundReport, BoundError> {
    // f(n) draws on f(n - k + 1) for k = 2..=window + 1
    if cert.n0 < 2 {
        return Err(BoundError::BadCertificate("n0 must be at least 2".into()));
    }
    check_window(cert.n0, cert.n1, cert.window, 1)?;
    let mut cols: Vec<Column> = Column::PIECES.to_vec();
    cols.push(Column::Special);
    let nmax = cert.n1.max(table.max_n());
    let t = compose_counts(&table.project(&cols).resized(nmax))?;
    let vi: Vec<BigUint> = (1..=nmax)
        .map(|n| {
            let p: BigUint = cols.iter().map(|&c| t.value(n, c)).sum();
            p + t.value(n, Column::CF) + t.value(n, Column::CS) + t.value(n, Column::CN)
        })
        .collect();
    let f = vertical_sum_totals(&vi);

    let b = &cert.base;
    let mut verdict = Verdict::Pass;
    let mut power = num_traits::pow(b.clone(), cert.n0);
    for n in cert.n0..=cert.n1 {
        if big(f[n - 1].clone()) < &cert.c_all * &power {
            verdict = Verdict::Fail(format!("f({n}) = {} is below the claimed bound", f[n - 1]));
            break;
        }
        power *= b;
    }

    // f(n) >= sum_{k=2}^{window+1} vi(k) c b^(n-k+1) when all those sizes are
    // in the inductive range, so sum vi(k) b^(1-k) >= 1 closes the step
    let inv_b = b.recip();
    let mut w = inv_b.clone();
    let mut s = BigRational::zero();
    for k in 2..=cert.window + 1 {
        if k - 1 < vi.len() && !vi[k - 1].is_zero() {
            s += &w * big(vi[k - 1].clone());
        }
        w *= &inv_b;
    }
    let induction = vec![InductionTerm {
        label: "all".into(),
        lhs: s,
        rhs: BigRational::one(),
    }];
    if verdict.passed() && !induction[0].holds() {
        verdict = Verdict::Fail("induction step does not close".into());
    }
    Ok(BoundReport {
        verdict,
        induction,
        base_window: (cert.n0, cert.n1),
    })
}

/// Whether a Steiner triple system of order `k` exists.
pub fn steiner_admissible(k: usize) -> bool {
    k % 6 == 1 || k % 6 == 3
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteinerBound {
    /// `n ln(0.3286 n^(1/8))`, the natural log of the lattice count bound.
    pub log_bound: f64,
    /// Largest admissible `k` with `k + k(k-1)/6 + 2 <= n`.
    pub k: usize,
}

pub fn steiner_bound(n: usize) -> Result<SteinerBound, BoundError> {
    if n < 100 {
        return Err(BoundError::DomainError(n));
    }
    let fits = |k: usize| k + k * (k - 1) / 6 + 2 <= n;
    let mut k = 1;
    let mut cand = 1;
    while fits(cand) {
        if steiner_admissible(cand) {
            k = cand;
        }
        cand += 1;
    }
    let nf = n as f64;
    Ok(SteinerBound {
        log_bound: nf * (0.3286 * nf.powf(0.125)).ln(),
        k,
    })
}

/// Smallest `n` at which the Steiner bound exceeds one.
pub fn steiner_threshold() -> usize {
    (100..)
        .find(|&n| steiner_bound(n).unwrap().log_bound > 0.0)
        .unwrap()
}

/// Decimal rendering of a nonnegative rational for reports.
pub fn approx(r: &BigRational) -> String {
    let digits = 12;
    if r.is_negative() {
        return format!("-{}", approx(&-r));
    }
    let int = r.to_integer();
    if !int.is_zero() {
        return crate::count::decimal(r, 6);
    }
    // scientific form for small values
    let mut x = r.clone();
    let mut e = 0i32;
    let ten = BigRational::from_integer(10.into());
    while x < BigRational::one() && !x.is_zero() {
        x *= &ten;
        e -= 1;
    }
    format!("{}e{e}", crate::count::decimal(&x, digits.min(6)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(
            parse_rational("0.002910").unwrap(),
            BigRational::new(291.into(), 100000.into())
        );
        assert_eq!(
            parse_rational("23122/10000").unwrap(),
            BigRational::new(11561.into(), 5000.into())
        );
        assert_eq!(
            parse_rational("3").unwrap(),
            BigRational::from_integer(3.into())
        );
        assert!(parse_rational("1e5").is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn steiner() {
        let s = steiner_bound(100).unwrap();
        assert_eq!(s.k, 21);
        assert!(s.log_bound < 0.0);
        assert!(steiner_admissible(19));
        assert!(!steiner_admissible(20));
        assert_eq!(steiner_bound(99), Err(BoundError::DomainError(99)));
        let t = steiner_threshold();
        assert_eq!(t, 7357);
    }

    #[test]
    fn cert_toml() {
        let text = "family = \"modular\"\nc_cf = \"0.002910\"\nc_cs = \"0.000035\"\nc_cn = \"0.002470\"\nbase = \"2.3122\"\nn0 = 50\nn1 = 85\nwindow = 35\n";
        let Certificate::Classes(c) = text.parse().unwrap() else {
            panic!("expected a per-class certificate");
        };
        assert_eq!(c.n0, 50);
        let again: Certificate = c.to_toml().parse().unwrap();
        assert_eq!(again, Certificate::Classes(c));
        assert!(
            "family = \"modular\"\nbase = \"2\"\nn0 = 1\nn1 = 2\nwindow = 1\n"
                .parse::<Certificate>()
                .is_err()
        );
    }
}
