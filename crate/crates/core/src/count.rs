//! Count tables and the Cartesian counting recurrences.

use std::io::{Read, Write};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::classify::{CompType, PieceType, SymmetryClass};

/// Columns of a count table, in file order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Column {
    MF,
    MA,
    MC,
    MX,
    MH,
    BF,
    BS,
    TF,
    TS,
    Special,
    CF,
    CS,
    CN,
    Pieces,
    Compositions,
    Vi,
    All,
}

impl Column {
    pub const ALL: [Column; 17] = [
        Column::MF,
        Column::MA,
        Column::MC,
        Column::MX,
        Column::MH,
        Column::BF,
        Column::BS,
        Column::TF,
        Column::TS,
        Column::Special,
        Column::CF,
        Column::CS,
        Column::CN,
        Column::Pieces,
        Column::Compositions,
        Column::Vi,
        Column::All,
    ];

    pub const PIECES: [Column; 9] = [
        Column::MF,
        Column::MA,
        Column::MC,
        Column::MX,
        Column::MH,
        Column::BF,
        Column::BS,
        Column::TF,
        Column::TS,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::MF => "MF",
            Column::MA => "MA",
            Column::MC => "MC",
            Column::MX => "MX",
            Column::MH => "MH",
            Column::BF => "BF",
            Column::BS => "BS",
            Column::TF => "TF",
            Column::TS => "TS",
            Column::Special => "special",
            Column::CF => "CF",
            Column::CS => "CS",
            Column::CN => "CN",
            Column::Pieces => "pieces",
            Column::Compositions => "compositions",
            Column::Vi => "vi",
            Column::All => "all",
        }
    }

    fn index(self) -> usize {
        self as usize
    }

    pub fn of_class(c: SymmetryClass) -> Column {
        match c {
            SymmetryClass::Special => Column::Special,
            SymmetryClass::Piece(p) => {
                Column::PIECES[PieceType::ALL.iter().position(|&q| q == p).unwrap()]
            }
            SymmetryClass::Composition(CompType::CF) => Column::CF,
            SymmetryClass::Composition(CompType::CS) => Column::CS,
            SymmetryClass::Composition(CompType::CN) => Column::CN,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),
    #[error("malformed table: {0}")]
    Malformed(String),
    #[error("i/o error: {0}")]
    Io(String),
}

type Row = [Option<BigUint>; 17];

fn empty_row() -> Row {
    std::array::from_fn(|_| None)
}

/// Per-size counts by class; `None` marks an unknown cell.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CountTable {
    rows: Vec<Row>,
}

impl CountTable {
    /// A table for sizes `1..=max_n` with every cell unknown.
    pub fn new(max_n: usize) -> Self {
        CountTable {
            rows: (0..max_n).map(|_| empty_row()).collect(),
        }
    }

    /// A table for sizes `1..=max_n` with every cell zero.
    pub fn zeros(max_n: usize) -> Self {
        CountTable {
            rows: (0..max_n)
                .map(|_| std::array::from_fn(|_| Some(BigUint::zero())))
                .collect(),
        }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, n: usize, c: Column) -> Option<&BigUint> {
        self.rows.get(n.wrapping_sub(1))?[c.index()].as_ref()
    }

    /// The cell value, with unknown and out-of-range cells read as zero.
    pub fn value(&self, n: usize, c: Column) -> BigUint {
        self.get(n, c).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, n: usize, c: Column, v: BigUint) {
        self.ensure(n);
        self.rows[n - 1][c.index()] = Some(v);
    }

    pub fn clear(&mut self, n: usize, c: Column) {
        if n >= 1 && n <= self.rows.len() {
            self.rows[n - 1][c.index()] = None;
        }
    }

    /// Grows the table to at least `n` rows with unknown cells.
    pub fn ensure(&mut self, n: usize) {
        while self.rows.len() < n {
            self.rows.push(empty_row());
        }
    }

    /// Adds one lattice of size `n` and class `class`. Class cells of the
    /// row become known (zero) on first touch.
    pub fn add_class(&mut self, n: usize, class: SymmetryClass) {
        self.ensure(n);
        let row = &mut self.rows[n - 1];
        for c in Column::PIECES
            .iter()
            .chain(&[Column::Special, Column::CF, Column::CS, Column::CN])
        {
            row[c.index()].get_or_insert_with(BigUint::zero);
        }
        *row[Column::of_class(class).index()].as_mut().unwrap() += 1u32;
    }

    /// Marks the piece and special cells of every row up to `max_n` as
    /// known, zero where nothing was counted.
    pub fn fill_classes(&mut self, max_n: usize, with_compositions: bool) {
        self.ensure(max_n);
        for row in &mut self.rows[..max_n] {
            for c in Column::PIECES.iter().chain(&[Column::Special]) {
                row[c.index()].get_or_insert_with(BigUint::zero);
            }
            if with_compositions {
                for c in [Column::CF, Column::CS, Column::CN] {
                    row[c.index()].get_or_insert_with(BigUint::zero);
                }
            }
        }
    }

    /// Copy truncated (or extended with unknown rows) to `max_n` rows.
    pub fn resized(&self, max_n: usize) -> CountTable {
        let mut t = self.clone();
        t.rows.truncate(max_n);
        t.ensure(max_n);
        t
    }

    /// Copy keeping only the given columns.
    pub fn project(&self, cols: &[Column]) -> CountTable {
        let mut t = CountTable::new(self.max_n());
        for n in 1..=self.max_n() {
            for &c in cols {
                if let Some(v) = self.get(n, c) {
                    t.set(n, c, v.clone());
                }
            }
        }
        t
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<CountTable, CountError> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = rdr
            .headers()
            .map_err(|e| CountError::Malformed(e.to_string()))?
            .clone();
        if headers.get(0) != Some("n") {
            return Err(CountError::Malformed("first column must be `n`".into()));
        }
        let mut cols = Vec::new();
        for h in headers.iter().skip(1) {
            let c = Column::ALL
                .iter()
                .find(|c| c.name() == h)
                .ok_or_else(|| CountError::Malformed(format!("unknown column `{h}`")))?;
            cols.push(*c);
        }
        let mut table = CountTable::default();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| CountError::Malformed(e.to_string()))?;
            let n: usize = rec
                .get(0)
                .and_then(|s| s.parse().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(|| CountError::Malformed(format!("row {}: bad size", line + 2)))?;
            table.ensure(n);
            for (c, cell) in cols.iter().zip(rec.iter().skip(1)) {
                if cell.is_empty() {
                    continue;
                }
                let v: BigUint = cell.parse().map_err(|_| {
                    CountError::Malformed(format!(
                        "row {}: bad count `{cell}` in {}",
                        line + 2,
                        c.name()
                    ))
                })?;
                table.set(n, *c, v);
            }
        }
        Ok(table)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), CountError> {
        let io = |e: csv::Error| CountError::Io(e.to_string());
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["n"];
        header.extend(Column::ALL.iter().map(|c| c.name()));
        w.write_record(&header).map_err(io)?;
        for n in 1..=self.max_n() {
            let mut rec = vec![n.to_string()];
            for c in Column::ALL {
                rec.push(self.get(n, c).map(|v| v.to_string()).unwrap_or_default());
            }
            w.write_record(&rec).map_err(io)?;
        }
        w.flush().map_err(|e| CountError::Io(e.to_string()))
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is ascii")
    }

    /// First cell known in `expected` that is missing or different here,
    /// as `(n, column, expected, found)`.
    pub fn first_mismatch(
        &self,
        expected: &CountTable,
    ) -> Option<(usize, Column, BigUint, Option<BigUint>)> {
        for n in 1..=expected.max_n() {
            for c in Column::ALL {
                if let Some(e) = expected.get(n, c) {
                    let found = self.get(n, c);
                    if found != Some(e) {
                        return Some((n, c, e.clone(), found.cloned()));
                    }
                }
            }
        }
        None
    }
}

fn check_small_pieces(t: &CountTable) -> Result<(), CountError> {
    for n in 1..6.min(t.max_n() + 1) {
        for c in Column::PIECES {
            if t.get(n, c).is_some_and(|v| !v.is_zero()) {
                return Err(CountError::InconsistentInput(format!(
                    "{} pieces of size {n}; pieces have at least 6 elements",
                    c.name()
                )));
            }
        }
    }
    Ok(())
}

/// Fills CF, CS and CN for every size of `pieces` from the piece counts
/// (unknown cells count as zero, which gives lower bounds).
pub fn compose_counts(pieces: &CountTable) -> Result<CountTable, CountError> {
    check_small_pieces(pieces)?;
    let nmax = pieces.max_n();
    let mut t = pieces.clone();
    let v = |t: &CountTable, n: usize, c: Column| t.value(n, c);
    for n in 1..=nmax {
        let (mut cf, mut cs, mut cn) = (BigUint::zero(), BigUint::zero(), BigUint::zero());
        for j in 6..=n.saturating_sub(2) {
            let k = n - j + 4;
            let lf = v(&t, j, Column::CF)
                + v(&t, j, Column::BF)
                + v(&t, j, Column::MF)
                + v(&t, j, Column::MA);
            let ls = v(&t, j, Column::CS)
                + v(&t, j, Column::BS)
                + v(&t, j, Column::MC)
                + v(&t, j, Column::MX)
                + v(&t, j, Column::MH);
            if lf.is_zero() && ls.is_zero() {
                continue;
            }
            let (mf, ma, mc, mx, mh) = (
                v(&t, k, Column::MF),
                v(&t, k, Column::MA),
                v(&t, k, Column::MC),
                v(&t, k, Column::MX),
                v(&t, k, Column::MH),
            );
            let (tf, ts) = (v(&t, k, Column::TF), v(&t, k, Column::TS));
            cf += &lf * (&mf * 2u32 + &ma + &mh) + &ls * (&mf + &ma);
            cs += &lf * (&mc * 2u32 + &mx) + &ls * (&mc + &mx + &mh);
            cn += &lf * (&tf * 2u32 + &ts) + &ls * (&tf + &ts);
        }
        t.set(n, Column::CF, cf);
        t.set(n, Column::CS, cs);
        t.set(n, Column::CN, cn);
    }
    Ok(t)
}

/// All-lattice counts from vi counts by vertical sums: `f(1) = 1` and
/// `f(n) = sum_{k=2..n} vi(k) f(n-k+1)`. Index `i` holds size `i + 1`.
pub fn vertical_sum_totals(vi: &[BigUint]) -> Vec<BigUint> {
    let mut f: Vec<BigUint> = Vec::with_capacity(vi.len());
    for n in 1..=vi.len() {
        if n == 1 {
            f.push(BigUint::one());
            continue;
        }
        let mut s = BigUint::zero();
        for k in 2..=n {
            let a = &vi[k - 1];
            if !a.is_zero() {
                s += a * &f[n - k];
            }
        }
        f.push(s);
    }
    f
}

/// Fills pieces, compositions, vi and all from the class columns (unknown
/// cells count as zero) after checking the dual-pair equalities.
pub fn aggregate(table: &CountTable) -> Result<CountTable, CountError> {
    let mut t = table.clone();
    for n in 1..=t.max_n() {
        for (a, b) in [
            (Column::MA, Column::MC),
            (Column::BF, Column::TF),
            (Column::BS, Column::TS),
        ] {
            if t.value(n, a) != t.value(n, b) {
                return Err(CountError::InconsistentInput(format!(
                    "n={n}: {}={} but {}={}",
                    a.name(),
                    t.value(n, a),
                    b.name(),
                    t.value(n, b)
                )));
            }
        }
        let pieces: BigUint = Column::PIECES.iter().map(|&c| t.value(n, c)).sum();
        let comps = t.value(n, Column::CF) + t.value(n, Column::CS) + t.value(n, Column::CN);
        let vi = t.value(n, Column::Special) + &pieces + &comps;
        t.set(n, Column::Pieces, pieces);
        t.set(n, Column::Compositions, comps);
        t.set(n, Column::Vi, vi);
    }
    let vi: Vec<BigUint> = (1..=t.max_n()).map(|n| t.value(n, Column::Vi)).collect();
    for (i, f) in vertical_sum_totals(&vi).into_iter().enumerate() {
        t.set(i + 1, Column::All, f);
    }
    Ok(t)
}

/// `aggregate(compose_counts(pieces))`.
pub fn complete_table(pieces: &CountTable) -> Result<CountTable, CountError> {
    aggregate(&compose_counts(pieces)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioRow {
    pub n: usize,
    /// `vi(n) / vi(n-1)`, absent when `vi(n-1) = 0`.
    pub vi: Option<BigRational>,
    /// The same ratio with compositions left out.
    pub vi_excl_compositions: Option<BigRational>,
}

fn ratio(a: BigUint, b: BigUint) -> Option<BigRational> {
    if b.is_zero() {
        None
    } else {
        Some(BigRational::new(BigInt::from(a), BigInt::from(b)))
    }
}

/// Successive ratios of the vi counts, from the second row on.
pub fn growth_ratios(table: &CountTable) -> Vec<RatioRow> {
    let excl = |n: usize| {
        let vi = table.value(n, Column::Vi);
        let c = table.value(n, Column::Compositions);
        if vi >= c {
            vi - c
        } else {
            BigUint::zero()
        }
    };
    (2..=table.max_n())
        .map(|n| RatioRow {
            n,
            vi: ratio(table.value(n, Column::Vi), table.value(n - 1, Column::Vi)),
            vi_excl_compositions: ratio(excl(n), excl(n - 1)),
        })
        .collect()
}

/// Decimal rendering with `digits` fractional digits, rounding halves up.
pub fn decimal(r: &BigRational, digits: u32) -> String {
    let scale = BigInt::from(10u32).pow(digits);
    let neg = r.numer() < &BigInt::zero();
    let num = r.numer().magnitude() * scale.magnitude() * 2u32 + r.denom().magnitude();
    let scaled = num / (r.denom().magnitude() * 2u32);
    let s = scaled.to_string();
    let d = digits as usize;
    let padded = if s.len() <= d {
        format!("{}{}", "0".repeat(d + 1 - s.len()), s)
    } else {
        s
    };
    let (int, frac) = padded.split_at(padded.len() - d);
    let sign = if neg && !scaled.is_zero() { "-" } else { "" };
    if d == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

pub fn write_ratios_csv<W: Write>(rows: &[RatioRow], writer: W) -> Result<(), CountError> {
    let io = |e: csv::Error| CountError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["n", "ratio_vi", "ratio_vi_excl_compositions"])
        .map_err(io)?;
    for r in rows {
        let cell = |x: &Option<BigRational>| x.as_ref().map(|v| decimal(v, 6)).unwrap_or_default();
        w.write_record([r.n.to_string(), cell(&r.vi), cell(&r.vi_excl_compositions)])
            .map_err(io)?;
    }
    w.flush().map_err(|e| CountError::Io(e.to_string()))
}
