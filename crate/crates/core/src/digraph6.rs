//! digraph6 records of cover digraphs, and sorted listing files with a
//! digest manifest.
//!
//! A lattice is written in canonical labeling order with levels bottom-up,
//! so isomorphic lattices give identical records. Bit `(i, j)` of the
//! adjacency matrix is set when `i` is covered by `j`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::canon::canonical_lattice;
use crate::lattice::LeveledLattice;

pub const HEADER: &str = ">>digraph6<<";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Digraph6Error {
    #[error("malformed record: {0}")]
    MalformedRecord(String),
    #[error("record is not a graded lattice: {0}")]
    NotALattice(String),
    #[error("duplicate record `{0}` in listing")]
    DuplicateRecord(String),
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Digraph6Error {
    fn from(e: std::io::Error) -> Self {
        Digraph6Error::Io(e.to_string())
    }
}

fn malformed(msg: impl Into<String>) -> Digraph6Error {
    Digraph6Error::MalformedRecord(msg.into())
}

/// One digraph6 record, without header or line terminator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digraph6Record(String);

impl Digraph6Record {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.0.as_bytes()
    }
}

impl fmt::Display for Digraph6Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A directed graph on `0..n` with edges `(from, to)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn of_lattice(l: &LeveledLattice) -> Digraph {
        let mut edges = l.edges();
        edges.sort_unstable();
        Digraph { n: l.n(), edges }
    }

    /// Rebuilds the lattice whose cover digraph this is. Vertices are
    /// renumbered bottom-up by rank, keeping their relative order inside a
    /// level.
    pub fn to_lattice(&self) -> Result<LeveledLattice, Digraph6Error> {
        let n = self.n;
        if n == 0 {
            return Err(Digraph6Error::NotALattice("empty graph".into()));
        }
        let mut indeg = vec![0usize; n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            out[a].push(b);
            indeg[b] += 1;
        }
        let sources: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        if sources.len() != 1 {
            return Err(Digraph6Error::NotALattice(format!(
                "{} minimal elements",
                sources.len()
            )));
        }
        // rank by breadth-first search from the bottom; grading means every
        // edge then climbs exactly one rank
        let mut rank = vec![usize::MAX; n];
        rank[sources[0]] = 0;
        let mut queue = std::collections::VecDeque::from([sources[0]]);
        while let Some(v) = queue.pop_front() {
            for &w in &out[v] {
                if rank[w] == usize::MAX {
                    rank[w] = rank[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        if rank.contains(&usize::MAX) {
            return Err(Digraph6Error::NotALattice("unreachable vertex".into()));
        }
        if let Some(&(a, b)) = self.edges.iter().find(|&&(a, b)| rank[b] != rank[a] + 1) {
            return Err(Digraph6Error::NotALattice(format!(
                "edge {a}->{b} skips a rank or points down"
            )));
        }
        let r = *rank.iter().max().unwrap();
        let mut sizes = vec![0; r + 1];
        for &k in &rank {
            sizes[k] += 1;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (rank[v], v));
        let mut new_id = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            new_id[v] = i;
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| (new_id[a], new_id[b]))
            .collect();
        LeveledLattice::from_edges(sizes, &edges)
            .map_err(|e| Digraph6Error::NotALattice(e.to_string()))
    }
}

fn push_size(out: &mut String, n: usize) {
    let six = |k: usize| ((((n >> k) & 63) as u8) + 63) as char;
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else if n <= 258047 {
        out.push('~');
        for k in [12, 6, 0] {
            out.push(six(k));
        }
    } else {
        assert!(n <= 68719476735, "graph too large for digraph6");
        out.push_str("~~");
        for k in [30, 24, 18, 12, 6, 0] {
            out.push(six(k));
        }
    }
}

pub fn encode_digraph(g: &Digraph) -> Digraph6Record {
    let n = g.n;
    let mut bits = vec![0u8; (n * n).div_ceil(6)];
    for &(i, j) in &g.edges {
        let p = i * n + j;
        bits[p / 6] |= 32 >> (p % 6);
    }
    let mut s = String::with_capacity(2 + bits.len());
    s.push('&');
    push_size(&mut s, n);
    s.extend(bits.into_iter().map(|b| (b + 63) as char));
    Digraph6Record(s)
}

/// Record of the canonical form of `l`.
pub fn encode_digraph6(l: &LeveledLattice) -> Digraph6Record {
    encode_digraph(&Digraph::of_lattice(&canonical_lattice(l)))
}

fn six_bits(c: u8) -> Result<usize, Digraph6Error> {
    if (63..=126).contains(&c) {
        Ok((c - 63) as usize)
    } else {
        Err(malformed(format!(
            "byte {c:#04x} outside the printable range"
        )))
    }
}

pub fn decode_digraph6(record: &str) -> Result<Digraph, Digraph6Error> {
    let s = record.trim_end_matches(['\n', '\r']);
    let s = s.strip_prefix(HEADER).unwrap_or(s).as_bytes();
    let Some((&b'&', rest)) = s.split_first() else {
        return Err(malformed("missing '&' prefix"));
    };
    let (n, payload) = match rest {
        [b'~', b'~', tail @ ..] => {
            if tail.len() < 6 {
                return Err(malformed("truncated size"));
            }
            let mut n = 0;
            for &c in &tail[..6] {
                n = (n << 6) | six_bits(c)?;
            }
            (n, &tail[6..])
        }
        [b'~', tail @ ..] => {
            if tail.len() < 3 {
                return Err(malformed("truncated size"));
            }
            let mut n = 0;
            for &c in &tail[..3] {
                n = (n << 6) | six_bits(c)?;
            }
            (n, &tail[3..])
        }
        [c, tail @ ..] => (six_bits(*c)?, tail),
        [] => return Err(malformed("missing size")),
    };
    let nbits = n.checked_mul(n).ok_or_else(|| malformed("size overflow"))?;
    let want = nbits.div_ceil(6);
    if payload.len() != want {
        return Err(malformed(format!(
            "payload has {} bytes, expected {want}",
            payload.len()
        )));
    }
    let mut edges = Vec::new();
    for (k, &c) in payload.iter().enumerate() {
        let v = six_bits(c)?;
        for b in 0..6 {
            if v & (32 >> b) != 0 {
                let p = 6 * k + b;
                if p >= nbits {
                    return Err(malformed("nonzero padding bits"));
                }
                edges.push((p / n, p % n));
            }
        }
    }
    Ok(Digraph { n, edges })
}

pub fn decode_lattice(record: &str) -> Result<LeveledLattice, Digraph6Error> {
    decode_digraph6(record)?.to_lattice()
}

/// Sidecar describing a listing file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub records: usize,
    /// Lowercase hex SHA-256 of the listing file bytes.
    pub sha256: String,
    /// Free-form provenance such as the generator configuration.
    pub info: BTreeMap<String, String>,
}

impl Manifest {
    pub fn for_bytes(listing: &[u8], records: usize) -> Manifest {
        Manifest {
            records,
            sha256: hex::encode(Sha256::digest(listing)),
            info: BTreeMap::new(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("records {}\nsha256 {}\n", self.records, self.sha256);
        for (k, v) in &self.info {
            s += &format!("{k} {v}\n");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Manifest, Digraph6Error> {
        let bad = |m: &str| Digraph6Error::Manifest(m.to_string());
        let mut records = None;
        let mut sha = None;
        let mut info = BTreeMap::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (k, v) = line
                .split_once(' ')
                .ok_or_else(|| bad("line without a value"))?;
            match k {
                "records" => records = Some(v.trim().parse().map_err(|_| bad("bad record count"))?),
                "sha256" => sha = Some(v.trim().to_string()),
                _ => {
                    info.insert(k.to_string(), v.trim().to_string());
                }
            }
        }
        Ok(Manifest {
            records: records.ok_or_else(|| bad("missing record count"))?,
            sha256: sha.ok_or_else(|| bad("missing digest"))?,
            info,
        })
    }

    /// Checks a listing against this manifest.
    pub fn check(&self, listing: &[u8]) -> Result<(), Digraph6Error> {
        let got = hex::encode(Sha256::digest(listing));
        if got != self.sha256 {
            return Err(Digraph6Error::Manifest(format!(
                "digest mismatch: listing has {got}"
            )));
        }
        let lines = listing
            .split(|&b| b == b'\n')
            .filter(|l| !l.is_empty())
            .count();
        if lines != self.records {
            return Err(Digraph6Error::Manifest(format!(
                "{lines} records, manifest says {}",
                self.records
            )));
        }
        Ok(())
    }
}

/// Sorts records into listing order. Duplicates are an error.
pub fn sort_records(
    mut records: Vec<Digraph6Record>,
) -> Result<Vec<Digraph6Record>, Digraph6Error> {
    records.sort_unstable();
    if let Some(w) = records.windows(2).find(|w| w[0] == w[1]) {
        return Err(Digraph6Error::DuplicateRecord(w[0].to_string()));
    }
    Ok(records)
}

/// Writes sorted records one per line and returns the matching manifest.
pub fn write_listing<W: Write>(
    records: Vec<Digraph6Record>,
    mut w: W,
) -> Result<Manifest, Digraph6Error> {
    let records = sort_records(records)?;
    let mut bytes = Vec::with_capacity(records.iter().map(|r| r.0.len() + 1).sum());
    for r in &records {
        bytes.extend_from_slice(r.as_bytes());
        bytes.push(b'\n');
    }
    w.write_all(&bytes)?;
    Ok(Manifest::for_bytes(&bytes, records.len()))
}

/// Reads lattices from a listing. Blank lines and header-only lines are
/// skipped.
pub fn read_listing<R: BufRead>(r: R) -> Result<Vec<LeveledLattice>, Digraph6Error> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t == HEADER {
            continue;
        }
        out.push(decode_lattice(t).map_err(|e| match e {
            Digraph6Error::MalformedRecord(m) => malformed(format!("line {}: {m}", i + 1)),
            Digraph6Error::NotALattice(m) => {
                Digraph6Error::NotALattice(format!("line {}: {m}", i + 1))
            }
            other => other,
        })?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::are_isomorphic;

    #[test]
    fn two_chain() {
        let r = encode_digraph6(&LeveledLattice::chain(2));
        assert_eq!(r.as_str(), "&AO");
        assert_eq!(
            decode_digraph6("&AO").unwrap(),
            Digraph {
                n: 2,
                edges: vec![(0, 1)]
            }
        );
        assert_eq!(decode_digraph6(">>digraph6<<&AO\n").unwrap().n, 2);
    }

    #[test]
    fn malformed() {
        for bad in ["", "AO", "&", "&A", "&AOO", "&AP", "&A\x10"] {
            assert!(
                matches!(decode_digraph6(bad), Err(Digraph6Error::MalformedRecord(_))),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn long_sizes() {
        for n in [62, 63, 100, 258047, 258048] {
            let mut s = String::new();
            push_size(&mut s, n);
            assert_eq!(
                s.len(),
                if n <= 62 {
                    1
                } else if n <= 258047 {
                    4
                } else {
                    8
                }
            );
        }
        let g = Digraph {
            n: 70,
            edges: vec![(0, 69), (3, 5)],
        };
        assert_eq!(decode_digraph6(encode_digraph(&g).as_str()).unwrap(), g);
    }

    #[test]
    fn lattice_round_trip() {
        let b = LeveledLattice::boolean(4);
        let back = decode_lattice(encode_digraph6(&b).as_str()).unwrap();
        assert!(are_isomorphic(&b, &back));
        assert_eq!(encode_digraph6(&back), encode_digraph6(&b));
        assert!(decode_lattice("&BOo").is_err());
    }

    #[test]
    fn listing_and_manifest() {
        let recs = vec![
            encode_digraph6(&LeveledLattice::boolean(3)),
            encode_digraph6(&LeveledLattice::chain(2)),
        ];
        let mut buf = Vec::new();
        let m = write_listing(recs.clone(), &mut buf).unwrap();
        assert_eq!(m.records, 2);
        m.check(&buf).unwrap();
        assert_eq!(Manifest::parse(&m.to_text()).unwrap(), m);
        assert_eq!(read_listing(&buf[..]).unwrap().len(), 2);
        buf.pop();
        assert!(m.check(&buf).is_err());
        let dup = vec![recs[0].clone(), recs[0].clone()];
        assert!(matches!(
            write_listing(dup, Vec::new()),
            Err(Digraph6Error::DuplicateRecord(_))
        ));
    }
}
