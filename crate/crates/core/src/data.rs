//! Bundled reference tables and bound certificates.

use crate::bounds::Certificate;
use crate::count::CountTable;
use crate::family::Family;

pub const MODULAR_TABLE: &str = include_str!("../data/modular.csv");
pub const DISTRIBUTIVE_TABLE: &str = include_str!("../data/distributive.csv");
pub const MODULAR_CERT: &str = include_str!("../data/modular_cert.toml");
pub const DISTRIBUTIVE_CERT: &str = include_str!("../data/distributive_cert.toml");
pub const MODULAR_TOTAL_CERT: &str = include_str!("../data/modular_total_cert.toml");
pub const DISTRIBUTIVE_TOTAL_CERT: &str = include_str!("../data/distributive_total_cert.toml");

/// Published counts for `family`: modular up to 35 elements, distributive
/// up to 60. There is no table for semimodular lattices.
pub fn reference_table(family: Family) -> Option<CountTable> {
    let text = match family {
        Family::Modular => MODULAR_TABLE,
        Family::Distributive => DISTRIBUTIVE_TABLE,
        Family::Semimodular => return None,
    };
    Some(CountTable::read_csv(text.as_bytes()).expect("bundled table parses"))
}

/// Per-class and all-lattice certificates for `family`.
pub fn reference_certificates(family: Family) -> Vec<Certificate> {
    let texts: &[&str] = match family {
        Family::Modular => &[MODULAR_CERT, MODULAR_TOTAL_CERT],
        Family::Distributive => &[DISTRIBUTIVE_CERT, DISTRIBUTIVE_TOTAL_CERT],
        Family::Semimodular => &[],
    };
    texts
        .iter()
        .map(|t| t.parse().expect("bundled certificate parses"))
        .collect()
}
