//! Reference zonal polynomials up to degree 6, in power sums.
//!
//! Rows are normalised so the coefficient of `s1^f` is 1. At degree 5 only
//! `(5)`, `(4,1)`, `(3,2)` and `(3,1,1)` are carried, though every degree-5
//! character value is.

use crate::partitions::Partition;
use crate::symfunc::{int, Basis, SymPoly};

/// One row: `κ`, its power-sum terms `(λ, coefficient)`, and `χ_{2κ}(1)`.
struct Row {
    kappa: &'static str,
    terms: &'static [(&'static str, i64)],
}

const ROWS: &[Row] = &[
    Row {
        kappa: "1",
        terms: &[("1", 1)],
    },
    Row {
        kappa: "2",
        terms: &[("1,1", 1), ("2", 2)],
    },
    Row {
        kappa: "1,1",
        terms: &[("1,1", 1), ("2", -1)],
    },
    Row {
        kappa: "3",
        terms: &[("1,1,1", 1), ("2,1", 6), ("3", 8)],
    },
    Row {
        kappa: "2,1",
        terms: &[("1,1,1", 1), ("2,1", 1), ("3", -2)],
    },
    Row {
        kappa: "1,1,1",
        terms: &[("1,1,1", 1), ("2,1", -3), ("3", 2)],
    },
    Row {
        kappa: "4",
        terms: &[
            ("1,1,1,1", 1),
            ("2,1,1", 12),
            ("2,2", 12),
            ("3,1", 32),
            ("4", 48),
        ],
    },
    Row {
        kappa: "3,1",
        terms: &[
            ("1,1,1,1", 1),
            ("2,1,1", 5),
            ("2,2", -2),
            ("3,1", 4),
            ("4", -8),
        ],
    },
    Row {
        kappa: "2,2",
        terms: &[
            ("1,1,1,1", 1),
            ("2,1,1", 2),
            ("2,2", 7),
            ("3,1", -8),
            ("4", -2),
        ],
    },
    Row {
        kappa: "2,1,1",
        terms: &[
            ("1,1,1,1", 1),
            ("2,1,1", -1),
            ("2,2", -2),
            ("3,1", -2),
            ("4", 4),
        ],
    },
    Row {
        kappa: "1,1,1,1",
        terms: &[
            ("1,1,1,1", 1),
            ("2,1,1", -6),
            ("2,2", 3),
            ("3,1", 8),
            ("4", -6),
        ],
    },
    Row {
        kappa: "5",
        terms: &[
            ("1,1,1,1,1", 1),
            ("2,1,1,1", 20),
            ("2,2,1", 60),
            ("3,1,1", 80),
            ("3,2", 160),
            ("4,1", 240),
            ("5", 384),
        ],
    },
    Row {
        kappa: "4,1",
        terms: &[
            ("1,1,1,1,1", 1),
            ("2,1,1,1", 11),
            ("2,2,1", 6),
            ("3,1,1", 26),
            ("3,2", -20),
            ("4,1", 24),
            ("5", -48),
        ],
    },
    Row {
        kappa: "3,2",
        terms: &[
            ("1,1,1,1,1", 1),
            ("2,1,1,1", 6),
            ("2,2,1", 11),
            ("3,1,1", -4),
            ("3,2", 20),
            ("4,1", -26),
            ("5", -8),
        ],
    },
    Row {
        kappa: "3,1,1",
        terms: &[
            ("1,1,1,1,1", 1),
            ("2,1,1,1", 3),
            ("2,2,1", -10),
            ("3,1,1", 2),
            ("3,2", -4),
            ("4,1", -8),
            ("5", 16),
        ],
    },
];

/// Column order of the degree-6 reference grid.
const SIX_COLUMNS: [&str; 11] = [
    "1,1,1,1,1,1",
    "2,1,1,1,1",
    "2,2,1,1",
    "3,1,1,1",
    "2,2,2",
    "3,2,1",
    "4,1,1",
    "3,3",
    "4,2",
    "5,1",
    "6",
];

const SIX_ROWS: [(&str, [i64; 11]); 11] = [
    ("6", [1, 30, 180, 160, 120, 960, 720, 640, 1440, 2304, 3840]),
    ("5,1", [1, 19, 48, 72, -12, 80, 192, -64, -144, 192, -384]),
    ("4,2", [1, 12, 27, 16, 30, 24, -18, -8, 108, -144, -48]),
    ("4,1,1", [1, 9, -12, 22, -12, -60, 12, 16, -24, -48, 96]),
    ("3,3", [1, 9, 33, -8, -27, 120, -78, 136, -114, -48, -24]),
    ("3,2,1", [1, 4, 3, -8, -2, 0, -18, -24, -4, 32, 16]),
    ("3,1,1,1", [1, 0, -21, 4, 6, 12, -6, 16, 12, 24, -48]),
    ("2,2,2", [1, 0, 15, -20, 30, -60, 30, 40, -60, 24, 0]),
    ("2,2,1,1", [1, -3, 3, -8, -9, 0, 24, 4, 24, -24, -12]),
    ("2,1,1,1,1", [1, -8, 3, 12, 6, 20, -6, -16, -36, -24, 48]),
    (
        "1,1,1,1,1,1",
        [1, -15, 45, 40, -15, -120, -90, 40, 90, 144, -120],
    ),
];

/// `χ_{2κ}(1)` column, degrees 1 through 6.
const CHI: &[(&str, u64)] = &[
    ("1", 1),
    ("2", 1),
    ("1,1", 2),
    ("3", 1),
    ("2,1", 9),
    ("1,1,1", 5),
    ("4", 1),
    ("3,1", 20),
    ("2,2", 14),
    ("2,1,1", 56),
    ("1,1,1,1", 14),
    ("5", 1),
    ("4,1", 35),
    ("3,2", 90),
    ("3,1,1", 225),
    ("2,2,1", 252),
    ("2,1,1,1", 300),
    ("1,1,1,1,1", 42),
    ("6", 1),
    ("5,1", 54),
    ("4,2", 275),
    ("4,1,1", 616),
    ("3,3", 132),
    ("3,2,1", 2673),
    ("3,1,1,1", 1925),
    ("2,2,2", 462),
    ("2,2,1,1", 2640),
    ("2,1,1,1,1", 1485),
    ("1,1,1,1,1,1", 132),
];

fn parse(s: &str) -> Partition {
    s.parse().expect("golden partitions are well formed")
}

/// The reference power-sum row for `κ`, when the table carries a clean one.
pub fn table_row(kappa: &Partition) -> Option<SymPoly> {
    let degree = kappa.weight();
    if degree == 6 {
        let (_, coeffs) = SIX_ROWS.iter().find(|(k, _)| parse(k) == *kappa)?;
        let terms = SIX_COLUMNS
            .iter()
            .zip(coeffs)
            .map(|(col, &c)| (parse(col), int(c)));
        return Some(SymPoly::from_terms(6, Basis::PowerSum, terms).unwrap());
    }
    let row = ROWS.iter().find(|r| parse(r.kappa) == *kappa)?;
    let terms = row.terms.iter().map(|&(k, c)| (parse(k), int(c)));
    Some(SymPoly::from_terms(degree, Basis::PowerSum, terms).unwrap())
}

/// Partitions of `f` with a clean reference row, in table order.
pub fn tabulated(f: usize) -> Vec<Partition> {
    if f == 6 {
        return SIX_ROWS.iter().map(|(k, _)| parse(k)).collect();
    }
    ROWS.iter()
        .map(|r| parse(r.kappa))
        .filter(|k| k.weight() == f)
        .collect()
}

/// Reference `χ_{2κ}(1)`, degrees 1–6.
pub fn table_chi(kappa: &Partition) -> Option<u64> {
    CHI.iter()
        .find(|(k, _)| parse(k) == *kappa)
        .map(|&(_, v)| v)
}
