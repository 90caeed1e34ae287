use std::io::Write;
use std::path::Path;

use super::{CmdResult, Failure, TableDoc, EXIT_FAILED, EXIT_OK, MAX_DEGREE};
use crate::golden::table_chi;
use crate::partitions::Partition;
use crate::symfunc::term_label;
use crate::zonal::{
    check_trace_identity_for, chi_doubled, golden_mismatches, non_natural_coefficients,
    normalization_violations, triangularity_violations, z_top_check_for, zonal_table, ZonalTable,
};
use crate::Basis;

/// `N`, `A..B` or `A..=B`, both ends inclusive.
pub(super) fn parse_degree_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::usage(format!("cannot read degree range {s:?}"));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
        None => (s, s),
    };
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    if lo == 0 || lo > hi || hi > MAX_DEGREE {
        return Err(Failure::usage(format!(
            "degree range must lie within 1..{MAX_DEGREE} and be nonempty, got {s:?}"
        )));
    }
    Ok((lo, hi))
}

enum Status {
    Pass,
    Fail(Vec<String>),
    Skip(&'static str),
    Warn(Vec<String>),
}

fn status_from(details: Vec<String>) -> Status {
    if details.is_empty() {
        Status::Pass
    } else {
        Status::Fail(details)
    }
}

fn checks(
    table: &ZonalTable,
    doc: Option<&TableDoc>,
) -> crate::Result<Vec<(&'static str, Status)>> {
    let f = table.degree();
    let mut out = Vec::new();

    let golden = if crate::golden::tabulated(f).is_empty() {
        Status::Skip("no reference rows")
    } else {
        status_from(
            golden_mismatches(table)?
                .into_iter()
                .map(|m| match m.found {
                    Some(found) => {
                        format!("({}): expected {}, found {}", m.kappa, m.expected, found)
                    }
                    None => format!("({}): expected {}, row missing", m.kappa, m.expected),
                })
                .collect(),
        )
    };
    out.push(("golden", golden));

    let mut chi = Vec::new();
    for kappa in table.partitions() {
        let computed = chi_doubled(kappa);
        if let Some(reference) = table_chi(kappa) {
            if computed != reference.into() {
                chi.push(format!(
                    "({kappa}): reference {reference}, hook lengths give {computed}"
                ));
            }
        }
        if let Some(row) = doc.and_then(|d| d.rows.iter().find(|r| &r.kappa == kappa)) {
            if computed != row.chi.into() {
                chi.push(format!(
                    "({kappa}): file has {}, hook lengths give {computed}",
                    row.chi
                ));
            }
        }
    }
    out.push(("chi", status_from(chi)));

    let trace = check_trace_identity_for(table)?;
    out.push((
        "trace-identity",
        status_from(
            trace
                .discrepancies
                .iter()
                .map(|(k, v)| format!("{}: off by {v}", term_label(Basis::Monomial, k)))
                .collect(),
        ),
    ));

    let top = Partition::row(f);
    out.push((
        "z-top",
        if z_top_check_for(table) {
            Status::Pass
        } else {
            Status::Fail(vec![format!(
                "({top}): extreme monomial coefficients are wrong"
            )])
        },
    ));

    out.push((
        "normalization",
        status_from(
            normalization_violations(table)
                .into_iter()
                .map(|k| format!("({k}): m({}) coefficient is not {f}!", Partition::column(f)))
                .collect(),
        ),
    ));

    out.push((
        "triangularity",
        status_from(
            triangularity_violations(table)
                .into_iter()
                .map(|(k, l)| format!("({k}): nonzero coefficient at undominated ({l})"))
                .collect(),
        ),
    ));

    let odd = non_natural_coefficients(table);
    out.push((
        "nonnegativity",
        if odd.is_empty() {
            Status::Pass
        } else {
            Status::Warn(
                odd.into_iter()
                    .map(|(k, l, c)| format!("({k}): m({l}) coefficient {c}"))
                    .collect(),
            )
        },
    ));
    Ok(out)
}

pub(super) fn cmd_verify(range: &str, table_file: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let (lo, hi) = parse_degree_range(range)?;
    let doc = match table_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            let doc: TableDoc = serde_json::from_str(&text)
                .map_err(|e| Failure::usage(format!("cannot parse {}: {e}", path.display())))?;
            if (lo, hi) != (doc.degree, doc.degree) {
                return Err(Failure::usage(format!(
                    "{} holds degree {}, but --f asks for {range}",
                    path.display(),
                    doc.degree
                )));
            }
            Some(doc)
        }
        None => None,
    };

    let mut failed = 0;
    for f in lo..=hi {
        let table = match &doc {
            Some(d) => std::sync::Arc::new(d.to_table()?),
            None => zonal_table(f)?,
        };
        for (name, status) in checks(&table, doc.as_ref())? {
            let (word, details) = match status {
                Status::Pass => ("pass", Vec::new()),
                Status::Skip(why) => {
                    writeln!(out, "f={f} {name:<15} skip ({why})")?;
                    continue;
                }
                Status::Warn(d) => ("warn", d),
                Status::Fail(d) => {
                    failed += 1;
                    ("FAIL", d)
                }
            };
            writeln!(out, "f={f} {name:<15} {word}")?;
            for line in details {
                writeln!(out, "    {line}")?;
            }
        }
    }
    if failed == 0 {
        writeln!(out, "all checks passed")?;
        Ok(EXIT_OK)
    } else {
        writeln!(out, "{failed} check(s) failed")?;
        Ok(EXIT_FAILED)
    }
}
