use std::io::Write;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{CmdResult, Failure, Format, EXIT_OK, MAX_DEGREE};
use crate::partitions::{partitions_of, Partition};
use crate::symfunc::{parse_rational, term_label, term_label_latex, Basis, SymPoly};
use crate::zonal::{chi_doubled, zonal_table, ZonalTable};
use crate::Result;

/// JSON layout of a table: coefficients are exact rationals as strings, in
/// the order of `columns`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableDoc {
    pub degree: usize,
    pub basis: Basis,
    pub columns: Vec<Partition>,
    pub rows: Vec<TableRowDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRowDoc {
    pub kappa: Partition,
    pub chi: u64,
    pub coefficients: Vec<String>,
}

impl TableDoc {
    pub fn from_table(table: &ZonalTable, basis: Basis) -> Result<Self> {
        let columns = partitions_of(table.degree());
        let rows = table
            .in_basis(basis)?
            .into_iter()
            .map(|(kappa, poly)| TableRowDoc {
                chi: chi_doubled(&kappa)
                    .to_u64()
                    .expect("character degree fits in u64"),
                coefficients: columns.iter().map(|c| poly.coeff(c).to_string()).collect(),
                kappa,
            })
            .collect();
        Ok(TableDoc {
            degree: table.degree(),
            basis,
            columns,
            rows,
        })
    }

    pub fn to_table(&self) -> Result<ZonalTable> {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                if r.coefficients.len() != self.columns.len() {
                    return Err(crate::Error::InvalidArgument(format!(
                        "row ({}) has {} coefficients for {} columns",
                        r.kappa,
                        r.coefficients.len(),
                        self.columns.len()
                    )));
                }
                let terms = self
                    .columns
                    .iter()
                    .zip(&r.coefficients)
                    .map(|(c, v)| Ok((c.clone(), parse_rational(v)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok((
                    r.kappa.clone(),
                    SymPoly::from_terms(self.degree, self.basis, terms)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        ZonalTable::from_rows(self.degree, rows)
    }
}

pub(super) fn cmd_table(f: usize, basis: Basis, format: Format, out: &mut dyn Write) -> CmdResult {
    if !(1..=MAX_DEGREE).contains(&f) {
        return Err(Failure::usage(format!(
            "--f must be between 1 and {MAX_DEGREE}"
        )));
    }
    let doc = TableDoc::from_table(zonal_table(f)?.as_ref(), basis)?;
    let text = match format {
        Format::Json => render_json(&doc),
        Format::Csv => render_csv(&doc),
        Format::Latex => render_latex(&doc),
        Format::Text => render_text(&doc)?,
    };
    out.write_all(text.as_bytes())?;
    Ok(EXIT_OK)
}

pub fn render_json(doc: &TableDoc) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("table serializes");
    s.push('\n');
    s
}

fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

fn render_csv(doc: &TableDoc) -> String {
    let mut s = String::from("kappa");
    for c in &doc.columns {
        s.push(',');
        s.push_str(&quoted(&term_label(doc.basis, c)));
    }
    s.push_str(",chi\n");
    for r in &doc.rows {
        s.push_str(&quoted(&r.kappa.to_string()));
        for v in &r.coefficients {
            s.push(',');
            s.push_str(v);
        }
        s.push_str(&format!(",{}\n", r.chi));
    }
    s
}

fn latex_number(v: &str) -> String {
    match v.split_once('/') {
        Some((p, q)) => match p.strip_prefix('-') {
            Some(p) => format!("-\\frac{{{p}}}{{{q}}}"),
            None => format!("\\frac{{{p}}}{{{q}}}"),
        },
        None => v.to_string(),
    }
}

fn render_latex(doc: &TableDoc) -> String {
    let mut s = format!(
        "\\begin{{tabular}}{{l|{}|r}}\n$\\kappa$",
        "r".repeat(doc.columns.len())
    );
    for c in &doc.columns {
        s.push_str(&format!(" & ${}$", term_label_latex(doc.basis, c)));
    }
    s.push_str(" & $\\chi_{2\\kappa}(1)$ \\\\\n\\hline\n");
    for r in &doc.rows {
        s.push_str(&format!("$({})$", r.kappa));
        for v in &r.coefficients {
            s.push_str(&format!(" & ${}$", latex_number(v)));
        }
        s.push_str(&format!(" & {} \\\\\n", r.chi));
    }
    s.push_str("\\end{tabular}\n");
    s
}

fn render_text(doc: &TableDoc) -> Result<String> {
    let table = doc.to_table()?;
    let mut s = String::new();
    for ((kappa, poly), r) in table.rows().iter().zip(&doc.rows) {
        let shown = poly.to_basis(doc.basis)?;
        s.push_str(&format!("Z({kappa}) = {shown}  (chi = {})\n", r.chi));
    }
    Ok(s)
}
