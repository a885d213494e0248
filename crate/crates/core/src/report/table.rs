use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::filtration::low_genus_exponents;
use crate::lyapunov::{cmx_bound, denominator_divides, upper_bound_closed};
use crate::rational::Rational;
use crate::stratum::{render_zeros, validate_stratum, Component, Stratum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::Parse(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Computed,
    Varying,
    NotCovered,
}

/// One row of a genus table: `w_2, ..., w_g` and their sum with `w_1 = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub stratum: Stratum,
    pub exponents: Vec<Rational>,
    pub sum: Option<Rational>,
    pub status: RowStatus,
    #[serde(skip)]
    printed: &'static PrintedRow,
}

impl TableRow {
    /// Bounds and denominator test for a computed row.
    pub fn passes_checks(&self) -> bool {
        let Some(sum) = self.sum else { return true };
        let s = &self.stratum;
        denominator_divides(sum, s)
            && upper_bound_closed(s).is_ok_and(|b| sum <= b)
            && cmx_bound(s).is_ok_and(|b| sum <= b)
    }
}

/// The cells exactly as typeset, including unreduced fractions like `2/4`.
#[derive(Debug, PartialEq, Eq)]
struct PrintedRow {
    zeros: &'static [u32],
    component: Component,
    label: &'static str,
    cells: &'static [&'static str],
    sum: &'static str,
}

macro_rules! row {
    ($z:expr, $c:ident, $label:expr, [$($w:expr),*], $sum:expr) => {
        PrintedRow { zeros: &$z, component: Component::$c, label: $label, cells: &[$($w),*], sum: $sum }
    };
}

static GENUS_3: &[PrintedRow] = &[
    row!([4], Hyperelliptic, "hyp", ["3/5", "1/5"], "9/5"),
    row!([4], Odd, "odd", ["2/5", "1/5"], "8/5"),
    row!([3, 1], Unspecified, "", ["2/4", "1/4"], "7/4"),
    row!([2, 2], Hyperelliptic, "hyp", ["2/3", "1/3"], "2"),
    row!([2, 2], Odd, "odd", ["1/3", "1/3"], "5/3"),
    row!([2, 1, 1], Unspecified, "", ["1/2", "1/3"], "11/6"),
    row!([1, 1, 1, 1], Unspecified, "", ["", ""], "varying"),
];

static GENUS_4: &[PrintedRow] = &[
    row!([6], Hyperelliptic, "hyp", ["5/7", "3/7", "1/7"], "16/7"),
    row!([6], Even, "even", ["4/7", "2/7", "1/7"], "14/7"),
    row!([6], Odd, "odd", ["3/7", "2/7", "1/7"], "13/7"),
    row!([5, 1], Unspecified, "", ["1/2", "2/6", "1/6"], "2"),
    row!([3, 3], Hyperelliptic, "hyp", ["3/4", "2/4", "1/4"], "5/2"),
    row!([3, 3], NonHyperelliptic, "non-hyp", ["2/4", "1/4", "1/4"], "2"),
    row!([4, 2], Even, "even", ["3/5", "1/3", "1/5"], "32/15"),
    row!([4, 2], Odd, "odd", ["2/5", "1/3", "1/5"], "29/15"),
    row!([2, 2, 2], Odd, "", ["1/3", "1/3", "1/3"], "2"),
    row!([3, 2, 1], Unspecified, "", ["1/2", "1/3", "1/4"], "25/12"),
];

static GENUS_5: &[PrintedRow] = &[
    row!([8], Hyperelliptic, "hyp", ["7/9", "5/9", "3/9", "1/9"], "25/9"),
    row!([8], Even, "even", ["5/9", "3/9", "2/9", "1/9"], "20/9"),
    row!([8], Odd, "odd", ["4/9", "3/9", "2/9", "1/9"], "19/9"),
    row!([5, 3], Unspecified, "", ["1/2", "1/3", "1/4", "1/6"], "9/4"),
    row!([6, 2], Odd, "odd", ["3/7", "1/3", "2/7", "1/7"], "46/21"),
    row!([4, 4], Hyperelliptic, "hyp", ["4/5", "3/5", "2/5", "1/5"], "3"),
];

/// Rows of the genus 3, 4 or 5 table in their printed order.
pub fn genus_table(genus: u32) -> Result<Vec<TableRow>> {
    let printed = match genus {
        3 => GENUS_3,
        4 => GENUS_4,
        5 => GENUS_5,
        g => {
            return Err(Error::Unsupported(format!(
                "no table for genus {g} (available: 3, 4, 5)"
            )))
        }
    };
    printed
        .iter()
        .map(|p| {
            let stratum = validate_stratum(genus, p.zeros, p.component)?;
            if p.sum == "varying" {
                return Ok(TableRow {
                    stratum,
                    exponents: Vec::new(),
                    sum: None,
                    status: RowStatus::Varying,
                    printed: p,
                });
            }
            match low_genus_exponents(&stratum) {
                Ok(f) => Ok(TableRow {
                    exponents: f.exponents[1..].to_vec(),
                    sum: Some(f.sum()),
                    status: RowStatus::Computed,
                    stratum,
                    printed: p,
                }),
                Err(Error::NotCovered(_)) => Ok(TableRow {
                    stratum,
                    exponents: Vec::new(),
                    sum: None,
                    status: RowStatus::NotCovered,
                    printed: p,
                }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

fn cells(row: &TableRow, genus: u32, paper_style: bool) -> Vec<String> {
    let width = genus as usize - 1;
    let mut out = Vec::with_capacity(width + 3);
    if paper_style {
        out.push(render_zeros(row.printed.zeros));
        out.push(row.printed.label.to_string());
        out.extend(row.printed.cells.iter().map(|c| c.to_string()));
        out.push(row.printed.sum.to_string());
        return out;
    }
    out.push(render_zeros(&row.stratum.zeros));
    out.push(row.stratum.component.table_label().to_string());
    match row.status {
        RowStatus::Computed => {
            out.extend(row.exponents.iter().map(Rational::to_string));
            out.push(row.sum.map(|s| s.to_string()).unwrap_or_default());
        }
        RowStatus::Varying | RowStatus::NotCovered => {
            out.extend(std::iter::repeat_n(String::new(), width));
            out.push(
                if row.status == RowStatus::Varying {
                    "varying"
                } else {
                    "not-covered"
                }
                .to_string(),
            );
        }
    }
    out
}

fn header(genus: u32) -> Vec<String> {
    let mut h = vec!["zeros".to_string(), "component".to_string()];
    h.extend((2..=genus).map(|i| format!("w{i}")));
    h.push("sum".to_string());
    h
}

/// Renders a table. Rationals are reduced (`a/b`, integers bare) unless
/// `paper_style` asks for the cells as typeset.
pub fn render_table(genus: u32, rows: &[TableRow], format: OutputFormat, paper_style: bool) -> String {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            w.write_record(header(genus)).expect("in-memory write");
            for row in rows {
                w.write_record(cells(row, genus, paper_style)).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
        }
        OutputFormat::Json => {
            let mut v = serde_json::to_value(rows).expect("rows serialize");
            if paper_style {
                for (item, row) in v.as_array_mut().unwrap().iter_mut().zip(rows) {
                    item["printed"] = serde_json::json!({
                        "component": row.printed.label,
                        "exponents": row.printed.cells,
                        "sum": row.printed.sum,
                    });
                }
            }
            let mut s = serde_json::to_string_pretty(&serde_json::json!({ "genus": genus, "rows": v })).unwrap();
            s.push('\n');
            s
        }
        OutputFormat::Text => {
            let mut all = vec![header(genus)];
            all.extend(rows.iter().map(|r| cells(r, genus, paper_style)));
            let widths: Vec<usize> = (0..all[0].len())
                .map(|c| all.iter().map(|r| r[c].len()).max().unwrap_or(0))
                .collect();
            let mut out = format!("genus {genus}\n");
            for r in &all {
                let line: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
                let _ = writeln!(out, "{}", line.join(" | ").trim_end());
            }
            out
        }
    }
}
