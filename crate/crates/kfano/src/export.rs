//! Export rows and serialization of the classification (JSON, CSV,
//! Markdown), mirroring the layout of the reference lists.

use serde::{Deserialize, Serialize};

use crate::enumerate::Classification;
use crate::family::FamilyType;
use crate::invariants::FamilyRecord;
use crate::reference::{compare_with_reference, VerifyReport};

/// One exported family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportRow {
    /// stable index, contiguous from 1
    pub id: u32,
    pub family_type: String,
    pub n: usize,
    pub d: Vec<i64>,
    pub exponents: Vec<i64>,
    pub shifts: Vec<i64>,
    pub class_group: String,
    /// degree matrix: first row free weights, then torsion rows
    pub degree_matrix: Vec<Vec<i64>>,
    pub cox_relations: Vec<String>,
    pub anti_k: Vec<i64>,
    pub deg_cubed: i64,
    pub hilbert_numerator: [i64; 4],
    pub g_flags: Vec<String>,
    /// id of the corresponding entry in the reference lists, when matched
    pub reference_id: Option<u32>,
    pub notes: Vec<String>,
}

fn to_i64(x: &num_bigint::BigInt) -> i64 {
    i64::try_from(x.clone()).expect("value fits in i64")
}

fn record_to_row(id: u32, rec: &FamilyRecord) -> ExportRow {
    let fam = &rec.family;
    let group = &fam.grading.group;
    let mut degree_matrix: Vec<Vec<i64>> = vec![fam
        .grading
        .degrees
        .iter()
        .map(|d| to_i64(&d.free[0]))
        .collect()];
    for t in 0..group.torsion.len() {
        degree_matrix.push(
            fam.grading
                .degrees
                .iter()
                .map(|d| to_i64(&d.torsion[t]))
                .collect(),
        );
    }
    let mut anti_k = vec![to_i64(&rec.anti_k.free[0])];
    anti_k.extend(rec.anti_k.torsion.iter().map(to_i64));
    ExportRow {
        id,
        family_type: rec.input.type_tag.to_string(),
        n: rec.input.n(),
        d: rec.input.d.clone(),
        exponents: rec.input.l.clone(),
        shifts: rec.input.shifts.clone(),
        class_group: group.to_string(),
        degree_matrix,
        cox_relations: rec
            .templates
            .iter()
            .enumerate()
            .map(|(k, t)| t.render(k))
            .collect(),
        anti_k,
        deg_cubed: to_i64(&rec.degree_cubed),
        hilbert_numerator: [
            to_i64(&rec.hilbert_numerator[0]),
            to_i64(&rec.hilbert_numerator[1]),
            to_i64(&rec.hilbert_numerator[2]),
            to_i64(&rec.hilbert_numerator[3]),
        ],
        g_flags: rec.g_flags.clone(),
        reference_id: None,
        notes: Vec::new(),
    }
}

/// Export rows for the classification, with the reference-list mapping
/// attached where a match exists.
pub fn export_rows(classification: &Classification) -> Vec<ExportRow> {
    let report: VerifyReport = compare_with_reference(classification);
    let mut rows: Vec<ExportRow> = classification
        .records
        .iter()
        .enumerate()
        .map(|(i, r)| record_to_row(i as u32 + 1, r))
        .collect();
    for cmp in &report.comparisons {
        let row = &mut rows[cmp.artifact_index];
        row.reference_id = Some(cmp.reference_id);
        for field in cmp.mismatched_fields() {
            row.notes.push(format!(
                "reference {} differs: printed {}, computed {}",
                field,
                match field {
                    "deg_cubed" => cmp.deg_printed.to_string(),
                    _ => format!("{:?}", cmp.hilbert_printed),
                },
                match field {
                    "deg_cubed" => cmp.deg_computed.to_string(),
                    _ => format!("{:?}", cmp.hilbert_computed),
                }
            ));
        }
    }
    for idx in &report.unmatched_computed {
        rows[*idx]
            .notes
            .push("no counterpart in the reference lists".to_string());
    }
    rows
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Markdown),
            other => Err(format!("unknown format {other}")),
        }
    }
}

fn join(v: &[i64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

pub fn render(rows: &[ExportRow], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(rows).expect("rows serialize"),
        Format::Csv => {
            let mut out = String::from(
                "id,type,n,d,exponents,shifts,class_group,weights,relations,anti_k,deg_cubed,hilbert,reference_id,notes\n",
            );
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    r.id,
                    r.family_type,
                    r.n,
                    join(&r.d),
                    join(&r.exponents),
                    join(&r.shifts),
                    r.class_group.replace(' ', ""),
                    join(&r.degree_matrix[0]),
                    r.cox_relations.join(" & ").replace(',', ";"),
                    join(&r.anti_k),
                    r.deg_cubed,
                    join(&r.hilbert_numerator),
                    r.reference_id.map(|x| x.to_string()).unwrap_or_default(),
                    r.notes.join(" | ").replace(',', ";"),
                ));
            }
            out
        }
        Format::Markdown => {
            let mut out = String::from(
                "| id | type | n | d | Cox relations | class group | weights | -K | -K^3 | numerator | list id |\n|---|---|---|---|---|---|---|---|---|---|---|\n",
            );
            for r in rows {
                out.push_str(&format!(
                    "| {} | {} | {} | {:?} | {} | {} | {:?} | {:?} | {} | {:?} | {} |\n",
                    r.id,
                    r.family_type,
                    r.n,
                    r.d,
                    r.cox_relations.join("; "),
                    r.class_group,
                    r.degree_matrix[0],
                    r.anti_k,
                    r.deg_cubed,
                    r.hilbert_numerator,
                    r.reference_id
                        .map(|x| x.to_string())
                        .unwrap_or_else(|| "-".into()),
                ));
            }
            out
        }
    }
}

/// Filters for the `enumerate` surface.
#[derive(Clone, Debug, Default)]
pub struct RowFilter {
    pub family_type: Option<FamilyType>,
    pub n: Option<usize>,
    pub d: Option<Vec<i64>>,
}

impl RowFilter {
    pub fn keep(&self, row: &ExportRow) -> bool {
        if let Some(t) = self.family_type {
            if row.family_type != t.to_string() {
                return false;
            }
        }
        if let Some(n) = self.n {
            if row.n != n {
                return false;
            }
        }
        if let Some(d) = &self.d {
            let mut want = d.clone();
            want.sort();
            let mut got = row.d.clone();
            got.sort();
            if want != got {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_parses() {
        assert_eq!("json".parse::<Format>().unwrap(), Format::Json);
        assert_eq!("md".parse::<Format>().unwrap(), Format::Markdown);
        assert!("yaml".parse::<Format>().is_err());
    }
}
