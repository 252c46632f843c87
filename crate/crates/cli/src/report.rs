//! Report rows and their JSON / CSV renderings.

use clap::ValueEnum;
use serde::Serialize;

use reflectron::cubicforms::CubicTabulation;
use reflectron::fieldtables::{ComparisonReport, Mode, Verdict};
use reflectron::quadforms::ClassGroupStructure;
use reflectron::reflection::{
    Corollary5Report, CubicReflectionReport, FieldDiscriminant, PredictionRecord,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub trait Row: Serialize {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
}

pub fn emit<T: Row>(rows: &[T], format: Format) -> Result<String, String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows).map_err(|e| e.to_string())?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(T::HEADER).map_err(|e| e.to_string())?;
            for row in rows {
                w.write_record(row.fields()).map_err(|e| e.to_string())?;
            }
            let bytes = w.into_inner().map_err(|e| e.to_string())?;
            String::from_utf8(bytes).map_err(|e| e.to_string())
        }
    }
}

fn verdict_word(holds: bool) -> String {
    if holds { "pass" } else { "fail" }.to_string()
}

fn targets(ts: &[FieldDiscriminant]) -> impl Iterator<Item = String> + '_ {
    ts.iter().map(FieldDiscriminant::signed_decimal)
}

#[derive(Debug, Serialize)]
pub struct ClassGroupRow {
    #[serde(rename = "D")]
    pub d: i64,
    pub class_number: u64,
    pub elementary_divisors: Vec<u64>,
    pub narrow: bool,
}

impl From<ClassGroupStructure> for ClassGroupRow {
    fn from(g: ClassGroupStructure) -> Self {
        ClassGroupRow {
            d: g.discriminant.value(),
            class_number: g.class_number(),
            elementary_divisors: g.elementary_divisors.clone(),
            narrow: g.narrow,
        }
    }
}

impl Row for ClassGroupRow {
    const HEADER: &'static [&'static str] = &["D", "class_number", "structure", "narrow"];
    fn fields(&self) -> Vec<String> {
        let structure = if self.elementary_divisors.is_empty() {
            "1".to_string()
        } else {
            self.elementary_divisors
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join("x")
        };
        vec![
            self.d.to_string(),
            self.class_number.to_string(),
            structure,
            self.narrow.to_string(),
        ]
    }
}

#[derive(Debug, Serialize)]
pub struct CubicCountRow {
    pub disc: i64,
    pub count: u64,
}

pub fn cubic_rows(tab: &CubicTabulation) -> Vec<CubicCountRow> {
    tab.sorted_entries()
        .into_iter()
        .map(|(disc, count)| CubicCountRow { disc, count })
        .collect()
}

impl Row for CubicCountRow {
    const HEADER: &'static [&'static str] = &["disc", "count"];
    fn fields(&self) -> Vec<String> {
        vec![self.disc.to_string(), self.count.to_string()]
    }
}

impl Row for CubicReflectionReport {
    const HEADER: &'static [&'static str] = &["ell", "D", "N3_Dstar", "N3_27D", "rhs", "verdict"];
    fn fields(&self) -> Vec<String> {
        vec![
            self.ell.to_string(),
            self.d.to_string(),
            self.n3_dstar.to_string(),
            self.n3_27d.to_string(),
            self.rhs.to_string(),
            verdict_word(self.holds),
        ]
    }
}

/// A prediction, optionally with the degree 5 three-term identity.
#[derive(Debug, Serialize)]
pub struct PredictionRow {
    #[serde(flatten)]
    pub record: PredictionRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corollary5: Option<Corollary5Report>,
}

impl Row for PredictionRow {
    const HEADER: &'static [&'static str] = &[
        "ell",
        "D",
        "g",
        "dl_count",
        "lhs",
        "r2",
        "target_1",
        "target_2",
        "star_required",
    ];
    fn fields(&self) -> Vec<String> {
        let r = &self.record;
        let mut out = vec![
            r.ell.to_string(),
            r.d.value().to_string(),
            r.g.to_string(),
            r.dl_count.to_string(),
            r.lhs_value.to_string(),
            r.targets[0].r2.to_string(),
        ];
        out.extend(targets(&r.targets));
        out.push(r.star_required.to_string());
        out
    }
}

impl Row for Corollary5Report {
    const HEADER: &'static [&'static str] = &[
        "d",
        "dl_count_d",
        "dl_count_5d",
        "lhs",
        "r2",
        "target_1",
        "target_2",
        "target_3",
    ];
    fn fields(&self) -> Vec<String> {
        let mut out = vec![
            self.d.value().to_string(),
            self.dl_count_d.to_string(),
            self.dl_count_5d.to_string(),
            self.lhs_value.to_string(),
            self.targets[0].r2.to_string(),
        ];
        out.extend(targets(&self.targets));
        out
    }
}

impl Row for ComparisonReport {
    const HEADER: &'static [&'static str] = &[
        "mode", "ell", "D", "expected", "observed", "missing", "surplus", "verdict",
    ];
    fn fields(&self) -> Vec<String> {
        let mode = match self.mode {
            Mode::Exact => "exact",
            Mode::LowerBound => "lower-bound",
        };
        let verdict = match self.verdict {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Informational => "informational",
            Verdict::Unobserved => "unobserved",
        };
        vec![
            mode.to_string(),
            self.ell.to_string(),
            self.d.to_string(),
            self.expected.to_string(),
            self.observed.to_string(),
            self.missing.join(";"),
            self.surplus.join(";"),
            verdict.to_string(),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use reflectron::cubicforms::{enumerate_cubic_fields, SignSelection};
    use reflectron::reflection::verify_on3;
    use reflectron::FundamentalDiscriminant;

    #[test]
    fn empty_json_is_empty_array() {
        let rows: Vec<CubicCountRow> = Vec::new();
        assert_eq!(emit(&rows, Format::Json).unwrap(), "[]\n");
    }

    #[test]
    fn verify_on_csv_row() {
        let tab = enumerate_cubic_fields(27 * 23, SignSelection::Both);
        let report = verify_on3(FundamentalDiscriminant::new(-23).unwrap(), &tab).unwrap();
        assert_eq!(
            emit(&[report], Format::Csv).unwrap(),
            "ell,D,N3_Dstar,N3_27D,rhs,verdict\n3,-23,0,1,1,pass\n"
        );
    }
}
