//! Number field tables and their reconciliation with predicted counts.
//!
//! Tables are CSV files with the exact header `label,degree,r2,disc,galois`.
//! The sign of `disc` is ignored; the `r2` column fixes the signature.

use std::collections::BTreeSet;
use std::io;

use num_bigint::BigUint;
use serde::Serialize;

use crate::arith::{factorize_u64, Factorization};
use crate::error::{Error, Result};
use crate::reflection::{Corollary5Report, FieldDiscriminant, PredictionRecord};

pub const HEADER: [&str; 5] = ["label", "degree", "r2", "disc", "galois"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTableEntry {
    pub label: String,
    pub degree: u32,
    pub r2: u32,
    pub disc_magnitude: Factorization,
    pub galois_label: String,
}

impl FieldTableEntry {
    pub fn field_disc(&self) -> FieldDiscriminant {
        FieldDiscriminant::new(self.degree, self.r2, self.disc_magnitude.clone())
            .expect("entries are validated on construction")
    }

    fn matches(&self, fd: &FieldDiscriminant, galois_label: &str) -> bool {
        self.degree == fd.degree
            && self.r2 == fd.r2
            && self.galois_label == galois_label
            && self.disc_magnitude == fd.magnitude
    }
}

fn parse_error(line: u64, message: impl Into<String>) -> Error {
    Error::TableParse {
        line,
        message: message.into(),
    }
}

/// Reads a field table. Line numbers in errors count the header as line 1.
pub fn parse_field_table<R: io::Read>(input: R) -> Result<Vec<FieldTableEntry>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut records = reader.records();
    match records.next() {
        Some(Ok(header)) if header.iter().eq(HEADER) => {}
        Some(Ok(_)) => {
            return Err(parse_error(
                1,
                format!("header must be `{}`", HEADER.join(",")),
            ));
        }
        Some(Err(e)) => return Err(parse_error(1, e.to_string())),
        None => return Err(parse_error(1, "missing header")),
    }
    let mut out = Vec::new();
    for record in records {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != HEADER.len() {
            return Err(parse_error(
                line,
                format!("expected 5 fields, found {}", record.len()),
            ));
        }
        let number = |i: usize| -> Result<u32> {
            record[i].parse().map_err(|_| {
                parse_error(line, format!("{} is not a nonnegative integer", HEADER[i]))
            })
        };
        let degree = number(1)?;
        let r2 = number(2)?;
        if degree == 0 || 2 * r2 > degree {
            return Err(parse_error(
                line,
                format!("r2 = {r2} is impossible in degree {degree}"),
            ));
        }
        let disc: i128 = record[3]
            .parse()
            .map_err(|_| parse_error(line, "disc is not an integer"))?;
        let magnitude = u64::try_from(disc.unsigned_abs())
            .map_err(|_| parse_error(line, "disc exceeds 64 bits"))?;
        if magnitude == 0 {
            return Err(parse_error(line, "disc is zero"));
        }
        let label = record[0].to_string();
        if label.is_empty() {
            return Err(parse_error(line, "empty label"));
        }
        out.push(FieldTableEntry {
            label,
            degree,
            r2,
            disc_magnitude: factorize_u64(magnitude)?,
            galois_label: record[4].to_string(),
        });
    }
    Ok(out)
}

/// Writes entries in the format read by [`parse_field_table`], with `disc`
/// signed as `(-1)^{r₂}|disc|`.
pub fn write_field_table<W: io::Write>(entries: &[FieldTableEntry], w: W) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(w);
    writer.write_record(HEADER)?;
    for e in entries {
        writer.write_record([
            e.label.clone(),
            e.degree.to_string(),
            e.r2.to_string(),
            e.field_disc().signed_decimal(),
            e.galois_label.clone(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Number of distinct labels whose entry has the given degree, signature,
/// magnitude and Galois label.
pub fn count_matching(
    entries: &[FieldTableEntry],
    fd: &FieldDiscriminant,
    galois_label: &str,
) -> u64 {
    matching_labels(entries, fd, galois_label).len() as u64
}

fn matching_labels<'a>(
    entries: &'a [FieldTableEntry],
    fd: &FieldDiscriminant,
    galois_label: &str,
) -> BTreeSet<&'a str> {
    entries
        .iter()
        .filter(|e| e.matches(fd, galois_label))
        .map(|e| e.label.as_str())
        .collect()
}

/// Galois label of the degree `ℓ` fields on the target side.
pub fn target_galois_label(ell: u64) -> String {
    if ell == 3 {
        "S3".to_string()
    } else {
        format!("F{ell}")
    }
}

/// What a table comparison checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    LowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Lower-bound comparison; nothing can fail.
    Informational,
    /// Nothing found at `ℓ = 13` where fields were expected. Fields at these
    /// discriminants have not been observed in practice.
    Unobserved,
}

impl Verdict {
    pub fn is_failure(self) -> bool {
        self == Verdict::Fail
    }
}

/// The prediction side of a table comparison.
#[derive(Debug, Clone, Copy)]
pub enum Subject<'a> {
    Prediction(&'a PredictionRecord),
    Corollary5(&'a Corollary5Report),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub mode: Mode,
    pub ell: u64,
    #[serde(rename = "D")]
    pub d: i64,
    pub expected: u64,
    pub observed: u64,
    /// Targets with no matching field, listed when `observed < expected`.
    pub missing: Vec<String>,
    /// Labels of the matched fields, listed when `observed > expected`.
    pub surplus: Vec<String>,
    pub verdict: Verdict,
}

/// Reconciles a prediction with a table.
///
/// Exact mode applies to `ℓ = 3` predictions and to the degree 5 three-term
/// identity, provided every target magnitude is at most `complete_below`
/// (`None` declares the table complete). Everything else is compared in
/// lower-bound mode: the Galois condition on the target side cannot be read
/// from a table, so a table count only bounds the prediction from above.
pub fn compare_with_table(
    subject: Subject<'_>,
    entries: &[FieldTableEntry],
    complete_below: Option<&BigUint>,
) -> Result<ComparisonReport> {
    let (ell, d, expected, targets, exact_shape) = match subject {
        Subject::Prediction(p) => (p.ell, p.d.value(), p.lhs_value, &p.targets, p.ell == 3),
        Subject::Corollary5(c) => (5, c.d.value(), c.lhs_value, &c.targets, true),
    };
    let label = target_galois_label(ell);
    if let Some(bad) = entries
        .iter()
        .find(|e| e.galois_label == label && e.degree as u64 != ell)
    {
        return Err(Error::DegreeMismatch {
            label: bad.label.clone(),
            expected: ell as u32,
            found: bad.degree,
        });
    }
    let complete = complete_below
        .is_none_or(|bound| targets.iter().all(|t| t.magnitude.magnitude() <= *bound));
    let mode = if exact_shape && complete {
        Mode::Exact
    } else {
        Mode::LowerBound
    };

    let mut labels = BTreeSet::new();
    let mut empty_targets = Vec::new();
    for t in targets {
        let found = matching_labels(entries, t, &label);
        if found.is_empty() {
            empty_targets.push(t.signed_decimal());
        }
        labels.extend(found);
    }
    let observed = labels.len() as u64;
    let missing = if observed < expected {
        empty_targets
    } else {
        Vec::new()
    };
    let surplus = if observed > expected {
        labels.iter().map(|s| s.to_string()).collect()
    } else {
        Vec::new()
    };
    let verdict = match mode {
        Mode::Exact if observed == expected => Verdict::Pass,
        Mode::Exact => Verdict::Fail,
        Mode::LowerBound if ell == 13 && observed == 0 && expected > 0 => Verdict::Unobserved,
        Mode::LowerBound => Verdict::Informational,
    };
    Ok(ComparisonReport {
        mode,
        ell,
        d,
        expected,
        observed,
        missing,
        surplus,
        verdict,
    })
}
