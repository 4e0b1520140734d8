//! Append-only JSON-Lines ledger of found codes.
//!
//! Each line is one [`CodeRecord`]; fields appear in declaration order.
//! Polynomials use the compact coefficient-string format.

use std::collections::HashSet;
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::Field;
use crate::codec::{parse_coeffs, parse_list, render_coeffs};
use crate::distance::{min_distance, DistanceOptions};
use crate::error::{Error, Result};
use crate::linearcode::{CodeProperties, DistanceStatus};
use crate::qt::{qt_assemble, QtCode, QtForm, QtGeneratorSpec};
use crate::search::targets::Classification;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeRecord {
    pub n: usize,
    pub k: usize,
    pub d: DistanceStatus,
    pub q: u8,
    /// Shift constant in the field's display alphabet.
    pub a: String,
    pub form: QtForm,
    pub m: usize,
    pub ell: usize,
    pub g: String,
    pub p: String,
    pub f1: Vec<String>,
    pub f2: Vec<String>,
    pub properties: CodeProperties,
    pub target: Option<usize>,
    pub classification: Classification,
    pub config_hash: String,
    pub seed: u64,
    pub timestamp: Option<String>,
}

/// (q, n, k, canonical generator tuple).
pub type RecordKey = (u8, usize, usize, String);

impl CodeRecord {
    pub fn from_spec(spec: &QtGeneratorSpec, k: usize, d: DistanceStatus, properties: CodeProperties) -> CodeRecord {
        CodeRecord {
            n: spec.n(),
            k,
            d,
            q: spec.field.q(),
            a: spec.field.name(spec.a).to_string(),
            form: spec.form,
            m: spec.m,
            ell: spec.ell,
            g: render_coeffs(&spec.g),
            p: render_coeffs(&spec.p),
            f1: spec.f1.iter().map(render_coeffs).collect(),
            f2: spec.f2.iter().map(render_coeffs).collect(),
            properties,
            target: None,
            classification: Classification::UnknownTarget,
            config_hash: String::new(),
            seed: 0,
            timestamp: None,
        }
    }

    pub fn key(&self) -> RecordKey {
        let gens = format!(
            "{}|{}|{}|{}|{}|{}",
            self.form.name(),
            self.a,
            self.g,
            self.p,
            self.f1.join(","),
            self.f2.join(",")
        );
        (self.q, self.n, self.k, gens)
    }

    pub fn spec(&self) -> Result<QtGeneratorSpec> {
        let field = Field::new(self.q as u32)?;
        let mut chars = self.a.chars();
        let a = match (chars.next(), chars.next()) {
            (Some(c), None) => field.parse_char(c),
            _ => None,
        }
        .ok_or_else(|| Error::FormatError(format!("bad shift constant {:?}", self.a)))?;
        let list = |v: &[String]| -> Result<Vec<_>> {
            if v.is_empty() {
                Ok(Vec::new())
            } else {
                parse_list(&v.join(","), field)
            }
        };
        Ok(QtGeneratorSpec {
            form: self.form,
            field,
            m: self.m,
            ell: self.ell,
            a,
            g: parse_coeffs(&self.g, field)?,
            p: parse_coeffs(&self.p, field)?,
            f1: list(&self.f1)?,
            f2: list(&self.f2)?,
        })
    }

    /// Re-assembles from the stored strings and checks (n, k).
    pub fn reassemble(&self) -> Result<QtCode> {
        let code = qt_assemble(&self.spec()?)?;
        if code.n() != self.n || code.k() != self.k {
            return Err(Error::FormatError(format!(
                "stored [{},{}] but generators give [{},{}]",
                self.n,
                self.k,
                code.n(),
                code.k()
            )));
        }
        Ok(code)
    }

    /// Re-derives the code and checks a fresh distance run does not
    /// contradict the stored status.
    pub fn reverify(&self, opts: &DistanceOptions) -> Result<bool> {
        let code = self.reassemble()?;
        let r = min_distance(&code.matrix, opts)?;
        let Some((lo, up)) = self.d.bounds() else {
            return Ok(true);
        };
        Ok(r.lower <= up && lo <= r.upper && code.matrix.properties() == self.properties)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Ledger {
    records: Vec<CodeRecord>,
    keys: HashSet<RecordKey>,
}

impl Ledger {
    pub fn new() -> Ledger {
        Ledger::default()
    }

    /// Adds a record unless an identical key is present.
    pub fn append(&mut self, record: CodeRecord) -> bool {
        if !self.keys.insert(record.key()) {
            return false;
        }
        self.records.push(record);
        true
    }

    pub fn records(&self) -> &[CodeRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn contains(&self, key: &RecordKey) -> bool {
        self.keys.contains(key)
    }

    pub fn to_jsonl(&self) -> String {
        self.records
            .iter()
            .map(|r| serde_json::to_string(r).expect("record serializes") + "\n")
            .collect()
    }

    pub fn load(path: &Path) -> Result<Ledger> {
        let mut ledger = Ledger::new();
        if !path.exists() {
            return Ok(ledger);
        }
        for (i, line) in BufReader::new(std::fs::File::open(path)?).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: CodeRecord = serde_json::from_str(&line)
                .map_err(|e| Error::FormatError(format!("{}:{}: {e}", path.display(), i + 1)))?;
            ledger.append(rec);
        }
        Ok(ledger)
    }
}

/// Appends records to a ledger file, skipping keys already present.
pub struct LedgerWriter {
    file: std::fs::File,
    ledger: Ledger,
}

impl LedgerWriter {
    pub fn open(path: &Path) -> Result<LedgerWriter> {
        let ledger = Ledger::load(path)?;
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(LedgerWriter { file, ledger })
    }

    pub fn append(&mut self, record: CodeRecord) -> Result<bool> {
        let line = serde_json::to_string(&record)?;
        if !self.ledger.append(record) {
            return Ok(false);
        }
        writeln!(self.file, "{line}")?;
        Ok(true)
    }

    pub fn flush(&mut self) -> Result<()> {
        self.file.flush()?;
        Ok(())
    }

    pub fn ledger(&self) -> &Ledger {
        &self.ledger
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::parse_list;
    use crate::distance::DistanceOptions;

    fn record() -> CodeRecord {
        let f = Field::new(3).unwrap();
        let spec = QtGeneratorSpec::p1(
            f,
            4,
            f.elem(1),
            parse_coeffs("11", f).unwrap(),
            parse_list("1,11", f).unwrap(),
            parse_list("0,1", f).unwrap(),
        );
        let code = qt_assemble(&spec).unwrap();
        let r = min_distance(&code.matrix, &DistanceOptions::default()).unwrap();
        CodeRecord::from_spec(&spec, code.k(), r.d_status(), code.matrix.properties())
    }

    #[test]
    fn json_round_trip_and_reverify() {
        let r = record();
        let line = serde_json::to_string(&r).unwrap();
        let back: CodeRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(back, r);
        assert!(back.reverify(&DistanceOptions::default()).unwrap());
    }

    #[test]
    fn dedup_and_file_append() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ledger.jsonl");
        let mut w = LedgerWriter::open(&path).unwrap();
        assert!(w.append(record()).unwrap());
        assert!(!w.append(record()).unwrap());
        w.flush().unwrap();
        drop(w);
        let mut w = LedgerWriter::open(&path).unwrap();
        assert!(!w.append(record()).unwrap());
        assert_eq!(Ledger::load(&path).unwrap().len(), 1);
    }

    #[test]
    fn tampered_record_is_rejected() {
        let mut r = record();
        r.k += 1;
        assert!(r.reassemble().is_err());
    }
}
