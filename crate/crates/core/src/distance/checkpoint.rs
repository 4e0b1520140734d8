//! Resumable state of a minimum-distance run.
//!
//! Text format, one field per line:
//!
//! ```text
//! code 3f9a...
//! levels 4 4 3
//! work 123456
//! witness 0110100...
//! ```
//!
//! `witness -` records that no codeword has been stored.

use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::algebra::Fe;
use crate::error::{Error, Result};
use crate::linearcode::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub code_id: String,
    pub levels: Vec<usize>,
    pub work: u64,
    pub witness: Option<Vec<Fe>>,
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Hash of the reduced echelon form, so equal codes share a fingerprint
/// whatever generator matrix they were given by.
pub fn code_fingerprint(g: &Matrix) -> String {
    let ech = g.echelon();
    let mut h = Sha256::new();
    h.update([g.field().q()]);
    h.update((g.n() as u64).to_le_bytes());
    for row in ech.basis.rows() {
        h.update(row.iter().map(|x| x.index()).collect::<Vec<u8>>());
    }
    hex(&h.finalize())
}

impl fmt::Display for Checkpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "code {}", self.code_id)?;
        let levels: Vec<String> = self.levels.iter().map(|l| l.to_string()).collect();
        writeln!(f, "levels {}", levels.join(" "))?;
        writeln!(f, "work {}", self.work)?;
        match &self.witness {
            Some(w) => {
                let s: String = w.iter().map(|x| char::from_digit(x.index() as u32, 16).unwrap()).collect();
                writeln!(f, "witness {s}")
            }
            None => writeln!(f, "witness -"),
        }
    }
}

impl FromStr for Checkpoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Checkpoint> {
        let mut code_id = None;
        let mut levels = None;
        let mut work = None;
        let mut witness = None;
        for (lineno, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once(' ').unwrap_or((line, ""));
            let value = value.trim();
            match key {
                "code" => code_id = Some(value.to_string()),
                "levels" => {
                    let parsed: std::result::Result<Vec<usize>, _> =
                        value.split_whitespace().map(str::parse).collect();
                    levels = Some(parsed.map_err(|e| Error::parse(lineno, e.to_string()))?);
                }
                "work" => {
                    work = Some(value.parse().map_err(|_| Error::parse(lineno, "bad work count"))?)
                }
                "witness" if value == "-" => witness = Some(None),
                "witness" => {
                    let digits: Option<Vec<Fe>> = value
                        .chars()
                        .map(|c| c.to_digit(16).filter(|&d| d < 9).map(|d| Fe(d as u8)))
                        .collect();
                    let digits = digits.ok_or_else(|| Error::parse(lineno, "bad witness digit"))?;
                    witness = Some(Some(digits));
                }
                other => return Err(Error::parse(lineno, format!("unknown key {other:?}"))),
            }
        }
        let missing = |what: &str| Error::FormatError(format!("checkpoint lacks {what}"));
        Ok(Checkpoint {
            code_id: code_id.ok_or_else(|| missing("code"))?,
            levels: levels.ok_or_else(|| missing("levels"))?,
            work: work.ok_or_else(|| missing("work"))?,
            witness: witness.ok_or_else(|| missing("witness"))?,
        })
    }
}
