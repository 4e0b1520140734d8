//! Best-known distance targets: CSV with header `q,n,k,d_best`.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linearcode::DistanceStatus;

#[derive(Deserialize)]
struct Entry {
    q: u32,
    n: usize,
    k: usize,
    d_best: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TargetTable {
    map: BTreeMap<(u32, usize, usize), usize>,
}

impl TargetTable {
    pub fn parse(reader: impl Read) -> Result<TargetTable> {
        let err = |m: String| Error::TargetTableError(m);
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| err(e.to_string()))?.clone();
        if headers.iter().collect::<Vec<_>>() != ["q", "n", "k", "d_best"] {
            return Err(err(format!("expected header q,n,k,d_best, found {}", headers.iter().collect::<Vec<_>>().join(","))));
        }
        let mut map = BTreeMap::new();
        for (i, rec) in rdr.deserialize::<Entry>().enumerate() {
            let e = rec.map_err(|e| err(format!("row {}: {e}", i + 2)))?;
            if e.k > e.n || e.d_best > e.n {
                return Err(err(format!("row {}: inconsistent parameters", i + 2)));
            }
            if let Some(prev) = map.insert((e.q, e.n, e.k), e.d_best) {
                if prev != e.d_best {
                    return Err(err(format!("row {}: conflicting entry for [{},{}]_{}", i + 2, e.n, e.k, e.q)));
                }
            }
        }
        Ok(TargetTable { map })
    }

    pub fn load(path: &Path) -> Result<TargetTable> {
        let file = std::fs::File::open(path).map_err(|e| Error::TargetTableError(format!("{}: {e}", path.display())))?;
        TargetTable::parse(file)
    }

    pub fn from_entries(entries: &[(u32, usize, usize, usize)]) -> TargetTable {
        TargetTable {
            map: entries.iter().map(|&(q, n, k, d)| ((q, n, k), d)).collect(),
        }
    }

    pub fn get(&self, q: u32, n: usize, k: usize) -> Option<usize> {
        self.map.get(&(q, n, k)).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    RecordBreaking,
    TiesBklc,
    Below,
    UnknownTarget,
    /// Distance only bounded and the bounds straddle the target.
    Undetermined,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::RecordBreaking => "record_breaking",
            Classification::TiesBklc => "ties_bklc",
            Classification::Below => "below",
            Classification::UnknownTarget => "unknown_target",
            Classification::Undetermined => "undetermined",
        }
    }
}

pub fn classify_distance(d: DistanceStatus, target: Option<usize>) -> Classification {
    let Some(t) = target else {
        return Classification::UnknownTarget;
    };
    match d.bounds() {
        None => Classification::Undetermined,
        Some((lo, _)) if lo > t => Classification::RecordBreaking,
        Some((_, up)) if up < t => Classification::Below,
        Some((lo, up)) if lo == up => Classification::TiesBklc,
        _ => Classification::Undetermined,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_lookup() {
        let t = TargetTable::parse("q,n,k,d_best\n2, 39, 24, 6\n2,111,38,24\n".as_bytes()).unwrap();
        assert_eq!(t.get(2, 39, 24), Some(6));
        assert_eq!(t.get(2, 111, 38), Some(24));
        assert_eq!(t.get(3, 39, 24), None);
    }

    #[test]
    fn malformed_tables() {
        for bad in [
            "q,n,k\n2,3,1\n",
            "q,n,k,d_best\n2,x,1,1\n",
            "q,n,k,d_best\n2,3,4,1\n",
            "q,n,k,d_best\n2,7,4,3\n2,7,4,4\n",
        ] {
            assert!(matches!(TargetTable::parse(bad.as_bytes()), Err(Error::TargetTableError(_))), "{bad}");
        }
    }

    #[test]
    fn classification() {
        let ex = |d| DistanceStatus::Exact { d };
        assert_eq!(classify_distance(ex(25), Some(24)), Classification::RecordBreaking);
        assert_eq!(classify_distance(ex(6), Some(6)), Classification::TiesBklc);
        assert_eq!(classify_distance(ex(5), Some(6)), Classification::Below);
        assert_eq!(classify_distance(ex(5), None), Classification::UnknownTarget);
        let b = DistanceStatus::bounded(4, 8).unwrap();
        assert_eq!(classify_distance(b, Some(6)), Classification::Undetermined);
        assert_eq!(classify_distance(b, Some(3)), Classification::RecordBreaking);
        assert_eq!(classify_distance(b, Some(9)), Classification::Below);
    }
}
