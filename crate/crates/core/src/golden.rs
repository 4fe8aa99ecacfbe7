//! Reference values for every odd prime up to 1000, given to 20 digits,
//! and the check of scan output against them.

use crate::error::{Error, Result};
use crate::scan::ScanRow;

/// Default relative tolerance. Binary64 cannot reproduce all 20 given digits.
pub const GOLDEN_TOLERANCE: f64 = 1e-11;

pub const EMBEDDED: &str = include_str!("../fixtures/golden.csv");

pub const COLUMNS: [&str; 6] = ["L", "beta_upper", "c1", "c2", "c3", "c4"];

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenRow {
    pub q: u64,
    /// In the order of [`COLUMNS`].
    pub values: [f64; 6],
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenMismatch {
    pub q: u64,
    pub column: &'static str,
    pub got: f64,
    pub want: f64,
    pub rel: f64,
}

/// Largest relative deviation seen in one column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnWorst {
    pub column: &'static str,
    pub rel: f64,
    pub q: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenReport {
    pub checked: usize,
    pub tolerance: f64,
    pub worst: Vec<ColumnWorst>,
    pub mismatches: Vec<GoldenMismatch>,
}

impl GoldenReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// `Ok(self)` on pass, [`Error::Verification`] otherwise.
    pub fn into_result(self) -> Result<Self> {
        if self.passed() {
            Ok(self)
        } else {
            Err(Error::Verification(self.mismatches))
        }
    }
}

pub fn parse_golden(text: &str) -> Result<Vec<GoldenRow>> {
    let mut lines = text.lines().enumerate();
    let header = lines.next().map(|(_, h)| h.trim_end());
    let expected = format!("q,{}", COLUMNS.join(","));
    if header != Some(expected.as_str()) {
        return Err(Error::Csv {
            line: 1,
            reason: format!("expected header {expected:?}"),
        });
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let err = |reason: String| Error::Csv {
            line: i + 1,
            reason,
        };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 1 + COLUMNS.len() {
            return Err(err(format!("expected {} fields", 1 + COLUMNS.len())));
        }
        let q = fields[0].parse().map_err(|e| err(format!("q: {e}")))?;
        let mut values = [0.0; 6];
        for (v, f) in values.iter_mut().zip(&fields[1..]) {
            *v = f.parse().map_err(|e| err(format!("{f:?}: {e}")))?;
        }
        rows.push(GoldenRow { q, values });
    }
    Ok(rows)
}

pub fn embedded() -> Vec<GoldenRow> {
    parse_golden(EMBEDDED).expect("embedded fixture is well formed")
}

fn row_values(r: &ScanRow) -> [f64; 6] {
    [r.l, r.beta_upper, r.c1, r.c2, r.c3, r.c4]
}

/// Compares `rows` against `golden` prime by prime. Every golden prime must
/// be present in `rows`.
pub fn verify_golden(rows: &[ScanRow], golden: &[GoldenRow], tolerance: f64) -> GoldenReport {
    let mut worst: Vec<ColumnWorst> = COLUMNS
        .iter()
        .map(|&column| ColumnWorst {
            column,
            rel: 0.0,
            q: 0,
        })
        .collect();
    let mut mismatches = Vec::new();
    for g in golden {
        let Ok(i) = rows.binary_search_by_key(&g.q, |r| r.q) else {
            for &column in &COLUMNS {
                mismatches.push(GoldenMismatch {
                    q: g.q,
                    column,
                    got: f64::NAN,
                    want: g.values[0],
                    rel: f64::INFINITY,
                });
            }
            continue;
        };
        let got = row_values(&rows[i]);
        for (k, &column) in COLUMNS.iter().enumerate() {
            let want = g.values[k];
            let rel = ((got[k] - want) / want).abs();
            if rel.is_nan() || rel > worst[k].rel {
                worst[k] = ColumnWorst {
                    column,
                    rel,
                    q: g.q,
                };
            }
            if rel.is_nan() || rel > tolerance {
                mismatches.push(GoldenMismatch {
                    q: g.q,
                    column,
                    got: got[k],
                    want,
                    rel,
                });
            }
        }
    }
    GoldenReport {
        checked: golden.len(),
        tolerance,
        worst,
        mismatches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_fixture_shape() {
        let g = embedded();
        assert_eq!(g.len(), 167);
        assert_eq!(g[0].q, 3);
        assert_eq!(g.last().unwrap().q, 997);
        assert!((g.last().unwrap().values[5] - 0.02990739982056).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_fixture() {
        assert!(parse_golden("q,L\n3,1\n").is_err());
        let broken = EMBEDDED.replacen("0.60459978807807261686", "zero", 1);
        assert!(matches!(
            parse_golden(&broken),
            Err(Error::Csv { line: 2, .. })
        ));
    }
}
