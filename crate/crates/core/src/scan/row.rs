use std::fmt::Write as _;

use crate::arith::Parity;
use crate::error::{Error, Result};
use crate::lfun::Method;

pub const CSV_HEADER: &str =
    "q,parity,L,err_bound,c1,c2,c3,c4,beta_upper,S,g,uli,lli,h,joshi1,joshi2,method";

/// One line of scan output.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub q: u64,
    pub parity: Parity,
    pub l: f64,
    pub err_bound: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub beta_upper: f64,
    pub s: f64,
    pub gq: f64,
    pub uli: Option<f64>,
    pub lli: Option<f64>,
    pub h: Option<u64>,
    pub joshi1: bool,
    pub joshi2: bool,
    pub method: Method,
}

/// Named numeric columns, for plotting and analytics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    L,
    C1,
    C2,
    C3,
    C4,
    BetaUpper,
    Uli,
    Lli,
}

impl Column {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "L" | "l" => Column::L,
            "c1" => Column::C1,
            "c2" => Column::C2,
            "c3" => Column::C3,
            "c4" => Column::C4,
            "beta_upper" => Column::BetaUpper,
            "uli" => Column::Uli,
            "lli" => Column::Lli,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Column::L => "L",
            Column::C1 => "c1",
            Column::C2 => "c2",
            Column::C3 => "c3",
            Column::C4 => "c4",
            Column::BetaUpper => "beta_upper",
            Column::Uli => "uli",
            Column::Lli => "lli",
        }
    }
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl ScanRow {
    pub fn get(&self, column: Column) -> Option<f64> {
        match column {
            Column::L => Some(self.l),
            Column::C1 => Some(self.c1),
            Column::C2 => Some(self.c2),
            Column::C3 => Some(self.c3),
            Column::C4 => Some(self.c4),
            Column::BetaUpper => Some(self.beta_upper),
            Column::Uli => self.uli,
            Column::Lli => self.lli,
        }
    }

    /// Appends the CSV line (with trailing LF). Floats use the shortest
    /// representation that parses back to the same value; `err_bound` is
    /// written in exponent form.
    pub fn write_csv(&self, out: &mut String) {
        writeln!(
            out,
            "{},{},{},{:e},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.q,
            self.parity.tag(),
            self.l,
            self.err_bound,
            self.c1,
            self.c2,
            self.c3,
            self.c4,
            self.beta_upper,
            self.s,
            self.gq,
            opt(self.uli),
            opt(self.lli),
            opt(self.h),
            self.joshi1 as u8,
            self.joshi2 as u8,
            self.method.tag()
        )
        .expect("writing to a String cannot fail");
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        self.write_csv(&mut s);
        s
    }

    /// Parses one data line; `line` is the 1-based line number for errors.
    pub fn parse_csv(text: &str, line: usize) -> Result<Self> {
        let err = |reason: String| Error::Csv { line, reason };
        let fields: Vec<&str> = text.trim_end_matches(['\r', '\n']).split(',').collect();
        if fields.len() != 17 {
            return Err(err(format!("expected 17 fields, found {}", fields.len())));
        }
        let num = |i: usize| -> Result<f64> {
            fields[i]
                .parse::<f64>()
                .map_err(|e| err(format!("field {i} ({:?}): {e}", fields[i])))
        };
        let opt_num = |i: usize| -> Result<Option<f64>> {
            if fields[i].is_empty() {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        let flag = |i: usize| -> Result<bool> {
            match fields[i] {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(err(format!("field {i}: expected 0 or 1, found {other:?}"))),
            }
        };
        let q = fields[0]
            .parse::<u64>()
            .map_err(|e| err(format!("q: {e}")))?;
        let parity = match fields[1] {
            "E" => Parity::Even,
            "O" => Parity::Odd,
            other => return Err(err(format!("parity {other:?}"))),
        };
        let h = if fields[13].is_empty() {
            None
        } else {
            Some(
                fields[13]
                    .parse::<u64>()
                    .map_err(|e| err(format!("h: {e}")))?,
            )
        };
        Ok(ScanRow {
            q,
            parity,
            l: num(2)?,
            err_bound: num(3)?,
            c1: num(4)?,
            c2: num(5)?,
            c3: num(6)?,
            c4: num(7)?,
            beta_upper: num(8)?,
            s: num(9)?,
            gq: num(10)?,
            uli: opt_num(11)?,
            lli: opt_num(12)?,
            h,
            joshi1: flag(14)?,
            joshi2: flag(15)?,
            method: Method::from_tag(fields[16])
                .ok_or_else(|| err(format!("method {:?}", fields[16])))?,
        })
    }
}

/// Reads a scan CSV (header required).
pub fn read_csv(text: &str) -> Result<Vec<ScanRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == CSV_HEADER => {}
        _ => {
            return Err(Error::Csv {
                line: 1,
                reason: "missing or unexpected header".into(),
            })
        }
    }
    lines
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| ScanRow::parse_csv(l, i + 1))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> ScanRow {
        ScanRow {
            q: 7,
            parity: Parity::Odd,
            l: 1.1874104117237259,
            err_bound: 1.2e-16,
            c1: 0.6102082422974059,
            c2: 0.2764326379105725,
            c3: 1.4054937155803007,
            c4: 0.8019454888120968,
            beta_upper: 0.8579417256008592,
            s: 1.0,
            gq: 0.5,
            uli: Some(0.5),
            lli: Some(1.5),
            h: Some(1),
            joshi1: true,
            joshi2: true,
            method: Method::Alternating,
        }
    }

    #[test]
    fn format_is_stable() {
        let mut r = sample();
        r.uli = None;
        r.h = None;
        assert_eq!(
            r.to_csv(),
            "7,O,1.1874104117237259,1.2e-16,0.6102082422974059,0.2764326379105725,\
             1.4054937155803007,0.8019454888120968,0.8579417256008592,1,0.5,,1.5,,1,1,alternating\n"
        );
    }

    #[test]
    fn rejects_garbage() {
        assert!(ScanRow::parse_csv("1,2,3", 2).is_err());
        let bad = sample().to_csv().replace(",alternating", ",magic");
        assert!(matches!(
            ScanRow::parse_csv(&bad, 5),
            Err(Error::Csv { line: 5, .. })
        ));
        assert!(read_csv("q,wrong\n").is_err());
    }

    proptest! {
        #[test]
        fn csv_round_trip(l in 1e-3f64..100.0, c2 in 0.0f64..1.0, uli in proptest::option::of(0.0f64..2.0), h in proptest::option::of(1u64..100_000), tiny in 1e-30f64..1e-10) {
            let mut r = sample();
            r.l = l;
            r.c2 = c2;
            r.uli = uli;
            r.h = h;
            r.err_bound = tiny;
            let back = ScanRow::parse_csv(&r.to_csv(), 2).unwrap();
            prop_assert_eq!(back, r);
        }
    }
}
