use crate::error::{Error, Result};

use super::row::{Column, ScanRow};

/// Minimum and maximum of one column with the primes attaining them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub min: f64,
    pub argmin: u64,
    pub max: f64,
    pub argmax: u64,
}

#[derive(Debug, Default)]
struct Tracker(Option<Extremum>);

impl Tracker {
    // rows arrive in ascending q, so strict comparisons keep the smallest q on ties
    fn push(&mut self, q: u64, v: f64) {
        match &mut self.0 {
            None => {
                self.0 = Some(Extremum {
                    min: v,
                    argmin: q,
                    max: v,
                    argmax: q,
                })
            }
            Some(e) => {
                if v < e.min || (v == e.min && q < e.argmin) {
                    e.min = v;
                    e.argmin = q;
                }
                if v > e.max || (v == e.max && q < e.argmax) {
                    e.max = v;
                    e.argmax = q;
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtremaReport {
    pub rows: usize,
    pub c1: Extremum,
    pub c2: Extremum,
    /// Over `q >= 5`.
    pub uli: Option<Extremum>,
    /// Over `q >= 5` with `LLI >= 1`.
    pub lli: Option<Extremum>,
    /// `(q, LLI)` for primes with `LLI < 1`, excluded from `lli`.
    pub lli_below_one: Vec<(u64, f64)>,
    /// `(q, ULI)` for primes with `ULI > 1`, including `q = 3`.
    pub uli_above_one: Vec<(u64, f64)>,
}

impl ExtremaReport {
    pub fn get(&self, column: Column) -> Option<Extremum> {
        match column {
            Column::C1 => Some(self.c1),
            Column::C2 => Some(self.c2),
            Column::Uli => self.uli,
            Column::Lli => self.lli,
            _ => None,
        }
    }
}

pub fn extrema<'a>(rows: impl IntoIterator<Item = &'a ScanRow>) -> Result<ExtremaReport> {
    let mut c1 = Tracker::default();
    let mut c2 = Tracker::default();
    let mut uli = Tracker::default();
    let mut lli = Tracker::default();
    let mut lli_below_one = Vec::new();
    let mut uli_above_one = Vec::new();
    let mut count = 0;
    for r in rows {
        count += 1;
        c1.push(r.q, r.c1);
        c2.push(r.q, r.c2);
        let (u, l) = match (r.uli, r.lli) {
            (Some(u), Some(l)) => (u, l),
            _ => crate::bounds::littlewood_raw(r.q, r.l),
        };
        if u > 1.0 {
            uli_above_one.push((r.q, u));
        }
        if l < 1.0 {
            lli_below_one.push((r.q, l));
        }
        if r.q >= 5 {
            uli.push(r.q, u);
            if l >= 1.0 {
                lli.push(r.q, l);
            }
        }
    }
    let (Some(c1), Some(c2)) = (c1.0, c2.0) else {
        return Err(Error::EmptyInput);
    };
    Ok(ExtremaReport {
        rows: count,
        c1,
        c2,
        uli: uli.0,
        lli: lli.0,
        lli_below_one,
        uli_above_one,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoshiCensus {
    pub count1: usize,
    pub count2: usize,
    pub first1: Vec<u64>,
    pub first2: Vec<u64>,
}

/// Totals of both Joshi flags and the first `first_n` primes realizing each.
pub fn joshi_census<'a>(
    rows: impl IntoIterator<Item = &'a ScanRow>,
    first_n: usize,
) -> JoshiCensus {
    let mut c = JoshiCensus {
        count1: 0,
        count2: 0,
        first1: Vec::new(),
        first2: Vec::new(),
    };
    for r in rows {
        if r.joshi1 {
            c.count1 += 1;
            if c.first1.len() < first_n {
                c.first1.push(r.q);
            }
        }
        if r.joshi2 {
            c.count2 += 1;
            if c.first2.len() < first_n {
                c.first2.push(r.q);
            }
        }
    }
    c
}
