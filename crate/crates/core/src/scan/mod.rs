//! Range scans: one [`ScanRow`] per prime, computed on a pool of workers and
//! emitted in ascending `q` by a single sequencer that also owns the
//! checkpoint.
//!
//! Primes are split into fixed blocks of `block_size` primes. `S(q)` is a
//! prefix sum over all integers, so a sequential pass first records the
//! compensated accumulator state at each block start; workers clone that
//! state and extend it. The rounding sequence, and therefore the output, is
//! the same for any worker count.

mod analytics;
mod checkpoint;
mod row;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs::OpenOptions;
use std::io::{self, BufWriter, Seek, SeekFrom, Write};
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{mpsc, Condvar, Mutex};
use std::thread;

use sha2::{Digest, Sha256};

pub use analytics::{extrema, joshi_census, ExtremaReport, Extremum, JoshiCensus};
pub use checkpoint::Checkpoint;
pub use row::{read_csv, Column, ScanRow, CSV_HEADER};

use crate::arith::{build_power_sequence, primes_in_range, PrimeContext};
use crate::bounds::{index_record, siegel_bounds_with_s, SAccumulator};
use crate::error::{Error, Result};
use crate::lfun::{self, estimate_err_bound, LValue, Method};
use crate::real::Real;

pub const DEFAULT_BLOCK_SIZE: usize = 4096;

/// Header of the optional all-character output.
pub const SPECTRUM_HEADER: &str = "q,j,abs_L";

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    pub qmin: u64,
    pub qmax: u64,
    pub workers: usize,
    pub method: Method,
    /// Primes per work unit.
    pub block_size: usize,
    /// Machine epsilon fed to the a priori error model.
    pub eps_model: f64,
    /// Also emit `|L(1, χ)|` for every character mod each `q`.
    pub emit_spectrum: bool,
    pub checkpoint_path: Option<PathBuf>,
}

impl ScanConfig {
    pub fn new(qmin: u64, qmax: u64) -> Self {
        Self {
            qmin,
            qmax,
            workers: 1,
            method: Method::Alternating,
            block_size: DEFAULT_BLOCK_SIZE,
            eps_model: f64::unit_roundoff(),
            emit_spectrum: false,
            checkpoint_path: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Config(m.to_owned()));
        if self.qmin < 3 {
            return fail("qmin must be at least 3");
        }
        if self.qmax < self.qmin {
            return fail("qmax must not be below qmin");
        }
        if self.qmax >= crate::arith::MAX_MODULUS {
            return fail("qmax must be below 2^31");
        }
        if self.workers == 0 {
            return fail("at least one worker is required");
        }
        if self.block_size == 0 {
            return fail("block size must be positive");
        }
        if !(self.eps_model > 0.0 && self.eps_model.is_finite()) {
            return fail("eps_model must be positive and finite");
        }
        Ok(())
    }

    /// Identifies everything that affects the output bytes; the worker count does not.
    pub fn hash(&self) -> String {
        let canonical = format!(
            "v1|{}|{}|{}|{}|{:e}|{}",
            self.qmin,
            self.qmax,
            self.method.tag(),
            self.block_size,
            self.eps_model,
            self.emit_spectrum
        );
        Sha256::digest(canonical.as_bytes())[..16]
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Every per-prime quantity for `q`, given `S` accumulated up to any `n <= q`.
pub fn compute_row(
    ctx: &PrimeContext,
    s_acc: &mut SAccumulator<f64>,
    method: Method,
    eps_model: f64,
) -> Result<ScanRow> {
    let q = ctx.q;
    let wrap = |e: Error| Error::Evaluation {
        q,
        source: Box::new(e),
    };
    let l: LValue<f64> = match method {
        Method::Alternating => lfun::l1_alternating_streaming(ctx, eps_model),
        Method::Direct => lfun::l1_direct(q).map_err(wrap)?,
        Method::Fft => {
            let seq = build_power_sequence(ctx).map_err(wrap)?;
            lfun::l1_fft(ctx, &seq).map_err(wrap)?
        }
    };
    let l = LValue {
        err_bound: estimate_err_bound(q, method, eps_model),
        ..l
    };
    let s = s_acc.extend_to(q);
    let b = siegel_bounds_with_s(&l, s);
    let idx = index_record(&l).map_err(wrap)?;
    Ok(ScanRow {
        q,
        parity: l.parity,
        l: l.value,
        err_bound: l.err_bound,
        c1: b.c1,
        c2: b.c2,
        c3: b.c3,
        c4: b.c4,
        beta_upper: b.beta_upper,
        s: b.s,
        gq: b.gq,
        uli: idx.uli,
        lli: idx.lli,
        h: idx.class_number.map(|c| c.h),
        joshi1: idx.joshi1,
        joshi2: idx.joshi2,
        method,
    })
}

/// Result of one work unit.
#[derive(Debug, Clone)]
pub struct BlockOutput {
    pub index: usize,
    pub rows: Vec<ScanRow>,
    /// `(q, g)` for every prime in the block.
    pub roots: Vec<(u64, u64)>,
    /// Preformatted spectrum lines, empty unless requested.
    pub spectrum: String,
}

/// Returned by block callbacks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

struct Plan {
    primes: Vec<u64>,
    bases: Vec<SAccumulator<f64>>,
    block_size: usize,
}

impl Plan {
    fn new(config: &ScanConfig) -> Self {
        let primes = primes_in_range(config.qmin, config.qmax);
        let mut acc = SAccumulator::new();
        let bases = primes
            .chunks(config.block_size)
            .map(|chunk| {
                acc.extend_to(chunk[0]);
                acc
            })
            .collect();
        Self {
            primes,
            bases,
            block_size: config.block_size,
        }
    }

    fn blocks(&self) -> usize {
        self.bases.len()
    }

    fn block(&self, i: usize) -> &[u64] {
        let start = i * self.block_size;
        &self.primes[start..(start + self.block_size).min(self.primes.len())]
    }
}

fn compute_block(
    config: &ScanConfig,
    plan: &Plan,
    index: usize,
    known_roots: &HashMap<u64, u64>,
) -> Result<BlockOutput> {
    let mut acc = plan.bases[index];
    let primes = plan.block(index);
    let mut rows = Vec::with_capacity(primes.len());
    let mut roots = Vec::with_capacity(primes.len());
    let mut spectrum = String::new();
    for &q in primes {
        let ctx = match known_roots.get(&q) {
            Some(&g) => PrimeContext::with_root(q, g),
            None => PrimeContext::new(q),
        }
        .map_err(|e| Error::Evaluation {
            q,
            source: Box::new(e),
        })?;
        rows.push(compute_row(
            &ctx,
            &mut acc,
            config.method,
            config.eps_model,
        )?);
        roots.push((q, ctx.g));
        if config.emit_spectrum {
            let seq = build_power_sequence(&ctx)?;
            let spec = lfun::full_spectrum::<f64>(&ctx, &seq)?;
            for (j, v) in spec.iter() {
                writeln!(spectrum, "{q},{j},{v}").expect("String write");
            }
        }
    }
    Ok(BlockOutput {
        index,
        rows,
        roots,
        spectrum,
    })
}

/// Number of blocks `config` splits its range into.
pub fn block_count(config: &ScanConfig) -> usize {
    primes_in_range(config.qmin, config.qmax)
        .len()
        .div_ceil(config.block_size)
}

/// Runs blocks `start_block..` on `config.workers` threads and hands them to
/// `sink` strictly in order. Stops early when `sink` returns [`Flow::Stop`].
/// Returns the index of the first block not delivered.
pub fn run_blocks(
    config: &ScanConfig,
    start_block: usize,
    known_roots: &HashMap<u64, u64>,
    sink: &mut dyn FnMut(BlockOutput) -> Result<Flow>,
) -> Result<usize> {
    config.validate()?;
    let plan = Plan::new(config);
    let total = plan.blocks();
    if start_block >= total {
        return Ok(total);
    }
    let workers = config.workers.min(total - start_block);
    // blocks may run at most this far ahead of the sequencer
    let window = 2 * workers;

    let next_job = AtomicUsize::new(start_block);
    let cancel = AtomicBool::new(false);
    let emitted = Mutex::new(start_block);
    let advanced = Condvar::new();
    let (tx, rx) = mpsc::channel::<(usize, Result<BlockOutput>)>();

    thread::scope(|scope| {
        for _ in 0..workers {
            let tx = tx.clone();
            let (plan, next_job, cancel, emitted, advanced) =
                (&plan, &next_job, &cancel, &emitted, &advanced);
            scope.spawn(move || loop {
                let index = next_job.fetch_add(1, Ordering::SeqCst);
                if index >= total {
                    break;
                }
                {
                    let mut done = emitted.lock().expect("sequencer lock");
                    while index >= *done + window && !cancel.load(Ordering::SeqCst) {
                        done = advanced.wait(done).expect("sequencer lock");
                    }
                }
                if cancel.load(Ordering::SeqCst) {
                    break;
                }
                let out = compute_block(config, plan, index, known_roots);
                if tx.send((index, out)).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let stop = |cancel: &AtomicBool| {
            cancel.store(true, Ordering::SeqCst);
            let _guard = emitted.lock().expect("sequencer lock");
            advanced.notify_all();
        };

        let mut pending = BTreeMap::new();
        let mut next = start_block;
        let result = (|| {
            while next < total {
                let Ok((index, out)) = rx.recv() else {
                    break;
                };
                pending.insert(index, out);
                while let Some(out) = pending.remove(&next) {
                    let flow = sink(out?)?;
                    next += 1;
                    {
                        let mut done = emitted.lock().expect("sequencer lock");
                        *done = next;
                        advanced.notify_all();
                    }
                    if flow == Flow::Stop {
                        return Ok(next);
                    }
                }
            }
            Ok(next)
        })();
        stop(&cancel);
        result
    })
}

/// All rows for `config`, in memory.
pub fn scan_rows(config: &ScanConfig) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::new();
    run_blocks(config, 0, &HashMap::new(), &mut |block| {
        rows.extend(block.rows);
        Ok(Flow::Continue)
    })?;
    Ok(rows)
}

/// Where a scan resumes and what it has written so far.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Position {
    pub block: usize,
    pub rows_bytes: u64,
    pub spectrum_bytes: u64,
}

/// Progress handed to the per-block hook after the block's bytes are written.
#[derive(Debug)]
pub struct Progress<'a> {
    pub position: Position,
    pub total_blocks: usize,
    pub block: &'a BlockOutput,
}

/// Streams CSV for `config` into `rows_out` (and spectrum lines into
/// `spectrum_out` when requested), starting at `from`. The header is written
/// only when starting from scratch. Returns the final position.
pub fn scan_to_writer(
    config: &ScanConfig,
    rows_out: &mut dyn Write,
    mut spectrum_out: Option<&mut dyn Write>,
    from: Position,
    known_roots: &HashMap<u64, u64>,
    on_block: &mut dyn FnMut(&Progress<'_>) -> Result<Flow>,
) -> Result<Position> {
    config.validate()?;
    let total = block_count(config);
    let mut pos = from;
    if pos.block == 0 && pos.rows_bytes == 0 {
        let header = format!("{CSV_HEADER}\n");
        rows_out.write_all(header.as_bytes())?;
        pos.rows_bytes += header.len() as u64;
        if let Some(out) = spectrum_out.as_deref_mut() {
            let header = format!("{SPECTRUM_HEADER}\n");
            out.write_all(header.as_bytes())?;
            pos.spectrum_bytes += header.len() as u64;
        }
    }
    let mut text = String::new();
    run_blocks(config, from.block, known_roots, &mut |block| {
        text.clear();
        for row in &block.rows {
            row.write_csv(&mut text);
        }
        rows_out.write_all(text.as_bytes())?;
        rows_out.flush()?;
        pos.rows_bytes += text.len() as u64;
        if let Some(out) = spectrum_out.as_deref_mut() {
            out.write_all(block.spectrum.as_bytes())?;
            out.flush()?;
            pos.spectrum_bytes += block.spectrum.len() as u64;
        }
        pos.block = block.index + 1;
        on_block(&Progress {
            position: pos,
            total_blocks: total,
            block: &block,
        })
    })?;
    Ok(pos)
}

/// Outcome of [`scan_file`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanSummary {
    pub total_blocks: usize,
    pub blocks_written: usize,
    pub rows_written: usize,
    pub completed: bool,
}

/// File-backed scan with optional checkpointing.
///
/// With `resume`, an existing checkpoint (whose config hash must match) is
/// honoured: the outputs are truncated to the recorded lengths and the scan
/// continues at the recorded block. `stop` is polled after every block; when
/// set, the scan ends cleanly with the checkpoint up to date.
pub fn scan_file(
    config: &ScanConfig,
    out_path: &std::path::Path,
    spectrum_path: Option<&std::path::Path>,
    resume: bool,
    stop: &AtomicBool,
) -> Result<ScanSummary> {
    config.validate()?;
    if config.emit_spectrum != spectrum_path.is_some() {
        return Err(Error::Config(
            "emit_spectrum requires exactly one spectrum output path".into(),
        ));
    }
    let hash = config.hash();
    let total = block_count(config);
    let existing = match (&config.checkpoint_path, resume) {
        (Some(path), true) if path.exists() => {
            let c = Checkpoint::load(path)?;
            if c.config_hash != hash {
                return Err(Error::Checkpoint(format!(
                    "{} was written for a different configuration",
                    path.display()
                )));
            }
            Some(c)
        }
        _ => None,
    };
    let mut state = existing.unwrap_or(Checkpoint {
        config_hash: hash,
        total_blocks: total,
        ..Default::default()
    });
    if state.is_complete() {
        return Ok(ScanSummary {
            total_blocks: total,
            blocks_written: 0,
            rows_written: 0,
            completed: true,
        });
    }

    let open = |path: &std::path::Path, keep: u64| -> io::Result<std::fs::File> {
        let mut f = OpenOptions::new()
            .create(true)
            .write(true)
            .truncate(false)
            .open(path)?;
        f.set_len(keep)?;
        f.seek(SeekFrom::End(0))?;
        Ok(f)
    };
    let mut rows_out = BufWriter::new(open(out_path, state.rows_bytes)?);
    let mut spectrum_file = match spectrum_path {
        Some(p) => Some(BufWriter::new(open(p, state.spectrum_bytes)?)),
        None => None,
    };
    let from = Position {
        block: state.next_block,
        rows_bytes: state.rows_bytes,
        spectrum_bytes: state.spectrum_bytes,
    };
    let known: HashMap<u64, u64> = state.roots.iter().copied().collect();
    let mut blocks_written = 0;
    let mut rows_written = 0;
    let end = scan_to_writer(
        config,
        &mut rows_out,
        spectrum_file.as_mut().map(|w| w as &mut dyn Write),
        from,
        &known,
        &mut |p| {
            blocks_written += 1;
            rows_written += p.block.rows.len();
            state.next_block = p.position.block;
            state.rows_bytes = p.position.rows_bytes;
            state.spectrum_bytes = p.position.spectrum_bytes;
            state.roots.extend_from_slice(&p.block.roots);
            if let Some(path) = &config.checkpoint_path {
                state.store(path)?;
            }
            Ok(if stop.load(Ordering::SeqCst) {
                Flow::Stop
            } else {
                Flow::Continue
            })
        },
    )?;
    rows_out.flush()?;
    if let Some(w) = spectrum_file.as_mut() {
        w.flush()?;
    }
    Ok(ScanSummary {
        total_blocks: total,
        blocks_written,
        rows_written,
        completed: end.block >= total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(ScanConfig::new(3, 100).validate().is_ok());
        assert!(ScanConfig::new(2, 100).validate().is_err());
        assert!(ScanConfig::new(50, 10).validate().is_err());
        let mut c = ScanConfig::new(3, 100);
        c.workers = 0;
        assert!(c.validate().is_err());
        c.workers = 3;
        let h = c.hash();
        c.workers = 7;
        assert_eq!(c.hash(), h);
        c.block_size = 10;
        assert_ne!(c.hash(), h);
    }

    #[test]
    fn rows_are_ascending_and_complete() {
        let mut c = ScanConfig::new(3, 1000);
        c.block_size = 16;
        c.workers = 3;
        let rows = scan_rows(&c).unwrap();
        assert_eq!(rows.len(), 167);
        assert!(rows.windows(2).all(|w| w[0].q < w[1].q));
        assert!(rows.iter().all(|r| r.l > 0.0 && r.l.is_finite()));
        assert_eq!(rows[0].uli, None);
        assert!(rows[1].uli.is_some());
    }

    #[test]
    fn evaluation_errors_name_the_prime() {
        // a root that is not a generator is rejected with the offending q
        let mut known = HashMap::new();
        known.insert(7u64, 2u64);
        let c = ScanConfig::new(3, 20);
        let err = run_blocks(&c, 0, &known, &mut |_| Ok(Flow::Continue)).unwrap_err();
        assert!(matches!(err, Error::Evaluation { q: 7, .. }), "{err}");
    }

    #[test]
    fn stop_flow_halts_after_block() {
        let mut c = ScanConfig::new(3, 2000);
        c.block_size = 10;
        c.workers = 4;
        let mut seen = Vec::new();
        let next = run_blocks(&c, 0, &HashMap::new(), &mut |b| {
            seen.push(b.index);
            Ok(if b.index == 5 {
                Flow::Stop
            } else {
                Flow::Continue
            })
        })
        .unwrap();
        assert_eq!(next, 6);
        assert_eq!(seen, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn spectrum_output() {
        let mut c = ScanConfig::new(3, 13);
        c.emit_spectrum = true;
        let mut rows = Vec::new();
        let mut spec = Vec::new();
        scan_to_writer(
            &c,
            &mut rows,
            Some(&mut spec),
            Position::default(),
            &HashMap::new(),
            &mut |_| Ok(Flow::Continue),
        )
        .unwrap();
        let spec = String::from_utf8(spec).unwrap();
        let lines: Vec<&str> = spec.lines().collect();
        assert_eq!(lines[0], SPECTRUM_HEADER);
        // q - 2 non-principal characters per prime
        assert_eq!(lines.len() - 1, 1 + 3 + 5 + 9 + 11);
        assert!(lines.contains(&"3,1,0.6045997880780726"));
    }
}
