mod plot;

use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use siegel::arith::{build_power_sequence, PrimeContext};
use siegel::bounds::{index_record, siegel_bounds};
use siegel::fftcheck::roundtrip_diagnose;
use siegel::golden::{self, GOLDEN_TOLERANCE};
use siegel::lfun::{self, estimate_err_bound, LValue};
use siegel::scan::{self, Column, Flow, Position, ScanConfig, ScanRow};
use siegel::Method;

use plot::{Kind, PlotSpec};

/// L(1, χ) for quadratic characters modulo odd primes, with Siegel-zero
/// bounds, Littlewood indices, Joshi census and class numbers.
#[derive(Parser, Debug)]
#[command(name = "siegel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Every quantity for one prime.
    Single {
        /// Odd prime modulus.
        q: u64,
        /// Evaluation method.
        #[arg(long, value_parser = parse_method, default_value = "alternating")]
        method: Method,
        /// Evaluate with all three methods and print each.
        #[arg(long)]
        all_methods: bool,
    },
    /// One CSV row per prime in a range.
    Scan(ScanArgs),
    /// Recompute every odd prime up to 1000 and compare with the reference tables.
    Verify {
        /// Reference CSV to use instead of the embedded one.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Relative tolerance.
        #[arg(long, default_value_t = GOLDEN_TOLERANCE)]
        tolerance: f64,
        #[command(flatten)]
        workers: Workers,
    },
    /// Minima and maxima of c1, c2, ULI and LLI.
    Extrema(Source),
    /// Primes satisfying each Joshi inequality.
    Census {
        #[command(flatten)]
        source: Source,
        /// How many of the first primes to list.
        #[arg(long, default_value_t = 10)]
        first: usize,
    },
    /// FFT round-trip accuracy against the error model.
    Fftcheck {
        /// Odd prime modulus.
        q: u64,
        /// Machine epsilon for the model, as a number or `2^-N`.
        #[arg(long, value_parser = parse_eps, default_value = "2^-53")]
        eps: f64,
    },
    /// SVG scatter plot or histogram of one column of a scan CSV.
    Plot {
        /// Scan CSV to read.
        #[arg(long)]
        input: PathBuf,
        /// Column: c1, c2, c3, c4, uli, lli, L or beta_upper.
        #[arg(long, value_parser = parse_column)]
        column: Column,
        #[arg(long, value_enum, default_value = "scatter")]
        kind: Kind,
        /// Number of equal-width histogram bins.
        #[arg(long, default_value_t = 90, value_parser = clap::value_parser!(u64).range(1..))]
        bins: u64,
        /// Smallest q to include.
        #[arg(long, default_value_t = 3)]
        from: u64,
        /// Largest q to include.
        #[arg(long, default_value_t = u64::MAX)]
        to: u64,
        /// Logarithmic q axis (scatter).
        #[arg(long)]
        log_x: bool,
        /// Reference line `VALUE[:LABEL]`; repeatable.
        #[arg(long = "ref", value_parser = parse_reference)]
        reference: Vec<(f64, String)>,
        /// Output SVG path.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct Workers {
    /// Worker threads [default: available cores].
    #[arg(long, env = "SIEGEL_WORKERS")]
    workers: Option<usize>,
}

impl Workers {
    fn get(&self) -> usize {
        self.workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

#[derive(Args, Debug)]
struct ScanArgs {
    /// Smallest q.
    #[arg(long, default_value_t = 3)]
    from: u64,
    /// Largest q.
    #[arg(long)]
    to: u64,
    #[command(flatten)]
    workers: Workers,
    #[arg(long, value_parser = parse_method, default_value = "alternating")]
    method: Method,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Checkpoint file, updated after every block (requires --out).
    #[arg(long, requires = "out")]
    checkpoint: Option<PathBuf>,
    /// Continue from the checkpoint instead of starting over.
    #[arg(long, requires = "checkpoint")]
    resume: bool,
    /// Also write |L(1, χ)| of every character mod q to this CSV (requires --out).
    #[arg(long, requires = "out")]
    spectrum: Option<PathBuf>,
    /// Primes per work unit.
    #[arg(long, default_value_t = scan::DEFAULT_BLOCK_SIZE)]
    block_size: usize,
}

#[derive(Args, Debug)]
struct Source {
    /// Scan CSV to analyse; otherwise the range is computed.
    #[arg(long, conflicts_with_all = ["from", "to"])]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    from: u64,
    #[arg(long, required_unless_present = "input")]
    to: Option<u64>,
    #[command(flatten)]
    workers: Workers,
}

impl Source {
    fn rows(&self) -> Result<Vec<ScanRow>> {
        match &self.input {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                Ok(scan::read_csv(&text)?)
            }
            None => {
                let mut c = ScanConfig::new(self.from, self.to.expect("clap enforces --to"));
                c.workers = self.workers.get();
                Ok(scan::scan_rows(&c)?)
            }
        }
    }
}

fn parse_method(s: &str) -> Result<Method, String> {
    Method::from_tag(s).ok_or_else(|| format!("unknown method {s:?} (direct, alternating, fft)"))
}

fn parse_column(s: &str) -> Result<Column, String> {
    Column::parse(s).ok_or_else(|| format!("unknown column {s:?}"))
}

fn parse_eps(s: &str) -> Result<f64, String> {
    let v = match s.strip_prefix("2^") {
        Some(exp) => exp
            .parse::<i32>()
            .map(|e| 2f64.powi(e))
            .map_err(|e| e.to_string())?,
        None => s.parse::<f64>().map_err(|e| e.to_string())?,
    };
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err("eps must lie in (0, 1)".into())
    }
}

fn parse_reference(s: &str) -> Result<(f64, String), String> {
    let (v, l) = s.split_once(':').unwrap_or((s, s));
    Ok((v.parse().map_err(|e| format!("{v:?}: {e}"))?, l.to_owned()))
}

static STOP: AtomicBool = AtomicBool::new(false);

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Single {
            q,
            method,
            all_methods,
        } => single(q, method, all_methods),
        Command::Scan(args) => scan_cmd(args),
        Command::Verify {
            fixtures,
            tolerance,
            workers,
        } => verify(fixtures, tolerance, workers.get()),
        Command::Extrema(source) => extrema(&source),
        Command::Census { source, first } => census(&source, first),
        Command::Fftcheck { q, eps } => fftcheck(q, eps),
        Command::Plot {
            input,
            column,
            kind,
            bins,
            from,
            to,
            log_x,
            reference,
            out,
        } => {
            let spec = PlotSpec {
                kind,
                column,
                range: (from, to),
                bins: bins as usize,
                log_x,
                reference_lines: reference,
            };
            plot_cmd(&input, &spec, &out)
        }
    }
}

fn evaluate(ctx: &PrimeContext, method: Method) -> Result<LValue<f64>> {
    let eps = f64::EPSILON / 2.0;
    let l = match method {
        Method::Alternating => lfun::l1_alternating_streaming(ctx, eps),
        Method::Direct => lfun::l1_direct(ctx.q)?,
        Method::Fft => lfun::l1_fft(ctx, &build_power_sequence(ctx)?)?,
    };
    Ok(LValue {
        err_bound: estimate_err_bound(ctx.q, method, eps),
        ..l
    })
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined (q < 5)".to_owned(), |x| format!("{x:.16}"))
}

fn single(q: u64, method: Method, all: bool) -> Result<ExitCode> {
    let ctx = PrimeContext::new(q)?;
    let mut out = io::stdout().lock();
    writeln!(out, "q          = {q}")?;
    writeln!(out, "parity     = {:?}", ctx.parity)?;
    writeln!(out, "g          = {}", ctx.g)?;
    let methods = if all {
        vec![Method::Direct, Method::Alternating, Method::Fft]
    } else {
        vec![method]
    };
    let mut l = None;
    for m in methods {
        let t = Instant::now();
        let v = evaluate(&ctx, m)?;
        writeln!(
            out,
            "L ({:<11}) = {:.17}  err_bound {:.2e}  [{:.3} s]",
            m.tag(),
            v.value,
            v.err_bound,
            t.elapsed().as_secs_f64()
        )?;
        if l.is_none() || m == method {
            l = Some(v);
        }
    }
    let l = l.expect("at least one method");
    let b = siegel_bounds(&l);
    writeln!(out, "S(q)       = {:.17}", b.s)?;
    writeln!(out, "g(q)       = {:.17}", b.gq)?;
    writeln!(out, "c1         = {:.17}", b.c1)?;
    writeln!(out, "c2         = {:.17}", b.c2)?;
    writeln!(out, "c3         = {:.17}", b.c3)?;
    writeln!(out, "c4         = {:.17}", b.c4)?;
    writeln!(out, "beta_upper = {:.17}", b.beta_upper)?;
    let idx = index_record(&l)?;
    writeln!(out, "uli        = {}", opt(idx.uli))?;
    writeln!(out, "lli        = {}", opt(idx.lli))?;
    writeln!(out, "joshi1     = {}", idx.joshi1)?;
    writeln!(out, "joshi2     = {}", idx.joshi2)?;
    match idx.class_number {
        Some(h) => writeln!(out, "h(-q)      = {}  (residual {:.2e})", h.h, h.residual)?,
        None => writeln!(out, "h(-q)      = undefined (needs q = 3 mod 4, q >= 7)")?,
    }
    Ok(ExitCode::SUCCESS)
}

fn install_interrupt() {
    // a second install (tests calling run twice) is harmless to ignore
    let _ = ctrlc::set_handler(|| {
        if STOP.swap(true, Ordering::SeqCst) {
            std::process::exit(130);
        }
        eprintln!("interrupt: finishing the current block");
    });
}

fn scan_cmd(args: ScanArgs) -> Result<ExitCode> {
    let config = ScanConfig {
        qmin: args.from,
        qmax: args.to,
        workers: args.workers.get(),
        method: args.method,
        block_size: args.block_size,
        eps_model: f64::EPSILON / 2.0,
        emit_spectrum: args.spectrum.is_some(),
        checkpoint_path: args.checkpoint.clone(),
    };
    config.validate()?;
    install_interrupt();
    let t = Instant::now();
    match &args.out {
        Some(out) => {
            let s = scan::scan_file(&config, out, args.spectrum.as_deref(), args.resume, &STOP)?;
            if s.completed {
                eprintln!(
                    "{} rows in {} blocks written to {} ({:.1} s)",
                    s.rows_written,
                    s.blocks_written,
                    out.display(),
                    t.elapsed().as_secs_f64()
                );
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!(
                    "interrupted after {} of {} blocks; rerun with --resume to continue",
                    s.blocks_written, s.total_blocks
                );
                Ok(ExitCode::FAILURE)
            }
        }
        None => {
            let stdout = io::stdout();
            let mut lock = io::BufWriter::new(stdout.lock());
            let end = scan::scan_to_writer(
                &config,
                &mut lock,
                None,
                Position::default(),
                &HashMap::new(),
                &mut |_| {
                    Ok(if STOP.load(Ordering::SeqCst) {
                        Flow::Stop
                    } else {
                        Flow::Continue
                    })
                },
            )?;
            lock.flush()?;
            if end.block < scan::block_count(&config) {
                eprintln!("interrupted");
                return Ok(ExitCode::FAILURE);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn verify(fixtures: Option<PathBuf>, tolerance: f64, workers: usize) -> Result<ExitCode> {
    let reference = match &fixtures {
        Some(p) => golden::parse_golden(
            &fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        )?,
        None => golden::embedded(),
    };
    let (lo, hi) = reference
        .iter()
        .fold((u64::MAX, 0), |(lo, hi), r| (lo.min(r.q), hi.max(r.q)));
    if reference.is_empty() {
        bail!("no reference rows");
    }
    let mut c = ScanConfig::new(lo.max(3), hi);
    c.workers = workers;
    let rows = scan::scan_rows(&c)?;
    let report = golden::verify_golden(&rows, &reference, tolerance);
    println!(
        "checked {} primes, {} columns, tolerance {tolerance:e}",
        report.checked,
        golden::COLUMNS.len()
    );
    for w in &report.worst {
        println!(
            "  {:<10} worst relative error {:.3e} at q = {}",
            w.column, w.rel, w.q
        );
    }
    if report.passed() {
        println!("PASS");
        return Ok(ExitCode::SUCCESS);
    }
    for m in &report.mismatches {
        println!(
            "  MISMATCH q = {} {}: got {:.17e}, want {:.17e} (rel {:.2e})",
            m.q, m.column, m.got, m.want, m.rel
        );
    }
    println!("FAIL");
    Ok(ExitCode::FAILURE)
}

fn extrema(source: &Source) -> Result<ExitCode> {
    let rows = source.rows()?;
    let e = scan::extrema(&rows)?;
    println!("{} primes", e.rows);
    let show = |name: &str, x: Option<scan::Extremum>| match x {
        Some(x) => println!(
            "{name:<4} min {:.10} at q = {:<9} max {:.10} at q = {}",
            x.min, x.argmin, x.max, x.argmax
        ),
        None => println!("{name:<4} undefined on this range"),
    };
    show("c1", Some(e.c1));
    show("c2", Some(e.c2));
    show("uli", e.uli);
    show("lli", e.lli);
    let list = |v: &[(u64, f64)]| {
        v.iter()
            .map(|(q, x)| format!("{q} ({x:.10})"))
            .collect::<Vec<_>>()
            .join(", ")
    };
    println!("uli > 1 at: {}", list(&e.uli_above_one));
    println!("lli < 1 at (excluded from lli): {}", list(&e.lli_below_one));
    Ok(ExitCode::SUCCESS)
}

fn census(source: &Source, first: usize) -> Result<ExitCode> {
    let rows = source.rows()?;
    if rows.is_empty() {
        return Err(anyhow!("no rows"));
    }
    let c = scan::joshi_census(&rows, first);
    let fmt = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(", ");
    println!("{} primes", rows.len());
    println!(
        "joshi1 (L >= e^gamma loglog q): {} primes; first: {}",
        c.count1,
        fmt(&c.first1)
    );
    println!(
        "joshi2 (L loglog q <= pi^2/(6 e^gamma)): {} primes; first: {}",
        c.count2,
        fmt(&c.first2)
    );
    Ok(ExitCode::SUCCESS)
}

fn fftcheck(q: u64, eps: f64) -> Result<ExitCode> {
    let ctx = PrimeContext::new(q)?;
    let seq = build_power_sequence(&ctx)?;
    let r = roundtrip_diagnose(&ctx, &seq, eps)?;
    println!("{r}");
    Ok(if r.e2_within_bounds() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

/// Reference mean and sigma over the full range up to 10^7.
fn caption_stats(column: Column) -> Option<(f64, f64)> {
    match column {
        Column::C1 => Some((0.1096877373, 0.0788767546)),
        Column::C2 => Some((0.0807233707, 0.0580352818)),
        Column::Uli => Some((0.1701388804, 0.1213103612)),
        Column::Lli => Some((9.6157071784, 6.8639742972)),
        _ => None,
    }
}

fn plot_cmd(input: &PathBuf, spec: &PlotSpec, out: &PathBuf) -> Result<ExitCode> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let rows = scan::read_csv(&text)?;
    let (svg, st) = plot::render(&rows, spec)?;
    fs::write(out, svg).with_context(|| format!("writing {}", out.display()))?;
    println!(
        "{} values of {}: mean {:.10}, sigma {:.10}, min {:.10}, max {:.10}",
        st.count,
        spec.column.name(),
        st.mean,
        st.sigma,
        st.min,
        st.max
    );
    if let Some((mean, sigma)) = caption_stats(spec.column) {
        println!("reference (3 <= q <= 10^7): mean {mean:.10}, sigma {sigma:.10}");
    }
    println!("wrote {}", out.display());
    Ok(ExitCode::SUCCESS)
}
