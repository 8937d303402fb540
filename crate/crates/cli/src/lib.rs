//! Command-line front end. [`run`] takes the argument vector and the two
//! output streams so tests can drive it in-process.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use fibcomp::analytic::{hagis_q, rademacher_p, EvalOptions};
use fibcomp::counting::{
    self, binet_float, first_binet_failure, load_table, save_table, BigCount, MemoTable, TableKind,
};
use fibcomp::enumerate::{count_by_enumeration, gen_compositions, gen_partitions, Class, PartitionClass};
use fibcomp::genfun::{distinct_compositions_gf, distinct_partitions_ell_gf, NamedSeries};
use fibcomp::par::{with_threads, ExecMode};
use fibcomp::verify::{verify_suite, Suite};
use fibcomp::{gt1_to_odd, odd_to_gt1, trace_forward, trace_inverse, Composition};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

/// Largest `n` that `enumerate` accepts without `--force`.
pub const ENUMERATE_LIMIT: u64 = 30;

pub const CACHE_ENV: &str = "FIBCOMP_CACHE_DIR";

#[derive(Debug, Parser)]
#[command(name = "fibcomp", version, about = "Compositions, partitions and their counting functions")]
struct Cli {
    /// Emit a single JSON document instead of plain lines.
    #[arg(long, global = true)]
    json: bool,

    /// Directory for persisted p / q / Fibonacci tables. Falls back to
    /// FIBCOMP_CACHE_DIR; unset means in-memory only.
    #[arg(long, global = true, value_name = "DIR")]
    cache_dir: Option<PathBuf>,

    /// Worker threads for parallel loops.
    #[arg(long, global = true, value_name = "T")]
    threads: Option<usize>,

    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count the members of a class, e.g. `count --class partitions:odd-parts 8`.
    Count {
        #[arg(long)]
        class: String,
        n: u64,
        /// Count by walking the generator instead of a formula.
        #[arg(long)]
        by_enumeration: bool,
    },
    /// List the members of a class, one per line.
    Enumerate {
        #[arg(long)]
        class: String,
        n: u64,
        /// Print at most K items.
        #[arg(long, value_name = "K")]
        limit: Option<u64>,
        /// Print only the total.
        #[arg(long)]
        count: bool,
        /// Allow n > 30.
        #[arg(long)]
        force: bool,
    },
    /// Apply the bijection or a codec step to one composition.
    Map(MapArgs),
    /// Print coefficients of a named generating function.
    Series {
        /// One of: partitions, compositions, odd-partitions, distinct-partitions,
        /// distinct-partitions-ell-<L>, distinct-compositions, euler-product.
        name: String,
        #[arg(long, value_name = "N")]
        order: usize,
    },
    /// Evaluate a convergent series with certified rounding.
    Analytic {
        #[arg(value_enum)]
        which: Which,
        n: u64,
        /// Starting number of terms.
        #[arg(long)]
        kmax: Option<u64>,
        /// Starting working precision in bits.
        #[arg(long)]
        bits: Option<u32>,
        /// For `binet`: scan 0..=n for the first rounding failure.
        #[arg(long)]
        sweep: bool,
    },
    /// Run an invariant battery.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 14)]
        max_n: u64,
    },
}

#[derive(Debug, Args)]
#[group(skip)]
#[command(group(ArgGroup::new("direction").required(true).multiple(false)))]
struct MapArgs {
    /// Odd-part composition of n to parts>1 composition of n+1.
    #[arg(long, group = "direction")]
    odd_to_gt1: bool,
    /// Parts>1 composition of n+1 back to odd parts.
    #[arg(long, group = "direction")]
    gt1_to_odd: bool,
    /// Conjugate (complement the bit sequence).
    #[arg(long, group = "direction")]
    conjugate: bool,
    /// Print the MacMahon bit sequence.
    #[arg(long, group = "direction")]
    bits: bool,
    /// Draw the MacMahon graph.
    #[arg(long, group = "direction")]
    graph: bool,
    /// Show every stage of the bijection.
    #[arg(long)]
    trace: bool,
    /// Composition in `a+b+...` form.
    #[arg(value_name = "COMPOSITION")]
    input: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Which {
    P,
    Q,
    Binet,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Codec,
    Bijection,
    Counts,
    Genfun,
    Analytic,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Codec => Suite::Codec,
            SuiteArg::Bijection => Suite::Bijection,
            SuiteArg::Counts => Suite::Counts,
            SuiteArg::Genfun => Suite::Genfun,
            SuiteArg::Analytic => Suite::Analytic,
        }
    }
}

/// Failure of a command: message for stderr and exit code.
struct Failure {
    code: i32,
    message: String,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure { code: EXIT_DOMAIN, message: e.to_string() }
    }
}

type Outcome = Result<i32, Failure>;

struct Ctx<'a> {
    json: bool,
    mode: ExecMode,
    cache_dir: Option<PathBuf>,
    out: &'a mut (dyn Write + Send),
    err: &'a mut (dyn Write + Send),
}

impl Ctx<'_> {
    fn emit_json(&mut self, value: &impl Serialize) -> Outcome {
        let text = serde_json::to_string_pretty(value)?;
        writeln!(self.out, "{text}")?;
        Ok(EXIT_OK)
    }

    fn line(&mut self, text: impl std::fmt::Display) -> Result<(), Failure> {
        writeln!(self.out, "{text}")?;
        Ok(())
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_DOMAIN
                }
            };
        }
    };
    let cache_dir = cli.cache_dir.clone().or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
    let mode = if cli.sequential { ExecMode::Sequential } else { ExecMode::Parallel };
    let threads = cli.threads;
    let mut ctx = Ctx { json: cli.json, mode, cache_dir, out, err };
    let result = with_threads(threads, move || {
        let r = dispatch(cli.command, &mut ctx);
        (r, ctx)
    });
    match result {
        (Ok(code), _) => code,
        (Err(f), ctx) => {
            let _ = writeln!(ctx.err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, ctx: &mut Ctx<'_>) -> Outcome {
    match command {
        Command::Count { class, n, by_enumeration } => count(ctx, &class, n, by_enumeration),
        Command::Enumerate { class, n, limit, count, force } => enumerate(ctx, &class, n, limit, count, force),
        Command::Map(args) => map(ctx, &args),
        Command::Series { name, order } => series(ctx, &name, order),
        Command::Analytic { which, n, kmax, bits, sweep } => analytic(ctx, which, n, kmax, bits, sweep),
        Command::Verify { suite, max_n } => verify(ctx, suite.into(), max_n),
    }
}

fn table_path(dir: &Path, kind: TableKind) -> PathBuf {
    dir.join(format!("{}.table", kind.tag()))
}

/// Value `n` of a memo table, going through the cache directory if set.
fn table_value(ctx: &mut Ctx<'_>, kind: TableKind, n: u64) -> Result<BigCount, Failure> {
    let Some(dir) = ctx.cache_dir.clone() else {
        let mut table = MemoTable::new(kind);
        return Ok(table.get(n));
    };
    let path = table_path(&dir, kind);
    let mut table = if path.exists() {
        match load_table(&path) {
            Ok(t) if t.kind() == kind => t,
            Ok(_) => {
                writeln!(ctx.err, "warning: {} holds another table kind; rebuilding", path.display())?;
                MemoTable::new(kind)
            }
            Err(e) => {
                writeln!(ctx.err, "warning: ignoring cache file: {e}")?;
                MemoTable::new(kind)
            }
        }
    } else {
        MemoTable::new(kind)
    };
    let before = table.max_index();
    let value = table.get(n);
    if table.max_index() > before || !path.exists() {
        std::fs::create_dir_all(&dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        save_table(&table, &path)?;
    }
    Ok(value)
}

fn count(ctx: &mut Ctx<'_>, class_text: &str, n: u64, by_enumeration: bool) -> Outcome {
    use fibcomp::enumerate::CompositionClass as C;
    let class: Class = class_text.parse()?;
    let value = if by_enumeration {
        count_by_enumeration(n, class)?
    } else {
        match class {
            Class::Compositions(C::All) => counting::composition_count(n)?,
            Class::Compositions(C::OddParts) => {
                counting::odd_composition_count(n)?;
                table_value(ctx, TableKind::Fibonacci, n)?
            }
            Class::Compositions(C::MinPart2) => {
                counting::min_part2_composition_count(n)?;
                table_value(ctx, TableKind::Fibonacci, n - 1)?
            }
            Class::Compositions(C::DistinctParts) => {
                if n == 0 {
                    return Err(fibcomp::Error::OutOfRange { what: "n", detail: "compositions need n >= 1".into() }.into());
                }
                series_count(&distinct_compositions_gf(n as usize), n)
            }
            Class::Partitions(PartitionClass::All) => table_value(ctx, TableKind::Partitions, n)?,
            Class::Partitions(PartitionClass::OddParts | PartitionClass::DistinctParts) => {
                table_value(ctx, TableKind::OddPartitions, n)?
            }
            Class::Partitions(PartitionClass::DistinctExactly(ell)) => {
                series_count(&distinct_partitions_ell_gf(ell as usize, n as usize), n)
            }
        }
    };
    if ctx.json {
        return ctx.emit_json(&json!({ "class": class.to_string(), "n": n, "count": value }));
    }
    ctx.line(value)?;
    Ok(EXIT_OK)
}

fn series_count(s: &fibcomp::TruncatedSeries, n: u64) -> BigCount {
    BigCount::try_from_bigint(&s.coefficient(n as usize)).expect("counting series have nonnegative coefficients")
}

fn enumerate(ctx: &mut Ctx<'_>, class_text: &str, n: u64, limit: Option<u64>, only_count: bool, force: bool) -> Outcome {
    let class: Class = class_text.parse()?;
    if n > ENUMERATE_LIMIT && !force {
        return Err(Failure {
            code: EXIT_DOMAIN,
            message: format!("refusing to enumerate n = {n} > {ENUMERATE_LIMIT} without --force"),
        });
    }
    if only_count {
        let total = count_by_enumeration(n, class)?;
        if ctx.json {
            return ctx.emit_json(&json!({ "class": class.to_string(), "n": n, "count": total }));
        }
        ctx.line(total)?;
        return Ok(EXIT_OK);
    }
    let take = limit.map_or(usize::MAX, |k| k.min(usize::MAX as u64) as usize);
    let items: Box<dyn Iterator<Item = String>> = match class {
        Class::Compositions(c) => Box::new(gen_compositions(n, c)?.map(|x| x.to_string())),
        Class::Partitions(p) => Box::new(gen_partitions(n, p).map(|x| x.to_string())),
    };
    let items = items.take(take);
    if ctx.json {
        let items: Vec<String> = items.collect();
        return ctx.emit_json(&json!({ "class": class.to_string(), "n": n, "items": items }));
    }
    for item in items {
        ctx.line(item)?;
    }
    Ok(EXIT_OK)
}

fn map(ctx: &mut Ctx<'_>, args: &MapArgs) -> Outcome {
    let input: Composition = args.input.parse()?;
    if args.trace {
        if !(args.odd_to_gt1 || args.gt1_to_odd) {
            return Err("--trace needs --odd-to-gt1 or --gt1-to-odd".into());
        }
        let trace = if args.odd_to_gt1 { trace_forward(&input)? } else { trace_inverse(&input)? };
        if ctx.json {
            return ctx.emit_json(&trace);
        }
        ctx.line(&trace)?;
        return Ok(EXIT_OK);
    }
    let output = if args.odd_to_gt1 {
        odd_to_gt1(&input)?.to_string()
    } else if args.gt1_to_odd {
        gt1_to_odd(&input)?.to_string()
    } else if args.conjugate {
        input.conjugate().to_string()
    } else if args.bits {
        input.to_bitseq().to_string()
    } else {
        input.render_graph()
    };
    if ctx.json {
        return ctx.emit_json(&json!({ "input": input.to_string(), "output": output }));
    }
    ctx.line(output)?;
    Ok(EXIT_OK)
}

fn series(ctx: &mut Ctx<'_>, name: &str, order: usize) -> Outcome {
    let s = NamedSeries::parse(name)?.build(order);
    if ctx.json {
        let coefficients: Vec<String> = s.coeffs().iter().map(|c| c.to_string()).collect();
        return ctx.emit_json(&json!({ "name": name, "order": order, "coefficients": coefficients }));
    }
    ctx.line(&s)?;
    Ok(EXIT_OK)
}

fn analytic(ctx: &mut Ctx<'_>, which: Which, n: u64, kmax: Option<u64>, bits: Option<u32>, sweep: bool) -> Outcome {
    if let Which::Binet = which {
        return binet(ctx, n, sweep);
    }
    let opts = EvalOptions { k_max: kmax, precision_bits: bits, mode: ctx.mode, ..EvalOptions::default() };
    let report = match which {
        Which::P => rademacher_p(n, &opts)?,
        _ => hagis_q(n, &opts)?,
    };
    if ctx.json {
        return ctx.emit_json(&report);
    }
    ctx.line(format_args!("n\t{}", report.n))?;
    ctx.line(format_args!("rounded\t{}", report.rounded))?;
    ctx.line(format_args!("certified\t{}", report.certified))?;
    ctx.line(format_args!("k_terms_used\t{}", report.k_terms_used))?;
    ctx.line(format_args!("precision_bits\t{}", report.precision_bits))?;
    ctx.line(format_args!("escalations\t{}", report.escalations))?;
    ctx.line(format_args!("raw_value\t{}", report.raw_value.to_decimal_string()))?;
    ctx.line(format_args!("residual\t{}", report.residual.to_sci_string(12)))?;
    ctx.line(format_args!("stability_delta\t{}", report.stability_delta.to_sci_string(12)))?;
    Ok(EXIT_OK)
}

fn binet(ctx: &mut Ctx<'_>, n: u64, sweep: bool) -> Outcome {
    if sweep {
        let first = first_binet_failure(n);
        if ctx.json {
            return ctx.emit_json(&json!({ "max_n": n, "first_failure": first }));
        }
        match first {
            Some(m) => ctx.line(format_args!("first_failure\t{m}"))?,
            None => ctx.line("first_failure\tnone")?,
        }
        return Ok(EXIT_OK);
    }
    let report = binet_float(n);
    if ctx.json {
        return ctx.emit_json(&report);
    }
    ctx.line(format_args!("n\t{}", report.n))?;
    ctx.line(format_args!("float_estimate\t{:e}", report.float_estimate))?;
    ctx.line(format_args!("exact\t{}", report.exact))?;
    ctx.line(format_args!("abs_error\t{:e}", report.abs_error))?;
    ctx.line(format_args!("round_correct\t{}", report.round_correct))?;
    Ok(EXIT_OK)
}

fn verify(ctx: &mut Ctx<'_>, suite: Suite, max_n: u64) -> Outcome {
    let report = verify_suite(suite, max_n, ctx.mode)?;
    let code = if report.passed() { EXIT_OK } else { EXIT_VERIFY };
    if ctx.json {
        ctx.emit_json(&report)?;
    } else {
        ctx.line(&report)?;
    }
    Ok(code)
}
