//! The `graphhom` command line: enumeration, homology tables with an on-disk
//! cache, and verification against the known tables.

mod cache;
mod verify;

pub use cache::{
    cache_key, write_atomic, Cache, CacheEntry, CACHE_ENV, CODE_VERSION, DEFAULT_CACHE_DIR,
};
pub use verify::{run_verify, VerifyReport};

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::exact::{is_probable_prime, parse_rational, ExactError, RankStrategy, Rational};
use crate::graphkit::{enumerate, ParityContext};
use crate::hgc::{line_mc, tripod_mc, McSeries};
use crate::homology::{
    build_block, build_twisted_block, homology_table, BlockKind, ComplexBlock, HomologyError,
    HomologyTable,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SIGN: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "graphhom",
    version,
    about = "Exact homology of graph complexes"
)]
pub struct Cli {
    /// Cache directory (default: $GRAPHHOM_CACHE or .graphhom-cache)
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads; 0 uses all cores
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Compute ranks by exact rational elimination
    #[arg(long, global = true)]
    pub exact: bool,
    /// Two primes for modular ranks, e.g. --primes 1073741827,1073741831
    #[arg(long, global = true, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List canonical generators with fixed vertex, edge and hair counts
    Enumerate(EnumerateArgs),
    /// Non-hairy graph complexes
    Gc {
        #[command(subcommand)]
        cmd: GcCommand,
    },
    /// Hairy graph complexes
    Hgc {
        #[command(subcommand)]
        cmd: HgcCommand,
    },
    /// Recompute the reference tables and compare
    Verify {
        /// Small subset only
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: i64,
    #[arg(long)]
    pub m: Option<i64>,
    #[arg(long)]
    pub vertices: usize,
    #[arg(long)]
    pub edges: usize,
    #[arg(long, default_value_t = 0)]
    pub hairs: usize,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    pub min_valence: u8,
    #[arg(long)]
    pub no_tadpoles: bool,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    /// Loop orders, `A..B` or `A`
    #[arg(long, value_parser = parse_range)]
    pub loops: (i64, i64),
    /// Degree window; needed when vertices may be bivalent
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub degrees: Option<(i64, i64)>,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    pub min_valence: u8,
    #[arg(long)]
    pub no_tadpoles: bool,
    /// Directory for the CSV and JSON tables
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Also write every differential as a sparse matrix file into this directory
    #[arg(long)]
    pub export_matrices: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum GcCommand {
    Homology {
        #[arg(long)]
        n: i64,
        #[command(flatten)]
        table: TableArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum HgcCommand {
    Homology {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
        /// Hair counts, `A..B` or `A`
        #[arg(long, value_parser = parse_range)]
        hairs: (i64, i64),
        /// Twist by the segment (`line`) or the tripod series (`tripod:<lambda>`)
        #[arg(long, value_parser = parse_twist)]
        twist: Option<TwistSpec>,
        #[command(flatten)]
        table: TableArgs,
    },
}

/// Inclusive range `A..B`, `A..=B` or a single value.
pub fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|e| format!("bad number `{t}`: {e}"))
    };
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    Ok((a, b))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwistSpec {
    Line(Rational),
    Tripod(Rational),
}

impl fmt::Display for TwistSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TwistSpec::Line(l) => write!(f, "line:{l}"),
            TwistSpec::Tripod(l) => write!(f, "tripod:{l}"),
        }
    }
}

pub fn parse_twist(s: &str) -> Result<TwistSpec, String> {
    let (name, lambda) = match s.split_once(':') {
        Some((a, b)) => (a, parse_rational(b).map_err(|e| e.to_string())?),
        None => (s, Rational::from_integer(1.into())),
    };
    match name {
        "line" => Ok(TwistSpec::Line(lambda)),
        "tripod" => Ok(TwistSpec::Tripod(lambda)),
        _ => Err(format!(
            "unknown twist `{name}`, expected line or tripod:<lambda>"
        )),
    }
}

/// Everything that determines one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSpec {
    pub kind: BlockKind,
    pub ctx: ParityContext,
    pub g: usize,
    /// Hair count, or the hair cutoff of a twisted block.
    pub h: Option<usize>,
    pub degrees: Option<(i64, i64)>,
    pub twist: Option<TwistSpec>,
}

impl BlockSpec {
    pub fn gc(ctx: ParityContext, g: usize, degrees: Option<(i64, i64)>) -> Self {
        let kind = if ctx.min_valence >= 3 {
            BlockKind::Gc
        } else {
            BlockKind::Gc2
        };
        BlockSpec {
            kind,
            ctx,
            g,
            h: None,
            degrees,
            twist: None,
        }
    }

    pub fn hgc(ctx: ParityContext, g: usize, h: usize, degrees: Option<(i64, i64)>) -> Self {
        let kind = if ctx.min_valence >= 3 {
            BlockKind::Hgc
        } else {
            BlockKind::Hgc2
        };
        BlockSpec {
            kind,
            ctx,
            g,
            h: Some(h),
            degrees,
            twist: None,
        }
    }

    pub fn twisted(
        ctx: ParityContext,
        g: usize,
        h_max: usize,
        degrees: Option<(i64, i64)>,
        twist: TwistSpec,
    ) -> Self {
        BlockSpec {
            kind: BlockKind::HgcTwisted,
            ctx,
            g,
            h: Some(h_max),
            degrees,
            twist: Some(twist),
        }
    }

    /// Stable text that the cache key is hashed from.
    pub fn describe(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        format!(
            "{} n={} m={} minval={} tadpoles={} g={} h={} degrees={} twist={}",
            self.kind,
            self.ctx.n,
            opt(self.ctx.m.map(|m| m.to_string())),
            self.ctx.min_valence,
            self.ctx.allow_tadpoles,
            self.g,
            opt(self.h.map(|h| h.to_string())),
            opt(self.degrees.map(|(a, b)| format!("{a}..{b}"))),
            opt(self.twist.as_ref().map(|t| t.to_string())),
        )
    }

    pub fn key(&self) -> String {
        cache_key(&self.describe())
    }

    fn twist_series(&self) -> Result<Option<McSeries>, HomologyError> {
        let cutoff = self.h.unwrap_or(0);
        Ok(match &self.twist {
            None => None,
            Some(TwistSpec::Line(l)) => Some(line_mc(self.ctx, l.clone())?),
            Some(TwistSpec::Tripod(l)) => Some(tripod_mc(self.ctx, l.clone(), cutoff)?),
        })
    }

    pub fn build(&self) -> Result<ComplexBlock, HomologyError> {
        match self.twist_series()? {
            Some(alpha) => build_twisted_block(&alpha, self.g, self.h.unwrap_or(0), self.degrees),
            None => build_block(self.kind, self.ctx, self.g, self.h, self.degrees),
        }
    }
}

/// Homology of one block, from the cache when possible. A computed block is
/// stored before returning. The block itself is returned only when it was
/// built in this call.
pub fn compute_block(
    spec: &BlockSpec,
    cache: Option<&Cache>,
    strategy: &RankStrategy,
) -> Result<(HomologyTable, Option<ComplexBlock>), HomologyError> {
    let key = spec.key();
    if let Some(e) = cache.and_then(|c| c.load(&key)) {
        return Ok((HomologyTable { rows: e.rows }, None));
    }
    let block = spec.build()?;
    let table = homology_table(&block, strategy)?;
    if let Some(c) = cache {
        let entry = CacheEntry::new(key, spec.describe(), &block, table.rows.clone());
        if let Err(e) = c.store(&entry) {
            eprintln!("warning: could not write cache entry {}: {e}", entry.key);
        }
    }
    Ok((table, Some(block)))
}

/// Computes many blocks on the current rayon pool, keeping input order.
pub fn compute_blocks(
    specs: &[BlockSpec],
    cache: Option<&Cache>,
    strategy: &RankStrategy,
) -> Vec<Result<(HomologyTable, Option<ComplexBlock>), HomologyError>> {
    specs
        .par_iter()
        .map(|s| compute_block(s, cache, strategy))
        .collect()
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Sign(String),
    Other(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Sign(_) => EXIT_SIGN,
            CliError::Other(_) => EXIT_FAILURE,
        }
    }
}

impl From<HomologyError> for CliError {
    fn from(e: HomologyError) -> Self {
        match e {
            HomologyError::Exact(ExactError::CompositionNonzero { .. }) => {
                CliError::Sign(format!("{e} (sign convention failure)"))
            }
            HomologyError::KindMismatch { .. } | HomologyError::InfiniteBlock(_) => {
                CliError::Usage(e.to_string())
            }
            e => CliError::Other(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.to_string())
    }
}

fn strategy_from(cli: &Cli) -> Result<RankStrategy, CliError> {
    if cli.exact {
        return Ok(RankStrategy::Exact);
    }
    match &cli.primes {
        None => Ok(RankStrategy::default()),
        Some(p) => {
            let [a, b] = p.as_slice() else {
                return Err(CliError::Usage("--primes takes exactly two primes".into()));
            };
            for &x in [a, b] {
                if !is_probable_prime(x) || x < 3 || x >= 1 << 62 {
                    return Err(CliError::Usage(format!("{x} is not a usable prime")));
                }
            }
            if a == b {
                return Err(CliError::Usage("--primes needs two distinct primes".into()));
            }
            Ok(RankStrategy::Modular {
                primes: Some((*a, *b)),
            })
        }
    }
}

fn ctx_from(
    n: i64,
    m: Option<i64>,
    min_valence: u8,
    no_tadpoles: bool,
) -> Result<ParityContext, CliError> {
    if n < 1 || m.is_some_and(|m| m < 1) {
        return Err(CliError::Usage("dimensions must be positive".into()));
    }
    let base = match (m, min_valence) {
        (None, 3) => ParityContext::gc(n),
        (None, _) => ParityContext::gc2(n),
        (Some(m), 3) => ParityContext::hgc(m, n),
        (Some(m), _) => ParityContext::hgc2(m, n),
    };
    Ok(base.with_tadpoles(!no_tadpoles))
}

fn nonneg_range(r: (i64, i64), what: &str) -> Result<std::ops::RangeInclusive<usize>, CliError> {
    if r.0 < 0 || r.1 < 0 {
        return Err(CliError::Usage(format!("{what} must be nonnegative")));
    }
    Ok(r.0 as usize..=r.1 as usize)
}

fn run_tables(
    cli: &Cli,
    specs: Vec<BlockSpec>,
    table: &TableArgs,
    name: &str,
) -> Result<(), CliError> {
    let strategy = strategy_from(cli)?;
    let cache = Cache::open(cli.cache_dir.clone())?;
    let results = compute_blocks(&specs, Some(&cache), &strategy);
    let mut all = HomologyTable::default();
    for (spec, r) in specs.iter().zip(results) {
        let (t, block) = r?;
        if let Some(dir) = &table.export_matrices {
            let block = match block {
                Some(b) => b,
                None => spec.build()?,
            };
            for (d, m) in &block.matrices {
                let file = dir.join(format!("{}_d{d}.sms", spec.key()));
                write_atomic(&file, m.to_sms().as_bytes())?;
            }
        }
        all.extend(t);
    }
    let csv = all.to_csv();
    let json = serde_json::to_string_pretty(&all.to_json()).expect("json");
    write_atomic(&table.out.join(format!("{name}.csv")), csv.as_bytes())?;
    write_atomic(
        &table.out.join(format!("{name}.json")),
        format!("{json}\n").as_bytes(),
    )?;
    print!("{csv}");
    Ok(())
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Enumerate(a) => {
            if a.m.is_none() && a.hairs > 0 {
                return Err(CliError::Usage("hairs need --m".into()));
            }
            let ctx = ctx_from(a.n, a.m, a.min_valence, a.no_tadpoles)?;
            let gs = enumerate(&ctx, a.vertices, a.edges, a.hairs);
            for g in &gs {
                println!("{g}");
            }
            println!("count {}", gs.len());
            Ok(EXIT_OK)
        }
        Command::Gc {
            cmd: GcCommand::Homology { n, table },
        } => {
            let ctx = ctx_from(*n, None, table.min_valence, table.no_tadpoles)?;
            let specs = nonneg_range(table.loops, "loop orders")?
                .map(|g| BlockSpec::gc(ctx, g, table.degrees))
                .collect();
            let name = format!(
                "gc_n{n}_v{}_loops{}-{}",
                table.min_valence, table.loops.0, table.loops.1
            );
            run_tables(cli, specs, table, &name)?;
            Ok(EXIT_OK)
        }
        Command::Hgc {
            cmd:
                HgcCommand::Homology {
                    n,
                    m,
                    hairs,
                    twist,
                    table,
                },
        } => {
            let ctx = ctx_from(*n, Some(*m), table.min_valence, table.no_tadpoles)?;
            let loops = nonneg_range(table.loops, "loop orders")?;
            let hair_range = nonneg_range(*hairs, "hair counts")?;
            let specs: Vec<BlockSpec> = match twist {
                None => loops
                    .flat_map(|g| hair_range.clone().filter(|&h| h >= 1).map(move |h| (g, h)))
                    .map(|(g, h)| BlockSpec::hgc(ctx, g, h, table.degrees))
                    .collect(),
                Some(t) => {
                    if *hair_range.start() > 1 {
                        return Err(CliError::Usage(
                            "a twisted table needs hairs starting at 1".into(),
                        ));
                    }
                    loops
                        .map(|g| {
                            BlockSpec::twisted(ctx, g, *hair_range.end(), table.degrees, t.clone())
                        })
                        .collect()
                }
            };
            let suffix = twist.as_ref().map_or(String::new(), |t| {
                format!("_{}", t.to_string().replace([':', '/'], "_"))
            });
            let name = format!(
                "hgc_m{m}_n{n}_v{}_loops{}-{}_hairs{}-{}{suffix}",
                table.min_valence, table.loops.0, table.loops.1, hairs.0, hairs.1
            );
            run_tables(cli, specs, table, &name)?;
            Ok(EXIT_OK)
        }
        Command::Verify { quick } => {
            let strategy = strategy_from(cli)?;
            let cache = Cache::open(cli.cache_dir.clone())?;
            let report = run_verify(*quick, Some(&cache), &strategy);
            for line in &report.lines {
                println!("{line}");
            }
            println!(
                "{} of {} checks passed",
                report.passed,
                report.passed + report.failed
            );
            if report.sign_failure {
                Ok(EXIT_SIGN)
            } else if report.failed > 0 {
                Ok(EXIT_FAILURE)
            } else {
                Ok(EXIT_OK)
            }
        }
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAILURE;
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(code) => code,
        Err(e) => {
            let msg = match &e {
                CliError::Usage(m) | CliError::Sign(m) | CliError::Other(m) => m,
            };
            eprintln!("error: {msg}");
            e.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..5").unwrap(), (2, 5));
        assert_eq!(parse_range("2..=5").unwrap(), (2, 5));
        assert_eq!(parse_range("-3..1").unwrap(), (-3, 1));
        assert_eq!(parse_range("4").unwrap(), (4, 4));
        assert!(parse_range("a..b").is_err());
    }

    #[test]
    fn twists() {
        assert_eq!(
            parse_twist("line").unwrap(),
            TwistSpec::Line(Rational::from_integer(1.into()))
        );
        assert_eq!(
            parse_twist("tripod:-1/2").unwrap(),
            TwistSpec::Tripod(Rational::new((-1).into(), 2.into()))
        );
        assert!(parse_twist("cube").is_err());
    }

    #[test]
    fn keys_differ_by_block() {
        let a = BlockSpec::gc(ParityContext::gc(3), 2, None);
        let b = BlockSpec::gc(ParityContext::gc(3), 3, None);
        assert_ne!(a.key(), b.key());
        assert_eq!(a.key(), a.clone().key());
        assert_eq!(a.key().len(), 64);
    }
}
