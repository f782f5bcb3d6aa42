use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cglab::bcd::{build_lex_automaton, BcdConfig, DeltaFormula, PaddedAlphabet};
use cglab::io::{canonical_json, round_floats, table_csv, table_to_json, Cache};
use cglab::series::{band_check, exponent_fit, find_recurrence, growth_rate, to_bigints};
use cglab::{growth, Engine, Error, GroupModel, GrowthKind, Mode, Result};

#[derive(Parser)]
#[command(name = "cglab", version, about = "Exact conjugacy growth tables, series diagnostics and BCD automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Growth tables.
    #[command(subcommand)]
    Growth(GrowthCmd),
    /// Diagnostics on a stored growth table.
    #[command(subcommand)]
    Series(SeriesCmd),
    /// Build and export automata.
    #[command(subcommand)]
    Fsa(FsaCmd),
    /// The least-partner map on conjugacy geodesics.
    #[command(subcommand)]
    Delta(DeltaCmd),
}

#[derive(Subcommand)]
enum GrowthCmd {
    /// Count balls, conjugacy, primitive conjugacy or commensurability classes.
    #[command(after_help = "Examples:
  cglab growth count --group free:2 --kind conj --mode cumulative --max-n 3
  cglab growth count --group zm*zn:2,3 --kind pconj --max-n 10 --format json
  CGLAB_CACHE=/tmp/cg cglab growth count --group free:3 --kind comm --engine formula --max-n 20")]
    Count {
        /// Group descriptor, `free:K` or `zm*zn:M,N`.
        #[arg(long)]
        group: GroupModel,
        #[arg(long, default_value = "conj")]
        kind: GrowthKind,
        #[arg(long, default_value = "cumulative")]
        mode: Mode,
        #[arg(long = "max-n", default_value_t = 12)]
        max_n: usize,
        /// `enum` (enumeration) or `formula` (closed forms, free groups only).
        #[arg(long, default_value = "enum")]
        engine: Engine,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Cache directory for computed tables.
        #[arg(long = "cache-dir", env = "CGLAB_CACHE")]
        cache_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesTest {
    Recurrence,
    #[value(name = "growth-rate")]
    GrowthRate,
}

#[derive(Subcommand)]
enum SeriesCmd {
    /// Exact linear-recurrence test or growth-rate estimate.
    #[command(after_help = "Examples:
  cglab growth count --group zm*zn:2,2 --kind conj --mode strict --max-n 29 --format json > dinf.json
  cglab series analyze --input dinf.json --test recurrence --max-order 4
  cglab series analyze --input f2ball.json --test growth-rate")]
    Analyze {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = SeriesTest::Recurrence)]
        test: SeriesTest,
        #[arg(long = "max-order", default_value_t = 8)]
        max_order: usize,
    },
    /// Fit `b_n ~ C lambda^n n^p` and report the band `phi(n) n / lambda^n`.
    #[command(after_help = "Examples:
  cglab growth count --group free:2 --kind conj --mode strict --engine formula --max-n 18 --format json > f2.json
  cglab series asymptotics --input f2.json --base exact --range 10:18
  cglab series asymptotics --input f2.json --base 3 --range 8:16")]
    Asymptotics {
        #[arg(long)]
        input: PathBuf,
        /// `exact` (growth rate of the group's ball series) or a number.
        #[arg(long, default_value = "exact")]
        base: String,
        /// Inclusive range `LO:HI`; defaults to the upper half of the table.
        #[arg(long)]
        range: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Bcd,
    Lex,
    #[value(name = "S")]
    S,
    Delta,
}

#[derive(Clone, Copy, ValueEnum)]
enum AutomatonFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulaArg {
    Corrected,
    Literal,
}

impl From<FormulaArg> for DeltaFormula {
    fn from(f: FormulaArg) -> Self {
        match f {
            FormulaArg::Corrected => DeltaFormula::Corrected,
            FormulaArg::Literal => DeltaFormula::Literal,
        }
    }
}

#[derive(Subcommand)]
enum FsaCmd {
    /// Emit one of the synchronous automata as DOT or JSON.
    #[command(after_help = "Examples:
  cglab fsa build --which lex --group free:2 --out dot
  cglab fsa build --which bcd --group free:2 --K 1 --out json
  cglab fsa build --which delta --group free:2 --K 1 --formula literal")]
    Build {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, default_value = "free:2")]
        group: GroupModel,
        /// Fellow-travel and conjugator bound.
        #[arg(long = "K", default_value_t = 2)]
        k: usize,
        #[arg(long, value_enum, default_value_t = AutomatonFormat::Dot)]
        out: AutomatonFormat,
        #[arg(long, value_enum, default_value_t = FormulaArg::Corrected)]
        formula: FormulaArg,
    },
}

#[derive(Subcommand)]
enum DeltaCmd {
    /// Print the least synchronous partner of a conjugacy geodesic and a conjugator.
    #[command(after_help = "Examples:
  cglab delta apply --group free:2 --K 2 --word ba
  cglab delta apply --group zm*zn:2,3 --K 1 --word bab")]
    Apply {
        #[arg(long, default_value = "free:2")]
        group: GroupModel,
        #[arg(long = "K", default_value_t = 2)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, value_enum, default_value_t = FormulaArg::Corrected)]
        formula: FormulaArg,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::UnknownLetter { .. }
        | Error::InvalidAlphabet(_)
        | Error::BadDescriptor(_)
        | Error::Malformed(_)
        | Error::LengthMismatch(..) => 2,
        Error::ResourceCap { .. } => 3,
        Error::Invariant(_) | Error::NegativeDifference(_) => 4,
        _ => 1,
    }
}

fn json_out(v: Value) -> String {
    canonical_json(&round_floats(v))
}

fn parse_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Malformed(format!("range {s:?} (expected LO:HI)"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Growth(GrowthCmd::Count { group, kind, mode, max_n, engine, format, cache_dir }) => {
            let cache = cache_dir.filter(|d| !d.as_os_str().is_empty()).map(Cache::new);
            let table = match cache {
                Some(c) => c.get_or_compute(&group, kind, mode, max_n, engine)?.0,
                None => growth::count_growth(&group, kind, mode, max_n, engine)?,
            };
            Ok(match format {
                TableFormat::Csv => table_csv(&table),
                TableFormat::Json => canonical_json(&table_to_json(&table)),
            })
        }
        Command::Series(SeriesCmd::Analyze { input, test, max_order }) => {
            let table = cglab::io::read_table(&input)?;
            let coeffs = to_bigints(&table.coeffs);
            let head = json!({ "group": table.group, "kind": table.kind.to_string(), "mode": table.mode.to_string() });
            let report = match test {
                SeriesTest::Recurrence => json!({ "table": head, "recurrence": find_recurrence(&coeffs, max_order)? }),
                SeriesTest::GrowthRate => json!({ "table": head, "growth_rate": growth_rate(&coeffs)? }),
            };
            Ok(json_out(json!({ "schema": 1, "report": report })))
        }
        Command::Series(SeriesCmd::Asymptotics { input, base, range }) => {
            let table = cglab::io::read_table(&input)?;
            let model: GroupModel = table.group.parse()?;
            let lambda = if base == "exact" {
                let ball = growth::ball_counts(&model, 24);
                growth_rate(&to_bigints(&ball))?.value
            } else {
                base.parse::<f64>().map_err(|_| Error::Malformed(format!("base {base:?}")))?
            };
            let range = range.as_deref().map(parse_range).transpose()?;
            let fit = exponent_fit(&to_bigints(&table.coeffs), lambda, range)?;
            let band = band_check(&table, lambda, (fit.range[0], fit.range[1]))?;
            Ok(json_out(json!({
                "schema": 1,
                "table": { "group": table.group, "kind": table.kind.to_string(), "mode": table.mode.to_string() },
                "fit": fit,
                "band": band,
            })))
        }
        Command::Fsa(FsaCmd::Build { which, group, k, out, formula }) => {
            let dfa = if which == Which::Lex {
                build_lex_automaton(&PaddedAlphabet::new(&group))
            } else {
                let cfg = BcdConfig::new(group, k)?;
                match which {
                    Which::Bcd => cfg.build_bcd_automaton(),
                    Which::S => cfg.build_s(),
                    _ => cfg.build_delta_with(formula.into()).m2()?.clone(),
                }
            };
            Ok(match out {
                AutomatonFormat::Dot => dfa.to_dot(),
                AutomatonFormat::Json => canonical_json(&serde_json::to_value(dfa.to_json_value()).expect("serializable")),
            })
        }
        Command::Delta(DeltaCmd::Apply { group, k, word, formula }) => {
            let u = group.parse_word(&word)?;
            let cfg = BcdConfig::new(group.clone(), k)?;
            let out = cfg.build_delta_with(formula.into()).apply(&u)?;
            let show = |w: &cglab::Word| if w.is_empty() { "1".to_string() } else { group.format_word(w) };
            Ok(format!(
                "delta: {}\npartner: {}\nconjugator: {}\n",
                show(&out.word),
                cfg.padded().format(&out.padded),
                show(&out.conjugator)
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(s) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
