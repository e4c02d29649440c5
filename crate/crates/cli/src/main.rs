use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use cartan_core::classify::modularity_verdict;
use cartan_core::invariants::{curve_invariants, BoundMode};
use cartan_core::newforms::{load_fixtures, FixtureFormat, Fetcher, NewformDB, RemoteConfig};
use cartan_core::{Error, SubgroupSpec};
use clap::{Parser, Subcommand, ValueEnum};

mod render;

use render::{Format, Output};

#[derive(Parser)]
#[command(name = "cartan", version, about = "Invariants and automorphisms of Cartan modular curves")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, env = "CARTAN_FORMAT", global = true)]
    format: Format,

    /// Newform fixture (CSV or JSON, chosen by extension).
    #[arg(long, env = "CARTAN_NEWFORMS", global = true)]
    newforms: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Mode::Table, env = "CARTAN_BOUND_MODE", global = true)]
    bound_mode: Mode,

    /// Never touch the network.
    #[arg(long, env = "CARTAN_OFFLINE", global = true)]
    offline: bool,

    #[arg(long, env = "CARTAN_CACHE_DIR", global = true)]
    cache_dir: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Table,
    Conservative,
}

impl From<Mode> for BoundMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Table => BoundMode::Table,
            Mode::Conservative => BoundMode::Conservative,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Index, elliptic points, cusps, genus and gonality bound of one curve.
    Invariants { spec: String },
    /// Print one of the standard tables.
    Table {
        #[arg(value_enum)]
        name: TableName,
        /// Largest level (table1, lowlevels).
        #[arg(long, default_value_t = 64)]
        max: u64,
        /// 2-adic exponent for the character table.
        #[arg(long, default_value_t = 3)]
        e: u32,
    },
    /// Check identities and closed forms; exit 1 if any fails.
    Verify {
        #[arg(value_enum)]
        kind: VerifyKind,
        #[arg(long, default_value_t = 32)]
        max: u64,
        /// Comma separated prime powers for the chen check.
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,3,9,27,5,25,7,49")]
        prime_powers: Vec<u64>,
        /// Mixed Cartan specs for the composite chen check.
        #[arg(long = "spec")]
        specs: Vec<String>,
    },
    /// Decide whether every automorphism is modular and name the group.
    Classify { spec: String },
    /// Levels at which newform data is needed for the low level table.
    Levels {
        #[arg(long, default_value_t = 64)]
        max: u64,
    },
    /// Download newform records for the given levels into the cache.
    Fetch {
        #[arg(required = true, value_delimiter = ',')]
        levels: Vec<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableName {
    Table1,
    Table2,
    Chartable,
    Lowlevels,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Chen,
    Dimensions,
    Table1,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Invalid(_) => 2,
        Error::Budget { .. } => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Output::new(cli.format);
    match run(&cli, &mut out) {
        Ok(ok) => {
            let _ = out.flush(&mut io::stdout().lock());
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let _ = out.flush(&mut io::stdout().lock());
            let _ = writeln!(io::stderr(), "error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn parse_spec(s: &str) -> cartan_core::Result<SubgroupSpec> {
    s.parse()
}

fn load_db(cli: &Cli) -> cartan_core::Result<Option<NewformDB>> {
    let Some(path) = &cli.newforms else {
        return Ok(None);
    };
    let db = load_fixtures(path, FixtureFormat::from_path(path))?;
    for r in db.incomplete_levels() {
        eprintln!(
            "warning: level {} has dimension {} in the fixture, expected {}; treated as incomplete",
            r.level, r.dim_sum, r.expected
        );
    }
    Ok(Some(db))
}

fn run(cli: &Cli, out: &mut Output) -> cartan_core::Result<bool> {
    let mode: BoundMode = cli.bound_mode.into();
    match &cli.command {
        Command::Invariants { spec } => {
            let spec = parse_spec(spec)?;
            out.invariants(&spec, &curve_invariants(&spec, mode)?);
            Ok(true)
        }
        Command::Classify { spec } => {
            let spec = parse_spec(spec)?;
            let db = load_db(cli)?;
            out.verdict(&modularity_verdict(&spec, db.as_ref(), mode)?);
            Ok(true)
        }
        Command::Table { name, max, e } => {
            match name {
                TableName::Table1 => out.table1(&cartan_core::tables::table1(*max)?),
                TableName::Table2 => out.table2(&cartan_core::tables::table2(7, 4)?),
                TableName::Chartable => out.chartable(&cartan_core::tables::chartable(*e)?),
                TableName::Lowlevels => {
                    let db = load_db(cli)?;
                    if db.is_none() {
                        eprintln!("warning: no newform fixture given, cm columns are printed as ?");
                    }
                    out.low_levels(&cartan_core::tables::low_levels(*max, db.as_ref(), mode)?);
                }
            }
            Ok(true)
        }
        Command::Verify {
            kind,
            max,
            prime_powers,
            specs,
        } => verify(out, *kind, *max, prime_powers, specs),
        Command::Levels { max } => {
            let levels = cartan_core::decomposition::required_levels(*max)?;
            let text: Vec<String> = levels.iter().map(u64::to_string).collect();
            out.raw(&(text.join("\n") + "\n"));
            Ok(true)
        }
        Command::Fetch { levels } => {
            let mut config = RemoteConfig::from_env();
            config.offline |= cli.offline;
            if let Some(dir) = &cli.cache_dir {
                config.cache_dir = dir.clone();
            }
            let fetcher = Fetcher::new(config);
            let db = fetcher.fetch_db(levels)?;
            eprintln!("{} orbits, {} network calls", db.len(), fetcher.network_calls());
            out.raw(&db.to_csv());
            Ok(true)
        }
    }
}

fn verify(out: &mut Output, kind: VerifyKind, max: u64, prime_powers: &[u64], specs: &[String]) -> cartan_core::Result<bool> {
    let mut checks = Vec::new();
    match kind {
        VerifyKind::Chen => {
            for &q in prime_powers {
                let m = cartan_core::arith::factorize(q)?;
                if !m.is_prime_power() {
                    return Err(Error::Invalid(format!("{q} is not a prime power")));
                }
                let (p, e) = m.factors()[0];
                let r = cartan_core::characters::verify_chen_prime_power(p, e)?;
                checks.push((format!("chen {q}"), r.holds, format!("{} classes", r.classes)));
            }
            for s in specs {
                let r = cartan_core::characters::verify_chen_composite(&parse_spec(s)?)?;
                checks.push((format!("chen {s}"), r.holds, format!("{} classes", r.classes)));
            }
        }
        VerifyKind::Dimensions => {
            for r in cartan_core::tables::dimension_rows(max)? {
                checks.push((format!("dimensions {}", r.spec), r.holds(), format!("genus {} sum {}", r.genus, r.total)));
            }
        }
        VerifyKind::Table1 => {
            for r in cartan_core::tables::table1(max)? {
                checks.push((
                    format!("table1 {} {}", r.q, r.family),
                    r.engine_agrees,
                    format!("d={} e2={} e3={} c={}", r.d, r.eps2, r.eps3, r.eps_inf),
                ));
            }
        }
    }
    out.checks(&checks);
    Ok(checks.iter().all(|c| c.1))
}
