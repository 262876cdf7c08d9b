use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use modhyp::algebra::parse_q;
use modhyp::bounds;
use modhyp::criterion::{attempt_equation, compose_product, CandidateSpace};
use modhyp::newform::{ingest_fixture, label, Newform};
use modhyp::recover::{self, parse_basis, required_precision, PrecisionMode, Recovered};
use modhyp::sieve::{enumerate_a2_cubics, run_sieve_genus3_simple, SieveConfig};
use modhyp::Error;
use modhyp_cli::harness::{verify_tables, Summary};
use modhyp_cli::tables::{all_tables, TableId};
use modhyp_cli::{DEFAULT_FIXTURES, FIXTURES_ENV};

/// Exit code for inputs with too few coefficients.
const EXIT_PRECISION: u8 = 3;

#[derive(Parser)]
#[command(name = "modhyp", version, about = "Modular hyperelliptic curves from newform q-expansions")]
struct Cli {
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory holding the `<level>.nfqx` fixtures.
    #[arg(long, global = true, env = FIXTURES_ENV, default_value = DEFAULT_FIXTURES)]
    fixtures: PathBuf,
    /// Also write the output to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recover a curve from a basis of differentials.
    Recover(RecoverArgs),
    /// Run the hyperelliptic criterion on orbits of one level.
    Criterion {
        #[arg(long)]
        level: u64,
        /// Orbit labels, with or without the level (`A`, `39B`, `A_{0,2}`).
        #[arg(required = true)]
        orbits: Vec<String>,
    },
    /// Coefficient sieves.
    Sieve {
        #[command(subcommand)]
        which: SieveCommand,
    },
    /// Evaluate the numeric bounds.
    Bounds {
        #[command(subcommand)]
        which: BoundsCommand,
    },
    /// Label the orbits of a fixture.
    Label {
        #[arg(long)]
        level: u64,
    },
    /// The curve `y² = F₁F₂` dominated by two curves of one level.
    Compose {
        #[arg(long)]
        level: u64,
        first: String,
        second: String,
    },
    /// Check the appendix tables against the fixtures.
    VerifyTables {
        /// Tables to check (1 to 10, or P for the products); all by default.
        #[arg(long = "table")]
        tables: Vec<TableId>,
    },
}

#[derive(Args)]
struct RecoverArgs {
    /// Basis file (`genus`, `precision` and `w i : v : c_v …` lines).
    input: PathBuf,
    /// Fail unless the basis has this genus.
    #[arg(long)]
    genus: Option<usize>,
    #[arg(long, value_enum, default_value_t = RecoverMode::Auto)]
    mode: RecoverMode,
    /// The parameter is an e-th root of a local parameter.
    #[arg(long)]
    ramified_e: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RecoverMode {
    /// Decide between a hyperelliptic curve and a canonical model.
    Auto,
    /// Assume the curve is hyperelliptic.
    Hyperelliptic,
}

#[derive(Subcommand)]
enum SieveCommand {
    /// Genus-3 curves with Q-simple jacobian and a₂ generating a cubic field.
    Genus3Simple(SieveArgs),
}

#[derive(Args)]
struct SieveArgs {
    /// Stop after this stage (1: the a₂ cubics).
    #[arg(long)]
    stage: Option<u8>,
    /// Enumerate coefficients up to this index (11 to 24).
    #[arg(long, default_value_t = 11)]
    horizon: u64,
    /// Only the first N cubic fields that pass the Frobenius filter.
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long)]
    no_frobenius_filter: bool,
    #[arg(long)]
    no_span_filter: bool,
    /// Also explore the branch where 3 divides the level.
    #[arg(long)]
    with_eps3_zero: bool,
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// Largest genus of a new modular hyperelliptic curve with p not dividing N.
    Ogg {
        #[arg(long)]
        p: u64,
    },
    /// Largest genus of a quotient of X₀(N) of the given Q-gonality.
    OggQuotient {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        gonality: u64,
    },
    /// Largest genus of a modular curve of gonality G.
    Gonality {
        #[arg(long = "G")]
        g: u64,
        /// Eigenvalue bound as a rational `a/b`.
        #[arg(long, default_value = "975/4096")]
        lambda: String,
    },
    /// Gonality bound p² for p | N with trivial character.
    TrivialChar {
        #[arg(long)]
        p: u64,
    },
    /// Castelnuovo–Severi bound.
    CastelnuovoSeveri { d1: u64, d2: u64, g1: u64, g2: u64 },
    /// Coefficients needed to determine a curve of genus g.
    Precision {
        #[arg(long)]
        genus: usize,
    },
    /// Genera of X₀(N) and X₁(N).
    Genus {
        #[arg(long)]
        level: u64,
    },
    /// Possible genera for a diamond group of order k.
    Genera {
        #[arg(long)]
        order: u64,
        /// Whether the hyperelliptic involution is a diamond operator.
        #[arg(long, value_parser = parse_yes_no, action = clap::ArgAction::Set)]
        w: bool,
    },
    /// Sparse and smooth level predicates.
    Level {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
    },
}

fn parse_yes_no(s: &str) -> Result<bool, String> {
    match s {
        "yes" | "true" => Ok(true),
        "no" | "false" => Ok(false),
        _ => Err(format!("expected yes or no, got `{s}`")),
    }
}

/// Text produced by a command and whether it succeeded.
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            if let Some(path) = &cli.report {
                if let Err(e) = std::fs::write(path, &out.text) {
                    eprintln!("error: writing {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            let precision = e.downcast_ref::<Error>().is_some_and(|e| matches!(e, Error::InsufficientPrecision { .. }));
            ExitCode::from(if precision { EXIT_PRECISION } else { 1 })
        }
    }
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Recover(args) => cmd_recover(args),
        Command::Criterion { level, orbits } => cmd_criterion(&cli.fixtures, *level, orbits),
        Command::Sieve { which: SieveCommand::Genus3Simple(args) } => cmd_sieve(args),
        Command::Bounds { which } => cmd_bounds(which).map(Output::ok),
        Command::Label { level } => cmd_label(&cli.fixtures, *level),
        Command::Compose { level, first, second } => cmd_compose(&cli.fixtures, *level, first, second),
        Command::VerifyTables { tables } => cmd_verify_tables(&cli.fixtures, tables),
    }
}

fn cmd_recover(args: &RecoverArgs) -> Result<Output> {
    let text = std::fs::read_to_string(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let basis = parse_basis(&text)?;
    if let Some(g) = args.genus {
        if basis.genus() != g {
            bail!("the basis has genus {}, not {g}", basis.genus());
        }
    }
    let recovered = match (args.ramified_e, args.mode) {
        (Some(e), _) => Recovered::Hyperelliptic(recover::recover_ramified(&basis, e)?),
        (None, RecoverMode::Hyperelliptic) => Recovered::Hyperelliptic(recover::recover_hyperelliptic(&basis)?),
        (None, RecoverMode::Auto) => recover::recover(&basis)?,
    };
    let mut out = String::new();
    match recovered {
        Recovered::Hyperelliptic(m) => {
            writeln!(out, "hyperelliptic : genus {} : {}", m.genus(), m.point_type())?;
            writeln!(out, "y^2 = {}", m.f())?;
            writeln!(out, "F = {}", m.f().coeff_string())?;
        }
        Recovered::Canonical(ideal) => {
            writeln!(out, "not hyperelliptic : genus {}", basis.genus())?;
            for rel in &ideal {
                writeln!(out, "degree {} : {} relations", rel.degree, rel.dimension())?;
                for k in 0..rel.dimension() {
                    writeln!(out, "  {} = 0", rel.format_relation(k))?;
                }
            }
        }
    }
    Ok(Output::ok(out))
}

struct Level {
    forms: Vec<Newform>,
    labels: Vec<String>,
}

impl Level {
    fn load(dir: &Path, level: u64) -> Result<Level> {
        let path = dir.join(format!("{level}.nfqx"));
        let forms = ingest_fixture(&path).with_context(|| format!("reading {}", path.display()))?;
        let labels = label(&forms)?;
        Ok(Level { forms, labels })
    }

    /// Orbits named by `names`, each given with or without the level.
    fn space(&self, level: u64, names: &[&str]) -> Result<CandidateSpace> {
        let mut forms = Vec::new();
        let mut labels = Vec::new();
        for name in names {
            let full = if name.starts_with(|c: char| c.is_ascii_digit()) { name.to_string() } else { format!("{level}{name}") };
            let i = self
                .labels
                .iter()
                .position(|l| *l == full)
                .ok_or_else(|| anyhow!("no orbit {full} (have {})", self.labels.join(", ")))?;
            forms.push(self.forms[i].clone());
            labels.push(full);
        }
        Ok(CandidateSpace::new(forms, labels)?)
    }
}

fn cmd_criterion(dir: &Path, level: u64, orbits: &[String]) -> Result<Output> {
    let names: Vec<&str> = orbits.iter().map(String::as_str).collect();
    let space = Level::load(dir, level)?.space(level, &names)?;
    match attempt_equation(&space) {
        Ok(r) => Ok(Output::ok(format!("{r}\ny^2 = {}\n", r.model.f()))),
        Err(e) => Ok(Output { text: format!("no curve : {}\n", e), code: 1 }),
    }
}

fn cmd_sieve(args: &SieveArgs) -> Result<Output> {
    let mut out = String::new();
    if args.stage == Some(1) {
        let cubics = enumerate_a2_cubics();
        writeln!(out, "{}", cubics.len())?;
        for c in &cubics {
            writeln!(out, "H2 = {}", c.h)?;
        }
        return Ok(Output::ok(out));
    }
    if let Some(s) = args.stage {
        bail!("unknown stage {s}; only stage 1 can be run on its own");
    }
    let config = SieveConfig {
        horizon: args.horizon,
        frobenius_filter: !args.no_frobenius_filter,
        span_filter: !args.no_span_filter,
        pin_eps3: !args.with_eps3_zero,
        limit: args.limit,
        fields: None,
    };
    let report = run_sieve_genus3_simple(&config)?;
    let c = &report.counts;
    writeln!(out, "stage cubics {}", c.cubics)?;
    writeln!(out, "stage after-frobenius {}", c.after_frobenius)?;
    writeln!(out, "stage explored {}", c.explored)?;
    writeln!(out, "stage after-span {}", c.after_span)?;
    writeln!(out, "stage after-model {}", c.after_model)?;
    writeln!(out, "stage emitted {}", c.emitted)?;
    for hit in &report.hits {
        writeln!(out, "{}", hit.record)?;
        writeln!(
            out,
            "  H2 = {} : eps(3) = {} : {} coefficient vectors",
            hit.h2,
            u8::from(hit.eps3),
            hit.tuples.len()
        )?;
    }
    Ok(Output::ok(out))
}

fn cmd_bounds(which: &BoundsCommand) -> Result<String> {
    Ok(match which {
        BoundsCommand::Ogg { p } => format!("{}\n", bounds::ogg_bound_new_hyperelliptic(*p)),
        BoundsCommand::OggQuotient { p, gonality } => format!("{}\n", bounds::ogg_bound_x0_quotient(*p, *gonality)),
        BoundsCommand::Gonality { g, lambda } => {
            format!("{}\n", bounds::gonality_genus_bound(*g, &parse_q(lambda)?)?)
        }
        BoundsCommand::TrivialChar { p } => format!("{}\n", bounds::trivial_char_gonality_bound(*p)),
        BoundsCommand::CastelnuovoSeveri { d1, d2, g1, g2 } => {
            format!("{}\n", bounds::castelnuovo_severi(*d1, *d2, *g1, *g2))
        }
        BoundsCommand::Precision { genus } => {
            let mut s = String::new();
            for (name, mode) in [
                ("general", PrecisionMode::General),
                ("hyperelliptic-weierstrass", PrecisionMode::HyperellipticWp),
                ("hyperelliptic-non-weierstrass", PrecisionMode::HyperellipticNonWp),
            ] {
                writeln!(s, "{name} {}", required_precision(*genus, mode)?)?;
            }
            s
        }
        BoundsCommand::Genus { level } => {
            format!("X0 {}\nX1 {}\n", bounds::genus_x0(*level), bounds::genus_x1(*level))
        }
        BoundsCommand::Genera { order, w } => {
            let gs = bounds::possible_genera(*order, *w)?;
            format!("{}\n", gs.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
        }
        BoundsCommand::Level { n, m } => {
            let p = bounds::level_predicates(*n, *m);
            format!("sparse {}\nsmooth {}\n", p.sparse, p.smooth)
        }
    })
}

fn cmd_label(dir: &Path, level: u64) -> Result<Output> {
    let data = Level::load(dir, level)?;
    let mut out = String::new();
    for (f, l) in data.forms.iter().zip(&data.labels) {
        writeln!(out, "{l} : dimension {} : character order {}", f.dimension(), f.character().order())?;
    }
    Ok(Output::ok(out))
}

fn cmd_compose(dir: &Path, level: u64, first: &str, second: &str) -> Result<Output> {
    let data = Level::load(dir, level)?;
    let a = attempt_equation(&data.space(level, &[first])?)?;
    let b = attempt_equation(&data.space(level, &[second])?)?;
    let c = compose_product(&a, &b)?;
    Ok(Output::ok(format!("{c}\ny^2 = {}\n", c.model.f())))
}

fn cmd_verify_tables(dir: &Path, which: &[TableId]) -> Result<Output> {
    let tables: Vec<_> = all_tables()?.into_iter().filter(|t| which.is_empty() || which.contains(&t.id)).collect();
    let reports = verify_tables(&tables, dir);
    let summary = Summary::of(&reports);
    let mut out = String::new();
    for r in &reports {
        writeln!(out, "{r}")?;
    }
    writeln!(out, "{summary}")?;
    Ok(Output { text: out, code: if summary.ok() { 0 } else { 1 } })
}
