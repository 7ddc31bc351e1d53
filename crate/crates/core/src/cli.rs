//! The `nbasis` command line.
//!
//! Name prefixes travel as one decimal natural per line. Ball literals are
//! written `B(center,radius)` with rational literals such as `-1/3` or `0.25`;
//! registry worlds also accept slot labels such as `pi` as centers and points.
//!
//! Exit status: 0 on success, 1 when a check reports violations, 2 on flag or
//! input errors, 3 when fuel runs out or a monitor has not accepted yet. Every
//! line written before a fuel stop is flushed first.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::sync::Arc;

use clap::{value_parser, Parser, Subcommand, ValueEnum};

use crate::basis::{
    check_axioms, extend_strong_inclusion, validate_prefix, InclusionRef, InducedBasis, Point,
    PrefixVerdict, Report, SubbasisRef,
};
use crate::equivalence::{
    check_adapter, totalize, Adapter, AdapterSetup, CrealToRational, FnAdapter, IdentityAdapter,
    RationalToCreal,
};
use crate::kernel::{parse_prefix, Fuel, Meter, Name, Nat, Stall};
use crate::metric::rational::q;
use crate::metric::{ball_code, ball_parts, strong_incl_metric, validate_cauchy_prefix, WorldRef};
use crate::repr::{member_monitor, Representation, RepresentationKind};
use crate::worlds::{
    default_relation, generate_name, make_world, relation as relation_of, representation,
    sample_ball_codes, sample_containing_pairs, sample_induced_codes, sample_points,
    si_representation, translation, NameKind, RationalWorld, RegistryWorld, RelationKind, World,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FUEL: i32 = 3;

const WORLDS: &str = "\
Worlds (--world):
  R-rational                         reals with rational balls
  R-registry [--with LIST]           reals with computable-real centers;
                                     LIST like pi,e,sqrt2,q:1/3,divergent:3,partial:40
  K-space [--fuel N]                 the subspace built from programs halting within N steps
  N-discrete                         naturals with the discrete metric
  singleton [--fuel N]               approximation programs with singleton basic sets

Exit status: 0 ok, 1 violations, 2 flag or input error, 3 fuel exhausted or NOT-YET.";

#[derive(Parser, Debug)]
#[command(name = "nbasis", version, about = "Names, translations and membership monitors over numbered subbases", after_help = WORLDS)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// World spec string, quoted when it carries options.
    #[arg(long, global = true, default_value = "R-rational")]
    world: String,

    /// Step budget for reading input names and running semi-decisions.
    #[arg(long, global = true, default_value_t = 100_000, value_parser = value_parser!(u64).range(1..))]
    fuel: u64,

    /// Number of name cells to emit.
    #[arg(long, global = true, default_value_t = 32, value_parser = value_parser!(u64).range(1..))]
    prefix: u64,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report progress and read bounds on stderr.
    #[arg(long, short, global = true)]
    verbose: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Translate a name read from INPUT or stdin.
    Translate {
        #[arg(long, value_enum)]
        src: Kind,
        #[arg(long, value_enum)]
        dst: Kind,
        input: Option<PathBuf>,
    },
    /// Check a finite name prefix against a point.
    Probe {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Required for every kind except cauchy.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        /// Validate over the totalized subbasis and relation.
        #[arg(long)]
        totalized: bool,
        input: Option<PathBuf>,
    },
    /// Semi-decide membership in a basic set from a strong-inclusion name.
    Member {
        /// Ball literal `B(center,radius)` with positive radius.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long, value_enum, default_value_t = Relation::Strict)]
        relation: Relation,
        input: Option<PathBuf>,
    },
    /// Check the strong-inclusion axioms on sampled codes and points.
    CheckAxioms {
        #[arg(long, value_enum, default_value_t = Relation::Strict)]
        relation: Relation,
        /// Check the extension to induced codes.
        #[arg(long)]
        induced: bool,
        /// Number of sampled codes; all pairs and triples are checked.
        #[arg(long, default_value_t = 40)]
        samples: usize,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Check the uniform adapter conditions on sampled pairs.
    CheckAdapter {
        #[arg(long, value_enum)]
        adapter: AdapterKind,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Refinements tried per sampled pair.
        #[arg(long, default_value_t = 4)]
        refinements: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Emit a name prefix of a point.
    GenName {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Cauchy,
    Min,
    Max,
    Si,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Relation {
    Strict,
    NonStrict,
    Equality,
    Singleton,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum AdapterKind {
    RationalToCreal,
    CrealToRational,
    Identity,
    /// Maps everything to the empty sequence; fails the cover condition.
    Empty,
    /// Replaces radii by 1; fails the strong-basis condition.
    RadiusOne,
}

impl From<Kind> for NameKind {
    fn from(k: Kind) -> NameKind {
        match k {
            Kind::Cauchy => NameKind::Cauchy,
            Kind::Min => NameKind::Min,
            Kind::Max => NameKind::Max,
            Kind::Si => NameKind::Si,
        }
    }
}

impl From<Relation> for RelationKind {
    fn from(r: Relation) -> RelationKind {
        match r {
            Relation::Strict => RelationKind::Strict,
            Relation::NonStrict => RelationKind::NonStrict,
            Relation::Equality => RelationKind::Equality,
            Relation::Singleton => RelationKind::Singleton,
        }
    }
}

impl From<RelationKind> for Relation {
    fn from(r: RelationKind) -> Relation {
        match r {
            RelationKind::Strict => Relation::Strict,
            RelationKind::NonStrict => Relation::NonStrict,
            RelationKind::Equality => Relation::Equality,
            RelationKind::Singleton => Relation::Singleton,
        }
    }
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Io(e)
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

type Outcome = Result<i32, Failure>;

struct Context<'a> {
    cli: &'a Cli,
    world: World,
    stdin: Option<Box<dyn BufRead>>,
    err: &'a mut dyn Write,
}

impl Context<'_> {
    fn metric(&self) -> Result<WorldRef, Failure> {
        self.world.metric().map_err(usage)
    }

    fn input(&mut self, path: &Option<PathBuf>) -> Result<Box<dyn BufRead>, Failure> {
        match path {
            Some(p) => {
                let f = File::open(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
                Ok(Box::new(BufReader::new(f)))
            }
            None => self
                .stdin
                .take()
                .ok_or_else(|| usage("stdin already consumed")),
        }
    }

    fn fuel(&self) -> Fuel {
        Fuel(self.cli.fuel)
    }

    fn prefix(&self) -> usize {
        self.cli.prefix as usize
    }

    fn representation(&self, kind: Kind) -> Result<Representation, Failure> {
        representation(&self.world, kind.into()).map_err(usage)
    }

    fn si_representation(&self, relation: Relation) -> Result<Representation, Failure> {
        si_representation(&self.world, relation.into()).map_err(usage)
    }

    fn point(&self, s: &str) -> Result<Point, Failure> {
        self.world.parse_point(s).map_err(usage)
    }
}

/// Runs one invocation and returns its exit status.
pub fn run<I, T>(args: I, stdin: Box<dyn BufRead>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let msg = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{msg}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{msg}");
                EXIT_OK
            };
        }
    };
    let world = match make_world(&cli.world) {
        Ok(w) => w,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut file;
    let sink: &mut dyn Write = match &cli.out {
        Some(path) => match File::create(path) {
            Ok(f) => {
                file = BufWriter::new(f);
                &mut file
            }
            Err(e) => {
                let _ = writeln!(err, "error: {}: {e}", path.display());
                return EXIT_USAGE;
            }
        },
        None => out,
    };
    let mut ctx = Context {
        cli: &cli,
        world,
        stdin: Some(stdin),
        err,
    };
    let result = dispatch(&mut ctx, sink).and_then(|code| {
        sink.flush()?;
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = sink.flush();
            let _ = writeln!(ctx.err, "error: {msg}");
            EXIT_USAGE
        }
        // A closed downstream pipe ends the stream, it does not fail it.
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Failure::Io(e)) => {
            let _ = writeln!(ctx.err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(ctx: &mut Context<'_>, sink: &mut dyn Write) -> Outcome {
    match &ctx.cli.command {
        Command::Translate { src, dst, input } => {
            let (src, dst, input) = (*src, *dst, input.clone());
            translate(ctx, sink, src, dst, &input)
        }
        Command::Probe {
            kind,
            point,
            totalized,
            input,
        } => {
            let (kind, point, totalized, input) = (*kind, point.clone(), *totalized, input.clone());
            probe(ctx, sink, kind, point.as_deref(), totalized, &input)
        }
        Command::Member {
            target,
            relation,
            input,
        } => {
            let (target, relation, input) = (target.clone(), *relation, input.clone());
            member(ctx, sink, &target, relation, &input)
        }
        Command::CheckAxioms {
            relation,
            induced,
            samples,
            points,
            seed,
        } => {
            let (r, i, s, p, seed) = (*relation, *induced, *samples, *points, *seed);
            check_axioms_cmd(ctx, sink, r, i, s, p, seed)
        }
        Command::CheckAdapter {
            adapter,
            samples,
            refinements,
            seed,
        } => {
            let (a, s, r, seed) = (*adapter, *samples, *refinements, *seed);
            check_adapter_cmd(ctx, sink, a, s, r, seed)
        }
        Command::GenName { kind, point } => {
            let (kind, point) = (*kind, point.clone());
            gen_name(ctx, sink, kind, &point)
        }
    }
}

/// Writes cells of `name` one per line until the prefix is complete, the
/// fuel runs out, or the name ends.
/// Only reading an input name is metered; generated names are total.
fn stream(
    ctx: &mut Context<'_>,
    sink: &mut dyn Write,
    name: &Name,
    input: Option<&Name>,
) -> Outcome {
    let mut meter = match input {
        Some(_) => Meter::new(ctx.fuel()),
        None => Meter::unbounded(),
    };
    for k in 0..ctx.prefix() {
        match name.try_at(k, &mut meter) {
            Ok(cell) => {
                writeln!(sink, "{cell}")?;
                sink.flush()?;
                if ctx.cli.verbose {
                    if let Some(input) = input {
                        writeln!(
                            ctx.err,
                            "cell {k}: {} input cells read",
                            input.evaluated_len()
                        )?;
                    }
                }
            }
            Err(Stall::OutOfFuel) => {
                writeln!(
                    ctx.err,
                    "fuel exhausted: {k} cells written, {} steps used",
                    meter.used()
                )?;
                return Ok(EXIT_FUEL);
            }
            Err(Stall::EndOfInput) => {
                if ctx.cli.verbose {
                    writeln!(ctx.err, "input ended after {k} output cells")?;
                }
                return Ok(EXIT_OK);
            }
            Err(Stall::BadInput(msg)) => return Err(Failure::Usage(msg)),
        }
    }
    if ctx.cli.verbose {
        writeln!(
            ctx.err,
            "{} cells written, {} steps used",
            ctx.prefix(),
            meter.used()
        )?;
    }
    Ok(EXIT_OK)
}

fn translate(
    ctx: &mut Context<'_>,
    sink: &mut dyn Write,
    src: Kind,
    dst: Kind,
    input: &Option<PathBuf>,
) -> Outcome {
    let (t, bound) = translation(&ctx.world, src.into(), dst.into()).map_err(usage)?;
    let name = Name::from_reader(ctx.input(input)?);
    if ctx.cli.verbose {
        writeln!(
            ctx.err,
            "{}: output cell k reads at most {bound} input cells",
            t.label()
        )?;
    }
    let output = t.transform(&name);
    stream(ctx, sink, &output, Some(&name))
}

fn read_all(ctx: &mut Context<'_>, input: &Option<PathBuf>) -> Result<Vec<Nat>, Failure> {
    let mut text = String::new();
    ctx.input(input)?.read_to_string(&mut text)?;
    parse_prefix(&text).map_err(|e| match e {
        Stall::BadInput(m) => Failure::Usage(m),
        other => Failure::Usage(other.to_string()),
    })
}

fn probe(
    ctx: &mut Context<'_>,
    sink: &mut dyn Write,
    kind: Kind,
    point: Option<&str>,
    totalized: bool,
    input: &Option<PathBuf>,
) -> Outcome {
    let prefix = read_all(ctx, input)?;
    let verdict = match kind {
        Kind::Cauchy => validate_cauchy_prefix(&prefix, ctx.metric()?.as_ref(), ctx.fuel()),
        kind => {
            let point = ctx.point(point.ok_or_else(|| usage("--point is required"))?)?;
            let rep = if totalized {
                let base = ctx.si_representation(default_relation(&ctx.world).into())?;
                let RepresentationKind::StrongIncl(si) = base.kind().clone() else {
                    unreachable!("strong-inclusion representation")
                };
                let (tsb, tsi) = totalize(si, ctx.world.subbasis());
                let tsb: SubbasisRef = Arc::new(tsb);
                let tsi: InclusionRef = Arc::new(tsi);
                match kind {
                    Kind::Min => Representation::min(tsb),
                    Kind::Max => Representation::max(tsb),
                    _ => Representation::new(RepresentationKind::StrongIncl(tsi), tsb)
                        .map_err(usage)?,
                }
            } else {
                ctx.representation(kind)?
            };
            validate_prefix(&rep, &prefix, &point)
        }
    };
    let (word, code) = match verdict {
        PrefixVerdict::ConsistentSoFar => ("CONSISTENT", EXIT_OK),
        PrefixVerdict::Violation => ("VIOLATION", EXIT_VIOLATION),
        PrefixVerdict::Unknown => ("UNKNOWN", EXIT_FUEL),
    };
    writeln!(sink, "{word} cells={}", prefix.len())?;
    Ok(code)
}

fn member(
    ctx: &mut Context<'_>,
    sink: &mut dyn Write,
    target: &str,
    relation: Relation,
    input: &Option<PathBuf>,
) -> Outcome {
    let target = ctx.world.parse_ball(target).map_err(usage)?;
    let rep = ctx.si_representation(relation)?;
    let monitor = member_monitor(&rep, &target).map_err(usage)?;
    let name = Name::from_reader(ctx.input(input)?);
    let poll = monitor.run(&name, ctx.fuel());
    if let Some(Stall::BadInput(msg)) = poll.error {
        return Err(Failure::Usage(msg));
    }
    if poll.result.is_accept() {
        let witness = poll.witness.unwrap_or_default();
        writeln!(
            sink,
            "ACCEPT fuel={} cells={} witness={witness}",
            poll.used, poll.cells
        )?;
        Ok(EXIT_OK)
    } else {
        writeln!(sink, "NOT-YET fuel={} cells={}", poll.used, poll.cells)?;
        Ok(EXIT_FUEL)
    }
}

fn emit_report(
    ctx: &mut Context<'_>,
    sink: &mut dyn Write,
    report: &Report,
    what: &str,
) -> Outcome {
    write!(sink, "{}", report.render())?;
    if ctx.cli.verbose {
        writeln!(
            ctx.err,
            "{what}: {} violations, {} undecided checks skipped",
            report.violations.len(),
            report.skipped
        )?;
    }
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

fn check_axioms_cmd(
    ctx: &mut Context<'_>,
    sink: &mut dyn Write,
    relation: Relation,
    induced: bool,
    samples: usize,
    points: usize,
    seed: u64,
) -> Outcome {
    let base = relation_of(&ctx.world, relation.into()).map_err(usage)?;
    let codes: Vec<Nat> = match (&ctx.world, induced) {
        (World::Singleton(_), false) => (0..samples as u64).map(Nat::from).collect(),
        (World::Singleton(_), true) => {
            return Err(usage("induced codes are sampled for metric worlds only"))
        }
        (w, false) => sample_ball_codes(w, samples, seed),
        (w, true) => sample_induced_codes(w, samples, seed),
    };
    let pts = sample_points(&ctx.world, points, seed.wrapping_add(1));
    let sb = ctx.world.subbasis();
    let report = if induced {
        let ext = extend_strong_inclusion(base);
        check_axioms(&ext, &InducedBasis::new(sb.clone()), &codes, &pts)
    } else {
        check_axioms(base.as_ref(), sb.as_ref(), &codes, &pts)
    };
    emit_report(
        ctx,
        sink,
        &report,
        &format!("{} on {}", report_label(relation, induced), sb.id()),
    )
}

fn report_label(relation: Relation, induced: bool) -> String {
    let name = relation
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    if induced {
        format!("{name} (induced)")
    } else {
        name
    }
}

fn check_adapter_cmd(
    ctx: &mut Context<'_>,
    sink: &mut dyn Write,
    kind: AdapterKind,
    samples: usize,
    refinements: usize,
    seed: u64,
) -> Outcome {
    let registry = match &ctx.world {
        World::Registry(r) => r.clone(),
        _ => Arc::new(RegistryWorld::standard()),
    };
    let rat: WorldRef = Arc::new(RationalWorld);
    let reg: WorldRef = registry.clone();
    let strict = |w: &WorldRef| -> InclusionRef { Arc::new(strong_incl_metric(w.clone(), true)) };
    let (src, dst) = match kind {
        AdapterKind::RationalToCreal => (rat.clone(), reg.clone()),
        AdapterKind::CrealToRational => (reg.clone(), rat.clone()),
        _ => (rat.clone(), rat.clone()),
    };
    let extra_centers = if kind == AdapterKind::CrealToRational {
        (0..registry.slots().len())
            .filter(|&s| registry.slots()[s].is_total())
            .map(RegistryWorld::slot_code)
            .collect()
    } else {
        Vec::new()
    };
    let setup = AdapterSetup {
        si_src: strict(&src),
        si_dst: strict(&dst),
        src,
        dst,
        refinements,
        extra_centers,
        seed,
    };
    let dst_world = match kind {
        AdapterKind::RationalToCreal => World::Registry(registry.clone()),
        _ => World::Rational(Arc::new(RationalWorld)),
    };
    let sample = sample_containing_pairs(&dst_world, samples, seed);
    let adapter: Box<dyn Adapter> = match kind {
        AdapterKind::RationalToCreal => Box::new(RationalToCreal),
        AdapterKind::CrealToRational => Box::new(CrealToRational::new(reg)),
        AdapterKind::Identity => Box::new(IdentityAdapter),
        AdapterKind::Empty => Box::new(FnAdapter::new("empty", |_: &[Nat]| Vec::new())),
        AdapterKind::RadiusOne => Box::new(FnAdapter::new("radius-one", |seq: &[Nat]| {
            seq.iter()
                .map(|b| ball_code(&ball_parts(b).0, &q(1, 1)))
                .collect()
        })),
    };
    let report = check_adapter(adapter.as_ref(), &setup, &sample);
    emit_report(ctx, sink, &report, &adapter.label())
}

fn gen_name(ctx: &mut Context<'_>, sink: &mut dyn Write, kind: Kind, point: &str) -> Outcome {
    let p = ctx.point(point)?;
    let name = generate_name(&ctx.world, &p, kind.into()).map_err(usage)?;
    stream(ctx, sink, &name, None)
}
