//! The `invlim` command line. Every subcommand writes one JSON document to
//! stdout and a short human-readable summary to stderr.
//!
//! Exit codes: 0 affirmative, 1 negative verdict, 2 input or usage error,
//! 3 cap exceeded or undetermined.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::classify::{classify_point, compare_spaces, exceptional_diagnosis, ClassifyError, Outcome, Verdict};
use crate::input::{parse_itinerary, read_document, InputDocument, InputError, FORMAT_VERSION};
use crate::itinerary::{distance, BackwardItinerary};
use crate::json::{self, AssumptionsJson, ClassificationJson, DistanceJson, OrbitsJson, PartitionJson, RefineJson, RoundJson, VerdictJson};
use crate::map::{MultivaluedVerdict, PLGraphMap};
use crate::markov::{markov_data, MarkovError, DEFAULT_PARTITION_CAP};
use crate::orbits::{endpoint_orbit_closure, omega_of_turning_points, orbit_record, OrbitError, DEFAULT_ORBIT_CAP};
use crate::rational::{fmt_q, parse_q};
use crate::refinement::{refinement_sequence, RefinementError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNDETERMINED: i32 = 3;

/// Overrides the default orbit cap when `--cap` is absent.
pub const CAP_ENV: &str = "INVLIM_CAP";

#[derive(Parser, Debug)]
#[command(name = "invlim", version, about = "Markov graph maps and their inverse limits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct MapArgs {
    /// Input document (TOML).
    file: PathBuf,
    #[arg(long)]
    map: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a document and check every map in it.
    Validate { file: PathBuf },
    /// Markov partition, index sets and transition matrix.
    Partition(MapArgs),
    /// Turning-point orbits and their ω-limit set.
    Orbits {
        #[command(flatten)]
        m: MapArgs,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Check the standing assumptions on preimages.
    Assumptions(MapArgs),
    /// Chain refinement sequence for one map.
    Refine {
        #[command(flatten)]
        m: MapArgs,
        #[arg(long)]
        depth: usize,
        /// Also write the document to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Compare the inverse limits of two maps.
    Compare {
        file: PathBuf,
        /// Two map names, `A,B`.
        #[arg(long, value_delimiter = ',', num_args = 1)]
        maps: Vec<String>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Product or exceptional local structure at a periodic point.
    Classify {
        #[command(flatten)]
        m: MapArgs,
        #[arg(long)]
        itinerary: String,
        /// Matrix-power depth for the diagnosis of exceptional points.
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Operations on a single inverse-limit point.
    Point {
        #[command(flatten)]
        m: MapArgs,
        #[arg(long)]
        itinerary: String,
        #[arg(long, group = "op")]
        shift: bool,
        #[arg(long, group = "op", value_name = "N")]
        project: Option<usize>,
        #[arg(long, group = "op", value_name = "SPEC2", requires = "precision")]
        distance: Option<String>,
        #[arg(long, value_name = "P/Q")]
        precision: Option<String>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, e: impl std::fmt::Display) -> Self {
        Failure { code, message: e.to_string() }
    }

    fn input(e: impl std::fmt::Display) -> Self {
        Failure::new(EXIT_INPUT, e)
    }
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::input(e)
    }
}

impl From<MarkovError> for Failure {
    fn from(e: MarkovError) -> Self {
        let code = match e {
            MarkovError::NotEventuallyPeriodic(_) => EXIT_UNDETERMINED,
            _ => EXIT_NEGATIVE,
        };
        Failure::new(code, e)
    }
}

impl From<OrbitError> for Failure {
    fn from(e: OrbitError) -> Self {
        Failure::new(EXIT_UNDETERMINED, e)
    }
}

impl From<RefinementError> for Failure {
    fn from(e: RefinementError) -> Self {
        let code = match &e {
            RefinementError::Markov(m) => return m.clone().into(),
            RefinementError::NoDelta(_) | RefinementError::PatternDivergence(_) => EXIT_UNDETERMINED,
            _ => EXIT_NEGATIVE,
        };
        Failure::new(code, e)
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Orbit(o) => o.into(),
            ClassifyError::Refinement(r) => r.into(),
            ClassifyError::HypothesisFailed(_) => Failure::new(EXIT_UNDETERMINED, e),
            ClassifyError::DifferentGraphs => Failure::input(e),
            _ => Failure::new(EXIT_NEGATIVE, e),
        }
    }
}

/// What a subcommand produced.
struct Report {
    code: i32,
    doc: String,
    summary: String,
    also_write: Option<PathBuf>,
}

impl Report {
    fn new(code: i32, doc: &impl Serialize, summary: impl Into<String>) -> Self {
        Report { code, doc: json::to_string(doc), summary: summary.into(), also_write: None }
    }
}

/// Runs the command line against the process streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

/// Runs the command line, writing the JSON document to `out` and
/// diagnostics to `err`.
pub fn run_with<'a, I, T>(args: I, out: &'a mut dyn Write, err: &'a mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let stream = if e.use_stderr() { err } else { out };
            let _ = write!(stream, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(r) => {
            let _ = out.write_all(r.doc.as_bytes());
            let _ = writeln!(err, "{}", r.summary);
            if let Some(path) = r.also_write {
                if let Err(e) = std::fs::write(&path, &r.doc) {
                    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                    return EXIT_INPUT;
                }
            }
            r.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn orbit_cap(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(c) = flag {
        return Ok(c);
    }
    match std::env::var(CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Failure::input(format!("{CAP_ENV}={v:?} is not a count"))),
        Err(_) => Ok(DEFAULT_ORBIT_CAP),
    }
}

fn load(m: &MapArgs) -> Result<(InputDocument, PLGraphMap), Failure> {
    let doc = read_document(&m.file)?;
    let f = doc.map(&m.map)?.clone();
    Ok((doc, f))
}

fn itinerary(f: &PLGraphMap, spec: &str) -> Result<BackwardItinerary, Failure> {
    let (pre, cycle) = parse_itinerary(f.graph(), spec)?;
    BackwardItinerary::new(f, pre, cycle).map_err(|e| Failure::input(format!("itinerary {spec:?}: {e}")))
}

fn dispatch(cmd: Command) -> Result<Report, Failure> {
    match cmd {
        Command::Validate { file } => validate(file),
        Command::Partition(m) => {
            let (_, f) = load(&m)?;
            let d = markov_data(&f, DEFAULT_PARTITION_CAP)?;
            let doc = PartitionJson::new(&m.map, &d);
            let summary = format!("{}: {} Markov links", m.map, d.links().len());
            Ok(Report::new(EXIT_OK, &doc, summary))
        }
        Command::Orbits { m, cap } => {
            let (_, f) = load(&m)?;
            let cap = orbit_cap(cap)?;
            orbits(&m.map, &f, cap)
        }
        Command::Assumptions(m) => {
            let (_, f) = load(&m)?;
            let r = f.check_standing_assumptions(DEFAULT_PARTITION_CAP);
            let code = if r.all_hold() {
                EXIT_OK
            } else if !r.isolated_preimages
                || !r.nonexpanding_preimages
                || r.eventually_multivalued_preimages == MultivaluedVerdict::Failed
            {
                EXIT_NEGATIVE
            } else {
                EXIT_UNDETERMINED
            };
            let doc = json!({"format": FORMAT_VERSION, "map": m.map, "assumptions": AssumptionsJson::new(&r)});
            let summary = format!("{}: standing assumptions {}", m.map, if r.all_hold() { "hold" } else { "not verified" });
            Ok(Report::new(code, &doc, summary))
        }
        Command::Refine { m, depth, json } => {
            let (_, f) = load(&m)?;
            let rounds = refinement_sequence(&f, depth)?;
            let doc = RefineJson {
                format: FORMAT_VERSION,
                map: m.map.clone(),
                rounds: rounds.iter().enumerate().map(|(i, r)| RoundJson::new(i + 1, r)).collect(),
            };
            let sizes: Vec<String> = rounds.iter().map(|r| r.chain.len().to_string()).collect();
            let mut r = Report::new(EXIT_OK, &doc, format!("{}: {depth} rounds, links {}", m.map, sizes.join(" ")));
            r.also_write = json;
            Ok(r)
        }
        Command::Compare { file, maps, depth, json, cap } => {
            let [a, b] = maps.as_slice() else {
                return Err(Failure::input("--maps takes exactly two names, A,B"));
            };
            let doc = read_document(&file)?;
            let cap = orbit_cap(cap)?;
            let v = compare_spaces(doc.map(a)?, doc.map(b)?, depth, cap)?;
            let code = match v.outcome {
                Outcome::Homeomorphic { .. } => EXIT_OK,
                Outcome::Distinguished { .. } => EXIT_NEGATIVE,
                Outcome::Inconclusive => EXIT_UNDETERMINED,
            };
            let mut summary = format!("{a} vs {b}: {}", v.outcome.label());
            for n in &v.notes {
                summary.push_str(&format!("\n  note: {n}"));
            }
            let mut r = Report::new(code, &VerdictJson::new([a, b], &v), summary);
            r.also_write = json;
            Ok(r)
        }
        Command::Classify { m, itinerary: spec, depth, cap } => {
            let (_, f) = load(&m)?;
            let cap = orbit_cap(cap)?;
            let x = itinerary(&f, &spec)?;
            let c = classify_point(&f, &x, cap)?;
            let diagnosis = match c.verdict {
                Verdict::Product => None,
                Verdict::Exceptional => match markov_data(&f, DEFAULT_PARTITION_CAP) {
                    Ok(d) => Some(exceptional_diagnosis(&f, &d, &x, depth, cap)?),
                    Err(_) => None,
                },
            };
            let code = if c.verdict == Verdict::Product { EXIT_OK } else { EXIT_NEGATIVE };
            let doc = ClassificationJson::new(f.graph(), &m.map, &x, &c, diagnosis.as_ref());
            let mut summary = format!("{}: {}", x.display(f.graph()), c.verdict);
            if let Some(d) = &diagnosis {
                summary.push_str(&format!(" ({})", d.code));
            }
            Ok(Report::new(code, &doc, summary))
        }
        Command::Point { m, itinerary: spec, shift, project, distance: other, precision } => {
            let (_, f) = load(&m)?;
            let g = f.graph();
            let x = itinerary(&f, &spec)?;
            if shift {
                let s = x.shift(&f);
                let doc = json!({
                    "format": FORMAT_VERSION,
                    "itinerary": s.display(g),
                    "normalized": s.normalized().display(g),
                });
                Ok(Report::new(EXIT_OK, &doc, s.normalized().display(g)))
            } else if let Some(n) = project {
                let p = x.project(n).display(g);
                let doc = json!({"format": FORMAT_VERSION, "n": n, "point": p});
                Ok(Report::new(EXIT_OK, &doc, p))
            } else if let Some(other) = other {
                let y = itinerary(&f, &other)?;
                let text = precision.expect("clap enforces --precision");
                let eps = parse_q(&text).map_err(|_| Failure::input(format!("bad precision {text:?}")))?;
                if eps <= crate::rational::int(0) {
                    return Err(Failure::input("precision must be positive"));
                }
                let d = distance(&f, &x, &y, &eps);
                let summary = format!("d = {} in [{}, {}]", fmt_q(&d.exact), fmt_q(&d.lo), fmt_q(&d.hi));
                Ok(Report::new(EXIT_OK, &DistanceJson::new(&d), summary))
            } else {
                Err(Failure::input("point needs one of --shift, --project N, --distance SPEC2"))
            }
        }
    }
}

fn validate(file: PathBuf) -> Result<Report, Failure> {
    let doc = read_document(&file)?;
    let g = &doc.graph;
    let maps: Vec<_> = doc
        .maps
        .iter()
        .map(|(name, f)| {
            json!({
                "name": name,
                "laps": f.all_laps().count(),
                "turning_points": f.turning_points().len(),
            })
        })
        .collect();
    let out = json!({
        "format": FORMAT_VERSION,
        "vertices": g.vertex_count(),
        "edges": g.edges().map(|e| e.to_string()).collect::<Vec<_>>(),
        "maps": maps,
    });
    let summary = format!("{}: {} maps, valid", file.display(), doc.maps.len());
    Ok(Report::new(EXIT_OK, &out, summary))
}

fn orbits(name: &str, f: &PLGraphMap, cap: usize) -> Result<Report, Failure> {
    let g = f.graph();
    let mut records = Vec::new();
    let mut capped = false;
    for t in f.turning_points() {
        match orbit_record(f, &t.location, cap) {
            Ok(r) => records.push(r),
            Err(_) => capped = true,
        }
    }
    let omega = omega_of_turning_points(f, cap).ok();
    let ends = endpoint_orbit_closure(f, cap).ok();
    let doc = OrbitsJson::new(g, name, cap, &records, omega.as_ref(), ends.as_ref());
    let summary = match &omega {
        Some(o) => format!("{name}: |ω(P)| = {}", o.len()),
        None => format!("{name}: some turning-point orbit exceeds {cap} iterates"),
    };
    let code = if capped || omega.is_none() { EXIT_UNDETERMINED } else { EXIT_OK };
    Ok(Report::new(code, &doc, summary))
}
