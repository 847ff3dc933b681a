use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use pdisk_core::ext_analyzer::{enumerate_triangles, AnalysisOptions};
use pdisk_core::io::{
    builtin_bundle, builtin_qp_documents, formal_sum_json, multicurve_json, parse_json, report_json, report_text,
    smoothing_json, tikz, verify_qp, MorphismDoc, PotentialDoc, QpDocuments, QuiverDoc, RepDoc,
};
use pdisk_core::qp_algebra::{is_split_mono, linear_d_fixture, verify_exact, SearchBudget};
use pdisk_core::skein_engine::{smooth_self, SelfCrossing};
use pdisk_core::{
    analyze_extension, arc_representation, smooth_pair, ExtError, FieldConfig, JacobianContext, PuncturedDisk, Quiver,
    Representation, TaggedArc, Triangulation,
};

#[derive(Parser)]
#[command(name = "pdisk", version, about = "Tagged arcs, skein smoothing and extensions on a once-punctured disk")]
struct Cli {
    /// Base field: `q` or `fp:<P>`.
    #[arg(long, global = true, default_value = "q")]
    field: FieldConfig,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for the randomized sequence search.
    #[arg(long, global = true, default_value_t = SearchBudget::default().seed)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Tikz,
}

#[derive(Subcommand)]
enum Command {
    /// Crossing number of two tagged arcs.
    Cross {
        #[arg(long)]
        n: usize,
        /// Arc file (JSON) or inline arc such as `P(5,3)` or `R(0,⋈)`.
        alpha: String,
        beta: String,
    },
    /// Skein smoothing of two crossing arcs, or of a self-crossing interval.
    Smooth {
        #[arg(long)]
        n: usize,
        alpha: Option<String>,
        beta: Option<String>,
        /// Resolve the self-crossing curve given by cover interval `lo,hi`.
        #[arg(long, value_parser = parse_interval, conflicts_with_all = ["alpha", "beta"])]
        interval: Option<(i64, i64)>,
    },
    /// Quiver with potential of a triangulation.
    Quiver {
        /// Triangulation file, or `example1` / `example2`.
        triangulation: String,
    },
    /// Representation of a tagged arc.
    Rep { triangulation: String, arc: String },
    /// Extension analysis of two arcs outside the triangulation.
    Ext {
        triangulation: String,
        /// Defaults to the bundle's arcs when a built-in example is named.
        alpha: Option<String>,
        beta: Option<String>,
        /// Report dimension verdicts without searching for sequences.
        #[arg(long)]
        verdicts_only: bool,
        /// Random trials in the sequence search.
        #[arg(long, default_value_t = SearchBudget::default().random_trials)]
        trials: usize,
    },
    /// Tagged arcs of a disk, and optionally all extension triangles.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        triangles: bool,
    },
    /// Check relations and sequences given as quiver, potential, reps and sequence files.
    VerifyQp {
        #[arg(required_unless_present = "builtin")]
        quiver: Option<PathBuf>,
        #[arg(required_unless_present = "builtin")]
        potential: Option<PathBuf>,
        #[arg(required_unless_present = "builtin")]
        reps: Option<PathBuf>,
        #[arg(required_unless_present = "builtin")]
        sequences: Option<PathBuf>,
        /// Use a built-in data set instead (`example3`).
        #[arg(long, conflicts_with_all = ["quiver", "potential", "reps", "sequences"])]
        builtin: Option<String>,
    },
    /// Built-in fixtures.
    Fixture {
        #[command(subcommand)]
        which: FixtureCmd,
    },
}

#[derive(Subcommand)]
enum FixtureCmd {
    /// Explicit non-split extension over the linear type D quiver.
    LemmaD {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        i: usize,
    },
    Example1,
    Example2,
    Example3,
}

fn parse_interval(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or("expected lo,hi")?;
    Ok((a.trim().parse().map_err(|e| format!("{e}"))?, b.trim().parse().map_err(|e| format!("{e}"))?))
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Verification(String),
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) | CliError::File { .. } => 2,
        }
    }
}

macro_rules! input_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Input(e.to_string())
            }
        }
    )*};
}

input_errors!(
    pdisk_core::DiskError,
    pdisk_core::SkeinError,
    pdisk_core::QpError,
    pdisk_core::ArcRepError,
    pdisk_core::io::IoError,
    serde_json::Error
);

impl From<ExtError> for CliError {
    fn from(e: ExtError) -> Self {
        match e {
            ExtError::SearchFailed(_) => CliError::Verification(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

/// Output plus whether every check in it passed.
struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, passed: true }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::File { path: path.display().to_string(), source })
}

fn load_arc(disk: &PuncturedDisk, arg: &str) -> Result<TaggedArc, CliError> {
    let path = Path::new(arg);
    let arc: TaggedArc = if path.is_file() {
        parse_json(&read(path)?, arg)?
    } else {
        arg.parse().map_err(|e| CliError::Input(format!("{arg}: {e}")))?
    };
    disk.validate_arc(&arc)?;
    Ok(arc)
}

fn load_triangulation(arg: &str) -> Result<Triangulation, CliError> {
    match arg {
        "example1" | "example2" => Ok(builtin_bundle(arg)?.triangulation),
        _ => Ok(parse_json(&read(Path::new(arg))?, arg)?),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn rep_text(q: &Quiver, rep: &Representation) -> String {
    let mut s = String::from("dims");
    for (v, d) in q.vertices().iter().zip(&rep.dims) {
        let _ = write!(s, " {v}:{d}");
    }
    s.push('\n');
    for (a, m) in q.arrows().iter().zip(&rep.mats) {
        if m.is_zero() {
            continue;
        }
        let rows: Vec<String> =
            m.to_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect();
        let _ = writeln!(s, "  {} {}->{}: [{}]", a.label, a.from, a.to, rows.join("; "));
    }
    s
}

fn quiver_text(q: &Quiver) -> String {
    let mut s = format!("{} vertices, {} arrows\n", q.vertices().len(), q.arrows().len());
    for a in q.arrows() {
        let _ = writeln!(s, "  {}: {} -> {}", a.label, a.from, a.to);
    }
    s
}

const TAU_STYLE: &str = "gray";
const ALPHA_STYLE: &str = "thick, blue";
const BETA_STYLE: &str = "thick, red";
const C_STYLE: &str = "thick, dashed, green!50!black";

fn cmd_cross(cli: &Cli, n: usize, alpha: &str, beta: &str) -> Result<Outcome, CliError> {
    let disk = PuncturedDisk::new(n)?;
    let (a, b) = (load_arc(&disk, alpha)?, load_arc(&disk, beta)?);
    let e = disk.crossing_number(&a, &b)?;
    Ok(Outcome::ok(match cli.format {
        Format::Json => pretty(&json!({ "alpha": a, "beta": b, "e": e })),
        Format::Text => format!("{e}\n"),
        Format::Tikz => tikz(&disk, &[(ALPHA_STYLE, vec![a]), (BETA_STYLE, vec![b])]),
    }))
}

fn cmd_smooth(
    cli: &Cli,
    n: usize,
    alpha: Option<&str>,
    beta: Option<&str>,
    interval: Option<(i64, i64)>,
) -> Result<Outcome, CliError> {
    let disk = PuncturedDisk::new(n)?;
    if let Some((lo, hi)) = interval {
        let sum = smooth_self(&disk, SelfCrossing { lo, hi })?;
        return Ok(Outcome::ok(match cli.format {
            Format::Json => pretty(&formal_sum_json(&sum)),
            _ => {
                let terms: Vec<String> = sum.terms.iter().map(|t| format!("{}·{}", t.coeff, t.arcs)).collect();
                format!("{}\n", terms.join(" + "))
            }
        }));
    }
    let (Some(alpha), Some(beta)) = (alpha, beta) else {
        return Err(CliError::Input("smooth needs two arcs or --interval".into()));
    };
    let (a, b) = (load_arc(&disk, alpha)?, load_arc(&disk, beta)?);
    let r = smooth_pair(&disk, &a, &b)?;
    Ok(Outcome::ok(match cli.format {
        Format::Json => pretty(&smoothing_json(&r)),
        Format::Text => {
            let mut s = String::new();
            for (sign, list, prov) in [("+", &r.plus, &r.plus_provenance), ("-", &r.minus, &r.minus_provenance)] {
                for (m, p) in list.iter().zip(prov) {
                    let _ = writeln!(s, "{sign} {m}  ({})", serde_json::to_value(p)?.as_str().unwrap_or(""));
                }
            }
            s
        }
        Format::Tikz => r
            .plus
            .iter()
            .chain(&r.minus)
            .map(|m| tikz(&disk, &[(ALPHA_STYLE, vec![a]), (BETA_STYLE, vec![b]), (C_STYLE, m.arcs().to_vec())]))
            .collect(),
    }))
}

fn cmd_quiver(cli: &Cli, tri: &str) -> Result<Outcome, CliError> {
    let tau = load_triangulation(tri)?;
    let ctx = JacobianContext::new(&tau)?;
    let q = ctx.quiver();
    Ok(Outcome::ok(match cli.format {
        Format::Json => pretty(&json!({
            "quiver": QuiverDoc::from_quiver(q),
            "potential": PotentialDoc::from_potential(q, ctx.potential()),
        })),
        Format::Text => {
            let mut s = quiver_text(q);
            let p = PotentialDoc::from_potential(q, ctx.potential());
            let _ = writeln!(s, "potential {}", serde_json::to_string(&p)?);
            s
        }
        Format::Tikz => tikz(tau.disk(), &[(TAU_STYLE, tau.arcs().to_vec())]),
    }))
}

fn cmd_rep(cli: &Cli, tri: &str, arc: &str) -> Result<Outcome, CliError> {
    let tau = load_triangulation(tri)?;
    let a = load_arc(tau.disk(), arc)?;
    let ctx = JacobianContext::new(&tau)?;
    let rep = arc_representation(&ctx, &a, &cli.field)?;
    Ok(Outcome::ok(match cli.format {
        Format::Json => pretty(&serde_json::to_value(RepDoc::from_rep(ctx.quiver(), &rep))?),
        Format::Text => rep_text(ctx.quiver(), &rep),
        Format::Tikz => tikz(tau.disk(), &[(TAU_STYLE, tau.arcs().to_vec()), (ALPHA_STYLE, vec![a])]),
    }))
}

fn cmd_ext(
    cli: &Cli,
    tri: &str,
    alpha: Option<&str>,
    beta: Option<&str>,
    verdicts_only: bool,
    trials: usize,
) -> Result<Outcome, CliError> {
    let tau = load_triangulation(tri)?;
    let disk = *tau.disk();
    let (a, b) = match (alpha, beta) {
        (Some(x), Some(y)) => (load_arc(&disk, x)?, load_arc(&disk, y)?),
        (None, None) if tri.starts_with("example") => {
            let bundle = builtin_bundle(tri)?;
            (bundle.alpha, bundle.beta)
        }
        _ => return Err(CliError::Input("ext needs both arcs".into())),
    };
    let ctx = JacobianContext::new(&tau)?;
    let options = AnalysisOptions { budget: SearchBudget { random_trials: trials, seed: cli.seed }, verdicts_only };
    let r = analyze_extension(&ctx, &a, &b, &cli.field, options)?;
    Ok(Outcome::ok(match cli.format {
        Format::Json => pretty(&report_json(ctx.quiver(), &r)),
        Format::Text => report_text(&r),
        Format::Tikz => r
            .candidates
            .iter()
            .map(|c| {
                tikz(
                    &disk,
                    &[
                        (TAU_STYLE, tau.arcs().to_vec()),
                        (ALPHA_STYLE, vec![a]),
                        (BETA_STYLE, vec![b]),
                        (C_STYLE, c.multicurve.arcs().to_vec()),
                    ],
                )
            })
            .collect(),
    }))
}

fn cmd_enumerate(cli: &Cli, n: usize, triangles: bool) -> Result<Outcome, CliError> {
    let disk = PuncturedDisk::new(n)?;
    let arcs = disk.enumerate_tagged_arcs();
    let list = if triangles { Some(enumerate_triangles(&disk)?) } else { None };
    Ok(Outcome::ok(match cli.format {
        Format::Json => {
            let mut v = json!({ "n": n, "arcs": arcs });
            if let Some(list) = &list {
                v["triangles"] =
                    list.iter().map(|(a, c, b)| json!({ "alpha": a, "c": multicurve_json(c), "beta": b })).collect();
            }
            pretty(&v)
        }
        Format::Text => {
            let mut s = format!("{} arcs\n", arcs.len());
            for a in &arcs {
                let _ = writeln!(s, "  {a}");
            }
            if let Some(list) = &list {
                let _ = writeln!(s, "{} triangles", list.len());
                for (a, c, b) in list {
                    let _ = writeln!(s, "  {a} -> {c} -> {b}");
                }
            }
            s
        }
        Format::Tikz => tikz(&disk, &[(ALPHA_STYLE, arcs)]),
    }))
}

fn cmd_verify_qp(cli: &Cli, files: [Option<&PathBuf>; 4], builtin: Option<&str>) -> Result<Outcome, CliError> {
    let report = match builtin {
        Some(name) => verify_qp(&builtin_qp_documents(name)?, &cli.field)?,
        None => {
            let mut texts = Vec::with_capacity(4);
            for f in files {
                texts.push(read(f.ok_or_else(|| CliError::Input("verify-qp needs four files".into()))?)?);
            }
            let docs = QpDocuments { quiver: &texts[0], potential: &texts[1], reps: &texts[2], sequences: &texts[3] };
            verify_qp(&docs, &cli.field)?
        }
    };
    let text = match cli.format {
        Format::Json => pretty(&report.to_json()),
        _ => {
            let mut s = String::new();
            for (name, r) in &report.relations {
                let _ = writeln!(s, "relations {name}: {}", if r.ok() { "ok" } else { "FAIL" });
                for f in &r.failures {
                    let _ = writeln!(s, "  nonzero relation at arrow {}", f.arrow);
                }
            }
            for seq in &report.sequences {
                let split = match seq.split {
                    Some(true) => "split",
                    Some(false) => "non-split",
                    None => "-",
                };
                let _ = writeln!(s, "sequence {}: exact={} {split}", seq.name, seq.exact);
            }
            s
        }
    };
    Ok(Outcome { text, passed: report.all_pass() })
}

fn cmd_fixture(cli: &Cli, which: &FixtureCmd) -> Result<Outcome, CliError> {
    match *which {
        FixtureCmd::LemmaD { n, r, s, i } => {
            let fx = linear_d_fixture(n, r, s, i, &cli.field)?;
            let q = &fx.quiver;
            let exact = verify_exact(q, &fx.bottom, &fx.middle, &fx.top, &fx.f, &fx.g, &cli.field)?;
            let split = exact && is_split_mono(q, &fx.bottom, &fx.middle, &fx.f, &cli.field)?;
            let passed = exact && !split;
            let text = match cli.format {
                Format::Json => pretty(&json!({
                    "quiver": QuiverDoc::from_quiver(q),
                    "bottom": RepDoc::from_rep(q, &fx.bottom),
                    "middle": RepDoc::from_rep(q, &fx.middle),
                    "top": RepDoc::from_rep(q, &fx.top),
                    "f": MorphismDoc::from_morphism(q, &fx.f),
                    "g": MorphismDoc::from_morphism(q, &fx.g),
                    "exact": exact,
                    "non_split": exact && !split,
                })),
                _ => format!(
                    "{}bottom {}middle {}top {}exact {exact}, non-split {}\n",
                    quiver_text(q),
                    rep_text(q, &fx.bottom),
                    rep_text(q, &fx.middle),
                    rep_text(q, &fx.top),
                    exact && !split
                ),
            };
            Ok(Outcome { text, passed })
        }
        FixtureCmd::Example1 | FixtureCmd::Example2 => {
            let name = if matches!(which, FixtureCmd::Example1) { "example1" } else { "example2" };
            let bundle = builtin_bundle(name)?;
            Ok(Outcome::ok(match cli.format {
                Format::Json => pretty(&serde_json::to_value(&bundle)?),
                Format::Text => format!(
                    "{name}: n = {}, τ = {:?}\nalpha {}  beta {}  e = {}\n",
                    bundle.disk.n(),
                    bundle.triangulation.arcs().iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                    bundle.alpha,
                    bundle.beta,
                    bundle.expected.e
                ),
                Format::Tikz => tikz(
                    &bundle.disk,
                    &[
                        (TAU_STYLE, bundle.triangulation.arcs().to_vec()),
                        (ALPHA_STYLE, vec![bundle.alpha]),
                        (BETA_STYLE, vec![bundle.beta]),
                    ],
                ),
            }))
        }
        FixtureCmd::Example3 => cmd_verify_qp(cli, [None; 4], Some("example3")),
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Cross { n, alpha, beta } => cmd_cross(cli, *n, alpha, beta),
        Command::Smooth { n, alpha, beta, interval } => {
            cmd_smooth(cli, *n, alpha.as_deref(), beta.as_deref(), *interval)
        }
        Command::Quiver { triangulation } => cmd_quiver(cli, triangulation),
        Command::Rep { triangulation, arc } => cmd_rep(cli, triangulation, arc),
        Command::Ext { triangulation, alpha, beta, verdicts_only, trials } => {
            cmd_ext(cli, triangulation, alpha.as_deref(), beta.as_deref(), *verdicts_only, *trials)
        }
        Command::Enumerate { n, triangles } => cmd_enumerate(cli, *n, *triangles),
        Command::VerifyQp { quiver, potential, reps, sequences, builtin } => cmd_verify_qp(
            cli,
            [quiver.as_ref(), potential.as_ref(), reps.as_ref(), sequences.as_ref()],
            builtin.as_deref(),
        ),
        Command::Fixture { which } => cmd_fixture(cli, which),
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
    let result = run(&cli).and_then(|out| {
        match &cli.out {
            Some(path) => std::fs::write(path, &out.text)
                .map_err(|source| CliError::File { path: path.display().to_string(), source })?,
            None => print!("{}", out.text),
        }
        Ok(out.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
