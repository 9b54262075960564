use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use locale_lab_core::corpus::{Corpus, CORPUS_ENV};
use locale_lab_core::interval::{parse_expression, Q};
use locale_lab_core::io::{
    load_frame, load_morphism, load_nucleus, load_valuation, parse_tolerance, IoError, LoadedValuation,
};
use locale_lab_core::laws::{self, LawConfig, Suite};
use locale_lab_core::measure::finite::reduced_algebra;
use locale_lab_core::measure::interval::{default_tolerance, measure_bounds, Descriptor, MeasureError};
use locale_lab_core::sublocale::{Sublocale, DEFAULT_ENUMERATION_BOUND};
use locale_lab_core::{demo, Frame};

const CLEAN: u8 = 0;
const FAILED: u8 = 1;
const BAD_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "locale-lab", version, about = "Check frames, sublocales, frame maps and valuations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a frame or finite topology file and print its statistics.
    FrameCheck { path: PathBuf },
    /// Validate a nucleus file and describe its sublocale.
    NucleusCheck { path: PathBuf },
    /// Validate a frame-map file and describe the induced locale map.
    MorphismCheck { path: PathBuf },
    /// Validate a valuation file, finite or on [0,1].
    ValuationCheck { path: PathBuf },
    /// Run a law suite over a corpus of frames.
    Laws {
        /// frame, sublocale, morphism, measure or all
        suite: String,
        /// Corpus directory; defaults to the built-in corpus.
        #[arg(long, env = CORPUS_ENV)]
        corpus: Option<PathBuf>,
        /// Skip frames with more elements.
        #[arg(long, default_value_t = 10)]
        max_size: usize,
        /// Tolerance for the bounds on [0,1], e.g. 1e-3 or 1/1000.
        #[arg(long)]
        tol: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Seed for the random opens of [0,1].
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Certified bounds on the measure of a sublocale of [0,1].
    Measure {
        /// lebesgue, "restrict <set>", "atoms [[p,w],...]", JSON, or a valuation file
        descriptor: String,
        /// e.g. rationals, generic, "(0,1/2)", "closed [0,1/4]", "union(rationals; (1/2,1))"
        expression: String,
        #[arg(long)]
        tol: Option<String>,
    },
    /// Run a scripted scenario: generic, rationals, reduction or hidden-intersections.
    Demo {
        name: String,
        #[arg(long)]
        tol: Option<String>,
    },
    /// Write the standard corpus to a directory.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Subcommand)]
enum CorpusAction {
    Export { dir: PathBuf },
}

/// A message and the exit code it carries.
struct Failure(u8, String);

impl From<IoError> for Failure {
    fn from(e: IoError) -> Failure {
        let code = if e.is_input_error() { BAD_INPUT } else { FAILED };
        Failure(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::FrameCheck { path } => frame_check(&path),
        Command::NucleusCheck { path } => nucleus_check(&path),
        Command::MorphismCheck { path } => morphism_check(&path),
        Command::ValuationCheck { path } => valuation_check(&path),
        Command::Laws {
            suite,
            corpus,
            max_size,
            tol,
            format,
            seed,
        } => {
            let suite: Suite = suite.parse().map_err(|e: laws::UnknownSuite| Failure(BAD_INPUT, e.to_string()))?;
            let corpus = load_corpus(corpus)?;
            let config = LawConfig {
                max_size,
                tolerance: tolerance(tol.as_deref())?,
                seed,
                ..LawConfig::default()
            };
            let report = laws::run(suite, &corpus, &config);
            match format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => print!("{}", report.to_json()),
            }
            Ok(if report.is_clean() { CLEAN } else { FAILED })
        }
        Command::Measure {
            descriptor,
            expression,
            tol,
        } => measure(&descriptor, &expression, tol.as_deref()),
        Command::Demo { name, tol } => {
            let tol = tolerance(tol.as_deref())?;
            let d = demo::run(&name, &tol).ok_or_else(|| {
                Failure(BAD_INPUT, format!("unknown demo {name:?} (expected one of {})", demo::NAMES.join(", ")))
            })?;
            print!("{}", d.to_text());
            Ok(if d.passed { CLEAN } else { FAILED })
        }
        Command::Corpus {
            action: CorpusAction::Export { dir },
        } => {
            let n = Corpus::export(&dir)?;
            println!("wrote {n} files to {}", dir.display());
            Ok(CLEAN)
        }
    }
}

fn tolerance(s: Option<&str>) -> Result<Q, Failure> {
    match s {
        Some(s) => Ok(parse_tolerance(s)?),
        None => Ok(default_tolerance()),
    }
}

fn load_corpus(dir: Option<PathBuf>) -> Result<Corpus, Failure> {
    match dir {
        Some(d) => Ok(Corpus::load(&d)?),
        None => Ok(Corpus::standard()),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn print_frame_stats(f: &Frame) {
    println!("elements: {}", f.len());
    println!("Boolean: {}", yes_no(f.is_boolean()));
    println!("regular: {}", yes_no(f.is_regular()));
    println!("points: {}", f.points().len());
}

fn frame_check(path: &Path) -> Result<u8, Failure> {
    let loaded = load_frame(path)?;
    println!("{}: valid frame", path.display());
    print_frame_stats(&loaded.frame);
    if let Some(t) = &loaded.topology {
        println!("space points: {}", t.points().len());
        println!("T0: {}", yes_no(t.is_t0()));
        println!("T1: {}", yes_no(t.is_t1()));
    }
    Ok(CLEAN)
}

fn describe_sublocale(x: &Sublocale) {
    let f = x.frame();
    println!("sublocale: {}", x.describe());
    println!("fixpoints: {}", x.fixpoints().len());
    if let Some(u) = x.as_open() {
        println!("open: yes, [{}]", f.name(u));
    } else {
        println!("open: no");
    }
    if let Some(v) = x.as_closed() {
        println!("closed: yes, complement of [{}]", f.name(v));
    } else {
        println!("closed: no");
    }
    println!("dense: {}", yes_no(x.is_dense()));
    println!("interior: {}", f.name(x.interior()));
    println!("exterior: {}", f.name(x.exterior()));
    println!("closure: {}", x.closure().describe());
}

fn nucleus_check(path: &Path) -> Result<u8, Failure> {
    let loaded = load_nucleus(path)?;
    println!("{}: valid nucleus", path.display());
    let x = Sublocale::from_map(&loaded.frame.frame, loaded.nucleus.map().to_vec())
        .map_err(|e| Failure(FAILED, e.to_string()))?;
    describe_sublocale(&x);
    Ok(CLEAN)
}

fn morphism_check(path: &Path) -> Result<u8, Failure> {
    let f = load_morphism(path)?;
    println!("{}: valid frame map", path.display());
    println!("source elements: {}", f.source().len());
    println!("target elements: {}", f.target().len());
    println!("embedding: {}", yes_no(f.is_embedding()));
    let src = f.source();
    let adjoint: Vec<String> = f
        .target()
        .elements()
        .map(|u| format!("{} -> {}", f.target().name(u), src.name(f.right_adjoint(u))))
        .collect();
    println!("right adjoint: {}", adjoint.join(", "));
    println!("image of the whole:");
    describe_sublocale(&f.image_sublocale());
    Ok(CLEAN)
}

fn valuation_check(path: &Path) -> Result<u8, Failure> {
    match load_valuation(path)? {
        LoadedValuation::Finite(v) => {
            println!("{}: valid valuation", path.display());
            println!("total: {}", v.total());
            let regular = v.frame().is_regular();
            println!("regular frame: {}", yes_no(regular));
            if regular {
                let alg = reduced_algebra(&v, DEFAULT_ENUMERATION_BOUND.max(v.frame().len()))
                    .map_err(|e| Failure(FAILED, e.to_string()))?;
                println!("reduced sublocales: {}", alg.elements.len());
                println!("reduced algebra Boolean: {}", yes_no(alg.is_boolean()));
            } else {
                println!("no measure claims on a non-regular frame");
            }
        }
        LoadedValuation::Interval(d) => {
            println!("{}: valid descriptor {d}", path.display());
            println!("total: {}", d.total());
            let atoms: Vec<String> = d.atoms().iter().map(|p| p.to_string()).collect();
            println!("atoms: {}", if atoms.is_empty() { "none".into() } else { atoms.join(", ") });
            println!("support: {}", d.support());
        }
    }
    Ok(CLEAN)
}

fn measure(descriptor: &str, expression: &str, tol: Option<&str>) -> Result<u8, Failure> {
    let tol = tolerance(tol)?;
    let d = if Path::new(descriptor).is_file() {
        match load_valuation(Path::new(descriptor))? {
            LoadedValuation::Interval(d) => d,
            LoadedValuation::Finite(_) => {
                return Err(Failure(BAD_INPUT, format!("{descriptor}: expected a valuation on [0,1]")))
            }
        }
    } else {
        Descriptor::parse(descriptor).map_err(|e| Failure(BAD_INPUT, e.to_string()))?
    };
    let x = parse_expression(expression).map_err(|e| Failure(BAD_INPUT, e.to_string()))?;
    match measure_bounds(&d, &x, &tol) {
        Ok(b) => {
            println!("measure of {x} under {d}: {b}");
            println!("upper: {}", b.upper_certificate);
            println!("lower: {}", b.lower_certificate);
            println!("tolerance: {tol}");
            Ok(CLEAN)
        }
        Err(e @ MeasureError::InvalidDescriptor(_)) => Err(Failure(BAD_INPUT, e.to_string())),
        Err(e) => Err(Failure(FAILED, e.to_string())),
    }
}
