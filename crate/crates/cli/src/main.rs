use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kahler_cli::report::{bounds_report, hf_report, Format, HfOptions};
use kahler_cli::scheme_file::{LoadError, SchemeFile};
use kahler_cli::verify::{render_results, run_suite, PropertyOptions, Suite};

const EXIT_VERIFY: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_CHART: u8 = 3;

/// Hilbert functions of Kähler differential modules of fat point schemes.
#[derive(Parser)]
#[command(name = "kahler", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert functions of R_W and of the modules of m-forms.
    Hf {
        /// Scheme file (JSON).
        scheme: PathBuf,
        /// Form degrees to compute; 0 is HF_W. Defaults to all.
        #[arg(long, num_args = 1..)]
        m: Vec<usize>,
        /// Differentials relative to K[x0].
        #[arg(long)]
        relative: bool,
        /// Compute degrees 0..=D only, without a stabilization certificate.
        #[arg(long, value_name = "D")]
        max_degree: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Bounds on Hilbert polynomials and regularity indices against the engine.
    Bounds {
        scheme: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Replay the worked examples and run the property suites.
    VerifyPaper {
        /// Suites to run; defaults to core, conic and properties.
        #[arg(long, value_enum)]
        suite: Vec<Suite>,
        /// Random instances per property.
        #[arg(long, default_value_t = PropertyOptions::default().cases)]
        cases: usize,
        #[arg(long, default_value_t = PropertyOptions::default().seed)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn load(path: &Path) -> Result<(SchemeFile, kahler_core::FatPointScheme), ExitCode> {
    let report = |e: LoadError| {
        eprintln!("error: {e}");
        if e.is_coordinate_assumption() {
            eprintln!(
                "every point must satisfy x0 != 0 so that jets can be taken in the chart x0 = 1; \
                 apply a linear change of coordinates to the input"
            );
            ExitCode::from(EXIT_CHART)
        } else {
            ExitCode::from(EXIT_PARSE)
        }
    };
    let file = SchemeFile::read(path).map_err(report)?;
    let w = file.scheme().map_err(report)?;
    Ok((file, w))
}

fn set_threads() -> Result<(), ExitCode> {
    let Ok(v) = std::env::var("KAHLER_THREADS") else {
        return Ok(());
    };
    match v.trim().parse::<usize>() {
        Ok(k) if k >= 1 => {
            // fails only if a pool already exists, which cannot happen here
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            Ok(())
        }
        _ => {
            eprintln!("error: KAHLER_THREADS must be an integer >= 1, got {v:?}");
            Err(ExitCode::from(EXIT_PARSE))
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    set_threads()?;
    match cli.command {
        Command::Hf {
            scheme,
            m,
            relative,
            max_degree,
            format,
        } => {
            let (file, w) = load(&scheme)?;
            let poly = |p: Result<_, LoadError>| {
                p.map_err(|e| {
                    eprintln!("error: {e}");
                    ExitCode::from(EXIT_PARSE)
                })
            };
            let opts = HfOptions {
                ms: m,
                relative,
                max_degree,
                conic: poly(file.conic_poly())?,
                hyperplane: poly(file.hyperplane_poly())?,
            };
            let report = hf_report(&w, &opts).map_err(|e| {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_PARSE)
            })?;
            print!("{}", report.render(format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds { scheme, format } => {
            let (_, w) = load(&scheme)?;
            let report = bounds_report(&w).map_err(|e| {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_VERIFY)
            })?;
            print!("{}", report.render(format));
            Ok(if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY)
            })
        }
        Command::VerifyPaper {
            suite,
            cases,
            seed,
            format,
        } => {
            let suites = if suite.is_empty() {
                vec![Suite::Core, Suite::Conic, Suite::Properties]
            } else {
                suite
            };
            let props = PropertyOptions { cases, seed };
            let results: Vec<_> = suites.into_iter().flat_map(|s| run_suite(s, props)).collect();
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&results).expect("serializable")),
                Format::Csv => {
                    println!("check,passed");
                    for r in &results {
                        println!("\"{}\",{}", r.name.replace('"', "\"\""), r.passed);
                    }
                }
                Format::Text => print!("{}", render_results(&results, true)),
            }
            Ok(if results.iter().all(|r| r.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY)
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    run(cli).unwrap_or_else(|code| code)
}
