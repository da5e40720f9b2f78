use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use kodaira::format::{parse_lattice_config, parse_model, ModelFile, ParseError};
use kodaira::lattice::{artin_compatible, prime_support, shioda_tate_discr, PrimeSupport};
use kodaira::scan::{scan_family, ScanFamily, ScanMode};
use kodaira::{classify_all, verify, Field};

const EXIT_OK: u8 = 0;
const EXIT_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;

#[derive(Parser)]
#[command(name = "kodaira", version, about = "Kodaira fibre classification and maximal-fibre checks")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every singular fibre of a model file.
    Classify {
        model: PathBuf,
        /// Search roots of the discriminant in GF(p^j) for j <= ext.
        #[arg(long, default_value_t = 6)]
        ext: u32,
    },
    /// Scan a characteristic-2 family for large fibres.
    Scan {
        /// case_i, case_ii or case_iii.
        #[arg(long)]
        family: String,
        /// Field as p^k or p.
        #[arg(long)]
        field: String,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 1_000_000)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Run a named verification and write its transcript.
    Verify {
        name: String,
        /// Model file for `corollary`.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Directory for transcripts.
        #[arg(long, default_value = "transcripts")]
        out_dir: PathBuf,
    },
    /// Discriminant and Artin compatibility of a fibre configuration.
    Lattice {
        #[arg(long)]
        config: PathBuf,
    },
}

struct InputError(String);

impl From<std::io::Error> for InputError {
    fn from(e: std::io::Error) -> Self {
        InputError(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn located(path: &Path, e: ParseError) -> InputError {
    InputError(format!("{}:{}:{}: {}", path.display(), e.line, e.column, e.message))
}

fn load_model(path: &Path) -> Result<ModelFile, InputError> {
    parse_model(&read(path)?).map_err(|e| located(path, e))
}

fn parse_field(s: &str) -> Result<Field, InputError> {
    let (p, k) = match s.split_once('^') {
        Some((p, k)) => (p, k),
        None => (s, "1"),
    };
    let bad = || InputError(format!("field `{s}`: expected p^k"));
    let p: u32 = p.trim().parse().map_err(|_| bad())?;
    let k: u32 = k.trim().parse().map_err(|_| bad())?;
    Field::new(p, k).map_err(|e| InputError(format!("field `{s}`: {e}")))
}

fn classify(model: &Path, ext: u32, as_json: bool) -> Result<u8, InputError> {
    let mf = load_model(model)?;
    let Some(m) = mf.finite() else {
        return Err(InputError(format!(
            "{}: characteristic-0 models are only reduced (see `verify corollary --model`)",
            model.display()
        )));
    };
    let report = classify_all(m, ext).map_err(|e| InputError(format!("{}: {e}", model.display())))?;
    let k3 = m.k3_from_report(&report).map(|v| v.k3).unwrap_or(false);
    if as_json {
        let out = json!({
            "model": m.format(&mf.var),
            "report": report.record(&mf.var),
            "k3": k3,
        });
        println!("{out}");
    } else {
        print!("{}", report.text(&mf.var));
        println!("elliptic K3: {}", if k3 { "yes" } else { "no" });
    }
    Ok(EXIT_OK)
}

fn scan(
    family: &str,
    field: &str,
    mode: ScanMode,
    jobs: Option<usize>,
    as_json: bool,
) -> Result<u8, InputError> {
    let family = ScanFamily::from_name(family).map_err(|e| InputError(e.to_string()))?;
    let field = parse_field(field)?;
    let report = scan_family(family, &field, mode, jobs).map_err(|e| InputError(e.to_string()))?;
    if as_json {
        println!("{}", serde_json::to_string(&report.record()).expect("serializable"));
    } else {
        print!("{}", report.text());
    }
    Ok(EXIT_OK)
}

fn run_verify(name: &str, model: Option<&Path>, out_dir: &Path, as_json: bool) -> Result<u8, InputError> {
    let mf = model.map(load_model).transpose()?;
    let Some(verdict) = verify::run(name, mf.as_ref()) else {
        return Err(InputError(format!(
            "unknown verification `{name}` (expected one of {})",
            verify::NAMES.join(", ")
        )));
    };
    fs::create_dir_all(out_dir)?;
    let path = out_dir.join(verdict.file_name());
    fs::write(&path, verdict.text())?;
    if as_json {
        let out = json!({
            "name": verdict.name,
            "status": verdict.status,
            "transcript_path": path.display().to_string(),
        });
        println!("{out}");
    } else {
        println!("{}: {}", verdict.name, verdict.status);
        println!("transcript: {}", path.display());
    }
    Ok(match verdict.status {
        verify::Status::Pass | verify::Status::Skipped => EXIT_OK,
        verify::Status::Fail | verify::Status::Inconclusive => EXIT_FAILED,
    })
}

fn lattice(config: &Path, as_json: bool) -> Result<u8, InputError> {
    let cfg = parse_lattice_config(&read(config)?).map_err(|e| located(config, e))?;
    let d = shioda_tate_discr(&cfg).map_err(|e| InputError(format!("{}: {e}", config.display())))?;
    let support = prime_support(&d);
    let (ambiguity, artin, prime, sigma0) = match support {
        PrimeSupport::Empty => ("p^{2k}".to_string(), "compatible for every p".to_string(), None, None),
        PrimeSupport::Single(p) => {
            let cert = artin_compatible(&d, p);
            let text = match (cert.compatible, cert.sigma0) {
                (true, Some(s)) => format!("compatible only for p={p}, σ₀={s}"),
                _ => format!(
                    "incompatible for every p ({})",
                    cert.obstruction.unwrap_or_default()
                ),
            };
            (format!("{p}^{{2k}}"), text, cert.compatible.then_some(p), cert.sigma0)
        }
        PrimeSupport::Several(q, r) => (
            "p^{2k}".to_string(),
            format!("incompatible for every p ({q} and {r} both divide the discriminant)"),
            None,
            None,
        ),
    };
    if as_json {
        let out = json!({
            "discriminant": d.value.to_string(),
            "up_to_even_p_power": d.up_to_even_p_power,
            "compatible_prime": prime,
            "sigma0": sigma0,
        });
        println!("{out}");
    } else {
        println!("|discr| = {} (up to {ambiguity}); artin: {artin}", d.value);
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify { model, ext } => classify(model, *ext, cli.json),
        Command::Scan {
            family,
            field,
            exhaustive,
            count,
            seed,
            jobs,
        } => {
            let mode = if *exhaustive {
                ScanMode::Exhaustive
            } else {
                ScanMode::Sampled {
                    count: *count,
                    seed: *seed,
                }
            };
            scan(family, field, mode, *jobs, cli.json)
        }
        Command::Verify { name, model, out_dir } => run_verify(name, model.as_deref(), out_dir, cli.json),
        Command::Lattice { config } => lattice(config, cli.json),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
