//! Command-line front end. Exit codes: 0 success, 1 mathematical failure,
//! 2 input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use clap::{Parser, Subcommand};

use crate::diagonalize::{diagonalize_regular, ge_diagonalize, DiagError, SearchBudget};
use crate::format::{self, Certificate, FormatError};
use crate::oracle::{self, IsoBudget, OracleError, Verdict};
use crate::ring::Ring;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "gecert", version, about = "Certified elementary diagonalization over finite exchange rings")]
pub struct Cli {
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the exchange property, separativity, generator cancellation
    /// and stable rank one.
    Classify {
        /// Preset name or ring file.
        ring: String,
        /// Largest projective matrix size enumerated.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
        /// Write the verdict report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Reduce a matrix to diagonal form and write a certificate.
    Diagonalize {
        matrix: PathBuf,
        /// Preset name or ring file; defaults to the ring in the matrix header.
        #[arg(long)]
        ring: Option<String>,
        /// Accept singular regular matrices, using row and column operations.
        #[arg(long)]
        regular: bool,
        /// Certificate path; defaults to the matrix path with `.cert` appended.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Left factors tried by the regular search.
        #[arg(long, default_value_t = SearchBudget::default().max_left)]
        max_left: usize,
    },
    /// Replay a certificate from its serialized data.
    Verify {
        certificate: PathBuf,
        /// Preset name or ring file; defaults to the ring in the header.
        #[arg(long)]
        ring: Option<String>,
    },
    /// Run every job of a manifest and compare with the expected outcomes.
    Corpus {
        manifest: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        threads: u64,
        /// Write each job's certificate here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// List the isomorphism classes of small projective modules.
    EnumerateProjectives {
        ring: String,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        bound: u64,
    },
}

/// An error mapped to an exit code.
struct Failure {
    code: i32,
    message: String,
}

fn input_error(message: impl std::fmt::Display) -> Failure {
    Failure { code: EXIT_INPUT, message: message.to_string() }
}

fn math_failure(message: impl std::fmt::Display) -> Failure {
    Failure { code: EXIT_FAILURE, message: message.to_string() }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

/// A preset name, or a path to a ring file.
pub fn resolve_ring(reference: &str) -> Result<Ring, FormatError> {
    let path = Path::new(reference);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| FormatError::Syntax { line: 0, message: format!("{}: {e}", path.display()) })?;
        let spec = format::parse_ring_spec(&text)?;
        return Ok(Ring::load(spec)?);
    }
    Ok(Ring::preset(reference)?)
}

fn ring_for(reference: Option<&str>, text: &str) -> Result<Ring, Failure> {
    let name = match reference {
        Some(r) => r.to_string(),
        None => format::header_ring_name(text).map_err(input_error)?,
    };
    resolve_ring(&name).map_err(input_error)
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::Classify { ring, bound, report } => classify(ring, *bound as usize, report.as_deref(), cli.seed, out),
        Command::Diagonalize { matrix, ring, regular, out: target, max_left } => {
            let text = read(matrix)?;
            let ring = ring_for(ring.as_deref(), &text)?;
            let a = format::parse_matrix(&text, &ring).map_err(input_error)?;
            let budget = SearchBudget { max_left: *max_left, seed: cli.seed, ..SearchBudget::default() };
            let cert = diagonalize(&ring, &a, *regular, &budget).map_err(math_failure)?;
            let target = target.clone().unwrap_or_else(|| {
                let mut p = matrix.clone().into_os_string();
                p.push(".cert");
                PathBuf::from(p)
            });
            write(&target, &format::write_certificate(&ring, &cert))?;
            let (left, right) = cert.transcripts();
            let _ = writeln!(out, "left {} ops, right {} ops", left.len(), right.len());
            let _ = writeln!(out, "diagonal {}", cert.diagonal().render(&ring).replace('\n', " "));
            let _ = writeln!(out, "certificate {}", target.display());
            Ok(EXIT_OK)
        }
        Command::Verify { certificate, ring } => {
            let text = read(certificate)?;
            let ring = ring_for(ring.as_deref(), &text)?;
            match format::verify_certificate(&text, &ring).map_err(input_error)? {
                Ok(parsed) => {
                    let (left, right) = parsed.certificate.transcripts();
                    let _ = writeln!(out, "ok: {} + {} ops replay to the diagonal", left.len(), right.len());
                    Ok(EXIT_OK)
                }
                Err(f) => {
                    let _ = writeln!(out, "fail: {f}");
                    Ok(EXIT_FAILURE)
                }
            }
        }
        Command::Corpus { manifest, threads, out_dir } => {
            corpus(manifest, *threads as usize, out_dir.as_deref(), cli.seed, out)
        }
        Command::EnumerateProjectives { ring, bound } => {
            let ring = resolve_ring(ring).map_err(input_error)?;
            let budget = IsoBudget { seed: cli.seed, ..IsoBudget::default() };
            let table = oracle::enumerate_projective_classes(&ring, *bound as usize, &budget).map_err(oracle_failure)?;
            let _ = write!(out, "{table}");
            Ok(EXIT_OK)
        }
    }
}

fn oracle_failure(e: OracleError) -> Failure {
    match e {
        OracleError::CapExceeded { .. } => input_error(format!("{e}; lower --bound")),
        other => math_failure(other),
    }
}

/// Diagonalize and check the resulting certificate.
pub fn diagonalize(ring: &Ring, a: &crate::matrix::Mat, regular: bool, budget: &SearchBudget) -> Result<Certificate, DiagError> {
    if regular {
        diagonalize_regular(ring, a, budget)?
            .map(Certificate::Regular)
            .ok_or_else(|| DiagError::Internal("search budget exhausted".into()))
    } else {
        ge_diagonalize(ring, a).map(Certificate::Ge)
    }
}

fn classify(reference: &str, bound: usize, report: Option<&Path>, seed: u64, out: &mut dyn Write) -> Result<i32, Failure> {
    let ring = resolve_ring(reference).map_err(input_error)?;
    let budget = IsoBudget { seed, ..IsoBudget::default() };
    let table = oracle::enumerate_projective_classes(&ring, bound, &budget).map_err(oracle_failure)?;
    let verdicts = vec![
        Verdict::exchange(&ring),
        oracle::check_separative(&ring, &table, &budget),
        oracle::check_generator_cancellation(&ring, &table, &budget),
        oracle::check_stable_rank_one(&ring).map_err(oracle_failure)?,
    ];
    for v in &verdicts {
        let bound = v.bound.map(|b| format!(" (bound {b})")).unwrap_or_default();
        let exhaustive = if v.exhaustive { "" } else { ", not exhaustive" };
        let _ = writeln!(out, "{}: {}{bound}{exhaustive}", v.property.name(), if v.holds { "yes" } else { "no" });
        if let (false, Some(w)) = (v.holds, &v.witness) {
            let _ = writeln!(out, "  counterexample: {w}");
        }
    }
    if let Some(path) = report {
        write(path, &format::write_verdicts(&verdicts))?;
    }
    Ok(if verdicts.iter().all(|v| v.holds) { EXIT_OK } else { EXIT_FAILURE })
}

/// One manifest line: `ring matrix-file expected [regular]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Job {
    pub ring: String,
    pub matrix: PathBuf,
    pub expected: String,
    pub regular: bool,
}

pub const OUTCOMES: [&str; 5] = ["ok", "not-invertible", "not-regular", "no-unit", "budget-exhausted"];

/// Parse a manifest; matrix paths are taken relative to `base`.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<Job>, FormatError> {
    let mut jobs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        let bad = |message: String| FormatError::Syntax { line: i + 1, message };
        let regular = match words.get(3) {
            None => false,
            Some(&"regular") => true,
            Some(w) => return Err(bad(format!("unknown mode `{w}`"))),
        };
        if words.len() < 3 || words.len() > 4 {
            return Err(bad("expected `ring matrix-file expected [regular]`".into()));
        }
        if !OUTCOMES.contains(&words[2]) {
            return Err(bad(format!("unknown outcome `{}`", words[2])));
        }
        jobs.push(Job { ring: words[0].into(), matrix: base.join(words[1]), expected: words[2].into(), regular });
    }
    Ok(jobs)
}

/// Outcome of one job and, on success, its certificate text.
type JobResult = Result<(String, Option<String>), Failure>;

fn run_job(job: &Job, seed: u64) -> JobResult {
    let text = read(&job.matrix)?;
    let ring = resolve_ring(&job.ring).map_err(input_error)?;
    let a = format::parse_matrix(&text, &ring).map_err(input_error)?;
    let budget = SearchBudget { seed, ..SearchBudget::default() };
    let cert = match diagonalize(&ring, &a, job.regular, &budget) {
        Ok(c) => c,
        Err(DiagError::NotInvertible) => return Ok(("not-invertible".into(), None)),
        Err(DiagError::NotRegularMatrix) => return Ok(("not-regular".into(), None)),
        Err(DiagError::NoUnit(_)) => return Ok(("no-unit".into(), None)),
        Err(DiagError::Internal(m)) if m.contains("budget") => return Ok(("budget-exhausted".into(), None)),
        Err(e) => return Ok((format!("error: {e}"), None)),
    };
    let serialized = format::write_certificate(&ring, &cert);
    match format::verify_certificate(&serialized, &ring) {
        Ok(Ok(_)) => Ok(("ok".into(), Some(serialized))),
        Ok(Err(f)) => Ok((format!("certificate rejected: {f}"), None)),
        Err(e) => Ok((format!("certificate unreadable: {e}"), None)),
    }
}

fn corpus(manifest: &Path, threads: usize, out_dir: Option<&Path>, seed: u64, out: &mut dyn Write) -> Result<i32, Failure> {
    let text = read(manifest)?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    let jobs = parse_manifest(&text, base).map_err(|e| input_error(format!("{}: {e}", manifest.display())))?;
    let next = AtomicUsize::new(0);
    let mut results: Vec<Option<JobResult>> = (0..jobs.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let workers: Vec<_> = (0..threads.min(jobs.len()).max(1))
            .map(|_| {
                scope.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        let Some(job) = jobs.get(i) else { break done };
                        done.push((i, run_job(job, seed)));
                    }
                })
            })
            .collect();
        for w in workers {
            for (i, r) in w.join().expect("corpus worker panicked") {
                results[i] = Some(r);
            }
        }
    });
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir).map_err(|e| input_error(format!("{}: {e}", dir.display())))?;
    }
    let mut passed = 0;
    for (i, (job, result)) in jobs.iter().zip(results).enumerate() {
        let (got, cert) = result.expect("every job ran")?;
        let pass = got == job.expected;
        passed += usize::from(pass);
        let _ = writeln!(
            out,
            "job {}: {} {} expected {} got {} {}",
            i + 1,
            job.ring,
            job.matrix.display(),
            job.expected,
            got,
            if pass { "PASS" } else { "FAIL" }
        );
        if let (Some(dir), Some(cert)) = (out_dir, cert) {
            write(&dir.join(format!("job{}.cert", i + 1)), &cert)?;
        }
    }
    let _ = writeln!(out, "corpus: {passed}/{} passed", jobs.len());
    Ok(if passed == jobs.len() { EXIT_OK } else { EXIT_FAILURE })
}
