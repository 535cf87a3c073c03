use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use driveshaft::config::ScenarioConfig;
use driveshaft::design::analyze_shaft;
use driveshaft::ga::bits_to_hex;
use driveshaft::validation::{run_fixture_set, ValidationReport};

mod report;

use report::{analysis_records, describe_sequence, sig9};

#[derive(Parser)]
#[command(name = "driveshaft", version, about = "Composite drive-shaft analysis and driveline optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse the shaft described in a scenario file.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        /// Directory for analysis.csv; records go to stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the genetic algorithm on a scenario's encoding.
    Optimize {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `[ga] seed`.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Worker threads for fitness evaluation.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Compare built-in reference cases against published values.
    Validate {
        /// table2, table3, table4, rig or all.
        #[arg(long, default_value = "all")]
        fixtures: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure with its process exit status.
enum Failure {
    Validation,
    Config(String),
    /// Stdout was closed early, e.g. by `| head`.
    ClosedPipe,
}

impl From<driveshaft::Error> for Failure {
    fn from(e: driveshaft::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure::ClosedPipe;
        }
        Failure::Config(format!("i/o: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Config(format!("csv: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { config, out } => analyze(&config, out.as_deref()),
        Command::Optimize { config, seed, out, threads } => optimize(&config, seed, &out, threads),
        Command::Validate { fixtures, out } => validate(&fixtures, out.as_deref()),
    };
    match result {
        Ok(()) | Err(Failure::ClosedPipe) => ExitCode::SUCCESS,
        Err(Failure::Validation) => ExitCode::from(1),
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load(path: &Path) -> Result<ScenarioConfig, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
    Ok(ScenarioConfig::parse(&text)?)
}

fn ensure_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Config(format!("cannot create {}: {e}", dir.display())))
}

fn analyze(config: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let scenario = load(config)?;
    let shaft = scenario.shaft_config()?;
    let a = analyze_shaft(&shaft, scenario.driveline.as_ref(), &scenario.analysis)?;
    let records = analysis_records(&a, scenario.driveline.as_ref(), &scenario.factors);

    let stdout = io::stdout();
    let mut so = stdout.lock();
    let (bracket, _) = describe_sequence(&a);
    writeln!(so, "laminate {bracket}")?;
    records.print_table(&mut so)?;
    match out {
        Some(dir) => {
            ensure_dir(dir)?;
            records.write_csv(fs::File::create(dir.join("analysis.csv"))?)?;
        }
        None => {
            writeln!(so)?;
            records.write_csv(&mut so)?;
        }
    }
    Ok(())
}

fn optimize(config: &Path, seed: Option<u64>, out: &Path, threads: Option<usize>) -> Result<(), Failure> {
    let scenario = load(config)?;
    let problem = scenario.optimization_problem()?;
    let mut params = scenario.ga.clone();
    if let Some(s) = seed {
        params.seed = s;
    }
    if threads == Some(0) {
        return Err(Failure::Config("--threads must be at least 1".into()));
    }
    params.threads = threads;
    params.validate(problem.encoding.len())?;
    ensure_dir(out)?;

    let started = Instant::now();
    let outcome = problem.run(&params)?;
    let elapsed = started.elapsed();

    let mut w = csv::Writer::from_path(out.join("history.csv"))?;
    w.write_record(["generation", "best_fitness", "best_mass_kg", "feasible_flag", "best_chromosome_hex"])?;
    for rec in &outcome.history {
        let e = &rec.best.eval;
        w.write_record([
            rec.generation.to_string(),
            sig9(e.fitness),
            sig9(e.mass),
            u8::from(e.feasible).to_string(),
            bits_to_hex(&rec.best.bits),
        ])?;
    }
    w.flush()?;

    let best = problem.evaluate_design(&outcome.best.bits)?;
    let records = analysis_records(&best.analysis, Some(&problem.driveline), &problem.factors);
    records.write_csv(fs::File::create(out.join("best_analysis.csv"))?)?;
    let (bracket, syntax) = describe_sequence(&best.analysis);
    let mut summary = String::new();
    summary += &format!("laminate = {bracket}\n");
    summary += &format!("sequence = {syntax}\n");
    summary += &format!("r_m = {}\n", sig9(best.genes.r_m));
    summary += &format!("t_s = {}\n", sig9(best.analysis.geometry.t_s));
    summary += &format!("omega_nom = {}\n", sig9(best.genes.omega_rpm));
    if let Some(k) = best.genes.k_e {
        summary += &format!("k_e = {}\n", sig9(k));
    }
    summary += &format!("chromosome = {}\n", bits_to_hex(&outcome.best.bits));
    summary += &format!("fitness = {}\n", sig9(best.fitness));
    summary += &format!("feasible = {}\n", best.report.feasible);
    summary += &format!("tube_mass = {}\n", sig9(best.analysis.mass()));
    summary += &format!("tubes_mass = {}\n", sig9(best.tubes_mass(problem.driveline.n_shafts)));
    summary += &format!("support_mass = {}\n", sig9(best.support_mass));
    summary += &format!("total_mass = {}\n", sig9(best.total_mass));
    fs::write(out.join("best_design.txt"), &summary)?;

    let stdout = io::stdout();
    let mut so = stdout.lock();
    writeln!(
        so,
        "{} generations, {} distinct designs evaluated in {:.1} s",
        outcome.history.len(),
        outcome.unique_evaluations,
        elapsed.as_secs_f64()
    )?;
    write!(so, "{summary}")?;
    records.print_table(&mut so)?;
    Ok(())
}

fn validate(set: &str, out: Option<&Path>) -> Result<(), Failure> {
    let report: ValidationReport = run_fixture_set(set)?;
    let stdout = io::stdout();
    let mut so = stdout.lock();
    writeln!(so, "{:<44} {:>12} {:>12} {:>9} {:>6}  result", "fixture", "expected", "computed", "error", "tol")?;
    for f in &report.fixtures {
        writeln!(
            so,
            "{:<44} {:>12.2} {:>12.2} {:>8.2}% {:>5.1}%  {}{}",
            f.id,
            f.expected,
            f.computed,
            100.0 * f.rel_error(),
            100.0 * f.tolerance,
            if f.pass { "pass" } else { "FAIL" },
            f.note.as_deref().map(|n| format!("  ({n})")).unwrap_or_default()
        )?;
    }
    let failed = report.failures().count();
    writeln!(so, "{} of {} fixtures passed", report.fixtures.len() - failed, report.fixtures.len())?;

    if let Some(dir) = out {
        ensure_dir(dir)?;
        let mut w = csv::Writer::from_path(dir.join("validation.csv"))?;
        w.write_record(["id", "provenance", "expected", "computed", "rel_error", "tolerance", "pass", "note"])?;
        for f in &report.fixtures {
            w.write_record([
                f.id.as_str(),
                f.provenance,
                &sig9(f.expected),
                &sig9(f.computed),
                &sig9(f.rel_error()),
                &sig9(f.tolerance),
                if f.pass { "1" } else { "0" },
                f.note.as_deref().unwrap_or(""),
            ])?;
        }
        w.flush()?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Validation)
    }
}
