//! Scenario-driven front end for the verification engine.

mod checks;
mod report;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use sha2::{Digest, Sha256};

use checks::{run_check, selected, Options};
use report::{Report, ScenarioReport};
use scenario::{CliError, Scenario, BUNDLED};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Command {
    Validate,
    McCheck,
    ExpMap,
    LinfVerify,
    FoliationCheck,
    Obstruction,
    Selftest,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::McCheck => "mc-check",
            Command::ExpMap => "exp-map",
            Command::LinfVerify => "linf-verify",
            Command::FoliationCheck => "foliation-check",
            Command::Obstruction => "obstruction",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "presym", version, about = "Exact checks for pre-symplectic deformation theory")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Scenario file, or the name of a bundled scenario
    scenario: Option<String>,
    /// Also write the report as JSON
    #[arg(long)]
    json: Option<PathBuf>,
    /// Override the scenario seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override per-check sample counts
    #[arg(long)]
    samples: Option<usize>,
    /// Tolerance for float fallbacks
    #[arg(long, default_value_t = 1e-9)]
    float_tol: f64,
}

fn read_scenario(arg: &str) -> Result<(String, String), CliError> {
    let path = PathBuf::from(arg);
    if path.exists() {
        let text = std::fs::read_to_string(&path).map_err(|e| CliError::Io(format!("{arg}: {e}")))?;
        return Ok((arg.to_string(), text));
    }
    BUNDLED
        .iter()
        .find(|(name, _)| *name == arg)
        .map(|(name, text)| (name.to_string(), text.to_string()))
        .ok_or_else(|| CliError::Io(format!("{arg}: no such file or bundled scenario")))
}

fn run_scenario(text: &str, command: Command, opts: &Options) -> Result<ScenarioReport, CliError> {
    let sha = format!("{:x}", Sha256::digest(text.as_bytes()));
    let loaded = Scenario::from_json(text)?.load()?;
    let seed = opts.seed.unwrap_or(loaded.scenario.seed);
    let mut checks = Vec::new();
    if command == Command::Validate {
        let mut r = report::CheckReport::new("model", "validate");
        let m = &loaded.model;
        r.detail(format!("dim {}, rank {}, kernel {}", m.dim(), m.rank(), m.k_dim()));
        r.detail(format!("Z = {}", m.z().render()));
        match m.check_invariants() {
            Ok(()) => r.detail("model invariants hold"),
            Err(e) => r.fail(e.to_string()),
        }
        r.detail(format!(
            "{} deformations, {} foliation deformations, {} checks",
            loaded.deformations.len(),
            loaded.foliation_deformations.len(),
            loaded.scenario.checks.len()
        ));
        checks.push(r);
    } else {
        for c in &loaded.scenario.checks {
            if selected(command.name(), c) {
                checks.push(run_check(&loaded, c, opts, seed));
            }
        }
    }
    Ok(ScenarioReport::new(&loaded.scenario.name, sha, seed, checks))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = Options {
        seed: cli.seed,
        samples: cli.samples,
        float_tol: cli.float_tol,
    };
    let inputs: Result<Vec<(String, String)>, CliError> = match (cli.command, &cli.scenario) {
        (Command::Selftest, None) => Ok(BUNDLED.iter().map(|(n, t)| (n.to_string(), t.to_string())).collect()),
        (_, Some(arg)) => read_scenario(arg).map(|x| vec![x]),
        (_, None) => Err(CliError::Io("a scenario is required".into())),
    };
    let result = inputs.and_then(|inputs| {
        inputs
            .iter()
            .map(|(_, text)| run_scenario(text, cli.command, &opts))
            .collect::<Result<Vec<_>, _>>()
    });
    let reports = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let report = Report::new(cli.command.name(), cli.samples, cli.float_tol, reports);
    print!("{}", report.to_text());
    if let Some(path) = &cli.json {
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        if let Err(e) = std::fs::write(path, json + "\n") {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
