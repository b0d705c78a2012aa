use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use filippov::scenario::{load_scenario, Mode, Scenario};
use filippov::ExitStatus;

#[derive(Parser)]
#[command(name = "filippov", version, about = "Filippov simulation and nonsmooth Lyapunov checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the decay conditions without writing a trajectory unless needed.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Kind::Pointwise)]
        kind: Kind,
    },
    /// Integrate the scenario and write the trajectory and convergence report.
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// Run the pipeline selected by the scenario's `mode`.
    Report {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    /// Decay bound at every grid sample.
    Pointwise,
    /// Decay bound along the simulated solution.
    Trajectory,
    Both,
}

#[derive(Args)]
struct Common {
    scenario: PathBuf,
    #[arg(short, long, default_value = "out")]
    output: PathBuf,
    /// Integrator step.
    #[arg(long)]
    h: Option<f64>,
    #[arg(long)]
    tf: Option<f64>,
    #[arg(long)]
    event_tol: Option<f64>,
    #[arg(long)]
    surface_tol: Option<f64>,
    /// Slack in the pointwise decay bound.
    #[arg(long)]
    derivative_tol: Option<f64>,
    /// Slack in the decay bound along the trajectory.
    #[arg(long)]
    trajectory_tol: Option<f64>,
    #[arg(long)]
    inclusion_tol: Option<f64>,
    /// Grid samples per axis of the domain box.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    sphere_samples: Option<usize>,
}

impl Common {
    fn apply(&self, s: &mut Scenario) {
        if let Some(sim) = s.simulate.as_mut() {
            if let Some(h) = self.h {
                sim.config.h = h;
            }
            if let Some(tf) = self.tf {
                sim.tf = tf;
            }
            if let Some(tol) = self.event_tol {
                sim.config.event_tol = tol;
            }
            if let Some(tol) = self.surface_tol {
                sim.config.surface_tol = tol;
            }
        }
        if let Some(tol) = self.surface_tol {
            s.tolerances.surface_tol = tol;
        }
        if let Some(tol) = self.derivative_tol {
            s.tolerances.derivative = tol;
        }
        if let Some(tol) = self.trajectory_tol {
            s.tolerances.trajectory_derivative = tol;
        }
        if let Some(tol) = self.inclusion_tol {
            s.inclusion_tol = tol;
        }
        if let Some(d) = s.domain.as_mut() {
            if let Some(n) = self.samples {
                d.samples_per_axis = n;
            }
            if let Some(n) = self.sphere_samples {
                d.sphere_samples = n;
            }
        }
    }
}

fn execute(common: &Common, mode: Option<Mode>) -> ExitStatus {
    let mut scenario = match load_scenario(&common.scenario) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitStatus::RuntimeError;
        }
    };
    common.apply(&mut scenario);
    if let Some(d) = &scenario.domain {
        if d.samples_per_axis < 8 {
            eprintln!("error: at least 8 samples per axis are required");
            return ExitStatus::RuntimeError;
        }
    }
    if let Some(sim) = &scenario.simulate {
        if let Err(e) = sim.config.validate() {
            eprintln!("error: {e}");
            return ExitStatus::RuntimeError;
        }
    }
    let mode = mode.unwrap_or(scenario.mode);
    match filippov::run(&scenario, mode, &common.output) {
        Ok(report) => {
            println!("{report}");
            report.exit
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_status()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match &cli.command {
        Command::Check { common, kind } => {
            let mode = match kind {
                Kind::Pointwise => Mode::Check2,
                Kind::Trajectory => Mode::Check1,
                Kind::Both => Mode::All,
            };
            execute(common, Some(mode))
        }
        Command::Simulate { common } => execute(common, Some(Mode::Simulate)),
        Command::Report { common } => execute(common, None),
    };
    ExitCode::from(status.code() as u8)
}
