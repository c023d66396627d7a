mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use config::{CommandName, CorotateMode, Format, RunConfig};
use run::Failure;

/// Relative equilibria of point vortices on concentric regular polygons.
///
/// Parameters come from flags, from a JSON config file whose keys mirror the
/// flags, or both; flags win.
#[derive(Debug, Parser)]
#[command(name = "polyvortex", version)]
struct Args {
    /// Command to run. May instead be given as "command" in the config file.
    command: Option<CommandName>,
    /// JSON config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Vertices per polygon.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    gamma1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma2: Option<f64>,
    /// Generating vertex of the first polygon, "x,y".
    #[arg(long, allow_hyphen_values = true)]
    s1: Option<String>,
    /// Vorticity-ratio grid start:stop:count.
    #[arg(long, allow_hyphen_values = true)]
    ratios: Option<String>,
    /// Space the ratio grid geometrically instead of linearly.
    #[arg(long)]
    geometric: bool,
    /// Extra ratio; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    at: Vec<f64>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Classification tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    rel_tol: Option<f64>,
    /// System JSON file for verify and simulate.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Circulant matrix for spectrum: C or C0.
    #[arg(long)]
    kind: Option<String>,
    /// Motion for rigidity: rotating or translating.
    #[arg(long)]
    case: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<CorotateMode>,
    /// Ring alignment for nested co-rotation: aligned or staggered.
    #[arg(long)]
    alignment: Option<String>,
}

impl Args {
    fn into_config(self) -> Result<RunConfig, Failure> {
        let mut c = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Validation(format!("cannot read {}: {e}", path.display())))?;
                RunConfig::from_json(&text)?
            }
            None => RunConfig::default(),
        };
        macro_rules! overlay {
            ($($field:ident),*) => {
                $(if self.$field.is_some() { c.$field = self.$field; })*
            };
        }
        overlay!(command, n, gamma1, gamma2, s1, ratios, format, output, tol, t_end, rel_tol, input, kind, case, mode, alignment);
        if self.geometric {
            c.geometric = Some(true);
        }
        if !self.at.is_empty() {
            c.at = Some(self.at);
        }
        Ok(c)
    }
}

fn run(args: Args) -> Result<(), Failure> {
    let plan = args.into_config()?.validate()?;
    let text = run::execute(&plan)?;
    match &plan.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::Computation(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| Failure::Computation(format!("cannot write output: {e}")))
        }
    }
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("polyvortex: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
