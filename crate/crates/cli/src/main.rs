//! `graphene-landau`: writes band, spectrum, Hall and perturbation tables
//! as CSV or JSON for external plotting.

mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use graphene_landau::units::{MagneticScale, ParamsFile};
use serde::Serialize;
use serde_json::json;

use crate::commands::CliError;

#[derive(Debug, Parser)]
#[command(name = "graphene-landau", version, about = "Landau levels and Hall conductivity of the deformed graphene model")]
struct Cli {
    /// Parameter file (flat TOML: B_tesla, a_angstrom, t_eV, tprime_eV, E_voltperm, vF_over_c, mass_eV).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Worker threads for grid sweeps.
    #[arg(long, global = true, env = "LANDAU_THREADS")]
    threads: Option<usize>,

    /// Signed mass ratio z = m v_F l_B / hbar; overrides the value derived from --config.
    #[arg(long, global = true, allow_hyphen_values = true)]
    z: Option<f64>,

    /// Energy unit eps_B in eV; overrides the value derived from --config.
    #[arg(long, global = true)]
    eps_b_ev: Option<f64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "command")]
enum Command {
    /// Tight-binding bands along Gamma-K-M-Gamma.
    Bands(BandsArgs),
    /// Free dispersion of both branches, no magnetic field.
    FreeDispersion(FreeArgs),
    /// Landau levels of both valleys.
    Spectrum(SpectrumArgs),
    /// Hall conductivity against chemical potential.
    Hall(HallArgs),
    /// Matrix elements of the nearest-neighbor perturbation between Landau states.
    PerturbCheck(PerturbArgs),
    /// Landau levels shifted by an in-plane electric field.
    Crossed(CrossedArgs),
    /// Run the acceptance suite.
    Validate,
}

#[derive(Debug, Args, Serialize)]
struct BandsArgs {
    /// Points per path segment.
    #[arg(long, default_value_t = 100)]
    per_segment: usize,
}

#[derive(Debug, Args, Serialize)]
struct FreeArgs {
    /// Largest |k| in units of 1/l_B.
    #[arg(long, default_value_t = 3.0)]
    k_max: f64,
    #[arg(long, default_value_t = 301)]
    points: usize,
}

#[derive(Debug, Args, Serialize)]
struct SpectrumArgs {
    /// Highest oscillator index n.
    #[arg(long, default_value_t = 20)]
    n_max: usize,
}

#[derive(Debug, Args, Serialize)]
struct HallArgs {
    /// Lower end of the chemical potential scan, units of eps_B.
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    mu_min: f64,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    mu_max: f64,
    #[arg(long, default_value_t = 2001)]
    points: usize,
    /// Inverse temperature in units of 1/eps_B; zero temperature when absent.
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
struct PerturbArgs {
    /// Highest Landau index in the table.
    #[arg(long, default_value_t = 10)]
    n_max: usize,
    /// Factor order such as q.B.I.S, or `all`.
    #[arg(long, default_value = "q.B.I.S")]
    order: String,
    /// Only the diagonal elements.
    #[arg(long)]
    diagonal: bool,
}

#[derive(Debug, Args, Serialize)]
struct CrossedArgs {
    /// E/(v_F B); taken from E_voltperm in --config when absent.
    #[arg(long, allow_hyphen_values = true)]
    e_over_vfb: Option<f64>,
    /// Transverse momentum, units of 1/l_B.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    k: f64,
    #[arg(long, default_value_t = 10)]
    n_max: usize,
}

/// Physical inputs shared by the commands.
pub struct Context {
    pub params: Option<ParamsFile>,
    pub z: Option<f64>,
    pub eps_b_ev: Option<f64>,
}

impl Context {
    fn config_scale(&self) -> Result<Option<MagneticScale>, CliError> {
        match &self.params {
            Some(p) => Ok(Some(p.model()?.scale()?)),
            None => Ok(None),
        }
    }

    /// `--z`, else the value derived from the parameter file.
    pub fn z(&self) -> Result<f64, CliError> {
        if let Some(z) = self.z {
            if !z.is_finite() || z == 0.0 {
                return Err(CliError::Usage(format!("--z must be finite and nonzero, got {z}")));
            }
            return Ok(z);
        }
        self.config_scale()?
            .map(|s| s.z)
            .ok_or_else(|| CliError::Usage("this command needs --config or --z".into()))
    }

    /// `--eps-b-ev`, else the value derived from the parameter file; energy
    /// columns in eV are omitted when neither is available.
    pub fn eps_b_ev(&self) -> Result<Option<f64>, CliError> {
        if let Some(e) = self.eps_b_ev {
            if !(e > 0.0 && e.is_finite()) {
                return Err(CliError::Usage(format!("--eps-b-ev must be > 0, got {e}")));
            }
            return Ok(Some(e));
        }
        Ok(self.config_scale()?.map(|s| s.eps_b_ev))
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let params = cli.config.as_deref().map(ParamsFile::read).transpose()?;
    let ctx = Context { params, z: cli.z, eps_b_ev: cli.eps_b_ev };

    let (table, failed) = match &cli.command {
        Command::Bands(a) => (commands::bands(&ctx, a.per_segment)?, false),
        Command::FreeDispersion(a) => (commands::free_dispersion(&ctx, a.k_max, a.points)?, false),
        Command::Spectrum(a) => (commands::spectrum(&ctx, a.n_max)?, false),
        Command::Hall(a) => (commands::hall(&ctx, a.mu_min, a.mu_max, a.points, a.beta)?, false),
        Command::PerturbCheck(a) => (commands::perturb_check(&ctx, a.n_max, &a.order, a.diagonal)?, false),
        Command::Crossed(a) => (commands::crossed(&ctx, a.e_over_vfb, a.k, a.n_max)?, false),
        Command::Validate => commands::validate(),
    };

    let mut sink: Box<dyn Write> = match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cli.format {
        Format::Csv => table.write_csv(&mut sink)?,
        Format::Json => {
            let provenance = json!({
                "tool": "graphene-landau",
                "version": env!("CARGO_PKG_VERSION"),
                "arguments": &cli.command,
                "params": ctx.params.as_ref().map(|p| p.to_string()),
                "z_override": cli.z,
                "eps_b_ev_override": cli.eps_b_ev,
            });
            serde_json::to_writer_pretty(&mut sink, &table.to_json(provenance)).map_err(io::Error::from)?;
            writeln!(sink)?;
        }
    }
    sink.flush()?;
    if failed {
        return Err(CliError::Validation("acceptance suite reported failures".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            return report(&CliError::Usage(e.kind().to_string()));
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(&e),
    }
}

fn report(e: &CliError) -> ExitCode {
    let code = e.exit_code();
    let record = json!({ "error": { "kind": e.kind(), "message": e.to_string(), "exit_code": code } });
    eprintln!("{record}");
    ExitCode::from(code)
}
