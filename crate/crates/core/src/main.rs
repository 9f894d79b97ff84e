use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use korbit::commands::{self, CommandOutput};
use korbit::config::{parse_real_list, OutputFormat, RunConfig};
use korbit::report::emit;
use korbit::sampling::threads_from_env;
use korbit::Result;

/// Coadjoint orbits of the MD5-algebras G5.3.1 to G5.3.8.
///
/// Exit status: 0 pass, 1 verification failure, 2 usage or domain error.
#[derive(Parser)]
#[command(name = "korbit", version)]
struct Cli {
    /// JSON file with default values for any flag; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the family catalog as JSON.
    ListFamilies(Flags),
    /// Describe the orbit through a covector.
    Classify(Flags),
    /// Check that every orbit has dimension 0 or 2 on random covectors.
    ScanMd(Flags),
    /// Check the orbit equations of each case against sampled orbit points.
    VerifyProps {
        #[command(flatten)]
        flags: Flags,
        /// Also check the negative and family-8 branch bases.
        #[arg(long)]
        sign_variants: bool,
    },
    /// Write a point cloud on an orbit.
    SampleOrbit(Flags),
    /// Check the leaf partition of the generic stratum.
    CheckFoliation(Flags),
}

#[derive(Args)]
struct Flags {
    /// Family tag such as 5.3.4, or `all`.
    #[arg(long)]
    family: Option<String>,
    /// Comma-separated parameters, e.g. `2,3` or `1,pi/3`.
    #[arg(long, allow_hyphen_values = true)]
    params: Option<String>,
    /// Covector `α,β,γ,δ,σ`.
    #[arg(long = "F", allow_hyphen_values = true)]
    covector: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    pairs: Option<usize>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    case: Option<u8>,
    #[arg(long, value_parser = ["json", "csv"])]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    rank_tol: Option<f64>,
    #[arg(long)]
    member_tol: Option<f64>,
    #[arg(long)]
    tangency_tol: Option<f64>,
}

impl Flags {
    fn into_config(self) -> Result<RunConfig> {
        Ok(RunConfig {
            family: self.family,
            params: self.params.as_deref().map(parse_real_list).transpose()?,
            covector: self.covector.as_deref().map(parse_real_list).transpose()?,
            seed: self.seed,
            n: self.n,
            pairs: self.pairs,
            radius: self.radius,
            case: self.case,
            format: self.format.map(|f| if f == "csv" { OutputFormat::Csv } else { OutputFormat::Json }),
            out: self.out,
            out_dir: self.out_dir,
            rank_tol: self.rank_tol,
            member_tol: self.member_tol,
            tangency_tol: self.tangency_tol,
        })
    }
}

fn run(cli: Cli) -> Result<CommandOutput> {
    let file = match &cli.config {
        Some(path) => RunConfig::from_json_file(path)?,
        None => RunConfig::default(),
    };
    let merge = |flags: Flags| -> Result<RunConfig> { Ok(file.clone().overlay(flags.into_config()?)) };
    match cli.command {
        Command::ListFamilies(f) => commands::list_families(&merge(f)?),
        Command::Classify(f) => commands::classify(&merge(f)?),
        Command::ScanMd(f) => commands::scan_md(&merge(f)?),
        Command::VerifyProps { flags, sign_variants } => commands::verify_props(&merge(flags)?, sign_variants),
        Command::SampleOrbit(f) => commands::sample_orbit_cmd(&merge(f)?),
        Command::CheckFoliation(f) => commands::check_foliation(&merge(f)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = threads_from_env() {
        // Fails only if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = match run(cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    for note in &out.notes {
        eprintln!("{note}");
    }
    for doc in &out.documents {
        if let Err(e) = emit(doc.path.as_deref(), &doc.contents) {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if out.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
