use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use vestige::commands::{self, Experiment, FitSource, RunOptions};
use vestige::model::Family;

#[derive(Parser)]
#[command(name = "vestige", version, about = "Abundance estimation from vestige counts")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Master seed; drawn from entropy and printed when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    chains: Option<usize>,
    #[arg(long, global = true)]
    iterations: Option<usize>,
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,
    /// Fraction of the full simulation count, in (0, 1].
    #[arg(long, global = true, default_value_t = 1.0)]
    scale: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Poisson,
    Negbin,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentArg {
    Table1,
    AlphaStudy,
    AppendixGrid,
}

#[derive(Args)]
struct DataArgs {
    /// Dataset CSV (optional with a preset that embeds its data).
    dataset: Option<PathBuf>,
    /// TOML config (not used with --preset).
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Fit the model; writes fit.json and summary.csv.
    Fit {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
    },
    /// Simulate a distance-sampling survey from a design TOML.
    SimulateSurvey { design: PathBuf },
    /// Simulate triple Poisson counts from a parameter TOML.
    SimulateTp { params: PathBuf },
    /// Run a simulation study; writes <name>.csv and <name>.json.
    Experiment {
        #[arg(value_enum)]
        which: ExperimentArg,
    },
    /// Fit Poisson and negative binomial and compare DIC.
    CompareDic {
        #[command(flatten)]
        data: DataArgs,
    },
}

fn source(d: DataArgs) -> Result<FitSource, String> {
    match (d.preset, d.dataset, d.config) {
        (Some(name), dataset, None) => Ok(FitSource::Preset { name, dataset }),
        (None, Some(dataset), Some(config)) => Ok(FitSource::Files { dataset, config }),
        (Some(_), _, Some(_)) => Err("a preset carries its own model; drop the config argument".into()),
        _ => Err("need <dataset> <config>, or --preset NAME [dataset]".into()),
    }
}

fn run(cli: Cli, opts: &RunOptions) -> vestige::Result<()> {
    let print_files = |files: &[PathBuf]| {
        for f in files {
            println!("wrote {}", f.display());
        }
    };
    match cli.command {
        Command::Fit { data, family } => {
            let src = source(data).map_err(vestige::Error::Config)?;
            let family = family.map(|f| match f {
                FamilyArg::Poisson => Family::Poisson,
                FamilyArg::Negbin => Family::NegativeBinomial,
            });
            let out = commands::fit(&src, family, opts)?;
            print!("{}", commands::format_summary(&out.fit));
            print_files(&out.files);
        }
        Command::CompareDic { data } => {
            let src = source(data).map_err(vestige::Error::Config)?;
            let (cmp, files) = commands::compare_dic(&src, opts)?;
            println!("DIC poisson {:.3}", cmp.poisson);
            println!("DIC negbin  {:.3}", cmp.negbin);
            println!("winner: {}", cmp.winner.label());
            print_files(&files);
        }
        Command::SimulateSurvey { design } => print_files(&commands::simulate_survey_cmd(&design, opts)?),
        Command::SimulateTp { params } => {
            let (truth, files) = commands::simulate_tp(&params, opts)?;
            println!("true groups {}, true total {}", truth.groups, truth.total);
            print_files(&files);
        }
        Command::Experiment { which } => {
            let which = match which {
                ExperimentArg::Table1 => Experiment::Table1,
                ExperimentArg::AlphaStudy => Experiment::AlphaStudy,
                ExperimentArg::AppendixGrid => Experiment::AppendixGrid,
            };
            let (results, files) = commands::experiment(which, cli.global.scale, opts)?;
            for r in &results {
                println!(
                    "{:<40} bias {:+.3}  coverage {:.2}",
                    r.label, r.mean_relative_bias, r.coverage_rate
                );
            }
            print_files(&files);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let seed = cli.global.seed.unwrap_or_else(|| {
        let s = rand::random();
        eprintln!("seed: {s}");
        s
    });
    let opts = RunOptions {
        seed,
        chains: cli.global.chains,
        iterations: cli.global.iterations,
        out_dir: cli.global.out_dir.clone(),
    };
    match run(cli, &opts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
