use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use finite_w::pyramid::{build_pyramid_with, Labeling};
use finite_w::verify::{default_grid, run_suite, PlanEntry, Suite, VerificationPlan, DEFAULT_SEED};
use finite_w::{make_config, Config, Mutation, Sign, WAlgebra, WOptions};

#[derive(Parser)]
#[command(
    name = "finite-w",
    version,
    about = "Rectangular finite W-algebras of types B, C, D"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConfigArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    l: usize,
    #[arg(long, allow_hyphen_values = true)]
    epsilon: Sign,
    #[arg(long, default_value_t = Labeling::ColumnMajor)]
    labeling: Labeling,
}

impl ConfigArgs {
    fn config(&self) -> finite_w::Result<Config> {
        make_config(self.n, self.l, self.epsilon)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Build the pyramid, nilpotent and grading for one configuration.
    Construct {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        dump_pyramid: Option<PathBuf>,
    },
    /// Write every s_{i,j}(ω_r) with r ≤ max-r as JSON.
    Generators {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long)]
        max_r: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run verification suites; without --n/--l/--epsilon the default grid is used.
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long, requires_all = ["l", "epsilon"])]
        n: Option<usize>,
        #[arg(long, requires_all = ["n", "epsilon"])]
        l: Option<usize>,
        #[arg(long, allow_hyphen_values = true, requires_all = ["n", "l"])]
        epsilon: Option<Sign>,
        #[arg(long)]
        max_r: Option<usize>,
        #[arg(long, env = "FINITE_W_JOBS", default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = Labeling::ColumnMajor)]
        labeling: Labeling,
        #[arg(long, default_value_t = Mutation::None)]
        mutation: Mutation,
        #[arg(long)]
        report: PathBuf,
    },
}

fn construct(args: &ConfigArgs, dump: Option<&PathBuf>) -> finite_w::Result<()> {
    let config = args.config()?;
    let pyramid = build_pyramid_with(config, args.labeling)?;
    let w = WAlgebra::with_options(
        config,
        WOptions {
            labeling: args.labeling,
            mutation: Mutation::None,
        },
    )?;
    println!("config {config} phi={}", config.phi);
    for i in pyramid.rows().iter().rev() {
        let line: Vec<String> = pyramid
            .cols()
            .iter()
            .map(|p| format!("{:>4}", pyramid.label(i, p)))
            .collect();
        println!("{}", line.join(""));
    }
    let d = w.decomposition();
    println!(
        "dim g = {}, dim m = {}, dim h = {}, dim p = {}",
        w.lie().dim(),
        d.m.len(),
        d.h.len(),
        d.p().len()
    );
    println!(
        "e has {} terms, chi supported on {} m-basis elements",
        w.e().terms().len(),
        w.chi_map().support().count()
    );
    if let Some(path) = dump {
        std::fs::write(path, serde_json::to_string_pretty(&pyramid.dump())?)?;
    }
    Ok(())
}

fn generators(args: &ConfigArgs, max_r: usize, out: &PathBuf) -> finite_w::Result<()> {
    let config = args.config()?;
    let w = WAlgebra::with_options(
        config,
        WOptions {
            labeling: args.labeling,
            mutation: Mutation::None,
        },
    )?;
    let mut records = Vec::new();
    for r in 1..=max_r {
        for i in w.rows().iter() {
            for j in w.rows().iter() {
                records.push(w.generator_record(i, j, r)?);
            }
        }
    }
    std::fs::write(out, serde_json::to_string(&records)?)?;
    println!("wrote {} generators to {}", records.len(), out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Construct {
            config,
            dump_pyramid,
        } => construct(config, dump_pyramid.as_ref()).map(|_| true),
        Command::Generators { config, max_r, out } => generators(config, *max_r, out).map(|_| true),
        Command::Verify {
            suite,
            n,
            l,
            epsilon,
            max_r,
            jobs,
            seed,
            labeling,
            mutation,
            report,
        } => {
            let configs = match (n, l, epsilon) {
                (Some(n), Some(l), Some(e)) => make_config(*n, *l, *e).map(|c| vec![c]),
                _ => Ok(default_grid()),
            };
            configs.and_then(|configs| {
                let options = WOptions {
                    labeling: *labeling,
                    mutation: *mutation,
                };
                let entries = configs
                    .iter()
                    .flat_map(|&c| {
                        suite
                            .expand()
                            .into_iter()
                            .map(move |s| PlanEntry::new(c, s))
                    })
                    .map(|e| {
                        let e = e.with_options(options).with_seed(*seed);
                        match max_r {
                            Some(r) => e.with_max_r(*r),
                            None => e,
                        }
                    })
                    .collect();
                let plan = VerificationPlan {
                    entries,
                    jobs: *jobs,
                    output: Some(report.clone()),
                };
                let rep = run_suite(&plan)?;
                for row in rep.failures() {
                    eprintln!("FAIL {} {} {}", row.config, row.check, row.parameters);
                }
                println!(
                    "{} rows, {} passed, {} failed in {:.2}s",
                    rep.summary.rows, rep.summary.passed, rep.summary.failed, rep.summary.seconds
                );
                Ok(rep.all_passed())
            })
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
