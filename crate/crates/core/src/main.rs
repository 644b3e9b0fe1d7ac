use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use patankar::harness::{
    convergence_study, emit_convergence, emit_outputs, find_preset, run_all, RunConfig, RunRecord, Study, PRESETS,
};
use patankar::Error;

#[derive(Parser)]
#[command(name = "patankar", version, about = "Modified Patankar schemes for 1-D conservation laws")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every cell count and sweep combination of a config.
    Run(RunArgs),
    /// Shock-location convergence table over the cell counts of a config.
    Convergence(RunArgs),
    /// Shipped experiment configs.
    #[command(subcommand)]
    Presets(PresetCommand),
}

#[derive(Subcommand)]
enum PresetCommand {
    List,
    /// Run a preset as its `study` field says.
    Run {
        name: String,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Config file (same as --config).
    path: Option<PathBuf>,
    #[arg(long, conflicts_with_all = ["path", "preset"])]
    config: Option<PathBuf>,
    #[arg(long, conflicts_with = "path")]
    preset: Option<String>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct Overrides {
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Retain the space-time states and write field.csv.
    #[arg(long)]
    dump_fields: bool,
    /// Retain stage records in memory.
    #[arg(long)]
    keep_stages: bool,
    /// Replace the CFL number and any CFL sweep.
    #[arg(long)]
    cfl: Option<f64>,
    /// Replace the cell counts (repeatable).
    #[arg(long = "N", value_name = "N")]
    n: Vec<usize>,
    #[arg(long)]
    quiet: bool,
}

impl Overrides {
    fn apply(&self, config: &mut RunConfig) -> Result<(), Error> {
        if let Some(dir) = &self.out_dir {
            config.output.out_dir = dir.to_string_lossy().into_owned();
        }
        if self.dump_fields {
            config.output.keep_fields = true;
            config.output.dump_fields = true;
        }
        config.output.keep_stages |= self.keep_stages;
        if let Some(cfl) = self.cfl {
            config.time.cfl = cfl;
            if let Some(s) = config.sweep.as_mut() {
                s.cfl.clear();
            }
        }
        if !self.n.is_empty() {
            config.mesh.n = self.n.clone();
        }
        config.validate()
    }
}

fn load(args: &RunArgs) -> Result<RunConfig, Error> {
    let mut config = match (&args.path, &args.config, &args.preset) {
        (Some(p), None, None) | (None, Some(p), None) => {
            RunConfig::from_path(p).map_err(|e| match e {
                Error::Io { path, source } => Error::Config(format!("cannot read {}: {source}", path.display())),
                other => other,
            })?
        }
        (None, None, Some(name)) => find_preset(name)?.config()?,
        _ => return Err(Error::Config("give exactly one of <PATH>, --config or --preset".into())),
    };
    args.overrides.apply(&mut config)?;
    Ok(config)
}

fn report(record: &RunRecord, quiet: bool) {
    if quiet {
        return;
    }
    let s = &record.summary;
    let opt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.3e}"));
    println!(
        "{}  steps={}  shock_error={}  tvd_violation={}  ttv_max={:.4}  min={:.3e}",
        s.run_id,
        s.steps,
        opt(s.shock_error),
        opt(s.tvd_violation_max),
        s.ttv_max,
        s.min_state
    );
}

fn do_run(config: &RunConfig, quiet: bool) -> Result<(), Error> {
    let out = PathBuf::from(&config.output.out_dir);
    for record in run_all(config)? {
        let paths = emit_outputs(&record, &out)?;
        report(&record, quiet);
        if !quiet {
            println!("  -> {}", paths.dir.display());
        }
    }
    Ok(())
}

fn do_convergence(config: &RunConfig, quiet: bool) -> Result<(), Error> {
    let out = PathBuf::from(&config.output.out_dir);
    for table in convergence_study(config)? {
        for record in &table.records {
            emit_outputs(record, &out)?;
        }
        let dir = emit_convergence(&table, &out)?;
        if quiet {
            continue;
        }
        println!("{}  ({}, cfl {})", table.study_id, table.integrator, table.cfl);
        println!("  {:>6}  {:>12}  {:>7}", "N", "shock_error", "steps");
        for row in &table.rows {
            let err = row.shock_error.map_or("-".to_string(), |e| format!("{e:.4e}"));
            println!("  {:>6}  {:>12}  {:>7}", row.n, err, row.steps);
        }
        match table.slope {
            Some(s) => println!("  slope {s:.3}"),
            None => println!("  slope -"),
        }
        println!("  -> {}", dir.display());
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Run(args) => do_run(&load(&args)?, args.overrides.quiet),
        Command::Convergence(args) => do_convergence(&load(&args)?, args.overrides.quiet),
        Command::Presets(PresetCommand::List) => {
            for p in PRESETS {
                println!("{:<22} {}", p.name, p.description());
            }
            Ok(())
        }
        Command::Presets(PresetCommand::Run { name, overrides }) => {
            let mut config = find_preset(&name)?.config()?;
            overrides.apply(&mut config)?;
            match config.study {
                Study::Run => do_run(&config, overrides.quiet),
                Study::Convergence => do_convergence(&config, overrides.quiet),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config_error() {
                ExitCode::from(2)
            } else if e.is_solver_error() {
                ExitCode::from(3)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
