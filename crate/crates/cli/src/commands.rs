//! Command implementations: configuration resolution, worker pools, and the
//! orchestration between the core library and the file formats.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use roomflock_core::diagnostics::{run_recovery_study, InferenceMethod, StudySettings};
use roomflock_core::dynamics::simulate;
use roomflock_core::env::place_beacons;
use roomflock_core::inference::{
    abc_rejection, abc_smc, abc_smc_with_table, build_reference_table, PosteriorSamples,
    ReferenceTable, SimSetup, SmcSchedule,
};
use roomflock_core::io::{
    read_beacons_csv, read_table, read_trajectory, write_atomic, write_coverage_csv,
    write_posterior_csv, write_summary_csv, write_table, write_trajectory, write_trajectory_csv,
    RunConfigFile,
};
use roomflock_core::observables::augment;
use roomflock_core::seeds::{family_seed, role};
use roomflock_core::summaries::{summarize, SUMMARY_LABELS};
use roomflock_core::{Beacons, Summary, Trajectory};

use crate::errors::CliError;
use crate::manifest::RunManifest;
use crate::{Command, CommonOpts, MethodArg};

pub fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Simulate {
            common,
            out,
            beacons,
            csv,
        } => cmd_simulate(&common, &out, beacons.as_deref(), csv.as_deref()),
        Command::Table {
            common,
            rows,
            out,
            beacons,
        } => cmd_table(&common, rows, &out, beacons.as_deref()),
        Command::Infer {
            common,
            observation,
            table,
            out,
            method,
            accept_fraction,
            population,
            generations,
            quantile,
        } => cmd_infer(
            &common,
            &observation,
            table.as_deref(),
            &out,
            method,
            accept_fraction,
            SmcSchedule {
                population,
                generations,
                quantile,
            },
        ),
        Command::Calibrate {
            common,
            table,
            cases,
            draws,
            out,
        } => cmd_study(
            &common,
            "calibrate",
            &table,
            cases,
            InferenceMethod::PriorNull { draws },
            &out,
        ),
        Command::Recover {
            common,
            table,
            cases,
            method,
            accept_fraction,
            population,
            generations,
            quantile,
            draws,
            out,
        } => {
            let method = match method {
                MethodArg::Rejection => InferenceMethod::Rejection { accept_fraction },
                MethodArg::Smc => InferenceMethod::Smc {
                    schedule: SmcSchedule {
                        population,
                        generations,
                        quantile,
                    },
                },
                MethodArg::Null => InferenceMethod::PriorNull { draws },
            };
            cmd_study(&common, "recover", &table, cases, method, &out)
        }
        Command::Stats { common, input, out } => cmd_stats(&common, &input, out.as_deref()),
    }
}

/// Resolved configuration: file, then CLI overrides, then validation.
fn resolve_config(common: &CommonOpts) -> Result<RunConfigFile, CliError> {
    let mut config = match &common.config {
        Some(path) => RunConfigFile::load(path)?,
        None => RunConfigFile::default(),
    };
    if let Some(w) = common.w {
        config.w = w;
    }
    if let Some(r) = common.r {
        config.r = r;
    }
    if let Some(v) = common.v {
        config.v = v;
    }
    if let Some(eta) = common.eta {
        config.eta = eta;
    }
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    config.validate()?;
    Ok(config)
}

/// Worker count: flag, then ROOMFLOCK_WORKERS, then all cores.
fn resolve_workers(common: &CommonOpts) -> Result<usize, CliError> {
    if let Some(w) = common.workers {
        if w == 0 {
            return Err(CliError::usage("--workers must be >= 1"));
        }
        return Ok(w);
    }
    if let Ok(raw) = std::env::var("ROOMFLOCK_WORKERS") {
        let w: usize = raw
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("ROOMFLOCK_WORKERS is not a count: '{raw}'")))?;
        if w == 0 {
            return Err(CliError::usage("ROOMFLOCK_WORKERS must be >= 1"));
        }
        return Ok(w);
    }
    Ok(std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs `f` on a dedicated pool of `workers` threads. Worker count never
/// changes output bytes, only wall time.
fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Io(format!("failed to build worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Beacons from a CSV when given, otherwise placed from the run seed's
/// BEACONS family.
fn resolve_beacons(
    config: &RunConfigFile,
    beacons_csv: Option<&Path>,
) -> Result<Beacons, CliError> {
    match beacons_csv {
        Some(path) => {
            let beacons = read_beacons_csv(path)?;
            if beacons.len() != config.num_beacons {
                return Err(CliError::usage(format!(
                    "B mismatch: config declares {} beacons, {} has {}",
                    config.num_beacons,
                    path.display(),
                    beacons.len()
                )));
            }
            Ok(beacons)
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(family_seed(config.seed, role::BEACONS));
            place_beacons(&config.room(), config.num_beacons, &mut rng)
                .map_err(|e| CliError::usage(e.to_string()))
        }
    }
}

fn summarize_trajectory(traj: Trajectory) -> Result<Summary, CliError> {
    let aug = augment(traj).map_err(|e| CliError::usage(e.to_string()))?;
    Ok(summarize(&aug))
}

fn cmd_simulate(
    common: &CommonOpts,
    out: &Path,
    beacons_csv: Option<&Path>,
    csv: Option<&Path>,
) -> Result<(), CliError> {
    let started = Instant::now();
    let config = resolve_config(common)?;
    let workers = resolve_workers(common)?;
    let beacons = resolve_beacons(&config, beacons_csv)?;

    let traj = simulate(
        &config.params(),
        &config.fixed(),
        &config.room(),
        &beacons,
        &config.sim(),
    )?;
    write_trajectory(out, &traj)?;
    if let Some(csv_path) = csv {
        write_trajectory_csv(csv_path, &traj)?;
    }

    let mut manifest = RunManifest::new("simulate", config.clone(), config.seed, workers);
    manifest.args = serde_json::json!({
        "beacons_csv": beacons_csv.map(|p| p.display().to_string()),
    });
    if let Some(p) = beacons_csv {
        manifest.input("beacons", p);
    }
    manifest.output("trajectory", out);
    if let Some(p) = csv {
        manifest.output("trajectory_csv", p);
    }
    manifest.wall_seconds = started.elapsed().as_secs_f64();
    manifest.write_sidecar(out)?;
    eprintln!(
        "simulated {} agents x {} steps (seed {}) -> {}",
        config.num_agents,
        config.num_steps,
        config.seed,
        out.display()
    );
    Ok(())
}

fn setup_from_config(config: &RunConfigFile, beacons: Beacons) -> SimSetup {
    SimSetup {
        fixed: config.fixed(),
        room: config.room(),
        beacons,
        config: config.sim(),
    }
}

fn cmd_table(
    common: &CommonOpts,
    rows: usize,
    out: &Path,
    beacons_csv: Option<&Path>,
) -> Result<(), CliError> {
    let started = Instant::now();
    if rows == 0 {
        return Err(CliError::usage("--rows must be >= 1"));
    }
    let config = resolve_config(common)?;
    let workers = resolve_workers(common)?;
    let beacons = resolve_beacons(&config, beacons_csv)?;
    let setup = setup_from_config(&config, beacons);
    let prior = roomflock_core::prior::PriorSpec::default();

    let progress = |done: usize, total: usize| {
        eprintln!("table: {done}/{total} rows");
    };
    let table = with_pool(workers, || {
        build_reference_table(&prior, &setup, rows, config.seed, Some(&progress))
    })??;
    write_table(out, &table)?;

    let mut manifest = RunManifest::new("table", config.clone(), config.seed, workers);
    manifest.args = serde_json::json!({
        "rows": rows,
        "beacons_csv": beacons_csv.map(|p| p.display().to_string()),
    });
    if let Some(p) = beacons_csv {
        manifest.input("beacons", p);
    }
    manifest.output("table", out);
    manifest.wall_seconds = started.elapsed().as_secs_f64();
    manifest.write_sidecar(out)?;
    eprintln!("table: wrote {} rows -> {}", table.len(), out.display());
    Ok(())
}

/// The observation must have been generated under the table's configuration.
fn check_compatibility(table: &ReferenceTable, observation: &Trajectory) -> Result<(), CliError> {
    let t = &table.setup.config;
    let o = &observation.meta.sim;
    for (field, a, b) in [
        ("A", t.num_agents as f64, o.num_agents as f64),
        ("B", t.num_beacons as f64, o.num_beacons as f64),
        ("T", t.num_steps as f64, o.num_steps as f64),
        ("dt", t.dt, o.dt),
    ] {
        if a != b {
            return Err(CliError::usage(format!(
                "table/observation mismatch on {field}: table has {a}, observation has {b}"
            )));
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_infer(
    common: &CommonOpts,
    observation_path: &Path,
    table_path: Option<&Path>,
    out: &Path,
    method: MethodArg,
    accept_fraction: f64,
    schedule: SmcSchedule,
) -> Result<(), CliError> {
    let started = Instant::now();
    let workers = resolve_workers(common)?;
    let seed = common.seed.unwrap_or(0);
    let observation = read_trajectory(observation_path)?;

    let posterior: PosteriorSamples = match method {
        MethodArg::Rejection => {
            let table_path = table_path
                .ok_or_else(|| CliError::usage("--method rejection requires --table"))?;
            let table = read_table(table_path)?;
            check_compatibility(&table, &observation)?;
            let observed = summarize_trajectory(observation)?;
            abc_rejection(&observed, &table, accept_fraction)?
        }
        MethodArg::Smc => match table_path {
            Some(table_path) => {
                let table = read_table(table_path)?;
                check_compatibility(&table, &observation)?;
                let observed = summarize_trajectory(observation)?;
                with_pool(workers, || {
                    abc_smc_with_table(&observed, &table, schedule, seed)
                })??
                .posterior
            }
            None => {
                // Fresh-table SMC: the simulation setup comes from the
                // observation's own metadata.
                let setup = SimSetup {
                    fixed: resolve_config(common)?.fixed(),
                    room: observation.meta.room,
                    beacons: observation.meta.beacons.clone(),
                    config: observation.meta.sim,
                };
                let prior = roomflock_core::prior::PriorSpec::default();
                let observed = summarize_trajectory(observation)?;
                with_pool(workers, || {
                    abc_smc(&observed, &prior, &setup, schedule, seed, None)
                })??
                .posterior
            }
        },
        MethodArg::Null => {
            return Err(CliError::usage(
                "--method null is for `recover`/`calibrate`, not `infer`",
            ))
        }
    };
    write_posterior_csv(out, &posterior)?;

    let mut manifest = RunManifest::new(
        "infer",
        common
            .config
            .as_ref()
            .map(|p| RunConfigFile::load(p))
            .transpose()?
            .unwrap_or_default(),
        seed,
        workers,
    );
    manifest.args = serde_json::json!({
        "method": match method { MethodArg::Rejection => "rejection", MethodArg::Smc => "smc", MethodArg::Null => "null" },
        "accept_fraction": accept_fraction,
        "population": schedule.population,
        "generations": schedule.generations,
        "quantile": schedule.quantile,
    });
    manifest.input("observation", observation_path);
    if let Some(p) = table_path {
        manifest.input("table", p);
    }
    manifest.output("posterior", out);
    manifest.wall_seconds = started.elapsed().as_secs_f64();
    manifest.write_sidecar(out)?;
    eprintln!(
        "infer: {} posterior draws (ESS {:.1}) -> {}",
        posterior.len(),
        posterior.effective_sample_size(),
        out.display()
    );
    Ok(())
}

fn cmd_study(
    common: &CommonOpts,
    command: &str,
    table_path: &Path,
    cases: usize,
    method: InferenceMethod,
    out_prefix: &Path,
) -> Result<(), CliError> {
    let started = Instant::now();
    if cases == 0 {
        return Err(CliError::usage("--cases must be >= 1"));
    }
    let workers = resolve_workers(common)?;
    let seed = common.seed.unwrap_or(0);
    let table = read_table(table_path)?;
    let settings = StudySettings::new(cases, method);

    let progress = |done: usize, total: usize| {
        eprintln!("{command}: case {done}/{total}");
    };
    let report = with_pool(workers, || {
        run_recovery_study(&table, &settings, seed, Some(&progress))
    })??;

    let report_path = PathBuf::from(format!("{}.report.json", out_prefix.display()));
    let coverage_path = PathBuf::from(format!("{}.coverage.csv", out_prefix.display()));
    write_atomic(&report_path, |w| {
        serde_json::to_writer_pretty(&mut *w, &report)?;
        use std::io::Write;
        writeln!(w)?;
        Ok(())
    })?;
    write_coverage_csv(&coverage_path, &report)?;

    let mut manifest = RunManifest::new(command, RunConfigFile::default(), seed, workers);
    manifest.args = serde_json::json!({
        "cases": cases,
        "method": method,
    });
    manifest.input("table", table_path);
    manifest.output("report", &report_path);
    manifest.output("coverage", &coverage_path);
    manifest.wall_seconds = started.elapsed().as_secs_f64();
    manifest.write_sidecar(&report_path)?;

    for name in roomflock_core::params::ParamName::ALL {
        let p = report.param(name);
        eprintln!(
            "{command}: {name}: ECE {:.4} NRMSE {:.4} PC {:.4} corr {:.4}",
            p.ece, p.nrmse, p.posterior_contraction, p.recovery_correlation
        );
    }
    eprintln!("{command}: report -> {}", report_path.display());
    Ok(())
}

fn cmd_stats(common: &CommonOpts, input: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let _ = resolve_workers(common)?;
    let traj = read_trajectory(input)?;
    let summary = summarize_trajectory(traj)?;
    for (label, value) in SUMMARY_LABELS.iter().zip(&summary.values) {
        println!("{label} = {value}");
    }
    if let Some(path) = out {
        write_summary_csv(path, &SUMMARY_LABELS, std::slice::from_ref(&summary))?;
    }
    Ok(())
}
