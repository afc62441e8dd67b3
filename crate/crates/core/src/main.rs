use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use cosetopo::harness::{
    betti_rows, cmd_catalog, cmd_compute, run_suite, Cache, JobSpec, Targets, Workspace, DEFAULT_CAP, SUITES,
};
use cosetopo::topo::HomologyPolicy;
use cosetopo::Error;

const EXIT_CHECK: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "cosetopo", version, about = "Coset and subgroup posets of finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Coset,
    Subgroup,
    All,
}

fn targets(w: Option<Which>) -> Targets {
    match w {
        None => Targets::default(),
        Some(Which::Coset) => Targets { coset: true, subgroup: false },
        Some(Which::Subgroup) => Targets { coset: false, subgroup: true },
        Some(Which::All) => Targets::ALL,
    }
}

#[derive(clap::Args)]
struct CacheArgs {
    /// Cache directory.
    #[arg(long = "cache-dir", default_value = ".cosetopo-cache")]
    cache_dir: PathBuf,
    /// Recompute everything and leave the cache untouched.
    #[arg(long = "no-cache")]
    no_cache: bool,
}

impl CacheArgs {
    fn cache(&self) -> Cache {
        if self.no_cache {
            Cache::disabled()
        } else {
            Cache::new(&self.cache_dir)
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute report sections for one or more groups.
    Compute {
        /// Group spec such as `alt:5`; repeat for several jobs.
        #[arg(long = "group", required = true)]
        groups: Vec<String>,
        #[arg(long = "homology")]
        homology: Option<Which>,
        #[arg(long = "predict")]
        predict: Option<Which>,
        /// Compare predictions with computed homology.
        #[arg(long = "verify")]
        verify: bool,
        #[arg(long = "zeta")]
        zeta: bool,
        #[arg(long = "classify")]
        classify: bool,
        #[arg(long = "bounds")]
        bounds: bool,
        #[arg(long = "certificate")]
        certificate: bool,
        /// Largest group order accepted.
        #[arg(long = "cap", default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Face budget for a full order complex.
        #[arg(long = "max-faces", default_value_t = HomologyPolicy::default().max_faces)]
        max_faces: usize,
        /// Write the JSON report here instead of stdout.
        #[arg(long = "out")]
        out: Option<PathBuf>,
        /// Write the Betti table as CSV.
        #[arg(long = "csv")]
        csv: Option<PathBuf>,
        /// Recompute cached results and fail if they differ.
        #[arg(long = "spot-check")]
        spot_check: bool,
        /// Concurrent group jobs.
        #[arg(long = "jobs", default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Run verification suites over the built-in catalog.
    Verify {
        #[arg(value_parser = SUITES)]
        suite_arg: Option<String>,
        #[arg(long = "suite", value_parser = SUITES, conflicts_with = "suite_arg")]
        suite: Option<String>,
        /// Write the machine-readable summary here.
        #[arg(long = "out")]
        out: Option<PathBuf>,
        #[arg(long = "jobs", default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// List the built-in groups.
    Catalog {
        #[arg(long = "json")]
        json: bool,
    },
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::InvalidSpec { .. } | Error::MalformedFile { .. } | Error::Parse(_) | Error::InvalidPermutation(_) => {
            EXIT_USAGE
        }
        _ => EXIT_CHECK,
    }
}

fn fail(e: impl std::fmt::Display, code: u8) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(code)
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, rayon::ThreadPoolBuildError> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()
}

fn emit(doc: &Value, out: Option<&PathBuf>) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(doc).expect("reports serialize") + "\n";
    match out {
        Some(p) => fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_csv(path: &PathBuf, reports: &[Value]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["group", "poset", "dimension", "rank", "torsion"])?;
    for r in reports {
        for row in betti_rows(r) {
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Compute {
            groups,
            homology,
            predict,
            verify,
            zeta,
            classify,
            bounds,
            certificate,
            cap,
            max_faces,
            out,
            csv,
            spot_check,
            jobs,
            cache,
        } => {
            let cache = cache.cache();
            let specs: Vec<JobSpec> = groups
                .iter()
                .map(|g| JobSpec {
                    homology: targets(homology),
                    predict: targets(predict),
                    verify,
                    zeta,
                    classify,
                    bounds,
                    certificate,
                    cap,
                    policy: HomologyPolicy { max_faces, ..HomologyPolicy::default() },
                    ..JobSpec::new(g.clone())
                })
                .collect();
            let pool = match pool(jobs) {
                Ok(p) => p,
                Err(e) => return fail(e, EXIT_USAGE),
            };
            let results: Vec<_> = pool.install(|| {
                specs
                    .par_iter()
                    .map(|j| {
                        let r = cmd_compute(j, &cache)?;
                        let same = !spot_check || cmd_compute(j, &Cache::disabled())?.0 == r.0;
                        Ok((r, same))
                    })
                    .collect::<Vec<cosetopo::Result<_>>>()
            });
            let mut reports = Vec::new();
            let mut ok = true;
            for (spec, r) in specs.iter().zip(results) {
                match r {
                    Ok(((report, pass), same)) => {
                        if !same {
                            eprintln!("cached result for {} differs from recomputation", spec.group);
                        }
                        ok &= pass && same;
                        reports.push(report);
                    }
                    Err(e) => return fail(format!("{}: {e}", spec.group), exit_for(&e)),
                }
            }
            let doc = if reports.len() == 1 { reports[0].clone() } else { json!({ "schema": 1, "reports": reports }) };
            if let Err(e) = emit(&doc, out.as_ref()) {
                return fail(e, EXIT_CHECK);
            }
            if let Some(path) = csv {
                if let Err(e) = write_csv(&path, &reports) {
                    return fail(e, EXIT_CHECK);
                }
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK)
            }
        }
        Command::Verify { suite_arg, suite, out, jobs, cache } => {
            let suite = suite.or(suite_arg).unwrap_or_else(|| "all".into());
            let pool = match pool(jobs) {
                Ok(p) => p,
                Err(e) => return fail(e, EXIT_USAGE),
            };
            let result = pool.install(|| Workspace::catalog(cache.cache()).and_then(|ws| run_suite(&ws, &suite)));
            let reports = match result {
                Ok(r) => r,
                Err(e) => return fail(&e, exit_for(&e)),
            };
            for r in &reports {
                for c in &r.checks {
                    println!("{} {}: {} ({})", if c.pass { "PASS" } else { "FAIL" }, c.suite, c.name, c.detail);
                }
            }
            let pass = reports.iter().all(|r| r.pass);
            let total: usize = reports.iter().map(|r| r.checks.len()).sum();
            let failed: usize = reports.iter().flat_map(|r| &r.checks).filter(|c| !c.pass).count();
            println!("{}: {} checks, {} failed", if pass { "PASS" } else { "FAIL" }, total, failed);
            if let Some(path) = out {
                let doc = json!({ "schema": 1, "suite": suite, "pass": pass, "suites": reports });
                if let Err(e) = emit(&doc, Some(&path)) {
                    return fail(e, EXIT_CHECK);
                }
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK)
            }
        }
        Command::Catalog { json } => match cmd_catalog() {
            Ok(rows) if json => match emit(&serde_json::to_value(&rows).expect("rows serialize"), None) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(e, EXIT_CHECK),
            },
            Ok(rows) => {
                for r in rows {
                    println!("{}", r.line());
                }
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e, exit_for(&e)),
        },
    }
}
