use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use waist_cli::config::parse_config;
use waist_cli::{exit_code, run, worker_count, Cli, Output};
use waist_core::{Error, Result};

fn emit(cli: &Cli, out: &Output) -> Result<()> {
    let mut json = serde_json::to_string_pretty(&out.doc).map_err(|e| Error::Usage(e.to_string()))?;
    json.push('\n');
    match &cli.common.out {
        Some(p) => std::fs::write(p, json)?,
        None => std::io::stdout().write_all(json.as_bytes())?,
    }
    if let Some(dir) = &cli.common.csv {
        std::fs::create_dir_all(dir)?;
        for t in &out.tables {
            std::fs::write(dir.join(format!("{}.csv", t.name)), t.to_csv())?;
        }
    }
    for r in &out.doc.records {
        let status = match r.pass {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "----",
        };
        let m = r.measured.map_or("-".to_string(), |v| format!("{v:.6}"));
        let b = r.bound.map_or("-".to_string(), |v| format!("{v:.6}"));
        eprintln!("{status} {} measured={m} bound={b}", r.id);
    }
    Ok(())
}

fn setup(cli: &Cli) -> Result<()> {
    let file = match &cli.common.config {
        Some(p) => parse_config(&std::fs::read_to_string(p)?)?,
        None => Default::default(),
    };
    let workers = worker_count(cli.common.workers, &file)?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| Error::Usage(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = setup(&cli).and_then(|_| run(&cli)).and_then(|out| emit(&cli, &out).map(|_| out.doc.pass));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
