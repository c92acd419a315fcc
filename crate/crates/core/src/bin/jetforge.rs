use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::Parser;
use jetforge::cli::{execute, verdict_name, Args, Outcome};
use jetforge::derham::Verdict;

fn main() -> ExitCode {
    let args = Args::parse();
    let start = Instant::now();
    let out: anyhow::Result<Outcome> =
        execute(&args).with_context(|| format!("{} on {}", args.command.name(), args.algebra.display()));
    let out = match out {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    match &out.written {
        Some(p) => eprintln!("wrote {}", p.display()),
        None => print!("{}", out.rendered),
    }
    let overall = out.report.overall();
    let cached = if out.cached { " (cached)" } else { "" };
    eprintln!("{} in {:.3}s{cached}", verdict_name(overall).to_uppercase(), start.elapsed().as_secs_f64());
    if overall == Verdict::Fail {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
