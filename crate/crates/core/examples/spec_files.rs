//! Reading a run spec, running it, and emitting the report in every format.

use jetforge::cli::{parse_spec_str, run, Command, Format};

const SPEC: &str = "\
# the plane, kept through degree 4
kind = graded
ring = Q[x, y]
truncation = 4
sigma = 1
tau = 2,1
n_max = 2
";

fn main() -> jetforge::Result<()> {
    let mut spec = parse_spec_str(SPEC)?;
    spec.command = Command::Rigidity;
    let report = run(&spec)?;
    print!("{}", report.render(Format::Text)?);
    let json = report.render(Format::Json)?;
    println!("json: {} bytes, csv: {} lines", json.len(), report.render(Format::Csv)?.lines().count());
    assert_eq!(parse_spec_str(&spec.to_spec_string())?, spec);
    Ok(())
}
