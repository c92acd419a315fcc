//! Spec files, subcommand dispatch, report emission and the persistent cache behind the
//! `jetforge` binary.

pub mod cache;
pub mod report;
pub mod spec;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use clap::Parser;

pub use cache::Cache;
pub use report::{verdict_name, Report, Witness, SCHEMA};
pub use spec::{parse_spec, parse_spec_str, Command, Format, ModuleChoice, RunSpec};

use crate::algebra::{build_algebra, quotient_of_algebra, AlgebraRep, ModuleRep};
use crate::derham::{derham, rigidity_report, ComplexRep, Verdict};
use crate::diffops::{d_sigma_space, diff_space, split_check, VerificationSet};
use crate::error::{JetError, Result};
use crate::holonomy::{hol_acyclicity, hol_complex, hol_homotopy};
use crate::jets::algebra_module;
use crate::resolution::resolution_report;

/// Runs the command described by `spec`.
pub fn run(spec: &RunSpec) -> Result<Report> {
    spec.validate()?;
    let alg = build_algebra(&spec.algebra)?;
    let mut meta = BTreeMap::new();
    let seq = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    meta.insert("command".to_string(), spec.command.name().to_string());
    meta.insert("algebra".to_string(), alg.fingerprint());
    meta.insert("smooth".to_string(), alg.is_smooth().to_string());
    meta.insert("sigma".to_string(), seq(&spec.sigma));
    meta.insert("tau".to_string(), seq(spec.tau()));
    meta.insert("n_max".to_string(), spec.n_max.to_string());
    meta.insert("grade_max".to_string(), spec.grade_max().to_string());
    meta.insert("spec".to_string(), spec.computation_key());
    meta.insert("version".to_string(), env!("CARGO_PKG_VERSION").to_string());
    let mut r = Report::new(meta);
    match spec.command {
        Command::Cohomology => cohomology(spec, &alg, &mut r)?,
        Command::Rigidity => rigidity(spec, &alg, &mut r)?,
        Command::HolAcyclicity => acyclicity(spec, &alg, &mut r)?,
        Command::ResolutionCheck => resolution(spec, &alg, &mut r)?,
        Command::DiffDims => diff_dims(spec, &alg, &mut r)?,
    }
    Ok(r)
}

/// [`run`], reading from and filling `cache` when given. Returns the report and whether it
/// came from the cache.
pub fn run_cached(spec: &RunSpec, cache: Option<&Cache>) -> Result<(Report, bool)> {
    if let Some(c) = cache {
        if let Some(r) = c.get(spec)? {
            return Ok((r, true));
        }
    }
    let r = run(spec)?;
    if let Some(c) = cache {
        c.put(spec, &r)?;
    }
    Ok((r, false))
}

fn graded_verdict(ok: bool, smooth: bool) -> Verdict {
    match (ok, smooth) {
        (true, _) => Verdict::Pass,
        (false, true) => Verdict::Fail,
        (false, false) => Verdict::Diagnostic,
    }
}

/// Checks `d∘d = 0`, recording the first nonzero entry of a failing composite.
fn complex_check(name: &str, c: &ComplexRep, r: &mut Report) -> Result<()> {
    let mut ok = true;
    for (n, w) in c.differentials.windows(2).enumerate() {
        if let Some((g, row, col)) = w[1].compose(&w[0])?.first_nonzero() {
            ok = false;
            r.witnesses.push(Witness::new(
                name,
                &[("n", n as i64), ("grade", g as i64), ("row", row as i64), ("col", col as i64)],
                format!("d^{} d^{n} has a nonzero entry", n + 1),
            ));
        }
    }
    r.verdicts.insert(name.to_string(), if ok { Verdict::Pass } else { Verdict::Fail });
    Ok(())
}

fn cohomology(spec: &RunSpec, alg: &Arc<AlgebraRep>, r: &mut Report) -> Result<()> {
    let c = derham(alg).complex(&spec.sigma, spec.n_max)?;
    complex_check("complex", &c, r)?;
    r.add_cohomology("dR_sigma", &crate::derham::cohomology(&c, spec.grade_max())?);
    Ok(())
}

fn rigidity(spec: &RunSpec, alg: &Arc<AlgebraRep>, r: &mut Report) -> Result<()> {
    let rep = rigidity_report(alg, spec.tau(), &spec.sigma, spec.n_max, spec.grade_max())?;
    r.add_cohomology("dR_tau", &rep.table_tau);
    r.add_cohomology("dR_sigma", &rep.table_sigma);
    r.verdicts.insert("rigidity".to_string(), rep.verdict);
    if let Some((n, g, a, b)) = rep.mismatch {
        r.witnesses.push(Witness::new(
            "rigidity",
            &[("n", n as i64), ("grade", g as i64)],
            format!("dim H^{n} is {a} for tau and {b} for sigma"),
        ));
    }
    let lemma_ok = rep.kernel_lemma.iter().all(|(_, e)| *e);
    r.verdicts.insert("kernel_lemma".to_string(), graded_verdict(lemma_ok, alg.is_smooth()));
    for (n, e) in &rep.kernel_lemma {
        if !e {
            r.witnesses.push(Witness::new("kernel_lemma", &[("n", *n as i64)], "kernels differ as subspaces"));
        }
    }
    if !alg.is_smooth() {
        r.notes.push("algebra not known to be smooth: rigidity tables are recorded without assertion".to_string());
    }
    Ok(())
}

fn coefficient_module(spec: &RunSpec, alg: &Arc<AlgebraRep>) -> Result<Arc<ModuleRep>> {
    match &spec.module {
        ModuleChoice::Algebra => Ok(algebra_module(alg)),
        ModuleChoice::Quotient(elems) => {
            let mut gens = Vec::new();
            for e in elems {
                gens.extend(alg.parse_element(e)?);
            }
            quotient_of_algebra(alg, &gens, &format!("A/({})", elems.join(", ")))
        }
    }
}

fn acyclicity(spec: &RunSpec, alg: &Arc<AlgebraRep>, r: &mut Report) -> Result<()> {
    let p = coefficient_module(spec, alg)?;
    let tau = spec.tau();
    complex_check("complex", &hol_complex(tau, &p, spec.n_max)?, r)?;
    r.meta.insert("module".to_string(), p.label().to_string());
    let rep = match hol_acyclicity(tau, &p, spec.n_max, spec.grade_max(), spec.general) {
        Ok(rep) => rep,
        Err(JetError::FactorizationFailure(m)) if spec.general => {
            // the general construction may not exist; keep the cohomology table
            let c = hol_complex(tau, &p, spec.n_max)?;
            r.add_cohomology("Hol", &crate::derham::cohomology(&c, spec.grade_max())?);
            r.verdicts.insert("acyclicity".to_string(), Verdict::Diagnostic);
            r.notes.push(format!("no homotopy for tau = {tau:?}: {m}"));
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    r.add_cohomology("Hol", &rep.table);
    r.verdicts.insert("acyclicity".to_string(), rep.verdict);
    for (n, g, row, col) in &rep.homotopy_defects {
        r.witnesses.push(Witness::new(
            "acyclicity",
            &[("n", *n as i64), ("grade", *g as i64), ("row", *row as i64), ("col", *col as i64)],
            "phi delta + delta phi differs from the identity",
        ));
    }
    for (n, row) in rep.table.dims.iter().enumerate() {
        if let Some(g) = row.iter().position(|&d| d > 0) {
            r.witnesses.push(Witness::new("acyclicity", &[("n", n as i64), ("grade", g as i64)], format!("H^{n} = {}", row[g])));
        }
    }
    if spec.paranoid {
        let h = hol_homotopy(tau, &p, spec.n_max, spec.general)?;
        let v = match h.check_closed_form() {
            Ok(count) => {
                r.set("closed_form", "tuples".to_string(), count);
                Verdict::Pass
            }
            Err(e) => {
                r.witnesses.push(Witness::new("closed_form", &[], e.to_string()));
                Verdict::Fail
            }
        };
        r.verdicts.insert("closed_form".to_string(), v);
    }
    Ok(())
}

fn resolution(spec: &RunSpec, alg: &Arc<AlgebraRep>, r: &mut Report) -> Result<()> {
    let rep = resolution_report(alg, &spec.sigma, spec.k, spec.n_max, spec.l_max)?;
    let smooth = alg.is_smooth();
    r.meta.insert("k".to_string(), spec.k.to_string());
    r.meta.insert("l_max".to_string(), spec.l_max.to_string());
    r.meta.insert("shifts".to_string(), rep.shifts.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","));
    r.add_cohomology("H(K)", &rep.kernel_cohomology);
    let mut exact = true;
    for node in &rep.nodes {
        r.set("failing_grades", format!("node[{}][{}]", node.column, node.level), node.failing_grades.len());
        for g in &node.failing_grades {
            exact = false;
            r.witnesses.push(Witness::new(
                "exactness",
                &[("column", node.column as i64), ("level", node.level as i64), ("grade", *g as i64)],
                "kernel and image differ",
            ));
        }
    }
    for (n, g) in &rep.rho_failures {
        r.witnesses.push(Witness::new("rho_surjective", &[("n", *n as i64), ("grade", *g as i64)], "rho is not onto"));
    }
    r.verdicts.insert("exactness".to_string(), graded_verdict(exact, smooth));
    r.verdicts.insert("rho_surjective".to_string(), graded_verdict(rep.rho_failures.is_empty(), smooth));
    r.verdicts.insert("chain_maps".to_string(), graded_verdict(rep.chain_maps, smooth));
    r.verdicts.insert("rigidity_consistent".to_string(), graded_verdict(rep.rigidity_consistent, smooth));
    r.verdicts.insert("resolution".to_string(), rep.verdict);
    let nonzero: Vec<String> = rep.psi_zero_degree.iter().filter(|(_, z)| !z).map(|(l, _)| l.to_string()).collect();
    if !nonzero.is_empty() {
        r.notes.push(format!(
            "psi^0 is the injection K_(l+1) -> J^1(K_l), nonzero in columns {}; replacing it by 0 leaves the rows {}",
            nonzero.join(","),
            if rep.zero_degree_replaced_exact { "exact" } else { "non-exact" }
        ));
    }
    Ok(())
}

fn diff_dims(spec: &RunSpec, alg: &Arc<AlgebraRep>, r: &mut Report) -> Result<()> {
    let am = algebra_module(alg);
    let set = if spec.paranoid { VerificationSet::Basis } else { VerificationSet::Auto };
    let shifts: Vec<i64> = if alg.is_graded() { (-(spec.k as i64)..=0).collect() } else { vec![0] };
    let mut split_ok = true;
    let mut agree = true;
    for &s in &shifts {
        for j in 0..=spec.k {
            let d = diff_space(&am, &am, j, s, set)?;
            r.set("Diff", format!("Diff[{j}][{s}]"), d.dim());
            if spec.paranoid {
                let g = diff_space(&am, &am, j, s, VerificationSet::Generators)?;
                if g.array.space != d.array.space {
                    agree = false;
                    r.witnesses.push(Witness::new("paranoid_agreement", &[("k", j as i64), ("shift", s)], "generator and basis tuples disagree"));
                }
            }
            if j >= 1 {
                r.set("D", format!("D[({j})][{s}]"), d_sigma_space(&am, &[j as u32], s, set)?.dim());
                if !alg.is_graded() {
                    let sp = split_check(&am, j, s, set)?;
                    if sp.diff_dim != sp.d_dim + sp.q_dim {
                        split_ok = false;
                        r.witnesses.push(Witness::new(
                            "split",
                            &[("k", j as i64), ("shift", s)],
                            format!("Diff {} != D {} + A {}", sp.diff_dim, sp.d_dim, sp.q_dim),
                        ));
                    }
                }
            }
        }
        let seq: Vec<String> = spec.sigma.iter().map(|x| x.to_string()).collect();
        r.set("D_sigma", format!("D[({})][{s}]", seq.join(",")), d_sigma_space(&am, &spec.sigma, s, set)?.dim());
    }
    if alg.is_graded() {
        r.notes.push("graded algebra: spaces are computed inside the truncation window".to_string());
    } else {
        r.verdicts.insert("split".to_string(), if split_ok { Verdict::Pass } else { Verdict::Fail });
    }
    if spec.paranoid {
        r.verdicts.insert("paranoid_agreement".to_string(), if agree { Verdict::Pass } else { Verdict::Fail });
    }
    Ok(())
}

/// Command line of the `jetforge` binary. Flags override values from the spec file.
#[derive(Debug, Parser)]
#[command(name = "jetforge", version, about = "Exact higher de Rham and Hol computations over Q")]
pub struct Args {
    /// cohomology, rigidity, hol-acyclicity, resolution-check or diff-dims
    pub command: Command,
    /// Spec file describing the algebra (and optionally the run)
    #[arg(long)]
    pub algebra: PathBuf,
    #[arg(long, value_delimiter = ',')]
    pub sigma: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    pub tau: Option<Vec<u32>>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub grade_max: Option<usize>,
    /// Order bound for diff-dims, base level for resolution-check
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub l_max: Option<u32>,
    /// Verify against full basis tuples instead of generator tuples
    #[arg(long)]
    pub paranoid: bool,
    #[arg(long)]
    pub assert_smooth: bool,
    /// Allow the homotopy for tau other than 1 (diagnostic only)
    #[arg(long)]
    pub general: bool,
    /// Directory for report.<ext>; prints to stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<Format>,
    /// Directory of cached reports
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
}

impl Args {
    /// Reads the spec file and applies the flag overrides.
    pub fn resolve(&self) -> Result<RunSpec> {
        let mut s = parse_spec(&self.algebra)?;
        s.command = self.command;
        if let Some(v) = &self.sigma {
            s.sigma = v.clone();
        }
        if let Some(v) = &self.tau {
            s.tau = Some(v.clone());
        }
        if let Some(v) = self.n_max {
            s.n_max = v;
        }
        if let Some(v) = self.grade_max {
            s.grade_max = Some(v);
        }
        if let Some(v) = self.k {
            s.k = v;
        }
        if let Some(v) = self.l_max {
            s.l_max = v;
        }
        s.paranoid |= self.paranoid;
        s.general |= self.general;
        s.algebra.assert_smooth |= self.assert_smooth;
        if let Some(o) = &self.out {
            s.out = Some(o.clone());
        }
        if let Some(f) = self.format {
            s.format = f;
        }
        s.validate()?;
        Ok(s)
    }
}

pub struct Outcome {
    pub report: Report,
    pub rendered: String,
    pub written: Option<PathBuf>,
    pub cached: bool,
}

pub fn execute(args: &Args) -> Result<Outcome> {
    let spec = args.resolve()?;
    let cache = args.cache_dir.as_deref().map(Cache::open).transpose()?;
    let (report, cached) = run_cached(&spec, cache.as_ref())?;
    let rendered = report.render(spec.format)?;
    let written = match &spec.out {
        Some(dir) => Some(report.emit(spec.format, dir)?),
        None => None,
    };
    Ok(Outcome { report, rendered, written, cached })
}
