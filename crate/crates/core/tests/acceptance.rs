//! One line per acceptance criterion. All comparisons are exact; runtime limits are pinned
//! next to each criterion.

use std::sync::Arc;
use std::time::{Duration, Instant};

use jetforge::algebra::*;
use jetforge::derham::*;
use jetforge::diffops::*;
use jetforge::error::Result;
use jetforge::holonomy::*;
use jetforge::jets::*;
use jetforge::resolution::*;

fn poly(vars: &[&str], t: usize) -> Arc<AlgebraRep> {
    build_algebra(&AlgebraSpec::polynomial(vars, t)).unwrap()
}

fn dual() -> Arc<AlgebraRep> {
    build_algebra(&AlgebraSpec::structure_constants(&["1", "e"], &["e*e = 0"])).unwrap()
}

fn cubic() -> Arc<AlgebraRep> {
    build_algebra(&AlgebraSpec::structure_constants(&["1", "x", "x2"], &["x*x = x2", "x*x2 = 0", "x2*x2 = 0"])).unwrap()
}

fn split_pair() -> Arc<AlgebraRep> {
    build_algebra(&AlgebraSpec::structure_constants(&["1", "e"], &["e*e = e"])).unwrap()
}

/// All sequences of length `1..=len` with entries in `1..=max`.
fn matrix(len: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..len {
        layer = layer.into_iter().flat_map(|s| (1..=max).map(move |e| [s.clone(), vec![e]].concat())).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// `A` and `A/(generators)`.
fn a_and_residue(alg: &Arc<AlgebraRep>) -> Vec<Arc<ModuleRep>> {
    let p = probe_modules(alg, &[]).unwrap();
    vec![p[0].clone(), p[1].clone()]
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { ok: true, detail: detail.into() })
}

fn fail(detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { ok: false, detail: detail.into() })
}

fn c1() -> Result<Outcome> {
    let algs = [poly(&["x"], 8), poly(&["x", "y"], 5), dual(), cubic()];
    let mut built = 0;
    for alg in &algs {
        let am = algebra_module(alg);
        for s in matrix(3, 3) {
            derham(alg).complex(&s, s.len())?.verify()?;
            hol_complex(&s, &am, s.len() - 1)?.verify()?;
            built += 2;
        }
    }
    pass(format!("{built} complexes, every consecutive composite is the zero matrix"))
}

fn c2() -> Result<Outcome> {
    let mut checked = 0;
    for (alg, gm) in [(poly(&["x"], 6), 6), (poly(&["x", "y"], 4), 4)] {
        for tau in matrix(3, 3) {
            let r = rigidity_report(&alg, &tau, &[1], 2, gm)?;
            if r.verdict != Verdict::Pass {
                return fail(format!("tau {tau:?}: first mismatch {:?}", r.mismatch));
            }
            checked += 1;
        }
    }
    pass(format!("{checked} (A, tau) pairs, H^n(dR_tau) = H^n(dR_1) for n <= 2 at every grade"))
}

fn c3() -> Result<Outcome> {
    let ks = kernel_lemma_kernels(&poly(&["x"], 8), &[1], &[1, 2, 3])?;
    if ks[0] == ks[1] && ks[1] == ks[2] {
        pass("echelon bases of ker d_(1,1), ker d_(1,2), ker d_(1,3) are equal in grades 0..=8")
    } else {
        fail("kernels differ")
    }
}

fn c4() -> Result<Outcome> {
    let mut cases = 0;
    for alg in [dual(), cubic(), poly(&["x"], 6)] {
        for p in a_and_residue(&alg) {
            let r = hol_acyclicity(&[1], &p, 3, alg.top(), false)?;
            if r.verdict != Verdict::Pass || !r.homotopy_defects.is_empty() {
                return fail(format!("{} over {}: {:?}", p.label(), alg.fingerprint(), r.homotopy_defects));
            }
            cases += 1;
        }
    }
    pass(format!("{cases} (A, P) cases, phi delta + delta phi = id at slots 0..=3 and H^n(Hol^1[P]) = 0"))
}

fn c5() -> Result<Outcome> {
    let mut checks = 0;
    for alg in [dual(), cubic(), split_pair()] {
        for q in probe_modules(&alg, &[])? {
            for k in 1..=3 {
                let s = split_check(&q, k, 0, VerificationSet::Auto)?;
                if s.diff_dim != s.d_dim + s.q_dim {
                    return fail(format!("Diff_{k}: {} != {} + {}", s.diff_dim, s.d_dim, s.q_dim));
                }
                checks += 1;
            }
        }
    }
    for alg in [dual(), cubic(), poly(&["x"], 6), poly(&["x", "y"], 3)] {
        let max = if alg.ngens() > 1 { 2 } else { 3 };
        for s in matrix(3, max) {
            let (hol, sum) = split_dims(&alg, &s)?;
            if hol != sum {
                return fail(format!("sigma {s:?}: {hol:?} against {sum:?}"));
            }
            checks += 1;
        }
    }
    pass(format!("{checks} dimension identities"))
}

fn c6() -> Result<Outcome> {
    let mut checks = 0;
    for alg in [dual(), cubic(), poly(&["x"], 5)] {
        for p in probe_modules(&alg, &[])? {
            for k in 0..=3 {
                jet_tensor_iso(&p, k)?.verify()?;
                let jk = jet_module(&p, k)?;
                for s in 0..=k {
                    let js = jet_module(&p, s)?;
                    if !jet_project(k, s, &p)?.compose(jk.j())?.same_as(js.j()) {
                        return fail(format!("pi_{k},{s} j_{k} != j_{s} on {}", p.label()));
                    }
                }
                checks += 1;
            }
        }
    }
    let mut ops = 0;
    for alg in [dual(), cubic()] {
        let probes = probe_modules(&alg, &[])?;
        for p in &probes {
            for q in &probes {
                for k in 0..=2 {
                    ops += check_jet_factorization(p, q, k, 0, VerificationSet::Auto)?.array_dim;
                }
            }
        }
    }
    pass(format!("{checks} jet isomorphisms and projection identities, {ops} basis operators factor uniquely"))
}

fn c7() -> Result<Outcome> {
    let alg = poly(&["x"], 8);
    let am = algebra_module(&alg);
    let mut checks = 0;
    for k in 1..=3usize {
        for l in 1..=(4 - k) {
            for shift in -((k + l) as i64)..=0 {
                let (r, d) = glue_rank(&am, k, l, shift, VerificationSet::Auto)?;
                if r != d {
                    return fail(format!("C_{k},{l} at shift {shift}: rank {r} of {d}"));
                }
                checks += 1;
            }
            let c = cojet_glue(k, l, &am)?;
            if !c.is_injective() {
                return fail(format!("c^{k},{l} is not injective"));
            }
            checks += 1;
        }
    }
    pass(format!("{checks} rank checks, C_(k,l) onto and c^(k,l) injective for k + l <= 4 at every grade"))
}

fn c8() -> Result<Outcome> {
    let alg = poly(&["x"], 8);
    let r = resolution_report(&alg, &[1], 1, 3, 2)?;
    for l in 1..=2 {
        let p = psi_map(&alg, &[1], 1, l, 3)?;
        if let Some(d) = p.defects.iter().find(|d| !d.is_zero()) {
            return fail(format!("psi_bar eps != 0 for l = {l} at {:?}", d.first_nonzero()));
        }
    }
    let exact = r.nodes.iter().all(|n| n.failing_grades.is_empty());
    let shifted_zero = r.shifts.iter().all(|&s| s < 0);
    if !(exact && r.rho_failures.is_empty() && r.chain_maps && shifted_zero) {
        return fail(format!("exact {exact}, rho failures {:?}, chain maps {}", r.rho_failures, r.chain_maps));
    }
    let unshifted = r.psi_zero_degree.iter().all(|(_, z)| *z);
    pass(format!(
        "{} nodes exact, rho onto, psi_bar eps = 0, psi^0 = 0 in the shifted grading (shifts {:?}); unshifted psi^0 is {} and zeroing it {} exactness",
        r.nodes.len(),
        r.shifts,
        if unshifted { "zero" } else { "the nonzero injection K -> J^1(K)" },
        if r.zero_degree_replaced_exact { "keeps" } else { "breaks" }
    ))
}

fn c9() -> Result<Outcome> {
    let mut checks = 0;
    let mut tuples = 0;
    for alg in [dual(), cubic(), split_pair()] {
        let probes = probe_modules(&alg, &[])?;
        for q in &probes {
            for k in 0..=3 {
                let g = diff_space(&probes[0], q, k, 0, VerificationSet::Generators)?;
                let b = diff_space(&probes[0], q, k, 0, VerificationSet::Basis)?;
                if g.array.space != b.array.space {
                    return fail(format!("Diff_{k}(A, {}) differs between tuple sets", q.label()));
                }
                checks += 1;
            }
            tuples += hol_homotopy(&[1], q, 3, false)?.check_closed_form()?;
        }
    }
    pass(format!("{checks} spaces agree under both tuple sets, closed form matches on {tuples} basis tuples"))
}

fn c10() -> Result<Outcome> {
    let mut runs = 0;
    let mut differing = 0;
    for alg in [dual(), cubic()] {
        for tau in matrix(3, 3) {
            let r = rigidity_report(&alg, &tau, &[1], 2, 0)?;
            if r.verdict != Verdict::Diagnostic {
                return fail(format!("verdict {:?} for a singular algebra", r.verdict));
            }
            differing += usize::from(r.mismatch.is_some());
            runs += 1;
        }
    }
    pass(format!("{runs} runs completed as DIAGNOSTIC, {differing} with tables differing from dR_1"))
}

type Criterion = (usize, &'static str, fn() -> Result<Outcome>, Duration);

fn main() {
    let criteria: [Criterion; 10] = [
        (1, "complex property", c1, Duration::from_secs(120)),
        (2, "rigidity", c2, Duration::from_secs(300)),
        (3, "kernel lemma", c3, Duration::from_secs(300)),
        (4, "trivializing homotopy", c4, Duration::from_secs(300)),
        (5, "split sequences", c5, Duration::from_secs(300)),
        (6, "jet identities", c6, Duration::from_secs(300)),
        (7, "smooth gluing", c7, Duration::from_secs(300)),
        (8, "resolution", c8, Duration::from_secs(300)),
        (9, "oracle equivalence", c9, Duration::from_secs(300)),
        (10, "non-smooth diagnostics", c10, Duration::from_secs(300)),
    ];
    let mut failed = 0;
    for (n, name, f, limit) in criteria {
        let start = Instant::now();
        let out = f();
        let took = start.elapsed();
        let (ok, detail) = match out {
            Ok(o) => (o.ok && took <= limit, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!ok);
        println!(
            "criterion {n:>2} {} {name}: {detail} [exact, {:.1}s of {}s]",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
