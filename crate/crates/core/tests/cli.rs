use std::path::PathBuf;

use clap::Parser;
use proptest::prelude::*;

use jetforge::algebra::{AlgebraSpec, Presentation};
use jetforge::cli::*;
use jetforge::derham::Verdict;
use jetforge::error::JetError;

fn docs(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/specs").join(name)
}

fn spec_for(src: &str, command: Command) -> RunSpec {
    let mut s = parse_spec_str(src).unwrap();
    s.command = command;
    s
}

const LINE: &str = "ring = Q[x]\ntruncation = 6\n";
const DUAL: &str = "kind = finite_dimensional\nbasis = [1, e]\nproducts = [e*e = 0]\n";

#[test]
fn minimal_spec_gets_defaults() {
    let s = parse_spec_str("# the affine line\nring = Q[x]   # one variable\ntruncation = 4\nsigma = 1\n").unwrap();
    assert_eq!(s.algebra, AlgebraSpec::polynomial(&["x"], 4));
    assert_eq!(s.command, Command::Cohomology);
    assert_eq!(s.sigma, vec![1]);
    assert_eq!(s.tau(), &[1]);
    assert_eq!((s.n_max, s.grade_max(), s.k, s.l_max), (2, 4, 1, 2));
    assert!(!s.paranoid && !s.general);
    assert_eq!(s.format, Format::Json);
}

#[test]
fn canonical_files_parse() {
    for f in ["line.spec", "plane.spec", "dual_numbers.spec"] {
        let s = parse_spec(&docs(f)).unwrap();
        assert_eq!(parse_spec_str(&s.to_spec_string()).unwrap(), s, "{f}");
    }
    let d = parse_spec(&docs("dual_numbers.spec")).unwrap();
    assert!(matches!(d.algebra.presentation, Presentation::StructureConstants { .. }));
}

#[test]
fn validation_errors() {
    let e = parse_spec_str("ring = Q[x]\ntruncation = 4\nsigma = 2,0,1\n").unwrap_err();
    assert!(matches!(e, JetError::ValidationError(ref m) if m.contains("positive")), "{e}");
    let e = parse_spec_str("ring = Q[x]\ntruncation = 4\ngrade_max = 7\n").unwrap_err();
    assert!(matches!(e, JetError::ValidationError(ref m) if m.contains("grade_max <= truncation = 4")), "{e}");
    assert!(matches!(parse_spec_str(&format!("{DUAL}grade_max = 1\n")), Err(JetError::ValidationError(_))));
    assert!(matches!(parse_spec_str("truncation = 3\n"), Err(JetError::ValidationError(_))));
}

#[test]
fn parse_errors_carry_positions() {
    let cases: [(&str, usize, usize); 6] = [
        ("ring = Q[x]\ntruncation 4\n", 2, 1),
        ("ring = Q[x]\n  colour = red\n", 2, 3),
        ("ring = Q[x]\ntruncation = four\n", 2, 14),
        ("ring = Q[x, 2y]\ntruncation = 3\n", 1, 13),
        ("ring = Q[x]\ntruncation = 3\nsigma = 1, a\n", 3, 12),
        ("ring = Q[x]\ntruncation = 3\ntruncation = 4\n", 3, 1),
    ];
    for (src, line, column) in cases {
        match parse_spec_str(src) {
            Err(JetError::ParseError { line: l, column: c, .. }) => assert_eq!((l, c), (line, column), "{src:?}"),
            other => panic!("{src:?}: {other:?}"),
        }
    }
}

#[test]
fn cohomology_of_the_line() {
    let r = run(&spec_for(LINE, Command::Cohomology)).unwrap();
    let t = &r.tables["dR_sigma"];
    for (k, v) in t {
        assert_eq!(*v, u64::from(k == "H[0][0]"), "{k}");
    }
    assert_eq!(t.len(), 3 * 7);
    assert_eq!(r.verdicts["complex"], Verdict::Pass);
}

#[test]
fn rigidity_pass_report() {
    let mut s = spec_for(LINE, Command::Rigidity);
    s.tau = Some(vec![2, 1]);
    s.sigma = vec![1, 1];
    let r = run(&s).unwrap();
    assert_eq!(r.verdicts["rigidity"], Verdict::Pass);
    let json = r.render(Format::Json).unwrap();
    assert!(json.contains("\"rigidity\": \"pass\""));
    assert!(json.contains("\"H[1][0]\": 0"));
    assert!(r.witnesses.is_empty());
}

#[test]
fn dual_numbers_acyclicity_and_diagnostics() {
    let mut s = spec_for(DUAL, Command::HolAcyclicity);
    s.paranoid = true;
    let r = run(&s).unwrap();
    assert_eq!(r.verdicts["acyclicity"], Verdict::Pass);
    assert_eq!(r.verdicts["closed_form"], Verdict::Pass);
    let q = run(&RunSpec { module: ModuleChoice::Quotient(vec!["e".into()]), ..s.clone() }).unwrap();
    assert_eq!(q.verdicts["acyclicity"], Verdict::Pass);
    assert_eq!(q.meta["module"], "A/(e)");

    let r = run(&spec_for(DUAL, Command::Rigidity)).unwrap();
    assert_eq!(r.verdicts["rigidity"], Verdict::Diagnostic);
    assert_eq!(r.overall(), Verdict::Diagnostic);
}

#[test]
fn general_tau_without_homotopy_is_diagnostic() {
    let mut s = spec_for(DUAL, Command::HolAcyclicity);
    s.tau = Some(vec![2, 1]);
    assert!(run(&s).is_err());
    s.general = true;
    let r = run(&s).unwrap();
    assert_eq!(r.verdicts["acyclicity"], Verdict::Diagnostic);
    assert!(r.tables["Hol"].contains_key("H[0][0]"));
}

#[test]
fn failures_carry_witnesses() {
    let mut r = Report::new(Default::default());
    r.verdicts.insert("rigidity".into(), Verdict::Fail);
    r.witnesses.push(Witness::new("rigidity", &[("n", 1), ("grade", 3)], "dim H^1 is 1 for tau and 0 for sigma"));
    assert_eq!(r.overall(), Verdict::Fail);
    let v: serde_json::Value = serde_json::from_str(&r.render(Format::Json).unwrap()).unwrap();
    assert_eq!(v["verdicts"]["rigidity"], "fail");
    assert_eq!(v["witnesses"][0]["coords"]["grade"], 3);
    let csv = r.render(Format::Csv).unwrap();
    assert!(csv.contains("witness,rigidity,grade=3;n=1,"));
}

#[test]
fn resolution_and_diff_dims() {
    let mut s = spec_for(LINE, Command::ResolutionCheck);
    s.n_max = 3;
    let r = run(&s).unwrap();
    assert_eq!(r.verdicts["resolution"], Verdict::Pass);
    assert_eq!(r.meta["shifts"], "-1,-2,-3");
    let mut s = spec_for(DUAL, Command::DiffDims);
    s.k = 2;
    s.paranoid = true;
    let r = run(&s).unwrap();
    assert_eq!(r.tables["Diff"]["Diff[1][0]"], 3);
    assert_eq!(r.tables["Diff"]["Diff[2][0]"], 4);
    assert_eq!(r.verdicts["split"], Verdict::Pass);
    assert_eq!(r.verdicts["paranoid_agreement"], Verdict::Pass);
}

#[test]
fn empty_report_is_a_valid_document() {
    let r = Report::new(Default::default());
    let v: serde_json::Value = serde_json::from_str(&r.render(Format::Json).unwrap()).unwrap();
    assert_eq!(v["schema"], SCHEMA);
    assert!(v["tables"].as_object().unwrap().is_empty());
    let csv = r.render(Format::Csv).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert!(r.render(Format::Text).unwrap().starts_with(SCHEMA));
}

#[test]
fn output_is_deterministic_and_cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::open(&dir.path().join("cache")).unwrap();
    let mut s = spec_for(LINE, Command::Rigidity);
    s.tau = Some(vec![3, 2]);
    let cold = run(&s).unwrap();
    let (first, hit1) = run_cached(&s, Some(&cache)).unwrap();
    let (second, hit2) = run_cached(&s, Some(&cache)).unwrap();
    assert!(!hit1 && hit2);
    for f in [Format::Json, Format::Csv, Format::Text] {
        let c = cold.render(f).unwrap();
        assert_eq!(c, first.render(f).unwrap());
        assert_eq!(c, second.render(f).unwrap());
        assert_eq!(c, run(&s).unwrap().render(f).unwrap());
    }
    // output location does not change the key
    let mut moved = s.clone();
    moved.out = Some(dir.path().join("elsewhere"));
    moved.format = Format::Csv;
    assert_eq!(Cache::key(&moved), Cache::key(&s));
    let mut other = s.clone();
    other.n_max = 1;
    assert_ne!(Cache::key(&other), Cache::key(&s));
}

#[test]
fn args_override_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let a = Args::try_parse_from([
        "jetforge",
        "rigidity",
        "--algebra",
        docs("line.spec").to_str().unwrap(),
        "--sigma",
        "1,1",
        "--tau",
        "2,1",
        "--grade-max",
        "6",
        "--out",
        out.to_str().unwrap(),
        "--format",
        "csv",
    ])
    .unwrap();
    let s = a.resolve().unwrap();
    assert_eq!((s.command, s.sigma.clone(), s.tau().to_vec(), s.grade_max()), (Command::Rigidity, vec![1, 1], vec![2, 1], 6));
    let o = execute(&a).unwrap();
    assert_eq!(o.written.as_deref(), Some(out.join("report.csv").as_path()));
    assert_eq!(std::fs::read_to_string(out.join("report.csv")).unwrap(), o.rendered);
    assert_eq!(o.report.verdicts["rigidity"], Verdict::Pass);
    let bad = Args::try_parse_from(["jetforge", "rigidity", "--algebra", "x.spec", "--sigma", "1,-1"]);
    assert!(bad.is_err());
}

fn names() -> impl Strategy<Value = Vec<String>> {
    prop::sample::subsequence(vec!["x", "y", "z", "t_1"], 1..=3).prop_map(|v| v.into_iter().map(String::from).collect())
}

fn run_spec() -> impl Strategy<Value = RunSpec> {
    let graded = (names(), 0usize..6, prop::collection::vec(prop::sample::select(vec!["x^2", "x*y - y^2", "-2*x^3 + 1/2*x^3"]), 0..3))
        .prop_map(|(g, t, r)| {
            let rel: Vec<String> = r.into_iter().map(String::from).collect();
            AlgebraSpec {
                presentation: Presentation::Graded { generators: g, relations: rel, truncation: t },
                assert_smooth: false,
            }
        });
    let finite = prop::sample::select(vec![0usize, 1]).prop_map(|i| {
        if i == 0 {
            AlgebraSpec::structure_constants(&["1", "e"], &["e*e = 0"])
        } else {
            let mut s = AlgebraSpec::structure_constants(&["1", "x", "x2"], &["x*x = x2", "x*x2 = 0", "x2*x2 = 0"]);
            if let Presentation::StructureConstants { generators, .. } = &mut s.presentation {
                generators.push("x".into());
            }
            s
        }
    });
    let alg = prop_oneof![graded, finite];
    let seqs = (prop::collection::vec(1u32..4, 1..4), prop::option::of(prop::collection::vec(1u32..4, 1..4)));
    let nums = (0usize..4, any::<bool>(), 1usize..4, 0u32..4);
    let flags = (any::<bool>(), any::<bool>(), any::<bool>(), prop::sample::select(Command::ALL.to_vec()));
    let outs = (
        prop::option::of(prop::sample::select(vec!["out", "runs/a b", "/tmp/x"])),
        prop::sample::select(vec![Format::Json, Format::Csv, Format::Text]),
        prop::option::of(prop::collection::vec(prop::sample::select(vec!["x", "x^2", "e"]), 1..3)),
    );
    (alg, seqs, nums, flags, outs).prop_map(|(mut algebra, (sigma, tau), (n_max, gm, k, l_max), (smooth, paranoid, general, command), (out, format, module))| {
        algebra.assert_smooth = smooth;
        let mut s = RunSpec::new(algebra);
        let top = s.window_top();
        s.command = command;
        s.sigma = sigma;
        s.tau = tau;
        s.n_max = n_max;
        s.grade_max = gm.then_some(top / 2);
        s.k = k;
        s.l_max = l_max;
        s.paranoid = paranoid;
        s.general = general;
        s.module = match module {
            Some(v) => ModuleChoice::Quotient(v.into_iter().map(String::from).collect()),
            None => ModuleChoice::Algebra,
        };
        s.out = out.map(PathBuf::from);
        s.format = format;
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn spec_round_trip(s in run_spec()) {
        prop_assert_eq!(parse_spec_str(&s.to_spec_string()).unwrap(), s);
    }
}
