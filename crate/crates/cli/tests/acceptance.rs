//! Acceptance suite: one test per criterion, each printing a pass line.
//! Everything is exact rational arithmetic; no tolerances anywhere.

use gprojlab_core::field::FieldSpec;
use gprojlab_core::glue::{
    verify_recollement, verify_recollement_negative_control, ArrowGluing, GlueError,
    VertexGluing,
};
use gprojlab_core::gorenstein::{gorenstein_report, GorensteinVerdict};
use gprojlab_core::homalg::{
    decompose, default_bound, ext1_cocycle_oracle, ext_dim, is_isomorphic, proj_dim, syzygy,
    DimensionCertificate,
};
use gprojlab_core::quiver::{
    build_algebra, build_gluing, nakayama_cyclic, nakayama_linear, BoundAlgebra, CompVertex,
    GluingPlan, MonomialIdeal, Path, PlanStep, Quiver,
};
use gprojlab_core::rep::{direct_sum, random_module, simple};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::Arc;

const Q: FieldSpec = FieldSpec::Rationals;

fn s3() -> Arc<BoundAlgebra> {
    Arc::new(nakayama_cyclic(3, 2, Q).unwrap())
}

fn hereditary(n: usize) -> Arc<BoundAlgebra> {
    Arc::new(nakayama_linear(n, &[], Q).unwrap())
}

fn cyclic(n: usize, l: usize) -> Arc<BoundAlgebra> {
    Arc::new(nakayama_cyclic(n, l, Q).unwrap())
}

fn two_s3_vertex_glued() -> Arc<BoundAlgebra> {
    let g = VertexGluing::build(&s3(), 0, &s3(), 0).unwrap();
    g.algebra
}

fn two_loop_local() -> Arc<BoundAlgebra> {
    let quiver = Quiver::new(
        vec!["1".into()],
        vec![
            ("x".into(), "1".into(), "1".into()),
            ("y".into(), "1".into(), "1".into()),
        ],
    )
    .unwrap();
    let gens = [["x", "x"], ["x", "y"], ["y", "x"], ["y", "y"]]
        .iter()
        .map(|w| Path::from_labels(&quiver, w).unwrap())
        .collect();
    let ideal = MonomialIdeal::new(&quiver, gens).unwrap();
    Arc::new(build_algebra(quiver, ideal, Q).unwrap())
}

fn gd_of(a: &Arc<BoundAlgebra>) -> usize {
    gorenstein_report(a, default_bound(a), 0)
        .gd()
        .expect("algebra certifies Gorenstein")
}

#[test]
fn criterion_1_ext_oracle_equivalence() {
    let algebras: Vec<(&str, Arc<BoundAlgebra>)> = vec![
        ("hereditary A_2", hereditary(2)),
        ("selfinjective 3-cycle", s3()),
        ("two glued 3-cycles", two_s3_vertex_glued()),
    ];
    for (name, a) in &algebras {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for pair in 0..50 {
            let m = random_module(a, &mut rng, 12);
            let n = random_module(a, &mut rng, 12);
            let by_resolution = ext_dim(1, &m, &n, default_bound(a)).unwrap();
            let by_cocycles = ext1_cocycle_oracle(&m, &n);
            assert_eq!(
                by_resolution, by_cocycles,
                "{name}: pair {pair} disagrees"
            );
        }
    }
    println!("criterion 1 (Ext^1 oracle equivalence, 3 algebras x 50 pairs, exact): PASS");
}

#[test]
fn criterion_2_gorenstein_engine() {
    for (n, l) in [(3, 2), (2, 2), (4, 2), (2, 3), (3, 3)] {
        let a = cyclic(n, l);
        let report = gorenstein_report(&a, default_bound(&a), 0);
        assert_eq!(
            report.verdict,
            GorensteinVerdict::Gorenstein { gd: 0 },
            "cyclic({n},{l}) selfinjective"
        );
        assert!(report.reverify());
    }
    for n in 2..=5 {
        let a = hereditary(n);
        let report = gorenstein_report(&a, default_bound(&a), 0);
        assert_eq!(
            report.verdict,
            GorensteinVerdict::Gorenstein { gd: 1 },
            "hereditary A_{n}"
        );
        assert!(report.reverify());
    }
    let a = two_loop_local();
    let report = gorenstein_report(&a, default_bound(&a), 0);
    assert_eq!(report.verdict, GorensteinVerdict::NotGorenstein);
    assert!(report.reverify(), "infinite certificates re-verify");
    assert!(report
        .inj_dim_projectives
        .iter()
        .chain(&report.proj_dim_injectives)
        .any(DimensionCertificate::is_infinite));
    println!("criterion 2 (Gorenstein engine: gd 0 selfinjective, gd 1 hereditary, certified non-Gorenstein): PASS");
}

#[test]
fn criterion_3_arrow_gluing_gd() {
    // distinct component dimensions: Gd of the gluing equals the maximum
    let distinct: Vec<(Arc<BoundAlgebra>, Arc<BoundAlgebra>)> = vec![
        (hereditary(2), s3()),
        (s3(), hereditary(3)),
        (hereditary(4), cyclic(2, 2)),
        (cyclic(2, 3), hereditary(2)),
        (hereditary(5), cyclic(3, 2)),
    ];
    for (i, (src, tgt)) in distinct.iter().enumerate() {
        let (ga, gb) = (gd_of(src), gd_of(tgt));
        assert_ne!(ga, gb, "instance {i} needs distinct component dimensions");
        let ctx = ArrowGluing::build(src, 0, tgt, 0).unwrap();
        let glued_gd = gd_of(&ctx.algebra);
        assert_eq!(glued_gd, ga.max(gb), "instance {i}: Gd = max");
    }
    // equal component dimensions: Gd at most one more
    let equal: Vec<(Arc<BoundAlgebra>, Arc<BoundAlgebra>)> =
        vec![(s3(), cyclic(2, 2)), (hereditary(2), hereditary(3))];
    for (i, (src, tgt)) in equal.iter().enumerate() {
        let (ga, gb) = (gd_of(src), gd_of(tgt));
        assert_eq!(ga, gb, "instance {i} needs equal component dimensions");
        let ctx = ArrowGluing::build(src, 0, tgt, 0).unwrap();
        assert!(gd_of(&ctx.algebra) <= ga + 1, "instance {i}: Gd <= Gd + 1");
    }
    println!("criterion 3 (arrow gluings: Gd = max on 5 distinct pairs, Gd <= Gd+1 on equal pairs, exact): PASS");
}

#[test]
fn criterion_4_vertex_gluing_gd_at_most_one() {
    let pairs = [
        ((3, 2), (3, 2)),
        ((2, 2), (3, 2)),
        ((3, 3), (3, 2)),
        ((2, 3), (2, 2)),
        ((4, 2), (3, 2)),
    ];
    for (pa, pb) in pairs {
        let a = cyclic(pa.0, pa.1);
        let b = cyclic(pb.0, pb.1);
        assert_eq!(gd_of(&a), 0, "component {pa:?} selfinjective");
        assert_eq!(gd_of(&b), 0, "component {pb:?} selfinjective");
        let g = VertexGluing::build(&a, 0, &b, 0).unwrap();
        assert!(gd_of(&g.algebra) <= 1, "gluing {pa:?}+{pb:?}");
    }
    // m = 3 components at one common vertex
    let plan = GluingPlan {
        components: vec![
            ("X".into(), Arc::new(s3().with_prefixed_labels("X"))),
            ("Y".into(), Arc::new(s3().with_prefixed_labels("Y"))),
            ("Z".into(), Arc::new(cyclic(2, 2).with_prefixed_labels("Z"))),
        ],
        steps: vec![
            PlanStep::Identify {
                a: CompVertex { comp: 0, vertex: 0 },
                b: CompVertex { comp: 1, vertex: 0 },
            },
            PlanStep::Identify {
                a: CompVertex { comp: 0, vertex: 0 },
                b: CompVertex { comp: 2, vertex: 0 },
            },
        ],
    };
    let build = build_gluing(&plan).unwrap();
    assert!(gd_of(&build.algebra) <= 1, "threefold gluing");
    println!("criterion 4 (vertex gluings of selfinjective cyclic Nakayama: Gd <= 1 on 6 instances, exact): PASS");
}

#[test]
fn criterion_5_recollement_axioms() {
    let field = Arc::new(nakayama_linear(1, &[], Q).unwrap());
    let instances: Vec<(&str, ArrowGluing)> = vec![
        ("k -> k", ArrowGluing::build(&field, 0, &field, 0).unwrap()),
        ("S_3 -> S_3", ArrowGluing::build(&s3(), 0, &s3(), 0).unwrap()),
        (
            "A_2 -> cyclic(2,2)",
            ArrowGluing::build(&hereditary(2), 0, &cyclic(2, 2), 0).unwrap(),
        ),
    ];
    for (name, ctx) in &instances {
        let witness = verify_recollement(ctx, 20, 0)
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(witness.sample_size, 20);
        assert!(witness.records.len() >= 20 * 8, "{name}: full check coverage");
    }
    // negative control: corrupted j_! must fail with a localized witness
    let err = verify_recollement_negative_control(&instances[1].1, 20, 0).unwrap_err();
    match err {
        GlueError::CheckFailed { check, sample, detail } => {
            assert!(check.contains("j_!"), "check names the corrupted functor");
            assert!(detail.contains("dimensions") || detail.contains("dims"));
            let _ = sample;
        }
        other => panic!("unexpected failure shape: {other:?}"),
    }
    println!("criterion 5 (recollement axioms on 3 arrow gluings, sample 20 seed 0; negative control localized): PASS");
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn run_cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gprojlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_6_gproj_decomposition() {
    let cases = [
        ("two_cycles_vertex.quiv", vec![3usize, 3]),
        ("three_cycles_vertex.quiv", vec![3, 3, 3]),
        ("glued_pair_bridge.quiv", vec![3, 3, 3, 3]),
    ];
    for (file, blocks) in &cases {
        let out = run_cli(&[
            "verify",
            fixture(file).to_str().unwrap(),
            "--check",
            "decomposition",
        ]);
        assert_eq!(out.status.code(), Some(0), "{file} verification exits 0");
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(doc["verdicts"][0]["pass"], true, "{file}");
        let got: Vec<usize> = doc["verdicts"][0]["blocks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_u64().unwrap() as usize)
            .collect();
        assert_eq!(&got, blocks, "{file} block sizes");
        assert_eq!(
            doc["certificates"]["decomposition"]["complete"], true,
            "{file} completeness certified"
        );
    }
    println!("criterion 6 (stable Gproj decomposition: m=2, m=3, and the composite with a connecting arrow; blockwise exact): PASS");
}

#[test]
fn criterion_7_cluster_tilted_type_a() {
    let cases = [
        ("ct_t1.quiv", 1usize),
        ("two_cycles_vertex.quiv", 2),
        ("ct_t3_chain.quiv", 3),
    ];
    for (file, t) in &cases {
        let out = run_cli(&[
            "ct-a",
            fixture(file).to_str().unwrap(),
            "--triangles",
            &t.to_string(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{file} exits 0");
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        let verdict = &doc["verdicts"][0];
        assert_eq!(verdict["pass"], true, "{file}");
        assert_eq!(verdict["objects"].as_u64().unwrap() as usize, 3 * t, "{file}");
        assert!(verdict["gd"].as_u64().unwrap() <= 1, "{file}");
    }
    println!("criterion 7 (cluster-tilted type A: 3t objects in t blocks matching the 3-cycle table, Gd <= 1, t = 1,2,3): PASS");
}

#[test]
fn criterion_8_homalg_self_consistency() {
    // thirty seeded samples spread over three algebras
    let algebras = [s3(), hereditary(3), two_s3_vertex_glued()];
    let mut shift_checked = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    'outer: for round in 0.. {
        for a in &algebras {
            let m = random_module(a, &mut rng, 10);
            let n = random_module(a, &mut rng, 10);
            let om = syzygy(&m);
            for k in 1..=2usize {
                let lhs = ext_dim(k + 1, &m, &n, 16).unwrap();
                let rhs = ext_dim(k, &om, &n, 16).unwrap();
                assert_eq!(lhs, rhs, "dimension shift k={k} round {round}");
            }
            shift_checked += 1;
            if shift_checked >= 30 {
                break 'outer;
            }
        }
    }

    // decomposition reassembly on thirty samples
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut reassembled = 0;
    'outer2: for _ in 0.. {
        for a in &algebras {
            let m = random_module(a, &mut rng, 10);
            if m.is_zero_module() {
                continue;
            }
            let parts = decompose(&m, 0).unwrap();
            let (sum, _, _) = direct_sum(&parts);
            assert!(
                is_isomorphic(&sum, &m, 0).is_iso(),
                "reassembly isomorphism"
            );
            reassembled += 1;
            if reassembled >= 30 {
                break 'outer2;
            }
        }
    }

    // infinite-pd witnesses re-verify under the independent isomorphism test
    let mut infinite_seen = 0;
    for v in 0..3 {
        let cert = proj_dim(&simple(&s3(), v), 28, 0);
        if let DimensionCertificate::Infinite { witness, .. } = &cert {
            assert!(cert.reverify());
            assert!(is_isomorphic(witness.source(), witness.target(), 0).is_iso());
            infinite_seen += 1;
        }
    }
    let cert = proj_dim(&simple(&two_loop_local(), 0), 16, 0);
    assert!(cert.is_infinite());
    assert!(cert.reverify());
    infinite_seen += 1;
    assert!(infinite_seen >= 4);
    println!("criterion 8 (dimension shift on 30 samples, decompose reassembly on 30 samples, infinite-pd witnesses re-verified): PASS");
}

#[test]
fn criterion_9_determinism() {
    // identical configurations must produce byte-identical JSON evidence
    let dir = std::env::temp_dir().join("gprojlab_determinism");
    std::fs::create_dir_all(&dir).unwrap();
    let cli_cases: Vec<Vec<&str>> = vec![
        vec!["analyze", "s3.quiv"],
        vec!["analyze", "two_loops.quiv"],
        vec!["gproj", "s3.quiv"],
        vec!["verify", "two_cycles_vertex.quiv", "--check", "decomposition"],
        vec!["verify", "arrow_two_s3.quiv", "--check", "recollement"],
        vec!["verify", "arrow_two_s3.quiv", "--check", "defect-hypothesis"],
        vec!["verify", "glued_pair_bridge.quiv", "--check", "gd-bounds"],
        vec!["ct-a", "ct_t3_chain.quiv"],
    ];
    for (i, case) in cli_cases.iter().enumerate() {
        let mut outputs = Vec::new();
        for run in 0..2 {
            let path = dir.join(format!("case{i}_run{run}.json"));
            let file = fixture(case[1]);
            let mut args: Vec<String> = vec![case[0].into(), file.display().to_string()];
            args.extend(case[2..].iter().map(|s| s.to_string()));
            args.push("--out".into());
            args.push(path.display().to_string());
            let out = Command::new(env!("CARGO_BIN_EXE_gprojlab"))
                .args(&args)
                .output()
                .unwrap();
            assert!(
                out.status.code().is_some(),
                "case {i} run {run} terminated"
            );
            outputs.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(outputs[0], outputs[1], "case {i} is byte-identical");
        assert!(!outputs[0].is_empty());
    }

    // library-level evidence built twice from scratch agrees byte for byte
    let build_evidence = || {
        let a = two_s3_vertex_glued();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut rows = Vec::new();
        for _ in 0..10 {
            let m = random_module(&a, &mut rng, 10);
            let n = random_module(&a, &mut rng, 10);
            rows.push(json!({
                "m": m.dims(),
                "n": n.dims(),
                "ext1": ext_dim(1, &m, &n, 16).unwrap(),
                "oracle": ext1_cocycle_oracle(&m, &n),
            }));
        }
        gprojlab_core::qspec::to_json_string(&json!({ "pairs": rows }))
    };
    assert_eq!(build_evidence(), build_evidence());
    println!("criterion 9 (identical run configurations give byte-identical JSON evidence): PASS");
}
