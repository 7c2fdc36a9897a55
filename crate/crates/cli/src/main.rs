//! `gprojlab`: analyze the Gorenstein homological structure of bound quiver
//! algebras given as `.quiv` files, and verify the gluing theorems on them.

use clap::{Args, Parser, Subcommand, ValueEnum};
use gprojlab_core::field::FieldSpec;
use gprojlab_core::glue::{
    check_defect_hypothesis, gd_bound_check, verify_gproj_decomposition, verify_recollement,
    verify_recollement_negative_control, ArrowGluing, GlueError,
};
use gprojlab_core::gorenstein::{
    gorenstein_report, gproj_indecomposables, omega_stable_orbits, stable_table,
    GorensteinVerdict,
};
use gprojlab_core::homalg::{default_bound, DimensionCertificate};
use gprojlab_core::qspec::{self, ParseOutcome};
use gprojlab_core::quiver::{BoundAlgebra, GluingBuild, StepKind};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

const EXIT_OK: u8 = 0;
const EXIT_INPUT: u8 = 1;
const EXIT_UNDETERMINED: u8 = 2;
const EXIT_VERIFY_FAILED: u8 = 3;

#[derive(Parser)]
#[command(
    name = "gprojlab",
    about = "Gorenstein-projective analysis of bound quiver algebras",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gorenstein report: injective dimensions of projectives and projective
    /// dimensions of injectives, with certificates.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Enumerate nonprojective indecomposable Gorenstein projectives with the
    /// stable Hom table and syzygy orbits.
    Gproj {
        file: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Verify a structural theorem on a glued algebra.
    Verify {
        file: PathBuf,
        /// Which verification to run.
        #[arg(long, value_enum)]
        check: CheckKind,
        /// Run against a deliberately corrupted functor; the verification is
        /// expected to fail and exercises the counterexample reporting.
        #[arg(long)]
        negative_control: bool,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Cluster-tilted type A: check that the stable category decomposes into
    /// one block per triangle.
    CtA {
        file: PathBuf,
        /// Expected triangle count (defaults to counting cyclic components).
        #[arg(long)]
        triangles: Option<usize>,
        #[command(flatten)]
        opts: CommonOpts,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Recollement,
    Decomposition,
    GdBounds,
    DefectHypothesis,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Args)]
struct CommonOpts {
    /// Resolution bound; defaults to GPROJLAB_BOUND or 4*dim+4.
    #[arg(long)]
    bound: Option<usize>,
    /// Seed for all randomized steps.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Ground field: `rat` or a prime p.
    #[arg(long, default_value = "rat")]
    field: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Sample size for sampled verifications.
    #[arg(long, default_value_t = 20)]
    sample: usize,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_INPUT
        }
    };
    ExitCode::from(code)
}

struct Loaded {
    outcome: ParseOutcome,
    bound: usize,
    config: Value,
}

fn parse_field(text: &str) -> Result<FieldSpec, String> {
    match text {
        "rat" => Ok(FieldSpec::Rationals),
        other => {
            let p: u64 = other
                .parse()
                .map_err(|_| format!("--field takes `rat` or a prime, got `{other}`"))?;
            if p < 2 || (2..).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
                return Err(format!("{p} is not prime"));
            }
            Ok(FieldSpec::Prime(p))
        }
    }
}

fn load(file: &PathBuf, opts: &CommonOpts, command: &str, extra: Value) -> Result<Loaded, String> {
    let field = parse_field(&opts.field)?;
    let text = std::fs::read_to_string(file)
        .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    let outcome = qspec::parse_algebra(&text, field)
        .map_err(|e| format!("{}:{e}", file.display()))?;
    let bound = opts
        .bound
        .or_else(|| {
            std::env::var("GPROJLAB_BOUND")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or_else(|| default_bound(outcome.source.algebra()));
    let mut config = json!({
        "command": command,
        "input": file.display().to_string(),
        "bound": bound,
        "seed": opts.seed,
        "field": field.name(),
        "format": match opts.format { Format::Json => "json", Format::Md => "md" },
        "sample": opts.sample,
    });
    if let Value::Object(extra_map) = extra {
        let obj = config.as_object_mut().unwrap();
        for (k, v) in extra_map {
            obj.insert(k, v);
        }
    }
    Ok(Loaded {
        outcome,
        bound,
        config,
    })
}

fn emit(doc: &Value, opts: &CommonOpts) -> Result<(), String> {
    let rendered = match opts.format {
        Format::Json => qspec::to_json_string(doc),
        Format::Md => qspec::to_markdown(doc),
    };
    match &opts.out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Analyze { file, opts } => cmd_analyze(&file, &opts),
        Command::Gproj { file, opts } => cmd_gproj(&file, &opts),
        Command::Verify {
            file,
            check,
            negative_control,
            opts,
        } => cmd_verify(&file, check, negative_control, &opts),
        Command::CtA {
            file,
            triangles,
            opts,
        } => cmd_ct_a(&file, triangles, &opts),
    }
}

fn cmd_analyze(file: &PathBuf, opts: &CommonOpts) -> Result<u8, String> {
    let loaded = load(file, opts, "analyze", json!({}))?;
    let algebra = loaded.outcome.source.algebra();
    let report = gorenstein_report(algebra, loaded.bound, opts.seed);
    let verdict_entry = match &report.verdict {
        GorensteinVerdict::Gorenstein { gd } => {
            json!({ "check": "gorenstein", "pass": true, "gd": gd })
        }
        GorensteinVerdict::NotGorenstein => json!({ "check": "gorenstein", "pass": false }),
        GorensteinVerdict::Unknown { bound } => {
            json!({ "check": "gorenstein", "pass": Value::Null, "unknown_at_bound": bound })
        }
    };
    let doc = qspec::report_document(
        loaded.config,
        qspec::algebra_summary(algebra, loaded.outcome.source.gluing()),
        json!({ "gorenstein": qspec::gorenstein_value(&report, algebra) }),
        json!({}),
        json!([verdict_entry]),
    );
    emit(&doc, opts)?;
    Ok(match report.verdict {
        GorensteinVerdict::Unknown { .. } => EXIT_UNDETERMINED,
        _ => EXIT_OK,
    })
}

fn cmd_gproj(file: &PathBuf, opts: &CommonOpts) -> Result<u8, String> {
    let loaded = load(file, opts, "gproj", json!({}))?;
    let algebra = loaded.outcome.source.algebra();
    let report = gorenstein_report(algebra, loaded.bound, opts.seed);
    match report.verdict {
        GorensteinVerdict::Gorenstein { .. } => {}
        GorensteinVerdict::NotGorenstein => {
            return Err("algebra is certified non-Gorenstein; Gorenstein-projective enumeration needs a Gorenstein certificate".into())
        }
        GorensteinVerdict::Unknown { bound } => {
            eprintln!("Gorenstein status unknown at bound {bound}");
            return Ok(EXIT_UNDETERMINED);
        }
    }
    let enumeration = gproj_indecomposables(algebra, &report, opts.seed)
        .map_err(|e| e.to_string())?;
    let table = stable_table(&enumeration.modules);
    let orbits = omega_stable_orbits(&enumeration.modules, opts.seed)
        .map_err(|e| e.to_string())?;
    let modules_value: Vec<Value> = enumeration
        .modules
        .iter()
        .map(|m| {
            json!({
                "label": gprojlab_core::gorenstein::describe_module(m),
                "dims": m.dims(),
            })
        })
        .collect();
    let doc = qspec::report_document(
        loaded.config,
        qspec::algebra_summary(algebra, loaded.outcome.source.gluing()),
        json!({ "gorenstein": qspec::gorenstein_value(&report, algebra) }),
        json!({
            "gproj_nonprojective_indecomposables": modules_value,
            "stable_hom": qspec::stable_table_value(&table),
            "omega_orbits": orbits,
        }),
        json!([{
            "check": "gproj enumeration",
            "pass": true,
            "count": enumeration.modules.len(),
            "complete": enumeration.complete,
        }]),
    );
    emit(&doc, opts)?;
    Ok(EXIT_OK)
}

/// The arrow-connected context of the final gluing step, when there is one.
fn final_arrow_context(build: &GluingBuild) -> Option<ArrowGluing> {
    let step = build.steps.last()?;
    let StepKind::Arrow {
        arrow,
        new_comp_is_source,
    } = step.kind
    else {
        return None;
    };
    let before = step.before.clone()?;
    let comp_alg: Arc<BoundAlgebra> = build.components[step.comp].1.clone();
    let prev_map = step.prev_map.clone()?;
    Some(if new_comp_is_source {
        ArrowGluing::from_parts(
            step.after.clone(),
            before,
            comp_alg,
            prev_map,
            step.comp_map.clone(),
            arrow,
        )
    } else {
        ArrowGluing::from_parts(
            step.after.clone(),
            comp_alg,
            before,
            step.comp_map.clone(),
            prev_map,
            arrow,
        )
    })
}

fn verify_error_exit(e: &GlueError) -> u8 {
    match e {
        GlueError::CheckFailed { .. } => EXIT_VERIFY_FAILED,
        GlueError::GluedNotCertified => EXIT_UNDETERMINED,
        _ => EXIT_INPUT,
    }
}

fn cmd_verify(
    file: &PathBuf,
    check: CheckKind,
    negative_control: bool,
    opts: &CommonOpts,
) -> Result<u8, String> {
    let which = match check {
        CheckKind::Recollement => "recollement",
        CheckKind::Decomposition => "decomposition",
        CheckKind::GdBounds => "gd-bounds",
        CheckKind::DefectHypothesis => "defect-hypothesis",
    };
    let loaded = load(
        file,
        opts,
        "verify",
        json!({ "check": which, "negative_control": negative_control }),
    )?;
    let algebra = loaded.outcome.source.algebra().clone();
    let Some(build) = loaded.outcome.source.gluing() else {
        return Err("verification targets a gluing; give a `glue { ... }` spec".into());
    };
    if negative_control && check != CheckKind::Recollement {
        return Err("--negative-control applies to the recollement check".into());
    }

    let summary = qspec::algebra_summary(&algebra, Some(build));
    let (verdict, certificates, tables, exit) = match check {
        CheckKind::Recollement => {
            let ctx = final_arrow_context(build).ok_or(
                "recollement verification needs the final gluing step to be a `connect`",
            )?;
            let outcome = if negative_control {
                verify_recollement_negative_control(&ctx, opts.sample, opts.seed)
            } else {
                verify_recollement(&ctx, opts.sample, opts.seed)
            };
            match outcome {
                Ok(witness) => (
                    json!([{ "check": "recollement axioms", "pass": true }]),
                    json!({ "recollement": qspec::recollement_value(&witness) }),
                    json!({}),
                    EXIT_OK,
                ),
                Err(e) => (
                    json!([{ "check": "recollement axioms", "pass": false, "counterexample": e.to_string() }]),
                    json!({}),
                    json!({}),
                    verify_error_exit(&e),
                ),
            }
        }
        CheckKind::Decomposition => match verify_gproj_decomposition(build, loaded.bound, opts.seed) {
            Ok(ev) => (
                json!([{
                    "check": "stable Gproj decomposition",
                    "pass": true,
                    "blocks": ev.block_sizes,
                    "total_objects": ev.total_objects,
                }]),
                json!({ "decomposition": qspec::decomposition_value(&ev) }),
                json!({ "union_stable_table": qspec::stable_table_value(&ev.union_table) }),
                EXIT_OK,
            ),
            Err(e) => (
                json!([{ "check": "stable Gproj decomposition", "pass": false, "counterexample": e.to_string() }]),
                json!({}),
                json!({}),
                verify_error_exit(&e),
            ),
        },
        CheckKind::GdBounds => match gd_bound_check(build, loaded.bound, opts.seed) {
            Ok(records) => (
                json!([{ "check": "Gd bounds per gluing step", "pass": true, "steps": records.len() }]),
                json!({ "gd_bounds": qspec::gd_records_value(&records) }),
                json!({}),
                EXIT_OK,
            ),
            Err(e) => (
                json!([{ "check": "Gd bounds per gluing step", "pass": false, "counterexample": e.to_string() }]),
                json!({}),
                json!({}),
                verify_error_exit(&e),
            ),
        },
        CheckKind::DefectHypothesis => {
            let ctx = final_arrow_context(build).ok_or(
                "the defect hypothesis concerns arrow gluings; the final step must be a `connect`",
            )?;
            let cert = check_defect_hypothesis(&ctx, loaded.bound, opts.seed);
            let holds = matches!(cert, DimensionCertificate::Finite(_));
            let exit = if cert.is_undetermined() {
                EXIT_UNDETERMINED
            } else if holds {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            };
            (
                json!([{
                    "check": "pd over the source side of Hom(M, A) is finite",
                    "pass": if cert.is_undetermined() { Value::Null } else { json!(holds) },
                }]),
                json!({ "defect_hypothesis": qspec::certificate_value(&cert) }),
                json!({}),
                exit,
            )
        }
    };
    let doc = qspec::report_document(loaded.config, summary, certificates, tables, verdict);
    emit(&doc, opts)?;
    Ok(exit)
}

/// Structural test for the rad-square-zero oriented 3-cycle.
fn is_triangle(a: &BoundAlgebra) -> bool {
    a.quiver().vertex_count() == 3
        && a.quiver().arrow_count() == 3
        && a.is_nakayama()
        && a.quiver().is_connected()
        && a.max_path_length() == 1
        && a.dimension() == 6
}

/// Linear hereditary piece (type I Nakayama without relations).
fn is_linear_piece(a: &BoundAlgebra) -> bool {
    a.is_nakayama() && a.ideal().generators().is_empty() && {
        // a line has one fewer arrow than vertices; a cycle has as many
        a.quiver().arrow_count() + 1 == a.quiver().vertex_count()
    }
}

fn cmd_ct_a(file: &PathBuf, triangles: Option<usize>, opts: &CommonOpts) -> Result<u8, String> {
    let loaded = load(file, opts, "ct-a", json!({ "triangles": triangles }))?;
    let Some(build) = loaded.outcome.source.gluing() else {
        return Err("ct-a takes a gluing of 3-cycles and linear pieces; single algebras can be wrapped in `glue { comp T = ...; }`".into());
    };
    let mut triangle_comps = Vec::new();
    for (idx, (name, alg)) in build.components.iter().enumerate() {
        if is_triangle(alg) {
            triangle_comps.push(idx);
        } else if !is_linear_piece(alg) {
            return Err(format!(
                "component `{name}` is neither a rad-square-zero 3-cycle nor a hereditary linear piece"
            ));
        }
    }
    let t = triangle_comps.len();
    if let Some(expected) = triangles {
        if expected != t {
            return Err(format!(
                "spec declares {expected} triangles but the gluing has {t}"
            ));
        }
    }

    let algebra = loaded.outcome.source.algebra().clone();
    let summary = qspec::algebra_summary(&algebra, Some(build));
    let ev = match verify_gproj_decomposition(build, loaded.bound, opts.seed) {
        Ok(ev) => ev,
        Err(e) => {
            let doc = qspec::report_document(
                loaded.config,
                summary,
                json!({}),
                json!({}),
                json!([{ "check": "cluster-tilted type A decomposition", "pass": false, "counterexample": e.to_string() }]),
            );
            emit(&doc, opts)?;
            return Ok(verify_error_exit(&e));
        }
    };

    // the reference block: the stable table of the rad-square-zero 3-cycle
    let s3 = Arc::new(
        gprojlab_core::quiver::nakayama_cyclic(3, 2, algebra.field())
            .expect("reference triangle builds"),
    );
    let s3_report = gorenstein_report(&s3, loaded.bound, opts.seed);
    let s3_enum = gproj_indecomposables(&s3, &s3_report, opts.seed).map_err(|e| e.to_string())?;
    let s3_table = stable_table(&s3_enum.modules);

    let mut failures: Vec<String> = Vec::new();
    if ev.total_objects != 3 * t {
        failures.push(format!(
            "expected {} nonprojective Gorenstein projectives, found {}",
            3 * t,
            ev.total_objects
        ));
    }
    for &ci in &triangle_comps {
        if ev.block_sizes[ci] != 3 {
            failures.push(format!(
                "triangle block `{}` has size {}",
                ev.component_names[ci], ev.block_sizes[ci]
            ));
        } else if ev.component_tables[ci].dims != s3_table.dims {
            failures.push(format!(
                "triangle block `{}` differs from the reference stable table",
                ev.component_names[ci]
            ));
        }
    }
    if ev.gamma_gd > 1 {
        failures.push(format!("Gd = {} exceeds 1", ev.gamma_gd));
    }

    let pass = failures.is_empty();
    let doc = qspec::report_document(
        loaded.config,
        summary,
        json!({ "decomposition": qspec::decomposition_value(&ev) }),
        json!({
            "reference_triangle_table": qspec::stable_table_value(&s3_table),
            "union_stable_table": qspec::stable_table_value(&ev.union_table),
        }),
        json!([{
            "check": "cluster-tilted type A decomposition",
            "pass": pass,
            "triangles": t,
            "objects": ev.total_objects,
            "gd": ev.gamma_gd,
            "failures": failures,
        }]),
    );
    emit(&doc, opts)?;
    Ok(if pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
