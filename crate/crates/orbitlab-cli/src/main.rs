//! orbitlab: exact coadjoint-orbit analysis of classical real forms.
//!
//! Subcommands mirror the library drivers. Every command prints one JSON
//! document to stdout (and optionally to --out). Exit codes: 0 success or
//! consistent verdict, 1 hard invariant failure, 2 invalid input,
//! 3 inconclusive sampling verdict.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use orbitlab_core::complex_roots::Weight;
use orbitlab_core::context::{analyze, analyze_with_cache, AlgebraContext, CacheStatus};
use orbitlab_core::exact::Rational;
use orbitlab_core::multiplicity::{multiplicity_report, MultiplicityError};
use orbitlab_core::orbit::{
    cone_tests, is_holomorphic, sign_constancy_check, projection_diagram_check, verify_dichotomy, OrbitError,
    SignatureOutcome, Verdict,
};
use orbitlab_core::realforms::RealFormSpec;
use orbitlab_core::report::{
    AlgebraReport, CheckLine, ConeReport, MultiplicityReport, SelftestReport, TheoremReport,
    SCHEMA_VERSION,
};
use orbitlab_core::lie::Covector;

#[derive(Parser)]
#[command(name = "orbitlab", version, about = "Exact coadjoint orbit analysis for classical real forms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structure report: decomposition, restricted roots, cascade, orbits.
    Algebra(CommonArgs),
    /// Sample the orbit of a functional and test the holomorphy dichotomy.
    VerifyTheorem(TheoremArgs),
    /// Exact multiplicity chain and Liouville volume at a regular functional.
    Multiplicity(MultiplicityArgs),
    /// Convex cone battery around a holomorphic functional.
    Cones(ConeArgs),
    /// Run the invariant battery for one algebra and report each check.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Family keyword: su, sp, so, sostar.
    #[arg(long)]
    family: String,
    /// Family parameters, comma separated: p,q for su and so, the rank n
    /// for sp(2n, R) and so*(2n) (e.g. 2,1 for su(2,1); 2 for sp(4, R)).
    #[arg(long, value_delimiter = ',')]
    params: Vec<usize>,
    /// Also write the JSON report to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Structure-constant cache directory (always rebuilt, then verified).
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct TheoremArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Functional on the compact Cartan, comma-separated rationals
    /// (e.g. 2,1 or 3/2,-1). Defaults to the holomorphic half-sum chamber.
    #[arg(long)]
    f: Option<String>,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 20260818)]
    seed: u64,
}

#[derive(Args)]
struct MultiplicityArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Functional on the compact Cartan; defaults to the holomorphic
    /// half-sum chamber representative.
    #[arg(long)]
    lambda: Option<String>,
    /// Monte Carlo samples for the sphere cross-check (rank-one only).
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, default_value_t = 20260818)]
    seed: u64,
}

#[derive(Args)]
struct ConeArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    f: Option<String>,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 20260818)]
    seed: u64,
}

#[derive(Args)]
struct SelftestArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, default_value_t = 40)]
    samples: usize,
    #[arg(long, default_value_t = 20260818)]
    seed: u64,
}

/// Failure modes with their process exit codes.
enum Failure {
    /// Bad user input: unknown family, malformed rationals, an unusable
    /// functional for the requested driver.
    Input(String),
    /// A hard invariant violation or internal inconsistency.
    Hard(String),
    /// Sampling ended without a witness either way.
    Inconclusive(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Hard(_) => 1,
            Failure::Inconclusive(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Hard(m) | Failure::Inconclusive(m) => m,
        }
    }
}

impl From<OrbitError> for Failure {
    fn from(e: OrbitError) -> Failure {
        match e {
            OrbitError::NotStronglyElliptic(_)
            | OrbitError::DegeneratePairing(_)
            | OrbitError::BadTorusParameters { .. }
            | OrbitError::MissingComplexData(_) => Failure::Input(e.to_string()),
            other => Failure::Hard(other.to_string()),
        }
    }
}

impl From<MultiplicityError> for Failure {
    fn from(e: MultiplicityError) -> Failure {
        match e {
            MultiplicityError::NotRegular(_)
            | MultiplicityError::NonDominant(_)
            | MultiplicityError::NotHolomorphic => Failure::Input(e.to_string()),
            MultiplicityError::ChainMismatch(m) => Failure::Hard(m),
            MultiplicityError::Orbit(o) => o.into(),
        }
    }
}

fn parse_rationals(text: &str) -> Result<Vec<Rational>, Failure> {
    text.split(',')
        .map(|piece| {
            let piece = piece.trim();
            let parsed: Result<Rational, _> = piece.parse();
            parsed.map_err(|_| Failure::Input(format!("cannot parse rational '{piece}'")))
        })
        .collect()
}

fn load_context(common: &CommonArgs) -> Result<(AlgebraContext, Option<CacheStatus>), Failure> {
    let spec = RealFormSpec::parse(&common.family, &common.params)
        .map_err(|e| Failure::Input(e.to_string()))?;
    match &common.cache {
        Some(dir) => {
            let (ctx, status) = analyze_with_cache(&spec, dir)
                .map_err(|e| Failure::Hard(e.to_string()))?;
            Ok((ctx, Some(status)))
        }
        None => {
            let ctx = analyze(&spec).map_err(|e| Failure::Hard(e.to_string()))?;
            Ok((ctx, None))
        }
    }
}

/// The default functional: the holomorphic half-sum chamber pick.
fn default_weight(ctx: &AlgebraContext) -> Result<Weight, Failure> {
    let croots = ctx.croots.as_ref().ok_or_else(|| {
        Failure::Input("this algebra has no compact Cartan subalgebra; pass nothing here".into())
    })?;
    croots
        .rho_g_holomorphic
        .clone()
        .ok_or_else(|| Failure::Input("no holomorphic chamber exists; pass --f explicitly".into()))
}

fn resolve_weight(ctx: &AlgebraContext, text: &Option<String>) -> Result<Weight, Failure> {
    match text {
        Some(t) => {
            let coords = parse_rationals(t)?;
            let croots = ctx.croots.as_ref().ok_or_else(|| {
                Failure::Input("functional given, but the algebra has no compact Cartan".into())
            })?;
            if coords.len() != croots.rank() {
                return Err(Failure::Input(format!(
                    "functional needs {} coordinates, got {}",
                    croots.rank(),
                    coords.len()
                )));
            }
            Ok(Weight(coords))
        }
        None => default_weight(ctx),
    }
}

fn emit<T: serde::Serialize>(report: &T, out: &Option<PathBuf>) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(report)
        .map_err(|e| Failure::Hard(format!("serialization failed: {e}")))?;
    println!("{text}");
    if let Some(path) = out {
        fs::write(path, &text).map_err(|e| Failure::Hard(format!("write {path:?}: {e}")))?;
    }
    Ok(())
}

fn cmd_algebra(args: &CommonArgs) -> Result<u8, Failure> {
    let (ctx, cache) = load_context(args)?;
    let mut report = AlgebraReport::from_context(&ctx);
    match cache {
        Some(CacheStatus::Written) => report.notes.push("cache: written".into()),
        Some(CacheStatus::Verified) => report.notes.push("cache: verified".into()),
        None => {}
    }
    emit(&report, &args.out)?;
    Ok(0)
}

fn cmd_verify_theorem(args: &TheoremArgs) -> Result<u8, Failure> {
    let (ctx, _) = load_context(&args.common)?;
    if ctx.croots.is_none() {
        // No compact Cartan: no strongly elliptic functionals exist at all,
        // so the dichotomy is vacuously consistent.
        let report = TheoremReport {
            schema_version: SCHEMA_VERSION,
            name: ctx.spec.name(),
            f: Vec::new(),
            strongly_elliptic: false,
            holomorphic: false,
            exists_open_orbit: ctx.cascade.has_open_orbits(),
            verdict: Verdict::ConsistentNonholomorphic.label().to_string(),
            signature_histogram: Default::default(),
            witnesses: vec![format!(
                "vacuous: {}",
                ctx.croots_unavailable.as_deref().unwrap_or("no compact Cartan")
            )],
            n_samples: 0,
            seed: args.seed,
        };
        emit(&report, &args.common.out)?;
        return Ok(0);
    }
    let f = resolve_weight(&ctx, &args.f)?;
    let engine = ctx.engine().map_err(Failure::from)?;
    let outcome = verify_dichotomy(&engine, &f, args.samples, args.seed).map_err(Failure::from)?;
    let report = TheoremReport::new(ctx.spec.name(), &f.0, &outcome);
    emit(&report, &args.common.out)?;
    match outcome.verdict {
        Verdict::Inconclusive => Err(Failure::Inconclusive(format!(
            "no witness in {} samples",
            args.samples
        ))),
        _ => Ok(0),
    }
}

fn cmd_multiplicity(args: &MultiplicityArgs) -> Result<u8, Failure> {
    let (ctx, _) = load_context(&args.common)?;
    let lambda = resolve_weight(&ctx, &args.lambda)?;
    let engine = ctx.engine().map_err(Failure::from)?;
    let outcome =
        multiplicity_report(&engine, &lambda, args.samples, args.seed).map_err(Failure::from)?;
    if let Some(mc) = &outcome.mc {
        if !mc.within_tolerance {
            return Err(Failure::Hard(format!(
                "Monte Carlo volume {} deviates {}% from the exact value {}",
                mc.estimate,
                mc.rel_error * 100.0,
                mc.target
            )));
        }
    }
    let report = MultiplicityReport::new(ctx.spec.name(), &outcome);
    emit(&report, &args.common.out)?;
    Ok(0)
}

fn cmd_cones(args: &ConeArgs) -> Result<u8, Failure> {
    let (ctx, _) = load_context(&args.common)?;
    let f = resolve_weight(&ctx, &args.f)?;
    let engine = ctx.engine().map_err(Failure::from)?;
    let outcome = cone_tests(&engine, &f, args.samples, args.seed).map_err(Failure::from)?;
    let report = ConeReport::new(ctx.spec.name(), &f.0, &outcome);
    emit(&report, &args.common.out)?;
    Ok(0)
}

fn cmd_selftest(args: &SelftestArgs) -> Result<u8, Failure> {
    let (ctx, _) = load_context(&args.common)?;
    let mut checks: Vec<CheckLine> = Vec::new();
    let push = |name: &str, result: Result<String, String>, checks: &mut Vec<CheckLine>| {
        match result {
            Ok(detail) => checks.push(CheckLine {
                name: name.into(),
                passed: true,
                detail,
            }),
            Err(detail) => checks.push(CheckLine {
                name: name.into(),
                passed: false,
                detail,
            }),
        }
    };

    push(
        "grading-hypotheses",
        if ctx.hypotheses.satisfied() || !ctx.cascade.has_open_orbits() {
            Ok(format!(
                "open orbits: {}, all roots classified: {}",
                ctx.hypotheses.open_orbit, ctx.hypotheses.all_classified
            ))
        } else {
            Err(format!("failures: {:?}", ctx.hypotheses.failures))
        },
        &mut checks,
    );

    let engine = ctx.engine().map_err(Failure::from)?;

    if ctx.cascade.has_open_orbits() {
        let r = ctx.cascade.cascade_rank();
        let mut all_open = true;
        let mut detail = String::new();
        for mask in 0..(1u32 << r) {
            let signs: Vec<i8> = (0..r)
                .map(|j| if mask & (1 << j) == 0 { 1 } else { -1 })
                .collect();
            let lam = engine
                .canonical_representative(&signs)
                .map_err(Failure::from)?;
            let open = engine
                .frame
                .is_open_orbit_point(&lam)
                .map_err(Failure::from)?;
            let sig = engine.cascade_signature(&lam).map_err(Failure::from)?;
            if !open || !matches!(&sig, SignatureOutcome::Open(s) if *s == signs) {
                all_open = false;
                detail = format!("representative {signs:?} failed ({})", sig.key());
                break;
            }
        }
        push(
            "canonical-representatives-open",
            if all_open {
                Ok(format!("all {} representatives open", 1u32 << r))
            } else {
                Err(detail)
            },
            &mut checks,
        );
    }

    if let Some(croots) = &ctx.croots {
        // Projection diagram on pseudo-random functionals.
        let mut rng_ok = true;
        let mut detail = String::new();
        for i in 0..args.samples.min(40) {
            let coords: Vec<Rational> = (0..ctx.form.algebra.dim())
                .map(|k| {
                    orbitlab_core::exact::rat(((i * 31 + k * 17) % 13) as i64 - 6, 1 + ((i + k) % 3) as i64)
                })
                .collect();
            if let Err(e) = projection_diagram_check(&engine, &Covector::new(coords)) {
                rng_ok = false;
                detail = e.to_string();
                break;
            }
        }
        push(
            "projection-diagram",
            if rng_ok { Ok("commutes".into()) } else { Err(detail) },
            &mut checks,
        );

        if let Some(rho) = croots.rho_g_holomorphic.clone() {
            let theorem = verify_dichotomy(&engine, &rho, args.samples, args.seed);
            push(
                "holomorphic-chamber-theorem",
                theorem
                    .map(|o| format!("verdict {}", o.verdict.label()))
                    .map_err(|e| e.to_string()),
                &mut checks,
            );

            if ctx.cascade.has_open_orbits() {
                let lemma = sign_constancy_check(&engine, args.samples.min(60), args.seed);
                push(
                    "highest-slot-sign-constancy",
                    lemma
                        .map(|o| {
                            format!(
                                "{} orbits, witness: {}",
                                o.orbits_checked,
                                o.flip_witness.as_deref().unwrap_or("none (rank one)")
                            )
                        })
                        .map_err(|e| e.to_string()),
                    &mut checks,
                );

                let hol = is_holomorphic(&ctx.form.algebra, croots, &rho);
                push(
                    "half-sum-is-holomorphic",
                    match hol {
                        Ok(true) => Ok("holomorphic".into()),
                        Ok(false) => Err("half-sum pick is not holomorphic".into()),
                        Err(e) => Err(e.to_string()),
                    },
                    &mut checks,
                );
            }
        }
    }

    let passed = checks.iter().all(|c| c.passed);
    let report = SelftestReport {
        schema_version: SCHEMA_VERSION,
        name: ctx.spec.name(),
        checks,
        passed,
    };
    emit(&report, &args.common.out)?;
    if passed {
        Ok(0)
    } else {
        Err(Failure::Hard("selftest found failing checks".into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Algebra(args) => cmd_algebra(args),
        Command::VerifyTheorem(args) => cmd_verify_theorem(args),
        Command::Multiplicity(args) => cmd_multiplicity(args),
        Command::Cones(args) => cmd_cones(args),
        Command::Selftest(args) => cmd_selftest(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
