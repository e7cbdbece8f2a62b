//! Command-line surface binding the verification modules to presentation
//! files, poset files, and the built-in example registry.
//!
//! Exit codes: 0 when every requested check passes, 1 when a verification
//! fails, 2 for usage or parse problems, 3 when a resource bound is hit.
//! The env var `ORE_FORGE_BOUND` overrides the default iteration bound and
//! is itself overridden by `--bound`.

use crate::cauchon::{self, DeletionStep};
use crate::error::{Error, Result};
use crate::expr::parse_element;
use crate::grfilt::{self, FiltrationDegrees};
use crate::normal::{self, FractionElement};
use crate::ore::engine::Ctx;
use crate::ore::Element;
use crate::presentation::{self, CGLPresentation};
use crate::registry;
use crate::report::Report;
use crate::spectra::{self, CatenaryOutcome, FinitePoset};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::path::Path;

const DEFAULT_BOUND: u32 = 32;
const DEFAULT_SEED: u64 = 7;

/// Exact computation in iterated Ore extensions of CGL type.
#[derive(Parser)]
#[command(name = "ore-forge", version, about)]
struct Cli {
    /// Emit machine-readable JSON instead of the plain report.
    #[arg(long, global = true)]
    json: bool,

    /// Iteration bound for nilpotence orders, searches, and solver caps.
    #[arg(long, global = true, value_name = "INT")]
    bound: Option<u32>,

    /// Seed for randomized property runs.
    #[arg(long, global = true, value_name = "INT", default_value_t = DEFAULT_SEED)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify every structural condition of a presentation.
    Check {
        /// Built-in name or presentation file path.
        target: String,
    },
    /// Rewrite an expression to its ordered normal form.
    Nf {
        target: String,
        /// Expression in the generators, e.g. "x2*x1 - q*x1*x2".
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Apply the deleting-derivations map at one level.
    Theta {
        target: String,
        /// Level to delete, 1-based; the expression may only use lower
        /// generators.
        #[arg(short = 'j', value_name = "IDX")]
        level: usize,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Delete the top derivation, or run the whole descent with --all.
    Delete {
        target: String,
        /// Delete every level from the top down to 2.
        #[arg(long)]
        all: bool,
    },
    /// Build a normal element from a lower-level one, or certify one directly.
    Normal {
        target: String,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Express the top derivation as an inner fraction d = den^-1 * num.
    Innerd {
        target: String,
        /// Lower-level normal element whose image generates the fraction.
        #[arg(
            required_unless_present = "from_monic",
            conflicts_with = "from_monic",
            allow_hyphen_values = true
        )]
        expr: Option<String>,
        /// Alternative route from a monic relation: a normal with
        /// delta(a) = c * a^n below the top level.
        #[arg(
            long = "from-monic",
            num_args = 3,
            value_names = ["A_EXPR", "C_EXPR", "N"],
            allow_hyphen_values = true
        )]
        from_monic: Option<Vec<String>>,
    },
    /// Prime spectrum checks for quantum affine data or a poset file.
    Spectra {
        target: String,
        /// Only the height formula over all primes and nested pairs.
        #[arg(long)]
        tauvel: bool,
        /// Only the saturated-chain-length scan.
        #[arg(long)]
        catenary: bool,
        /// Only the separating normal element check over proper pairs.
        #[arg(long = "normal-sep")]
        normal_sep: bool,
    },
    /// Filtration degrees, growth, and the associated graded presentation.
    Grade {
        target: String,
    },
    /// List the built-in example presentations.
    Examples,
}

#[derive(Clone, Copy)]
struct Opts {
    json: bool,
    bound: u32,
    explicit_bound: bool,
    seed: u64,
}

/// Parse the process arguments, dispatch, and map errors to exit codes.
pub fn run() -> i32 {
    // Die quietly when the output pipe closes, as line-oriented tools do.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = err.exit_code();
            let _ = err.print();
            return code;
        }
    };
    let opts = Opts {
        json: cli.json,
        bound: effective_bound(cli.bound),
        explicit_bound: cli.bound.is_some() || std::env::var_os("ORE_FORGE_BOUND").is_some(),
        seed: cli.seed,
    };
    match dispatch(&cli.command, opts) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn effective_bound(flag: Option<u32>) -> u32 {
    flag.or_else(|| {
        std::env::var("ORE_FORGE_BOUND")
            .ok()
            .and_then(|v| v.trim().parse().ok())
    })
    .unwrap_or(DEFAULT_BOUND)
}

fn dispatch(command: &Command, opts: Opts) -> Result<bool> {
    match command {
        Command::Check { target } => cmd_check(&load_target(target)?, opts),
        Command::Nf { target, expr } => cmd_nf(&load_target(target)?, expr, opts),
        Command::Theta { target, level, expr } => {
            cmd_theta(&load_target(target)?, *level, expr, opts)
        }
        Command::Delete { target, all } => cmd_delete(&load_target(target)?, *all, opts),
        Command::Normal { target, expr } => cmd_normal(&load_target(target)?, expr, opts),
        Command::Innerd {
            target,
            expr,
            from_monic,
        } => cmd_innerd(
            &load_target(target)?,
            expr.as_deref(),
            from_monic.as_deref(),
            opts,
        ),
        Command::Spectra {
            target,
            tauvel,
            catenary,
            normal_sep,
        } => cmd_spectra(target, *tauvel, *catenary, *normal_sep, opts),
        Command::Grade { target } => cmd_grade(&load_target(target)?, opts),
        Command::Examples => {
            cmd_examples(opts);
            Ok(true)
        }
    }
}

/// Resolve a target as a built-in name first, then as a file path.
fn load_target(target: &str) -> Result<CGLPresentation> {
    match registry::builtin(target) {
        Ok(pres) => Ok(pres),
        Err(Error::UnknownTarget(_)) if Path::new(target).exists() => {
            CGLPresentation::load(target)
        }
        Err(err) => Err(err),
    }
}

fn print_json(value: &impl Serialize) {
    match serde_json::to_string_pretty(value) {
        Ok(text) => println!("{text}"),
        Err(err) => eprintln!("error: {err}"),
    }
}

fn parse_to_normal_form(pres: &CGLPresentation, expr: &str, bound: u32) -> Result<Element> {
    let raw = parse_element(expr, pres.gen_names())?;
    Ctx::new(pres).with_bound(bound).normal_form(&raw)
}

fn require_within_level(pres: &CGLPresentation, a: &Element, level: usize) -> Result<()> {
    if a.within_level(level) {
        return Ok(());
    }
    for i in (level..pres.n()).rev() {
        if a.terms().any(|(m, _)| m.0[i] != 0) {
            return Err(Error::AboveLevel {
                gen: pres.gen_name(i).to_string(),
                level,
            });
        }
    }
    unreachable!("within_level was false, so some high exponent is nonzero");
}

fn cmd_check(pres: &CGLPresentation, opts: Opts) -> Result<bool> {
    let mut reports = vec![
        presentation::validate_structure(pres),
        presentation::verify_local_nilpotence(pres, opts.bound),
    ];
    let mut twist = Report::new(format!("{}: eigenvalue twist", pres.name()));
    match presentation::verify_sigma_delta_relation(pres) {
        Ok(ok) => twist.push(
            "sigma_j delta_j = q_j delta_j sigma_j on every generator",
            ok,
            None,
        ),
        Err(err) => twist.fail("sigma_j delta_j = q_j delta_j sigma_j", err.to_string()),
    }
    reports.push(twist);
    reports.push(presentation::verify_confluence(pres, 3, opts.seed, 32)?);
    if let Some(degrees) = pres.declared_filtration() {
        let mut filt = Report::new(format!("{}: declared filtration", pres.name()));
        match grfilt::first_violation(pres, degrees) {
            None => filt.pass(format!(
                "declared degrees {:?} dominate every derivation",
                degrees
            )),
            Some(violation) => filt.fail("declared degrees", violation),
        }
        reports.push(filt);
    }
    let passed = reports.iter().all(Report::passed);
    if opts.json {
        print_json(&json!({
            "subject": pres.name(),
            "passed": passed,
            "reports": reports,
        }));
    } else {
        for report in &reports {
            println!("{report}");
        }
        println!(
            "{}: {}",
            pres.name(),
            if passed { "all checks passed" } else { "checks FAILED" }
        );
    }
    Ok(passed)
}

fn cmd_nf(pres: &CGLPresentation, expr: &str, opts: Opts) -> Result<bool> {
    let nf = parse_to_normal_form(pres, expr, opts.bound)?;
    let rendered = nf.to_expr_string(pres.gen_names());
    if opts.json {
        print_json(&json!({ "input": expr, "normal_form": rendered }));
    } else {
        println!("{rendered}");
    }
    Ok(true)
}

fn cmd_theta(pres: &CGLPresentation, level: usize, expr: &str, opts: Opts) -> Result<bool> {
    let n = pres.n();
    if level == 0 || level > n {
        return Err(Error::IndexOutOfRange { index: level, n });
    }
    let j = level - 1;
    let a = parse_to_normal_form(pres, expr, opts.bound)?;
    require_within_level(pres, &a, j)?;
    let image = cauchon::cauchon_theta(pres, j, &a, opts.bound)?;
    let rendered = image.value.to_expr_string(pres.gen_names());
    if opts.json {
        print_json(&json!({
            "input": expr,
            "value": rendered,
            "s_min": image.s_min,
        }));
    } else {
        println!("{rendered}");
        println!("s_min = {}", image.s_min);
    }
    Ok(true)
}

fn cmd_delete(pres: &CGLPresentation, all: bool, opts: Opts) -> Result<bool> {
    let steps: Vec<DeletionStep> = if all {
        cauchon::deletion_sequence(pres, opts.bound)?
    } else {
        vec![cauchon::delete_top_derivation(
            pres,
            pres.n() - 1,
            opts.bound,
        )?]
    };
    let passed = steps.iter().all(|step| step.checks.passed());
    let last = steps.last().map(|step| step.after.clone());
    let final_pres = last.as_ref().unwrap_or(pres);
    if opts.json {
        let summaries: Vec<_> = steps.iter().map(DeletionStep::summary).collect();
        print_json(&json!({
            "steps": summaries,
            "final": final_pres.to_file_model(),
            "passed": passed,
        }));
    } else {
        for step in &steps {
            let summary = step.summary();
            println!(
                "level {}: {} -> {}",
                summary.level, summary.before, summary.after
            );
            for image in &summary.images {
                println!(
                    "  theta({}) = {}   [s_min = {}]",
                    image.generator, image.value, image.s_min
                );
            }
            println!("{}", summary.checks);
        }
        println!(
            "final presentation: {} ({})",
            final_pres.name(),
            if passed { "all steps verified" } else { "a step FAILED" }
        );
    }
    Ok(passed)
}

fn cmd_normal(pres: &CGLPresentation, expr: &str, opts: Opts) -> Result<bool> {
    let a = parse_to_normal_form(pres, expr, opts.bound)?;
    let n = pres.n();
    let constructed = n >= 2 && a.within_level(n - 1) && !a.is_zero();
    let cert = if constructed {
        normal::construct_normal(pres, &a, opts.bound)?
    } else {
        normal::verify_normal(pres, &a, opts.bound)?
    };
    let summary = cert.summary(pres.gen_names());
    let mode = if constructed { "construct" } else { "verify" };
    if opts.json {
        print_json(&json!({ "mode": mode, "certificate": summary }));
    } else {
        let label = if constructed {
            "constructed normal element"
        } else {
            "verified normal element"
        };
        println!("{label} x = {}", summary.element);
        println!("eigen weight = {:?}", summary.eigen_weight);
        for entry in &summary.conjugation {
            println!("x * {} = ({}) * x", entry.generator, entry.value);
        }
        match &summary.torus_witness {
            Some(witness) => println!("torus witness = {witness:?}"),
            None => println!("torus witness = none recorded"),
        }
    }
    Ok(true)
}

fn cmd_innerd(
    pres: &CGLPresentation,
    expr: Option<&str>,
    from_monic: Option<&[String]>,
    opts: Opts,
) -> Result<bool> {
    let fraction: FractionElement = match (expr, from_monic) {
        (Some(expr), None) => {
            let a = parse_to_normal_form(pres, expr, opts.bound)?;
            normal::inner_d_from_normal(pres, &a, opts.bound)?
        }
        (None, Some(parts)) => {
            let a = parse_to_normal_form(pres, &parts[0], opts.bound)?;
            let c = parse_to_normal_form(pres, &parts[1], opts.bound)?;
            let power: u32 = parts[2].trim().parse().map_err(|_| Error::Parse {
                pos: 0,
                msg: format!("power '{}' is not a nonnegative integer", parts[2]),
            })?;
            normal::inner_d_from_monic(pres, &a, &c, power, opts.bound)?
        }
        _ => {
            return Err(Error::Parse {
                pos: 0,
                msg: "give either an element expression or --from-monic".into(),
            })
        }
    };
    let inner = normal::verify_inner(pres, &fraction)?;
    if opts.json {
        print_json(&json!({
            "fraction": fraction.summary(pres.gen_names()),
            "inner": inner,
        }));
    } else {
        println!("d = {}", fraction.to_expr_string(pres.gen_names()));
        println!(
            "inner derivation identity: {}",
            if inner { "ok" } else { "FAIL" }
        );
    }
    Ok(inner)
}

enum SpectraTarget {
    Presentation(CGLPresentation),
    Poset(FinitePoset),
}

/// A spectra target may be a built-in, a JSON presentation file, or a poset
/// text file; file contents that do not start with '{' are read as a poset.
fn load_spectra_target(target: &str) -> Result<SpectraTarget> {
    if let Ok(pres) = registry::builtin(target) {
        return Ok(SpectraTarget::Presentation(pres));
    }
    let path = Path::new(target);
    if !path.exists() {
        return Err(Error::UnknownTarget(target.to_string()));
    }
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        Ok(SpectraTarget::Presentation(CGLPresentation::from_json(
            &text,
        )?))
    } else {
        Ok(SpectraTarget::Poset(FinitePoset::from_text(&text)?))
    }
}

fn print_catenary_human(outcome: &CatenaryOutcome) {
    println!(
        "catenary: {}",
        if outcome.catenary { "true" } else { "FAIL" }
    );
    if let Some(witness) = &outcome.witness {
        println!("witness pair: {} < {}", witness.lower, witness.upper);
        println!("  short chain: {}", witness.short_chain.join(" < "));
        println!("  long chain:  {}", witness.long_chain.join(" < "));
    }
}

fn cmd_spectra(
    target: &str,
    tauvel: bool,
    catenary: bool,
    normal_sep: bool,
    opts: Opts,
) -> Result<bool> {
    match load_spectra_target(target)? {
        SpectraTarget::Poset(poset) => {
            if tauvel || normal_sep {
                return Err(Error::BadPresentation(
                    "a poset file supports only the catenarity check".into(),
                ));
            }
            let outcome = spectra::catenary_check(&poset);
            if opts.json {
                print_json(&json!({
                    "catenary": outcome,
                    "passed": outcome.catenary,
                }));
            } else {
                print_catenary_human(&outcome);
            }
            Ok(outcome.catenary)
        }
        SpectraTarget::Presentation(pres) => {
            let run_all = !(tauvel || catenary || normal_sep);
            let mut passed = true;
            let mut payload = Map::new();
            if tauvel || run_all {
                let report = spectra::tauvel_check(&pres)?;
                passed &= report.passed();
                if opts.json {
                    payload.insert("tauvel".into(), serde_json::to_value(&report)?);
                } else {
                    println!("{report}");
                }
            }
            if catenary || run_all {
                let poset = spectra::hprime_poset(&pres)?;
                let outcome = spectra::catenary_check(&poset);
                passed &= outcome.catenary;
                if opts.json {
                    payload.insert("catenary".into(), serde_json::to_value(&outcome)?);
                } else {
                    print_catenary_human(&outcome);
                }
            }
            if normal_sep || run_all {
                let report = spectra::normal_separation_check(&pres, opts.bound)?;
                passed &= report.passed();
                if opts.json {
                    payload.insert(
                        "normal_separation".into(),
                        serde_json::to_value(&report)?,
                    );
                } else {
                    println!("{report}");
                }
            }
            if opts.json {
                payload.insert("passed".into(), Value::Bool(passed));
                print_json(&Value::Object(payload));
            }
            Ok(passed)
        }
    }
}

fn cmd_grade(pres: &CGLPresentation, opts: Opts) -> Result<bool> {
    let declared = pres
        .declared_filtration()
        .filter(|degrees| grfilt::degrees_valid(pres, degrees));
    let degrees = match declared {
        Some(degrees) => FiltrationDegrees::new(degrees.to_vec())?,
        None => {
            let budget = if opts.explicit_bound {
                opts.bound
            } else {
                (4 * pres.n() as u32).max(8)
            };
            grfilt::find_filtration_degrees(pres, budget)?
        }
    };
    let gk = grfilt::gk_dimension(pres);
    let growth = grfilt::growth_report(pres, &degrees)?;
    let graded = grfilt::associated_graded(pres, &degrees)?;
    let passed = growth.passed();
    if opts.json {
        print_json(&json!({
            "degrees": degrees.degrees(),
            "gk": gk,
            "growth": growth,
            "graded": graded.to_file_model(),
            "passed": passed,
        }));
    } else {
        println!("filtration degrees = {degrees}");
        println!("GK dimension = {gk}");
        println!("{growth}");
        println!(
            "associated graded: {} ({})",
            graded.name(),
            if graded.delta_map().is_empty() {
                "no derivations remain"
            } else {
                "derivations remain"
            }
        );
    }
    Ok(passed)
}

fn cmd_examples(opts: Opts) {
    let valid = registry::builtin_descriptions();
    let invalid = registry::invalid_descriptions();
    if opts.json {
        let rows: Vec<Value> = valid
            .iter()
            .map(|(name, blurb)| json!({ "name": name, "description": blurb, "valid": true }))
            .chain(invalid.iter().map(|(name, blurb)| {
                json!({ "name": name, "description": blurb, "valid": false })
            }))
            .collect();
        print_json(&json!({ "examples": rows }));
    } else {
        println!("built-in presentations:");
        for (name, blurb) in &valid {
            println!("  {name:<22} {blurb}");
        }
        println!("deliberately broken presentations:");
        for (name, blurb) in &invalid {
            println!("  {name:<22} {blurb}");
        }
    }
}
