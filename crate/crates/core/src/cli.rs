//! Command-line front end: parses space/bundle/operation expressions,
//! runs computations and verification sweeps, and emits text or JSON.
//!
//! Exit codes: 0 success/verified, 1 verification failure, 2 parse or
//! usage error, 3 mathematical error (failed division, relation
//! violation, non-commuting map).

use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::ops::binomial;
use crate::parse::{parse_bundle, parse_element, parse_op, parse_space};
use crate::ring::{GradedElement, Monomial, RingSpec};
use crate::thom::{
    build_thom_model, rho_via_division_for_kind, rho_via_splitting, BundleDescriptor, FactorKind,
    SpaceModel, Theory,
};
use crate::verify::{run_named_check, suite, SuiteBounds, VerificationReport, SUITE_CHECKS};

#[derive(Debug, Parser)]
#[command(
    name = "rhocalc",
    version,
    about = "Exact twisting classes of cohomology operations on truncated projective-space models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Basis {
    /// Nilpotent line coordinates x = eta - 1 (the internal form).
    #[default]
    X,
    /// Powers of the line class eta itself.
    Eta,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute rho for a bundle by the division oracle and the splitting
    /// principle, and report whether the two routes agree.
    Rho(RhoArgs),
    /// Compute the total Stiefel-Whitney class of a sum of real lines.
    Sw(SwArgs),
    /// Apply an operation to an element of a space's ring.
    Apply(ApplyArgs),
    /// Print the Thom model of a bundle: extended ring and Thom class.
    Thom(ThomArgs),
    /// Run one named check family.
    Verify(VerifyArgs),
    /// Run every check family at the configured bounds.
    Suite(SuiteArgs),
}

#[derive(Debug, Args)]
pub struct RhoArgs {
    /// Space expression, e.g. "CP(3)" or "RP(2) x RP(2)".
    #[arg(long)]
    pub space: String,
    /// Bundle expression, e.g. "L1 + L2" or "2*L1".
    #[arg(long)]
    pub bundle: String,
    /// Operation: sq or psi:K.
    #[arg(long)]
    pub op: String,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t)]
    pub basis: Basis,
    /// Accept the degenerate Adams parameter k = 0.
    #[arg(long)]
    pub allow_degenerate: bool,
}

#[derive(Debug, Args)]
pub struct SwArgs {
    #[arg(long)]
    pub space: String,
    #[arg(long)]
    pub bundle: String,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ApplyArgs {
    #[arg(long)]
    pub space: String,
    #[arg(long)]
    pub op: String,
    /// Element in the canonical rendering, e.g. "1 + x" or "a*b".
    #[arg(long)]
    pub element: String,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t)]
    pub basis: Basis,
    #[arg(long)]
    pub allow_degenerate: bool,
}

#[derive(Debug, Args)]
pub struct ThomArgs {
    #[arg(long)]
    pub space: String,
    #[arg(long)]
    pub bundle: String,
    /// Operation fixing the theory; without it RP factors imply mod2 and
    /// pure CP spaces imply K-theory.
    #[arg(long)]
    pub op: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Check name; see `suite` for the list.
    pub name: String,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub allow_degenerate: bool,
    /// Override the sweep's maximum truncation.
    #[arg(long)]
    pub max_n: Option<u32>,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[arg(long)]
    pub allow_degenerate: bool,
    #[arg(long)]
    pub max_n: Option<u32>,
    #[arg(long)]
    pub max_factors: Option<usize>,
    #[arg(long)]
    pub max_summands: Option<usize>,
    /// Comma-separated Adams parameters, e.g. "1,2,3,5".
    #[arg(long)]
    pub ks: Option<String>,
}

/// Output text and process exit code of one command.
pub fn run(cli: Cli) -> Result<(String, i32)> {
    match cli.command {
        Command::Rho(args) => run_rho(args),
        Command::Sw(args) => run_sw(args),
        Command::Apply(args) => run_apply(args),
        Command::Thom(args) => run_thom(args),
        Command::Verify(args) => run_verify(args),
        Command::Suite(args) => run_suite(args),
    }
}

// ---------------------------------------------------------------------
// eta-basis rendering: a K-theory element rewritten in powers of the
// line classes eta_i = 1 + x_i
// ---------------------------------------------------------------------

fn eta_ring(ring: &Arc<RingSpec>) -> Result<Arc<RingSpec>> {
    let generators = ring
        .generators()
        .iter()
        .map(|g| {
            let suffix = g.name.strip_prefix('x').unwrap_or(&g.name);
            crate::ring::GeneratorSpec::polynomial(format!("eta{suffix}"), 0, g.exponent_bound())
        })
        .collect();
    RingSpec::new(crate::ring::Coefficients::Integer, generators)
}

/// Rewrites an element of a K-theory model ring in eta powers:
/// x^e = (eta - 1)^e expands to sum C(e, f) (-1)^{e-f} eta^f.
fn eta_form(e: &GradedElement) -> Result<GradedElement> {
    let target = eta_ring(e.ring())?;
    let n = e.ring().generators().len();
    let mut out = GradedElement::zero(&target);
    for (m, c) in e.terms() {
        let mut partial: Vec<(Vec<u32>, BigInt)> = vec![(vec![0; n], c.clone())];
        for (i, &exp) in m.exponents().iter().enumerate() {
            let mut next = Vec::with_capacity(partial.len() * (exp as usize + 1));
            for (exps, coeff) in &partial {
                for f in 0..=exp {
                    let mut binom = binomial(u64::from(exp), u64::from(f));
                    if (exp - f) % 2 == 1 {
                        binom = -binom;
                    }
                    let mut exps = exps.clone();
                    exps[i] = f;
                    next.push((exps, coeff * binom));
                }
            }
            partial = next;
        }
        let terms = partial
            .into_iter()
            .map(|(exps, coeff)| (Monomial::from_exponents(exps), coeff));
        out = out.add(&GradedElement::from_terms(&target, terms)?)?;
    }
    Ok(out)
}

/// The element in the requested display basis, plus the other form for a
/// parenthetical where it differs (K-theory only).
fn rendered_forms(e: &GradedElement, theory: Theory, basis: Basis) -> Result<(String, Option<String>)> {
    if theory != Theory::KTheory {
        return Ok((e.to_string(), None));
    }
    let x_form = e.to_string();
    let eta = eta_form(e)?.to_string();
    Ok(match basis {
        Basis::X => (x_form, Some(eta)),
        Basis::Eta => (eta, Some(x_form)),
    })
}

// ---------------------------------------------------------------------
// command implementations
// ---------------------------------------------------------------------

fn space_for(kind_text: &str, space_text: &str, allow_degenerate: bool) -> Result<(SpaceModel, crate::ops::OpKind)> {
    let kind = parse_op(kind_text)?;
    let factors = parse_space(space_text)?;
    let space = SpaceModel::new(factors, kind.theory())?;
    let _ = allow_degenerate;
    Ok((space, kind))
}

fn bundle_for(space: &SpaceModel, bundle_text: &str) -> Result<BundleDescriptor> {
    let bundle = BundleDescriptor::new(parse_bundle(bundle_text)?)?;
    bundle.validate_over(space)?;
    Ok(bundle)
}

fn run_rho(args: RhoArgs) -> Result<(String, i32)> {
    let (space, kind) = space_for(&args.op, &args.space, args.allow_degenerate)?;
    let bundle = bundle_for(&space, &args.bundle)?;
    let (_td, _op, by_division) =
        rho_via_division_for_kind(&space, &bundle, kind, args.allow_degenerate)?;
    let by_splitting = rho_via_splitting(&space, &bundle, kind, args.allow_degenerate)?;
    let agree = by_division == by_splitting;

    let (element, other) = rendered_forms(&by_division, space.theory(), args.basis)?;
    let (division_str, _) = rendered_forms(&by_division, space.theory(), args.basis)?;
    let (splitting_str, _) = rendered_forms(&by_splitting, space.theory(), args.basis)?;

    let code = if agree { 0 } else { 1 };
    let output = match args.format {
        Format::Json => json!({
            "command": "rho",
            "inputs": { "space": space.to_string(), "bundle": bundle.to_string(), "op": kind.to_string() },
            "result": {
                "element": element,
                "by_division": division_str,
                "by_splitting": splitting_str,
                "agree": agree,
            },
        })
        .to_string(),
        Format::Text => {
            let headline = match &other {
                Some(o) if *o != element => format!("{element}  (= {o})"),
                _ => element.clone(),
            };
            format!(
                "{headline}\nby division:  {division_str}\nby splitting: {splitting_str}\npaths agree:  {}",
                if agree { "yes" } else { "NO" }
            )
        }
    };
    Ok((output, code))
}

fn run_sw(args: SwArgs) -> Result<(String, i32)> {
    let factors = parse_space(&args.space)?;
    let space = SpaceModel::new(factors, Theory::Mod2)?;
    let bundle = bundle_for(&space, &args.bundle)?;
    let w = crate::ops::total_sw(&space, &bundle)?;
    let output = match args.format {
        Format::Json => json!({
            "command": "sw",
            "inputs": { "space": space.to_string(), "bundle": bundle.to_string() },
            "result": { "element": w.to_string() },
        })
        .to_string(),
        Format::Text => w.to_string(),
    };
    Ok((output, 0))
}

fn run_apply(args: ApplyArgs) -> Result<(String, i32)> {
    let (space, kind) = space_for(&args.op, &args.space, args.allow_degenerate)?;
    let element = parse_element(&args.element, space.ring())?;
    let op = kind.build(space.ring(), args.allow_degenerate)?;
    let image = op.apply(&element)?;
    let (rendered, other) = rendered_forms(&image, space.theory(), args.basis)?;
    let output = match args.format {
        Format::Json => json!({
            "command": "apply",
            "inputs": { "space": space.to_string(), "op": kind.to_string(), "element": element.to_string() },
            "result": { "element": rendered },
        })
        .to_string(),
        Format::Text => match &other {
            Some(o) if *o != rendered => format!("{rendered}  (= {o})"),
            _ => rendered,
        },
    };
    Ok((output, 0))
}

fn infer_theory(factors: &[crate::thom::Factor]) -> Theory {
    if factors.iter().any(|f| f.kind == FactorKind::RP) {
        Theory::Mod2
    } else {
        Theory::KTheory
    }
}

fn run_thom(args: ThomArgs) -> Result<(String, i32)> {
    let factors = parse_space(&args.space)?;
    let theory = match &args.op {
        Some(op) => parse_op(op)?.theory(),
        None => infer_theory(&factors),
    };
    let space = SpaceModel::new(factors, theory)?;
    let bundle = bundle_for(&space, &args.bundle)?;
    let td = build_thom_model(&space, &bundle)?;
    let output = match args.format {
        Format::Json => json!({
            "command": "thom",
            "inputs": { "space": space.to_string(), "bundle": bundle.to_string(), "theory": theory.to_string() },
            "result": {
                "base": td.base().describe(),
                "extended": td.extended().describe(),
                "u": td.thom_class().to_string(),
                "degree_of_u": td.degree_of_u(),
            },
        })
        .to_string(),
        Format::Text => format!(
            "base:     {}\nextended: {}\nu = {}  (degree {})",
            td.base().describe(),
            td.extended().describe(),
            td.thom_class(),
            td.degree_of_u()
        ),
    };
    Ok((output, 0))
}

fn render_report_text(report: &VerificationReport) -> String {
    let mut out = format!(
        "check: {}\ncases: {}\nstatus: {}",
        report.check,
        report.cases,
        if report.passed() { "pass" } else { "fail" }
    );
    if let Some(cex) = &report.counterexample {
        out.push_str(&format!(
            "\ncounterexample:\n  case:  {}\n  left:  {}\n  right: {}",
            cex.case, cex.left, cex.right
        ));
    }
    out
}

fn run_verify(args: VerifyArgs) -> Result<(String, i32)> {
    let mut bounds = SuiteBounds::default();
    if let Some(n) = args.max_n {
        bounds.max_n = n;
    }
    let report = run_named_check(&args.name, &bounds, args.allow_degenerate)?;
    let code = if report.passed() { 0 } else { 1 };
    let output = match args.format {
        Format::Json => serde_json::to_string(&report).expect("report serializes"),
        Format::Text => render_report_text(&report),
    };
    Ok((output, code))
}

fn run_suite(args: SuiteArgs) -> Result<(String, i32)> {
    let mut bounds = SuiteBounds::default();
    if let Some(n) = args.max_n {
        bounds.max_n = n;
    }
    if let Some(f) = args.max_factors {
        bounds.max_factors = f;
    }
    if let Some(s) = args.max_summands {
        bounds.max_summands = s;
    }
    if let Some(ks) = &args.ks {
        bounds.ks = ks
            .split(',')
            .map(|part| {
                part.trim().parse::<i64>().map_err(|_| Error::Parse {
                    column: 1,
                    message: format!("invalid Adams parameter `{part}` in --ks"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
    }
    let reports = suite(&bounds, args.allow_degenerate)?;
    let all_pass = reports.iter().all(|r| r.passed());
    let code = if all_pass { 0 } else { 1 };
    let output = match args.format {
        Format::Json => serde_json::to_string(&reports).expect("reports serialize"),
        Format::Text => {
            let mut lines: Vec<String> = reports
                .iter()
                .map(|r| {
                    format!(
                        "{}  {:<24} {:>8} cases",
                        if r.passed() { "pass" } else { "FAIL" },
                        r.check,
                        r.cases
                    )
                })
                .collect();
            for r in &reports {
                if let Some(cex) = &r.counterexample {
                    lines.push(format!(
                        "counterexample in {}:\n  case:  {}\n  left:  {}\n  right: {}",
                        r.check, cex.case, cex.left, cex.right
                    ));
                }
            }
            lines.push(format!(
                "{} of {} checks passed",
                reports.iter().filter(|r| r.passed()).count(),
                reports.len()
            ));
            lines.join("\n")
        }
    };
    Ok((output, code))
}

/// The check names accepted by `verify`.
pub fn check_names() -> &'static [&'static str] {
    SUITE_CHECKS
}

// Zero is unused directly but the num-traits signatures keep coefficient
// handling uniform across the crate.
#[allow(unused_imports)]
use num_traits as _;

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser as _;

    fn run_line(line: &str) -> Result<(String, i32)> {
        let args = std::iter::once("rhocalc").chain(line.split_whitespace());
        let cli = Cli::try_parse_from(args).expect("test command parses");
        run(cli)
    }

    #[test]
    fn rho_example_text() {
        let (out, code) = run_line("rho --space CP(3) --bundle L1 --op psi:2").unwrap();
        assert!(out.starts_with("2 + x  (= 1 + eta)"), "{out}");
        assert!(out.contains("paths agree:  yes"));
        assert_eq!(code, 0);
    }

    #[test]
    fn rho_eta_basis() {
        let (out, _) = run_line("rho --space CP(3) --bundle L1 --op psi:2 --basis eta").unwrap();
        assert!(out.starts_with("1 + eta  (= 2 + x)"), "{out}");

        let (out, _) = run_line("rho --space CP(3) --bundle L1 --op psi:3 --basis eta").unwrap();
        assert!(out.starts_with("1 + eta + eta^2"), "{out}");
    }

    #[test]
    fn rho_json_schema() {
        let (out, code) =
            run_line("rho --space CP(3) --bundle L1 --op psi:2 --format json").unwrap();
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["command"], "rho");
        assert_eq!(v["inputs"]["space"], "CP(3)");
        assert_eq!(v["inputs"]["bundle"], "L1");
        assert_eq!(v["inputs"]["op"], "psi:2");
        assert_eq!(v["result"]["element"], "2 + x");
        assert_eq!(v["result"]["by_division"], "2 + x");
        assert_eq!(v["result"]["by_splitting"], "2 + x");
        assert_eq!(v["result"]["agree"], true);
        assert_eq!(code, 0);
    }

    #[test]
    fn sw_example() {
        let (out, code) = run_line("sw --space RP(2)xRP(2) --bundle L1+L2").unwrap();
        assert_eq!(out, "1 + a + b + a*b");
        assert_eq!(code, 0);
    }

    #[test]
    fn apply_example() {
        let (out, _) = run_line("apply --space CP(3) --op psi:2 --element x^2").unwrap();
        assert!(out.starts_with("4*x^2 + 4*x^3"), "{out}");
    }

    #[test]
    fn thom_example() {
        let (out, _) = run_line("thom --space CP(2) --bundle L1").unwrap();
        assert!(out.contains("extended: Z[x]/(x^4)"), "{out}");
        assert!(out.contains("u = x"), "{out}");
    }

    #[test]
    fn verify_named_check() {
        let (out, code) = run_line("verify product-formula-signed").unwrap();
        assert!(out.contains("status: pass"), "{out}");
        assert_eq!(code, 0);
    }

    #[test]
    fn error_classes() {
        // parse error -> Err carrying exit class 2
        let err = run_line("rho --space CP(-1) --bundle L1 --op psi:2").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        // unknown factor -> usage class
        let err = run_line("rho --space CP(3) --bundle L3 --op psi:2").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        // degenerate k without the flag -> usage class
        let err = run_line("rho --space CP(3) --bundle L1 --op psi:0").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        // with the flag it runs and gives rho = 0
        let (out, code) =
            run_line("rho --space CP(3) --bundle L1 --op psi:0 --allow-degenerate").unwrap();
        assert!(out.starts_with("0"), "{out}");
        assert_eq!(code, 0);
    }

    #[test]
    fn eta_form_round_trips_small_cases() {
        let space = SpaceModel::new(
            vec![crate::thom::Factor::new(FactorKind::CP, 3)],
            Theory::KTheory,
        )
        .unwrap();
        let x = GradedElement::generator(space.ring(), 0);
        // x = eta - 1
        assert_eq!(eta_form(&x).unwrap().to_string(), "-1 + eta");
        // (1+x)^2 = eta^2
        let sq = GradedElement::one(space.ring()).add(&x).unwrap().pow(2);
        assert_eq!(eta_form(&sq).unwrap().to_string(), "eta^2");
    }
}
