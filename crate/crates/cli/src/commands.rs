use std::path::{Path, PathBuf};
use std::time::Instant;

use qmaps_core::families::{coideal_identity_defect, commutation_defect, compose_families, invariance_defects};
use qmaps_core::morphisms::{all_set_maps, enumerate_set_maps};
use qmaps_core::representations::{
    magic_unitary_check, modular_compatibility_defect, nonclassical_magic_4x4, podles_rank, GeneratorWarning,
};
use qmaps_core::semigroups::{action_defect, cancellation_rank, coassociativity_defect, counit_defect, Side};
use qmaps_core::{LinearFunctional, QuantumFamily, QuantumSemigroup, StarMorphism};
use serde_json::json;

use crate::document::{read_document, Document, Kind, MagicDocument, ParseError};
use crate::report::{Check, Report};
use crate::suite;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    VerifyHom,
    Compose,
    CheckInvariant,
    CheckCommute,
    CheckCoassoc,
    CheckCounit,
    CheckAction,
    CheckMagic,
    CheckCancellation,
    CheckModular,
    CheckPodles,
    EnumerateClassical,
    RunSuite,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyHom => "verify-hom",
            Command::Compose => "compose",
            Command::CheckInvariant => "check-invariant",
            Command::CheckCommute => "check-commute",
            Command::CheckCoassoc => "check-coassoc",
            Command::CheckCounit => "check-counit",
            Command::CheckAction => "check-action",
            Command::CheckMagic => "check-magic",
            Command::CheckCancellation => "check-cancellation",
            Command::CheckModular => "check-modular",
            Command::CheckPodles => "check-podles",
            Command::EnumerateClassical => "enumerate-classical",
            Command::RunSuite => "run-suite",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Request {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    pub tol: f64,
    pub seed: u64,
    pub theta: Option<f64>,
    pub n: Option<usize>,
    pub suite: Option<String>,
}

impl Request {
    pub fn new(command: Command) -> Self {
        Request { command, inputs: Vec::new(), tol: qmaps_core::morphisms::DEFAULT_TOL, seed: 0, theta: None, n: None, suite: None }
    }
}

/// Anything that stops a command before a report exists (exit status 2).
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Module(#[from] qmaps_core::Error),
    #[error("usage: {0}")]
    Usage(String),
}

type Outcome<T> = Result<T, CliError>;

pub fn run(req: &Request) -> Outcome<Report> {
    if !(req.tol.is_finite() && req.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be a positive real, got {}", req.tol)));
    }
    let start = Instant::now();
    let checks = dispatch(req)?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let inputs = req.inputs.iter().map(|p| p.display().to_string()).collect();
    Ok(Report::new(req.command.name(), inputs, req.tol, req.seed, checks, elapsed_ms))
}

fn dispatch(req: &Request) -> Outcome<Vec<Check>> {
    let tol = req.tol;
    match req.command {
        Command::VerifyHom => {
            let [m] = inputs::<1>(req)?;
            Ok(hom_checks("", &morphism(m)?, tol))
        }
        Command::Compose => compose(req),
        Command::CheckInvariant => {
            let [f, w] = inputs::<2>(req)?;
            invariant(&family(f)?, &functional(w)?, tol)
        }
        Command::CheckCommute => {
            let [b, c] = inputs::<2>(req)?;
            Ok(vec![Check::defect("commutation", commutation_defect(&family(b)?, &family(c)?)?, tol)])
        }
        Command::CheckCoassoc => {
            let [s] = inputs::<1>(req)?;
            Ok(vec![Check::defect("coassociativity", coassociativity_defect(&semigroup(s)?)?, tol)])
        }
        Command::CheckCounit => {
            let [s] = inputs::<1>(req)?;
            hypothetical("counit", counit_defect(&semigroup(s)?), tol)
        }
        Command::CheckAction => action(req),
        Command::CheckMagic => magic(req),
        Command::CheckCancellation => {
            let [s] = inputs::<1>(req)?;
            let s = semigroup(s)?;
            let dim = s.algebra().dim();
            let mut out = Vec::new();
            for (side, name) in [(Side::Left, "left_span"), (Side::Right, "right_span")] {
                let r = cancellation_rank(&s, side)?;
                out.push(Check::predicate(name, r.full, json!({ "rank": r.rank, "full_rank": dim * dim })));
            }
            Ok(out)
        }
        Command::CheckModular => {
            let [f, w] = inputs::<2>(req)?;
            match modular_compatibility_defect(&family(f)?, &functional(w)?, tol) {
                Ok(r) => Ok(vec![
                    Check::defect("modular_identity", r.defect, tol),
                    Check::defect("left_inverse", r.left_inverse_defect, tol),
                    Check::defect("conjugate_isometry", r.conjugate_isometry_defect, tol),
                ]),
                Err(e) if is_hypothesis(&e) => Ok(vec![Check::hypothesis("hypothesis", e.to_string())]),
                Err(e) => Err(e.into()),
            }
        }
        Command::CheckPodles => {
            let [f] = inputs::<1>(req)?;
            let f = family(f)?;
            let r = podles_rank(&f)?;
            let total = f.layout().product().dim();
            Ok(vec![Check::predicate("podles_span", r.full, json!({ "rank": r.rank, "full_rank": total }))])
        }
        Command::EnumerateClassical => enumerate(req),
        Command::RunSuite => {
            inputs::<0>(req)?;
            let name = req.suite.as_deref().unwrap_or(suite::DEFAULT_SUITE);
            suite::run(name, req.seed)
        }
    }
}

/// Module errors that mean "the hypotheses of this check do not hold".
fn is_hypothesis(e: &qmaps_core::Error) -> bool {
    use qmaps_core::Error::*;
    matches!(e, Precondition(_) | DegenerateState(_) | MissingComponent(_))
}

fn hypothetical(name: &str, defect: qmaps_core::Result<f64>, tol: f64) -> Outcome<Vec<Check>> {
    match defect {
        Ok(d) => Ok(vec![Check::defect(name, d, tol)]),
        Err(e) if is_hypothesis(&e) => Ok(vec![Check::hypothesis(format!("hypothesis.{name}"), e.to_string())]),
        Err(e) => Err(e.into()),
    }
}

fn inputs<const N: usize>(req: &Request) -> Outcome<[&PathBuf; N]> {
    let refs: Vec<&PathBuf> = req.inputs.iter().collect();
    refs.try_into().map_err(|v: Vec<&PathBuf>| {
        CliError::Usage(format!("{} takes {N} input document(s), got {}", req.command.name(), v.len()))
    })
}

fn load(path: &Path, kind: Kind) -> Outcome<Document> {
    Ok(read_document(path, Some(kind))?)
}

fn morphism(path: &Path) -> Outcome<StarMorphism> {
    match load(path, Kind::Morphism)? {
        Document::Morphism(m) => Ok(m),
        _ => unreachable!("kind was requested"),
    }
}

fn family(path: &Path) -> Outcome<QuantumFamily> {
    match load(path, Kind::Family)? {
        Document::Family(f) => Ok(f),
        _ => unreachable!("kind was requested"),
    }
}

fn functional(path: &Path) -> Outcome<LinearFunctional> {
    match load(path, Kind::Functional)? {
        Document::Functional(f) => Ok(f),
        _ => unreachable!("kind was requested"),
    }
}

fn semigroup(path: &Path) -> Outcome<QuantumSemigroup> {
    match load(path, Kind::Semigroup)? {
        Document::Semigroup(s) => Ok(s),
        _ => unreachable!("kind was requested"),
    }
}

fn magic_document(path: &Path) -> Outcome<MagicDocument> {
    match load(path, Kind::Magic)? {
        Document::Magic(m) => Ok(m),
        _ => unreachable!("kind was requested"),
    }
}

fn hom_checks(prefix: &str, m: &StarMorphism, tol: f64) -> Vec<Check> {
    let d = m.defects();
    vec![
        Check::defect(format!("{prefix}multiplicativity"), d.mult_defect, tol),
        Check::defect(format!("{prefix}star"), d.star_defect, tol),
        Check::defect(format!("{prefix}unit"), d.unit_defect, tol),
    ]
}

fn compose(req: &Request) -> Outcome<Vec<Check>> {
    let families = req.inputs.iter().map(|p| family(p)).collect::<Outcome<Vec<_>>>()?;
    match families.as_slice() {
        [a, b] => {
            let c = compose_families(a, b)?;
            let mut checks = hom_checks("composite.", c.morphism(), req.tol);
            checks.push(Check::predicate(
                "composite.label",
                true,
                json!({ "label": c.label().to_string(), "source": c.source().to_string(), "target": c.target().to_string() }),
            ));
            Ok(checks)
        }
        [a, b, c] => {
            let left = compose_families(&compose_families(a, b)?, c)?;
            let right = compose_families(a, &compose_families(b, c)?)?;
            let scale = a.norm() * b.norm() * c.norm();
            let defect = left.morphism().distance(right.morphism())?;
            let mut checks = hom_checks("composite.", left.morphism(), req.tol);
            checks.push(
                Check::defect("associativity", defect, req.tol * scale).note(format!("tol scaled by operand norms {scale:.3}")),
            );
            Ok(checks)
        }
        _ => Err(CliError::Usage(format!("compose takes 2 or 3 family documents, got {}", families.len()))),
    }
}

fn invariant(f: &QuantumFamily, w: &LinearFunctional, tol: f64) -> Outcome<Vec<Check>> {
    let mut checks = Vec::new();
    if !w.classify_state() {
        checks.push(Check::hypothesis("hypothesis.state", "the functional is not a state (needs a positive density of trace 1)"));
    }
    let r = invariance_defects(f, w)?;
    checks.push(Check::defect("invariance", r.defect, tol));
    Ok(checks)
}

fn action(req: &Request) -> Outcome<Vec<Check>> {
    let (f, s, w) = match req.inputs.as_slice() {
        [f, s] => (f, s, None),
        [f, s, w] => (f, s, Some(w)),
        _ => {
            return Err(CliError::Usage(format!(
                "check-action takes a family, a semigroup and optionally a functional, got {} inputs",
                req.inputs.len()
            )))
        }
    };
    let (f, s) = (family(f)?, semigroup(s)?);
    let mut checks = vec![Check::defect("action", action_defect(&f, &s)?, req.tol)];
    if let Some(w) = w {
        match coideal_identity_defect(&f, &s, &functional(w)?) {
            Ok(d) => checks.push(Check::defect("coideal_identity", d, req.tol)),
            Err(e) if is_hypothesis(&e) => checks.push(Check::hypothesis("hypothesis.coideal_identity", e.to_string())),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(checks)
}

fn magic(req: &Request) -> Outcome<Vec<Check>> {
    let mut checks = Vec::new();
    let entries = match (req.theta, req.inputs.as_slice()) {
        (Some(theta), []) => {
            let (u, warning) = nonclassical_magic_4x4(theta);
            if warning == Some(GeneratorWarning::CommutingEntries) {
                checks.push(
                    Check::predicate("generator.noncommuting", true, json!(false))
                        .note(format!("theta = {theta} makes all entries commute")),
                );
            }
            u.entries().to_vec()
        }
        (None, [path]) => magic_document(path)?.entries,
        _ => return Err(CliError::Usage("check-magic takes either one magic document or --theta".into())),
    };
    let r = magic_unitary_check(&entries, req.tol)?;
    checks.extend([
        Check::defect("idempotent", r.idempotent, req.tol),
        Check::defect("self_adjoint", r.self_adjoint, req.tol),
        Check::defect("row_sums", r.row_sums, req.tol),
        Check::defect("column_sums", r.column_sums, req.tol),
        Check::predicate("max_commutator", true, json!(r.max_commutator)),
    ]);
    Ok(checks)
}

fn enumerate(req: &Request) -> Outcome<Vec<Check>> {
    inputs::<0>(req)?;
    let n = req.n.ok_or_else(|| CliError::Usage("enumerate-classical needs --n".into()))?;
    let maps = enumerate_set_maps(n)?;
    let expected = n.pow(n as u32);
    let worst = maps.iter().map(|m| m.defects().max()).fold(0.0, f64::max);
    let mut count = Check::predicate("count", maps.len() == expected, json!(maps.len()));
    if n <= 3 {
        let tables: Vec<Vec<usize>> = all_set_maps(n).into_iter().map(|t| t.into_iter().map(|v| v + 1).collect()).collect();
        count = count.note(format!("lookup tables {}", json!(tables)));
    }
    Ok(vec![count, Check::defect("homomorphism", worst, req.tol)])
}
