use std::fmt;
use std::time::Instant;

use freemon::engine::{
    alg_free_condition, compare_chains, compatible_families, monoid_laws, universal_map, ActionObject,
    ChainOptions, ConstructionMode, MonoidObject, MonoidTruncation,
};
use freemon::finset::{free_monoid_on_set, FinSetBackend};
use freemon::fingrp::{abelianize, named, FinGrpBackend, GroupObject};
use freemon::gen::{self, InstanceRng};
use freemon::lemmas::{self, SuiteReport};
use freemon::span::{free_category, to_dot};
use freemon::{Backend, Error, Morphism, PointedObject};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::config::{BackendKind, CheckKind, ComputeArgs, Emit, LemmaArgs, ModeChoice};
use crate::input::{self, ParseError};
use crate::report::{CheckOutcome, RunReport, RunSummary, StageSummary};

const UNIVERSAL_INSTANCES: usize = 5;
const ACTION_INSTANCES: usize = 5;
const FAMILY_SEARCH_LIMIT: usize = 1 << 20;
const HOM_LIMIT: usize = 1 << 20;
const ABELIAN_TARGETS: [&str; 8] = ["Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "Z4xZ2"];

#[derive(Debug)]
pub enum CliError {
    Parse(ParseError),
    Capability(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Capability(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(e) => write!(f, "parse error: {e}"),
            CliError::Capability(m) => write!(f, "unsupported: {m}"),
            CliError::Failure(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Capability { .. } | Error::BoundExceeded(_) => CliError::Capability(e.to_string()),
            Error::Config(m) => CliError::Parse(ParseError {
                line: None,
                field: None,
                message: m,
            }),
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

type UniversalInstance<O> = (String, MonoidObject<O>, Morphism<O>);
type UniversalGen<'a, O> = &'a dyn Fn(&mut InstanceRng, &MonoidTruncation<O>) -> Result<UniversalInstance<O>, Error>;
type ActionGen<'a, O> = &'a dyn Fn(&mut InstanceRng, &PointedObject<O>) -> Result<(String, Morphism<O>), Error>;

pub struct Output {
    pub report: RunReport,
    pub dot: Option<String>,
}

fn modes(choice: ModeChoice) -> Vec<ConstructionMode> {
    match choice {
        ModeChoice::Reflexive => vec![ConstructionMode::Reflexive],
        ModeChoice::Dubuc => vec![ConstructionMode::Dubuc],
        ModeChoice::Both => vec![ConstructionMode::Reflexive, ConstructionMode::Dubuc],
    }
}

fn mode_name(mode: ConstructionMode) -> &'static str {
    match mode {
        ConstructionMode::Reflexive => "reflexive",
        ConstructionMode::Dubuc => "dubuc",
    }
}

fn group_backend(max_order: usize) -> FinGrpBackend {
    FinGrpBackend::with_max_order(max_order)
}

fn validate(args: &ComputeArgs) -> Result<(), CliError> {
    let backend = args.common.backend;
    if args.stages < 1 {
        return Err(CliError::Parse(ParseError {
            line: None,
            field: None,
            message: "--stages must be at least 1".into(),
        }));
    }
    if backend == BackendKind::Fingrp && args.mode != ModeChoice::Reflexive {
        return Err(CliError::Capability(
            "the plain construction needs a cocontinuous tensor, which groups lack".into(),
        ));
    }
    if args.common.emit == Emit::Dot && backend != BackendKind::Span {
        return Err(CliError::Capability("DOT output is only produced for graphs".into()));
    }
    if backend == BackendKind::Fingrp && args.checks.contains(&CheckKind::Lemmas) {
        return Err(CliError::Capability("lemma suites need coproducts, which groups lack".into()));
    }
    Ok(())
}

fn summarize<B: Backend + ?Sized>(
    b: &B,
    trunc: &MonoidTruncation<B::Object>,
    label: &dyn Fn(&B::Object, usize) -> String,
) -> RunSummary {
    let chain = trunc.chain();
    RunSummary {
        mode: mode_name(chain.mode),
        sizes: chain.sizes(b),
        stabilized_at: chain.stabilized_at,
        certified_truncation: chain.is_certified_truncation(),
        stages: chain
            .stages
            .iter()
            .map(|s| StageSummary {
                n: s.n,
                size: b.size(&s.object),
                elements: (0..b.size(&s.object)).map(|i| label(&s.object, i)).collect(),
            })
            .collect(),
        connecting: chain.connecting.iter().map(|j| j.map().to_vec()).collect(),
    }
}

fn laws_check<B: Backend + ?Sized>(b: &B, trunc: &MonoidTruncation<B::Object>) -> CheckOutcome {
    let report = monoid_laws(b, trunc);
    let mut out = CheckOutcome::new("laws");
    out.instances = report.checked;
    for f in &report.failures {
        out.fail(format!("{} at {:?}: {}", f.law, f.indices, f.detail));
    }
    out
}

fn agreement_check<B: Backend + ?Sized>(b: &B, runs: &[MonoidTruncation<B::Object>]) -> CheckOutcome {
    let mut out = CheckOutcome::new("reflexive/plain agreement");
    out.instances = 1;
    if let Err(e) = compare_chains(b, runs[0].chain(), runs[1].chain()) {
        out.fail(e.to_string());
    }
    out
}

/// Extends each pointed map stagewise and confirms it is the only
/// compatible family.
fn universal_check<B: Backend + ?Sized>(
    b: &B,
    trunc: &MonoidTruncation<B::Object>,
    instances: Vec<UniversalInstance<B::Object>>,
) -> CheckOutcome {
    let mut out = CheckOutcome::new("universal");
    for (name, target, f) in instances {
        out.instances += 1;
        let result = (|| -> Result<Option<String>, Error> {
            let report = universal_map(b, trunc, &target, &f)?;
            if !report.passed() {
                return Ok(Some(format!("{name}: {}", report.failures.join("; "))));
            }
            let families = compatible_families(b, trunc, &target, &f, 2, FAMILY_SEARCH_LIMIT)?;
            if families.len() != 1 {
                return Ok(Some(format!("{name}: {} compatible families", families.len())));
            }
            Ok(None)
        })();
        match result {
            Ok(None) => out.notes.push(format!("{name}: unique extension")),
            Ok(Some(why)) => out.fail(why),
            Err(e) => out.fail(format!("{name}: {e}")),
        }
    }
    out
}

fn alg_free_check<B: Backend + ?Sized>(
    b: &B,
    pointed: &PointedObject<B::Object>,
    actions: Vec<(String, Morphism<B::Object>)>,
) -> CheckOutcome {
    let mut out = CheckOutcome::new("alg-free");
    for (name, alpha) in actions {
        out.instances += 1;
        match ActionObject::new(b, pointed.clone(), alpha).and_then(|a| alg_free_condition(b, &a)) {
            Ok(v) => out.notes.push(format!("{name}: condition {}", if v { "holds" } else { "fails" })),
            Err(e) => out.fail(format!("{name}: {e}")),
        }
    }
    out
}

fn suite_check(name: &str, reports: Vec<SuiteReport>) -> CheckOutcome {
    let mut out = CheckOutcome::new(name);
    for r in reports {
        out.instances += r.instances;
        out.notes.push(format!("{}: {}/{} pass (seed {})", r.name, r.passes(), r.instances, r.seed));
        for (i, why) in r.failures {
            out.fail(format!("{} instance {i}: {why}", r.name));
        }
    }
    out
}

fn lemma_reports(backend: BackendKind, seed: u64, count: usize) -> Result<Vec<SuiteReport>, CliError> {
    Ok(match backend {
        BackendKind::Finset => vec![
            lemmas::cointersection_suite_finset(seed, count)?,
            lemmas::three_by_three_suite_finset(seed, count)?,
            lemmas::proposition_suite_finset(seed, count)?,
        ],
        BackendKind::Span => vec![
            lemmas::cointersection_suite_span(seed, count)?,
            lemmas::three_by_three_suite_span(seed, count)?,
            lemmas::proposition_suite_span(seed, count)?,
        ],
        BackendKind::Fingrp => {
            return Err(CliError::Capability("lemma suites need coproducts, which groups lack".into()))
        }
    })
}

struct Timer(Vec<(String, std::time::Duration)>);

impl Timer {
    fn time<T>(&mut self, name: impl Into<String>, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.0.push((name.into(), start.elapsed()));
        out
    }
}

/// Runs every requested mode, the agreement check and the requested checks
/// for one backend. `instances` builds seeded universal and action inputs.
#[allow(clippy::too_many_arguments)]
fn finish_compute<B: Backend + ?Sized>(
    b: &B,
    args: &ComputeArgs,
    report: &mut RunReport,
    timer: &mut Timer,
    runs: Vec<MonoidTruncation<B::Object>>,
    label: &dyn Fn(&B::Object, usize) -> String,
    universal: UniversalGen<B::Object>,
    action: ActionGen<B::Object>,
) -> Result<(), CliError> {
    report.runs = runs.iter().map(|t| summarize(b, t, label)).collect();
    if runs.len() == 2 {
        report.agreement = Some(timer.time("agreement", || agreement_check(b, &runs)));
    }
    let trunc = &runs[0];
    let mut rng = gen::rng(args.common.seed);
    for check in args.checks() {
        let outcome = match check {
            CheckKind::Laws => timer.time("laws", || laws_check(b, trunc)),
            CheckKind::Universal => {
                let instances = (0..UNIVERSAL_INSTANCES)
                    .map(|_| universal(&mut rng, trunc))
                    .collect::<Result<Vec<_>, _>>()?;
                timer.time("universal", || universal_check(b, trunc, instances))
            }
            CheckKind::Lemmas => {
                let reports = timer.time("lemmas", || lemma_reports(args.common.backend, args.common.seed, 200))?;
                suite_check("lemmas", reports)
            }
            CheckKind::AlgFree => {
                let pointed = &trunc.chain().pointed;
                let actions = (0..ACTION_INSTANCES)
                    .map(|_| action(&mut rng, pointed))
                    .collect::<Result<Vec<_>, _>>()?;
                timer.time("alg-free", || alg_free_check(b, pointed, actions))
            }
        };
        report.checks.push(outcome);
    }
    Ok(())
}

pub fn compute(args: &ComputeArgs) -> Result<Output, CliError> {
    validate(args)?;
    let text = input::read(&args.input)?;
    let mut timer = Timer(Vec::new());
    let mut report = RunReport {
        command: "compute",
        backend: args.common.backend,
        input: Some(args.input.display().to_string()),
        stages: Some(args.stages),
        mode: Some(args.mode),
        seed: args.common.seed,
        requested_checks: args.checks(),
        runs: Vec::new(),
        agreement: None,
        checks: Vec::new(),
        passed: true,
        timing: Vec::new(),
    };
    let options = |mode| {
        ChainOptions::new(args.stages)
            .with_mode(mode)
            .with_parallel(args.common.parallel)
    };
    let mut dot = None;
    match args.common.backend {
        BackendKind::Finset => {
            let b = FinSetBackend;
            let x = input::parse_set(&text)?;
            let mut frees = Vec::new();
            for mode in modes(args.mode) {
                frees.push(timer.time(mode_name(mode), || free_monoid_on_set(&b, &x, &options(mode)))?);
            }
            let first = frees[0].clone();
            let label = move |obj: &freemon::finset::FinSet, i: usize| {
                let w = first.word_of(obj, i);
                if w.is_empty() { "()".to_string() } else { w.join(".") }
            };
            let universal = |rng: &mut InstanceRng, t: &MonoidTruncation<_>| {
                let (labels, table, unit) = gen::random_table_monoid(rng, 12);
                let target = b.table_monoid(&labels, &table, unit)?;
                let f = gen::random_pointed_map(rng, &b, &t.chain().pointed, &target)?;
                Ok((format!("monoid of order {}", labels.len()), target, f))
            };
            let action = |rng: &mut InstanceRng, p: &PointedObject<_>| {
                let a = gen::random_set(rng, 1, 4, "a");
                Ok((format!("action on {} elements", a.len()), gen::random_unital_action(rng, &b, p, &a)?))
            };
            let runs = frees.into_iter().map(|f| f.truncation).collect();
            finish_compute(&b, args, &mut report, &mut timer, runs, &label, &universal, &action)?;
        }
        BackendKind::Span => {
            let (b, graph) = input::parse_graph(&text)?;
            let mut frees = Vec::new();
            for mode in modes(args.mode) {
                frees.push(timer.time(mode_name(mode), || free_category(&b, &graph, &options(mode)))?);
            }
            let first = frees[0].clone();
            if args.common.emit == Emit::Dot {
                let chain = first.truncation.chain();
                let stage = &chain.stages[chain.stabilized_at.unwrap_or(chain.depth())];
                dot = Some(to_dot(&b, &first, &stage.object));
            }
            let vertices = b.vertices().to_vec();
            let label_backend = b.clone();
            let label = move |obj: &freemon::span::Span, i: usize| {
                let (s, labels, t) = first.path_of(&label_backend, obj, i);
                let name = if labels.is_empty() { "id".to_string() } else { labels.join(".") };
                format!("{name}: {} -> {}", vertices[s], vertices[t])
            };
            let universal = |rng: &mut InstanceRng, t: &MonoidTruncation<_>| {
                let m = rng.gen_range(1..=2);
                let target = b.cyclic_hom_category(m)?;
                let f = gen::random_pointed_map(rng, &b, &t.chain().pointed, &target)?;
                Ok((format!("hom-sets Z/{m}"), target, f))
            };
            let action = |rng: &mut InstanceRng, p: &PointedObject<_>| {
                let a = gen::random_complete_span(rng, &b, 2);
                Ok((format!("action on {} arrows", a.len()), gen::random_unital_action(rng, &b, p, &a)?))
            };
            let runs = frees.into_iter().map(|f| f.truncation).collect();
            finish_compute(&b, args, &mut report, &mut timer, runs, &label, &universal, &action)?;
        }
        BackendKind::Fingrp => {
            let b = group_backend(args.common.max_order);
            let g = input::parse_group(&text)?;
            let trunc = timer.time("reflexive", || abelianize(&b, &g, &options(ConstructionMode::Reflexive)))?;
            let label = |obj: &GroupObject, i: usize| obj.label(i);
            let target_group = |rng: &mut InstanceRng| -> Result<(&str, GroupObject), Error> {
                let name = ABELIAN_TARGETS.choose(rng).expect("non-empty");
                Ok((name, b.object(named(name)?)?))
            };
            let universal = |rng: &mut InstanceRng, t: &MonoidTruncation<GroupObject>| {
                let (name, a) = target_group(rng)?;
                let homs = b.enumerate_homs(t.chain().pointed.carrier(), &a, HOM_LIMIT)?;
                let f = homs.choose(rng).expect("the trivial homomorphism exists").clone();
                Ok((format!("homomorphism into {name}"), b.abelian_monoid(&a)?, f))
            };
            let action = |rng: &mut InstanceRng, p: &PointedObject<GroupObject>| {
                let (name, a) = target_group(rng)?;
                Ok((format!("action on {name}"), gen::random_group_action(rng, &b, p, &a)?))
            };
            finish_compute(&b, args, &mut report, &mut timer, vec![trunc], &label, &universal, &action)?;
        }
    }
    report.timing = timer.0;
    report.finish();
    Ok(Output { report, dot })
}

pub fn check_lemmas(args: &LemmaArgs) -> Result<Output, CliError> {
    if args.common.emit == Emit::Dot {
        return Err(CliError::Capability("DOT output is only produced by compute on graphs".into()));
    }
    let mut timer = Timer(Vec::new());
    let reports = timer.time("lemmas", || lemma_reports(args.common.backend, args.common.seed, args.count))?;
    let mut report = RunReport {
        command: "check-lemmas",
        backend: args.common.backend,
        input: None,
        stages: None,
        mode: None,
        seed: args.common.seed,
        requested_checks: vec![CheckKind::Lemmas],
        runs: Vec::new(),
        agreement: None,
        checks: vec![suite_check("lemmas", reports)],
        passed: true,
        timing: timer.0,
    };
    report.finish();
    Ok(Output { report, dot: None })
}
