mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use evs_core::axioms::{validate_axioms, CheckMode};
use evs_core::basis::{self, BasisOutcome, FeasibleRepr};
use evs_core::element::{format_set, parse_element, parse_element_list, Element};
use evs_core::error::{EvsError, Result};
use evs_core::families::counterexample_h;
use evs_core::morphisms::{self, IsoSearch};
use evs_core::primitive;
use evs_core::scalar::{Field, Grid};
use evs_core::structure::{Feasibility, Instance, Membership};
use evs_core::{document, testing};

use report::{Header, Outcome, Status};

#[derive(Parser, Debug)]
#[command(name = "evs", version, about = "Exact computations on exponential vector spaces")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Check the evs axioms (exhaustive on finite carriers, sampled otherwise).
    Validate(Opts),
    /// The primitive elements X₀ and their vector-space dimension.
    X0(Opts),
    /// The primitives below --x.
    Primitives(Opts),
    /// L(--x), or whether --y belongs to it.
    TestingSet(Opts),
    /// Whether --set is orderly independent.
    Independent(Opts),
    /// Whether --set generates X∖X₀.
    Generator(Opts),
    /// The feasible set Q(X), or whether --x belongs to it.
    Qset(Opts),
    /// Find a basis, or certify --set as one.
    Basis(Opts),
    /// All bases of a finite evs, up to --budget of them.
    EnumerateBases(Opts),
    /// The dimension [α:β].
    Dimension(Opts),
    /// Replace --x by --y in the basis --set.
    Replace(Opts),
    /// Map the basis --set through b ↦ --alpha·b + --primitive.
    Transform(Opts),
    /// B(--x), or the graded subevs [--gamma:--delta] of the basis --set.
    Subevs(Opts),
    /// Describe a family and its recorded facts; --export prints the table.
    Family(Opts),
    /// The maximal independent set of three-point sets that does not generate.
    CounterexampleH(Opts),
    /// Verify the morphism document --file, or search for an isomorphism
    /// from --file to --target.
    Morphism(Opts),
    /// Axioms, testing-set properties, dimension and idempotents in one pass.
    Report(Opts),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Instance (or morphism) document.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Family tag, e.g. ray_product, hyperspace, subspace_lattice.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Prime of the scalar field (GF(p)); rational when absent.
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    dim: Option<usize>,
    /// Cardinality bound of sampled point sets.
    #[arg(long)]
    bound: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Grid bound for rational samples.
    #[arg(long, default_value_t = 4)]
    grid: i64,
    /// Largest grid denominator.
    #[arg(long, default_value_t = 4)]
    den: i64,
    /// Search budget (isomorphism nodes, enumerated bases).
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Include wall-clock time in the report.
    #[arg(long)]
    timing: bool,
    /// Element list, e.g. '{{0,1},{0,2}}'.
    #[arg(long)]
    set: Option<String>,
    #[arg(long)]
    x: Option<String>,
    #[arg(long)]
    y: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    primitive: Option<String>,
    #[arg(long)]
    gamma: Option<usize>,
    #[arg(long)]
    delta: Option<usize>,
    /// Second document for morphism search.
    #[arg(long)]
    target: Option<PathBuf>,
    #[arg(long)]
    export: bool,
}

impl Verb {
    fn parts(&self) -> (&'static str, &Opts) {
        match self {
            Verb::Validate(o) => ("validate", o),
            Verb::X0(o) => ("x0", o),
            Verb::Primitives(o) => ("primitives", o),
            Verb::TestingSet(o) => ("testing-set", o),
            Verb::Independent(o) => ("independent", o),
            Verb::Generator(o) => ("generator", o),
            Verb::Qset(o) => ("qset", o),
            Verb::Basis(o) => ("basis", o),
            Verb::EnumerateBases(o) => ("enumerate-bases", o),
            Verb::Dimension(o) => ("dimension", o),
            Verb::Replace(o) => ("replace", o),
            Verb::Transform(o) => ("transform", o),
            Verb::Subevs(o) => ("subevs", o),
            Verb::Family(o) => ("family", o),
            Verb::CounterexampleH(o) => ("counterexample-h", o),
            Verb::Morphism(o) => ("morphism", o),
            Verb::Report(o) => ("report", o),
        }
    }
}

fn input(msg: impl Into<String>) -> EvsError {
    EvsError::Input(msg.into())
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        EvsError::doc(
            format!("{}:{}:{}", path.display(), e.line(), e.column()),
            e.to_string(),
        )
    })
}

/// Builds the `family` document from the flags, letting the family schema
/// reject parameters that do not apply.
fn family_document(o: &Opts, tag: &str) -> Value {
    let mut spec = serde_json::Map::new();
    spec.insert("tag".into(), json!(tag));
    let field_tag = matches!(tag, "hyperspace" | "hyperspace_with_theta" | "trivial");
    if let Some(p) = o.p {
        if field_tag {
            spec.insert("field".into(), json!(format!("GF({p})")));
        } else {
            spec.insert("p".into(), json!(p));
        }
    }
    for (k, v) in [("n", o.n), ("m", o.m), ("dim", o.dim), ("bound", o.bound)] {
        if let Some(v) = v {
            spec.insert(k.into(), json!(v));
        }
    }
    json!({ "family": Value::Object(spec) })
}

struct Loaded {
    evs: Instance,
    document: Value,
}

fn load(o: &Opts, grid: Grid) -> Result<Loaded> {
    let document = match (&o.file, &o.family) {
        (Some(_), Some(_)) => return Err(input("give either --file or --family, not both")),
        (Some(path), None) => read_json(path)?,
        (None, Some(tag)) => family_document(o, tag),
        (None, None) => return Err(input("an instance is required: --file or --family")),
    };
    let evs = document::load_instance(&document, grid)?;
    Ok(Loaded { evs, document })
}

fn element(evs: &Instance, text: &Option<String>, flag: &str) -> Result<Element> {
    let text = text.as_ref().ok_or_else(|| input(format!("--{flag} is required")))?;
    let e = parse_element(text, evs.field()).map_err(|e| input(format!("--{flag}: {e}")))?;
    if !evs.contains(&e) {
        return Err(input(format!("--{flag}: {e} is not an element of {}", evs.name())));
    }
    Ok(e)
}

fn elements(evs: &Instance, text: &Option<String>, flag: &str) -> Result<Vec<Element>> {
    let text = text.as_ref().ok_or_else(|| input(format!("--{flag} is required")))?;
    let list = parse_element_list(text, evs.field()).map_err(|e| input(format!("--{flag}: {e}")))?;
    if let Some(bad) = list.iter().find(|e| !evs.contains(e)) {
        return Err(input(format!("--{flag}: {bad} is not an element of {}", evs.name())));
    }
    Ok(list)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn mode_of(evs: &Instance, seed: u64, samples: usize) -> CheckMode {
    if evs.as_finite().is_some() {
        CheckMode::Exhaustive
    } else {
        CheckMode::Sampled { seed, trials: samples }
    }
}

fn mode_label(mode: &CheckMode) -> String {
    match mode {
        CheckMode::Exhaustive => "exhaustive".into(),
        CheckMode::Sampled { seed, trials } => format!("sampled, seed {seed}, {trials} trials"),
    }
}

fn run(verb: &str, o: &Opts, grid: Grid, header: &mut Header) -> Result<Outcome> {
    let (seed, samples) = (o.seed, o.samples);
    if verb == "counterexample-h" {
        let h = counterexample_h(grid, seed, samples)?;
        header.instance = Some((
            format!("counterexample_h(grid ±{}, den {})", grid.bound, grid.max_den),
            report::digest(&json!({"counterexample_h": {"bound": grid.bound, "max_den": grid.max_den}})),
        ));
        let holds = h.independent() && h.maximal_at_grid_scale() && h.covering_member.is_none();
        let summary = if holds {
            format!(
                "maximal at grid scale, independent, {} uncovered ({} members)",
                h.uncovered,
                h.members.len()
            )
        } else {
            "counterexample does not hold at this grid".to_string()
        };
        return Ok(Outcome::verdict(holds, summary, to_value(&h))
            .detail(format!("independent: {}", h.independent()))
            .detail(format!("maximal at grid scale: {}", h.maximal_at_grid_scale()))
            .detail(format!("candidates checked: {}", h.candidates_checked)));
    }
    if verb == "morphism" {
        return morphism(o, grid, header);
    }

    let Loaded { evs, document } = load(o, grid)?;
    header.instance = Some((
        evs.name(),
        report::digest(&json!({"document": document, "grid": {"bound": grid.bound, "max_den": grid.max_den}})),
    ));

    Ok(match verb {
        "validate" => {
            let r = validate_axioms(&*evs, mode_of(&evs, seed, samples))?;
            let failed = r.failed();
            let summary = if failed.is_empty() {
                format!("all axioms hold ({})", mode_label(&r.mode))
            } else {
                let labels: Vec<&str> = failed.iter().map(|a| a.label()).collect();
                format!("fails {}", labels.join(", "))
            };
            let mut out = Outcome::verdict(failed.is_empty(), summary, to_value(&r));
            for v in &r.verdicts {
                if let evs_core::axioms::Outcome::Fail { witness } = &v.outcome {
                    out = out.detail(format!("{}: {} ({})", v.axiom.label(), v.axiom.statement(), witness));
                }
            }
            out
        }
        "x0" => {
            let s = primitive::primitive_space(&*evs, seed, samples)?;
            let mut out = Outcome::new(Status::Ok, format!("dim X₀ = {}", s.dimension), to_value(&s))
                .detail(format!("basis: {}", format_set(&s.basis)));
            if let Some(el) = &s.elements {
                out = out.detail(format!("X₀ = {}", format_set(el)));
            }
            out
        }
        "primitives" => {
            let x = element(&evs, &o.x, "x")?;
            let ps = primitive::primitives_of(&*evs, &x)?;
            Outcome::new(Status::Ok, format_set(&ps), json!({"element": x, "primitives": ps}))
        }
        "testing-set" => {
            let x = element(&evs, &o.x, "x")?;
            if o.y.is_some() {
                let y = element(&evs, &o.y, "y")?;
                match testing::membership(&*evs, &x, &y)? {
                    Membership::Member(w) => Outcome::verdict(
                        true,
                        format!("true: {y} ∈ L({x}) (α={}, p={})", w.alpha, w.primitive),
                        json!({"base": x, "element": y, "member": true, "witness": w}),
                    ),
                    Membership::NonMember => Outcome::verdict(
                        false,
                        format!("false: {y} ∉ L({x})"),
                        json!({"base": x, "element": y, "member": false}),
                    ),
                }
            } else {
                let t = testing::testing_set(&*evs, &x)?;
                let summary = match &t.repr {
                    testing::TestingSetRepr::Explicit { members } => format_set(members),
                    testing::TestingSetRepr::Predicate { rule } => rule.clone(),
                };
                Outcome::new(Status::Ok, summary, to_value(&t))
            }
        }
        "independent" => {
            let set = elements(&evs, &o.set, "set")?;
            let r = testing::independence(&*evs, &set)?;
            let summary = match &r.dependence {
                None => "true".to_string(),
                Some(d) => format!("false: {d}"),
            };
            Outcome::verdict(r.independent, summary, to_value(&r))
        }
        "generator" => {
            let set = elements(&evs, &o.set, "set")?;
            let r = testing::generator(&*evs, &set, seed, samples)?;
            let summary = match &r.uncovered {
                None => "true".to_string(),
                Some(z) => format!("false: {z} is uncovered"),
            };
            Outcome::verdict(r.generates, summary, to_value(&r)).detail(mode_label(&r.mode))
        }
        "qset" => {
            if o.x.is_some() {
                let x = element(&evs, &o.x, "x")?;
                match basis::feasibility(&*evs, &x)? {
                    Feasibility::Feasible => {
                        Outcome::verdict(true, format!("true: {x} ∈ Q"), json!({"element": x, "feasible": true}))
                    }
                    Feasibility::Infeasible { below } => Outcome::verdict(
                        false,
                        format!("false: {below} ≤ {x} lies outside L({x})"),
                        json!({"element": x, "feasible": false, "witness": below}),
                    ),
                }
            } else {
                let q = basis::feasible_set(&*evs)?;
                let summary = match &q.repr {
                    FeasibleRepr::Explicit { members } => format_set(members),
                    FeasibleRepr::Predicate { description } => description.clone(),
                };
                Outcome::new(Status::Ok, summary, to_value(&q))
            }
        }
        "basis" => {
            if o.set.is_some() {
                let set = elements(&evs, &o.set, "set")?;
                match basis::certify(&*evs, &set, seed, samples)? {
                    Ok(cert) => Outcome::verdict(
                        true,
                        format!("basis {}", cert.dimension),
                        json!({"certificate": cert}),
                    )
                    .with_dimension(to_value(&cert.dimension)),
                    Err(check) => Outcome::verdict(false, "not a basis", json!({"check": check})),
                }
            } else {
                let outcome = basis::find_basis(&*evs, seed, samples)?;
                let dim = to_value(&outcome.dimension());
                match &outcome {
                    BasisOutcome::Found(cert) => {
                        let listed = match &cert.schema {
                            Some(s) => s.clone(),
                            None => format_set(&cert.basis),
                        };
                        Outcome::new(Status::Ok, format!("{listed} {}", cert.dimension), to_value(&outcome))
                            .with_dimension(dim)
                    }
                    BasisOutcome::NoBasis(ev) => {
                        Outcome::new(Status::Ok, format!("no-basis ({})", ev.summary()), to_value(&outcome))
                            .with_dimension(dim)
                    }
                }
            }
        }
        "enumerate-bases" => {
            let fin = evs
                .as_finite()
                .ok_or_else(|| input(format!("{} is not finite; bases are enumerated on finite carriers", evs.name())))?;
            let limit = o.budget.unwrap_or(1000);
            let all = basis::enumerate_bases(fin, limit);
            let mut out = Outcome::new(
                Status::Ok,
                format!("{} bases", all.len()),
                json!({"bases": all, "limit": limit, "truncated": all.len() >= limit}),
            );
            for b in &all {
                out = out.detail(format_set(b));
            }
            out
        }
        "dimension" => {
            let d = basis::dimension(&*evs, seed, samples)?;
            Outcome::new(Status::Ok, d.to_string(), json!({"dimension": d})).with_dimension(to_value(&d))
        }
        "replace" => {
            let set = elements(&evs, &o.set, "set")?;
            let x = element(&evs, &o.x, "x")?;
            let y = element(&evs, &o.y, "y")?;
            let cert = basis::replace_basis_element(&*evs, &set, &x, &y, seed, samples)?;
            Outcome::verdict(true, format!("{} {}", format_set(&cert.basis), cert.dimension), to_value(&cert))
                .with_dimension(to_value(&cert.dimension))
        }
        "transform" => {
            let set = elements(&evs, &o.set, "set")?;
            let alpha = o.alpha.as_ref().ok_or_else(|| input("--alpha is required"))?;
            let alpha = evs.field().parse(alpha).map_err(|e| input(format!("--alpha: {e}")))?;
            let p = element(&evs, &o.primitive, "primitive")?;
            let cert = basis::transform_basis(&*evs, &set, &alpha, &p, seed, samples)?;
            Outcome::verdict(true, format!("{} {}", format_set(&cert.basis), cert.dimension), to_value(&cert))
                .with_dimension(to_value(&cert.dimension))
        }
        "subevs" => {
            let view = match (o.gamma, o.delta) {
                (None, None) => {
                    let x = element(&evs, &o.x, "x")?;
                    basis::construct_bx_subevs(&*evs, &x, seed, samples)?
                }
                (Some(g), Some(d)) => {
                    let set = elements(&evs, &o.set, "set")?;
                    basis::construct_graded_subevs(&*evs, &set, g, d, seed, samples)?
                }
                _ => return Err(input("--gamma and --delta go together")),
            };
            let mut out = Outcome::verdict(
                view.report.passed(),
                format!("subevs {} generated by {}", view.dimension, format_set(&view.generators)),
                to_value(&view),
            )
            .with_dimension(to_value(&view.dimension))
            .detail(format!("basis: {}", format_set(&view.basis)));
            if let Some(c) = &view.carrier {
                out = out.detail(format!("carrier: {} elements", c.len()));
            }
            out
        }
        "family" => family(&evs, o.export),
        "report" => full_report(&evs, seed, samples)?,
        other => unreachable!("verb {other} is dispatched above"),
    })
}

fn family(evs: &Instance, export: bool) -> Outcome {
    let table = evs.as_finite().map(document::export_table);
    if export {
        if let Some(t) = &table {
            let text = serde_json::to_string_pretty(t).expect("values serialize");
            return Outcome::new(Status::Ok, text, json!({"table": t}));
        }
    }
    let oracle = evs.oracle();
    let size = evs.as_finite().map(|f| f.len());
    let mut out = Outcome::new(
        Status::Ok,
        format!("{} over {}", evs.name(), evs.field()),
        json!({
            "name": evs.name(),
            "field": evs.field(),
            "size": size,
            "oracle": oracle,
            "table": table,
        }),
    );
    if let Some(n) = size {
        out = out.detail(format!("{n} elements"));
    }
    match &oracle {
        Some(or) => {
            out = out
                .with_dimension(to_value(&or.dimension))
                .detail(format!("dimension: {}", or.dimension))
                .detail(format!("Q: {}", or.q_description))
                .detail(format!("L: {}", or.l_rule));
        }
        None => out = out.detail("no recorded facts"),
    }
    out
}

fn full_report(evs: &Instance, seed: u64, samples: usize) -> Result<Outcome> {
    let axioms = validate_axioms(&**evs, mode_of(evs, seed, samples))?;
    let props = testing::check_l_properties(&**evs, seed, samples)?;
    let idem = primitive::detect_idempotents(&**evs, seed, samples);
    let dim = if axioms.all_pass() {
        match basis::dimension(&**evs, seed, samples) {
            Ok(d) => json!(d),
            Err(EvsError::Undecided(m)) => json!({"undecided": m}),
            Err(e) => return Err(e),
        }
    } else {
        Value::Null
    };
    let ok = axioms.all_pass() && props.all_pass();
    let summary = format!(
        "axioms {}, testing-set properties {}, dimension {}",
        if axioms.all_pass() { "hold" } else { "fail" },
        if props.all_pass() { "hold" } else { "fail" },
        match &dim {
            Value::Null => "not computed".to_string(),
            Value::Object(m) if m.contains_key("undecided") => "undecided".to_string(),
            d => render_dimension(d),
        },
    );
    let mut out = Outcome::verdict(
        ok,
        summary,
        json!({"axioms": axioms, "properties": props, "idempotents": idem, "dimension": dim}),
    )
    .detail(format!("idempotents: {}", format_set(&idem.elements)));
    if dim.is_object() && !dim.as_object().is_some_and(|m| m.contains_key("undecided")) || dim.is_string() {
        out = out.with_dimension(dim);
    }
    Ok(out)
}

fn render_dimension(d: &Value) -> String {
    match d {
        Value::String(s) => s.clone(),
        Value::Object(m) => format!(
            "[{}:{}]",
            m.get("evs").map(plain).unwrap_or_default(),
            m.get("primitive").map(plain).unwrap_or_default()
        ),
        other => other.to_string(),
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn morphism(o: &Opts, grid: Grid, header: &mut Header) -> Result<Outcome> {
    let path = o.file.as_ref().ok_or_else(|| input("--file is required"))?;
    let doc = read_json(path)?;
    if let Some(target) = &o.target {
        let tdoc = read_json(target)?;
        header.instance = Some((
            "isomorphism search".into(),
            report::digest(&json!({"source": doc, "target": tdoc, "grid": [grid.bound, grid.max_den]})),
        ));
        let x = document::load_instance(&doc, grid)?;
        let y = document::load_instance(&tdoc, grid)?;
        let (Some(fx), Some(fy)) = (x.as_finite(), y.as_finite()) else {
            return Err(input("isomorphism search needs finite carriers"));
        };
        let budget = o.budget.unwrap_or(1_000_000);
        return Ok(match morphisms::find_order_isomorphism(fx, fy, budget)? {
            IsoSearch::Found { pairs, nodes } => {
                let spec = morphisms::isomorphism_spec(x.clone(), y.clone(), &pairs);
                let r = morphisms::verify_order_morphism(&spec, o.seed, o.samples)?;
                if !r.is_isomorphism() {
                    return Err(EvsError::Internal("the search returned a map that does not verify".into()));
                }
                let mut out = Outcome::verdict(
                    true,
                    format!("isomorphism found ({nodes} nodes)"),
                    json!({"search": {"outcome": "found", "pairs": pairs, "nodes": nodes}, "report": r}),
                );
                for (a, b) in &pairs {
                    out = out.detail(format!("{a} ↦ {b}"));
                }
                out
            }
            IsoSearch::ProvenNone { reason, nodes } => Outcome::verdict(
                false,
                format!("no isomorphism: {reason}"),
                json!({"search": {"outcome": "proven_none", "reason": reason, "nodes": nodes}}),
            ),
        });
    }
    header.instance = Some((
        "morphism".into(),
        report::digest(&json!({"document": doc, "grid": [grid.bound, grid.max_den]})),
    ));
    let m = morphisms::load_morphism(&doc, grid)?;
    let r = morphisms::verify_order_morphism(&m, o.seed, o.samples)?;
    let name = |k| to_value(&k).as_str().unwrap_or_default().to_string();
    let kind = r.kind.map(name).unwrap_or_else(|| "not a morphism".into());
    let summary = format!("{}: claimed {}, found {kind}", r.holds, name(r.claimed));
    let mut out = Outcome::verdict(r.holds, summary, to_value(&r));
    for (label, v) in [
        ("additive", &r.additive),
        ("homogeneous", &r.homogeneous),
        ("monotone", &r.monotone),
        ("preimage", &r.preimage),
        ("injective", &r.injective),
        ("surjective", &r.surjective),
    ] {
        out = out.detail(match v {
            evs_core::axioms::Outcome::Fail { witness } => format!("{label}: fails at {witness}"),
            _ => format!("{label}: holds"),
        });
    }
    Ok(out)
}

fn configure_threads() {
    if let Some(n) = std::env::var("EVS_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Another pool may already exist in embedded use; the cap is advisory.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    configure_threads();
    let (verb, o) = cli.verb.parts();
    let mut header = Header {
        verb: verb.to_string(),
        command: argv[1..].to_vec(),
        seed: o.seed,
        samples: o.samples,
        grid: (o.grid, o.den),
        instance: None,
    };
    let start = Instant::now();
    let outcome = Grid::new(o.grid, o.den)
        .and_then(|grid| {
            if let Some(p) = o.p {
                Field::gf(p)?;
            }
            run(verb, o, grid, &mut header)
        })
        .unwrap_or_else(|e| Outcome::from_error(&e));
    let elapsed = o.timing.then(|| start.elapsed().as_millis());
    match o.format {
        Format::Machine => print!("{}", report::machine(&header, &outcome, elapsed)),
        Format::Human => {
            if outcome.status == Status::Ok || outcome.verdict.is_some() {
                print!("{}", report::human(&outcome, elapsed));
            } else {
                eprint!("{}", report::human(&outcome, elapsed));
            }
        }
    }
    ExitCode::from(outcome.status.code() as u8)
}
