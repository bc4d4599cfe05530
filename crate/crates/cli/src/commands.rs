use std::fmt::Write as _;
use std::path::Path;
use std::time::Duration;

use num_bigint::BigInt;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use diffnull::bounds::{ack_exact, degree_growth_step, p_bound, structural_bounds, t_bound_closed, AckExpr};
use diffnull::diff::{AnySystem, DiffSystem};
use diffnull::dickson::{is_dicksonian, pad_construction, search_max_length_with_budget, GrowthFn, Tuple};
use diffnull::nullstellensatz::{example_family, minimal_t, Example, MinimalT, Status};
use diffnull::poly::{Caps, Field};
use diffnull::problem::{parse_problem, print_problem};
use diffnull::rgbound::{rgbound_decompose, verify_trace, Component, DecomposeError, Decomposition, RgCaps};
use diffnull::with_system;

use crate::report::{Failure, Report, EXIT_CAP, EXIT_NOT_FOUND, EXIT_OK};

type Outcome = Result<(Report, u8), Failure>;

fn load_problem(path: &Path) -> Result<AnySystem, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    parse_problem(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// Inline JSON, or a path to a JSON file.
fn load_json<T: DeserializeOwned>(arg: &str, what: &str) -> Result<T, Failure> {
    let t = arg.trim_start();
    let text = if t.starts_with('[') || t.starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure::usage(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("invalid {what}: {e}")))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn ring_inputs<K: Field>(path: &Path, sys: &DiffSystem<K>) -> Value {
    let ring = &sys.ring;
    json!({
        "file": path.display().to_string(),
        "field": K::KIND,
        "derivations": ring.m(),
        "indeterminates": ring.names(),
        "F": sys.generators.iter().map(|g| g.display(ring).to_string()).collect::<Vec<_>>(),
        "f": sys.f.display(ring).to_string(),
    })
}

fn component_json<K: Field>(sys: &DiffSystem<K>, c: &Component<K>) -> Value {
    json!({
        "kind": c.kind,
        "item": c.item,
        "coherent": c.coherent,
        "set": c.set.elements().iter().map(|p| p.display(&sys.ring).to_string()).collect::<Vec<_>>(),
    })
}

fn trace_json<K: Field>(sys: &DiffSystem<K>, d: &Decomposition<K>) -> Value {
    json!({
        "schema": crate::report::SCHEMA_VERSION,
        "iterations": d.trace,
        "components": d.components.iter().map(|c| component_json(sys, c)).collect::<Vec<_>>(),
    })
}

pub fn decompose(file: &Path, trace: Option<&Path>, verify: bool, max_iterations: u64, time_ms: Option<u64>) -> Outcome {
    let any = load_problem(file)?;
    let caps = RgCaps { max_iterations, max_time: time_ms.map(Duration::from_millis), ..RgCaps::default() };
    with_system!(&any, sys => decompose_typed(file, sys, trace, verify, &caps))
}

fn decompose_typed<K: Field>(file: &Path, sys: &DiffSystem<K>, trace: Option<&Path>, verify: bool, caps: &RgCaps) -> Outcome {
    let inputs = ring_inputs(file, sys);
    let caps_json = to_value(caps);
    let (d, capped) = match rgbound_decompose(sys, caps) {
        Ok(d) => (d, None),
        Err(DecomposeError::Usage(msg)) => return Err(Failure::usage(msg)),
        Err(DecomposeError::Capped { reason, partial }) => (*partial, Some(reason)),
    };
    if let Some(path) = trace {
        let text = serde_json::to_string_pretty(&trace_json(sys, &d)).expect("serializable") + "\n";
        std::fs::write(path, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    }

    let mut human = String::new();
    let ring = &sys.ring;
    writeln!(human, "iterations: {}", d.trace.len()).unwrap();
    let chars: Vec<_> = d.characteristic().collect();
    writeln!(human, "characteristic candidates: {}", chars.len()).unwrap();
    for c in &chars {
        let set: Vec<String> = c.set.elements().iter().map(|p| p.display(ring).to_string()).collect();
        let coherent = match c.coherent {
            Some(true) => "coherent",
            Some(false) => "not coherent",
            None => "coherence unknown",
        };
        writeln!(human, "  {{{}}} ({coherent})", set.join(", ")).unwrap();
    }
    writeln!(human, "inconsistent witnesses: {}", d.inconsistent().count()).unwrap();
    let mut results = json!({
        "iterations": d.trace.len(),
        "components": d.components.iter().map(|c| component_json(sys, c)).collect::<Vec<_>>(),
    });
    if verify {
        let v = verify_trace(&d, sys);
        writeln!(human, "verify: {}", if v.all_pass() { "pass" } else { "FAIL" }).unwrap();
        writeln!(human, "  dicksonian lineages: {}", v.dicksonian).unwrap();
        writeln!(human, "  degree growth: {}", v.degree_growth).unwrap();
        writeln!(human, "  longest chain: {} (Q = {})", v.max_chain, v.q).unwrap();
        for msg in &v.violations {
            writeln!(human, "  violation: {msg}").unwrap();
        }
        results["verify"] = to_value(&v);
    }
    let report = Report::new("decompose", inputs, results, caps_json, human);
    match capped {
        None => Ok((report, EXIT_OK)),
        Some(reason) => Err(Failure { code: EXIT_CAP, msg: format!("resource cap exceeded: {reason}"), report: Some(Box::new(report)) }),
    }
}

pub fn min_order(file: &Path, h_max: u32, time_ms: Option<u64>) -> Outcome {
    let any = load_problem(file)?;
    let caps = match time_ms {
        Some(ms) => Caps::default().with_time_ms(ms),
        None => Caps::default(),
    };
    let caps_json = json!({ "max_basis": caps.max_basis, "max_terms": caps.max_terms, "max_time_ms": caps.max_time_ms });
    let inputs = with_system!(&any, s => ring_inputs(file, s));
    let res = with_system!(&any, s => minimal_t(s, h_max, &caps))?;

    let mut human = String::new();
    for v in res.verdicts() {
        let status = match v.status {
            Status::InRadical => "in radical",
            Status::NotInRadical => "not in radical",
            Status::InconclusiveCap => "inconclusive",
        };
        writeln!(human, "h = {}: {status}", v.h).unwrap();
    }
    let code = match &res {
        MinimalT::Found { t, .. } => {
            writeln!(human, "t = {t}").unwrap();
            EXIT_OK
        }
        MinimalT::NotFound { h_max, .. } => {
            writeln!(human, "not found by h = {h_max}").unwrap();
            EXIT_NOT_FOUND
        }
    };
    let mut inputs = inputs;
    inputs["h_max"] = json!(h_max);
    Ok((Report::new("min-order", inputs, to_value(&res), caps_json, human), code))
}

pub fn bound(file: &Path, bit_cap: u64) -> Outcome {
    let any = load_problem(file)?;
    with_system!(&any, s => bound_typed(file, s, bit_cap))
}

fn bound_typed<K: Field>(file: &Path, sys: &DiffSystem<K>, bit_cap: u64) -> Outcome {
    let (m, n) = (sys.ring.m() as u32, sys.ring.n() as u64);
    let stats = sys.stats();
    let with_f = sys.stats_with_f();
    let mut report = structural_bounds(&stats, m, n)?;
    report.push("t", "A(m+8, max(n, H(F ∪ f), D(F ∪ f)))", t_bound_closed(&with_f, m, n)?);
    report.push(
        "degree-step",
        "(4D)^(C(2H+m, m) + 1)",
        degree_growth_step(stats.max_degree as u64, stats.max_order as u64, m as u64),
    );
    report.push("p", "n * 2^(H+m)", p_bound(n, stats.max_order as u64, m as u64));

    let mut human = String::new();
    writeln!(human, "m = {m}, n = {n}, H = {}, D = {}", stats.max_order, stats.max_degree).unwrap();
    let mut entries = Vec::new();
    for e in &report.entries {
        let value = e.value.simplify(bit_cap);
        writeln!(human, "{} = {}\n    {value}", e.name, e.formula).unwrap();
        entries.push(json!({
            "name": e.name,
            "formula": e.formula,
            "value": value.to_string(),
            "exact": value.as_const().is_some(),
        }));
    }
    let mut inputs = ring_inputs(file, sys);
    inputs["H"] = json!(stats.max_order);
    inputs["D"] = json!(stats.max_degree);
    let caps = json!({ "bit_cap": bit_cap });
    Ok((Report::new("bound", inputs, json!({ "entries": entries }), caps, human), EXIT_OK))
}

pub fn dickson_check(seq: &str) -> Outcome {
    let seq: Vec<Tuple> = load_json(seq, "sequence")?;
    let ok = is_dicksonian(&seq)?;
    let human = format!("dicksonian: {ok}\n");
    Ok((Report::new("dickson-check", json!({ "sequence": seq }), json!({ "dicksonian": ok }), json!({}), human), EXIT_OK))
}

pub fn dickson_pad(seq: &str, f: &str, d: usize) -> Outcome {
    let seq: Vec<Tuple> = load_json(seq, "sequence")?;
    let growth: GrowthFn = load_json(f, "growth function")?;
    let out = pad_construction(&seq, &growth, d)?;
    let human = serde_json::to_string(&out).expect("serializable") + "\n";
    let inputs = json!({ "sequence": seq, "f": growth, "d": d });
    Ok((Report::new("dickson-pad", inputs, json!({ "sequence": out, "length": out.len() }), json!({}), human), EXIT_OK))
}

pub fn dickson_search(f: &str, n: usize, coord_cap: u64, budget: u64) -> Outcome {
    let growth: GrowthFn = load_json(f, "growth function")?;
    if n == 0 {
        return Err(Failure::usage("n must be at least 1"));
    }
    let r = search_max_length_with_budget(n, &growth, coord_cap, budget);
    let mut human = format!("length: {}{}\n", r.length, if r.conclusive { "" } else { " (inconclusive: lower bound)" });
    writeln!(human, "witness: {}", serde_json::to_string(&r.witness).expect("serializable")).unwrap();
    let inputs = json!({ "f": growth, "n": n });
    let caps = json!({ "coord_cap": coord_cap, "budget": budget });
    let code = if r.conclusive { EXIT_OK } else { EXIT_CAP };
    Ok((Report::new("dickson-search", inputs, to_value(&r), caps, human), code))
}

pub fn ackermann(m: u32, n: &str, bit_cap: u64) -> Outcome {
    let nb: BigInt = n.parse().map_err(|_| Failure::usage(format!("'{n}' is not an integer")))?;
    if nb < BigInt::from(0) {
        return Err(Failure::usage("N must be non-negative"));
    }
    let inputs = json!({ "m": m, "n": nb.to_string() });
    let caps = json!({ "bit_cap": bit_cap });
    match ack_exact(m, &nb, bit_cap) {
        Some(v) => {
            let human = format!("{v}\n");
            Ok((Report::new("ackermann", inputs, json!({ "value": v.to_string(), "exact": true }), caps, human), EXIT_OK))
        }
        None => {
            let sym = AckExpr::ack(m, AckExpr::Const(nb)).to_string();
            let human = format!("{sym}\n");
            let report = Report::new("ackermann", inputs, json!({ "value": sym, "exact": false }), caps, human);
            Err(Failure {
                code: EXIT_CAP,
                msg: format!("A({m}, {n}) exceeds {bit_cap} bits"),
                report: Some(Box::new(report)),
            })
        }
    }
}

pub fn parse_example(family: &str, param: u32) -> Result<Example, Failure> {
    Ok(match family {
        "ex1" => Example::Ex1(param),
        "ex2" => Example::Ex2(param),
        "ex3" => Example::Ex3(param),
        "ex4" => Example::Ex4(param),
        _ => return Err(Failure::usage(format!("unknown example family '{family}' (expected ex1..ex4)"))),
    })
}

pub fn example(family: &str, param: u32, output: Option<&Path>) -> Outcome {
    let ex = parse_example(family, param)?;
    let text = print_problem(&example_family(ex)?);
    let human = match output {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
            String::new()
        }
        None => text.clone(),
    };
    let inputs = json!({ "family": family, "param": param });
    let results = json!({ "problem": text, "claimed_t": ex.claimed_t() });
    Ok((Report::new("example", inputs, results, json!({}), human), EXIT_OK))
}
