//! One function per subcommand, each producing a verdict, a JSON payload
//! and a text rendering.

use std::fmt::Write as _;

use anyhow::{bail, Result};
use cauchon::cells::{self, admissible_families, is_admissible, unifying_check};
use cauchon::derivations::{
    deleting_derivations_trace, restoration_trace, tc_ones, tc_symbolic, tnn_test, vanishing_family, Trace, ZeroTest,
};
use cauchon::diagram::{count_diagrams, enumerate_diagrams};
use cauchon::exactmat::{all_minors, initial_minors, is_tnn_bruteforce, is_tp, minor, Matrix};
use cauchon::network::{nonintersecting_count, path_matrix as net_path_matrix, postnikov_network};
use cauchon::perm::{
    bruhat_leq, enumerate_s, inverse_pipe_dream, length, m_of_w, one_line_string, parse_perm, pipe_dream, rank_profile,
};
use cauchon::poisson::{verify_flow, FlowPath, PoissonAlgebra};
use cauchon::quantum::{commutator, parse_qpoly, quantum_minor as qminor};
use cauchon::{CauchonDiagram, Error, MinorFamily, MinorIndex, Rat, RatMatrix, RestrictedPermutation};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::input::{self, Grid};
use crate::TnnMethod;

pub struct Report {
    pub ok: bool,
    pub json: Value,
    pub text: String,
}

impl Report {
    fn new(ok: bool, json: Value, text: impl Into<String>) -> Report {
        Report { ok, json, text: text.into() }
    }
}

fn matrix_json(m: &RatMatrix) -> Value {
    serde_json::to_value(m.to_json()).expect("serialisable")
}

fn generic_matrix_json<T: std::fmt::Display + cauchon::symfun::Scalar>(m: &Matrix<T>) -> Value {
    let entries: Vec<Vec<String>> =
        m.row_vecs().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    json!({ "m": m.rows(), "p": m.cols(), "entries": entries })
}

fn one_line_diagram(c: &CauchonDiagram) -> String {
    c.to_string().trim_end().replace('\n', "/")
}

fn perm_text(w: &RestrictedPermutation) -> String {
    one_line_string(w.one_line())
}

fn minor_list(list: &[(MinorIndex, Rat)]) -> (Value, String) {
    let json: Vec<Value> = list.iter().map(|(ix, v)| json!({ "minor": ix.to_string(), "value": v.to_string() })).collect();
    let mut text = String::new();
    for (ix, v) in list {
        let _ = writeln!(text, "{ix} = {v}");
    }
    (Value::Array(json), text)
}

pub fn minors(arg: &str, initial: bool) -> Result<Report> {
    let mat = input::matrix(arg)?;
    let list = if initial { initial_minors(&mat)? } else { all_minors(&mat) };
    let (values, text) = minor_list(&list);
    Ok(Report::new(true, json!({ "m": mat.rows(), "p": mat.cols(), "minors": values }), text))
}

pub fn tp_check(arg: &str) -> Result<Report> {
    let mat = input::matrix(arg)?;
    let tp = is_tp(&mat)?;
    let initial = initial_minors(&mat)?;
    let failing: Option<&(MinorIndex, Rat)> = initial.iter().find(|(_, v)| *v <= Rat::from_integer(0.into()));
    let json = json!({
        "tp": tp,
        "initial_minors": initial.len(),
        "failing": failing.map(|(ix, v)| json!({ "minor": ix.to_string(), "value": v.to_string() })),
    });
    let text = match failing {
        None => format!("totally positive ({} initial minors positive)\n", initial.len()),
        Some((ix, v)) => format!("not totally positive: initial minor {ix} = {v}\n"),
    };
    Ok(Report::new(tp, json, text))
}

pub fn tnn_check(arg: &str, method: TnnMethod) -> Result<Report> {
    let mat = input::matrix(arg)?;
    let mut json = serde_json::Map::new();
    let mut text = String::new();
    let mut verdicts = Vec::new();
    if method != TnnMethod::Derivations {
        let v = is_tnn_bruteforce(&mat);
        verdicts.push(v.is_tnn);
        json.insert("minors_checked".into(), json!(v.minors_checked));
        json.insert(
            "witness".into(),
            json!(v.witness.as_ref().map(|(ix, val)| json!({ "minor": ix.to_string(), "value": val.to_string() }))),
        );
        match &v.witness {
            None => {
                let _ = writeln!(text, "brute force: TNN ({} minors checked)", v.minors_checked);
            }
            Some((ix, val)) => {
                let _ = writeln!(text, "brute force: not TNN, minor {ix} = {val}");
            }
        }
    }
    if method != TnnMethod::Brute {
        let t = tnn_test(&mat);
        verdicts.push(t.is_tnn);
        json.insert("derivations".into(), json!(t.is_tnn));
        json.insert("diagram".into(), serde_json::to_value(&t.diagram)?);
        json.insert("final_matrix".into(), matrix_json(&t.final_matrix));
        match &t.diagram {
            Some(d) => {
                let _ = writeln!(text, "deleting derivations: TNN, diagram {}", one_line_diagram(d));
            }
            None => {
                let _ = writeln!(text, "deleting derivations: not TNN");
            }
        }
    }
    if verdicts.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::Invariant("brute force and deleting derivations disagree".into()).into());
    }
    let tnn = verdicts[0];
    json.insert("tnn".into(), json!(tnn));
    Ok(Report::new(tnn, Value::Object(json), text))
}

fn trace_report(result: &RatMatrix, trace: Option<&Trace<Rat>>) -> Report {
    let mut text = String::new();
    let mut json = json!({ "result": matrix_json(result) });
    if let Some(trace) = trace {
        let steps: Vec<Value> =
            trace.iter().map(|(s, m)| json!({ "step": s.to_string(), "matrix": matrix_json(m) })).collect();
        json["trace"] = Value::Array(steps);
        for (s, m) in trace {
            let _ = writeln!(text, "after {s}:\n{m}");
        }
    }
    text.push_str(&result.to_string());
    Report::new(true, json, text)
}

pub fn restore(arg: &str, trace: bool) -> Result<Report> {
    let mat = input::matrix(arg)?;
    let steps = restoration_trace(&mat)?;
    let result = steps.last().map_or_else(|| mat.clone(), |(_, m)| m.clone());
    Ok(trace_report(&result, trace.then_some(&steps)))
}

pub fn delete(arg: &str, trace: bool) -> Result<Report> {
    let mat = input::matrix(arg)?;
    let steps = deleting_derivations_trace(&mat)?;
    let result = steps.last().map_or_else(|| mat.clone(), |(_, m)| m.clone());
    Ok(trace_report(&result, trace.then_some(&steps)))
}

pub fn tc(arg: &str, ones: bool) -> Result<Report> {
    let c = input::diagram(arg)?;
    if ones {
        let m = tc_ones(&c);
        Ok(Report::new(true, matrix_json(&m), m.to_string()))
    } else {
        let m = tc_symbolic(&c);
        Ok(Report::new(true, generic_matrix_json(&m), m.to_string()))
    }
}

pub fn vanish(arg: &str, test: ZeroTest) -> Result<Report> {
    let c = input::diagram(arg)?;
    let fam = vanishing_family(&c, test)?;
    Ok(Report::new(true, serde_json::to_value(&fam)?, format!("{fam}\n")))
}

pub fn diagram_enum(m: usize, p: usize, count_only: bool) -> Result<Report> {
    if count_only {
        let n = count_diagrams(m, p);
        return Ok(Report::new(true, json!({ "m": m, "p": p, "count": n.to_string() }), format!("{n}\n")));
    }
    let all = enumerate_diagrams(m, p)?;
    let mut text = String::new();
    for c in &all {
        let _ = writeln!(text, "{c}");
    }
    let _ = writeln!(text, "{} diagrams", all.len());
    Ok(Report::new(true, json!({ "m": m, "p": p, "count": all.len(), "diagrams": all }), text))
}

pub fn diagram_check(arg: &str) -> Result<Report> {
    let grid = Grid::parse(arg)?;
    let ok = grid.is_cauchon()?;
    let bad = grid.offending_cells();
    let text = if ok {
        "Cauchon diagram\n".to_string()
    } else {
        let cells: Vec<String> = bad.iter().map(|(i, a)| format!("({i},{a})")).collect();
        format!("not a Cauchon diagram: black cells {} have white cells both to the left and above\n", cells.join(" "))
    };
    Ok(Report::new(ok, json!({ "cauchon": ok, "m": grid.m, "p": grid.p, "offending": bad }), text))
}

pub fn network_from_diagram(arg: &str) -> Result<Report> {
    let net = postnikov_network(&input::diagram(arg)?);
    Ok(Report::new(true, serde_json::to_value(&net)?, net.to_dot()))
}

pub fn path_matrix(network: Option<&str>, diagram: Option<&str>) -> Result<Report> {
    let net = input::network(network, diagram)?;
    let m = net_path_matrix(&net)?;
    Ok(Report::new(true, matrix_json(&m), m.to_string()))
}

pub fn lindstrom(network: Option<&str>, diagram: Option<&str>, which: Option<&str>) -> Result<Report> {
    let net = input::network(network, diagram)?;
    let pm = net_path_matrix(&net)?;
    let indices: Vec<MinorIndex> = match which {
        Some(s) => vec![s.parse()?],
        None => all_minors(&pm).into_iter().map(|(ix, _)| ix).collect(),
    };
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut agree = 0;
    for ix in &indices {
        let value = minor(&pm, ix)?;
        let count = nonintersecting_count(&net, ix)?;
        let same = value == count.signed;
        agree += usize::from(same);
        rows.push(json!({
            "minor": ix.to_string(),
            "determinant": value.to_string(),
            "path_count": count.signed.to_string(),
            "families": count.families,
            "agree": same,
        }));
        let mark = if same { "ok" } else { "MISMATCH" };
        let _ = writeln!(text, "{ix}: det {value}, paths {} ({} families) {mark}", count.signed, count.families);
    }
    let ok = agree == indices.len();
    let _ = writeln!(text, "{agree}/{} agree", indices.len());
    Ok(Report::new(ok, json!({ "agreed": agree, "total": indices.len(), "minors": rows }), text))
}

pub fn perm_enum(m: usize, p: usize) -> Result<Report> {
    cauchon::guard::check(cauchon::guard::GuardKind::Enumeration, m, p)?;
    let all = enumerate_s(m, p);
    let profile = rank_profile(&all);
    let mut text = String::new();
    for w in &all {
        let _ = writeln!(text, "{}  length {}  {}", perm_text(w), w.length(), w.cycles());
    }
    let _ = writeln!(text, "{} permutations, rank profile {profile:?}", all.len());
    let list: Vec<Value> = all
        .iter()
        .map(|w| json!({ "one_line": w.one_line(), "length": w.length(), "cycles": w.cycles() }))
        .collect();
    Ok(Report::new(true, json!({ "m": m, "p": p, "count": all.len(), "rank_profile": profile, "permutations": list }), text))
}

pub fn pipedream(arg: &str) -> Result<Report> {
    let w = pipe_dream(&input::diagram(arg)?);
    let json = json!({ "m": w.m(), "p": w.p(), "one_line": w.one_line(), "cycles": w.cycles() });
    Ok(Report::new(true, json, format!("{}\n", perm_text(&w))))
}

pub fn perm_inverse(m: usize, p: usize, perm: &str) -> Result<Report> {
    let w = RestrictedPermutation::parse(m, p, perm)?;
    let c = inverse_pipe_dream(&w)?;
    Ok(Report::new(true, serde_json::to_value(&c)?, c.to_string()))
}

pub fn mw(m: usize, p: usize, perm: &str) -> Result<Report> {
    let w = RestrictedPermutation::parse(m, p, perm)?;
    let fam = m_of_w(&w);
    Ok(Report::new(true, serde_json::to_value(&fam)?, format!("{fam}\n")))
}

pub fn bruhat(m: usize, p: usize, u: Option<&str>, w: Option<&str>) -> Result<Report> {
    match (u, w) {
        (Some(u), Some(w)) => {
            let u = parse_perm(u, Some(m + p))?;
            let w = parse_perm(w, Some(m + p))?;
            let leq = bruhat_leq(&u, &w);
            let (su, sw) = (one_line_string(&u), one_line_string(&w));
            let json = json!({ "u": u, "w": w, "leq": leq, "length_u": length(&u), "length_w": length(&w) });
            let rel = if leq { "<=" } else { "is not <=" };
            Ok(Report::new(leq, json, format!("{su} {rel} {sw}\n")))
        }
        (None, None) => {
            cauchon::guard::check(cauchon::guard::GuardKind::Enumeration, m, p)?;
            let profile = rank_profile(&enumerate_s(m, p));
            Ok(Report::new(true, json!({ "m": m, "p": p, "rank_profile": profile }), format!("{profile:?}\n")))
        }
        _ => bail!(Error::Domain("give both permutations or neither".into())),
    }
}

pub fn cells_enum(m: usize, p: usize) -> Result<Report> {
    let all = admissible_families(m, p)?;
    let mut text = String::new();
    for d in &all {
        let _ = writeln!(text, "{}  {}  {}", one_line_diagram(&d.diagram), perm_text(&d.permutation), d.family);
    }
    let _ = writeln!(text, "{} admissible families", all.len());
    Ok(Report::new(true, json!({ "m": m, "p": p, "count": all.len(), "cells": all }), text))
}

pub fn admissible(m: usize, p: usize, family: &str) -> Result<Report> {
    let z = MinorFamily::parse_list(m, p, family)?;
    let verdict = is_admissible(&z)?;
    let text = match &verdict.descriptor {
        Some(d) => format!(
            "admissible: diagram {}, permutation {}\n",
            one_line_diagram(&d.diagram),
            perm_text(&d.permutation)
        ),
        None => format!("{z} is not admissible\n"),
    };
    Ok(Report::new(verdict.admissible, serde_json::to_value(&verdict)?, text))
}

pub fn cell_of(arg: &str) -> Result<Report> {
    let d = cells::cell_of(&input::matrix(arg)?)?;
    let text = format!(
        "diagram {}\npermutation {}\nvanishing minors {}\n",
        one_line_diagram(&d.diagram),
        perm_text(&d.permutation),
        d.family
    );
    Ok(Report::new(true, serde_json::to_value(&d)?, text))
}

pub fn cells_verify(m: usize, p: usize, test: ZeroTest) -> Result<Report> {
    let report = unifying_check(m, p, test)?;
    let mut text = format!("{}/{} agree\n", report.agreed, report.total);
    if !report.injective {
        text.push_str("families are not pairwise distinct\n");
    }
    for miss in &report.mismatches {
        let _ = writeln!(
            text,
            "mismatch at {}: vanishing {}, M({}) {}, witness {}",
            one_line_diagram(&miss.diagram),
            miss.vanishing,
            perm_text(&miss.permutation),
            miss.m_of_w,
            miss.witness
        );
    }
    Ok(Report::new(report.passed(), serde_json::to_value(&report)?, text))
}

pub fn quantum_nf(m: usize, p: usize, expr: &str) -> Result<Report> {
    let f = parse_qpoly(m, p, expr)?;
    Ok(Report::new(true, json!({ "result": f.to_string(), "zero": f.is_zero() }), format!("{f}\n")))
}

fn index_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<usize>().map_err(|_| Error::Parse(format!("bad index `{x}`")).into()))
        .collect()
}

pub fn quantum_minor(m: usize, p: usize, rows: &str, cols: &str) -> Result<Report> {
    let f = qminor(m, p, &index_list(rows)?, &index_list(cols)?)?;
    Ok(Report::new(true, json!({ "result": f.to_string() }), format!("{f}\n")))
}

pub fn quantum_comm(m: usize, p: usize, f: &str, g: &str) -> Result<Report> {
    let c = commutator(&parse_qpoly(m, p, f)?, &parse_qpoly(m, p, g)?)?;
    Ok(Report::new(true, json!({ "result": c.to_string(), "zero": c.is_zero() }), format!("{c}\n")))
}

pub fn poisson_bracket(m: usize, p: usize, f: &str, g: &str) -> Result<Report> {
    let alg = PoissonAlgebra::new(m, p)?;
    let b = alg.bracket(&alg.parse(f)?, &alg.parse(g)?);
    Ok(Report::new(true, json!({ "result": b.to_string(), "zero": b.is_zero() }), format!("{b}\n")))
}

pub fn poisson_jacobi(m: usize, p: usize, f: &str, g: &str, h: &str) -> Result<Report> {
    let alg = PoissonAlgebra::new(m, p)?;
    let j = alg.jacobi_check(&alg.parse(f)?, &alg.parse(g)?, &alg.parse(h)?);
    Ok(Report::new(j.is_zero(), json!({ "result": j.to_string(), "zero": j.is_zero() }), format!("{j}\n")))
}

fn semiclassical_counts(m: usize, p: usize) -> Result<(usize, usize, Vec<String>)> {
    let alg = PoissonAlgebra::new(m, p)?;
    let cells = alg.cells();
    let (mut pass, mut total, mut failures) = (0, 0, Vec::new());
    for &u in &cells {
        for &v in &cells {
            if u == v {
                continue;
            }
            total += 1;
            if alg.semiclassical_check(u, v)? {
                pass += 1;
            } else {
                failures.push(format!("X[{},{}], X[{},{}]", u.0, u.1, v.0, v.1));
            }
        }
    }
    Ok((pass, total, failures))
}

pub fn semiclassical(m: usize, p: usize) -> Result<Report> {
    let (pass, total, failures) = semiclassical_counts(m, p)?;
    let mut text = format!("{pass}/{total} generator pairs agree\n");
    for f in &failures {
        let _ = writeln!(text, "mismatch: {f}");
    }
    Ok(Report::new(pass == total, json!({ "agreed": pass, "total": total, "failures": failures }), text))
}

const FLOW_TOLERANCE: f64 = 1e-9;

pub fn flow(path: &str, h: &str, samples: usize) -> Result<Report> {
    let path = FlowPath::parse_json(&input::text_of(path)?)?;
    let alg = PoissonAlgebra::new(path.m, path.p)?;
    let report = verify_flow(&alg, &path, &alg.parse(h)?, samples)?;
    let ok = report.symbolic_zero || report.max_residual < FLOW_TOLERANCE;
    let text = if report.symbolic_zero {
        "flow: residuals vanish identically\n".to_string()
    } else {
        format!("flow: max residual {:e} over {samples} samples; residuals {:?}\n", report.max_residual, report.residuals)
    };
    Ok(Report::new(ok, serde_json::to_value(&report)?, text))
}

const BUILTIN_FLOWS: [&str; 2] = [
    r#"{"m":2,"p":2,"entries":[["0","3"],["5","30*t"]]}"#,
    r#"{"m":2,"p":2,"entries":[["2","exp(2*t)"],["exp(2*t)","1/2*exp(4*t)"]]}"#,
];

pub fn verify_all(m: usize, p: usize, test: ZeroTest) -> Result<Report> {
    let mut checks: Vec<(String, usize, usize)> = Vec::new();

    let unifying = unifying_check(m, p, test)?;
    checks.push(("unifying check (diagrams)".into(), unifying.agreed, unifying.total));

    let diagrams = enumerate_diagrams(m, p)?;
    let per_diagram: Vec<(usize, usize)> = diagrams
        .par_iter()
        .map(|c| {
            let net = postnikov_network(c);
            let pm = net_path_matrix(&net)?;
            let mut agree = 0;
            let minors = all_minors(&pm);
            for (ix, v) in &minors {
                agree += usize::from(nonintersecting_count(&net, ix)?.signed == *v);
            }
            Ok((agree, minors.len()))
        })
        .collect::<cauchon::Result<_>>()?;
    let (agree, total) = per_diagram.iter().fold((0, 0), |(a, t), (x, y)| (a + x, t + y));
    checks.push(("Lindström equality (minors)".into(), agree, total));

    let (pass, total, _) = semiclassical_counts(m, p)?;
    checks.push(("semiclassical limit (generator pairs)".into(), pass, total));

    let alg = PoissonAlgebra::new(m, p)?;
    let gens: Vec<_> = alg.cells().iter().map(|&(i, a)| alg.y(i, a)).collect();
    let mut jac = 0;
    for f in &gens {
        for g in &gens {
            for h in &gens {
                jac += usize::from(alg.jacobi_check(f, g, h).is_zero());
            }
        }
    }
    checks.push(("Jacobi identity (generator triples)".into(), jac, gens.len().pow(3)));

    let two = PoissonAlgebra::new(2, 2)?;
    let mut flows = 0;
    for src in BUILTIN_FLOWS {
        let r = verify_flow(&two, &FlowPath::parse_json(src)?, &two.y(1, 1), 100)?;
        flows += usize::from(r.symbolic_zero || r.max_residual < FLOW_TOLERANCE);
    }
    checks.push(("Hamiltonian flows of a".into(), flows, BUILTIN_FLOWS.len()));

    let ok = checks.iter().all(|(_, a, t)| a == t) && unifying.injective;
    let mut text = String::new();
    for (name, a, t) in &checks {
        let mark = if a == t { "pass" } else { "FAIL" };
        let _ = writeln!(text, "{mark}  {name}: {a}/{t}");
    }
    let passed = checks.iter().filter(|(_, a, t)| a == t).count();
    let _ = writeln!(text, "{passed}/{} checks passed", checks.len());
    let json = json!({
        "m": m,
        "p": p,
        "passed": ok,
        "checks": checks.iter().map(|(n, a, t)| json!({ "name": n, "agreed": a, "total": t })).collect::<Vec<_>>(),
    });
    Ok(Report::new(ok, json, text))
}
