//! Command implementations. Each returns the text for stdout plus an optional JSON artifact.

use std::collections::BTreeMap;

use locregen::code_model::LocalityStructure;
use locregen::mbr_locality::{degree_caps, mbrloc_helper_symbol, mbrloc_local_repair, MbrLocalityCode};
use locregen::oracle::{bound_report, BoundReport, DminMethod};
use locregen::pct_msr::{msrloc_helper_symbols, msrloc_repair, MsrLocalityCode};
use locregen::pm_mbr::{pm_helper_symbol, pm_repair, PmMbrParams};
use locregen::tamo_barg::tb_local_repair;
use locregen::{GfContext, GfElement, VectorCode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, Result};
use crate::format::{hex, to_json, CodewordFile, FieldJson, MessageFile};
use crate::spec::{AnyCode, CodeSpec};

/// Exit status when the measured distance misses the bound.
pub const EXIT_NOT_OPTIMAL: u8 = 3;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub artifact: Option<String>,
    pub exit: u8,
}

fn seq(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn random_message(f: &GfContext, len: usize, seed: u64) -> Vec<GfElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| f.element(rng.gen_range(0..f.order() as u64)).unwrap()).collect()
}

/// Ordered `(name, value)` rows describing a code's derived parameters.
fn derived(code: &AnyCode) -> Vec<(&'static str, Value)> {
    let c = code.code();
    let mut rows = vec![
        ("family", json!(c.family().as_str())),
        ("field", json!(c.field().to_string())),
        ("n", json!(c.length())),
        ("alpha", json!(c.alpha())),
        ("dimension", json!(c.dimension())),
    ];
    match code {
        AnyCode::PmMbr(p) => {
            rows.extend([("k", json!(p.k())), ("d", json!(p.d())), ("beta", json!(1)), ("B", json!(p.file_size()))]);
        }
        AnyCode::TamoBarg(p) => rows.extend([
            ("n_l", json!(p.n_l())),
            ("nu", json!(p.nu())),
            ("r", json!(p.r())),
            ("delta", json!(p.delta())),
            ("lifted support", json!(p.lifted_support())),
            ("message support", json!(p.message_support())),
            ("designed distance", json!(p.designed_distance())),
        ]),
        AnyCode::MbrLocality(code) => {
            let p = code.params();
            let (mu, rho) = p.decomposition();
            rows.extend([
                ("n_l", json!(p.n_l())),
                ("nu", json!(p.nu())),
                ("r", json!(p.r())),
                ("d", json!(p.d())),
                ("beta", json!(1)),
                ("delta", json!(p.delta())),
                ("K_l", json!(p.k_local())),
                ("K", json!(p.k())),
                ("P sequence", json!(p.p_sequence())),
                ("P^inv(K)", json!(p.p_inv_k())),
                ("decomposition", json!(format!("K = {mu}*{} + {rho}", p.k_local()))),
                ("degree caps", json!(degree_caps(p))),
            ]);
        }
        AnyCode::MsrLocality(code) => {
            let p = code.params();
            let pct = p.pct();
            rows.extend([
                ("n_l", json!(p.n_l())),
                ("nu", json!(p.nu())),
                ("r", json!(p.r())),
                ("delta", json!(p.delta())),
                ("k", json!(p.k())),
                ("s", json!(pct.s())),
                ("t", json!(pct.t())),
                ("theta", json!(hex(pct.theta()))),
                ("beta", json!(p.beta())),
                ("K_l", json!(p.k_local())),
                ("d_TB", json!(p.d_tb())),
                ("d_TB <= 2*delta", json!(p.optimality_precondition_holds())),
                ("repair bandwidth", json!(p.repair_bandwidth())),
                ("symbol labels", json!(msr_labels(code))),
            ]);
        }
    }
    rows
}

/// `(x,y,[z1..zt])` for every symbol of the first local group.
fn msr_labels(code: &MsrLocalityCode) -> Vec<String> {
    let pct = code.params().pct();
    let mut out = Vec::new();
    for pos in 0..pct.n_l() {
        let (x, y) = pct.label(pos);
        for z in 0..pct.alpha() {
            let digits: Vec<String> = pct.digits(z).iter().map(|v| v.to_string()).collect();
            out.push(format!("({x},{y},[{}])", digits.join(",")));
        }
    }
    out
}

fn render_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(Value::is_u64) => {
            seq(&items.iter().map(|x| x.as_u64().unwrap() as usize).collect::<Vec<_>>())
        }
        Value::Array(items) => items.iter().map(render_value).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

fn table(rows: &[(&str, Value)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {}\n", render_value(v))).collect()
}

pub fn validate(spec: &CodeSpec) -> Result<Output> {
    let code = spec.build()?;
    let rows = derived(&code);
    let map: serde_json::Map<String, Value> = rows.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    Ok(Output { text: table(&rows), artifact: Some(to_json(&map)), exit: 0 })
}

pub fn encode(spec: &CodeSpec, message: Option<&MessageFile>, seed: u64) -> Result<Output> {
    let any = spec.build()?;
    let code = any.code();
    let f = *code.field();
    let msg = match message {
        Some(m) => m.parse(&f, code.dimension())?,
        None => random_message(&f, code.dimension(), seed),
    };
    let c = code.encode(&msg)?;
    let file = CodewordFile::from_codeword(&c, code.alpha() == 1);
    let text = match message {
        Some(_) => String::new(),
        None => format!("message: {}\n", serde_json::to_string(&MessageFile::new(&msg)).unwrap()),
    };
    Ok(Output { text, artifact: Some(to_json(&file)), exit: 0 })
}

/// How one node was rebuilt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairSummary {
    pub node: usize,
    pub helpers: Vec<usize>,
    pub bandwidth: usize,
}

fn pick_helpers(
    candidates: impl Iterator<Item = usize>,
    available: &[bool],
    need: usize,
    failed: usize,
) -> Result<Vec<usize>> {
    let helpers: Vec<usize> = candidates.filter(|&i| i != failed && available[i]).take(need).collect();
    if helpers.len() < need {
        return Err(CliError::Invalid(format!(
            "node {failed} is unrepairable: needs {need} helpers, {} available",
            helpers.len()
        )));
    }
    Ok(helpers)
}

fn repair_node(
    code: &AnyCode,
    nodes: &[Option<Vec<GfElement>>],
    available: &[bool],
    failed: usize,
) -> Result<(Vec<GfElement>, RepairSummary)> {
    let content = |h: usize| nodes[h].as_deref().expect("helpers are available nodes");
    let (value, helpers, bandwidth) = match code {
        AnyCode::PmMbr(p) => pm_node(p, nodes, available, failed)?,
        AnyCode::TamoBarg(p) => {
            let group = p.coset_of(failed) * p.n_l();
            let helpers = pick_helpers(group..group + p.n_l(), available, p.r(), failed)?;
            let syms: Vec<(usize, GfElement)> = helpers.iter().map(|&h| (h, content(h)[0])).collect();
            (vec![tb_local_repair(p, failed, &syms)?], helpers, syms.len())
        }
        AnyCode::MbrLocality(c) => mbr_node(c, nodes, available, failed)?,
        AnyCode::MsrLocality(c) => {
            let p = c.params();
            let group = p.group_of(failed) * p.n_l();
            let helpers = pick_helpers(group..group + p.n_l(), available, p.n_l() - 1, failed)?;
            let syms = helpers
                .iter()
                .map(|&h| Ok((h, msrloc_helper_symbols(p, content(h), failed)?)))
                .collect::<Result<Vec<_>>>()?;
            let bandwidth = syms.iter().map(|(_, s)| s.len()).sum();
            (msrloc_repair(p, failed, &syms)?, helpers, bandwidth)
        }
    };
    Ok((value, RepairSummary { node: failed, helpers, bandwidth }))
}

type Repaired = (Vec<GfElement>, Vec<usize>, usize);

fn pm_node(p: &PmMbrParams, nodes: &[Option<Vec<GfElement>>], available: &[bool], failed: usize) -> Result<Repaired> {
    let helpers = pick_helpers(0..p.n(), available, p.d(), failed)?;
    let syms = helpers
        .iter()
        .map(|&h| Ok((h, pm_helper_symbol(p, nodes[h].as_deref().unwrap(), failed)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok((pm_repair(p, failed, &syms)?, helpers, syms.len()))
}

fn mbr_node(
    c: &MbrLocalityCode,
    nodes: &[Option<Vec<GfElement>>],
    available: &[bool],
    failed: usize,
) -> Result<Repaired> {
    let p = c.params();
    let group = p.group_of(failed) * p.n_l();
    let helpers = pick_helpers(group..group + p.n_l(), available, p.d(), failed)?;
    let syms = helpers
        .iter()
        .map(|&h| Ok((h, mbrloc_helper_symbol(c, nodes[h].as_deref().unwrap(), failed)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok((mbrloc_local_repair(c, failed, &syms)?, helpers, syms.len()))
}

/// Rebuilds every erased node and every node in `force`. With neither, one node chosen by `seed` is rebuilt.
pub fn repair(spec: &CodeSpec, codeword: &CodewordFile, force: &[usize], seed: u64) -> Result<Output> {
    let any = spec.build()?;
    let code = any.code();
    let n = code.length();
    let mut nodes = codeword.parse(code.field(), n, code.alpha())?;
    if let Some(&bad) = force.iter().find(|&&i| i >= n) {
        return Err(CliError::Invalid(format!("node {bad} out of range for n = {n}")));
    }
    let mut failed: Vec<usize> = (0..n).filter(|&i| nodes[i].is_none() || force.contains(&i)).collect();
    if failed.is_empty() {
        failed.push(ChaCha8Rng::seed_from_u64(seed).gen_range(0..n));
    }
    let available: Vec<bool> = (0..n).map(|i| !failed.contains(&i)).collect();
    let mut text = String::new();
    let mut rebuilt = Vec::new();
    for &node in &failed {
        let (value, summary) = repair_node(&any, &nodes, &available, node)?;
        if let Some(old) = &nodes[node] {
            if *old != value {
                text.push_str(&format!("node {node}: repaired content differs from the input\n"));
            }
        }
        text.push_str(&format!(
            "node {node}: helpers {:?}, bandwidth={} symbols, degree={}\n",
            summary.helpers,
            summary.bandwidth,
            summary.helpers.len()
        ));
        rebuilt.push((node, value));
    }
    for (node, value) in rebuilt {
        nodes[node] = Some(value);
    }
    Ok(Output { text, artifact: Some(to_json(&CodewordFile::new(&nodes, code.alpha() == 1))), exit: 0 })
}

pub fn decode(spec: &CodeSpec, codeword: &CodewordFile) -> Result<Output> {
    let any = spec.build()?;
    let code = any.code();
    let nodes = codeword.parse(code.field(), code.length(), code.alpha())?;
    let surviving: Vec<(usize, Vec<GfElement>)> =
        nodes.into_iter().enumerate().filter_map(|(i, n)| n.map(|n| (i, n))).collect();
    let msg = code.decode(&surviving)?;
    Ok(Output {
        text: format!("decoded {} symbols from {} nodes\n", msg.len(), surviving.len()),
        artifact: Some(to_json(&MessageFile::new(&msg))),
        exit: 0,
    })
}

fn method_for(code: &dyn VectorCode) -> DminMethod {
    match code.locality() {
        Some(ls) if ls.groups().iter().all(|g| g.len() <= 20) => DminMethod::Flats,
        _ => DminMethod::Subsets,
    }
}

fn method_name(m: DminMethod) -> &'static str {
    match m {
        DminMethod::Subsets => "subsets",
        DminMethod::Flats => "flats",
    }
}

pub fn dmin(spec: &CodeSpec) -> Result<Output> {
    let any = spec.build()?;
    let code = any.code();
    let g = code.generator_matrix()?;
    let method = method_for(code);
    let d = match method {
        DminMethod::Flats => {
            locregen::oracle::dmin_oracle_grouped(code.field(), &g, code.alpha(), code.locality().unwrap().groups())?
        }
        DminMethod::Subsets => locregen::oracle::dmin_oracle(code.field(), &g, code.alpha())?,
    };
    Ok(Output {
        text: format!("d_min = {d}\n"),
        artifact: Some(to_json(&json!({ "d_min": d, "method": method_name(method) }))),
        exit: 0,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalityJson {
    pub groups: Vec<Vec<usize>>,
    pub r: usize,
    pub delta: usize,
}

impl From<&LocalityStructure> for LocalityJson {
    fn from(ls: &LocalityStructure) -> Self {
        LocalityJson { groups: ls.groups().to_vec(), r: ls.r(), delta: ls.delta() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ColumnJson {
    pub column: usize,
    pub count: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DependencyJson {
    pub column: usize,
    pub exponent: usize,
    pub form: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DependencyReport {
    pub before_dedup: usize,
    pub columns: Vec<ColumnJson>,
    pub unique: Vec<DependencyJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportJson {
    pub family: String,
    pub field: FieldJson,
    pub n: usize,
    pub alpha: usize,
    pub dimension: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_sequence: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_inv_k: Option<usize>,
    pub bounds: BTreeMap<String, i64>,
    pub measured_dmin: usize,
    pub method: String,
    pub optimal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate_optimal: Option<bool>,
    pub sound: bool,
    pub notes: Vec<String>,
    /// `[full, total]` over the `(n - d_min + 1)`-subsets of nodes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full_rank_subsets: Option<[u64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub locality: Option<LocalityJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dependencies: Option<DependencyReport>,
    pub status: String,
}

fn status_line(r: &BoundReport) -> String {
    match r.tightest_bound() {
        Some(_) if r.optimal => format!("optimal, d_min = {} = bound", r.measured_dmin),
        Some(b) if r.sound => format!("not optimal, d_min = {} < bound {b}", r.measured_dmin),
        Some(b) => format!("bound violated, d_min = {} > bound {b}", r.measured_dmin),
        None => format!("no bound applies, d_min = {}", r.measured_dmin),
    }
}

fn dependency_report(code: &MbrLocalityCode) -> DependencyReport {
    let sys = code.system();
    let nu = code.params().nu();
    DependencyReport {
        before_dedup: sys.raw().len(),
        columns: sys.by_column().iter().map(|(c, deps)| ColumnJson { column: *c, count: deps.len() }).collect(),
        unique: sys.unique().map(|d| DependencyJson { column: d.column, exponent: d.t, form: d.render(nu) }).collect(),
    }
}

pub fn report(spec: &CodeSpec) -> Result<Output> {
    let any = spec.build()?;
    let code = any.code();
    let g = code.generator_matrix()?;
    let method = method_for(code);
    let r = bound_report(code, &g, method)?;
    let deps = match &any {
        AnyCode::MbrLocality(c) => Some(dependency_report(c)),
        _ => None,
    };

    let mut text = String::new();
    let mut rows: Vec<(&str, Value)> = vec![
        ("family", json!(r.family.as_str())),
        ("field", json!(code.field().to_string())),
        ("n", json!(r.n)),
        ("alpha", json!(r.alpha)),
        ("dimension", json!(r.dimension)),
    ];
    if let Some(p) = &r.p_sequence {
        rows.push(("P sequence", json!(p)));
    }
    if let Some(p) = r.p_inv_k {
        rows.push(("P^inv(K)", json!(p)));
    }
    for (kind, v) in &r.bounds {
        rows.push((kind.as_str(), json!(format!("{v}"))));
    }
    rows.push(("measured d_min", json!(r.measured_dmin)));
    rows.push(("method", json!(method_name(method))));
    if let Some(ro) = r.rate_optimal {
        rows.push(("rate-optimal", json!(ro)));
    }
    if let Some((full, total)) = r.decodable_subsets {
        rows.push(("full-rank subsets", json!(format!("{full}/{total} of size {}", r.n - r.measured_dmin + 1))));
    }
    text.push_str(&table(&rows));
    for note in &r.notes {
        text.push_str(&format!("note: {note}\n"));
    }
    if let Some(deps) = &deps {
        if deps.unique.is_empty() {
            text.push_str("0 dependencies\n");
        } else {
            text.push_str(&format!("{} dependencies ({} before dedup)\n", deps.unique.len(), deps.before_dedup));
            for c in &deps.columns {
                text.push_str(&format!("  column {}: {} rows\n", c.column, c.count));
            }
            for d in &deps.unique {
                text.push_str(&format!("  [{}] {}\n", d.column, d.form));
            }
        }
    }
    let status = status_line(&r);
    text.push_str(&status);
    text.push('\n');

    let json = ReportJson {
        family: r.family.as_str().into(),
        field: FieldJson::from(code.field()),
        n: r.n,
        alpha: r.alpha,
        dimension: r.dimension,
        p_sequence: r.p_sequence.clone(),
        p_inv_k: r.p_inv_k,
        bounds: r.bounds.iter().map(|(k, v)| (k.as_str().to_string(), *v)).collect(),
        measured_dmin: r.measured_dmin,
        method: method_name(method).into(),
        optimal: r.optimal,
        rate_optimal: r.rate_optimal,
        sound: r.sound,
        notes: r.notes.clone(),
        full_rank_subsets: r.decodable_subsets.map(|(a, b)| [a, b]),
        locality: code.locality().as_ref().map(LocalityJson::from),
        dependencies: deps,
        status,
    };
    Ok(Output { text, artifact: Some(to_json(&json)), exit: if r.optimal { 0 } else { EXIT_NOT_OPTIMAL } })
}
