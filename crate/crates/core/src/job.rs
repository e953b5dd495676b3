//! Jobs behind the `hklab` command line: a canonical description, a JSON
//! payload, renderers and an on-disk cache.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use num_bigint::BigInt;
use num_rational::Ratio;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cech::{
    detect_repetition, fixed_classes, frobenius_matrix, h1_basis, hasse_witt, orbit, CechClass,
    MatrixDump,
};
use crate::curve::{CurveError, CurveFile, PlaneCurve, Smoothness};
use crate::descent::{
    bundle_count_bound, pigeonhole_window, theorem_margin, BoundContext, DescentError,
    DescentSequence,
};
use crate::hk::{ehk_estimate, hk_function, HkError, IdealGens};
use crate::hn::{ehk_from_hn, strong_hn_scan, HnError};
use crate::poly::{HomogPoly, Monomial, ParamRing};
use crate::suite::{self, Catalog};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CechAction {
    Matrix,
    Orbit,
}

/// A curve file as given on the command line. Only the content enters the
/// cache key.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveInput {
    #[serde(skip)]
    pub path: PathBuf,
    pub sha256: String,
    #[serde(skip)]
    pub file: CurveFile,
}

impl CurveInput {
    pub fn read(path: &Path) -> Result<Self, JobError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| JobError::new(ErrorKind::Io, format!("{}: {e}", path.display())))?;
        let file = CurveFile::parse(&text).map_err(JobError::from)?;
        Ok(CurveInput {
            path: path.to_path_buf(),
            sha256: hex::encode(Sha256::digest(text.as_bytes())),
            file,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    Hk {
        curve: CurveInput,
        ideal: String,
        e_max: u32,
    },
    Hn {
        curve: CurveInput,
        gens: String,
        twist: Option<i32>,
        e_max: u32,
    },
    Cech {
        curve: CurveInput,
        twist: i32,
        action: CechAction,
        class: Option<String>,
        steps: usize,
    },
    Prank {
        curve: CurveInput,
    },
    Descent {
        r: i64,
        g: i64,
        deg: i64,
        m_gg: i64,
        deg_o1: i64,
        seq: String,
    },
    PaperSuite {
        #[serde(skip)]
        curve_dir: Option<PathBuf>,
        /// Hashes of the curve files actually used.
        curves: Vec<(String, String)>,
    },
}

impl Command {
    pub fn curve(&self) -> Option<&CurveInput> {
        match self {
            Command::Hk { curve, .. }
            | Command::Hn { curve, .. }
            | Command::Cech { curve, .. }
            | Command::Prank { curve } => Some(curve),
            _ => None,
        }
    }

    pub fn paper_suite(curve_dir: Option<PathBuf>) -> Result<Command, JobError> {
        let cat = catalog_for(curve_dir.as_deref())?;
        let curves = crate::catalog::ALL
            .iter()
            .map(|(name, _)| {
                (
                    name.to_string(),
                    hex::encode(Sha256::digest(cat.text(name).as_bytes())),
                )
            })
            .collect();
        Ok(Command::PaperSuite { curve_dir, curves })
    }
}

fn catalog_for(dir: Option<&Path>) -> Result<Catalog, JobError> {
    match dir {
        Some(d) => {
            Catalog::with_overrides(d).map_err(|e| JobError::new(ErrorKind::Io, e.to_string()))
        }
        None => Ok(Catalog::bundled()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JobSpec {
    #[serde(flatten)]
    pub command: Command,
    pub format: Format,
}

impl JobSpec {
    /// Canonical serialization: compact JSON in declaration order.
    pub fn canonical(&self) -> String {
        serde_json::to_string(self).expect("job spec serializes")
    }

    /// Content hash of the job and the tool version; independent of the
    /// output format.
    pub fn hash(&self) -> String {
        let key = serde_json::to_string(&self.command).expect("job spec serializes");
        let mut h = Sha256::new();
        h.update(key.as_bytes());
        h.update(b"\0");
        h.update(VERSION.as_bytes());
        hex::encode(h.finalize())
    }

    /// The `--dump` echo: parsed parameters and, if present, the parsed curve.
    pub fn dump(&self) -> Result<Value, JobError> {
        let mut v = serde_json::to_value(self).expect("job spec serializes");
        if let Some(c) = self.command.curve() {
            let dump = c.file.dump().map_err(JobError::from)?;
            v["curve"] = json!({ "sha256": c.sha256, "parsed": dump });
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Usage,
    Io,
    CurveFile,
    Parse,
    SingularCurve,
    NonPrimary,
    Domain,
    SuiteFailure,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Usage => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JobError {
    pub kind: ErrorKind,
    pub message: String,
    /// For a failed suite: the report that would have been printed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub payload: Option<Value>,
}

impl JobError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        JobError {
            kind,
            message: message.into(),
            payload: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&json!({ "error": { "kind": self.kind, "message": self.message } }))
            .expect("error serializes")
    }
}

impl std::fmt::Display for JobError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl From<CurveError> for JobError {
    fn from(e: CurveError) -> Self {
        let kind = match e {
            CurveError::Parse(_) => ErrorKind::Parse,
            CurveError::NotMonicInZ(_) | CurveError::BadEquation => ErrorKind::Domain,
            _ => ErrorKind::CurveFile,
        };
        JobError::new(kind, e.to_string())
    }
}

impl From<HkError> for JobError {
    fn from(e: HkError) -> Self {
        match e {
            HkError::NonPrimary { .. } => JobError::new(ErrorKind::NonPrimary, e.to_string()),
            HkError::Parse(_) => JobError::new(ErrorKind::Parse, e.to_string()),
            HkError::Curve(c) => c.into(),
            _ => JobError::new(ErrorKind::Domain, e.to_string()),
        }
    }
}

impl From<HnError> for JobError {
    fn from(e: HnError) -> Self {
        match e {
            HnError::Hk(h) => h.into(),
            _ => JobError::new(ErrorKind::Domain, e.to_string()),
        }
    }
}

impl From<DescentError> for JobError {
    fn from(e: DescentError) -> Self {
        let kind = match e {
            DescentError::BadEntry(_) => ErrorKind::Parse,
            _ => ErrorKind::Domain,
        };
        JobError::new(kind, e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub job_hash: String,
    pub version: String,
    pub payload: Value,
    pub started: u64,
    pub finished: u64,
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Runs a job, consulting the cache directory when one is given.
pub fn run(job: &JobSpec, cache_dir: Option<&Path>) -> Result<ResultRecord, JobError> {
    let job_hash = job.hash();
    if let Some(dir) = cache_dir {
        if let Some(record) = cache_lookup(dir, &job_hash) {
            return Ok(record);
        }
    }
    let started = unix_now();
    let payload = compute(&job.command)?;
    let record = ResultRecord {
        job_hash,
        version: VERSION.to_string(),
        payload,
        started,
        finished: unix_now(),
    };
    if let Some(dir) = cache_dir {
        cache_store(dir, &record)?;
    }
    Ok(record)
}

fn cache_path(dir: &Path, hash: &str) -> PathBuf {
    dir.join(format!("{hash}.json"))
}

fn cache_lookup(dir: &Path, hash: &str) -> Option<ResultRecord> {
    let text = std::fs::read_to_string(cache_path(dir, hash)).ok()?;
    let v: Value = serde_json::from_str(&text).ok()?;
    if v["job_hash"] != hash || v["version"] != VERSION {
        return None;
    }
    Some(ResultRecord {
        job_hash: hash.to_string(),
        version: VERSION.to_string(),
        payload: v["payload"].clone(),
        started: v["started"].as_u64()?,
        finished: v["finished"].as_u64()?,
    })
}

fn cache_store(dir: &Path, record: &ResultRecord) -> Result<(), JobError> {
    let io =
        |e: std::io::Error| JobError::new(ErrorKind::Io, format!("cache {}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    let path = cache_path(dir, &record.job_hash);
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(
        &tmp,
        serde_json::to_string(record).expect("record serializes"),
    )
    .map_err(io)?;
    std::fs::rename(&tmp, &path).map_err(io)
}

fn load_curve(input: &CurveInput) -> Result<PlaneCurve, JobError> {
    let curve = input.file.build()?;
    if let Smoothness::Singular(pt) = curve.is_smooth_probe() {
        return Err(JobError::new(
            ErrorKind::SingularCurve,
            format!(
                "{} is singular at ({}:{}:{})",
                input.path.display(),
                pt[0],
                pt[1],
                pt[2]
            ),
        ));
    }
    Ok(curve)
}

fn vars(input: &CurveInput) -> [&str; 3] {
    let v = &input.file.variables;
    [v[0].as_str(), v[1].as_str(), v[2].as_str()]
}

fn ratio<T: Serialize + Clone>(r: &Ratio<T>) -> Value {
    json!({ "num": r.numer().clone(), "den": r.denom().clone() })
}

fn compute(cmd: &Command) -> Result<Value, JobError> {
    match cmd {
        Command::Hk {
            curve,
            ideal,
            e_max,
        } => {
            let c = load_curve(curve)?;
            let gens = IdealGens::parse(c.field(), ideal)?;
            let table = hk_function(&c, &gens, *e_max)?;
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| json!({ "e": r.e, "q": r.q, "phi": r.phi }))
                .collect();
            let est = ehk_estimate(&table).ok();
            Ok(json!({
                "p": table.p,
                "ideal": gens.format_with(vars(curve)),
                "rows": rows,
                "top_degrees": table.rows.iter().map(|r| r.top).collect::<Vec<_>>(),
                "identity_checked": table.rows.iter().all(|r| r.identity_checked),
                "ehk": est.as_ref().map(|x| ratio(&x.value)),
                "beta": est.as_ref().map(|x| ratio(&x.beta)),
                "gamma": est.as_ref().map(|x| ratio(&x.gamma)),
                "unstable": est.as_ref().map(|x| x.unstable),
            }))
        }
        Command::Hn {
            curve,
            gens,
            twist,
            e_max,
        } => {
            let c = load_curve(curve)?;
            let g = IdealGens::parse(c.field(), gens)?;
            let scan = strong_hn_scan(&c, &g, *twist, *e_max)?;
            let linear = g.degrees().iter().all(|&d| d == 1);
            let entries: Vec<Value> = scan
                .entries
                .iter()
                .map(|e| {
                    let d = &e.data;
                    let destab = d.destabilizer.as_ref().map(|x| {
                        json!({
                            "twist": x.twist,
                            "section": x.section.format_with(vars(curve)),
                            "coefficient_vector": x.section.coefficient_vector(&c)
                                .iter().map(|a| c.field().coords(*a)).collect::<Vec<_>>(),
                            "vanishing_degree": x.vanishing_degree,
                            "sub_degree": x.sub_degree,
                            "quotient_degree": x.quotient_degree,
                            "alpha": ratio(&x.alpha),
                        })
                    });
                    let ehk = match (linear, &d.destabilizer) {
                        (true, Some(x)) if c.degree() == 4 => {
                            ehk_from_hn(4, x.alpha, e.q).ok().map(|r| ratio(&r))
                        }
                        _ => None,
                    };
                    json!({
                        "e": e.e,
                        "q": e.q,
                        "twist": e.twist,
                        "verdict": d.verdict,
                        "degree": d.degree,
                        "scan_limit": d.scan_limit,
                        "h0": d.h0,
                        "overflow_twists": d.overflow_twists,
                        "destabilizer": destab,
                        "ehk": ehk,
                    })
                })
                .collect();
            Ok(json!({
                "gens": g.format_with(vars(curve)),
                "entries": entries,
                "first_destabilizing": scan.first_destabilizing,
                "frobenius_compatible": scan.frobenius_compatible,
            }))
        }
        Command::Cech {
            curve,
            twist,
            action,
            class,
            steps,
        } => {
            let c = load_curve(curve)?;
            let fmt_mono = |m: &Monomial| {
                HomogPoly::monomial(c.field(), *m, crate::gf::Elem::ONE).format_with(vars(curve))
            };
            match action {
                CechAction::Matrix => {
                    let m = frobenius_matrix(&c, *twist);
                    let p = c.field().characteristic() as i32;
                    Ok(json!({
                        "twist": twist,
                        "source_basis": h1_basis(&c, *twist).iter().map(fmt_mono).collect::<Vec<_>>(),
                        "target_basis": h1_basis(&c, p * twist).iter().map(fmt_mono).collect::<Vec<_>>(),
                        "matrix": MatrixDump::new(c.field(), &m),
                    }))
                }
                CechAction::Orbit => {
                    let src = class.as_deref().ok_or_else(|| {
                        JobError::new(ErrorKind::Usage, "--action orbit needs --class")
                    })?;
                    let k = CechClass::<ParamRing>::parse(&c, src)
                        .map_err(|e| JobError::new(ErrorKind::Parse, e.to_string()))?;
                    if k.twist() != *twist {
                        return Err(JobError::new(
                            ErrorKind::Usage,
                            format!("class lives in twist {}, not {twist}", k.twist()),
                        ));
                    }
                    let orb = orbit(&k, *steps);
                    let repetition = detect_repetition(&orb);
                    Ok(json!({
                        "twist": twist,
                        "class": k.format_with(vars(curve)),
                        "orbit": orb.iter().map(|x| x.format_with(vars(curve))).collect::<Vec<_>>(),
                        "repetition": repetition,
                    }))
                }
            }
        }
        Command::Prank { curve } => {
            let c = load_curve(curve)?;
            let hw = hasse_witt(&c);
            let fixed = fixed_classes(&c);
            Ok(json!({
                "genus": c.genus(),
                "p_rank": hw.p_rank,
                "semisimple_dim": hw.semisimple_dim,
                "hasse_witt": MatrixDump::new(c.field(), &hw.matrix),
                "fixed_fp_dimension": fixed.fp_dimension,
                "fixed_classes": fixed.classes.iter().map(|k| k.format_with(vars(curve))).collect::<Vec<_>>(),
            }))
        }
        Command::Descent {
            r,
            g,
            deg,
            m_gg,
            deg_o1,
            seq,
        } => {
            let ctx = BoundContext::new(*r, *g, *deg, *m_gg, *deg_o1)?;
            let seq = DescentSequence::parse(seq)?;
            let report = theorem_margin(&seq, &ctx.count.c, &ctx.threshold);
            let mut sizes: Vec<u64> = seq.entries.iter().map(|e| e.q).collect();
            sizes.sort_unstable();
            sizes.dedup();
            let mut bounds = Vec::new();
            for q in &sizes {
                let b = bundle_count_bound(*q, &ctx.count.c)?;
                bounds.push(json!({ "q": q, "bits": b.bits }));
            }
            let window = match report.trigger {
                Some(n) => {
                    let entry = &seq.entries[n];
                    let bound = bundle_count_bound(entry.q, &ctx.count.c)?;
                    Some(pigeonhole_window(
                        &BigInt::from(entry.e.clone()),
                        &BigInt::from(ctx.threshold.ceil),
                        &bound.value,
                    ))
                }
                None => None,
            };
            Ok(json!({
                "context": ctx,
                "sequence": seq,
                "margins": report,
                "count_bounds": bounds,
                "window": window,
            }))
        }
        Command::PaperSuite { curve_dir, .. } => {
            let cat = catalog_for(curve_dir.as_deref())?;
            let reports = suite::run_all(&cat);
            let all = reports.iter().all(|r| r.passed);
            let payload = json!({
                "passed": all,
                "criteria": reports,
                "lines": reports.iter().map(|r| r.line()).collect::<Vec<_>>(),
            });
            if all {
                Ok(payload)
            } else {
                let failing: Vec<String> = reports
                    .iter()
                    .filter(|r| !r.passed)
                    .map(|r| r.id.to_string())
                    .collect();
                Err(JobError {
                    kind: ErrorKind::SuiteFailure,
                    message: format!("failing criteria: {}", failing.join(", ")),
                    payload: Some(payload),
                })
            }
        }
    }
}

fn csv_field(v: &Value) -> String {
    let s = match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Object(o) if o.contains_key("num") && o.contains_key("den") => {
            format!("{}/{}", o["num"], o["den"])
        }
        other => other.to_string(),
    };
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

fn csv_table(header: &[&str], rows: impl Iterator<Item = Vec<Value>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(csv_field).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn arr(v: &Value) -> impl Iterator<Item = &Value> {
    v.as_array().map(|a| a.iter()).into_iter().flatten()
}

/// Renders a payload. JSON output is compact and ends with a newline.
pub fn render(cmd: &Command, payload: &Value, format: Format) -> String {
    match format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string(payload).expect("payload serializes")
        ),
        Format::Csv => render_csv(cmd, payload),
        Format::Text => render_text(cmd, payload),
    }
}

fn render_csv(cmd: &Command, p: &Value) -> String {
    match cmd {
        Command::Hk { .. } => csv_table(
            &["e", "q", "phi"],
            arr(&p["rows"]).map(|r| vec![r["e"].clone(), r["q"].clone(), r["phi"].clone()]),
        ),
        Command::Hn { .. } => csv_table(
            &[
                "e",
                "q",
                "twist",
                "verdict",
                "sub_degree",
                "alpha",
                "section",
            ],
            arr(&p["entries"]).map(|e| {
                let d = &e["destabilizer"];
                vec![
                    e["e"].clone(),
                    e["q"].clone(),
                    e["twist"].clone(),
                    e["verdict"].clone(),
                    d["sub_degree"].clone(),
                    d["alpha"].clone(),
                    d["section"].clone(),
                ]
            }),
        ),
        Command::Cech {
            action: CechAction::Matrix,
            ..
        } => {
            let m = &p["matrix"];
            let cols = m["cols"].as_u64().unwrap_or(1).max(1) as usize;
            csv_table(
                &["row", "col", "coords"],
                arr(&m["entries"]).enumerate().map(|(i, x)| {
                    let coords: Vec<String> = arr(x).map(|c| c.to_string()).collect();
                    vec![json!(i / cols), json!(i % cols), json!(coords.join(" "))]
                }),
            )
        }
        Command::Cech { .. } => csv_table(
            &["step", "class"],
            arr(&p["orbit"])
                .enumerate()
                .map(|(i, x)| vec![json!(i), x.clone()]),
        ),
        Command::Prank { .. } => csv_table(
            &["genus", "p_rank", "semisimple_dim", "fixed_fp_dimension"],
            std::iter::once(vec![
                p["genus"].clone(),
                p["p_rank"].clone(),
                p["semisimple_dim"].clone(),
                p["fixed_fp_dimension"].clone(),
            ]),
        ),
        Command::Descent { .. } => csv_table(
            &["n", "q", "e", "margin"],
            arr(&p["sequence"]["entries"])
                .zip(arr(&p["margins"]["margins"]))
                .enumerate()
                .map(|(i, (e, m))| vec![json!(i), e["q"].clone(), e["e"].clone(), m.clone()]),
        ),
        Command::PaperSuite { .. } => csv_table(
            &["id", "passed", "title", "detail"],
            arr(&p["criteria"]).map(|c| {
                vec![
                    c["id"].clone(),
                    c["passed"].clone(),
                    c["title"].clone(),
                    c["detail"].clone(),
                ]
            }),
        ),
    }
}

fn render_text(cmd: &Command, p: &Value) -> String {
    let mut out = String::new();
    let s = |v: &Value| match v {
        Value::String(x) => x.clone(),
        Value::Object(o) if o.contains_key("num") => format!("{}/{}", o["num"], o["den"]),
        other => other.to_string(),
    };
    match cmd {
        Command::Hk { .. } => {
            for r in arr(&p["rows"]) {
                let _ = writeln!(out, "e={} q={} phi={}", r["e"], r["q"], r["phi"]);
            }
            if !p["ehk"].is_null() {
                let _ = writeln!(out, "e_HK ~ {}", s(&p["ehk"]));
            }
        }
        Command::Hn { .. } => {
            for e in arr(&p["entries"]) {
                let _ = write!(
                    out,
                    "e={} q={} twist={} {}",
                    e["e"],
                    e["q"],
                    e["twist"],
                    s(&e["verdict"])
                );
                let d = &e["destabilizer"];
                if !d.is_null() {
                    let _ = write!(
                        out,
                        " sub_degree={} alpha={} section in twist {}: {}",
                        d["sub_degree"],
                        s(&d["alpha"]),
                        d["twist"],
                        s(&d["section"])
                    );
                }
                out.push('\n');
            }
        }
        Command::Cech {
            action: CechAction::Matrix,
            ..
        } => {
            let _ = writeln!(out, "source basis: {}", s(&p["source_basis"]));
            let _ = writeln!(out, "target basis: {}", s(&p["target_basis"]));
            let m = &p["matrix"];
            let cols = m["cols"].as_u64().unwrap_or(1).max(1) as usize;
            let cells: Vec<String> = arr(&m["entries"]).map(|x| x.to_string()).collect();
            for row in cells.chunks(cols) {
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
        Command::Cech { .. } => {
            for (i, x) in arr(&p["orbit"]).enumerate() {
                let _ = writeln!(out, "F^{i}: {}", s(x));
            }
            let _ = writeln!(out, "repetition: {}", p["repetition"]);
        }
        Command::Prank { .. } => {
            let _ = writeln!(
                out,
                "genus {} p-rank {} fixed F_p-dimension {}",
                p["genus"], p["p_rank"], p["fixed_fp_dimension"]
            );
        }
        Command::Descent { .. } => {
            let c = &p["context"]["count"];
            let _ = writeln!(
                out,
                "l={} s={} k={} m={} n={} c={}",
                c["ell"],
                c["s"],
                c["k"],
                c["m"],
                c["n"],
                s(&c["c"])
            );
            let _ = writeln!(out, "trigger: {}", p["margins"]["trigger"]);
        }
        Command::PaperSuite { .. } => {
            for l in arr(&p["lines"]) {
                let _ = writeln!(out, "{}", s(l));
            }
        }
    }
    out
}

/// Renders a suite payload even when it failed.
pub fn render_failure(cmd: &Command, err: &JobError, format: Format) -> Option<String> {
    err.payload.as_ref().map(|p| render(cmd, p, format))
}
