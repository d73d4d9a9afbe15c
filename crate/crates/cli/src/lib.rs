//! The `vbalg` command line: every subcommand reads or builds a document,
//! calls one library operation and emits a document.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use vbalg_core::chern_simons::{cs_class, cs_closed_form_remark, GradedMetric};
use vbalg_core::classify::normal_form;
use vbalg_core::forms::{cohomology, increasing_tuples, HomForm};
use vbalg_core::io::{form_value, Body, DocError, Document, FORMAT_VERSION};
use vbalg_core::models::{self, ModelSpec};
use vbalg_core::scalar::{format_scalar, parse_scalar};
use vbalg_core::superconn::SuperData;

#[derive(Debug, Parser)]
#[command(name = "vbalg", version, about = "Flat Lie-algebroid superconnections over exact rationals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the resulting document here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for random choices (metrics, gauges, random models).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, clap::Args)]
pub struct Input {
    /// Input document; `-` or absent reads standard input.
    pub file: Option<PathBuf>,
    /// Section id of the superdata to use when there are several.
    #[arg(long)]
    pub id: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a document.
    Check(Input),
    /// Report the four flatness conditions and D² = 0.
    Flat(Input),
    /// Apply a gauge: the unique degree-1 form section, or a random one with --seed.
    Gauge {
        #[command(flatten)]
        input: Input,
        /// Section id of the gauge form.
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Chern–Simons form cs_k with certificates.
    Cs {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Regular normal form and classifying tuple.
    Classify(Input),
    /// Chevalley–Eilenberg cohomology of a connection section, or of the
    /// trivial representation of the superdata's algebroid.
    Cohomology {
        #[command(flatten)]
        input: Input,
        /// Degree; all degrees when absent.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Emit a model document.
    Example {
        /// Model name; `list` prints the available names.
        name: String,
        /// Model parameter `key=value` (rational values).
        #[arg(long = "param")]
        params: Vec<String>,
    },
    /// Emit the dual superdata.
    Dualize(Input),
}

/// Exit status and emitted text of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Doc(DocError),
    Lib(vbalg_core::Error),
}

impl From<DocError> for CliError {
    fn from(e: DocError) -> Self {
        CliError::Doc(e)
    }
}

impl From<vbalg_core::Error> for CliError {
    fn from(e: vbalg_core::Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Doc(_) => 2,
            CliError::Lib(_) => 1,
        }
    }

    pub fn block(&self) -> Value {
        let inner = match self {
            CliError::Usage(m) => json!({ "kind": "usage", "message": m }),
            CliError::Doc(e) => e.to_json(),
            CliError::Lib(e) => json!({ "kind": "computation", "message": e.to_string() }),
        };
        json!({ "format_version": FORMAT_VERSION, "error": inner })
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Doc(e) => e.to_string(),
            CliError::Lib(e) => e.to_string(),
        }
    }
}

/// A document and whether every check it reports passed.
pub struct Emitted {
    pub doc: Document,
    pub ok: bool,
}

/// Runs one command line (including the program name) against `stdin`.
pub fn run(args: &[String], stdin: &str) -> Outcome {
    run_with(args, &mut || Ok(stdin.to_owned()))
}

/// As [`run`], reading standard input only when a command needs it.
pub fn run_with(args: &[String], stdin: &mut dyn FnMut() -> std::io::Result<String>) -> Outcome {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                let err = CliError::Usage(text.trim().to_owned());
                Outcome { code, stdout: pretty(&err.block()), stderr: text }
            };
        }
    };
    let result = execute(&cli, stdin).and_then(|emitted| {
        let text = emitted.doc.emit();
        match &cli.output {
            Some(p) => {
                std::fs::write(p, &text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))?;
                Ok((String::new(), emitted.ok))
            }
            None => Ok((text, emitted.ok)),
        }
    });
    match result {
        Ok((stdout, ok)) => Outcome { code: if ok { 0 } else { 1 }, stdout, stderr: String::new() },
        Err(e) => Outcome { code: e.code(), stdout: pretty(&e.block()), stderr: format!("vbalg: {}\n", e.message()) },
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn read_input(input: &Input, stdin: &mut dyn FnMut() -> std::io::Result<String>) -> Result<Document, CliError> {
    let text = match &input.file {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))?
        }
        _ => stdin().map_err(|e| CliError::Usage(format!("cannot read standard input: {e}")))?,
    };
    Ok(Document::parse(&text)?)
}

/// Copies the superdata section and everything it references.
fn with_superdata(id: &str, data: &SuperData) -> Document {
    let mut doc = Document::new();
    doc.add_superdata(id, data);
    doc
}

pub fn execute(cli: &Cli, stdin: &mut dyn FnMut() -> std::io::Result<String>) -> Result<Emitted, CliError> {
    match &cli.command {
        Command::Check(input) => {
            let doc = read_input(input, stdin)?;
            let mut out = doc.clone();
            let n = doc.sections().len();
            let cid = out.fresh_id("check");
            out.push(
                &cid,
                Body::Certificate {
                    claim: "document-valid".into(),
                    holds: true,
                    subjects: vec![],
                    witness: json!({ "sections": n }),
                },
            );
            Ok(Emitted { doc: out, ok: true })
        }
        Command::Flat(input) => {
            let doc = read_input(input, stdin)?;
            let (id, data) = doc.superdata(input.id.as_deref())?;
            flat(id, data)
        }
        Command::Gauge { input, sigma } => {
            let doc = read_input(input, stdin)?;
            let (id, data) = doc.superdata(input.id.as_deref())?;
            let sigma = match (sigma, cli.seed) {
                (Some(s), _) => gauge_form(&doc, Some(s))?,
                (None, Some(seed)) => models::random_sigma(&mut ChaCha8Rng::seed_from_u64(seed), data),
                (None, None) => gauge_form(&doc, None)?,
            };
            gauge(id, data, &sigma)
        }
        Command::Cs { input, k } => {
            let doc = read_input(input, stdin)?;
            let (id, data) = doc.superdata(input.id.as_deref())?;
            let metric = match (doc.metric_for(id), cli.seed) {
                (Some(m), _) => m.clone(),
                (None, Some(seed)) => GradedMetric::random(&mut ChaCha8Rng::seed_from_u64(seed), data),
                (None, None) => GradedMetric::identity(data),
            };
            cs(id, data, &metric, *k)
        }
        Command::Classify(input) => {
            let doc = read_input(input, stdin)?;
            let (id, data) = doc.superdata(input.id.as_deref())?;
            classify(id, data)
        }
        Command::Cohomology { input, degree } => {
            let doc = read_input(input, stdin)?;
            cohomology_cmd(&doc, input.id.as_deref(), *degree)
        }
        Command::Example { name, params } => {
            if name == "list" {
                let mut doc = Document::new();
                doc.push(
                    "examples",
                    Body::Certificate {
                        claim: "available-examples".into(),
                        holds: true,
                        subjects: vec![],
                        witness: json!(models::EXAMPLES),
                    },
                );
                return Ok(Emitted { doc, ok: true });
            }
            let mut spec = ModelSpec::new(name);
            for p in params {
                let (k, v) =
                    p.split_once('=').ok_or_else(|| CliError::Usage(format!("parameter {p:?} is not key=value")))?;
                let v = parse_scalar(v).map_err(|e| CliError::Usage(format!("parameter {k}: {}", e.0)))?;
                spec = spec.with(k, v);
            }
            if let Some(seed) = cli.seed {
                if name == "random" {
                    spec = spec.with("seed", vbalg_core::scalar::q(seed as i64));
                }
            }
            example(&spec)
        }
        Command::Dualize(input) => {
            let doc = read_input(input, stdin)?;
            let (id, data) = doc.superdata(input.id.as_deref())?;
            dualize(id, data)
        }
    }
}

fn gauge_form(doc: &Document, id: Option<&str>) -> Result<HomForm, CliError> {
    let s = doc.pick("form", id)?;
    match &s.body {
        Body::Form { form, .. } => Ok(form.clone()),
        _ => unreachable!(),
    }
}

pub fn flat(id: &str, data: &SuperData) -> Result<Emitted, CliError> {
    let report = data.is_flat_super();
    let mut doc = with_superdata(id, data);
    let ok = report.is_flat();
    doc.add_certificate(
        &format!("{id}.flat"),
        "flat",
        ok,
        &[id],
        json!({
            "conditions": report.conditions,
            "d_squared_zero": report.d_squared_zero,
            "failed_conditions": report.failed_conditions(),
        }),
    );
    Ok(Emitted { doc, ok })
}

pub fn gauge(id: &str, data: &SuperData, sigma: &HomForm) -> Result<Emitted, CliError> {
    let out = data.gauge_transform(sigma)?;
    let mut doc = Document::new();
    doc.add_superdata(id, data);
    let sid = format!("{id}.sigma");
    doc.add_hom_form(&sid, data.algebroid(), sigma);
    let gid = format!("{id}.gauged");
    doc.add_superdata(&gid, &out);
    let ok = match data.gauge_transform_exp(sigma) {
        Ok(e) => {
            let agree = e == out;
            doc.add_certificate(
                &format!("{id}.gauge"),
                "explicit-equals-exponential",
                agree,
                &[id, &sid, &gid],
                json!({}),
            );
            agree
        }
        Err(vbalg_core::Error::UnsupportedRing(_)) => true,
        Err(e) => return Err(e.into()),
    };
    Ok(Emitted { doc, ok })
}

pub fn cs(id: &str, data: &SuperData, metric: &GradedMetric, k: usize) -> Result<Emitted, CliError> {
    let class = cs_class(data, metric, k)?;
    let remark = cs_closed_form_remark(data, metric, k)?;
    let mut doc = with_superdata(id, data);
    let mid = format!("{id}.metric");
    doc.add_metric(&mid, id, metric);
    let mut ids = Vec::new();
    for (p, f) in class.form.components().iter().enumerate() {
        let fid = format!("{id}.cs{k}.{p}");
        doc.add_form(&fid, data.algebroid(), f);
        ids.push(fid);
    }
    let primitive: Vec<Value> = class.other_degrees_primitive.components().iter().map(form_value).collect();
    let subjects: Vec<&str> =
        std::iter::once(id).chain(std::iter::once(mid.as_str())).chain(ids.iter().map(String::as_str)).collect();
    doc.add_certificate(
        &format!("{id}.cs{k}"),
        "chern-simons",
        true,
        &subjects,
        json!({
            "k": k,
            "closed": true,
            "class_degree": 2 * k - 1,
            "class_is_zero": class.is_zero(data)?,
            "other_degrees_primitive": primitive,
            "remark_ratio": remark.ratio_to(&class.form).map(|r| format_scalar(&r)),
        }),
    );
    Ok(Emitted { doc, ok: true })
}

pub fn classify(id: &str, data: &SuperData) -> Result<Emitted, CliError> {
    let nf = normal_form(data)?;
    let verified = nf.verify(data)?;
    let mut doc = with_superdata(id, data);
    let sid = format!("{id}.sigma");
    doc.add_hom_form(&sid, data.algebroid(), &nf.sigma);
    let t0 = format!("{id}.type0");
    let t1 = format!("{id}.type1");
    doc.add_superdata(&t0, &nf.type0);
    doc.add_superdata(&t1, &nf.type1);
    let tid = format!("{id}.tuple");
    doc.add_tuple(&tid, data.algebroid(), &nf.tuple);
    doc.add_certificate(
        &format!("{id}.normal-form"),
        "gauge-to-normal-form",
        verified,
        &[id, &sid, &t0, &t1],
        json!({
            "rank": nf.split.rank(),
            "omega_class_is_zero": nf.tuple.omega.is_zero()?,
        }),
    );
    Ok(Emitted { doc, ok: verified })
}

fn cohomology_cmd(doc: &Document, id: Option<&str>, degree: Option<usize>) -> Result<Emitted, CliError> {
    let has_conn = doc.sections().iter().any(|s| s.body.kind() == "connection" && id.is_none_or(|i| s.id == i));
    let (sid, conn) = if has_conn {
        let s = doc.pick("connection", id)?;
        match &s.body {
            Body::Connection { connection, .. } => (s.id.clone(), connection.clone()),
            _ => unreachable!(),
        }
    } else {
        let (sid, data) = doc.superdata(id)?;
        (sid.to_owned(), data.algebroid().trivial_connection())
    };
    let alg: Arc<_> = Arc::clone(conn.algebroid());
    let degrees: Vec<usize> = match degree {
        Some(n) => vec![n],
        None => (0..=alg.dim()).collect(),
    };
    let mut out = Document::new();
    if has_conn {
        out.add_connection(&sid, &conn);
    } else {
        out = doc.clone();
    }
    for n in degrees {
        let h = cohomology(&conn, n)?;
        let reps: Vec<String> = h
            .representatives
            .iter()
            .enumerate()
            .map(|(i, f)| out.add_form(&format!("{sid}.H{n}.{i}"), &alg, f))
            .collect();
        let mut subjects = vec![sid.as_str()];
        subjects.extend(reps.iter().map(String::as_str));
        out.add_certificate(&format!("{sid}.H{n}"), "cohomology", true, &subjects, json!({
            "degree": n,
            "dim": h.dim,
            "cochain_dim": if n <= alg.dim() { increasing_tuples(alg.dim(), n).len() * conn.coeff().dim() } else { 0 },
        }));
    }
    Ok(Emitted { doc: out, ok: true })
}

pub fn example(spec: &ModelSpec) -> Result<Emitted, CliError> {
    let data = models::named_example(spec).map_err(|e| match e {
        vbalg_core::Error::UnknownModel(m) => {
            CliError::Usage(format!("unknown model {m:?}; available: {}", models::EXAMPLES.join(", ")))
        }
        other => CliError::Lib(other),
    })?;
    Ok(Emitted { doc: with_superdata(&spec.name, &data), ok: true })
}

pub fn dualize(id: &str, data: &SuperData) -> Result<Emitted, CliError> {
    let dual = data.dualize()?;
    let mut doc = with_superdata(id, data);
    doc.add_superdata(&format!("{id}.dual"), &dual);
    Ok(Emitted { doc, ok: true })
}
