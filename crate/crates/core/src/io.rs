//! Interchange format: a JSON document of typed, id-referenced sections.
//!
//! ```text
//! { "format_version": "1", "sections": [ { "id": …, "kind": …, … }, … ] }
//! ```
//!
//! Scalars are strings `"p/q"` or `"p"` in lowest terms. Matrices are lists
//! of rows. A form stores one matrix per strictly increasing index tuple
//! (lexicographic order); vector-valued forms use single-column matrices.
//! Section kinds and their fields:
//!
//! - `ring`: `dim`, `mult` (flat `dim³` list, `mult[(i·dim + j)·dim + k]`), `unit`
//! - `module`: `ring`, `dim`, `action` (one matrix per ring basis element)
//! - `algebroid`: `module`, `bracket` (flat `a³` list), `anchor` (`a` matrices on the ring)
//! - `connection`: `algebroid`, `module`, `nabla`
//! - `form`: `algebroid`, `degree`, `rows`, `cols`, `values`
//! - `superdata`: `algebroid`, `side`, `core`, `core_anchor`, `nabla_c`, `nabla_s`, `omega`
//! - `metric`: `superdata`, `gram_e`, `gram_c`
//! - `certificate`: `claim`, `holds`, `subjects` (ids), `witness` (free JSON)
//! - `tuple`: `algebroid`, `rank`, `module_k`, `module_nu`, `nabla_k`, `nabla_nu`, `omega`
//!
//! References must name a section of the right kind anywhere in the
//! document. Keys are emitted sorted; emitting a parsed document reproduces
//! its canonical text.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::algebroid::{Algebroid, Connection};
use crate::chern_simons::GradedMetric;
use crate::classify::{ClassifyingTuple, OmegaClass};
use crate::forms::{increasing_tuples, Form, FormSpace, HomForm};
use crate::linalg::Matrix;
use crate::ring::{BaseRing, RModule};
use crate::scalar::{format_scalar, parse_scalar, Scalar};
use crate::superconn::SuperData;

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DocErrorKind {
    Syntax,
    Version,
    UnresolvedReference(String),
    Invariant,
}

/// A parse or validation failure located by section id and JSON path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocError {
    pub kind: DocErrorKind,
    pub section: Option<String>,
    pub path: String,
    pub message: String,
}

impl DocError {
    fn new(kind: DocErrorKind, section: Option<&str>, path: &str, message: impl Into<String>) -> Self {
        DocError { kind, section: section.map(str::to_owned), path: path.to_owned(), message: message.into() }
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            DocErrorKind::Syntax => "syntax",
            DocErrorKind::Version => "version",
            DocErrorKind::UnresolvedReference(_) => "unresolved-reference",
            DocErrorKind::Invariant => "invariant",
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind_name(),
            "section": self.section,
            "path": self.path,
            "message": self.message,
        })
    }
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.section {
            Some(s) => write!(f, "{} error in section {s:?} at {}: {}", self.kind_name(), self.path, self.message),
            None => write!(f, "{} error at {}: {}", self.kind_name(), self.path, self.message),
        }
    }
}

impl std::error::Error for DocError {}

type DResult<T> = std::result::Result<T, DocError>;

/// The parsed tuple section.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleRecord {
    pub algebroid: String,
    pub module_k: String,
    pub module_nu: String,
    pub tuple: ClassifyingTuple,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Body {
    Ring(Arc<BaseRing>),
    Module { ring: String, module: RModule },
    Algebroid { module: String, algebroid: Arc<Algebroid> },
    Connection { algebroid: String, module: String, connection: Connection },
    Form { algebroid: String, form: HomForm },
    SuperData { algebroid: String, side: String, core: String, data: SuperData },
    Metric { superdata: String, metric: GradedMetric },
    Certificate { claim: String, holds: bool, subjects: Vec<String>, witness: Value },
    Tuple(Box<TupleRecord>),
}

impl Body {
    pub fn kind(&self) -> &'static str {
        match self {
            Body::Ring(_) => "ring",
            Body::Module { .. } => "module",
            Body::Algebroid { .. } => "algebroid",
            Body::Connection { .. } => "connection",
            Body::Form { .. } => "form",
            Body::SuperData { .. } => "superdata",
            Body::Metric { .. } => "metric",
            Body::Certificate { .. } => "certificate",
            Body::Tuple(_) => "tuple",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub id: String,
    pub body: Body,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    sections: Vec<Section>,
}

// ---------------------------------------------------------------------------
// Scalar and matrix encoding

pub fn scalar_value(x: &Scalar) -> Value {
    Value::String(format_scalar(x))
}

pub fn scalars_value(xs: &[Scalar]) -> Value {
    Value::Array(xs.iter().map(scalar_value).collect())
}

pub fn matrix_value(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| scalars_value(&m.row(i))).collect())
}

pub fn matrices_value(ms: &[Matrix]) -> Value {
    Value::Array(ms.iter().map(matrix_value).collect())
}

pub fn form_value(f: &Form) -> Value {
    let w = f.width();
    let n = increasing_tuples(f.dim_a(), f.degree()).len();
    Value::Array((0..n).map(|r| matrix_value(&Matrix::from_columns(w, &[f.value(r).to_vec()]))).collect())
}

/// Reads JSON values with located errors.
struct Reader<'a> {
    section: Option<&'a str>,
}

impl Reader<'_> {
    fn err(&self, path: &str, msg: impl Into<String>) -> DocError {
        DocError::new(DocErrorKind::Syntax, self.section, path, msg)
    }

    fn invariant(&self, path: &str, msg: impl Into<String>) -> DocError {
        DocError::new(DocErrorKind::Invariant, self.section, path, msg)
    }

    fn field<'v>(&self, obj: &'v Map<String, Value>, key: &str, path: &str) -> DResult<&'v Value> {
        obj.get(key).ok_or_else(|| self.err(&format!("{path}/{key}"), format!("missing field {key:?}")))
    }

    fn scalar(&self, v: &Value, path: &str) -> DResult<Scalar> {
        let s = v.as_str().ok_or_else(|| self.err(path, "scalars are strings \"p/q\""))?;
        parse_scalar(s).map_err(|e| self.err(path, e.0))
    }

    fn scalars(&self, v: &Value, path: &str) -> DResult<Vec<Scalar>> {
        let arr = v.as_array().ok_or_else(|| self.err(path, "expected a list of scalars"))?;
        arr.iter().enumerate().map(|(i, x)| self.scalar(x, &format!("{path}/{i}"))).collect()
    }

    fn usize(&self, v: &Value, path: &str) -> DResult<usize> {
        v.as_u64().map(|x| x as usize).ok_or_else(|| self.err(path, "expected a nonnegative integer"))
    }

    fn string(&self, v: &Value, path: &str) -> DResult<String> {
        v.as_str().map(str::to_owned).ok_or_else(|| self.err(path, "expected a string"))
    }

    fn matrix(&self, v: &Value, path: &str, rows: usize, cols: usize) -> DResult<Matrix> {
        let arr = v.as_array().ok_or_else(|| self.err(path, "expected a matrix (list of rows)"))?;
        if arr.len() != rows {
            return Err(self.err(path, format!("expected {rows} rows, found {}", arr.len())));
        }
        let mut data = Vec::with_capacity(rows * cols);
        for (i, row) in arr.iter().enumerate() {
            let r = self.scalars(row, &format!("{path}/{i}"))?;
            if r.len() != cols {
                return Err(self.err(&format!("{path}/{i}"), format!("expected {cols} columns, found {}", r.len())));
            }
            data.extend(r);
        }
        Matrix::new(rows, cols, data).map_err(|e| self.err(path, e.to_string()))
    }

    fn matrices(&self, v: &Value, path: &str, count: usize, rows: usize, cols: usize) -> DResult<Vec<Matrix>> {
        let arr = v.as_array().ok_or_else(|| self.err(path, "expected a list of matrices"))?;
        if arr.len() != count {
            return Err(self.err(path, format!("expected {count} matrices, found {}", arr.len())));
        }
        arr.iter().enumerate().map(|(i, m)| self.matrix(m, &format!("{path}/{i}"), rows, cols)).collect()
    }
}

// ---------------------------------------------------------------------------
// Document API

impl Document {
    pub fn new() -> Self {
        Document::default()
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    pub fn get(&self, id: &str) -> Option<&Body> {
        self.sections.iter().find(|s| s.id == id).map(|s| &s.body)
    }

    /// `prefix` followed by the smallest index not yet used as an id.
    pub fn fresh_id(&self, prefix: &str) -> String {
        let taken: HashSet<&str> = self.sections.iter().map(|s| s.id.as_str()).collect();
        (0..).map(|i| format!("{prefix}{i}")).find(|id| !taken.contains(id.as_str())).expect("unbounded")
    }

    fn find(&self, pred: impl Fn(&Body) -> bool) -> Option<String> {
        self.sections.iter().find(|s| pred(&s.body)).map(|s| s.id.clone())
    }

    /// Appends a section; the id must be new.
    pub fn push(&mut self, id: &str, body: Body) -> String {
        assert!(self.get(id).is_none(), "duplicate section id {id}");
        self.sections.push(Section { id: id.to_owned(), body });
        id.to_owned()
    }

    pub fn add_ring(&mut self, ring: &Arc<BaseRing>) -> String {
        if let Some(id) = self.find(|b| matches!(b, Body::Ring(r) if r == ring)) {
            return id;
        }
        let id = self.fresh_id("ring");
        self.push(&id, Body::Ring(Arc::clone(ring)))
    }

    pub fn add_module(&mut self, module: &RModule) -> String {
        let ring = self.add_ring(module.ring());
        if let Some(id) = self.find(|b| matches!(b, Body::Module { module: m, .. } if m == module)) {
            return id;
        }
        let id = self.fresh_id("module");
        self.push(&id, Body::Module { ring, module: module.clone() })
    }

    pub fn add_algebroid(&mut self, alg: &Arc<Algebroid>) -> String {
        let module = self.add_module(alg.module());
        if let Some(id) = self.find(|b| matches!(b, Body::Algebroid { algebroid, .. } if algebroid == alg)) {
            return id;
        }
        let id = self.fresh_id("algebroid");
        self.push(&id, Body::Algebroid { module, algebroid: Arc::clone(alg) })
    }

    pub fn add_connection(&mut self, id: &str, conn: &Connection) -> String {
        let algebroid = self.add_algebroid(conn.algebroid());
        let module = self.add_module(conn.coeff());
        self.push(id, Body::Connection { algebroid, module, connection: conn.clone() })
    }

    pub fn add_form(&mut self, id: &str, alg: &Arc<Algebroid>, form: &Form) -> String {
        let algebroid = self.add_algebroid(alg);
        let w = form.width();
        let values = (0..increasing_tuples(form.dim_a(), form.degree()).len())
            .map(|r| Matrix::from_columns(w, &[form.value(r).to_vec()]))
            .collect();
        let hf = HomForm::from_values(form.degree(), form.dim_a(), w, 1, values).expect("shapes agree");
        self.push(id, Body::Form { algebroid, form: hf })
    }

    pub fn add_hom_form(&mut self, id: &str, alg: &Arc<Algebroid>, form: &HomForm) -> String {
        let algebroid = self.add_algebroid(alg);
        self.push(id, Body::Form { algebroid, form: form.clone() })
    }

    pub fn add_superdata(&mut self, id: &str, data: &SuperData) -> String {
        let algebroid = self.add_algebroid(data.algebroid());
        let side = self.add_module(data.side());
        let core = self.add_module(data.core());
        self.push(id, Body::SuperData { algebroid, side, core, data: data.clone() })
    }

    pub fn add_metric(&mut self, id: &str, superdata: &str, metric: &GradedMetric) -> String {
        self.push(id, Body::Metric { superdata: superdata.to_owned(), metric: metric.clone() })
    }

    pub fn add_certificate(&mut self, id: &str, claim: &str, holds: bool, subjects: &[&str], witness: Value) -> String {
        let subjects = subjects.iter().map(|s| (*s).to_owned()).collect();
        self.push(id, Body::Certificate { claim: claim.to_owned(), holds, subjects, witness })
    }

    pub fn add_tuple(&mut self, id: &str, alg: &Arc<Algebroid>, tuple: &ClassifyingTuple) -> String {
        let algebroid = self.add_algebroid(alg);
        let module_k = self.add_module(&tuple.omega.hom.target);
        let module_nu = self.add_module(&tuple.omega.hom.source);
        let record = TupleRecord { algebroid, module_k, module_nu, tuple: tuple.clone() };
        self.push(id, Body::Tuple(Box::new(record)))
    }

    /// The unique section of a kind, or the one with the given id.
    pub fn pick(&self, kind: &str, id: Option<&str>) -> DResult<&Section> {
        let mut it = self.sections.iter().filter(|s| s.body.kind() == kind && id.is_none_or(|i| s.id == i));
        let first = it.next().ok_or_else(|| {
            DocError::new(
                DocErrorKind::UnresolvedReference(id.unwrap_or(kind).to_owned()),
                id,
                "/sections",
                format!("no {kind} section{}", id.map(|i| format!(" with id {i:?}")).unwrap_or_default()),
            )
        })?;
        if id.is_none() && it.next().is_some() {
            return Err(DocError::new(
                DocErrorKind::Syntax,
                None,
                "/sections",
                format!("several {kind} sections; select one by id"),
            ));
        }
        Ok(first)
    }

    pub fn superdata(&self, id: Option<&str>) -> DResult<(&str, &SuperData)> {
        let s = self.pick("superdata", id)?;
        match &s.body {
            Body::SuperData { data, .. } => Ok((&s.id, data)),
            _ => unreachable!(),
        }
    }

    pub fn metric_for(&self, superdata: &str) -> Option<&GradedMetric> {
        self.sections.iter().find_map(|s| match &s.body {
            Body::Metric { superdata: d, metric } if d == superdata => Some(metric),
            _ => None,
        })
    }

    pub fn to_value(&self) -> Value {
        let sections: Vec<Value> = self.sections.iter().map(section_value).collect();
        json!({ "format_version": FORMAT_VERSION, "sections": sections })
    }

    /// Canonical text: sorted keys, two-space indentation, trailing newline.
    pub fn emit(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("JSON values serialize");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> DResult<Document> {
        let v: Value = serde_json::from_str(text).map_err(|e| {
            DocError::new(DocErrorKind::Syntax, None, "", format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> DResult<Document> {
        let top = Reader { section: None };
        let obj = v.as_object().ok_or_else(|| top.err("", "a document is a JSON object"))?;
        let version = top.field(obj, "format_version", "")?;
        if version.as_str() != Some(FORMAT_VERSION) {
            return Err(DocError::new(
                DocErrorKind::Version,
                None,
                "/format_version",
                format!("unsupported format version {version}; expected \"{FORMAT_VERSION}\""),
            ));
        }
        let raw = top.field(obj, "sections", "")?.as_array().ok_or_else(|| top.err("/sections", "expected a list"))?;
        let mut entries: Vec<(String, String, &Map<String, Value>)> = Vec::new();
        let mut seen = HashSet::new();
        for (i, s) in raw.iter().enumerate() {
            let path = format!("/sections/{i}");
            let o = s.as_object().ok_or_else(|| top.err(&path, "a section is a JSON object"))?;
            let id = top.string(top.field(o, "id", &path)?, &format!("{path}/id"))?;
            let kind = top.string(top.field(o, "kind", &path)?, &format!("{path}/kind"))?;
            if !seen.insert(id.clone()) {
                return Err(DocError::new(DocErrorKind::Syntax, Some(&id), &path, "duplicate section id"));
            }
            entries.push((id, kind, o));
        }
        let mut b = Builder { entries, done: BTreeMap::new(), visiting: HashSet::new() };
        let mut sections = Vec::new();
        for i in 0..b.entries.len() {
            let id = b.entries[i].0.clone();
            let body = b.build(&id, None)?;
            sections.push(Section { id, body });
        }
        Ok(Document { sections })
    }
}

fn section_value(s: &Section) -> Value {
    let mut o = Map::new();
    o.insert("id".into(), json!(s.id));
    o.insert("kind".into(), json!(s.body.kind()));
    match &s.body {
        Body::Ring(r) => {
            o.insert("dim".into(), json!(r.dim()));
            o.insert("mult".into(), scalars_value(r.mult_tensor()));
            o.insert("unit".into(), scalars_value(r.unit()));
        }
        Body::Module { ring, module } => {
            o.insert("ring".into(), json!(ring));
            o.insert("dim".into(), json!(module.dim()));
            o.insert("action".into(), matrices_value(module.action()));
        }
        Body::Algebroid { module, algebroid } => {
            o.insert("module".into(), json!(module));
            o.insert("bracket".into(), scalars_value(algebroid.bracket_tensor()));
            o.insert("anchor".into(), matrices_value(algebroid.anchor()));
        }
        Body::Connection { algebroid, module, connection } => {
            o.insert("algebroid".into(), json!(algebroid));
            o.insert("module".into(), json!(module));
            o.insert("nabla".into(), matrices_value(connection.nabla()));
        }
        Body::Form { algebroid, form } => {
            let (r, c) = form.shape();
            o.insert("algebroid".into(), json!(algebroid));
            o.insert("degree".into(), json!(form.degree()));
            o.insert("rows".into(), json!(r));
            o.insert("cols".into(), json!(c));
            o.insert("values".into(), matrices_value(form.values()));
        }
        Body::SuperData { algebroid, side, core, data } => {
            o.insert("algebroid".into(), json!(algebroid));
            o.insert("side".into(), json!(side));
            o.insert("core".into(), json!(core));
            o.insert("core_anchor".into(), matrix_value(data.core_anchor()));
            o.insert("nabla_c".into(), matrices_value(data.nabla_c().nabla()));
            o.insert("nabla_s".into(), matrices_value(data.nabla_s().nabla()));
            o.insert("omega".into(), matrices_value(data.omega().values()));
        }
        Body::Metric { superdata, metric } => {
            o.insert("superdata".into(), json!(superdata));
            o.insert("gram_e".into(), matrix_value(metric.gram_e()));
            o.insert("gram_c".into(), matrix_value(metric.gram_c()));
        }
        Body::Certificate { claim, holds, subjects, witness } => {
            o.insert("claim".into(), json!(claim));
            o.insert("holds".into(), json!(holds));
            o.insert("subjects".into(), json!(subjects));
            o.insert("witness".into(), witness.clone());
        }
        Body::Tuple(t) => {
            o.insert("algebroid".into(), json!(t.algebroid));
            o.insert("rank".into(), json!(t.tuple.rank));
            o.insert("module_k".into(), json!(t.module_k));
            o.insert("module_nu".into(), json!(t.module_nu));
            o.insert("nabla_k".into(), matrices_value(&t.tuple.nabla_k));
            o.insert("nabla_nu".into(), matrices_value(&t.tuple.nabla_nu));
            o.insert("omega".into(), matrices_value(t.tuple.omega.omega.values()));
        }
    }
    Value::Object(o)
}

/// Resolves sections recursively by id, with cycle detection.
struct Builder<'a> {
    entries: Vec<(String, String, &'a Map<String, Value>)>,
    done: BTreeMap<String, Body>,
    visiting: HashSet<String>,
}

impl<'a> Builder<'a> {
    fn build(&mut self, id: &str, expected: Option<(&str, &str, &str)>) -> DResult<Body> {
        let Some(pos) = self.entries.iter().position(|e| e.0 == id) else {
            let (from, path) = expected.map(|e| (Some(e.1), e.2)).unwrap_or((None, ""));
            return Err(DocError::new(
                DocErrorKind::UnresolvedReference(id.to_owned()),
                from,
                path,
                format!("reference to unknown section {id:?}"),
            ));
        };
        let kind = self.entries[pos].1.clone();
        if let Some((want, from, path)) = expected {
            if kind != want {
                return Err(DocError::new(
                    DocErrorKind::UnresolvedReference(id.to_owned()),
                    Some(from),
                    path,
                    format!("section {id:?} is a {kind}, expected a {want}"),
                ));
            }
        }
        if let Some(b) = self.done.get(id) {
            return Ok(b.clone());
        }
        if !self.visiting.insert(id.to_owned()) {
            return Err(DocError::new(DocErrorKind::Syntax, Some(id), "", "cyclic references"));
        }
        let body = self.build_body(pos, &kind)?;
        self.visiting.remove(id);
        self.done.insert(id.to_owned(), body.clone());
        Ok(body)
    }

    fn reference(&mut self, id: &str, obj: &Map<String, Value>, key: &str, kind: &str) -> DResult<(String, Body)> {
        let r = Reader { section: Some(id) };
        let target = r.string(r.field(obj, key, "")?, &format!("/{key}"))?;
        let body = self.build(&target, Some((kind, id, &format!("/{key}"))))?;
        Ok((target, body))
    }

    fn ring(&mut self, id: &str, obj: &Map<String, Value>, key: &str) -> DResult<(String, Arc<BaseRing>)> {
        match self.reference(id, obj, key, "ring")? {
            (t, Body::Ring(r)) => Ok((t, r)),
            _ => unreachable!(),
        }
    }

    fn module(&mut self, id: &str, obj: &Map<String, Value>, key: &str) -> DResult<(String, RModule)> {
        match self.reference(id, obj, key, "module")? {
            (t, Body::Module { module, .. }) => Ok((t, module)),
            _ => unreachable!(),
        }
    }

    fn algebroid(&mut self, id: &str, obj: &Map<String, Value>) -> DResult<(String, Arc<Algebroid>)> {
        match self.reference(id, obj, "algebroid", "algebroid")? {
            (t, Body::Algebroid { algebroid, .. }) => Ok((t, algebroid)),
            _ => unreachable!(),
        }
    }

    fn build_body(&mut self, pos: usize, kind: &str) -> DResult<Body> {
        let (id, _, obj) = (self.entries[pos].0.clone(), (), self.entries[pos].2);
        let r = Reader { section: Some(&id) };
        let lib = |e: crate::Error| DocError::new(DocErrorKind::Invariant, Some(&id), "", e.to_string());
        let report = |rep: crate::report::Report, path: &str| -> DResult<()> {
            match rep.violations.first() {
                None => Ok(()),
                Some(v) => Err(DocError::new(
                    DocErrorKind::Invariant,
                    Some(&id),
                    path,
                    format!("{} check fails at {:?}: {}", v.check, v.witness, v.detail),
                )),
            }
        };
        match kind {
            "ring" => {
                let dim = r.usize(r.field(obj, "dim", "")?, "/dim")?;
                let mult = r.scalars(r.field(obj, "mult", "")?, "/mult")?;
                let unit = r.scalars(r.field(obj, "unit", "")?, "/unit")?;
                let ring = BaseRing::new(dim, mult, unit).map_err(lib)?;
                report(ring.check(), "/mult")?;
                Ok(Body::Ring(Arc::new(ring)))
            }
            "module" => {
                let (rid, ring) = self.ring(&id, obj, "ring")?;
                let dim = r.usize(r.field(obj, "dim", "")?, "/dim")?;
                let action = r.matrices(r.field(obj, "action", "")?, "/action", ring.dim(), dim, dim)?;
                let module = RModule::new(ring, dim, action).map_err(lib)?;
                report(module.check(), "/action")?;
                Ok(Body::Module { ring: rid, module })
            }
            "algebroid" => {
                let (mid, module) = self.module(&id, obj, "module")?;
                let a = module.dim();
                let rd = module.ring().dim();
                let bracket = r.scalars(r.field(obj, "bracket", "")?, "/bracket")?;
                let anchor = r.matrices(r.field(obj, "anchor", "")?, "/anchor", a, rd, rd)?;
                let alg = Algebroid::new(module, bracket, anchor).map_err(lib)?;
                report(alg.check(), "/bracket")?;
                Ok(Body::Algebroid { module: mid, algebroid: Arc::new(alg) })
            }
            "connection" => {
                let (aid, alg) = self.algebroid(&id, obj)?;
                let (mid, module) = self.module(&id, obj, "module")?;
                let w = module.dim();
                let nabla = r.matrices(r.field(obj, "nabla", "")?, "/nabla", alg.dim(), w, w)?;
                let conn = Connection::new(alg, module, nabla).map_err(lib)?;
                report(conn.check(), "/nabla")?;
                Ok(Body::Connection { algebroid: aid, module: mid, connection: conn })
            }
            "form" => {
                let (aid, alg) = self.algebroid(&id, obj)?;
                let degree = r.usize(r.field(obj, "degree", "")?, "/degree")?;
                let rows = r.usize(r.field(obj, "rows", "")?, "/rows")?;
                let cols = r.usize(r.field(obj, "cols", "")?, "/cols")?;
                let a = alg.dim();
                if degree > a {
                    return Err(r.invariant("/degree", format!("degree {degree} exceeds dim A = {a}")));
                }
                let n = increasing_tuples(a, degree).len();
                let values = r.matrices(r.field(obj, "values", "")?, "/values", n, rows, cols)?;
                let form = HomForm::from_values(degree, a, rows, cols, values).map_err(lib)?;
                if cols == 1 && !alg.ring().is_point() {
                    let module = RModule::free(Arc::clone(alg.ring()), rows / alg.ring().dim().max(1));
                    if module.dim() == rows {
                        let f = vector_form(&form);
                        if !FormSpace::new(&alg, &module, degree).contains(&f) {
                            return Err(r.invariant("/values", "form is not R-multilinear"));
                        }
                    }
                }
                Ok(Body::Form { algebroid: aid, form })
            }
            "superdata" => {
                let (aid, alg) = self.algebroid(&id, obj)?;
                let (sid, side) = self.module(&id, obj, "side")?;
                let (cid, core) = self.module(&id, obj, "core")?;
                let (a, e, c) = (alg.dim(), side.dim(), core.dim());
                let anchor = r.matrix(r.field(obj, "core_anchor", "")?, "/core_anchor", e, c)?;
                let nc = r.matrices(r.field(obj, "nabla_c", "")?, "/nabla_c", a, c, c)?;
                let ns = r.matrices(r.field(obj, "nabla_s", "")?, "/nabla_s", a, e, e)?;
                let n2 = increasing_tuples(a, 2).len();
                let om = r.matrices(r.field(obj, "omega", "")?, "/omega", n2, c, e)?;
                let omega = HomForm::from_values(2, a, c, e, om).map_err(lib)?;
                let data = SuperData::new(alg, side, core, anchor, nc, ns, omega).map_err(lib)?;
                Ok(Body::SuperData { algebroid: aid, side: sid, core: cid, data })
            }
            "metric" => {
                let (did, body) = self.reference(&id, obj, "superdata", "superdata")?;
                let Body::SuperData { data, .. } = body else { unreachable!() };
                let (e, c) = (data.side().dim(), data.core().dim());
                let ge = r.matrix(r.field(obj, "gram_e", "")?, "/gram_e", e, e)?;
                let gc = r.matrix(r.field(obj, "gram_c", "")?, "/gram_c", c, c)?;
                let metric = GradedMetric::new(ge, gc).map_err(lib)?;
                Ok(Body::Metric { superdata: did, metric })
            }
            "certificate" => {
                let claim = r.string(r.field(obj, "claim", "")?, "/claim")?;
                let holds =
                    r.field(obj, "holds", "")?.as_bool().ok_or_else(|| r.err("/holds", "expected a boolean"))?;
                let subj =
                    r.field(obj, "subjects", "")?.as_array().ok_or_else(|| r.err("/subjects", "expected a list"))?;
                let mut subjects = Vec::new();
                for (i, s) in subj.iter().enumerate() {
                    let s = r.string(s, &format!("/subjects/{i}"))?;
                    if !self.entries.iter().any(|e| e.0 == s) {
                        return Err(DocError::new(
                            DocErrorKind::UnresolvedReference(s.clone()),
                            Some(&id),
                            &format!("/subjects/{i}"),
                            format!("reference to unknown section {s:?}"),
                        ));
                    }
                    subjects.push(s);
                }
                let witness = r.field(obj, "witness", "")?.clone();
                Ok(Body::Certificate { claim, holds, subjects, witness })
            }
            "tuple" => {
                let (aid, alg) = self.algebroid(&id, obj)?;
                let (kid, mk) = self.module(&id, obj, "module_k")?;
                let (nid, mn) = self.module(&id, obj, "module_nu")?;
                let a = alg.dim();
                let rank = r.usize(r.field(obj, "rank", "")?, "/rank")?;
                let nk = r.matrices(r.field(obj, "nabla_k", "")?, "/nabla_k", a, mk.dim(), mk.dim())?;
                let nn = r.matrices(r.field(obj, "nabla_nu", "")?, "/nabla_nu", a, mn.dim(), mn.dim())?;
                let n2 = increasing_tuples(a, 2).len();
                let om = r.matrices(r.field(obj, "omega", "")?, "/omega", n2, mk.dim(), mn.dim())?;
                let omega = HomForm::from_values(2, a, mk.dim(), mn.dim(), om).map_err(lib)?;
                let ck = Connection::new(Arc::clone(&alg), mk, nk.clone()).map_err(lib)?;
                let cn = Connection::new(Arc::clone(&alg), mn, nn.clone()).map_err(lib)?;
                report(ck.check(), "/nabla_k")?;
                report(cn.check(), "/nabla_nu")?;
                let omega = OmegaClass::new(omega, &cn, &ck).map_err(lib)?;
                let tuple = ClassifyingTuple { rank, nabla_k: nk, nabla_nu: nn, omega };
                Ok(Body::Tuple(Box::new(TupleRecord { algebroid: aid, module_k: kid, module_nu: nid, tuple })))
            }
            other => Err(r.err("/kind", format!("unknown section kind {other:?}"))),
        }
    }
}

/// A single-column `HomForm` as a vector-valued `Form`.
pub fn vector_form(f: &HomForm) -> Form {
    let (rows, _) = f.shape();
    let data = f.values().iter().flat_map(|m| m.column(0)).collect();
    Form::from_values(f.degree(), f.dim_a(), rows, data).expect("shapes agree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;
    use crate::scalar::qr;

    #[test]
    fn round_trip_of_examples() {
        for name in ["aff1-type1", "adjoint-sl2", "rho-zero-scaled"] {
            let d = models::named_example(&models::ModelSpec::new(name)).unwrap();
            let mut doc = Document::new();
            doc.add_superdata("D", &d);
            let text = doc.emit();
            let back = Document::parse(&text).unwrap();
            assert_eq!(back, doc);
            assert_eq!(back.emit(), text);
        }
    }

    #[test]
    fn scalars_are_exact() {
        let v = Reader { section: None }.scalar(&json!("1/3"), "").unwrap();
        assert_eq!(v, qr(1, 3));
        assert!(Reader { section: None }.scalar(&json!(0.5), "").is_err());
    }
}
