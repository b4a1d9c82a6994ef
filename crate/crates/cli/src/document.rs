//! JSON input documents and their typed counterparts.
//!
//! Complex scalars are `[re, im]` pairs, matrices are row-major lists of rows,
//! and elements list one square matrix per block. Lookup tables in the
//! `classical_table` shorthand are 1-based.

use std::fmt;
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use qmaps_core::morphisms::DEFAULT_TOL;
use qmaps_core::semigroups::classical_semigroup_algebra;
use qmaps_core::{
    AlgebraElement, Character, FdCStarAlgebra, LinearFunctional, QuantumFamily, QuantumSemigroup, StarMorphism,
    TensorLayout,
};
use serde_json::{json, Map, Value};

type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Algebra,
    Element,
    Functional,
    Morphism,
    Family,
    Semigroup,
    Magic,
}

impl Kind {
    pub const ALL: [Kind; 7] =
        [Kind::Algebra, Kind::Element, Kind::Functional, Kind::Morphism, Kind::Family, Kind::Semigroup, Kind::Magic];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Algebra => "algebra",
            Kind::Element => "element",
            Kind::Functional => "functional",
            Kind::Morphism => "morphism",
            Kind::Family => "family",
            Kind::Semigroup => "semigroup",
            Kind::Magic => "magic",
        }
    }

    pub fn from_name(name: &str) -> Option<Kind> {
        Kind::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A square array of elements of a common ambient algebra. Kept unvalidated so
/// that a failing candidate can still be reported on.
#[derive(Debug, Clone, PartialEq)]
pub struct MagicDocument {
    pub ambient: FdCStarAlgebra,
    pub entries: Vec<Vec<AlgebraElement>>,
}

#[derive(Debug, Clone)]
pub enum Document {
    Algebra(FdCStarAlgebra),
    Element(AlgebraElement),
    Functional(LinearFunctional),
    Morphism(StarMorphism),
    Family(QuantumFamily),
    Semigroup(QuantumSemigroup),
    Magic(MagicDocument),
}

impl Document {
    pub fn kind(&self) -> Kind {
        match self {
            Document::Algebra(_) => Kind::Algebra,
            Document::Element(_) => Kind::Element,
            Document::Functional(_) => Kind::Functional,
            Document::Morphism(_) => Kind::Morphism,
            Document::Family(_) => Kind::Family,
            Document::Semigroup(_) => Kind::Semigroup,
            Document::Magic(_) => Kind::Magic,
        }
    }

    /// Exact structural equality: same algebras and bit-identical matrices.
    pub fn same_as(&self, other: &Document) -> bool {
        match (self, other) {
            (Document::Algebra(a), Document::Algebra(b)) => a == b,
            (Document::Element(a), Document::Element(b)) => a == b,
            (Document::Functional(a), Document::Functional(b)) => a == b,
            (Document::Morphism(a), Document::Morphism(b)) => same_morphism(a, b),
            (Document::Family(a), Document::Family(b)) => {
                a.source() == b.source()
                    && a.target() == b.target()
                    && a.label() == b.label()
                    && same_morphism(a.morphism(), b.morphism())
            }
            (Document::Semigroup(a), Document::Semigroup(b)) => {
                a.algebra() == b.algebra()
                    && same_morphism(a.comultiplication(), b.comultiplication())
                    && match (a.counit(), b.counit()) {
                        (None, None) => true,
                        (Some(x), Some(y)) => same_morphism(x.morphism(), y.morphism()),
                        _ => false,
                    }
            }
            (Document::Magic(a), Document::Magic(b)) => a == b,
            _ => false,
        }
    }
}

fn same_morphism(a: &StarMorphism, b: &StarMorphism) -> bool {
    a.domain() == b.domain() && a.codomain() == b.codomain() && a.matrix() == b.matrix()
}

/// Where in the input a problem was found.
#[derive(Debug, Clone, PartialEq)]
pub enum Location {
    /// Byte-level syntax error reported by the JSON reader.
    Line { line: usize, column: usize },
    /// Dotted path of the offending field, e.g. `morphism.matrix[3]`.
    Field(String),
    /// A structural invariant checked after decoding.
    Invariant(String),
    File,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub origin: String,
    pub location: Location,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.location {
            Location::Line { line, column } => write!(f, "{}:{line}:{column}: {}", self.origin, self.message),
            Location::Field(path) => write!(f, "{}: field `{path}`: {}", self.origin, self.message),
            Location::Invariant(name) => write!(f, "{}: invariant `{name}` violated: {}", self.origin, self.message),
            Location::File => write!(f, "{}: {}", self.origin, self.message),
        }
    }
}

impl std::error::Error for ParseError {}

type Parsed<T> = std::result::Result<T, Issue>;

/// A located problem before the origin (file name) is attached.
#[derive(Debug)]
struct Issue {
    location: Location,
    message: String,
}

fn at(path: &str, message: impl Into<String>) -> Issue {
    Issue { location: Location::Field(display_path(path)), message: message.into() }
}

fn invariant(name: &str, err: qmaps_core::Error) -> Issue {
    Issue { location: Location::Invariant(name.into()), message: err.to_string() }
}

fn display_path(path: &str) -> String {
    if path.is_empty() {
        "<root>".into()
    } else {
        path.into()
    }
}

fn join(path: &str, field: &str) -> String {
    if path.is_empty() {
        field.to_string()
    } else {
        format!("{path}.{field}")
    }
}

pub fn read_document(path: &Path, expected: Option<Kind>) -> Result<Document, ParseError> {
    let origin = path.display().to_string();
    let text = std::fs::read_to_string(path)
        .map_err(|e| ParseError { origin: origin.clone(), location: Location::File, message: e.to_string() })?;
    parse_document(&text, &origin, expected)
}

/// Parses `text`; when `expected` is given the document must be of that kind.
pub fn parse_document(text: &str, origin: &str, expected: Option<Kind>) -> Result<Document, ParseError> {
    let value: Value = serde_json::from_str(text).map_err(|e| ParseError {
        origin: origin.into(),
        location: Location::Line { line: e.line(), column: e.column() },
        message: e.to_string(),
    })?;
    decode(&value, expected).map_err(|issue| ParseError {
        origin: origin.into(),
        location: issue.location,
        message: issue.message,
    })
}

fn decode(value: &Value, expected: Option<Kind>) -> Parsed<Document> {
    let obj = object(value, "")?;
    let declared = match obj.get("kind") {
        None => None,
        Some(Value::String(s)) => Some(Kind::from_name(s).ok_or_else(|| at("kind", format!("unknown kind {s:?}")))?),
        Some(_) => return Err(at("kind", "expected a string")),
    };
    let kind = match (declared, expected) {
        (Some(d), Some(e)) if d != e => return Err(at("kind", format!("document is a {d}, expected a {e}"))),
        (Some(d), _) => d,
        (None, Some(e)) => e,
        (None, None) => infer_kind(obj)?,
    };
    Ok(match kind {
        Kind::Algebra => Document::Algebra(parse_algebra(value, "")?),
        Kind::Element => Document::Element(parse_element(value, "", None)?),
        Kind::Functional => Document::Functional(parse_functional(value, "", None)?),
        Kind::Morphism => Document::Morphism(parse_morphism(obj)?),
        Kind::Family => Document::Family(parse_family(obj)?),
        Kind::Semigroup => Document::Semigroup(parse_semigroup(obj)?),
        Kind::Magic => Document::Magic(parse_magic(obj)?),
    })
}

fn infer_kind(obj: &Map<String, Value>) -> Parsed<Kind> {
    let has = |k: &str| obj.contains_key(k);
    if has("matrix") && has("domain") {
        return Ok(Kind::Morphism);
    }
    if has("source") || has("target_factor") {
        return Ok(Kind::Family);
    }
    if has("delta_matrix") {
        return Ok(Kind::Semigroup);
    }
    if has("ambient") {
        return Ok(Kind::Magic);
    }
    if has("density") {
        return Ok(Kind::Functional);
    }
    if let Some(table) = obj.get("classical_table") {
        // A multiplication table is square; a list of lookup tables need not be.
        let rows = table.as_array().ok_or_else(|| at("classical_table", "expected a list of rows"))?;
        let square = rows.iter().all(|r| r.as_array().is_some_and(|r| r.len() == rows.len()));
        if square {
            return Err(at("kind", "a square classical_table is ambiguous; add \"kind\": \"family\" or \"semigroup\""));
        }
        return Ok(Kind::Family);
    }
    if let Some(Value::Array(blocks)) = obj.get("blocks") {
        return Ok(if blocks.iter().all(Value::is_u64) { Kind::Algebra } else { Kind::Element });
    }
    Err(at("", "cannot tell what kind of document this is; add a \"kind\" field"))
}

fn object<'a>(value: &'a Value, path: &str) -> Parsed<&'a Map<String, Value>> {
    value.as_object().ok_or_else(|| at(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, name: &str, path: &str) -> Parsed<&'a Value> {
    obj.get(name).ok_or_else(|| at(path, format!("missing field `{name}`")))
}

fn array<'a>(value: &'a Value, path: &str) -> Parsed<&'a Vec<Value>> {
    value.as_array().ok_or_else(|| at(path, "expected a list"))
}

fn parse_algebra(value: &Value, path: &str) -> Parsed<FdCStarAlgebra> {
    let obj = object(value, path)?;
    let blocks_path = join(path, "blocks");
    let dims = array(field(obj, "blocks", path)?, &blocks_path)?
        .iter()
        .enumerate()
        .map(|(k, v)| {
            v.as_u64()
                .filter(|&n| n > 0)
                .map(|n| n as usize)
                .ok_or_else(|| at(&format!("{blocks_path}[{k}]"), "block size must be a positive integer"))
        })
        .collect::<Parsed<Vec<_>>>()?;
    FdCStarAlgebra::new(&dims).map_err(|e| at(&blocks_path, e.to_string()))
}

fn parse_complex(value: &Value, path: &str) -> Parsed<Complex64> {
    if let Some(x) = value.as_f64() {
        return Ok(Complex64::new(x, 0.0));
    }
    match value.as_array().map(Vec::as_slice) {
        Some([re, im]) => match (re.as_f64(), im.as_f64()) {
            (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
            _ => Err(at(path, "expected an [re, im] pair of numbers")),
        },
        _ => Err(at(path, "expected an [re, im] pair")),
    }
}

/// Row-major complex matrix. `shape` fixes `(rows, cols)` when known.
fn parse_matrix(value: &Value, path: &str, shape: Option<(usize, usize)>) -> Parsed<CMatrix> {
    let rows = array(value, path)?;
    if let Some((r, _)) = shape {
        if rows.len() != r {
            return Err(at(path, format!("has {} rows, expected {r}", rows.len())));
        }
    }
    let mut cols = shape.map(|(_, c)| c);
    let mut data = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        let entries = row.as_array().ok_or_else(|| at(&row_path, format!("row {i} is not a list")))?;
        match cols {
            Some(c) if entries.len() != c => {
                return Err(at(&row_path, format!("row {i} has {} entries, expected {c}", entries.len())));
            }
            None => cols = Some(entries.len()),
            _ => {}
        }
        for (j, z) in entries.iter().enumerate() {
            data.push(parse_complex(z, &format!("{row_path}[{j}]"))?);
        }
    }
    let cols = cols.unwrap_or(0);
    Ok(CMatrix::from_row_slice(rows.len(), cols, &data))
}

fn parse_element(value: &Value, path: &str, ambient: Option<&FdCStarAlgebra>) -> Parsed<AlgebraElement> {
    let obj = object(value, path)?;
    let blocks_path = join(path, "blocks");
    let raw = array(field(obj, "blocks", path)?, &blocks_path)?;
    if let Some(a) = ambient {
        if raw.len() != a.num_blocks() {
            return Err(at(&blocks_path, format!("has {} blocks, the algebra {a} has {}", raw.len(), a.num_blocks())));
        }
    }
    let mut blocks = Vec::with_capacity(raw.len());
    for (k, b) in raw.iter().enumerate() {
        let block_path = format!("{blocks_path}[{k}]");
        let n = match ambient {
            Some(a) => a.block_dims()[k],
            None => array(b, &block_path)?.len(),
        };
        blocks.push(parse_matrix(b, &block_path, Some((n, n)))?);
    }
    let algebra = match ambient {
        Some(a) => a.clone(),
        None => {
            let dims: Vec<usize> = blocks.iter().map(|b| b.nrows()).collect();
            FdCStarAlgebra::new(&dims).map_err(|e| at(&blocks_path, e.to_string()))?
        }
    };
    AlgebraElement::from_blocks(&algebra, blocks).map_err(|e| at(&blocks_path, e.to_string()))
}

fn parse_functional(value: &Value, path: &str, ambient: Option<&FdCStarAlgebra>) -> Parsed<LinearFunctional> {
    let obj = object(value, path)?;
    let density = parse_element(field(obj, "density", path)?, &join(path, "density"), ambient)?;
    Ok(LinearFunctional::from_density(density))
}

fn parse_morphism(obj: &Map<String, Value>) -> Parsed<StarMorphism> {
    let domain = parse_algebra(field(obj, "domain", "")?, "domain")?;
    let codomain = parse_algebra(field(obj, "codomain", "")?, "codomain")?;
    let matrix = parse_matrix(field(obj, "matrix", "")?, "matrix", Some((codomain.dim(), domain.dim())))?;
    StarMorphism::new(&domain, &codomain, matrix, DEFAULT_TOL).map_err(|e| at("matrix", e.to_string()))
}

/// Reads a list of rows of positive integers and shifts them to 0-based.
fn parse_table(value: &Value, path: &str, bound: Option<usize>) -> Parsed<Vec<Vec<usize>>> {
    array(value, path)?
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let row_path = format!("{path}[{i}]");
            array(row, &row_path)?
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    let bound = bound.unwrap_or(usize::MAX);
                    match v.as_u64() {
                        Some(x) if x >= 1 && (x as usize) <= bound => Ok(x as usize - 1),
                        _ => Err(at(&format!("{row_path}[{j}]"), "expected an integer in 1..=n")),
                    }
                })
                .collect()
        })
        .collect()
}

fn parse_family(obj: &Map<String, Value>) -> Parsed<QuantumFamily> {
    if let Some(t) = obj.get("classical_table") {
        let raw = array(t, "classical_table")?;
        let n = raw.first().and_then(Value::as_array).map_or(0, Vec::len);
        for (f, row) in raw.iter().enumerate() {
            if row.as_array().map(Vec::len) != Some(n) {
                return Err(at(&format!("classical_table[{f}]"), format!("row {f} must be a lookup table of length {n}")));
            }
        }
        let tables = parse_table(t, "classical_table", Some(n))?;
        return QuantumFamily::classical(n, &tables).map_err(|e| invariant("classical family", e));
    }
    let source = parse_algebra(field(obj, "source", "")?, "source")?;
    let target = parse_algebra(field(obj, "target_factor", "")?, "target_factor")?;
    let label = parse_algebra(field(obj, "label", "")?, "label")?;
    let layout = TensorLayout::new(&target, &label);
    let matrix = parse_matrix(field(obj, "morphism", "")?, "morphism", Some((layout.product().dim(), source.dim())))?;
    let morphism =
        StarMorphism::new(&source, layout.product(), matrix, DEFAULT_TOL).map_err(|e| at("morphism", e.to_string()))?;
    QuantumFamily::new(&source, &target, &label, morphism).map_err(|e| invariant("unital *-homomorphism", e))
}

fn parse_semigroup(obj: &Map<String, Value>) -> Parsed<QuantumSemigroup> {
    if let Some(t) = obj.get("classical_table") {
        let n = array(t, "classical_table")?.len();
        let table = parse_table(t, "classical_table", Some(n))?;
        return classical_semigroup_algebra(&table).map_err(|e| invariant("associative table", e));
    }
    let algebra = parse_algebra(field(obj, "algebra", "")?, "algebra")?;
    let layout = TensorLayout::new(&algebra, &algebra);
    let matrix = parse_matrix(field(obj, "delta_matrix", "")?, "delta_matrix", Some((layout.product().dim(), algebra.dim())))?;
    let delta = StarMorphism::new(&algebra, layout.product(), matrix, DEFAULT_TOL)
        .map_err(|e| at("delta_matrix", e.to_string()))?;
    delta.require_hom().map_err(|e| invariant("unital *-homomorphism", e))?;
    let counit = match obj.get("counit") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let f = parse_functional(v, "counit", Some(&algebra))?;
            Some(Character::from_functional(&f, DEFAULT_TOL).map_err(|e| invariant("counit is a character", e))?)
        }
    };
    QuantumSemigroup::new(&algebra, delta, counit).map_err(|e| invariant("semigroup shape", e))
}

fn parse_magic(obj: &Map<String, Value>) -> Parsed<MagicDocument> {
    let ambient = parse_algebra(field(obj, "ambient", "")?, "ambient")?;
    let rows = array(field(obj, "entries", "")?, "entries")?;
    let n = rows.len();
    let mut entries = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let row_path = format!("entries[{i}]");
        let cells = row.as_array().ok_or_else(|| at(&row_path, format!("row {i} is not a list")))?;
        if cells.len() != n {
            return Err(at(&row_path, format!("row {i} has {} entries, expected {n}", cells.len())));
        }
        entries.push(
            cells
                .iter()
                .enumerate()
                .map(|(j, c)| parse_element(c, &format!("{row_path}[{j}]"), Some(&ambient)))
                .collect::<Parsed<Vec<_>>>()?,
        );
    }
    if n == 0 {
        return Err(at("entries", "a magic unitary needs at least one row"));
    }
    Ok(MagicDocument { ambient, entries })
}

pub fn algebra_value(a: &FdCStarAlgebra) -> Value {
    json!({ "blocks": a.block_dims() })
}

fn complex_value(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn matrix_value(m: &CMatrix) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| complex_value(m[(i, j)])).collect())).collect())
}

pub fn element_value(x: &AlgebraElement) -> Value {
    json!({ "blocks": x.blocks().iter().map(matrix_value).collect::<Vec<_>>() })
}

pub fn functional_value(f: &LinearFunctional) -> Value {
    json!({ "density": element_value(f.density()) })
}

/// Serializes a document so that [`parse_document`] reproduces it exactly.
pub fn to_value(doc: &Document) -> Value {
    let mut v = match doc {
        Document::Algebra(a) => algebra_value(a),
        Document::Element(x) => element_value(x),
        Document::Functional(f) => functional_value(f),
        Document::Morphism(m) => json!({
            "domain": algebra_value(m.domain()),
            "codomain": algebra_value(m.codomain()),
            "matrix": matrix_value(m.matrix()),
        }),
        Document::Family(f) => json!({
            "source": algebra_value(f.source()),
            "target_factor": algebra_value(f.target()),
            "label": algebra_value(f.label()),
            "morphism": matrix_value(f.morphism().matrix()),
        }),
        Document::Semigroup(s) => {
            let mut v = json!({
                "algebra": algebra_value(s.algebra()),
                "delta_matrix": matrix_value(s.comultiplication().matrix()),
            });
            if let Some(eps) = s.counit() {
                v["counit"] = functional_value(&eps.as_functional());
            }
            v
        }
        Document::Magic(m) => json!({
            "ambient": algebra_value(&m.ambient),
            "entries": m.entries.iter().map(|r| r.iter().map(element_value).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }),
    };
    v.as_object_mut().expect("documents are objects").insert("kind".into(), json!(doc.kind().name()));
    v
}

/// Indented JSON with numeric rows kept on one line.
pub fn to_json_string(doc: &Document) -> String {
    let mut out = String::new();
    write_pretty(&to_value(doc), 0, &mut out);
    out
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| x.is_number() || x.as_array().is_some_and(|p| p.iter().all(Value::is_number))),
        _ => false,
    }
}

fn write_pretty(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&format!("{pad}{}: ", Value::String(k.clone())));
                write_pretty(x, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&format!("{}}}", "  ".repeat(indent)));
        }
        Value::Array(items) if !items.is_empty() && !is_flat(v) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad);
                write_pretty(x, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&format!("{}]", "  ".repeat(indent)));
        }
        other => out.push_str(&other.to_string()),
    }
}
