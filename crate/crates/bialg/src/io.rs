//! JSON file formats: Lie algebras, tensor literals, pairing matrices.

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::lie::{Field, LieAlgebra};
use crate::manin::Matrix;
use crate::scalar::{fmt_rat, parse_scalar, Rat, Scalar};
use crate::tensor::{SlotGroup, SparseTensor, Symmetry, Variance};

fn coef_string(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_i64() => Ok(n.to_string()),
        other => Err(Error::Parse(format!("coefficient {other} is neither a string nor an integer"))),
    }
}

fn coef(v: &Value, vars: &[String]) -> Result<Scalar> {
    let s = coef_string(v)?;
    parse_scalar(&s, vars).map_err(|e| Error::Parse(format!("coefficient {s:?}: {e}")))
}

// [x, y, [[z, coef], ...]]
type RawBracket = (String, String, Vec<(String, Value)>);

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LieFile {
    name: String,
    #[serde(default = "rational")]
    field: Field,
    basis: Vec<String>,
    #[serde(default)]
    brackets: Vec<RawBracket>,
    // triple blocks, read separately by `parse_triple_blocks`
    #[serde(default)]
    g: Option<Value>,
    #[serde(default)]
    gstar: Option<Value>,
    #[serde(default)]
    pairing: Option<Value>,
}

fn rational() -> Field {
    Field::Rational
}

fn label_index(basis: &[String], l: &str) -> Result<usize> {
    basis.iter().position(|b| b == l).ok_or_else(|| Error::Parse(format!("unknown basis label {l:?}")))
}

pub fn parse_lie(src: &str) -> Result<LieAlgebra> {
    let f: LieFile = serde_json::from_str(src).map_err(|e| Error::Parse(format!("Lie algebra file: {e}")))?;
    let vars = f.field.vars().to_vec();
    let mut br = Vec::new();
    for (x, y, terms) in &f.brackets {
        let i = label_index(&f.basis, x)?;
        let j = label_index(&f.basis, y)?;
        if i >= j {
            return Err(Error::Parse(format!("bracket [{x}, {y}] must list x before y in basis order")));
        }
        let mut v = Vec::new();
        for (z, c) in terms {
            v.push((label_index(&f.basis, z)?, coef(c, &vars)?));
        }
        br.push((i, j, v));
    }
    LieAlgebra::new(&f.name, f.basis, f.field, br)
}

pub fn lie_to_json(g: &LieAlgebra) -> Value {
    let b = g.basis();
    let vars = g.field().vars();
    let brackets: Vec<Value> = g
        .upper_brackets()
        .into_iter()
        .filter(|(i, j, _)| i < j)
        .map(|(i, j, v)| {
            let terms: Vec<Value> = v.iter().map(|(k, c)| json!([b[*k], c.fmt_with(vars)])).collect();
            json!([b[i], b[j], terms])
        })
        .collect();
    json!({
        "name": g.name(),
        "field": serde_json::to_value(g.field()).expect("field serializes"),
        "basis": b,
        "brackets": brackets,
    })
}

/// Named signatures, or a space-separated list of groups such as "L1a U2a"
/// (L/U = covector/vector slots, then the group length, then a/s/n for
/// antisymmetric, symmetric, none).
pub fn parse_signature(s: &str) -> Result<Vec<SlotGroup>> {
    let named = match s {
        "vector" => Some("U1n"),
        "wedge2" => Some("U2a"),
        "wedge3" => Some("U3a"),
        "wedge4" => Some("U4a"),
        "sym2" => Some("U2s"),
        "tensor2" => Some("U2n"),
        "tensor3" => Some("U3n"),
        "cobracket" => Some("L1a U2a"),
        _ => None,
    };
    let spec = named.unwrap_or(s);
    let mut out = Vec::new();
    for tok in spec.split_whitespace() {
        let bad = || Error::Parse(format!("bad slot group {tok:?} in signature {s:?}"));
        let mut cs = tok.chars();
        let variance = match cs.next() {
            Some('U') => Variance::Upper,
            Some('L') => Variance::Lower,
            _ => return Err(bad()),
        };
        let rest: String = cs.collect();
        if rest.len() < 2 {
            return Err(bad());
        }
        let (num, sym) = rest.split_at(rest.len() - 1);
        let len: usize = num.parse().map_err(|_| bad())?;
        let symmetry = match sym {
            "a" => Symmetry::Anti,
            "s" => Symmetry::Sym,
            "n" => Symmetry::None,
            _ => return Err(bad()),
        };
        if len == 0 {
            return Err(bad());
        }
        out.push(SlotGroup { len, symmetry, variance });
    }
    if out.is_empty() {
        return Err(Error::Parse(format!("empty signature {s:?}")));
    }
    Ok(out)
}

pub fn signature_name(groups: &[SlotGroup]) -> String {
    let raw: Vec<String> = groups
        .iter()
        .map(|g| {
            let v = if g.variance == Variance::Upper { 'U' } else { 'L' };
            let s = match g.symmetry {
                Symmetry::Anti => 'a',
                Symmetry::Sym => 's',
                Symmetry::None => 'n',
            };
            format!("{v}{}{s}", g.len)
        })
        .collect();
    let raw = raw.join(" ");
    let name = match raw.as_str() {
        "U1n" | "U1a" | "U1s" => "vector",
        "U2a" => "wedge2",
        "U3a" => "wedge3",
        "U4a" => "wedge4",
        "U2s" => "sym2",
        "U2n" => "tensor2",
        "U3n" => "tensor3",
        "L1a U2a" => "cobracket",
        _ => return raw,
    };
    name.to_string()
}

/// Optional header fields of a tensor file; used by dynamical r-matrices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TensorHeader {
    pub h: Option<Vec<String>>,
    pub vars: Option<Vec<String>>,
    pub locus: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    idx: Vec<String>,
    coef: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorDoc {
    signature: Option<String>,
    entries: Vec<Record>,
    h: Option<Vec<String>>,
    vars: Option<Vec<String>>,
    locus: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TensorFile {
    Bare(Vec<Record>),
    Doc(TensorDoc),
}

/// Reads the header only, so coordinate names can be known before the
/// coefficients are parsed.
pub fn tensor_header(src: &str) -> Result<TensorHeader> {
    match serde_json::from_str::<TensorFile>(src).map_err(|e| Error::Parse(format!("tensor file: {e}")))? {
        TensorFile::Bare(_) => Ok(TensorHeader::default()),
        TensorFile::Doc(d) => Ok(TensorHeader { h: d.h, vars: d.vars, locus: d.locus }),
    }
}

/// Parses a tensor literal. A declared signature must equal `expect`
/// (when given); a bare list takes `expect`.
pub fn parse_tensor(src: &str, g: &LieAlgebra, expect: Option<&[SlotGroup]>, vars: &[String]) -> Result<SparseTensor> {
    let file: TensorFile = serde_json::from_str(src).map_err(|e| Error::Parse(format!("tensor file: {e}")))?;
    let (sig, entries) = match file {
        TensorFile::Bare(e) => (None, e),
        TensorFile::Doc(d) => (d.signature, d.entries),
    };
    let groups = match (sig, expect) {
        (Some(s), Some(want)) => {
            let got = parse_signature(&s)?;
            if got != want {
                return Err(Error::Parse(format!(
                    "tensor signature {:?} does not match the expected {:?}",
                    signature_name(&got),
                    signature_name(want)
                )));
            }
            got
        }
        (Some(s), None) => parse_signature(&s)?,
        (None, Some(want)) => want.to_vec(),
        (None, None) => return Err(Error::Parse("tensor file has no signature".into())),
    };
    let mut t = SparseTensor::zeros(g.dim(), groups);
    for r in &entries {
        if r.idx.len() != t.arity() {
            return Err(Error::Parse(format!("record {:?} has {} indices, signature needs {}", r.idx, r.idx.len(), t.arity())));
        }
        let key = r.idx.iter().map(|l| label_index(g.basis(), l)).collect::<Result<Vec<_>>>()?;
        t.add_at(&key, coef(&r.coef, vars)?);
    }
    Ok(t)
}

pub fn tensor_to_json(t: &SparseTensor, g: &LieAlgebra, vars: &[String]) -> Value {
    let b = g.basis();
    let entries: Vec<Value> = t
        .entries()
        .map(|(k, v)| json!({"idx": k.iter().map(|&i| b[i].clone()).collect::<Vec<_>>(), "coef": v.fmt_with(vars)}))
        .collect();
    json!({"signature": signature_name(t.groups()), "entries": entries})
}

/// `{"matrix": [[..], ..]}` or a bare list of rows; entries are rational strings or integers.
pub fn parse_matrix(src: &str) -> Result<Matrix> {
    let v: Value = serde_json::from_str(src).map_err(|e| Error::Parse(format!("matrix file: {e}")))?;
    matrix_from_value(&v)
}

pub fn matrix_from_value(v: &Value) -> Result<Matrix> {
    let rows = match v {
        Value::Object(m) => m.get("matrix").ok_or_else(|| Error::Parse("matrix object needs a \"matrix\" field".into()))?,
        other => other,
    };
    let rows = rows.as_array().ok_or_else(|| Error::Parse("matrix must be a list of rows".into()))?;
    let mut out = Vec::new();
    for r in rows {
        let r = r.as_array().ok_or_else(|| Error::Parse("matrix row must be a list".into()))?;
        let mut row = Vec::new();
        for c in r {
            let s = coef(c, &[])?;
            row.push(s.as_rat().cloned().ok_or_else(|| Error::Parse("matrix entries must be rational".into()))?);
        }
        out.push(row);
    }
    let n = out.len();
    if out.iter().any(|r| r.len() != n) {
        return Err(Error::Parse("matrix must be square".into()));
    }
    Ok(out)
}

pub fn matrix_to_json(m: &[Vec<Rat>]) -> Value {
    Value::Array(m.iter().map(|r| Value::Array(r.iter().map(|x| Value::String(fmt_rat(x))).collect())).collect())
}

/// Comma-separated basis labels; a token that is not a label may be a
/// 0-based index.
pub fn parse_index_list(g: &LieAlgebra, s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for tok in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let i = match g.index_of(tok) {
            Some(i) => i,
            None => match tok.parse::<usize>() {
                Ok(i) if i < g.dim() => i,
                _ => return Err(Error::Parse(format!("{tok:?} is not a basis label of {}", g.name()))),
            },
        };
        if out.contains(&i) {
            return Err(Error::Parse(format!("basis element {tok:?} listed twice")));
        }
        out.push(i);
    }
    if out.is_empty() {
        return Err(Error::Parse("empty index list".into()));
    }
    Ok(out)
}

/// The triple blocks a Lie file may carry: `g`, `gstar` (label lists) and `pairing`.
#[derive(Clone, Debug, Default)]
pub struct TripleBlocks {
    pub g: Option<Vec<String>>,
    pub gstar: Option<Vec<String>>,
    pub pairing: Option<Matrix>,
}

pub fn parse_triple_blocks(src: &str) -> Result<TripleBlocks> {
    let f: LieFile = serde_json::from_str(src).map_err(|e| Error::Parse(format!("Lie algebra file: {e}")))?;
    let labels = |v: Option<Value>, what: &str| -> Result<Option<Vec<String>>> {
        v.map(|v| serde_json::from_value(v).map_err(|_| Error::Parse(format!("{what} must be a list of labels")))).transpose()
    };
    Ok(TripleBlocks {
        g: labels(f.g, "g")?,
        gstar: labels(f.gstar, "gstar")?,
        pairing: f.pairing.as_ref().map(matrix_from_value).transpose()?,
    })
}

/// A Lie file with the triple blocks attached.
pub fn triple_to_json(d: &LieAlgebra, pairing: &[Vec<Rat>], g: &[String], gstar: &[String]) -> Value {
    let mut v = lie_to_json(d);
    let m: &mut Map<String, Value> = v.as_object_mut().expect("object");
    m.insert("g".into(), json!(g));
    m.insert("gstar".into(), json!(gstar));
    m.insert("pairing".into(), matrix_to_json(pairing));
    v
}
