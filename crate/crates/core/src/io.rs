//! JSON documents, bundled fixtures and TikZ output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::disk_model::{PuncturedDisk, TaggedArc, Triangulation};
use crate::ext_analyzer::{ExtensionReport, Side, Verdict};
use crate::linalg::{parse_scalar, FieldConfig, LinalgError, Matrix, Scalar};
use crate::qp_algebra::{
    check_relations, is_split_mono, verify_exact, Arrow, Morphism, Potential, QpError, Quiver, RelationReport,
    Representation,
};
use crate::skein_engine::{FormalSum, Multicurve, SmoothingResult};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{path}: {message}")]
    Document { path: String, message: String },
    #[error(transparent)]
    Qp(#[from] QpError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
}

fn doc_err(path: impl Into<String>, message: impl Into<String>) -> IoError {
    IoError::Document { path: path.into(), message: message.into() }
}

pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str, path: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|source| IoError::Json { path: path.to_string(), source })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowDoc {
    pub label: String,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverDoc {
    pub vertices: Vec<usize>,
    pub arrows: Vec<ArrowDoc>,
}

impl QuiverDoc {
    pub fn from_quiver(q: &Quiver) -> Self {
        QuiverDoc {
            vertices: q.vertices().to_vec(),
            arrows: q.arrows().iter().map(|a| ArrowDoc { label: a.label.clone(), from: a.from, to: a.to }).collect(),
        }
    }

    pub fn to_quiver(&self) -> Result<Quiver, IoError> {
        let arrows = self.arrows.iter().map(|a| Arrow { label: a.label.clone(), from: a.from, to: a.to }).collect();
        Ok(Quiver::new(self.vertices.clone(), arrows)?)
    }
}

/// A scalar written as a string `"p/q"` or as a bare integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarDoc {
    Text(String),
    Int(i64),
}

impl ScalarDoc {
    fn parse(&self) -> Result<Scalar, LinalgError> {
        match self {
            ScalarDoc::Text(s) => parse_scalar(s),
            ScalarDoc::Int(v) => Ok(crate::linalg::int(*v)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotentialTermDoc {
    pub coeff: ScalarDoc,
    pub cycle: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PotentialDoc {
    pub terms: Vec<PotentialTermDoc>,
}

impl PotentialDoc {
    pub fn from_potential(q: &Quiver, p: &Potential) -> Self {
        PotentialDoc {
            terms: p
                .terms
                .iter()
                .map(|(c, path)| PotentialTermDoc {
                    coeff: ScalarDoc::Text(c.to_string()),
                    cycle: path.iter().map(|&a| q.arrows()[a].label.clone()).collect(),
                })
                .collect(),
        }
    }

    pub fn to_potential(&self, q: &Quiver) -> Result<Potential, IoError> {
        let mut terms = Vec::new();
        for (i, t) in self.terms.iter().enumerate() {
            let c = t.coeff.parse().map_err(|e| doc_err(format!("terms[{i}].coeff"), e.to_string()))?;
            let path = t
                .cycle
                .iter()
                .map(|l| q.arrow_index(l))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| doc_err(format!("terms[{i}].cycle"), e.to_string()))?;
            terms.push((c, path));
        }
        Potential::new(q, terms).map_err(|e| doc_err("terms", e.to_string()))
    }
}

pub type MatrixDoc = Vec<Vec<ScalarDoc>>;

fn matrix_doc(m: &Matrix) -> MatrixDoc {
    m.to_rows().iter().map(|r| r.iter().map(|v| ScalarDoc::Text(v.to_string())).collect()).collect()
}

fn matrix_from_doc(
    doc: Option<&MatrixDoc>,
    rows: usize,
    cols: usize,
    field: &FieldConfig,
    path: &str,
) -> Result<Matrix, IoError> {
    let Some(doc) = doc else {
        return Ok(Matrix::zeros(rows, cols));
    };
    if rows == 0 || cols == 0 {
        if doc.iter().any(|r| !r.is_empty()) {
            return Err(doc_err(path, format!("expected an empty {rows}x{cols} matrix")));
        }
        return Ok(Matrix::zeros(rows, cols));
    }
    if doc.len() != rows || doc.iter().any(|r| r.len() != cols) {
        return Err(doc_err(path, format!("expected a {rows}x{cols} matrix")));
    }
    let mut entries = Vec::with_capacity(rows);
    for (i, r) in doc.iter().enumerate() {
        let mut row = Vec::with_capacity(cols);
        for (j, v) in r.iter().enumerate() {
            let x = v.parse().map_err(|e| doc_err(format!("{path}[{i}][{j}]"), e.to_string()))?;
            row.push(field.embed(&x).map_err(|e| doc_err(format!("{path}[{i}][{j}]"), e.to_string()))?);
        }
        entries.push(row);
    }
    Ok(Matrix::from_rows(rows, cols, entries)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepDoc {
    pub dims: BTreeMap<String, usize>,
    #[serde(default)]
    pub mats: BTreeMap<String, MatrixDoc>,
}

impl RepDoc {
    pub fn from_rep(q: &Quiver, rep: &Representation) -> Self {
        RepDoc {
            dims: q.vertices().iter().zip(&rep.dims).map(|(v, d)| (v.to_string(), *d)).collect(),
            mats: q
                .arrows()
                .iter()
                .zip(&rep.mats)
                .filter(|(_, m)| !m.is_zero())
                .map(|(a, m)| (a.label.clone(), matrix_doc(m)))
                .collect(),
        }
    }

    /// Missing vertices have dimension 0 and missing arrows the zero map.
    pub fn to_rep(&self, q: &Quiver, field: &FieldConfig, path: &str) -> Result<Representation, IoError> {
        for key in self.dims.keys() {
            let ok = key.parse::<usize>().ok().is_some_and(|v| q.vertex_index(v).is_ok());
            if !ok {
                return Err(doc_err(format!("{path}.dims"), format!("unknown vertex {key:?}")));
            }
        }
        for key in self.mats.keys() {
            q.arrow_index(key).map_err(|e| doc_err(format!("{path}.mats"), e.to_string()))?;
        }
        let dims: Vec<usize> =
            q.vertices().iter().map(|v| self.dims.get(&v.to_string()).copied().unwrap_or(0)).collect();
        let mut mats = Vec::with_capacity(q.arrows().len());
        for (k, a) in q.arrows().iter().enumerate() {
            let (s, t) = q.ends(k);
            mats.push(matrix_from_doc(
                self.mats.get(&a.label),
                dims[t],
                dims[s],
                field,
                &format!("{path}.mats.{}", a.label),
            )?);
        }
        Ok(Representation { dims, mats })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct MorphismDoc {
    #[serde(default)]
    pub maps: BTreeMap<String, MatrixDoc>,
}

impl MorphismDoc {
    pub fn from_morphism(q: &Quiver, m: &Morphism) -> Self {
        MorphismDoc {
            maps: q
                .vertices()
                .iter()
                .zip(&m.maps)
                .filter(|(_, h)| !h.is_zero())
                .map(|(v, h)| (v.to_string(), matrix_doc(h)))
                .collect(),
        }
    }

    pub fn to_morphism(
        &self,
        q: &Quiver,
        from: &Representation,
        to: &Representation,
        field: &FieldConfig,
        path: &str,
    ) -> Result<Morphism, IoError> {
        for key in self.maps.keys() {
            let ok = key.parse::<usize>().ok().is_some_and(|v| q.vertex_index(v).is_ok());
            if !ok {
                return Err(doc_err(format!("{path}.maps"), format!("unknown vertex {key:?}")));
            }
        }
        let maps = q
            .vertices()
            .iter()
            .enumerate()
            .map(|(i, v)| {
                matrix_from_doc(
                    self.maps.get(&v.to_string()),
                    to.dims[i],
                    from.dims[i],
                    field,
                    &format!("{path}.maps.{v}"),
                )
            })
            .collect::<Result<_, _>>()?;
        Ok(Morphism { maps })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceDoc {
    pub name: String,
    pub bottom: String,
    pub middle: String,
    pub top: String,
    pub f: MorphismDoc,
    pub g: MorphismDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequencesDoc {
    pub sequences: Vec<SequenceDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectations {
    pub arrow_count: usize,
    pub e: u32,
    /// Dimension vectors by representation name.
    pub dims: BTreeMap<String, Vec<usize>>,
    pub plus: Vec<Vec<TaggedArc>>,
    pub d_pair: u32,
    pub ses_count: usize,
}

/// A worked example: triangulation, arcs of interest, transcribed modules
/// and sequences (in the example's own arrow labels), and expected values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureBundle {
    pub name: String,
    #[serde(default)]
    pub note: Vec<String>,
    pub disk: PuncturedDisk,
    pub triangulation: Triangulation,
    pub alpha: TaggedArc,
    pub beta: TaggedArc,
    pub arrows: Vec<ArrowDoc>,
    pub expected: Expectations,
    #[serde(default)]
    pub representations: BTreeMap<String, RepDoc>,
    #[serde(default)]
    pub sequences: Vec<SequenceDoc>,
}

impl FixtureBundle {
    /// The quiver of the triangulation, relabelled with the bundle's arrow
    /// names. Fails if the arrow sets differ.
    pub fn labelled_quiver(&self, computed: &Quiver) -> Result<Quiver, IoError> {
        let mut names = std::collections::HashMap::new();
        if computed.arrows().len() != self.arrows.len() {
            return Err(doc_err(
                "arrows",
                format!("{} arrows listed, {} computed", self.arrows.len(), computed.arrows().len()),
            ));
        }
        for a in &self.arrows {
            let k = computed
                .find_arrow(a.from, a.to)
                .ok_or_else(|| doc_err("arrows", format!("{} -> {} is not an arrow of Q(τ)", a.from, a.to)))?;
            names.insert(computed.arrows()[k].label.clone(), a.label.clone());
        }
        Ok(computed.relabel(&names)?)
    }
}

const EXAMPLE1: &str = include_str!("../fixtures/example1.json");
const EXAMPLE2: &str = include_str!("../fixtures/example2.json");
const EXAMPLE3_QUIVER: &str = include_str!("../fixtures/example3/quiver.json");
const EXAMPLE3_POTENTIAL: &str = include_str!("../fixtures/example3/potential.json");
const EXAMPLE3_REPS: &str = include_str!("../fixtures/example3/reps.json");
const EXAMPLE3_SEQUENCES: &str = include_str!("../fixtures/example3/sequences.json");

pub fn builtin_bundle(name: &str) -> Result<FixtureBundle, IoError> {
    let text = match name {
        "example1" => EXAMPLE1,
        "example2" => EXAMPLE2,
        _ => return Err(IoError::UnknownFixture(name.to_string())),
    };
    parse_json(text, &format!("fixtures/{name}.json"))
}

/// The four documents of the generic quiver-with-potential example.
pub struct QpDocuments<'a> {
    pub quiver: &'a str,
    pub potential: &'a str,
    pub reps: &'a str,
    pub sequences: &'a str,
}

pub fn builtin_qp_documents(name: &str) -> Result<QpDocuments<'static>, IoError> {
    match name {
        "example3" => Ok(QpDocuments {
            quiver: EXAMPLE3_QUIVER,
            potential: EXAMPLE3_POTENTIAL,
            reps: EXAMPLE3_REPS,
            sequences: EXAMPLE3_SEQUENCES,
        }),
        _ => Err(IoError::UnknownFixture(name.to_string())),
    }
}

#[derive(Debug, Clone)]
pub struct SequenceVerdict {
    pub name: String,
    pub exact: bool,
    /// `None` when the sequence is not exact.
    pub split: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub quiver: Quiver,
    pub relations: Vec<(String, RelationReport)>,
    pub sequences: Vec<SequenceVerdict>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.relations.iter().all(|(_, r)| r.ok()) && self.sequences.iter().all(|s| s.exact && s.split == Some(false))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "relations": self.relations.iter().map(|(name, r)| json!({
                "name": name,
                "ok": r.ok(),
                "failures": r.failures.iter().map(|f| json!({
                    "arrow": f.arrow,
                    "residual": matrix_doc(&f.residual),
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "sequences": self.sequences.iter().map(|s| json!({
                "name": s.name,
                "exact": s.exact,
                "split": s.split,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Parses representations keyed by name.
pub fn parse_reps(
    text: &str,
    path: &str,
    quiver: &Quiver,
    field: &FieldConfig,
) -> Result<BTreeMap<String, Representation>, IoError> {
    let docs: BTreeMap<String, RepDoc> = parse_json(text, path)?;
    docs.iter().map(|(k, d)| Ok((k.clone(), d.to_rep(quiver, field, &format!("{path}:{k}"))?))).collect()
}

pub fn check_sequence(
    quiver: &Quiver,
    reps: &BTreeMap<String, Representation>,
    seq: &SequenceDoc,
    field: &FieldConfig,
    path: &str,
) -> Result<SequenceVerdict, IoError> {
    let get = |name: &str, what: &str| {
        reps.get(name).ok_or_else(|| doc_err(format!("{path}.{what}"), format!("unknown representation {name:?}")))
    };
    let (a, e, c) = (get(&seq.bottom, "bottom")?, get(&seq.middle, "middle")?, get(&seq.top, "top")?);
    let f = seq.f.to_morphism(quiver, a, e, field, &format!("{path}.f"))?;
    let g = seq.g.to_morphism(quiver, e, c, field, &format!("{path}.g"))?;
    let exact = verify_exact(quiver, a, e, c, &f, &g, field)?;
    let split = if exact { Some(is_split_mono(quiver, a, e, &f, field)?) } else { None };
    Ok(SequenceVerdict { name: seq.name.clone(), exact, split })
}

/// Relation check on every representation and exactness plus splitting on
/// every declared sequence.
pub fn verify_qp(docs: &QpDocuments<'_>, field: &FieldConfig) -> Result<VerifyReport, IoError> {
    let quiver = parse_json::<QuiverDoc>(docs.quiver, "quiver")?.to_quiver()?;
    let potential = parse_json::<PotentialDoc>(docs.potential, "potential")?.to_potential(&quiver)?;
    let reps = parse_reps(docs.reps, "reps", &quiver, field)?;
    let seqs: SequencesDoc = parse_json(docs.sequences, "sequences")?;
    let mut relations = Vec::new();
    for (name, rep) in &reps {
        relations.push((name.clone(), check_relations(&quiver, &potential, rep, field)?));
    }
    let sequences = seqs
        .sequences
        .iter()
        .enumerate()
        .map(|(i, s)| check_sequence(&quiver, &reps, s, field, &format!("sequences[{i}]")))
        .collect::<Result<_, _>>()?;
    Ok(VerifyReport { quiver, relations, sequences })
}

pub fn multicurve_json(m: &Multicurve) -> Value {
    serde_json::to_value(m).expect("serializable")
}

pub fn smoothing_json(s: &SmoothingResult) -> Value {
    json!({
        "plus": s.plus.iter().map(multicurve_json).collect::<Vec<_>>(),
        "minus": s.minus.iter().map(multicurve_json).collect::<Vec<_>>(),
        "plus_provenance": s.plus_provenance,
        "minus_provenance": s.minus_provenance,
    })
}

pub fn formal_sum_json(s: &FormalSum) -> Value {
    serde_json::to_value(&s.terms).expect("serializable")
}

pub fn report_json(q: &Quiver, r: &ExtensionReport) -> Value {
    json!({
        "alpha": r.alpha,
        "beta": r.beta,
        "e": r.e,
        "candidates": r.candidates.iter().map(|c| json!({
            "multicurve": multicurve_json(&c.multicurve),
            "side": c.side,
            "provenance": c.provenance,
            "d_c": c.d_c,
            "d_pair": c.d_pair,
            "verdict": c.verdict,
            "non_split": c.non_split,
            "sequence": c.sequence.as_ref().map(|s| json!({
                "bottom": RepDoc::from_rep(q, &s.bottom),
                "middle": RepDoc::from_rep(q, &s.middle),
                "top": RepDoc::from_rep(q, &s.top),
                "f": MorphismDoc::from_morphism(q, &s.f),
                "g": MorphismDoc::from_morphism(q, &s.g),
            })),
        })).collect::<Vec<_>>(),
    })
}

pub fn report_text(r: &ExtensionReport) -> String {
    let mut out = format!("alpha {}  beta {}  e = {}\n", r.alpha, r.beta, r.e);
    for c in &r.candidates {
        let side = match c.side {
            Side::Plus => "+",
            Side::Minus => "-",
        };
        let verdict = match c.verdict {
            Verdict::Ses => "ses",
            Verdict::NoSes => "no-ses",
        };
        let cert = match c.non_split {
            Some(true) => "  non-split sequence found",
            _ => "",
        };
        let _ = writeln!(
            out,
            "  {side} {:<40} d(C) = {:<3} d = {:<3} {verdict}{cert}",
            c.multicurve.to_string(),
            c.d_c,
            c.d_pair
        );
    }
    out
}

fn point(disk: &PuncturedDisk, k: usize) -> (f64, f64) {
    let theta = std::f64::consts::FRAC_PI_2 - 2.0 * std::f64::consts::PI * k as f64 / disk.n() as f64;
    (2.0 * theta.cos(), 2.0 * theta.sin())
}

/// Standalone TikZ picture of the disk with the given arcs.
pub fn tikz(disk: &PuncturedDisk, layers: &[(&str, Vec<TaggedArc>)]) -> String {
    let mut s = String::from("\\begin{tikzpicture}\n  \\draw (0,0) circle (2);\n  \\fill (0,0) circle (0.05);\n");
    for k in 0..disk.n() {
        let (x, y) = point(disk, k);
        let _ = writeln!(s, "  \\fill ({x:.3},{y:.3}) circle (0.05) node[anchor=south] {{{k}}};");
    }
    for (style, arcs) in layers {
        for arc in arcs {
            match *arc {
                TaggedArc::Peripheral { from, to } => {
                    let (x1, y1) = point(disk, from);
                    let (x2, y2) = point(disk, to);
                    let d = disk.cw_distance(from, to).unwrap_or(0) as f64 / disk.n() as f64;
                    let theta = std::f64::consts::FRAC_PI_2
                        - 2.0 * std::f64::consts::PI * (from as f64 / disk.n() as f64 + d / 2.0);
                    let r = 2.0 * (1.0 - d) * 0.9;
                    let _ = writeln!(
                        s,
                        "  \\draw[{style}] ({x1:.3},{y1:.3}) .. controls ({:.3},{:.3}) .. ({x2:.3},{y2:.3});",
                        r * theta.cos(),
                        r * theta.sin()
                    );
                }
                TaggedArc::Radial { at, tag } => {
                    let (x, y) = point(disk, at);
                    let mark = if tag == crate::disk_model::Tag::Notched { " node[pos=0.95] {$\\bowtie$}" } else { "" };
                    let _ = writeln!(s, "  \\draw[{style}] ({x:.3},{y:.3}) -- (0,0){mark};");
                }
            }
        }
    }
    s.push_str("\\end{tikzpicture}\n");
    s
}
