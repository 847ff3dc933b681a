//! Quivers with potential, their representations and morphisms.
//!
//! A path `a1 a2 ... ad` is traversed `a1` first; matrices act on column
//! vectors, so the path evaluates to `φ_ad ⋯ φ_a1`, and the matrix of an arrow
//! `i -> k` has shape `dims[k] x dims[i]`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::disk_model::{DiskError, TagConfig, TaggedArc, Triangulation};
use crate::linalg::{int, FieldConfig, LinalgError, Matrix, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QpError {
    #[error(transparent)]
    Disk(#[from] DiskError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("algebra operations need n >= 4, got n = {0}")]
    DiskTooSmall(usize),
    #[error("unknown arrow {0:?}")]
    UnknownArrow(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("path is not composable at position {0}")]
    NotComposable(usize),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("morphism is not injective at vertex {0}")]
    NotInjective(usize),
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("the construction needs a field of characteristic other than {0}")]
    Characteristic(u64),
    #[error("unsupported triangulation: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub label: String,
    pub from: usize,
    pub to: usize,
}

/// Vertices carry integer labels; arrows refer to vertices by label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<usize>,
    arrows: Vec<Arrow>,
    index: HashMap<usize, usize>,
}

impl Quiver {
    pub fn new(vertices: Vec<usize>, arrows: Vec<Arrow>) -> Result<Self, QpError> {
        let mut index = HashMap::new();
        for (i, &v) in vertices.iter().enumerate() {
            if index.insert(v, i).is_some() {
                return Err(QpError::DuplicateLabel(v.to_string()));
            }
        }
        let mut labels = std::collections::HashSet::new();
        for a in &arrows {
            if !labels.insert(a.label.clone()) {
                return Err(QpError::DuplicateLabel(a.label.clone()));
            }
            for v in [a.from, a.to] {
                if !index.contains_key(&v) {
                    return Err(QpError::UnknownVertex(v));
                }
            }
        }
        Ok(Quiver { vertices, arrows, index })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_index(&self, label: usize) -> Result<usize, QpError> {
        self.index.get(&label).copied().ok_or(QpError::UnknownVertex(label))
    }

    pub fn arrow_index(&self, label: &str) -> Result<usize, QpError> {
        self.arrows.iter().position(|a| a.label == label).ok_or_else(|| QpError::UnknownArrow(label.to_string()))
    }

    /// Source and target as vertex indices.
    pub fn ends(&self, arrow: usize) -> (usize, usize) {
        let a = &self.arrows[arrow];
        (self.index[&a.from], self.index[&a.to])
    }

    pub fn find_arrow(&self, from: usize, to: usize) -> Option<usize> {
        self.arrows.iter().position(|a| a.from == from && a.to == to)
    }

    /// Same quiver with arrows renamed through `names` (old label -> new label).
    pub fn relabel(&self, names: &HashMap<String, String>) -> Result<Quiver, QpError> {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                label: names.get(&a.label).cloned().unwrap_or_else(|| a.label.clone()),
                from: a.from,
                to: a.to,
            })
            .collect();
        Quiver::new(self.vertices.clone(), arrows)
    }
}

/// A path as a list of arrow indices.
pub type Path = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Potential {
    pub terms: Vec<(Scalar, Path)>,
}

fn canonical_rotation(cycle: &[usize]) -> Path {
    (0..cycle.len())
        .map(|s| cycle[s..].iter().chain(&cycle[..s]).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

impl Potential {
    pub fn new(quiver: &Quiver, terms: Vec<(Scalar, Path)>) -> Result<Self, QpError> {
        let mut out = Vec::new();
        for (c, cycle) in terms {
            if cycle.is_empty() {
                return Err(QpError::NotComposable(0));
            }
            for (k, w) in cycle.iter().enumerate() {
                let next = cycle[(k + 1) % cycle.len()];
                if *w >= quiver.arrows.len() || next >= quiver.arrows.len() {
                    return Err(QpError::UnknownArrow(format!("#{w}")));
                }
                if quiver.arrows[*w].to != quiver.arrows[next].from {
                    return Err(QpError::NotComposable(k));
                }
            }
            out.push((c, canonical_rotation(&cycle)));
        }
        Ok(Potential { terms: out })
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `∂_a` of the potential as a list of coefficiented paths, equal paths merged.
pub fn cyclic_derivative(p: &Potential, arrow: usize) -> Vec<(Scalar, Path)> {
    let mut acc: BTreeMap<Path, Scalar> = BTreeMap::new();
    for (c, cycle) in &p.terms {
        let d = cycle.len();
        for i in 0..d {
            if cycle[i] != arrow {
                continue;
            }
            let rest: Path = (1..d).map(|k| cycle[(i + k) % d]).collect();
            let e = acc.entry(rest).or_insert_with(Scalar::zero);
            *e += c;
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(p, c)| (c, p)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub dims: Vec<usize>,
    pub mats: Vec<Matrix>,
}

impl Representation {
    pub fn zero(quiver: &Quiver) -> Self {
        Representation { dims: vec![0; quiver.vertices.len()], mats: vec![Matrix::zeros(0, 0); quiver.arrows.len()] }
    }

    /// Checks that every matrix has shape `dims[target] x dims[source]`.
    pub fn check_shapes(&self, quiver: &Quiver) -> Result<(), QpError> {
        if self.dims.len() != quiver.vertices.len() || self.mats.len() != quiver.arrows.len() {
            return Err(QpError::Shape("representation does not match quiver size".into()));
        }
        for (k, m) in self.mats.iter().enumerate() {
            let (s, t) = quiver.ends(k);
            if m.shape() != (self.dims[t], self.dims[s]) {
                return Err(QpError::Shape(format!(
                    "arrow {} has shape {:?}, expected {:?}",
                    quiver.arrows[k].label,
                    m.shape(),
                    (self.dims[t], self.dims[s])
                )));
            }
        }
        Ok(())
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn direct_sum(&self, other: &Representation) -> Representation {
        Representation {
            dims: self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect(),
            mats: self.mats.iter().zip(&other.mats).map(|(a, b)| a.direct_sum(b)).collect(),
        }
    }

    pub fn embed(&self, field: &FieldConfig) -> Result<Representation, QpError> {
        Ok(Representation {
            dims: self.dims.clone(),
            mats: self.mats.iter().map(|m| m.embed(field)).collect::<Result<_, _>>()?,
        })
    }

    /// Simple module at vertex index `v`.
    pub fn simple(quiver: &Quiver, v: usize) -> Representation {
        let mut dims = vec![0; quiver.vertices.len()];
        dims[v] = 1;
        let mats = (0..quiver.arrows.len())
            .map(|k| {
                let (s, t) = quiver.ends(k);
                Matrix::zeros(dims[t], dims[s])
            })
            .collect();
        Representation { dims, mats }
    }
}

/// Evaluates a path starting at vertex index `start` (needed for the empty path).
pub fn evaluate_path(
    quiver: &Quiver,
    rep: &Representation,
    start: usize,
    path: &[usize],
    field: &FieldConfig,
) -> Result<Matrix, QpError> {
    let mut at = start;
    let mut m = Matrix::identity(rep.dims[start]);
    for (k, &a) in path.iter().enumerate() {
        let (s, t) = quiver.ends(a);
        if s != at {
            return Err(QpError::NotComposable(k));
        }
        m = rep.mats[a].mul(&m, field)?;
        at = t;
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationFailure {
    pub arrow: String,
    pub residual: Matrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RelationReport {
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates `∂_a P` for every arrow `a`.
pub fn check_relations(
    quiver: &Quiver,
    p: &Potential,
    rep: &Representation,
    field: &FieldConfig,
) -> Result<RelationReport, QpError> {
    rep.check_shapes(quiver)?;
    let mut report = RelationReport::default();
    for a in 0..quiver.arrows.len() {
        let (s, t) = quiver.ends(a);
        let mut acc = Matrix::zeros(rep.dims[s], rep.dims[t]);
        for (c, path) in cyclic_derivative(p, a) {
            let v = evaluate_path(quiver, rep, t, &path, field)?;
            acc = acc.add(&v.scale(&field.embed(&c)?, field), field)?;
        }
        if !acc.is_zero() {
            report.failures.push(RelationFailure { arrow: quiver.arrows[a].label.clone(), residual: acc });
        }
    }
    Ok(report)
}

/// Per-vertex linear maps between two representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub maps: Vec<Matrix>,
}

impl Morphism {
    pub fn identity(rep: &Representation) -> Morphism {
        Morphism { maps: rep.dims.iter().map(|&d| Matrix::identity(d)).collect() }
    }

    pub fn zero(from: &Representation, to: &Representation) -> Morphism {
        Morphism { maps: from.dims.iter().zip(&to.dims).map(|(&a, &b)| Matrix::zeros(b, a)).collect() }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Morphism, field: &FieldConfig) -> Result<Morphism, QpError> {
        let maps = self.maps.iter().zip(&first.maps).map(|(a, b)| a.mul(b, field)).collect::<Result<_, _>>()?;
        Ok(Morphism { maps })
    }

    fn check_shapes(&self, from: &Representation, to: &Representation) -> Result<(), QpError> {
        if self.maps.len() != from.dims.len() {
            return Err(QpError::Shape("morphism has wrong number of components".into()));
        }
        for (i, m) in self.maps.iter().enumerate() {
            if m.shape() != (to.dims[i], from.dims[i]) {
                return Err(QpError::Shape(format!(
                    "component {i} has shape {:?}, expected {:?}",
                    m.shape(),
                    (to.dims[i], from.dims[i])
                )));
            }
        }
        Ok(())
    }

    pub fn is_morphism(
        &self,
        quiver: &Quiver,
        from: &Representation,
        to: &Representation,
        field: &FieldConfig,
    ) -> Result<bool, QpError> {
        self.check_shapes(from, to)?;
        for a in 0..quiver.arrows.len() {
            let (s, t) = quiver.ends(a);
            let lhs = self.maps[t].mul(&from.mats[a], field)?;
            let rhs = to.mats[a].mul(&self.maps[s], field)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn linear_combination(basis: &[Morphism], coeffs: &[Scalar], field: &FieldConfig) -> Result<Morphism, QpError> {
        let mut maps: Vec<Matrix> = basis[0].maps.iter().map(|m| Matrix::zeros(m.rows(), m.cols())).collect();
        for (b, c) in basis.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            for (acc, m) in maps.iter_mut().zip(&b.maps) {
                *acc = acc.add(&m.scale(c, field), field)?;
            }
        }
        Ok(Morphism { maps })
    }
}

/// Basis of `Hom(M, N)`.
pub fn hom_space(
    quiver: &Quiver,
    m: &Representation,
    n: &Representation,
    field: &FieldConfig,
) -> Result<Vec<Morphism>, QpError> {
    let nv = quiver.vertices.len();
    let mut offset = vec![0; nv + 1];
    for i in 0..nv {
        offset[i + 1] = offset[i] + n.dims[i] * m.dims[i];
    }
    let unknowns = offset[nv];
    let var = |i: usize, r: usize, c: usize| offset[i] + r * m.dims[i] + c;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for a in 0..quiver.arrows.len() {
        let (s, t) = quiver.ends(a);
        let pm = &m.mats[a];
        let pn = &n.mats[a];
        // h_t φM - φN h_s, entry (p, q)
        for p in 0..n.dims[t] {
            for q in 0..m.dims[s] {
                let mut row = vec![Scalar::zero(); unknowns];
                let mut nonzero = false;
                for k in 0..m.dims[t] {
                    let v = pm.get(k, q);
                    if !v.is_zero() {
                        let x = var(t, p, k);
                        row[x] = field.add(&row[x], v);
                        nonzero = true;
                    }
                }
                for k in 0..n.dims[s] {
                    let v = pn.get(p, k);
                    if !v.is_zero() {
                        let x = var(s, k, q);
                        row[x] = field.sub(&row[x], v);
                        nonzero = true;
                    }
                }
                if nonzero {
                    rows.push(row);
                }
            }
        }
    }
    let nrows = rows.len();
    let system = Matrix::from_rows(nrows, unknowns, rows)?;
    let kernel = if nrows == 0 {
        (0..unknowns)
            .map(|j| {
                let mut v = vec![Scalar::zero(); unknowns];
                v[j] = Scalar::one();
                v
            })
            .collect()
    } else {
        system.kernel(field)
    };
    Ok(kernel
        .into_iter()
        .map(|v| Morphism {
            maps: (0..nv)
                .map(|i| {
                    let mut h = Matrix::zeros(n.dims[i], m.dims[i]);
                    for r in 0..n.dims[i] {
                        for c in 0..m.dims[i] {
                            h.set(r, c, v[var(i, r, c)].clone());
                        }
                    }
                    h
                })
                .collect(),
        })
        .collect())
}

/// Vertex-wise exactness of `0 -> M -f-> E -g-> N -> 0`; `f` and `g` must
/// also commute with the arrows.
#[allow(clippy::too_many_arguments)]
pub fn verify_exact(
    quiver: &Quiver,
    m: &Representation,
    e: &Representation,
    n: &Representation,
    f: &Morphism,
    g: &Morphism,
    field: &FieldConfig,
) -> Result<bool, QpError> {
    f.check_shapes(m, e)?;
    g.check_shapes(e, n)?;
    if !f.is_morphism(quiver, m, e, field)? || !g.is_morphism(quiver, e, n, field)? {
        return Ok(false);
    }
    for i in 0..quiver.vertices.len() {
        let rf = f.maps[i].rank(field);
        let rg = g.maps[i].rank(field);
        if rf != m.dims[i] || rg != n.dims[i] || rf + rg != e.dims[i] {
            return Ok(false);
        }
        if !g.maps[i].mul(&f.maps[i], field)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn flatten(maps: &[Matrix]) -> Vec<Scalar> {
    maps.iter().flat_map(|m| m.to_rows().into_iter().flatten()).collect()
}

/// Whether some `r: E -> M` satisfies `r ∘ f = id`, given a basis of `Hom(E, M)`.
fn has_retraction(hom_em: &[Morphism], m: &Representation, f: &Morphism, field: &FieldConfig) -> Result<bool, QpError> {
    let target = flatten(&Morphism::identity(m).maps);
    if hom_em.is_empty() {
        return Ok(target.iter().all(|v| v.is_zero()));
    }
    let columns: Vec<Vec<Scalar>> =
        hom_em.iter().map(|r| Ok(flatten(&r.compose(f, field)?.maps))).collect::<Result<_, QpError>>()?;
    let rows = target.len();
    if rows == 0 {
        return Ok(true);
    }
    let a = Matrix::from_rows(
        rows,
        columns.len(),
        (0..rows).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect(),
    )?;
    Ok(a.solve(&target, field).is_some())
}

pub fn is_split_mono(
    quiver: &Quiver,
    m: &Representation,
    e: &Representation,
    f: &Morphism,
    field: &FieldConfig,
) -> Result<bool, QpError> {
    f.check_shapes(m, e)?;
    for (i, h) in f.maps.iter().enumerate() {
        if h.rank(field) != m.dims[i] {
            return Err(QpError::NotInjective(quiver.vertices[i]));
        }
    }
    let hom_em = hom_space(quiver, e, m, field)?;
    has_retraction(&hom_em, m, f, field)
}

#[derive(Debug, Clone, Copy)]
pub struct SearchBudget {
    pub random_trials: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { random_trials: 1000, seed: 0x5eed }
    }
}

/// Looks for an exact non-split `0 -> A -> E -> C -> 0`.
pub fn find_ses(
    quiver: &Quiver,
    a: &Representation,
    e: &Representation,
    c: &Representation,
    field: &FieldConfig,
    budget: SearchBudget,
) -> Result<Option<(Morphism, Morphism)>, QpError> {
    let dims_match = (0..quiver.vertices.len()).all(|i| e.dims[i] == a.dims[i] + c.dims[i]);
    if !dims_match {
        return Ok(None);
    }
    let hom_ae = hom_space(quiver, a, e, field)?;
    let hom_ec = hom_space(quiver, e, c, field)?;
    let hom_ea = hom_space(quiver, e, a, field)?;
    if hom_ec.is_empty() && c.total_dim() > 0 {
        return Ok(None);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let nv = quiver.vertices.len();
    let full_rank = |m: &Morphism, want: &[usize]| (0..nv).all(|i| m.maps[i].rank(field) == want[i]);
    // basis elements first, then random combinations
    let mut fs: Vec<Morphism> = if a.total_dim() == 0 { vec![Morphism::zero(a, e)] } else { hom_ae.clone() };
    let mut trial = 0;
    loop {
        let Some(f) = fs.pop() else {
            if trial >= budget.random_trials || hom_ae.is_empty() {
                return Ok(None);
            }
            trial += 1;
            let cf: Vec<Scalar> = (0..hom_ae.len()).map(|_| field.int(rng.gen_range(-3..=3))).collect();
            fs.push(Morphism::linear_combination(&hom_ae, &cf, field)?);
            continue;
        };
        if !full_rank(&f, &a.dims) || has_retraction(&hom_ea, a, &f, field)? {
            continue;
        }
        // morphisms E -> C vanishing on the image of f
        let columns: Vec<Vec<Scalar>> =
            hom_ec.iter().map(|g| Ok(flatten(&g.compose(&f, field)?.maps))).collect::<Result<_, QpError>>()?;
        let rows = columns.first().map_or(0, |col| col.len());
        let kernel = if rows == 0 {
            (0..hom_ec.len())
                .map(|k| (0..hom_ec.len()).map(|l| if k == l { field.int(1) } else { field.int(0) }).collect())
                .collect()
        } else {
            Matrix::from_rows(
                rows,
                columns.len(),
                (0..rows).map(|r| columns.iter().map(|col| col[r].clone()).collect()).collect(),
            )?
            .kernel(field)
        };
        if kernel.is_empty() {
            continue;
        }
        let mut gs: Vec<Vec<Scalar>> = kernel.clone();
        for _ in 0..16 {
            let mut coeffs = vec![field.int(0); hom_ec.len()];
            for v in &kernel {
                let t = field.int(rng.gen_range(-3..=3));
                for (acc, x) in coeffs.iter_mut().zip(v) {
                    *acc = field.add(acc, &field.mul(&t, x));
                }
            }
            gs.push(coeffs);
        }
        for cg in gs {
            let g = Morphism::linear_combination(&hom_ec, &cg, field)?;
            if full_rank(&g, &c.dims) {
                return Ok(Some((f, g)));
            }
        }
    }
}

/// Socle dimension at each vertex: common kernel of the outgoing maps.
pub fn socle_dims(quiver: &Quiver, rep: &Representation, field: &FieldConfig) -> Vec<usize> {
    (0..quiver.vertices.len())
        .map(|i| {
            let outgoing: Vec<&Matrix> =
                (0..quiver.arrows.len()).filter(|&a| quiver.ends(a).0 == i).map(|a| &rep.mats[a]).collect();
            let rows: usize = outgoing.iter().map(|m| m.rows()).sum();
            if rows == 0 {
                return rep.dims[i];
            }
            let stacked = Matrix::from_rows(rows, rep.dims[i], outgoing.iter().flat_map(|m| m.to_rows()).collect())
                .expect("consistent shapes");
            rep.dims[i] - stacked.rank(field)
        })
        .collect()
}

/// Top dimension at each vertex: codimension of the sum of incoming images.
pub fn top_dims(quiver: &Quiver, rep: &Representation, field: &FieldConfig) -> Vec<usize> {
    (0..quiver.vertices.len())
        .map(|i| {
            let incoming: Vec<Matrix> =
                (0..quiver.arrows.len()).filter(|&a| quiver.ends(a).1 == i).map(|a| rep.mats[a].transpose()).collect();
            let rows: usize = incoming.iter().map(|m| m.rows()).sum();
            if rows == 0 {
                return rep.dims[i];
            }
            let stacked = Matrix::from_rows(rows, rep.dims[i], incoming.iter().flat_map(|m| m.to_rows()).collect())
                .expect("consistent shapes");
            rep.dims[i] - stacked.rank(field)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Quiver with potential of a triangulation
// ---------------------------------------------------------------------------

/// A side of a triangle in the cover: an arc of τ (by index) or a boundary segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    Arc(usize),
    Boundary,
}

struct CoverLookup<'a> {
    tau: &'a Triangulation,
    n: i64,
}

impl CoverLookup<'_> {
    /// The side with cover endpoints `(u, v)`, `0 < v - u < n`.
    fn side(&self, u: i64, v: i64) -> Option<Side> {
        if v - u == 1 {
            return Some(Side::Boundary);
        }
        let from = u.rem_euclid(self.n) as usize;
        let to = v.rem_euclid(self.n) as usize;
        self.tau.position(&TaggedArc::peripheral(from, to)).map(Side::Arc)
    }

    /// Apex of the triangle lying under the cover interval `(u, v)`.
    fn apex(&self, u: i64, v: i64) -> Result<(i64, Side, Side), QpError> {
        for z in u + 1..v {
            if let (Some(x), Some(y)) = (self.side(u, z), self.side(z, v)) {
                return Ok((z, x, y));
            }
        }
        Err(QpError::Unsupported(format!("no triangle under ({u},{v})")))
    }
}

/// Builds `(Q(τ), P(τ))`. Vertex `k` (1-based) is the `k`-th arc of τ; arrows
/// are labelled `a1, a2, ...` in order of `(source, target)`.
pub fn quiver_from_triangulation(tau: &Triangulation) -> Result<(Quiver, Potential), QpError> {
    let n = tau.disk().n();
    if n < 4 {
        return Err(QpError::DiskTooSmall(n));
    }
    let look = CoverLookup { tau, n: n as i64 };
    // arrows between arc indices, with multiplicity for 2-cycle cancellation
    let mut arrows: Vec<(usize, usize)> = Vec::new();
    // cycles as vertex sequences, with coefficient
    let mut cycles: Vec<(i64, Vec<usize>)> = Vec::new();

    let mut triangle = |a: Side, b: Side, c: Side, arrows: &mut Vec<(usize, usize)>, coeff: i64| {
        // sides (a,b), (b,c), (a,c) of a < b < c: arrows ab -> bc -> ac -> ab
        let order = [a, b, c];
        let pairs = [(a, b), (b, c), (c, a)];
        for (x, y) in pairs {
            if let (Side::Arc(x), Side::Arc(y)) = (x, y) {
                arrows.push((x, y));
            }
        }
        if let [Side::Arc(x), Side::Arc(y), Side::Arc(z)] = order {
            if coeff != 0 {
                cycles.push((coeff, vec![x, y, z]));
            }
        }
    };

    // polygon triangles under every peripheral arc
    for (k, arc) in tau.arcs().iter().enumerate() {
        if let TaggedArc::Peripheral { from, to } = *arc {
            let u = from as i64;
            let v = u + tau.disk().cw_distance(from, to)? as i64;
            let (_, x, y) = look.apex(u, v)?;
            triangle(x, y, Side::Arc(k), &mut arrows, 1);
        }
    }

    match tau.tag_config()? {
        TagConfig::Uniform(_) => {
            let mut radials: Vec<(usize, usize)> = tau
                .arcs()
                .iter()
                .enumerate()
                .filter_map(|(k, a)| match *a {
                    TaggedArc::Radial { at, .. } => Some((at, k)),
                    _ => None,
                })
                .collect();
            radials.sort();
            let m = radials.len();
            let mut interval = Vec::with_capacity(m);
            for j in 0..m {
                let u = radials[j].0 as i64;
                let mut v = radials[(j + 1) % m].0 as i64;
                if v <= u {
                    v += n as i64;
                }
                let side = look.side(u, v).ok_or_else(|| QpError::Unsupported(format!("missing side ({u},{v})")))?;
                interval.push(side);
            }
            if m == 2 {
                // Two punctured triangles glued along both radials: the
                // radial 2-cycle cancels and leaves one 4-cycle.
                let (r1, r2) = (radials[0].1, radials[1].1);
                for (j, side) in interval.iter().enumerate() {
                    let (rk, rk1) = if j == 0 { (r1, r2) } else { (r2, r1) };
                    if let Side::Arc(i) = *side {
                        arrows.push((i, rk1));
                        arrows.push((rk, i));
                    }
                }
                if let (Side::Arc(i1), Side::Arc(i2)) = (interval[0], interval[1]) {
                    cycles.push((1, vec![r2, i2, r1, i1]));
                }
            } else {
                for j in 0..m {
                    let rk = radials[j].1;
                    let rk1 = radials[(j + 1) % m].1;
                    arrows.push((rk1, rk));
                    if let Side::Arc(i) = interval[j] {
                        arrows.push((i, rk1));
                        arrows.push((rk, i));
                        cycles.push((1, vec![i, rk1, rk]));
                    }
                }
                let around: Vec<usize> = (0..m).rev().map(|j| radials[j].1).collect();
                cycles.push((-1, around));
            }
        }
        TagConfig::Fork(a) => {
            let plain = tau.position(&TaggedArc::plain(a)).expect("fork arc");
            let notched = tau.position(&TaggedArc::notched(a)).expect("fork arc");
            let u = a as i64;
            let (_, x, y) = look.apex(u, u + n as i64)?;
            for (r, coeff) in [(plain, 1), (notched, -1)] {
                if let Side::Arc(yi) = y {
                    arrows.push((yi, r));
                }
                if let Side::Arc(xi) = x {
                    arrows.push((r, xi));
                }
                if let (Side::Arc(xi), Side::Arc(yi)) = (x, y) {
                    cycles.push((coeff, vec![xi, yi, r]));
                }
            }
            if let (Side::Arc(xi), Side::Arc(yi)) = (x, y) {
                arrows.push((xi, yi));
            }
        }
    }

    // merge duplicates, cancel opposite pairs
    let mut count: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for (s, t) in arrows {
        *count.entry((s, t)).or_insert(0) += 1;
    }
    let keys: Vec<(usize, usize)> = count.keys().copied().collect();
    for (s, t) in keys {
        if s < t {
            if let Some(&back) = count.get(&(t, s)) {
                let fwd = count[&(s, t)];
                let c = fwd.min(back);
                *count.get_mut(&(s, t)).expect("present") -= c;
                *count.get_mut(&(t, s)).expect("present") -= c;
            }
        }
    }
    let mut list = Vec::new();
    for ((s, t), c) in count {
        if c > 1 {
            return Err(QpError::Unsupported(format!("double arrow {} -> {}", s + 1, t + 1)));
        }
        if c == 1 {
            list.push((s, t));
        }
    }
    let arrows: Vec<Arrow> = list
        .iter()
        .enumerate()
        .map(|(k, &(s, t))| Arrow { label: format!("a{}", k + 1), from: s + 1, to: t + 1 })
        .collect();
    let quiver = Quiver::new((1..=n).collect(), arrows)?;
    let mut terms = Vec::new();
    for (coeff, verts) in cycles {
        let mut path = Vec::new();
        for j in 0..verts.len() {
            let s = verts[j] + 1;
            let t = verts[(j + 1) % verts.len()] + 1;
            let a = quiver
                .find_arrow(s, t)
                .ok_or_else(|| QpError::Unsupported(format!("cycle uses cancelled arrow {s} -> {t}")))?;
            path.push(a);
        }
        terms.push((int(coeff), path));
    }
    let potential = Potential::new(&quiver, terms)?;
    Ok((quiver, potential))
}

// ---------------------------------------------------------------------------
// Linear type D family
// ---------------------------------------------------------------------------

/// Quiver `k+1 -> k` for `1 <= k <= n-3`, plus `n-1 -> n-2` and `n -> n-2`.
/// The arrow with source `v` is labelled `a{v}`.
pub fn linear_d_quiver(n: usize) -> Result<Quiver, QpError> {
    if n < 4 {
        return Err(QpError::DiskTooSmall(n));
    }
    let mut arrows = Vec::new();
    for v in 2..=n - 2 {
        arrows.push(Arrow { label: format!("a{v}"), from: v, to: v - 1 });
    }
    arrows.push(Arrow { label: format!("a{}", n - 1), from: n - 1, to: n - 2 });
    arrows.push(Arrow { label: format!("a{n}"), from: n, to: n - 2 });
    Quiver::new((1..=n).collect(), arrows)
}

#[derive(Debug, Clone)]
pub struct LemmaFixture {
    pub quiver: Quiver,
    pub bottom: Representation,
    pub middle: Representation,
    pub top: Representation,
    pub f: Morphism,
    pub g: Morphism,
}

fn half() -> Scalar {
    Scalar::new(1.into(), 2.into())
}

/// Non-split extension `0 -> M -> Y -> N -> 0` over the linear type D quiver,
/// for `1 < r < s < i < n-1`.
pub fn linear_d_fixture(n: usize, r: usize, s: usize, i: usize, field: &FieldConfig) -> Result<LemmaFixture, QpError> {
    if !(1 < r && r < s && s < i && i + 1 < n) {
        return Err(QpError::Parameter(format!("need 1 < r < s < i < n-1, got n={n} r={r} s={s} i={i}")));
    }
    if field.characteristic() == 2 {
        return Err(QpError::Characteristic(2));
    }
    let quiver = linear_d_quiver(n)?;
    let ix = |v: usize| v - 1;
    let arrow_of = |src: usize| quiver.arrow_index(&format!("a{src}")).expect("arrow");

    let mut bottom_dims = vec![0; n];
    let mut y_dims = vec![0; n];
    let mut top_dims_v = vec![0; n];
    for v in 1..=n {
        bottom_dims[ix(v)] = usize::from(v <= i);
        y_dims[ix(v)] = match v {
            _ if v <= r => 1,
            _ if v <= s => 2,
            _ if v <= i => 3,
            _ if v <= n - 2 => 2,
            _ => 1,
        };
        top_dims_v[ix(v)] = match v {
            _ if v <= r => 0,
            _ if v <= s => 1,
            _ if v <= n - 2 => 2,
            _ => 1,
        };
    }
    let build = |dims: &[usize], map: &dyn Fn(usize) -> Matrix| -> Representation {
        let mut mats = vec![Matrix::zeros(0, 0); quiver.arrows().len()];
        for src in 2..=n {
            let a = arrow_of(src);
            let (sv, tv) = quiver.ends(a);
            let m = map(src);
            let m = if m.shape() == (dims[tv], dims[sv]) { m } else { Matrix::zeros(dims[tv], dims[sv]) };
            mats[a] = m;
        }
        Representation { dims: dims.to_vec(), mats }
    };

    let bottom = build(&bottom_dims, &|src| {
        if src <= i {
            Matrix::identity(1)
        } else {
            Matrix::zeros(0, 0)
        }
    });
    // with i = n-2 the arrows from n-1 and n land in the 3-dimensional part
    // and pass through the inclusion K^2 -> K^3
    let middle = build(&y_dims, &|src| match src {
        _ if src == n - 1 && i + 2 == n => Matrix::from_ints(&[&[0], &[1], &[0]]),
        _ if src == n && i + 2 == n => Matrix::from_ints(&[&[0], &[1], &[1]]),
        _ if src == n - 1 => Matrix::from_ints(&[&[1], &[0]]),
        _ if src == n => Matrix::from_ints(&[&[1], &[1]]),
        _ if src > i + 1 => Matrix::identity(2),
        _ if src == i + 1 => Matrix::from_ints(&[&[0, 0], &[1, 0], &[0, 1]]),
        _ if src > s + 1 => Matrix::identity(3),
        _ if src == s + 1 => Matrix::from_ints(&[&[0, 1, 0], &[0, 0, 1]]),
        _ if src > r + 1 => Matrix::identity(2),
        _ if src == r + 1 => Matrix::from_ints(&[&[1, 0]]),
        _ => Matrix::identity(1),
    });
    let top = build(&top_dims_v, &|src| match src {
        _ if src == n - 1 => Matrix::from_ints(&[&[1], &[0]]),
        _ if src == n => Matrix::from_ints(&[&[1], &[1]]),
        _ if src > s + 1 => Matrix::identity(2),
        _ if src == s + 1 => Matrix::from_ints(&[&[1, 0]]),
        _ if src > r + 1 => Matrix::identity(1),
        _ => Matrix::zeros(0, 0),
    });

    let h = half();
    let one = Scalar::one();
    let mut f_maps = Vec::with_capacity(n);
    let mut g_maps = Vec::with_capacity(n);
    for v in 1..=n {
        let f = match v {
            _ if v <= r => Matrix::identity(1),
            _ if v <= s => Matrix::from_rows(2, 1, vec![vec![one.clone()], vec![h.clone()]])?,
            _ if v <= i => Matrix::from_rows(3, 1, vec![vec![h.clone()], vec![one.clone()], vec![h.clone()]])?,
            _ => Matrix::zeros(y_dims[ix(v)], 0),
        };
        let g = match v {
            _ if v <= r => Matrix::zeros(0, 1),
            _ if v <= s => Matrix::from_ints(&[&[1, -2]]),
            _ if v <= i => Matrix::from_ints(&[&[0, 1, -2], &[1, 0, -1]]),
            _ if v <= n - 2 => Matrix::from_ints(&[&[1, -2], &[0, -1]]),
            _ if v == n - 1 => Matrix::from_ints(&[&[1]]),
            _ => Matrix::from_ints(&[&[-1]]),
        };
        f_maps.push(f.embed(field).map_err(|_| QpError::Characteristic(field.characteristic()))?);
        g_maps.push(g.embed(field)?);
    }
    Ok(LemmaFixture {
        bottom: bottom.embed(field)?,
        middle: middle.embed(field)?,
        top: top.embed(field)?,
        f: Morphism { maps: f_maps },
        g: Morphism { maps: g_maps },
        quiver,
    })
}
