//! Extensions between arc representations from smoothings.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arc_rep::{arc_representation, ArcRepError, JacobianContext};
use crate::disk_model::{DiskError, PuncturedDisk, TaggedArc};
use crate::linalg::FieldConfig;
use crate::qp_algebra::{
    find_ses, hom_space, socle_dims, top_dims, Morphism, QpError, Quiver, Representation, SearchBudget,
};
use crate::skein_engine::{smooth_pair, Multicurve, Provenance, SkeinError, SmoothingResult};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtError {
    #[error(transparent)]
    Disk(#[from] DiskError),
    #[error(transparent)]
    Skein(#[from] SkeinError),
    #[error(transparent)]
    ArcRep(#[from] ArcRepError),
    #[error(transparent)]
    Qp(#[from] QpError),
    #[error("{0} belongs to the triangulation and cannot be an end term")]
    InTriangulation(TaggedArc),
    #[error("no non-split sequence found for middle term {0} although d(C) = d(α, β)")]
    SearchFailed(Multicurve),
}

pub fn ext_dimension(disk: &PuncturedDisk, alpha: &TaggedArc, beta: &TaggedArc) -> Result<u32, ExtError> {
    Ok(disk.crossing_number(alpha, beta)?)
}

pub fn middle_term_candidates(
    disk: &PuncturedDisk,
    alpha: &TaggedArc,
    beta: &TaggedArc,
) -> Result<SmoothingResult, ExtError> {
    Ok(smooth_pair(disk, alpha, beta)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Ses,
    NoSes,
}

#[derive(Debug, Clone)]
pub struct SequenceCertificate {
    pub bottom: Representation,
    pub middle: Representation,
    pub top: Representation,
    pub f: Morphism,
    pub g: Morphism,
}

#[derive(Debug, Clone)]
pub struct CandidateReport {
    pub multicurve: Multicurve,
    pub side: Side,
    pub provenance: Provenance,
    pub d_c: u32,
    pub d_pair: u32,
    pub verdict: Verdict,
    pub sequence: Option<SequenceCertificate>,
    pub non_split: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct ExtensionReport {
    pub alpha: TaggedArc,
    pub beta: TaggedArc,
    pub e: u32,
    pub candidates: Vec<CandidateReport>,
}

/// Module of a multicurve; members lying in τ contribute nothing.
pub fn candidate_module(
    ctx: &JacobianContext,
    multicurve: &Multicurve,
    field: &FieldConfig,
) -> Result<Representation, ExtError> {
    let mut rep = Representation::zero(ctx.quiver());
    for arc in multicurve.arcs() {
        if ctx.tau().contains(arc) {
            continue;
        }
        rep = rep.direct_sum(&arc_representation(ctx, arc, field)?);
    }
    Ok(rep)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AnalysisOptions {
    pub budget: SearchBudget,
    /// Skip the linear-algebra search and report verdicts only.
    pub verdicts_only: bool,
}

pub fn analyze_extension(
    ctx: &JacobianContext,
    alpha: &TaggedArc,
    beta: &TaggedArc,
    field: &FieldConfig,
    options: AnalysisOptions,
) -> Result<ExtensionReport, ExtError> {
    let tau = ctx.tau();
    let disk = tau.disk();
    for arc in [alpha, beta] {
        if tau.contains(arc) {
            return Err(ExtError::InTriangulation(*arc));
        }
    }
    let e = ext_dimension(disk, alpha, beta)?;
    let smoothing = middle_term_candidates(disk, alpha, beta)?;
    let d_pair = disk.total_dimension(&[*alpha, *beta], tau)?;
    let (m_alpha, m_beta) = if options.verdicts_only {
        (None, None)
    } else {
        (Some(arc_representation(ctx, alpha, field)?), Some(arc_representation(ctx, beta, field)?))
    };
    let sides = [
        (Side::Plus, &smoothing.plus, &smoothing.plus_provenance),
        (Side::Minus, &smoothing.minus, &smoothing.minus_provenance),
    ];
    let mut candidates = Vec::new();
    for (side, list, prov) in sides {
        for (c, &provenance) in list.iter().zip(prov.iter()) {
            let d_c = disk.total_dimension(c.arcs(), tau)?;
            let verdict = if d_c == d_pair { Verdict::Ses } else { Verdict::NoSes };
            let mut sequence = None;
            let mut non_split = None;
            if let (Verdict::Ses, Some(ma), Some(mb)) = (verdict, &m_alpha, &m_beta) {
                let (bottom, top) = match side {
                    Side::Plus => (ma, mb),
                    Side::Minus => (mb, ma),
                };
                let middle = candidate_module(ctx, c, field)?;
                match find_ses(ctx.quiver(), bottom, &middle, top, field, options.budget)? {
                    Some((f, g)) => {
                        non_split = Some(true);
                        sequence = Some(SequenceCertificate { bottom: bottom.clone(), middle, top: top.clone(), f, g });
                    }
                    None => return Err(ExtError::SearchFailed(c.clone())),
                }
            }
            candidates.push(CandidateReport {
                multicurve: c.clone(),
                side,
                provenance,
                d_c,
                d_pair,
                verdict,
                sequence,
                non_split,
            });
        }
    }
    Ok(ExtensionReport { alpha: *alpha, beta: *beta, e, candidates })
}

/// All `(α, C, β)` with `e(α, β) >= 1` and `C` a right-turn smoothing.
pub fn enumerate_triangles(disk: &PuncturedDisk) -> Result<Vec<(TaggedArc, Multicurve, TaggedArc)>, ExtError> {
    if disk.n() < 4 {
        return Err(QpError::DiskTooSmall(disk.n()).into());
    }
    let arcs = disk.enumerate_tagged_arcs();
    let pairs: Vec<(TaggedArc, TaggedArc)> = arcs.iter().flat_map(|a| arcs.iter().map(move |b| (*a, *b))).collect();
    let chunks: Vec<Vec<(TaggedArc, Multicurve, TaggedArc)>> = pairs
        .par_iter()
        .map(|(a, b)| -> Result<_, ExtError> {
            if disk.crossing_number(a, b)? == 0 {
                return Ok(Vec::new());
            }
            Ok(smooth_pair(disk, a, b)?.plus.into_iter().map(|c| (*a, c, *b)).collect())
        })
        .collect::<Result<_, _>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MiddleConstraintReport {
    /// Socle and top of the middle term supported on the allowed vertices.
    pub socle_top: bool,
    /// `Hom(bottom, middle)` and `Hom(middle, top)` are both nonzero.
    pub homs_nonzero: bool,
    /// `dim middle = dim bottom + dim top` vertex by vertex.
    pub dims_add: bool,
}

impl MiddleConstraintReport {
    pub fn all(&self) -> bool {
        self.socle_top && self.homs_nonzero && self.dims_add
    }
}

/// Allowed socle and top supports, as vertex indices. `None` means the union
/// of the supports of the two end terms.
#[derive(Debug, Clone, Default)]
pub struct SupportSets {
    pub socle: Option<Vec<usize>>,
    pub top: Option<Vec<usize>>,
}

fn support(v: &[usize]) -> Vec<usize> {
    v.iter().enumerate().filter(|(_, d)| **d > 0).map(|(i, _)| i).collect()
}

pub fn validate_middle_constraints(
    quiver: &Quiver,
    bottom: &Representation,
    middle: &Representation,
    top: &Representation,
    sets: &SupportSets,
    field: &FieldConfig,
) -> Result<MiddleConstraintReport, ExtError> {
    for rep in [bottom, middle, top] {
        rep.check_shapes(quiver)?;
    }
    let socle_allowed = sets.socle.clone().unwrap_or_else(|| {
        let mut s = support(&socle_dims(quiver, bottom, field));
        s.extend(support(&socle_dims(quiver, top, field)));
        s
    });
    let top_allowed = sets.top.clone().unwrap_or_else(|| {
        let mut s = support(&top_dims(quiver, bottom, field));
        s.extend(support(&top_dims(quiver, top, field)));
        s
    });
    let socle_top = support(&socle_dims(quiver, middle, field)).iter().all(|v| socle_allowed.contains(v))
        && support(&top_dims(quiver, middle, field)).iter().all(|v| top_allowed.contains(v));
    let homs_nonzero =
        !hom_space(quiver, bottom, middle, field)?.is_empty() && !hom_space(quiver, middle, top, field)?.is_empty();
    let dims_add = (0..quiver.vertices().len()).all(|i| middle.dims[i] == bottom.dims[i] + top.dims[i]);
    Ok(MiddleConstraintReport { socle_top, homs_nonzero, dims_add })
}
