//! Smoothing of crossings between tagged arcs.
//!
//! Resolutions are computed in the universal cover. Two linked intervals
//! `p1 < p2 < q1 < q2` resolve either into the nested pair `(p1,q2),(p2,q1)`
//! or into the disjoint pair `(p1,p2),(q1,q2)`. Walking along `α`, a right
//! turn is the nested pair when `α` has the leftmost endpoint and the
//! disjoint pair otherwise. A resolved interval of length `1` is a boundary
//! segment, of length `n` a noose, and of length in `(n, 2n)` a curve with one
//! self-crossing.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::disk_model::{Curve, DiskError, Lift, PuncturedDisk, Tag, TaggedArc};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SkeinError {
    #[error("{0} and {1} do not cross")]
    NoCrossing(TaggedArc, TaggedArc),
    #[error(transparent)]
    Disk(#[from] DiskError),
    #[error("skein invariant violated: {0}")]
    Invariant(String),
}

/// A multiset of tagged arcs, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct Multicurve(Vec<TaggedArc>);

impl Multicurve {
    pub fn new(mut arcs: Vec<TaggedArc>) -> Self {
        arcs.sort();
        Multicurve(arcs)
    }

    pub fn arcs(&self) -> &[TaggedArc] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Multicurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FormalSum {
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: i64,
    pub arcs: Multicurve,
}

impl FormalSum {
    /// Merges equal terms and drops zero coefficients.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Multicurve)>) -> Self {
        let mut acc: BTreeMap<Multicurve, i64> = BTreeMap::new();
        for (c, m) in terms {
            *acc.entry(m).or_insert(0) += c;
        }
        FormalSum {
            terms: acc.into_iter().filter(|(_, c)| *c != 0).map(|(arcs, coeff)| Term { coeff, arcs }).collect(),
        }
    }
}

/// Expands nooses, evaluates puncture loops to 2 and boundary segments to 1.
pub fn normalize(raw: &[Curve], coeff: i64) -> FormalSum {
    let mut arcs = Vec::new();
    let mut c = coeff;
    for curve in raw {
        match *curve {
            Curve::Arc(a) => arcs.push(a),
            Curve::Noose(a) => {
                arcs.push(TaggedArc::notched(a));
                arcs.push(TaggedArc::plain(a));
            }
            Curve::PunctureLoop => c *= 2,
            Curve::BoundarySegment => {}
        }
    }
    FormalSum::from_terms([(c, Multicurve::new(arcs))])
}

/// A cover interval that projects to a curve with exactly one self-crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelfCrossing {
    pub lo: i64,
    pub hi: i64,
}

fn interval_curve(disk: &PuncturedDisk, lo: i64, hi: i64) -> Result<Curve, SkeinError> {
    let n = disk.n() as i64;
    let a = lo.rem_euclid(n) as usize;
    match hi - lo {
        1 => Ok(Curve::BoundarySegment),
        l if l == n => Ok(Curve::Noose(a)),
        l if 1 < l && l < n => Ok(Curve::Arc(TaggedArc::peripheral(a, hi.rem_euclid(n) as usize))),
        l => Err(SkeinError::Invariant(format!("interval ({lo},{hi}) of length {l} is not a simple curve"))),
    }
}

/// Resolves the self-crossing of `δ`: one side gives the loop around the
/// puncture together with the arc `γ = (lo, hi - n)`, the other the arc
/// `λ = (hi - n, lo + n)`.
pub fn smooth_self(disk: &PuncturedDisk, delta: SelfCrossing) -> Result<FormalSum, SkeinError> {
    let n = disk.n() as i64;
    let len = delta.hi - delta.lo;
    if !(n < len && len < 2 * n) {
        return Err(SkeinError::Invariant(format!(
            "({},{}) does not have exactly one self-crossing",
            delta.lo, delta.hi
        )));
    }
    let gamma = interval_curve(disk, delta.lo, delta.hi - n)?;
    let lambda = interval_curve(disk, delta.hi - n, delta.lo + n)?;
    let mut terms = normalize(&[Curve::PunctureLoop, gamma], 1).terms;
    terms.extend(normalize(&[lambda], 1).terms);
    Ok(FormalSum::from_terms(terms.into_iter().map(|t| (t.coeff, t.arcs))))
}

/// The multicurves contributed by one resolved strand pair.
fn resolve(disk: &PuncturedDisk, pieces: &[Piece]) -> Result<Vec<Multicurve>, SkeinError> {
    let n = disk.n() as i64;
    let mut fixed: Vec<TaggedArc> = Vec::new();
    let mut self_crossing = None;
    for piece in pieces {
        match *piece {
            Piece::Radial(at, tag) => fixed.push(TaggedArc::radial(at.rem_euclid(n) as usize, tag)),
            Piece::Interval(lo, hi) => {
                if hi - lo > n {
                    if self_crossing.replace(SelfCrossing { lo, hi }).is_some() {
                        return Err(SkeinError::Invariant("two self-crossing strands".into()));
                    }
                } else {
                    fixed.extend(normalize(&[interval_curve(disk, lo, hi)?], 1).terms.remove(0).arcs.0);
                }
            }
        }
    }
    let Some(delta) = self_crossing else {
        return Ok(vec![Multicurve::new(fixed)]);
    };
    // The loop-with-arc side is kept in tagged form: the two radial pairs at
    // the ends of δ with opposite tags.
    let a = delta.lo.rem_euclid(n) as usize;
    let b = delta.hi.rem_euclid(n) as usize;
    let lambda = interval_curve(disk, delta.hi - n, delta.lo + n)?;
    let mut out = Vec::new();
    for extra in [
        normalize(&[lambda], 1).terms.remove(0).arcs.0,
        vec![TaggedArc::notched(a), TaggedArc::plain(b)],
        vec![TaggedArc::plain(a), TaggedArc::notched(b)],
    ] {
        let mut arcs = fixed.clone();
        arcs.extend(extra);
        out.push(Multicurve::new(arcs));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Interval(i64, i64),
    Radial(i64, Tag),
}

/// Where a resolution happened.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// The only crossing.
    Single,
    /// Radial arcs with opposite tags meeting at the puncture.
    Puncture,
    /// First crossing met walking along `α`.
    X,
    /// Second crossing met walking along `α`.
    Y,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothingResult {
    pub plus: Vec<Multicurve>,
    pub minus: Vec<Multicurve>,
    pub plus_provenance: Vec<Provenance>,
    pub minus_provenance: Vec<Provenance>,
}

fn linked(a: (i64, i64), b: (i64, i64)) -> bool {
    (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1)
}

/// Right and left resolutions of the crossing of `a` with `b`.
fn interval_pairings(a: (i64, i64), b: (i64, i64)) -> ([Piece; 2], [Piece; 2]) {
    let (left, right) = if a.0 < b.0 { (a, b) } else { (b, a) };
    let nested = [Piece::Interval(left.0, right.1), Piece::Interval(right.0, left.1)];
    let disjoint = [Piece::Interval(left.0, right.0), Piece::Interval(left.1, right.1)];
    if a.0 < b.0 {
        (nested, disjoint)
    } else {
        (disjoint, nested)
    }
}

pub fn smooth_pair(disk: &PuncturedDisk, alpha: &TaggedArc, beta: &TaggedArc) -> Result<SmoothingResult, SkeinError> {
    let e = disk.crossing_number(alpha, beta)?;
    if e == 0 {
        return Err(SkeinError::NoCrossing(*alpha, *beta));
    }
    let n = disk.n() as i64;
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let mut plus_provenance = Vec::new();
    let mut minus_provenance = Vec::new();
    let push = |side: &mut Vec<Multicurve>, prov: &mut Vec<Provenance>, ms: Vec<Multicurve>, p: Provenance| {
        for m in ms {
            side.push(m);
            prov.push(p);
        }
    };
    let lift_a = disk.lift(&(*alpha).into())?;
    let lift_b = disk.lift(&(*beta).into())?;
    match (*alpha, *beta) {
        (TaggedArc::Radial { at: a, .. }, TaggedArc::Radial { at: b, .. }) => {
            // avoiding the puncture on either side
            let to_arc = |x: usize, y: usize| -> Result<Vec<Multicurve>, SkeinError> {
                let lo = x as i64;
                let hi = lo + disk.cw_distance(x, y)? as i64;
                resolve(disk, &[Piece::Interval(lo, hi)])
            };
            push(&mut plus, &mut plus_provenance, to_arc(b, a)?, Provenance::Puncture);
            push(&mut minus, &mut minus_provenance, to_arc(a, b)?, Provenance::Puncture);
        }
        (TaggedArc::Peripheral { .. }, TaggedArc::Radial { tag, .. })
        | (TaggedArc::Radial { tag, .. }, TaggedArc::Peripheral { .. }) => {
            let (iv, ray, alpha_is_interval) = match (lift_a, lift_b) {
                (Lift::Interval { lo, hi }, Lift::Ray { at }) => ((lo, hi), at, true),
                (Lift::Ray { at }, Lift::Interval { lo, hi }) => ((lo, hi), at, false),
                _ => unreachable!(),
            };
            let x = (iv.0 + 1..iv.1)
                .find(|x| (x - ray).rem_euclid(n) == 0)
                .ok_or_else(|| SkeinError::Invariant("ray misses interval".into()))?;
            // walking along the interval the right turn keeps its start
            let keep_start = [Piece::Radial(iv.0, tag), Piece::Interval(x, iv.1)];
            let keep_end = [Piece::Radial(iv.1, tag), Piece::Interval(iv.0, x)];
            let (r, l) = if alpha_is_interval { (keep_start, keep_end) } else { (keep_end, keep_start) };
            push(&mut plus, &mut plus_provenance, resolve(disk, &r)?, Provenance::Single);
            push(&mut minus, &mut minus_provenance, resolve(disk, &l)?, Provenance::Single);
        }
        (TaggedArc::Peripheral { .. }, TaggedArc::Peripheral { .. }) => {
            let (Lift::Interval { lo: p1, hi: q1 }, Lift::Interval { lo: p2, hi: q2 }) = (lift_a, lift_b) else {
                unreachable!()
            };
            let a = (p1, q1);
            let kmin = (p1 - q2).div_euclid(n) - 1;
            let kmax = (q1 - p2).div_euclid(n) + 1;
            let mut crossings: Vec<(i64, i64)> =
                (kmin..=kmax).map(|k| (p2 + k * n, q2 + k * n)).filter(|b| linked(a, *b)).collect();
            crossings.sort();
            if crossings.len() != e as usize {
                return Err(SkeinError::Invariant("crossing count disagrees with lifts".into()));
            }
            let labels: &[Provenance] = if e == 1 { &[Provenance::Single] } else { &[Provenance::X, Provenance::Y] };
            for (b, &label) in crossings.iter().zip(labels) {
                let (r, l) = interval_pairings(a, *b);
                push(&mut plus, &mut plus_provenance, resolve(disk, &r)?, label);
                push(&mut minus, &mut minus_provenance, resolve(disk, &l)?, label);
            }
        }
    }
    Ok(SmoothingResult { plus, minus, plus_provenance, minus_provenance })
}
