//! Once-punctured disk, tagged arcs and triangulations.
//!
//! Curves are handled through their lifts to the universal cover of the
//! annulus obtained by removing the puncture. The cover is drawn as the upper
//! half-plane: boundary marked point `a` lifts to the integers `a + k n`,
//! clockwise on the disk is increasing `x`, and the puncture sits at `+i∞`.
//! A peripheral arc is a semicircle over an interval of length < n, a noose is
//! a semicircle of length exactly n and a radial arc is a vertical ray.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiskError {
    #[error("a punctured disk needs at least 2 marked points, got {0}")]
    TooSmall(usize),
    #[error("boundary index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("peripheral arc {0} cuts out an unpunctured monogon or bigon")]
    Degenerate(TaggedArc),
    #[error("count {got} \u{2260} {n}")]
    WrongCount { got: usize, n: usize },
    #[error("arcs {0} and {1} cross")]
    Crossing(TaggedArc, TaggedArc),
    #[error("arc {0} listed twice")]
    Duplicate(TaggedArc),
    #[error("illegal tag configuration at the puncture")]
    IllegalTags,
    #[error("curve {0} has no lift")]
    NoLift(Curve),
    #[error("cannot parse arc from {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Plain,
    Notched,
}

impl Tag {
    pub fn flip(self) -> Tag {
        match self {
            Tag::Plain => Tag::Notched,
            Tag::Notched => Tag::Plain,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Plain => write!(f, "\u{2022}"),
            Tag::Notched => write!(f, "\u{22c8}"),
        }
    }
}

/// A tagged arc. `Peripheral { from, to }` is the arc whose puncture-free
/// side is bounded by the clockwise boundary path `from -> to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum TaggedArc {
    Peripheral { from: usize, to: usize },
    Radial { at: usize, tag: Tag },
}

impl TaggedArc {
    pub fn peripheral(from: usize, to: usize) -> Self {
        TaggedArc::Peripheral { from, to }
    }

    pub fn radial(at: usize, tag: Tag) -> Self {
        TaggedArc::Radial { at, tag }
    }

    pub fn plain(at: usize) -> Self {
        TaggedArc::Radial { at, tag: Tag::Plain }
    }

    pub fn notched(at: usize) -> Self {
        TaggedArc::Radial { at, tag: Tag::Notched }
    }

    pub fn is_radial(&self) -> bool {
        matches!(self, TaggedArc::Radial { .. })
    }

    pub fn is_notched(&self) -> bool {
        matches!(self, TaggedArc::Radial { tag: Tag::Notched, .. })
    }
}

impl fmt::Display for TaggedArc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TaggedArc::Peripheral { from, to } => write!(f, "P({from},{to})"),
            TaggedArc::Radial { at, tag } => write!(f, "R({at},{tag})"),
        }
    }
}

/// Accepts `P(5,3)`, `R(4,plain)`, `R(4,notched)` and the symbol forms
/// `R(4,•)`, `R(4,⋈)`.
impl FromStr for TaggedArc {
    type Err = DiskError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || DiskError::Parse(s.to_string());
        let t = s.trim();
        let (head, rest) = t.split_once('(').ok_or_else(err)?;
        let body = rest.strip_suffix(')').ok_or_else(err)?;
        let (x, y) = body.split_once(',').ok_or_else(err)?;
        let x: usize = x.trim().parse().map_err(|_| err())?;
        match head.trim() {
            "P" | "p" => {
                let y: usize = y.trim().parse().map_err(|_| err())?;
                Ok(TaggedArc::peripheral(x, y))
            }
            "R" | "r" => {
                let tag = match y.trim() {
                    "plain" | "p" | "\u{2022}" | "." => Tag::Plain,
                    "notched" | "n" | "\u{22c8}" | "x" => Tag::Notched,
                    _ => return Err(err()),
                };
                Ok(TaggedArc::radial(x, tag))
            }
            _ => Err(err()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Curve {
    Arc(TaggedArc),
    /// Loop based at a boundary point enclosing the puncture.
    Noose(usize),
    /// Closed loop around the puncture.
    PunctureLoop,
    BoundarySegment,
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curve::Arc(a) => write!(f, "{a}"),
            Curve::Noose(a) => write!(f, "l({a})"),
            Curve::PunctureLoop => write!(f, "loop"),
            Curve::BoundarySegment => write!(f, "segment"),
        }
    }
}

impl From<TaggedArc> for Curve {
    fn from(a: TaggedArc) -> Self {
        Curve::Arc(a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lift {
    Interval { lo: i64, hi: i64 },
    Ray { at: i64 },
}

impl Lift {
    pub fn translate(self, by: i64) -> Lift {
        match self {
            Lift::Interval { lo, hi } => Lift::Interval { lo: lo + by, hi: hi + by },
            Lift::Ray { at } => Lift::Ray { at: at + by },
        }
    }
}

fn intervals_link(p1: i64, q1: i64, p2: i64, q2: i64) -> bool {
    (p1 < p2 && p2 < q1 && q1 < q2) || (p2 < p1 && p1 < q2 && q2 < q1)
}

/// Σ_k link(a, b + k n).
pub fn link_count(a: Lift, b: Lift, n: i64) -> u32 {
    let (alo, ahi) = match a {
        Lift::Interval { lo, hi } => (lo, hi),
        Lift::Ray { at } => (at, at),
    };
    let (blo, bhi) = match b {
        Lift::Interval { lo, hi } => (lo, hi),
        Lift::Ray { at } => (at, at),
    };
    let kmin = (alo - bhi).div_euclid(n) - 1;
    let kmax = (ahi - blo).div_euclid(n) + 1;
    let mut count = 0;
    for k in kmin..=kmax {
        let hit = match (a, b.translate(k * n)) {
            (Lift::Ray { .. }, Lift::Ray { .. }) => false,
            (Lift::Ray { at }, Lift::Interval { lo, hi }) | (Lift::Interval { lo, hi }, Lift::Ray { at }) => {
                lo < at && at < hi
            }
            (Lift::Interval { lo: p1, hi: q1 }, Lift::Interval { lo: p2, hi: q2 }) => intervals_link(p1, q1, p2, q2),
        };
        if hit {
            count += 1;
        }
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DiskDoc")]
pub struct PuncturedDisk {
    n: usize,
}

#[derive(Deserialize)]
struct DiskDoc {
    n: usize,
}

impl TryFrom<DiskDoc> for PuncturedDisk {
    type Error = DiskError;
    fn try_from(d: DiskDoc) -> Result<Self, DiskError> {
        PuncturedDisk::new(d.n)
    }
}

impl PuncturedDisk {
    pub fn new(n: usize) -> Result<Self, DiskError> {
        if n < 2 {
            return Err(DiskError::TooSmall(n));
        }
        Ok(PuncturedDisk { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check(&self, index: usize) -> Result<(), DiskError> {
        if index >= self.n {
            Err(DiskError::IndexOutOfRange { index, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn cw_distance(&self, a: usize, b: usize) -> Result<usize, DiskError> {
        self.check(a)?;
        self.check(b)?;
        Ok((b + self.n - a) % self.n)
    }

    pub fn validate_arc(&self, arc: &TaggedArc) -> Result<(), DiskError> {
        match *arc {
            TaggedArc::Peripheral { from, to } => {
                if self.cw_distance(from, to)? < 2 {
                    return Err(DiskError::Degenerate(*arc));
                }
                Ok(())
            }
            TaggedArc::Radial { at, .. } => self.check(at),
        }
    }

    /// Canonical lift with the left end in `[0, n)`.
    pub fn lift(&self, curve: &Curve) -> Result<Lift, DiskError> {
        match *curve {
            Curve::Arc(arc) => {
                self.validate_arc(&arc)?;
                Ok(match arc {
                    TaggedArc::Peripheral { from, to } => {
                        let lo = from as i64;
                        Lift::Interval { lo, hi: lo + self.cw_distance(from, to)? as i64 }
                    }
                    TaggedArc::Radial { at, .. } => Lift::Ray { at: at as i64 },
                })
            }
            Curve::Noose(a) => {
                self.check(a)?;
                Ok(Lift::Interval { lo: a as i64, hi: (a + self.n) as i64 })
            }
            c => Err(DiskError::NoLift(c)),
        }
    }

    /// The plain curves whose lifts are compared after tag resolution, or
    /// `None` when the pair is compatible by tags alone.
    fn resolve_tags(&self, a: &TaggedArc, b: &TaggedArc) -> Option<(Curve, Curve)> {
        match (*a, *b) {
            (TaggedArc::Radial { at: x, tag: s }, TaggedArc::Radial { at: y, tag: t }) => {
                if s == t {
                    None
                } else if s == Tag::Notched {
                    Some((Curve::Noose(x), Curve::Arc(*b)))
                } else {
                    Some((Curve::Arc(*a), Curve::Noose(y)))
                }
            }
            _ => Some((Curve::Arc(*a), Curve::Arc(*b))),
        }
    }

    pub fn crossing_number(&self, a: &TaggedArc, b: &TaggedArc) -> Result<u32, DiskError> {
        self.validate_arc(a)?;
        self.validate_arc(b)?;
        match self.resolve_tags(a, b) {
            None => Ok(0),
            Some((ca, cb)) => Ok(link_count(self.lift(&ca)?, self.lift(&cb)?, self.n as i64)),
        }
    }

    pub fn crossing_vector(&self, arc: &TaggedArc, tau: &Triangulation) -> Result<Vec<u32>, DiskError> {
        tau.arcs.iter().map(|t| self.crossing_number(t, arc)).collect()
    }

    /// Total number of crossings of the members of `multicurve` with `tau`.
    pub fn total_dimension(&self, multicurve: &[TaggedArc], tau: &Triangulation) -> Result<u32, DiskError> {
        let mut d = 0;
        for arc in multicurve {
            d += self.crossing_vector(arc, tau)?.iter().sum::<u32>();
        }
        Ok(d)
    }

    /// All tagged arcs: `n(n-2)` peripheral and `2n` radial ones.
    pub fn enumerate_tagged_arcs(&self) -> Vec<TaggedArc> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for a in 0..n {
            for d in 2..n {
                out.push(TaggedArc::peripheral(a, (a + d) % n));
            }
        }
        for a in 0..n {
            out.push(TaggedArc::plain(a));
            out.push(TaggedArc::notched(a));
        }
        out
    }

    pub fn tau_rotate(&self, arc: &TaggedArc) -> TaggedArc {
        let n = self.n;
        match *arc {
            TaggedArc::Peripheral { from, to } => TaggedArc::peripheral((from + 1) % n, (to + 1) % n),
            TaggedArc::Radial { at, tag } => TaggedArc::radial((at + 1) % n, tag.flip()),
        }
    }

    /// On the cluster category the shift coincides with τ.
    pub fn shift(&self, arc: &TaggedArc) -> TaggedArc {
        self.tau_rotate(arc)
    }

    pub fn validate_triangulation(&self, arcs: Vec<TaggedArc>) -> Result<Triangulation, DiskError> {
        Triangulation::new(*self, arcs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TagConfig {
    /// At least two radial arcs, all carrying this tag.
    Uniform(Tag),
    /// `R(at,•)` and `R(at,⋈)` and no other radial arc.
    Fork(usize),
}

/// A maximal compatible set of tagged arcs. Arc order is kept: vertex `k`
/// of the associated quiver is `arcs[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TriangulationDoc")]
pub struct Triangulation {
    disk: PuncturedDisk,
    arcs: Vec<TaggedArc>,
}

#[derive(Deserialize)]
struct TriangulationDoc {
    disk: PuncturedDisk,
    arcs: Vec<TaggedArc>,
}

impl TryFrom<TriangulationDoc> for Triangulation {
    type Error = DiskError;
    fn try_from(d: TriangulationDoc) -> Result<Self, DiskError> {
        Triangulation::new(d.disk, d.arcs)
    }
}

impl Triangulation {
    pub fn new(disk: PuncturedDisk, arcs: Vec<TaggedArc>) -> Result<Self, DiskError> {
        for a in &arcs {
            disk.validate_arc(a)?;
        }
        let mut seen = HashSet::new();
        for a in &arcs {
            if !seen.insert(*a) {
                return Err(DiskError::Duplicate(*a));
            }
        }
        if arcs.len() != disk.n() {
            return Err(DiskError::WrongCount { got: arcs.len(), n: disk.n() });
        }
        for (i, a) in arcs.iter().enumerate() {
            for b in &arcs[i + 1..] {
                if disk.crossing_number(a, b)? > 0 {
                    return Err(DiskError::Crossing(*a, *b));
                }
            }
        }
        let t = Triangulation { disk, arcs };
        t.tag_config()?;
        Ok(t)
    }

    pub fn disk(&self) -> &PuncturedDisk {
        &self.disk
    }

    pub fn arcs(&self) -> &[TaggedArc] {
        &self.arcs
    }

    pub fn position(&self, arc: &TaggedArc) -> Option<usize> {
        self.arcs.iter().position(|a| a == arc)
    }

    pub fn contains(&self, arc: &TaggedArc) -> bool {
        self.position(arc).is_some()
    }

    pub fn tag_config(&self) -> Result<TagConfig, DiskError> {
        let radials: Vec<(usize, Tag)> = self
            .arcs
            .iter()
            .filter_map(|a| match *a {
                TaggedArc::Radial { at, tag } => Some((at, tag)),
                _ => None,
            })
            .collect();
        if radials.len() < 2 {
            return Err(DiskError::IllegalTags);
        }
        let tag = radials[0].1;
        if radials.iter().all(|r| r.1 == tag) {
            return Ok(TagConfig::Uniform(tag));
        }
        if radials.len() == 2 && radials[0].0 == radials[1].0 {
            return Ok(TagConfig::Fork(radials[0].0));
        }
        Err(DiskError::IllegalTags)
    }

    /// Image under τ, keeping the arc order.
    pub fn rotated(&self) -> Triangulation {
        Triangulation { disk: self.disk, arcs: self.arcs.iter().map(|a| self.disk.tau_rotate(a)).collect() }
    }
}

/// Every triangulation of the disk, each with arcs sorted.
pub fn enumerate_triangulations(disk: &PuncturedDisk) -> Vec<Triangulation> {
    let arcs = disk.enumerate_tagged_arcs();
    let m = arcs.len();
    let compat: Vec<Vec<bool>> = (0..m)
        .map(|i| (0..m).map(|j| disk.crossing_number(&arcs[i], &arcs[j]).map(|e| e == 0).unwrap_or(false)).collect())
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn rec(
        start: usize,
        chosen: &mut Vec<usize>,
        arcs: &[TaggedArc],
        compat: &[Vec<bool>],
        disk: &PuncturedDisk,
        out: &mut Vec<Triangulation>,
    ) {
        if chosen.len() == disk.n() {
            let set: Vec<TaggedArc> = chosen.iter().map(|&i| arcs[i]).collect();
            if let Ok(t) = Triangulation::new(*disk, set) {
                out.push(t);
            }
            return;
        }
        for i in start..arcs.len() {
            if chosen.iter().all(|&j| compat[i][j]) {
                chosen.push(i);
                rec(i + 1, chosen, arcs, compat, disk, out);
                chosen.pop();
            }
        }
    }
    rec(0, &mut chosen, &arcs, &compat, disk, &mut out);
    out
}
