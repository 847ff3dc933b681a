//! Arc representations of the Jacobian algebra of a triangulation.
//!
//! The basis of `M_j` at vertex `i` is the set of crossings of `j` with the
//! `i`-th arc of τ. Crossings are ordered along `j` in the universal cover:
//! by `x` along a semicircle, by height along a vertical ray.

use num_rational::Ratio;
use num_traits::One;
use thiserror::Error;

use crate::disk_model::{DiskError, Lift, Tag, TagConfig, TaggedArc, Triangulation};
use crate::linalg::{FieldConfig, Matrix, Scalar};
use crate::qp_algebra::{check_relations, quiver_from_triangulation, Potential, QpError, Quiver, Representation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArcRepError {
    #[error("arc {0} belongs to the triangulation")]
    InTriangulation(TaggedArc),
    #[error(transparent)]
    Disk(#[from] DiskError),
    #[error(transparent)]
    Qp(#[from] QpError),
    #[error("arc representation invariant violated: {0}")]
    Invariant(String),
}

/// A triangulation together with its quiver with potential.
#[derive(Debug, Clone)]
pub struct JacobianContext {
    tau: Triangulation,
    config: TagConfig,
    quiver: Quiver,
    potential: Potential,
}

impl JacobianContext {
    pub fn new(tau: &Triangulation) -> Result<Self, ArcRepError> {
        let (quiver, potential) = quiver_from_triangulation(tau)?;
        Ok(JacobianContext { config: tau.tag_config()?, tau: tau.clone(), quiver, potential })
    }

    pub fn tau(&self) -> &Triangulation {
        &self.tau
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionEvent {
    /// Indices into τ. Two entries for a crossing with the fork pair.
    pub tau_arcs: Vec<usize>,
    pub point_id: usize,
    pub lift_parameter: Ratio<i64>,
    /// Which translate of the τ-arc lift was crossed.
    pub shift: i64,
    /// Quotiented out (the point `q0`).
    pub quotient: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffectiveCurve {
    Arc,
    /// Notched radial whose plain companion lies in τ: the loop around the
    /// puncture based at the arc's endpoint.
    Loop,
    /// Notched radial whose plain companion is absent: plain part up to the
    /// last crossing, then once around the puncture, ending at `q0`.
    Truncated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcRepPlan {
    pub effective_curve: EffectiveCurve,
    pub events: Vec<IntersectionEvent>,
    /// `(from, to)` event pairs joined by a detour around the puncture.
    pub detours: Vec<(usize, usize)>,
}

impl ArcRepPlan {
    pub fn marked_point_q0(&self) -> Option<usize> {
        self.events.iter().position(|e| e.quotient)
    }
}

/// Crossing of two linked semicircles, as an `x` coordinate.
fn semicircle_crossing(a: (i64, i64), b: (i64, i64)) -> Ratio<i64> {
    let (c1, r1) = (a.0 + a.1, a.1 - a.0);
    let (c2, r2) = (b.0 + b.1, b.1 - b.0);
    Ratio::new(r1 * r1 - r2 * r2 + c2 * c2 - c1 * c1, 4 * (c2 - c1))
}

fn linked(a: (i64, i64), b: (i64, i64)) -> bool {
    (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Raw {
    Arc(usize),
    ForkRay,
    ForkNoose,
}

struct RawEvent {
    what: Raw,
    at: Ratio<i64>,
    shift: i64,
}

fn translates(lo: i64, hi: i64, n: i64, window: (i64, i64)) -> impl Iterator<Item = i64> {
    let kmin = (window.0 - hi).div_euclid(n) - 1;
    let kmax = (window.1 - lo).div_euclid(n) + 1;
    kmin..=kmax
}

pub fn intersection_sequence(ctx: &JacobianContext, j: &TaggedArc) -> Result<ArcRepPlan, ArcRepError> {
    let tau = &ctx.tau;
    let disk = tau.disk();
    disk.validate_arc(j)?;
    if tau.contains(j) {
        return Err(ArcRepError::InTriangulation(*j));
    }
    let n = disk.n() as i64;
    // with all radial arcs notched the picture is the plain one, tags swapped
    let j = match (ctx.config, *j) {
        (TagConfig::Uniform(Tag::Notched), TaggedArc::Radial { at, tag }) => TaggedArc::radial(at, tag.flip()),
        _ => *j,
    };
    let fork = match ctx.config {
        TagConfig::Fork(a) => Some(a as i64),
        TagConfig::Uniform(_) => None,
    };
    let peripheral_lifts: Vec<(usize, i64, i64)> = tau
        .arcs()
        .iter()
        .enumerate()
        .filter_map(|(k, a)| match disk.lift(&(*a).into()) {
            Ok(Lift::Interval { lo, hi }) => Some((k, lo, hi)),
            _ => None,
        })
        .collect();
    let mut radial_bases: Vec<(i64, usize)> = tau
        .arcs()
        .iter()
        .enumerate()
        .filter_map(|(k, a)| match *a {
            TaggedArc::Radial { at, .. } => Some((at as i64, k)),
            _ => None,
        })
        .collect();
    radial_bases.sort();

    let mut raw: Vec<RawEvent> = Vec::new();
    let mut effective_curve = EffectiveCurve::Arc;
    let mut quotient_last = false;

    match j {
        TaggedArc::Peripheral { .. } => {
            let Lift::Interval { lo: p, hi: q } = disk.lift(&j.into())? else { unreachable!() };
            for &(k, lo, hi) in &peripheral_lifts {
                for t in translates(lo, hi, n, (p, q)) {
                    let iv = (lo + t * n, hi + t * n);
                    if linked((p, q), iv) {
                        raw.push(RawEvent { what: Raw::Arc(k), at: semicircle_crossing((p, q), iv), shift: t });
                    }
                }
            }
            match fork {
                None => {
                    for &(r, k) in &radial_bases {
                        for t in translates(r, r, n, (p, q)) {
                            let x = r + t * n;
                            if p < x && x < q {
                                raw.push(RawEvent { what: Raw::Arc(k), at: Ratio::from_integer(x), shift: t });
                            }
                        }
                    }
                }
                Some(a) => {
                    for t in translates(a, a + n, n, (p, q)) {
                        let x = a + t * n;
                        if p < x && x < q {
                            raw.push(RawEvent { what: Raw::ForkRay, at: Ratio::from_integer(x), shift: t });
                        }
                        let iv = (x, x + n);
                        if linked((p, q), iv) {
                            raw.push(RawEvent { what: Raw::ForkNoose, at: semicircle_crossing((p, q), iv), shift: t });
                        }
                    }
                }
            }
            raw.sort_by_key(|x| x.at);
        }
        TaggedArc::Radial { at, tag } => {
            let q = at as i64;
            let base_is_radial = radial_bases.iter().any(|&(r, _)| r == q);
            let ray_events = |raw: &mut Vec<RawEvent>| {
                let mut evs: Vec<RawEvent> = Vec::new();
                for &(k, lo, hi) in &peripheral_lifts {
                    for t in translates(lo, hi, n, (q, q)) {
                        if lo + t * n < q && q < hi + t * n {
                            evs.push(RawEvent { what: Raw::Arc(k), at: Ratio::from_integer(hi - lo), shift: t });
                        }
                    }
                }
                evs.sort_by_key(|x| x.at);
                raw.extend(evs);
            };
            match (fork, tag) {
                (Some(a), _) => {
                    ray_events(&mut raw);
                    let t = (q - a - 1).div_euclid(n);
                    raw.push(RawEvent { what: Raw::ForkNoose, at: Ratio::from_integer(n), shift: t });
                }
                (None, Tag::Plain) => ray_events(&mut raw),
                (None, Tag::Notched) if base_is_radial => {
                    effective_curve = EffectiveCurve::Loop;
                    let mut lifted: Vec<(i64, usize)> = radial_bases
                        .iter()
                        .flat_map(|&(r, k)| [(r, k), (r + n, k)])
                        .filter(|&(r, _)| q < r && r < q + n)
                        .collect();
                    lifted.sort();
                    for (r, k) in lifted {
                        raw.push(RawEvent {
                            what: Raw::Arc(k),
                            at: Ratio::from_integer(r),
                            shift: (r - q).div_euclid(n),
                        });
                    }
                }
                (None, Tag::Notched) => {
                    effective_curve = EffectiveCurve::Truncated;
                    ray_events(&mut raw);
                    let Some(last) = raw.last() else {
                        return Err(ArcRepError::Invariant(format!("{j} crosses no peripheral arc")));
                    };
                    let (Raw::Arc(ik), t0) = (last.what, last.shift) else { unreachable!() };
                    // the interval between the radial arcs on either side of q
                    let rk = radial_bases
                        .iter()
                        .flat_map(|&(r, _)| [r - n, r])
                        .filter(|&r| r < q)
                        .max()
                        .expect("at least two radial arcs");
                    let mut lifted: Vec<(i64, usize)> = radial_bases
                        .iter()
                        .flat_map(|&(r, k)| [(r, k), (r + n, k), (r - n, k)])
                        .filter(|&(r, _)| rk < r && r <= rk + n)
                        .collect();
                    lifted.sort();
                    for (r, k) in lifted {
                        raw.push(RawEvent { what: Raw::Arc(k), at: Ratio::from_integer(r), shift: 0 });
                    }
                    raw.push(RawEvent { what: Raw::Arc(ik), at: Ratio::from_integer(0), shift: t0 + 1 });
                    quotient_last = true;
                }
            }
        }
    }

    // fold the fork crossings into events on the two radial vertices
    let mut events: Vec<IntersectionEvent> = Vec::new();
    let fork_pair = fork.map(|a| {
        let a = a as usize;
        (tau.position(&TaggedArc::plain(a)).expect("fork arc"), tau.position(&TaggedArc::notched(a)).expect("fork arc"))
    });
    let mut i = 0;
    while i < raw.len() {
        let ev = &raw[i];
        let (arcs, step) = match ev.what {
            Raw::Arc(k) => (vec![k], 1),
            Raw::ForkNoose => {
                let (pl, no) = fork_pair.expect("fork");
                let run = i + 2 < raw.len() && raw[i + 1].what == Raw::ForkRay && raw[i + 2].what == Raw::ForkNoose;
                if run {
                    (vec![pl, no], 3)
                } else {
                    // a radial j crossing only the noose meets the fork arc of the other tag
                    let TaggedArc::Radial { tag, .. } = j else {
                        return Err(ArcRepError::Invariant(format!("{j} meets the noose alone")));
                    };
                    (vec![if tag == Tag::Plain { no } else { pl }], 1)
                }
            }
            Raw::ForkRay => return Err(ArcRepError::Invariant(format!("{j} meets the fork ray alone"))),
        };
        events.push(IntersectionEvent {
            tau_arcs: arcs,
            point_id: events.len(),
            lift_parameter: ev.at,
            shift: ev.shift,
            quotient: false,
        });
        i += step;
    }
    if quotient_last {
        if let Some(last) = events.last_mut() {
            last.quotient = true;
        }
    }
    if matches!(effective_curve, EffectiveCurve::Truncated | EffectiveCurve::Loop) {
        for (k, e) in events.iter_mut().enumerate() {
            e.lift_parameter = Ratio::from_integer(k as i64);
        }
    }

    // detour: a crossing of an interval between consecutive radial arcs,
    // then every radial arc, then the next translate of the same interval
    let mut detours = Vec::new();
    if fork.is_none() {
        let radial_idx: Vec<usize> = radial_bases.iter().map(|&(_, k)| k).collect();
        let m = radial_idx.len();
        for s in 0..events.len() {
            let e = &events[s];
            let end = s + m + 1;
            if end >= events.len() {
                continue;
            }
            let l = &events[end];
            let between_radial = events[s + 1..end].iter().all(|x| radial_idx.contains(&x.tau_arcs[0]));
            if l.tau_arcs == e.tau_arcs
                && l.shift == e.shift + 1
                && between_radial
                && !radial_idx.contains(&e.tau_arcs[0])
            {
                detours.push((end - 1, s));
            }
        }
    }
    Ok(ArcRepPlan { effective_curve, events, detours })
}

/// `M_j` over `ctx`, with dimension vector and relations checked.
pub fn arc_representation(
    ctx: &JacobianContext,
    j: &TaggedArc,
    field: &FieldConfig,
) -> Result<Representation, ArcRepError> {
    let plan = intersection_sequence(ctx, j)?;
    let rep = build_from_plan(ctx, &plan)?;
    let expected = ctx.tau.disk().crossing_vector(j, &ctx.tau)?;
    if rep.dims.iter().zip(&expected).any(|(&d, &e)| d as u32 != e) {
        return Err(ArcRepError::Invariant(format!(
            "dimension vector {:?} of {j} differs from crossing vector {:?}",
            rep.dims, expected
        )));
    }
    let rep = rep.embed(field)?;
    let report = check_relations(&ctx.quiver, &ctx.potential, &rep, field)?;
    if let Some(fail) = report.failures.first() {
        return Err(ArcRepError::Invariant(format!("{j} violates the relation at {}", fail.arrow)));
    }
    Ok(rep)
}

fn build_from_plan(ctx: &JacobianContext, plan: &ArcRepPlan) -> Result<Representation, ArcRepError> {
    let quiver = &ctx.quiver;
    let nv = ctx.tau.arcs().len();
    let mut dims = vec![0usize; nv];
    // basis index of (event, arc)
    let mut basis: Vec<Vec<(usize, usize)>> = Vec::with_capacity(plan.events.len());
    for e in &plan.events {
        let mut here = Vec::new();
        if !e.quotient {
            for &k in &e.tau_arcs {
                here.push((k, dims[k]));
                dims[k] += 1;
            }
        }
        basis.push(here);
    }
    let mut mats: Vec<Matrix> = (0..quiver.arrows().len())
        .map(|a| {
            let (s, t) = quiver.ends(a);
            Matrix::zeros(dims[t], dims[s])
        })
        .collect();
    let one = Scalar::one();
    let link = |u: (usize, usize), w: (usize, usize), mats: &mut Vec<Matrix>| {
        if let Some(a) = quiver.find_arrow(u.0 + 1, w.0 + 1) {
            mats[a].set(w.1, u.1, one.clone());
        } else if let Some(a) = quiver.find_arrow(w.0 + 1, u.0 + 1) {
            mats[a].set(u.1, w.1, one.clone());
        }
    };
    // An arc turning around the puncture meets the same side X of the fork
    // triangle before and after the pair. The two halves run parallel away
    // from X until they part; the half left with an incoming arrow there (or
    // else the one that just stops) is the target of maps from the other, so
    // its line in M_X is fixed by every automorphism. The notched arc must
    // avoid that line: its image when the fork arrows point into X, its
    // kernel when they point out of X.
    let events = &plan.events;
    let mut skip: Vec<(usize, usize)> = Vec::new();
    for g in 1..events.len().saturating_sub(1) {
        if events[g].tau_arcs.len() != 2 || events[g - 1].tau_arcs != events[g + 1].tau_arcs {
            continue;
        }
        let notched = events[g].tau_arcs[1];
        let x = events[g - 1].tau_arcs[0];
        let mut k = 1;
        while g >= k && g + k < events.len() && events[g - k].tau_arcs == events[g + k].tau_arcs {
            k += 1;
        }
        let tail = |w: Option<usize>, z: Option<usize>| match (w, z) {
            (Some(w), Some(z)) if quiver.find_arrow(w + 1, z + 1).is_some() => 0,
            (Some(w), Some(z)) if quiver.find_arrow(z + 1, w + 1).is_some() => 2,
            _ => 1,
        };
        let early = tail(Some(events[g + 1 - k].tau_arcs[0]), (g >= k).then(|| events[g - k].tau_arcs[0]));
        let late = tail(Some(events[g + k - 1].tau_arcs[0]), events.get(g + k).map(|e| e.tau_arcs[0]));
        let target_is_early = early >= late;
        let into_x = quiver.find_arrow(notched + 1, x + 1).is_some();
        // drop the link to the neighbour the notched arc must not see
        let drop_early = into_x == target_is_early;
        skip.push(if drop_early { (g - 1, g) } else { (g, g + 1) });
    }
    for s in 0..basis.len().saturating_sub(1) {
        for &u in &basis[s] {
            for &w in &basis[s + 1] {
                if skip.contains(&(s, s + 1)) && (ctx.tau.arcs()[u.0].is_notched() || ctx.tau.arcs()[w.0].is_notched())
                {
                    continue;
                }
                link(u, w, &mut mats);
            }
        }
    }
    for &(from, to) in &plan.detours {
        let (Some(&u), Some(&w)) = (basis[from].first(), basis[to].first()) else {
            return Err(ArcRepError::Invariant("detour touches a quotiented point".into()));
        };
        let a = quiver
            .find_arrow(u.0 + 1, w.0 + 1)
            .ok_or_else(|| ArcRepError::Invariant(format!("no arrow {} -> {} for the detour", u.0 + 1, w.0 + 1)))?;
        mats[a].set(w.1, u.1, one.clone());
    }
    Ok(Representation { dims, mats })
}

/// Direct sum of the arc representations of the members.
pub fn multicurve_representation(
    ctx: &JacobianContext,
    multicurve: &[TaggedArc],
    field: &FieldConfig,
) -> Result<Representation, ArcRepError> {
    let mut rep = Representation::zero(&ctx.quiver);
    for arc in multicurve {
        rep = rep.direct_sum(&arc_representation(ctx, arc, field)?);
    }
    Ok(rep)
}
