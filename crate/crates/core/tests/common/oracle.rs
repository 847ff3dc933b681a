//! Crossing numbers from drawn curves.
//!
//! Marked point k sits at angle θk = π/2 - 2πk/n on the unit circle, the
//! puncture at the origin. Each curve is drawn as a polyline, transversal
//! intersections are counted, then bigons and half-bigons at shared
//! endpoints are removed while one exists. A loop bounds a disk avoiding the
//! puncture iff its winding number around the origin is 0.

use std::f64::consts::PI;

use pdisk_core::{Tag, TaggedArc};

type Pt = (f64, f64);

#[derive(Debug, Clone, Copy)]
enum Drawn {
    Arc(TaggedArc),
    Noose(usize),
}

fn theta(n: usize, k: f64) -> f64 {
    PI / 2.0 - 2.0 * PI * k / n as f64
}

fn polar(r: f64, t: f64) -> Pt {
    (r * t.cos(), r * t.sin())
}

/// Polyline for `c` drawn at depth `r`. `slant` separates spokes of
/// different curves leaving the same marked point.
fn draw(n: usize, c: Drawn, r: f64, slant: f64) -> Vec<Pt> {
    let step = 2.0 * PI / n as f64;
    let sweep = |a: usize, d: f64| -> Vec<Pt> {
        let start = theta(n, a as f64) - slant * step;
        let end = theta(n, a as f64) - d * step + slant * step;
        let samples = 2 * (d * 8.0) as usize + 3;
        let mut pts = vec![polar(1.0, theta(n, a as f64))];
        for s in 0..=samples {
            let t = start + (end - start) * s as f64 / samples as f64;
            pts.push(polar(r, t));
        }
        pts
    };
    match c {
        Drawn::Arc(TaggedArc::Peripheral { from, to }) => {
            let d = ((to + n - from) % n) as f64;
            let mut pts = sweep(from, d);
            pts.push(polar(1.0, theta(n, to as f64)));
            pts
        }
        Drawn::Arc(TaggedArc::Radial { at, .. }) => vec![polar(1.0, theta(n, at as f64)), (0.0, 0.0)],
        Drawn::Noose(a) => {
            let mut pts = sweep(a, n as f64);
            pts.push(polar(1.0, theta(n, a as f64)));
            pts
        }
    }
}

fn det(a: Pt, b: Pt) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

/// Parameters `(s, t)` in the open unit square where the segments meet.
fn seg_hit(p: Pt, q: Pt, u: Pt, v: Pt) -> Option<(f64, f64)> {
    let r = (q.0 - p.0, q.1 - p.1);
    let w = (v.0 - u.0, v.1 - u.1);
    let d = det(r, w);
    if d.abs() < 1e-12 {
        return None;
    }
    let up = (u.0 - p.0, u.1 - p.1);
    let s = det(up, w) / d;
    let t = det(up, r) / d;
    let eps = 1e-9;
    if s > eps && s < 1.0 - eps && t > eps && t < 1.0 - eps {
        Some((s, t))
    } else {
        None
    }
}

fn point_at(c: &[Pt], s: f64) -> Pt {
    let i = (s.floor() as usize).min(c.len() - 2);
    let f = s - i as f64;
    (c[i].0 + f * (c[i + 1].0 - c[i].0), c[i].1 + f * (c[i + 1].1 - c[i].1))
}

/// Points of `c` from parameter `s` to `t`, in that order.
fn sub(c: &[Pt], s: f64, t: f64) -> Vec<Pt> {
    let mut out = vec![point_at(c, s)];
    if s <= t {
        for (i, p) in c.iter().enumerate() {
            if (i as f64) > s && (i as f64) < t {
                out.push(*p);
            }
        }
    } else {
        for (i, p) in c.iter().enumerate().rev() {
            if (i as f64) < s && (i as f64) > t {
                out.push(*p);
            }
        }
    }
    out.push(point_at(c, t));
    out
}

fn winding(loop_pts: &[Pt]) -> i64 {
    let mut total = 0.0;
    for i in 0..loop_pts.len() {
        let a = loop_pts[i];
        let b = loop_pts[(i + 1) % loop_pts.len()];
        let mut d = b.1.atan2(b.0) - a.1.atan2(a.0);
        while d > PI {
            d -= 2.0 * PI;
        }
        while d < -PI {
            d += 2.0 * PI;
        }
        total += d;
    }
    (total / (2.0 * PI)).round() as i64
}

fn close(a: Pt, b: Pt) -> bool {
    (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9
}

/// Geometric intersection number of two drawn curves.
fn minimal_intersections(c1: &[Pt], c2: &[Pt]) -> u32 {
    let mut hits: Vec<(f64, f64)> = Vec::new();
    for i in 0..c1.len() - 1 {
        for j in 0..c2.len() - 1 {
            if let Some((s, t)) = seg_hit(c1[i], c1[i + 1], c2[j], c2[j + 1]) {
                hits.push((i as f64 + s, j as f64 + t));
            }
        }
    }
    let end1 = (c1.len() - 1) as f64;
    let end2 = (c2.len() - 1) as f64;
    // shared boundary endpoints, as (parameter on c1, parameter on c2)
    let mut shared = Vec::new();
    for s in [0.0, end1] {
        for t in [0.0, end2] {
            let p = point_at(c1, s);
            if close(p, point_at(c2, t)) && !close(p, (0.0, 0.0)) {
                shared.push((s, t));
            }
        }
    }
    let between = |x: f64, a: f64, b: f64| (a.min(b) < x) && (x < a.max(b));
    loop {
        let mut removed = false;
        'bigons: for i in 0..hits.len() {
            for j in 0..hits.len() {
                if i == j {
                    continue;
                }
                let (p, q) = (hits[i], hits[j]);
                if p.0 >= q.0 {
                    continue;
                }
                let clear = hits.iter().all(|h| !between(h.0, p.0, q.0) && !between(h.1, p.1, q.1));
                if !clear {
                    continue;
                }
                let mut lp = sub(c1, p.0, q.0);
                lp.extend(sub(c2, q.1, p.1));
                if winding(&lp) == 0 {
                    hits.remove(j.max(i));
                    hits.remove(j.min(i));
                    removed = true;
                    break 'bigons;
                }
            }
        }
        if !removed {
            'halves: for &(s, t) in &shared {
                for k in 0..hits.len() {
                    let h = hits[k];
                    let clear = hits.iter().all(|o| !between(o.0, s, h.0) && !between(o.1, t, h.1));
                    if !clear {
                        continue;
                    }
                    let mut lp = sub(c1, s, h.0);
                    lp.extend(sub(c2, h.1, t));
                    if winding(&lp) == 0 {
                        hits.remove(k);
                        removed = true;
                        break 'halves;
                    }
                }
            }
        }
        if !removed {
            return hits.len() as u32;
        }
    }
}

/// Crossing number of two tagged arcs on the disk with `n` marked points.
pub fn crossing_number(n: usize, a: &TaggedArc, b: &TaggedArc) -> u32 {
    let (ca, cb) = match (*a, *b) {
        (TaggedArc::Radial { at: x, tag: s }, TaggedArc::Radial { at: y, tag: t }) => {
            if s == t || x == y {
                return 0;
            }
            if s == Tag::Notched {
                (Drawn::Noose(x), Drawn::Arc(*b))
            } else {
                (Drawn::Arc(*a), Drawn::Noose(y))
            }
        }
        _ => (Drawn::Arc(*a), Drawn::Arc(*b)),
    };
    let p1 = draw(n, ca, 0.613, 0.071);
    let p2 = draw(n, cb, 0.781, 0.137);
    minimal_intersections(&p1, &p2)
}
