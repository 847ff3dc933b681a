mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;

use pdisk_core::disk_model::enumerate_triangulations;
use pdisk_core::io::RepDoc;
use pdisk_core::qp_algebra::{cyclic_derivative, hom_space, quiver_from_triangulation};
use pdisk_core::skein_engine::{smooth_self, SelfCrossing};
use pdisk_core::{
    arc_representation, smooth_pair, FieldConfig, FormalSum, JacobianContext, Multicurve, Potential, PuncturedDisk,
    TaggedArc, Triangulation,
};

fn arc_pair() -> impl Strategy<Value = (PuncturedDisk, TaggedArc, TaggedArc)> {
    (4usize..=9).prop_flat_map(|n| {
        let disk = PuncturedDisk::new(n).unwrap();
        let arcs = disk.enumerate_tagged_arcs();
        let m = arcs.len();
        (0..m, 0..m).prop_map(move |(i, j)| (disk, arcs[i], arcs[j]))
    })
}

fn triangulation() -> impl Strategy<Value = Triangulation> {
    (4usize..=6).prop_flat_map(|n| {
        let all = enumerate_triangulations(&PuncturedDisk::new(n).unwrap());
        (0..all.len()).prop_map(move |k| all[k].clone())
    })
}

fn reflect(disk: &PuncturedDisk, arc: &TaggedArc) -> TaggedArc {
    let n = disk.n();
    let r = |k: usize| (n - k) % n;
    match *arc {
        TaggedArc::Peripheral { from, to } => TaggedArc::peripheral(r(to), r(from)),
        TaggedArc::Radial { at, tag } => TaggedArc::radial(r(at), tag),
    }
}

fn reflect_sum(disk: &PuncturedDisk, s: &FormalSum) -> FormalSum {
    FormalSum::from_terms(
        s.terms.iter().map(|t| (t.coeff, Multicurve::new(t.arcs.arcs().iter().map(|a| reflect(disk, a)).collect()))),
    )
}

fn sorted(mut v: Vec<Multicurve>) -> Vec<Multicurve> {
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn crossing_is_symmetric_and_bounded((disk, a, b) in arc_pair()) {
        let e = disk.crossing_number(&a, &b).unwrap();
        prop_assert_eq!(e, disk.crossing_number(&b, &a).unwrap());
        prop_assert!(e <= 2);
        prop_assert_eq!(disk.crossing_number(&a, &a).unwrap(), 0);
    }

    #[test]
    fn rotation_preserves_crossings((disk, a, b) in arc_pair()) {
        let e = disk.crossing_number(&a, &b).unwrap();
        prop_assert_eq!(disk.crossing_number(&disk.tau_rotate(&a), &disk.tau_rotate(&b)).unwrap(), e);
        prop_assert_eq!(disk.crossing_number(&reflect(&disk, &a), &reflect(&disk, &b)).unwrap(), e);
    }

    #[test]
    fn smoothing_sides_are_dual((disk, a, b) in arc_pair()) {
        let e = disk.crossing_number(&a, &b).unwrap();
        prop_assume!(e > 0);
        let ab = smooth_pair(&disk, &a, &b).unwrap();
        let ba = smooth_pair(&disk, &b, &a).unwrap();
        let want = if e == 1 { 1 } else { 4 };
        prop_assert_eq!(ab.plus.len(), want);
        prop_assert_eq!(ab.minus.len(), want);
        prop_assert_eq!(sorted(ab.minus.clone()), sorted(ba.plus.clone()));
        prop_assert_eq!(sorted(ab.plus), sorted(ba.minus));
    }

    #[test]
    fn smoothing_commutes_with_rotation((disk, a, b) in arc_pair()) {
        prop_assume!(disk.crossing_number(&a, &b).unwrap() > 0);
        let rot = |m: &Multicurve| Multicurve::new(m.arcs().iter().map(|x| disk.tau_rotate(x)).collect());
        let s = smooth_pair(&disk, &a, &b).unwrap();
        let t = smooth_pair(&disk, &disk.tau_rotate(&a), &disk.tau_rotate(&b)).unwrap();
        prop_assert_eq!(sorted(s.plus.iter().map(rot).collect()), sorted(t.plus));
    }

    #[test]
    fn self_smoothing_is_reflection_equivariant(n in 3usize..=9, lo in -9i64..9, extra in 1i64..9) {
        let disk = PuncturedDisk::new(n).unwrap();
        let n = n as i64;
        prop_assume!(extra < n);
        let delta = SelfCrossing { lo, hi: lo + n + extra };
        let mirrored = SelfCrossing { lo: -delta.hi, hi: -delta.lo };
        let s = smooth_self(&disk, delta).unwrap();
        prop_assert_eq!(reflect_sum(&disk, &s), smooth_self(&disk, mirrored).unwrap());
        prop_assert_eq!(s.terms.iter().map(|t| t.coeff).sum::<i64>(), 3);
    }

    #[test]
    fn cyclic_derivatives_ignore_rotation(tau in triangulation(), shift in 0usize..4) {
        let (q, p) = quiver_from_triangulation(&tau).unwrap();
        let rotated = Potential::new(
            &q,
            p.terms.iter().map(|(c, cyc)| {
                let s = shift % cyc.len();
                (c.clone(), cyc[s..].iter().chain(&cyc[..s]).copied().collect())
            }).collect(),
        ).unwrap();
        for a in 0..q.arrows().len() {
            prop_assert_eq!(cyclic_derivative(&p, a), cyclic_derivative(&rotated, a));
        }
    }

    #[test]
    fn hom_dimension_survives_base_change(tau in triangulation(), i in 0usize..64, j in 0usize..64) {
        let ctx = JacobianContext::new(&tau).unwrap();
        let outside: Vec<TaggedArc> =
            tau.disk().enumerate_tagged_arcs().into_iter().filter(|a| !tau.contains(a)).collect();
        let (a, b) = (outside[i % outside.len()], outside[j % outside.len()]);
        let fp = FieldConfig::prime(10007).unwrap();
        let dim = |f: &FieldConfig| {
            let ma = arc_representation(&ctx, &a, f).unwrap();
            let mb = arc_representation(&ctx, &b, f).unwrap();
            hom_space(ctx.quiver(), &ma, &mb, f).unwrap().len()
        };
        prop_assert_eq!(dim(&FieldConfig::Rationals), dim(&fp));
    }

    #[test]
    fn documents_round_trip(tau in triangulation(), i in 0usize..64) {
        let text = serde_json::to_string(&tau).unwrap();
        prop_assert_eq!(&serde_json::from_str::<Triangulation>(&text).unwrap(), &tau);
        let arcs = tau.disk().enumerate_tagged_arcs();
        let a = arcs[i % arcs.len()];
        prop_assert_eq!(serde_json::from_str::<TaggedArc>(&serde_json::to_string(&a).unwrap()).unwrap(), a);
        prop_assert_eq!(a.to_string().parse::<TaggedArc>().unwrap(), a);
        prop_assume!(!tau.contains(&a));
        let ctx = JacobianContext::new(&tau).unwrap();
        let field = FieldConfig::Rationals;
        let rep = arc_representation(&ctx, &a, &field).unwrap();
        let doc = RepDoc::from_rep(ctx.quiver(), &rep);
        let back: RepDoc = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        prop_assert_eq!(back.to_rep(ctx.quiver(), &field, "rep").unwrap(), rep);
    }
}

fn cluster_count(n: u64) -> u64 {
    // (3n - 2)/n * C(2n - 2, n - 1)
    let mut c = 1u64;
    for k in 0..n - 1 {
        c = c * (2 * n - 2 - k) / (k + 1);
    }
    (3 * n - 2) * c / n
}

#[test]
fn triangulation_counts() {
    for n in 2..=7usize {
        let disk = PuncturedDisk::new(n).unwrap();
        let all = enumerate_triangulations(&disk);
        assert_eq!(all.len() as u64, cluster_count(n as u64), "n={n}");
        for t in &all {
            assert_eq!(t.arcs().len(), n);
        }
    }
}

#[test]
fn two_marked_points() {
    use std::collections::BTreeSet;
    let disk = PuncturedDisk::new(2).unwrap();
    assert_eq!(disk.enumerate_tagged_arcs().len(), 4);
    let got: BTreeSet<BTreeSet<TaggedArc>> =
        enumerate_triangulations(&disk).iter().map(|t| t.arcs().iter().copied().collect()).collect();
    let want: BTreeSet<BTreeSet<TaggedArc>> =
        [["R(0,p)", "R(0,n)"], ["R(0,p)", "R(1,p)"], ["R(0,n)", "R(1,n)"], ["R(1,p)", "R(1,n)"]]
            .iter()
            .map(|pair| pair.iter().map(|a| a.parse().unwrap()).collect())
            .collect();
    assert_eq!(got, want);
}

#[test]
fn arc_counts_and_rotation_order() {
    for n in 2..=9 {
        let disk = PuncturedDisk::new(n).unwrap();
        let arcs = disk.enumerate_tagged_arcs();
        assert_eq!(arcs.len(), n * n);
        let distinct: BTreeMap<TaggedArc, ()> = arcs.iter().map(|a| (*a, ())).collect();
        assert_eq!(distinct.len(), n * n);
        for a in &arcs {
            let mut b = *a;
            for _ in 0..2 * n {
                b = disk.tau_rotate(&b);
            }
            assert_eq!(b, *a);
            assert_eq!(disk.shift(a), disk.tau_rotate(a));
        }
    }
}
