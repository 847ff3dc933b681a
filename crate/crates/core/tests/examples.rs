mod common;

use pdisk_core::ext_analyzer::{candidate_module, AnalysisOptions, Side, Verdict};
use pdisk_core::io::{builtin_bundle, builtin_qp_documents, check_sequence, verify_qp, FixtureBundle};
use pdisk_core::qp_algebra::check_relations;
use pdisk_core::{analyze_extension, arc_representation, smooth_pair, FieldConfig, JacobianContext, Multicurve};

fn load(name: &str) -> (FixtureBundle, JacobianContext) {
    let b = builtin_bundle(name).unwrap();
    let ctx = JacobianContext::new(&b.triangulation).unwrap();
    (b, ctx)
}

#[test]
fn example_quivers_match_listed_arrows() {
    for name in ["example1", "example2"] {
        let (b, ctx) = load(name);
        assert_eq!(ctx.quiver().arrows().len(), b.expected.arrow_count, "{name}");
        b.labelled_quiver(ctx.quiver()).unwrap();
    }
}

#[test]
fn example_arc_dimensions() {
    for name in ["example1", "example2"] {
        let (b, ctx) = load(name);
        let disk = b.triangulation.disk();
        for (key, arc) in [("alpha", b.alpha), ("beta", b.beta)] {
            let want: Vec<u32> = b.expected.dims[key].iter().map(|&d| d as u32).collect();
            assert_eq!(disk.crossing_vector(&arc, &b.triangulation).unwrap(), want, "{name} {key}");
            let rep = arc_representation(&ctx, &arc, &FieldConfig::Rationals).unwrap();
            assert_eq!(rep.dims, b.expected.dims[key], "{name} {key}");
        }
        assert_eq!(disk.crossing_number(&b.alpha, &b.beta).unwrap(), b.expected.e);
        assert_eq!(disk.total_dimension(&[b.alpha, b.beta], &b.triangulation).unwrap(), b.expected.d_pair);
    }
}

#[test]
fn example_plus_smoothings() {
    for name in ["example1", "example2"] {
        let (b, _) = load(name);
        let s = smooth_pair(b.triangulation.disk(), &b.alpha, &b.beta).unwrap();
        let mut want: Vec<Multicurve> = b.expected.plus.iter().map(|m| Multicurve::new(m.clone())).collect();
        let mut got = s.plus.clone();
        want.sort();
        got.sort();
        assert_eq!(got, want, "{name}");
    }
}

#[test]
fn transcribed_modules_satisfy_relations_and_match_computed_ones() {
    let field = FieldConfig::Rationals;
    for name in ["example1", "example2"] {
        let (b, ctx) = load(name);
        let q = b.labelled_quiver(ctx.quiver()).unwrap();
        let plus = |k: usize| Multicurve::new(b.expected.plus[k].clone());
        for (key, doc) in &b.representations {
            let rep = doc.to_rep(&q, &field, key).unwrap();
            assert!(check_relations(&q, ctx.potential(), &rep, &field).unwrap().ok(), "{name} {key}");
            let computed = match key.as_str() {
                "alpha" => arc_representation(&ctx, &b.alpha, &field).unwrap(),
                "beta" => arc_representation(&ctx, &b.beta, &field).unwrap(),
                "a" => candidate_module(&ctx, &plus(0), &field).unwrap(),
                "c" => candidate_module(&ctx, &plus(2), &field).unwrap(),
                "d" => candidate_module(&ctx, &plus(3), &field).unwrap(),
                other => panic!("unexpected representation {other}"),
            };
            assert!(common::isomorphic(&q, &rep, &computed, &field), "{name} {key}");
        }
    }
}

#[test]
fn transcribed_sequences_are_exact_and_non_split() {
    let field = FieldConfig::Rationals;
    let (b, ctx) = load("example1");
    let q = b.labelled_quiver(ctx.quiver()).unwrap();
    let reps = b.representations.iter().map(|(k, d)| (k.clone(), d.to_rep(&q, &field, k).unwrap())).collect();
    assert_eq!(b.sequences.len(), 3);
    for seq in &b.sequences {
        let v = check_sequence(&q, &reps, seq, &field, &seq.name).unwrap();
        assert!(v.exact, "{}", seq.name);
        assert_eq!(v.split, Some(false), "{}", seq.name);
    }
}

#[test]
fn analysis_finds_a_sequence_for_every_plus_candidate() {
    for name in ["example1", "example2"] {
        let (b, ctx) = load(name);
        let r =
            analyze_extension(&ctx, &b.alpha, &b.beta, &FieldConfig::Rationals, AnalysisOptions::default()).unwrap();
        assert_eq!(r.e, b.expected.e);
        let ses: Vec<_> = r.candidates.iter().filter(|c| c.side == Side::Plus && c.verdict == Verdict::Ses).collect();
        assert_eq!(ses.len(), b.expected.ses_count, "{name}");
        for c in ses {
            assert_eq!(c.non_split, Some(true));
            assert!(c.sequence.is_some());
        }
    }
}

#[test]
fn example1_over_a_prime_field() {
    let field = FieldConfig::prime(101).unwrap();
    let (b, ctx) = load("example1");
    let r = analyze_extension(&ctx, &b.alpha, &b.beta, &field, AnalysisOptions::default()).unwrap();
    assert!(r.candidates.iter().filter(|c| c.side == Side::Plus).all(|c| c.non_split == Some(true)));
}

#[test]
fn qp_documents_verify() {
    let docs = builtin_qp_documents("example3").unwrap();
    for field in [FieldConfig::Rationals, FieldConfig::prime(7).unwrap()] {
        let report = verify_qp(&docs, &field).unwrap();
        assert_eq!(report.quiver.arrows().len(), 17);
        assert!(report.relations.iter().all(|(_, r)| r.ok()));
        assert_eq!(report.sequences.len(), 3);
        assert!(report.all_pass(), "{field:?}");
    }
}
