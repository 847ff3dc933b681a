use pdisk_core::arc_rep::intersection_sequence;
use pdisk_core::disk_model::enumerate_triangulations;
use pdisk_core::qp_algebra::{check_relations, hom_space};
use pdisk_core::{
    arc_representation, ArcRepError, FieldConfig, JacobianContext, PuncturedDisk, TaggedArc, Triangulation,
};

fn names(tau: &Triangulation) -> Vec<String> {
    tau.arcs().iter().map(|a| a.to_string()).collect()
}

#[test]
fn relations_hold_for_every_arc_of_every_small_triangulation() {
    let field = FieldConfig::Rationals;
    for n in 4..=6 {
        let disk = PuncturedDisk::new(n).unwrap();
        for tau in enumerate_triangulations(&disk) {
            let ctx = JacobianContext::new(&tau).unwrap();
            for j in disk.enumerate_tagged_arcs() {
                if tau.contains(&j) {
                    continue;
                }
                let rep = arc_representation(&ctx, &j, &field).unwrap_or_else(|e| panic!("{:?} {j}: {e}", names(&tau)));
                assert!(check_relations(ctx.quiver(), ctx.potential(), &rep, &field).unwrap().ok());
            }
        }
    }
}

#[test]
fn arc_representations_are_bricks() {
    let field = FieldConfig::Rationals;
    for n in 4..=5 {
        let disk = PuncturedDisk::new(n).unwrap();
        for tau in enumerate_triangulations(&disk) {
            let ctx = JacobianContext::new(&tau).unwrap();
            for j in disk.enumerate_tagged_arcs() {
                if tau.contains(&j) {
                    continue;
                }
                let m = arc_representation(&ctx, &j, &field).unwrap();
                let end = hom_space(ctx.quiver(), &m, &m, &field).unwrap().len();
                assert_eq!(end, 1, "{:?} {j}", names(&tau));
            }
        }
    }
}

#[test]
fn arc_around_a_fork_is_indecomposable() {
    let disk = PuncturedDisk::new(5).unwrap();
    let field = FieldConfig::prime(2).unwrap();
    for fan in [["P(0,2)", "P(0,3)", "P(0,4)", "R(0,p)", "R(0,n)"], ["P(0,2)", "P(0,3)", "P(0,4)", "R(4,p)", "R(4,n)"]]
    {
        let tau = Triangulation::new(disk, fan.iter().map(|s| s.parse().unwrap()).collect()).unwrap();
        let ctx = JacobianContext::new(&tau).unwrap();
        let j: TaggedArc = "P(2,1)".parse().unwrap();
        let m = arc_representation(&ctx, &j, &field).unwrap();
        assert_eq!(m.dims, vec![1, 2, 2, 1, 1]);
        assert_eq!(hom_space(ctx.quiver(), &m, &m, &field).unwrap().len(), 1);
    }
}

#[test]
fn members_of_the_triangulation_have_no_arc_representation() {
    let tau = pdisk_core::io::builtin_bundle("example1").unwrap().triangulation;
    let ctx = JacobianContext::new(&tau).unwrap();
    let j = tau.arcs()[0];
    assert!(matches!(arc_representation(&ctx, &j, &FieldConfig::Rationals), Err(ArcRepError::InTriangulation(_))));
}

#[test]
fn events_match_crossing_counts() {
    let disk = PuncturedDisk::new(6).unwrap();
    for tau in enumerate_triangulations(&disk).iter().step_by(7) {
        let ctx = JacobianContext::new(tau).unwrap();
        for j in disk.enumerate_tagged_arcs() {
            if tau.contains(&j) {
                continue;
            }
            let plan = intersection_sequence(&ctx, &j).unwrap();
            let counted: usize = plan.events.iter().filter(|e| !e.quotient).map(|e| e.tau_arcs.len()).sum();
            let total = disk.total_dimension(&[j], tau).unwrap() as usize;
            assert_eq!(counted, total, "{:?} {j}", names(tau));
        }
    }
}
