use weylcover::checker::{fiber, run_conditions, ConditionOptions};
use weylcover::numeric::{DenseMatrix, RngStream};
use weylcover::registry::instance_lookup;
use weylcover::{Error, Tolerances};

#[test]
fn orthogonal_three_passes_with_six_sheets() {
    let inst = instance_lookup("lin-sym-O(3)").unwrap();
    let r = run_conditions(&inst, 100, 42, &ConditionOptions::default(), &Tolerances::default());
    assert!(r.pass, "{:?}", r.verdicts);
    assert_eq!(r.fiber.counts.get(&6), Some(&100));
    assert_eq!(r.fiber.counts.len(), 1);
}

#[test]
fn noncompact_instance_skips_invariance_by_policy() {
    let inst = instance_lookup("grp-SL2C").unwrap();
    let r = run_conditions(&inst, 100, 42, &ConditionOptions::default(), &Tolerances::default());
    assert!(r.pass, "{:?}", r.verdicts);
    assert!(r.invariance.is_none());
    assert!(r.invariance_note.starts_with("skipped by policy"));
}

#[test]
fn pseudo_branches_report_exhaustiveness() {
    let inst = instance_lookup("palg-gl2R-split").unwrap();
    let r = run_conditions(&inst, 20, 1, &ConditionOptions::default(), &Tolerances::default());
    let b = r.branch_exhaustiveness.expect("branch record");
    assert!(b.pass && b.claimed_once == b.regular);
}

#[test]
fn wrong_degree_is_a_fiber_defect() {
    let tol = Tolerances::default();
    let bad = instance_lookup("lin-sym-O(2)").unwrap().with_expected_degree("corrupt-lin-sym-O(2)", 3);
    let r = run_conditions(&bad, 10, 42, &ConditionOptions::default(), &tol);
    assert!(!r.pass);
    assert_eq!(r.fiber.defects, 10);
    let y = bad.sample_regular_slice(&mut RngStream::new(0, 0), &tol).unwrap();
    assert!(matches!(fiber(&bad, &bad.embed(&y), &tol), Err(Error::FiberDefect(_))));
}

#[test]
fn sphere_equator_fiber_has_two_entries() {
    let inst = instance_lookup("cpt-sphere").unwrap();
    let x = DenseMatrix::column_vector(&[0.0, 1.0, 0.0]);
    let r = fiber(&inst, &x, &Tolerances::default()).unwrap();
    assert_eq!(r.count, 2);
    assert!(r.max_residual < 1e-12);
}

#[test]
fn reports_do_not_depend_on_worker_count() {
    let inst = instance_lookup("grp-U(2)").unwrap();
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let r = run_conditions(&inst, 24, 5, &ConditionOptions::default(), &Tolerances::default());
            serde_json::to_string(&r).unwrap()
        })
    };
    assert_eq!(run(1), run(4));
}
