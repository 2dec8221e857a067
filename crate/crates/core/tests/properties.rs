use proptest::prelude::*;

use weylcover::checker::{check_phi_regular, fiber};
use weylcover::harness::radial_jacobian;
use weylcover::numeric::{DenseMatrix, RngStream};
use weylcover::registry::{Catalog, EnsembleInstance, PointRef};
use weylcover::weyl::{coset_reps, weyl_act, weyl_orbit};
use weylcover::Tolerances;

fn instance(k: usize) -> &'static EnsembleInstance {
    let all: Vec<&EnsembleInstance> = Catalog::shared().iter().collect();
    all[k % all.len()]
}

fn regular_point(inst: &EnsembleInstance, rng: &mut RngStream, tol: &Tolerances) -> (Vec<f64>, DenseMatrix) {
    let y = inst.sample_regular_slice(rng, tol).unwrap();
    let g = inst.group().random_element(rng);
    let x = inst.act(&g, &inst.embed(&y), tol).unwrap();
    (y, x)
}

fn scale(x: &DenseMatrix) -> f64 {
    x.frobenius().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_composes(k in 0usize..16, seed in any::<u64>()) {
        let tol = Tolerances::default();
        let inst = instance(k);
        let mut rng = RngStream::new(seed, 0);
        let (_, x) = regular_point(inst, &mut rng, &tol);
        let group = inst.group();
        let g = group.random_element(&mut rng);
        let h = group.random_element(&mut rng);
        let lhs = inst.act(&g, &inst.act(&h, &x, &tol).unwrap(), &tol).unwrap();
        let rhs = inst.act(&g.matmul(&h), &x, &tol).unwrap();
        let size = scale(&x) * scale(&g).powi(2) * scale(&h).powi(2);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10 * size, "{}", inst.id);
        let back = inst.act(&group.inverse(&g), &inst.act(&g, &x, &tol).unwrap(), &tol).unwrap();
        prop_assert!(back.max_abs_diff(&x) < 1e-9 * size, "{}", inst.id);
    }

    #[test]
    fn density_is_invariant(k in 0usize..16, seed in any::<u64>()) {
        let tol = Tolerances::default();
        let inst = instance(k);
        let mut rng = RngStream::new(seed, 1);
        let (_, x) = regular_point(inst, &mut rng, &tol);
        let g = inst.group().random_element(&mut rng);
        let p = inst.density_at(&x, &tol);
        let q = inst.density_at(&inst.act(&g, &x, &tol).unwrap(), &tol);
        prop_assert!((p - q).abs() <= 1e-7 * p.max(1e-300) + 1e-300, "{}: {p} vs {q}", inst.id);
    }

    #[test]
    fn canonical_slice_point_is_invariant(k in 0usize..16, seed in any::<u64>()) {
        let tol = Tolerances::default();
        let inst = instance(k);
        let mut rng = RngStream::new(seed, 2);
        let (y, x) = regular_point(inst, &mut rng, &tol);
        let g = inst.group().random_element(&mut rng);
        let (_, a) = inst.decompose(&x, &tol).unwrap();
        let (_, b) = inst.decompose(&inst.act(&g, &x, &tol).unwrap(), &tol).unwrap();
        prop_assert!(a.canonical && b.canonical);
        let spread = y.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        prop_assert!(inst.coord_distance(&a.coords, &b.coords) < 1e-7 * spread, "{}: {:?} vs {:?}", inst.id, a.coords, b.coords);
    }

    #[test]
    fn weyl_images_are_closed(k in 0usize..16, seed in any::<u64>()) {
        let tol = Tolerances::default();
        let inst = instance(k);
        let mut rng = RngStream::new(seed, 3);
        let y = inst.sample_regular_slice(&mut rng, &tol).unwrap();
        let weyl = coset_reps(inst, &tol).unwrap();
        let orbit = weyl_orbit(inst, &weyl, &y, &tol).unwrap();
        prop_assert_eq!(orbit.len(), inst.expected_degree);
        // Exactly one image is canonical.
        prop_assert_eq!(orbit.iter().filter(|z| inst.is_canonical(z)).count(), 1);
        for z in &orbit {
            for rep in &weyl.reps {
                let w = weyl_act(inst, rep, z);
                prop_assert!(orbit.iter().any(|o| inst.coord_distance(o, &w) < 1e-8), "{}", inst.id);
            }
        }
    }

    #[test]
    fn weighted_slice_density_is_weyl_invariant(k in 0usize..16, seed in any::<u64>()) {
        let tol = Tolerances::default();
        let inst = instance(k);
        let mut rng = RngStream::new(seed, 4);
        let y = inst.sample_regular_slice(&mut rng, &tol).unwrap();
        let weight = |z: &[f64]| radial_jacobian(inst, z, &tol).unwrap() * inst.density_at(&inst.embed(z), &tol);
        let base = weight(&y);
        for rep in &coset_reps(inst, &tol).unwrap().reps {
            let w = weight(&weyl_act(inst, rep, &y));
            prop_assert!((w - base).abs() <= 1e-7 * base.max(1e-300), "{}: {w} vs {base}", inst.id);
        }
    }

    #[test]
    fn fibers_are_equivariant(k in 0usize..16, seed in any::<u64>()) {
        let tol = Tolerances::default();
        let inst = instance(k);
        let mut rng = RngStream::new(seed, 5);
        let (_, x) = regular_point(inst, &mut rng, &tol);
        let g = inst.group().random_element(&mut rng);
        let here = fiber(inst, &x, &tol).unwrap();
        let there = fiber(inst, &inst.act(&g, &x, &tol).unwrap(), &tol).unwrap();
        prop_assert_eq!(here.count, inst.expected_degree);
        prop_assert_eq!(there.count, inst.expected_degree);
        // Left multiplication by g carries each entry of one fiber onto exactly one of the other.
        for e in &here.entries {
            let moved = g.matmul(&e.group_element);
            let matches = there
                .entries
                .iter()
                .filter(|f| {
                    inst.coset_distance(&moved, &f.group_element, &tol).unwrap() < 1e-6
                        && inst.coord_distance(&e.slice_point.coords, &f.slice_point.coords) < 1e-6 * scale(&x)
                })
                .count();
            prop_assert_eq!(matches, 1, "{}", inst.id);
        }
    }

    #[test]
    fn jacobian_kernels_agree(k in 0usize..16, seed in any::<u64>()) {
        let tol = Tolerances::default();
        let inst = instance(k);
        let y = inst.sample_regular_slice(&mut RngStream::new(seed, 6), &tol).unwrap();
        let a = check_phi_regular(inst, &y, &tol).unwrap();
        let b = radial_jacobian(inst, &y, &tol).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a);
    }
}

type Path = (&'static str, fn(f64) -> Vec<f64>);

#[test]
fn determinant_degenerates_with_the_gap() {
    let tol = Tolerances::default();
    let paths: [Path; 4] = [
        ("lin-sym-O(2)", |t| vec![1.0 + t, 1.0]),
        ("alg-u(3)", |t| vec![2.0, t, 0.0]),
        ("cpt-sphere", |t| vec![t]),
        ("grp-U(2)", |t| vec![t, 0.0]),
    ];
    for (id, path) in paths {
        let inst = Catalog::shared().lookup(id).unwrap();
        let dets: Vec<f64> = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&t| {
                let y = path(t);
                assert!(inst.regularity_gap(PointRef::Slice(&y), &tol) > 0.0);
                check_phi_regular(inst, &y, &tol).unwrap()
            })
            .collect();
        assert!(dets.windows(2).all(|w| w[1] < w[0]), "{id}: {dets:?}");
        assert!(dets[4] < 2e-4 * dets[0], "{id}: {dets:?}");
    }
}
