use loja::geometry::{
    directed_hausdorff, dist_point_set, hausdorff, hausdorff_ext, kuratowski_dist, stereo_lift,
    stereo_project, PointSet, SpherePointSet, SPHERE_DIAM,
};
use loja::Exec;
use proptest::prelude::*;

fn naive_hausdorff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let d = |p: &[f64], q: &[f64]| p.iter().zip(q).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
    let one_way = |a: &[Vec<f64>], b: &[Vec<f64>]| {
        let mut worst = 0.0f64;
        for p in a {
            let mut near = f64::INFINITY;
            for q in b {
                near = near.min(d(p, q));
            }
            worst = worst.max(near);
        }
        worst
    };
    one_way(a, b).max(one_way(b, a))
}

fn cloud(dim: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-10.0f64..10.0, dim), 1..12)
}

fn set(pts: Vec<Vec<f64>>) -> PointSet {
    let dim = pts[0].len();
    PointSet::new(dim, pts).unwrap()
}

proptest! {
    #[test]
    fn hausdorff_matches_brute_force(a in cloud(2), b in cloud(2)) {
        let got = hausdorff(&set(a.clone()), &set(b.clone())).unwrap();
        prop_assert!((got - naive_hausdorff(&a, &b)).abs() < 1e-12);
    }

    #[test]
    fn hausdorff_is_a_metric(a in cloud(2), b in cloud(2), c in cloud(2)) {
        let (a, b, c) = (set(a), set(b), set(c));
        let ab = hausdorff(&a, &b).unwrap();
        prop_assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);
        prop_assert_eq!(ab, hausdorff(&b, &a).unwrap());
        prop_assert!(ab <= hausdorff(&a, &c).unwrap() + hausdorff(&c, &b).unwrap() + 1e-9);
    }

    #[test]
    fn sequential_and_parallel_agree(a in cloud(3), b in cloud(3)) {
        let (a, b) = (set(a), set(b));
        prop_assert_eq!(
            directed_hausdorff(&a, &b, Exec::Sequential).to_bits(),
            directed_hausdorff(&a, &b, Exec::Parallel).to_bits()
        );
    }

    #[test]
    fn kuratowski_is_a_metric_bounded_by_the_sphere(a in cloud(2), b in cloud(2), c in cloud(2)) {
        let (a, b, c) = (set(a), set(b), set(c));
        let ab = kuratowski_dist(&a, &b).unwrap();
        prop_assert!(ab <= SPHERE_DIAM);
        prop_assert_eq!(kuratowski_dist(&a, &a).unwrap(), 0.0);
        prop_assert_eq!(ab, kuratowski_dist(&b, &a).unwrap());
        prop_assert!(ab <= kuratowski_dist(&a, &c).unwrap() + kuratowski_dist(&c, &b).unwrap() + 1e-9);
    }

    #[test]
    fn stereographic_round_trip(y in prop::collection::vec(-1e3f64..1e3, 1..4)) {
        let x = stereo_lift(&y);
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!((norm - 1.0).abs() < 1e-12);
        let back = stereo_project(&x).unwrap();
        for (u, v) in y.iter().zip(&back) {
            prop_assert!((u - v).abs() <= 1e-9 * (1.0 + u.abs()));
        }
    }

    #[test]
    fn sphere_round_trip(x in prop::collection::vec(-1.0f64..1.0, 3)) {
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assume!(n > 0.1);
        let x: Vec<f64> = x.iter().map(|v| v / n).collect();
        prop_assume!(x[2] < 0.99);
        let back = stereo_lift(&stereo_project(&x).unwrap());
        for (u, v) in x.iter().zip(&back) {
            prop_assert!((u - v).abs() < 1e-9);
        }
    }

    #[test]
    fn distance_to_a_member_is_zero(a in cloud(2), i in 0usize..12) {
        let s = set(a.clone());
        let p = &a[i % a.len()];
        prop_assert!(dist_point_set(p, &s).unwrap() < 1e-9);
    }
}

#[test]
fn empty_set_conventions() {
    let e = PointSet::empty(1);
    let s = PointSet::from_scalars(&[0.0, 3.0]);
    assert_eq!(hausdorff_ext(&e, &e, 5.0).unwrap(), 0.0);
    assert_eq!(hausdorff_ext(&e, &s, 5.0).unwrap(), 6.0);
    assert_eq!(hausdorff_ext(&s, &e, 5.0).unwrap(), 6.0);
    assert!(hausdorff(&e, &s).is_err());
    assert_eq!(kuratowski_dist(&e, &e).unwrap(), 0.0);
    assert_eq!(kuratowski_dist(&e, &s).unwrap(), SPHERE_DIAM + 1.0);
}

#[test]
fn south_pole_and_far_points() {
    assert_eq!(stereo_lift(&[0.0, 0.0]), vec![0.0, 0.0, -1.0]);
    assert!(stereo_project(&[0.0, 0.0, 1.0]).is_err());
    let far = stereo_lift(&[1e300, 0.0]);
    assert!(far.iter().all(|v| v.is_finite()));
    assert!((far[2] - 1.0).abs() < 1e-12);
}

#[test]
fn lifted_sets_carry_the_pole() {
    let k = PointSet::new(1, vec![vec![0.0], vec![2.0]]).unwrap();
    let lifted = SpherePointSet::lift_with_pole(&k);
    let pts = lifted.as_point_set().points();
    assert_eq!(pts.len(), 3);
    assert!(pts.contains(&vec![0.0, 1.0]));
    assert!(pts.contains(&vec![0.0, -1.0]));
    let (x, z) = (pts[1][0], pts[1][1]);
    assert!((x - 1.0).abs() < 1e-15 && z.abs() < 1e-15);
}

#[test]
fn far_apart_points_are_close_near_infinity() {
    let a = PointSet::from_scalars(&[1e6]);
    let b = PointSet::from_scalars(&[-1e6]);
    assert_eq!(hausdorff(&a, &b).unwrap(), 2e6);
    assert!(kuratowski_dist(&a, &b).unwrap() < 1e-5);
}
