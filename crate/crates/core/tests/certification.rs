use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use typreal::certify::{
    boundary_univalence_certify, boundary_univalence_certify_with, collision_search, direction_convexity_check,
    image_polyline, local_univalence_scan, shear_equivalence, starlike_boundary_check, CertifyOptions, Direction,
    Outcome, DELTA_Z,
};
use typreal::kernels::ft_eval;
use typreal::maps::AnalyticMap;
use typreal::measures::{sample_indexed, SegmentMeasure};
use typreal::region::Region;
use typreal::search::radius::sqrt6_minus_sqrt5;
use typreal::search::theorem5::report_pair;
use typreal::search::{theorem5_collision, theorem5_map};
use typreal::series::DEFAULT_ORDER;
use typreal::shear::shear;
use typreal::{MapRegistry, PlaneMap};

#[test]
fn shear_equivalence_on_disk_and_sublevel() {
    let regions = [
        Region::centered_disk(sqrt6_minus_sqrt5()).unwrap(),
        Region::psi_sublevel(0.999 * (SQRT_2 - 1.0)).unwrap(),
    ];
    for i in 0..12 {
        let (nu, mu) = sample_indexed(99, i, 8);
        let map = shear(&mu, &nu, DEFAULT_ORDER).unwrap();
        for region in &regions {
            let eq = shear_equivalence(&map, region, 1024).unwrap();
            assert!(eq.consistent(), "sample {i} on {region}: {eq:?}");
        }
    }
}

#[test]
fn koebe_is_horizontally_convex_on_the_small_disk() {
    let koebe = MapRegistry::default().build("koebe").unwrap();
    let region = Region::centered_disk(sqrt6_minus_sqrt5()).unwrap();
    let image = image_polyline(&*koebe, &region, 2048).unwrap();
    assert!(direction_convexity_check(&image, Direction::Horizontal).unwrap().passed);
}

#[test]
fn slit_representation_is_convex_below_the_lens_height() {
    let region = Region::centered_disk(SQRT_2 - 1.0).unwrap();
    for i in 0..8 {
        let (nu, _) = sample_indexed(5, i, 8);
        let f = AnalyticMap::slit_rep(nu);
        let image = image_polyline(&f, &region, 2048).unwrap();
        for dir in [Direction::Vertical, Direction::Horizontal] {
            let check = direction_convexity_check(&image, dir).unwrap();
            assert!(check.passed, "sample {i} {dir:?}: {check:?}");
        }
    }
}

#[test]
fn analytic_members_certify_on_the_lens() {
    for i in 0..10 {
        let (nu, _) = sample_indexed(17, i, 8);
        let v = boundary_univalence_certify(&AnalyticMap::robertson(nu), &Region::lens(), 4096).unwrap();
        assert_eq!(v.outcome, Outcome::CertifiedAtResolution, "sample {i}: {:?}", v.diagnostics.note);
    }
}

#[test]
fn theorem5_collision_persists_under_refinement() {
    let (map, _) = theorem5_map().unwrap();
    let lens = Region::lens();
    let first = boundary_univalence_certify(&map, &lens, 1024).unwrap();
    assert_eq!(first.outcome, Outcome::Collision);
    let w = first.witness.unwrap();
    assert!((w.z1 - w.z2).norm() > DELTA_Z);
    let opts = CertifyOptions { seeds: vec![(w.z1, w.z2)] };
    for n in [2048, 4096] {
        let v = boundary_univalence_certify_with(&map, &lens, n, &opts).unwrap();
        assert!(matches!(v.outcome, Outcome::Collision | Outcome::Inconclusive), "{n}: {:?}", v.outcome);
    }
}

#[test]
fn theorem5_seeded_collision_search() {
    let (map, _) = theorem5_map().unwrap();
    for alpha in [PI / 8.0, PI / 6.0] {
        let (z1, z2) = report_pair(&theorem5_collision(alpha).unwrap()).unwrap();
        let w = collision_search(&map, &Region::lens(), &[(z1, z2)]).expect("seeded witness");
        assert!((map.eval(w.z1).unwrap() - map.eval(w.z2).unwrap()).norm() < 1e-8);
        assert!((w.z1 - w.z2).norm() > DELTA_Z);
    }
}

#[test]
fn identity_has_no_collision() {
    let id = MapRegistry::default().build("identity").unwrap();
    let seeds = [(Complex64::new(0.1, 0.1), Complex64::new(-0.2, 0.3))];
    assert!(collision_search(&*id, &Region::centered_disk(0.9).unwrap(), &seeds).is_none());
}

#[test]
fn starlikeness_fails_just_beyond_the_lens_height() {
    let koebe = MapRegistry::default().build("koebe").unwrap();
    assert!(starlike_boundary_check(&*koebe, SQRT_2 - 1.0).unwrap().passed);
    for t in [0.3, 0.5, 0.7] {
        let f = AnalyticMap::new("ft", move |z| ft_eval(t, z));
        assert!(starlike_boundary_check(&f, SQRT_2 - 1.0 - 1e-3).unwrap().passed, "t = {t}");
    }
    let failing = (1..40).map(|k| k as f64 / 40.0).find(|&t| {
        let f = AnalyticMap::new("ft", move |z| ft_eval(t, z));
        !starlike_boundary_check(&f, SQRT_2 - 1.0 + 0.02).unwrap().passed
    });
    assert!(failing.is_some());
    let half = AnalyticMap::new("ft", |z| ft_eval(0.5, z));
    assert!(!starlike_boundary_check(&half, 0.6).unwrap().passed);
}

#[test]
fn local_scan_finds_the_lens_tip() {
    let half = AnalyticMap::new("ft", |z| ft_eval(0.5, z));
    let scan = local_univalence_scan(&half, &Region::centered_disk(0.45).unwrap(), 120).unwrap();
    let tip = Complex64::new(0.0, SQRT_2 - 1.0);
    assert!(scan.critical_points.iter().any(|z| (z - tip).norm() < 1e-6), "{:?}", scan.critical_points);
}

#[test]
fn sheared_maps_are_locally_univalent_on_the_sublevel_set() {
    let region = Region::psi_sublevel(SQRT_2 - 1.0).unwrap();
    for i in 0..6 {
        let (nu, mu) = sample_indexed(23, i, 8);
        let map = shear(&mu, &nu, DEFAULT_ORDER).unwrap();
        let scan = local_univalence_scan(&map, &region, 100).unwrap();
        assert!(scan.min_jacobian > 0.0, "sample {i}: {}", scan.min_jacobian);
    }
}

#[test]
fn non_simple_images_are_rejected_by_the_convexity_check() {
    let square = MapRegistry::default().build("square").unwrap();
    let image = image_polyline(&*square, &Region::centered_disk(0.5).unwrap(), 256).unwrap();
    assert!(direction_convexity_check(&image, Direction::Vertical).is_err());
    let f = AnalyticMap::robertson(SegmentMeasure::dirac(1.0).unwrap());
    assert!(f.is_analytic());
}
