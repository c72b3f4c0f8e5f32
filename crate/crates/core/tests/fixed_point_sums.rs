mod common;

use common::c;
use num_complex::Complex64;
use petal::config::Tolerances;
use petal::contour::{sum_fixed_points, Circle};
use petal::family::{FamilyId, FamilyMember};
use petal::fatou::phase::pair_disk;
use petal::fixed_points::find_pair;

fn sector_lambdas() -> Vec<Complex64> {
    (0..10)
        .map(|k| {
            let r = 0.01 + 0.02 * k as f64;
            let th = (0.05 + 0.09 * k as f64) * std::f64::consts::FRAC_PI_2;
            Complex64::from_polar(r, th)
        })
        .collect()
}

#[test]
fn normalized_sum_is_minus_two_lambda() {
    let tol = Tolerances::default();
    for l in sector_lambdas() {
        let m = FamilyMember::new(FamilyId::normalized(1).unwrap(), l).unwrap();
        let sigma = sum_fixed_points(&m, &pair_disk(&m).unwrap(), &tol.contour).unwrap();
        assert!((sigma + 2.0 * l).norm() <= 1e-10, "lambda {l}: sigma {sigma}");
    }
}

#[test]
fn quadratic_sum_is_one() {
    let tol = Tolerances::default();
    for cr in [c(0.25, 0.0), c(0.2, 0.05), c(0.3, -0.1), c(0.1, 0.2)] {
        let m = FamilyMember::new(FamilyId::QuadraticC, cr).unwrap();
        let disk = Circle::new(c(0.5, 0.0), 1.0, 256).unwrap();
        let sigma = sum_fixed_points(&m, &disk, &tol.contour).unwrap();
        assert!((sigma - 1.0).norm() <= 1e-10, "c {cr}: sigma {sigma}");
    }
}

#[test]
fn pair_matches_closed_form() {
    let tol = Tolerances::default();
    for l in sector_lambdas() {
        let m = FamilyMember::new(FamilyId::normalized(1).unwrap(), l).unwrap();
        let pair = find_pair(&m, &pair_disk(&m).unwrap(), true, &tol).unwrap();
        assert_eq!(pair.z1, c(0.0, 0.0));
        assert!((pair.z2 + 2.0 * l).norm() <= 1e-10);
        assert!((pair.mu1 - (1.0 + 2.0 * l)).norm() <= 1e-10);
    }
}
