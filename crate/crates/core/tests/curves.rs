use brody_core::curve::spherical_derivative_in_chart;
use brody_core::elliptic::Lattice;
use brody_core::linalg::Unitary;
use brody_core::{fs_distance, CurveMap, ProjectivePoint, C64, SQRT_PI};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn cx() -> impl Strategy<Value = C64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| c(a, b))
}

fn vec3() -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec(cx(), 3).prop_filter("nonzero", |v| v.iter().map(|z| z.norm()).sum::<f64>() > 1e-3)
}

/// Product of two Householder-type reflections and a diagonal phase.
fn unitary(v: &[C64], w: &[C64], phases: &[f64]) -> Unitary {
    let d: Vec<Vec<C64>> = (0..phases.len())
        .map(|i| (0..phases.len()).map(|j| if i == j { C64::from_polar(1.0, phases[i]) } else { c(0.0, 0.0) }).collect())
        .collect();
    let u = Unitary::to_first_axis(v).unwrap().mul(&Unitary::to_first_axis(w).unwrap());
    u.mul(&Unitary::from_rows(&d).unwrap())
}

fn rational3() -> CurveMap {
    CurveMap::rational(vec![vec![c(-2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0), c(3.0, 0.0)]])
        .unwrap()
}

/// A curve into CP^2: `[1 : z^2 : e^z]` (affine components).
fn plane_curve() -> CurveMap {
    use brody_core::curve::ExpTerm;
    let z2 = ExpTerm { coeff: c(1.0, 0.0), power: 2, rate: c(0.0, 0.0) };
    let ez = ExpTerm { coeff: c(1.0, 0.0), power: 0, rate: c(1.0, 0.0) };
    CurveMap::exp_sum(vec![vec![z2], vec![ez]]).unwrap()
}

fn test_curves() -> Vec<CurveMap> {
    vec![
        CurveMap::identity(),
        rational3(),
        CurveMap::exponential(c(0.7, 0.2)),
        CurveMap::wp_curve(Lattice::hexagonal(1.0).unwrap()),
        plane_curve(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lift_scale_invariance(z in cx(), k in 0usize..5, re in -4.0..4.0f64, im in -4.0..4.0f64) {
        prop_assume!(re.abs() + im.abs() > 1e-2);
        let f = &test_curves()[k];
        let l = f.lift(z).unwrap();
        let lambda = c(re, im);
        let mut m = l.clone();
        for x in m.f.iter_mut().chain(m.df.iter_mut()) {
            *x *= lambda;
        }
        let (a, b) = (l.spherical_derivative(), m.spherical_derivative());
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300), "{a} {b}");
    }

    #[test]
    fn pu_invariance(z in cx(), v in vec3(), w in vec3(), p in prop::collection::vec(0.0..6.3f64, 3)) {
        let f = plane_curve();
        let g = f.postcompose(unitary(&v, &w, &p)).unwrap();
        let (a, b) = (f.spherical_derivative(z).unwrap(), g.spherical_derivative(z).unwrap());
        prop_assert!((a - b).abs() <= 1e-10, "{a} {b}");
    }

    #[test]
    fn pu_invariance_lines(z in cx(), k in 0usize..4, v in prop::collection::vec(cx(), 2), ph in prop::collection::vec(0.0..6.3f64, 2)) {
        prop_assume!(v[0].norm() + v[1].norm() > 1e-3);
        let f = &test_curves()[k];
        prop_assume!(f.lift(z).is_ok());
        let g = f.postcompose(unitary(&v, &[c(0.6, 0.0), c(0.0, 0.8)], &ph)).unwrap();
        let (a, b) = (f.spherical_derivative(z).unwrap(), g.spherical_derivative(z).unwrap());
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1.0), "{a} {b}");
    }

    #[test]
    fn chart_consistency(z in cx()) {
        let l = rational3().lift(z).unwrap();
        let (f0, f1) = (l.f[0].norm(), l.f[1].norm());
        prop_assume!(f0 > 1e-3 && f1 > 1e-3);
        let a = spherical_derivative_in_chart(&l, 0).unwrap();
        let b = spherical_derivative_in_chart(&l, 1).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.max(1.0), "{a} {b}");
        prop_assert!((a - l.spherical_derivative()).abs() <= 1e-10 * a.max(1.0));
    }

    #[test]
    fn projective_points_are_unit(v in vec3()) {
        let p = ProjectivePoint::new(&v).unwrap();
        let n: f64 = p.coords().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assert!((n - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn metric_axioms(u in vec3(), v in vec3(), w in vec3()) {
        let (p, q, r) = (ProjectivePoint::new(&u).unwrap(), ProjectivePoint::new(&v).unwrap(), ProjectivePoint::new(&w).unwrap());
        prop_assert_eq!(fs_distance(&p, &q), fs_distance(&q, &p));
        prop_assert!(fs_distance(&p, &r) <= fs_distance(&p, &q) + fs_distance(&q, &r) + 1e-12);
        prop_assert!(fs_distance(&p, &q) <= SQRT_PI / 2.0 + 1e-15);
        prop_assert_eq!(fs_distance(&p, &p), 0.0);
    }

    #[test]
    fn chordal_bound(a in prop::collection::vec(cx(), 2), b in prop::collection::vec(cx(), 2)) {
        // Affine chart f_0 = 1.
        let (p, q) = (ProjectivePoint::from_affine(&a), ProjectivePoint::from_affine(&b));
        let diff = a.iter().zip(&b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(fs_distance(&p, &q) <= (2.0 / std::f64::consts::PI).sqrt() * diff + 1e-15);
    }

    #[test]
    fn precomposition_scales_derivative(z in cx(), s in 0.1..2.0f64, th in 0.0..6.3f64, b in cx()) {
        let f = rational3();
        let sc = C64::from_polar(s, th);
        let g = f.precompose(sc, b).unwrap();
        let (lhs, rhs) = (g.spherical_derivative(z).unwrap(), s * f.spherical_derivative(sc * z + b).unwrap());
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
    }
}

#[test]
fn lifts_stay_in_range_far_out() {
    let f = plane_curve();
    for x in [-800.0, -50.0, 0.0, 50.0, 800.0] {
        let l = f.lift(c(x, 1.0)).unwrap();
        let n = l.norm();
        assert!((2f64.powi(-8)..=2f64.powi(8)).contains(&n), "{x}: {n}");
        assert!(l.spherical_derivative().is_finite());
    }
}

#[test]
fn great_circle_length_matches_distance() {
    // Integrate the Fubini-Study line element along t -> [cos t : sin t].
    let n = 20_000;
    let t1 = 1.1f64;
    let mut len = 0.0;
    for k in 0..n {
        let (a, b) = (t1 * k as f64 / n as f64, t1 * (k + 1) as f64 / n as f64);
        let pa = ProjectivePoint::new(&[c(a.cos(), 0.0), c(a.sin(), 0.0)]).unwrap();
        let pb = ProjectivePoint::new(&[c(b.cos(), 0.0), c(b.sin(), 0.0)]).unwrap();
        len += fs_distance(&pa, &pb);
    }
    let p0 = ProjectivePoint::new(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
    let p1 = ProjectivePoint::new(&[c(t1.cos(), 0.0), c(t1.sin(), 0.0)]).unwrap();
    assert!((len - fs_distance(&p0, &p1)).abs() < 1e-9);
    assert!((len - t1 / SQRT_PI).abs() < 1e-9);
}
