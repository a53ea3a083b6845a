use brody_core::elliptic::{brody_rescale, Lattice};
use brody_core::search::sup_spherical_derivative;
use brody_core::{CurveMap, Region, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn lattices() -> Vec<Lattice> {
    vec![
        Lattice::hexagonal(1.0).unwrap(),
        Lattice::new(c(1.0, 0.0), c(0.3, 1.7)).unwrap(),
        Lattice::new(c(0.8, 0.4), c(-0.5, 1.1)).unwrap(),
    ]
}

#[test]
fn differential_equation_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for lat in lattices() {
        let (g2, g3) = (lat.g2(), lat.g3());
        let mut worst = 0.0f64;
        for _ in 0..1000 {
            let z = c(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
            let (Ok(p), Ok(dp)) = (lat.wp(z), lat.wp_prime(z)) else { continue };
            let r = (dp * dp - (p * p * p * 4.0 - g2 * p - g3)).norm() / (1.0 + p.norm().powi(3));
            worst = worst.max(r);
        }
        assert!(worst <= 1e-9, "{worst}");
    }
}

#[test]
fn spherical_derivative_is_doubly_periodic() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for lat in lattices() {
        let f = CurveMap::wp_curve(lat.clone());
        let (w1, w2) = lat.periods();
        for _ in 0..200 {
            let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let v = f.spherical_derivative(z).unwrap();
            for s in [w1, w2, w1 + w2, w1 * 2.0 - w2] {
                let u = f.spherical_derivative(z + s).unwrap();
                assert!((u - v).abs() <= 1e-10, "{z} {s}: {u} {v}");
            }
        }
    }
}

#[test]
fn scaling_chain() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = CurveMap::wp_curve(Lattice::hexagonal(1.0).unwrap());
    for _ in 0..200 {
        let s = rng.gen_range(0.05..1.0);
        let fc = f.precompose(c(s, 0.0), c(0.0, 0.0)).unwrap();
        let z = c(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let (lhs, rhs) = (fc.spherical_derivative(z).unwrap(), s * f.spherical_derivative(z * s).unwrap());
        assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0), "{lhs} {rhs}");
    }
}

#[test]
fn brody_rescale_hits_target() {
    let f = CurveMap::wp_curve(Lattice::hexagonal(1.0).unwrap());
    let w = Region::centered_square(c(0.0, 0.0), 2.0).unwrap();
    let (g, rate) = brody_rescale(&f, &w, 1.0, 0.01).unwrap();
    assert!(rate > 0.0);
    let pulled = Region::centered_square(c(0.0, 0.0), 2.0 / rate).unwrap();
    let sup = sup_spherical_derivative(&g, &pulled, 0.01 / rate).unwrap().value;
    assert!((sup - 1.0).abs() < 1e-12, "{sup}");
    // The rescaled curve is periodic for the shrunk lattice, so the window
    // sup is the global sup.
    let lat = g.period_lattice().unwrap();
    let big = sup_spherical_derivative(&g, &lat.cell_bounding_square(), 0.02).unwrap().value;
    assert!(big <= 1.0 + 1e-6, "{big}");
}

#[test]
fn brody_rescale_of_exponential_is_exact() {
    // sup |d e^{cz}| = c/(2√π) on the line Re z = 0.
    let w = Region::centered_square(c(0.0, 0.0), 4.0).unwrap();
    let (_, rate) = brody_rescale(&CurveMap::exponential(c(1.0, 0.0)), &w, 0.5, 0.01).unwrap();
    assert!((rate - std::f64::consts::PI.sqrt()).abs() < 1e-12, "{rate}");
}
