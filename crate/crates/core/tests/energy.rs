use std::f64::consts::PI;

use brody_core::elliptic::{brody_rescale, Lattice};
use brody_core::energy::{
    energy, nsa_characteristic, rational_total_energy, rho_elliptic, sup_translate_energy, EnergyOptions,
    FolnerSequence, Shape,
};
use brody_core::{CurveMap, Region, C64};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn wp_brody() -> CurveMap {
    let w = Region::centered_square(c(0.0, 0.0), 2.0).unwrap();
    brody_rescale(&CurveMap::wp_curve(Lattice::hexagonal(1.0).unwrap()), &w, 1.0, 0.01).unwrap().0
}

fn curves() -> Vec<CurveMap> {
    vec![CurveMap::identity(), CurveMap::exponential(c(1.0, 0.5)), wp_brody()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn additivity_over_tiles(k in 0usize..3, x in -3.0..3.0f64, y in -3.0..3.0f64, s in 0.3..1.5f64) {
        let f = &curves()[k];
        let opts = EnergyOptions::default();
        let whole = energy(f, &Region::square(c(x, y), 2.0 * s).unwrap(), &opts).unwrap();
        let mut parts = 0.0;
        let mut err = whole.error_estimate;
        for (i, j) in [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)] {
            let e = energy(f, &Region::square(c(x + i * s, y + j * s), s).unwrap(), &opts).unwrap();
            parts += e.value;
            err += e.error_estimate;
        }
        prop_assert!((whole.value - parts).abs() <= err + 1e-12 * whole.value.max(1.0), "{} {}", whole.value, parts);
    }
}

#[test]
fn identity_disk_closed_form() {
    // ∫_{D_R} dA/(π(1+|z|²)²) = R²/(1+R²).
    for r in [0.5, 1.0, 3.0] {
        let e = energy(&CurveMap::identity(), &Region::disk(c(0.0, 0.0), r).unwrap(), &EnergyOptions::default()).unwrap();
        assert!((e.value - r * r / (1.0 + r * r)).abs() < 1e-10, "{r}: {}", e.value);
    }
}

#[test]
fn degree_identity_for_quadratic() {
    let f = CurveMap::rational(vec![vec![c(1.0, 0.0), c(0.0, 1.0)], vec![c(0.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0)]]).unwrap();
    let e = rational_total_energy(&f, 1e4, &EnergyOptions::default()).unwrap();
    assert!((e.value - 2.0).abs() < 1e-6, "{}", e.value);
}

#[test]
fn folner_boundary_ratio_vanishes() {
    for shape in [Shape::Disk, Shape::Square] {
        let fs = FolnerSequence::new(shape, vec![1.0, 4.0, 16.0, 64.0, 256.0]).unwrap();
        let r = fs.boundary_ratios(1.0);
        assert!(r.windows(2).all(|w| w[1] < w[0]));
        assert!(r[r.len() - 1] < 0.02);
    }
    assert!(FolnerSequence::new(Shape::Disk, vec![2.0, 1.0]).is_err());
}

#[test]
fn rescaling_law_on_the_torus() {
    let f = wp_brody();
    let opts = EnergyOptions { cell: 2.0, ..EnergyOptions::default() };
    let base = rho_elliptic(&f, &f.period_lattice().unwrap(), &opts).unwrap();
    for s in [0.5, 0.25] {
        let g = f.precompose(c(s, 0.0), c(0.0, 0.0)).unwrap();
        let r = rho_elliptic(&g, &g.period_lattice().unwrap(), &opts).unwrap();
        assert!((r.value / base.value - s * s).abs() < 0.01 * s * s, "{s}: {}", r.value / base.value);
    }
    assert!(base.periodicity_residual < 1e-9);
}

#[test]
fn unit_square_bound_for_brody_curves() {
    let w = Region::centered_square(c(0.0, 0.0), 4.0).unwrap();
    let exp_brody = brody_rescale(&CurveMap::exponential(c(1.0, 0.0)), &w, 1.0, 0.01).unwrap().0;
    let shape = Region::centered_square(c(0.0, 0.0), 1.0).unwrap();
    let window = Region::centered_square(c(0.0, 0.0), 10.0).unwrap();
    for f in [exp_brody, wp_brody(), CurveMap::identity()] {
        let s = sup_translate_energy(&f, &shape, &window, &EnergyOptions::default()).unwrap();
        assert!(s.value < 1.0, "{}", s.value);
        assert!(s.value <= PI * 0.5, "unit square inside its circumscribed disk");
    }
}

#[test]
fn characteristic_of_exponential() {
    // Oracle by midpoint rules in one variable, independent of the 2D quadrature.
    let f = CurveMap::exponential(c(1.0, 0.0));
    let r = 6.0;
    let v = nsa_characteristic(&f, r, &EnergyOptions::default()).unwrap();
    // |df|² = 1/(4π cosh²x); A(t) = ∫_{-t}^{t} 2√(t²-x²)/(4π cosh²x) dx; T = ∫_1^r A(t)/t dt.
    let a = |t: f64| {
        let n = 4000;
        let h = 2.0 * t / n as f64;
        (0..n)
            .map(|k| {
                let x = -t + (k as f64 + 0.5) * h;
                2.0 * (t * t - x * x).max(0.0).sqrt() / (4.0 * PI * x.cosh().powi(2)) * h
            })
            .sum::<f64>()
    };
    let m = 2000;
    let h = (r - 1.0) / m as f64;
    let t: f64 = (0..m).map(|k| 1.0 + (k as f64 + 0.5) * h).map(|s| a(s) / s * h).sum();
    assert!((v.value - t).abs() < 1e-4, "{} {}", v.value, t);
}
