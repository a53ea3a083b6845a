//! Dense complex polynomials (ascending coefficients) for rational curves.

use alloc::vec;
use alloc::vec::Vec;


use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl Poly {
    /// Builds a polynomial from ascending coefficients, dropping exact zero
    /// leading terms.
    pub fn new(coeffs: Vec<C64>) -> Self {
        let mut p = Self { coeffs };
        p.trim(0.0);
        p
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn trim(&mut self, tol: f64) {
        while let Some(last) = self.coeffs.last() {
            if last.norm() <= tol {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    /// Value and first derivative by Horner's scheme.
    pub fn eval_with_derivative(&self, z: C64) -> (C64, C64) {
        let mut p = C64::new(0.0, 0.0);
        let mut dp = C64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// Coefficients reversed against a fixed degree: `z^d p(1/z)`.
    pub fn reversed(&self, d: usize) -> Self {
        let mut c = vec![C64::new(0.0, 0.0); d + 1];
        for (k, &a) in self.coeffs.iter().enumerate() {
            c[d - k] = a;
        }
        Self::new(c)
    }

    /// Division with remainder; leading remainder terms below `tol` are dropped.
    pub fn div_rem(&self, d: &Poly, tol: f64) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.coeffs[dd];
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            let mut r = Poly { coeffs: rem };
            r.trim(tol);
            return (Poly::new(Vec::new()), r);
        }
        let mut q = vec![C64::new(0.0, 0.0); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let t = rem[k + dd] / lead;
            q[k] = t;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[k + j] -= t * dc;
            }
            rem[k + dd] = C64::new(0.0, 0.0);
        }
        rem.truncate(dd);
        let mut r = Poly { coeffs: rem };
        r.trim(tol);
        (Poly::new(q), r)
    }

    fn monic(&self) -> Self {
        let lead = *self.coeffs.last().expect("nonzero");
        Self::new(self.coeffs.iter().map(|c| c / lead).collect())
    }
}

/// Greatest common divisor (monic) of a family of polynomials, by the
/// Euclidean algorithm with a relative tolerance for vanishing remainders.
///
/// Zero polynomials are ignored; returns `None` if every input is zero.
pub fn gcd_all(polys: &[Poly]) -> Option<Poly> {
    let scale = polys.iter().map(Poly::max_abs).fold(0.0, f64::max);
    let tol = 1e-10 * scale.max(f64::MIN_POSITIVE);
    let mut acc: Option<Poly> = None;
    for p in polys.iter().filter(|p| !p.is_zero()) {
        acc = Some(match acc {
            None => p.monic(),
            Some(g) => gcd2(&g, p, tol),
        });
    }
    acc
}

fn gcd2(a: &Poly, b: &Poly, tol: f64) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    if a.degree() < b.degree() {
        core::mem::swap(&mut a, &mut b);
    }
    while !b.is_zero() {
        if b.degree() == Some(0) {
            return Poly::constant(C64::new(1.0, 0.0));
        }
        let (_, r) = a.div_rem(&b, tol);
        a = b;
        b = r;
    }
    a.monic()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[f64]) -> Poly {
        Poly::new(cs.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    #[test]
    fn horner_value_and_derivative() {
        // 1 - 2z + z^3 at z = 2: value 5, derivative 10
        let q = p(&[1.0, -2.0, 0.0, 1.0]);
        let (v, d) = q.eval_with_derivative(C64::new(2.0, 0.0));
        assert_eq!(v, C64::new(5.0, 0.0));
        assert_eq!(d, C64::new(10.0, 0.0));
    }

    #[test]
    fn gcd_finds_common_linear_factor() {
        // (z - 1)(z + 2) and (z - 1)(z - 3)
        let a = p(&[-2.0, 1.0, 1.0]);
        let b = p(&[3.0, -4.0, 1.0]);
        let g = gcd_all(&[a.clone(), b]).unwrap();
        assert_eq!(g.degree(), Some(1));
        assert!((g.coeffs()[0] - C64::new(-1.0, 0.0)).norm() < 1e-12);
        let (q, r) = a.div_rem(&g, 1e-12);
        assert!(r.is_zero());
        assert!((q.coeffs()[0] - C64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn coprime_gives_one_and_zero_is_ignored() {
        let g = gcd_all(&[p(&[1.0, 0.0, 1.0]), p(&[]), p(&[0.0, 1.0])]).unwrap();
        assert_eq!(g.degree(), Some(0));
        assert!(gcd_all(&[p(&[]), p(&[0.0])]).is_none());
    }

    #[test]
    fn reversal() {
        let q = p(&[1.0, 2.0]).reversed(3);
        assert_eq!(q.coeffs().len(), 4);
        assert_eq!(q.coeffs()[3], C64::new(1.0, 0.0));
        assert_eq!(q.coeffs()[2], C64::new(2.0, 0.0));
    }
}
