//! Integration and search domains.

use alloc::format;
use core::f64::consts::PI;


use crate::{Error, Result, C64};

/// A closed disk or an axis-aligned square (given by its lower-left corner).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Disk { center: C64, radius: f64 },
    Square { corner: C64, side: f64 },
}

impl Region {
    pub fn disk(center: C64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !finite(center) {
            return Err(Error::InvalidArgument(format!("disk radius must be positive, got {radius}")));
        }
        Ok(Region::Disk { center, radius })
    }

    pub fn square(corner: C64, side: f64) -> Result<Self> {
        if !(side > 0.0 && side.is_finite()) || !finite(corner) {
            return Err(Error::InvalidArgument(format!("square side must be positive, got {side}")));
        }
        Ok(Region::Square { corner, side })
    }

    pub fn centered_square(center: C64, side: f64) -> Result<Self> {
        Self::square(center - C64::new(side / 2.0, side / 2.0), side)
    }

    pub fn area(&self) -> f64 {
        match *self {
            Region::Disk { radius, .. } => PI * radius * radius,
            Region::Square { side, .. } => side * side,
        }
    }

    pub fn center(&self) -> C64 {
        match *self {
            Region::Disk { center, .. } => center,
            Region::Square { corner, side } => corner + C64::new(side / 2.0, side / 2.0),
        }
    }

    /// Radius of a disk, side of a square.
    pub fn size(&self) -> f64 {
        match *self {
            Region::Disk { radius, .. } => radius,
            Region::Square { side, .. } => side,
        }
    }

    pub fn is_disk(&self) -> bool {
        matches!(self, Region::Disk { .. })
    }

    /// `(xmin, xmax, ymin, ymax)`.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        match *self {
            Region::Disk { center, radius } => (
                center.re - radius,
                center.re + radius,
                center.im - radius,
                center.im + radius,
            ),
            Region::Square { corner, side } => (corner.re, corner.re + side, corner.im, corner.im + side),
        }
    }

    /// Membership with a relative slack of `1e-12` of the size.
    pub fn contains(&self, z: C64) -> bool {
        let slack = 1e-12 * self.size();
        match *self {
            Region::Disk { center, radius } => (z - center).norm() <= radius + slack,
            Region::Square { corner, side } => {
                let d = z - corner;
                d.re >= -slack && d.re <= side + slack && d.im >= -slack && d.im <= side + slack
            }
        }
    }

    /// Whether `other` lies inside `self` (up to the same slack).
    pub fn contains_region(&self, other: &Region) -> bool {
        let slack = 1e-12 * self.size().max(other.size());
        match (*self, *other) {
            (Region::Disk { center, radius }, Region::Disk { center: c, radius: r }) => {
                (c - center).norm() + r <= radius + slack
            }
            (Region::Disk { center, radius }, Region::Square { corner, side }) => {
                let corners = [
                    corner,
                    corner + C64::new(side, 0.0),
                    corner + C64::new(0.0, side),
                    corner + C64::new(side, side),
                ];
                corners.iter().all(|&p| (p - center).norm() <= radius + slack)
            }
            (Region::Square { .. }, _) => {
                let (ax0, ax1, ay0, ay1) = self.bounding_box();
                let (bx0, bx1, by0, by1) = other.bounding_box();
                bx0 >= ax0 - slack && bx1 <= ax1 + slack && by0 >= ay0 - slack && by1 <= ay1 + slack
            }
        }
    }

    pub fn translated(&self, a: C64) -> Self {
        match *self {
            Region::Disk { center, radius } => Region::Disk { center: center + a, radius },
            Region::Square { corner, side } => Region::Square { corner: corner + a, side },
        }
    }

    /// Image under `z ↦ s z` for `s > 0`.
    pub fn scaled(&self, s: f64) -> Self {
        match *self {
            Region::Disk { center, radius } => Region::Disk { center: center * s, radius: radius * s },
            Region::Square { corner, side } => Region::Square { corner: corner * s, side: side * s },
        }
    }

    /// Same shape and center, size replaced.
    pub fn resized(&self, size: f64) -> Result<Self> {
        match *self {
            Region::Disk { center, .. } => Self::disk(center, size),
            Region::Square { .. } => Self::centered_square(self.center(), size),
        }
    }
}

fn finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_regions() {
        assert!(Region::disk(C64::new(0.0, 0.0), 0.0).is_err());
        assert!(Region::square(C64::new(0.0, 0.0), -1.0).is_err());
        assert!(Region::disk(C64::new(f64::NAN, 0.0), 1.0).is_err());
    }

    #[test]
    fn containment() {
        let big = Region::disk(C64::new(0.0, 0.0), 10.0).unwrap();
        let small = Region::disk(C64::new(3.0, 4.0), 5.0).unwrap();
        assert!(big.contains_region(&small));
        assert!(!big.contains_region(&small.translated(C64::new(0.1, 0.0))));
        let sq = Region::centered_square(C64::new(0.0, 0.0), 2.0).unwrap();
        assert!(sq.contains_region(&Region::disk(C64::new(0.0, 0.0), 1.0).unwrap()));
        assert!(Region::disk(C64::new(0.0, 0.0), 2f64.sqrt()).unwrap().contains_region(&sq));
    }

    #[test]
    fn scaling_and_area() {
        let sq = Region::square(C64::new(1.0, 1.0), 2.0).unwrap();
        assert_eq!(sq.scaled(0.5), Region::square(C64::new(0.5, 0.5), 1.0).unwrap());
        assert_eq!(sq.area(), 4.0);
        assert_eq!(sq.center(), C64::new(2.0, 2.0));
    }
}
