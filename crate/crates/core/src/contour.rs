//! The closed "stadium" path around `w = 0` on which the correction
//! coefficients are integrated.
//!
//! For `s = σ + it` the path consists of the right semicircle of radius
//! `√|t|` about `3/2 - σ`, the segment `Im w = √|t|` traversed leftwards,
//! the left semicircle about `-1/2 - σ` and the segment `Im w = -√|t|`
//! traversed rightwards. The orientation is positive.
//!
//! When the left semicircle would cross the real axis too close to one of
//! the integrand's poles at `w = 0, -1, -2, ...`, it is replaced by a
//! semi-ellipse with the same vertical extent whose crossing sits halfway
//! between the neighbouring integers. No pole lies between the two curves,
//! so the integral is unchanged.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{AfeError, Result};
use crate::quadrature::GaussLegendre;

/// Distance below which a pole counts as sitting on the path.
pub const POLE_MARGIN: f64 = 0.25;

/// Longest parameter panel, in units of arc length.
pub const PANEL_LENGTH: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    /// Right semicircle about `3/2 - σ`, from `-π/2` to `π/2`.
    RightArc,
    /// `u - σ + i√|t|`, `u` from `3/2` down to `-1/2`.
    Top,
    /// Left half of the ellipse about `-1/2 - σ` with semi-axes
    /// `(semi_axis, √|t|)`, from `π/2` to `3π/2`.
    LeftArc { semi_axis: f64 },
    /// `u - σ - i√|t|`, `u` from `-1/2` up to `3/2`.
    Bottom,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourSpec {
    pub sigma: f64,
    pub t: f64,
    pub radius: f64,
    pub segments: [Segment; 4],
    /// Gauss–Legendre nodes per unit arc length (before doubling).
    pub nodes_per_unit: f64,
}

impl ContourSpec {
    pub fn new(sigma: f64, t: f64) -> Result<Self> {
        if !(t.abs() >= 1.0) || !sigma.is_finite() {
            return Err(AfeError::Domain(format!("contour needs |t| >= 1, got sigma = {sigma}, t = {t}")));
        }
        let radius = t.abs().sqrt();
        let left_center = -0.5 - sigma;
        let crossing = left_center - radius;
        let nearest = crossing.round();
        let semi_axis = if nearest <= 0.0 && (crossing - nearest).abs() < POLE_MARGIN {
            left_center - (crossing.ceil() - 0.5)
        } else {
            radius
        };
        Ok(Self {
            sigma,
            t,
            radius,
            segments: [Segment::RightArc, Segment::Top, Segment::LeftArc { semi_axis }, Segment::Bottom],
            nodes_per_unit: 16.0 / PANEL_LENGTH,
        })
    }

    pub fn right_center(&self) -> f64 {
        1.5 - self.sigma
    }

    pub fn left_center(&self) -> f64 {
        -0.5 - self.sigma
    }

    /// Where the path meets the negative real axis.
    pub fn left_crossing(&self) -> f64 {
        match self.segments[2] {
            Segment::LeftArc { semi_axis } => self.left_center() - semi_axis,
            _ => unreachable!(),
        }
    }

    /// True when the left cap was deformed away from a pole.
    pub fn is_deformed(&self) -> bool {
        matches!(self.segments[2], Segment::LeftArc { semi_axis } if semi_axis != self.radius)
    }

    /// Point and derivative at parameter `u ∈ [0, 1]` of a segment.
    fn point(&self, seg: Segment, u: f64) -> (Complex64, Complex64) {
        let r = self.radius;
        match seg {
            Segment::RightArc => {
                let th = -PI / 2.0 + PI * u;
                let e = Complex64::from_polar(r, th);
                (self.right_center() + e, e * Complex64::new(0.0, PI))
            }
            Segment::Top => {
                let x = 1.5 - 2.0 * u - self.sigma;
                (Complex64::new(x, r), Complex64::new(-2.0, 0.0))
            }
            Segment::LeftArc { semi_axis } => {
                let th = PI / 2.0 + PI * u;
                let w = Complex64::new(self.left_center() + semi_axis * th.cos(), r * th.sin());
                (w, Complex64::new(-semi_axis * th.sin() * PI, r * th.cos() * PI))
            }
            Segment::Bottom => {
                let x = -0.5 + 2.0 * u - self.sigma;
                (Complex64::new(x, -r), Complex64::new(2.0, 0.0))
            }
        }
    }

    fn length(&self, seg: Segment) -> f64 {
        match seg {
            Segment::RightArc => PI * self.radius,
            Segment::Top | Segment::Bottom => 2.0,
            // Ramanujan's approximation of half an ellipse perimeter.
            Segment::LeftArc { semi_axis } => {
                let (a, b) = (semi_axis, self.radius);
                let h = ((a - b) / (a + b)).powi(2);
                PI * (a + b) * (1.0 + 3.0 * h / (10.0 + (4.0 - 3.0 * h).sqrt())) / 2.0
            }
        }
    }

    /// Quadrature nodes `(w_k, c_k)` with `∮ f dw ≈ ∑ c_k f(w_k)`.
    ///
    /// `refine = 1` is the base rule; `refine = 2` halves every panel.
    pub fn nodes(&self, refine: usize) -> Vec<(Complex64, Complex64)> {
        let rule = GaussLegendre::sixteen();
        let mut out = Vec::new();
        for seg in self.segments {
            let panels = ((self.length(seg) / PANEL_LENGTH).ceil() as usize).max(1) * refine.max(1);
            let h = 1.0 / panels as f64;
            for p in 0..panels {
                let mid = (p as f64 + 0.5) * h;
                for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
                    let (w, dw) = self.point(seg, mid + 0.5 * h * x);
                    out.push((w, dw * (0.5 * h * wt)));
                }
            }
        }
        out
    }

    /// Whether `p` lies inside the path (for the undeformed stadium) or
    /// within `margin` of it.
    pub fn encloses_or_near(&self, p: Complex64, margin: f64) -> bool {
        let r = self.radius + margin;
        if p.re >= self.left_center() && p.re <= self.right_center() {
            return p.im.abs() <= r;
        }
        let c = if p.re > self.right_center() { self.right_center() } else { self.left_center() };
        (p - c).norm() <= r
    }

    /// Distance from `p` to the path, measured on the node set.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        self.nodes(1).iter().map(|(w, _)| (w - p).norm()).fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn integrate(spec: &ContourSpec, f: impl Fn(Complex64) -> Complex64) -> Complex64 {
        spec.nodes(1).iter().map(|(w, c)| f(*w) * c).sum()
    }

    #[test]
    fn winds_once_around_origin() {
        for &(sigma, t) in &[(0.5, 100.0), (0.0, 30.0), (1.0, -60.0)] {
            let spec = ContourSpec::new(sigma, t).unwrap();
            let v = integrate(&spec, |w| w.inv());
            assert!((v - Complex64::new(0.0, 2.0 * PI)).norm() < 1e-12, "{v}");
            let closed = integrate(&spec, |_| Complex64::new(1.0, 0.0));
            assert!(closed.norm() < 1e-12);
        }
    }

    #[test]
    fn radius_is_sqrt_t() {
        let spec = ContourSpec::new(0.3, -400.0).unwrap();
        assert_eq!(spec.radius, 20.0);
    }

    #[test]
    fn deforms_near_poles() {
        // crossing at -1/2 - 0.5 - 10 = -11 lies on a pole
        let spec = ContourSpec::new(0.5, 100.0).unwrap();
        assert!(spec.is_deformed());
        assert!((spec.left_crossing() + 11.5).abs() < 1e-12);
        let v = integrate(&spec, |w| (w + 11.0).inv());
        assert!((v - Complex64::new(0.0, 2.0 * PI)).norm() < 1e-12, "{v}");
        let spec = ContourSpec::new(0.25, 60.0).unwrap();
        assert!(!spec.is_deformed());
    }
}
