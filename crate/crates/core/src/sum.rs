//! Compensated summation.
//!
//! All Dirichlet sums in the engine are accumulated in ascending `n` through
//! [`CompensatedSum`], so results do not depend on how work is scheduled.

use num_complex::Complex64;

/// Neumaier's variant of Kahan summation, applied to both components.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

#[inline]
fn two_sum(acc: f64, x: f64, comp: &mut f64) -> f64 {
    let t = acc + x;
    if acc.abs() >= x.abs() {
        *comp += (acc - t) + x;
    } else {
        *comp += (x - t) + acc;
    }
    t
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: Complex64) {
        self.sum.re = two_sum(self.sum.re, x.re, &mut self.comp.re);
        self.sum.im = two_sum(self.sum.im, x.im, &mut self.comp.im);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

impl FromIterator<Complex64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Sum an iterator of complex numbers with compensation.
pub fn compensated<I: IntoIterator<Item = Complex64>>(iter: I) -> Complex64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_mass() {
        let xs = [1e16, 1.0, -1e16, 1.0].map(|x| Complex64::new(x, -x));
        let naive: Complex64 = xs.iter().sum();
        assert_eq!(compensated(xs), Complex64::new(2.0, -2.0));
        assert_ne!(naive, Complex64::new(2.0, -2.0));
    }
}
