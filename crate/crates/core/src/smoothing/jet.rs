//! Truncated Taylor series in one real variable.

use std::ops::{Add, Mul, Neg, Sub};

/// Number of Taylor coefficients carried (derivative orders 0..=13).
pub const JET_LEN: usize = 14;

/// `c[k] = f^{(k)}(x_0) / k!`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub c: [f64; JET_LEN],
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = v;
        Self { c }
    }

    /// The identity function expanded at `x0`.
    pub fn variable(x0: f64) -> Self {
        let mut c = [0.0; JET_LEN];
        c[0] = x0;
        c[1] = 1.0;
        Self { c }
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    pub fn is_constant(&self) -> bool {
        self.c[1..].iter().all(|v| *v == 0.0)
    }

    /// `f^{(k)}(x_0)` for every `k`.
    pub fn derivatives(&self) -> [f64; JET_LEN] {
        let mut out = self.c;
        let mut fact = 1.0;
        for (k, v) in out.iter_mut().enumerate().skip(1) {
            fact *= k as f64;
            *v *= fact;
        }
        out
    }

    pub fn scale(mut self, a: f64) -> Self {
        self.c.iter_mut().for_each(|v| *v *= a);
        self
    }

    /// `a + b f`.
    pub fn affine(self, a: f64, b: f64) -> Self {
        let mut out = self.scale(b);
        out.c[0] += a;
        out
    }

    pub fn recip(&self) -> Self {
        let mut r = [0.0; JET_LEN];
        let inv = 1.0 / self.c[0];
        r[0] = inv;
        for k in 1..JET_LEN {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += self.c[j] * r[k - j];
            }
            r[k] = -acc * inv;
        }
        Self { c: r }
    }

    pub fn exp(&self) -> Self {
        let mut e = [0.0; JET_LEN];
        e[0] = self.c[0].exp();
        // k e_k = ∑_{j=1}^k j c_j e_{k-j}
        for k in 1..JET_LEN {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.c[j] * e[k - j];
            }
            e[k] = acc / k as f64;
        }
        Self { c: e }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        self.c.iter_mut().zip(rhs.c).for_each(|(a, b)| *a += b);
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut out = [0.0; JET_LEN];
        for (i, a) in self.c.iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in rhs.c[..JET_LEN - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Jet { c: out }
    }
}
