use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficients with magnitude at or below this are treated as zero when
/// trimming the leading end of a polynomial.
pub const TRIM_EPS: f64 = 1e-14;

/// Real polynomial in `x`; `coeffs[k]` multiplies `x^k`.
///
/// Canonical form has a nonzero leading coefficient; the zero polynomial has
/// no coefficients at all.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `c x^k`
    pub fn monomial(c: f64, k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.abs() <= TRIM_EPS) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Largest coefficient magnitude.
    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Euclidean division `self = q * divisor + r` with `deg r < deg divisor`.
    ///
    /// Panics if `divisor` is the zero polynomial.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Polynomial::zero(), self.clone());
        }
        let mut quot = vec![0.0; rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = rem[k + d] / lead;
            quot[k] = c;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= c * dc;
            }
            rem[k + d] = 0.0;
        }
        rem.truncate(d);
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    /// Monic greatest common divisor by the Euclidean algorithm. Operands are
    /// rescaled to unit max-norm at every step, and a remainder whose norm is
    /// at most `tol` counts as zero, so the result does not depend on the
    /// overall scale of either input.
    pub fn gcd(&self, other: &Polynomial, tol: f64) -> Polynomial {
        let unit = |p: &Polynomial| {
            if p.is_zero() {
                p.clone()
            } else {
                p.scale(1.0 / p.norm_inf())
            }
        };
        let (mut a, mut b) = if self.coeffs.len() >= other.coeffs.len() {
            (unit(self), unit(other))
        } else {
            (unit(other), unit(self))
        };
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = if r.norm_inf() <= tol { Polynomial::zero() } else { unit(&r) };
        }
        if a.is_zero() {
            return a;
        }
        a.scale(1.0 / a.leading())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            if !first {
                f.write_str(if c < 0.0 { " - " } else { " + " })?;
            } else if c < 0.0 {
                f.write_str("-")?;
            }
            first = false;
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "{a} x")?,
                _ => write!(f, "{a} x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form_trims_leading_zeros() {
        let p = Polynomial::new(vec![1.0, 2.0, 0.0, 1e-16]);
        assert_eq!(p.coeffs(), &[1.0, 2.0]);
        assert_eq!(p.degree(), Some(1));
        assert!(Polynomial::new(vec![0.0, 0.0]).is_zero());
        assert_eq!(Polynomial::zero().degree(), None);
    }

    #[test]
    fn arithmetic_and_calculus() {
        let p = Polynomial::new(vec![1.0, -3.0, 2.0]); // (1 - x)(1 - 2x)
        let q = Polynomial::new(vec![1.0, -1.0]);
        let (quot, rem) = p.div_rem(&q);
        assert!(rem.is_zero());
        assert_eq!(quot.coeffs(), &[1.0, -2.0]);
        assert_eq!(p.derivative().coeffs(), &[-3.0, 4.0]);
        assert_eq!(p.eval(2.0), 3.0);
        assert_eq!((&p - &p).degree(), None);
        assert_eq!(format!("{p}"), "1 - 3 x + 2 x^2");
    }

    #[test]
    fn gcd_finds_shared_factor() {
        let common = Polynomial::new(vec![1.0, -0.4]);
        let a = &common * &Polynomial::new(vec![2.0, 1.0]);
        let b = &common * &Polynomial::new(vec![1.0, 0.0, 3.0]);
        let g = a.gcd(&b, 1e-10);
        assert_eq!(g.degree(), Some(1));
        assert!((g.coeff(0) + 2.5).abs() < 1e-12);
        let coprime = Polynomial::new(vec![1.0, 1.0]).gcd(&Polynomial::new(vec![1.0, -1.0]), 1e-10);
        assert_eq!(coprime.degree(), Some(0));
    }

    fn poly_strategy() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(-3.0f64..3.0, 1..6).prop_map(Polynomial::new)
    }

    proptest! {
        #[test]
        fn division_reconstructs_dividend(a in poly_strategy(), b in poly_strategy()) {
            prop_assume!(b.degree().is_some() && b.leading().abs() > 0.1);
            let (q, r) = a.div_rem(&b);
            let back = &(&q * &b) + &r;
            for x in [-1.3, -0.2, 0.0, 0.7, 1.1] {
                let scale = 1.0 + a.norm_inf() * 100.0;
                prop_assert!((back.eval(x) - a.eval(x)).abs() < 1e-9 * scale);
            }
        }

        #[test]
        fn product_evaluates_pointwise(a in poly_strategy(), b in poly_strategy(), x in -2.0f64..2.0) {
            let lhs = (&a * &b).eval(x);
            let rhs = a.eval(x) * b.eval(x);
            prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + rhs.abs()));
        }
    }
}
