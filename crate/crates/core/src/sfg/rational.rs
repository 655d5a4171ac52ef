use std::fmt;

use log::warn;
use serde::Serialize;

use super::poly::Polynomial;
use crate::error::{Error, Result};

/// Remainder-norm threshold used when cancelling common factors.
pub const CANCEL_TOL: f64 = 1e-10;

/// Tolerance on `G(1) = 1` for a generating function to count as proper,
/// on top of the rounding error of evaluating `G` at one.
pub const PROPER_TOL: f64 = 1e-9;

/// Ratio of two polynomials, the carrier of probability generating functions.
///
/// When the denominator has a nonzero constant term both polynomials are
/// scaled so that term is exactly one.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        let c0 = den.coeff(0);
        if c0 != 0.0 && c0 != 1.0 {
            return Ok(Self {
                num: num.scale(1.0 / c0),
                den: den.scale(1.0 / c0),
            });
        }
        Ok(Self { num, den })
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.num.eval(x) / self.den.eval(x)
    }

    /// Divides out the (numerically detected) common factor of numerator and
    /// denominator.
    pub fn reduce(&self) -> Self {
        if self.num.is_zero() {
            return Self {
                num: Polynomial::zero(),
                den: Polynomial::one(),
            };
        }
        let g = self.num.gcd(&self.den, CANCEL_TOL);
        if g.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let (num, _) = self.num.div_rem(&g);
        let (den, _) = self.den.div_rem(&g);
        Self::new(num, den).expect("nonzero denominator after cancellation")
    }

    /// `(G(1), G'(1), G''(1))` via the quotient rule on exact polynomial derivatives.
    fn derivatives_at_one(&self) -> Result<(f64, f64, f64)> {
        let d0 = self.den.eval(1.0);
        if d0.abs() <= f64::EPSILON * self.den.norm_inf() {
            return Err(Error::PoleAtOne);
        }
        let n0 = self.num.eval(1.0);
        let (n1p, d1p) = (self.num.derivative(), self.den.derivative());
        let (n1, d1) = (n1p.eval(1.0), d1p.eval(1.0));
        let (n2, d2) = (n1p.derivative().eval(1.0), d1p.derivative().eval(1.0));
        let g = n0 / d0;
        let g1 = (n1 * d0 - n0 * d1) / (d0 * d0);
        let g2 = (n2 * d0 - n0 * d2) / (d0 * d0) - 2.0 * d1 * g1 / d0;
        Ok((g, g1, g2))
    }

    /// Power-series coefficients `c_0 .. c_len-1` of the expansion about zero.
    pub fn series(&self, len: usize) -> Result<Vec<f64>> {
        let d0 = self.den.coeff(0);
        if d0 == 0.0 {
            return Err(Error::InvalidParameter(
                "denominator vanishes at x = 0".into(),
            ));
        }
        let dens = self.den.coeffs();
        let mut out: Vec<f64> = Vec::with_capacity(len);
        for k in 0..len {
            let mut c = self.num.coeff(k);
            for (j, &dj) in dens.iter().enumerate().skip(1).take(k) {
                c -= dj * out[k - j];
            }
            out.push(c / d0);
        }
        Ok(out)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// First two moments of a random variable described by its PGF.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterRefreshStats {
    pub mean: f64,
    pub second_moment: f64,
    /// `E[Y^2] / (2 E[Y])`
    pub ratio: f64,
}

/// `E[A] = G'(1)` and `E[A^2] = G''(1) + G'(1)`.
pub fn pgf_moments(g: &RationalFunction) -> Result<InterRefreshStats> {
    let (total, g1, g2) = g.derivatives_at_one()?;
    // Summing the coefficients at x = 1 cancels heavily when the mean is
    // large; allow for the resulting rounding.
    let cond = |p: &Polynomial| p.coeffs().iter().map(|c| c.abs()).sum::<f64>() / p.eval(1.0).abs();
    let rounding = 64.0 * f64::EPSILON * (cond(g.num()) + cond(g.den()));
    if !((total - 1.0).abs() <= PROPER_TOL + rounding) {
        return Err(Error::ImproperDistribution(total));
    }
    let second_moment = g2 + g1;
    Ok(InterRefreshStats {
        mean: g1,
        second_moment,
        ratio: second_moment / (2.0 * g1),
    })
}

/// PMF values `p(1) .. p(y_max)` read off the power series of `g`.
///
/// Slightly negative coefficients produced by rounding (down to `-1e-12`) are
/// clamped to zero.
pub fn pgf_series(g: &RationalFunction, y_max: usize) -> Result<Vec<f64>> {
    let coeffs = g.series(y_max + 1)?;
    Ok(coeffs[1..]
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            if c < 0.0 {
                if c < -1e-12 {
                    warn!("series coefficient {} is {c:e}; clamping to zero", i + 1);
                }
                0.0
            } else {
                c
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geometric(p: f64) -> RationalFunction {
        RationalFunction::new(
            Polynomial::monomial(p, 1),
            Polynomial::new(vec![1.0, -(1.0 - p)]),
        )
        .unwrap()
    }

    #[test]
    fn normalises_denominator_constant() {
        let g = RationalFunction::new(
            Polynomial::new(vec![0.0, 2.0]),
            Polynomial::new(vec![4.0, -2.0]),
        )
        .unwrap();
        assert_eq!(g.den().coeffs(), &[1.0, -0.5]);
        assert_eq!(g.num().coeffs(), &[0.0, 0.5]);
        assert!(RationalFunction::new(Polynomial::one(), Polynomial::zero()).is_err());
    }

    #[test]
    fn deterministic_unit_time() {
        let g = RationalFunction::new(Polynomial::monomial(1.0, 1), Polynomial::one()).unwrap();
        let m = pgf_moments(&g).unwrap();
        assert_eq!((m.mean, m.second_moment), (1.0, 1.0));
    }

    #[test]
    fn geometric_moments_and_series() {
        for p in [0.05, 0.3, 0.9] {
            let m = pgf_moments(&geometric(p)).unwrap();
            assert!((m.mean - 1.0 / p).abs() < 1e-10 / p);
            assert!((m.second_moment - (2.0 - p) / (p * p)).abs() < 1e-9 / (p * p));
            let pmf = pgf_series(&geometric(p), 30).unwrap();
            for (k, v) in pmf.iter().enumerate() {
                let want = p * (1.0 - p).powi(k as i32);
                assert!((v - want).abs() < 1e-14, "k={} {v} {want}", k + 1);
            }
        }
    }

    #[test]
    fn moment_errors() {
        let improper = RationalFunction::new(Polynomial::monomial(0.5, 1), Polynomial::one()).unwrap();
        assert!(matches!(pgf_moments(&improper), Err(Error::ImproperDistribution(_))));
        let pole = RationalFunction::new(Polynomial::monomial(1.0, 1), Polynomial::new(vec![1.0, -1.0])).unwrap();
        assert!(matches!(pgf_moments(&pole), Err(Error::PoleAtOne)));
    }

    #[test]
    fn reduce_cancels_common_factor() {
        let common = Polynomial::new(vec![1.0, -0.3]);
        let g = RationalFunction::new(
            &Polynomial::monomial(0.4, 1) * &common,
            &Polynomial::new(vec![1.0, -0.6]) * &common,
        )
        .unwrap()
        .reduce();
        assert_eq!(g.den().degree(), Some(1));
        assert!((g.num().coeff(1) - 0.4).abs() < 1e-12);
        assert!((g.den().coeff(1) + 0.6).abs() < 1e-12);
    }
}
