//! One-variable Laurent polynomials with exact integer coefficients.
//!
//! Jones polynomials of links live in t^(1/2); exponents here are stored
//! in half-units of the nominal variable, so a monomial exponent k in
//! variable t means t^(k/2) wherever a fractional power can occur.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    /// exponent -> coefficient, zero coefficients removed.
    coeffs: BTreeMap<i64, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::mono(0, 1)
    }

    pub fn mono(exp: i64, coeff: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if coeff != 0 {
            coeffs.insert(exp, coeff);
        }
        LaurentPoly { coeffs }
    }

    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.coeffs.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Exponent span (max - min).
    pub fn span(&self) -> Option<i64> {
        Some(self.max_exp()? - self.min_exp()?)
    }

    /// x^k * self.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    /// Substitute x -> x^-1.
    pub fn mirror(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (-e, c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluate at a Gaussian-integer unit base (1, -1, i or -i), exactly.
    pub fn eval_gaussian_unit(&self, re: i64, im: i64) -> (i64, i64) {
        assert_eq!(re * re + im * im, 1, "base must be a unit");
        let mul = |a: (i64, i64), b: (i64, i64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
        let unit_pow = |k: i64| -> (i64, i64) {
            let mut v = (1i64, 0i64);
            for _ in 0..k.rem_euclid(4) {
                v = mul(v, (re, im));
            }
            v
        };
        let mut acc = (0i64, 0i64);
        for (e, c) in self.terms() {
            let p = unit_pow(e);
            acc = (acc.0 + c * p.0, acc.1 + c * p.1);
        }
        acc
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e, -c)).collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " {} ", if c >= 0 { "+" } else { "-" })?;
            } else if c < 0 {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            if e == 0 {
                write!(f, "{a}")?;
            } else if a == 1 {
                write!(f, "x^{e}")?;
            } else {
                write!(f, "{a}*x^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Render with exponents in half-units of `var` (monomial k means var^(k/2)).
pub fn display_half_exponents(p: &LaurentPoly, var: &str) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    let mut first = true;
    for (e, c) in p.terms() {
        if !first {
            out.push_str(if c >= 0 { " + " } else { " - " });
        } else if c < 0 {
            out.push('-');
        }
        first = false;
        let a = c.abs();
        if e == 0 {
            out.push_str(&a.to_string());
            continue;
        }
        if a != 1 {
            out.push_str(&format!("{a}*"));
        }
        if e % 2 == 0 {
            out.push_str(&format!("{var}^{}", e / 2));
        } else {
            out.push_str(&format!("{var}^({e}/2)"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_normalization() {
        let p = LaurentPoly::from_terms(&[(2, 1), (-2, 1)]);
        let q = LaurentPoly::from_terms(&[(2, -1), (0, 3)]);
        let s = &p + &q;
        assert_eq!(s, LaurentPoly::from_terms(&[(-2, 1), (0, 3)]));
        let m = &p * &q;
        assert_eq!(
            m,
            LaurentPoly::from_terms(&[(4, -1), (2, 3), (0, -1), (-2, 3)])
        );
        assert_eq!(p.mirror(), p);
        assert!(LaurentPoly::from_terms(&[(1, 1), (1, -1)]).is_zero());
    }

    #[test]
    fn gaussian_evaluation() {
        // x^2 + 1 at x = i is 0.
        let p = LaurentPoly::from_terms(&[(2, 1), (0, 1)]);
        assert_eq!(p.eval_gaussian_unit(0, 1), (0, 0));
        // x^-1 at x = i is -i.
        let q = LaurentPoly::mono(-1, 1);
        assert_eq!(q.eval_gaussian_unit(0, 1), (0, -1));
        // 2x^3 + 1 at x = -1 is -1.
        let r = LaurentPoly::from_terms(&[(3, 2), (0, 1)]);
        assert_eq!(r.eval_gaussian_unit(-1, 0), (-1, 0));
    }
}
