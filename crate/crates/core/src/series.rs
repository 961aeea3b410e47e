//! Exact rationals and the truncated bivariate ring `Q[u,v]/(u^{cu+1}, v^{cv+1})`.
//!
//! Every equivariant class restricted to a fixed component `P^b x P^a` is
//! represented here after the torus weights have been substituted as
//! integers: `u` is the hyperplane class of the `P^b` factor and `v` the one
//! of the `P^a` factor. A cap of zero makes the variable identically zero,
//! which is how point factors are modelled.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept reduced with a positive denominator.
pub type Rational = BigRational;

/// Builds a [`Rational`] from a machine integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("cap mismatch: left operand has caps {left:?}, right operand has caps {right:?}")]
    CapMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("series has zero constant term and is not a unit")]
    NonUnit,
    #[error("index u^{i} v^{j} outside caps ({cap_u}, {cap_v})")]
    IndexOutOfRange {
        i: usize,
        j: usize,
        cap_u: usize,
        cap_v: usize,
    },
}

/// `coeff_u * u + coeff_v * v + constant`, stored exactly as given.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    pub coeff_u: Rational,
    pub coeff_v: Rational,
    pub constant: Rational,
}

impl LinearForm {
    pub fn new(coeff_u: Rational, coeff_v: Rational, constant: Rational) -> Self {
        Self {
            coeff_u,
            coeff_v,
            constant,
        }
    }

    pub fn from_ints(coeff_u: i64, coeff_v: i64, constant: i64) -> Self {
        Self::new(rat(coeff_u), rat(coeff_v), rat(constant))
    }

    pub fn constant(c: i64) -> Self {
        Self::from_ints(0, 0, c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff_u.is_zero() && self.coeff_v.is_zero() && self.constant.is_zero()
    }

    /// Drops the variables that vanish on a component with the given caps.
    pub fn restrict_to_caps(&self, cap_u: usize, cap_v: usize) -> Self {
        Self {
            coeff_u: if cap_u == 0 {
                Rational::zero()
            } else {
                self.coeff_u.clone()
            },
            coeff_v: if cap_v == 0 {
                Rational::zero()
            } else {
                self.coeff_v.clone()
            },
            constant: self.constant.clone(),
        }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, var) in [
            (&self.coeff_u, Some("u")),
            (&self.coeff_v, Some("v")),
            (&self.constant, None),
        ] {
            if c.is_zero() {
                continue;
            }
            write_term(f, c, var, first)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn write_term(
    f: &mut fmt::Formatter<'_>,
    c: &Rational,
    monomial: Option<&str>,
    first: bool,
) -> fmt::Result {
    let sign = if c.is_negative() { "-" } else { "+" };
    if first {
        if c.is_negative() {
            write!(f, "-")?;
        }
    } else {
        write!(f, " {sign} ")?;
    }
    let abs = c.abs();
    match monomial {
        Some(m) if abs.is_one() => write!(f, "{m}"),
        Some(m) => write!(f, "{abs}*{m}"),
        None => write!(f, "{abs}"),
    }
}

/// Element of `Q[u,v]/(u^{cap_u+1}, v^{cap_v+1})` with a dense coefficient grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    cap_u: usize,
    cap_v: usize,
    // row-major: coefficient of u^i v^j lives at i * (cap_v + 1) + j
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    pub fn zero(cap_u: usize, cap_v: usize) -> Self {
        Self {
            cap_u,
            cap_v,
            coeffs: vec![Rational::zero(); (cap_u + 1) * (cap_v + 1)],
        }
    }

    pub fn constant(c: Rational, cap_u: usize, cap_v: usize) -> Self {
        let mut s = Self::zero(cap_u, cap_v);
        s.coeffs[0] = c;
        s
    }

    pub fn one(cap_u: usize, cap_v: usize) -> Self {
        Self::constant(Rational::one(), cap_u, cap_v)
    }

    pub fn from_linear_form(form: &LinearForm, cap_u: usize, cap_v: usize) -> Self {
        let mut s = Self::constant(form.constant.clone(), cap_u, cap_v);
        if cap_u >= 1 {
            let k = s.index(1, 0);
            s.coeffs[k] = form.coeff_u.clone();
        }
        if cap_v >= 1 {
            let k = s.index(0, 1);
            s.coeffs[k] = form.coeff_v.clone();
        }
        s
    }

    /// Builds a series from `(i, j, coefficient)` triples; terms beyond the caps are discarded.
    pub fn from_terms<I>(cap_u: usize, cap_v: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut s = Self::zero(cap_u, cap_v);
        for (i, j, c) in terms {
            if i <= cap_u && j <= cap_v {
                let k = s.index(i, j);
                s.coeffs[k] += c;
            }
        }
        s
    }

    pub fn caps(&self) -> (usize, usize) {
        (self.cap_u, self.cap_v)
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> usize {
        i * (self.cap_v + 1) + j
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> &Rational {
        &self.coeffs[self.index(i, j)]
    }

    /// Exact coefficient of `u^i v^j`.
    pub fn coefficient(&self, i: usize, j: usize) -> Result<Rational, SeriesError> {
        if i > self.cap_u || j > self.cap_v {
            return Err(SeriesError::IndexOutOfRange {
                i,
                j,
                cap_u: self.cap_u,
                cap_v: self.cap_v,
            });
        }
        Ok(self.at(i, j).clone())
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    /// Nonzero terms as `(i, j, coefficient)`, in row-major order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        let w = self.cap_v + 1;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (k / w, k % w, c))
    }

    fn check_caps(&self, other: &Self) -> Result<(), SeriesError> {
        if self.caps() != other.caps() {
            return Err(SeriesError::CapMismatch {
                left: self.caps(),
                right: other.caps(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_caps(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { coeffs, ..*self })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_caps(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self { coeffs, ..*self })
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            ..*self
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            ..*self
        }
    }

    /// Truncated product: terms with u-degree above `cap_u` or v-degree above `cap_v` vanish.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_caps(other)?;
        let mut out = Self::zero(self.cap_u, self.cap_v);
        for i in 0..=self.cap_u {
            for j in 0..=self.cap_v {
                let a = self.at(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..=(self.cap_u - i) {
                    for l in 0..=(self.cap_v - j) {
                        let b = other.at(k, l);
                        if b.is_zero() {
                            continue;
                        }
                        let idx = out.index(i + k, j + l);
                        out.coeffs[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse, solved coefficient by coefficient in degree order.
    pub fn inverse(&self) -> Result<Self, SeriesError> {
        if !self.is_unit() {
            return Err(SeriesError::NonUnit);
        }
        let inv_c = self.coeffs[0].recip();
        let mut y = Self::zero(self.cap_u, self.cap_v);
        y.coeffs[0] = inv_c.clone();
        for i in 0..=self.cap_u {
            for j in 0..=self.cap_v {
                if i == 0 && j == 0 {
                    continue;
                }
                // x_{00} y_{ij} + sum_{(k,l) != (0,0)} x_{kl} y_{i-k, j-l} = 0
                let mut acc = Rational::zero();
                for k in 0..=i {
                    for l in 0..=j {
                        if k == 0 && l == 0 {
                            continue;
                        }
                        let x = self.at(k, l);
                        if x.is_zero() {
                            continue;
                        }
                        acc += x * y.at(i - k, j - l);
                    }
                }
                let idx = y.index(i, j);
                y.coeffs[idx] = -(acc * &inv_c);
            }
        }
        Ok(y)
    }

    /// `self^e` for any signed exponent; negative exponents require a unit.
    pub fn pow(&self, e: i64) -> Result<Self, SeriesError> {
        if e < 0 {
            return Ok(self.inverse()?.pow_unsigned(e.unsigned_abs()));
        }
        Ok(self.pow_unsigned(e as u64))
    }

    fn pow_unsigned(&self, mut e: u64) -> Self {
        let mut acc = Self::one(self.cap_u, self.cap_v);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base).expect("caps agree");
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base).expect("caps agree");
            }
        }
        acc
    }

    /// Image under the projection onto smaller caps.
    pub fn truncate(&self, cap_u: usize, cap_v: usize) -> Result<Self, SeriesError> {
        if cap_u > self.cap_u || cap_v > self.cap_v {
            return Err(SeriesError::CapMismatch {
                left: self.caps(),
                right: (cap_u, cap_v),
            });
        }
        let mut out = Self::zero(cap_u, cap_v);
        for i in 0..=cap_u {
            for j in 0..=cap_v {
                let idx = out.index(i, j);
                out.coeffs[idx] = self.at(i, j).clone();
            }
        }
        Ok(out)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, j, c) in self.terms() {
            let mono = match (i, j) {
                (0, 0) => None,
                (i, 0) => Some(power("u", i)),
                (0, j) => Some(power("v", j)),
                (i, j) => Some(format!("{}*{}", power("u", i), power("v", j))),
            };
            write_term(f, c, mono.as_deref(), first)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn power(var: &str, e: usize) -> String {
    if e == 1 {
        var.to_string()
    } else {
        format!("{var}^{e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(cu: usize, cv: usize, terms: &[(usize, usize, i64)]) -> TruncatedSeries {
        TruncatedSeries::from_terms(cu, cv, terms.iter().map(|&(i, j, c)| (i, j, rat(c))))
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn add_examples() {
        let x = s(1, 0, &[(0, 0, 1), (1, 0, 1)]);
        let y = s(1, 0, &[(0, 0, 1), (1, 0, -1)]);
        assert_eq!(x.checked_add(&y).unwrap(), s(1, 0, &[(0, 0, 2)]));
        assert_eq!(x.checked_add(&TruncatedSeries::zero(1, 0)).unwrap(), x);

        let a = s(1, 1, &[(1, 0, 1), (0, 1, 1)]);
        let b = s(1, 1, &[(1, 1, 1)]);
        assert_eq!(
            a.checked_add(&b).unwrap(),
            s(1, 1, &[(1, 0, 1), (0, 1, 1), (1, 1, 1)])
        );
    }

    #[test]
    fn cap_mismatch_is_rejected() {
        let x = TruncatedSeries::one(1, 0);
        let y = TruncatedSeries::one(0, 1);
        assert!(matches!(
            x.checked_add(&y),
            Err(SeriesError::CapMismatch { .. })
        ));
        assert!(matches!(
            x.checked_mul(&y),
            Err(SeriesError::CapMismatch { .. })
        ));
    }

    #[test]
    fn mul_examples() {
        let u = s(1, 0, &[(1, 0, 1)]);
        assert!(u.checked_mul(&u).unwrap().is_zero());

        let p = s(2, 0, &[(0, 0, 1), (1, 0, 1)]);
        let m = s(2, 0, &[(0, 0, 1), (1, 0, -1)]);
        assert_eq!(
            p.checked_mul(&m).unwrap(),
            s(2, 0, &[(0, 0, 1), (2, 0, -1)])
        );

        let uv = s(1, 1, &[(1, 0, 1), (0, 1, 1)]);
        assert_eq!(uv.checked_mul(&uv).unwrap(), s(1, 1, &[(1, 1, 2)]));
    }

    #[test]
    fn inverse_examples() {
        let x = s(2, 0, &[(0, 0, 1), (1, 0, -1)]);
        assert_eq!(
            x.inverse().unwrap(),
            s(2, 0, &[(0, 0, 1), (1, 0, 1), (2, 0, 1)])
        );

        let two = TruncatedSeries::constant(rat(2), 0, 0);
        assert_eq!(two.inverse().unwrap().constant_term(), &q(1, 2));

        // (1+u+v)(c00 + c10 u + c01 v + c11 uv) = 1 solved by hand:
        // c00 = 1, c10 = -1, c01 = -1, c11 = -(c10 + c01) = 2.
        let y = s(1, 1, &[(0, 0, 1), (1, 0, 1), (0, 1, 1)]);
        assert_eq!(
            y.inverse().unwrap(),
            s(1, 1, &[(0, 0, 1), (1, 0, -1), (0, 1, -1), (1, 1, 2)])
        );
    }

    #[test]
    fn inverse_of_non_unit_fails() {
        let u = s(2, 1, &[(1, 0, 1), (0, 1, 3)]);
        assert_eq!(u.inverse(), Err(SeriesError::NonUnit));
        assert_eq!(u.pow(-1), Err(SeriesError::NonUnit));
        // positive powers of a non-unit are fine, and nilpotent past total degree 3
        assert_eq!(u.pow(3).unwrap(), s(2, 1, &[(2, 1, 9)]));
        assert!(u.pow(4).unwrap().is_zero());
    }

    #[test]
    fn pow_examples() {
        let x = s(2, 0, &[(0, 0, 1), (1, 0, 1)]);
        assert_eq!(
            x.pow(-2).unwrap(),
            s(2, 0, &[(0, 0, 1), (1, 0, -2), (2, 0, 3)])
        );
        assert_eq!(x.pow(0).unwrap(), TruncatedSeries::one(2, 0));
    }

    #[test]
    fn bridge_identity_cubic_over_square() {
        // (c+u)^3 (c+u-v)^{-2} = u + 2v + c  mod (u^3, v^2), for several c != 0.
        for c in [-7, -1, 1, 2, 5] {
            let a = TruncatedSeries::from_linear_form(&LinearForm::from_ints(1, 0, c), 2, 1);
            let b = TruncatedSeries::from_linear_form(&LinearForm::from_ints(1, -1, c), 2, 1);
            let lhs = a.pow(3).unwrap().checked_mul(&b.pow(-2).unwrap()).unwrap();
            let rhs = TruncatedSeries::from_linear_form(&LinearForm::from_ints(1, 2, c), 2, 1);
            assert_eq!(lhs, rhs, "c = {c}");
        }
    }

    #[test]
    fn coefficient_examples() {
        let x = s(1, 1, &[(0, 0, 1), (1, 0, 3), (1, 1, 5)]);
        assert_eq!(x.coefficient(1, 1).unwrap(), rat(5));
        assert_eq!(
            TruncatedSeries::one(1, 0).coefficient(1, 0).unwrap(),
            rat(0)
        );
        let g = s(3, 0, &[(0, 0, 1), (1, 0, -1)]).pow(-1).unwrap();
        assert_eq!(g.coefficient(3, 0).unwrap(), rat(1));
        assert!(matches!(
            x.coefficient(2, 0),
            Err(SeriesError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn display_is_readable() {
        let x = s(2, 1, &[(0, 0, -3), (1, 0, 1), (1, 1, -2), (2, 0, 1)]);
        assert_eq!(x.to_string(), "-3 + u - 2*u*v + u^2");
        assert_eq!(TruncatedSeries::zero(1, 1).to_string(), "0");
        assert_eq!(LinearForm::from_ints(-1, 1, -3).to_string(), "-u + v - 3");
    }

    fn series_strategy(cu: usize, cv: usize) -> impl Strategy<Value = TruncatedSeries> {
        proptest::collection::vec(-9i64..=9, (cu + 1) * (cv + 1)).prop_map(move |cs| {
            TruncatedSeries::from_terms(
                cu,
                cv,
                cs.into_iter()
                    .enumerate()
                    .map(move |(k, c)| (k / (cv + 1), k % (cv + 1), rat(c))),
            )
        })
    }

    fn triple() -> impl Strategy<Value = (TruncatedSeries, TruncatedSeries, TruncatedSeries)> {
        (0usize..=3, 0usize..=3).prop_flat_map(|(cu, cv)| {
            (
                series_strategy(cu, cv),
                series_strategy(cu, cv),
                series_strategy(cu, cv),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_laws((x, y, z) in triple()) {
            let xy = x.checked_mul(&y).unwrap();
            prop_assert_eq!(&xy, &y.checked_mul(&x).unwrap());
            prop_assert_eq!(
                xy.checked_mul(&z).unwrap(),
                x.checked_mul(&y.checked_mul(&z).unwrap()).unwrap()
            );
            prop_assert_eq!(
                x.checked_mul(&y.checked_add(&z).unwrap()).unwrap(),
                xy.checked_add(&x.checked_mul(&z).unwrap()).unwrap()
            );
            prop_assert!(x.checked_sub(&x).unwrap().is_zero());
        }

        #[test]
        fn unit_times_inverse_is_one((x, _, _) in triple(), c in 1i64..=9) {
            let (cu, cv) = x.caps();
            let unit = x.checked_add(&TruncatedSeries::constant(rat(c) - x.constant_term(), cu, cv)).unwrap();
            let inv = unit.inverse().unwrap();
            prop_assert_eq!(unit.checked_mul(&inv).unwrap(), TruncatedSeries::one(cu, cv));
        }

        #[test]
        fn power_law((x, _, _) in triple(), a in -3i64..=3, b in -3i64..=3) {
            let (cu, cv) = x.caps();
            let unit = x.checked_add(&TruncatedSeries::constant(rat(1) - x.constant_term(), cu, cv)).unwrap();
            prop_assert_eq!(
                unit.pow(a + b).unwrap(),
                unit.pow(a).unwrap().checked_mul(&unit.pow(b).unwrap()).unwrap()
            );
        }

        #[test]
        fn truncation_is_a_homomorphism((x, y, _) in triple(), du in 0usize..=3, dv in 0usize..=3) {
            let (cu, cv) = x.caps();
            let (tu, tv) = (cu.min(du), cv.min(dv));
            let big = x.checked_mul(&y).unwrap().truncate(tu, tv).unwrap();
            let small = x.truncate(tu, tv).unwrap().checked_mul(&y.truncate(tu, tv).unwrap()).unwrap();
            prop_assert_eq!(big, small);
        }
    }
}
