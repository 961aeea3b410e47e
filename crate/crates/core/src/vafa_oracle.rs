//! Vafa–Intriligator evaluation of genus-0 invariants of `G(k, n)`.
//!
//! For insertions `σ_{a_1} ... σ_{a_N}` (elementary symmetric classes of the
//! dual tautological bundle) satisfying `Σ a_i = k(n-k) + n d`,
//!
//! ```text
//! <σ_{a_1} ... σ_{a_N}>_d = (-1)^d n^{-k} Σ_{I} Π_m σ_{a_m}(x_I) Π_{j≠l} (x_j - x_l) / Π_j x_j^{n-1}
//! ```
//!
//! where `I` runs over the k-element subsets of the `n` solutions of
//! `x^n = (-1)^k`. Those solutions are `ζ^i` with `ζ = e^{2πi/n}`, `i = 1..n`
//! when `k` is even and `ζ = e^{πi/n}`, `i = 1, 3, .., 2n-1` when `k` is odd.
//! The factor `(-1)^d` accounts for evaluating at quantum parameter `q = -1`.
//!
//! Whenever `ζ` lies in `Q(i)` (notably `G(2,4)`, where `ζ = i`) the sum is
//! evaluated exactly over the Gaussian rationals. Otherwise a fixed-point
//! big-integer complex type is used and the result is rounded, with a
//! precision retry loop.

use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::series::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VIError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error(
        "selection rule violated: insertions sum to {actual}, expected k(n-k) + n d = {expected}"
    )]
    SelectionRule { expected: i64, actual: i64 },
    #[error("result not within 1e-6 of an integer even at {bits} bits (re ~ {re}, im ~ {im})")]
    Precision { bits: u32, re: f64, im: f64 },
    #[error("exact evaluation produced non-integral value {0}")]
    NonIntegral(Box<GaussianRational>),
}

/// Arithmetic needed by the root-of-unity sum.
pub trait ComplexScalar: Clone + fmt::Debug {
    type Context: Copy;
    fn zero(ctx: Self::Context) -> Self;
    fn one(ctx: Self::Context) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;

    fn pow(&self, mut e: u64, ctx: Self::Context) -> Self {
        let mut acc = Self::one(ctx);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Exact element `re + im i` of `Q(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(rat(re), rat(im))
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }
}

impl ComplexScalar for GaussianRational {
    type Context = ();

    fn zero(_: ()) -> Self {
        Self::from_ints(0, 0)
    }

    fn one(_: ()) -> Self {
        Self::from_ints(1, 0)
    }

    fn add(&self, o: &Self) -> Self {
        Self::new(&self.re + &o.re, &self.im + &o.im)
    }

    fn sub(&self, o: &Self) -> Self {
        Self::new(&self.re - &o.re, &self.im - &o.im)
    }

    fn mul(&self, o: &Self) -> Self {
        Self::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    fn neg(&self) -> Self {
        Self::new(-self.re.clone(), -self.im.clone())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

/// Fixed-point complex number `(re + im i) / 2^bits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloatComplex {
    pub re: BigInt,
    pub im: BigInt,
    pub bits: u32,
}

impl FloatComplex {
    fn scale(bits: u32) -> BigInt {
        BigInt::one() << bits
    }

    /// `e^{iθ}` with `θ = π num / den`, accurate to about `2^{-bits}`.
    pub fn unit_root(num: i64, den: i64, bits: u32) -> Self {
        const GUARD: u32 = 48;
        let wb = bits + GUARD;
        let one = Self::scale(wb);
        let theta = (fixed_pi(wb) * BigInt::from(num.rem_euclid(2 * den))) / BigInt::from(den);
        let theta2 = (&theta * &theta) >> wb;
        // cos: Σ (-1)^k θ^{2k}/(2k)!, sin: Σ (-1)^k θ^{2k+1}/(2k+1)!
        let mut cos = BigInt::zero();
        let mut sin = BigInt::zero();
        let mut term_c = one.clone();
        let mut term_s = theta;
        let mut k: i64 = 0;
        while !term_c.is_zero() || !term_s.is_zero() {
            if k % 2 == 0 {
                cos += &term_c;
                sin += &term_s;
            } else {
                cos -= &term_c;
                sin -= &term_s;
            }
            term_c = ((&term_c * &theta2) >> wb) / BigInt::from((2 * k + 1) * (2 * k + 2));
            term_s = ((&term_s * &theta2) >> wb) / BigInt::from((2 * k + 2) * (2 * k + 3));
            k += 1;
        }
        Self {
            re: cos >> GUARD,
            im: sin >> GUARD,
            bits,
        }
    }

    fn div_int(&self, n: &BigInt) -> Self {
        Self {
            re: &self.re / n,
            im: &self.im / n,
            bits: self.bits,
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (
            fixed_to_f64(&self.re, self.bits),
            fixed_to_f64(&self.im, self.bits),
        )
    }
}

fn fixed_to_f64(x: &BigInt, bits: u32) -> f64 {
    let shift = bits.saturating_sub(60);
    let top: i128 = (x >> shift).try_into().unwrap_or(if x.is_negative() {
        i128::MIN
    } else {
        i128::MAX
    });
    top as f64 / 2f64.powi((bits - shift) as i32)
}

/// `atan(1/x)` in fixed point with `bits` fractional bits.
fn fixed_atan_inv(x: i64, bits: u32) -> BigInt {
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = (BigInt::one() << bits) / &x;
    let mut sum = BigInt::zero();
    let mut k: i64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

/// π via Machin's formula.
fn fixed_pi(bits: u32) -> BigInt {
    const GUARD: u32 = 16;
    let b = bits + GUARD;
    (BigInt::from(16) * fixed_atan_inv(5, b) - BigInt::from(4) * fixed_atan_inv(239, b)) >> GUARD
}

impl ComplexScalar for FloatComplex {
    type Context = u32;

    fn zero(bits: u32) -> Self {
        Self {
            re: BigInt::zero(),
            im: BigInt::zero(),
            bits,
        }
    }

    fn one(bits: u32) -> Self {
        Self {
            re: Self::scale(bits),
            im: BigInt::zero(),
            bits,
        }
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
            bits: self.bits,
        }
    }

    fn sub(&self, o: &Self) -> Self {
        Self {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
            bits: self.bits,
        }
    }

    fn mul(&self, o: &Self) -> Self {
        Self {
            re: (&self.re * &o.re - &self.im * &o.im) >> self.bits,
            im: (&self.re * &o.im + &self.im * &o.re) >> self.bits,
            bits: self.bits,
        }
    }

    fn neg(&self) -> Self {
        Self {
            re: -self.re.clone(),
            im: -self.im.clone(),
            bits: self.bits,
        }
    }
}

/// `ζ`, exact when it lies in `Q(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplexValue {
    Exact(GaussianRational),
    Float(FloatComplex),
}

/// Exact `ζ` for the cases where it is a Gaussian rational.
fn exact_primitive_root(k: u32, n: u32) -> Option<GaussianRational> {
    match (k.is_multiple_of(2), n) {
        (_, 1) if k % 2 == 1 => Some(GaussianRational::from_ints(-1, 0)),
        (true, 1) => Some(GaussianRational::from_ints(1, 0)),
        (true, 2) => Some(GaussianRational::from_ints(-1, 0)),
        (true, 4) => Some(GaussianRational::i()),
        (false, 2) => Some(GaussianRational::i()),
        _ => None,
    }
}

/// Primitive root of `x^n = (-1)^k`: `e^{2πi/n}` for even `k`, `e^{πi/n}` for odd `k`.
pub fn primitive_root(k: u32, n: u32, precision_bits: u32) -> ComplexValue {
    match exact_primitive_root(k, n) {
        Some(z) => ComplexValue::Exact(z),
        None => {
            let num = if k.is_multiple_of(2) { 2 } else { 1 };
            ComplexValue::Float(FloatComplex::unit_root(num, n as i64, precision_bits))
        }
    }
}

/// Exponents `i` with `ζ^i` running over all solutions of `x^n = (-1)^k`.
fn root_exponents(k: u32, n: u32) -> Vec<i64> {
    let n = n as i64;
    if k.is_multiple_of(2) {
        (1..=n).collect()
    } else {
        (1..=n).map(|m| 2 * m - 1).collect()
    }
}

/// `e_0, .., e_len` of the inputs, by the standard recurrence.
pub fn elementary_symmetric_all<S: ComplexScalar>(values: &[S], ctx: S::Context) -> Vec<S> {
    let mut e = vec![S::zero(ctx); values.len() + 1];
    e[0] = S::one(ctx);
    for (m, x) in values.iter().enumerate() {
        for t in (1..=m + 1).rev() {
            e[t] = e[t].add(&e[t - 1].mul(x));
        }
    }
    e
}

/// `e_r` of the inputs.
pub fn elementary_symmetric<S: ComplexScalar>(r: usize, values: &[S], ctx: S::Context) -> S {
    assert!(r <= values.len(), "e_{r} of {} values", values.len());
    elementary_symmetric_all(values, ctx).swap_remove(r)
}

/// A correlator `<σ_{a_1} ... σ_{a_N}>_d` on `G(k, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VIQuery {
    pub k: u32,
    pub n: u32,
    pub d: u32,
    pub insertions: Vec<u32>,
}

impl VIQuery {
    pub fn new(k: u32, n: u32, d: u32, insertions: Vec<u32>) -> Result<Self, VIError> {
        let q = Self {
            k,
            n,
            d,
            insertions,
        };
        q.validate()?;
        Ok(q)
    }

    /// `Σ a_i` required for a nonzero correlator.
    pub fn expected_sum(k: u32, n: u32, d: u32) -> i64 {
        k as i64 * (n as i64 - k as i64) + n as i64 * d as i64
    }

    pub fn validate(&self) -> Result<(), VIError> {
        if self.k < 1 {
            return Err(VIError::InvalidQuery("k must be at least 1".into()));
        }
        if self.n <= self.k {
            return Err(VIError::InvalidQuery(format!(
                "n must exceed k (got k = {}, n = {})",
                self.k, self.n
            )));
        }
        if let Some(a) = self.insertions.iter().find(|&&a| a > self.k) {
            return Err(VIError::InvalidQuery(format!(
                "insertion {a} exceeds k = {}",
                self.k
            )));
        }
        let expected = Self::expected_sum(self.k, self.n, self.d);
        let actual: i64 = self.insertions.iter().map(|&a| a as i64).sum();
        if actual != expected {
            return Err(VIError::SelectionRule { expected, actual });
        }
        Ok(())
    }

    /// `<σ_1^{4d+4}>_d` on `G(2,4)`.
    pub fn plucker(d: u32) -> Self {
        Self {
            k: 2,
            n: 4,
            d,
            insertions: vec![1; 4 * d as usize + 4],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VIOptions {
    pub precision_bits: u32,
    pub max_precision_bits: u32,
    /// Use the fixed-point path even when an exact one exists.
    pub force_float: bool,
    /// Evaluate at `conj(ζ)` instead of `ζ`; the invariant must not change.
    pub conjugate: bool,
}

impl Default for VIOptions {
    fn default() -> Self {
        Self {
            precision_bits: 128,
            max_precision_bits: 1024,
            force_float: false,
            conjugate: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvaluationPath {
    Exact,
    Float { precision_bits: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VIResult {
    pub value: BigInt,
    pub path: EvaluationPath,
}

/// Root-of-unity sum without the `(-1)^d n^{-k}` prefactor.
fn root_sum<S: ComplexScalar>(q: &VIQuery, roots: &[S], ctx: S::Context) -> S {
    let k = q.k as usize;
    let mut counts = vec![0u64; k + 1];
    for &a in &q.insertions {
        counts[a as usize] += 1;
    }
    // x^n = (-1)^k gives 1 / x^{n-1} = (-1)^k x
    let odd_k = q.k % 2 == 1;

    let mut total = S::zero(ctx);
    for subset in roots.iter().combinations(k) {
        let xs: Vec<S> = subset.into_iter().cloned().collect();
        let e = elementary_symmetric_all(&xs, ctx);
        let mut term = S::one(ctx);
        for (a, &c) in counts.iter().enumerate() {
            if c > 0 {
                term = term.mul(&e[a].pow(c, ctx));
            }
        }
        for (j, xj) in xs.iter().enumerate() {
            for (l, xl) in xs.iter().enumerate() {
                if j != l {
                    term = term.mul(&xj.sub(xl));
                }
            }
            term = term.mul(xj);
            if odd_k {
                term = term.neg();
            }
        }
        total = total.add(&term);
    }
    total
}

fn exact_invariant(q: &VIQuery, zeta: GaussianRational) -> Result<BigInt, VIError> {
    let roots: Vec<GaussianRational> = root_exponents(q.k, q.n)
        .into_iter()
        .map(|i| zeta.pow(i as u64, ()))
        .collect();
    let sum = root_sum(q, &roots, ());
    let mut scale = Rational::one() / Rational::from_integer(BigInt::from(q.n).pow(q.k));
    if q.d % 2 == 1 {
        scale = -scale;
    }
    let re = sum.re * &scale;
    let im = sum.im * &scale;
    if !im.is_zero() || !re.is_integer() {
        return Err(VIError::NonIntegral(Box::new(GaussianRational::new(
            re, im,
        ))));
    }
    Ok(re.to_integer())
}

fn float_invariant(q: &VIQuery, bits: u32, conjugate: bool) -> Result<BigInt, VIError> {
    let num_step = if q.k.is_multiple_of(2) { 2 } else { 1 };
    let sign = if conjugate { -1 } else { 1 };
    let roots: Vec<FloatComplex> = root_exponents(q.k, q.n)
        .into_iter()
        .map(|i| FloatComplex::unit_root(sign * num_step * i, q.n as i64, bits))
        .collect();
    let mut sum = root_sum(q, &roots, bits).div_int(&BigInt::from(q.n).pow(q.k));
    if q.d % 2 == 1 {
        sum = sum.neg();
    }
    let unit = BigInt::one() << bits;
    let half = BigInt::one() << (bits - 1);
    let rounded = (&sum.re + &half).div_floor(&unit);
    let residual = &sum.re - &rounded * &unit;
    let million = BigInt::from(1_000_000);
    if residual.abs() * &million >= unit || sum.im.abs() * &million >= unit {
        let (re, im) = sum.to_f64_pair();
        return Err(VIError::Precision { bits, re, im });
    }
    Ok(rounded)
}

/// Evaluates the correlator with default options.
pub fn vi_invariant(q: &VIQuery) -> Result<VIResult, VIError> {
    vi_invariant_with(q, &VIOptions::default())
}

pub fn vi_invariant_with(q: &VIQuery, opts: &VIOptions) -> Result<VIResult, VIError> {
    q.validate()?;
    if !opts.force_float {
        if let Some(z) = exact_primitive_root(q.k, q.n) {
            let z = if opts.conjugate { z.conj() } else { z };
            return Ok(VIResult {
                value: exact_invariant(q, z)?,
                path: EvaluationPath::Exact,
            });
        }
    }
    let mut bits = opts.precision_bits.max(2);
    loop {
        match float_invariant(q, bits, opts.conjugate) {
            Ok(value) => {
                return Ok(VIResult {
                    value,
                    path: EvaluationPath::Float {
                        precision_bits: bits,
                    },
                })
            }
            Err(e @ VIError::Precision { .. }) if bits >= opts.max_precision_bits => return Err(e),
            Err(VIError::Precision { .. }) => bits = (bits * 2).min(opts.max_precision_bits),
            Err(e) => return Err(e),
        }
    }
}

/// `<σ_1^{4d+4}>_d` on `G(2,4)`, evaluated exactly.
pub fn vi_plucker_degree(d: u32) -> Result<BigInt, VIError> {
    vi_invariant(&VIQuery::plucker(d)).map(|r| r.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    fn close(z: &FloatComplex, re: f64, im: f64) -> bool {
        let (a, b) = z.to_f64_pair();
        (a - re).abs() < 1e-12 && (b - im).abs() < 1e-12
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(2, 4, 64), ComplexValue::Exact(g(0, 1)));
        assert_eq!(primitive_root(1, 2, 64), ComplexValue::Exact(g(0, 1)));
        let ComplexValue::Float(z) = primitive_root(2, 3, 64) else {
            panic!("expected float root");
        };
        let t = 2.0 * std::f64::consts::PI / 3.0;
        assert!(close(&z, t.cos(), t.sin()));
        // ζ^n = (-1)^k
        let ComplexValue::Float(z) = primitive_root(3, 5, 96) else {
            panic!("expected float root");
        };
        assert!(close(&z.pow(5, 96), -1.0, 0.0));
    }

    #[test]
    fn pi_is_accurate() {
        let pi = fixed_pi(200);
        assert!((fixed_to_f64(&pi, 200) - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn elementary_symmetric_examples() {
        let (x, y) = (g(2, 1), g(-3, 5));
        assert_eq!(
            elementary_symmetric(1, &[x.clone(), y.clone()], ()),
            x.add(&y)
        );
        assert_eq!(elementary_symmetric(0, &[x, y], ()), g(1, 0));
        assert_eq!(
            elementary_symmetric::<GaussianRational>(0, &[], ()),
            g(1, 0)
        );
        assert_eq!(elementary_symmetric(2, &[g(0, 1), g(0, -1)], ()), g(1, 0));
    }

    #[test]
    fn plucker_degrees_are_exact() {
        for (d, expected) in [(0u32, 2i64), (1, 8), (3, 128), (5, 2048)] {
            let r = vi_invariant(&VIQuery::plucker(d)).unwrap();
            assert_eq!(r.value, BigInt::from(expected), "d = {d}");
            assert_eq!(r.path, EvaluationPath::Exact);
        }
    }

    #[test]
    fn index_range_calibration_degree_one_is_eight() {
        assert_eq!(vi_plucker_degree(1).unwrap(), BigInt::from(8));
    }

    #[test]
    fn conjugate_root_gives_same_invariant() {
        let opts = VIOptions {
            conjugate: true,
            ..VIOptions::default()
        };
        for d in 0..=4 {
            let q = VIQuery::plucker(d);
            assert_eq!(
                vi_invariant_with(&q, &opts).unwrap().value,
                vi_invariant(&q).unwrap().value
            );
        }
    }

    #[test]
    fn float_path_agrees_with_exact_path() {
        let opts = VIOptions {
            force_float: true,
            ..VIOptions::default()
        };
        for d in 0..=3 {
            let q = VIQuery::plucker(d);
            let r = vi_invariant_with(&q, &opts).unwrap();
            assert_eq!(
                r.path,
                EvaluationPath::Float {
                    precision_bits: 128
                }
            );
            assert_eq!(r.value, vi_invariant(&q).unwrap().value);
        }
    }

    #[test]
    fn classical_grassmannian_degrees() {
        // deg G(k,n) = (k(n-k))! Π_{i<k} i! / Π_{i<k} (n-k+i)!
        for (k, n, deg) in [
            (1, 3, 1),
            (2, 4, 2),
            (2, 5, 5),
            (3, 5, 5),
            (2, 6, 14),
            (3, 6, 42),
        ] {
            let q = VIQuery::new(k, n, 0, vec![1; (k * (n - k)) as usize]).unwrap();
            assert_eq!(
                vi_invariant(&q).unwrap().value,
                BigInt::from(deg),
                "G({k},{n})"
            );
        }
    }

    #[test]
    fn projective_line_counts() {
        // on P^{n-1}, H^{n-1+nd} = q^d H^{n-1}, so the correlator is 1 for every d
        for n in [2u32, 3, 4, 5] {
            for d in 0..=2 {
                let q = VIQuery::new(1, n, d, vec![1; (n - 1 + n * d) as usize]).unwrap();
                assert_eq!(
                    vi_invariant(&q).unwrap().value,
                    BigInt::one(),
                    "n = {n}, d = {d}"
                );
            }
        }
    }

    #[test]
    fn insertion_order_is_irrelevant() {
        let a = VIQuery::new(2, 5, 1, vec![2, 2, 1, 2, 2, 2]).unwrap();
        let b = VIQuery::new(2, 5, 1, vec![1, 2, 2, 2, 2, 2]).unwrap();
        assert_eq!(vi_invariant(&a).unwrap(), vi_invariant(&b).unwrap());
        let c = VIQuery::new(2, 4, 1, vec![2, 1, 1, 1, 1, 2]).unwrap();
        let e = VIQuery::new(2, 4, 1, vec![1, 1, 2, 1, 2, 1]).unwrap();
        assert_eq!(
            vi_invariant(&c).unwrap().value,
            vi_invariant(&e).unwrap().value
        );
    }

    #[test]
    fn selection_rule_is_enforced() {
        let err = VIQuery::new(2, 4, 1, vec![1; 7]).unwrap_err();
        assert_eq!(
            err,
            VIError::SelectionRule {
                expected: 8,
                actual: 7
            }
        );
        assert!(matches!(
            VIQuery::new(2, 4, 0, vec![3, 1]),
            Err(VIError::InvalidQuery(_))
        ));
        assert!(matches!(
            VIQuery::new(4, 4, 0, vec![]),
            Err(VIError::InvalidQuery(_))
        ));
    }

    #[test]
    fn low_precision_is_retried() {
        let q = VIQuery::new(2, 5, 0, vec![1; 6]).unwrap();
        let opts = VIOptions {
            precision_bits: 4,
            ..VIOptions::default()
        };
        let r = vi_invariant_with(&q, &opts).unwrap();
        assert_eq!(r.value, BigInt::from(5));
        match r.path {
            EvaluationPath::Float { precision_bits } => assert!(precision_bits > 4),
            other => panic!("unexpected path {other:?}"),
        }
        let capped = VIOptions {
            precision_bits: 4,
            max_precision_bits: 4,
            ..VIOptions::default()
        };
        assert!(matches!(
            vi_invariant_with(&q, &capped),
            Err(VIError::Precision { bits: 4, .. })
        ));
    }
}
