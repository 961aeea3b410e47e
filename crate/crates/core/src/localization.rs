//! Bott residue computation of `P_d = ∫ α^{4d+4}` over `R_d`.
//!
//! On a fixed component `F = P^b x P^a` (with `u`, `v` the hyperplane classes
//! of the two factors) the residue is the `u^b v^a` coefficient of
//! `c_1^T(α|_F)^{4d+4} / e^T(N_F)`, computed in the truncated ring
//! `Q[u,v]/(u^{b+1}, v^{a+1})`. Summing the residues over all `6(d+1)`
//! components gives the degree, which must come out integral.

use std::thread;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::fixed_points::{enumerate_components, FixedComponent, WeightVector};
use crate::series::{LinearForm, Rational, SeriesError, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalizationError {
    #[error("non-generic weights: {0}")]
    NonGenericWeights(String),
    #[error("Bott sum {0} is not an integer")]
    NonIntegralSum(Rational),
    #[error("normal bundle class has degree {found}, expected rank {expected}")]
    RankMismatch { expected: i64, found: i64 },
}

impl From<SeriesError> for LocalizationError {
    fn from(e: SeriesError) -> Self {
        LocalizationError::NonGenericWeights(e.to_string())
    }
}

/// A linear form raised to a signed power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivariantFactor {
    form: LinearForm,
    exponent: i64,
}

impl EquivariantFactor {
    pub fn new(form: LinearForm, exponent: i64) -> Result<Self, LocalizationError> {
        if exponent < 0 && form.constant.is_zero() {
            return Err(LocalizationError::NonGenericWeights(format!(
                "factor ({form})^{exponent} has zero weight part and cannot be inverted"
            )));
        }
        if exponent > 0 && form.is_zero() {
            return Err(LocalizationError::NonGenericWeights(format!(
                "factor ({form})^{exponent} is identically zero"
            )));
        }
        Ok(Self { form, exponent })
    }

    pub fn form(&self) -> &LinearForm {
        &self.form
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }
}

/// Product of linear forms with signed exponents; each factor has degree one.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EquivariantClassProduct {
    factors: Vec<EquivariantFactor>,
}

impl EquivariantClassProduct {
    pub fn new(factors: Vec<EquivariantFactor>) -> Self {
        Self { factors }
    }

    pub fn factors(&self) -> &[EquivariantFactor] {
        &self.factors
    }

    /// Cohomological degree, i.e. the sum of the exponents.
    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|f| f.exponent).sum()
    }

    /// Expands the product in `Q[u,v]/(u^{cap_u+1}, v^{cap_v+1})`.
    pub fn expand(&self, cap_u: usize, cap_v: usize) -> Result<TruncatedSeries, SeriesError> {
        self.expand_with_sign(cap_u, cap_v, 1)
    }

    /// Expands the reciprocal of the product.
    pub fn expand_inverse(
        &self,
        cap_u: usize,
        cap_v: usize,
    ) -> Result<TruncatedSeries, SeriesError> {
        self.expand_with_sign(cap_u, cap_v, -1)
    }

    fn expand_with_sign(
        &self,
        cap_u: usize,
        cap_v: usize,
        sign: i64,
    ) -> Result<TruncatedSeries, SeriesError> {
        let mut acc = TruncatedSeries::one(cap_u, cap_v);
        for f in &self.factors {
            let base = TruncatedSeries::from_linear_form(&f.form, cap_u, cap_v);
            acc = acc.checked_mul(&base.pow(sign * f.exponent)?)?;
        }
        Ok(acc)
    }
}

/// Residue of one fixed component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentContribution {
    pub component: FixedComponent,
    pub value: Rational,
}

fn indicator(x: u32) -> i64 {
    i64::from(x > 0)
}

/// `c_1^T(α|_F) = [b>0] u + [a>0] v + w_k + w_l`.
pub fn alpha_restriction(c: &FixedComponent, w: &WeightVector) -> LinearForm {
    let (k, l) = c.trivial();
    LinearForm::from_ints(indicator(c.b()), indicator(c.a()), w[k] + w[l])
}

/// `c_1^T(β|_F) = a u + b v + b w_{pos_b} + a w_{pos_a} + d (w_k + w_l)`.
///
/// The degree-`a` torsion contributes `b` times the hyperplane of the `P^a`
/// factor and vice versa; on a first-kind component the `v` term vanishes.
pub fn beta_restriction(c: &FixedComponent, w: &WeightVector) -> LinearForm {
    let (k, l) = c.trivial();
    let (b, a, d) = (c.b() as i64, c.a() as i64, c.d() as i64);
    let constant = b * w[c.pos_b()] + a * w[c.pos_a()] + d * (w[k] + w[l]);
    LinearForm::from_ints(a, b, constant).restrict_to_caps(c.caps().0, c.caps().1)
}

/// Equivariant Euler class of the normal bundle of `F` in `R_d`, rank `3d + 4`.
///
/// With `i = pos_b`, `j = pos_a` and trivial pair `(k, l)` this is
///
/// ```text
/// (u + w_k - w_i)^{b+1} (u + w_l - w_i)^{b+1} (v + w_k - w_j)^{a+1} (v + w_l - w_j)^{a+1}
/// (-u + v + w_i - w_j)^{b-a-1} (v + w_i - w_j)^{a+1}
/// (u + w_j - w_i)^{b+1} (u - v + w_j - w_i)^{a-b-1}
/// ```
///
/// which covers `b > a > 0`, `b = a` and the first kind `a = 0` uniformly.
/// Forms are first restricted to the component's caps, then identical forms
/// are merged by adding exponents, so the cancellations on first-kind
/// components and points happen symbolically.
pub fn normal_euler_class(
    c: &FixedComponent,
    w: &WeightVector,
) -> Result<EquivariantClassProduct, LocalizationError> {
    let (i, j) = (c.pos_b(), c.pos_a());
    let (k, l) = c.trivial();
    let (b, a) = (c.b() as i64, c.a() as i64);
    let (cap_u, cap_v) = c.caps();

    let raw = [
        (LinearForm::from_ints(1, 0, w[k] - w[i]), b + 1),
        (LinearForm::from_ints(1, 0, w[l] - w[i]), b + 1),
        (LinearForm::from_ints(0, 1, w[k] - w[j]), a + 1),
        (LinearForm::from_ints(0, 1, w[l] - w[j]), a + 1),
        (LinearForm::from_ints(-1, 1, w[i] - w[j]), b - a - 1),
        (LinearForm::from_ints(0, 1, w[i] - w[j]), a + 1),
        (LinearForm::from_ints(1, 0, w[j] - w[i]), b + 1),
        (LinearForm::from_ints(1, -1, w[j] - w[i]), a - b - 1),
    ];

    let mut merged: Vec<(LinearForm, i64)> = Vec::with_capacity(raw.len());
    for (form, e) in raw {
        let form = form.restrict_to_caps(cap_u, cap_v);
        match merged.iter_mut().find(|(f, _)| *f == form) {
            Some((_, acc)) => *acc += e,
            None => merged.push((form, e)),
        }
    }

    let factors = merged
        .into_iter()
        .filter(|&(_, e)| e != 0)
        .map(|(f, e)| EquivariantFactor::new(f, e))
        .collect::<Result<Vec<_>, _>>()?;
    let product = EquivariantClassProduct::new(factors);

    let expected = 3 * c.d() as i64 + 4;
    if product.degree() != expected {
        return Err(LocalizationError::RankMismatch {
            expected,
            found: product.degree(),
        });
    }
    Ok(product)
}

/// Residue `π_{F*}(α^{4d+4} / e^T(N_F))`: the `u^b v^a` coefficient.
pub fn component_contribution(
    c: &FixedComponent,
    w: &WeightVector,
) -> Result<ComponentContribution, LocalizationError> {
    let (cap_u, cap_v) = c.caps();
    let numerator = TruncatedSeries::from_linear_form(&alpha_restriction(c, w), cap_u, cap_v)
        .pow(4 * c.d() as i64 + 4)?;
    let inv_euler = normal_euler_class(c, w)?.expand_inverse(cap_u, cap_v)?;
    let value = numerator
        .checked_mul(&inv_euler)?
        .coefficient(cap_u, cap_v)?;
    Ok(ComponentContribution {
        component: *c,
        value,
    })
}

/// Residues of every fixed component of `R_d`, in enumeration order.
///
/// `jobs > 1` spreads the components over that many scoped threads; the
/// result does not depend on `jobs`.
pub fn contributions(
    d: u32,
    w: &WeightVector,
    jobs: usize,
) -> Result<Vec<ComponentContribution>, LocalizationError> {
    let components = enumerate_components(d);
    let jobs = jobs.clamp(1, components.len());
    if jobs == 1 {
        return components
            .iter()
            .map(|c| component_contribution(c, w))
            .collect();
    }
    let chunk = components.len().div_ceil(jobs);
    thread::scope(|s| {
        let handles: Vec<_> = components
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|c| component_contribution(c, w))
                        .collect::<Result<Vec<_>, _>>()
                })
            })
            .collect();
        let mut out = Vec::with_capacity(components.len());
        for h in handles {
            out.extend(h.join().expect("worker panicked")?);
        }
        Ok(out)
    })
}

/// Exact sum of the residues; fails unless it is an integer.
pub fn sum_contributions(parts: &[ComponentContribution]) -> Result<BigInt, LocalizationError> {
    let total = parts.iter().fold(Rational::zero(), |acc, p| acc + &p.value);
    if !total.denom().is_one() {
        return Err(LocalizationError::NonIntegralSum(total));
    }
    Ok(total.to_integer())
}

/// Degree of the generalized Plücker embedding of `R_d`.
pub fn plucker_degree(d: u32, w: &WeightVector) -> Result<BigInt, LocalizationError> {
    sum_contributions(&contributions(d, w, 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    fn w0123() -> WeightVector {
        WeightVector::standard()
    }

    fn comp(pos_b: usize, pos_a: usize, b: u32, a: u32) -> FixedComponent {
        FixedComponent::new(pos_b, pos_a, b, a).unwrap()
    }

    fn form(u: i64, v: i64, c: i64) -> LinearForm {
        LinearForm::from_ints(u, v, c)
    }

    #[test]
    fn alpha_examples() {
        let w = WeightVector::new([2, 5, 11, 17]).unwrap();
        assert_eq!(
            alpha_restriction(&comp(0, 1, 3, 0), &w),
            form(1, 0, 11 + 17)
        );
        assert_eq!(
            alpha_restriction(&comp(0, 1, 2, 1), &w),
            form(1, 1, 11 + 17)
        );
        assert_eq!(alpha_restriction(&comp(2, 3, 2, 1), &w), form(1, 1, 2 + 5));
        assert_eq!(alpha_restriction(&comp(2, 3, 0, 0), &w), form(0, 0, 2 + 5));
    }

    #[test]
    fn beta_examples() {
        let w = WeightVector::new([2, 5, 11, 17]).unwrap();
        // first kind, torsion at coordinate 0: d w0 + d w2 + d w3
        assert_eq!(
            beta_restriction(&comp(0, 1, 3, 0), &w),
            form(0, 0, 3 * (2 + 11 + 17))
        );
        // second kind: a u + b v + b w0 + a w1 + d w2 + d w3
        assert_eq!(
            beta_restriction(&comp(0, 1, 2, 1), &w),
            form(1, 2, 2 * 2 + 5 + 3 * (11 + 17))
        );
        assert_eq!(beta_restriction(&comp(1, 3, 0, 0), &w), form(0, 0, 0));
    }

    #[test]
    fn euler_class_of_first_kind_component_matches_hand_formula() {
        // torsion 3 at coordinate 1, Hilb^0 at 0, trivial (2,3):
        // (u+w2-w1)^4 (u+w3-w1)^4 (w1-w0) (-u+w1-w0)^2 (w2-w0)(w3-w0)
        let w = WeightVector::new([-3, 0, 2, 11]).unwrap();
        let c = comp(1, 0, 3, 0);
        let got = normal_euler_class(&c, &w).unwrap();
        assert_eq!(got.degree(), 13);
        let expected = EquivariantClassProduct::new(vec![
            EquivariantFactor::new(form(1, 0, 2), 4).unwrap(),
            EquivariantFactor::new(form(1, 0, 11), 4).unwrap(),
            EquivariantFactor::new(form(0, 0, 3), 1).unwrap(),
            EquivariantFactor::new(form(-1, 0, 3), 2).unwrap(),
            EquivariantFactor::new(form(0, 0, 5), 1).unwrap(),
            EquivariantFactor::new(form(0, 0, 14), 1).unwrap(),
        ]);
        assert_eq!(got.expand(3, 0).unwrap(), expected.expand(3, 0).unwrap());
    }

    #[test]
    fn euler_class_of_second_kind_component_matches_bridged_form() {
        // (b,a) = (2,1), torsion 2 at coordinate 1, torsion 1 at 0, trivial (2,3):
        // (v+w1-w0)^2 (u+2v+w0-w1) (v+w2-w0)^2 (v+w3-w0)^2 (u+w3-w1)^3 (u+w2-w1)^3
        let w = w0123();
        let c = comp(1, 0, 2, 1);
        let got = normal_euler_class(&c, &w).unwrap();
        let expected = EquivariantClassProduct::new(vec![
            EquivariantFactor::new(form(0, 1, 1), 2).unwrap(),
            EquivariantFactor::new(form(1, 2, -1), 1).unwrap(),
            EquivariantFactor::new(form(0, 1, 2), 2).unwrap(),
            EquivariantFactor::new(form(0, 1, 3), 2).unwrap(),
            EquivariantFactor::new(form(1, 0, 2), 3).unwrap(),
            EquivariantFactor::new(form(1, 0, 1), 3).unwrap(),
        ]);
        assert_eq!(got.expand(2, 1).unwrap(), expected.expand(2, 1).unwrap());
    }

    #[test]
    fn euler_class_at_a_point_is_four_weight_differences() {
        let w = WeightVector::new([0, 1, 3, 7]).unwrap();
        for c in enumerate_components(0) {
            let e = normal_euler_class(&c, &w).unwrap();
            let (i, j) = (c.pos_b(), c.pos_a());
            let (k, l) = c.trivial();
            let expected = (w[k] - w[i]) * (w[l] - w[i]) * (w[k] - w[j]) * (w[l] - w[j]);
            assert_eq!(e.degree(), 4);
            assert_eq!(e.expand(0, 0).unwrap().constant_term(), &rat(expected));
        }
    }

    #[test]
    fn degree_bookkeeping() {
        for d in 0..=6 {
            for c in enumerate_components(d) {
                let e = normal_euler_class(&c, &w0123()).unwrap();
                assert_eq!(e.degree(), 3 * d as i64 + 4);
                assert_eq!((4 * d as i64 + 4) - e.degree(), (c.b() + c.a()) as i64);
            }
        }
    }

    #[test]
    fn degree_zero_sums_to_two() {
        let parts = contributions(0, &w0123(), 1).unwrap();
        assert_eq!(parts.len(), 6);
        assert_eq!(sum_contributions(&parts).unwrap(), BigInt::from(2));
    }

    #[test]
    fn degree_three_sums_to_128() {
        let parts = contributions(3, &w0123(), 1).unwrap();
        assert_eq!(parts.len(), 24);
        assert_eq!(sum_contributions(&parts).unwrap(), BigInt::from(128));
    }

    #[test]
    fn degree_one_with_other_weights() {
        let w = WeightVector::new([0, 1, 3, 7]).unwrap();
        assert_eq!(plucker_degree(1, &w).unwrap(), BigInt::from(8));
    }

    #[test]
    fn single_components_depend_on_weights() {
        let w1 = w0123();
        let w2 = WeightVector::new([0, 1, 3, 7]).unwrap();
        for d in [1, 3] {
            for c in enumerate_components(d) {
                let x = component_contribution(&c, &w1).unwrap().value;
                let y = component_contribution(&c, &w2).unwrap().value;
                assert_ne!(x, y, "component {c} at d = {d}");
            }
        }
    }

    #[test]
    fn threaded_evaluation_is_identical() {
        let w = WeightVector::new([-3, 0, 2, 11]).unwrap();
        let serial = contributions(4, &w, 1).unwrap();
        for jobs in [2, 3, 7, 64] {
            assert_eq!(contributions(4, &w, jobs).unwrap(), serial);
        }
    }

    #[test]
    fn flipped_residue_is_not_integral() {
        let mut parts = contributions(3, &w0123(), 1).unwrap();
        parts[0].value = -parts[0].value.clone();
        assert!(matches!(
            sum_contributions(&parts),
            Err(LocalizationError::NonIntegralSum(_))
        ));
    }

    #[test]
    fn factor_validation() {
        assert!(matches!(
            EquivariantFactor::new(form(1, 0, 0), -1),
            Err(LocalizationError::NonGenericWeights(_))
        ));
        assert!(matches!(
            EquivariantFactor::new(form(0, 0, 0), 2),
            Err(LocalizationError::NonGenericWeights(_))
        ));
        assert!(EquivariantFactor::new(form(1, 0, 0), 2).is_ok());
    }
}
