//! Verification battery behind `quotdeg selftest`.

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use quotdeg_core::golden::{parse_product, Status, Variables, DEGREE_THREE};
use quotdeg_core::series::rat;
use quotdeg_core::{
    alpha_restriction, chow_rank, enumerate_components, euler_characteristic, normal_euler_class,
    plucker_degree, vi_plucker_degree, LinearForm, TruncatedSeries, WeightVector,
};

use crate::Check;

pub const WEIGHT_SETS: [[i64; 4]; 5] = [
    [0, 1, 2, 3],
    [0, 1, 3, 7],
    [-3, 0, 2, 11],
    [-41, -7, 18, 33],
    [-50, -13, 22, 49],
];

fn check(name: &str, result: Result<String, String>) -> Check {
    let pass = result.is_ok();
    Check {
        detail: result.unwrap_or_else(|e| e),
        name: name.to_string(),
        pass,
    }
}

pub fn run_battery(quick: bool) -> Vec<Check> {
    let max_d = if quick { 3 } else { 4 };
    let closed_d = if quick { 3 } else { 6 };
    let vafa_d = if quick { 3 } else { 5 };
    let euler_d = if quick { 3 } else { 20 };
    let samples = if quick { 100 } else { 1000 };
    vec![
        check("weight_invariance", weight_invariance(max_d)),
        check("closed_form", closed_form(closed_d)),
        check("vafa_agreement", vafa_agreement(vafa_d)),
        check("euler_characteristic", euler_identities(euler_d)),
        check("golden_set", golden_set()),
        check("bridge_identity", bridge_identity()),
        check("series_ring_laws", ring_laws(samples, 0x5eed)),
    ]
}

pub fn weight_invariance(max_d: u32) -> Result<String, String> {
    for d in 0..=max_d {
        let mut first: Option<BigInt> = None;
        for w in WEIGHT_SETS {
            let w = WeightVector::new(w).map_err(|e| e.to_string())?;
            let got = plucker_degree(d, &w).map_err(|e| format!("d = {d}, w = {w}: {e}"))?;
            match &first {
                Some(f) if *f != got => {
                    return Err(format!("d = {d}: {f} at first weights, {got} at {w}"))
                }
                Some(_) => {}
                None => first = Some(got),
            }
        }
    }
    Ok(format!(
        "d <= {max_d}, {} weight vectors",
        WEIGHT_SETS.len()
    ))
}

pub fn closed_form(max_d: u32) -> Result<String, String> {
    let w = WeightVector::standard();
    for d in 0..=max_d {
        let got = plucker_degree(d, &w).map_err(|e| format!("d = {d}: {e}"))?;
        let want = BigInt::from(1) << (2 * d + 1);
        if got != want {
            return Err(format!("d = {d}: got {got}, expected {want}"));
        }
    }
    Ok(format!("2^(2d+1) for d <= {max_d}"))
}

pub fn vafa_agreement(max_d: u32) -> Result<String, String> {
    let w = WeightVector::standard();
    for d in 0..=max_d {
        let bott = plucker_degree(d, &w).map_err(|e| format!("d = {d}: {e}"))?;
        let vafa = vi_plucker_degree(d).map_err(|e| format!("d = {d}: {e}"))?;
        if bott != vafa {
            return Err(format!("d = {d}: bott {bott}, vafa {vafa}"));
        }
    }
    Ok(format!("bott = vafa for d <= {max_d}"))
}

pub fn euler_identities(max_d: u32) -> Result<String, String> {
    for d in 0..=max_d {
        let cs = enumerate_components(d);
        if cs.len() != 6 * (d as usize + 1) {
            return Err(format!("d = {d}: {} components", cs.len()));
        }
        let total: u64 = cs.iter().map(chow_rank).sum();
        if total != euler_characteristic(d) {
            return Err(format!(
                "d = {d}: ranks sum to {total}, chi = {}",
                euler_characteristic(d)
            ));
        }
    }
    Ok(format!("6(d+1) components, ranks sum to chi, d <= {max_d}"))
}

/// Compares every comparable degree-three reference residue with ours.
pub fn golden_set() -> Result<String, String> {
    let w = WeightVector::standard();
    let mut compared = 0;
    for e in DEGREE_THREE.iter().filter(|e| e.is_comparable()) {
        let c = e
            .component()
            .map_err(|err| format!("entry {}: {err}", e.index))?;
        let (cu, cv) = c.caps();
        let vars = Variables::for_component(&c);
        let at = |err: &dyn std::fmt::Display| format!("entry {}: {err}", e.index);
        let golden = parse_product(e.denominator, vars, &w)
            .map_err(|err| at(&err))?
            .expand(cu, cv)
            .map_err(|err| at(&err))?;
        let ours = normal_euler_class(&c, &w)
            .map_err(|err| at(&err))?
            .expand(cu, cv)
            .map_err(|err| at(&err))?;
        if golden != ours {
            return Err(format!("entry {} denominator differs on {c}", e.index));
        }
        if e.status != Status::NumeratorTypo {
            let num = parse_product(e.numerator, vars, &w).map_err(|err| at(&err))?;
            let alpha =
                TruncatedSeries::from_linear_form(&alpha_restriction(&c, &w), cu, cv).pow(16);
            if num.expand(cu, cv).ok() != alpha.ok() {
                return Err(format!("entry {} numerator differs on {c}", e.index));
            }
        }
        compared += 1;
    }
    Ok(format!(
        "{compared} of {} entries match",
        DEGREE_THREE.len()
    ))
}

/// `(c+u)^3 (c+u-v)^{-2} = c + u + 2v` modulo `(u^3, v^2)`.
pub fn bridge_identity() -> Result<String, String> {
    for c in [-7i64, -3, -1, 1, 2, 5] {
        let a = TruncatedSeries::from_linear_form(&LinearForm::from_ints(1, 0, c), 2, 1);
        let b = TruncatedSeries::from_linear_form(&LinearForm::from_ints(1, -1, c), 2, 1);
        let lhs = a
            .pow(3)
            .and_then(|x| x.checked_mul(&b.pow(-2)?))
            .map_err(|e| e.to_string())?;
        let rhs = TruncatedSeries::from_linear_form(&LinearForm::from_ints(1, 2, c), 2, 1);
        if lhs != rhs {
            return Err(format!("c = {c}: {lhs} != {rhs}"));
        }
    }
    Ok("holds for six constants".into())
}

fn random_series(rng: &mut StdRng, cu: usize, cv: usize) -> TruncatedSeries {
    let terms: Vec<_> = (0..=cu)
        .flat_map(|i| (0..=cv).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, rat(rng.gen_range(-9..=9))))
        .collect();
    TruncatedSeries::from_terms(cu, cv, terms)
}

/// Ring laws, inverses, power laws and truncation on `samples` random triples.
pub fn ring_laws(samples: usize, seed: u64) -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut units = 0;
    for n in 0..samples {
        let (cu, cv) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
        let x = random_series(&mut rng, cu, cv);
        let y = random_series(&mut rng, cu, cv);
        let z = random_series(&mut rng, cu, cv);
        let fail = |law: &str| {
            Err(format!(
                "sample {n}: {law} fails for x = {x}, y = {y}, z = {z}"
            ))
        };
        let add = |a: &TruncatedSeries, b: &TruncatedSeries| a.checked_add(b).expect("caps agree");
        let mul = |a: &TruncatedSeries, b: &TruncatedSeries| a.checked_mul(b).expect("caps agree");

        if add(&x, &y) != add(&y, &x) {
            return fail("commutativity of +");
        }
        if mul(&x, &y) != mul(&y, &x) {
            return fail("commutativity of *");
        }
        if mul(&mul(&x, &y), &z) != mul(&x, &mul(&y, &z)) {
            return fail("associativity of *");
        }
        if add(&add(&x, &y), &z) != add(&x, &add(&y, &z)) {
            return fail("associativity of +");
        }
        if mul(&x, &add(&y, &z)) != add(&mul(&x, &y), &mul(&x, &z)) {
            return fail("distributivity");
        }
        if add(&x, &TruncatedSeries::zero(cu, cv)) != x
            || mul(&x, &TruncatedSeries::one(cu, cv)) != x
        {
            return fail("identities");
        }
        if !add(&x, &x.neg()).is_zero() {
            return fail("additive inverse");
        }
        if x.is_unit() {
            units += 1;
            let inv = x.inverse().map_err(|e| e.to_string())?;
            if mul(&x, &inv) != TruncatedSeries::one(cu, cv) {
                return fail("x * x^-1 = 1");
            }
            let (a, b) = (rng.gen_range(-3i64..=3), rng.gen_range(-3i64..=3));
            let lhs = x.pow(a + b).map_err(|e| e.to_string())?;
            let rhs = mul(
                &x.pow(a).map_err(|e| e.to_string())?,
                &x.pow(b).map_err(|e| e.to_string())?,
            );
            if lhs != rhs {
                return fail("x^(a+b) = x^a x^b");
            }
        }
        let (tu, tv) = (rng.gen_range(0..=cu), rng.gen_range(0..=cv));
        let t = |s: &TruncatedSeries| s.truncate(tu, tv).expect("smaller caps");
        let tmul = |a: &TruncatedSeries, b: &TruncatedSeries| a.checked_mul(b).expect("caps agree");
        if t(&mul(&x, &y)) != tmul(&t(&x), &t(&y))
            || t(&add(&x, &y)) != t(&x).checked_add(&t(&y)).expect("caps agree")
        {
            return fail("truncation homomorphism");
        }
    }
    Ok(format!("{samples} samples ({units} units)"))
}
