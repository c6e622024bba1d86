//! Weight lower bounds from a nonzero root multiplicity.
//!
//! In characteristic zero a polynomial with a nonzero root of multiplicity `k`
//! has weight at least `k + 1`. In characteristic `p` the bound becomes
//! `prod_t (k_t + 1)` over the base-`p` digits of `k`, attained by
//! `(x - 1)^k = prod_t (x^{p^t} - 1)^{k_t}`.

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{Field, FieldElement};
use crate::poly::Polynomial;

/// Base-`p` digits of `k`, least significant first, and the weight bound
/// `prod_t (k_t + 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PadicExpansion {
    pub k: u64,
    pub p: u64,
    pub digits: Vec<u64>,
    #[serde(serialize_with = "crate::serde_decimal")]
    pub bound: BigUint,
}

impl PadicExpansion {
    /// `sum_t k_t p^t`
    pub fn value(&self) -> u128 {
        self.digits
            .iter()
            .rev()
            .fold(0u128, |acc, d| acc * self.p as u128 + *d as u128)
    }
}

pub fn padic_digits(k: u64, p: u64) -> Result<PadicExpansion> {
    if k == 0 {
        return Err(Error::domain("multiplicity must be positive"));
    }
    if p < 2 {
        return Err(Error::InvalidCharacteristic(p));
    }
    let mut digits = Vec::new();
    let mut rest = k;
    while rest > 0 {
        digits.push(rest % p);
        rest /= p;
    }
    let bound = digits
        .iter()
        .map(|d| BigUint::from(d + 1))
        .product::<BigUint>();
    Ok(PadicExpansion {
        k,
        p,
        digits,
        bound,
    })
}

/// Minimum weight of a polynomial over `field` with a nonzero root of
/// multiplicity exactly `k`.
pub fn weight_lower_bound(k: u64, field: &Field) -> BigUint {
    match field.characteristic() {
        0 => BigUint::from(k) + 1u32,
        _ if k == 0 => BigUint::one(),
        p => padic_digits(k, p).expect("k and p are valid").bound,
    }
}

/// The weight bound evaluated on one polynomial and root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub poly: Polynomial,
    pub root: FieldElement,
    pub multiplicity: usize,
    pub bound: BigUint,
    pub weight: usize,
    pub holds: bool,
    pub tight: bool,
}

impl Serialize for BoundReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("BoundReport", 8)?;
        st.serialize_field("k", &self.multiplicity)?;
        st.serialize_field("bound", &self.bound.to_string())?;
        st.serialize_field("weight", &self.weight.to_string())?;
        st.serialize_field("holds", &self.holds)?;
        st.serialize_field("tight", &self.tight)?;
        st.serialize_field("field", self.poly.field())?;
        st.serialize_field("poly", &self.poly.to_string())?;
        st.serialize_field("root", &self.root.to_string())?;
        st.end()
    }
}

/// Evaluates the weight bound for `f` at the nonzero root `root`. A root of
/// multiplicity zero yields the trivial bound `1`.
pub fn check_bound(f: &Polynomial, root: &FieldElement) -> Result<BoundReport> {
    if f.is_zero() {
        return Err(Error::domain("the zero polynomial has no bound"));
    }
    if root.is_zero() {
        return Err(Error::domain("the root must be nonzero"));
    }
    let multiplicity = f.multiplicity_at(root)?;
    let bound = weight_lower_bound(multiplicity as u64, f.field());
    let weight = f.weight();
    let w = BigUint::from(weight);
    Ok(BoundReport {
        poly: f.clone(),
        root: root.clone(),
        multiplicity,
        holds: w >= bound,
        tight: w == bound,
        bound,
        weight,
    })
}

/// `(x - 1)^k`, assembled as `prod_t (x^{p^t} - 1)^{k_t}` in characteristic `p`.
pub fn extremal_example(k: u64, field: &Field) -> Result<Polynomial> {
    if k == 0 {
        return Err(Error::domain("multiplicity must be positive"));
    }
    let p = field.characteristic();
    let one = field.one();
    if p == 0 {
        return Ok(Polynomial::linear(&one).pow(k));
    }
    let expansion = padic_digits(k, p)?;
    let mut acc = Polynomial::one(field);
    let mut power = 1usize;
    for digit in &expansion.digits {
        if *digit > 0 {
            let factor = Polynomial::monomial(one.clone(), power)
                .sub(&Polynomial::one(field))?
                .pow(*digit);
            acc = acc.mul(&factor)?;
        }
        power = power.saturating_mul(p as usize);
    }
    Ok(acc)
}

/// Degree versus distinct roots for a polynomial with nonzero constant term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioReport {
    pub degree: usize,
    pub distinct_roots: usize,
    pub multiplicities: Vec<usize>,
    pub weight: usize,
    /// Root multiplicities add up to the degree.
    pub splits: bool,
    /// `weight >= degree / distinct_roots + 1` (vacuous without roots).
    pub holds: bool,
    pub tight: bool,
}

/// Compares the weight of `f` against `degree / #roots + 1`.
///
/// Over a finite field the roots are found by evaluating at every element;
/// over the rationals they must be supplied. The inequality is guaranteed
/// when `f` splits into the given roots; `splits` records whether it does.
pub fn ratio_bound_check(f: &Polynomial, roots: Option<&[FieldElement]>) -> Result<RatioReport> {
    if f.is_zero() || f.coeff(0).is_zero() {
        return Err(Error::domain("requires f(0) != 0; strip powers of x first"));
    }
    let field = f.field();
    let roots: Vec<FieldElement> = match roots {
        Some(r) => {
            for xi in r {
                if !f.eval(xi)?.is_zero() {
                    return Err(Error::domain(format!("{xi} is not a root of {f}")));
                }
            }
            let mut distinct: Vec<FieldElement> = Vec::new();
            for xi in r {
                if !distinct.contains(xi) {
                    distinct.push(xi.clone());
                }
            }
            distinct
        }
        None if field.is_finite() => {
            let mut found = Vec::new();
            for xi in field.enumerate_elements()? {
                if f.eval(&xi)?.is_zero() {
                    found.push(xi);
                }
            }
            found
        }
        None => {
            return Err(Error::domain(
                "roots must be supplied over the rationals",
            ))
        }
    };
    let multiplicities = roots
        .iter()
        .map(|xi| f.multiplicity_at(xi))
        .collect::<Result<Vec<_>>>()?;
    let p = field.characteristic();
    if p > 0 && multiplicities.iter().any(|k| *k as u64 >= p) {
        return Err(Error::UnsupportedRegime(format!(
            "a root multiplicity reaches the characteristic {p}"
        )));
    }
    let degree = f.degree().expect("nonzero");
    let weight = f.weight();
    let r = roots.len();
    let (holds, tight) = if r == 0 {
        (true, false)
    } else {
        (weight * r >= degree + r, weight * r == degree + r)
    };
    Ok(RatioReport {
        degree,
        distinct_roots: r,
        splits: multiplicities.iter().sum::<usize>() == degree,
        multiplicities,
        weight,
        holds,
        tight,
    })
}

/// Minimum weight over all monic `f` of degree at most `n` having `1` as a
/// root of multiplicity exactly `k`, found by enumerating the cofactors `g`
/// in `f = (x - 1)^k g` with `g(1) != 0`.
pub fn empirical_min_weight(k: u64, n: u64, field: &Field, budget: u64) -> Result<usize> {
    if k == 0 || k > n {
        return Err(Error::domain("requires 1 <= k <= n"));
    }
    let elements = field.enumerate_elements()?;
    let q = elements.len() as u64;
    let span = n - k;
    let mut total: u64 = 0;
    for d in 0..=span {
        total = q
            .checked_pow(d as u32)
            .and_then(|c| total.checked_add(c))
            .filter(|t| *t <= budget)
            .ok_or_else(|| {
                Error::Capacity(format!("cofactor enumeration exceeds budget {budget}"))
            })?;
    }
    let one = field.one();
    let base = Polynomial::linear(&one).pow(k);
    let mut best: Option<usize> = None;
    for d in 0..=span as usize {
        let mut digits = vec![0usize; d];
        loop {
            let mut coeffs: Vec<FieldElement> =
                digits.iter().map(|i| elements[*i].clone()).collect();
            coeffs.push(one.clone());
            let g = Polynomial::from_coeffs(field, coeffs)?;
            if !g.eval(&one)?.is_zero() {
                let w = base.mul(&g)?.weight();
                best = Some(best.map_or(w, |b| b.min(w)));
            }
            let Some(pos) = digits.iter().position(|i| *i + 1 < elements.len()) else {
                break;
            };
            digits[pos] += 1;
            digits[..pos].iter_mut().for_each(|i| *i = 0);
        }
    }
    Ok(best.expect("(x - 1)^k itself is enumerated"))
}
