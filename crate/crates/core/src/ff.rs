//! Exact coefficient fields: the rationals, prime fields `F_p` and extension
//! fields `F_{p^m}`.
//!
//! Extension elements are stored as coordinate vectors in the power basis of a
//! canonical modulus. The modulus for `(p, m)` is the first monic irreducible
//! polynomial of degree `m` when the coefficient tuple `(c_{m-1}, ..., c_0)` is
//! scanned in lexicographic order, so every construction of `F_{p^m}` yields
//! the same descriptor.

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order accepted by [`make_field`].
pub const DEFAULT_MAX_ORDER: u64 = 10_000;

/// Returns true when `n` is prime (trial division).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Splits `q` as `p^m` with `p` prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p.saturating_mul(p) <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut m = 0u32;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// A finite field `F_{p^m}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteField {
    p: u64,
    m: u32,
    q: u64,
    /// Monic modulus, coefficients low to high (length `m + 1`); absent for `m = 1`.
    modulus: Option<Vec<u64>>,
}

impl FiniteField {
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Coefficients of the modulus from degree 0 up to degree `m`.
    pub fn modulus(&self) -> Option<&[u64]> {
        self.modulus.as_deref()
    }

    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    fn neg(&self, a: &[u64]) -> Vec<u64> {
        a.iter().map(|x| (self.p - x) % self.p).collect()
    }

    fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x + self.p - y) % self.p)
            .collect()
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.p;
        let Some(modulus) = &self.modulus else {
            return vec![a[0] * b[0] % p];
        };
        let m = self.m as usize;
        let mut t = vec![0u64; 2 * m - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                t[i + j] = (t[i + j] + x * y) % p;
            }
        }
        for d in (m..t.len()).rev() {
            let c = t[d];
            if c == 0 {
                continue;
            }
            for (i, mi) in modulus[..m].iter().enumerate() {
                let idx = d - m + i;
                t[idx] = (t[idx] + (p - c) * mi) % p;
            }
            t[d] = 0;
        }
        t.truncate(m);
        t
    }

    fn pow(&self, a: &[u64], mut e: u64) -> Vec<u64> {
        let mut base = a.to_vec();
        let mut acc = self.one_coords();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn one_coords(&self) -> Vec<u64> {
        let mut c = vec![0u64; self.m as usize];
        c[0] = 1;
        c
    }

    fn coords_of_index(&self, mut index: u64) -> Vec<u64> {
        (0..self.m)
            .map(|_| {
                let c = index % self.p;
                index /= self.p;
                c
            })
            .collect()
    }

    fn index_of_coords(&self, coords: &[u64]) -> u64 {
        coords.iter().rev().fold(0, |acc, c| acc * self.p + c)
    }
}

/// The coefficient field of a polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Rationals,
    Finite(FiniteField),
}

impl FieldDescriptor {
    /// Characteristic; `0` for the rationals.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Rationals => 0,
            FieldDescriptor::Finite(f) => f.p,
        }
    }

    /// Cardinality; `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldDescriptor::Rationals => None,
            FieldDescriptor::Finite(f) => Some(f.q),
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteField> {
        match self {
            FieldDescriptor::Rationals => None,
            FieldDescriptor::Finite(f) => Some(f),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FieldDescriptor::Finite(_))
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::Finite(ff) => write!(f, "F_{}", ff.q),
        }
    }
}

/// Shared handle to an immutable [`FieldDescriptor`].
#[derive(Debug, Clone)]
pub struct Field(Arc<FieldDescriptor>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Field {}

impl Deref for Field {
    type Target = FieldDescriptor;

    fn deref(&self) -> &FieldDescriptor {
        &self.0
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Builds a field: the rationals when `p` is `None`, otherwise `F_{p^m}`.
pub fn make_field(p: Option<u64>, m: u32) -> Result<Field> {
    match p {
        None => Ok(Field::rationals()),
        Some(p) => Field::finite(p, m),
    }
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(FieldDescriptor::Rationals))
    }

    /// `F_{p^m}` with the canonical modulus, subject to [`DEFAULT_MAX_ORDER`].
    pub fn finite(p: u64, m: u32) -> Result<Field> {
        Field::finite_with_limit(p, m, DEFAULT_MAX_ORDER)
    }

    pub fn finite_with_limit(p: u64, m: u32, max_order: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidCharacteristic(p));
        }
        if m == 0 {
            return Err(Error::domain("extension degree must be at least 1"));
        }
        let q = p
            .checked_pow(m)
            .filter(|q| *q <= max_order)
            .ok_or_else(|| {
                Error::Capacity(format!("{p}^{m} exceeds the field order limit {max_order}"))
            })?;
        let modulus = (m >= 2).then(|| canonical_modulus(p, m));
        Ok(Field(Arc::new(FieldDescriptor::Finite(FiniteField {
            p,
            m,
            q,
            modulus,
        }))))
    }

    /// `F_q` for a prime power `q`.
    pub fn from_order(q: u64) -> Result<Field> {
        let (p, m) = prime_power(q)
            .ok_or_else(|| Error::domain(format!("{q} is not a prime power")))?;
        Field::finite(p, m)
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.0
    }

    pub fn zero(&self) -> FieldElement {
        let repr = match &*self.0 {
            FieldDescriptor::Rationals => Repr::Rational(BigRational::zero()),
            FieldDescriptor::Finite(f) => Repr::Finite(vec![0; f.m as usize]),
        };
        FieldElement {
            field: self.clone(),
            repr,
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    /// Image of an integer under the canonical ring map `Z -> F`.
    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElement {
        let repr = match &*self.0 {
            FieldDescriptor::Rationals => Repr::Rational(BigRational::from_integer(n.clone())),
            FieldDescriptor::Finite(f) => {
                let r = n.mod_floor_u64(f.p);
                let mut c = vec![0; f.m as usize];
                c[0] = r;
                Repr::Finite(c)
            }
        };
        FieldElement {
            field: self.clone(),
            repr,
        }
    }

    /// The rational `num/den`; fails on finite fields only if `den` is zero there.
    pub fn rational(&self, num: i64, den: i64) -> Result<FieldElement> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        self.from_int(num).div(&self.from_int(den))
    }

    /// Element with the given power-basis coordinates `c_0, ..., c_{m-1}`.
    pub fn from_coords(&self, coords: &[u64]) -> Result<FieldElement> {
        let f = self.finite_part()?;
        if coords.len() != f.m as usize || coords.iter().any(|c| *c >= f.p) {
            return Err(Error::domain(format!(
                "coordinates {coords:?} are not a canonical element of {self}"
            )));
        }
        Ok(FieldElement {
            field: self.clone(),
            repr: Repr::Finite(coords.to_vec()),
        })
    }

    /// The element at position `index` of [`Field::enumerate_elements`].
    pub fn element_at(&self, index: u64) -> Result<FieldElement> {
        let f = self.finite_part()?;
        if index >= f.q {
            return Err(Error::domain(format!("index {index} out of range for {self}")));
        }
        Ok(FieldElement {
            field: self.clone(),
            repr: Repr::Finite(f.coords_of_index(index)),
        })
    }

    /// The class of `x` in `F_p[x]/(modulus)`; for prime fields this is `0`.
    pub fn generator(&self) -> Result<FieldElement> {
        let f = self.finite_part()?;
        let mut c = vec![0; f.m as usize];
        if f.m >= 2 {
            c[1] = 1;
        }
        Ok(FieldElement {
            field: self.clone(),
            repr: Repr::Finite(c),
        })
    }

    /// All `q` elements in coordinate-lexicographic order (`0`, `1`, ...).
    pub fn enumerate_elements(&self) -> Result<Vec<FieldElement>> {
        let f = self
            .as_finite()
            .ok_or_else(|| Error::NotEnumerable(self.to_string()))?;
        (0..f.q).map(|i| self.element_at(i)).collect()
    }

    /// Parses the textual element form produced by `Display`.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        match &*self.0 {
            FieldDescriptor::Rationals => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (s, "1"),
                };
                let num: BigInt = num
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(format!("bad rational {s:?}")))?;
                let den: BigInt = den
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(format!("bad rational {s:?}")))?;
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(FieldElement {
                    field: self.clone(),
                    repr: Repr::Rational(BigRational::new(num, den)),
                })
            }
            FieldDescriptor::Finite(f) if f.m == 1 => {
                let n: BigInt = s
                    .parse()
                    .map_err(|_| Error::parse(format!("bad element {s:?} of {self}")))?;
                Ok(self.from_bigint(&n))
            }
            FieldDescriptor::Finite(f) => {
                let digits: Vec<u64> = if let Some(inner) =
                    s.strip_prefix('[').and_then(|r| r.strip_suffix(']'))
                {
                    inner
                        .split(':')
                        .map(|d| d.trim().parse::<u64>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|_| Error::parse(format!("bad element {s:?} of {self}")))?
                } else {
                    s.chars()
                        .map(|ch| ch.to_digit(36).map(u64::from))
                        .collect::<Option<_>>()
                        .ok_or_else(|| Error::parse(format!("bad element {s:?} of {self}")))?
                };
                if digits.len() != f.m as usize {
                    return Err(Error::parse(format!(
                        "element {s:?} of {self} needs {} coordinates",
                        f.m
                    )));
                }
                let coords: Vec<u64> = digits.into_iter().rev().collect();
                self.from_coords(&coords)
                    .map_err(|_| Error::parse(format!("bad element {s:?} of {self}")))
            }
        }
    }

    fn finite_part(&self) -> Result<&FiniteField> {
        self.as_finite()
            .ok_or_else(|| Error::domain(format!("{self} is not a finite field")))
    }
}

trait ModFloor {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let r = self % BigInt::from(p);
        let r = if r.sign() == Sign::Minus { r + p } else { r };
        r.to_u64().expect("residue fits in u64")
    }
}

/// Remainder of `a` modulo `b` over `F_p`; `b` is monic. Coefficients low to high.
fn rem_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let c = *r.last().expect("nonempty");
        let shift = r.len() - 1 - db;
        if c != 0 {
            for (i, bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - c) * bi) % p;
            }
        }
        r.pop();
    }
    r
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible_mod_p(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut divisor: Vec<u64> = Vec::with_capacity(d + 1);
            let mut rest = idx;
            for _ in 0..d {
                divisor.push(rest % p);
                rest /= p;
            }
            divisor.push(1);
            if rem_mod_p(poly, &divisor, p).iter().all(|c| *c == 0) {
                return false;
            }
        }
    }
    true
}

fn canonical_modulus(p: u64, m: u32) -> Vec<u64> {
    let count = p.pow(m);
    for idx in 0..count {
        let mut candidate: Vec<u64> = Vec::with_capacity(m as usize + 1);
        let mut rest = idx;
        for _ in 0..m {
            candidate.push(rest % p);
            rest /= p;
        }
        candidate.push(1);
        if is_irreducible_mod_p(&candidate, p) {
            return candidate;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_{p}")
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Finite(Vec<u64>),
}

/// An element of a [`Field`] in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    repr: Repr,
}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

/// Field operations addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Neg,
    Pow(u64),
}

/// Applies `op` to `a` (and `b` for the binary operations).
pub fn arith(a: &FieldElement, b: Option<&FieldElement>, op: ArithOp) -> Result<FieldElement> {
    let rhs = || b.ok_or_else(|| Error::domain("binary operation needs a second operand"));
    match op {
        ArithOp::Add => a.add(rhs()?),
        ArithOp::Sub => a.sub(rhs()?),
        ArithOp::Mul => a.mul(rhs()?),
        ArithOp::Div => a.div(rhs()?),
        ArithOp::Inv => a.inv(),
        ArithOp::Neg => Ok(a.neg()),
        ArithOp::Pow(e) => Ok(a.pow(e)),
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rational(r) => r.is_zero(),
            Repr::Finite(c) => c.iter().all(|x| *x == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rational(r) => r.is_one(),
            Repr::Finite(c) => c[0] == 1 && c[1..].iter().all(|x| *x == 0),
        }
    }

    /// Power-basis coordinates `c_0, ..., c_{m-1}` (finite fields only).
    pub fn coords(&self) -> Option<&[u64]> {
        match &self.repr {
            Repr::Finite(c) => Some(c),
            Repr::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rational(r) => Some(r),
            Repr::Finite(_) => None,
        }
    }

    /// Position in [`Field::enumerate_elements`] (finite fields only).
    pub fn index(&self) -> Option<u64> {
        let f = self.field.as_finite()?;
        self.coords().map(|c| f.index_of_coords(c))
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ))
        }
    }

    fn with(&self, repr: Repr) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            repr,
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.add_same(other))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.sub_same(other))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.mul_same(other))
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        Ok(self.mul_same(&other.inv()?))
    }

    pub fn neg(&self) -> FieldElement {
        let repr = match (&self.repr, &*self.field) {
            (Repr::Rational(r), _) => Repr::Rational(-r),
            (Repr::Finite(c), FieldDescriptor::Finite(f)) => Repr::Finite(f.neg(c)),
            _ => unreachable!("element repr matches its field"),
        };
        self.with(repr)
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let repr = match (&self.repr, &*self.field) {
            (Repr::Rational(r), _) => Repr::Rational(r.recip()),
            (Repr::Finite(c), FieldDescriptor::Finite(f)) => Repr::Finite(f.pow(c, f.q - 2)),
            _ => unreachable!("element repr matches its field"),
        };
        Ok(self.with(repr))
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        let repr = match (&self.repr, &*self.field) {
            (Repr::Rational(r), _) => {
                let mut acc = BigRational::one();
                let mut base = r.clone();
                let mut e = e;
                while e > 0 {
                    if e & 1 == 1 {
                        acc *= &base;
                    }
                    base = &base * &base;
                    e >>= 1;
                }
                Repr::Rational(acc)
            }
            (Repr::Finite(c), FieldDescriptor::Finite(f)) => Repr::Finite(f.pow(c, e)),
            _ => unreachable!("element repr matches its field"),
        };
        self.with(repr)
    }

    pub(crate) fn add_same(&self, other: &FieldElement) -> FieldElement {
        debug_assert!(self.field == other.field);
        let repr = match (&self.repr, &other.repr, &*self.field) {
            (Repr::Rational(a), Repr::Rational(b), _) => Repr::Rational(a + b),
            (Repr::Finite(a), Repr::Finite(b), FieldDescriptor::Finite(f)) => {
                Repr::Finite(f.add(a, b))
            }
            _ => unreachable!("element repr matches its field"),
        };
        self.with(repr)
    }

    pub(crate) fn sub_same(&self, other: &FieldElement) -> FieldElement {
        debug_assert!(self.field == other.field);
        let repr = match (&self.repr, &other.repr, &*self.field) {
            (Repr::Rational(a), Repr::Rational(b), _) => Repr::Rational(a - b),
            (Repr::Finite(a), Repr::Finite(b), FieldDescriptor::Finite(f)) => {
                Repr::Finite(f.sub(a, b))
            }
            _ => unreachable!("element repr matches its field"),
        };
        self.with(repr)
    }

    pub(crate) fn mul_same(&self, other: &FieldElement) -> FieldElement {
        debug_assert!(self.field == other.field);
        let repr = match (&self.repr, &other.repr, &*self.field) {
            (Repr::Rational(a), Repr::Rational(b), _) => Repr::Rational(a * b),
            (Repr::Finite(a), Repr::Finite(b), FieldDescriptor::Finite(f)) => {
                Repr::Finite(f.mul(a, b))
            }
            _ => unreachable!("element repr matches its field"),
        };
        self.with(repr)
    }

    /// True when the rendered form needs parentheses-free sign handling.
    pub(crate) fn is_negative_rational(&self) -> bool {
        matches!(&self.repr, Repr::Rational(r) if r.is_negative())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.repr, &*self.field) {
            (Repr::Rational(r), _) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            (Repr::Finite(c), FieldDescriptor::Finite(ff)) if ff.m == 1 => write!(f, "{}", c[0]),
            (Repr::Finite(c), FieldDescriptor::Finite(ff)) if ff.p <= 36 => {
                for x in c.iter().rev() {
                    let ch = char::from_digit(*x as u32, 36).expect("digit below 36");
                    write!(f, "{ch}")?;
                }
                Ok(())
            }
            (Repr::Finite(c), _) => {
                let parts: Vec<String> = c.iter().rev().map(u64::to_string).collect();
                write!(f, "[{}]", parts.join(":"))
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct DescriptorJson {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    modulus: Option<Vec<u64>>,
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let json = match &*self.0 {
            FieldDescriptor::Rationals => DescriptorJson {
                kind: "rationals".into(),
                p: None,
                m: None,
                q: None,
                modulus: None,
            },
            FieldDescriptor::Finite(f) => DescriptorJson {
                kind: "finite".into(),
                p: Some(f.p),
                m: Some(f.m),
                q: Some(f.q),
                modulus: f.modulus.clone(),
            },
        };
        json.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let json = DescriptorJson::deserialize(d)?;
        match json.kind.as_str() {
            "rationals" => Ok(Field::rationals()),
            "finite" => {
                let p = json.p.ok_or_else(|| D::Error::missing_field("p"))?;
                let field = Field::finite(p, json.m.unwrap_or(1)).map_err(D::Error::custom)?;
                let f = field.as_finite().expect("finite");
                if json.q.is_some_and(|q| q != f.q)
                    || json.modulus.is_some() && json.modulus.as_deref() != f.modulus()
                {
                    return Err(D::Error::custom(format!(
                        "descriptor does not match canonical {field}"
                    )));
                }
                Ok(field)
            }
            other => Err(D::Error::custom(format!("unknown field kind {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64, m: u32) -> Field {
        Field::finite(p, m).unwrap()
    }

    #[test]
    fn prime_field_has_no_modulus() {
        let f5 = f(5, 1);
        let ff = f5.as_finite().unwrap();
        assert_eq!(ff.order(), 5);
        assert!(ff.modulus().is_none());
    }

    #[test]
    fn f8_modulus_is_x3_x_1() {
        let f8 = f(2, 3);
        assert_eq!(f8.as_finite().unwrap().modulus(), Some(&[1, 1, 0, 1][..]));
    }

    #[test]
    fn rationals_descriptor() {
        let q = make_field(None, 1).unwrap();
        assert_eq!(*q, FieldDescriptor::Rationals);
        assert_eq!(q.characteristic(), 0);
    }

    #[test]
    fn rejects_composite_and_oversized() {
        assert_eq!(Field::finite(6, 1), Err(Error::InvalidCharacteristic(6)));
        assert_eq!(Field::finite(1, 1), Err(Error::InvalidCharacteristic(1)));
        assert!(matches!(Field::finite(2, 40), Err(Error::Capacity(_))));
        assert!(matches!(Field::finite(101, 2), Err(Error::Capacity(_))));
    }

    #[test]
    fn inverse_in_f5() {
        let f5 = f(5, 1);
        assert_eq!(f5.from_int(2).inv().unwrap(), f5.from_int(3));
        assert_eq!(f5.zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn generator_cubed_in_f8() {
        let f8 = f(2, 3);
        let g = f8.generator().unwrap();
        let prod = g.mul(&g.pow(2)).unwrap();
        assert_eq!(prod, g.add(&f8.one()).unwrap());
        assert_eq!(prod.to_string(), "011");
    }

    #[test]
    fn rational_round_trip() {
        let q = Field::rationals();
        let third = q.one().div(&q.from_int(3)).unwrap();
        assert_eq!(third.to_string(), "1/3");
        assert!(third.mul(&q.from_int(3)).unwrap().is_one());
        assert_eq!(q.rational(4, -6).unwrap().to_string(), "-2/3");
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = f(5, 1).one();
        let b = f(7, 1).one();
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch(_, _))));
        assert!(matches!(
            arith(&a, Some(&b), ArithOp::Mul),
            Err(Error::FieldMismatch(_, _))
        ));
    }

    #[test]
    fn enumeration_orders() {
        let f2 = f(2, 1).enumerate_elements().unwrap();
        assert_eq!(f2.iter().map(|e| e.to_string()).collect::<Vec<_>>(), ["0", "1"]);

        let f4 = f(2, 2).enumerate_elements().unwrap();
        assert_eq!(f4.len(), 4);
        assert!(f4[0].is_zero() && f4[1].is_one());

        let f25 = f(5, 2);
        let all = f25.enumerate_elements().unwrap();
        assert_eq!(all.len(), 25);
        let set: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), 25);
        for a in &all {
            for b in &all {
                assert!(set.contains(&a.mul(b).unwrap()));
            }
        }
        for (i, e) in all.iter().enumerate() {
            assert_eq!(e.index(), Some(i as u64));
        }

        assert!(matches!(
            Field::rationals().enumerate_elements(),
            Err(Error::NotEnumerable(_))
        ));
    }

    #[test]
    fn canonical_moduli_are_irreducible_and_deterministic() {
        for (p, m) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2), (2, 8)] {
            let a = f(p, m);
            let b = f(p, m);
            assert_eq!(a, b);
            let modulus = a.as_finite().unwrap().modulus().unwrap().to_vec();
            assert_eq!(modulus.len(), m as usize + 1);
            assert_eq!(modulus[m as usize], 1);
            assert!(is_irreducible_mod_p(&modulus, p));
        }
        // x^2 + 2 is the first irreducible quadratic over F_5 (2 is a non-residue).
        assert_eq!(f(5, 2).as_finite().unwrap().modulus(), Some(&[2, 0, 1][..]));
    }

    #[test]
    fn frobenius_fixes_every_element() {
        for (p, m) in [(2, 1), (2, 3), (3, 2), (2, 6), (5, 2), (7, 2), (3, 3)] {
            let field = f(p, m);
            let q = field.order().unwrap();
            for a in field.enumerate_elements().unwrap() {
                assert_eq!(a.pow(q), a, "{field}: {a}");
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4)] {
            let field = f(p, m);
            let els = field.enumerate_elements().unwrap();
            let zero = field.zero();
            let one = field.one();
            for a in &els {
                assert_eq!(a.add(&zero).unwrap(), *a);
                assert_eq!(a.mul(&one).unwrap(), *a);
                assert!(a.add(&a.neg()).unwrap().is_zero());
                if !a.is_zero() {
                    assert!(a.mul(&a.inv().unwrap()).unwrap().is_one());
                }
                for b in &els {
                    assert_eq!(a.add(b).unwrap(), b.add(a).unwrap());
                    assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
                    for c in &els {
                        assert_eq!(
                            a.add(b).unwrap().add(c).unwrap(),
                            a.add(&b.add(c).unwrap()).unwrap()
                        );
                        assert_eq!(
                            a.mul(b).unwrap().mul(c).unwrap(),
                            a.mul(&b.mul(c).unwrap()).unwrap()
                        );
                        assert_eq!(
                            a.mul(&b.add(c).unwrap()).unwrap(),
                            a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn text_round_trip() {
        for field in [f(2, 3), f(5, 1), f(11, 1), f(5, 2), f(37, 2)] {
            for a in field.enumerate_elements().unwrap() {
                assert_eq!(field.parse_element(&a.to_string()).unwrap(), a);
            }
        }
        let q = Field::rationals();
        assert_eq!(q.parse_element("-3/6").unwrap().to_string(), "-1/2");
        assert_eq!(q.parse_element("7").unwrap().to_string(), "7");
        assert!(q.parse_element("1/0").is_err());
        assert!(f(2, 3).parse_element("0112").is_err());
        assert!(f(2, 3).parse_element("012").is_err());
    }

    #[test]
    fn descriptor_json_round_trip() {
        for field in [Field::rationals(), f(2, 3), f(7, 1)] {
            let json = serde_json::to_string(&field).unwrap();
            let back: Field = serde_json::from_str(&json).unwrap();
            assert_eq!(back, field);
        }
        assert_eq!(
            serde_json::to_string(&f(2, 3)).unwrap(),
            r#"{"kind":"finite","p":2,"m":3,"q":8,"modulus":[1,1,0,1]}"#
        );
        assert!(serde_json::from_str::<Field>(r#"{"kind":"finite","p":2,"m":3,"modulus":[1,0,1,1]}"#).is_err());
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(25), Some((5, 2)));
        assert_eq!(prime_power(49), Some((7, 2)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(1024), Some((2, 10)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
