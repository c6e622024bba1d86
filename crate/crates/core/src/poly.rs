//! Dense univariate polynomials over a [`Field`], with weight and root
//! multiplicity queries.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{Field, FieldElement};

/// A polynomial in normal form: `coeffs[i]` is the coefficient of `x^i` and the
/// last stored coefficient is nonzero. The zero polynomial stores nothing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl Polynomial {
    pub fn zero(field: &Field) -> Polynomial {
        Polynomial {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Polynomial {
        Polynomial::constant(field.one())
    }

    pub fn constant(c: FieldElement) -> Polynomial {
        Polynomial::monomial(c, 0)
    }

    /// `x`
    pub fn x(field: &Field) -> Polynomial {
        Polynomial::monomial(field.one(), 1)
    }

    /// `c * x^e`
    pub fn monomial(c: FieldElement, e: usize) -> Polynomial {
        let field = c.field().clone();
        let mut coeffs = vec![field.zero(); e];
        coeffs.push(c);
        Polynomial::normalized(field, coeffs)
    }

    /// `x - root`
    pub fn linear(root: &FieldElement) -> Polynomial {
        let field = root.field();
        Polynomial::normalized(field.clone(), vec![root.neg(), field.one()])
    }

    /// Builds a polynomial from coefficients listed from degree 0 upward.
    pub fn from_coeffs(field: &Field, coeffs: Vec<FieldElement>) -> Result<Polynomial> {
        if let Some(bad) = coeffs.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch(field.to_string(), bad.field().to_string()));
        }
        Ok(Polynomial::normalized(field.clone(), coeffs))
    }

    /// Integer coefficients from degree 0 upward, mapped into `field`.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Polynomial {
        let coeffs = coeffs.iter().map(|c| field.from_int(*c)).collect();
        Polynomial::normalized(field.clone(), coeffs)
    }

    fn normalized(field: Field, mut coeffs: Vec<FieldElement>) -> Polynomial {
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        Polynomial { field, coeffs }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Coefficients from degree 0 to the degree.
    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    /// Coefficient of `x^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(FieldElement::is_one)
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Degrees carrying a nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    fn check(&self, other: &Polynomial) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ))
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| match (self.coeffs.get(i), other.coeffs.get(i)) {
                (Some(a), Some(b)) => a.add_same(b),
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Ok(Polynomial::normalized(self.field.clone(), coeffs))
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(FieldElement::neg).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.field));
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add_same(&a.mul_same(b));
                }
            }
        }
        Ok(Polynomial::normalized(self.field.clone(), coeffs))
    }

    pub fn scale(&self, c: &FieldElement) -> Result<Polynomial> {
        if c.field() != &self.field {
            return Err(Error::FieldMismatch(self.field.to_string(), c.field().to_string()));
        }
        let coeffs = self.coeffs.iter().map(|a| a.mul_same(c)).collect();
        Ok(Polynomial::normalized(self.field.clone(), coeffs))
    }

    /// Multiplies by `x^s`.
    pub fn shift(&self, s: usize) -> Polynomial {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); s];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn pow(&self, mut e: u64) -> Polynomial {
        let mut acc = Polynomial::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same field");
            }
        }
        acc
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn divmod(&self, divisor: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        self.check(divisor)?;
        let Some(dd) = divisor.degree() else {
            return Err(Error::DivisionByZero);
        };
        let lead_inv = divisor.coeffs[dd].inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Polynomial::zero(&self.field), self.clone()));
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for shift in (0..quot.len()).rev() {
            let c = rem[shift + dd].mul_same(&lead_inv);
            if !c.is_zero() {
                for (i, b) in divisor.coeffs.iter().enumerate() {
                    rem[shift + i] = rem[shift + i].sub_same(&c.mul_same(b));
                }
            }
            quot[shift] = c;
        }
        rem.truncate(dd);
        Ok((
            Polynomial::normalized(self.field.clone(), quot),
            Polynomial::normalized(self.field.clone(), rem),
        ))
    }

    /// Value at `x` by Horner's rule.
    pub fn eval(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.field() != &self.field {
            return Err(Error::FieldMismatch(self.field.to_string(), x.field().to_string()));
        }
        Ok(self
            .coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| acc.mul_same(x).add_same(c)))
    }

    /// Divides by `x - root`, returning the quotient and the remainder `f(root)`.
    fn synthetic_division(&self, root: &FieldElement) -> (Polynomial, FieldElement) {
        let n = self.coeffs.len();
        let mut quot = vec![self.field.zero(); n.saturating_sub(1)];
        let mut carry = self.field.zero();
        for i in (0..n).rev() {
            let v = self.coeffs[i].add_same(&carry.mul_same(root));
            if i == 0 {
                return (Polynomial::normalized(self.field.clone(), quot), v);
            }
            quot[i - 1] = v.clone();
            carry = v;
        }
        (Polynomial::zero(&self.field), self.field.zero())
    }

    /// Largest `k` with `(x - root)^k` dividing `self`, by repeated exact division.
    pub fn multiplicity_at(&self, root: &FieldElement) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::domain("multiplicity is undefined for the zero polynomial"));
        }
        if root.field() != &self.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                root.field().to_string(),
            ));
        }
        let mut k = 0;
        let mut cur = self.clone();
        loop {
            let (quot, rem) = cur.synthetic_division(root);
            if !rem.is_zero() || quot.is_zero() {
                return Ok(k);
            }
            k += 1;
            cur = quot;
        }
    }

    /// Removes the largest power of `x` dividing `self`.
    pub fn strip_x_power(&self) -> Result<(Polynomial, usize)> {
        let shift = self
            .coeffs
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| Error::domain("cannot strip powers of x from the zero polynomial"))?;
        Ok((
            Polynomial {
                field: self.field.clone(),
                coeffs: self.coeffs[shift..].to_vec(),
            },
            shift,
        ))
    }

    /// `f(root * x)`: coefficient `i` scaled by `root^i`. A root of
    /// multiplicity `k` at `root` becomes a root of multiplicity `k` at `1`,
    /// and the weight is unchanged.
    pub fn dilate_root(&self, root: &FieldElement) -> Result<Polynomial> {
        if root.field() != &self.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                root.field().to_string(),
            ));
        }
        if root.is_zero() {
            return Err(Error::domain("cannot dilate by zero"));
        }
        let mut scale = self.field.one();
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            coeffs.push(c.mul_same(&scale));
            scale = scale.mul_same(root);
        }
        Ok(Polynomial::normalized(self.field.clone(), coeffs))
    }

    /// Parses the canonical text form, e.g. `x^3 + 2*x^2 + x`.
    pub fn parse(field: &Field, text: &str) -> Result<Polynomial> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::parse("empty polynomial"));
        }
        let mut terms: Vec<(bool, &str)> = Vec::new();
        let mut start = 0;
        let mut negative = false;
        let bytes = s.as_bytes();
        for (i, b) in bytes.iter().enumerate() {
            if (*b == b'+' || *b == b'-') && i > 0 && bytes[i - 1] != b'^' {
                terms.push((negative, &s[start..i]));
                negative = *b == b'-';
                start = i + 1;
            } else if i == 0 && (*b == b'+' || *b == b'-') {
                negative = *b == b'-';
                start = 1;
            }
        }
        terms.push((negative, &s[start..]));

        let mut acc = Polynomial::zero(field);
        for (negative, term) in terms {
            if term.is_empty() {
                return Err(Error::parse(format!("empty term in {text:?}")));
            }
            let (coef, exp) = match term.find('x') {
                Some(pos) => {
                    let coef = term[..pos].strip_suffix('*').unwrap_or(&term[..pos]);
                    let rest = &term[pos + 1..];
                    let exp = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .and_then(|e| e.parse::<usize>().ok())
                            .ok_or_else(|| Error::parse(format!("bad exponent in {term:?}")))?
                    };
                    (coef, exp)
                }
                None => (term, 0),
            };
            let c = if coef.is_empty() {
                field.one()
            } else {
                field.parse_element(coef)?
            };
            let c = if negative { c.neg() } else { c };
            acc = acc.add(&Polynomial::monomial(c, exp))?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (negative, mag) = if c.is_negative_rational() {
                (true, c.neg())
            } else {
                (false, c.clone())
            };
            match (first, negative) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let body = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            if i == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{body}")?;
            } else {
                write!(f, "{mag}*{body}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    field: Field,
    coeffs: Vec<String>,
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolynomialJson {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(ToString::to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let json = PolynomialJson::deserialize(d)?;
        let coeffs = json
            .coeffs
            .iter()
            .map(|c| json.field.parse_element(c))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(Polynomial::normalized(json.field, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Field {
        Field::rationals()
    }

    fn fp(p: u64) -> Field {
        Field::finite(p, 1).unwrap()
    }

    #[test]
    fn weights() {
        assert_eq!(Polynomial::zero(&q()).weight(), 0);
        let f2 = fp(2);
        let f = Polynomial::from_ints(&f2, &[1, 1, 0, 0, 1, 1]);
        assert_eq!(f.weight(), 4);
        assert_eq!(Polynomial::from_ints(&f2, &[-1, 1]).pow(5), f);

        let x2m1 = Polynomial::from_ints(&q(), &[-1, 0, 1]);
        assert_eq!(x2m1.pow(3).weight(), 4);
    }

    #[test]
    fn zero_degree_is_none() {
        assert_eq!(Polynomial::zero(&q()).degree(), None);
        assert_eq!(Polynomial::one(&q()).degree(), Some(0));
        assert_eq!(Polynomial::from_ints(&q(), &[1, 2, 0, 0]).degree(), Some(1));
    }

    #[test]
    fn ring_examples() {
        let x1 = Polynomial::from_ints(&q(), &[1, 1]);
        let cube = x1.pow(2).mul(&x1).unwrap();
        assert_eq!(cube, Polynomial::from_ints(&q(), &[1, 3, 3, 1]));

        let a = Polynomial::from_ints(&q(), &[0, 1, 2, 1]);
        let (quot, rem) = a.divmod(&x1.pow(2)).unwrap();
        assert_eq!(quot, Polynomial::x(&q()));
        assert!(rem.is_zero());

        let f5 = fp(5);
        let xm1 = Polynomial::from_ints(&f5, &[-1, 1]);
        assert_eq!(xm1.pow(5), Polynomial::from_ints(&f5, &[-1, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn divmod_errors() {
        let a = Polynomial::x(&q());
        assert_eq!(a.divmod(&Polynomial::zero(&q())), Err(Error::DivisionByZero));
        assert!(matches!(
            a.divmod(&Polynomial::x(&fp(5))),
            Err(Error::FieldMismatch(_, _))
        ));
        let (quot, rem) = Polynomial::one(&q()).divmod(&a).unwrap();
        assert!(quot.is_zero());
        assert_eq!(rem, Polynomial::one(&q()));
    }

    #[test]
    fn multiplicity_examples() {
        let field = q();
        let f = Polynomial::from_ints(&field, &[1, 1])
            .pow(3)
            .mul(&Polynomial::from_ints(&field, &[-2, 1]))
            .unwrap();
        assert_eq!(f.multiplicity_at(&field.from_int(-1)).unwrap(), 3);
        assert_eq!(f.multiplicity_at(&field.from_int(2)).unwrap(), 1);
        assert_eq!(f.multiplicity_at(&field.from_int(5)).unwrap(), 0);

        let f5 = fp(5);
        let xp1 = Polynomial::from_ints(&f5, &[-1, 0, 0, 0, 0, 1]);
        assert_eq!(xp1.multiplicity_at(&f5.one()).unwrap(), 5);
        let x2p1 = Polynomial::from_ints(&f5, &[1, 0, 1]);
        assert_eq!(x2p1.multiplicity_at(&f5.from_int(2)).unwrap(), 1);

        assert!(matches!(
            Polynomial::zero(&f5).multiplicity_at(&f5.one()),
            Err(Error::Domain(_))
        ));
        assert_eq!(Polynomial::one(&f5).multiplicity_at(&f5.one()).unwrap(), 0);
    }

    #[test]
    fn strip_examples() {
        let field = q();
        let a = Polynomial::from_ints(&field, &[0, 1, 2, 1]);
        assert_eq!(
            a.strip_x_power().unwrap(),
            (Polynomial::from_ints(&field, &[1, 2, 1]), 1)
        );
        let b = Polynomial::from_ints(&field, &[1, 0, 0, 0, 0, 1]);
        assert_eq!(b.strip_x_power().unwrap(), (b.clone(), 0));
        let c = Polynomial::monomial(field.one(), 4);
        assert_eq!(c.strip_x_power().unwrap(), (Polynomial::one(&field), 4));
        assert!(Polynomial::zero(&field).strip_x_power().is_err());
    }

    #[test]
    fn dilate_examples() {
        let f5 = fp(5);
        let two = f5.from_int(2);
        let f = Polynomial::linear(&two).pow(2);
        let g = f.dilate_root(&two).unwrap();
        assert_eq!(g.multiplicity_at(&f5.one()).unwrap(), 2);
        assert_eq!(f.dilate_root(&f5.one()).unwrap(), f);
        assert!(f.dilate_root(&f5.zero()).is_err());

        let field = q();
        let three = field.from_int(3);
        let h = Polynomial::linear(&three).pow(4);
        let hd = h.dilate_root(&three).unwrap();
        assert_eq!(hd.weight(), 5);
        assert_eq!(h.weight(), 5);
        assert_eq!(hd.multiplicity_at(&field.one()).unwrap(), 4);
    }

    #[test]
    fn text_forms() {
        let f5 = fp(5);
        let f = Polynomial::from_ints(&f5, &[0, 1, 2, 1]);
        assert_eq!(f.to_string(), "x^3 + 2*x^2 + x");
        assert_eq!(Polynomial::parse(&f5, "x^3 + 2*x^2 + x").unwrap(), f);
        assert_eq!(Polynomial::parse(&f5, "x^3 - 1").unwrap().to_string(), "x^3 + 4");

        let field = q();
        let g = Polynomial::from_ints(&field, &[-2, -3, 0, 1]);
        assert_eq!(g.to_string(), "x^3 - 3*x - 2");
        assert_eq!(Polynomial::parse(&field, &g.to_string()).unwrap(), g);
        let h = Polynomial::parse(&field, "x^3 + 3/2*x^2 - 1/2").unwrap();
        assert_eq!(h.coeff(2).to_string(), "3/2");
        assert_eq!(h.to_string(), "x^3 + 3/2*x^2 - 1/2");
        assert_eq!(Polynomial::parse(&field, "-x^2 + x").unwrap().to_string(), "-x^2 + x");
        assert_eq!(Polynomial::zero(&field).to_string(), "0");
        assert!(Polynomial::parse(&field, "x^").is_err());
        assert!(Polynomial::parse(&field, "x +").is_err());

        let f8 = Field::finite(2, 3).unwrap();
        let e = Polynomial::parse(&f8, "x^2 + 011*x + 100").unwrap();
        assert_eq!(e.to_string(), "x^2 + 011*x + 100");
    }

    #[test]
    fn json_form() {
        let f5 = fp(5);
        let f = Polynomial::from_ints(&f5, &[1, 0, 3]);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, r#"{"field":{"kind":"finite","p":5,"m":1,"q":5},"coeffs":["1","0","3"]}"#);
        let back: Polynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn dilation_invariance_exhaustive_f5() {
        let f5 = fp(5);
        let els = f5.enumerate_elements().unwrap();
        let nonzero: Vec<_> = els[1..].to_vec();
        // every polynomial of degree <= 4 over F_5: 5^5 coefficient vectors
        for idx in 1..5u64.pow(5) {
            let coeffs: Vec<_> = (0..5)
                .map(|i| els[((idx / 5u64.pow(i)) % 5) as usize].clone())
                .collect();
            let f = Polynomial::from_coeffs(&f5, coeffs).unwrap();
            for xi in &nonzero {
                let g = f.dilate_root(xi).unwrap();
                assert_eq!(g.weight(), f.weight());
                assert_eq!(
                    g.multiplicity_at(&f5.one()).unwrap(),
                    f.multiplicity_at(xi).unwrap()
                );
            }
        }
    }

    fn small_rational_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(-6i64..=6, 0..7).prop_map(|c| Polynomial::from_ints(&q(), &c))
    }

    fn f7_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(0i64..7, 0..8).prop_map(|c| Polynomial::from_ints(&fp(7), &c))
    }

    fn assert_normal(f: &Polynomial) {
        assert!(f.coeffs().last().map_or(true, |c| !c.is_zero()));
        assert_eq!(f.weight(), f.coeffs().iter().filter(|c| !c.is_zero()).count());
    }

    proptest! {
        #[test]
        fn divmod_round_trip(a in small_rational_poly(), b in small_rational_poly()) {
            prop_assume!(!b.is_zero());
            let (quot, rem) = a.divmod(&b).unwrap();
            assert_normal(&quot);
            assert_normal(&rem);
            prop_assert_eq!(quot.mul(&b).unwrap().add(&rem).unwrap(), a);
            prop_assert!(rem.degree() < b.degree());
        }

        #[test]
        fn divmod_round_trip_f7(a in f7_poly(), b in f7_poly()) {
            prop_assume!(!b.is_zero());
            let (quot, rem) = a.divmod(&b).unwrap();
            prop_assert_eq!(quot.mul(&b).unwrap().add(&rem).unwrap(), a);
            prop_assert!(rem.degree() < b.degree());
        }

        #[test]
        fn multiplicity_is_additive(f in f7_poly(), r in 0i64..7) {
            prop_assume!(!f.is_zero());
            let root = fp(7).from_int(r);
            let g = f.mul(&Polynomial::linear(&root)).unwrap();
            prop_assert_eq!(g.multiplicity_at(&root).unwrap(), f.multiplicity_at(&root).unwrap() + 1);
        }

        #[test]
        fn text_round_trip(f in small_rational_poly()) {
            prop_assert_eq!(Polynomial::parse(&q(), &f.to_string()).unwrap(), f);
        }
    }
}
