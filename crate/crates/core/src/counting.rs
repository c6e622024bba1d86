//! Closed-form counts of monic multiples of `(x + 1)^k` by weight over `F_q`.
//!
//! For `1 <= k <= n < p`, the number of monic degree-`n` multiples whose lower
//! nonzero coefficients sit exactly on a fixed set `J` of size `w - 1` is
//!
//! ```text
//! M_w = sum_{v >= k} (-1)^{w-v-1} C(w-1, v) q^{v-k}
//! ```
//!
//! independently of `J`, so exactly `C(n, w-1) M_w` of them have weight `w`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::prime_power;

/// Exact binomial coefficient; zero when `b > a`.
pub fn binomial_exact(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigUint::one();
    for i in 0..b {
        acc *= a - i;
        acc /= i + 1;
    }
    acc
}

/// The alternating sum `M_w`. Terms with `v > w - 1` vanish and are skipped.
pub fn m_w(q: u64, k: u64, w: u64) -> BigInt {
    if w == 0 {
        return BigInt::zero();
    }
    let q = BigInt::from(q);
    let mut acc = BigInt::zero();
    for v in k..w {
        let term = BigInt::from(binomial_exact(w - 1, v)) * Pow::pow(&q, (v - k) as u32);
        if (w - v - 1) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Where a distribution came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Formula,
    Enumeration,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Formula => write!(f, "formula"),
            Source::Enumeration => write!(f, "enumeration"),
        }
    }
}

/// Number of monic degree-`n` multiples of `(x + 1)^k` over `F_q` per weight.
/// Only weights with a nonzero count are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    pub q: u64,
    pub n: u64,
    pub k: u64,
    pub source: Source,
    pub counts: BTreeMap<u64, BigUint>,
}

impl WeightDistribution {
    pub fn count(&self, w: u64) -> BigUint {
        self.counts.get(&w).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// Same parameters and identical counts, regardless of source.
    pub fn same_counts(&self, other: &WeightDistribution) -> bool {
        (self.q, self.n, self.k) == (other.q, other.n, other.k) && self.counts == other.counts
    }

    /// Two-column CSV with header `w,count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("w,count\n");
        for (w, c) in &self.counts {
            out.push_str(&format!("{w},{c}\n"));
        }
        out
    }
}

impl Serialize for WeightDistribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let counts: BTreeMap<u64, String> =
            self.counts.iter().map(|(w, c)| (*w, c.to_string())).collect();
        let mut st = s.serialize_struct("WeightDistribution", 5)?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("source", &self.source)?;
        st.serialize_field("counts", &counts)?;
        st.end()
    }
}

/// Rejects parameters outside `1 <= k <= n < p`, returning `p`.
pub fn check_regime(q: u64, n: u64, k: u64) -> Result<u64> {
    let (p, _) = prime_power(q)
        .ok_or_else(|| Error::domain(format!("q = {q} is not a prime power")))?;
    if k == 0 || k > n {
        return Err(Error::domain(format!("requires 1 <= k <= n (k = {k}, n = {n})")));
    }
    if n >= p {
        return Err(Error::UnsupportedRegime(format!(
            "requires n < p (n = {n}, p = {p})"
        )));
    }
    Ok(p)
}

/// The weight distribution `w -> C(n, w-1) M_w`.
pub fn weight_distribution(q: u64, n: u64, k: u64) -> Result<WeightDistribution> {
    check_regime(q, n, k)?;
    let mut counts = BTreeMap::new();
    for w in 1..=n + 1 {
        let mw = m_w(q, k, w);
        if mw.is_negative() {
            return Err(Error::domain(format!("M_{w} is negative for q = {q}, k = {k}")));
        }
        let count = binomial_exact(n, w - 1) * mw.magnitude();
        if !count.is_zero() {
            counts.insert(w, count);
        }
    }
    Ok(WeightDistribution {
        q,
        n,
        k,
        source: Source::Formula,
        counts,
    })
}

/// `sum_w C(n, w-1) M_w == q^{n-k}`, evaluated exactly.
pub fn total_identity_check(q: u64, n: u64, k: u64) -> Result<bool> {
    check_regime(q, n, k)?;
    let lhs: BigInt = (1..=n + 1)
        .map(|w| BigInt::from(binomial_exact(n, w - 1)) * m_w(q, k, w))
        .sum();
    let rhs = BigInt::from(Pow::pow(BigUint::from(q), n - k));
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pascal(rows: usize) -> Vec<Vec<BigUint>> {
        let mut t: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        for a in 1..=rows {
            let prev = &t[a - 1];
            let row = (0..=a)
                .map(|b| {
                    let left = if b > 0 { prev[b - 1].clone() } else { BigUint::zero() };
                    let right = prev.get(b).cloned().unwrap_or_default();
                    left + right
                })
                .collect();
            t.push(row);
        }
        t
    }

    #[test]
    fn binomial_against_pascal() {
        let t = pascal(120);
        for a in 0..=120u64 {
            for b in 0..=a + 2 {
                let expected = t[a as usize].get(b as usize).cloned().unwrap_or_default();
                assert_eq!(binomial_exact(a, b), expected);
            }
        }
        assert_eq!(binomial_exact(5, 2), BigUint::from(10u32));
        assert_eq!(binomial_exact(4, 7), BigUint::zero());
        assert_eq!(
            binomial_exact(100, 50).to_string(),
            "100891344545564193334812497256"
        );
    }

    #[test]
    fn m_w_examples() {
        assert_eq!(m_w(5, 1, 2), BigInt::from(1));
        assert_eq!(m_w(5, 1, 3), BigInt::from(3));
        assert_eq!(m_w(5, 1, 4), BigInt::from(13));
        for q in [2, 5, 49, 101] {
            for w in 1..=3 {
                assert!(m_w(q, 3, w).is_zero());
            }
        }
    }

    #[test]
    fn m_w_vanishes_below_and_is_one_at_k_plus_one() {
        for q in [5u64, 7, 11, 13, 25, 49, 101] {
            for k in 1..=20 {
                for w in 1..=k {
                    assert!(m_w(q, k, w).is_zero());
                }
                assert_eq!(m_w(q, k, k + 1), BigInt::one());
            }
        }
    }

    #[test]
    fn m_w_nonnegative_in_regime() {
        for q in [5u64, 7, 11, 13, 25, 49] {
            let p = prime_power(q).unwrap().0;
            for k in 1..p {
                for w in 1..=p + 1 {
                    assert!(!m_w(q, k, w).is_negative(), "q={q} k={k} w={w}");
                }
            }
        }
    }

    #[test]
    fn distribution_examples() {
        let d = weight_distribution(5, 3, 1).unwrap();
        let expected: BTreeMap<u64, BigUint> =
            [(2, 3u32), (3, 9), (4, 13)].map(|(w, c)| (w, BigUint::from(c))).into();
        assert_eq!(d.counts, expected);
        assert_eq!(d.total(), BigUint::from(25u32));
        assert_eq!(d.source, Source::Formula);

        let d = weight_distribution(5, 3, 3).unwrap();
        assert_eq!(d.counts.len(), 1);
        assert_eq!(d.count(4), BigUint::one());

        let d = weight_distribution(7, 5, 2).unwrap();
        assert_eq!(d.total(), BigUint::from(343u32));
    }

    #[test]
    fn extremal_count_matches_binomial() {
        for q in [5u64, 7, 11, 13, 25, 49] {
            let p = prime_power(q).unwrap().0;
            for n in 1..p {
                for k in 1..=n {
                    let d = weight_distribution(q, n, k).unwrap();
                    assert_eq!(d.count(k + 1), binomial_exact(n, k));
                    assert!(d.counts.keys().all(|w| *w > k && *w <= n + 1));
                }
            }
        }
    }

    #[test]
    fn regime_guard() {
        assert!(matches!(
            weight_distribution(5, 6, 1),
            Err(Error::UnsupportedRegime(m)) if m.contains("requires n < p")
        ));
        assert!(matches!(weight_distribution(25, 5, 1), Err(Error::UnsupportedRegime(_))));
        assert!(matches!(weight_distribution(6, 2, 1), Err(Error::Domain(_))));
        assert!(matches!(weight_distribution(7, 2, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn identity_examples() {
        assert!(total_identity_check(5, 3, 1).unwrap());
        assert!(total_identity_check(11, 7, 4).unwrap());
        assert!(total_identity_check(25, 4, 2).unwrap());
        assert!(total_identity_check(101, 90, 30).unwrap());
    }

    #[test]
    fn json_and_csv() {
        let d = weight_distribution(5, 3, 1).unwrap();
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"q":5,"n":3,"k":1,"source":"formula","counts":{"2":"3","3":"9","4":"13"}}"#
        );
        assert_eq!(d.to_csv(), "w,count\n2,3\n3,9\n4,13\n");
    }
}
