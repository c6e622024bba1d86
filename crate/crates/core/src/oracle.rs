//! Exhaustive enumeration over finite fields, used as ground truth for the
//! closed-form counts and the weight bounds.
//!
//! Monic degree-`n` multiples of `(x + 1)^k` are enumerated through their
//! cofactors `g` (monic, degree `n - k`), in lexicographic order of
//! `(g_{n-k-1}, ..., g_0)` with elements ordered as in
//! [`Field::enumerate_elements`]. Work is split by the value of the top
//! non-leading cofactor coefficient; partial tallies are summed in partition
//! order, so the result does not depend on the number of workers.

use std::ops::Range;
use std::thread;
use std::time::Instant;

use num_bigint::BigUint;
use serde::Serialize;

use crate::bounds::weight_lower_bound;
use crate::counting::{binomial_exact, Source, WeightDistribution};
use crate::error::{Error, Result};
use crate::ff::{Field, FieldElement};
use crate::poly::Polynomial;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Largest `n` for which per-support tallies (`2^n` buckets) are kept.
pub const MAX_SUPPORT_TALLY_DEGREE: usize = 20;

/// Parameters of a sweep over the monic degree-`n` multiples of `(x + 1)^k`
/// in `F_q[x]`.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    field: Field,
    n: usize,
    k: usize,
    budget: u64,
    partitions: usize,
}

impl SweepConfig {
    pub fn new(q: u64, n: usize, k: usize) -> Result<SweepConfig> {
        Ok(SweepConfig::with_field(&Field::from_order(q)?, n, k))
    }

    pub fn with_field(field: &Field, n: usize, k: usize) -> SweepConfig {
        SweepConfig {
            field: field.clone(),
            n,
            k,
            budget: DEFAULT_BUDGET,
            partitions: 1,
        }
    }

    pub fn budget(mut self, budget: u64) -> SweepConfig {
        self.budget = budget;
        self
    }

    /// Number of workers; `1` runs on the calling thread.
    pub fn partitions(mut self, partitions: usize) -> SweepConfig {
        self.partitions = partitions.max(1);
        self
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.order().unwrap_or(0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Checks the parameters and returns the sweep size `q^{n-k}`.
    pub fn validate(&self) -> Result<u64> {
        let q = self
            .field
            .order()
            .ok_or_else(|| Error::NotEnumerable(self.field.to_string()))?;
        if self.k == 0 || self.k > self.n {
            return Err(Error::domain(format!(
                "requires 1 <= k <= n (k = {}, n = {})",
                self.k, self.n
            )));
        }
        let exp = u32::try_from(self.n - self.k).unwrap_or(u32::MAX);
        q.checked_pow(exp)
            .filter(|c| *c <= self.budget)
            .ok_or_else(|| {
                Error::Capacity(format!(
                    "{q}^{} cofactors exceed the enumeration budget {}",
                    self.n - self.k,
                    self.budget
                ))
            })
    }
}

impl Serialize for SweepConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SweepConfig", 4)?;
        st.serialize_field("q", &self.q())?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("budget", &self.budget)?;
        st.end()
    }
}

/// Arithmetic on element indices (positions in the enumeration order).
struct Tables {
    q: u32,
    p: u32,
    m: u32,
    add: Option<Vec<u32>>,
    neg: Vec<u32>,
    log: Vec<u32>,
    exp: Vec<u32>,
}

const ADD_TABLE_MAX_ORDER: u32 = 256;

impl Tables {
    fn new(field: &Field) -> Result<Tables> {
        let ff = field
            .as_finite()
            .ok_or_else(|| Error::NotEnumerable(field.to_string()))?;
        let q = ff.order() as u32;
        let p = ff.characteristic() as u32;
        let m = ff.degree();
        let elements = field.enumerate_elements()?;
        let index = |e: &FieldElement| e.index().expect("finite element") as u32;

        let one = field.one();
        let mut exp = Vec::with_capacity(q as usize - 1);
        for candidate in &elements[1..] {
            exp.clear();
            let mut cur = one.clone();
            loop {
                exp.push(index(&cur));
                cur = cur.mul(candidate)?;
                if cur.is_one() {
                    break;
                }
            }
            if exp.len() == q as usize - 1 {
                break;
            }
        }
        let mut log = vec![0u32; q as usize];
        for (i, e) in exp.iter().enumerate() {
            log[*e as usize] = i as u32;
        }
        let neg = elements.iter().map(|e| index(&e.neg())).collect();
        let mut tables = Tables {
            q,
            p,
            m,
            add: None,
            neg,
            log,
            exp,
        };
        if q <= ADD_TABLE_MAX_ORDER {
            let mut add = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = tables.add_digits(a, b);
                }
            }
            tables.add = Some(add);
        }
        Ok(tables)
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.m {
            out += ((a % self.p + b % self.p) % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add {
            Some(t) => t[(a * self.q + b) as usize],
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.q - 1;
        let e = (self.log[a as usize] + self.log[b as usize]) % order;
        self.exp[e as usize]
    }
}

/// Incremental walk over the cofactors of one partition.
struct Walker<'a> {
    tables: &'a Tables,
    base: &'a [u32],
    k: usize,
    g: Vec<u32>,
    f: Vec<u32>,
    top_end: u32,
}

impl<'a> Walker<'a> {
    fn new(tables: &'a Tables, base: &'a [u32], n: usize, top: Range<u32>) -> Walker<'a> {
        let k = base.len() - 1;
        let d = n - k;
        let mut f = vec![0u32; n + 1];
        for (r, b) in base.iter().enumerate() {
            f[d + r] = *b;
        }
        let mut g = vec![0u32; d];
        if d > 0 && top.start != 0 {
            g[d - 1] = top.start;
            for (r, b) in base.iter().enumerate() {
                let i = d - 1 + r;
                f[i] = tables.add(f[i], tables.mul(top.start, *b));
            }
        }
        Walker {
            tables,
            base,
            k,
            g,
            f,
            top_end: top.end,
        }
    }

    /// Moves to the next cofactor; false once the partition is exhausted.
    fn advance(&mut self) -> bool {
        let d = self.g.len();
        let t = self.tables;
        for j in 0..d {
            let old = self.g[j];
            let top = j == d - 1;
            let limit = if top { self.top_end } else { t.q };
            let new = if old + 1 < limit {
                old + 1
            } else if top {
                return false;
            } else {
                0
            };
            let delta = t.sub(new, old);
            for r in 0..=self.k {
                let i = j + r;
                self.f[i] = t.add(self.f[i], t.mul(delta, self.base[r]));
            }
            self.g[j] = new;
            if new != 0 {
                return true;
            }
        }
        false
    }
}

/// Per-worker accumulator fed with the coefficient vector (element indices,
/// degree 0 to `n`) of every enumerated multiple.
trait Visitor: Send + Sized {
    fn visit(&mut self, f: &[u32]);
    fn merge(self, other: Self) -> Self;
}

/// Runs a fresh visitor per partition and merges them in partition order.
fn sweep<V: Visitor>(cfg: &SweepConfig, make: impl Fn() -> V + Sync) -> Result<V> {
    cfg.validate()?;
    let tables = Tables::new(&cfg.field)?;
    let p = BigUint::from(tables.p);
    let base: Vec<u32> = (0..=cfg.k as u64)
        .map(|r| {
            let c = binomial_exact(cfg.k as u64, r) % &p;
            u32::try_from(c).expect("residue below p")
        })
        .collect();
    let d = cfg.n - cfg.k;
    let ranges: Vec<Range<u32>> = if d == 0 {
        vec![0..1]
    } else {
        let q = tables.q as usize;
        let parts = cfg.partitions.min(q);
        (0..parts)
            .map(|i| (i * q / parts) as u32..((i + 1) * q / parts) as u32)
            .filter(|r| !r.is_empty())
            .collect()
    };
    let run = |range: Range<u32>| -> V {
        let mut visitor = make();
        let mut walker = Walker::new(&tables, &base, cfg.n, range);
        loop {
            visitor.visit(&walker.f);
            if !walker.advance() {
                break;
            }
        }
        visitor
    };
    let partials: Vec<V> = if ranges.len() == 1 {
        vec![run(ranges[0].clone())]
    } else {
        thread::scope(|s| {
            let handles: Vec<_> = ranges
                .iter()
                .cloned()
                .map(|r| s.spawn(|| run(r)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sweep worker panicked"))
                .collect()
        })
    };
    Ok(partials
        .into_iter()
        .reduce(V::merge)
        .expect("at least one partition"))
}

/// Counts of enumerated multiples per weight, also split by whether the
/// constant term is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightTally {
    pub by_weight: Vec<u64>,
    pub with_constant_term: Vec<u64>,
}

impl WeightTally {
    pub fn total(&self) -> u64 {
        self.by_weight.iter().sum()
    }

    /// Number of multiples with weight at most `w`.
    pub fn at_most(&self, w: usize) -> u64 {
        self.by_weight.iter().take(w + 1).sum()
    }
}

impl Visitor for WeightTally {
    #[inline]
    fn visit(&mut self, f: &[u32]) {
        let w = f.iter().filter(|c| **c != 0).count();
        self.by_weight[w] += 1;
        if f[0] != 0 {
            self.with_constant_term[w] += 1;
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.by_weight.iter_mut().zip(&other.by_weight) {
            *a += b;
        }
        for (a, b) in self.with_constant_term.iter_mut().zip(&other.with_constant_term) {
            *a += b;
        }
        self
    }
}

/// Weight tally of a full sweep.
pub fn weight_tally(cfg: &SweepConfig) -> Result<WeightTally> {
    let len = cfg.n + 2;
    sweep(cfg, || WeightTally {
        by_weight: vec![0; len],
        with_constant_term: vec![0; len],
    })
}

/// The enumerated weight distribution (`source = enumeration`).
pub fn empirical_weight_distribution(cfg: &SweepConfig) -> Result<WeightDistribution> {
    let tally = weight_tally(cfg)?;
    let counts = tally
        .by_weight
        .iter()
        .enumerate()
        .filter(|(_, c)| **c > 0)
        .map(|(w, c)| (w as u64, BigUint::from(*c)))
        .collect();
    Ok(WeightDistribution {
        q: cfg.q(),
        n: cfg.n as u64,
        k: cfg.k as u64,
        source: Source::Enumeration,
        counts,
    })
}

/// Number of multiples whose nonzero coefficients below `x^n` occupy exactly
/// each support `J`, indexed by the bitmask of `J`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportTally {
    pub n: usize,
    pub by_mask: Vec<u64>,
}

impl SupportTally {
    pub fn count(&self, support: &[usize]) -> u64 {
        let mask = support.iter().fold(0usize, |m, j| m | 1 << j);
        self.by_mask[mask]
    }
}

impl Visitor for SupportTally {
    #[inline]
    fn visit(&mut self, f: &[u32]) {
        let mask = f[..self.n]
            .iter()
            .enumerate()
            .fold(0usize, |m, (i, c)| if *c != 0 { m | 1 << i } else { m });
        self.by_mask[mask] += 1;
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.by_mask.iter_mut().zip(&other.by_mask) {
            *a += b;
        }
        self
    }
}

/// Per-support counts for every `J` at once (`n` at most
/// [`MAX_SUPPORT_TALLY_DEGREE`]).
pub fn empirical_support_tally(cfg: &SweepConfig) -> Result<SupportTally> {
    if cfg.n > MAX_SUPPORT_TALLY_DEGREE {
        return Err(Error::Capacity(format!(
            "per-support tallies need n <= {MAX_SUPPORT_TALLY_DEGREE}"
        )));
    }
    let n = cfg.n;
    sweep(cfg, || SupportTally {
        n,
        by_mask: vec![0; 1 << n],
    })
}

struct FixedSupport {
    allowed: Vec<bool>,
    count: u64,
}

impl Visitor for FixedSupport {
    #[inline]
    fn visit(&mut self, f: &[u32]) {
        if self.allowed.iter().zip(f).all(|(a, c)| *a == (*c != 0)) {
            self.count += 1;
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.count += other.count;
        self
    }
}

/// Number of multiples with `f_j != 0` for `j` in `support` and `f_i = 0` for
/// every other `i < n`.
pub fn empirical_fixed_support_count(cfg: &SweepConfig, support: &[usize]) -> Result<BigUint> {
    if let Some(bad) = support.iter().find(|j| **j >= cfg.n) {
        return Err(Error::domain(format!("index {bad} is not below n = {}", cfg.n)));
    }
    let mut allowed = vec![false; cfg.n];
    for j in support {
        allowed[*j] = true;
    }
    let result = sweep(cfg, || FixedSupport {
        allowed: allowed.clone(),
        count: 0,
    })?;
    Ok(BigUint::from(result.count))
}

/// The multiples themselves, built with generic polynomial arithmetic.
pub struct Multiples {
    elements: Vec<FieldElement>,
    base: Polynomial,
    digits: Vec<usize>,
    done: bool,
}

impl Iterator for Multiples {
    type Item = Polynomial;

    fn next(&mut self) -> Option<Polynomial> {
        if self.done {
            return None;
        }
        let field = self.base.field().clone();
        let mut coeffs: Vec<FieldElement> = self
            .digits
            .iter()
            .map(|i| self.elements[*i].clone())
            .collect();
        coeffs.push(field.one());
        let g = Polynomial::from_coeffs(&field, coeffs).expect("same field");
        match self.digits.iter().position(|i| *i + 1 < self.elements.len()) {
            Some(pos) => {
                self.digits[pos] += 1;
                self.digits[..pos].iter_mut().for_each(|i| *i = 0);
            }
            None => self.done = true,
        }
        Some(self.base.mul(&g).expect("same field"))
    }
}

/// Streams all `q^{n-k}` multiples in enumeration order.
pub fn enumerate_multiples(cfg: &SweepConfig) -> Result<Multiples> {
    cfg.validate()?;
    let field = cfg.field.clone();
    Ok(Multiples {
        elements: field.enumerate_elements()?,
        base: Polynomial::from_ints(&field, &[1, 1]).pow(cfg.k as u64),
        digits: vec![0; cfg.n - cfg.k],
        done: false,
    })
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// Result of an enumeration run.
#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub distribution: WeightDistribution,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

/// Enumerated distribution packaged for output; timing is opt-in so that
/// reports stay byte-for-byte reproducible by default.
pub fn distribution_report(cfg: &SweepConfig, timing: bool) -> Result<SweepReport> {
    let start = Instant::now();
    let distribution = empirical_weight_distribution(cfg)?;
    Ok(SweepReport {
        config: cfg.clone(),
        distribution,
        wall_time_ms: timing.then(|| elapsed_ms(start)),
    })
}

/// A polynomial beating the weight bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub poly: String,
    pub k: usize,
    pub weight: usize,
    #[serde(serialize_with = "crate::serde_decimal")]
    pub bound: BigUint,
}

/// Lightest polynomial observed for one multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityRow {
    pub k: usize,
    #[serde(serialize_with = "crate::serde_decimal")]
    pub bound: BigUint,
    pub min_weight: usize,
    /// First polynomial of minimum weight in enumeration order.
    pub witness: String,
    /// Polynomials examined with this multiplicity.
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundSweepConfig {
    pub p: u64,
    pub max_degree: usize,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundSweepReport {
    pub config: BoundSweepConfig,
    pub examined: u64,
    pub violations: Vec<Violation>,
    pub witnesses: Vec<MultiplicityRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

#[derive(Clone)]
struct RowAcc {
    min_weight: usize,
    first_index: u64,
    witness: Polynomial,
    count: u64,
}

/// Checks the weight bound on every monic polynomial over `F_p` of degree at
/// most `max_degree` having `1` as a root. Polynomials are ordered by degree,
/// then lexicographically by `(f_{d-1}, ..., f_0)`.
pub fn bound_sweep(
    p: u64,
    max_degree: usize,
    budget: u64,
    partitions: usize,
    timing: bool,
) -> Result<BoundSweepReport> {
    let start = Instant::now();
    let field = Field::finite(p, 1)?;
    let mut total: u64 = 0;
    for d in 0..=max_degree {
        total = u32::try_from(d)
            .ok()
            .and_then(|d| p.checked_pow(d))
            .and_then(|c| total.checked_add(c))
            .filter(|t| *t <= budget)
            .ok_or_else(|| {
                Error::Capacity(format!(
                    "monic polynomials of degree <= {max_degree} over F_{p} exceed budget {budget}"
                ))
            })?;
    }
    let elements = field.enumerate_elements()?;
    let one = field.one();

    let decode = |mut index: u64| -> Polynomial {
        let mut d = 0u32;
        while index >= p.pow(d) {
            index -= p.pow(d);
            d += 1;
        }
        let mut coeffs: Vec<FieldElement> = (0..d)
            .map(|_| {
                let c = elements[(index % p) as usize].clone();
                index /= p;
                c
            })
            .collect();
        coeffs.push(one.clone());
        Polynomial::from_coeffs(&field, coeffs).expect("same field")
    };

    type Partial = (Vec<Option<RowAcc>>, Vec<(u64, Violation)>);
    let run = |range: Range<u64>| -> Result<Partial> {
        let mut rows: Vec<Option<RowAcc>> = vec![None; max_degree + 1];
        let mut violations = Vec::new();
        for index in range {
            let f = decode(index);
            let k = f.multiplicity_at(&one)?;
            if k == 0 {
                continue;
            }
            let weight = f.weight();
            let bound = weight_lower_bound(k as u64, &field);
            if BigUint::from(weight) < bound {
                violations.push((
                    index,
                    Violation {
                        poly: f.to_string(),
                        k,
                        weight,
                        bound,
                    },
                ));
            }
            let row = &mut rows[k];
            match row {
                Some(acc) => {
                    acc.count += 1;
                    if weight < acc.min_weight {
                        acc.min_weight = weight;
                        acc.first_index = index;
                        acc.witness = f;
                    }
                }
                None => {
                    *row = Some(RowAcc {
                        min_weight: weight,
                        first_index: index,
                        witness: f,
                        count: 1,
                    })
                }
            }
        }
        Ok((rows, violations))
    };

    let parts = partitions.max(1).min(total as usize) as u64;
    let ranges: Vec<Range<u64>> = (0..parts)
        .map(|i| i * total / parts..(i + 1) * total / parts)
        .collect();
    let partials: Vec<Result<Partial>> = if ranges.len() == 1 {
        vec![run(ranges[0].clone())]
    } else {
        thread::scope(|s| {
            let handles: Vec<_> = ranges
                .iter()
                .cloned()
                .map(|r| s.spawn(|| run(r)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sweep worker panicked"))
                .collect()
        })
    };

    let mut rows: Vec<Option<RowAcc>> = vec![None; max_degree + 1];
    let mut violations: Vec<(u64, Violation)> = Vec::new();
    for partial in partials {
        let (part_rows, part_violations) = partial?;
        violations.extend(part_violations);
        for (slot, other) in rows.iter_mut().zip(part_rows) {
            let Some(other) = other else { continue };
            match slot {
                None => *slot = Some(other),
                Some(acc) => {
                    acc.count += other.count;
                    if (other.min_weight, other.first_index) < (acc.min_weight, acc.first_index) {
                        acc.min_weight = other.min_weight;
                        acc.first_index = other.first_index;
                        acc.witness = other.witness;
                    }
                }
            }
        }
    }
    violations.sort_by_key(|(i, _)| *i);
    let witnesses = rows
        .into_iter()
        .enumerate()
        .filter_map(|(k, acc)| {
            acc.map(|acc| MultiplicityRow {
                k,
                bound: weight_lower_bound(k as u64, &field),
                min_weight: acc.min_weight,
                witness: acc.witness.to_string(),
                count: acc.count,
            })
        })
        .collect();
    Ok(BoundSweepReport {
        config: BoundSweepConfig {
            p,
            max_degree,
            budget,
        },
        examined: total,
        violations: violations.into_iter().map(|(_, v)| v).collect(),
        witnesses,
        wall_time_ms: timing.then(|| elapsed_ms(start)),
    })
}
