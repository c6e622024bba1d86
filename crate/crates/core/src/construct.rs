//! Explicit construction of monic multiples of `(x + 1)^k` with prescribed
//! zero coefficients.
//!
//! Writing `f = (x + 1)^k g` with `g = sum_j g_j x^j` monic of degree `n - k`,
//! the coefficients of `f` are `f_i = sum_j g_j C(k, i - j)`. Forcing `f_i = 0`
//! for every `i` in a set `I` is a linear system in `g_0, ..., g_{n-k-1}`. With
//! `|I| = n - k` (and characteristic zero or `n < p`) it has exactly one
//! solution, giving the unique extremal polynomial of weight `k + 1` whose
//! zero pattern below the leading term is `I`.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow};
use serde::Serialize;

use crate::counting::binomial_exact;
use crate::error::{Error, Result};
use crate::ff::{Field, FieldElement};
use crate::poly::Polynomial;

/// Partition of `{0, ..., n-1}` into forced-zero indices `I` and
/// allowed-nonzero indices `J`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SupportSpec {
    pub n: usize,
    zeros: BTreeSet<usize>,
}

impl SupportSpec {
    pub fn from_zeros(n: usize, zeros: impl IntoIterator<Item = usize>) -> Result<SupportSpec> {
        let zeros: BTreeSet<usize> = zeros.into_iter().collect();
        if let Some(bad) = zeros.iter().find(|i| **i >= n) {
            return Err(Error::domain(format!("index {bad} is not below n = {n}")));
        }
        Ok(SupportSpec { n, zeros })
    }

    pub fn from_allowed(n: usize, allowed: impl IntoIterator<Item = usize>) -> Result<SupportSpec> {
        let allowed: BTreeSet<usize> = allowed.into_iter().collect();
        if let Some(bad) = allowed.iter().find(|i| **i >= n) {
            return Err(Error::domain(format!("index {bad} is not below n = {n}")));
        }
        Ok(SupportSpec {
            n,
            zeros: (0..n).filter(|i| !allowed.contains(i)).collect(),
        })
    }

    /// `I`, ascending.
    pub fn zeros(&self) -> Vec<usize> {
        self.zeros.iter().copied().collect()
    }

    /// `J`, ascending.
    pub fn allowed(&self) -> Vec<usize> {
        (0..self.n).filter(|i| !self.zeros.contains(i)).collect()
    }
}

/// `C(k, r)` mapped into `field`; zero for `r` outside `[0, k]`.
pub fn binomial_in_field(k: u64, r: i64, field: &Field) -> FieldElement {
    if r < 0 || r as u64 > k {
        return field.zero();
    }
    field.from_bigint(&BigInt::from(binomial_exact(k, r as u64)))
}

/// `sum_{j < n-k} g_j C(k, i-j) = -C(k, i-n+k)` for every `i` in `I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub field: Field,
    pub n: usize,
    pub k: usize,
    /// The index `i` of each equation.
    pub rows: Vec<usize>,
    /// `matrix[r][j]` multiplies `g_j`.
    pub matrix: Vec<Vec<FieldElement>>,
    pub rhs: Vec<FieldElement>,
}

impl LinearSystem {
    pub fn unknowns(&self) -> usize {
        self.n - self.k
    }
}

fn check_regime(n: usize, k: usize, field: &Field) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::domain(format!("requires 1 <= k <= n (k = {k}, n = {n})")));
    }
    let p = field.characteristic();
    if p > 0 && n as u64 >= p {
        return Err(Error::UnsupportedRegime(format!(
            "requires n < p (n = {n}, p = {p})"
        )));
    }
    Ok(())
}

pub fn build_system(n: usize, k: usize, support: &SupportSpec, field: &Field) -> Result<LinearSystem> {
    check_regime(n, k, field)?;
    if support.n != n {
        return Err(Error::domain(format!(
            "support is for degree {}, not {n}",
            support.n
        )));
    }
    let unknowns = n - k;
    let rows = support.zeros();
    let matrix = rows
        .iter()
        .map(|&i| {
            (0..unknowns)
                .map(|j| binomial_in_field(k as u64, i as i64 - j as i64, field))
                .collect()
        })
        .collect();
    let rhs = rows
        .iter()
        .map(|&i| binomial_in_field(k as u64, i as i64 - unknowns as i64, field).neg())
        .collect();
    Ok(LinearSystem {
        field: field.clone(),
        n,
        k,
        rows,
        matrix,
        rhs,
    })
}

/// Solution set of a [`LinearSystem`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<FieldElement>),
    /// `particular + span(basis)`, with `basis` nonempty.
    Affine {
        particular: Vec<FieldElement>,
        basis: Vec<Vec<FieldElement>>,
    },
    Inconsistent,
}

impl Solution {
    /// Dimension of the solution space; `None` when inconsistent.
    pub fn dimension(&self) -> Option<usize> {
        match self {
            Solution::Unique(_) => Some(0),
            Solution::Affine { basis, .. } => Some(basis.len()),
            Solution::Inconsistent => None,
        }
    }
}

/// Gaussian elimination to reduced row echelon form. Pivots are the first
/// nonzero entry found scanning columns left to right.
pub fn solve_exact(system: &LinearSystem) -> Solution {
    let field = &system.field;
    let cols = system.unknowns();
    let mut rows: Vec<Vec<FieldElement>> = system
        .matrix
        .iter()
        .zip(&system.rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut next = 0;
    for col in 0..cols {
        let Some(found) = (next..rows.len()).find(|r| !rows[*r][col].is_zero()) else {
            continue;
        };
        rows.swap(next, found);
        let inv = rows[next][col].inv().expect("pivot is nonzero");
        rows[next] = rows[next].iter().map(|x| x.mul_same(&inv)).collect();
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = x.sub_same(&factor.mul_same(p));
            }
        }
        pivots.push(col);
        next += 1;
        if next == rows.len() {
            break;
        }
    }
    if rows[next..].iter().any(|row| !row[cols].is_zero()) {
        return Solution::Inconsistent;
    }
    let mut particular = vec![field.zero(); cols];
    for (r, &col) in pivots.iter().enumerate() {
        particular[col] = rows[r][cols].clone();
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return Solution::Unique(particular);
    }
    let basis = free
        .iter()
        .map(|&fc| {
            let mut v = vec![field.zero(); cols];
            v[fc] = field.one();
            for (r, &col) in pivots.iter().enumerate() {
                v[col] = rows[r][fc].neg();
            }
            v
        })
        .collect();
    Solution::Affine { particular, basis }
}

/// Number of solutions of a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionCount {
    Finite(BigUint),
    Infinite,
}

/// `q^d` for a `d`-dimensional solution space over `F_q`, `0` when
/// inconsistent, infinite over the rationals when `d > 0`.
pub fn solution_count(system: &LinearSystem) -> SolutionCount {
    match (solve_exact(system).dimension(), system.field.order()) {
        (None, _) => SolutionCount::Finite(BigUint::from(0u32)),
        (Some(0), _) => SolutionCount::Finite(BigUint::one()),
        (Some(d), Some(q)) => SolutionCount::Finite(Pow::pow(BigUint::from(q), d)),
        (Some(_), None) => SolutionCount::Infinite,
    }
}

/// `(x + 1)^k (x^{n-k} + sum_j g_j x^j)` for a solution vector `g_lower`.
pub fn polynomial_from_solution(system: &LinearSystem, g_lower: &[FieldElement]) -> Result<Polynomial> {
    let field = &system.field;
    let mut g = g_lower.to_vec();
    g.push(field.one());
    let g = Polynomial::from_coeffs(field, g)?;
    let base = Polynomial::from_ints(field, &[1, 1]).pow(system.k as u64);
    base.mul(&g)
}

/// The unique monic degree-`n` multiple of `(x + 1)^k` vanishing on `I`
/// (`|I| = n - k`). It has weight exactly `k + 1`.
pub fn construct_extremal(n: usize, k: usize, support: &SupportSpec, field: &Field) -> Result<Polynomial> {
    check_regime(n, k, field)?;
    if support.zeros.len() != n - k {
        return Err(Error::domain(format!(
            "needs exactly n - k = {} forced zeros, got {}",
            n - k,
            support.zeros.len()
        )));
    }
    let system = build_system(n, k, support, field)?;
    match solve_exact(&system) {
        Solution::Unique(g) => polynomial_from_solution(&system, &g),
        other => Err(Error::domain(format!(
            "system is singular (dimension {:?}) outside the supported regime",
            other.dimension()
        ))),
    }
}

/// `C(n, k)`: the number of extremal polynomials of degree `n`.
pub fn count_extremal_formula(n: u64, k: u64) -> BigUint {
    binomial_exact(n, k)
}

/// Monic degree-`p` multiples of `(x + 1)^k` over `F_p` with weight at most `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NEqualsP {
    pub p: u64,
    pub k: u64,
    /// `C(p - 1, k) + 1`
    pub count: BigUint,
    /// `x^p + 1` first, then `x * h` for each extremal `h` of degree `p - 1`.
    pub polynomials: Vec<Polynomial>,
    pub description: String,
}

/// The degree `n = p` boundary case: distinct zero patterns can give the same
/// polynomial. The survivors are `x^p + 1 = (x + 1)^p` together with `x` times
/// each of the `C(p-1, k)` extremal polynomials of degree `p - 1`.
pub fn example_n_equals_p(p: u64, k: u64) -> Result<NEqualsP> {
    let field = Field::finite(p, 1)?;
    if k == 0 || k >= p {
        return Err(Error::domain(format!("requires 0 < k < p (k = {k}, p = {p})")));
    }
    let count = binomial_exact(p - 1, k) + 1u32;
    let mut polynomials = vec![Polynomial::from_ints(&field, &[1, 1]).pow(p)];
    let n = (p - 1) as usize;
    let zeros_needed = n - k as usize;
    for zeros in subsets_of_size(n, zeros_needed) {
        let spec = SupportSpec::from_zeros(n, zeros)?;
        polynomials.push(construct_extremal(n, k as usize, &spec, &field)?.shift(1));
    }
    let description = format!(
        "x^{p} + 1 and {} polynomials of weight {} divisible by x",
        polynomials.len() - 1,
        k + 1
    );
    Ok(NEqualsP {
        p,
        k,
        count,
        polynomials,
        description,
    })
}

/// All `size`-subsets of `{0, ..., n-1}` in lexicographic order.
pub fn subsets_of_size(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size > n {
        return out;
    }
    let mut current: Vec<usize> = (0..size).collect();
    loop {
        out.push(current.clone());
        let Some(pos) = (0..size).rev().find(|&i| current[i] < n - size + i) else {
            return out;
        };
        current[pos] += 1;
        for i in pos + 1..size {
            current[i] = current[i - 1] + 1;
        }
    }
}
