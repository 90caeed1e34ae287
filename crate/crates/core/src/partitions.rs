//! Integer partitions and the scalar statistics attached to them.
//!
//! A [`Partition`] is stored without trailing zeros; callers that need a
//! fixed number of parts use [`Partition::padded`]. The derived `Ord` is the
//! plain lexicographic order on parts, so [`partitions_of`] (descending
//! lexicographic) is a linear extension of the dominance order with the
//! one-row partition first and the one-column partition last.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Builds a partition from nonincreasing parts. Trailing zeros are dropped.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotNonincreasing(parts));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    /// Sorts arbitrary nonnegative parts into a partition.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The one-row partition `(f)`.
    pub fn row(f: usize) -> Self {
        Partition::from_unsorted(vec![f])
    }

    /// The one-column partition `(1^f)`.
    pub fn column(f: usize) -> Self {
        Partition { parts: vec![1; f] }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Part `i` (zero-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Parts padded with zeros to length `n`. Fails if there are more than `n` parts.
    pub fn padded(&self, n: usize) -> Result<Vec<usize>> {
        if self.len() > n {
            return Err(Error::TooManyParts {
                partition: self.clone(),
                n,
            });
        }
        let mut v = self.parts.clone();
        v.resize(n, 0);
        Ok(v)
    }

    /// `2κ`: every part doubled.
    pub fn doubled(&self) -> Self {
        Partition {
            parts: self.parts.iter().map(|p| 2 * p).collect(),
        }
    }

    /// Transpose of the Young diagram.
    pub fn conjugate(&self) -> Self {
        let first = self.part(0);
        let parts = (1..=first)
            .map(|k| self.parts.iter().filter(|&&p| p >= k).count())
            .collect();
        Partition { parts }
    }

    /// `(part size, multiplicity)` pairs in decreasing part size.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// True when every prefix sum of `self` is at most the matching prefix sum of `other`.
    /// Partitions of different weight are never comparable.
    pub fn is_dominated_by(&self, other: &Partition) -> bool {
        if self.weight() != other.weight() {
            return false;
        }
        let len = self.len().max(other.len());
        let (mut a, mut b) = (0, 0);
        for i in 0..len {
            a += self.part(i);
            b += other.part(i);
            if a > b {
                return false;
            }
        }
        true
    }

    /// `A(λ) = Σ λ_i²`.
    pub fn a_stat(&self) -> i64 {
        self.parts.iter().map(|&p| (p * p) as i64).sum()
    }

    /// `B(λ) = Σ i·λ_i` with one-based `i`.
    pub fn b_stat(&self) -> i64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| ((i + 1) * p) as i64)
            .sum()
    }
}

impl fmt::Display for Partition {
    /// Comma-joined parts, e.g. `2,1`; the empty partition prints as an empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.parts {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s);
        if s.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::ParsePartition(s.to_string()))?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All partitions of `f` in descending lexicographic order.
pub fn partitions_of(f: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for k in (1..=rest.min(max)).rev() {
            prefix.push(k);
            go(rest - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(f, f, &mut Vec::new(), &mut out);
    out
}

/// Dominance comparison `g ≤ f`. Partitions of different weight are a usage error.
pub fn dominance_leq(g: &Partition, f: &Partition) -> Result<bool> {
    if g.weight() != f.weight() {
        return Err(Error::WeightMismatch(g.weight(), f.weight()));
    }
    Ok(g.is_dominated_by(f))
}

/// `ρ(λ) = Σ λ_i(λ_i − i) = A(λ) − B(λ)`.
///
/// The recursion denominator `A_f − A_g + B_g − B_f` is `rho(f) − rho(g)`.
pub fn rho(lambda: &Partition) -> i64 {
    lambda.a_stat() - lambda.b_stat()
}

/// Laplace–Beltrami eigenvalue `Σ k_i(k_i + n − i − 1)` of a partition with at most `n` parts.
pub fn lb_eigenvalue(lambda: &Partition, n: usize) -> Result<i64> {
    if lambda.len() > n {
        return Err(Error::TooManyParts {
            partition: lambda.clone(),
            n,
        });
    }
    let n = n as i64;
    Ok(lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let k = k as i64;
            k * (k + n - (i as i64 + 1) - 1)
        })
        .sum())
}

/// Dimension `N(f_1, …, f_n)` of the `GL(n)` irreducible with highest weight `f`,
/// as the ratio of the difference products `D(f_1+n−1, …, f_n) / D(n−1, …, 0)`.
///
/// `f` is the full, zero-padded weight of length `n`.
pub fn gl_dimension(f: &[usize]) -> Result<BigUint> {
    if f.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::NotNonincreasing(f.to_vec()));
    }
    let n = f.len();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..n {
        for j in i + 1..n {
            num *= BigUint::from(f[i] - f[j] + j - i);
            den *= BigUint::from(j - i);
        }
    }
    Ok(num / den)
}

/// Degree `χ_λ(1)` of the symmetric-group irreducible, by the hook-length formula.
pub fn sym_group_degree(lambda: &Partition) -> BigUint {
    let conj = lambda.conjugate();
    let mut hooks = BigUint::one();
    for (i, &row) in lambda.parts().iter().enumerate() {
        for j in 0..row {
            let arm = row - j - 1;
            let leg = conj.part(j) - i - 1;
            hooks *= BigUint::from(arm + leg + 1);
        }
    }
    factorial(lambda.weight()) / hooks
}

pub(crate) fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}
