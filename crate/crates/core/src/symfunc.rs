//! Homogeneous symmetric polynomials with exact rational coefficients.
//!
//! A [`SymPoly`] is a map from partitions of its degree to coefficients,
//! tagged with the basis the keys refer to: monomial symmetric polynomials
//! `m_λ` or power-sum products `p_λ = p_{λ_1} p_{λ_2} ⋯`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, RationalMatrix};
use crate::partitions::{partitions_of, Partition};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `p`, `p/q` or a finite decimal such as `1.25` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let whole: BigInt = match whole.trim() {
            "" | "-" | "+" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let frac_num: BigInt = frac.parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let frac = Rational::new(frac_num, den);
        let whole = Rational::from_integer(whole);
        return Ok(if negative { whole - frac } else { whole + frac });
    }
    s.parse::<BigInt>()
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Monomial,
    #[serde(rename = "powersum")]
    PowerSum,
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "monomial" | "m" => Ok(Basis::Monomial),
            "powersum" | "power-sum" | "p" | "s" => Ok(Basis::PowerSum),
            _ => Err(Error::InvalidArgument(format!("unknown basis {s:?}"))),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::Monomial => "monomial",
            Basis::PowerSum => "powersum",
        })
    }
}

/// Scalars a symmetric polynomial can be evaluated over.
pub trait Scalar: Clone + Zero + One + Add<Output = Self> + Mul<Output = Self> {
    fn from_rational(r: &Rational) -> Self;
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoly {
    degree: usize,
    basis: Basis,
    coeffs: BTreeMap<Partition, Rational>,
}

impl SymPoly {
    pub fn zero(degree: usize, basis: Basis) -> Self {
        SymPoly {
            degree,
            basis,
            coeffs: BTreeMap::new(),
        }
    }

    /// Collects terms, summing repeated keys and dropping zeros.
    pub fn from_terms<I>(degree: usize, basis: Basis, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Partition, Rational)>,
    {
        let mut poly = SymPoly::zero(degree, basis);
        for (key, c) in terms {
            poly.add_term(key, c)?;
        }
        Ok(poly)
    }

    /// `m_λ`.
    pub fn monomial(lambda: Partition) -> Self {
        Self::unit(lambda, Basis::Monomial)
    }

    /// `p_λ`.
    pub fn power_sum(lambda: Partition) -> Self {
        Self::unit(lambda, Basis::PowerSum)
    }

    fn unit(lambda: Partition, basis: Basis) -> Self {
        let mut coeffs = BTreeMap::new();
        let degree = lambda.weight();
        coeffs.insert(lambda, Rational::one());
        SymPoly {
            degree,
            basis,
            coeffs,
        }
    }

    pub fn add_term(&mut self, key: Partition, c: Rational) -> Result<()> {
        if key.weight() != self.degree {
            return Err(Error::KeyWeight {
                weight: key.weight(),
                key,
                degree: self.degree,
            });
        }
        if c.is_zero() {
            return Ok(());
        }
        let entry = self.coeffs.entry(key).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeff(&self, key: &Partition) -> Rational {
        self.coeffs.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms in descending lexicographic order of the keys.
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &Rational)> {
        self.coeffs.iter().rev()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_compatible(&self, other: &SymPoly) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        if self.basis != other.basis {
            return Err(Error::BasisMismatch(self.basis, other.basis));
        }
        Ok(())
    }

    pub fn add(&self, other: &SymPoly) -> Result<SymPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_term(k.clone(), v.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SymPoly) -> Result<SymPoly> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> SymPoly {
        if c.is_zero() {
            return SymPoly::zero(self.degree, self.basis);
        }
        SymPoly {
            degree: self.degree,
            basis: self.basis,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (k.clone(), v * c))
                .collect(),
        }
    }

    /// Exact equality; comparing across degrees or bases is an error.
    pub fn same_as(&self, other: &SymPoly) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.coeffs == other.coeffs)
    }

    pub fn to_basis(&self, basis: Basis) -> Result<SymPoly> {
        match (self.basis, basis) {
            (a, b) if a == b => Ok(self.clone()),
            (Basis::PowerSum, Basis::Monomial) => Ok(to_monomial(self)),
            (Basis::Monomial, Basis::PowerSum) => m_to_p(self),
            _ => unreachable!(),
        }
    }

    /// Value at the point `x` (one entry per variable).
    ///
    /// In the monomial basis `m_λ(x)` is the sum over distinct rearrangements of
    /// `λ` padded to `x.len()` parts, and vanishes when `λ` has more parts than
    /// variables.
    pub fn evaluate<T: Scalar>(&self, x: &[T]) -> T {
        match self.basis {
            Basis::Monomial => self.coeffs.iter().fold(T::zero(), |acc, (k, c)| {
                acc + T::from_rational(c) * monomial_value(k, x)
            }),
            Basis::PowerSum => {
                let sums = power_sums(x, max_part(self.coeffs.keys()));
                self.evaluate_power_sums(&sums)
                    .expect("power-sum basis checked above")
            }
        }
    }

    /// Value of a power-sum-basis polynomial given `p[k-1] = p_k`.
    pub fn evaluate_power_sums<T: Scalar>(&self, p: &[T]) -> Result<T> {
        if self.basis != Basis::PowerSum {
            return Err(Error::BasisMismatch(self.basis, Basis::PowerSum));
        }
        let needed = max_part(self.coeffs.keys());
        if p.len() < needed {
            return Err(Error::InvalidArgument(format!(
                "need {needed} power sums, got {}",
                p.len()
            )));
        }
        Ok(self.coeffs.iter().fold(T::zero(), |acc, (k, c)| {
            let prod = k
                .parts()
                .iter()
                .fold(T::one(), |acc, &part| acc * p[part - 1].clone());
            acc + T::from_rational(c) * prod
        }))
    }

    /// Floating-point copy for repeated evaluation.
    pub fn to_f64(&self) -> F64Poly {
        F64Poly {
            basis: self.basis,
            terms: self
                .coeffs
                .iter()
                .map(|(k, c)| (k.clone(), to_f64(c)))
                .collect(),
        }
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // power sums read from s1^f up, monomials from m_f down
        let ordered: Vec<(&Partition, &Rational)> = match self.basis {
            Basis::PowerSum => self.coeffs.iter().collect(),
            Basis::Monomial => self.terms().collect(),
        };
        for (i, (k, c)) in ordered.into_iter().enumerate() {
            let negative = c < &Rational::zero();
            let abs = if negative { -c.clone() } else { c.clone() };
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let label = term_label(self.basis, k);
            if abs.is_one() && !k.is_empty() {
                write!(f, "{label}")?;
            } else if k.is_empty() {
                write!(f, "{abs}")?;
            } else {
                write!(f, "{abs} {label}")?;
            }
        }
        Ok(())
    }
}

/// Plain-text label of a basis element: `s1^2 s2` for power sums, `m(2,1)` for monomials.
pub fn term_label(basis: Basis, key: &Partition) -> String {
    match basis {
        Basis::Monomial => format!("m({key})"),
        Basis::PowerSum => {
            if key.is_empty() {
                return "1".to_string();
            }
            let mut mult = key.multiplicities();
            mult.reverse();
            mult.iter()
                .map(|&(k, m)| {
                    if m == 1 {
                        format!("s{k}")
                    } else {
                        format!("s{k}^{m}")
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        }
    }
}

/// LaTeX label of a basis element: `s_1^{2} s_2` or `m_{(2,1)}`.
pub fn term_label_latex(basis: Basis, key: &Partition) -> String {
    match basis {
        Basis::Monomial => format!("m_{{({key})}}"),
        Basis::PowerSum => {
            let mut mult = key.multiplicities();
            mult.reverse();
            mult.iter()
                .map(|&(k, m)| {
                    if m == 1 {
                        format!("s_{{{k}}}")
                    } else {
                        format!("s_{{{k}}}^{{{m}}}")
                    }
                })
                .collect::<Vec<_>>()
                .join(" ")
        }
    }
}

fn max_part<'a>(keys: impl Iterator<Item = &'a Partition>) -> usize {
    keys.map(|k| k.part(0)).max().unwrap_or(0)
}

/// `[p_1(x), …, p_k(x)]`.
pub fn power_sums<T: Scalar>(x: &[T], k: usize) -> Vec<T> {
    let mut sums = vec![T::zero(); k];
    for xi in x {
        let mut pow = xi.clone();
        for s in sums.iter_mut() {
            *s = s.clone() + pow.clone();
            pow = pow * xi.clone();
        }
    }
    sums
}

/// `m_λ(x)` by a pass over the variables, tracking which parts are still unplaced.
fn monomial_value<T: Scalar>(lambda: &Partition, x: &[T]) -> T {
    if lambda.len() > x.len() {
        return T::zero();
    }
    let mult = lambda.multiplicities();
    let top = lambda.part(0);
    // remaining multiplicity of each distinct part value -> accumulated value
    let mut states: BTreeMap<Vec<usize>, T> = BTreeMap::new();
    states.insert(mult.iter().map(|&(_, m)| m).collect(), T::one());
    for xi in x {
        let mut pows = Vec::with_capacity(top + 1);
        pows.push(T::one());
        for k in 1..=top {
            let next = pows[k - 1].clone() * xi.clone();
            pows.push(next);
        }
        let mut next: BTreeMap<Vec<usize>, T> = BTreeMap::new();
        for (state, val) in &states {
            let slot = next.entry(state.clone()).or_insert_with(T::zero);
            *slot = slot.clone() + val.clone();
            for (d, &(part, _)) in mult.iter().enumerate() {
                if state[d] == 0 {
                    continue;
                }
                let mut s = state.clone();
                s[d] -= 1;
                let slot = next.entry(s).or_insert_with(T::zero);
                *slot = slot.clone() + val.clone() * pows[part].clone();
            }
        }
        states = next;
    }
    states.remove(&vec![0; mult.len()]).unwrap_or_else(T::zero)
}

/// Floating-point symmetric polynomial for hot evaluation loops.
#[derive(Clone, Debug)]
pub struct F64Poly {
    basis: Basis,
    terms: Vec<(Partition, f64)>,
}

impl F64Poly {
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        match self.basis {
            Basis::Monomial => self
                .terms
                .iter()
                .map(|(k, c)| c * monomial_value(k, x))
                .sum(),
            Basis::PowerSum => {
                let sums = power_sums(x, max_part(self.terms.iter().map(|(k, _)| k)));
                self.evaluate_power_sums(&sums)
            }
        }
    }

    /// Power-sum basis only: value given `p[k-1] = p_k`.
    pub fn evaluate_power_sums(&self, p: &[f64]) -> f64 {
        debug_assert_eq!(self.basis, Basis::PowerSum);
        self.terms
            .iter()
            .map(|(k, c)| c * k.parts().iter().map(|&part| p[part - 1]).product::<f64>())
            .sum()
    }
}

/// `m_μ · p_r` expanded in the monomial basis.
fn times_power_sum(
    poly: &BTreeMap<Partition, Rational>,
    r: usize,
) -> BTreeMap<Partition, Rational> {
    let mut out: BTreeMap<Partition, Rational> = BTreeMap::new();
    for (mu, c) in poly {
        let mut candidates: Vec<Partition> = mu
            .multiplicities()
            .iter()
            .map(|&(v, _)| {
                let mut parts = mu.parts().to_vec();
                let pos = parts.iter().position(|&q| q == v).unwrap();
                parts[pos] += r;
                Partition::from_unsorted(parts)
            })
            .collect();
        let mut appended = mu.parts().to_vec();
        appended.push(r);
        candidates.push(Partition::from_unsorted(appended));
        candidates.sort();
        candidates.dedup();

        for nu in candidates {
            // number of ways x^ν = x^α · x_i^r with α a rearrangement of μ
            let ways = (0..nu.len())
                .filter(|&i| {
                    nu.part(i) >= r && {
                        let mut parts = nu.parts().to_vec();
                        parts[i] -= r;
                        Partition::from_unsorted(parts) == *mu
                    }
                })
                .count();
            if ways > 0 {
                *out.entry(nu).or_insert_with(Rational::zero) += c * int(ways as i64);
            }
        }
    }
    out
}

/// `p_λ` in the monomial basis, by multiplying in one power sum at a time.
pub fn p_to_m(lambda: &Partition) -> SymPoly {
    let mut acc: BTreeMap<Partition, Rational> = BTreeMap::new();
    acc.insert(Partition::empty(), Rational::one());
    for &part in lambda.parts() {
        acc = times_power_sum(&acc, part);
    }
    acc.retain(|_, v| !v.is_zero());
    SymPoly {
        degree: lambda.weight(),
        basis: Basis::Monomial,
        coeffs: acc,
    }
}

/// Any power-sum-basis polynomial in the monomial basis.
pub fn to_monomial(poly: &SymPoly) -> SymPoly {
    if poly.basis == Basis::Monomial {
        return poly.clone();
    }
    let mut out = SymPoly::zero(poly.degree, Basis::Monomial);
    for (k, c) in &poly.coeffs {
        for (mu, v) in p_to_m(k).coeffs {
            out.add_term(mu, v * c).expect("same degree");
        }
    }
    out
}

/// Change-of-basis matrices for one degree, indexed by [`partitions_of`] order.
#[derive(Debug)]
pub struct BasisChange {
    pub partitions: Vec<Partition>,
    index: HashMap<Partition, usize>,
    /// `p_to_m[μ][λ]` is the coefficient of `m_μ` in `p_λ`.
    pub p_to_m: RationalMatrix,
    pub m_to_p: RationalMatrix,
}

impl BasisChange {
    fn build(f: usize) -> Result<Self> {
        let partitions = partitions_of(f);
        let index: HashMap<Partition, usize> = partitions
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let k = partitions.len();
        let mut p_to_m_mat = vec![vec![Rational::zero(); k]; k];
        for (col, lambda) in partitions.iter().enumerate() {
            for (mu, c) in p_to_m(lambda).coeffs {
                p_to_m_mat[index[&mu]][col] = c;
            }
        }
        let m_to_p_mat = linalg::invert(&p_to_m_mat).ok_or(Error::SingularSystem(f))?;
        Ok(BasisChange {
            partitions,
            index,
            p_to_m: p_to_m_mat,
            m_to_p: m_to_p_mat,
        })
    }

    pub fn index_of(&self, lambda: &Partition) -> Option<usize> {
        self.index.get(lambda).copied()
    }
}

/// Memoised change of basis for degree `f`.
pub fn basis_change(f: usize) -> Result<Arc<BasisChange>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<BasisChange>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&f) {
        return Ok(hit.clone());
    }
    let built = Arc::new(BasisChange::build(f)?);
    let mut guard = cache.lock().unwrap();
    Ok(guard.entry(f).or_insert(built).clone())
}

/// Monomial-basis polynomial rewritten in power sums.
pub fn m_to_p(poly: &SymPoly) -> Result<SymPoly> {
    if poly.basis != Basis::Monomial {
        return Err(Error::BasisMismatch(poly.basis, Basis::Monomial));
    }
    let change = basis_change(poly.degree)?;
    let mut v = vec![Rational::zero(); change.partitions.len()];
    for (k, c) in &poly.coeffs {
        v[change.index[k]] = c.clone();
    }
    let solved = linalg::mul_vec(&change.m_to_p, &v);
    SymPoly::from_terms(
        poly.degree,
        Basis::PowerSum,
        change.partitions.iter().cloned().zip(solved),
    )
}
