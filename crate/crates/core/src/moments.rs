//! Orthogonal-group moment integrals: exact values from the zonal expansion
//! and Monte Carlo estimates of the same quantities.
//!
//! For diagonal `A`, `B` of size `n` and Haar `Q`,
//!
//! ```text
//! E[(tr A Q B Qᵀ)^f] = 1/(2f−1)!! · Σ_{κ ⊢ f, ℓ(κ) ≤ n} χ_{2κ}(1) Z_κ(A) Z_κ(B) / Z_κ(I_n)
//! ```

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, ResidualConflict, Result};
use crate::haar::{OrthoMatrix, Sampler, SamplerKind};
use crate::partitions::{factorial, partitions_of, Partition};
use crate::stats::RunningMoments;
use crate::symfunc::{int, parse_rational, to_f64, Rational, SymPoly};
use crate::zonal::{cached_row, chi_doubled, odd_double_factorial, zonal_in_powersums};

fn from_big(n: BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Latent roots of a diagonal matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalSpec {
    eigenvalues: Vec<Rational>,
}

impl DiagonalSpec {
    pub fn new(eigenvalues: Vec<Rational>) -> Result<Self> {
        if eigenvalues.is_empty() {
            return Err(Error::InvalidArgument(
                "a diagonal spec needs at least one eigenvalue".into(),
            ));
        }
        Ok(DiagonalSpec { eigenvalues })
    }

    pub fn from_integers(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| int(v)).collect())
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[Rational] {
        &self.eigenvalues
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(to_f64).collect()
    }

    pub fn scaled(&self, c: &Rational) -> DiagonalSpec {
        DiagonalSpec {
            eigenvalues: self.eigenvalues.iter().map(|x| x * c).collect(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.eigenvalues.iter().all(|x| !x.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.eigenvalues.iter().all(Zero::is_zero)
    }
}

impl FromStr for DiagonalSpec {
    type Err = Error;

    /// Comma-separated rationals, e.g. `1,2,3/2`.
    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(',')
            .map(|t| parse_rational(t.trim()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }
}

impl fmt::Display for DiagonalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.eigenvalues.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

fn same_dimension(a: &DiagonalSpec, b: &DiagonalSpec) -> Result<usize> {
    if a.n() != b.n() {
        return Err(Error::InvalidArgument(format!(
            "A has {} eigenvalues but B has {}",
            a.n(),
            b.n()
        )));
    }
    Ok(a.n())
}

/// `c_n = n(n+2)⋯(n+2f−2)`, which is also `Z_(f)(I_n)`.
pub fn c_n(n: usize, f: usize) -> BigUint {
    (0..f).fold(BigUint::one(), |acc, k| acc * BigUint::from(n + 2 * k))
}

/// `Z_κ(x)`; zero when `κ` has more parts than there are variables.
pub fn zonal_value(kappa: &Partition, x: &[Rational]) -> Result<Rational> {
    if kappa.is_empty() {
        return Ok(Rational::one());
    }
    if kappa.len() > x.len() {
        return Ok(Rational::zero());
    }
    Ok(cached_row(kappa)?.evaluate(x))
}

fn identity_value(kappa: &Partition, n: usize) -> Result<Rational> {
    zonal_value(kappa, &vec![Rational::one(); n])
}

/// Partitions of `f` with at most `n` parts.
fn admissible(f: usize, n: usize) -> impl Iterator<Item = Partition> {
    partitions_of(f).into_iter().filter(move |k| k.len() <= n)
}

/// `E[(tr A Q B Qᵀ)^f]` over Haar `Q`, exactly.
pub fn exact_trace_power_integral(
    a: &DiagonalSpec,
    b: &DiagonalSpec,
    f: usize,
) -> Result<Rational> {
    let n = same_dimension(a, b)?;
    if f == 0 {
        return Ok(Rational::one());
    }
    let mut sum = Rational::zero();
    for kappa in admissible(f, n) {
        let za = zonal_value(&kappa, a.eigenvalues())?;
        let zb = zonal_value(&kappa, b.eigenvalues())?;
        if za.is_zero() || zb.is_zero() {
            continue;
        }
        sum += from_big(chi_doubled(&kappa)) * za * zb / identity_value(&kappa, n)?;
    }
    Ok(sum / from_big(odd_double_factorial(f)))
}

/// Coefficient of `m_g(β)·m_h(l)` in `E[(tr D_β Q D_l Qᵀ)^f]` for `n × n` matrices,
/// read off the bilinear zonal expansion. When `g` or `h` has more than `n`
/// parts the monomial vanishes and the value is the formal coefficient.
pub fn coefficient_extract(f: usize, n: usize, g: &Partition, h: &Partition) -> Result<Rational> {
    for p in [g, h] {
        if p.weight() != f {
            return Err(Error::WeightMismatch(p.weight(), f));
        }
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if f == 0 {
        return Ok(Rational::one());
    }
    let mut sum = Rational::zero();
    for kappa in admissible(f, n) {
        let row = cached_row(&kappa)?;
        let (bg, bh) = (row.coeff(g), row.coeff(h));
        if bg.is_zero() || bh.is_zero() {
            continue;
        }
        sum += from_big(chi_doubled(&kappa)) * bg * bh / identity_value(&kappa, n)?;
    }
    Ok(sum / from_big(odd_double_factorial(f)))
}

/// `(2f−1)!!·c_n·a_{g;h} − b_{(f),g}·b_{(f),h}` at a given `n`.
pub fn residual_coefficient_at(
    f: usize,
    n: usize,
    g: &Partition,
    h: &Partition,
) -> Result<Rational> {
    let top = Partition::row(f);
    if *g == top || *h == top {
        return Err(Error::InvalidArgument(format!(
            "residual coefficients exclude ({top}) on either side"
        )));
    }
    let a = coefficient_extract(f, n, g, h)?;
    let zf = cached_row(&top)?;
    Ok(from_big(odd_double_factorial(f)) * from_big(c_n(n, f)) * a - zf.coeff(g) * zf.coeff(h))
}

/// The residual at the smallest admissible `n` and the next one; they must agree.
pub fn residual_coefficients(f: usize, g: &Partition, h: &Partition) -> Result<Rational> {
    let first_n = g.len().max(h.len()).max(1);
    let second_n = first_n + 1;
    let first_value = residual_coefficient_at(f, first_n, g, h)?;
    let second_value = residual_coefficient_at(f, second_n, g, h)?;
    if first_value != second_value {
        return Err(Error::ResidualDependsOnN(Box::new(ResidualConflict {
            f,
            g: g.clone(),
            h: h.clone(),
            first_n,
            first_value,
            second_n,
            second_value,
        })));
    }
    Ok(first_value)
}

/// Exact value next to a Monte Carlo estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentReport {
    pub exact_value: Rational,
    pub mc_estimate: f64,
    pub mc_std_err: f64,
    pub samples: u64,
    /// Draws thrown away and redrawn because the integrand could not be evaluated.
    pub resampled: u64,
}

impl MomentReport {
    /// `(estimate − exact)/stderr`; zero for an exact match with no spread,
    /// undefined for a mismatch with no spread.
    pub fn z_score(&self) -> Option<f64> {
        let diff = self.mc_estimate - to_f64(&self.exact_value);
        if self.mc_std_err > 0.0 {
            Some(diff / self.mc_std_err)
        } else if diff == 0.0 {
            Some(0.0)
        } else {
            None
        }
    }

    fn exact_only(exact_value: Rational) -> Self {
        MomentReport {
            mc_estimate: to_f64(&exact_value),
            exact_value,
            mc_std_err: 0.0,
            samples: 0,
            resampled: 0,
        }
    }
}

/// Monte Carlo run parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    /// Worker cap; `None` uses every core. Results do not depend on it.
    pub threads: Option<usize>,
    pub sampler: SamplerKind,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        McConfig {
            samples,
            seed,
            threads: None,
            sampler: SamplerKind::Angles,
        }
    }
}

/// Work is split over this many independent streams whatever the thread count,
/// so a seed fixes the output.
pub const SHARDS: u64 = 16;

/// Mean and spread of `integrand` over Haar draws. A `None` from the
/// integrand discards the draw and redraws.
pub fn monte_carlo<F>(n: usize, config: &McConfig, integrand: F) -> Result<(RunningMoments, u64)>
where
    F: Fn(&OrthoMatrix) -> Option<f64> + Sync,
{
    if config.samples < 2 {
        return Err(Error::InvalidArgument(
            "at least 2 samples are needed".into(),
        ));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let sampler = Sampler::new(config.sampler, n);
    let shards: Vec<(RunningMoments, u64)> = pool.install(|| {
        (0..SHARDS)
            .into_par_iter()
            .map(|shard| {
                let quota = config.samples / SHARDS + u64::from(shard < config.samples % SHARDS);
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                rng.set_stream(shard);
                let mut acc = RunningMoments::new();
                let mut redraws = 0;
                while acc.count() < quota {
                    let q = sampler.sample(&mut rng);
                    match integrand(&q).filter(|v| v.is_finite()) {
                        Some(v) => acc.push(v),
                        None => redraws += 1,
                    }
                }
                (acc, redraws)
            })
            .collect()
    });
    let mut total = RunningMoments::new();
    let mut redraws = 0;
    for (acc, r) in &shards {
        total.merge(acc);
        redraws += r;
    }
    Ok((total, redraws))
}

fn report(exact_value: Rational, (m, resampled): (RunningMoments, u64)) -> MomentReport {
    MomentReport {
        exact_value,
        mc_estimate: m.mean(),
        mc_std_err: m.std_err(),
        samples: m.count(),
        resampled,
    }
}

/// `tr(D_a Q D_b Qᵀ) = Σ_ij a_i b_j q_ij²`.
fn trace_form(a: &[f64], b: &[f64], q: &OrthoMatrix) -> f64 {
    let mut t = 0.0;
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            let x = q.get(i, j);
            t += ai * bj * x * x;
        }
    }
    t
}

pub fn mc_trace_power_integral(
    a: &DiagonalSpec,
    b: &DiagonalSpec,
    f: usize,
    config: &McConfig,
) -> Result<MomentReport> {
    let n = same_dimension(a, b)?;
    let exact = exact_trace_power_integral(a, b, f)?;
    let (af, bf) = (a.to_f64(), b.to_f64());
    let run = monte_carlo(n, config, |q| Some(trace_form(&af, &bf, q).powi(f as i32)))?;
    Ok(report(exact, run))
}

fn eigen_power_sums(m: DMatrix<f64>, k: usize) -> Option<Vec<f64>> {
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, 10_000)?;
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    Some(crate::symfunc::power_sums(&values, k))
}

/// Sample mean of `Z_κ` at the latent roots of `A H B Hᵀ`, against `Z_κ(A) Z_κ(B) / Z_κ(I_n)`.
///
/// With `A ≥ 0` the roots are those of the symmetric `A^½ H B Hᵀ A^½` (and
/// symmetrically for `B ≥ 0`); otherwise `Z_κ` is read off the power sums
/// `tr (A H B Hᵀ)^k`, which need no eigensolve.
pub fn mc_zonal_splitting(
    kappa: &Partition,
    a: &DiagonalSpec,
    b: &DiagonalSpec,
    config: &McConfig,
) -> Result<MomentReport> {
    let n = same_dimension(a, b)?;
    if kappa.len() > n {
        return Err(Error::TooManyParts {
            partition: kappa.clone(),
            n,
        });
    }
    let exact = zonal_value(kappa, a.eigenvalues())? * zonal_value(kappa, b.eigenvalues())?
        / identity_value(kappa, n)?;
    if kappa.is_empty() {
        return Ok(MomentReport::exact_only(exact));
    }
    let zp = zonal_in_powersums(kappa)?.to_f64();
    let k = kappa.weight();
    let (af, bf) = (a.to_f64(), b.to_f64());
    let diag = |v: &[f64]| DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(v));
    let sqrt = |v: &[f64]| v.iter().map(|x| x.sqrt()).collect::<Vec<_>>();

    let run = if a.is_nonnegative() || b.is_nonnegative() {
        // conjugate by the orthogonal matrix so the square root sits on the nonnegative side
        let (outer, inner, transpose) = if a.is_nonnegative() {
            (diag(&sqrt(&af)), diag(&bf), false)
        } else {
            (diag(&sqrt(&bf)), diag(&af), true)
        };
        monte_carlo(n, config, |q| {
            let q = if transpose { q.transpose() } else { q.clone() };
            let qm = q.matrix();
            let m = &outer * qm * &inner * qm.transpose() * &outer;
            let sym = (&m + m.transpose()) * 0.5;
            eigen_power_sums(sym, k).map(|p| zp.evaluate_power_sums(&p))
        })?
    } else {
        let (da, db) = (diag(&af), diag(&bf));
        monte_carlo(n, config, |q| {
            let qm = q.matrix();
            let m = &da * qm * &db * qm.transpose();
            let mut power = m.clone();
            let mut p = Vec::with_capacity(k);
            for _ in 0..k {
                p.push(power.trace());
                power = &power * &m;
            }
            Some(zp.evaluate_power_sums(&p))
        })?
    };
    Ok(report(exact, run))
}

/// Square rational matrix given by rows.
pub type SquareMatrix = Vec<Vec<Rational>>;

/// Rows separated by `;`, entries by `,`. A single row is read as a diagonal.
pub fn parse_square_matrix(s: &str) -> Result<SquareMatrix> {
    let rows = s
        .split(';')
        .map(|r| {
            r.split(',')
                .map(|t| parse_rational(t.trim()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    if rows.len() == 1 {
        let d = &rows[0];
        let n = d.len();
        return Ok((0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            d[i].clone()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect());
    }
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument(format!(
            "matrix with {n} rows is not square"
        )));
    }
    Ok(rows)
}

fn check_square(a: &[Vec<Rational>]) -> Result<usize> {
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument(
            "expected a nonempty square matrix".into(),
        ));
    }
    Ok(n)
}

fn rational_matmul(x: &[Vec<Rational>], y: &[Vec<Rational>]) -> SquareMatrix {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(Rational::zero(), |acc, k| acc + &x[i][k] * &y[k][j]))
                .collect()
        })
        .collect()
}

/// `E[(tr A H)^f]` exactly: zero for odd `f`, otherwise
/// `Σ_{κ ⊢ f/2} χ_{2κ}(1)/Z_κ(I_n) · Z_κ(AAᵀ)` with `Z_κ(AAᵀ)` taken from the
/// power sums `tr (AAᵀ)^k`.
pub fn exact_trace_ah(a: &[Vec<Rational>], f: usize) -> Result<Rational> {
    let n = check_square(a)?;
    if f % 2 == 1 {
        return Ok(Rational::zero());
    }
    let half = f / 2;
    if half == 0 {
        return Ok(Rational::one());
    }
    let at: SquareMatrix = (0..n)
        .map(|i| (0..n).map(|j| a[j][i].clone()).collect())
        .collect();
    let aat = rational_matmul(a, &at);
    let mut p = Vec::with_capacity(half);
    let mut power = aat.clone();
    for _ in 0..half {
        p.push((0..n).fold(Rational::zero(), |acc, i| acc + &power[i][i]));
        power = rational_matmul(&power, &aat);
    }
    let mut sum = Rational::zero();
    for kappa in admissible(half, n) {
        let z = zonal_in_powersums(&kappa)?.evaluate_power_sums(&p)?;
        sum += from_big(chi_doubled(&kappa)) * z / identity_value(&kappa, n)?;
    }
    Ok(sum)
}

/// `E[(tr A H)^f]` for a full square `A`. Odd `f` is reported exactly without sampling.
pub fn mc_trace_ah(a: &[Vec<Rational>], f: usize, config: &McConfig) -> Result<MomentReport> {
    let n = check_square(a)?;
    let exact = exact_trace_ah(a, f)?;
    if f % 2 == 1 {
        return Ok(MomentReport::exact_only(exact));
    }
    let af = DMatrix::from_fn(n, n, |i, j| to_f64(&a[i][j]));
    let run = monte_carlo(n, config, |h| {
        Some((&af * h.matrix()).trace().powi(f as i32))
    })?;
    Ok(report(exact, run))
}

/// Truncated series for `E[exp(½ tr A Q B Qᵀ)]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesReport {
    /// `E[(tr)^f] / (2^f f!)` for `f = 0..=max_degree`.
    pub terms: Vec<Rational>,
    pub partial_sum: Rational,
    pub value: f64,
    /// Upper bound on the neglected tail, for nonnegative spectra.
    pub tail_bound: Option<f64>,
}

pub fn hyper0f0(a: &DiagonalSpec, b: &DiagonalSpec, max_degree: usize) -> Result<SeriesReport> {
    same_dimension(a, b)?;
    let mut terms = Vec::with_capacity(max_degree + 1);
    for f in 0..=max_degree {
        let scale = Rational::from_integer(BigInt::from(factorial(f)) << f);
        terms.push(exact_trace_power_integral(a, b, f)? / scale);
    }
    let partial_sum = terms.iter().fold(Rational::zero(), |acc, t| acc + t);
    let tail_bound = (a.is_nonnegative() && b.is_nonnegative())
        .then(|| exp_tail(max_trace_form(a, b) / 2.0, max_degree));
    Ok(SeriesReport {
        value: to_f64(&partial_sum),
        terms,
        partial_sum,
        tail_bound,
    })
}

/// Largest `tr A Q B Qᵀ` over orthogonal `Q`: pair the sorted spectra.
fn max_trace_form(a: &DiagonalSpec, b: &DiagonalSpec) -> f64 {
    let mut x = a.to_f64();
    let mut y = b.to_f64();
    x.sort_by(|p, q| q.total_cmp(p));
    y.sort_by(|p, q| q.total_cmp(p));
    x.iter().zip(&y).map(|(p, q)| p * q).sum()
}

/// `Σ_{f > degree} x^f / f!` for `x ≥ 0`, summed directly.
fn exp_tail(x: f64, degree: usize) -> f64 {
    let mut term = 1.0;
    for f in 1..=degree {
        term *= x / f as f64;
    }
    let mut tail = 0.0;
    let mut f = degree + 1;
    loop {
        term *= x / f as f64;
        tail += term;
        if term <= tail * 1e-17 || term == 0.0 {
            return tail;
        }
        f += 1;
    }
}

/// Monte Carlo mean of `exp(½ tr A Q B Qᵀ)` against the truncated series.
pub fn mc_exp_series(
    a: &DiagonalSpec,
    b: &DiagonalSpec,
    max_degree: usize,
    config: &McConfig,
) -> Result<(SeriesReport, MomentReport)> {
    let n = same_dimension(a, b)?;
    let series = hyper0f0(a, b, max_degree)?;
    let (af, bf) = (a.to_f64(), b.to_f64());
    let run = monte_carlo(n, config, |q| Some((0.5 * trace_form(&af, &bf, q)).exp()))?;
    Ok((series.clone(), report(series.partial_sum, run)))
}

/// `m_g(β)·m_h(l)`-expansion of the degree-`f` integral, rebuilt from
/// [`coefficient_extract`].
pub fn expand_by_coefficients(a: &DiagonalSpec, b: &DiagonalSpec, f: usize) -> Result<Rational> {
    let n = same_dimension(a, b)?;
    if f == 0 {
        return Ok(Rational::one());
    }
    let mut sum = Rational::zero();
    let keys: Vec<Partition> = admissible(f, n).collect();
    for g in &keys {
        let mg = SymPoly::monomial(g.clone()).evaluate(a.eigenvalues());
        if mg.is_zero() {
            continue;
        }
        for h in &keys {
            let mh = SymPoly::monomial(h.clone()).evaluate(b.eigenvalues());
            if mh.is_zero() {
                continue;
            }
            sum += coefficient_extract(f, n, g, h)? * &mg * mh;
        }
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::ratio;
    use proptest::prelude::*;

    fn spec(v: &[i64]) -> DiagonalSpec {
        DiagonalSpec::from_integers(v).unwrap()
    }

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn cfg(samples: u64, seed: u64) -> McConfig {
        McConfig::new(samples, seed)
    }

    #[test]
    fn c_n_examples() {
        assert_eq!(c_n(3, 2), BigUint::from(15u32));
        assert_eq!(c_n(7, 0), BigUint::one());
        assert_eq!(c_n(2, 3), BigUint::from(48u32));
    }

    #[test]
    fn identity_values_match_product_formula() {
        // Z_κ(I_n) = Π_i Π_{j < κ_i} (n − i + 1 + 2j), i one-based
        for f in 1..=6 {
            for kappa in partitions_of(f) {
                for n in 1..=5 {
                    let mut want = Rational::one();
                    for (i, &part) in kappa.parts().iter().enumerate() {
                        for j in 0..part {
                            want *= int(n as i64 - i as i64 + 2 * j as i64);
                        }
                    }
                    assert_eq!(identity_value(&kappa, n).unwrap(), want, "{kappa} n={n}");
                }
            }
        }
    }

    #[test]
    fn diagonal_spec_parsing() {
        let d: DiagonalSpec = "1, 2,3/2".parse().unwrap();
        assert_eq!(d.n(), 3);
        assert_eq!(d.eigenvalues()[2], ratio(3, 2));
        assert_eq!(d.to_string(), "1,2,3/2");
        assert!("".parse::<DiagonalSpec>().is_err());
        assert!("1,x".parse::<DiagonalSpec>().is_err());
    }

    #[test]
    fn exact_integral_examples() {
        let a = spec(&[1, 2, 5]);
        let b = spec(&[3, -1, 4]);
        assert_eq!(
            exact_trace_power_integral(&a, &b, 1).unwrap(),
            ratio(8 * 6, 3)
        );
        assert_eq!(
            exact_trace_power_integral(&spec(&[1, 0]), &spec(&[1, 0]), 2).unwrap(),
            ratio(3, 8)
        );
        assert_eq!(
            exact_trace_power_integral(&spec(&[1, 1, 1]), &spec(&[1, 1, 1]), 2).unwrap(),
            int(9)
        );
        assert_eq!(exact_trace_power_integral(&a, &b, 0).unwrap(), int(1));
        assert!(exact_trace_power_integral(&a, &spec(&[1, 2]), 1).is_err());
    }

    #[test]
    fn rank_one_gives_powers_of_a_sphere_coordinate() {
        // E[q11^(2f)] = (2f−1)!!/c_n
        for n in 1..=4 {
            let mut e1 = vec![0; n];
            e1[0] = 1;
            for f in 0..=5 {
                let got = exact_trace_power_integral(&spec(&e1), &spec(&e1), f).unwrap();
                let want = from_big(odd_double_factorial(f)) / from_big(c_n(n, f));
                assert_eq!(got, want, "n={n} f={f}");
            }
        }
    }

    #[test]
    fn two_dimensional_integral_by_quadrature() {
        // O(2) is two circles; integrate (tr A Q B Qᵀ)^3 over the angle numerically
        let (a, b) = ([1.0, 2.0], [3.0, -1.0]);
        let steps = 20_000;
        let mut acc = 0.0;
        for s in 0..steps {
            let t = 2.0 * std::f64::consts::PI * (s as f64 + 0.5) / steps as f64;
            let (c2, s2) = (t.cos().powi(2), t.sin().powi(2));
            // q11² = q22² = cos², q12² = q21² = sin², for both components
            let tr = a[0] * b[0] * c2 + a[0] * b[1] * s2 + a[1] * b[0] * s2 + a[1] * b[1] * c2;
            acc += tr.powi(3);
        }
        let numeric = acc / steps as f64;
        let exact =
            to_f64(&exact_trace_power_integral(&spec(&[1, 2]), &spec(&[3, -1]), 3).unwrap());
        assert!((numeric - exact).abs() < 1e-9, "{numeric} vs {exact}");
    }

    #[test]
    fn top_coefficients() {
        for f in 1..=4 {
            for n in 2..=5 {
                let cn = from_big(c_n(n, f));
                let row = Partition::row(f);
                assert_eq!(
                    coefficient_extract(f, n, &row, &row).unwrap(),
                    from_big(odd_double_factorial(f)) / &cn
                );
                assert_eq!(
                    coefficient_extract(f, n, &row, &Partition::column(f)).unwrap(),
                    from_big(factorial(f)) / &cn
                );
            }
        }
        assert_eq!(
            coefficient_extract(2, 2, &p("2"), &p("2")).unwrap(),
            ratio(3, 8)
        );
    }

    #[test]
    fn coefficient_errors() {
        // only κ = (3) reaches (3); the formal value survives n < 3
        assert_eq!(
            coefficient_extract(3, 2, &p("1,1,1"), &p("3")).unwrap(),
            ratio(6, 48)
        );
        assert!(matches!(
            coefficient_extract(3, 3, &p("2,1"), &p("2")),
            Err(Error::WeightMismatch(2, 3))
        ));
        assert!(residual_coefficients(2, &p("2"), &p("1,1")).is_err());
        assert!(residual_coefficients(1, &p("1"), &p("1")).is_err());
    }

    #[test]
    fn residual_depends_on_n_for_two_by_two_block() {
        assert_eq!(
            coefficient_extract(2, 2, &p("1,1"), &p("1,1")).unwrap(),
            ratio(3, 2)
        );
        assert_eq!(
            residual_coefficient_at(2, 2, &p("1,1"), &p("1,1")).unwrap(),
            int(32)
        );
        assert_eq!(
            residual_coefficient_at(2, 3, &p("1,1"), &p("1,1")).unwrap(),
            int(20)
        );
        match residual_coefficients(2, &p("1,1"), &p("1,1")) {
            Err(Error::ResidualDependsOnN(c)) => assert_eq!((c.first_n, c.second_n), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coefficients_reconstruct_the_integral() {
        let a = DiagonalSpec::new(vec![ratio(1, 2), int(-3), int(2), ratio(5, 3)]).unwrap();
        let b = DiagonalSpec::new(vec![int(4), ratio(-1, 7), int(1), int(0)]).unwrap();
        for n in 1..=4 {
            let an = DiagonalSpec::new(a.eigenvalues()[..n].to_vec()).unwrap();
            let bn = DiagonalSpec::new(b.eigenvalues()[..n].to_vec()).unwrap();
            for f in 0..=4 {
                assert_eq!(
                    expand_by_coefficients(&an, &bn, f).unwrap(),
                    exact_trace_power_integral(&an, &bn, f).unwrap(),
                    "n={n} f={f}"
                );
            }
        }
    }

    #[test]
    fn trace_ah_exact_values() {
        let i2 = parse_square_matrix("1,1").unwrap();
        assert_eq!(exact_trace_ah(&i2, 2).unwrap(), int(1));
        assert_eq!(exact_trace_ah(&i2, 3).unwrap(), int(0));
        assert_eq!(exact_trace_ah(&i2, 0).unwrap(), int(1));
        // E (tr AH)^2 = tr(AAᵀ)/n
        let a = parse_square_matrix("1,2;3,4").unwrap();
        assert_eq!(exact_trace_ah(&a, 2).unwrap(), ratio(30, 2));
        assert!(parse_square_matrix("1,2;3").is_err());
    }

    #[test]
    fn series_with_a_zero_side_is_one() {
        let s = hyper0f0(&spec(&[0, 0]), &spec(&[1, 5]), 6).unwrap();
        assert_eq!(s.partial_sum, int(1));
        assert_eq!(s.tail_bound, Some(0.0));
    }

    #[test]
    fn series_for_scalar_matrix_is_an_exponential() {
        // A = aI makes the integrand constant: ½ a tr B
        let a = spec(&[1, 1]);
        let b = DiagonalSpec::new(vec![ratio(1, 2), ratio(1, 2)]).unwrap();
        let s = hyper0f0(&a, &b, 20).unwrap();
        assert!((s.value - 0.5f64.exp()).abs() < 1e-15);
        for (f, t) in s.terms.iter().enumerate() {
            let want = Rational::one() / (from_big(factorial(f)) * int(2).pow(f as i32));
            assert_eq!(*t, want);
        }
        let tail = s.tail_bound.unwrap();
        assert!(tail > 0.0 && tail < 1e-20);
    }

    #[test]
    fn tail_bound_covers_the_truncation() {
        let a = spec(&[1, 2]);
        let b = spec(&[1, 3]);
        let short = hyper0f0(&a, &b, 6).unwrap();
        let long = hyper0f0(&a, &b, 14).unwrap();
        let gap = long.value - short.value;
        assert!(gap > 0.0 && gap <= short.tail_bound.unwrap());
        assert!(hyper0f0(&spec(&[1, -2]), &b, 3)
            .unwrap()
            .tail_bound
            .is_none());
    }

    #[test]
    fn mc_zero_degree_is_exact() {
        let r = mc_trace_power_integral(&spec(&[1, 2]), &spec(&[3, 1]), 0, &cfg(100, 1)).unwrap();
        assert_eq!(r.exact_value, int(1));
        assert_eq!(r.mc_estimate, 1.0);
        assert_eq!(r.mc_std_err, 0.0);
        assert_eq!(r.z_score(), Some(0.0));
        assert_eq!(r.samples, 100);
    }

    #[test]
    fn mc_first_degree() {
        let r =
            mc_trace_power_integral(&spec(&[1, 2]), &spec(&[3, 1]), 1, &cfg(20_000, 7)).unwrap();
        assert_eq!(r.exact_value, int(6));
        assert!(r.z_score().unwrap().abs() <= 4.0, "{r:?}");
    }

    #[test]
    fn mc_is_independent_of_threads() {
        let mut one = cfg(5_000, 3);
        one.threads = Some(1);
        let mut four = one;
        four.threads = Some(4);
        let a = spec(&[1, 2, 3]);
        let b = spec(&[1, 1, 2]);
        assert_eq!(
            mc_trace_power_integral(&a, &b, 3, &one).unwrap(),
            mc_trace_power_integral(&a, &b, 3, &four).unwrap()
        );
    }

    #[test]
    fn mc_rejects_tiny_sample_counts() {
        assert!(mc_trace_power_integral(&spec(&[1]), &spec(&[1]), 1, &cfg(1, 0)).is_err());
    }

    #[test]
    fn zonal_splitting_routes_agree() {
        // constant integrand: Z_(1,1)(I_2) = 2
        let r =
            mc_zonal_splitting(&p("1,1"), &spec(&[1, 1]), &spec(&[1, 1]), &cfg(200, 1)).unwrap();
        assert_eq!(r.exact_value, int(2));
        assert!((r.mc_estimate - 2.0).abs() < 1e-9);
        // negative entries on one side take the eigen route through the other
        // Z_(2)(1,2) = 19, Z_(2)(3,1) = 36
        let exact = Rational::from(BigInt::from(19 * 36)) / int(8);
        let pos =
            mc_zonal_splitting(&p("2"), &spec(&[1, 2]), &spec(&[3, 1]), &cfg(20_000, 2)).unwrap();
        assert_eq!(pos.exact_value, exact);
        assert!(pos.z_score().unwrap().abs() <= 4.0, "{pos:?}");
        let mixed =
            mc_zonal_splitting(&p("2"), &spec(&[1, -2]), &spec(&[3, -1]), &cfg(20_000, 2)).unwrap();
        assert!(mixed.z_score().unwrap().abs() <= 4.0, "{mixed:?}");
        let swapped =
            mc_zonal_splitting(&p("2"), &spec(&[1, -2]), &spec(&[3, 1]), &cfg(20_000, 2)).unwrap();
        assert!(swapped.z_score().unwrap().abs() <= 4.0, "{swapped:?}");
        assert!(
            mc_zonal_splitting(&p("1,1,1"), &spec(&[1, 2]), &spec(&[1, 2]), &cfg(10, 0)).is_err()
        );
    }

    #[test]
    fn trace_ah_odd_is_not_sampled() {
        let a = parse_square_matrix("1,2").unwrap();
        let r = mc_trace_ah(&a, 3, &cfg(1000, 0)).unwrap();
        assert_eq!(r.samples, 0);
        assert_eq!(r.exact_value, int(0));
    }

    #[test]
    fn trace_ah_second_moment_of_identity() {
        let a = parse_square_matrix("1,1").unwrap();
        let r = mc_trace_ah(&a, 2, &cfg(20_000, 9)).unwrap();
        assert!(r.z_score().unwrap().abs() <= 4.0, "{r:?}");
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
    }

    fn spectrum(n: usize) -> impl Strategy<Value = DiagonalSpec> {
        prop::collection::vec(small_rational(), n).prop_map(|v| DiagonalSpec::new(v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn symmetric_in_a_and_b((a, b) in (1usize..=3).prop_flat_map(|n| (spectrum(n), spectrum(n))), f in 0usize..=4) {
            prop_assert_eq!(
                exact_trace_power_integral(&a, &b, f).unwrap(),
                exact_trace_power_integral(&b, &a, f).unwrap()
            );
        }

        #[test]
        fn invariant_under_permutation(a in spectrum(3), b in spectrum(3), f in 0usize..=4, rot in 0usize..3) {
            let mut v = a.eigenvalues().to_vec();
            v.rotate_left(rot);
            v.swap(0, 1);
            let permuted = DiagonalSpec::new(v).unwrap();
            prop_assert_eq!(
                exact_trace_power_integral(&a, &b, f).unwrap(),
                exact_trace_power_integral(&permuted, &b, f).unwrap()
            );
        }

        #[test]
        fn homogeneous_of_degree_f(a in spectrum(3), b in spectrum(3), c in small_rational(), f in 0usize..=4) {
            let lhs = exact_trace_power_integral(&a.scaled(&c), &b, f).unwrap();
            let rhs = exact_trace_power_integral(&a, &b, f).unwrap() * c.pow(f as i32);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
