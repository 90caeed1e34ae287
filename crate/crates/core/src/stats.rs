//! Streaming moments and Kolmogorov–Smirnov tests for the Monte Carlo checks.

/// Count, mean and centred second moment, mergeable across shards.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct RunningMoments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl RunningMoments {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Count-weighted combination of two partial accumulations.
    pub fn merge(&mut self, other: &RunningMoments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / n;
        self.m2 += other.m2 + delta * delta * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample variance (`n − 1` denominator); zero below two observations.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.m2 / (self.count - 1) as f64).max(0.0)
        }
    }

    pub fn std_err(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}

impl FromIterator<f64> for RunningMoments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = RunningMoments::new();
        for x in iter {
            m.push(x);
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KsOutcome {
    pub statistic: f64,
    /// Asymptotic p-value.
    pub p_value: f64,
    /// Effective sample size used for the p-value.
    pub effective_n: f64,
}

impl KsOutcome {
    pub fn rejects(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

/// Survival function of the Kolmogorov distribution, `P(K > x)`.
pub fn kolmogorov_survival(x: f64) -> f64 {
    // the series converges slowly near zero, where the survival is 1 to double precision
    if x < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = k as f64;
        let term = (-2.0 * k * k * x * x).exp();
        sum += if k as u64 % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn p_value(d: f64, ne: f64) -> f64 {
    let root = ne.sqrt();
    kolmogorov_survival((root + 0.12 + 0.11 / root) * d)
}

/// Two-sample Kolmogorov–Smirnov test. Ties are handled by stepping both
/// empirical distribution functions past equal values together.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsOutcome {
    assert!(!a.is_empty() && !b.is_empty(), "KS needs nonempty samples");
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = na * nb / (na + nb);
    KsOutcome {
        statistic: d,
        p_value: p_value(d, ne),
        effective_n: ne,
    }
}

/// One-sample Kolmogorov–Smirnov test against a continuous CDF.
pub fn ks_one_sample(sample: &[f64], cdf: impl Fn(f64) -> f64) -> KsOutcome {
    assert!(!sample.is_empty(), "KS needs a nonempty sample");
    let mut xs = sample.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let d = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max);
    KsOutcome {
        statistic: d,
        p_value: p_value(d, n),
        effective_n: n,
    }
}

/// Rounds to a `1e-9` grid so atoms of a distribution (for example `tr Q = 0`
/// on the reflections of `O(2)`) coincide across samplers despite rounding noise.
pub fn snap(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn moments_match_two_pass() {
        let xs = [1.0, 4.0, 2.5, -3.0, 7.25, 0.5];
        let m: RunningMoments = xs.iter().copied().collect();
        let mean = xs.iter().sum::<f64>() / 6.0;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 5.0;
        assert!((m.mean() - mean).abs() < 1e-12);
        assert!((m.variance() - var).abs() < 1e-12);
        assert!((m.std_err() - (var / 6.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn merge_equals_single_pass() {
        let xs: Vec<f64> = (0..50).map(|i| (i as f64 * 0.37).sin() * 3.0).collect();
        let whole: RunningMoments = xs.iter().copied().collect();
        let mut left: RunningMoments = xs[..17].iter().copied().collect();
        let right: RunningMoments = xs[17..].iter().copied().collect();
        left.merge(&right);
        assert_eq!(left.count(), whole.count());
        assert!((left.mean() - whole.mean()).abs() < 1e-12);
        assert!((left.variance() - whole.variance()).abs() < 1e-12);
        let mut empty = RunningMoments::new();
        empty.merge(&whole);
        assert_eq!(empty, whole);
    }

    #[test]
    fn constant_sample_has_zero_error() {
        let m: RunningMoments = std::iter::repeat_n(2.0, 10).collect();
        assert_eq!(m.std_err(), 0.0);
        assert_eq!(RunningMoments::new().std_err(), 0.0);
    }

    #[test]
    fn kolmogorov_reference_values() {
        // critical value at alpha = 0.05 is about 1.358, at 0.01 about 1.628
        assert!((kolmogorov_survival(1.358) - 0.05).abs() < 1e-3);
        assert!((kolmogorov_survival(1.628) - 0.01).abs() < 1e-3);
        assert_eq!(kolmogorov_survival(0.0), 1.0);
    }

    #[test]
    fn ks_detects_shift_and_accepts_same_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a: Vec<f64> = (0..5000).map(|_| rng.random::<f64>()).collect();
        let b: Vec<f64> = (0..5000).map(|_| rng.random::<f64>()).collect();
        let c: Vec<f64> = (0..5000).map(|_| rng.random::<f64>() + 0.1).collect();
        assert!(!ks_two_sample(&a, &b).rejects(0.01));
        assert!(ks_two_sample(&a, &c).rejects(0.01));
        assert!(!ks_one_sample(&a, |x| x.clamp(0.0, 1.0)).rejects(0.01));
        assert!(ks_one_sample(&c, |x| x.clamp(0.0, 1.0)).rejects(0.01));
    }

    #[test]
    fn ks_handles_ties() {
        let a = vec![0.0; 100];
        let b = vec![0.0; 80];
        assert_eq!(ks_two_sample(&a, &b).statistic, 0.0);
        let c: Vec<f64> = (0..100).map(|i| if i < 50 { 0.0 } else { 1.0 }).collect();
        assert!((ks_two_sample(&a, &c).statistic - 0.5).abs() < 1e-12);
    }
}
