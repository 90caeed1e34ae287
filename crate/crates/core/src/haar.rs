//! Haar sampling on the orthogonal group.
//!
//! An orthogonal matrix is parametrised by reflection bits and rotation
//! angles `θ_ij`, `1 ≤ i ≤ j ≤ n − 1`:
//!
//! ```text
//! Γ = (Π_i U_i^{ε_i}) · H_1 H_2 ⋯ H_{n−1},   H_i = V_{n−1}(θ_{i,n−1}) ⋯ V_i(θ_{i,i})
//! ```
//!
//! where `V_j(θ)` rotates the `(j, j+1)` plane and `U_i` flips axis `i`.
//! `H_i e_i` is a point of the unit sphere in hyperspherical coordinates, so
//! drawing `θ_ij` with density proportional to `sin(θ)^{n−j−1}` (on `[0, π]`,
//! or uniformly on `[0, 2π)` when the exponent is zero) makes the rotation
//! part Haar on `SO(n)`, and fair reflection bits extend that to `O(n)`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Beta, Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Rotation angles and reflection bits of one orthogonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct AngleSet {
    n: usize,
    /// `θ_ij` in the order of [`angle_pairs`].
    angles: Vec<f64>,
    reflections: Vec<bool>,
}

/// `(i, j)` with `1 ≤ i ≤ j ≤ n − 1`, `i` outer.
pub fn angle_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).flat_map(move |i| (i..n).map(move |j| (i, j)))
}

/// Exponent of `sin θ_ij` in the angle density; depends on `j` only.
pub fn density_exponent(n: usize, j: usize) -> usize {
    n - j - 1
}

/// Upper end of the range of `θ_ij`: `π` for positive exponent, `2π` (exclusive) otherwise.
pub fn angle_upper(n: usize, j: usize) -> f64 {
    if density_exponent(n, j) > 0 {
        PI
    } else {
        2.0 * PI
    }
}

impl AngleSet {
    pub fn new(n: usize, angles: Vec<f64>, reflections: Vec<bool>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "dimension must be at least 1".into(),
            ));
        }
        let expected = n * (n - 1) / 2;
        if angles.len() != expected || reflections.len() != n {
            return Err(Error::InvalidArgument(format!(
                "O({n}) needs {expected} angles and {n} reflection bits, got {} and {}",
                angles.len(),
                reflections.len()
            )));
        }
        for ((_, j), &theta) in angle_pairs(n).zip(&angles) {
            let upper = angle_upper(n, j);
            let inside = if upper == PI {
                (0.0..=PI).contains(&theta)
            } else {
                (0.0..upper).contains(&theta)
            };
            if !inside {
                return Err(Error::InvalidArgument(format!(
                    "angle {theta} outside its range for j={j}"
                )));
            }
        }
        Ok(AngleSet {
            n,
            angles,
            reflections,
        })
    }

    /// All angles zero, no reflections: realises the identity.
    pub fn identity(n: usize) -> Self {
        AngleSet {
            n,
            angles: vec![0.0; n * n.saturating_sub(1) / 2],
            reflections: vec![false; n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn reflections(&self) -> &[bool] {
        &self.reflections
    }

    /// `θ_ij`, one-based.
    pub fn angle(&self, i: usize, j: usize) -> Option<f64> {
        angle_pairs(self.n)
            .position(|p| p == (i, j))
            .map(|k| self.angles[k])
    }
}

/// A real orthogonal matrix (by construction, not by type).
#[derive(Clone, Debug, PartialEq)]
pub struct OrthoMatrix(DMatrix<f64>);

impl OrthoMatrix {
    pub fn identity(n: usize) -> Self {
        OrthoMatrix(DMatrix::identity(n, n))
    }

    /// Wraps a square matrix without checking orthogonality.
    pub fn from_matrix(m: DMatrix<f64>) -> Self {
        assert!(m.is_square(), "orthogonal matrices are square");
        OrthoMatrix(m)
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.0[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn determinant(&self) -> f64 {
        self.0.determinant()
    }

    pub fn transpose(&self) -> OrthoMatrix {
        OrthoMatrix(self.0.transpose())
    }

    pub fn mul(&self, other: &OrthoMatrix) -> OrthoMatrix {
        OrthoMatrix(&self.0 * &other.0)
    }

    /// Right-multiplies in place by `V_j(θ)` (zero-based plane `(j, j+1)`).
    fn rotate_columns(&mut self, j: usize, theta: f64) {
        let (s, c) = theta.sin_cos();
        for r in 0..self.n() {
            let a = self.0[(r, j)];
            let b = self.0[(r, j + 1)];
            self.0[(r, j)] = c * a - s * b;
            self.0[(r, j + 1)] = s * a + c * b;
        }
    }
}

/// `V(θ) = [[cos θ, sin θ], [−sin θ, cos θ]]` embedded in the `(j, j+1)` plane of `R^n`, one-based `j`.
pub fn plane_rotation(n: usize, j: usize, theta: f64) -> OrthoMatrix {
    let mut m = OrthoMatrix::identity(n);
    m.rotate_columns(j - 1, theta);
    m
}

/// The orthogonal matrix an angle set describes, reflections first.
pub fn realize(a: &AngleSet) -> OrthoMatrix {
    let n = a.n;
    let mut m = OrthoMatrix(DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        n,
        a.reflections.iter().map(|&r| if r { -1.0 } else { 1.0 }),
    )));
    let mut k = 0;
    for i in 1..n {
        let block = &a.angles[k..k + (n - i)];
        // H_i = V_{n-1}(θ_{i,n-1}) ⋯ V_i(θ_{i,i}); right-multiply left to right
        for (offset, &theta) in block.iter().enumerate().rev() {
            let j = i + offset;
            m.rotate_columns(j - 1, theta);
        }
        k += n - i;
    }
    m
}

/// Draws angle sets with the Haar angle density; precomputes one Beta law per exponent.
#[derive(Clone, Debug)]
pub struct AngleSampler {
    n: usize,
    /// indexed by `j - 1`; `None` for the uniform exponent-zero angle
    betas: Vec<Option<Beta<f64>>>,
}

impl AngleSampler {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        let betas = (1..n)
            .map(|j| {
                let k = density_exponent(n, j);
                (k > 0).then(|| {
                    let a = (k as f64 + 1.0) / 2.0;
                    Beta::new(a, a).expect("positive shape")
                })
            })
            .collect();
        AngleSampler { n, betas }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// For exponent `k > 0`, `θ = arccos(2C − 1)` with `C ~ Beta((k+1)/2, (k+1)/2)`
    /// has density proportional to `sin(θ)^k` on `[0, π]`.
    pub fn sample_angles<R: Rng + ?Sized>(&self, rng: &mut R) -> AngleSet {
        let angles = angle_pairs(self.n)
            .map(|(_, j)| match &self.betas[j - 1] {
                Some(beta) => {
                    let c: f64 = beta.sample(rng);
                    (2.0 * c - 1.0).clamp(-1.0, 1.0).acos()
                }
                None => 2.0 * PI * rng.random::<f64>(),
            })
            .collect();
        let reflections = (0..self.n).map(|_| rng.random::<bool>()).collect();
        AngleSet {
            n: self.n,
            angles,
            reflections,
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> OrthoMatrix {
        realize(&self.sample_angles(rng))
    }
}

/// Haar sample from the angle decomposition.
pub fn sample_orthogonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> OrthoMatrix {
    AngleSampler::new(n).sample(rng)
}

/// Haar sample by modified Gram–Schmidt (with reorthogonalisation) on a standard
/// Gaussian matrix.
/// The implied triangular factor has a positive diagonal.
pub fn oracle_sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> OrthoMatrix {
    assert!(n >= 1, "dimension must be at least 1");
    'draw: loop {
        let mut m = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
        for c in 0..n {
            // a second sweep restores orthogonality lost to cancellation
            for _ in 0..2 {
                for prev in 0..c {
                    let dot = m.column(prev).dot(&m.column(c));
                    let q = m.column(prev).clone_owned();
                    m.column_mut(c).axpy(-dot, &q, 1.0);
                }
            }
            let norm = m.column(c).norm();
            if norm < 1e-12 {
                continue 'draw;
            }
            m.column_mut(c).scale_mut(1.0 / norm);
        }
        return OrthoMatrix(m);
    }
}

/// `max |QᵀQ − I| < tol`.
pub fn orthogonality_check(q: &OrthoMatrix, tol: f64) -> bool {
    orthogonality_defect(q) < tol
}

pub fn orthogonality_defect(q: &OrthoMatrix) -> f64 {
    let n = q.n();
    let gram = q.0.transpose() * &q.0;
    (gram - DMatrix::<f64>::identity(n, n)).amax()
}

/// Which Haar sampler drives a Monte Carlo run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SamplerKind {
    #[default]
    Angles,
    GramSchmidt,
}

impl std::str::FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "angles" => Ok(SamplerKind::Angles),
            "gram-schmidt" | "oracle" => Ok(SamplerKind::GramSchmidt),
            _ => Err(Error::InvalidArgument(format!("unknown sampler {s:?}"))),
        }
    }
}

/// A sampler of a fixed kind and dimension.
#[derive(Clone, Debug)]
pub enum Sampler {
    Angles(AngleSampler),
    GramSchmidt(usize),
}

impl Sampler {
    pub fn new(kind: SamplerKind, n: usize) -> Self {
        match kind {
            SamplerKind::Angles => Sampler::Angles(AngleSampler::new(n)),
            SamplerKind::GramSchmidt => Sampler::GramSchmidt(n),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> OrthoMatrix {
        match self {
            Sampler::Angles(s) => s.sample(rng),
            Sampler::GramSchmidt(n) => oracle_sample(*n, rng),
        }
    }
}
