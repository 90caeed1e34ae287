//! Zonal polynomials from the triangular recursion on monomial coefficients.
//!
//! Writing `Z_κ = Σ_{λ ≤ κ} b_{κ,λ} m_λ`, each coefficient below the top one is
//!
//! ```text
//! b_{κ,g} = Σ b_{κ,h} · (g_i − g_j + 2t) / (ρ(κ) − ρ(g))
//! ```
//!
//! where `h` runs over the partitions reached from `g` by moving `t` boxes
//! from part `j` up to an earlier part `i`, kept only when `h ≤ κ`. Rows are
//! seeded with `b_{κ,κ} = 1` and rescaled so that `b_{κ,1^f} = f!`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::partitions::{factorial, partitions_of, rho, sym_group_degree, Partition};
use crate::symfunc::{self, int, Basis, Rational, SymPoly};

/// How the boxes-moved partitions `h` are generated from `g`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MoveRule {
    /// Every `i < j` over the nonzero parts of `g` and `t = 1..=g_j`; the
    /// result is re-sorted and each `(i, j, t)` contributes separately.
    #[default]
    Resorting,
    /// Only moves that keep the padded sequence nonincreasing without
    /// re-sorting: `t ≤ (g_{i−1} − g_i) ∧ (g_j − g_{j+1})`. Undercounts moves
    /// between repeated parts and disagrees with the reference rows from
    /// degree 3 on; kept for comparison.
    Literal,
}

fn moves(g: &Partition, f: usize, rule: MoveRule) -> Vec<(Partition, i64)> {
    let padded = g.padded(f).expect("weight bounds the number of parts");
    let mut out = Vec::new();
    match rule {
        MoveRule::Resorting => {
            for j in 1..g.len() {
                for i in 0..j {
                    for t in 1..=padded[j] {
                        let mut h = padded.clone();
                        h[i] += t;
                        h[j] -= t;
                        let factor = padded[i] as i64 - padded[j] as i64 + 2 * t as i64;
                        out.push((Partition::from_unsorted(h), factor));
                    }
                }
            }
        }
        MoveRule::Literal => {
            for j in 1..f {
                let below = padded[j] - padded.get(j + 1).copied().unwrap_or(0);
                for i in 0..j {
                    let above = if i == 0 {
                        usize::MAX
                    } else {
                        padded[i - 1] - padded[i]
                    };
                    for t in 1..=above.min(below) {
                        let mut h = padded.clone();
                        h[i] += t;
                        h[j] -= t;
                        if let Ok(h) = Partition::new(h) {
                            let factor = padded[i] as i64 - padded[j] as i64 + 2 * t as i64;
                            out.push((h, factor));
                        }
                    }
                }
            }
        }
    }
    out
}

/// `Z_κ` in the monomial basis, normalised so the `m_{1^f}` coefficient is `f!`.
pub fn zonal_row(kappa: &Partition) -> Result<SymPoly> {
    zonal_row_with(kappa, MoveRule::default())
}

pub fn zonal_row_with(kappa: &Partition, rule: MoveRule) -> Result<SymPoly> {
    if kappa.is_empty() {
        return Err(Error::InvalidArgument(
            "zonal rows need a nonempty partition".into(),
        ));
    }
    let f = kappa.weight();
    let rho_kappa = rho(kappa);
    let mut b: HashMap<Partition, Rational> = HashMap::new();
    b.insert(kappa.clone(), Rational::one());

    // descending lexicographic order: every h above g is already final
    for g in partitions_of(f)
        .into_iter()
        .filter(|g| g != kappa && g.is_dominated_by(kappa))
    {
        let denom = rho_kappa - rho(&g);
        if denom == 0 {
            return Err(Error::ZeroDenominator {
                kappa: kappa.clone(),
                g,
            });
        }
        let mut sum = Rational::zero();
        for (h, factor) in moves(&g, f, rule) {
            if !h.is_dominated_by(kappa) {
                continue;
            }
            if let Some(bh) = b.get(&h) {
                sum += bh * int(factor);
            }
        }
        b.insert(g, sum / int(denom));
    }

    let bottom = Partition::column(f);
    let seed = b.get(&bottom).cloned().unwrap_or_else(Rational::zero);
    if seed.is_zero() {
        return Err(Error::ZeroNormalizer(kappa.clone()));
    }
    let scale = Rational::from_integer(BigInt::from(factorial(f))) / seed;
    SymPoly::from_terms(
        f,
        Basis::Monomial,
        b.into_iter().map(|(k, v)| (k, v * &scale)),
    )
}

/// `χ_{2κ}(1)`.
pub fn chi_doubled(kappa: &Partition) -> BigUint {
    sym_group_degree(&kappa.doubled())
}

/// `(2f − 1)!! = 1·3·5⋯(2f − 1)`.
pub fn odd_double_factorial(f: usize) -> BigUint {
    (1..=f).fold(BigUint::one(), |acc, k| acc * BigUint::from(2 * k - 1))
}

/// All zonal polynomials of one degree, in the monomial basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ZonalTable {
    degree: usize,
    rows: Vec<(Partition, SymPoly)>,
}

impl ZonalTable {
    pub fn compute(f: usize) -> Result<Self> {
        if f == 0 {
            return Err(Error::InvalidArgument("degree must be at least 1".into()));
        }
        let rows = partitions_of(f)
            .into_iter()
            .map(|k| cached_row(&k).map(|row| (k, row)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ZonalTable { degree: f, rows })
    }

    /// A table from externally supplied rows in either basis. Rows are kept in
    /// the given order and converted to the monomial basis.
    pub fn from_rows(degree: usize, rows: Vec<(Partition, SymPoly)>) -> Result<Self> {
        let rows = rows
            .into_iter()
            .map(|(k, poly)| {
                if k.weight() != degree {
                    return Err(Error::WeightMismatch(k.weight(), degree));
                }
                if poly.degree() != degree {
                    return Err(Error::DegreeMismatch(poly.degree(), degree));
                }
                Ok((k, poly.to_basis(Basis::Monomial)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ZonalTable { degree, rows })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rows(&self) -> &[(Partition, SymPoly)] {
        &self.rows
    }

    pub fn row(&self, kappa: &Partition) -> Option<&SymPoly> {
        self.rows.iter().find(|(k, _)| k == kappa).map(|(_, r)| r)
    }

    pub fn partitions(&self) -> impl Iterator<Item = &Partition> {
        self.rows.iter().map(|(k, _)| k)
    }

    pub fn in_basis(&self, basis: Basis) -> Result<Vec<(Partition, SymPoly)>> {
        self.rows
            .iter()
            .map(|(k, r)| Ok((k.clone(), r.to_basis(basis)?)))
            .collect()
    }
}

/// Memoised [`ZonalTable::compute`]. Computed tables are immutable.
pub fn zonal_table(f: usize) -> Result<Arc<ZonalTable>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<ZonalTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&f) {
        return Ok(hit.clone());
    }
    let built = Arc::new(ZonalTable::compute(f)?);
    Ok(cache.lock().unwrap().entry(f).or_insert(built).clone())
}

/// Memoised [`zonal_row`], one row at a time.
pub fn cached_row(kappa: &Partition) -> Result<SymPoly> {
    static CACHE: OnceLock<Mutex<HashMap<Partition, SymPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(kappa) {
        return Ok(hit.clone());
    }
    let built = zonal_row(kappa)?;
    Ok(cache
        .lock()
        .unwrap()
        .entry(kappa.clone())
        .or_insert(built)
        .clone())
}

fn integral_powersums(kappa: &Partition, poly: &SymPoly) -> Result<SymPoly> {
    let p = poly.to_basis(Basis::PowerSum)?;
    if let Some((key, c)) = p.terms().find(|(_, c)| !c.is_integer()) {
        return Err(Error::NonInteger {
            kappa: kappa.clone(),
            key: key.clone(),
            coefficient: c.clone(),
        });
    }
    Ok(p)
}

/// `Z_κ` in power sums; every coefficient must be an integer.
pub fn zonal_in_powersums(kappa: &Partition) -> Result<SymPoly> {
    integral_powersums(kappa, &cached_row(kappa)?)
}

/// `Z_κ(I_n)`.
pub fn zonal_at_identity(kappa: &Partition, n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    Ok(cached_row(kappa)?.evaluate(&vec![Rational::one(); n]))
}

/// Outcome of checking `Σ_κ χ_{2κ}(1) Z_κ = ((2f)!/(2^f f!)) p_1^f`.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceIdentityReport {
    pub degree: usize,
    /// Monomial coefficients of left side minus right side; empty when the identity holds.
    pub discrepancies: BTreeMap<Partition, Rational>,
}

impl TraceIdentityReport {
    pub fn passed(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

pub fn check_trace_identity(f: usize) -> Result<TraceIdentityReport> {
    check_trace_identity_for(zonal_table(f)?.as_ref())
}

pub fn check_trace_identity_for(table: &ZonalTable) -> Result<TraceIdentityReport> {
    let f = table.degree();
    let mut lhs = SymPoly::zero(f, Basis::Monomial);
    for (kappa, row) in table.rows() {
        let chi = Rational::from_integer(BigInt::from(chi_doubled(kappa)));
        lhs = lhs.add(&row.scale(&chi))?;
    }
    let ratio = Rational::from_integer(BigInt::from(odd_double_factorial(f)));
    let rhs = symfunc::p_to_m(&Partition::column(f)).scale(&ratio);
    let diff = lhs.sub(&rhs)?;
    Ok(TraceIdentityReport {
        degree: f,
        discrepancies: diff.terms().map(|(k, v)| (k.clone(), v.clone())).collect(),
    })
}

/// The `(f)` row has `m_f` coefficient `(2f−1)!!` and `m_{1^f}` coefficient `f!`.
pub fn z_top_check(f: usize) -> Result<bool> {
    Ok(z_top_check_for(zonal_table(f)?.as_ref()))
}

pub fn z_top_check_for(table: &ZonalTable) -> bool {
    let f = table.degree();
    match table.row(&Partition::row(f)) {
        Some(row) => {
            row.coeff(&Partition::row(f)) == big(odd_double_factorial(f))
                && row.coeff(&Partition::column(f)) == big(factorial(f))
        }
        None => false,
    }
}

fn big(n: BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rows whose `m_{1^f}` coefficient is not `f!`.
pub fn normalization_violations(table: &ZonalTable) -> Vec<Partition> {
    let target = big(factorial(table.degree()));
    let bottom = Partition::column(table.degree());
    table
        .rows()
        .iter()
        .filter(|(_, row)| row.coeff(&bottom) != target)
        .map(|(k, _)| k.clone())
        .collect()
}

/// `(κ, λ)` pairs with `b_{κ,λ} ≠ 0` although `λ` is not dominated by `κ`.
pub fn triangularity_violations(table: &ZonalTable) -> Vec<(Partition, Partition)> {
    table
        .rows()
        .iter()
        .flat_map(|(k, row)| {
            row.terms()
                .filter(|(l, _)| !l.is_dominated_by(k))
                .map(|(l, _)| (k.clone(), l.clone()))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Monomial coefficients that are negative or fractional.
pub fn non_natural_coefficients(table: &ZonalTable) -> Vec<(Partition, Partition, Rational)> {
    table
        .rows()
        .iter()
        .flat_map(|(k, row)| {
            row.terms()
                .filter(|(_, c)| c.is_negative() || !c.is_integer())
                .map(|(l, c)| (k.clone(), l.clone(), c.clone()))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// A row that differs from the reference power-sum rows.
#[derive(Clone, Debug, PartialEq)]
pub struct GoldenMismatch {
    pub kappa: Partition,
    pub expected: SymPoly,
    pub found: Option<SymPoly>,
}

/// Compares every clean reference row of this degree with the table.
pub fn golden_mismatches(table: &ZonalTable) -> Result<Vec<GoldenMismatch>> {
    let mut out = Vec::new();
    for kappa in crate::golden::tabulated(table.degree()) {
        let expected = crate::golden::table_row(&kappa).expect("tabulated");
        let found = match table.row(&kappa) {
            Some(row) => Some(row.to_basis(Basis::PowerSum)?),
            None => None,
        };
        if found.as_ref() != Some(&expected) {
            out.push(GoldenMismatch {
                kappa,
                expected,
                found,
            });
        }
    }
    Ok(out)
}
