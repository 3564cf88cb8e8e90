//! Delta operators, lower-factorial basic polynomials and the star product.
//!
//! A trajectory on the integer lattice `0, 1, 2, ...` is expanded in the
//! basic sequence of the forward difference, the lower factorials
//! `p_k(n) = n!/(n-k)!`. The expansion coefficients live in *hat space*
//! ([`HatSeries`]); in hat coordinates the star product `p_i * p_j = p_{i+j}`
//! is a plain Cauchy convolution and the delta operator acts as the shift
//! `(D f)_k = (k + 1) f_{k+1}`.
//!
//! Because `p_k(n) = 0` for `k > n`, the transform between lattice values and
//! hat coefficients is finite in both directions (see [`hat_to_lattice`] and
//! [`lattice_to_hat`]).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{factorials, int, Rational};

/// `p_k(n) = n!/(n-k)!`, zero when `n < k`.
///
/// ```
/// use rota::umbral::lower_factorial;
/// use rota::rational::int;
/// assert_eq!(lower_factorial(5, 3), int(60));
/// assert_eq!(lower_factorial(2, 5), int(0));
/// ```
pub fn lower_factorial(n: u64, k: u64) -> Rational {
    Rational::from_integer(lower_factorial_int(n, k))
}

pub(crate) fn lower_factorial_int(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    ((n - k + 1)..=n).fold(BigInt::one(), |acc, j| acc * j)
}

/// Marks whether a trajectory holds plain map values `z_n` or Borel-regularized
/// values `w_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TrajectoryKind {
    #[default]
    Plain,
    Borel,
}

/// Values on the lattice points `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeTrajectory {
    pub values: Vec<Rational>,
    pub kind: TrajectoryKind,
}

impl LatticeTrajectory {
    pub fn new(values: Vec<Rational>) -> Self {
        LatticeTrajectory {
            values,
            kind: TrajectoryKind::Plain,
        }
    }

    pub fn borel(values: Vec<Rational>) -> Self {
        LatticeTrajectory {
            values,
            kind: TrajectoryKind::Borel,
        }
    }

    /// Samples `f` at `n = 0..=n_max`.
    pub fn from_fn(n_max: usize, f: impl FnMut(usize) -> Rational) -> Self {
        Self::new((0..=n_max).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, index: i64) -> Result<&Rational> {
        usize::try_from(index)
            .ok()
            .and_then(|i| self.values.get(i))
            .ok_or(Error::IndexOutOfRange {
                index,
                len: self.values.len(),
            })
    }

    /// `f(n+1) - f(n)` for every interior point; one value shorter.
    pub fn forward_difference(&self) -> LatticeTrajectory {
        let values = self.values.windows(2).map(|w| &w[1] - &w[0]).collect();
        LatticeTrajectory {
            values,
            kind: self.kind,
        }
    }
}

/// Truncated coefficient sequence `ẑ_0..ẑ_K` in the lower-factorial basis.
///
/// Trailing zeros carry no information, so equality ignores them.
#[derive(Debug, Clone)]
pub struct HatSeries {
    coeffs: Vec<Rational>,
}

impl HatSeries {
    /// Empty input is read as the zero series `[0]`.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        HatSeries { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    /// The unit `p_0 = 1`.
    pub fn one() -> Self {
        Self::new(vec![Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Truncation degree `K` (index of the last stored coefficient).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Drops trailing zeros, keeping at least one coefficient.
    pub fn trimmed(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    /// Hat-space image of the delta operator: `(D f)_k = (k+1) f_{k+1}`.
    ///
    /// This is a derivation for [`star_product`].
    pub fn derivation(&self) -> HatSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * int(k as i64))
            .collect();
        HatSeries::new(coeffs)
    }

    pub fn add(&self, other: &HatSeries) -> HatSeries {
        let len = self.coeffs.len().max(other.coeffs.len());
        HatSeries::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn scale(&self, factor: &Rational) -> HatSeries {
        HatSeries::new(self.coeffs.iter().map(|c| c * factor).collect())
    }
}

impl PartialEq for HatSeries {
    fn eq(&self, other: &Self) -> bool {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len).all(|k| self.coeff(k) == other.coeff(k))
    }
}

impl Eq for HatSeries {}

impl fmt::Display for HatSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

/// `(f*g)_k = Σ_{i≤k} f_i g_{k-i}`, truncated at `deg f + deg g`.
///
/// ```
/// use rota::umbral::{star_product, HatSeries};
/// let p1 = HatSeries::from_ints(&[0, 1]);
/// assert_eq!(star_product(&p1, &p1), HatSeries::from_ints(&[0, 0, 1]));
/// ```
pub fn star_product(f: &HatSeries, g: &HatSeries) -> HatSeries {
    let (a, b) = (f.coeffs(), g.coeffs());
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    HatSeries::new(out)
}

/// [`star_product`] keeping only coefficients up to index `max_index`.
pub fn star_product_truncated(f: &HatSeries, g: &HatSeries, max_index: usize) -> HatSeries {
    let (a, b) = (f.coeffs(), g.coeffs());
    let len = (a.len() + b.len() - 1).min(max_index + 1);
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    HatSeries::new(out)
}

/// `f * f * ... * f` (`power` factors); `power = 0` gives the unit.
pub fn star_power(f: &HatSeries, power: u32) -> HatSeries {
    let mut acc = HatSeries::one();
    let mut base = f.clone();
    let mut e = power;
    while e > 0 {
        if e & 1 == 1 {
            acc = star_product(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = star_product(&base, &base);
        }
    }
    acc
}

/// Lattice values `z_n = Σ_{l ≤ min(n, K)} n!/(n-l)! ẑ_l` for `n = 0..=n_max`.
pub fn hat_to_lattice(f: &HatSeries, n_max: usize) -> LatticeTrajectory {
    let coeffs = f.coeffs();
    let values = (0..=n_max)
        .map(|n| {
            // running product n (n-1) ... (n-l+1)
            let mut falling = BigInt::one();
            let mut sum = Rational::zero();
            for (l, c) in coeffs.iter().enumerate().take(n + 1) {
                if l > 0 {
                    falling *= n - l + 1;
                }
                if !c.is_zero() {
                    sum += c * Rational::from_integer(falling.clone());
                }
            }
            sum
        })
        .collect();
    LatticeTrajectory::new(values)
}

/// Inverse transform `ẑ_n = Σ_{l≤n} (-1)^{n-l} z_l / (l! (n-l)!)`.
///
/// ```
/// use rota::umbral::{lattice_to_hat, HatSeries, LatticeTrajectory};
/// use rota::rational::int;
/// let line = LatticeTrajectory::from_fn(3, |n| int(n as i64));
/// assert_eq!(lattice_to_hat(&line), HatSeries::from_ints(&[0, 1]));
/// ```
pub fn lattice_to_hat(f: &LatticeTrajectory) -> HatSeries {
    let fact = factorials(f.len());
    let coeffs = (0..f.len())
        .map(|n| hat_coefficient(&f.values, n, &fact))
        .collect();
    HatSeries::new(coeffs)
}

/// Single coefficient of the inverse transform using a factorial table.
pub(crate) fn hat_coefficient(values: &[Rational], n: usize, fact: &[BigInt]) -> Rational {
    let mut sum = Rational::zero();
    for (l, z) in values.iter().enumerate().take(n + 1) {
        if z.is_zero() {
            continue;
        }
        let term = z / Rational::from_integer(&fact[l] * &fact[n - l]);
        if (n - l) % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
    }
    sum
}

/// Finite-difference delta operator `(1/σ) Σ_{k=l..m} α_k T^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaOperator {
    lower: i64,
    upper: i64,
    spacing: Rational,
    stencil: Vec<Rational>,
}

impl DeltaOperator {
    /// The forward difference `Δ⁺ = T - 1` on the unit lattice.
    pub fn forward_difference() -> Self {
        DeltaOperator {
            lower: 0,
            upper: 1,
            spacing: Rational::one(),
            stencil: vec![int(-1), int(1)],
        }
    }

    pub fn lower(&self) -> i64 {
        self.lower
    }

    pub fn upper(&self) -> i64 {
        self.upper
    }

    pub fn spacing(&self) -> &Rational {
        &self.spacing
    }

    /// `p = m - l`.
    pub fn order(&self) -> u32 {
        (self.upper - self.lower) as u32
    }

    /// `α_l, ..., α_m`.
    pub fn stencil(&self) -> &[Rational] {
        &self.stencil
    }

    /// `α_k` for `l ≤ k ≤ m`, zero elsewhere.
    pub fn alpha(&self, k: i64) -> Rational {
        if k < self.lower || k > self.upper {
            Rational::zero()
        } else {
            self.stencil[(k - self.lower) as usize].clone()
        }
    }
}

/// Builds the order-`m-l` stencil on nodes `l..=m`.
///
/// The coefficients solve the moment system `Σ k^j α_k = δ_{j,1}` for
/// `j = 0..=m-l`: the two defining conditions `Σ α_k = 0`, `Σ k α_k = 1`
/// plus vanishing higher moments, so the operator differentiates every
/// polynomial of degree `≤ m-l` exactly.
///
/// ```
/// use rota::umbral::make_delta_operator;
/// use rota::rational::{int, rat};
/// let central = make_delta_operator(-1, 1, int(1)).unwrap();
/// assert_eq!(central.stencil(), &[rat(-1, 2), int(0), rat(1, 2)]);
/// ```
pub fn make_delta_operator(lower: i64, upper: i64, spacing: Rational) -> Result<DeltaOperator> {
    if lower >= upper {
        return Err(Error::InvalidStencilBounds { lower, upper });
    }
    if !spacing.is_positive() {
        return Err(Error::NonPositiveSpacing(spacing.to_string()));
    }
    let size = (upper - lower + 1) as usize;
    // row j: k^j for k = lower..=upper
    let mut matrix: Vec<Vec<Rational>> = (0..size)
        .map(|j| {
            (lower..=upper)
                .map(|k| Rational::from_integer(num_traits::pow(BigInt::from(k), j)))
                .collect()
        })
        .collect();
    let mut rhs = vec![Rational::zero(); size];
    rhs[1] = Rational::one();
    let stencil =
        solve_exact(&mut matrix, &mut rhs).ok_or(Error::SingularMoments { lower, upper })?;
    if stencil[0].is_zero() || stencil[size - 1].is_zero() {
        return Err(Error::SingularMoments { lower, upper });
    }
    Ok(DeltaOperator {
        lower,
        upper,
        spacing,
        stencil,
    })
}

/// Gauss-Jordan elimination over the rationals. `None` if singular.
fn solve_exact(a: &mut [Vec<Rational>], b: &mut [Rational]) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for x in &mut a[col][col..] {
            *x *= &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            let (pivot_row, target) = if r < col {
                let (head, tail) = a.split_at_mut(col);
                (&tail[0], &mut head[r])
            } else {
                let (head, tail) = a.split_at_mut(r);
                (&head[col], &mut tail[0])
            };
            for (t, p) in target[col..].iter_mut().zip(&pivot_row[col..]) {
                *t -= &factor * p;
            }
            let delta = &factor * &b[col];
            b[r] -= delta;
        }
    }
    Some(b.to_vec())
}

/// `(1/σ) Σ_k α_k f(n+k)`. Every stencil point must lie inside `f`; there is
/// no implicit zero padding.
///
/// ```
/// use rota::umbral::{apply_delta, DeltaOperator, LatticeTrajectory};
/// use rota::rational::int;
/// let f = LatticeTrajectory::new(vec![int(1), int(2), int(4)]);
/// assert_eq!(apply_delta(&DeltaOperator::forward_difference(), &f, 0).unwrap(), int(1));
/// assert!(apply_delta(&DeltaOperator::forward_difference(), &f, 2).is_err());
/// ```
pub fn apply_delta(op: &DeltaOperator, f: &LatticeTrajectory, n: i64) -> Result<Rational> {
    let mut sum = Rational::zero();
    for (alpha, k) in op.stencil.iter().zip(op.lower..=op.upper) {
        let value = f.get(n + k)?;
        sum += alpha * value;
    }
    Ok(sum / &op.spacing)
}
