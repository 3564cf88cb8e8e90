//! The nonlocal lattice map attached to a polynomial vector field.
//!
//! For `dz/dt = a_N z^N + ... + a_1 z + a_0` the discrete counterpart on the
//! unit lattice reads
//!
//! ```text
//! z_{n+1} - z_n = Σ_{j=2..N} a_j Σ'_{k_1..k_j} (-1)^{k_1+..+k_j+n} / (k_1!..k_j!)
//!                   · z_{k_1}..z_{k_j} · n! (j-1)^{n-Σk} / (n-Σk)!
//!                 + a_1 z_n + a_0
//! ```
//!
//! where `Σ'` runs over the simplex `Σk ≤ n`. The same right-hand side is
//! `Σ_j a_j (z^{*j})_n`, the star powers computed in hat space. [`map_rhs`]
//! uses the hat-space route, [`map_rhs_multisum`] the explicit sum; the two
//! must agree exactly.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{factorials, int, odd, Rational};
use crate::umbral::{
    hat_coefficient, lattice_to_hat, lower_factorial_int, star_product_truncated, HatSeries,
    LatticeTrajectory,
};

/// Polynomial right-hand side `a_0 + a_1 z + ... + a_N z^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VectorField {
    coeffs: Vec<Rational>,
}

impl VectorField {
    /// Trailing zero coefficients are dropped; the empty list is the zero field.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Rational::zero());
        }
        VectorField { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    /// `a z^degree`.
    pub fn monomial(a: Rational, degree: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); degree + 1];
        coeffs[degree] = a;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> Rational {
        self.coeffs.get(j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Evaluates the polynomial at `z`.
    pub fn eval(&self, z: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, a| acc * z + a)
    }
}

/// Prints highest power first, e.g. `1/2*z^2 - 3*z + 1`.
impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let magnitude = a.abs();
            if first {
                if a.is_negative() {
                    f.write_str("-")?;
                }
            } else if a.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{magnitude}")?,
                _ => {
                    if !magnitude.is_one() {
                        write!(f, "{magnitude}*")?;
                    }
                    f.write_str("z")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Defect of a candidate solution at step `index`: left minus right side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residual {
    pub index: usize,
    pub value: Rational,
}

impl Residual {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

/// True when every residual vanishes exactly.
pub fn all_zero(residuals: &[Residual]) -> bool {
    residuals.iter().all(Residual::is_zero)
}

fn kernel_int(n: u64, s: u64, degree: u64) -> BigInt {
    if s > n {
        return BigInt::zero();
    }
    // 0^0 = 1
    let value =
        lower_factorial_int(n, s) * num_traits::pow(BigInt::from(degree - 1), (n - s) as usize);
    if odd(n) {
        -value
    } else {
        value
    }
}

/// Closed-form kernel `(-1)^n n! (N-1)^{n-s} / (n-s)!` with `s = Σ ks`,
/// zero when `s > n`.
///
/// ```
/// use rota::lattice::kernel_closed;
/// use rota::rational::int;
/// assert_eq!(kernel_closed(3, &[1, 2], 2).unwrap(), int(-6));
/// assert_eq!(kernel_closed(2, &[0, 0, 0], 3).unwrap(), int(4));
/// ```
pub fn kernel_closed(n: u64, ks: &[u64], degree: usize) -> Result<Rational> {
    if degree == 0 {
        return Err(Error::ZeroKernelDegree);
    }
    if ks.len() != degree {
        return Err(Error::KernelArity {
            expected: degree,
            got: ks.len(),
        });
    }
    let s: u64 = ks.iter().sum();
    Ok(Rational::from_integer(kernel_int(n, s, degree as u64)))
}

/// The quadratic kernel as the explicit double sum over `l_1 ≥ k_1`,
/// `l_2 ≥ k_2`, `l_1 + l_2 ≤ n` of
/// `(-1)^{l_1+l_2} n! / ((l_1-k_1)! (l_2-k_2)! (n-l_1-l_2)!)`.
pub fn kernel_bruteforce(n: u64, k1: u64, k2: u64) -> Result<Rational> {
    if k1 + k2 > n {
        return Err(Error::KernelOutsideSimplex { n, k1, k2 });
    }
    let fact = factorials(n as usize);
    let mut sum = Rational::zero();
    for l1 in k1..=n - k2 {
        for l2 in k2..=n - l1 {
            let term = Rational::new(
                fact[n as usize].clone(),
                &fact[(l1 - k1) as usize]
                    * &fact[(l2 - k2) as usize]
                    * &fact[(n - l1 - l2) as usize],
            );
            if odd(l1 + l2) {
                sum -= term;
            } else {
                sum += term;
            }
        }
    }
    Ok(sum)
}

/// Visits every `k ∈ ℕ^dims` with `Σk ≤ max_sum`, lexicographically.
pub fn for_each_simplex_point(dims: usize, max_sum: u64, mut visit: impl FnMut(&[u64])) {
    fn walk(point: &mut Vec<u64>, dims: usize, left: u64, visit: &mut dyn FnMut(&[u64])) {
        if point.len() == dims {
            visit(point);
            return;
        }
        for k in 0..=left {
            point.push(k);
            walk(point, dims, left - k, visit);
            point.pop();
        }
    }
    let mut point = Vec::with_capacity(dims);
    walk(&mut point, dims, max_sum, &mut visit);
}

fn require_prefix(z: &LatticeTrajectory, n: usize) -> Result<()> {
    if z.len() <= n {
        return Err(Error::IndexOutOfRange {
            index: n as i64,
            len: z.len(),
        });
    }
    Ok(())
}

/// Right-hand side of the lattice map at step `n`, via hat space:
/// `hat_to_lattice(Σ_j a_j star_power(lattice_to_hat(z_0..z_n), j))` at `n`,
/// with the star powers truncated at index `n` since higher terms vanish there.
///
/// ```
/// use rota::lattice::{map_rhs, VectorField};
/// use rota::umbral::LatticeTrajectory;
/// use rota::rational::int;
/// let square = VectorField::from_ints(&[0, 0, 1]);
/// let z = LatticeTrajectory::new(vec![int(1), int(2)]);
/// assert_eq!(map_rhs(&square, &z, 1).unwrap(), int(3));
/// ```
pub fn map_rhs(field: &VectorField, z: &LatticeTrajectory, n: usize) -> Result<Rational> {
    require_prefix(z, n)?;
    let prefix = LatticeTrajectory::new(z.values[..=n].to_vec());
    let hat = lattice_to_hat(&prefix);
    // z^{*j} at n only sees hat coefficients up to n
    let mut total = HatSeries::new(vec![]);
    let mut power = HatSeries::one();
    for (j, a) in field.coeffs().iter().enumerate() {
        if j > 0 {
            power = star_product_truncated(&power, &hat, n);
        }
        if !a.is_zero() {
            total = total.add(&power.scale(a));
        }
    }
    Ok(evaluate_at(&total, n))
}

/// `Σ_{l ≤ n} n!/(n-l)! f_l`, a single point of [`crate::umbral::hat_to_lattice`].
fn evaluate_at(f: &HatSeries, n: usize) -> Rational {
    let mut falling = BigInt::one();
    let mut sum = Rational::zero();
    for (l, c) in f.coeffs().iter().enumerate().take(n + 1) {
        if l > 0 {
            falling *= n - l + 1;
        }
        if !c.is_zero() {
            sum += c * Rational::from_integer(falling.clone());
        }
    }
    sum
}

/// Right-hand side of the lattice map at step `n` by direct summation over the
/// index simplex. `O(n^N)` terms; kept as the independent check on
/// [`map_rhs`].
pub fn map_rhs_multisum(field: &VectorField, z: &LatticeTrajectory, n: usize) -> Result<Rational> {
    require_prefix(z, n)?;
    let values = &z.values;
    let fact = factorials(n);
    let mut total = field.coeff(1) * &values[n] + field.coeff(0);
    for (j, a) in field.coeffs().iter().enumerate().skip(2) {
        if a.is_zero() {
            continue;
        }
        let mut sum = Rational::zero();
        for_each_simplex_point(j, n as u64, |ks| {
            let s: u64 = ks.iter().sum();
            let mut product = Rational::from_integer(kernel_int(n as u64, s, j as u64));
            let mut denom = BigInt::one();
            for &k in ks {
                product *= &values[k as usize];
                denom *= &fact[k as usize];
            }
            if product.is_zero() {
                return;
            }
            let term = product / Rational::from_integer(denom);
            if odd(s) {
                sum -= term;
            } else {
                sum += term;
            }
        });
        total += a * sum;
    }
    Ok(total)
}

/// Iterates the map from `z_0 = z0`: `z_{n+1} = z_n + rhs(n)`.
///
/// Each step extends the hat coefficients and the truncated star powers by
/// one term, so a step costs `O(N n)` exact operations.
///
/// ```
/// use rota::lattice::{evolve, VectorField};
/// use rota::rational::int;
/// let square = VectorField::from_ints(&[0, 0, 1]);
/// assert_eq!(evolve(&square, &int(1), 2).values, vec![int(1), int(2), int(5)]);
/// ```
pub fn evolve(field: &VectorField, z0: &Rational, n_max: usize) -> LatticeTrajectory {
    let degree = field.degree();
    let fact = factorials(n_max + 1);
    let mut z = Vec::with_capacity(n_max + 1);
    z.push(z0.clone());
    let mut hat: Vec<Rational> = Vec::with_capacity(n_max + 1);
    // powers[j - 2][l] = (ẑ^{*j})_l for j = 2..=degree
    let mut powers: Vec<Vec<Rational>> =
        vec![Vec::with_capacity(n_max + 1); degree.saturating_sub(1)];
    // combined hat coefficients of the right-hand side
    let mut rhs_hat: Vec<Rational> = Vec::with_capacity(n_max + 1);

    for n in 0..n_max {
        hat.push(hat_coefficient(&z, n, &fact));
        for j in 2..=degree {
            let (done, rest) = powers.split_at_mut(j - 2);
            let lower: &[Rational] = if j == 2 { &hat } else { &done[j - 3] };
            let mut c = Rational::zero();
            for i in 0..=n {
                if !hat[i].is_zero() && !lower[n - i].is_zero() {
                    c += &hat[i] * &lower[n - i];
                }
            }
            rest[0].push(c);
        }
        let mut r = field.coeff(1) * &hat[n];
        if n == 0 {
            r += field.coeff(0);
        }
        for j in 2..=degree {
            r += field.coeff(j) * &powers[j - 2][n];
        }
        rhs_hat.push(r);

        let mut step = Rational::zero();
        for (l, c) in rhs_hat.iter().enumerate() {
            if !c.is_zero() {
                step += c * Rational::from_integer(&fact[n] / &fact[n - l]);
            }
        }
        let next = &z[n] + step;
        z.push(next);
    }
    LatticeTrajectory::new(z)
}

/// Residuals `(z_{n+1} - z_n) - rhs(n)` for `n = 0..len-2`. A trajectory
/// shorter than two points has no steps to check.
pub fn verify_solution(field: &VectorField, z: &LatticeTrajectory) -> Vec<Residual> {
    (0..z.len().saturating_sub(1))
        .map(|n| {
            let rhs = map_rhs(field, z, n).expect("prefix is in range");
            Residual {
                index: n,
                value: &z.values[n + 1] - &z.values[n] - rhs,
            }
        })
        .collect()
}

/// Like [`verify_solution`] but through [`map_rhs_multisum`].
pub fn verify_solution_multisum(field: &VectorField, z: &LatticeTrajectory) -> Vec<Residual> {
    (0..z.len().saturating_sub(1))
        .map(|n| {
            let rhs = map_rhs_multisum(field, z, n).expect("prefix is in range");
            Residual {
                index: n,
                value: &z.values[n + 1] - &z.values[n] - rhs,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn traj(v: &[i64]) -> LatticeTrajectory {
        LatticeTrajectory::new(v.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn field_basics() {
        let f = VectorField::new(vec![int(1), int(-3), rat(1, 2), int(0)]);
        assert_eq!(f.degree(), 2);
        assert_eq!(f.to_string(), "1/2*z^2 - 3*z + 1");
        assert_eq!(VectorField::from_ints(&[0, 0, 0]).degree(), 0);
        assert_eq!(VectorField::from_ints(&[]).to_string(), "0");
        assert_eq!(VectorField::from_ints(&[0, -1]).to_string(), "-z");
        assert_eq!(
            VectorField::from_ints(&[-2, 0, 0, 1]).to_string(),
            "z^3 - 2"
        );
        assert_eq!(VectorField::monomial(rat(-1, 3), 3).coeffs().len(), 4);
        assert_eq!(f.eval(&int(2)), int(-3));
    }

    #[test]
    fn kernel_closed_examples() {
        assert_eq!(kernel_closed(2, &[0, 0], 2).unwrap(), int(1));
        assert_eq!(kernel_closed(3, &[1, 2], 2).unwrap(), int(-6));
        assert_eq!(kernel_closed(2, &[0, 0, 0], 3).unwrap(), int(4));
        assert_eq!(kernel_closed(2, &[2, 1], 2).unwrap(), int(0));
        // N = 1: only s = n survives
        assert_eq!(kernel_closed(4, &[4], 1).unwrap(), int(24));
        assert_eq!(kernel_closed(4, &[3], 1).unwrap(), int(0));
        assert_eq!(kernel_closed(1, &[], 0), Err(Error::ZeroKernelDegree));
        assert_eq!(
            kernel_closed(1, &[0], 2),
            Err(Error::KernelArity {
                expected: 2,
                got: 1
            })
        );
    }

    #[test]
    fn kernel_bruteforce_examples() {
        assert_eq!(kernel_bruteforce(2, 0, 0).unwrap(), int(1));
        for n in 0..8u64 {
            for k1 in 0..=n {
                let k2 = n - k1;
                let expect = if n % 2 == 0 { 1 } else { -1 } * (1..=n as i64).product::<i64>();
                assert_eq!(kernel_bruteforce(n, k1, k2).unwrap(), int(expect));
            }
        }
        assert_eq!(
            kernel_bruteforce(5, 2, 1).unwrap(),
            kernel_closed(5, &[2, 1], 2).unwrap()
        );
        assert_eq!(
            kernel_bruteforce(2, 2, 1),
            Err(Error::KernelOutsideSimplex { n: 2, k1: 2, k2: 1 })
        );
    }

    #[test]
    fn simplex_enumeration() {
        let mut points = Vec::new();
        for_each_simplex_point(2, 2, |k| points.push(k.to_vec()));
        assert_eq!(
            points,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![0, 2],
                vec![1, 0],
                vec![1, 1],
                vec![2, 0]
            ]
        );
        let mut count = 0;
        for_each_simplex_point(3, 5, |_| count += 1);
        assert_eq!(count, 56); // C(8, 3)
    }

    #[test]
    fn map_rhs_examples() {
        let square = VectorField::from_ints(&[0, 0, 1]);
        assert_eq!(map_rhs(&square, &traj(&[1]), 0).unwrap(), int(1));
        assert_eq!(map_rhs(&square, &traj(&[1, 2]), 1).unwrap(), int(3));
        assert_eq!(
            map_rhs_multisum(&square, &traj(&[1, 2]), 1).unwrap(),
            int(3)
        );

        let affine = VectorField::new(vec![rat(2, 3), int(-5)]);
        let z = traj(&[4, -1, 7]);
        for n in 0..3 {
            let expect = int(-5) * &z.values[n] + rat(2, 3);
            assert_eq!(map_rhs(&affine, &z, n).unwrap(), expect);
            assert_eq!(map_rhs_multisum(&affine, &z, n).unwrap(), expect);
        }
        assert_eq!(
            map_rhs(&square, &traj(&[1, 2]), 2),
            Err(Error::IndexOutOfRange { index: 2, len: 2 })
        );
        assert!(map_rhs_multisum(&square, &traj(&[]), 0).is_err());
    }

    #[test]
    fn evolve_examples() {
        let square = VectorField::from_ints(&[0, 0, 1]);
        assert_eq!(
            evolve(&square, &int(1), 2).values,
            vec![int(1), int(2), int(5)]
        );
        let zero = VectorField::from_ints(&[0]);
        assert_eq!(evolve(&zero, &rat(3, 7), 5).values, vec![rat(3, 7); 6]);
        let drift = VectorField::new(vec![rat(-1, 4)]);
        assert_eq!(
            evolve(&drift, &int(0), 3).values,
            vec![int(0), rat(-1, 4), rat(-1, 2), rat(-3, 4)]
        );
        assert_eq!(evolve(&square, &int(1), 0).values, vec![int(1)]);
    }

    #[test]
    fn evolve_matches_naive_iteration() {
        let field = VectorField::new(vec![rat(1, 2), int(-1), rat(2, 3), int(0), rat(-1, 5)]);
        let fast = evolve(&field, &rat(1, 3), 8);
        let mut slow = LatticeTrajectory::new(vec![rat(1, 3)]);
        for n in 0..8 {
            let next = &slow.values[n] + map_rhs_multisum(&field, &slow, n).unwrap();
            slow.values.push(next);
        }
        assert_eq!(fast, slow);
    }

    #[test]
    fn linear_fields_are_local() {
        let field = VectorField::new(vec![rat(1, 3), rat(-1, 2)]);
        let z = evolve(&field, &int(2), 10);
        for n in 0..10 {
            let expect = (int(1) + field.coeff(1)) * &z.values[n] + field.coeff(0);
            assert_eq!(z.values[n + 1], expect);
        }
    }

    #[test]
    fn verify_examples() {
        let square = VectorField::from_ints(&[0, 0, 1]);
        let z = evolve(&square, &rat(-2, 3), 10);
        assert!(all_zero(&verify_solution(&square, &z)));
        assert!(all_zero(&verify_solution_multisum(&square, &z)));

        let r = verify_solution(&square, &traj(&[1, 3]));
        assert_eq!(
            r,
            vec![Residual {
                index: 0,
                value: int(1)
            }]
        );
        assert!(verify_solution(&square, &traj(&[1])).is_empty());
    }
}
