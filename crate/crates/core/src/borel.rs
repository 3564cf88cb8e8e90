//! Finite Borel-type regularization.
//!
//! Reweighting the transported solution `z_n = Σ b_k n!/(n-k)!` to
//! `w_n = Σ b_k/(n-k)!` (that is, `w_n = z_n / n!`) removes the factorial
//! growth. For quadratic fields the `w_n` solve
//!
//! ```text
//! (n+1) w_{n+1} - w_n = a2 Σ'_{k1+k2≤n} (-1)^{k1+k2+n} w_{k1} w_{k2} / (n-k1-k2)!
//!                       + a1 w_n + a0 / n!
//! ```

use num_bigint::BigInt;
use num_traits::Zero;

use crate::continuum::CoefficientSequence;
use crate::error::{Error, Result};
use crate::lattice::{Residual, VectorField};
use crate::rational::{factorials, int, odd, Rational};
use crate::umbral::LatticeTrajectory;

/// Highest field degree with a regularized map.
pub const MAX_BOREL_DEGREE: usize = 2;

/// `w_n = Σ_{k=0..n} b_k / (n-k)!` for `n = 0..=n_max`.
///
/// ```
/// use rota::borel::borel_transform;
/// use rota::continuum::CoefficientSequence;
/// use rota::rational::{int, rat};
/// let b = CoefficientSequence::new("b", vec![int(1); 3]);
/// assert_eq!(borel_transform(&b, 2).unwrap().values, vec![int(1), int(2), rat(5, 2)]);
/// ```
pub fn borel_transform(coeffs: &CoefficientSequence, n_max: usize) -> Result<LatticeTrajectory> {
    if coeffs.len() <= n_max {
        return Err(Error::InsufficientCoefficients {
            needed: n_max,
            available: coeffs.len(),
        });
    }
    let fact = factorials(n_max);
    let values = (0..=n_max)
        .map(|n| {
            coeffs.coeffs[..=n]
                .iter()
                .enumerate()
                .filter(|(_, b)| !b.is_zero())
                .map(|(k, b)| b / Rational::from_integer(fact[n - k].clone()))
                .sum()
        })
        .collect();
    Ok(LatticeTrajectory::borel(values))
}

fn check_degree(field: &VectorField) -> Result<()> {
    if field.degree() > MAX_BOREL_DEGREE {
        return Err(Error::UnsupportedDegree {
            degree: field.degree(),
            max: MAX_BOREL_DEGREE,
        });
    }
    Ok(())
}

/// Right-hand side of the regularized map at step `n`.
pub fn borel_map_rhs(field: &VectorField, w: &LatticeTrajectory, n: usize) -> Result<Rational> {
    check_degree(field)?;
    if w.len() <= n {
        return Err(Error::IndexOutOfRange {
            index: n as i64,
            len: w.len(),
        });
    }
    let fact = factorials(n);
    let v = &w.values;
    let mut total =
        field.coeff(1) * &v[n] + field.coeff(0) / Rational::from_integer(fact[n].clone());
    let a2 = field.coeff(2);
    if !a2.is_zero() {
        let mut sum = Rational::zero();
        for k1 in 0..=n {
            if v[k1].is_zero() {
                continue;
            }
            for k2 in 0..=n - k1 {
                let term = &v[k1] * &v[k2] / Rational::from_integer(fact[n - k1 - k2].clone());
                if odd((k1 + k2 + n) as u64) {
                    sum -= term;
                } else {
                    sum += term;
                }
            }
        }
        total += a2 * sum;
    }
    Ok(total)
}

/// Residuals `(n+1) w_{n+1} - w_n - rhs(n)` for `n = 0..len-2`.
pub fn verify_borel_solution(field: &VectorField, w: &LatticeTrajectory) -> Result<Vec<Residual>> {
    check_degree(field)?;
    (0..w.len().saturating_sub(1))
        .map(|n| {
            let rhs = borel_map_rhs(field, w, n)?;
            Ok(Residual {
                index: n,
                value: int(n as i64 + 1) * &w.values[n + 1] - &w.values[n] - rhs,
            })
        })
        .collect()
}

/// Largest `|w_n|`, handy for confinement checks.
pub fn max_abs(w: &LatticeTrajectory) -> Rational {
    use num_traits::Signed;
    w.values
        .iter()
        .map(Signed::abs)
        .max()
        .unwrap_or_else(|| Rational::from_integer(BigInt::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum::taylor_coefficients;
    use crate::lattice::all_zero;
    use crate::rational::{factorial, rat};
    use crate::umbral::TrajectoryKind;

    fn geometric(z0: &Rational, k_max: usize) -> CoefficientSequence {
        taylor_coefficients(&VectorField::from_ints(&[0, 0, 1]), z0, k_max)
    }

    #[test]
    fn transform_examples() {
        let w = borel_transform(&geometric(&int(1), 2), 2).unwrap();
        assert_eq!(w.values, vec![int(1), int(2), rat(5, 2)]);
        assert_eq!(w.kind, TrajectoryKind::Borel);

        let c = CoefficientSequence::new("b", vec![rat(3, 4), int(0), int(0), int(0), int(0)]);
        let w = borel_transform(&c, 4).unwrap();
        for n in 0..=4 {
            assert_eq!(
                w.values[n],
                rat(3, 4) / Rational::from_integer(factorial(n as u64))
            );
        }
        assert!(borel_transform(&c, 5).is_err());
    }

    #[test]
    fn transform_is_lattice_solution_over_factorial() {
        let b = geometric(&rat(-3, 5), 10);
        let z = crate::continuum::lattice_solution(&b, 10).unwrap();
        let w = borel_transform(&b, 10).unwrap();
        for n in 0..=10 {
            assert_eq!(
                &w.values[n] * Rational::from_integer(factorial(n as u64)),
                z.values[n]
            );
        }
    }

    #[test]
    fn bounded_by_exponential_majorant() {
        // |w_n| ≤ e |z0| for |z0| ≤ 1
        for z0 in [rat(1, 1), rat(-1, 1), rat(1, 2), rat(-9, 10)] {
            let w = borel_transform(&geometric(&z0, 40), 40).unwrap();
            let bound = std::f64::consts::E * crate::rational::to_f64(&z0).abs();
            assert!(crate::rational::to_f64(&max_abs(&w)) <= bound + 1e-12);
        }
    }

    #[test]
    fn map_examples() {
        let square = VectorField::from_ints(&[0, 0, 1]);
        let z0 = rat(2, 7);
        let w0 = LatticeTrajectory::borel(vec![z0.clone()]);
        assert_eq!(borel_map_rhs(&square, &w0, 0).unwrap(), &z0 * &z0);
        let w = borel_transform(&geometric(&z0, 1), 1).unwrap();
        assert_eq!(int(1) * &w.values[1] - &w.values[0], &z0 * &z0);

        let drift = VectorField::new(vec![rat(5, 3)]);
        let any = LatticeTrajectory::borel(vec![int(4); 5]);
        assert_eq!(borel_map_rhs(&drift, &any, 3).unwrap(), rat(5, 18));

        let cube = VectorField::from_ints(&[0, 0, 0, 1]);
        assert_eq!(
            borel_map_rhs(&cube, &any, 0),
            Err(Error::UnsupportedDegree { degree: 3, max: 2 })
        );
        assert!(verify_borel_solution(&cube, &any).is_err());
        assert!(borel_map_rhs(&square, &any, 5).is_err());
    }

    #[test]
    fn linear_terms_are_local() {
        let field = VectorField::new(vec![rat(1, 2), rat(-2, 3)]);
        let mut w = LatticeTrajectory::borel((0..6).map(|k| rat(k, 3)).collect());
        let before = borel_map_rhs(&field, &w, 3).unwrap();
        w.values[0] = int(100);
        w.values[1] = int(-7);
        w.values[5] = int(9);
        assert_eq!(borel_map_rhs(&field, &w, 3).unwrap(), before);
    }

    #[test]
    fn regularized_solutions_verify() {
        let square = VectorField::from_ints(&[0, 0, 1]);
        let w = borel_transform(&geometric(&rat(1, 2), 20), 20).unwrap();
        assert!(all_zero(&verify_borel_solution(&square, &w).unwrap()));

        let field = VectorField::new(vec![rat(-1, 2), rat(3, 4), rat(-5, 3)]);
        let b = taylor_coefficients(&field, &rat(1, 3), 15);
        let mut w = borel_transform(&b, 15).unwrap();
        assert!(all_zero(&verify_borel_solution(&field, &w).unwrap()));

        w.values[7] += rat(1, 1000);
        let r = verify_borel_solution(&field, &w).unwrap();
        assert!(r.iter().take(6).all(Residual::is_zero));
        assert!(!r[6].is_zero());
    }
}
