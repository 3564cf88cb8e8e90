//! Continuum side: Taylor coefficients, their transport to exact lattice
//! solutions, and the closed forms and number sequences used to check them.
//!
//! If `z(t) = Σ b_k t^k` solves `dz/dt = Σ a_j z^j`, the coefficients obey
//! `(l+1) b_{l+1} = Σ_j a_j (b^{⊗j})_l`. Read as hat coefficients, the same
//! recurrence says the lattice series `z_n = Σ_{k≤n} b_k n!/(n-k)!` solves the
//! lattice map exactly.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Residual, VectorField};
use crate::rational::{int, to_f64, Rational};
use crate::umbral::{hat_to_lattice, HatSeries, LatticeTrajectory};

/// A number sequence `c_0, c_1, ...` with a short tag (`"b"`, `"beta"`,
/// `"gamma"`, ...).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientSequence {
    pub coeffs: Vec<Rational>,
    pub label: String,
}

impl CoefficientSequence {
    pub fn new(label: impl Into<String>, coeffs: Vec<Rational>) -> Self {
        CoefficientSequence {
            coeffs,
            label: label.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Σ c_k t^k` in floating point (Horner).
    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + to_f64(c))
    }
}

/// Appends `(x^{⊗j})_l` for `j = 2..=powers.len()+1` given `x_0..x_l`.
fn extend_powers(x: &[Rational], powers: &mut [Vec<Rational>]) {
    let l = x.len() - 1;
    for j in 0..powers.len() {
        let (done, rest) = powers.split_at_mut(j);
        let lower: &[Rational] = if j == 0 { x } else { &done[j - 1] };
        let mut c = Rational::zero();
        for i in 0..=l {
            if !x[i].is_zero() && !lower[l - i].is_zero() {
                c += &x[i] * &lower[l - i];
            }
        }
        rest[0].push(c);
    }
}

/// `Σ_j a_j (x^{⊗j})_l` at the newest index `l`.
fn field_term(field: &VectorField, x: &[Rational], powers: &[Vec<Rational>]) -> Rational {
    let l = x.len() - 1;
    let mut r = field.coeff(1) * &x[l];
    if l == 0 {
        r += field.coeff(0);
    }
    for (j, p) in powers.iter().enumerate() {
        r += field.coeff(j + 2) * &p[l];
    }
    r
}

/// Taylor coefficients `b_0..b_{k_max}` of the solution with `z(0) = z0`.
///
/// ```
/// use rota::continuum::taylor_coefficients;
/// use rota::lattice::VectorField;
/// use rota::rational::rat;
/// let b = taylor_coefficients(&VectorField::from_ints(&[0, 0, 1]), &rat(1, 2), 3);
/// assert_eq!(b.coeffs, vec![rat(1, 2), rat(1, 4), rat(1, 8), rat(1, 16)]);
/// ```
pub fn taylor_coefficients(
    field: &VectorField,
    z0: &Rational,
    k_max: usize,
) -> CoefficientSequence {
    let mut b = Vec::with_capacity(k_max + 1);
    b.push(z0.clone());
    let mut powers = vec![Vec::with_capacity(k_max + 1); field.degree().saturating_sub(1)];
    for l in 0..k_max {
        extend_powers(&b, &mut powers);
        let r = field_term(field, &b, &powers);
        b.push(r / int(l as i64 + 1));
    }
    CoefficientSequence::new("b", b)
}

/// Residuals `(l+1) ẑ_{l+1} - Σ_j a_j (ẑ^{⊗j})_l` of the hat-space
/// recurrence, for `l = 0..K-1`.
pub fn recurrence_residuals(field: &VectorField, hat: &HatSeries) -> Vec<Residual> {
    let x = hat.coeffs();
    let mut powers = vec![Vec::with_capacity(x.len()); field.degree().saturating_sub(1)];
    (0..x.len().saturating_sub(1))
        .map(|l| {
            extend_powers(&x[..=l], &mut powers);
            let r = field_term(field, &x[..=l], &powers);
            Residual {
                index: l,
                value: int(l as i64 + 1) * &x[l + 1] - r,
            }
        })
        .collect()
}

/// `z_n = Σ_{k=0..n} b_k n!/(n-k)!` for `n = 0..=n_max`.
///
/// ```
/// use rota::continuum::{lattice_solution, CoefficientSequence};
/// use rota::rational::int;
/// let b = CoefficientSequence::new("b", vec![int(1); 3]);
/// assert_eq!(lattice_solution(&b, 2).unwrap().values, vec![int(1), int(2), int(5)]);
/// ```
pub fn lattice_solution(coeffs: &CoefficientSequence, n_max: usize) -> Result<LatticeTrajectory> {
    if coeffs.len() <= n_max {
        return Err(Error::InsufficientCoefficients {
            needed: n_max,
            available: coeffs.len(),
        });
    }
    let hat = HatSeries::new(coeffs.coeffs[..=n_max].to_vec());
    Ok(hat_to_lattice(&hat, n_max))
}

/// `γ_k = C(2k, k) / 4^k`, the Taylor coefficients of `(1-x)^{-1/2}`.
///
/// ```
/// use rota::continuum::gamma_sequence;
/// use rota::rational::rat;
/// assert_eq!(gamma_sequence(3).coeffs, vec![rat(1, 1), rat(1, 2), rat(3, 8), rat(5, 16)]);
/// ```
pub fn gamma_sequence(k_max: usize) -> CoefficientSequence {
    let mut g = Vec::with_capacity(k_max + 1);
    g.push(Rational::one());
    for k in 0..k_max as i64 {
        let next = &g[k as usize] * Rational::new(BigInt::from(2 * k + 1), BigInt::from(2 * k + 2));
        g.push(next);
    }
    CoefficientSequence::new("gamma", g)
}

/// Real branch of the closed-form solution of `z' = a2 z² + a1 z + a0`,
/// chosen by the sign of `Γ = 4 a2 a0 - a1²` and the initial value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `Γ > 0`: `(-a1 + √Γ tan(½√Γ (t + c0))) / (2 a2)`.
    Tan,
    /// `Γ < 0`, `|2 a2 z0 + a1| < √-Γ`: `(-a1 - g tanh(½ g (t + c0))) / (2 a2)`, `g = √-Γ`.
    Tanh,
    /// `Γ < 0`, `|2 a2 z0 + a1| > √-Γ`: as `Tanh` with `coth`.
    Coth,
    /// `Γ = 0`: `-a1/(2 a2) + u0 / (1 - a2 u0 t)`, `u0 = z0 + a1/(2 a2)`.
    Rational,
    /// `z0` is a root of the right-hand side; the solution is constant.
    Equilibrium,
}

/// Closed-form solution of the quadratic field through `z(0) = z0`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticClosedForm {
    pub a0: Rational,
    pub a1: Rational,
    pub a2: Rational,
    pub z0: Rational,
    /// Phase constant fixed by `z(0) = z0`; infinite for an equilibrium.
    pub c0: f64,
    pub gamma_disc: Rational,
    pub branch: Branch,
}

const POLE_GUARD: f64 = 1e-9;

impl QuadraticClosedForm {
    pub fn new(a0: Rational, a1: Rational, a2: Rational, z0: Rational) -> Result<Self> {
        if a2.is_zero() {
            return Err(Error::DegenerateQuadratic);
        }
        let gamma_disc = int(4) * &a2 * &a0 - &a1 * &a1;
        // w = 2 a2 z0 + a1: shifts z to the vertex of the parabola
        let w = int(2) * &a2 * &z0 + &a1;
        let wf = to_f64(&w);
        let (branch, c0) = if gamma_disc.is_positive() {
            let s = to_f64(&gamma_disc).sqrt();
            (Branch::Tan, 2.0 / s * (wf / s).atan())
        } else if gamma_disc.is_negative() {
            let w2 = &w * &w;
            let neg = -&gamma_disc;
            let g = to_f64(&neg).sqrt();
            if w2 < neg {
                (Branch::Tanh, 2.0 / g * (-wf / g).atanh())
            } else if w2 > neg {
                (Branch::Coth, 2.0 / g * (-g / wf).atanh())
            } else {
                (Branch::Equilibrium, f64::INFINITY)
            }
        } else if w.is_zero() {
            (Branch::Equilibrium, f64::INFINITY)
        } else {
            // u0 = w / (2 a2), c0 = -1 / (a2 u0)
            (Branch::Rational, -2.0 / wf)
        };
        Ok(QuadraticClosedForm {
            a0,
            a1,
            a2,
            z0,
            c0,
            gamma_disc,
            branch,
        })
    }

    /// The quadratic field this closed form solves.
    pub fn field(&self) -> VectorField {
        VectorField::new(vec![self.a0.clone(), self.a1.clone(), self.a2.clone()])
    }

    /// Floating-point value `z(t)`; errors near a pole of the branch.
    pub fn evaluate(&self, t: f64) -> Result<f64> {
        let a1 = to_f64(&self.a1);
        let a2 = to_f64(&self.a2);
        let value = match self.branch {
            Branch::Equilibrium => to_f64(&self.z0),
            Branch::Tan => {
                let s = to_f64(&self.gamma_disc).sqrt();
                let theta = 0.5 * s * (t + self.c0);
                if theta.cos().abs() < POLE_GUARD {
                    return Err(Error::Domain {
                        t,
                        reason: "tan pole",
                    });
                }
                (-a1 + s * theta.tan()) / (2.0 * a2)
            }
            Branch::Tanh => {
                let g = (-to_f64(&self.gamma_disc)).sqrt();
                (-a1 - g * (0.5 * g * (t + self.c0)).tanh()) / (2.0 * a2)
            }
            Branch::Coth => {
                let g = (-to_f64(&self.gamma_disc)).sqrt();
                let th = (0.5 * g * (t + self.c0)).tanh();
                if th.abs() < POLE_GUARD {
                    return Err(Error::Domain {
                        t,
                        reason: "coth pole",
                    });
                }
                (-a1 - g / th) / (2.0 * a2)
            }
            Branch::Rational => {
                let u0 = to_f64(&self.z0) + a1 / (2.0 * a2);
                let denom = 1.0 - a2 * u0 * t;
                if denom.abs() < POLE_GUARD {
                    return Err(Error::Domain {
                        t,
                        reason: "simple pole",
                    });
                }
                -a1 / (2.0 * a2) + u0 / denom
            }
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(Error::Domain {
                t,
                reason: "non-finite value",
            })
        }
    }

    /// Distance from `t = 0` to the nearest complex singularity, i.e. the
    /// radius of convergence of the Taylor series at zero.
    pub fn convergence_radius(&self) -> f64 {
        match self.branch {
            Branch::Equilibrium => f64::INFINITY,
            Branch::Tan => {
                // real poles at t = -c0 + (2k+1) π / √Γ
                let s = to_f64(&self.gamma_disc).sqrt();
                let period = 2.0 * PI / s;
                let k = ((self.c0 - PI / s) / period).floor();
                [k - 1.0, k, k + 1.0, k + 2.0]
                    .iter()
                    .map(|k| (-self.c0 + (2.0 * k + 1.0) * PI / s).abs())
                    .fold(f64::INFINITY, f64::min)
            }
            Branch::Tanh => {
                let g = (-to_f64(&self.gamma_disc)).sqrt();
                self.c0.hypot(PI / g)
            }
            Branch::Coth => self.c0.abs(),
            Branch::Rational => self.c0.abs(),
        }
    }
}

/// `β_k`, the Taylor coefficients of the closed form at zero, obtained from
/// the exact Cauchy-product recurrence rather than by differentiation.
pub fn beta_sequence(qcf: &QuadraticClosedForm, k_max: usize) -> CoefficientSequence {
    let mut b = taylor_coefficients(&qcf.field(), &qcf.z0, k_max);
    b.label = "beta".into();
    b
}

/// Lattice solution of the cubic map from `z(t) = 1/(√2 √(c0 - a3 t))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CubicSolution {
    /// `2 c0` is a rational square, so every `z_n` is rational.
    Exact(LatticeTrajectory),
    /// `z_n = y_n / √scale_squared` with `y_n` exact and `scale_squared = 2 c0`.
    Rescaled {
        rescaled: LatticeTrajectory,
        scale_squared: Rational,
    },
}

impl CubicSolution {
    pub fn is_exact(&self) -> bool {
        matches!(self, CubicSolution::Exact(_))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            CubicSolution::Exact(z) => z.values.iter().map(to_f64).collect(),
            CubicSolution::Rescaled {
                rescaled,
                scale_squared,
            } => {
                let scale = to_f64(scale_squared).sqrt();
                rescaled.values.iter().map(|y| to_f64(y) / scale).collect()
            }
        }
    }
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer(), r.denom());
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d).then(|| Rational::new(sn, sd))
}

/// `z_n = Σ_k γ_k/√2 · n!/(n-k)! · a3^k / c0^{(2k+1)/2}`.
///
/// The rescaled values `y_n = √(2 c0) z_n = Σ γ_k (a3/c0)^k n!/(n-k)!` are
/// always rational and solve the cubic map with coefficient `a3 / (2 c0)`.
pub fn cubic_lattice_solution(a3: &Rational, c0: &Rational, n_max: usize) -> Result<CubicSolution> {
    if !a3.is_negative() || !c0.is_positive() {
        return Err(Error::CubicParameters);
    }
    let ratio = a3 / c0;
    let gamma = gamma_sequence(n_max);
    let mut power = Rational::one();
    let coeffs = gamma
        .coeffs
        .iter()
        .map(|g| {
            let c = g * &power;
            power *= &ratio;
            c
        })
        .collect();
    let rescaled = lattice_solution(&CoefficientSequence::new("y", coeffs), n_max)?;
    let scale_squared = int(2) * c0;
    Ok(match rational_sqrt(&scale_squared) {
        Some(root) => CubicSolution::Exact(LatticeTrajectory::new(
            rescaled.values.iter().map(|y| y / &root).collect(),
        )),
        None => CubicSolution::Rescaled {
            rescaled,
            scale_squared,
        },
    })
}
