//! Dense complex matrices of dimension at most 8.
//!
//! Only what the certificates need: products, adjoints, determinants, an
//! operator-norm estimate, and the reflection matrix `h(α, t)` together with
//! its two spectral projections.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::spaces::SpherePoint;
use crate::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major `n × n` complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[Complex64]> = self.data.chunks(self.n).collect();
        f.debug_struct("ComplexMatrix")
            .field("n", &self.n)
            .field("rows", &rows)
            .finish()
    }
}

impl ComplexMatrix {
    fn check_dim(n: usize) -> Result<()> {
        if n == 0 || n > MAX_DIM {
            Err(Error::UnsupportedDimension(n))
        } else {
            Ok(())
        }
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::check_dim(n)?;
        Ok(ComplexMatrix {
            n,
            data: vec![ZERO; n * n],
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        Ok(m)
    }

    /// `s · I_n`.
    pub fn scalar(n: usize, s: Complex64) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m.data[i * n + i] = s;
        }
        Ok(m)
    }

    pub fn diag(entries: &[Complex64]) -> Result<Self> {
        let n = entries.len();
        let mut m = Self::zeros(n)?;
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = e;
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        Self::check_dim(n)?;
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(ComplexMatrix { n, data })
    }

    /// 2×2 matrix `[[a, b], [c, d]]`.
    pub fn from_2x2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        ComplexMatrix {
            n: 2,
            data: vec![a, b, c, d],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Deviation `‖M*M − I‖` used to flag unitaries.
    pub fn unitarity_defect(&self) -> f64 {
        let g = adjoint(self).mul_unchecked(self);
        op_norm(&(&g - &Self::identity(self.n).expect("valid dim")))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// `max(‖M² − M‖, ‖M* − M‖)`.
    pub fn projection_defect(&self) -> f64 {
        let sq = self.mul_unchecked(self);
        op_norm(&(&sq - self)).max(op_norm(&(&adjoint(self) - self)))
    }

    pub fn is_projection(&self, tol: f64) -> bool {
        self.projection_defect() <= tol
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.n;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        ComplexMatrix { n, data }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.n, other.n, "matrix dimension mismatch");
        ComplexMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().map(|&z| -z).collect(),
        }
    }
}

/// Panics on dimension mismatch; use [`mat_mul`] for the checked form.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "matrix dimension mismatch");
        self.mul_unchecked(rhs)
    }
}

pub fn mat_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            left: a.n,
            right: b.n,
        });
    }
    Ok(a.mul_unchecked(b))
}

/// Conjugate transpose.
pub fn adjoint(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.n;
    let mut data = vec![ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            data[j * n + i] = a.data[i * n + j].conj();
        }
    }
    ComplexMatrix { n, data }
}

/// Determinant: cofactor expansion for `n ≤ 3`, LU with partial pivoting above.
pub fn det(a: &ComplexMatrix) -> Complex64 {
    let m = |i: usize, j: usize| a.data[i * a.n + j];
    match a.n {
        1 => m(0, 0),
        2 => m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0),
        3 => {
            m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
        }
        _ => det_lu(a),
    }
}

fn det_lu(a: &ComplexMatrix) -> Complex64 {
    let n = a.n;
    let mut lu = a.data.clone();
    let mut sign = ONE;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| lu[r * n + col].norm().total_cmp(&lu[s * n + col].norm()))
            .expect("nonempty range");
        if lu[pivot * n + col] == ZERO {
            return ZERO;
        }
        if pivot != col {
            for j in 0..n {
                lu.swap(pivot * n + j, col * n + j);
            }
            sign = -sign;
        }
        let p = lu[col * n + col];
        for r in (col + 1)..n {
            let factor = lu[r * n + col] / p;
            if factor == ZERO {
                continue;
            }
            for j in col..n {
                let v = lu[col * n + j];
                lu[r * n + j] -= factor * v;
            }
        }
    }
    (0..n).fold(sign, |acc, i| acc * lu[i * n + i])
}

/// Largest singular value.
///
/// Dimensions 1 and 2 use the closed form for the top eigenvalue of `M*M`.
/// Larger matrices use power iteration on `M*M` to relative tolerance 1e-10,
/// started from the normalized all-ones vector and restarted from each
/// standard basis vector; the largest Rayleigh quotient wins.
pub fn op_norm(a: &ComplexMatrix) -> f64 {
    match a.n {
        1 => a.data[0].norm(),
        2 => op_norm_2x2([a.data[0], a.data[1], a.data[2], a.data[3]]),
        n => {
            let gram = adjoint(a).mul_unchecked(a);
            let ones = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
            let mut best = power_iteration(&gram, ones);
            for k in 0..n {
                let mut e = vec![ZERO; n];
                e[k] = ONE;
                best = best.max(power_iteration(&gram, e));
            }
            best.max(0.0).sqrt()
        }
    }
}

/// Largest singular value of a row-major 2×2 matrix.
pub(crate) fn op_norm_2x2([p, q, r, s]: [Complex64; 4]) -> f64 {
    // M*M = [[g00, g01], [conj(g01), g11]]
    let g00 = p.norm_sqr() + r.norm_sqr();
    let g11 = q.norm_sqr() + s.norm_sqr();
    let g01 = p.conj() * q + r.conj() * s;
    let half_diff = 0.5 * (g00 - g11);
    let lambda = 0.5 * (g00 + g11) + half_diff.hypot(g01.norm());
    lambda.max(0.0).sqrt()
}

fn power_iteration(gram: &ComplexMatrix, mut v: Vec<Complex64>) -> f64 {
    const REL_TOL: f64 = 1e-10;
    const MAX_ITERS: usize = 10_000;
    let n = gram.n;
    let mut lambda = 0.0;
    for _ in 0..MAX_ITERS {
        let w: Vec<Complex64> = (0..n)
            .map(|i| (0..n).map(|j| gram.data[i * n + j] * v[j]).sum())
            .collect();
        let rayleigh: f64 = v.iter().zip(&w).map(|(a, b)| (a.conj() * b).re).sum();
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let converged = (rayleigh - lambda).abs() <= REL_TOL * rayleigh.abs();
        lambda = rayleigh;
        if converged {
            break;
        }
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / norm;
        }
    }
    lambda
}

/// `D(t)` with `D(t) + D(−t) = 1` exactly in floating point.
///
/// For `t ≥ 0` this is `0.5 + t/2`; for `t < 0` it is `1 − D(−t)`, which is
/// exact because `D(−t) ∈ [0.5, 1]`.
fn half_plus(t: f64) -> f64 {
    if t >= 0.0 {
        0.5 + 0.5 * t
    } else {
        1.0 - (0.5 - 0.5 * t)
    }
}

/// `h(α, t)` without the on-sphere check.
pub(crate) fn h_raw(alpha: Complex64, t: f64) -> ComplexMatrix {
    ComplexMatrix::from_2x2(
        Complex64::new(t, 0.0),
        alpha.conj(),
        alpha,
        Complex64::new(-t, 0.0),
    )
}

/// `(I₂ + h(α, t))/2` without the on-sphere check.
///
/// Evaluated so that `P(−x)` is bitwise the complement `I₂ − P(x)` and
/// `P(x) + P(−x) = I₂` holds exactly.
pub(crate) fn plus_projection_raw(alpha: Complex64, t: f64) -> ComplexMatrix {
    let off = alpha * 0.5;
    ComplexMatrix::from_2x2(
        Complex64::new(half_plus(t), 0.0),
        off.conj(),
        off,
        Complex64::new(half_plus(-t), 0.0),
    )
}

fn check_on_sphere(x: &SpherePoint, tol_point: f64) -> Result<()> {
    let dev = x.sphere_defect();
    if dev > tol_point || !dev.is_finite() {
        return Err(Error::OffSpace {
            what: "sphere point".into(),
            deviation: dev,
        });
    }
    Ok(())
}

/// The reflection `h(α, t) = [[t, ᾱ], [α, −t]]`: self-adjoint, squares to
/// `I₂`, determinant `−1` on the sphere.
pub fn h_matrix(x: &SpherePoint, tol_point: f64) -> Result<ComplexMatrix> {
    check_on_sphere(x, tol_point)?;
    Ok(h_raw(x.alpha, x.t))
}

/// `((I₂ + h(x))/2, (I₂ − h(x))/2)`, two orthogonal rank-one projections
/// summing to `I₂` exactly.
pub fn spectral_projections(
    x: &SpherePoint,
    tol_point: f64,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_on_sphere(x, tol_point)?;
    Ok((
        plus_projection_raw(x.alpha, x.t),
        plus_projection_raw(-x.alpha, -x.t),
    ))
}
