//! Pointwise 4×4 objects on the cone: the weight matrix `B(p)` of the
//! Hilbert product, its closed-form eigensystem, the constant symmetry
//! `J = diag(-1, 1, 1, 1)` and the fundamental symmetry `J'(p) = J B(p)`.
//!
//! `B(p)` has entries
//!
//! ```text
//! B₀₀ = (r⁻² + r²)/2
//! B₀ᵢ = (r⁻² - r²)/(2r) pⁱ
//! Bᵢⱼ = (r⁻² + r² - 2)/(2r²) pⁱpʲ + δᵢⱼ
//! ```
//!
//! and eigenvalues `1, 1, r⁻², r²`. Because `B J B = J`, the Krein product
//! `(φ, J'ψ)` reduces pointwise to the Minkowski form `φ† J ψ`.
//!
//! The verification residuals in this module are evaluated in double-double
//! arithmetic. In plain `f64` the entries of `B` grow like `r²/2`, so forming
//! `(J B)²` at `r = 10³` cancels numbers of size `2.5·10¹¹` down to `1` and
//! loses about five digits; the identities themselves are exact.

use std::ops::{Add, Div, Mul, Neg, Sub};

use nalgebra::{Matrix4, Vector4};
use twofloat::TwoFloat;

use crate::cone::ConePoint;
use crate::error::{Error, Result};

pub const MIN_RADIUS: f64 = 1e-6;
pub const MAX_RADIUS: f64 = 1e6;

/// Points with `√(p¹² + p²²) < AXIS_EPS · r` use the `φ → 0` limit of the
/// transversal eigenvectors.
pub const AXIS_EPS: f64 = 1e-12;

/// Arithmetic needed to evaluate the closed-form matrices; implemented for
/// `f64` and for double-double [`Dd`].
pub trait Real:
    Copy
    + From<f64>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn sqrt(self) -> Self;
    fn to_f64(self) -> f64;
}

impl Real for f64 {
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn to_f64(self) -> f64 {
        self
    }
}

/// Double-double scalar. `TwoFloat` division and square root are only
/// accurate to about one `f64` ulp, so both get one Newton correction here.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Dd(pub TwoFloat);

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd(TwoFloat::from(x))
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        Dd(self.0 + o.0)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        Dd(self.0 - o.0)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        Dd(self.0 * o.0)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q = self.0 / o.0;
        Dd(q + (self.0 - q * o.0) / o.0)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd(-self.0)
    }
}

impl Real for Dd {
    fn sqrt(self) -> Self {
        if self.0.hi() <= 0.0 {
            return Dd(TwoFloat::from(0.0));
        }
        let s = Dd(self.0.sqrt());
        s + (self - s * s) / (s + s)
    }
    fn to_f64(self) -> f64 {
        f64::from(self.0)
    }
}

/// Working precision for the verification residuals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Double,
    DoubleDouble,
}

fn check_range(p: &ConePoint) -> Result<()> {
    let r = p.r();
    if !(MIN_RADIUS..=MAX_RADIUS).contains(&r) {
        return Err(Error::Range { r });
    }
    Ok(())
}

fn lift<T: Real>(p: &ConePoint) -> [T; 3] {
    let s = p.spatial();
    [T::from(s[0]), T::from(s[1]), T::from(s[2])]
}

fn radius<T: Real>(s: &[T; 3]) -> T {
    (s[0] * s[0] + s[1] * s[1] + s[2] * s[2]).sqrt()
}

/// Entries of `B(p)`, following the closed form literally.
pub fn b_entries<T: Real>(s: [T; 3]) -> [[T; 4]; 4] {
    let one = T::from(1.0);
    let two = T::from(2.0);
    let r = radius(&s);
    let r2 = r * r;
    let inv_r2 = one / r2;
    let c0 = (inv_r2 + r2) / two;
    let c1 = (inv_r2 - r2) / (two * r);
    let c2 = (inv_r2 + r2 - two) / (two * r2);
    let mut b = [[T::from(0.0); 4]; 4];
    b[0][0] = c0;
    for i in 0..3 {
        b[0][i + 1] = c1 * s[i];
        b[i + 1][0] = c1 * s[i];
        // filled from one triangle so that the matrix is exactly symmetric
        for j in 0..=i {
            b[i + 1][j + 1] = c2 * s[i] * s[j];
            b[j + 1][i + 1] = b[i + 1][j + 1];
        }
        b[i + 1][i + 1] = b[i + 1][i + 1] + one;
    }
    b
}

/// Eigenvectors `[w₁⁺, w₁⁻, w_{r⁻²}, w_{r²}]` and eigenvalues `[1, 1, r⁻², r²]`.
pub fn eigen_entries<T: Real>(s: [T; 3]) -> ([[T; 4]; 4], [T; 4]) {
    let zero = T::from(0.0);
    let one = T::from(1.0);
    let r = radius(&s);
    let rho = (s[0] * s[0] + s[1] * s[1]).sqrt();
    let (w_plus, w_minus) = if rho.to_f64() < AXIS_EPS * r.to_f64() {
        let sign = if s[2].to_f64() >= 0.0 { one } else { -one };
        ([zero, zero, -one, zero], [zero, sign, zero, zero])
    } else {
        (
            [zero, s[1] / rho, -s[0] / rho, zero],
            [
                zero,
                s[0] * s[2] / (rho * r),
                s[1] * s[2] / (rho * r),
                -(rho / r),
            ],
        )
    };
    let h = one / T::from(2.0).sqrt();
    let n = [s[0] / r, s[1] / r, s[2] / r];
    let w_low = [h, h * n[0], h * n[1], h * n[2]];
    let w_high = [h, -(h * n[0]), -(h * n[1]), -(h * n[2])];
    let r2 = r * r;
    ([w_plus, w_minus, w_low, w_high], [one, one, one / r2, r2])
}

fn to_matrix(m: &[[f64; 4]; 4]) -> Matrix4<f64> {
    Matrix4::from_fn(|i, j| m[i][j])
}

/// `B(p)` at a cone point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightMatrix {
    pub p: ConePoint,
    pub entries: Matrix4<f64>,
}

pub fn b_matrix(p: &ConePoint) -> Result<WeightMatrix> {
    check_range(p)?;
    let b = b_entries::<f64>(p.spatial());
    Ok(WeightMatrix {
        p: *p,
        entries: to_matrix(&b),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vector4<f64>,
}

/// Ordered as `w₁⁺, w₁⁻, w_{r⁻²}, w_{r²}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem {
    pub p: ConePoint,
    pub pairs: [EigenPair; 4],
}

impl EigenSystem {
    pub fn w_plus(&self) -> Vector4<f64> {
        self.pairs[0].vector
    }
    pub fn w_minus(&self) -> Vector4<f64> {
        self.pairs[1].vector
    }
    pub fn w_low(&self) -> Vector4<f64> {
        self.pairs[2].vector
    }
    pub fn w_high(&self) -> Vector4<f64> {
        self.pairs[3].vector
    }
}

pub fn b_eigensystem(p: &ConePoint) -> Result<EigenSystem> {
    check_range(p)?;
    Ok(eigensystem_unchecked(p))
}

pub(crate) fn eigensystem_unchecked(p: &ConePoint) -> EigenSystem {
    let (w, l) = eigen_entries::<f64>(p.spatial());
    let pair = |k: usize| EigenPair {
        value: l[k],
        vector: Vector4::from(w[k]),
    };
    EigenSystem {
        p: *p,
        pairs: [pair(0), pair(1), pair(2), pair(3)],
    }
}

/// Whether the transversal eigenvectors at `p` come from the axis convention.
pub fn in_axis_zone(p: &ConePoint) -> bool {
    let s = p.spatial();
    s[0].hypot(s[1]) < AXIS_EPS * p.r()
}

/// `J = diag(-1, 1, 1, 1)`.
pub fn j_bar() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(-1.0, 1.0, 1.0, 1.0))
}

/// `J'(p) = J B(p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalSymmetry {
    pub p: ConePoint,
    pub entries: Matrix4<f64>,
}

pub fn fundamental_symmetry(p: &ConePoint) -> Result<FundamentalSymmetry> {
    let b = b_matrix(p)?;
    Ok(FundamentalSymmetry {
        p: *p,
        entries: j_bar() * b.entries,
    })
}

type M4<T> = [[T; 4]; 4];

fn mat_mul<T: Real>(a: &M4<T>, b: &M4<T>) -> M4<T> {
    let mut out = [[T::from(0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut acc = T::from(0.0);
            for k in 0..4 {
                acc = acc + a[i][k] * b[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

fn j_bar_mul<T: Real>(b: &M4<T>) -> M4<T> {
    let mut out = *b;
    for v in out[0].iter_mut() {
        *v = -*v;
    }
    out
}

fn max_abs_diff<T: Real>(a: &M4<T>, b: &M4<T>) -> f64 {
    let mut m = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            m = m.max((a[i][j] - b[i][j]).to_f64().abs());
        }
    }
    m
}

fn identity<T: Real>() -> M4<T> {
    let mut id = [[T::from(0.0); 4]; 4];
    for (i, row) in id.iter_mut().enumerate() {
        row[i] = T::from(1.0);
    }
    id
}

fn dispatch<F, G>(p: &ConePoint, precision: Precision, f64_path: F, dd_path: G) -> Result<f64>
where
    F: FnOnce([f64; 3]) -> f64,
    G: FnOnce([Dd; 3]) -> f64,
{
    check_range(p)?;
    Ok(match precision {
        Precision::Double => f64_path(lift::<f64>(p)),
        Precision::DoubleDouble => dd_path(lift::<Dd>(p)),
    })
}

fn reconstruction<T: Real>(s: [T; 3]) -> f64 {
    let b = b_entries(s);
    let (w, l) = eigen_entries(s);
    let mut sum = [[T::from(0.0); 4]; 4];
    for k in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                sum[i][j] = sum[i][j] + l[k] * w[k][i] * w[k][j];
            }
        }
    }
    max_abs_diff(&b, &sum)
}

fn eigen_equation<T: Real>(s: [T; 3]) -> f64 {
    let b = b_entries(s);
    let (w, l) = eigen_entries(s);
    let mut worst = 0.0f64;
    for k in 0..4 {
        let mut sq = 0.0;
        for i in 0..4 {
            let mut acc = T::from(0.0);
            for j in 0..4 {
                acc = acc + b[i][j] * w[k][j];
            }
            let d = (acc - l[k] * w[k][i]).to_f64();
            sq += d * d;
        }
        worst = worst.max(sq.sqrt());
    }
    worst
}

fn orthonormality<T: Real>(s: [T; 3]) -> f64 {
    let (w, _) = eigen_entries(s);
    let mut worst = 0.0f64;
    for a in 0..4 {
        for b in 0..4 {
            let mut acc = T::from(0.0);
            for (x, y) in w[a].iter().zip(&w[b]) {
                acc = acc + *x * *y;
            }
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((acc.to_f64() - target).abs());
        }
    }
    worst
}

fn involution<T: Real>(s: [T; 3]) -> f64 {
    let jb = j_bar_mul(&b_entries(s));
    max_abs_diff(&mat_mul(&jb, &jb), &identity())
}

fn b_self_adjoint<T: Real>(s: [T; 3]) -> f64 {
    let b = b_entries(s);
    let jp = j_bar_mul(&b);
    let jp_t: [[T; 4]; 4] = std::array::from_fn(|i| std::array::from_fn(|j| jp[j][i]));
    max_abs_diff(&mat_mul(&b, &jp), &mat_mul(&jp_t, &b))
}

fn symmetry<T: Real>(s: [T; 3]) -> f64 {
    let b = b_entries(s);
    let mut worst = 0.0f64;
    for (i, row) in b.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            worst = worst.max((x - b[j][i]).to_f64().abs());
        }
    }
    worst
}

fn gauge_null<T: Real>(s: [T; 3]) -> f64 {
    let b = b_entries(s);
    let bjb = mat_mul(&b, &j_bar_mul(&b));
    let (w, _) = eigen_entries(s);
    let half_inv_r = T::from(1.0) / (T::from(2.0) * radius(&s));
    let mut worst = 0.0f64;
    for v in [w[2], w[3]] {
        let mut acc = T::from(0.0);
        for i in 0..4 {
            for j in 0..4 {
                acc = acc + v[i] * bjb[i][j] * v[j];
            }
        }
        worst = worst.max((acc * half_inv_r).to_f64().abs());
    }
    worst
}

fn transversal_fixed<T: Real>(s: [T; 3]) -> f64 {
    let b = b_entries(s);
    let (w, _) = eigen_entries(s);
    let mut worst = 0.0f64;
    for v in [w[0], w[1]] {
        for i in 0..4 {
            let mut bv = T::from(0.0);
            for j in 0..4 {
                bv = bv + b[i][j] * v[j];
            }
            let jv = if i == 0 { -v[0] } else { v[i] };
            worst = worst
                .max((bv - v[i]).to_f64().abs())
                .max((jv - v[i]).to_f64().abs());
        }
    }
    worst
}

/// `‖B(p) - Σ λᵢ wᵢ wᵢᵀ‖∞`.
pub fn spectral_reconstruction_residual(p: &ConePoint, precision: Precision) -> Result<f64> {
    dispatch(p, precision, reconstruction, reconstruction)
}

/// `maxᵢ ‖B wᵢ - λᵢ wᵢ‖₂`.
pub fn eigen_residual(p: &ConePoint, precision: Precision) -> Result<f64> {
    dispatch(p, precision, eigen_equation, eigen_equation)
}

/// `maxₐᵦ |wₐ·wᵦ - δₐᵦ|`.
pub fn orthonormality_residual(p: &ConePoint, precision: Precision) -> Result<f64> {
    dispatch(p, precision, orthonormality, orthonormality)
}

/// `‖(J B(p))² - I‖∞`.
pub fn involution_residual(p: &ConePoint, precision: Precision) -> Result<f64> {
    dispatch(p, precision, involution, involution)
}

/// `‖B J' - J'ᵀ B‖∞`.
pub fn b_self_adjointness_residual(p: &ConePoint, precision: Precision) -> Result<f64> {
    dispatch(p, precision, b_self_adjoint, b_self_adjoint)
}

/// `‖B - Bᵀ‖∞`.
pub fn symmetry_residual(p: &ConePoint) -> Result<f64> {
    dispatch(p, Precision::Double, symmetry, symmetry)
}

/// Largest pointwise Krein density `|w† B J B w| / (2r)` over the two gauge
/// eigenvectors, with the triple product formed explicitly.
pub fn gauge_krein_density(p: &ConePoint, precision: Precision) -> Result<f64> {
    dispatch(p, precision, gauge_null, gauge_null)
}

/// `max |B w - w|` and `max |J w - w|` over the transversal eigenvectors.
pub fn transversal_fixed_residual(p: &ConePoint, precision: Precision) -> Result<f64> {
    dispatch(p, precision, transversal_fixed, transversal_fixed)
}

/// Smallest eigenvalue of `B(p)` from the closed form, `min(1, r⁻², r²)`.
pub fn smallest_eigenvalue(p: &ConePoint) -> Result<f64> {
    check_range(p)?;
    let r2 = p.r() * p.r();
    Ok(1f64.min(r2).min(1.0 / r2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::cone_point;

    fn pt(x: f64, y: f64, z: f64) -> ConePoint {
        cone_point([x, y, z]).unwrap()
    }

    #[test]
    fn unit_radius_gives_identity() {
        for p in [pt(1.0, 0.0, 0.0), pt(0.6, 0.0, 0.8), pt(-0.48, 0.6, 0.64)] {
            let b = b_matrix(&p).unwrap();
            assert!((b.entries - Matrix4::identity()).abs().max() < 1e-15);
            let j = fundamental_symmetry(&p).unwrap();
            assert!((j.entries - j_bar()).abs().max() < 1e-15);
        }
    }

    #[test]
    fn b_on_z_axis_radius_two() {
        let b = b_matrix(&pt(0.0, 0.0, 2.0)).unwrap().entries;
        let expected = Matrix4::new(
            2.125, 0.0, 0.0, -1.875, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            -1.875, 0.0, 0.0, 2.125,
        );
        assert!((b - expected).abs().max() < 1e-15);
        let mut ev: Vec<f64> = b.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        for (got, want) in ev.iter().zip([0.25, 1.0, 1.0, 4.0]) {
            assert!((got - want).abs() < 1e-13, "{ev:?}");
        }
    }

    #[test]
    fn eigenvector_examples() {
        let e = b_eigensystem(&pt(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(e.w_plus(), Vector4::new(0.0, 0.0, -1.0, 0.0));
        let e = b_eigensystem(&pt(0.0, 0.0, 2.0)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((e.w_high() - Vector4::new(h, 0.0, 0.0, -h)).abs().max() < 1e-15);
        assert_eq!(e.pairs.map(|p| p.value), [1.0, 1.0, 0.25, 4.0]);
    }

    #[test]
    fn axis_zone_uses_azimuth_zero_limit() {
        let up = b_eigensystem(&pt(0.0, 0.0, 3.0)).unwrap();
        assert!(in_axis_zone(&up.p));
        assert_eq!(up.w_plus(), Vector4::new(0.0, 0.0, -1.0, 0.0));
        assert_eq!(up.w_minus(), Vector4::new(0.0, 1.0, 0.0, 0.0));
        let down = b_eigensystem(&pt(0.0, 0.0, -3.0)).unwrap();
        assert_eq!(down.w_minus(), Vector4::new(0.0, -1.0, 0.0, 0.0));
        // limit taken along φ = 0
        let near = b_eigensystem(&pt(1e-9, 0.0, 1.0)).unwrap();
        assert!((near.w_minus() - up.w_minus()).abs().max() < 1e-8);
        for p in [up.p, down.p] {
            assert!(eigen_residual(&p, Precision::Double).unwrap() < 1e-14);
            assert!(orthonormality_residual(&p, Precision::Double).unwrap() < 1e-15);
        }
    }

    #[test]
    fn j_bar_examples() {
        let j = j_bar();
        assert_eq!(j * j, Matrix4::identity());
        assert_eq!(
            j * Vector4::new(1.0, 0.0, 0.0, 0.0),
            Vector4::new(-1.0, 0.0, 0.0, 0.0)
        );
        assert_eq!(
            j * Vector4::new(0.0, 0.0, 1.0, 0.0),
            Vector4::new(0.0, 0.0, 1.0, 0.0)
        );
    }

    #[test]
    fn involution_on_z_axis() {
        let j = fundamental_symmetry(&pt(0.0, 0.0, 2.0)).unwrap().entries;
        assert!((j * j - Matrix4::identity()).abs().max() < 1e-12);
    }

    #[test]
    fn transversal_vectors_fixed_by_symmetry() {
        let p = pt(0.3, -1.7, 0.4);
        let e = b_eigensystem(&p).unwrap();
        let j = fundamental_symmetry(&p).unwrap().entries;
        let b = b_matrix(&p).unwrap().entries;
        for w in [e.w_plus(), e.w_minus()] {
            assert!((j * w - w).abs().max() < 1e-14);
            assert!((b * w - w).abs().max() < 1e-14);
            assert!((j_bar() * w - w).abs().max() < 1e-15);
        }
    }

    #[test]
    fn radius_range_enforced() {
        assert_eq!(b_matrix(&pt(0.0, 1e-7, 0.0)), Err(Error::Range { r: 1e-7 }));
        assert!(matches!(
            b_eigensystem(&pt(2e6, 0.0, 0.0)),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn double_precision_loses_involution_at_large_radius() {
        let p = pt(577.0, -400.0, 712.0);
        let naive = involution_residual(&p, Precision::Double).unwrap();
        let dd = involution_residual(&p, Precision::DoubleDouble).unwrap();
        assert!(dd < 1e-15, "{dd}");
        assert!(naive > 1e-9, "{naive}");
    }

    #[test]
    fn gauge_density_and_transversal_residuals() {
        for p in [
            pt(1e-3, 0.0, 0.0),
            pt(577.0, -400.0, 712.0),
            pt(0.3, 0.2, -0.1),
            pt(0.0, 0.0, 2.0),
        ] {
            assert!(gauge_krein_density(&p, Precision::DoubleDouble).unwrap() < 1e-12);
            assert!(transversal_fixed_residual(&p, Precision::DoubleDouble).unwrap() < 1e-12);
        }
        assert!(gauge_krein_density(&pt(0.0, 0.0, 1e-7), Precision::Double).is_err());
    }
}
