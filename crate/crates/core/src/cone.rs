//! Points on the forward light cone, SL(2,C) spinors, and the spinor map onto
//! proper orthochronous Lorentz matrices.
//!
//! Conventions used throughout the crate:
//!
//! * metric signature `(+,-,-,-)`, so `a·p = a⁰p⁰ - a⃗·p⃗`;
//! * a spinor `α` acts on the Hermitian matrix `X(p) = p⁰I + p⃗·σ⃗` by
//!   `X(Λ(α)p) = α† X(p) α`, which makes `α ↦ Λ(α)` an antihomomorphism,
//!   `Λ(αβ) = Λ(β)Λ(α)`;
//! * [`Sl2c::rotation`] and [`Sl2c::boost`] are parametrised so that `Λ(α)`
//!   is the *active* rotation (right-handed about the axis) or the active
//!   boost along the axis. A rotation by `ψ` about `z` sends `(1,0,0)` to
//!   `(cos ψ, sin ψ, 0)`.

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Minkowski metric `diag(+1,-1,-1,-1)`.
pub fn metric() -> Matrix4<f64> {
    Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, -1.0))
}

/// Minkowski product `a⁰b⁰ - a⃗·b⃗`.
pub fn minkowski_dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3]
}

/// A point on the forward light cone, parametrised by its spatial momentum.
/// The energy component is derived: `p⁰ = r = |p⃗|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConePoint {
    spatial: [f64; 3],
    r: f64,
}

impl ConePoint {
    pub fn new(spatial: [f64; 3]) -> Result<Self> {
        let r = norm3(&spatial);
        if !r.is_finite() {
            return Err(Error::Numerical { at: spatial });
        }
        if r == 0.0 {
            return Err(Error::ApexExcluded);
        }
        Ok(ConePoint { spatial, r })
    }

    /// Point with radius `r` in direction `(θ, φ)` (polar angle from `+z`).
    pub fn from_spherical(r: f64, cos_theta: f64, phi: f64) -> Result<Self> {
        let sin_theta = (1.0 - cos_theta * cos_theta).max(0.0).sqrt();
        Self::new([
            r * sin_theta * phi.cos(),
            r * sin_theta * phi.sin(),
            r * cos_theta,
        ])
    }

    #[inline]
    pub fn spatial(&self) -> [f64; 3] {
        self.spatial
    }

    #[inline]
    pub fn r(&self) -> f64 {
        self.r
    }

    #[inline]
    pub fn p0(&self) -> f64 {
        self.r
    }

    /// Contravariant four-momentum `(r, p¹, p², p³)`.
    #[inline]
    pub fn four(&self) -> [f64; 4] {
        [self.r, self.spatial[0], self.spatial[1], self.spatial[2]]
    }

    #[inline]
    pub fn unit(&self) -> [f64; 3] {
        [
            self.spatial[0] / self.r,
            self.spatial[1] / self.r,
            self.spatial[2] / self.r,
        ]
    }
}

/// `cone_point`: rejects the apex.
pub fn cone_point(spatial: [f64; 3]) -> Result<ConePoint> {
    ConePoint::new(spatial)
}

/// Density of the invariant measure `d³p / (2r)` relative to `d³p`.
#[inline]
pub fn measure_weight(p: &ConePoint) -> f64 {
    0.5 / p.r
}

pub(crate) fn norm3(v: &[f64; 3]) -> f64 {
    v[0].hypot(v[1]).hypot(v[2])
}

const DET_TOLERANCE: f64 = 1e-12;

/// `|det - 1|` against a tolerance scaled by `|ad| + |bc|`, so that large
/// boosts whose determinant cancels two big products are still accepted.
fn check_unimodular(m: &[[Complex64; 2]; 2]) -> Result<()> {
    let (ad, bc) = (m[0][0] * m[1][1], m[0][1] * m[1][0]);
    let det = ad - bc;
    let scale = 1f64.max(ad.norm() + bc.norm());
    if !det.re.is_finite() || !det.im.is_finite() || (det - 1.0).norm() > DET_TOLERANCE * scale {
        return Err(Error::InvalidSpinor {
            re: det.re,
            im: det.im,
        });
    }
    Ok(())
}

/// A unimodular complex 2×2 matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sl2c {
    m: [[Complex64; 2]; 2],
}

impl Sl2c {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let m = [[a, b], [c, d]];
        check_unimodular(&m)?;
        Ok(Sl2c { m })
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Sl2c {
            m: [[one, zero], [zero, one]],
        }
    }

    /// `cos(ψ/2) I + i sin(ψ/2) n·σ`: `Λ` is the active rotation by `ψ`
    /// about the unit axis `n`.
    pub fn rotation(axis: [f64; 3], angle: f64) -> Result<Self> {
        let n = unit_axis(axis)?;
        let (s, c) = (0.5 * angle).sin_cos();
        let i = Complex64::i();
        let ns = pauli_combination(n);
        Ok(Sl2c {
            m: [
                [c + i * s * ns[0][0], i * s * ns[0][1]],
                [i * s * ns[1][0], c + i * s * ns[1][1]],
            ],
        })
    }

    /// `cosh(χ/2) I + sinh(χ/2) n·σ`: `Λ` is the active boost with rapidity
    /// `χ` along `n`.
    pub fn boost(axis: [f64; 3], rapidity: f64) -> Result<Self> {
        let n = unit_axis(axis)?;
        let (s, c) = ((0.5 * rapidity).sinh(), (0.5 * rapidity).cosh());
        let ns = pauli_combination(n);
        let (b, cc) = (s * ns[0][1], s * ns[1][0]);
        // the smaller diagonal entry cancels; take it from ad - bc = 1
        let (mut a, mut d) = (c + s * ns[0][0], c + s * ns[1][1]);
        if a.norm() >= d.norm() {
            d = (1.0 + b * cc) / a;
        } else {
            a = (1.0 + b * cc) / d;
        }
        Ok(Sl2c {
            m: [[a, b], [cc, d]],
        })
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        self.m
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = self.m;
        Sl2c {
            m: [[d, -b], [-c, a]],
        }
    }

    pub fn adjoint(&self) -> [[Complex64; 2]; 2] {
        let [[a, b], [c, d]] = self.m;
        [[a.conj(), c.conj()], [b.conj(), d.conj()]]
    }

    pub fn mul(&self, other: &Sl2c) -> Sl2c {
        Sl2c {
            m: mat2_mul(&self.m, &other.m),
        }
    }
}

impl std::ops::Mul for Sl2c {
    type Output = Sl2c;
    fn mul(self, rhs: Sl2c) -> Sl2c {
        Sl2c::mul(&self, &rhs)
    }
}

fn unit_axis(axis: [f64; 3]) -> Result<[f64; 3]> {
    let n = norm3(&axis);
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::Config(
            "rotation/boost axis must be a nonzero finite vector".into(),
        ));
    }
    Ok([axis[0] / n, axis[1] / n, axis[2] / n])
}

fn pauli_combination(n: [f64; 3]) -> [[Complex64; 2]; 2] {
    [
        [Complex64::new(n[2], 0.0), Complex64::new(n[0], -n[1])],
        [Complex64::new(n[0], n[1]), Complex64::new(-n[2], 0.0)],
    ]
}

fn mat2_mul(x: &[[Complex64; 2]; 2], y: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

/// `σ_0 = I, σ_1, σ_2, σ_3`.
fn sigma(mu: usize) -> [[Complex64; 2]; 2] {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    match mu {
        0 => [[o, z], [z, o]],
        1 => [[z, o], [o, z]],
        2 => [[z, -i], [i, z]],
        _ => [[o, z], [z, -o]],
    }
}

/// A proper orthochronous Lorentz matrix acting on contravariant vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMatrix(pub Matrix4<f64>);

impl LorentzMatrix {
    pub fn identity() -> Self {
        LorentzMatrix(Matrix4::identity())
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn apply(&self, k: &[f64; 4]) -> [f64; 4] {
        let m = &self.0;
        let mut out = [0.0; 4];
        for (mu, o) in out.iter_mut().enumerate() {
            *o = m[(mu, 0)] * k[0] + m[(mu, 1)] * k[1] + m[(mu, 2)] * k[2] + m[(mu, 3)] * k[3];
        }
        out
    }

    /// `Λ⁻¹ = g Λᵀ g`.
    pub fn inverse(&self) -> Self {
        let g = metric();
        LorentzMatrix(g * self.0.transpose() * g)
    }

    pub fn compose(&self, other: &LorentzMatrix) -> Self {
        LorentzMatrix(self.0 * other.0)
    }

    /// `‖ΛᵀgΛ - g‖∞`.
    pub fn metric_residual(&self) -> f64 {
        let g = metric();
        (self.0.transpose() * g * self.0 - g).abs().max()
    }
}

/// The spinor map, `X(Λ(α)p) = α† X(p) α`.
pub fn spinor_to_lorentz(alpha: &Sl2c) -> Result<LorentzMatrix> {
    check_unimodular(&alpha.m)?;
    let adj = alpha.adjoint();
    let mut lambda = Matrix4::zeros();
    for nu in 0..4 {
        let image = mat2_mul(&mat2_mul(&adj, &sigma(nu)), &alpha.m);
        for mu in 0..4 {
            let prod = mat2_mul(&sigma(mu), &image);
            lambda[(mu, nu)] = 0.5 * (prod[0][0] + prod[1][1]).re;
        }
    }
    Ok(LorentzMatrix(lambda))
}

/// Moves a cone point with a Lorentz matrix; the image stays on the cone.
pub fn lorentz_act_point(lambda: &LorentzMatrix, p: &ConePoint) -> Result<ConePoint> {
    let k = lambda.apply(&p.four());
    let spatial = [k[1], k[2], k[3]];
    if norm3(&spatial) < 1e-300 {
        return Err(Error::ApexExcluded);
    }
    ConePoint::new(spatial)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn cone_point_examples() {
        assert_eq!(cone_point([0.0, 0.0, 1.0]).unwrap().p0(), 1.0);
        assert_eq!(cone_point([3.0, 4.0, 0.0]).unwrap().p0(), 5.0);
        assert_eq!(cone_point([0.0, 0.0, 0.0]), Err(Error::ApexExcluded));
    }

    #[test]
    fn measure_weight_examples() {
        let at = |r: f64| measure_weight(&cone_point([0.0, r, 0.0]).unwrap());
        assert_eq!(at(2.0), 0.25);
        assert_eq!(at(1.0), 0.5);
        assert!(close(at(0.1), 5.0, 1e-12));
    }

    #[test]
    fn identity_spinor_gives_identity() {
        let l = spinor_to_lorentz(&Sl2c::identity()).unwrap();
        assert!((l.0 - Matrix4::identity()).abs().max() < 1e-15);
    }

    #[test]
    fn z_boost_cosh() {
        let e = (0.5f64).exp();
        let alpha = Sl2c::new(
            Complex64::new(e, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0 / e, 0.0),
        )
        .unwrap();
        let l = spinor_to_lorentz(&alpha).unwrap();
        assert!(close(l.0[(0, 0)], 1f64.cosh(), 1e-14));
        assert!(close(l.0[(3, 0)], 1f64.sinh(), 1e-14));
        let b = Sl2c::boost([0.0, 0.0, 1.0], 1.0).unwrap().entries();
        for (x, y) in alpha.entries().iter().flatten().zip(b.iter().flatten()) {
            assert!((x - y).norm() < 1e-15);
        }
        let p = cone_point([0.0, 0.0, 1.0]).unwrap();
        let q = lorentz_act_point(&l, &p).unwrap();
        assert!(close(q.spatial()[2], 1f64.exp(), 1e-14));
        assert!(q.spatial()[0].abs() < 1e-15 && q.spatial()[1].abs() < 1e-15);
    }

    #[test]
    fn z_rotation_is_active_and_right_handed() {
        let psi = 0.4;
        let l = spinor_to_lorentz(&Sl2c::rotation([0.0, 0.0, 1.0], psi).unwrap()).unwrap();
        let q = lorentz_act_point(&l, &cone_point([1.0, 0.0, 0.0]).unwrap()).unwrap();
        let s = q.spatial();
        assert!(close(s[0], psi.cos(), 1e-15));
        assert!(close(s[1], psi.sin(), 1e-15));
        assert!(s[2].abs() < 1e-15);
    }

    #[test]
    fn non_unimodular_rejected() {
        let two = Complex64::new(2.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert!(matches!(
            Sl2c::new(two, zero, zero, two),
            Err(Error::InvalidSpinor { .. })
        ));
    }

    #[test]
    fn inverse_matches_group_inverse() {
        let a = Sl2c::boost([1.0, 2.0, -0.5], 0.8).unwrap()
            * Sl2c::rotation([0.3, -1.0, 0.2], 2.1).unwrap();
        let l = spinor_to_lorentz(&a).unwrap();
        let li = spinor_to_lorentz(&a.inverse()).unwrap();
        assert!((l.0 * li.0 - Matrix4::identity()).abs().max() < 1e-13);
        assert!((l.inverse().0 - li.0).abs().max() < 1e-13);
    }
}
