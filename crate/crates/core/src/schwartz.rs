//! Zero-mass test functions: Schwartz functions whose Fourier transforms
//! vanish at the origin together with all derivatives (`S₀`), their
//! restriction to the cone, and the transform back to position space,
//!
//! ```text
//! φ(x) = (2π)^{-3/2} ∫ φ̃(p) e^{-i p·x} dμ(p).
//! ```
//!
//! Membership in `S₀` is an infinite-order condition. [`s0_membership`]
//! checks a finite surrogate: every partial derivative of order `≤ K` at the
//! origin, estimated by tensor-product central differences on a halving
//! stencil, must be below `tol`.
//!
//! The inverse image `S₀₀` contains no function of compact support. For
//! example, a bump `χ` supported in the unit ball has an entire Fourier
//! transform; if all its derivatives vanished at `0` the Taylor series would
//! make `χ̃ ≡ 0`. So a nonzero `χ` is never in `S₀₀`, and localization in
//! position space is at best rapid decay.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::cone::ConePoint;
use crate::error::{Error, Result};
use crate::quadrature::QuadratureGrid;
use crate::wavefunction::{Envelope, MomentumWaveFunction, C4};

/// Initial stencil spacing.
pub const INITIAL_STEP: f64 = 0.1;
/// Spacing below which a non-converging estimate is reported as underflow.
pub const MIN_STEP: f64 = 1e-8;
/// Smoothness order assigned to analytic (`C^∞`) library functions.
pub const SMOOTH: u32 = 8;
/// Relative bound on the oscillatory quadrature error.
pub const OSCILLATION_TOLERANCE: f64 = 1e-4;

type Eval = dyn Fn(&[f64]) -> Vec<Complex64> + Send + Sync;

/// A test function on `ℝ³` or `ℝ⁴` with one or four components.
#[derive(Clone)]
pub struct TestFunction {
    dim: usize,
    components: usize,
    smoothness_order: u32,
    label: String,
    eval: Arc<Eval>,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .field("components", &self.components)
            .field("smoothness_order", &self.smoothness_order)
            .finish_non_exhaustive()
    }
}

impl TestFunction {
    pub fn new<F>(
        label: impl Into<String>,
        dim: usize,
        components: usize,
        smoothness_order: u32,
        f: F,
    ) -> Result<Self>
    where
        F: Fn(&[f64]) -> Vec<Complex64> + Send + Sync + 'static,
    {
        if !(dim == 3 || dim == 4) || !(components == 1 || components == 4) {
            return Err(Error::Config(format!(
                "test functions live on R^3 or R^4 with 1 or 4 components, got dim {dim}, {components} components"
            )));
        }
        Ok(TestFunction {
            dim,
            components,
            smoothness_order,
            label: label.into(),
            eval: Arc::new(f),
        })
    }

    pub fn scalar<F>(
        label: impl Into<String>,
        dim: usize,
        smoothness_order: u32,
        f: F,
    ) -> Result<Self>
    where
        F: Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    {
        Self::new(label, dim, 1, smoothness_order, move |k| vec![f(k)])
    }

    pub fn zero(dim: usize) -> Result<Self> {
        Self::scalar("zero", dim, u32::MAX, |_| Complex64::new(0.0, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn smoothness_order(&self) -> u32 {
        self.smoothness_order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, k: &[f64]) -> Vec<Complex64> {
        debug_assert_eq!(k.len(), self.dim);
        (self.eval)(k)
    }

    /// `a·self + b·other`, pointwise.
    pub fn combine(&self, a: Complex64, other: &TestFunction, b: Complex64) -> Result<Self> {
        if self.dim != other.dim || self.components != other.components {
            return Err(Error::Config(
                "combined test functions must have equal shapes".into(),
            ));
        }
        let (f, g) = (self.clone(), other.clone());
        Self::new(
            format!("({a})·{} + ({b})·{}", self.label, other.label),
            self.dim,
            self.components,
            self.smoothness_order.min(other.smoothness_order),
            move |k| {
                f.eval(k)
                    .iter()
                    .zip(g.eval(k))
                    .map(|(x, y)| a * x + b * y)
                    .collect()
            },
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    pub is_member: bool,
    /// Largest converged derivative magnitude seen.
    pub max_violation: f64,
    pub order_checked: u32,
    pub tol: f64,
    /// Number of multi-indices whose estimate converged.
    pub derivatives_checked: usize,
}

/// Multi-indices of length `dim` and total order `≤ k`, by increasing order.
fn multi_indices(dim: usize, k: u32) -> Vec<Vec<u32>> {
    fn fill(prefix: &mut Vec<u32>, dim: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == dim {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for n in (0..=remaining).rev() {
            prefix.push(n);
            fill(prefix, dim, remaining - n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for order in 0..=k {
        fill(&mut Vec::with_capacity(dim), dim, order, &mut out);
    }
    out
}

fn binomial(n: u32, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Tensor central difference `∂^β f(0)` with spacing `h`.
fn central_difference(f: &TestFunction, beta: &[u32], h: f64) -> Vec<Complex64> {
    let mut acc = vec![Complex64::new(0.0, 0.0); f.components];
    let mut j = vec![0u32; beta.len()];
    let mut k = vec![0.0; beta.len()];
    loop {
        let mut w = 1.0;
        for (i, (&n, &ji)) in beta.iter().zip(&j).enumerate() {
            k[i] = (0.5 * f64::from(n) - f64::from(ji)) * h;
            w *= if ji % 2 == 0 { 1.0 } else { -1.0 } * binomial(n, ji);
        }
        for (a, v) in acc.iter_mut().zip(f.eval(&k)) {
            *a += v * w;
        }
        // odometer over j ∈ Π [0, βᵢ]
        let mut i = 0;
        while i < beta.len() {
            if j[i] < beta[i] {
                j[i] += 1;
                break;
            }
            j[i] = 0;
            i += 1;
        }
        if i == beta.len() {
            break;
        }
    }
    let scale = h.powi(beta.iter().sum::<u32>() as i32);
    acc.into_iter().map(|a| a / scale).collect()
}

fn max_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Finite-order `S₀` check at the origin.
pub fn s0_membership(f: &TestFunction, k: u32, tol: f64) -> Result<MembershipReport> {
    if k > f.smoothness_order {
        return Err(Error::Config(format!(
            "order {k} exceeds the smoothness order {} of {}",
            f.smoothness_order, f.label
        )));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Config(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mut report = MembershipReport {
        is_member: true,
        max_violation: 0.0,
        order_checked: k,
        tol,
        derivatives_checked: 0,
    };
    for beta in multi_indices(f.dim, k) {
        let mut h = INITIAL_STEP;
        let mut prev = central_difference(f, &beta, h);
        let value = loop {
            let h2 = 0.5 * h;
            if h2 < MIN_STEP {
                return Err(Error::StencilUnderflow { min_step: h2 });
            }
            let cur = central_difference(f, &beta, h2);
            let diff: Vec<Complex64> = cur.iter().zip(&prev).map(|(a, b)| a - b).collect();
            let size = max_norm(&cur);
            if max_norm(&diff) <= 0.1 * tol.max(size) {
                break size;
            }
            prev = cur;
            h = h2;
        };
        report.derivatives_checked += 1;
        report.max_violation = report.max_violation.max(value);
        if value >= tol {
            report.is_member = false;
            return Ok(report);
        }
    }
    Ok(report)
}

/// `p⃗ ↦ f(|p⃗|, p⃗)`, a test function on `ℝ³`.
pub fn restrict_to_cone(f: &TestFunction) -> Result<TestFunction> {
    if f.dim != 4 {
        return Err(Error::Config(format!(
            "{} is not a function on R^4",
            f.label
        )));
    }
    let g = f.clone();
    TestFunction::new(
        format!("{}|cone", f.label),
        3,
        f.components,
        f.smoothness_order,
        move |p| {
            let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            g.eval(&[r, p[0], p[1], p[2]])
        },
    )
}

/// The cone restriction of a four-component test function as a state.
pub fn cone_wavefunction(f: &TestFunction) -> Result<MomentumWaveFunction> {
    if f.dim != 4 || f.components != 4 {
        return Err(Error::Config(format!(
            "{} is not a vector field on R^4",
            f.label
        )));
    }
    let g = f.clone();
    Ok(MomentumWaveFunction::new(
        format!("{}|cone", f.label),
        move |p: &ConePoint| {
            let k = p.four();
            Ok(C4::from_iterator(g.eval(&k)))
        },
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierSample {
    pub x: [f64; 4],
    pub value: [Complex64; 4],
    /// Componentwise two-grid difference plus roundoff, maximised over
    /// components.
    pub estimated_error: f64,
}

/// `(2π)^{-3/2} ∫ φ̃(p) e^{-i(x⁰r - x⃗·p⃗)} dμ`.
///
/// Returns [`Error::OscillationWarning`] when the grid-refinement difference
/// exceeds both [`OSCILLATION_TOLERANCE`] times the largest component of the
/// value and the roundoff bound.
pub fn fourier_to_position(
    phi: &MomentumWaveFunction,
    grid: &QuadratureGrid,
    x: [f64; 4],
) -> Result<FourierSample> {
    let norm = (2.0 * std::f64::consts::PI).powf(-1.5);
    let integrand = |p: &ConePoint| {
        let k = p.four();
        let phase = x[0] * k[0] - x[1] * k[1] - x[2] * k[2] - x[3] * k[3];
        let e = Complex64::from_polar(1.0, -phase);
        let v = phi.eval(p)?;
        let mag = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        Ok((v.iter().map(|z| z * e).collect::<Vec<_>>(), mag))
    };
    let (coarse, mag) = grid.integrate_vec_with_magnitude(integrand)?;
    let (fine, fine_mag) = grid.refined()?.integrate_vec_with_magnitude(integrand)?;
    let value: [Complex64; 4] = std::array::from_fn(|i| coarse[i] * norm);
    let delta = norm
        * coarse
            .iter()
            .zip(&fine)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
    let roundoff = norm * 64.0 * f64::EPSILON * mag.max(fine_mag);
    let estimated_error = delta + roundoff;
    let scale = max_norm(&value);
    // a refinement delta at roundoff level means the oscillation is resolved
    if delta > roundoff && delta > OSCILLATION_TOLERANCE * scale {
        return Err(Error::OscillationWarning {
            value,
            estimated_error,
            scale,
        });
    }
    Ok(FourierSample {
        x,
        value,
        estimated_error,
    })
}

/// `e^{-(|k|² + 1/|k|²)}` with the value `0` at the origin.
pub fn bump(k2: f64) -> f64 {
    if k2 <= 0.0 {
        0.0
    } else {
        (-(k2 + 1.0 / k2)).exp()
    }
}

fn norm2(k: &[f64]) -> f64 {
    k.iter().map(|x| x * x).sum()
}

/// Polynomial vector fields whose cone restrictions are the four polarization
/// directions of `B(p)` up to scalar factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Atom {
    /// `(0, k², -k¹, 0)`, along `w₁⁺`.
    Helical,
    /// `(0, k¹k³, k²k³, -(k¹² + k²²))`, along `w₁⁻`.
    Meridional,
    /// `(k⁰, k⃗)`, along `w_{r⁻²}`.
    Longitudinal,
    /// `(k⁰, -k⃗)`, along `w_{r²}`.
    Scalar,
}

impl Atom {
    pub const ALL: [Atom; 4] = [
        Atom::Helical,
        Atom::Meridional,
        Atom::Longitudinal,
        Atom::Scalar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Atom::Helical => "helical",
            Atom::Meridional => "meridional",
            Atom::Longitudinal => "longitudinal",
            Atom::Scalar => "scalar",
        }
    }

    fn polynomial(self, k: &[f64]) -> [f64; 4] {
        match self {
            Atom::Helical => [0.0, k[2], -k[1], 0.0],
            Atom::Meridional => [0.0, k[1] * k[3], k[2] * k[3], -(k[1] * k[1] + k[2] * k[2])],
            Atom::Longitudinal => [k[0], k[1], k[2], k[3]],
            Atom::Scalar => [k[0], -k[1], -k[2], -k[3]],
        }
    }

    /// Odd polynomials get a factor `i`, so that `φ̃(-k) = conj φ̃(k)` and the
    /// position-space field is real.
    fn reality_factor(self) -> Complex64 {
        match self {
            Atom::Meridional => Complex64::new(1.0, 0.0),
            _ => Complex64::new(0.0, 1.0),
        }
    }
}

/// `c · P(k) · e^{-(|k|² + 1/|k|²)} · e^{i a·k}` as a four-component test
/// function on `ℝ⁴`, where `a·k` is the Minkowski product.
pub fn atom(kind: Atom, shift: [f64; 4]) -> Result<TestFunction> {
    let c = kind.reality_factor();
    TestFunction::new(
        format!("{}@{shift:?}", kind.name()),
        4,
        4,
        SMOOTH,
        move |k| {
            let env = bump(norm2(k));
            let phase = shift[0] * k[0] - shift[1] * k[1] - shift[2] * k[2] - shift[3] * k[3];
            let z = c * Complex64::from_polar(env, phase);
            kind.polynomial(k).iter().map(|&x| z * x).collect()
        },
    )
}

/// The envelopes of [`crate::wavefunction`] as radial functions on `ℝ³`.
pub fn envelope_profile(env: Envelope, scale: f64) -> Result<TestFunction> {
    // e^{-r} has a kink at the origin
    let order = match env {
        Envelope::Exp | Envelope::Poly2Exp => 0,
        _ => SMOOTH,
    };
    TestFunction::scalar(format!("{}:{scale}", env.name()), 3, order, move |p| {
        Envelope::eval(env, norm2(p).sqrt() / scale).into()
    })
}

/// One entry of the membership library.
#[derive(Debug, Clone)]
pub struct LibraryEntry {
    pub name: &'static str,
    pub function: TestFunction,
    pub member: bool,
}

/// Named members and non-members of `S₀(ℝ⁴)` and `S₀(ℝ³)`.
pub fn library() -> Vec<LibraryEntry> {
    let entry = |name, function: Result<TestFunction>, member| LibraryEntry {
        name,
        function: function.expect("library functions are well formed"),
        member,
    };
    vec![
        entry(
            "bump4",
            TestFunction::scalar("bump4", 4, SMOOTH, |k| bump(norm2(k)).into()),
            true,
        ),
        entry(
            "p0_bump4",
            TestFunction::scalar("p0_bump4", 4, SMOOTH, |k| (k[0] * bump(norm2(k))).into()),
            true,
        ),
        entry("atom_helical", atom(Atom::Helical, [0.0; 4]), true),
        entry("atom_meridional", atom(Atom::Meridional, [0.0; 4]), true),
        entry(
            "atom_longitudinal",
            atom(Atom::Longitudinal, [0.0; 4]),
            true,
        ),
        entry(
            "atom_scalar_shifted",
            atom(Atom::Scalar, [0.5, 0.2, -0.3, 0.4]),
            true,
        ),
        entry(
            "gauss4",
            TestFunction::scalar("gauss4", 4, SMOOTH, |k| (-norm2(k)).exp().into()),
            false,
        ),
        entry(
            "quad_gauss4",
            TestFunction::scalar("quad_gauss4", 4, SMOOTH, |k| {
                (norm2(k) * (-norm2(k)).exp()).into()
            }),
            false,
        ),
        entry(
            "bump3",
            TestFunction::scalar("bump3", 3, SMOOTH, |p| bump(norm2(p)).into()),
            true,
        ),
        entry("exp_ir", envelope_profile(Envelope::ExpIr, 1.0), true),
        entry("gauss_ir", envelope_profile(Envelope::GaussIr, 1.0), true),
        entry(
            "poly2_gauss_ir",
            envelope_profile(Envelope::Poly2GaussIr, 1.0),
            true,
        ),
        entry("gauss", envelope_profile(Envelope::Gauss, 1.0), false),
        entry(
            "quartic_gauss3",
            TestFunction::scalar("quartic_gauss3", 3, SMOOTH, |p| {
                (p[0] * p[0] * p[1] * p[1] * (-norm2(p)).exp()).into()
            }),
            false,
        ),
    ]
}

/// Library lookup by name; also accepts `envelope[:scale]` profiles.
pub fn library_function(name: &str) -> Result<TestFunction> {
    if let Some(e) = library().into_iter().find(|e| e.name == name) {
        return Ok(e.function);
    }
    let profile: crate::wavefunction::Profile = name
        .parse()
        .map_err(|_| Error::Config(format!("unknown test function {name:?}")))?;
    envelope_profile(profile.envelope, profile.scale)
}
