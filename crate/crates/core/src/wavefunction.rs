//! Momentum-space single-photon states and the Hilbert and Krein products.
//!
//! States are evaluable closures rather than grid samples, so transformed
//! states can be evaluated exactly at Lorentz-moved nodes.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::cone::ConePoint;
use crate::error::{Error, Result};
use crate::krein::{self, b_entries, eigensystem_unchecked};
use crate::quadrature::QuadratureGrid;

pub type C4 = Vector4<Complex64>;

/// Roundoff allowance per unit of summed term magnitude, in units of ε.
const ROUNDOFF_UNITS: f64 = 64.0;

pub(crate) fn zero4() -> C4 {
    C4::from_element(Complex64::new(0.0, 0.0))
}

/// Real 4×4 matrix times complex vector.
pub fn real_mat_vec(m: &Matrix4<f64>, v: &C4) -> C4 {
    C4::from_fn(|i, _| v[0] * m[(i, 0)] + v[1] * m[(i, 1)] + v[2] * m[(i, 2)] + v[3] * m[(i, 3)])
}

#[cfg(test)]
pub(crate) fn real_to_c4(v: &Vector4<f64>) -> C4 {
    v.map(|x| Complex64::new(x, 0.0))
}

pub(crate) fn norm_c4(v: &C4) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `B(p) v`, computed from the closed form without the range check.
pub(crate) fn apply_b(p: &ConePoint, v: &C4) -> C4 {
    let b = b_entries::<f64>(p.spatial());
    C4::from_fn(|i, _| v[0] * b[i][0] + v[1] * b[i][1] + v[2] * b[i][2] + v[3] * b[i][3])
}

/// `J'(p) v = J B(p) v`, without the range check.
pub(crate) fn apply_j_prime(p: &ConePoint, v: &C4) -> C4 {
    let mut out = apply_b(p, v);
    out[0] = -out[0];
    out
}

/// `Σ_μ conj(u_μ) J_μμ v_μ` with `J = diag(-1, 1, 1, 1)`.
pub(crate) fn j_form(u: &C4, v: &C4) -> Complex64 {
    -u[0].conj() * v[0] + u[1].conj() * v[1] + u[2].conj() * v[2] + u[3].conj() * v[3]
}

pub(crate) fn dot_c4(u: &C4, v: &C4) -> Complex64 {
    u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
}

fn check_range(p: &ConePoint) -> Result<()> {
    let r = p.r();
    if !(krein::MIN_RADIUS..=krein::MAX_RADIUS).contains(&r) {
        return Err(Error::Range { r });
    }
    Ok(())
}

type VectorEval = dyn Fn(&ConePoint) -> Result<C4> + Send + Sync;
type ScalarEval = dyn Fn(&ConePoint) -> Result<Complex64> + Send + Sync;

/// An evaluable map from cone points to `ℂ⁴`.
#[derive(Clone)]
pub struct MomentumWaveFunction {
    eval: Arc<VectorEval>,
    description: String,
}

impl fmt::Debug for MomentumWaveFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MomentumWaveFunction")
            .field("description", &self.description)
            .finish_non_exhaustive()
    }
}

impl MomentumWaveFunction {
    pub fn new<F>(description: impl Into<String>, f: F) -> Self
    where
        F: Fn(&ConePoint) -> Result<C4> + Send + Sync + 'static,
    {
        MomentumWaveFunction {
            eval: Arc::new(f),
            description: description.into(),
        }
    }

    pub fn zero() -> Self {
        Self::new("0", |_| Ok(zero4()))
    }

    /// `pol(p) g(p)` for one of the four eigenvector fields of `B`.
    pub fn polarized(pol: Polarization, profile: ScalarFunction) -> Self {
        let description = format!("{}*{}", pol, profile.description());
        Self::new(description, move |p| {
            let g = profile.eval(p)?;
            Ok(pol.vector(p).map(|x| g * x))
        })
    }

    #[inline]
    pub fn eval(&self, p: &ConePoint) -> Result<C4> {
        (self.eval)(p)
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let inner = self.clone();
        Self::new(format!("({c})·{}", self.description), move |p| {
            Ok(inner.eval(p)? * c)
        })
    }

    pub fn plus(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(
            format!("{} + {}", self.description, other.description),
            move |p| Ok(a.eval(p)? + b.eval(p)?),
        )
    }

    pub fn minus(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(
            format!("{} - {}", self.description, other.description),
            move |p| Ok(a.eval(p)? - b.eval(p)?),
        )
    }

    /// `Σ cₖ φₖ`.
    pub fn linear_combination(terms: &[(Complex64, MomentumWaveFunction)]) -> Self {
        let terms: Vec<(Complex64, MomentumWaveFunction)> = terms.to_vec();
        let description = terms
            .iter()
            .map(|(c, f)| format!("({c})·{}", f.description))
            .collect::<Vec<_>>()
            .join(" + ");
        Self::new(description, move |p| {
            let mut acc = zero4();
            for (c, f) in &terms {
                acc += f.eval(p)? * *c;
            }
            Ok(acc)
        })
    }

    /// Pointwise multiplication by `e^{i θ(p)}`.
    pub fn with_phase<F>(&self, label: &str, theta: F) -> Self
    where
        F: Fn(&ConePoint) -> f64 + Send + Sync + 'static,
    {
        let inner = self.clone();
        Self::new(format!("e^(i {label})·{}", self.description), move |p| {
            let (s, c) = theta(p).sin_cos();
            Ok(inner.eval(p)? * Complex64::new(c, s))
        })
    }

    /// Left multiplication by a constant real matrix.
    pub fn mat_left(&self, m: Matrix4<f64>) -> Self {
        let inner = self.clone();
        Self::new(format!("M·{}", self.description), move |p| {
            Ok(real_mat_vec(&m, &inner.eval(p)?))
        })
    }

    /// Pointwise application of the fundamental symmetry `J'(p)`.
    pub fn apply_fundamental_symmetry(&self) -> Self {
        let inner = self.clone();
        Self::new(format!("J'·{}", self.description), move |p| {
            check_range(p)?;
            Ok(apply_j_prime(p, &inner.eval(p)?))
        })
    }
}

/// An evaluable scalar map on the cone.
#[derive(Clone)]
pub struct ScalarFunction {
    eval: Arc<ScalarEval>,
    description: String,
}

impl fmt::Debug for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarFunction")
            .field("description", &self.description)
            .finish_non_exhaustive()
    }
}

impl ScalarFunction {
    pub fn new<F>(description: impl Into<String>, f: F) -> Self
    where
        F: Fn(&ConePoint) -> Result<Complex64> + Send + Sync + 'static,
    {
        ScalarFunction {
            eval: Arc::new(f),
            description: description.into(),
        }
    }

    pub fn zero() -> Self {
        Self::new("0", |_| Ok(Complex64::new(0.0, 0.0)))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(format!("{c}"), move |_| Ok(c))
    }

    pub fn from_profile(profile: Profile) -> Self {
        Self::new(profile.to_string(), move |p| Ok(profile.eval(p.r()).into()))
    }

    /// `profile(r) · (a₀ + a⃗·p̂)`.
    pub fn with_angular(profile: Profile, angular: [f64; 4]) -> Self {
        Self::new(format!("{profile}·(ang {angular:?})"), move |p| {
            let n = p.unit();
            let ang = angular[0] + angular[1] * n[0] + angular[2] * n[1] + angular[3] * n[2];
            Ok((profile.eval(p.r()) * ang).into())
        })
    }

    #[inline]
    pub fn eval(&self, p: &ConePoint) -> Result<Complex64> {
        (self.eval)(p)
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let inner = self.clone();
        Self::new(format!("({c})·{}", self.description), move |p| {
            Ok(inner.eval(p)? * c)
        })
    }

    pub fn plus(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(
            format!("{} + {}", self.description, other.description),
            move |p| Ok(a.eval(p)? + b.eval(p)?),
        )
    }

    pub fn times(&self, other: &Self) -> Self {
        let (a, b) = (self.clone(), other.clone());
        Self::new(
            format!("({})·({})", self.description, other.description),
            move |p| Ok(a.eval(p)? * b.eval(p)?),
        )
    }
}

/// The four eigenvector fields of `B(p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarization {
    /// `w₁⁺`, eigenvalue 1.
    TPlus,
    /// `w₁⁻`, eigenvalue 1.
    TMinus,
    /// `w_{r⁻²}`, proportional to the four-momentum.
    GaugeLow,
    /// `w_{r²}`.
    GaugeHigh,
}

impl Polarization {
    pub const ALL: [Polarization; 4] = [
        Polarization::TPlus,
        Polarization::TMinus,
        Polarization::GaugeLow,
        Polarization::GaugeHigh,
    ];

    pub fn index(self) -> usize {
        match self {
            Polarization::TPlus => 0,
            Polarization::TMinus => 1,
            Polarization::GaugeLow => 2,
            Polarization::GaugeHigh => 3,
        }
    }

    pub fn vector(self, p: &ConePoint) -> Vector4<f64> {
        eigensystem_unchecked(p).pairs[self.index()].vector
    }

    pub fn is_transversal(self) -> bool {
        matches!(self, Polarization::TPlus | Polarization::TMinus)
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarization::TPlus => "tplus",
            Polarization::TMinus => "tminus",
            Polarization::GaugeLow => "gauge_low",
            Polarization::GaugeHigh => "gauge_high",
        })
    }
}

impl FromStr for Polarization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "tplus" | "w1+" => Polarization::TPlus,
            "tminus" | "w1-" => Polarization::TMinus,
            "gauge_low" | "w_r-2" => Polarization::GaugeLow,
            "gauge_high" | "w_r2" => Polarization::GaugeHigh,
            other => return Err(Error::Config(format!("unknown polarization '{other}'"))),
        })
    }
}

/// Radial envelopes. With `x = r / scale`:
///
/// | name            | envelope                 | `∫ g dμ`                 |
/// |-----------------|--------------------------|--------------------------|
/// | `exp`           | `e^{-x}`                 | `2π s²`                  |
/// | `gauss`         | `e^{-x²}`                | `π s²`                   |
/// | `poly2_exp`     | `x² e^{-x}`              | `12π s²`                 |
/// | `exp_ir`        | `e^{-x-1/x}`             | `4π s² K₂(2)`            |
/// | `gauss_ir`      | `e^{-x²-1/x²}`           | `2π s² K₁(2)`            |
/// | `poly2_gauss_ir`| `x² e^{-x²-1/x²}`        | `2π s² K₂(2)`            |
///
/// Only the `_ir` envelopes vanish to all orders at the apex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Envelope {
    Exp,
    Gauss,
    Poly2Exp,
    ExpIr,
    GaussIr,
    Poly2GaussIr,
}

impl Envelope {
    pub const ALL: [Envelope; 6] = [
        Envelope::Exp,
        Envelope::Gauss,
        Envelope::Poly2Exp,
        Envelope::ExpIr,
        Envelope::GaussIr,
        Envelope::Poly2GaussIr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Envelope::Exp => "exp",
            Envelope::Gauss => "gauss",
            Envelope::Poly2Exp => "poly2_exp",
            Envelope::ExpIr => "exp_ir",
            Envelope::GaussIr => "gauss_ir",
            Envelope::Poly2GaussIr => "poly2_gauss_ir",
        }
    }

    /// Whether the envelope, as a function of `p⃗ ∈ ℝ³`, vanishes with all
    /// derivatives at the origin.
    pub fn vanishes_to_all_orders(self) -> bool {
        matches!(
            self,
            Envelope::ExpIr | Envelope::GaussIr | Envelope::Poly2GaussIr
        )
    }

    #[inline]
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Envelope::Exp => (-x).exp(),
            Envelope::Gauss => (-x * x).exp(),
            Envelope::Poly2Exp => x * x * (-x).exp(),
            Envelope::ExpIr => {
                if x <= 0.0 {
                    0.0
                } else {
                    (-x - 1.0 / x).exp()
                }
            }
            Envelope::GaussIr => {
                if x <= 0.0 {
                    0.0
                } else {
                    (-x * x - 1.0 / (x * x)).exp()
                }
            }
            Envelope::Poly2GaussIr => {
                if x <= 0.0 {
                    0.0
                } else {
                    x * x * (-x * x - 1.0 / (x * x)).exp()
                }
            }
        }
    }

    /// `∫ g(r/s) dμ` in closed form where one is known.
    pub fn measure_integral(self, scale: f64) -> Option<f64> {
        let s2 = scale * scale;
        match self {
            Envelope::Exp => Some(2.0 * PI * s2),
            Envelope::Gauss => Some(PI * s2),
            Envelope::Poly2Exp => Some(12.0 * PI * s2),
            // ∫₀^∞ u^{ν-1} e^{-u-1/u} du = 2 K_ν(2)
            Envelope::ExpIr => Some(4.0 * PI * s2 * BESSEL_K2_AT_2),
            Envelope::GaussIr => Some(2.0 * PI * s2 * BESSEL_K1_AT_2),
            Envelope::Poly2GaussIr => Some(2.0 * PI * s2 * BESSEL_K2_AT_2),
        }
    }
}

/// `K₁(2)`.
const BESSEL_K1_AT_2: f64 = 0.139_865_881_816_522_43;
/// `K₂(2)`.
const BESSEL_K2_AT_2: f64 = 0.253_759_754_566_055_9;

impl FromStr for Envelope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Envelope::ALL
            .into_iter()
            .find(|e| e.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown profile '{s}'")))
    }
}

/// A named envelope with a radial scale, e.g. `gauss_ir` or `exp_ir:2.5`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Profile {
    pub envelope: Envelope,
    pub scale: f64,
}

impl Profile {
    pub fn new(envelope: Envelope, scale: f64) -> Self {
        Profile { envelope, scale }
    }

    #[inline]
    pub fn eval(&self, r: f64) -> f64 {
        self.envelope.eval(r / self.scale)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale == 1.0 {
            f.write_str(self.envelope.name())
        } else {
            write!(f, "{}:{}", self.envelope.name(), self.scale)
        }
    }
}

impl FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (name, scale) = match s.split_once(':') {
            Some((n, sc)) => (
                n,
                sc.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Config(format!("bad profile scale '{sc}': {e}")))?,
            ),
            None => (s, 1.0),
        };
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Config(format!(
                "profile scale must be positive, got {scale}"
            )));
        }
        Ok(Profile::new(name.parse()?, scale))
    }
}

/// A state written as `pol*profile [+ pol*profile ...]`, for example
/// `tplus*gauss_ir + gauge_low*exp_ir:2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateSpec {
    pub terms: Vec<(Polarization, Profile)>,
}

impl StateSpec {
    pub fn build(&self) -> MomentumWaveFunction {
        let terms: Vec<(Complex64, MomentumWaveFunction)> = self
            .terms
            .iter()
            .map(|&(pol, prof)| {
                (
                    Complex64::new(1.0, 0.0),
                    MomentumWaveFunction::polarized(pol, ScalarFunction::from_profile(prof)),
                )
            })
            .collect();
        MomentumWaveFunction::linear_combination(&terms)
    }
}

impl FromStr for StateSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let terms = s
            .split('+')
            .map(|term| {
                let (pol, prof) = term.split_once('*').ok_or_else(|| {
                    Error::Config(format!(
                        "state term '{term}' is not of the form pol*profile"
                    ))
                })?;
                Ok((pol.parse()?, prof.trim().parse()?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(StateSpec { terms })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InnerProductReport {
    pub value: Complex64,
    pub grid_id: String,
    /// `|value(grid) - value(refined grid)|` plus a floating-point roundoff
    /// bound proportional to the summed magnitude of the integrand.
    pub estimated_error: f64,
}

/// Evaluates a sesquilinear density on the grid and on its refinement.
pub(crate) fn two_grid<F>(grid: &QuadratureGrid, density: F) -> Result<InnerProductReport>
where
    F: Fn(&ConePoint) -> Result<(Complex64, f64)> + Sync,
{
    let (coarse, mag) = grid.integrate_with_magnitude(&density)?;
    let fine_grid = grid.refined()?;
    let (fine, fine_mag) = fine_grid.integrate_with_magnitude(&density)?;
    let roundoff = ROUNDOFF_UNITS * f64::EPSILON * mag.max(fine_mag);
    Ok(InnerProductReport {
        value: coarse,
        grid_id: grid.id(),
        estimated_error: (coarse - fine).norm() + roundoff,
    })
}

/// `∫ φ†(p) B(p) ψ(p) dμ`.
pub fn hilbert_inner(
    phi: &MomentumWaveFunction,
    psi: &MomentumWaveFunction,
    grid: &QuadratureGrid,
) -> Result<InnerProductReport> {
    two_grid(grid, |p| hilbert_density(phi, psi, p))
}

pub(crate) fn hilbert_density(
    phi: &MomentumWaveFunction,
    psi: &MomentumWaveFunction,
    p: &ConePoint,
) -> Result<(Complex64, f64)> {
    check_range(p)?;
    let u = phi.eval(p)?;
    let bv = apply_b(p, &psi.eval(p)?);
    Ok((dot_c4(&u, &bv), norm_c4(&u) * norm_c4(&bv)))
}

/// `∫ φ†(p) B(p) J B(p) ψ(p) dμ`, evaluated as `∫ φ† J ψ dμ` since `BJB = J`.
/// The reduced form avoids cancelling entries of size `r²` and `r⁻²`.
pub fn krein_inner(
    phi: &MomentumWaveFunction,
    psi: &MomentumWaveFunction,
    grid: &QuadratureGrid,
) -> Result<InnerProductReport> {
    two_grid(grid, |p| krein_density(phi, psi, p))
}

pub(crate) fn krein_density(
    phi: &MomentumWaveFunction,
    psi: &MomentumWaveFunction,
    p: &ConePoint,
) -> Result<(Complex64, f64)> {
    check_range(p)?;
    let u = phi.eval(p)?;
    let v = psi.eval(p)?;
    Ok((j_form(&u, &v), norm_c4(&u) * norm_c4(&v)))
}

/// A state evaluated once on a grid and on its refinement. Products between
/// sampled states reuse the stored values, which makes large batches of
/// inner products against a fixed set of states cheap.
#[derive(Debug, Clone)]
pub struct SampledState {
    grid_id: String,
    coarse: Vec<C4>,
    fine: Vec<C4>,
}

impl SampledState {
    pub fn new(phi: &MomentumWaveFunction, grid: &QuadratureGrid) -> Result<Self> {
        let fine_grid = grid.refined()?;
        Ok(SampledState {
            grid_id: grid.id(),
            coarse: sample_nodes(phi, grid)?,
            fine: sample_nodes(phi, &fine_grid)?,
        })
    }

    pub fn grid_id(&self) -> &str {
        &self.grid_id
    }

    /// Pointwise linear combination `a·self + b·other`.
    pub fn combine(
        &self,
        a: Complex64,
        other: &SampledState,
        b: Complex64,
    ) -> Result<SampledState> {
        self.same_grid(other)?;
        let mix = |u: &[C4], v: &[C4]| u.iter().zip(v).map(|(x, y)| x * a + y * b).collect();
        Ok(SampledState {
            grid_id: self.grid_id.clone(),
            coarse: mix(&self.coarse, &other.coarse),
            fine: mix(&self.fine, &other.fine),
        })
    }

    /// Krein product with the same two-grid error estimate as [`krein_inner`].
    pub fn krein(&self, other: &SampledState, grid: &QuadratureGrid) -> Result<InnerProductReport> {
        self.pair(other, grid, |_, u, v| {
            (j_form(u, v), norm_c4(u) * norm_c4(v))
        })
    }

    /// Hilbert product with the same two-grid error estimate as [`hilbert_inner`].
    pub fn hilbert(
        &self,
        other: &SampledState,
        grid: &QuadratureGrid,
    ) -> Result<InnerProductReport> {
        self.pair(other, grid, |p, u, v| {
            let bv = apply_b(p, v);
            (dot_c4(u, &bv), norm_c4(u) * norm_c4(&bv))
        })
    }

    fn same_grid(&self, other: &SampledState) -> Result<()> {
        if self.grid_id != other.grid_id {
            return Err(Error::Config(format!(
                "sampled states live on different grids: {} vs {}",
                self.grid_id, other.grid_id
            )));
        }
        Ok(())
    }

    fn pair<F>(
        &self,
        other: &SampledState,
        grid: &QuadratureGrid,
        density: F,
    ) -> Result<InnerProductReport>
    where
        F: Fn(&ConePoint, &C4, &C4) -> (Complex64, f64) + Sync,
    {
        self.same_grid(other)?;
        if grid.id() != self.grid_id {
            return Err(Error::Config(format!(
                "states were sampled on {}, not {}",
                self.grid_id,
                grid.id()
            )));
        }
        let fine_grid = grid.refined()?;
        let (coarse, mag) = grid.integrate_indexed_with_magnitude(|i, p| {
            Ok(density(p, &self.coarse[i], &other.coarse[i]))
        })?;
        let (fine, fine_mag) = fine_grid.integrate_indexed_with_magnitude(|i, p| {
            Ok(density(p, &self.fine[i], &other.fine[i]))
        })?;
        let roundoff = ROUNDOFF_UNITS * f64::EPSILON * mag.max(fine_mag);
        Ok(InnerProductReport {
            value: coarse,
            grid_id: self.grid_id.clone(),
            estimated_error: (coarse - fine).norm() + roundoff,
        })
    }
}

fn sample_nodes(phi: &MomentumWaveFunction, grid: &QuadratureGrid) -> Result<Vec<C4>> {
    grid.nodes()
        .par_iter()
        .map(|p| {
            check_range(p)?;
            phi.eval(p)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KreinClass {
    Positive,
    Null,
    Negative,
    IndefiniteMixture,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KreinClassification {
    pub class: KreinClass,
    pub value: f64,
    /// `∫ max(ρ, 0) dμ` for the pointwise Krein density `ρ`.
    pub positive_mass: f64,
    /// `∫ max(-ρ, 0) dμ`.
    pub negative_mass: f64,
}

/// Classifies the Krein norm of `φ` from its value and the sign pattern of
/// the pointwise density: a state whose density takes both signs with mass
/// above `tol` is an indefinite mixture regardless of the total.
pub fn krein_classify(
    phi: &MomentumWaveFunction,
    grid: &QuadratureGrid,
    tol: f64,
) -> Result<KreinClassification> {
    let (masses, _) = grid.integrate_with_magnitude(|p| {
        let (d, _) = krein_density(phi, phi, p)?;
        Ok((Complex64::new(d.re.max(0.0), (-d.re).max(0.0)), 0.0))
    })?;
    let (pos, neg) = (masses.re, masses.im);
    let value = pos - neg;
    let class = if pos > tol && neg > tol {
        KreinClass::IndefiniteMixture
    } else if value > tol {
        KreinClass::Positive
    } else if value < -tol {
        KreinClass::Negative
    } else {
        KreinClass::Null
    };
    Ok(KreinClassification {
        class,
        value,
        positive_mass: pos,
        negative_mass: neg,
    })
}
