//! Product quadrature for `∫ f dμ` over the forward cone, `dμ = d³p / (2r)`.
//!
//! Radial nodes come from a Gauss–Legendre rule in `u ∈ [0, 1]` mapped by
//! `r = ir + (uv - ir) u³`, which clusters nodes towards the infrared end
//! where test functions of the zero-mass class vary fastest. The angular part
//! is Gauss–Legendre in `cos θ` times the trapezoid rule in `φ` with
//! `2 · angular_order` points. Every weight already contains the Jacobian
//! `r²` and the measure density `1/(2r)`.

use std::fmt::Write as _;
use std::num::NonZeroUsize;
use std::sync::{Arc, OnceLock};

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cone::ConePoint;
use crate::error::{Error, Result};

/// Nodes per parallel work item. The partition is fixed so that reductions
/// are bit-reproducible.
const CHUNK: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub angular_order: usize,
    pub radial_order: usize,
    pub ir_cutoff: f64,
    pub uv_cutoff: f64,
    /// Absolute tolerance of the `∫ e^{-r} dμ = 2π` construction self-test.
    pub self_test_tol: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            angular_order: 32,
            radial_order: 64,
            ir_cutoff: 1e-5,
            uv_cutoff: 50.0,
            self_test_tol: 1e-8,
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        if self.angular_order < 2 || self.radial_order < 2 {
            return Err(Error::Config(format!(
                "quadrature orders must be >= 2 (angular {}, radial {})",
                self.angular_order, self.radial_order
            )));
        }
        if !(self.ir_cutoff > 0.0 && self.ir_cutoff < self.uv_cutoff && self.uv_cutoff.is_finite())
        {
            return Err(Error::Config(format!(
                "cutoffs must satisfy 0 < ir < uv (ir {}, uv {})",
                self.ir_cutoff, self.uv_cutoff
            )));
        }
        if self.self_test_tol.is_nan() || self.self_test_tol <= 0.0 {
            return Err(Error::Config("self_test_tol must be positive".into()));
        }
        Ok(())
    }

    /// Finer configuration used for error estimates: radial order doubled,
    /// angular order raised by half. Angular errors of smooth integrands fall
    /// off geometrically, so the smaller angular step already resolves them.
    pub fn refined(&self) -> GridConfig {
        GridConfig {
            angular_order: (3 * self.angular_order).div_ceil(2),
            radial_order: 2 * self.radial_order,
            ..*self
        }
    }

    pub fn id(&self) -> String {
        format!(
            "a{}-r{}-ir{:e}-uv{:e}",
            self.angular_order, self.radial_order, self.ir_cutoff, self.uv_cutoff
        )
    }
}

#[derive(Debug)]
pub struct QuadratureGrid {
    config: GridConfig,
    nodes: Vec<ConePoint>,
    weights: Vec<f64>,
    refined: OnceLock<Arc<QuadratureGrid>>,
}

/// Builds and self-tests a grid.
pub fn build_grid(config: GridConfig) -> Result<QuadratureGrid> {
    QuadratureGrid::new(config)
}

fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(n).expect("order checked"));
    rule.as_node_weight_pairs().to_vec()
}

impl QuadratureGrid {
    pub fn new(config: GridConfig) -> Result<Self> {
        config.validate()?;
        let (ir, uv) = (config.ir_cutoff, config.uv_cutoff);

        let radial: Vec<(f64, f64)> = gauss_legendre(config.radial_order)
            .into_iter()
            .map(|(x, w)| {
                let u = 0.5 * (x + 1.0);
                let r = ir + (uv - ir) * u * u * u;
                let dr = 0.5 * w * 3.0 * (uv - ir) * u * u;
                // d³p/(2r) = (r/2) dr dΩ
                (r, dr * 0.5 * r)
            })
            .collect();
        let polar = gauss_legendre(config.angular_order);
        let n_phi = 2 * config.angular_order;
        let dphi = std::f64::consts::TAU / n_phi as f64;

        let mut nodes = Vec::with_capacity(radial.len() * polar.len() * n_phi);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for &(r, wr) in &radial {
            for &(c, wc) in &polar {
                for k in 0..n_phi {
                    // half-step offset keeps nodes off the φ = 0 meridian
                    let phi = (k as f64 + 0.5) * dphi;
                    nodes.push(ConePoint::from_spherical(r, c, phi)?);
                    weights.push(wr * wc * dphi);
                }
            }
        }

        let grid = QuadratureGrid {
            config,
            nodes,
            weights,
            refined: OnceLock::new(),
        };
        let probe = grid.integrate(|p| Ok(Complex64::new((-p.r()).exp(), 0.0)))?;
        let err = (probe.re - std::f64::consts::TAU).abs();
        if err > config.self_test_tol {
            return Err(Error::Config(format!(
                "grid {} fails the e^(-r) self-test: error {:.3e} > {:.3e}",
                config.id(),
                err,
                config.self_test_tol
            )));
        }
        Ok(grid)
    }

    pub fn config(&self) -> &GridConfig {
        &self.config
    }

    pub fn id(&self) -> String {
        self.config.id()
    }

    pub fn nodes(&self) -> &[ConePoint] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Companion grid from [`GridConfig::refined`], built on first use.
    pub fn refined(&self) -> Result<Arc<QuadratureGrid>> {
        if let Some(g) = self.refined.get() {
            return Ok(g.clone());
        }
        let mut cfg = self.config.refined();
        // the finer grid is only used as a comparison point
        cfg.self_test_tol = cfg.self_test_tol.max(self.config.self_test_tol);
        let g = Arc::new(QuadratureGrid::new(cfg)?);
        Ok(self.refined.get_or_init(|| g).clone())
    }

    /// `Σᵢ wᵢ f(pᵢ)`.
    pub fn integrate<F>(&self, f: F) -> Result<Complex64>
    where
        F: Fn(&ConePoint) -> Result<Complex64> + Sync,
    {
        self.reduce(|_, p| {
            let v = f(p)?;
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::Numerical { at: p.spatial() });
            }
            Ok(v)
        })
    }

    /// Weighted sum of `(value, magnitude)` pairs, where `magnitude` is a
    /// nonnegative bound on the size of the terms that produced `value`.
    /// Callers use the summed magnitude to bound floating-point roundoff.
    pub fn integrate_with_magnitude<F>(&self, f: F) -> Result<(Complex64, f64)>
    where
        F: Fn(&ConePoint) -> Result<(Complex64, f64)> + Sync,
    {
        self.integrate_indexed_with_magnitude(|_, p| f(p))
    }

    /// As [`Self::integrate_with_magnitude`], with the node index passed
    /// alongside the node so callers can look up presampled values.
    pub fn integrate_indexed_with_magnitude<F>(&self, f: F) -> Result<(Complex64, f64)>
    where
        F: Fn(usize, &ConePoint) -> Result<(Complex64, f64)> + Sync,
    {
        let acc = self.reduce(|i, p| {
            let (v, m) = f(i, p)?;
            if !(v.re.is_finite() && v.im.is_finite() && m.is_finite()) {
                return Err(Error::Numerical { at: p.spatial() });
            }
            Ok(Pair(v, m))
        })?;
        Ok((acc.0, acc.1))
    }

    /// Componentwise version of [`Self::integrate_with_magnitude`] for
    /// vector-valued integrands of a common length.
    pub fn integrate_vec_with_magnitude<F>(&self, f: F) -> Result<(Vec<Complex64>, f64)>
    where
        F: Fn(&ConePoint) -> Result<(Vec<Complex64>, f64)> + Sync,
    {
        let acc = self.reduce(|_, p| {
            let (v, m) = f(p)?;
            if !(m.is_finite() && v.iter().all(|z| z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::Numerical { at: p.spatial() });
            }
            Ok(VecPair(v, m))
        })?;
        Ok((acc.0, acc.1))
    }

    fn reduce<T, F>(&self, f: F) -> Result<T>
    where
        T: Weighted + Send,
        F: Fn(usize, &ConePoint) -> Result<T> + Sync,
    {
        let partials: Vec<T> = self
            .nodes
            .par_chunks(CHUNK)
            .zip(self.weights.par_chunks(CHUNK))
            .enumerate()
            .map(|(k, (ps, ws))| {
                let mut acc = T::zero();
                for (j, (p, &w)) in ps.iter().zip(ws).enumerate() {
                    acc = acc.add(f(k * CHUNK + j, p)?.scale(w));
                }
                Ok(acc)
            })
            .collect::<Result<Vec<T>>>()?;
        Ok(pairwise_sum(partials))
    }

    /// CSV dump with one row `x,y,z,weight` per node.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,z,weight\n");
        for (p, w) in self.nodes.iter().zip(&self.weights) {
            let s = p.spatial();
            let _ = writeln!(out, "{:.17e},{:.17e},{:.17e},{:.17e}", s[0], s[1], s[2], w);
        }
        out
    }
}

trait Weighted: Sized {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn scale(self, w: f64) -> Self;
}

impl Weighted for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, w: f64) -> Self {
        self * w
    }
}

struct Pair(Complex64, f64);

impl Weighted for Pair {
    fn zero() -> Self {
        Pair(Complex64::new(0.0, 0.0), 0.0)
    }
    fn add(self, other: Self) -> Self {
        Pair(self.0 + other.0, self.1 + other.1)
    }
    fn scale(self, w: f64) -> Self {
        Pair(self.0 * w, self.1 * w)
    }
}

struct VecPair(Vec<Complex64>, f64);

impl Weighted for VecPair {
    fn zero() -> Self {
        VecPair(Vec::new(), 0.0)
    }
    fn add(mut self, mut other: Self) -> Self {
        if self.0.len() < other.0.len() {
            std::mem::swap(&mut self.0, &mut other.0);
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
        VecPair(self.0, self.1 + other.1)
    }
    fn scale(mut self, w: f64) -> Self {
        for a in &mut self.0 {
            *a *= w;
        }
        VecPair(self.0, self.1 * w)
    }
}

fn pairwise_sum<T: Weighted>(mut items: Vec<T>) -> T {
    if items.is_empty() {
        return T::zero();
    }
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut it = items.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => a.add(b),
                None => a,
            });
        }
        items = next;
    }
    items.pop().expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn default_grid() -> QuadratureGrid {
        build_grid(GridConfig::default()).unwrap()
    }

    #[test]
    fn exponential_moments() {
        let g = default_grid();
        let i0 = g.integrate(|p| Ok((-p.r()).exp().into())).unwrap();
        assert!((i0.re - 2.0 * PI).abs() < 1e-8, "{}", i0.re - 2.0 * PI);
        let i1 = g
            .integrate(|p| Ok((p.r() * (-p.r()).exp()).into()))
            .unwrap();
        assert!((i1.re - 4.0 * PI).abs() < 1e-8, "{}", i1.re - 4.0 * PI);
        let z = g.integrate(|_| Ok(Complex64::new(0.0, 0.0))).unwrap();
        assert_eq!(z, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn radial_order_32_meets_self_test() {
        let cfg = GridConfig {
            angular_order: 4,
            radial_order: 32,
            ..GridConfig::default()
        };
        build_grid(cfg).unwrap();
    }

    #[test]
    fn rejects_bad_config() {
        let bad = [
            GridConfig {
                angular_order: 1,
                ..GridConfig::default()
            },
            GridConfig {
                radial_order: 0,
                ..GridConfig::default()
            },
            GridConfig {
                ir_cutoff: 0.0,
                ..GridConfig::default()
            },
            GridConfig {
                ir_cutoff: 60.0,
                ..GridConfig::default()
            },
        ];
        for cfg in bad {
            assert!(matches!(build_grid(cfg), Err(Error::Config(_))), "{cfg:?}");
        }
    }

    #[test]
    fn weights_and_radii_respect_cutoffs() {
        let g = build_grid(GridConfig {
            angular_order: 6,
            radial_order: 40,
            ..GridConfig::default()
        })
        .unwrap();
        let c = g.config();
        assert!(g.weights().iter().all(|&w| w > 0.0));
        assert!(g
            .nodes()
            .iter()
            .all(|p| p.r() >= c.ir_cutoff && p.r() <= c.uv_cutoff));
    }

    #[test]
    fn non_finite_integrand_reports_node() {
        let g = build_grid(GridConfig {
            angular_order: 4,
            radial_order: 40,
            ..GridConfig::default()
        })
        .unwrap();
        let err = g.integrate(|p| {
            Ok(if p.r() > 1.0 {
                f64::NAN.into()
            } else {
                1.0.into()
            })
        });
        assert!(matches!(err, Err(Error::Numerical { .. })));
    }

    #[test]
    fn reduction_is_reproducible() {
        let g = default_grid();
        let f =
            |p: &ConePoint| Ok(Complex64::new(p.spatial()[0].sin(), p.r().cos()) * (-p.r()).exp());
        let a = g.integrate(f).unwrap();
        let b = g.integrate(f).unwrap();
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }

    #[test]
    fn convergence_improves_with_radial_order() {
        let err = |n: usize| {
            let g = build_grid(GridConfig {
                angular_order: 2,
                radial_order: n,
                self_test_tol: 1.0,
                ..GridConfig::default()
            })
            .unwrap();
            let i = g.integrate(|p| Ok((-p.r()).exp().into())).unwrap();
            (i.re - 2.0 * PI).abs()
        };
        let (e8, e16, e32) = (err(8), err(16), err(32));
        assert!(e16 <= 0.5 * e8, "{e8} {e16}");
        assert!(e32 <= 0.5 * e16, "{e16} {e32}");
    }

    #[test]
    fn csv_has_one_row_per_node() {
        let g = build_grid(GridConfig {
            angular_order: 2,
            radial_order: 40,
            ..GridConfig::default()
        })
        .unwrap();
        let csv = g.to_csv();
        assert_eq!(csv.lines().count(), g.len() + 1);
        assert!(csv.starts_with("x,y,z,weight"));
    }
}
