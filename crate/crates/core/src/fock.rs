//! Truncated second quantization over a finite set of single-photon modes.
//!
//! Modes are orthonormal for the Hilbert product on a quadrature grid, and
//! their span is closed under `J'`, so `J'` restricts to an involutive
//! Hermitian matrix `J_ij = (eᵢ, J' eⱼ)` (the `j_matrix`). The Fock sector is
//! spanned by occupation vectors of total count `≤ N`.
//!
//! Conventions: for a one-particle vector with mode coefficients `c`,
//! `a⁺(c) = Σ cᵢ a⁺ᵢ` is linear and `a(c) = a⁺(c)†` is antilinear. The
//! Gupta–Bleuler operator is `η = Γ(J)`, so that `η a⁺(c) η = a⁺(Jc)`, and the
//! field smeared with a test function `φ` is
//!
//! ```text
//! A(φ) = a(c_φ) + η a(c_φ)⁺ η,    c_φ = coefficients of φ̃ restricted to the cone.
//! ```
//!
//! Below the truncation ceiling `[A(φ), A(ψ)] = (c_φ, J c_ψ) - (c_ψ, J c_φ)`,
//! the smeared Pauli–Jordan commutator `2i Im ∫ φ̃† J ψ̃ dμ`.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::QuadratureGrid;
use crate::schwartz::{cone_wavefunction, TestFunction};
use crate::wavefunction::{apply_b, apply_j_prime, dot_c4, j_form, MomentumWaveFunction, C4};

/// Largest accepted condition number of the input Gram matrix.
pub const MAX_CONDITION: f64 = 1e8;
/// Relative norm below which a Gram–Schmidt candidate is treated as dependent.
pub const RANK_TOLERANCE: f64 = 1e-6;
/// Deviation of `η²` from the identity that is reported as an error.
pub const INVOLUTION_LIMIT: f64 = 1e-6;
/// Default bound on the relative span residual of a field's test function.
pub const DEFAULT_SPAN_BOUND: f64 = 1e-3;

type Samples = Vec<C4>;

fn sample(f: &MomentumWaveFunction, grid: &QuadratureGrid) -> Result<Samples> {
    grid.nodes().par_iter().map(|p| f.eval(p)).collect()
}

fn weighted_sum<F>(grid: &QuadratureGrid, term: F) -> Complex64
where
    F: Fn(usize) -> Complex64,
{
    grid.weights()
        .iter()
        .enumerate()
        .map(|(i, &w)| term(i) * w)
        .sum()
}

/// Discrete Hilbert product `Σ wᵢ u†B v` given `B v` samples.
fn hilbert(grid: &QuadratureGrid, u: &Samples, bv: &Samples) -> Complex64 {
    weighted_sum(grid, |i| dot_c4(&u[i], &bv[i]))
}

fn krein(grid: &QuadratureGrid, u: &Samples, v: &Samples) -> Complex64 {
    weighted_sum(grid, |i| j_form(&u[i], &v[i]))
}

fn apply_b_all(grid: &QuadratureGrid, u: &Samples) -> Samples {
    grid.nodes()
        .iter()
        .zip(u)
        .map(|(p, v)| apply_b(p, v))
        .collect()
}

fn gram(grid: &QuadratureGrid, u: &[Samples], bu: &[Samples]) -> DMatrix<Complex64> {
    let n = u.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let values: Vec<Complex64> = pairs
        .par_iter()
        .map(|&(i, j)| hilbert(grid, &u[i], &bu[j]))
        .collect();
    let mut g = DMatrix::zeros(n, n);
    for (&(i, j), &v) in pairs.iter().zip(&values) {
        g[(i, j)] = v;
        g[(j, i)] = v.conj();
    }
    g
}

fn combine(coeffs: &DVector<Complex64>, samples: &[Samples]) -> Samples {
    let len = samples[0].len();
    (0..len)
        .map(|n| {
            samples
                .iter()
                .zip(coeffs.iter())
                .fold(C4::zeros(), |acc, (s, c)| acc + s[n] * *c)
        })
        .collect()
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// An orthonormal, `J'`-closed set of modes sampled on a grid.
#[derive(Debug, Clone)]
pub struct ModeBasis {
    modes: Vec<MomentumWaveFunction>,
    samples: Vec<Samples>,
    grid_id: String,
    /// `max |(eᵢ, eⱼ) - δᵢⱼ|`.
    pub gram_residual: f64,
    /// `Jᵢⱼ = (eᵢ, J' eⱼ)`.
    pub j_matrix: DMatrix<Complex64>,
    /// Condition number of the Gram matrix of the input states.
    pub input_condition: f64,
}

/// Closes `states` under `J'`, then orthonormalizes on `grid`.
pub fn build_mode_basis(
    states: &[MomentumWaveFunction],
    grid: &QuadratureGrid,
) -> Result<ModeBasis> {
    if states.is_empty() {
        return Err(Error::Config("mode basis needs at least one state".into()));
    }
    let mut candidates: Vec<MomentumWaveFunction> = states.to_vec();
    candidates.extend(states.iter().map(|s| s.apply_fundamental_symmetry()));
    let raw: Vec<Samples> = candidates
        .iter()
        .map(|f| sample(f, grid))
        .collect::<Result<_>>()?;
    let b_raw: Vec<Samples> = raw.iter().map(|u| apply_b_all(grid, u)).collect();
    let g = gram(grid, &raw, &b_raw);

    let n_in = states.len();
    let input = g.view((0, 0), (n_in, n_in)).into_owned();
    let ev = input.symmetric_eigenvalues();
    let (lo, hi) = ev.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    });
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if condition > MAX_CONDITION {
        return Err(Error::DegenerateInput { condition });
    }

    // modified Gram–Schmidt in coefficient space
    let n = candidates.len();
    let mut coeffs: Vec<DVector<Complex64>> = Vec::new();
    for j in 0..n {
        let mut v = DVector::from_fn(n, |i, _| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        for _ in 0..2 {
            for e in &coeffs {
                let overlap = (e.adjoint() * &g * &v)[(0, 0)];
                v -= e * overlap;
            }
        }
        let norm2 = (v.adjoint() * &g * &v)[(0, 0)].re;
        if norm2 > (RANK_TOLERANCE * RANK_TOLERANCE) * g[(j, j)].re {
            coeffs.push(v / Complex64::new(norm2.sqrt(), 0.0));
        }
    }

    // second pass on the actual samples: e ← e L^{-†} with G = L L†
    let first: Vec<Samples> = coeffs.iter().map(|c| combine(c, &raw)).collect();
    let b_first: Vec<Samples> = coeffs.iter().map(|c| combine(c, &b_raw)).collect();
    let g1 = gram(grid, &first, &b_first);
    let l = g1
        .cholesky()
        .ok_or(Error::DegenerateInput {
            condition: f64::INFINITY,
        })?
        .l();
    let m = coeffs.len();
    let l_inv_adj = l.adjoint().try_inverse().ok_or(Error::DegenerateInput {
        condition: f64::INFINITY,
    })?;
    let mut total = DMatrix::<Complex64>::zeros(n, m);
    for (k, c) in coeffs.iter().enumerate() {
        total.set_column(k, c);
    }
    let total = total * l_inv_adj;

    let columns: Vec<DVector<Complex64>> = (0..m).map(|k| total.column(k).into_owned()).collect();
    let samples: Vec<Samples> = columns.iter().map(|c| combine(c, &raw)).collect();
    let b_samples: Vec<Samples> = columns.iter().map(|c| combine(c, &b_raw)).collect();
    let modes: Vec<MomentumWaveFunction> = columns
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let terms: Vec<(Complex64, MomentumWaveFunction)> =
                c.iter().copied().zip(candidates.iter().cloned()).collect();
            let f = MomentumWaveFunction::linear_combination(&terms);
            MomentumWaveFunction::new(format!("mode {k}"), move |p| f.eval(p))
        })
        .collect();

    let gm = gram(grid, &samples, &b_samples);
    let gram_residual = max_abs(&(gm - DMatrix::identity(m, m)));
    let j_matrix = DMatrix::from_fn(m, m, |i, j| krein(grid, &samples[i], &samples[j]));
    Ok(ModeBasis {
        modes,
        samples,
        grid_id: grid.id(),
        gram_residual,
        j_matrix,
        input_condition: condition,
    })
}

impl ModeBasis {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[MomentumWaveFunction] {
        &self.modes
    }

    pub fn grid_id(&self) -> &str {
        &self.grid_id
    }

    /// `‖J² - I‖∞`.
    pub fn involution_residual(&self) -> f64 {
        let m = self.len();
        max_abs(&(&self.j_matrix * &self.j_matrix - DMatrix::identity(m, m)))
    }

    /// `‖J - J†‖∞`.
    pub fn hermiticity_residual(&self) -> f64 {
        max_abs(&(&self.j_matrix - self.j_matrix.adjoint()))
    }

    fn check_grid(&self, grid: &QuadratureGrid) -> Result<()> {
        if grid.id() != self.grid_id || grid.len() != self.samples[0].len() {
            return Err(Error::Config(format!(
                "mode basis was built on grid {}, not {}",
                self.grid_id,
                grid.id()
            )));
        }
        Ok(())
    }

    /// Coefficients `cᵢ = (eᵢ, φ)` and the relative residual
    /// `‖φ - Σ cᵢ eᵢ‖ / ‖φ‖` in the Hilbert norm.
    pub fn expand(
        &self,
        phi: &MomentumWaveFunction,
        grid: &QuadratureGrid,
    ) -> Result<(DVector<Complex64>, f64)> {
        self.check_grid(grid)?;
        let u = sample(phi, grid)?;
        let bu = apply_b_all(grid, &u);
        let c = DVector::from_iterator(
            self.len(),
            self.samples.iter().map(|e| hilbert(grid, e, &bu)),
        );
        let norm2 = hilbert(grid, &u, &bu).re;
        let captured: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        let residual2 = (norm2 - captured).max(0.0);
        // direct evaluation when the Pythagorean difference is lost to roundoff
        let residual2 = if residual2 < 1e-6 * norm2 {
            let proj = combine(&c, &self.samples);
            let diff: Samples = u.iter().zip(&proj).map(|(a, b)| a - b).collect();
            let bdiff = apply_b_all(grid, &diff);
            hilbert(grid, &diff, &bdiff).re.max(0.0)
        } else {
            residual2
        };
        let rel = if norm2 > 0.0 {
            (residual2 / norm2).sqrt()
        } else {
            0.0
        };
        Ok((c, rel))
    }

    /// Krein product of two samples on the basis grid, `Σ wᵢ u†J v`.
    pub fn krein_direct(
        &self,
        phi: &MomentumWaveFunction,
        psi: &MomentumWaveFunction,
        grid: &QuadratureGrid,
    ) -> Result<Complex64> {
        self.check_grid(grid)?;
        Ok(krein(grid, &sample(phi, grid)?, &sample(psi, grid)?))
    }

    /// `J` applied to a coefficient vector, checked against the pointwise
    /// `J'` on samples: returns `‖J c - coefficients(J' Σ cᵢ eᵢ)‖∞`.
    pub fn j_consistency(&self, c: &DVector<Complex64>, grid: &QuadratureGrid) -> Result<f64> {
        self.check_grid(grid)?;
        let u = combine(c, &self.samples);
        let ju: Samples = grid
            .nodes()
            .iter()
            .zip(&u)
            .map(|(p, v)| apply_j_prime(p, v))
            .collect();
        let bju = apply_b_all(grid, &ju);
        let direct = DVector::from_iterator(
            self.len(),
            self.samples.iter().map(|e| hilbert(grid, e, &bju)),
        );
        Ok((&self.j_matrix * c - direct)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }
}

/// A dense operator on a truncated sector.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    pub matrix: DMatrix<Complex64>,
    pub label: String,
}

impl FockOperator {
    pub fn new(label: impl Into<String>, matrix: DMatrix<Complex64>) -> Self {
        FockOperator {
            matrix,
            label: label.into(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::new(format!("({})†", self.label), self.matrix.adjoint())
    }

    pub fn compose(&self, other: &FockOperator) -> Self {
        Self::new(
            format!("{}·{}", self.label, other.label),
            &self.matrix * &other.matrix,
        )
    }

    pub fn commutator(&self, other: &FockOperator) -> Self {
        Self::new(
            format!("[{}, {}]", self.label, other.label),
            &self.matrix * &other.matrix - &other.matrix * &self.matrix,
        )
    }

    /// `η X η`.
    pub fn sandwich(&self, eta: &FockOperator) -> Self {
        Self::new(
            format!("η{}η", self.label),
            &eta.matrix * &self.matrix * &eta.matrix,
        )
    }

    pub fn is_finite(&self) -> bool {
        self.matrix
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Occupation-number basis over a [`ModeBasis`] with total count `≤ cutoff`.
#[derive(Debug, Clone)]
pub struct FockSector {
    pub mode_basis: ModeBasis,
    pub cutoff: usize,
    states: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
}

fn occupations(m: usize, n: usize) -> Vec<Vec<u8>> {
    fn fill(prefix: &mut Vec<u8>, m: usize, remaining: usize, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == m {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for k in (0..=remaining).rev() {
            prefix.push(k as u8);
            fill(prefix, m, remaining - k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for total in 0..=n {
        fill(&mut Vec::with_capacity(m), m, total, &mut out);
    }
    out
}

impl FockSector {
    pub fn new(mode_basis: ModeBasis, cutoff: usize) -> Result<Self> {
        if cutoff == 0 || cutoff > u8::MAX as usize {
            return Err(Error::Config(format!(
                "particle cutoff must be in 1..=255, got {cutoff}"
            )));
        }
        let states = occupations(mode_basis.len(), cutoff);
        let index = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(FockSector {
            mode_basis,
            cutoff,
            states,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn modes(&self) -> usize {
        self.mode_basis.len()
    }

    pub fn occupation(&self, k: usize) -> &[u8] {
        &self.states[k]
    }

    pub fn total(&self, k: usize) -> usize {
        self.states[k].iter().map(|&n| n as usize).sum()
    }

    pub fn vacuum_index(&self) -> usize {
        0
    }

    pub fn vacuum(&self) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.dim());
        v[self.vacuum_index()] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn identity(&self) -> FockOperator {
        FockOperator::new("I", DMatrix::identity(self.dim(), self.dim()))
    }

    fn check_mode(&self, i: usize) -> Result<()> {
        if i >= self.modes() {
            return Err(Error::Config(format!(
                "mode index {i} out of range 0..{}",
                self.modes()
            )));
        }
        Ok(())
    }

    /// `a⁺ᵢ`, truncated at the cutoff.
    pub fn creation(&self, i: usize) -> Result<FockOperator> {
        self.check_mode(i)?;
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for (col, occ) in self.states.iter().enumerate() {
            let mut up = occ.clone();
            up[i] += 1;
            if let Some(&row) = self.index.get(&up) {
                m[(row, col)] = Complex64::new(f64::from(up[i]).sqrt(), 0.0);
            }
        }
        Ok(FockOperator::new(format!("a+({i})"), m))
    }

    /// `aᵢ`, the adjoint of [`Self::creation`].
    pub fn annihilation(&self, i: usize) -> Result<FockOperator> {
        Ok(self.creation(i)?.adjoint().relabel(format!("a({i})")))
    }

    pub fn number(&self, i: usize) -> Result<FockOperator> {
        self.check_mode(i)?;
        let diag = DVector::from_iterator(
            self.dim(),
            self.states
                .iter()
                .map(|s| Complex64::new(f64::from(s[i]), 0.0)),
        );
        Ok(FockOperator::new(
            format!("N({i})"),
            DMatrix::from_diagonal(&diag),
        ))
    }

    /// `a⁺(c) = Σ cᵢ a⁺ᵢ`.
    pub fn creation_of(&self, c: &DVector<Complex64>) -> Result<FockOperator> {
        if c.len() != self.modes() {
            return Err(Error::Config(format!(
                "expected {} coefficients, got {}",
                self.modes(),
                c.len()
            )));
        }
        let d = self.dim();
        let mut m = DMatrix::zeros(d, d);
        for (i, ci) in c.iter().enumerate() {
            if ci.norm() != 0.0 {
                m += self.creation(i)?.matrix * *ci;
            }
        }
        Ok(FockOperator::new("a+(c)", m))
    }

    /// `a(c) = a⁺(c)†`, antilinear in `c`.
    pub fn annihilation_of(&self, c: &DVector<Complex64>) -> Result<FockOperator> {
        Ok(self.creation_of(c)?.adjoint().relabel("a(c)"))
    }

    /// Indices of basis states with total occupation `≤ cutoff - 1`.
    pub fn below_ceiling(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&k| self.total(k) < self.cutoff)
            .collect()
    }
}

impl FockOperator {
    fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }
}

/// `η = Γ(J)`: `η|n⟩ = Πⱼ (b⁺ⱼ)^{nⱼ}/√(nⱼ!) |0⟩` with `b⁺ⱼ = Σᵢ Jᵢⱼ a⁺ᵢ`.
pub fn gupta_bleuler_eta(sector: &FockSector) -> Result<FockOperator> {
    let j = &sector.mode_basis.j_matrix;
    let m = sector.modes();
    let lifted: Vec<DMatrix<Complex64>> = (0..m)
        .map(|k| Ok(sector.creation_of(&j.column(k).into_owned())?.matrix))
        .collect::<Result<_>>()?;
    let d = sector.dim();
    let mut eta = DMatrix::zeros(d, d);
    for col in 0..d {
        let mut v = sector.vacuum();
        let mut norm = 1.0;
        for (k, &n) in sector.occupation(col).iter().enumerate() {
            for t in 1..=n {
                v = &lifted[k] * v;
                norm *= f64::from(t);
            }
        }
        eta.set_column(col, &(v / Complex64::new(norm.sqrt(), 0.0)));
    }
    let eta = FockOperator::new("η", eta);
    let deviation = max_abs(&(&eta.matrix * &eta.matrix - DMatrix::identity(d, d)));
    if deviation > INVOLUTION_LIMIT || !eta.is_finite() {
        return Err(Error::InvolutionBroken { deviation });
    }
    Ok(eta)
}

/// `A(φ)` together with the expansion used to build it.
#[derive(Debug, Clone)]
pub struct FieldOperator {
    pub operator: FockOperator,
    pub coefficients: DVector<Complex64>,
    pub span_residual: f64,
}

/// `A(φ) = a(c) + η a(c)⁺ η` with `c` the mode coefficients of `φ̃|cone`.
pub fn field_operator(
    phi: &TestFunction,
    sector: &FockSector,
    eta: &FockOperator,
    grid: &QuadratureGrid,
    span_bound: f64,
) -> Result<FieldOperator> {
    let restricted = cone_wavefunction(phi)?;
    let (c, residual) = sector.mode_basis.expand(&restricted, grid)?;
    if residual > span_bound {
        return Err(Error::SpanResidualTooLarge {
            residual,
            bound: span_bound,
        });
    }
    field_from_coefficients(sector, eta, c, residual, phi.label())
}

pub fn field_from_coefficients(
    sector: &FockSector,
    eta: &FockOperator,
    c: DVector<Complex64>,
    span_residual: f64,
    label: &str,
) -> Result<FieldOperator> {
    let a = sector.annihilation_of(&c)?;
    let a_plus = sector.creation_of(&c)?;
    let matrix = a.matrix + &eta.matrix * a_plus.matrix * &eta.matrix;
    Ok(FieldOperator {
        operator: FockOperator::new(format!("A({label})"), matrix),
        coefficients: c,
        span_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommutatorReport {
    /// Deviation of `[A(φ), A(ψ)]` from `cnumber · I` on the columns with
    /// occupation below the cutoff.
    pub commutator_matrix_residual: f64,
    /// `⟨0|[A(φ), A(ψ)]|0⟩`.
    pub cnumber: Complex64,
    /// `(c_φ, J c_ψ) - (c_ψ, J c_φ)` from the mode coefficients.
    pub oracle_value: Complex64,
    /// `2i Im Σ wᵢ φ̃† J ψ̃` on the grid, bypassing the mode expansion.
    pub direct_value: Complex64,
    pub span_residuals: [f64; 2],
}

pub fn commutator_check(
    phi: &TestFunction,
    psi: &TestFunction,
    sector: &FockSector,
    eta: &FockOperator,
    grid: &QuadratureGrid,
    span_bound: f64,
) -> Result<CommutatorReport> {
    let a = field_operator(phi, sector, eta, grid, span_bound)?;
    let b = field_operator(psi, sector, eta, grid, span_bound)?;
    let comm = a.operator.commutator(&b.operator).matrix;
    let vac = sector.vacuum_index();
    let cnumber = comm[(vac, vac)];
    let mut residual = 0.0f64;
    for col in sector.below_ceiling() {
        for row in 0..sector.dim() {
            let expected = if row == col {
                cnumber
            } else {
                Complex64::new(0.0, 0.0)
            };
            residual = residual.max((comm[(row, col)] - expected).norm());
        }
    }
    let j = &sector.mode_basis.j_matrix;
    let cj = |x: &DVector<Complex64>, y: &DVector<Complex64>| (x.adjoint() * j * y)[(0, 0)];
    let oracle_value = cj(&a.coefficients, &b.coefficients) - cj(&b.coefficients, &a.coefficients);
    let k =
        sector
            .mode_basis
            .krein_direct(&cone_wavefunction(phi)?, &cone_wavefunction(psi)?, grid)?;
    Ok(CommutatorReport {
        commutator_matrix_residual: residual,
        cnumber,
        oracle_value,
        direct_value: Complex64::new(0.0, 2.0 * k.im),
        span_residuals: [a.span_residual, b.span_residual],
    })
}

/// Shift used for the second copy of each atom in [`default_mode_states`].
pub const ATOM_SHIFT: [f64; 4] = [0.6, 0.5, -0.4, 0.3];

/// The four atoms of [`crate::schwartz::Atom`], unshifted and translated by
/// [`ATOM_SHIFT`].
pub fn default_test_functions() -> Result<Vec<TestFunction>> {
    use crate::schwartz::{atom, Atom};
    let mut out = Vec::new();
    for shift in [[0.0; 4], ATOM_SHIFT] {
        for kind in Atom::ALL {
            out.push(atom(kind, shift)?);
        }
    }
    Ok(out)
}

/// Cone restrictions of [`default_test_functions`].
pub fn default_mode_states() -> Result<Vec<MomentumWaveFunction>> {
    default_test_functions()?
        .iter()
        .map(cone_wavefunction)
        .collect()
}
