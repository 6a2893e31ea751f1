//! Numerical realisation of the Krein-space single-photon formalism.
//!
//! The single-photon space consists of four-component functions on the
//! forward light cone. Its Hilbert product carries the pointwise weight
//! `B(p)/(2r)`, and its indefinite Krein product is `(·, J'·)` with the
//! fundamental symmetry `J'(p) = J B(p)`. The Lorentz group acts by the local
//! four-vector law `U(α)φ(p) = Λ(α⁻¹)φ(Λ(α)p)`, which preserves the Krein
//! product but not the Hilbert norm. On the transversal subspace the Krein
//! product is positive and the induced action is the unitary helicity ±1
//! representation.
//!
//! Modules:
//!
//! * [`cone`]: cone points, SL(2,C) and the spinor map;
//! * [`quadrature`]: the invariant-measure grid;
//! * [`krein`]: `B(p)`, its eigensystem and the fundamental symmetry;
//! * [`wavefunction`]: evaluable momentum-space states and both products;
//! * [`representation`]: translations, Lorentz action and its conjugate;
//! * [`transversal`]: the physical subspace and the Wigner rotation;
//! * [`schwartz`]: the zero-mass test-function class and Fourier transform;
//! * [`fock`]: truncated Fock space, Gupta–Bleuler operator and the field;
//! * [`harness`]: verification suites and reports;
//! * [`sampling`]: seeded random points, group elements and states.

pub mod cone;
pub mod error;
pub mod fock;
pub mod harness;
pub mod krein;
pub mod quadrature;
pub mod representation;
pub mod sampling;
pub mod schwartz;
pub mod transversal;
pub mod wavefunction;

pub use cone::{
    cone_point, lorentz_act_point, measure_weight, spinor_to_lorentz, ConePoint, LorentzMatrix,
    Sl2c,
};
pub use error::{Error, Result};
pub use krein::{
    b_eigensystem, b_matrix, fundamental_symmetry, j_bar, EigenSystem, FundamentalSymmetry,
    WeightMatrix,
};
pub use quadrature::{build_grid, GridConfig, QuadratureGrid};
pub use wavefunction::{hilbert_inner, krein_inner, InnerProductReport, MomentumWaveFunction, C4};

pub use num_complex::Complex64;
