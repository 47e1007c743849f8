//! Exact truncated deformation quantization.
//!
//! Observables are formal power series in λ whose coefficients are
//! polynomials times Gaussian weights on flat charts. On top of that the
//! crate provides star products, positive functionals and their GNS
//! representations, operator calculus with commutant probes, formal modular
//! theory for KMS functionals, and λ-adic and strong operator topologies.
//!
//! Everything is generic over the coefficient field; [`Cq`] gives exact
//! results and [`Cf`] gives a floating point shadow of the same code.

pub mod coeffs;
pub mod error;
pub mod gns;
pub mod modular;
pub mod oper;
pub mod scalar;
pub mod series;
pub mod star;
pub mod sample;
pub mod text;
pub mod topo;
pub mod verify;

pub use coeffs::{Chart, ChartKind, Density, GaussPoly, Mono, Observable, Poly};
pub use error::{Error, Result};
pub use scalar::{Cf, Cq, Rational, Scalar, Value};
pub use series::{LambdaSeries, Order};

/// Observable with exact complex rational coefficients.
pub type ExactObservable = Observable<Cq>;
/// Observable with complex double coefficients.
pub type FloatObservable = Observable<Cf>;
/// λ-series of exact scalars.
pub type ExactSeries = LambdaSeries<Cq>;
