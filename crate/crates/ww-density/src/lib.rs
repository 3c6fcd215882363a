//! Streaming kernel density estimation with per-observation shrinking
//! bandwidths, higher-order kernel construction, heavy-tail deviation
//! calibration, and uniform confidence bands.
//!
//! # The estimator
//!
//! Observations `xi_1, xi_2, ...` arrive one at a time. Each one is folded
//! into the running estimate with its *own* bandwidth `h_k`:
//!
//! ```text
//! f_0 = 0,
//! f_k(x) = (k-1)/k * f_{k-1}(x) + 1/(k * h_k^d) * K((x - xi_k) / h_k),
//! ```
//!
//! so an update touches only the current estimate — no observation needs to
//! be stored ([`estimators::GridEstimate::update`]). Unrolling the recursion
//! gives the closed form `f_n(x) = n^{-1} sum_k h_k^{-d} K((x - xi_k)/h_k)`
//! ([`estimators::ww_batch`]), which the test suite uses as an independent
//! route to the same values. Unlike the classical fixed-window estimator
//! ([`estimators::pr_field`]), the streaming estimate depends on the order of
//! the observations: early points are smoothed more than late ones.
//!
//! The bandwidth schedule ([`bandwidth::BandwidthPlan`]) is
//! `h_k = c1 * (ln k / k)^rho` with `rho = beta / (2 beta + d)` for declared
//! smoothness `beta`; the matching deviation normalizer
//! `B_n = (n / ln n)^rho` satisfies `B_n * h_n = c1` identically.
//!
//! # Kernels
//!
//! [`kernels::build_higher_order`] multiplies a Gaussian or Epanechnikov base
//! kernel by an even polynomial chosen so that all moments below
//! `2 (floor(beta)/2 + 1)` vanish while the integral stays one — the bias
//! order a `beta`-smooth target demands. Moments are computed by adaptive
//! Gauss–Kronrod quadrature ([`quadrature`]) and the small moment system is
//! solved exactly enough that rebuilding is idempotent.
//!
//! # Tails, envelopes, and bands
//!
//! Because each observation carries its own bandwidth, normalized sup
//! deviations `B_n * sup |f_n - f|` follow a heavier-than-Gaussian law. The
//! [`gls`] module provides the machinery: the moment growth gauge
//! `psi(p) = p / ln p`, its Young–Fenchel conjugate, tail bounds driven by
//! moment growth, and the envelope profile
//! `nu(z) = exp(-z - ln z * ln ln z)` with its exact inverse.
//! [`confidence::calibrate_tail`] fits the two-parameter envelope
//! `C * nu(u / s)` over observed deviations so that it dominates their
//! empirical survival, and [`confidence::build_band`] turns a quantile of
//! that envelope into a uniform band `f_n ± u_alpha / B_n`.
//!
//! # Experiments and reproducibility
//!
//! [`simulation`] runs convergence-rate, tail-calibration, coverage, and
//! estimator-comparison experiments. Every replicate draws from its own
//! counter-derived random stream, so reports are byte-identical across runs
//! and across thread counts. The `wwdensity` binary ([`cli`]) exposes all of
//! it on the command line, and CSV/JSON persistence lives in [`io`].

// Validation guards are written `!(x > 0.0)` on purpose: unlike `x <= 0.0`,
// the negated form is also true for NaN, so one comparison rejects both the
// out-of-range and the not-a-number case.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bandwidth;
pub mod cli;
pub mod confidence;
pub mod density;
pub mod error;
pub mod estimators;
pub mod gls;
pub mod grid;
pub mod io;
pub mod kernels;
pub mod quadrature;
pub mod simulation;

pub use bandwidth::BandwidthPlan;
pub use confidence::{build_band, calibrate_tail, ConfidenceBand, CoverageCheck};
pub use density::{DensityFamily, DensitySpec};
pub use error::{Error, Result};
pub use estimators::{GridEstimate, Sample};
pub use gls::{nu, nu_inverse, young_fenchel, PsiFunction, TailModel};
pub use grid::{DomainBox, Grid};
pub use kernels::{build_higher_order, KernelBase, KernelSpec};
