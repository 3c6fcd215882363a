//! Kernel functions for density estimation.
//!
//! A kernel here is an even polynomial `q(x) = a_0 + a_1 x^2 + ...` times a
//! symmetric base profile (Gaussian or Epanechnikov), extended to `d`
//! dimensions as a product over coordinates. The polynomial is what buys
//! higher order: [`build_higher_order`] solves a small Hankel system in the
//! base's even moments so that all moments `1..=m` vanish while the kernel
//! still integrates to one. Such kernels take negative values by design;
//! nothing here clips them.
//!
//! Every kernel carries a declared Hölder pair `(delta, c)` meaning
//! `|K(x) - K(y)| <= c |x - y|^delta`; [`KernelSpec::verify_holder`] estimates
//! the smallest such `c` on a grid and checks it against the declaration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;

/// Absolute tolerance used for kernel moment integrals.
pub const MOMENT_TOL: f64 = 1e-12;

/// Base profiles available for kernel construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelBase {
    /// Standard normal density `exp(-x^2/2) / sqrt(2 pi)`, unbounded support.
    Gaussian,
    /// `0.75 (1 - x^2)` on `[-1, 1]`, zero outside.
    Epanechnikov,
}

impl KernelBase {
    /// Base profile value at `t`.
    #[must_use]
    pub fn profile(self, t: f64) -> f64 {
        match self {
            KernelBase::Gaussian => {
                // exp underflows to zero well before |t| = 40; skipping the
                // call there returns the identical 0.0 without the cost.
                if t.abs() > 40.0 {
                    0.0
                } else {
                    FRAC_1_SQRT_2PI * (-0.5 * t * t).exp()
                }
            }
            KernelBase::Epanechnikov => {
                if t.abs() <= 1.0 {
                    0.75 * (1.0 - t * t)
                } else {
                    0.0
                }
            }
        }
    }

    /// Derivative of the base profile at `t`.
    ///
    /// The Epanechnikov profile has a kink at `|t| = 1`; the one-sided inner
    /// derivative is returned there, which is the relevant bound for
    /// Lipschitz estimation.
    #[must_use]
    pub fn profile_derivative(self, t: f64) -> f64 {
        match self {
            KernelBase::Gaussian => -t * self.profile(t),
            KernelBase::Epanechnikov => {
                if t.abs() <= 1.0 {
                    -1.5 * t
                } else {
                    0.0
                }
            }
        }
    }

    /// Radius outside which the base is exactly (Epanechnikov) or numerically
    /// (Gaussian, in f64) zero.
    #[must_use]
    pub fn support_radius(self) -> f64 {
        match self {
            KernelBase::Gaussian => f64::INFINITY,
            KernelBase::Epanechnikov => 1.0,
        }
    }
}

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Result of a grid Hölder-continuity check, see [`KernelSpec::verify_holder`].
#[derive(Debug, Clone, Copy)]
pub struct HolderCheck {
    /// Exponent the check was run at (the kernel's declared `delta`).
    pub delta: f64,
    /// Largest Hölder quotient found on the grid.
    pub c_est: f64,
    /// Whether `c_est` stayed within the declared constant.
    pub pass: bool,
}

/// An even-polynomial-times-base kernel, product-extended across dimensions.
///
/// Serialized form:
/// `{"base", "poly_coeffs", "order", "support_radius", "delta", "c"}` with
/// `support_radius: null` meaning unbounded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    base: KernelBase,
    /// Coefficients of `q` in powers of `x^2`: `q(x) = sum_j poly_coeffs[j] x^(2j)`.
    poly_coeffs: Vec<f64>,
    /// First non-vanishing moment index: moments `1..order-1` are zero.
    order: u32,
    #[serde(with = "radius_serde")]
    support_radius: f64,
    /// Hölder exponent of the declared smoothness bound.
    delta: f64,
    /// Hölder constant of the declared smoothness bound.
    c: f64,
}

impl KernelSpec {
    /// The plain Gaussian kernel (order 2).
    ///
    /// Declared Lipschitz constant is the exact `sup |K'| = K_base(1)`.
    #[must_use]
    pub fn gaussian() -> Self {
        KernelSpec {
            base: KernelBase::Gaussian,
            poly_coeffs: vec![1.0],
            order: 2,
            support_radius: f64::INFINITY,
            delta: 1.0,
            c: KernelBase::Gaussian.profile(1.0),
        }
    }

    /// The Epanechnikov kernel `0.75 (1 - x^2)` on `[-1, 1]` (order 2).
    #[must_use]
    pub fn epanechnikov() -> Self {
        KernelSpec {
            base: KernelBase::Epanechnikov,
            poly_coeffs: vec![1.0],
            order: 2,
            support_radius: 1.0,
            delta: 1.0,
            c: 1.5,
        }
    }

    /// A custom even polynomial times a base profile.
    ///
    /// No moment conditions are imposed; use [`KernelSpec::validate_moments`]
    /// to check normalization when it matters.
    pub fn custom(
        base: KernelBase,
        poly_coeffs: Vec<f64>,
        order: u32,
        delta: f64,
        c: f64,
    ) -> Result<Self> {
        if poly_coeffs.is_empty() {
            return Err(Error::invalid("polynomial needs at least one coefficient"));
        }
        if poly_coeffs.iter().any(|a| !a.is_finite()) {
            return Err(Error::invalid("polynomial coefficients must be finite"));
        }
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::invalid(format!(
                "holder exponent must lie in (0, 1], got {delta}"
            )));
        }
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::invalid(format!(
                "holder constant must be finite and nonnegative, got {c}"
            )));
        }
        if order < 2 {
            return Err(Error::invalid(format!("kernel order must be >= 2, got {order}")));
        }
        Ok(KernelSpec {
            base,
            support_radius: base.support_radius(),
            poly_coeffs,
            order,
            delta,
            c,
        })
    }

    /// Parse a kernel from its JSON form.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: KernelSpec = serde_json::from_str(text)?;
        if spec.poly_coeffs.is_empty() || spec.poly_coeffs.iter().any(|a| !a.is_finite()) {
            return Err(Error::invalid("kernel JSON has an empty or non-finite polynomial"));
        }
        if !(spec.delta > 0.0 && spec.delta <= 1.0) || !(spec.c >= 0.0) {
            return Err(Error::invalid("kernel JSON has an invalid holder declaration"));
        }
        Ok(spec)
    }

    /// Serialize to the documented JSON form.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    #[must_use]
    pub fn base(&self) -> KernelBase {
        self.base
    }

    #[must_use]
    pub fn poly_coeffs(&self) -> &[f64] {
        &self.poly_coeffs
    }

    /// First non-vanishing moment index.
    #[must_use]
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Radius outside which the kernel vanishes; infinite for Gaussian base.
    #[must_use]
    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    /// Declared Hölder pair `(delta, c)`.
    #[must_use]
    pub fn holder_declaration(&self) -> (f64, f64) {
        (self.delta, self.c)
    }

    /// Polynomial factor `q(t)` evaluated by Horner in `t^2`.
    #[inline]
    fn poly(&self, t: f64) -> f64 {
        let s = t * t;
        let mut acc = 0.0;
        for &a in self.poly_coeffs.iter().rev() {
            acc = acc * s + a;
        }
        acc
    }

    /// Derivative `q'(t)` (odd polynomial, evaluated as `t * r(t^2)`).
    #[inline]
    fn poly_derivative(&self, t: f64) -> f64 {
        let s = t * t;
        let mut acc = 0.0;
        for (j, &a) in self.poly_coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * s + 2.0 * j as f64 * a;
        }
        acc * t
    }

    /// Univariate profile `K(t) = q(t) * base(t)`.
    ///
    /// Exactly zero outside the support radius.
    #[must_use]
    #[inline]
    pub fn eval1(&self, t: f64) -> f64 {
        let b = self.base.profile(t);
        if b == 0.0 {
            0.0
        } else {
            self.poly(t) * b
        }
    }

    /// Derivative of the univariate profile.
    #[must_use]
    pub fn eval1_derivative(&self, t: f64) -> f64 {
        let b = self.base.profile(t);
        if b == 0.0 {
            return 0.0;
        }
        self.poly_derivative(t) * b + self.poly(t) * self.base.profile_derivative(t)
    }

    /// Product-kernel value `K(x) = prod_j K1(x_j)`.
    ///
    /// An empty slice is rejected; a 1-vector reproduces [`KernelSpec::eval1`].
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.is_empty() {
            return Err(Error::invalid("kernel evaluation point must have dimension >= 1"));
        }
        let mut prod = 1.0;
        for &xi in x {
            prod *= self.eval1(xi);
            if prod == 0.0 {
                // Stays zero under further factors; keep the early exit on the
                // same code path for every caller so results are reproducible.
                return Ok(0.0);
            }
        }
        Ok(prod)
    }

    /// Integration radius: true support for compact bases, a scan for the
    /// radius where the Gaussian tail of `|x^p q(x) base(x)|` drops below
    /// 1e-15 otherwise.
    pub(crate) fn truncation_radius(&self, power: u32) -> f64 {
        if self.support_radius.is_finite() {
            return self.support_radius;
        }
        let coeff_sum: f64 = self.poly_coeffs.iter().map(|a| a.abs()).sum::<f64>().max(1.0);
        let degree = power as f64 + 2.0 * (self.poly_coeffs.len() as f64 - 1.0);
        let mut r: f64 = 8.0;
        loop {
            // For x >= r the integrand is dominated by g(r) e^{-r (x - r)},
            // so the tail mass is at most g(r) * 2 / r once r^2 >= 4 degree.
            let log_g = coeff_sum.ln() + degree * r.ln() - 0.5 * r * r + FRAC_1_SQRT_2PI.ln();
            if r * r >= 4.0 * degree.max(1.0) && log_g + (2.0 / r).ln() < (1e-15f64).ln() {
                return r;
            }
            r += 0.5;
            if r > 80.0 {
                return 80.0;
            }
        }
    }

    /// Univariate moment `∫ t^power K(t) dt` by adaptive quadrature.
    pub fn moment1(&self, power: u32) -> Result<f64> {
        let r = self.truncation_radius(power);
        let q = quadrature::integrate(
            |t| t.powi(power as i32) * self.eval1(t),
            -r,
            r,
            MOMENT_TOL,
        )?;
        Ok(q.value)
    }

    /// Multi-index moment `∫ x^l K(x) dx` over `R^d`.
    ///
    /// For a product kernel this factorizes exactly into per-axis univariate
    /// moments, each computed by adaptive quadrature.
    pub fn kernel_moment(&self, multi_index: &[u32]) -> Result<f64> {
        if multi_index.is_empty() {
            return Err(Error::invalid("moment multi-index must have dimension >= 1"));
        }
        let mut prod = 1.0;
        for &l in multi_index {
            prod *= self.moment1(l)?;
        }
        Ok(prod)
    }

    /// Check normalization and the declared vanishing moments by quadrature.
    ///
    /// Returns the worst offending magnitude among `|∫K - 1|` and
    /// `|∫ t^l K|, 1 <= l < order`.
    pub fn validate_moments(&self) -> Result<f64> {
        let mut worst = (self.moment1(0)? - 1.0).abs();
        for l in 1..self.order {
            worst = worst.max(self.moment1(l)?.abs());
        }
        Ok(worst)
    }

    /// Estimate the smallest Hölder constant at the declared exponent over
    /// all grid pairs within unit distance, and compare with the declaration.
    ///
    /// The grid spans the support (Gaussian tails cut where the kernel is
    /// below f64 noise). Fails if `grid_step` is not in `(0, 1]`.
    pub fn verify_holder(&self, grid_step: f64) -> Result<HolderCheck> {
        if !(grid_step > 0.0 && grid_step <= 1.0) {
            return Err(Error::invalid(format!(
                "grid step must lie in (0, 1], got {grid_step}"
            )));
        }
        let r = if self.support_radius.is_finite() {
            self.support_radius
        } else {
            9.0
        };
        let n = ((2.0 * r) / grid_step).ceil() as usize + 1;
        let xs: Vec<f64> = (0..n).map(|i| -r + i as f64 * grid_step).collect();
        let ks: Vec<f64> = xs.iter().map(|&x| self.eval1(x)).collect();
        let mut c_est: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let dist = xs[j] - xs[i];
                if dist > 1.0 {
                    break;
                }
                let quot = (ks[j] - ks[i]).abs() / dist.powf(self.delta);
                if quot > c_est {
                    c_est = quot;
                }
            }
        }
        Ok(HolderCheck {
            delta: self.delta,
            c_est,
            pass: c_est <= self.c,
        })
    }
}

/// Build a kernel whose moments `1..=floor(beta)` all vanish, from a base.
///
/// Solves the Hankel system `sum_j a_j m_{2(i+j)} = delta_{i0}` in the input
/// kernel's even moments (computed by quadrature), and multiplies the
/// resulting even polynomial onto the input. For `floor(beta) <= 1` the input
/// already satisfies the conditions (odd moments vanish by symmetry) and is
/// returned unchanged; the build is idempotent in general because an input
/// that already satisfies the conditions yields the identity polynomial.
///
/// The returned spec re-estimates its Lipschitz declaration from the new
/// profile's derivative on a dense grid (with a 1% safety margin).
pub fn build_higher_order(base_spec: &KernelSpec, beta: f64) -> Result<KernelSpec> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::invalid(format!(
            "smoothness index must be positive and finite, got {beta}"
        )));
    }
    let int_part = beta.floor() as u32;
    if int_part <= 1 {
        return Ok(base_spec.clone());
    }
    // Constraints: ∫K = 1 and even moments 2, 4, .., 2*constraints-2 vanish.
    let constraints = (int_part / 2 + 1) as usize;
    let mut moments = Vec::with_capacity(4 * constraints - 3);
    for k in 0..(2 * constraints - 1) {
        moments.push(base_spec.moment1(2 * k as u32)?);
    }
    let mut h = vec![vec![0.0; constraints]; constraints];
    for (i, row) in h.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = moments[i + j];
        }
    }
    let mut rhs = vec![0.0; constraints];
    rhs[0] = 1.0;
    let correction = solve_dense(h, rhs)?;

    // q_new(t^2) * q_old(t^2): convolution of the coefficient vectors.
    let old = &base_spec.poly_coeffs;
    let mut poly = vec![0.0; correction.len() + old.len() - 1];
    for (i, &ci) in correction.iter().enumerate() {
        for (j, &oj) in old.iter().enumerate() {
            poly[i + j] += ci * oj;
        }
    }
    // Drop trailing coefficients at the solver's noise floor so rebuilding an
    // already-corrected kernel returns the same degree.
    let coeff_scale = poly.iter().fold(0.0f64, |m, c| m.max(c.abs())).max(1.0);
    while poly.len() > 1 && poly.last().is_some_and(|c| c.abs() <= 1e-12 * coeff_scale) {
        poly.pop();
    }

    let order = 2 * (int_part / 2 + 1);
    let mut built = KernelSpec {
        base: base_spec.base,
        poly_coeffs: poly,
        order,
        support_radius: base_spec.support_radius,
        delta: 1.0,
        c: 0.0,
    };
    built.c = 1.01 * sup_abs_derivative(&built);
    Ok(built)
}

/// Dense sup of |K'| over the (effective) support, for Lipschitz declarations.
fn sup_abs_derivative(spec: &KernelSpec) -> f64 {
    let r = if spec.support_radius.is_finite() {
        spec.support_radius
    } else {
        9.0
    };
    let n = 20_001;
    let step = 2.0 * r / (n - 1) as f64;
    let mut sup: f64 = 0.0;
    for i in 0..n {
        let t = -r + i as f64 * step;
        sup = sup.max(spec.eval1_derivative(t).abs());
    }
    sup
}

/// Gaussian elimination with partial pivoting for the small Hankel systems.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|row| row.iter().map(|v| v.abs()))
        .fold(0.0f64, f64::max)
        .max(1.0);
    for col in 0..n {
        let (pivot_row, pivot) = (col..n)
            .map(|r| (r, a[r][col]))
            .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
            .expect("column range is non-empty");
        if pivot.abs() <= 1e-12 * scale {
            return Err(Error::SingularMomentSystem { pivot });
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for r in (col + 1)..n {
            let (pivot_rows, rest) = a.split_at_mut(r);
            let pivot = &pivot_rows[col];
            let row = &mut rest[0];
            let f = row[col] / pivot[col];
            if f == 0.0 {
                continue;
            }
            for (dst, src) in row.iter_mut().zip(pivot).skip(col) {
                *dst -= f * src;
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in (row + 1)..n {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

mod radius_serde {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_some(v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        let opt = Option::<f64>::deserialize(d)?;
        match opt {
            Some(v) if v > 0.0 => Ok(v),
            Some(v) => Err(serde::de::Error::custom(format!(
                "support_radius must be positive, got {v}"
            ))),
            None => Ok(f64::INFINITY),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;

    /// Closed-form even moments of the bases, kept independent of the
    /// quadrature path: Gaussian `m_{2k} = (2k-1)!!`, Epanechnikov
    /// `m_{2k} = 3 / ((2k+1)(2k+3))`.
    fn base_moment_oracle(base: KernelBase, l: u32) -> f64 {
        if l % 2 == 1 {
            return 0.0;
        }
        let k = l / 2;
        match base {
            KernelBase::Gaussian => (1..=k).map(|j| (2 * j - 1) as f64).product(),
            KernelBase::Epanechnikov => 3.0 / ((2 * k + 1) as f64 * (2 * k + 3) as f64),
        }
    }

    #[test]
    fn gaussian_at_zero() {
        let k = KernelSpec::gaussian();
        assert!((k.eval1(0.0) - 0.3989422804014327).abs() < 1e-15);
        assert!((k.eval(&[0.0]).unwrap() - 0.3989422804014327).abs() < 1e-15);
    }

    #[test]
    fn epanechnikov_values_and_support() {
        let k = KernelSpec::epanechnikov();
        assert_eq!(k.eval1(0.0), 0.75);
        assert_eq!(k.eval1(2.0), 0.0);
        assert_eq!(k.eval1(-1.0000001), 0.0);
        assert!((k.eval1(0.5) - 0.5625).abs() < 1e-15);
    }

    #[test]
    fn base_moments_match_closed_forms() {
        for (spec, base) in [
            (KernelSpec::gaussian(), KernelBase::Gaussian),
            (KernelSpec::epanechnikov(), KernelBase::Epanechnikov),
        ] {
            for l in 0..=6u32 {
                let m = spec.moment1(l).unwrap();
                let want = base_moment_oracle(base, l);
                assert!(
                    (m - want).abs() < 1e-10,
                    "{base:?} moment {l}: got {m}, want {want}"
                );
            }
        }
    }

    #[test]
    fn second_moments() {
        // Unit variance for the normal base, 1/5 for Epanechnikov.
        assert!((KernelSpec::gaussian().moment1(2).unwrap() - 1.0).abs() < 1e-10);
        assert!((KernelSpec::epanechnikov().moment1(2).unwrap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn product_moment_matches_tensor_quadrature() {
        // d = 2 cross-check of the factorized moment against a genuine
        // two-dimensional (nested) quadrature.
        let k = KernelSpec::gaussian();
        let l = [2u32, 4u32];
        let factorized = k.kernel_moment(&l).unwrap();
        let tensor = integrate(
            |x| {
                x.powi(2)
                    * k.eval1(x)
                    * integrate(|y| y.powi(4) * k.eval1(y), -12.0, 12.0, 1e-10)
                        .unwrap()
                        .value
            },
            -12.0,
            12.0,
            1e-10,
        )
        .unwrap()
        .value;
        assert!(
            (factorized - tensor).abs() < 1e-8,
            "factorized {factorized} vs tensor {tensor}"
        );
    }

    #[test]
    fn odd_moments_vanish() {
        let k = KernelSpec::gaussian();
        assert!(k.moment1(1).unwrap().abs() < 1e-12);
        assert!(k.moment1(3).unwrap().abs() < 1e-11);
        let e = KernelSpec::epanechnikov();
        assert!(e.moment1(1).unwrap().abs() < 1e-13);
    }

    #[test]
    fn higher_order_gaussian_coefficients() {
        // Moment system for the normal base and beta = 3.5:
        // [[1, 1], [1, 3]] a = [1, 0]  =>  a = (3/2, -1/2).
        let k = build_higher_order(&KernelSpec::gaussian(), 3.5).unwrap();
        let coeffs = k.poly_coeffs();
        assert_eq!(coeffs.len(), 2);
        assert!((coeffs[0] - 1.5).abs() < 1e-10, "a0 = {}", coeffs[0]);
        assert!((coeffs[1] + 0.5).abs() < 1e-10, "a1 = {}", coeffs[1]);
        assert_eq!(k.order(), 4);
        assert!(k.validate_moments().unwrap() < 1e-9);
    }

    #[test]
    fn higher_order_epanechnikov_coefficients() {
        // [[1, 1/5], [1/5, 3/35]] a = [1, 0]  =>  a = (15/8, -35/8).
        let k = build_higher_order(&KernelSpec::epanechnikov(), 2.5).unwrap();
        let coeffs = k.poly_coeffs();
        assert!((coeffs[0] - 15.0 / 8.0).abs() < 1e-9, "a0 = {}", coeffs[0]);
        assert!((coeffs[1] + 35.0 / 8.0).abs() < 1e-9, "a1 = {}", coeffs[1]);
    }

    #[test]
    fn low_beta_returns_base_unchanged() {
        for beta in [0.5, 1.0, 1.5, 1.99] {
            let k = build_higher_order(&KernelSpec::gaussian(), beta).unwrap();
            assert_eq!(k.poly_coeffs(), &[1.0]);
            assert_eq!(k.order(), 2);
        }
    }

    #[test]
    fn build_is_idempotent() {
        let once = build_higher_order(&KernelSpec::gaussian(), 3.5).unwrap();
        let twice = build_higher_order(&once, 3.5).unwrap();
        assert_eq!(once.poly_coeffs().len(), twice.poly_coeffs().len());
        for (a, b) in once.poly_coeffs().iter().zip(twice.poly_coeffs()) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn zero_kernel_is_singular_to_build_on() {
        let zero = KernelSpec::custom(KernelBase::Gaussian, vec![0.0], 2, 1.0, 0.0).unwrap();
        match build_higher_order(&zero, 3.5) {
            Err(Error::SingularMomentSystem { .. }) => {}
            other => panic!("expected singular moment system, got {other:?}"),
        }
    }

    #[test]
    fn holder_check_gaussian() {
        // sup |K'| for the normal density is attained at |x| = 1, value
        // phi(1) ~ 0.241971; grid quotients stay below it.
        let k = KernelSpec::gaussian();
        let check = k.verify_holder(0.01).unwrap();
        assert!(check.pass);
        assert!(check.c_est <= 0.241971);
        assert!(check.c_est > 0.24, "grid estimate too small: {}", check.c_est);
    }

    #[test]
    fn holder_check_epanechnikov() {
        let k = KernelSpec::epanechnikov();
        let check = k.verify_holder(0.01).unwrap();
        assert!(check.pass);
        assert!(check.c_est <= 1.5);
        assert!(check.c_est > 1.45);
    }

    #[test]
    fn holder_check_zero_kernel() {
        let zero = KernelSpec::custom(KernelBase::Gaussian, vec![0.0], 2, 1.0, 0.0).unwrap();
        let check = zero.verify_holder(0.05).unwrap();
        assert_eq!(check.c_est, 0.0);
        assert!(check.pass);
    }

    #[test]
    fn built_kernel_declares_valid_holder_pair() {
        let k = build_higher_order(&KernelSpec::gaussian(), 3.5).unwrap();
        let check = k.verify_holder(0.005).unwrap();
        assert!(check.pass, "c_est {} vs declared {}", check.c_est, k.holder_declaration().1);
    }

    #[test]
    fn holder_rejects_bad_grid_step() {
        assert!(KernelSpec::gaussian().verify_holder(0.0).is_err());
        assert!(KernelSpec::gaussian().verify_holder(1.5).is_err());
    }

    #[test]
    fn eval_rejects_empty_point() {
        assert!(KernelSpec::gaussian().eval(&[]).is_err());
        assert!(KernelSpec::gaussian().kernel_moment(&[]).is_err());
    }

    #[test]
    fn json_round_trip_preserves_infinite_support() {
        let k = build_higher_order(&KernelSpec::gaussian(), 3.5).unwrap();
        let text = k.to_json().unwrap();
        assert!(text.contains("\"support_radius\": null"), "{text}");
        let back = KernelSpec::from_json(&text).unwrap();
        assert_eq!(back.support_radius(), f64::INFINITY);
        assert_eq!(back.poly_coeffs(), k.poly_coeffs());
        assert_eq!(back.order(), 4);

        let e = KernelSpec::epanechnikov();
        let back = KernelSpec::from_json(&e.to_json().unwrap()).unwrap();
        assert_eq!(back.support_radius(), 1.0);
    }

    #[test]
    fn evenness_on_a_sweep() {
        let built = build_higher_order(&KernelSpec::gaussian(), 5.5).unwrap();
        for spec in [KernelSpec::gaussian(), KernelSpec::epanechnikov(), built] {
            for i in 0..200 {
                let t = -5.0 + 0.05 * i as f64;
                assert_eq!(spec.eval1(t), spec.eval1(-t), "kernel must be even at {t}");
            }
        }
    }

    #[test]
    fn product_eval_matches_factor_product() {
        let k = KernelSpec::gaussian();
        let x = [0.3, -1.2, 0.7];
        let direct = k.eval(&x).unwrap();
        let manual = k.eval1(0.3) * k.eval1(-1.2) * k.eval1(0.7);
        assert_eq!(direct, manual);
    }
}
