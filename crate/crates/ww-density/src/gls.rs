//! Moment-growth norms, their Young–Fenchel conjugates, and the reference
//! tail profile used to calibrate deviation envelopes.
//!
//! The machinery ties together three pieces:
//!
//! * a growth gauge `psi(p)` that normalizes the `p`-th moment curve of a
//!   random variable — the canonical choice here is `p / ln p`, whose gauge
//!   norm of a bounded variable stays finite while still separating heavy
//!   tails;
//! * the conjugate `h*(t) = sup_p [ p t - p ln psi(p) ]`, which converts a
//!   bound on the gauge norm into an explicit tail bound
//!   `P(|X| > t) <= exp(-h*(t/kappa))`;
//! * the closed tail profile `nu(z) = exp(-z - ln z * ln ln z)` on `z >= e`,
//!   a strictly decreasing exact curve that the conjugate of the `p / ln p`
//!   gauge follows, used as the parametric shape for envelope fits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The canonical moment-growth gauge `p / ln p`, defined for `p > 1`.
///
/// Minimized at `p = e` where it equals `e`.
pub fn log_ratio(p: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::invalid(format!(
            "moment gauge p/ln p needs p > 1, got {p}"
        )));
    }
    Ok(p / p.ln())
}

/// A moment-growth gauge `psi(p)` with an evaluation domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum PsiFunction {
    /// `p / ln p` on `[2, ∞)`.
    LogRatio,
    /// A constant gauge (degenerate but useful as a boundary case).
    Constant { value: f64 },
    /// Piecewise-linear interpolation of `(p, psi)` knots, domain = knot span.
    Tabulated { knots: Vec<(f64, f64)> },
}

impl PsiFunction {
    fn validate(&self) -> Result<()> {
        match self {
            PsiFunction::LogRatio => Ok(()),
            PsiFunction::Constant { value } => {
                if !(*value > 0.0) || !value.is_finite() {
                    return Err(Error::invalid(format!(
                        "constant gauge must be positive and finite, got {value}"
                    )));
                }
                Ok(())
            }
            PsiFunction::Tabulated { knots } => {
                if knots.len() < 2 {
                    return Err(Error::invalid("tabulated gauge needs at least 2 knots"));
                }
                for w in knots.windows(2) {
                    if !(w[1].0 > w[0].0) {
                        return Err(Error::invalid(
                            "tabulated gauge knots must have strictly increasing p",
                        ));
                    }
                }
                if knots
                    .iter()
                    .any(|(p, v)| !p.is_finite() || !(*v > 0.0) || !v.is_finite())
                {
                    return Err(Error::invalid(
                        "tabulated gauge needs finite p and positive finite psi values",
                    ));
                }
                Ok(())
            }
        }
    }

    /// Domain `[lo, hi]` over which the gauge may be evaluated.
    #[must_use]
    pub fn domain(&self) -> (f64, f64) {
        match self {
            PsiFunction::LogRatio | PsiFunction::Constant { .. } => (2.0, f64::INFINITY),
            PsiFunction::Tabulated { knots } => match (knots.first(), knots.last()) {
                (Some(a), Some(b)) => (a.0, b.0),
                _ => (f64::NAN, f64::NAN),
            },
        }
    }

    /// Gauge value at `p` (must lie in the domain).
    pub fn eval(&self, p: f64) -> Result<f64> {
        self.validate()?;
        let (lo, hi) = self.domain();
        if !(p >= lo) || !(p <= hi) {
            return Err(Error::invalid(format!(
                "gauge argument {p} outside domain [{lo}, {hi}]"
            )));
        }
        match self {
            PsiFunction::LogRatio => log_ratio(p),
            PsiFunction::Constant { value } => Ok(*value),
            PsiFunction::Tabulated { knots } => {
                let j = knots.partition_point(|(q, _)| *q <= p).min(knots.len() - 1);
                let (p0, v0) = knots[j - 1];
                let (p1, v1) = knots[j];
                let f = (p - p0) / (p1 - p0);
                Ok(v0 * (1.0 - f) + v1 * f)
            }
        }
    }
}

/// Gauge norm of a moment curve: `sup_j M(p_j) / psi(p_j)` over a probe grid.
///
/// `moment_curve(p)` must return the `p`-th root of the `p`-th absolute
/// moment; every probe point must lie in the gauge's domain.
pub fn gls_norm<F: Fn(f64) -> f64>(
    moment_curve: F,
    psi: &PsiFunction,
    p_grid: &[f64],
) -> Result<f64> {
    if p_grid.is_empty() {
        return Err(Error::EmptySample("gauge norm needs at least one probe p"));
    }
    let mut sup: f64 = 0.0;
    for &p in p_grid {
        let m = moment_curve(p);
        if !(m >= 0.0) || !m.is_finite() {
            return Err(Error::invalid(format!(
                "moment curve must be finite and nonnegative, got {m} at p = {p}"
            )));
        }
        sup = sup.max(m / psi.eval(p)?);
    }
    Ok(sup)
}

/// Result of a conjugate maximization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conjugate {
    /// `sup_p [ p t - p ln psi(p) ]` over the probed interval.
    pub value: f64,
    /// Location of the supremum.
    pub maximizer: f64,
    /// True when the supremum sits at the upper cap `p_max`, meaning the
    /// reported value is a lower bound on the unconstrained conjugate.
    pub cap_hit: bool,
}

/// Golden-section maximization of a unimodal-enough objective on `[a, b]`.
pub(crate) fn golden_max<F: Fn(f64) -> Result<f64>>(
    f: F,
    mut a: f64,
    mut b: f64,
) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..200 {
        if (b - a).abs() <= 1e-12 * (1.0 + a.abs() + b.abs()) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    let mid = 0.5 * (a + b);
    Ok((mid, f(mid)?))
}

/// Young–Fenchel conjugate of `h(p) = p ln psi(p)` at slope `t`:
///
/// ```text
/// h*(t) = sup { p t - p ln psi(p) : p in [domain_lo, p_max] }.
/// ```
///
/// A geometric scan locates the bracket and golden-section refines it. When
/// the supremum sits at `p_max` the result carries `cap_hit = true`.
pub fn young_fenchel(psi: &PsiFunction, t: f64, p_max: f64) -> Result<Conjugate> {
    psi.validate()?;
    if !t.is_finite() {
        return Err(Error::invalid(format!("conjugate slope must be finite, got {t}")));
    }
    let (lo, dom_hi) = psi.domain();
    let hi = dom_hi.min(p_max);
    if !(hi > lo) || !hi.is_finite() || !(lo > 0.0) {
        return Err(Error::invalid(format!(
            "conjugate needs a positive probe interval, got [{lo}, {hi}]"
        )));
    }
    let objective = |p: f64| -> Result<f64> { Ok(p * t - p * psi.eval(p)?.ln()) };

    const SCAN: usize = 512;
    let ratio = (hi / lo).powf(1.0 / (SCAN - 1) as f64);
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    let mut probes = Vec::with_capacity(SCAN);
    for i in 0..SCAN {
        let p = if i == SCAN - 1 {
            hi
        } else {
            lo * ratio.powi(i as i32)
        };
        probes.push(p);
        let g = objective(p)?;
        if g > best {
            best = g;
            best_i = i;
        }
    }
    let bracket_lo = probes[best_i.saturating_sub(1)];
    let bracket_hi = probes[(best_i + 1).min(SCAN - 1)];
    let (mut maximizer, mut value) = golden_max(objective, bracket_lo, bracket_hi)?;
    // Keep endpoint suprema exact: golden section stops just inside the
    // bracket, so re-test both edges.
    for edge in [bracket_lo, bracket_hi] {
        let g = objective(edge)?;
        if g > value {
            value = g;
            maximizer = edge;
        }
    }
    let cap_hit = maximizer >= hi * (1.0 - 1e-9);
    if cap_hit {
        value = objective(hi)?;
        maximizer = hi;
    }
    Ok(Conjugate {
        value,
        maximizer,
        cap_hit,
    })
}

/// Tail bound from a gauge-norm bound: a variable with gauge norm at most
/// `kappa` satisfies `P(|X| > t) <= exp(-h*(t/kappa))` for `t >= kappa`.
pub fn moment_tail_bound(psi: &PsiFunction, kappa: f64, t: f64, p_max: f64) -> Result<f64> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::invalid(format!(
            "gauge-norm bound must be positive and finite, got {kappa}"
        )));
    }
    if !(t >= kappa) {
        return Err(Error::invalid(format!(
            "tail bound needs t >= kappa, got t = {t}, kappa = {kappa}"
        )));
    }
    let conj = young_fenchel(psi, (t / kappa).ln(), p_max)?;
    Ok((-conj.value).exp())
}

/// Reference tail profile `nu(z) = exp(-z - ln z * ln ln z)` on `z >= e`.
///
/// Strictly decreasing on its domain with `nu(e) = exp(-e)`.
pub fn nu(z: f64) -> Result<f64> {
    if !(z >= std::f64::consts::E) {
        return Err(Error::invalid(format!(
            "tail profile needs z >= e, got {z}"
        )));
    }
    let lz = z.ln();
    Ok((-z - lz * lz.ln()).exp())
}

/// Inverse of [`nu`]: the `z >= e` with `nu(z) = y`, for `y in (0, nu(e)]`.
pub fn nu_inverse(y: f64) -> Result<f64> {
    let edge = nu(std::f64::consts::E)?;
    if !(y > 0.0) || y > edge {
        return Err(Error::invalid(format!(
            "tail profile inverse needs y in (0, {edge:.6e}], got {y}"
        )));
    }
    let mut lo = std::f64::consts::E;
    let mut hi = lo;
    while nu(hi)? > y {
        lo = hi;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::invalid("tail profile inverse diverged"));
        }
    }
    for _ in 0..200 {
        if hi - lo <= 1e-12 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if nu(mid)? > y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Shape tag of a calibrated tail envelope (only the reference profile today).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailShape {
    Nu,
}

/// A calibrated envelope `P(deviation > u) <= C nu(u / s)`, valid on
/// `u >= e * s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailModel {
    /// Multiplicative envelope constant.
    pub c: f64,
    /// Deviation scale.
    pub s: f64,
    /// Parametric shape of the envelope.
    pub shape: TailShape,
}

impl TailModel {
    /// Build a validated envelope.
    pub fn new(c: f64, s: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() || !(s > 0.0) || !s.is_finite() {
            return Err(Error::invalid(format!(
                "tail model needs positive finite C and s, got C = {c}, s = {s}"
            )));
        }
        Ok(TailModel {
            c,
            s,
            shape: TailShape::Nu,
        })
    }

    /// Smallest deviation the envelope makes a claim about.
    #[must_use]
    pub fn domain_edge(&self) -> f64 {
        std::f64::consts::E * self.s
    }

    /// Envelope value at deviation `u` (must be `>= domain_edge`).
    pub fn bound(&self, u: f64) -> Result<f64> {
        Ok(self.c * nu(u / self.s)?)
    }

    /// Deviation level `u_alpha` with envelope mass `alpha`:
    /// `C nu(u_alpha / s) = alpha`.
    ///
    /// Fails with [`Error::UnreachableAlpha`] when `alpha` is at or above the
    /// envelope's value at its domain edge, where no in-domain level exists.
    pub fn quantile(&self, alpha: f64) -> Result<f64> {
        if !(alpha > 0.0) || !(alpha < 1.0) {
            return Err(Error::invalid(format!(
                "quantile level must lie in (0, 1), got {alpha}"
            )));
        }
        let edge_value = self.c * nu(std::f64::consts::E)?;
        if alpha >= edge_value {
            return Err(Error::UnreachableAlpha { alpha, edge_value });
        }
        Ok(self.s * nu_inverse(alpha / self.c)?)
    }
}

/// Weight function for deviation risks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum YoungWeight {
    /// `Phi(u) = u^m`, `m >= 1`.
    Power { m: f64 },
    /// `Phi(u) = exp(u^m) - 1`, `m > 0`.
    ExpPower { m: f64 },
}

impl YoungWeight {
    fn validate(self) -> Result<()> {
        match self {
            YoungWeight::Power { m } => {
                if !(m >= 1.0) || !m.is_finite() {
                    return Err(Error::invalid(format!(
                        "power weight needs m >= 1, got {m}"
                    )));
                }
            }
            YoungWeight::ExpPower { m } => {
                if !(m > 0.0) || !m.is_finite() {
                    return Err(Error::invalid(format!(
                        "exponential weight needs m > 0, got {m}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Weight value at `u >= 0`.
    #[must_use]
    pub fn eval(self, u: f64) -> f64 {
        match self {
            YoungWeight::Power { m } => u.powf(m),
            YoungWeight::ExpPower { m } => u.powf(m).exp_m1(),
        }
    }
}

/// Weighted deviation risk: the average of `Phi(|d|)` over the deviations.
pub fn psi_risk(deviations: &[f64], weight: YoungWeight) -> Result<f64> {
    weight.validate()?;
    if deviations.is_empty() {
        return Err(Error::EmptySample("risk needs at least one deviation"));
    }
    if deviations.iter().any(|d| !d.is_finite()) {
        return Err(Error::invalid("deviations must be finite"));
    }
    let total: f64 = deviations.iter().map(|d| weight.eval(d.abs())).sum();
    Ok(total / deviations.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn log_ratio_reference_values() {
        // ln(E) is exactly 1.0 in f64, so psi(e) = e exactly.
        assert_eq!(log_ratio(E).unwrap(), E);
        let e2 = E * E;
        assert!((log_ratio(e2).unwrap() - e2 / 2.0).abs() < 1e-15);
        assert!(log_ratio(1.0).is_err());
        assert!(log_ratio(0.5).is_err());
        assert!(log_ratio(f64::INFINITY).is_err());
    }

    #[test]
    fn gauge_norm_of_bounded_variable() {
        // M(p) = 1 for all p: the norm is 1 / min psi = 1 / e, attained at p = e.
        let psi = PsiFunction::LogRatio;
        let mut grid: Vec<f64> = (0..200).map(|i| 2.0 * 1.05f64.powi(i)).collect();
        grid.push(E);
        let norm = gls_norm(|_| 1.0, &psi, &grid).unwrap();
        assert!((norm - 1.0 / E).abs() < 1e-15, "norm = {norm}");
    }

    #[test]
    fn gauge_norm_rejects_bad_input() {
        let psi = PsiFunction::LogRatio;
        assert!(gls_norm(|_| 1.0, &psi, &[]).is_err());
        assert!(gls_norm(|_| f64::NAN, &psi, &[3.0]).is_err());
        assert!(gls_norm(|_| 1.0, &psi, &[1.5]).is_err(), "p below domain");
    }

    #[test]
    fn conjugate_at_unit_slope_vanishes_at_e() {
        // g(p) = p - p ln(p / ln p) is maximized at p = e with value 0.
        let conj = young_fenchel(&PsiFunction::LogRatio, 1.0, 1e6).unwrap();
        assert!(conj.value.abs() < 1e-10, "value = {}", conj.value);
        assert!((conj.maximizer - E).abs() < 1e-6, "p* = {}", conj.maximizer);
        assert!(!conj.cap_hit);
    }

    #[test]
    fn conjugate_grows_with_slope() {
        let psi = PsiFunction::LogRatio;
        let h1 = young_fenchel(&psi, 1.0, 1e6).unwrap().value;
        let h2 = young_fenchel(&psi, 2.0, 1e6).unwrap().value;
        let h3 = young_fenchel(&psi, 3.0, 1e6).unwrap().value;
        assert!(h1 < h2 && h2 < h3, "{h1} {h2} {h3}");
        assert!(h2 > 0.0);
    }

    #[test]
    fn constant_gauge_caps_at_p_max() {
        let c = 2.0;
        let psi = PsiFunction::Constant { value: c };
        let t = c.ln() + 0.5;
        let conj = young_fenchel(&psi, t, 1000.0).unwrap();
        assert!(conj.cap_hit);
        assert!((conj.maximizer - 1000.0).abs() < 1e-9);
        assert!((conj.value - 500.0).abs() < 1e-9, "value = {}", conj.value);
    }

    #[test]
    fn conjugate_with_negative_slope_sits_at_lower_edge() {
        // For t = 0 the objective -p ln psi(p) is negative and decreasing on
        // [2, ∞): the sup is at p = 2.
        let conj = young_fenchel(&PsiFunction::LogRatio, 0.0, 1e6).unwrap();
        assert!((conj.maximizer - 2.0).abs() < 1e-9, "p* = {}", conj.maximizer);
        let expect = -2.0 * (2.0 / 2.0f64.ln()).ln();
        assert!((conj.value - expect).abs() < 1e-9);
        assert!(!conj.cap_hit);
    }

    #[test]
    fn conjugate_rejects_bad_probe_interval() {
        assert!(young_fenchel(&PsiFunction::LogRatio, 1.0, 1.5).is_err());
        assert!(young_fenchel(&PsiFunction::LogRatio, f64::NAN, 100.0).is_err());
        let bad = PsiFunction::Constant { value: -1.0 };
        assert!(young_fenchel(&bad, 1.0, 100.0).is_err());
    }

    #[test]
    fn tabulated_gauge_interpolates_and_validates() {
        let psi = PsiFunction::Tabulated {
            knots: vec![(2.0, 5.0), (10.0, 5.0)],
        };
        assert_eq!(psi.eval(6.0).unwrap(), 5.0);
        assert!(psi.eval(1.0).is_err());
        assert!(psi.eval(11.0).is_err());
        // Slope exactly ln 5 makes the objective identically zero.
        let conj = young_fenchel(&psi, 5.0f64.ln(), 1e6).unwrap();
        assert!(conj.value.abs() < 1e-9);

        let bad = PsiFunction::Tabulated {
            knots: vec![(2.0, 1.0)],
        };
        assert!(bad.eval(2.0).is_err());
        let unordered = PsiFunction::Tabulated {
            knots: vec![(3.0, 1.0), (2.0, 1.0)],
        };
        assert!(unordered.eval(2.5).is_err());
        let nonpositive = PsiFunction::Tabulated {
            knots: vec![(2.0, 0.0), (3.0, 1.0)],
        };
        assert!(nonpositive.eval(2.5).is_err());
    }

    #[test]
    fn moment_tail_bound_reference_points() {
        let psi = PsiFunction::LogRatio;
        // At t = e * kappa the conjugate slope is ln(e) = 1, where h* = 0:
        // the bound degenerates to 1 (it only bites further out).
        let b1 = moment_tail_bound(&psi, 1.0, E, 1e6).unwrap();
        assert!((b1 - 1.0).abs() < 1e-9, "bound = {b1}");
        let b2 = moment_tail_bound(&psi, 1.0, 2.0 * E, 1e6).unwrap();
        let b3 = moment_tail_bound(&psi, 1.0, 4.0 * E, 1e6).unwrap();
        assert!(b2 < 1.0 && b3 < b2, "{b2} {b3}");
        // Scale equivariance in kappa.
        let b2s = moment_tail_bound(&psi, 2.0, 4.0 * E, 1e6).unwrap();
        assert!((b2s - b2).abs() < 1e-12);
        assert!(moment_tail_bound(&psi, 1.0, 0.5, 1e6).is_err());
        assert!(moment_tail_bound(&psi, -1.0, 2.0, 1e6).is_err());
    }

    #[test]
    fn tail_profile_exact_values() {
        // ln(E) = 1 and ln(1) = 0 exactly: nu(e) = exp(-e) to the last bit.
        assert_eq!(nu(E).unwrap(), (-E).exp());
        // nu(e^e) = exp(-e^e - e).
        let z = E.exp();
        let expect = (-z - E).exp();
        assert!((nu(z).unwrap() - expect).abs() <= 1e-12 * expect);
        // Strictly decreasing.
        assert!(nu(3.0).unwrap() > nu(4.0).unwrap());
        assert!(nu(2.0).is_err());
        assert!(nu(E - 1e-12).is_err());
    }

    #[test]
    fn tail_profile_inverse_round_trip() {
        for z in [E, 3.0, 5.0, 10.0, 40.0] {
            let y = nu(z).unwrap();
            let back = nu_inverse(y).unwrap();
            assert!((back - z).abs() <= 1e-9 * z, "z = {z}, back = {back}");
        }
        assert!(nu_inverse(0.5).is_err(), "above nu(e)");
        assert!(nu_inverse(0.0).is_err());
        assert!(nu_inverse(-1.0).is_err());
    }

    #[test]
    fn tail_model_quantile_round_trip_and_scaling() {
        let m = TailModel::new(1.0, 1.0).unwrap();
        let alpha = nu(5.0).unwrap();
        let q = m.quantile(alpha).unwrap();
        assert!((q - 5.0).abs() < 1e-8, "q = {q}");
        // Halving alpha pushes the level out.
        assert!(m.quantile(alpha / 2.0).unwrap() > q);
        // s scales quantiles linearly.
        let m2 = TailModel::new(1.0, 2.0).unwrap();
        let q2 = m2.quantile(alpha).unwrap();
        assert!((q2 - 2.0 * q).abs() < 1e-8 * q2);
        // A larger C inflates the level too.
        let mc = TailModel::new(10.0, 1.0).unwrap();
        assert!(mc.quantile(alpha).unwrap() > q);
    }

    #[test]
    fn tail_model_unreachable_alpha() {
        let m = TailModel::new(1.0, 1.0).unwrap();
        // nu(e) ≈ 0.0660: alpha = 0.5 cannot be certified by this envelope.
        match m.quantile(0.5) {
            Err(Error::UnreachableAlpha { alpha, edge_value }) => {
                assert_eq!(alpha, 0.5);
                assert!((edge_value - (-E).exp()).abs() < 1e-15);
            }
            other => panic!("expected UnreachableAlpha, got {other:?}"),
        }
        // Inflating C makes the same alpha reachable.
        let inflated = TailModel::new(10.0, 1.0).unwrap();
        assert!(inflated.quantile(0.5).is_ok());
    }

    #[test]
    fn tail_model_bound_and_edges() {
        let m = TailModel::new(2.0, 3.0).unwrap();
        assert!((m.domain_edge() - 3.0 * E).abs() < 1e-12);
        let at_edge = m.bound(m.domain_edge()).unwrap();
        assert!((at_edge - 2.0 * (-E).exp()).abs() < 1e-12);
        assert!(m.bound(1.0).is_err(), "below the domain edge");
        assert!(TailModel::new(0.0, 1.0).is_err());
        assert!(TailModel::new(1.0, -2.0).is_err());
    }

    #[test]
    fn weighted_risk_reference_values() {
        let r = psi_risk(&[0.0, 2.0f64.ln()], YoungWeight::ExpPower { m: 1.0 }).unwrap();
        assert!((r - 0.5).abs() < 1e-15, "r = {r}");
        let r2 = psi_risk(&[1.0, -3.0], YoungWeight::Power { m: 2.0 }).unwrap();
        assert!((r2 - 5.0).abs() < 1e-15);
        assert!(psi_risk(&[], YoungWeight::Power { m: 2.0 }).is_err());
        assert!(psi_risk(&[1.0], YoungWeight::Power { m: 0.5 }).is_err());
        assert!(psi_risk(&[1.0], YoungWeight::ExpPower { m: 0.0 }).is_err());
        assert!(psi_risk(&[f64::NAN], YoungWeight::Power { m: 2.0 }).is_err());
    }

    #[test]
    fn serde_round_trips() {
        let psi = PsiFunction::Tabulated {
            knots: vec![(2.0, 3.0), (4.0, 5.0)],
        };
        let text = serde_json::to_string(&psi).unwrap();
        assert!(text.contains("\"rule\":\"tabulated\""), "{text}");
        assert_eq!(serde_json::from_str::<PsiFunction>(&text).unwrap(), psi);

        let plain = serde_json::to_string(&PsiFunction::LogRatio).unwrap();
        assert!(plain.contains("\"rule\":\"log_ratio\""), "{plain}");

        let m = TailModel::new(1.5, 0.25).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.contains("\"shape\":\"nu\""), "{text}");
        assert_eq!(serde_json::from_str::<TailModel>(&text).unwrap(), m);
    }
}
