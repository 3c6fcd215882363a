//! Grid-based density estimators: the streaming recursive estimator with a
//! per-observation bandwidth schedule, its closed-form batch equivalent, and
//! the fixed-window baseline that smooths every observation at the final
//! bandwidth.
//!
//! The streaming update for observation `k` (1-based) is
//!
//! ```text
//! f_k(x) = (k-1)/k * f_{k-1}(x) + h_k^{-d}/k * K((x - xi_k)/h_k),    f_0 = 0,
//! ```
//!
//! which unrolls to the weighted sum `f_n(x) = n^{-1} sum_k h_k^{-d}
//! K((x - xi_k)/h_k)`. Both routes are implemented separately so they can
//! check each other; the streaming form is the one that matters operationally
//! (constant memory per node, observations folded in arrival order — the
//! estimate depends on that order). The baseline `g_n(x) = (n h_n^d)^{-1}
//! sum_k K((x - xi_k)/h_n)` uses one bandwidth for all observations and is
//! permutation-invariant.

use crate::bandwidth::BandwidthPlan;
use crate::density::DensitySpec;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::kernels::KernelSpec;
use crate::quadrature;
use rand::Rng;

/// A flat, row-major batch of `d`-dimensional observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    d: usize,
    data: Vec<f64>,
}

impl Sample {
    /// Wrap a flat buffer of observations (`data.len()` divisible by `d`).
    pub fn new(d: usize, data: Vec<f64>) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("sample dimension must be >= 1"));
        }
        if !data.len().is_multiple_of(d) {
            return Err(Error::invalid(format!(
                "flat sample length {} is not a multiple of dimension {d}",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("observations must be finite"));
        }
        Ok(Sample { d, data })
    }

    /// An empty sample of the given dimension.
    pub fn empty(d: usize) -> Result<Self> {
        Sample::new(d, Vec::new())
    }

    /// Draw `n` observations from a density.
    pub fn draw<R: Rng + ?Sized>(density: &DensitySpec, n: usize, rng: &mut R) -> Result<Self> {
        let d = density.dim();
        let mut data = vec![0.0; n * d];
        for row in data.chunks_exact_mut(d) {
            density.sample_point(rng, row)?;
        }
        Ok(Sample { d, data })
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.d
    }

    /// Number of observations.
    #[must_use]
    pub fn len(&self) -> usize {
        self.data.len() / self.d
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// The `i`-th observation.
    #[must_use]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    /// Observations in order.
    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.d)
    }

    /// Append one observation.
    pub fn push(&mut self, x: &[f64]) -> Result<()> {
        if x.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("observations must be finite"));
        }
        self.data.extend_from_slice(x);
        Ok(())
    }

    /// The flat row-major buffer.
    #[must_use]
    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Reordered copy (for permutation studies).
    pub fn permuted(&self, order: &[usize]) -> Result<Sample> {
        if order.len() != self.len() {
            return Err(Error::invalid("permutation length must match sample size"));
        }
        let mut data = Vec::with_capacity(self.data.len());
        for &i in order {
            if i >= self.len() {
                return Err(Error::invalid("permutation index out of range"));
            }
            data.extend_from_slice(self.point(i));
        }
        Ok(Sample { d: self.d, data })
    }
}

/// Enumerate `K((node - x)/h)` products over all grid nodes.
///
/// Calls `sink(flat_index, kernel_value)`; exploits the product form through
/// per-axis tables so each axis profile is evaluated once per coordinate.
fn fold_kernel<F: FnMut(usize, f64)>(
    grid: &Grid,
    kernel: &KernelSpec,
    h: f64,
    x: &[f64],
    mut sink: F,
) {
    let d = grid.dim();
    if d == 1 {
        for (flat, &node) in grid.axis(0).iter().enumerate() {
            sink(flat, kernel.eval1((node - x[0]) / h));
        }
        return;
    }
    let tables: Vec<Vec<f64>> = (0..d)
        .map(|i| {
            grid.axis(i)
                .iter()
                .map(|&node| kernel.eval1((node - x[i]) / h))
                .collect()
        })
        .collect();
    let shape = grid.shape();
    let mut idx = vec![0usize; d];
    for flat in 0..grid.len() {
        let mut prod = 1.0;
        for i in 0..d {
            prod *= tables[i][idx[i]];
            if prod == 0.0 {
                break;
            }
        }
        sink(flat, prod);
        for i in (0..d).rev() {
            idx[i] += 1;
            if idx[i] < shape[i] {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// A density estimate held on a rectangular grid.
///
/// Built either by streaming observations through [`GridEstimate::update`]
/// or in one shot by [`ww_batch`] / [`pr_batch`].
#[derive(Debug, Clone)]
pub struct GridEstimate {
    grid: Grid,
    plan: BandwidthPlan,
    kernel: KernelSpec,
    values: Vec<f64>,
    n: usize,
    memory: Option<Sample>,
}

impl GridEstimate {
    /// Fresh streaming estimator (`f_0 = 0` everywhere).
    pub fn new(grid: Grid, plan: BandwidthPlan, kernel: KernelSpec) -> Result<Self> {
        if plan.dim() as usize != grid.dim() {
            return Err(Error::DimensionMismatch {
                expected: plan.dim() as usize,
                got: grid.dim(),
            });
        }
        let values = vec![0.0; grid.len()];
        Ok(GridEstimate {
            grid,
            plan,
            kernel,
            values,
            n: 0,
            memory: None,
        })
    }

    /// Streaming estimator that additionally retains every observation so the
    /// estimate can later be evaluated off the grid ([`GridEstimate::value_at`]).
    pub fn with_memory(grid: Grid, plan: BandwidthPlan, kernel: KernelSpec) -> Result<Self> {
        let mut e = GridEstimate::new(grid, plan, kernel)?;
        e.memory = Some(Sample::empty(e.grid.dim())?);
        Ok(e)
    }

    /// Reassemble a previously computed estimate from its stored parts.
    ///
    /// The result carries no observation memory, so streaming can continue but
    /// off-grid evaluation is unavailable.
    pub fn from_parts(
        grid: Grid,
        plan: BandwidthPlan,
        kernel: KernelSpec,
        values: Vec<f64>,
        n: usize,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} stored values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("stored estimate contains non-finite values"));
        }
        let mut e = GridEstimate::new(grid, plan, kernel)?;
        e.values = values;
        e.n = n;
        Ok(e)
    }

    #[must_use]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[must_use]
    pub fn plan(&self) -> &BandwidthPlan {
        &self.plan
    }

    #[must_use]
    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    /// Node values in the grid's row-major order.
    #[must_use]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Observations folded in so far.
    #[must_use]
    pub fn count(&self) -> usize {
        self.n
    }

    /// Uniform-deviation normalizer `B_n` for the current count.
    pub fn normalizer(&self) -> Result<f64> {
        self.plan.normalizer(self.n as u64)
    }

    /// Fold in the next observation (order-sensitive).
    pub fn update(&mut self, x: &[f64]) -> Result<()> {
        let d = self.grid.dim();
        if x.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("observations must be finite"));
        }
        let next = self.n as u64 + 1;
        let h = self.plan.bandwidth_at(next)?;
        let decay = self.n as f64 / next as f64;
        let gain = h.powi(-(d as i32)) / next as f64;
        let values = &mut self.values;
        fold_kernel(&self.grid, &self.kernel, h, x, |flat, kv| {
            values[flat] = decay * values[flat] + gain * kv;
        });
        if let Some(mem) = &mut self.memory {
            mem.push(x)?;
        }
        self.n += 1;
        Ok(())
    }

    /// Fold in a whole sample in order.
    pub fn update_all(&mut self, sample: &Sample) -> Result<()> {
        for x in sample.iter() {
            self.update(x)?;
        }
        Ok(())
    }

    /// Evaluate the estimate at an arbitrary point by replaying the recursion
    /// over the retained observations.
    ///
    /// Only available for estimators built by [`GridEstimate::with_memory`].
    pub fn value_at(&self, x: &[f64]) -> Result<f64> {
        let mem = self.memory.as_ref().ok_or_else(|| {
            Error::invalid("off-grid evaluation requires an estimator built with memory")
        })?;
        let d = self.grid.dim();
        if x.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: x.len(),
            });
        }
        let mut f = 0.0;
        for (i, xi) in mem.iter().enumerate() {
            let k = i as u64 + 1;
            let h = self.plan.bandwidth_at(k)?;
            let mut kv = 1.0;
            for j in 0..d {
                kv *= self.kernel.eval1((x[j] - xi[j]) / h);
                if kv == 0.0 {
                    break;
                }
            }
            f = (k - 1) as f64 / k as f64 * f + h.powi(-(d as i32)) / k as f64 * kv;
        }
        Ok(f)
    }

    /// Largest absolute node deviation from a reference field.
    pub fn sup_deviation_from(&self, reference: &[f64]) -> Result<f64> {
        sup_deviation(&self.values, reference)
    }
}

/// Closed-form route to the streaming estimate:
/// `f_n(x) = n^{-1} sum_k h_k^{-d} K((x - xi_k)/h_k)`.
///
/// Mathematically identical to streaming the sample through
/// [`GridEstimate::update`]; the summation differs, so agreement between the
/// two is a real consistency check.
pub fn ww_batch(
    grid: &Grid,
    plan: &BandwidthPlan,
    kernel: &KernelSpec,
    sample: &Sample,
) -> Result<GridEstimate> {
    if sample.dim() != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            got: sample.dim(),
        });
    }
    let mut est = GridEstimate::new(grid.clone(), *plan, kernel.clone())?;
    let d = grid.dim();
    let mut acc = vec![0.0; grid.len()];
    for (i, x) in sample.iter().enumerate() {
        let h = plan.bandwidth_at(i as u64 + 1)?;
        let w = h.powi(-(d as i32));
        fold_kernel(grid, kernel, h, x, |flat, kv| {
            acc[flat] += w * kv;
        });
    }
    if !sample.is_empty() {
        let scale = 1.0 / sample.len() as f64;
        for v in &mut acc {
            *v *= scale;
        }
    }
    est.values = acc;
    est.n = sample.len();
    Ok(est)
}

/// Fixed-window baseline on the same grid:
/// `g_n(x) = (n h_n^d)^{-1} sum_k K((x - xi_k)/h_n)` with `h_n` from the
/// plan's batch schedule. Permutation-invariant in the observations.
pub fn pr_batch(
    grid: &Grid,
    plan: &BandwidthPlan,
    kernel: &KernelSpec,
    sample: &Sample,
) -> Result<GridEstimate> {
    let mut est = GridEstimate::new(grid.clone(), *plan, kernel.clone())?;
    est.values = pr_field(grid, plan, kernel, sample)?;
    est.n = sample.len();
    Ok(est)
}

/// Node values of the fixed-window baseline (see [`pr_batch`]).
pub fn pr_field(
    grid: &Grid,
    plan: &BandwidthPlan,
    kernel: &KernelSpec,
    sample: &Sample,
) -> Result<Vec<f64>> {
    if sample.dim() != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: grid.dim(),
            got: sample.dim(),
        });
    }
    let n = sample.len();
    if n < 2 {
        return Err(Error::invalid(
            "fixed-window baseline needs at least 2 observations",
        ));
    }
    let d = grid.dim();
    let h = plan.pr_bandwidth(n as u64)?;
    let mut acc = vec![0.0; grid.len()];
    for x in sample.iter() {
        fold_kernel(grid, kernel, h, x, |flat, kv| {
            acc[flat] += kv;
        });
    }
    let scale = 1.0 / (n as f64 * h.powi(d as i32));
    for v in &mut acc {
        *v *= scale;
    }
    Ok(acc)
}

/// Largest absolute pointwise gap between two fields of equal length.
pub fn sup_deviation(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::GridMismatch(format!(
            "field lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(Error::invalid("sup deviation of empty fields is undefined"));
    }
    let mut sup: f64 = 0.0;
    for (x, y) in a.iter().zip(b) {
        sup = sup.max((x - y).abs());
    }
    Ok(sup)
}

/// Monte-Carlo `L_p` risk from per-replicate deviation fields: the `p`-th
/// root of the average over replicates of `∫ |dev(x)|^p dx` (trapezoid rule
/// on the grid).
pub fn lp_risk_estimate(deviation_fields: &[Vec<f64>], grid: &Grid, p: f64) -> Result<f64> {
    if deviation_fields.is_empty() {
        return Err(Error::EmptySample("no deviation fields supplied"));
    }
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::invalid(format!(
            "risk exponent must satisfy p >= 1, got {p}"
        )));
    }
    let mut mean = 0.0;
    for field in deviation_fields {
        let powered: Vec<f64> = field.iter().map(|v| v.abs().powf(p)).collect();
        mean += grid.integrate(&powered)?;
    }
    mean /= deviation_fields.len() as f64;
    Ok(mean.powf(1.0 / p))
}

/// Pointwise mean of the streaming estimate after `n` observations drawn from
/// a known density:
///
/// ```text
/// E f_n(x) = n^{-1} sum_{k=1}^{n} h_k^{-d} ∫ K((x - u)/h_k) f(u) du,
/// ```
///
/// with every convolution integral evaluated by adaptive quadrature per axis
/// (the kernel and each mixture component factorize).
pub fn expected_estimate(
    plan: &BandwidthPlan,
    kernel: &KernelSpec,
    density: &DensitySpec,
    n: u64,
    x: &[f64],
) -> Result<f64> {
    let d = density.dim();
    if x.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: x.len(),
        });
    }
    if plan.dim() as usize != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: plan.dim() as usize,
        });
    }
    if n == 0 {
        return Err(Error::invalid("expected estimate starts at n = 1"));
    }
    let reach = kernel.truncation_radius(0);
    let components = density.mixture_view();
    let mut total = 0.0;
    for k in 1..=n {
        let h = plan.bandwidth_at(k)?;
        let mut term = 0.0;
        for (w, axes) in &components {
            if *w == 0.0 {
                continue;
            }
            let mut prod = *w;
            for (i, axis) in axes.iter().enumerate() {
                prod *= convolve_axis(kernel, axis, x[i], h, reach)?;
                if prod == 0.0 {
                    break;
                }
            }
            term += prod;
        }
        total += h.powi(-(d as i32)) * term;
    }
    Ok(total / n as f64)
}

/// [`expected_estimate`] at every node of a grid.
pub fn expected_field(
    plan: &BandwidthPlan,
    kernel: &KernelSpec,
    density: &DensitySpec,
    n: u64,
    grid: &Grid,
) -> Result<Vec<f64>> {
    let d = density.dim();
    if grid.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: grid.dim(),
        });
    }
    if plan.dim() as usize != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: plan.dim() as usize,
        });
    }
    if n == 0 {
        return Err(Error::invalid("expected estimate starts at n = 1"));
    }
    let reach = kernel.truncation_radius(0);
    let components = density.mixture_view();
    let mut field = vec![0.0; grid.len()];
    let shape = grid.shape().to_vec();
    for k in 1..=n {
        let h = plan.bandwidth_at(k)?;
        let hinv = h.powi(-(d as i32));
        // Axis tables per component: the 1-d convolutions only depend on the
        // axis coordinate, so compute each once per (component, axis, node).
        let mut tables: Vec<Vec<Vec<f64>>> = Vec::with_capacity(components.len());
        for (_, axes) in &components {
            let mut per_axis = Vec::with_capacity(d);
            for (i, axis) in axes.iter().enumerate() {
                let col: Vec<f64> = grid
                    .axis(i)
                    .iter()
                    .map(|&c| convolve_axis(kernel, axis, c, h, reach))
                    .collect::<Result<_>>()?;
                per_axis.push(col);
            }
            tables.push(per_axis);
        }
        let mut idx = vec![0usize; d];
        for value in field.iter_mut() {
            let mut node_sum = 0.0;
            for ((w, _), per_axis) in components.iter().zip(&tables) {
                if *w == 0.0 {
                    continue;
                }
                let mut prod = *w;
                for i in 0..d {
                    prod *= per_axis[i][idx[i]];
                    if prod == 0.0 {
                        break;
                    }
                }
                node_sum += prod;
            }
            *value += hinv * node_sum;
            for i in (0..d).rev() {
                idx[i] += 1;
                if idx[i] < shape[i] {
                    break;
                }
                idx[i] = 0;
            }
        }
    }
    let scale = 1.0 / n as f64;
    for v in &mut field {
        *v *= scale;
    }
    Ok(field)
}

/// `∫ K1((c - u)/h) axis_pdf(u) du` over the overlap of the kernel window and
/// the factor's effective support.
fn convolve_axis(
    kernel: &KernelSpec,
    axis: &crate::density::Axis1,
    c: f64,
    h: f64,
    reach: f64,
) -> Result<f64> {
    let (s_lo, s_hi) = axis.effective_support();
    let lo = (c - reach * h).max(s_lo);
    let hi = (c + reach * h).min(s_hi);
    if lo >= hi {
        return Ok(0.0);
    }
    Ok(quadrature::integrate(
        |u| kernel.eval1((c - u) / h) * axis.pdf(u),
        lo,
        hi,
        1e-12,
    )?
    .value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DomainBox;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn grid1(lo: f64, hi: f64, nodes: usize) -> Grid {
        Grid::new(DomainBox::new(vec![lo], vec![hi]).unwrap(), vec![nodes]).unwrap()
    }

    fn plan1() -> BandwidthPlan {
        BandwidthPlan::new(2.0, 1, 1.0).unwrap()
    }

    #[test]
    fn single_update_reproduces_kernel_profile() {
        // h_1 = 1, so f_1(x) = K(x - xi): the node at the observation holds K(0).
        let g = grid1(-2.0, 2.0, 17);
        let mut est = GridEstimate::new(g.clone(), plan1(), KernelSpec::gaussian()).unwrap();
        est.update(&[0.25]).unwrap();
        let at = g.axis(0).iter().position(|&v| (v - 0.25).abs() < 1e-12).unwrap();
        assert!((est.values()[at] - 0.3989422804014327).abs() < 1e-15);
        let away = g.axis(0).iter().position(|&v| (v - 1.25).abs() < 1e-12).unwrap();
        let expect = 0.3989422804014327 * (-0.5f64).exp();
        assert!((est.values()[away] - expect).abs() < 1e-15);
    }

    #[test]
    fn two_updates_match_hand_recursion() {
        // Explicit arithmetic for f_2(0) after observations 0.0 then 0.5.
        let g = grid1(-1.0, 1.0, 5);
        let mut est = GridEstimate::new(g.clone(), plan1(), KernelSpec::gaussian()).unwrap();
        est.update(&[0.0]).unwrap();
        est.update(&[0.5]).unwrap();

        let phi = |t: f64| 0.398_942_280_401_432_7 * (-0.5 * t * t).exp();
        let h2 = (2.0f64.ln() / 2.0).powf(2.0 / 5.0);
        let f1 = phi(0.0);
        let f2 = 0.5 * f1 + (1.0 / h2) / 2.0 * phi((0.0 - 0.5) / h2);
        let mid = g.axis(0).iter().position(|&v| v.abs() < 1e-12).unwrap();
        assert!((est.values()[mid] - f2).abs() < 1e-14, "{} vs {f2}", est.values()[mid]);
    }

    #[test]
    fn streaming_equals_batch_route() {
        let density = DensitySpec::gaussian_mixture(
            vec![0.6, 0.4],
            vec![vec![-0.5], vec![1.0]],
            vec![vec![0.8], vec![0.5]],
        )
        .unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let sample = Sample::draw(&density, 300, &mut rng).unwrap();
        let g = grid1(-4.0, 4.0, 101);
        let plan = plan1();
        let kernel = KernelSpec::gaussian();

        let mut streamed = GridEstimate::new(g.clone(), plan, kernel.clone()).unwrap();
        streamed.update_all(&sample).unwrap();
        let batch = ww_batch(&g, &plan, &kernel, &sample).unwrap();

        for (a, b) in streamed.values().iter().zip(batch.values()) {
            let scale = a.abs().max(b.abs()).max(1e-300);
            assert!((a - b).abs() / scale <= 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn streaming_is_order_sensitive() {
        let g = grid1(-4.0, 4.0, 33);
        let plan = plan1();
        let kernel = KernelSpec::gaussian();
        let forward = Sample::new(1, vec![0.0, 3.0]).unwrap();
        let reversed = Sample::new(1, vec![3.0, 0.0]).unwrap();
        let a = ww_batch(&g, &plan, &kernel, &forward).unwrap();
        let b = ww_batch(&g, &plan, &kernel, &reversed).unwrap();
        let gap = sup_deviation(a.values(), b.values()).unwrap();
        assert!(gap > 0.05, "reordering must change the estimate, gap = {gap}");
    }

    #[test]
    fn baseline_is_permutation_invariant() {
        let density = DensitySpec::standard_normal(1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(21);
        let sample = Sample::draw(&density, 64, &mut rng).unwrap();
        // An order-reversing permutation.
        let order: Vec<usize> = (0..64).rev().collect();
        let shuffled = sample.permuted(&order).unwrap();
        let g = grid1(-4.0, 4.0, 65);
        let plan = plan1();
        let kernel = KernelSpec::gaussian();
        let a = pr_field(&g, &plan, &kernel, &sample).unwrap();
        let b = pr_field(&g, &plan, &kernel, &shuffled).unwrap();
        for (x, y) in a.iter().zip(&b) {
            let scale = x.abs().max(y.abs()).max(1e-300);
            assert!((x - y).abs() / scale <= 1e-12);
        }
    }

    #[test]
    fn baseline_hand_value() {
        // n = 2 observations at ±1: g_2(0) = (2 h)^{-1} (K(1/h) + K(-1/h)).
        let g = grid1(-2.0, 2.0, 5);
        let plan = plan1();
        let kernel = KernelSpec::gaussian();
        let sample = Sample::new(1, vec![-1.0, 1.0]).unwrap();
        let field = pr_field(&g, &plan, &kernel, &sample).unwrap();
        let h = plan.pr_bandwidth(2).unwrap();
        let phi = |t: f64| 0.398_942_280_401_432_7 * (-0.5 * t * t).exp();
        let expect = (2.0 * phi(1.0 / h)) / (2.0 * h);
        let mid = g.axis(0).iter().position(|&v| v.abs() < 1e-12).unwrap();
        assert!((field[mid] - expect).abs() < 1e-14);
    }

    #[test]
    fn estimate_mass_is_near_one() {
        let density = DensitySpec::standard_normal(1).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let sample = Sample::draw(&density, 400, &mut rng).unwrap();
        let g = grid1(-9.0, 9.0, 721);
        let est = ww_batch(&g, &plan1(), &KernelSpec::gaussian(), &sample).unwrap();
        let mass = g.integrate(est.values()).unwrap();
        assert!((mass - 1.0).abs() < 0.02, "mass = {mass}");
    }

    #[test]
    fn two_dimensional_update_matches_product_of_profiles() {
        let domain = DomainBox::new(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let g = Grid::new(domain, vec![5, 5]).unwrap();
        let plan = BandwidthPlan::new(2.0, 2, 1.0).unwrap();
        let kernel = KernelSpec::gaussian();
        let mut est = GridEstimate::new(g.clone(), plan, kernel.clone()).unwrap();
        est.update(&[0.0, 0.5]).unwrap();
        // h_1 = 1: value at node (x, y) is K(x) * K(y - 0.5).
        g.for_each_node(|flat, node| {
            let expect = kernel.eval1(node[0]) * kernel.eval1(node[1] - 0.5);
            assert!((est.values()[flat] - expect).abs() < 1e-15);
        });
    }

    #[test]
    fn memory_mode_replays_off_grid() {
        let g = grid1(-2.0, 2.0, 9);
        let plan = plan1();
        let kernel = KernelSpec::gaussian();
        let mut est = GridEstimate::with_memory(g, plan, kernel.clone()).unwrap();
        let pts = [0.1, -0.6, 0.9];
        for &p in &pts {
            est.update(&[p]).unwrap();
        }
        // Independent replay of the recursion at an off-grid point.
        let x = 0.123_456;
        let mut f = 0.0;
        for (i, &p) in pts.iter().enumerate() {
            let k = (i + 1) as f64;
            let h = plan.bandwidth_at(i as u64 + 1).unwrap();
            f = (k - 1.0) / k * f + 1.0 / (h * k) * kernel.eval1((x - p) / h);
        }
        assert!((est.value_at(&[x]).unwrap() - f).abs() < 1e-15);
        // Without memory the same call is an error.
        let plain = GridEstimate::new(grid1(-2.0, 2.0, 9), plan, kernel).unwrap();
        assert!(plain.value_at(&[x]).is_err());
    }

    #[test]
    fn lp_risk_of_constant_offset_is_the_offset() {
        let g = grid1(0.0, 1.0, 11);
        let eps = 0.01;
        let fields = vec![vec![eps; g.len()], vec![-eps; g.len()]];
        for p in [1.0, 2.0, 4.0] {
            let r = lp_risk_estimate(&fields, &g, p).unwrap();
            assert!((r - eps).abs() < 1e-15, "p = {p}: {r}");
        }
    }

    #[test]
    fn expected_estimate_single_observation_closed_form() {
        // n = 1, h = 1, standard normal target and Gaussian kernel:
        // E f_1(x) = (phi * phi)(x) = N(x; 0, 2).
        let plan = plan1();
        let kernel = KernelSpec::gaussian();
        let density = DensitySpec::standard_normal(1).unwrap();
        for &x in &[0.0, 0.7, -1.3] {
            let got = expected_estimate(&plan, &kernel, &density, 1, &[x]).unwrap();
            let var = 2.0;
            let expect = (-(x * x) / (2.0 * var)).exp() / (var * 2.0 * std::f64::consts::PI).sqrt();
            assert!((got - expect).abs() < 1e-8, "x = {x}: {got} vs {expect}");
        }
    }

    #[test]
    fn expected_field_matches_pointwise_expected_estimate() {
        let plan = plan1();
        let kernel = KernelSpec::gaussian();
        let density = DensitySpec::gaussian(vec![0.3], vec![0.9]).unwrap();
        let g = grid1(-1.0, 1.0, 5);
        let field = expected_field(&plan, &kernel, &density, 3, &g).unwrap();
        for (flat, &c) in g.axis(0).iter().enumerate() {
            let pointwise = expected_estimate(&plan, &kernel, &density, 3, &[c]).unwrap();
            assert!((field[flat] - pointwise).abs() < 1e-12);
        }
    }

    #[test]
    fn expected_estimate_with_compact_kernel_and_bump_target() {
        // Disjoint supports integrate to exactly zero.
        let plan = plan1();
        let kernel = KernelSpec::epanechnikov();
        let density = DensitySpec::smooth_bump(vec![0.0], vec![0.5], Some(2)).unwrap();
        let far = expected_estimate(&plan, &kernel, &density, 2, &[10.0]).unwrap();
        assert_eq!(far, 0.0);
        let near = expected_estimate(&plan, &kernel, &density, 2, &[0.0]).unwrap();
        assert!(near > 0.3);
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        let g = grid1(-1.0, 1.0, 5);
        let plan2 = BandwidthPlan::new(2.0, 2, 1.0).unwrap();
        assert!(GridEstimate::new(g.clone(), plan2, KernelSpec::gaussian()).is_err());
        let mut est = GridEstimate::new(g.clone(), plan1(), KernelSpec::gaussian()).unwrap();
        assert!(est.update(&[0.0, 0.0]).is_err());
        assert!(est.update(&[f64::NAN]).is_err());
        let s2 = Sample::new(2, vec![0.0, 0.0]).unwrap();
        assert!(ww_batch(&g, &plan1(), &KernelSpec::gaussian(), &s2).is_err());
        assert!(pr_field(&g, &plan1(), &KernelSpec::gaussian(), &s2).is_err());
    }

    #[test]
    fn baseline_needs_two_observations() {
        let g = grid1(-1.0, 1.0, 5);
        let s = Sample::new(1, vec![0.0]).unwrap();
        assert!(pr_field(&g, &plan1(), &KernelSpec::gaussian(), &s).is_err());
    }

    #[test]
    fn sample_validation() {
        assert!(Sample::new(0, vec![]).is_err());
        assert!(Sample::new(2, vec![0.0, 1.0, 2.0]).is_err());
        assert!(Sample::new(1, vec![f64::INFINITY]).is_err());
        let mut s = Sample::empty(2).unwrap();
        assert!(s.push(&[0.0]).is_err());
        s.push(&[1.0, 2.0]).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.point(0), &[1.0, 2.0]);
        assert!(s.permuted(&[5]).is_err());
    }

    #[test]
    fn empty_fields_and_bad_exponents_are_rejected() {
        let g = grid1(0.0, 1.0, 3);
        assert!(lp_risk_estimate(&[], &g, 2.0).is_err());
        assert!(lp_risk_estimate(&[vec![0.0; 3]], &g, 0.5).is_err());
        assert!(sup_deviation(&[0.0], &[0.0, 1.0]).is_err());
        assert!(sup_deviation(&[], &[]).is_err());
    }
}
