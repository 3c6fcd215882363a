//! Evaluation domains and regular lattices over them.
//!
//! Estimates live on a [`Grid`]: a product of per-axis uniformly spaced
//! coordinate lists covering a [`DomainBox`] endpoint-inclusive. Nodes are
//! addressed by a flat row-major index (last axis fastest). The grid also
//! carries product-trapezoid weights so fields can be integrated over the box.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned box `prod_j [lo_j, hi_j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainBox {
    lo: Vec<f64>,
    hi: Vec<f64>,
}

impl DomainBox {
    /// Validate and build. Every axis needs finite `lo < hi`.
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        if lo.is_empty() || lo.len() != hi.len() {
            return Err(Error::invalid(
                "domain box needs matching, non-empty lo/hi vectors",
            ));
        }
        for (a, b) in lo.iter().zip(&hi) {
            if !a.is_finite() || !b.is_finite() || a >= b {
                return Err(Error::invalid(format!(
                    "domain axis [{a}, {b}] must be finite with lo < hi"
                )));
            }
        }
        Ok(DomainBox { lo, hi })
    }

    /// The symmetric cube `[-r, r]^d`.
    pub fn centered_cube(d: usize, r: f64) -> Result<Self> {
        DomainBox::new(vec![-r; d], vec![r; d])
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    #[must_use]
    pub fn lo(&self) -> &[f64] {
        &self.lo
    }

    #[must_use]
    pub fn hi(&self) -> &[f64] {
        &self.hi
    }

    #[must_use]
    pub fn volume(&self) -> f64 {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| b - a)
            .product()
    }

    #[must_use]
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(v, (a, b))| *v >= *a && *v <= *b)
    }
}

/// Row-major regular lattice over a [`DomainBox`], endpoints included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr", into = "GridRepr")]
pub struct Grid {
    domain: DomainBox,
    shape: Vec<usize>,
    #[allow(clippy::struct_field_names)]
    axes: Vec<Vec<f64>>,
}

/// Serialized form: the axes are derived, only `{domain, shape}` persist.
#[derive(Serialize, Deserialize)]
struct GridRepr {
    domain: DomainBox,
    shape: Vec<usize>,
}

impl TryFrom<GridRepr> for Grid {
    type Error = Error;
    fn try_from(r: GridRepr) -> Result<Self> {
        Grid::new(r.domain, r.shape)
    }
}

impl From<Grid> for GridRepr {
    fn from(g: Grid) -> Self {
        GridRepr {
            domain: g.domain,
            shape: g.shape,
        }
    }
}

impl Grid {
    /// Build a grid with the given node count per axis (each at least 2).
    pub fn new(domain: DomainBox, shape: Vec<usize>) -> Result<Self> {
        if shape.len() != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                got: shape.len(),
            });
        }
        if shape.iter().any(|&m| m < 2) {
            return Err(Error::invalid("grid needs at least 2 nodes per axis"));
        }
        let axes = shape
            .iter()
            .zip(domain.lo.iter().zip(&domain.hi))
            .map(|(&m, (&a, &b))| {
                (0..m)
                    .map(|i| {
                        let f = i as f64 / (m - 1) as f64;
                        // Exact endpoints: f = 0 gives a, f = 1 gives b.
                        a * (1.0 - f) + b * f
                    })
                    .collect()
            })
            .collect();
        Ok(Grid {
            domain,
            shape,
            axes,
        })
    }

    /// Build with a target per-axis step; node counts are rounded up so the
    /// actual step never exceeds the request.
    pub fn with_step(domain: DomainBox, step: f64) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::invalid(format!(
                "grid step must be positive and finite, got {step}"
            )));
        }
        let shape = domain
            .lo
            .iter()
            .zip(&domain.hi)
            .map(|(a, b)| (((b - a) / step).ceil() as usize + 1).max(2))
            .collect();
        Grid::new(domain, shape)
    }

    #[must_use]
    pub fn domain(&self) -> &DomainBox {
        &self.domain
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    #[must_use]
    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    /// Total number of nodes.
    #[must_use]
    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        false // shape entries are >= 2 by construction
    }

    /// Coordinates along one axis.
    #[must_use]
    pub fn axis(&self, j: usize) -> &[f64] {
        &self.axes[j]
    }

    /// Per-axis spacing.
    #[must_use]
    pub fn step(&self, j: usize) -> f64 {
        (self.domain.hi[j] - self.domain.lo[j]) / (self.shape[j] - 1) as f64
    }

    /// Coordinates of the node at a flat row-major index.
    #[must_use]
    pub fn node(&self, mut flat: usize) -> Vec<f64> {
        let d = self.dim();
        let mut out = vec![0.0; d];
        for j in (0..d).rev() {
            let m = self.shape[j];
            out[j] = self.axes[j][flat % m];
            flat /= m;
        }
        out
    }

    /// Visit every node in flat order, reusing one coordinate buffer.
    pub fn for_each_node<F: FnMut(usize, &[f64])>(&self, mut f: F) {
        let d = self.dim();
        let mut idx = vec![0usize; d];
        let mut buf: Vec<f64> = (0..d).map(|j| self.axes[j][0]).collect();
        let total = self.len();
        for flat in 0..total {
            f(flat, &buf);
            // Odometer increment, last axis fastest.
            for j in (0..d).rev() {
                idx[j] += 1;
                if idx[j] < self.shape[j] {
                    buf[j] = self.axes[j][idx[j]];
                    break;
                }
                idx[j] = 0;
                buf[j] = self.axes[j][0];
            }
        }
    }

    /// Product-trapezoid integral of a field sampled on this grid.
    pub fn integrate(&self, field: &[f64]) -> Result<f64> {
        if field.len() != self.len() {
            return Err(Error::GridMismatch(format!(
                "field has {} values, grid has {} nodes",
                field.len(),
                self.len()
            )));
        }
        let d = self.dim();
        let mut idx = vec![0usize; d];
        let steps: Vec<f64> = (0..d).map(|j| self.step(j)).collect();
        let mut total = 0.0;
        for &v in field {
            let mut w = 1.0;
            for j in 0..d {
                let edge = idx[j] == 0 || idx[j] + 1 == self.shape[j];
                w *= if edge { 0.5 * steps[j] } else { steps[j] };
            }
            total += w * v;
            for j in (0..d).rev() {
                idx[j] += 1;
                if idx[j] < self.shape[j] {
                    break;
                }
                idx[j] = 0;
            }
        }
        Ok(total)
    }
}
