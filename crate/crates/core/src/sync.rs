//! Pearson correlation and its sliding-window series over collision index.

use crate::error::{Error, Result};

/// Sliding-window configuration: `width` samples per window, adjacent windows
/// sharing `overlap` samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WindowSpec {
    width: usize,
    overlap: usize,
}

impl WindowSpec {
    pub fn new(width: usize, overlap: usize) -> Result<Self> {
        if width < 2 {
            return Err(Error::Input(format!("window width {width} must be at least 2")));
        }
        if overlap >= width {
            return Err(Error::Input(format!("window overlap {overlap} must be smaller than the width {width}")));
        }
        Ok(Self { width, overlap })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn overlap(&self) -> usize {
        self.overlap
    }

    pub fn stride(&self) -> usize {
        self.width - self.overlap
    }
}

/// One window of a [`PearsonSeries`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PearsonPoint {
    /// Collision index (1-based) of the window's first sample.
    pub window_start: usize,
    /// `None` for windows where either signal is constant.
    pub c12: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PearsonSeries {
    pub points: Vec<PearsonPoint>,
}

impl PearsonSeries {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// First window start whose value satisfies `pred`.
    pub fn first_start_where(&self, pred: impl Fn(f64) -> bool) -> Option<usize> {
        self.points.iter().find(|p| p.c12.is_some_and(&pred)).map(|p| p.window_start)
    }
}

/// Pearson product-moment coefficient; `None` when either variance vanishes.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<Option<f64>> {
    if x.len() != y.len() {
        return Err(Error::Input(format!("series lengths differ: {} vs {}", x.len(), y.len())));
    }
    if x.len() < 2 {
        return Err(Error::Input("Pearson coefficient needs at least two samples".into()));
    }
    let constant = |s: &[f64]| s.iter().all(|&v| v == s[0]);
    if constant(x) || constant(y) {
        return Ok(None);
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(None);
    }
    let r = sxy / (sxx * syy).sqrt();
    if r.abs() - 1.0 > 1e-12 {
        return Err(Error::Numerical(format!("Pearson coefficient {r} outside [-1, 1]")));
    }
    Ok(Some(r.clamp(-1.0, 1.0)))
}

/// Pearson coefficient over windows starting at collisions `1, 1 + stride,
/// 1 + 2 stride, …`; the last window is the last one that fits completely.
pub fn sliding_pearson(x: &[f64], y: &[f64], w: WindowSpec) -> Result<PearsonSeries> {
    if x.len() != y.len() {
        return Err(Error::Input(format!("series lengths differ: {} vs {}", x.len(), y.len())));
    }
    if x.len() < w.width {
        return Err(Error::Input(format!(
            "series of length {} is shorter than one window of {}",
            x.len(),
            w.width
        )));
    }
    let points = (0..=x.len() - w.width)
        .step_by(w.stride())
        .map(|start| {
            let end = start + w.width;
            Ok(PearsonPoint { window_start: start + 1, c12: pearson(&x[start..end], &y[start..end])? })
        })
        .collect::<Result<_>>()?;
    Ok(PearsonSeries { points })
}

/// Last non-missing value of the series.
pub fn final_sync_value(series: &PearsonSeries) -> Result<Option<f64>> {
    if series.is_empty() {
        return Err(Error::Input("empty Pearson series".into()));
    }
    Ok(series.points.iter().rev().find_map(|p| p.c12))
}
