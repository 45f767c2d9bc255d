use num_complex::Complex64;

use super::eig::{hermitian_eig, POSITIVITY_TOL};
use super::matrix::{kron, trace_out_positions, ComplexMatrix};
use crate::error::{Error, Result};

/// Ordered qubit labels. The leftmost label is the most significant bit of a
/// computational-basis index, and `|0>` is the `+1` eigenvector of `σᶻ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubsystemLayout {
    labels: Vec<String>,
}

impl SubsystemLayout {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::Layout("layout has no subsystems".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Layout(format!("duplicate label `{l}`")));
            }
        }
        Ok(Self { labels })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        1 << self.labels.len()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Concatenation `self ⊗ other`.
    pub fn join(&self, other: &Self) -> Result<Self> {
        Self::new(self.labels.iter().chain(&other.labels).cloned())
    }

    /// Same positions, new names.
    pub fn relabel(&self, from: &str, to: &str) -> Result<Self> {
        let pos = self.position(from).ok_or_else(|| Error::UnknownLabel(from.to_string()))?;
        let mut labels = self.labels.clone();
        labels[pos] = to.to_string();
        Self::new(labels)
    }
}

/// Tolerances a stored state must satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub hermiticity: f64,
    pub trace: f64,
    pub min_eigenvalue: f64,
}

impl Tolerances {
    /// Admission tolerances for freshly constructed states.
    pub const STRICT: Self = Self { hermiticity: 1e-12, trace: 1e-12, min_eigenvalue: -1e-10 };
    /// Tolerances for states produced by long iterated evolution.
    pub const DRIFT: Self = Self { hermiticity: 1e-10, trace: 1e-10, min_eigenvalue: -POSITIVITY_TOL };
}

/// Measured deviations of a matrix from being a density operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateHealth {
    pub hermiticity: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl StateHealth {
    pub fn measure(m: &ComplexMatrix) -> Result<Self> {
        let hermiticity = m.hermiticity_deviation();
        let tr = m.trace();
        let trace_error = (tr - Complex64::new(1.0, 0.0)).norm();
        let mut h = m.clone();
        h.hermitize();
        let min_eigenvalue = hermitian_eig(&h)?.min_value();
        Ok(Self { hermiticity, trace_error, min_eigenvalue })
    }

    /// First violated invariant, if any.
    pub fn violation(&self, tol: &Tolerances) -> Option<(&'static str, f64)> {
        if !(self.hermiticity <= tol.hermiticity) {
            Some(("hermiticity", self.hermiticity))
        } else if !(self.trace_error <= tol.trace) {
            Some(("trace", self.trace_error))
        } else if !(self.min_eigenvalue >= tol.min_eigenvalue) {
            Some(("positivity", self.min_eigenvalue))
        } else {
            None
        }
    }
}

/// A density operator over a labeled qubit layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    layout: SubsystemLayout,
}

impl DensityMatrix {
    /// Validates against [`Tolerances::STRICT`].
    pub fn new(matrix: ComplexMatrix, layout: SubsystemLayout) -> Result<Self> {
        Self::with_tolerances(matrix, layout, &Tolerances::STRICT)
    }

    pub fn with_tolerances(matrix: ComplexMatrix, layout: SubsystemLayout, tol: &Tolerances) -> Result<Self> {
        Self::check_shape(&matrix, &layout)?;
        let health = StateHealth::measure(&matrix)?;
        match health.violation(tol) {
            None => Ok(Self { matrix, layout }),
            Some(("hermiticity", v)) => Err(Error::NotHermitian(v)),
            Some(("trace", _)) => Err(Error::BadTrace(matrix.trace().re)),
            Some((_, v)) => Err(Error::NotPositive(v)),
        }
    }

    /// Skips the spectral check; for states derived from valid ones by
    /// structure-preserving maps.
    pub(crate) fn from_parts_unchecked(matrix: ComplexMatrix, layout: SubsystemLayout) -> Self {
        debug_assert_eq!(matrix.rows(), layout.dim());
        Self { matrix, layout }
    }

    fn check_shape(matrix: &ComplexMatrix, layout: &SubsystemLayout) -> Result<()> {
        if !matrix.is_square() || matrix.rows() != layout.dim() {
            return Err(Error::Shape(format!(
                "{}x{} matrix does not match a {}-qubit layout",
                matrix.rows(),
                matrix.cols(),
                layout.len()
            )));
        }
        Ok(())
    }

    /// Pure state from a normalized ket.
    pub fn pure(ket: &[Complex64], layout: SubsystemLayout) -> Result<Self> {
        Self::new(ComplexMatrix::projector(ket), layout)
    }

    pub fn maximally_mixed(layout: SubsystemLayout) -> Self {
        let d = layout.dim();
        let m = ComplexMatrix::identity(d).scale(Complex64::new(1.0 / d as f64, 0.0));
        Self { matrix: m, layout }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn into_parts(self) -> (ComplexMatrix, SubsystemLayout) {
        (self.matrix, self.layout)
    }

    pub fn health(&self) -> Result<StateHealth> {
        StateHealth::measure(&self.matrix)
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let layout = self.layout.join(&other.layout)?;
        Ok(Self { matrix: kron(&self.matrix, &other.matrix), layout })
    }

    /// `Tr[ρ²]`.
    pub fn purity(&self) -> f64 {
        let m = &self.matrix;
        let n = m.rows();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += (m[(i, j)] * m[(j, i)]).re;
            }
        }
        s
    }

    pub fn relabel(&self, from: &str, to: &str) -> Result<Self> {
        Ok(Self { matrix: self.matrix.clone(), layout: self.layout.relabel(from, to)? })
    }
}

/// Reduced state on `keep`, in the order those labels appear in the layout.
pub fn partial_trace(rho: &DensityMatrix, keep: &[&str]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::Input("partial trace must keep at least one subsystem".into()));
    }
    let mut positions = Vec::with_capacity(keep.len());
    for &label in keep {
        let p = rho.layout.position(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        if positions.contains(&p) {
            return Err(Error::Layout(format!("label `{label}` kept twice")));
        }
        positions.push(p);
    }
    positions.sort_unstable();
    let layout = SubsystemLayout::new(positions.iter().map(|&p| rho.layout.labels[p].clone()))?;
    let m = trace_out_positions(&rho.matrix, &positions, rho.layout.len());
    Ok(DensityMatrix::from_parts_unchecked(m, layout))
}

/// Base-2 von Neumann entropy; `0 log 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let eig = hermitian_eig(&rho.matrix)?;
    let s: f64 = eig.values.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum();
    Ok(s.max(0.0))
}
