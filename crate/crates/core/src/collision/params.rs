use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// How correlations are carried from one collision step to the next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Carry the joint state of both system spins and the next environment pair.
    KeepCorrelations,
    /// Carry only the marginals `ρ_{s1}`, `ρ_{s2}` and `ρ_{e1' e2'}`.
    EraseCorrelations,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::KeepCorrelations => "keep",
            Strategy::EraseCorrelations => "erase",
        }
    }
}

/// Physical parameters of the collision model.
///
/// Coupling strengths enter only as dimensionless angles: `g_se = J δt_se`
/// and `g_ss = λ δt_ss`. Self-energies and the free-evolution time stay
/// separate since the self-energies also set the environment Gibbs weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub g_se: f64,
    pub g_ss: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub dt_s: f64,
    /// Partial-SWAP strength in `[0, π/2]`.
    pub gamma: f64,
    pub temp1: f64,
    pub temp2: f64,
    pub strategy: Strategy,
}

impl ModelParams {
    /// Detuned, weakly coupled spins with a strong environment partial SWAP
    /// and zero-temperature environments; the standard anti-synchronizing
    /// configuration.
    pub fn reference() -> Self {
        Self {
            g_se: 0.05,
            g_ss: 0.03,
            omega1: 1.0,
            omega2: 1.1,
            dt_s: 0.2,
            gamma: 0.95 * FRAC_PI_2,
            temp1: 0.0,
            temp2: 0.0,
            strategy: Strategy::KeepCorrelations,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("g_se", self.g_se),
            ("g_ss", self.g_ss),
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("dt_s", self.dt_s),
            ("gamma", self.gamma),
            ("temp1", self.temp1),
            ("temp2", self.temp2),
        ];
        if let Some((name, _)) = finite.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Domain(format!("{name} must be finite")));
        }
        if !(0.0..=FRAC_PI_2).contains(&self.gamma) {
            return Err(Error::Domain(format!("gamma = {} outside [0, pi/2]", self.gamma)));
        }
        if self.temp1 < 0.0 || self.temp2 < 0.0 {
            return Err(Error::Domain("temperatures must be non-negative".into()));
        }
        if self.dt_s <= 0.0 {
            return Err(Error::Domain(format!("dt_s = {} must be positive", self.dt_s)));
        }
        Ok(())
    }
}

/// Angles of the initial product state
/// `(cos θ₁|0⟩ + e^{iφ₁} sin θ₁|1⟩) ⊗ (cos θ₂|0⟩ + e^{iφ₂} sin θ₂|1⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialStateSpec {
    pub theta1: f64,
    pub phi1: f64,
    pub theta2: f64,
    pub phi2: f64,
}

impl Default for InitialStateSpec {
    /// `|+⟩ ⊗ |+⟩`.
    fn default() -> Self {
        Self { theta1: FRAC_PI_4, phi1: 0.0, theta2: FRAC_PI_4, phi2: 0.0 }
    }
}

impl InitialStateSpec {
    pub(crate) fn ket(theta: f64, phi: f64) -> [Complex64; 2] {
        [Complex64::new(theta.cos(), 0.0), Complex64::from_polar(theta.sin(), phi)]
    }

    pub fn ket1(&self) -> [Complex64; 2] {
        Self::ket(self.theta1, self.phi1)
    }

    pub fn ket2(&self) -> [Complex64; 2] {
        Self::ket(self.theta2, self.phi2)
    }

    pub fn validate(&self) -> Result<()> {
        if [self.theta1, self.phi1, self.theta2, self.phi2].iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("initial-state angles must be finite".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_parameters_are_valid() {
        ModelParams::reference().validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range_values() {
        let base = ModelParams::reference();
        for bad in [
            ModelParams { gamma: -0.1, ..base },
            ModelParams { gamma: 1.6, ..base },
            ModelParams { temp1: -1.0, ..base },
            ModelParams { dt_s: 0.0, ..base },
            ModelParams { g_se: f64::NAN, ..base },
        ] {
            assert!(matches!(bad.validate(), Err(Error::Domain(_))), "{bad:?}");
        }
        ModelParams { gamma: FRAC_PI_2, ..base }.validate().unwrap();
    }

    #[test]
    fn default_initial_state_is_plus_plus() {
        let k = InitialStateSpec::default().ket1();
        assert!((k[0].re - k[1].re).abs() < 1e-15 && k[1].im == 0.0);
        assert!((k[0].norm_sqr() + k[1].norm_sqr() - 1.0).abs() < 1e-15);
    }
}
