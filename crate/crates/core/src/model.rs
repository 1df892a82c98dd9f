//! Scenario definition and unit conventions.
//!
//! A [`WavepacketSpec`] fixes the intrinsic frequency `omega0` of the initial
//! packet, the natural frequency `omega` of the confining trap, the
//! position-momentum correlation `gamma`, and the unit constants. Frequencies
//! are angular (rad per time unit) in whatever abstract time unit the caller
//! uses; with the default natural units `hbar = mass = 1` every length is
//! measured against `sigma0 = sqrt(hbar / (mass * omega0))`.

use serde::{Deserialize, Serialize};

use crate::error::{finite, positive, Error, Result};

/// Relative tolerance used to decide `omega == omega0`.
pub const RESONANCE_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    hbar: f64,
    mass: f64,
}

impl UnitSystem {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        for (name, value) in [("hbar", hbar), ("mass", mass)] {
            finite(name, value)?;
            if value <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be strictly positive, got {value}"
                )));
            }
        }
        Ok(Self { hbar, mass })
    }

    /// `hbar = mass = 1`.
    pub const fn natural() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
        }
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::natural()
    }
}

/// A validated physical scenario. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WavepacketSpec {
    omega0: f64,
    omega: f64,
    gamma: f64,
    units: UnitSystem,
    sigma0: f64,
    tau0: f64,
}

impl WavepacketSpec {
    pub fn new(omega0: f64, omega: f64, gamma: f64, units: UnitSystem) -> Result<Self> {
        positive("omega0", omega0)?;
        positive("omega", omega)?;
        finite("gamma", gamma)?;
        let sigma0 = (units.hbar / (units.mass * omega0)).sqrt();
        Ok(Self {
            omega0,
            omega,
            gamma,
            units,
            sigma0,
            tau0: 1.0 / omega0,
        })
    }

    /// Scenario in natural units.
    pub fn natural(omega0: f64, omega: f64, gamma: f64) -> Result<Self> {
        Self::new(omega0, omega, gamma, UnitSystem::natural())
    }

    /// Resonant scenario `omega = omega0` in natural units.
    pub fn resonant(omega: f64, gamma: f64) -> Result<Self> {
        Self::natural(omega, omega, gamma)
    }

    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(self.omega0, omega, self.gamma, self.units)
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.omega0, self.omega, gamma, self.units)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn units(&self) -> UnitSystem {
        self.units
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    /// Rayleigh time `1 / omega0`.
    pub fn rayleigh_time(&self) -> f64 {
        self.tau0
    }

    /// Gouy period `pi / omega`; the phase gains `pi/2` over each one.
    pub fn period(&self) -> f64 {
        std::f64::consts::PI / self.omega
    }

    pub fn pearson(&self) -> PearsonCoefficient {
        PearsonCoefficient::from_gamma(self.gamma)
    }

    pub fn is_resonant(&self) -> bool {
        (self.omega - self.omega0).abs() <= RESONANCE_RTOL * self.omega0
    }

    pub(crate) fn require_resonance(&self) -> Result<()> {
        if self.is_resonant() {
            Ok(())
        } else {
            Err(Error::NotResonant {
                omega: self.omega,
                omega0: self.omega0,
            })
        }
    }
}

/// Pearson correlation coefficient between position and momentum.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct PearsonCoefficient(f64);

impl PearsonCoefficient {
    pub fn new(value: f64) -> Result<Self> {
        finite("pearson", value)?;
        if value.abs() < 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::PearsonOutOfRange(value))
        }
    }

    /// Total for finite `gamma`; saturates toward `±1` for huge `|gamma|`.
    pub fn from_gamma(gamma: f64) -> Self {
        Self(gamma / gamma.hypot(1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn to_gamma(self) -> f64 {
        let p = self.0;
        p / ((1.0 - p) * (1.0 + p)).sqrt()
    }
}

pub fn pearson_to_gamma(p: f64) -> Result<f64> {
    PearsonCoefficient::new(p).map(PearsonCoefficient::to_gamma)
}

pub fn gamma_to_pearson(gamma: f64) -> Result<f64> {
    finite("gamma", gamma)?;
    Ok(PearsonCoefficient::from_gamma(gamma).value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn identity_units() {
        let spec = WavepacketSpec::natural(1.0, 1.0, 0.0).unwrap();
        assert_eq!(spec.sigma0(), 1.0);
        assert_eq!(spec.rayleigh_time(), 1.0);
    }

    #[test]
    fn sigma0_for_scanned_intrinsic_frequency() {
        for gamma in [-1.0, 0.0, 1.0] {
            for omega in [0.5, 10.0, 30.0] {
                let spec = WavepacketSpec::natural(10.0, omega, gamma).unwrap();
                assert!((spec.sigma0() - 1.0 / 10f64.sqrt()).abs() < 1e-15);
            }
        }
        let spec = WavepacketSpec::natural(4.0, 1.0, 0.0).unwrap();
        assert_eq!(spec.sigma0(), 0.5);
    }

    #[test]
    fn rejects_bad_frequencies() {
        assert!(matches!(
            WavepacketSpec::natural(0.0, 1.0, 0.0),
            Err(Error::NonPositiveFrequency { name: "omega0", .. })
        ));
        assert!(matches!(
            WavepacketSpec::natural(1.0, -2.0, 0.0),
            Err(Error::NonPositiveFrequency { name: "omega", .. })
        ));
        assert!(matches!(
            WavepacketSpec::natural(f64::NAN, 1.0, 0.0),
            Err(Error::NonFiniteParameter { .. })
        ));
        assert!(matches!(
            WavepacketSpec::natural(1.0, f64::INFINITY, 0.0),
            Err(Error::NonFiniteParameter { .. })
        ));
        assert!(matches!(
            WavepacketSpec::natural(1.0, 1.0, f64::NAN),
            Err(Error::NonFiniteParameter { name: "gamma", .. })
        ));
        assert!(UnitSystem::new(0.0, 1.0).is_err());
        assert!(UnitSystem::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn pearson_examples() {
        assert_eq!(pearson_to_gamma(0.0).unwrap(), 0.0);
        assert!((pearson_to_gamma(FRAC_1_SQRT_2).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson_to_gamma(-FRAC_1_SQRT_2).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(gamma_to_pearson(0.0).unwrap(), 0.0);
        assert!((gamma_to_pearson(1.0).unwrap() - 0.7071067811865476).abs() < 1e-15);
        assert!(matches!(pearson_to_gamma(1.0), Err(Error::PearsonOutOfRange(_))));
        assert!(matches!(pearson_to_gamma(-1.5), Err(Error::PearsonOutOfRange(_))));
        assert!(gamma_to_pearson(f64::INFINITY).is_err());
    }

    #[test]
    fn pearson_approaches_one_monotonically() {
        let mut last = 0.0;
        for gamma in [1.0, 10.0, 1e3, 1e6, 1e8] {
            let p = gamma_to_pearson(gamma).unwrap();
            assert!(p > last && p < 1.0 + f64::EPSILON);
            last = p;
        }
    }

    #[test]
    fn resonance_detection() {
        let spec = WavepacketSpec::natural(1.0, 1.0 + 1e-13, 0.3).unwrap();
        assert!(spec.is_resonant());
        let spec = WavepacketSpec::natural(1.0, 1.0 + 1e-9, 0.3).unwrap();
        assert!(!spec.is_resonant());
    }

    proptest! {
        #[test]
        fn pearson_round_trip(p in -0.999f64..0.999) {
            let back = gamma_to_pearson(pearson_to_gamma(p).unwrap()).unwrap();
            prop_assert!((back - p).abs() <= 1e-12);
        }

        #[test]
        fn sigma0_satisfies_hbar_identity(omega0 in 1e-3f64..1e3, hbar in 1e-2f64..1e2, mass in 1e-2f64..1e2) {
            let spec = WavepacketSpec::new(omega0, 1.0, 0.0, UnitSystem::new(hbar, mass).unwrap()).unwrap();
            let lhs = mass * omega0 * spec.sigma0().powi(2);
            prop_assert!((lhs - hbar).abs() <= 1e-13 * hbar);
        }
    }
}
