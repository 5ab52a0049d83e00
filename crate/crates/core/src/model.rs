//! Physical parameters and the map to the dimensionless radial problem.
//!
//! Units are natural (`hbar = c = 1`). The radial equation after the change
//! of variables `r = sqrt(m * varpi) * rho` reads
//!
//! ```text
//! f'' + f'/r - gamma^2/r^2 f - r^2 f + theta/r f + beta/(m varpi) f = 0
//! ```
//!
//! with
//!
//! ```text
//! varpi^2 = omega^2/4 + Omega*omega      gamma^2 = l^2 + 2 m tau^2
//! beta    = 2 m E + 2 m Omega l + m omega l
//! theta   = 2 m mu / sqrt(m varpi)       omega   = alpha chi B0 / m
//! ```
//!
//! and the Kratzer potential `V = -mu/rho + tau^2/rho^2`, `mu = 2 D a`,
//! `tau^2 = D a^2`. The `alpha E^2 / 2` energy shift and the motion along `z`
//! are not part of the model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

fn finite<T: Real>(value: T, field: &'static str) -> Result<T> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { field })
    }
}

/// Kratzer potential `-mu/rho + tau^2/rho^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kratzer<T> {
    /// Coulomb-like strength `mu = 2 D a`.
    pub mu: T,
    /// Inverse-square strength `tau^2 = D a^2`.
    pub tau2: T,
}

impl<T: Real> Kratzer<T> {
    /// From the well depth `D` and range `a`.
    pub fn from_depth_range(depth: T, range: T) -> Result<Self> {
        finite(depth, "D")?;
        finite(range, "a")?;
        if depth < T::zero() {
            return Err(Error::OutOfRange { field: "D", reason: "must be >= 0".into() });
        }
        if range < T::zero() {
            return Err(Error::OutOfRange { field: "a", reason: "must be >= 0".into() });
        }
        let two = T::lit(2.0);
        Ok(Self { mu: two * depth * range, tau2: depth * range * range })
    }

    /// Directly from `mu` and `tau^2`. This also covers the `tau -> 0` limit at
    /// fixed `mu`, which `(D, a)` can only reach asymptotically.
    pub fn from_strengths(mu: T, tau2: T) -> Result<Self> {
        finite(mu, "mu")?;
        finite(tau2, "tau2")?;
        if mu < T::zero() {
            return Err(Error::OutOfRange { field: "mu", reason: "must be >= 0".into() });
        }
        if tau2 < T::zero() {
            return Err(Error::OutOfRange { field: "tau2", reason: "must be >= 0".into() });
        }
        Ok(Self { mu, tau2 })
    }
}

/// Laboratory inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConfig<T> {
    /// Bare mass `M`.
    pub mass: T,
    /// Dielectric polarizability `alpha`.
    pub polarizability: T,
    /// Volume charge parameter `chi`.
    pub charge_density: T,
    /// Magnetic field `B0`.
    pub magnetic_field: T,
    /// Rotation rate `Omega` about `z`; the sign is the orientation.
    pub rotation: T,
    pub kratzer: Kratzer<T>,
    /// Replaces `M + alpha B0^2` when set.
    pub effective_mass_override: Option<T>,
}

impl<T: Real> PhysicalConfig<T> {
    pub fn new(
        mass: T,
        polarizability: T,
        charge_density: T,
        magnetic_field: T,
        rotation: T,
        kratzer: Kratzer<T>,
    ) -> Result<Self> {
        let config = Self {
            mass,
            polarizability,
            charge_density,
            magnetic_field,
            rotation,
            kratzer,
            effective_mass_override: None,
        };
        config.validate()?;
        Ok(config)
    }

    /// A config stated directly in terms of the effective mass, rotation rate
    /// and Kratzer strengths; the field inputs are zero.
    pub fn from_effective(mass: T, rotation: T, mu: T, tau2: T) -> Result<Self> {
        let mut config = Self::new(
            mass,
            T::zero(),
            T::zero(),
            T::zero(),
            rotation,
            Kratzer::from_strengths(mu, tau2)?,
        )?;
        config.effective_mass_override = Some(mass);
        config.validate()?;
        Ok(config)
    }

    pub fn with_rotation(mut self, rotation: T) -> Self {
        self.rotation = rotation;
        self
    }

    pub fn validate(&self) -> Result<()> {
        finite(self.mass, "M")?;
        finite(self.polarizability, "alpha")?;
        finite(self.charge_density, "chi")?;
        finite(self.magnetic_field, "B0")?;
        finite(self.rotation, "Omega")?;
        finite(self.kratzer.mu, "mu")?;
        finite(self.kratzer.tau2, "tau2")?;
        if self.kratzer.mu < T::zero() || self.kratzer.tau2 < T::zero() {
            return Err(Error::OutOfRange {
                field: "kratzer",
                reason: "mu and tau2 must be >= 0".into(),
            });
        }
        if let Some(m) = self.effective_mass_override {
            finite(m, "m_effective")?;
            if m <= T::zero() {
                return Err(Error::OutOfRange { field: "m_effective", reason: "must be > 0".into() });
            }
        }
        effective_mass(self.mass, self.polarizability, self.magnetic_field)?;
        Ok(())
    }

    /// `m = M + alpha B0^2`, or the override.
    pub fn effective_mass(&self) -> T {
        match self.effective_mass_override {
            Some(m) => m,
            None => self.mass + self.polarizability * self.magnetic_field * self.magnetic_field,
        }
    }

    /// The laboratory cyclotron frequency `alpha chi B0 / m`.
    pub fn cyclotron_frequency(&self) -> T {
        self.polarizability * self.charge_density * self.magnetic_field / self.effective_mass()
    }

    pub fn gamma(&self, l: i64) -> T {
        angular_gamma(self.effective_mass(), self.kratzer.tau2, l)
    }
}

/// Effective mass `m = M + alpha B0^2`.
pub fn effective_mass<T: Real>(mass: T, polarizability: T, magnetic_field: T) -> Result<T> {
    finite(mass, "M")?;
    finite(polarizability, "alpha")?;
    finite(magnetic_field, "B0")?;
    if mass <= T::zero() {
        return Err(Error::OutOfRange { field: "M", reason: "must be > 0".into() });
    }
    if polarizability < T::zero() {
        return Err(Error::OutOfRange { field: "alpha", reason: "must be >= 0".into() });
    }
    Ok(mass + polarizability * magnetic_field * magnetic_field)
}

/// Cyclotron frequency `omega = alpha chi B0 / m`; the sign follows `chi B0`.
pub fn cyclotron_frequency<T: Real>(polarizability: T, charge_density: T, magnetic_field: T, mass: T) -> Result<T> {
    finite(polarizability, "alpha")?;
    finite(charge_density, "chi")?;
    finite(magnetic_field, "B0")?;
    finite(mass, "m")?;
    if mass <= T::zero() {
        return Err(Error::OutOfRange { field: "m", reason: "must be > 0".into() });
    }
    Ok(polarizability * charge_density * magnetic_field / mass)
}

/// `gamma = sqrt(l^2 + 2 m tau^2)`.
pub fn angular_gamma<T: Real>(mass: T, tau2: T, l: i64) -> T {
    let l = T::from_int(l);
    (l * l + T::lit(2.0) * mass * tau2).sqrt()
}

/// `omega^2/4 + Omega*omega`, evaluated in factored form.
pub fn varpi_squared<T: Real>(omega: T, rotation: T) -> T {
    let half = omega / T::lit(2.0);
    half * (half + T::lit(2.0) * rotation)
}

/// Per-channel derived quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelParams<T> {
    /// Effective mass.
    pub m: T,
    pub omega: T,
    #[serde(rename = "Omega")]
    pub rotation: T,
    pub l: i64,
    pub gamma: T,
    pub mu: T,
    pub tau2: T,
    pub varpi: T,
    pub theta: T,
}

impl<T: Real> ChannelParams<T> {
    /// Channel with a known `varpi`, skipping the `omega -> varpi` square root.
    /// The caller guarantees `varpi^2 = omega^2/4 + Omega*omega`.
    pub fn with_varpi(config: &PhysicalConfig<T>, l: i64, omega: T, varpi: T) -> Result<Self> {
        if !(varpi > T::zero()) || !varpi.is_finite() {
            return Err(Error::NonConfining { varpi_squared: (varpi * varpi).to_f64_lossy() });
        }
        let m = config.effective_mass();
        let mu = config.kratzer.mu;
        Ok(Self {
            m,
            omega,
            rotation: config.rotation,
            l,
            gamma: config.gamma(l),
            mu,
            tau2: config.kratzer.tau2,
            varpi,
            theta: T::lit(2.0) * m * mu / (m * varpi).sqrt(),
        })
    }

    /// `lambda = beta / (m varpi)` of the dimensionless radial equation.
    pub fn lambda_from_nu(&self, nu: T) -> T {
        nu + T::lit(2.0) + T::lit(2.0) * self.gamma
    }
}

/// Full channel parameters for angular momentum `l` at cyclotron frequency `omega`.
pub fn channel_params<T: Real>(config: &PhysicalConfig<T>, l: i64, omega: T) -> Result<ChannelParams<T>> {
    config.validate()?;
    finite(omega, "omega")?;
    let varpi2 = varpi_squared(omega, config.rotation);
    if !(varpi2 > T::zero()) {
        return Err(Error::NonConfining { varpi_squared: varpi2.to_f64_lossy() });
    }
    ChannelParams::with_varpi(config, l, omega, varpi2.sqrt())
}

/// An energy together with the `beta` and `nu` it corresponds to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyRecord<T> {
    pub l: i64,
    pub energy: T,
    pub beta: T,
    pub nu: T,
}

impl<T: Real> EnergyRecord<T> {
    /// `Some(n)` when `nu = 2n` exactly with `n >= 0`.
    pub fn radial_index(&self) -> Option<u32> {
        let half = self.nu / T::lit(2.0);
        if half >= T::zero() && half.fract() == T::zero() {
            half.to_u32()
        } else {
            None
        }
    }
}

/// Inverts `nu = beta/(m varpi) - 2 - 2 gamma` and `beta = 2mE + 2m Omega l + m omega l`.
pub fn energy_from_nu<T: Real>(ch: &ChannelParams<T>, nu: T) -> EnergyRecord<T> {
    let two = T::lit(2.0);
    let l = T::from_int(ch.l);
    let beta = ch.lambda_from_nu(nu) * ch.m * ch.varpi;
    let energy = (beta - two * ch.m * ch.rotation * l - ch.m * ch.omega * l) / (two * ch.m);
    EnergyRecord { l: ch.l, energy, beta, nu }
}

/// `beta` for an energy `E`.
pub fn beta_from_energy<T: Real>(ch: &ChannelParams<T>, energy: T) -> T {
    let two = T::lit(2.0);
    let l = T::from_int(ch.l);
    two * ch.m * energy + two * ch.m * ch.rotation * l + ch.m * ch.omega * l
}

/// `nu` for an energy `E`; inverse of [`energy_from_nu`].
pub fn nu_from_energy<T: Real>(ch: &ChannelParams<T>, energy: T) -> T {
    beta_from_energy(ch, energy) / (ch.m * ch.varpi) - T::lit(2.0) - T::lit(2.0) * ch.gamma
}

/// Flat JSON configuration file.
///
/// The Kratzer potential is given either as `D` and `a` or as `mu` and `tau2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(rename = "M")]
    pub mass: f64,
    pub alpha: f64,
    pub chi: f64,
    #[serde(rename = "B0")]
    pub b0: f64,
    #[serde(rename = "Omega")]
    pub omega_rotation: f64,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<f64>,
    #[serde(rename = "a", default, skip_serializing_if = "Option::is_none")]
    pub range: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_effective: Option<f64>,
}

impl ConfigFile {
    pub fn into_config(&self) -> Result<PhysicalConfig<f64>> {
        let kratzer = match (self.depth, self.range, self.mu, self.tau2) {
            (Some(d), Some(a), None, None) => Kratzer::from_depth_range(d, a)?,
            (None, None, Some(mu), Some(tau2)) => Kratzer::from_strengths(mu, tau2)?,
            _ => {
                return Err(Error::OutOfRange {
                    field: "D/a",
                    reason: "give either both `D` and `a` or both `mu` and `tau2`".into(),
                })
            }
        };
        let config = PhysicalConfig {
            mass: self.mass,
            polarizability: self.alpha,
            charge_density: self.chi,
            magnetic_field: self.b0,
            rotation: self.omega_rotation,
            kratzer,
            effective_mass_override: self.m_effective,
        };
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked(l_rotation: f64) -> PhysicalConfig<f64> {
        PhysicalConfig::from_effective(1.0, l_rotation, 1.0, 0.0).unwrap()
    }

    #[test]
    fn effective_mass_examples() {
        assert_eq!(effective_mass(1.0, 0.0, 5.0).unwrap(), 1.0);
        assert_eq!(effective_mass(1.0, 0.5, 2.0).unwrap(), 3.0);
        assert_eq!(effective_mass(2.0, 1.0, 0.0).unwrap(), 2.0);
        assert!(matches!(effective_mass(f64::NAN, 0.0, 0.0), Err(Error::NonFinite { field: "M" })));
        assert!(effective_mass(0.0, 0.0, 1.0).is_err());
        assert!(effective_mass(1.0, -0.1, 1.0).is_err());
    }

    #[test]
    fn cyclotron_frequency_examples() {
        assert_eq!(cyclotron_frequency(0.0, 1.0, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(cyclotron_frequency(1.0, 2.0, 3.0, 2.0).unwrap(), 3.0);
        assert_eq!(cyclotron_frequency(1.0, -2.0, 3.0, 2.0).unwrap(), -3.0);
        assert!(cyclotron_frequency(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(cyclotron_frequency(1.0, 1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn channel_params_examples() {
        let config = worked(1.0);
        let ch = channel_params(&config, 2, 0.7).unwrap();
        assert_eq!(ch.gamma, 2.0);

        let omega = 2.0 * (-1.0 + 5f64.sqrt());
        let ch = channel_params(&config, 0, omega).unwrap();
        assert!((ch.varpi - 2.0).abs() < 1e-15);
        // theta = 2 m mu / sqrt(m varpi) = 2/sqrt(2)
        assert!((ch.theta - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn non_confining_channel_rejected() {
        // omega^2/4 + Omega omega <= 0 for omega in [-4 Omega, 0]
        let config = worked(1.0);
        assert!(matches!(channel_params(&config, 0, -1.0), Err(Error::NonConfining { .. })));
        assert!(matches!(channel_params(&config, 0, 0.0), Err(Error::NonConfining { .. })));
        assert!(matches!(channel_params(&config, 0, -4.0), Err(Error::NonConfining { .. })));
        // negative rotation is admissible as long as varpi^2 > 0
        let ch = channel_params(&worked(-1.0), 0, 5.0).unwrap();
        assert!((ch.varpi * ch.varpi - (6.25 - 5.0)).abs() < 1e-14);
    }

    #[test]
    fn energy_from_nu_examples() {
        // no rotation, l = 0: E = (omega/2)(n + gamma + 1)
        let config = PhysicalConfig::from_effective(1.3, 0.0, 0.8, 0.2).unwrap();
        let ch = channel_params(&config, 0, 3.0).unwrap();
        for n in 1..5u32 {
            let rec = energy_from_nu(&ch, 2.0 * n as f64);
            let expected = 1.5 * (n as f64 + ch.gamma + 1.0);
            assert!((rec.energy - expected).abs() < 1e-13);
            assert_eq!(rec.radial_index(), Some(n));
        }

        // worked config, l = 0: varpi = 2, E = 4
        let config = worked(1.0);
        let omega = 2.0 * (-1.0 + 5f64.sqrt());
        let rec = energy_from_nu(&channel_params(&config, 0, omega).unwrap(), 2.0);
        assert!((rec.energy - 4.0).abs() < 1e-14);

        // worked config, l = 1: varpi = 2/3
        let varpi = 2.0 / 3.0;
        let omega = 2.0 * (-1.0 + (1.0f64 + varpi * varpi).sqrt());
        let ch = channel_params(&config, 1, omega).unwrap();
        let rec = energy_from_nu(&ch, 2.0);
        assert!((rec.energy - (2.0 - 13f64.sqrt() / 3.0)).abs() < 1e-14);
        assert!((rec.energy - 0.7981496).abs() < 1e-7);
    }

    #[test]
    fn energy_from_nu_matches_level_formula() {
        let config = PhysicalConfig::from_effective(2.0, -0.4, 1.1, 0.3).unwrap();
        let ch = channel_params(&config, -2, 3.0).unwrap();
        for n in 1..6 {
            let rec = energy_from_nu(&ch, 2.0 * n as f64);
            let formula = ch.varpi * (n as f64 + ch.gamma + 1.0) - ch.omega * ch.l as f64 / 2.0
                - ch.rotation * ch.l as f64;
            assert!((rec.energy - formula).abs() < 1e-13 * formula.abs().max(1.0));
        }
    }

    #[test]
    fn config_file_forms() {
        let json = r#"{"M": 1.0, "alpha": 0.5, "chi": 2.0, "B0": 2.0, "Omega": 0.3, "D": 2.0, "a": 0.5}"#;
        let file: ConfigFile = serde_json::from_str(json).unwrap();
        let config = file.into_config().unwrap();
        assert_eq!(config.effective_mass(), 3.0);
        assert_eq!(config.kratzer.mu, 2.0);
        assert_eq!(config.kratzer.tau2, 0.5);
        assert!((config.cyclotron_frequency() - 2.0 / 3.0).abs() < 1e-15);

        let json = r#"{"M": 1.0, "alpha": 0.0, "chi": 0.0, "B0": 0.0, "Omega": 1.0, "mu": 1.0, "tau2": 0.0, "m_effective": 2.5}"#;
        let config = serde_json::from_str::<ConfigFile>(json).unwrap().into_config().unwrap();
        assert_eq!(config.effective_mass(), 2.5);
        assert_eq!(config.kratzer.tau2, 0.0);

        let mixed = r#"{"M": 1.0, "alpha": 0.0, "chi": 0.0, "B0": 0.0, "Omega": 1.0, "D": 1.0, "tau2": 0.0}"#;
        assert!(serde_json::from_str::<ConfigFile>(mixed).unwrap().into_config().is_err());
        let unknown = r#"{"M": 1.0, "alpha": 0.0, "chi": 0.0, "B0": 0.0, "Omega": 1.0, "D": 1.0, "a": 1.0, "k": 0}"#;
        assert!(serde_json::from_str::<ConfigFile>(unknown).is_err());
        let negative = r#"{"M": 1.0, "alpha": 0.0, "chi": 0.0, "B0": 0.0, "Omega": 1.0, "D": -1.0, "a": 1.0}"#;
        assert!(serde_json::from_str::<ConfigFile>(negative).unwrap().into_config().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn nu_round_trip(
                m in 0.1f64..10.0,
                rotation in -3.0f64..3.0,
                mu in 0.0f64..4.0,
                tau2 in 0.0f64..2.0,
                l in -5i64..=5,
                omega in 0.05f64..20.0,
                nu in -4.0f64..40.0,
            ) {
                let config = PhysicalConfig::from_effective(m, rotation, mu, tau2).unwrap();
                prop_assume!(varpi_squared(omega, rotation) > 1e-3);
                let ch = channel_params(&config, l, omega).unwrap();
                let rec = energy_from_nu(&ch, nu);
                let back = nu_from_energy(&ch, rec.energy);
                let scale = nu.abs().max(2.0 + 2.0 * ch.gamma);
                prop_assert!((back - nu).abs() <= 1e-12 * scale);
            }

            #[test]
            fn channel_invariants(
                m in 0.1f64..10.0,
                rotation in -3.0f64..3.0,
                mu in 0.0f64..4.0,
                tau2 in 0.0f64..2.0,
                l in -5i64..=5,
                omega in -20.0f64..20.0,
            ) {
                let config = PhysicalConfig::from_effective(m, rotation, mu, tau2).unwrap();
                prop_assume!(varpi_squared(omega, rotation) > 1e-6);
                let ch = channel_params(&config, l, omega).unwrap();
                let g2 = (l * l) as f64 + 2.0 * m * tau2;
                prop_assert!((ch.gamma * ch.gamma - g2).abs() <= 1e-13 * g2.max(1.0));
                let v2 = omega * omega / 4.0 + rotation * omega;
                prop_assert!((ch.varpi * ch.varpi - v2).abs() <= 1e-12 * (omega * omega / 4.0 + (rotation * omega).abs()));
                prop_assert!((ch.theta * (m * ch.varpi).sqrt() - 2.0 * m * mu).abs() <= 1e-13 * (2.0 * m * mu).max(1e-300));
                let mirrored = channel_params(&config, -l, omega).unwrap();
                prop_assert_eq!(mirrored.gamma, ch.gamma);
            }

            #[test]
            fn gamma_monotone_in_inverse_square_strength(l in -6i64..=6, a in 0.0f64..5.0, b in 0.0f64..5.0) {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                prop_assert!(angular_gamma(1.0, lo, l) <= angular_gamma(1.0, hi, l));
                prop_assert_eq!(angular_gamma(1.0, 0.0, l), l.abs() as f64);
            }

            #[test]
            fn varpi_without_rotation_is_half_omega(omega in 1e-3f64..1e3) {
                let config = PhysicalConfig::from_effective(1.0, 0.0, 1.0, 0.0).unwrap();
                let ch = channel_params(&config, 0, omega).unwrap();
                prop_assert_eq!(ch.varpi, omega / 2.0);
            }
        }
    }
}
