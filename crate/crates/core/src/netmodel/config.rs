use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every parameter of one simulated cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub cell_radius_m: f64,
    pub num_cellular: usize,
    pub num_d2d: usize,
    /// Upper bound on the transmitter to receiver separation of a D2D pair.
    pub d2d_max_dist_m: f64,
    pub bs_power_dbm: f64,
    pub d2d_power_dbm: f64,
    /// Thermal noise power per resource.
    pub noise_dbm: f64,
    pub pathloss_exp: f64,
    /// Loss at the 1 m reference distance.
    pub pathloss_const_db: f64,
    pub shadowing_sigma_db: f64,
    /// Multiply each link by a unit-mean exponential (Rayleigh power) draw.
    pub fading_enabled: bool,
    /// Distances below this are clamped before evaluating path loss.
    pub min_dist_m: f64,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            cell_radius_m: 500.0,
            num_cellular: 4,
            num_d2d: 8,
            d2d_max_dist_m: 20.0,
            bs_power_dbm: 46.0,
            d2d_power_dbm: 23.0,
            noise_dbm: -114.0,
            pathloss_exp: 3.5,
            pathloss_const_db: -30.0,
            shadowing_sigma_db: 8.0,
            fading_enabled: false,
            min_dist_m: 1.0,
            seed: 1,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        fn check(ok: bool, field: &'static str, constraint: &'static str) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::Config { field, constraint })
            }
        }

        check(
            self.cell_radius_m.is_finite() && self.cell_radius_m > 0.0,
            "cell_radius_m",
            "cell_radius_m > 0",
        )?;
        check(
            self.d2d_max_dist_m.is_finite() && self.d2d_max_dist_m > 0.0,
            "d2d_max_dist_m",
            "d2d_max_dist_m > 0",
        )?;
        check(
            self.num_d2d == 0 || self.num_cellular >= 1,
            "num_cellular",
            "num_cellular >= 1 when num_d2d >= 1",
        )?;
        check(
            self.pathloss_exp.is_finite() && self.pathloss_exp > 0.0,
            "pathloss_exp",
            "pathloss_exp > 0",
        )?;
        check(
            self.shadowing_sigma_db.is_finite() && self.shadowing_sigma_db >= 0.0,
            "shadowing_sigma_db",
            "shadowing_sigma_db >= 0",
        )?;
        check(
            self.min_dist_m.is_finite() && self.min_dist_m > 0.0,
            "min_dist_m",
            "min_dist_m > 0",
        )?;
        check(
            self.bs_power_dbm.is_finite(),
            "bs_power_dbm",
            "finite value",
        )?;
        check(
            self.d2d_power_dbm.is_finite(),
            "d2d_power_dbm",
            "finite value",
        )?;
        check(self.noise_dbm.is_finite(), "noise_dbm", "finite value")?;
        check(
            self.pathloss_const_db.is_finite(),
            "pathloss_const_db",
            "finite value",
        )?;
        Ok(())
    }

    /// Linear power levels derived from the dBm fields.
    pub fn powers(&self) -> PowerProfile {
        PowerProfile {
            bs_power_w: dbm_to_watts(self.bs_power_dbm),
            d2d_power_w: dbm_to_watts(self.d2d_power_dbm),
            noise_w: dbm_to_watts(self.noise_dbm),
        }
    }
}

/// Transmit and noise powers in watts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerProfile {
    pub bs_power_w: f64,
    pub d2d_power_w: f64,
    pub noise_w: f64,
}

impl PowerProfile {
    pub fn new(bs_power_w: f64, d2d_power_w: f64, noise_w: f64) -> Result<Self> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(bs_power_w) {
            return Err(Error::Config {
                field: "bs_power_w",
                constraint: "bs_power_w > 0",
            });
        }
        if !positive(d2d_power_w) {
            return Err(Error::Config {
                field: "d2d_power_w",
                constraint: "d2d_power_w > 0",
            });
        }
        if !positive(noise_w) {
            return Err(Error::Config {
                field: "noise_w",
                constraint: "noise_w > 0",
            });
        }
        Ok(Self {
            bs_power_w,
            d2d_power_w,
            noise_w,
        })
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}
