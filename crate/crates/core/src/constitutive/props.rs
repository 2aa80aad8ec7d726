use serde::{Deserialize, Serialize};

use crate::config::KeyValues;
use crate::error::{Error, Result};

/// Elastoplastic bulk material (plane stress, linear isotropic hardening).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BulkProps {
    /// Young's modulus (MPa).
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
    /// Initial yield stress (MPa).
    pub yield_stress: f64,
    /// Linear isotropic hardening modulus (MPa).
    pub hardening_modulus: f64,
}

impl Default for BulkProps {
    /// Epoxy-like matrix.
    fn default() -> Self {
        Self {
            youngs_modulus: 3130.0,
            poisson_ratio: 0.37,
            yield_stress: 64.8,
            hardening_modulus: 100.0,
        }
    }
}

impl BulkProps {
    pub fn new(
        youngs_modulus: f64,
        poisson_ratio: f64,
        yield_stress: f64,
        hardening_modulus: f64,
    ) -> Result<Self> {
        let p = Self {
            youngs_modulus,
            poisson_ratio,
            yield_stress,
            hardening_modulus,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.youngs_modulus,
            self.poisson_ratio,
            self.yield_stress,
            self.hardening_modulus,
        ];
        if !all.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidProps("bulk properties must be finite".into()));
        }
        if self.youngs_modulus <= 0.0 {
            return Err(Error::InvalidProps("youngs_modulus must be > 0".into()));
        }
        if !(0.0..0.5).contains(&self.poisson_ratio) {
            return Err(Error::InvalidProps("poisson_ratio must lie in [0, 0.5)".into()));
        }
        if self.yield_stress <= 0.0 {
            return Err(Error::InvalidProps("yield_stress must be > 0".into()));
        }
        if self.hardening_modulus < 0.0 {
            return Err(Error::InvalidProps("hardening_modulus must be >= 0".into()));
        }
        Ok(())
    }

    pub fn shear_modulus(&self) -> f64 {
        self.youngs_modulus / (2.0 * (1.0 + self.poisson_ratio))
    }

    /// Current flow stress for a given equivalent plastic strain.
    #[inline]
    pub fn flow_stress(&self, equivalent_plastic_strain: f64) -> f64 {
        self.yield_stress + self.hardening_modulus * equivalent_plastic_strain
    }
}

/// Bilinear mixed-mode cohesive law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CzmProps {
    /// Mode I onset traction τn⁰ (MPa).
    pub normal_strength: f64,
    /// Mode II onset traction τs⁰ (MPa).
    pub shear_strength: f64,
    /// Mode I fracture energy (N/mm).
    pub g_ic: f64,
    /// Mode II fracture energy (N/mm).
    pub g_iic: f64,
    /// Benzeggagh-Kenane mode-interaction exponent.
    pub eta: f64,
    /// Penalty stiffness K (N/mm³).
    pub penalty_stiffness: f64,
}

impl Default for CzmProps {
    /// Fiber-matrix interface: τ⁰ = 60 MPa, G_Ic = 0.874 N/mm,
    /// G_IIc = 1.717 N/mm, η = 1, K = 5·10⁷ N/mm³.
    fn default() -> Self {
        Self {
            normal_strength: 60.0,
            shear_strength: 60.0,
            g_ic: 0.874,
            g_iic: 1.717,
            eta: 1.0,
            penalty_stiffness: 5.0e7,
        }
    }
}

impl CzmProps {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.normal_strength,
            self.shear_strength,
            self.g_ic,
            self.g_iic,
            self.eta,
            self.penalty_stiffness,
        ];
        if !all.iter().all(|v| v.is_finite() && *v > 0.0) {
            return Err(Error::InvalidProps(
                "cohesive properties must be finite and > 0".into(),
            ));
        }
        if self.normal_onset_jump() >= self.normal_final_jump() {
            return Err(Error::InvalidProps(
                "mode I onset jump must be below the final jump".into(),
            ));
        }
        if self.shear_onset_jump() >= self.shear_final_jump() {
            return Err(Error::InvalidProps(
                "mode II onset jump must be below the final jump".into(),
            ));
        }
        Ok(())
    }

    pub fn normal_onset_jump(&self) -> f64 {
        self.normal_strength / self.penalty_stiffness
    }

    pub fn shear_onset_jump(&self) -> f64 {
        self.shear_strength / self.penalty_stiffness
    }

    pub fn normal_final_jump(&self) -> f64 {
        2.0 * self.g_ic / self.normal_strength
    }

    pub fn shear_final_jump(&self) -> f64 {
        2.0 * self.g_iic / self.shear_strength
    }
}

/// Both material models of the micromodel.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct MaterialProps {
    pub bulk: BulkProps,
    pub cohesive: CzmProps,
}

impl MaterialProps {
    pub fn validate(&self) -> Result<()> {
        self.bulk.validate()?;
        self.cohesive.validate()
    }

    /// Reads properties from `key = value` pairs; missing keys keep defaults.
    ///
    /// Recognized keys: `youngs_modulus`, `poisson_ratio`, `yield_stress`,
    /// `hardening_modulus` (MPa), `normal_strength`, `shear_strength` (MPa),
    /// `g_ic`, `g_iic` (N/mm), `eta`, `penalty_stiffness` (N/mm³).
    pub fn from_key_values(kv: &KeyValues) -> Result<Self> {
        let mut p = Self::default();
        let b = &mut p.bulk;
        kv.read_f64("youngs_modulus", &mut b.youngs_modulus)?;
        kv.read_f64("poisson_ratio", &mut b.poisson_ratio)?;
        kv.read_f64("yield_stress", &mut b.yield_stress)?;
        kv.read_f64("hardening_modulus", &mut b.hardening_modulus)?;
        let c = &mut p.cohesive;
        kv.read_f64("normal_strength", &mut c.normal_strength)?;
        kv.read_f64("shear_strength", &mut c.shear_strength)?;
        kv.read_f64("g_ic", &mut c.g_ic)?;
        kv.read_f64("g_iic", &mut c.g_iic)?;
        kv.read_f64("eta", &mut c.eta)?;
        kv.read_f64("penalty_stiffness", &mut c.penalty_stiffness)?;
        p.validate()?;
        Ok(p)
    }
}
