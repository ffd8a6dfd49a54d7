//! Physical parameters and Fock-space truncation.
//!
//! Every rate and detuning is expressed in units of the mechanical
//! frequency, which is kept as an explicit field (`omega_m`, normally 1).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rates, detunings and drive strengths of the two-cavity system.
///
/// Detunings are `Δ_j = ω_j − ω_L` in the frame rotating with the common
/// pump frequency. Pump amplitudes are real and non-negative; their phase is
/// fixed by the `iE(a† − a)` form of the drive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemParams {
    pub delta1: f64,
    pub delta2: f64,
    pub g: f64,
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "E1")]
    pub e1: f64,
    #[serde(rename = "E2")]
    pub e2: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub gamma: f64,
    pub nbar: f64,
    #[serde(default = "unit_frequency")]
    pub omega_m: f64,
}

fn unit_frequency() -> f64 {
    1.0
}

impl Default for SystemParams {
    /// Shared parameters of the spectrum and `g²` scans: `g = 0.5`,
    /// `κ₁ = κ₂ = 0.3`, `E₁ = E₂ = 0.001`, `γ = 0.005`, no tunneling.
    fn default() -> Self {
        SystemParams {
            delta1: 0.25,
            delta2: 0.4,
            g: 0.5,
            j: 0.0,
            e1: 0.001,
            e2: 0.001,
            kappa1: 0.3,
            kappa2: 0.3,
            gamma: 0.005,
            nbar: 0.0,
            omega_m: 1.0,
        }
    }
}

/// Names accepted by [`SystemParams::set`] and [`SystemParams::get`].
pub const PARAM_NAMES: [&str; 11] = [
    "delta1", "delta2", "g", "J", "E1", "E2", "kappa1", "kappa2", "gamma", "nbar", "omega_m",
];

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in self.named_values() {
            if !value.is_finite() {
                return Err(Error::param(name, "must be finite"));
            }
        }
        if self.kappa1 <= 0.0 {
            return Err(Error::param("kappa1", "cavity decay rate must be positive"));
        }
        if self.kappa2 <= 0.0 {
            return Err(Error::param("kappa2", "cavity decay rate must be positive"));
        }
        if self.omega_m <= 0.0 {
            return Err(Error::param("omega_m", "mechanical frequency must be positive"));
        }
        for (name, value) in [
            ("gamma", self.gamma),
            ("nbar", self.nbar),
            ("g", self.g),
            ("J", self.j),
            ("E1", self.e1),
            ("E2", self.e2),
        ] {
            if value < 0.0 {
                return Err(Error::param(name, "must be non-negative"));
            }
        }
        Ok(())
    }

    fn named_values(&self) -> [(&'static str, f64); 11] {
        [
            ("delta1", self.delta1),
            ("delta2", self.delta2),
            ("g", self.g),
            ("J", self.j),
            ("E1", self.e1),
            ("E2", self.e2),
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("gamma", self.gamma),
            ("nbar", self.nbar),
            ("omega_m", self.omega_m),
        ]
    }

    /// Kerr shift `Δ_g = g²/ω_m`.
    pub fn delta_g(&self) -> f64 {
        self.g * self.g / self.omega_m
    }

    /// Dimensionless polaron displacement `λ = g/ω_m`.
    pub fn lambda(&self) -> f64 {
        self.g / self.omega_m
    }

    /// Kerr-shifted detuning `Δ̃_j = Δ_j − Δ_g` of cavity `j` (1 or 2).
    pub fn shifted_detuning(&self, cavity: usize) -> f64 {
        self.detuning(cavity) - self.delta_g()
    }

    pub fn detuning(&self, cavity: usize) -> f64 {
        match cavity {
            1 => self.delta1,
            2 => self.delta2,
            _ => panic!("cavity index must be 1 or 2, got {cavity}"),
        }
    }

    pub fn pump(&self, cavity: usize) -> f64 {
        match cavity {
            1 => self.e1,
            2 => self.e2,
            _ => panic!("cavity index must be 1 or 2, got {cavity}"),
        }
    }

    pub fn kappa(&self, cavity: usize) -> f64 {
        match cavity {
            1 => self.kappa1,
            2 => self.kappa2,
            _ => panic!("cavity index must be 1 or 2, got {cavity}"),
        }
    }

    /// Exchanges the parameter sets `(Δ, E, κ)` of the two cavities.
    pub fn swapped(&self) -> Self {
        SystemParams {
            delta1: self.delta2,
            delta2: self.delta1,
            e1: self.e2,
            e2: self.e1,
            kappa1: self.kappa2,
            kappa2: self.kappa1,
            ..self.clone()
        }
    }

    pub fn get(&self, name: &str) -> Result<f64> {
        self.named_values()
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::Config(format!("unknown parameter `{name}`")))
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        let slot = match name {
            "delta1" => &mut self.delta1,
            "delta2" => &mut self.delta2,
            "g" => &mut self.g,
            "J" => &mut self.j,
            "E1" => &mut self.e1,
            "E2" => &mut self.e2,
            "kappa1" => &mut self.kappa1,
            "kappa2" => &mut self.kappa2,
            "gamma" => &mut self.gamma,
            "nbar" => &mut self.nbar,
            "omega_m" => &mut self.omega_m,
            _ => return Err(Error::Config(format!("unknown parameter `{name}`"))),
        };
        *slot = value;
        Ok(())
    }

    pub fn with(mut self, name: &str, value: f64) -> Result<Self> {
        self.set(name, value)?;
        Ok(self)
    }
}

/// Default bound on the Hilbert-space dimension `n_cav1·n_cav2·n_mech`.
pub const DEFAULT_MAX_DIM: usize = 1024;

/// Fock-space cutoffs for cavity 1, cavity 2 and the mechanical mode.
///
/// Basis states are ordered `cavity-1 ⊗ cavity-2 ⊗ mechanics`, with the
/// mechanical index running fastest:
/// `index(n1, n2, m) = (n1·n_cav2 + n2)·n_mech + m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeLayout {
    pub n_cav1: usize,
    pub n_cav2: usize,
    pub n_mech: usize,
    #[serde(default = "default_max_dim")]
    pub max_dim: usize,
}

fn default_max_dim() -> usize {
    DEFAULT_MAX_DIM
}

impl Default for ModeLayout {
    fn default() -> Self {
        ModeLayout::new(4, 4, 16)
    }
}

impl ModeLayout {
    pub const fn new(n_cav1: usize, n_cav2: usize, n_mech: usize) -> Self {
        ModeLayout {
            n_cav1,
            n_cav2,
            n_mech,
            max_dim: DEFAULT_MAX_DIM,
        }
    }

    pub fn with_max_dim(mut self, max_dim: usize) -> Self {
        self.max_dim = max_dim;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [
            ("n_cav1", self.n_cav1),
            ("n_cav2", self.n_cav2),
            ("n_mech", self.n_mech),
        ] {
            if n < 2 {
                return Err(Error::InvalidLayout(format!(
                    "{name} = {n}; every cutoff must be at least 2"
                )));
            }
        }
        let dim = self.dim();
        if dim > self.max_dim {
            return Err(Error::DimensionLimit {
                dim,
                limit: self.max_dim,
            });
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n_cav1 * self.n_cav2 * self.n_mech
    }

    /// Largest total photon number `n1 + n2` representable.
    pub fn max_photons(&self) -> usize {
        self.n_cav1 + self.n_cav2 - 2
    }

    pub fn index(&self, n1: usize, n2: usize, m: usize) -> usize {
        debug_assert!(n1 < self.n_cav1 && n2 < self.n_cav2 && m < self.n_mech);
        (n1 * self.n_cav2 + n2) * self.n_mech + m
    }

    /// Inverse of [`ModeLayout::index`]: `(n1, n2, m)`.
    pub fn occupation(&self, index: usize) -> (usize, usize, usize) {
        let m = index % self.n_mech;
        let rest = index / self.n_mech;
        (rest / self.n_cav2, rest % self.n_cav2, m)
    }

    pub fn total_photons(&self, index: usize) -> usize {
        let (n1, n2, _) = self.occupation(index);
        n1 + n2
    }
}
