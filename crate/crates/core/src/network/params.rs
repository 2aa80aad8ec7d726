use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constitutive::MaterialProps;
use crate::error::{Error, Result};
use crate::linalg::{softplus, softplus_inverse, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Architecture {
    /// Bulk and cohesive points in one material layer.
    Prnn1,
    /// Damage added to the bulk strain inputs.
    Prnn2,
    /// Damage amplifies the bulk strain inputs.
    Prnn3,
}

impl Architecture {
    pub const ALL: [Architecture; 3] = [Self::Prnn1, Self::Prnn2, Self::Prnn3];

    pub fn uses_damage_coupling(self) -> bool {
        !matches!(self, Self::Prnn1)
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Prnn1 => "prnn1",
            Self::Prnn2 => "prnn2",
            Self::Prnn3 => "prnn3",
        })
    }
}

impl FromStr for Architecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "prnn1" => Ok(Self::Prnn1),
            "prnn2" => Ok(Self::Prnn2),
            "prnn3" => Ok(Self::Prnn3),
            _ => Err(Error::Config(format!("unknown architecture `{s}`"))),
        }
    }
}

/// Number of fictitious points per type. Bulk points take 3 strain
/// components, cohesive points 2 jump components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LayerSizes {
    pub n_bulk: usize,
    pub n_cohesive: usize,
}

impl LayerSizes {
    pub fn new(n_bulk: usize, n_cohesive: usize) -> Result<Self> {
        if n_bulk == 0 {
            return Err(Error::Config("at least one bulk point is required".into()));
        }
        Ok(Self { n_bulk, n_cohesive })
    }

    /// Four bulk points per cohesive point.
    pub fn with_ratio(n_cohesive: usize) -> Result<Self> {
        Self::new(4 * n_cohesive, n_cohesive)
    }

    pub fn honors_ratio(&self) -> bool {
        self.n_bulk == 4 * self.n_cohesive
    }

    pub fn total(&self) -> usize {
        self.n_bulk + self.n_cohesive
    }

    pub fn bulk_inputs(&self) -> usize {
        3 * self.n_bulk
    }

    pub fn cohesive_inputs(&self) -> usize {
        2 * self.n_cohesive
    }
}

impl fmt::Display for LayerSizes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}", self.n_bulk, self.n_cohesive)
    }
}

/// How encoded values become cohesive jumps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CohesiveMode {
    #[default]
    Linear,
    /// Leaky activation with learnable positive slope and threshold.
    Leaky,
}

/// All weights of a network plus the material properties of its points.
///
/// The encoder stacks bulk rows (`3·n_bulk`) above cohesive rows
/// (`2·n_cohesive`). `decoder` and the activation parameters hold raw values;
/// the effective values are their SoftPlus images. Biases are structurally
/// absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    pub architecture: Architecture,
    pub sizes: LayerSizes,
    pub cohesive_mode: CohesiveMode,
    pub encoder: Matrix,
    /// `3·n_bulk × n_cohesive`; empty for PRNN1.
    pub coupling: Matrix,
    pub decoder: Matrix,
    /// Raw slopes of the leaky activation, one per cohesive neuron.
    pub activation_weight: Vec<f64>,
    /// Raw thresholds of the leaky activation, one per cohesive neuron.
    pub activation_bias: Vec<f64>,
    pub materials: MaterialProps,
}

/// Offsets of each weight block in the flat trainable vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamLayout {
    pub encoder: Range<usize>,
    pub coupling: Range<usize>,
    pub decoder: Range<usize>,
    pub activation_weight: Range<usize>,
    pub activation_bias: Range<usize>,
}

impl ParamLayout {
    pub fn len(&self) -> usize {
        self.activation_bias.end
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Initial leaky slope.
const INIT_ACTIVATION_SLOPE: f64 = 1.0;
/// Initial leaky threshold (mm).
const INIT_ACTIVATION_THRESHOLD: f64 = 1e-3;

impl NetworkParams {
    pub fn decoder_inputs(architecture: Architecture, sizes: LayerSizes) -> usize {
        match architecture {
            Architecture::Prnn1 => sizes.bulk_inputs() + sizes.cohesive_inputs(),
            _ => sizes.bulk_inputs(),
        }
    }

    /// All-zero weights of the right shapes.
    pub fn zeros(
        architecture: Architecture,
        sizes: LayerSizes,
        cohesive_mode: CohesiveMode,
        materials: MaterialProps,
    ) -> Self {
        let rows = sizes.bulk_inputs() + sizes.cohesive_inputs();
        let coupling = if architecture.uses_damage_coupling() {
            Matrix::zeros(sizes.bulk_inputs(), sizes.n_cohesive)
        } else {
            Matrix::zeros(0, 0)
        };
        let n_act = match cohesive_mode {
            CohesiveMode::Linear => 0,
            CohesiveMode::Leaky => sizes.cohesive_inputs(),
        };
        Self {
            architecture,
            sizes,
            cohesive_mode,
            encoder: Matrix::zeros(rows, 3),
            coupling,
            decoder: Matrix::zeros(3, Self::decoder_inputs(architecture, sizes)),
            activation_weight: vec![softplus_inverse(INIT_ACTIVATION_SLOPE); n_act],
            activation_bias: vec![softplus_inverse(INIT_ACTIVATION_THRESHOLD); n_act],
            materials,
        }
    }

    /// Random initialization: every weight matrix drawn from `U(−r, r)` with
    /// `r = 1/√fan_in`.
    pub fn init(
        architecture: Architecture,
        sizes: LayerSizes,
        cohesive_mode: CohesiveMode,
        materials: MaterialProps,
        seed: u64,
    ) -> Result<Self> {
        materials.validate()?;
        let mut p = Self::zeros(architecture, sizes, cohesive_mode, materials);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fill = |m: &mut Matrix, rng: &mut ChaCha8Rng| {
            if m.is_empty() {
                return;
            }
            let r = 1.0 / (m.cols() as f64).sqrt();
            for v in m.as_mut_slice() {
                *v = rng.gen_range(-r..=r);
            }
        };
        fill(&mut p.encoder, &mut rng);
        fill(&mut p.coupling, &mut rng);
        fill(&mut p.decoder, &mut rng);
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.materials.validate()?;
        let s = self.sizes;
        LayerSizes::new(s.n_bulk, s.n_cohesive)?;
        let rows = s.bulk_inputs() + s.cohesive_inputs();
        let shape = |m: &Matrix, r: usize, c: usize, what: &str| -> Result<()> {
            if m.rows() != r || m.cols() != c {
                return Err(Error::Dimension(format!(
                    "{what} is {}x{}, expected {r}x{c}",
                    m.rows(),
                    m.cols()
                )));
            }
            Ok(())
        };
        shape(&self.encoder, rows, 3, "encoder")?;
        if self.architecture.uses_damage_coupling() {
            shape(&self.coupling, s.bulk_inputs(), s.n_cohesive, "coupling")?;
        } else {
            shape(&self.coupling, 0, 0, "coupling")?;
        }
        shape(
            &self.decoder,
            3,
            Self::decoder_inputs(self.architecture, s),
            "decoder",
        )?;
        let n_act = match self.cohesive_mode {
            CohesiveMode::Linear => 0,
            CohesiveMode::Leaky => s.cohesive_inputs(),
        };
        if self.activation_weight.len() != n_act || self.activation_bias.len() != n_act {
            return Err(Error::Dimension(format!(
                "expected {n_act} activation parameters of each kind"
            )));
        }
        if !self.to_flat().iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("network weights".into()));
        }
        Ok(())
    }

    pub fn layout(&self) -> ParamLayout {
        let e = self.encoder.len();
        let c = e + self.coupling.len();
        let d = c + self.decoder.len();
        let w = d + self.activation_weight.len();
        let b = w + self.activation_bias.len();
        ParamLayout {
            encoder: 0..e,
            coupling: e..c,
            decoder: c..d,
            activation_weight: d..w,
            activation_bias: w..b,
        }
    }

    pub fn n_params(&self) -> usize {
        self.layout().len()
    }

    /// Trainable weights in layout order.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.n_params());
        v.extend_from_slice(self.encoder.as_slice());
        v.extend_from_slice(self.coupling.as_slice());
        v.extend_from_slice(self.decoder.as_slice());
        v.extend_from_slice(&self.activation_weight);
        v.extend_from_slice(&self.activation_bias);
        v
    }

    pub fn set_flat(&mut self, flat: &[f64]) -> Result<()> {
        let l = self.layout();
        if flat.len() != l.len() {
            return Err(Error::Dimension(format!(
                "{} values for {} parameters",
                flat.len(),
                l.len()
            )));
        }
        self.encoder.as_mut_slice().copy_from_slice(&flat[l.encoder]);
        self.coupling.as_mut_slice().copy_from_slice(&flat[l.coupling]);
        self.decoder.as_mut_slice().copy_from_slice(&flat[l.decoder]);
        self.activation_weight.copy_from_slice(&flat[l.activation_weight]);
        self.activation_bias.copy_from_slice(&flat[l.activation_bias]);
        Ok(())
    }

    /// SoftPlus image of the raw decoder weights.
    pub fn effective_decoder(&self) -> Matrix {
        self.decoder.map(softplus)
    }

    /// Positive `(w, b)` of cohesive neuron `k` in leaky mode.
    pub fn activation(&self, k: usize) -> (f64, f64) {
        (
            softplus(self.activation_weight[k]),
            softplus(self.activation_bias[k]),
        )
    }
}
