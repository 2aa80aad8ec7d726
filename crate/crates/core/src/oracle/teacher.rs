use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::constitutive::{czm_update, j2_update, BulkState, CohesiveState, MaterialProps};
use crate::error::{Error, Result};
use crate::io::sha256_hex;
use crate::linalg::{softplus, softplus_inverse, Matrix, Vec3};
use crate::loadpaths::{GpConfig, GpSampler, StrainPath};
use crate::network::{Architecture, CohesiveMode, LayerSizes, NetworkParams};

/// Damage-activity check run while building a teacher.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub gp: GpConfig,
    pub n_paths: usize,
    /// A point counts as active once its damage exceeds this.
    pub damage_threshold: f64,
    /// Required fraction of active cohesive points on a path.
    pub point_fraction: f64,
    /// Required fraction of paths meeting `point_fraction`.
    pub path_fraction: f64,
    /// Factor applied to the jump length scale per failed round.
    pub growth: f64,
    pub max_rounds: usize,
}

impl Default for Calibration {
    fn default() -> Self {
        Self {
            gp: GpConfig {
                rng_seed: 0,
                ..GpConfig::default()
            },
            n_paths: 24,
            damage_threshold: 0.1,
            point_fraction: 0.25,
            path_fraction: 0.5,
            growth: 1.5,
            max_rounds: 25,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeacherConfig {
    pub n_bulk: usize,
    pub n_cohesive: usize,
    /// Amplitude of the random perturbation of each bulk localization map.
    pub bulk_spread: f64,
    /// Initial strain-to-jump length scale (mm).
    pub cohesive_length: f64,
    /// Total negative damage coupling seen by each bulk point at full damage.
    pub coupling_strength: f64,
    pub materials: MaterialProps,
    pub rng_seed: u64,
    /// Skipped when absent.
    pub calibration: Option<Calibration>,
}

impl Default for TeacherConfig {
    fn default() -> Self {
        Self {
            n_bulk: 64,
            n_cohesive: 16,
            bulk_spread: 0.3,
            cohesive_length: 0.5,
            coupling_strength: 2.0,
            materials: MaterialProps::default(),
            rng_seed: 2024,
            calibration: Some(Calibration::default()),
        }
    }
}

impl TeacherConfig {
    pub fn validate(&self) -> Result<()> {
        self.materials.validate()?;
        if self.n_bulk == 0 {
            return Err(Error::Config("teacher needs at least one bulk point".into()));
        }
        let positive = [self.cohesive_length, self.coupling_strength + 1.0];
        if !positive.iter().all(|v| *v > 0.0 && v.is_finite())
            || !(self.bulk_spread >= 0.0 && self.bulk_spread.is_finite())
        {
            return Err(Error::Config("teacher scales must be finite and positive".into()));
        }
        if let Some(c) = &self.calibration {
            if c.n_paths == 0 || c.growth <= 1.0 || c.max_rounds == 0 {
                return Err(Error::Config("invalid teacher calibration settings".into()));
            }
        }
        Ok(())
    }
}

/// A frozen teacher aggregate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Teacher {
    pub config: TeacherConfig,
    /// Strain-to-jump length scale after calibration (mm).
    pub cohesive_length: f64,
    /// Bulk localization maps, `3·n_bulk × 3`.
    pub bulk_maps: Matrix,
    /// Interface orientation of each cohesive point (rad).
    pub angles: Vec<f64>,
    /// Per-point multiplier of `cohesive_length`.
    pub length_factors: Vec<f64>,
    /// Damage-to-amplifier coupling, `3·n_bulk × n_cohesive`, non-positive.
    pub coupling: Matrix,
    /// Positive, summing to one.
    pub volume_weights: Vec<f64>,
}

/// Homogenized stresses and cohesive damage along a path.
#[derive(Debug, Clone, PartialEq)]
pub struct TeacherResponse {
    pub stresses: Vec<Vec3>,
    /// `damage[t][k]`.
    pub damage: Vec<Vec<f64>>,
}

/// Draws and calibrates a teacher.
pub fn teacher_build(config: &TeacherConfig) -> Result<Teacher> {
    config.validate()?;
    let nb = config.n_bulk;
    let nc = config.n_cohesive;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let norm = softplus(1.0);
    let bulk_maps = {
        let mut m = Matrix::zeros(3 * nb, 3);
        for j in 0..nb {
            for r in 0..3 {
                for c in 0..3 {
                    let eye = if r == c { 1.0 } else { 0.0 };
                    let noise = rng.gen_range(-1.0..1.0);
                    m.set(3 * j + r, c, (eye + config.bulk_spread * noise) / norm);
                }
            }
        }
        m
    };
    let angles: Vec<f64> = (0..nc).map(|_| rng.gen_range(0.0..std::f64::consts::PI)).collect();
    let length_factors: Vec<f64> = (0..nc).map(|_| rng.gen_range(0.5..1.5)).collect();
    let mut coupling = Matrix::zeros(3 * nb, nc);
    if nc > 0 {
        for j in 0..nb {
            let raw: Vec<f64> = (0..nc).map(|_| rng.gen_range(0.0f64..1.0).powi(3)).collect();
            let total: f64 = raw.iter().sum::<f64>().max(f64::MIN_POSITIVE);
            for r in 0..3 {
                for (k, w) in raw.iter().enumerate() {
                    coupling.set(3 * j + r, k, -config.coupling_strength * w / total);
                }
            }
        }
    }
    let raw_v: Vec<f64> = (0..nb).map(|_| rng.gen_range(0.5..1.5)).collect();
    let total: f64 = raw_v.iter().sum();
    let volume_weights = raw_v.iter().map(|v| v / total).collect();

    let mut teacher = Teacher {
        config: config.clone(),
        cohesive_length: config.cohesive_length,
        bulk_maps,
        angles,
        length_factors,
        coupling,
        volume_weights,
    };
    if let (Some(cal), true) = (config.calibration, nc > 0) {
        calibrate(&mut teacher, &cal)?;
    }
    Ok(teacher)
}

fn calibrate(teacher: &mut Teacher, cal: &Calibration) -> Result<()> {
    let sampler = GpSampler::new(&cal.gp)?;
    let paths: Vec<StrainPath> = (0..cal.n_paths as u64)
        .map(|i| sampler.sample(cal.gp.rng_seed.wrapping_add(i)))
        .collect();
    for round in 0..cal.max_rounds {
        let mut passing = 0;
        for p in &paths {
            let r = teacher_respond(p, teacher)?;
            let last = r.damage.last().map(Vec::as_slice).unwrap_or(&[]);
            let active = last.iter().filter(|d| **d > cal.damage_threshold).count();
            if active as f64 >= cal.point_fraction * teacher.config.n_cohesive as f64 {
                passing += 1;
            }
        }
        let frac = passing as f64 / paths.len() as f64;
        log::info!(
            "teacher calibration round {round}: length {:.4e} mm, {:.0}% of paths active",
            teacher.cohesive_length,
            100.0 * frac
        );
        if frac >= cal.path_fraction {
            return Ok(());
        }
        teacher.cohesive_length *= cal.growth;
    }
    Err(Error::Calibration(format!(
        "no sufficient damage activity after {} rounds; increase cohesive_length",
        cal.max_rounds
    )))
}

impl Teacher {
    pub fn n_bulk(&self) -> usize {
        self.config.n_bulk
    }

    pub fn n_cohesive(&self) -> usize {
        self.config.n_cohesive
    }

    /// Strain-to-jump rows of cohesive point `k`.
    pub fn jump_map(&self, k: usize) -> [[f64; 3]; 2] {
        let (s, c) = self.angles[k].sin_cos();
        let l = self.cohesive_length * self.length_factors[k];
        [
            [l * c * c, l * s * s, l * c * s],
            [-l * c * s, l * c * s, 0.5 * l * (c * c - s * s)],
        ]
    }

    /// SHA-256 of the frozen teacher.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("teacher serializes");
        sha256_hex(&bytes)
    }

    /// The same aggregate expressed as PRNN3 weights. Decoder entries with no
    /// counterpart in the average are pushed to a large negative raw value.
    pub fn as_network_params(&self) -> Result<NetworkParams> {
        let nb = self.n_bulk();
        let nc = self.n_cohesive();
        let sizes = LayerSizes::new(nb, nc)?;
        let mut p = NetworkParams::zeros(
            Architecture::Prnn3,
            sizes,
            CohesiveMode::Linear,
            self.config.materials,
        );
        for r in 0..3 * nb {
            for c in 0..3 {
                p.encoder.set(r, c, self.bulk_maps.get(r, c));
            }
        }
        for k in 0..nc {
            let m = self.jump_map(k);
            for (i, row) in m.iter().enumerate() {
                for c in 0..3 {
                    p.encoder.set(3 * nb + 2 * k + i, c, row[c]);
                }
            }
        }
        p.coupling = self.coupling.clone();
        p.decoder = Matrix::from_fn(3, 3 * nb, |i, col| {
            if col % 3 == i {
                softplus_inverse(self.volume_weights[col / 3])
            } else {
                -60.0
            }
        });
        Ok(p)
    }
}

/// Volume-averaged stress and damage history of the teacher along `path`.
pub fn teacher_respond(path: &StrainPath, teacher: &Teacher) -> Result<TeacherResponse> {
    let nb = teacher.n_bulk();
    let nc = teacher.n_cohesive();
    let props = &teacher.config.materials;
    let maps: Vec<[[f64; 3]; 2]> = (0..nc).map(|k| teacher.jump_map(k)).collect();
    let mut bulk = vec![BulkState::default(); nb];
    let mut coh = vec![CohesiveState::default(); nc];
    let mut d = vec![0.0; nc];
    let mut stresses = Vec::with_capacity(path.len());
    let mut damage = Vec::with_capacity(path.len());
    for eps in &path.steps {
        for k in 0..nc {
            let m = &maps[k];
            let jump = [
                m[0][0] * eps[0] + m[0][1] * eps[1] + m[0][2] * eps[2],
                m[1][0] * eps[0] + m[1][1] * eps[1] + m[1][2] * eps[2],
            ];
            let (_, st) = czm_update(&jump, &coh[k], &props.cohesive)?;
            coh[k] = st;
            d[k] = st.damage;
        }
        let mut avg = [0.0; 3];
        for j in 0..nb {
            let mut local = [0.0; 3];
            for r in 0..3 {
                let row = 3 * j + r;
                let a = teacher.bulk_maps.row(row);
                let u = a[0] * eps[0] + a[1] * eps[1] + a[2] * eps[2];
                let pre = 1.0
                    + teacher
                        .coupling
                        .row(row)
                        .iter()
                        .zip(&d)
                        .map(|(c, dk)| c * dk)
                        .sum::<f64>();
                local[r] = softplus(pre) * u;
            }
            let (s, st) = j2_update(&local, &bulk[j], &props.bulk)?;
            bulk[j] = st;
            let v = teacher.volume_weights[j];
            for c in 0..3 {
                avg[c] += v * s[c];
            }
        }
        stresses.push(avg);
        damage.push(d.clone());
    }
    Ok(TeacherResponse { stresses, damage })
}
