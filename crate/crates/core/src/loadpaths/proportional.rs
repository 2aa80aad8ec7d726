use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{Provenance, StrainPath};
use crate::error::{Error, Result};
use crate::linalg::{norm3, Vec3};

/// Strain magnitude increment per step.
pub const DEFAULT_STRAIN_INCREMENT: f64 = 1.67e-3;

/// Shape of the magnitude history.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MagnitudeFn {
    Monotonic,
    OneCycle,
    TwoCycles,
}

impl MagnitudeFn {
    pub fn from_cycles(cycles: usize) -> Result<Self> {
        match cycles {
            0 => Ok(Self::Monotonic),
            1 => Ok(Self::OneCycle),
            2 => Ok(Self::TwoCycles),
            n => Err(Error::Config(format!("cycles must be 0, 1 or 2, got {n}"))),
        }
    }

    pub fn cycles(self) -> usize {
        match self {
            Self::Monotonic => 0,
            Self::OneCycle => 1,
            Self::TwoCycles => 2,
        }
    }

    /// Default unload windows as 1-based inclusive step ranges: one cycle at
    /// 50% of the path for 20% of it, two cycles at 35% and 70% for 15% each.
    pub fn default_windows(self, n_steps: usize) -> Vec<(usize, usize)> {
        let window = |start: f64, len: f64| {
            let s = ((start * n_steps as f64).round() as usize).max(1);
            let l = ((len * n_steps as f64).round() as usize).max(1);
            (s, (s + l - 1).min(n_steps))
        };
        match self {
            Self::Monotonic => Vec::new(),
            Self::OneCycle => vec![window(0.5, 0.2)],
            Self::TwoCycles => vec![window(0.35, 0.15), window(0.7, 0.15)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProportionalConfig {
    /// Unit direction in strain space.
    pub direction: Vec3,
    /// Magnitude increment per step.
    pub step: f64,
    pub magnitude_fn: MagnitudeFn,
    /// 1-based inclusive unload windows; default placement when empty.
    pub unload_windows: Vec<(usize, usize)>,
    pub n_steps: usize,
}

impl ProportionalConfig {
    pub fn new(direction: Vec3, magnitude_fn: MagnitudeFn, n_steps: usize) -> Self {
        Self {
            direction,
            step: DEFAULT_STRAIN_INCREMENT,
            magnitude_fn,
            unload_windows: Vec::new(),
            n_steps,
        }
    }

    fn windows(&self) -> Vec<(usize, usize)> {
        if self.unload_windows.is_empty() {
            self.magnitude_fn.default_windows(self.n_steps)
        } else {
            self.unload_windows.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if (norm3(&self.direction) - 1.0).abs() > 1e-12 {
            return Err(Error::Config("direction must have unit norm".into()));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::Config("magnitude step must be > 0".into()));
        }
        Ok(())
    }
}

/// The 18 frozen loading directions: uniaxial, pure shear, biaxial and
/// axial-plus-shear combinations, each with both signs.
pub fn fundamental_directions() -> Vec<Vec3> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let base = [
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [r, r, 0.0],
        [r, -r, 0.0],
        [r, 0.0, r],
        [0.0, r, r],
        [r, 0.0, -r],
        [0.0, r, -r],
    ];
    base.iter()
        .flat_map(|d| [*d, [-d[0], -d[1], -d[2]]])
        .collect()
}

/// Normalized `N(0, 1)³` draw.
pub fn random_direction(seed: u64) -> Vec3 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v: Vec3 = [
            StandardNormal.sample(&mut rng),
            StandardNormal.sample(&mut rng),
            StandardNormal.sample(&mut rng),
        ];
        let n = norm3(&v);
        if n > 0.0 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Piecewise-linear magnitudes: `+s` per step, `−s` inside the 1-based
/// inclusive `windows`.
pub fn magnitude_series(n_steps: usize, s: f64, windows: &[(usize, usize)]) -> Result<Vec<f64>> {
    let mut sorted = windows.to_vec();
    sorted.sort_unstable();
    for (i, &(a, b)) in sorted.iter().enumerate() {
        if a < 1 || b < a || b > n_steps {
            return Err(Error::Config(format!(
                "unload window {a}..={b} outside 1..={n_steps}"
            )));
        }
        if i > 0 && a <= sorted[i - 1].1 {
            return Err(Error::Config("unload windows overlap".into()));
        }
    }
    let mut m = 0.0;
    let mut out = Vec::with_capacity(n_steps);
    for t in 1..=n_steps {
        let unloading = sorted.iter().any(|&(a, b)| (a..=b).contains(&t));
        m += if unloading { -s } else { s };
        if m < -1e-12 * s {
            return Err(Error::Config("unload window drives the magnitude below zero".into()));
        }
        out.push(m);
    }
    Ok(out)
}

pub fn proportional_path(
    config: &ProportionalConfig,
    provenance: Provenance,
    seed: u64,
) -> Result<StrainPath> {
    config.validate()?;
    let windows = config.windows();
    let m = magnitude_series(config.n_steps, config.step, &windows)?;
    let d = config.direction;
    Ok(StrainPath {
        steps: m.iter().map(|&a| [a * d[0], a * d[1], a * d[2]]).collect(),
        provenance,
        seed,
        config: format!(
            "proportional direction={:?} step={:e} cycles={} windows={:?} n_steps={}",
            d,
            config.step,
            config.magnitude_fn.cycles(),
            windows,
            config.n_steps
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eighteen_distinct_unit_directions() {
        let d = fundamental_directions();
        assert_eq!(d.len(), 18);
        for v in &d {
            assert!((norm3(v) - 1.0).abs() < 1e-12);
        }
        assert!(d.contains(&[1.0, 0.0, 0.0]));
        assert!(d.contains(&[-1.0, 0.0, 0.0]));
        for i in 0..18 {
            for j in 0..i {
                assert_ne!(d[i], d[j]);
            }
        }
    }

    #[test]
    fn random_direction_is_unit_and_seeded() {
        for seed in 0..100 {
            assert!((norm3(&random_direction(seed)) - 1.0).abs() < 1e-12);
        }
        assert_eq!(random_direction(3), random_direction(3));
    }

    #[test]
    fn magnitude_examples() {
        assert_eq!(magnitude_series(5, 1.0, &[]).unwrap(), vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(
            magnitude_series(6, 1.0, &[(3, 4)]).unwrap(),
            vec![1.0, 2.0, 1.0, 0.0, 1.0, 2.0]
        );
        let two = magnitude_series(12, 1.0, &[(3, 3), (7, 8)]).unwrap();
        assert_eq!(two, vec![1.0, 2.0, 1.0, 2.0, 3.0, 4.0, 3.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert!(magnitude_series(6, 1.0, &[(3, 4), (4, 5)]).is_err());
        assert!(magnitude_series(6, 1.0, &[(5, 9)]).is_err());
        assert!(magnitude_series(6, 1.0, &[(1, 2)]).is_err());
    }

    #[test]
    fn default_windows_fit() {
        for n in [10, 30, 100] {
            for f in [MagnitudeFn::OneCycle, MagnitudeFn::TwoCycles] {
                let w = f.default_windows(n);
                assert_eq!(w.len(), f.cycles());
                magnitude_series(n, 1.0, &w).unwrap();
            }
        }
        assert_eq!(MagnitudeFn::OneCycle.default_windows(30), vec![(15, 20)]);
    }

    #[test]
    fn proportional_paths() {
        let c = ProportionalConfig::new([1.0, 0.0, 0.0], MagnitudeFn::Monotonic, 4);
        let p = proportional_path(&c, Provenance::ProportionalFundamental, 0).unwrap();
        assert_eq!(p.steps[3], [4.0 * 1.67e-3, 0.0, 0.0]);
        let d = random_direction(9);
        let c = ProportionalConfig::new(d, MagnitudeFn::OneCycle, 30);
        let p = proportional_path(&c, Provenance::ProportionalRandom, 9).unwrap();
        for w in p.steps.windows(2) {
            let inc = [w[1][0] - w[0][0], w[1][1] - w[0][1], w[1][2] - w[0][2]];
            assert!((norm3(&inc) - 1.67e-3).abs() < 1e-15);
        }
        for s in &p.steps {
            let m = norm3(s);
            for k in 0..3 {
                assert!((s[k] - m * d[k]).abs() < 1e-12);
            }
        }
        let bad = ProportionalConfig::new([1.0, 1.0, 0.0], MagnitudeFn::Monotonic, 4);
        assert!(proportional_path(&bad, Provenance::ProportionalRandom, 0).is_err());
    }
}
