//! Strain path generators: a Gaussian-process path and proportional paths
//! along a fundamental and a random direction, monotonic and with one or two
//! unloading cycles. Prints a short summary and the first path as CSV.

use prnn::loadpaths::{
    fundamental_directions, gp_covariance, proportional_path, random_direction, GpConfig,
    GpSampler, MagnitudeFn, ProportionalConfig, Provenance, StrainPath,
};

fn summarize(label: &str, p: &StrainPath) {
    let peak = p
        .steps
        .iter()
        .map(|e| e.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    println!("{label:<28} {} steps, peak |ε| = {peak:.4e}", p.len());
}

fn main() -> prnn::Result<()> {
    let gp = GpConfig::default();
    println!(
        "GP kernel: k(0) = {:.4e}, k(ℓ) = {:.4e}",
        gp_covariance(0, 0, &gp),
        gp_covariance(0, gp.length_scale as usize, &gp)
    );
    let sampler = GpSampler::new(&gp)?;
    let gp_path = sampler.sample(7);
    summarize("gp (seed 7)", &gp_path);

    let dirs = fundamental_directions();
    println!("{} fundamental directions", dirs.len());
    for cycles in 0..=2 {
        let f = MagnitudeFn::from_cycles(cycles)?;
        let cfg = ProportionalConfig::new(dirs[0], f, 30);
        let p = proportional_path(&cfg, Provenance::ProportionalFundamental, 0)?;
        summarize(&format!("fundamental, {cycles} cycles"), &p);
        let cfg = ProportionalConfig::new(random_direction(11), f, 30);
        let p = proportional_path(&cfg, Provenance::ProportionalRandom, 11)?;
        summarize(&format!("random, {cycles} cycles"), &p);
    }

    let f = MagnitudeFn::from_cycles(2)?;
    let p = proportional_path(
        &ProportionalConfig::new(random_direction(3), f, 40),
        Provenance::ProportionalRandom,
        3,
    )?;
    println!("step,eps_xx,eps_yy,gamma_xy");
    for (t, e) in p.steps.iter().enumerate() {
        println!("{},{:.6e},{:.6e},{:.6e}", t + 1, e[0], e[1], e[2]);
    }
    Ok(())
}
