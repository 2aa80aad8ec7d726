//! Strain-controlled uniaxial tension/compression cycle of the plane-stress
//! J2 model: loading, yielding with hardening, elastic unloading, reverse
//! yielding. Prints CSV to stdout.

use prnn::constitutive::{j2_update, von_mises, yield_function, BulkProps, BulkState};

fn main() -> prnn::Result<()> {
    let props = BulkProps::default();
    let amplitude = 0.05;
    let n = 50;
    let mut targets = Vec::new();
    for i in 0..=n {
        targets.push(amplitude * i as f64 / n as f64);
    }
    for i in 1..=2 * n {
        targets.push(amplitude * (1.0 - i as f64 / n as f64));
    }
    for i in 1..=n {
        targets.push(-amplitude + amplitude * i as f64 / n as f64);
    }

    let mut state = BulkState::default();
    let mut lateral = 0.0;
    println!("eps_xx,eps_yy,sigma_xx,sigma_yy,von_mises,eq_plastic_strain,yield_fn");
    for &exx in &targets {
        // Uniaxial stress: solve sigma_yy = 0 for the free lateral strain by secant iterations.
        let mut a = lateral - 1e-3;
        let mut b = lateral + 1e-3;
        let f = |eyy: f64| j2_update(&[exx, eyy, 0.0], &state, &props).map(|(s, _)| s[1]);
        let (mut fa, mut fb) = (f(a)?, f(b)?);
        for _ in 0..60 {
            if (fb - fa).abs() < 1e-300 {
                break;
            }
            let c = b - fb * (b - a) / (fb - fa);
            a = b;
            fa = fb;
            b = c;
            fb = f(b)?;
            if fb.abs() < 1e-10 {
                break;
            }
        }
        lateral = b;
        let (s, next) = j2_update(&[exx, lateral, 0.0], &state, &props)?;
        state = next;
        println!(
            "{exx:.6e},{lateral:.6e},{:.6e},{:.3e},{:.6e},{:.6e},{:.3e}",
            s[0],
            s[1],
            von_mises(&s),
            state.equivalent_plastic_strain,
            yield_function(&s, &state, &props)
        );
    }
    Ok(())
}
