//! Mode-I and mode-II traction envelopes of the cohesive law, plus one
//! unload/reload excursion. Prints CSV to stdout.

use prnn::constitutive::{czm_update, CohesiveState, CzmProps};

fn main() -> prnn::Result<()> {
    let props = CzmProps::default();
    println!(
        "# onset jumps {:.4e} / {:.4e} mm, final jumps {:.4e} / {:.4e} mm",
        props.normal_onset_jump(),
        props.shear_onset_jump(),
        props.normal_final_jump(),
        props.shear_final_jump()
    );
    println!("mode,jump_mm,traction_mpa,damage");
    for (mode, fin) in [("I", props.normal_final_jump()), ("II", props.shear_final_jump())] {
        let mut state = CohesiveState::default();
        let n = 400;
        for i in 0..=n {
            let u = 1.2 * fin * i as f64 / n as f64;
            let jump = if mode == "I" { [u, 0.0] } else { [0.0, u] };
            let (t, next) = czm_update(&jump, &state, &props)?;
            state = next;
            let traction = if mode == "I" { t[0] } else { t[1] };
            if i % 20 == 0 {
                println!("{mode},{u:.6e},{traction:.6e},{:.6}", state.damage);
            }
        }
    }

    // Load into softening, unload to zero, reload: the secant is retraced.
    let fin = props.normal_final_jump();
    let mut state = CohesiveState::default();
    let mut rows = Vec::new();
    let leg = |a: f64, b: f64| (0..=10).map(move |i| a + (b - a) * i as f64 / 10.0);
    for u in leg(0.0, 0.3 * fin).chain(leg(0.3 * fin, 0.0)).chain(leg(0.0, 0.5 * fin)) {
        let (t, next) = czm_update(&[u, 0.0], &state, &props)?;
        state = next;
        rows.push((u, t[0], state.damage));
    }
    println!("cycle,jump_mm,traction_mpa,damage");
    for (u, t, d) in rows {
        println!("I-cycle,{u:.6e},{t:.6e},{d:.6}");
    }
    Ok(())
}
